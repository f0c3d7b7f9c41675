//! SplitMix64: a tiny, fully specified generator, so seeded instances can be
//! regenerated bit for bit from any language.
//!
//! ```text
//! state ← state + 0x9E3779B97F4A7C15
//! z ← (state ⊕ (state ≫ 30)) · 0xBF58476D1CE4E5B9
//! z ← (z ⊕ (z ≫ 27)) · 0x94D049BB133111EB
//! output z ⊕ (z ≫ 31)
//! ```
//!
//! Uniform integers in `[0, k)` use `next_u64() % k`; uniform reals in
//! `[0, 1)` use the top 53 bits: `(next_u64() ≫ 11) · 2⁻⁵³`.

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, k)`; `k` must be positive.
    pub fn below(&mut self, k: u64) -> u64 {
        self.next_u64() % k
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}
