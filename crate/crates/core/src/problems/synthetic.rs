//! Random sparse blocks with exactly known rank deficiency.
//!
//! All random values are multiples of 1/8 and all combination coefficients
//! are in `{±½, ±1, ±2}`, so dependent rows of `B` are formed without
//! rounding and `rank(B) = m − d` holds exactly in floating point.

use super::{SplitMix64, SyntheticParams};
use crate::error::Result;
use crate::sparse::{SparseMatrix, TripletBuffer};

/// Nonzero multiple of 1/8 in `[−2, 2]`.
fn dyadic(rng: &mut SplitMix64) -> f64 {
    let k = rng.below(32) as f64 + 1.0;
    let sign = if rng.below(2) == 0 { 1.0 } else { -1.0 };
    sign * k / 16.0
}

fn coefficient(rng: &mut SplitMix64) -> f64 {
    [0.5, 1.0, 2.0, -0.5, -1.0, -2.0][rng.below(6) as usize]
}

pub(crate) fn blocks(p: &SyntheticParams, symmetric_a: bool) -> Result<(SparseMatrix, SparseMatrix)> {
    let mut rng = SplitMix64::new(p.seed);
    let n = p.n;

    // A: diagonally dominant symmetric part plus an optional skew part.
    let mut off = vec![Vec::new(); n];
    let mut sym = TripletBuffer::new(n, n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.next_f64() < p.density {
                let v = dyadic(&mut rng);
                sym.push(i, j, v);
                sym.push(j, i, v);
                off[i].push(v.abs());
                off[j].push(v.abs());
            }
        }
    }
    for (i, row) in off.iter().enumerate() {
        sym.push(i, i, 1.0 + row.iter().sum::<f64>());
    }
    let mut a = sym.to_csr()?;
    if !symmetric_a {
        let mut skew = TripletBuffer::new(n, n);
        for i in 0..n {
            for j in i + 1..n {
                if rng.next_f64() < p.density {
                    let v = dyadic(&mut rng);
                    skew.push(i, j, v);
                    skew.push(j, i, -v);
                }
            }
        }
        a = a.add_scaled(1.0, &skew.to_csr()?, 1.0)?;
    }

    // B₀: full row rank through distinct pivot columns that no other row touches.
    let r = p.m - p.deficiency;
    let mut cols: Vec<usize> = (0..n).collect();
    for k in (1..n).rev() {
        cols.swap(k, rng.below(k as u64 + 1) as usize);
    }
    let (pivots, free) = cols.split_at(r);
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(p.m);
    for &pc in pivots {
        let mut row = vec![0.0; n];
        row[pc] = 2.0 + rng.below(8) as f64 / 8.0;
        for &c in free {
            if rng.next_f64() < p.density {
                row[c] = dyadic(&mut rng);
            }
        }
        rows.push(row);
    }
    // d dependent rows, each a combination of two or three independent ones.
    for _ in 0..p.deficiency {
        let mut row = vec![0.0; n];
        for _ in 0..2 + rng.below(2) {
            let src = rng.below(r as u64) as usize;
            let c = coefficient(&mut rng);
            for (x, y) in row.iter_mut().zip(&rows[src]) {
                *x += c * y;
            }
        }
        rows.push(row);
    }
    for k in (1..rows.len()).rev() {
        rows.swap(k, rng.below(k as u64 + 1) as usize);
    }
    let mut b = TripletBuffer::new(p.m, n);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v != 0.0 {
                b.push(i, j, v);
            }
        }
    }
    Ok((a, b.to_csr()?))
}
