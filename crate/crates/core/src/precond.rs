//! The preconditioner `M = ½(Ω + 𝒜)` in block-factored form
//!
//! ```text
//!   M⁻¹ = 2 [ I  −(H+A)⁻¹Bᵀ ] [ (H+A)⁻¹  0  ] [ I  0 ]
//!           [ 0      I      ] [   0     S⁻¹ ] [ B  I ]
//! ```
//!
//! with Schur complement `S = Q + B(H+A)⁻¹Bᵀ`.

use crate::dense::{lu_factor, DenseMatrix, LuFactors};
use crate::error::{Error, Result};
use crate::krylov::{gmres_restarted, GmresConfig, LinearOperator};
use crate::saddle::{SaddlePointSystem, ShiftOperators};
use crate::sparse::SparseMatrix;
use crate::DENSE_CAP;

/// How `S z₂ = w₂` is solved inside every application.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InnerStrategy {
    /// Assemble `S` densely and LU-factor it.
    Direct,
    /// Unpreconditioned restarted GMRES on [`MgssPreconditioner::schur_matvec`]
    /// from a zero guess.
    IterativeSchur {
        restart: usize,
        tol: f64,
        max_iters: usize,
    },
}

impl InnerStrategy {
    /// GMRES(`restart`) reducing the residual by `1e-5`, capped at 1000 steps.
    pub fn iterative(restart: usize) -> Self {
        InnerStrategy::IterativeSchur {
            restart,
            tol: 1e-5,
            max_iters: 1000,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            InnerStrategy::Direct => "direct",
            InnerStrategy::IterativeSchur { .. } => "gmres",
        }
    }
}

#[derive(Debug, Clone)]
enum SchurSolver {
    Direct { s: DenseMatrix, lu: LuFactors },
    Iterative(GmresConfig),
}

/// Factored MGSS-family preconditioner. Immutable once built, so it can be
/// shared between threads.
#[derive(Debug, Clone)]
pub struct MgssPreconditioner {
    shift: ShiftOperators,
    b: SparseMatrix,
    bt: SparseMatrix,
    lu_ha: LuFactors,
    schur: SchurSolver,
    n: usize,
    m: usize,
}

/// `S` as an operator, for inner Krylov solves.
pub struct SchurOperator<'a>(&'a MgssPreconditioner);

impl LinearOperator for SchurOperator<'_> {
    fn dim(&self) -> usize {
        self.0.m
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.0.schur_matvec(x)
    }
}

impl MgssPreconditioner {
    /// Factors `H + A` densely and, for [`InnerStrategy::Direct`], assembles
    /// and factors `S` as well.
    pub fn factor(sys: &SaddlePointSystem, shift: ShiftOperators, strategy: InnerStrategy) -> Result<Self> {
        let (n, m) = (sys.n(), sys.m());
        if shift.h.shape() != (n, n) {
            return Err(Error::dim("H rows", n, shift.h.nrows()));
        }
        if shift.q.shape() != (m, m) {
            return Err(Error::dim("Q rows", m, shift.q.nrows()));
        }
        if n > DENSE_CAP {
            return Err(Error::DimensionCap { size: n, cap: DENSE_CAP });
        }
        let ha = shift.h.add_scaled(1.0, sys.a(), 1.0)?;
        let lu_ha = lu_factor(&ha.to_dense())?;
        let schur = match strategy {
            InnerStrategy::Direct => {
                let z = lu_ha.solve_matrix(&sys.bt().to_dense())?;
                let s = shift.q.to_dense().add_scaled(1.0, &sys.b().to_dense().matmul(&z)?, 1.0)?;
                let lu = lu_factor(&s)?;
                SchurSolver::Direct { s, lu }
            }
            InnerStrategy::IterativeSchur {
                restart,
                tol,
                max_iters,
            } => {
                let cfg = GmresConfig {
                    restart,
                    rel_tol: tol,
                    max_iters,
                    audit: false,
                };
                cfg.validate()?;
                SchurSolver::Iterative(cfg)
            }
        };
        Ok(Self {
            shift,
            b: sys.b().clone(),
            bt: sys.bt().clone(),
            lu_ha,
            schur,
            n,
            m,
        })
    }

    pub fn shift(&self) -> &ShiftOperators {
        &self.shift
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    pub fn strategy(&self) -> InnerStrategy {
        match &self.schur {
            SchurSolver::Direct { .. } => InnerStrategy::Direct,
            SchurSolver::Iterative(c) => InnerStrategy::IterativeSchur {
                restart: c.restart,
                tol: c.rel_tol,
                max_iters: c.max_iters,
            },
        }
    }

    /// The assembled `S`, available for the direct strategy only.
    pub fn schur_dense(&self) -> Option<&DenseMatrix> {
        match &self.schur {
            SchurSolver::Direct { s, .. } => Some(s),
            SchurSolver::Iterative(_) => None,
        }
    }

    pub fn schur_operator(&self) -> SchurOperator<'_> {
        SchurOperator(self)
    }

    /// `y = Sx = Qx + B(H+A)⁻¹Bᵀx`.
    pub fn schur_matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.m {
            return Err(Error::dim("Schur matvec input", self.m, x.len()));
        }
        let q1 = self.bt.spmv(x)?;
        let q2 = self.lu_ha.solve(&q1)?;
        let mut y = self.shift.q.spmv(x)?;
        for (yi, bi) in y.iter_mut().zip(self.b.spmv(&q2)?) {
            *yi += bi;
        }
        Ok(y)
    }

    fn solve_schur(&self, w2: &[f64]) -> Result<Vec<f64>> {
        match &self.schur {
            SchurSolver::Direct { lu, .. } => lu.solve(w2),
            SchurSolver::Iterative(cfg) => {
                let (z2, rep) = gmres_restarted(&self.schur_operator(), None, w2, None, cfg)?;
                if !rep.converged {
                    return Err(Error::SchurSolve {
                        iterations: rep.total_inner,
                        ratio: rep.r_k,
                    });
                }
                Ok(z2)
            }
        }
    }

    /// `z = M⁻¹r`:
    /// solve `(H+A)w = 2r₁`; `w₂ = 2r₂ + Bw`; solve `Sz₂ = w₂`;
    /// solve `(H+A)t = Bᵀz₂`; `z₁ = w − t`.
    pub fn apply(&self, r: &[f64]) -> Result<Vec<f64>> {
        if r.len() != self.n + self.m {
            return Err(Error::dim("preconditioner input", self.n + self.m, r.len()));
        }
        let (r1, r2) = r.split_at(self.n);
        let twice_r1: Vec<f64> = r1.iter().map(|v| 2.0 * v).collect();
        let w = self.lu_ha.solve(&twice_r1)?;
        let bw = self.b.spmv(&w)?;
        let w2: Vec<f64> = r2.iter().zip(&bw).map(|(a, b)| 2.0 * a + b).collect();
        let z2 = self.solve_schur(&w2)?;
        let t = self.lu_ha.solve(&self.bt.spmv(&z2)?)?;
        let mut z: Vec<f64> = w.iter().zip(&t).map(|(a, b)| a - b).collect();
        z.extend_from_slice(&z2);
        Ok(z)
    }

    /// Dense `M`, `N`, `Γ`, `K` and `L` for verification.
    pub fn assemble_dense_verification(&self, sys: &SaddlePointSystem) -> Result<DenseVerificationSet> {
        let (n, m) = (self.n, self.m);
        if n + m > DENSE_CAP {
            return Err(Error::DimensionCap {
                size: n + m,
                cap: DENSE_CAP,
            });
        }
        let omega = self.shift.omega().to_dense();
        let block = sys.block().to_dense();
        let m_dense = omega.add_scaled(0.5, &block, 0.5)?;
        let n_dense = omega.add_scaled(0.5, &block, -0.5)?;
        let m_inv_a = lu_factor(&m_dense)?.solve_matrix(&block)?;
        let gamma = DenseMatrix::identity(n + m).add_scaled(1.0, &m_inv_a, -1.0)?;

        let a = sys.a().to_dense();
        let b = sys.b().to_dense();
        let bt = sys.bt().to_dense();
        let ha_inv_bt = self.lu_ha.solve_matrix(&bt)?;
        let s = match self.schur_dense() {
            Some(s) => s.clone(),
            None => self.shift.q.to_dense().add_scaled(1.0, &b.matmul(&ha_inv_bt)?, 1.0)?,
        };
        let s_lu = lu_factor(&s)?;
        let k = s_lu.solve_matrix(&b.matmul(&ha_inv_bt)?)?;

        // L = (H+A)⁻¹(A − BᵀS⁻¹B(H+A)⁻¹A + BᵀS⁻¹B)
        let s_inv_b = s_lu.solve_matrix(&b)?;
        let bt_s_inv_b = bt.matmul(&s_inv_b)?;
        let ha_inv_a = self.lu_ha.solve_matrix(&a)?;
        let inner = a
            .add_scaled(1.0, &bt_s_inv_b.matmul(&ha_inv_a)?, -1.0)?
            .add_scaled(1.0, &bt_s_inv_b, 1.0)?;
        let l = self.lu_ha.solve_matrix(&inner)?;

        Ok(DenseVerificationSet {
            m: m_dense,
            n: n_dense,
            gamma,
            k,
            l,
        })
    }
}

impl LinearOperator for MgssPreconditioner {
    fn dim(&self) -> usize {
        self.n + self.m
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        MgssPreconditioner::apply(self, x)
    }
}

/// Dense images of the splitting matrices and of the `(1,1)` and `(2,2)`
/// blocks of `(Ω + 𝒜)⁻¹𝒜` up to the factor 2.
#[derive(Debug, Clone)]
pub struct DenseVerificationSet {
    /// `½(Ω + 𝒜)`.
    pub m: DenseMatrix,
    /// `½(Ω − 𝒜)`.
    pub n: DenseMatrix,
    /// `I − M⁻¹𝒜`.
    pub gamma: DenseMatrix,
    /// `S⁻¹B(H+A)⁻¹Bᵀ`.
    pub k: DenseMatrix,
    /// `(H+A)⁻¹(A − BᵀS⁻¹B(H+A)⁻¹A + BᵀS⁻¹B)`.
    pub l: DenseMatrix,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::saddle::{build_omega, ShiftMode};

    fn sp(rows: &[&[f64]]) -> SparseMatrix {
        SparseMatrix::from_dense(&DenseMatrix::from_rows(rows))
    }

    fn scalar_system(a: f64, b: f64) -> SaddlePointSystem {
        SaddlePointSystem::new(sp(&[&[a]]), sp(&[&[b]]), vec![0.0], vec![0.0]).unwrap()
    }

    fn custom(h: f64, q: f64) -> ShiftOperators {
        ShiftOperators::custom(sp(&[&[h]]), sp(&[&[q]])).unwrap()
    }

    #[test]
    fn scalar_schur_complement() {
        let sys = scalar_system(1.0, 2.0);
        let p = MgssPreconditioner::factor(&sys, custom(1.0, 3.0), InnerStrategy::Direct).unwrap();
        assert_eq!(p.schur_dense().unwrap()[(0, 0)], 5.0);
        assert_eq!(p.schur_matvec(&[1.0]).unwrap(), vec![5.0]);
    }

    #[test]
    fn zero_coupling_gives_schur_equal_q() {
        let a = sp(&[&[3.0, 1.0, 0.0], &[-1.0, 3.0, 0.5], &[0.0, 0.0, 2.0]]);
        let sys = SaddlePointSystem::new(a.clone(), SparseMatrix::zeros(2, 3), vec![0.0; 3], vec![0.0; 2]).unwrap();
        let shift = build_omega(ShiftMode::Mgss, &a, sys.b(), 0.1, 0.2).unwrap();
        let q = shift.q.to_dense();
        let p = MgssPreconditioner::factor(&sys, shift, InnerStrategy::Direct).unwrap();
        assert_eq!(p.schur_dense().unwrap(), &q);
        assert_eq!(p.schur_matvec(&[1.5, -2.0]).unwrap(), q.matvec(&[1.5, -2.0]).unwrap());
        let v = p.assemble_dense_verification(&sys).unwrap();
        assert_eq!(v.k.max_abs(), 0.0);
    }

    #[test]
    fn decoupled_scalar_application() {
        let sys = scalar_system(2.0, 0.0);
        for strategy in [InnerStrategy::Direct, InnerStrategy::iterative(5)] {
            let p = MgssPreconditioner::factor(&sys, custom(1.0, 1.0), strategy).unwrap();
            assert_eq!(p.apply(&[3.0, 1.0]).unwrap(), vec![2.0, 2.0]);
        }
    }

    #[test]
    fn decoupled_scalar_verification_matrices() {
        let sys = scalar_system(2.0, 0.0);
        let p = MgssPreconditioner::factor(&sys, custom(1.0, 1.0), InnerStrategy::Direct).unwrap();
        let v = p.assemble_dense_verification(&sys).unwrap();
        assert_eq!(v.m, DenseMatrix::from_rows(&[&[1.5, 0.0], &[0.0, 0.5]]));
        assert_eq!(v.n, DenseMatrix::from_rows(&[&[-0.5, 0.0], &[0.0, 0.5]]));
        assert!((v.gamma[(0, 0)] + 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(v.gamma[(1, 1)], 1.0);
        assert_eq!(v.gamma[(0, 1)], 0.0);
    }

    #[test]
    fn wrong_lengths_are_rejected() {
        let sys = scalar_system(1.0, 2.0);
        let p = MgssPreconditioner::factor(&sys, custom(1.0, 3.0), InnerStrategy::Direct).unwrap();
        assert!(p.apply(&[1.0]).is_err());
        assert!(p.schur_matvec(&[1.0, 2.0]).is_err());
        assert!(MgssPreconditioner::factor(&sys, ShiftOperators::custom(SparseMatrix::identity(2), SparseMatrix::identity(1)).unwrap(), InnerStrategy::Direct).is_err());
    }
}
