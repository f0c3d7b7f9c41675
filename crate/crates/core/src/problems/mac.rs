//! Marker-and-cell finite differences on the unit square.
//!
//! `u(i, j)` sits at `(ih, (j+½)h)` for `i = 1..G−1`, `j = 0..G−1` and is
//! numbered `j(G−1) + i − 1`; `v(i, j)` sits at `((i+½)h, jh)` for
//! `i = 0..G−1`, `j = 1..G−1` and follows the `u` block as `(j−1)G + i`.
//! Pressure `p(i, j)` at the centre of cell `(i, j)` is numbered `jG + i`.
//!
//! Walls normal to a velocity component hold it at zero directly; walls
//! parallel to it use a reflected ghost value, which adds one to the
//! diagonal of the 5-point stencil.
//!
//! Both equations are integrated over their control volumes (area `h²`), so
//! `A` carries `ν` times the plain stencil and `B` has entries `±h`, the same
//! scaling as an assembled finite element system.

use crate::error::Result;
use crate::sparse::{SparseMatrix, TripletBuffer};

struct Grid {
    g: usize,
    h: f64,
}

/// Which velocity component a stencil is built for.
#[derive(Clone, Copy)]
enum Component {
    U,
    V,
}

impl Grid {
    fn new(g: usize) -> Self {
        Self { g, h: 1.0 / g as f64 }
    }

    fn nu_count(&self) -> usize {
        (self.g - 1) * self.g
    }

    fn n(&self) -> usize {
        2 * self.nu_count()
    }

    /// Index of a face unknown, or `None` when `(i, j)` lies on or beyond a wall.
    fn index(&self, c: Component, i: isize, j: isize) -> Option<usize> {
        let g = self.g as isize;
        match c {
            Component::U if (1..g).contains(&i) && (0..g).contains(&j) => {
                Some((j * (g - 1) + i - 1) as usize)
            }
            Component::V if (0..g).contains(&i) && (1..g).contains(&j) => {
                Some(self.nu_count() + ((j - 1) * g + i) as usize)
            }
            _ => None,
        }
    }

    /// Face positions `(component, i, j, x, y)` in unknown order.
    fn faces(&self) -> Vec<(Component, isize, isize, f64, f64)> {
        let (g, h) = (self.g as isize, self.h);
        let mut out = Vec::with_capacity(self.n());
        for j in 0..g {
            for i in 1..g {
                out.push((Component::U, i, j, i as f64 * h, (j as f64 + 0.5) * h));
            }
        }
        for j in 1..g {
            for i in 0..g {
                out.push((Component::V, i, j, (i as f64 + 0.5) * h, j as f64 * h));
            }
        }
        out
    }

    /// `ν` times the vector 5-point stencil of `−h²Δ`.
    fn laplacian(&self, nu: f64) -> Result<SparseMatrix> {
        let scale = nu;
        let mut t = TripletBuffer::with_capacity(self.n(), self.n(), 5 * self.n());
        for (c, i, j, _, _) in self.faces() {
            let row = self.index(c, i, j).expect("face is interior");
            let mut diag = 4.0;
            // Neighbours across walls parallel to the component get reflected.
            let (along, across) = match c {
                Component::U => ([(i - 1, j), (i + 1, j)], [(i, j - 1), (i, j + 1)]),
                Component::V => ([(i, j - 1), (i, j + 1)], [(i - 1, j), (i + 1, j)]),
            };
            for (ii, jj) in along {
                if let Some(col) = self.index(c, ii, jj) {
                    t.push(row, col, -scale);
                }
            }
            for (ii, jj) in across {
                match self.index(c, ii, jj) {
                    Some(col) => t.push(row, col, -scale),
                    None => diag += 1.0,
                }
            }
            t.push(row, row, diag * scale);
        }
        t.to_csr()
    }

    /// Centered `h²·w·∇` with the recirculating wind, boundary neighbours dropped.
    fn convection(&self) -> Result<SparseMatrix> {
        let coef = self.h / 2.0;
        let mut t = TripletBuffer::with_capacity(self.n(), self.n(), 4 * self.n());
        for (c, i, j, x, y) in self.faces() {
            let row = self.index(c, i, j).expect("face is interior");
            let (w1, w2) = wind(x, y);
            let stencil = [
                ((i + 1, j), w1 * coef),
                ((i - 1, j), -w1 * coef),
                ((i, j + 1), w2 * coef),
                ((i, j - 1), -w2 * coef),
            ];
            for ((ii, jj), v) in stencil {
                if let Some(col) = self.index(c, ii, jj) {
                    t.push(row, col, v);
                }
            }
        }
        t.to_csr()
    }

    /// Negative discrete divergence times `h²`, so that `Bᵀ` is the integrated
/// pressure gradient.
    fn divergence(&self) -> Result<SparseMatrix> {
        let (g, h) = (self.g as isize, self.h);
        let mut t = TripletBuffer::with_capacity(self.g * self.g, self.n(), 4 * self.g * self.g);
        for j in 0..g {
            for i in 0..g {
                let row = (j * g + i) as usize;
                let faces = [
                    (Component::U, i + 1, j, -1.0),
                    (Component::U, i, j, 1.0),
                    (Component::V, i, j + 1, -1.0),
                    (Component::V, i, j, 1.0),
                ];
                for (c, ii, jj, s) in faces {
                    if let Some(col) = self.index(c, ii, jj) {
                        t.push(row, col, s * h);
                    }
                }
            }
        }
        t.to_csr()
    }
}

/// `w = (2Y(1 − X²), −2X(1 − Y²))` with `X = 2x − 1`, `Y = 2y − 1`; tangent
/// to every wall of the unit square.
pub(crate) fn wind(x: f64, y: f64) -> (f64, f64) {
    let (xx, yy) = (2.0 * x - 1.0, 2.0 * y - 1.0);
    (2.0 * yy * (1.0 - xx * xx), -2.0 * xx * (1.0 - yy * yy))
}

pub(crate) fn stokes(g: usize, nu: f64) -> Result<(SparseMatrix, SparseMatrix)> {
    let grid = Grid::new(g);
    Ok((grid.laplacian(nu)?, grid.divergence()?))
}

/// `A = νL + ½(C − Cᵀ)`: the skew-symmetrized convection leaves the
/// symmetric part of `A` equal to the Stokes operator.
pub(crate) fn oseen(g: usize, nu: f64) -> Result<(SparseMatrix, SparseMatrix)> {
    let grid = Grid::new(g);
    let c = grid.convection()?;
    let skew = c.add_scaled(0.5, &c.transpose(), -0.5)?;
    let a = grid.laplacian(nu)?.add_scaled(1.0, &skew, 1.0)?;
    Ok((a, grid.divergence()?))
}
