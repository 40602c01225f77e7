//! The Pascali operator `∂̄_B(w) = w_ζ̄ + B₁w + B₂w̄`, its formal adjoint
//! `∂̄*_B(φ) = φ_ζ̄ − B₁ᵀφ − B̄₂ᵀφ̄`, and the discrete integration-by-parts
//! pairing whose real part vanishes.

use crate::error::{Error, Result};
use crate::expr::{self, Expr, Value};
use crate::grid::{c1_norm_proxy, dbar_fd, sup_norm, Grid, GridFunction, Mask};
use ndarray::Array4;
use num_complex::Complex64;

/// The pair `(B₁, B₂)` of n×n matrix functions, expression-backed with a
/// sampled cache on the active grid.
pub struct CoefficientField {
    n: usize,
    grid: Grid,
    b1_expr: Expr,
    b2_expr: Expr,
    /// caches indexed `[i][j][row][col]`
    b1: Array4<Complex64>,
    b2: Array4<Complex64>,
}

fn expr_matrix_at(e: &Expr, n: usize, z: Complex64) -> Result<Vec<Vec<Complex64>>> {
    match expr::eval(e, z)? {
        Value::Scalar(v) => {
            if n == 1 {
                Ok(vec![vec![v]])
            } else {
                Err(Error::ShapeMismatch {
                    expected: format!("{n}x{n} matrix"),
                    got: "scalar".into(),
                })
            }
        }
        Value::Matrix(m) => {
            if m.len() == n && m.iter().all(|r| r.len() == n) {
                Ok(m)
            } else {
                Err(Error::ShapeMismatch {
                    expected: format!("{n}x{n} matrix"),
                    got: format!("matrix[{}x{}]", m.len(), m.first().map_or(0, Vec::len)),
                })
            }
        }
        Value::Vector(v) => Err(Error::ShapeMismatch {
            expected: format!("{n}x{n} matrix"),
            got: format!("vector[{}]", v.len()),
        }),
    }
}

impl CoefficientField {
    /// Sample both coefficient matrices over the grid. Scalar expressions are
    /// accepted for `n = 1`.
    pub fn new(grid: Grid, n: usize, b1_expr: Expr, b2_expr: Expr) -> Result<Self> {
        let res = grid.resolution();
        let mut b1 = Array4::zeros((res, res, n, n));
        let mut b2 = Array4::zeros((res, res, n, n));
        for i in 0..res {
            for j in 0..res {
                let z = grid.node(i, j);
                let m1 = expr_matrix_at(&b1_expr, n, z)?;
                let m2 = expr_matrix_at(&b2_expr, n, z)?;
                for r in 0..n {
                    for c in 0..n {
                        let (v1, v2) = (m1[r][c], m2[r][c]);
                        for v in [v1, v2] {
                            if !v.re.is_finite() || !v.im.is_finite() {
                                return Err(Error::NonFiniteSample {
                                    value: format!("{v}"),
                                    x: z.re,
                                    y: z.im,
                                });
                            }
                        }
                        b1[(i, j, r, c)] = v1;
                        b2[(i, j, r, c)] = v2;
                    }
                }
            }
        }
        Ok(Self {
            n,
            grid,
            b1_expr,
            b2_expr,
            b1,
            b2,
        })
    }

    /// Parse the coefficient expressions and sample them.
    pub fn from_strings(grid: Grid, n: usize, b1: &str, b2: &str) -> Result<Self> {
        Self::new(grid, n, expr::parse(b1)?, expr::parse(b2)?)
    }

    /// `B₁ = B₂ = 0` (the classical holomorphic case).
    pub fn zero(grid: Grid, n: usize) -> Self {
        let zero = expr::parse("0").expect("constant");
        let res = grid.resolution();
        Self {
            n,
            grid,
            b1_expr: zero.clone(),
            b2_expr: zero,
            b1: Array4::zeros((res, res, n, n)),
            b2: Array4::zeros((res, res, n, n)),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn b1_expr(&self) -> &Expr {
        &self.b1_expr
    }

    pub fn b2_expr(&self) -> &Expr {
        &self.b2_expr
    }

    pub fn b1(&self, i: usize, j: usize, r: usize, c: usize) -> Complex64 {
        self.b1[(i, j, r, c)]
    }

    pub fn b2(&self, i: usize, j: usize, r: usize, c: usize) -> Complex64 {
        self.b2[(i, j, r, c)]
    }

    /// True when both coefficient caches vanish identically.
    pub fn is_zero(&self) -> bool {
        self.b1.iter().all(|v| v.norm_sqr() == 0.0) && self.b2.iter().all(|v| v.norm_sqr() == 0.0)
    }

    /// Verify the caches against expression evaluation at every node.
    pub fn recheck(&self) -> Result<()> {
        let res = self.grid.resolution();
        for i in 0..res {
            for j in 0..res {
                let z = self.grid.node(i, j);
                let m1 = expr_matrix_at(&self.b1_expr, self.n, z)?;
                let m2 = expr_matrix_at(&self.b2_expr, self.n, z)?;
                for r in 0..self.n {
                    for c in 0..self.n {
                        if (m1[r][c] - self.b1[(i, j, r, c)]).norm() > 0.0
                            || (m2[r][c] - self.b2[(i, j, r, c)]).norm() > 0.0
                        {
                            return Err(Error::ShapeMismatch {
                                expected: "cache to match expression".into(),
                                got: format!("deviation at node ({i},{j})"),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Pointwise `B₁w + B₂w̄`.
    pub fn multiply(&self, w: &GridFunction) -> Result<GridFunction> {
        if w.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        if w.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: w.dim(),
            });
        }
        let res = self.grid.resolution();
        let mut out = GridFunction::zeros(self.grid, self.n);
        for i in 0..res {
            for j in 0..res {
                for r in 0..self.n {
                    let mut acc = Complex64::default();
                    for c in 0..self.n {
                        let wv = w.get(i, j, c);
                        acc += self.b1[(i, j, r, c)] * wv + self.b2[(i, j, r, c)] * wv.conj();
                    }
                    out.set(i, j, r, acc);
                }
            }
        }
        Ok(out)
    }

    /// Pointwise real-inner-product adjoint of [`Self::multiply`]:
    /// `v ↦ B₁ᴴv + B₂ᵀv̄`.
    pub fn multiply_adjoint(&self, v: &GridFunction) -> Result<GridFunction> {
        if v.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        if v.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: v.dim(),
            });
        }
        let res = self.grid.resolution();
        let mut out = GridFunction::zeros(self.grid, self.n);
        for i in 0..res {
            for j in 0..res {
                for r in 0..self.n {
                    let mut acc = Complex64::default();
                    for c in 0..self.n {
                        let vv = v.get(i, j, c);
                        // (B₁ᴴ)_{rc} = conj(B₁_{cr}), (B₂ᵀ)_{rc} = B₂_{cr}
                        acc += self.b1[(i, j, c, r)].conj() * vv + self.b2[(i, j, c, r)] * vv.conj();
                    }
                    out.set(i, j, r, acc);
                }
            }
        }
        Ok(out)
    }
}

/// `∂̄_B(w) = ∂̄w + B₁w + B₂w̄` with the discrete `∂̄`.
pub fn dbar_b(coeff: &CoefficientField, w: &GridFunction) -> Result<GridFunction> {
    let bw = coeff.multiply(w)?;
    dbar_fd(w).add(&bw)
}

/// `∂̄*_B(φ) = ∂̄φ − B₁ᵀφ − B̄₂ᵀφ̄`.
pub fn dbar_b_adjoint(coeff: &CoefficientField, phi: &GridFunction) -> Result<GridFunction> {
    if phi.grid() != coeff.grid() {
        return Err(Error::GridMismatch);
    }
    if phi.dim() != coeff.n() {
        return Err(Error::DimensionMismatch {
            expected: coeff.n(),
            got: phi.dim(),
        });
    }
    let n = coeff.n();
    let res = coeff.grid().resolution();
    let mut lower = GridFunction::zeros(coeff.grid(), n);
    for i in 0..res {
        for j in 0..res {
            for r in 0..n {
                let mut acc = Complex64::default();
                for c in 0..n {
                    let pv = phi.get(i, j, c);
                    // (B₁ᵀ)_{rc} = B₁_{cr}, (B̄₂ᵀ)_{rc} = conj(B₂_{cr})
                    acc += coeff.b1(i, j, c, r) * pv + coeff.b2(i, j, c, r).conj() * pv.conj();
                }
                lower.set(i, j, r, acc);
            }
        }
    }
    dbar_fd(phi).sub(&lower)
}

/// The residual field of a candidate solution along with its norms on a mask.
pub struct PascaliResidual {
    pub value: GridFunction,
    pub sup: f64,
    pub c1_proxy: f64,
}

/// Compute `∂̄_B(w)` and record its sup and C¹-proxy norms over `mask`.
pub fn residual(coeff: &CoefficientField, w: &GridFunction, mask: &Mask) -> Result<PascaliResidual> {
    let value = dbar_b(coeff, w)?;
    let sup = sup_norm(&value, mask)?;
    let c1_proxy = c1_norm_proxy(&value, mask)?;
    Ok(PascaliResidual {
        value,
        sup,
        c1_proxy,
    })
}

/// Discrete area integral `h² Σ (φᵀ·∂̄_B(w) + wᵀ·∂̄*_B(φ))`.
///
/// Requires `φ` to vanish on a 4-cell collar at the box edge, mirroring the
/// compact-support hypothesis; the real part then vanishes identically.
pub fn bilinear_pairing(
    coeff: &CoefficientField,
    w: &GridFunction,
    phi: &GridFunction,
) -> Result<Complex64> {
    let grid = coeff.grid();
    if w.grid() != grid || phi.grid() != grid {
        return Err(Error::GridMismatch);
    }
    let res = grid.resolution();
    let collar = 4usize;
    for i in 0..res {
        for j in 0..res {
            let on_collar = i < collar || j < collar || i >= res - collar || j >= res - collar;
            if on_collar && phi.node_norm(i, j) != 0.0 {
                return Err(Error::SupportViolation(collar));
            }
        }
    }
    let dw = dbar_b(coeff, w)?;
    let dphi = dbar_b_adjoint(coeff, phi)?;
    let h2 = grid.spacing() * grid.spacing();
    let mut acc = Complex64::default();
    for i in 0..res {
        for j in 0..res {
            for c in 0..coeff.n() {
                acc += phi.get(i, j, c) * dw.get(i, j, c) + w.get(i, j, c) * dphi.get(i, j, c);
            }
        }
    }
    Ok(acc * h2)
}

/// The B₂ commutator `h² Σ (φᵀB₂w̄ − φ̄ᵀB̄₂w)`, the purely imaginary quantity
/// the pairing reduces to.
pub fn pairing_b2_term(
    coeff: &CoefficientField,
    w: &GridFunction,
    phi: &GridFunction,
) -> Result<Complex64> {
    let grid = coeff.grid();
    if w.grid() != grid || phi.grid() != grid {
        return Err(Error::GridMismatch);
    }
    let res = grid.resolution();
    let n = coeff.n();
    let h2 = grid.spacing() * grid.spacing();
    let mut acc = Complex64::default();
    for i in 0..res {
        for j in 0..res {
            for r in 0..n {
                for c in 0..n {
                    let term = phi.get(i, j, r) * coeff.b2(i, j, r, c) * w.get(i, j, c).conj();
                    acc += term - term.conj();
                }
            }
        }
    }
    Ok(acc * h2)
}
