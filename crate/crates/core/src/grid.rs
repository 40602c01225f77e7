//! Uniform Cartesian grids on squares in ℂ, ℂⁿ-valued grid functions,
//! discrete derivatives, masks and norms.
//!
//! Nodes sit at cell centers: node `(i, j)` has coordinate
//! `center + ((i+½)h − half_width) + i((j+½)h − half_width)` with
//! `h = 2·half_width / N`. Cell-center sampling keeps the singular
//! Cauchy–Green kernel away from its pole.

use crate::error::{Error, Result};
use ndarray::{Array2, Array3};
use num_complex::Complex64;

/// A square, uniform grid of cell centers in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    center: Complex64,
    half_width: f64,
    resolution: usize,
    spacing: f64,
}

impl Grid {
    /// Build a grid; `resolution` must be a power of two, at least 16.
    pub fn new(center: Complex64, half_width: f64, resolution: usize) -> Result<Self> {
        if resolution < 16 || !resolution.is_power_of_two() {
            return Err(Error::BadResolution(resolution));
        }
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::BadHalfWidth(half_width));
        }
        Ok(Self {
            center,
            half_width,
            resolution,
            spacing: 2.0 * half_width / resolution as f64,
        })
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Points per side.
    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Cell size `h = 2·half_width / N`.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Coordinate of node `(i, j)`; `i` runs along x, `j` along y.
    pub fn node(&self, i: usize, j: usize) -> Complex64 {
        let h = self.spacing;
        self.center
            + Complex64::new(
                (i as f64 + 0.5) * h - self.half_width,
                (j as f64 + 0.5) * h - self.half_width,
            )
    }

    /// Fractional index coordinates of an arbitrary point (for interpolation).
    fn frac_index(&self, z: Complex64) -> (f64, f64) {
        let h = self.spacing;
        let fx = (z.re - self.center.re + self.half_width) / h - 0.5;
        let fy = (z.im - self.center.im + self.half_width) / h - 0.5;
        (fx, fy)
    }

    /// True if `z` lies within the sampled box.
    pub fn contains(&self, z: Complex64) -> bool {
        (z.re - self.center.re).abs() <= self.half_width
            && (z.im - self.center.im).abs() <= self.half_width
    }
}

/// A ℂⁿ-valued function sampled on a [`Grid`]; layout `[i][j][component]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    dim: usize,
    values: Array3<Complex64>,
}

impl GridFunction {
    pub fn zeros(grid: Grid, dim: usize) -> Self {
        let n = grid.resolution();
        Self {
            grid,
            dim,
            values: Array3::zeros((n, n, dim)),
        }
    }

    /// Wrap raw values; shape must be `(N, N, dim)` and all entries finite.
    pub fn from_values(grid: Grid, values: Array3<Complex64>) -> Result<Self> {
        let n = grid.resolution();
        if values.shape()[0] != n || values.shape()[1] != n {
            return Err(Error::GridMismatch);
        }
        let dim = values.shape()[2];
        for ((i, j, _), v) in values.indexed_iter() {
            if !v.re.is_finite() || !v.im.is_finite() {
                let z = grid.node(i, j);
                return Err(Error::NonFiniteSample {
                    value: format!("{v}"),
                    x: z.re,
                    y: z.im,
                });
            }
        }
        Ok(Self { grid, dim, values })
    }

    /// Sample a pointwise function of `z` into a grid function.
    ///
    /// Rejects non-finite samples, reporting the offending node coordinate.
    pub fn sample<F>(grid: Grid, dim: usize, f: F) -> Result<Self>
    where
        F: Fn(Complex64) -> Vec<Complex64>,
    {
        let n = grid.resolution();
        let mut values = Array3::zeros((n, n, dim));
        for i in 0..n {
            for j in 0..n {
                let z = grid.node(i, j);
                let v = f(z);
                assert_eq!(v.len(), dim, "sampled vector has wrong dimension");
                for (c, val) in v.iter().enumerate() {
                    if !val.re.is_finite() || !val.im.is_finite() {
                        return Err(Error::NonFiniteSample {
                            value: format!("{val}"),
                            x: z.re,
                            y: z.im,
                        });
                    }
                    values[(i, j, c)] = *val;
                }
            }
        }
        Ok(Self { grid, dim, values })
    }

    /// Scalar (n = 1) convenience sampler.
    pub fn sample_scalar<F>(grid: Grid, f: F) -> Result<Self>
    where
        F: Fn(Complex64) -> Complex64,
    {
        Self::sample(grid, 1, |z| vec![f(z)])
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &Array3<Complex64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Array3<Complex64> {
        &mut self.values
    }

    pub fn get(&self, i: usize, j: usize, c: usize) -> Complex64 {
        self.values[(i, j, c)]
    }

    pub fn set(&mut self, i: usize, j: usize, c: usize, v: Complex64) {
        self.values[(i, j, c)] = v;
    }

    /// Euclidean norm of the n-vector at node `(i, j)`.
    pub fn node_norm(&self, i: usize, j: usize) -> f64 {
        (0..self.dim)
            .map(|c| self.values[(i, j, c)].norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Componentwise complex conjugate.
    pub fn conj(&self) -> Self {
        let values = self.values.mapv(|v| v.conj());
        Self {
            grid: self.grid,
            dim: self.dim,
            values,
        }
    }

    /// Pointwise linear combination `a·self + b·other`.
    pub fn axpby(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut values = self.values.clone();
        values.zip_mut_with(&other.values, |u, v| *u = a * *u + b * *v);
        Ok(Self {
            grid: self.grid,
            dim: self.dim,
            values,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.axpby(Complex64::new(1.0, 0.0), other, Complex64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.axpby(Complex64::new(1.0, 0.0), other, Complex64::new(-1.0, 0.0))
    }

    pub fn scale(&self, a: Complex64) -> Self {
        let values = self.values.mapv(|v| a * v);
        Self {
            grid: self.grid,
            dim: self.dim,
            values,
        }
    }

    /// Zero the values outside a mask.
    pub fn masked(&self, mask: &Mask) -> Result<Self> {
        if self.grid != mask.grid {
            return Err(Error::GridMismatch);
        }
        let mut out = self.clone();
        for ((i, j, _), v) in out.values.indexed_iter_mut() {
            if !mask.inside[(i, j)] {
                *v = Complex64::new(0.0, 0.0);
            }
        }
        Ok(out)
    }

    /// Bilinear interpolation of component values at an arbitrary point.
    ///
    /// Clamps to the sampled box, so evaluation a fraction of a cell outside
    /// the outermost cell centers degrades to nearest-edge extrapolation.
    pub fn interp(&self, z: Complex64) -> Vec<Complex64> {
        let n = self.grid.resolution();
        let (fx, fy) = self.grid.frac_index(z);
        let fx = fx.clamp(0.0, (n - 1) as f64);
        let fy = fy.clamp(0.0, (n - 1) as f64);
        let i0 = (fx.floor() as usize).min(n - 2);
        let j0 = (fy.floor() as usize).min(n - 2);
        let tx = fx - i0 as f64;
        let ty = fy - j0 as f64;
        (0..self.dim)
            .map(|c| {
                let v00 = self.values[(i0, j0, c)];
                let v10 = self.values[(i0 + 1, j0, c)];
                let v01 = self.values[(i0, j0 + 1, c)];
                let v11 = self.values[(i0 + 1, j0 + 1, c)];
                v00 * ((1.0 - tx) * (1.0 - ty))
                    + v10 * (tx * (1.0 - ty))
                    + v01 * ((1.0 - tx) * ty)
                    + v11 * (tx * ty)
            })
            .collect()
    }
}

/// Discrete `∂̄ = ½(∂_x + i∂_y)` by centered differences, one-sided at the
/// box edges. Exact on sampled polynomials of degree ≤ 2 at interior nodes.
pub fn dbar_fd(w: &GridFunction) -> GridFunction {
    let n = w.grid().resolution();
    let h = w.grid().spacing();
    let dim = w.dim();
    let mut out = GridFunction::zeros(w.grid(), dim);
    let i_unit = Complex64::new(0.0, 1.0);
    for c in 0..dim {
        for i in 0..n {
            for j in 0..n {
                let dx = if i == 0 {
                    (w.get(1, j, c) - w.get(0, j, c)) / h
                } else if i == n - 1 {
                    (w.get(n - 1, j, c) - w.get(n - 2, j, c)) / h
                } else {
                    (w.get(i + 1, j, c) - w.get(i - 1, j, c)) / (2.0 * h)
                };
                let dy = if j == 0 {
                    (w.get(i, 1, c) - w.get(i, 0, c)) / h
                } else if j == n - 1 {
                    (w.get(i, n - 1, c) - w.get(i, n - 2, c)) / h
                } else {
                    (w.get(i, j + 1, c) - w.get(i, j - 1, c)) / (2.0 * h)
                };
                out.set(i, j, c, 0.5 * (dx + i_unit * dy));
            }
        }
    }
    out
}

/// Discrete `∂_x` and `∂_y` (centered, one-sided at edges) of one component.
fn partials(w: &GridFunction) -> (GridFunction, GridFunction) {
    let n = w.grid().resolution();
    let h = w.grid().spacing();
    let dim = w.dim();
    let mut gx = GridFunction::zeros(w.grid(), dim);
    let mut gy = GridFunction::zeros(w.grid(), dim);
    for c in 0..dim {
        for i in 0..n {
            for j in 0..n {
                let dx = if i == 0 {
                    (w.get(1, j, c) - w.get(0, j, c)) / h
                } else if i == n - 1 {
                    (w.get(n - 1, j, c) - w.get(n - 2, j, c)) / h
                } else {
                    (w.get(i + 1, j, c) - w.get(i - 1, j, c)) / (2.0 * h)
                };
                let dy = if j == 0 {
                    (w.get(i, 1, c) - w.get(i, 0, c)) / h
                } else if j == n - 1 {
                    (w.get(i, n - 1, c) - w.get(i, n - 2, c)) / h
                } else {
                    (w.get(i, j + 1, c) - w.get(i, j - 1, c)) / (2.0 * h)
                };
                gx.set(i, j, c, dx);
                gy.set(i, j, c, dy);
            }
        }
    }
    (gx, gy)
}

/// A boolean node set over a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Mask {
    grid: Grid,
    inside: Array2<bool>,
}

impl Mask {
    pub fn new(grid: Grid, inside: Array2<bool>) -> Result<Self> {
        let n = grid.resolution();
        if inside.shape() != [n, n] {
            return Err(Error::GridMismatch);
        }
        Ok(Self { grid, inside })
    }

    /// All nodes of the grid.
    pub fn full(grid: Grid) -> Self {
        let n = grid.resolution();
        Self {
            grid,
            inside: Array2::from_elem((n, n), true),
        }
    }

    /// Nodes satisfying a predicate on the coordinate.
    pub fn from_predicate<F>(grid: Grid, pred: F) -> Self
    where
        F: Fn(Complex64) -> bool,
    {
        let n = grid.resolution();
        let mut inside = Array2::from_elem((n, n), false);
        for i in 0..n {
            for j in 0..n {
                inside[(i, j)] = pred(grid.node(i, j));
            }
        }
        Self { grid, inside }
    }

    /// Disc `|z − c| < r`.
    pub fn disc(grid: Grid, c: Complex64, r: f64) -> Self {
        Self::from_predicate(grid, |z| (z - c).norm() < r)
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn inside(&self) -> &Array2<bool> {
        &self.inside
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.inside[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.inside[(i, j)] = v;
    }

    pub fn count(&self) -> usize {
        self.inside.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.inside.iter().all(|&b| !b)
    }

    /// Indices of all masked nodes, row-major in `(i, j)`.
    pub fn nodes(&self) -> Vec<(usize, usize)> {
        let n = self.grid.resolution();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.inside[(i, j)] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Remove nodes whose 4-neighborhood leaves the mask (or the grid).
    pub fn erode(&self, cells: usize) -> Self {
        let n = self.grid.resolution();
        let mut cur = self.inside.clone();
        for _ in 0..cells {
            let mut next = cur.clone();
            for i in 0..n {
                for j in 0..n {
                    if !cur[(i, j)] {
                        continue;
                    }
                    let edge = i == 0 || j == 0 || i == n - 1 || j == n - 1;
                    let interior_ok = !edge
                        && cur[(i - 1, j)]
                        && cur[(i + 1, j)]
                        && cur[(i, j - 1)]
                        && cur[(i, j + 1)];
                    if !interior_ok {
                        next[(i, j)] = false;
                    }
                }
            }
            cur = next;
        }
        Self {
            grid: self.grid,
            inside: cur,
        }
    }

    /// Grow the mask by `cells` 4-neighborhood rings.
    pub fn dilate(&self, cells: usize) -> Self {
        let n = self.grid.resolution();
        let mut cur = self.inside.clone();
        for _ in 0..cells {
            let mut next = cur.clone();
            for i in 0..n {
                for j in 0..n {
                    if cur[(i, j)] {
                        continue;
                    }
                    let grow = (i > 0 && cur[(i - 1, j)])
                        || (i < n - 1 && cur[(i + 1, j)])
                        || (j > 0 && cur[(i, j - 1)])
                        || (j < n - 1 && cur[(i, j + 1)]);
                    if grow {
                        next[(i, j)] = true;
                    }
                }
            }
            cur = next;
        }
        Self {
            grid: self.grid,
            inside: cur,
        }
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let mut inside = self.inside.clone();
        inside.zip_mut_with(&other.inside, |a, &b| *a = *a || b);
        Ok(Self {
            grid: self.grid,
            inside,
        })
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let mut inside = self.inside.clone();
        inside.zip_mut_with(&other.inside, |a, &b| *a = *a && b);
        Ok(Self {
            grid: self.grid,
            inside,
        })
    }

    pub fn complement(&self) -> Self {
        Self {
            grid: self.grid,
            inside: self.inside.mapv(|b| !b),
        }
    }

    /// True when every node of `self` lies in `other`.
    pub fn subset_of(&self, other: &Self) -> bool {
        self.grid == other.grid
            && self
                .inside
                .iter()
                .zip(other.inside.iter())
                .all(|(&a, &b)| !a || b)
    }
}

/// Sup over masked nodes of the Euclidean norm of the n-vector value.
pub fn sup_norm(w: &GridFunction, mask: &Mask) -> Result<f64> {
    if w.grid() != mask.grid() {
        return Err(Error::GridMismatch);
    }
    if mask.is_empty() {
        return Err(Error::EmptyMask);
    }
    let mut best = 0.0f64;
    for (i, j) in mask.nodes() {
        best = best.max(w.node_norm(i, j));
    }
    Ok(best)
}

/// Discrete C¹ surrogate: `sup|w| + sup|∂_x w| + sup|∂_y w|` over the mask
/// eroded by one cell (so the derivative stencils stay centered).
pub fn c1_norm_proxy(w: &GridFunction, mask: &Mask) -> Result<f64> {
    if w.grid() != mask.grid() {
        return Err(Error::GridMismatch);
    }
    if mask.is_empty() {
        return Err(Error::EmptyMask);
    }
    let eroded = mask.erode(1);
    if eroded.is_empty() {
        return Err(Error::ErodedEmpty);
    }
    let (gx, gy) = partials(w);
    Ok(sup_norm(w, &eroded)? + sup_norm(&gx, &eroded)? + sup_norm(&gy, &eroded)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit_grid(n: usize) -> Grid {
        Grid::new(Complex64::new(0.0, 0.0), 1.0, n).unwrap()
    }

    #[test]
    fn rejects_bad_resolution() {
        let c = Complex64::new(0.0, 0.0);
        assert!(Grid::new(c, 1.0, 8).is_err());
        assert!(Grid::new(c, 1.0, 48).is_err());
        assert!(Grid::new(c, -1.0, 32).is_err());
        assert!(Grid::new(c, 1.0, 16).is_ok());
    }

    #[test]
    fn cell_center_formula() {
        let g = unit_grid(16);
        // h = 0.125, first node at -0.9375 - 0.9375i
        let z = g.node(0, 0);
        assert!((z - Complex64::new(-0.9375, -0.9375)).norm() < 1e-15);
        let z = g.node(15, 15);
        assert!((z - Complex64::new(0.9375, 0.9375)).norm() < 1e-15);
    }

    #[test]
    fn sample_constant_and_identity() {
        let g = unit_grid(16);
        let w = GridFunction::sample(g, 2, |_| {
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
        })
        .unwrap();
        assert_eq!(w.get(3, 7, 0), Complex64::new(1.0, 0.0));
        assert_eq!(w.get(3, 7, 1), Complex64::new(0.0, 0.0));

        let id = GridFunction::sample_scalar(g, |z| z).unwrap();
        assert_eq!(id.get(0, 0, 0), Complex64::new(-0.9375, -0.9375));
    }

    #[test]
    fn sample_scalar_oracle_value() {
        // exp(2·Re z) at 0.5 is e
        let g = Grid::new(Complex64::new(0.5, 0.5), 0.5, 16).unwrap();
        let w = GridFunction::sample_scalar(g, |z| Complex64::new((2.0 * z.re).exp(), 0.0)).unwrap();
        // locate the node nearest 0.5 + 0.5i and compare against direct evaluation
        let mut best = (0usize, 0usize, f64::INFINITY);
        for i in 0..16 {
            for j in 0..16 {
                let d = (g.node(i, j) - Complex64::new(0.5, 0.5)).norm();
                if d < best.2 {
                    best = (i, j, d);
                }
            }
        }
        let z = g.node(best.0, best.1);
        assert!((w.get(best.0, best.1, 0).re - (2.0 * z.re).exp()).abs() < 1e-14);
    }

    #[test]
    fn sample_rejects_non_finite() {
        let g = unit_grid(16);
        let r = GridFunction::sample_scalar(g, |z| {
            Complex64::new(1.0 / (z.re + 0.9375 - 0.0), 0.0) // singular on the first column
        });
        // 1/(x + 0.9375) is infinite at x = -0.9375
        assert!(matches!(r, Err(Error::NonFiniteSample { .. })));
    }

    #[test]
    fn dbar_of_conjugate_is_one() {
        let g = unit_grid(32);
        let w = GridFunction::sample_scalar(g, |z| z.conj()).unwrap();
        let d = dbar_fd(&w);
        let interior = Mask::full(g).erode(1);
        for (i, j) in interior.nodes() {
            assert!((d.get(i, j, 0) - Complex64::new(1.0, 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn dbar_annihilates_quadratics_exactly() {
        let g = unit_grid(32);
        for f in [
            |z: Complex64| z,
            |z: Complex64| z * z,
            |z: Complex64| z * z + Complex64::new(0.0, 2.0) * z + Complex64::new(3.0, -1.0),
        ] {
            let w = GridFunction::sample_scalar(g, f).unwrap();
            let d = dbar_fd(&w);
            let interior = Mask::full(g).erode(1);
            let e = sup_norm(&d, &interior).unwrap();
            assert!(e < 1e-12, "interior dbar of quadratic = {e}");
        }
    }

    #[test]
    fn dbar_exponential_oracle() {
        // ∂̄ e^{2x} = e^{2x}; at ζ = 0 the value is 1 within O(h²)
        let g = unit_grid(64); // h = 0.03125 ≤ 0.1
        let w = GridFunction::sample_scalar(g, |z| Complex64::new((2.0 * z.re).exp(), 0.0)).unwrap();
        let d = dbar_fd(&w);
        // nearest node to 0
        let idx = 31usize; // node (31,31) = (-h/2, -h/2)
        let z = g.node(idx, idx);
        let expect = (2.0 * z.re).exp();
        assert!((d.get(idx, idx, 0).re - expect).abs() < 0.01);
        assert!(d.get(idx, idx, 0).im.abs() < 0.01);
    }

    #[test]
    fn dbar_refinement_improves_by_factor_three() {
        // O(h²) convergence of the interior stencil, with slack
        let f = |z: Complex64| Complex64::new((2.0 * z.re).exp(), 0.0);
        let mut errs = Vec::new();
        for n in [64usize, 128] {
            let g = unit_grid(n);
            let w = GridFunction::sample_scalar(g, f).unwrap();
            let d = dbar_fd(&w);
            let exact = GridFunction::sample_scalar(g, f).unwrap();
            let diff = d.sub(&exact).unwrap();
            let interior = Mask::disc(g, Complex64::new(0.0, 0.0), 0.5);
            errs.push(sup_norm(&diff, &interior).unwrap());
        }
        assert!(
            errs[0] / errs[1] >= 3.0,
            "refinement ratio {} too small",
            errs[0] / errs[1]
        );
    }

    #[test]
    fn sup_norm_pythagorean() {
        let g = unit_grid(16);
        let w = GridFunction::sample(g, 2, |_| {
            vec![Complex64::new(3.0, 0.0), Complex64::new(4.0, 0.0)]
        })
        .unwrap();
        let m = Mask::full(g);
        assert!((sup_norm(&w, &m).unwrap() - 5.0).abs() < 1e-15);
    }

    #[test]
    fn sup_norm_of_identity_hits_corner() {
        let g = unit_grid(64);
        let w = GridFunction::sample_scalar(g, |z| z).unwrap();
        let m = Mask::full(g);
        let h = g.spacing();
        let expect = (2.0f64).sqrt() * (1.0 - h / 2.0);
        assert!((sup_norm(&w, &m).unwrap() - expect).abs() < 1e-13);
    }

    #[test]
    fn sup_norm_rejects_empty_mask() {
        let g = unit_grid(16);
        let w = GridFunction::zeros(g, 1);
        let empty = Mask::from_predicate(g, |_| false);
        assert!(matches!(sup_norm(&w, &empty), Err(Error::EmptyMask)));
    }

    #[test]
    fn c1_proxy_values() {
        let g = unit_grid(64);
        let m = Mask::full(g);
        let one = GridFunction::sample_scalar(g, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!((c1_norm_proxy(&one, &m).unwrap() - 1.0).abs() < 1e-12);

        let zero = GridFunction::zeros(g, 1);
        assert!(c1_norm_proxy(&zero, &m).unwrap() == 0.0);

        // w = z: proxy = sup|z| (on eroded mask) + 1 + 1
        let id = GridFunction::sample_scalar(g, |z| z).unwrap();
        let eroded = m.erode(1);
        let expect = sup_norm(&id, &eroded).unwrap() + 2.0;
        assert!((c1_norm_proxy(&id, &m).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn erode_dilate_roundtrip_contains() {
        let g = unit_grid(32);
        let m = Mask::disc(g, Complex64::new(0.0, 0.0), 0.6);
        let e = m.erode(2);
        assert!(e.subset_of(&m));
        let d = e.dilate(2);
        assert!(d.subset_of(&m.dilate(1)));
        assert!(e.subset_of(&d));
    }

    #[test]
    fn interp_is_exact_on_bilinear_data() {
        let g = unit_grid(16);
        let w = GridFunction::sample_scalar(g, |z| {
            Complex64::new(2.0 * z.re + 3.0 * z.im + 1.0, z.re - z.im)
        })
        .unwrap();
        let z = Complex64::new(0.123, -0.456);
        let v = w.interp(z)[0];
        assert!((v - Complex64::new(2.0 * z.re + 3.0 * z.im + 1.0, z.re - z.im)).norm() < 1e-13);
    }

    proptest! {
        #[test]
        fn dbar_is_real_linear(a in -3.0f64..3.0, b in -3.0f64..3.0) {
            let g = unit_grid(16);
            let w1 = GridFunction::sample_scalar(g, |z| z * z + z.conj()).unwrap();
            let w2 = GridFunction::sample_scalar(g, |z| (Complex64::new(0.0,1.0) * z).exp()).unwrap();
            let lhs = dbar_fd(&w1.axpby(Complex64::new(a,0.0), &w2, Complex64::new(b,0.0)).unwrap());
            let rhs = dbar_fd(&w1).axpby(Complex64::new(a,0.0), &dbar_fd(&w2), Complex64::new(b,0.0)).unwrap();
            let diff = lhs.sub(&rhs).unwrap();
            let m = Mask::full(g);
            prop_assert!(sup_norm(&diff, &m).unwrap() < 1e-10);
        }

        #[test]
        fn sup_norm_axioms(a in -5.0f64..5.0, s1 in 0usize..4, s2 in 0usize..4) {
            let g = unit_grid(16);
            let fs: [fn(Complex64) -> Complex64; 4] = [
                |z| z,
                |z| z * z - Complex64::new(0.5, 0.0),
                |z| z.conj() + Complex64::new(0.0, 1.0),
                |z| (z * Complex64::new(0.3, 0.0)).exp(),
            ];
            let w1 = GridFunction::sample_scalar(g, fs[s1]).unwrap();
            let w2 = GridFunction::sample_scalar(g, fs[s2]).unwrap();
            let m = Mask::full(g);
            // absolute homogeneity
            let lhs = sup_norm(&w1.scale(Complex64::new(a, 0.0)), &m).unwrap();
            let rhs = a.abs() * sup_norm(&w1, &m).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
            // triangle inequality
            let sum = sup_norm(&w1.add(&w2).unwrap(), &m).unwrap();
            prop_assert!(sum <= sup_norm(&w1, &m).unwrap() + sup_norm(&w2, &m).unwrap() + 1e-12);
        }
    }
}
