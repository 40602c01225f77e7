//! Independent reference implementations used by the test suites.
//!
//! Everything here trades speed for directness: quadruple-loop summation,
//! union-find labeling, dense normal equations. None of it shares code with
//! the fast paths it is used to check.

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction, Mask};
use ndarray::Array2;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Direct `O(N⁴)` evaluation of the Cauchy–Green sum
/// `u(z_p) = −(1/π) Σ_{ζ_q ∈ D} g(ζ_q)/(ζ_q − z_p) · h²`.
pub fn cg_apply_direct(domain: &Mask, g: &GridFunction) -> Result<GridFunction> {
    if g.grid() != domain.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = g.grid();
    let n = grid.resolution();
    let h = grid.spacing();
    let scale = h * h / PI;
    let sources = domain.nodes();
    let mut out = GridFunction::zeros(grid, g.dim());
    for c in 0..g.dim() {
        for pi in 0..n {
            for pj in 0..n {
                let zp = grid.node(pi, pj);
                let mut acc = Complex64::default();
                for &(qi, qj) in &sources {
                    if qi == pi && qj == pj {
                        continue; // zero self-offset kernel entry
                    }
                    let zq = grid.node(qi, qj);
                    acc += g.get(qi, qj, c) / (zp - zq);
                }
                out.set(pi, pj, c, acc * scale);
            }
        }
    }
    Ok(out)
}

/// Union-find connected-component labeling (4-connectivity) of the `true`
/// nodes of a mask. Returns a label array (`usize::MAX` outside the mask)
/// and the number of components.
pub fn label_components(mask: &Mask) -> (Array2<usize>, usize) {
    let n = mask.grid().resolution();
    let idx = |i: usize, j: usize| i * n + j;
    let mut parent: Vec<usize> = (0..n * n).collect();

    fn find(parent: &mut [usize], mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    fn union(parent: &mut [usize], a: usize, b: usize) {
        let ra = find(parent, a);
        let rb = find(parent, b);
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }

    for i in 0..n {
        for j in 0..n {
            if !mask.contains(i, j) {
                continue;
            }
            if i + 1 < n && mask.contains(i + 1, j) {
                union(&mut parent, idx(i, j), idx(i + 1, j));
            }
            if j + 1 < n && mask.contains(i, j + 1) {
                union(&mut parent, idx(i, j), idx(i, j + 1));
            }
        }
    }

    let mut labels = Array2::from_elem((n, n), usize::MAX);
    let mut remap: std::collections::BTreeMap<usize, usize> = Default::default();
    for i in 0..n {
        for j in 0..n {
            if mask.contains(i, j) {
                let root = find(&mut parent, idx(i, j));
                let next = remap.len();
                let lab = *remap.entry(root).or_insert(next);
                labels[(i, j)] = lab;
            }
        }
    }
    (labels, remap.len())
}

/// Runge check by labeling: every component of `ambient ∖ s` must contain a
/// node on the inner boundary of the ambient mask.
pub fn runge_by_labeling(ambient: &Mask, s: &Mask) -> bool {
    let complement = ambient.intersect(&s.complement()).expect("same grid");
    let (labels, count) = label_components(&complement);
    if count == 0 {
        return true;
    }
    let n = ambient.grid().resolution();
    let mut escapes = vec![false; count];
    for i in 0..n {
        for j in 0..n {
            let lab = labels[(i, j)];
            if lab == usize::MAX {
                continue;
            }
            let at_grid_edge = i == 0 || j == 0 || i == n - 1 || j == n - 1;
            let at_ambient_edge = at_grid_edge
                || !ambient.contains(i - 1, j)
                || !ambient.contains(i + 1, j)
                || !ambient.contains(i, j - 1)
                || !ambient.contains(i, j + 1);
            if at_ambient_edge {
                escapes[lab] = true;
            }
        }
    }
    escapes.iter().all(|&e| e)
}

/// Dense complex polynomial least squares: fit `Σ_k c_k z^k` (degree ≤ `deg`)
/// to `values` at `points` by normal equations and Gaussian elimination.
/// Returns the fitted coefficients.
pub fn polyfit_complex(points: &[Complex64], values: &[Complex64], deg: usize) -> Vec<Complex64> {
    let m = deg + 1;
    // normal matrix A^H A and rhs A^H b in complex arithmetic
    let mut ata = vec![Complex64::default(); m * m];
    let mut atb = vec![Complex64::default(); m];
    let mut pows = vec![Complex64::default(); m];
    for (p, &z) in points.iter().enumerate() {
        let mut zp = Complex64::new(1.0, 0.0);
        for item in pows.iter_mut() {
            *item = zp;
            zp *= z;
        }
        for r in 0..m {
            for c in 0..m {
                ata[r * m + c] += pows[r].conj() * pows[c];
            }
            atb[r] += pows[r].conj() * values[p];
        }
    }
    // Gaussian elimination with partial pivoting
    for col in 0..m {
        let mut piv = col;
        for r in (col + 1)..m {
            if ata[r * m + col].norm() > ata[piv * m + col].norm() {
                piv = r;
            }
        }
        if piv != col {
            for c in 0..m {
                ata.swap(col * m + c, piv * m + c);
            }
            atb.swap(col, piv);
        }
        let d = ata[col * m + col];
        if d.norm() == 0.0 {
            continue;
        }
        for r in 0..m {
            if r == col {
                continue;
            }
            let f = ata[r * m + col] / d;
            for c in col..m {
                let v = ata[col * m + c];
                ata[r * m + c] -= f * v;
            }
            let v = atb[col];
            atb[r] -= f * v;
        }
    }
    (0..m)
        .map(|r| {
            let d = ata[r * m + r];
            if d.norm() == 0.0 {
                Complex64::default()
            } else {
                atb[r] / d
            }
        })
        .collect()
}

/// Evaluate a complex polynomial with the given coefficients at `z`.
pub fn polyval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::default();
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Brute-force minimum of a sampled scalar field over grid nodes inside a
/// disc; used to re-check Carleman schedule minima.
pub fn min_over_disc(grid: Grid, f: &dyn Fn(Complex64) -> f64, radius: f64) -> f64 {
    let n = grid.resolution();
    let mut best = f64::INFINITY;
    for i in 0..n {
        for j in 0..n {
            let z = grid.node(i, j);
            if z.norm() <= radius {
                best = best.min(f(z));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polyfit_recovers_polynomial() {
        let pts: Vec<Complex64> = (0..40)
            .map(|k| {
                let t = k as f64 / 40.0 * 2.0 * PI;
                Complex64::new(t.cos(), t.sin()) * 0.7
            })
            .collect();
        let truth = [
            Complex64::new(1.0, -0.5),
            Complex64::new(0.0, 2.0),
            Complex64::new(-3.0, 0.25),
        ];
        let vals: Vec<Complex64> = pts.iter().map(|&z| polyval(&truth, z)).collect();
        let fit = polyfit_complex(&pts, &vals, 2);
        for (a, b) in fit.iter().zip(truth.iter()) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn labeling_counts_blobs() {
        let g = Grid::new(Complex64::new(0.0, 0.0), 1.0, 32).unwrap();
        let two = Mask::from_predicate(g, |z| {
            (z - Complex64::new(-0.5, 0.0)).norm() < 0.2 || (z - Complex64::new(0.5, 0.0)).norm() < 0.2
        });
        let (_, count) = label_components(&two);
        assert_eq!(count, 2);
    }
}
