//! Exact Euclidean distance transforms over masks, with nearest-site
//! tracking, and the smooth extension operators built on them.

use crate::error::{Error, Result};
use crate::grid::{GridFunction, Mask};
use ndarray::Array2;

/// Squared-distance transform (in cell units) together with the nearest
/// masked node per grid node. Column sweep then row sweep; exact for the
/// Euclidean metric.
pub fn distance_and_nearest(mask: &Mask) -> (Array2<f64>, Array2<(usize, usize)>) {
    let n = mask.grid().resolution();
    // pass 1: per column i, distance in j to the nearest site of that column
    let mut col_dist = Array2::from_elem((n, n), f64::INFINITY);
    let mut col_site = Array2::from_elem((n, n), usize::MAX);
    for i in 0..n {
        let mut last: Option<usize> = None;
        for j in 0..n {
            if mask.contains(i, j) {
                last = Some(j);
            }
            if let Some(js) = last {
                col_dist[(i, j)] = (j - js) as f64;
                col_site[(i, j)] = js;
            }
        }
        let mut last: Option<usize> = None;
        for j in (0..n).rev() {
            if mask.contains(i, j) {
                last = Some(j);
            }
            if let Some(js) = last {
                let d = (js - j) as f64;
                if d < col_dist[(i, j)] {
                    col_dist[(i, j)] = d;
                    col_site[(i, j)] = js;
                }
            }
        }
    }
    // pass 2: per row j, minimize over source columns
    let mut dist = Array2::from_elem((n, n), f64::INFINITY);
    let mut site = Array2::from_elem((n, n), (usize::MAX, usize::MAX));
    for j in 0..n {
        for i in 0..n {
            let mut best = f64::INFINITY;
            let mut best_site = (usize::MAX, usize::MAX);
            for ip in 0..n {
                let cd = col_dist[(ip, j)];
                if !cd.is_finite() {
                    continue;
                }
                let dx = i as f64 - ip as f64;
                let d2 = dx * dx + cd * cd;
                if d2 < best {
                    best = d2;
                    best_site = (ip, col_site[(ip, j)]);
                }
            }
            dist[(i, j)] = best.sqrt();
            site[(i, j)] = best_site;
        }
    }
    (dist, site)
}

/// Distance (cell units) from every node to the mask.
pub fn distance_field(mask: &Mask) -> Array2<f64> {
    distance_and_nearest(mask).0
}

fn smooth_step_raw(s: f64) -> f64 {
    // ψ(s)/(ψ(s)+ψ(1−s)) with ψ(t) = e^{−1/t}: 0 at s≤0, 1 at s≥1
    if s <= 0.0 {
        0.0
    } else if s >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / s).exp();
        let b = (-1.0 / (1.0 - s)).exp();
        a / (a + b)
    }
}

/// Smooth step profile that is exactly 1 at `s ≤ 0` and exactly 0 at `s ≥ 1`.
pub fn decay_profile(s: f64) -> f64 {
    1.0 - smooth_step_raw(s)
}

/// The collar width (cells) over which [`extend_smooth`] decays to zero.
pub const EXTENSION_COLLAR_CELLS: f64 = 10.0;

/// Extend `f` off the mask by nearest-point values damped to zero across a
/// 10-cell collar. Restriction to the mask reproduces `f` exactly.
pub fn extend_smooth(f: &GridFunction, from: &Mask) -> Result<GridFunction> {
    if f.grid() != from.grid() {
        return Err(Error::GridMismatch);
    }
    if from.is_empty() {
        return Err(Error::EmptyMask);
    }
    let n = f.grid().resolution();
    let (dist, site) = distance_and_nearest(from);
    let mut out = GridFunction::zeros(f.grid(), f.dim());
    for i in 0..n {
        for j in 0..n {
            if from.contains(i, j) {
                for c in 0..f.dim() {
                    out.set(i, j, c, f.get(i, j, c));
                }
                continue;
            }
            let rho = decay_profile(dist[(i, j)] / EXTENSION_COLLAR_CELLS);
            if rho == 0.0 {
                continue;
            }
            let (si, sj) = site[(i, j)];
            for c in 0..f.dim() {
                out.set(i, j, c, f.get(si, sj, c) * rho);
            }
        }
    }
    Ok(out)
}

/// Undamped nearest-point extension: every node takes the value of its
/// nearest masked node. Used where the extension of a near-solution must
/// stay a near-solution close to the mask.
pub fn nearest_point_extend(f: &GridFunction, from: &Mask) -> Result<GridFunction> {
    if f.grid() != from.grid() {
        return Err(Error::GridMismatch);
    }
    if from.is_empty() {
        return Err(Error::EmptyMask);
    }
    let n = f.grid().resolution();
    let (_, site) = distance_and_nearest(from);
    let mut out = GridFunction::zeros(f.grid(), f.dim());
    for i in 0..n {
        for j in 0..n {
            let (si, sj) = if from.contains(i, j) {
                (i, j)
            } else {
                site[(i, j)]
            };
            for c in 0..f.dim() {
                out.set(i, j, c, f.get(si, sj, c));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{c1_norm_proxy, sup_norm, Grid};
    use num_complex::Complex64;

    fn grid(n: usize) -> Grid {
        Grid::new(Complex64::new(0.0, 0.0), 1.0, n).unwrap()
    }

    #[test]
    fn distance_transform_matches_brute_force() {
        let g = grid(32);
        let m = Mask::from_predicate(g, |z| {
            (z - Complex64::new(0.3, -0.2)).norm() < 0.25 || z.re + z.im > 1.2
        });
        let (dist, site) = distance_and_nearest(&m);
        let sites = m.nodes();
        for i in 0..32 {
            for j in 0..32 {
                let mut best = f64::INFINITY;
                for &(si, sj) in &sites {
                    let dx = i as f64 - si as f64;
                    let dy = j as f64 - sj as f64;
                    best = best.min((dx * dx + dy * dy).sqrt());
                }
                assert!(
                    (dist[(i, j)] - best).abs() < 1e-9,
                    "node ({i},{j}): {} vs {best}",
                    dist[(i, j)]
                );
                let (si, sj) = site[(i, j)];
                let dx = i as f64 - si as f64;
                let dy = j as f64 - sj as f64;
                assert!(((dx * dx + dy * dy).sqrt() - best).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn profile_endpoints_and_midpoint() {
        assert_eq!(decay_profile(0.0), 1.0);
        assert_eq!(decay_profile(1.0), 0.0);
        assert!((decay_profile(0.5) - 0.5).abs() < 1e-12);
        assert!(decay_profile(0.2) > decay_profile(0.8));
    }

    #[test]
    fn extension_restricts_exactly_and_decays() {
        let g = grid(64);
        let disc = Mask::disc(g, Complex64::new(0.0, 0.0), 0.4);
        let one = GridFunction::sample_scalar(g, |_| Complex64::new(1.0, 0.0)).unwrap();
        let ext = extend_smooth(&one, &disc).unwrap();
        for (i, j) in disc.nodes() {
            assert_eq!(ext.get(i, j, 0), Complex64::new(1.0, 0.0));
        }
        // values stay in [0,1] and vanish beyond the collar
        let far = disc.dilate(12).complement();
        assert_eq!(sup_norm(&ext, &far).unwrap(), 0.0);
        for i in 0..64 {
            for j in 0..64 {
                let v = ext.get(i, j, 0);
                assert!(v.im == 0.0 && (0.0..=1.0).contains(&v.re));
            }
        }
    }

    #[test]
    fn extension_is_identity_on_full_grid() {
        let g = grid(16);
        let f = GridFunction::sample_scalar(g, |z| z * z + z.conj()).unwrap();
        let ext = extend_smooth(&f, &Mask::full(g)).unwrap();
        let diff = ext.sub(&f).unwrap();
        assert_eq!(sup_norm(&diff, &Mask::full(g)).unwrap(), 0.0);
    }

    #[test]
    fn extension_norm_bound_half_plane() {
        // f = z on a half-plane mask: extension agrees on the mask and keeps
        // a grid-uniform proxy-norm bound
        let g = grid(64);
        let half = Mask::from_predicate(g, |z| z.re < 0.0);
        let f = GridFunction::sample_scalar(g, |z| z).unwrap();
        let ext = extend_smooth(&f, &half).unwrap();
        for (i, j) in half.nodes() {
            assert_eq!(ext.get(i, j, 0), f.get(i, j, 0));
        }
        let full = Mask::full(g);
        let c_in = c1_norm_proxy(&f, &full).unwrap();
        let c_out = c1_norm_proxy(&ext, &full).unwrap();
        assert!(c_out <= 50.0 * c_in, "C_ext = {}", c_out / c_in);
    }
}
