//! Admissible sets `S = K ∪ E`, Runge and transversality validation,
//! smooth cut-offs, smooth extensions and arc extensions.

pub mod arcs;
pub mod distance;
pub mod spline;

pub use arcs::{arc_extend, ArcExtension, ArcSamples};
pub use distance::{
    decay_profile, distance_field, extend_smooth, nearest_point_extend, EXTENSION_COLLAR_CELLS,
};

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction, Mask};
use num_complex::Complex64;
use serde::Serialize;
use spline::CubicSpline;

/// Minimum intersection angle (degrees) accepted as transverse.
pub const MIN_TRANSVERSAL_ANGLE_DEG: f64 = 15.0;

// ------------------------------------------------------------------ curves

/// Parametric plane curve through control points, chordal cubic splines per
/// coordinate.
#[derive(Debug, Clone)]
pub struct Curve {
    sx: CubicSpline,
    sy: CubicSpline,
    t_start: f64,
    t_end: f64,
    closed: bool,
}

impl Curve {
    pub fn through(points: &[Complex64], closed: bool) -> Result<Self> {
        let min_pts = if closed { 3 } else { 2 };
        if points.len() < min_pts {
            return Err(Error::NotAdmissible(format!(
                "curve needs at least {min_pts} control points, got {}",
                points.len()
            )));
        }
        let mut pts: Vec<Complex64> = points.to_vec();
        if closed {
            pts.push(points[0]);
        }
        let mut ts = vec![0.0];
        for w in pts.windows(2) {
            let d = (w[1] - w[0]).norm();
            if d == 0.0 {
                return Err(Error::NotAdmissible(
                    "repeated consecutive control points".into(),
                ));
            }
            ts.push(ts.last().unwrap() + d);
        }
        let xs: Vec<f64> = pts.iter().map(|p| p.re).collect();
        let ys: Vec<f64> = pts.iter().map(|p| p.im).collect();
        let (sx, sy) = if closed {
            (
                CubicSpline::periodic(ts.clone(), xs),
                CubicSpline::periodic(ts.clone(), ys),
            )
        } else {
            (
                CubicSpline::natural(ts.clone(), xs),
                CubicSpline::natural(ts.clone(), ys),
            )
        };
        Ok(Self {
            sx,
            sy,
            t_start: ts[0],
            t_end: *ts.last().unwrap(),
            closed,
        })
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn closed(&self) -> bool {
        self.closed
    }

    fn wrap(&self, t: f64) -> f64 {
        if self.closed {
            self.t_start + (t - self.t_start).rem_euclid(self.t_end - self.t_start)
        } else {
            t
        }
    }

    pub fn point(&self, t: f64) -> Complex64 {
        let t = self.wrap(t);
        Complex64::new(self.sx.eval(t), self.sy.eval(t))
    }

    pub fn tangent(&self, t: f64) -> Complex64 {
        let t = self.wrap(t);
        Complex64::new(self.sx.deriv(t), self.sy.deriv(t))
    }

    pub fn second_derivative(&self, t: f64) -> Complex64 {
        let t = self.wrap(t);
        Complex64::new(self.sx.deriv2(t), self.sy.deriv2(t))
    }

    /// `m` points at uniform parameter spacing (endpoint included for open
    /// curves, excluded for closed ones).
    pub fn polyline(&self, m: usize) -> Vec<Complex64> {
        let span = self.t_end - self.t_start;
        if self.closed {
            (0..m)
                .map(|k| self.point(self.t_start + span * k as f64 / m as f64))
                .collect()
        } else {
            (0..=m)
                .map(|k| self.point(self.t_start + span * k as f64 / m as f64))
                .collect()
        }
    }

    /// Arc length estimate from a dense polyline.
    pub fn length(&self, m: usize) -> f64 {
        let pts = self.polyline(m);
        let mut len = 0.0;
        for w in pts.windows(2) {
            len += (w[1] - w[0]).norm();
        }
        if self.closed {
            len += (pts[0] - pts[pts.len() - 1]).norm();
        }
        len
    }
}

fn segments_of(poly: &[Complex64], closed: bool) -> Vec<(Complex64, Complex64)> {
    let mut segs: Vec<(Complex64, Complex64)> = poly.windows(2).map(|w| (w[0], w[1])).collect();
    if closed {
        segs.push((poly[poly.len() - 1], poly[0]));
    }
    segs
}

fn segments_intersect(a: (Complex64, Complex64), b: (Complex64, Complex64)) -> bool {
    let cross = |o: Complex64, p: Complex64, q: Complex64| {
        (p.re - o.re) * (q.im - o.im) - (p.im - o.im) * (q.re - o.re)
    };
    let (p1, p2) = a;
    let (q1, q2) = b;
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    (d1 * d2 < 0.0) && (d3 * d4 < 0.0)
}

fn polyline_is_simple(poly: &[Complex64], closed: bool) -> bool {
    let segs = segments_of(poly, closed);
    let n = segs.len();
    for i in 0..n {
        for j in (i + 2)..n {
            if closed && i == 0 && j == n - 1 {
                continue; // adjacent around the seam
            }
            if segments_intersect(segs[i], segs[j]) {
                return false;
            }
        }
    }
    true
}

fn polyline_area(poly: &[Complex64]) -> f64 {
    let mut acc = 0.0;
    let n = poly.len();
    for k in 0..n {
        let p = poly[k];
        let q = poly[(k + 1) % n];
        acc += p.re * q.im - q.re * p.im;
    }
    acc.abs() / 2.0
}

fn point_in_polygon(z: Complex64, poly: &[Complex64]) -> bool {
    let mut inside = false;
    let n = poly.len();
    for k in 0..n {
        let p = poly[k];
        let q = poly[(k + 1) % n];
        if (p.im <= z.im) != (q.im <= z.im) {
            let x = p.re + (z.im - p.im) * (q.re - p.re) / (q.im - p.im);
            if x > z.re {
                inside = !inside;
            }
        }
    }
    inside
}

fn point_polyline_distance(z: Complex64, poly: &[Complex64], closed: bool) -> (f64, usize) {
    let segs = segments_of(poly, closed);
    let mut best = f64::INFINITY;
    let mut best_idx = 0;
    for (k, (p, q)) in segs.iter().enumerate() {
        let d = q - p;
        let len2 = d.norm_sqr();
        let t = if len2 == 0.0 {
            0.0
        } else {
            (((z - p).re * d.re + (z - p).im * d.im) / len2).clamp(0.0, 1.0)
        };
        let proj = p + d * t;
        let dist = (z - proj).norm();
        if dist < best {
            best = dist;
            best_idx = k;
        }
    }
    (best, best_idx)
}

// ----------------------------------------------------------------- domains

/// A compact smoothly bounded domain given by a closed boundary curve.
#[derive(Debug, Clone)]
pub struct CompactDomain {
    boundary: Curve,
    control_points: Vec<Complex64>,
}

impl CompactDomain {
    pub fn new(control_points: Vec<Complex64>) -> Result<Self> {
        let boundary = Curve::through(&control_points, true)?;
        Ok(Self {
            boundary,
            control_points,
        })
    }

    /// Disc of radius `r` about `c`, 16 control points on the circle.
    pub fn circle(c: Complex64, r: f64) -> Self {
        let pts: Vec<Complex64> = (0..16)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / 16.0;
                c + Complex64::new(r * a.cos(), r * a.sin())
            })
            .collect();
        Self::new(pts).expect("circle control points are valid")
    }

    pub fn boundary(&self) -> &Curve {
        &self.boundary
    }

    pub fn control_points(&self) -> &[Complex64] {
        &self.control_points
    }

    fn dense_polyline(&self, grid: Grid) -> Vec<Complex64> {
        let len = self.boundary.length(256);
        let m = ((4.0 * len / grid.spacing()).ceil() as usize).clamp(256, 8192);
        self.boundary.polyline(m)
    }

    /// Interior mask on a grid (scanline even-odd rule on a dense polyline).
    pub fn mask(&self, grid: Grid) -> Mask {
        let poly = self.dense_polyline(grid);
        let n = grid.resolution();
        let mut mask = Mask::from_predicate(grid, |_| false);
        for j in 0..n {
            let y = grid.node(0, j).im;
            let mut xs: Vec<f64> = Vec::new();
            let np = poly.len();
            for k in 0..np {
                let p = poly[k];
                let q = poly[(k + 1) % np];
                if (p.im <= y) != (q.im <= y) {
                    xs.push(p.re + (y - p.im) * (q.re - p.re) / (q.im - p.im));
                }
            }
            xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            // nodes between crossings 2k and 2k+1 are inside
            for pair in xs.chunks(2) {
                if pair.len() < 2 {
                    break;
                }
                for i in 0..n {
                    let x = grid.node(i, j).re;
                    if x > pair[0] && x < pair[1] {
                        mask.set(i, j, true);
                    }
                }
            }
        }
        mask
    }
}

/// A smooth Jordan arc or closed Jordan curve through control points.
#[derive(Debug, Clone)]
pub struct JordanArc {
    curve: Curve,
    control_points: Vec<Complex64>,
    closed: bool,
}

impl JordanArc {
    pub fn new(control_points: Vec<Complex64>, closed: bool) -> Result<Self> {
        let curve = Curve::through(&control_points, closed)?;
        Ok(Self {
            curve,
            control_points,
            closed,
        })
    }

    /// Straight segment from `a` to `b` (8 collinear control points).
    pub fn segment(a: Complex64, b: Complex64) -> Self {
        let pts: Vec<Complex64> = (0..8)
            .map(|k| a + (b - a) * (k as f64 / 7.0))
            .collect();
        Self::new(pts, false).expect("segment control points are valid")
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn closed(&self) -> bool {
        self.closed
    }

    pub fn control_points(&self) -> &[Complex64] {
        &self.control_points
    }

    pub fn start(&self) -> Complex64 {
        self.curve.point(self.curve.t_start())
    }

    pub fn end(&self) -> Complex64 {
        self.curve.point(self.curve.t_end())
    }
}

// ------------------------------------------------------------- validation

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Outcome of [`validate_admissible`], one entry per condition.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    /// Intersection angles (degrees) measured at arc attachment points.
    pub angles_deg: Vec<f64>,
    /// A node of a relatively compact complement component, if Runge fails.
    pub offending_component: Option<(f64, f64)>,
    pub pass: bool,
}

/// `S = K ∪ E` with its ambient domain mask.
pub struct AdmissibleSet {
    pub domains: Vec<CompactDomain>,
    pub arcs: Vec<JordanArc>,
    pub grid: Grid,
    pub ambient: Mask,
}

impl AdmissibleSet {
    pub fn new(domains: Vec<CompactDomain>, arcs: Vec<JordanArc>, grid: Grid, ambient: Mask) -> Self {
        Self {
            domains,
            arcs,
            grid,
            ambient,
        }
    }

    /// Union of the domain masks (the K part).
    pub fn k_mask(&self) -> Mask {
        let mut m = Mask::from_predicate(self.grid, |_| false);
        for d in &self.domains {
            m = m.union(&d.mask(self.grid)).expect("same grid");
        }
        m
    }

    /// Nodes of cells crossed by the arcs (the E part at grid resolution).
    pub fn arc_cells(&self) -> Mask {
        let mut m = Mask::from_predicate(self.grid, |_| false);
        let n = self.grid.resolution();
        let h = self.grid.spacing();
        for arc in &self.arcs {
            let len = arc.curve().length(256);
            let samples = ((8.0 * len / h).ceil() as usize).max(64);
            for p in arc.curve().polyline(samples) {
                let fx = (p.re - self.grid.center().re + self.grid.half_width()) / h - 0.5;
                let fy = (p.im - self.grid.center().im + self.grid.half_width()) / h - 0.5;
                let i = fx.round().clamp(0.0, (n - 1) as f64) as usize;
                let j = fy.round().clamp(0.0, (n - 1) as f64) as usize;
                m.set(i, j, true);
            }
        }
        m
    }

    /// K ∪ E at grid resolution.
    pub fn s_mask(&self) -> Mask {
        self.k_mask().union(&self.arc_cells()).expect("same grid")
    }
}

/// Breadth-first Runge check: every component of `ambient ∖ s` must reach
/// the inner boundary of the ambient mask. Returns an offending node
/// coordinate when one does not.
pub fn mask_is_runge(ambient: &Mask, s: &Mask) -> Result<(bool, Option<(f64, f64)>)> {
    if ambient.grid() != s.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = ambient.grid();
    let n = grid.resolution();
    let complement = ambient.intersect(&s.complement())?;
    let mut visited = ndarray::Array2::from_elem((n, n), false);
    let mut queue: std::collections::VecDeque<(usize, usize)> = Default::default();
    for i in 0..n {
        for j in 0..n {
            if !complement.contains(i, j) {
                continue;
            }
            let at_edge = i == 0
                || j == 0
                || i == n - 1
                || j == n - 1
                || !ambient.contains(i - 1, j)
                || !ambient.contains(i + 1, j)
                || !ambient.contains(i, j - 1)
                || !ambient.contains(i, j + 1);
            if at_edge {
                visited[(i, j)] = true;
                queue.push_back((i, j));
            }
        }
    }
    while let Some((i, j)) = queue.pop_front() {
        let mut push = |a: usize, b: usize, visited: &mut ndarray::Array2<bool>,
                        queue: &mut std::collections::VecDeque<(usize, usize)>| {
            if complement.contains(a, b) && !visited[(a, b)] {
                visited[(a, b)] = true;
                queue.push_back((a, b));
            }
        };
        if i > 0 {
            push(i - 1, j, &mut visited, &mut queue);
        }
        if i < n - 1 {
            push(i + 1, j, &mut visited, &mut queue);
        }
        if j > 0 {
            push(i, j - 1, &mut visited, &mut queue);
        }
        if j < n - 1 {
            push(i, j + 1, &mut visited, &mut queue);
        }
    }
    for i in 0..n {
        for j in 0..n {
            if complement.contains(i, j) && !visited[(i, j)] {
                let z = grid.node(i, j);
                return Ok((false, Some((z.re, z.im))));
            }
        }
    }
    Ok((true, None))
}

/// Validate all admissibility conditions and report each one.
pub fn validate_admissible(s: &AdmissibleSet) -> Result<ValidationReport> {
    let grid = s.grid;
    let h = grid.spacing();
    let mut checks = Vec::new();
    let mut angles = Vec::new();

    // boundary simplicity and positive area
    let mut simple_ok = true;
    let mut simple_detail = String::from("all curves simple");
    for (k, d) in s.domains.iter().enumerate() {
        let poly = d.boundary.polyline(512);
        if !polyline_is_simple(&poly, true) {
            simple_ok = false;
            simple_detail = format!("domain {k} boundary self-intersects");
            break;
        }
        if polyline_area(&poly) <= 4.0 * h * h {
            simple_ok = false;
            simple_detail = format!("domain {k} has (near-)zero area");
            break;
        }
    }
    if simple_ok {
        for (k, a) in s.arcs.iter().enumerate() {
            let poly = a.curve.polyline(512);
            if !polyline_is_simple(&poly, a.closed) {
                simple_ok = false;
                simple_detail = format!("arc {k} self-intersects");
                break;
            }
            let immersed = (0..=512).all(|q| {
                let t = a.curve.t_start()
                    + (a.curve.t_end() - a.curve.t_start()) * q as f64 / 512.0;
                a.curve.tangent(t).norm() > 1e-12
            });
            if !immersed {
                simple_ok = false;
                simple_detail = format!("arc {k} has a vanishing tangent");
                break;
            }
        }
    }
    checks.push(Check {
        name: "simplicity".into(),
        pass: simple_ok,
        detail: simple_detail,
    });

    // pairwise disjoint domains
    let mut disjoint_ok = true;
    let mut disjoint_detail = String::from("domains pairwise disjoint");
    'outer: for a in 0..s.domains.len() {
        for b in (a + 1)..s.domains.len() {
            let ma = s.domains[a].mask(grid).dilate(1);
            let mb = s.domains[b].mask(grid);
            if !ma.intersect(&mb)?.is_empty() {
                disjoint_ok = false;
                disjoint_detail = format!("domains {a} and {b} touch or overlap");
                break 'outer;
            }
        }
    }
    checks.push(Check {
        name: "disjointness".into(),
        pass: disjoint_ok,
        detail: disjoint_detail,
    });

    // arcs meet K only at endpoints, and transversally
    let mut meet_ok = true;
    let mut meet_detail = String::from("arcs meet domains only at endpoints");
    let mut transversal_ok = true;
    let mut transversal_detail = String::from("all attachments transverse");
    for (ai, arc) in s.arcs.iter().enumerate() {
        let t0 = arc.curve.t_start();
        let t1 = arc.curve.t_end();
        let samples = 512usize;
        for (di, dom) in s.domains.iter().enumerate() {
            let poly = dom.dense_polyline(grid);
            // interior samples stay outside the closed domain
            for q in 0..=samples {
                let t = t0 + (t1 - t0) * q as f64 / samples as f64;
                let z = arc.curve.point(t);
                let near_start = !arc.closed && (z - arc.start()).norm() <= 3.0 * h;
                let near_end = !arc.closed && (z - arc.end()).norm() <= 3.0 * h;
                if near_start || near_end {
                    continue;
                }
                let (dist, _) = point_polyline_distance(z, &poly, true);
                if point_in_polygon(z, &poly) && dist > 0.5 * h {
                    meet_ok = false;
                    meet_detail = format!(
                        "arc {ai} interior enters domain {di} near ({:.4}, {:.4})",
                        z.re, z.im
                    );
                }
            }
            // transversality at attached endpoints
            if !arc.closed {
                for (t_end, label) in [(t0, "start"), (t1, "end")] {
                    let z = arc.curve.point(t_end);
                    let (dist, seg) = point_polyline_distance(z, &poly, true);
                    if dist <= 1.5 * h {
                        let arc_tan = arc.curve.tangent(t_end);
                        let np = poly.len();
                        let bdry_tan = poly[(seg + 1) % np] - poly[seg];
                        let dot = (arc_tan.re * bdry_tan.re + arc_tan.im * bdry_tan.im).abs();
                        let denom = arc_tan.norm() * bdry_tan.norm();
                        let angle = (dot / denom).clamp(0.0, 1.0).acos().to_degrees();
                        // acos of |cos| lands in [0°,90°]; angle from the line pair
                        let angle = 90.0 - (90.0 - angle).abs();
                        angles.push(angle);
                        if angle < MIN_TRANSVERSAL_ANGLE_DEG {
                            transversal_ok = false;
                            transversal_detail = format!(
                                "arc {ai} {label} meets domain {di} at {angle:.1}°, below {MIN_TRANSVERSAL_ANGLE_DEG}°"
                            );
                        }
                    }
                }
            }
        }
    }
    checks.push(Check {
        name: "arcs_meet_only_endpoints".into(),
        pass: meet_ok,
        detail: meet_detail,
    });
    checks.push(Check {
        name: "transversality".into(),
        pass: transversal_ok,
        detail: transversal_detail,
    });

    // Runge condition by flood fill
    let (runge_ok, offending) = mask_is_runge(&s.ambient, &s.s_mask())?;
    checks.push(Check {
        name: "runge".into(),
        pass: runge_ok,
        detail: if runge_ok {
            "no relatively compact complement component".into()
        } else {
            let (x, y) = offending.unwrap();
            format!("relatively compact complement component near ({x:.4}, {y:.4})")
        },
    });

    let pass = checks.iter().all(|c| c.pass);
    Ok(ValidationReport {
        checks,
        angles_deg: angles,
        offending_component: offending,
        pass,
    })
}

// ---------------------------------------------------------------- cutoffs

/// A smooth cut-off: exactly 1 on `inner`, exactly 0 outside `outer`.
pub struct CutoffFunction {
    pub inner: Mask,
    pub outer: Mask,
    pub values: GridFunction,
}

impl CutoffFunction {
    /// Cut-off value at an arbitrary point (bilinear, clamped to [0,1]).
    pub fn at(&self, z: Complex64) -> f64 {
        self.values.interp(z)[0].re.clamp(0.0, 1.0)
    }

    /// Pointwise blend `φ·a + (1−φ)·b` on the grid.
    pub fn blend(&self, a: &GridFunction, b: &GridFunction) -> Result<GridFunction> {
        if a.grid() != self.values.grid() || b.grid() != self.values.grid() {
            return Err(Error::GridMismatch);
        }
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                got: b.dim(),
            });
        }
        let n = a.grid().resolution();
        let mut out = GridFunction::zeros(a.grid(), a.dim());
        for i in 0..n {
            for j in 0..n {
                let phi = self.values.get(i, j, 0).re;
                for c in 0..a.dim() {
                    out.set(
                        i,
                        j,
                        c,
                        a.get(i, j, c) * phi + b.get(i, j, c) * (1.0 - phi),
                    );
                }
            }
        }
        Ok(out)
    }
}

/// Build a smooth cut-off from normalized distances: 1 on `inner`, 0 outside
/// `outer`, the `e^{−1/t}` smooth step across the gap.
pub fn make_cutoff(inner: &Mask, outer: &Mask) -> Result<CutoffFunction> {
    if inner.grid() != outer.grid() {
        return Err(Error::GridMismatch);
    }
    if inner.is_empty() {
        return Err(Error::EmptyMask);
    }
    if !inner.dilate(2).subset_of(outer) {
        return Err(Error::CutoffGapTooThin { needed: 2, got: 0 });
    }
    let outside = outer.complement();
    if outside.is_empty() {
        return Err(Error::ExtensionFailure(
            "outer mask covers the whole grid; no room for the cut-off to vanish".into(),
        ));
    }
    let grid = inner.grid();
    let n = grid.resolution();
    let d_in = distance_field(inner);
    let d_out = distance_field(&outside);
    let mut values = GridFunction::zeros(grid, 1);
    for i in 0..n {
        for j in 0..n {
            let phi = if inner.contains(i, j) {
                1.0
            } else if !outer.contains(i, j) {
                0.0
            } else {
                let s = d_in[(i, j)] / (d_in[(i, j)] + d_out[(i, j)]);
                decay_profile(s)
            };
            values.set(i, j, 0, Complex64::new(phi, 0.0));
        }
    }
    Ok(CutoffFunction {
        inner: inner.clone(),
        outer: outer.clone(),
        values,
    })
}
