//! Cubic spline interpolation (natural and periodic ends) and parametric
//! plane curves built from control points.

/// Cubic spline through `(xs, ys)` with natural or periodic end conditions.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// second derivatives at the knots
    m: Vec<f64>,
}

impl CubicSpline {
    /// Natural spline: second derivative zero at both ends.
    pub fn natural(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        assert!(xs.len() >= 2 && xs.len() == ys.len());
        assert!(xs.windows(2).all(|w| w[1] > w[0]), "knots must increase");
        let n = xs.len();
        let mut m = vec![0.0; n];
        if n > 2 {
            // tridiagonal system for interior second derivatives
            let k = n - 2;
            let mut sub = vec![0.0; k];
            let mut diag = vec![0.0; k];
            let mut sup = vec![0.0; k];
            let mut rhs = vec![0.0; k];
            for r in 0..k {
                let i = r + 1;
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                sub[r] = h0;
                diag[r] = 2.0 * (h0 + h1);
                sup[r] = h1;
                rhs[r] = 6.0 * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
            }
            // Thomas algorithm
            for r in 1..k {
                let w = sub[r] / diag[r - 1];
                diag[r] -= w * sup[r - 1];
                rhs[r] -= w * rhs[r - 1];
            }
            let mut sol = vec![0.0; k];
            sol[k - 1] = rhs[k - 1] / diag[k - 1];
            for r in (0..k - 1).rev() {
                sol[r] = (rhs[r] - sup[r] * sol[r + 1]) / diag[r];
            }
            m[1..=k].copy_from_slice(&sol);
        }
        Self { xs, ys, m }
    }

    /// Periodic spline; `ys` must satisfy `ys[0] == ys[n-1]` and the knot
    /// span is treated as one full period.
    pub fn periodic(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        assert!(xs.len() >= 3 && xs.len() == ys.len());
        let n = xs.len() - 1; // unknown second derivatives m_0..m_{n-1}, m_n = m_0
        if n < 3 {
            return Self::natural(xs, ys);
        }
        let h: Vec<f64> = (0..n).map(|i| xs[i + 1] - xs[i]).collect();
        // cyclic tridiagonal system, solved by Sherman–Morrison
        let mut diag = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        let mut sub = vec![0.0; n];
        let mut sup = vec![0.0; n];
        for i in 0..n {
            let h_prev = h[(i + n - 1) % n];
            let h_next = h[i];
            diag[i] = 2.0 * (h_prev + h_next);
            sub[i] = h_prev;
            sup[i] = h_next;
            let y_prev = ys[(i + n - 1) % n];
            let y_next = ys[(i + 1) % n];
            rhs[i] = 6.0 * ((y_next - ys[i]) / h_next - (ys[i] - y_prev) / h_prev);
        }
        let solve_tri = |sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]| -> Vec<f64> {
            let k = rhs.len();
            let mut d = diag.to_vec();
            let mut r = rhs.to_vec();
            for i in 1..k {
                let w = sub[i] / d[i - 1];
                d[i] -= w * sup[i - 1];
                r[i] -= w * r[i - 1];
            }
            let mut x = vec![0.0; k];
            x[k - 1] = r[k - 1] / d[k - 1];
            for i in (0..k - 1).rev() {
                x[i] = (r[i] - sup[i] * x[i + 1]) / d[i];
            }
            x
        };
        // corner entries: A[0][n-1] = sub[0], A[n-1][0] = sup[n-1]
        let gamma = -diag[0];
        let mut dmod = diag.clone();
        dmod[0] -= gamma;
        dmod[n - 1] -= sub[0] * sup[n - 1] / gamma;
        let x1 = solve_tri(&sub, &dmod, &sup, &rhs);
        let mut u = vec![0.0; n];
        u[0] = gamma;
        u[n - 1] = sup[n - 1];
        let x2 = solve_tri(&sub, &dmod, &sup, &u);
        let fact = (x1[0] + sub[0] * x1[n - 1] / gamma) / (1.0 + x2[0] + sub[0] * x2[n - 1] / gamma);
        let mut m = vec![0.0; xs.len()];
        for i in 0..n {
            m[i] = x1[i] - fact * x2[i];
        }
        m[xs.len() - 1] = m[0];
        Self { xs, ys, m }
    }

    fn segment(&self, t: f64) -> usize {
        let n = self.xs.len();
        match self.xs.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        }
    }

    /// Value at `t`; linear continuation outside the knot range.
    pub fn eval(&self, t: f64) -> f64 {
        let n = self.xs.len();
        if t < self.xs[0] {
            return self.ys[0] + self.deriv(self.xs[0]) * (t - self.xs[0]);
        }
        if t > self.xs[n - 1] {
            return self.ys[n - 1] + self.deriv(self.xs[n - 1]) * (t - self.xs[n - 1]);
        }
        let i = self.segment(t);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - t) / h;
        let b = (t - self.xs[i]) / h;
        a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }

    /// First derivative at `t` (constant outside the knot range).
    pub fn deriv(&self, t: f64) -> f64 {
        let n = self.xs.len();
        let t = t.clamp(self.xs[0], self.xs[n - 1]);
        let i = self.segment(t);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - t) / h;
        let b = (t - self.xs[i]) / h;
        (self.ys[i + 1] - self.ys[i]) / h
            + ((3.0 * b * b - 1.0) * self.m[i + 1] - (3.0 * a * a - 1.0) * self.m[i]) * h / 6.0
    }

    /// Second derivative at `t`.
    pub fn deriv2(&self, t: f64) -> f64 {
        let n = self.xs.len();
        let t = t.clamp(self.xs[0], self.xs[n - 1]);
        let i = self.segment(t);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - t) / h;
        let b = (t - self.xs[i]) / h;
        a * self.m[i] + b * self.m[i + 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_spline_interpolates_and_is_linear_on_lines() {
        let xs: Vec<f64> = (0..=10).map(|k| k as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x - 1.0).collect();
        let s = CubicSpline::natural(xs.clone(), ys.clone());
        for (x, y) in xs.iter().zip(ys.iter()) {
            assert!((s.eval(*x) - y).abs() < 1e-12);
        }
        // collinear data stays linear between knots
        assert!((s.eval(4.37) - (3.0 * 4.37 - 1.0)).abs() < 1e-12);
        assert!((s.deriv(2.2) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn natural_spline_tracks_smooth_function() {
        let xs: Vec<f64> = (0..=40).map(|k| k as f64 / 10.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| (2.0 * x).sin()).collect();
        let s = CubicSpline::natural(xs, ys);
        for k in 0..200 {
            let x = 0.5 + 3.0 * k as f64 / 200.0;
            assert!((s.eval(x) - (2.0 * x).sin()).abs() < 1e-4);
            assert!((s.deriv(x) - 2.0 * (2.0 * x).cos()).abs() < 2e-3);
        }
    }

    #[test]
    fn periodic_spline_on_circle_coordinates() {
        let m = 24usize;
        let xs: Vec<f64> = (0..=m).map(|k| k as f64 / m as f64).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|t| (2.0 * std::f64::consts::PI * t).cos())
            .collect();
        let s = CubicSpline::periodic(xs, ys);
        for k in 0..100 {
            let t = k as f64 / 100.0;
            let expect = (2.0 * std::f64::consts::PI * t).cos();
            assert!(
                (s.eval(t) - expect).abs() < 5e-4,
                "t={t} got {} want {expect}",
                s.eval(t)
            );
        }
        // derivative continuity across the seam
        let d_left = s.deriv(1.0 - 1e-9);
        let d_right = s.deriv(0.0 + 1e-9);
        assert!((d_left - d_right).abs() < 1e-5);
    }
}
