//! Symmetric tridiagonal eigenvalues: Sturm-count bisection to localize,
//! inverse iteration to polish eigenpairs.

/// Symmetric tridiagonal matrix given by its diagonal and off-diagonal.
#[derive(Debug, Clone)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len());
        Self { diag, off }
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence count).
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0usize;
        let mut q = self.diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.n() {
            let e2 = self.off[i - 1] * self.off[i - 1];
            let denom = if q.abs() < 1e-300 { 1e-300_f64.copysign(q + 1e-300) } else { q };
            q = self.diag[i] - x - e2 / denom;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// `k`-th smallest eigenvalue (0-indexed), bisection to relative 1e-13
    /// followed by one round of inverse-iteration Rayleigh polishing.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        assert!(k < self.n());
        let (mut lo, mut hi) = self.gershgorin();
        let scale = lo.abs().max(hi.abs()).max(1.0);
        while hi - lo > 1e-13 * scale {
            let mid = 0.5 * (lo + hi);
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let approx = 0.5 * (lo + hi);
        self.polish(approx)
    }

    /// Eigenvalue of minimal absolute value.
    pub fn eigenvalue_nearest_zero(&self) -> f64 {
        let below = self.count_below(0.0);
        let mut best = f64::INFINITY;
        if below > 0 {
            let l = self.eigenvalue(below - 1);
            if l.abs() < best.abs() {
                best = l;
            }
        }
        if below < self.n() {
            let l = self.eigenvalue(below);
            if l.abs() < best.abs() {
                best = l;
            }
        }
        best
    }

    /// Inverse iteration with a fixed shift; returns the Rayleigh quotient
    /// once the residual drops below 1e-10 (relative to the matrix scale).
    fn polish(&self, shift: f64) -> f64 {
        let n = self.n();
        let scale = self
            .diag
            .iter()
            .chain(self.off.iter())
            .fold(1.0f64, |m, &v| m.max(v.abs()));
        let mut v = vec![1.0 / (n as f64).sqrt(); n];
        let mut lambda = shift;
        for _ in 0..50 {
            let mut w = match self.solve_shifted(shift, &v) {
                Some(w) => w,
                None => return shift,
            };
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !norm.is_finite() || norm == 0.0 {
                return shift;
            }
            for x in &mut w {
                *x /= norm;
            }
            // Rayleigh quotient and residual for the polished vector.
            let mut tv = vec![0.0; n];
            for i in 0..n {
                tv[i] = self.diag[i] * w[i];
                if i > 0 {
                    tv[i] += self.off[i - 1] * w[i - 1];
                }
                if i + 1 < n {
                    tv[i] += self.off[i] * w[i + 1];
                }
            }
            lambda = w.iter().zip(&tv).map(|(a, b)| a * b).sum::<f64>();
            let res = tv
                .iter()
                .zip(&w)
                .map(|(t, x)| (t - lambda * x) * (t - lambda * x))
                .sum::<f64>()
                .sqrt();
            v = w;
            if res <= 1e-10 * scale {
                break;
            }
        }
        lambda
    }

    /// Thomas solve of `(T - shift I) x = b` with diagonal perturbation when a
    /// pivot collapses (standard inverse-iteration safeguard).
    fn solve_shifted(&self, shift: f64, b: &[f64]) -> Option<Vec<f64>> {
        let n = self.n();
        let eps = 1e-300;
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut denom = self.diag[0] - shift;
        if denom.abs() < eps {
            denom = eps;
        }
        c[0] = if n > 1 { self.off[0] / denom } else { 0.0 };
        d[0] = b[0] / denom;
        for i in 1..n {
            let mut m = self.diag[i] - shift - self.off[i - 1] * c[i - 1];
            if m.abs() < eps {
                m = eps;
            }
            if i + 1 < n {
                c[i] = self.off[i] / m;
            }
            d[i] = (b[i] - self.off[i - 1] * d[i - 1]) / m;
        }
        let mut x = vec![0.0; n];
        x[n - 1] = d[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = d[i] - c[i] * x[i + 1];
        }
        if x.iter().all(|v| v.is_finite()) {
            Some(x)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn discrete_laplacian_eigenvalues() {
        // -u'' on (0,1), Dirichlet, n interior points: exact discrete
        // eigenvalues are (2/h^2)(1 - cos(k pi h)).
        let n = 64;
        let h = 1.0 / (n as f64 + 1.0);
        let t = SymTridiagonal::new(vec![2.0 / (h * h); n], vec![-1.0 / (h * h); n - 1]);
        for k in 0..4 {
            let exact = 2.0 / (h * h) * (1.0 - (PI * (k as f64 + 1.0) * h).cos());
            let got = t.eigenvalue(k);
            assert!((got - exact).abs() < 1e-7 * exact.abs(), "k={k}: {got} vs {exact}");
        }
    }

    #[test]
    fn nearest_zero_picks_signed_min() {
        let t = SymTridiagonal::new(vec![-3.0, 0.5, 4.0], vec![0.0, 0.0]);
        assert!((t.eigenvalue_nearest_zero() - 0.5).abs() < 1e-12);
    }
}
