//! The smooth transition function `Psi` and the two-point cutoffs `psi[a,b]`.
//!
//! `Psi` is the normalized integral of the bump `exp(-1/(1-s^2))` over
//! `[-1, 1]`: identically 0 below -1, identically 1 above 1, nondecreasing,
//! and `Psi - 1/2` odd. It is evaluated from a precomputed cumulative
//! quadrature table; oddness is exact because only the integral over `[0, x]`
//! is tabulated.

use std::sync::OnceLock;

const TABLE_NODES: usize = 1024;

struct PsiTable {
    /// Cumulative integral of the bump over [0, u_i], u_i = i / TABLE_NODES.
    cumulative: [f64; TABLE_NODES + 1],
    total_half: f64,
}

fn bump(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - s * s)).exp()
    }
}

fn table() -> &'static PsiTable {
    static TABLE: OnceLock<PsiTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut cumulative = [0.0; TABLE_NODES + 1];
        let h = 1.0 / TABLE_NODES as f64;
        for i in 0..TABLE_NODES {
            let a = i as f64 * h;
            // Simpson on each cell.
            let cell = h / 6.0 * (bump(a) + 4.0 * bump(a + 0.5 * h) + bump(a + h));
            cumulative[i + 1] = cumulative[i] + cell;
        }
        let total_half = cumulative[TABLE_NODES];
        PsiTable { cumulative, total_half }
    })
}

/// Integral of the bump over `[0, x]` for `x in [0, 1]`, cubic Hermite
/// interpolated between table nodes (the bump itself is the exact
/// derivative, so the interpolant is C^1 and very accurate).
fn half_integral(x: f64) -> f64 {
    let t = table();
    let pos = x * TABLE_NODES as f64;
    let i = (pos.floor() as usize).min(TABLE_NODES - 1);
    let s = pos - i as f64;
    let h = 1.0 / TABLE_NODES as f64;
    let x0 = i as f64 * h;
    let (f0, f1) = (t.cumulative[i], t.cumulative[i + 1]);
    let (d0, d1) = (bump(x0), bump(x0 + h));
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * f0
        + (s3 - 2.0 * s2 + s) * h * d0
        + (-2.0 * s3 + 3.0 * s2) * f1
        + (s3 - s2) * h * d1
}

/// The fixed transition function: 0 on `(-inf, -1]`, 1 on `[1, inf)`,
/// smooth and nondecreasing in between, with `Psi - 1/2` odd.
pub fn psi_base(x: f64) -> f64 {
    if x <= -1.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let t = table();
        0.5 + 0.5 * x.signum() * half_integral(x.abs()) / t.total_half
    }
}

/// Two-point cutoff: 0 near `lo`, 1 near `hi`, monotone in between.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cutoff {
    pub lo: f64,
    pub hi: f64,
}

impl Cutoff {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo != hi, "cutoff endpoints must differ");
        Self { lo, hi }
    }

    /// `Psi` composed with the affine map sending `lo -> -3`, `hi -> 3`.
    pub fn eval(&self, t: f64) -> f64 {
        let x = -3.0 + 6.0 * (t - self.lo) / (self.hi - self.lo);
        psi_base(x)
    }
}

/// `psi[lo, hi](t)`, matching the paper-style call sites.
pub fn cutoff_eval(c: Cutoff, t: f64) -> f64 {
    c.eval(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoint_values() {
        let c = Cutoff::new(2.0, 5.0);
        assert_eq!(c.eval(2.0), 0.0);
        assert_eq!(c.eval(5.0), 1.0);
        // Exactly 0/1 on the outer thirds, not merely near the ends.
        assert_eq!(c.eval(2.9), 0.0);
        assert_eq!(c.eval(4.1), 1.0);
    }

    #[test]
    fn partition_of_unity() {
        let a = -1.3;
        let b = 0.7;
        for i in 0..=10_000 {
            let t = a - 1.0 + 3.0 * i as f64 / 10_000.0;
            let s = Cutoff::new(a, b).eval(t) + Cutoff::new(b, a).eval(t);
            assert!((s - 1.0).abs() < 1e-14, "t={t}: {s}");
        }
    }

    #[test]
    fn psi_center_and_monotone() {
        assert_eq!(psi_base(0.0), 0.5);
        let mut prev = -1.0;
        for i in 0..=400 {
            let x = -1.2 + 2.4 * i as f64 / 400.0;
            let v = psi_base(x);
            assert!(v >= prev - 1e-15);
            prev = v;
        }
    }

    #[test]
    fn descending_cutoff() {
        // lo > hi reverses the ramp: 1 near hi-side of the interval.
        let c = Cutoff::new(1.0, 0.0);
        assert_eq!(c.eval(1.0), 0.0);
        assert_eq!(c.eval(0.0), 1.0);
        assert!(c.eval(0.4) > 0.5);
    }
}
