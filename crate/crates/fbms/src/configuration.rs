//! Symmetric catenoidal configurations: inductive building of the arc chain
//! and the monotone shooting that pins the top latitude.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catenary::{self, sphere_exit, CatenaryError, CatenoidArc};

/// Latitude ceiling for the shooting bracket; configurations only exist for
/// starting latitudes below 2*pi/7.
pub const BETA_HAT_MAX: f64 = 2.0 * std::f64::consts::PI / 7.0;

/// Default admissible l1 bound for the unbalancing parameters.
pub const DELTA_SIGMA: f64 = 0.01;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unbalancing sequence has l1 norm {norm}, above the admissible bound {bound}")]
    SigmaTooLarge { norm: f64, bound: f64 },
    #[error("beta_hat={0} outside (0, 2*pi/7)")]
    BetaHatRange(f64),
    #[error("construction left the admissible domain at step {step}: alpha={alpha}, beta={beta}")]
    DomainViolation { step: usize, alpha: f64, beta: f64 },
    #[error("total order k={0} must be at least 3")]
    OrderTooSmall(usize),
    #[error("no sign change for the shooting residual inside (0, 2*pi/7)")]
    BracketFailure,
    #[error(transparent)]
    Catenary(#[from] CatenaryError),
}

/// Unbalancing parameters with their l1 norm.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UnbalancingSeq {
    pub sigma: Vec<f64>,
    pub norm: f64,
}

impl UnbalancingSeq {
    pub fn new(sigma: Vec<f64>) -> Self {
        let norm = sigma.iter().map(|s| s.abs()).sum();
        Self { sigma, norm }
    }

    pub fn zeros(len: usize) -> Self {
        Self { sigma: vec![0.0; len], norm: 0.0 }
    }

    pub fn get(&self, i: usize) -> f64 {
        self.sigma.get(i).copied().unwrap_or(0.0)
    }

    /// Antisymmetric extension `sigma_{k-i+1} = -sigma_i` of the first
    /// `[k/2]` entries, as required for initial-surface parameters.
    pub fn antisymmetric(&self, k: usize) -> Vec<f64> {
        let mut full = vec![0.0; k];
        for i in 0..k / 2 {
            full[i] = self.get(i);
            full[k - 1 - i] = -self.get(i);
        }
        full
    }
}

/// Order of a partially built configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Order {
    /// First index whose exit latitude reached the equator.
    Complete(usize),
    /// `max_steps` exhausted before reaching the equator.
    Incomplete,
}

/// Result of the inductive builder: latitudes, contact angles and arcs of the
/// chain grown from the top circle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartialConfiguration {
    pub beta_hat: f64,
    pub order: Order,
    /// Latitudes `beta_1..beta_{k'+1}` (one more than the arcs built).
    pub beta: Vec<f64>,
    pub alpha_plus: Vec<f64>,
    pub alpha_minus: Vec<f64>,
    pub arcs: Vec<CatenoidArc>,
    pub disc_radius: f64,
}

/// Grow arcs from `beta_hat` until the exit latitude reaches the equator or
/// `max_steps` arcs have been built.
pub fn build_partial(
    beta_hat: f64,
    sigma: &UnbalancingSeq,
    max_steps: usize,
) -> Result<PartialConfiguration, ConfigError> {
    if !(beta_hat > 0.0 && beta_hat <= BETA_HAT_MAX) {
        return Err(ConfigError::BetaHatRange(beta_hat));
    }
    if sigma.norm >= DELTA_SIGMA {
        return Err(ConfigError::SigmaTooLarge { norm: sigma.norm, bound: DELTA_SIGMA });
    }
    let mut beta = vec![beta_hat];
    let mut alpha_minus = vec![beta_hat];
    let mut alpha_plus = Vec::new();
    let mut arcs = Vec::new();
    let mut order = Order::Incomplete;
    for i in 0..max_steps {
        let ap = sigma.get(i).exp() * alpha_minus[i];
        if ap >= std::f64::consts::PI - beta[i] {
            return Err(ConfigError::DomainViolation { step: i + 1, alpha: ap, beta: beta[i] });
        }
        let arc = sphere_exit(beta[i], ap)?;
        alpha_plus.push(ap);
        beta.push(arc.beta_ex);
        alpha_minus.push(arc.alpha_ex);
        arcs.push(arc);
        if arc.beta_ex >= std::f64::consts::FRAC_PI_2 {
            order = Order::Complete(i + 1);
            break;
        }
    }
    Ok(PartialConfiguration {
        beta_hat,
        order,
        beta,
        alpha_plus,
        alpha_minus,
        disc_radius: beta_hat.sin(),
        arcs,
    })
}

/// Build exactly `nsteps` arcs regardless of where they land (the extended
/// builder used by the shooting residuals).
fn build_arcs(
    beta_hat: f64,
    sigma: &UnbalancingSeq,
    nsteps: usize,
) -> Result<PartialConfiguration, ConfigError> {
    if !(beta_hat > 0.0 && beta_hat < BETA_HAT_MAX) {
        return Err(ConfigError::BetaHatRange(beta_hat));
    }
    let mut beta = vec![beta_hat];
    let mut alpha_minus = vec![beta_hat];
    let mut alpha_plus = Vec::new();
    let mut arcs = Vec::new();
    for i in 0..nsteps {
        let ap = sigma.get(i).exp() * alpha_minus[i];
        if ap <= 0.0 || ap >= std::f64::consts::PI - beta[i] {
            return Err(ConfigError::DomainViolation { step: i + 1, alpha: ap, beta: beta[i] });
        }
        let arc = sphere_exit(beta[i], ap)?;
        alpha_plus.push(ap);
        beta.push(arc.beta_ex);
        alpha_minus.push(arc.alpha_ex);
        arcs.push(arc);
    }
    Ok(PartialConfiguration {
        beta_hat,
        order: Order::Incomplete,
        beta,
        alpha_plus,
        alpha_minus,
        disc_radius: beta_hat.sin(),
        arcs,
    })
}

/// A complete symmetric configuration of total order `k`: two flat discs and
/// `k-1` catenoidal annuli whose boundary circles lie on the unit sphere.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Configuration {
    pub k: usize,
    pub beta_hat: f64,
    /// Latitudes `beta_1..beta_k` of the shared circles.
    pub beta: Vec<f64>,
    /// Contact angle of the piece below circle i.
    pub alpha_plus: Vec<f64>,
    /// Contact angle of the piece above circle i.
    pub alpha_minus: Vec<f64>,
    /// Annuli `A_1..A_{k-1}`; the disc caps `A_0`, `A_k` are implicit.
    pub arcs: Vec<CatenoidArc>,
    /// Resolved (mirrored) unbalancing parameters, one per circle.
    pub sigma: Vec<f64>,
    pub shooting_residual: f64,
}

impl Configuration {
    pub fn is_odd(&self) -> bool {
        self.k % 2 == 1
    }

    pub fn disc_radius(&self) -> f64 {
        self.beta[0].sin()
    }

    /// Larger of the two symmetric-extension defects, for validation.
    pub fn symmetry_defect(&self) -> f64 {
        let k = self.k;
        let mut worst = 0.0f64;
        for i in 0..k {
            let j = k - 1 - i;
            worst = worst.max((self.beta[i] + self.beta[j] - std::f64::consts::PI).abs());
            worst = worst.max((self.alpha_plus[i] - self.alpha_minus[j]).abs());
        }
        worst
    }
}

fn mirror_arc(arc: &CatenoidArc) -> CatenoidArc {
    CatenoidArc {
        beta_in: std::f64::consts::PI - arc.beta_ex,
        alpha_in: arc.alpha_ex,
        beta_ex: std::f64::consts::PI - arc.beta_in,
        alpha_ex: arc.alpha_in,
        params: catenary::CatenoidParams { a: arc.params.a, b: -arc.params.b },
    }
}

/// Shooting residual: distance of the half chain from symmetric
/// extendibility. Positive when `beta_hat` is too large. Build failures count
/// as `+inf`, which is consistent because the order is nonincreasing in
/// `beta_hat`.
fn shooting_residual(beta_hat: f64, sigma: &UnbalancingSeq, k: usize) -> f64 {
    let kp = k / 2;
    match build_arcs(beta_hat, sigma, kp) {
        Ok(half) => {
            if k % 2 == 1 {
                half.beta[kp] - std::f64::consts::FRAC_PI_2
            } else {
                half.beta[kp - 1] + half.beta[kp] - std::f64::consts::PI
            }
        }
        Err(_) => f64::INFINITY,
    }
}

/// Find `beta_hat` such that the configuration of total order `k` extends
/// symmetrically, then extend it. Only the first `[k/2]` entries of `sigma`
/// are consumed.
pub fn shoot(sigma: &UnbalancingSeq, k: usize) -> Result<Configuration, ConfigError> {
    if k < 3 {
        return Err(ConfigError::OrderTooSmall(k));
    }
    if sigma.norm >= DELTA_SIGMA {
        return Err(ConfigError::SigmaTooLarge { norm: sigma.norm, bound: DELTA_SIGMA });
    }
    let kp = k / 2;
    let lo0 = 1e-4;
    let hi0 = BETA_HAT_MAX - 1e-6;
    let f = |bh: f64| shooting_residual(bh, sigma, k);
    let (mut lo, mut hi) = (lo0, hi0);
    if !(f(lo) < 0.0 && f(hi) > 0.0) {
        // Very large k pushes the root below the default floor.
        lo = 1e-9;
        if !(f(lo) < 0.0 && f(hi) > 0.0) {
            return Err(ConfigError::BracketFailure);
        }
    }
    // Each beta_i is continuous and strictly increasing in beta_hat, so the
    // residual crosses zero exactly once; plain bisection is safe even with
    // the +inf padding on failed builds.
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let beta_hat = 0.5 * (lo + hi);
    let residual = f(beta_hat);
    let half = build_arcs(beta_hat, sigma, kp)?;

    // Symmetric extension.
    let mut beta = vec![0.0; k];
    let mut alpha_plus = vec![0.0; k];
    let mut alpha_minus = vec![0.0; k];
    for i in 0..kp {
        beta[i] = half.beta[i];
        alpha_plus[i] = half.alpha_plus[i];
        alpha_minus[i] = half.alpha_minus[i];
    }
    for i in kp..k {
        let j = k - 1 - i;
        if j < kp {
            beta[i] = std::f64::consts::PI - beta[j];
            alpha_plus[i] = alpha_minus[j];
            alpha_minus[i] = alpha_plus[j];
        }
    }
    if k % 2 == 1 {
        // Middle circle sits exactly on the equator; both contact angles are
        // the exit angle of the last built arc.
        beta[kp] = std::f64::consts::FRAC_PI_2;
        alpha_plus[kp] = half.alpha_minus[kp];
        alpha_minus[kp] = half.alpha_minus[kp];
    }
    let mut arcs = Vec::with_capacity(k - 1);
    for j in 0..k - 1 {
        if j < kp {
            arcs.push(half.arcs[j]);
        } else {
            arcs.push(mirror_arc(&half.arcs[k - 2 - j]));
        }
    }
    let mut sig = sigma.antisymmetric(k);
    // Record the ratios actually realized on the mirrored side.
    for i in kp..k {
        sig[i] = (alpha_plus[i] / alpha_minus[i]).ln();
    }
    Ok(Configuration {
        k,
        beta_hat,
        beta,
        alpha_plus,
        alpha_minus,
        arcs,
        sigma: sig,
        shooting_residual: residual,
    })
}

/// Piecewise evaluator of the radial graph `r(beta)` on `[0, pi]`.
#[derive(Debug, Clone)]
pub struct RadialGraph<'a> {
    config: &'a Configuration,
}

/// Flat disc at height `cos(beta_1)` in polar form.
fn disc_radius_profile(beta_edge: f64, beta: f64) -> f64 {
    beta_edge.cos() / beta.cos()
}

pub fn radial_graph(config: &Configuration) -> RadialGraph<'_> {
    RadialGraph { config }
}

impl RadialGraph<'_> {
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b = vec![0.0];
        b.extend_from_slice(&self.config.beta);
        b.push(std::f64::consts::PI);
        b
    }

    pub fn r(&self, beta: f64) -> f64 {
        let c = self.config;
        let k = c.k;
        if beta <= c.beta[0] {
            return disc_radius_profile(c.beta[0], beta);
        }
        if beta >= c.beta[k - 1] {
            return disc_radius_profile(c.beta[k - 1], beta);
        }
        let j = match c.beta.iter().position(|&b| beta <= b) {
            Some(j) => j - 1,
            None => k - 2,
        };
        catenary::arc_radius(&c.arcs[j], beta)
    }

    pub fn dr_dbeta(&self, beta: f64) -> f64 {
        let c = self.config;
        let k = c.k;
        if beta <= c.beta[0] {
            let e = c.beta[0];
            return e.cos() * beta.sin() / (beta.cos() * beta.cos());
        }
        if beta >= c.beta[k - 1] {
            let e = c.beta[k - 1];
            return e.cos() * beta.sin() / (beta.cos() * beta.cos());
        }
        let j = match c.beta.iter().position(|&b| beta <= b) {
            Some(j) => j - 1,
            None => k - 2,
        };
        // v = d(log 1/r)/dbeta, so dr/dbeta = -r v.
        let arc = &c.arcs[j];
        -catenary::arc_radius(arc, beta) * catenary::arc_v(arc, beta)
    }
}

/// Scalar diagnostics of a configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigMetrics {
    pub max_one_minus_r: f64,
    pub max_abs_dr: f64,
    pub max_alpha_plus: f64,
    pub max_beta_gap: f64,
    pub min_neck_radius: f64,
}

/// Sample the radial graph on at least `samples` points plus all breakpoints.
pub fn config_metrics(config: &Configuration, samples: usize) -> ConfigMetrics {
    let graph = radial_graph(config);
    let n = samples.max(10_000);
    let mut max_one_minus_r = 0.0f64;
    let mut max_abs_dr = 0.0f64;
    let mut eval = |beta: f64| {
        let beta = beta.clamp(0.0, std::f64::consts::PI);
        max_one_minus_r = max_one_minus_r.max(1.0 - graph.r(beta));
        max_abs_dr = max_abs_dr.max(graph.dr_dbeta(beta).abs());
    };
    for i in 0..=n {
        eval(std::f64::consts::PI * i as f64 / n as f64);
    }
    for &b in &config.beta {
        // Straddle each breakpoint: one-sided slopes differ there.
        eval(b - 1e-12);
        eval(b);
        eval(b + 1e-12);
    }
    let max_alpha_plus = config.alpha_plus.iter().cloned().fold(0.0, f64::max);
    let max_beta_gap = config
        .beta
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(0.0, f64::max);
    let min_neck_radius = config.arcs.iter().map(|a| a.params.a).fold(f64::INFINITY, f64::min);
    ConfigMetrics { max_one_minus_r, max_abs_dr, max_alpha_plus, max_beta_gap, min_neck_radius }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn balanced_builder_keeps_angles_equal() {
        let p = build_partial(0.5, &UnbalancingSeq::zeros(8), 10).unwrap();
        for (i, ap) in p.alpha_plus.iter().enumerate() {
            assert_eq!(*ap, p.alpha_minus[i]);
        }
    }

    #[test]
    fn quarter_pi_first_arc_stays_above_equator() {
        let p = build_partial(FRAC_PI_4, &UnbalancingSeq::zeros(4), 10).unwrap();
        assert!(p.beta[1] < FRAC_PI_2);
        assert!(matches!(p.order, Order::Complete(j) if j > 1));
    }

    #[test]
    fn two_pi_sevenths_first_arc_crosses() {
        let p = build_partial(2.0 * PI / 7.0, &UnbalancingSeq::zeros(4), 10).unwrap();
        assert_eq!(p.order, Order::Complete(1));
        assert!(p.beta[1] > FRAC_PI_2);
    }

    #[test]
    fn shoot_k3_bracket() {
        let c = shoot(&UnbalancingSeq::zeros(1), 3).unwrap();
        assert!(c.beta_hat > FRAC_PI_4 && c.beta_hat < 2.0 * PI / 7.0, "{}", c.beta_hat);
        assert!(c.shooting_residual.abs() < 1e-11);
        assert!((c.beta[1] - FRAC_PI_2).abs() < 1e-11);
        assert!(c.symmetry_defect() < 1e-9);
    }

    #[test]
    fn shoot_even_k() {
        let c = shoot(&UnbalancingSeq::zeros(2), 4).unwrap();
        assert!((c.beta[1] + c.beta[2] - PI).abs() < 1e-11);
        // Middle arc closes up with b = 0 to tolerance.
        assert!(c.arcs[1].params.b.abs() < 1e-9);
        assert!(c.symmetry_defect() < 1e-9);
    }

    #[test]
    fn beta_hat_decreasing_in_k() {
        let mut prev = f64::INFINITY;
        for k in 3..=8 {
            let c = shoot(&UnbalancingSeq::zeros(k / 2), k).unwrap();
            assert!(c.beta_hat < prev, "k={k}");
            prev = c.beta_hat;
        }
    }

    #[test]
    fn radial_graph_continuity_and_unit_circles() {
        let c = shoot(&UnbalancingSeq::zeros(3), 6).unwrap();
        let g = radial_graph(&c);
        for &b in &c.beta {
            assert!((g.r(b) - 1.0).abs() < 1e-10, "circle at {b}");
            let below = g.r(b - 1e-9);
            let above = g.r(b + 1e-9);
            assert!((below - above).abs() < 1e-7);
        }
        // One-sided slope at beta_1^+ equals tan(alpha_plus_1) * r.
        let b1 = c.beta[0];
        let slope = g.dr_dbeta(b1 + 1e-12);
        assert!((slope + c.alpha_plus[0].tan()).abs() < 1e-6, "slope {slope}");
    }

    #[test]
    fn metrics_balanced_identities() {
        let c = shoot(&UnbalancingSeq::zeros(4), 9).unwrap();
        let m = config_metrics(&c, 10_000);
        assert!((m.max_alpha_plus - c.beta[0]).abs() < 1e-12);
        for g in c.beta.windows(2) {
            assert!(g[1] - g[0] <= 2.0 * c.beta[0] + 1e-12);
        }
        assert!(m.max_one_minus_r <= 1.0 - c.beta[0].cos() + 1e-10);
    }

    #[test]
    fn sigma_continuity() {
        let k = 6;
        let base = shoot(&UnbalancingSeq::zeros(3), k).unwrap();
        let mut s = vec![0.0; 3];
        s[1] = 1e-6;
        let pert = shoot(&UnbalancingSeq::new(s), k).unwrap();
        let d = (pert.beta_hat - base.beta_hat).abs();
        assert!(d < 1e-4, "d = {d}");
        assert!(d > 0.0);
    }

    #[test]
    fn mid_annulus_neck_value() {
        // r(pi/2) equals the neck radius of the middle arc for balanced even k.
        let c = shoot(&UnbalancingSeq::zeros(3), 6).unwrap();
        let g = radial_graph(&c);
        let mid = &c.arcs[2];
        assert!((g.r(FRAC_PI_2) - mid.params.a).abs() < 1e-9);
    }
}
