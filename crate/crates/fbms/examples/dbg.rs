// debug the matching mismatch profile
use fbms::configuration::{shoot, UnbalancingSeq};
use fbms::desing::wing::{rot_z, half_turn_z, reflect_yz, WingMap};
use fbms::scherk::ScherkAngle;
use nalgebra::Vector3;

fn main() {
    let k = 3; let m = 14u32; let tau = 1.0/m as f64;
    let config = shoot(&UnbalancingSeq::zeros(1), k).unwrap();
    println!("betas {:?}", config.beta);
    println!("alphas+ {:?}", config.alpha_plus);
    let mut margin = f64::INFINITY;
    for i in 0..k { for a in [config.alpha_minus[i], config.alpha_plus[i]] {
        margin = margin.min(a).min(std::f64::consts::FRAC_PI_2 - a); } }
    let dt = margin / 30.0;
    println!("delta_theta {dt}");
    // floor
    let mut floor = 1.2f64;
    for i in 0..k {
        let th = config.alpha_plus[i];
        let hole = ((1.0 + th.cos().powi(2)) / th.sin().powi(2)).acosh();
        let bs = ((2.0*th).sin()*th.tan().ln()/th.tan()).max(0.0);
        floor = floor.max(hole + bs + 0.15);
    }
    println!("a floor {floor}");
    let chart_a = 4.0f64.max(floor);
    // delta_s
    let mut ds = 0.1f64;
    for j in 0..k-1 {
        let cat = &config.arcs[j].params;
        let (b0,b1) = (config.beta[j], config.beta[j+1]);
        let arc = (cat.a*((b0.cos()-cat.b)/cat.a).sinh() - cat.a*((b1.cos()-cat.b)/cat.a).sinh()).abs();
        let occ = b0.sin()+b1.sin();
        ds = ds.min((0.9*arc - chart_a*tau*occ).max(0.0)/(5.3*occ));
    }
    ds = ds.min((0.9-chart_a*tau).max(0.0)/5.3);
    println!("chart_a {chart_a} delta_s {ds} ds*m {}", ds*m as f64);

    // piece 1 plus wing vs fitted annulus 1
    let i = 0usize;
    let beta = config.beta[i];
    let theta = ScherkAngle::new(config.alpha_plus[i], dt).unwrap();
    let scale = tau*beta.sin();
    let shift_y = beta.cos();
    let fplus = rot_z(std::f64::consts::FRAC_PI_2 - beta)*half_turn_z();
    // pivot circles
    let wp = WingMap::new(theta, 0.0, fplus, tau, chart_a);
    let piv1 = (scale*(1.0/tau + wp.r0), shift_y + scale*wp.y0);
    let beta2 = config.beta[1];
    let theta2 = ScherkAngle::new(config.alpha_plus[1], dt).unwrap();
    let scale2 = tau*beta2.sin();
    let da2 = config.alpha_plus[1]-config.alpha_minus[1];
    let fminus2 = rot_z(std::f64::consts::FRAC_PI_2 - beta2)*rot_z(-da2)*reflect_yz();
    let wm2 = WingMap::new(theta2, 0.0, fminus2, tau, chart_a);
    let piv2 = (scale2*(1.0/tau + wm2.r0), beta2.cos() + scale2*wm2.y0);
    println!("pivot1+ {:?} pivot2- {:?}", piv1, piv2);
    // fit catenoid
    let seed = config.arcs[0].params;
    let (mut a, mut b) = (seed.a, seed.b);
    for _ in 0..60 {
        let u1 = (piv1.1-b)/a; let u2=(piv2.1-b)/a;
        let f1 = a*u1.cosh()-piv1.0; let f2=a*u2.cosh()-piv2.0;
        let j11 = u1.cosh()-u1*u1.sinh(); let j12=-u1.sinh();
        let j21 = u2.cosh()-u2*u2.sinh(); let j22=-u2.sinh();
        let det = j11*j22-j12*j21;
        a -= (f1*j22-f2*j12)/det; b -= (j11*f2-j21*f1)/det;
    }
    println!("fitted a'={a} b'={b}  config arc a={} b={}", seed.a, seed.b);
    let s_b = 5.0*ds/tau;
    for phi in [-5.0*dt, -2.0*dt, 0.0, 2.0*dt, 5.0*dt] {
        let w = WingMap::new(theta, phi, fplus, tau, chart_a);
        let wf = (tau*s_b).cosh() + w.eta.cos()*(tau*s_b).sinh();
        let rad = scale*(1.0/tau+w.r0)*wf;
        let h = shift_y + scale*(w.y0 + s_b*(1.0+w.r0*tau)*w.eta.sin());
        let mm = rad - a*((h-b)/a).cosh();
        println!("phi={phi:+.4} rim=({rad:.5},{h:.5}) mismatch={mm:+.6}");
    }
}
