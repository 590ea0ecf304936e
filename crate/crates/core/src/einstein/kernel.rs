//! The singular kernel estimate
//! `∫_{|z| <= delta} dA(z) / ((|z|^2 + eps)^alpha |z - zeta|) <= c (|zeta|^2 + eps)^(-alpha)`.
//!
//! In polar coordinates centred at `zeta` the factor `1/|z - zeta|` cancels
//! against the area element, and along each ray the remaining radial integral
//! of `((r + b)^2 + q)^(-alpha)` is reduced to
//! `G(Y) = ∫_0^{asinh Y} cosh(v)^(1 - 2 alpha) dv`, which is smooth. The angular
//! integral is split into panels graded geometrically towards the ray that
//! passes closest to the origin.

use std::f64::consts::PI;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;

use crate::error::{LabError, Result};

struct Kernel {
    alpha: f64,
    eps: f64,
    delta: f64,
    rule: GaussLegendre,
}

impl Kernel {
    fn new(alpha: f64, eps: f64, delta: f64, n: usize) -> Self {
        Self {
            alpha,
            eps,
            delta,
            rule: GaussLegendre::new(n).expect("at least two nodes"),
        }
    }

    fn g(&self, y: f64) -> f64 {
        let v_max = y.abs().asinh();
        let panels = v_max.ceil().max(1.0) as usize;
        let p = 1.0 - 2.0 * self.alpha;
        let dv = v_max / panels as f64;
        let total: f64 = (0..panels)
            .map(|j| {
                let a = j as f64 * dv;
                self.rule.integrate(a, a + dv, |v| v.cosh().powf(p))
            })
            .sum();
        total.copysign(y)
    }

    /// Radial integral along the ray `zeta + r e^{i theta}`, `r >= 0`, inside the disc.
    fn ray(&self, zeta: Complex64, theta: f64) -> f64 {
        let (sn, cs) = theta.sin_cos();
        let b = zeta.re * cs + zeta.im * sn;
        let perp = zeta.im * cs - zeta.re * sn;
        let disc = self.delta * self.delta - perp * perp;
        if disc <= 0.0 {
            return 0.0;
        }
        let root = disc.sqrt();
        let r2 = -b + root;
        let r1 = (-b - root).max(0.0);
        if r2 <= r1 {
            return 0.0;
        }
        let q = perp * perp + self.eps;
        let sq = q.sqrt();
        q.powf(0.5 - self.alpha) * (self.g((r2 + b) / sq) - self.g((r1 + b) / sq))
    }

    /// `∫ f` over `[lo, hi]` (containing 0) with panels `±w, ±2w, ±4w, ...`.
    fn graded(&self, lo: f64, hi: f64, w: f64, f: impl Fn(f64) -> f64) -> f64 {
        let mut cuts = vec![0.0];
        let mut x = w;
        while x < hi {
            cuts.push(x);
            x *= 2.0;
        }
        cuts.push(hi);
        let mut x = w;
        while -x > lo {
            cuts.insert(0, -x);
            x *= 2.0;
        }
        cuts.insert(0, lo);
        cuts.windows(2)
            .filter(|c| c[1] > c[0])
            .map(|c| self.rule.integrate(c[0], c[1], &f))
            .sum()
    }

    fn integral(&self, zeta: Complex64) -> f64 {
        let rho = zeta.norm();
        let root_eps = self.eps.sqrt();
        if rho == 0.0 {
            return 2.0
                * PI
                * root_eps.powf(1.0 - 2.0 * self.alpha)
                * self.g(self.delta / root_eps);
        }
        let theta0 = (-zeta).arg();
        if rho < self.delta {
            let w = (root_eps / rho).min(PI);
            self.graded(-PI, PI, w, |phi| self.ray(zeta, theta0 + phi))
        } else {
            let phi_max = (self.delta / rho).min(1.0).asin();
            let w = (root_eps / (rho * phi_max)).min(0.5 * PI);
            self.graded(-0.5 * PI, 0.5 * PI, w, |psi| {
                phi_max * psi.cos() * self.ray(zeta, theta0 + phi_max * psi.sin())
            })
        }
    }

    fn ratio(&self, zeta: Complex64) -> f64 {
        self.integral(zeta) * (zeta.norm_sqr() + self.eps).powf(self.alpha)
    }
}

/// Returns `sup_zeta I(zeta) (|zeta|^2 + eps)^alpha` over the samples, i.e. the
/// smallest constant that works for those samples.
///
/// `quad_n` is the Gauss–Legendre order of every panel; the result is
/// recomputed with twice that order and must agree to 1%.
pub fn kernel_bound_check(
    alpha: f64,
    eps: f64,
    delta: f64,
    zeta_samples: &[Complex64],
    quad_n: usize,
) -> Result<f64> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(LabError::Inadmissible(format!(
            "alpha must lie in [0, 1), got {alpha}"
        )));
    }
    if !(delta > 0.0) || !(eps > 0.0) || eps > delta * delta / 10.0 {
        return Err(LabError::Inadmissible(format!(
            "need 0 < eps <= delta^2/10, got eps = {eps}, delta = {delta}"
        )));
    }
    if quad_n < 64 {
        return Err(LabError::Inadmissible(format!(
            "quad_n must be at least 64, got {quad_n}"
        )));
    }
    if zeta_samples.is_empty() || zeta_samples.iter().any(|z| !z.is_finite()) {
        return Err(LabError::Inadmissible("need finite zeta samples".into()));
    }
    let coarse = Kernel::new(alpha, eps, delta, quad_n);
    let fine = Kernel::new(alpha, eps, delta, 2 * quad_n);
    let mut sup = 0.0f64;
    for &z in zeta_samples {
        let (a, b) = (coarse.ratio(z), fine.ratio(z));
        let change = ((a - b) / b).abs();
        if change > 0.01 {
            return Err(LabError::Quadrature { change });
        }
        sup = sup.max(b);
    }
    Ok(sup)
}

/// Sample points at fixed multiples of `delta`: the centre, inside the disc,
/// on its boundary, and outside up to `10 delta`.
pub fn default_zeta_samples(delta: f64) -> Vec<Complex64> {
    [
        (0.0, 0.0),
        (0.05, 0.0),
        (0.25, 0.0),
        (0.35, 0.35),
        (0.0, 0.7),
        (1.0, 0.0),
        (-1.5, 0.5),
        (3.0, 0.0),
        (0.0, 10.0),
    ]
    .iter()
    .map(|&(x, y)| Complex64::new(x * delta, y * delta))
    .collect()
}
