use nalgebra::DMatrix;

use super::discretize::{discretize, noise_integral};
use super::linalg::{fro, inv, solve_lyap_ct, solve_stein, sym};
use super::riccati::{solve_care, solve_dare};
use super::{CtLqgSolution, CtLqgSystem, DelaySpec, DtLqgSolution, DtLqgSystem, LqgError, ScalarLqg};

/// Divergence threshold on `‖Γ‖` for the intermittent Riccati recursion.
pub const MARE_NORM_BOUND: f64 = 1e12;
pub const MARE_MAX_ITER: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Metrics {
    pub p_track: f64,
    pub p_effort: f64,
}

fn tr(m: &DMatrix<f64>) -> f64 {
    m.trace()
}

struct CtControl {
    s: DMatrix<f64>,
    k: DMatrix<f64>,
}

fn ct_control(sys: &CtLqgSystem) -> Result<CtControl, LqgError> {
    let r = sys.r();
    let s = solve_care(&sys.a, &sys.b, &sys.q(), &r)?;
    let k = inv("R", &r)? * sys.b.transpose() * &s;
    Ok(CtControl { s, k })
}

fn ct_filter(sys: &CtLqgSystem) -> Result<DMatrix<f64>, LqgError> {
    solve_care(&sys.a.transpose(), &sys.c.transpose(), &sys.w, &sys.v)
}

fn ct_finish(sys: &CtLqgSystem, ctl: CtControl, sigma: DMatrix<f64>) -> Result<CtLqgSolution, LqgError> {
    let vinv = inv("V", &sys.v)?;
    let l = &sigma * sys.c.transpose() * &vinv;
    let acl = &sys.a - &sys.b * &ctl.k;
    let f = solve_lyap_ct(&acl, &sym(&(&l * &sys.v * l.transpose())))?;
    let p_track = tr(&(&sys.q0 * (&sigma + &f)));
    let p_effort = tr(&(ctl.k.transpose() * &sys.r0 * &ctl.k * &f));
    let q = sys.q();
    let g = &sys.b * inv("R", &sys.r())? * sys.b.transpose();
    let j_star = tr(&(&ctl.s * &sigma * sys.c.transpose() * &vinv * &sys.c * &sigma + &sigma * &q));
    let j_star_alt = tr(&(&sigma * &ctl.s * &g * &ctl.s + &ctl.s * &sys.w));
    Ok(CtLqgSolution {
        s: ctl.s,
        sigma,
        k: ctl.k,
        l,
        f,
        p_track,
        p_effort,
        j_star,
        j_star_alt,
    })
}

/// Stationary LQG solution and its tracking/effort metrics.
pub fn ct_performance(sys: &CtLqgSystem) -> Result<CtLqgSolution, LqgError> {
    sys.validate()?;
    let ctl = ct_control(sys)?;
    let sigma = ct_filter(sys)?;
    ct_finish(sys, ctl, sigma)
}

/// As [`ct_performance`] with the estimation error covariance replaced by `sigma`.
pub fn ct_performance_with_sigma(sys: &CtLqgSystem, sigma: DMatrix<f64>) -> Result<CtLqgSolution, LqgError> {
    sys.validate()?;
    let ctl = ct_control(sys)?;
    ct_finish(sys, ctl, sigma)
}

/// Closed-form `(P_track, P_effort)` of a scalar plant.
pub fn scalar_closed_form(s: &ScalarLqg) -> Result<Metrics, LqgError> {
    s.validate()?;
    let sb = s.sigma_bar();
    let (a, b2, c2) = (s.a, s.b * s.b, s.c * s.c);
    let y = s.alpha * s.alpha * b2 * s.q0 / s.r0;
    let d = a * a + y;
    let rd = d.sqrt();
    let p_track = s.q0 * (sb + sb * sb * c2 / (2.0 * s.v * rd));
    // a + √D, cancellation-free for a < 0
    let apd = if a >= 0.0 { a + rd } else { y / (rd - a) };
    let p_effort = s.r0 * sb * sb * c2 * apd * apd / (2.0 * b2 * s.v * rd);
    Ok(Metrics { p_track, p_effort })
}

/// Metrics when the estimate is predicted open loop over `d = d_obs + d_comp`.
///
/// `Σ_d = e^{Ad}Σe^{Aᵀd} + ∫₀^d e^{As}We^{Aᵀs}ds` replaces `Σ` throughout.
pub fn delayed_performance(sys: &CtLqgSystem, delay: &DelaySpec) -> Result<CtLqgSolution, LqgError> {
    if !(delay.d_obs >= 0.0 && delay.d_comp >= 0.0) || !delay.total().is_finite() {
        return Err(LqgError::BadParameter(format!(
            "delays must be nonnegative, got {delay:?}"
        )));
    }
    sys.validate()?;
    let sigma = ct_filter(sys)?;
    let d = delay.total();
    let sigma_d = if d == 0.0 {
        sigma
    } else {
        let e = (&sys.a * d).exp();
        sym(&(&e * sigma * e.transpose() + noise_integral(&sys.a, &sys.w, d)))
    };
    let ctl = ct_control(sys)?;
    ct_finish(sys, ctl, sigma_d)
}

fn dt_control(sys: &DtLqgSystem) -> Result<(DMatrix<f64>, DMatrix<f64>), LqgError> {
    let p = solve_dare(&sys.a, &sys.b, &sys.q, &sys.r)?;
    let k = inv("R + BᵀPB", &(&sys.r + sys.b.transpose() * &p * &sys.b))? * sys.b.transpose() * &p * &sys.a;
    Ok((p, k))
}

fn dt_finish(
    sys: &DtLqgSystem,
    p: DMatrix<f64>,
    k: DMatrix<f64>,
    gamma: DMatrix<f64>,
) -> Result<DtLqgSolution, LqgError> {
    let sy = &sys.c * &gamma * sys.c.transpose() + &sys.v;
    let l = &gamma * sys.c.transpose() * inv("CΓCᵀ + V", &sy)?;
    let gamma_post = sym(&(&gamma - &l * &sys.c * &gamma));
    let innov = sym(&(&l * &sy * l.transpose()));
    let acl = &sys.a - &sys.b * &k;
    let f = solve_stein(&acl, &innov)?;
    let p_track = tr(&(&sys.q0 * (&gamma_post + &f)));
    let p_effort = tr(&(k.transpose() * &sys.r0 * &k * &f));
    let j_star = tr(&(&p * &innov + &sys.q * &gamma_post));
    let j_star_alt = tr(&(&p * &sys.w + &gamma_post * k.transpose() * (&sys.r + sys.b.transpose() * &p * &sys.b) * &k));
    Ok(DtLqgSolution {
        p,
        gamma,
        gamma_post,
        k,
        l,
        f,
        p_track,
        p_effort,
        j_star,
        j_star_alt,
    })
}

/// Stationary sampled-data LQG with a current estimator
/// (`x̂ₖ = x̂ₖ|ₖ₋₁ + L(yₖ − Cx̂ₖ|ₖ₋₁)`, `uₖ = −Kx̂ₖ`).
pub fn dt_performance(sys: &DtLqgSystem) -> Result<DtLqgSolution, LqgError> {
    sys.validate()?;
    let (p, k) = dt_control(sys)?;
    let gamma = solve_dare(&sys.a.transpose(), &sys.c.transpose(), &sys.w, &sys.v)?;
    dt_finish(sys, p, k, gamma)
}

#[derive(Clone, Debug)]
pub enum Intermittent {
    Converged(Box<DtLqgSolution>),
    Diverged { iterations: usize, norm: f64 },
}

impl Intermittent {
    pub fn metrics(&self) -> Option<Metrics> {
        match self {
            Intermittent::Converged(s) => Some(Metrics {
                p_track: s.p_track,
                p_effort: s.p_effort,
            }),
            Intermittent::Diverged { .. } => None,
        }
    }
}

/// Observations arrive with probability `1 − p_drop`.
///
/// Iterates `Γ⁺ = AΓAᵀ + W − (1−p)AΓCᵀ(CΓCᵀ+V)⁻¹CΓAᵀ` from `Γ = W` and
/// evaluates the metrics at its fixed point.
pub fn intermittent_performance(sys: &DtLqgSystem, p_drop: f64) -> Result<Intermittent, LqgError> {
    if !(0.0..=1.0).contains(&p_drop) {
        return Err(LqgError::BadProbability(p_drop));
    }
    sys.validate()?;
    let (p, k) = dt_control(sys)?;
    let (a, c) = (&sys.a, &sys.c);
    let mut g = sys.w.clone();
    for it in 0..MARE_MAX_ITER {
        let sy = c * &g * c.transpose() + &sys.v;
        let agc = a * &g * c.transpose();
        let gain = &agc * inv("CΓCᵀ + V", &sy)? * agc.transpose();
        let next = sym(&(a * &g * a.transpose() + &sys.w - gain * (1.0 - p_drop)));
        let norm = fro(&next);
        if !norm.is_finite() || norm > MARE_NORM_BOUND {
            return Ok(Intermittent::Diverged {
                iterations: it + 1,
                norm,
            });
        }
        let step = fro(&(&next - &g));
        g = next;
        if step <= 1e-13 * (1.0 + norm) {
            return Ok(Intermittent::Converged(Box::new(dt_finish(sys, p, k, g)?)));
        }
    }
    Ok(Intermittent::Diverged {
        iterations: MARE_MAX_ITER,
        norm: fro(&g),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampledPoint {
    pub n: u32,
    pub delta: f64,
    pub metrics: Metrics,
}

/// Sampled metrics for `δ = 2ⁿδ₀`, `n = 0..=n_max`.
pub fn sampled_performance_family(sys: &CtLqgSystem, delta0: f64, n_max: u32) -> Result<Vec<SampledPoint>, LqgError> {
    if !(delta0 > 0.0) {
        return Err(LqgError::BadPeriod(delta0));
    }
    (0..=n_max)
        .map(|n| {
            let delta = delta0 * 2f64.powi(n as i32);
            let sol = dt_performance(&discretize(sys, delta)?)?;
            Ok(SampledPoint {
                n,
                delta,
                metrics: Metrics {
                    p_track: sol.p_track,
                    p_effort: sol.p_effort,
                },
            })
        })
        .collect()
}
