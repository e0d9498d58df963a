//! Case generators for the monotonicity suites. Each returns `Err` with a
//! description on a violation; `Ok` may carry a count of pointwise
//! (fixed-α) reversals that the front comparison tolerates.

use codesign_core::dpi::{brute_force_solve, solve_loop, CoDesignDiagram, Solution};
use codesign_core::drone::{query, MissionSpec};
use codesign_core::lqg::{
    ct_performance, delayed_performance, discretize, discretize_matrices, dt_performance, intermittent_performance,
    scalar_closed_form, CtLqgSystem, DelaySpec, Intermittent, Metrics, ScalarLqg,
};
use codesign_core::order::{antichain_leq, HermitianPoint};
use nalgebra::DMatrix;
use rand::Rng;

use super::*;

/// Relative comparison tolerance of the monotonicity suites.
pub const CMP_TOL: f64 = 1e-7;

pub const DELAY_GRID: [f64; 5] = [0.0, 0.05, 0.1, 0.2, 0.4];
pub const DROP_GRID: [f64; 5] = [0.0, 0.1, 0.2, 0.3, 0.5];
pub const DROP_PERIOD: f64 = 0.1;
pub const N_GRID_DELTA0: f64 = 0.01;
pub const N_GRID_MAX: u32 = 4;
const FRONT_ALPHAS: [f64; 3] = [0.1, 1.0, 10.0];
/// Random cheap-control problems beyond this range are too ill-conditioned
/// for the Riccati residual tolerance.
const ALPHA_RANGE: (f64, f64) = (1e-2, 1e2);

fn increments(rng: &mut ChaCha8Rng, sys: &CtLqgSystem) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = sys.a.nrows();
    let p = sys.c.nrows();
    let sw = rng.random_range(0.0..2.0);
    let sv = rng.random_range(0.0..2.0);
    (&sys.w + psd(rng, n, 0.0) * sw, &sys.v + psd(rng, p, 0.0) * sv)
}

fn check_pair(what: &str, lo: Metrics, hi: Metrics, track_up: bool, effort_up: bool) -> Result<(), String> {
    let ok_t = if track_up {
        le_tol(lo.p_track, hi.p_track, CMP_TOL)
    } else {
        le_tol(hi.p_track, lo.p_track, CMP_TOL)
    };
    let ok_e = if effort_up {
        le_tol(lo.p_effort, hi.p_effort, CMP_TOL)
    } else {
        le_tol(hi.p_effort, lo.p_effort, CMP_TOL)
    };
    if ok_t && ok_e {
        Ok(())
    } else {
        Err(format!("{what}: {lo:?} then {hi:?}"))
    }
}

fn pointwise_reversals(lo: &[Metrics], hi: &[Metrics]) -> usize {
    lo.iter()
        .zip(hi)
        .map(|(a, b)| {
            !le_tol(a.p_track, b.p_track, CMP_TOL) as usize + !le_tol(a.p_effort, b.p_effort, CMP_TOL) as usize
        })
        .sum()
}

fn ct_at(sys: &CtLqgSystem, alpha: f64) -> Option<Metrics> {
    ct_metrics(&sys.with_alpha(alpha))
}

/// Raising α lowers tracking error and raises effort.
pub fn ct_alpha_tradeoff(seed: u64, n: usize) -> Result<(), String> {
    let mut r = rng(seed);
    let sys = random_ct(&mut r, n);
    let a1 = log_uniform(&mut r, ALPHA_RANGE.0, ALPHA_RANGE.1 / 1.001);
    let a2 = log_uniform(&mut r, a1 * 1.0001, ALPHA_RANGE.1);
    let (m1, m2) = (ct_at(&sys, a1).ok_or("solve")?, ct_at(&sys, a2).ok_or("solve")?);
    check_pair(&format!("alpha {a1} -> {a2}"), m1, m2, false, true)
}

/// The filter covariance grows with the noise intensities.
pub fn filter_monotone_in_noise(seed: u64, n: usize) -> Result<(), String> {
    let mut r = rng(seed);
    let sys = random_ct(&mut r, n);
    let (w2, v2) = increments(&mut r, &sys);
    let s1 = ct_performance(&sys).map_err(|e| e.to_string())?.sigma;
    let s2 = ct_performance(&sys.with_noise(w2, v2))
        .map_err(|e| e.to_string())?
        .sigma;
    if loewner_leq(&s1, &s2, CMP_TOL) {
        Ok(())
    } else {
        Err(format!("Sigma not Loewner-monotone:\n{s1}\n{s2}"))
    }
}

/// More noise gives a dominated (tracking, effort) front. Returns the number
/// of fixed-α reversals.
pub fn ct_noise_front(seed: u64, n: usize) -> Result<usize, String> {
    let mut r = rng(seed);
    let sys = random_ct(&mut r, n);
    let (w2, v2) = increments(&mut r, &sys);
    let noisy = sys.with_noise(w2, v2);
    let lo: Vec<Metrics> = FRONT_ALPHAS
        .iter()
        .map(|&a| ct_at(&sys, a))
        .collect::<Option<_>>()
        .ok_or("solve")?;
    let hi: Vec<Metrics> = FRONT_ALPHAS
        .iter()
        .map(|&a| ct_at(&noisy, a))
        .collect::<Option<_>>()
        .ok_or("solve")?;
    let bad = front_dominates(|a| ct_at(&sys, a), &hi, CMP_TOL);
    if bad.is_empty() {
        Ok(pointwise_reversals(&lo, &hi))
    } else {
        Err(format!("front not dominated at {bad:?}"))
    }
}

/// `A ≼ B` positive definite implies `B⁻¹ ≼ A⁻¹`.
pub fn inverse_antitone(seed: u64, n: usize) -> Result<(), String> {
    let mut r = rng(seed);
    let a = psd(&mut r, n, 0.05);
    let b = &a + psd(&mut r, n, 0.0) * r.random_range(0.0..3.0);
    let (ai, bi) = (
        a.clone().try_inverse().ok_or("singular")?,
        b.clone().try_inverse().ok_or("singular")?,
    );
    let pa = HermitianPoint::from_real(&a).map_err(|e| e.to_string())?;
    let pb = HermitianPoint::from_real(&b).map_err(|e| e.to_string())?;
    let pai = HermitianPoint::from_real(&((&ai + ai.transpose()) * 0.5)).map_err(|e| e.to_string())?;
    let pbi = HermitianPoint::from_real(&((&bi + bi.transpose()) * 0.5)).map_err(|e| e.to_string())?;
    if !pa.loewner_leq(&pb) {
        return Err("generator broke A ≼ B".into());
    }
    if pbi.loewner_leq(&pai) && loewner_leq(&bi, &ai, CMP_TOL) {
        Ok(())
    } else {
        Err(format!("inverse order fails:\n{a}\n{b}"))
    }
}

/// Sampled analogue of the α monotonicity.
pub fn dt_alpha_tradeoff(seed: u64, n: usize) -> Result<(), String> {
    let mut r = rng(seed);
    let d = random_dt(&mut r, n);
    let a1 = log_uniform(&mut r, ALPHA_RANGE.0, ALPHA_RANGE.1 / 1.001);
    let a2 = log_uniform(&mut r, a1 * 1.0001, ALPHA_RANGE.1);
    let m1 = d.metrics(a1, &d.w, &d.v).ok_or("solve")?;
    let m2 = d.metrics(a2, &d.w, &d.v).ok_or("solve")?;
    check_pair(&format!("alpha {a1} -> {a2}"), m1, m2, false, true)
}

/// Sampled analogue of the noise monotonicity: prior covariance in the
/// Loewner order and a dominated front. Returns fixed-α reversals.
pub fn dt_noise_front(seed: u64, n: usize) -> Result<usize, String> {
    let mut r = rng(seed);
    let d = random_dt(&mut r, n);
    let w2 = &d.w + psd(&mut r, n, 0.0) * r.random_range(0.0..2.0);
    let v2 = &d.v + psd(&mut r, d.c.nrows(), 0.0) * r.random_range(0.0..2.0);
    let g1 = dt_performance(&d.system(1.0).ok_or("system")?)
        .map_err(|e| e.to_string())?
        .gamma;
    let g2 = dt_performance(&d.system_with(1.0, &w2, &v2).ok_or("system")?)
        .map_err(|e| e.to_string())?
        .gamma;
    if !loewner_leq(&g1, &g2, CMP_TOL) {
        return Err(format!("Gamma not Loewner-monotone:\n{g1}\n{g2}"));
    }
    let lo: Vec<Metrics> = FRONT_ALPHAS
        .iter()
        .map(|&a| d.metrics(a, &d.w, &d.v))
        .collect::<Option<_>>()
        .ok_or("solve")?;
    let hi: Vec<Metrics> = FRONT_ALPHAS
        .iter()
        .map(|&a| d.metrics(a, &w2, &v2))
        .collect::<Option<_>>()
        .ok_or("solve")?;
    let bad = front_dominates(|a| d.metrics(a, &d.w, &d.v), &hi, CMP_TOL);
    if bad.is_empty() {
        Ok(pointwise_reversals(&lo, &hi))
    } else {
        Err(format!("front not dominated at {bad:?}"))
    }
}

fn small_ct(seed: u64) -> CtLqgSystem {
    let mut r = rng(seed);
    let n = r.random_range(1..=3);
    random_ct(&mut r, n)
}

/// Both metrics nondecreasing along [`DELAY_GRID`].
pub fn delay_grid(seed: u64) -> Result<(), String> {
    let sys = small_ct(seed);
    let ms: Vec<Metrics> = DELAY_GRID
        .iter()
        .map(|&d| {
            delayed_performance(
                &sys,
                &DelaySpec {
                    d_obs: d / 2.0,
                    d_comp: d / 2.0,
                },
            )
            .map(|s| Metrics {
                p_track: s.p_track,
                p_effort: s.p_effort,
            })
            .map_err(|e| e.to_string())
        })
        .collect::<Result<_, _>>()?;
    for (i, w) in ms.windows(2).enumerate() {
        check_pair(
            &format!("delay {} -> {}", DELAY_GRID[i], DELAY_GRID[i + 1]),
            w[0],
            w[1],
            true,
            true,
        )?;
    }
    Ok(())
}

/// Both metrics nondecreasing along [`DROP_GRID`]; divergence counts as +∞.
pub fn drop_grid(seed: u64) -> Result<(), String> {
    let sys = small_ct(seed);
    let dt = discretize(&sys, DROP_PERIOD).map_err(|e| e.to_string())?;
    let inf = Metrics {
        p_track: f64::INFINITY,
        p_effort: f64::INFINITY,
    };
    let ms: Vec<Metrics> = DROP_GRID
        .iter()
        .map(|&p| match intermittent_performance(&dt, p) {
            Ok(Intermittent::Converged(s)) => Ok(Metrics {
                p_track: s.p_track,
                p_effort: s.p_effort,
            }),
            Ok(Intermittent::Diverged { .. }) => Ok(inf),
            Err(e) => Err(e.to_string()),
        })
        .collect::<Result<_, _>>()?;
    for (i, w) in ms.windows(2).enumerate() {
        if w[0].p_track.is_infinite() && w[1].p_track.is_finite() {
            return Err(format!("converged again after diverging at p={}", DROP_GRID[i]));
        }
        if w[1].p_track.is_finite() {
            check_pair(
                &format!("drop {} -> {}", DROP_GRID[i], DROP_GRID[i + 1]),
                w[0],
                w[1],
                true,
                true,
            )?;
        }
    }
    Ok(())
}

fn sampled(sys: &CtLqgSystem, alpha: f64, delta: f64) -> Option<Metrics> {
    let s = dt_performance(&discretize(&sys.with_alpha(alpha), delta).ok()?).ok()?;
    Some(Metrics {
        p_track: s.p_track,
        p_effort: s.p_effort,
    })
}

/// Fronts along `δ = 2ⁿδ₀` are nested. Returns fixed-α reversals.
pub fn n_grid(seed: u64) -> Result<usize, String> {
    let sys = small_ct(seed);
    let mut reversals = 0;
    for n in 0..N_GRID_MAX {
        let (d1, d2) = (
            N_GRID_DELTA0 * (1u32 << n) as f64,
            N_GRID_DELTA0 * (1u32 << (n + 1)) as f64,
        );
        let lo: Vec<Metrics> = FRONT_ALPHAS
            .iter()
            .map(|&a| sampled(&sys, a, d1))
            .collect::<Option<_>>()
            .ok_or("solve")?;
        let hi: Vec<Metrics> = FRONT_ALPHAS
            .iter()
            .map(|&a| sampled(&sys, a, d2))
            .collect::<Option<_>>()
            .ok_or("solve")?;
        let bad = front_dominates(|a| sampled(&sys, a, d1), &hi, CMP_TOL);
        if !bad.is_empty() {
            return Err(format!("n={n}: front not dominated at {bad:?}"));
        }
        reversals += pointwise_reversals(&lo, &hi);
    }
    Ok(reversals)
}

/// Closed-form agreement tolerance (relative).
pub const CLOSED_FORM_TOL: f64 = 1e-6;
/// Limit-check tolerance (relative).
pub const LIMIT_TOL: f64 = 1e-3;
/// Sampled vs continuous metrics at `δ = 1e-3` (relative).
pub const DT_CT_TOL: f64 = 0.01;
pub const DT_CT_DELTA: f64 = 1e-3;
/// Block-exponential vs quadrature discretization (relative to `max(1, ‖·‖)`).
pub const QUAD_TOL: f64 = 1e-8;

pub fn random_scalar(rng: &mut ChaCha8Rng) -> ScalarLqg {
    ScalarLqg {
        a: rng.random_range(-2.0..2.0),
        b: rng.random_range(0.1..2.0),
        c: rng.random_range(0.1..2.0),
        q0: rng.random_range(0.1..10.0),
        r0: rng.random_range(0.1..10.0),
        v: rng.random_range(0.1..10.0),
        w: rng.random_range(0.1..10.0),
        alpha: log_uniform(rng, 1e-4, 1e4),
    }
}

/// Closed form vs the Riccati/Lyapunov route on one random scalar plant.
pub fn closed_form_case(seed: u64) -> Result<(), String> {
    let s = random_scalar(&mut rng(seed));
    let cf = scalar_closed_form(&s).map_err(|e| e.to_string())?;
    let num = ct_performance(&s.to_system()).map_err(|e| e.to_string())?;
    if rel_close(cf.p_track, num.p_track, CLOSED_FORM_TOL) && rel_close(cf.p_effort, num.p_effort, CLOSED_FORM_TOL) {
        Ok(())
    } else {
        Err(format!(
            "{s:?}: closed form {cf:?}, numeric ({}, {})",
            num.p_track, num.p_effort
        ))
    }
}

/// `α = 1e8` tracking limit `q₀σ̄` and `α = 1e-8` effort limit
/// `2r₀a(cσ̄)²/(b²v)` (for `a > 0`), by both routes.
pub fn limit_case(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let mut s = random_scalar(&mut r);
    s.a = r.random_range(0.1..2.0);
    let sb = s.sigma_bar();
    let track_lim = s.q0 * sb;
    let effort_lim = 2.0 * s.r0 * s.a * (s.c * sb).powi(2) / (s.b * s.b * s.v);
    let hi = ScalarLqg { alpha: 1e8, ..s };
    let lo = ScalarLqg { alpha: 1e-8, ..s };
    let routes = |x: &ScalarLqg| -> Result<[Metrics; 2], String> {
        let cf = scalar_closed_form(x).map_err(|e| e.to_string())?;
        let num = ct_metrics(&x.to_system()).ok_or("numeric solve failed")?;
        Ok([cf, num])
    };
    for m in routes(&hi)? {
        if (m.p_track - track_lim).abs() > LIMIT_TOL * track_lim {
            return Err(format!("{s:?}: P_track {} vs limit {track_lim}", m.p_track));
        }
    }
    for m in routes(&lo)? {
        if (m.p_effort - effort_lim).abs() > LIMIT_TOL * effort_lim {
            return Err(format!("{s:?}: P_effort {} vs limit {effort_lim}", m.p_effort));
        }
    }
    Ok(())
}

pub fn random_two_state(seed: u64) -> CtLqgSystem {
    let mut r = rng(seed);
    random_ct(&mut r, 2)
}

/// Sampled metrics at small δ match the continuous ones, and the sampled
/// cost matrices match direct quadrature.
pub fn discretization_case(seed: u64) -> Result<(), String> {
    let sys = random_two_state(seed);
    let ct = ct_performance(&sys).map_err(|e| e.to_string())?;
    let dt = dt_performance(&discretize(&sys, DT_CT_DELTA).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    if !rel_close(ct.p_track, dt.p_track, DT_CT_TOL) || !rel_close(ct.p_effort, dt.p_effort, DT_CT_TOL) {
        return Err(format!(
            "ct ({}, {}) vs dt ({}, {})",
            ct.p_track, ct.p_effort, dt.p_track, dt.p_effort
        ));
    }
    let delta = rng(seed ^ 0x5eed).random_range(0.01..0.5);
    let d = discretize_matrices(&sys, delta).map_err(|e| e.to_string())?;
    let (q_d, r_d, w_d) = quadrature_discretization(&sys, delta);
    for (name, got, want) in [("Q_d", &d.q_d, &q_d), ("R_d", &d.r_d, &r_d), ("W_d", &d.w_d, &w_d)] {
        let err = fro(&(got - want));
        if err > QUAD_TOL * fro(want).max(1.0) {
            return Err(format!("{name} at δ={delta}: error {err:e}"));
        }
    }
    Ok(())
}

pub const MAX_LOOPS: usize = 3;
pub const MAX_IMPLS: usize = 4;

/// Fixed-point solver vs exhaustive search on one random diagram, plus the
/// Kleene chain properties. Returns `(iterations, chain_bound)`.
pub fn solver_case(seed: u64) -> Result<(usize, usize), String> {
    let mut r = rng(seed);
    let loops = r.random_range(0..=MAX_LOOPS);
    let d = random_diagram(&mut r, loops, MAX_IMPLS);
    let f = random_query(&mut r);
    let s = solve_loop(&d, &f).map_err(|e| e.to_string())?;
    let b = brute_force_solve(&d, &f).map_err(|e| e.to_string())?;
    if s.front != b.front {
        return Err(format!(
            "seed {seed}: solver {:?} vs brute {:?}",
            s.front.points(),
            b.front.points()
        ));
    }
    for w in &s.witnesses {
        if let Err(bad) = d.check_assignment(&f, w).map_err(|e| e.to_string())? {
            return Err(format!("seed {seed}: witness violates {bad:?}"));
        }
    }
    kleene_chain(&s)
}

/// Iterates ascend and their number stays within the chain bound.
pub fn kleene_chain(s: &Solution) -> Result<(usize, usize), String> {
    let it = &s.report.iterates;
    for (i, w) in it.windows(2).enumerate() {
        if !antichain_leq(&w[0], &w[1]).map_err(|e| e.to_string())? {
            return Err(format!("iterate {i} is not below iterate {}", i + 1));
        }
    }
    let bound = s.report.chain_bound.ok_or("no chain bound")?;
    if s.report.iterations > bound {
        return Err(format!(
            "{} iterations exceed the chain bound {bound}",
            s.report.iterations
        ));
    }
    Ok((s.report.iterations, bound))
}

/// Toy drone missions checked against exhaustive search.
pub fn drone_toy_missions() -> Vec<MissionSpec> {
    let mut out = Vec::new();
    for t in [0.0, 10.0, 20.0] {
        for n in [100.0, 1000.0] {
            for w in [0.01, 0.1] {
                out.push(MissionSpec::new(t, n, w));
            }
        }
    }
    out
}

pub fn drone_toy_case(d: &CoDesignDiagram, m: &MissionSpec) -> Result<(), String> {
    let f = m.functionality(d);
    let s = solve_loop(d, &f).map_err(|e| e.to_string())?;
    let b = brute_force_solve(d, &f).map_err(|e| e.to_string())?;
    if s.front != b.front {
        return Err(format!(
            "{m:?}: solver {:?} vs brute {:?}",
            s.front.points(),
            b.front.points()
        ));
    }
    kleene_chain(&s).map(|_| ())
}

/// Fronts for nested missions, each pair dominated in sweep order.
pub fn nested_fronts(d: &CoDesignDiagram, sweep: &[MissionSpec]) -> Result<Vec<usize>, String> {
    let q = query(d, sweep).map_err(|e| e.to_string())?;
    for i in 0..q.len() {
        for j in i + 1..q.len() {
            if !antichain_leq(&q[i].front, &q[j].front).map_err(|e| e.to_string())? {
                return Err(format!("front {i} is not below front {j}"));
            }
        }
    }
    Ok(q.iter().map(|p| p.front.len()).collect())
}
