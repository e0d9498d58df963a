mod common;

use codesign_core::lqg::{
    care_residual, ct_performance, dare_residual, dt_performance, noise_integral, scalar_closed_form, solve_care,
    solve_dare, solve_lyap_ct, solve_stein, spectral_radius, CtLqgSystem, DtLqgSystem, ScalarLqg, TOL_RICCATI,
};
use common::checks::*;
use common::*;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn scalar_closed_form_matches_riccati(seed in any::<u64>()) {
        closed_form_case(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn extreme_alpha_limits(seed in any::<u64>()) {
        limit_case(seed).map_err(TestCaseError::fail)?;
    }
}

proptest! {
    #![proptest_config(config(50))]

    #[test]
    fn fine_sampling_and_quadrature(seed in any::<u64>()) {
        discretization_case(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn cost_identity(seed in any::<u64>(), n in 1usize..=4) {
        let sys = random_ct(&mut rng(seed), n);
        let s = ct_performance(&sys).unwrap();
        prop_assert!(rel_close(s.j_star, s.j_star_alt, 1e-8), "{} vs {}", s.j_star, s.j_star_alt);
        let d = random_dt(&mut rng(seed), n);
        let s = dt_performance(&d.system(1.0).unwrap()).unwrap();
        prop_assert!(rel_close(s.j_star, s.j_star_alt, 1e-8), "{} vs {}", s.j_star, s.j_star_alt);
    }

    #[test]
    fn riccati_residuals(seed in any::<u64>(), n in 1usize..=4) {
        let sys = random_ct(&mut rng(seed), n);
        let (q, r) = (sys.q(), sys.r());
        let x = solve_care(&sys.a, &sys.b, &q, &r).unwrap();
        let g = &sys.b * r.clone().try_inverse().unwrap() * sys.b.transpose();
        prop_assert!(care_residual(&sys.a, &g, &q, &x) <= TOL_RICCATI);
        let acl = &sys.a - &g * &x;
        prop_assert!(acl.complex_eigenvalues().iter().all(|l| l.re < 0.0));
        let d = random_dt(&mut rng(seed), n);
        let p = solve_dare(&d.a, &d.b, &d.q0, &d.r0).unwrap();
        prop_assert!(dare_residual(&d.a, &d.b, &d.q0, &d.r0, &p) <= TOL_RICCATI);
        let k = (&d.r0 + d.b.transpose() * &p * &d.b).try_inverse().unwrap() * d.b.transpose() * &p * &d.a;
        prop_assert!(spectral_radius(&(&d.a - &d.b * k)) < 1.0);
    }

    #[test]
    fn lyapunov_and_stein_match_kronecker(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let a = uniform(&mut r, n, n, -1.0, 1.0);
        let shift = a.complex_eigenvalues().iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
        let hurwitz = &a - DMatrix::identity(n, n) * (shift + 0.5);
        let q = psd(&mut r, n, 0.1);
        let x = solve_lyap_ct(&hurwitz, &q).unwrap();
        let want = kron_lyap(&hurwitz, &q);
        prop_assert!(fro(&(&x - &want)) <= 1e-9 * fro(&want).max(1.0));
        let schur = &a / (spectral_radius(&a) + 0.3);
        let x = solve_stein(&schur, &q).unwrap();
        let want = kron_stein(&schur, &q);
        prop_assert!(fro(&(&x - &want)) <= 1e-9 * fro(&want).max(1.0));
    }
}

#[test]
fn noise_integral_matches_quadrature() {
    let mut r = rng(7);
    for n in 1..=4 {
        let a = uniform(&mut r, n, n, -1.0, 1.0);
        let w = psd(&mut r, n, 0.1);
        let got = noise_integral(&a, &w, 0.3);
        let want = gauss_legendre(
            |s| {
                let e = expm_taylor(&(&a * s));
                &e * &w * e.transpose()
            },
            0.0,
            0.3,
            16,
            n,
            n,
        );
        assert!(fro(&(&got - &want)) <= 1e-12 * fro(&want).max(1.0));
    }
}

/// Closed-form scalar metrics with a naive (non-rearranged) evaluation.
#[test]
fn closed_form_matches_textbook_expression() {
    let mut r = rng(11);
    for _ in 0..200 {
        let s = ScalarLqg {
            alpha: r.random_range(0.1..10.0),
            ..random_scalar(&mut r)
        };
        let sb = (s.v / (s.c * s.c)) * (s.a + (s.a * s.a + s.c * s.c * s.w / s.v).sqrt());
        let d = s.a * s.a + s.alpha * s.alpha * s.b * s.b * s.q0 / s.r0;
        let track = s.q0 * (sb + sb * sb * s.c * s.c / (2.0 * s.v * d.sqrt()));
        let effort = s.r0 * (sb * s.c * (s.a + d.sqrt())).powi(2) / (2.0 * s.b * s.b * s.v * d.sqrt());
        let m = scalar_closed_form(&s).unwrap();
        assert!(rel_close(m.p_track, track, 1e-9), "{s:?}");
        assert!(rel_close(m.p_effort, effort, 1e-9), "{s:?}");
    }
}

/// Symmetric square root for sampling from a PSD covariance.
fn sqrt_psd(m: &DMatrix<f64>) -> DMatrix<f64> {
    let e = (m + m.transpose()).scale(0.5).symmetric_eigen();
    let d = DMatrix::from_diagonal(&e.eigenvalues.map(|l| l.max(0.0).sqrt()));
    &e.eigenvectors * d * e.eigenvectors.transpose()
}

fn normal(r: &mut rand_chacha::ChaCha8Rng, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| StandardNormal.sample(r))
}

const MC_STEPS: usize = 1_000_000;
const MC_TOL: f64 = 0.02;

fn mc_plant() -> CtLqgSystem {
    let m = |r: usize, c: usize, v: &[f64]| DMatrix::from_row_slice(r, c, v);
    CtLqgSystem::new(
        m(2, 2, &[0.0, 1.0, -1.0, -0.5]),
        m(2, 1, &[0.0, 1.0]),
        m(1, 2, &[1.0, 0.0]),
        m(2, 2, &[0.2, 0.0, 0.0, 0.5]),
        m(1, 1, &[0.1]),
        m(2, 2, &[1.0, 0.0, 0.0, 0.5]),
        m(1, 1, &[1.0]),
        2.0,
    )
    .unwrap()
}

/// Exact sampling of the joint (state, estimate) diffusion.
#[test]
fn continuous_metrics_match_monte_carlo() {
    let sys = mc_plant();
    let sol = ct_performance(&sys).unwrap();
    let n = sys.n();
    let bk = &sys.b * &sol.k;
    let mut m = DMatrix::<f64>::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(&sys.a);
    m.view_mut((0, n), (n, n)).copy_from(&(-&bk));
    m.view_mut((n, 0), (n, n)).copy_from(&(&sol.l * &sys.c));
    m.view_mut((n, n), (n, n)).copy_from(&(&sys.a - &bk - &sol.l * &sys.c));
    let mut noise = DMatrix::<f64>::zeros(2 * n, 2 * n);
    noise.view_mut((0, 0), (n, n)).copy_from(&sys.w);
    noise
        .view_mut((n, n), (n, n))
        .copy_from(&(&sol.l * &sys.v * sol.l.transpose()));
    let h = 0.2;
    let phi = expm_taylor(&(&m * h));
    let chol = sqrt_psd(&noise_integral(&m, &noise, h));
    let kr = sol.k.transpose() * &sys.r0 * &sol.k;
    let mut r = rng(2024);
    let mut z = DVector::<f64>::zeros(2 * n);
    for _ in 0..1000 {
        z = &phi * &z + &chol * normal(&mut r, 2 * n);
    }
    let (mut track, mut effort) = (0.0, 0.0);
    for _ in 0..MC_STEPS {
        z = &phi * &z + &chol * normal(&mut r, 2 * n);
        let x = z.rows(0, n);
        let xh = z.rows(n, n);
        track += (x.transpose() * &sys.q0 * x)[0];
        effort += (xh.transpose() * &kr * xh)[0];
    }
    track /= MC_STEPS as f64;
    effort /= MC_STEPS as f64;
    assert!(rel_close(track, sol.p_track, MC_TOL), "{track} vs {}", sol.p_track);
    assert!(rel_close(effort, sol.p_effort, MC_TOL), "{effort} vs {}", sol.p_effort);
}

/// Simulates the current-estimator loop on a discrete plant.
#[test]
fn discrete_metrics_match_monte_carlo() {
    let m = |r: usize, c: usize, v: &[f64]| DMatrix::from_row_slice(r, c, v);
    let sys = DtLqgSystem::new(
        m(2, 2, &[1.0, 0.1, -0.1, 0.95]),
        m(2, 1, &[0.0, 0.1]),
        m(1, 2, &[1.0, 0.0]),
        m(2, 2, &[0.02, 0.0, 0.0, 0.05]),
        m(1, 1, &[0.1]),
        m(2, 2, &[1.0, 0.0, 0.0, 0.5]),
        m(1, 1, &[0.5]),
    )
    .unwrap();
    let sol = dt_performance(&sys).unwrap();
    let n = 2;
    let sw = sqrt_psd(&sys.w);
    let sv = sys.v[(0, 0)].sqrt();
    let mut r = rng(99);
    let mut x = DVector::<f64>::zeros(n);
    let mut pred = DVector::<f64>::zeros(n);
    let (mut track, mut effort) = (0.0, 0.0);
    let burn = 1000;
    for step in 0..MC_STEPS + burn {
        let y = &sys.c * &x + DVector::from_element(1, sv * normal(&mut r, 1)[0]);
        let xh = &pred + &sol.l * (y - &sys.c * &pred);
        let u = -&sol.k * &xh;
        if step >= burn {
            track += (x.transpose() * &sys.q0 * &x)[0];
            effort += (u.transpose() * &sys.r0 * &u)[0];
        }
        x = &sys.a * &x + &sys.b * &u + &sw * normal(&mut r, n);
        pred = &sys.a * &xh + &sys.b * &u;
    }
    track /= MC_STEPS as f64;
    effort /= MC_STEPS as f64;
    assert!(rel_close(track, sol.p_track, MC_TOL), "{track} vs {}", sol.p_track);
    assert!(rel_close(effort, sol.p_effort, MC_TOL), "{effort} vs {}", sol.p_effort);
}
