use nalgebra::DMatrix;

use super::linalg::{
    check_pd, check_psd, check_square, fro, inv, is_hurwitz, solve_lyap_ct, solve_stein, spectral_radius, sym,
};
use super::{LqgError, TOL_RICCATI};

fn check_dims(a: &DMatrix<f64>, b: &DMatrix<f64>, q: &DMatrix<f64>, r: &DMatrix<f64>) -> Result<(), LqgError> {
    let n = a.nrows();
    check_square("A", a, n)?;
    if b.nrows() != n {
        return Err(LqgError::Dimension(format!("B has {} rows, expected {n}", b.nrows())));
    }
    check_square("Q", q, n)?;
    check_square("R", r, b.ncols())?;
    check_psd("Q", q)?;
    check_pd("R", r)?;
    Ok(())
}

/// Relative residual of `AᵀX + XA − XGX + Q`, scaled by the backward-error
/// denominator `1 + ‖Q‖ + 2‖A‖‖X‖ + ‖G‖‖X‖²`.
pub fn care_residual(a: &DMatrix<f64>, g: &DMatrix<f64>, q: &DMatrix<f64>, x: &DMatrix<f64>) -> f64 {
    let ax = a.transpose() * x;
    let res = &ax + ax.transpose() - x * g * x + q;
    let nx = fro(x);
    fro(&res) / (1.0 + fro(q) + 2.0 * fro(a) * nx + fro(g) * nx * nx)
}

/// Relative residual of `AᵀXA − X − AᵀXB(R + BᵀXB)⁻¹BᵀXA + Q`.
pub fn dare_residual(a: &DMatrix<f64>, b: &DMatrix<f64>, q: &DMatrix<f64>, r: &DMatrix<f64>, x: &DMatrix<f64>) -> f64 {
    let axa = a.transpose() * x * a;
    let bxa = b.transpose() * x * a;
    let s = r + b.transpose() * x * b;
    let corr = match s.clone().try_inverse() {
        Some(si) => bxa.transpose() * si * &bxa,
        None => return f64::INFINITY,
    };
    let res = &axa - x - &corr + q;
    fro(&res) / (1.0 + fro(&axa) + fro(x) + fro(&corr) + fro(q))
}

/// Matrix sign function by scaled Newton iteration.
fn sign(h: &DMatrix<f64>) -> Result<DMatrix<f64>, LqgError> {
    let n = h.nrows();
    let mut z = h.clone();
    let mut prev = f64::INFINITY;
    for _ in 0..200 {
        let zi = z.clone().try_inverse().ok_or(LqgError::Singular("Hamiltonian"))?;
        let det = z.determinant().abs();
        let c = if det.is_finite() && det > 0.0 {
            det.powf(-1.0 / n as f64)
        } else {
            1.0
        };
        let next = (&z * c + zi / c) * 0.5;
        let step = fro(&(&next - &z)) / fro(&next);
        z = next;
        if !step.is_finite() {
            break;
        }
        // quadratic convergence stalls at the rounding level
        if step <= 1e-13 || (step < 1e-6 && step >= prev) {
            return Ok(z);
        }
        prev = step;
    }
    Err(LqgError::NoConvergence {
        what: "matrix sign iteration",
        residual: f64::NAN,
    })
}

/// Stabilizing solution of `AᵀS + SA − SBR⁻¹BᵀS + Q = 0`.
///
/// Sign-function initial guess on the balanced Hamiltonian, then
/// Newton–Kleinman refinement. When the guess is not stabilizing the
/// iteration starts from the solution with `Q` replaced by a multiple of `I`.
pub fn solve_care(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    q: &DMatrix<f64>,
    r: &DMatrix<f64>,
) -> Result<DMatrix<f64>, LqgError> {
    check_dims(a, b, q, r)?;
    let n = a.nrows();
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let rinv = inv("R", r)?;
    let g = sym(&(b * &rinv * b.transpose()));
    let q = sym(q);
    let stabilizing = |x: &DMatrix<f64>| is_hurwitz(&(a - &g * x));
    let start = match sign_guess(a, &g, &q) {
        Ok(x) if stabilizing(&x) => x,
        _ => {
            let id = DMatrix::<f64>::identity(n, n) * fro(&g).max(1.0);
            let x = sign_guess(a, &g, &id)?;
            if !stabilizing(&x) {
                return Err(LqgError::NotStabilizing);
            }
            x
        }
    };
    let (x, res) = newton_kleinman(a, &g, &q, start);
    if !(res <= TOL_RICCATI) {
        return Err(LqgError::NoConvergence {
            what: "continuous Riccati equation",
            residual: res,
        });
    }
    if !stabilizing(&x) {
        return Err(LqgError::NotStabilizing);
    }
    Ok(x)
}

/// Sign-function solution of the balanced Hamiltonian problem.
///
/// With `s = √(‖G‖/‖Q‖)`, `sX` solves the equation for `(G/s, sQ)`.
fn sign_guess(a: &DMatrix<f64>, g: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<DMatrix<f64>, LqgError> {
    let n = a.nrows();
    let (ng, nq) = (fro(g), fro(q));
    let s = if ng > 0.0 && nq > 0.0 { (ng / nq).sqrt() } else { 1.0 };
    let (g, q) = (g / s, q * s);
    let mut h = DMatrix::<f64>::zeros(2 * n, 2 * n);
    h.view_mut((0, 0), (n, n)).copy_from(a);
    h.view_mut((0, n), (n, n)).copy_from(&(-&g));
    h.view_mut((n, 0), (n, n)).copy_from(&(-&q));
    h.view_mut((n, n), (n, n)).copy_from(&(-a.transpose()));
    let w = sign(&h)?;
    let id = DMatrix::<f64>::identity(n, n);
    let mut lhs = DMatrix::<f64>::zeros(2 * n, n);
    lhs.view_mut((0, 0), (n, n)).copy_from(&w.view((0, n), (n, n)));
    lhs.view_mut((n, 0), (n, n)).copy_from(&(w.view((n, n), (n, n)) + &id));
    let mut rhs = DMatrix::<f64>::zeros(2 * n, n);
    rhs.view_mut((0, 0), (n, n))
        .copy_from(&(-(w.view((0, 0), (n, n)) + &id)));
    rhs.view_mut((n, 0), (n, n)).copy_from(&(-w.view((n, 0), (n, n))));
    let x = lhs
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|_| LqgError::Singular("sign-function subspace"))?;
    Ok(sym(&x) / s)
}

fn care_res_matrix(a: &DMatrix<f64>, g: &DMatrix<f64>, q: &DMatrix<f64>, x: &DMatrix<f64>) -> DMatrix<f64> {
    let ax = a.transpose() * x;
    sym(&(&ax + ax.transpose() - x * g * x + q))
}

/// Kleinman iterations from a stabilizing `x`, then correction steps.
/// Returns the iterate with the smallest residual.
fn newton_kleinman(a: &DMatrix<f64>, g: &DMatrix<f64>, q: &DMatrix<f64>, x: DMatrix<f64>) -> (DMatrix<f64>, f64) {
    let mut best = (x.clone(), care_residual(a, g, q, &x));
    let mut x = x;
    let mut stalled = 0;
    for _ in 0..100 {
        if best.1 <= 0.01 * TOL_RICCATI || stalled >= 3 {
            break;
        }
        let acl = a - g * &x;
        // correction form: (A − GX)ᵀΔ + Δ(A − GX) = −Res(X)
        let Ok(delta) = solve_lyap_ct(&acl.transpose(), &care_res_matrix(a, g, q, &x)) else {
            break;
        };
        x = sym(&(&x + delta));
        let r = care_residual(a, g, q, &x);
        if r < best.1 {
            stalled = if r > 0.5 * best.1 { stalled + 1 } else { 0 };
            best = (x.clone(), r);
        } else {
            stalled += 1;
        }
    }
    best
}

/// Stabilizing solution of `P = AᵀPA − AᵀPB(R + BᵀPB)⁻¹BᵀPA + Q`.
///
/// Structure-preserving doubling, then Hewer refinement. When doubling
/// fails or gives a non-stabilizing gain, Hewer starts from the solution
/// with `Q` replaced by a multiple of `I`.
pub fn solve_dare(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    q: &DMatrix<f64>,
    r: &DMatrix<f64>,
) -> Result<DMatrix<f64>, LqgError> {
    check_dims(a, b, q, r)?;
    let n = a.nrows();
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let q = sym(q);
    let gain = |x: &DMatrix<f64>| -> Option<DMatrix<f64>> {
        let s = r + b.transpose() * x * b;
        Some(s.try_inverse()? * b.transpose() * x * a)
    };
    let stabilizing = |x: &DMatrix<f64>| gain(x).is_some_and(|k| spectral_radius(&(a - b * k)) < 1.0);
    let start = match sda(a, b, &q, r) {
        Ok(x) if stabilizing(&x) => x,
        _ => {
            let scale = fro(r) / fro(&(b.transpose() * b)).max(f64::MIN_POSITIVE);
            let id = DMatrix::<f64>::identity(n, n) * scale.max(f64::MIN_POSITIVE);
            let x = sda(a, b, &id, r)?;
            if !stabilizing(&x) {
                return Err(LqgError::NotStabilizing);
            }
            x
        }
    };
    let (x, res) = hewer(a, b, &q, r, start);
    if !(res <= TOL_RICCATI) {
        return Err(LqgError::NoConvergence {
            what: "discrete Riccati equation",
            residual: res,
        });
    }
    if !stabilizing(&x) {
        return Err(LqgError::NotStabilizing);
    }
    Ok(x)
}

fn sda(a: &DMatrix<f64>, b: &DMatrix<f64>, q: &DMatrix<f64>, r: &DMatrix<f64>) -> Result<DMatrix<f64>, LqgError> {
    let n = a.nrows();
    let rinv = inv("R", r)?;
    let id = DMatrix::<f64>::identity(n, n);
    let mut ak = a.clone();
    let mut gk = sym(&(b * &rinv * b.transpose()));
    let mut hk = q.clone();
    let mut prev = f64::INFINITY;
    for _ in 0..100 {
        let winv = inv("I + GH", &(&id + &gk * &hk))?;
        let a1 = &ak * &winv * &ak;
        let g1 = sym(&(&gk + &ak * &winv * &gk * ak.transpose()));
        let h1 = sym(&(&hk + ak.transpose() * &hk * &winv * &ak));
        let step = fro(&(&h1 - &hk)) / fro(&h1).max(f64::MIN_POSITIVE);
        ak = a1;
        gk = g1;
        hk = h1;
        if !hk.iter().all(|v| v.is_finite()) || hk.amax() > 1e300 {
            break;
        }
        if step <= 1e-15 || (step < 1e-8 && step >= prev) {
            return Ok(hk);
        }
        prev = step;
    }
    Err(LqgError::NoConvergence {
        what: "discrete Riccati doubling",
        residual: f64::NAN,
    })
}

/// Hewer (discrete Newton) iterations from a stabilizing `x`; returns the
/// iterate with the smallest residual.
fn hewer(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    q: &DMatrix<f64>,
    r: &DMatrix<f64>,
    x: DMatrix<f64>,
) -> (DMatrix<f64>, f64) {
    let mut best = (x.clone(), dare_residual(a, b, q, r, &x));
    let mut x = x;
    let mut stalled = 0;
    for _ in 0..200 {
        if best.1 <= 0.01 * TOL_RICCATI || stalled >= 3 {
            break;
        }
        let s = r + b.transpose() * &x * b;
        let Some(si) = s.try_inverse() else { break };
        let k = si * b.transpose() * &x * a;
        let acl = a - b * &k;
        let Ok(next) = solve_stein(&acl.transpose(), &(q + k.transpose() * r * &k)) else {
            break;
        };
        x = next;
        let res = dare_residual(a, b, q, r, &x);
        if res < best.1 {
            stalled = if res > 0.5 * best.1 { stalled + 1 } else { 0 };
            best = (x.clone(), res);
        } else {
            stalled += 1;
        }
    }
    best
}
