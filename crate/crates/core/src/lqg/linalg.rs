use nalgebra::{linalg::Schur, Complex, DMatrix};

use super::LqgError;

pub(crate) fn sym(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

pub(crate) fn fro(m: &DMatrix<f64>) -> f64 {
    m.norm()
}

/// Smallest eigenvalue of the symmetric part.
pub fn min_eig(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    sym(m).symmetric_eigenvalues().min()
}

pub(crate) fn check_square(name: &str, m: &DMatrix<f64>, n: usize) -> Result<(), LqgError> {
    if m.nrows() != n || m.ncols() != n {
        return Err(LqgError::Dimension(format!(
            "{name} is {}x{}, expected {n}x{n}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

pub(crate) fn check_symmetric(name: &'static str, m: &DMatrix<f64>) -> Result<(), LqgError> {
    let scale = 1.0 + m.amax();
    if (m - m.transpose()).amax() > 1e-9 * scale {
        return Err(LqgError::NotSymmetric(name));
    }
    Ok(())
}

pub(crate) fn check_psd(name: &'static str, m: &DMatrix<f64>) -> Result<(), LqgError> {
    check_symmetric(name, m)?;
    if min_eig(m) < -1e-9 * (1.0 + m.amax()) {
        return Err(LqgError::NotPsd(name));
    }
    Ok(())
}

pub(crate) fn check_pd(name: &'static str, m: &DMatrix<f64>) -> Result<(), LqgError> {
    check_symmetric(name, m)?;
    if m.nrows() > 0 && min_eig(m) <= 1e-12 * (1.0 + m.amax()) {
        return Err(LqgError::NotPd(name));
    }
    Ok(())
}

pub(crate) fn inv(name: &'static str, m: &DMatrix<f64>) -> Result<DMatrix<f64>, LqgError> {
    m.clone().try_inverse().ok_or(LqgError::Singular(name))
}

fn schur(a: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>), LqgError> {
    Schur::try_new(a.clone(), f64::EPSILON, 100_000)
        .map(|s| s.unpack())
        .ok_or(LqgError::NoConvergence {
            what: "real Schur decomposition",
            residual: f64::NAN,
        })
}

/// Diagonal blocks of a quasi-triangular matrix: 1x1 or 2x2.
fn blocks(t: &DMatrix<f64>) -> Vec<Vec<usize>> {
    let n = t.nrows();
    let mut out = Vec::new();
    let mut j = 0;
    while j < n {
        if j + 1 < n && t[(j + 1, j)] != 0.0 {
            out.push(vec![j, j + 1]);
            j += 2;
        } else {
            out.push(vec![j]);
            j += 1;
        }
    }
    out
}

pub fn eigenvalues(a: &DMatrix<f64>) -> Vec<Complex<f64>> {
    if a.nrows() == 0 {
        return Vec::new();
    }
    a.complex_eigenvalues().iter().copied().collect()
}

pub fn is_hurwitz(a: &DMatrix<f64>) -> bool {
    eigenvalues(a).iter().all(|l| l.re < 0.0)
}

pub fn spectral_radius(a: &DMatrix<f64>) -> f64 {
    eigenvalues(a).iter().map(|l| l.norm()).fold(0.0, f64::max)
}

/// Solves `T Y + Y Tᵀ = C` (continuous) or `Y − T Y Tᵀ = C` (discrete)
/// for quasi-upper-triangular `T`, one column block at a time from the right.
fn quasi_triangular_solve(t: &DMatrix<f64>, c: &DMatrix<f64>, discrete: bool) -> Result<DMatrix<f64>, LqgError> {
    let n = t.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let mut y = DMatrix::<f64>::zeros(n, n);
    let bl = blocks(t);
    for (bi, blk) in bl.iter().enumerate().rev() {
        let later: Vec<usize> = bl[bi + 1..].iter().flatten().copied().collect();
        let mut rhs = Vec::new();
        for &j in blk {
            let mut acc = DMatrix::<f64>::zeros(n, 1);
            for &k in &later {
                acc += y.column(k) * t[(j, k)];
            }
            let r = if discrete {
                c.column(j) + t * acc
            } else {
                c.column(j) - acc
            };
            rhs.push(r);
        }
        let coef = |tj: f64| -> DMatrix<f64> {
            if discrete {
                &id - t * tj
            } else {
                t + &id * tj
            }
        };
        let cross = |tj: f64| -> DMatrix<f64> {
            if discrete {
                t * (-tj)
            } else {
                &id * tj
            }
        };
        match blk.as_slice() {
            [j] => {
                let m = coef(t[(*j, *j)]);
                let sol = m.lu().solve(&rhs[0]).ok_or(LqgError::Singular("Lyapunov operator"))?;
                y.set_column(*j, &sol.column(0));
            }
            [j1, j2] => {
                let mut m = DMatrix::<f64>::zeros(2 * n, 2 * n);
                m.view_mut((0, 0), (n, n)).copy_from(&coef(t[(*j1, *j1)]));
                m.view_mut((0, n), (n, n)).copy_from(&cross(t[(*j1, *j2)]));
                m.view_mut((n, 0), (n, n)).copy_from(&cross(t[(*j2, *j1)]));
                m.view_mut((n, n), (n, n)).copy_from(&coef(t[(*j2, *j2)]));
                let mut r = DMatrix::<f64>::zeros(2 * n, 1);
                r.view_mut((0, 0), (n, 1)).copy_from(&rhs[0]);
                r.view_mut((n, 0), (n, 1)).copy_from(&rhs[1]);
                let sol = m.lu().solve(&r).ok_or(LqgError::Singular("Lyapunov operator"))?;
                y.set_column(*j1, &sol.view((0, 0), (n, 1)).column(0));
                y.set_column(*j2, &sol.view((n, 0), (n, 1)).column(0));
            }
            _ => unreachable!(),
        }
    }
    Ok(y)
}

/// `X` with `A X + X Aᵀ + Q = 0`, by Bartels–Stewart on the real Schur form.
pub fn solve_lyap_ct(a: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<DMatrix<f64>, LqgError> {
    let n = a.nrows();
    check_square("A", a, n)?;
    check_square("Rhs", q, n)?;
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    if !is_hurwitz(a) {
        return Err(LqgError::NotHurwitz);
    }
    let (u, t) = schur(a)?;
    let c = -(u.transpose() * q * &u);
    let y = quasi_triangular_solve(&t, &c, false)?;
    Ok(sym(&(&u * y * u.transpose())))
}

/// `X` with `X = A X Aᵀ + Q`, by Bartels–Stewart on the real Schur form.
pub fn solve_stein(a: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<DMatrix<f64>, LqgError> {
    let n = a.nrows();
    check_square("A", a, n)?;
    check_square("Rhs", q, n)?;
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    if spectral_radius(a) >= 1.0 {
        return Err(LqgError::NotSchurStable);
    }
    let (u, t) = schur(a)?;
    let c = u.transpose() * q * &u;
    let y = quasi_triangular_solve(&t, &c, true)?;
    Ok(sym(&(&u * y * u.transpose())))
}

/// Rank test of `[λI − A, B]` at every eigenvalue of `A` in the unstable region.
pub(crate) fn pbh_ok(a: &DMatrix<f64>, b: &DMatrix<f64>, discrete: bool) -> bool {
    let n = a.nrows();
    for l in eigenvalues(a) {
        let unstable = if discrete {
            l.norm() >= 1.0 - 1e-10
        } else {
            l.re >= -1e-10
        };
        if !unstable {
            continue;
        }
        let mut m = DMatrix::<Complex<f64>>::zeros(n, n + b.ncols());
        for i in 0..n {
            for j in 0..n {
                let d = if i == j { l } else { Complex::new(0.0, 0.0) };
                m[(i, j)] = d - Complex::new(a[(i, j)], 0.0);
            }
            for j in 0..b.ncols() {
                m[(i, n + j)] = Complex::new(b[(i, j)], 0.0);
            }
        }
        let sv = m.singular_values();
        let top = sv.max().max(1.0);
        let rank = sv.iter().filter(|s| **s > 1e-9 * top).count();
        if rank < n {
            return false;
        }
    }
    true
}

/// `(A, B)` stabilizable (continuous time).
pub fn stabilizable(a: &DMatrix<f64>, b: &DMatrix<f64>) -> bool {
    pbh_ok(a, b, false)
}

/// `(A, C)` detectable (continuous time).
pub fn detectable(a: &DMatrix<f64>, c: &DMatrix<f64>) -> bool {
    pbh_ok(&a.transpose(), &c.transpose(), false)
}

pub fn stabilizable_dt(a: &DMatrix<f64>, b: &DMatrix<f64>) -> bool {
    pbh_ok(a, b, true)
}

pub fn detectable_dt(a: &DMatrix<f64>, c: &DMatrix<f64>) -> bool {
    pbh_ok(&a.transpose(), &c.transpose(), true)
}
