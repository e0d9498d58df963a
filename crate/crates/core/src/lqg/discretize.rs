use nalgebra::DMatrix;

use super::linalg::sym;
use super::{CtLqgSystem, DtLqgSystem, LqgError};

/// `∫₀^d e^{As} M e^{Aᵀs} ds` through the exponential of `[[−A, M], [0, Aᵀ]]`.
pub fn noise_integral(a: &DMatrix<f64>, m: &DMatrix<f64>, d: f64) -> DMatrix<f64> {
    let n = a.nrows();
    if d == 0.0 || n == 0 {
        return DMatrix::zeros(n, n);
    }
    let mut z = DMatrix::<f64>::zeros(2 * n, 2 * n);
    z.view_mut((0, 0), (n, n)).copy_from(&(-a));
    z.view_mut((0, n), (n, n)).copy_from(m);
    z.view_mut((n, n), (n, n)).copy_from(&a.transpose());
    let e = (z * d).exp();
    let f22 = e.view((n, n), (n, n)).transpose();
    let g12 = e.view((0, n), (n, n)).into_owned();
    sym(&(f22 * g12))
}

/// Zero-order-hold sampled matrices.
#[derive(Clone, Debug)]
pub struct Discretization {
    pub a_d: DMatrix<f64>,
    pub b_d: DMatrix<f64>,
    pub q_d: DMatrix<f64>,
    pub r_d: DMatrix<f64>,
    /// State/input cross weight; not used by the sampled design.
    pub n_d: DMatrix<f64>,
    pub w_d: DMatrix<f64>,
    pub v_d: DMatrix<f64>,
}

/// Sampled matrices for period `delta`.
///
/// `A_d, B_d` come from the exponential of `[[A, B], [0, 0]]δ`; the cost
/// integrals `∫ e^{Ãᵀs} diag(Q, R) e^{Ãs} ds` from a Van Loan block with
/// `Ã = [[A, B], [0, 0]]`; `V_d = V/δ`.
pub fn discretize_matrices(sys: &CtLqgSystem, delta: f64) -> Result<Discretization, LqgError> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(LqgError::BadPeriod(delta));
    }
    let n = sys.a.nrows();
    let m = sys.b.ncols();
    let k = n + m;
    let mut at = DMatrix::<f64>::zeros(k, k);
    at.view_mut((0, 0), (n, n)).copy_from(&sys.a);
    at.view_mut((0, n), (n, m)).copy_from(&sys.b);
    let e = (&at * delta).exp();
    let a_d = e.view((0, 0), (n, n)).into_owned();
    let b_d = e.view((0, n), (n, m)).into_owned();

    let mut qt = DMatrix::<f64>::zeros(k, k);
    qt.view_mut((0, 0), (n, n)).copy_from(&sys.q());
    qt.view_mut((n, n), (m, m)).copy_from(&sys.r());
    let mut z = DMatrix::<f64>::zeros(2 * k, 2 * k);
    z.view_mut((0, 0), (k, k)).copy_from(&(-at.transpose()));
    z.view_mut((0, k), (k, k)).copy_from(&qt);
    z.view_mut((k, k), (k, k)).copy_from(&at);
    let ez = (z * delta).exp();
    let int = ez.view((k, k), (k, k)).transpose() * ez.view((0, k), (k, k));
    let q_d = sym(&int.view((0, 0), (n, n)).into_owned());
    let r_d = sym(&int.view((n, n), (m, m)).into_owned());
    let n_d = int.view((0, n), (n, m)).into_owned();

    Ok(Discretization {
        a_d,
        b_d,
        q_d,
        r_d,
        n_d,
        w_d: noise_integral(&sys.a, &sys.w, delta),
        v_d: &sys.v / delta,
    })
}

/// Sampled-data system with period `delta`; metric weights stay `Q₀, R₀`.
pub fn discretize(sys: &CtLqgSystem, delta: f64) -> Result<DtLqgSystem, LqgError> {
    let d = discretize_matrices(sys, delta)?;
    let mut out = DtLqgSystem::new(d.a_d, d.b_d, sys.c.clone(), d.w_d, d.v_d, d.q_d, d.r_d)?
        .with_metric_weights(sys.q0.clone(), sys.r0.clone())?;
    out.delta = Some(delta);
    Ok(out)
}
