//! Continuous and sampled-data LQG: Riccati and Lyapunov solvers,
//! tracking/effort metrics, delays and intermittent observations.

mod discretize;
mod linalg;
mod perf;
mod riccati;

pub use discretize::{discretize, discretize_matrices, noise_integral, Discretization};
pub use linalg::{
    detectable, detectable_dt, eigenvalues, is_hurwitz, min_eig, solve_lyap_ct, solve_stein, spectral_radius,
    stabilizable, stabilizable_dt,
};
pub use perf::{
    ct_performance, ct_performance_with_sigma, delayed_performance, dt_performance, intermittent_performance,
    sampled_performance_family, scalar_closed_form, Intermittent, Metrics, SampledPoint, MARE_MAX_ITER,
    MARE_NORM_BOUND,
};
pub use riccati::{care_residual, dare_residual, solve_care, solve_dare};

use nalgebra::DMatrix;
use thiserror::Error;

use linalg::{check_pd, check_psd, check_square};

/// Relative residual accepted for Riccati solutions.
pub const TOL_RICCATI: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LqgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("{0} is not symmetric")]
    NotSymmetric(&'static str),
    #[error("{0} is not positive semidefinite")]
    NotPsd(&'static str),
    #[error("{0} is not positive definite")]
    NotPd(&'static str),
    #[error("{0} is singular")]
    Singular(&'static str),
    #[error("(A, B) is not stabilizable")]
    NotStabilizable,
    #[error("(A, C) is not detectable")]
    NotDetectable,
    #[error("matrix is not Hurwitz")]
    NotHurwitz,
    #[error("matrix is not Schur stable")]
    NotSchurStable,
    #[error("Riccati solution is not stabilizing")]
    NotStabilizing,
    #[error("{what} did not converge (relative residual {residual:e})")]
    NoConvergence { what: &'static str, residual: f64 },
    #[error("sampling period must be positive and finite, got {0}")]
    BadPeriod(f64),
    #[error("drop probability must lie in [0, 1], got {0}")]
    BadProbability(f64),
    #[error("invalid parameter: {0}")]
    BadParameter(String),
}

/// `dx = (Ax + Bu)dt + dw`, `dy = Cx dt + dv`, with noise intensities `W`, `V`
/// and cost `∫ xᵀ(αQ₀)x + uᵀ(R₀/α)u dt`.
#[derive(Clone, Debug, PartialEq)]
pub struct CtLqgSystem {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub w: DMatrix<f64>,
    pub v: DMatrix<f64>,
    pub q0: DMatrix<f64>,
    pub r0: DMatrix<f64>,
    pub alpha: f64,
}

fn check_io(a: &DMatrix<f64>, b: &DMatrix<f64>, c: &DMatrix<f64>) -> Result<(), LqgError> {
    let n = a.nrows();
    check_square("A", a, n)?;
    if b.nrows() != n {
        return Err(LqgError::Dimension(format!("B has {} rows, expected {n}", b.nrows())));
    }
    if c.ncols() != n {
        return Err(LqgError::Dimension(format!(
            "C has {} columns, expected {n}",
            c.ncols()
        )));
    }
    Ok(())
}

impl CtLqgSystem {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        a: DMatrix<f64>,
        b: DMatrix<f64>,
        c: DMatrix<f64>,
        w: DMatrix<f64>,
        v: DMatrix<f64>,
        q0: DMatrix<f64>,
        r0: DMatrix<f64>,
        alpha: f64,
    ) -> Result<Self, LqgError> {
        let s = Self {
            a,
            b,
            c,
            w,
            v,
            q0,
            r0,
            alpha,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), LqgError> {
        check_io(&self.a, &self.b, &self.c)?;
        let n = self.n();
        check_square("W", &self.w, n)?;
        check_square("V", &self.v, self.c.nrows())?;
        check_square("Q0", &self.q0, n)?;
        check_square("R0", &self.r0, self.b.ncols())?;
        check_psd("W", &self.w)?;
        check_pd("V", &self.v)?;
        check_psd("Q0", &self.q0)?;
        check_pd("R0", &self.r0)?;
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(LqgError::BadParameter(format!(
                "alpha must be positive, got {}",
                self.alpha
            )));
        }
        if !stabilizable(&self.a, &self.b) {
            return Err(LqgError::NotStabilizable);
        }
        if !detectable(&self.a, &self.c) {
            return Err(LqgError::NotDetectable);
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn q(&self) -> DMatrix<f64> {
        &self.q0 * self.alpha
    }

    pub fn r(&self) -> DMatrix<f64> {
        &self.r0 / self.alpha
    }

    pub fn with_alpha(&self, alpha: f64) -> Self {
        Self { alpha, ..self.clone() }
    }

    pub fn with_noise(&self, w: DMatrix<f64>, v: DMatrix<f64>) -> Self {
        Self { w, v, ..self.clone() }
    }
}

#[derive(Clone, Debug)]
pub struct CtLqgSolution {
    /// Control Riccati solution.
    pub s: DMatrix<f64>,
    /// Filter Riccati solution (estimation error covariance).
    pub sigma: DMatrix<f64>,
    pub k: DMatrix<f64>,
    pub l: DMatrix<f64>,
    /// Stationary covariance of the state estimate.
    pub f: DMatrix<f64>,
    pub p_track: f64,
    pub p_effort: f64,
    /// `Tr(SΣCᵀV⁻¹CΣ + ΣQ)`.
    pub j_star: f64,
    /// `Tr(ΣSBR⁻¹BᵀS + SW)`.
    pub j_star_alt: f64,
}

/// `x⁺ = Ax + Bu + w`, `y = Cx + v`, design weights `Q, R` and metric
/// weights `Q₀, R₀` (equal to the design weights unless set).
#[derive(Clone, Debug, PartialEq)]
pub struct DtLqgSystem {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub w: DMatrix<f64>,
    pub v: DMatrix<f64>,
    pub q: DMatrix<f64>,
    pub r: DMatrix<f64>,
    pub q0: DMatrix<f64>,
    pub r0: DMatrix<f64>,
    pub delta: Option<f64>,
}

impl DtLqgSystem {
    pub fn new(
        a: DMatrix<f64>,
        b: DMatrix<f64>,
        c: DMatrix<f64>,
        w: DMatrix<f64>,
        v: DMatrix<f64>,
        q: DMatrix<f64>,
        r: DMatrix<f64>,
    ) -> Result<Self, LqgError> {
        let s = Self {
            q0: q.clone(),
            r0: r.clone(),
            a,
            b,
            c,
            w,
            v,
            q,
            r,
            delta: None,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_metric_weights(mut self, q0: DMatrix<f64>, r0: DMatrix<f64>) -> Result<Self, LqgError> {
        check_square("Q0", &q0, self.a.nrows())?;
        check_square("R0", &r0, self.b.ncols())?;
        check_psd("Q0", &q0)?;
        check_psd("R0", &r0)?;
        self.q0 = q0;
        self.r0 = r0;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), LqgError> {
        check_io(&self.a, &self.b, &self.c)?;
        let n = self.a.nrows();
        check_square("W", &self.w, n)?;
        check_square("V", &self.v, self.c.nrows())?;
        check_square("Q", &self.q, n)?;
        check_square("R", &self.r, self.b.ncols())?;
        check_psd("W", &self.w)?;
        check_pd("V", &self.v)?;
        check_psd("Q", &self.q)?;
        check_pd("R", &self.r)?;
        if !stabilizable_dt(&self.a, &self.b) {
            return Err(LqgError::NotStabilizable);
        }
        if !detectable_dt(&self.a, &self.c) {
            return Err(LqgError::NotDetectable);
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct DtLqgSolution {
    pub p: DMatrix<f64>,
    /// One-step prediction error covariance.
    pub gamma: DMatrix<f64>,
    /// Filtered error covariance after the measurement update.
    pub gamma_post: DMatrix<f64>,
    pub k: DMatrix<f64>,
    pub l: DMatrix<f64>,
    pub f: DMatrix<f64>,
    pub p_track: f64,
    pub p_effort: f64,
    /// `Tr(P·L S Lᵀ + QΓ⁺)` with `S = CΓCᵀ + V`.
    pub j_star: f64,
    /// `Tr(PW + Γ⁺Kᵀ(R + BᵀPB)K)`.
    pub j_star_alt: f64,
}

/// Scalar plant for the closed-form metrics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalarLqg {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub q0: f64,
    pub r0: f64,
    pub v: f64,
    pub w: f64,
    pub alpha: f64,
}

impl ScalarLqg {
    pub fn validate(&self) -> Result<(), LqgError> {
        let ok = self.v > 0.0
            && self.w >= 0.0
            && self.b != 0.0
            && self.c != 0.0
            && self.q0 >= 0.0
            && self.r0 > 0.0
            && self.alpha > 0.0
            && [self.a, self.b, self.c, self.q0, self.r0, self.v, self.w, self.alpha]
                .iter()
                .all(|x| x.is_finite());
        if ok {
            Ok(())
        } else {
            Err(LqgError::BadParameter(format!("invalid scalar system {self:?}")))
        }
    }

    /// Positive root of `2aσ + w − σ²c²/v = 0`.
    pub fn sigma_bar(&self) -> f64 {
        let (a, c2, v, w) = (self.a, self.c * self.c, self.v, self.w);
        let x = c2 * w / v;
        let root = (a * a + x).sqrt();
        // a + √(a² + x), cancellation-free for a < 0
        let s = if a >= 0.0 { a + root } else { x / (root - a) };
        v * s / c2
    }

    pub fn to_system(&self) -> CtLqgSystem {
        let m = |x: f64| DMatrix::from_element(1, 1, x);
        CtLqgSystem {
            a: m(self.a),
            b: m(self.b),
            c: m(self.c),
            w: m(self.w),
            v: m(self.v),
            q0: m(self.q0),
            r0: m(self.r0),
            alpha: self.alpha,
        }
    }
}

/// Observation and computation delays in seconds.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DelaySpec {
    pub d_obs: f64,
    pub d_comp: f64,
}

impl DelaySpec {
    pub fn total(&self) -> f64 {
        self.d_obs + self.d_comp
    }
}
