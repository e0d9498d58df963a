use std::cmp::Ordering;
use std::fmt;

use nalgebra::{Complex, DMatrix};

use super::OrderError;

/// Relative factor of the Loewner comparison tolerance.
pub const PSD_REL_TOL: f64 = 1e-9;

/// A Hermitian matrix with its comparison tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianPoint {
    entries: DMatrix<Complex<f64>>,
    eps: f64,
}

impl HermitianPoint {
    /// Validates hermiticity and attaches the default tolerance
    /// `1e-9 * (1 + max |entry|)`.
    pub fn new(entries: DMatrix<Complex<f64>>) -> Result<Self, OrderError> {
        if !entries.is_square() {
            return Err(OrderError::NotInCarrier {
                component: "matrix".into(),
                reason: format!("{}x{} matrix is not square", entries.nrows(), entries.ncols()),
            });
        }
        let eps = default_eps(&entries);
        let n = entries.nrows();
        for i in 0..n {
            for j in i..n {
                let d = (entries[(i, j)] - entries[(j, i)].conj()).norm();
                if d > eps {
                    return Err(OrderError::NotInCarrier {
                        component: format!("entry ({i},{j})"),
                        reason: format!("matrix is not Hermitian (asymmetry {d:e})"),
                    });
                }
            }
        }
        let herm = (&entries + entries.adjoint()) * Complex::new(0.5, 0.0);
        Ok(Self { entries: herm, eps })
    }

    /// Real symmetric input.
    pub fn from_real(m: &DMatrix<f64>) -> Result<Self, OrderError> {
        Self::new(m.map(|x| Complex::new(x, 0.0)))
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps.max(0.0);
        self
    }

    pub fn order(&self) -> usize {
        self.entries.nrows()
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn entries(&self) -> &DMatrix<Complex<f64>> {
        &self.entries
    }

    /// Real part, for matrices known to be real.
    pub fn real(&self) -> DMatrix<f64> {
        self.entries.map(|z| z.re)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.entries.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// `self ≼ other`: the smallest eigenvalue of `other - self` is at least `-eps`.
    pub fn loewner_leq(&self, other: &HermitianPoint) -> bool {
        let diff = &other.entries - &self.entries;
        let eps = self.eps.max(other.eps);
        let min = diff
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        min >= -eps
    }

    pub(crate) fn canonical_cmp(&self, other: &HermitianPoint) -> Ordering {
        let n = self.order().cmp(&other.order());
        if n != Ordering::Equal {
            return n;
        }
        for (a, b) in self.entries.iter().zip(other.entries.iter()) {
            let c = a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im));
            if c != Ordering::Equal {
                return c;
            }
        }
        Ordering::Equal
    }
}

fn default_eps(m: &DMatrix<Complex<f64>>) -> f64 {
    let max = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    PSD_REL_TOL * (1.0 + max)
}

impl fmt::Display for HermitianPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.order() {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.order() {
                if j > 0 {
                    write!(f, " ")?;
                }
                let z = self.entries[(i, j)];
                if z.im == 0.0 {
                    write!(f, "{}", z.re)?;
                } else {
                    write!(f, "{}{:+}i", z.re, z.im)?;
                }
            }
        }
        write!(f, "]")
    }
}
