//! Checking user-supplied matrices against the i-operator conditions.

use iopsim_core::linalg::{self, CMatrix};
use iopsim_core::InfoOperator;
use serde_json::{json, Value as Json};

use crate::json::number;

/// Residuals of one matrix against Hermiticity, unit trace and positivity.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub dim: usize,
    /// `‖A − A†‖_F`.
    pub hermiticity: f64,
    /// `|tr A − 1|` (real part; the imaginary part shows up in `hermiticity`).
    pub trace: f64,
    /// Smallest eigenvalue of the Hermitian part.
    pub min_eigenvalue: f64,
    /// `None` when valid, else the error variant name and its message.
    pub error: Option<(String, String)>,
}

impl Verdict {
    pub fn valid(&self) -> bool {
        self.error.is_none()
    }

    pub fn to_json(&self, index: usize) -> Json {
        json!({
            "index": index,
            "dim": self.dim,
            "valid": self.valid(),
            "hermiticity_residual": number(self.hermiticity),
            "trace_residual": number(self.trace),
            "min_eigenvalue": number(self.min_eigenvalue),
            "error": self.error.as_ref().map(|(kind, _)| kind),
            "message": self.error.as_ref().map(|(_, msg)| msg),
        })
    }
}

fn variant_name(e: &iopsim_core::Error) -> String {
    let debug = format!("{e:?}");
    debug
        .split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or_default()
        .to_string()
}

pub fn check(m: &CMatrix) -> Verdict {
    let hermiticity = linalg::frobenius_dist(m, &m.adjoint()).unwrap_or(f64::INFINITY);
    let trace = (m.trace().re - 1.0).abs();
    let min_eigenvalue = linalg::herm_eig(&m.hermitian_part())
        .map(|e| e.values.first().copied().unwrap_or(f64::NAN))
        .unwrap_or(f64::NAN);
    Verdict {
        dim: m.rows(),
        hermiticity,
        trace,
        min_eigenvalue,
        error: InfoOperator::validate(m).err().map(|e| (variant_name(&e), e.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_identity_is_valid() {
        let v = check(&CMatrix::from_real_diag(&[0.5, 0.5]));
        assert!(v.valid());
        assert_eq!(v.trace, 0.0);
        assert!((v.min_eigenvalue - 0.5).abs() < 1e-15);
    }

    #[test]
    fn short_trace_reports_residual() {
        let v = check(&CMatrix::from_real_diag(&[0.5, 0.4]));
        assert!(!v.valid());
        assert!((v.trace - 0.1).abs() < 1e-12);
        assert_eq!(v.error.unwrap().0, "TraceNotOne");
    }

    #[test]
    fn negative_eigenvalue() {
        let v = check(&CMatrix::from_real_diag(&[1.1, -0.1]));
        assert!(!v.valid());
        assert!((v.min_eigenvalue + 0.1).abs() < 1e-12);
        assert_eq!(v.error.unwrap().0, "NotPositive");
    }
}
