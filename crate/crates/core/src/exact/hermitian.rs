//! Exact positivity of hermitian forms.

use serde::Serialize;

use super::{Matrix, Scalar};
use crate::error::{HodgeError, Result};

/// Outcome of Sylvester's criterion. `failing_minor` is the 1-based size of
/// the first leading principal minor that is not a positive rational.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Positivity {
    pub positive: bool,
    pub failing_minor: Option<(usize, Scalar)>,
}

/// Sylvester's criterion. Leading principal minors of a hermitian matrix over
/// ℚ(i) are rational, so the test is exact.
pub fn sylvester(g: &Matrix) -> Result<Positivity> {
    if !g.is_hermitian() {
        return Err(HodgeError::NotHermitian);
    }
    for k in 1..=g.rows() {
        let minor = g.leading_principal_minor(k);
        debug_assert!(minor.is_real());
        if !minor.is_positive_real() {
            return Ok(Positivity { positive: false, failing_minor: Some((k, minor)) });
        }
    }
    Ok(Positivity { positive: true, failing_minor: None })
}

pub fn is_positive_definite_hermitian(g: &Matrix) -> Result<bool> {
    Ok(sylvester(g)?.positive)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_positive() {
        assert!(is_positive_definite_hermitian(&Matrix::identity(3)).unwrap());
        assert!(is_positive_definite_hermitian(&Matrix::zeros(0, 0)).unwrap());
    }

    #[test]
    fn degenerate_form_is_not_positive() {
        let g = Matrix::from_rows(vec![
            vec![Scalar::from_int(1), Scalar::i()],
            vec![-Scalar::i(), Scalar::from_int(1)],
        ]);
        let p = sylvester(&g).unwrap();
        assert!(!p.positive);
        assert_eq!(p.failing_minor, Some((2, Scalar::from_int(0))));
    }

    #[test]
    fn non_hermitian_input_is_an_error() {
        let g = Matrix::from_ints(&[&[1, 2], &[0, 1]]);
        assert_eq!(sylvester(&g), Err(HodgeError::NotHermitian));
        let g = Matrix::from_rows(vec![vec![Scalar::i()]]);
        assert_eq!(sylvester(&g), Err(HodgeError::NotHermitian));
    }
}
