//! Univariate polynomials, characteristic polynomials and exact real-root
//! counting by Sturm sequences.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Matrix, Scalar};

/// Coefficients in increasing degree; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(Scalar::zero(), |acc, c| acc * x + c)
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_real)
    }

    fn to_rational(&self) -> Option<Vec<BigRational>> {
        self.is_real().then(|| self.coeffs.iter().map(|c| c.re()).collect())
    }
}

impl std::fmt::Display for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})t")?,
                _ => write!(f, "({c})t^{k}")?,
            }
        }
        Ok(())
    }
}

/// `det(t·I − a)` by the Faddeev–LeVerrier recursion.
pub fn characteristic_polynomial(a: &Matrix) -> Poly {
    assert!(a.is_square());
    let n = a.rows();
    let mut coeffs = vec![Scalar::zero(); n + 1];
    coeffs[n] = Scalar::one();
    let mut m = Matrix::zeros(n, n);
    for k in 1..=n {
        let shifted = m.add(&Matrix::identity(n).scale(&coeffs[n - k + 1]));
        m = a.mul(&shifted);
        coeffs[n - k] = -(m.trace() / Scalar::from_int(k as i64));
    }
    Poly::new(coeffs)
}

// --- rational polynomial arithmetic for Sturm sequences ---

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn derivative(p: &[BigRational]) -> Vec<BigRational> {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer((i as i64).into()))
            .collect(),
    )
}

fn rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = trim(a.to_vec());
    let lead = b.last().expect("nonzero divisor");
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let factor = r.last().unwrap() / lead;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &factor * c;
        }
        r.pop();
        r = trim(r);
    }
    r
}

fn quo(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = trim(a.to_vec());
    let lead = b.last().expect("nonzero divisor");
    let mut q = vec![BigRational::zero(); r.len().saturating_sub(b.len()) + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let factor = r.last().unwrap() / lead;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &factor * c;
        }
        q[shift] = factor;
        r.pop();
        r = trim(r);
    }
    trim(q)
}

fn gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn sturm_sequence(p: &[BigRational]) -> Vec<Vec<BigRational>> {
    let mut seq = vec![trim(p.to_vec()), derivative(p)];
    while !seq.last().unwrap().is_empty() {
        let n = seq.len();
        let r: Vec<BigRational> = rem(&seq[n - 2], &seq[n - 1]).into_iter().map(|c| -c).collect();
        if r.is_empty() {
            break;
        }
        seq.push(r);
    }
    seq.retain(|q| !q.is_empty());
    seq
}

fn sign_changes(values: impl Iterator<Item = BigRational>) -> usize {
    let signs: Vec<bool> = values.filter(|v| !v.is_zero()).map(|v| v.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

fn eval_rat(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// Summary of where the roots of a real polynomial lie.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootCount {
    /// Number of distinct complex roots.
    pub distinct: usize,
    /// Number of distinct real roots that are strictly positive.
    pub distinct_positive: usize,
    /// Whether zero is a root.
    pub zero_is_root: bool,
}

impl RootCount {
    pub fn all_roots_positive_real(&self) -> bool {
        !self.zero_is_root && self.distinct == self.distinct_positive
    }
}

/// Exact root-location count via the Sturm sequence of the square-free part.
/// Returns `None` if the polynomial has non-real coefficients or is zero.
pub fn count_roots(p: &Poly) -> Option<RootCount> {
    let rat = p.to_rational()?;
    if rat.is_empty() {
        return None;
    }
    let g = gcd(&rat, &derivative(&rat));
    let square_free = if g.len() <= 1 { rat.clone() } else { quo(&rat, &g) };
    let distinct = square_free.len() - 1;
    let zero_is_root = rat[0].is_zero();
    let seq = sturm_sequence(&square_free);
    let at_zero = sign_changes(seq.iter().map(|q| eval_rat(q, &BigRational::zero())));
    // sign at +∞ is the sign of the leading coefficient
    let at_inf = sign_changes(seq.iter().map(|q| q.last().unwrap().clone()));
    Some(RootCount { distinct, distinct_positive: at_zero - at_inf, zero_is_root })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cs: &[i64]) -> Poly {
        Poly::new(cs.iter().map(|&c| Scalar::from_int(c)).collect())
    }

    #[test]
    fn char_poly_of_small_matrices() {
        let a = Matrix::from_ints(&[&[2, 1], &[0, 3]]);
        assert_eq!(characteristic_polynomial(&a), poly(&[6, -5, 1]));
        let z = Matrix::zeros(3, 3);
        assert_eq!(characteristic_polynomial(&z), poly(&[0, 0, 0, 1]));
    }

    #[test]
    fn root_counting() {
        // (t-1)^2 (t-3)
        let p = poly(&[-3, 7, -5, 1]);
        let rc = count_roots(&p).unwrap();
        assert_eq!(rc.distinct, 2);
        assert!(rc.all_roots_positive_real());
        // (t+1)(t-2)
        let rc = count_roots(&poly(&[-2, -1, 1])).unwrap();
        assert_eq!(rc.distinct_positive, 1);
        assert!(!rc.all_roots_positive_real());
        // t^2 + 1 has no real roots
        let rc = count_roots(&poly(&[1, 0, 1])).unwrap();
        assert_eq!((rc.distinct, rc.distinct_positive), (2, 0));
        // t(t-1)
        assert!(!count_roots(&poly(&[0, -1, 1])).unwrap().all_roots_positive_real());
    }
}
