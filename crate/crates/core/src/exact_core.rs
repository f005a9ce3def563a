//! Exact scalar arithmetic: gcd and Bezout utilities, binomials, 2-adic
//! valuations, unimodular row completion and the field Q(√2).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::intlinalg::IntMatrix;
use crate::Error;

/// Binomial coefficient C(n, k), zero outside 0 ≤ k ≤ n.
pub fn binom(n: i64, k: i64) -> BigInt {
    assert!(n >= 0, "binom: negative n");
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// 2^e as an exact rational; `e` may be negative.
pub fn pow2(e: i64) -> BigRational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// 2^e as an integer; panics on negative exponents.
pub fn pow2_int(e: i64) -> BigInt {
    assert!(e >= 0, "pow2_int: negative exponent {e}");
    BigInt::one() << (e as u64)
}

/// Nonnegative gcd of a nonempty list that is not entirely zero.
pub fn gcd_list(xs: &[BigInt]) -> Result<BigInt, Error> {
    if xs.iter().all(Zero::is_zero) {
        return Err(Error::UndefinedGcd);
    }
    Ok(xs.iter().fold(BigInt::zero(), |g, x| g.gcd(x)))
}

/// Extended Euclid: returns (g, x, y) with a·x + b·y = g ≥ 0.
pub fn bezout(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let ext = a.extended_gcd(b);
    let (mut g, mut x, mut y) = (ext.gcd, ext.x, ext.y);
    if g.is_negative() {
        g = -g;
        x = -x;
        y = -y;
    }
    (g, x, y)
}

/// Bezout coefficients for a list. The returned coefficient vector is
/// primitive whenever the list has at least two nonzero entries.
pub fn bezout_coeffs(xs: &[BigInt]) -> Result<(BigInt, Vec<BigInt>), Error> {
    let g = gcd_list(xs)?;
    let k = xs.len();
    let mut coeffs = vec![BigInt::zero(); k];
    // fold right to left: acc = gcd(xs[i..]) = Σ coeffs[j]·xs[j]
    let mut acc = BigInt::zero();
    for i in (0..k).rev() {
        let (h, x, y) = bezout(&xs[i], &acc);
        for c in coeffs.iter_mut().skip(i + 1) {
            *c *= &y;
        }
        coeffs[i] = x;
        acc = h;
    }
    debug_assert_eq!(acc, g);

    // Σ (xs/g)·coeffs = 1, so the coefficient vector is primitive.
    Ok((g, coeffs))
}

/// Completes a primitive row to a unimodular matrix having it as first row.
pub fn unimodular_completion(row: &[BigInt]) -> Result<IntMatrix, Error> {
    if row.is_empty() {
        return Err(Error::NotPrimitive);
    }
    if !gcd_list(row).map(|g| g.is_one()).unwrap_or(false) {
        return Err(Error::NotPrimitive);
    }
    Ok(complete(row))
}

fn complete(row: &[BigInt]) -> IntMatrix {
    let k = row.len();
    if k == 1 {
        return IntMatrix::from_rows(vec![row.to_vec()]);
    }
    let tail = &row[1..];
    let d = tail.iter().fold(BigInt::zero(), |a, x| a.gcd(x));
    let mut m = IntMatrix::zeros(k, k);
    if d.is_zero() {
        // row = (±1, 0, …, 0)
        m[(0, 0)] = row[0].clone();
        for i in 1..k {
            m[(i, i)] = BigInt::one();
        }
        return m;
    }
    let (_, x, y) = bezout(&row[0], &d);
    let reduced: Vec<BigInt> = tail.iter().map(|t| t / &d).collect();
    let inner = complete(&reduced);
    m[(0, 0)] = row[0].clone();
    m[(1, 0)] = -y;
    for j in 1..k {
        m[(0, j)] = row[j].clone();
        m[(1, j)] = &x * &reduced[j - 1];
    }
    for i in 2..k {
        for j in 1..k {
            m[(i, j)] = inner[(i - 1, j - 1)].clone();
        }
    }
    m
}

/// Splits x = 2^v · odd.
pub fn two_adic_split(x: &BigInt) -> Result<(u64, BigInt), Error> {
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let v = x.trailing_zeros().unwrap_or(0);
    Ok((v, x >> v))
}

/// An element a + b√2 of Q(√2).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSqrt2 {
    pub a: BigRational,
    pub b: BigRational,
}

impl QSqrt2 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QSqrt2 { a, b }
    }

    pub fn from_int(n: i64) -> Self {
        QSqrt2::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    pub fn from_rational(a: BigRational) -> Self {
        QSqrt2::new(a, BigRational::zero())
    }

    pub fn zero() -> Self {
        QSqrt2::from_int(0)
    }

    pub fn one() -> Self {
        QSqrt2::from_int(1)
    }

    /// 1/√2 = √2/2.
    pub fn inv_sqrt2() -> Self {
        QSqrt2::new(
            BigRational::zero(),
            BigRational::new(BigInt::one(), BigInt::from(2)),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        QSqrt2::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm a² − 2b².
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(2.into()) * &self.b * &self.b
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        Some(QSqrt2::new(c.a / &n, c.b / n))
    }

    pub fn rational(num: i64, den: i64) -> Self {
        QSqrt2::from_rational(BigRational::new(num.into(), den.into()))
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        QSqrt2::new(&self.a * r, &self.b * r)
    }
}

impl fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}√2", self.b),
            (false, false) => write!(f, "{} + {}√2", self.a, self.b),
        }
    }
}

impl<'a> Add<&'a QSqrt2> for &'a QSqrt2 {
    type Output = QSqrt2;
    fn add(self, o: &QSqrt2) -> QSqrt2 {
        QSqrt2::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl<'a> Sub<&'a QSqrt2> for &'a QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, o: &QSqrt2) -> QSqrt2 {
        QSqrt2::new(&self.a - &o.a, &self.b - &o.b)
    }
}

impl<'a> Mul<&'a QSqrt2> for &'a QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, o: &QSqrt2) -> QSqrt2 {
        let two = BigRational::from_integer(2.into());
        QSqrt2::new(
            &self.a * &o.a + two * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
        )
    }
}

impl Neg for QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2::new(-self.a, -self.b)
    }
}

impl Neg for &QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2::new(-self.a.clone(), -self.b.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn binom_small_values() {
        assert_eq!(binom(4, 2), 6.into());
        assert_eq!(binom(7, 0), 1.into());
        assert_eq!(binom(4, 2), binom(2 + 2, 2));
        assert_eq!(binom(3, 5), 0.into());
        assert_eq!(binom(3, -1), 0.into());
    }

    #[test]
    fn binom_pascal() {
        for n in 1..=64 {
            for k in 0..=n {
                assert_eq!(binom(n, k), binom(n - 1, k - 1) + binom(n - 1, k));
            }
        }
    }

    fn brute_gcd(xs: &[i64]) -> i64 {
        let top = xs.iter().map(|x| x.abs()).max().unwrap();
        (1..=top)
            .rev()
            .find(|d| xs.iter().all(|x| x % d == 0))
            .unwrap()
    }

    #[test]
    fn gcd_list_examples() {
        assert_eq!(
            gcd_list(&bi(&[128, 640, 3072])).unwrap(),
            brute_gcd(&[128, 640, 3072]).into()
        );
        assert_eq!(gcd_list(&bi(&[1])).unwrap(), 1.into());
        assert_eq!(gcd_list(&bi(&[0, 6, 9])).unwrap(), 3.into());
        assert!(gcd_list(&bi(&[0, 0])).is_err());
        assert!(gcd_list(&[]).is_err());
    }

    #[test]
    fn bezout_examples() {
        for xs in [vec![6, 10], vec![5], vec![128, 640, 3072], vec![0, 4, 6]] {
            let v = bi(&xs);
            let (g, c) = bezout_coeffs(&v).unwrap();
            assert_eq!(g, gcd_list(&v).unwrap());
            let s: BigInt = c.iter().zip(&v).map(|(a, b)| a * b).sum();
            assert_eq!(s, g);
        }
        let (_, c) = bezout_coeffs(&bi(&[128, 640, 3072])).unwrap();
        assert!(gcd_list(&c).unwrap().is_one());
    }

    #[test]
    fn completion_examples() {
        let id = unimodular_completion(&bi(&[1, 0, 0])).unwrap();
        assert_eq!(id, IntMatrix::identity(3));
        for row in [
            vec![2, 3],
            vec![6, 10, 15],
            vec![0, 0, 1],
            vec![-1],
            vec![0, 5, 0, 7],
        ] {
            let r = bi(&row);
            let m = unimodular_completion(&r).unwrap();
            assert_eq!(m.row(0), r.as_slice());
            assert_eq!(m.det().abs(), BigInt::one());
        }
        assert!(unimodular_completion(&bi(&[2, 4])).is_err());
    }

    #[test]
    fn two_adic_examples() {
        assert_eq!(two_adic_split(&128.into()).unwrap(), (7, 1.into()));
        assert_eq!(two_adic_split(&640.into()).unwrap(), (7, 5.into()));
        assert_eq!(two_adic_split(&3.into()).unwrap(), (0, 3.into()));
        assert_eq!(two_adic_split(&(-12).into()).unwrap(), (2, (-3).into()));
        assert!(two_adic_split(&0.into()).is_err());
    }

    #[test]
    fn qsqrt2_inverse() {
        let x = &QSqrt2::from_int(3) + &QSqrt2::inv_sqrt2();
        let y = x.inverse().unwrap();
        assert_eq!(&x * &y, QSqrt2::one());
        let r2 = &QSqrt2::inv_sqrt2() * &QSqrt2::inv_sqrt2();
        assert_eq!(
            r2,
            QSqrt2::from_rational(BigRational::new(1.into(), 2.into()))
        );
        assert!(QSqrt2::zero().inverse().is_none());
    }

    #[test]
    fn pow2_signs() {
        assert_eq!(pow2(3), BigRational::from_integer(8.into()));
        assert_eq!(pow2(-2), BigRational::new(1.into(), 4.into()));
    }
}
