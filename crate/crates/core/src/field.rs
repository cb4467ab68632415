//! Exact scalar fields.
//!
//! A [`Field`] is a small context value (the modulus for `F_p`, nothing for
//! `Q`) that performs arithmetic on its canonical element type. Every element
//! has exactly one representation, so `==` on elements is field equality.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Descriptor of a supported field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Prime(u64),
    Rational,
}

impl Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "fp:{p}"),
            FieldSpec::Rational => f.write_str("rational"),
        }
    }
}

/// Arithmetic over a field `K` with canonical elements.
pub trait Field: Clone + Debug + PartialEq + Eq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync;

    fn spec(&self) -> FieldSpec;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;

    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::Elem;

    /// Parses the text encoding used in module files.
    fn parse(&self, text: &str) -> Result<Self::Elem>;

    /// Canonical text encoding, inverse of [`Field::parse`].
    fn render(&self, a: &Self::Elem) -> String;

    /// A random element drawn from a small window of the field, biased so
    /// that zero shows up often enough to exercise degenerate cases.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    /// A random nonzero element.
    fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        loop {
            let v = self.sample(rng);
            if !self.is_zero(&v) {
                return v;
            }
        }
    }
}

/// The prime field `F_p` with residues stored as `0 <= v < p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(PrimeField { p })
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce(&self, v: u128) -> u64 {
        (v % self.p as u128) as u64
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        self.reduce(*a as u128 + *b as u128)
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        self.reduce(*a as u128 + (self.p - *b) as u128)
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.reduce(*a as u128 * *b as u128)
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - *a
        }
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(t0.rem_euclid(self.p as i128) as u64)
    }

    fn from_i64(&self, v: i64) -> u64 {
        (v as i128).rem_euclid(self.p as i128) as u64
    }

    fn parse(&self, text: &str) -> Result<u64> {
        let bad = |reason: &str| Error::InvalidScalar {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad("expected a decimal residue"));
        }
        let v: u64 = text.parse().map_err(|_| bad("residue out of range"))?;
        if v >= self.p {
            return Err(bad(&format!("residue must be below {}", self.p)));
        }
        Ok(v)
    }

    fn render(&self, a: &u64) -> String {
        a.to_string()
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        if rng.gen_ratio(1, 4) {
            0
        } else {
            rng.gen_range(0..self.p)
        }
    }
}

/// The rational numbers, backed by arbitrary-precision fractions that are
/// kept in lowest terms with a positive denominator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rational
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn parse(&self, text: &str) -> Result<BigRational> {
        let bad = |reason: &str| Error::InvalidScalar {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let int = |s: &str| -> Result<BigInt> {
            let digits = s.strip_prefix('-').unwrap_or(s);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad("expected an integer or num/den"));
            }
            s.parse::<BigInt>().map_err(|_| bad("malformed integer"))
        };
        match text.split_once('/') {
            None => Ok(BigRational::from_integer(int(text)?)),
            Some((num, den)) => {
                let num = int(num)?;
                let den = int(den)?;
                if den.is_zero() {
                    return Err(bad("zero denominator"));
                }
                Ok(BigRational::new(num, den))
            }
        }
    }

    fn render(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        if rng.gen_ratio(1, 4) {
            return BigRational::zero();
        }
        let num: i64 = rng.gen_range(-4..=4);
        let den: i64 = rng.gen_range(1..=3);
        let v = BigRational::new(num.into(), den.into());
        debug_assert!(!v.denom().is_negative());
        v
    }
}

/// Deterministic Miller-Rabin; the fixed witness set is exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for &a in &WITNESSES {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2
            && (2..)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 0..5000 {
            assert_eq!(is_prime(n), trial_division(n), "n = {n}");
        }
        assert!(is_prime(1_000_000_007));
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn rejects_composite_modulus() {
        assert_eq!(PrimeField::new(4), Err(Error::NotPrime(4)));
        assert_eq!(PrimeField::new(1), Err(Error::NotPrime(1)));
    }

    #[test]
    fn prime_field_inverse_by_brute_force() {
        for p in [2u64, 3, 5, 7, 97] {
            let f = PrimeField::new(p).unwrap();
            for a in 1..p {
                let brute = (1..p).find(|b| a * b % p == 1).unwrap();
                assert_eq!(f.inv(&a), Some(brute));
            }
            assert_eq!(f.inv(&0), None);
        }
    }

    #[test]
    fn prime_field_parse() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.parse("4"), Ok(4));
        assert!(f.parse("5").is_err());
        assert!(f.parse("-1").is_err());
        assert!(f.parse("").is_err());
        assert!(f.parse("1/2").is_err());
        assert_eq!(f.from_i64(-1), 4);
    }

    #[test]
    fn rational_parse_and_render() {
        let q = Rationals;
        let half = q.parse("2/4").unwrap();
        assert_eq!(q.render(&half), "1/2");
        assert_eq!(q.render(&q.parse("3/-6").unwrap()), "-1/2");
        assert_eq!(q.render(&q.parse("-7").unwrap()), "-7");
        assert_eq!(q.render(&q.parse("0/5").unwrap()), "0");
        assert!(q.parse("1/0").is_err());
        assert!(q.parse("1.5").is_err());
        assert!(q.parse("/3").is_err());
        assert!(q.parse("+3").is_err());
    }
}
