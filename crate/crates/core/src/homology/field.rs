//! Exact coefficient fields: the rationals and prime fields.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unrecognized field spec {0:?} (expected q or f<p>)")]
    BadSpec(String),
}

/// Coefficient field `K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum ExactField {
    Rationals,
    PrimeField(u64),
}

impl ExactField {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if is_prime(p) && p < (1 << 62) {
            Ok(ExactField::PrimeField(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            ExactField::Rationals => 0,
            ExactField::PrimeField(p) => *p,
        }
    }

    /// Image of an integer in the field, as the canonical integer
    /// representative (reduced into `[0, p)` for prime fields).
    pub fn reduce(&self, v: i64) -> i64 {
        match self {
            ExactField::Rationals => v,
            ExactField::PrimeField(p) => v.rem_euclid(*p as i64),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl fmt::Display for ExactField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactField::Rationals => write!(f, "q"),
            ExactField::PrimeField(p) => write!(f, "f{p}"),
        }
    }
}

impl FromStr for ExactField {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(ExactField::Rationals);
        }
        match t.strip_prefix(['f', 'F']).map(str::parse::<u64>) {
            Some(Ok(p)) => ExactField::prime(p),
            _ => Err(FieldError::BadSpec(s.to_string())),
        }
    }
}

impl From<ExactField> for String {
    fn from(f: ExactField) -> String {
        f.to_string()
    }
}

impl TryFrom<String> for ExactField {
    type Error = FieldError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// Arithmetic used by the elimination routines.
pub(crate) trait Arith: Sync {
    type Elem: Clone + Send + Sync;
    fn from_int(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// `a - f * b`
    fn sub_mul(&self, a: &Self::Elem, f: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
}

pub(crate) struct ModP(pub u64);

impl Arith for ModP {
    type Elem = u64;

    fn from_int(&self, v: i64) -> u64 {
        v.rem_euclid(self.0 as i64) as u64
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn sub_mul(&self, a: &u64, f: &u64, b: &u64) -> u64 {
        let p = self.0 as u128;
        let prod = (*f as u128 * *b as u128) % p;
        ((*a as u128 + p - prod) % p) as u64
    }

    fn div(&self, a: &u64, b: &u64) -> u64 {
        let p = self.0 as u128;
        (*a as u128 * inverse_mod(*b, self.0) as u128 % p) as u64
    }
}

fn inverse_mod(a: u64, p: u64) -> u64 {
    // extended Euclid on i128 to stay clear of overflow
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert_eq!(r0, 1, "element not invertible");
    t0.rem_euclid(p as i128) as u64
}

/// Rational arithmetic with an `i64` fast path that promotes to big
/// rationals on overflow.
pub(crate) struct Rat;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Q {
    /// numerator, positive denominator, reduced
    Small(i64, i64),
    Big(BigRational),
}

impl Q {
    fn big(&self) -> BigRational {
        match self {
            Q::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Q::Big(b) => b.clone(),
        }
    }

    fn from_big(b: BigRational) -> Q {
        use num_traits::ToPrimitive;
        match (b.numer().to_i64(), b.denom().to_i64()) {
            (Some(n), Some(d)) => Q::Small(n, d),
            _ => Q::Big(b),
        }
    }

    fn small(n: i128, d: i128) -> Option<Q> {
        debug_assert!(d != 0);
        let g = gcd_i128(n, d);
        let (mut n, mut d) = (n / g, d / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        Some(Q::Small(i64::try_from(n).ok()?, i64::try_from(d).ok()?))
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    if a == 0 {
        1
    } else {
        a
    }
}

impl Arith for Rat {
    type Elem = Q;

    fn from_int(&self, v: i64) -> Q {
        Q::Small(v, 1)
    }

    fn is_zero(&self, a: &Q) -> bool {
        match a {
            Q::Small(n, _) => *n == 0,
            Q::Big(b) => b.is_zero(),
        }
    }

    fn sub_mul(&self, a: &Q, f: &Q, b: &Q) -> Q {
        if let (Q::Small(an, ad), Q::Small(fnum, fd), Q::Small(bn, bd)) = (a, f, b) {
            // a - f*b = (an*fd*bd - fnum*bn*ad) / (ad*fd*bd)
            let (an, ad, fnum, fd, bn, bd) = (
                *an as i128, *ad as i128, *fnum as i128, *fd as i128, *bn as i128, *bd as i128,
            );
            let pn = fnum.checked_mul(bn);
            let pd = fd.checked_mul(bd);
            if let (Some(pn), Some(pd)) = (pn, pd) {
                let num = an
                    .checked_mul(pd)
                    .and_then(|x| pn.checked_mul(ad).and_then(|y| x.checked_sub(y)));
                let den = ad.checked_mul(pd);
                if let (Some(num), Some(den)) = (num, den) {
                    if let Some(q) = Q::small(num, den) {
                        return q;
                    }
                }
            }
        }
        Q::from_big(a.big() - f.big() * b.big())
    }

    fn div(&self, a: &Q, b: &Q) -> Q {
        if let (Q::Small(an, ad), Q::Small(bn, bd)) = (a, b) {
            let num = *an as i128 * *bd as i128;
            let den = *ad as i128 * *bn as i128;
            if let Some(q) = Q::small(num, den) {
                return q;
            }
        }
        let bb = b.big();
        assert!(!bb.is_zero(), "division by zero");
        Q::from_big(a.big() * (BigRational::one() / bb))
    }
}
