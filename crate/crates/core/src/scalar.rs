//! Exact field arithmetic: arbitrary-precision rationals and odd prime fields.
//!
//! Every computation in this crate runs over one of these two fields, chosen
//! at configuration time through [`FieldSpec`]. Characteristic 2 is rejected
//! up front because the embedding recursion divides by 2.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported: the embedding recursion divides by 2")]
    CharacteristicTwo,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScalarError {
    #[error("malformed scalar `{0}`: expected -?digits(/digits)?")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("denominator of `{0}` is divisible by the field characteristic {1}")]
    DenominatorDivisibleByP(String, u64),
    #[error("division by zero")]
    DivisionByZero,
}

/// The coefficient field: exact rationals or F_p with p an odd prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec::Rationals
    }

    /// Prime field F_p. Rejects composites and p = 2.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p == 2 {
            return Err(FieldError::CharacteristicTwo);
        }
        if !is_prime_u64(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::zero()),
            FieldSpec::Prime(p) => Scalar::Residue { value: 0, modulus: *p },
        }
    }

    pub fn one(&self) -> Scalar {
        self.integer(1)
    }

    /// The field element 1/2; total because the characteristic is never 2.
    pub fn half(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => {
                Scalar::Rational(BigRational::new(BigInt::one(), BigInt::from(2)))
            }
            FieldSpec::Prime(p) => Scalar::Residue { value: p.div_ceil(2), modulus: *p },
        }
    }

    pub fn integer(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from(BigInt::from(n))),
            FieldSpec::Prime(p) => {
                Scalar::Residue { value: n.rem_euclid(*p as i64) as u64, modulus: *p }
            }
        }
    }

    /// Parses the text form `-?digits(/digits)?` into a field element.
    pub fn parse(&self, text: &str) -> Result<Scalar, ScalarError> {
        let (num_str, den_str) = match text.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (text, None),
        };
        let num = parse_int(num_str, true).ok_or_else(|| ScalarError::Malformed(text.into()))?;
        let den = match den_str {
            Some(d) => parse_int(d, false).ok_or_else(|| ScalarError::Malformed(text.into()))?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(ScalarError::ZeroDenominator(text.into()));
        }
        match self {
            FieldSpec::Rationals => Ok(Scalar::Rational(BigRational::new(num, den))),
            FieldSpec::Prime(p) => {
                let pb = BigInt::from(*p);
                let d = ((&den % &pb) + &pb) % &pb;
                if d.is_zero() {
                    return Err(ScalarError::DenominatorDivisibleByP(text.into(), *p));
                }
                let n = ((&num % &pb) + &pb) % &pb;
                let n: u64 = n.try_into().expect("reduced residue fits u64");
                let d: u64 = d.try_into().expect("reduced residue fits u64");
                let value = mul_mod(n, inv_mod(d, *p), *p);
                Ok(Scalar::Residue { value, modulus: *p })
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "rational"),
            FieldSpec::Prime(p) => write!(f, "prime({p})"),
        }
    }
}

fn parse_int(s: &str, allow_sign: bool) -> Option<BigInt> {
    let digits = if allow_sign { s.strip_prefix('-').unwrap_or(s) } else { s };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// An exact field element. Rationals are kept in lowest terms with positive
/// denominator; residues are kept in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Residue { modulus, .. } => FieldSpec::Prime(*modulus),
        }
    }

    /// Exact division. Errors on a zero divisor.
    pub fn div(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a / b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q }) => {
                assert_eq!(p, q, "scalars from different prime fields");
                Scalar::Residue { value: mul_mod(*a, inv_mod(*b, *p), *p), modulus: *p }
            }
            _ => panic!("scalars from different fields"),
        })
    }

    pub fn inverse(&self) -> Result<Scalar, ScalarError> {
        self.field().one().div(self)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(_) => write!(f, "{self}"),
            Scalar::Residue { modulus, .. } => write!(f, "{self} (mod {modulus})"),
        }
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a $op b),
                    (
                        Scalar::Residue { value: a, modulus: p },
                        Scalar::Residue { value: b, modulus: q },
                    ) => {
                        assert_eq!(p, q, "scalars from different prime fields");
                        Scalar::Residue { value: scalar_binop!(@mod $method a, b, p), modulus: *p }
                    }
                    _ => panic!("scalars from different fields"),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
    (@mod add $a:ident, $b:ident, $p:ident) => { add_mod(*$a, *$b, *$p) };
    (@mod sub $a:ident, $b:ident, $p:ident) => { sub_mod(*$a, *$b, *$p) };
    (@mod mul $a:ident, $b:ident, $p:ident) => { mul_mod(*$a, *$b, *$p) };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Residue { value, modulus } => {
                Scalar::Residue { value: sub_mod(0, *value, *modulus), modulus: *modulus }
            }
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + p as u128 - b as u128) % p as u128) as u64
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p), "inverse of zero residue");
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for u64.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
