//! Exact arbitrary-precision rationals and quadratic surds `a + b*sqrt(s)`.
//!
//! Every decision made by this library (cone membership, piecewise-formula
//! branches, orderings of irrational breakpoints) is made here, in exact
//! arithmetic.  Floating point appears only behind the explicitly approximate
//! [`Surd::to_fbig`] conversion, which the high-precision chart code and the
//! cross-check oracle use; no exact computation ever consults it.
//!
//! A [`Surd`] stores a value `a + b*sqrt(s)` with `a`, `b` rational and `s` a
//! nonnegative integer radicand kept squarefree-reduced.  Arithmetic between
//! two surds with distinct irrational radicands is an error rather than an
//! extension to a biquadratic field: the formulas this library implements never
//! need to *add* values from different quadratic fields, only to compare a
//! surd against a rational, which sign analysis handles exactly.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Arbitrary-precision integer.
pub type Int = BigInt;
/// Arbitrary-precision rational in canonical form (positive denominator,
/// reduced); the substrate of all computation.
pub type Rational = BigRational;

/// High-precision binary float used by the approximate surfaces (the chart
/// computations and the cross-check oracle).  Round-toward-zero; callers add
/// guard bits and certify a posteriori.
pub type BigFloat = dashu_float::FBig<dashu_float::round::mode::Zero, 2>;

/// Errors from exact arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    /// Arithmetic or comparison between two irrational surds whose radicands
    /// differ.  The value type is deliberately not closed under this.
    #[error("incompatible radicands {0} and {1}")]
    IncompatibleRadicands(BigUint, BigUint),
    /// Square root of a negative rational requested.
    #[error("negative radicand")]
    NegativeRadicand,
    /// Division by an exactly-zero surd.
    #[error("division by zero")]
    DivisionByZero,
    /// Malformed rational literal (expected `p` or `p/q` with `q != 0`).
    #[error("cannot parse {0:?} as a rational")]
    Parse(String),
}

/// Shorthand for an `i64`-backed rational `n/d`.
///
/// Panics if `d == 0`; intended for literals in code and tests.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for an integer rational.
pub fn rat_i(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

/// Parses `"p"` or `"p/q"` (arbitrary precision, optional sign) to a Rational.
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let bad = || ExactError::Parse(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Formats a rational as `p` or `p/q` (the CLI wire format).
pub fn rational_to_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Trial-division bound for squarefree reduction of radicands.  Square factors
/// with a prime factor above the bound are caught only by the perfect-square
/// fold of the remaining cofactor; see the module docs for why this suffices.
const SQUAREFREE_TRIAL_BOUND: u64 = 10_000;

/// Primes below the trial bound, sieved once.
fn trial_primes() -> &'static [u64] {
    use std::sync::OnceLock;
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = SQUAREFREE_TRIAL_BOUND as usize;
        let mut sieve = vec![true; n + 1];
        let mut primes = Vec::new();
        for p in 2..=n {
            if sieve[p] {
                primes.push(p as u64);
                for m in (p * p..=n).step_by(p) {
                    sieve[m] = false;
                }
            }
        }
        primes
    })
}

/// Splits `n = sq^2 * rest` with `rest` squarefree up to the trial bound
/// (square factors whose prime exceeds the bound are caught by the final
/// perfect-square fold).
fn squarefree_split_u64(n: u64) -> (u64, u64) {
    let mut s = n;
    let mut sq = 1u64;
    for &p in trial_primes() {
        let pp = match p.checked_mul(p) {
            Some(pp) if pp <= s => pp,
            _ => break,
        };
        while s % pp == 0 {
            s /= pp;
            sq *= p;
        }
    }
    let root = s.isqrt();
    if root * root == s {
        sq *= root;
        s = 1;
    }
    (sq, s)
}

/// An exact element `a + b*sqrt(s)` of a real quadratic extension of the
/// rationals.
///
/// Canonical form: if the value is rational (because `b = 0`, `s = 0`, or `s`
/// is a perfect square) then `b = 0` and `s = 0`; otherwise `s > 1` is
/// squarefree-reduced with square factors folded into `b`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Surd {
    a: Rational,
    b: Rational,
    s: BigUint,
}

impl Surd {
    /// Builds `a + b*sqrt(s)` and canonicalizes.
    pub fn new(a: Rational, b: Rational, s: impl Into<BigUint>) -> Surd {
        let mut x = Surd { a, b, s: s.into() };
        x.canonicalize();
        x
    }

    /// The rational value `a` as a surd.
    pub fn from_rational(a: Rational) -> Surd {
        Surd {
            a,
            b: Rational::zero(),
            s: BigUint::zero(),
        }
    }

    /// The integer `n` as a surd.
    pub fn from_int(n: i64) -> Surd {
        Surd::from_rational(rat_i(n))
    }

    /// Exact square root of a nonnegative rational: `sqrt(p/q) = sqrt(p*q)/q`.
    pub fn sqrt_of(x: &Rational) -> Result<Surd, ExactError> {
        if x.is_negative() {
            return Err(ExactError::NegativeRadicand);
        }
        let p = x.numer().magnitude().clone();
        let q = x.denom().magnitude().clone();
        let radicand = &p * &q;
        Ok(Surd::new(
            Rational::zero(),
            Rational::new(BigInt::one(), BigInt::from_biguint(Sign::Plus, q)),
            radicand,
        ))
    }

    /// `sqrt(n)` for a nonnegative integer `n`.
    pub fn sqrt_int(n: u64) -> Surd {
        Surd::new(Rational::zero(), Rational::one(), BigUint::from(n))
    }

    pub fn zero() -> Surd {
        Surd::from_rational(Rational::zero())
    }

    pub fn one() -> Surd {
        Surd::from_rational(Rational::one())
    }

    /// Rational part `a`.
    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    /// Coefficient `b` of `sqrt(s)`.
    pub fn surd_coeff(&self) -> &Rational {
        &self.b
    }

    /// The (reduced) radicand `s`; zero iff the value is rational.
    pub fn radicand(&self) -> &BigUint {
        &self.s
    }

    /// True iff the canonical form is purely rational.
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The value as a rational, if it is one.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn canonicalize(&mut self) {
        if self.b.is_zero() || self.s.is_zero() {
            self.b = Rational::zero();
            self.s = BigUint::zero();
            return;
        }
        let mut s = std::mem::take(&mut self.s);
        let mut square_part = BigUint::one();
        // Perfect squares fold completely; checking first short-circuits the
        // common case (orbit arithmetic produces square radicands constantly).
        let root = s.sqrt();
        if &root * &root == s {
            square_part = root;
            s = BigUint::one();
        } else if let Some(small) = s.to_u64() {
            // Radicand fits a machine word: reduce in u64 arithmetic.
            let (sq, rest) = squarefree_split_u64(small);
            if sq != 1 {
                square_part = BigUint::from(sq);
                s = BigUint::from(rest);
            }
        } else {
            // Strip square prime factors p^2 | s into b by trial division,
            // then fold the cofactor if what remains is a perfect square.
            for &p in trial_primes() {
                let pb = BigUint::from(p);
                let pp = &pb * &pb;
                if &pp > &s {
                    break;
                }
                while (&s % &pp).is_zero() {
                    s /= &pp;
                    square_part *= &pb;
                }
            }
            let root = s.sqrt();
            if &root * &root == s {
                square_part *= &root;
                s = BigUint::one();
            }
        }
        if !square_part.is_one() {
            self.b *= Rational::from(BigInt::from_biguint(Sign::Plus, square_part));
        }
        if s.is_one() {
            self.a += std::mem::take(&mut self.b);
            self.b = Rational::zero();
            self.s = BigUint::zero();
        } else {
            self.s = s;
        }
    }

    /// True when `self` and `other` may be combined additively: same radicand,
    /// or at least one side rational.
    pub fn compatible(&self, other: &Surd) -> bool {
        self.is_rational() || other.is_rational() || self.s == other.s
    }

    fn common_radicand(&self, other: &Surd) -> Result<BigUint, ExactError> {
        if self.is_rational() {
            Ok(other.s.clone())
        } else if other.is_rational() || self.s == other.s {
            Ok(self.s.clone())
        } else {
            Err(ExactError::IncompatibleRadicands(
                self.s.clone(),
                other.s.clone(),
            ))
        }
    }

    /// Exact sum; errors on distinct irrational radicands.
    pub fn checked_add(&self, other: &Surd) -> Result<Surd, ExactError> {
        let s = self.common_radicand(other)?;
        Ok(Surd::new(&self.a + &other.a, &self.b + &other.b, s))
    }

    /// Exact difference; errors on distinct irrational radicands.
    pub fn checked_sub(&self, other: &Surd) -> Result<Surd, ExactError> {
        self.checked_add(&other.clone().neg())
    }

    /// Exact product `(a+b sqrt(s))(c+d sqrt(s)) = (ac+bds) + (ad+bc) sqrt(s)`;
    /// errors on distinct irrational radicands.
    pub fn checked_mul(&self, other: &Surd) -> Result<Surd, ExactError> {
        let s = self.common_radicand(other)?;
        let s_rat = Rational::from(BigInt::from_biguint(Sign::Plus, s.clone()));
        let a = &self.a * &other.a + &self.b * &other.b * &s_rat;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Surd::new(a, b, s))
    }

    /// Exact square; always defined (squaring stays inside the field).
    pub fn square(&self) -> Surd {
        self.checked_mul(self).expect("same radicand")
    }

    /// Scales by a rational factor.
    pub fn scale(&self, c: &Rational) -> Surd {
        Surd::new(&self.a * c, &self.b * c, self.s.clone())
    }

    /// Exact reciprocal via the conjugate:
    /// `1/(a+b sqrt(s)) = (a - b sqrt(s)) / (a^2 - b^2 s)`.
    pub fn recip(&self) -> Result<Surd, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        if let Some(a) = self.as_rational() {
            return Ok(Surd::from_rational(a.recip()));
        }
        let s_rat = Rational::from(BigInt::from_biguint(Sign::Plus, self.s.clone()));
        let norm = &self.a * &self.a - &self.b * &self.b * &s_rat;
        debug_assert!(!norm.is_zero(), "irrational surd has nonzero norm");
        let inv = norm.recip();
        Ok(Surd::new(
            &self.a * &inv,
            -(&self.b * &inv),
            self.s.clone(),
        ))
    }

    /// Exact division; errors on distinct irrational radicands or zero divisor.
    pub fn checked_div(&self, other: &Surd) -> Result<Surd, ExactError> {
        self.checked_mul(&other.recip()?)
    }

    /// Exact sign of the real value: `-1`, `0`, or `1`.
    ///
    /// Decided by sign case analysis on `a`, `b` and one integral comparison of
    /// `a^2` against `b^2 s`; no floating point.
    pub fn sign(&self) -> i8 {
        let sa = rational_sign(&self.a);
        let sb = rational_sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        // Opposite signs: compare |a| vs |b| sqrt(s) by squaring.
        let s_rat = Rational::from(BigInt::from_biguint(Sign::Plus, self.s.clone()));
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * &s_rat;
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    /// Exact total-order comparison of the real values.
    ///
    /// Supported when the radicands are compatible (as in [`checked_sub`]) or
    /// when both values are pure square roots of rationals (`a = 0` on both
    /// sides, any radicands).  Two distinct irrational radicands with nonzero
    /// rational parts cannot be compared exactly in this closed type and
    /// produce `IncompatibleRadicands`.
    ///
    /// [`checked_sub`]: Surd::checked_sub
    pub fn cmp_value(&self, other: &Surd) -> Result<Ordering, ExactError> {
        if self.compatible(other) {
            return Ok(match self.checked_sub(other)?.sign() {
                -1 => Ordering::Less,
                0 => Ordering::Equal,
                _ => Ordering::Greater,
            });
        }
        if self.a.is_zero() && other.a.is_zero() {
            // b sqrt(s) vs d sqrt(t): compare signs, then squares.
            let sb = rational_sign(&self.b);
            let sd = rational_sign(&other.b);
            if sb != sd {
                return Ok(sb.cmp(&sd));
            }
            let ls = &self.b * &self.b
                * Rational::from(BigInt::from_biguint(Sign::Plus, self.s.clone()));
            let rs = &other.b * &other.b
                * Rational::from(BigInt::from_biguint(Sign::Plus, other.s.clone()));
            let square_cmp = ls.cmp(&rs);
            return Ok(if sb >= 0 { square_cmp } else { square_cmp.reverse() });
        }
        Err(ExactError::IncompatibleRadicands(
            self.s.clone(),
            other.s.clone(),
        ))
    }

    /// Rational enclosure `(lo, hi)` of the real value with
    /// `hi - lo <= |b| 2^-k`.
    pub fn enclosure(&self, k: usize) -> (Rational, Rational) {
        if self.b.is_zero() {
            return (self.a.clone(), self.a.clone());
        }
        let (rlo, rhi) = sqrt_enclosure(&self.s, k);
        let lo = &self.a + &self.b * if self.b.is_positive() { &rlo } else { &rhi };
        let hi = &self.a + &self.b * if self.b.is_positive() { &rhi } else { &rlo };
        (lo, hi)
    }

    /// Exact total-order comparison across arbitrary radicands.
    ///
    /// Uses [`cmp_value`] when the closed-form comparison applies; otherwise
    /// both radicands are distinct squarefree non-squares and at least one
    /// side has a nonzero rational part, in which case the two values can
    /// never coincide (`sqrt(s)` does not lie in the field generated by
    /// `sqrt(t)`), so refining rational enclosures until they separate is an
    /// exact, terminating decision procedure.
    ///
    /// [`cmp_value`]: Surd::cmp_value
    pub fn cmp_value_general(&self, other: &Surd) -> Ordering {
        if let Ok(o) = self.cmp_value(other) {
            return o;
        }
        let mut k = 16usize;
        loop {
            let (slo, shi) = self.enclosure(k);
            let (olo, ohi) = other.enclosure(k);
            if shi < olo {
                return Ordering::Less;
            }
            if ohi < slo {
                return Ordering::Greater;
            }
            k *= 2;
            assert!(
                k <= 1 << 24,
                "enclosure refinement failed to separate {self} and {other}"
            );
        }
    }

    /// High-precision floating approximation with `bits` bits of working
    /// precision (round toward zero; error below a few final-place units).
    pub fn to_fbig(&self, bits: usize) -> BigFloat {
        let bits = bits.max(32);
        let a = rational_to_fbig(&self.a, bits);
        if self.b.is_zero() {
            return a;
        }
        let root = dashu_base::SquareRoot::sqrt(&ubig_to_fbig(&self.s, bits));
        a + rational_to_fbig(&self.b, bits) * root
    }

    /// Crude `f64` approximation for display purposes only.
    pub fn approx_f64(&self) -> f64 {
        let approx = |q: &Rational| -> f64 {
            let f = |i: &BigInt| i.to_string().parse::<f64>().unwrap_or(f64::NAN);
            f(q.numer()) / f(q.denom())
        };
        let mut v = approx(&self.a);
        if !self.b.is_zero() {
            v += approx(&self.b) * self.s.to_string().parse::<f64>().unwrap_or(f64::NAN).sqrt();
        }
        v
    }
}

/// Rational enclosure of `sqrt(s)` of width `2^-k`, from the integer square
/// root of `s * 4^k`.
fn sqrt_enclosure(s: &BigUint, k: usize) -> (Rational, Rational) {
    let scaled: BigUint = s << (2 * k);
    let root = num_integer::Roots::sqrt(&scaled);
    let den: BigInt = BigInt::from(1) << k;
    let lo = Rational::new(BigInt::from(root.clone()), den.clone());
    let hi = Rational::new(BigInt::from(root + 1u8), den);
    (lo, hi)
}

fn rational_sign(q: &Rational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

/// Converts a nonnegative big integer to a [`BigFloat`] at the given precision.
fn ubig_to_fbig(u: &BigUint, bits: usize) -> BigFloat {
    let ub = dashu_int::UBig::from_le_bytes(&u.to_bytes_le());
    BigFloat::from_parts(dashu_int::IBig::from(ub), 0)
        .with_precision(bits)
        .value()
}

fn bigint_to_fbig(i: &BigInt, bits: usize) -> BigFloat {
    let v = ubig_to_fbig(i.magnitude(), bits);
    if i.is_negative() {
        -v
    } else {
        v
    }
}

/// Converts a rational to a [`BigFloat`] at the given precision.
pub fn rational_to_fbig(q: &Rational, bits: usize) -> BigFloat {
    bigint_to_fbig(q.numer(), bits) / bigint_to_fbig(q.denom(), bits)
}

impl PartialOrd for Surd {
    /// Value order where exactly decidable; `None` on incompatible radicands.
    fn partial_cmp(&self, other: &Surd) -> Option<Ordering> {
        self.cmp_value(other).ok()
    }
}

macro_rules! panicking_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &Surd {
            type Output = Surd;
            fn $method(self, rhs: &Surd) -> Surd {
                self.$checked(rhs).expect("incompatible radicands")
            }
        }
        impl $trait for Surd {
            type Output = Surd;
            fn $method(self, rhs: Surd) -> Surd {
                (&self).$method(&rhs)
            }
        }
    };
}
panicking_op!(Add, add, checked_add);
panicking_op!(Sub, sub, checked_sub);
panicking_op!(Mul, mul, checked_mul);

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd {
            a: -self.a,
            b: -self.b,
            s: self.s,
        }
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        self.clone().neg()
    }
}

impl From<Rational> for Surd {
    fn from(a: Rational) -> Surd {
        Surd::from_rational(a)
    }
}

impl From<i64> for Surd {
    fn from(n: i64) -> Surd {
        Surd::from_int(n)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", rational_to_string(&self.a));
        }
        let root = format!("sqrt({})", self.s);
        let bterm = if self.b.is_one() {
            root
        } else if self.b == -Rational::one() {
            format!("-{root}")
        } else {
            format!("{}*{root}", rational_to_string(&self.b))
        };
        if self.a.is_zero() {
            write!(f, "{bterm}")
        } else if self.b.is_negative() {
            write!(f, "{}{}", rational_to_string(&self.a), bterm)
        } else {
            write!(f, "{}+{}", rational_to_string(&self.a), bterm)
        }
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Surd({self})")
    }
}

/// Wire format: decimal-string integers, arbitrary-precision safe.
#[derive(Serialize, Deserialize)]
struct SurdWire {
    a_num: String,
    a_den: String,
    b_num: String,
    b_den: String,
    radicand: String,
}

impl Serialize for Surd {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SurdWire {
            a_num: self.a.numer().to_string(),
            a_den: self.a.denom().to_string(),
            b_num: self.b.numer().to_string(),
            b_den: self.b.denom().to_string(),
            radicand: self.s.to_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Surd {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Surd, D::Error> {
        let w = SurdWire::deserialize(deserializer)?;
        let int = |s: &str| s.parse::<BigInt>().map_err(D::Error::custom);
        let nat = |s: &str| s.parse::<BigUint>().map_err(D::Error::custom);
        let a_den = int(&w.a_den)?;
        let b_den = int(&w.b_den)?;
        if a_den.is_zero() || b_den.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(Surd::new(
            Rational::new(int(&w.a_num)?, a_den),
            Rational::new(int(&w.b_num)?, b_den),
            nat(&w.radicand)?,
        ))
    }
}

/// Compares a rational against `c * sqrt(n)` exactly (`n >= 0`).
pub fn cmp_rational_vs_sqrt(q: &Rational, c: &Rational, n: &BigUint) -> Ordering {
    let rhs = Surd::new(Rational::zero(), c.clone(), n.clone());
    Surd::from_rational(q.clone())
        .cmp_value(&rhs)
        .expect("one side rational")
}

/// Floor of `sqrt(p/q)` for a nonnegative rational, exact.
pub fn floor_sqrt(x: &Rational) -> BigInt {
    assert!(!x.is_negative());
    // floor(sqrt(p/q)) = floor(sqrt(floor-free form)): binary search on n with
    // n^2 q <= p.
    let p = x.numer().magnitude();
    let q = x.denom().magnitude();
    // Initial guess via integer sqrt of p/q rounded down.
    let mut n = (p / q).sqrt();
    // Adjust (the integer sqrt of the floor may be off by one in either
    // direction relative to sqrt of the true rational).
    while &(&n + 1u32) * &(&n + 1u32) * q <= *p {
        n += 1u32;
    }
    while &n * &n * q > *p {
        n -= 1u32;
    }
    BigInt::from_biguint(Sign::Plus, n)
}
