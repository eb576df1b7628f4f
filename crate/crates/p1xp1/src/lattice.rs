//! The intersection lattices of the blowup of P1 x P1 at r points.
//!
//! Two views are provided.  [`SymClass`] lives in the rank-3 symmetric slice
//! spanned by the two fibre classes `F1`, `F2` and the *sum* `E` of the r
//! exceptional divisors; its intersection form has Gram matrix
//! `[[0,1,0],[1,0,0],[0,0,-r]]` in the `(F1,F2,E)` basis.  [`FullClass`] keeps
//! the r individual multiplicities and is needed only where a construction
//! genuinely breaks the symmetry (reflection in a curve through the points,
//! and maps between blowups of different sizes).
//!
//! Coordinates store the signed `E`-coefficient `e`; the conventional triple
//! `(d1, d2, -m)` with multiplicity `m` corresponds to `e = -m`.  Printing
//! uses the triple form.

use crate::exact::{rat_i, ExactError, Rational, Surd};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Errors from lattice operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    /// Pairing of classes over different numbers of blown-up points.
    #[error("classes live over different r: {0} vs {1}")]
    MismatchedR(u32, u32),
    /// Coordinates from distinct quadratic fields met additively.
    #[error(transparent)]
    Incompatible(#[from] ExactError),
    /// `l_gamma` called with a negative gamma.
    #[error("gamma must be nonnegative")]
    NegativeGamma,
    /// A bundle coordinate that must be positive was not.
    #[error("bundle bidegree components must be positive")]
    NonPositiveBundle,
}

/// A class `d1*F1 + d2*F2 + e*E` in the symmetric slice over r points.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymClass {
    pub r: u32,
    pub d1: Surd,
    pub d2: Surd,
    pub e: Surd,
}

impl SymClass {
    pub fn new(r: u32, d1: Surd, d2: Surd, e: Surd) -> SymClass {
        SymClass { r, d1, d2, e }
    }

    /// Integer-coordinate class `(d1, d2, e)`.
    pub fn from_ints(r: u32, d1: i64, d2: i64, e: i64) -> SymClass {
        SymClass::new(r, Surd::from_int(d1), Surd::from_int(d2), Surd::from_int(e))
    }

    /// Rational-coordinate class.
    pub fn from_rationals(r: u32, d1: Rational, d2: Rational, e: Rational) -> SymClass {
        SymClass::new(r, d1.into(), d2.into(), e.into())
    }

    /// First fibre class `F1 = (1,0,0)`.
    pub fn f1(r: u32) -> SymClass {
        SymClass::from_ints(r, 1, 0, 0)
    }

    /// Second fibre class `F2 = (0,1,0)`.
    pub fn f2(r: u32) -> SymClass {
        SymClass::from_ints(r, 0, 1, 0)
    }

    /// Sum of the exceptional divisors, `E = (0,0,1)`.
    pub fn exceptional(r: u32) -> SymClass {
        SymClass::from_ints(r, 0, 0, 1)
    }

    /// Canonical class `K = (-2,-2,1)`.
    pub fn canonical(r: u32) -> SymClass {
        SymClass::from_ints(r, -2, -2, 1)
    }

    /// The intersection pairing `v.w = d1 e2' + d2 e1' - r e e'`
    /// (Gram matrix `[[0,1,0],[1,0,0],[0,0,-r]]`).
    pub fn pair(&self, other: &SymClass) -> Result<Surd, LatticeError> {
        if self.r != other.r {
            return Err(LatticeError::MismatchedR(self.r, other.r));
        }
        let mut acc = self.d1.checked_mul(&other.d2)?;
        acc = acc.checked_add(&self.d2.checked_mul(&other.d1)?)?;
        let ee = self.e.checked_mul(&other.e)?.scale(&rat_i(self.r as i64));
        Ok(acc.checked_sub(&ee)?)
    }

    /// Self-intersection `v.v`.
    pub fn self_pair(&self) -> Result<Surd, LatticeError> {
        self.pair(self)
    }

    /// Intersection with the canonical class.
    pub fn k_pair(&self) -> Result<Surd, LatticeError> {
        self.pair(&SymClass::canonical(self.r))
    }

    /// Coordinate-wise rational scaling.
    pub fn scale(&self, c: &Rational) -> SymClass {
        SymClass::new(self.r, self.d1.scale(c), self.d2.scale(c), self.e.scale(c))
    }

    /// Coordinate-wise sum (same r, compatible radicands).
    pub fn checked_add(&self, other: &SymClass) -> Result<SymClass, LatticeError> {
        if self.r != other.r {
            return Err(LatticeError::MismatchedR(self.r, other.r));
        }
        Ok(SymClass::new(
            self.r,
            self.d1.checked_add(&other.d1)?,
            self.d2.checked_add(&other.d2)?,
            self.e.checked_add(&other.e)?,
        ))
    }

    /// Swaps the two fibre coordinates (the mirror symmetry `d1 <-> d2`).
    pub fn swap(&self) -> SymClass {
        SymClass::new(self.r, self.d2.clone(), self.d1.clone(), self.e.clone())
    }

    /// True when all three coordinates are rational.
    pub fn is_rational(&self) -> bool {
        self.d1.is_rational() && self.d2.is_rational() && self.e.is_rational()
    }

    /// Divides out the common rational content of a rational-coordinate class,
    /// returning the primitive generator of its ray (positive multiple).
    pub fn primitive(&self) -> Option<SymClass> {
        let d1 = self.d1.as_rational()?;
        let d2 = self.d2.as_rational()?;
        let e = self.e.as_rational()?;
        let mut denom = num_bigint::BigInt::one();
        for q in [d1, d2, e] {
            denom = num_integer::lcm(denom, q.denom().clone());
        }
        let scaled: Vec<num_bigint::BigInt> = [d1, d2, e]
            .iter()
            .map(|q| (*q * Rational::from(denom.clone())).to_integer())
            .collect();
        let mut g = num_bigint::BigInt::zero();
        for v in &scaled {
            g = num_integer::gcd(g, v.clone());
        }
        if g.is_zero() {
            return Some(self.clone());
        }
        let c = Rational::new(denom, g);
        Some(self.scale(&c.abs()))
    }
}

impl fmt::Display for SymClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.d1, self.d2, self.e)
    }
}

impl fmt::Debug for SymClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymClass[r={}]{}", self.r, self)
    }
}

/// A class `d1*F1 + d2*F2 - sum_i m_i E_i` with individual multiplicities.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullClass {
    pub r: u32,
    pub d1: Rational,
    pub d2: Rational,
    /// Multiplicities `m_i` (coefficients of `-E_i`); length r.
    pub mults: Vec<Rational>,
}

impl FullClass {
    pub fn new(r: u32, d1: Rational, d2: Rational, mults: Vec<Rational>) -> FullClass {
        assert_eq!(mults.len(), r as usize, "need one multiplicity per point");
        FullClass { r, d1, d2, mults }
    }

    /// Class with the same multiplicity at every point.
    pub fn uniform(r: u32, d1: Rational, d2: Rational, m: Rational) -> FullClass {
        FullClass::new(r, d1, d2, vec![m; r as usize])
    }

    pub fn from_ints(r: u32, d1: i64, d2: i64, mults: &[i64]) -> FullClass {
        FullClass::new(
            r,
            rat_i(d1),
            rat_i(d2),
            mults.iter().map(|&m| rat_i(m)).collect(),
        )
    }

    /// Canonical class `-2F1 - 2F2 + sum_i E_i` (each `m_i = -1`).
    pub fn canonical(r: u32) -> FullClass {
        FullClass::uniform(r, rat_i(-2), rat_i(-2), rat_i(-1))
    }

    /// The full-lattice pairing `d1 d2' + d2 d1' - sum_i m_i m_i'`.
    pub fn pair(&self, other: &FullClass) -> Result<Rational, LatticeError> {
        if self.r != other.r {
            return Err(LatticeError::MismatchedR(self.r, other.r));
        }
        let mut acc = &self.d1 * &other.d2 + &self.d2 * &other.d1;
        for (m, n) in self.mults.iter().zip(&other.mults) {
            acc -= m * n;
        }
        Ok(acc)
    }

    pub fn self_pair(&self) -> Rational {
        self.pair(self).expect("same r")
    }

    pub fn k_pair(&self) -> Rational {
        self.pair(&FullClass::canonical(self.r)).expect("same r")
    }

    /// Sum over the r-cycle orbit of multiplicity rotations: the symmetric
    /// class `(r d1, r d2, -sum_i m_i)`.
    pub fn symmetrize(&self) -> SymClass {
        let r = rat_i(self.r as i64);
        let total: Rational = self.mults.iter().sum();
        SymClass::from_rationals(self.r, &self.d1 * &r, &self.d2 * &r, -total)
    }

    /// View as a symmetric-slice class when all multiplicities agree.
    pub fn as_sym(&self) -> Option<SymClass> {
        let m0 = self.mults.first()?;
        if self.mults.iter().all(|m| m == m0) {
            Some(SymClass::from_rationals(
                self.r,
                self.d1.clone(),
                self.d2.clone(),
                -m0.clone(),
            ))
        } else {
            None
        }
    }

    /// Expected dimension `max(0, (C^2 - K.C)/2 + 1)` of the linear system.
    pub fn expected_dim(&self) -> Rational {
        let v = (self.self_pair() - self.k_pair()) / rat_i(2) + Rational::one();
        if v.is_negative() {
            Rational::zero()
        } else {
            v
        }
    }
}

impl fmt::Display for FullClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ms: Vec<String> = self
            .mults
            .iter()
            .map(|m| crate::exact::rational_to_string(&-m.clone()))
            .collect();
        write!(
            f,
            "({}, {}; {})",
            crate::exact::rational_to_string(&self.d1),
            crate::exact::rational_to_string(&self.d2),
            ms.join(", ")
        )
    }
}

impl fmt::Debug for FullClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FullClass[r={}]{}", self.r, self)
    }
}

/// An ample line bundle of bidegree `(e1, e2)` on P1 x P1 (both positive).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AmpleBundle {
    e1: Rational,
    e2: Rational,
}

impl AmpleBundle {
    pub fn new(e1: Rational, e2: Rational) -> Result<AmpleBundle, LatticeError> {
        if e1.is_positive() && e2.is_positive() {
            Ok(AmpleBundle { e1, e2 })
        } else {
            Err(LatticeError::NonPositiveBundle)
        }
    }

    pub fn from_ints(e1: i64, e2: i64) -> AmpleBundle {
        AmpleBundle::new(rat_i(e1), rat_i(e2)).expect("positive bidegree")
    }

    pub fn e1(&self) -> &Rational {
        &self.e1
    }

    pub fn e2(&self) -> &Rational {
        &self.e2
    }

    /// The slope `e2/e1`.
    pub fn slope(&self) -> Rational {
        &self.e2 / &self.e1
    }

    /// The mirrored bundle `(e2, e1)`.
    pub fn swap(&self) -> AmpleBundle {
        AmpleBundle {
            e1: self.e2.clone(),
            e2: self.e1.clone(),
        }
    }

    /// `L^2 = 2 e1 e2`.
    pub fn self_pair(&self) -> Rational {
        rat_i(2) * &self.e1 * &self.e2
    }

    /// The class `pi*L - gamma E = (e1, e2, -gamma)` over r points.
    pub fn l_gamma(&self, r: u32, gamma: &Surd) -> Result<SymClass, LatticeError> {
        if gamma.sign() < 0 {
            return Err(LatticeError::NegativeGamma);
        }
        Ok(SymClass::new(
            r,
            self.e1.clone().into(),
            self.e2.clone().into(),
            -gamma,
        ))
    }
}

impl fmt::Display for AmpleBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "O({}, {})",
            crate::exact::rational_to_string(&self.e1),
            crate::exact::rational_to_string(&self.e2)
        )
    }
}
