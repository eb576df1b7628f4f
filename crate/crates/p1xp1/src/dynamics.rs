//! The blow-down-and-swap isometry `T_r` of the symmetric slice, its
//! eigen-data, the bidirectional integer sequences `p`, `m`, `q`, the
//! generator families `xi_n = T_r^n(F2)` and `C_n = T_r^n(E)`, and the
//! logarithmic chart `phi_r`.
//!
//! In the `(F1, F2, E)` basis `T_r` is the matrix
//!
//! ```text
//!         [ 0    1    0 ]
//!   T_r = [ 1   r/2   r ]
//!         [ 0   -1   -1 ]
//! ```
//!
//! defined for even r (the entry r/2 is integral; for odd r the map does not
//! preserve the lattice and is rejected).  Its characteristic polynomial is
//! `(t^2 - ((r-4)/2) t + 1)(t - 1)`; the quadratic factor has roots
//! `alpha_r >= 1 >= beta_r` with `alpha_r beta_r = 1`, which for `r >= 8`
//! are the expansion rates of the cone dynamics.
//!
//! All of this module is exact except [`phi_r`] and [`t_real_power`], which
//! are the library's only floating-point surface: they run at configurable
//! precision (default [`DEFAULT_PHI_BITS`]) with an a-posteriori two-precision
//! agreement check.  Every decision made elsewhere from `phi_r`-style data has
//! an exact integer counterpart (see `seshadri::find_n_even`).

use crate::exact::{rat, rat_i, rational_to_fbig, BigFloat, Rational, Surd};
use crate::lattice::{LatticeError, SymClass};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::HashMap;
use std::sync::Mutex;

/// Default working precision (bits) for the floating chart.
pub const DEFAULT_PHI_BITS: usize = 256;

/// Errors from the dynamics module.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DynamicsError {
    /// `T_r` does not preserve the lattice for odd r.
    #[error("T_r requires even r, got {0}")]
    OddR(u32),
    /// `r` too small for the requested spectral construction.
    #[error("r = {0} is too small here (need r >= {1})")]
    SmallR(u32, u32),
    /// The chart is defined only on square-zero classes.
    #[error("phi_r requires an exactly square-zero class")]
    NotSquareZero,
    /// The chart blows up on the eigenrays of `T_r`.
    #[error("class is (numerically) on an eigenray of T_r")]
    OnEigenRay,
    /// The chart argument must be in the positive cone component.
    #[error("class is outside the domain of phi_r (nonpositive eigen-coordinates)")]
    OutsideChartDomain,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// 3x3 rational matrix in the `(F1, F2, E)` basis.
pub type Mat3 = [[Rational; 3]; 3];

/// The matrix of `T_r` (even r).
pub fn t_matrix(r: u32) -> Result<Mat3, DynamicsError> {
    if r % 2 != 0 || r == 0 {
        return Err(DynamicsError::OddR(r));
    }
    let z = Rational::zero;
    Ok([
        [z(), rat_i(1), z()],
        [rat_i(1), rat(r as i64, 2), rat_i(r as i64)],
        [z(), rat_i(-1), rat_i(-1)],
    ])
}

/// The matrix of `T_r^{-1}`; equals `S T_r S` where `S` swaps `d1 <-> d2`.
pub fn t_matrix_inv(r: u32) -> Result<Mat3, DynamicsError> {
    if r % 2 != 0 || r == 0 {
        return Err(DynamicsError::OddR(r));
    }
    let z = Rational::zero;
    Ok([
        [rat(r as i64, 2), rat_i(1), rat_i(r as i64)],
        [rat_i(1), z(), z()],
        [rat_i(-1), z(), rat_i(-1)],
    ])
}

/// The coordinate-swap involution `S` (mirror symmetry).
pub fn swap_matrix() -> Mat3 {
    let z = Rational::zero;
    [
        [z(), rat_i(1), z()],
        [rat_i(1), z(), z()],
        [z(), z(), rat_i(1)],
    ]
}

/// Exact product of 3x3 rational matrices.
pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut acc = Rational::zero();
            for (k, row) in b.iter().enumerate() {
                acc += &a[i][k] * &row[j];
            }
            acc
        })
    })
}

/// Applies a rational matrix to the (possibly surd) coordinates of a class.
pub fn mat_apply(m: &Mat3, v: &SymClass) -> SymClass {
    let coords = [&v.d1, &v.d2, &v.e];
    let out: Vec<Surd> = m
        .iter()
        .map(|row| {
            let mut acc = Surd::zero();
            for (c, x) in row.iter().zip(coords) {
                acc = acc.checked_add(&x.scale(c)).expect("common radicand");
            }
            acc
        })
        .collect();
    let [d1, d2, e]: [Surd; 3] = out.try_into().unwrap();
    SymClass::new(v.r, d1, d2, e)
}

/// `T_r^n(v)` by exact iterated matrix application (inverse for `n < 0`).
pub fn t_apply(r: u32, v: &SymClass, n: i64) -> Result<SymClass, DynamicsError> {
    let m = if n >= 0 { t_matrix(r)? } else { t_matrix_inv(r)? };
    let mut out = v.clone();
    for _ in 0..n.unsigned_abs() {
        out = mat_apply(&m, &out);
    }
    Ok(out)
}

/// Seeds `(s_{-1}, s_0, s_1)` for one of the three standard sequences.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Seq {
    /// p: 0, 0, r
    P,
    /// m: 1, -1, 1
    M,
    /// q: 1, 0, 1
    Q,
}

/// The three bidirectional integer sequences attached to an even r, all
/// satisfying `s_n = ((r-2)/2)(s_{n-1} - s_{n-2}) + s_{n-3}` in both
/// directions, with seeds at indices -1, 0, 1:
///
/// ```text
///   p: 0,  0, r      (degrees of the effective generators C_n)
///   m: 1, -1, 1      (multiplicities of the C_n)
///   q: 1,  0, 1      (degrees of the nef generators xi_n)
/// ```
///
/// Terms are memoized in both directions; shared instances are safe for
/// concurrent use.
pub struct SequenceTriple {
    r: u32,
    memo: Mutex<HashMap<(u8, i64), BigInt>>,
}

impl SequenceTriple {
    pub fn new(r: u32) -> Result<SequenceTriple, DynamicsError> {
        if r % 2 != 0 || r == 0 {
            return Err(DynamicsError::OddR(r));
        }
        Ok(SequenceTriple {
            r,
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    fn seed(which: Seq, r: u32, n: i64) -> Option<BigInt> {
        let t = match (which, n) {
            (Seq::P, -1) | (Seq::P, 0) | (Seq::Q, 0) => 0,
            (Seq::P, 1) => r as i64,
            (Seq::M, -1) | (Seq::M, 1) | (Seq::Q, -1) | (Seq::Q, 1) => 1,
            (Seq::M, 0) => -1,
            _ => return None,
        };
        Some(BigInt::from(t))
    }

    fn term(&self, which: Seq, n: i64) -> BigInt {
        if let Some(s) = Self::seed(which, self.r, n) {
            return s;
        }
        let key = (which as u8, n);
        if let Some(v) = self.memo.lock().unwrap().get(&key) {
            return v.clone();
        }
        let c = BigInt::from((self.r as i64 - 2) / 2);
        let v = if n > 1 {
            // s_n = c (s_{n-1} - s_{n-2}) + s_{n-3}
            &c * (self.term(which, n - 1) - self.term(which, n - 2)) + self.term(which, n - 3)
        } else {
            // s_n = s_{n+3} - c (s_{n+2} - s_{n+1})
            self.term(which, n + 3) - &c * (self.term(which, n + 2) - self.term(which, n + 1))
        };
        self.memo.lock().unwrap().insert(key, v.clone());
        v
    }

    pub fn p(&self, n: i64) -> BigInt {
        self.term(Seq::P, n)
    }

    pub fn m(&self, n: i64) -> BigInt {
        self.term(Seq::M, n)
    }

    pub fn q(&self, n: i64) -> BigInt {
        self.term(Seq::Q, n)
    }

    /// Slope `q_{n+1}/q_n` of the nef generator `xi_n` (defined for `q_n != 0`).
    pub fn xi_slope(&self, n: i64) -> Option<Rational> {
        let den = self.q(n);
        if den.is_zero() {
            None
        } else {
            Some(Rational::new(self.q(n + 1), den))
        }
    }
}

/// The nef-cone generator `xi_n = T_r^n(F2) = (q_n, q_{n+1}, -sqrt(2 q_n q_{n+1}/r))`.
pub fn xi(seqs: &SequenceTriple, n: i64) -> SymClass {
    let r = seqs.r();
    let qn = seqs.q(n);
    let qn1 = seqs.q(n + 1);
    let rad = Rational::new(BigInt::from(2) * &qn * &qn1, BigInt::from(r as i64));
    debug_assert!(!rad.is_negative(), "q_n q_{{n+1}} >= 0 along the orbit of F2");
    let e = -Surd::sqrt_of(&rad).expect("nonnegative radicand");
    SymClass::new(
        r,
        Surd::from_rational(Rational::from(qn)),
        Surd::from_rational(Rational::from(qn1)),
        e,
    )
}

/// The effective-cone generator `C_n = T_r^n(E) = (p_{n-1}, p_n, -m_n)`.
pub fn curve_c(seqs: &SequenceTriple, n: i64) -> SymClass {
    let r = seqs.r();
    SymClass::new(
        r,
        Surd::from_rational(Rational::from(seqs.p(n - 1))),
        Surd::from_rational(Rational::from(seqs.p(n))),
        Surd::from_rational(Rational::from(-seqs.m(n))),
    )
}

/// Closed form for `xi_n` when r = 8 (`T_8` is unipotent):
/// `(n^2, (n+1)^2, -n(n+1)/2)`.
pub fn xi8_closed(n: i64) -> SymClass {
    SymClass::from_ints(8, n * n, (n + 1) * (n + 1), -(n * (n + 1)) / 2)
}

/// Closed form for `C_n` when r = 8: `(4n(n-1), 4n(n+1), 1-2n^2)`.
pub fn c8_closed(n: i64) -> SymClass {
    SymClass::from_ints(8, 4 * n * (n - 1), 4 * n * (n + 1), 1 - 2 * n * n)
}

/// Eigen-data of `T_r` for even `r >= 8`: the expansion rates `alpha`, `beta`
/// and the fixed rays `v_alpha`, `v_beta` (square-zero) and the canonical
/// class (eigenvalue 1).
pub struct SpectralData {
    pub r: u32,
    pub alpha: Surd,
    pub beta: Surd,
    pub v_alpha: SymClass,
    pub v_beta: SymClass,
    pub k_class: SymClass,
}

impl SpectralData {
    pub fn new(r: u32) -> Result<SpectralData, DynamicsError> {
        if r % 2 != 0 {
            return Err(DynamicsError::OddR(r));
        }
        if r < 8 {
            return Err(DynamicsError::SmallR(r, 8));
        }
        // Roots of t^2 - ((r-4)/2) t + 1: ((r-4) +- sqrt(r(r-8)))/4.
        let ri = r as i64;
        let disc = (r as u64) * (r as u64 - 8);
        let alpha = Surd::new(rat(ri - 4, 4), rat(1, 4), disc);
        let beta = Surd::new(rat(ri - 4, 4), rat(-1, 4), disc);
        // v_alpha = (1/(alpha+1), alpha/(alpha+1), -2/r); v_beta swaps the
        // first two coordinates.
        let ap1 = alpha.checked_add(&Surd::one()).expect("rational add");
        let inv = ap1.recip().expect("alpha + 1 > 0");
        let v_alpha = SymClass::new(
            r,
            inv.clone(),
            alpha.checked_mul(&inv).expect("same radicand"),
            Surd::from_rational(rat(-2, ri)),
        );
        let v_beta = v_alpha.swap();
        Ok(SpectralData {
            r,
            alpha,
            beta,
            v_alpha,
            v_beta,
            k_class: SymClass::canonical(r),
        })
    }
}

/// A floating value computed at high precision together with its certified
/// error radius `2^-bits` (validated by recomputation at two guard
/// precisions).
#[derive(Clone, Debug)]
pub struct Certified {
    pub value: BigFloat,
    pub bits: usize,
}

impl Certified {
    /// Radius of the certification interval, `2^-bits`.
    pub fn radius(&self) -> BigFloat {
        BigFloat::from_parts(dashu_int::IBig::from(1), -(self.bits as isize))
    }
}

fn surd_to_fbig(x: &Surd, bits: usize) -> BigFloat {
    x.to_fbig(bits)
}

/// Floating intersection pairing (same Gram matrix as the exact one).
fn pair_fbig(v: &SymClass, w: &SymClass, bits: usize) -> BigFloat {
    let f = |x: &Surd| surd_to_fbig(x, bits);
    f(&v.d1) * f(&w.d2) + f(&v.d2) * f(&w.d1)
        - BigFloat::from(v.r) * f(&v.e) * f(&w.e)
}

fn phi_at(spec: &SpectralData, v: &SymClass, bits: usize) -> Result<BigFloat, DynamicsError> {
    let a = pair_fbig(v, &spec.v_alpha, bits);
    let b = pair_fbig(v, &spec.v_beta, bits);
    // Scale-invariant eigenray detection: compare against the class size.
    let scale = pair_fbig(v, &spec.k_class, bits) * pair_fbig(v, &spec.k_class, bits)
        + &a * &a
        + &b * &b;
    let tiny = BigFloat::from_parts(dashu_int::IBig::from(1), -(bits as isize / 2)) * scale;
    if dashu_base::Abs::abs(a.clone()) < tiny || dashu_base::Abs::abs(b.clone()) < tiny {
        return Err(DynamicsError::OnEigenRay);
    }
    if a.sign() != b.sign() {
        return Err(DynamicsError::OutsideChartDomain);
    }
    let ratio = b / a;
    let alpha = spec.alpha.to_fbig(bits);
    Ok(ratio.ln() / (BigFloat::from(2) * alpha.ln()))
}

/// The chart `phi_r(v) = ln((v . v_beta)/(v . v_alpha)) / (2 ln alpha_r)` for
/// even `r >= 10`, evaluated at `bits` bits of precision.
///
/// Requires `v` exactly square-zero and not on an eigenray of `T_r`.
/// Properties: `phi_r(lambda v) = phi_r(v)`, `phi_r(T_r^n v) = phi_r(v) + n`,
/// `phi_r(F2) = 1/2`.  This is a diagnostic/chart surface only; the exact
/// integer method in `seshadri` is the source of truth for index finding.
pub fn phi_r(r: u32, v: &SymClass, bits: usize) -> Result<Certified, DynamicsError> {
    if r % 2 != 0 {
        return Err(DynamicsError::OddR(r));
    }
    if r < 10 {
        return Err(DynamicsError::SmallR(r, 10));
    }
    if v.self_pair()?.sign() != 0 {
        return Err(DynamicsError::NotSquareZero);
    }
    let spec = SpectralData::new(r)?;
    // Adaptive a-posteriori validation: cancellation in the eigen-pairings
    // grows with the orbit index, so escalate the working precision until two
    // successive evaluations agree within the requested radius.
    let bound = BigFloat::from_parts(dashu_int::IBig::from(1), -(bits as isize));
    let mut extra = 64usize;
    let mut prev = phi_at(&spec, v, bits + extra)?;
    loop {
        extra *= 2;
        let next = phi_at(&spec, v, bits + extra)?;
        let diff = dashu_base::Abs::abs(prev - next.clone());
        if diff < bound {
            return Ok(Certified { value: next, bits });
        }
        if extra > 64 * 1024 {
            return Err(DynamicsError::OnEigenRay);
        }
        prev = next;
    }
}

/// Real-coordinate class: floating `(d1, d2, e)` coordinates over r points.
#[derive(Clone, Debug)]
pub struct RealClass {
    pub r: u32,
    pub coords: [BigFloat; 3],
}

/// The real power `T_r^s` applied to `v`, via the eigenbasis:
/// `T_r^s(x v_alpha + y v_beta + z K) = alpha^s x v_alpha + alpha^-s y v_beta + z K`.
///
/// For integer `s` this agrees with [`t_apply`] to the working precision.
pub fn t_real_power(
    r: u32,
    v: &SymClass,
    s: &Rational,
    bits: usize,
) -> Result<RealClass, DynamicsError> {
    if r % 2 != 0 {
        return Err(DynamicsError::OddR(r));
    }
    if r < 10 {
        return Err(DynamicsError::SmallR(r, 10));
    }
    let spec = SpectralData::new(r)?;
    let work = bits + 64;
    // Dual decomposition: pairing with v_beta reads off the v_alpha-coordinate.
    let vab = pair_fbig(&spec.v_alpha, &spec.v_beta, work);
    let kk = pair_fbig(&spec.k_class, &spec.k_class, work);
    let x = pair_fbig(v, &spec.v_beta, work) / &vab;
    let y = pair_fbig(v, &spec.v_alpha, work) / &vab;
    let z = pair_fbig(v, &spec.k_class, work) / &kk;
    let alpha = spec.alpha.to_fbig(work);
    let sf = rational_to_fbig(s, work);
    let growth = (alpha.ln() * &sf).exp();
    let shrink = growth.clone().powi((-1).into());
    let coord = |i: usize| {
        let pick = |c: &SymClass| surd_to_fbig([&c.d1, &c.d2, &c.e][i], work);
        &x * &growth * pick(&spec.v_alpha)
            + &y * &shrink * pick(&spec.v_beta)
            + &z * pick(&spec.k_class)
    };
    Ok(RealClass {
        r,
        coords: [coord(0), coord(1), coord(2)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use std::cmp::Ordering;

    fn seqs(r: u32) -> SequenceTriple {
        SequenceTriple::new(r).unwrap()
    }

    #[test]
    fn rejects_odd_r() {
        assert!(matches!(t_matrix(9), Err(DynamicsError::OddR(9))));
        assert!(matches!(
            SequenceTriple::new(7),
            Err(DynamicsError::OddR(7))
        ));
    }

    #[test]
    fn t_apply_examples() {
        // T_10(E) = (0,10,-1)
        let e = SymClass::exceptional(10);
        assert_eq!(
            t_apply(10, &e, 1).unwrap(),
            SymClass::from_ints(10, 0, 10, -1)
        );
        // identity power
        let v = SymClass::from_ints(10, 3, 4, -2);
        assert_eq!(t_apply(10, &v, 0).unwrap(), v);
        // inverse really inverts
        let w = t_apply(10, &v, 5).unwrap();
        assert_eq!(t_apply(10, &w, -5).unwrap(), v);
    }

    #[test]
    fn sequence_seeds_and_values() {
        let s = seqs(10);
        assert_eq!(s.p(1), BigInt::from(10));
        assert_eq!(s.p(2), BigInt::from(40));
        assert_eq!(s.m(2), BigInt::from(9));
        assert_eq!(s.q(2), BigInt::from(5));
        assert_eq!(s.q(3), BigInt::from(16));
        // q_2 = r/2, q_3 = (r-2)^2/4, q_4 = r(r-4)^2/8 for assorted r.
        for r in [10u32, 12, 20, 34] {
            let s = seqs(r);
            let ri = r as i64;
            assert_eq!(s.q(2), BigInt::from(ri / 2));
            assert_eq!(s.q(3), BigInt::from((ri - 2) * (ri - 2) / 4));
            assert_eq!(s.q(4), BigInt::from(ri * (ri - 4) * (ri - 4) / 8));
        }
    }

    #[test]
    fn sequence_symmetries() {
        for r in [2u32, 6, 8, 10, 12, 30, 60] {
            let s = seqs(r);
            for n in -50..=50i64 {
                assert_eq!(s.m(n), s.m(-n), "m symmetry at r={r}, n={n}");
                assert_eq!(s.p(n), s.p(-1 - n), "p symmetry at r={r}, n={n}");
                assert_eq!(s.q(n), s.q(-n), "q symmetry at r={r}, n={n}");
            }
        }
    }

    #[test]
    fn generator_families() {
        let s = seqs(10);
        assert_eq!(curve_c(&s, 2), SymClass::from_ints(10, 10, 40, -9));
        assert_eq!(
            curve_c(&s, 2).self_pair().unwrap(),
            Surd::from_int(-10)
        );
        let s12 = seqs(12);
        assert_eq!(xi(&s12, 1), SymClass::from_ints(12, 1, 6, -1));
        let s8 = seqs(8);
        assert_eq!(curve_c(&s8, 1), SymClass::from_ints(8, 0, 8, -1));
    }

    #[test]
    fn xi_c_orthogonality_and_norms() {
        for r in [8u32, 10, 14] {
            let s = seqs(r);
            for n in -30..=30i64 {
                let xin = xi(&s, n);
                let xin1 = xi(&s, n - 1);
                let cn = curve_c(&s, n);
                assert_eq!(xin.self_pair().unwrap(), Surd::zero(), "xi_n^2 r={r} n={n}");
                assert_eq!(
                    cn.self_pair().unwrap(),
                    Surd::from_int(-(r as i64)),
                    "C_n^2 r={r} n={n}"
                );
                assert_eq!(
                    cn.k_pair().unwrap(),
                    Surd::from_int(-(r as i64)),
                    "C_n.K r={r} n={n}"
                );
                assert_eq!(xin.pair(&cn).unwrap(), Surd::zero(), "xi_n.C_n r={r} n={n}");
                assert_eq!(
                    xin1.pair(&cn).unwrap(),
                    Surd::zero(),
                    "xi_(n-1).C_n r={r} n={n}"
                );
            }
        }
    }

    #[test]
    fn generators_match_t_orbit() {
        for r in [8u32, 10, 12] {
            let s = seqs(r);
            for n in -6..=6i64 {
                assert_eq!(xi(&s, n), t_apply(r, &SymClass::f2(r), n).unwrap());
                assert_eq!(
                    curve_c(&s, n),
                    t_apply(r, &SymClass::exceptional(r), n).unwrap()
                );
            }
        }
    }

    #[test]
    fn r8_closed_forms_match_recursion() {
        let s = seqs(8);
        for n in -30..=30i64 {
            assert_eq!(xi(&s, n), xi8_closed(n), "xi8 at n={n}");
            assert_eq!(curve_c(&s, n), c8_closed(n), "c8 at n={n}");
        }
    }

    #[test]
    fn characteristic_polynomial_annihilates() {
        for r in [2u32, 8, 10, 46] {
            let c = rat(r as i64 - 2, 2);
            for v in [
                SymClass::from_ints(r, 1, 0, 0),
                SymClass::from_ints(r, 3, -2, 5),
                SymClass::from_ints(r, 0, 0, 1),
            ] {
                // v3 - c(v2 - v1) - v0 = 0 where vk = T^k v.
                let v1 = t_apply(r, &v, 1).unwrap();
                let v2 = t_apply(r, &v, 2).unwrap();
                let v3 = t_apply(r, &v, 3).unwrap();
                let lhs = v3
                    .checked_add(&v2.scale(&-c.clone()))
                    .unwrap()
                    .checked_add(&v1.scale(&c))
                    .unwrap();
                assert_eq!(lhs, v, "char poly fails at r={r}");
            }
        }
    }

    #[test]
    fn spectral_data_relations() {
        for r in (10..=60u32).step_by(2) {
            let sd = SpectralData::new(r).unwrap();
            assert_eq!(
                sd.alpha.checked_mul(&sd.beta).unwrap(),
                Surd::one(),
                "alpha beta = 1 at r={r}"
            );
            assert_eq!(
                sd.alpha.checked_add(&sd.beta).unwrap(),
                Surd::from_rational(rat(r as i64 - 4, 2)),
                "alpha + beta at r={r}"
            );
            // Eigenvector equations.
            assert_eq!(
                mat_apply(&t_matrix(r).unwrap(), &sd.v_alpha),
                SymClass::new(
                    r,
                    sd.v_alpha.d1.checked_mul(&sd.alpha).unwrap(),
                    sd.v_alpha.d2.checked_mul(&sd.alpha).unwrap(),
                    sd.v_alpha.e.checked_mul(&sd.alpha).unwrap()
                ),
                "T v_alpha = alpha v_alpha at r={r}"
            );
            assert_eq!(
                mat_apply(&t_matrix(r).unwrap(), &sd.k_class),
                sd.k_class,
                "T K = K at r={r}"
            );
            // Null pairings and the (r-8)/r cross pairing.
            assert_eq!(sd.v_alpha.self_pair().unwrap(), Surd::zero());
            assert_eq!(sd.v_alpha.pair(&sd.k_class).unwrap(), Surd::zero());
            assert_eq!(
                sd.v_alpha.pair(&sd.v_beta).unwrap(),
                Surd::from_rational(rat(r as i64 - 8, r as i64))
            );
        }
        // r=8 degenerates to the unipotent case: alpha = beta = 1 and
        // v_alpha = -K/4.
        let sd8 = SpectralData::new(8).unwrap();
        assert_eq!(sd8.alpha, Surd::one());
        assert_eq!(sd8.beta, Surd::one());
        assert_eq!(sd8.v_alpha, sd8.k_class.scale(&rat(-1, 4)));
    }

    #[test]
    fn alpha_bracket() {
        // (r-5)/2 <= alpha_r < (r-4)/2 for r >= 9 (even r here; odd r has no
        // lattice T_r but the surd alpha_r still makes sense via the same
        // quadratic -- checked in seshadri for odd r).
        for r in (10..=60u32).step_by(2) {
            let sd = SpectralData::new(r).unwrap();
            let lo = Surd::from_rational(rat(r as i64 - 5, 2));
            let hi = Surd::from_rational(rat(r as i64 - 4, 2));
            assert_ne!(sd.alpha.cmp_value(&lo).unwrap(), Ordering::Less);
            assert_eq!(sd.alpha.cmp_value(&hi).unwrap(), Ordering::Less);
        }
    }

    #[test]
    fn group_law_sanity() {
        for r in [2u32, 8, 10, 60] {
            let s = swap_matrix();
            let sts = mat_mul(&mat_mul(&s, &t_matrix(r).unwrap()), &s);
            assert_eq!(sts, t_matrix_inv(r).unwrap(), "S T S = T^-1 at r={r}");
        }
    }

    #[test]
    fn phi_values() {
        for r in [10u32, 12, 34] {
            let f2 = SymClass::f2(r);
            let phi = phi_r(r, &f2, 192).unwrap();
            let half = rational_to_fbig(&rat(1, 2), 288);
            assert!(
                dashu_base::Abs::abs(phi.value.clone() - half) < phi.radius(),
                "phi(F2) = 1/2 at r={r}"
            );
            // phi(T^n F2) = n + 1/2
            let s = seqs(r);
            for n in [-3i64, 1, 4] {
                let phin = phi_r(r, &xi(&s, n), 192).unwrap();
                let expect = rational_to_fbig(&rat(2 * n + 1, 2), 288);
                assert!(
                    dashu_base::Abs::abs(phin.value.clone() - expect) < phin.radius(),
                    "phi(xi_n) at r={r}, n={n}"
                );
            }
            // phi(v+-) = 0 for v+- = (1,1,+-sqrt(2/r)).
            let vplus = SymClass::new(
                r,
                Surd::one(),
                Surd::one(),
                Surd::sqrt_of(&rat(2, r as i64)).unwrap(),
            );
            let phi0 = phi_r(r, &vplus, 192).unwrap();
            assert!(
                dashu_base::Abs::abs(phi0.value.clone()) < phi0.radius(),
                "phi(v+) = 0 at r={r}"
            );
            // Scale invariance.
            let phi_scaled = phi_r(r, &f2.scale(&rat(7, 3)), 192).unwrap();
            assert!(
                dashu_base::Abs::abs(phi_scaled.value.clone() - phi.value.clone())
                    < phi.radius()
            );
        }
    }

    #[test]
    fn phi_error_cases() {
        // Not square-zero.
        assert!(matches!(
            phi_r(10, &SymClass::from_ints(10, 1, 1, 0), 128),
            Err(DynamicsError::NotSquareZero)
        ));
        // Eigenray.
        let sd = SpectralData::new(10).unwrap();
        assert!(matches!(
            phi_r(10, &sd.v_alpha, 128),
            Err(DynamicsError::OnEigenRay)
        ));
        // Odd r rejected.
        assert!(matches!(
            phi_r(9, &SymClass::f2(9), 128),
            Err(DynamicsError::OddR(9))
        ));
    }

    #[test]
    fn t_real_power_consistency() {
        let r = 12u32;
        let f2 = SymClass::f2(r);
        // s = 1 agrees with the exact matrix to high precision.
        let tv = t_real_power(r, &f2, &rat_i(1), 200).unwrap();
        let exact = t_apply(r, &f2, 1).unwrap();
        let tol = BigFloat::from_parts(dashu_int::IBig::from(1), -180);
        for (float_c, exact_c) in tv.coords.iter().zip([&exact.d1, &exact.d2, &exact.e]) {
            let diff = dashu_base::Abs::abs(float_c.clone() - exact_c.to_fbig(300));
            assert!(diff < tol, "T^1 float vs exact, diff = {diff}");
        }
        // T^s fixes K for fractional s.
        let k = SymClass::canonical(r);
        let tk = t_real_power(r, &k, &rat(7, 3), 200).unwrap();
        for (float_c, exact_c) in tk.coords.iter().zip([&k.d1, &k.d2, &k.e]) {
            let diff = dashu_base::Abs::abs(float_c.clone() - exact_c.to_fbig(300));
            assert!(diff < tol, "T^s K = K, diff = {diff}");
        }
        // phi(T^s v) = phi(v) + s for square-zero v.
        let s = rat(5, 2);
        let tv2 = t_real_power(r, &xi(&seqs(r), 1), &s, 200).unwrap();
        // Rebuild an approximate SymClass is not possible exactly; instead
        // check the defining property through the eigen-pairings directly.
        let sd = SpectralData::new(r).unwrap();
        let a = {
            let f = |x: &Surd| x.to_fbig(264);
            tv2.coords[0].clone() * f(&sd.v_alpha.d2)
                + tv2.coords[1].clone() * f(&sd.v_alpha.d1)
                - BigFloat::from(r) * tv2.coords[2].clone() * f(&sd.v_alpha.e)
        };
        let b = {
            let f = |x: &Surd| x.to_fbig(264);
            tv2.coords[0].clone() * f(&sd.v_beta.d2)
                + tv2.coords[1].clone() * f(&sd.v_beta.d1)
                - BigFloat::from(r) * tv2.coords[2].clone() * f(&sd.v_beta.e)
        };
        let phi_after = (b / a).ln() / (BigFloat::from(2) * sd.alpha.to_fbig(264).ln());
        let phi_before = phi_r(r, &xi(&seqs(r), 1), 200).unwrap();
        let expect = phi_before.value + rational_to_fbig(&s, 264);
        assert!(
            dashu_base::Abs::abs(phi_after - expect)
                < BigFloat::from_parts(dashu_int::IBig::from(1), -150)
        );
    }
}
