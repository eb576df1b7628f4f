//! The r-point Seshadri constant `epsilon_r(L)` of an ample bundle
//! `L = O(e1, e2)`, exact wherever an exact value is known and certified
//! bounds on the inner slope region.
//!
//! Branch structure:
//! - `r <= 7`: every ample bundle is outer; a finite piecewise-linear table
//!   driven by the catalogued negative curves.
//! - `r = 8`: slope 1 attains the square-zero bound `eta = e1/2`; other
//!   slopes are computed by the orbit curves `C_n` (the closed-form family
//!   `(4n(n-1), 4n(n+1), 1-2n^2)`).
//! - even `r >= 10`, outer slope: the orbit curve `C_n` with `n` located by
//!   pure integer arithmetic on the `q`-sequence ([`find_n_even`]).
//! - odd `r >= 9`, slope outside `(1/s(r), s(r))`: four exact linear
//!   branches with breakpoints `2/(r+1)`, `1/s(r)`, `s(r)`, `(r+1)/2`.
//! - otherwise (the inner region): `Bounded{lower, upper = eta}` with an
//!   exact single-radical lower bound, upgraded to `Exact = eta` when the
//!   ray carries a square-zero nef certificate from [`crate::nefgen`].
//!
//! Every Exact value satisfies `value <= eta_r(L)`, and every witness `W`
//! reproduces the value through the uniform pairing rule
//! `epsilon = (e1 W.d2 + e2 W.d1) / (r |W.e|)`.

use crate::dynamics::{self, DynamicsError, SequenceTriple};
use crate::exact::{rat, rat_i, ExactError, Rational, Surd};
use crate::lattice::{AmpleBundle, LatticeError, SymClass};
use crate::nefgen::{self, CertifiedNefClass};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Errors from Seshadri-constant computation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeshadriError {
    /// The slope lies in the inner interval; the integer n-finder is
    /// undefined there.
    #[error("bundle slope is inner; no orbit index exists")]
    InnerBundle,
    /// Operation defined only for even r.
    #[error("operation requires even r, got {0}")]
    EvenRRequired(u32),
    /// Operation defined only for odd r.
    #[error("operation requires odd r >= 9, got {0}")]
    OddRRequired(u32),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// The numerical upper bound `eta_r(L) = sqrt(2 e1 e2 / r)`, folded to a
/// rational when the radicand is a perfect square.
pub fn eta(r: u32, l: &AmpleBundle) -> Surd {
    let sq = rat_i(2) * l.e1() * l.e2() / rat_i(r as i64);
    Surd::sqrt_of(&sq).expect("positive radicand")
}

/// The larger root `alpha_r = ((r-4) + sqrt(r(r-8)))/4` of
/// `t^2 - ((r-4)/2) t + 1`, for r >= 8 of either parity.
pub fn alpha_surd(r: u32) -> Surd {
    assert!(r >= 8);
    Surd::new(
        rat(r as i64 - 4, 4),
        rat(1, 4),
        (r as u64) * (r as u64 - 8),
    )
}

/// Inner test: slope in `[beta_r, alpha_r]`, equivalently
/// `r e1 e2 >= 2 (e1 + e2)^2` — a pure rational inequality.
pub fn inner_test(r: u32, l: &AmpleBundle) -> bool {
    let lhs = rat_i(r as i64) * l.e1() * l.e2();
    let sum = l.e1() + l.e2();
    let rhs = rat_i(2) * &sum * &sum;
    lhs >= rhs
}

/// The threshold `s(r) = (2r + 1 - sqrt(12r + 1))/4` for odd r >= 9.
pub fn s_of_r(r: u32) -> Result<Surd, SeshadriError> {
    if r % 2 == 0 || r < 9 {
        return Err(SeshadriError::OddRRequired(r));
    }
    Ok(Surd::new(
        rat(2 * r as i64 + 1, 4),
        rat(-1, 4),
        12 * r as u64 + 1,
    ))
}

/// Whether the bracket `(sqrt(r)-1)^2/2 < s(r) < alpha_r` holds, decided by
/// the exact cross-radicand comparator.  True for odd r in [11, 99]; false
/// at r = 9, where `alpha_9 = 2` is rational and `s(9) = (19 - sqrt(109))/4`
/// exceeds it.
pub fn s_bracket_holds(r: u32) -> Result<bool, SeshadriError> {
    let s = s_of_r(r)?;
    // (sqrt(r) - 1)^2 / 2 = (r+1)/2 - sqrt(r)
    let low = Surd::new(rat(r as i64 + 1, 2), rat_i(-1), r as u64);
    let alpha = alpha_surd(r);
    Ok(low.cmp_value_general(&s) == Ordering::Less
        && s.cmp_value_general(&alpha) == Ordering::Less)
}

/// The orbit index for even r >= 10 and an outer bundle: the smallest
/// `n >= 1` with `e2 q_n - e1 q_{n+1} >= 0` when `e2 >= e1`, and the
/// mirrored negative index `-n` (witness `C_{-n} = swap(C_n)`) when
/// `e1 > e2`.  Pure integer arithmetic.
pub fn find_n_even(r: u32, l: &AmpleBundle) -> Result<i64, SeshadriError> {
    if r % 2 != 0 || r < 10 {
        return Err(SeshadriError::EvenRRequired(r));
    }
    if inner_test(r, l) {
        return Err(SeshadriError::InnerBundle);
    }
    let (e1, e2, mirror) = if l.e2() >= l.e1() {
        (l.e1().clone(), l.e2().clone(), false)
    } else {
        (l.e2().clone(), l.e1().clone(), true)
    };
    let seqs = SequenceTriple::new(r)?;
    let mut n = 1i64;
    loop {
        let lhs = &e2 * Rational::from(seqs.q(n)) - &e1 * Rational::from(seqs.q(n + 1));
        if !lhs.is_negative() {
            return Ok(if mirror { -n } else { n });
        }
        n += 1;
        assert!(n < 1 << 20, "q-slopes decrease to alpha; outer slope must be hit");
    }
}

/// The value of an epsilon computation: exact, or a certified two-sided
/// bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EpsilonKind {
    Exact { value: Surd },
    Bounded { lower: Surd, upper: Surd },
}

/// Result of [`epsilon`]: the value, the witness class achieving it (the
/// curve `C` with `epsilon = L.C / (r m)`, or the square-zero certificate on
/// certified rays), and a human-readable branch note.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeshadriValue {
    pub r: u32,
    #[serde(flatten)]
    pub kind: EpsilonKind,
    pub witness: Option<SymClass>,
    pub note: String,
}

impl SeshadriValue {
    pub fn exact_value(&self) -> Option<&Surd> {
        match &self.kind {
            EpsilonKind::Exact { value } => Some(value),
            EpsilonKind::Bounded { .. } => None,
        }
    }

    pub fn upper(&self) -> &Surd {
        match &self.kind {
            EpsilonKind::Exact { value } => value,
            EpsilonKind::Bounded { upper, .. } => upper,
        }
    }

    pub fn lower(&self) -> &Surd {
        match &self.kind {
            EpsilonKind::Exact { value } => value,
            EpsilonKind::Bounded { lower, .. } => lower,
        }
    }
}

/// Evaluates the uniform witness rule
/// `(e1 W.d2 + e2 W.d1) / (r |W.e|)` for a rational witness class.
pub fn witness_value(l: &AmpleBundle, w: &SymClass) -> Option<Rational> {
    let d1 = w.d1.as_rational()?;
    let d2 = w.d2.as_rational()?;
    let m = -w.e.as_rational()?;
    if !m.is_positive() {
        return None;
    }
    Some((l.e1() * d2 + l.e2() * d1) / (rat_i(w.r as i64) * m))
}

fn exact_from_witness(r: u32, l: &AmpleBundle, w: SymClass, note: &str) -> SeshadriValue {
    let value = witness_value(l, &w).expect("witness classes are rational with m > 0");
    SeshadriValue {
        r,
        kind: EpsilonKind::Exact {
            value: Surd::from_rational(value),
        },
        witness: Some(w),
        note: note.to_string(),
    }
}

/// Breakpoints and witness classes for the finite tables, r <= 7.  Branch i
/// applies when `slope <= breaks[i]` (first match; the last witness covers
/// the tail).  Adjacent branch formulas agree at each breakpoint.
pub fn small_r_witnesses(r: u32) -> (Vec<Rational>, Vec<SymClass>) {
    let w = |d1: i64, d2: i64, m: i64| SymClass::from_ints(r, d1, d2, -m);
    let ri = r as i64;
    match r {
        1 | 2 => (vec![rat(1, 1)], vec![w(ri, 0, 1), w(0, ri, 1)]),
        3 => (
            vec![rat(1, 2), rat(2, 1)],
            vec![w(3, 0, 1), w(1, 1, 1), w(0, 3, 1)],
        ),
        4 => (
            vec![rat(1, 2), rat(2, 1)],
            vec![w(4, 0, 1), w(4, 4, 3), w(0, 4, 1)],
        ),
        5 => (
            vec![rat(1, 3), rat(1, 1), rat(3, 1)],
            vec![w(5, 0, 1), w(2, 1, 1), w(1, 2, 1), w(0, 5, 1)],
        ),
        6 => (
            vec![rat(1, 3), rat(3, 4), rat(4, 3), rat(3, 1)],
            vec![
                w(6, 0, 1),
                w(12, 6, 5),
                w(12, 12, 7),
                w(6, 12, 5),
                w(0, 6, 1),
            ],
        ),
        // r = 7 is the first rank where symmetrizations of high-degree
        // (-1)-curves enter the envelope: the (28, 21, -13) class (and its
        // mirror) comes from bidegree-(4, 3) curves with multiplicities
        // 2,2,2,2,2,2,1.  Dropping it would push the middle branches past the
        // square-zero bound eta near slopes 8/11 and 11/8.
        7 => (
            vec![
                rat(1, 4),
                rat(8, 11),
                rat(7, 8),
                rat(8, 7),
                rat(11, 8),
                rat(4, 1),
            ],
            vec![
                w(7, 0, 1),
                w(3, 1, 1),
                w(28, 21, 13),
                w(28, 28, 15),
                w(21, 28, 13),
                w(1, 3, 1),
                w(0, 7, 1),
            ],
        ),
        _ => unreachable!("small_r_witnesses is defined for r <= 7"),
    }
}

fn epsilon_small_r(r: u32, l: &AmpleBundle) -> SeshadriValue {
    let t = l.slope();
    let (breaks, witnesses) = small_r_witnesses(r);
    let idx = breaks
        .iter()
        .position(|b| &t <= b)
        .unwrap_or(breaks.len());
    exact_from_witness(r, l, witnesses[idx].clone(), "finite table branch")
}

fn epsilon_r8(r: u32, l: &AmpleBundle) -> SeshadriValue {
    debug_assert_eq!(r, 8);
    if l.e1() == l.e2() {
        // Slope 1: the square-zero bound is attained; certificate is the
        // anticanonical square-zero nef ray.
        let value = eta(8, l);
        debug_assert_eq!(
            value,
            Surd::from_rational(l.e1() / rat_i(2)),
            "eta_8 at slope 1 is e1/2"
        );
        return SeshadriValue {
            r,
            kind: EpsilonKind::Exact { value },
            witness: Some(SymClass::from_ints(8, 2, 2, -1)),
            note: "slope-1 square-zero certificate".into(),
        };
    }
    // Mirror so the working slope exceeds 1; smallest n >= 1 with
    // n^2 e2 >= (n+1)^2 e1.
    let mirror = l.e1() > l.e2();
    let (e1, e2) = if mirror {
        (l.e2().clone(), l.e1().clone())
    } else {
        (l.e1().clone(), l.e2().clone())
    };
    let mut n = 1i64;
    while rat_i(n * n) * &e2 < rat_i((n + 1) * (n + 1)) * &e1 {
        n += 1;
    }
    let mut w = dynamics::c8_closed(n);
    if mirror {
        w = w.swap();
    }
    exact_from_witness(r, l, w, "orbit curve intersection")
}

/// Looks for a certificate whose ray contains `L`'s slope; on a hit the
/// inner value is exactly `eta`.
fn certificate_for_slope<'a>(
    l: &AmpleBundle,
    certs: &'a [CertifiedNefClass],
) -> Option<&'a CertifiedNefClass> {
    let t = l.slope();
    certs.iter().find(|c| c.slope().as_ref() == Some(&t))
}

fn bounded_inner(r: u32, l: &AmpleBundle, certs: &[CertifiedNefClass]) -> SeshadriValue {
    let hit = certificate_for_slope(l, certs)
        .cloned()
        .or_else(|| nefgen::certificate_for_slope(r, &l.slope()));
    if let Some(cert) = hit {
        return SeshadriValue {
            r,
            kind: EpsilonKind::Exact { value: eta(r, l) },
            witness: Some(cert.cls.clone()),
            note: "inner ray with square-zero nef certificate".into(),
        };
    }
    // Lower bound eta * (1 - 1/(5r))^(1/2) (odd) or eta * (1 - 2/(9r))^(1/2)
    // (even): a single radical, kept exact.
    let eta_sq = rat_i(2) * l.e1() * l.e2() / rat_i(r as i64);
    let factor = if r % 2 == 1 {
        rat(5 * r as i64 - 1, 5 * r as i64)
    } else {
        rat(9 * r as i64 - 2, 9 * r as i64)
    };
    let lower = Surd::sqrt_of(&(eta_sq * factor)).expect("positive radicand");
    SeshadriValue {
        r,
        kind: EpsilonKind::Bounded {
            lower,
            upper: eta(r, l),
        },
        witness: None,
        note: "inner region: certified bounds, closed inner interval".into(),
    }
}

fn epsilon_odd(r: u32, l: &AmpleBundle, certs: &[CertifiedNefClass]) -> Result<SeshadriValue, SeshadriError> {
    let t = l.slope();
    let ri = r as i64;
    let t_surd = Surd::from_rational(t.clone());
    if t <= rat(2, ri + 1) {
        return Ok(exact_from_witness(r, l, SymClass::from_ints(r, ri, 0, -1), "low-slope branch"));
    }
    let s = s_of_r(r)?;
    let s_inv = s.recip()?;
    if t_surd.cmp_value(&s_inv)? != Ordering::Greater {
        return Ok(exact_from_witness(
            r,
            l,
            SymClass::from_ints(r, (ri - 1) / 2, 1, -1),
            "second linear branch",
        ));
    }
    if t_surd.cmp_value(&s)? == Ordering::Less {
        return Ok(bounded_inner(r, l, certs));
    }
    if t <= rat(ri + 1, 2) {
        return Ok(exact_from_witness(
            r,
            l,
            SymClass::from_ints(r, 1, (ri - 1) / 2, -1),
            "fourth linear branch",
        ));
    }
    Ok(exact_from_witness(r, l, SymClass::from_ints(r, 0, ri, -1), "high-slope branch"))
}

fn epsilon_even(r: u32, l: &AmpleBundle, certs: &[CertifiedNefClass]) -> Result<SeshadriValue, SeshadriError> {
    if inner_test(r, l) {
        return Ok(bounded_inner(r, l, certs));
    }
    let n = find_n_even(r, l)?;
    let seqs = SequenceTriple::new(r)?;
    let w = dynamics::curve_c(&seqs, n);
    Ok(exact_from_witness(r, l, w, "orbit curve intersection"))
}

/// The Seshadri constant.  Inner rays are upgraded to `Exact = eta` via the
/// targeted slope-certificate search [`nefgen::certificate_for_slope`]; an
/// explicit pool can be supplied through [`epsilon_with_certificates`].
pub fn epsilon(r: u32, l: &AmpleBundle) -> Result<SeshadriValue, SeshadriError> {
    epsilon_with_certificates(r, l, &[])
}

/// The Seshadri constant with a caller-supplied certificate pool (used to
/// upgrade inner `Bounded` results to `Exact = eta` on certified rays).
pub fn epsilon_with_certificates(
    r: u32,
    l: &AmpleBundle,
    certs: &[CertifiedNefClass],
) -> Result<SeshadriValue, SeshadriError> {
    assert!(r >= 1, "need at least one point");
    let result = match r {
        1..=7 => epsilon_small_r(r, l),
        8 => epsilon_r8(r, l),
        _ if r % 2 == 1 => epsilon_odd(r, l, certs)?,
        _ => epsilon_even(r, l, certs)?,
    };
    // Universal sanity law: exact values never exceed eta.
    if let EpsilonKind::Exact { value } = &result.kind {
        debug_assert_ne!(
            value.cmp_value(&eta(r, l)).expect("comparable"),
            Ordering::Greater,
            "exact epsilon must be <= eta"
        );
    }
    Ok(result)
}

/// Optional convex-hull service: the best rational `gamma` such that
/// `(e1, e2, -gamma)` is a convex combination of two certificates (any such
/// combination is nef, so `epsilon >= gamma`).  Returns the maximum over
/// certificate pairs whose slopes straddle `L`'s slope.  Offered behind this
/// explicit call because no canonical certificate set exists.
pub fn convex_hull_lower_bound(
    l: &AmpleBundle,
    certs: &[CertifiedNefClass],
) -> Option<Rational> {
    let rational = |c: &CertifiedNefClass| -> Option<(Rational, Rational, Rational)> {
        Some((
            c.cls.d1.as_rational()?.clone(),
            c.cls.d2.as_rational()?.clone(),
            -c.cls.e.as_rational()?.clone(),
        ))
    };
    let mut best: Option<Rational> = None;
    for (i, ci) in certs.iter().enumerate() {
        for cj in certs.iter().skip(i) {
            let (a1, a2, g1) = match rational(ci) {
                Some(v) => v,
                None => continue,
            };
            let (b1, b2, g2) = match rational(cj) {
                Some(v) => v,
                None => continue,
            };
            // Solve lambda (a1, a2) + (1 - lambda)(b1, b2) = mu (e1, e2).
            // Cross-multiplied: lambda [(a1 e2 - a2 e1) - (b1 e2 - b2 e1)]
            //                   = -(b1 e2 - b2 e1).
            let fa = &a1 * l.e2() - &a2 * l.e1();
            let fb = &b1 * l.e2() - &b2 * l.e1();
            let denom = &fa - &fb;
            let lambda = if denom.is_zero() {
                if !fa.is_zero() {
                    continue;
                }
                Rational::from(BigInt::from(1))
            } else {
                -fb / denom
            };
            if lambda.is_negative() || lambda > rat_i(1) {
                continue;
            }
            let one_m = rat_i(1) - &lambda;
            let c1 = &lambda * &a1 + &one_m * &b1;
            let mu = if l.e1().is_zero() {
                continue;
            } else {
                c1 / l.e1()
            };
            if !mu.is_positive() {
                continue;
            }
            let gamma = (&lambda * &g1 + &one_m * &g2) / mu;
            if best.as_ref().map_or(true, |b| &gamma > b) {
                best = Some(gamma);
            }
        }
    }
    best
}
