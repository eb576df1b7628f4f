//! Independent cross-check machinery.
//!
//! Everything here recomputes results the other modules produce, by a
//! different route:
//!
//! - [`nef_duality_epsilon`]: the even-r Seshadri constant as a raw
//!   minimum of pairings against the orbit curves `C_k`, with the curves
//!   generated by repeated matrix application (not the integer-sequence
//!   closed forms) and the minimum capped at the square-zero bound.
//! - [`regen_small_r_table`]: the r <= 7 piecewise tables rebuilt from
//!   scratch — enumerate every symmetrized (-1)-class on the corresponding
//!   blowup of the plane and take the exact lower envelope of the per-class
//!   thresholds.  This is the authority the hard-coded tables are checked
//!   against.
//! - [`regen_q_slopes`]: the nef-generator slope lists for small even r,
//!   generated from the recursion (one period), with the known catalogue
//!   discrepancy for r = 6 flagged.
//! - [`float_crosscheck`]: high-precision floating re-evaluation of exact
//!   pipelines (eigenvalues, the golden packing value, and agreement of the
//!   integer n-finder with the logarithmic chart).

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{
    mat_apply, phi_r, t_matrix, t_matrix_inv, DynamicsError, SequenceTriple, DEFAULT_PHI_BITS,
};
use crate::exact::{rat, rat_i, rational_to_fbig, ExactError, Rational, Surd};
use crate::lattice::{AmpleBundle, LatticeError, SymClass};
use crate::seshadri::{alpha_surd, eta, find_n_even, SeshadriError};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("window {window} too small: minimum attained at edge index {argmin}")]
    WindowTooSmall { window: i64, argmin: i64 },
    #[error("r = {0} must be even and >= 2")]
    EvenRRequired(u32),
    #[error("lattice operation failed: {0}")]
    Lattice(#[from] LatticeError),
    #[error("dynamics failed: {0}")]
    Dynamics(#[from] DynamicsError),
    #[error("seshadri failed: {0}")]
    Seshadri(#[from] SeshadriError),
    #[error("exact arithmetic failed: {0}")]
    Exact(#[from] ExactError),
}

/// Brute-force even-r Seshadri constant: the minimum over `|k| <= window` of
/// `C_k . pi*L / C_k . E`, capped at `eta_r(L)`.  The curves are produced by
/// iterating the isometry matrix from `C_0 = (0, 0, 1)`, and the ratios by
/// raw lattice pairings, so no code is shared with the closed-form n-finder.
/// An edge-attained minimum reports `WindowTooSmall`.
pub fn nef_duality_epsilon(r: u32, l: &AmpleBundle, window: i64) -> Result<Surd, OracleError> {
    if r % 2 != 0 || r < 2 {
        return Err(OracleError::EvenRRequired(r));
    }
    let t = t_matrix(r)?;
    let t_inv = t_matrix_inv(r)?;
    // pi*L = (e1, e2, 0) and E = (0, 0, 1) in the symmetric basis.
    let pullback_l = SymClass::new(
        r,
        Surd::from_rational(l.e1().clone()),
        Surd::from_rational(l.e2().clone()),
        Surd::zero(),
    );
    let e_class = SymClass::new(r, Surd::zero(), Surd::zero(), Surd::one());
    let c0 = SymClass::from_ints(r, 0, 0, 1);
    let s = l.slope();

    // Per-direction scan state. The ratio sequence along each half-orbit is
    // unimodal: it descends while the curve slopes approach the bundle slope,
    // bottoms out at the bracketing index, then rises towards the eigenray
    // limit (which is never below the cap). The window is therefore large
    // enough for a direction once the sequence has turned upward, or once the
    // edge curve's slope has crossed the bundle slope, or if no crossing can
    // ever happen because the bundle slope sits on the inner side of the
    // limit slope.
    struct Dir {
        prev: Option<Rational>,
        turned: bool,
        last: Option<SymClass>,
    }
    let mut dirs = [
        Dir { prev: None, turned: false, last: None },
        Dir { prev: None, turned: false, last: None },
    ];
    let mut best: Option<(Rational, i64)> = None;
    let mut consider =
        |c: &SymClass, k: i64, dir: Option<&mut Dir>| -> Result<(), OracleError> {
            let den = c.pair(&e_class)?;
            let den = den.as_rational().expect("integer curve class").clone();
            if !den.is_positive() {
                return Ok(());
            }
            let num = c.pair(&pullback_l)?;
            let ratio = num.as_rational().expect("rational pairing").clone() / den;
            if let Some(dir) = dir {
                if dir.prev.as_ref().is_some_and(|p| ratio > *p) {
                    dir.turned = true;
                }
                dir.prev = Some(ratio.clone());
                dir.last = Some(c.clone());
            }
            if best.as_ref().is_none_or(|(b, _)| ratio < *b) {
                best = Some((ratio, k));
            }
            Ok(())
        };
    let mut fwd = c0.clone();
    let mut bwd = c0.clone();
    consider(&c0, 0, None)?;
    for k in 1..=window {
        fwd = mat_apply(&t, &fwd);
        bwd = mat_apply(&t_inv, &bwd);
        let [df, db] = &mut dirs;
        consider(&fwd, k, Some(df))?;
        consider(&bwd, -k, Some(db))?;
    }

    // Curve slope d2/d1 versus the bundle slope, cross-multiplied.
    let slope_cmp = |c: &SymClass| -> Option<Ordering> {
        let d1 = c.d1.as_rational()?.clone();
        let d2 = c.d2.as_rational()?.clone();
        if d1.is_positive() {
            Some((d2 / d1).cmp(&s))
        } else {
            // Vertical or degenerate bidegree: treat the slope as +infinity.
            Some(Ordering::Greater)
        }
    };
    // Forward slopes descend to the limit slope; the backward half-orbit is
    // its mirror, ascending to the reciprocal limit. For r < 8 the orbit map
    // is elliptic (periodic rays) and any window is as good as another.
    let (fwd_ok, bwd_ok) = if r >= 8 {
        let alpha = alpha_surd(r);
        let s_surd = Surd::from_rational(s.clone());
        (
            dirs[0].turned
                || dirs[0].last.as_ref().and_then(&slope_cmp) != Some(Ordering::Greater)
                || s_surd.cmp_value_general(&alpha) != Ordering::Greater,
            dirs[1].turned
                || dirs[1].last.as_ref().and_then(&slope_cmp) != Some(Ordering::Less)
                || s_surd.cmp_value_general(&alpha.recip()?) != Ordering::Less,
        )
    } else {
        (true, true)
    };
    let cap = eta(r, l);
    match best {
        None => Ok(cap),
        Some((ratio, argmin)) => {
            if !fwd_ok || !bwd_ok {
                return Err(OracleError::WindowTooSmall { window, argmin });
            }
            let ratio_surd = Surd::from_rational(ratio);
            if ratio_surd.cmp_value(&cap)? == Ordering::Greater {
                return Ok(cap);
            }
            Ok(ratio_surd)
        }
    }
}

/// [`nef_duality_epsilon`] starting from a small window, re-run with a
/// doubled window on an edge hit.
pub fn nef_duality_epsilon_auto(r: u32, l: &AmpleBundle) -> Result<Surd, OracleError> {
    let mut window = 4;
    loop {
        match nef_duality_epsilon(r, l, window) {
            Err(OracleError::WindowTooSmall { .. }) => window *= 2,
            other => return other,
        }
    }
}

/// A symmetrized (-1)-class threshold: bidegree `(a, b)` with total
/// multiplicity `s`, giving the per-curve bound `(b e1 + a e2) / s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CurveThreshold {
    pub a: i64,
    pub b: i64,
    pub s: i64,
}

impl CurveThreshold {
    /// Value at slope t (bundle (1, t)).
    fn at(&self, t: &Rational) -> Rational {
        (rat_i(self.b) + rat_i(self.a) * t) / rat_i(self.s)
    }

    /// The symmetrized lattice class `(r a, r b, -s)`.
    pub fn sym_class(&self, r: u32) -> SymClass {
        SymClass::from_ints(r, r as i64 * self.a, r as i64 * self.b, -self.s)
            .primitive()
            .expect("integer class")
    }
}

/// All distinct symmetrized (-1)-class thresholds for r <= 7 points,
/// enumerated from the classification of (-1)-classes on the blowup of the
/// plane at r + 1 points: multiplicity patterns
/// (0; -1), (1; 1^2), (2; 1^5), (3; 2 1^6), (4; 2^3 1^5), (5; 2^6 1^2),
/// (6; 3 2^7), truncated to r + 1 points.  Each pattern is transported by
/// the standard basis change (two distinguished base points become the
/// rulings), for every ordered choice of the distinguished pair.
pub fn minus_one_thresholds(r: u32) -> Vec<CurveThreshold> {
    assert!((1..=7).contains(&r), "finite classification covers r <= 7");
    let k = (r + 1) as usize;
    let patterns: Vec<(i64, Vec<i64>)> = [
        (0, vec![-1]),
        (1, vec![1, 1]),
        (2, vec![1; 5]),
        (3, {
            let mut v = vec![2];
            v.extend([1; 6]);
            v
        }),
        (4, {
            let mut v = vec![2; 3];
            v.extend([1; 5]);
            v
        }),
        (5, {
            let mut v = vec![2; 6];
            v.extend([1; 2]);
            v
        }),
        (6, {
            let mut v = vec![3];
            v.extend([2; 7]);
            v
        }),
    ]
    .into_iter()
    .filter(|(_, m)| m.len() <= k)
    .map(|(d, mut m)| {
        m.resize(k, 0);
        (d, m)
    })
    .collect();
    let mut out: BTreeSet<CurveThreshold> = BTreeSet::new();
    for (d, ms) in &patterns {
        // Sanity: d^2 - sum m^2 = -1 and 3d - sum m = 1.
        debug_assert_eq!(d * d - ms.iter().map(|m| m * m).sum::<i64>(), -1);
        debug_assert_eq!(3 * d - ms.iter().sum::<i64>(), 1);
        for i in 0..ms.len() {
            for j in 0..ms.len() {
                if i == j {
                    continue;
                }
                let (mi, mj) = (ms[i], ms[j]);
                // Distinguished slots i, j become the rulings: bidegree
                // (d - m_j, d - m_i); the remaining multiplicities are the
                // other m's plus d - m_i - m_j at the merged point.
                let a = d - mj;
                let b = d - mi;
                let total: i64 = ms.iter().sum::<i64>() - 2 * mi - 2 * mj + d;
                if total > 0 && a >= 0 && b >= 0 {
                    out.insert(CurveThreshold { a, b, s: total });
                }
            }
        }
    }
    out.into_iter().collect()
}

/// A regenerated piecewise table: strictly increasing breakpoints and the
/// active threshold on each of the `breaks.len() + 1` intervals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegenTable {
    pub r: u32,
    pub breaks: Vec<Rational>,
    pub branches: Vec<CurveThreshold>,
}

impl RegenTable {
    /// Envelope value at slope t.
    pub fn value_at(&self, t: &Rational) -> Rational {
        let idx = self
            .breaks
            .iter()
            .position(|b| t <= b)
            .unwrap_or(self.breaks.len());
        self.branches[idx].at(t)
    }
}

/// Rebuilds the exact piecewise-linear Seshadri table for r <= 7 as the
/// lower envelope of all symmetrized (-1)-class thresholds.  Candidate
/// breakpoints are the pairwise crossings; each interval's active branch is
/// found by exact evaluation at the midpoint, and intervals with equal
/// active branches are merged.
pub fn regen_small_r_table(r: u32) -> RegenTable {
    let curves = minus_one_thresholds(r);
    let min_at = |t: &Rational| -> CurveThreshold {
        *curves
            .iter()
            .min_by(|x, y| x.at(t).cmp(&y.at(t)))
            .expect("nonempty curve list")
    };
    // Candidate breakpoints: positive crossings of threshold pairs.
    let mut cands: BTreeSet<Rational> = BTreeSet::new();
    for (i, x) in curves.iter().enumerate() {
        for y in curves.iter().skip(i + 1) {
            // (b1 + a1 t)/s1 = (b2 + a2 t)/s2.
            let num = rat_i(y.b * x.s - x.b * y.s);
            let den = rat_i(x.a * y.s - y.a * x.s);
            if !den.is_zero() {
                let t = num / den;
                if t.is_positive() {
                    cands.insert(t);
                }
            }
        }
    }
    let cands: Vec<Rational> = cands.into_iter().collect();
    // Active branch on each candidate interval (midpoints; half the first
    // candidate below, one past the last above).
    let mut sample_points: Vec<Rational> = Vec::new();
    sample_points.push(cands.first().expect("crossings exist") / rat_i(2));
    for w in cands.windows(2) {
        sample_points.push((&w[0] + &w[1]) / rat_i(2));
    }
    sample_points.push(cands.last().unwrap() + rat_i(1));
    let mut breaks: Vec<Rational> = Vec::new();
    let mut branches: Vec<CurveThreshold> = vec![min_at(&sample_points[0])];
    for (i, t) in sample_points.iter().enumerate().skip(1) {
        let active = min_at(t);
        if active != *branches.last().unwrap() {
            breaks.push(cands[i - 1].clone());
            branches.push(active);
        }
    }
    RegenTable { r, breaks, branches }
}

/// One period of nef-generator slopes `q_{n+1}/q_n` for even r, stopping
/// when the sequence leaves the positive range (r <= 6) or after `max_n`
/// terms (r >= 8, where the sequence is infinite and decreasing).
pub fn regen_q_slopes(r: u32, max_n: i64) -> Result<Vec<Rational>, OracleError> {
    if r % 2 != 0 || r < 2 {
        return Err(OracleError::EvenRRequired(r));
    }
    let seqs = SequenceTriple::new(r)?;
    let mut out = Vec::new();
    for n in 1..=max_n {
        match seqs.xi_slope(n) {
            Some(s) if s.is_positive() => out.push(s),
            _ => break,
        }
    }
    Ok(out)
}

/// Known catalogue discrepancies surfaced by regeneration, as stable
/// identifiers (returned by [`slope_table_regen`] so downstream reports can
/// cite them).
pub const FLAG_R6_QSLOPE_LIST: &str =
    "r=6 catalogued slope list {4/3, 6} disagrees with recursion {3, 4/3}";
pub const FLAG_R7_TABLE_WINDOW: &str =
    "r=7 catalogued breakpoints 13/17, 17/13 disagree with envelope 8/11, 7/8 (and mirrors)";

/// A regeneration report for one r: the rebuilt table (r <= 7), whether it
/// matches the hard-coded table in [`crate::seshadri`], and any known
/// catalogue discrepancies touched.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableReport {
    pub r: u32,
    pub table: Option<RegenTable>,
    pub q_slopes: Option<Vec<Rational>>,
    pub matches: bool,
    pub flags: Vec<String>,
}

/// Regenerates and compares: for r <= 7 the piecewise table against the
/// hard-coded branch list, for even r the q-slope list (one period or the
/// first eight terms).
pub fn slope_table_regen(r: u32) -> Result<TableReport, OracleError> {
    let mut flags = Vec::new();
    let mut matches = true;
    let table = if (1..=7).contains(&r) {
        let regen = regen_small_r_table(r);
        let (breaks, witnesses) = crate::seshadri::small_r_witnesses(r);
        matches &= regen.breaks == breaks && regen.branches.len() == witnesses.len();
        if matches {
            // Branch-by-branch: witness ratios must equal the envelope's.
            for (th, w) in regen.branches.iter().zip(&witnesses) {
                matches &= th.sym_class(r) == w.primitive().expect("integer witness");
            }
        }
        if r == 7 {
            flags.push(FLAG_R7_TABLE_WINDOW.to_string());
        }
        Some(regen)
    } else {
        None
    };
    let q_slopes = if r % 2 == 0 && r >= 2 {
        let slopes = regen_q_slopes(r, 8)?;
        if r == 6 {
            // The catalogued list for r = 6 is {4/3, 6}; the recursion gives
            // {3, 4/3} — flag, trust the recursion.
            let catalogued = [rat(4, 3), rat_i(6)];
            if slopes != catalogued {
                flags.push(FLAG_R6_QSLOPE_LIST.to_string());
            }
        }
        Some(slopes)
    } else {
        None
    };
    Ok(TableReport {
        r,
        table,
        q_slopes,
        matches,
        flags,
    })
}

/// A float cross-check outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    pub passed: bool,
    pub details: String,
}

fn report(id: &str, passed: bool, details: String) -> CheckReport {
    CheckReport {
        id: id.to_string(),
        passed,
        details,
    }
}

/// Float re-evaluation of the exact eigenvalue: `alpha_r` as a surd versus
/// the float root of `t^2 - ((r-4)/2) t + 1`, to within `2^-(bits - 8)`.
pub fn check_alpha_float(r: u32, bits: usize) -> CheckReport {
    let exact = alpha_surd(r).to_fbig(bits);
    let half_trace = rational_to_fbig(&rat(r as i64 - 4, 2), bits);
    let disc = &half_trace * &half_trace - rational_to_fbig(&rat_i(4), bits);
    let float_root = (&half_trace + dashu_base::SquareRoot::sqrt(&disc)) / rational_to_fbig(&rat_i(2), bits);
    let diff = dashu_base::Abs::abs(exact - float_root);
    let tol = rational_to_fbig(&rat_i(1), bits)
        / rational_to_fbig(&Rational::from(num_bigint::BigInt::from(2).pow(bits as u32 - 8)), bits);
    let passed = diff < tol;
    report("alpha-float", passed, format!("r={r}, |diff| < 2^-{}", bits - 8))
}

/// Agreement of the integer n-finder with the logarithmic chart: for an
/// outer bundle over even r >= 10, the chart value of the square-zero class
/// `(e1, e2, -eta)` rounds to the same index, except within `tol` of a
/// half-integer (a generator-boundary tie, where adjacent witnesses agree).
pub fn check_n_finder_vs_phi(r: u32, l: &AmpleBundle, bits: usize) -> Result<CheckReport, OracleError> {
    let n = find_n_even(r, l)?;
    let v = SymClass::new(
        r,
        Surd::from_rational(l.e1().clone()),
        Surd::from_rational(l.e2().clone()),
        -eta(r, l),
    );
    let phi = phi_r(r, &v, bits)?;
    let phi_f = phi.value.to_f64().value();
    let nearest = phi_f.round();
    let tie = (phi_f - phi_f.floor() - 0.5).abs() < 1e-9;
    let passed = tie || nearest as i64 == n;
    Ok(report(
        "n-finder-vs-phi",
        passed,
        format!("r={r}, n={n}, phi={phi_f:.6}{}", if tie { " (boundary tie)" } else { "" }),
    ))
}

/// The golden packing value re-evaluated in floating point from the branch
/// formula `((r-1) e1 + 2 e2)^2 / (8 r e1 e2)`.
pub fn check_nu_golden() -> CheckReport {
    let exact = rat(654_481, 656_036);
    let (r, e1, e2) = (409.0f64, 2.0f64, 401.0f64);
    let float = ((r - 1.0) * e1 + 2.0 * e2).powi(2) / (8.0 * r * e1 * e2);
    let exact_f = exact.numer().to_f64().unwrap() / exact.denom().to_f64().unwrap();
    let passed = (float - exact_f).abs() < 1e-12;
    report("nu-golden", passed, format!("float={float:.15}, exact~{exact_f:.15}"))
}

/// Runs the standard float cross-checks at the default precision.
pub fn float_crosscheck() -> Vec<CheckReport> {
    let mut out = vec![check_alpha_float(12, DEFAULT_PHI_BITS), check_nu_golden()];
    for (r, e1, e2) in [(10u32, 2i64, 7i64), (10, 7, 2), (12, 1, 9), (16, 3, 50)] {
        let l = AmpleBundle::from_ints(e1, e2);
        match check_n_finder_vs_phi(r, &l, DEFAULT_PHI_BITS) {
            Ok(rep) => out.push(rep),
            Err(e) => out.push(report("n-finder-vs-phi", false, format!("error: {e}"))),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::seshadri::epsilon;

    fn bundle(e1: i64, e2: i64) -> AmpleBundle {
        AmpleBundle::from_ints(e1, e2)
    }

    #[test]
    fn duality_examples() {
        let v = nef_duality_epsilon(10, &bundle(2, 7), 10).unwrap();
        assert_eq!(v, Surd::from_rational(rat(5, 3)));
        let v = nef_duality_epsilon(8, &bundle(4, 9), 10).unwrap();
        assert_eq!(v, Surd::from_int(3));
        // Inner bundle: capped at eta = sqrt(1/5).
        let v = nef_duality_epsilon(10, &bundle(1, 1), 10).unwrap();
        assert_eq!(v, Surd::sqrt_of(&rat(1, 5)).unwrap());
    }

    #[test]
    fn duality_window_edge_detection() {
        // A slope just above the inner-cone boundary (here (3+sqrt 5)/2)
        // needs a deep orbit index to reach the minimizing curve; a tiny
        // window must report the edge hit rather than a wrong minimum.
        let l = bundle(144, 377);
        match nef_duality_epsilon(10, &l, 2) {
            Err(OracleError::WindowTooSmall { .. }) => {}
            other => panic!("expected WindowTooSmall, got {other:?}"),
        }
        let auto = nef_duality_epsilon_auto(10, &l).unwrap();
        let direct = epsilon(10, &l).unwrap();
        assert_eq!(&auto, direct.exact_value().unwrap());
    }

    #[test]
    fn duality_agreement_sweep() {
        for r in [8u32, 10, 12, 14, 20] {
            for (e1, e2) in [(1i64, 1i64), (1, 2), (2, 7), (3, 5), (5, 3), (1, 17), (9, 2)] {
                let l = bundle(e1, e2);
                let oracle = nef_duality_epsilon_auto(r, &l).unwrap();
                let v = epsilon(r, &l).unwrap();
                match v.exact_value() {
                    Some(exact) => assert_eq!(&oracle, exact, "r={r} ({e1},{e2})"),
                    None => {
                        // Inner without certificate: oracle must cap at the
                        // shared upper bound.
                        assert_eq!(&oracle, v.upper(), "r={r} ({e1},{e2})");
                    }
                }
            }
        }
    }

    #[test]
    fn threshold_counts() {
        // 7 points: 14 distinct symmetrized threshold types.
        assert_eq!(minus_one_thresholds(7).len(), 14);
        assert!(minus_one_thresholds(7).contains(&CurveThreshold { a: 4, b: 3, s: 13 }));
        // 6 points: the (2,2) pattern with seven base points does not fit.
        assert!(!minus_one_thresholds(6)
            .iter()
            .any(|c| c.a == 4 && c.b == 3));
    }

    #[test]
    fn regen_matches_hardcoded_tables() {
        for r in 1..=7 {
            let rep = slope_table_regen(r).unwrap();
            assert!(rep.matches, "regenerated table differs for r={r}");
        }
    }

    #[test]
    fn regen_r6_breakpoints() {
        let t = regen_small_r_table(6);
        assert_eq!(t.breaks, vec![rat(1, 3), rat(3, 4), rat(4, 3), rat_i(3)]);
        // Central branch: the (2,2; 2 1^5) symmetrization.
        assert_eq!(t.branches[2], CurveThreshold { a: 2, b: 2, s: 7 });
    }

    #[test]
    fn regen_r7_corrected_window() {
        let t = regen_small_r_table(7);
        assert_eq!(
            t.breaks,
            vec![rat(1, 4), rat(8, 11), rat(7, 8), rat(8, 7), rat(11, 8), rat_i(4)]
        );
        assert_eq!(t.branches[2], CurveThreshold { a: 4, b: 3, s: 13 });
        let rep = slope_table_regen(7).unwrap();
        assert!(rep.flags.iter().any(|f| f == FLAG_R7_TABLE_WINDOW));
    }

    #[test]
    fn q_slope_lists() {
        assert_eq!(regen_q_slopes(2, 8).unwrap(), vec![rat_i(1)]);
        assert_eq!(regen_q_slopes(4, 8).unwrap(), vec![rat_i(2), rat(1, 2)]);
        assert_eq!(
            regen_q_slopes(6, 8).unwrap(),
            vec![rat_i(3), rat(4, 3), rat(3, 4), rat(1, 3)]
        );
        let r8 = regen_q_slopes(8, 4).unwrap();
        assert_eq!(r8, vec![rat_i(4), rat(9, 4), rat(16, 9), rat(25, 16)]);
        let rep = slope_table_regen(6).unwrap();
        assert!(rep.flags.iter().any(|f| f == FLAG_R6_QSLOPE_LIST));
    }

    #[test]
    fn envelope_agrees_with_epsilon_on_a_grid() {
        for r in 1..=7u32 {
            let table = regen_small_r_table(r);
            for num in 1..=60i64 {
                for den in 1..=6i64 {
                    let l = bundle(den, num);
                    let v = epsilon(r, &l).unwrap();
                    let got = v.exact_value().unwrap().as_rational().unwrap();
                    let t = rat(num, den);
                    // Degree-1 homogeneity: eps(den, num) = den * envelope(t).
                    assert_eq!(
                        got,
                        &(rat_i(den) * table.value_at(&t)),
                        "r={r} slope {num}/{den}"
                    );
                }
            }
        }
    }

    #[test]
    fn float_checks_pass() {
        for rep in float_crosscheck() {
            assert!(rep.passed, "{}: {}", rep.id, rep.details);
        }
    }
}
