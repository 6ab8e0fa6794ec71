//! Brute-force references for tests: module minimisation by enumeration,
//! Chase decoding by repeated hard-decision decoding, and the truncated
//! product evaluated the slow way.
//!
//! These are exponential and only meant for tiny instances. Searches that
//! would exceed the caps below return [`Error::OracleCap`] rather than a
//! silently truncated answer.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, Gf};
use crate::groebner::{compare_w, lm_w, solve_key_equation, PolyPair};
use crate::grs::{extract_error, ErrorEstimate, GrsCode, Syndrome};
use crate::poly::{Degree, Poly};

/// Largest field the enumeration accepts.
pub const MAX_ORACLE_Q: usize = 16;
/// Largest degree cap on either coordinate.
pub const MAX_ORACLE_DEG: usize = 6;
/// Largest number of pairs examined in one search.
pub const MAX_ORACLE_PAIRS: u64 = 1 << 24;

/// (S·v mod X^{2t})(β) by multiplying, truncating and evaluating.
pub fn naive_truncated_eval(s: &[Gf], v: &Poly, beta: Gf, f: &FieldCtx) -> Gf {
    Poly::from_coeffs(s.to_vec())
        .mul(v, f)
        .truncate(s.len())
        .eval(beta, f)
}

/// Whether (u, v) lies in the module cut out by the key equation and the
/// root and derivative conditions of every (position, value) in `pattern`.
pub fn in_module(code: &GrsCode, s: &Syndrome, pattern: &[(usize, Gf)], p: &PolyPair) -> bool {
    let f = code.field();
    let two_t = code.d() - 1;
    let sv = s.poly().mul(&p.v, f).truncate(two_t);
    if p.u.truncate(two_t) != sv {
        return false;
    }
    let dv = p.v.deriv();
    pattern.iter().all(|&(pos, beta)| {
        let alpha = code.locator(pos);
        let x = f.inv(alpha).expect("nonzero locator");
        let a = code.multiplier(pos);
        p.v.eval(x, f).is_zero()
            && (f.mul(f.mul(beta, a), dv.eval(x, f)) + f.mul(alpha, p.u.eval(x, f))).is_zero()
    })
}

/// The <_{−1}-minimal nonzero element of the module for `pattern`, among
/// pairs with deg u ≤ `cap_u` and deg v ≤ `cap_v`, normalised so that the
/// coefficient of its leading monomial is 1.
///
/// Only v and the part of u above X^{2t} are enumerated; the rest of u is
/// forced by the key equation. Fails if the minimum is not unique up to a
/// scalar, which can only happen when the caps cut the module badly.
pub fn brute_min_module_element(
    code: &GrsCode,
    s: &Syndrome,
    pattern: &[(usize, Gf)],
    cap_u: usize,
    cap_v: usize,
) -> Result<PolyPair> {
    let f = code.field();
    let q = f.q();
    if q > MAX_ORACLE_Q {
        return Err(Error::OracleCap(format!("q = {q} exceeds {MAX_ORACLE_Q}")));
    }
    if cap_u > MAX_ORACLE_DEG || cap_v > MAX_ORACLE_DEG {
        return Err(Error::OracleCap(format!(
            "degree caps ({cap_u}, {cap_v}) exceed {MAX_ORACLE_DEG}"
        )));
    }
    let two_t = code.d() - 1;
    let free_u = (cap_u + 1).saturating_sub(two_t);
    let total = (q as u64)
        .checked_pow((cap_v + 1 + free_u) as u32)
        .filter(|&n| n <= MAX_ORACLE_PAIRS)
        .ok_or_else(|| Error::OracleCap("search space too large".into()))?;

    let sp = s.poly();
    let mut best: Option<PolyPair> = None;
    let mut tied = false;
    let mut digits = vec![0u16; cap_v + 1 + free_u];
    for _ in 0..total {
        let v = Poly::from_coeffs(digits[..=cap_v].iter().map(|&c| Gf(c)).collect());
        let hi = Poly::from_coeffs(digits[cap_v + 1..].iter().map(|&c| Gf(c)).collect());
        let u = sp.mul(&v, f).truncate(two_t).add(&hi.shift(two_t));
        let p = PolyPair::new(u, v);
        if !p.is_zero() && p.u.deg().le(cap_u as i64) && in_module(code, s, pattern, &p) {
            let lm = lm_w(&p, -1)?;
            match &best {
                None => best = Some(p),
                Some(b) => {
                    let blm = lm_w(b, -1)?;
                    match compare_w(lm, blm, -1) {
                        Ordering::Less => {
                            best = Some(p);
                            tied = false;
                        }
                        Ordering::Equal if !p.proportional(b, f) => tied = true,
                        _ => {}
                    }
                }
            }
        }
        for dgt in digits.iter_mut() {
            *dgt += 1;
            if (*dgt as usize) < q {
                break;
            }
            *dgt = 0;
        }
    }
    let b = best.ok_or_else(|| Error::OracleCap("no nonzero element within caps".into()))?;
    if tied {
        // Two independent elements share the minimal leading monomial, so
        // their difference lies outside the caps.
        return Err(Error::OracleCap("minimal element not unique within caps".into()));
    }
    b.normalized(-1, f)
}

/// Chase decoding by brute force: every test pattern of weight at most
/// `r_max` on the coordinates `unreliable` (values from `sets`) is
/// subtracted from the syndrome and decoded from scratch.
///
/// The empty pattern contributes the hard-decision result of weight ≤ t.
/// A pattern z of weight r ≥ 1 contributes e' + z when the hard-decision
/// error e' for the remaining syndrome has weight exactly t and avoids the
/// support of z; this is the error of weight t + r whose locator the fast
/// traversal finds at the node of z.
pub fn naive_chase(
    code: &GrsCode,
    s: &Syndrome,
    unreliable: &[usize],
    sets: &[Vec<Gf>],
    r_max: usize,
) -> Result<BTreeSet<ErrorEstimate>> {
    if unreliable.len() != sets.len() {
        return Err(Error::LengthMismatch {
            expected: unreliable.len(),
            got: sets.len(),
        });
    }
    let mut out = BTreeSet::new();
    if let Some(e) = code.decode_hd(s) {
        out.insert(e);
    }
    let mut pattern = Vec::new();
    naive_rec(code, s, unreliable, sets, r_max, 0, &mut pattern, &mut out)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn naive_rec(
    code: &GrsCode,
    s: &Syndrome,
    unreliable: &[usize],
    sets: &[Vec<Gf>],
    r_max: usize,
    start: usize,
    pattern: &mut Vec<(usize, Gf)>,
    out: &mut BTreeSet<ErrorEstimate>,
) -> Result<()> {
    if pattern.len() == r_max {
        return Ok(());
    }
    for k in start..unreliable.len() {
        for &b in &sets[k] {
            pattern.push((unreliable[k], b));
            let z = ErrorEstimate::from_pairs(pattern.clone())?;
            let sz = code.syndrome(&z.as_vector(code.n()))?;
            let rest = code.syndrome_from_poly(s.poly().sub(&sz.poly()))?;
            if let Some(e) = hd_exact(code, &rest, code.t()) {
                if e.positions().iter().all(|p| z.value_at(*p).is_none()) {
                    let mut pairs: Vec<(usize, Gf)> =
                        e.positions().iter().copied().zip(e.values().iter().copied()).collect();
                    pairs.extend(pattern.iter().copied());
                    out.insert(ErrorEstimate::from_pairs(pairs)?);
                }
            }
            naive_rec(code, s, unreliable, sets, r_max, k + 1, pattern, out)?;
            pattern.pop();
        }
    }
    Ok(())
}

/// Hard-decision error of weight exactly `w`.
fn hd_exact(code: &GrsCode, s: &Syndrome, w: usize) -> Option<ErrorEstimate> {
    let g = solve_key_equation(code, s);
    let g1 = g.g1();
    if g1.v.deg() != Degree::Finite(w) {
        return None;
    }
    extract_error(code, &g1.u, &g1.v, w, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn code(m: u32, d: usize) -> GrsCode {
        GrsCode::reed_solomon(Arc::new(FieldCtx::with_default_poly(m).unwrap()), d).unwrap()
    }

    #[test]
    fn truncated_eval_trivial_cases() {
        let c = code(3, 5);
        let f = c.field();
        let s = vec![Gf(3), Gf(5), Gf(1), Gf(7)];
        assert_eq!(naive_truncated_eval(&s, &Poly::zero(), Gf(2), f), Gf::ZERO);
        assert_eq!(naive_truncated_eval(&[Gf::ZERO; 4], &Poly::from_u16(&[1, 2, 3]), Gf(2), f), Gf::ZERO);
    }

    #[test]
    fn zero_syndrome_minimum_is_right_unit() {
        let c = code(3, 5);
        let s = c.syndrome(&vec![Gf::ZERO; 7]).unwrap();
        let p = brute_min_module_element(&c, &s, &[], 4, 3).unwrap();
        assert_eq!(p, PolyPair::new(Poly::zero(), Poly::one()));
    }

    #[test]
    fn single_error_minimum_is_elp() {
        let c = code(3, 5);
        let e = ErrorEstimate::from_pairs(vec![(4, Gf(6))]).unwrap();
        let s = c.syndrome(&e.as_vector(7)).unwrap();
        let (sigma, omega) = c.elp_eep_of(&e);
        let p = brute_min_module_element(&c, &s, &[], 3, 3).unwrap();
        let want = PolyPair::new(omega, sigma).normalized(-1, c.field()).unwrap();
        assert_eq!(p, want);
    }

    #[test]
    fn caps_are_enforced() {
        let c = code(5, 5);
        let s = c.syndrome(&vec![Gf::ZERO; 31]).unwrap();
        assert!(matches!(brute_min_module_element(&c, &s, &[], 2, 2), Err(Error::OracleCap(_))));
        let c = code(4, 5);
        let s = c.syndrome(&vec![Gf::ZERO; 15]).unwrap();
        assert!(brute_min_module_element(&c, &s, &[], 2, 7).is_err());
    }

    #[test]
    fn naive_chase_without_patterns_is_hd() {
        let c = code(3, 5);
        let e = ErrorEstimate::from_pairs(vec![(1, Gf(2)), (5, Gf(3))]).unwrap();
        let s = c.syndrome(&e.as_vector(7)).unwrap();
        let list = naive_chase(&c, &s, &[], &[], 2).unwrap();
        assert_eq!(list.into_iter().collect::<Vec<_>>(), vec![e]);
    }

    #[test]
    fn naive_chase_finds_t_plus_one() {
        let c = code(3, 5);
        let e = ErrorEstimate::from_pairs(vec![(0, Gf(1)), (2, Gf(4)), (6, Gf(7))]).unwrap();
        let s = c.syndrome(&e.as_vector(7)).unwrap();
        let list = naive_chase(&c, &s, &[3, 6], &[vec![Gf(5)], vec![Gf(7)]], 1).unwrap();
        assert!(list.contains(&e));
        for cand in &list {
            assert!(c.syndrome_consistent(&s, cand));
        }
    }
}
