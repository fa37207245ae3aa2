//! Exponent classification over quadratic towers and the closed-form values
//! at roots of unity.
//!
//! Over L = GF(p^(2n)) an exponent congruent to a power of p mod (p^n - 1)
//! can be multiplied by powers of p (which never changes any W(a)) until it
//! is 1 mod (p^n - 1), i.e. s = 1 + k(p^n - 1). Everything downstream is
//! controlled by k through d1 = gcd(k, p^n + 1) and d2 = gcd(k - 1, p^n + 1).

use crate::arith::{gcd, mod_pow, pow_u128};
use crate::error::{Error, Result};
use crate::field::{Field, Tower};

/// The normalized form s = 1 + k(p^n - 1) with its gcd invariants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormalizedExponent {
    pub s: u64,
    pub k: u64,
    pub d1: u64,
    pub d2: u64,
}

/// Full classification of an exponent over a tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExponentClass {
    pub s: u64,
    pub invertible: bool,
    pub degenerate: bool,
    pub niho: bool,
    pub rational: bool,
    pub normalized: Option<NormalizedExponent>,
}

/// Is s a power of p mod (q - 1)?
pub fn is_degenerate(f: &Field, s: u64) -> bool {
    let m = f.order() - 1;
    let s = s % m;
    (0..f.degree()).any(|j| mod_pow(f.characteristic(), j as u64, m) == s)
}

/// d2 = gcd(k - 1, p^n + 1), with k = 0 wrapping to p^n.
fn gcd_km1(k: u64, pn: u64) -> u64 {
    gcd((k + pn) % (pn + 1), pn + 1)
}

/// Classify s over the tower: invertibility, degeneracy, the Niho property,
/// rationality, and the normalized (k, d1, d2) data when s is congruent to a
/// power of p mod (p^n - 1).
pub fn classify(t: &Tower, s: u64) -> ExponentClass {
    let f = t.field();
    let group = f.order() - 1;
    let s_red = s % group;
    let invertible = gcd(s_red, group) == 1;
    let degenerate = is_degenerate(f, s);
    let p = f.characteristic();
    let rational = s_red % (p - 1) == 1 % (p - 1);

    let pn = t.base_order();
    let base_group = pn - 1;
    let mut normalized = None;
    for j in 0..f.degree() as u64 {
        let cand = (s_red as u128 * mod_pow(p, j, group) as u128 % group as u128) as u64;
        if cand % base_group == 1 % base_group {
            let k = (cand - 1) / base_group;
            debug_assert!(k <= pn);
            normalized = Some(NormalizedExponent {
                s: cand,
                k,
                d1: gcd(k, pn + 1),
                d2: gcd_km1(k, pn),
            });
            break;
        }
    }
    let niho = normalized.is_some() && !degenerate;
    ExponentClass { s: s_red, invertible, degenerate, niho, rational, normalized }
}

/// Checked p^n as u64 for the pure integer formulas.
fn checked_pn(p: u64, n: u32) -> u64 {
    let pn = pow_u128(p, n);
    assert!(pn <= 1 << 40, "p^n too large for closed-form evaluation");
    pn as u64
}

fn require_invertible_niho(k: u64, p: u64, pn: u64) -> Result<u64> {
    if p == 2 {
        return Err(Error::EvenCharTower);
    }
    let group = pn * pn - 1;
    let s = ((1 + k as u128 * (pn - 1) as u128) % group as u128) as u64;
    let s = if s == 0 { group } else { s };
    if gcd(s, group) != 1 {
        return Err(Error::NotInvertible { s });
    }
    Ok(s)
}

/// W at a primitive t-th root of unity, for t dividing p^n + 1:
/// p^n (d1 + d2 - 2) at t = 1, else p^n (d1 delta_1 + d2 delta_2 - 1) where
/// delta_i = 1 iff t divides (p^n + 1)/d_i.
pub fn weil_at_root_of_unity(k: u64, p: u64, n: u32, t: u64) -> Result<i64> {
    let pn = checked_pn(p, n);
    require_invertible_niho(k, p, pn)?;
    if t == 0 || (pn + 1) % t != 0 {
        return Err(Error::BadUnityOrder { t, pn });
    }
    let d1 = gcd(k % (pn + 1), pn + 1);
    let d2 = gcd_km1(k % (pn + 1), pn);
    if t == 1 {
        return Ok(pn as i64 * (d1 as i64 + d2 as i64 - 2));
    }
    let delta1 = ((pn + 1) / d1 % t == 0) as i64;
    let delta2 = ((pn + 1) / d2 % t == 0) as i64;
    Ok(pn as i64 * (d1 as i64 * delta1 + d2 as i64 * delta2 - 1))
}

/// W at a = -1 by the sign formula
/// p^n (d1 (1 + (-1)^((p^n+1)/d1))/2 + d2 (1 + (-1)^((p^n+1)/d2))/2 - 1).
pub fn weil_at_minus_one(k: u64, p: u64, n: u32) -> Result<i64> {
    let pn = checked_pn(p, n);
    require_invertible_niho(k, p, pn)?;
    let d1 = gcd(k % (pn + 1), pn + 1);
    let d2 = gcd_km1(k % (pn + 1), pn);
    let half_term = |d: u64| -> i64 {
        if ((pn + 1) / d) % 2 == 0 {
            d as i64
        } else {
            0
        }
    };
    Ok(pn as i64 * (half_term(d1) + half_term(d2) - 1))
}

/// |R| = p^n + (d1-1)(d1-2) + (d2-1)(d2-2) for s = 1 + k(p^n - 1).
pub fn r_count_closed_form(k: u64, pn: u64) -> u64 {
    let d1 = gcd(k % (pn + 1), pn + 1);
    let d2 = gcd_km1(k % (pn + 1), pn);
    pn + (d1 - 1) * (d1 - 2) + (d2 - 1) * (d2 - 2)
}

/// Which hypothesis sets the tuple (k, p, n) satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HypothesisReport {
    pub s: u64,
    pub invertible: bool,
    pub d1: u64,
    pub d2: u64,
    /// d1 + d2 >= 5.
    pub case_i: bool,
    /// d1 + d2 = 3 and p^n = 11 mod 12.
    pub case_ii: bool,
    /// n >= 2, 2 <= k < p/2 + 1, d1 + d2 >= 5.
    pub theorem_mi: bool,
}

impl HypothesisReport {
    pub fn none(&self) -> bool {
        !(self.case_i || self.case_ii || self.theorem_mi)
    }
}

pub fn hypothesis_check(k: u64, p: u64, n: u32) -> HypothesisReport {
    let pn = checked_pn(p, n);
    let group = pn * pn - 1;
    let s = ((1 + k as u128 * (pn - 1) as u128) % group as u128) as u64;
    let s = if s == 0 { group } else { s };
    let invertible = gcd(s, group) == 1;
    let d1 = gcd(k % (pn + 1), pn + 1);
    let d2 = gcd_km1(k % (pn + 1), pn);
    let sum = d1 + d2;
    let case_i = invertible && sum >= 5;
    let case_ii = invertible && sum == 3 && pn % 12 == 11;
    let theorem_mi = invertible && n >= 2 && k >= 2 && 2 * k < p + 2 && sum >= 5;
    HypothesisReport { s, invertible, d1, d2, case_i, case_ii, theorem_mi }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Element, Field};
    use crate::weil::{weil_integer, weil_sum};

    #[test]
    fn classify_gf9_exponents() {
        let f = Field::build(3, 2).unwrap();
        let t = f.tower().unwrap();

        let c3 = classify(&t, 3);
        assert!(c3.degenerate && !c3.niho && c3.invertible && c3.rational);

        let c5 = classify(&t, 5);
        assert!(c5.niho && c5.invertible && !c5.degenerate && c5.rational);
        let n5 = c5.normalized.unwrap();
        assert_eq!((n5.k, n5.d1, n5.d2), (2, 2, 1));

        let c7 = classify(&t, 7);
        assert!(c7.niho);
        let n7 = c7.normalized.unwrap();
        assert_eq!((n7.k, n7.d1, n7.d2), (3, 1, 2));
    }

    #[test]
    fn classify_normalizes_by_p_powers() {
        // Over GF(81)/GF(9): s = 11 = 3 mod 8, one multiplication by p lands
        // on 33 = 1 + 4 * 8.
        let f = Field::build(3, 4).unwrap();
        let t = f.tower().unwrap();
        let c = classify(&t, 11);
        assert!(c.niho && c.invertible);
        let n = c.normalized.unwrap();
        assert_eq!((n.s, n.k, n.d1, n.d2), (33, 4, 2, 1));
        // Non-Niho exponents are classified, not rejected.
        let f25 = Field::build(5, 2).unwrap();
        let t25 = f25.tower().unwrap();
        let c2 = classify(&t25, 7);
        assert!(!c2.niho && c2.normalized.is_none());
        assert!(c2.invertible);
    }

    #[test]
    fn degenerate_detection() {
        let f = Field::build(3, 2).unwrap();
        for s in 1..8 {
            let expect = s == 1 || s == 3;
            assert_eq!(is_degenerate(&f, s), expect, "s={s}");
        }
    }

    #[test]
    fn invariants_of_classification() {
        for (p, half) in [(3u64, 1u32), (5, 1), (7, 1), (3, 2)] {
            let f = Field::build(p, 2 * half).unwrap();
            let t = f.tower().unwrap();
            for s in 1..f.order() - 1 {
                let c = classify(&t, s);
                assert_eq!(c.invertible, gcd(s, f.order() - 1) == 1);
                if c.niho {
                    assert!(c.rational, "niho implies rational, s={s}");
                }
                if let Some(n) = c.normalized {
                    assert_eq!(gcd(n.d1, n.d2), 1);
                    assert_eq!(n.s % (t.base_order() - 1), 1 % (t.base_order() - 1));
                }
            }
        }
    }

    #[test]
    fn normalization_preserves_histograms() {
        let f = Field::build(3, 2).unwrap();
        let t = f.tower().unwrap();
        for s in 1..8u64 {
            let c = classify(&t, s);
            if let Some(n) = c.normalized {
                for enc in 0..9 {
                    let a = Element(enc);
                    assert_eq!(weil_sum(&f, s, a), weil_sum(&f, n.s, a), "s={s} a={enc}");
                }
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(weil_at_root_of_unity(2, 3, 1, 1).unwrap(), 3);
        assert_eq!(weil_at_root_of_unity(2, 3, 1, 2).unwrap(), 6);
        assert_eq!(weil_at_root_of_unity(3, 5, 1, 1).unwrap(), 15);
        assert_eq!(weil_at_minus_one(2, 3, 1).unwrap(), 6);
        assert!(weil_at_root_of_unity(2, 3, 1, 3).is_err());
    }

    #[test]
    fn minus_one_agrees_with_unity_root_at_t2() {
        for (p, n) in [(3u64, 1u32), (5, 1), (7, 1), (3, 2), (13, 1)] {
            let pn = checked_pn(p, n);
            for k in 2..=pn {
                match (weil_at_minus_one(k, p, n), weil_at_root_of_unity(k, p, n, 2)) {
                    (Ok(a), Ok(b)) => assert_eq!(a, b, "p={p} n={n} k={k}"),
                    (Err(_), Err(_)) => {}
                    other => panic!("path disagreement for p={p} n={n} k={k}: {other:?}"),
                }
            }
        }
    }

    #[test]
    fn closed_forms_match_enumeration_on_small_towers() {
        for p in [3u64, 5, 7] {
            let f = Field::build(p, 2).unwrap();
            let t = f.tower().unwrap();
            let pn = t.base_order();
            let group = f.order() - 1;
            for k in 2..=pn {
                let s = 1 + k * (pn - 1);
                if gcd(s, group) != 1 {
                    continue;
                }
                for tt in crate::arith::divisors(pn + 1) {
                    let closed = weil_at_root_of_unity(k, p, 1, tt).unwrap();
                    // Every primitive tt-th root of unity.
                    let step = group / tt;
                    for j in 1..=tt {
                        if gcd(j, tt) == 1 {
                            let zeta = f.exp(step * j % group);
                            assert_eq!(
                                weil_integer(&f, s, zeta).unwrap(),
                                closed,
                                "p={p} k={k} t={tt} j={j}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn hypothesis_examples() {
        let h = hypothesis_check(3, 5, 1);
        assert!(h.case_i && !h.case_ii && !h.theorem_mi);

        let h = hypothesis_check(5, 13, 2);
        assert_eq!((h.d1, h.d2), (5, 2));
        assert!(h.case_i && h.theorem_mi);
        assert_eq!(h.s, 841);

        let h = hypothesis_check(2, 3, 1);
        assert!(h.none());
    }

    #[test]
    fn two_mod_three_forces_large_gcd_sum() {
        // When p^n = 2 mod 3, every invertible Niho k gives d1 + d2 >= 5.
        for (p, n) in [(5u64, 1u32), (11, 1), (17, 1), (23, 1), (29, 1)] {
            let pn = checked_pn(p, n);
            assert_eq!(pn % 3, 2);
            for k in 2..=pn {
                let h = hypothesis_check(k, p, n);
                if h.invertible {
                    assert!(h.d1 + h.d2 >= 5, "p={p} k={k} d1={} d2={}", h.d1, h.d2);
                }
            }
        }
    }

    #[test]
    fn degenerate_k_values_recover_field_order_at_one() {
        // k = 0 and k = 1 are the degenerate classes; the closed form at t = 1
        // degenerates to W(1) = p^(2n) accordingly.
        for (p, n) in [(3u64, 1u32), (5, 1)] {
            let pn = checked_pn(p, n);
            for k in [0u64, 1] {
                let w = weil_at_root_of_unity(k, p, n, 1).unwrap();
                assert_eq!(w, (pn * pn) as i64);
            }
        }
    }
}
