//! Exact evaluation of the sums W(a) = sum over x of mu(x^s - ax).
//!
//! A sum is represented by its count histogram c_t = #{x : Tr(x^s - ax) = t},
//! never by complex floats: the sum equals sum(c_t * zeta_p^t), it is rational
//! precisely when c_1 = ... = c_{p-1}, and then its integer value is c_0 - c_1.
//! Two evaluation paths exist for quadratic towers: the naive O(q) loop and a
//! coset-accelerated O(p^m) count over the transversal of L*/F*, and they must
//! agree everywhere.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::field::{Element, Field, Tower};

/// Count histogram of trace values; the exact form of one Weil sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicCounts {
    p: u64,
    counts: Vec<u64>,
}

impl CyclotomicCounts {
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Rational iff all counts at nonzero indices agree.
    pub fn is_rational(&self) -> bool {
        self.counts[1..].windows(2).all(|w| w[0] == w[1])
    }

    /// The integer value c_0 - c_1 when rational.
    pub fn rational_value(&self) -> Option<i64> {
        if self.is_rational() {
            Some(self.counts[0] as i64 - self.counts[1] as i64)
        } else {
            None
        }
    }

    /// Canonical representative under the relation sum(zeta_p^t) = 0:
    /// subtracting the last count from every coordinate makes value equality
    /// coincide with coordinate equality.
    pub fn normalized(&self) -> Vec<i64> {
        let last = *self.counts.last().unwrap() as i64;
        self.counts[..self.counts.len() - 1]
            .iter()
            .map(|&c| c as i64 - last)
            .collect()
    }
}

/// Size of K = {x in L* : Tr_rel(x^s - ax) = 0} and the number of zero-trace
/// coset representatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KsetCount {
    pub size: u64,
    pub coset_zero_reps: u64,
}

/// Which elements a ranges over when collecting a spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    /// All nonzero elements of the field the sum ranges over.
    #[serde(rename = "Lx")]
    Units,
    /// Nonzero elements of the quadratic subfield only.
    #[serde(rename = "Fx")]
    BaseUnits,
}

impl Domain {
    pub fn label(self) -> &'static str {
        match self {
            Domain::Units => "Lx",
            Domain::BaseUnits => "Fx",
        }
    }
}

/// Exact value multiset over a domain, ascending by value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    pub p: u64,
    pub deg: u32,
    pub s: u64,
    pub domain: Domain,
    pub entries: Vec<(i64, u64)>,
}

impl Spectrum {
    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    pub fn multiplicity_total(&self) -> u64 {
        self.entries.iter().map(|&(_, m)| m).sum()
    }

    pub fn contains(&self, value: i64) -> bool {
        self.entries.binary_search_by_key(&value, |&(v, _)| v).is_ok()
    }

    pub fn multiplicity(&self, value: i64) -> u64 {
        match self.entries.binary_search_by_key(&value, |&(v, _)| v) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0,
        }
    }

    pub fn values(&self) -> impl Iterator<Item = i64> + '_ {
        self.entries.iter().map(|&(v, _)| v)
    }
}

/// Moment sums over every a in the field, against their closed forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentReport {
    pub q: u64,
    pub m1: i128,
    pub m2: i128,
    pub m3: i128,
    pub r_count: u64,
    pub expected_m1: i128,
    pub expected_m2: i128,
    pub expected_m3: i128,
    pub matches: bool,
}

/// Orbit sums sum(W(ab), a in F) for every coset of F* in L*.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    /// The observed value on the subfield coset (b in F*).
    pub in_base_value: i64,
    /// The constant q - 1 that the source lemma states for that coset.
    pub stated_in_base_value: i64,
    pub matches_stated: bool,
    /// True when every coset outside F summed to zero.
    pub outside_all_zero: bool,
    pub first_outside_nonzero: Option<(u64, i64)>,
}

// ---------------------------------------------------------------------------
// Core evaluation
// ---------------------------------------------------------------------------

/// The exact histogram of W(a) over the whole field, by direct enumeration.
pub fn weil_sum(f: &Field, s: u64, a: Element) -> CyclotomicCounts {
    assert!(s >= 1, "exponent must be positive");
    debug_assert!(a.encoding() < f.order());
    let p = f.characteristic();
    let q = f.order();
    let m = q - 1;
    let s_red = s % m;
    let mut counts = vec![0u64; p as usize];
    // x = 0 contributes trace 0.
    counts[0] += 1;
    match f.log(a) {
        None => {
            // a = 0: histogram of Tr(x^s) over x != 0.
            let mut e1 = 0u64;
            for _ in 0..m {
                counts[f.trace_of_exp(e1) as usize] += 1;
                e1 += s_red;
                if e1 >= m {
                    e1 -= m;
                }
            }
        }
        Some(j) => {
            let mut e1 = 0u64;
            let mut e2 = j;
            for _ in 0..m {
                let t = match f.diff_log(e1, e2) {
                    None => 0,
                    Some(e) => f.trace_of_exp(e),
                };
                counts[t as usize] += 1;
                e1 += s_red;
                if e1 >= m {
                    e1 -= m;
                }
                e2 += 1;
                if e2 >= m {
                    e2 -= m;
                }
            }
        }
    }
    CyclotomicCounts { p, counts }
}

/// Integer value of W(a); requires s = 1 mod (p-1) so the value is rational.
pub fn weil_integer(f: &Field, s: u64, a: Element) -> Result<i64> {
    require_rational_exponent(f, s)?;
    weil_sum(f, s, a)
        .rational_value()
        .ok_or(Error::IrrationalityBug { s, a: a.encoding() })
}

fn require_rational_exponent(f: &Field, s: u64) -> Result<()> {
    let p = f.characteristic();
    if p > 2 && s % (p - 1) != 1 % (p - 1) {
        return Err(Error::NotRational { s, p });
    }
    Ok(())
}

fn require_normalized(t: &Tower, s: u64) -> Result<()> {
    let pm = t.base_order();
    if s % (pm - 1) != 1 % (pm - 1) {
        return Err(Error::NotNormalized { s });
    }
    Ok(())
}

/// |K| for K = {x in L* : Tr_rel(x^s - ax) = 0}, counted on the p^m + 1
/// coset representatives g^i. Requires s = 1 mod (p^m - 1), which makes
/// membership constant on cosets of F*.
pub fn kset_count(t: &Tower, s: u64, a: Element) -> Result<KsetCount> {
    require_normalized(t, s)?;
    let f = t.field();
    let m = f.order() - 1;
    let s_red = s % m;
    let a_log = f.log(a);
    let mut zero_reps = 0u64;
    for i in t.coset_rep_exps() {
        let e1 = i * s_red % m;
        let member = match a_log {
            None => t.rel_trace_zero_by_exp(e1),
            Some(j) => match f.diff_log(e1, (i + j) % m) {
                None => true,
                Some(e) => t.rel_trace_zero_by_exp(e),
            },
        };
        if member {
            zero_reps += 1;
        }
    }
    Ok(KsetCount { size: zero_reps * (t.base_order() - 1), coset_zero_reps: zero_reps })
}

/// W(a) through the coset-count identity W = p^m * |K|/(p^m - 1) - p^m.
pub fn weil_via_kset(t: &Tower, s: u64, a: Element) -> Result<i64> {
    let k = kset_count(t, s, a)?;
    let pm = t.base_order() as i64;
    Ok(pm * k.coset_zero_reps as i64 - pm)
}

/// W(a) by the cheapest applicable exact path.
pub fn weil_value(f: &Field, s: u64, a: Element) -> Result<i64> {
    if let Ok(t) = f.tower() {
        if s % (t.base_order() - 1) == 1 % (t.base_order() - 1) {
            return weil_via_kset(&t, s, a);
        }
    }
    weil_integer(f, s, a)
}

// ---------------------------------------------------------------------------
// Spectra
// ---------------------------------------------------------------------------

fn domain_exponents(f: &Field, domain: Domain) -> Result<Vec<u64>> {
    let m = f.order() - 1;
    match domain {
        Domain::Units => Ok((0..m).collect()),
        Domain::BaseUnits => {
            let t = f.tower().map_err(|_| Error::NoSubfieldDomain)?;
            let step = t.base_order() + 1;
            Ok((0..t.base_order() - 1).map(|i| i * step).collect())
        }
    }
}

/// Exact spectrum of W over the chosen domain. Dispatches to the coset
/// count when the field carries a tower and s is normalized; the naive path
/// otherwise. `jobs` workers partition the domain; the multiset union is
/// order-independent, so any worker count yields an identical spectrum.
pub fn spectrum(f: &Field, s: u64, domain: Domain, jobs: usize) -> Result<Spectrum> {
    require_rational_exponent(f, s)?;
    let exps = domain_exponents(f, domain)?;
    let accelerated = match f.tower() {
        Ok(t) => s % (t.base_order() - 1) == 1 % (t.base_order() - 1),
        Err(_) => false,
    };
    let eval = |j: u64| -> Result<i64> {
        let a = f.exp(j);
        if accelerated {
            weil_via_kset(&f.tower().expect("tower checked"), s, a)
        } else {
            weil_integer(f, s, a)
        }
    };

    let jobs = jobs.max(1).min(exps.len().max(1));
    let entries = if jobs == 1 {
        let mut map = BTreeMap::new();
        for &j in &exps {
            *map.entry(eval(j)?).or_insert(0u64) += 1;
        }
        map
    } else {
        let chunk = exps.len().div_ceil(jobs);
        let eval = &eval;
        let partials: Vec<Result<BTreeMap<i64, u64>>> = std::thread::scope(|scope| {
            let handles: Vec<_> = exps
                .chunks(chunk)
                .map(|part| {
                    scope.spawn(move || {
                        let mut map = BTreeMap::new();
                        for &j in part {
                            *map.entry(eval(j)?).or_insert(0u64) += 1;
                        }
                        Ok(map)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        let mut merged = BTreeMap::new();
        for partial in partials {
            for (v, c) in partial? {
                *merged.entry(v).or_insert(0u64) += c;
            }
        }
        merged
    };

    Ok(Spectrum {
        p: f.characteristic(),
        deg: f.degree(),
        s,
        domain,
        entries: entries.into_iter().collect(),
    })
}

/// True when W(a) is rational for every a in the domain. No precondition:
/// this is the probe the rationality dichotomy is tested with. For p = 2 the
/// histogram is rational by construction.
pub fn all_rational(f: &Field, s: u64) -> bool {
    if f.characteristic() == 2 {
        return true;
    }
    let m = f.order() - 1;
    (0..m).all(|j| weil_sum(f, s, f.exp(j)).is_rational())
}

/// Count distinct sum values over the domain, comparing canonical histogram
/// representatives so irrational values are handled exactly. Stops early
/// when `stop_at` distinct values have been found.
pub fn distinct_values(f: &Field, s: u64, domain: Domain, stop_at: Option<usize>) -> Result<usize> {
    let exps = domain_exponents(f, domain)?;
    let mut seen = std::collections::BTreeSet::new();
    for j in exps {
        seen.insert(weil_sum(f, s, f.exp(j)).normalized());
        if let Some(cap) = stop_at {
            if seen.len() >= cap {
                break;
            }
        }
    }
    Ok(seen.len())
}

// ---------------------------------------------------------------------------
// Moments and solution counts
// ---------------------------------------------------------------------------

/// Number of x in the field with (1-x)^s + x^s = 1, by enumeration.
pub fn r_count_bruteforce(f: &Field, s: u64) -> u64 {
    let one = Element::ONE;
    let mut count = 0u64;
    for enc in 0..f.order() {
        let x = Element(enc);
        let xs = pow_u(f, x, s);
        let ys = pow_u(f, f.sub(one, x), s);
        if f.add(xs, ys) == one {
            count += 1;
        }
    }
    count
}

fn pow_u(f: &Field, x: Element, e: u64) -> Element {
    if x.is_zero() {
        return if e == 0 { Element::ONE } else { Element::ZERO };
    }
    let m = f.order() - 1;
    let j = f.log(x).unwrap();
    f.exp((j as u128 * e as u128 % m as u128) as u64)
}

/// First three power moments over every a in the field (a = 0 included),
/// with |R| and the closed-form expectations q, q^2, q^2 |R|.
pub fn moments(f: &Field, s: u64, jobs: usize) -> Result<MomentReport> {
    let q = f.order();
    if gcd(s % (q - 1), q - 1) != 1 {
        return Err(Error::NotInvertible { s });
    }
    let spec = spectrum(f, s, Domain::Units, jobs)?;
    let mut m1 = 0i128;
    let mut m2 = 0i128;
    let mut m3 = 0i128;
    for &(v, mult) in &spec.entries {
        let (v, mult) = (v as i128, mult as i128);
        m1 += v * mult;
        m2 += v * v * mult;
        m3 += v * v * v * mult;
    }
    let r_count = r_count_bruteforce(f, s);
    let expected_m1 = q as i128;
    let expected_m2 = (q as i128) * (q as i128);
    let expected_m3 = expected_m2 * r_count as i128;
    Ok(MomentReport {
        q,
        m1,
        m2,
        m3,
        r_count,
        expected_m1,
        expected_m2,
        expected_m3,
        matches: m1 == expected_m1 && m2 == expected_m2 && m3 == expected_m3,
    })
}

/// sum(W(ab), a in F) for one fixed b, exactly.
pub fn orbit_sum(t: &Tower, s: u64, b: Element) -> Result<i64> {
    require_normalized(t, s)?;
    let f = t.field();
    let mut total = 0i64;
    // a = 0 contributes W(0) = 0.
    for a in t.base_units() {
        total += weil_via_kset(t, s, f.mul(a, b))?;
    }
    Ok(total)
}

/// Orbit sums across the whole transversal of L*/F*: the subfield coset is
/// recorded against the stated constant q-1 (observed q on every fixture);
/// all other cosets must vanish.
pub fn orbit_report(t: &Tower, s: u64) -> Result<OrbitReport> {
    require_normalized(t, s)?;
    let f = t.field();
    let q = f.order();
    // One pass of W over L*, indexed by exponent.
    let m = q - 1;
    let mut w = vec![0i64; m as usize];
    for (j, slot) in w.iter_mut().enumerate() {
        *slot = weil_via_kset(t, s, f.exp(j as u64))?;
    }
    let pm = t.base_order();
    let step = pm + 1;
    let mut in_base_value = 0i64;
    let mut outside_all_zero = true;
    let mut first_outside_nonzero = None;
    for rep in t.coset_rep_exps() {
        let total: i64 = (0..pm - 1).map(|i| w[((i * step + rep) % m) as usize]).sum();
        if rep == 0 {
            in_base_value = total;
        } else if total != 0 && first_outside_nonzero.is_none() {
            outside_all_zero = false;
            first_outside_nonzero = Some((rep, total));
        }
    }
    let stated = (q - 1) as i64;
    Ok(OrbitReport {
        in_base_value,
        stated_in_base_value: stated,
        matches_stated: in_base_value == stated,
        outside_all_zero,
        first_outside_nonzero,
    })
}
