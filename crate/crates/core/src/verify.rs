//! Verification harnesses: theorem-level checks run exhaustively at desk
//! scale, and empirical scanners for the open conjectures.
//!
//! A scan walks admissible (p, n, k) tuples in canonical order, evaluates one
//! verdict per tuple, and streams the verdicts so interrupted runs can resume
//! from what was already persisted. Workers parallelize within a field; the
//! emitted order is independent of the worker count.

use std::collections::{BTreeMap, HashSet};

use num::{BigInt, BigRational, FromPrimitive, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::arith::{gcd, is_prime, pow_u128};
use crate::error::{Error, Result};
use crate::field::{Element, Field, Tower, DEFAULT_SIZE_CAP};
use crate::niho::{self, hypothesis_check};
use crate::report::spectrum_digest;
use crate::weil::{distinct_values, weil_integer, weil_via_kset, Domain, Spectrum};

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Holds,
    Fails,
    Vacuous,
}

/// One verification result. `n` is the subfield degree for tower suites and
/// the full field degree for plain-field suites.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct Verdict {
    pub conjecture: String,
    pub p: u64,
    pub n: u32,
    pub k: Option<u64>,
    pub s: u64,
    pub outcome: Outcome,
    pub witness: Option<serde_json::Value>,
    pub spectrum_digest: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

pub type ScanKey = (u64, u32, Option<u64>, u64);

impl Verdict {
    pub fn key(&self) -> ScanKey {
        (self.p, self.n, self.k, self.s)
    }
}

// ---------------------------------------------------------------------------
// Shared per-exponent analysis over a tower
// ---------------------------------------------------------------------------

/// Everything one tuple verdict needs: the full spectrum over the unit group
/// of L (via the coset-count path) and where the zeros sit.
pub struct TowerExponentAnalysis {
    pub s: u64,
    pub k: u64,
    pub d1: u64,
    pub d2: u64,
    pub spectrum: Spectrum,
    pub zero_encodings: Vec<u64>,
}

pub fn analyze_tower_exponent(t: &Tower, k: u64) -> Result<TowerExponentAnalysis> {
    let f = t.field();
    let pn = t.base_order();
    debug_assert!(k <= pn);
    let s = 1 + k * (pn - 1);
    let m = f.order() - 1;
    let mut entries: BTreeMap<i64, u64> = BTreeMap::new();
    let mut zeros = Vec::new();
    for j in 0..m {
        let w = weil_via_kset(t, s, f.exp(j))?;
        *entries.entry(w).or_insert(0) += 1;
        if w == 0 {
            zeros.push(f.exp(j).encoding());
        }
    }
    zeros.sort_unstable();
    let d1 = gcd(k, pn + 1);
    let d2 = gcd((k + pn) % (pn + 1), pn + 1);
    Ok(TowerExponentAnalysis {
        s,
        k,
        d1,
        d2,
        spectrum: Spectrum {
            p: f.characteristic(),
            deg: f.degree(),
            s,
            domain: Domain::Units,
            entries: entries.into_iter().collect(),
        },
        zero_encodings: zeros,
    })
}

/// All a in the unit group of L with W(a) = 0, ascending by encoding.
pub fn vanishing_witnesses(t: &Tower, s: u64) -> Result<Vec<Element>> {
    let c = niho::classify(t, s);
    if !c.invertible {
        return Err(Error::NotInvertible { s });
    }
    let norm = c.normalized.ok_or(Error::NotNormalized { s })?;
    let analysis = analyze_tower_exponent(t, norm.k)?;
    Ok(analysis.zero_encodings.into_iter().map(Element).collect())
}

// ---------------------------------------------------------------------------
// Vanishing (proved for Niho exponents)
// ---------------------------------------------------------------------------

/// Confirm a zero value exists in the spectrum and return it as a witness,
/// re-checked through the naive path before the verdict is emitted.
pub fn verify_vanishing(t: &Tower, s: u64) -> Result<Verdict> {
    let f = t.field();
    let c = niho::classify(t, s);
    if !c.invertible {
        return Err(Error::NotInvertible { s });
    }
    let norm = c.normalized.ok_or(Error::NotNormalized { s })?;
    let analysis = analyze_tower_exponent(t, norm.k)?;
    let digest = Some(spectrum_digest(&analysis.spectrum));
    let base = Verdict {
        conjecture: "vanishing".into(),
        p: f.characteristic(),
        n: t.half_degree(),
        k: Some(norm.k),
        s: c.s,
        outcome: Outcome::Holds,
        witness: None,
        spectrum_digest: digest,
        reason: None,
    };
    match analysis.zero_encodings.first() {
        Some(&enc) => {
            let a = Element(enc);
            let naive = weil_integer(f, analysis.s, a)?;
            if naive != 0 {
                return Err(Error::PathMismatch { s: analysis.s, a: enc, naive, accelerated: 0 });
            }
            Ok(Verdict {
                witness: Some(witness_element(f, a, 0)),
                ..base
            })
        }
        None => Ok(Verdict {
            outcome: Outcome::Fails,
            reason: Some("no zero value in the spectrum".into()),
            witness: Some(json!({ "spectrum": analysis.spectrum.entries })),
            ..base
        }),
    }
}

fn witness_element(f: &Field, a: Element, value: i64) -> serde_json::Value {
    json!({
        "encoding": a.encoding(),
        "poly": f.format_element(a),
        "g_pow": f.log(a),
        "value": value,
    })
}

// ---------------------------------------------------------------------------
// Spectrum cardinality (two-valued iff degenerate; three-valued watch)
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CardinalityReport {
    pub r: usize,
    pub degenerate: bool,
    /// r = 2 exactly when s is degenerate.
    pub consistent: bool,
    /// [F : F_p] is a power of two, the three-valued conjecture's scope.
    pub power_of_two_degree: bool,
    /// A would-be counterexample: three-valued inside the conjecture's scope.
    pub three_valued_anomaly: bool,
}

pub fn spectrum_cardinality(f: &Field, s: u64) -> Result<CardinalityReport> {
    if gcd(s % (f.order() - 1), f.order() - 1) != 1 {
        return Err(Error::NotInvertible { s });
    }
    let r = distinct_values(f, s, Domain::Units, None)?;
    let degenerate = niho::is_degenerate(f, s);
    let deg = f.degree();
    let power_of_two_degree = deg.is_power_of_two();
    Ok(CardinalityReport {
        r,
        degenerate,
        consistent: (r == 2) == degenerate,
        power_of_two_degree,
        three_valued_anomaly: power_of_two_degree && r == 3,
    })
}

// ---------------------------------------------------------------------------
// Exact multiplicity system
// ---------------------------------------------------------------------------

/// The unique rational solution of the four moment equations for the
/// hypothesized value set {-p^n, 0, 2a p^n, (d1+d2-2) p^n}.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicitySolution {
    pub pn: u64,
    pub d1: u64,
    pub d2: u64,
    pub alpha: u64,
    /// beta from (2 beta + 1) = d1 + d2 - 2, when that value is odd.
    pub beta: Option<u64>,
    pub m: [BigRational; 4],
    pub feasible: bool,
}

fn rat(v: i128) -> BigRational {
    BigRational::from(BigInt::from_i128(v).expect("i128 fits"))
}

impl MultiplicitySolution {
    /// h-unit values (-1, 0, 2 alpha, d1+d2-2) the system was solved for.
    pub fn h_values(&self) -> [i128; 4] {
        [-1, 0, 2 * self.alpha as i128, (self.d1 + self.d2) as i128 - 2]
    }

    /// Right-hand sides (p^2n, p^n, p^2n, p^n |R|).
    pub fn rhs(&self) -> [i128; 4] {
        let pn = self.pn as i128;
        let d1 = self.d1 as i128;
        let d2 = self.d2 as i128;
        let r = pn + (d1 - 1) * (d1 - 2) + (d2 - 1) * (d2 - 2);
        [pn * pn, pn, pn * pn, pn * r]
    }

    /// Substitute the solution back into all four equations.
    pub fn satisfies_system(&self) -> bool {
        let values = self.h_values();
        let rhs = self.rhs();
        for (row, &want) in rhs.iter().enumerate() {
            let mut acc = BigRational::zero();
            for (i, m) in self.m.iter().enumerate() {
                acc += m * rat(values[i].pow(row as u32));
            }
            if acc != rat(want) {
                return false;
            }
        }
        true
    }

    /// Integer multiplicities when feasible.
    pub fn counts(&self) -> Option<[u64; 4]> {
        if !self.feasible {
            return None;
        }
        let mut out = [0u64; 4];
        for (slot, m) in out.iter_mut().zip(&self.m) {
            *slot = m.to_integer().to_u64()?;
        }
        Some(out)
    }
}

/// Solve the 4x4 system exactly by Gaussian elimination over the rationals.
pub fn multiplicity_solver(d1: u64, d2: u64, alpha: u64, pn: u64) -> Result<MultiplicitySolution> {
    let dsum = d1 + d2;
    if dsum < 3 {
        return Err(Error::SingularSystem { detail: format!("d1 + d2 = {dsum} < 3") });
    }
    if alpha == 0 {
        return Err(Error::SingularSystem { detail: "alpha = 0 collides with the zero value".into() });
    }
    let values: [i128; 4] = [-1, 0, 2 * alpha as i128, dsum as i128 - 2];
    for i in 0..4 {
        for j in i + 1..4 {
            if values[i] == values[j] {
                return Err(Error::SingularSystem {
                    detail: format!("coincident values {} and {}", values[i], values[j]),
                });
            }
        }
    }
    let pn_i = pn as i128;
    let r = pn_i + (d1 as i128 - 1) * (d1 as i128 - 2) + (d2 as i128 - 1) * (d2 as i128 - 2);
    let rhs: [i128; 4] = [pn_i * pn_i, pn_i, pn_i * pn_i, pn_i * r];

    // Augmented Vandermonde-style matrix, rows are power sums 0..3.
    let mut aug: Vec<Vec<BigRational>> = (0..4)
        .map(|row| {
            let mut line: Vec<BigRational> =
                values.iter().map(|&v| rat(v.pow(row as u32))).collect();
            line.push(rat(rhs[row]));
            line
        })
        .collect();

    for col in 0..4 {
        let pivot_row = (col..4)
            .find(|&r| !aug[r][col].is_zero())
            .ok_or_else(|| Error::SingularSystem { detail: format!("zero pivot in column {col}") })?;
        aug.swap(col, pivot_row);
        let pivot = aug[col][col].clone();
        for item in aug[col].iter_mut() {
            *item /= pivot.clone();
        }
        for row in 0..4 {
            if row != col && !aug[row][col].is_zero() {
                let factor = aug[row][col].clone();
                for cc in 0..5 {
                    let delta = &factor * &aug[col][cc];
                    aug[row][cc] -= delta;
                }
            }
        }
    }
    let m: [BigRational; 4] = std::array::from_fn(|i| aug[i][4].clone());
    let feasible = m.iter().all(|v| v.is_integer() && !v.is_negative())
        && m[3] >= BigRational::from(BigInt::from(1));
    let beta = if dsum % 2 == 1 { Some((dsum - 3) / 2) } else { None };
    let sol = MultiplicitySolution { pn, d1, d2, alpha, beta, m, feasible };
    debug_assert!(sol.satisfies_system());
    Ok(sol)
}

/// The closed-form solution of the same system, for cross-checking the
/// eliminator. Returns None when a denominator vanishes.
pub fn multiplicity_closed_form(
    d1: u64,
    d2: u64,
    alpha: u64,
    pn: u64,
) -> Option<[BigRational; 4]> {
    let (d1, d2, a, pn) = (d1 as i128, d2 as i128, alpha as i128, pn as i128);
    let dsum = d1 + d2;
    let dsq = d1 * d1 + d2 * d2;
    let den1 = (2 * a + 1) * (dsum - 1);
    let den2 = 2 * a * (dsum - 2);
    let den3 = 2 * (2 * a - dsum + 2) * (2 * a + 1) * a;
    let den4 = (2 * a - dsum + 2) * (dsum - 1) * (dsum - 2);
    if den1 == 0 || den2 == 0 || den3 == 0 || den4 == 0 {
        return None;
    }
    let num1 = -pn * (dsq + (2 * a - pn - 3) * dsum - pn * (2 * a - 3) + 4 * (1 - a));
    let num2 = pn * (dsum * (2 * a * (pn + 1) - pn - 4) + dsq - 6 * a * (pn + 1) + 2 * (2 * pn + 3));
    let num3 = pn * (dsq - (pn + 4) * dsum + 2 * (2 * pn + 3));
    let num4 = -pn * (dsq - 2 * pn * (a - 1) - 3 * dsum + 4 - 2 * a);
    Some([
        rat(num1) / rat(den1),
        rat(num2) / rat(den2),
        rat(num3) / rat(den3),
        rat(num4) / rat(den4),
    ])
}

// ---------------------------------------------------------------------------
// Four- and five-value checks
// ---------------------------------------------------------------------------

fn value_presence(spec: &Spectrum, pn: i64, dsum: i64) -> serde_json::Value {
    let even_positive: Vec<i64> = spec
        .values()
        .filter(|&v| v > 0 && (v / pn) % 2 == 0)
        .collect();
    json!({
        "contains_zero": spec.contains(0),
        "contains_minus_pn": spec.contains(-pn),
        "contains_pn": spec.contains(pn),
        "contains_w1": spec.contains((dsum - 2) * pn),
        "even_positive": even_positive,
    })
}

/// Check the proved four-value content of the spectrum for hypothesis
/// case (i) (d1+d2 >= 5) or case (ii) (d1+d2 = 3, p^n = 11 mod 12).
pub fn verify_four_values(t: &Tower, k: u64) -> Result<Verdict> {
    tower_value_verdict(t, k, "four_values", false)
}

/// Empirical five-valuedness scan with the solver cross-route.
pub fn verify_five_values(t: &Tower, k: u64) -> Result<Verdict> {
    tower_value_verdict(t, k, "five_value_i", true)
}

fn tower_value_verdict(t: &Tower, k: u64, conjecture: &str, five: bool) -> Result<Verdict> {
    let f = t.field();
    let p = f.characteristic();
    let n = t.half_degree();
    let pn = t.base_order();
    let s_nominal = 1 + k * (pn - 1);
    let h = hypothesis_check(k, p, n);
    let base = Verdict {
        conjecture: conjecture.into(),
        p,
        n,
        k: Some(k),
        s: s_nominal,
        outcome: Outcome::Vacuous,
        witness: None,
        spectrum_digest: None,
        reason: None,
    };
    if !h.invertible {
        return Ok(Verdict { reason: Some("s not invertible over L".into()), ..base });
    }
    let wanted_case = if conjecture == "five_value_ii" { h.case_ii } else { h.case_i || h.case_ii };
    if !wanted_case {
        return Ok(Verdict {
            reason: Some(format!("hypotheses not satisfied (d1={}, d2={})", h.d1, h.d2)),
            ..base
        });
    }

    let analysis = analyze_tower_exponent(t, k)?;
    let spec = &analysis.spectrum;
    let digest = Some(spectrum_digest(spec));
    let pn_i = pn as i64;
    let dsum = (h.d1 + h.d2) as i64;
    let presence = value_presence(spec, pn_i, dsum);

    let mut problems: Vec<String> = Vec::new();
    if !spec.contains(0) {
        problems.push("missing value 0".into());
    }
    if !spec.contains(-pn_i) {
        problems.push(format!("missing value {}", -pn_i));
    }
    if h.case_i && !h.case_ii {
        if !spec.contains((dsum - 2) * pn_i) {
            problems.push(format!("missing odd value {}", (dsum - 2) * pn_i));
        }
        let has_even_positive = spec.values().any(|v| v > 0 && (v / pn_i) % 2 == 0);
        if !has_even_positive {
            problems.push("missing an even positive value".into());
        }
    } else {
        // case (ii): the four values are pinned exactly.
        for v in [pn_i, 2 * pn_i] {
            if !spec.contains(v) {
                problems.push(format!("missing value {v}"));
            }
        }
    }

    let mut witness = presence;
    if five {
        let r = spec.distinct();
        if r < 5 {
            problems.push(format!("spectrum has only {r} values"));
        }
        // Independent route: every admissible alpha must give an infeasible
        // exact 4-value solution.
        let mut feasible_alphas = Vec::new();
        for alpha in 1..=(pn - 1) / 2 {
            if multiplicity_solver(h.d1, h.d2, alpha, pn)?.feasible {
                feasible_alphas.push(alpha);
            }
        }
        let refuted = feasible_alphas.is_empty();
        // Soundness: a full moment refutation forces a fifth value.
        if refuted && r < 5 {
            return Err(Error::SingularSystem {
                detail: format!(
                    "solver refutes every 4-value hypothesis but enumeration found {r} values \
                     for p={p} n={n} k={k}"
                ),
            });
        }
        if let serde_json::Value::Object(map) = &mut witness {
            map.insert("distinct".into(), json!(r));
            map.insert("solver_refutes_four_values".into(), json!(refuted));
            map.insert("feasible_alphas".into(), json!(feasible_alphas));
        }
    }

    if problems.is_empty() {
        Ok(Verdict { outcome: Outcome::Holds, witness: Some(witness), spectrum_digest: digest, ..base })
    } else {
        Ok(Verdict {
            outcome: Outcome::Fails,
            witness: Some(witness),
            spectrum_digest: digest,
            reason: Some(problems.join("; ")),
            ..base
        })
    }
}

/// Three-valued watch for one exponent over one field.
pub fn three_valued_verdict(f: &Field, s: u64) -> Result<Verdict> {
    let base = Verdict {
        conjecture: "three_valued".into(),
        p: f.characteristic(),
        n: f.degree(),
        k: None,
        s,
        outcome: Outcome::Holds,
        witness: None,
        spectrum_digest: None,
        reason: None,
    };
    let r = distinct_values(f, s, Domain::Units, Some(4))?;
    if r >= 4 {
        return Ok(base);
    }
    let degenerate = niho::is_degenerate(f, s);
    if r == 2 && degenerate {
        return Ok(base);
    }
    if r == 3 {
        return Ok(Verdict {
            outcome: Outcome::Fails,
            reason: Some("three-valued spectrum inside the conjecture's scope".into()),
            witness: Some(json!({ "distinct": 3 })),
            ..base
        });
    }
    Ok(Verdict {
        outcome: Outcome::Fails,
        reason: Some(format!("{r}-valued spectrum inconsistent with degeneracy = {degenerate}")),
        witness: Some(json!({ "distinct": r })),
        ..base
    })
}

// ---------------------------------------------------------------------------
// Scanning
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Vanishing,
    FourValues,
    FiveValueI,
    FiveValueII,
    ThreeValued,
}

impl Suite {
    pub fn id(self) -> &'static str {
        match self {
            Suite::Vanishing => "vanishing",
            Suite::FourValues => "four_values",
            Suite::FiveValueI => "five_value_i",
            Suite::FiveValueII => "five_value_ii",
            Suite::ThreeValued => "three_valued",
        }
    }

    pub fn parse(text: &str) -> Option<Suite> {
        match text {
            "vanishing" => Some(Suite::Vanishing),
            "four_values" | "four-values" => Some(Suite::FourValues),
            "five_value_i" | "five-value-i" => Some(Suite::FiveValueI),
            "five_value_ii" | "five-value-ii" => Some(Suite::FiveValueII),
            "three_valued" | "three-valued" => Some(Suite::ThreeValued),
            _ => None,
        }
    }

    pub const ALL: [Suite; 5] = [
        Suite::Vanishing,
        Suite::FourValues,
        Suite::FiveValueI,
        Suite::FiveValueII,
        Suite::ThreeValued,
    ];
}

#[derive(Clone, Copy, Debug)]
pub struct ScanConfig {
    pub suite: Suite,
    /// Cap on the order of the field the sums range over.
    pub max_q: u64,
    pub jobs: usize,
    pub size_cap: u64,
}

impl ScanConfig {
    pub fn new(suite: Suite, max_q: u64) -> ScanConfig {
        ScanConfig { suite, max_q, jobs: 1, size_cap: DEFAULT_SIZE_CAP }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScanSummary {
    pub total: u64,
    pub holds: u64,
    pub fails: u64,
    pub vacuous: u64,
    /// Five-value suites: how many holds-tuples did / did not contain the
    /// value p^n itself (the conjecture's "moreover" clause).
    pub pn_value_present: u64,
    pub pn_value_absent: u64,
}

impl ScanSummary {
    fn absorb(&mut self, v: &Verdict) {
        self.total += 1;
        match v.outcome {
            Outcome::Holds => self.holds += 1,
            Outcome::Fails => self.fails += 1,
            Outcome::Vacuous => self.vacuous += 1,
        }
        if v.outcome == Outcome::Holds {
            if let Some(serde_json::Value::Object(map)) = &v.witness {
                match map.get("contains_pn") {
                    Some(serde_json::Value::Bool(true)) => self.pn_value_present += 1,
                    Some(serde_json::Value::Bool(false)) => self.pn_value_absent += 1,
                    _ => {}
                }
            }
        }
    }
}

/// Quadratic towers (p, n) with p odd prime and p^(2n) <= max_q, ascending.
pub fn towers_up_to(max_q: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 3u64;
    while (p as u128) * (p as u128) <= max_q as u128 {
        if is_prime(p) {
            let mut n = 1u32;
            while pow_u128(p, 2 * n) <= max_q as u128 {
                out.push((p, n));
                n += 1;
            }
        }
        p += 2;
    }
    out
}

/// Odd-characteristic fields whose degree is a power of two, up to max_q.
pub fn power_of_two_degree_fields(max_q: u64, min_degree: u32) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 3u64;
    while pow_u128(p, min_degree.max(1)) <= max_q as u128 {
        if is_prime(p) {
            let mut deg = min_degree.max(1);
            debug_assert!(deg.is_power_of_two());
            while pow_u128(p, deg) <= max_q as u128 {
                out.push((p, deg));
                deg *= 2;
            }
        }
        p += 2;
    }
    out
}

fn par_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let jobs = jobs.max(1).min(items.len().max(1));
    if jobs == 1 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    std::thread::scope(|scope| {
        let f = &f;
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(f).collect::<Vec<R>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("scan worker panicked"))
            .collect()
    })
}

/// Run a scan, emitting verdicts in canonical (p, n, k/s) order. Tuples whose
/// keys appear in `skip` are not recomputed (resume support). The sink is
/// called once per fresh verdict, in order, before the scan advances.
pub fn scan(
    cfg: &ScanConfig,
    skip: &HashSet<ScanKey>,
    emit: &mut dyn FnMut(&Verdict) -> std::io::Result<()>,
) -> Result<ScanSummary> {
    let mut summary = ScanSummary::default();
    let mut send = |summary: &mut ScanSummary, v: &Verdict| -> Result<()> {
        summary.absorb(v);
        emit(v).map_err(|e| Error::Sink(e.to_string()))
    };

    match cfg.suite {
        Suite::ThreeValued => {
            for &(p, deg) in &power_of_two_degree_fields(cfg.max_q, 1) {
                let q = pow_u128(p, deg) as u64;
                let group = q - 1;
                let todo: Vec<u64> = (1..group)
                    .filter(|&s| gcd(s, group) == 1)
                    .filter(|&s| !skip.contains(&(p, deg, None, s)))
                    .collect();
                if todo.is_empty() {
                    continue;
                }
                let f = Field::build_with_cap(p, deg, cfg.size_cap)?;
                let verdicts = par_map(&todo, cfg.jobs, |&s| three_valued_verdict(&f, s));
                for v in verdicts {
                    send(&mut summary, &v?)?;
                }
            }
        }
        suite => {
            for &(p, n) in &towers_up_to(cfg.max_q) {
                let pn = pow_u128(p, n) as u64;
                let todo: Vec<u64> = (2..=pn)
                    .filter(|&k| !skip.contains(&(p, n, Some(k), 1 + k * (pn - 1))))
                    .collect();
                if todo.is_empty() {
                    continue;
                }
                let f = Field::build_with_cap(p, 2 * n, cfg.size_cap)?;
                let t = f.tower()?;
                let verdicts = par_map(&todo, cfg.jobs, |&k| tower_tuple_verdict(suite, &t, k));
                for v in verdicts {
                    send(&mut summary, &v?)?;
                }
            }
        }
    }
    Ok(summary)
}

fn tower_tuple_verdict(suite: Suite, t: &Tower, k: u64) -> Result<Verdict> {
    let f = t.field();
    let p = f.characteristic();
    let n = t.half_degree();
    let pn = t.base_order();
    let s = 1 + k * (pn - 1);
    match suite {
        Suite::Vanishing => {
            if gcd(s, f.order() - 1) != 1 {
                return Ok(Verdict {
                    conjecture: "vanishing".into(),
                    p,
                    n,
                    k: Some(k),
                    s,
                    outcome: Outcome::Vacuous,
                    witness: None,
                    spectrum_digest: None,
                    reason: Some("s not invertible over L".into()),
                });
            }
            verify_vanishing(t, s)
        }
        Suite::FourValues => verify_four_values(t, k),
        Suite::FiveValueI => verify_five_values(t, k),
        Suite::FiveValueII => tower_value_verdict(t, k, "five_value_ii", true),
        Suite::ThreeValued => unreachable!("handled by the field loop"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vanishing_on_gf9() {
        let f = Field::build(3, 2).unwrap();
        let t = f.tower().unwrap();
        let v = verify_vanishing(&t, 5).unwrap();
        assert_eq!(v.outcome, Outcome::Holds);
        // First zero in encoding order is i = x, encoding 3.
        assert_eq!(v.witness.as_ref().unwrap()["encoding"], 3);
        let wits = vanishing_witnesses(&t, 5).unwrap();
        assert_eq!(wits, vec![Element(3), Element(6)]);
    }

    #[test]
    fn vanishing_on_gf25_and_degenerate() {
        let f = Field::build(5, 2).unwrap();
        let t = f.tower().unwrap();
        assert_eq!(verify_vanishing(&t, 13).unwrap().outcome, Outcome::Holds);
        // Degenerate s = 5 over GF(25): zeros everywhere off a = 1.
        let v = verify_vanishing(&t, 5).unwrap();
        assert_eq!(v.outcome, Outcome::Holds);
        assert_eq!(v.witness.as_ref().unwrap()["encoding"], 2);
        // Non-invertible and non-Niho preconditions surface as errors.
        let f9 = Field::build(3, 2).unwrap();
        let t9 = f9.tower().unwrap();
        assert!(matches!(verify_vanishing(&t9, 2), Err(Error::NotInvertible { s: 2 })));
    }

    #[test]
    fn cardinality_reports() {
        let f = Field::build(3, 2).unwrap();
        let r3 = spectrum_cardinality(&f, 3).unwrap();
        assert_eq!(r3.r, 2);
        assert!(r3.degenerate && r3.consistent && r3.power_of_two_degree);
        let r5 = spectrum_cardinality(&f, 5).unwrap();
        assert_eq!(r5.r, 4);
        assert!(!r5.degenerate && r5.consistent && !r5.three_valued_anomaly);
        let f25 = Field::build(5, 2).unwrap();
        assert!(spectrum_cardinality(&f25, 13).unwrap().r >= 5);
    }

    #[test]
    fn solver_golden_cases() {
        // GF(9), s = 5: the actual spectrum multiplicities, a = 0 included.
        let sol = multiplicity_solver(2, 1, 1, 3).unwrap();
        assert!(sol.feasible);
        assert_eq!(sol.counts().unwrap(), [2, 3, 1, 3]);
        assert_eq!(sol.beta, Some(0));

        // GF(25), s = 13: m4 = 0 refutes the 4-value hypothesis.
        let sol = multiplicity_solver(3, 2, 1, 5).unwrap();
        assert!(!sol.feasible);
        let m: Vec<i64> = sol.m.iter().map(|v| v.to_integer().to_i64().unwrap()).collect();
        assert_eq!(m, vec![5, 15, 5, 0]);

        // d1 + d2 = 3 at p^n = 11: m1 = 110/3 is not an integer.
        let sol = multiplicity_solver(1, 2, 1, 11).unwrap();
        assert!(!sol.feasible);
        assert_eq!(sol.m[0], rat(110) / rat(3));
        assert!(sol.satisfies_system());
    }

    #[test]
    fn solver_rejects_singular_inputs() {
        assert!(matches!(multiplicity_solver(1, 1, 1, 3), Err(Error::SingularSystem { .. })));
        assert!(matches!(multiplicity_solver(2, 1, 0, 3), Err(Error::SingularSystem { .. })));
        // Even d1 + d2 can collide 2 alpha with d1 + d2 - 2.
        assert!(matches!(multiplicity_solver(2, 2, 1, 3), Err(Error::SingularSystem { .. })));
    }

    #[test]
    fn solver_matches_closed_forms() {
        for (d1, d2) in [(2u64, 1u64), (3, 2), (1, 2), (5, 2), (2, 3), (4, 3)] {
            for alpha in 1..6u64 {
                for pn in [3u64, 5, 11, 13, 25] {
                    let closed = multiplicity_closed_form(d1, d2, alpha, pn);
                    let solved = multiplicity_solver(d1, d2, alpha, pn);
                    match (closed, solved) {
                        (Some(cf), Ok(sol)) => {
                            assert_eq!(cf, sol.m, "d1={d1} d2={d2} a={alpha} pn={pn}")
                        }
                        (None, Err(_)) => {}
                        (c, s) => panic!(
                            "route disagreement d1={d1} d2={d2} a={alpha} pn={pn}: {c:?} vs {s:?}"
                        ),
                    }
                }
            }
        }
    }

    #[test]
    fn four_and_five_value_verdicts_on_gf25() {
        let f = Field::build(5, 2).unwrap();
        let t = f.tower().unwrap();
        let four = verify_four_values(&t, 3).unwrap();
        assert_eq!(four.outcome, Outcome::Holds);
        let five = verify_five_values(&t, 3).unwrap();
        assert_eq!(five.outcome, Outcome::Holds);
        let w = five.witness.as_ref().unwrap();
        assert_eq!(w["solver_refutes_four_values"], true);
        assert_eq!(w["contains_pn"], true);
        // k = 2 over GF(9): d1 + d2 = 3 and 3 != 11 mod 12, so vacuous.
        let f9 = Field::build(3, 2).unwrap();
        let t9 = f9.tower().unwrap();
        let v = verify_five_values(&t9, 2).unwrap();
        assert_eq!(v.outcome, Outcome::Vacuous);
    }

    #[test]
    fn vanishing_scan_is_order_stable_and_resumable() {
        let cfg = ScanConfig { suite: Suite::Vanishing, max_q: 200, jobs: 2, size_cap: 1 << 20 };
        let mut all = Vec::new();
        scan(&cfg, &HashSet::new(), &mut |v| {
            all.push(v.clone());
            Ok(())
        })
        .unwrap();
        assert!(!all.is_empty());
        assert!(all.iter().all(|v| v.outcome != Outcome::Fails));
        // Keys ascend.
        let keys: Vec<_> = all.iter().map(|v| v.key()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        // Resuming with the first half done yields exactly the second half.
        let done: HashSet<_> = keys[..keys.len() / 2].iter().copied().collect();
        let mut rest = Vec::new();
        scan(&cfg, &done, &mut |v| {
            rest.push(v.clone());
            Ok(())
        })
        .unwrap();
        assert_eq!(rest, all[keys.len() / 2..]);
        // Worker count does not change the stream.
        let cfg1 = ScanConfig { jobs: 1, ..cfg };
        let mut again = Vec::new();
        scan(&cfg1, &HashSet::new(), &mut |v| {
            again.push(v.clone());
            Ok(())
        })
        .unwrap();
        assert_eq!(again, all);
    }

    #[test]
    fn five_value_ii_is_vacuous_at_desk_scale() {
        let cfg = ScanConfig { suite: Suite::FiveValueII, max_q: 2000, jobs: 2, size_cap: 1 << 20 };
        let summary = scan(&cfg, &HashSet::new(), &mut |_| Ok(())).unwrap();
        assert_eq!(summary.holds, 0);
        assert_eq!(summary.fails, 0);
        assert_eq!(summary.vacuous, summary.total);
    }

    #[test]
    fn verdict_serialization_shape() {
        let v = Verdict {
            conjecture: "five_value_i".into(),
            p: 5,
            n: 1,
            k: Some(3),
            s: 13,
            outcome: Outcome::Holds,
            witness: None,
            spectrum_digest: Some("abc".into()),
            reason: None,
        };
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(
            json,
            r#"{"conjecture":"five_value_i","p":5,"n":1,"k":3,"s":13,"outcome":"holds","witness":null,"spectrum_digest":"abc"}"#
        );
        let back: Verdict = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
    }
}
