//! Table-driven GF(p^n) with a quadratic-tower view.
//!
//! Elements are integer encodings of polynomial coordinates: an element with
//! coordinates (c_0, ..., c_{n-1}) has encoding sum(c_i * p^i), so zero is 0
//! and the residue class of x is p. Construction is deterministic: the
//! modulus is the lexicographically least monic irreducible by (c_0, c_1, ...)
//! and the generator is the primitive element of least encoding. Runtime
//! arithmetic is pure table lookup (log/antilog plus a Zech logarithm table
//! for addition); all tables are immutable after construction.

use crate::arith::{self, is_prime, mod_pow, pow_u128};
use crate::error::{Error, Result};
use crate::poly;

/// Default cap on q = p^n. Fields above the cap are rejected, not degraded.
pub const DEFAULT_SIZE_CAP: u64 = 1 << 26;

const SENTINEL: u32 = u32::MAX;

/// A field element, stored by integer encoding.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Element(pub u64);

impl Element {
    pub const ZERO: Element = Element(0);
    pub const ONE: Element = Element(1);

    pub fn encoding(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct TowerTables {
    rel_trace: Vec<u32>,
    rel_norm: Vec<u32>,
    /// Indexed by exponent: is rel_trace(g^j) zero?
    rel_trace_zero_exp: Vec<bool>,
}

/// GF(p^n) with full log/antilog/Zech/trace tables.
pub struct Field {
    p: u64,
    deg: u32,
    q: u64,
    modulus: Vec<u64>,
    generator: Element,
    antilog: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    trace_enc: Vec<u32>,
    trace_exp: Vec<u32>,
    tower: Option<TowerTables>,
    /// Exponent of -1, i.e. (q-1)/2 for odd p and 0 for p = 2.
    minus_one_exp: u64,
}

impl std::fmt::Debug for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("deg", &self.deg)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish_non_exhaustive()
    }
}

impl Field {
    /// Build GF(p^n) under the default size cap.
    pub fn build(p: u64, deg: u32) -> Result<Field> {
        Field::build_with_cap(p, deg, DEFAULT_SIZE_CAP)
    }

    pub fn build_with_cap(p: u64, deg: u32, cap: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        assert!(deg >= 1, "extension degree must be at least 1");
        let q_wide = pow_u128(p, deg);
        if q_wide > cap as u128 {
            return Err(Error::SizeCap { q: q_wide, cap });
        }
        let q = q_wide as u64;

        let modulus = minimal_irreducible(p, deg);
        let ctx = BuildCtx { p, deg: deg as usize, q, modulus: &modulus };

        let generator = find_generator(&ctx);

        // Fill antilog by repeated multiplication by the generator.
        let mut antilog = vec![0u32; (q - 1) as usize];
        let mut acc = 1u64;
        for slot in antilog.iter_mut() {
            *slot = acc as u32;
            acc = ctx.mul(acc, generator);
        }
        debug_assert_eq!(acc, 1, "generator order must be exactly q-1");

        let mut log = vec![SENTINEL; q as usize];
        for (j, &enc) in antilog.iter().enumerate() {
            log[enc as usize] = j as u32;
        }

        // Zech logarithms: zech[j] = log(1 + g^j), SENTINEL where 1 + g^j = 0.
        let mut zech = vec![SENTINEL; (q - 1) as usize];
        for j in 0..(q - 1) as usize {
            let sum = ctx.add(antilog[j] as u64, 1);
            if sum != 0 {
                zech[j] = log[sum as usize];
            }
        }

        // Absolute trace is GF(p)-linear: evaluate it on the basis once.
        let basis_traces = basis_traces(&ctx);
        let mut trace_enc = vec![0u32; q as usize];
        for enc in 1..q {
            let mut rest = enc;
            let mut t = 0u64;
            for &bt in &basis_traces {
                let c = rest % p;
                rest /= p;
                t += c * bt;
            }
            trace_enc[enc as usize] = (t % p) as u32;
        }
        let trace_exp: Vec<u32> = antilog.iter().map(|&e| trace_enc[e as usize]).collect();

        let tower = if deg % 2 == 0 {
            Some(build_tower_tables(&ctx, &antilog, p, deg, q))
        } else {
            None
        };

        let minus_one_exp = if p == 2 { 0 } else { (q - 1) / 2 };

        Ok(Field {
            p,
            deg,
            q,
            modulus,
            generator: Element(generator),
            antilog,
            log,
            zech,
            trace_enc,
            trace_exp,
            tower,
            minus_one_exp,
        })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// Monic modulus as (c_0, ..., c_{n-1}, 1).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> Element {
        self.generator
    }

    pub fn element(&self, encoding: u64) -> Result<Element> {
        if encoding < self.q {
            Ok(Element(encoding))
        } else {
            Err(Error::ElementRange { encoding, q: self.q })
        }
    }

    /// g^j for any integer j (reduced mod q-1).
    pub fn exp(&self, j: u64) -> Element {
        Element(self.antilog[(j % (self.q - 1)) as usize] as u64)
    }

    /// Discrete log of a nonzero element.
    pub fn log(&self, x: Element) -> Option<u64> {
        if x.is_zero() {
            None
        } else {
            Some(self.log[x.0 as usize] as u64)
        }
    }

    pub fn add(&self, x: Element, y: Element) -> Element {
        if x.is_zero() {
            return y;
        }
        if y.is_zero() {
            return x;
        }
        let i = self.log[x.0 as usize] as u64;
        let j = self.log[y.0 as usize] as u64;
        let d = (j + (self.q - 1) - i) % (self.q - 1);
        let z = self.zech[d as usize];
        if z == SENTINEL {
            Element::ZERO
        } else {
            self.exp(i + z as u64)
        }
    }

    pub fn neg(&self, x: Element) -> Element {
        if x.is_zero() || self.p == 2 {
            return x;
        }
        let i = self.log[x.0 as usize] as u64;
        self.exp(i + self.minus_one_exp)
    }

    pub fn sub(&self, x: Element, y: Element) -> Element {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Element, y: Element) -> Element {
        if x.is_zero() || y.is_zero() {
            return Element::ZERO;
        }
        let i = self.log[x.0 as usize] as u64;
        let j = self.log[y.0 as usize] as u64;
        self.exp(i + j)
    }

    pub fn inv(&self, x: Element) -> Result<Element> {
        if x.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let i = self.log[x.0 as usize] as u64;
        Ok(self.exp((self.q - 1) - i % (self.q - 1)))
    }

    /// x^e for a signed exponent; 0^0 = 1.
    pub fn pow(&self, x: Element, e: i64) -> Result<Element> {
        if x.is_zero() {
            return match e.cmp(&0) {
                std::cmp::Ordering::Greater => Ok(Element::ZERO),
                std::cmp::Ordering::Equal => Ok(Element::ONE),
                std::cmp::Ordering::Less => Err(Error::ZeroInverse),
            };
        }
        let i = self.log[x.0 as usize] as i128;
        let m = (self.q - 1) as i128;
        let j = (i * e as i128).rem_euclid(m) as u64;
        Ok(self.exp(j))
    }

    /// x^(p^j), the j-th Frobenius power.
    pub fn frobenius(&self, x: Element, j: u32) -> Element {
        if x.is_zero() {
            return x;
        }
        let i = self.log[x.0 as usize] as u64;
        let f = mod_pow(self.p, j as u64, self.q - 1);
        self.exp(i * f % (self.q - 1))
    }

    /// Absolute trace down to GF(p), as a value in [0, p).
    pub fn trace_abs(&self, x: Element) -> u64 {
        self.trace_enc[x.0 as usize] as u64
    }

    #[inline]
    pub(crate) fn trace_of_exp(&self, j: u64) -> u64 {
        self.trace_exp[j as usize] as u64
    }

    /// Discrete log of g^e1 - g^e2, or None when the difference is zero.
    /// Exponents must already be reduced mod q-1.
    #[inline]
    pub(crate) fn diff_log(&self, e1: u64, e2: u64) -> Option<u64> {
        if e1 == e2 {
            return None;
        }
        let m = self.q - 1;
        let d = (e2 + self.minus_one_exp + m - e1) % m;
        // d == 0 would mean g^e1 = -g^e2, a genuine nonzero difference, and
        // zech[0] is well defined there (2 != 0 in odd characteristic).
        let z = self.zech[d as usize];
        debug_assert_ne!(z, SENTINEL);
        Some((e1 + z as u64) % m)
    }

    /// Quadratic-tower view L/F with |F| = p^(n/2). Odd characteristic only.
    pub fn tower(&self) -> Result<Tower<'_>> {
        if self.deg % 2 != 0 {
            return Err(Error::OddDegree { deg: self.deg });
        }
        if self.p == 2 {
            return Err(Error::EvenCharTower);
        }
        let half = self.deg / 2;
        Ok(Tower { field: self, half, base_order: pow_u128(self.p, half) as u64 })
    }

    /// All nonzero elements in encoding order.
    pub fn units(&self) -> impl Iterator<Item = Element> + '_ {
        (1..self.q).map(Element)
    }
}

/// The quadratic extension view: L = the underlying field, F its subfield of
/// order p^(n/2).
#[derive(Debug)]
pub struct Tower<'a> {
    field: &'a Field,
    half: u32,
    base_order: u64,
}

impl<'a> Tower<'a> {
    pub fn field(&self) -> &'a Field {
        self.field
    }

    /// |F| = p^m where the underlying field is GF(p^(2m)).
    pub fn base_order(&self) -> u64 {
        self.base_order
    }

    pub fn half_degree(&self) -> u32 {
        self.half
    }

    /// x + x^(p^m), always an element of F.
    pub fn trace_rel(&self, x: Element) -> Element {
        let t = self.field.tower.as_ref().expect("even degree");
        Element(t.rel_trace[x.0 as usize] as u64)
    }

    /// x^(p^m + 1), always an element of F.
    pub fn norm_rel(&self, x: Element) -> Element {
        let t = self.field.tower.as_ref().expect("even degree");
        Element(t.rel_norm[x.0 as usize] as u64)
    }

    /// Membership in the subfield F.
    pub fn in_base(&self, x: Element) -> bool {
        if x.is_zero() {
            return true;
        }
        let j = self.field.log[x.0 as usize] as u64;
        j % (self.base_order + 1) == 0
    }

    #[inline]
    pub(crate) fn rel_trace_zero_by_exp(&self, j: u64) -> bool {
        let t = self.field.tower.as_ref().expect("even degree");
        t.rel_trace_zero_exp[j as usize]
    }

    /// Exponents of the canonical transversal of L*/F*: g^0 .. g^(p^m).
    pub fn coset_rep_exps(&self) -> impl Iterator<Item = u64> {
        0..=self.base_order
    }

    /// Nonzero subfield elements, ascending by exponent of g.
    pub fn base_units(&self) -> impl Iterator<Item = Element> + '_ {
        let step = self.base_order + 1;
        (0..self.base_order - 1).map(move |i| self.field.exp(i * step))
    }
}

// ---------------------------------------------------------------------------
// Construction helpers
// ---------------------------------------------------------------------------

/// Build-time context doing polynomial arithmetic on encodings.
struct BuildCtx<'m> {
    p: u64,
    deg: usize,
    q: u64,
    modulus: &'m [u64],
}

impl BuildCtx<'_> {
    fn decode(&self, enc: u64) -> Vec<u64> {
        let mut c = vec![0u64; self.deg];
        let mut rest = enc;
        for slot in c.iter_mut() {
            *slot = rest % self.p;
            rest /= self.p;
        }
        c
    }

    fn encode(&self, coeffs: &[u64]) -> u64 {
        let mut enc = 0u64;
        for &c in coeffs.iter().rev() {
            enc = enc * self.p + c % self.p;
        }
        enc
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        let (ca, cb) = (self.decode(a), self.decode(b));
        let sum: Vec<u64> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&sum)
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.deg == 1 {
            return a * b % self.p;
        }
        let prod = poly::mul_mod(&self.decode(a), &self.decode(b), self.modulus, self.p);
        self.encode(&prod)
    }

    fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        let mut sq = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, sq);
            }
            sq = self.mul(sq, sq);
            e >>= 1;
        }
        acc
    }
}

/// Lexicographically least monic irreducible of the given degree, ordered by
/// the coefficient tuple (c_0, c_1, ...). Degree 1 fixes the polynomial x.
fn minimal_irreducible(p: u64, deg: u32) -> Vec<u64> {
    if deg == 1 {
        return vec![0, 1];
    }
    let deg = deg as usize;
    let count = pow_u128(p, deg as u32) as u64;
    for m in 0..count {
        // c_0 is the most significant digit so that counting up in m walks
        // the tuples (c_0, c_1, ...) in lexicographic order.
        let mut f = vec![0u64; deg + 1];
        f[deg] = 1;
        let mut rest = m;
        for i in (0..deg).rev() {
            f[i] = rest % p;
            rest /= p;
        }
        // A reducible poly with zero constant term is skipped fast (root 0).
        if f[0] == 0 {
            continue;
        }
        if poly::is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over GF(p)")
}

/// Primitive element of least encoding, by order checks against the prime
/// factorization of q-1.
fn find_generator(ctx: &BuildCtx) -> u64 {
    let group = ctx.q - 1;
    if group == 1 {
        return 1;
    }
    let prime_divs: Vec<u64> = arith::factorize(group).into_iter().map(|(p, _)| p).collect();
    'candidates: for enc in 2..ctx.q {
        for &r in &prime_divs {
            if ctx.pow(enc, group / r) == 1 {
                continue 'candidates;
            }
        }
        debug_assert_eq!(ctx.pow(enc, group), 1);
        return enc;
    }
    unreachable!("every finite field has a primitive element")
}

/// Trace of each basis element x^i as a value in GF(p).
fn basis_traces(ctx: &BuildCtx) -> Vec<u64> {
    if ctx.deg == 1 {
        return vec![1];
    }
    // Frobenius images x^(p^j) for j < deg, as encodings.
    let x_enc = ctx.p;
    let mut frob = Vec::with_capacity(ctx.deg);
    let mut cur = x_enc;
    frob.push(x_enc);
    for _ in 1..ctx.deg {
        cur = ctx.pow(cur, ctx.p);
        frob.push(cur);
    }
    (0..ctx.deg)
        .map(|i| {
            let mut acc = 0u64;
            for &fj in &frob {
                acc = ctx.add(acc, ctx.pow(fj, i as u64));
            }
            debug_assert!(acc < ctx.p, "basis trace must land in the prime field");
            acc % ctx.p
        })
        .collect()
}

fn build_tower_tables(ctx: &BuildCtx, antilog: &[u32], p: u64, deg: u32, q: u64) -> TowerTables {
    let half = deg / 2;
    let pm = pow_u128(p, half) as u64;
    let group = q - 1;
    let mut rel_trace = vec![0u32; q as usize];
    let mut rel_norm = vec![0u32; q as usize];
    let mut rel_trace_zero_exp = vec![false; group as usize];
    for j in 0..group {
        let enc = antilog[j as usize] as u64;
        // x^(p^m) = g^(j * p^m mod (q-1)).
        let e_conj = (j as u128 * pm as u128 % group as u128) as u64;
        let conj_enc = antilog[e_conj as usize] as u64;
        let tr = ctx.add(enc, conj_enc);
        rel_trace[enc as usize] = tr as u32;
        rel_trace_zero_exp[j as usize] = tr == 0;
        let e_norm = (j as u128 * ((pm + 1) % group) as u128 % group as u128) as u64;
        rel_norm[enc as usize] = antilog[e_norm as usize];
    }
    TowerTables { rel_trace, rel_norm, rel_trace_zero_exp }
}

// ---------------------------------------------------------------------------
// Element text notation
// ---------------------------------------------------------------------------

impl Field {
    /// Accepts an integer encoding ("4"), a polynomial in x ("1+x", "2x^3+1"),
    /// or a generator power ("g^3", "g").
    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::BadElement(text.to_string()));
        }
        if let Some(rest) = t.strip_prefix('g') {
            let j: i64 = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^')
                    .and_then(|e| e.parse().ok())
                    .ok_or_else(|| Error::BadElement(text.to_string()))?
            };
            return self.pow(self.generator, j);
        }
        if t.bytes().all(|b| b.is_ascii_digit()) {
            let enc: u64 = t.parse().map_err(|_| Error::BadElement(text.to_string()))?;
            return self.element(enc);
        }
        self.parse_polynomial(&t, text)
    }

    fn parse_polynomial(&self, t: &str, original: &str) -> Result<Element> {
        let bad = || Error::BadElement(original.to_string());
        let x = Element(self.p % self.q);
        let mut acc = Element::ZERO;
        let mut term = String::new();
        let mut sign = 1i64;
        let mut terms: Vec<(i64, String)> = Vec::new();
        for (i, ch) in t.chars().enumerate() {
            match ch {
                '+' | '-' if i > 0 => {
                    terms.push((sign, std::mem::take(&mut term)));
                    sign = if ch == '+' { 1 } else { -1 };
                }
                '-' => sign = -1,
                _ => term.push(ch),
            }
        }
        terms.push((sign, term));
        for (sgn, body) in terms {
            if body.is_empty() {
                return Err(bad());
            }
            let (coeff_str, power) = match body.find('x') {
                None => (body.as_str(), None),
                Some(ix) => {
                    let after = &body[ix + 1..];
                    let pw: u32 = if after.is_empty() {
                        1
                    } else {
                        after.strip_prefix('^').and_then(|e| e.parse().ok()).ok_or_else(bad)?
                    };
                    (body[..ix].trim_end_matches('*'), Some(pw))
                }
            };
            let coeff: u64 = if coeff_str.is_empty() {
                if power.is_none() {
                    return Err(bad());
                }
                1
            } else {
                coeff_str.parse().map_err(|_| bad())?
            };
            let coeff = coeff % self.p;
            let coeff = if sgn < 0 { (self.p - coeff) % self.p } else { coeff };
            let mut term_val = Element(coeff);
            if let Some(pw) = power {
                term_val = self.mul(term_val, self.pow(x, pw as i64)?);
            }
            acc = self.add(acc, term_val);
        }
        Ok(acc)
    }

    /// Polynomial display form, e.g. "1+2x" or "0".
    pub fn format_element(&self, e: Element) -> String {
        if e.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        let mut rest = e.0;
        let mut i = 0u32;
        while rest > 0 {
            let c = rest % self.p;
            rest /= self.p;
            if c != 0 {
                let part = match (i, c) {
                    (0, c) => c.to_string(),
                    (1, 1) => "x".to_string(),
                    (1, c) => format!("{c}x"),
                    (i, 1) => format!("x^{i}"),
                    (i, c) => format!("{c}x^{i}"),
                };
                parts.push(part);
            }
            i += 1;
        }
        parts.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf9_deterministic_model() {
        let f = Field::build(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]); // x^2 + 1
        assert_eq!(f.generator(), Element(4)); // 1 + x
        assert_eq!(f.order(), 9);
    }

    #[test]
    fn gf3_and_gf2_models() {
        let f3 = Field::build(3, 1).unwrap();
        assert_eq!(f3.modulus(), &[0, 1]);
        assert_eq!(f3.generator(), Element(2));
        let f2 = Field::build(2, 1).unwrap();
        assert_eq!(f2.generator(), Element(1));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(Field::build(6, 2).unwrap_err(), Error::NotPrime(6));
        assert!(matches!(
            Field::build_with_cap(3, 4, 80).unwrap_err(),
            Error::SizeCap { q: 81, cap: 80 }
        ));
    }

    #[test]
    fn gf9_tower_trace_and_norm() {
        let f = Field::build(3, 2).unwrap();
        let t = f.tower().unwrap();
        // 1 + i where i^2 = -1 is encoding 4.
        let e = Element(4);
        assert_eq!(t.trace_rel(e), Element(2));
        assert_eq!(t.norm_rel(e), Element(2));
        assert_eq!(f.trace_abs(Element::ZERO), 0);
    }

    #[test]
    fn tower_requires_even_degree_and_odd_char() {
        let f = Field::build(3, 1).unwrap();
        assert!(matches!(f.tower().unwrap_err(), Error::OddDegree { deg: 1 }));
        let f2 = Field::build(2, 2).unwrap();
        assert!(matches!(f2.tower().unwrap_err(), Error::EvenCharTower));
    }

    #[test]
    fn arithmetic_round_trips() {
        let f = Field::build(5, 2).unwrap();
        for enc in 0..f.order() {
            let x = Element(enc);
            assert_eq!(f.add(x, f.neg(x)), Element::ZERO);
            if !x.is_zero() {
                assert_eq!(f.mul(x, f.inv(x).unwrap()), Element::ONE);
                let j = f.log(x).unwrap();
                assert_eq!(f.exp(j), x);
            }
        }
    }

    #[test]
    fn antilog_is_a_homomorphism() {
        let f = Field::build(3, 2).unwrap();
        let m = f.order() - 1;
        for i in 0..m {
            for j in 0..m {
                assert_eq!(f.mul(f.exp(i), f.exp(j)), f.exp((i + j) % m));
            }
        }
    }

    #[test]
    fn trace_is_linear_and_surjective() {
        for (p, deg) in [(3u64, 2u32), (5, 2), (7, 1), (3, 3), (2, 3)] {
            let f = Field::build(p, deg).unwrap();
            let mut hits = vec![0u64; p as usize];
            for enc in 0..f.order() {
                hits[f.trace_abs(Element(enc)) as usize] += 1;
            }
            // Surjective with equal fibers of size q/p.
            assert!(hits.iter().all(|&h| h == f.order() / p));
            for a in 0..f.order().min(40) {
                for b in 0..f.order().min(40) {
                    let (x, y) = (Element(a), Element(b));
                    let lhs = f.trace_abs(f.add(x, y));
                    let rhs = (f.trace_abs(x) + f.trace_abs(y)) % p;
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn trace_transitivity_through_the_tower() {
        let f = Field::build(3, 2).unwrap();
        let t = f.tower().unwrap();
        let base = Field::build(3, 1).unwrap();
        for enc in 0..f.order() {
            let x = Element(enc);
            let via_tower = base.trace_abs(Element(t.trace_rel(x).0 % 3));
            assert_eq!(f.trace_abs(x), via_tower);
        }
    }

    #[test]
    fn rel_trace_kernel_size() {
        // Kernel of the surjective F-linear rel trace has exactly p^m elements.
        for (p, deg) in [(3u64, 2u32), (5, 2), (3, 4)] {
            let f = Field::build(p, deg).unwrap();
            let t = f.tower().unwrap();
            let zeros = (0..f.order())
                .filter(|&e| t.trace_rel(Element(e)).is_zero())
                .count() as u64;
            assert_eq!(zeros, t.base_order());
        }
    }

    #[test]
    fn subfield_membership() {
        let f = Field::build(3, 2).unwrap();
        let t = f.tower().unwrap();
        let members: Vec<u64> =
            (0..9).filter(|&e| t.in_base(Element(e))).collect();
        assert_eq!(members, vec![0, 1, 2]);
        assert_eq!(t.base_units().count(), 2);
    }

    #[test]
    fn frobenius_and_pow() {
        let f = Field::build(3, 2).unwrap();
        let g = f.generator();
        assert_eq!(f.frobenius(g, 1), f.pow(g, 3).unwrap());
        assert_eq!(f.pow(g, 8).unwrap(), Element::ONE);
        assert_eq!(f.pow(g, -1).unwrap(), f.inv(g).unwrap());
        assert_eq!(f.pow(Element::ZERO, 0).unwrap(), Element::ONE);
        assert!(f.pow(Element::ZERO, -2).is_err());
    }

    #[test]
    fn element_notations() {
        let f = Field::build(3, 2).unwrap();
        assert_eq!(f.parse_element("4").unwrap(), Element(4));
        assert_eq!(f.parse_element("1+x").unwrap(), Element(4));
        assert_eq!(f.parse_element("2x").unwrap(), Element(6));
        assert_eq!(f.parse_element("g^1").unwrap(), Element(4));
        assert_eq!(f.parse_element("g").unwrap(), Element(4));
        assert_eq!(f.parse_element("g^6").unwrap(), Element(3)); // i = x
        assert_eq!(f.parse_element("x^2+1").unwrap(), Element::ZERO);
        assert_eq!(f.parse_element("2-x").unwrap(), f.sub(Element(2), Element(3)));
        assert_eq!(f.format_element(Element(4)), "1+x");
        assert_eq!(f.format_element(Element::ZERO), "0");
        assert!(f.parse_element("y+1").is_err());
        assert!(f.parse_element("99").is_err());
    }

    #[test]
    fn diff_log_matches_table_subtraction() {
        for (p, deg) in [(3u64, 2u32), (2, 3), (7, 1)] {
            let f = Field::build(p, deg).unwrap();
            let m = f.order() - 1;
            for e1 in 0..m {
                for e2 in 0..m {
                    let direct = f.sub(f.exp(e1), f.exp(e2));
                    match f.diff_log(e1, e2) {
                        None => assert!(direct.is_zero()),
                        Some(e) => assert_eq!(f.exp(e), direct),
                    }
                }
            }
        }
    }
}
