//! Dense polynomial arithmetic over GF(p), used only while constructing
//! field tables. Runtime element arithmetic goes through the log tables.

/// Coefficients in ascending degree order, not necessarily trimmed.
pub(crate) type Poly = Vec<u64>;

pub(crate) fn trim(f: &mut Poly) {
    while f.len() > 1 && *f.last().unwrap() == 0 {
        f.pop();
    }
}

pub(crate) fn degree(f: &[u64]) -> usize {
    let mut d = f.len();
    while d > 1 && f[d - 1] == 0 {
        d -= 1;
    }
    d - 1
}

pub(crate) fn is_zero(f: &[u64]) -> bool {
    f.iter().all(|&c| c == 0)
}

/// Schoolbook product reduced modulo the monic polynomial `modulus`.
pub(crate) fn mul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Poly {
    let n = degree(modulus);
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj == 0 {
                continue;
            }
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    // Reduce from the top using x^n = -(c_0 + c_1 x + ... + c_{n-1} x^{n-1}).
    for k in (n..prod.len()).rev() {
        let lead = prod[k];
        if lead == 0 {
            continue;
        }
        prod[k] = 0;
        for i in 0..n {
            let sub = (lead * modulus[i]) % p;
            prod[k - n + i] = (prod[k - n + i] + p - sub) % p;
        }
    }
    prod.truncate(n.max(1));
    prod
}

/// `base^e` modulo the monic `modulus`.
pub(crate) fn pow_mod(base: &[u64], mut e: u64, modulus: &[u64], p: u64) -> Poly {
    let mut acc: Poly = vec![1];
    let mut sq: Poly = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &sq, modulus, p);
        }
        sq = mul_mod(&sq, &sq, modulus, p);
        e >>= 1;
    }
    acc
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and a != 0.
    let mut acc = 1u64;
    let mut sq = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * sq % p;
        }
        sq = sq * sq % p;
        e >>= 1;
    }
    acc
}

fn rem(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    let db = degree(b);
    let lead_inv = inv_mod_p(b[db], p);
    while !is_zero(&r) && degree(&r) >= db {
        let dr = degree(&r);
        let factor = r[dr] * lead_inv % p;
        for i in 0..=db {
            let sub = factor * b[i] % p;
            r[dr - db + i] = (r[dr - db + i] + p - sub) % p;
        }
        trim(&mut r);
    }
    r
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut a: Poly = a.to_vec();
    let mut b: Poly = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !is_zero(&b) {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Rabin's test: monic `f` of degree n is irreducible over GF(p) iff
/// x^(p^n) == x mod f and gcd(x^(p^(n/r)) - x, f) = 1 for every prime r | n.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = degree(f);
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x: Poly = vec![0, 1];
    // x^(p^k) mod f by iterated p-th powering.
    let frob_power = |k: usize| -> Poly {
        let mut acc = x.clone();
        for _ in 0..k {
            acc = pow_mod(&acc, p, f, p);
        }
        acc
    };
    let mut m = n;
    let mut prime_divs = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            prime_divs.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        prime_divs.push(m);
    }
    for &r in &prime_divs {
        let mut h = frob_power(n / r);
        // h - x
        if h.len() < 2 {
            h.resize(2, 0);
        }
        h[1] = (h[1] + p - 1) % p;
        let g = gcd(&h, f, p);
        if degree(&g) != 0 {
            return false;
        }
    }
    let mut top = frob_power(n);
    if top.len() < 2 {
        top.resize(2, 0);
    }
    top[1] = (top[1] + p - 1) % p;
    is_zero(&top)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility_over_gf3() {
        // x^2 + 1 is irreducible over GF(3); x^2 + x is not.
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(!is_irreducible(&[0, 1, 1], 3));
        // x^2 + 1 factors over GF(5) since -1 is a square.
        assert!(!is_irreducible(&[1, 0, 1], 5));
    }

    #[test]
    fn irreducibility_degree_four() {
        // Root-free but reducible: x^4 + 1 = (x^2+x+2)(x^2+2x+2) over GF(3).
        assert!(!is_irreducible(&[1, 0, 0, 0, 1], 3));
        // (x^2+1)^2 = x^4 + 2x^2 + 1, also root-free and reducible.
        assert!(!is_irreducible(&[1, 0, 2, 0, 1], 3));
        // x^4 + x + 2 over GF(3) is irreducible (no roots, not a quadratic product).
        assert!(is_irreducible(&[2, 1, 0, 0, 1], 3));
    }

    #[test]
    fn mul_mod_reduces() {
        // In GF(9) = GF(3)[x]/(x^2+1): x * x = -1 = 2.
        let m = [1, 0, 1];
        let r = mul_mod(&[0, 1], &[0, 1], &m, 3);
        assert_eq!(degree(&r), 0);
        assert_eq!(r[0], 2);
    }
}
