//! Dense univariate polynomials, least degree first.
//!
//! Two flavours: plain `u64` coefficient vectors over a prime field (used to
//! build extension moduli and to reduce products), and `FElem` coefficient
//! vectors over an arbitrary `FieldCtx` (used for root finding).

use num_bigint::BigUint;
use rand::Rng;

use crate::field::{FElem, FieldCtx};

pub fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

#[inline]
pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

pub fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

pub fn invmod(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i64, (a % p) as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "not invertible");
    t0.rem_euclid(p as i64) as u64
}

/// Product of two polynomials over F_p (untrimmed length `a.len() + b.len() - 1`).
pub fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] += (x * y) as u128;
        }
    }
    acc.into_iter().map(|v| (v % p as u128) as u64).collect()
}

/// Remainder modulo a monic polynomial `f` of degree `d = f.len() - 1`.
/// The result always has length `d`.
pub fn fp_rem_monic(mut r: Vec<u64>, f: &[u64], p: u64) -> Vec<u64> {
    let d = f.len() - 1;
    for i in (d..r.len()).rev() {
        let c = r[i];
        if c == 0 {
            continue;
        }
        let base = i - d;
        for j in 0..d {
            r[base + j] = (r[base + j] + (p - c) * f[j]) % p;
        }
        r[i] = 0;
    }
    r.resize(d, 0);
    r
}

/// Quotient and remainder for a nonzero divisor `b` (trimmed).
pub fn fp_divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = invmod(b[db], p);
    let mut q = vec![0; r.len() - db];
    for i in (db..r.len()).rev() {
        let c = r[i] * lead_inv % p;
        if c == 0 {
            continue;
        }
        q[i - db] = c;
        for j in 0..=db {
            r[i - db + j] = (r[i - db + j] + (p - c) * b[j]) % p;
        }
    }
    r.truncate(db);
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

pub fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = fp_divrem(&x, &y, p);
        x = std::mem::replace(&mut y, r);
    }
    if let Some(&l) = x.last() {
        let li = invmod(l, p);
        for c in x.iter_mut() {
            *c = *c * li % p;
        }
    }
    x
}

/// `base^e mod f` for monic `f`.
pub fn fp_powmod(base: &[u64], e: &BigUint, f: &[u64], p: u64) -> Vec<u64> {
    let d = f.len() - 1;
    let mut r = vec![0; d];
    r[0] = 1 % p;
    let b = fp_rem_monic(base.to_vec(), f, p);
    for i in (0..e.bits()).rev() {
        r = fp_rem_monic(fp_mul(&r, &r, p), f, p);
        if e.bit(i) {
            r = fp_rem_monic(fp_mul(&r, &b, p), f, p);
        }
    }
    r
}

/// Ben-Or test: a monic `f` of degree `m` is irreducible iff
/// gcd(x^{p^i} - x, f) = 1 for all i <= m/2.
pub fn fp_is_irreducible(f: &[u64], p: u64) -> bool {
    let m = f.len() - 1;
    if m <= 1 {
        return m == 1;
    }
    if f[0] == 0 {
        return false;
    }
    let pe = BigUint::from(p);
    let x = vec![0, 1];
    let mut h = fp_rem_monic(x.clone(), f, p);
    for _ in 1..=m / 2 {
        h = fp_powmod(&h, &pe, f, p);
        let mut t = h.clone();
        t[1] = (t[1] + p - 1) % p;
        if fp_gcd(&t, f, p).len() > 1 {
            return false;
        }
    }
    true
}

/// Polynomials with coefficients in an extension field.
pub type Poly = Vec<FElem>;

pub fn ptrim(f: &FieldCtx, a: &mut Poly) {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
}

pub fn pmul(f: &FieldCtx, a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] = f.add(&r[i + j], &f.mul(x, y));
        }
    }
    ptrim(f, &mut r);
    r
}

pub fn pdivrem(f: &FieldCtx, a: &Poly, b: &Poly) -> (Poly, Poly) {
    let mut r = a.clone();
    ptrim(f, &mut r);
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let li = f.inv(&b[db]).expect("nonzero leading coefficient");
    let mut q = vec![f.zero(); r.len() - db];
    for i in (db..r.len()).rev() {
        let c = f.mul(&r[i], &li);
        if f.is_zero(&c) {
            continue;
        }
        for j in 0..=db {
            r[i - db + j] = f.sub(&r[i - db + j], &f.mul(&c, &b[j]));
        }
        q[i - db] = c;
    }
    r.truncate(db);
    ptrim(f, &mut r);
    ptrim(f, &mut q);
    (q, r)
}

pub fn pmonic(f: &FieldCtx, a: &Poly) -> Poly {
    match a.last() {
        None => Vec::new(),
        Some(l) => {
            let li = f.inv(l).expect("trimmed");
            a.iter().map(|c| f.mul(c, &li)).collect()
        }
    }
}

pub fn pgcd(f: &FieldCtx, a: &Poly, b: &Poly) -> Poly {
    let (mut x, mut y) = (a.clone(), b.clone());
    ptrim(f, &mut x);
    ptrim(f, &mut y);
    while !y.is_empty() {
        let (_, r) = pdivrem(f, &x, &y);
        x = std::mem::replace(&mut y, r);
    }
    pmonic(f, &x)
}

pub fn ppowmod(f: &FieldCtx, base: &Poly, e: &BigUint, m: &Poly) -> Poly {
    let mut r = vec![f.one()];
    let (_, b) = pdivrem(f, base, m);
    for i in (0..e.bits()).rev() {
        r = pdivrem(f, &pmul(f, &r, &r), m).1;
        if e.bit(i) {
            r = pdivrem(f, &pmul(f, &r, &b), m).1;
        }
    }
    r
}

pub fn peval(f: &FieldCtx, a: &Poly, x: &FElem) -> FElem {
    a.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

/// All roots in `f` of a polynomial with distinct roots, sorted.
/// Equal-degree splitting (Cantor-Zassenhaus) after isolating the split part.
pub fn proots<R: Rng>(f: &FieldCtx, a: &Poly, rng: &mut R) -> Vec<FElem> {
    let a = pmonic(f, a);
    if a.len() <= 1 {
        return Vec::new();
    }
    // product of the distinct linear factors: gcd(a, x^Q - x)
    let x: Poly = vec![f.zero(), f.one()];
    let xq = ppowmod(f, &x, f.size(), &a);
    let mut t = xq;
    t.resize(t.len().max(2), f.zero());
    t[1] = f.sub(&t[1], &f.one());
    ptrim(f, &mut t);
    let g = pgcd(f, &a, &t);
    let mut out = Vec::new();
    split_linear(f, g, rng, &mut out);
    out.sort();
    out
}

fn split_linear<R: Rng>(f: &FieldCtx, g: Poly, rng: &mut R, out: &mut Vec<FElem>) {
    match g.len() {
        0 | 1 => {}
        2 => out.push(f.neg(&g[0])),
        _ => {
            let e = (f.size() - 1u32) >> 1;
            loop {
                let d = f.random(rng);
                let lin: Poly = vec![d, f.one()];
                let mut h = ppowmod(f, &lin, &e, &g);
                if h.is_empty() {
                    continue;
                }
                h[0] = f.sub(&h[0], &f.one());
                ptrim(f, &mut h);
                let c = pgcd(f, &g, &h);
                if c.len() > 1 && c.len() < g.len() {
                    let (q, _) = pdivrem(f, &g, &c);
                    split_linear(f, c, rng, out);
                    split_linear(f, pmonic(f, &q), rng, out);
                    return;
                }
            }
        }
    }
}
