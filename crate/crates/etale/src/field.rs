//! Prime fields F_p with p = 1 mod ell, their extensions F_{p^m} in a
//! polynomial basis, and the canonical generator of the ell-th roots of unity.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poly;

pub const DEFAULT_DEGREE_CAP: usize = 64;

/// An element of F_{p^m}: `m` coefficients, least degree first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FElem(pub(crate) Vec<u64>);

impl FElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    /// The value as an element of F_p, if the element lies in the prime field.
    pub fn as_base(&self) -> Option<u64> {
        if self.0[1..].iter().all(|&c| c == 0) {
            Some(self.0[0])
        } else {
            None
        }
    }
}

impl fmt::Display for FElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_base() {
            Some(c) => write!(f, "{c}"),
            None => {
                let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
                write!(f, "[{}]", parts.join(" "))
            }
        }
    }
}

/// A root of unity zeta0^e, stored by its exponent mod ell.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct MuRoot {
    pub e: u64,
    pub ell: u64,
}

impl MuRoot {
    pub fn new(e: i64, ell: u64) -> Self {
        MuRoot { e: e.rem_euclid(ell as i64) as u64, ell }
    }

    pub fn one(ell: u64) -> Self {
        MuRoot { e: 0, ell }
    }

    pub fn is_trivial(&self) -> bool {
        self.e == 0
    }

    pub fn mul(self, other: MuRoot) -> MuRoot {
        MuRoot { e: (self.e + other.e) % self.ell, ell: self.ell }
    }

    pub fn inv(self) -> MuRoot {
        MuRoot { e: (self.ell - self.e) % self.ell, ell: self.ell }
    }

    pub fn pow(self, k: i64) -> MuRoot {
        MuRoot::new(self.e as i64 * k.rem_euclid(self.ell as i64), self.ell)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub struct FieldCtx {
    p: u64,
    m: usize,
    ell: u64,
    modulus: Vec<u64>,
    g: u64,
    zeta0: u64,
    size: BigUint,
    frob: OnceLock<Vec<Vec<u64>>>,
    nonsquare: OnceLock<FElem>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} (ell = {})", self.p, self.m, self.ell)
    }
}

/// Builds F_{p^m} with the default degree cap.
pub fn make_context(p: u64, ell: u64, m: usize) -> Result<FieldCtx> {
    make_context_capped(p, ell, m, DEFAULT_DEGREE_CAP)
}

pub fn make_context_capped(p: u64, ell: u64, m: usize, cap: usize) -> Result<FieldCtx> {
    if p >= 1 << 31 {
        return Err(Error::ModulusTooLarge(p));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !is_prime(ell) || (p - 1) % ell != 0 {
        return Err(Error::EllDoesNotDivide { p, ell });
    }
    if m == 0 {
        return Err(Error::Precondition("extension degree must be at least 1".into()));
    }
    if m > cap {
        return Err(Error::DegreeCap { m, cap });
    }
    let modulus = if m == 1 { vec![0, 1] } else { first_irreducible(p, m) };
    let cof = (p - 1) / ell;
    let g = (2..p).find(|&g| poly::powmod(g, cof, p) != 1).expect("ell | p - 1");
    let zeta0 = poly::powmod(g, cof, p);
    Ok(FieldCtx {
        p,
        m,
        ell,
        modulus,
        g,
        zeta0,
        size: BigUint::from(p).pow(m as u32),
        frob: OnceLock::new(),
        nonsquare: OnceLock::new(),
    })
}

/// First monic irreducible of degree m, ordering coefficient sequences
/// (c_0, ..., c_{m-1}) lexicographically.
fn first_irreducible(p: u64, m: usize) -> Vec<u64> {
    let mut c = vec![0u64; m];
    c[0] = 1;
    loop {
        let mut f = c.clone();
        f.push(1);
        if poly::fp_is_irreducible(&f, p) {
            return f;
        }
        // increment with c_{m-1} varying fastest
        let mut i = m - 1;
        loop {
            c[i] += 1;
            if c[i] < p {
                break;
            }
            c[i] = 0;
            i -= 1;
        }
    }
}

impl FieldCtx {
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn ell(&self) -> u64 {
        self.ell
    }
    /// Monic modulus, least degree first (`x` itself for the prime field).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
    /// Number of elements p^m.
    pub fn size(&self) -> &BigUint {
        &self.size
    }
    /// The least element of F_p that is not an ell-th power.
    pub fn nonresidue(&self) -> u64 {
        self.g
    }

    pub fn zero(&self) -> FElem {
        FElem(vec![0; self.m])
    }
    pub fn one(&self) -> FElem {
        self.from_u64(1)
    }
    pub fn from_u64(&self, c: u64) -> FElem {
        let mut v = vec![0; self.m];
        v[0] = c % self.p;
        FElem(v)
    }
    pub fn from_i64(&self, c: i64) -> FElem {
        self.from_u64(c.rem_euclid(self.p as i64) as u64)
    }
    /// Element from a coefficient list (least degree first), reduced mod p.
    pub fn from_coeffs(&self, c: &[u64]) -> Result<FElem> {
        if c.len() > self.m {
            return Err(Error::Precondition(format!(
                "{} coefficients for a degree-{} field",
                c.len(),
                self.m
            )));
        }
        let mut v: Vec<u64> = c.iter().map(|x| x % self.p).collect();
        v.resize(self.m, 0);
        Ok(FElem(v))
    }
    /// The generator x of the polynomial basis.
    pub fn gen(&self) -> FElem {
        let mut v = poly::fp_rem_monic(vec![0, 1], &self.modulus, self.p);
        v.resize(self.m, 0);
        FElem(v)
    }

    pub fn is_zero(&self, a: &FElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }
    pub fn add(&self, a: &FElem, b: &FElem) -> FElem {
        FElem(a.0.iter().zip(&b.0).map(|(x, y)| (x + y) % self.p).collect())
    }
    pub fn sub(&self, a: &FElem, b: &FElem) -> FElem {
        FElem(a.0.iter().zip(&b.0).map(|(x, y)| (x + self.p - y) % self.p).collect())
    }
    pub fn neg(&self, a: &FElem) -> FElem {
        FElem(a.0.iter().map(|x| (self.p - x) % self.p).collect())
    }
    pub fn scale(&self, a: &FElem, c: u64) -> FElem {
        let c = c % self.p;
        FElem(a.0.iter().map(|x| x * c % self.p).collect())
    }
    pub fn mul(&self, a: &FElem, b: &FElem) -> FElem {
        if self.m == 1 {
            return FElem(vec![a.0[0] * b.0[0] % self.p]);
        }
        let prod = poly::fp_mul(&a.0, &b.0, self.p);
        FElem(poly::fp_rem_monic(prod, &self.modulus, self.p))
    }
    pub fn sqr(&self, a: &FElem) -> FElem {
        self.mul(a, a)
    }

    pub fn inv(&self, a: &FElem) -> Option<FElem> {
        if self.is_zero(a) {
            return None;
        }
        if self.m == 1 {
            return Some(FElem(vec![poly::invmod(a.0[0], self.p)]));
        }
        // extended Euclid in F_p[x]: track s with s*a = r mod modulus
        let p = self.p;
        let mut r0 = self.modulus.clone();
        let mut r1 = a.0.clone();
        poly::trim(&mut r1);
        let mut s0: Vec<u64> = Vec::new();
        let mut s1: Vec<u64> = vec![1];
        while r1.len() > 1 {
            let (q, r) = poly::fp_divrem(&r0, &r1, p);
            let qs = poly::fp_mul(&q, &s1, p);
            let mut s = s0.clone();
            s.resize(s.len().max(qs.len()), 0);
            for (i, c) in qs.iter().enumerate() {
                s[i] = (s[i] + p - c) % p;
            }
            poly::trim(&mut s);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        let c = poly::invmod(r1[0], p);
        let mut v: Vec<u64> = s1.iter().map(|x| x * c % p).collect();
        v.resize(self.m, 0);
        Some(FElem(poly::fp_rem_monic(v, &self.modulus, p)))
    }

    pub fn div(&self, a: &FElem, b: &FElem) -> Option<FElem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    pub fn pow(&self, a: &FElem, e: &BigUint) -> FElem {
        let mut r = self.one();
        for i in (0..e.bits()).rev() {
            r = self.sqr(&r);
            if e.bit(i) {
                r = self.mul(&r, a);
            }
        }
        r
    }

    pub fn pow_u64(&self, a: &FElem, e: u64) -> FElem {
        self.pow(a, &BigUint::from(e))
    }

    /// The p-power Frobenius, applied as a precomputed linear map.
    pub fn frobenius(&self, a: &FElem) -> FElem {
        if self.m == 1 {
            return a.clone();
        }
        let table = self.frob.get_or_init(|| {
            let xp = self.pow_u64(&self.gen(), self.p);
            let mut rows = Vec::with_capacity(self.m);
            let mut cur = self.one();
            for _ in 0..self.m {
                rows.push(cur.0.clone());
                cur = self.mul(&cur, &xp);
            }
            rows
        });
        let mut acc = vec![0u128; self.m];
        for (i, &c) in a.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (j, &t) in table[i].iter().enumerate() {
                acc[j] += (c * t) as u128;
            }
        }
        FElem(acc.into_iter().map(|v| (v % self.p as u128) as u64).collect())
    }

    /// Frobenius iterated k times: x -> x^{p^k}.
    pub fn frobenius_k(&self, a: &FElem, k: usize) -> FElem {
        (0..k % self.m).fold(a.clone(), |x, _| self.frobenius(&x))
    }

    pub fn random<R: Rng>(&self, rng: &mut R) -> FElem {
        FElem((0..self.m).map(|_| rng.gen_range(0..self.p)).collect())
    }

    /// Element number `i` in the enumeration by base-p digits (c_0 fastest).
    pub fn element_at(&self, mut i: u64) -> FElem {
        let mut v = vec![0; self.m];
        for c in v.iter_mut() {
            *c = i % self.p;
            i /= self.p;
        }
        FElem(v)
    }

    pub fn is_square(&self, a: &FElem) -> bool {
        if self.is_zero(a) {
            return true;
        }
        let e = (&self.size - 1u32) >> 1;
        self.pow(a, &e) == self.one()
    }

    fn nonsquare(&self) -> &FElem {
        self.nonsquare.get_or_init(|| {
            (1..).map(|i| self.element_at(i)).find(|z| !self.is_square(z)).expect("odd field")
        })
    }

    /// A square root (Tonelli-Shanks), or `None` for non-squares.
    pub fn sqrt(&self, a: &FElem) -> Option<FElem> {
        if self.is_zero(a) {
            return Some(self.zero());
        }
        if !self.is_square(a) {
            return None;
        }
        let qm1 = &self.size - 1u32;
        let s = qm1.trailing_zeros().expect("q > 1");
        let t = &qm1 >> s;
        let mut c = self.pow(self.nonsquare(), &t);
        let mut x = self.pow(a, &((&t + 1u32) >> 1));
        let mut b = self.pow(a, &t);
        let mut k = s;
        let one = self.one();
        while b != one {
            let mut i = 0;
            let mut bb = b.clone();
            while bb != one {
                bb = self.sqr(&bb);
                i += 1;
            }
            let mut d = c.clone();
            for _ in 0..(k - i - 1) {
                d = self.sqr(&d);
            }
            x = self.mul(&x, &d);
            c = self.sqr(&d);
            b = self.mul(&b, &c);
            k = i;
        }
        Some(x)
    }

    /// zeta0 = g^{(p-1)/ell}.
    pub fn canonical_mu_generator(&self) -> FElem {
        self.from_u64(self.zeta0)
    }

    pub fn zeta0(&self) -> u64 {
        self.zeta0
    }

    /// Exponent e with x^{(p-1)/ell} = zeta0^e, for nonzero x in F_p.
    pub fn chi(&self, x: u64) -> Result<u64> {
        let x = x % self.p;
        if x == 0 {
            return Err(Error::Precondition("chi of zero".into()));
        }
        let y = poly::powmod(x, (self.p - 1) / self.ell, self.p);
        Ok(self.mu_dlog_base(y).expect("y is an ell-th root of unity"))
    }

    fn mu_dlog_base(&self, y: u64) -> Option<u64> {
        let mut z = 1u64;
        for e in 0..self.ell {
            if z == y {
                return Some(e);
            }
            z = z * self.zeta0 % self.p;
        }
        None
    }

    /// Exponent of an ell-th root of unity relative to zeta0.
    pub fn mu_dlog(&self, y: &FElem) -> Option<MuRoot> {
        let c = y.as_base()?;
        self.mu_dlog_base(c).map(|e| MuRoot { e, ell: self.ell })
    }

    /// Multiplicative order of a nonzero element, given a multiple `n` of it
    /// whose prime factors are `primes`.
    pub fn order_dividing(&self, a: &FElem, n: &BigUint, primes: &[u64]) -> BigUint {
        let mut ord = n.clone();
        for &r in primes {
            while (&ord % r).is_zero() {
                let cand = &ord / r;
                if self.pow(a, &cand) == self.one() {
                    ord = cand;
                } else {
                    break;
                }
            }
        }
        ord
    }
}

/// The field embedding F_{p^{m1}} -> F_{p^{m2}} sending the generator of the
/// source to the least root of the source modulus in the target.
pub struct Embedding<'a> {
    dst: &'a FieldCtx,
    powers: Vec<FElem>,
}

impl<'a> Embedding<'a> {
    pub fn new(src: &FieldCtx, dst: &'a FieldCtx) -> Result<Self> {
        if src.p != dst.p || dst.m % src.m != 0 {
            return Err(Error::NotSubfield { src: src.m, dst: dst.m });
        }
        let root = if src.m == 1 {
            dst.one()
        } else {
            let f: poly::Poly = src.modulus.iter().map(|&c| dst.from_u64(c)).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(src.p ^ ((src.m as u64) << 32) ^ dst.m as u64);
            poly::proots(dst, &f, &mut rng).into_iter().next().expect("modulus splits in dst")
        };
        let mut powers = Vec::with_capacity(src.m);
        let mut cur = dst.one();
        for _ in 0..src.m {
            powers.push(cur.clone());
            cur = dst.mul(&cur, &root);
        }
        Ok(Embedding { dst, powers })
    }

    /// Image of the source generator.
    pub fn root(&self) -> FElem {
        if self.powers.len() > 1 {
            self.powers[1].clone()
        } else {
            self.dst.gen()
        }
    }

    pub fn apply(&self, x: &FElem) -> FElem {
        let mut acc = self.dst.zero();
        for (c, pw) in x.0.iter().zip(&self.powers) {
            if *c != 0 {
                acc = self.dst.add(&acc, &self.dst.scale(pw, *c));
            }
        }
        acc
    }
}

pub fn embed(src: &FieldCtx, dst: &FieldCtx, x: &FElem) -> Result<FElem> {
    Ok(Embedding::new(src, dst)?.apply(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_modulus_over_f7() {
        let f = make_context(7, 3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        assert!(matches!(make_context(6, 3, 1), Err(Error::NotPrime(6))));
        assert!(matches!(make_context(7, 5, 1), Err(Error::EllDoesNotDivide { .. })));
        assert!(matches!(make_context(7, 3, 65), Err(Error::DegreeCap { .. })));
    }

    #[test]
    fn canonical_generators() {
        assert_eq!(make_context(7, 3, 1).unwrap().zeta0(), 4);
        assert_eq!(make_context(7, 2, 1).unwrap().zeta0(), 6);
        assert_eq!(make_context(13, 3, 1).unwrap().zeta0(), 3);
    }

    #[test]
    fn chi_values() {
        let f = make_context(7, 3, 1).unwrap();
        assert_eq!(f.chi(1).unwrap(), 0);
        assert_eq!(f.chi(2).unwrap(), 1);
        assert_eq!(f.chi(6).unwrap(), 0);
        assert!(f.chi(0).is_err());
    }

    #[test]
    fn inverse_and_sqrt_in_extension() {
        let f = make_context(7, 3, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let a = f.random(&mut rng);
            if f.is_zero(&a) {
                continue;
            }
            assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
            let s = f.sqr(&a);
            let r = f.sqrt(&s).unwrap();
            assert_eq!(f.sqr(&r), s);
            assert_eq!(f.frobenius(&a), f.pow_u64(&a, 7));
        }
    }

    #[test]
    fn prime_subfield_embeds_as_constants() {
        let src = make_context(7, 3, 1).unwrap();
        let dst = make_context(7, 3, 2).unwrap();
        assert_eq!(embed(&src, &dst, &src.from_u64(3)).unwrap(), dst.from_u64(3));
        let bad = make_context(7, 3, 3).unwrap();
        assert!(embed(&dst, &bad, &dst.one()).is_err());
    }
}
