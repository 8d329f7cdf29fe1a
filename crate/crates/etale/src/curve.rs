//! Elliptic curves y^2 = x^3 + ax + b over F_q and over the extensions
//! F_{q^m} that contain their ell-power torsion.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{make_context_capped, Embedding, FElem, FieldCtx, DEFAULT_DEGREE_CAP};

/// Groups with at most this many rational points are enumerated outright, so
/// that generator and basis choices can be the least points in coordinate order.
pub const ENUMERATION_LIMIT: u64 = 20_000;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Point {
    Inf,
    Aff(FElem, FElem),
}

impl Point {
    pub fn is_inf(&self) -> bool {
        matches!(self, Point::Inf)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Inf => write!(f, "inf"),
            Point::Aff(x, y) => write!(f, "{x},{y}"),
        }
    }
}

pub(crate) fn seed(parts: &[u64]) -> u64 {
    // splitmix64 over the parts
    let mut h = 0x9e37_79b9_7f4a_7c15u64;
    for &v in parts {
        h ^= v;
        h = h.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = h;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        h = z ^ (z >> 31);
    }
    h
}

pub(crate) fn rng_for(parts: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed(parts))
}

pub fn valuation(n: &BigUint, r: u64) -> u32 {
    if n.is_zero() {
        return u32::MAX;
    }
    let mut n = n.clone();
    let mut v = 0;
    while (&n % r).is_zero() {
        n /= r;
        v += 1;
    }
    v
}

pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut k = 0;
            while n % d == 0 {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// The curve over one particular field F_{q^m}.
pub struct Ec {
    pub f: Arc<FieldCtx>,
    pub a: FElem,
    pub b: FElem,
    order: BigUint,
}

impl fmt::Debug for Ec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + {} x + {} over {:?}", self.a, self.b, self.f)
    }
}

impl Ec {
    pub fn field(&self) -> &FieldCtx {
        &self.f
    }
    pub fn m(&self) -> usize {
        self.f.m()
    }
    /// #E(F_{q^m}).
    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn rhs(&self, x: &FElem) -> FElem {
        let f = &self.f;
        let x2 = f.sqr(x);
        let t = f.add(&f.mul(&x2, x), &f.mul(&self.a, x));
        f.add(&t, &self.b)
    }

    pub fn is_on(&self, p: &Point) -> bool {
        match p {
            Point::Inf => true,
            Point::Aff(x, y) => self.f.sqr(y) == self.rhs(x),
        }
    }

    pub fn point(&self, x: FElem, y: FElem) -> Result<Point> {
        let p = Point::Aff(x, y);
        if self.is_on(&p) {
            Ok(p)
        } else {
            Err(Error::NotOnCurve)
        }
    }

    pub fn neg(&self, p: &Point) -> Point {
        match p {
            Point::Inf => Point::Inf,
            Point::Aff(x, y) => Point::Aff(x.clone(), self.f.neg(y)),
        }
    }

    pub fn add(&self, p: &Point, q: &Point) -> Point {
        let f = &self.f;
        match (p, q) {
            (Point::Inf, _) => q.clone(),
            (_, Point::Inf) => p.clone(),
            (Point::Aff(x1, y1), Point::Aff(x2, y2)) => {
                let lam = if x1 == x2 {
                    if f.is_zero(&f.add(y1, y2)) {
                        return Point::Inf;
                    }
                    let num = f.add(&f.scale(&f.sqr(x1), 3), &self.a);
                    f.div(&num, &f.scale(y1, 2)).expect("y1 nonzero")
                } else {
                    f.div(&f.sub(y2, y1), &f.sub(x2, x1)).expect("x1 != x2")
                };
                let x3 = f.sub(&f.sub(&f.sqr(&lam), x1), x2);
                let y3 = f.sub(&f.mul(&lam, &f.sub(x1, &x3)), y1);
                Point::Aff(x3, y3)
            }
        }
    }

    pub fn sub(&self, p: &Point, q: &Point) -> Point {
        self.add(p, &self.neg(q))
    }

    pub fn mul_big(&self, n: &BigUint, p: &Point) -> Point {
        let mut r = Point::Inf;
        for i in (0..n.bits()).rev() {
            r = self.add(&r, &r);
            if n.bit(i) {
                r = self.add(&r, p);
            }
        }
        r
    }

    pub fn mul(&self, n: u128, p: &Point) -> Point {
        let mut r = Point::Inf;
        if n == 0 {
            return r;
        }
        for i in (0..128 - n.leading_zeros()).rev() {
            r = self.add(&r, &r);
            if (n >> i) & 1 == 1 {
                r = self.add(&r, p);
            }
        }
        r
    }

    pub fn mul_i(&self, n: i128, p: &Point) -> Point {
        if n < 0 {
            self.neg(&self.mul(n.unsigned_abs(), p))
        } else {
            self.mul(n as u128, p)
        }
    }

    /// n*P + Q.
    pub fn group_law(&self, p: &Point, q: &Point, n: i128) -> Point {
        self.add(&self.mul_i(n, p), q)
    }

    /// Coordinatewise q-power map.
    pub fn frobenius(&self, p: &Point) -> Point {
        match p {
            Point::Inf => Point::Inf,
            Point::Aff(x, y) => Point::Aff(self.f.frobenius(x), self.f.frobenius(y)),
        }
    }

    pub fn frobenius_k(&self, p: &Point, k: usize) -> Point {
        match p {
            Point::Inf => Point::Inf,
            Point::Aff(x, y) => Point::Aff(self.f.frobenius_k(x, k), self.f.frobenius_k(y, k)),
        }
    }

    /// Least d dividing m with P defined over F_{q^d}.
    pub fn field_of_definition(&self, p: &Point) -> usize {
        let m = self.m();
        (1..=m)
            .filter(|d| m % d == 0)
            .find(|&d| self.frobenius_k(p, d) == *p)
            .unwrap_or(m)
    }

    pub fn random_point<R: Rng>(&self, rng: &mut R) -> Point {
        loop {
            let x = self.f.random(rng);
            if let Some(y) = self.f.sqrt(&self.rhs(&x)) {
                let y = if rng.gen::<bool>() { self.f.neg(&y) } else { y };
                return Point::Aff(x, y);
            }
        }
    }

    /// Least k with r^k P = O, searching up to `max`.
    pub fn r_order(&self, p: &Point, r: u64, max: u32) -> Option<u32> {
        let mut q = p.clone();
        for k in 0..=max {
            if q.is_inf() {
                return Some(k);
            }
            q = self.mul(r as u128, &q);
        }
        None
    }

    /// All affine points and infinity, sorted; only for prime fields.
    pub fn enumerate(&self) -> Vec<Point> {
        assert_eq!(self.m(), 1);
        let p = self.f.p();
        let mut out = vec![Point::Inf];
        for x in 0..p {
            let xe = self.f.from_u64(x);
            if let Some(y) = self.f.sqrt(&self.rhs(&xe)) {
                let y0 = y.coeffs()[0];
                if y0 == 0 {
                    out.push(Point::Aff(xe, y));
                } else {
                    let (lo, hi) = if y0 < p - y0 { (y0, p - y0) } else { (p - y0, y0) };
                    out.push(Point::Aff(xe.clone(), self.f.from_u64(lo)));
                    out.push(Point::Aff(xe, self.f.from_u64(hi)));
                }
            }
        }
        out.sort();
        out
    }

    /// Discrete log of W in the cyclic group generated by X of order r^b
    /// (Pohlig-Hellman over the r-adic digits). `None` if W is not in <X>.
    pub fn dlog_cyclic(&self, x: &Point, r: u64, b: u32, w: &Point) -> Option<u128> {
        if b == 0 {
            return if w.is_inf() { Some(0) } else { None };
        }
        let rr = r as u128;
        let gamma = self.mul(rr.pow(b - 1), x);
        let mut mu: u128 = 0;
        for i in 0..b {
            let rest = self.sub(w, &self.mul(mu, x));
            let h = self.mul(rr.pow(b - 1 - i), &rest);
            let d = self.dlog_prime(&gamma, r, &h)?;
            mu += d as u128 * rr.pow(i);
        }
        if self.mul(mu, x) == *w {
            Some(mu)
        } else {
            None
        }
    }

    /// Discrete log in a group of prime order r (baby-step giant-step).
    fn dlog_prime(&self, g: &Point, r: u64, h: &Point) -> Option<u64> {
        if r <= 64 {
            let mut cur = Point::Inf;
            for d in 0..r {
                if cur == *h {
                    return Some(d);
                }
                cur = self.add(&cur, g);
            }
            return None;
        }
        let s = (r as f64).sqrt().ceil() as u64;
        let mut baby = HashMap::with_capacity(s as usize);
        let mut cur = Point::Inf;
        for j in 0..s {
            baby.entry(cur.clone()).or_insert(j);
            cur = self.add(&cur, g);
        }
        let giant = self.neg(&cur);
        let mut y = h.clone();
        for i in 0..=s {
            if let Some(&j) = baby.get(&y) {
                return Some((i * s + j) % r);
            }
            y = self.add(&y, &giant);
        }
        None
    }

    /// Coordinates (alpha, beta) of W = alpha*Y + beta*X for an r-group
    /// <Y> + <X> with Y, X of orders r^a, r^b and trivial intersection.
    pub fn dlog_2d(&self, y: &Point, a: u32, x: &Point, b: u32, r: u64, w: &Point) -> Option<(u128, u128)> {
        let mut cur = w.clone();
        let neg_y = self.neg(y);
        for alpha in 0..(r as u128).pow(a) {
            if let Some(beta) = self.dlog_cyclic(x, r, b, &cur) {
                return Some((alpha, beta));
            }
            cur = self.add(&cur, &neg_y);
        }
        None
    }

    /// Sylow r-subgroup of E(F_{q^m}) as <Y> + <X>, orders r^a <= r^b.
    pub fn sylow<R: Rng>(&self, r: u64, rng: &mut R) -> Result<Sylow> {
        let v = valuation(&self.order, r);
        if v == 0 {
            return Ok(Sylow { r, a: 0, b: 0, y: Point::Inf, x: Point::Inf });
        }
        if v > 100 || (v as f64) * (r as f64).log2() > 120.0 {
            return Err(Error::Budget(format!("{r}-Sylow subgroup of order {r}^{v}")));
        }
        let h = &self.order / BigUint::from(r).pow(v);
        let sample = |rng: &mut R| self.mul_big(&h, &self.random_point(rng));
        let rr = r as u128;
        'restart: loop {
            // an element of maximal order, checked against a few samples
            let mut x = sample(rng);
            let mut b = self.r_order(&x, r, v).expect("r-power order");
            for _ in 0..4 {
                let z = sample(rng);
                let k = self.r_order(&z, r, v).expect("r-power order");
                if k > b {
                    x = z;
                    b = k;
                }
            }
            let mut y = Point::Inf;
            let mut a = 0;
            let mut tries = 0;
            while a + b < v {
                tries += 1;
                if tries > 64 {
                    continue 'restart;
                }
                let z = sample(rng);
                // least j with r^j z in <x>
                let mut j = 0;
                let mut zj = z.clone();
                let mu = loop {
                    if let Some(mu) = self.dlog_cyclic(&x, r, b, &zj) {
                        break mu;
                    }
                    zj = self.mul(rr, &zj);
                    j += 1;
                };
                if j <= a {
                    continue;
                }
                if j > b {
                    continue 'restart;
                }
                let rj = rr.pow(j);
                if mu % rj != 0 {
                    // x was not of maximal order
                    continue 'restart;
                }
                y = self.sub(&z, &self.mul(mu / rj, &x));
                a = j;
            }
            if a + b > v {
                continue 'restart;
            }
            return Ok(Sylow { r, a, b, y, x });
        }
    }

    /// The r-primary component of P: multiplication by the idempotent that
    /// is 1 mod r^v and 0 mod the prime-to-r part of the group order.
    pub fn r_component(&self, r: u64, p: &Point) -> Point {
        let v = valuation(&self.order, r);
        let rv = BigUint::from(r).pow(v);
        let h = &self.order / &rv;
        let hinv = h.modinv(&rv).unwrap_or_default();
        self.mul_big(&(h * hinv), p)
    }

    /// Sylow r-subgroup from generators of the whole group: the r-components
    /// of the generators.
    fn sylow_from_generators(&self, r: u64, g1: &Point, m1: u64, g2: &Point, m2: u64) -> Sylow {
        let (a, b) = (valuation(&BigUint::from(m1), r), valuation(&BigUint::from(m2), r));
        Sylow { r, a, b, y: self.r_component(r, g1), x: self.r_component(r, g2) }
    }
}

/// An r-primary group <y> + <x> with y of order r^a and x of order r^b, a <= b.
#[derive(Clone, Debug)]
pub struct Sylow {
    pub r: u64,
    pub a: u32,
    pub b: u32,
    pub y: Point,
    pub x: Point,
}

#[derive(Clone, Debug)]
pub struct GroupStructure {
    pub m1: u64,
    pub m2: u64,
    pub g1: Point,
    pub g2: Point,
    pub sylows: Vec<Sylow>,
}

impl GroupStructure {
    pub fn sylow(&self, r: u64) -> Option<&Sylow> {
        self.sylows.iter().find(|s| s.r == r)
    }
}

/// A basis of E[ell^n] over the minimal field of definition F_{q^m}.
pub struct TorsionBasis {
    pub n: u32,
    pub ec: Arc<Ec>,
    pub p1: Point,
    pub p2: Point,
    modulus: u64,
    table: OnceLock<HashMap<Point, (u64, u64)>>,
}

impl TorsionBasis {
    pub fn m(&self) -> usize {
        self.ec.m()
    }
    /// ell^n.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn table(&self) -> &HashMap<Point, (u64, u64)> {
        self.table.get_or_init(|| {
            let k = self.modulus;
            let mut t = HashMap::with_capacity((k * k) as usize);
            let mut row = Point::Inf;
            for i in 0..k {
                let mut cur = row.clone();
                for j in 0..k {
                    t.insert(cur.clone(), (i, j));
                    cur = self.ec.add(&cur, &self.p2);
                }
                row = self.ec.add(&row, &self.p1);
            }
            t
        })
    }

    /// (i, j) with P = i*P1 + j*P2, for P in E[ell^n] over this basis' field.
    pub fn coords(&self, p: &Point) -> Option<(u64, u64)> {
        self.table().get(p).copied()
    }

    pub fn combine(&self, i: u64, j: u64) -> Point {
        self.ec.add(&self.ec.mul(i as u128, &self.p1), &self.ec.mul(j as u128, &self.p2))
    }
}

struct CurveInner {
    base: Arc<Ec>,
    a: u64,
    b: u64,
    ell: u64,
    cap: usize,
    trace: i64,
    exts: Mutex<HashMap<usize, Arc<Ec>>>,
    bases: Mutex<HashMap<u32, Arc<TorsionBasis>>>,
    structure: OnceLock<GroupStructure>,
}

/// An elliptic curve over F_q with base point at infinity.
#[derive(Clone)]
pub struct Curve(Arc<CurveInner>);

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Curve(p={}, l={}, a={}, b={})", self.p(), self.ell(), self.0.a, self.0.b)
    }
}

/// #E(F_p) by running over x with a table of squares when p is small.
fn count_points(f: &FieldCtx, a: u64, b: u64) -> u64 {
    let p = f.p();
    let rhs = |x: u64| ((x * x % p * x) % p + a * x % p + b) % p;
    let mut n = 1u64;
    if p <= 1 << 24 {
        let mut sq = vec![false; p as usize];
        for y in 0..=p / 2 {
            sq[(y * y % p) as usize] = true;
        }
        for x in 0..p {
            let r = rhs(x);
            if r == 0 {
                n += 1;
            } else if sq[r as usize] {
                n += 2;
            }
        }
    } else {
        let e = (p - 1) / 2;
        for x in 0..p {
            let r = rhs(x);
            if r == 0 {
                n += 1;
            } else if crate::poly::powmod(r, e, p) == 1 {
                n += 2;
            }
        }
    }
    n
}

impl Curve {
    pub fn new(ctx: FieldCtx, a: u64, b: u64) -> Result<Curve> {
        Self::with_cap(ctx, a, b, DEFAULT_DEGREE_CAP)
    }

    pub fn from_ints(p: u64, ell: u64, a: i64, b: i64) -> Result<Curve> {
        let ctx = crate::field::make_context(p, ell, 1)?;
        let (a, b) = (a.rem_euclid(p as i64) as u64, b.rem_euclid(p as i64) as u64);
        Curve::new(ctx, a, b)
    }

    pub fn with_cap(ctx: FieldCtx, a: u64, b: u64, cap: usize) -> Result<Curve> {
        if ctx.m() != 1 {
            return Err(Error::Precondition("curves are defined over the prime field".into()));
        }
        let p = ctx.p();
        let (a, b) = (a % p, b % p);
        let disc = (4 * (a * a % p * a % p) + 27 * (b * b % p)) % p;
        if disc == 0 {
            return Err(Error::Singular);
        }
        let n = count_points(&ctx, a, b);
        let ell = ctx.ell();
        let f = Arc::new(ctx);
        let base = Arc::new(Ec {
            a: f.from_u64(a),
            b: f.from_u64(b),
            order: BigUint::from(n),
            f,
        });
        Ok(Curve(Arc::new(CurveInner {
            base,
            a,
            b,
            ell,
            cap,
            trace: p as i64 + 1 - n as i64,
            exts: Mutex::new(HashMap::new()),
            bases: Mutex::new(HashMap::new()),
            structure: OnceLock::new(),
        })))
    }

    pub fn p(&self) -> u64 {
        self.0.base.f.p()
    }
    pub fn ell(&self) -> u64 {
        self.0.ell
    }
    pub fn a(&self) -> u64 {
        self.0.a
    }
    pub fn b(&self) -> u64 {
        self.0.b
    }
    pub fn cap(&self) -> usize {
        self.0.cap
    }
    pub fn trace(&self) -> i64 {
        self.0.trace
    }
    pub fn base(&self) -> &Arc<Ec> {
        &self.0.base
    }
    pub fn field(&self) -> &FieldCtx {
        &self.0.base.f
    }

    /// Copy of this curve with a different extension-degree cap.
    pub fn recapped(&self, cap: usize) -> Result<Curve> {
        let ctx = crate::field::make_context(self.p(), self.ell(), 1)?;
        Curve::with_cap(ctx, self.a(), self.b(), cap)
    }

    pub fn point(&self, x: i64, y: i64) -> Result<Point> {
        let f = self.field();
        self.0.base.point(f.from_i64(x), f.from_i64(y))
    }

    /// #E(F_{q^m}) from the trace recurrence.
    pub fn order_over_extension(&self, m: usize) -> BigUint {
        let q = BigInt::from(self.p());
        let t = BigInt::from(self.0.trace);
        let (mut s0, mut s1) = (BigInt::from(2), t.clone());
        for _ in 1..m {
            let s2 = &t * &s1 - &q * &s0;
            s0 = s1;
            s1 = s2;
        }
        let n: BigInt = q.pow(m as u32) + 1 - s1;
        n.to_biguint().expect("positive order")
    }

    /// The curve over F_{q^m}, cached.
    pub fn ext(&self, m: usize) -> Result<Arc<Ec>> {
        if m == 1 {
            return Ok(self.0.base.clone());
        }
        if let Some(e) = self.0.exts.lock().unwrap().get(&m) {
            return Ok(e.clone());
        }
        let f = Arc::new(make_context_capped(self.p(), self.ell(), m, self.0.cap)?);
        let ec = Arc::new(Ec {
            a: f.from_u64(self.0.a),
            b: f.from_u64(self.0.b),
            order: self.order_over_extension(m),
            f,
        });
        self.0.exts.lock().unwrap().insert(m, ec.clone());
        Ok(ec)
    }

    /// Moves a point from E(F_{q^{m1}}) to E(F_{q^{m2}}), m1 | m2.
    pub fn lift(&self, src: &Ec, dst: &Ec, p: &Point) -> Result<Point> {
        match p {
            Point::Inf => Ok(Point::Inf),
            Point::Aff(x, y) => {
                let e = Embedding::new(&src.f, &dst.f)?;
                Ok(Point::Aff(e.apply(x), e.apply(y)))
            }
        }
    }

    /// Rational point over F_q as a point over F_{q^m} (constants embed trivially).
    pub fn lift_rational(&self, dst: &Ec, p: &Point) -> Point {
        match p {
            Point::Inf => Point::Inf,
            Point::Aff(x, y) => {
                Point::Aff(dst.f.from_u64(x.coeffs()[0]), dst.f.from_u64(y.coeffs()[0]))
            }
        }
    }

    pub fn group_structure(&self) -> Result<&GroupStructure> {
        if let Some(s) = self.0.structure.get() {
            return Ok(s);
        }
        let s = self.compute_structure(1)?;
        Ok(self.0.structure.get_or_init(|| s))
    }

    /// Invariant factors and generators of E(F_{q^m}).
    pub fn group_structure_over(&self, m: usize) -> Result<GroupStructure> {
        if m == 1 {
            return self.group_structure().cloned();
        }
        self.compute_structure(m)
    }

    fn compute_structure(&self, m: usize) -> Result<GroupStructure> {
        let ec = self.ext(m)?;
        let n = ec.order().to_u64().ok_or_else(|| Error::Budget("group order above 2^64".into()))?;
        let primes = factor(n);
        if m == 1 && n <= ENUMERATION_LIMIT {
            return Ok(structure_by_enumeration(&ec, n, &primes));
        }
        let mut rng = rng_for(&[self.p(), self.a(), self.b(), m as u64, 1]);
        let mut sylows = Vec::new();
        let (mut m1, mut m2) = (1u64, 1u64);
        let (mut g1, mut g2) = (Point::Inf, Point::Inf);
        for &(r, _) in &primes {
            let s = ec.sylow(r, &mut rng)?;
            m1 *= r.pow(s.a);
            m2 *= r.pow(s.b);
            g1 = ec.add(&g1, &s.y);
            g2 = ec.add(&g2, &s.x);
            sylows.push(s);
        }
        Ok(GroupStructure { m1, m2, g1, g2, sylows })
    }

    /// Basis of E[ell^n] over the least F_{q^m} containing it.
    pub fn torsion_basis(&self, n: u32) -> Result<Arc<TorsionBasis>> {
        if n == 0 {
            return Err(Error::Precondition("torsion level must be at least 1".into()));
        }
        if let Some(t) = self.0.bases.lock().unwrap().get(&n) {
            return Ok(t.clone());
        }
        let tb = Arc::new(self.compute_torsion_basis(n)?);
        self.0.bases.lock().unwrap().insert(n, tb.clone());
        Ok(tb)
    }

    /// Least m with E[ell^n] inside E(F_{q^m}).
    pub fn division_field_degree(&self, n: u32) -> Result<usize> {
        Ok(self.torsion_basis(n)?.m())
    }

    fn compute_torsion_basis(&self, n: u32) -> Result<TorsionBasis> {
        let ell = self.ell();
        let k = ell
            .checked_pow(n)
            .filter(|k| k.checked_mul(*k).is_some())
            .ok_or_else(|| Error::Budget(format!("level {ell}^{n}")))?;
        let q = BigUint::from(self.p());
        for m in 1..=self.0.cap {
            let nm = self.order_over_extension(m);
            if valuation(&nm, ell) < 2 * n || !((q.pow(m as u32) - 1u32) % k).is_zero() {
                continue;
            }
            let ec = self.ext(m)?;
            let (p1, p2) = if m == 1 && self.0.base.order() <= &BigUint::from(ENUMERATION_LIMIT) {
                match least_basis(&ec, ell, n) {
                    Some(b) => b,
                    None => continue,
                }
            } else {
                let mut rng = rng_for(&[self.p(), self.a(), self.b(), m as u64, 2, n as u64]);
                let s = ec.sylow(ell, &mut rng)?;
                if s.a < n {
                    continue;
                }
                let ellu = ell as u128;
                (ec.mul(ellu.pow(s.a - n), &s.y), ec.mul(ellu.pow(s.b - n), &s.x))
            };
            return Ok(TorsionBasis { n, ec, p1, p2, modulus: k, table: OnceLock::new() });
        }
        Err(Error::DegreeCap { m: self.0.cap + 1, cap: self.0.cap })
    }

    /// Q with ell^n Q = P for a rational P of ell-power order; returns the
    /// least degree m' over which a solution exists and the least such Q,
    /// expressed over the division field of E[ell^{j+n}].
    pub fn divide_point(&self, p: &Point, n: u32) -> Result<(usize, Arc<Ec>, Point)> {
        let ell = self.ell();
        let j = self
            .0
            .base
            .r_order(p, ell, 64)
            .ok_or_else(|| Error::Precondition("point does not have ell-power order".into()))?;
        if n == 0 {
            return Ok((1, self.0.base.clone(), p.clone()));
        }
        let tb = self.torsion_basis(j + n)?;
        let ec = tb.ec.clone();
        let pl = self.lift_rational(&ec, p);
        let (ci, cj) = tb.coords(&pl).expect("P lies in E[ell^{j+n}]");
        let ln = ell.pow(n);
        let q0 = tb.combine(ci / ln, cj / ln);
        // solutions are q0 + E[ell^n]
        let step = ell.pow(j);
        let mut best: Option<(usize, Point)> = None;
        for s in 0..ln {
            for t in 0..ln {
                let cand = ec.add(&q0, &tb.combine(s * step, t * step));
                let d = ec.field_of_definition(&cand);
                let better = match &best {
                    None => true,
                    Some((bd, bq)) => d < *bd || (d == *bd && cand < *bq),
                };
                if better {
                    best = Some((d, cand));
                }
            }
        }
        let (d, q) = best.expect("nonempty");
        Ok((d, ec, q))
    }

    /// Coordinates of a rational point in Pic^0/ell with respect to the
    /// generators G1, G2 whose orders are divisible by ell.
    pub fn pic0_coordinates(&self, p: &Point) -> Result<Vec<u64>> {
        let gs = self.group_structure()?;
        let ell = self.ell();
        let ec = &self.0.base;
        let Some(s) = gs.sylow(ell).filter(|s| s.b > 0) else {
            return Ok(Vec::new());
        };
        let w = ec.r_component(ell, p);
        let (al, be) = ec
            .dlog_2d(&s.y, s.a, &s.x, s.b, ell, &w)
            .expect("projection lies in the Sylow subgroup");
        // the components of G1, G2 are y, x, so P = al*G1 + be*G2 mod ell
        let mut out = Vec::new();
        let l = ell as u128;
        if s.a > 0 {
            out.push((al % l) as u64);
        }
        out.push((be % l) as u64);
        Ok(out)
    }

    /// The generators whose images form the Pic^0/ell basis, in coordinate order.
    pub fn pic0_basis(&self) -> Result<Vec<Point>> {
        let gs = self.group_structure()?;
        let mut out = Vec::new();
        if gs.m1 % self.ell() == 0 {
            out.push(gs.g1.clone());
        }
        if gs.m2 % self.ell() == 0 {
            out.push(gs.g2.clone());
        }
        Ok(out)
    }

    /// Dimension of Pic^0/ell over Z/ell.
    pub fn ell_rank(&self) -> Result<usize> {
        Ok(self.pic0_basis()?.len())
    }

    /// Whether a rational point lies in n E(F_q).
    pub fn is_divisible(&self, p: &Point, n: u64) -> Result<bool> {
        if n == 0 {
            return Ok(p.is_inf());
        }
        let gs = self.group_structure()?;
        let ec = &self.0.base;
        for (r, k) in factor(n) {
            let Some(s) = gs.sylow(r) else { continue };
            if s.a + s.b == 0 {
                continue;
            }
            let w = ec.r_component(r, p);
            let (al, be) = ec.dlog_2d(&s.y, s.a, &s.x, s.b, r, &w).expect("Sylow projection");
            let rr = r as u128;
            if al % rr.pow(k.min(s.a)) != 0 || be % rr.pow(k.min(s.b)) != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Rational ell-torsion E(F_q)[ell] as a basis (0, 1 or 2 points).
    pub fn rational_ell_torsion_basis(&self) -> Result<Vec<Point>> {
        let gs = self.group_structure()?;
        let ec = &self.0.base;
        let ell = self.ell();
        let Some(s) = gs.sylow(ell) else { return Ok(Vec::new()) };
        let mut out = Vec::new();
        let l = ell as u128;
        if s.a > 0 {
            out.push(ec.mul(l.pow(s.a - 1), &s.y));
        }
        if s.b > 0 {
            out.push(ec.mul(l.pow(s.b - 1), &s.x));
        }
        Ok(out)
    }

    /// All points of E(F_q)[ell], in coordinate order.
    pub fn rational_ell_torsion(&self) -> Result<Vec<Point>> {
        let basis = self.rational_ell_torsion_basis()?;
        let ec = &self.0.base;
        let mut pts = vec![Point::Inf];
        for g in &basis {
            let mut next = Vec::new();
            for p in &pts {
                let mut cur = p.clone();
                for _ in 0..self.ell() {
                    next.push(cur.clone());
                    cur = ec.add(&cur, g);
                }
            }
            pts = next;
        }
        pts.sort();
        Ok(pts)
    }

    /// ell-adic valuation of the exponent of E(F_q)[ell^infinity].
    pub fn ell_exponent(&self) -> Result<u32> {
        Ok(self.group_structure()?.sylow(self.ell()).map_or(0, |s| s.b))
    }
}

fn structure_by_enumeration(ec: &Ec, n: u64, primes: &[(u64, u32)]) -> GroupStructure {
    let pts = ec.enumerate();
    let order = |p: &Point| -> u64 {
        let mut o = n;
        for &(r, _) in primes {
            while o % r == 0 && ec.mul((o / r) as u128, p).is_inf() {
                o /= r;
            }
        }
        o
    };
    let orders: Vec<u64> = pts.iter().map(order).collect();
    let m2 = orders.iter().copied().fold(1, |acc, o| acc.lcm(&o));
    let m1 = n / m2;
    let i2 = orders.iter().position(|&o| o == m2).expect("exponent is attained");
    let g2 = pts[i2].clone();
    // G1: least point of order m1 with <G1> and <G2> meeting trivially
    let disjoint = |p: &Point| {
        primes.iter().filter(|(r, _)| m1 % r == 0).all(|&(r, _)| {
            let s = ec.mul((m1 / r) as u128, p);
            let t = ec.mul((m2 / r) as u128, &g2);
            let mut cur = Point::Inf;
            for _ in 0..r {
                if cur == s {
                    return false;
                }
                cur = ec.add(&cur, &t);
            }
            true
        })
    };
    let g1 = pts
        .iter()
        .zip(&orders)
        .find(|(p, &o)| o == m1 && disjoint(p))
        .map(|(p, _)| p.clone())
        .expect("invariant factor decomposition");
    let sylows = primes.iter().map(|&(r, _)| ec.sylow_from_generators(r, &g1, m1, &g2, m2)).collect();
    GroupStructure { m1, m2, g1, g2, sylows }
}

/// Least P1 of exact order ell^n, then least P2 completing it to a basis of
/// E[ell^n], among the enumerated rational points.
fn least_basis(ec: &Ec, ell: u64, n: u32) -> Option<(Point, Point)> {
    let k = ell.pow(n) as u128;
    let tors: Vec<Point> = ec.enumerate().into_iter().filter(|p| ec.mul(k, p).is_inf()).collect();
    let exact = |p: &Point| !ec.mul(k / ell as u128, p).is_inf();
    let p1 = tors.iter().find(|p| exact(p))?.clone();
    let low1 = ec.mul(k / ell as u128, &p1);
    let line: Vec<Point> = (0..ell).map(|i| ec.mul(i as u128, &low1)).collect();
    let p2 = tors
        .iter()
        .find(|p| exact(p) && !line.contains(&ec.mul(k / ell as u128, p)))?
        .clone();
    Some((p1, p2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm() -> Curve {
        Curve::from_ints(7, 3, 0, -3).unwrap()
    }
    fn eprime() -> Curve {
        Curve::from_ints(7, 3, 0, 9).unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(cm().order_over_extension(1), BigUint::from(3u32));
        assert_eq!(cm().order_over_extension(2), BigUint::from(39u32));
        assert_eq!(cm().order_over_extension(3), BigUint::from(324u32));
        assert_eq!(eprime().order_over_extension(1), BigUint::from(9u32));
        assert!(matches!(Curve::from_ints(7, 3, 0, 0), Err(Error::Singular)));
    }

    #[test]
    fn doubling_on_eprime() {
        let e = eprime();
        let p = e.point(0, 3).unwrap();
        let ec = e.base();
        assert_eq!(ec.mul(2, &p), e.point(0, 4).unwrap());
        assert!(ec.mul(3, &p).is_inf());
        assert_eq!(ec.group_law(&p, &Point::Inf, 1), p);
    }

    #[test]
    fn structures() {
        let g = cm().group_structure().unwrap().clone();
        assert_eq!((g.m1, g.m2), (1, 3));
        let g = eprime().group_structure().unwrap().clone();
        assert_eq!((g.m1, g.m2), (3, 3));
    }

    #[test]
    fn torsion_bases() {
        let e = eprime();
        let tb = e.torsion_basis(1).unwrap();
        assert_eq!(tb.m(), 1);
        assert_eq!(tb.p1, e.point(0, 3).unwrap());
        assert_eq!(tb.p2, e.point(3, 1).unwrap());
        assert_eq!(cm().torsion_basis(1).unwrap().m(), 3);
    }

    #[test]
    fn division_of_points() {
        let e = eprime();
        let p = e.point(0, 3).unwrap();
        let (_, ec, q) = e.divide_point(&p, 1).unwrap();
        assert_eq!(ec.mul(3, &q), e.lift_rational(&ec, &p));
        let (d, _, q) = e.divide_point(&Point::Inf, 1).unwrap();
        assert_eq!((d, q), (1, Point::Inf));
    }

    #[test]
    fn pic0_examples() {
        let e = eprime();
        let gs = e.group_structure().unwrap().clone();
        assert_eq!(e.pic0_coordinates(&Point::Inf).unwrap(), vec![0, 0]);
        assert_eq!(e.pic0_coordinates(&gs.g2).unwrap(), vec![0, 1]);
        assert_eq!(e.pic0_coordinates(&gs.g1).unwrap(), vec![1, 0]);
        assert!(e.is_divisible(&Point::Inf, 3).unwrap());
        assert!(!e.is_divisible(&gs.g2, 3).unwrap());
    }
}
