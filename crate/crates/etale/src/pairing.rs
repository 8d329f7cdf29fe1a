//! Miller functions and the Weil and Tate pairings.

use num_bigint::BigUint;

use crate::curve::{rng_for, seed, Curve, Ec, Point};
use crate::error::{Error, Result};
use crate::field::{Embedding, FElem, MuRoot};

const RETRIES: usize = 8;

/// Running value of f(Q1)/f(Q2) kept as a fraction.
struct Ratio<'a> {
    ec: &'a Ec,
    q1: &'a Point,
    q2: &'a Point,
    num: FElem,
    den: FElem,
}

impl<'a> Ratio<'a> {
    fn new(ec: &'a Ec, q1: &'a Point, q2: &'a Point) -> Self {
        Ratio { ec, q1, q2, num: ec.f.one(), den: ec.f.one() }
    }

    fn eval(&self, g: &dyn Fn(&FElem, &FElem) -> FElem, q: &Point) -> Result<FElem> {
        let Point::Aff(x, y) = q else { return Err(Error::Collision) };
        let v = g(x, y);
        if self.ec.f.is_zero(&v) {
            Err(Error::Collision)
        } else {
            Ok(v)
        }
    }

    fn times(&mut self, g: &dyn Fn(&FElem, &FElem) -> FElem) -> Result<()> {
        let f = &self.ec.f;
        self.num = f.mul(&self.num, &self.eval(g, self.q1)?);
        self.den = f.mul(&self.den, &self.eval(g, self.q2)?);
        Ok(())
    }

    fn over(&mut self, g: &dyn Fn(&FElem, &FElem) -> FElem) -> Result<()> {
        let f = &self.ec.f;
        self.num = f.mul(&self.num, &self.eval(g, self.q2)?);
        self.den = f.mul(&self.den, &self.eval(g, self.q1)?);
        Ok(())
    }

    fn square(&mut self) {
        let f = &self.ec.f;
        self.num = f.sqr(&self.num);
        self.den = f.sqr(&self.den);
    }

    /// Multiplies by the function with divisor [T] + [U] - [T+U] - [O].
    fn step(&mut self, t: &Point, u: &Point) -> Result<Point> {
        let ec = self.ec;
        let f = &ec.f;
        let (Point::Aff(xt, yt), Point::Aff(xu, yu)) = (t, u) else {
            return Ok(ec.add(t, u));
        };
        if xt == xu && f.is_zero(&f.add(yt, yu)) {
            let c = xt.clone();
            self.times(&|x, _| f.sub(x, &c))?;
            return Ok(Point::Inf);
        }
        let lam = if xt == xu {
            f.div(&f.add(&f.scale(&f.sqr(xt), 3), &ec.a), &f.scale(yt, 2)).expect("nonzero")
        } else {
            f.div(&f.sub(yu, yt), &f.sub(xu, xt)).expect("distinct")
        };
        let (xt, yt) = (xt.clone(), yt.clone());
        self.times(&|x, y| f.sub(&f.sub(y, &yt), &f.mul(&lam, &f.sub(x, &xt))))?;
        let r = ec.add(t, u);
        if let Point::Aff(xr, _) = &r {
            let xr = xr.clone();
            self.over(&|x, _| f.sub(x, &xr))?;
        }
        Ok(r)
    }

    fn value(&self) -> FElem {
        self.ec.f.div(&self.num, &self.den).expect("nonzero denominator")
    }
}

/// f_{n,P}(Q1) / f_{n,P}(Q2), where div f_{n,P} = n[P] - [nP] - (n-1)[O] and
/// f is built from lines y - lambda x - c and verticals x - c, so it has
/// leading coefficient 1 in the uniformizer x/y at infinity.
pub fn miller_eval(ec: &Ec, p: &Point, n: u64, q1: &Point, q2: &Point) -> Result<FElem> {
    let mut r = Ratio::new(ec, q1, q2);
    if n == 0 || p.is_inf() {
        return Ok(ec.f.one());
    }
    let mut t = p.clone();
    for i in (0..63 - n.leading_zeros()).rev() {
        r.square();
        t = r.step(&t, &t.clone())?;
        if (n >> i) & 1 == 1 {
            t = r.step(&t, p)?;
        }
    }
    Ok(r.value())
}

fn shifts<'a>(ec: &'a Ec, tag: &[u64]) -> impl Iterator<Item = Point> + 'a {
    let mut rng = rng_for(tag);
    let random: Vec<Point> = (0..RETRIES).map(|_| ec.random_point(&mut rng)).collect();
    // deterministic fallback: points with x running through the field
    let fallback = (1u64..4096).filter_map(move |i| {
        let x = ec.f.element_at(i);
        ec.f.sqrt(&ec.rhs(&x)).map(|y| Point::Aff(x, y))
    });
    random.into_iter().chain(fallback)
}

fn tag(ec: &Ec, pts: &[&Point], n: u64) -> Vec<u64> {
    let mut t = vec![ec.f.p(), ec.m() as u64, n];
    for p in pts {
        if let Point::Aff(x, y) = p {
            t.push(seed(x.coeffs()));
            t.push(seed(y.coeffs()));
        }
    }
    t
}

/// e_n(P, Q) = [f_P(Q+S)/f_P(S)] / [f_Q(P-S)/f_Q(-S)] over the field of `ec`.
pub fn weil_value(ec: &Ec, p: &Point, q: &Point, n: u64) -> Result<FElem> {
    if !ec.mul(n as u128, p).is_inf() || !ec.mul(n as u128, q).is_inf() {
        return Err(Error::Precondition(format!("points are not {n}-torsion")));
    }
    if p.is_inf() || q.is_inf() || p == q {
        return Ok(ec.f.one());
    }
    for s in shifts(ec, &tag(ec, &[p, q], n)) {
        let qs = ec.add(q, &s);
        let ps = ec.sub(p, &s);
        let ns = ec.neg(&s);
        let a = miller_eval(ec, p, n, &qs, &s);
        let b = miller_eval(ec, q, n, &ps, &ns);
        if let (Ok(a), Ok(b)) = (a, b) {
            return Ok(ec.f.div(&a, &b).expect("nonzero"));
        }
    }
    Err(Error::Collision)
}

/// Smallest d >= 2 (prime to `avoid` when given) with #E(F_{q^{md}}) large
/// enough that random shifts rarely meet the support of the divisors.
fn roomy_degree(curve: &Curve, ec: &Ec, n: u64, avoid: Option<u64>) -> Option<usize> {
    let need = BigUint::from(16 * n * n + 256);
    if ec.order() >= &need {
        return None;
    }
    (2..)
        .filter(|d| avoid.map_or(true, |l| d % l as usize != 0))
        .find(|d| curve.order_over_extension(ec.m() * d) >= need)
}

/// The Weil pairing e_n(P, Q) for n a power of ell, reduced to level ell
/// (raised to n/ell) and returned as an exponent of zeta0.
pub fn weil_pairing(curve: &Curve, ec: &Ec, p: &Point, q: &Point, n: u64) -> Result<MuRoot> {
    let ell = curve.ell();
    if n % ell != 0 {
        return Err(Error::Precondition(format!("level {n} is not a multiple of {ell}")));
    }
    let value = match roomy_degree(curve, ec, n, None) {
        None => (weil_value(ec, p, q, n)?, ec.f.clone()),
        Some(d) => {
            let big = curve.ext(ec.m() * d)?;
            let emb = Embedding::new(&ec.f, &big.f)?;
            let lift = |pt: &Point| match pt {
                Point::Inf => Point::Inf,
                Point::Aff(x, y) => Point::Aff(emb.apply(x), emb.apply(y)),
            };
            (weil_value(&big, &lift(p), &lift(q), n)?, big.f.clone())
        }
    };
    let (v, f) = value;
    let reduced = f.pow_u64(&v, n / ell);
    f.mu_dlog(&reduced).ok_or_else(|| Error::Precondition("pairing value outside mu_ell".into()))
}

/// Weil pairing of two rational ell-torsion points.
pub fn weil_rational(curve: &Curve, p: &Point, q: &Point) -> Result<MuRoot> {
    weil_pairing(curve, curve.base(), p, q, curve.ell())
}

fn tate_value(ec: &Ec, p: &Point, q: &Point, ell: u64) -> Result<FElem> {
    let e = (ec.f.size() - 1u32) / ell;
    for s in shifts(ec, &tag(ec, &[p, q], ell + 1)) {
        let qs = ec.add(q, &s);
        if let Ok(v) = miller_eval(ec, p, ell, &qs, &s) {
            return Ok(ec.f.pow(&v, &e));
        }
    }
    Err(Error::Collision)
}

/// Reduced Tate pairing f_{ell,P}([Q+S] - [S])^{(#F - 1)/ell} on
/// E(F)[ell] x E(F)/ell E(F), as an exponent of zeta0.
pub fn tate_pairing(curve: &Curve, ec: &Ec, p: &Point, q: &Point) -> Result<MuRoot> {
    let ell = curve.ell();
    if !ec.mul(ell as u128, p).is_inf() {
        return Err(Error::Precondition("first argument is not ell-torsion".into()));
    }
    if p.is_inf() {
        return Ok(MuRoot::one(ell));
    }
    match roomy_degree(curve, ec, ell, Some(ell)) {
        None => {
            let v = tate_value(ec, p, q, ell)?;
            ec.f.mu_dlog(&v).ok_or_else(|| Error::Precondition("value outside mu_ell".into()))
        }
        Some(d) => {
            // over a degree-d extension the pairing is raised to 1 + Q + ... + Q^{d-1} = d mod ell
            let big = curve.ext(ec.m() * d)?;
            let emb = Embedding::new(&ec.f, &big.f)?;
            let lift = |pt: &Point| match pt {
                Point::Inf => Point::Inf,
                Point::Aff(x, y) => Point::Aff(emb.apply(x), emb.apply(y)),
            };
            let v = tate_value(&big, &lift(p), &lift(q), ell)?;
            let mu = big.f.mu_dlog(&v).ok_or_else(|| Error::Precondition("value outside mu_ell".into()))?;
            let dinv = crate::poly::invmod(d as u64 % ell, ell);
            Ok(mu.pow(dinv as i64))
        }
    }
}
