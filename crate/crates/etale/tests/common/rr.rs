//! The Weil pairing from its definition, with the functions f_X of divisor
//! n[X] - n[O] found by linear algebra in a Riemann-Roch space.

use std::sync::Arc;

use etale::field::FieldCtx;
use etale::pairing::weil_pairing;
use etale::{Curve, Ec, FElem, Point};
use num_traits::ToPrimitive;
use rand::SeedableRng;

/// Monomials x^i y^j with pole order 2i + 3j <= n at infinity.
pub fn monomials(n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for j in 0..=1u64 {
        for i in 0..=n / 2 {
            if 2 * i + 3 * j <= n {
                out.push((i, j));
            }
        }
    }
    out
}

/// A nonzero kernel vector of a matrix over a finite field.
pub fn kernel_vector(f: &FieldCtx, mut rows: Vec<Vec<FElem>>, cols: usize) -> Vec<FElem> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(k) = (r..rows.len()).find(|&k| !f.is_zero(&rows[k][c])) else { continue };
        rows.swap(r, k);
        let inv = f.inv(&rows[r][c]).unwrap();
        for x in rows[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        for k in 0..rows.len() {
            if k != r && !f.is_zero(&rows[k][c]) {
                let m = rows[k][c].clone();
                for j in 0..cols {
                    let v = f.mul(&m, &rows[r][j]);
                    rows[k][j] = f.sub(&rows[k][j], &v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free = (0..cols).find(|c| !pivots.contains(c)).expect("nontrivial kernel");
    let mut v = vec![f.zero(); cols];
    v[free] = f.one();
    for (i, &c) in pivots.iter().enumerate() {
        v[c] = f.neg(&rows[i][free]);
    }
    v
}

pub fn series_mul(f: &FieldCtx, a: &[FElem], b: &[FElem]) -> Vec<FElem> {
    let k = a.len();
    let mut out = vec![f.zero(); k];
    for i in 0..k {
        for j in 0..k - i {
            out[i + j] = f.add(&out[i + j], &f.mul(&a[i], &b[j]));
        }
    }
    out
}

/// Coefficients on `monomials(n)` of a function with divisor n[X] - n[O].
pub fn rr_function(ec: &Ec, a: u64, x: &Point, n: u64) -> Vec<FElem> {
    let f = ec.field();
    let mons = monomials(n);
    let Point::Aff(x0, y0) = x else { panic!("X = O") };
    if f.is_zero(y0) {
        // (x - x0)^(n/2)
        assert_eq!(n % 2, 0);
        let mut c = vec![f.one()];
        for _ in 0..n / 2 {
            let mut next = vec![f.zero(); c.len() + 1];
            for (i, ci) in c.iter().enumerate() {
                next[i + 1] = f.add(&next[i + 1], ci);
                next[i] = f.sub(&next[i], &f.mul(ci, x0));
            }
            c = next;
        }
        return mons.iter().map(|&(i, j)| if j == 0 { c[i as usize].clone() } else { f.zero() }).collect();
    }
    // power series in u = x - x0; y^2 = g0 + g1 u + g2 u^2 + u^3
    let k = n as usize;
    let g = [f.sqr(y0), f.add(&f.scale(&f.sqr(x0), 3), &f.from_u64(a)), f.scale(x0, 3), f.one()];
    let two_y0_inv = f.inv(&f.scale(y0, 2)).unwrap();
    let mut ys = vec![y0.clone()];
    for t in 1..k {
        let mut s = if t < 4 { g[t].clone() } else { f.zero() };
        for i in 1..t {
            s = f.sub(&s, &f.mul(&ys[i], &ys[t - i]));
        }
        ys.push(f.mul(&s, &two_y0_inv));
    }
    let mut lin = vec![f.zero(); k];
    lin[0] = x0.clone();
    if k > 1 {
        lin[1] = f.one();
    }
    let mut xs = vec![{
        let mut one = vec![f.zero(); k];
        one[0] = f.one();
        one
    }];
    for i in 1..=n / 2 {
        let next = series_mul(f, &xs[i as usize - 1], &lin);
        xs.push(next);
    }
    let cols: Vec<Vec<FElem>> = mons
        .iter()
        .map(|&(i, j)| if j == 0 { xs[i as usize].clone() } else { series_mul(f, &xs[i as usize], &ys) })
        .collect();
    let rows: Vec<Vec<FElem>> = (0..k).map(|t| cols.iter().map(|c| c[t].clone()).collect()).collect();
    kernel_vector(f, rows, mons.len())
}

pub fn eval_fn(ec: &Ec, n: u64, c: &[FElem], z: &Point) -> Option<FElem> {
    let f = ec.field();
    let Point::Aff(x, y) = z else { return None };
    let mut acc = f.zero();
    for (&(i, j), ci) in monomials(n).iter().zip(c) {
        let mut t = f.mul(ci, &f.pow_u64(x, i));
        if j == 1 {
            t = f.mul(&t, y);
        }
        acc = f.add(&acc, &t);
    }
    (!f.is_zero(&acc)).then_some(acc)
}

/// e_n(P, Q) = f_P(D_Q) / f_Q(D_P) with D_P = [P] - [O] moved to [P - S] - [-S]
/// and D_Q = [Q + S] - [S], f_X from a Riemann-Roch space.
pub fn weil_rr(ec: &Ec, a: u64, p: &Point, q: &Point, n: u64, seed: u64) -> FElem {
    let f = ec.field();
    if p.is_inf() || q.is_inf() {
        return f.one();
    }
    let fp = rr_function(ec, a, p, n);
    let fq = rr_function(ec, a, q, n);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..200 {
        let s = ec.random_point(&mut rng);
        let vals = (
            eval_fn(ec, n, &fp, &ec.add(q, &s)),
            eval_fn(ec, n, &fp, &s),
            eval_fn(ec, n, &fq, &ec.sub(p, &s)),
            eval_fn(ec, n, &fq, &ec.neg(&s)),
        );
        if let (Some(a1), Some(a2), Some(b1), Some(b2)) = vals {
            let num = f.mul(&a1, &b2);
            let den = f.mul(&a2, &b1);
            return f.div(&num, &den).unwrap();
        }
    }
    panic!("no admissible shift")
}

/// Smallest extension containing `src` with at least `need` points.
pub fn roomy(c: &Curve, m: usize, need: u64) -> Arc<Ec> {
    let mut k = m;
    while c.order_over_extension(k).to_u64().map_or(false, |o| o < need) {
        k += m;
    }
    c.ext(k).unwrap()
}


/// Compares the library's Weil pairing with `weil_rr` on every pair from the
/// span of `basis` inside `src`.
pub fn check_weil_against_rr(c: &Curve, src: &Ec, basis: &[Point]) -> Result<(), String> {
    let ell = c.ell();
    let big = roomy(c, src.m(), 64 * ell * ell);
    let zeta = big.field().from_u64(c.field().zeta0());
    let mut pts = vec![Point::Inf];
    for g in basis {
        let mut next = Vec::new();
        for p in &pts {
            for k in 0..ell {
                next.push(src.add(p, &src.mul(k as u128, g)));
            }
        }
        pts = next;
    }
    for (i, p) in pts.iter().enumerate() {
        for (j, q) in pts.iter().enumerate() {
            let e = weil_pairing(c, src, p, q, ell).map_err(|e| e.to_string())?.e;
            let pb = c.lift(src, &big, p).map_err(|e| e.to_string())?;
            let qb = c.lift(src, &big, q).map_err(|e| e.to_string())?;
            let v = weil_rr(&big, c.a(), &pb, &qb, ell, (i * 100 + j) as u64);
            if v != big.field().pow_u64(&zeta, e) {
                return Err(format!("p={} e({p}, {q}) = zeta0^{e} disagrees with {v}", c.p()));
            }
        }
    }
    Ok(())
}
