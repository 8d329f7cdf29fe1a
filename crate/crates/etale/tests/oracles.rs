//! Library results checked against brute-force or definitional computations
//! that share no code path with the library's algorithms.

mod common;

use std::collections::{BTreeSet, HashSet};

use etale::galois::LegendreMap;
use etale::genus2::{admissible_prime, eprime_model_map, scan, three_torsion_order, verify_counterexample};
use etale::{make_context, Curve, Ec, Embedding, FElem, Point};
use num_traits::ToPrimitive;

use common::rr::{check_weil_against_rr, eval_fn, rr_function};
use common::{curve, points, CYCLIC, FULL};

#[test]
fn weil_matches_riemann_roch_on_rational_torsion() {
    for &spec in FULL {
        let c = curve(spec);
        let basis = c.rational_ell_torsion_basis().unwrap();
        check_weil_against_rr(&c, c.base(), &basis).unwrap();
    }
}

#[test]
fn weil_matches_riemann_roch_over_division_field() {
    for &spec in CYCLIC {
        let c = curve(spec);
        let tb = c.torsion_basis(1).unwrap();
        check_weil_against_rr(&c, &tb.ec, &[tb.p1.clone(), tb.p2.clone()]).unwrap();
    }
}

#[test]
fn rr_function_has_the_right_zeros() {
    // spot check of the oracle itself: f_X vanishes at X and nowhere else
    let c = curve((7, 3, 0, 2));
    let ec = c.base();
    for x in c.rational_ell_torsion().unwrap().into_iter().filter(|p| !p.is_inf()) {
        let g = rr_function(ec, c.a(), &x, 3);
        for z in points(&c).iter().filter(|z| !z.is_inf()) {
            assert_eq!(eval_fn(ec, 3, &g, z).is_none(), *z == x);
        }
    }
}

// Fields

#[test]
fn f49_point_count_by_enumeration() {
    let c = Curve::from_ints(7, 3, 0, -3).unwrap();
    let ec = c.ext(2).unwrap();
    let f = ec.field();
    let mut squares = HashSet::new();
    for i in 0..49 {
        let z = f.element_at(i);
        squares.insert(f.sqr(&z));
    }
    let mut n = 1;
    for i in 0..49 {
        let r = ec.rhs(&f.element_at(i));
        if f.is_zero(&r) {
            n += 1;
        } else if squares.contains(&r) {
            n += 2;
        }
    }
    assert_eq!(n, 39);
    assert_eq!(ec.order().to_u64(), Some(39));
    assert_eq!(c.order_over_extension(2).to_u64(), Some(39));
}

#[test]
fn quadratic_modulus_is_least_irreducible() {
    for p in [5u64, 7, 11, 13] {
        let f = make_context(p, 2, 2).unwrap();
        // x^2 + c1 x + c0 irreducible iff it has no root; least (c0, c1) wins
        let mut least = None;
        'outer: for c0 in 0..p {
            for c1 in 0..p {
                if (0..p).all(|x| (x * x + c1 * x + c0) % p != 0) {
                    least = Some(vec![c0, c1, 1]);
                    break 'outer;
                }
            }
        }
        assert_eq!(f.modulus(), least.unwrap().as_slice(), "p={p}");
    }
    assert_eq!(make_context(7, 3, 2).unwrap().modulus(), &[1, 0, 1]);
}

#[test]
fn embedding_uses_least_root() {
    let small = make_context(7, 3, 2).unwrap();
    let big = make_context(7, 3, 4).unwrap();
    let roots: BTreeSet<FElem> = (0..2401)
        .map(|i| big.element_at(i))
        .filter(|z| big.is_zero(&big.add(&big.sqr(z), &big.one())))
        .collect();
    assert_eq!(roots.len(), 2);
    let e = Embedding::new(&small, &big).unwrap();
    assert_eq!(&e.root(), roots.iter().next().unwrap());
}

#[test]
fn chi_by_power_table() {
    for (p, ell) in [(7u64, 3u64), (13, 3), (61, 5), (13, 2)] {
        let f = make_context(p, ell, 1).unwrap();
        let z = f.zeta0();
        let mut pows = vec![1u64];
        for _ in 1..ell {
            pows.push(pows.last().unwrap() * z % p);
        }
        for x in 1..p {
            let mut y = 1;
            for _ in 0..(p - 1) / ell {
                y = y * x % p;
            }
            let e = pows.iter().position(|&w| w == y).unwrap() as u64;
            assert_eq!(f.chi(x).unwrap(), e, "p={p} x={x}");
        }
        // zeta0 = g^((p-1)/ell) for the least g >= 2 that is not an ell-th power
        let powers: HashSet<u64> = (1..p).map(|x| (0..ell).fold(1, |a, _| a * x % p)).collect();
        let g = (2..p).find(|g| !powers.contains(g)).unwrap();
        let expect = (0..(p - 1) / ell).fold(1, |a, _| a * g % p);
        assert_eq!(z, expect);
        assert_eq!(f.chi(g).unwrap(), 1);
    }
}

// Group structure

fn order_of(ec: &Ec, p: &Point) -> u64 {
    let mut k = 1;
    let mut cur = p.clone();
    while !cur.is_inf() {
        cur = ec.add(&cur, p);
        k += 1;
    }
    k
}

#[test]
fn group_structure_by_enumeration() {
    for c in common::all_curves() {
        let pts = points(&c);
        let ec = c.base();
        let exponent = pts.iter().map(|p| order_of(ec, p)).fold(1u64, num_integer::lcm);
        let gs = c.group_structure().unwrap();
        assert_eq!(gs.m2, exponent, "p={}", c.p());
        assert_eq!(gs.m1 * gs.m2, pts.len() as u64);
        let ell = c.ell();
        let tors = pts.iter().filter(|p| ec.mul(ell as u128, p).is_inf()).count();
        assert_eq!(c.rational_ell_torsion().unwrap().len(), tors);
    }
}

#[test]
fn pic0_coordinates_by_enumeration() {
    for c in common::all_curves() {
        let ec = c.base();
        let ell = c.ell();
        let pts = points(&c);
        let multiples: HashSet<Point> = pts.iter().map(|p| ec.mul(ell as u128, p)).collect();
        let basis = c.pic0_basis().unwrap();
        for p in &pts {
            let v = c.pic0_coordinates(p).unwrap();
            assert_eq!(v.iter().all(|&x| x == 0), multiples.contains(p));
            // P minus the recombined basis lies in ell E(F_q)
            let mut r = p.clone();
            for (g, &k) in basis.iter().zip(&v) {
                r = ec.sub(&r, &ec.mul(k as u128, g));
            }
            assert!(multiples.contains(&r));
            assert_eq!(c.is_divisible(p, ell).unwrap(), multiples.contains(p));
        }
    }
}

// Legendre derivative through Lang's theorem: for P rational ell-torsion pick
// Z in the ell-Sylow of E(F_{q^ell}) with Frob(Z) - Z = P; then dL(P) is the
// class of -ell Z.

fn lang_dl(c: &Curve, p: &Point) -> Vec<u64> {
    let ell = c.ell();
    let ec = c.ext(ell as usize).unwrap();
    let gs = c.group_structure_over(ell as usize).unwrap();
    let s = gs.sylow(ell).unwrap().clone();
    let target = c.lift_rational(&ec, p);
    for i in 0..ell.pow(s.a) {
        for j in 0..ell.pow(s.b) {
            let z = ec.add(&ec.mul(i as u128, &s.y), &ec.mul(j as u128, &s.x));
            if ec.sub(&ec.frobenius(&z), &z) == target {
                let r = match ec.neg(&ec.mul(ell as u128, &z)) {
                    Point::Inf => Point::Inf,
                    Point::Aff(x, y) => {
                        c.point(x.as_base().unwrap() as i64, y.as_base().unwrap() as i64).unwrap()
                    }
                };
                return c.pic0_coordinates(&r).unwrap();
            }
        }
    }
    panic!("Frob - 1 misses P")
}

#[test]
fn legendre_derivative_matches_lang_construction() {
    for &spec in FULL.iter().chain(CYCLIC) {
        let c = curve(spec);
        let dl = LegendreMap::new(&c).unwrap();
        for p in c.rational_ell_torsion().unwrap() {
            assert_eq!(dl.apply(&p).unwrap(), lang_dl(&c, &p), "{spec:?} {p}");
        }
    }
}

// Genus-two family

fn cube_set(q: u64) -> HashSet<u64> {
    (1..q).map(|x| x * x % q * x % q).collect()
}

fn is_prime_naive(n: u64) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn admissible_naive(q: u64) -> bool {
    if !is_prime_naive(q) || q <= 3 || q % 3 != 1 {
        return false;
    }
    let cubes = cube_set(q);
    let zeta = (2..q).find(|&z| z * z % q * z % q == 1).unwrap();
    cubes.contains(&3) && cubes.contains(&4) && !cubes.contains(&zeta)
}

#[test]
fn admissibility_by_cube_sets() {
    for q in 0..3000 {
        assert_eq!(admissible_prime(q).admissible, admissible_naive(q), "q={q}");
    }
}

#[test]
fn scan_counts_by_cube_sets() {
    let r = scan(3000).unwrap();
    let naive = (2..=3000).filter(|&q| admissible_naive(q)).count();
    assert_eq!(r.admissible, naive);
    assert_eq!(r.primes, (2..=3000).filter(|&q| is_prime_naive(q)).count());
}

#[test]
fn both_cube_roots_of_unity_agree() {
    for q in (7..3000).filter(|&q| is_prime_naive(q) && q % 3 == 1) {
        let cubes = cube_set(q);
        let roots: Vec<u64> = (2..q).filter(|&z| z * z % q * z % q == 1).collect();
        assert_eq!(roots.len(), 2);
        assert_eq!(cubes.contains(&roots[0]), cubes.contains(&roots[1]));
    }
}

#[test]
fn three_torsion_and_divisibility_by_enumeration() {
    let qs: Vec<u64> = (5..1500).filter(|&q| admissible_naive(q)).collect();
    assert!(qs.contains(&439));
    for q in qs {
        let e = Curve::from_ints(q, 3, 0, -3).unwrap();
        let ep = Curve::from_ints(q, 3, 0, 9).unwrap();
        for c in [&e, &ep] {
            let n = points(c).iter().filter(|p| c.base().mul(3, p).is_inf()).count() as u64;
            assert_eq!(three_torsion_order(c), n);
            assert_eq!(n, 9);
        }
        let triples: HashSet<Point> = points(&ep).iter().map(|p| ep.base().mul(3, p)).collect();
        let p1 = ep.point(0, 3).unwrap();
        let r = verify_counterexample(q).unwrap();
        assert_eq!(r.p1_divisible, triples.contains(&p1));
        assert!(!r.p1_divisible && r.conclusion);
    }
}

#[test]
fn three_torsion_on_arbitrary_curves() {
    for q in [7u64, 13, 19, 31] {
        for b in 1..q as i64 {
            let c = Curve::from_ints(q, 3, 1, b);
            let Ok(c) = c else { continue };
            let n = points(&c).iter().filter(|p| c.base().mul(3, p).is_inf()).count() as u64;
            assert_eq!(three_torsion_order(&c), n, "q={q} b={b}");
        }
    }
}

#[test]
fn eprime_model_map_is_a_bijection() {
    for q in [5u64, 7, 11, 13, 31, 439] {
        let src: Vec<(u64, u64)> = (0..q)
            .flat_map(|w| (0..q).map(move |y| (w, y)))
            .filter(|&(w, y)| (y * y + 3 * w * w % q * w) % q == 1 % q)
            .collect();
        let dst: HashSet<(u64, u64)> = (0..q)
            .flat_map(|x| (0..q).map(move |y| (x, y)))
            .filter(|&(x, y)| y * y % q == (x * x % q * x + 9) % q)
            .collect();
        let image: HashSet<(u64, u64)> = src.iter().map(|&(w, y)| eprime_model_map(q, w, y)).collect();
        assert_eq!(image.len(), src.len());
        assert_eq!(image, dst, "q={q}");
    }
}
