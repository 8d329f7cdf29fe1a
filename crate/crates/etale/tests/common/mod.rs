#![allow(dead_code)]

pub mod rr;

use etale::{Curve, Point};

/// (p, ell, a, b) with E[ell] inside E(F_p).
pub const FULL: &[(u64, u64, i64, i64)] = &[
    (7, 3, 0, 2),
    (13, 3, 0, 3),
    (31, 3, 0, 1),
    (37, 3, 1, 0),
    (73, 3, 0, 2),
    (5, 2, 1, 0),
    (13, 2, 1, 0),
    (7, 2, 0, 6),
    (11, 2, 2, 0),
    (19, 2, 0, 1),
    (61, 5, 0, 4),
];

/// Curves whose rational ell-torsion is cyclic of order ell.
pub const CYCLIC: &[(u64, u64, i64, i64)] = &[(7, 3, 0, -3), (13, 3, 0, 1), (19, 3, 0, 1), (7, 2, 1, 0)];

pub fn curve(c: (u64, u64, i64, i64)) -> Curve {
    Curve::from_ints(c.0, c.1, c.2, c.3).unwrap()
}

pub fn all_curves() -> Vec<Curve> {
    FULL.iter().chain(CYCLIC).map(|&c| curve(c)).collect()
}

/// Brute-force point list over the prime field.
pub fn points(c: &Curve) -> Vec<Point> {
    let p = c.p() as i64;
    let mut out = vec![Point::Inf];
    for x in 0..p {
        for y in 0..p {
            if (y * y - x * x * x - c.a() as i64 * x - c.b() as i64).rem_euclid(p) == 0 {
                out.push(c.point(x, y).unwrap());
            }
        }
    }
    out
}
