//! The genus-two family, handled through its elliptic quotients
//! y^2 = x^3 - 3 and y^2 = x^3 + 9: admissible primes, 3-torsion counts and
//! 3-divisibility of the point (0, 3).

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::curve::{rng_for, Curve, Point};
use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::poly::{powmod, proots};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub q: u64,
    pub prime: bool,
    pub q_mod3_ok: bool,
    pub cube3: bool,
    pub cube4: bool,
    pub zeta_noncube: bool,
    pub admissible: bool,
    pub reason: Option<&'static str>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterexampleReport {
    pub q: u64,
    pub torsion_e: u64,
    pub torsion_eprime: u64,
    pub p1_divisible: bool,
    pub conclusion: bool,
}

fn is_cube(x: u64, q: u64) -> bool {
    x % q != 0 && powmod(x % q, (q - 1) / 3, q) == 1
}

/// A primitive cube root of unity mod q, q = 1 mod 3 prime.
fn cube_root_of_unity(q: u64) -> u64 {
    (2..q).map(|g| powmod(g, (q - 1) / 3, q)).find(|&z| z != 1).expect("q = 1 mod 3")
}

pub fn admissible_prime(q: u64) -> AdmissibilityReport {
    let mut r = AdmissibilityReport {
        q,
        prime: is_prime(q),
        q_mod3_ok: q % 3 == 1,
        cube3: false,
        cube4: false,
        zeta_noncube: false,
        admissible: false,
        reason: None,
    };
    if !r.prime {
        r.reason = Some("not prime");
        return r;
    }
    if q <= 3 {
        r.reason = Some("ramified");
        return r;
    }
    if !r.q_mod3_ok {
        // every element is a cube and there is no primitive cube root of unity
        r.cube3 = true;
        r.cube4 = true;
        r.reason = Some("q != 1 mod 3");
        return r;
    }
    r.cube3 = is_cube(3, q);
    r.cube4 = is_cube(4, q);
    r.zeta_noncube = !is_cube(cube_root_of_unity(q), q);
    r.admissible = r.cube3 && r.cube4 && r.zeta_noncube;
    if !r.admissible {
        r.reason = Some("splitting condition fails");
    }
    r
}

/// Order of E[3](F_q) for y^2 = x^3 + ax + b, from the roots of the
/// 3-division polynomial 3x^4 + 6ax^2 + 12bx - a^2.
pub fn three_torsion_order(curve: &Curve) -> u64 {
    let f = curve.field();
    let (a, b) = (curve.a(), curve.b());
    let psi3 = vec![
        f.neg(&f.from_u64(a * a % curve.p())),
        f.from_u64(12 * b),
        f.from_u64(6 * a),
        f.zero(),
        f.from_u64(3),
    ];
    let mut rng = rng_for(&[curve.p(), a, b, 3]);
    let ec = curve.base();
    let roots = proots(f, &psi3, &mut rng);
    1 + 2 * roots.iter().filter(|x| f.is_square(&ec.rhs(x))).count() as u64
}

/// (w, y~) on y~^2 = 1 - 3w^3 goes to (-3w, 3y~) on y^2 = x^3 + 9.
pub fn eprime_model_map(q: u64, w: u64, yt: u64) -> (u64, u64) {
    ((q - 3 % q) * (w % q) % q, 3 * (yt % q) % q)
}

pub fn verify_counterexample(q: u64) -> Result<CounterexampleReport> {
    if !admissible_prime(q).admissible {
        return Err(Error::Precondition(format!("{q} is not an admissible prime")));
    }
    let e = Curve::from_ints(q, 3, 0, -3)?;
    let ep = Curve::from_ints(q, 3, 0, 9)?;
    let torsion_e = three_torsion_order(&e);
    let torsion_eprime = three_torsion_order(&ep);
    let p1 = ep.point(0, 3)?;
    let p1_divisible = ep.is_divisible(&p1, 3)?;
    Ok(CounterexampleReport {
        q,
        torsion_e,
        torsion_eprime,
        p1_divisible,
        conclusion: torsion_e == 9 && torsion_eprime == 9 && !p1_divisible,
    })
}

#[derive(Clone, Debug)]
pub struct ScanRow {
    pub admissibility: AdmissibilityReport,
    pub report: Option<CounterexampleReport>,
}

#[derive(Clone, Debug)]
pub struct ScanResult {
    pub rows: Vec<ScanRow>,
    pub admissible: usize,
    pub primes: usize,
}

impl ScanResult {
    /// #admissible / #primes <= q_max.
    pub fn density(&self) -> f64 {
        if self.primes == 0 {
            0.0
        } else {
            self.admissible as f64 / self.primes as f64
        }
    }

    pub fn csv(&self) -> String {
        let mut s = String::from(
            "q,prime,q1mod3,cube3,cube4,zeta_noncube,admissible,torsionE,torsionEprime,p1_divisible,conclusion\n",
        );
        for row in &self.rows {
            let a = &row.admissibility;
            let _ = write!(
                s,
                "{},{},{},{},{},{},{},",
                a.q, a.prime, a.q_mod3_ok, a.cube3, a.cube4, a.zeta_noncube, a.admissible
            );
            match &row.report {
                Some(r) => {
                    let _ = writeln!(s, "{},{},{},{}", r.torsion_e, r.torsion_eprime, r.p1_divisible, r.conclusion);
                }
                None => s.push_str(",,,\n"),
            }
        }
        s
    }
}

/// Every prime up to q_max, ascending, with the counterexample check run on
/// the admissible ones.
pub fn scan(q_max: u64) -> Result<ScanResult> {
    let primes: Vec<u64> = (2..=q_max).filter(|&q| is_prime(q)).collect();
    let rows = primes
        .par_iter()
        .map(|&q| {
            let admissibility = admissible_prime(q);
            let report = if admissibility.admissible { Some(verify_counterexample(q)?) } else { None };
            Ok(ScanRow { admissibility, report })
        })
        .collect::<Result<Vec<_>>>()?;
    let admissible = rows.iter().filter(|r| r.admissibility.admissible).count();
    Ok(ScanResult { rows, admissible, primes: primes.len() })
}

/// Points (0, 3) and (0, -3) of the y^2 = x^3 + 9 model.
pub fn p1_points(curve: &Curve) -> Result<[Point; 2]> {
    Ok([curve.point(0, 3)?, curve.point(0, -3)?])
}
