//! Frobenius on E[ell^n], the Artin identification of Pic^0[ell^inf] with
//! T/(Phi - 1)T, and the Legendre derivative dL : Pic^0[ell] -> Pic^0/ell.

use std::sync::Arc;

use crate::curve::{Curve, Ec, Point, TorsionBasis};
use crate::error::{Error, Result};
use crate::linalg::{rank_mod_ell, smith, Mat, Smith};
use crate::pairing::weil_pairing;
use crate::poly::invmod;

/// Which matrix plays the role of Phi in the Artin map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// M = G^-1, the arithmetic Frobenius.
    Arithmetic,
    /// G, the coordinate q-power map.
    Geometric,
}

/// Frobenius on a basis of E[ell^n]; matrices act on column vectors of
/// coordinates (i, j) meaning i P1 + j P2.
#[derive(Clone)]
pub struct FrobData {
    pub ell: u64,
    pub n: u32,
    pub m: usize,
    pub basis: Arc<TorsionBasis>,
    pub g: Mat,
    pub mm: Mat,
    /// M - I.
    pub la: Mat,
}

impl FrobData {
    pub fn matrix(&self, conv: Convention) -> &Mat {
        match conv {
            Convention::Arithmetic => &self.mm,
            Convention::Geometric => &self.g,
        }
    }

    /// Phi - I for the chosen convention.
    pub fn phi_minus_one(&self, conv: Convention) -> Mat {
        let k = self.basis.modulus();
        self.matrix(conv).sub(&Mat::identity(2, k))
    }

    pub fn modulus(&self) -> u64 {
        self.basis.modulus()
    }

    pub fn ec(&self) -> &Arc<Ec> {
        &self.basis.ec
    }
}

pub fn frobenius_data(curve: &Curve, n: u32) -> Result<FrobData> {
    let basis = curve.torsion_basis(n)?;
    let ec = &basis.ec;
    let k = basis.modulus();
    let col = |p: &Point| -> Result<Vec<u64>> {
        let (i, j) = basis
            .coords(&ec.frobenius(p))
            .ok_or_else(|| Error::Inconsistent("Frobenius image outside E[ell^n]".into()))?;
        Ok(vec![i, j])
    };
    let g = Mat::from_columns(&[col(&basis.p1)?, col(&basis.p2)?], 2, k);
    let mm = g.inverse2().ok_or_else(|| Error::Inconsistent("Frobenius matrix is singular".into()))?;
    let la = mm.sub(&Mat::identity(2, k));
    Ok(FrobData { ell: curve.ell(), n, m: basis.m(), basis, g, mm, la })
}

/// ell-power order exponent of a rational point.
fn ell_order(curve: &Curve, p: &Point) -> Result<u32> {
    curve
        .base()
        .r_order(p, curve.ell(), 64)
        .ok_or_else(|| Error::Precondition("point does not have ell-power order".into()))
}

/// Class of art(P) in T/(Phi - 1)T at precision ell^prec: with Q of level
/// coordinates c_Q and ell^prec Q = P, returns (Phi - I) c_Q / ell^(n - prec).
pub fn artin_vector_with(
    curve: &Curve,
    frob: &FrobData,
    p: &Point,
    prec: u32,
    conv: Convention,
) -> Result<Vec<u64>> {
    let ell = frob.ell;
    let j = ell_order(curve, p)?;
    if j + prec > frob.n {
        return Err(Error::Precondition(format!(
            "Frobenius level {} too small for a point of order {ell}^{j} at precision {prec}",
            frob.n
        )));
    }
    let pl = curve.lift_rational(frob.ec(), p);
    let (ci, cj) = frob.basis.coords(&pl).expect("rational ell-power torsion lies in E[ell^n]");
    let lp = ell.pow(prec);
    let cq = vec![ci / lp, cj / lp];
    let x = frob.phi_minus_one(conv).apply(&cq);
    let scale = ell.pow(frob.n - prec);
    if x.iter().any(|v| v % scale != 0) {
        return Err(Error::Inconsistent("Artin vector not divisible as expected".into()));
    }
    Ok(x.iter().map(|v| (v / scale) % lp).collect())
}

pub fn artin_vector(curve: &Curve, frob: &FrobData, p: &Point, prec: u32) -> Result<Vec<u64>> {
    artin_vector_with(curve, frob, p, prec, Convention::Arithmetic)
}

/// Whether x - y lies in the column space of (Phi - I) mod ell^prec.
pub fn artin_congruent(frob: &FrobData, x: &[u64], y: &[u64], prec: u32, conv: Convention) -> bool {
    let lp = frob.ell.pow(prec);
    let a = frob.phi_minus_one(conv).reduce(lp);
    let d: Vec<u64> = x.iter().zip(y).map(|(a, b)| (a % lp + lp - b % lp) % lp).collect();
    smith(&a, frob.ell).solve(&d).is_some()
}

/// dL together with the data needed to invert the Artin map mod ell.
pub struct LegendreMap {
    curve: Curve,
    pub prec: u32,
    pub conv: Convention,
    pub frob: FrobData,
    /// pic0 coordinates of the ell-components of the pic0 generators.
    gen_coords: Mat,
    /// [art(R_1) .. art(R_r) | Phi - I] mod ell.
    quotient: Smith,
    rank: usize,
}

impl LegendreMap {
    /// Default precision ell^(e+1), where ell^e is the exponent of E(F_q)[ell^inf].
    pub fn new(curve: &Curve) -> Result<Self> {
        let e = curve.ell_exponent()?;
        Self::with(curve, e + 1, Convention::Arithmetic)
    }

    pub fn with(curve: &Curve, prec: u32, conv: Convention) -> Result<Self> {
        let ell = curve.ell();
        let e = curve.ell_exponent()?;
        let frob = frobenius_data(curve, prec.max(e) + 1)?;
        let ec = curve.base();
        let gens: Vec<Point> = curve.pic0_basis()?.iter().map(|g| ec.r_component(ell, g)).collect();
        let rank = gens.len();
        let mut cols = Vec::new();
        let mut coords = Vec::new();
        for r in &gens {
            cols.push(artin_vector_with(curve, &frob, r, 1, conv)?);
            coords.push(curve.pic0_coordinates(r)?);
        }
        let art = Mat::from_columns(&cols, 2, ell);
        let big = art.hcat(&frob.phi_minus_one(conv).reduce(ell));
        let pm = frob.phi_minus_one(conv).reduce(ell);
        if rank_mod_ell(&big, ell) != rank + rank_mod_ell(&pm, ell) {
            return Err(Error::Inconsistent("Artin images of the pic0 basis are dependent".into()));
        }
        Ok(LegendreMap {
            curve: curve.clone(),
            prec,
            conv,
            gen_coords: Mat::from_columns(&coords, rank, ell),
            quotient: smith(&big, ell),
            rank,
            frob,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Pic^0/ell coordinates of the class of v in T/(ell T + (Phi - 1)T).
    pub fn art_inverse(&self, v: &[u64]) -> Result<Vec<u64>> {
        let ell = self.curve.ell();
        let v: Vec<u64> = v.iter().map(|x| x % ell).collect();
        let sol = self
            .quotient
            .solve(&v)
            .ok_or_else(|| Error::Inconsistent("class outside the span of the Artin images".into()))?;
        Ok(self.gen_coords.apply(&sol[..self.rank]))
    }

    /// dL(P) in pic0 coordinates, for P in E(F_q)[ell].
    pub fn apply(&self, p: &Point) -> Result<Vec<u64>> {
        let curve = &self.curve;
        let ell = curve.ell();
        if !curve.base().mul(ell as u128, p).is_inf() {
            return Err(Error::Precondition("point is not rational ell-torsion".into()));
        }
        if p.is_inf() || self.rank == 0 {
            return Ok(vec![0; self.rank]);
        }
        let n = self.prec;
        let lp = ell.pow(n);
        let x = artin_vector_with(curve, &self.frob, p, n, self.conv)?;
        let a = self.frob.phi_minus_one(self.conv).reduce(lp);
        let rhs: Vec<u64> = x.iter().map(|v| (v * ell) % lp).collect();
        let y = smith(&a, ell)
            .solve(&rhs)
            .ok_or_else(|| Error::Inconsistent("ell * art(P) is not in the image of Phi - 1".into()))?;
        self.art_inverse(&y)
    }

    /// Matrix of dL on the rational ell-torsion basis (columns are images).
    pub fn matrix(&self) -> Result<Mat> {
        let basis = self.curve.rational_ell_torsion_basis()?;
        let cols = basis.iter().map(|p| self.apply(p)).collect::<Result<Vec<_>>>()?;
        Ok(Mat::from_columns(&cols, self.rank, self.curve.ell()))
    }
}

pub fn legendre_derivative(curve: &Curve, p: &Point) -> Result<Vec<u64>> {
    LegendreMap::new(curve)?.apply(p)
}

/// A homomorphism Pic(C) -> Z/ell: value t0 on the base point class and a
/// functional on Pic^0/ell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicHom {
    pub t0: u64,
    pub phi: Vec<u64>,
}

impl PicHom {
    pub fn eval_pic0(&self, v: &[u64], ell: u64) -> u64 {
        self.phi.iter().zip(v).fold(0, |acc, (a, b)| (acc + a * b) % ell)
    }
}

impl LegendreMap {
    /// The point S in E[ell] with e_ell(S, X) = zeta0^{t(art^-1(proj X))}
    /// for all X in E[ell]; proj sends the basis point X_i to -e_i.
    pub fn restrict_hom(&self, t: &PicHom) -> Result<(Arc<Ec>, Point)> {
        let curve = &self.curve;
        let ell = curve.ell();
        if t.phi.len() != self.rank {
            return Err(Error::Precondition(format!("functional has length {}, expected {}", t.phi.len(), self.rank)));
        }
        let fr = &self.frob;
        let ec = fr.ec().clone();
        let top = (fr.modulus() / ell) as u128;
        let x1 = ec.mul(top, &fr.basis.p1);
        let x2 = ec.mul(top, &fr.basis.p2);
        let tbar = |e: [u64; 2]| -> Result<u64> {
            let v = [(ell - e[0]) % ell, (ell - e[1]) % ell];
            Ok(t.eval_pic0(&self.art_inverse(&v)?, ell))
        };
        let (t1, t2) = (tbar([1, 0])?, tbar([0, 1])?);
        if t1 == 0 && t2 == 0 {
            return Ok((ec, Point::Inf));
        }
        let w = weil_pairing(curve, &ec, &x1, &x2, ell)?.e;
        let wi = invmod(w, ell);
        let alpha = t2 * wi % ell;
        let beta = (ell - t1) * wi % ell;
        let s = ec.add(&ec.mul(alpha as u128, &x1), &ec.mul(beta as u128, &x2));
        Ok((ec, s))
    }
}

pub fn restrict_hom(curve: &Curve, t: &PicHom) -> Result<(Arc<Ec>, Point)> {
    LegendreMap::new(curve)?.restrict_hom(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cm_curve_has_zero_derivative() {
        let e = Curve::from_ints(7, 3, 0, -3).unwrap();
        let dl = LegendreMap::new(&e).unwrap();
        for p in e.rational_ell_torsion().unwrap() {
            assert_eq!(dl.apply(&p).unwrap(), vec![0]);
        }
        let fr = frobenius_data(&e, 1).unwrap();
        let gm = fr.g.sub(&Mat::identity(2, 3));
        assert_eq!(rank_mod_ell(&gm, 3), 1);
    }

    #[test]
    fn full_torsion_derivative_is_invertible() {
        let e = Curve::from_ints(7, 3, 0, 9).unwrap();
        let m = LegendreMap::new(&e).unwrap().matrix().unwrap();
        assert_ne!(m.det2(), 0);
    }

    #[test]
    fn frobenius_degree_identity() {
        for (p, a, b) in [(7, 0, 9), (7, 0, -3), (13, 0, 3), (31, 0, 1)] {
            let e = Curve::from_ints(p, 3, a, b).unwrap();
            let fr = frobenius_data(&e, 2).unwrap();
            let det = Mat::identity(2, 9).sub(&fr.g).det2();
            let n = e.base().order() % 9u32;
            assert_eq!(det, n.iter_u64_digits().next().unwrap_or(0), "{p} {a} {b}");
        }
    }
}
