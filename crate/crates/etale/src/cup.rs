//! H^1 and H^2 classes on a genus-1 curve and their cup products.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::curve::{Curve, Point};
use crate::error::{Error, Result};
use crate::field::MuRoot;
use crate::galois::{LegendreMap, PicHom};
use crate::linalg::{rank_mod_ell, solve, Mat};
use crate::pairing::weil_rational;

/// [a~][g^c] with a~ the normalized function of divisor ell[P] - ell[O].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct H1Class {
    pub point: Point,
    pub const_exp: u64,
}

impl H1Class {
    pub fn is_normalized(&self) -> bool {
        self.const_exp == 0
    }
    pub fn is_constant(&self) -> bool {
        self.point.is_inf()
    }
}

/// deg_coeff [O] + sum pic0_i [G_i], tensored with zeta0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct H2Class {
    pub deg_coeff: u64,
    pub pic0: Vec<u64>,
}

impl H2Class {
    pub fn zero(rank: usize) -> Self {
        H2Class { deg_coeff: 0, pic0: vec![0; rank] }
    }
    pub fn is_zero(&self) -> bool {
        self.deg_coeff == 0 && self.pic0.iter().all(|&x| x == 0)
    }
    pub fn add(&self, o: &H2Class, ell: u64) -> H2Class {
        H2Class {
            deg_coeff: (self.deg_coeff + o.deg_coeff) % ell,
            pic0: self.pic0.iter().zip(&o.pic0).map(|(a, b)| (a + b) % ell).collect(),
        }
    }
    pub fn neg(&self, ell: u64) -> H2Class {
        H2Class {
            deg_coeff: (ell - self.deg_coeff) % ell,
            pic0: self.pic0.iter().map(|a| (ell - a) % ell).collect(),
        }
    }
    /// (deg, pic0...) as one vector.
    pub fn as_vec(&self) -> Vec<u64> {
        std::iter::once(self.deg_coeff).chain(self.pic0.iter().copied()).collect()
    }
}

fn axpy(acc: &mut [u64], c: u64, v: &[u64], ell: u64) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a = (*a + c % ell * x) % ell;
    }
}

pub fn eval_hom(t: &PicHom, h: &H2Class, ell: u64) -> MuRoot {
    let v = (t.t0 % ell * h.deg_coeff + t.eval_pic0(&h.pic0, ell)) % ell;
    MuRoot::new(v as i64, ell)
}

/// Per-curve state for cup products; dL is built on first use.
pub struct CupContext {
    curve: Curve,
    rank: usize,
    dl: OnceLock<LegendreMap>,
    weil: Mutex<HashMap<(Point, Point), u64>>,
    dls: Mutex<HashMap<Point, Vec<u64>>>,
}

impl CupContext {
    pub fn new(curve: &Curve) -> Result<Self> {
        let rank = curve.ell_rank()?;
        Ok(CupContext {
            curve: curve.clone(),
            rank,
            dl: OnceLock::new(),
            weil: Mutex::new(HashMap::new()),
            dls: Mutex::new(HashMap::new()),
        })
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn legendre(&self) -> Result<&LegendreMap> {
        if let Some(d) = self.dl.get() {
            return Ok(d);
        }
        let d = LegendreMap::new(&self.curve)?;
        Ok(self.dl.get_or_init(|| d))
    }

    pub fn dl(&self, p: &Point) -> Result<Vec<u64>> {
        if p.is_inf() {
            return Ok(vec![0; self.rank]);
        }
        if let Some(v) = self.dls.lock().unwrap().get(p) {
            return Ok(v.clone());
        }
        let v = self.legendre()?.apply(p)?;
        self.dls.lock().unwrap().insert(p.clone(), v.clone());
        Ok(v)
    }

    /// dlog of the Weil pairing of two rational ell-torsion points.
    pub fn weil(&self, p: &Point, q: &Point) -> Result<u64> {
        let key = (p.clone(), q.clone());
        if let Some(&w) = self.weil.lock().unwrap().get(&key) {
            return Ok(w);
        }
        let w = weil_rational(&self.curve, p, q)?.e;
        self.weil.lock().unwrap().insert(key, w);
        Ok(w)
    }

    pub fn h1_new(&self, p: Point, c: i64) -> Result<H1Class> {
        let ell = self.curve.ell();
        let ec = self.curve.base();
        if !ec.is_on(&p) {
            return Err(Error::NotOnCurve);
        }
        if !ec.mul(ell as u128, &p).is_inf() {
            return Err(Error::Precondition("point is not rational ell-torsion".into()));
        }
        Ok(H1Class { point: p, const_exp: c.rem_euclid(ell as i64) as u64 })
    }

    pub fn h1_add(&self, a: &H1Class, b: &H1Class) -> H1Class {
        let ell = self.curve.ell();
        H1Class {
            point: self.curve.base().add(&a.point, &b.point),
            const_exp: (a.const_exp + b.const_exp) % ell,
        }
    }

    /// Every class (P, c) with P in E(F_q)[ell].
    pub fn all_classes(&self) -> Result<Vec<H1Class>> {
        let ell = self.curve.ell();
        let mut out = Vec::new();
        for p in self.curve.rational_ell_torsion()? {
            for c in 0..ell {
                out.push(H1Class { point: p.clone(), const_exp: c });
            }
        }
        Ok(out)
    }

    pub fn normalized_classes(&self) -> Result<Vec<H1Class>> {
        Ok(self.curve.rational_ell_torsion()?.into_iter().map(|p| H1Class { point: p, const_exp: 0 }).collect())
    }

    pub fn cup_product(&self, ha: &H1Class, hb: &H1Class) -> Result<H2Class> {
        let curve = &self.curve;
        let ell = curve.ell();
        let w = self.weil(&ha.point, &hb.point)?;
        let mut out = H2Class { deg_coeff: w, pic0: vec![0; self.rank] };
        if ha.const_exp != 0 && !hb.point.is_inf() {
            axpy(&mut out.pic0, ha.const_exp, &self.dl(&hb.point)?, ell);
        }
        let mut coef_a = hb.const_exp;
        if ell == 2 {
            let (pa, pb) = (&ha.point, &hb.point);
            let (zeta, zeta2) = if pa.is_inf() || pb.is_inf() {
                (0, 0)
            } else if w == 0 {
                ((curve.p() - 1) / 2 % 2, 1)
            } else {
                (self.harumph(pa, pb)?, 0)
            };
            axpy(&mut out.pic0, w, &curve.pic0_coordinates(pb)?, ell);
            axpy(&mut out.pic0, zeta2, &curve.pic0_coordinates(pa)?, ell);
            // zeta^-1 = zeta in mu_2
            coef_a = (coef_a + zeta) % ell;
        }
        if coef_a != 0 && !ha.point.is_inf() {
            axpy(&mut out.pic0, ell - coef_a, &self.dl(&ha.point)?, ell);
        }
        Ok(out)
    }

    /// The unique z with z dL(a) + z' dL(b) = [a] - [b] in Pic^0/2.
    fn harumph(&self, pa: &Point, pb: &Point) -> Result<u64> {
        let curve = &self.curve;
        let (da, db) = (self.dl(pa)?, self.dl(pb)?);
        let m = Mat::from_columns(&[da, db], self.rank, 2);
        if rank_mod_ell(&m, 2) != 2 {
            return Err(Error::Inconsistent("dL(a), dL(b) are dependent".into()));
        }
        let ca = curve.pic0_coordinates(pa)?;
        let cb = curve.pic0_coordinates(pb)?;
        let rhs: Vec<u64> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % 2).collect();
        let z = solve(&m, &rhs, 2).ok_or_else(|| Error::Inconsistent("unsolvable dL system".into()))?;
        Ok(z[0])
    }

    /// [g^c] cup hb for a normalized or constant hb.
    pub fn cup_with_constant(&self, c: i64, hb: &H1Class) -> Result<H2Class> {
        let ell = self.curve.ell();
        if !hb.is_normalized() && !hb.is_constant() {
            return Err(Error::Precondition("second class must be normalized or constant".into()));
        }
        let c = c.rem_euclid(ell as i64) as u64;
        let mut out = H2Class::zero(self.rank);
        if c != 0 && !hb.point.is_inf() {
            axpy(&mut out.pic0, c, &self.dl(&hb.point)?, ell);
        }
        Ok(out)
    }

    pub fn triple_product(&self, t: &PicHom, ha: &H1Class, hb: &H1Class) -> Result<MuRoot> {
        Ok(eval_hom(t, &self.cup_product(ha, hb)?, self.curve.ell()))
    }

    /// Rank of the span of cups of normalized classes, and whether all of
    /// them are [O] tensor the Weil pairing.
    pub fn normalized_cup_span(&self) -> Result<(usize, bool)> {
        let ell = self.curve.ell();
        let hs = self.normalized_classes()?;
        let mut cols = Vec::new();
        let mut cond = true;
        for a in &hs {
            for b in &hs {
                let c = self.cup_product(a, b)?;
                cond &= c.pic0.iter().all(|&x| x == 0);
                cols.push(c.as_vec());
            }
        }
        let m = Mat::from_columns(&cols, self.rank + 1, ell);
        Ok((rank_mod_ell(&m, ell), cond))
    }
}

pub fn h1_new(curve: &Curve, p: Point, c: i64) -> Result<H1Class> {
    CupContext::new(curve)?.h1_new(p, c)
}

pub fn cup_product(curve: &Curve, ha: &H1Class, hb: &H1Class) -> Result<H2Class> {
    CupContext::new(curve)?.cup_product(ha, hb)
}

pub fn cup_with_constant(curve: &Curve, c: i64, hb: &H1Class) -> Result<H2Class> {
    CupContext::new(curve)?.cup_with_constant(c, hb)
}

pub fn triple_product(curve: &Curve, t: &PicHom, ha: &H1Class, hb: &H1Class) -> Result<MuRoot> {
    CupContext::new(curve)?.triple_product(t, ha, hb)
}

pub fn normalized_cup_span(curve: &Curve) -> Result<(usize, bool)> {
    CupContext::new(curve)?.normalized_cup_span()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_classes_cup_to_zero() {
        let e = Curve::from_ints(7, 3, 0, 9).unwrap();
        let cx = CupContext::new(&e).unwrap();
        let r = H1Class { point: Point::Inf, const_exp: 1 };
        assert!(cx.cup_product(&r, &r).unwrap().is_zero());
    }

    #[test]
    fn normalized_basis_pair_on_eprime() {
        let e = Curve::from_ints(7, 3, 0, 9).unwrap();
        let cx = CupContext::new(&e).unwrap();
        let a = cx.h1_new(e.point(0, 3).unwrap(), 0).unwrap();
        let b = cx.h1_new(e.point(3, 1).unwrap(), 0).unwrap();
        let c = cx.cup_product(&a, &b).unwrap();
        assert_ne!(c.deg_coeff, 0);
        assert_eq!(c.pic0, vec![0, 0]);
    }

    #[test]
    fn cm_curve_constant_cups_vanish() {
        let e = Curve::from_ints(7, 3, 0, -3).unwrap();
        let cx = CupContext::new(&e).unwrap();
        for h in cx.normalized_classes().unwrap() {
            for c in 0..3 {
                assert!(cx.cup_with_constant(c, &h).unwrap().is_zero());
            }
        }
    }
}
