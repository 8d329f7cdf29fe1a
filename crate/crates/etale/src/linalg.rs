//! Small matrices over Z/ell^N: Smith normal form, solving, ranks.

/// Dense matrix over Z/modulus, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub modulus: u64,
    pub a: Vec<Vec<u64>>,
}

fn valuation(x: u64, ell: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    let mut x = x;
    while x % ell == 0 {
        x /= ell;
        v += 1;
    }
    v
}

fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert_eq!(r0, 1, "{a} is not a unit mod {m}");
    t0.rem_euclid(m as i128) as u64
}

#[inline]
fn mm(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

impl Mat {
    pub fn new(a: Vec<Vec<u64>>, modulus: u64) -> Mat {
        let rows = a.len();
        let cols = if rows == 0 { 0 } else { a[0].len() };
        let a = a.into_iter().map(|r| r.into_iter().map(|x| x % modulus).collect()).collect();
        Mat { rows, cols, modulus, a }
    }

    pub fn zeros(rows: usize, cols: usize, modulus: u64) -> Mat {
        Mat { rows, cols, modulus, a: vec![vec![0; cols]; rows] }
    }

    pub fn identity(n: usize, modulus: u64) -> Mat {
        let mut m = Mat::zeros(n, n, modulus);
        for i in 0..n {
            m.a[i][i] = 1 % modulus;
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<u64>], rows: usize, modulus: u64) -> Mat {
        let mut m = Mat::zeros(rows, cols.len(), modulus);
        for (j, c) in cols.iter().enumerate() {
            for i in 0..rows {
                m.a[i][j] = c[i] % modulus;
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.a[i][j]).collect()
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        let mut r = Mat::zeros(self.rows, o.cols, self.modulus);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.a[i][k] == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    r.a[i][j] = (r.a[i][j] + mm(self.a[i][k], o.a[k][j], self.modulus)) % self.modulus;
                }
            }
        }
        r
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        (0..self.rows)
            .map(|i| (0..self.cols).fold(0, |acc, k| (acc + mm(self.a[i][k], v[k], self.modulus)) % self.modulus))
            .collect()
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        let m = self.modulus;
        let a = self
            .a
            .iter()
            .zip(&o.a)
            .map(|(r, s)| r.iter().zip(s).map(|(x, y)| (x + m - y) % m).collect())
            .collect();
        Mat { a, ..*self }
    }

    pub fn neg(&self) -> Mat {
        Mat::zeros(self.rows, self.cols, self.modulus).sub(self)
    }

    /// Reduction to a smaller modulus dividing the current one.
    pub fn reduce(&self, modulus: u64) -> Mat {
        Mat::new(self.a.clone(), modulus)
    }

    /// Horizontal concatenation [self | o].
    pub fn hcat(&self, o: &Mat) -> Mat {
        let a = self.a.iter().zip(&o.a).map(|(r, s)| r.iter().chain(s).copied().collect()).collect();
        Mat { rows: self.rows, cols: self.cols + o.cols, modulus: self.modulus, a }
    }

    /// Inverse of a 2x2 matrix with unit determinant.
    pub fn inverse2(&self) -> Option<Mat> {
        assert_eq!((self.rows, self.cols), (2, 2));
        let m = self.modulus;
        let a = &self.a;
        let det = (mm(a[0][0], a[1][1], m) + m - mm(a[0][1], a[1][0], m)) % m;
        if gcd(det, m) != 1 {
            return None;
        }
        let di = inv_mod(det, m);
        Some(Mat::new(
            vec![
                vec![mm(a[1][1], di, m), mm(m - a[0][1], di, m)],
                vec![mm(m - a[1][0], di, m), mm(a[0][0], di, m)],
            ],
            m,
        ))
    }

    pub fn det2(&self) -> u64 {
        let m = self.modulus;
        let a = &self.a;
        (mm(a[0][0], a[1][1], m) + m - mm(a[0][1], a[1][0], m)) % m
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Smith form U A V = D over Z/ell^N, with ell^N = `a.modulus`.
pub struct Smith {
    pub u: Mat,
    pub v: Mat,
    pub d: Mat,
    /// Valuations of the diagonal (N for zero entries).
    pub vals: Vec<u32>,
    ell: u64,
    n: u32,
}

pub fn smith(a: &Mat, ell: u64) -> Smith {
    let m = a.modulus;
    let n = valuation(m, ell, 0);
    let mut d = a.clone();
    let mut u = Mat::identity(a.rows, m);
    let mut v = Mat::identity(a.cols, m);
    let mut vals = Vec::new();
    for k in 0..a.rows.min(a.cols) {
        // pivot: first entry of least valuation
        let mut best: Option<(u32, usize, usize)> = None;
        for i in k..d.rows {
            for j in k..d.cols {
                let val = valuation(d.a[i][j], ell, n);
                if val < n && best.map_or(true, |b| val < b.0) {
                    best = Some((val, i, j));
                }
            }
        }
        let Some((val, pi, pj)) = best else { break };
        d.a.swap(k, pi);
        u.a.swap(k, pi);
        for row in d.a.iter_mut() {
            row.swap(k, pj);
        }
        for row in v.a.iter_mut() {
            row.swap(k, pj);
        }
        let piv = d.a[k][k];
        let unit_inv = inv_mod((piv / ell.pow(val)) % m, m);
        let scale = ell.pow(val);
        for i in 0..d.rows {
            if i == k || d.a[i][k] == 0 {
                continue;
            }
            let f = mm(d.a[i][k] / scale, unit_inv, m);
            for j in 0..d.cols {
                d.a[i][j] = (d.a[i][j] + m - mm(f, d.a[k][j], m)) % m;
            }
            for j in 0..u.cols {
                u.a[i][j] = (u.a[i][j] + m - mm(f, u.a[k][j], m)) % m;
            }
        }
        for j in 0..d.cols {
            if j == k || d.a[k][j] == 0 {
                continue;
            }
            let f = mm(d.a[k][j] / scale, unit_inv, m);
            for i in 0..d.rows {
                d.a[i][j] = (d.a[i][j] + m - mm(f, d.a[i][k], m)) % m;
            }
            for i in 0..v.rows {
                v.a[i][j] = (v.a[i][j] + m - mm(f, v.a[i][k], m)) % m;
            }
        }
        vals.push(val);
    }
    Smith { u, v, d, vals, ell, n }
}

impl Smith {
    /// A particular solution of A y = b, if one exists.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        let m = self.d.modulus;
        let ub = self.u.apply(b);
        let mut z = vec![0u64; self.d.cols];
        for (i, &c) in ub.iter().enumerate() {
            if i < self.vals.len() {
                let val = self.vals[i];
                let s = self.ell.pow(val);
                if c % s != 0 {
                    return None;
                }
                let unit = (self.d.a[i][i] / s) % m;
                let mrest = self.ell.pow(self.n - val);
                z[i] = mm(c / s, inv_mod(unit % mrest, mrest), mrest);
            } else if c != 0 {
                return None;
            }
        }
        Some(self.v.apply(&z))
    }

    /// Rank over Z/ell of the reduction (number of unit pivots).
    pub fn rank_mod_ell(&self) -> usize {
        self.vals.iter().filter(|&&v| v == 0).count()
    }
}

pub fn solve(a: &Mat, b: &[u64], ell: u64) -> Option<Vec<u64>> {
    smith(a, ell).solve(b)
}

pub fn rank_mod_ell(a: &Mat, ell: u64) -> usize {
    smith(&a.reduce(ell), ell).rank_mod_ell()
}
