use crate::algebra_core::arith::inv_mod;
use crate::algebra_core::linalg::{identity, Matrix};
use crate::algebra_core::Scalar;
use crate::error::{Error, Result};
use crate::local_ring::Zpn;
use rand::Rng;

/// Element of F_p[omega]/omega^P, a finite-precision model of the DVR F_p[[omega]].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncDvr {
    p: u64,
    c: Vec<u64>,
}

impl TruncDvr {
    pub fn zero(p: u64, prec: usize) -> Self {
        Self { p, c: vec![0; prec] }
    }

    pub fn from_coeffs(p: u64, prec: usize, cs: &[i64]) -> Self {
        let mut c = vec![0; prec];
        for (i, x) in cs.iter().enumerate().take(prec) {
            c[i] = x.rem_euclid(p as i64) as u64;
        }
        Self { p, c }
    }

    /// u * omega^e.
    pub fn omega_pow(p: u64, prec: usize, e: usize) -> Self {
        let mut z = Self::zero(p, prec);
        if e < prec {
            z.c[e] = 1;
        }
        z
    }

    pub fn random<G: Rng>(rng: &mut G, p: u64, prec: usize) -> Self {
        Self { p, c: (0..prec).map(|_| rng.gen_range(0..p)).collect() }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> usize {
        self.c.len()
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    /// Index of the first nonzero coefficient; the precision for 0.
    pub fn valuation(&self) -> usize {
        self.c.iter().position(|&x| x != 0).unwrap_or(self.c.len())
    }

    pub fn residue(&self) -> Zpn {
        Zpn::from_u64(self.p, 1, self.c.first().copied().unwrap_or(0))
    }

    /// The constant lift of a residue.
    pub fn lift(x: &Zpn, prec: usize) -> Self {
        let mut z = Self::zero(x.prime(), prec);
        if prec > 0 {
            z.c[0] = x.value();
        }
        z
    }

    /// self / omega^e, exact when the valuation is at least e; the top e coefficients are unknown
    /// and set to zero.
    pub fn div_omega(&self, e: usize) -> Result<Self> {
        if self.valuation() < e {
            return Err(Error::NotInvertible(format!("not divisible by omega^{e}")));
        }
        let mut c = vec![0; self.c.len()];
        let n = self.c.len();
        if e < n {
            c[..n - e].copy_from_slice(&self.c[e..]);
        }
        Ok(Self { p: self.p, c })
    }

    pub fn mul_omega(&self, e: usize) -> Self {
        let mut c = vec![0; self.c.len()];
        let n = self.c.len();
        if e < n {
            c[e..].copy_from_slice(&self.c[..n - e]);
        }
        Self { p: self.p, c }
    }
}

impl Scalar for TruncDvr {
    fn zero_like(&self) -> Self {
        Self::zero(self.p, self.c.len())
    }
    fn one_like(&self) -> Self {
        Self::omega_pow(self.p, self.c.len(), 0)
    }
    fn add(&self, o: &Self) -> Self {
        Self { p: self.p, c: self.c.iter().zip(&o.c).map(|(a, b)| (a + b) % self.p).collect() }
    }
    fn mul(&self, o: &Self) -> Self {
        let n = self.c.len();
        let mut c = vec![0u64; n];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().take(n - i).enumerate() {
                c[i + j] = (c[i + j] + a * b) % self.p;
            }
        }
        Self { p: self.p, c }
    }
    fn neg(&self) -> Self {
        Self { p: self.p, c: self.c.iter().map(|&a| (self.p - a) % self.p).collect() }
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }
    fn try_inv(&self) -> Option<Self> {
        let n = self.c.len();
        let u0 = inv_mod(*self.c.first()?, self.p)?;
        let mut inv = vec![0u64; n];
        inv[0] = u0;
        for k in 1..n {
            let s = (1..=k).fold(0u64, |s, i| (s + self.c[i] * inv[k - i]) % self.p);
            inv[k] = (self.p - s) % self.p * u0 % self.p;
        }
        Some(Self { p: self.p, c: inv })
    }
    fn from_i64_like(&self, n: i64) -> Self {
        Self::from_coeffs(self.p, self.c.len(), &[n])
    }
    fn root_of_unity_like(&self, n: u64, k: i64) -> Option<Self> {
        (k.rem_euclid(n as i64) == 0).then(|| self.one_like())
    }
}

/// Reduction mod omega of a matrix.
pub fn residue_matrix(m: &Matrix<TruncDvr>) -> Matrix<Zpn> {
    m.iter().map(|r| r.iter().map(|x| x.residue()).collect()).collect()
}

/// Inverse over the local ring by Gauss-Jordan with unit pivots.
pub fn inverse_local(a: &Matrix<TruncDvr>) -> Result<Matrix<TruncDvr>> {
    let n = a.len();
    if n == 0 {
        return Ok(vec![]);
    }
    let like = a[0][0].clone();
    let mut m = a.clone();
    let mut inv = identity(n, &like);
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| m[r][col].valuation() == 0)
            .ok_or_else(|| Error::NotInvertible("matrix is singular mod omega".into()))?;
        m.swap(col, piv);
        inv.swap(col, piv);
        let u = m[col][col].try_inv().unwrap();
        for x in m[col].iter_mut().chain(inv[col].iter_mut()) {
            *x = x.mul(&u);
        }
        let (prow, pinv) = (m[col].clone(), inv[col].clone());
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for (x, y) in m[r].iter_mut().zip(&prow) {
                    *x = x.sub(&f.mul(y));
                }
                for (x, y) in inv[r].iter_mut().zip(&pinv) {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
    }
    Ok(inv)
}

/// Random matrix invertible over the local ring.
pub fn random_invertible<G: Rng>(rng: &mut G, n: usize, p: u64, prec: usize) -> Matrix<TruncDvr> {
    loop {
        let m: Matrix<TruncDvr> = (0..n).map(|_| (0..n).map(|_| TruncDvr::random(rng, p, prec)).collect()).collect();
        if inverse_local(&m).is_ok() {
            return m;
        }
    }
}

/// Smith form U d V = D with D[i][i] = omega^{e_i} for i < rank and zero elsewhere.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: Matrix<TruncDvr>,
    pub v: Matrix<TruncDvr>,
    pub exponents: Vec<usize>,
}

/// Smith reduction of an m x n matrix over F_p[omega]/omega^P. Every pivot is certified: it must
/// have valuation at most `max_exponent`, and `max_exponent` must leave room below the precision.
/// An entry with larger valuation is treated as a failure, since it cannot be told apart from 0.
pub fn smith_form(d: &Matrix<TruncDvr>, max_exponent: usize) -> Result<SmithForm> {
    let rows = d.len();
    let cols = d.first().map_or(0, |r| r.len());
    let Some(like) = d.first().and_then(|r| r.first()).cloned() else {
        return Ok(SmithForm { u: vec![], v: vec![], exponents: vec![] });
    };
    let prec = like.precision();
    if max_exponent + 1 >= prec {
        return Err(Error::PrecisionExhausted(format!("pivot bound {max_exponent} needs precision above {}", max_exponent + 1)));
    }
    let mut a = d.clone();
    let mut u = identity(rows, &like);
    let mut v = identity(cols, &like);
    let mut exps = Vec::new();
    for k in 0..rows.min(cols) {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                let e = a[i][j].valuation();
                if e < prec && best.is_none_or(|b| e < b.2) {
                    best = Some((i, j, e));
                }
            }
        }
        let Some((bi, bj, e)) = best else { break };
        if e > max_exponent {
            return Err(Error::PrecisionExhausted(format!("pivot of valuation {e} exceeds the certified bound {max_exponent}")));
        }
        a.swap(k, bi);
        u.swap(k, bi);
        for row in a.iter_mut() {
            row.swap(k, bj);
        }
        for row in v.iter_mut() {
            row.swap(k, bj);
        }
        // normalise the pivot to omega^e by scaling column k
        let unit_inv = a[k][k].div_omega(e)?.try_inv().expect("unit part");
        for row in a.iter_mut() {
            row[k] = row[k].mul(&unit_inv);
        }
        for row in v.iter_mut() {
            row[k] = row[k].mul(&unit_inv);
        }
        for i in 0..rows {
            if i != k && !a[i][k].is_zero() {
                let q = a[i][k].div_omega(e)?;
                let (pa, pu) = (a[k].clone(), u[k].clone());
                for (x, y) in a[i].iter_mut().zip(&pa) {
                    *x = x.sub(&q.mul(y));
                }
                for (x, y) in u[i].iter_mut().zip(&pu) {
                    *x = x.sub(&q.mul(y));
                }
            }
        }
        for j in 0..cols {
            if j != k && !a[k][j].is_zero() {
                let q = a[k][j].div_omega(e)?;
                for row in a.iter_mut() {
                    let t = q.mul(&row[k]);
                    row[j] = row[j].sub(&t);
                }
                for row in v.iter_mut() {
                    let t = q.mul(&row[k]);
                    row[j] = row[j].sub(&t);
                }
            }
        }
        exps.push(e);
    }
    Ok(SmithForm { u, v, exponents: exps })
}
