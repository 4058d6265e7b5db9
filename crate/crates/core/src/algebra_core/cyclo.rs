use super::arith::{euler_phi, factorize, gcd, inv_mod, lcm};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// Coefficients of the N-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_poly(n: u64) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every Phi_d with d | n, d < n.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let den = cyclotomic_poly(d);
            num = poly_div_exact(&num, &den);
        }
    }
    let out = Arc::new(num);
    cache.lock().unwrap().insert(n, out.clone());
    out
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut q = vec![0i64; num.len() - dn];
    for i in (0..q.len()).rev() {
        let c = rem[i + dn];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    q
}

/// Reduce a dense vector of exponent counts (index = exponent mod n) modulo Phi_n.
pub trait ReduceCoeff: Clone + Zero {
    fn sub_scaled(&mut self, c: &Self, k: i64);
}

impl ReduceCoeff for BigRational {
    fn sub_scaled(&mut self, c: &Self, k: i64) {
        *self -= c * BigRational::from_integer(BigInt::from(k));
    }
}

impl ReduceCoeff for BigInt {
    fn sub_scaled(&mut self, c: &Self, k: i64) {
        *self -= c * k;
    }
}

fn reduce_counts<T: ReduceCoeff>(n: u64, mut counts: Vec<T>) -> Vec<T> {
    let phi = cyclotomic_poly(n);
    let deg = phi.len() - 1;
    for top in (deg..counts.len()).rev() {
        let c = std::mem::replace(&mut counts[top], T::zero());
        if c.is_zero() {
            continue;
        }
        for (j, &pj) in phi.iter().enumerate().take(deg) {
            if pj != 0 {
                counts[top - deg + j].sub_scaled(&c, pj);
            }
        }
    }
    counts.truncate(deg);
    counts.resize(deg, T::zero());
    counts
}

/// An element of the cyclotomic field Q(zeta_N), stored on the power basis of the least N
/// for which it lies in Q(zeta_N). Orders are never 2 mod 4; Q has order 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    order: u64,
    coeffs: Vec<BigRational>,
}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match i {
                0 => format!("{}", c),
                1 => format!("({})*z{}", c, self.order),
                _ => format!("({})*z{}^{}", c, self.order, i),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl CyclotomicNumber {
    pub fn zero() -> Self {
        Self { order: 1, coeffs: vec![BigRational::zero()] }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self { order: 1, coeffs: vec![q] }
    }

    /// zeta_n^k with zeta_n = exp(2 pi i / n).
    pub fn root_of_unity(n: u64, k: i64) -> Self {
        assert!(n >= 1);
        let e = k.rem_euclid(n as i64) as usize;
        let mut counts = vec![0i64; n as usize];
        counts[e] = 1;
        Self::from_int_counts(n, counts)
    }

    /// sum_k counts[k] zeta_n^k for integer counts.
    pub fn from_int_counts(n: u64, counts: Vec<i64>) -> Self {
        assert_eq!(counts.len(), n as usize);
        let wide: Vec<i128> = counts.into_iter().map(|c| c as i128).collect();
        let red = reduce_counts_i128(n, wide);
        let coeffs = red
            .into_iter()
            .map(|c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        Self::from_parts(n, coeffs)
    }

    /// sum_k counts[k] zeta_n^k for rational counts.
    pub fn from_counts(n: u64, counts: Vec<BigRational>) -> Self {
        assert_eq!(counts.len(), n as usize);
        let red = reduce_counts(n, counts);
        Self::from_parts(n, red)
    }

    /// Build from reduced power-basis coefficients (length phi(n)) and normalize.
    pub fn from_parts(n: u64, coeffs: Vec<BigRational>) -> Self {
        assert_eq!(coeffs.len() as u64, euler_phi(n));
        let mut x = Self { order: n, coeffs };
        x.normalize();
        x
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.order == 1 && self.coeffs[0].is_one()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        (self.order == 1).then(|| &self.coeffs[0])
    }

    /// Exponent-count vector of length m (m a multiple of the order).
    pub fn counts_at(&self, m: u64) -> Vec<BigRational> {
        assert!(m.is_multiple_of(self.order));
        let step = (m / self.order) as usize;
        let mut v = vec![BigRational::zero(); m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * step] = c.clone();
        }
        v
    }

    /// Representation on the power basis of Q(zeta_m), without normalizing.
    pub fn coeffs_at(&self, m: u64) -> Vec<BigRational> {
        reduce_counts(m, self.counts_at(m))
    }

    fn normalize(&mut self) {
        loop {
            if self.order == 1 {
                return;
            }
            if self.is_zero() {
                self.order = 1;
                self.coeffs = vec![BigRational::zero()];
                return;
            }
            let mut reduced = false;
            for (q, e) in factorize(self.order) {
                if let Some(c) = self.try_descend(q, e) {
                    self.order /= q;
                    self.coeffs = c;
                    reduced = true;
                    break;
                }
            }
            if !reduced {
                return;
            }
        }
    }

    fn try_descend(&self, q: u64, e: u32) -> Option<Vec<BigRational>> {
        let n = self.order;
        let m = n / q;
        if e >= 2 {
            // Phi_n(x) = Phi_m(x^q): the element lies in Q(zeta_m) iff only indices divisible by q occur.
            let qs = q as usize;
            if self.coeffs.iter().enumerate().any(|(i, c)| i % qs != 0 && !c.is_zero()) {
                return None;
            }
            return Some(self.coeffs.iter().step_by(qs).cloned().collect());
        }
        // q exactly divides n: zeta_n = zeta_m^a zeta_q^b with a q + b m = 1 mod n.
        let a = if m == 1 { 0 } else { inv_mod(q % m, m).unwrap() };
        let b = inv_mod(m % q, q).unwrap();
        let mut parts: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); m as usize]; q as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = k as u64;
            let t = ((b * k) % q) as usize;
            let s = if m == 1 { 0 } else { ((a * k) % m) as usize };
            parts[t][s] += c;
        }
        let reduced: Vec<Vec<BigRational>> = parts.into_iter().map(|v| reduce_counts(m, v)).collect();
        let last = &reduced[q as usize - 1];
        for r in reduced.iter().take(q as usize - 1).skip(1) {
            if r != last {
                return None;
            }
        }
        Some(reduced[0].iter().zip(last).map(|(x, y)| x - y).collect())
    }

    fn lift_pair(a: &Self, b: &Self) -> (u64, Vec<BigRational>, Vec<BigRational>) {
        let m = lcm(a.order, b.order);
        (m, a.coeffs_at(m), b.coeffs_at(m))
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.order == o.order {
            let c = self.coeffs.iter().zip(&o.coeffs).map(|(x, y)| x + y).collect();
            return Self::from_parts(self.order, c);
        }
        let (m, x, y) = Self::lift_pair(self, o);
        Self::from_parts(m, x.iter().zip(&y).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self { order: self.order, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if let Some(q) = self.as_rational() {
            return o.scale(q);
        }
        if let Some(q) = o.as_rational() {
            return self.scale(q);
        }
        let m = lcm(self.order, o.order);
        let x = self.coeffs_at(m);
        let y = o.coeffs_at(m);
        // clear denominators and convolve over the integers
        let (xn, xd) = to_integer_vec(&x);
        let (yn, yd) = to_integer_vec(&y);
        let mut prod = vec![BigInt::zero(); m as usize * 2];
        for (i, a) in xn.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in yn.iter().enumerate() {
                if !b.is_zero() {
                    prod[(i + j) % m as usize] += a * b;
                }
            }
        }
        prod.truncate(m as usize);
        let red = reduce_counts(m, prod);
        let den = xd * yd;
        let coeffs = red.into_iter().map(|c| BigRational::new(c, den.clone())).collect();
        Self::from_parts(m, coeffs)
    }

    /// Multiply by zeta_n^k.
    pub fn mul_root(&self, n: u64, k: i64) -> Self {
        let m = lcm(self.order, n);
        let mut counts = vec![BigRational::zero(); m as usize];
        let step = (m / self.order) as usize;
        let shift = (k.rem_euclid(n as i64) as u64 * (m / n)) as usize;
        for (i, c) in self.coeffs.iter().enumerate() {
            counts[(i * step + shift) % m as usize] += c;
        }
        Self::from_counts(m, counts)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut r = Self::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(r)
    }

    /// Multiplicative inverse via the multiplication matrix on the power basis.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(q.recip()));
        }
        let n = self.order;
        let d = self.coeffs.len();
        // column j = self * zeta^j
        let mut mat = vec![vec![BigRational::zero(); d + 1]; d];
        for j in 0..d {
            let mut counts = vec![BigRational::zero(); n as usize];
            for (i, c) in self.coeffs.iter().enumerate() {
                counts[(i + j) % n as usize] += c;
            }
            let col = reduce_counts(n, counts);
            for i in 0..d {
                mat[i][j] = col[i].clone();
            }
        }
        mat[0][d] = BigRational::one();
        let sol = solve_rational(mat).ok_or(Error::DivisionByZero)?;
        Ok(Self::from_parts(n, sol))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// The automorphism zeta -> zeta^a (a coprime to the order).
    pub fn galois(&self, a: i64) -> Self {
        let n = self.order;
        if n == 1 {
            return self.clone();
        }
        let a = a.rem_euclid(n as i64) as u64;
        assert_eq!(gcd(a, n), 1, "Galois exponent must be a unit");
        let mut counts = vec![BigRational::zero(); n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            counts[((i as u64 * a) % n) as usize] += c;
        }
        Self::from_counts(n, counts)
    }

    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let ang = 2.0 * std::f64::consts::PI * i as f64 / n;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), ang)
            })
            .sum()
    }

    /// Trace from Q(zeta_order) to Q.
    pub fn trace(&self) -> BigRational {
        let n = self.order;
        let phi = euler_phi(n);
        let mut t = BigRational::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let g = gcd(i as u64, n);
            let m = n / g;
            let mu = mobius(m);
            if mu != 0 {
                t += c * BigRational::from_integer(BigInt::from(mu * (phi / euler_phi(m)) as i64));
            }
        }
        t
    }

    pub fn to_json(&self) -> CycloJson {
        CycloJson { order: self.order, coeffs: self.coeffs.iter().map(|c| c.to_string()).collect() }
    }
}

fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn reduce_counts_i128(n: u64, mut counts: Vec<i128>) -> Vec<i128> {
    let phi = cyclotomic_poly(n);
    let deg = phi.len() - 1;
    for top in (deg..counts.len()).rev() {
        let c = counts[top];
        if c == 0 {
            continue;
        }
        counts[top] = 0;
        for (j, &pj) in phi.iter().enumerate().take(deg) {
            if pj != 0 {
                counts[top - deg + j] -= c * pj as i128;
            }
        }
    }
    counts.truncate(deg);
    counts
}

fn to_integer_vec(v: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let mut den = BigInt::one();
    for c in v {
        den = num_integer::Integer::lcm(&den, c.denom());
    }
    let nums = v.iter().map(|c| c.numer() * (&den / c.denom())).collect();
    (nums, den)
}

/// Solve an augmented square system over Q by Gauss-Jordan elimination.
pub fn solve_rational(mut m: Vec<Vec<BigRational>>) -> Option<Vec<BigRational>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CycloJson {
    pub order: u64,
    pub coeffs: Vec<String>,
}

impl Serialize for CyclotomicNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CyclotomicNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = CycloJson::deserialize(d)?;
        let coeffs: std::result::Result<Vec<BigRational>, _> =
            j.coeffs.iter().map(|s| s.parse::<BigRational>()).collect();
        let coeffs = coeffs.map_err(serde::de::Error::custom)?;
        if j.order == 0 || coeffs.len() as u64 != euler_phi(j.order) {
            return Err(serde::de::Error::custom("coefficient count must equal phi(order)"));
        }
        Ok(CyclotomicNumber::from_parts(j.order, coeffs))
    }
}

/// Accumulates sum c_i * zeta_L^{k_i} over a fixed common order L and reduces once.
pub struct CycloAccumulator {
    order: u64,
    counts: Vec<BigRational>,
}

impl CycloAccumulator {
    pub fn new(order: u64) -> Self {
        Self { order, counts: vec![BigRational::zero(); order as usize] }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Add c * zeta_L^k where c lies in Q(zeta_L).
    pub fn add_term(&mut self, c: &CyclotomicNumber, k: u64) {
        assert!(self.order.is_multiple_of(c.order), "accumulator order too small");
        let step = self.order / c.order;
        let l = self.order;
        for (i, q) in c.coeffs.iter().enumerate() {
            if !q.is_zero() {
                self.counts[((i as u64 * step + k) % l) as usize] += q;
            }
        }
    }

    pub fn add_rational(&mut self, q: &BigRational, k: u64) {
        self.counts[(k % self.order) as usize] += q;
    }

    pub fn finish(self) -> CyclotomicNumber {
        CyclotomicNumber::from_counts(self.order, self.counts)
    }
}

/// Integer-count accumulator for sums of roots of unity.
pub struct IntAccumulator {
    order: u64,
    counts: Vec<i64>,
}

impl IntAccumulator {
    pub fn new(order: u64) -> Self {
        Self { order, counts: vec![0; order as usize] }
    }

    pub fn add(&mut self, k: u64, c: i64) {
        self.counts[(k % self.order) as usize] += c;
    }

    pub fn finish(self) -> CyclotomicNumber {
        CyclotomicNumber::from_int_counts(self.order, self.counts)
    }
}

impl std::ops::Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber::neg(self)
    }
}

pub fn rational_abs_f64(q: &BigRational) -> f64 {
    q.abs().to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64, k: i64) -> CyclotomicNumber {
        CyclotomicNumber::root_of_unity(n, k)
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_poly(9), vec![1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(105).len() - 1, 48);
    }

    #[test]
    fn basic_relations() {
        assert_eq!(z(4, 1).mul(&z(4, 1)), CyclotomicNumber::from_int(-1));
        assert_eq!(z(3, 1).add(&z(3, 2)), CyclotomicNumber::from_int(-1));
        let x = CyclotomicNumber::one().add(&z(5, 1));
        assert!(x.div(&x).unwrap().is_one());
        assert!(CyclotomicNumber::one().div(&CyclotomicNumber::zero()).is_err());
    }

    #[test]
    fn least_order() {
        // zeta_6 = -zeta_3^2 lives in Q(zeta_3)
        let a = z(6, 1);
        assert_eq!(a.order(), 3);
        assert_eq!(a, z(3, 2).neg());
        // zeta_12^3 = i
        assert_eq!(z(12, 3), z(4, 1));
        // sqrt(-3) = zeta_3 - zeta_3^2 has order 3; sqrt(5) is in Q(zeta_5)
        let s5 = z(5, 1).sub(&z(5, 2)).sub(&z(5, 3)).add(&z(5, 4));
        assert_eq!(s5.mul(&s5), CyclotomicNumber::from_int(5));
        assert_eq!(s5.order(), 5);
        // zeta_15 * zeta_15^{-1}
        assert!(z(15, 4).mul(&z(15, 11)).is_one());
        // i * i^-1 computed in Q(zeta_36)
        assert!(z(36, 9).mul(&z(36, 27)).is_one());
    }

    #[test]
    fn embed_round_trip() {
        let x = z(7, 3).add(&CyclotomicNumber::from_rational(rat(2, 3)));
        for k in 1..=6u64 {
            let m = 7 * k;
            let c = x.coeffs_at(m);
            assert_eq!(CyclotomicNumber::from_parts(m, c), x);
        }
    }

    #[test]
    fn inverse_and_galois() {
        let x = CyclotomicNumber::from_int(2).add(&z(9, 2)).add(&z(9, 5).scale(&rat(1, 3)));
        let y = x.inv().unwrap();
        assert!(x.mul(&y).is_one());
        let g = x.galois(2);
        assert!(g.mul(&y.galois(2)).is_one());
        let c = z(8, 1).to_complex();
        assert!((c.re - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn trace_values() {
        assert_eq!(z(5, 1).trace(), rat(-1, 1));
        assert_eq!(z(9, 1).trace(), rat(0, 1));
        assert_eq!(CyclotomicNumber::from_int(3).trace(), rat(3, 1));
    }

    #[test]
    fn serde_round_trip() {
        let x = z(12, 1).add(&CyclotomicNumber::from_rational(rat(-5, 7)));
        let s = serde_json::to_string(&x).unwrap();
        let y: CyclotomicNumber = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
    }
}
