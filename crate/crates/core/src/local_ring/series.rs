use super::unramified::{URElement, UnramifiedRing};
use crate::algebra_core::arith::ipow;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Element of O[[T]] modulo (T^M, p^N); coefficient k is the raw vector of a URElement.
#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    ring: Arc<UnramifiedRing>,
    coeffs: Vec<Vec<u64>>,
}

impl PartialEq for TruncatedSeries {
    fn eq(&self, o: &Self) -> bool {
        *self.ring == *o.ring && self.coeffs == o.coeffs
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct SeriesJson {
    pub p: u64,
    pub r: usize,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "M")]
    pub m: usize,
    pub coeffs: Vec<Vec<u64>>,
}

/// Binomial coefficient C(c, k) for any integer c, reduced mod m.
pub fn binomial_mod(c: i64, k: usize, m: u64) -> u64 {
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for i in 0..k as i64 {
        num *= c - i;
        den *= i + 1;
    }
    let q = num.div_floor(&den);
    let mm = BigInt::from(m);
    let r = ((q % &mm) + &mm) % &mm;
    r.try_into().unwrap()
}

impl TruncatedSeries {
    pub fn zero(ring: &Arc<UnramifiedRing>, m: usize) -> Self {
        Self { ring: ring.clone(), coeffs: vec![vec![0; ring.degree()]; m] }
    }

    pub fn constant(c: &URElement, m: usize) -> Self {
        let mut s = Self::zero(c.ring(), m);
        if m > 0 {
            s.coeffs[0] = c.coeffs().to_vec();
        }
        s
    }

    pub fn one(ring: &Arc<UnramifiedRing>, m: usize) -> Self {
        Self::constant(&ring.one(), m)
    }

    /// The series T.
    pub fn t(ring: &Arc<UnramifiedRing>, m: usize) -> Self {
        let mut s = Self::zero(ring, m);
        if m > 1 {
            s.coeffs[1][0] = 1 % ring.modulus_pn();
        }
        s
    }

    pub fn from_raw(ring: &Arc<UnramifiedRing>, coeffs: Vec<Vec<u64>>) -> Self {
        let pn = ring.modulus_pn();
        let coeffs = coeffs
            .into_iter()
            .map(|c| {
                assert_eq!(c.len(), ring.degree());
                c.into_iter().map(|x| x % pn).collect()
            })
            .collect();
        Self { ring: ring.clone(), coeffs }
    }

    pub fn from_elements(coeffs: &[URElement]) -> Self {
        let ring = coeffs[0].ring().clone();
        Self { ring, coeffs: coeffs.iter().map(|c| c.coeffs().to_vec()).collect() }
    }

    /// Integer-coefficient series.
    pub fn from_ints(ring: &Arc<UnramifiedRing>, coeffs: &[i64]) -> Self {
        let pn = ring.modulus_pn() as i64;
        let raw = coeffs
            .iter()
            .map(|&c| {
                let mut v = vec![0u64; ring.degree()];
                v[0] = c.rem_euclid(pn) as u64;
                v
            })
            .collect();
        Self { ring: ring.clone(), coeffs: raw }
    }

    /// (1+T)^c for an integer c (generalized binomial coefficients).
    pub fn one_plus_t_pow(ring: &Arc<UnramifiedRing>, c: i64, m: usize) -> Self {
        let pn = ring.modulus_pn();
        let coeffs = (0..m)
            .map(|k| {
                let mut v = vec![0u64; ring.degree()];
                v[0] = binomial_mod(c, k, pn);
                v
            })
            .collect();
        Self { ring: ring.clone(), coeffs }
    }

    pub fn ring(&self) -> &Arc<UnramifiedRing> {
        &self.ring
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn raw(&self) -> &[Vec<u64>] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> URElement {
        self.ring.elem(self.coeffs[k].clone())
    }

    pub fn eval_zero(&self) -> URElement {
        if self.coeffs.is_empty() {
            return self.ring.zero();
        }
        self.coeff(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.iter().all(|&x| x == 0))
    }

    pub fn truncate(&self, m: usize) -> Self {
        let mut s = self.clone();
        s.coeffs.truncate(m);
        s
    }

    fn common(&self, o: &Self) -> usize {
        assert!(*self.ring == *o.ring, "series over different rings");
        self.precision().min(o.precision())
    }

    pub fn add(&self, o: &Self) -> Self {
        let m = self.common(o);
        let coeffs = (0..m).map(|k| self.ring.add_raw(&self.coeffs[k], &o.coeffs[k])).collect();
        Self { ring: self.ring.clone(), coeffs }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let m = self.common(o);
        let coeffs = (0..m).map(|k| self.ring.sub_raw(&self.coeffs[k], &o.coeffs[k])).collect();
        Self { ring: self.ring.clone(), coeffs }
    }

    pub fn neg(&self) -> Self {
        Self::zero(&self.ring, self.precision()).sub(self)
    }

    pub fn scale(&self, c: &URElement) -> Self {
        let coeffs = self.coeffs.iter().map(|a| self.ring.mul_raw(a, c.coeffs())).collect();
        Self { ring: self.ring.clone(), coeffs }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        let pn = self.ring.modulus_pn();
        let c = c.rem_euclid(pn as i64) as u64;
        let coeffs = self.coeffs.iter().map(|a| self.ring.scale_raw(a, c)).collect();
        Self { ring: self.ring.clone(), coeffs }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let m = self.common(o);
        let r = self.ring.degree();
        let mut out = vec![vec![0u64; r]; m];
        for i in 0..m {
            if self.coeffs[i].iter().all(|&x| x == 0) {
                continue;
            }
            for j in 0..m - i {
                if o.coeffs[j].iter().all(|&x| x == 0) {
                    continue;
                }
                let prod = self.ring.mul_raw(&self.coeffs[i], &o.coeffs[j]);
                out[i + j] = self.ring.add_raw(&out[i + j], &prod);
            }
        }
        Self { ring: self.ring.clone(), coeffs: out }
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::one(&self.ring, self.precision());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse when the constant term is a unit.
    pub fn inverse(&self) -> Result<Self> {
        let m = self.precision();
        let a0inv = self
            .ring
            .inv_raw(&self.coeffs[0])
            .ok_or_else(|| Error::NotInvertible("constant term is not a unit".into()))?;
        let r = self.ring.degree();
        let mut b: Vec<Vec<u64>> = vec![vec![0; r]; m];
        b[0] = a0inv.clone();
        for k in 1..m {
            let mut s = vec![0u64; r];
            for i in 1..=k {
                s = self.ring.add_raw(&s, &self.ring.mul_raw(&self.coeffs[i], &b[k - i]));
            }
            let neg = self.ring.sub_raw(&vec![0; r], &s);
            b[k] = self.ring.mul_raw(&neg, &a0inv);
        }
        Ok(Self { ring: self.ring.clone(), coeffs: b })
    }

    /// f(g(T)). Requires g(0) = 0 mod p; a nonzero g(0) additionally needs M >= N so that the
    /// dropped terms a_k g^k (k >= M) vanish mod p^N.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        let m = self.common(g);
        let p = self.ring.p();
        let g0 = &g.coeffs[0];
        if g0.iter().any(|x| x % p != 0) {
            return Err(Error::InvalidInput("composition needs g(0) = 0 mod p".into()));
        }
        if g0.iter().any(|&x| x != 0) && m < self.ring.precision() as usize {
            return Err(Error::PrecisionExhausted("g(0) != 0 needs T-precision >= N".into()));
        }
        let g = g.truncate(m);
        let mut acc = Self::zero(&self.ring, m);
        for k in (0..m).rev() {
            acc = acc.mul(&g);
            acc.coeffs[0] = self.ring.add_raw(&acc.coeffs[0], &self.coeffs[k]);
        }
        Ok(acc)
    }

    /// Apply sigma^k to every coefficient.
    pub fn frobenius_coeffs(&self, k: i64) -> Self {
        let coeffs = self.coeffs.iter().map(|a| self.ring.frob_pow_raw(a, k)).collect();
        Self { ring: self.ring.clone(), coeffs }
    }

    /// phi(f)(T) = f^sigma((1+T)^p - 1).
    pub fn phi_op(&self) -> Self {
        let g = Self::one_plus_t_pow(&self.ring, self.ring.p() as i64, self.precision())
            .sub(&Self::one(&self.ring, self.precision()));
        self.frobenius_coeffs(1).compose(&g).expect("(1+T)^p - 1 has zero constant term")
    }

    /// D = (1+T) d/dT. The top coefficient depends on the unknown a_M, so precision drops by one.
    pub fn d_op(&self) -> Self {
        let m = self.precision();
        if m == 0 {
            return self.clone();
        }
        let pn = self.ring.modulus_pn();
        let coeffs = (0..m - 1)
            .map(|k| {
                let a = self.ring.scale_raw(&self.coeffs[k], k as u64 % pn);
                let b = self.ring.scale_raw(&self.coeffs[k + 1], (k as u64 + 1) % pn);
                self.ring.add_raw(&a, &b)
            })
            .collect();
        Self { ring: self.ring.clone(), coeffs }
    }

    /// (sigma f)(T) = f^{frob^k}((1+T)^c - 1) for the element with chi_cyc = c and
    /// residue-field part frob^k.
    pub fn galois_act(&self, c: i64, k: i64) -> Self {
        let m = self.precision();
        let g = Self::one_plus_t_pow(&self.ring, c, m).sub(&Self::one(&self.ring, m));
        self.frobenius_coeffs(k).compose(&g).expect("zero constant term")
    }

    /// Whether sum_{zeta in mu_p} f(zeta(1+T) - 1) vanishes. The sum is formed in
    /// O[x]/(x^p - 1), where zero in O[zeta] means all coordinates agree. Dropped terms
    /// a_k T^k with k >= M contribute to the coefficient of T^i with valuation at least
    /// (M - i)/(p - 1), so coefficient i < M - 1 is tested mod p^min(N, floor((M-i)/(p-1))).
    pub fn r_membership(&self) -> bool {
        let p = self.ring.p() as usize;
        let m = self.precision();
        if m < 2 {
            return true;
        }
        let r = self.ring.degree();
        // total[i][t] is the coefficient of T^i x^t of the sum
        let mut total = vec![vec![vec![0u64; r]; p]; m];
        for t in 0..p {
            // Horner: acc <- acc * ((x^t - 1) + x^t T) + a_k
            let mut acc = vec![vec![vec![0u64; r]; p]; m];
            for k in (0..m).rev() {
                let mut next = vec![vec![vec![0u64; r]; p]; m];
                for i in 0..m {
                    for s in 0..p {
                        let c = &acc[i][s];
                        if c.iter().all(|&x| x == 0) {
                            continue;
                        }
                        let rot = (s + t) % p;
                        // (x^t - 1) * c x^s at T^i
                        next[i][rot] = self.ring.add_raw(&next[i][rot], c);
                        next[i][s] = self.ring.sub_raw(&next[i][s], c);
                        if i + 1 < m {
                            next[i + 1][rot] = self.ring.add_raw(&next[i + 1][rot], c);
                        }
                    }
                }
                next[0][0] = self.ring.add_raw(&next[0][0], &self.coeffs[k]);
                acc = next;
            }
            for i in 0..m {
                for s in 0..p {
                    total[i][s] = self.ring.add_raw(&total[i][s], &acc[i][s]);
                }
            }
        }
        let n = self.ring.precision();
        (0..m - 1).all(|i| {
            let e = n.min(((m - i) / (p - 1)) as u32);
            let q = ipow(p as u64, e);
            let last = total[i][p - 1].clone();
            (0..p - 1).all(|s| self.ring.sub_raw(&total[i][s], &last).iter().all(|&x| x % q == 0))
        })
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            p: self.ring.p(),
            r: self.ring.degree(),
            n: self.ring.precision(),
            m: self.precision(),
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn from_json(js: &SeriesJson) -> Result<Self> {
        let ring = UnramifiedRing::new(js.p, js.r, js.n)?;
        if js.coeffs.len() != js.m || js.coeffs.iter().any(|c| c.len() != js.r) {
            return Err(Error::DimensionMismatch("series coefficient shape".into()));
        }
        Ok(Self::from_raw(&ring, js.coeffs.clone()))
    }

    /// Evaluate sum a_k y^k for an element y of the ring (valuation bookkeeping is the caller's).
    pub fn eval_at(&self, y: &URElement) -> URElement {
        let mut acc = vec![0u64; self.ring.degree()];
        for c in self.coeffs.iter().rev() {
            acc = self.ring.add_raw(&self.ring.mul_raw(&acc, y.coeffs()), c);
        }
        self.ring.elem(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra_core::scalar::Scalar;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_series(ring: &Arc<UnramifiedRing>, m: usize, rng: &mut ChaCha8Rng) -> TruncatedSeries {
        let raw = (0..m)
            .map(|_| (0..ring.degree()).map(|_| rng.gen_range(0..ring.modulus_pn())).collect())
            .collect();
        TruncatedSeries::from_raw(ring, raw)
    }

    #[test]
    fn compose_examples() {
        let ring = UnramifiedRing::new(5, 1, 6).unwrap();
        let m = 8;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = rand_series(&ring, m, &mut rng);
        let t = TruncatedSeries::t(&ring, m);
        assert_eq!(f.compose(&t).unwrap(), f);
        let one = TruncatedSeries::one(&ring, m);
        let gp = TruncatedSeries::one_plus_t_pow(&ring, 5, m).sub(&one);
        assert_eq!(t.compose(&gp).unwrap(), gp);
        let g2 = TruncatedSeries::one_plus_t_pow(&ring, 2, m).sub(&one);
        let g3 = TruncatedSeries::one_plus_t_pow(&ring, 3, m).sub(&one);
        let g6 = TruncatedSeries::one_plus_t_pow(&ring, 6, m).sub(&one);
        assert_eq!(g2.compose(&g3).unwrap(), g6);
        assert!(f.compose(&one).is_err());
    }

    #[test]
    fn negative_binomial_is_inverse() {
        let ring = UnramifiedRing::new(3, 2, 5).unwrap();
        let a = TruncatedSeries::one_plus_t_pow(&ring, 4, 10);
        let b = TruncatedSeries::one_plus_t_pow(&ring, -4, 10);
        assert_eq!(a.mul(&b), TruncatedSeries::one(&ring, 10));
        assert_eq!(a.inverse().unwrap(), b);
    }

    #[test]
    fn d_and_phi() {
        let ring = UnramifiedRing::new(3, 2, 5).unwrap();
        let m = 10;
        let x = ring.elem(vec![2, 7]);
        let base = TruncatedSeries::one_plus_t_pow(&ring, 1, m).scale(&x);
        let mut f = base.clone();
        for k in 1..=5 {
            f = f.d_op();
            assert_eq!(f, base.truncate(m - k));
        }
        let c = TruncatedSeries::one_plus_t_pow(&ring, 7, m);
        assert_eq!(c.d_op(), c.scale_int(7).truncate(m - 1));
        let t = TruncatedSeries::t(&ring, m);
        assert!(t.phi_op().eval_zero().is_zero());
        let onet = TruncatedSeries::one_plus_t_pow(&ring, 1, m);
        assert_eq!(onet.phi_op(), TruncatedSeries::one_plus_t_pow(&ring, 3, m));
    }

    #[test]
    fn phi_is_ring_hom_and_commutes_with_galois() {
        let ring = UnramifiedRing::new(3, 2, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let f = rand_series(&ring, 12, &mut rng);
            let g = rand_series(&ring, 12, &mut rng);
            assert_eq!(f.mul(&g).phi_op(), f.phi_op().mul(&g.phi_op()));
            for (c, k) in [(2i64, 1i64), (4, 0), (-1, 1), (5, 2)] {
                assert_eq!(f.galois_act(c, k).phi_op(), f.phi_op().galois_act(c, k));
            }
        }
    }

    #[test]
    fn membership_examples() {
        let ring = UnramifiedRing::new(3, 1, 4).unwrap();
        let m = 12;
        assert!(TruncatedSeries::one_plus_t_pow(&ring, 1, m).r_membership());
        assert!(!TruncatedSeries::one(&ring, m).r_membership());
        assert!(!TruncatedSeries::t(&ring, m).r_membership());
    }

    /// Oracle: for f = g(1+T) with g a polynomial in X = 1+T, the mu_p average equals
    /// p times the part of g supported on exponents divisible by p.
    fn binomial_oracle_member(ring: &Arc<UnramifiedRing>, gx: &[Vec<u64>], m: usize) -> bool {
        let p = ring.p() as usize;
        gx.iter().enumerate().all(|(e, c)| e % p != 0 || c.iter().all(|&x| (x * p as u64).is_multiple_of(ring.modulus_pn())))
            && gx.len() <= m
    }

    fn series_of_x_poly(ring: &Arc<UnramifiedRing>, gx: &[Vec<u64>], m: usize) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(ring, m);
        for (e, c) in gx.iter().enumerate() {
            let term = TruncatedSeries::one_plus_t_pow(ring, e as i64, m).scale(&ring.elem(c.clone()));
            s = s.add(&term);
        }
        s
    }

    #[test]
    fn membership_matches_binomial_oracle() {
        let ring = UnramifiedRing::new(3, 2, 3).unwrap();
        let m = 10;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for trial in 0..60 {
            let deg = 8;
            let gx: Vec<Vec<u64>> = (0..deg)
                .map(|e| {
                    if e % 3 == 0 && trial % 2 == 0 {
                        vec![0, 0]
                    } else {
                        (0..2).map(|_| rng.gen_range(0..27)).collect()
                    }
                })
                .collect();
            let f = series_of_x_poly(&ring, &gx, m);
            assert_eq!(f.r_membership(), binomial_oracle_member(&ring, &gx, m), "trial {trial}");
        }
    }

    #[test]
    fn membership_stable_under_d_and_galois() {
        let ring = UnramifiedRing::new(5, 1, 3).unwrap();
        let m = 24;
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            // members: combinations of (1+T)^e with 5 not dividing e
            let gx: Vec<Vec<u64>> =
                (0..12).map(|e| if e % 5 == 0 { vec![0] } else { vec![rng.gen_range(0..125)] }).collect();
            let f = series_of_x_poly(&ring, &gx, m);
            assert!(f.r_membership());
            assert!(f.d_op().r_membership());
            assert!(f.galois_act(2, 0).r_membership());
            assert!(f.galois_act(-1, 0).r_membership());
        }
    }

    #[test]
    fn json_round_trip() {
        let ring = UnramifiedRing::new(3, 2, 3).unwrap();
        let f = TruncatedSeries::one_plus_t_pow(&ring, 2, 4).scale(&ring.gen());
        let js = serde_json::to_string(&f.to_json()).unwrap();
        let back: SeriesJson = serde_json::from_str(&js).unwrap();
        assert_eq!(TruncatedSeries::from_json(&back).unwrap(), f);
        assert!(js.contains("\"N\":3"));
        let _ = f.eval_zero().add(&ring.one());
    }
}
