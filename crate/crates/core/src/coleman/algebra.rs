use crate::algebra_core::arith::{gcd, inv_mod, ipow};
use crate::error::{Error, Result};
use crate::local_ring::UnramifiedRing;
use std::sync::Arc;

/// O[x]/(x^{p^n} - 1) over an unramified ring O mod p^W. Substituting x = zeta_{p^n} (reduction
/// mod Phi_{p^n}) gives O[zeta_{p^n}]; the Galois group (Z/p^n)^x acts by x -> x^a and
/// Frobenius acts on coefficients.
#[derive(Clone, Debug)]
pub struct CycloAlgebra {
    ring: Arc<UnramifiedRing>,
    n: u32,
    pn: u64,
}

/// Element of a `CycloAlgebra`: coefficient of x^i is a raw O-element.
pub type AElem = Vec<Vec<u64>>;

impl CycloAlgebra {
    pub fn new(ring: Arc<UnramifiedRing>, n: u32) -> Self {
        let pn = ipow(ring.p(), n);
        Self { ring, n, pn }
    }

    pub fn ring(&self) -> &Arc<UnramifiedRing> {
        &self.ring
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    /// Order of x, p^n.
    pub fn order(&self) -> u64 {
        self.pn
    }

    pub fn zero(&self) -> AElem {
        vec![vec![0; self.ring.degree()]; self.pn as usize]
    }

    pub fn constant(&self, c: &[u64]) -> AElem {
        let mut z = self.zero();
        z[0] = c.to_vec();
        z
    }

    pub fn monomial(&self, c: &[u64], k: i64) -> AElem {
        let mut z = self.zero();
        z[k.rem_euclid(self.pn as i64) as usize] = c.to_vec();
        z
    }

    pub fn add(&self, a: &AElem, b: &AElem) -> AElem {
        a.iter().zip(b).map(|(x, y)| self.ring.add_raw(x, y)).collect()
    }

    pub fn sub(&self, a: &AElem, b: &AElem) -> AElem {
        a.iter().zip(b).map(|(x, y)| self.ring.sub_raw(x, y)).collect()
    }

    pub fn scale_int(&self, a: &AElem, c: i64) -> AElem {
        let m = self.ring.modulus_pn();
        let c = c.rem_euclid(m as i64) as u64;
        a.iter().map(|x| self.ring.scale_raw(x, c)).collect()
    }

    pub fn scale(&self, a: &AElem, c: &[u64]) -> AElem {
        a.iter().map(|x| self.ring.mul_raw(x, c)).collect()
    }

    pub fn mul_p_pow(&self, a: &AElem, k: u32) -> AElem {
        self.scale_int(a, ipow(self.p(), k.min(self.ring.precision())) as i64)
    }

    pub fn mul(&self, a: &AElem, b: &AElem) -> AElem {
        let n = self.pn as usize;
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if x.iter().all(|&c| c == 0) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.iter().all(|&c| c == 0) {
                    continue;
                }
                let k = (i + j) % n;
                out[k] = self.ring.add_raw(&out[k], &self.ring.mul_raw(x, y));
            }
        }
        out
    }

    /// sigma_a: x -> x^a for a prime to p.
    pub fn galois(&self, a: &AElem, u: u64) -> AElem {
        debug_assert_eq!(gcd(u, self.p()), 1);
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            let k = (i as u64 * u % self.pn) as usize;
            out[k] = self.ring.add_raw(&out[k], x);
        }
        out
    }

    /// Frobenius power on coefficients.
    pub fn frob_pow(&self, a: &AElem, k: i64) -> AElem {
        a.iter().map(|x| self.ring.frob_pow_raw(x, k)).collect()
    }

    /// The subgroup H_m of (Z/p^n)^x: units = 1 mod p^m for m >= 1, everything for m = 0.
    pub fn subgroup(&self, m: u32) -> Vec<u64> {
        let p = self.p();
        if m == 0 {
            return (1..=self.pn).filter(|a| a % p != 0).map(|a| a % self.pn).collect();
        }
        let pm = ipow(p, m.min(self.n));
        (0..self.pn / pm).map(|t| (1 + t * pm) % self.pn).collect()
    }

    /// sum_{a in H_m} sigma_a(x).
    pub fn trace_subgroup(&self, a: &AElem, m: u32) -> AElem {
        self.subgroup(m).into_iter().fold(self.zero(), |s, u| self.add(&s, &self.galois(a, u)))
    }

    /// #H_{m-1} E_m(x), where E_m = e_{H_m} - e_{H_{m-1}} (E_0 = e_{H_0}) is the sum of the
    /// idempotents e_chi over characters of conductor exponent exactly m. Scaling by #H_{m-1}
    /// keeps the result integral.
    pub fn scaled_class_projection(&self, a: &AElem, m: u32) -> (AElem, u64) {
        if m == 0 {
            return (self.trace_subgroup(a, 0), self.subgroup(0).len() as u64);
        }
        let big = self.subgroup(m - 1).len() as u64;
        let small = self.subgroup(m).len() as u64;
        let t = self.scale_int(&self.trace_subgroup(a, m), (big / small) as i64);
        (self.sub(&t, &self.trace_subgroup(a, m - 1)), big)
    }

    /// Reduce modulo Phi_{p^n}(x): coordinates on the basis 1, x, ..., x^{phi(p^n)-1} of
    /// O[zeta_{p^n}].
    pub fn reduce(&self, a: &AElem) -> AElem {
        if self.n == 0 {
            return a.clone();
        }
        let p = self.p() as usize;
        let q = (self.pn / self.p()) as usize;
        let phi = (p - 1) * q;
        let mut out: AElem = a[..phi].to_vec();
        // x^{(p-1)q + t} = -sum_{i < p-1} x^{iq + t}
        for t in 0..q {
            let c = &a[phi + t];
            for i in 0..p - 1 {
                let k = i * q + t;
                out[k] = self.ring.sub_raw(&out[k], c);
            }
        }
        out
    }

    /// Whether the image in O[zeta_{p^n}] is divisible by p^e.
    pub fn divisible_by_p_pow(&self, a: &AElem, e: u32) -> Result<bool> {
        if e > self.ring.precision() {
            return Err(Error::PrecisionExhausted(format!(
                "divisibility by p^{e} at working precision {}",
                self.ring.precision()
            )));
        }
        let d = ipow(self.p(), e);
        Ok(self.reduce(a).iter().all(|c| c.iter().all(|x| x % d == 0)))
    }

    /// Evaluate the polynomial sum_k c_k T^k at T = zeta_{p^m} - 1 (m <= n) by Horner's rule.
    pub fn eval_poly(&self, coeffs: &[Vec<u64>], m: u32) -> AElem {
        let step = (self.pn / ipow(self.p(), m.min(self.n))) as i64;
        let r = self.ring.degree();
        let mut y = self.monomial(&one(r), step);
        y[0] = self.ring.sub_raw(&y[0], &one(r));
        let mut acc = self.zero();
        for c in coeffs.iter().rev() {
            acc = self.mul(&acc, &y);
            acc[0] = self.ring.add_raw(&acc[0], c);
        }
        acc
    }

    /// Evaluate sum_k a_k (1+T)^k at T = zeta_{p^m} - 1, i.e. sum_k a_k zeta_{p^m}^k.
    pub fn eval_binomial(&self, a: &[Vec<u64>], m: u32) -> AElem {
        let step = self.pn / ipow(self.p(), m.min(self.n));
        let mut out = self.zero();
        for (k, c) in a.iter().enumerate() {
            let e = (k as u64 * step % self.pn) as usize;
            out[e] = self.ring.add_raw(&out[e], c);
        }
        out
    }

    /// Inverse of a unit u mod p^W as an integer.
    pub fn unit_inverse(&self, u: u64) -> Result<u64> {
        let m = self.ring.modulus_pn();
        inv_mod(u % m, m).ok_or_else(|| Error::NotInvertible(format!("{u} mod p^W")))
    }
}

pub(crate) fn one(r: usize) -> Vec<u64> {
    let mut v = vec![0; r];
    v[0] = 1;
    v
}
