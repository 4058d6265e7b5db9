use crate::algebra_core::arith::{inv_mod, ipow, mul_mod};
use crate::algebra_core::UnitsModN;
use crate::error::{Error, Result};
use crate::local_ring::UnramifiedRing;
use rand::Rng;
use std::sync::Arc;

/// Finite-level model of the pairing on R_{K_p} for K_p unramified of degree r over Q_p and
/// Gal(K_n/K) = Gamma_n = (Z/p^n)^x. An element a (1+T) of R is stored as a in O[Gamma_n];
/// values lie in Lambda_n = Z/p^N[Gal(K/Q) x Gamma_n], with Gal(K/Q) generated by Frobenius.
#[derive(Clone, Debug)]
pub struct PairingLevel {
    ring: Arc<UnramifiedRing>,
    units: UnitsModN,
    n: u32,
}

/// a in O[Gamma_n] standing for a (1+T); entry i is the coefficient of the i-th unit.
#[derive(Clone, Debug, PartialEq)]
pub struct RBasisElement(pub Vec<Vec<u64>>);

/// Element of Z/p^N[Z/r x Gamma_n]; entry k * #Gamma + i is the coefficient of (frob^k, gamma_i).
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaElement(pub Vec<u64>);

impl PairingLevel {
    pub fn new(ring: Arc<UnramifiedRing>, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("pairing needs level n >= 1 for sigma_{-1}".into()));
        }
        let units = UnitsModN::new(ipow(ring.p(), n));
        Ok(Self { ring, units, n })
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    fn gamma(&self) -> usize {
        self.units.units().len()
    }

    fn idx(&self, a: u64) -> usize {
        self.units.index_of(a as i64).expect("unit")
    }

    fn res(&self, i: usize) -> u64 {
        self.units.residue_of_index(i)
    }

    fn modulus(&self) -> u64 {
        self.units.modulus()
    }

    pub fn zero(&self) -> RBasisElement {
        RBasisElement(vec![vec![0; self.ring.degree()]; self.gamma()])
    }

    /// x (1+T) for x in O.
    pub fn basis_multiple(&self, x: &[u64]) -> RBasisElement {
        let mut z = self.zero();
        z.0[self.idx(1)] = x.to_vec();
        z
    }

    pub fn random_r<G: Rng>(&self, rng: &mut G) -> RBasisElement {
        let pn = self.ring.modulus_pn();
        RBasisElement((0..self.gamma()).map(|_| (0..self.ring.degree()).map(|_| rng.gen_range(0..pn)).collect()).collect())
    }

    pub fn random_lambda<G: Rng>(&self, rng: &mut G) -> LambdaElement {
        let pn = self.ring.modulus_pn();
        LambdaElement((0..self.ring.degree() * self.gamma()).map(|_| rng.gen_range(0..pn)).collect())
    }

    /// <a(1+T), b(1+T)> = ab in O[Gamma_n].
    pub fn base_pairing(&self, f: &RBasisElement, g: &RBasisElement) -> RBasisElement {
        let mut out = self.zero();
        for (i, x) in f.0.iter().enumerate() {
            for (k, y) in g.0.iter().enumerate() {
                let t = self.idx(mul_mod(self.res(i), self.res(k), self.modulus()));
                out.0[t] = self.ring.add_raw(&out.0[t], &self.ring.mul_raw(x, y));
            }
        }
        out
    }

    /// iota(a(1+T)) = sigma_{-1} a^# (1+T).
    pub fn iota(&self, f: &RBasisElement) -> RBasisElement {
        let mut out = self.zero();
        let m = self.modulus();
        for (i, x) in f.0.iter().enumerate() {
            let inv = inv_mod(self.res(i), m).unwrap();
            out.0[self.idx(m - inv)] = x.clone();
        }
        out
    }

    /// Frobenius^k acting on the O-coefficients.
    pub fn frob(&self, f: &RBasisElement, k: i64) -> RBasisElement {
        RBasisElement(f.0.iter().map(|x| self.ring.frob_pow_raw(x, k)).collect())
    }

    /// <f, g>_R = sum_tau Tr_{K/Q}(<tau^{-1} f, iota(g)>) tau.
    pub fn pairing(&self, f: &RBasisElement, g: &RBasisElement) -> LambdaElement {
        let (r, n) = (self.ring.degree(), self.gamma());
        let ig = self.iota(g);
        let mut out = vec![0u64; r * n];
        for k in 0..r {
            let prod = self.base_pairing(&self.frob(f, -(k as i64)), &ig);
            for (i, c) in prod.0.iter().enumerate() {
                out[k * n + i] = self.ring.elem(c.clone()).trace().value();
            }
        }
        LambdaElement(out)
    }

    /// t acting on R: frobenius part on coefficients, Gamma part by multiplication.
    pub fn act(&self, t: &LambdaElement, f: &RBasisElement) -> RBasisElement {
        let (r, n) = (self.ring.degree(), self.gamma());
        let mut out = self.zero();
        for k in 0..r {
            let fk = self.frob(f, k as i64);
            for i in 0..n {
                let c = t.0[k * n + i];
                if c == 0 {
                    continue;
                }
                for (l, x) in fk.0.iter().enumerate() {
                    let dst = self.idx(mul_mod(self.res(i), self.res(l), self.modulus()));
                    out.0[dst] = self.ring.add_raw(&out.0[dst], &self.ring.scale_raw(x, c));
                }
            }
        }
        out
    }

    pub fn lambda_mul(&self, s: &LambdaElement, t: &LambdaElement) -> LambdaElement {
        let (r, n) = (self.ring.degree(), self.gamma());
        let pn = self.ring.modulus_pn();
        let mut out = vec![0u64; r * n];
        for a in 0..r * n {
            if s.0[a] == 0 {
                continue;
            }
            for b in 0..r * n {
                let k = (a / n + b / n) % r;
                let i = self.idx(mul_mod(self.res(a % n), self.res(b % n), self.modulus()));
                out[k * n + i] = (out[k * n + i] + mul_mod(s.0[a], t.0[b], pn)) % pn;
            }
        }
        LambdaElement(out)
    }

    /// t^#: inversion on group elements.
    pub fn involution(&self, t: &LambdaElement) -> LambdaElement {
        let (r, n) = (self.ring.degree(), self.gamma());
        let mut out = vec![0u64; r * n];
        for a in 0..r * n {
            let k = (r - a / n) % r;
            let i = self.idx(inv_mod(self.res(a % n), self.modulus()).unwrap());
            out[k * n + i] = t.0[a];
        }
        LambdaElement(out)
    }
}

/// t<f,g> = <tf, g> = <f, t^# g> and iota^2 = id for one random triple.
pub fn sesquilinearity_check<G: Rng>(level: &PairingLevel, rng: &mut G) -> (bool, bool) {
    let t = level.random_lambda(rng);
    let f = level.random_r(rng);
    let g = level.random_r(rng);
    let base = level.lambda_mul(&t, &level.pairing(&f, &g));
    let left = level.pairing(&level.act(&t, &f), &g);
    let right = level.pairing(&f, &level.act(&level.involution(&t), &g));
    (base == left && left == right, level.iota(&level.iota(&f)) == f)
}
