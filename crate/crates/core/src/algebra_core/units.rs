use super::arith::{crt, factorize, gcd, mul_mod, primitive_root};
use super::cyclo::CyclotomicNumber;
use super::group::{Character, Elt, FiniteAbelianGroup};
use std::sync::Arc;

/// (Z/N)^x presented as a product of cyclic groups, with residue <-> exponent tables.
///
/// The Galois element sigma_a of Q(zeta_N)/Q (zeta -> zeta^a) corresponds to the residue a, so a
/// Dirichlet character mod N is a character of this group.
#[derive(Clone, Debug)]
pub struct UnitsModN {
    n: u64,
    group: Arc<FiniteAbelianGroup>,
    gens: Vec<u64>,
    to_index: Vec<usize>,
    residues: Vec<u64>,
}

impl UnitsModN {
    pub fn new(n: u64) -> Self {
        assert!(n >= 1);
        let mut gens = Vec::new();
        let mut orders = Vec::new();
        let fac = factorize(n);
        for &(p, e) in &fac {
            let pe = p.pow(e);
            let others = n / pe;
            let lift = |g: u64| if others == 1 { g % pe } else { crt(&[(g % pe, pe), (1, others)]).0 };
            if p == 2 {
                if e == 2 {
                    gens.push(lift(3));
                    orders.push(2);
                } else if e >= 3 {
                    gens.push(lift(pe - 1));
                    orders.push(2);
                    gens.push(lift(5));
                    orders.push(pe / 4);
                }
            } else {
                let g = primitive_root(pe).unwrap();
                gens.push(lift(g));
                orders.push(pe / p * (p - 1));
            }
        }
        let group = FiniteAbelianGroup::new(orders);
        let size = group.size();
        let mut residues = vec![0u64; size];
        let mut to_index = vec![usize::MAX; n as usize];
        for i in 0..size {
            let e = group.element(i);
            let mut r = 1 % n;
            for (g, k) in gens.iter().zip(&e) {
                for _ in 0..*k {
                    r = mul_mod(r, *g, n);
                }
            }
            residues[i] = r;
            to_index[r as usize] = i;
        }
        if n == 1 {
            to_index[0] = 0;
        }
        Self { n, group, gens, to_index, residues }
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn group(&self) -> &Arc<FiniteAbelianGroup> {
        &self.group
    }

    pub fn generators(&self) -> &[u64] {
        &self.gens
    }

    pub fn index_of(&self, a: i64) -> Option<usize> {
        let r = a.rem_euclid(self.n as i64) as u64;
        if gcd(r, self.n) != 1 && self.n != 1 {
            return None;
        }
        let i = self.to_index[r as usize % self.to_index.len()];
        (i != usize::MAX).then_some(i)
    }

    pub fn elt_of(&self, a: i64) -> Option<Elt> {
        self.index_of(a).map(|i| self.group.element(i))
    }

    pub fn residue(&self, g: &[u64]) -> u64 {
        self.residues[self.group.index(g)]
    }

    pub fn residue_of_index(&self, i: usize) -> u64 {
        self.residues[i]
    }

    pub fn units(&self) -> &[u64] {
        &self.residues
    }

    pub fn characters(&self) -> Vec<DirichletCharacter> {
        self.group.characters().into_iter().map(|c| DirichletCharacter { modulus: self.n, chi: c }).collect()
    }
}

/// A Dirichlet character mod N backed by a character of (Z/N)^x.
#[derive(Clone, Debug, PartialEq)]
pub struct DirichletCharacter {
    pub modulus: u64,
    pub chi: Character,
}

impl DirichletCharacter {
    /// Value chi(a) as exponent (d, k) meaning zeta_d^k, or None when gcd(a, N) > 1.
    pub fn value_exp(&self, units: &UnitsModN, a: i64) -> Option<(u64, u64)> {
        units.index_of(a).map(|i| self.chi.value_exp_index(i))
    }

    pub fn value(&self, units: &UnitsModN, a: i64) -> CyclotomicNumber {
        match self.value_exp(units, a) {
            Some((d, k)) => CyclotomicNumber::root_of_unity(d, k as i64),
            None => CyclotomicNumber::zero(),
        }
    }

    /// Conductor: least f | N such that chi is trivial on units congruent to 1 mod f.
    pub fn conductor(&self, units: &UnitsModN) -> u64 {
        let n = self.modulus;
        super::arith::divisors(n)
            .into_iter()
            .find(|&f| {
                units
                    .units()
                    .iter()
                    .enumerate()
                    .filter(|(_, &r)| r % f == 1 % f)
                    .all(|(i, _)| self.chi.value_exp_index(i).1 == 0)
            })
            .unwrap()
    }

    pub fn is_odd(&self, units: &UnitsModN) -> bool {
        match self.value_exp(units, -1) {
            Some((d, k)) => 2 * k == d,
            None => false,
        }
    }

    pub fn inverse(&self) -> Self {
        Self { modulus: self.modulus, chi: self.chi.inverse() }
    }
}
