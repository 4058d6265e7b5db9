use super::local::{phase, phase_add, phase_scale, LocalCharacterData, LocalField, Phase};
use crate::algebra_core::arith::{crt, factorize, gcd, ipow, lcm};
use crate::algebra_core::cyclo::{CyclotomicNumber, IntAccumulator};
use crate::algebra_core::group_ring::CycloGroupRing;
use crate::algebra_core::units::{DirichletCharacter, UnitsModN};
use crate::error::{Error, Result};

/// The restriction chi_l = chi o rec_{Q_l} of a Dirichlet character, as a function on
/// (Z/l^e)^x (l^e exactly dividing the modulus) together with theta(l).
#[derive(Clone, Debug)]
pub struct DirichletLocal {
    pub l: u64,
    pub e: u32,
    /// theta(u) for u in [0, l^e), None for non-units
    pub theta: Vec<Option<Phase>>,
    pub frob: Phase,
}

fn chi_phase(units: &UnitsModN, chi: &DirichletCharacter, a: u64) -> Phase {
    let (d, k) = chi.value_exp(units, a as i64).expect("unit argument");
    phase(k as i64, d as i64)
}

impl DirichletLocal {
    pub fn new(units: &UnitsModN, chi: &DirichletCharacter, l: u64) -> Self {
        let n = units.modulus();
        let mut e = 0u32;
        while n.is_multiple_of(ipow(l, e + 1)) {
            e += 1;
        }
        let le = ipow(l, e);
        let rest = n / le;
        // rec(u) acts on zeta_{l^e} by u^{-1} and trivially on zeta_rest
        let theta = (0..le)
            .map(|u| {
                if gcd(u, l) != 1 && le > 1 {
                    return None;
                }
                let uinv = if le == 1 { 0 } else { crate::algebra_core::arith::inv_mod(u, le).unwrap() };
                let a = crt(&[(uinv, le), (1 % rest, rest)]).0;
                Some(chi_phase(units, chi, a))
            })
            .collect();
        // rec(l) is Frobenius on zeta_rest and trivial on zeta_{l^e}
        let a = crt(&[(1 % le, le), (l % rest, rest)]).0;
        let frob = if gcd(l, rest) == 1 { chi_phase(units, chi, a) } else { phase(0, 1) };
        Self { l, e, theta, frob }
    }

    /// Exponent of the local conductor.
    pub fn conductor_exponent(&self) -> u32 {
        let le = ipow(self.l, self.e);
        (0..=self.e)
            .find(|&c| {
                let lc = ipow(self.l, c);
                (0..le).all(|u| match self.theta[u as usize] {
                    Some(t) if u % lc == 1 % lc => *t.numer() == 0,
                    _ => true,
                })
            })
            .unwrap()
    }

    /// tau(chi_l) = theta(l)^{-c} sum_{u mod l^c} theta(u) zeta_{l^c}^u, or 1 when unramified.
    pub fn gauss_sum(&self) -> CyclotomicNumber {
        let c = self.conductor_exponent();
        if c == 0 {
            return CyclotomicNumber::one();
        }
        let lc = ipow(self.l, c);
        let le = ipow(self.l, self.e);
        let mut order = lcm(lc, *self.frob.denom() as u64);
        for t in self.theta.iter().flatten() {
            order = lcm(order, *t.denom() as u64);
        }
        let shift = phase_scale(self.frob, -(c as i64));
        let mut acc = IntAccumulator::new(order);
        for u in 0..lc {
            if gcd(u, self.l) != 1 {
                continue;
            }
            // any lift of u to (Z/l^e)^x
            let lift = (0..le / lc).map(|t| u + t * lc).find(|x| self.theta[*x as usize].is_some()).unwrap();
            let ph = phase_add(phase_add(self.theta[lift as usize].unwrap(), shift), phase(u as i64, lc as i64));
            acc.add((*ph.numer() as u64) * (order / *ph.denom() as u64), 1);
        }
        acc.finish()
    }

    /// The same character through the unramified-ring machinery (odd l only).
    pub fn to_local_character(&self) -> Result<LocalCharacterData> {
        if self.l == 2 {
            return Err(Error::Unsupported("local fields are implemented for odd primes".into()));
        }
        let field = LocalField::new(self.l, 1, self.e.max(1))?;
        let le = ipow(self.l, self.e);
        let theta = self.theta.clone();
        let f = move |u: &[u64]| theta[(u[0] % le) as usize].unwrap_or(phase(0, 1));
        LocalCharacterData::from_function(&field, &f, self.frob)
    }
}

/// Global Gauss sum tau_Q(chi) = prod_l tau(chi_l) of the Galois character attached to chi.
pub fn global_gauss_sum(units: &UnitsModN, chi: &DirichletCharacter) -> CyclotomicNumber {
    factorize(units.modulus())
        .into_iter()
        .map(|(l, _)| DirichletLocal::new(units, chi, l).gauss_sum())
        .fold(CyclotomicNumber::one(), |a, b| a.mul(&b))
}

/// tau_{K/Q, l} = sum_chi tau(chi_l) e_chi for K = Q(zeta_m), G = (Z/m)^x.
pub fn equivariant_gauss_sum(units: &UnitsModN, l: u64) -> CycloGroupRing {
    let vals: Vec<CyclotomicNumber> =
        units.characters().iter().map(|chi| DirichletLocal::new(units, chi, l).gauss_sum()).collect();
    CycloGroupRing::from_chi_components(units.group().clone(), &vals)
}

/// tau_{K/Q} = prod over ramified l of tau_{K/Q,l} (k = Q: |D_k| = 1, r_C = 0).
pub fn equivariant_gauss_sum_global(units: &UnitsModN) -> CycloGroupRing {
    let g = units.group().clone();
    let one = CycloGroupRing::one(g, &CyclotomicNumber::one());
    factorize(units.modulus()).into_iter().fold(one, |acc, (l, _)| acc.mul(&equivariant_gauss_sum(units, l)))
}

/// Classical sum over a modulus: sum_{a mod f} conj(chi)(a) zeta_f^a; a test oracle.
pub fn classical_conjugate_sum(units: &UnitsModN, chi: &DirichletCharacter) -> CyclotomicNumber {
    let f = units.modulus();
    (1..=f)
        .filter(|&a| gcd(a, f) == 1)
        .map(|a| chi.inverse().value(units, a as i64).mul(&CyclotomicNumber::root_of_unity(f, a as i64)))
        .fold(CyclotomicNumber::zero(), |s, t| s.add(&t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss_sums::local::local_gauss_sum;

    #[test]
    fn primitive_sums_match_classical_form() {
        for f in [3u64, 4, 5, 7, 8, 9, 12, 15, 20, 21, 24] {
            let units = UnitsModN::new(f);
            for chi in units.characters() {
                if chi.conductor(&units) != f {
                    continue;
                }
                let tau = global_gauss_sum(&units, &chi);
                assert_eq!(tau, classical_conjugate_sum(&units, &chi), "f = {f}");
                let sign = if chi.is_odd(&units) { -1 } else { 1 };
                let prod = tau.mul(&global_gauss_sum(&units, &chi.inverse()));
                assert_eq!(prod, CyclotomicNumber::from_int(sign * f as i64));
            }
        }
    }

    #[test]
    fn dirichlet_local_matches_local_field_route() {
        for (n, l) in [(25u64, 5u64), (63, 3), (63, 7), (45, 3)] {
            let units = UnitsModN::new(n);
            for chi in units.characters() {
                let loc = DirichletLocal::new(&units, &chi, l);
                let lc = loc.to_local_character().unwrap();
                assert_eq!(lc.conductor_exponent(), loc.conductor_exponent());
                assert_eq!(local_gauss_sum(&lc).value, loc.gauss_sum());
            }
        }
    }

    #[test]
    fn equivariant_components() {
        let units = UnitsModN::new(15);
        let tau = equivariant_gauss_sum_global(&units);
        for chi in units.characters() {
            assert_eq!(tau.chi_component(&chi.chi), global_gauss_sum(&units, &chi));
        }
    }
}
