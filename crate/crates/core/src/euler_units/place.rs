use crate::algebra_core::group::{Elt, Quotient};
use crate::algebra_core::{Character, FiniteAbelianGroup, Subgroup, UnitsModN};
use crate::algebra_core::arith::{gcd, ipow};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Local data of a finite place v at finite level: inertia, decomposition group, a Frobenius
/// representative, the absolute norm and the upper ramification filtration of I_v.
#[derive(Clone, Debug)]
pub struct PlaceData {
    group: Arc<FiniteAbelianGroup>,
    inertia: Subgroup,
    decomp: Subgroup,
    frobenius: Elt,
    norm: u64,
    filtration: Vec<Subgroup>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PlaceDataJson {
    pub group: Vec<u64>,
    pub inertia_gens: Vec<Vec<u64>>,
    pub decomp_gens: Vec<Vec<u64>>,
    pub frobenius: Vec<u64>,
    pub norm: u64,
    #[serde(default)]
    pub filtration: Vec<Vec<Vec<u64>>>,
}

fn check_elt(g: &FiniteAbelianGroup, x: &[u64]) -> Result<Elt> {
    if x.len() != g.rank() {
        return Err(Error::DimensionMismatch(format!("element {x:?} for group {:?}", g.orders())));
    }
    Ok(x.iter().zip(g.orders()).map(|(a, d)| a % d).collect())
}

impl PlaceData {
    /// Validated constructor. An empty filtration means tame ramification: I ⊇ {1}.
    pub fn new(
        group: Arc<FiniteAbelianGroup>,
        inertia_gens: &[Elt],
        decomp_gens: &[Elt],
        frobenius: &[u64],
        norm: u64,
        filtration: &[Vec<Elt>],
    ) -> Result<Self> {
        let gens = |v: &[Elt]| v.iter().map(|x| check_elt(&group, x)).collect::<Result<Vec<_>>>();
        let inertia = Subgroup::generated(group.clone(), &gens(inertia_gens)?);
        let decomp = Subgroup::generated(group.clone(), &gens(decomp_gens)?);
        let frobenius = check_elt(&group, frobenius)?;
        if norm < 2 {
            return Err(Error::InvalidInput(format!("norm {norm} < 2")));
        }
        if !inertia.is_subgroup_of(&decomp) {
            return Err(Error::InvalidInput("inertia not contained in decomposition group".into()));
        }
        let generated = inertia.join(&Subgroup::generated(group.clone(), std::slice::from_ref(&frobenius)));
        if generated != decomp {
            return Err(Error::InvalidInput("Frobenius does not generate D/I".into()));
        }
        let filtration = if filtration.is_empty() {
            vec![inertia.clone(), Subgroup::trivial(group.clone())]
        } else {
            let f = filtration.iter().map(|g| Ok(Subgroup::generated(group.clone(), &gens(g)?))).collect::<Result<Vec<_>>>()?;
            if f[0] != inertia {
                return Err(Error::InvalidInput("filtration must start at I_v".into()));
            }
            if f.windows(2).any(|w| !w[1].is_subgroup_of(&w[0])) {
                return Err(Error::InvalidInput("filtration is not decreasing".into()));
            }
            if f.last().unwrap().size() != 1 {
                return Err(Error::InvalidInput("filtration must end at the trivial group".into()));
            }
            f
        };
        Ok(Self { group, inertia, decomp, frobenius, norm, filtration })
    }

    /// A place unramified in the given group.
    pub fn unramified(group: Arc<FiniteAbelianGroup>, frobenius: &[u64], norm: u64) -> Result<Self> {
        Self::new(group, &[], &[frobenius.to_vec()], frobenius, norm, &[])
    }

    pub fn group(&self) -> &Arc<FiniteAbelianGroup> {
        &self.group
    }
    pub fn inertia(&self) -> &Subgroup {
        &self.inertia
    }
    pub fn decomposition(&self) -> &Subgroup {
        &self.decomp
    }
    pub fn frobenius(&self) -> &[u64] {
        &self.frobenius
    }
    pub fn norm(&self) -> u64 {
        self.norm
    }
    pub fn filtration(&self) -> &[Subgroup] {
        &self.filtration
    }

    /// #(D_v / I_v).
    pub fn residue_degree(&self) -> usize {
        self.decomp.size() / self.inertia.size()
    }

    pub fn is_ramified(&self, chi: &Character) -> bool {
        !chi.is_trivial_on(&self.inertia)
    }

    /// The least i with chi trivial on I^i; N(f(chi_v)) = N(v)^i.
    pub fn conductor_exponent(&self, chi: &Character) -> usize {
        self.filtration.iter().position(|h| chi.is_trivial_on(h)).expect("filtration ends at {1}")
    }

    /// Image of the place in a quotient G/H.
    pub fn project(&self, q: &Quotient) -> Result<PlaceData> {
        let img = |h: &Subgroup| h.gens.iter().map(|g| q.project(g)).collect::<Vec<_>>();
        let filt: Vec<Vec<Elt>> = self.filtration.iter().map(img).collect();
        PlaceData::new(q.target.clone(), &img(&self.inertia), &img(&self.decomp), &q.project(&self.frobenius), self.norm, &filt)
    }

    pub fn to_json(&self) -> PlaceDataJson {
        PlaceDataJson {
            group: self.group.orders().to_vec(),
            inertia_gens: self.inertia.gens.clone(),
            decomp_gens: self.decomp.gens.clone(),
            frobenius: self.frobenius.clone(),
            norm: self.norm,
            filtration: self.filtration.iter().map(|h| h.gens.clone()).collect(),
        }
    }

    pub fn from_json(j: &PlaceDataJson) -> Result<Self> {
        if j.group.contains(&0) {
            return Err(Error::InvalidInput("cyclic orders must be positive".into()));
        }
        Self::new(FiniteAbelianGroup::new(j.group.clone()), &j.inertia_gens, &j.decomp_gens, &j.frobenius, j.norm, &j.filtration)
    }
}

/// The level-n group Gal(K_n/k) = G x Gal(k_n/k) for k = Q, with Gal(Q(mu_{p^n})/Q) = (Z/p^n)^x
/// carrying the cyclotomic character.
#[derive(Clone, Debug)]
pub struct CyclotomicLevel {
    base: Arc<FiniteAbelianGroup>,
    p: u64,
    n: u32,
    units: UnitsModN,
    group: Arc<FiniteAbelianGroup>,
}

impl CyclotomicLevel {
    pub fn new(base: Arc<FiniteAbelianGroup>, p: u64, n: u32) -> Self {
        let units = UnitsModN::new(ipow(p, n));
        let mut orders = base.orders().to_vec();
        orders.extend_from_slice(units.group().orders());
        let group = FiniteAbelianGroup::new(orders);
        Self { base, p, n, units, group }
    }

    pub fn base(&self) -> &Arc<FiniteAbelianGroup> {
        &self.base
    }
    pub fn group(&self) -> &Arc<FiniteAbelianGroup> {
        &self.group
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn level(&self) -> u32 {
        self.n
    }

    /// G -> G x Gamma, g -> (g, 1).
    pub fn embed(&self, g: &[u64]) -> Elt {
        let mut x = g.to_vec();
        x.resize(self.group.rank(), 0);
        x
    }

    /// (1, sigma_a) with sigma_a(zeta) = zeta^a.
    pub fn gamma(&self, a: u64) -> Result<Elt> {
        let e = self
            .units
            .elt_of(a as i64)
            .ok_or_else(|| Error::InvalidInput(format!("{a} is not prime to {}", self.p)))?;
        let mut x = vec![0; self.base.rank()];
        x.extend(e);
        Ok(x)
    }

    pub fn base_part(&self, x: &[u64]) -> Elt {
        x[..self.base.rank()].to_vec()
    }

    /// chi_cyc(x) mod p^n.
    pub fn chi_cyc(&self, x: &[u64]) -> u64 {
        self.units.residue(&x[self.base.rank()..])
    }

    /// A place of k = Q prime to p: inertia inside G, Frobenius (sigma_K, sigma_N) at level n.
    pub fn place(&self, inertia_gens: &[Elt], sigma_base: &[u64], norm: u64, filtration: &[Vec<Elt>]) -> Result<PlaceData> {
        if gcd(norm, self.p) != 1 {
            return Err(Error::InvalidInput("the place must not divide p".into()));
        }
        let mut frob = self.embed(sigma_base);
        let g = self.gamma(norm)?;
        frob = self.group.op(&frob, &g);
        let inertia: Vec<Elt> = inertia_gens.iter().map(|x| self.embed(x)).collect();
        let mut decomp = inertia.clone();
        decomp.push(frob.clone());
        let filt: Vec<Vec<Elt>> = filtration.iter().map(|f| f.iter().map(|x| self.embed(x)).collect()).collect();
        PlaceData::new(self.group.clone(), &inertia, &decomp, &frob, norm, &filt)
    }

    /// The same place seen over G = Gal(K/k).
    pub fn base_place(&self, v: &PlaceData) -> Result<PlaceData> {
        let part = |h: &Subgroup| h.gens.iter().map(|x| self.base_part(x)).collect::<Vec<_>>();
        let frob = self.base_part(v.frobenius());
        let mut decomp = part(v.inertia());
        decomp.push(frob.clone());
        let filt: Vec<Vec<Elt>> = v.filtration().iter().map(part).collect();
        PlaceData::new(self.base.clone(), &part(v.inertia()), &decomp, &frob, v.norm(), &filt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let g = FiniteAbelianGroup::new(vec![2, 4]);
        assert!(PlaceData::new(g.clone(), &[vec![1, 0]], &[vec![1, 0], vec![0, 1]], &[0, 1], 5, &[]).is_ok());
        // Frobenius does not generate D/I
        assert!(PlaceData::new(g.clone(), &[vec![1, 0]], &[vec![1, 0], vec![0, 1]], &[0, 2], 5, &[]).is_err());
        // I not in D
        assert!(PlaceData::new(g.clone(), &[vec![0, 1]], &[vec![1, 0]], &[1, 0], 5, &[]).is_err());
        // filtration not ending at {1}
        assert!(PlaceData::new(g.clone(), &[vec![0, 1]], &[vec![0, 1]], &[0, 0], 5, &[vec![vec![0, 1]], vec![vec![0, 2]]]).is_err());
        let v = PlaceData::new(g, &[vec![0, 1]], &[vec![0, 1]], &[0, 0], 5, &[vec![vec![0, 1]], vec![vec![0, 2]], vec![]]).unwrap();
        let orders: Vec<usize> = v.filtration().iter().map(|h| h.size()).collect();
        assert_eq!(orders, vec![4, 2, 1]);
        let chi = Character::new(v.group().clone(), vec![0, 2]);
        assert_eq!(v.conductor_exponent(&chi), 1);
        assert_eq!(v.conductor_exponent(&Character::new(v.group().clone(), vec![0, 1])), 2);
    }

    #[test]
    fn json_round_trip() {
        let g = FiniteAbelianGroup::new(vec![2, 4]);
        let v = PlaceData::new(g, &[vec![1, 0]], &[vec![1, 0], vec![0, 1]], &[0, 1], 7, &[]).unwrap();
        let j = serde_json::to_string(&v.to_json()).unwrap();
        let back = PlaceData::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back.to_json(), v.to_json());
        let text = r#"{"group":[6],"inertia_gens":[[3]],"decomp_gens":[[1]],"frobenius":[1],"norm":7,"filtration":[]}"#;
        let w = PlaceData::from_json(&serde_json::from_str(text).unwrap()).unwrap();
        assert_eq!(w.residue_degree(), 3);
    }

    #[test]
    fn level_structure() {
        let lvl = CyclotomicLevel::new(FiniteAbelianGroup::cyclic(2), 3, 2);
        assert_eq!(lvl.group().size(), 12);
        let v = lvl.place(&[vec![1]], &[0], 7, &[]).unwrap();
        assert_eq!(lvl.chi_cyc(v.frobenius()), 7);
        assert_eq!(lvl.chi_cyc(&lvl.gamma(2).unwrap()), 2);
        let b = lvl.base_place(&v).unwrap();
        assert_eq!(b.inertia().size(), 2);
        assert!(lvl.place(&[], &[1], 6, &[]).is_err());
    }
}
