use super::cyclo::{CycloAccumulator, CyclotomicNumber};
use super::group::{Character, Elt, FiniteAbelianGroup, Quotient, Subgroup};
use super::linalg::{det_berkowitz, det_field, Matrix};
use super::scalar::{Scalar, ToCyclotomic};
use crate::error::{Error, Result};
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;

/// Element of S[G], stored densely in the group's index order.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupRingElement<S: Scalar> {
    group: Arc<FiniteAbelianGroup>,
    coeffs: Vec<S>,
}

pub type QGroupRing = GroupRingElement<BigRational>;
pub type CycloGroupRing = GroupRingElement<CyclotomicNumber>;

impl<S: Scalar> GroupRingElement<S> {
    pub fn zero(group: Arc<FiniteAbelianGroup>, like: &S) -> Self {
        let n = group.size();
        Self { group, coeffs: vec![like.zero_like(); n] }
    }

    pub fn one(group: Arc<FiniteAbelianGroup>, like: &S) -> Self {
        Self::scalar(group, like.one_like())
    }

    pub fn scalar(group: Arc<FiniteAbelianGroup>, c: S) -> Self {
        let mut x = Self::zero(group, &c);
        x.coeffs[0] = c;
        x
    }

    /// The basis element g (with coefficient `c`).
    pub fn monomial(group: Arc<FiniteAbelianGroup>, g: &[u64], c: S) -> Self {
        let mut x = Self::zero(group.clone(), &c);
        let i = group.index(g);
        x.coeffs[i] = c;
        x
    }

    pub fn from_coeffs(group: Arc<FiniteAbelianGroup>, coeffs: Vec<S>) -> Result<Self> {
        if coeffs.len() != group.size() {
            return Err(Error::DimensionMismatch("coefficient vector length".into()));
        }
        Ok(Self { group, coeffs })
    }

    pub fn group(&self) -> &Arc<FiniteAbelianGroup> {
        &self.group
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, g: &[u64]) -> &S {
        &self.coeffs[self.group.index(g)]
    }

    pub fn like(&self) -> &S {
        &self.coeffs[0]
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> GroupRingElement<T> {
        GroupRingElement { group: self.group.clone(), coeffs: self.coeffs.iter().map(f).collect() }
    }

    fn check(&self, o: &Self) {
        assert_eq!(self.group, o.group, "group ring elements over different groups");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        Self { group: self.group.clone(), coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check(o);
        Self { group: self.group.clone(), coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn neg(&self) -> Self {
        Self { group: self.group.clone(), coeffs: self.coeffs.iter().map(|a| a.neg()).collect() }
    }

    pub fn scale(&self, c: &S) -> Self {
        Self { group: self.group.clone(), coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        let n = self.coeffs.len();
        let mut out = vec![self.like().zero_like(); n];
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if o.coeffs[j].is_zero() {
                    continue;
                }
                let k = self.group.op_index(i, j);
                out[k] = out[k].add(&self.coeffs[i].mul(&o.coeffs[j]));
            }
        }
        Self { group: self.group.clone(), coeffs: out }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self == &Self::one(self.group.clone(), self.like())
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut r = Self::one(self.group.clone(), self.like());
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    /// The involution sigma -> sigma^{-1}.
    pub fn involution(&self) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![self.like().zero_like(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[self.group.inv_index(i)] = c.clone();
        }
        Self { group: self.group.clone(), coeffs: out }
    }

    /// Ring automorphism induced by a group endomorphism given on indices.
    pub fn push_forward(&self, target: Arc<FiniteAbelianGroup>, f: impl Fn(usize) -> usize) -> Self {
        let mut out = vec![self.like().zero_like(); target.size()];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let j = f(i);
                out[j] = out[j].add(c);
            }
        }
        Self { group: target, coeffs: out }
    }

    /// Restriction S[G] -> S[G/H].
    pub fn project(&self, q: &Quotient) -> Self {
        self.push_forward(q.target.clone(), |i| q.project_index(i))
    }

    /// Norm element N_H = sum_{h in H} h.
    pub fn norm_element(h: &Subgroup, like: &S) -> Self {
        let mut x = Self::zero(h.group.clone(), like);
        for i in h.member_indices() {
            x.coeffs[i] = like.one_like();
        }
        x
    }

    /// e_H = N_H / #H.
    pub fn subgroup_idempotent(h: &Subgroup, like: &S) -> Result<Self> {
        let inv = like
            .from_i64_like(h.size() as i64)
            .try_inv()
            .ok_or_else(|| Error::NotInvertible(format!("1/#H with #H = {}", h.size())))?;
        Ok(Self::norm_element(h, like).scale(&inv))
    }

    /// e_chi = (1/#G) sum chi(sigma) sigma^{-1}, when S contains 1/#G and the values of chi.
    pub fn idempotent(chi: &Character, like: &S) -> Result<Self> {
        let g = chi.group().clone();
        let inv = like
            .from_i64_like(g.size() as i64)
            .try_inv()
            .ok_or_else(|| Error::NotInvertible(format!("1/#G with #G = {}", g.size())))?;
        let mut x = Self::zero(g.clone(), like);
        for i in 0..g.size() {
            let (d, k) = chi.value_exp_index(i);
            let v = like
                .root_of_unity_like(d, k as i64)
                .ok_or_else(|| Error::Unsupported("character values not in scalar ring".into()))?;
            x.coeffs[g.inv_index(i)] = v.mul(&inv);
        }
        Ok(x)
    }

    /// sum_sigma coeff(sigma) chi(sigma) computed inside S.
    pub fn chi_value_in(&self, chi: &Character) -> Result<S> {
        let mut s = self.like().zero_like();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (d, k) = chi.value_exp_index(i);
            let v = c
                .root_of_unity_like(d, k as i64)
                .ok_or_else(|| Error::Unsupported("character values not in scalar ring".into()))?;
            s = s.add(&c.mul(&v));
        }
        Ok(s)
    }
}

impl<S: Scalar> Scalar for GroupRingElement<S> {
    fn zero_like(&self) -> Self {
        Self::zero(self.group.clone(), self.like())
    }
    fn one_like(&self) -> Self {
        Self::one(self.group.clone(), self.like())
    }
    fn add(&self, o: &Self) -> Self {
        GroupRingElement::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        GroupRingElement::mul(self, o)
    }
    fn neg(&self) -> Self {
        GroupRingElement::neg(self)
    }
    fn is_zero(&self) -> bool {
        GroupRingElement::is_zero(self)
    }
    fn try_inv(&self) -> Option<Self> {
        None
    }
    fn from_i64_like(&self, n: i64) -> Self {
        Self::scalar(self.group.clone(), self.like().from_i64_like(n))
    }
    fn root_of_unity_like(&self, n: u64, k: i64) -> Option<Self> {
        self.like().root_of_unity_like(n, k).map(|c| Self::scalar(self.group.clone(), c))
    }
}

impl<S: Scalar + ToCyclotomic> GroupRingElement<S> {
    /// The chi-component sum_sigma coeff(sigma) chi(sigma) in Q(zeta).
    pub fn chi_component(&self, chi: &Character) -> CyclotomicNumber {
        let order = self
            .coeffs
            .iter()
            .fold(chi.group().exponent(), |acc, c| super::arith::lcm(acc, c.to_cyclotomic().order()));
        let mut acc = CycloAccumulator::new(order);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (d, k) = chi.value_exp_index(i);
            acc.add_term(&c.to_cyclotomic(), k * (order / d));
        }
        acc.finish()
    }

    pub fn to_cyclo(&self) -> CycloGroupRing {
        self.map(|c| c.to_cyclotomic())
    }

    /// Invertibility over the semisimple algebra: every chi-component nonzero.
    pub fn is_unit_semisimple(&self) -> bool {
        self.group.characters().par_iter().all(|chi| !self.chi_component(chi).is_zero())
    }
}

impl CycloGroupRing {
    /// Reassemble sum_chi e_chi * values[chi] (values indexed like characters_of).
    pub fn from_chi_components(group: Arc<FiniteAbelianGroup>, values: &[CyclotomicNumber]) -> Self {
        let chars = group.characters();
        assert_eq!(values.len(), chars.len());
        let n = group.size();
        let exp = group.exponent();
        let order = values.iter().fold(exp, |a, v| super::arith::lcm(a, v.order()));
        let inv_n = BigRational::new(1.into(), (n as i64).into());
        let coeffs: Vec<CyclotomicNumber> = (0..n)
            .into_par_iter()
            .map(|i| {
                // coefficient of sigma_i is (1/n) sum_chi v_chi chi(sigma_i)^{-1}
                let mut acc = CycloAccumulator::new(order);
                for (chi, v) in chars.iter().zip(values) {
                    if v.is_zero() {
                        continue;
                    }
                    let (d, k) = chi.value_exp_index(i);
                    acc.add_term(v, ((d - k) % d) * (order / d));
                }
                acc.finish().scale(&inv_n)
            })
            .collect();
        Self { group, coeffs }
    }

    /// Inverse via characters; errors when some chi-component vanishes.
    pub fn inverse_semisimple(&self) -> Result<Self> {
        let vals: Result<Vec<CyclotomicNumber>> =
            self.group.characters().par_iter().map(|chi| self.chi_component(chi).inv()).collect();
        Ok(Self::from_chi_components(self.group.clone(), &vals?))
    }
}

impl QGroupRing {
    /// Exact inverse in Q[G]; the result has rational coefficients.
    pub fn inverse_rational(&self) -> Result<Self> {
        let inv = self.to_cyclo().inverse_semisimple()?;
        let coeffs: Option<Vec<BigRational>> = inv.coeffs.iter().map(|c| c.as_rational().cloned()).collect();
        let coeffs = coeffs.ok_or_else(|| Error::InvalidInput("inverse not rational".into()))?;
        Ok(Self { group: self.group.clone(), coeffs })
    }
}

/// Determinant over S[G] by the division-free route.
pub fn group_ring_det<S: Scalar>(m: &Matrix<GroupRingElement<S>>) -> Result<GroupRingElement<S>> {
    let one = m
        .first()
        .and_then(|r| r.first())
        .ok_or_else(|| Error::DimensionMismatch("empty matrix".into()))?
        .one_like();
    det_berkowitz(m, &one)
}

/// Determinant via the semisimple decomposition sum_chi e_chi det(M^chi).
pub fn group_ring_det_semisimple<S: Scalar + ToCyclotomic>(m: &Matrix<GroupRingElement<S>>) -> Result<CycloGroupRing> {
    let first = m.first().and_then(|r| r.first()).ok_or_else(|| Error::DimensionMismatch("empty matrix".into()))?;
    if m.iter().any(|r| r.len() != m.len()) {
        return Err(Error::DimensionMismatch("non-square matrix".into()));
    }
    let g = first.group().clone();
    let chars = g.characters();
    let vals: Result<Vec<CyclotomicNumber>> = chars
        .par_iter()
        .map(|chi| {
            let mc: Matrix<CyclotomicNumber> =
                m.iter().map(|row| row.iter().map(|x| x.chi_component(chi)).collect()).collect();
            det_field(&mc, &CyclotomicNumber::one())
        })
        .collect();
    Ok(CycloGroupRing::from_chi_components(g, &vals?))
}

#[derive(Serialize)]
pub struct TermJson<T: Serialize> {
    pub elt: Elt,
    pub coeff: T,
}

#[derive(Serialize)]
pub struct GroupRingJson<T: Serialize> {
    pub group: Vec<u64>,
    pub terms: Vec<TermJson<T>>,
}

impl CycloGroupRing {
    pub fn to_json(&self) -> GroupRingJson<CyclotomicNumber> {
        GroupRingJson {
            group: self.group.orders().to_vec(),
            terms: self
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| TermJson { elt: self.group.element(i), coeff: c.clone() })
                .collect(),
        }
    }
}

impl QGroupRing {
    pub fn to_json(&self) -> GroupRingJson<String> {
        GroupRingJson {
            group: self.group.orders().to_vec(),
            terms: self
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !Scalar::is_zero(*c))
                .map(|(i, c)| TermJson { elt: self.group.element(i), coeff: c.to_string() })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra_core::cyclo::rat;
    use proptest::prelude::*;

    fn q(n: i64) -> BigRational {
        rat(n, 1)
    }

    #[test]
    fn idempotents_z2() {
        let g = FiniteAbelianGroup::cyclic(2);
        let chars = g.characters();
        let e = QGroupRing::idempotent(&chars[1], &q(1)).unwrap();
        assert_eq!(e.coeffs(), &[rat(1, 2), rat(-1, 2)]);
        let triv = FiniteAbelianGroup::trivial();
        let e0 = QGroupRing::idempotent(&triv.characters()[0], &q(1)).unwrap();
        assert!(e0.is_one());
    }

    #[test]
    fn idempotents_sum_to_one_z3() {
        let g = FiniteAbelianGroup::cyclic(3);
        let one = CyclotomicNumber::one();
        let mut s = CycloGroupRing::zero(g.clone(), &one);
        for chi in g.characters() {
            s = s.add(&CycloGroupRing::idempotent(&chi, &one).unwrap());
        }
        assert!(s.is_one());
    }

    #[test]
    fn chi_component_examples() {
        let g = FiniteAbelianGroup::cyclic(2);
        let sign = &g.characters()[1];
        let x = QGroupRing::one(g.clone(), &q(1)).sub(&QGroupRing::monomial(g.clone(), &[1], q(2)));
        assert_eq!(x.chi_component(sign), CyclotomicNumber::from_int(3));
        let g3 = FiniteAbelianGroup::cyclic(3);
        let y = QGroupRing::one(g3.clone(), &q(1)).sub(&QGroupRing::monomial(g3.clone(), &[1], q(2)));
        for chi in g3.characters() {
            assert_eq!(y.involution().chi_component(&chi), y.chi_component(&chi.inverse()));
        }
    }

    #[test]
    fn det_routes_and_examples() {
        let g = FiniteAbelianGroup::new(vec![2, 3]);
        let one = q(1);
        let s = QGroupRing::monomial(g.clone(), &[1, 0], one.clone());
        let t = QGroupRing::monomial(g.clone(), &[0, 1], one.clone());
        let z = QGroupRing::zero(g.clone(), &one);
        let d = group_ring_det(&vec![vec![s.clone(), z.clone()], vec![z.clone(), t.clone()]]).unwrap();
        assert_eq!(d, s.mul(&t));
        let m = vec![
            vec![s.add(&t), t.scale(&q(3)).sub(&s)],
            vec![QGroupRing::one(g.clone(), &one), s.mul(&t).add(&s)],
        ];
        let d1 = group_ring_det(&m).unwrap();
        let d2 = group_ring_det_semisimple(&m).unwrap();
        assert_eq!(d1.to_cyclo(), d2);
    }

    #[test]
    fn inverse_rational() {
        let g = FiniteAbelianGroup::cyclic(4);
        let x = QGroupRing::one(g.clone(), &q(1)).sub(&QGroupRing::monomial(g.clone(), &[1], rat(1, 3)));
        let y = x.inverse_rational().unwrap();
        assert!(x.mul(&y).is_one());
        let n = QGroupRing::norm_element(&Subgroup::whole(g.clone()), &q(1));
        assert!(n.inverse_rational().is_err());
    }

    fn arb_group() -> impl Strategy<Value = Arc<FiniteAbelianGroup>> {
        proptest::collection::vec(1u64..5, 0..3).prop_map(FiniteAbelianGroup::new)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn orthogonal_idempotents(g in arb_group()) {
            let one = CyclotomicNumber::one();
            let es: Vec<CycloGroupRing> = g.characters().iter().map(|c| CycloGroupRing::idempotent(c, &one).unwrap()).collect();
            let mut sum = CycloGroupRing::zero(g.clone(), &one);
            for (i, a) in es.iter().enumerate() {
                sum = sum.add(a);
                for (j, b) in es.iter().enumerate().take(3) {
                    let p = a.mul(b);
                    if i == j { prop_assert_eq!(&p, a); } else { prop_assert!(p.is_zero()); }
                }
            }
            prop_assert!(sum.is_one());
        }

        #[test]
        fn chi_component_is_ring_hom(g in arb_group(), a in proptest::collection::vec(-4i64..4, 64), b in proptest::collection::vec(-4i64..4, 64)) {
            let n = g.size();
            let x = QGroupRing::from_coeffs(g.clone(), a[..n].iter().map(|&v| q(v)).collect()).unwrap();
            let y = QGroupRing::from_coeffs(g.clone(), b[..n].iter().map(|&v| q(v)).collect()).unwrap();
            for chi in g.characters().iter().take(4) {
                prop_assert_eq!(x.mul(&y).chi_component(chi), x.chi_component(chi).mul(&y.chi_component(chi)));
                prop_assert_eq!(x.add(&y).chi_component(chi), x.chi_component(chi).add(&y.chi_component(chi)));
            }
            prop_assert_eq!(x.mul(&y).involution(), x.involution().mul(&y.involution()));
            prop_assert_eq!(x.involution().involution(), x);
        }

        #[test]
        fn det_multiplicative_and_routes_agree(a in proptest::collection::vec(-3i64..3, 24), b in proptest::collection::vec(-3i64..3, 24)) {
            let g = FiniteAbelianGroup::new(vec![2, 3]);
            let mk = |v: &[i64]| -> Matrix<QGroupRing> {
                (0..2).map(|i| (0..2).map(|j| {
                    let off = (i * 2 + j) * 6;
                    QGroupRing::from_coeffs(g.clone(), v[off..off + 6].iter().map(|&x| q(x)).collect()).unwrap()
                }).collect()).collect()
            };
            let (ma, mb) = (mk(&a), mk(&b));
            let prod = crate::algebra_core::linalg::mat_mul(&ma, &mb);
            let da = group_ring_det(&ma).unwrap();
            let db = group_ring_det(&mb).unwrap();
            prop_assert_eq!(group_ring_det(&prod).unwrap(), da.mul(&db));
            prop_assert_eq!(group_ring_det_semisimple(&ma).unwrap(), da.to_cyclo());
            let inv_m: Matrix<QGroupRing> = ma.iter().map(|r| r.iter().map(|x| x.involution()).collect()).collect();
            prop_assert_eq!(group_ring_det(&inv_m).unwrap(), da.involution());
        }
    }
}
