use super::place::{CyclotomicLevel, PlaceData};
use crate::algebra_core::arith::{gcd, inv_mod, pow_mod};
use crate::algebra_core::group::{Elt, Quotient};
use crate::algebra_core::{Character, Scalar, CyclotomicNumber, FiniteAbelianGroup, GroupRingElement, QGroupRing, Subgroup};
use crate::error::{Error, Result};
use crate::local_ring::Zpn;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::sync::Arc;

pub type ZpnGroupRing = GroupRingElement<Zpn>;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// N^k as an exact rational, k of either sign.
pub fn norm_pow(n: u64, k: i64) -> BigRational {
    q(n as i64).pow(k as i32)
}

fn one(g: &Arc<FiniteAbelianGroup>) -> QGroupRing {
    QGroupRing::one(g.clone(), &BigRational::one())
}

fn mono(g: &Arc<FiniteAbelianGroup>, x: &[u64], c: BigRational) -> QGroupRing {
    QGroupRing::monomial(g.clone(), x, c)
}

pub fn idempotent(h: &Subgroup) -> QGroupRing {
    QGroupRing::subgroup_idempotent(h, &BigRational::one()).expect("1/#H is rational")
}

/// epsilon_v^j = 1 - e_I N(v)^{-j} sigma_v.
pub fn euler_factor(v: &PlaceData, j: i64) -> QGroupRing {
    let g = v.group();
    let t = idempotent(v.inertia()).mul(&mono(g, v.frobenius(), norm_pow(v.norm(), -j)));
    one(g).sub(&t)
}

/// delta_v = epsilon_v^0 + e_D / #(D/I).
pub fn delta_factor(v: &PlaceData) -> QGroupRing {
    let f = q(v.residue_degree() as i64);
    euler_factor(v, 0).add(&idempotent(v.decomposition()).scale(&(BigRational::one() / f)))
}

/// The unit that is -1 on the trivial component and 1 elsewhere: 1 - 2 e_G.
pub fn delta_trivial(g: &Arc<FiniteAbelianGroup>) -> QGroupRing {
    one(g).sub(&idempotent(&Subgroup::whole(g.clone())).scale(&q(2)))
}

/// The chi-value chi(v) N(v)^{-j} convention: chi(v) = 0 for chi ramified at v.
pub fn euler_component(v: &PlaceData, chi: &Character, j: i64) -> CyclotomicNumber {
    if v.is_ramified(chi) {
        return CyclotomicNumber::one();
    }
    let cv = chi.value(v.frobenius()).scale(&norm_pow(v.norm(), -j));
    CyclotomicNumber::one().sub(&cv)
}

/// A fraction num/den in the total quotient ring, with per-character degeneracy flags.
#[derive(Clone, Debug)]
pub struct GroupRingFraction {
    pub num: QGroupRing,
    pub den: QGroupRing,
    /// indexed like `group.characters()`; true when the den-component vanishes
    pub degenerate: Vec<bool>,
}

impl GroupRingFraction {
    pub fn new(num: QGroupRing, den: QGroupRing) -> Self {
        let degenerate = den.group().characters().iter().map(|chi| den.chi_component(chi).is_zero()).collect();
        Self { num, den, degenerate }
    }

    /// The chi-component, or None at a degenerate character.
    pub fn component(&self, chi: &Character) -> Option<CyclotomicNumber> {
        if self.degenerate[chi.index()] {
            return None;
        }
        self.num.chi_component(chi).div(&self.den.chi_component(chi)).ok()
    }

    /// Cross-multiplied equality a/b = c/d, i.e. ad = bc.
    pub fn same_as(&self, o: &GroupRingFraction) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}

/// h^j = (1 - e_I N(v)^{1-j} sigma) / (1 - e_I N(v)^{-j} sigma).
pub fn h_element(v: &PlaceData, j: i64) -> GroupRingFraction {
    GroupRingFraction::new(euler_factor(v, j - 1), euler_factor(v, j))
}

/// The unramified modification -N(v)^{j-1} sigma^{-1} h^j.
pub fn e_variant(v: &PlaceData, j: i64) -> GroupRingFraction {
    let g = v.group();
    let s = mono(g, &g.inv(v.frobenius()), -norm_pow(v.norm(), j - 1));
    let h = h_element(v, j);
    GroupRingFraction::new(s.mul(&h.num), h.den)
}

#[derive(Clone, Debug)]
pub struct ConductorUnit {
    pub value: QGroupRing,
    pub inverse: QGroupRing,
}

/// sum_i a^{max(i,1)} (e_i - e_{i-1}) with e_{-1} = 0, a = c * s.
fn filtration_sum(v: &PlaceData, a: &QGroupRing) -> QGroupRing {
    let g = v.group();
    let mut out = QGroupRing::zero(g.clone(), &BigRational::zero());
    let mut prev = QGroupRing::zero(g.clone(), &BigRational::zero());
    let mut pw = a.clone();
    for (i, h) in v.filtration().iter().enumerate() {
        let e = idempotent(h);
        if i >= 2 {
            pw = pw.mul(a);
        }
        out = out.add(&pw.mul(&e.sub(&prev)));
        prev = e;
    }
    out
}

/// The conductor unit f_j for v not above p, with its explicit inverse certified exactly in
/// Q[G] and mod p^prec in Z_p[G].
///
/// `sigma` is the Frobenius of the cyclotomic part (sigma_{k_infty, v}).
pub fn conductor_unit(v: &PlaceData, sigma: &[u64], j: i64, p: u64, prec: u32) -> Result<ConductorUnit> {
    if gcd(v.norm(), p) != 1 {
        return Err(Error::InvalidInput("conductor units are defined for v not above p".into()));
    }
    if let Some(h) = v.filtration().iter().find(|h| (h.size() as u64).is_multiple_of(p)) {
        return Err(Error::NotInvertible(format!("p = {p} divides #I^i = {}", h.size())));
    }
    let g = v.group();
    let a = mono(g, &g.inv(sigma), norm_pow(v.norm(), j));
    let b = mono(g, sigma, norm_pow(v.norm(), -j));
    let value = filtration_sum(v, &a);
    let inverse = filtration_sum(v, &b);
    if !value.mul(&inverse).is_one() {
        return Err(Error::NotInvertible("explicit inverse failed exactly".into()));
    }
    let vp = to_zpn(&value, p, prec)?;
    let ip = to_zpn(&inverse, p, prec)?;
    if !vp.mul(&ip).is_one() {
        return Err(Error::NotInvertible(format!("explicit inverse failed mod {p}^{prec}")));
    }
    Ok(ConductorUnit { value, inverse })
}

/// The interpolation value N(f(chi_v))^j chi(sigma)^{-i_chi}, with i_chi replaced by 1 when chi is
/// unramified.
pub fn conductor_unit_component(v: &PlaceData, sigma: &[u64], chi: &Character, j: i64) -> CyclotomicNumber {
    let i = v.conductor_exponent(chi).max(1) as i64;
    let g = v.group();
    chi.value(&g.pow(sigma, -i)).scale(&norm_pow(v.norm(), j * i))
}

/// Coefficientwise reduction Q[G] -> Z/p^prec[G]; errors on denominators divisible by p.
pub fn to_zpn(x: &QGroupRing, p: u64, prec: u32) -> Result<ZpnGroupRing> {
    let coeffs = x
        .coeffs()
        .iter()
        .map(|c| Zpn::from_rational(p, prec, c).ok_or_else(|| Error::NotInvertible(format!("{c} is not {p}-integral"))))
        .collect::<Result<Vec<_>>>()?;
    ZpnGroupRing::from_coeffs(x.group().clone(), coeffs)
}

/// D_j = |D_k|^j prod rec(D_{k_v/Q_l})^{-1}; `rec_elements` lists the rec(D_{k_v/Q_l}). For k = Q
/// the discriminant is 1 and the product is empty.
pub fn discriminant_unit(level: &CyclotomicLevel, disc: u64, rec_elements: &[Elt], j: i64) -> Result<QGroupRing> {
    if disc == 0 || disc.is_multiple_of(level.p()) {
        return Err(Error::InvalidInput(format!("p = {} divides the discriminant {disc}", level.p())));
    }
    let g = level.group();
    let mut x = one(g).scale(&norm_pow(disc, j));
    for r in rec_elements {
        if r.len() != g.rank() {
            return Err(Error::DimensionMismatch("reciprocity element".into()));
        }
        x = x.mul(&mono(g, &g.inv(r), BigRational::one()));
    }
    Ok(x)
}

/// tw_m: sigma -> chi_cyc(sigma)^m sigma on Z/p^n[G x Gamma_n].
pub fn twist_op(level: &CyclotomicLevel, x: &ZpnGroupRing, m: i64) -> Result<ZpnGroupRing> {
    let n = level.level();
    if n == 0 {
        return Err(Error::Unsupported("twisting needs a level n >= 1 cyclotomic part".into()));
    }
    let g = level.group();
    if x.group() != g {
        return Err(Error::DimensionMismatch("element is not over the level group".into()));
    }
    if x.coeffs().iter().any(|c| c.precision() > n) {
        return Err(Error::PrecisionExhausted(format!("chi_cyc is only known mod p^{n}")));
    }
    let pn = crate::algebra_core::arith::ipow(level.p(), n);
    let coeffs = x
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let chi = level.chi_cyc(&g.element(i));
            let base = if m >= 0 { chi } else { inv_mod(chi, pn).expect("chi_cyc is a unit") };
            let t = Zpn::from_u64(level.p(), c.precision(), pow_mod(base, m.unsigned_abs(), pn));
            Scalar::mul(c, &t)
        })
        .collect();
    ZpnGroupRing::from_coeffs(g.clone(), coeffs)
}

/// d_v^j(K/K') over G' = G/H: (1 - e_{D'}) + f_{K/K',v} e_{D'} for j = 1 and 1 for j >= 2.
pub fn descent_factor(v: &PlaceData, quot: &Quotient, j: i64) -> Result<QGroupRing> {
    let gp = quot.target.clone();
    if j >= 2 {
        return Ok(one(&gp));
    }
    let vp = v.project(quot)?;
    let f = v.residue_degree() / vp.residue_degree();
    let e = idempotent(vp.decomposition());
    Ok(one(&gp).sub(&e).add(&e.scale(&q(f as i64))))
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub pass: bool,
}

impl IdentityCheck {
    pub fn new(name: &str, pass: bool) -> Self {
        Self { name: name.to_string(), pass }
    }
}
