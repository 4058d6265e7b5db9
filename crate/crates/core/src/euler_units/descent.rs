use super::factors::{
    delta_factor, descent_factor, e_variant, euler_factor, h_element, idempotent, norm_pow, to_zpn, twist_op, IdentityCheck,
};
use super::place::{CyclotomicLevel, PlaceData};
use crate::algebra_core::group::Elt;
use crate::algebra_core::arith::{gcd, ipow};
use crate::algebra_core::{FiniteAbelianGroup, QGroupRing, Subgroup};
use crate::error::Result;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;
use serde::Serialize;
use std::sync::Arc;

/// One instance of the descent/Euler identities: a place of Q prime to p at level n, a subgroup
/// H cutting out K' and a weight j.
#[derive(Clone, Debug)]
pub struct DescentInstance {
    pub level: CyclotomicLevel,
    pub place: PlaceData,
    pub h: Subgroup,
    pub j: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DescentReport {
    pub group: Vec<u64>,
    pub inertia: usize,
    pub decomposition: usize,
    pub norm: u64,
    pub j: i64,
    pub checks: Vec<IdentityCheck>,
}

impl DescentReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn embed_ring(level: &CyclotomicLevel, x: &QGroupRing) -> QGroupRing {
    let g = level.group().clone();
    let base = x.group().clone();
    x.push_forward(g.clone(), |i| g.index(&level.embed(&base.element(i))))
}

/// Run every identity for one instance.
pub fn descent_identity_suite(inst: &DescentInstance) -> Result<DescentReport> {
    let DescentInstance { level, place: v, h, j } = inst;
    let j = *j;
    let g = level.group().clone();
    let nv = v.norm();
    let e_i = idempotent(v.inertia());
    let mut checks = Vec::new();

    // (eps^{1-j#} - e_I) eps^{j-1} = eps^{1-j#}
    let eps_dual = euler_factor(v, 1 - j).involution();
    if j >= 2 {
        let lhs = eps_dual.sub(&e_i).mul(&euler_factor(v, j - 1));
        checks.push(IdentityCheck::new("euler_j_ge_2", lhs == eps_dual));
    } else {
        // (eps^{0#} - e_I)(eps^0 - e_D / #(D/I)) = delta^#
        let f = BigRational::from_integer((v.residue_degree() as i64).into());
        let second = euler_factor(v, 0).sub(&idempotent(v.decomposition()).scale(&(BigRational::one() / f)));
        let lhs = euler_factor(v, 0).involution().sub(&e_i).mul(&second);
        checks.push(IdentityCheck::new("euler_j_eq_1", lhs == delta_factor(v).involution()));
    }

    // (eps^0(K/k)^# - e_I)^{chi_1} (1 - e_I + e_I N^{j-1} sigma_{k_infty}^{-1})^chi
    //   = (eps^{1-j}(K_n/k)^# - e_I)^chi
    let base = level.base_place(v)?;
    let first = embed_ring(level, &euler_factor(&base, 0).involution().sub(&idempotent(base.inertia())));
    let gamma_inv = g.inv(&level.gamma(nv)?);
    let one = QGroupRing::one(g.clone(), &BigRational::one());
    let mid = one.sub(&e_i).add(&e_i.mul(&QGroupRing::monomial(g.clone(), &gamma_inv, norm_pow(nv, j - 1))));
    checks.push(IdentityCheck::new("split_frobenius", first.mul(&mid) == eps_dual.sub(&e_i)));

    // functoriality along G -> G/H
    let quot = g.quotient(h);
    let vp = v.project(&quot)?;
    let d = descent_factor(v, &quot, j)?;
    if j == 1 {
        let rhs = d.mul(&delta_factor(v).involution().project(&quot));
        checks.push(IdentityCheck::new("functoriality_delta", delta_factor(&vp).involution() == rhs));
    } else {
        checks.push(IdentityCheck::new("descent_factor_trivial", d.is_one()));
    }

    // tw_{j-j'}(h^j) = h^{j'} and the matching statement for N^{j-1} sigma^{-1}, mod p^n
    if level.level() >= 1 {
        let (p, n) = (level.p(), level.level());
        // clearing #I from both parts keeps h and makes it p-integral
        let c = BigRational::from_integer((v.inertia().size() as i64).into());
        let z = |x: &QGroupRing| to_zpn(&x.scale(&c), p, n);
        let hj = h_element(v, j);
        let mut ok = true;
        for jp in 1..=4i64 {
            let hp = h_element(v, jp);
            let tn = twist_op(level, &z(&hj.num)?, j - jp)?;
            let td = twist_op(level, &z(&hj.den)?, j - jp)?;
            ok &= tn == z(&hp.num)? && td == z(&hp.den)?;
            let s = |k: i64| QGroupRing::monomial(g.clone(), &g.inv(v.frobenius()), norm_pow(nv, k - 1));
            ok &= twist_op(level, &to_zpn(&s(j), p, n)?, j - jp)? == to_zpn(&s(jp), p, n)?;
        }
        checks.push(IdentityCheck::new("twist_h", ok));
    }

    // -N^{j-1} sigma^{-1} h^j agrees with eps^{1-j#} / eps^j on unramified components
    let ev = e_variant(v, j);
    let lhs = ev.num.mul(&euler_factor(v, j)).mul(&e_i);
    let rhs = eps_dual.mul(&ev.den).mul(&e_i);
    checks.push(IdentityCheck::new("e_variant", lhs == rhs));

    Ok(DescentReport {
        group: g.orders().to_vec(),
        inertia: v.inertia().size(),
        decomposition: v.decomposition().size(),
        norm: nv,
        j,
        checks,
    })
}

fn random_orders<R: Rng>(rng: &mut R, max: usize) -> Vec<u64> {
    let mut orders = Vec::new();
    let mut size = 1usize;
    for _ in 0..3 {
        let d = rng.gen_range(1..=8u64);
        if size * d as usize > max {
            break;
        }
        size *= d as usize;
        if d > 1 {
            orders.push(d);
        }
    }
    orders
}

pub fn random_element<R: Rng>(rng: &mut R, g: &FiniteAbelianGroup) -> Elt {
    g.orders().iter().map(|&d| rng.gen_range(0..d)).collect()
}

fn random_norm<R: Rng>(rng: &mut R, p: u64) -> u64 {
    loop {
        let n = rng.gen_range(2..40u64);
        if gcd(n, p) == 1 {
            return n;
        }
    }
}

/// A random instance with |G x Gamma_n| <= max_size.
pub fn random_descent_instance<R: Rng>(rng: &mut R, max_size: usize) -> Result<DescentInstance> {
    let levels: Vec<(u64, u32)> = [(3u64, 1u32), (3, 2), (5, 1), (7, 1)]
        .into_iter()
        .filter(|&(p, n)| ipow(p, n) / p * (p - 1) <= max_size as u64)
        .collect();
    let (p, n) = if levels.is_empty() { (3, 1) } else { levels[rng.gen_range(0..levels.len())] };
    let gamma = (ipow(p, n) / p * (p - 1)) as usize;
    let base = FiniteAbelianGroup::new(random_orders(rng, max_size / gamma));
    let level = CyclotomicLevel::new(base.clone(), p, n);
    let k = rng.gen_range(0..=2);
    let inertia: Vec<Elt> = (0..k).map(|_| random_element(rng, &base)).collect();
    let sigma = random_element(rng, &base);
    let place = level.place(&inertia, &sigma, random_norm(rng, p), &[])?;
    let hg: Vec<Elt> = (0..rng.gen_range(0..=2)).map(|_| random_element(rng, level.group())).collect();
    let h = Subgroup::generated(level.group().clone(), &hg);
    Ok(DescentInstance { level, place, h, j: rng.gen_range(1..=4) })
}

/// A random place with a random ramification filtration over a group of order <= max_size, and
/// a prime p not dividing #I.
#[derive(Clone, Debug)]
pub struct FiltrationInstance {
    pub place: PlaceData,
    pub sigma: Elt,
    pub p: u64,
    pub j: i64,
}

pub fn random_filtration_instance<R: Rng>(rng: &mut R, max_size: usize) -> Result<FiltrationInstance> {
    let g: Arc<FiniteAbelianGroup> = FiniteAbelianGroup::new(random_orders(rng, max_size));
    let t = rng.gen_range(0..=3);
    let hs: Vec<Elt> = (0..t).map(|_| random_element(rng, &g)).collect();
    let filt: Vec<Vec<Elt>> = (0..=t).map(|i| hs[i..].to_vec()).collect();
    let sigma = random_element(rng, &g);
    let mut decomp = hs.clone();
    decomp.push(sigma.clone());
    let inertia_size = Subgroup::generated(g.clone(), &hs).size() as u64;
    let p = *[3u64, 5, 7, 11, 13].iter().find(|&&p| !inertia_size.is_multiple_of(p)).unwrap();
    let place = PlaceData::new(g, &hs, &decomp, &sigma, random_norm(rng, p), &filt)?;
    Ok(FiltrationInstance { place, sigma, p, j: rng.gen_range(0..=4) })
}
