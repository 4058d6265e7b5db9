use crate::algebra_core::arith::{gcd, inv_mod, ipow, lcm, mul_mod, primitive_root};
use crate::algebra_core::cyclo::{CyclotomicNumber, IntAccumulator};
use crate::error::{Error, Result};
use crate::local_ring::unramified::{padic_log, URElement, UnramifiedRing};
use num_rational::Ratio;
use serde::Serialize;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

/// A point of Q/Z; the root of unity exp(2 pi i x).
pub type Phase = Ratio<i64>;

pub fn phase(n: i64, d: i64) -> Phase {
    Ratio::new(n.rem_euclid(d), d)
}

pub fn phase_add(a: Phase, b: Phase) -> Phase {
    let s = a + b;
    s - s.floor()
}

pub fn phase_scale(a: Phase, k: i64) -> Phase {
    let s = a * Ratio::from_integer(k);
    s - s.floor()
}

pub fn phase_to_cyclo(a: Phase) -> CyclotomicNumber {
    CyclotomicNumber::root_of_unity(*a.denom() as u64, *a.numer())
}

/// Per-unit data of (O/p^n)^x: tame discrete log, wild log coordinates and trace.
#[derive(Clone, Debug)]
pub struct UnitRecord {
    pub u: Vec<u64>,
    /// residue of u is g^tame for the reference generator g of F_q^x
    pub tame: u64,
    /// log(u / omega(u)) / p in the power basis, mod p^{n-1}
    pub wild: Vec<u64>,
    /// Tr(u) mod p^n
    pub trace: u64,
}

/// The unramified local field of degree r over Q_p viewed at level n, i.e. with its unit group
/// (O/p^n)^x tabulated.
pub struct LocalField {
    ring: Arc<UnramifiedRing>,
    level: u32,
    q: u64,
    tame_gen: Vec<u64>,
    dlog: HashMap<Vec<u64>, u64>,
    units: OnceLock<Vec<UnitRecord>>,
}

impl std::fmt::Debug for LocalField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LocalField(p={}, r={}, n={})", self.ring.p(), self.ring.degree(), self.level)
    }
}

impl LocalField {
    pub fn new(p: u64, r: usize, level: u32) -> Result<Arc<Self>> {
        let ring = UnramifiedRing::new(p, r, level.max(1))?;
        let q = ipow(p, r as u32);
        let residues = ring.residue_field();
        let gen = if r == 1 {
            vec![primitive_root(p).unwrap()]
        } else {
            let x = ring.gen().coeffs().iter().map(|c| c % p).collect::<Vec<_>>();
            let candidates = std::iter::once(x).chain(residues.iter().map(|e| e.coeffs().to_vec()));
            let fp = ring.at_precision(1);
            candidates
                .filter(|c| c.iter().any(|&v| v != 0))
                .find(|c| multiplicative_order(&fp, c, q) == q - 1)
                .expect("F_q^x is cyclic")
        };
        let fp = ring.at_precision(1);
        let mut dlog = HashMap::new();
        let mut cur = fp.one().coeffs().to_vec();
        for e in 0..q - 1 {
            dlog.insert(cur.clone(), e);
            cur = fp.mul_raw(&cur, &gen);
        }
        Ok(Arc::new(Self { ring, level, q, tame_gen: gen, dlog, units: OnceLock::new() }))
    }

    pub fn ring(&self) -> &Arc<UnramifiedRing> {
        &self.ring
    }
    pub fn p(&self) -> u64 {
        self.ring.p()
    }
    pub fn degree(&self) -> usize {
        self.ring.degree()
    }
    pub fn level(&self) -> u32 {
        self.level
    }
    pub fn residue_size(&self) -> u64 {
        self.q
    }
    pub fn tame_generator(&self) -> &[u64] {
        &self.tame_gen
    }

    /// p^{n-1}, the modulus of wild coordinates.
    pub fn wild_modulus(&self) -> u64 {
        ipow(self.p(), self.level.saturating_sub(1))
    }

    pub fn residue_dlog(&self, u: &[u64]) -> Option<u64> {
        let key: Vec<u64> = u.iter().map(|c| c % self.p()).collect();
        self.dlog.get(&key).copied()
    }

    /// Decompose a unit into (tame dlog, wild coordinates).
    pub fn decompose(&self, u: &[u64]) -> Result<(u64, Vec<u64>)> {
        let tame = self.residue_dlog(u).ok_or_else(|| Error::InvalidInput("not a unit".into()))?;
        let ring = &self.ring;
        let r = ring.degree();
        if self.level <= 1 {
            return Ok((tame, vec![0; r]));
        }
        let omega = ring.teichmuller_raw(u);
        let oinv = ring.inv_raw(&omega).expect("Teichmüller lift of a unit");
        let u1 = ring.elem(ring.mul_raw(u, &oinv));
        let l = padic_log(&u1)?;
        let a = l.div_p_pow(1)?;
        let wm = self.wild_modulus();
        Ok((tame, a.coeffs().iter().map(|c| c % wm).collect()))
    }

    /// All units of O/p^n with their decompositions, in lexicographic coefficient order.
    pub fn units(&self) -> &[UnitRecord] {
        self.units.get_or_init(|| {
            let p = self.p();
            let r = self.degree();
            let pn = ipow(p, self.level);
            let total = ipow(pn, r as u32);
            let mut out = Vec::with_capacity(total as usize);
            for mut code in 0..total {
                let mut u = vec![0u64; r];
                for x in u.iter_mut() {
                    *x = code % pn;
                    code /= pn;
                }
                if u.iter().all(|&x| x % p == 0) {
                    continue;
                }
                let (tame, wild) = self.decompose(&u).expect("unit");
                let trace = self.ring.elem(u.clone()).trace().value() % pn;
                out.push(UnitRecord { u, tame, wild, trace });
            }
            out
        })
    }
}

fn multiplicative_order(fp: &UnramifiedRing, a: &[u64], q: u64) -> u64 {
    let m = q - 1;
    crate::algebra_core::arith::divisors(m)
        .into_iter()
        .find(|&d| {
            let x = fp.pow_raw(a, d);
            x[0] == 1 && x[1..].iter().all(|&v| v == 0)
        })
        .unwrap_or(m)
}

/// A character theta of k_v^x at level n: theta(omega(g)) = zeta_{q-1}^tame,
/// theta(u1) = zeta_{p^{n-1}}^{sum c_i a_i(u1)} on principal units, theta(p) = exp(2 pi i frob).
#[derive(Clone, Debug)]
pub struct LocalCharacterData {
    field: Arc<LocalField>,
    tame: u64,
    wild: Vec<u64>,
    frob: Phase,
}

impl PartialEq for LocalCharacterData {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.field, &o.field) && self.tame == o.tame && self.wild == o.wild && self.frob == o.frob
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct GaussSumResult {
    pub value: CyclotomicNumber,
    pub conductor_norm: u64,
    pub ramified: bool,
}

impl LocalCharacterData {
    pub fn new(field: &Arc<LocalField>, tame: u64, wild: Vec<u64>, frob: Phase) -> Result<Self> {
        if wild.len() != field.degree() {
            return Err(Error::DimensionMismatch("wild coordinates".into()));
        }
        let wm = field.wild_modulus();
        Ok(Self {
            field: field.clone(),
            tame: tame % (field.q - 1),
            wild: wild.into_iter().map(|c| c % wm).collect(),
            frob: frob - frob.floor(),
        })
    }

    pub fn trivial(field: &Arc<LocalField>) -> Self {
        Self::new(field, 0, vec![0; field.degree()], phase(0, 1)).unwrap()
    }

    /// Recover the character from its values on units; checked on every unit.
    pub fn from_function(field: &Arc<LocalField>, f: &dyn Fn(&[u64]) -> Phase, frob: Phase) -> Result<Self> {
        let q = field.q;
        let ring = field.ring.clone();
        let r = field.degree();
        let p = field.p();
        let omega_g = ring.teichmuller_raw(&field.tame_gen);
        let tp = f(&omega_g) * Ratio::from_integer(q as i64 - 1);
        if !tp.is_integer() {
            return Err(Error::InvalidInput("values on roots of unity are not (q-1)-th roots".into()));
        }
        let tame = tp.to_integer().rem_euclid(q as i64 - 1) as u64;
        let wm = field.wild_modulus();
        let mut wild = vec![0u64; r];
        if field.level > 1 {
            // u_i = 1 + p x^i has wild coordinates A[i] = e_i mod p; solve A c = e
            let mut a = Vec::with_capacity(r);
            let mut e = Vec::with_capacity(r);
            for i in 0..r {
                let mut u = vec![0u64; r];
                u[0] = 1;
                u[i] = (u[i] + p) % ring.modulus_pn();
                let (_, w) = field.decompose(&u)?;
                a.push(w);
                let v = f(&u) * Ratio::from_integer(wm as i64);
                if !v.is_integer() {
                    return Err(Error::InvalidInput("principal-unit values have wrong order".into()));
                }
                e.push(v.to_integer().rem_euclid(wm as i64) as u64);
            }
            wild = solve_unipotent(&a, &e, wm);
        }
        let chi = Self::new(field, tame, wild, frob)?;
        for rec in field.units() {
            if chi.theta_unit(rec) != f(&rec.u) {
                return Err(Error::InvalidInput("function is not a character at this level".into()));
            }
        }
        Ok(chi)
    }

    pub fn field(&self) -> &Arc<LocalField> {
        &self.field
    }
    pub fn tame(&self) -> u64 {
        self.tame
    }
    pub fn wild(&self) -> &[u64] {
        &self.wild
    }
    pub fn frob(&self) -> Phase {
        self.frob
    }

    pub fn with_frob(&self, frob: Phase) -> Self {
        Self { frob: frob - frob.floor(), ..self.clone() }
    }

    pub fn theta_unit(&self, rec: &UnitRecord) -> Phase {
        let q1 = self.field.q as i64 - 1;
        let t = phase((self.tame as i64 * rec.tame as i64).rem_euclid(q1), q1);
        let wm = self.field.wild_modulus();
        let mut s = 0u64;
        for (c, a) in self.wild.iter().zip(&rec.wild) {
            s = (s + mul_mod(*c, *a, wm)) % wm;
        }
        phase_add(t, phase(s as i64, wm as i64))
    }

    /// theta(u) for a unit given by raw coefficients.
    pub fn theta(&self, u: &[u64]) -> Result<Phase> {
        let (tame, wild) = self.field.decompose(u)?;
        Ok(self.theta_unit(&UnitRecord { u: u.to_vec(), tame, wild, trace: 0 }))
    }

    /// theta(u p^a).
    pub fn theta_at(&self, u: &[u64], a: i64) -> Result<Phase> {
        Ok(phase_add(self.theta(u)?, phase_scale(self.frob, a)))
    }

    /// Conductor exponent n_chi.
    pub fn conductor_exponent(&self) -> u32 {
        let n = self.field.level;
        let p = self.field.p();
        if self.wild.iter().all(|&c| c == 0) {
            return u32::from(self.tame != 0);
        }
        let v = self.wild.iter().filter(|&&c| c != 0).map(|&c| crate::algebra_core::arith::vp(c, p)).min().unwrap();
        n - v
    }

    pub fn inverse(&self) -> Self {
        let q1 = self.field.q - 1;
        let wm = self.field.wild_modulus();
        Self {
            field: self.field.clone(),
            tame: (q1 - self.tame) % q1,
            wild: self.wild.iter().map(|c| (wm - c) % wm).collect(),
            frob: phase_scale(self.frob, -1),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert!(Arc::ptr_eq(&self.field, &o.field));
        let q1 = self.field.q - 1;
        let wm = self.field.wild_modulus();
        Self {
            field: self.field.clone(),
            tame: (self.tame + o.tame) % q1,
            wild: self.wild.iter().zip(&o.wild).map(|(a, b)| (a + b) % wm).collect(),
            frob: phase_add(self.frob, o.frob),
        }
    }

    pub fn theta_minus_one(&self) -> Phase {
        let m = self.field.ring.modulus_pn();
        let mut u = vec![0u64; self.field.degree()];
        u[0] = m - 1;
        self.theta(&u).expect("-1 is a unit")
    }

    /// Every character of level n (tame exponents, then wild coordinates), with theta(p) = frob.
    pub fn all(field: &Arc<LocalField>, frob: Phase) -> Vec<Self> {
        let q1 = field.q - 1;
        let wm = field.wild_modulus();
        let r = field.degree();
        let nwild = ipow(wm, r as u32);
        let mut out = Vec::new();
        for t in 0..q1 {
            for mut code in 0..nwild {
                let mut w = vec![0u64; r];
                for x in w.iter_mut() {
                    *x = code % wm;
                    code /= wm;
                }
                out.push(Self::new(field, t, w, frob).unwrap());
            }
        }
        out
    }

    /// theta o N for a character of the Q_p-level field at the same p and level.
    pub fn norm_inflate(base: &Self, field: &Arc<LocalField>) -> Result<Self> {
        let bf = &base.field;
        if bf.degree() != 1 || bf.p() != field.p() || bf.level != field.level {
            return Err(Error::InvalidInput("inflation needs a Q_p-level character at the same level".into()));
        }
        let p = field.p();
        let q = field.q;
        let r = field.degree() as u32;
        // N(g) = g^{(q-1)/(p-1)} lies in F_p^x; write it as h^s for the base generator h
        let fp = field.ring.at_precision(1);
        let ng = fp.pow_raw(&field.tame_gen, (q - 1) / (p - 1));
        let s = bf.residue_dlog(&ng[..1]).expect("norm lands in F_p^x");
        let tame = ((base.tame as u128 * s as u128 * ((q - 1) / (p - 1)) as u128) % (q - 1) as u128) as u64;
        let wm = field.wild_modulus();
        let ring = &field.ring;
        let wild = (0..field.degree())
            .map(|i| {
                let mut e = vec![0u64; field.degree()];
                e[i] = 1;
                let tr = ring.elem(e).trace().value() % wm;
                mul_mod(base.wild[0], tr, wm)
            })
            .collect();
        Self::new(field, tame, wild, phase_scale(base.frob, r as i64))
    }
}

/// Solve A c = e mod m when A = I mod p, via the Neumann series of I - A.
fn solve_unipotent(a: &[Vec<u64>], e: &[u64], m: u64) -> Vec<u64> {
    let r = e.len();
    // A is indexed A[i][j] = a_j(u_i)
    let n_mat: Vec<Vec<u64>> = (0..r)
        .map(|i| (0..r).map(|j| ((if i == j { 1 } else { 0 }) + m - a[i][j] % m) % m).collect())
        .collect();
    let mut term = e.to_vec();
    let mut acc = e.to_vec();
    for _ in 0..64 {
        term = (0..r).map(|i| (0..r).fold(0u64, |s, j| (s + mul_mod(n_mat[i][j], term[j], m)) % m)).collect();
        if term.iter().all(|&x| x == 0) {
            break;
        }
        for i in 0..r {
            acc[i] = (acc[i] + term[i]) % m;
        }
    }
    acc
}

/// psi(x p^{-n}) = zeta_{p^n}^{Tr x mod p^n}, for x in O (raw coefficients).
pub fn additive_character(ring: &Arc<UnramifiedRing>, x: &[u64], n: u32) -> CyclotomicNumber {
    let pn = ipow(ring.p(), n);
    let t = ring.elem(x.to_vec()).trace().value() % pn;
    CyclotomicNumber::root_of_unity(pn, t as i64)
}

/// Local Gauss sum tau(chi_v) over an unramified base (c = p^{n_chi}).
pub fn local_gauss_sum(chi: &LocalCharacterData) -> GaussSumResult {
    let field = &chi.field;
    let m = chi.conductor_exponent();
    let r = field.degree() as u32;
    let p = field.p();
    if m == 0 {
        // theta(c^{-1}) with c = 1
        return GaussSumResult { value: CyclotomicNumber::one(), conductor_norm: 1, ramified: false };
    }
    let pm = ipow(p, m);
    let q1 = field.q - 1;
    let tame_den = q1 / gcd(chi.tame, q1);
    let wm = field.wild_modulus();
    let wild_den = {
        let g = chi.wild.iter().fold(wm, |g, &c| gcd(g, c));
        wm / g
    };
    let frob_den = *chi.frob.denom() as u64;
    let order = lcm(lcm(tame_den, wild_den), lcm(pm, frob_den));
    let mut acc = IntAccumulator::new(order);
    let shift = phase_scale(chi.frob, -(m as i64));
    let shift_k = (*shift.numer() as u64) * (order / *shift.denom() as u64);
    for rec in field.units() {
        let th = chi.theta_unit(rec);
        let k_theta = (*th.numer() as u64) * (order / *th.denom() as u64);
        let k_psi = (rec.trace % pm) * (order / pm);
        acc.add((k_theta + k_psi + shift_k) % order, 1);
    }
    // each class mod p^m appears p^{(n-m) r} times
    let reps = ipow(p, (field.level - m) * r);
    let value = acc.finish().scale(&crate::algebra_core::rat(1, reps as i64));
    GaussSumResult { value, conductor_norm: ipow(p, m * r), ramified: true }
}

/// Image of u p^a under local reciprocity in (Z/p^n)^x x <Frob>: the unit acts on zeta_{p^n}
/// by N(u)^{-1} and trivially on the unramified part; p acts as Frobenius.
pub fn local_reciprocity(u: &URElement, a: i64, n: u32) -> Result<(u64, i64)> {
    if !u.is_unit() {
        return Err(Error::InvalidInput("reciprocity input must be a unit times a power of p".into()));
    }
    let p = u.ring().p();
    let pn = ipow(p, n);
    let nu = u.norm().value() % pn.max(1);
    let inv = if pn == 1 { 0 } else { inv_mod(nu, pn).unwrap() };
    Ok((inv, a.rem_euclid(u.ring().degree() as i64)))
}

/// Wild invariant e of a character with n_chi >= 2: theta(E(z)) = psi(e z p^{-n_chi}) for all
/// z in p^m O / p^{n_chi} O, with E(z) = 1 + z + z^2/2 (n_chi = 2m+1) or 1 + z (n_chi = 2m).
/// Returned as raw coefficients mod p^{m+1} (odd) or p^m (even).
pub fn wild_invariant(chi: &LocalCharacterData) -> Result<Vec<u64>> {
    let n = chi.conductor_exponent();
    if n < 2 {
        return Err(Error::InvalidInput("wild invariant needs n_chi >= 2".into()));
    }
    let field = &chi.field;
    let ring = field.ring.clone();
    let p = field.p();
    let r = field.degree();
    let m = n / 2;
    let odd = n % 2 == 1;
    let emod_exp = if odd { m + 1 } else { m };
    let emod = ipow(p, emod_exp);
    let pn = ipow(p, n);
    let big = ring.modulus_pn();
    let half = inv_mod(2, big).unwrap();
    let pm = ipow(p, m);
    // z runs over p^m * (O / p^{n-m})
    let zmod = ipow(p, n - m);
    let zs: Vec<Vec<u64>> = (0..ipow(zmod, r as u32))
        .map(|mut code| {
            let mut z = vec![0u64; r];
            for x in z.iter_mut() {
                *x = (code % zmod) * pm % big;
                code /= zmod;
            }
            z
        })
        .collect();
    let lhs: Vec<Phase> = zs
        .iter()
        .map(|z| {
            let mut e = ring.add_raw(ring.one().coeffs(), z);
            if odd {
                let z2 = ring.mul_raw(z, z);
                e = ring.add_raw(&e, &ring.scale_raw(&z2, half));
            }
            chi.theta(&e)
        })
        .collect::<Result<_>>()?;
    for mut code in 0..ipow(emod, r as u32) {
        let mut e = vec![0u64; r];
        for x in e.iter_mut() {
            *x = code % emod;
            code /= emod;
        }
        if e.iter().all(|&x| x % p == 0) {
            continue;
        }
        let ok = zs.iter().zip(&lhs).all(|(z, th)| {
            let t = ring.elem(ring.mul_raw(&e, z)).trace().value() % pn;
            phase(t as i64, pn as i64) == *th
        });
        if ok {
            return Ok(e);
        }
    }
    Err(Error::InvalidInput("no wild invariant; broken character encoding".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra_core::cyclo::rat;

    #[test]
    fn additive_character_examples() {
        let q5 = UnramifiedRing::new(5, 1, 2).unwrap();
        assert!(additive_character(&q5, &[5], 1).is_one());
        assert_eq!(additive_character(&q5, &[1], 1), CyclotomicNumber::root_of_unity(5, 1));
        let r = UnramifiedRing::new(3, 2, 2).unwrap();
        let u = r.residue_field().into_iter().find(|e| e.trace().value() % 3 == 2).unwrap();
        assert_eq!(additive_character(&r, u.coeffs(), 1), CyclotomicNumber::root_of_unity(3, 2));
    }

    #[test]
    fn quadratic_mod_5() {
        let f = LocalField::new(5, 1, 1).unwrap();
        // tame exponent 2 of 4: the quadratic character
        let chi = LocalCharacterData::new(&f, 2, vec![0], phase(0, 1)).unwrap();
        let g = local_gauss_sum(&chi).value;
        let z = |k| CyclotomicNumber::root_of_unity(5, k);
        let expect = z(1).sub(&z(2)).sub(&z(3)).add(&z(4));
        assert_eq!(g, expect);
        assert_eq!(g.mul(&g), CyclotomicNumber::from_int(5));
    }

    #[test]
    fn trivial_conductor_gives_one() {
        let f = LocalField::new(3, 2, 2).unwrap();
        let chi = LocalCharacterData::trivial(&f).with_frob(phase(1, 4));
        let g = local_gauss_sum(&chi);
        assert!(g.value.is_one() && !g.ramified);
    }

    #[test]
    fn norm_law_mod_7_and_49() {
        for level in [1, 2] {
            let f = LocalField::new(7, 1, level).unwrap();
            for chi in LocalCharacterData::all(&f, phase(0, 1)) {
                let a = local_gauss_sum(&chi);
                let b = local_gauss_sum(&chi.inverse());
                let sign = phase_to_cyclo(chi.theta_minus_one());
                let n = CyclotomicNumber::from_int(a.conductor_norm as i64);
                assert_eq!(a.value.mul(&b.value), sign.mul(&n));
            }
        }
    }

    #[test]
    fn from_function_round_trip() {
        let f = LocalField::new(3, 2, 3).unwrap();
        let all = LocalCharacterData::all(&f, phase(0, 1));
        for chi in all.iter().step_by(37) {
            let g = |u: &[u64]| chi.theta(u).unwrap();
            let back = LocalCharacterData::from_function(&f, &g, phase(0, 1)).unwrap();
            assert_eq!(&back, chi);
        }
        assert_eq!(all.len(), 8 * 81);
    }

    #[test]
    fn conductor_exponents_count() {
        let f = LocalField::new(5, 1, 2).unwrap();
        let all = LocalCharacterData::all(&f, phase(0, 1));
        let exact2 = all.iter().filter(|c| c.conductor_exponent() == 2).count();
        assert_eq!(exact2, 20 - 4);
        assert_eq!(all.iter().filter(|c| c.conductor_exponent() == 0).count(), 1);
    }

    #[test]
    fn reciprocity_is_homomorphism() {
        let ring = UnramifiedRing::new(3, 1, 3).unwrap();
        assert_eq!(local_reciprocity(&ring.one(), 0, 3).unwrap(), (1, 0));
        let r5 = UnramifiedRing::new(5, 1, 1).unwrap();
        assert_eq!(local_reciprocity(&r5.from_int(-1), 0, 1).unwrap().0, 4);
        for a in 1..27i64 {
            for b in 1..27i64 {
                if a % 3 == 0 || b % 3 == 0 {
                    continue;
                }
                let (x, _) = local_reciprocity(&ring.from_int(a), 0, 3).unwrap();
                let (y, _) = local_reciprocity(&ring.from_int(b), 0, 3).unwrap();
                let (z, _) = local_reciprocity(&ring.from_int(a * b), 0, 3).unwrap();
                assert_eq!(x * y % 27, z);
            }
        }
        assert!(local_reciprocity(&ring.from_int(3), 0, 2).is_err());
        assert_eq!(local_reciprocity(&ring.from_int(1), 1, 2).unwrap(), (1, 0));
    }

    #[test]
    fn wild_invariant_examples() {
        let f1 = LocalField::new(3, 1, 2).unwrap();
        let f2 = LocalField::new(3, 2, 2).unwrap();
        for base in LocalCharacterData::all(&f1, phase(0, 1)) {
            if base.conductor_exponent() != 2 {
                continue;
            }
            let e1 = wild_invariant(&base).unwrap();
            let infl = LocalCharacterData::norm_inflate(&base, &f2).unwrap();
            let e2 = wild_invariant(&infl).unwrap();
            assert_eq!(e2, vec![e1[0], 0]);
        }
        let f3 = LocalField::new(5, 1, 3).unwrap();
        let chi = LocalCharacterData::new(&f3, 1, vec![1], phase(0, 1)).unwrap();
        assert_eq!(chi.conductor_exponent(), 3);
        let e = wild_invariant(&chi).unwrap();
        assert!(!e[0].is_multiple_of(5));
        assert!(wild_invariant(&LocalCharacterData::trivial(&f3)).is_err());
        let _ = rat(1, 1);
    }
}
