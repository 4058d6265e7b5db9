use super::algebra::{AElem, CycloAlgebra};
use crate::algebra_core::arith::{euler_phi, inv_mod, ipow, vp};
use crate::algebra_core::{CyclotomicNumber, DirichletCharacter, UnitsModN};
use crate::error::{Error, Result};
use crate::local_ring::unramified::signed_rep;
use crate::local_ring::{TruncatedSeries, UnramifiedRing};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;
use serde::Serialize;
use std::sync::Arc;

fn pascal(m: usize, modulus: u64) -> Vec<Vec<u64>> {
    let mut c = vec![vec![0u64; m]; m];
    for i in 0..m {
        c[i][0] = 1 % modulus;
        for k in 1..=i {
            c[i][k] = (c[i - 1][k - 1] + if k < i { c[i - 1][k] } else { 0 }) % modulus;
        }
    }
    c
}

/// Coordinates a_k of f = sum_k a_k (1+T)^k (k < M); the change of basis is unimodular.
pub fn to_binomial_basis(f: &TruncatedSeries) -> Vec<Vec<u64>> {
    let ring = f.ring();
    let m = f.precision();
    let pn = ring.modulus_pn();
    let c = pascal(m, pn);
    (0..m)
        .map(|k| {
            (k..m).fold(vec![0; ring.degree()], |acc, i| {
                let s = ring.scale_raw(f.raw()[i].as_slice(), c[i][k]);
                if (i - k) % 2 == 0 {
                    ring.add_raw(&acc, &s)
                } else {
                    ring.sub_raw(&acc, &s)
                }
            })
        })
        .collect()
}

/// sum_k a_k (1+T)^k expanded in powers of T.
pub fn from_binomial_basis(ring: &Arc<UnramifiedRing>, a: &[Vec<u64>]) -> TruncatedSeries {
    let m = a.len();
    let c = pascal(m, ring.modulus_pn());
    let coeffs = (0..m)
        .map(|i| (i..m).fold(vec![0; ring.degree()], |acc, k| ring.add_raw(&acc, &ring.scale_raw(&a[k], c[k][i]))))
        .collect();
    TruncatedSeries::from_raw(ring, coeffs)
}

/// Exact representative of f in R: the (1+T)-coordinates, which must vanish at every k
/// divisible by p. Evaluating the representative at zeta - 1 involves no truncation tail.
pub fn r_representative(f: &TruncatedSeries) -> Result<Vec<Vec<u64>>> {
    let p = f.ring().p() as usize;
    let a = to_binomial_basis(f);
    if let Some(k) = (0..a.len()).step_by(p).find(|&k| a[k].iter().any(|&x| x != 0)) {
        return Err(Error::InvalidInput(format!(
            "series has (1+T)^{k} coordinate with p | {k}; not an exact element of R"
        )));
    }
    Ok(a)
}

/// Uniform random element sum_{k < M, p !| k} a_k (1+T)^k of R.
pub fn random_r_element<G: Rng>(rng: &mut G, ring: &Arc<UnramifiedRing>, m: usize) -> TruncatedSeries {
    let p = ring.p() as usize;
    let pn = ring.modulus_pn();
    let a: Vec<Vec<u64>> = (0..m)
        .map(|k| (0..ring.degree()).map(|_| if k % p == 0 { 0 } else { rng.gen_range(0..pn) }).collect())
        .collect();
    from_binomial_basis(ring, &a)
}

/// D^s f for f in R given by (1+T)-coordinates: D (1+T)^k = k (1+T)^k, any integer s.
pub fn d_power(ring: &Arc<UnramifiedRing>, a: &[Vec<u64>], s: i64) -> Result<Vec<Vec<u64>>> {
    let pn = ring.modulus_pn();
    a.iter()
        .enumerate()
        .map(|(k, c)| {
            if c.iter().all(|&x| x == 0) {
                return Ok(c.clone());
            }
            let base = if s >= 0 {
                k as u64 % pn
            } else {
                inv_mod(k as u64 % pn, pn).ok_or_else(|| Error::NotInvertible(format!("D^{s} at k = {k}")))?
            };
            let w = crate::algebra_core::arith::pow_mod(base, s.unsigned_abs(), pn);
            Ok(ring.scale_raw(c, w))
        })
        .collect()
}

/// Xi_{n,j}(f) in O[zeta_{p^n}], stored as p^scale times the value in a working algebra.
#[derive(Clone, Debug)]
pub struct XiValue {
    pub algebra: CycloAlgebra,
    pub scale: u32,
    pub value: AElem,
}

impl XiValue {
    /// Coordinates of the unscaled value on 1, zeta, ..., zeta^{phi-1}, as exact fractions
    /// p^{-scale} c with c read mod p^W.
    pub fn coordinates(&self) -> Vec<Vec<BigRational>> {
        let ring = self.algebra.ring();
        let m = ring.modulus_pn();
        let den = BigRational::from_integer(BigInt::from(ipow(ring.p(), self.scale)));
        self.algebra
            .reduce(&self.value)
            .iter()
            .map(|c| c.iter().map(|&x| BigRational::from_integer(signed_rep(x, m).into()) / &den).collect())
            .collect()
    }
}

struct Setup {
    alg: CycloAlgebra,
    a: Vec<Vec<u64>>,
    f0: Vec<u64>,
    scale: u32,
}

fn setup(f: &TruncatedSeries, n: u32, work: u32) -> Result<Setup> {
    let a0 = r_representative(f)?;
    let ring = f.ring().at_precision(work);
    let f0 = a0.iter().fold(vec![0; ring.degree()], |s, c| ring.add_raw(&s, c));
    let level = n.max(1);
    Ok(Setup { alg: CycloAlgebra::new(ring, level), a: a0, f0, scale: level })
}

/// (1 - p^j sigma^{-1})^{-1} y by the geometric series, exact mod p^W.
fn geometric_inverse(ring: &UnramifiedRing, y: &[u64], j: i64) -> Vec<u64> {
    let w = ring.precision() as i64;
    let p = ring.p();
    let mut acc = y.to_vec();
    let mut term = y.to_vec();
    let mut e = j;
    while e < w {
        term = ring.scale_raw(&ring.frob_pow_raw(&term, -1), ipow(p, j as u32) % ring.modulus_pn());
        acc = ring.add_raw(&acc, &term);
        e += j;
    }
    acc
}

fn check_j(j: i64) -> Result<()> {
    if j < 1 {
        return Err(Error::InvalidInput(format!("Xi_{{n,j}} needs j >= 1, got {j}")));
    }
    Ok(())
}

fn p_pow_checked(e: i64) -> Result<u32> {
    u32::try_from(e).map_err(|_| Error::PrecisionExhausted(format!("negative p-power {e} after scaling")))
}

/// p^scale Xi_{n,j}(f) at level n >= 1 in the working algebra.
fn xi_level(s: &Setup, n: u32, j: i64) -> Result<AElem> {
    let alg = &s.alg;
    let ring = alg.ring();
    let (e, ni) = (s.scale as i64, n as i64);
    let mut out = alg.zero();
    for k in 0..ni {
        let ak: Vec<Vec<u64>> = s.a.iter().map(|c| ring.frob_pow_raw(c, k - ni)).collect();
        let ev = alg.eval_binomial(&ak, (ni - k) as u32);
        out = alg.add(&out, &alg.mul_p_pow(&ev, p_pow_checked(e + ni * (j - 1) - j * k)?));
    }
    let g = geometric_inverse(ring, &ring.frob_pow_raw(&s.f0, -1), j);
    let last = alg.mul_p_pow(&alg.constant(&g), p_pow_checked(e + j - ni)?);
    Ok(alg.sub(&out, &last))
}

/// Brute-force Xi_{n,j}(f) from the defining sum; the n = 0 value is the trace of the n = 1 value.
pub fn xi_specialize(f: &TruncatedSeries, n: u32, j: i64, work: u32) -> Result<XiValue> {
    check_j(j)?;
    let s = setup(f, n, work)?;
    let x1 = xi_level(&s, n.max(1), j)?;
    let value = if n == 0 {
        let tr = s.alg.reduce(&s.alg.trace_subgroup(&x1, 0));
        s.alg.constant(&tr[0])
    } else {
        x1
    };
    Ok(XiValue { algebra: s.alg, scale: s.scale, value })
}

/// Closed form for the characters of conductor exponent m, as an element y of K_{n,v} with
/// e_chi Xi = e_chi y whenever n_chi = m:
///   m > 0: p^{jm-n} sigma^{-m} f(zeta_{p^m} - 1),
///   m = 0: [K_n:K]^{-1} (1 - p^{j-1} sigma^{-1}) (1 - p^{-j} sigma)^{-1} f(0).
pub fn xi_class_closed(f: &TruncatedSeries, n: u32, j: i64, m: u32, work: u32) -> Result<XiValue> {
    check_j(j)?;
    if m > n {
        return Err(Error::InvalidInput(format!("conductor exponent {m} exceeds level {n}")));
    }
    let s = setup(f, n, work)?;
    let (alg, ring) = (&s.alg, s.alg.ring().clone());
    let (e, ni, p) = (s.scale as i64, n as i64, ring.p());
    let value = if m > 0 {
        let ev = alg.frob_pow(&alg.eval_binomial(&s.a, m), -(m as i64));
        alg.mul_p_pow(&ev, p_pow_checked(e + j * m as i64 - ni)?)
    } else {
        // (1 - p^{-j} sigma)^{-1} = -p^j sigma^{-1} (1 - p^j sigma^{-1})^{-1}
        let g = ring.frob_pow_raw(&geometric_inverse(&ring, &s.f0, j), -1);
        let corr = ring.scale_raw(&ring.frob_pow_raw(&g, -1), ipow(p, (j - 1) as u32) % ring.modulus_pn());
        let y = ring.sub_raw(&g, &corr);
        if n == 0 {
            alg.mul_p_pow(&alg.scale_int(&alg.constant(&y), -1), p_pow_checked(e + j)?)
        } else {
            let c = alg.scale_int(&alg.constant(&y), -(alg.unit_inverse(p - 1)? as i64));
            alg.mul_p_pow(&c, p_pow_checked(e + j - ni + 1)?)
        }
    };
    Ok(XiValue { algebra: s.alg, scale: s.scale, value })
}

/// One conductor class of the Xi interpolation comparison.
#[derive(Clone, Debug, Serialize)]
pub struct XiClassReport {
    pub p: u64,
    pub r: usize,
    pub n: u32,
    pub j: i64,
    pub n_chi: u32,
    pub characters: u64,
    pub precision_exponent: i64,
    pub equal: bool,
}

fn class_count(p: u64, m: u32) -> u64 {
    match m {
        0 => 1,
        _ => euler_phi(ipow(p, m)) - euler_phi(ipow(p, m - 1)),
    }
}

/// Compare e_chi Xi_{n,j}(f) with the closed form for every chi of (Z/p^n)^x, grouped by
/// conductor exponent, modulo p^{N - jn}. Returns one report per class.
pub fn xi_interpolation_check(f: &TruncatedSeries, n: u32, j: i64) -> Result<Vec<XiClassReport>> {
    let ring = f.ring();
    let t = ring.precision() as i64 - j * n as i64;
    let work = (ring.precision() + 2 * n + 2).max(3);
    let brute = xi_specialize(f, n, j, work)?;
    let alg = &brute.algebra;
    let mut out = Vec::new();
    for m in 0..=n {
        let closed = xi_class_closed(f, n, j, m, work)?;
        let diff = alg.sub(&brute.value, &closed.value);
        let equal = if t <= 0 {
            true
        } else if n == 0 {
            alg.divisible_by_p_pow(&diff, brute.scale + t as u32)?
        } else {
            let (proj, size) = alg.scaled_class_projection(&diff, m);
            alg.divisible_by_p_pow(&proj, brute.scale + t as u32 + vp(size, ring.p()))?
        };
        out.push(XiClassReport {
            p: ring.p(),
            r: ring.degree(),
            n,
            j,
            n_chi: m,
            characters: class_count(ring.p(), m),
            precision_exponent: t.max(0),
            equal,
        });
    }
    Ok(out)
}

/// The finite-level shadow of the D-twist compatibility: with s = 1 - j, evaluating D^s f at
/// zeta_{p^m} - 1 agrees mod p^m with twisting the coordinates of f(zeta_{p^m} - 1) on the
/// basis zeta^a by a^s. Also checks D^1 against the differential operator on series.
pub fn d_twist_check(f: &TruncatedSeries, m: u32, j: i64) -> Result<bool> {
    let ring = f.ring();
    let a = r_representative(f)?;
    let s = 1 - j;
    let ds = d_power(ring, &a, s)?;
    let d1 = from_binomial_basis(ring, &d_power(ring, &a, 1)?);
    let ok_d = d1.truncate(f.precision() - 1) == f.d_op();
    let alg = CycloAlgebra::new(ring.clone(), m);
    let lhs = alg.eval_binomial(&ds, m);
    let ev = alg.eval_binomial(&a, m);
    let pm = ipow(ring.p(), m);
    let twisted: AElem = ev
        .iter()
        .enumerate()
        .map(|(k, c)| {
            if (k as u64).is_multiple_of(ring.p()) {
                return c.clone();
            }
            let base = if s >= 0 { k as u64 } else { inv_mod(k as u64, pm).unwrap() };
            ring.scale_raw(c, crate::algebra_core::arith::pow_mod(base, s.unsigned_abs(), pm))
        })
        .collect();
    let diff = alg.sub(&lhs, &twisted);
    Ok(ok_d && diff.iter().all(|c| c.iter().all(|x| x % pm == 0)))
}

// ---------------------------------------------------------------------------------------
// exact path over Q(zeta_{p^n}) for r = 1

/// Spec-shaped report for one character on the exact path.
#[derive(Clone, Debug, Serialize)]
pub struct SpecializationReport {
    pub n: u32,
    pub j: i64,
    pub chi: Vec<u64>,
    pub brute_force: CyclotomicNumber,
    pub closed_form: CyclotomicNumber,
    pub equal_at_precision: bool,
    pub precision: (usize, u32),
}

fn int_coords(f: &TruncatedSeries) -> Result<Vec<i64>> {
    if f.ring().degree() != 1 {
        return Err(Error::Unsupported("the exact cyclotomic path needs r = 1".into()));
    }
    let m = f.ring().modulus_pn();
    Ok(r_representative(f)?.iter().map(|c| signed_rep(c[0], m)).collect())
}

fn eval_exact(a: &[i64], p: u64, m: u32) -> CyclotomicNumber {
    let pm = ipow(p, m);
    let mut counts = vec![0i64; pm as usize];
    for (k, &c) in a.iter().enumerate() {
        counts[k % pm as usize] += c;
    }
    CyclotomicNumber::from_int_counts(pm, counts)
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn p_pow_rat(p: u64, e: i64) -> BigRational {
    let b = BigRational::from_integer(BigInt::from(p));
    if e >= 0 {
        num_traits::pow(b, e as usize)
    } else {
        BigRational::one() / num_traits::pow(b, (-e) as usize)
    }
}

/// Xi_{n,j}(f) in Q(zeta_{p^n}) from the defining sum (r = 1, so sigma acts trivially).
pub fn xi_specialize_exact(f: &TruncatedSeries, n: u32, j: i64) -> Result<CyclotomicNumber> {
    check_j(j)?;
    let a = int_coords(f)?;
    let p = f.ring().p();
    let level = n.max(1) as i64;
    let f0: i64 = a.iter().sum();
    let mut acc = CyclotomicNumber::zero();
    for k in 0..level {
        acc = acc.add(&eval_exact(&a, p, (level - k) as u32).scale(&p_pow_rat(p, -j * k)));
    }
    let geo = BigRational::one() / (BigRational::one() - p_pow_rat(p, j));
    let last = geo * BigRational::from_integer(f0.into()) * p_pow_rat(p, -j * (level - 1));
    let x1 = acc.sub(&CyclotomicNumber::from_rational(last)).scale(&p_pow_rat(p, level * (j - 1)));
    if n == 0 {
        // Tr_{Q(zeta_p)/Q} as a sum of conjugates (x1 may be stored at a smaller order)
        Ok((1..p as i64).fold(CyclotomicNumber::zero(), |s, a| s.add(&x1.galois(a))))
    } else {
        Ok(x1)
    }
}

/// The image of e_chi x under the fixed embedding: (1/#G) sum_a chi(a) sigma_a^{-1}(x).
pub fn chi_component(x: &CyclotomicNumber, chi: &DirichletCharacter, units: &UnitsModN) -> CyclotomicNumber {
    let size = units.units().len() as i64;
    let n = units.modulus();
    let mut acc = CyclotomicNumber::zero();
    for &a in units.units() {
        let ainv = inv_mod(a, n).unwrap_or(1) as i64;
        acc = acc.add(&chi.value(units, a as i64).mul(&x.galois(ainv)));
    }
    acc.scale(&q(1, size))
}

/// Conductor exponent of a character mod p^n.
pub fn conductor_exponent(chi: &DirichletCharacter, units: &UnitsModN, p: u64) -> u32 {
    vp(chi.conductor(units), p)
}

/// The closed form of e_chi Xi_{n,j}(f) (r = 1).
pub fn xi_chi_closed(f: &TruncatedSeries, n: u32, j: i64, chi: &DirichletCharacter) -> Result<CyclotomicNumber> {
    check_j(j)?;
    let a = int_coords(f)?;
    let p = f.ring().p();
    let units = UnitsModN::new(ipow(p, n));
    let m = conductor_exponent(chi, &units, p);
    if m > 0 {
        let ev = eval_exact(&a, p, m);
        return Ok(chi_component(&ev, chi, &units).scale(&p_pow_rat(p, j * m as i64 - n as i64)));
    }
    if !chi.chi.is_trivial() {
        return Ok(CyclotomicNumber::zero());
    }
    let f0 = BigRational::from_integer(a.iter().sum::<i64>().into());
    let deg = BigRational::from_integer(BigInt::from(euler_phi(ipow(p, n))));
    let ratio = (BigRational::one() - p_pow_rat(p, j - 1)) / (BigRational::one() - p_pow_rat(p, -j));
    Ok(CyclotomicNumber::from_rational(ratio * f0 / deg))
}

/// Exact per-character comparison of both sides for r = 1.
pub fn xi_exact_reports(f: &TruncatedSeries, n: u32, j: i64) -> Result<Vec<SpecializationReport>> {
    let p = f.ring().p();
    let units = UnitsModN::new(ipow(p, n));
    let brute = xi_specialize_exact(f, n, j)?;
    units
        .characters()
        .iter()
        .map(|chi| {
            let lhs = chi_component(&brute, chi, &units);
            let rhs = xi_chi_closed(f, n, j, chi)?;
            Ok(SpecializationReport {
                n,
                j,
                chi: chi.chi.exps().to_vec(),
                equal_at_precision: lhs == rhs,
                brute_force: lhs,
                closed_form: rhs,
                precision: (f.precision(), f.ring().precision()),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra_core::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn one_plus_t(p: u64, n: u32, m: usize) -> TruncatedSeries {
        let ring = UnramifiedRing::new(p, 1, n).unwrap();
        TruncatedSeries::from_ints(&ring, &[1, 1]).truncate(m)
    }

    #[test]
    fn hand_checked_value() {
        // p = 3, f = 1 + T, n = 1, j = 2, trivial character
        let f = one_plus_t(3, 12, 8);
        let units = UnitsModN::new(3);
        let triv = units.characters().into_iter().find(|c| c.chi.is_trivial()).unwrap();
        let brute = chi_component(&xi_specialize_exact(&f, 1, 2).unwrap(), &triv, &units);
        assert_eq!(brute, CyclotomicNumber::from_rational(rat(-9, 8)));
        assert_eq!(xi_chi_closed(&f, 1, 2, &triv).unwrap(), brute);
    }

    #[test]
    fn binomial_round_trip() {
        let ring = UnramifiedRing::new(5, 2, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = random_r_element(&mut rng, &ring, 20);
        assert!(f.r_membership());
        let a = r_representative(&f).unwrap();
        assert_eq!(from_binomial_basis(&ring, &a), f);
        assert!(r_representative(&TruncatedSeries::one(&ring, 20)).is_err());
    }

    #[test]
    fn exact_path_all_characters() {
        let ring = UnramifiedRing::new(3, 1, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..3 {
            let f = random_r_element(&mut rng, &ring, 12);
            for n in 0..=2 {
                for j in 1..=3 {
                    for rep in xi_exact_reports(&f, n, j).unwrap() {
                        assert!(rep.equal_at_precision, "n={n} j={j} {rep:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn auxiliary_vanishing() {
        // f in R, trivial character of (Z/p)^x: e f(zeta_p - 1) = -f(0)/(p-1)
        let ring = UnramifiedRing::new(5, 1, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_r_element(&mut rng, &ring, 10);
        let a = int_coords(&f).unwrap();
        let units = UnitsModN::new(5);
        let triv = units.characters().into_iter().find(|c| c.chi.is_trivial()).unwrap();
        let lhs = chi_component(&eval_exact(&a, 5, 1), &triv, &units);
        let f0: i64 = a.iter().sum();
        assert_eq!(lhs, CyclotomicNumber::from_rational(rat(-f0, 4)));
    }

    #[test]
    fn padic_classes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (p, r) in [(3u64, 1usize), (3, 2), (5, 1), (5, 2)] {
            let ring = UnramifiedRing::new(p, r, 12).unwrap();
            for _ in 0..3 {
                let f = random_r_element(&mut rng, &ring, 24);
                for n in 0..=2 {
                    for j in 1..=3 {
                        for rep in xi_interpolation_check(&f, n, j).unwrap() {
                            assert!(rep.equal, "{rep:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn padic_matches_exact_path() {
        let ring = UnramifiedRing::new(3, 1, 10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = random_r_element(&mut rng, &ring, 12);
        for n in 0..=2 {
            let exact = xi_specialize_exact(&f, n, 2).unwrap();
            let padic = xi_specialize(&f, n, 2, 16).unwrap();
            let coords = padic.coordinates();
            let pn = ipow(3, n);
            let want = exact.coeffs_at(pn.max(1));
            // the two paths lift f from mod 3^10 differently
            let modulus = BigRational::from_integer(BigInt::from(ipow(3, 8)));
            for (c, w) in coords.iter().zip(want.iter()) {
                let d = (&c[0] - w) / &modulus;
                assert!(d.denom() % BigInt::from(3) != BigInt::from(0), "n={n}: {} vs {}", c[0], w);
            }
        }
    }

    #[test]
    fn a_wrong_closed_form_is_caught() {
        // dropping the Euler-type factor at n_chi = 0 must fail
        let ring = UnramifiedRing::new(3, 1, 12).unwrap();
        let f = TruncatedSeries::from_ints(&ring, &[1, 1]).truncate(8);
        let brute = xi_specialize(&f, 1, 2, 16).unwrap();
        let alg = &brute.algebra;
        let wrong = alg.constant(&[1]);
        let (proj, size) = alg.scaled_class_projection(&alg.sub(&brute.value, &wrong), 0);
        assert!(!alg.divisible_by_p_pow(&proj, brute.scale + 8 + vp(size, 3)).unwrap());
    }

    #[test]
    fn d_twist_shadow() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let ring = UnramifiedRing::new(5, 2, 8).unwrap();
        for _ in 0..5 {
            let f = random_r_element(&mut rng, &ring, 16);
            for j in 1..=3 {
                assert!(d_twist_check(&f, 2, j).unwrap());
            }
        }
    }
}
