use super::arch::{arch_constant, ArchData, ComplexJson};
use crate::algebra_core::arith::{crt, gcd, ipow};
use crate::algebra_core::{rat, CycloGroupRing, CyclotomicNumber, DirichletCharacter, UnitsModN};
use crate::coleman::interp::a_n;
use crate::error::{Error, Result};
use crate::gauss_sums::global::DirichletLocal;
use crate::gauss_sums::equivariant_gauss_sum_global;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// B_{K/Q}(x) = sum_sigma iota(x^sigma) sigma^{-1} for K = Q(zeta_m), G = (Z/m)^x, with iota fixed
/// by zeta_m -> exp(2 pi i/m). Over Q the determinant is 1x1.
pub fn period_matrix_b(units: &UnitsModN, x: &CyclotomicNumber) -> Result<CycloGroupRing> {
    let m = units.modulus();
    if !m.is_multiple_of(x.order()) && !(x.order() == 2 && m % 2 == 1) {
        return Err(Error::DimensionMismatch(format!("element of Q(zeta_{}) is not in Q(zeta_{m})", x.order())));
    }
    let g = units.group().clone();
    let mut coeffs = vec![CyclotomicNumber::zero(); g.size()];
    for (i, &a) in units.units().iter().enumerate() {
        coeffs[g.inv_index(i)] = x.galois(a as i64);
    }
    CycloGroupRing::from_coeffs(g, coeffs)
}

/// The trace-form element sum_sigma Tr_{K/Q}(x^{sigma^{-1}} x) sigma.
pub fn gram_element(units: &UnitsModN, x: &CyclotomicNumber) -> Result<CycloGroupRing> {
    let g = units.group().clone();
    let m = units.modulus() as i64;
    let coeffs = units
        .units()
        .iter()
        .enumerate()
        .map(|(i, _)| {
            let inv = units.residue_of_index(g.inv_index(i)) as i64;
            CyclotomicNumber::from_rational(trace_to_q(&x.galois(inv).mul(x), m as u64))
        })
        .collect();
    CycloGroupRing::from_coeffs(g, coeffs)
}

/// Tr_{Q(zeta_m)/Q}(y) as the sum of the conjugates.
fn trace_to_q(y: &CyclotomicNumber, m: u64) -> num_rational::BigRational {
    let t = (1..=m)
        .filter(|&a| gcd(a, m) == 1)
        // an odd representative keeps a a unit when y carries zeta_{2m}
        .map(|a| if a % 2 == 0 { a + m } else { a })
        .fold(CyclotomicNumber::zero(), |s, a| s.add(&y.galois(a as i64)));
    t.as_rational().cloned().expect("a full Galois orbit sum is rational")
}

/// Normal-basis generators for Q(zeta_m): zeta_m for prime m, and
/// zeta_9 + zeta_3/3 for m = 9 (zeta_9 alone has trace zero to Q(zeta_3)).
pub fn normal_basis_generator(m: u64) -> Result<CyclotomicNumber> {
    match m {
        9 => Ok(CyclotomicNumber::root_of_unity(9, 1).add(&CyclotomicNumber::root_of_unity(3, 1).scale(&rat(1, 3)))),
        m if crate::algebra_core::arith::is_prime(m) => Ok(CyclotomicNumber::root_of_unity(m, 1)),
        _ => Err(Error::Unsupported(format!("no stored normal-basis generator for m = {m}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodReport {
    pub m: u64,
    /// B B^# equals the trace-form element
    pub gram_identity: bool,
    /// the trace-form element is sum_chi chi(-1) f_chi e_chi
    pub gram_conductors: bool,
    /// B = tau_{K/Q} prod_v f_v^#, i.e. chi-wise tau(chi) away from the trivial character and -1 at it
    pub gauss_factorization: bool,
    pub pass: bool,
}

/// The exact identities for B on the stored normal-basis data of Q(zeta_m)/Q.
pub fn period_b_check(m: u64) -> Result<PeriodReport> {
    let units = UnitsModN::new(m);
    let x = normal_basis_generator(m)?;
    let b = period_matrix_b(&units, &x)?;
    let gram = gram_element(&units, &x)?;
    let gram_identity = b.mul(&b.involution()) == gram;
    let chars = units.characters();
    let conductors: Vec<CyclotomicNumber> = chars
        .iter()
        .map(|c| {
            let s = if c.is_odd(&units) { -1 } else { 1 };
            CyclotomicNumber::from_int(s * c.conductor(&units) as i64)
        })
        .collect();
    let gram_conductors = gram == CycloGroupRing::from_chi_components(units.group().clone(), &conductors);
    // f_v for v | m: inertia is all of G, so f_v^# is -chi(sigma_v)^{-1} = -1 on the trivial
    // character and 1 elsewhere
    let euler: Vec<CyclotomicNumber> =
        chars.iter().map(|c| CyclotomicNumber::from_int(if c.chi.is_trivial() { -1 } else { 1 })).collect();
    let want = equivariant_gauss_sum_global(&units).mul(&CycloGroupRing::from_chi_components(units.group().clone(), &euler));
    let gauss_factorization = b == want;
    Ok(PeriodReport { m, gram_identity, gram_conductors, gauss_factorization, pass: gram_identity && gram_conductors && gauss_factorization })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BAnReport {
    pub l: u64,
    pub p: u64,
    pub n: u32,
    pub n_chi: u32,
    pub exps: Vec<u64>,
    /// sum_sigma iota(a_n^sigma) chi(sigma)^{-1} = p^{1 - n_chi} tau_Q(chi_2), chi_2 the p-part
    pub internal_identity: bool,
    pub pass: bool,
}

/// The unit of (Z/lp^n)^x congruent to u mod l and to v mod p^n.
fn glue(u: u64, l: u64, v: u64, pn: u64) -> u64 {
    crt(&[(u % l, l), (v % pn, pn)]).0
}

/// B_{K_n/Q}(a_n x)^chi against the closed form, for K = Q(zeta_l), K_n = K(zeta_{p^n}), x in K.
pub fn b_an_check(l: u64, p: u64, n: u32, x: &CyclotomicNumber, chi: &DirichletCharacter) -> Result<BAnReport> {
    if gcd(l, p) != 1 {
        return Err(Error::InvalidInput("l must be prime to p".into()));
    }
    let pn = ipow(p, n);
    let units = UnitsModN::new(l * pn);
    if chi.modulus != l * pn {
        return Err(Error::DimensionMismatch("character modulus must be l p^n".into()));
    }
    let an = a_n(p, n);
    let chibar = chi.inverse();
    // brute force over G
    let lhs = units.units().iter().fold(CyclotomicNumber::zero(), |s, &a| {
        s.add(&an.mul(x).galois(a as i64).mul(&chibar.value(&units, a as i64)))
    });
    // B_K(x)^{chi_1}: chi restricted along (Z/l)^x -> (Z/lp^n)^x, u -> (u, 1)
    let b1 = (1..=l.max(1)).filter(|&u| gcd(u, l) == 1).fold(CyclotomicNumber::zero(), |s, u| {
        let a = glue(u, l, 1, pn);
        s.add(&x.galois(u as i64).mul(&chibar.value(&units, a as i64)))
    });
    let local = DirichletLocal::new(&units, chi, p);
    let n_chi = if n == 0 { 0 } else { local.conductor_exponent() };
    let rhs = if n_chi == 0 {
        b1.neg()
    } else {
        // chi(sigma_{K_n, p}) = chi_1(p)
        let frob = chi.value(&units, glue(p, l, 1, pn) as i64);
        b1.mul(&local.gauss_sum()).mul(&frob.pow(n_chi as i64)?).scale(&rat(1, ipow(p, n_chi - 1) as i64))
    };
    // the Gauss-sum identity for a_n alone
    let s = units.units().iter().filter(|&&a| a % l.max(1) == 1 % l.max(1)).fold(CyclotomicNumber::zero(), |s, &a| {
        s.add(&an.galois(a as i64).mul(&chibar.value(&units, a as i64)))
    });
    let internal = if n_chi == 0 {
        CyclotomicNumber::from_int(-1)
    } else {
        let pc = ipow(p, n_chi);
        let tau2 = (1..pc).filter(|v| v % p != 0).fold(CyclotomicNumber::zero(), |t, v| {
            t.add(&chibar.value(&units, glue(1, l, v, pn) as i64).mul(&CyclotomicNumber::root_of_unity(pc, v as i64)))
        });
        tau2.scale(&rat(1, ipow(p, n_chi - 1) as i64))
    };
    let internal_identity = s == internal;
    Ok(BAnReport { l, p, n, n_chi, exps: chi.chi.exps().to_vec(), internal_identity, pass: internal_identity && lhs == rhs })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WedgeAlphaReport {
    pub m: u64,
    pub j: i64,
    pub exps: Vec<u64>,
    pub wedge: ComplexJson,
    pub expected: ComplexJson,
    pub rel_err: f64,
}

/// alpha(x) coefficient (2 Re z - pi Im z) for even j and (2i Im z + pi i Re z) for odd j,
/// z = iota(x), before the common factor 1/(2 pi i)^j.
pub fn alpha_weight(z: Complex64, j: i64) -> Complex64 {
    let pi = std::f64::consts::PI;
    if j % 2 == 0 {
        Complex64::new(2.0 * z.re - pi * z.im, 0.0)
    } else {
        Complex64::new(0.0, 2.0 * z.im + pi * z.re)
    }
}

/// The chi-part of the alpha-images of x against A(Q, chi, j) B(x)^chi, both over (2 pi i)^j.
pub fn wedge_alpha_check(m: u64, x: &CyclotomicNumber, j: i64, chi: &DirichletCharacter) -> Result<WedgeAlphaReport> {
    let units = UnitsModN::new(m);
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI).powi(j as i32);
    let chibar = chi.inverse();
    let wedge: Complex64 = units
        .units()
        .iter()
        .map(|&a| alpha_weight(x.galois(a as i64).to_complex(), j) * chibar.value(&units, a as i64).to_complex())
        .sum::<Complex64>()
        / two_pi_i;
    let b = period_matrix_b(&units, x)?.chi_component(&chi.chi).to_complex();
    let expected = arch_constant(&ArchData::rational(chi.is_odd(&units)), j).to_complex() * b / two_pi_i;
    let scale = expected.norm().max(wedge.norm());
    if b.norm() < 1e-12 {
        return Err(Error::PrecisionExhausted("chi-part of B vanishes".into()));
    }
    let rel_err = (wedge - expected).norm() / scale;
    Ok(WedgeAlphaReport { m, j, exps: chi.chi.exps().to_vec(), wedge: wedge.into(), expected: expected.into(), rel_err })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_extension() {
        let u = UnitsModN::new(1);
        let x = CyclotomicNumber::from_rational(rat(3, 2));
        let b = period_matrix_b(&u, &x).unwrap();
        assert_eq!(b.coeffs()[0], x);
    }

    #[test]
    fn gram_and_factorization() {
        for m in [5u64, 7, 9] {
            let r = period_b_check(m).unwrap();
            assert!(r.pass, "{:?}", r);
        }
    }

    #[test]
    fn gram_brute_force_trace() {
        // independent trace: sum of all conjugates evaluated numerically
        let u = UnitsModN::new(7);
        let x = CyclotomicNumber::root_of_unity(7, 1).add(&CyclotomicNumber::from_int(2));
        let g = gram_element(&u, &x).unwrap();
        for (i, &a) in u.units().iter().enumerate() {
            let inv = u.residue_of_index(u.group().inv_index(i)) as i64;
            let y = x.galois(inv).mul(&x);
            let t: f64 = (1..7).map(|b| y.galois(b).to_complex().re).sum();
            assert!((g.coeffs()[i].to_complex().re - t).abs() < 1e-12, "a={a}");
        }
    }

    #[test]
    fn scaling_multiplies_b() {
        let u = UnitsModN::new(5);
        let x = CyclotomicNumber::root_of_unity(5, 1);
        let lam = CyclotomicNumber::from_rational(rat(-3, 4));
        let b = period_matrix_b(&u, &x).unwrap();
        let bl = period_matrix_b(&u, &x.mul(&lam)).unwrap();
        assert_eq!(bl, b.scale(&lam));
    }

    #[test]
    fn b_an_small_cases() {
        let one = CyclotomicNumber::one();
        for p in [3u64, 5] {
            for n in 0..=3u32 {
                let units = UnitsModN::new(ipow(p, n));
                for chi in units.characters() {
                    let r = b_an_check(1, p, n, &one, &chi).unwrap();
                    assert!(r.pass, "{:?}", r);
                }
            }
        }
        // nontrivial K: l = 4 and l = 7
        for (l, p, n) in [(4u64, 3u64, 2u32), (4, 5, 1), (7, 3, 1), (7, 5, 1)] {
            let x = normal_basis_generator_or_zeta(l);
            let units = UnitsModN::new(l * ipow(p, n));
            for chi in units.characters() {
                let r = b_an_check(l, p, n, &x, &chi).unwrap();
                assert!(r.pass, "{:?}", r);
            }
        }
    }

    fn normal_basis_generator_or_zeta(l: u64) -> CyclotomicNumber {
        normal_basis_generator(l).unwrap_or_else(|_| CyclotomicNumber::root_of_unity(l, 1))
    }

    #[test]
    fn b_an_first_level() {
        // K = Q, p = 3, n = 1, chi of conductor 3: a_1 = zeta_3, B = zeta_3 - zeta_3^2 = tau
        let u = UnitsModN::new(3);
        let chi = u.characters().into_iter().find(|c| !c.chi.is_trivial()).unwrap();
        let r = b_an_check(1, 3, 1, &CyclotomicNumber::one(), &chi).unwrap();
        assert_eq!(r.n_chi, 1);
        assert!(r.pass);
    }

    #[test]
    fn wedge_alpha() {
        for m in [1u64, 5, 7, 9, 12] {
            let units = UnitsModN::new(m);
            let x = if m == 1 { CyclotomicNumber::one() } else { normal_basis_generator_or_zeta(m).add(&CyclotomicNumber::from_int(1)) };
            for chi in units.characters() {
                for j in 1..=4 {
                    match wedge_alpha_check(m, &x, j, &chi) {
                        Ok(r) => assert!(r.rel_err < 1e-12, "{:?}", r),
                        Err(Error::PrecisionExhausted(_)) => {}
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
        // x = 1, j = 2, trivial chi over Q: 2/(2 pi i)^2
        let u = UnitsModN::new(1);
        let r = wedge_alpha_check(1, &CyclotomicNumber::one(), 2, &u.characters()[0]).unwrap();
        let pi = std::f64::consts::PI;
        assert!((r.wedge.re + 2.0 / (4.0 * pi * pi)).abs() < 1e-15);
    }
}
