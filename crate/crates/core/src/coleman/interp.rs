use crate::algebra_core::arith::{euler_phi, ipow};
use crate::algebra_core::{rat, CyclotomicNumber};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

/// What the interpolation formulas need to know about a character chi of G_{K_n} at a place v
/// above p: the level n_chi it factors through, chi(sigma_v) for the arithmetic Frobenius, whether
/// chi kills the decomposition group, and the local data N(v), [K_w : k_v].
#[derive(Clone, Debug, Serialize)]
pub struct LocalCharacterData {
    pub p: u64,
    pub norm: u64,
    pub n_chi: u32,
    pub frobenius_value: CyclotomicNumber,
    pub trivial_on_decomposition: bool,
    pub local_degree: u64,
}

fn int(n: i64) -> CyclotomicNumber {
    CyclotomicNumber::from_int(n)
}

fn q_pow(b: u64, e: i64) -> CyclotomicNumber {
    let base = BigRational::from_integer(BigInt::from(b));
    let v = if e >= 0 { num_traits::pow(base, e as usize) } else { BigRational::one() / num_traits::pow(base, (-e) as usize) };
    CyclotomicNumber::from_rational(v)
}

fn sign(e: i64) -> CyclotomicNumber {
    int(if e.rem_euclid(2) == 0 { 1 } else { -1 })
}

fn factorial(k: i64) -> i64 {
    (1..=k).product()
}

/// [K_n : K_m] for the cyclotomic tower, with K_0 = K.
pub fn tower_degree(p: u64, n: u32, m: u32) -> u64 {
    euler_phi(ipow(p, n)) / euler_phi(ipow(p, m))
}

fn prefix(j: i64, r: u32) -> CyclotomicNumber {
    sign(r as i64 * (j - 1)).mul(&int(factorial(j - 1)).pow(r as i64).unwrap())
}

fn check(n: u32, j: i64, chi: &LocalCharacterData) -> Result<()> {
    if j < 1 {
        return Err(Error::InvalidInput(format!("interpolation needs j >= 1, got {j}")));
    }
    if chi.n_chi > n {
        return Err(Error::InvalidInput(format!("n_chi = {} exceeds n = {n}", chi.n_chi)));
    }
    Ok(())
}

/// (1 - N^{j-1} s^{-1}) / (1 - N^{-j} s) at s = chi(sigma).
fn euler_ratio(norm: u64, j: i64, s: &CyclotomicNumber) -> Result<CyclotomicNumber> {
    let one = CyclotomicNumber::one();
    let num = one.sub(&q_pow(norm, j - 1).mul(&s.inv()?));
    let den = one.sub(&q_pow(norm, -j).mul(s));
    num.div(&den)
}

/// The scalar c with varpi_n(wedge f_i)^chi = c (wedge f_i(zeta_{p^{n_chi}} - 1))^chi for
/// n_chi > 0, and c (wedge f_i(0))^chi for n_chi = 0. The Frobenius power acting on the wedge
/// is replaced by its chi-value.
pub fn interpolation_factor(n: u32, j: i64, chi: &LocalCharacterData, r: u32) -> Result<CyclotomicNumber> {
    check(n, j, chi)?;
    let (p, m) = (chi.p, chi.n_chi);
    let deg = q_pow(tower_degree(p, n, m), -(r as i64));
    let head = prefix(j, r).mul(&deg);
    let s = &chi.frobenius_value;
    let tail = if m > 0 {
        sign(m as i64 * (r as i64 - 1))
            .mul(&q_pow(p, (r * m) as i64 * (j - 1)))
            .mul(&s.pow(-(m as i64))?)
    } else if j != 1 || !chi.trivial_on_decomposition {
        euler_ratio(chi.norm, j, s)?
    } else {
        let one = CyclotomicNumber::one();
        one.sub(&q_pow(chi.norm, -1)).mul(&int(chi.local_degree as i64)).inv()?
    };
    Ok(head.mul(&tail))
}

/// The scalar c with varpi_n(wedge x_i (1+T))^chi = c (wedge a_n x_i)^chi, where a_n is the
/// trace-compatible system (zeta_p + ... + zeta_{p^n})/p^{n-1}, a_0 = -1.
pub fn normalized_interpolation_factor(n: u32, j: i64, chi: &LocalCharacterData, r: u32) -> Result<CyclotomicNumber> {
    check(n, j, chi)?;
    let m = chi.n_chi;
    let s = &chi.frobenius_value;
    let body = if m > 0 {
        sign(m as i64 * (r as i64 - 1)).mul(&q_pow(chi.norm, j * m as i64 - 1)).mul(&s.pow(-(m as i64))?)
    } else {
        let one = CyclotomicNumber::one();
        let ratio = if j != 1 {
            euler_ratio(chi.norm, j, s)?
        } else {
            // delta^# / eps^1 at chi (chi unramified)
            let d = if chi.trivial_on_decomposition { rat(1, chi.local_degree as i64) } else { rat(0, 1) };
            let num = one.sub(&s.inv()?).add(&CyclotomicNumber::from_rational(d));
            num.div(&one.sub(&q_pow(chi.norm, -1).mul(s)))?
        };
        sign(r as i64).mul(&ratio)
    };
    Ok(prefix(j, r).mul(&body))
}

/// The scalar c with (wedge a_n x_i)^chi = c (wedge zeta_{p^{n_chi}} x_i)^chi for n_chi > 0 and
/// c (wedge x_i)^chi for n_chi = 0.
pub fn a_n_conversion(p: u64, n: u32, n_chi: u32, r: u32) -> CyclotomicNumber {
    if n_chi > 0 {
        q_pow(p, -((r * (n - 1)) as i64))
    } else {
        sign(r as i64).mul(&q_pow(tower_degree(p, n, 0), -(r as i64)))
    }
}

/// a_n as an element of Q(zeta_{p^n}).
pub fn a_n(p: u64, n: u32) -> CyclotomicNumber {
    if n == 0 {
        return int(-1);
    }
    (1..=n)
        .fold(CyclotomicNumber::zero(), |s, k| s.add(&CyclotomicNumber::root_of_unity(ipow(p, k), 1)))
        .mul(&q_pow(p, -(n as i64 - 1)))
}
