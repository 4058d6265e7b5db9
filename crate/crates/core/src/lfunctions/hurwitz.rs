use super::bernoulli::bernoulli_numbers;
use crate::algebra_core::arith::gcd;
use crate::algebra_core::{DirichletCharacter, UnitsModN};
use crate::error::{Error, Result};
use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Terms summed directly before switching to Euler-Maclaurin.
const DIRECT_TERMS: u64 = 10;
/// Number of Bernoulli correction terms.
const EM_TERMS: usize = 25;
/// Largest admissible remainder bound per Hurwitz evaluation.
pub const TAIL_TOLERANCE: f64 = 1e-15;
/// Working precision in bits. The direct sum and the pole term cancel to many digits at s <= 0,
/// so f64 is not enough there.
const PREC: usize = 128;
const RM: RoundingMode = RoundingMode::ToEven;

/// A value together with its derivative in s.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual {
    pub v: f64,
    pub d: f64,
}

struct Hp {
    cc: Consts,
}

thread_local! {
    static HP: std::cell::RefCell<Option<Hp>> = const { std::cell::RefCell::new(None) };
}

impl Hp {
    fn new() -> Result<Self> {
        Ok(Self { cc: Consts::new().map_err(|e| Error::PrecisionExhausted(format!("{e:?}")))? })
    }

    /// Runs `f` with this thread's constant cache.
    fn with<T>(f: impl FnOnce(&mut Hp) -> T) -> Result<T> {
        HP.with(|cell| {
            let mut slot = cell.borrow_mut();
            if slot.is_none() {
                *slot = Some(Hp::new()?);
            }
            Ok(f(slot.as_mut().unwrap()))
        })
    }

    fn num(x: f64) -> BigFloat {
        BigFloat::from_f64(x, PREC)
    }

    fn int(x: i64) -> BigFloat {
        BigFloat::from_i64(x, PREC)
    }

    fn ln(&mut self, x: &BigFloat) -> BigFloat {
        x.ln(PREC, RM, &mut self.cc)
    }

    fn exp(&mut self, x: &BigFloat) -> BigFloat {
        x.exp(PREC, RM, &mut self.cc)
    }

    fn f64_of(&mut self, x: &BigFloat) -> f64 {
        let s = x.format(Radix::Dec, RM, &mut self.cc).unwrap_or_else(|_| "NaN".into());
        s.parse().unwrap_or(f64::NAN)
    }

    fn rational(&mut self, q: &num_rational::BigRational) -> BigFloat {
        let n = BigFloat::parse(&q.numer().to_string(), Radix::Dec, PREC, RM, &mut self.cc);
        let d = BigFloat::parse(&q.denom().to_string(), Radix::Dec, PREC, RM, &mut self.cc);
        n.div(&d, PREC, RM)
    }
}

fn add(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.add(b, PREC, RM)
}

fn sub(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.sub(b, PREC, RM)
}

fn mul(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.mul(b, PREC, RM)
}

fn div(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.div(b, PREC, RM)
}

/// B_{2m} / (2m)! for m = 1..=EM_TERMS at working precision.
fn em_coefficients() -> &'static [BigFloat] {
    static C: OnceLock<Vec<BigFloat>> = OnceLock::new();
    C.get_or_init(|| {
        let mut hp = Hp::new().expect("constant cache");
        let b = bernoulli_numbers(2 * EM_TERMS);
        let mut fact = num_rational::BigRational::from_integer(1.into());
        let mut out = Vec::new();
        for k in 1..=2 * EM_TERMS {
            fact *= num_rational::BigRational::from_integer(k.into());
            if k % 2 == 0 {
                out.push(hp.rational(&(&b[k] / &fact)));
            }
        }
        out
    })
}

/// Bound on |R| for the remainder at real s, with radius `rho` of slack in Re s and in every
/// factor |s + k| (rho = 0 for the value itself).
fn remainder_bound(s: f64, a: f64, rho: f64) -> f64 {
    let m2 = 2 * EM_TERMS;
    let sigma = s - rho;
    let denom = sigma + m2 as f64 - 1.0;
    if denom <= 0.0 {
        return f64::INFINITY;
    }
    // |B~_{2M}(x)| <= 2 zeta(2M) (2M)!/(2 pi)^{2M} <= 4 (2M)!/(2 pi)^{2M}
    let mut poch = 1.0;
    for k in 0..m2 {
        poch *= ((s + k as f64).abs() + rho) / (2.0 * PI);
    }
    4.0 * poch * (DIRECT_TERMS as f64 + a).powf(1.0 - sigma - m2 as f64) / denom
}

/// zeta(s, a) for real s and a = num/den in (0, 1] with its s-derivative, plus bounds on the
/// truncation error of each. At s = 1 with `finite_part` the pole term is replaced by its
/// constant term.
pub fn hurwitz_dual(s: f64, num: u64, den: u64, finite_part: bool) -> Result<(Dual, f64, f64)> {
    if num == 0 || den == 0 || num > den {
        return Err(Error::InvalidInput("Hurwitz parameter must lie in (0, 1]".into()));
    }
    let at_pole = s == 1.0;
    if at_pole && !finite_part {
        return Err(Error::InvalidInput("zeta(s, a) has a pole at s = 1".into()));
    }
    Hp::with(|hp| hurwitz_hp(hp, s, num, den, at_pole, true))
}

/// y^{-s}, by repeated multiplication when s is an integer.
fn neg_power(hp: &mut Hp, y: &BigFloat, s: f64, ln_y: Option<&BigFloat>) -> BigFloat {
    if s.fract() == 0.0 && s.abs() < 64.0 {
        let p = y.powi(s.abs() as usize, PREC, RM);
        return if s > 0.0 { div(&Hp::int(1), &p) } else { p };
    }
    let l = match ln_y {
        Some(l) => l.clone(),
        None => hp.ln(y),
    };
    hp.exp(&mul(&Hp::num(s), &l).neg())
}

/// Without `deriv` the derivative is returned as zero and no logarithms are taken unless s is
/// not an integer.
fn hurwitz_hp(hp: &mut Hp, s: f64, num: u64, den: u64, at_pole: bool, deriv: bool) -> (Dual, f64, f64) {
    let sb = Hp::num(s);
    let a = div(&Hp::int(num as i64), &Hp::int(den as i64));
    let (mut v, mut d) = (Hp::int(0), Hp::int(0));
    for k in 0..DIRECT_TERMS {
        let y = add(&a, &Hp::int(k as i64));
        let l = if deriv { hp.ln(&y) } else { Hp::int(0) };
        let t = neg_power(hp, &y, s, deriv.then_some(&l));
        v = add(&v, &t);
        d = sub(&d, &mul(&l, &t));
    }
    let x = add(&a, &Hp::int(DIRECT_TERMS as i64));
    let l = if deriv || at_pole { hp.ln(&x) } else { Hp::int(0) };
    // x^{-s}
    let xs = neg_power(hp, &x, s, (deriv || at_pole).then_some(&l));
    if at_pole {
        // x^{1-s}/(s-1) = 1/(s-1) - l + l^2 (s-1)/2 + ...
        v = sub(&v, &l);
        d = add(&d, &div(&mul(&l, &l), &Hp::int(2)));
    } else {
        let sm1 = sub(&sb, &Hp::int(1));
        let w = div(&mul(&x, &xs), &sm1);
        v = add(&v, &w);
        d = sub(&d, &add(&mul(&l, &w), &div(&w, &sm1)));
    }
    let half = div(&xs, &Hp::int(2));
    v = add(&v, &half);
    d = sub(&d, &mul(&l, &half));
    // sum_m B_{2m}/(2m)! (s)_{2m-1} x^{-s-2m+1}
    let (mut pv, mut pd) = (sb.clone(), Hp::int(1));
    let mut q = div(&xs, &x);
    let x2inv = div(&Hp::int(1), &mul(&x, &x));
    for (m, c) in em_coefficients().iter().enumerate() {
        let cq = mul(c, &q);
        v = add(&v, &mul(&pv, &cq));
        d = add(&d, &sub(&mul(&pd, &cq), &mul(&mul(&pv, &l), &cq)));
        q = mul(&q, &x2inv);
        for k in [2 * m + 1, 2 * m + 2] {
            let f = add(&sb, &Hp::int(k as i64));
            pd = add(&mul(&pd, &f), &pv);
            pv = mul(&pv, &f);
        }
    }
    let af = num as f64 / den as f64;
    let bv = remainder_bound(s, af, 0.0);
    // Cauchy estimate on the circle of radius 1/2 around s
    let bd = 2.0 * remainder_bound(s, af, 0.5);
    let d = if deriv { hp.f64_of(&d) } else { 0.0 };
    (Dual { v: hp.f64_of(&v), d }, bv, bd)
}

/// A numeric value with a rigorous bound on the truncation error.
#[derive(Clone, Copy, Debug)]
pub struct Bounded {
    pub value: Complex64,
    pub bound: f64,
}

fn chi_complex(units: &UnitsModN, chi: &DirichletCharacter, a: u64) -> Complex64 {
    let (d, k) = chi.value_exp(units, a as i64).expect("unit");
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / d as f64)
}

fn check_bound(b: f64) -> Result<()> {
    if b > TAIL_TOLERANCE {
        return Err(Error::PrecisionExhausted(format!("Hurwitz remainder bound {b:e} exceeds {TAIL_TOLERANCE:e}")));
    }
    Ok(())
}

/// sum over units a mod f of chi(a) f^{-s} zeta(s, a/f), value and derivative.
fn dirichlet_dual(units: &UnitsModN, chi: &DirichletCharacter, s: f64, deriv: bool) -> Result<(Complex64, Complex64, f64, f64)> {
    let f = units.modulus();
    let lf = (f as f64).ln();
    let fs = (-s * lf).exp();
    let (mut val, mut der) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    let (mut bv, mut bd) = (0.0, 0.0);
    // at s = 1 the poles cancel for nontrivial chi; callers handle the trivial character
    for a in 1..=f {
        if gcd(a, f) != 1 {
            continue;
        }
        let c = chi_complex(units, chi, a);
        let (z, ev, ed) = Hp::with(|hp| hurwitz_hp(hp, s, a, f, s == 1.0, deriv))?;
        check_bound(ev)?;
        if deriv {
            check_bound(ed)?;
        }
        val += c * z.v;
        der += c * z.d;
        bv += ev;
        bd += ed;
    }
    // d/ds (f^{-s} Z) = f^{-s} (Z' - log f Z)
    Ok((val * fs, (der - val * lf) * fs, bv * fs, (bd + bv * lf) * fs))
}

/// L_S(chi, j) for j >= 1, S a set of primes whose Euler factors are removed. For the trivial
/// character at j = 1 the leading term at the pole is returned (residue 1 times the removed
/// factors prod (1 - 1/l)).
pub fn l_numeric(units: &UnitsModN, chi: &DirichletCharacter, j: i64, excluded: &[u64]) -> Result<Bounded> {
    if j <= 0 {
        return Err(Error::InvalidInput("use generalized Bernoulli numbers at j <= 0".into()));
    }
    let removal: Complex64 = excluded
        .iter()
        .map(|&l| match chi.value_exp(units, l as i64) {
            Some(_) => Complex64::new(1.0, 0.0) - chi_complex(units, chi, l) * (l as f64).powi(-(j as i32)),
            None => Complex64::new(1.0, 0.0),
        })
        .product();
    let pole = j == 1 && chi.chi.is_trivial();
    if pole {
        // residue of zeta(s) at 1, times the local factors of the imprimitive modulus
        let f = units.modulus();
        let local: f64 = crate::algebra_core::arith::prime_divisors(f).iter().map(|&l| 1.0 - 1.0 / l as f64).product();
        return Ok(Bounded { value: removal * local, bound: 0.0 });
    }
    let (v, _, b, _) = dirichlet_dual(units, chi, j as f64, false)?;
    Ok(Bounded { value: v * removal, bound: b * removal.norm() })
}

/// L'(chi, s) at a real s != 1 through the same decomposition.
pub fn l_derivative(units: &UnitsModN, chi: &DirichletCharacter, s: f64) -> Result<Bounded> {
    if s == 1.0 {
        return Err(Error::InvalidInput("derivative at s = 1 is not provided".into()));
    }
    let (_, d, _, b) = dirichlet_dual(units, chi, s, true)?;
    Ok(Bounded { value: d, bound: b })
}

/// L(chi, s) at a real s != 1.
pub fn l_value(units: &UnitsModN, chi: &DirichletCharacter, s: f64) -> Result<Bounded> {
    if s == 1.0 {
        return l_numeric(units, chi, 1, &[]);
    }
    let (v, _, b, _) = dirichlet_dual(units, chi, s, false)?;
    Ok(Bounded { value: v, bound: b })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeta_units() -> (UnitsModN, DirichletCharacter) {
        let u = UnitsModN::new(1);
        let c = u.characters()[0].clone();
        (u, c)
    }

    fn chi4() -> (UnitsModN, DirichletCharacter) {
        let u = UnitsModN::new(4);
        let c = u.characters().into_iter().find(|c| !c.chi.is_trivial()).unwrap();
        (u, c)
    }

    #[test]
    fn zeta_two() {
        let (u, c) = zeta_units();
        let z = l_numeric(&u, &c, 2, &[]).unwrap();
        assert!((z.value.re - PI * PI / 6.0).abs() < 1e-12);
        assert!(z.bound <= 1e-15);
        let z4 = l_numeric(&u, &c, 4, &[]).unwrap();
        assert!((z4.value.re - PI.powi(4) / 90.0).abs() < 1e-12);
    }

    #[test]
    fn leibniz_series() {
        // averaged partial sums of the alternating series
        let n = 2_000_000u64;
        let mut s = 0.0;
        let mut last = 0.0;
        for k in 0..=n {
            last = if k % 2 == 0 { 1.0 } else { -1.0 } / (2 * k + 1) as f64;
            s += last;
        }
        let oracle = s - last / 2.0;
        let (u, c) = chi4();
        let l = l_numeric(&u, &c, 1, &[]).unwrap();
        assert!((l.value.re - oracle).abs() < 1e-12);
        assert!((l.value.re - PI / 4.0).abs() < 1e-12);
        assert!(l.value.im.abs() < 1e-14);
    }

    #[test]
    fn euler_factor_removal() {
        let (u, c) = zeta_units();
        let full = l_numeric(&u, &c, 2, &[]).unwrap().value;
        let s = l_numeric(&u, &c, 2, &[2]).unwrap().value;
        assert!((s - full * 0.75).norm() < 1e-14);
        // the imprimitive modulus 2 removes the same factor
        let u2 = UnitsModN::new(2);
        let t = l_numeric(&u2, &u2.characters()[0], 2, &[]).unwrap().value;
        assert!((t - s).norm() < 1e-14);
    }

    #[test]
    fn values_at_nonpositive_integers() {
        let (u, c) = zeta_units();
        assert!((l_value(&u, &c, 0.0).unwrap().value.re + 0.5).abs() < 1e-14);
        assert!((l_value(&u, &c, -1.0).unwrap().value.re + 1.0 / 12.0).abs() < 1e-14);
        let (u4, c4) = chi4();
        assert!((l_value(&u4, &c4, 0.0).unwrap().value.re - 0.5).abs() < 1e-14);
    }

    #[test]
    fn derivatives_against_constants() {
        let (u, c) = zeta_units();
        // zeta'(0) = -log(2 pi)/2, zeta'(-1) = 1/12 - log A (Glaisher)
        let d0 = l_derivative(&u, &c, 0.0).unwrap();
        assert!((d0.value.re + (2.0 * PI).ln() / 2.0).abs() < 1e-13);
        let glaisher: f64 = 1.282_427_129_100_622_6;
        let d1 = l_derivative(&u, &c, -1.0).unwrap();
        assert!((d1.value.re - (1.0 / 12.0 - glaisher.ln())).abs() < 1e-13);
        assert!(d0.bound < 1e-14 && d1.bound < 1e-14);
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let (u, c) = chi4();
        for s in [-2.5, -0.3, 2.2] {
            let h = 1e-5;
            let fd = (l_value(&u, &c, s + h).unwrap().value - l_value(&u, &c, s - h).unwrap().value) / (2.0 * h);
            let d = l_derivative(&u, &c, s).unwrap().value;
            assert!((fd - d).norm() < 1e-7, "s={s}");
        }
    }
}
