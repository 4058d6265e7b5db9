use super::bernoulli::gen_bernoulli;
use super::hurwitz::{l_derivative, l_numeric};
use crate::algebra_core::{rat, CyclotomicNumber, DirichletCharacter, UnitsModN};
use crate::error::{Error, Result};
use crate::gauss_sums::global_gauss_sum;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Counts of real and complex places of k, and of real places ramified in the field cut out by chi.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArchData {
    pub r_real: u32,
    pub r_complex: u32,
    pub r_real_ram: u32,
}

impl ArchData {
    /// k = Q with the parity of chi.
    pub fn rational(odd: bool) -> Self {
        Self { r_real: 1, r_complex: 0, r_real_ram: odd as u32 }
    }

    pub fn degree(&self) -> u32 {
        self.r_real + 2 * self.r_complex
    }
}

/// coeff * pi^pi_power with an exact cyclotomic coefficient; i is zeta_4.
#[derive(Clone, Debug, PartialEq)]
pub struct PiGraded {
    pub coeff: CyclotomicNumber,
    pub pi_power: i64,
}

impl PiGraded {
    pub fn new(coeff: CyclotomicNumber, pi_power: i64) -> Self {
        Self { coeff, pi_power }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.coeff.mul(&o.coeff), self.pi_power + o.pi_power)
    }

    /// (pi i)^e.
    pub fn pi_i(e: i64) -> Self {
        Self::new(CyclotomicNumber::root_of_unity(4, e), e)
    }

    pub fn to_complex(&self) -> Complex64 {
        self.coeff.to_complex() * std::f64::consts::PI.powi(self.pi_power as i32)
    }
}

fn two_pow(e: i64) -> CyclotomicNumber {
    CyclotomicNumber::from_rational(if e >= 0 { rat(1 << e, 1) } else { rat(1, 1 << -e) })
}

/// A(k, chi, j): 2^{r_R + r_C - ram} (pi i)^{r_C + ram} for even j and
/// 2^{r_C + ram} (pi i)^{r_R + r_C - ram} for odd j.
pub fn arch_constant(arch: &ArchData, j: i64) -> PiGraded {
    let (r, c, ram) = (arch.r_real as i64, arch.r_complex as i64, arch.r_real_ram as i64);
    let (two, pii) = if j % 2 == 0 { (r + c - ram, c + ram) } else { (c + ram, r + c - ram) };
    PiGraded::new(two_pow(two), 0).mul(&PiGraded::pi_i(pii))
}

/// Order of vanishing of L(chi^{-1}, s) at s = 1 - j over k: r_R,ram + r_C for even j,
/// r_R - r_R,ram + r_C for odd j, less one for the trivial character at j = 1.
pub fn lambda_order(arch: &ArchData, trivial: bool, j: i64) -> u32 {
    let (r, c, ram) = (arch.r_real, arch.r_complex, arch.r_real_ram);
    if j % 2 == 0 {
        ram + c
    } else if trivial && j == 1 {
        r + c - ram - 1
    } else {
        r + c - ram
    }
}

/// The right-hand side for k = Q:
/// delta f^{j-1} tau(chi) (j-1)! / (2 pi i)^j A(Q, chi, j), delta = -1 exactly for chi = 1, j = 1.
pub fn functional_equation_rhs(units: &UnitsModN, chi: &DirichletCharacter, j: i64) -> PiGraded {
    let f = units.modulus() as i64;
    let trivial = chi.chi.is_trivial();
    let arch = ArchData::rational(chi.is_odd(units));
    let delta = if trivial && j == 1 { -1 } else { 1 };
    let fact: i64 = (1..j).product();
    let scalar = CyclotomicNumber::from_int(delta * f.pow((j - 1) as u32) * fact).mul(&two_pow(-j));
    let tau = PiGraded::new(global_gauss_sum(units, chi).mul(&scalar), 0);
    tau.mul(&PiGraded::pi_i(-j)).mul(&arch_constant(&arch, j))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiSpec {
    pub modulus: u64,
    pub exps: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionalEquationReport {
    pub chi: ChiSpec,
    pub j: i64,
    pub lhs: ComplexJson,
    pub rhs: ComplexJson,
    pub rel_err: f64,
    pub order_lhs: u32,
    /// truncation bound carried by the numeric parts of the left side
    pub tail_bound: f64,
    /// B_{j, chi^{-1}} vanishes exactly when the order is positive
    pub parity_consistent: bool,
}

/// Compares L*(chi^{-1}, 1-j)/L*(chi, j) with the assembled right-hand side for a primitive chi.
pub fn functional_equation_check(units: &UnitsModN, chi: &DirichletCharacter, j: i64) -> Result<FunctionalEquationReport> {
    if j < 1 {
        return Err(Error::InvalidInput("j must be positive".into()));
    }
    if chi.conductor(units) != units.modulus() {
        return Err(Error::InvalidInput("character must be primitive".into()));
    }
    let trivial = chi.chi.is_trivial();
    let arch = ArchData::rational(chi.is_odd(units));
    let order = lambda_order(&arch, trivial, j);
    let inv = chi.inverse();
    let b = gen_bernoulli(j as usize, units, &inv);
    let parity_consistent = b.is_zero() == (order > 0);
    let (num, num_bound) = match order {
        // L(chi^{-1}, 1-j) = -B_{j, chi^{-1}}/j
        0 => (b.scale(&rat(-1, j)).to_complex(), 0.0),
        1 => {
            let d = l_derivative(units, &inv, (1 - j) as f64)?;
            (d.value, d.bound)
        }
        _ => return Err(Error::Unsupported("vanishing order above one over Q".into())),
    };
    let den = l_numeric(units, chi, j, &[])?;
    if den.value.norm() < 1e-8 {
        return Err(Error::PrecisionExhausted("leading term at j is numerically zero".into()));
    }
    let lhs = num / den.value;
    let rhs = functional_equation_rhs(units, chi, j).to_complex();
    let rel_err = (lhs - rhs).norm() / rhs.norm();
    let tail_bound = num_bound / den.value.norm() + num.norm() * den.bound / den.value.norm_sqr();
    Ok(FunctionalEquationReport {
        chi: ChiSpec { modulus: units.modulus(), exps: chi.chi.exps().to_vec() },
        j,
        lhs: lhs.into(),
        rhs: rhs.into(),
        rel_err,
        order_lhs: order,
        tail_bound,
        parity_consistent,
    })
}

/// Every primitive Dirichlet character of conductor at most `max_conductor`, with its units.
pub fn primitive_characters(max_conductor: u64) -> Vec<(UnitsModN, DirichletCharacter)> {
    (1..=max_conductor)
        .flat_map(|f| {
            let u = UnitsModN::new(f);
            u.characters()
                .into_iter()
                .filter(|c| c.conductor(&u) == f)
                .map(|c| (u.clone(), c))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// The functional equation over all primitive chi with conductor at most `max_conductor`.
pub fn functional_equation_suite(max_conductor: u64, js: &[i64]) -> Result<Vec<FunctionalEquationReport>> {
    let chars = primitive_characters(max_conductor);
    let jobs: Vec<(usize, i64)> = (0..chars.len()).flat_map(|i| js.iter().map(move |&j| (i, j))).collect();
    jobs.par_iter().map(|&(i, j)| functional_equation_check(&chars[i].0, &chars[i].1, j)).collect()
}
