use super::spec::{Budget, Check, Job};
use crate::algebra_core::arith::{factorize, ipow};
use crate::algebra_core::{CyclotomicNumber, QGroupRing, UnitsModN};
use crate::coleman::{
    chi_component, cyclotomic_constant_term_check, random_r_element, sesquilinearity_check, xi_chi_closed,
    xi_interpolation_check, xi_specialize_exact, PairingLevel,
};
use crate::det_calculus::{det02_sign_check, det_a_instance};
use crate::error::Error;
use crate::euler_units::{conductor_unit, conductor_unit_component, descent_identity_suite, random_descent_instance, random_filtration_instance};
use crate::gauss_sums::local::phase_to_cyclo;
use crate::gauss_sums::{davenport_hasse_classical_check, davenport_hasse_generalized_grid, local_gauss_sum, phase, LocalCharacterData, LocalField};
use crate::lfunctions::{b_an_check, functional_equation_suite, normal_basis_generator, period_b_check, wedge_alpha_check};
use crate::local_ring::{TruncatedSeries, UnramifiedRing};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::time::Instant;

pub const DEFAULT_BUDGET_TERMS: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "skipped: budget")]
    SkippedBudget,
    #[serde(rename = "error")]
    Error,
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::SkippedBudget => "skipped: budget",
            Status::Error => "error",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JobReport {
    pub check: Check,
    pub seed: u64,
    pub params: Value,
    pub budget: Budget,
    pub status: Status,
    pub cases: u64,
    pub failures: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub details: Value,
}

/// Why a job stopped early.
enum Stop {
    Budget(String),
    Failed(String),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        match e {
            Error::Budget(m) => Stop::Budget(m),
            other => Stop::Failed(other.to_string()),
        }
    }
}

struct Ctx {
    max_terms: u64,
    deadline: Option<Instant>,
    seed: u64,
}

impl Ctx {
    fn terms(&self, needed: u64) -> Result<(), Stop> {
        if needed > self.max_terms {
            return Err(Stop::Budget(format!("{needed} terms exceed the budget {}", self.max_terms)));
        }
        Ok(())
    }

    fn clock(&self) -> Result<(), Stop> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Stop::Budget("time budget exhausted".into())),
            _ => Ok(()),
        }
    }

    /// Independent per-case seeds, so results do not depend on scheduling.
    fn case_seeds(&self, salt: u64, count: usize) -> Vec<u64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        (0..count).map(|_| rng.gen()).collect()
    }
}

/// Tally of a check: (cases, failures, details).
struct Tally {
    cases: u64,
    failures: u64,
    details: Vec<Value>,
}

impl Tally {
    fn new() -> Self {
        Self { cases: 0, failures: 0, details: Vec::new() }
    }

    fn record(&mut self, pass: bool) {
        self.cases += 1;
        if !pass {
            self.failures += 1;
        }
    }

    fn block(&mut self, cases: u64, failures: u64, detail: Value) {
        self.cases += cases;
        self.failures += failures;
        self.details.push(detail);
    }
}

fn parse<T: DeserializeOwned>(v: &Value) -> Result<T, String> {
    serde_json::from_value(v.clone()).map_err(|e| e.to_string())
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    match factorize(q).as_slice() {
        [(p, n)] => Some((*p, *n)),
        _ => None,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct GaussParams {
    moduli: Vec<u64>,
    r: usize,
}

impl Default for GaussParams {
    fn default() -> Self {
        Self { moduli: vec![5, 7, 9, 25, 27, 49], r: 1 }
    }
}

fn run_gauss(p: &GaussParams, ctx: &Ctx) -> Result<Tally, Stop> {
    let mut t = Tally::new();
    for &q in &p.moduli {
        ctx.clock()?;
        let (prime, n) = prime_power(q).ok_or_else(|| Stop::Failed(format!("{q} is not an odd prime power")))?;
        ctx.terms(ipow(prime, n * p.r as u32))?;
        let field = LocalField::new(prime, p.r, n)?;
        let chars = LocalCharacterData::all(&field, phase(0, 1));
        let fails = chars
            .par_iter()
            .filter(|chi| {
                let a = local_gauss_sum(chi);
                let b = local_gauss_sum(&chi.inverse());
                let want = phase_to_cyclo(chi.theta_minus_one()).mul(&CyclotomicNumber::from_int(a.conductor_norm as i64));
                a.value.mul(&b.value) != want
            })
            .count() as u64;
        t.block(chars.len() as u64, fails, json!({"modulus": q, "r": p.r, "characters": chars.len(), "failures": fails}));
    }
    Ok(t)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct DhClassicalParams {
    primes: Vec<u64>,
    degrees: Vec<usize>,
    max_size: u64,
}

impl Default for DhClassicalParams {
    fn default() -> Self {
        Self { primes: vec![3, 5, 7, 11, 13], degrees: vec![2, 3], max_size: 2200 }
    }
}

fn run_dh_classical(p: &DhClassicalParams, ctx: &Ctx) -> Result<Tally, Stop> {
    let mut t = Tally::new();
    for &prime in &p.primes {
        for &s in &p.degrees {
            let size = ipow(prime, s as u32);
            if size > p.max_size {
                continue;
            }
            ctx.clock()?;
            ctx.terms(size)?;
            let reports: Vec<_> = (0..prime - 1).into_par_iter().map(|tame| davenport_hasse_classical_check(prime, s, tame)).collect::<Result<_, _>>()?;
            let fails = reports.iter().filter(|r| !r.equal).count() as u64;
            t.block(reports.len() as u64, fails, json!({"p": prime, "s": s, "characters": reports.len(), "failures": fails}));
        }
    }
    Ok(t)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct DhGeneralizedParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<u32>,
    grid: Vec<(u64, usize, u32)>,
}

impl Default for DhGeneralizedParams {
    fn default() -> Self {
        let mut grid: Vec<(u64, usize, u32)> =
            [3u64, 5].iter().flat_map(|&p| (1..=3usize).flat_map(move |r| (0..=2u32).map(move |n| (p, r, n)))).collect();
        grid.push((7, 2, 2));
        Self { p: None, r: None, n: None, grid }
    }
}

impl DhGeneralizedParams {
    /// A single (p, r, n) replaces the default grid.
    fn resolve(mut self) -> Result<Self, String> {
        match (self.p, self.r, self.n) {
            (Some(p), Some(r), Some(n)) => {
                self.grid = vec![(p, r, n)];
                Ok(self)
            }
            (None, None, None) => Ok(self),
            _ => Err("p, r and n must be given together".into()),
        }
    }
}

fn run_dh_generalized(p: &DhGeneralizedParams, ctx: &Ctx) -> Result<Tally, Stop> {
    let mut t = Tally::new();
    for &(prime, r, n) in &p.grid {
        ctx.clock()?;
        let reports = davenport_hasse_generalized_grid(prime, r, n, ctx.max_terms)?;
        let fails = reports.iter().filter(|x| !x.equal).count() as u64;
        t.block(reports.len() as u64, fails, json!({"p": prime, "r": r, "n_chi": n, "characters": reports.len(), "failures": fails}));
    }
    Ok(t)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct XiParams {
    configs: Vec<(u64, usize)>,
    samples: usize,
    n_max: u32,
    j_max: i64,
    precision: u32,
    terms: usize,
}

impl Default for XiParams {
    fn default() -> Self {
        Self { configs: vec![(3, 1), (3, 2), (5, 1), (5, 2)], samples: 200, n_max: 3, j_max: 3, precision: 12, terms: 64 }
    }
}

fn run_xi(p: &XiParams, ctx: &Ctx) -> Result<Tally, Stop> {
    let mut t = Tally::new();
    // the hand-checked value: p = 3, f = 1 + T, n = 1, j = 2, trivial character
    {
        let ring = UnramifiedRing::new(3, 1, p.precision)?;
        let f = TruncatedSeries::from_ints(&ring, &[1, 1]).truncate(p.terms.max(2));
        let units = UnitsModN::new(3);
        let triv = units.characters().into_iter().find(|c| c.chi.is_trivial()).unwrap();
        let brute = chi_component(&xi_specialize_exact(&f, 1, 2)?, &triv, &units);
        let closed = xi_chi_closed(&f, 1, 2, &triv)?;
        let want = CyclotomicNumber::from_rational(crate::algebra_core::rat(-9, 8));
        let pass = brute == want && closed == want;
        t.block(1, (!pass) as u64, json!({"hand_checked": {"brute_force": brute.to_json(), "closed_form": closed.to_json(), "pass": pass}}));
    }
    for (k, &(prime, r)) in p.configs.iter().enumerate() {
        ctx.clock()?;
        ctx.terms(ipow(prime, p.n_max) * p.terms as u64 * r as u64)?;
        let ring = UnramifiedRing::new(prime, r, p.precision)?;
        let seeds = ctx.case_seeds(k as u64 + 1, p.samples);
        let results: Vec<(u64, u64)> = seeds
            .par_iter()
            .map(|&s| {
                let mut rng = ChaCha8Rng::seed_from_u64(s);
                let f = random_r_element(&mut rng, &ring, p.terms);
                let mut cases = 0;
                let mut fails = 0;
                for n in 0..=p.n_max {
                    for j in 1..=p.j_max {
                        if j * n as i64 >= p.precision as i64 {
                            continue;
                        }
                        for rep in xi_interpolation_check(&f, n, j)? {
                            cases += 1;
                            fails += (!rep.equal) as u64;
                        }
                    }
                }
                Ok((cases, fails))
            })
            .collect::<Result<_, Error>>()?;
        let cases: u64 = results.iter().map(|x| x.0).sum();
        let fails: u64 = results.iter().map(|x| x.1).sum();
        t.block(cases, fails, json!({"p": prime, "r": r, "samples": p.samples, "class_comparisons": cases, "failures": fails}));
    }
    Ok(t)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ColemanParams {
    primes: Vec<u64>,
    precision: u32,
}

impl Default for ColemanParams {
    fn default() -> Self {
        Self { primes: vec![3, 5], precision: 10 }
    }
}

fn run_coleman(p: &ColemanParams, ctx: &Ctx) -> Result<Tally, Stop> {
    let mut t = Tally::new();
    for &prime in &p.primes {
        for c in [1 + prime, 1 + prime + prime * prime, (1 + prime) * (1 + prime)] {
            ctx.clock()?;
            let rep = cyclotomic_constant_term_check(prime, c, p.precision)?;
            t.record(rep.pass);
            t.details.push(serde_json::to_value(&rep).unwrap());
        }
    }
    Ok(t)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RandomSuiteParams {
    instances: usize,
    max_group: usize,
}

fn run_descent(p: &RandomSuiteParams, ctx: &Ctx) -> Result<Tally, Stop> {
    let seeds = ctx.case_seeds(11, p.instances);
    let reports: Vec<_> = seeds
        .par_iter()
        .map(|&s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let inst = random_descent_instance(&mut rng, p.max_group)?;
            descent_identity_suite(&inst)
        })
        .collect::<Result<_, Error>>()?;
    let mut t = Tally::new();
    for rep in &reports {
        t.record(rep.pass());
        if !rep.pass() {
            t.details.push(serde_json::to_value(rep).unwrap());
        }
    }
    let identities: usize = reports.iter().map(|r| r.checks.len()).sum();
    t.details.insert(0, json!({"instances": reports.len(), "identities_checked": identities}));
    Ok(t)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ConductorParams {
    instances: usize,
    max_group: usize,
    precision: u32,
}

impl Default for ConductorParams {
    fn default() -> Self {
        Self { instances: 100, max_group: 32, precision: 6 }
    }
}

fn run_conductor(p: &ConductorParams, ctx: &Ctx) -> Result<Tally, Stop> {
    let seeds = ctx.case_seeds(13, p.instances);
    let rows: Vec<Value> = seeds
        .par_iter()
        .map(|&s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let inst = random_filtration_instance(&mut rng, p.max_group)?;
            let f = conductor_unit(&inst.place, &inst.sigma, inst.j, inst.p, p.precision)?;
            let interpolation = inst
                .place
                .group()
                .characters()
                .iter()
                .all(|chi| f.value.chi_component(chi) == conductor_unit_component(&inst.place, &inst.sigma, chi, inst.j));
            let one = QGroupRing::one(inst.place.group().clone(), &crate::algebra_core::rat(0, 1));
            let certified = f.value.mul(&f.inverse) == one;
            Ok(json!({
                "group": inst.place.group().orders(),
                "p": inst.p,
                "j": inst.j,
                "interpolation": interpolation,
                "inverse_certified": certified,
            }))
        })
        .collect::<Result<_, Error>>()?;
    let mut t = Tally::new();
    for row in rows {
        let pass = row["interpolation"] == true && row["inverse_certified"] == true;
        t.record(pass);
        if !pass {
            t.details.push(row);
        }
    }
    Ok(t)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct DetParams {
    instances: usize,
}

impl Default for DetParams {
    fn default() -> Self {
        Self { instances: 200 }
    }
}

fn run_det(p: &DetParams, ctx: &Ctx) -> Result<Tally, Stop> {
    let seeds = ctx.case_seeds(17, p.instances);
    let det_a: Vec<_> = seeds.par_iter().map(|&s| det_a_instance(s)).collect::<Result<_, Error>>()?;
    ctx.clock()?;
    let det02: Vec<_> = seeds.par_iter().map(|&s| det02_sign_check(s)).collect::<Result<_, Error>>()?;
    let mut t = Tally::new();
    let mut by_s = [0u64; 3];
    for r in &det_a {
        t.record(r.pass);
        if !r.pass {
            t.details.push(serde_json::to_value(r).unwrap());
        }
    }
    for r in &det02 {
        let pass = r.pass && r.sign_measured == if r.s % 2 == 0 { 1 } else { -1 };
        t.record(pass);
        by_s[r.s.min(2)] += 1;
        if !pass {
            t.details.push(serde_json::to_value(r).unwrap());
        }
    }
    t.details.insert(0, json!({"det_a_instances": det_a.len(), "det02_instances": det02.len(), "det02_by_s": by_s}));
    Ok(t)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct FunctionalEqParams {
    max_conductor: u64,
    j: Vec<i64>,
    tolerance: f64,
}

impl Default for FunctionalEqParams {
    fn default() -> Self {
        Self { max_conductor: 40, j: vec![1, 2, 3, 4], tolerance: 1e-10 }
    }
}

fn run_functional_eq(p: &FunctionalEqParams, ctx: &Ctx) -> Result<Tally, Stop> {
    ctx.terms(p.max_conductor * p.max_conductor)?;
    let reports = functional_equation_suite(p.max_conductor, &p.j)?;
    let mut t = Tally::new();
    let mut worst = 0.0f64;
    for r in &reports {
        let pass = r.rel_err <= p.tolerance && r.parity_consistent;
        worst = worst.max(r.rel_err);
        t.record(pass);
        if !pass {
            t.details.push(serde_json::to_value(r).unwrap());
        }
    }
    let anchor = reports.iter().find(|r| r.chi.modulus == 1 && r.j == 2).map(|r| serde_json::to_value(r).unwrap());
    t.details.insert(0, json!({"reports": reports.len(), "max_rel_err": worst, "trivial_j2": anchor}));
    Ok(t)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct PeriodParams {
    moduli: Vec<u64>,
    primes: Vec<u64>,
    n_max: u32,
    tame_levels: Vec<u64>,
    wedge_j: Vec<i64>,
}

impl Default for PeriodParams {
    fn default() -> Self {
        Self { moduli: vec![5, 7, 9], primes: vec![3, 5], n_max: 3, tame_levels: vec![1], wedge_j: vec![1, 2, 3, 4] }
    }
}

fn run_period(p: &PeriodParams, ctx: &Ctx) -> Result<Tally, Stop> {
    let mut t = Tally::new();
    for &m in &p.moduli {
        ctx.clock()?;
        let rep = period_b_check(m)?;
        t.record(rep.pass);
        t.details.push(serde_json::to_value(&rep).unwrap());
        let x = normal_basis_generator(m)?;
        let units = UnitsModN::new(m);
        let mut worst = 0.0f64;
        let mut compared = 0u64;
        for chi in units.characters() {
            for &j in &p.wedge_j {
                match wedge_alpha_check(m, &x, j, &chi) {
                    Ok(r) => {
                        worst = worst.max(r.rel_err);
                        compared += 1;
                    }
                    Err(Error::PrecisionExhausted(_)) => {}
                    Err(e) => return Err(e.into()),
                }
            }
        }
        t.record(worst < 1e-12);
        t.details.push(json!({"m": m, "wedge_alpha_compared": compared, "wedge_alpha_max_rel_err": worst}));
    }
    for &l in &p.tame_levels {
        let x = if l == 1 { CyclotomicNumber::one() } else { normal_basis_generator(l)? };
        for &prime in &p.primes {
            for n in 0..=p.n_max {
                ctx.clock()?;
                ctx.terms(l * ipow(prime, n) * ipow(prime, n))?;
                let units = UnitsModN::new(l * ipow(prime, n));
                let reports: Vec<_> = units.characters().par_iter().map(|chi| b_an_check(l, prime, n, &x, chi)).collect::<Result<_, Error>>()?;
                let fails = reports.iter().filter(|r| !r.pass).count() as u64;
                t.block(reports.len() as u64, fails, json!({"l": l, "p": prime, "n": n, "characters": reports.len(), "failures": fails}));
            }
        }
    }
    Ok(t)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct PairingParams {
    triples: usize,
    levels: Vec<(u64, usize, u32)>,
    precision: u32,
}

impl Default for PairingParams {
    fn default() -> Self {
        Self { triples: 100, levels: vec![(3, 1, 1), (3, 2, 1), (5, 2, 1), (3, 1, 2)], precision: 5 }
    }
}

fn run_pairing(p: &PairingParams, ctx: &Ctx) -> Result<Tally, Stop> {
    let mut t = Tally::new();
    if p.levels.is_empty() {
        return Ok(t);
    }
    let levels: Vec<PairingLevel> =
        p.levels.iter().map(|&(prime, r, n)| PairingLevel::new(UnramifiedRing::new(prime, r, p.precision)?, n)).collect::<Result<_, Error>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut per_level = vec![(0u64, 0u64, 0u64); levels.len()];
    for k in 0..p.triples {
        let i = k % levels.len();
        let (s, inv) = sesquilinearity_check(&levels[i], &mut rng);
        t.record(s && inv);
        per_level[i].0 += 1;
        per_level[i].1 += (!s) as u64;
        per_level[i].2 += (!inv) as u64;
    }
    for (lv, c) in p.levels.iter().zip(per_level) {
        t.details.push(json!({"p": lv.0, "r": lv.1, "n": lv.2, "triples": c.0, "sesquilinearity_failures": c.1, "involution_failures": c.2}));
    }
    Ok(t)
}

impl Default for RandomSuiteParams {
    fn default() -> Self {
        Self { instances: 500, max_group: 32 }
    }
}

fn resolved<T: DeserializeOwned + Serialize>(v: &Value) -> Result<(T, Value), String> {
    let p: T = parse(v)?;
    let echo = serde_json::to_value(&p).map_err(|e| e.to_string())?;
    Ok((p, echo))
}

/// Checks the parameters of a job and returns them with defaults filled in.
pub fn resolve_params(check: Check, params: &Value) -> Result<Value, String> {
    let params = if params.is_null() { &Value::Object(Default::default()) } else { params };
    Ok(match check {
        Check::Gauss => resolved::<GaussParams>(params)?.1,
        Check::DhClassical => resolved::<DhClassicalParams>(params)?.1,
        Check::DhGeneralized => serde_json::to_value(parse::<DhGeneralizedParams>(params)?.resolve()?).unwrap(),
        Check::XiInterp => resolved::<XiParams>(params)?.1,
        Check::ColemanInterp => resolved::<ColemanParams>(params)?.1,
        Check::EulerIdentities => resolved::<RandomSuiteParams>(params)?.1,
        Check::ConductorUnit => resolved::<ConductorParams>(params)?.1,
        Check::DetSigns => resolved::<DetParams>(params)?.1,
        Check::FunctionalEq => resolved::<FunctionalEqParams>(params)?.1,
        Check::PeriodB => resolved::<PeriodParams>(params)?.1,
        Check::Pairing => resolved::<PairingParams>(params)?.1,
    })
}

fn dispatch(check: Check, params: &Value, ctx: &Ctx) -> Result<Tally, Stop> {
    let bad = |e: String| Stop::Failed(format!("invalid params: {e}"));
    match check {
        Check::Gauss => run_gauss(&parse(params).map_err(bad)?, ctx),
        Check::DhClassical => run_dh_classical(&parse(params).map_err(bad)?, ctx),
        Check::DhGeneralized => run_dh_generalized(&parse::<DhGeneralizedParams>(params).and_then(|p| p.resolve()).map_err(bad)?, ctx),
        Check::XiInterp => run_xi(&parse(params).map_err(bad)?, ctx),
        Check::ColemanInterp => run_coleman(&parse(params).map_err(bad)?, ctx),
        Check::EulerIdentities => run_descent(&parse(params).map_err(bad)?, ctx),
        Check::ConductorUnit => run_conductor(&parse(params).map_err(bad)?, ctx),
        Check::DetSigns => run_det(&parse(params).map_err(bad)?, ctx),
        Check::FunctionalEq => run_functional_eq(&parse(params).map_err(bad)?, ctx),
        Check::PeriodB => run_period(&parse(params).map_err(bad)?, ctx),
        Check::Pairing => run_pairing(&parse(params).map_err(bad)?, ctx),
    }
}

/// Runs one job. `default_terms` applies when the job sets no term budget.
pub fn run_job(job: &Job, default_terms: u64) -> JobReport {
    let params = resolve_params(job.check, &job.params).unwrap_or_else(|_| job.params.clone());
    let ctx = Ctx {
        max_terms: job.budget.max_terms.unwrap_or(default_terms),
        deadline: job.budget.max_ms.map(|ms| Instant::now() + std::time::Duration::from_millis(ms)),
        seed: job.seed,
    };
    let base = |status, cases, failures, message, details| JobReport {
        check: job.check,
        seed: job.seed,
        params: params.clone(),
        budget: job.budget,
        status,
        cases,
        failures,
        message,
        details,
    };
    match dispatch(job.check, &params, &ctx) {
        Ok(t) => {
            let status = if t.failures == 0 { Status::Pass } else { Status::Fail };
            base(status, t.cases, t.failures, None, Value::Array(t.details))
        }
        Err(Stop::Budget(m)) => base(Status::SkippedBudget, 0, 0, Some(m), Value::Array(vec![])),
        Err(Stop::Failed(m)) => base(Status::Error, 0, 0, Some(m), Value::Array(vec![])),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(check: Check, params: Value) -> Job {
        Job { check, params, budget: Budget::default(), seed: 1 }
    }

    #[test]
    fn defaults_are_echoed() {
        let v = resolve_params(Check::Gauss, &json!({})).unwrap();
        assert_eq!(v["moduli"], json!([5, 7, 9, 25, 27, 49]));
        let g = resolve_params(Check::DhGeneralized, &json!({"p": 3, "r": 2, "n": 2})).unwrap();
        assert_eq!(g["grid"], json!([[3, 2, 2]]));
        assert!(resolve_params(Check::DhGeneralized, &json!({"p": 3})).is_err());
        assert!(resolve_params(Check::Pairing, &json!({"bogus": 1})).is_err());
    }

    #[test]
    fn small_jobs_pass() {
        let cases = [
            (Check::Gauss, json!({"moduli": [5, 9]})),
            (Check::DhClassical, json!({"primes": [3, 5], "degrees": [2]})),
            (Check::DhGeneralized, json!({"p": 3, "r": 2, "n": 2})),
            (Check::XiInterp, json!({"configs": [[3, 1]], "samples": 2, "n_max": 1, "j_max": 2, "terms": 16})),
            (Check::ColemanInterp, json!({"primes": [3]})),
            (Check::EulerIdentities, json!({"instances": 5})),
            (Check::ConductorUnit, json!({"instances": 5})),
            (Check::DetSigns, json!({"instances": 5})),
            (Check::FunctionalEq, json!({"max_conductor": 8, "j": [1, 2]})),
            (Check::PeriodB, json!({"moduli": [5], "primes": [3], "n_max": 1})),
            (Check::Pairing, json!({"triples": 8})),
        ];
        for (c, p) in cases {
            let r = run_job(&job(c, p), DEFAULT_BUDGET_TERMS);
            assert_eq!(r.status, Status::Pass, "{c}: {:?}", r.message);
            assert!(r.cases > 0);
        }
    }

    #[test]
    fn budget_skip() {
        let mut j = job(Check::DhGeneralized, json!({"p": 5, "r": 3, "n": 2}));
        j.budget.max_terms = Some(10);
        assert_eq!(run_job(&j, DEFAULT_BUDGET_TERMS).status, Status::SkippedBudget);
    }

    #[test]
    fn reports_are_deterministic() {
        let j = job(Check::EulerIdentities, json!({"instances": 6}));
        let a = serde_json::to_string(&run_job(&j, DEFAULT_BUDGET_TERMS)).unwrap();
        let b = serde_json::to_string(&run_job(&j, DEFAULT_BUDGET_TERMS)).unwrap();
        assert_eq!(a, b);
    }
}
