use super::algebra::{one, AElem, CycloAlgebra};
use crate::algebra_core::arith::{euler_phi, gcd, inv_mod, ipow, vp};
use crate::algebra_core::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::local_ring::unramified::signed_rep;
use crate::local_ring::{padic_log, TruncatedSeries, UnramifiedRing};
use crate::local_ring::series::{binomial_mod, SeriesJson};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Largest K with p^K <= M - 1: the worst p-power met when integrating a series with M terms.
fn integration_loss(p: u64, m: usize) -> u32 {
    let mut k = 0;
    while ipow(p, k + 1) < m as u64 {
        k += 1;
    }
    k
}

/// Precision (power of p) of `coleman_value(g)` for g known mod p^N with M terms.
pub fn coleman_output_precision(p: u64, n: u32, m: usize) -> i64 {
    n as i64 - integration_loss(p, m) as i64 - 1
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantTermReport {
    pub p: u64,
    pub c: u64,
    pub precision: u32,
    pub coleman: u64,
    pub expected: u64,
    pub pass: bool,
}

/// Col(T/((1+T)^c - 1)) at T = 0 against -(1 - 1/p) log_p(c), both mod p^precision.
pub fn cyclotomic_constant_term_check(p: u64, c: u64, precision: u32) -> Result<ConstantTermReport> {
    let m = 16;
    let ring = UnramifiedRing::new(p, 1, precision + integration_loss(p, m) + 1)?;
    let g = cyclotomic_unit_series(&ring, c as i64, m)?;
    let col = coleman_value(&g)?;
    let coleman = col.raw()[0][0] % ipow(p, precision);
    // log_p(c)/p is integral for c = 1 mod p; one extra digit covers the division
    let wide = UnramifiedRing::new(p, 1, precision + 1)?;
    let log_c = padic_log(&wide.from_int(c as i64))?.div_p_pow(1)?;
    let expected = log_c.scale_int(-(p as i64 - 1)).coeffs()[0] % ipow(p, precision);
    Ok(ConstantTermReport { p, c, precision, coleman, expected, pass: coleman == expected })
}

/// Col(g) = (1 - phi/p) log g for a unit power series g.
///
/// log g is taken as log(g / omega) with omega the Teichmuller lift of g(0), so the torsion part
/// contributes 0. The constant term is the p-adic log of the principal unit g(0)/omega; higher
/// terms integrate g'/g. Integration divides by k < M, so the work happens at a raised precision
/// on p^K log g and the result is known mod p^{N-K-1}.
pub fn coleman_value(g: &TruncatedSeries) -> Result<TruncatedSeries> {
    let base = g.ring();
    let (p, n, m) = (base.p(), base.precision(), g.precision());
    let k = integration_loss(p, m);
    let out_prec = coleman_output_precision(p, n, m);
    if out_prec < 1 {
        return Err(Error::PrecisionExhausted(format!("Col at N = {n}, M = {m} keeps no p-adic digits")));
    }
    if m == 0 {
        return Ok(g.clone());
    }
    let work = base.at_precision(n + 2 * k + 2);
    let gl = TruncatedSeries::from_raw(&work, g.raw().to_vec());
    let g0 = gl.eval_zero();
    if !g0.is_unit() {
        return Err(Error::NotInvertible("Col needs g(0) to be a unit".into()));
    }
    let omega_inv = work.inv_raw(&work.teichmuller_raw(g0.coeffs())).expect("Teichmuller lift of a unit");
    let h = gl.scale(&work.elem(omega_inv));
    let hinv = h.inverse()?;
    let dh: Vec<Vec<u64>> = (0..m - 1).map(|i| work.scale_raw(&h.raw()[i + 1], (i + 1) as u64)).collect();
    let b = TruncatedSeries::from_raw(&work, dh).mul(&hinv.truncate(m - 1));
    let pk = ipow(p, k);
    let pw = work.modulus_pn();
    let mut s = vec![work.scale_raw(padic_log(&h.eval_zero())?.coeffs(), pk)];
    for i in 1..m {
        let v = vp(i as u64, p);
        let unit = i as u64 / ipow(p, v);
        let c = ipow(p, k - v) as u128 * inv_mod(unit % pw, pw).unwrap() as u128 % pw as u128;
        s.push(work.scale_raw(&b.raw()[i - 1], c as u64));
    }
    let s = TruncatedSeries::from_raw(&work, s);
    let scaled = s.scale_int(p as i64).sub(&s.phi_op());
    let d = ipow(p, k + 1);
    if scaled.raw().iter().any(|c| c.iter().any(|x| x % d != 0)) {
        return Err(Error::PrecisionExhausted("(1 - phi/p) log g is not integral at this precision".into()));
    }
    let out_ring = base.at_precision(out_prec as u32);
    let om = out_ring.modulus_pn();
    let coeffs = scaled.raw().iter().map(|c| c.iter().map(|x| x / d % om).collect()).collect();
    Ok(TruncatedSeries::from_raw(&out_ring, coeffs))
}

/// T / ((1+T)^c - 1), the Coleman series of (zeta_{p^n} - 1)/(zeta_{p^n}^c - 1).
pub fn cyclotomic_unit_series(ring: &Arc<UnramifiedRing>, c: i64, m: usize) -> Result<TruncatedSeries> {
    let pn = ring.modulus_pn();
    let q: Vec<i64> = (0..m).map(|k| binomial_mod(c, k + 1, pn) as i64).collect();
    TruncatedSeries::from_ints(ring, &q).inverse()
}

/// A norm-compatible family of elements u_n of K_v(zeta_{p^n}) given by its Coleman series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormCompatibleFamily {
    /// u_n = zeta_{p^n} - 1, series T.
    Uniformizer,
    /// u_n = (zeta_{p^n} - 1)/(zeta_{p^n}^c - 1), series T/((1+T)^c - 1).
    CyclotomicUnit { c: i64 },
    /// u_n = 1, series 1.
    Trivial,
    /// Only the series is known; u_n is defined by evaluating it.
    Series { g: SeriesJson },
}

impl NormCompatibleFamily {
    pub fn series(&self, ring: &Arc<UnramifiedRing>, m: usize) -> Result<TruncatedSeries> {
        match self {
            Self::Uniformizer => Ok(TruncatedSeries::t(ring, m)),
            Self::CyclotomicUnit { c } => cyclotomic_unit_series(ring, *c, m),
            Self::Trivial => Ok(TruncatedSeries::one(ring, m)),
            Self::Series { g } => TruncatedSeries::from_json(g),
        }
    }

    fn validate(&self, p: u64) -> Result<()> {
        if let Self::CyclotomicUnit { c } = self {
            if *c < 2 || gcd(*c as u64, p) != 1 {
                return Err(Error::InvalidInput(format!("cyclotomic unit needs c >= 2 prime to p, got {c}")));
            }
        }
        Ok(())
    }

    /// (num, den) with u_n = num/den in Z[zeta_{p^n}] inside the algebra, when described.
    fn fraction(&self, alg: &CycloAlgebra) -> Option<(AElem, AElem)> {
        let r = alg.ring().degree();
        let x = alg.monomial(&one(r), 1);
        let mut xm1 = x.clone();
        xm1[0] = alg.ring().sub_raw(&xm1[0], &one(r));
        let unit = alg.constant(&one(r));
        match self {
            Self::Uniformizer => Some((xm1, unit)),
            // (zeta^c - 1)/(zeta - 1) = 1 + zeta + ... + zeta^{c-1}
            Self::CyclotomicUnit { c } => {
                let den = (0..*c).fold(alg.zero(), |s, i| alg.add(&s, &alg.monomial(&one(r), i)));
                Some((unit, den))
            }
            Self::Trivial => Some((unit.clone(), unit)),
            Self::Series { .. } => None,
        }
    }

    /// u_n as an exact cyclotomic number, when described.
    pub fn exact(&self, p: u64, n: u32) -> Result<Option<CyclotomicNumber>> {
        let pn = ipow(p, n);
        let zm1 = CyclotomicNumber::root_of_unity(pn, 1).sub(&CyclotomicNumber::one());
        Ok(match self {
            Self::Uniformizer => Some(zm1),
            Self::CyclotomicUnit { c } => {
                Some(zm1.div(&CyclotomicNumber::root_of_unity(pn, *c).sub(&CyclotomicNumber::one()))?)
            }
            Self::Trivial => Some(CyclotomicNumber::one()),
            Self::Series { .. } => None,
        })
    }
}

/// N_{Q_p(zeta_{p^{n+1}})/Q_p(zeta_{p^n})}(u_{n+1}) = u_n for the exact description (n >= 1).
pub fn norm_compatible_exact(family: &NormCompatibleFamily, p: u64, n: u32) -> Result<Option<bool>> {
    let (Some(up), Some(u)) = (family.exact(p, n + 1)?, family.exact(p, n)?) else {
        return Ok(None);
    };
    let pn = ipow(p, n);
    let norm = (0..p).fold(CyclotomicNumber::one(), |acc, t| acc.mul(&up.galois((1 + t * pn) as i64)));
    Ok(Some(norm == u))
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelReport {
    pub n: u32,
    pub precision_exponent: u32,
    /// g^{sigma^{-n}}(zeta_{p^n} - 1) agrees with the described u_n.
    pub matches_family: Option<bool>,
    /// The evaluations at levels n + 1 and n are norm compatible.
    pub norm_compatible: Option<bool>,
    pub exact_norm_compatible: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ColemanInterpolationReport {
    pub family: NormCompatibleFamily,
    pub p: u64,
    pub levels: Vec<LevelReport>,
    /// Tr_{K_v/Q_p}((D Col g)(0)), when g is a unit series.
    pub boundary_trace: Option<i64>,
}

impl ColemanInterpolationReport {
    pub fn pass(&self) -> bool {
        self.levels.iter().all(|l| {
            l.matches_family.unwrap_or(true) && l.norm_compatible.unwrap_or(true) && l.exact_norm_compatible.unwrap_or(true)
        })
    }
}

fn level_precision(g: &TruncatedSeries, n: u32) -> Result<u32> {
    let p = g.ring().p();
    let prec = g.ring().precision().min((g.precision() as u64 / euler_phi(ipow(p, n))) as u32);
    if prec == 0 {
        return Err(Error::PrecisionExhausted(format!("M = {} leaves no precision at level {n}", g.precision())));
    }
    Ok(prec)
}

/// u_n = g^{sigma^{-n}}(zeta_{p^m} - 1) evaluated in the level-`alg` algebra (m <= level).
fn evaluate(alg: &CycloAlgebra, g: &TruncatedSeries, n: u32) -> AElem {
    let ring = g.ring();
    let coeffs: Vec<Vec<u64>> = g.raw().iter().map(|c| ring.frob_pow_raw(c, -(n as i64))).collect();
    alg.eval_poly(&coeffs, n)
}

/// Check g^{sigma^{-n}}(zeta_{p^n} - 1) = u_n for 1 <= n <= n_max, and norm compatibility of the
/// evaluations. Evaluation of the truncated series is sound mod p^{floor(M / phi(p^n))} because
/// v(zeta_{p^n} - 1) = 1/phi(p^n).
pub fn coleman_interpolation_check(
    family: &NormCompatibleFamily,
    g: &TruncatedSeries,
    n_max: u32,
) -> Result<ColemanInterpolationReport> {
    let ring = g.ring();
    let p = ring.p();
    family.validate(p)?;
    let mut levels = Vec::new();
    for n in 1..=n_max {
        let prec = level_precision(g, n)?;
        let alg = CycloAlgebra::new(ring.clone(), n);
        let ev = evaluate(&alg, g, n);
        let matches_family = match family.fraction(&alg) {
            Some((num, den)) => Some(alg.divisible_by_p_pow(&alg.sub(&alg.mul(&ev, &den), &num), prec)?),
            None => None,
        };
        let (norm_compatible, exact_norm_compatible) = if n < n_max {
            let up = CycloAlgebra::new(ring.clone(), n + 1);
            let evp = evaluate(&up, g, n + 1);
            let norm = (0..p).fold(up.constant(&one(ring.degree())), |acc, t| {
                up.mul(&acc, &up.galois(&evp, 1 + t * ipow(p, n)))
            });
            let below = evaluate(&up, g, n);
            let ok = up.divisible_by_p_pow(&up.sub(&norm, &below), level_precision(g, n + 1)?)?;
            (Some(ok), norm_compatible_exact(family, p, n)?)
        } else {
            (None, None)
        };
        levels.push(LevelReport { n, precision_exponent: prec, matches_family, norm_compatible, exact_norm_compatible });
    }
    let boundary_trace = if g.eval_zero().is_unit() {
        let t = coleman_value(g)?.d_op().eval_zero().trace();
        Some(signed_rep(t.value(), t.modulus()))
    } else {
        None
    };
    Ok(ColemanInterpolationReport { family: family.clone(), p, levels, boundary_trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_unit_series(rng: &mut ChaCha8Rng, ring: &Arc<UnramifiedRing>, m: usize) -> TruncatedSeries {
        let pn = ring.modulus_pn();
        let mut coeffs: Vec<Vec<u64>> =
            (0..m).map(|_| (0..ring.degree()).map(|_| rng.gen_range(0..pn)).collect()).collect();
        coeffs[0][0] = rng.gen_range(1..ring.p()) + ring.p() * rng.gen_range(0..pn / ring.p());
        TruncatedSeries::from_raw(ring, coeffs)
    }

    #[test]
    fn trivial_and_pure_power() {
        let ring = UnramifiedRing::new(3, 1, 10).unwrap();
        assert!(coleman_value(&TruncatedSeries::one(&ring, 12)).unwrap().is_zero());
        // (1+T)^a: log = a log(1+T) and phi(log(1+T)) = p log(1+T), so Col vanishes
        let g = TruncatedSeries::one_plus_t_pow(&ring, 4, 12);
        assert!(coleman_value(&g).unwrap().is_zero());
    }

    #[test]
    fn cyclotomic_unit_constant_term() {
        for p in [3u64, 5] {
            let m = 16;
            let n = 10 + integration_loss(p, m) + 1;
            let ring = UnramifiedRing::new(p, 1, n).unwrap();
            for c in [1 + p, 1 + p + p * p, (1 + p) * (1 + p)] {
                let g = cyclotomic_unit_series(&ring, c as i64, m).unwrap();
                let col = coleman_value(&g).unwrap();
                assert_eq!(col.ring().precision(), 10);
                let r10 = UnramifiedRing::new(p, 1, 11).unwrap();
                let log_c = padic_log(&r10.from_int(c as i64)).unwrap().div_p_pow(1).unwrap();
                let want = log_c.scale_int(-(p as i64 - 1)).coeffs()[0] % ipow(p, 10);
                assert_eq!(col.raw()[0][0], want, "p={p} c={c}");
            }
        }
    }

    #[test]
    fn additive_and_in_r() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for r in [1usize, 2] {
            let ring = UnramifiedRing::new(3, r, 12).unwrap();
            for _ in 0..4 {
                let g1 = random_unit_series(&mut rng, &ring, 14);
                let g2 = random_unit_series(&mut rng, &ring, 14);
                let lhs = coleman_value(&g1.mul(&g2)).unwrap();
                let rhs = coleman_value(&g1).unwrap().add(&coleman_value(&g2).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
        let ring = UnramifiedRing::new(3, 1, 12).unwrap();
        let g = cyclotomic_unit_series(&ring, 4, 24).unwrap();
        assert!(coleman_value(&g).unwrap().r_membership());
    }

    #[test]
    fn not_a_unit() {
        let ring = UnramifiedRing::new(5, 1, 8).unwrap();
        assert!(coleman_value(&TruncatedSeries::t(&ring, 8)).is_err());
    }

    #[test]
    fn families_interpolate() {
        let p = 3;
        let ring = UnramifiedRing::new(p, 1, 6).unwrap();
        let m = 18 * 6;
        for fam in [NormCompatibleFamily::Uniformizer, NormCompatibleFamily::CyclotomicUnit { c: 4 }, NormCompatibleFamily::Trivial]
        {
            let g = fam.series(&ring, m).unwrap();
            let rep = coleman_interpolation_check(&fam, &g, 3).unwrap();
            assert!(rep.pass(), "{rep:?}");
            assert_eq!(rep.levels[2].precision_exponent, 6);
        }
        // a wrong series is caught
        let fam = NormCompatibleFamily::CyclotomicUnit { c: 4 };
        let g = cyclotomic_unit_series(&ring, 7, m).unwrap();
        assert!(!coleman_interpolation_check(&fam, &g, 2).unwrap().pass());
    }

    #[test]
    fn family_json() {
        let fam: NormCompatibleFamily = serde_json::from_str(r#"{"kind": "cyclotomic_unit", "c": 4}"#).unwrap();
        assert_eq!(fam, NormCompatibleFamily::CyclotomicUnit { c: 4 });
    }
}
