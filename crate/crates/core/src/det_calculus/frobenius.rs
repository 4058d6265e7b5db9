use crate::algebra_core::linalg::{det_berkowitz, Matrix};
use crate::algebra_core::{group_ring_det, CycloGroupRing, CyclotomicNumber, QGroupRing, Scalar};
use crate::error::{Error, Result};
use crate::euler_units::PlaceData;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrobeniusMode {
    /// det(1 - a sigma | K_{n,v}).
    Full,
    /// det(1 - a sigma | K_{n,v} / (+)_w Q_p).
    Quotient,
}

/// sigma on K_{n,v} as a free Q[G]-module of rank r: e_i -> e_{i+1}, e_r -> tau e_1 with tau the
/// Frobenius of v in G, so that sigma^r = tau. With `inverse`, the matrix of sigma^{-1}.
pub fn companion(v: &PlaceData, r: usize, inverse: bool) -> Matrix<QGroupRing> {
    let g = v.group().clone();
    let zero = QGroupRing::zero(g.clone(), &rat0());
    let one = QGroupRing::one(g.clone(), &rat0());
    let mut s = vec![vec![zero; r]; r];
    let tau = if inverse { g.inv(v.frobenius()) } else { v.frobenius().to_vec() };
    let tau = QGroupRing::monomial(g, &tau, rat1());
    for i in 0..r {
        if inverse {
            // e_{i+1} -> e_i, e_1 -> tau^{-1} e_r
            if i + 1 < r {
                s[i][i + 1] = one.clone();
            }
        } else if i + 1 < r {
            s[i + 1][i] = one.clone();
        }
    }
    if inverse {
        s[r - 1][0] = tau;
    } else {
        s[0][r - 1] = tau;
    }
    s
}

fn rat0() -> BigRational {
    BigRational::from_integer(0.into())
}

fn rat1() -> BigRational {
    BigRational::from_integer(1.into())
}

fn one_minus_a<S: Scalar>(m: &Matrix<S>, a: &S) -> Matrix<S> {
    m.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, x)| {
                    let ax = a.mul(x).neg();
                    if i == j {
                        ax.add(&a.one_like())
                    } else {
                        ax
                    }
                })
                .collect()
        })
        .collect()
}

/// det(1 - a sigma) on K_{n,v} (or on its quotient by (+)_w Q_p), with [k_v : Q_p] = r.
/// `inverse` replaces sigma by sigma^{-1}.
pub fn det_frobenius(a: &BigRational, v: &PlaceData, r: usize, mode: FrobeniusMode, inverse: bool) -> Result<CycloGroupRing> {
    if r == 0 {
        return Err(Error::InvalidInput("local degree must be positive".into()));
    }
    let s = companion(v, r, inverse);
    match mode {
        FrobeniusMode::Full => {
            let g = v.group().clone();
            let a_g = QGroupRing::scalar(g, a.clone());
            Ok(group_ring_det(&one_minus_a(&s, &a_g))?.to_cyclo())
        }
        FrobeniusMode::Quotient => {
            // chi by chi: on chi trivial on D the sum of the Q_p is the line (1, ..., 1), fixed
            // by sigma; elsewhere it has no chi-part
            let g = v.group().clone();
            let ac = CyclotomicNumber::from_rational(a.clone());
            let values: Vec<CyclotomicNumber> = g
                .characters()
                .iter()
                .map(|chi| {
                    let sc: Matrix<CyclotomicNumber> =
                        s.iter().map(|row| row.iter().map(|x| x.chi_component(chi)).collect()).collect();
                    let trivial_on_d = v.decomposition().member_indices().iter().all(|&i| chi.value_exp_index(i).1 == 0);
                    if trivial_on_d {
                        quotient_by_fixed_line(&sc, &ac)
                    } else {
                        det_berkowitz(&one_minus_a(&sc, &ac), &CyclotomicNumber::one())
                    }
                })
                .collect::<Result<_>>()?;
            Ok(CycloGroupRing::from_chi_components(g, &values))
        }
    }
}

/// det(1 - a S) on k^r / k (1, ..., 1) for a matrix S fixing (1, ..., 1).
fn quotient_by_fixed_line(s: &Matrix<CyclotomicNumber>, a: &CyclotomicNumber) -> Result<CyclotomicNumber> {
    let r = s.len();
    let one = CyclotomicNumber::one();
    for row in s {
        if row.iter().fold(CyclotomicNumber::zero(), |acc, x| acc.add(x)) != one {
            return Err(Error::InvalidInput("sigma does not fix the diagonal line".into()));
        }
    }
    if r == 1 {
        return Ok(one);
    }
    // basis e_1, ..., e_{r-1} of the quotient; e_r = -(e_1 + ... + e_{r-1}) there
    let q: Matrix<CyclotomicNumber> = (0..r - 1)
        .map(|i| (0..r - 1).map(|j| s[i][j].sub(&s[r - 1][j])).collect())
        .collect();
    det_berkowitz(&one_minus_a(&q, a), &one)
}

/// The closed forms: 1 - a^r tau in full mode; chi-wise (1 - a^r)/(1 - a) (r at a = 1) on
/// characters trivial on D and 1 - a^r chi(tau) elsewhere in quotient mode.
pub fn det_frobenius_closed_form(a: &BigRational, v: &PlaceData, r: usize, mode: FrobeniusMode) -> CycloGroupRing {
    let g = v.group().clone();
    let ar = num_traits::pow(a.clone(), r);
    let full = QGroupRing::one(g.clone(), &rat0()).sub(&QGroupRing::monomial(g.clone(), v.frobenius(), ar.clone())).to_cyclo();
    match mode {
        FrobeniusMode::Full => full,
        FrobeniusMode::Quotient => {
            let geometric = (0..r).fold(rat0(), |s, k| s + num_traits::pow(a.clone(), k));
            let values: Vec<CyclotomicNumber> = g
                .characters()
                .iter()
                .map(|chi| {
                    let trivial_on_d = v.decomposition().member_indices().iter().all(|&i| chi.value_exp_index(i).1 == 0);
                    if trivial_on_d {
                        CyclotomicNumber::from_rational(geometric.clone())
                    } else {
                        full.chi_component(chi)
                    }
                })
                .collect();
            CycloGroupRing::from_chi_components(g, &values)
        }
    }
}

/// (1 - x^{-c}) / (1 - x) evaluated at x = 1, by exact division of Laurent polynomials.
pub fn bockstein_scalar_limit(c: i64) -> i64 {
    if c == 0 {
        return 0;
    }
    // numerator x^{|c|} (1 - x^{-c}) as a polynomial, with the power of x factored out
    let k = c.unsigned_abs() as usize;
    let mut num = vec![0i64; k + 1];
    if c > 0 {
        num[k] = 1;
        num[0] = -1;
    } else {
        num[0] = 1;
        num[k] = -1;
    }
    // divide by (1 - x): synthetic division by (x - 1), then negate
    let mut quo = vec![0i64; k];
    let mut carry = 0;
    for i in (1..=k).rev() {
        carry += num[i];
        quo[i - 1] = carry;
    }
    debug_assert_eq!(carry + num[0], 0);
    let at_one: i64 = -quo.iter().sum::<i64>();
    // the factored power of x is 1 at x = 1
    at_one
}
