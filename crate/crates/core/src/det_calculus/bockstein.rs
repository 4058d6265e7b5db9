use super::dvr::{inverse_local, random_invertible, residue_matrix, smith_form, TruncDvr};
use super::lines::{complement, coordinates, four_term_iso, ratio, sign_like};
use crate::algebra_core::linalg::{det_berkowitz, det_field, kernel, mat_mul, mat_vec, rank, solve, Matrix};
use crate::algebra_core::Scalar;
use crate::error::{Error, Result};
use crate::local_ring::Zpn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// C = [C^1 -d-> C^2] with C^1 = R^n, C^2 = R^m free over R = F_p[omega]/omega^P. The setting
/// asks for d of full rank m over the fraction field and omega H^2(C) = 0.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeComplex12 {
    pub d: Matrix<TruncDvr>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FreeComplex12Json {
    pub p: u64,
    pub precision: usize,
    /// d[i][j] lists the omega-coefficients of the (i, j) entry.
    pub d: Vec<Vec<Vec<i64>>>,
}

impl FreeComplex12 {
    pub fn from_json(j: &FreeComplex12Json) -> Result<Self> {
        let n = j.d.first().map_or(0, |r| r.len());
        if j.d.is_empty() || n == 0 || j.d.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("d must be a nonempty rectangular matrix".into()));
        }
        let d = j.d.iter().map(|r| r.iter().map(|c| TruncDvr::from_coeffs(j.p, j.precision, c)).collect()).collect();
        Ok(Self { d })
    }

    pub fn to_json(&self) -> FreeComplex12Json {
        let like = &self.d[0][0];
        FreeComplex12Json {
            p: like.p(),
            precision: like.precision(),
            d: self.d.iter().map(|r| r.iter().map(|x| x.coeffs().iter().map(|&c| c as i64).collect()).collect()).collect(),
        }
    }

    pub fn rank_c1(&self) -> usize {
        self.d[0].len()
    }

    pub fn rank_c2(&self) -> usize {
        self.d.len()
    }

    fn like(&self) -> &TruncDvr {
        &self.d[0][0]
    }
}

fn colmat<S: Scalar>(frame: &[Vec<S>], dim: usize) -> Matrix<S> {
    (0..dim).map(|i| frame.iter().map(|v| v[i].clone()).collect()).collect()
}

fn columns<S: Scalar>(m: &Matrix<S>, cols: usize) -> Vec<Vec<S>> {
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// a_1 ^ ... ^ a_n = c b_1 ^ ... ^ b_n for b a basis of the free module R^n.
fn ratio_local(a: &[Vec<TruncDvr>], b: &[Vec<TruncDvr>], like: &TruncDvr) -> Result<TruncDvr> {
    let dim = b.len();
    if dim == 0 {
        return Ok(like.one_like());
    }
    let binv = inverse_local(&colmat(b, dim))?;
    det_berkowitz(&mat_mul(&binv, &colmat(a, dim)), like)
}

fn residues(v: &[TruncDvr]) -> Vec<Zpn> {
    v.iter().map(|x| x.residue()).collect()
}

/// Structure of C computed from the Smith form: a basis x of H^1(C), lifts c~ with d(c~) a
/// basis of d(C^1), and s = dim H^2(C).
struct Structure {
    p: u64,
    n: usize,
    m: usize,
    s: usize,
    x: Vec<Vec<TruncDvr>>,
    lifts: Vec<Vec<TruncDvr>>,
}

fn structure(c: &FreeComplex12) -> Result<Structure> {
    let (m, n) = (c.rank_c2(), c.rank_c1());
    if m > n {
        return Err(Error::InvalidInput(format!("rank C^2 = {m} exceeds rank C^1 = {n}")));
    }
    let sf = smith_form(&c.d, 1)?;
    if sf.exponents.len() != m {
        return Err(Error::InvalidInput("d is not of full rank; H^2 is not torsion".into()));
    }
    let s = sf.exponents.iter().filter(|&&e| e == 1).count();
    let vcols = columns(&sf.v, n);
    Ok(Structure { p: c.like().p(), n, m, s, x: vcols[m..].to_vec(), lifts: vcols[..m].to_vec() })
}

/// Omega-divisible part of d applied to the constant lift of a residue vector in ker(d mod omega).
fn connecting(c: &FreeComplex12, v: &[Zpn]) -> Result<Vec<Zpn>> {
    let prec = c.like().precision();
    let lift: Vec<TruncDvr> = v.iter().map(|a| TruncDvr::lift(a, prec)).collect();
    mat_vec(&c.d, &lift, c.like())
        .iter()
        .map(|y| y.div_omega(1).map(|q| q.residue()))
        .collect()
}

/// Determinant of xi = (c_1 ^ ... ^ c_n) (x) (y_1 ^ ... ^ y_m)^* in Det(H^1(C)) (x) Frac, as
/// delta with xi = delta x_1 ^ ... ^ x_r (always of valuation >= s).
fn top_delta(c: &FreeComplex12, st: &Structure, cf: &[Vec<TruncDvr>], yf: &[Vec<TruncDvr>]) -> Result<TruncDvr> {
    let like = c.like();
    let mut basis = st.x.clone();
    basis.extend(st.lifts.iter().cloned());
    let r1 = ratio_local(cf, &basis, like)?;
    let images: Vec<Vec<TruncDvr>> = st.lifts.iter().map(|v| mat_vec(&c.d, v, like)).collect();
    let r2 = if st.m == 0 {
        like.one_like()
    } else {
        det_berkowitz(&mat_mul(&inverse_local(&colmat(yf, st.m))?, &colmat(&images, st.m)), like)?
    };
    Ok(r1.mul(&r2))
}

/// Data of the reduced complex over k = F_p, with the convention
/// (h ^ c~) (x) (u ^ d(c~))^* -> h (x) [u]^* for Det^{-1}(C-bar) = Det(H^1) (x) Det^{-1}(H^2).
struct Reduced {
    h: Vec<Vec<Zpn>>,
    cl: Vec<Vec<Zpn>>,
    dcl: Vec<Vec<Zpn>>,
    u: Vec<Vec<Zpn>>,
    one: Zpn,
}

impl Reduced {
    fn new(c: &FreeComplex12, st: &Structure) -> Self {
        let one = Zpn::new(st.p, 1, 1);
        let dbar = residue_matrix(&c.d);
        let h = kernel(&dbar, st.n, &one);
        let cl = complement(&h, st.n, &one);
        let dcl: Vec<Vec<Zpn>> = cl.iter().map(|v| mat_vec(&dbar, v, &one)).collect();
        let u = complement(&dcl, st.m, &one);
        Self { h, cl, dcl, u, one }
    }

    /// xi-bar = rho h (x) [u]^*.
    fn rho(&self, cf: &[Vec<Zpn>], yf: &[Vec<Zpn>]) -> Result<Zpn> {
        let mut b1 = self.h.clone();
        b1.extend(self.cl.iter().cloned());
        let mut b2 = self.u.clone();
        b2.extend(self.dcl.iter().cloned());
        let den = ratio(yf, &b2, &self.one)?;
        Ok(ratio(cf, &b1, &self.one)?.mul(&den.try_inv().ok_or(Error::DivisionByZero)?))
    }

    /// Coordinates of classes in H^2(C-bar) = k^m / im d-bar with respect to [u].
    fn h2_coords(&self, ys: &[Vec<Zpn>]) -> Result<Vec<Vec<Zpn>>> {
        let mut b = self.u.clone();
        b.extend(self.dcl.iter().cloned());
        Ok(coordinates(ys, &b, &self.one)?.into_iter().map(|row| row[..self.u.len()].to_vec()).collect())
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct DetAReport {
    pub instance: u64,
    pub p: u64,
    pub rank_c1: usize,
    pub rank_c2: usize,
    pub s: usize,
    pub top: u64,
    pub bottom: u64,
    pub pass: bool,
}

/// Both routes of the square relating Det^{-1}_R(C) = omega^s Det_R(H^1(C)) to the Bockstein
/// isomorphism on C-bar, applied to xi = (wedge cf) (x) (wedge yf)^*. Each route ends at a
/// multiple of x-bar_1 ^ ... ^ x-bar_r, and the multiples are compared.
pub fn bockstein_det_a(c: &FreeComplex12, cf: &[Vec<TruncDvr>], yf: &[Vec<TruncDvr>]) -> Result<(Zpn, Zpn, usize)> {
    let st = structure(c)?;
    // upper route: multiply by omega^{-s}, then reduce
    let delta = top_delta(c, &st, cf, yf)?;
    let top = delta.div_omega(st.s)?.residue();
    // lower route: reduce, then the Bockstein isomorphism
    let red = Reduced::new(c, &st);
    let cbar: Vec<Vec<Zpn>> = cf.iter().map(|v| residues(v)).collect();
    let ybar: Vec<Vec<Zpn>> = yf.iter().map(|v| residues(v)).collect();
    let rho = red.rho(&cbar, &ybar)?;
    let xbar: Vec<Vec<Zpn>> = st.x.iter().map(|v| residues(v)).collect();
    let mut wt: Vec<Vec<Zpn>> = Vec::new();
    let mut cur = xbar.clone();
    for v in &red.h {
        cur.push(v.clone());
        if rank(&cur) == cur.len() {
            wt.push(v.clone());
        } else {
            cur.pop();
        }
    }
    let w: Vec<Vec<Zpn>> = wt.iter().map(|v| connecting(c, v)).collect::<Result<_>>()?;
    let mut xw = xbar;
    xw.extend(wt);
    let split = ratio(&red.h, &xw, &red.one)?;
    let ev = det_or_one(&red.h2_coords(&w)?, &red.one)?;
    Ok((top, rho.mul(&split).mul(&ev), st.s))
}

fn det_or_one(m: &Matrix<Zpn>, one: &Zpn) -> Result<Zpn> {
    if m.is_empty() {
        Ok(one.one_like())
    } else {
        det_field(m, one)
    }
}

/// A random complex with omega H^2 = 0 and dim H^2 = s, as A diag(omega^{e_i}) B.
pub fn random_complex<G: Rng>(rng: &mut G, p: u64, prec: usize, n: usize, m: usize, s: usize) -> FreeComplex12 {
    let mut dd: Matrix<TruncDvr> = vec![vec![TruncDvr::zero(p, prec); n]; m];
    let mut ones: Vec<usize> = (0..m).collect();
    for i in (1..ones.len()).rev() {
        ones.swap(i, rng.gen_range(0..=i));
    }
    for i in 0..m {
        let e = usize::from(ones[..s].contains(&i));
        dd[i][i] = TruncDvr::omega_pow(p, prec, e);
    }
    let a = random_invertible(rng, m, p, prec);
    let b = random_invertible(rng, n, p, prec);
    FreeComplex12 { d: mat_mul(&mat_mul(&a, &dd), &b) }
}

fn random_basis<G: Rng>(rng: &mut G, dim: usize, p: u64, prec: usize) -> Vec<Vec<TruncDvr>> {
    if dim == 0 {
        return vec![];
    }
    columns(&random_invertible(rng, dim, p, prec), dim)
}

/// Dimensions (p, n, m, s) for the randomised suites: ranks at most 4, s at most 2.
fn random_shape<G: Rng>(rng: &mut G, need_r_ge_s: bool) -> (u64, usize, usize, usize) {
    loop {
        let p = [3u64, 5, 7][rng.gen_range(0..3)];
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(1..=n);
        let s = rng.gen_range(0..=m.min(2));
        if !need_r_ge_s || n - m >= s {
            return (p, n, m, s);
        }
    }
}

pub const SUITE_PRECISION: usize = 6;

pub fn det_a_instance(seed: u64) -> Result<DetAReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (p, n, m, s) = random_shape(&mut rng, false);
    let c = random_complex(&mut rng, p, SUITE_PRECISION, n, m, s);
    let cf = random_basis(&mut rng, n, p, SUITE_PRECISION);
    let yf = random_basis(&mut rng, m, p, SUITE_PRECISION);
    let (top, bottom, s_found) = bockstein_det_a(&c, &cf, &yf)?;
    Ok(DetAReport { instance: seed, p, rank_c1: n, rank_c2: m, s: s_found, top: top.value(), bottom: bottom.value(), pass: top == bottom && s_found == s })
}

/// The complex with a surjection phi-bar: H^1(C-bar) -> H^2(C-bar), presented by a matrix
/// Phi: C-bar^1 -> C-bar^2 via phi-bar(z) = [Phi z].
#[derive(Clone, Debug)]
pub struct Det02Setting {
    pub complex: FreeComplex12,
    pub phi: Matrix<Zpn>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Det02Report {
    pub instance: u64,
    pub s: usize,
    pub sign_measured: i64,
    pub pass: bool,
}

/// The sign between the two routes Det^{-1}_R(C) -> Det_k(H^1_f(C-bar)) for xi given by the
/// frames cf, yf: via Det_R(H^1_f(C)) and the four-term isomorphism alpha, or via C-bar and
/// the sequence 0 -> H^1_f(C-bar) -> H^1(C-bar) -> H^2(C-bar) -> 0. Returns (sign, s).
pub fn det02_sign(setting: &Det02Setting, cf: &[Vec<TruncDvr>], yf: &[Vec<TruncDvr>]) -> Result<(i64, usize)> {
    let c = &setting.complex;
    let st = structure(c)?;
    let (r, s) = (st.n - st.m, st.s);
    let red = Reduced::new(c, &st);
    let one = red.one;
    let xbar: Vec<Vec<Zpn>> = st.x.iter().map(|v| residues(v)).collect();
    // phi on H^1(C) in x-coordinates, valued in H^2 in u-coordinates
    let phix = red.h2_coords(&xbar.iter().map(|v| mat_vec(&setting.phi, v, &one)).collect::<Vec<_>>())?;
    let pmat: Matrix<Zpn> = (0..s).map(|i| (0..r).map(|j| phix[j][i]).collect()).collect();
    if s > 0 && rank(&pmat) != s {
        return Err(Error::InvalidInput("phi restricted to H^1(C) is not surjective onto H^2".into()));
    }
    // H^1_f(C) = span(kappa) + omega span(tau) in x-coordinates
    let kappa = if s == 0 { identity_frame(r, &one) } else { kernel(&pmat, r, &one) };
    let tau = complement(&kappa, r, &one);
    let mut kt = kappa.clone();
    kt.extend(tau.iter().cloned());
    let unit_part = ratio(&kt, &identity_frame(r, &one), &one)?;

    // upper route: xi = delta x = (delta / mu) z with mu = omega^s unit_part
    let delta = top_delta(c, &st, cf, yf)?;
    let top_scalar = delta.div_omega(s)?.residue().mul(&unit_part.try_inv().ok_or(Error::DivisionByZero)?);

    // H^1_f(C-bar) = ker phi-bar inside H^1(C-bar), basis q
    let phih = red.h2_coords(&red.h.iter().map(|v| mat_vec(&setting.phi, v, &one)).collect::<Vec<_>>())?;
    let qmat: Matrix<Zpn> = (0..s).map(|i| (0..red.h.len()).map(|l| phih[l][i]).collect()).collect();
    let combine = |coef: &[Zpn]| -> Vec<Zpn> {
        (0..st.n).map(|k| coef.iter().zip(&red.h).fold(one.zero_like(), |a, (c, v)| a.add(&c.mul(&v[k])))).collect()
    };
    let qcoef = if s == 0 { identity_frame(red.h.len(), &one) } else { kernel(&qmat, red.h.len(), &one) };
    let q: Vec<Vec<Zpn>> = qcoef.iter().map(|c| combine(c)).collect();

    // four-term sequence 0 -> H^2(C) -f-> H^1_f(C)-bar -g-> H^1_f(C-bar) -h-> H^2(C) -> 0
    let kt_cols: Matrix<Zpn> = (0..r).map(|i| kt.iter().map(|v| v[i]).collect()).collect();
    let mut fm: Matrix<Zpn> = vec![vec![one.zero_like(); s]; r];
    for i in 0..s {
        let e: Vec<Zpn> = (0..s).map(|k| if k == i { one } else { one.zero_like() }).collect();
        let a = solve(&pmat, &e, &one).ok_or_else(|| Error::InvalidInput("phi not surjective".into()))?;
        let ab = solve(&kt_cols, &a, &one).unwrap();
        // omega a = sum omega a'_i kappa_i + sum b'_j (omega tau_j); reduce in z-coordinates
        for j in 0..s {
            fm[r - s + j][i] = ab[r - s + j];
        }
    }
    let gimg: Vec<Vec<Zpn>> = (0..r)
        .map(|i| {
            if i < r - s {
                let v: Vec<Zpn> = (0..st.n).map(|k| kappa[i].iter().zip(&xbar).fold(one.zero_like(), |a, (c, x)| a.add(&c.mul(&x[k])))).collect();
                v
            } else {
                vec![one.zero_like(); st.n]
            }
        })
        .collect();
    let gq = coordinates(&gimg, &q, &one)?;
    let gm: Matrix<Zpn> = (0..r).map(|i| gq.iter().map(|col| col[i]).collect()).collect();
    let hq = red.h2_coords(&q.iter().map(|v| connecting(c, v)).collect::<Result<Vec<_>>>()?)?;
    let hm: Matrix<Zpn> = (0..s).map(|i| hq.iter().map(|col| col[i]).collect()).collect();
    let (alpha, img) = four_term_iso(&fm, &gm, &hm, (s, r), &identity_frame(r, &one), &one)?;
    let top = top_scalar.mul(&alpha).mul(&ratio(&img, &identity_frame(r, &one), &one)?);

    // lower route: xi-bar = rho h (x) [u]^*, split h along q and lifts of [u]
    let cbar: Vec<Vec<Zpn>> = cf.iter().map(|v| residues(v)).collect();
    let ybar: Vec<Vec<Zpn>> = yf.iter().map(|v| residues(v)).collect();
    let rho = red.rho(&cbar, &ybar)?;
    let mut qt = q.clone();
    for i in 0..s {
        let e: Vec<Zpn> = (0..s).map(|k| if k == i { one } else { one.zero_like() }).collect();
        let y = solve(&qmat, &e, &one).ok_or_else(|| Error::InvalidInput("phi-bar is not surjective".into()))?;
        qt.push(combine(&y));
    }
    let bottom = rho.mul(&ratio(&red.h, &qt, &one)?);

    let ratio_val = bottom.mul(&top.try_inv().ok_or(Error::DivisionByZero)?);
    let sign = if ratio_val == one {
        1
    } else if ratio_val == one.neg() {
        -1
    } else {
        return Err(Error::InvalidInput(format!("routes differ by {}, not a sign", ratio_val.value())));
    };
    Ok((sign, s))
}

fn identity_frame(n: usize, one: &Zpn) -> Vec<Vec<Zpn>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { *one } else { one.zero_like() }).collect()).collect()
}

pub fn random_det02_setting<G: Rng>(rng: &mut G, p: u64, prec: usize, n: usize, m: usize, s: usize) -> Det02Setting {
    let complex = random_complex(rng, p, prec, n, m, s);
    loop {
        let phi: Matrix<Zpn> = (0..m).map(|_| (0..n).map(|_| Zpn::new(p, 1, rng.gen_range(0..p as i64))).collect()).collect();
        let setting = Det02Setting { complex: complex.clone(), phi };
        let cf = identity_basis(n, p, prec);
        let yf = identity_basis(m, p, prec);
        if det02_sign(&setting, &cf, &yf).is_ok() {
            return setting;
        }
    }
}

fn identity_basis(n: usize, p: u64, prec: usize) -> Vec<Vec<TruncDvr>> {
    (0..n).map(|i| (0..n).map(|j| TruncDvr::omega_pow(p, prec, if i == j { 0 } else { prec })).collect()).collect()
}

/// det02 on the random instance with the given seed; passes when the sign is (-1)^s.
pub fn det02_sign_check(seed: u64) -> Result<Det02Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (p, n, m, s) = random_shape(&mut rng, true);
    let setting = random_det02_setting(&mut rng, p, SUITE_PRECISION, n, m, s);
    let cf = random_basis(&mut rng, n, p, SUITE_PRECISION);
    let yf = random_basis(&mut rng, m, p, SUITE_PRECISION);
    let (sign, s_found) = det02_sign(&setting, &cf, &yf)?;
    let want = sign_like(&Zpn::new(3, 1, 1), s_found as i64) == Zpn::new(3, 1, 1);
    Ok(Det02Report { instance: seed, s: s_found, sign_measured: sign, pass: (sign == 1) == want && s_found == s })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dv(p: u64, c: &[i64]) -> TruncDvr {
        TruncDvr::from_coeffs(p, 4, c)
    }

    #[test]
    fn det_a_ranks_two_one() {
        // C = [R^2 -(omega, 0)-> R] over F_5[omega]/omega^4: H^1 = R e_2, H^2 = k
        let c = FreeComplex12 { d: vec![vec![dv(5, &[0, 1]), dv(5, &[0])]] };
        let cf = identity_basis(2, 5, 4);
        let yf = identity_basis(1, 5, 4);
        let (top, bottom, s) = bockstein_det_a(&c, &cf, &yf).unwrap();
        assert_eq!(s, 1);
        assert_eq!(top, bottom);
        assert!(!top.is_zero());
    }

    #[test]
    fn det02_proof_basis() {
        // r = 1, m = 1, s = 1 on the proof's basis: d = (0, omega), phi(x_1) = [y_1]
        let c = FreeComplex12 { d: vec![vec![dv(3, &[0]), dv(3, &[0, 1])]] };
        let one = Zpn::new(3, 1, 1);
        let setting = Det02Setting { complex: c, phi: vec![vec![one, one.zero_like()]] };
        let (sign, s) = det02_sign(&setting, &identity_basis(2, 3, 4), &identity_basis(1, 3, 4)).unwrap();
        assert_eq!((sign, s), (-1, 1));
    }

    #[test]
    fn det02_without_torsion_is_trivial() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let setting = random_det02_setting(&mut rng, 5, 6, 3, 2, 0);
        let (sign, s) = det02_sign(&setting, &random_basis(&mut rng, 3, 5, 6), &random_basis(&mut rng, 2, 5, 6)).unwrap();
        assert_eq!((sign, s), (1, 0));
    }

    #[test]
    fn randomized_suites() {
        for seed in 0..60 {
            let a = det_a_instance(seed).unwrap();
            assert!(a.pass, "{a:?}");
            let b = det02_sign_check(seed).unwrap();
            assert!(b.pass, "{b:?}");
        }
    }

    #[test]
    fn json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let c = random_complex(&mut rng, 3, 5, 3, 2, 1);
        assert_eq!(FreeComplex12::from_json(&c.to_json()).unwrap(), c);
    }
}
