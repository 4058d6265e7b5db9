use crate::algebra_core::linalg::{det_field, kernel, mat_vec, rank, solve, Matrix};
use crate::algebra_core::Scalar;
use crate::error::{Error, Result};

/// A presented element c * (v_1 ^ ... ^ v_r) of Det(V), V the span of the v_i inside a fixed
/// ambient space, or of its inverse Det(V)^{-1} = (Det V^*, -r) when `dual` is set (then the
/// element is c * (v_1 ^ ... ^ v_r)^*, the functional taking value 1 on the wedge).
#[derive(Clone, Debug, PartialEq)]
pub struct GradedLine<S: Scalar> {
    pub coeff: S,
    pub frame: Vec<Vec<S>>,
    pub dual: bool,
}

impl<S: Scalar> GradedLine<S> {
    pub fn new(coeff: S, frame: Vec<Vec<S>>) -> Self {
        Self { coeff, frame, dual: false }
    }

    pub fn dual_of(coeff: S, frame: Vec<Vec<S>>) -> Self {
        Self { coeff, frame, dual: true }
    }

    pub fn grade(&self) -> i64 {
        let r = self.frame.len() as i64;
        if self.dual {
            -r
        } else {
            r
        }
    }
}

pub fn sign_like<S: Scalar>(like: &S, e: i64) -> S {
    if e.rem_euclid(2) == 0 {
        like.one_like()
    } else {
        like.one_like().neg()
    }
}

/// (-1)^{rs}, the sign of l (x) m -> m (x) l for lines of grades r and s.
pub fn swap_sign(r: i64, s: i64) -> i64 {
    if (r * s).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// psi: l (x) m -> (-1)^{rs} m (x) l, returning the swapped pair and its scalar.
pub fn graded_swap<S: Scalar>(l: &GradedLine<S>, m: &GradedLine<S>) -> (GradedLine<S>, GradedLine<S>, S) {
    let s = sign_like(&l.coeff, l.grade() * m.grade());
    (m.clone(), l.clone(), s)
}

/// Coordinates of the vectors `a` in the basis `b` of the subspace they both span.
pub fn coordinates<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>], one: &S) -> Result<Matrix<S>> {
    if b.is_empty() {
        return if a.is_empty() {
            Ok(vec![])
        } else {
            Err(Error::DimensionMismatch("vectors outside the zero subspace".into()))
        };
    }
    let dim = b[0].len();
    let cols: Matrix<S> = (0..dim).map(|i| b.iter().map(|v| v[i].clone()).collect()).collect();
    a.iter()
        .map(|v| solve(&cols, v, one).ok_or_else(|| Error::DimensionMismatch("vector outside the spanned subspace".into())))
        .collect()
}

/// The scalar c with a_1 ^ ... ^ a_r = c b_1 ^ ... ^ b_r, where b is a basis of the span.
pub fn ratio<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>], one: &S) -> Result<S> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!("frames of lengths {} and {}", a.len(), b.len())));
    }
    if a.is_empty() {
        return Ok(one.one_like());
    }
    let m = coordinates(a, b, one)?;
    det_field(&m, one)
}

/// ev_{(L,r)}: x (x) f -> f(x), with x in L and f in L^{-1} presented on a frame of the same line.
pub fn evaluation<S: Scalar>(x: &GradedLine<S>, f: &GradedLine<S>) -> Result<S> {
    if x.dual || !f.dual {
        return Err(Error::InvalidInput("evaluation pairs a line with its inverse".into()));
    }
    let one = x.coeff.one_like();
    Ok(x.coeff.mul(&f.coeff).mul(&ratio(&x.frame, &f.frame, &one)?))
}

/// The left inverse f (x) x -> ev(psi(f (x) x)); differs from f(x) by (-1)^r.
pub fn evaluation_left<S: Scalar>(f: &GradedLine<S>, x: &GradedLine<S>) -> Result<S> {
    let (a, b, s) = graded_swap(f, x);
    Ok(s.mul(&evaluation(&a, &b)?))
}

/// The naive ev_{(L,r)^{-1}}: f (x) x -> f(x).
pub fn evaluation_naive<S: Scalar>(f: &GradedLine<S>, x: &GradedLine<S>) -> Result<S> {
    evaluation(x, f)
}

/// Concatenate frames of lines in complementary subspaces: Det(V) (x) Det(W) = Det(V + W).
pub fn tensor<S: Scalar>(l: &GradedLine<S>, m: &GradedLine<S>) -> GradedLine<S> {
    let mut frame = l.frame.clone();
    frame.extend(m.frame.iter().cloned());
    GradedLine { coeff: l.coeff.mul(&m.coeff), frame, dual: l.dual }
}

/// theta^{-1}: (M^{-1} (x) L^{-1}) -> (L (x) M)^{-1}, g (x) f -> (l ^ m)^* scaled.
pub fn theta_inverse<S: Scalar>(g: &GradedLine<S>, f: &GradedLine<S>) -> GradedLine<S> {
    let mut frame = f.frame.clone();
    frame.extend(g.frame.iter().cloned());
    GradedLine { coeff: f.coeff.mul(&g.coeff), frame, dual: true }
}

/// Both routes around the product compatibility square: ev_L(x (x) ev_M(y (x) g) f) and
/// ev_{L (x) M}((x (x) y) (x) theta^{-1}(g (x) f)).
pub fn product_inverse_square<S: Scalar>(
    x: &GradedLine<S>,
    y: &GradedLine<S>,
    g: &GradedLine<S>,
    f: &GradedLine<S>,
) -> Result<(S, S)> {
    let left = evaluation(y, g)?.mul(&evaluation(x, f)?);
    let right = evaluation(&tensor(x, y), &theta_inverse(g, f))?;
    Ok((left, right))
}

fn mat_apply<S: Scalar>(m: &Matrix<S>, v: &[S], one: &S) -> Vec<S> {
    mat_vec(m, v, &one.zero_like())
}

fn cols<S: Scalar>(m: &Matrix<S>) -> usize {
    m.first().map_or(0, |r| r.len())
}

/// Extend independent vectors to a basis of k^dim with standard vectors; returns the added ones.
pub fn complement<S: Scalar>(vs: &[Vec<S>], dim: usize, one: &S) -> Vec<Vec<S>> {
    let mut cur: Vec<Vec<S>> = vs.to_vec();
    let mut added = Vec::new();
    for i in 0..dim {
        let mut e = vec![one.zero_like(); dim];
        e[i] = one.one_like();
        cur.push(e.clone());
        if rank(&cur) == cur.len() {
            added.push(e);
        } else {
            cur.pop();
        }
    }
    added
}

/// Preimages of the vectors `ys` under `m`.
pub fn lifts<S: Scalar>(m: &Matrix<S>, ys: &[Vec<S>], one: &S) -> Result<Vec<Vec<S>>> {
    ys.iter()
        .map(|y| solve(m, y, one).ok_or_else(|| Error::InvalidInput("vector has no preimage".into())))
        .collect()
}

fn is_zero_map<S: Scalar>(m: &Matrix<S>) -> bool {
    m.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

fn compose<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>, one: &S) -> Matrix<S> {
    // a after b
    let rows = a.len();
    let inner = b.len();
    let c = cols(b);
    (0..rows)
        .map(|i| {
            (0..c)
                .map(|j| (0..inner).fold(one.zero_like(), |s, k| s.add(&a[i][k].mul(&b[k][j]))))
                .collect()
        })
        .collect()
}

/// Det(P1) (x) Det(P3) = Det(P2) for 0 -> P1 -f-> P2 -g-> P3 -> 0 (P_i = k^{n_i}, maps as
/// matrices acting on columns): x (x) z -> f(x) ^ lifts(z). `lift_shift` adds an element of
/// ker g to every lift, to test independence of the choice.
pub fn ses_isomorphism<S: Scalar>(
    f: &Matrix<S>,
    g: &Matrix<S>,
    dims: (usize, usize, usize),
    x: &[Vec<S>],
    z: &[Vec<S>],
    lift_shift: Option<&[Vec<S>]>,
    one: &S,
) -> Result<Vec<Vec<S>>> {
    let (n1, n2, n3) = dims;
    if n1 + n3 != n2 {
        return Err(Error::DimensionMismatch("ranks do not add up".into()));
    }
    if n1 > 0 && rank(f) != n1 {
        return Err(Error::InvalidInput("first map is not injective".into()));
    }
    if n3 > 0 && rank(g) != n3 {
        return Err(Error::InvalidInput("second map is not surjective".into()));
    }
    if n1 > 0 && n3 > 0 && !is_zero_map(&compose(g, f, one)) {
        return Err(Error::InvalidInput("sequence is not a complex".into()));
    }
    let mut out: Vec<Vec<S>> = x.iter().map(|v| mat_apply(f, v, one)).collect();
    let mut zl = if n3 == 0 { vec![] } else { lifts(g, z, one)? };
    if let Some(shift) = lift_shift {
        for (l, s) in zl.iter_mut().zip(shift) {
            let fs = mat_apply(f, s, one);
            *l = l.iter().zip(&fs).map(|(a, b)| a.add(b)).collect();
        }
    }
    out.extend(zl);
    Ok(out)
}

/// The isomorphism Det(A1) = Det(A2) for 0 -> A -f-> A1 -g-> A2 -h-> A -> 0, built as
/// Det(A1) = Det(A) (x) Det(B) -psi-> Det(B) (x) Det(A) = Det(A2) with B = im g.
/// Returns the image of the wedge of `frame1` as (scalar, frame of A2).
pub fn four_term_iso<S: Scalar>(
    f: &Matrix<S>,
    g: &Matrix<S>,
    h: &Matrix<S>,
    dims: (usize, usize),
    frame1: &[Vec<S>],
    one: &S,
) -> Result<(S, Vec<Vec<S>>)> {
    let (da, d1) = dims;
    let r = da;
    let s = d1 - da;
    if frame1.len() != d1 {
        return Err(Error::DimensionMismatch("frame of A1 has the wrong length".into()));
    }
    let check = |ok: bool, what: &str| if ok { Ok(()) } else { Err(Error::InvalidInput(format!("not exact at {what}"))) };
    if r > 0 {
        check(rank(f) == r, "A (f injective)")?;
        check(rank(h) == r, "A (h surjective)")?;
    }
    if d1 > 0 {
        let gk = kernel(g, d1, one).len();
        check(gk == r, "A1")?;
        if r > 0 {
            check(is_zero_map(&compose(g, f, one)), "A1")?;
            check(is_zero_map(&compose(h, g, one)), "A2")?;
        }
        check(rank(g) == s, "A2")?;
    }
    let alpha: Vec<Vec<S>> = (0..r)
        .map(|i| (0..r).map(|j| if i == j { one.one_like() } else { one.zero_like() }).collect())
        .collect();
    let fa: Vec<Vec<S>> = alpha.iter().map(|v| mat_apply(f, v, one)).collect();
    let beta_t = complement(&fa, d1, one);
    let beta: Vec<Vec<S>> = beta_t.iter().map(|v| mat_apply(g, v, one)).collect();
    let mut basis1 = fa.clone();
    basis1.extend(beta_t);
    let c1 = ratio(frame1, &basis1, one)?;
    let alpha_t = if r == 0 { vec![] } else { lifts(h, &alpha, one)? };
    let mut out = beta;
    out.extend(alpha_t);
    let sign = sign_like(one, (r * s) as i64);
    Ok((c1.mul(&sign), out))
}
