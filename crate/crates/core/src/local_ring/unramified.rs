use super::zpn::Zpn;
use crate::algebra_core::arith::{factorize, inv_mod, ipow, is_prime, mul_mod, pow_mod, vp};
use crate::algebra_core::scalar::Scalar;
use crate::error::{Error, Result};
use std::fmt;
use std::sync::Arc;

/// Conway polynomials (constant term first) for the small fields used here. Each entry is
/// re-checked for irreducibility and primitivity in the tests.
const CONWAY: &[(u64, usize, &[u64])] = &[
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (5, 4, &[2, 4, 4, 0, 1]),
    (7, 2, &[3, 6, 1]),
    (7, 3, &[4, 0, 6, 1]),
    (11, 2, &[2, 7, 1]),
    (11, 3, &[9, 2, 0, 1]),
    (13, 2, &[2, 12, 1]),
    (13, 3, &[11, 2, 0, 1]),
];

/// W(F_{p^r}) / p^N realized as (Z/p^N)[x]/(f) with f monic of degree r and irreducible mod p.
pub struct UnramifiedRing {
    p: u64,
    r: usize,
    n: u32,
    pn: u64,
    modulus: Vec<u64>,
    /// column j holds sigma(x^j)
    frob: Vec<Vec<u64>>,
    frob_inv: Vec<Vec<u64>>,
}

impl fmt::Debug for UnramifiedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnramifiedRing(p={}, r={}, N={}, f={:?})", self.p, self.r, self.n, self.modulus)
    }
}

impl PartialEq for UnramifiedRing {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p && self.r == o.r && self.n == o.n && self.modulus == o.modulus
    }
}

/// Defining polynomial mod p: Conway when tabulated, else the least irreducible monic
/// polynomial in the order of (a_{r-1}, ..., a_0) read as a base-p number.
pub fn defining_polynomial(p: u64, r: usize) -> Vec<u64> {
    if let Some((_, _, c)) = CONWAY.iter().find(|(q, d, _)| *q == p && *d == r) {
        return c.to_vec();
    }
    if r == 1 {
        return vec![0, 1];
    }
    let total = ipow(p, r as u32);
    for code in 0..total {
        let mut f = vec![0u64; r + 1];
        let mut c = code;
        for i in (0..r).rev() {
            f[i] = c % p;
            c /= p;
        }
        f[r] = 1;
        if f[0] != 0 && fp_is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

// ---- polynomials over F_p (coefficients low degree first) ----

fn fp_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

fn fp_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    fp_rem(&prod, f, p)
}

fn fp_rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let d = f.len() - 1;
    let mut a = a.to_vec();
    let lead_inv = inv_mod(f[d], p).unwrap();
    while a.len() > d {
        let c = mul_mod(a.pop().unwrap(), lead_inv, p);
        let k = a.len() - d;
        for j in 0..d {
            a[k + j] = (a[k + j] + p - mul_mod(c, f[j], p)) % p;
        }
    }
    a.resize(d.max(1), 0);
    a
}

fn fp_powmod(base: &[u64], mut e: u128, f: &[u64], p: u64) -> Vec<u64> {
    let mut r = vec![1u64];
    let mut b = fp_rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            r = fp_mulmod(&r, &b, f, p);
        }
        e >>= 1;
        if e > 0 {
            b = fp_mulmod(&b, &b, f, p);
        }
    }
    fp_rem(&r, f, p)
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = fp_trim(a.to_vec());
    let mut b = fp_trim(b.to_vec());
    while !(b.len() == 1 && b[0] == 0) {
        let r = fp_trim(fp_rem(&a, &b, p));
        a = b;
        b = r;
    }
    a
}

pub fn fp_is_irreducible(f: &[u64], p: u64) -> bool {
    let r = f.len() - 1;
    let x = vec![0u64, 1];
    let q = p as u128;
    let xr = fp_powmod(&x, q.pow(r as u32), f, p);
    if fp_trim(xr) != fp_trim(fp_rem(&x, f, p)) {
        return false;
    }
    for (s, _) in factorize(r as u64) {
        let xs = fp_powmod(&x, q.pow((r as u64 / s) as u32), f, p);
        let mut diff = xs.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = fp_gcd(f, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

pub fn fp_is_primitive(f: &[u64], p: u64) -> bool {
    let r = f.len() - 1;
    let order = (p as u128).pow(r as u32) - 1;
    let x = vec![0u64, 1];
    if fp_trim(fp_powmod(&x, order, f, p)) != vec![1] {
        return false;
    }
    factorize(order as u64)
        .into_iter()
        .all(|(q, _)| fp_trim(fp_powmod(&x, order / q as u128, f, p)) != vec![1])
}

impl UnramifiedRing {
    pub fn new(p: u64, r: usize, n: u32) -> Result<Arc<Self>> {
        if p == 2 || !is_prime(p) {
            return Err(Error::InvalidInput(format!("p = {p} must be an odd prime")));
        }
        if r == 0 || n == 0 {
            return Err(Error::InvalidInput("r and N must be positive".into()));
        }
        let f = defining_polynomial(p, r);
        Ok(Self::with_modulus(p, r, n, f))
    }

    fn with_modulus(p: u64, r: usize, n: u32, modulus: Vec<u64>) -> Arc<Self> {
        let pn = ipow(p, n);
        let mut ring = Self { p, r, n, pn, modulus, frob: vec![], frob_inv: vec![] };
        ring.frob = ring.compute_frobenius();
        let mut inv_cols = Vec::with_capacity(r);
        for j in 0..r {
            let mut e = vec![0u64; r];
            e[j] = 1;
            inv_cols.push(ring.apply_matrix_pow(&ring.frob, &e, r - 1));
        }
        ring.frob_inv = inv_cols;
        Arc::new(ring)
    }

    /// Same ring at a different p-adic precision.
    pub fn at_precision(&self, n: u32) -> Arc<Self> {
        Self::with_modulus(self.p, self.r, n, self.modulus.clone())
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn degree(&self) -> usize {
        self.r
    }
    pub fn precision(&self) -> u32 {
        self.n
    }
    pub fn modulus_pn(&self) -> u64 {
        self.pn
    }
    pub fn defining_poly(&self) -> &[u64] {
        &self.modulus
    }

    // ---- raw arithmetic on coefficient slices of length r ----

    pub fn add_raw(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.pn).collect()
    }

    pub fn sub_raw(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + self.pn - y) % self.pn).collect()
    }

    pub fn scale_raw(&self, a: &[u64], c: u64) -> Vec<u64> {
        a.iter().map(|x| mul_mod(*x, c, self.pn)).collect()
    }

    pub fn mul_raw(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let r = self.r;
        if r == 1 {
            return vec![mul_mod(a[0], b[0], self.pn)];
        }
        let m = self.pn as u128;
        let mut prod = vec![0u128; 2 * r - 1];
        for i in 0..r {
            if a[i] == 0 {
                continue;
            }
            for j in 0..r {
                prod[i + j] = (prod[i + j] + a[i] as u128 * b[j] as u128) % m;
            }
        }
        for top in (r..2 * r - 1).rev() {
            let c = prod[top] % m;
            if c == 0 {
                continue;
            }
            for j in 0..r {
                let sub = c * self.modulus[j] as u128 % m;
                let t = top - r + j;
                prod[t] = (prod[t] + m - sub) % m;
            }
        }
        prod[..r].iter().map(|&x| (x % m) as u64).collect()
    }

    fn apply_matrix(&self, mat: &[Vec<u64>], a: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.r];
        for (j, &c) in a.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for i in 0..self.r {
                out[i] = (out[i] + mul_mod(c, mat[j][i], self.pn)) % self.pn;
            }
        }
        out
    }

    fn apply_matrix_pow(&self, mat: &[Vec<u64>], a: &[u64], k: usize) -> Vec<u64> {
        let mut x = a.to_vec();
        for _ in 0..k {
            x = self.apply_matrix(mat, &x);
        }
        x
    }

    pub fn frob_raw(&self, a: &[u64]) -> Vec<u64> {
        if self.r == 1 {
            return a.to_vec();
        }
        self.apply_matrix(&self.frob, a)
    }

    pub fn frob_inv_raw(&self, a: &[u64]) -> Vec<u64> {
        if self.r == 1 {
            return a.to_vec();
        }
        self.apply_matrix(&self.frob_inv, a)
    }

    /// sigma^k for any integer k.
    pub fn frob_pow_raw(&self, a: &[u64], k: i64) -> Vec<u64> {
        let k = k.rem_euclid(self.r as i64) as usize;
        self.apply_matrix_pow(&self.frob, a, k)
    }

    fn poly_eval_raw(&self, coeffs: &[u64], y: &[u64]) -> Vec<u64> {
        let mut acc = vec![0u64; self.r];
        for &c in coeffs.iter().rev() {
            acc = self.mul_raw(&acc, y);
            acc[0] = (acc[0] + c) % self.pn;
        }
        acc
    }

    fn compute_frobenius(&self) -> Vec<Vec<u64>> {
        let r = self.r;
        if r == 1 {
            return vec![vec![1]];
        }
        // residue Frobenius x -> x^p, then Newton lift of the root of f near it
        let p = self.p;
        let xp = fp_powmod(&[0, 1], p as u128, &self.modulus, p);
        let mut y = vec![0u64; r];
        for (i, c) in xp.iter().enumerate().take(r) {
            y[i] = *c;
        }
        let deriv: Vec<u64> = (1..=r).map(|i| mul_mod(self.modulus[i], i as u64, self.pn)).collect();
        for _ in 0..=(self.n as usize).next_power_of_two().trailing_zeros() + 1 {
            let fy = self.poly_eval_raw(&self.modulus, &y);
            let dfy = self.poly_eval_raw(&deriv, &y);
            let inv = self.inv_raw(&dfy).expect("separable modulus");
            y = self.sub_raw(&y, &self.mul_raw(&fy, &inv));
        }
        let mut cols = Vec::with_capacity(r);
        let mut pw = vec![0u64; r];
        pw[0] = 1;
        for _ in 0..r {
            cols.push(pw.clone());
            pw = self.mul_raw(&pw, &y);
        }
        cols
    }

    /// Inverse of a unit (reduction mod p nonzero), by inversion in F_q and Hensel lifting.
    pub fn inv_raw(&self, a: &[u64]) -> Option<Vec<u64>> {
        let p = self.p;
        let red: Vec<u64> = a.iter().map(|x| x % p).collect();
        if red.iter().all(|&x| x == 0) {
            return None;
        }
        let mut b = if self.r == 1 {
            vec![inv_mod(red[0], p)?]
        } else {
            let q = (p as u128).pow(self.r as u32);
            let mut v = fp_powmod(&red, q - 2, &self.modulus, p);
            v.resize(self.r, 0);
            v
        };
        let two = {
            let mut t = vec![0u64; self.r];
            t[0] = 2 % self.pn;
            t
        };
        let mut prec = 1u32;
        while prec < self.n {
            let ab = self.mul_raw(a, &b);
            b = self.mul_raw(&b, &self.sub_raw(&two, &ab));
            prec *= 2;
        }
        Some(b)
    }

    pub fn elem(self: &Arc<Self>, c: Vec<u64>) -> URElement {
        assert_eq!(c.len(), self.r);
        let pn = self.pn;
        URElement { ring: self.clone(), c: c.into_iter().map(|x| x % pn).collect() }
    }

    pub fn from_int(self: &Arc<Self>, k: i64) -> URElement {
        let mut c = vec![0u64; self.r];
        c[0] = k.rem_euclid(self.pn as i64) as u64;
        URElement { ring: self.clone(), c }
    }

    pub fn zero(self: &Arc<Self>) -> URElement {
        self.from_int(0)
    }

    pub fn one(self: &Arc<Self>) -> URElement {
        self.from_int(1)
    }

    /// The generator x of the power basis.
    pub fn gen(self: &Arc<Self>) -> URElement {
        let mut c = vec![0u64; self.r];
        if self.r == 1 {
            c[0] = self.pn - self.modulus[0] % self.pn;
            c[0] %= self.pn;
        } else {
            c[1] = 1;
        }
        URElement { ring: self.clone(), c }
    }

    /// All residues of O/p (as elements with coefficients in [0, p)).
    pub fn residue_field(self: &Arc<Self>) -> Vec<URElement> {
        let q = ipow(self.p, self.r as u32);
        (0..q)
            .map(|mut code| {
                let mut c = vec![0u64; self.r];
                for x in c.iter_mut() {
                    *x = code % self.p;
                    code /= self.p;
                }
                URElement { ring: self.clone(), c }
            })
            .collect()
    }

    /// Teichmüller lift of the residue class of a.
    pub fn teichmuller_raw(&self, a: &[u64]) -> Vec<u64> {
        let q = ipow(self.p, self.r as u32);
        let mut x: Vec<u64> = a.iter().map(|v| v % self.p).collect();
        for _ in 0..self.n {
            x = self.pow_raw(&x, q);
        }
        x
    }

    pub fn pow_raw(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut r = vec![0u64; self.r];
        r[0] = 1 % self.pn;
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_raw(&r, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul_raw(&b, &b);
            }
        }
        r
    }
}

/// Element of an unramified ring.
#[derive(Clone)]
pub struct URElement {
    ring: Arc<UnramifiedRing>,
    c: Vec<u64>,
}

impl fmt::Debug for URElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.c)
    }
}

impl PartialEq for URElement {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c && (Arc::ptr_eq(&self.ring, &o.ring) || *self.ring == *o.ring)
    }
}

impl URElement {
    pub fn ring(&self) -> &Arc<UnramifiedRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    fn wrap(&self, c: Vec<u64>) -> Self {
        Self { ring: self.ring.clone(), c }
    }

    pub fn frobenius(&self) -> Self {
        self.wrap(self.ring.frob_raw(&self.c))
    }

    pub fn frobenius_pow(&self, k: i64) -> Self {
        self.wrap(self.ring.frob_pow_raw(&self.c, k))
    }

    pub fn is_unit(&self) -> bool {
        self.c.iter().any(|x| x % self.ring.p != 0)
    }

    /// p-adic valuation (precision N for zero).
    pub fn valuation(&self) -> u32 {
        self.c
            .iter()
            .filter(|&&x| x != 0)
            .map(|&x| vp(x, self.ring.p))
            .min()
            .unwrap_or(self.ring.n)
    }

    /// Element of the prime subring Z/p^N, if this element lies there.
    pub fn as_prime_subring(&self) -> Option<Zpn> {
        if self.c[1..].iter().any(|&x| x != 0) {
            return None;
        }
        Some(Zpn::from_u64(self.ring.p, self.ring.n, self.c[0]))
    }

    pub fn trace(&self) -> Zpn {
        let mut s = self.ring.zero();
        let mut x = self.clone();
        for _ in 0..self.ring.r {
            s = Scalar::add(&s, &x);
            x = x.frobenius();
        }
        s.as_prime_subring().expect("trace lands in the prime subring")
    }

    pub fn norm(&self) -> Zpn {
        let mut s = self.ring.one();
        let mut x = self.clone();
        for _ in 0..self.ring.r {
            s = Scalar::mul(&s, &x);
            x = x.frobenius();
        }
        s.as_prime_subring().expect("norm lands in the prime subring")
    }

    pub fn teichmuller(&self) -> Self {
        self.wrap(self.ring.teichmuller_raw(&self.c))
    }

    pub fn scale_int(&self, k: i64) -> Self {
        let pn = self.ring.pn;
        self.wrap(self.ring.scale_raw(&self.c, k.rem_euclid(pn as i64) as u64))
    }

    /// Lift to a ring of higher precision (coefficients reinterpreted).
    pub fn lift_to(&self, ring: &Arc<UnramifiedRing>) -> Self {
        assert_eq!(ring.modulus, self.ring.modulus);
        Self { ring: ring.clone(), c: self.c.iter().map(|x| x % ring.pn).collect() }
    }

    /// Exact division by p^k; errors when some coefficient is not divisible.
    pub fn div_p_pow(&self, k: u32) -> Result<Self> {
        let d = ipow(self.ring.p, k);
        if self.c.iter().any(|x| x % d != 0) {
            return Err(Error::PrecisionExhausted(format!("not divisible by p^{k}")));
        }
        Ok(self.wrap(self.c.iter().map(|x| x / d).collect()))
    }
}

impl Scalar for URElement {
    fn zero_like(&self) -> Self {
        self.ring.zero()
    }
    fn one_like(&self) -> Self {
        self.ring.one()
    }
    fn add(&self, o: &Self) -> Self {
        self.wrap(self.ring.add_raw(&self.c, &o.c))
    }
    fn sub(&self, o: &Self) -> Self {
        self.wrap(self.ring.sub_raw(&self.c, &o.c))
    }
    fn mul(&self, o: &Self) -> Self {
        self.wrap(self.ring.mul_raw(&self.c, &o.c))
    }
    fn neg(&self) -> Self {
        self.wrap(self.c.iter().map(|x| (self.ring.pn - x) % self.ring.pn).collect())
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }
    fn try_inv(&self) -> Option<Self> {
        self.ring.inv_raw(&self.c).map(|c| self.wrap(c))
    }
    fn from_i64_like(&self, n: i64) -> Self {
        self.ring.from_int(n)
    }
    fn root_of_unity_like(&self, n: u64, k: i64) -> Option<Self> {
        let z = Zpn::new(self.ring.p, self.ring.n, 0).root_of_unity_like(n, k)?;
        Some(self.ring.from_int(z.value() as i64))
    }
}

/// p-adic logarithm of a principal unit u = 1 mod p, by the series sum (-1)^{n+1} (u-1)^n / n.
pub fn padic_log(u: &URElement) -> Result<URElement> {
    let ring = u.ring().clone();
    let p = ring.p;
    let n_prec = ring.n;
    let mut h = Scalar::sub(u, &ring.one());
    if h.c.iter().any(|x| x % p != 0) {
        return Err(Error::InvalidInput("padic_log needs u = 1 mod p".into()));
    }
    if Scalar::is_zero(&h) {
        return Ok(ring.zero());
    }
    // terms with k - v_p(k) >= N vanish; K bounds the p-power divided out
    let mut last = 1u64;
    while (last as i64) - (vp(last, p) as i64) < n_prec as i64 {
        last += 1;
    }
    let extra = (1..=last).map(|k| vp(k, p)).max().unwrap_or(0);
    let big = ring.at_precision(n_prec + extra);
    h = h.lift_to(&big);
    let mut acc = big.zero();
    let mut pw = big.one();
    for k in 1..=last {
        pw = Scalar::mul(&pw, &h);
        let v = vp(k, p);
        let unit = k / ipow(p, v);
        let term = pw.div_p_pow(v)?;
        let uinv = inv_mod(unit % big.pn, big.pn).unwrap();
        let term = term.scale_int(uinv as i64);
        acc = if k % 2 == 1 { Scalar::add(&acc, &term) } else { Scalar::sub(&acc, &term) };
    }
    let out: Vec<u64> = acc.c.iter().map(|x| x % ring.pn).collect();
    Ok(ring.elem(out))
}

/// Reduce a u64 residue of p^N into a signed representative for display.
pub fn signed_rep(v: u64, m: u64) -> i64 {
    if v > m / 2 {
        v as i64 - m as i64
    } else {
        v as i64
    }
}

pub fn pow_mod_pn(b: u64, e: u64, m: u64) -> u64 {
    pow_mod(b, e, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_elem(ring: &Arc<UnramifiedRing>, rng: &mut ChaCha8Rng) -> URElement {
        ring.elem((0..ring.degree()).map(|_| rng.gen_range(0..ring.modulus_pn())).collect())
    }

    #[test]
    fn conway_table_entries_are_primitive() {
        for (p, r, c) in CONWAY {
            assert!(fp_is_irreducible(c, *p), "{p} {r}");
            assert!(fp_is_primitive(c, *p), "{p} {r}");
        }
        assert_eq!(defining_polynomial(17, 2).len(), 3);
    }

    #[test]
    fn prime_field_case() {
        let r = UnramifiedRing::new(3, 1, 4).unwrap();
        assert_eq!(r.modulus_pn(), 81);
        let x = r.from_int(5);
        assert_eq!(x.frobenius(), x);
        assert_eq!(x.trace().value(), 5);
        assert_eq!(x.norm().value(), 5);
        assert!(UnramifiedRing::new(9, 1, 2).is_err());
    }

    #[test]
    fn frobenius_exhaustive_3_2_2() {
        let ring = UnramifiedRing::new(3, 2, 2).unwrap();
        for a in 0..9u64 {
            for b in 0..9u64 {
                let x = ring.elem(vec![a, b]);
                assert_eq!(x.frobenius().frobenius(), x);
                let x3 = x.pow_u(3);
                let fx = x.frobenius();
                assert!(fx.coeffs().iter().zip(x3.coeffs()).all(|(u, v)| (u + 9 - v) % 3 == 0));
            }
        }
        assert_eq!(ring.one().trace().value(), 2);
    }

    #[test]
    fn frobenius_is_ring_hom() {
        let ring = UnramifiedRing::new(5, 3, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let a = rand_elem(&ring, &mut rng);
            let b = rand_elem(&ring, &mut rng);
            assert_eq!(a.mul(&b).frobenius(), a.frobenius().mul(&b.frobenius()));
            assert_eq!(a.frobenius_pow(3), a);
            assert_eq!(a.frobenius_pow(-1).frobenius(), a);
        }
    }

    #[test]
    fn norm_multiplicative() {
        let ring = UnramifiedRing::new(5, 2, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let a = rand_elem(&ring, &mut rng);
            let b = rand_elem(&ring, &mut rng);
            assert_eq!(a.mul(&b).norm(), a.norm().mul(&b.norm()));
        }
    }

    #[test]
    fn trace_transitivity_degree_four() {
        // Tr_{r=4} = Tr_{2} o Tr_{4/2}, where Tr_{4/2}(x) = x + sigma^2 x lies in the fixed ring of sigma^2
        let ring = UnramifiedRing::new(3, 4, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = rand_elem(&ring, &mut rng);
            let rel = a.add(&a.frobenius_pow(2));
            assert_eq!(rel.frobenius_pow(2), rel);
            let t2 = rel.add(&rel.frobenius());
            assert_eq!(t2.as_prime_subring().unwrap(), a.trace());
        }
    }

    #[test]
    fn inverse_and_teichmuller() {
        let ring = UnramifiedRing::new(7, 2, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let a = rand_elem(&ring, &mut rng);
            if let Some(b) = a.try_inv() {
                assert!(a.mul(&b).is_one_elem());
                let w = a.teichmuller();
                assert!(w.pow_u(48).is_one_elem());
                assert_eq!(w.frobenius(), w.pow_u(7));
            } else {
                assert!(!a.is_unit());
            }
        }
    }

    #[test]
    fn log_examples() {
        let ring = UnramifiedRing::new(5, 1, 4).unwrap();
        assert!(padic_log(&ring.one()).unwrap().is_zero());
        let u = ring.from_int(6);
        let l1 = padic_log(&u).unwrap();
        let l2 = padic_log(&u.mul(&u)).unwrap();
        assert_eq!(l2, l1.scale_int(2));
        assert!(padic_log(&ring.from_int(2)).is_err());
        // p = 3, N = 3: log(4) = 3 - 9/2 + 27/3 - 81/4 + ... mod 27
        let r3 = UnramifiedRing::new(3, 1, 3).unwrap();
        let oracle = log_oracle(3, 3, 4);
        assert_eq!(padic_log(&r3.from_int(4)).unwrap().coeffs()[0], oracle);
    }

    /// Rational series evaluation of log(u) mod p^n with plenty of terms.
    fn log_oracle(p: u64, n: u32, u: i64) -> u64 {
        use num_bigint::BigInt;
        use num_rational::BigRational;
        let h = BigRational::from_integer(BigInt::from(u - 1));
        let mut s = BigRational::from_integer(BigInt::from(0));
        let mut pw = BigRational::from_integer(BigInt::from(1));
        for k in 1..60i64 {
            pw = &pw * &h;
            let t = &pw / BigRational::from_integer(BigInt::from(k));
            s = if k % 2 == 1 { s + t } else { s - t };
        }
        let m = BigInt::from(ipow(p, n));
        let num = s.numer().clone();
        let den = s.denom().clone();
        let den_mod: u64 = ((den % &m + &m) % &m).try_into().unwrap();
        let num_mod: u64 = ((num % &m + &m) % &m).try_into().unwrap();
        mul_mod(num_mod, inv_mod(den_mod, ipow(p, n)).unwrap(), ipow(p, n))
    }

    #[test]
    fn log_commutes_with_frobenius_and_is_additive() {
        let ring = UnramifiedRing::new(3, 2, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let mut a = rand_elem(&ring, &mut rng).scale_int(3);
            a = a.add(&ring.one());
            let mut b = rand_elem(&ring, &mut rng).scale_int(3);
            b = b.add(&ring.one());
            assert_eq!(padic_log(&a.frobenius()).unwrap(), padic_log(&a).unwrap().frobenius());
            assert_eq!(padic_log(&a.mul(&b)).unwrap(), padic_log(&a).unwrap().add(&padic_log(&b).unwrap()));
        }
    }

    trait IsOne {
        fn is_one_elem(&self) -> bool;
    }
    impl IsOne for URElement {
        fn is_one_elem(&self) -> bool {
            *self == self.one_like()
        }
    }
}
