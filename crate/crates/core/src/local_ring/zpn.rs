use crate::algebra_core::arith::{inv_mod, ipow, mul_mod, pow_mod, primitive_root};
use crate::algebra_core::scalar::Scalar;

/// Element of Z/p^N (p odd). Roots of unity of order dividing p - 1 are Teichmüller lifts of
/// powers of the least primitive root mod p; order-2 roots are +-1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Zpn {
    p: u64,
    n: u32,
    m: u64,
    v: u64,
}

impl Zpn {
    pub fn new(p: u64, n: u32, v: i64) -> Self {
        let m = ipow(p, n);
        Self { p, n, m, v: v.rem_euclid(m as i64) as u64 }
    }

    pub fn from_u64(p: u64, n: u32, v: u64) -> Self {
        let m = ipow(p, n);
        Self { p, n, m, v: v % m }
    }

    /// Image of a p-integral rational; None when p divides the denominator.
    pub fn from_rational(p: u64, n: u32, q: &num_rational::BigRational) -> Option<Self> {
        use num_traits::ToPrimitive;
        let m = ipow(p, n);
        let big = num_bigint::BigInt::from(m);
        let num = ((q.numer() % &big + &big) % &big).to_u64()?;
        let den = ((q.denom() % &big + &big) % &big).to_u64()?;
        let dinv = inv_mod(den, m)?;
        Some(Self { p, n, m, v: mul_mod(num, dinv, m) })
    }

    pub fn value(&self) -> u64 {
        self.v
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.n
    }

    pub fn with(&self, v: u64) -> Self {
        Self { v: v % self.m, ..*self }
    }

    /// p-adic valuation (precision N for zero).
    pub fn valuation(&self) -> u32 {
        if self.v == 0 {
            return self.n;
        }
        crate::algebra_core::arith::vp(self.v, self.p)
    }

    pub fn inv(&self) -> Option<Self> {
        inv_mod(self.v, self.m).map(|v| self.with(v))
    }

    pub fn pow(&self, e: u64) -> Self {
        self.with(pow_mod(self.v, e, self.m))
    }

    /// Teichmüller lift of a residue mod p.
    pub fn teichmuller(p: u64, n: u32, a: u64) -> Self {
        let m = ipow(p, n);
        let mut x = a % p;
        if x == 0 {
            return Self::new(p, n, 0);
        }
        // x -> x^p converges to the Teichmüller representative after n steps
        for _ in 0..n {
            x = pow_mod(x, p, m);
        }
        Self { p, n, m, v: x }
    }
}

impl Scalar for Zpn {
    fn zero_like(&self) -> Self {
        self.with(0)
    }
    fn one_like(&self) -> Self {
        self.with(1)
    }
    fn add(&self, o: &Self) -> Self {
        self.with((self.v + o.v) % self.m)
    }
    fn mul(&self, o: &Self) -> Self {
        self.with(mul_mod(self.v, o.v, self.m))
    }
    fn neg(&self) -> Self {
        self.with((self.m - self.v) % self.m)
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv()
    }
    fn from_i64_like(&self, k: i64) -> Self {
        self.with(k.rem_euclid(self.m as i64) as u64)
    }
    fn root_of_unity_like(&self, n: u64, k: i64) -> Option<Self> {
        let k = k.rem_euclid(n as i64) as u64;
        if k == 0 {
            return Some(self.one_like());
        }
        let g = crate::algebra_core::arith::gcd(k, n);
        let (n, k) = (n / g, k / g);
        if !(self.p - 1).is_multiple_of(n) {
            return None;
        }
        let w = Self::teichmuller(self.p, self.n, primitive_root(self.p).unwrap());
        Some(w.pow((self.p - 1) / n * k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn teichmuller_roots() {
        let w = Zpn::teichmuller(7, 5, 3);
        assert_eq!(w.pow(6), Zpn::new(7, 5, 1));
        assert_eq!(w.value() % 7, 3);
        let i = Zpn::new(5, 4, 0).root_of_unity_like(4, 1).unwrap();
        assert_eq!(i.mul(&i), Zpn::new(5, 4, -1));
        assert!(Zpn::new(5, 4, 0).root_of_unity_like(3, 1).is_none());
        assert_eq!(Zpn::new(3, 3, 0).root_of_unity_like(2, 1).unwrap(), Zpn::new(3, 3, -1));
    }
}
