use super::cyclo::CyclotomicNumber;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt::Debug;

/// Commutative coefficient ring used by group rings and matrices.
///
/// Constants are produced "like" an existing value so that rings carrying context
/// (a modulus, say) can be handled uniformly.
pub trait Scalar: Clone + PartialEq + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn try_inv(&self) -> Option<Self>;
    fn from_i64_like(&self, n: i64) -> Self;
    /// exp(2 pi i k / n) or its image in this ring, when available.
    fn root_of_unity_like(&self, n: u64, k: i64) -> Option<Self>;

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn pow_u(&self, mut e: u64) -> Self {
        let mut r = self.one_like();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        r
    }
}

impl Scalar for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn try_inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn from_i64_like(&self, n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn root_of_unity_like(&self, n: u64, k: i64) -> Option<Self> {
        let k = k.rem_euclid(n as i64) as u64;
        if k == 0 {
            Some(BigRational::one())
        } else if 2 * k == n {
            Some(-BigRational::one())
        } else {
            None
        }
    }
}

impl Scalar for CyclotomicNumber {
    fn zero_like(&self) -> Self {
        CyclotomicNumber::zero()
    }
    fn one_like(&self) -> Self {
        CyclotomicNumber::one()
    }
    fn add(&self, o: &Self) -> Self {
        CyclotomicNumber::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        CyclotomicNumber::mul(self, o)
    }
    fn neg(&self) -> Self {
        CyclotomicNumber::neg(self)
    }
    fn is_zero(&self) -> bool {
        CyclotomicNumber::is_zero(self)
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn from_i64_like(&self, n: i64) -> Self {
        CyclotomicNumber::from_int(n)
    }
    fn root_of_unity_like(&self, n: u64, k: i64) -> Option<Self> {
        Some(CyclotomicNumber::root_of_unity(n, k))
    }
}

/// Scalars that embed into a cyclotomic field, used for character components.
pub trait ToCyclotomic {
    fn to_cyclotomic(&self) -> CyclotomicNumber;
}

impl ToCyclotomic for BigRational {
    fn to_cyclotomic(&self) -> CyclotomicNumber {
        CyclotomicNumber::from_rational(self.clone())
    }
}

impl ToCyclotomic for CyclotomicNumber {
    fn to_cyclotomic(&self) -> CyclotomicNumber {
        self.clone()
    }
}

pub fn rational_is_integral(q: &BigRational) -> bool {
    q.denom().abs().is_one()
}
