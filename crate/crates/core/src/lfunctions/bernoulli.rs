use crate::algebra_core::arith::gcd;
use crate::algebra_core::{CyclotomicNumber, DirichletCharacter, UnitsModN};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 0..n {
        let next = &row[k] * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(next);
    }
    row
}

/// B_0, ..., B_n with B_1 = -1/2, from sum_{k<m+1} C(m+1, k) B_k = 0.
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = vec![BigRational::one()];
    for m in 1..=n {
        let row = binomial_row(m + 1);
        let s = (0..m).fold(BigRational::zero(), |acc, k| acc + BigRational::from_integer(row[k].clone()) * &b[k]);
        b.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// B_n(x) = sum_k C(n, k) B_k x^{n-k}.
pub fn bernoulli_polynomial(n: usize, x: &BigRational, numbers: &[BigRational]) -> BigRational {
    let row = binomial_row(n);
    let mut xp = BigRational::one();
    let mut acc = BigRational::zero();
    for k in (0..=n).rev() {
        acc += BigRational::from_integer(row[k].clone()) * &numbers[k] * &xp;
        xp *= x;
    }
    acc
}

/// B_{n, chi} = f^{n-1} sum_{a=1}^{f} chi(a) B_n(a/f), f the modulus of `units`.
pub fn gen_bernoulli(n: usize, units: &UnitsModN, chi: &DirichletCharacter) -> CyclotomicNumber {
    assert!(n >= 1, "generalized Bernoulli numbers are indexed from 1");
    let f = units.modulus();
    let numbers = bernoulli_numbers(n);
    let order = units.group().exponent().max(1);
    // group the sum by the value of chi, then combine exactly
    let mut by_exp = vec![BigRational::zero(); order as usize];
    for a in 1..=f {
        if gcd(a, f) != 1 {
            continue;
        }
        let (d, k) = chi.value_exp(units, a as i64).expect("unit");
        let x = BigRational::new(BigInt::from(a), BigInt::from(f));
        by_exp[(k * (order / d)) as usize] += bernoulli_polynomial(n, &x, &numbers);
    }
    let scale = num_traits::pow(BigRational::from_integer(BigInt::from(f)), n - 1);
    let total = by_exp
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .fold(CyclotomicNumber::zero(), |t, (k, c)| t.add(&CyclotomicNumber::root_of_unity(order, k as i64).scale(c)));
    total.scale(&scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra_core::rat;

    #[test]
    fn numbers() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[12], rat(-691, 2730));
        assert!(b[3].is_zero() && b[11].is_zero());
    }

    #[test]
    fn polynomial_shift_identity() {
        // B_n(x + 1) - B_n(x) = n x^{n-1}
        let b = bernoulli_numbers(8);
        for n in 1..=8usize {
            for x in [rat(0, 1), rat(2, 7), rat(-3, 5)] {
                let lhs = bernoulli_polynomial(n, &(&x + rat(1, 1)), &b) - bernoulli_polynomial(n, &x, &b);
                assert_eq!(lhs, rat(n as i64, 1) * num_traits::pow(x.clone(), n - 1));
            }
        }
    }

    #[test]
    fn generalized_values() {
        let u1 = UnitsModN::new(1);
        let triv = u1.characters()[0].clone();
        assert_eq!(gen_bernoulli(2, &u1, &triv), CyclotomicNumber::from_rational(rat(1, 6)));
        assert_eq!(gen_bernoulli(1, &u1, &triv), CyclotomicNumber::from_rational(rat(1, 2)));
        let u4 = UnitsModN::new(4);
        let chi4 = u4.characters().into_iter().find(|c| !c.chi.is_trivial()).unwrap();
        // (1 * B_1(1/4) - B_1(3/4)) = -1/2
        assert_eq!(gen_bernoulli(1, &u4, &chi4), CyclotomicNumber::from_rational(rat(-1, 2)));
    }

    #[test]
    fn parity_vanishing() {
        for f in [3u64, 4, 5, 7, 8, 11, 13, 16] {
            let u = UnitsModN::new(f);
            for chi in u.characters() {
                let odd = chi.is_odd(&u);
                for n in 1..=5usize {
                    let b = gen_bernoulli(n, &u, &chi);
                    // chi(-1) = (-1)^n is needed for a nonzero value (n = 1, chi trivial aside)
                    if odd == (n % 2 == 0) && !(n == 1 && chi.chi.is_trivial()) {
                        assert!(b.is_zero(), "f={f} n={n}");
                    }
                }
            }
        }
    }
}
