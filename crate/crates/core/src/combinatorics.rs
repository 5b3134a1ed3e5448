//! Factorials, binomials and falling products in arbitrary precision.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::One;

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// `C(a, b)` with the convention `C(a, b) = 0` outside `0 <= b <= a`.
pub fn binomial(a: i64, b: i64) -> BigUint {
    if b < 0 || a < 0 || b > a {
        return BigUint::from(0u32);
    }
    let b = b.min(a - b) as u64;
    let a = a as u64;
    let mut acc = BigUint::one();
    for i in 0..b {
        acc = acc * (a - i) / (i + 1);
    }
    acc
}

/// `a (a-1) ... (a-len+1)`.
pub fn falling(a: u64, len: u64) -> BigUint {
    (0..len).fold(BigUint::one(), |acc, i| acc * (a - i))
}

pub fn pow2(e: u64) -> BigUint {
    BigUint::one() << (e as usize)
}

/// Memoized factorial table `0!..=max!`.
#[derive(Clone, Debug)]
pub struct FactorialTable {
    values: Vec<BigUint>,
}

impl FactorialTable {
    pub fn new(max: u64) -> Self {
        let mut values = Vec::with_capacity(max as usize + 1);
        values.push(BigUint::one());
        for i in 1..=max {
            let next = values[(i - 1) as usize].clone() * i;
            values.push(next);
        }
        FactorialTable { values }
    }

    pub fn max(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn get(&self, n: u64) -> BigUint {
        match self.values.get(n as usize) {
            Some(v) => v.clone(),
            None => factorial(n),
        }
    }
}

/// Number of Hamiltonian cycles of `K_n`, `(n-1)!/2` for `n >= 3`.
pub fn cycle_count(n: u64) -> BigUint {
    factorial(n - 1) / 2u32
}

pub fn to_bigint(v: BigUint) -> BigInt {
    BigInt::from(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_convention() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(3, -1), BigUint::from(0u32));
        assert_eq!(binomial(2, 3), BigUint::from(0u32));
        assert_eq!(binomial(-1, 0), BigUint::from(0u32));
        assert_eq!(binomial(0, 0), BigUint::from(1u32));
    }

    #[test]
    fn table_matches_direct() {
        let t = FactorialTable::new(30);
        for n in 0..=35 {
            assert_eq!(t.get(n), factorial(n));
        }
        assert_eq!(cycle_count(5), BigUint::from(12u32));
        assert_eq!(falling(7, 3), BigUint::from(210u32));
        assert_eq!(falling(7, 0), BigUint::from(1u32));
    }
}
