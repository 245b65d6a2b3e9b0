use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::degrees::Degree;

/// Largest prime accepted. Keeps `2p^2` and friends comfortably inside `i64`.
pub const MAX_PRIME: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrimeError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {0} exceeds the supported maximum {MAX_PRIME}")]
    TooLarge(u64),
}

/// A validated prime number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self, PrimeError> {
        if p > MAX_PRIME {
            return Err(PrimeError::TooLarge(p));
        }
        if !is_prime(p) {
            return Err(PrimeError::NotPrime(p));
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn as_degree(self) -> Degree {
        self.0 as Degree
    }

    pub fn is_odd(self) -> bool {
        self.0 != 2
    }

    /// `p^i`, or `None` once it leaves `i64`.
    pub fn pow(self, i: u32) -> Option<Degree> {
        (self.0 as Degree).checked_pow(i)
    }

    /// `2p^i - 2`, the degree of `v_i` and `t_i`.
    pub fn even_generator(self, i: u32) -> Option<Degree> {
        self.pow(i)?.checked_mul(2)?.checked_sub(2)
    }

    /// `2p^i - 1`, the degree of the exterior classes `tau_i`, `a_i`, `lambda_i`.
    pub fn odd_generator(self, i: u32) -> Option<Degree> {
        self.pow(i)?.checked_mul(2)?.checked_sub(1)
    }
}

impl TryFrom<u64> for Prime {
    type Error = PrimeError;

    fn try_from(p: u64) -> Result<Self, Self::Error> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
