//! Elementary number theory used by the plethystic operations and the
//! counting formulas.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Number-theoretic Möbius function.
pub fn mobius(n: u32) -> i32 {
    assert!(n >= 1, "mobius is defined for n >= 1");
    let mut n = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Positive divisors in increasing order.
pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Binomial coefficient `C(n, k)` for integer `n` of either sign,
/// `k >= 0`: `n (n-1) ... (n-k+1) / k!`.
pub fn binomial(n: i64, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k as i64 {
        acc *= BigInt::from(n - i);
    }
    let mut fact = BigInt::one();
    for i in 2..=k as i64 {
        fact *= BigInt::from(i);
    }
    if acc.is_zero() {
        return acc;
    }
    acc / fact
}
