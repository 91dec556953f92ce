use num_bigint::BigInt;
use num_traits::{One, Zero};

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `(Σ parts)! / ∏ parts!`
pub fn multinomial(parts: &[u32]) -> BigInt {
    let mut total = 0u32;
    let mut acc = BigInt::one();
    for &p in parts {
        total += p;
        acc *= binomial(total, p);
    }
    acc
}

/// Stirling numbers of the second kind: set partitions of an `n`-set into `k`
/// nonempty blocks. Returns 0 when `k > n`.
pub fn stirling2(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    // row[j] = S(i, j)
    let mut row = vec![BigInt::zero(); k as usize + 1];
    row[0] = BigInt::one();
    for i in 1..=n {
        for j in (1..=k.min(i) as usize).rev() {
            let carried = std::mem::take(&mut row[j]);
            row[j] = carried * j + &row[j - 1];
        }
        row[0] = BigInt::zero();
    }
    row[k as usize].clone()
}
