//! Rank over the rationals of large integer matrices by elimination modulo
//! many 62-bit primes.
//!
//! A mod-p rank never exceeds the rational rank. If `r` is the largest mod-p
//! rank seen and the rational rank were larger, some `(r+1)`-minor would be a
//! nonzero integer divisible by every prime used, hence at least their product
//! in absolute value. The Hadamard bound on such minors therefore certifies
//! `r` once the prime product exceeds it.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{capacity, Result};
use crate::exact::BigIntMatrix;
use crate::par;

/// Sparse row: `(column, nonzero value)` pairs.
pub type SparseRow = Vec<(usize, BigInt)>;

const PRIME_POOL: usize = 1024;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// The largest primes below 2^62, in decreasing order.
pub fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(PRIME_POOL);
        let mut c = (1u64 << 62) - 1;
        while out.len() < PRIME_POOL {
            if is_prime_u64(c) {
                out.push(c);
            }
            c -= 2;
        }
        out
    })
}

/// Montgomery arithmetic with `R = 2^64` for an odd modulus below 2^62.
#[derive(Debug, Clone, Copy)]
struct Mont {
    p: u64,
    neg_inv: u64,
    r_mod: u64,
}

impl Mont {
    fn new(p: u64) -> Self {
        debug_assert!(p % 2 == 1 && p < (1 << 62));
        let mut inv = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r_mod = ((1u128 << 64) % p as u128) as u64;
        Mont { p, neg_inv: inv.wrapping_neg(), r_mod }
    }

    /// `a * b * R^{-1} mod p`
    #[inline(always)]
    fn mul(&self, a: u64, b: u64) -> u64 {
        let t = a as u128 * b as u128;
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline(always)]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
}

#[derive(Debug, Clone)]
enum Entry {
    Small(i64),
    Big(BigInt),
}

impl Entry {
    fn residue(&self, p: u64, pb: &BigInt) -> u64 {
        match self {
            Entry::Small(v) => (*v as i128).rem_euclid(p as i128) as u64,
            Entry::Big(v) => v.mod_floor(pb).to_u64().expect("residue below modulus"),
        }
    }
}

struct Reduced {
    rows: Vec<Vec<(usize, Entry)>>,
    cols: usize,
    row_sq_norms: Vec<BigInt>,
    col_sq_norms: Vec<BigInt>,
}

/// Rank of the matrix modulo `p`, an odd prime below 2^62.
pub fn rank_mod_prime(rows: &[SparseRow], cols: usize, p: u64) -> usize {
    let reduced: Vec<Vec<(usize, Entry)>> = rows
        .iter()
        .map(|r| r.iter().map(|(c, v)| (*c, to_entry(v))).collect())
        .collect();
    dense_rank_mod(&reduced, cols, p)
}

fn to_entry(v: &BigInt) -> Entry {
    match v.to_i64() {
        Some(s) => Entry::Small(s),
        None => Entry::Big(v.clone()),
    }
}

fn dense_rank_mod(rows: &[Vec<(usize, Entry)>], cols: usize, p: u64) -> usize {
    let nrows = rows.len();
    if nrows == 0 || cols == 0 {
        return 0;
    }
    let mont = Mont::new(p);
    let pb = BigInt::from(p);
    let mut a = vec![0u64; nrows * cols];
    for (i, row) in rows.iter().enumerate() {
        for (c, v) in row {
            a[i * cols + c] = v.residue(p, &pb);
        }
    }
    let mut rank = 0;
    for c in 0..cols {
        if rank == nrows {
            break;
        }
        let Some(piv) = (rank..nrows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        if piv != rank {
            for j in c..cols {
                a.swap(piv * cols + j, rank * cols + j);
            }
        }
        // Scale so the pivot becomes R mod p; then mont.mul(f, row[j]) = f * row[j] / pivot.
        let inv = pow_mod(a[rank * cols + c], p - 2, p);
        let scale = mul_mod(inv, mont.r_mod, p);
        for j in c..cols {
            let x = a[rank * cols + j];
            if x != 0 {
                a[rank * cols + j] = mul_mod(x, scale, p);
            }
        }
        let (head, tail) = a.split_at_mut((rank + 1) * cols);
        let pivot_row = &head[rank * cols..];
        for row in tail.chunks_exact_mut(cols) {
            let f = row[c];
            if f == 0 {
                continue;
            }
            row[c] = 0;
            for j in c + 1..cols {
                let y = pivot_row[j];
                if y != 0 {
                    row[j] = mont.sub(row[j], mont.mul(f, y));
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Peel rows and columns with a single nonzero entry; each peel contributes
/// exactly one to the rank over any field in which the entry is nonzero.
fn peel(rows: &[SparseRow], cols: usize) -> (usize, Reduced) {
    let nrows = rows.len();
    let rows: Vec<Vec<(usize, &BigInt)>> = rows
        .iter()
        .map(|r| r.iter().filter(|(_, v)| !v.is_zero()).map(|(c, v)| (*c, v)).collect())
        .collect();
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); cols];
    for (i, r) in rows.iter().enumerate() {
        for &(c, _) in r {
            col_rows[c].push(i);
        }
    }
    let mut row_count: Vec<usize> = rows.iter().map(Vec::len).collect();
    let mut col_count: Vec<usize> = col_rows.iter().map(Vec::len).collect();
    let mut row_alive = vec![true; nrows];
    let mut col_alive = vec![true; cols];
    let mut stack: Vec<(bool, usize)> = Vec::new();
    stack.extend((0..nrows).filter(|&i| row_count[i] == 1).map(|i| (true, i)));
    stack.extend((0..cols).filter(|&c| col_count[c] == 1).map(|c| (false, c)));
    let mut rank = 0;
    while let Some((is_row, idx)) = stack.pop() {
        let (r, c) = if is_row {
            if !row_alive[idx] || row_count[idx] != 1 {
                continue;
            }
            let c = rows[idx].iter().map(|&(c, _)| c).find(|&c| col_alive[c]).unwrap();
            (idx, c)
        } else {
            if !col_alive[idx] || col_count[idx] != 1 {
                continue;
            }
            let r = col_rows[idx].iter().copied().find(|&r| row_alive[r]).unwrap();
            (r, idx)
        };
        rank += 1;
        row_alive[r] = false;
        col_alive[c] = false;
        for &r2 in &col_rows[c] {
            if row_alive[r2] {
                row_count[r2] -= 1;
                if row_count[r2] == 1 {
                    stack.push((true, r2));
                }
            }
        }
        for &(c2, _) in &rows[r] {
            if col_alive[c2] {
                col_count[c2] -= 1;
                if col_count[c2] == 1 {
                    stack.push((false, c2));
                }
            }
        }
    }
    let mut new_col = vec![usize::MAX; cols];
    let mut ncols = 0;
    for c in 0..cols {
        if col_alive[c] && col_count[c] > 0 {
            new_col[c] = ncols;
            ncols += 1;
        }
    }
    let mut out_rows = Vec::new();
    let mut row_sq_norms = Vec::new();
    let mut col_sq_norms = vec![BigInt::zero(); ncols];
    for (i, r) in rows.iter().enumerate() {
        if !row_alive[i] || row_count[i] == 0 {
            continue;
        }
        let mut row = Vec::with_capacity(row_count[i]);
        let mut norm = BigInt::zero();
        for &(c, v) in r {
            if col_alive[c] {
                let sq = v * v;
                norm += &sq;
                col_sq_norms[new_col[c]] += sq;
                row.push((new_col[c], to_entry(v)));
            }
        }
        out_rows.push(row);
        row_sq_norms.push(norm);
    }
    (
        rank,
        Reduced {
            rows: out_rows,
            cols: ncols,
            row_sq_norms,
            col_sq_norms,
        },
    )
}

fn prefix_products(mut norms: Vec<BigInt>, upto: usize) -> Vec<BigInt> {
    norms.sort_unstable_by(|a, b| b.cmp(a));
    let mut out = Vec::with_capacity(upto + 1);
    let mut acc = BigInt::one();
    out.push(acc.clone());
    for n in norms.into_iter().take(upto) {
        acc *= n;
        out.push(acc.clone());
    }
    out
}

/// Outcome of a certified rank computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankReport {
    pub rank: usize,
    /// Rank contributed by singleton peeling before any modular work.
    pub peeled: usize,
    pub primes_used: usize,
}

/// Exact rank over the rationals, certified by the Hadamard bound.
pub fn certified_rank(rows: &[SparseRow], cols: usize) -> Result<RankReport> {
    let (peeled, core) = peel(rows, cols);
    let full = core.rows.len().min(core.cols);
    if full == 0 {
        return Ok(RankReport { rank: peeled, peeled, primes_used: 0 });
    }
    let row_bounds = prefix_products(core.row_sq_norms.clone(), full);
    let col_bounds = prefix_products(core.col_sq_norms.clone(), full);
    let pool = primes();
    let batch = par::width().max(1);
    let mut r_max = 0;
    let mut product = BigInt::one();
    let mut used = 0;
    while used < pool.len() {
        let chunk = &pool[used..(used + batch).min(pool.len())];
        let ranks = par::map_slice(chunk, |&p| dense_rank_mod(&core.rows, core.cols, p));
        for (&p, r) in chunk.iter().zip(ranks) {
            used += 1;
            r_max = r_max.max(r);
            product *= p;
            if r_max == full {
                return Ok(RankReport { rank: peeled + r_max, peeled, primes_used: used });
            }
            let size = r_max + 1;
            let bound = (&row_bounds[size]).min(&col_bounds[size]);
            if &product * &product > *bound {
                return Ok(RankReport { rank: peeled + r_max, peeled, primes_used: used });
            }
        }
    }
    Err(capacity("modular primes", pool.len() as u128, pool.len() as u128))
}

/// A lower bound on the rational rank from a single prime. Cheap; used where
/// only an inequality is needed.
pub fn rank_lower_bound(rows: &[SparseRow], cols: usize) -> usize {
    let (peeled, core) = peel(rows, cols);
    peeled + dense_rank_mod(&core.rows, core.cols, primes()[0])
}

/// Convert a dense matrix to sparse rows.
pub fn sparse_rows(m: &BigIntMatrix) -> Vec<SparseRow> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .filter_map(|j| {
                    let v = m.get(i, j);
                    (!v.is_zero()).then(|| (j, v.clone()))
                })
                .collect()
        })
        .collect()
}
