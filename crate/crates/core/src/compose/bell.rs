//! Noncommutative Bell polynomials.
//!
//! `B_{n,d}(q₁, …, q_n)` is the degree-`d` homogeneous part of the `n`-th
//! complete Bell polynomial in noncommuting arguments. The row sums satisfy
//! `B_{n+1} = Σ_k C(n,k) B_{n-k} q_{k+1}` with `B₀ = 1`.

use crate::error::{Error, Result};
use crate::quaternion::Quaternion;

/// Largest `n` for which binomials and factorials are computed in `u64`.
pub const EXACT_INTEGER_LIMIT: u64 = 20;

/// `C(n, k)`; exact integer arithmetic for `n ≤ 20`, floating point above.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    if n <= EXACT_INTEGER_LIMIT {
        let mut c: u64 = 1;
        for i in 0..k {
            // c·(n-i)/(i+1) stays integral at every step
            c = c * (n - i) / (i + 1);
        }
        c as f64
    } else {
        (0..k).fold(1.0, |c, i| c * (n - i) as f64 / (i + 1) as f64)
    }
}

/// `n!`; exact for `n ≤ 20`.
pub fn factorial(n: u64) -> f64 {
    if n <= EXACT_INTEGER_LIMIT {
        (1..=n).product::<u64>() as f64
    } else {
        (1..=n).fold(1.0, |acc, i| acc * i as f64)
    }
}

#[derive(Clone, Debug)]
pub struct BellTable {
    args: Vec<Quaternion>,
    /// `partial[n][d] = B_{n,d}` for `0 ≤ d ≤ n ≤ n_max`.
    partial: Vec<Vec<Quaternion>>,
    /// `rows[n] = B_n` from the row recursion.
    rows: Vec<Quaternion>,
}

impl BellTable {
    pub fn n_max(&self) -> usize {
        self.args.len()
    }

    pub fn args(&self) -> &[Quaternion] {
        &self.args
    }

    /// `B_{n,d}`, zero outside `1 ≤ d ≤ n` (with `B_{0,0} = 1`).
    pub fn get(&self, n: usize, d: usize) -> Quaternion {
        self.partial
            .get(n)
            .and_then(|row| row.get(d))
            .copied()
            .unwrap_or(Quaternion::ZERO)
    }

    /// Complete polynomial `B_n` from the row recursion.
    pub fn row(&self, n: usize) -> Quaternion {
        self.rows[n]
    }

    /// `Σ_d B_{n,d}`.
    pub fn row_from_parts(&self, n: usize) -> Quaternion {
        self.partial[n].iter().copied().sum()
    }
}

/// Builds `B_{n,d}` and `B_n` for `n ≤ args.len()`.
///
/// Homogeneous parts come from the explicit chain sum while the binomials are
/// exact integers and from the graded recursion beyond that.
pub fn bell_table(args: &[Quaternion]) -> Result<BellTable> {
    if args.is_empty() {
        return Err(Error::InvalidArgument(
            "Bell table needs at least one argument".into(),
        ));
    }
    let n_max = args.len();
    let graded = graded_recursion(args);
    let mut partial = Vec::with_capacity(n_max + 1);
    for (n, row) in graded.into_iter().enumerate() {
        if n >= 1 && n as u64 <= EXACT_INTEGER_LIMIT {
            partial.push((0..=n).map(|d| explicit_partial(args, n, d)).collect());
        } else {
            partial.push(row);
        }
    }
    Ok(BellTable {
        args: args.to_vec(),
        partial,
        rows: row_recursion(args),
    })
}

/// `B_n` for `n = 0..=args.len()` via `B_{n+1} = Σ_k C(n,k) B_{n-k} q_{k+1}`.
pub fn row_recursion(args: &[Quaternion]) -> Vec<Quaternion> {
    let mut rows = vec![Quaternion::ONE];
    for n in 0..args.len() {
        let mut acc = Quaternion::ZERO;
        for k in 0..=n {
            acc += (rows[n - k] * args[k]).scale(binomial(n as u64, k as u64));
        }
        rows.push(acc);
    }
    rows
}

/// `B_{n,d}` via `B_{n+1,d} = Σ_k C(n,k) B_{n-k,d-1} q_{k+1}`.
pub fn graded_recursion(args: &[Quaternion]) -> Vec<Vec<Quaternion>> {
    let n_max = args.len();
    let mut table: Vec<Vec<Quaternion>> = vec![vec![Quaternion::ONE]];
    for n in 0..n_max {
        let mut next = vec![Quaternion::ZERO; n + 2];
        for (d, slot) in next.iter_mut().enumerate().skip(1) {
            let mut acc = Quaternion::ZERO;
            for k in 0..=n {
                let prev = table[n - k].get(d - 1).copied().unwrap_or(Quaternion::ZERO);
                acc += (prev * args[k]).scale(binomial(n as u64, k as u64));
            }
            *slot = acc;
        }
        table.push(next);
    }
    table
}

/// `B_{n,d}` as the sum over chains `n > n₂ > … > n_d ≥ 1` of
/// `C(n-1,n₂)C(n₂-1,n₃)⋯ · q_{n_d} q_{n_{d-1}-n_d} ⋯ q_{n-n₂}`.
pub fn explicit_partial(args: &[Quaternion], n: usize, d: usize) -> Quaternion {
    if n == 0 || d == 0 {
        return if n == 0 && d == 0 {
            Quaternion::ONE
        } else {
            Quaternion::ZERO
        };
    }
    if d > n || n > args.len() {
        return Quaternion::ZERO;
    }
    // walk the chain from the top; `tail` is the product of the factors
    // already fixed on the right
    fn walk(args: &[Quaternion], top: usize, left: usize, weight: f64, tail: Quaternion) -> Quaternion {
        if left == 1 {
            return (args[top - 1] * tail).scale(weight);
        }
        let mut acc = Quaternion::ZERO;
        // the next element must leave room for `left - 1` more distinct values ≥ 1
        for next in (left - 1)..top {
            let w = weight * binomial(top as u64 - 1, next as u64);
            acc += walk(args, next, left - 1, w, args[top - next - 1] * tail);
        }
        acc
    }
    walk(args, n, d, 1.0, Quaternion::ONE)
}
