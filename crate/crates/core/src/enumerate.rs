//! Deterministic enumeration of all `n`-cycles.
//!
//! Every `n`-cycle has exactly one cycle word starting with 1; the words are
//! produced in lexicographic order of the remaining `n - 1` symbols. Fixing the
//! first symbols after the leading 1 selects a contiguous range of that order,
//! which is how work is sharded.

use crate::perm::{CyclicPerm, PermError};

/// Largest degree accepted by the enumerator. `15!` still fits comfortably in
/// a `u64` counter.
pub const MAX_ENUM_DEGREE: usize = 16;

/// `(n - 1)!`, the number of `n`-cycles.
pub fn cyclic_count(n: usize) -> u64 {
    (1..n as u64).product()
}

fn check_degree(n: usize) -> Result<(), PermError> {
    if n < 2 {
        return Err(PermError::DegreeTooSmall { degree: n, min: 2 });
    }
    if n > MAX_ENUM_DEGREE {
        return Err(PermError::DegreeTooLarge {
            degree: n,
            max: MAX_ENUM_DEGREE,
        });
    }
    Ok(())
}

/// Lexicographic successor in place; false when `a` was the last arrangement.
pub(crate) fn next_permutation(a: &mut [usize]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len())
        .rev()
        .find(|&j| a[j] > a[i - 1])
        .expect("pivot");
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Builds the starting word `[1, prefix.., rest ascending]` after validating
/// the prefix.
fn initial_word(n: usize, prefix: &[usize]) -> Result<Vec<usize>, PermError> {
    check_degree(n)?;
    let mut used = vec![false; n + 1];
    used[1] = true;
    for &p in prefix {
        if p < 2 || p > n || used[p] {
            return Err(PermError::BadPrefix(prefix.to_vec()));
        }
        used[p] = true;
    }
    if prefix.len() >= n {
        return Err(PermError::BadPrefix(prefix.to_vec()));
    }
    let mut word = Vec::with_capacity(n);
    word.push(1);
    word.extend_from_slice(prefix);
    word.extend((2..=n).filter(|&v| !used[v]));
    Ok(word)
}

/// Iterator over `n`-cycles whose cycle word begins with `1, prefix..`.
#[derive(Debug, Clone)]
pub struct CyclicPerms {
    word: Vec<usize>,
    fixed: usize,
    exhausted: bool,
}

impl CyclicPerms {
    /// All `(n - 1)!` cycles of degree `n`.
    pub fn new(n: usize) -> Result<Self, PermError> {
        Self::with_prefix(n, &[])
    }

    /// Cycles whose word starts `1, prefix[0], prefix[1], ...`.
    pub fn with_prefix(n: usize, prefix: &[usize]) -> Result<Self, PermError> {
        let word = initial_word(n, prefix)?;
        Ok(CyclicPerms {
            word,
            fixed: 1 + prefix.len(),
            exhausted: false,
        })
    }
}

impl Iterator for CyclicPerms {
    type Item = CyclicPerm;

    fn next(&mut self) -> Option<CyclicPerm> {
        if self.exhausted {
            return None;
        }
        let perm = CyclicPerm::from_cycle_word(&self.word).expect("enumerated word is a cycle");
        self.exhausted = !next_permutation(&mut self.word[self.fixed..]);
        Some(perm)
    }
}

/// Calls `visit` with each cycle word (not a fresh allocation) in order.
pub fn for_each_word<F: FnMut(&[usize])>(
    n: usize,
    prefix: &[usize],
    mut visit: F,
) -> Result<(), PermError> {
    let mut word = initial_word(n, prefix)?;
    let fixed = 1 + prefix.len();
    loop {
        visit(&word);
        if !next_permutation(&mut word[fixed..]) {
            return Ok(());
        }
    }
}

/// The shard prefixes for degree `n`: every ordered pair of distinct symbols
/// from `{2..n}`, ascending, giving `(n-1)(n-2)` ranges. Degree 2 has a single
/// shard with the empty prefix.
pub fn shard_prefixes(n: usize) -> Result<Vec<Vec<usize>>, PermError> {
    check_degree(n)?;
    if n == 2 {
        return Ok(vec![Vec::new()]);
    }
    let mut out = Vec::with_capacity((n - 1) * (n - 2));
    for a in 2..=n {
        for b in 2..=n {
            if a != b {
                out.push(vec![a, b]);
            }
        }
    }
    Ok(out)
}
