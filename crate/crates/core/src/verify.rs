//! Exhaustive checking of the index bound `sorted[k] <= k` and of partition
//! witnesses.
//!
//! Work is split by the two symbols following the leading 1 in the cycle word.
//! Shards are handed to workers round-robin and merged in shard order, so a
//! report never depends on the worker count.

use std::collections::BTreeMap;
use std::thread;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::charseq::{characteristic_sequence, CharNumber, CharSeq, HullTable};
use crate::enumerate::{cyclic_count, for_each_word, shard_prefixes, CyclicPerms};
use crate::perm::{CyclicPerm, IndexInterval, PermError};

/// Highest degree `verify_degree` accepts.
pub const MAX_VERIFY_DEGREE: usize = 14;
/// Highest degree `exhaustive_partition_check` accepts.
pub const MAX_PARTITION_DEGREE: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("degree {degree} exceeds cap {cap}")]
    DegreeTooLarge { degree: usize, cap: usize },
    #[error("worker count must be positive")]
    ZeroWorkers,
    #[error("invalid partition of {{1..{n}}} with cuts {cuts:?}")]
    InvalidPartition { n: usize, cuts: Vec<usize> },
    #[error("witness {0:?} does not re-validate")]
    InvalidWitness(Witness14),
    #[error("counterexample: no witness for {perm} with cuts {cuts:?}")]
    Counterexample { perm: String, cuts: Vec<usize> },
}

/// Outcome of checking every cycle of one degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    /// Permutations whose sequence was actually computed.
    pub examined: u64,
    /// Reflections of examined permutations accounted for without recomputation.
    pub reconstructed: u64,
    /// Cycle words of violating permutations, lexicographically ascending.
    pub violations: Vec<String>,
    /// For each position `k`, how many permutations have `sorted[k] == k`.
    pub tight_histogram: BTreeMap<usize, u64>,
    pub elapsed_ms: u64,
    pub workers: usize,
    pub pruned: bool,
}

impl VerifyReport {
    pub fn total(&self) -> u64 {
        self.examined + self.reconstructed
    }

    /// The report with wall time zeroed, for comparisons.
    pub fn without_timing(&self) -> VerifyReport {
        VerifyReport {
            elapsed_ms: 0,
            ..self.clone()
        }
    }
}

/// Progress event emitted once per finished shard.
#[derive(Debug, Clone, Copy)]
pub struct ShardDone {
    pub shard: usize,
    pub shards: usize,
    pub examined: u64,
}

#[derive(Debug, Default)]
struct ShardResult {
    examined: u64,
    reconstructed: u64,
    violations: Vec<Vec<usize>>,
    tight: Vec<u64>,
}

/// Cycle word of `r ∘ f ∘ r` given the cycle word of `f`.
fn reflected_word(word: &[usize], out: &mut Vec<usize>) {
    let n = word.len();
    let start = word.iter().position(|&v| v == n).expect("n occurs in word");
    out.clear();
    out.extend((0..n).map(|j| n + 1 - word[(start + j) % n]));
}

fn run_shard(n: usize, prefix: &[usize], prune: bool) -> Result<ShardResult, PermError> {
    let mut table = HullTable::new(n);
    let mut image = vec![0; n];
    let mut mirror = Vec::with_capacity(n);
    let mut sorted = Vec::with_capacity(n);
    let mut result = ShardResult {
        tight: vec![0; n - 1],
        ..ShardResult::default()
    };
    for_each_word(n, prefix, |word| {
        let mut weight = 1;
        if prune {
            reflected_word(word, &mut mirror);
            match mirror.as_slice().cmp(word) {
                std::cmp::Ordering::Less => return,
                std::cmp::Ordering::Greater => weight = 2,
                std::cmp::Ordering::Equal => {}
            }
        }
        for k in 0..n {
            image[word[k] - 1] = word[(k + 1) % n];
        }
        sorted.clear();
        sorted.extend_from_slice(table.raw_numbers(&image));
        sorted.sort_unstable();

        result.examined += 1;
        if weight == 2 {
            result.reconstructed += 1;
        }
        if sorted.iter().enumerate().any(|(k, m)| !m.at_most(k + 1)) {
            result.violations.push(word.to_vec());
            if weight == 2 {
                result.violations.push(mirror.clone());
            }
        }
        for (k, m) in sorted.iter().enumerate() {
            if *m == CharNumber::Steps(k + 1) {
                result.tight[k] += weight;
            }
        }
    })?;
    Ok(result)
}

/// Checks every `n`-cycle, optionally skipping one of each reflection pair.
pub fn verify_degree(n: usize, workers: usize, prune: bool) -> Result<VerifyReport, VerifyError> {
    verify_degree_with_progress(n, workers, prune, &|_| {})
}

pub fn verify_degree_with_progress(
    n: usize,
    workers: usize,
    prune: bool,
    progress: &(dyn Fn(ShardDone) + Sync),
) -> Result<VerifyReport, VerifyError> {
    if n > MAX_VERIFY_DEGREE {
        return Err(VerifyError::DegreeTooLarge {
            degree: n,
            cap: MAX_VERIFY_DEGREE,
        });
    }
    if workers == 0 {
        return Err(VerifyError::ZeroWorkers);
    }
    let shards = shard_prefixes(n)?;
    let started = Instant::now();

    let per_worker: Vec<Vec<(usize, ShardResult)>> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let shards = &shards;
                scope.spawn(move || {
                    let mut out = Vec::new();
                    for idx in (w..shards.len()).step_by(workers) {
                        let res = run_shard(n, &shards[idx], prune).expect("valid shard prefix");
                        progress(ShardDone {
                            shard: idx,
                            shards: shards.len(),
                            examined: res.examined,
                        });
                        out.push((idx, res));
                    }
                    out
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("verify worker panicked"))
            .collect()
    });

    let mut ordered: Vec<(usize, ShardResult)> = per_worker.into_iter().flatten().collect();
    ordered.sort_by_key(|(idx, _)| *idx);

    let mut examined = 0;
    let mut reconstructed = 0;
    let mut violations = Vec::new();
    let mut tight = vec![0u64; n - 1];
    for (_, res) in ordered {
        examined += res.examined;
        reconstructed += res.reconstructed;
        violations.extend(res.violations);
        for (acc, t) in tight.iter_mut().zip(res.tight) {
            *acc += t;
        }
    }
    violations.sort();
    debug_assert_eq!(examined + reconstructed, cyclic_count(n));

    Ok(VerifyReport {
        n,
        examined,
        reconstructed,
        violations: violations
            .iter()
            .map(|w| {
                w.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect(),
        tight_histogram: tight
            .into_iter()
            .enumerate()
            .map(|(k, c)| (k + 1, c))
            .collect(),
        elapsed_ms: started.elapsed().as_millis() as u64,
        workers,
        pruned: prune,
    })
}

/// A split of `{1..n}` into consecutive blocks, ending at each cut.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    n: usize,
    cuts: Vec<usize>,
}

impl Partition {
    /// Blocks `{1..c_1}, {c_1+1..c_2}, .., {c_last+1..n}`; cuts strictly
    /// increasing in `1..=n-1`.
    pub fn new(n: usize, cuts: Vec<usize>) -> Result<Self, VerifyError> {
        let valid =
            n >= 1 && cuts.windows(2).all(|w| w[0] < w[1]) && cuts.iter().all(|&c| c >= 1 && c < n);
        if !valid {
            return Err(VerifyError::InvalidPartition { n, cuts });
        }
        Ok(Partition { n, cuts })
    }

    /// Bit `t - 1` of `mask` set means a cut after `t`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        let cuts = (1..n).filter(|t| mask >> (t - 1) & 1 == 1).collect();
        Partition { n, cuts }
    }

    /// All `2^(n-1)` partitions, in ascending mask order.
    pub fn all(n: usize) -> impl Iterator<Item = Partition> {
        (0..1u64 << (n - 1)).map(move |mask| Partition::from_mask(n, mask))
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn cuts(&self) -> &[usize] {
        &self.cuts
    }

    pub fn block_count(&self) -> usize {
        self.cuts.len() + 1
    }

    /// 1-based index of the block containing `x`.
    pub fn block_of(&self, x: usize) -> usize {
        1 + self.cuts.iter().filter(|&&c| c < x).count()
    }

    pub fn blocks(&self) -> Vec<IndexInterval> {
        let mut out = Vec::with_capacity(self.block_count());
        let mut lo = 1;
        for &c in self.cuts.iter().chain(std::iter::once(&self.n)) {
            out.push(IndexInterval::new(lo, c));
            lo = c + 1;
        }
        out
    }
}

/// A pair `r <= s` inside one block whose hull returns over itself within
/// `l <= k` steps, `k` being the number of blocks.
///
/// `r == s` only arises for the partition into singletons, where it means
/// `f^l(r) = r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Witness14 {
    pub block: usize,
    pub r: usize,
    pub s: usize,
    pub l: usize,
    /// True when `s = r + 1`, found by the adjacent-pair search.
    pub adjacent: bool,
}

fn hull_returns_within(f: &CyclicPerm, r: usize, s: usize, max_steps: usize) -> Option<usize> {
    let target = IndexInterval::new(r, s);
    let mut j = target;
    for l in 1..=max_steps {
        j = crate::charseq::convf(f, j);
        if j.contains(&target) {
            return Some(l);
        }
    }
    None
}

impl Witness14 {
    /// Re-checks all witness conditions from scratch.
    pub fn validated(
        f: &CyclicPerm,
        p: &Partition,
        r: usize,
        s: usize,
        l: usize,
    ) -> Result<Self, VerifyError> {
        let block = p.block_of(r);
        let witness = Witness14 {
            block,
            r,
            s,
            l,
            adjacent: s == r + 1,
        };
        let ok = f.degree() == p.degree()
            && 1 <= r
            && r <= s
            && s <= f.degree()
            && p.block_of(s) == block
            && l >= 1
            && l <= p.block_count()
            && hull_returns_within(f, r, s, l) == Some(l);
        if ok {
            Ok(witness)
        } else {
            Err(VerifyError::InvalidWitness(witness))
        }
    }
}

/// Finds a witness for `f` under `p`, preferring adjacent pairs with the
/// smallest exponent, then the smallest `t`.
pub fn check_partition(f: &CyclicPerm, p: &Partition) -> Result<Witness14, VerifyError> {
    check_partition_with(f, &characteristic_sequence(f), p)
}

/// As [`check_partition`] with a precomputed characteristic sequence of `f`.
pub fn check_partition_with(
    f: &CyclicPerm,
    seq: &CharSeq,
    p: &Partition,
) -> Result<Witness14, VerifyError> {
    if f.degree() != p.degree() {
        return Err(VerifyError::InvalidPartition {
            n: f.degree(),
            cuts: p.cuts.clone(),
        });
    }
    let k = p.block_count();
    let adjacent = (1..f.degree())
        .filter(|t| p.cuts.binary_search(t).is_err())
        .filter_map(|t| match seq.raw[t - 1] {
            CharNumber::Steps(m) if m <= k => Some((m, t)),
            _ => None,
        })
        .min();
    if let Some((l, t)) = adjacent {
        return Witness14::validated(f, p, t, t + 1, l);
    }

    let mut best: Option<(usize, usize, usize)> = None;
    for block in p.blocks() {
        for r in block.lo..=block.hi {
            for s in std::iter::once(r).chain(r + 2..=block.hi) {
                if let Some(l) = hull_returns_within(f, r, s, k) {
                    if best.is_none_or(|b| (l, r, s) < b) {
                        best = Some((l, r, s));
                    }
                }
            }
        }
    }
    match best {
        Some((l, r, s)) => Witness14::validated(f, p, r, s, l),
        None => Err(VerifyError::Counterexample {
            perm: f.to_string(),
            cuts: p.cuts.clone(),
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionSummary {
    pub n: usize,
    pub permutations: u64,
    pub partitions_per_permutation: u64,
    pub pairs: u64,
    /// Pairs that needed the non-adjacent fallback search with `r < s`.
    pub fallback_used: u64,
    /// Pairs answered by a single point, `r == s`.
    pub degenerate_used: u64,
}

/// Every cycle of degree `n` against every partition of `{1..n}`.
pub fn exhaustive_partition_check(n: usize) -> Result<PartitionSummary, VerifyError> {
    if n > MAX_PARTITION_DEGREE {
        return Err(VerifyError::DegreeTooLarge {
            degree: n,
            cap: MAX_PARTITION_DEGREE,
        });
    }
    let mut summary = PartitionSummary {
        n,
        permutations: 0,
        partitions_per_permutation: 1 << (n - 1),
        pairs: 0,
        fallback_used: 0,
        degenerate_used: 0,
    };
    for f in CyclicPerms::new(n)? {
        let seq = characteristic_sequence(&f);
        for p in Partition::all(n) {
            let w = check_partition_with(&f, &seq, &p)?;
            if w.r == w.s {
                summary.degenerate_used += 1;
            } else if !w.adjacent {
                summary.fallback_used += 1;
            }
            summary.pairs += 1;
        }
        summary.permutations += 1;
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_three_report() {
        let r = verify_degree(3, 1, false).unwrap();
        assert_eq!(r.examined, 2);
        assert!(r.violations.is_empty());
        // both cycles have sorted sequence (1, 2)
        assert_eq!(r.tight_histogram, BTreeMap::from([(1, 2), (2, 2)]));
    }

    #[test]
    fn degree_two_single_shard() {
        let r = verify_degree(2, 3, true).unwrap();
        assert_eq!(r.total(), 1);
        assert_eq!(r.tight_histogram, BTreeMap::from([(1, 1)]));
    }

    #[test]
    fn rejects_bad_arguments() {
        assert_eq!(verify_degree(5, 0, false), Err(VerifyError::ZeroWorkers));
        assert!(matches!(
            verify_degree(MAX_VERIFY_DEGREE + 1, 1, false),
            Err(VerifyError::DegreeTooLarge { .. })
        ));
        assert!(matches!(
            verify_degree(1, 1, false),
            Err(VerifyError::Perm(PermError::DegreeTooSmall { .. }))
        ));
    }

    #[test]
    fn reflected_word_matches_conjugate() {
        let f = CyclicPerm::stefan(3).unwrap();
        let mut out = Vec::new();
        reflected_word(&f.cycle_word(), &mut out);
        assert_eq!(out, f.reflect_conjugate().cycle_word());
    }

    #[test]
    fn pruning_agrees() {
        for n in 2..=7 {
            let a = verify_degree(n, 2, false).unwrap();
            let b = verify_degree(n, 3, true).unwrap();
            assert_eq!(a.violations, b.violations);
            assert_eq!(a.tight_histogram, b.tight_histogram);
            assert_eq!(b.total(), cyclic_count(n));
            assert!(b.examined < a.examined || n <= 3);
        }
    }

    #[test]
    fn partition_basics() {
        let p = Partition::new(5, vec![2]).unwrap();
        assert_eq!(p.block_count(), 2);
        assert_eq!(
            p.blocks(),
            vec![IndexInterval::new(1, 2), IndexInterval::new(3, 5)]
        );
        assert_eq!(p.block_of(2), 1);
        assert_eq!(p.block_of(3), 2);
        assert!(Partition::new(5, vec![3, 2]).is_err());
        assert!(Partition::new(5, vec![5]).is_err());
        assert_eq!(Partition::all(4).count(), 8);
        assert_eq!(Partition::from_mask(5, 0b0101).cuts(), &[1, 3]);
    }

    #[test]
    fn witness_examples() {
        let shift4 = CyclicPerm::shift(4).unwrap();
        let w = check_partition(&shift4, &Partition::new(4, vec![]).unwrap()).unwrap();
        assert_eq!((w.r, w.s, w.l), (3, 4, 1));

        let stefan = CyclicPerm::stefan(2).unwrap();
        let w = check_partition(&stefan, &Partition::new(5, vec![2]).unwrap()).unwrap();
        assert_eq!((w.block, w.r, w.s, w.l), (2, 3, 4, 1));

        let w = check_partition(&shift4, &Partition::new(4, vec![3]).unwrap()).unwrap();
        assert_eq!((w.r, w.s, w.l), (2, 3, 2));
    }

    #[test]
    fn witness_validation_rejects_forgeries() {
        let shift4 = CyclicPerm::shift(4).unwrap();
        let p = Partition::new(4, vec![2]).unwrap();
        // crosses the cut
        assert!(Witness14::validated(&shift4, &p, 2, 3, 2).is_err());
        // exponent exceeds block count
        assert!(
            Witness14::validated(&shift4, &Partition::new(4, vec![]).unwrap(), 1, 2, 3).is_err()
        );
        // wrong exponent
        assert!(Witness14::validated(&shift4, &p, 3, 4, 2).is_err());
        assert!(Witness14::validated(&shift4, &p, 3, 4, 1).is_ok());
        // a point returns only after n steps
        let finest = Partition::new(4, vec![1, 2, 3]).unwrap();
        assert!(Witness14::validated(&shift4, &finest, 2, 2, 3).is_err());
        let w = check_partition(&shift4, &finest).unwrap();
        assert_eq!((w.r, w.s, w.l), (1, 1, 4));
    }

    #[test]
    fn small_exhaustive_partitions() {
        for (n, pairs) in [(3, 8), (4, 48), (5, 384)] {
            let s = exhaustive_partition_check(n).unwrap();
            assert_eq!(s.pairs, pairs);
            assert_eq!(s.fallback_used, 0);
            // only the all-singletons partition needs a single point
            assert_eq!(s.degenerate_used, s.permutations);
        }
    }
}
