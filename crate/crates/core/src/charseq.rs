//! Convex-hull dynamics and characteristic sequences.
//!
//! `convf(J)` is the smallest integer interval containing `f(J)`. The
//! characteristic number of the adjacent pair `A_i = {i, i+1}` is the least
//! `m >= 1` with `convf^m(A_i) ⊇ A_i`. Iterating `convf` is deterministic on a
//! finite state space of at most `n(n+1)/2` intervals, so a repeated state
//! proves that no iterate ever returns; that outcome is [`CharNumber::NoReturn`].

use std::fmt;

use serde::{Serialize, Serializer};

use crate::perm::{is_bijection, CyclicPerm, IndexInterval, PermError};

/// A characteristic number. `Steps` sorts before `NoReturn`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CharNumber {
    Steps(usize),
    NoReturn,
}

impl CharNumber {
    pub fn steps(self) -> Option<usize> {
        match self {
            CharNumber::Steps(m) => Some(m),
            CharNumber::NoReturn => None,
        }
    }

    /// True when this number is finite and at most `bound`.
    pub fn at_most(self, bound: usize) -> bool {
        matches!(self, CharNumber::Steps(m) if m <= bound)
    }
}

impl fmt::Display for CharNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharNumber::Steps(m) => write!(f, "{m}"),
            CharNumber::NoReturn => f.write_str("noreturn"),
        }
    }
}

/// Serializes as an integer, or `null` for `NoReturn`.
impl Serialize for CharNumber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.steps().serialize(s)
    }
}

fn hull(image: &[usize], j: IndexInterval) -> IndexInterval {
    let slice = &image[j.lo - 1..j.hi];
    let lo = *slice.iter().min().expect("non-empty interval");
    let hi = *slice.iter().max().expect("non-empty interval");
    IndexInterval { lo, hi }
}

/// `{min f(J) .. max f(J)}`.
pub fn convf(f: &CyclicPerm, j: IndexInterval) -> IndexInterval {
    assert!(j.hi <= f.degree(), "{j} outside degree {}", f.degree());
    hull(f.image(), j)
}

fn char_number_on(image: &[usize], i: usize) -> CharNumber {
    let n = image.len();
    assert!(
        i >= 1 && i < n,
        "adjacent pair A_{i} out of range for degree {n}"
    );
    let target = IndexInterval::pair(i);
    let mut seen = vec![false; n * n];
    let mut j = target;
    let mut m = 0;
    loop {
        j = hull(image, j);
        m += 1;
        if j.contains(&target) {
            return CharNumber::Steps(m);
        }
        let key = (j.lo - 1) * n + (j.hi - 1);
        if seen[key] {
            return CharNumber::NoReturn;
        }
        seen[key] = true;
    }
}

/// Least `m >= 1` with `convf^m(A_i) ⊇ A_i`, for `1 <= i <= n - 1`.
pub fn characteristic_number(f: &CyclicPerm, i: usize) -> CharNumber {
    char_number_on(f.image(), i)
}

/// Per-pair characteristic numbers and their nondecreasing rearrangement.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CharSeq {
    /// `raw[i - 1]` is the characteristic number of `A_i`.
    pub raw: Vec<CharNumber>,
    pub sorted: Vec<CharNumber>,
}

/// Outcome of testing `sorted[i] <= i` for every position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundCheck {
    Holds,
    /// `position` is 1-based and the least one with `sorted[position] > position`.
    Violated {
        position: usize,
    },
}

impl BoundCheck {
    pub fn holds(self) -> bool {
        self == BoundCheck::Holds
    }
}

impl CharSeq {
    pub fn from_raw(raw: Vec<CharNumber>) -> Self {
        let mut sorted = raw.clone();
        sorted.sort_unstable();
        CharSeq { raw, sorted }
    }

    /// `sorted[k] <= k` for all `k`; `NoReturn` always violates.
    pub fn check_bound(&self) -> BoundCheck {
        match self
            .sorted
            .iter()
            .enumerate()
            .find(|(k, m)| !m.at_most(k + 1))
        {
            None => BoundCheck::Holds,
            Some((k, _)) => BoundCheck::Violated { position: k + 1 },
        }
    }

    /// 1-based positions `k` with `sorted[k] == k`.
    pub fn tight_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.sorted
            .iter()
            .enumerate()
            .filter(|(k, m)| **m == CharNumber::Steps(k + 1))
            .map(|(k, _)| k + 1)
    }
}

fn join_numbers(values: &[CharNumber]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for CharSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "raw: {}; sorted: {}",
            join_numbers(&self.raw),
            join_numbers(&self.sorted)
        )
    }
}

pub fn characteristic_sequence(f: &CyclicPerm) -> CharSeq {
    let n = f.degree();
    CharSeq::from_raw((1..n).map(|i| characteristic_number(f, i)).collect())
}

/// Characteristic sequence of any bijection, transitive or not.
///
/// Exists to reproduce behaviour on non-cyclic permutations; the cyclic API
/// is [`characteristic_sequence`].
pub fn characteristic_sequence_unchecked(image: &[usize]) -> Result<CharSeq, PermError> {
    if image.is_empty() {
        return Err(PermError::Empty);
    }
    if !is_bijection(image) {
        return Err(PermError::NotBijection(image.len()));
    }
    let n = image.len();
    Ok(CharSeq::from_raw(
        (1..n).map(|i| char_number_on(image, i)).collect(),
    ))
}

/// Checks `sorted[k] <= k` on the characteristic sequence of `f`.
pub fn check_index_bound(f: &CyclicPerm) -> BoundCheck {
    characteristic_sequence(f).check_bound()
}

/// Diagnostic variant without hulls: least `m >= 1` such that `f^m(i) - i`
/// and `f^m(i+1) - (i+1)` have opposite signs.
///
/// Returns `NoReturn` when both points come back to themselves first.
pub fn pointwise_crossing_numbers(image: &[usize]) -> Result<Vec<CharNumber>, PermError> {
    if image.is_empty() {
        return Err(PermError::Empty);
    }
    if !is_bijection(image) {
        return Err(PermError::NotBijection(image.len()));
    }
    let n = image.len();
    let sign = |a: usize, b: usize| (a as i64 - b as i64).signum();
    Ok((1..n)
        .map(|i| {
            let (mut x, mut y) = (i, i + 1);
            let mut m = 0;
            loop {
                x = image[x - 1];
                y = image[y - 1];
                m += 1;
                if sign(x, i) * sign(y, i + 1) < 0 {
                    return CharNumber::Steps(m);
                }
                if x == i && y == i + 1 {
                    return CharNumber::NoReturn;
                }
            }
        })
        .collect())
}

/// Reusable buffers for computing many characteristic sequences of one degree.
///
/// Precomputes `convf` on all `n(n+1)/2` intervals, then iterates by table
/// lookup. Used by the exhaustive verifier.
#[derive(Debug, Clone)]
pub struct HullTable {
    n: usize,
    next_lo: Vec<u16>,
    next_hi: Vec<u16>,
    stamp: Vec<u32>,
    epoch: u32,
    numbers: Vec<CharNumber>,
}

impl HullTable {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1 && n <= u16::MAX as usize);
        HullTable {
            n,
            next_lo: vec![0; n * n],
            next_hi: vec![0; n * n],
            stamp: vec![0; n * n],
            epoch: 0,
            numbers: Vec::with_capacity(n),
        }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// Raw characteristic numbers of the bijection `image` (1-based values),
    /// `result[i - 1]` for `A_i`.
    pub fn raw_numbers(&mut self, image: &[usize]) -> &[CharNumber] {
        let n = self.n;
        assert_eq!(image.len(), n);
        // 0-based (lo, hi) -> 0-based hull, stored at lo * n + hi.
        for lo in 0..n {
            let mut mn = image[lo] - 1;
            let mut mx = mn;
            for (hi, &value) in image.iter().enumerate().skip(lo) {
                let v = value - 1;
                mn = mn.min(v);
                mx = mx.max(v);
                self.next_lo[lo * n + hi] = mn as u16;
                self.next_hi[lo * n + hi] = mx as u16;
            }
        }
        self.numbers.clear();
        for i in 0..n.saturating_sub(1) {
            if self.epoch == u32::MAX {
                self.stamp.iter_mut().for_each(|s| *s = 0);
                self.epoch = 0;
            }
            self.epoch += 1;
            let (mut lo, mut hi) = (i, i + 1);
            let mut m = 0;
            let number = loop {
                let key = lo * n + hi;
                lo = self.next_lo[key] as usize;
                hi = self.next_hi[key] as usize;
                m += 1;
                if lo <= i && hi > i {
                    break CharNumber::Steps(m);
                }
                let key = lo * n + hi;
                if self.stamp[key] == self.epoch {
                    break CharNumber::NoReturn;
                }
                self.stamp[key] = self.epoch;
            };
            self.numbers.push(number);
        }
        &self.numbers
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::CyclicPerm;
    use CharNumber::Steps;

    fn perm(word: &[usize]) -> CyclicPerm {
        CyclicPerm::from_cycle_word(word).unwrap()
    }

    #[test]
    fn convf_examples() {
        let shift4 = CyclicPerm::shift(4).unwrap();
        assert_eq!(
            convf(&shift4, IndexInterval::new(1, 2)),
            IndexInterval::new(2, 3)
        );
        assert_eq!(
            convf(&shift4, IndexInterval::new(3, 4)),
            IndexInterval::new(1, 4)
        );
        let f = perm(&[1, 2, 4, 3]);
        assert_eq!(
            convf(&f, IndexInterval::new(3, 4)),
            IndexInterval::new(1, 3)
        );
    }

    #[test]
    fn characteristic_number_examples() {
        for n in 2..10 {
            let s = CyclicPerm::shift(n).unwrap();
            assert_eq!(characteristic_number(&s, n - 1), Steps(1));
        }
        let stefan = CyclicPerm::stefan(2).unwrap();
        assert_eq!(characteristic_number(&stefan, 2), Steps(4));
    }

    #[test]
    fn non_transitive_example() {
        let seq = characteristic_sequence_unchecked(&[3, 2, 1]).unwrap();
        assert_eq!(seq.raw, vec![Steps(2), Steps(2)]);
        assert_eq!(seq.check_bound(), BoundCheck::Violated { position: 1 });
        assert!(characteristic_sequence_unchecked(&[2, 2, 1]).is_err());
    }

    #[test]
    fn sequences() {
        let s4 = characteristic_sequence(&CyclicPerm::shift(4).unwrap());
        assert_eq!(s4.raw, vec![Steps(3), Steps(2), Steps(1)]);
        assert_eq!(s4.sorted, vec![Steps(1), Steps(2), Steps(3)]);
        assert_eq!(s4.tight_positions().collect::<Vec<_>>(), vec![1, 2, 3]);

        let st = characteristic_sequence(&CyclicPerm::stefan(2).unwrap());
        assert_eq!(st.raw, vec![Steps(2), Steps(4), Steps(1), Steps(2)]);
        assert_eq!(st.sorted, vec![Steps(1), Steps(2), Steps(2), Steps(4)]);
        assert!(st.check_bound().holds());

        let f = characteristic_sequence(&perm(&[1, 2, 4, 3]));
        assert_eq!(f.raw, vec![Steps(2), Steps(1), Steps(2)]);
        assert_eq!(f.sorted, vec![Steps(1), Steps(2), Steps(2)]);
    }

    #[test]
    fn crossing_variant() {
        let f = perm(&[1, 2, 4, 3]);
        assert_eq!(
            pointwise_crossing_numbers(f.image()).unwrap(),
            vec![Steps(3), Steps(1), Steps(3)]
        );
    }

    #[test]
    fn no_return_sorts_last_and_violates() {
        let seq = CharSeq::from_raw(vec![CharNumber::NoReturn, Steps(1)]);
        assert_eq!(seq.sorted, vec![Steps(1), CharNumber::NoReturn]);
        assert_eq!(seq.check_bound(), BoundCheck::Violated { position: 2 });
    }

    #[test]
    fn bijections_always_return() {
        // convf^m(A_i) contains f^m(A_i), and f^order = id, so every bijection
        // returns; exhaustively confirm for degree <= 5.
        let mut table = HullTable::new(5);
        let mut image = vec![1, 2, 3, 4, 5];
        loop {
            assert!(table
                .raw_numbers(&image)
                .iter()
                .all(|m| m.steps().is_some()));
            if !next_permutation(&mut image) {
                break;
            }
        }
    }

    fn next_permutation(a: &mut [usize]) -> bool {
        let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
            return false;
        };
        let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).unwrap();
        a.swap(i - 1, j);
        a[i..].reverse();
        true
    }

    #[test]
    fn table_matches_direct() {
        let mut table = HullTable::new(5);
        let stefan = CyclicPerm::stefan(2).unwrap();
        assert_eq!(
            table.raw_numbers(stefan.image()).to_vec(),
            characteristic_sequence(&stefan).raw
        );
        let mut t3 = HullTable::new(3);
        assert_eq!(
            t3.raw_numbers(&[3, 2, 1]).to_vec(),
            vec![Steps(2), Steps(2)]
        );
    }
}
