//! Transitive permutations of `{1..n}` and the integer intervals they act on.
//!
//! Everything here is 1-based: a [`CyclicPerm`] of degree `n` maps `{1..n}` to
//! itself and `image()[i - 1]` holds `f(i)`.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("empty permutation")]
    Empty,
    #[error("not a bijection of {{1..{0}}}")]
    NotBijection(usize),
    #[error("not transitive: the orbit of 1 has {orbit} of {degree} points")]
    NotTransitive { orbit: usize, degree: usize },
    #[error("degree {degree} below minimum {min}")]
    DegreeTooSmall { degree: usize, min: usize },
    #[error("degree {degree} above supported maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },
    #[error("invalid cycle prefix {0:?}")]
    BadPrefix(Vec<usize>),
    #[error("cannot parse permutation: {0}")]
    Parse(String),
}

/// Returns true when `image` (1-based values) is a bijection of `{1..image.len()}`.
pub fn is_bijection(image: &[usize]) -> bool {
    let n = image.len();
    let mut seen = vec![false; n];
    for &v in image {
        if v == 0 || v > n || seen[v - 1] {
            return false;
        }
        seen[v - 1] = true;
    }
    true
}

fn orbit_len_of_one(image: &[usize]) -> usize {
    let mut len = 1;
    let mut x = image[0];
    while x != 1 {
        x = image[x - 1];
        len += 1;
    }
    len
}

/// A single `n`-cycle on `{1..n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicPerm {
    image: Vec<usize>,
}

impl CyclicPerm {
    /// Builds from a one-line image array, `image[i - 1] = f(i)`.
    pub fn from_image(image: Vec<usize>) -> Result<Self, PermError> {
        if image.is_empty() {
            return Err(PermError::Empty);
        }
        if !is_bijection(&image) {
            return Err(PermError::NotBijection(image.len()));
        }
        let orbit = orbit_len_of_one(&image);
        if orbit != image.len() {
            return Err(PermError::NotTransitive {
                orbit,
                degree: image.len(),
            });
        }
        Ok(CyclicPerm { image })
    }

    /// Builds from a cycle word `w`, meaning `w[0] -> w[1] -> ... -> w[n-1] -> w[0]`.
    ///
    /// The word may start anywhere on the cycle.
    pub fn from_cycle_word(word: &[usize]) -> Result<Self, PermError> {
        if word.is_empty() {
            return Err(PermError::Empty);
        }
        if !is_bijection(word) {
            return Err(PermError::NotBijection(word.len()));
        }
        let n = word.len();
        let mut image = vec![0; n];
        for k in 0..n {
            image[word[k] - 1] = word[(k + 1) % n];
        }
        Ok(CyclicPerm { image })
    }

    /// The cyclic shift `1 -> 2 -> ... -> n -> 1`.
    pub fn shift(n: usize) -> Result<Self, PermError> {
        if n < 2 {
            return Err(PermError::DegreeTooSmall { degree: n, min: 2 });
        }
        let image = (1..=n).map(|i| i % n + 1).collect();
        Ok(CyclicPerm { image })
    }

    /// The Stefan orbit of period `2m + 1`:
    /// `1 -> m+1 -> m+2 -> m -> m+3 -> m-1 -> ... -> 2m -> 2 -> 2m+1 -> 1`.
    pub fn stefan(m: usize) -> Result<Self, PermError> {
        if m < 1 {
            return Err(PermError::DegreeTooSmall {
                degree: 2 * m + 1,
                min: 3,
            });
        }
        let mut word = Vec::with_capacity(2 * m + 1);
        word.push(1);
        word.push(m + 1);
        for j in 1..m {
            word.push(m + 1 + j);
            word.push(m + 1 - j);
        }
        word.push(2 * m + 1);
        Self::from_cycle_word(&word)
    }

    /// A uniformly random `n`-cycle.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self, PermError> {
        if n < 1 {
            return Err(PermError::Empty);
        }
        let mut word: Vec<usize> = (1..=n).collect();
        word[1..].shuffle(rng);
        Self::from_cycle_word(&word)
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    /// `f(i)` for `1 <= i <= n`.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// The cycle word starting at 1.
    pub fn cycle_word(&self) -> Vec<usize> {
        let n = self.degree();
        let mut word = Vec::with_capacity(n);
        let mut x = 1;
        for _ in 0..n {
            word.push(x);
            x = self.apply(x);
        }
        word
    }

    /// Conjugation by the reflection `r(i) = n + 1 - i`, i.e. `r ∘ f ∘ r`.
    pub fn reflect_conjugate(&self) -> CyclicPerm {
        let n = self.degree();
        let image = (1..=n).map(|i| n + 1 - self.apply(n + 1 - i)).collect();
        CyclicPerm { image }
    }

    /// Inverse permutation; still an `n`-cycle.
    pub fn inverse(&self) -> CyclicPerm {
        let mut image = vec![0; self.degree()];
        for (i, &v) in self.image.iter().enumerate() {
            image[v - 1] = i + 1;
        }
        CyclicPerm { image }
    }
}

fn join(values: &[usize]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Formats as the cycle word from 1, e.g. `1 3 4 2 5`.
impl fmt::Display for CyclicPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join(&self.cycle_word()))
    }
}

/// How a token list should be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermNotation {
    /// A token list starting with `1` is a cycle word, otherwise an image array.
    Auto,
    CycleWord,
    Image,
}

/// Splits on whitespace and commas, tolerating surrounding parentheses.
pub fn parse_tokens(text: &str) -> Result<Vec<usize>, PermError> {
    let cleaned: String = text
        .chars()
        .map(|c| {
            if matches!(c, '(' | ')' | '[' | ']' | ',') {
                ' '
            } else {
                c
            }
        })
        .collect();
    cleaned
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| PermError::Parse(format!("bad token {t:?}")))
        })
        .collect()
}

/// Resolves a token list to an image array under the given notation.
///
/// An `n`-cycle never fixes 1 for `n >= 2`, so under [`PermNotation::Auto`] a
/// leading `1` unambiguously marks a cycle word.
pub fn tokens_to_image(tokens: &[usize], notation: PermNotation) -> Result<Vec<usize>, PermError> {
    if tokens.is_empty() {
        return Err(PermError::Empty);
    }
    if !is_bijection(tokens) {
        return Err(PermError::NotBijection(tokens.len()));
    }
    let as_word = match notation {
        PermNotation::CycleWord => true,
        PermNotation::Image => false,
        PermNotation::Auto => tokens[0] == 1,
    };
    if as_word {
        Ok(CyclicPerm::from_cycle_word(tokens)?.image)
    } else {
        Ok(tokens.to_vec())
    }
}

impl FromStr for CyclicPerm {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tokens = parse_tokens(s)?;
        CyclicPerm::from_image(tokens_to_image(&tokens, PermNotation::Auto)?)
    }
}

/// The integer interval `{lo, lo + 1, ..., hi}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexInterval {
    pub lo: usize,
    pub hi: usize,
}

impl IndexInterval {
    pub fn new(lo: usize, hi: usize) -> Self {
        assert!(lo <= hi, "empty interval {lo}..{hi}");
        IndexInterval { lo, hi }
    }

    /// The adjacent pair `A_i = {i, i + 1}`.
    pub fn pair(i: usize) -> Self {
        IndexInterval { lo: i, hi: i + 1 }
    }

    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, other: &IndexInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_point(&self, x: usize) -> bool {
        self.lo <= x && x <= self.hi
    }
}

impl fmt::Display for IndexInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}..{}}}", self.lo, self.hi)
    }
}
