//! Discrete set-valued covers on `{1..n}` and their reduction to a single
//! cyclic permutation.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::pl::Interval;
use super::saturate::saturation_closure;
use super::system::PLCoveringSystem;
use super::{CoveringError, Rational};
use crate::perm::CyclicPerm;

/// `image[i - 1]` is the (possibly empty) image of `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteCover {
    image: Vec<BTreeSet<usize>>,
}

#[derive(Serialize, Deserialize)]
struct CoverDoc {
    n: usize,
    image: Vec<Vec<usize>>,
}

impl DiscreteCover {
    /// Checks only that every target lies in `{1..n}`.
    pub fn new(image: Vec<BTreeSet<usize>>) -> Result<Self, CoveringError> {
        let n = image.len();
        if n == 0 {
            return Err(CoveringError::MalformedCover("no pieces".into()));
        }
        if let Some(bad) = image.iter().flatten().find(|&&j| j == 0 || j > n) {
            return Err(CoveringError::MalformedCover(format!(
                "target {bad} outside 1..{n}"
            )));
        }
        Ok(DiscreteCover { image })
    }

    pub fn from_lists(lists: &[&[usize]]) -> Result<Self, CoveringError> {
        Self::new(lists.iter().map(|l| l.iter().copied().collect()).collect())
    }

    pub fn from_perm(f: &CyclicPerm) -> Self {
        DiscreteCover {
            image: f.image().iter().map(|&j| BTreeSet::from([j])).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image(&self, i: usize) -> &BTreeSet<usize> {
        &self.image[i - 1]
    }

    /// True when the images together hit every index.
    pub fn is_covering(&self) -> bool {
        let hit: BTreeSet<usize> = self.image.iter().flatten().copied().collect();
        hit.len() == self.len()
    }

    /// `{"n": .., "image": [[..], ..]}`.
    pub fn to_json(&self) -> String {
        let doc = CoverDoc {
            n: self.len(),
            image: self
                .image
                .iter()
                .map(|s| s.iter().copied().collect())
                .collect(),
        };
        serde_json::to_string(&doc).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CoveringError> {
        let doc: CoverDoc =
            serde_json::from_str(text).map_err(|e| CoveringError::Json(e.to_string()))?;
        if doc.n != doc.image.len() {
            return Err(CoveringError::MalformedCover(format!(
                "n = {} but {} images given",
                doc.n,
                doc.image.len()
            )));
        }
        Self::new(
            doc.image
                .into_iter()
                .map(|l| l.into_iter().collect())
                .collect(),
        )
    }
}

/// A discrete cover together with the piece each index stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discretized {
    pub cover: DiscreteCover,
    pub pieces: Vec<Interval>,
}

/// Cuts every system interval at the saturation closure and records which
/// pieces each piece's exact image contains.
pub fn to_discrete_cover(sys: &PLCoveringSystem) -> Result<Discretized, CoveringError> {
    to_discrete_cover_with_cuts(sys, &[])
}

/// As [`to_discrete_cover`], with additional cut points. Each extra cut must
/// lie strictly inside a system interval.
pub fn to_discrete_cover_with_cuts(
    sys: &PLCoveringSystem,
    extra_cuts: &[Rational],
) -> Result<Discretized, CoveringError> {
    let mut cuts = saturation_closure(sys)?;
    for c in extra_cuts {
        if !sys.in_union(c) {
            return Err(CoveringError::InvalidSystem(format!(
                "cut {c} lies outside the intervals"
            )));
        }
        cuts.insert(c.clone());
    }
    let mut pieces = Vec::new();
    for iv in sys.intervals() {
        let inside: Vec<&Rational> = cuts.range(&iv.lo..=&iv.hi).collect();
        for w in inside.windows(2) {
            pieces.push(Interval::new(w[0].clone(), w[1].clone()));
        }
    }
    let mut image = Vec::with_capacity(pieces.len());
    for p in &pieces {
        let img = sys.map().image(p)?;
        image.push(
            pieces
                .iter()
                .enumerate()
                .filter(|(_, q)| img.contains(q))
                .map(|(j, _)| j + 1)
                .collect(),
        );
    }
    Ok(Discretized {
        cover: DiscreteCover { image },
        pieces,
    })
}

/// Result of reducing a cover to one transitive permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    /// The permutation on the selected orbit, relabeled to `{1..m}`.
    pub perm: CyclicPerm,
    /// Old index to new label, for the orbit members.
    pub relabeling: BTreeMap<usize, usize>,
    /// Indices removed because their image became empty or nothing hit them.
    pub deleted: Vec<usize>,
    /// The orbit in old labels, starting from its least index.
    pub orbit: Vec<usize>,
    /// Surviving indices on other orbits.
    pub dropped: Vec<usize>,
}

impl Reduction {
    /// Cycle word in old labels, space separated.
    pub fn orbit_word(&self) -> String {
        self.orbit
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Reduces a cover to a cyclic permutation.
///
/// 1. Each index is kept only in the image of its least preimage.
/// 2. Indices with empty image, or hit by nothing, are deleted and removed
///    from every image, until none remain.
/// 3. Every surviving image is now a single index.
/// 4. The orbit of the least surviving index is relabeled to `{1..m}`.
pub fn reduce_to_cyclic(d: &DiscreteCover) -> Result<Reduction, CoveringError> {
    let n = d.len();
    let mut image: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut claimed = vec![false; n];
    for i in 1..=n {
        for &j in d.image(i) {
            if !claimed[j - 1] {
                claimed[j - 1] = true;
                image[i - 1].insert(j);
            }
        }
    }

    let mut alive = vec![true; n];
    let mut deleted = Vec::new();
    loop {
        let mut hit = vec![false; n];
        for i in (1..=n).filter(|&i| alive[i - 1]) {
            for &j in &image[i - 1] {
                hit[j - 1] = true;
            }
        }
        let doomed: Vec<usize> = (1..=n)
            .filter(|&i| alive[i - 1] && (image[i - 1].is_empty() || !hit[i - 1]))
            .collect();
        if doomed.is_empty() {
            break;
        }
        for &i in &doomed {
            alive[i - 1] = false;
            deleted.push(i);
        }
        for set in image.iter_mut() {
            set.retain(|j| alive[j - 1]);
        }
    }
    deleted.sort_unstable();

    let survivors: Vec<usize> = (1..=n).filter(|&i| alive[i - 1]).collect();
    let Some(&start) = survivors.first() else {
        return Err(CoveringError::MalformedCover(
            "every index was deleted".into(),
        ));
    };
    let next = |i: usize| -> usize {
        let set = &image[i - 1];
        assert_eq!(
            set.len(),
            1,
            "disjoint nonempty images over a finite set are singletons"
        );
        *set.first().expect("non-empty")
    };

    let mut orbit = vec![start];
    let mut x = next(start);
    while x != start {
        orbit.push(x);
        x = next(x);
    }
    let mut sorted = orbit.clone();
    sorted.sort_unstable();
    let relabeling: BTreeMap<usize, usize> = sorted
        .iter()
        .enumerate()
        .map(|(k, &old)| (old, k + 1))
        .collect();
    let word: Vec<usize> = orbit.iter().map(|old| relabeling[old]).collect();
    let perm = CyclicPerm::from_cycle_word(&word)?;
    let dropped = survivors
        .into_iter()
        .filter(|i| !relabeling.contains_key(i))
        .collect();
    Ok(Reduction {
        perm,
        relabeling,
        deleted,
        orbit,
        dropped,
    })
}
