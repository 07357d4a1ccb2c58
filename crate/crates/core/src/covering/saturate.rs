//! Forward saturation of the endpoint set and the snapping perturbation.

use std::collections::BTreeSet;

use super::pl::PLMap;
use super::system::PLCoveringSystem;
use super::{CoveringError, Rational};

/// Sorted, deduplicated points inside the interval union.
pub type PointSet = BTreeSet<Rational>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Saturation {
    /// `chain[i]` is `M_i`; `chain[0]` holds the `2k` endpoints.
    pub chain: Vec<PointSet>,
    /// Smallest distance from a point of `M_N \ M_{N-1}` to `M_{N-1}`;
    /// `None` when nothing new appeared (or `N = 0`).
    pub min_new_gap: Option<Rational>,
}

impl Saturation {
    pub fn last(&self) -> &PointSet {
        self.chain.last().expect("chain holds M_0")
    }

    pub fn depth(&self) -> usize {
        self.chain.len() - 1
    }

    /// True when the last step added nothing.
    pub fn is_stable(&self) -> bool {
        self.chain.len() >= 2
            && self.chain[self.chain.len() - 1] == self.chain[self.chain.len() - 2]
    }
}

fn distance_to(set: &PointSet, x: &Rational) -> Option<Rational> {
    let below = set.range(..=x).next_back().map(|p| x - p);
    let above = set.range(x..).next().map(|p| p - x);
    match (below, above) {
        (Some(a), Some(b)) => Some(if a <= b { a } else { b }),
        (a, b) => a.or(b),
    }
}

/// Nearest element, ties broken towards the smaller one.
fn nearest(set: &PointSet, x: &Rational) -> Option<Rational> {
    let below = set.range(..=x).next_back();
    let above = set.range(x..).next();
    match (below, above) {
        (Some(a), Some(b)) => Some(if x - a <= b - x { a.clone() } else { b.clone() }),
        (a, b) => a.or(b).cloned(),
    }
}

/// `M_0 ⊆ M_1 ⊆ .. ⊆ M_depth`, where `M_{i+1} = M_i ∪ (f(M_i) ∩ union)`.
pub fn saturate(sys: &PLCoveringSystem, depth: usize) -> Result<Saturation, CoveringError> {
    let m0: PointSet = sys.endpoints().into_iter().collect();
    let mut chain = vec![m0.clone()];
    let mut frontier: Vec<Rational> = m0.into_iter().collect();
    for _ in 0..depth {
        let mut next = chain.last().expect("non-empty").clone();
        let mut added = Vec::new();
        for x in &frontier {
            let y = sys.map().eval(x)?;
            if sys.in_union(&y) && next.insert(y.clone()) {
                added.push(y);
            }
        }
        chain.push(next);
        frontier = added;
    }
    let min_new_gap = if depth == 0 {
        None
    } else {
        let prev = &chain[depth - 1];
        chain[depth]
            .difference(prev)
            .filter_map(|x| distance_to(prev, x))
            .min()
    };
    Ok(Saturation { chain, min_new_gap })
}

/// A snapped system and what the perturbation cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapped {
    pub system: PLCoveringSystem,
    /// Largest `|f̃(x) - f(x)|` over `x ∈ M_{N-1}`.
    pub displacement: Rational,
    /// Whether the snapped map still covers the union.
    pub covering_preserved: bool,
    /// The cut set `M_{N-1}` (also the breakpoints of the snapped map).
    pub points: PointSet,
}

/// Moves every value at a point of `M_{N-1}` that lies in the union onto the
/// nearest point of `M_{N-1}` (ties downward), and interpolates linearly
/// between consecutive points of `M_{N-1}`.
///
/// Values that leave the union are kept. Afterwards the saturation of the
/// snapped map closes at `M_{N-1}`.
pub fn snap(sys: &PLCoveringSystem, depth: usize) -> Result<Snapped, CoveringError> {
    if depth == 0 {
        return Err(CoveringError::InvalidDepth(depth));
    }
    let sat = saturate(sys, depth - 1)?;
    let points = sat.last().clone();
    let mut displacement = Rational::zero();
    let mut breakpoints = Vec::with_capacity(points.len());
    for x in &points {
        let y = sys.map().eval(x)?;
        let snapped = if sys.in_union(&y) {
            nearest(&points, &y).expect("point set is non-empty")
        } else {
            y.clone()
        };
        let moved = (&snapped - &y).abs();
        if moved > displacement {
            displacement = moved;
        }
        breakpoints.push((x.clone(), snapped));
    }
    let system = PLCoveringSystem::structured(sys.intervals().to_vec(), PLMap::new(breakpoints)?)?;
    let covering_preserved = system.is_covering()?;
    Ok(Snapped {
        system,
        displacement,
        covering_preserved,
        points,
    })
}

/// The fixed point of saturation, if it is reached within the breakpoint set
/// of the map (always true for a snapped system).
pub fn saturation_closure(sys: &PLCoveringSystem) -> Result<PointSet, CoveringError> {
    let bound = sys.map().breakpoints().count() + sys.intervals().len() * 2 + 1;
    let mut points: PointSet = sys.endpoints().into_iter().collect();
    let mut frontier: Vec<Rational> = points.iter().cloned().collect();
    for _ in 0..=bound {
        let mut added = Vec::new();
        for x in &frontier {
            let y = sys.map().eval(x)?;
            if sys.in_union(&y) && points.insert(y.clone()) {
                added.push(y);
            }
        }
        if added.is_empty() {
            return Ok(points);
        }
        if points.len() > bound {
            break;
        }
        frontier = added;
    }
    Err(CoveringError::NotSaturated)
}
