//! Exact periodic points from chains of covering intervals.

use std::collections::BTreeSet;

use serde::Serialize;

use super::pl::{Interval, PLMap};
use super::system::PLCoveringSystem;
use super::{CoveringError, Rational};
use crate::markov::{CycleLength, MarkovGraph};

/// A point with `f^period(x) = x`, verified exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodicPoint {
    pub x: Rational,
    pub period: usize,
    /// Piece indices (1-based) of the chain that produced the point. Empty
    /// when the chain was supplied directly; for a point found by scanning
    /// iterates, the pieces holding those orbit points that lie in the union.
    pub cycle: Vec<usize>,
    #[serde(skip)]
    pub orbit: Vec<Rational>,
}

impl PeriodicPoint {
    /// `{"x":"p/q","period":l,"cycle":[..]}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

/// Points of `span` where the map takes the value `y`, ascending. A constant
/// piece at level `y` contributes both of its ends.
fn level_hits(map: &PLMap, span: &Interval, y: &Rational) -> Result<Vec<Rational>, CoveringError> {
    let mut hits = BTreeSet::new();
    for seg in map.segments(span)? {
        if seg.is_constant() {
            if &seg.y0 == y {
                hits.insert(seg.x0.clone());
                hits.insert(seg.x1.clone());
            }
        } else if seg.image().contains_point(y) {
            hits.insert(seg.preimage(y));
        }
    }
    Ok(hits.into_iter().collect())
}

/// A subinterval of `span` that the map sends exactly onto `target`, which
/// must be nondegenerate and inside the image of `span`.
fn pull_back(map: &PLMap, span: &Interval, target: &Interval) -> Result<Interval, CoveringError> {
    let segments = map.segments(span)?;
    // a single linear piece keeps the step affine
    if let Some(seg) = segments
        .iter()
        .find(|s| !s.is_constant() && s.image().contains(target))
    {
        return Ok(Interval::spanning(
            seg.preimage(&target.lo),
            seg.preimage(&target.hi),
        ));
    }
    let lo_hits = level_hits(map, span, &target.lo)?;
    let hi_hits = level_hits(map, span, &target.hi)?;
    let (first, second) = if lo_hits[0] < hi_hits[0] {
        (lo_hits, hi_hits)
    } else {
        (hi_hits, lo_hits)
    };
    let bound = &second[0];
    let start = first
        .iter()
        .rfind(|x| *x < bound)
        .expect("first level is hit before the second")
        .clone();
    let end = second
        .iter()
        .find(|x| **x > start)
        .expect("second level is hit after the first")
        .clone();
    Ok(Interval::new(start, end))
}

/// Given a closed chain `J_0, .., J_l = J_0` with `f(J_i) ⊇ J_{i+1}`, returns
/// an exact `x ∈ J_0` with `f^l(x) = x`.
///
/// Subintervals `K_i ⊆ J_i` with `f(K_i) = K_{i+1}` are built from the end
/// of the chain backwards, using a single linear piece whenever one suffices.
pub fn pullback_cycle(map: &PLMap, chain: &[Interval]) -> Result<PeriodicPoint, CoveringError> {
    if chain.len() < 2 {
        return Err(CoveringError::OpenChain);
    }
    let l = chain.len() - 1;
    if chain[0] != chain[l] {
        return Err(CoveringError::OpenChain);
    }
    let domain = map.domain();
    for (index, j) in chain.iter().enumerate() {
        if j.is_degenerate() {
            return Err(CoveringError::DegenerateChain { index });
        }
        if !domain.contains(j) {
            return Err(CoveringError::OutOfDomain(
                if domain.contains_point(&j.lo) {
                    j.hi.clone()
                } else {
                    j.lo.clone()
                },
            ));
        }
    }
    for index in 0..l {
        if !map.image(&chain[index])?.contains(&chain[index + 1]) {
            return Err(CoveringError::Containment { index });
        }
    }

    let mut target = chain[l].clone();
    for i in (0..l).rev() {
        target = pull_back(map, &chain[i], &target)?;
    }
    let x =
        leftmost_root_of_iterate(map, &target, l)?.ok_or_else(|| CoveringError::Unverified {
            x: target.lo.clone(),
        })?;

    let mut orbit = vec![x.clone()];
    for _ in 0..l {
        let next = map.eval(orbit.last().expect("non-empty"))?;
        orbit.push(next);
    }
    if orbit[l] != x {
        return Err(CoveringError::Unverified { x });
    }
    orbit.pop();
    Ok(PeriodicPoint {
        x,
        period: l,
        cycle: Vec::new(),
        orbit,
    })
}

fn pieces_at(sys: &PLCoveringSystem, cuts: &BTreeSet<Rational>) -> Vec<Interval> {
    let mut pieces = Vec::new();
    for iv in sys.intervals() {
        let mut pts = vec![iv.lo.clone()];
        pts.extend(
            cuts.range(&iv.lo..=&iv.hi)
                .filter(|c| **c != iv.lo && **c != iv.hi)
                .cloned(),
        );
        pts.push(iv.hi.clone());
        for w in pts.windows(2) {
            pieces.push(Interval::new(w[0].clone(), w[1].clone()));
        }
    }
    pieces
}

fn containment_graph(
    sys: &PLCoveringSystem,
    pieces: &[Interval],
) -> Result<MarkovGraph, CoveringError> {
    let mut adjacency = Vec::with_capacity(pieces.len());
    for p in pieces {
        let img = sys.map().image(p)?;
        adjacency.push(
            pieces
                .iter()
                .enumerate()
                .filter(|(_, q)| img.contains(q))
                .map(|(j, _)| j + 1)
                .collect(),
        );
    }
    Ok(MarkovGraph::from_adjacency(adjacency))
}

const REFINEMENT_ROUNDS: usize = 4;

/// Searches for a periodic point of period at most `k`.
///
/// The system intervals are cut at the interior breakpoints of the map; a
/// piece points to every piece its exact image contains. The shortest cycle
/// (then the leftmost start) is pulled back to an exact point. When no cycle
/// of length `<= k` exists, the pieces are refined by forward images of the
/// cut points for a few rounds. If the graph still has no short cycle, the
/// roots of `f^l(x) - x` on the union are scanned directly for `l = 1..=k`.
pub fn find_periodic(sys: &PLCoveringSystem, k: usize) -> Result<PeriodicPoint, CoveringError> {
    if k == 0 {
        return Err(CoveringError::InvalidDepth(0));
    }
    let mut cuts: BTreeSet<Rational> = sys.endpoints().into_iter().collect();
    for iv in sys.intervals() {
        cuts.extend(sys.map().interior_breakpoints(iv));
    }
    let mut last = (0, 0);
    for round in 0..=REFINEMENT_ROUNDS {
        if round > 0 {
            let images = cuts
                .iter()
                .map(|x| sys.map().eval(x))
                .collect::<Result<Vec<_>, _>>()?;
            let before = cuts.len();
            cuts.extend(images.into_iter().filter(|y| sys.in_union(y)));
            if cuts.len() == before {
                break;
            }
        }
        let pieces = pieces_at(sys, &cuts);
        let graph = containment_graph(sys, &pieces)?;
        last = (pieces.len(), graph.edges().count());
        let best = (1..=graph.vertex_count())
            .map(|v| graph.min_cycle_from(v))
            .filter_map(|c| match c.length {
                CycleLength::Steps(l) if l <= k => Some((l, c.witness)),
                _ => None,
            })
            .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1[0].cmp(&b.1[0])));
        if let Some((_, walk)) = best {
            let chain: Vec<Interval> = walk.iter().map(|&v| pieces[v - 1].clone()).collect();
            let mut point = pullback_cycle(sys.map(), &chain)?;
            point.cycle = walk[..walk.len() - 1].to_vec();
            return Ok(point);
        }
    }
    let base = pieces_at(sys, &cuts);
    for l in 1..=k {
        for iv in sys.intervals() {
            if let Some(x) = leftmost_root_of_iterate(sys.map(), iv, l)? {
                let orbit = (0..l)
                    .map(|j| sys.map().iterate(&x, j))
                    .collect::<Result<Vec<_>, _>>()?;
                let cycle = orbit
                    .iter()
                    .filter_map(|y| base.iter().position(|p| p.contains_point(y)))
                    .map(|j| j + 1)
                    .collect();
                return Ok(PeriodicPoint {
                    x,
                    period: l,
                    cycle,
                    orbit,
                });
            }
        }
    }
    Err(CoveringError::NotFound {
        k,
        pieces: last.0,
        edges: last.1,
    })
}

/// One linear piece of an iterate: `x0 -> y0`, `x1 -> y1`, possibly a point.
struct Branch {
    x0: Rational,
    x1: Rational,
    y0: Rational,
    y1: Rational,
}

impl Branch {
    fn at(&self, t: &Rational) -> (Rational, Rational) {
        (
            &self.x0 + &(t * &(&self.x1 - &self.x0)),
            &self.y0 + &(t * &(&self.y1 - &self.y0)),
        )
    }

    /// Parameter where the value equals `y`, for a non-constant branch.
    fn param_of(&self, y: &Rational) -> Rational {
        (y - &self.y0) / (&self.y1 - &self.y0)
    }
}

/// Leftmost `x` in `span` with `f^l(x) = x`, following only orbits that stay
/// in the map's domain.
fn leftmost_root_of_iterate(
    map: &PLMap,
    span: &Interval,
    l: usize,
) -> Result<Option<Rational>, CoveringError> {
    let domain = map.domain();
    let bends: Vec<Rational> = map.breakpoints().map(|(x, _)| x.clone()).collect();
    let mut branches = vec![Branch {
        x0: span.lo.clone(),
        x1: span.hi.clone(),
        y0: span.lo.clone(),
        y1: span.hi.clone(),
    }];
    for _ in 0..l {
        let mut next = Vec::new();
        for b in branches {
            // split at the points whose current value is a bend or a domain end
            let mut params = vec![Rational::zero(), Rational::one()];
            if b.y0 != b.y1 {
                let values = Interval::spanning(b.y0.clone(), b.y1.clone());
                for v in bends.iter().chain([&domain.lo, &domain.hi]) {
                    if &values.lo < v && v < &values.hi {
                        params.push(b.param_of(v));
                    }
                }
            }
            params.sort();
            params.dedup();
            let points: Vec<(Rational, Rational)> = params.iter().map(|t| b.at(t)).collect();
            for w in points.windows(2) {
                let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
                if !domain.contains_point(y0) || !domain.contains_point(y1) {
                    continue;
                }
                next.push(Branch {
                    x0: x0.clone(),
                    x1: x1.clone(),
                    y0: map.eval(y0)?,
                    y1: map.eval(y1)?,
                });
            }
        }
        branches = next;
    }
    let mut best: Option<Rational> = None;
    for b in &branches {
        let d0 = &b.y0 - &b.x0;
        let d1 = &b.y1 - &b.x1;
        let root = if d0.is_zero() {
            Some(b.x0.clone())
        } else if d1.is_zero() {
            Some(b.x1.clone())
        } else if d0.signum() != d1.signum() {
            let t = &d0 / &(&d0 - &d1);
            Some(b.at(&t).0)
        } else {
            None
        };
        if let Some(x) = root {
            if best.as_ref().is_none_or(|cur| &x < cur) {
                best = Some(x);
            }
        }
    }
    match best {
        Some(x) if map.iterate(&x, l)? == x => Ok(Some(x)),
        Some(x) => Err(CoveringError::Unverified { x }),
        None => Ok(None),
    }
}
