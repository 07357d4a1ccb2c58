//! Rational piecewise-linear covering systems and their discretization.
//!
//! Everything in this module is exact: values are [`Rational`]s and no
//! operation rounds.

mod discrete;
mod periodic;
mod pl;
mod rational;
mod saturate;
mod system;

use thiserror::Error;

use crate::perm::PermError;

pub use discrete::{
    reduce_to_cyclic, to_discrete_cover, to_discrete_cover_with_cuts, DiscreteCover, Discretized,
    Reduction,
};
pub use periodic::{find_periodic, pullback_cycle, PeriodicPoint};
pub use pl::{Interval, PLMap, Segment};
pub use rational::{ParseRationalError, Rational};
pub use saturate::{saturate, saturation_closure, snap, PointSet, Saturation, Snapped};
pub use system::{MapDoc, PLCoveringSystem, SystemDoc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoveringError {
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("{0} is outside the map's domain")]
    OutOfDomain(Rational),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("the image of the interval union does not contain the union")]
    NotCovering,
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("depth {0} is not allowed here")]
    InvalidDepth(usize),
    #[error("saturation does not close; snap the system first")]
    NotSaturated,
    #[error("the chain is not closed: last interval differs from the first")]
    OpenChain,
    #[error("chain interval {index} is degenerate")]
    DegenerateChain { index: usize },
    #[error("the image of chain interval {index} does not contain the next one")]
    Containment { index: usize },
    #[error("malformed cover: {0}")]
    MalformedCover(String),
    #[error("no cycle of length <= {k} among {pieces} pieces ({edges} containment edges)")]
    NotFound {
        k: usize,
        pieces: usize,
        edges: usize,
    },
    #[error("periodic point {x} failed exact re-evaluation")]
    Unverified { x: Rational },
    #[error(transparent)]
    Perm(#[from] PermError),
}
