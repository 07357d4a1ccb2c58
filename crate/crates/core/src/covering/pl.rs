use super::{CoveringError, Rational};
use crate::perm::CyclicPerm;

/// Closed rational interval `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "reversed interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// Hull of two values in either order.
    pub fn spanning(a: Rational, b: Rational) -> Self {
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_point(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Continuous piecewise-linear map given by breakpoints with strictly
/// increasing abscissae, linear in between, defined on `[x_first, x_last]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLMap {
    xs: Vec<Rational>,
    ys: Vec<Rational>,
}

/// One linear piece of a map restricted to an interval: `x0 -> y0`, `x1 -> y1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub x0: Rational,
    pub x1: Rational,
    pub y0: Rational,
    pub y1: Rational,
}

impl Segment {
    pub fn image(&self) -> Interval {
        Interval::spanning(self.y0.clone(), self.y1.clone())
    }

    pub fn is_constant(&self) -> bool {
        self.y0 == self.y1
    }

    /// The `x` in the segment where the value is `y`; requires a non-constant
    /// segment whose image contains `y`.
    pub fn preimage(&self, y: &Rational) -> Rational {
        debug_assert!(!self.is_constant());
        &self.x0 + &((y - &self.y0) * (&self.x1 - &self.x0) / (&self.y1 - &self.y0))
    }
}

impl PLMap {
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self, CoveringError> {
        if points.len() < 2 {
            return Err(CoveringError::InvalidMap(
                "at least two breakpoints are required".into(),
            ));
        }
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(CoveringError::InvalidMap(
                "breakpoint abscissae must be strictly increasing".into(),
            ));
        }
        let (xs, ys) = points.into_iter().unzip();
        Ok(PLMap { xs, ys })
    }

    /// The extension of a permutation: linear between `(i, f(i))` and
    /// `(i + 1, f(i + 1))`, on `[1, n]`.
    pub fn extension(f: &CyclicPerm) -> Result<Self, CoveringError> {
        PLMap::new(
            (1..=f.degree())
                .map(|i| (Rational::from(i), Rational::from(f.apply(i))))
                .collect(),
        )
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.xs.iter().zip(&self.ys)
    }

    pub fn domain(&self) -> Interval {
        Interval::new(self.xs[0].clone(), self.xs[self.xs.len() - 1].clone())
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational, CoveringError> {
        if !self.domain().contains_point(x) {
            return Err(CoveringError::OutOfDomain(x.clone()));
        }
        // first index with xs[idx] >= x
        let idx = self.xs.partition_point(|b| b < x);
        if self.xs[idx] == *x {
            return Ok(self.ys[idx].clone());
        }
        let (x0, x1) = (&self.xs[idx - 1], &self.xs[idx]);
        let (y0, y1) = (&self.ys[idx - 1], &self.ys[idx]);
        Ok(y0 + &((x - x0) * (y1 - y0) / (x1 - x0)))
    }

    /// `n`-th iterate at `x`.
    pub fn iterate(&self, x: &Rational, times: usize) -> Result<Rational, CoveringError> {
        let mut y = x.clone();
        for _ in 0..times {
            y = self.eval(&y)?;
        }
        Ok(y)
    }

    /// Breakpoint abscissae strictly inside `(lo, hi)`.
    pub fn interior_breakpoints(&self, span: &Interval) -> Vec<Rational> {
        self.xs
            .iter()
            .filter(|x| &span.lo < *x && *x < &span.hi)
            .cloned()
            .collect()
    }

    /// The linear pieces of the restriction to `span`, left to right.
    pub fn segments(&self, span: &Interval) -> Result<Vec<Segment>, CoveringError> {
        let mut cuts = vec![span.lo.clone()];
        cuts.extend(self.interior_breakpoints(span));
        cuts.push(span.hi.clone());
        let values = cuts
            .iter()
            .map(|x| self.eval(x))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(cuts
            .windows(2)
            .zip(values.windows(2))
            .filter(|(x, _)| x[0] < x[1])
            .map(|(x, y)| Segment {
                x0: x[0].clone(),
                x1: x[1].clone(),
                y0: y[0].clone(),
                y1: y[1].clone(),
            })
            .collect())
    }

    /// Exact image of `span`, the hull of the values at its ends and at the
    /// breakpoints inside it.
    pub fn image(&self, span: &Interval) -> Result<Interval, CoveringError> {
        let mut lo = self.eval(&span.lo)?;
        let mut hi = lo.clone();
        for x in self
            .interior_breakpoints(span)
            .iter()
            .chain(std::iter::once(&span.hi))
        {
            let y = self.eval(x)?;
            if y < lo {
                lo = y;
            } else if y > hi {
                hi = y;
            }
        }
        Ok(Interval { lo, hi })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn map(points: &[(i64, i64)]) -> PLMap {
        PLMap::new(
            points
                .iter()
                .map(|&(x, y)| (Rational::from_int(x), Rational::from_int(y)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn eval_examples() {
        let m = map(&[(1, 2), (2, 3), (3, 1)]);
        assert_eq!(m.eval(&r(5, 2)).unwrap(), Rational::from_int(2));
        assert_eq!(
            m.eval(&Rational::from_int(2)).unwrap(),
            Rational::from_int(3)
        );
        assert_eq!(m.eval(&r(7, 3)).unwrap(), r(7, 3));
        assert!(matches!(
            m.eval(&r(7, 2)),
            Err(CoveringError::OutOfDomain(_))
        ));
        assert_eq!(m, PLMap::extension(&CyclicPerm::shift(3).unwrap()).unwrap());
    }

    #[test]
    fn rejects_bad_breakpoints() {
        assert!(PLMap::new(vec![(Rational::zero(), Rational::zero())]).is_err());
        assert!(PLMap::new(vec![
            (Rational::one(), Rational::zero()),
            (Rational::one(), Rational::one())
        ])
        .is_err());
    }

    #[test]
    fn image_sees_interior_breakpoints() {
        let m = map(&[(0, 0), (1, 5), (2, -1), (3, 0)]);
        let img = m.image(&Interval::new(r(1, 2), r(5, 2))).unwrap();
        assert_eq!(
            img,
            Interval::new(Rational::from_int(-1), Rational::from_int(5))
        );
        let segs = m.segments(&Interval::new(r(1, 2), r(5, 2))).unwrap();
        assert_eq!(segs.len(), 3);
        assert_eq!(segs[0].y0, r(5, 2));
        assert_eq!(
            segs[1].preimage(&Rational::from_int(2)),
            Rational::new(3, 2)
        );
    }
}
