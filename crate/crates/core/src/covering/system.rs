use serde::{Deserialize, Serialize};

use super::pl::{Interval, PLMap};
use super::{CoveringError, Rational};
use crate::perm::CyclicPerm;

/// Disjoint ascending closed intervals together with a PL map whose image of
/// their union contains the union.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLCoveringSystem {
    intervals: Vec<Interval>,
    map: PLMap,
}

/// Merges closed intervals into disjoint components.
fn merge(mut parts: Vec<Interval>) -> Vec<Interval> {
    parts.sort();
    let mut out: Vec<Interval> = Vec::with_capacity(parts.len());
    for p in parts {
        match out.last_mut() {
            Some(last) if p.lo <= last.hi => {
                if p.hi > last.hi {
                    last.hi = p.hi;
                }
            }
            _ => out.push(p),
        }
    }
    out
}

impl PLCoveringSystem {
    /// Validates structure and the covering property.
    pub fn new(intervals: Vec<Interval>, map: PLMap) -> Result<Self, CoveringError> {
        let sys = Self::structured(intervals, map)?;
        if !sys.is_covering()? {
            return Err(CoveringError::NotCovering);
        }
        Ok(sys)
    }

    /// Validates structure only; the covering property may fail.
    pub fn structured(intervals: Vec<Interval>, map: PLMap) -> Result<Self, CoveringError> {
        if intervals.is_empty() {
            return Err(CoveringError::InvalidSystem("no intervals".into()));
        }
        if intervals.iter().any(|i| i.is_degenerate()) {
            return Err(CoveringError::InvalidSystem(
                "intervals must have positive length".into(),
            ));
        }
        if intervals.windows(2).any(|w| w[0].hi >= w[1].lo) {
            return Err(CoveringError::InvalidSystem(
                "intervals must be ascending and pairwise disjoint".into(),
            ));
        }
        let domain = map.domain();
        if !intervals.iter().all(|i| domain.contains(i)) {
            return Err(CoveringError::InvalidSystem(
                "map domain does not cover the intervals".into(),
            ));
        }
        Ok(PLCoveringSystem { intervals, map })
    }

    /// Single interval `[1, n]` under the PL extension of `f`.
    pub fn extension(f: &CyclicPerm) -> Result<Self, CoveringError> {
        let n = Rational::from(f.degree());
        Self::new(
            vec![Interval::new(Rational::one(), n)],
            PLMap::extension(f)?,
        )
    }

    /// Intervals `[i - r, i + r]` around each point of `{1..n}`; the map sends
    /// `i ∓ r` to `f(i) ∓ σ (r + overshoot)`, with `σ = ±1` following the
    /// local direction of `f`, and is linear across the gaps.
    ///
    /// With `overshoot = 0` endpoints land on endpoints; a positive overshoot
    /// pushes them into the gaps, outside the union.
    pub fn thickened(
        f: &CyclicPerm,
        radius: &Rational,
        overshoot: &Rational,
    ) -> Result<Self, CoveringError> {
        let n = f.degree();
        let half = Rational::new(1, 2);
        if radius.signum() <= 0 || radius >= &half {
            return Err(CoveringError::InvalidSystem(
                "radius must lie in (0, 1/2)".into(),
            ));
        }
        if overshoot.signum() < 0 || &(radius + radius) + overshoot >= Rational::one() {
            return Err(CoveringError::InvalidSystem(
                "overshoot must lie in [0, 1 - 2 radius)".into(),
            ));
        }
        let reach = radius + overshoot;
        let mut intervals = Vec::with_capacity(n);
        let mut points = Vec::with_capacity(2 * n);
        for i in 1..=n {
            let up = if n == 1 {
                true
            } else if i < n {
                f.apply(i + 1) > f.apply(i)
            } else {
                f.apply(n) > f.apply(n - 1)
            };
            let center = Rational::from(i);
            let value = Rational::from(f.apply(i));
            let (left, right) = if up {
                (&value - &reach, &value + &reach)
            } else {
                (&value + &reach, &value - &reach)
            };
            intervals.push(Interval::new(&center - radius, &center + radius));
            points.push((&center - radius, left));
            points.push((&center + radius, right));
        }
        Self::new(intervals, PLMap::new(points)?)
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn map(&self) -> &PLMap {
        &self.map
    }

    /// Index of the interval containing `x`, if any.
    pub fn interval_of(&self, x: &Rational) -> Option<usize> {
        let idx = self.intervals.partition_point(|i| &i.hi < x);
        (idx < self.intervals.len() && self.intervals[idx].contains_point(x)).then_some(idx)
    }

    pub fn in_union(&self, x: &Rational) -> bool {
        self.interval_of(x).is_some()
    }

    /// All `2k` interval endpoints.
    pub fn endpoints(&self) -> Vec<Rational> {
        self.intervals
            .iter()
            .flat_map(|i| [i.lo.clone(), i.hi.clone()])
            .collect()
    }

    /// True when the image of the union contains the union.
    pub fn is_covering(&self) -> Result<bool, CoveringError> {
        let images = self
            .intervals
            .iter()
            .map(|i| self.map.image(i))
            .collect::<Result<Vec<_>, _>>()?;
        let merged = merge(images);
        Ok(self
            .intervals
            .iter()
            .all(|i| merged.iter().any(|m| m.contains(i))))
    }

    pub fn to_doc(&self) -> SystemDoc {
        SystemDoc {
            intervals: self
                .intervals
                .iter()
                .map(|i| [i.lo.clone(), i.hi.clone()])
                .collect(),
            map: MapDoc {
                breakpoints: self
                    .map
                    .breakpoints()
                    .map(|(x, y)| [x.clone(), y.clone()])
                    .collect(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CoveringError> {
        let doc: SystemDoc =
            serde_json::from_str(text).map_err(|e| CoveringError::Json(e.to_string()))?;
        doc.into_system()
    }
}

/// `{"intervals": [["a","b"], ..], "map": {"breakpoints": [["x","y"], ..]}}`,
/// rationals written as `"p/q"` or integer strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemDoc {
    pub intervals: Vec<[Rational; 2]>,
    pub map: MapDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapDoc {
    pub breakpoints: Vec<[Rational; 2]>,
}

impl SystemDoc {
    pub fn into_system(self) -> Result<PLCoveringSystem, CoveringError> {
        let mut intervals = Vec::with_capacity(self.intervals.len());
        for [a, b] in self.intervals {
            if a > b {
                return Err(CoveringError::InvalidSystem(format!(
                    "interval [{a}, {b}] is reversed"
                )));
            }
            intervals.push(Interval::new(a, b));
        }
        let map = PLMap::new(
            self.map
                .breakpoints
                .into_iter()
                .map(|[x, y]| (x, y))
                .collect(),
        )?;
        PLCoveringSystem::new(intervals, map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extension_is_covering() {
        for n in 2..7 {
            let f = CyclicPerm::shift(n).unwrap();
            let sys = PLCoveringSystem::extension(&f).unwrap();
            assert!(sys.is_covering().unwrap());
        }
    }

    #[test]
    fn thickened_shapes() {
        let f = CyclicPerm::stefan(2).unwrap();
        let sys = PLCoveringSystem::thickened(&f, &Rational::new(1, 4), &Rational::zero()).unwrap();
        assert_eq!(sys.intervals().len(), 5);
        // endpoints land on endpoints of the target interval
        for (i, iv) in sys.intervals().iter().enumerate() {
            let img = sys.map().image(iv).unwrap();
            let target = &sys.intervals()[f.apply(i + 1) - 1];
            assert_eq!(&img, target);
        }
        assert!(PLCoveringSystem::thickened(&f, &Rational::new(1, 2), &Rational::zero()).is_err());
        assert!(
            PLCoveringSystem::thickened(&f, &Rational::new(1, 4), &Rational::new(1, 2)).is_err()
        );
    }

    #[test]
    fn structure_errors() {
        let map = PLMap::new(vec![
            (Rational::zero(), Rational::one()),
            (Rational::from_int(3), Rational::zero()),
        ])
        .unwrap();
        let iv = |a: i64, b: i64| Interval::new(Rational::from_int(a), Rational::from_int(b));
        assert!(PLCoveringSystem::new(vec![iv(0, 2), iv(1, 3)], map.clone()).is_err());
        assert!(PLCoveringSystem::new(vec![iv(0, 4)], map.clone()).is_err());
        assert!(PLCoveringSystem::new(vec![iv(1, 1)], map.clone()).is_err());
        // image of [2,3] is [0,1/3]: not covering
        assert!(matches!(
            PLCoveringSystem::new(vec![iv(2, 3)], map.clone()),
            Err(CoveringError::NotCovering)
        ));
        assert!(PLCoveringSystem::new(vec![iv(0, 1)], map).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = CyclicPerm::shift(3).unwrap();
        let sys =
            PLCoveringSystem::thickened(&f, &Rational::new(1, 4), &Rational::new(1, 8)).unwrap();
        let back = PLCoveringSystem::from_json(&sys.to_json()).unwrap();
        assert_eq!(back, sys);
        let text = r#"{"intervals": [["0","1"]], "map": {"breakpoints": [["0","1"], ["1/2","-1/2"], ["1","1"]]}}"#;
        let parsed = PLCoveringSystem::from_json(text).unwrap();
        assert_eq!(parsed.interval_of(&Rational::new(1, 3)), Some(0));
        assert!(PLCoveringSystem::from_json("{").is_err());
    }
}
