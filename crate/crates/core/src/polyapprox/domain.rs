//! Finite unions of disjoint closed intervals with a discretization grid.

use crate::error::{Error, Result};
use crate::polyapprox::chebyshev::lobatto_points;

/// Default number of grid points per interval.
pub const DEFAULT_GRID: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalUnion {
    intervals: Vec<(f64, f64)>,
    grid_per_interval: usize,
}

impl IntervalUnion {
    /// Intervals must be sorted, nonempty (`l ≤ u`; points allowed) and
    /// strictly separated.
    pub fn new(intervals: Vec<(f64, f64)>, grid_per_interval: usize) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::Structural("interval union is empty".into()));
        }
        if grid_per_interval < 2 {
            return Err(Error::Structural(format!(
                "grid needs at least 2 points per interval, got {grid_per_interval}"
            )));
        }
        for (i, &(l, u)) in intervals.iter().enumerate() {
            if !(l <= u) || !l.is_finite() || !u.is_finite() {
                return Err(Error::Domain(format!("interval {i} is [{l}, {u}]")));
            }
            if i > 0 && !(intervals[i - 1].1 < l) {
                return Err(Error::Domain(format!(
                    "intervals {} and {i} overlap or are out of order",
                    i - 1
                )));
            }
        }
        Ok(Self {
            intervals,
            grid_per_interval,
        })
    }

    pub fn single(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![(a, b)], DEFAULT_GRID)
    }

    /// `∪ [λ − η, λ + η]` over the given centres (sorted internally).
    pub fn around_points(points: &[f64], eta: f64, grid_per_interval: usize) -> Result<Self> {
        if !(eta >= 0.0) {
            return Err(Error::Domain(format!("half-width {eta} is negative")));
        }
        let mut pts = points.to_vec();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        Self::new(pts.iter().map(|p| (p - eta, p + eta)).collect(), grid_per_interval)
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn grid_per_interval(&self) -> usize {
        self.grid_per_interval
    }

    pub fn with_grid(&self, grid_per_interval: usize) -> Result<Self> {
        Self::new(self.intervals.clone(), grid_per_interval)
    }

    pub fn hull(&self) -> (f64, f64) {
        (self.intervals[0].0, self.intervals.last().expect("nonempty").1)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(l, u)| l <= x && x <= u)
    }

    /// Whether every interval of `self` lies inside some interval of `other`.
    pub fn is_subset_of(&self, other: &IntervalUnion) -> bool {
        self.intervals
            .iter()
            .all(|&(l, u)| other.intervals.iter().any(|&(a, b)| a <= l && u <= b))
    }

    /// Chebyshev–Lobatto points on each interval; a point interval contributes
    /// one point.
    pub fn grid(&self) -> Vec<f64> {
        self.intervals
            .iter()
            .flat_map(|&(l, u)| lobatto_points(l, u, self.grid_per_interval))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(IntervalUnion::new(vec![(0.0, 1.0), (1.0, 2.0)], 4).is_err());
        assert!(IntervalUnion::new(vec![(2.0, 3.0), (0.0, 1.0)], 4).is_err());
        assert!(IntervalUnion::new(vec![(1.0, 0.0)], 4).is_err());
        assert!(IntervalUnion::new(vec![(0.0, 1.0)], 1).is_err());
        assert!(IntervalUnion::new(vec![(0.5, 0.5), (1.0, 2.0)], 4).is_ok());
    }

    #[test]
    fn grid_layout() {
        let u = IntervalUnion::new(vec![(0.5, 0.5), (1.0, 2.0)], 4).unwrap();
        let g = u.grid();
        assert_eq!(g.len(), 5);
        assert_eq!(g[0], 0.5);
        assert_eq!(g[1], 1.0);
        assert_eq!(g[4], 2.0);
        assert_eq!(u.hull(), (0.5, 2.0));
        assert!(u.contains(1.5) && !u.contains(0.75));
    }

    #[test]
    fn subset() {
        let big = IntervalUnion::around_points(&[1.0, 2.0], 0.1, 8).unwrap();
        let small = IntervalUnion::around_points(&[2.0, 1.0], 0.01, 8).unwrap();
        assert!(small.is_subset_of(&big));
        assert!(!big.is_subset_of(&small));
    }
}
