//! Discrete minimax polynomial approximation by linear programming.
//!
//! The polynomial is expressed in the Chebyshev basis of the domain's hull and
//! the coefficients minimize `t` subject to `|p(x) − f(x)| ≤ t` at every grid
//! point. The program itself is posed in a basis orthonormal on the grid and
//! mapped back by a triangular solve. After a first solve, local extrema of the error are located between
//! grid points, added to the grid, and the program is solved again.

use std::time::Duration;

use microlp::{ComparisonOp, OptimizationDirection, Problem};

use crate::arith::{dot, norm2};
use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::par::Execution;
use crate::polyapprox::chebyshev::{cheb_t_all, ChebyshevExpansion};
use crate::polyapprox::domain::IntervalUnion;

/// Largest degree the solver accepts.
pub const MAX_MINIMAX_DEGREE: usize = 200;

/// Wall-clock limit for one linear program.
pub const LP_TIME_LIMIT: Duration = Duration::from_secs(300);

/// Largest grid density [`minimax_adaptive`] will try.
pub const MAX_ADAPTIVE_GRID: usize = 1024;

const GOLDEN_ITERATIONS: usize = 40;

#[derive(Debug, Clone)]
pub struct MinimaxResult {
    pub expansion: ChebyshevExpansion,
    /// Largest `|p − f|` over the refined grid, with `p` evaluated in the
    /// grid-orthonormal basis; `∞` if the constraint made the program
    /// infeasible. Clenshaw evaluation of `expansion` adds rounding of order
    /// `ε·Σ|c_i|`.
    pub delta: f64,
    /// The refined grid the reported `delta` is measured on.
    pub grid: Vec<f64>,
}

impl MinimaxResult {
    pub fn is_feasible(&self) -> bool {
        self.delta.is_finite()
    }
}

/// Best degree-`degree` approximation of `f` on `domain`, optionally
/// constrained to `p(0) = value`.
pub fn minimax(
    f: &ScalarFunction,
    domain: &IntervalUnion,
    degree: usize,
    constraint_at_zero: Option<f64>,
) -> Result<MinimaxResult> {
    if degree > MAX_MINIMAX_DEGREE {
        return Err(Error::Capacity {
            what: "minimax degree",
            requested: degree,
            limit: MAX_MINIMAX_DEGREE,
        });
    }
    if constraint_at_zero.is_some() && domain.contains(0.0) {
        return Err(Error::Domain("p(0) constraint requires 0 outside the domain".into()));
    }
    let basis = basis_interval(domain);
    let base = domain.grid();
    let fvals = sample(f, &base)?;
    let Some((coeffs, values)) = solve_lp(basis, &base, &fvals, degree, constraint_at_zero)? else {
        return Ok(infeasible(basis, degree, base));
    };
    let first = ChebyshevExpansion::new(basis, coeffs)?;
    let extra = refine_points(&first, f, domain, &base)?;
    let (expansion, grid, values, fvals) = if extra.is_empty() {
        (first, base, values, fvals)
    } else {
        let mut grid = base;
        grid.extend(extra);
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let fvals = sample(f, &grid)?;
        match solve_lp(basis, &grid, &fvals, degree, constraint_at_zero)? {
            Some((c, values)) => (ChebyshevExpansion::new(basis, c)?, grid, values, fvals),
            None => return Ok(infeasible(basis, degree, grid)),
        }
    };
    let delta = values
        .iter()
        .zip(&fvals)
        .map(|(p, fx)| (p - fx).abs())
        .fold(0.0, f64::max);
    Ok(MinimaxResult { expansion, delta, grid })
}

/// [`minimax`] with the grid density doubled until `delta` changes by less
/// than 1% (or [`MAX_ADAPTIVE_GRID`] is reached).
pub fn minimax_adaptive(
    f: &ScalarFunction,
    domain: &IntervalUnion,
    degree: usize,
    constraint_at_zero: Option<f64>,
) -> Result<MinimaxResult> {
    let mut m = domain.grid_per_interval();
    let mut last = minimax(f, domain, degree, constraint_at_zero)?;
    while 2 * m <= MAX_ADAPTIVE_GRID {
        m *= 2;
        let next = minimax(f, &domain.with_grid(m)?, degree, constraint_at_zero)?;
        let settled = (next.delta - last.delta).abs() <= 0.01 * last.delta.max(f64::MIN_POSITIVE);
        last = next;
        if settled {
            break;
        }
    }
    Ok(last)
}

/// Smallest degree `≤ k_max` whose minimax error is at most `target`.
///
/// Degrees are scanned in ascending chunks (one candidate per worker), and
/// the scan stops at the first chunk containing a success.
pub fn min_degree_for(
    f: &ScalarFunction,
    domain: &IntervalUnion,
    target: f64,
    k_max: usize,
    constraint_at_zero: Option<f64>,
    exec: Execution,
) -> Result<Option<usize>> {
    Ok(degree_scan(f, domain, target, k_max, constraint_at_zero, exec)?.min_degree)
}

/// Outcome of a degree scan: the minimal degree and every delta computed.
#[derive(Debug, Clone)]
pub struct DegreeScan {
    pub min_degree: Option<usize>,
    /// `(degree, delta)` for all evaluated degrees, ascending.
    pub curve: Vec<(usize, f64)>,
}

pub fn degree_scan(
    f: &ScalarFunction,
    domain: &IntervalUnion,
    target: f64,
    k_max: usize,
    constraint_at_zero: Option<f64>,
    exec: Execution,
) -> Result<DegreeScan> {
    if !(target > 0.0) {
        return Err(Error::Domain(format!("target {target} must be positive")));
    }
    if k_max < 1 {
        return Err(Error::Structural("k_max must be at least 1".into()));
    }
    let width = exec.width();
    let mut curve: Vec<(usize, f64)> = Vec::new();
    let mut start = 0usize;
    while start <= k_max {
        let end = (start + width).min(k_max + 1);
        let degrees: Vec<usize> = (start..end).collect();
        let deltas = exec.map_slice(&degrees, |&d| {
            minimax(f, domain, d, constraint_at_zero).map(|r| r.delta)
        });
        for (d, delta) in degrees.into_iter().zip(deltas) {
            let delta = delta?;
            if let Some(&(_, prev)) = curve.last() {
                if delta > prev * (1.0 + 1e-3) + 1e-9 {
                    return Err(Error::Internal(format!(
                        "minimax error increased from {prev:e} to {delta:e} at degree {d}"
                    )));
                }
            }
            curve.push((d, delta));
            if delta <= target {
                return Ok(DegreeScan {
                    min_degree: Some(d),
                    curve,
                });
            }
        }
        start = end;
    }
    Ok(DegreeScan {
        min_degree: None,
        curve,
    })
}

fn basis_interval(domain: &IntervalUnion) -> (f64, f64) {
    let (lo, hi) = domain.hull();
    if hi - lo > 1e-12 * lo.abs().max(hi.abs()).max(1.0) {
        (lo, hi)
    } else {
        let half = lo.abs().max(1.0);
        (lo - half, hi + half)
    }
}

fn sample(f: &ScalarFunction, grid: &[f64]) -> Result<Vec<f64>> {
    grid.iter().map(|&x| f.eval_checked(x)).collect()
}

fn infeasible(basis: (f64, f64), degree: usize, grid: Vec<f64>) -> MinimaxResult {
    MinimaxResult {
        expansion: ChebyshevExpansion::new(basis, vec![0.0; degree + 1]).expect("valid basis"),
        delta: f64::INFINITY,
        grid,
    }
}

/// Relative column norm below which a basis column counts as dependent on
/// the grid.
const RANK_TOL: f64 = 1e-11;

/// Grid-orthonormal version of the Chebyshev columns: `V = Q·R` restricted to
/// the first `rank` columns.
struct GridBasis {
    q: Vec<Vec<f64>>,
    r: Vec<Vec<f64>>,
}

impl GridBasis {
    fn new(rows: &[Vec<f64>], degree: usize) -> Self {
        let mut q: Vec<Vec<f64>> = Vec::new();
        let mut r: Vec<Vec<f64>> = Vec::new();
        for j in 0..=degree {
            let mut col: Vec<f64> = rows.iter().map(|row| row[j]).collect();
            let original = norm2(&col);
            let mut rj = vec![0.0; j + 1];
            for _ in 0..2 {
                for (i, qi) in q.iter().enumerate() {
                    let h = dot(qi, &col);
                    rj[i] += h;
                    col.iter_mut().zip(qi).for_each(|(c, v)| *c -= h * v);
                }
            }
            let nrm = norm2(&col);
            if !(nrm > RANK_TOL * original) {
                break;
            }
            col.iter_mut().for_each(|c| *c /= nrm);
            rj[q.len()] = nrm;
            rj.truncate(q.len() + 1);
            q.push(col);
            r.push(rj);
        }
        Self { q, r }
    }

    fn rank(&self) -> usize {
        self.q.len()
    }

    /// Chebyshev coefficients `c` with `R·c = g`, padded to `degree + 1`.
    fn to_chebyshev(&self, g: &[f64], degree: usize) -> Vec<f64> {
        let n = self.rank();
        let mut c = vec![0.0; degree + 1];
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.r[j][i] * c[j]).sum();
            c[i] = (g[i] - s) / self.r[i][i];
        }
        c
    }

    /// `w` with `wᵀg = vᵀc` whenever `R·c = g`.
    fn transform_row(&self, v: &[f64]) -> Vec<f64> {
        let n = self.rank();
        let mut w = vec![0.0; n];
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.r[i][j] * w[j]).sum();
            w[i] = (v[i] - s) / self.r[i][i];
        }
        w
    }
}

fn solve_lp(
    basis: (f64, f64),
    grid: &[f64],
    fvals: &[f64],
    degree: usize,
    constraint_at_zero: Option<f64>,
) -> Result<Option<(Vec<f64>, Vec<f64>)>> {
    let (a, b) = basis;
    let map = |x: f64| (2.0 * x - a - b) / (b - a);
    let rows: Vec<Vec<f64>> = grid.iter().map(|&x| cheb_t_all(degree, map(x))).collect();
    let gb = GridBasis::new(&rows, degree);
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let coeffs: Vec<_> = (0..gb.rank())
        .map(|_| lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY)))
        .collect();
    let t = lp.add_var(1.0, (0.0, f64::INFINITY));
    for (p, &fx) in fvals.iter().enumerate() {
        let terms = || coeffs.iter().copied().zip(gb.q.iter().map(|col| col[p]));
        lp.add_constraint(terms().chain([(t, -1.0)]).collect::<Vec<_>>(), ComparisonOp::Le, fx);
        lp.add_constraint(terms().chain([(t, 1.0)]).collect::<Vec<_>>(), ComparisonOp::Ge, fx);
    }
    if let Some(v) = constraint_at_zero {
        let row = gb.transform_row(&cheb_t_all(degree, map(0.0)));
        lp.add_constraint(coeffs.iter().copied().zip(row).collect::<Vec<_>>(), ComparisonOp::Eq, v);
    }
    lp.set_time_limit(LP_TIME_LIMIT);
    match lp.solve() {
        Ok(outcome) => match outcome.solution() {
            Some(sol) => {
                let g: Vec<f64> = coeffs.iter().map(|&c| sol.var_value(c)).collect();
                let values = (0..grid.len())
                    .map(|p| gb.q.iter().zip(&g).map(|(col, gi)| col[p] * gi).sum())
                    .collect();
                Ok(Some((gb.to_chebyshev(&g, degree), values)))
            }
            None => Err(Error::Internal("linear program stopped without a solution".into())),
        },
        Err(microlp::Error::Infeasible) => Ok(None),
        Err(e) => Err(Error::Internal(format!("linear program failed: {e}"))),
    }
}

/// Local maximizers of `|p − f|` strictly between grid points.
fn refine_points(p: &ChebyshevExpansion, f: &ScalarFunction, domain: &IntervalUnion, grid: &[f64]) -> Result<Vec<f64>> {
    let err = |x: f64| (p.eval(x) - f.eval(x)).abs();
    let mut out = Vec::new();
    for &(l, u) in domain.intervals() {
        if l == u {
            continue;
        }
        let pts: Vec<f64> = grid.iter().copied().filter(|&x| l <= x && x <= u).collect();
        let errs: Vec<f64> = pts.iter().map(|&x| err(x)).collect();
        for j in 0..pts.len() {
            let left = if j > 0 { errs[j - 1] } else { f64::NEG_INFINITY };
            let right = if j + 1 < pts.len() {
                errs[j + 1]
            } else {
                f64::NEG_INFINITY
            };
            if errs[j] < left || errs[j] < right {
                continue;
            }
            let lo = pts[j.saturating_sub(1)];
            let hi = pts[(j + 1).min(pts.len() - 1)];
            let x = golden_max(&err, lo, hi);
            if err(x) > errs[j] && !pts.contains(&x) {
                f.eval_checked(x)?;
                out.push(x);
            }
        }
    }
    Ok(out)
}

fn golden_max(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..GOLDEN_ITERATIONS {
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - r * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + r * (b - a);
            gd = g(d);
        }
    }
    if gc > gd {
        c
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn best_constant_for_inverse() {
        let dom = IntervalUnion::single(0.5, 1.0).unwrap();
        let r = minimax(&ScalarFunction::inverse(), &dom, 0, None).unwrap();
        assert!((r.expansion.coeffs()[0] - 1.5).abs() < 1e-9);
        assert!((r.delta - 0.5).abs() < 1e-9);
    }

    #[test]
    fn polynomial_is_exact() {
        let cubic = ScalarFunction::from_fn("cubic", |x| 2.0 * x * x * x - x + 0.3);
        let dom = IntervalUnion::single(-1.0, 2.0).unwrap();
        assert!(minimax(&cubic, &dom, 3, None).unwrap().delta <= 1e-10);
    }

    #[test]
    fn line_through_two_tiny_intervals() {
        let eta = 1e-9;
        let dom = IntervalUnion::around_points(&[1.0, 2.0], eta, 8).unwrap();
        let r = minimax(&ScalarFunction::inverse(), &dom, 1, None).unwrap();
        assert!(r.delta <= 1e-6);
        let line = |x: f64| 1.5 - 0.5 * x;
        for x in dom.grid() {
            assert!((r.expansion.eval(x) - line(x)).abs() <= 1e-6);
        }
    }

    #[test]
    fn constraint_and_capacity() {
        let dom = IntervalUnion::single(0.5, 1.0).unwrap();
        let r = minimax(&ScalarFunction::inverse(), &dom, 3, Some(2.0)).unwrap();
        assert!((r.expansion.eval(0.0) - 2.0).abs() < 1e-8);
        assert!(r.is_feasible());
        let err = minimax(&ScalarFunction::inverse(), &dom, 201, None).unwrap_err();
        assert_eq!(err.kind(), "capacity");
        let across = IntervalUnion::single(-1.0, 1.0).unwrap();
        assert!(minimax(&ScalarFunction::identity(), &across, 1, Some(0.0)).is_err());
    }

    #[test]
    fn constant_needs_degree_zero() {
        let dom = IntervalUnion::single(0.0, 1.0).unwrap();
        let d = min_degree_for(
            &ScalarFunction::constant(3.0),
            &dom,
            0.1,
            5,
            None,
            Execution::Sequential,
        )
        .unwrap();
        assert_eq!(d, Some(0));
    }

    #[test]
    fn scan_not_found() {
        let dom = IntervalUnion::single(0.01, 1.0).unwrap();
        let d = min_degree_for(&ScalarFunction::inverse(), &dom, 1e-6, 3, None, Execution::Parallel).unwrap();
        assert_eq!(d, None);
    }
}
