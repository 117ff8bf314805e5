//! Sold-alone demand curves and the order comparisons built on them:
//! pointwise surplus dominance, elasticity comparison in ratio form, and
//! single-crossing tests.
//!
//! Elasticity is never computed as a number. On a grid the comparison
//! "x is weakly less elastic than x'" is exactly "v(x,t)/v(x',t) is
//! nondecreasing in t", checked through cross products so no division
//! occurs.

use crate::model::{ScreeningProblem, MASS_TOL};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DemandError {
    #[error("allocation index {0} out of range")]
    BadAllocation(usize),
    #[error("lottery has {len} entries, problem has {expected} allocations")]
    LotteryLength { len: usize, expected: usize },
    #[error("lottery mass sums to {0}, expected 1")]
    LotteryMass(f64),
    #[error("elasticity undefined: allocation {allocation} has nonpositive value at type {type_index}")]
    ElasticityUndefined { allocation: usize, type_index: usize },
    #[error("curves live on different quantile grids")]
    GridMismatch,
    #[error("precondition failed: {0}")]
    Precondition(String),
}

/// Step demand curve over quantiles: point k carries the mass of types at or
/// above t_k and the value of the allocation at t_k. Quantiles strictly
/// decrease in k.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemandCurve {
    pub points: Vec<(f64, f64)>,
}

impl DemandCurve {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn quantile(&self, k: usize) -> f64 {
        self.points[k].0
    }

    pub fn value(&self, k: usize) -> f64 {
        self.points[k].1
    }

    fn same_grid(&self, other: &DemandCurve) -> bool {
        self.len() == other.len()
            && self
                .points
                .iter()
                .zip(&other.points)
                .all(|(a, b)| (a.0 - b.0).abs() <= MASS_TOL)
    }
}

/// What gets sold alone: a single allocation or a lottery over all of them.
#[derive(Debug, Clone)]
pub enum Offer<'a> {
    Allocation(usize),
    Lottery(&'a [f64]),
}

fn offer_values(problem: &ScreeningProblem, offer: &Offer) -> Result<Vec<f64>, DemandError> {
    let n = problem.grid.len();
    match offer {
        Offer::Allocation(x) => {
            if *x >= problem.allocations.len() {
                return Err(DemandError::BadAllocation(*x));
            }
            Ok(problem.allocations.values[*x].clone())
        }
        Offer::Lottery(weights) => {
            if weights.len() != problem.allocations.len() {
                return Err(DemandError::LotteryLength {
                    len: weights.len(),
                    expected: problem.allocations.len(),
                });
            }
            let mass: f64 = weights.iter().sum();
            if (mass - 1.0).abs() > 1e-9 {
                return Err(DemandError::LotteryMass(mass));
            }
            Ok((0..n)
                .map(|k| {
                    weights
                        .iter()
                        .enumerate()
                        .map(|(x, w)| w * problem.allocations.value(x, k))
                        .sum()
                })
                .collect())
        }
    }
}

/// Demand curve of an allocation (or pointwise mixture for a lottery).
pub fn demand_curve(problem: &ScreeningProblem, offer: &Offer) -> Result<DemandCurve, DemandError> {
    let values = offer_values(problem, offer)?;
    Ok(DemandCurve {
        points: (0..problem.grid.len())
            .map(|k| (problem.grid.upper_mass(k), values[k]))
            .collect(),
    })
}

/// Pointwise dominance of values: x weakly (or strictly, at every grid
/// point) below x'.
pub fn surplus_leq(problem: &ScreeningProblem, x: usize, x_hi: usize, strict: bool) -> bool {
    let a = &problem.allocations.values[x];
    let b = &problem.allocations.values[x_hi];
    if strict {
        a.iter().zip(b).all(|(va, vb)| va < vb)
    } else {
        a.iter().zip(b).all(|(va, vb)| va <= vb)
    }
}

fn require_positive(problem: &ScreeningProblem, x: usize) -> Result<(), DemandError> {
    for (k, &v) in problem.allocations.values[x].iter().enumerate() {
        if v <= 0.0 {
            return Err(DemandError::ElasticityUndefined { allocation: x, type_index: k });
        }
    }
    Ok(())
}

/// Elasticity order in ratio form: x is weakly less elastic than x' iff
/// v(x,t)/v(x',t) is nondecreasing in t; strict needs strict increase at
/// every step. Cross-product comparisons keep this exact and division-free.
pub fn elasticity_leq(
    problem: &ScreeningProblem,
    x: usize,
    x_hi: usize,
    strict: bool,
) -> Result<bool, DemandError> {
    require_positive(problem, x)?;
    require_positive(problem, x_hi)?;
    let a = &problem.allocations.values[x];
    let b = &problem.allocations.values[x_hi];
    for k in 1..a.len() {
        // ratio a/b nondecreasing at step k: a[k-1] * b[k] <= a[k] * b[k-1]
        let lhs = a[k - 1] * b[k];
        let rhs = a[k] * b[k - 1];
        if strict {
            if lhs >= rhs {
                return Ok(false);
            }
        } else if lhs > rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest type index k at which `a` weakly single-crosses `b` from below:
/// a <= b at every index up to k and a >= b from k on. `None` if no index
/// qualifies.
pub fn single_crosses_from_below(
    a: &DemandCurve,
    b: &DemandCurve,
) -> Result<Option<usize>, DemandError> {
    if !a.same_grid(b) {
        return Err(DemandError::GridMismatch);
    }
    let n = a.len();
    (0..n)
        .find(|&k| crosses_at(a, b, k))
        .map_or(Ok(None), |k| Ok(Some(k)))
}

/// Whether `a` weakly single-crosses `b` from below at the given index,
/// within `tol` (values within `tol` count as tied).
pub fn crosses_at_with_tol(a: &DemandCurve, b: &DemandCurve, k: usize, tol: f64) -> bool {
    let below = (0..=k).all(|j| a.value(j) <= b.value(j) + tol);
    let above = (k..a.len()).all(|j| a.value(j) >= b.value(j) - tol);
    below && above
}

fn crosses_at(a: &DemandCurve, b: &DemandCurve, k: usize) -> bool {
    crosses_at_with_tol(a, b, k, 0.0)
}

/// Pointwise difference of two sold-alone demand curves. Requires the low
/// offer to sit strictly below the high one.
pub fn incremental_curve(
    problem: &ScreeningProblem,
    x_low: usize,
    x_high: usize,
) -> Result<DemandCurve, DemandError> {
    if !surplus_leq(problem, x_low, x_high, true) {
        return Err(DemandError::Precondition(format!(
            "allocation {x_low} is not strictly below {x_high} in surplus"
        )));
    }
    let low = demand_curve(problem, &Offer::Allocation(x_low))?;
    let high = demand_curve(problem, &Offer::Allocation(x_high))?;
    Ok(DemandCurve {
        points: low
            .points
            .iter()
            .zip(&high.points)
            .map(|(&(q, vl), &(_, vh))| (q, vh - vl))
            .collect(),
    })
}
