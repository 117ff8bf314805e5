//! Dense linear-program solver: two-phase primal simplex with Bland's
//! anti-cycling rule, instantiated at `f64` (float mode) or `BigRational`
//! (exact mode). The same pivoting code runs in both modes; only the
//! tolerance differs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::ops::{Div, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LpError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("non-finite coefficient in {0}")]
    NonFinite(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

/// Scalar field the simplex runs over.
pub trait LpNum:
    Clone
    + PartialOrd
    + std::fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    /// Pivot/feasibility tolerance; comparisons treat |x| <= tol as zero.
    fn tol() -> Self;
    /// Window within which two objective values count as tied.
    fn tie_tol() -> Self;
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs_val(&self) -> Self;
    fn is_finite_num(&self) -> bool;
}

impl LpNum for f64 {
    fn tol() -> f64 {
        1e-9
    }
    fn tie_tol() -> f64 {
        1e-9
    }
    fn from_f64(v: f64) -> f64 {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs_val(&self) -> f64 {
        self.abs()
    }
    fn is_finite_num(&self) -> bool {
        self.is_finite()
    }
}

impl LpNum for BigRational {
    fn tol() -> BigRational {
        BigRational::zero()
    }
    fn tie_tol() -> BigRational {
        BigRational::zero()
    }
    fn from_f64(v: f64) -> BigRational {
        BigRational::from_float(v).expect("finite float")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn abs_val(&self) -> BigRational {
        Signed::abs(self)
    }
    fn is_finite_num(&self) -> bool {
        !self.denom().is_zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub relation: Relation,
    pub rhs: T,
}

/// Maximization program: objective, row constraints, per-variable bounds.
/// A bound of `None` leaves that side free.
#[derive(Debug, Clone)]
pub struct LpInstance<T> {
    pub objective: Vec<T>,
    pub constraints: Vec<Constraint<T>>,
    pub bounds: Vec<(Option<T>, Option<T>)>,
}

impl<T: LpNum> LpInstance<T> {
    /// Program with all variables bounded below by zero.
    pub fn nonneg(n_vars: usize, objective: Vec<T>) -> Self {
        LpInstance {
            objective,
            constraints: Vec::new(),
            bounds: vec![(Some(T::zero()), None); n_vars],
        }
    }

    pub fn push_le(&mut self, coeffs: Vec<T>, rhs: T) {
        self.constraints.push(Constraint { coeffs, relation: Relation::Le, rhs });
    }

    pub fn push_eq(&mut self, coeffs: Vec<T>, rhs: T) {
        self.constraints.push(Constraint { coeffs, relation: Relation::Eq, rhs });
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.objective.len();
        if self.bounds.len() != n {
            return Err(LpError::Dimension(format!(
                "{} bounds for {} variables",
                self.bounds.len(),
                n
            )));
        }
        if !self.objective.iter().all(|c| c.is_finite_num()) {
            return Err(LpError::NonFinite("objective".into()));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(LpError::Dimension(format!(
                    "constraint {i} has {} coefficients for {n} variables",
                    c.coeffs.len()
                )));
            }
            if !c.coeffs.iter().all(|v| v.is_finite_num()) || !c.rhs.is_finite_num() {
                return Err(LpError::NonFinite(format!("constraint {i}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    /// Optimal point in the original variables; empty unless optimal.
    pub solution: Vec<T>,
    pub value: T,
    /// Dual bound reconstructed from the final tableau; the primal value
    /// never exceeds it beyond tolerance.
    pub dual_bound: Option<T>,
}

impl<T: LpNum> LpSolution<T> {
    fn of_status(status: LpStatus) -> Self {
        LpSolution { status, solution: Vec::new(), value: T::zero(), dual_bound: None }
    }
}

/// How an original variable maps into the standard form.
enum VarMap<T> {
    Shifted { col: usize, lower: T },
    Flipped { col: usize, upper: T },
    Free { pos: usize, neg: usize },
}

/// Cost rows ride along with the constraint rows through every pivot, so
/// phase 2 starts with correct reduced costs and the dual vector can be read
/// off the artificial columns at the end.
struct Tableau<T> {
    a: Vec<Vec<T>>,
    b: Vec<T>,
    basis: Vec<usize>,
    n_real: usize,
}

enum StepOutcome {
    Pivoted,
    Optimal,
    Unbounded,
}

impl<T: LpNum> Tableau<T> {
    fn pivot(&mut self, r: usize, c: usize, costs: &mut [(Vec<T>, T)]) {
        let piv = self.a[r][c].clone();
        for v in self.a[r].iter_mut() {
            *v = v.clone() / piv.clone();
        }
        self.b[r] = self.b[r].clone() / piv;
        for i in 0..self.a.len() {
            if i == r {
                continue;
            }
            let f = self.a[i][c].clone();
            if !f.is_zero() {
                for j in 0..self.a[i].len() {
                    self.a[i][j] = self.a[i][j].clone() - f.clone() * self.a[r][j].clone();
                }
                self.b[i] = self.b[i].clone() - f * self.b[r].clone();
                if self.b[i] < T::zero() && self.b[i].abs_val() <= T::tol() {
                    self.b[i] = T::zero();
                }
            }
        }
        for (row, val) in costs.iter_mut() {
            let f = row[c].clone();
            if !f.is_zero() {
                for j in 0..row.len() {
                    row[j] = row[j].clone() - f.clone() * self.a[r][j].clone();
                }
                *val = val.clone() + f * self.b[r].clone();
            }
        }
        self.basis[r] = c;
    }

    /// Bland's rule. Entering: lowest-index real column with positive reduced
    /// cost. Leaving: minimum ratio, ties broken toward the smallest basic
    /// column index. Artificial columns never re-enter.
    fn bland_step(&mut self, cost: usize, costs: &mut Vec<(Vec<T>, T)>) -> StepOutcome {
        let mut entering = None;
        for j in 0..self.n_real {
            if costs[cost].0[j] > T::tol() {
                entering = Some(j);
                break;
            }
        }
        let Some(c) = entering else {
            return StepOutcome::Optimal;
        };
        let mut leave: Option<(usize, T)> = None;
        for i in 0..self.a.len() {
            if self.a[i][c] > T::tol() {
                let ratio = self.b[i].clone() / self.a[i][c].clone();
                match &leave {
                    None => leave = Some((i, ratio)),
                    Some((r, best)) => {
                        if ratio < *best || (ratio == *best && self.basis[i] < self.basis[*r]) {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((r, _)) = leave else {
            return StepOutcome::Unbounded;
        };
        self.pivot(r, c, costs);
        StepOutcome::Pivoted
    }
}

/// Solves a dense LP. Float mode uses a 1e-9 tolerance; exact mode pivots in
/// rational arithmetic with zero tolerance. Identical instances produce the
/// identical pivot sequence and solution vector.
pub fn solve_lp<T: LpNum>(instance: &LpInstance<T>) -> Result<LpSolution<T>, LpError> {
    instance.validate()?;
    let n = instance.objective.len();

    // Standard form: shift/flip/split variables so every column is >= 0.
    let mut var_map = Vec::with_capacity(n);
    let mut n_std = 0usize;
    let mut extra_rows: Vec<(usize, T)> = Vec::new(); // (std col, cap on it)
    let mut offset = T::zero();
    for (j, (lo, hi)) in instance.bounds.iter().enumerate() {
        match (lo, hi) {
            (Some(l), Some(u)) => {
                if u < l {
                    return Ok(LpSolution::of_status(LpStatus::Infeasible));
                }
                var_map.push(VarMap::Shifted { col: n_std, lower: l.clone() });
                extra_rows.push((n_std, u.clone() - l.clone()));
                offset = offset + instance.objective[j].clone() * l.clone();
                n_std += 1;
            }
            (Some(l), None) => {
                var_map.push(VarMap::Shifted { col: n_std, lower: l.clone() });
                offset = offset + instance.objective[j].clone() * l.clone();
                n_std += 1;
            }
            (None, Some(u)) => {
                var_map.push(VarMap::Flipped { col: n_std, upper: u.clone() });
                offset = offset + instance.objective[j].clone() * u.clone();
                n_std += 1;
            }
            (None, None) => {
                var_map.push(VarMap::Free { pos: n_std, neg: n_std + 1 });
                n_std += 2;
            }
        }
    }

    let n_slack = instance
        .constraints
        .iter()
        .filter(|c| c.relation == Relation::Le)
        .count()
        + extra_rows.len();
    let n_real = n_std + n_slack;
    let m = instance.constraints.len() + extra_rows.len();
    let n_cols = n_real + m;

    let mut a: Vec<Vec<T>> = Vec::with_capacity(m);
    let mut b: Vec<T> = Vec::with_capacity(m);
    let mut slack_cursor = n_std;

    for c in &instance.constraints {
        // Rewrite the row over the standard columns, folding bound shifts
        // into the right-hand side.
        let mut row = vec![T::zero(); n_cols];
        let mut rhs = c.rhs.clone();
        for (j, coef) in c.coeffs.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            match &var_map[j] {
                VarMap::Shifted { col, lower } => {
                    row[*col] = row[*col].clone() + coef.clone();
                    rhs = rhs - coef.clone() * lower.clone();
                }
                VarMap::Flipped { col, upper } => {
                    row[*col] = row[*col].clone() - coef.clone();
                    rhs = rhs - coef.clone() * upper.clone();
                }
                VarMap::Free { pos, neg } => {
                    row[*pos] = row[*pos].clone() + coef.clone();
                    row[*neg] = row[*neg].clone() - coef.clone();
                }
            }
        }
        if c.relation == Relation::Le {
            row[slack_cursor] = T::one();
            slack_cursor += 1;
        }
        a.push(row);
        b.push(rhs);
    }
    for (col, cap) in &extra_rows {
        let mut row = vec![T::zero(); n_cols];
        row[*col] = T::one();
        row[slack_cursor] = T::one();
        slack_cursor += 1;
        a.push(row);
        b.push(cap.clone());
    }

    // Normalize rhs signs, then install the artificial identity basis.
    for i in 0..m {
        if b[i] < T::zero() {
            for v in a[i].iter_mut() {
                *v = -v.clone();
            }
            b[i] = -b[i].clone();
        }
    }
    let b_std = b.clone();
    for (i, row) in a.iter_mut().enumerate() {
        row[n_real + i] = T::one();
    }

    // Objective over standard columns.
    let mut c_std = vec![T::zero(); n_cols];
    for (j, coef) in instance.objective.iter().enumerate() {
        if coef.is_zero() {
            continue;
        }
        match &var_map[j] {
            VarMap::Shifted { col, .. } => c_std[*col] = c_std[*col].clone() + coef.clone(),
            VarMap::Flipped { col, .. } => c_std[*col] = c_std[*col].clone() - coef.clone(),
            VarMap::Free { pos, neg } => {
                c_std[*pos] = c_std[*pos].clone() + coef.clone();
                c_std[*neg] = c_std[*neg].clone() - coef.clone();
            }
        }
    }

    let mut tab = Tableau { a, b, basis: (n_real..n_cols).collect(), n_real };

    // Phase-1 reduced costs under the artificial basis: column sums.
    let mut p1 = vec![T::zero(); n_cols];
    for j in 0..n_real {
        let mut s = T::zero();
        for i in 0..m {
            s = s + tab.a[i][j].clone();
        }
        p1[j] = s;
    }
    let mut p1_val = T::zero();
    for i in 0..m {
        p1_val = p1_val - tab.b[i].clone();
    }

    let mut costs = vec![(p1, p1_val), (c_std, T::zero())];
    loop {
        match tab.bland_step(0, &mut costs) {
            StepOutcome::Pivoted => continue,
            StepOutcome::Optimal => break,
            StepOutcome::Unbounded => {
                return Err(LpError::Numerical("phase-1 objective reported unbounded".into()))
            }
        }
    }
    if costs[0].1 < -T::tol() {
        return Ok(LpSolution::of_status(LpStatus::Infeasible));
    }

    // Drive remaining basic artificials out; drop redundant rows.
    let mut r = 0;
    while r < tab.a.len() {
        if tab.basis[r] >= tab.n_real {
            match (0..tab.n_real).find(|&j| tab.a[r][j].abs_val() > T::tol()) {
                Some(c) => {
                    tab.b[r] = T::zero();
                    tab.pivot(r, c, &mut costs);
                }
                None => {
                    tab.a.remove(r);
                    tab.b.remove(r);
                    tab.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }

    costs.remove(0);
    loop {
        match tab.bland_step(0, &mut costs) {
            StepOutcome::Pivoted => continue,
            StepOutcome::Optimal => break,
            StepOutcome::Unbounded => return Ok(LpSolution::of_status(LpStatus::Unbounded)),
        }
    }
    let (p2, p2_val) = costs.remove(0);

    // Recover the standard-form point, then the original variables.
    let mut x_std = vec![T::zero(); n_cols];
    for (i, &col) in tab.basis.iter().enumerate() {
        x_std[col] = tab.b[i].clone();
    }
    let mut solution = Vec::with_capacity(n);
    for vm in &var_map {
        solution.push(match vm {
            VarMap::Shifted { col, lower } => x_std[*col].clone() + lower.clone(),
            VarMap::Flipped { col, upper } => upper.clone() - x_std[*col].clone(),
            VarMap::Free { pos, neg } => x_std[*pos].clone() - x_std[*neg].clone(),
        });
    }

    // Dual bound: y_i = -rc(artificial_i) against the saved standard rhs.
    let mut dual_bound = offset.clone();
    for i in 0..m {
        let y_i = -p2[n_real + i].clone();
        dual_bound = dual_bound + y_i * b_std[i].clone();
    }

    Ok(LpSolution {
        status: LpStatus::Optimal,
        solution,
        value: p2_val + offset,
        dual_bound: Some(dual_bound),
    })
}

/// Exact counterpart used by callers that hold rational data.
pub fn solve_lp_exact(instance: &LpInstance<BigRational>) -> Result<LpSolution<BigRational>, LpError> {
    solve_lp(instance)
}

/// Rational literal, shorthand for LP builders and tests.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn le(coeffs: Vec<f64>, rhs: f64) -> Constraint<f64> {
        Constraint { coeffs, relation: Relation::Le, rhs }
    }

    #[test]
    fn single_variable_cap() {
        // max x s.t. x <= 3, x >= 0
        let ins = LpInstance {
            objective: vec![1.0],
            constraints: vec![le(vec![1.0], 3.0)],
            bounds: vec![(Some(0.0), None)],
        };
        let sol = solve_lp(&ins).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.value - 3.0).abs() < 1e-9);
        assert!((sol.solution[0] - 3.0).abs() < 1e-9);
    }

    #[test]
    fn detects_infeasible() {
        // max x s.t. x <= -1, x >= 0
        let ins = LpInstance {
            objective: vec![1.0],
            constraints: vec![le(vec![1.0], -1.0)],
            bounds: vec![(Some(0.0), None)],
        };
        let sol = solve_lp(&ins).unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
    }

    #[test]
    fn two_variable_vertex() {
        // max x+y s.t. x+2y <= 4, 3x+y <= 6, x,y >= 0 -> 14/5 at (8/5, 6/5).
        // Oracle: enumerate candidate vertices of the 2-var polytope.
        let cons = [([1.0, 2.0], 4.0), ([3.0, 1.0], 6.0), ([1.0, 0.0], 0.0), ([0.0, 1.0], 0.0)];
        let feasible = |x: f64, y: f64| {
            x + 2.0 * y <= 4.0 + 1e-12 && 3.0 * x + y <= 6.0 + 1e-12 && x >= -1e-12 && y >= -1e-12
        };
        let mut best = f64::NEG_INFINITY;
        for i in 0..cons.len() {
            for j in (i + 1)..cons.len() {
                let (a1, b1) = cons[i];
                let (a2, b2) = cons[j];
                let det = a1[0] * a2[1] - a1[1] * a2[0];
                if det.abs() < 1e-12 {
                    continue;
                }
                let x = (b1 * a2[1] - a1[1] * b2) / det;
                let y = (a1[0] * b2 - b1 * a2[0]) / det;
                if feasible(x, y) {
                    best = best.max(x + y);
                }
            }
        }
        assert!((best - 14.0 / 5.0).abs() < 1e-12, "oracle disagrees");

        let ins = LpInstance {
            objective: vec![1.0, 1.0],
            constraints: vec![le(vec![1.0, 2.0], 4.0), le(vec![3.0, 1.0], 6.0)],
            bounds: vec![(Some(0.0), None), (Some(0.0), None)],
        };
        let sol = solve_lp(&ins).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.value - best).abs() < 1e-9);
        assert!((sol.solution[0] - 1.6).abs() < 1e-9);
        assert!((sol.solution[1] - 1.2).abs() < 1e-9);
    }

    #[test]
    fn unbounded_direction() {
        let ins = LpInstance {
            objective: vec![1.0, 0.0],
            constraints: vec![le(vec![-1.0, 1.0], 1.0)],
            bounds: vec![(Some(0.0), None), (Some(0.0), None)],
        };
        let sol = solve_lp(&ins).unwrap();
        assert_eq!(sol.status, LpStatus::Unbounded);
    }

    #[test]
    fn free_variables_split() {
        // max -x s.t. -x <= 5 with x free: optimum at x = -5.
        let ins = LpInstance {
            objective: vec![-1.0],
            constraints: vec![le(vec![-1.0], 5.0)],
            bounds: vec![(None, None)],
        };
        let sol = solve_lp(&ins).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.value - 5.0).abs() < 1e-9);
        assert!((sol.solution[0] + 5.0).abs() < 1e-9);
    }

    #[test]
    fn equality_and_box_bounds() {
        // max x + y s.t. x + y = 1, 0 <= x <= 0.25, 0 <= y <= 1.
        let ins = LpInstance {
            objective: vec![1.0, 1.0],
            constraints: vec![Constraint {
                coeffs: vec![1.0, 1.0],
                relation: Relation::Eq,
                rhs: 1.0,
            }],
            bounds: vec![(Some(0.0), Some(0.25)), (Some(0.0), Some(1.0))],
        };
        let sol = solve_lp(&ins).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.value - 1.0).abs() < 1e-9);
        assert!(sol.solution[0] <= 0.25 + 1e-9);
    }

    #[test]
    fn redundant_rows_are_dropped() {
        // Second row is twice the first; solver must not report infeasible.
        let ins = LpInstance {
            objective: vec![2.0, 1.0],
            constraints: vec![
                Constraint { coeffs: vec![1.0, 1.0], relation: Relation::Eq, rhs: 1.0 },
                Constraint { coeffs: vec![2.0, 2.0], relation: Relation::Eq, rhs: 2.0 },
            ],
            bounds: vec![(Some(0.0), None), (Some(0.0), None)],
        };
        let sol = solve_lp(&ins).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn beale_cycling_instance_terminates() {
        // Beale's example cycles under the largest-coefficient rule; Bland's
        // rule terminates at value 1/20 (c = 1, a = 1/25, b = d = 0).
        let ins = LpInstance {
            objective: vec![0.75, -150.0, 0.02, -6.0],
            constraints: vec![
                le(vec![0.25, -60.0, -0.04, 9.0], 0.0),
                le(vec![0.5, -90.0, -0.02, 3.0], 0.0),
                le(vec![0.0, 0.0, 1.0, 0.0], 1.0),
            ],
            bounds: vec![(Some(0.0), None); 4],
        };
        let sol = solve_lp(&ins).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.value - 0.05).abs() < 1e-9, "value {}", sol.value);
    }

    #[test]
    fn exact_mode_matches_float() {
        let fins = LpInstance {
            objective: vec![1.0, 1.0],
            constraints: vec![le(vec![1.0, 2.0], 4.0), le(vec![3.0, 1.0], 6.0)],
            bounds: vec![(Some(0.0), None), (Some(0.0), None)],
        };
        let eins = LpInstance {
            objective: vec![rat(1, 1), rat(1, 1)],
            constraints: vec![
                Constraint { coeffs: vec![rat(1, 1), rat(2, 1)], relation: Relation::Le, rhs: rat(4, 1) },
                Constraint { coeffs: vec![rat(3, 1), rat(1, 1)], relation: Relation::Le, rhs: rat(6, 1) },
            ],
            bounds: vec![(Some(rat(0, 1)), None), (Some(rat(0, 1)), None)],
        };
        let f = solve_lp(&fins).unwrap();
        let e = solve_lp_exact(&eins).unwrap();
        assert_eq!(e.status, LpStatus::Optimal);
        assert_eq!(e.value, rat(14, 5));
        assert_eq!(e.solution, vec![rat(8, 5), rat(6, 5)]);
        assert!((f.value - LpNum::to_f64(&e.value)).abs() < 1e-7);
    }

    #[test]
    fn pivot_sequence_is_reproducible() {
        let ins = LpInstance {
            objective: vec![2.0, 3.0, 1.0],
            constraints: vec![
                le(vec![1.0, 1.0, 1.0], 10.0),
                le(vec![2.0, 1.0, 0.0], 8.0),
                le(vec![0.0, 1.0, 3.0], 9.0),
            ],
            bounds: vec![(Some(0.0), None); 3],
        };
        let a = solve_lp(&ins).unwrap();
        let b = solve_lp(&ins).unwrap();
        assert_eq!(a.solution, b.solution);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    #[test]
    fn weak_duality_from_final_tableau() {
        let ins = LpInstance {
            objective: vec![1.0, 2.0],
            constraints: vec![le(vec![1.0, 1.0], 3.0), le(vec![1.0, 3.0], 5.0)],
            bounds: vec![(Some(0.0), None), (Some(0.0), None)],
        };
        let sol = solve_lp(&ins).unwrap();
        let bound = sol.dual_bound.unwrap();
        assert!(sol.value <= bound + 1e-9);
        assert!((sol.value - bound).abs() < 1e-9);
    }
}
