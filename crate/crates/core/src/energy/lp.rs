//! Dense two-phase simplex for `min c·x  s.t.  A x = b, x >= 0`.

use serde::Serialize;

const PIVOT_EPS: f64 = 1e-11;
const FEAS_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub cost: Vec<f64>,
    pub a_eq: Vec<Vec<f64>>,
    pub b_eq: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, Serialize)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub value: f64,
    /// Basic columns at termination, sorted.
    pub basis: Vec<usize>,
    /// Equality multipliers `y` with `A^T y <= c` at optimality.
    pub duals: Vec<f64>,
    pub primal_residual: f64,
    pub slackness_residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotRule {
    Bland,
    /// Most negative reduced cost, lowest index on ties. Can cycle.
    Dantzig,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    width: usize,
}

enum PhaseOutcome {
    Optimal,
    Unbounded,
    IterationLimit,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pr = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, w) in row.iter_mut().zip(pr.iter()) {
                    *v -= f * w;
                }
                row[c] = 0.0;
            }
        }
        self.basis[r] = c;
    }

    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut rc: Vec<f64> = cost.to_vec();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                for j in 0..self.width {
                    rc[j] -= cb * row[j];
                }
            }
        }
        rc
    }

    fn run(
        &mut self,
        cost: &[f64],
        allowed: &dyn Fn(usize) -> bool,
        rule: PivotRule,
        max_iter: usize,
        iterations: &mut usize,
    ) -> PhaseOutcome {
        loop {
            if *iterations >= max_iter {
                return PhaseOutcome::IterationLimit;
            }
            let rc = self.reduced_costs(cost);
            let entering = match rule {
                PivotRule::Bland => (0..self.width).find(|&j| allowed(j) && rc[j] < -PIVOT_EPS),
                PivotRule::Dantzig => {
                    let mut best: Option<usize> = None;
                    for j in 0..self.width {
                        if allowed(j) && rc[j] < -PIVOT_EPS && best.is_none_or(|b| rc[j] < rc[b]) {
                            best = Some(j);
                        }
                    }
                    best
                }
            };
            let Some(c) = entering else {
                return PhaseOutcome::Optimal;
            };
            let rhs = self.width;
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c] > PIVOT_EPS {
                    let ratio = row[rhs] / row[c];
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br - 1e-13
                                || ((ratio - br).abs() <= 1e-13 && self.basis[i] < self.basis[bi])
                            {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return PhaseOutcome::Unbounded;
            };
            self.pivot(r, c);
            *iterations += 1;
        }
    }
}

fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = a.len();
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[p][col].abs() < 1e-300 {
            return None;
        }
        a.swap(p, col);
        b.swap(p, col);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for k in col..n {
                    a[r][k] -= f * a[col][k];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

pub fn lp_solve(problem: &LpProblem) -> LpSolution {
    lp_solve_with(problem, PivotRule::Bland, 100_000)
}

pub fn lp_solve_with(problem: &LpProblem, rule: PivotRule, max_iter: usize) -> LpSolution {
    let n = problem.cost.len();
    let m = problem.a_eq.len();
    assert_eq!(problem.b_eq.len(), m, "rhs length must match row count");
    assert!(problem.a_eq.iter().all(|r| r.len() == n), "ragged constraint matrix");

    let width = n + m;
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(m);
    for i in 0..m {
        let flip = if problem.b_eq[i] < 0.0 { -1.0 } else { 1.0 };
        let mut row = vec![0.0; width + 1];
        for j in 0..n {
            row[j] = flip * problem.a_eq[i][j];
        }
        row[n + i] = 1.0;
        row[width] = flip * problem.b_eq[i];
        rows.push(row);
    }
    // start from slack-like unit columns where available, artificials elsewhere
    let mut basis: Vec<usize> = (n..n + m).collect();
    for (i, b) in basis.iter_mut().enumerate() {
        let unit = (0..n).find(|&j| {
            rows[i][j] == 1.0 && rows.iter().enumerate().all(|(k, r)| k == i || r[j] == 0.0)
        });
        if let Some(j) = unit {
            *b = j;
        }
    }
    let mut t = Tableau { rows, basis, width };
    let mut iterations = 0;

    let mut phase1_cost = vec![0.0; width];
    for c in phase1_cost.iter_mut().skip(n) {
        *c = 1.0;
    }
    let all = |_: usize| true;
    if let PhaseOutcome::IterationLimit = t.run(&phase1_cost, &all, rule, max_iter, &mut iterations) {
        return failed(n, m, LpStatus::Infeasible, iterations);
    }
    let infeas: f64 = (0..t.rows.len())
        .filter(|&i| t.basis[i] >= n)
        .map(|i| t.rows[i][width])
        .sum();
    let scale = 1.0 + problem.b_eq.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    if infeas > FEAS_EPS * scale {
        return failed(n, m, LpStatus::Infeasible, iterations);
    }

    // drive zero-level artificials out; rows with no usable pivot are redundant
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            if let Some(c) = (0..n).find(|&j| t.rows[i][j].abs() > 1e-9) {
                t.pivot(i, c);
                i += 1;
            } else {
                t.rows.remove(i);
                t.basis.remove(i);
            }
        } else {
            i += 1;
        }
    }

    let mut cost = problem.cost.clone();
    cost.extend(std::iter::repeat_n(0.0, m));
    let structural = |j: usize| j < n;
    match t.run(&cost, &structural, rule, max_iter, &mut iterations) {
        PhaseOutcome::Optimal => {}
        PhaseOutcome::Unbounded => return failed(n, m, LpStatus::Unbounded, iterations),
        PhaseOutcome::IterationLimit => return failed(n, m, LpStatus::Infeasible, iterations),
    }

    let mut basis: Vec<usize> = t.basis.clone();
    let mut x = vec![0.0; n];
    for (r, &b) in basis.iter().enumerate() {
        x[b] = t.rows[r][width].max(0.0);
    }
    polish(problem, &basis, &mut x);
    let duals = dual_from_basis(problem, &basis);
    basis.sort_unstable();

    let value: f64 = x.iter().zip(&problem.cost).map(|(a, b)| a * b).sum();
    let primal_residual = residual(problem, &x);
    let slackness_residual = (0..n)
        .map(|j| {
            let rc = problem.cost[j] - (0..m).map(|i| problem.a_eq[i][j] * duals[i]).sum::<f64>();
            (x[j] * rc).abs()
        })
        .fold(0.0, f64::max);
    LpSolution {
        status: LpStatus::Optimal,
        x,
        value,
        basis,
        duals,
        primal_residual,
        slackness_residual,
        iterations,
    }
}

fn failed(n: usize, m: usize, status: LpStatus, iterations: usize) -> LpSolution {
    LpSolution {
        status,
        x: vec![0.0; n],
        value: match status {
            LpStatus::Unbounded => f64::NEG_INFINITY,
            _ => f64::INFINITY,
        },
        basis: Vec::new(),
        duals: vec![0.0; m],
        primal_residual: f64::INFINITY,
        slackness_residual: f64::INFINITY,
        iterations,
    }
}

pub fn residual(problem: &LpProblem, x: &[f64]) -> f64 {
    problem
        .a_eq
        .iter()
        .zip(&problem.b_eq)
        .map(|(row, b)| (row.iter().zip(x).map(|(a, v)| a * v).sum::<f64>() - b).abs())
        .fold(0.0, f64::max)
}

/// Re-solves the basic variables against the original data to shed tableau drift.
fn polish(problem: &LpProblem, basis: &[usize], x: &mut [f64]) {
    let rows = independent_rows(problem, basis);
    if rows.len() != basis.len() {
        return;
    }
    let a: Vec<Vec<f64>> = rows
        .iter()
        .map(|&i| basis.iter().map(|&j| problem.a_eq[i][j]).collect())
        .collect();
    let b: Vec<f64> = rows.iter().map(|&i| problem.b_eq[i]).collect();
    if let Some(xb) = solve_dense(a, b) {
        let mut candidate = x.to_vec();
        for (k, &j) in basis.iter().enumerate() {
            candidate[j] = xb[k].max(0.0);
        }
        if residual(problem, &candidate) <= residual(problem, x) {
            x.copy_from_slice(&candidate);
        }
    }
}

fn independent_rows(problem: &LpProblem, basis: &[usize]) -> Vec<usize> {
    let mut kept: Vec<Vec<f64>> = Vec::new();
    let mut idx = Vec::new();
    for (i, row) in problem.a_eq.iter().enumerate() {
        let mut v: Vec<f64> = basis.iter().map(|&j| row[j]).collect();
        for k in &kept {
            let p = k.iter().position(|x| x.abs() > 1e-12).unwrap();
            let f = v[p] / k[p];
            for (a, b) in v.iter_mut().zip(k) {
                *a -= f * b;
            }
        }
        if v.iter().any(|x| x.abs() > 1e-9) {
            kept.push(v);
            idx.push(i);
        }
        if kept.len() == basis.len() {
            break;
        }
    }
    idx
}

fn dual_from_basis(problem: &LpProblem, basis: &[usize]) -> Vec<f64> {
    let m = problem.a_eq.len();
    let rows = independent_rows(problem, basis);
    let mut y = vec![0.0; m];
    if rows.len() != basis.len() {
        return y;
    }
    // B^T y_rows = c_B
    let a: Vec<Vec<f64>> = basis
        .iter()
        .map(|&j| rows.iter().map(|&i| problem.a_eq[i][j]).collect())
        .collect();
    let c: Vec<f64> = basis.iter().map(|&j| problem.cost[j]).collect();
    if let Some(sol) = solve_dense(a, c) {
        for (k, &i) in rows.iter().enumerate() {
            y[i] = sol[k];
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_equality() {
        let p = LpProblem { cost: vec![1.0], a_eq: vec![vec![1.0]], b_eq: vec![1.0] };
        let s = lp_solve(&p);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn outside_cone_is_infeasible() {
        let p = LpProblem {
            cost: vec![1.0, 1.0],
            a_eq: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            b_eq: vec![-1.0, 1.0],
        };
        assert_eq!(lp_solve(&p).status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_ray() {
        let p = LpProblem { cost: vec![-1.0, 0.0], a_eq: vec![vec![1.0, -1.0]], b_eq: vec![0.0] };
        assert_eq!(lp_solve(&p).status, LpStatus::Unbounded);
    }

    #[test]
    fn redundant_rows() {
        let p = LpProblem {
            cost: vec![1.0, 2.0],
            a_eq: vec![vec![1.0, 1.0], vec![2.0, 2.0]],
            b_eq: vec![1.0, 2.0],
        };
        let s = lp_solve(&p);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.value - 1.0).abs() < 1e-12);
        assert!(s.primal_residual <= 1e-9);
    }

    // Beale's degenerate instance with slacks as the last three columns.
    fn beale() -> LpProblem {
        LpProblem {
            cost: vec![-0.75, 20.0, -0.5, 6.0, 0.0, 0.0, 0.0],
            a_eq: vec![
                vec![0.25, -8.0, -1.0, 9.0, 1.0, 0.0, 0.0],
                vec![0.5, -12.0, -0.5, 3.0, 0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
            ],
            b_eq: vec![0.0, 0.0, 1.0],
        }
    }

    #[test]
    fn bland_terminates_on_cycling_instance() {
        let s = lp_solve(&beale());
        assert_eq!(s.status, LpStatus::Optimal);
        // optimum (1, 0, 1, 0) checked by hand against both constraints
        assert!((s.value + 1.25).abs() < 1e-12, "value {}", s.value);
        for (got, want) in s.x.iter().zip([1.0, 0.0, 1.0, 0.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(s.slackness_residual <= 1e-9);
        assert!(s.primal_residual <= 1e-9);
    }

    #[test]
    fn largest_coefficient_rule_stalls_where_bland_does_not() {
        let capped = lp_solve_with(&beale(), PivotRule::Dantzig, 60);
        let bland = lp_solve_with(&beale(), PivotRule::Bland, 60);
        assert_ne!(capped.status, LpStatus::Optimal);
        assert_eq!(capped.iterations, 60);
        assert_eq!(bland.status, LpStatus::Optimal);
    }
}
