//! A small dense two-phase simplex solver. All geometric oracles in the
//! crate (gauge, slice optimization, membership tests, projective norms)
//! reduce to programs of this shape.
//!
//! Pivoting is deterministic: largest-coefficient entering rule with a
//! fixed iteration budget, after which Bland's rule takes over as the
//! anti-cycling guard.

use crate::error::{Error, Result};

pub const MAX_VARS: usize = 64;
pub const MAX_CONSTRAINTS: usize = 4096;

/// Entering threshold for reduced costs.
const EPS: f64 = 1e-9;
/// Minimum admissible pivot magnitude.
const PIVOT_EPS: f64 = 1e-10;
/// Phase-1 residual above which the program is declared infeasible.
const FEAS_EPS: f64 = 1e-7;
const MAX_ITERS: usize = 50_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct VarBounds {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl VarBounds {
    pub fn nonneg() -> Self {
        Self {
            lower: Some(0.0),
            upper: None,
        }
    }

    pub fn free() -> Self {
        Self::default()
    }
}

/// A dense linear program in maximization form.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<VarBounds>,
}

impl LinearProgram {
    /// All variables free.
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self {
            objective,
            constraints: Vec::new(),
            bounds: vec![VarBounds::free(); n],
        }
    }

    /// All variables nonnegative.
    pub fn with_nonneg(objective: Vec<f64>) -> Self {
        let n = objective.len();
        let mut lp = Self::new(objective);
        lp.bounds = vec![VarBounds::nonneg(); n];
        lp
    }

    pub fn push(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub value: f64,
    pub point: Vec<f64>,
}

impl LpSolution {
    fn non_optimal(status: LpStatus, n: usize) -> Self {
        Self {
            status,
            value: 0.0,
            point: vec![0.0; n],
        }
    }
}

/// How an original variable maps onto nonnegative standard-form columns.
#[derive(Clone, Copy, Debug)]
enum StdMap {
    /// x = offset + u
    Shifted { col: usize, offset: f64 },
    /// x = offset − u
    Mirrored { col: usize, offset: f64 },
    /// x = u − v
    Split { pos: usize, neg: usize },
}

pub fn solve(lp: &LinearProgram) -> Result<LpSolution> {
    let n = lp.objective.len();
    if n == 0 || n > MAX_VARS {
        return Err(Error::SizeLimit(format!(
            "{n} variables (cap {MAX_VARS})"
        )));
    }
    if lp.constraints.len() > MAX_CONSTRAINTS {
        return Err(Error::SizeLimit(format!(
            "{} constraints (cap {MAX_CONSTRAINTS})",
            lp.constraints.len()
        )));
    }
    if lp.bounds.len() != n {
        return Err(Error::InvalidDescriptor(
            "bounds length does not match objective".into(),
        ));
    }
    for c in &lp.constraints {
        if c.coeffs.len() != n {
            return Err(Error::InvalidDescriptor(
                "constraint row length does not match objective".into(),
            ));
        }
        if !c.rhs.is_finite() {
            return Err(Error::InvalidDescriptor("non-finite rhs".into()));
        }
    }

    // Map every variable to nonnegative standard columns.
    let mut maps = Vec::with_capacity(n);
    let mut n_std = 0usize;
    for b in &lp.bounds {
        let m = match (b.lower, b.upper) {
            (Some(lo), Some(up)) if up < lo - EPS => {
                return Ok(LpSolution::non_optimal(LpStatus::Infeasible, n));
            }
            (Some(lo), _) => StdMap::Shifted {
                col: n_std,
                offset: lo,
            },
            (None, Some(up)) => StdMap::Mirrored {
                col: n_std,
                offset: up,
            },
            (None, None) => {
                let m = StdMap::Split {
                    pos: n_std,
                    neg: n_std + 1,
                };
                n_std += 1;
                m
            }
        };
        n_std += 1;
        maps.push(m);
    }

    // Rewrite a dense row over original variables into standard columns,
    // returning the rhs correction.
    let rewrite = |coeffs: &[f64], row: &mut [f64]| -> f64 {
        let mut shift = 0.0;
        for (j, &c) in coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            match maps[j] {
                StdMap::Shifted { col, offset } => {
                    row[col] += c;
                    shift += c * offset;
                }
                StdMap::Mirrored { col, offset } => {
                    row[col] -= c;
                    shift += c * offset;
                }
                StdMap::Split { pos, neg } => {
                    row[pos] += c;
                    row[neg] -= c;
                }
            }
        }
        shift
    };

    let mut rows: Vec<(Vec<f64>, Relation, f64)> = Vec::new();
    for c in &lp.constraints {
        let mut row = vec![0.0; n_std];
        let shift = rewrite(&c.coeffs, &mut row);
        rows.push((row, c.relation, c.rhs - shift));
    }
    // Two-sided bounds become extra rows on the shifted column.
    for (j, b) in lp.bounds.iter().enumerate() {
        if let (Some(lo), Some(up)) = (b.lower, b.upper) {
            if let StdMap::Shifted { col, .. } = maps[j] {
                let mut row = vec![0.0; n_std];
                row[col] = 1.0;
                rows.push((row, Relation::Le, up - lo));
            }
        }
    }

    let mut std_obj = vec![0.0; n_std];
    let obj_shift = rewrite(&lp.objective, &mut std_obj);

    // Normalize all rhs to be nonnegative.
    for (row, rel, rhs) in rows.iter_mut() {
        if *rhs < 0.0 {
            for v in row.iter_mut() {
                *v = -*v;
            }
            *rhs = -*rhs;
            *rel = match *rel {
                Relation::Le => Relation::Ge,
                Relation::Eq => Relation::Eq,
                Relation::Ge => Relation::Le,
            };
        }
    }

    // Append slack/surplus/artificial columns and pick the starting basis.
    let m = rows.len();
    let mut n_total = n_std;
    let mut slack_col = vec![None; m];
    let mut art_col = vec![None; m];
    for (i, (_, rel, _)) in rows.iter().enumerate() {
        match rel {
            Relation::Le => {
                slack_col[i] = Some(n_total);
                n_total += 1;
            }
            Relation::Ge => {
                slack_col[i] = Some(n_total); // surplus, coefficient −1
                n_total += 1;
            }
            Relation::Eq => {}
        }
    }
    let art_start = n_total;
    for (i, (_, rel, _)) in rows.iter().enumerate() {
        if matches!(rel, Relation::Ge | Relation::Eq) {
            art_col[i] = Some(n_total);
            n_total += 1;
        }
    }

    let mut tab: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut basis = vec![0usize; m];
    for (i, (row, rel, rhs)) in rows.iter().enumerate() {
        let mut r = vec![0.0; n_total + 1];
        r[..n_std].copy_from_slice(row);
        if let Some(s) = slack_col[i] {
            r[s] = if matches!(rel, Relation::Le) { 1.0 } else { -1.0 };
        }
        if let Some(a) = art_col[i] {
            r[a] = 1.0;
        }
        r[n_total] = *rhs;
        basis[i] = art_col[i].or(slack_col[i]).expect("every row has a basic column");
        tab.push(r);
    }

    let mut iters = 0usize;

    // Phase 1: drive the artificial variables to zero.
    if art_start < n_total {
        let mut obj = vec![0.0; n_total + 1];
        for j in art_start..n_total {
            obj[j] = 1.0; // row is −c with c_art = −1
        }
        price_out(&mut obj, &tab, &basis);
        let status = run_simplex(&mut tab, &mut basis, &mut obj, n_total, &mut iters, n_total)?;
        if status == LpStatus::Unbounded {
            return Err(Error::Numerical("phase 1 reported unbounded".into()));
        }
        if obj[n_total] < -FEAS_EPS {
            return Ok(LpSolution::non_optimal(LpStatus::Infeasible, n));
        }
    }

    // Phase 2: the real objective; artificial columns may no longer enter.
    let mut obj = vec![0.0; n_total + 1];
    for j in 0..n_std {
        obj[j] = -std_obj[j];
    }
    price_out(&mut obj, &tab, &basis);
    let status = run_simplex(&mut tab, &mut basis, &mut obj, n_total, &mut iters, art_start)?;
    if status == LpStatus::Unbounded {
        return Ok(LpSolution::non_optimal(LpStatus::Unbounded, n));
    }

    // Read off the standard solution and map back.
    let mut x_std = vec![0.0; n_total];
    for (i, &b) in basis.iter().enumerate() {
        x_std[b] = tab[i][n_total];
    }
    let mut point = vec![0.0; n];
    for (j, map) in maps.iter().enumerate() {
        point[j] = match *map {
            StdMap::Shifted { col, offset } => offset + x_std[col],
            StdMap::Mirrored { col, offset } => offset - x_std[col],
            StdMap::Split { pos, neg } => x_std[pos] - x_std[neg],
        };
    }
    let value: f64 = lp
        .objective
        .iter()
        .zip(&point)
        .map(|(c, x)| c * x)
        .sum();
    debug_assert!((value - (obj[n_total] + obj_shift)).abs() <= 1e-6 * (1.0 + value.abs()));

    // Sanity: the reported point must satisfy the original constraints.
    for c in &lp.constraints {
        let lhs: f64 = c.coeffs.iter().zip(&point).map(|(a, x)| a * x).sum();
        let slack = lhs - c.rhs;
        let tol = 1e-6 * (1.0 + c.rhs.abs());
        let ok = match c.relation {
            Relation::Le => slack <= tol,
            Relation::Eq => slack.abs() <= tol,
            Relation::Ge => slack >= -tol,
        };
        if !ok {
            return Err(Error::Numerical(format!(
                "solution violates a constraint by {slack:.3e}"
            )));
        }
    }

    Ok(LpSolution {
        status: LpStatus::Optimal,
        value,
        point,
    })
}

/// Eliminates basic columns from a freshly installed objective row.
fn price_out(obj: &mut [f64], tab: &[Vec<f64>], basis: &[usize]) {
    for (i, &b) in basis.iter().enumerate() {
        let f = obj[b];
        if f != 0.0 {
            for (o, t) in obj.iter_mut().zip(&tab[i]) {
                *o -= f * t;
            }
        }
    }
}

/// Runs the simplex loop on a priced-out tableau. Columns at or past
/// `enter_limit` never enter the basis.
fn run_simplex(
    tab: &mut [Vec<f64>],
    basis: &mut [usize],
    obj: &mut [f64],
    rhs_col: usize,
    iters: &mut usize,
    enter_limit: usize,
) -> Result<LpStatus> {
    let m = tab.len();
    let dantzig_budget = 500 + 10 * (m + rhs_col);
    loop {
        *iters += 1;
        if *iters > MAX_ITERS {
            return Err(Error::Numerical(format!(
                "iteration cap {MAX_ITERS} reached"
            )));
        }
        let bland = *iters > dantzig_budget;

        // Entering column.
        let mut enter = None;
        for j in 0..enter_limit {
            if obj[j] < -EPS {
                match enter {
                    None => enter = Some(j),
                    Some(e) if !bland && obj[j] < obj[e] => enter = Some(j),
                    _ => {}
                }
                if bland {
                    break;
                }
            }
        }
        let Some(j) = enter else {
            return Ok(LpStatus::Optimal);
        };

        // Ratio test; ties go to the smallest basis index.
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let a = tab[i][j];
            if a > PIVOT_EPS {
                let ratio = tab[i][rhs_col] / a;
                match leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - PIVOT_EPS
                            || (ratio < lr + PIVOT_EPS && basis[i] < basis[li])
                        {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((r, _)) = leave else {
            return Ok(LpStatus::Unbounded);
        };

        pivot(tab, basis, obj, r, j, rhs_col);
    }
}

fn pivot(
    tab: &mut [Vec<f64>],
    basis: &mut [usize],
    obj: &mut [f64],
    r: usize,
    j: usize,
    rhs_col: usize,
) {
    let p = tab[r][j];
    for v in tab[r].iter_mut() {
        *v /= p;
    }
    for i in 0..tab.len() {
        if i != r {
            let f = tab[i][j];
            if f != 0.0 {
                for k in 0..=rhs_col {
                    tab[i][k] -= f * tab[r][k];
                }
                tab[i][j] = 0.0;
            }
        }
    }
    let f = obj[j];
    if f != 0.0 {
        for k in 0..=rhs_col {
            obj[k] -= f * tab[r][k];
        }
        obj[j] = 0.0;
    }
    basis[r] = j;
}
