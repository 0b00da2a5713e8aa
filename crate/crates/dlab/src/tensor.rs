//! Projective tensor products of polyhedral spaces: the norm as a dual
//! LP over bilinear forms, denting distances for elementary tensors, and
//! the two-stage slice refinement that produces in-slice witnesses.

use crate::error::{Error, Result};
use crate::lp::{self, LinearProgram, LpStatus, Relation};
use crate::polytope::{SliceSpec, VBall};
use crate::vector::SparseVector;
use crate::TOL;

/// Cap on the flattened dimension of a tensor instance.
const TENSOR_DIM_CAP: usize = 36;

/// A dense n×m array standing for an element of X⊗Y (row index runs over
/// X coordinates) or for a bilinear form on X×Y.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidDescriptor("ragged or empty matrix".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Reads a flat vector laid out row-major over coordinates
    /// 1..=rows·cols.
    pub fn from_vector(x: &SparseVector, rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, v) in x.iter() {
            let i = (i - 1) as usize;
            if i < rows * cols {
                m.data[i] = v;
            }
        }
        m
    }

    pub fn to_sparse(&self) -> SparseVector {
        SparseVector::from_entries(
            self.data
                .iter()
                .enumerate()
                .map(|(i, &v)| (i as u32 + 1, v)),
        )
    }

    /// The elementary tensor u⊗v.
    pub fn outer(u: &SparseVector, v: &SparseVector, rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, a) in u.iter() {
            for (j, b) in v.iter() {
                m.data[(i as usize - 1) * cols + (j as usize - 1)] = a * b;
            }
        }
        m
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, t: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| t * v).collect(),
        }
    }

    /// Frobenius pairing ⟨self, z⟩, the duality between forms and tensors.
    pub fn frob(&self, z: &Self) -> f64 {
        self.data.iter().zip(&z.data).map(|(a, b)| a * b).sum()
    }

    /// Evaluates self as a bilinear form on a coordinate pair.
    pub fn bilinear(&self, u: &SparseVector, v: &SparseVector) -> f64 {
        u.iter()
            .map(|(i, a)| {
                a * v
                    .iter()
                    .map(|(j, b)| b * self.get(i as usize - 1, j as usize - 1))
                    .sum::<f64>()
            })
            .sum()
    }

    pub fn entrywise_l1(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).sum()
    }
}

fn check_size(x: &VBall, y: &VBall, z: &Matrix) -> Result<()> {
    if z.rows != x.dim() || z.cols != y.dim() {
        return Err(Error::InvalidDescriptor(format!(
            "matrix is {}x{}, factors are {}x{}",
            z.rows,
            z.cols,
            x.dim(),
            y.dim()
        )));
    }
    if z.rows * z.cols > TENSOR_DIM_CAP {
        return Err(Error::SizeLimit(format!(
            "tensor dimension {} (cap {TENSOR_DIM_CAP})",
            z.rows * z.cols
        )));
    }
    Ok(())
}

/// The projective norm of z, as the LP maximum of ⟨B,z⟩ over bilinear
/// forms bounded by 1 on every extreme pair of the factor balls. For
/// polyhedral factors this dual value equals the norm exactly.
pub fn proj_norm(x_ball: &VBall, y_ball: &VBall, z: &Matrix) -> Result<f64> {
    check_size(x_ball, y_ball, z)?;
    let (n, m) = (z.rows, z.cols);
    let obj: Vec<f64> = (0..n * m).map(|i| z.data[i]).collect();
    let mut prog = LinearProgram::new(obj);
    for u in x_ball.extreme_points()? {
        for v in y_ball.extreme_points()? {
            let row: Vec<f64> = (0..n * m)
                .map(|k| u.get((k / m) as u32 + 1) * v.get((k % m) as u32 + 1))
                .collect();
            prog.push(row.clone(), Relation::Le, 1.0);
            prog.push(row, Relation::Ge, -1.0);
        }
    }
    let sol = lp::solve(&prog)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Numerical("tensor dual program did not solve".into()));
    }
    Ok(sol.value)
}

/// ∥x⊗y − u⊗v∥ for unit x, y against a vertex pair (u, v) of the factor
/// balls. When x and y are corner points at distance 2 from every other
/// vertex, this is 2 for every pair other than (x, y) itself.
pub fn tensor_denting_distance(
    x_ball: &VBall,
    y_ball: &VBall,
    x: &SparseVector,
    y: &SparseVector,
    u: &SparseVector,
    v: &SparseVector,
) -> Result<f64> {
    for (ball, p) in [(x_ball, x), (y_ball, y), (x_ball, u), (y_ball, v)] {
        let n = ball.gauge(p)?;
        if (n - 1.0).abs() > TOL {
            return Err(Error::NotOnSphere(n));
        }
    }
    let z = Matrix::outer(x, y, x_ball.dim(), y_ball.dim())
        .sub(&Matrix::outer(u, v, x_ball.dim(), y_ball.dim()));
    proj_norm(x_ball, y_ball, &z)
}

#[derive(Clone, Debug)]
pub struct TwoSliceWitness {
    /// An elementary tensor u₁⊗y or u₁⊗v₂.
    pub w: Matrix,
    /// Whether B(w) ≥ 1−α was verified (true by construction).
    pub in_slice: bool,
    /// ∥x⊗y − w∥ in the projective norm.
    pub dist: f64,
}

/// Picks the point of a factor-ball slice furthest from p, by running the
/// slice LP against every facet normal.
fn furthest_in_slice(
    ball: &VBall,
    p: &SparseVector,
    slice: &SliceSpec,
) -> Result<(SparseVector, f64)> {
    let mut best: Option<(SparseVector, f64)> = None;
    for g in ball.facet_normals()? {
        let opt = ball.slice_max_linear(slice, &g.neg())?;
        let d = g.pairing(p) + opt.value;
        if best.as_ref().map_or(true, |(_, bd)| d > bd + TOL) {
            best = Some((opt.argmax, d));
        }
    }
    Ok(best.expect("ball has facets"))
}

/// Two-stage slice refinement: starting from a norming pair for B, first
/// refines on the X factor to a point u₁ deep in B's slice and far from
/// x, then on the Y factor. If y itself sits in the second slice the
/// witness is u₁⊗y, otherwise u₁⊗v₂ with v₂ deep and far from y. Either
/// way B(w) > (1−α/2)² ≥ 1−α.
pub fn two_slice_witness(
    x_ball: &VBall,
    y_ball: &VBall,
    x: &SparseVector,
    y: &SparseVector,
    b: &Matrix,
    alpha: f64,
) -> Result<TwoSliceWitness> {
    check_size(x_ball, y_ball, b)?;
    if !(0.0..=1.0).contains(&alpha) || alpha <= 0.0 {
        return Err(Error::InvalidDescriptor(format!(
            "slice depth {alpha} outside (0, 1]"
        )));
    }
    // Normalize B to sup-norm 1 on extreme pairs. The extreme lists are
    // negation-closed, so the signed maximum already is the sup-norm.
    let mut sup = 0.0f64;
    let mut v0: Option<SparseVector> = None;
    for u in x_ball.extreme_points()? {
        for v in y_ball.extreme_points()? {
            let val = b.bilinear(u, v);
            if val > sup + TOL {
                sup = val;
                v0 = Some(v.clone());
            }
        }
    }
    let Some(v0) = v0 else {
        return Err(Error::InvalidDescriptor("zero bilinear form".into()));
    };
    let b = b.scale(1.0 / sup);

    // Stage 1: slice of B_X by B(·, v0), depth α/2.
    let f1 = SparseVector::from_entries(
        (1..=x_ball.dim() as u32).map(|i| (i, b.bilinear(&SparseVector::unit(i), &v0))),
    );
    let (u1, _) = furthest_in_slice(x_ball, x, &SliceSpec::new(f1, alpha / 2.0))?;

    // Stage 2: slice of B_Y by B(u1, ·), renormalized, depth α/2.
    let f2 = SparseVector::from_entries(
        (1..=y_ball.dim() as u32).map(|j| (j, b.bilinear(&u1, &SparseVector::unit(j)))),
    );
    let s = y_ball.support(&f2);
    let f2 = f2.scale(1.0 / s);
    let w_right = if f2.pairing(y) >= 1.0 - alpha / 2.0 {
        y.clone()
    } else {
        let (v2, _) = furthest_in_slice(y_ball, y, &SliceSpec::new(f2, alpha / 2.0))?;
        v2
    };
    let w = Matrix::outer(&u1, &w_right, x_ball.dim(), y_ball.dim());
    let in_slice = b.frob(&w) >= 1.0 - alpha - TOL;
    let dist = proj_norm(
        x_ball,
        y_ball,
        &Matrix::outer(x, y, x_ball.dim(), y_ball.dim()).sub(&w),
    )?;
    Ok(TwoSliceWitness { w, in_slice, dist })
}
