//! V-represented unit balls: gauge, support function, extreme points,
//! facet enumeration, and linear optimization over slices.

use std::sync::OnceLock;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::lp::{self, LinearProgram, LpStatus, Relation};
use crate::vector::SparseVector;
use crate::TOL;

/// Hard caps for the brute-force facet enumeration.
const FACET_DIM_CAP: usize = 6;
const FACET_EXTREME_CAP: usize = 24;

/// A slice S(f, α) = {y in the ball : f(y) ≥ 1−α}.
#[derive(Clone, Debug)]
pub struct SliceSpec {
    pub functional: SparseVector,
    pub alpha: f64,
}

impl SliceSpec {
    pub fn new(functional: SparseVector, alpha: f64) -> Self {
        Self { functional, alpha }
    }
}

/// The outcome of a linear optimization over a closed slice.
#[derive(Clone, Debug)]
pub struct SliceOptimum {
    pub value: f64,
    pub argmax: SparseVector,
    /// True when the optimum sits on the cut f(y) = 1−α itself, where the
    /// closed slice and the open slice of the same depth may differ.
    pub on_boundary: bool,
}

/// The unit ball conv(generators) of a polyhedral normed space.
#[derive(Clone, Debug)]
pub struct VBall {
    generators: Vec<SparseVector>,
    dim: usize,
    extreme: OnceLock<Result<Vec<SparseVector>>>,
    facets: OnceLock<Result<Vec<SparseVector>>>,
}

impl VBall {
    /// Builds a ball, checking negation-closure and full dimensionality.
    pub fn new(generators: Vec<SparseVector>, dim: usize) -> Result<Self> {
        if generators.is_empty() || dim == 0 {
            return Err(Error::InvalidDescriptor("empty generator list".into()));
        }
        for g in &generators {
            if g.max_index() as usize > dim {
                return Err(Error::OutOfDimension {
                    coord: g.max_index(),
                    dim,
                });
            }
            let neg = g.neg();
            if !generators.iter().any(|h| h.approx_eq(&neg, TOL)) {
                return Err(Error::InvalidDescriptor(format!(
                    "generator set is not negation-closed (missing -({g}))"
                )));
            }
        }
        let mat = nalgebra::DMatrix::from_fn(generators.len(), dim, |r, c| {
            generators[r].get(c as u32 + 1)
        });
        if mat.rank(TOL) < dim {
            return Err(Error::InvalidDescriptor(
                "generators do not span the ambient space".into(),
            ));
        }
        Ok(Self {
            generators,
            dim,
            extreme: OnceLock::new(),
            facets: OnceLock::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[SparseVector] {
        &self.generators
    }

    fn check_dim(&self, x: &SparseVector) -> Result<()> {
        let top = x.max_index();
        if top as usize > self.dim {
            return Err(Error::OutOfDimension {
                coord: top,
                dim: self.dim,
            });
        }
        Ok(())
    }

    /// The Minkowski functional: the least t ≥ 0 with x ∈ t·conv(generators).
    /// This is the norm whose unit ball is the hull.
    pub fn gauge(&self, x: &SparseVector) -> Result<f64> {
        self.check_dim(x)?;
        if x.is_zero() {
            return Ok(0.0);
        }
        // minimize Σc  s.t.  Σ cᵢ gᵢ = x,  c ≥ 0
        let k = self.generators.len();
        let mut prog = LinearProgram::with_nonneg(vec![-1.0; k]);
        for coord in 1..=self.dim as u32 {
            let row = self.generators.iter().map(|g| g.get(coord)).collect();
            prog.push(row, Relation::Eq, x.get(coord));
        }
        let sol = lp::solve(&prog)?;
        match sol.status {
            LpStatus::Optimal => Ok(-sol.value),
            // The hull has nonempty interior, so every x is reachable.
            _ => Err(Error::Numerical(
                "gauge program unexpectedly infeasible".into(),
            )),
        }
    }

    /// sup of f over the ball = max of f over the generators.
    pub fn support(&self, f: &SparseVector) -> f64 {
        self.generators
            .iter()
            .map(|g| f.pairing(g))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Generators that are genuine vertices of the hull: each fails the LP
    /// membership test in the hull of the remaining generators. In finite
    /// dimension this list doubles as the denting set.
    pub fn extreme_points(&self) -> Result<&[SparseVector]> {
        self.extreme
            .get_or_init(|| self.compute_extreme())
            .as_deref()
            .map_err(Clone::clone)
    }

    fn compute_extreme(&self) -> Result<Vec<SparseVector>> {
        // Deduplicate first so a repeated vertex is not "in the hull of
        // the others" by way of its own copy.
        let mut uniq: Vec<&SparseVector> = Vec::new();
        for g in &self.generators {
            if !uniq.iter().any(|h| h.approx_eq(g, TOL)) {
                uniq.push(g);
            }
        }
        let mut out = Vec::new();
        for (i, g) in uniq.iter().enumerate() {
            let others: Vec<&SparseVector> = uniq
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, h)| *h)
                .collect();
            if !in_hull(&others, g, self.dim)? {
                out.push((*g).clone());
            }
        }
        Ok(out)
    }

    /// Vertices of the dual ball: every f with support 1 whose contact set
    /// spans an affine hyperplane of the hull. Brute-force hyperplane
    /// fitting over d-subsets of extreme points, under hard size caps.
    pub fn facet_normals(&self) -> Result<&[SparseVector]> {
        self.facets
            .get_or_init(|| self.compute_facets())
            .as_deref()
            .map_err(Clone::clone)
    }

    fn compute_facets(&self) -> Result<Vec<SparseVector>> {
        let d = self.dim;
        if d > FACET_DIM_CAP {
            return Err(Error::SizeLimit(format!(
                "facet enumeration in dimension {d} (cap {FACET_DIM_CAP})"
            )));
        }
        let ext = self.extreme_points()?;
        if ext.len() > FACET_EXTREME_CAP {
            return Err(Error::SizeLimit(format!(
                "facet enumeration over {} vertices (cap {FACET_EXTREME_CAP})",
                ext.len()
            )));
        }
        let dense: Vec<Vec<f64>> = ext.iter().map(|g| g.to_dense(d)).collect();
        let mut normals: Vec<SparseVector> = Vec::new();
        for subset in (0..ext.len()).combinations(d) {
            // Solve f·g = 1 on the subset; facets miss the origin, so the
            // vertices of a genuine facet are linearly independent.
            let a = nalgebra::DMatrix::from_fn(d, d, |r, c| dense[subset[r]][c]);
            let b = nalgebra::DVector::from_element(d, 1.0);
            let Some(f) = a.lu().solve(&b) else {
                continue;
            };
            let f = SparseVector::from_entries(
                f.iter()
                    .enumerate()
                    .map(|(i, &v)| (i as u32 + 1, if v.abs() <= TOL { 0.0 } else { v })),
            );
            // Supporting at level exactly 1.
            if ext.iter().any(|g| f.pairing(g) > 1.0 + TOL) {
                continue;
            }
            if normals.iter().any(|h| h.approx_eq(&f, 1e-7)) {
                continue;
            }
            normals.push(f);
        }
        normals.sort_by(|a, b| a.cmp_lex(b, d));
        Ok(normals)
    }

    /// Maximizes a linear objective over the closed slice, via an LP in
    /// convex coefficients on the vertices.
    pub fn slice_max_linear(
        &self,
        slice: &SliceSpec,
        objective: &SparseVector,
    ) -> Result<SliceOptimum> {
        self.check_dim(&slice.functional)?;
        self.check_dim(objective)?;
        let cut = 1.0 - slice.alpha;
        if self.support(&slice.functional) < cut - TOL {
            return Err(Error::EmptySlice);
        }
        let ext = self.extreme_points()?;
        let k = ext.len();
        let obj: Vec<f64> = ext.iter().map(|g| objective.pairing(g)).collect();
        let mut prog = LinearProgram::with_nonneg(obj);
        prog.push(vec![1.0; k], Relation::Eq, 1.0);
        prog.push(
            ext.iter().map(|g| slice.functional.pairing(g)).collect(),
            Relation::Ge,
            cut,
        );
        let sol = lp::solve(&prog)?;
        if sol.status != LpStatus::Optimal {
            return Err(Error::EmptySlice);
        }
        let mut argmax = SparseVector::zero();
        for (c, g) in sol.point.iter().zip(ext) {
            if *c > TOL {
                argmax = argmax.add(&g.scale(*c));
            }
        }
        let depth = slice.functional.pairing(&argmax);
        Ok(SliceOptimum {
            value: sol.value,
            argmax,
            on_boundary: (depth - cut).abs() <= TOL,
        })
    }
}

/// LP feasibility test: is x a convex combination of the given points?
fn in_hull(points: &[&SparseVector], x: &SparseVector, dim: usize) -> Result<bool> {
    let k = points.len();
    if k == 0 {
        return Ok(x.is_zero());
    }
    let mut prog = LinearProgram::with_nonneg(vec![0.0; k]);
    prog.push(vec![1.0; k], Relation::Eq, 1.0);
    for coord in 1..=dim as u32 {
        let row = points.iter().map(|g| g.get(coord)).collect();
        prog.push(row, Relation::Eq, x.get(coord));
    }
    Ok(lp::solve(&prog)?.status == LpStatus::Optimal)
}
