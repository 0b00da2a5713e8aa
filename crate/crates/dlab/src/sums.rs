//! Absolute sums X ⊕_N Y: the component-wise norm, a vertex model of the
//! sum ball for polyhedral data, and the transfer predicates for corner
//! points of ℓ₁- and ℓ∞-sums.

use crate::diag;
use crate::error::{Error, Result};
use crate::polytope::VBall;
use crate::space::{PExp, SpaceDescriptor};
use crate::vector::SparseVector;
use crate::TOL;

/// A point of a sum space, held component-wise. Embeds into a flat
/// SparseVector by offsetting the right component's coordinates.
#[derive(Clone, Debug)]
pub struct SumPoint {
    pub left: SparseVector,
    pub right: SparseVector,
}

impl SumPoint {
    pub fn new(left: SparseVector, right: SparseVector) -> Self {
        Self { left, right }
    }

    /// Splits a flat vector: coordinates 1..=left_dim go left, the rest
    /// are rebased to start at 1.
    pub fn split(x: &SparseVector, left_dim: usize) -> Self {
        let cut = left_dim as u32;
        let left = SparseVector::from_entries(x.iter().filter(|(i, _)| *i <= cut));
        let right =
            SparseVector::from_entries(x.iter().filter(|(i, _)| *i > cut).map(|(i, v)| (i - cut, v)));
        Self { left, right }
    }

    /// Inverse of `split`.
    pub fn join(&self, left_dim: usize) -> SparseVector {
        let cut = left_dim as u32;
        self.left
            .add(&SparseVector::from_entries(self.right.iter().map(|(i, v)| (i + cut, v))))
    }
}

fn parts(sum: &SpaceDescriptor) -> Result<(&SpaceDescriptor, &SpaceDescriptor, &SpaceDescriptor)> {
    match sum {
        SpaceDescriptor::AbsoluteSum {
            norm2d,
            left,
            right,
        } => Ok((norm2d, left, right)),
        _ => Err(Error::InvalidDescriptor(
            "descriptor is not an absolute sum".into(),
        )),
    }
}

/// ∥(x,y)∥ = N(∥x∥, ∥y∥).
pub fn sum_norm(sum: &SpaceDescriptor, p: &SumPoint) -> Result<f64> {
    let (norm2d, left, right) = parts(sum)?;
    let a = left.norm(&p.left)?;
    let b = right.norm(&p.right)?;
    norm2d.norm(&SparseVector::from_entries([(1, a), (2, b)]))
}

/// Vertex model of the sum ball: scaled vertex pairs (a·u, b·v) over the
/// nonnegative vertices (a,b) of the N-ball and the part-ball vertices.
pub fn sum_ball(sum: &SpaceDescriptor) -> Result<VBall> {
    let (norm2d, left, right) = parts(sum)?;
    let nball = norm2d.to_vball()?;
    let lball = left.to_vball()?;
    let rball = right.to_vball()?;
    let ld = left.dim();
    let dim = ld + right.dim();

    let mut weights: Vec<(f64, f64)> = Vec::new();
    for w in nball.extreme_points()? {
        let (a, b) = (w.get(1).abs(), w.get(2).abs());
        if !weights
            .iter()
            .any(|(wa, wb)| (wa - a).abs() <= TOL && (wb - b).abs() <= TOL)
        {
            weights.push((a, b));
        }
    }

    let mut gens: Vec<SparseVector> = Vec::new();
    let mut push = |g: SparseVector| {
        if !gens.iter().any(|h| h.approx_eq(&g, TOL)) {
            gens.push(g);
        }
    };
    for &(a, b) in &weights {
        for u in lball.extreme_points()? {
            for v in rball.extreme_points()? {
                let p = SumPoint::new(u.scale(a), v.scale(b));
                push(p.join(ld));
            }
        }
    }
    VBall::new(gens, dim)
}

/// The ∇ predicate extended off the unit sphere: non-unit vectors are
/// simply not ∇-points rather than errors.
fn nabla_on_sphere(space: &SpaceDescriptor, x: &SparseVector) -> Result<bool> {
    let n = space.norm(x)?;
    if (n - 1.0).abs() > TOL {
        return Ok(false);
    }
    Ok(diag::nabla_check(space, x, diag::DEFAULT_EPS)?.verdict == diag::Verdict::Holds)
}

/// Corner transfer into an ℓ₁-sum: the verdicts "x is a ∇-point of X" and
/// "(x,0) is a ∇-point of X ⊕₁ Y" should always agree.
pub fn check_l1_transfer(
    x_space: &SpaceDescriptor,
    x: &SparseVector,
    y_space: &SpaceDescriptor,
) -> Result<(bool, bool)> {
    let lhs = nabla_on_sphere(x_space, x)?;
    let sum = SpaceDescriptor::AbsoluteSum {
        norm2d: Box::new(SpaceDescriptor::l1(2)),
        left: Box::new(x_space.clone()),
        right: Box::new(y_space.clone()),
    };
    let point = SumPoint::new(x.clone(), SparseVector::zero()).join(x_space.dim());
    let rhs = nabla_on_sphere(&sum, &point)?;
    Ok((lhs, rhs))
}

/// Characterization of ∇-points of an ℓ∞-sum: (x,y) is ∇ iff one
/// component is a Daugavet point or both are ∇-points. Finite dimension
/// admits no Daugavet points, so only the ∇-conjunction survives.
pub fn check_linf_characterization(
    x_space: &SpaceDescriptor,
    x: &SparseVector,
    y_space: &SpaceDescriptor,
    y: &SparseVector,
) -> Result<(bool, bool)> {
    let sum = SpaceDescriptor::AbsoluteSum {
        norm2d: Box::new(SpaceDescriptor::linf(2)),
        left: Box::new(x_space.clone()),
        right: Box::new(y_space.clone()),
    };
    let point = SumPoint::new(x.clone(), y.clone()).join(x_space.dim());
    let lhs = nabla_on_sphere(&sum, &point)?;
    let rhs = nabla_on_sphere(x_space, x)? && nabla_on_sphere(y_space, y)?;
    Ok((lhs, rhs))
}

/// Refutes the ∇ property of a sphere point of a strictly convex sum of
/// polyhedral parts by exhibiting an extreme point of the sum ball at
/// distance < 2. The witness pairs each component with its nearest scaled
/// part-ball vertex; a component of norm zero is swapped against a pure
/// vertex on the other side.
pub fn l2sum_nabla_refutation(
    sum: &SpaceDescriptor,
    z: &SparseVector,
) -> Result<(SparseVector, f64)> {
    let (norm2d, left, right) = parts(sum)?;
    match norm2d {
        SpaceDescriptor::Lp { p: PExp::Finite(p), .. } if *p > 1.0 => {}
        _ => {
            return Err(Error::InvalidDescriptor(
                "refutation needs a strictly convex sum norm".into(),
            ))
        }
    }
    let n = sum.norm(z)?;
    if (n - 1.0).abs() > 1e-7 {
        return Err(Error::NotOnSphere(n));
    }
    let p = SumPoint::split(z, left.dim());
    let a = left.norm(&p.left)?;
    let b = right.norm(&p.right)?;

    let nearest = |ball: &VBall, x: &SparseVector, t: f64| -> Result<SparseVector> {
        let mut best: Option<(f64, SparseVector)> = None;
        for u in ball.extreme_points()? {
            let cand = u.scale(t);
            let d = ball.gauge(&x.sub(&cand))?;
            let better = match &best {
                None => true,
                Some((bd, bv)) => {
                    d < bd - TOL
                        || (d < bd + TOL && cand.cmp_lex(bv, ball.dim()) == std::cmp::Ordering::Less)
                }
            };
            if better {
                best = Some((d, cand));
            }
        }
        Ok(best.expect("part ball has vertices").1)
    };

    let lball = left.to_vball()?;
    let rball = right.to_vball()?;
    let witness = if a <= TOL {
        // Pure right component: any pure left vertex works.
        SumPoint::new(lball.extreme_points()?[0].clone(), SparseVector::zero())
    } else if b <= TOL {
        SumPoint::new(SparseVector::zero(), rball.extreme_points()?[0].clone())
    } else {
        SumPoint::new(nearest(&lball, &p.left, a)?, nearest(&rball, &p.right, b)?)
    };
    let w = witness.join(left.dim());
    let dist = sum_norm(sum, &SumPoint::split(&z.sub(&w), left.dim()))?;
    Ok((w, dist))
}
