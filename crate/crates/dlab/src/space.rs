//! Space descriptors and the norm-evaluation dispatch.

use crate::error::{Error, Result};
use crate::polytope::VBall;
use crate::renorm::RenormedSpace;
use crate::tensor::Matrix;
use crate::vector::SparseVector;
use crate::{sums, tensor};

/// The exponent of an ℓ_p norm. Infinity is an explicit tag, never a
/// large float.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PExp {
    Finite(f64),
    Inf,
}

impl PExp {
    pub fn validate(&self) -> Result<()> {
        match self {
            PExp::Finite(p) if *p >= 1.0 && p.is_finite() => Ok(()),
            PExp::Inf => Ok(()),
            PExp::Finite(p) => Err(Error::InvalidDescriptor(format!(
                "lp exponent {p} outside [1, inf]"
            ))),
        }
    }

    /// Conjugate exponent: 1/p + 1/q = 1.
    pub fn conjugate(&self) -> PExp {
        match *self {
            PExp::Inf => PExp::Finite(1.0),
            PExp::Finite(p) if p == 1.0 => PExp::Inf,
            PExp::Finite(p) => PExp::Finite(p / (p - 1.0)),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, PExp::Finite(p) if *p == 1.0)
    }
}

/// The ℓ_p norm of a finitely supported vector.
pub fn lp_norm(x: &SparseVector, p: PExp) -> f64 {
    match p {
        PExp::Inf => x.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max),
        PExp::Finite(p) if p == 1.0 => x.iter().map(|(_, v)| v.abs()).sum(),
        PExp::Finite(p) if p == 2.0 => x.iter().map(|(_, v)| v * v).sum::<f64>().sqrt(),
        PExp::Finite(p) => x
            .iter()
            .map(|(_, v)| v.abs().powf(p))
            .sum::<f64>()
            .powf(1.0 / p),
    }
}

/// Tagged description of a finite-dimensional normed space.
#[derive(Clone, Debug)]
pub enum SpaceDescriptor {
    Lp {
        p: PExp,
        dim: usize,
    },
    /// Unit ball given as the convex hull of a negation-closed generator
    /// list with nonempty interior.
    PolytopeV {
        generators: Vec<SparseVector>,
        dim: usize,
    },
    /// The renormed space whose ball is conv{±(e₁+2x) : x ∈ A ∩ B_base}.
    /// The base must be an Lp descriptor.
    Renormed {
        base: Box<SpaceDescriptor>,
    },
    /// Absolute sum left ⊕_N right, with N the (absolute, normalized)
    /// two-dimensional norm `norm2d`.
    AbsoluteSum {
        norm2d: Box<SpaceDescriptor>,
        left: Box<SpaceDescriptor>,
        right: Box<SpaceDescriptor>,
    },
    /// Projective tensor product of two polyhedral factors.
    ProjTensor {
        left: Box<SpaceDescriptor>,
        right: Box<SpaceDescriptor>,
    },
}

impl SpaceDescriptor {
    pub fn lp(p: PExp, dim: usize) -> Self {
        SpaceDescriptor::Lp { p, dim }
    }

    pub fn l1(dim: usize) -> Self {
        Self::lp(PExp::Finite(1.0), dim)
    }

    pub fn l2(dim: usize) -> Self {
        Self::lp(PExp::Finite(2.0), dim)
    }

    pub fn linf(dim: usize) -> Self {
        Self::lp(PExp::Inf, dim)
    }

    pub fn renormed(base: SpaceDescriptor) -> Self {
        SpaceDescriptor::Renormed {
            base: Box::new(base),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            SpaceDescriptor::Lp { dim, .. } | SpaceDescriptor::PolytopeV { dim, .. } => *dim,
            SpaceDescriptor::Renormed { base } => base.dim(),
            SpaceDescriptor::AbsoluteSum { left, right, .. } => left.dim() + right.dim(),
            SpaceDescriptor::ProjTensor { left, right } => left.dim() * right.dim(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SpaceDescriptor::Lp { p, dim } => {
                p.validate()?;
                if *dim == 0 {
                    return Err(Error::InvalidDescriptor("zero-dimensional space".into()));
                }
                Ok(())
            }
            SpaceDescriptor::PolytopeV { generators, dim } => {
                VBall::new(generators.clone(), *dim).map(|_| ())
            }
            SpaceDescriptor::Renormed { base } => {
                base.validate()?;
                match **base {
                    SpaceDescriptor::Lp { dim, .. } if dim >= 2 => Ok(()),
                    SpaceDescriptor::Lp { .. } => Err(Error::InvalidDescriptor(
                        "renormed base needs dimension >= 2".into(),
                    )),
                    _ => Err(Error::InvalidDescriptor(
                        "renormed base must be an lp descriptor".into(),
                    )),
                }
            }
            SpaceDescriptor::AbsoluteSum {
                norm2d,
                left,
                right,
            } => {
                norm2d.validate()?;
                left.validate()?;
                right.validate()?;
                if norm2d.dim() != 2 {
                    return Err(Error::InvalidDescriptor(
                        "sum norm must be two-dimensional".into(),
                    ));
                }
                validate_absolute_normalized(norm2d)
            }
            SpaceDescriptor::ProjTensor { left, right } => {
                left.validate()?;
                right.validate()
            }
        }
    }

    fn check_support(&self, x: &SparseVector) -> Result<()> {
        let dim = self.dim();
        let top = x.max_index();
        if top as usize > dim {
            return Err(Error::OutOfDimension { coord: top, dim });
        }
        Ok(())
    }

    /// The norm of x in the described space.
    pub fn norm(&self, x: &SparseVector) -> Result<f64> {
        self.check_support(x)?;
        match self {
            SpaceDescriptor::Lp { p, .. } => Ok(lp_norm(x, *p)),
            SpaceDescriptor::PolytopeV { .. } => self.to_vball()?.gauge(x),
            SpaceDescriptor::Renormed { .. } => {
                RenormedSpace::from_descriptor(self)?.rnorm(x)
            }
            SpaceDescriptor::AbsoluteSum { left, .. } => {
                let p = sums::SumPoint::split(x, left.dim());
                sums::sum_norm(self, &p)
            }
            SpaceDescriptor::ProjTensor { left, right } => {
                let z = Matrix::from_vector(x, left.dim(), right.dim());
                tensor::proj_norm(&left.to_vball()?, &right.to_vball()?, &z)
            }
        }
    }

    /// Finite vertex representation of the unit ball, when one exists.
    pub fn to_vball(&self) -> Result<VBall> {
        match self {
            SpaceDescriptor::Lp { p, dim } => match p {
                // Any one-dimensional lp space is the line with |·|.
                _ if *dim == 1 => {
                    VBall::new(vec![SparseVector::unit(1), SparseVector::unit(1).neg()], 1)
                }
                PExp::Finite(p) if *p == 1.0 => {
                    let mut gens = Vec::with_capacity(2 * dim);
                    for i in 1..=*dim as u32 {
                        gens.push(SparseVector::unit(i));
                        gens.push(SparseVector::unit(i).neg());
                    }
                    VBall::new(gens, *dim)
                }
                PExp::Inf => {
                    if *dim > 16 {
                        return Err(Error::SizeLimit(format!(
                            "sign-vector enumeration for linf dim {dim}"
                        )));
                    }
                    let mut gens = Vec::with_capacity(1 << dim);
                    for mask in 0u32..(1 << dim) {
                        gens.push(SparseVector::from_entries((1..=*dim as u32).map(|i| {
                            (i, if mask >> (i - 1) & 1 == 1 { -1.0 } else { 1.0 })
                        })));
                    }
                    VBall::new(gens, *dim)
                }
                _ => Err(Error::NotPolyhedral),
            },
            SpaceDescriptor::PolytopeV { generators, dim } => {
                VBall::new(generators.clone(), *dim)
            }
            SpaceDescriptor::Renormed { .. } => {
                RenormedSpace::from_descriptor(self)?.generators()
            }
            SpaceDescriptor::AbsoluteSum { .. } => sums::sum_ball(self),
            SpaceDescriptor::ProjTensor { left, right } => {
                let lb = left.to_vball()?;
                let rb = right.to_vball()?;
                let (n, m) = (left.dim(), right.dim());
                let mut gens = Vec::new();
                for u in lb.extreme_points()? {
                    for v in rb.extreme_points()? {
                        gens.push(Matrix::outer(u, v, n, m).to_sparse());
                    }
                }
                VBall::new(gens, n * m)
            }
        }
    }

    /// Canonical one-line rendering for reports.
    pub fn render(&self) -> String {
        match self {
            SpaceDescriptor::Lp { p, dim } => match p {
                PExp::Inf => format!("linf^{dim}"),
                PExp::Finite(p) => format!("l{p}^{dim}"),
            },
            SpaceDescriptor::PolytopeV { generators, dim } => {
                format!("polytope(dim {dim}, {} generators)", generators.len())
            }
            SpaceDescriptor::Renormed { base } => format!("renorm({})", base.render()),
            SpaceDescriptor::AbsoluteSum {
                norm2d,
                left,
                right,
            } => format!(
                "sum[{}]({}, {})",
                norm2d.render(),
                left.render(),
                right.render()
            ),
            SpaceDescriptor::ProjTensor { left, right } => {
                format!("tensor({}, {})", left.render(), right.render())
            }
        }
    }
}

/// Finite sampling check that a 2-dimensional norm is absolute and
/// normalized: N(a,b)=N(|a|,|b|), N(1,0)=N(0,1)=1.
fn validate_absolute_normalized(norm2d: &SpaceDescriptor) -> Result<()> {
    let e1 = SparseVector::unit(1);
    let e2 = SparseVector::unit(2);
    for u in [&e1, &e2] {
        let n = norm2d.norm(u)?;
        if (n - 1.0).abs() > 1e-7 {
            return Err(Error::InvalidDescriptor(format!(
                "sum norm is not normalized: N(basis) = {n}"
            )));
        }
    }
    let grid = [-1.0, -0.6, -0.3, 0.2, 0.7, 1.0];
    for &a in &grid {
        for &b in &grid {
            let v = SparseVector::from_entries([(1, a), (2, b)]);
            let va = SparseVector::from_entries([(1, a.abs()), (2, b.abs())]);
            if (norm2d.norm(&v)? - norm2d.norm(&va)?).abs() > 1e-7 {
                return Err(Error::InvalidDescriptor(
                    "sum norm is not absolute".into(),
                ));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l1_norm_example() {
        let space = SpaceDescriptor::l1(3);
        let x = SparseVector::from_entries([(1, 1.0), (2, 1.0)]);
        assert_eq!(space.norm(&x).unwrap(), 2.0);
    }

    #[test]
    fn renormed_examples() {
        let space = SpaceDescriptor::renormed(SpaceDescriptor::l2(4));
        let x = SparseVector::from_entries([(1, 1.0), (2, 2.0)]);
        assert!((space.norm(&x).unwrap() - 1.0).abs() < 1e-12);
        let y = SparseVector::from_entries([(3, -2.0)]);
        assert!((space.norm(&y).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn out_of_dimension_is_an_error() {
        let space = SpaceDescriptor::l1(2);
        let x = SparseVector::unit(5);
        assert!(matches!(
            space.norm(&x),
            Err(Error::OutOfDimension { coord: 5, dim: 2 })
        ));
    }

    #[test]
    fn asymmetric_generators_rejected() {
        let bad = SpaceDescriptor::PolytopeV {
            generators: vec![SparseVector::unit(1), SparseVector::unit(2)],
            dim: 2,
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn conjugate_exponents() {
        assert_eq!(PExp::Finite(1.0).conjugate(), PExp::Inf);
        assert_eq!(PExp::Inf.conjugate(), PExp::Finite(1.0));
        assert_eq!(PExp::Finite(2.0).conjugate(), PExp::Finite(2.0));
    }
}
