//! A renorming of ℓ_pⁿ whose unit ball is conv{±(e₁+2x)} with x ranging
//! over the nonnegative part of the base ball supported on coordinates
//! ≥ 2. Closed-form primal and dual norms, the dual-ball decomposition,
//! and the witness constructions that realize distance 2 from e₁ and e₁*.

use crate::error::{Error, Result};
use crate::polytope::VBall;
use crate::space::{lp_norm, PExp, SpaceDescriptor};
use crate::vector::{split_parts, SparseVector};
use crate::TOL;

#[derive(Clone, Copy, Debug)]
pub struct RenormedSpace {
    pub base_p: PExp,
    pub dim: usize,
}

/// A dual-ball point written as λ(e₁*−y*) + (1−λ)·½(x*−y*), with x*, y*
/// nonnegative, disjointly supported off coordinate 1, base-dual norm ≤ 1.
#[derive(Clone, Debug)]
pub struct DualDecomposition {
    pub lambda: f64,
    pub xstar: SparseVector,
    pub ystar: SparseVector,
}

impl DualDecomposition {
    pub fn recompose(&self) -> SparseVector {
        let e1 = SparseVector::unit(1);
        e1.sub(&self.ystar)
            .scale(self.lambda)
            .add(&self.xstar.sub(&self.ystar).scale((1.0 - self.lambda) / 2.0))
    }
}

impl RenormedSpace {
    pub fn new(base_p: PExp, dim: usize) -> Result<Self> {
        base_p.validate()?;
        if dim < 2 {
            return Err(Error::InvalidDescriptor(
                "renormed space needs dimension >= 2".into(),
            ));
        }
        Ok(Self { base_p, dim })
    }

    pub fn from_descriptor(space: &SpaceDescriptor) -> Result<Self> {
        match space {
            SpaceDescriptor::Renormed { base } => match **base {
                SpaceDescriptor::Lp { p, dim } => Self::new(p, dim),
                _ => Err(Error::InvalidDescriptor(
                    "renormed base must be an lp descriptor".into(),
                )),
            },
            _ => Err(Error::InvalidDescriptor(
                "descriptor is not a renormed space".into(),
            )),
        }
    }

    pub fn descriptor(&self) -> SpaceDescriptor {
        SpaceDescriptor::renormed(SpaceDescriptor::lp(self.base_p, self.dim))
    }

    fn check_dim(&self, x: &SparseVector) -> Result<()> {
        if x.max_index() as usize > self.dim {
            return Err(Error::OutOfDimension {
                coord: x.max_index(),
                dim: self.dim,
            });
        }
        Ok(())
    }

    fn base_norm(&self, x: &SparseVector) -> f64 {
        lp_norm(x, self.base_p)
    }

    fn base_dual_norm(&self, f: &SparseVector) -> f64 {
        lp_norm(f, self.base_p.conjugate())
    }

    /// The renormed norm: max{|c|, |c−∥x₊∥|, |c+∥x₋∥|, ½(∥x₊∥+∥x₋∥)}
    /// where x = c·e₁ + x₊ − x₋ and norms are taken in the base space.
    pub fn rnorm(&self, x: &SparseVector) -> Result<f64> {
        self.check_dim(x)?;
        let (c, plus, minus) = split_parts(x);
        let np = self.base_norm(&plus);
        let nm = self.base_norm(&minus);
        Ok([
            c.abs(),
            (c - np).abs(),
            (c + nm).abs(),
            0.5 * (np + nm),
        ]
        .into_iter()
        .fold(0.0, f64::max))
    }

    /// The dual norm: max{|f(e₁)+2∥f₊∥|, |f(e₁)−2∥f₋∥|} with base-dual
    /// norms of the positive and negative parts off coordinate 1.
    pub fn rnorm_dual(&self, f: &SparseVector) -> Result<f64> {
        self.check_dim(f)?;
        let (c, plus, minus) = split_parts(f);
        let np = self.base_dual_norm(&plus);
        let nm = self.base_dual_norm(&minus);
        Ok(f64::max((c + 2.0 * np).abs(), (c - 2.0 * nm).abs()))
    }

    /// Writes a dual-ball point z* as λ(e₁*−y*) + (1−λ)·½(x*−y*), with
    /// λ = z*(e₁). The caller must negate first if z*(e₁) < 0.
    pub fn decompose_dual(&self, zstar: &SparseVector) -> Result<DualDecomposition> {
        self.check_dim(zstar)?;
        let nd = self.rnorm_dual(zstar)?;
        if nd > 1.0 + TOL {
            return Err(Error::NotInBall(nd));
        }
        let lambda = zstar.get(1);
        if lambda < -TOL {
            return Err(Error::NegativeFirstCoordinate);
        }
        let lambda = lambda.clamp(0.0, 1.0);
        let (_, plus, minus) = split_parts(zstar);
        let (xstar, ystar) = if lambda >= 1.0 - TOL {
            (SparseVector::zero(), minus)
        } else {
            (
                plus.scale(2.0 / (1.0 - lambda)),
                minus.scale(2.0 / (1.0 + lambda)),
            )
        };
        Ok(DualDecomposition {
            lambda,
            xstar,
            ystar,
        })
    }

    /// Completes a ball point z to w = z + 2λa·e_k with λ = (1+z(e₁))/2,
    /// the top-up a chosen so the positive part reaches base norm 2λ.
    /// Contract: the renormed distance from e₁ to w is exactly 2.
    pub fn primal_witness(&self, z: &SparseVector, k: u32) -> Result<SparseVector> {
        self.check_dim(z)?;
        let p = match self.base_p {
            PExp::Finite(p) => p,
            PExp::Inf => {
                return Err(Error::InvalidDescriptor(
                    "primal witness needs a finite base exponent".into(),
                ))
            }
        };
        let n = self.rnorm(z)?;
        if n > 1.0 + TOL {
            return Err(Error::NotInBall(n));
        }
        if k < 2 || z.get(k) != 0.0 {
            return Err(Error::BadIndex(k));
        }
        if k as usize > self.dim {
            return Err(Error::OutOfDimension {
                coord: k,
                dim: self.dim,
            });
        }
        let lambda = (1.0 + z.get(1)) / 2.0;
        if lambda <= TOL {
            return Ok(z.clone());
        }
        let (_, plus, _) = split_parts(z);
        let x = plus.scale(1.0 / (2.0 * lambda));
        let a = (1.0 - self.base_norm(&x).powf(p)).max(0.0).powf(1.0 / p);
        Ok(z.add(&SparseVector::unit(k).scale(2.0 * lambda * a)))
    }

    /// Completes a dual-ball point z* (with z*(e₁) ≥ 0) to
    /// w* = z* + ((1−λ)/2)a·e_{2k}* − ((1+λ)/2)b·e_{2k+1}*.
    /// Contract: both renormed dual distances from ±w* to e₁* are 2.
    pub fn dual_witness(&self, zstar: &SparseVector, k: u32) -> Result<SparseVector> {
        self.check_dim(zstar)?;
        let nd = self.rnorm_dual(zstar)?;
        if nd > 1.0 + TOL {
            return Err(Error::NotInBall(nd));
        }
        let lambda = zstar.get(1);
        if lambda < -TOL {
            return Err(Error::NegativeFirstCoordinate);
        }
        let lambda = lambda.clamp(0.0, 1.0);
        let (i, j) = (2 * k, 2 * k + 1);
        if k < 1 || zstar.get(i) != 0.0 || zstar.get(j) != 0.0 {
            return Err(Error::BadIndex(k));
        }
        if j as usize > self.dim {
            return Err(Error::OutOfDimension {
                coord: j,
                dim: self.dim,
            });
        }
        let (_, plus, minus) = split_parts(zstar);
        let xstar = if lambda >= 1.0 - TOL {
            SparseVector::zero()
        } else {
            plus.scale(2.0 / (1.0 - lambda))
        };
        let ystar = minus.scale(2.0 / (1.0 + lambda));
        let a = self.dual_topup(&xstar);
        let b = self.dual_topup(&ystar);
        Ok(zstar
            .add(&SparseVector::unit(i).scale((1.0 - lambda) / 2.0 * a))
            .sub(&SparseVector::unit(j).scale((1.0 + lambda) / 2.0 * b)))
    }

    /// Coefficient t such that a dual-ball vector gains base-dual norm
    /// exactly 1 after appending t on a fresh coordinate.
    fn dual_topup(&self, f: &SparseVector) -> f64 {
        match self.base_p.conjugate() {
            PExp::Inf => 1.0,
            PExp::Finite(q) => (1.0 - lp_norm(f, PExp::Finite(q)).powf(q))
                .max(0.0)
                .powf(1.0 / q),
        }
    }

    /// Finite vertex list of the renormed ball; exists exactly when the
    /// base ball is itself a polytope (p = 1 or ∞).
    pub fn generators(&self) -> Result<VBall> {
        let n = self.dim;
        let e1 = SparseVector::unit(1);
        let mut gens = vec![e1.clone(), e1.neg()];
        match self.base_p {
            PExp::Finite(p) if p == 1.0 => {
                for j in 2..=n as u32 {
                    let g = e1.add(&SparseVector::unit(j).scale(2.0));
                    gens.push(g.neg());
                    gens.push(g);
                }
            }
            PExp::Inf => {
                let tail = n - 1;
                for mask in 1u32..(1 << tail) {
                    let g = e1.add(&SparseVector::from_entries(
                        (0..tail as u32)
                            .filter(|b| mask >> b & 1 == 1)
                            .map(|b| (b + 2, 2.0)),
                    ));
                    gens.push(g.neg());
                    gens.push(g);
                }
            }
            _ => return Err(Error::NotPolyhedral),
        }
        VBall::new(gens, n)
    }
}

/// Rebuilds a space around a distinguished corner: the last coordinate is
/// split off as an ℓ₁ summand, making its unit vector a ∇-point of the
/// result.
pub fn corner_renorm(space: &SpaceDescriptor) -> Result<SpaceDescriptor> {
    let (p, dim) = match space {
        SpaceDescriptor::Lp { p, dim } => (*p, *dim),
        _ => {
            return Err(Error::InvalidDescriptor(
                "corner renorming is defined for lp descriptors".into(),
            ))
        }
    };
    if dim < 2 {
        return Err(Error::InvalidDescriptor(
            "corner renorming needs dimension >= 2".into(),
        ));
    }
    Ok(SpaceDescriptor::AbsoluteSum {
        norm2d: Box::new(SpaceDescriptor::l1(2)),
        left: Box::new(SpaceDescriptor::lp(p, dim - 1)),
        right: Box::new(SpaceDescriptor::l1(1)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l2_space(dim: usize) -> RenormedSpace {
        RenormedSpace::new(PExp::Finite(2.0), dim).unwrap()
    }

    #[test]
    fn rnorm_examples() {
        let s = l2_space(4);
        assert_eq!(s.rnorm(&SparseVector::unit(1)).unwrap(), 1.0);
        // λx − (1−λ)(e₁+2y) with x = e₂, y = e₃, λ = 0.3 sits on the sphere.
        let v = SparseVector::from_entries([(2, 0.3), (1, -0.7), (3, -1.4)]);
        assert!((s.rnorm(&v).unwrap() - 1.0).abs() < 1e-12);
        let w = SparseVector::from_entries([(3, -2.0)]);
        assert!((s.rnorm(&w).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rnorm_dual_examples() {
        let s = l2_space(4);
        assert_eq!(s.rnorm_dual(&SparseVector::unit(1)).unwrap(), 1.0);
        assert_eq!(s.rnorm_dual(&SparseVector::unit(2)).unwrap(), 2.0);
        let f = SparseVector::from_entries([(1, 1.0), (2, -1.0)]);
        assert_eq!(s.rnorm_dual(&f).unwrap(), 1.0);
    }

    #[test]
    fn dual_decomposition_examples() {
        let s = l2_space(4);
        let z = SparseVector::from_entries([(1, 0.5), (2, 0.25), (3, -0.25)]);
        let d = s.decompose_dual(&z).unwrap();
        assert!((d.lambda - 0.5).abs() < 1e-12);
        assert!(d.xstar.approx_eq(&SparseVector::unit(2), 1e-12));
        assert!(d
            .ystar
            .approx_eq(&SparseVector::unit(3).scale(1.0 / 3.0), 1e-12));
        assert!(d.recompose().approx_eq(&z, 1e-12));

        let z = SparseVector::from_entries([(1, 1.0), (2, -0.7)]);
        let d = s.decompose_dual(&z).unwrap();
        assert_eq!(d.lambda, 1.0);
        assert!(d.xstar.is_zero());
        assert!(d
            .ystar
            .approx_eq(&SparseVector::unit(2).scale(0.7), 1e-12));
        assert!(d.recompose().approx_eq(&z, 1e-12));

        let z = SparseVector::from_entries([(2, 0.5), (3, -0.5)]);
        let d = s.decompose_dual(&z).unwrap();
        assert_eq!(d.lambda, 0.0);
        assert!(d.xstar.approx_eq(&SparseVector::unit(2), 1e-12));
        assert!(d.ystar.approx_eq(&SparseVector::unit(3), 1e-12));

        let neg = SparseVector::from_entries([(1, -0.5)]);
        assert!(matches!(
            s.decompose_dual(&neg),
            Err(Error::NegativeFirstCoordinate)
        ));
        let big = SparseVector::unit(2).scale(0.8);
        assert!(matches!(s.decompose_dual(&big), Err(Error::NotInBall(_))));
    }

    #[test]
    fn primal_witness_examples() {
        let s = l2_space(6);
        let w = s.primal_witness(&SparseVector::zero(), 4).unwrap();
        assert!(w.approx_eq(&SparseVector::unit(4), 1e-12));

        let w = s.primal_witness(&SparseVector::unit(1), 3).unwrap();
        assert!(w.approx_eq(
            &SparseVector::from_entries([(1, 1.0), (3, 2.0)]),
            1e-12
        ));

        let z = SparseVector::unit(2).scale(0.5);
        let w = s.primal_witness(&z, 5).unwrap();
        let want = SparseVector::from_entries([(2, 0.5), (5, 3.0f64.sqrt() / 2.0)]);
        assert!(w.approx_eq(&want, 1e-12));

        for w in [
            SparseVector::unit(4),
            SparseVector::from_entries([(1, 1.0), (3, 2.0)]),
            s.primal_witness(&z, 5).unwrap(),
        ] {
            let d = s.rnorm(&SparseVector::unit(1).sub(&w)).unwrap();
            assert!((d - 2.0).abs() < 1e-12, "distance {d}");
        }

        assert!(matches!(
            s.primal_witness(&SparseVector::unit(2), 2),
            Err(Error::BadIndex(2))
        ));
    }

    #[test]
    fn dual_witness_examples() {
        let s = l2_space(8);
        let w = s.dual_witness(&SparseVector::zero(), 3).unwrap();
        let want =
            SparseVector::from_entries([(6, 0.5), (7, -0.5)]);
        assert!(w.approx_eq(&want, 1e-12));

        let e1 = SparseVector::unit(1);
        let w = s.dual_witness(&e1, 2).unwrap();
        let want = SparseVector::from_entries([(1, 1.0), (5, -1.0)]);
        assert!(w.approx_eq(&want, 1e-12));

        for w in [
            s.dual_witness(&SparseVector::zero(), 3).unwrap(),
            s.dual_witness(&e1, 2).unwrap(),
            s.dual_witness(
                &SparseVector::from_entries([(2, 0.5), (3, -0.5)]),
                2,
            )
            .unwrap(),
        ] {
            let d1 = s.rnorm_dual(&e1.sub(&w)).unwrap();
            let d2 = s.rnorm_dual(&e1.add(&w)).unwrap();
            assert!((d1 - 2.0).abs() < 1e-12, "distance {d1}");
            assert!((d2 - 2.0).abs() < 1e-12, "distance {d2}");
        }
    }

    #[test]
    fn generator_lists() {
        let s = RenormedSpace::new(PExp::Finite(1.0), 3).unwrap();
        let b = s.generators().unwrap();
        assert_eq!(b.generators().len(), 6);

        let s = RenormedSpace::new(PExp::Inf, 3).unwrap();
        let b = s.generators().unwrap();
        // ±e1, ±(e1+2e2), ±(e1+2e3), ±(e1+2e2+2e3)
        assert_eq!(b.generators().len(), 8);
        let full = SparseVector::from_entries([(1, 1.0), (2, 2.0), (3, 2.0)]);
        assert!(b.generators().iter().any(|g| g.approx_eq(&full, 1e-12)));

        assert!(matches!(
            l2_space(3).generators(),
            Err(Error::NotPolyhedral)
        ));
    }

    #[test]
    fn corner_renorm_shapes() {
        let s = corner_renorm(&SpaceDescriptor::l2(2)).unwrap();
        assert_eq!(s.dim(), 2);
        // ℝ⊕₁ℝ carries the ℓ₁² norm.
        let x = SparseVector::from_entries([(1, 0.5), (2, -0.5)]);
        assert!((s.norm(&x).unwrap() - 1.0).abs() < 1e-9);

        let s = corner_renorm(&SpaceDescriptor::l2(3)).unwrap();
        assert_eq!(s.dim(), 3);
        let x = SparseVector::from_entries([(1, 3.0), (2, 4.0), (3, -1.0)]);
        assert!((s.norm(&x).unwrap() - 6.0).abs() < 1e-9);
    }

    #[test]
    fn formula_matches_gauge_on_l1_base() {
        let s = RenormedSpace::new(PExp::Finite(1.0), 4).unwrap();
        let ball = s.generators().unwrap();
        let pts = [
            SparseVector::from_entries([(1, 0.4), (2, -1.0), (4, 0.3)]),
            SparseVector::from_entries([(2, 1.0), (3, 1.0)]),
            SparseVector::unit(3).scale(-2.0),
        ];
        for x in pts {
            let f = s.rnorm(&x).unwrap();
            let g = ball.gauge(&x).unwrap();
            assert!((f - g).abs() < 1e-9, "formula {f} gauge {g} at {x}");
        }
    }
}
