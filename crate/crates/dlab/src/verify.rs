//! The built-in identity suite: every closed-form value the library
//! promises, recomputed live and compared against its pinned expectation.
//! Each row is an exact numeric identity; boolean verdicts are encoded
//! as 1/0 and vector expectations as a max-coordinate deviation of 0.

use crate::diag::{self, Verdict};
use crate::error::Result;
use crate::polytope::SliceSpec;
use crate::renorm::{corner_renorm, RenormedSpace};
use crate::space::{PExp, SpaceDescriptor};
use crate::sums;
use crate::tensor::{self, Matrix};
use crate::vector::SparseVector;

#[derive(Clone, Debug)]
pub struct VerifyRow {
    pub id: &'static str,
    pub anchor: &'static str,
    pub expected: f64,
    pub computed: f64,
    pub pass: bool,
}

fn ev(v: &[(u32, f64)]) -> SparseVector {
    SparseVector::from_entries(v.iter().copied())
}

fn verdict_as_f64(v: Verdict) -> f64 {
    if v == Verdict::Holds {
        1.0
    } else {
        0.0
    }
}

type RowFn = fn() -> Result<f64>;

struct RowSpec {
    id: &'static str,
    anchor: &'static str,
    expected: f64,
    run: RowFn,
}

fn rows() -> Vec<RowSpec> {
    vec![
        RowSpec {
            id: "renorm-sphere-e1-plus-2e2",
            anchor: "every e1+2x with x in the nonneg base ball lies on the renormed sphere",
            expected: 1.0,
            run: || {
                RenormedSpace::new(PExp::Finite(2.0), 4)?.rnorm(&ev(&[(1, 1.0), (2, 2.0)]))
            },
        },
        RowSpec {
            id: "renorm-segment-on-sphere",
            anchor: "the segment from x to -(e1+2y) stays on the renormed sphere",
            expected: 1.0,
            run: || {
                RenormedSpace::new(PExp::Finite(2.0), 4)?
                    .rnorm(&ev(&[(2, 0.3), (1, -0.7), (3, -1.4)]))
            },
        },
        RowSpec {
            id: "renorm-gauge-e2-in-segment-ball",
            anchor: "e2 is on the sphere of conv{±e1, ±(e1+2e2)}",
            expected: 1.0,
            run: || {
                RenormedSpace::new(PExp::Finite(1.0), 2)?
                    .generators()?
                    .gauge(&SparseVector::unit(2))
            },
        },
        RowSpec {
            id: "renorm-support-e2star",
            anchor: "functionals vanishing at e1 and nonneg on the cone have renormed dual norm 2",
            expected: 2.0,
            run: || {
                Ok(RenormedSpace::new(PExp::Finite(1.0), 2)?
                    .generators()?
                    .support(&SparseVector::unit(2)))
            },
        },
        RowSpec {
            id: "renorm-dual-e2star",
            anchor: "dual-norm formula on a coordinate functional off e1",
            expected: 2.0,
            run: || RenormedSpace::new(PExp::Finite(2.0), 4)?.rnorm_dual(&SparseVector::unit(2)),
        },
        RowSpec {
            id: "renorm-dual-e1star-minus-e2star",
            anchor: "e1* - x* is norm-one for every x* in the nonneg dual ball",
            expected: 1.0,
            run: || {
                RenormedSpace::new(PExp::Finite(2.0), 4)?
                    .rnorm_dual(&ev(&[(1, 1.0), (2, -1.0)]))
            },
        },
        RowSpec {
            id: "renorm-decompose-lambda1-branch",
            anchor: "a dual point with first coordinate 1 decomposes as e1* minus its negative part",
            expected: 0.0,
            run: || {
                let s = RenormedSpace::new(PExp::Finite(2.0), 4)?;
                let z = ev(&[(1, 1.0), (2, -0.7)]);
                let d = s.decompose_dual(&z)?;
                let dev = (d.lambda - 1.0).abs()
                    + d.xstar.sub(&SparseVector::zero()).iter().map(|(_, v)| v.abs()).sum::<f64>()
                    + d.ystar.sub(&ev(&[(2, 0.7)])).iter().map(|(_, v)| v.abs()).sum::<f64>()
                    + d.recompose().sub(&z).iter().map(|(_, v)| v.abs()).sum::<f64>();
                Ok(dev)
            },
        },
        RowSpec {
            id: "renorm-primal-witness-corner",
            anchor: "e1 - (e1+2ek) has renormed norm 2",
            expected: 2.0,
            run: || {
                let s = RenormedSpace::new(PExp::Finite(2.0), 4)?;
                let w = s.primal_witness(&SparseVector::unit(1), 3)?;
                s.rnorm(&SparseVector::unit(1).sub(&w))
            },
        },
        RowSpec {
            id: "renorm-dual-witness-symmetric",
            anchor: "the dual witness sits at renormed dual distance 2 from both ±e1*",
            expected: 4.0,
            run: || {
                let s = RenormedSpace::new(PExp::Finite(2.0), 8)?;
                let w = s.dual_witness(&SparseVector::zero(), 3)?;
                let e1 = SparseVector::unit(1);
                Ok(s.rnorm_dual(&e1.sub(&w))? + s.rnorm_dual(&e1.add(&w))?)
            },
        },
        RowSpec {
            id: "diag-nabla-l1-basis",
            anchor: "basis vectors of the simplex-ball space are ∇-points",
            expected: 1.0,
            run: || {
                Ok(verdict_as_f64(
                    diag::nabla_check(
                        &SpaceDescriptor::l1(3),
                        &SparseVector::unit(1),
                        diag::DEFAULT_EPS,
                    )?
                    .verdict,
                ))
            },
        },
        RowSpec {
            id: "diag-nabla-l1-midpoint-fails",
            anchor: "the midpoint (1/2,1/2) is not a ∇-point; its deficiency is 1",
            expected: 1.0,
            run: || {
                let r = diag::nabla_check(
                    &SpaceDescriptor::l1(2),
                    &ev(&[(1, 0.5), (2, 0.5)]),
                    diag::DEFAULT_EPS,
                )?;
                Ok(if r.verdict == Verdict::Fails {
                    r.deficiency
                } else {
                    -1.0
                })
            },
        },
        RowSpec {
            id: "diag-nabla-linf-flat-fails",
            anchor: "e1 is not a ∇-point of the square ball; its deficiency is 1",
            expected: 1.0,
            run: || {
                let r = diag::nabla_check(
                    &SpaceDescriptor::linf(2),
                    &SparseVector::unit(1),
                    diag::DEFAULT_EPS,
                )?;
                Ok(if r.verdict == Verdict::Fails {
                    r.deficiency
                } else {
                    -1.0
                })
            },
        },
        RowSpec {
            id: "diag-nabla-linf-corner-holds",
            anchor: "the all-ones corner of the cube is a ∇-point",
            expected: 1.0,
            run: || {
                Ok(verdict_as_f64(
                    diag::nabla_check(
                        &SpaceDescriptor::linf(3),
                        &ev(&[(1, 1.0), (2, 1.0), (3, 1.0)]),
                        diag::DEFAULT_EPS,
                    )?
                    .verdict,
                ))
            },
        },
        RowSpec {
            id: "diag-slice-sup-shallow",
            anchor: "a shallow slice around e1 keeps all points within 2α of e1",
            expected: 0.2,
            run: || {
                diag::slice_sup(
                    &SpaceDescriptor::l1(3),
                    &SparseVector::unit(1),
                    &SliceSpec::new(SparseVector::unit(1), 0.1),
                )
            },
        },
        RowSpec {
            id: "diag-find-non-nabla-l1",
            anchor: "the midpoint of two adjacent vertices refutes ∇ in the diamond ball",
            expected: 0.0,
            run: || {
                let p = diag::find_non_nabla(&SpaceDescriptor::l1(2), 100)?;
                Ok(p.sub(&ev(&[(1, 0.5), (2, 0.5)]))
                    .iter()
                    .map(|(_, v)| v.abs())
                    .sum())
            },
        },
        RowSpec {
            id: "diag-find-non-nabla-linf",
            anchor: "the flat point e1 refutes ∇ in the square ball",
            expected: 0.0,
            run: || {
                let p = diag::find_non_nabla(&SpaceDescriptor::linf(2), 100)?;
                Ok(p.sub(&SparseVector::unit(1))
                    .iter()
                    .map(|(_, v)| v.abs())
                    .sum())
            },
        },
        RowSpec {
            id: "sums-l1-transfer-corner",
            anchor: "corner transfer into the ℓ1-sum preserves the ∇ verdict (scalar case)",
            expected: 1.0,
            run: || {
                let r = SpaceDescriptor::l1(1);
                let (lhs, rhs) = sums::check_l1_transfer(&r, &SparseVector::unit(1), &r)?;
                Ok(if lhs && rhs { 1.0 } else { 0.0 })
            },
        },
        RowSpec {
            id: "sums-l1-transfer-cube-corner",
            anchor: "the cube corner stays a ∇-point after an ℓ1-sum with a line",
            expected: 1.0,
            run: || {
                let x = ev(&[(1, 1.0), (2, 1.0)]);
                let (lhs, rhs) = sums::check_l1_transfer(
                    &SpaceDescriptor::linf(2),
                    &x,
                    &SpaceDescriptor::l1(1),
                )?;
                Ok(if lhs && rhs { 1.0 } else { 0.0 })
            },
        },
        RowSpec {
            id: "sums-linf-characterization-corner",
            anchor: "(1,1) is a ∇-point of the ℓ∞-sum of two lines, matching the component rule",
            expected: 1.0,
            run: || {
                let r = SpaceDescriptor::l1(1);
                let one = SparseVector::unit(1);
                let (lhs, rhs) = sums::check_linf_characterization(&r, &one, &r, &one)?;
                Ok(if lhs && rhs { 1.0 } else { 0.0 })
            },
        },
        RowSpec {
            id: "sums-linf-characterization-flat",
            anchor: "(1,0) fails on both sides of the ℓ∞-sum characterization",
            expected: 1.0,
            run: || {
                let r = SpaceDescriptor::l1(1);
                let (lhs, rhs) = sums::check_linf_characterization(
                    &r,
                    &SparseVector::unit(1),
                    &r,
                    &SparseVector::zero(),
                )?;
                Ok(if !lhs && !rhs { 1.0 } else { 0.0 })
            },
        },
        RowSpec {
            id: "sums-corner-renorm-nabla",
            anchor: "splitting off the last coordinate as an ℓ1 summand makes it a ∇-point",
            expected: 1.0,
            run: || {
                let s = corner_renorm(&SpaceDescriptor::l2(2))?;
                Ok(verdict_as_f64(
                    diag::nabla_check(&s, &SparseVector::unit(2), diag::DEFAULT_EPS)?.verdict,
                ))
            },
        },
        RowSpec {
            id: "tensor-denting-distance-cross",
            anchor: "a corner tensor point is at distance 2 from any other vertex pair",
            expected: 2.0,
            run: || {
                let b = SpaceDescriptor::l1(2).to_vball()?;
                let e1 = SparseVector::unit(1);
                tensor::tensor_denting_distance(
                    &b,
                    &b,
                    &e1,
                    &e1,
                    &SparseVector::unit(2),
                    &e1,
                )
            },
        },
        RowSpec {
            id: "tensor-denting-distance-antipode",
            anchor: "a corner tensor point is at distance 2 from its antipode",
            expected: 2.0,
            run: || {
                let b = SpaceDescriptor::l1(2).to_vball()?;
                let e1 = SparseVector::unit(1);
                tensor::tensor_denting_distance(&b, &b, &e1, &e1, &e1.neg(), &e1)
            },
        },
        RowSpec {
            id: "tensor-elementary-unit",
            anchor: "elementary tensors of unit vectors are unit tensors",
            expected: 1.0,
            run: || {
                let b = SpaceDescriptor::l1(2).to_vball()?;
                let e1 = SparseVector::unit(1);
                tensor::proj_norm(&b, &b, &Matrix::outer(&e1, &e1, 2, 2))
            },
        },
        RowSpec {
            id: "core-norm-renorm-e1",
            anchor: "e1 keeps norm one under the renorming",
            expected: 1.0,
            run: || {
                SpaceDescriptor::renormed(SpaceDescriptor::l2(4)).norm(&SparseVector::unit(1))
            },
        },
        RowSpec {
            id: "core-norm-renorm-negative-cone",
            anchor: "a negative coordinate of size 2 off e1 has renormed norm 2",
            expected: 2.0,
            run: || {
                SpaceDescriptor::renormed(SpaceDescriptor::l2(4)).norm(&ev(&[(3, -2.0)]))
            },
        },
    ]
}

/// Runs the identity suite, optionally filtered by id prefix.
pub fn run_suite(only: Option<&str>) -> Vec<VerifyRow> {
    rows()
        .into_iter()
        .filter(|r| only.map_or(true, |f| r.id.starts_with(f)))
        .map(|r| {
            let (computed, pass) = match (r.run)() {
                Ok(c) => (c, (c - r.expected).abs() <= 1e-7),
                Err(_) => (f64::NAN, false),
            };
            VerifyRow {
                id: r.id,
                anchor: r.anchor,
                expected: r.expected,
                computed,
                pass,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_suite_passes() {
        let rows = run_suite(None);
        assert!(rows.len() >= 20);
        for r in &rows {
            assert!(
                r.pass,
                "{}: expected {} computed {}",
                r.id, r.expected, r.computed
            );
        }
    }

    #[test]
    fn filter_selects_subsets() {
        let rows = run_suite(Some("renorm"));
        assert!(!rows.is_empty());
        assert!(rows.iter().all(|r| r.id.starts_with("renorm")));
        assert!(rows.len() < run_suite(None).len());
    }
}
