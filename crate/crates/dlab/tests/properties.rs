//! Randomized invariants: norm axioms, oracle agreement, slice
//! monotonicity, ball sandwiches, basis monotonicity, and LP sanity.

use proptest::prelude::*;

use dlab::lp::{self, LinearProgram, LpStatus, Relation};
use dlab::polytope::SliceSpec;
use dlab::renorm::RenormedSpace;
use dlab::space::{lp_norm, PExp, SpaceDescriptor};
use dlab::vector::SparseVector;

fn coords(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0..2.0f64, dim)
}

fn exponent() -> impl Strategy<Value = PExp> {
    prop::sample::select(vec![
        PExp::Finite(1.0),
        PExp::Finite(1.5),
        PExp::Finite(2.0),
        PExp::Finite(3.0),
        PExp::Inf,
    ])
}

fn vector(dim: usize) -> impl Strategy<Value = SparseVector> {
    coords(dim).prop_map(|v| SparseVector::from_dense(&v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_axioms_hold(p in exponent(), x in vector(5), y in vector(5), t in -3.0..3.0f64) {
        let space = SpaceDescriptor::renormed(SpaceDescriptor::lp(p, 5));
        let nx = space.norm(&x).unwrap();
        let ny = space.norm(&y).unwrap();
        // Symmetry and absolute homogeneity.
        prop_assert!((space.norm(&x.neg()).unwrap() - nx).abs() <= 1e-12 * nx.max(1.0));
        let nt = space.norm(&x.scale(t)).unwrap();
        prop_assert!((nt - t.abs() * nx).abs() <= 1e-12 * nt.max(1.0));
        // Triangle inequality.
        let ns = space.norm(&x.add(&y)).unwrap();
        prop_assert!(ns <= nx + ny + 1e-9);
        // Definiteness on a safe scale.
        if nx <= 1e-12 {
            prop_assert!(x.is_zero());
        }
    }

    #[test]
    fn polyhedral_gauge_matches_closed_form(x in vector(4), inf in any::<bool>()) {
        let p = if inf { PExp::Inf } else { PExp::Finite(1.0) };
        let space = SpaceDescriptor::lp(p, 4);
        let ball = space.to_vball().unwrap();
        let g = ball.gauge(&x).unwrap();
        prop_assert!((g - lp_norm(&x, p)).abs() <= 1e-9);
        // Support function of the ball is the dual norm.
        let s = ball.support(&x);
        prop_assert!((s - lp_norm(&x, p.conjugate())).abs() <= 1e-9);
    }

    #[test]
    fn slice_optimum_is_monotone_in_alpha(
        f in vector(3),
        c in vector(3),
        a1 in 0.05..0.9f64,
        da in 0.01..0.5f64,
    ) {
        let ball = SpaceDescriptor::l1(3).to_vball().unwrap();
        let support = ball.support(&f);
        prop_assume!(support > 1e-6);
        let f = f.scale(1.0 / support);
        let a2 = (a1 + da).min(0.95);
        let shallow = ball.slice_max_linear(&SliceSpec::new(f.clone(), a1), &c).unwrap();
        let deep = ball.slice_max_linear(&SliceSpec::new(f, a2), &c).unwrap();
        // Deeper slices only add feasible points.
        prop_assert!(deep.value >= shallow.value - 1e-9);
    }

    #[test]
    fn renormed_ball_is_sandwiched(p in exponent(), x in vector(6)) {
        let space = RenormedSpace::new(p, 6).unwrap();
        let r = space.rnorm(&x).unwrap();
        let tail = SparseVector::from_entries(x.iter().filter(|(i, _)| *i >= 2));
        let outer = x.get(1).abs() + lp_norm(&tail, p);
        let inner = lp_norm(&x, p) / 3.0;
        prop_assert!(r <= outer + 1e-9, "rnorm {r} above ⊕₁ model {outer}");
        prop_assert!(r >= inner - 1e-9, "rnorm {r} below base/3 {inner}");
    }

    #[test]
    fn truncation_never_increases_the_renormed_norm(p in exponent(), x in vector(6), k in 1u32..6) {
        let space = RenormedSpace::new(p, 6).unwrap();
        let full = space.rnorm(&x).unwrap();
        let cut = SparseVector::from_entries(x.iter().filter(|(i, _)| *i <= k));
        prop_assert!(space.rnorm(&cut).unwrap() <= full + 1e-12);
    }

    #[test]
    fn segment_identity_on_random_data(
        raw in coords(6),
        lambda in 0.0..=1.0f64,
        split in 0u8..64,
        p in exponent(),
    ) {
        let space = RenormedSpace::new(p, 7).unwrap();
        // Coordinates 2..=7 split into the supports of x and y.
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (j, v) in raw.iter().enumerate() {
            let i = j as u32 + 2;
            if split >> j & 1 == 1 {
                xs.push((i, v.abs()));
            } else {
                ys.push((i, v.abs()));
            }
        }
        let x = SparseVector::from_entries(xs);
        let nx = lp_norm(&x, p);
        prop_assume!(nx > 1e-6);
        let x = x.scale(1.0 / nx);
        let y = SparseVector::from_entries(ys);
        let ny = lp_norm(&y, p);
        let y = if ny > 1.0 { y.scale(1.0 / ny) } else { y };

        let e1 = SparseVector::unit(1);
        let point = x.scale(lambda).sub(&e1.add(&y.scale(2.0)).scale(1.0 - lambda));
        let v = space.rnorm(&point).unwrap();
        prop_assert!((v - 1.0).abs() <= 1e-9, "segment point has norm {v}");
    }

    #[test]
    fn dual_decomposition_survives_round_trip(raw in coords(6)) {
        let space = RenormedSpace::new(PExp::Finite(2.0), 6).unwrap();
        let mut z = SparseVector::from_dense(&raw);
        z = z.add(&SparseVector::unit(1).scale(z.get(1).abs() - z.get(1)));
        let nd = space.rnorm_dual(&z).unwrap();
        prop_assume!(nd > 1e-6);
        let z = z.scale(1.0 / nd);
        let d = space.decompose_dual(&z).unwrap();
        prop_assert!((0.0..=1.0).contains(&d.lambda));
        prop_assert!(d.recompose().approx_eq(&z, 1e-12));
    }

    #[test]
    fn lp_respects_known_feasible_points(
        rows in prop::collection::vec(coords(4), 1..6),
        obj in coords(4),
        x0 in prop::collection::vec(0.0..1.5f64, 4),
    ) {
        // Build constraints a·x <= a·x0 + slack, so x0 is feasible.
        let mut prog = LinearProgram::new(obj.clone());
        for a in &rows {
            let rhs = a.iter().zip(&x0).map(|(c, v)| c * v).sum::<f64>() + 0.5;
            prog.push(a.clone(), Relation::Le, rhs);
        }
        // Keep the region bounded.
        for i in 0..4 {
            let mut e = vec![0.0; 4];
            e[i] = 1.0;
            prog.push(e.clone(), Relation::Le, 10.0);
            e[i] = -1.0;
            prog.push(e, Relation::Le, 10.0);
        }
        let sol = lp::solve(&prog).unwrap();
        prop_assert_eq!(sol.status, LpStatus::Optimal);
        let at_x0 = obj.iter().zip(&x0).map(|(c, v)| c * v).sum::<f64>();
        prop_assert!(sol.value >= at_x0 - 1e-9);

        // The optimum is invariant under reversing the constraint order.
        let mut rev = LinearProgram::new(obj);
        let cons: Vec<_> = prog.constraints.iter().cloned().collect();
        for c in cons.into_iter().rev() {
            rev.constraints.push(c);
        }
        let sol2 = lp::solve(&rev).unwrap();
        prop_assert!((sol.value - sol2.value).abs() <= 1e-9);
    }
}

/// Deficiency is continuous along the sphere: approaching a vertex, the
/// ∇-deficiency of the approximants bounds the limit's deficiency within
/// twice the distance travelled.
#[test]
fn nabla_deficiency_is_stable_along_a_convergent_sequence() {
    let space = SpaceDescriptor::l1(3);
    let e1 = SparseVector::unit(1);
    let limit = dlab::diag::nabla_check(&space, &e1, dlab::diag::DEFAULT_EPS)
        .unwrap()
        .deficiency;
    for k in [4.0, 8.0, 16.0, 64.0] {
        let xk = SparseVector::from_entries([(1, 1.0 - 1.0 / k), (2, 1.0 / k)]);
        let def = dlab::diag::nabla_check(&space, &xk, dlab::diag::DEFAULT_EPS)
            .unwrap()
            .deficiency;
        let dist = space.norm(&e1.sub(&xk)).unwrap();
        assert!(
            limit <= def + 2.0 * dist + 1e-9,
            "limit {limit} vs bound {def} + 2*{dist}"
        );
    }
}

/// Slice refinement: when a slice already contains a vertex far from x,
/// a facet normal at that vertex cuts a sub-slice around it whose points
/// all stay nearly as far from x.
#[test]
fn far_vertices_admit_refining_subslices() {
    let eps = 0.1;
    for n in 2..=4usize {
        let space = SpaceDescriptor::l1(n);
        let ball = space.to_vball().unwrap();
        let x = SparseVector::unit(1);
        let slice = SliceSpec::new(SparseVector::unit(2), 0.5);
        // The slice reaches distance 2 from x, witnessed by the vertex e2.
        let v = SparseVector::unit(2);
        let opt = ball
            .slice_max_linear(&slice, &SparseVector::unit(2))
            .unwrap();
        assert!(opt.value >= 1.0 - 1e-9);
        assert!((ball.gauge(&x.sub(&v)).unwrap() - 2.0).abs() < 1e-9);
        // Refine by a facet normal attaining 1 at v.
        let g = ball
            .facet_normals()
            .unwrap()
            .iter()
            .find(|g| g.pairing(&v) >= 1.0 - 1e-9)
            .expect("touching facet normal")
            .clone();
        let sub = SliceSpec::new(g, eps / 2.0);
        for u in ball.extreme_points().unwrap() {
            if sub.functional.pairing(u) >= 1.0 - eps / 2.0 {
                let d = ball.gauge(&x.sub(u)).unwrap();
                assert!(d >= 2.0 - 2.0 * eps, "vertex {u} only {d} away");
            }
        }
    }
}
