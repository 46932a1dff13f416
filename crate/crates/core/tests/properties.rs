use proptest::prelude::*;

use knx::convex::{hull_contains, min_norm_point, witnesses_compare, Polytope};
use knx::exactness::{check, check_direction, forbidden, ExactnessProblem, VerdictStatus};
use knx::group::{GroupData, LieCharacter, TorusCharacter};
use knx::kn::{enumerate_kn, KnConfig, KnResult, Orientation, WeightSystem};
use knx::oracle::numeric_min_norm;
use knx::scalar::{eps_sign, EpsScalar, Rational, Sign};
use knx::semigroup::NumericalSemigroup;
use knx::shift::{compute_shift, Strictness};
use knx::vector::{pair, project_out_span, EpsVector, GramForm, RationalVector};

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(n, d))
}

fn int_vector(rank: usize) -> impl Strategy<Value = RationalVector> {
    prop::collection::vec(-3i64..=3, rank).prop_map(|xs| RationalVector::from_ints(&xs))
}

fn rational_vector(rank: usize) -> impl Strategy<Value = RationalVector> {
    prop::collection::vec(rational(), rank).prop_map(RationalVector::new)
}

fn nonzero_vector(rank: usize) -> impl Strategy<Value = RationalVector> {
    int_vector(rank).prop_filter("nonzero", |v| !v.is_zero())
}

/// Random cotangent torus problem: (rank, weights, χ).
fn torus_problem() -> impl Strategy<Value = (usize, Vec<RationalVector>, RationalVector)> {
    (1usize..=3).prop_flat_map(|rank| {
        (
            Just(rank),
            prop::collection::vec(int_vector(rank), 1..=5),
            nonzero_vector(rank),
        )
    })
}

fn enumerate(rank: usize, weights: &[RationalVector], chi: &RationalVector) -> KnResult {
    let ws = WeightSystem::cotangent(weights.to_vec()).unwrap();
    let g = GroupData::torus(rank).unwrap();
    enumerate_kn(&ws, &TorusCharacter::new(chi.clone()).unwrap(), &g, &KnConfig::default()).unwrap()
}

fn eps_scalar() -> impl Strategy<Value = EpsScalar> {
    (rational(), rational(), rational(), 0usize..4).prop_map(|(a, b, c, zeros)| {
        let z = Rational::zero();
        match zeros {
            0 => EpsScalar::new(a, b, c),
            1 => EpsScalar::new(z, b, c),
            2 => EpsScalar::new(z.clone(), z, c),
            _ => EpsScalar::new(a, z, c),
        }
    })
}

fn numeric_sign(x: &Rational) -> Sign {
    x.sign()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn eps_sign_matches_small_eps(x in eps_scalar(), k in 20u32..30) {
        let e0 = -Rational::pow2_recip(k);
        let e1 = -Rational::pow2_recip(k + 1);
        let s0 = numeric_sign(&x.eval(&e0));
        let s1 = numeric_sign(&x.eval(&e1));
        if s0 == s1 {
            prop_assert_eq!(eps_sign(&x), s0);
        }
    }

    #[test]
    fn eps_sign_additive(x in eps_scalar(), y in eps_scalar()) {
        if eps_sign(&x) == Sign::Positive && eps_sign(&y) == Sign::Positive {
            prop_assert_eq!(eps_sign(&(&x + &y)), Sign::Positive);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn projection_orthogonal_and_idempotent(
        v in rational_vector(3),
        span in prop::collection::vec(int_vector(3), 0..3),
    ) {
        let q = GramForm::identity(3);
        let p = project_out_span(&v, &span, &q);
        for s in &span {
            prop_assert!(q.pair(&p, s).is_zero());
        }
        prop_assert_eq!(project_out_span(&p, &span, &q), p);
    }

    #[test]
    fn min_norm_matches_brute_force(
        (rank, points) in (1usize..=3).prop_flat_map(|r| (Just(r), prop::collection::vec(rational_vector(r), 1..=7)))
    ) {
        let q = GramForm::identity(rank);
        let vertices: Vec<EpsVector> = points.iter().cloned().map(EpsVector::from_constant).collect();
        let poly = Polytope::new(vertices.clone(), q.clone()).unwrap();
        let cert = min_norm_point(&poly).unwrap();
        prop_assert!(cert.verify(&poly));
        prop_assert!(hull_contains(&cert.point, &poly).unwrap());
        for s in &vertices {
            prop_assert!(eps_sign(&pair(&cert.point, &(s - &cert.point), &q)) != Sign::Negative);
        }
        prop_assert_eq!(cert.point.constant.clone(), numeric_min_norm(&points, &q).unwrap());
    }

    #[test]
    fn perturbed_min_norm_is_certified(
        points in prop::collection::vec(int_vector(2), 1..=5),
        dir in nonzero_vector(2),
    ) {
        let q = GramForm::identity(2);
        let poly = Polytope::perturbed(&points, &dir, q.clone()).unwrap();
        let cert = min_norm_point(&poly).unwrap();
        prop_assert!(cert.verify(&poly));
        prop_assert!(hull_contains(&cert.point, &poly).unwrap());
        for s in poly.vertices() {
            prop_assert!(eps_sign(&pair(&cert.point, &(s - &cert.point), &q)) != Sign::Negative);
        }
    }

    #[test]
    fn translation_covariance(
        points in prop::collection::vec(rational_vector(2), 1..=5),
        t in rational_vector(2),
    ) {
        let q = GramForm::identity(2);
        let x = min_norm_point(&Polytope::new(
            points.iter().cloned().map(EpsVector::from_constant).collect(), q.clone()).unwrap()).unwrap().point.constant;
        let moved: Vec<RationalVector> = points.iter().map(|p| p + &t).collect();
        let moved_poly = Polytope::new(moved.iter().cloned().map(EpsVector::from_constant).collect(), q.clone()).unwrap();
        // x + t is the point of the moved polytope closest to t.
        let y = &x + &t;
        prop_assert!(hull_contains(&EpsVector::from_constant(y.clone()), &moved_poly).unwrap());
        for s in &moved {
            prop_assert!(!q.pair(&(&y - &t), &(s - &y)).is_negative());
        }
    }

    #[test]
    fn beaten_points_are_outside_hull(
        points in prop::collection::vec(int_vector(2), 1..=4),
        p in rational_vector(2),
    ) {
        let q = GramForm::identity(2);
        let vertices: Vec<EpsVector> = points.iter().cloned().map(EpsVector::from_constant).collect();
        let poly = Polytope::new(vertices.clone(), q.clone()).unwrap();
        let p = EpsVector::from_constant(p);
        let inside = hull_contains(&p, &poly).unwrap();
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                let alt = EpsVector::from_constant(RationalVector::new(vec![Rational::new(a, 2), Rational::new(b, 2)]));
                if witnesses_compare(&p, &alt, &vertices, &q) {
                    prop_assert!(!inside);
                }
            }
        }
    }
}

fn gl_group(n: usize) -> GroupData {
    GroupData::gl(n).unwrap()
}

fn b2() -> GroupData {
    let v = |a, b| RationalVector::from_ints(&[a, b]);
    let roots = [v(1, 0), v(0, 1), v(1, 1), v(1, -1)].iter().flat_map(|r| [r.clone(), -r]).collect();
    GroupData::custom(2, roots, vec![v(1, -1), v(0, 1)], GramForm::identity(2), "B2").unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_form_constant_on_orbits(v in rational_vector(3), w in rational_vector(2)) {
        for (g, x) in [(gl_group(3), v.clone()), (b2(), w.clone())] {
            let c = g.weyl_canonicalize(&x);
            prop_assert_eq!(g.weyl_canonicalize(&c), c.clone());
            for s in g.simple_roots() {
                prop_assert_eq!(g.weyl_canonicalize(&g.reflect(&x, s)), c.clone());
            }
            prop_assert_eq!(g.negative_root_weight_sum(&-&x), g.negative_root_weight_sum(&x));
        }
    }

    #[test]
    fn semigroup_dp_matches_naive(gens in prop::collection::btree_set(1u64..=30, 1..=4)) {
        let rationals: Vec<Rational> = gens.iter().map(|&g| Rational::from(g as i64)).collect();
        let s = NumericalSemigroup::from_generators(&rationals).unwrap();
        let mut naive = vec![false; 201];
        naive[0] = true;
        for k in 1..=200usize {
            naive[k] = gens.iter().any(|&g| g as usize <= k && naive[k - g as usize]);
        }
        for (k, &member) in naive.iter().enumerate() {
            let x = Rational::from(k as i64);
            prop_assert_eq!(s.contains(&x), member, "target {}", k);
            if member {
                prop_assert_eq!(s.witness(&Rational::zero(), &x).unwrap().value(), x);
            }
        }
        let d = s.describe(&Rational::zero());
        let g = s.content();
        for k in 0..=(s.conductor() + 3 * g) {
            let x = Rational::from(k as i64);
            prop_assert_eq!(d.contains(&x), s.contains(&x));
        }
    }

    #[test]
    fn rational_generators_scale(gens in prop::collection::btree_set(1i64..=12, 1..=3), den in 1i64..=6) {
        let scaled: Vec<Rational> = gens.iter().map(|&g| Rational::new(g, den)).collect();
        let ints: Vec<Rational> = gens.iter().map(|&g| Rational::from(g)).collect();
        let s = NumericalSemigroup::from_generators(&scaled).unwrap();
        let t = NumericalSemigroup::from_generators(&ints).unwrap();
        for k in 0..60i64 {
            prop_assert_eq!(s.contains(&Rational::new(k, den)), t.contains(&Rational::from(k)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kirwan_equal_pairing((rank, weights, chi) in torus_problem()) {
        let ws = WeightSystem::cotangent(weights.clone()).unwrap();
        let stratify = ws.stratify_weights();
        let result = enumerate(rank, &weights, &chi);
        let q = GramForm::identity(rank);
        for s in &result.strata {
            let x = EpsVector::new(RationalVector::zeros(rank), s.closest_direction.clone());
            let norm = pair(&x, &x, &q);
            for &j in &s.defining_subset {
                let a = if j == 0 { RationalVector::zeros(rank) } else { stratify[j - 1].clone() };
                prop_assert_eq!(pair(&EpsVector::perturbed(&a, &chi), &x, &q), norm.clone());
            }
        }
    }

    #[test]
    fn doubling_chi_keeps_strata((rank, weights, chi) in torus_problem()) {
        let one = enumerate(rank, &weights, &chi);
        let two = enumerate(rank, &weights, &chi.scale(&Rational::from(2)));
        prop_assert_eq!(one.dominant_set(), two.dominant_set());
        prop_assert_eq!(one.semistable_nonempty, two.semistable_nonempty);
        for (a, b) in one.strata.iter().zip(&two.strata) {
            prop_assert_eq!(&b.q_norm, &(&a.q_norm * &Rational::from(4)));
        }
    }

    #[test]
    fn reordering_weights_keeps_strata((rank, weights, chi) in torus_problem(), rot in 0usize..5) {
        let mut shuffled = weights.clone();
        let len = shuffled.len();
        shuffled.rotate_left(rot % len);
        shuffled.reverse();
        let a = enumerate(rank, &weights, &chi);
        let b = enumerate(rank, &shuffled, &chi);
        let key = |r: &KnResult| r.strata.iter().map(|s| (s.beta.clone(), s.q_norm.clone())).collect::<Vec<_>>();
        prop_assert_eq!(key(&a), key(&b));
    }

    #[test]
    fn cotangent_pairs_split_oppositely((rank, weights, chi) in torus_problem()) {
        let d = weights.len();
        for s in &enumerate(rank, &weights, &chi).strata {
            for &i in &s.split.minus {
                let partner = if i < d { i + d } else { i - d };
                prop_assert!(s.split.plus.contains(&partner));
            }
            for &i in &s.split.zero {
                let partner = if i < d { i + d } else { i - d };
                prop_assert!(s.split.zero.contains(&partner));
            }
        }
    }

    #[test]
    fn shift_identity_and_parity((rank, weights, chi) in torus_problem(), cs in prop::collection::vec(rational(), 20)) {
        let ws = WeightSystem::cotangent(weights.clone()).unwrap();
        let g = GroupData::torus(rank).unwrap();
        for s in &enumerate(rank, &weights, &chi).strata {
            let data = compute_shift(&s.beta, &ws, &g, Strictness::Slice).unwrap();
            let flipped = compute_shift(&-&s.beta, &ws, &g, Strictness::Slice).unwrap();
            prop_assert!(data.identity_holds());
            prop_assert_eq!(&data.shift, &flipped.shift);
            prop_assert_eq!(&data.semigroup_generators, &flipped.semigroup_generators);
            let sg = data.semigroup().unwrap();
            for c in &cs {
                prop_assert_eq!(sg.membership(&data.shift, c), data.equivalent_membership(&sg, c));
            }
        }
    }
}

fn gl_problem(n: usize, perm: &[usize], extra: &[RationalVector], chi: &RationalVector) -> ExactnessProblem {
    let permute = |v: &RationalVector| RationalVector::new(perm.iter().map(|&i| v.coords()[i].clone()).collect());
    let mut weights = knx::exactness::adjoint_plus_vector_weights(n);
    weights.extend(extra.iter().cloned());
    let weights: Vec<RationalVector> = weights.iter().map(permute).collect();
    ExactnessProblem::new(
        gl_group(n),
        WeightSystem::cotangent(weights).unwrap(),
        TorusCharacter::new(permute(chi)).unwrap(),
        LieCharacter::parametric(RationalVector::zeros(n), RationalVector::new(vec![Rational::one(); n])),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn weyl_permutation_keeps_strata(
        extra in prop::collection::vec(int_vector(3), 0..=1),
        chi in nonzero_vector(3),
        perm in Just(vec![0usize, 1, 2]).prop_shuffle(),
    ) {
        let base = gl_problem(3, &[0, 1, 2], &extra, &chi).enumerate().unwrap();
        let moved = gl_problem(3, &perm, &extra, &chi).enumerate().unwrap();
        let key = |r: &KnResult| r.strata.iter().map(|s| (s.beta_dominant.clone(), s.q_norm.clone())).collect::<Vec<_>>();
        prop_assert_eq!(key(&base), key(&moved));
        prop_assert_eq!(base.semistable_nonempty, moved.semistable_nonempty);
    }

    #[test]
    fn check_agrees_with_locus(
        n in 1usize..=3,
        ts in prop::collection::vec((-12i64..=12, 1i64..=6), 100),
        orientation in prop_oneof![Just(Orientation::Negative), Just(Orientation::Positive)],
    ) {
        let problem = knx::exactness::cherednik_preset(n).unwrap().with_orientation(orientation);
        let locus = forbidden(&problem).unwrap();
        for (a, b) in ts {
            let t = Rational::new(a, b);
            let fixed = problem.clone().with_c(problem.c.at(&t));
            let verdict = check(&fixed).unwrap();
            prop_assert_eq!(verdict.status == VerdictStatus::Violated, locus.forbids(&t), "t = {}", t);
            for s in &verdict.per_stratum {
                if let Some(w) = &s.witness {
                    prop_assert_eq!(Some(w.value()), s.c_of_beta.clone());
                }
            }
        }
    }

    #[test]
    fn dropping_is_monotone((rank, weights, chi) in torus_problem(), c in int_vector(3)) {
        let c = RationalVector::new(c.coords()[..rank].to_vec());
        let problem = ExactnessProblem::new(
            GroupData::torus(rank).unwrap(),
            WeightSystem::cotangent(weights).unwrap(),
            TorusCharacter::new(chi).unwrap(),
            LieCharacter::fixed(c),
        );
        let full = check(&problem).unwrap();
        for s in &full.per_stratum {
            let dropped = check(&problem.clone().with_dropped(vec![s.beta.clone()])).unwrap();
            if full.status == VerdictStatus::Certified {
                prop_assert_eq!(dropped.status, VerdictStatus::Certified);
            }
            prop_assert_eq!(dropped.per_stratum.len() + 1, full.per_stratum.len());
        }
    }

    #[test]
    fn doubled_direction_keeps_verdict((rank, weights, chi) in torus_problem(), c in int_vector(3)) {
        let c = RationalVector::new(c.coords()[..rank].to_vec());
        let problem = ExactnessProblem::new(
            GroupData::torus(rank).unwrap(),
            WeightSystem::cotangent(weights).unwrap(),
            TorusCharacter::new(chi).unwrap(),
            LieCharacter::fixed(c),
        );
        for s in &problem.enumerate().unwrap().strata {
            let one = check_direction(&problem, &s.beta).unwrap();
            let two = check_direction(&problem, &s.beta.scale(&Rational::from(2))).unwrap();
            prop_assert_eq!(one.pass, two.pass);
        }
    }
}

#[test]
fn gram_form_definiteness() {
    assert!(GramForm::new(vec![vec![Rational::zero(); 2]; 2]).is_err());
    assert!(GramForm::new(GramForm::identity(3).matrix().to_vec()).is_ok());
}

#[test]
fn lie_character_validation() {
    let g = gl_group(2);
    assert!(g.validate_lie_character(&LieCharacter::fixed(RationalVector::from_ints(&[1, 0]))).is_err());
    assert!(g.validate_lie_character(&LieCharacter::fixed(RationalVector::from_ints(&[1, 1]))).is_ok());
}
