use proptest::prelude::*;
use ultrafix::applications::{make_mobius, shift, MobiusParams};
use ultrafix::*;

const P: u64 = 5;
const DIGITS: u32 = 30;

fn num(n: i64, d: i64) -> PadicNumber {
    PadicNumber::from_rational(n, d, P, DIGITS).unwrap()
}

fn rational() -> impl Strategy<Value = PadicNumber> {
    (-100_000i64..100_000, 1i64..5_000).prop_map(|(n, d)| num(n, d))
}

fn nonzero() -> impl Strategy<Value = PadicNumber> {
    rational().prop_filter("nonzero", |x| !x.is_zero())
}

fn unit_ball() -> impl Strategy<Value = PadicNumber> {
    (-100_000i64..100_000, 1i64..5_000).prop_filter("integral", |(_, d)| d % P as i64 != 0).prop_map(|(n, d)| num(n, d))
}

fn ep() -> impl Strategy<Value = PadicNumber> {
    (-20_000i64..20_000).prop_map(|t| num(1 + P as i64 * t, 1))
}

/// Valuation `>= 1`.
fn small() -> impl Strategy<Value = PadicNumber> {
    (-20_000i64..20_000, 1i64..500)
        .prop_filter("small", |(t, d)| *t != 0 && d % P as i64 != 0)
        .prop_map(|(t, d)| num(P as i64 * t, d))
}

fn mobius() -> ContractiveMap {
    make_mobius(&MobiusParams::from_integers([1, 1, 1, 1, 1, 6], P, 40).unwrap()).unwrap()
}

fn ep40(t: i64) -> AlgebraElement {
    PadicNumber::from_integer(1 + P as i64 * t, P, 40).unwrap().into()
}

fn binary_tree(depth: usize, boundary: &Boundary) -> TreeProblem {
    TreeProblem::new(
        TreeShape::uniform(2, depth).unwrap(),
        MapFamily::Uniform(vec![mobius()]),
        EdgeArgument::FullTuple,
        boundary,
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn ultrametric_inequality(x in rational(), y in rational()) {
        let s = x.add(&y).unwrap();
        prop_assert!(s.valuation() >= x.valuation().min(y.valuation()));
        if x.valuation() != y.valuation() {
            prop_assert_eq!(s.valuation(), x.valuation().min(y.valuation()));
        }
    }

    #[test]
    fn norm_is_multiplicative(x in rational(), y in rational()) {
        let v = x.mul(&y).unwrap().valuation();
        match (x.valuation(), y.valuation()) {
            (Valuation::Finite(a), Valuation::Finite(b)) => prop_assert_eq!(v, Valuation::Finite(a + b)),
            _ => prop_assert!(v.is_infinite()),
        }
    }

    #[test]
    fn inverse_round_trip(x in nonzero()) {
        let y = x.mul(&x.inverse().unwrap()).unwrap();
        prop_assert!(y.sub(&PadicNumber::one(P, DIGITS)).unwrap().valuation().is_at_least(DIGITS as i64 - 1));
    }

    #[test]
    fn subtraction_round_trip(x in rational(), y in rational()) {
        let back = x.add(&y).unwrap().sub(&y).unwrap();
        let floor = x.valuation().min(y.valuation()).finite().unwrap_or(0) + DIGITS as i64;
        prop_assert!(back.sub(&x).unwrap().valuation().is_at_least(floor));
    }

    #[test]
    fn product_difference_is_bounded(
        a in prop::collection::vec(unit_ball(), 1..5),
        seed in prop::collection::vec(unit_ball(), 5),
    ) {
        let a: Vec<AlgebraElement> = a.into_iter().map(Into::into).collect();
        let b: Vec<AlgebraElement> = a.iter().zip(&seed).map(|(x, s)| x.add(&s.clone().into()).unwrap()).collect();
        prop_assert!(product_difference_bound(&a, &b).unwrap());
    }

    #[test]
    fn ep_is_a_group(x in ep(), y in ep()) {
        prop_assert!(in_ep(&x.mul(&y).unwrap()));
        prop_assert!(in_ep(&x.inverse().unwrap()));
        prop_assert!(in_ep(&x.div(&y).unwrap()));
    }

    #[test]
    fn exp_is_an_isometry_near_zero(x in small()) {
        let e = padic_exp(&x, SeriesBudget::for_digits(DIGITS)).unwrap();
        let d = e.sub(&PadicNumber::one(P, DIGITS)).unwrap();
        prop_assert_eq!(d.valuation(), x.valuation());
    }

    #[test]
    fn log_is_an_isometry_near_one(t in small()) {
        let x = PadicNumber::one(P, DIGITS).add(&t).unwrap();
        let l = padic_log(&x, SeriesBudget::for_digits(DIGITS)).unwrap();
        prop_assert_eq!(l.valuation(), t.valuation());
    }

    #[test]
    fn exp_log_round_trip(x in small()) {
        let budget = SeriesBudget::for_digits(DIGITS);
        let back = padic_log(&padic_exp(&x, budget).unwrap(), budget).unwrap();
        prop_assert!(back.sub(&x).unwrap().valuation().is_at_least(DIGITS as i64 - 2));
    }

    #[test]
    fn exp_is_additive(x in small(), y in small()) {
        let budget = SeriesBudget::for_digits(DIGITS);
        let lhs = padic_exp(&x.add(&y).unwrap(), budget).unwrap();
        let rhs = padic_exp(&x, budget).unwrap().mul(&padic_exp(&y, budget).unwrap()).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().valuation().is_at_least(DIGITS as i64 - 2));
    }

    #[test]
    fn vector_norm_scales(xs in prop::collection::vec(rational(), 1..6), c in nonzero()) {
        let v = AlgebraElement::Vector(xs.clone());
        let min = xs.iter().map(PadicNumber::valuation).min().unwrap();
        prop_assert_eq!(v.valuation(), min);
        let scaled = v.scale(&c).unwrap().valuation();
        match (min, c.valuation()) {
            (Valuation::Finite(a), Valuation::Finite(b)) => prop_assert_eq!(scaled, Valuation::Finite(a + b)),
            _ => prop_assert!(scaled.is_infinite()),
        }
    }

    #[test]
    fn shift_never_grows_the_norm(xs in prop::collection::vec(unit_ball(), 1..8)) {
        let x = AlgebraElement::Seq(xs);
        prop_assert!(shift(&x).unwrap().valuation() >= x.valuation());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn boundary_is_forgotten(depth in 2usize..8, s1 in any::<u64>(), s2 in any::<u64>()) {
        let r = uniqueness_gap(&binary_tree(depth, &Boundary::Random { seed: s1 }), &Boundary::Random { seed: s2 }).unwrap();
        prop_assert!(r.root_gap.is_at_least(depth as i64));
        prop_assert!(r.holds);
    }

    #[test]
    fn sweeps_are_deterministic(depth in 1usize..7, seed in any::<u64>()) {
        let a = backward_sweep(&binary_tree(depth, &Boundary::Random { seed })).unwrap();
        let b = backward_sweep(&binary_tree(depth, &Boundary::Random { seed })).unwrap();
        prop_assert_eq!(a.root(), b.root());
        prop_assert_eq!(a.min_residual(), b.min_residual());
    }

    #[test]
    fn recurrence_limit_ignores_the_window(a in -500i64..500, b in -500i64..500) {
        let spec = RecurrenceSpec::single(mobius());
        let x = solve_recurrence(&spec, &[ep40(a), ep40(b)], SolveOptions::new(30)).unwrap();
        let y = solve_recurrence(&spec, &[ep40(0), ep40(0)], SolveOptions::new(30)).unwrap();
        prop_assert!(x.limit.sub(&y.limit).unwrap().valuation().is_at_least(30));
        prop_assert!(x.rate_bound_holds().unwrap());
    }
}

#[test]
fn invariant_boundary_is_a_fixed_point_of_the_sweep() {
    let p = binary_tree(5, &Boundary::Random { seed: 3 });
    let u = invariant_solution(&p, SolveOptions::new(30)).unwrap();
    let s = backward_sweep(&p.with_boundary(&Boundary::Constant(u.value.clone())).unwrap()).unwrap();
    assert!((0..=5).all(|d| s.level(d).iter().all(|x| *x == u.value)));
}
