use copspec::poly::{compose, linear_conjugate, parse, rat, LinearMap, Poly, Rational};
use copspec::roots::{count_real_roots, squarefree_part};
use num::Zero;
use proptest::prelude::*;

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=8).prop_map(|(n, d)| rat(n, d))
}

fn arb_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    proptest::collection::vec(arb_rational(), 1..=max_deg + 1).prop_map(Poly::new)
}

proptest! {
    #[test]
    fn parse_display_round_trip(p in arb_poly(5)) {
        prop_assume!(!p.is_zero());
        let back = parse(&p.to_string()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn composition_evaluates_pointwise(
        f in arb_poly(4),
        g in arb_poly(3),
        x in arb_rational(),
    ) {
        let fg = compose(&f, &g).unwrap();
        prop_assert_eq!(fg.eval(&x), f.eval(&g.eval(&x)));
    }

    #[test]
    fn conjugation_round_trips(
        p in arb_poly(4),
        a in arb_rational(),
        b in arb_rational(),
    ) {
        prop_assume!(!a.is_zero());
        let l = LinearMap::new(a, b);
        let there = linear_conjugate(&p, &l);
        let back = linear_conjugate(&there, &l.inverse());
        prop_assert_eq!(back, p);
    }

    #[test]
    fn squarefree_part_preserves_distinct_roots(p in arb_poly(4)) {
        prop_assume!(!p.is_zero() && p.degree().unwrap_or(0) >= 1);
        let sf = squarefree_part(&p).unwrap();
        // squaring the polynomial must not change the distinct real roots
        let squared = &p * &p;
        let sf2 = squarefree_part(&squared).unwrap();
        prop_assert_eq!(count_real_roots(&sf), count_real_roots(&sf2));
    }

    #[test]
    fn derivative_of_composition_chain_rule(
        f in arb_poly(3),
        g in arb_poly(3),
        x in arb_rational(),
    ) {
        let fg = compose(&f, &g).unwrap();
        let lhs = fg.derivative(1).eval(&x);
        let rhs = f.derivative(1).eval(&g.eval(&x)) * g.derivative(1).eval(&x);
        prop_assert_eq!(lhs, rhs);
    }
}
