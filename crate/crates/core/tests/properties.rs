use bubbletree::algebra::{rational, EquivariantLaurent, GradedPolynomial, GradedSymbol, Monomial};
use bubbletree::fm::{limit_stratum, PolynomialFamily, TPoly};
use bubbletree::localization::euler_invert;
use proptest::prelude::*;

fn symbols() -> [GradedSymbol; 2] {
    [GradedSymbol::new("a", 2).unwrap(), GradedSymbol::new("b", 4).unwrap()]
}

/// Up to four terms in `a`, `b` with small rational coefficients.
fn poly(constant: bool) -> impl Strategy<Value = GradedPolynomial> {
    prop::collection::vec((0u32..3, 0u32..3, -6i64..=6, 1i64..=4), 0..4).prop_map(move |terms| {
        let [a, b] = symbols();
        let mut p = GradedPolynomial::zero();
        for (i, j, n, d) in terms {
            if !constant && i == 0 && j == 0 {
                continue;
            }
            let m = Monomial::from_factors([(a.clone(), i), (b.clone(), j)].into_iter().filter(|f| f.1 > 0));
            p.add_term(m, rational(n, d));
        }
        p
    })
}

fn tpoly() -> impl Strategy<Value = TPoly> {
    prop::collection::vec(-3i64..=3, 1..4).prop_map(|c| TPoly::new(c.into_iter().map(|x| rational(x, 1)).collect()))
}

proptest! {
    #[test]
    fn polynomial_ring_laws(p in poly(true), q in poly(true), r in poly(true)) {
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn euler_classes_invert(k in -3i64..=3, lead in 1i64..=5, rest in prop::collection::vec(poly(false), 4), top in 0u32..=10) {
        let mut e = EquivariantLaurent::term(k, GradedPolynomial::constant(rational(lead, 2)));
        for (j, p) in rest.into_iter().enumerate() {
            e.add_coefficient(k - 2 + j as i64, p);
        }
        let inv = euler_invert(&e, top).unwrap();
        prop_assert_eq!(e.mul_truncated(&inv, top), EquivariantLaurent::one());
    }

    #[test]
    fn limits_ignore_time_rescaling(
        paths in prop::collection::vec([tpoly(), tpoly(), tpoly(), tpoly()], 2..5),
        weights in prop::collection::vec(1u64..=3, 4),
        c in 1i64..=5,
    ) {
        let n = paths.len();
        let fam = PolynomialFamily::new(paths, weights[..n].to_vec()).unwrap();
        let Ok(lim) = limit_stratum(&fam) else { return Ok(()) };
        let again = limit_stratum(&fam.reparametrized(&rational(c, 2))).unwrap();
        prop_assert_eq!(lim.tree, again.tree);
    }
}
