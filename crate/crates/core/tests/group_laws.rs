mod common;

use common::{backends, runner, word};
use proptest::prelude::*;

#[test]
fn group_axioms_on_random_words() {
    for g in backends() {
        let mut runner = runner(64);
        let strat = (word(&g, 6), word(&g, 6), word(&g, 6));
        runner
            .run(&strat, |(a, b, c)| {
                let e = g.identity();
                prop_assert_eq!(g.mul(&g.mul(&a, &b), &c), g.mul(&a, &g.mul(&b, &c)));
                prop_assert_eq!(g.mul(&a, &e), a.clone());
                prop_assert_eq!(g.mul(&e, &a), a.clone());
                prop_assert!(g.is_identity(&g.mul(&a, &g.inv(&a))));
                prop_assert_eq!(g.inv(&g.mul(&a, &b)), g.mul(&g.inv(&b), &g.inv(&a)));
                prop_assert_eq!(g.pow(&a, 3), g.mul(&a, &g.mul(&a, &a)));
                prop_assert_eq!(g.pow(&a, -2), g.inv(&g.mul(&a, &a)));
                prop_assert!(g.check(&a).is_ok());
                Ok(())
            })
            .unwrap_or_else(|e| panic!("{}: {e}", g.spec().backend()));
    }
}

#[test]
fn balls_are_nested_and_symmetric() {
    for g in backends() {
        let b2 = g.ball(2).unwrap();
        let b1 = g.ball(1).unwrap();
        assert!(g.is_identity(b2.element(0)));
        assert_eq!(&b2.elements()[..b1.len()], b1.elements(), "{}", g.spec().backend());
        assert_eq!(b2.prefix_len(1), b1.len());
        for (i, x) in b2.elements().iter().enumerate() {
            assert_eq!(b2.element(b2.inverse_index(i)), &g.inv(x));
            assert_eq!(b2.word_length(i), b2.word_length(b2.inverse_index(i)));
        }
        for x in b1.elements() {
            for y in b1.elements() {
                assert!(b2.contains(&g.mul(x, y)));
            }
        }
    }
}

#[test]
fn ball_sizes_in_free_and_abelian_groups() {
    // |B(r)| in F₂ is 2·3ʳ − 1; in Z² it is 2r² + 2r + 1.
    let f2 = common::group(ordlab::GroupSpec::FreeGroup { rank: 2 });
    let z2 = common::zn(2);
    for r in 0..=4 {
        assert_eq!(f2.ball(r).unwrap().len(), 2 * 3usize.pow(r as u32) - 1);
        assert_eq!(z2.ball(r).unwrap().len(), 2 * r * r + 2 * r + 1);
    }
}
