mod common;

use std::cmp::Ordering;
use std::sync::Arc;

use common::{runner, shipped_orders, word};
use ordlab::dynamics::recurrence_witnesses;
use ordlab::space::{enumerate_cones, SearchOptions};
use ordlab::{OrderOracle, OrderedChain};
use proptest::prelude::*;

fn for_each_order(cases: u32, len: usize, check: impl Fn(&str, &OrderOracle, Vec<ordlab::GroupElement>) -> Result<(), TestCaseError>) {
    for (name, o) in shipped_orders() {
        let g = o.group().clone();
        let strat = proptest::collection::vec(word(&g, len), 4);
        runner(cases)
            .run(&strat, |xs| check(&name, &o, xs))
            .unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn orders_are_total_and_left_invariant() {
    for_each_order(64, 5, |_, o, xs| {
        let g = o.group();
        let (a, b, c) = (&xs[0], &xs[1], &xs[2]);
        let ab = o.compare(a, b).unwrap();
        prop_assert_eq!(ab == Ordering::Equal, a == b);
        prop_assert_eq!(o.compare(b, a).unwrap(), ab.reverse());
        prop_assert_eq!(o.compare(&g.mul(c, a), &g.mul(c, b)).unwrap(), ab);
        if ab == Ordering::Less && o.compare(b, c).unwrap() == Ordering::Less {
            prop_assert_eq!(o.compare(a, c).unwrap(), Ordering::Less);
        }
        if !g.is_identity(a) {
            prop_assert_ne!(o.positive(a).unwrap(), o.positive(&g.inv(a)).unwrap());
        }
        Ok(())
    });
}

#[test]
fn translation_composes() {
    for_each_order(200, 4, |_, o, xs| {
        let g = o.group();
        let (g1, g2, a, b) = (&xs[0], &xs[1], &xs[2], &xs[3]);
        let once = o.translate(&g.mul(g1, g2)).unwrap();
        let twice = o.translate(g1).unwrap().translate(g2).unwrap();
        prop_assert_eq!(once.compare(a, b).unwrap(), twice.compare(a, b).unwrap());
        // a ≺_γ b ⟺ aγ⁻¹ ≺ bγ⁻¹
        let gi = g.inv(g1);
        prop_assert_eq!(
            o.translate(g1).unwrap().compare(a, b).unwrap(),
            o.compare(&g.mul(a, &gi), &g.mul(b, &gi)).unwrap()
        );
        Ok(())
    });
}

#[test]
fn open_set_image_law() {
    for_each_order(200, 4, |_, o, xs| {
        let g = o.group();
        let gamma = &xs[0];
        let mut chain: Vec<_> = xs[1..].to_vec();
        chain.sort();
        chain.dedup();
        if chain.len() < 2 {
            return Ok(());
        }
        o.sort(&mut chain).unwrap();
        let shuffled = {
            let mut c = chain.clone();
            c.reverse();
            c
        };
        for c in [chain, shuffled] {
            let c = OrderedChain::new(c).unwrap();
            let moved = c.right_multiply(g, gamma);
            prop_assert_eq!(o.in_basic_open(&c).unwrap(), o.translate(gamma).unwrap().in_basic_open(&moved).unwrap());
        }
        Ok(())
    });
}

#[test]
fn recurrence_witnesses_are_translated_membership() {
    for_each_order(24, 3, |_, o, xs| {
        let g = o.group();
        let gamma = &xs[0];
        if g.is_identity(gamma) {
            return Ok(());
        }
        let mut chain: Vec<_> = xs[1..].to_vec();
        chain.sort();
        chain.dedup();
        if chain.len() < 2 {
            return Ok(());
        }
        o.sort(&mut chain).unwrap();
        let c = OrderedChain::new(chain).unwrap();
        let w = recurrence_witnesses(o, gamma, &c, 6).unwrap();
        for n in 1..=6i64 {
            let member = o.translate(&g.pow(gamma, -n)).unwrap().in_basic_open(&c).unwrap();
            prop_assert_eq!(w.contains(&n), member, "n = {}", n);
        }
        Ok(())
    });
}

#[test]
fn restrictions_are_enumerated_and_nested() {
    let opts = SearchOptions::default();
    for (name, o) in shipped_orders() {
        let g = o.group();
        let r = if g.ball(2).unwrap().len() <= 30 { 2 } else { 1 };
        let ball = Arc::new(g.ball(r).unwrap());
        let cone = o.restrict_to_ball(&ball).unwrap();
        cone.check_axioms().unwrap_or_else(|e| panic!("{name}: {e}"));
        let all = enumerate_cones(g, r, 10_000, &opts).unwrap();
        assert!(all.complete, "{name}");
        assert!(
            all.cones.iter().any(|c| c.signature() == cone.signature()),
            "{name}: restriction to ball({r}) was not enumerated"
        );
        let bigger = o.restrict_to_ball(&Arc::new(g.ball(r + 1).unwrap())).unwrap();
        assert_eq!(bigger.restrict(ball.clone()).unwrap().signature(), cone.signature(), "{name}");
        // translating the finite cone loses signs whose conjugates leave the
        // bigger ball, and agrees with the translated order elsewhere
        let exact = o.translate(&g.generators()[0]).unwrap().restrict_to_ball(&ball).unwrap();
        let partial = bigger.translate(&g.generators()[0]).unwrap().restrict(ball.clone()).unwrap();
        for (x, y) in exact.signs().iter().zip(partial.signs()) {
            assert!(y.is_none() || y == x, "{name}");
        }
    }
}
