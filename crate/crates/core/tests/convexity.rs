mod common;

use std::cmp::Ordering;

use common::zn;
use ordlab::convexity::{
    archimedean_at_scale, bounded_power_set, coset_chain_check, convex_at_scale, maximal_convex_subgroup_zn,
    ConvexityVerdict, SubgroupOracle, SubgroupSpec,
};
use ordlab::dynamics::ScaleVerdict;
use ordlab::order::OrderDescriptor;
use ordlab::{Group, GroupElement, GroupSpec, OrderOracle};

/// Independent convexity test for a membership predicate on a sample.
fn convex_by_brute_force(o: &OrderOracle, sample: &[GroupElement], member: impl Fn(&GroupElement) -> bool) -> bool {
    let e = o.group().identity();
    sample.iter().filter(|l| member(l)).all(|l| {
        sample.iter().all(|g| {
            let between = o.compare(&e, g).unwrap() == Ordering::Less && o.compare(g, l).unwrap() == Ordering::Less;
            !between || member(g)
        })
    })
}

fn coords(g: &GroupElement) -> Vec<i64> {
    match g {
        GroupElement::Vector(v) => v.clone(),
        other => panic!("{other:?}"),
    }
}

fn dot(f: &[i64], v: &[i64]) -> i64 {
    f.iter().zip(v).map(|(a, b)| a * b).sum()
}

#[test]
fn named_examples() {
    let z2 = zn(2);
    let lex = OrderOracle::standard_lex(&z2).unwrap();
    let y_axis = SubgroupOracle::new(&z2, SubgroupSpec::Kernel { functional: vec![1, 0] }).unwrap();
    let x_axis = SubgroupOracle::new(&z2, SubgroupSpec::Kernel { functional: vec![0, 1] }).unwrap();
    let b3 = z2.ball(3).unwrap();
    assert_eq!(convex_at_scale(&lex, &y_axis, b3.elements()).unwrap().verdict, ConvexityVerdict::ConvexAtScale);
    let b2 = z2.ball(2).unwrap();
    assert_eq!(
        convex_at_scale(&lex, &x_axis, b2.elements()).unwrap().verdict,
        ConvexityVerdict::Violation {
            gamma: GroupElement::Vector(vec![0, 1]),
            lambda: GroupElement::Vector(vec![1, 0]),
        }
    );
    let k = Group::new(GroupSpec::KleinBottle).unwrap();
    let a = SubgroupOracle::new(&k, SubgroupSpec::KleinA).unwrap();
    let kb2 = k.ball(2).unwrap();
    for (bp, ap) in [(true, true), (false, true), (true, false), (false, false)] {
        let o = OrderOracle::klein_order(&k, bp, ap).unwrap();
        assert_eq!(convex_at_scale(&o, &a, kb2.elements()).unwrap().verdict, ConvexityVerdict::ConvexAtScale);
        assert!(convex_by_brute_force(&o, kb2.elements(), |g| matches!(g, GroupElement::Klein { b: 0, .. })));
        let cosets = coset_chain_check(&o, &a, k.ball(3).unwrap().elements()).unwrap();
        assert!(cosets.well_defined);
    }
}

/// The returned subgroup is convex on ball(r), and adjoining any sampled
/// element outside it gives the whole group or a subgroup that is not
/// convex on ball(r).
#[test]
fn maximal_convex_subgroups_are_exact() {
    let cases: Vec<(usize, OrderDescriptor)> = vec![
        (2, OrderDescriptor::LexZn { priority: vec![], flips: vec![] }),
        (2, OrderDescriptor::LexZn { priority: vec![1, 0], flips: vec![true, false] }),
        (2, OrderDescriptor::FunctionalLexZn { functional: vec![2, 3] }),
        (2, OrderDescriptor::FunctionalLexZn { functional: vec![1, -1] }),
        (3, OrderDescriptor::LexZn { priority: vec![2, 0, 1], flips: vec![] }),
        (3, OrderDescriptor::FunctionalLexZn { functional: vec![1, 2, -1] }),
    ];
    for (rank, d) in cases {
        let g = zn(rank);
        let o = OrderOracle::from_descriptor(&g, &d).unwrap();
        let h = maximal_convex_subgroup_zn(&g, &d).unwrap();
        let SubgroupSpec::Kernel { functional: f } = h.spec().clone() else { panic!() };
        for r in 1..=4 {
            let ball = g.ball(r).unwrap();
            let sample = ball.elements();
            assert_eq!(convex_at_scale(&o, &h, sample).unwrap().verdict, ConvexityVerdict::ConvexAtScale);
            assert!(convex_by_brute_force(&o, sample, |x| dot(&f, &coords(x)) == 0));
        }
        // H + ⟨γ⟩ = {v : f·v ∈ (f·γ)Z} since f is primitive
        let ball = g.ball(4).unwrap();
        for gamma in ball.elements() {
            let m = dot(&f, &coords(gamma)).abs();
            if m <= 1 {
                continue;
            }
            let member = |x: &GroupElement| dot(&f, &coords(x)) % m == 0;
            assert!(!convex_by_brute_force(&o, ball.elements(), member), "{d:?}: adjoining {gamma}");
        }
    }
}

#[test]
fn bounded_power_sets_shrink_with_n() {
    let z2 = zn(2);
    let lex = OrderOracle::standard_lex(&z2).unwrap();
    let sample = z2.ball(4).unwrap();
    let gamma = GroupElement::Vector(vec![1, 0]);
    let mut prev = sample.len() + 1;
    for n in 1..=6 {
        let set = bounded_power_set(&lex, &gamma, sample.elements(), n).unwrap();
        assert!(set.len() <= prev);
        prev = set.len();
        assert_eq!(set.iter().all(|x| coords(x)[0] == 0), n >= 2);
    }
    let f = OrderOracle::functional_lex_order_zn(&z2, vec![1_000_000, 414_214]).unwrap();
    let gamma = GroupElement::Vector(vec![1, 1]);
    let set = bounded_power_set(&f, &gamma, sample.elements(), 10).unwrap();
    assert_eq!(set, vec![z2.identity()]);
}

#[test]
fn archimedean_shadows() {
    let z2 = zn(2);
    let sample = z2.ball(2).unwrap();
    let irrational = OrderOracle::functional_lex_order_zn(&z2, vec![1_000_000, 414_214]).unwrap();
    let rep = archimedean_at_scale(&irrational, sample.elements(), 50).unwrap();
    assert_eq!(rep.verdict, ScaleVerdict::HoldsAtScale);
    let rational = OrderOracle::functional_lex_order_zn(&z2, vec![1, 1]).unwrap();
    let rep = archimedean_at_scale(&rational, sample.elements(), 50).unwrap();
    assert_ne!(rep.verdict, ScaleVerdict::HoldsAtScale);
    // the translated order is again Archimedean: Z² is abelian so nothing moves
    let moved = irrational.translate(&GroupElement::Vector(vec![3, -1])).unwrap();
    assert_eq!(archimedean_at_scale(&moved, sample.elements(), 50).unwrap().verdict, ScaleVerdict::HoldsAtScale);
}
