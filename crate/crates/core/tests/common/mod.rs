#![allow(dead_code)]

use ordlab::group::Letter;
use ordlab::order::ZnOrder;
use ordlab::{Group, GroupElement, GroupSpec, OrderOracle};
use proptest::prelude::*;

pub fn group(spec: GroupSpec) -> Group {
    Group::new(spec).unwrap()
}

pub fn zn(rank: usize) -> Group {
    group(GroupSpec::FreeAbelian { rank })
}

pub fn backends() -> Vec<Group> {
    vec![
        group(GroupSpec::FreeGroup { rank: 2 }),
        zn(1),
        zn(3),
        group(GroupSpec::FiniteCyclic { modulus: 7 }),
        group(GroupSpec::KleinBottle),
        group(GroupSpec::MatrixGroup {
            generators: GroupSpec::sanov_generators(),
        }),
        group(GroupSpec::sanov_semidirect()),
        group(GroupSpec::quaternion()),
    ]
}

/// Every total order the library ships, on the groups it is defined for.
pub fn shipped_orders() -> Vec<(String, OrderOracle)> {
    let mut out = Vec::new();
    let z = zn(1);
    out.push(("Z lex".into(), OrderOracle::standard_lex(&z).unwrap()));
    let z2 = zn(2);
    out.push(("Z² lex".into(), OrderOracle::standard_lex(&z2).unwrap()));
    out.push((
        "Z² lex (y, -x)".into(),
        OrderOracle::lex_order_zn(&z2, vec![1, 0], vec![true, false]).unwrap(),
    ));
    out.push((
        "Z² functional (2,3)".into(),
        OrderOracle::functional_lex_order_zn(&z2, vec![2, 3]).unwrap(),
    ));
    out.push((
        "Z² functional (1000000,414214)".into(),
        OrderOracle::functional_lex_order_zn(&z2, vec![1_000_000, 414_214]).unwrap(),
    ));
    out.push(("Z³ lex".into(), OrderOracle::standard_lex(&zn(3)).unwrap()));
    let f2 = group(GroupSpec::FreeGroup { rank: 2 });
    out.push(("F₂ Magnus".into(), OrderOracle::magnus_order_free(&f2, None).unwrap()));
    let sanov = group(GroupSpec::MatrixGroup {
        generators: GroupSpec::sanov_generators(),
    });
    out.push(("Sanov Magnus".into(), OrderOracle::magnus_order_free(&sanov, None).unwrap()));
    let k = group(GroupSpec::KleinBottle);
    for (b, a) in [(true, true), (true, false), (false, true), (false, false)] {
        out.push((format!("Klein ({b}, {a})"), OrderOracle::klein_order(&k, b, a).unwrap()));
    }
    let s = group(GroupSpec::sanov_semidirect());
    out.push((
        "F⋉Z² lex extension".into(),
        OrderOracle::lex_extension_semidirect(&s, None, ZnOrder::lex(2)).unwrap(),
    ));
    out.push((
        "F⋉Z² functional extension".into(),
        OrderOracle::lex_extension_semidirect(
            &s,
            None,
            ZnOrder::FunctionalLexZn {
                functional: vec![1_000_000, 414_214],
            },
        )
        .unwrap(),
    ));
    out
}

/// Random element as a product of up to `len` generator letters.
pub fn word(group: &Group, len: usize) -> impl Strategy<Value = GroupElement> {
    let k = group.generator_count() as Letter;
    let g = group.clone();
    proptest::collection::vec((1..=k, any::<bool>()), 0..=len)
        .prop_map(move |ls| {
            let w: Vec<Letter> = ls.into_iter().map(|(l, s)| if s { l } else { -l }).collect();
            g.evaluate_word(&w).unwrap()
        })
}

/// Deterministic proptest runner.
pub fn runner(cases: u32) -> proptest::test_runner::TestRunner {
    use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
    TestRunner::new_with_rng(
        Config::with_cases(cases),
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}
