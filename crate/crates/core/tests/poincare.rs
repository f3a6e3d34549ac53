use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use ordlab::dynamics::{poincare_an_verification, poincare_return_times, FiniteDynamicalSystem, ReturnTime};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random self-map whose recurrent part is a permutation carrying a
/// cycle-constant measure, plus weightless transient points feeding into it.
fn random_system(rng: &mut ChaCha8Rng) -> FiniteDynamicalSystem {
    let n = rng.gen_range(1..=64);
    let cyclic = rng.gen_range(1..=n);
    let mut perm: Vec<usize> = (0..cyclic).collect();
    perm.shuffle(rng);
    let mut map = vec![0; n];
    let mut raw = vec![0u32; n];
    let mut seen = vec![false; cyclic];
    for start in 0..cyclic {
        if seen[start] {
            continue;
        }
        let w = if rng.gen_bool(0.2) { 0 } else { rng.gen_range(1..10) };
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            raw[x] = w;
            x = perm[x];
        }
    }
    map[..cyclic].copy_from_slice(&perm);
    for (x, m) in map.iter_mut().enumerate().skip(cyclic) {
        *m = rng.gen_range(0..x);
    }
    if raw.iter().all(|&w| w == 0) {
        let mut x = 0;
        loop {
            raw[x] = 1;
            x = perm[x];
            if x == 0 {
                break;
            }
        }
    }
    let total: u32 = raw.iter().sum();
    let weights = raw
        .iter()
        .map(|&w| BigRational::new(BigInt::from(w), BigInt::from(total)))
        .collect();
    FiniteDynamicalSystem::new(map, weights).unwrap()
}

#[test]
fn random_invariant_systems_recur() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..100 {
        let s = random_system(&mut rng);
        let size = s.len();
        let a: BTreeSet<usize> = (0..size).filter(|_| rng.gen_bool(0.3)).collect();
        let a = if a.is_empty() { BTreeSet::from([0]) } else { a };
        for (x, t) in poincare_return_times(&s, &a).unwrap() {
            if !s.weight(x).is_zero() {
                let ReturnTime::Returns(k) = t else { panic!("{x} does not return") };
                // independent check: iterate the map by hand
                let mut y = x;
                for _ in 0..k {
                    y = s.map()[y];
                }
                assert!(a.contains(&y) && k >= 1);
            }
        }
        for n in 1..=size {
            let rep = poincare_an_verification(&s, &a, n).unwrap();
            assert!(rep.exception_measure.is_zero());
            for x in &rep.exceptions {
                assert!(s.weight(*x).is_zero());
            }
        }
    }
}

#[test]
fn rotation_of_six_points() {
    let s = FiniteDynamicalSystem::rotation(6).unwrap();
    let times = |a: BTreeSet<usize>| -> Vec<ReturnTime> {
        poincare_return_times(&s, &a).unwrap().into_iter().map(|(_, t)| t).collect()
    };
    assert_eq!(times(BTreeSet::from([0, 3])), vec![ReturnTime::Returns(3); 2]);
    assert_eq!(times(BTreeSet::from([0])), vec![ReturnTime::Returns(6)]);
    let total: BigRational = (0..6).map(|x| s.weight(x).clone()).sum();
    assert!(total.is_one());
}
