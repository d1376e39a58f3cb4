use proptest::prelude::*;

use deadend::cayley::{Ball, Budget};
use deadend::construction::{verify_construction, BoundMode, Construction, QuotientChoice};
use deadend::depth::{depth_oracle, depth_oracle_translated, depth_profile};
use deadend::group::{Element, GeneratingSet, Group};
use deadend::quotient::QuotientMap;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn cyclic_gens(m: u64, gens: &[u64]) -> GeneratingSet {
    let group = Group::cyclic(m).unwrap();
    GeneratingSet::new(&group, gens.iter().map(|&g| Element::Residue(g)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cyclic_profiles_match_the_dense_oracle(
        m in 3u64..60,
        raw in proptest::collection::vec(1u64..60, 1..4),
    ) {
        let mut gens: Vec<u64> = raw.iter().map(|g| g % m).filter(|&g| g != 0).collect();
        gens.sort_unstable();
        gens.dedup();
        let generates = gens.iter().fold(m, |acc, &g| gcd(acc, g)) == 1;
        prop_assume!(!gens.is_empty() && generates);
        let s = cyclic_gens(m, &gens);
        let oracle = depth_oracle(&s).unwrap();
        let radius = m as u32;
        let ball = Ball::build(&s, radius, &Budget::default()).unwrap();
        let profile = depth_profile(&ball, radius).unwrap();
        prop_assert!(profile.mismatches(&oracle).is_empty());
    }

    #[test]
    fn integer_profiles_match_the_translated_oracle(
        a in 1i64..6,
        b in 1i64..12,
        radius in 2u32..7,
    ) {
        prop_assume!(a != b);
        let group = Group::integers();
        let s = GeneratingSet::new(&group, vec![Element::Int(a), Element::Int(b)]).unwrap();
        let oracle = depth_oracle_translated(&s, radius).unwrap();
        let ball = Ball::build(&s, radius, &Budget::default()).unwrap();
        let profile = depth_profile(&ball, 2 * radius + 1).unwrap();
        prop_assert!(profile.mismatches(&oracle).is_empty());
    }
}

#[test]
fn constructions_over_cyclic_quotients_verify() {
    let s = GeneratingSet::parse(&Group::integers(), "1").unwrap();
    for m in [10u64, 11, 13, 14] {
        for mode in [BoundMode::Paper, BoundMode::Tight] {
            let pi = QuotientMap::onto_cyclic(&s, m).unwrap();
            let c = Construction::build(&s, QuotientChoice::Fixed(pi), 3, mode, &Budget::default())
                .unwrap();
            assert_eq!(c.params.n, (m / 2) as u32);
            let report = verify_construction(&c, c.params.d).unwrap();
            assert!(report.certified_depth >= 3, "C{m} {mode}");
            assert_eq!(report.witness_a_norm, c.params.n);
        }
    }
}
