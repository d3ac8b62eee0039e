use deltavec::classify::{
    cyclic_simplex, cyclic_simplex_delta, enumerate_candidates, realize, search_realization, Candidate,
    RealizationStatus,
};
use deltavec::ehrhart::delta_from_box;
use deltavec::polytope::Simplex;
use proptest::prelude::*;
use std::collections::BTreeSet;

fn from_gaps(gaps: &[usize]) -> Vec<u64> {
    let mut v = Vec::new();
    for &g in gaps {
        v.push(1);
        v.extend(std::iter::repeat_n(0, g));
    }
    v
}

#[test]
fn volume_four_candidates_are_the_two_parameter_family() {
    for d in 1..=25usize {
        let got: BTreeSet<Vec<u64>> =
            enumerate_candidates(d, 4).unwrap().into_iter().map(|c| c.delta.entries().to_vec()).collect();
        let mut expected = BTreeSet::new();
        for p1 in 0..=d {
            for p2 in 0..=p1 {
                if 2 * p1 + 2 * p2 + 3 == d {
                    expected.insert(from_gaps(&[p1, p2, p2, p1]));
                }
            }
        }
        assert_eq!(got, expected, "d={d}");
    }
}

#[test]
fn volume_five_candidates_are_the_three_parameter_family() {
    for d in 1..=25usize {
        let got: BTreeSet<Vec<u64>> =
            enumerate_candidates(d, 5).unwrap().into_iter().map(|c| c.delta.entries().to_vec()).collect();
        let mut expected = BTreeSet::new();
        for p1 in 0..=d {
            for p2 in 0..=p1 {
                for p3 in 0..=p1 {
                    if 2 * p1 + 2 * p2 + p3 + 4 == d {
                        expected.insert(from_gaps(&[p1, p2, p3, p2, p1]));
                    }
                }
            }
        }
        assert_eq!(got, expected, "d={d}");
    }
}

#[test]
fn small_volumes_are_all_realized_by_search() {
    for vol in 1..=3 {
        for d in 1..=7 {
            for c in enumerate_candidates(d, vol).unwrap() {
                let r = search_realization(&c, 1_000_000).unwrap();
                assert_eq!(r.status, RealizationStatus::RealizedBySearch, "{:?}", c.delta.entries());
            }
        }
    }
}

#[test]
fn realize_is_deterministic() {
    for c in enumerate_candidates(12, 5).unwrap() {
        let a = realize(&c).unwrap();
        let b = realize(&c).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn uncovered_profile_is_a_finding() {
    let c = Candidate::new(from_gaps(&[2, 0, 1, 0, 2])).unwrap();
    let r = realize(&c).unwrap();
    assert!(r.finding);
    assert!(r.family.is_none());
    assert!(r.search.is_some());
}

proptest! {
    #[test]
    fn closed_form_cyclic_delta_matches_box_engine(vol in 1u64..=7, a in prop::collection::vec(0u64..7, 0..5)) {
        let a: Vec<u64> = a.into_iter().map(|x| x % vol).collect();
        let s = Simplex::new(cyclic_simplex(&a, vol)).unwrap();
        prop_assert_eq!(cyclic_simplex_delta(&a, vol), delta_from_box(&s).entries().to_vec());
    }
}
