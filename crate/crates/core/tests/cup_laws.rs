use std::collections::BTreeSet;

use arrcoh::arrangement::build_poset;
use arrcoh::catalog;
use arrcoh::cup::{
    associativity_violations, commutativity_violations, cup_table_poset, dgm_formula_check,
    kunneth_with_support_check, unit_violations, vanishing_violations,
};

#[test]
fn algebra_laws_on_desk_arrangements() {
    for (name, arr) in catalog::desk_arrangements() {
        let ip = build_poset(&arr);
        for n in 2..=6 {
            let table = cup_table_poset(&ip, n).unwrap();
            assert!(unit_violations(&ip, &table).is_empty(), "{name} n={n}");
            assert!(vanishing_violations(&ip, &table).is_empty(), "{name} n={n}");
            assert!(commutativity_violations(&table).is_empty(), "{name} n={n}");
            assert!(associativity_violations(&table).is_empty(), "{name} n={n}");
        }
    }
}

/// Subsets of coordinate hyperplanes containing each stratum, read off the
/// geometry rather than the poset names.
fn hyperplane_sets(k: usize) -> (arrcoh::arrangement::IntersectionPoset, Vec<BTreeSet<usize>>) {
    let arr = catalog::coordinate_hyperplanes(k);
    let ip = build_poset(&arr);
    let sets = (0..ip.len())
        .map(|m| {
            arr.members()
                .iter()
                .enumerate()
                .filter(|(_, h)| h.subspace.contains(ip.element(m)).unwrap())
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    (ip, sets)
}

#[test]
fn products_of_punctured_lines_match_the_exterior_pattern() {
    // H^*((G_m)^k) is exterior on degree-one classes e_i; e_S e_T is a unit
    // multiple of e_{S ∪ T} exactly when S and T are disjoint
    for k in 1..=3 {
        let (ip, sets) = hyperplane_sets(k);
        for n in [2u64, 3, 5] {
            let table = cup_table_poset(&ip, n).unwrap();
            for a in ip.strata() {
                for b in ip.strata() {
                    let (pa, pb) = (sets[a].len(), sets[b].len());
                    let e = table.entry(a, pa, 0, b, pb, 0).unwrap();
                    let disjoint = sets[a].is_disjoint(&sets[b]);
                    if disjoint {
                        assert_eq!(e.coefficients.len(), 1);
                        let c = e.coefficients[0];
                        assert_eq!(num_integer::gcd(c, n), 1, "k={k} n={n} {a} {b}");
                    } else {
                        assert!(e.is_zero());
                    }
                }
            }
        }
    }
}

#[test]
fn both_routes_agree_on_transverse_pairs() {
    for arr in [
        catalog::transverse_lines(),
        catalog::coordinate_hyperplanes(3),
        catalog::braid3(),
        catalog::generic_lines(),
        catalog::plane_and_line(),
        catalog::coordinate_hyperplanes(1),
    ] {
        let ip = build_poset(&arr);
        for n in [2, 3, 4] {
            let table = cup_table_poset(&ip, n).unwrap();
            let report = dgm_formula_check(&ip, &table).unwrap();
            assert!(report.agrees(), "{:?}", report.mismatches);
        }
    }
}

#[test]
fn kunneth_with_support_on_all_strata_pairs() {
    for (name, arr) in catalog::desk_arrangements() {
        let ip = build_poset(&arr);
        for a in ip.strata() {
            for b in ip.strata() {
                assert!(kunneth_with_support_check(&ip, a, b, 6).unwrap(), "{name}");
            }
        }
    }
}
