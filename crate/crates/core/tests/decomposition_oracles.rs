use arrcoh::arrangement::{build_poset, count_points_fq, Arrangement};
use arrcoh::catalog;
use arrcoh::decomposition::{decompose, decompose_poset, decompose_with_frame, mobius_poincare};
use arrcoh::linear::AffineSubspace;
use arrcoh::transverse::construct_transverse;
use proptest::prelude::*;

/// Coefficients of `(1 + t)^k` by repeated polynomial multiplication.
fn gm_power(k: usize) -> Vec<usize> {
    let mut poly = vec![1usize];
    for _ in 0..k {
        let mut next = vec![0; poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i] += c;
            next[i + 1] += c;
        }
        poly = next;
    }
    poly
}

#[test]
fn point_complements() {
    for n in 1..=3 {
        let report = decompose(&catalog::point_complement(n), 5).unwrap();
        let mut expected = vec![0; 2 * n];
        expected[0] = 1;
        expected[2 * n - 1] = 1;
        assert_eq!(report.betti, expected);
        let s = report.summand_by_name("0").unwrap();
        assert_eq!(s.twist_weight, -(n as i64));
        assert_eq!(s.nonzero_degrees(), vec![2 * n - 1]);
    }
}

#[test]
fn coordinate_hyperplanes_match_kunneth() {
    for k in 1..=4 {
        for n in [2, 3, 5] {
            let report = decompose(&catalog::coordinate_hyperplanes(k), n).unwrap();
            assert_eq!(report.betti, gm_power(k), "k={k} n={n}");
        }
    }
}

#[test]
fn hyperplane_arrangements_match_mobius() {
    for (name, arr) in catalog::desk_arrangements()
        .into_iter()
        .chain([("boolean_4".to_string(), catalog::coordinate_hyperplanes(4))])
    {
        if !arr.is_hyperplane_arrangement() {
            continue;
        }
        let ip = build_poset(&arr);
        let report = decompose_poset(&ip, 7).unwrap();
        assert_eq!(report.poincare_polynomial(), mobius_poincare(&ip), "{name}");
    }
    assert_eq!(mobius_poincare(&build_poset(&catalog::braid3())), vec![1, 3, 2]);
    assert_eq!(mobius_poincare(&build_poset(&catalog::generic_lines())), vec![1, 3, 3]);
}

#[test]
fn point_counts_agree() {
    for (name, arr) in catalog::desk_arrangements() {
        for q in [5, 7] {
            let c = count_points_fq(&arr, q).unwrap();
            assert_eq!(c.brute_force, c.inclusion_exclusion, "{name} q={q}");
        }
    }
}

#[test]
fn support_bounds_and_twists() {
    for (name, arr) in catalog::desk_arrangements() {
        let ip = build_poset(&arr);
        for n in [2, 4, 6] {
            for s in decompose_poset(&ip, n).unwrap().summands {
                assert_eq!(s.twist_weight, -(s.codim as i64));
                if s.stratum == ip.top() {
                    assert_eq!(s.nonzero_degrees(), vec![0]);
                    assert_eq!(s.rank(0), 1);
                } else {
                    for p in s.nonzero_degrees() {
                        assert!(s.codim <= p && p < 2 * s.codim, "{name}: {} in degree {p}", s.name);
                    }
                }
            }
        }
    }
}

#[test]
fn ranks_do_not_depend_on_the_frame() {
    for (name, arr) in catalog::desk_arrangements() {
        let ip = build_poset(&arr);
        let plain = decompose_poset(&ip, 3).unwrap();
        for seed in 0..5 {
            let frame = construct_transverse(&ip, seed).unwrap();
            let framed = decompose_with_frame(&ip, &frame, 3).unwrap();
            assert_eq!(framed.betti, plain.betti, "{name} seed {seed}");
            for (a, b) in framed.summands.iter().zip(&plain.summands) {
                assert_eq!(a.codim, b.codim);
            }
        }
    }
}

fn random_arrangement() -> impl Strategy<Value = Arrangement> {
    // two or three random subspaces of A^3 given by one or two integer equations
    let row = prop::collection::vec(-2i64..=2, 4);
    let member = prop::collection::vec(row, 1..=2);
    prop::collection::vec(member, 2..=3).prop_filter_map("proper distinct members", |members| {
        let named: Vec<(String, AffineSubspace)> = members
            .iter()
            .enumerate()
            .map(|(i, rows)| {
                let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
                (format!("A{i}"), AffineSubspace::from_i64_equations(3, &refs))
            })
            .collect();
        Arrangement::new(3, named).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn euler_characteristic_matches_point_count(arr in random_arrangement()) {
        // alternating Betti sum equals the point count polynomial at q = 1,
        // i.e. sum over non-empty strata of mu(M, V)
        let ip = build_poset(&arr);
        let report = decompose_poset(&ip, 5).unwrap();
        let chi: i64 = report.betti.iter().enumerate()
            .map(|(p, &b)| if p % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum();
        let mu_sum: i64 = ip.strata().into_iter().map(|m| ip.mobius(m, ip.top()).unwrap()).sum();
        prop_assert_eq!(chi, mu_sum);
    }

    #[test]
    fn random_supports_are_bounded(arr in random_arrangement()) {
        let ip = build_poset(&arr);
        for s in decompose_poset(&ip, 3).unwrap().summands {
            if s.stratum != ip.top() {
                for p in s.nonzero_degrees() {
                    prop_assert!(s.codim <= p && p < 2 * s.codim);
                }
            }
        }
    }
}
