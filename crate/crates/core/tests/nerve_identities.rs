use arrcoh::arrangement::build_poset;
use arrcoh::catalog;
use arrcoh::homology::{homology_mod_n, homology_z, rank_mod_p};
use arrcoh::nerve::{four_term_check, interval_complex, stratum_complex};
use arrcoh::poset::FinitePoset;

fn test_posets() -> Vec<(String, FinitePoset)> {
    let mut out: Vec<(String, FinitePoset)> = catalog::desk_arrangements()
        .into_iter()
        .map(|(name, arr)| (name, build_poset(&arr).poset().clone()))
        .filter(|(_, p)| p.len() <= 8)
        .collect();
    let names = |k: usize| (0..k).map(|i| i.to_string()).collect::<Vec<_>>();
    // a bowtie: two minima below two maxima
    out.push((
        "bowtie".into(),
        FinitePoset::from_fn(names(4), |a, b| a == b || (a < 2 && b >= 2)).unwrap(),
    ));
    // a 5-chain
    out.push(("chain5".into(), FinitePoset::from_fn(names(5), |a, b| a <= b).unwrap()));
    out
}

#[test]
fn four_term_sequence_is_exact_everywhere() {
    for (name, p) in test_posets() {
        let sets = p.all_locally_closed();
        for m in sets.iter().filter(|s| !s.is_empty()) {
            for n in sets.iter().filter(|s| !s.is_empty()) {
                let r = four_term_check(&p, m, n);
                assert!(r.exact, "{name}: {:?} {:?}: {}", m.members, n.members, r.detail);
            }
        }
    }
}

#[test]
fn suspension_identity() {
    for (name, arr) in catalog::desk_arrangements() {
        let ip = build_poset(&arr);
        for m in ip.strata().into_iter().filter(|&m| m != ip.top()) {
            let s = stratum_complex(&ip, m);
            let interval = interval_complex(&ip, m).unwrap();
            for n in [2, 3, 4, 6] {
                let hs = homology_mod_n(&s, n).unwrap();
                let hi = homology_mod_n(&interval, n).unwrap();
                let lo = s.min_degree().min(interval.min_degree() + 2);
                let hi_deg = s.max_degree().max(interval.max_degree() + 2);
                for deg in lo..=hi_deg {
                    let mut a = hs.orders(deg);
                    let mut b = hi.orders(deg - 2);
                    a.sort_unstable();
                    b.sort_unstable();
                    assert_eq!(a, b, "{name} {} n={n} degree {deg}", ip.name(m));
                }
            }
        }
    }
}

#[test]
fn prime_moduli_agree_with_elimination() {
    // for a prime p, dim H_m(C (x) F_p) = c_m - rank d_m - rank d_{m+1} over F_p
    for (name, arr) in catalog::desk_arrangements() {
        let ip = build_poset(&arr);
        for m in ip.strata() {
            let s = stratum_complex(&ip, m);
            for p in [2, 3, 5] {
                let h = homology_mod_n(&s, p).unwrap();
                for deg in s.degrees() {
                    let expected =
                        s.rank(deg) - rank_mod_p(&s.boundary(deg), p) - rank_mod_p(&s.boundary(deg + 1), p);
                    assert_eq!(h.rank(deg), expected, "{name} {} p={p}", ip.name(m));
                }
            }
        }
    }
}

#[test]
fn euler_characteristic_survives_homology() {
    for (_, arr) in catalog::desk_arrangements() {
        let ip = build_poset(&arr);
        for m in ip.strata() {
            let s = stratum_complex(&ip, m);
            let h = homology_z(&s).unwrap();
            let chi: i64 = s
                .degrees()
                .map(|d| if d % 2 == 0 { 1 } else { -1 } * h.free_rank(d) as i64)
                .sum();
            assert_eq!(chi, s.euler_characteristic());
        }
    }
}
