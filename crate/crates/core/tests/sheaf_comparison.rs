use std::collections::BTreeMap;

use arrcoh::arrangement::build_poset;
use arrcoh::catalog;
use arrcoh::linear::IntegerMatrix;
use arrcoh::nerve::stratum_complex;
use arrcoh::poset::FinitePoset;
use arrcoh::sheaf::{
    hom_scale, open_point_support_sections, pushforward_mismatches, resolution_g, stalkwise_quis_check,
    support_pullback_map, PosetSheaf,
};
use num_bigint::BigInt;
use proptest::prelude::*;

fn diamond() -> FinitePoset {
    let names = ["a", "b", "c", "d"].map(String::from).to_vec();
    FinitePoset::from_fn(names, |x, y| x == y || x == 0 || y == 3).unwrap()
}

#[test]
fn skyscrapers_and_open_points_on_desk_posets() {
    for (name, arr) in catalog::desk_arrangements() {
        let ip = build_poset(&arr);
        let p = ip.poset();
        for x in 0..p.len() {
            let f = PosetSheaf::skyscraper(p, 4, x, &[4]).unwrap();
            assert!(stalkwise_quis_check(&f), "{name}: skyscraper at {}", p.name(x));
        }
        let f = PosetSheaf::extension_by_zero_at_open_point(p, 3, ip.top()).unwrap();
        assert!(stalkwise_quis_check(&f), "{name}");
    }
}

#[test]
fn support_sections_on_intervals_are_the_dual_nerve_complex() {
    for (_, arr) in catalog::desk_arrangements() {
        let ip = build_poset(&arr);
        for a in ip.strata() {
            let interval = ip.poset().closed_interval(a, ip.top());
            let sub = ip.poset().subposet(&interval);
            let k = open_point_support_sections(&sub, 2, 0, sub.len() - 1).unwrap();
            let s = stratum_complex(&ip, a).dual();
            for m in s.degrees() {
                assert_eq!(k.rank(m), s.rank(m));
                assert_eq!(k.coboundary(m), s.coboundary(m));
            }
        }
    }
}

#[test]
fn intersection_pullbacks_are_chain_maps() {
    let ip = build_poset(&catalog::coordinate_hyperplanes(2));
    let h1 = ip.index_by_name("H1").unwrap();
    let h2 = ip.index_by_name("H2").unwrap();
    let o = ip.index_by_name("H1∩H2").unwrap();
    let ia = ip.poset().closed_interval(h1, ip.top());
    let ib = ip.poset().closed_interval(h2, ip.top());
    let ic = ip.poset().closed_interval(o, ip.top());
    let prod = ip.poset().subposet(&ia).product(&ip.poset().subposet(&ib));
    let alpha: Vec<usize> = (0..prod.len())
        .map(|k| {
            let (x, y) = (ia[k / ib.len()], ib[k % ib.len()]);
            let s = ip.element(x).intersect(ip.element(y)).unwrap();
            ic.iter().position(|&e| Some(e) == ip.index_of(&s)).unwrap()
        })
        .collect();
    let qc = ip.poset().subposet(&ic);
    let bottom = ic.iter().position(|&e| e == o).unwrap();
    let top = ic.iter().position(|&e| e == ip.top()).unwrap();
    let corner = |x: usize, y: usize| {
        let i = ia.iter().position(|&e| e == x).unwrap();
        let j = ib.iter().position(|&e| e == y).unwrap();
        i * ib.len() + j
    };
    let (s, t, f) = support_pullback_map(
        &prod,
        (corner(h1, h2), corner(ip.top(), ip.top())),
        &qc,
        (bottom, top),
        &alpha,
    )
    .unwrap();
    f.check(&s, &t).unwrap();
    assert!(pushforward_mismatches(&prod, &qc, &alpha, 6, &[6]).unwrap().is_empty());
    assert!(pushforward_mismatches(&prod, &qc, &alpha, 4, &[2]).unwrap().is_empty());
}

fn hom(from: &[u64], to: &[u64], picks: &[u64]) -> IntegerMatrix {
    let mut m = IntegerMatrix::zeros(to.len(), from.len());
    for (i, &b) in to.iter().enumerate() {
        for (j, &a) in from.iter().enumerate() {
            let k = picks[(i * 7 + j * 3) % picks.len()];
            m.set(i, j, BigInt::from(k * hom_scale(a, b)));
        }
    }
    m
}

fn module() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(prop::sample::select(vec![2u64, 3, 6]), 0..=2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_diamond_sheaves_are_resolved(
        fa in module(), fb in module(), fd in module(),
        picks in prop::collection::vec(0u64..6, 1..8),
    ) {
        let p = diamond();
        let fc = fd.clone();
        let r_ab = hom(&fa, &fb, &picks);
        let r_bd = hom(&fb, &fd, &picks);
        let r_cd = IntegerMatrix::identity(fd.len());
        let r_ad = r_bd.mul(&r_ab);
        let mut r = BTreeMap::new();
        r.insert((0, 1), r_ab);
        r.insert((0, 2), r_ad.clone());
        r.insert((0, 3), r_ad);
        r.insert((1, 3), r_bd);
        r.insert((2, 3), r_cd);
        let f = PosetSheaf::new(p, 6, vec![fa, fb, fc, fd], r).unwrap();
        prop_assert!(stalkwise_quis_check(&f));
        let g = resolution_g(&f);
        // the diamond is the open star of its minimum, so G has no higher
        // global cohomology and H^0 is the module of sections of F
        let global = g.global_sections().presented();
        let mut h0 = global.homology(0);
        h0.sort();
        let everything = [0, 1, 2, 3];
        prop_assert_eq!(h0, f.sections(&everything, None));
        for k in 1..=3 {
            prop_assert!(global.homology(-k).is_empty());
        }
    }
}
