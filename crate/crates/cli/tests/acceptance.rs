//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! Oracles here are computed independently of the pipeline they check:
//! Möbius functions by direct recursion on the order relation, Künneth
//! products by polynomial multiplication, hyperplane incidences from the
//! geometry.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;

use arrcoh::arrangement::{build_poset, count_points_fq, Arrangement, IntersectionPoset};
use arrcoh::catalog;
use arrcoh::cup::{
    associativity_violations, commutativity_violations, cup_table_poset, dgm_formula_check,
    external_product_chain_map, kunneth_with_support_check, unit_violations, vanishing_violations,
};
use arrcoh::decomposition::{decompose, decompose_with_frame, restriction_map, RestrictionBlock};
use arrcoh::homology::homology_mod_n;
use arrcoh::linear::AffineSubspace;
use arrcoh::nerve::{four_term_check, interval_complex, stratum_complex};
use arrcoh::poset::FinitePoset;
use arrcoh::sheaf::{open_point_support_sections, stalkwise_quis_check, PosetSheaf};
use arrcoh::transverse::{construct_transverse, verify_transverse};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `mu(x, y)` by `mu(x, x) = 1`, `mu(x, y) = -sum_{x <= z < y} mu(x, z)`.
fn mobius_oracle(p: &FinitePoset, x: usize, y: usize) -> i64 {
    if x == y {
        return 1;
    }
    if !p.leq(x, y) {
        return 0;
    }
    -(0..p.len())
        .filter(|&z| p.leq(x, z) && p.leq(z, y) && z != y)
        .map(|z| mobius_oracle(p, x, z))
        .sum::<i64>()
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn betti(arr: &Arrangement, n: u64) -> Vec<i64> {
    decompose(arr, n)
        .expect("decomposition")
        .betti
        .iter()
        .map(|&b| b as i64)
        .collect()
}

/// `sum_{X != ∅} |mu(X, V)| t^{cd X}` with the oracle Möbius function.
fn mobius_poincare_oracle(ip: &IntersectionPoset) -> Vec<i64> {
    let mut c = vec![0i64; ip.top_dim() + 1];
    for x in ip.strata() {
        c[ip.codim(x).unwrap()] += mobius_oracle(ip.poset(), x, ip.top()).abs();
    }
    while c.len() > 1 && c.last() == Some(&0) {
        c.pop();
    }
    c
}

fn desk() -> Vec<(String, Arrangement)> {
    catalog::desk_arrangements()
}

fn point_complement() -> Outcome {
    for n in 1..=3 {
        let r = decompose(&catalog::point_complement(n), 5).map_err(|e| e.to_string())?;
        let mut expected = vec![0usize; 2 * n];
        expected[0] = 1;
        expected[2 * n - 1] = 1;
        ensure(r.betti == expected, || format!("A^{n} - 0: betti {:?}", r.betti))?;
        let origin = r.summand_by_name("0").ok_or("no summand for the origin")?;
        ensure(origin.twist_weight == -(n as i64), || format!("twist {}", origin.twist_weight))?;
        ensure(origin.nonzero_degrees() == vec![2 * n - 1], || format!("{:?}", origin.nonzero_degrees()))?;
        // S^{{0},{V}} is the single chain [0, V] in degree 1
        ensure(origin.complex.degrees().all(|d| origin.complex.rank(d) == usize::from(d == 1)), || {
            "S^{{0},{V}} is not rank one in degree one".into()
        })?;
    }
    Ok("n = 1, 2, 3".into())
}

/// Poset elements with the set of coordinate hyperplanes containing them,
/// read off the equations.
fn hyperplane_sets(arr: &Arrangement, ip: &IntersectionPoset) -> Vec<BTreeSet<usize>> {
    (0..ip.len())
        .map(|m| {
            arr.members()
                .iter()
                .enumerate()
                .filter(|(_, h)| h.subspace.contains(ip.element(m)).unwrap())
                .map(|(i, _)| i)
                .collect()
        })
        .collect()
}

fn punctured_lines() -> Outcome {
    for k in 1..=3 {
        let arr = catalog::coordinate_hyperplanes(k);
        let kunneth = (0..k).fold(vec![1i64], |acc, _| poly_mul(&acc, &[1, 1]));
        ensure(betti(&arr, 2) == kunneth, || format!("k={k}: {:?} vs {kunneth:?}", betti(&arr, 2)))?;
        let ip = build_poset(&arr);
        let sets = hyperplane_sets(&arr, &ip);
        for n in [2u64, 3, 5] {
            let table = cup_table_poset(&ip, n).map_err(|e| e.to_string())?;
            // h_S is Z/n in degree |S| only
            for s in ip.strata() {
                for p in 0..=2 * k {
                    let o = table.orders.get(&(s, p)).cloned().unwrap_or_default();
                    let want = if p == sets[s].len() { vec![n] } else { vec![] };
                    ensure(o == want, || format!("k={k} n={n} {} degree {p}: {o:?}", ip.name(s)))?;
                }
            }
            // e_S e_T is a unit multiple of e_{S ∪ T} iff S, T are disjoint
            for a in ip.strata() {
                for b in ip.strata() {
                    let e = table
                        .entry(a, sets[a].len(), 0, b, sets[b].len(), 0)
                        .ok_or("missing table entry")?;
                    if sets[a].is_disjoint(&sets[b]) {
                        let c = e.coefficients.first().copied().unwrap_or(0);
                        ensure(gcd(c, n) == 1, || format!("k={k} n={n}: {} {} -> {c}", e.left, e.right))?;
                    } else {
                        ensure(e.is_zero(), || format!("k={k} n={n}: {} {} nonzero", e.left, e.right))?;
                    }
                }
            }
        }
    }
    Ok("k <= 3, n in {2, 3, 5}".into())
}

fn poincare_polynomials() -> Outcome {
    let braid = betti(&catalog::braid3(), 2);
    ensure(braid == vec![1, 3, 2], || format!("braid {braid:?}"))?;
    for m in 1..=4 {
        let want = (0..m).fold(vec![1i64], |acc, _| poly_mul(&acc, &[1, 1]));
        let got = betti(&catalog::coordinate_hyperplanes(m), 3);
        ensure(got == want, || format!("boolean {m}: {got:?}"))?;
    }
    let mut checked = 0;
    for (name, arr) in desk() {
        if !arr.is_hyperplane_arrangement() {
            continue;
        }
        let ip = build_poset(&arr);
        let oracle = mobius_poincare_oracle(&ip);
        for n in [2, 3] {
            ensure(betti(&arr, n) == oracle, || format!("{name} n={n}: {:?} vs {oracle:?}", betti(&arr, n)))?;
        }
        checked += 1;
    }
    let generic = mobius_poincare_oracle(&build_poset(&catalog::generic_lines()));
    Ok(format!("{checked} hyperplane arrangements; generic 3 lines {generic:?}"))
}

fn point_counts() -> Outcome {
    let mut n = 0;
    for (name, arr) in desk() {
        let ip = build_poset(&arr);
        for q in [5u64, 7] {
            let c = count_points_fq(&arr, q).map_err(|e| format!("{name}: {e}"))?;
            let formula: i64 = ip
                .strata()
                .into_iter()
                .map(|x| mobius_oracle(ip.poset(), x, ip.top()) * (q as i64).pow(ip.dim(x).unwrap() as u32))
                .sum();
            ensure(c.brute_force == formula && c.inclusion_exclusion == formula, || {
                format!("{name} q={q}: brute {} formula {formula}", c.brute_force)
            })?;
            n += 1;
        }
    }
    Ok(format!("{n} counts"))
}

fn test_posets() -> Vec<(String, FinitePoset)> {
    let mut out: Vec<(String, FinitePoset)> = desk()
        .into_iter()
        .map(|(name, arr)| (name, build_poset(&arr).poset().clone()))
        .collect();
    let names = |k: usize| (0..k).map(|i| i.to_string()).collect::<Vec<_>>();
    out.push((
        "bowtie".into(),
        FinitePoset::from_fn(names(4), |a, b| a == b || (a < 2 && b >= 2)).unwrap(),
    ));
    out.push(("chain5".into(), FinitePoset::from_fn(names(5), |a, b| a <= b).unwrap()));
    out
}

fn four_term() -> Outcome {
    let (mut pairs, mut largest) = (0, 0);
    for (name, p) in test_posets() {
        let sets: Vec<_> = p.all_locally_closed().into_iter().filter(|s| !s.is_empty()).collect();
        for (m, n) in sets.iter().flat_map(|m| sets.iter().map(move |n| (m, n))) {
            let r = four_term_check(&p, m, n);
            ensure(r.exact, || format!("{name}: {:?} {:?}: {}", m.members, n.members, r.detail))?;
            pairs += 1;
        }
        largest = largest.max(p.len());
    }
    Ok(format!("{pairs} pairs, posets up to {largest} elements"))
}

fn suspension() -> Outcome {
    let mut checked = 0;
    for (name, arr) in desk() {
        let ip = build_poset(&arr);
        for m in ip.strata().into_iter().filter(|&m| m != ip.top()) {
            let s = stratum_complex(&ip, m);
            let interval = interval_complex(&ip, m).map_err(|e| e.to_string())?;
            for n in [2, 3, 4, 6] {
                let hs = homology_mod_n(&s, n).map_err(|e| e.to_string())?;
                let hi = homology_mod_n(&interval, n).map_err(|e| e.to_string())?;
                let lo = s.min_degree().min(interval.min_degree() + 2);
                let top = s.max_degree().max(interval.max_degree() + 2);
                for deg in lo..=top {
                    let mut a = hs.orders(deg);
                    let mut b = hi.orders(deg - 2);
                    a.sort_unstable();
                    b.sort_unstable();
                    ensure(a == b, || format!("{name} {} n={n} degree {deg}: {a:?} vs {b:?}", ip.name(m)))?;
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (stratum, n) cases"))
}

fn transverse() -> Outcome {
    let mut certs = 0;
    for (name, arr) in desk() {
        let ip = build_poset(&arr);
        let plain = decompose(&arr, 3).map_err(|e| e.to_string())?;
        for seed in 0..5 {
            let t = construct_transverse(&ip, seed).map_err(|e| format!("{name} seed {seed}: {e}"))?;
            let r = verify_transverse(&ip, &t);
            ensure(r.all_true(), || format!("{name} seed {seed}: {:?}", r.failures))?;
            let framed = decompose_with_frame(&ip, &t, 3).map_err(|e| e.to_string())?;
            ensure(framed.betti == plain.betti, || format!("{name} seed {seed}: ranks differ"))?;
            certs += 1;
        }
    }
    Ok(format!("{certs} certificates"))
}

fn line(a: i64, b: i64, c: i64) -> AffineSubspace {
    AffineSubspace::from_i64_equations(2, &[&[a, b, c]])
}

fn restriction() -> Outcome {
    let arr = catalog::transverse_lines();
    let ip = build_poset(&arr);
    let examples = [
        ("generic line", line(1, 1, 1)),
        ("line through the origin", line(1, -2, 0)),
        ("line inside a stratum", line(1, 0, 0)),
    ];
    for n in [2u64, 3, 5, 6] {
        for (label, v) in &examples {
            let r = restriction_map(&arr, v, n).map_err(|e| e.to_string())?;
            let inside = arr.members().iter().any(|m| m.subspace.contains(v).unwrap());
            for a in ip.strata() {
                let e = r.entries.iter().find(|e| e.source == ip.name(a)).ok_or("missing entry")?;
                let image = ip.element(a).intersect(v).unwrap();
                let kept = !inside
                    && image
                        .dim()
                        .is_some_and(|d| v.dim().unwrap() - d == ip.codim(a).unwrap());
                match (&e.block, kept) {
                    (RestrictionBlock::Zero { .. }, false) => {}
                    (RestrictionBlock::Map { target, matrices }, true) => {
                        let t = r.target_poset.index_by_name(target).map_err(|e| e.to_string())?;
                        ensure(r.target_poset.element(t) == &image, || format!("{label}: wrong target"))?;
                        ensure(e.twist_weight == -(e.codim as i64), || "weight changed".into())?;
                        // h_A(V) and h_{A ∩ V'}(V') are both Z/n in degree cd A here
                        let c = matrices
                            .get(&e.codim)
                            .and_then(|m| m.first())
                            .and_then(|row| row.first())
                            .copied()
                            .unwrap_or(0);
                        ensure(gcd(c, n) == 1, || format!("{label} n={n}: {} -> {c}", e.source))?;
                    }
                    (b, _) => return Err(format!("{label} n={n}: {} gives {b:?}", e.source)),
                }
            }
        }
    }
    Ok("three examples, n in {2, 3, 5, 6}".into())
}

fn cup_laws() -> Outcome {
    let mut tables = 0;
    for (name, arr) in desk() {
        let ip = build_poset(&arr);
        for n in 2..=6 {
            let t = cup_table_poset(&ip, n).map_err(|e| format!("{name}: {e}"))?;
            for (law, bad) in [
                ("unit", unit_violations(&ip, &t)),
                ("vanishing", vanishing_violations(&ip, &t)),
                ("commutativity", commutativity_violations(&t)),
                ("associativity", associativity_violations(&t)),
            ] {
                ensure(bad.is_empty(), || format!("{name} n={n} {law}: {bad:?}"))?;
            }
            tables += 1;
        }
    }
    Ok(format!("{tables} tables"))
}

fn external_product() -> Outcome {
    let mut instances = 0;
    for (name, arr) in desk() {
        let ip = build_poset(&arr);
        for a in ip.strata() {
            for b in ip.strata() {
                let ep = external_product_chain_map(ip.poset(), &ip.singleton(a), ip.poset(), &ip.singleton(b))
                    .map_err(|e| format!("{name}: {e}"))?;
                ep.dual_map.check(&ep.product, &ep.tensor).map_err(|e| e.to_string())?;
                instances += 1;
            }
        }
    }
    let p = build_poset(&catalog::transverse_lines()).poset().clone();
    let sets: Vec<_> = p.all_locally_closed().into_iter().filter(|s| !s.is_empty()).collect();
    for m1 in &sets {
        for m2 in &sets {
            let ep = external_product_chain_map(&p, m1, &p, m2).map_err(|e| e.to_string())?;
            ep.dual_map.check(&ep.product, &ep.tensor).map_err(|e| e.to_string())?;
            instances += 1;
        }
    }
    Ok(format!("{instances} instances"))
}

fn sheaf_comparison() -> Outcome {
    let (mut sections, mut stalkwise, mut pairs) = (0, 0, 0);
    for (name, arr) in desk() {
        let ip = build_poset(&arr);
        let p = ip.poset();
        for a in ip.strata() {
            let interval = p.closed_interval(a, ip.top());
            let sub = p.subposet(&interval);
            let bottom = interval.iter().position(|&x| x == a).unwrap();
            let top = interval.iter().position(|&x| x == ip.top()).unwrap();
            let k = open_point_support_sections(&sub, 4, bottom, top).map_err(|e| e.to_string())?;
            let s = stratum_complex(&ip, a).dual();
            for m in k.min_degree().min(s.min_degree())..=k.max_degree().max(s.max_degree()) {
                let labels: Vec<Vec<usize>> =
                    k.basis(m).iter().map(|c| c.iter().map(|&x| interval[x]).collect()).collect();
                ensure(labels == s.basis(m) && k.coboundary(m) == s.coboundary(m), || {
                    format!("{name} {} degree {m}", ip.name(a))
                })?;
            }
            sections += 1;
        }
        for x in 0..p.len() {
            let f = PosetSheaf::skyscraper(p, 6, x, &[6]).map_err(|e| e.to_string())?;
            ensure(stalkwise_quis_check(&f), || format!("{name}: skyscraper at {}", p.name(x)))?;
            stalkwise += 1;
        }
        let f = PosetSheaf::extension_by_zero_at_open_point(p, 6, ip.top()).map_err(|e| e.to_string())?;
        ensure(stalkwise_quis_check(&f), || format!("{name}: extension by zero"))?;
        stalkwise += 1;
        for n in [2, 3] {
            let table = cup_table_poset(&ip, n).map_err(|e| e.to_string())?;
            let r = dgm_formula_check(&ip, &table).map_err(|e| e.to_string())?;
            ensure(r.agrees(), || format!("{name} n={n}: {:?}", r.mismatches))?;
            pairs += r.pairs_checked;
        }
        for a in ip.strata() {
            for b in ip.strata() {
                let ok = kunneth_with_support_check(&ip, a, b, 6).map_err(|e| e.to_string())?;
                ensure(ok, || format!("{name}: Künneth with support at {} x {}", ip.name(a), ip.name(b)))?;
            }
        }
    }
    Ok(format!(
        "{sections} support complexes, {stalkwise} stalkwise checks, {pairs} transverse pairs"
    ))
}

fn determinism() -> Outcome {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let sub = data.join("diagonal.json");
    let sub = sub.to_str().unwrap();
    let mut runs = 0;
    for spec in ["gm.json", "transverse_lines.json", "braid3.json", "skew_axes.json"] {
        let spec = data.join(spec);
        let spec = spec.to_str().unwrap();
        let mut commands: Vec<Vec<&str>> = vec![
            vec!["lattice", spec],
            vec!["betti", spec],
            vec!["decompose", spec],
            vec!["cup", spec],
            vec!["verify-beta", spec, "--seed", "7"],
            vec!["sheaf-check", spec],
            vec!["oracle", spec, "--q", "5"],
        ];
        if spec.ends_with("transverse_lines.json") {
            commands.push(vec!["restrict", spec, "--subspace", sub]);
        }
        for mut args in commands {
            for format in ["json", "text"] {
                args.extend(["--format", format]);
                let once = Command::new(env!("CARGO_BIN_EXE_arrcoh")).args(&args).output().unwrap();
                let twice = Command::new(env!("CARGO_BIN_EXE_arrcoh")).args(&args).output().unwrap();
                ensure(once.status.success(), || {
                    format!("{args:?}: {}", String::from_utf8_lossy(&once.stderr))
                })?;
                ensure(once.stdout == twice.stdout, || format!("{args:?} differs between runs"))?;
                args.truncate(args.len() - 2);
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} command pairs byte-identical"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("point complement", point_complement),
        ("products of punctured lines", punctured_lines),
        ("hyperplane Poincaré polynomials", poincare_polynomials),
        ("F_q point counts", point_counts),
        ("four-term exactness", four_term),
        ("suspension identity", suspension),
        ("transverse certificates", transverse),
        ("restriction properties", restriction),
        ("cup-product algebra laws", cup_laws),
        ("external product chain map", external_product),
        ("poset-sheaf comparison", sheaf_comparison),
        ("determinism", determinism),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (label, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|payload| {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {label}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {label}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
