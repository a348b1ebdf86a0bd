//! Command dispatch and the report document.

use std::collections::BTreeMap;

use arrcoh::arrangement::{build_poset, count_points_fq, ArrangementError, IntersectionPoset};
use arrcoh::cup::{
    associativity_violations, commutativity_violations, cup_table_poset, dgm_formula_check, unit_violations,
    vanishing_violations, CupEntry, CupTable, DgmReport,
};
use arrcoh::decomposition::{
    decompose_poset, decompose_with_frame, mobius_poincare, restriction_map, DecompositionReport, RestrictionEntry,
};
use arrcoh::linear::{format_rational, AffineSubspace};
use arrcoh::nerve::stratum_complex;
use arrcoh::sheaf::{open_point_support_sections, stalkwise_quis_check, PosetSheaf};
use arrcoh::transverse::{construct_transverse, verify_transverse, Construction, TransverseReport};
use serde::Serialize;

use crate::error::CliError;
use crate::spec::{parse_subspace_str, read_file, ParsedSpec, SpecEcho, SubspaceEcho};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Lattice,
    Betti,
    Decompose,
    Cup,
    Restrict,
    VerifyBeta,
    SheafCheck,
    Oracle,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Lattice => "lattice",
            Command::Betti => "betti",
            Command::Decompose => "decompose",
            Command::Cup => "cup",
            Command::Restrict => "restrict",
            Command::VerifyBeta => "verify-beta",
            Command::SheafCheck => "sheaf-check",
            Command::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub seed: u64,
    pub subspace: Option<std::path::PathBuf>,
    pub q: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ElementSummary {
    pub name: String,
    pub dim: Option<usize>,
    pub codim: Option<usize>,
    pub equations: Vec<Vec<String>>,
    pub added_by_closure: bool,
    pub mobius_to_top: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PosetSummary {
    pub elements: Vec<ElementSummary>,
    /// Covering relations `(lower, upper)`.
    pub covers: Vec<(String, String)>,
    pub added_by_closure: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupSummary {
    pub degree: usize,
    pub homological_degree: i64,
    pub orders: Vec<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SummandSummary {
    pub name: String,
    pub codim: usize,
    pub twist_weight: i64,
    pub groups: Vec<GroupSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionSummary {
    pub modulus: u64,
    pub betti: Vec<usize>,
    pub summands: Vec<SummandSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BettiSummary {
    pub modulus: u64,
    pub betti: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductBlock {
    pub left: String,
    pub left_degree: usize,
    pub right: String,
    pub right_degree: usize,
    pub target: String,
    pub degree: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CupSummary {
    pub modulus: u64,
    /// Unordered summand pairs in positive degrees with some nonzero product.
    pub nonzero_blocks: Vec<ProductBlock>,
    pub entries: Vec<CupEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RestrictionSummary {
    pub subspace: SubspaceEcho,
    pub target_complement_empty: bool,
    pub target_elements: Vec<String>,
    pub entries: Vec<RestrictionEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrameImage {
    pub element: String,
    pub equations: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BetaCertificate {
    pub seed: u64,
    pub attempts: usize,
    pub construction: Construction,
    pub basepoint: Vec<String>,
    pub form: Vec<Vec<String>>,
    pub beta: Vec<FrameImage>,
    pub report: TransverseReport,
    /// Betti numbers with codimensions read off the frame.
    pub frame_betti: Vec<usize>,
    pub frame_ranks_match: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointCheck {
    pub point: String,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SheafSummary {
    pub modulus: u64,
    /// Stalkwise exactness of `F -> G(F)` for the skyscraper `Z/n` at each point.
    pub skyscrapers: Vec<PointCheck>,
    /// The same for the extension by zero of `Z/n` from the top.
    pub open_point_extension: bool,
    /// Sections with support in `{A}` agree with the dual of `S^{{A},{V}}`.
    pub support_sections: Vec<PointCheck>,
    pub dgm: DgmReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleSummary {
    pub q: u64,
    pub brute_force: i64,
    pub inclusion_exclusion: i64,
    pub hyperplane_arrangement: bool,
    pub poincare_decompose: Vec<i64>,
    /// `sum |mu(X, V)| t^{cd X}`, only meaningful for hyperplanes.
    pub poincare_mobius: Option<Vec<i64>>,
}

/// Everything one invocation prints. Optional sections are omitted.
#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub command: String,
    pub input: SpecEcho,
    pub poset: PosetSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betti: Option<BettiSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cup: Option<CupSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restriction: Option<RestrictionSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_certificate: Option<BetaCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sheaf_check: Option<SheafSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
}

fn rows(s: &AffineSubspace) -> Vec<Vec<String>> {
    s.equations()
        .row_vecs()
        .iter()
        .map(|r| r.iter().map(format_rational).collect())
        .collect()
}

pub fn poset_summary(ip: &IntersectionPoset) -> PosetSummary {
    let p = ip.poset();
    let added = ip.added_by_closure();
    let elements = (0..ip.len())
        .map(|i| ElementSummary {
            name: ip.name(i).to_string(),
            dim: ip.dim(i),
            codim: ip.codim(i),
            equations: rows(ip.element(i)),
            added_by_closure: added.contains(&i),
            mobius_to_top: ip.mobius(i, ip.top()).expect("every element lies below the top"),
        })
        .collect();
    let mut covers = Vec::new();
    for x in 0..p.len() {
        for y in 0..p.len() {
            if p.lt(x, y) && p.open_interval(x, y).is_empty() {
                covers.push((p.name(x).to_string(), p.name(y).to_string()));
            }
        }
    }
    PosetSummary {
        elements,
        covers,
        added_by_closure: added.iter().map(|&i| ip.name(i).to_string()).collect(),
    }
}

pub fn decomposition_summary(r: &DecompositionReport) -> DecompositionSummary {
    DecompositionSummary {
        modulus: r.modulus,
        betti: r.betti.clone(),
        summands: r
            .summands
            .iter()
            .map(|s| SummandSummary {
                name: s.name.clone(),
                codim: s.codim,
                twist_weight: s.twist_weight,
                groups: s
                    .nonzero_degrees()
                    .into_iter()
                    .map(|p| GroupSummary {
                        degree: p,
                        homological_degree: s.homological_degree(p),
                        orders: s.group(p).map(|g| g.orders()).unwrap_or_default(),
                    })
                    .collect(),
            })
            .collect(),
    }
}

fn decompose(ip: &IntersectionPoset, n: u64) -> Result<DecompositionReport, CliError> {
    decompose_poset(ip, n).map_err(CliError::computation)
}

fn checked_cup_table(ip: &IntersectionPoset, n: u64) -> Result<CupTable, CliError> {
    let table = cup_table_poset(ip, n).map_err(CliError::computation)?;
    for (law, bad) in [
        ("unit", unit_violations(ip, &table)),
        ("vanishing", vanishing_violations(ip, &table)),
        ("graded_commutativity", commutativity_violations(&table)),
        ("associativity", associativity_violations(&table)),
    ] {
        if !bad.is_empty() {
            return Err(CliError::invariant(law, bad.join("; ")));
        }
    }
    Ok(table)
}

fn cup_summary(table: CupTable) -> CupSummary {
    // x ∪ y and y ∪ x agree up to sign, so blocks are unordered pairs
    let mut blocks: BTreeMap<((String, usize), (String, usize)), ProductBlock> = BTreeMap::new();
    for e in &table.entries {
        if e.left_degree == 0 || e.right_degree == 0 || e.is_zero() {
            continue;
        }
        let Some(target) = &e.target else { continue };
        let (x, y) = ((e.left.clone(), e.left_degree), (e.right.clone(), e.right_degree));
        blocks
            .entry(if x <= y { (x, y) } else { (y, x) })
            .or_insert_with(|| ProductBlock {
                left: e.left.clone(),
                left_degree: e.left_degree,
                right: e.right.clone(),
                right_degree: e.right_degree,
                target: target.clone(),
                degree: e.degree,
            });
    }
    CupSummary {
        modulus: table.modulus,
        nonzero_blocks: blocks.into_values().collect(),
        entries: table.entries,
    }
}

fn beta_certificate(ip: &IntersectionPoset, n: u64, seed: u64) -> Result<BetaCertificate, CliError> {
    let t = construct_transverse(ip, seed).map_err(|e| CliError::Transverse(e.to_string()))?;
    let report = verify_transverse(ip, &t);
    if !report.all_true() {
        return Err(CliError::invariant("transversality", report.failures.join("; ")));
    }
    let frame = decompose_with_frame(ip, &t, n).map_err(CliError::computation)?;
    let plain = decompose(ip, n)?;
    if frame.betti != plain.betti {
        return Err(CliError::invariant(
            "frame_ranks",
            format!("{:?} from the frame, {:?} from the poset", frame.betti, plain.betti),
        ));
    }
    Ok(BetaCertificate {
        seed,
        attempts: t.attempts,
        construction: t.construction,
        basepoint: t.basepoint.iter().map(format_rational).collect(),
        form: t
            .form
            .row_vecs()
            .iter()
            .map(|r| r.iter().map(format_rational).collect())
            .collect(),
        beta: t
            .beta
            .iter()
            .enumerate()
            .map(|(i, b)| FrameImage {
                element: ip.name(i).to_string(),
                equations: rows(b),
            })
            .collect(),
        report,
        frame_betti: frame.betti,
        frame_ranks_match: true,
    })
}

/// Whether the sections of `G(epsilon_{V!} Z/n)` supported at `a` equal the
/// dual of `S^{{a},{V}}` degree by degree, matrices included.
fn support_sections_match(ip: &IntersectionPoset, a: usize, n: u64) -> Result<bool, CliError> {
    let interval = ip.poset().closed_interval(a, ip.top());
    let sub = ip.poset().subposet(&interval);
    let bottom = interval.iter().position(|&x| x == a).expect("a lies in [a, V]");
    let top = interval.iter().position(|&x| x == ip.top()).expect("V lies in [a, V]");
    let k = open_point_support_sections(&sub, n, bottom, top).map_err(CliError::computation)?;
    let s = stratum_complex(ip, a).dual();
    let lo = k.min_degree().min(s.min_degree());
    let hi = k.max_degree().max(s.max_degree());
    for m in lo..=hi {
        if k.rank(m) != s.rank(m) {
            return Ok(false);
        }
        let relabel: Vec<Vec<usize>> = k.basis(m).iter().map(|c| c.iter().map(|&x| interval[x]).collect()).collect();
        if relabel.as_slice() != s.basis(m) || k.coboundary(m) != s.coboundary(m) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn sheaf_summary(ip: &IntersectionPoset, n: u64) -> Result<SheafSummary, CliError> {
    let p = ip.poset();
    let mut skyscrapers = Vec::new();
    for x in 0..p.len() {
        let f = PosetSheaf::skyscraper(p, n, x, &[n]).map_err(CliError::computation)?;
        skyscrapers.push(PointCheck {
            point: p.name(x).to_string(),
            passed: stalkwise_quis_check(&f),
        });
    }
    let f = PosetSheaf::extension_by_zero_at_open_point(p, n, ip.top()).map_err(CliError::computation)?;
    let open_point_extension = stalkwise_quis_check(&f);
    let support_sections = ip
        .strata()
        .into_iter()
        .map(|a| {
            Ok(PointCheck {
                point: ip.name(a).to_string(),
                passed: support_sections_match(ip, a, n)?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let table = cup_table_poset(ip, n).map_err(CliError::computation)?;
    let dgm = dgm_formula_check(ip, &table).map_err(CliError::computation)?;

    let failed: Vec<String> = skyscrapers
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("skyscraper at {}", c.point))
        .chain((!open_point_extension).then(|| "extension by zero from the top".to_string()))
        .chain(
            support_sections
                .iter()
                .filter(|c| !c.passed)
                .map(|c| format!("support sections at {}", c.point)),
        )
        .chain(dgm.mismatches.iter().cloned())
        .collect();
    if !failed.is_empty() {
        return Err(CliError::invariant("sheaf_comparison", failed.join("; ")));
    }
    Ok(SheafSummary {
        modulus: n,
        skyscrapers,
        open_point_extension,
        support_sections,
        dgm,
    })
}

fn oracle_summary(parsed: &ParsedSpec, ip: &IntersectionPoset, q: u64) -> Result<OracleSummary, CliError> {
    let count = count_points_fq(&parsed.arrangement, q).map_err(|e| match e {
        ArrangementError::NotPrime(q) => CliError::NotPrime(q),
        e @ ArrangementError::TooManyPoints { .. } => CliError::TooManyPoints(e.to_string()),
        e @ ArrangementError::CountMismatch { .. } => CliError::invariant("point_count", e.to_string()),
        other => CliError::computation(other),
    })?;
    let decomposed = decompose(ip, parsed.modulus)?.poincare_polynomial();
    let hyperplanes = parsed.arrangement.is_hyperplane_arrangement();
    let mobius = hyperplanes.then(|| mobius_poincare(ip));
    if let Some(m) = &mobius {
        if *m != decomposed {
            return Err(CliError::invariant(
                "poincare_polynomial",
                format!("{decomposed:?} from decompose, {m:?} from the Möbius function"),
            ));
        }
    }
    Ok(OracleSummary {
        q,
        brute_force: count.brute_force,
        inclusion_exclusion: count.inclusion_exclusion,
        hyperplane_arrangement: hyperplanes,
        poincare_decompose: decomposed,
        poincare_mobius: mobius,
    })
}

/// Runs one command on a parsed arrangement.
pub fn run_command(cmd: Command, parsed: &ParsedSpec, opts: &Options) -> Result<ReportDocument, CliError> {
    let ip = build_poset(&parsed.arrangement);
    let n = parsed.modulus;
    let mut doc = ReportDocument {
        command: cmd.name().to_string(),
        input: parsed.echo.clone(),
        poset: poset_summary(&ip),
        betti: None,
        decomposition: None,
        cup: None,
        restriction: None,
        beta_certificate: None,
        sheaf_check: None,
        oracle: None,
    };
    match cmd {
        Command::Lattice => {}
        Command::Betti => {
            doc.betti = Some(BettiSummary {
                modulus: n,
                betti: decompose(&ip, n)?.betti,
            });
        }
        Command::Decompose => doc.decomposition = Some(decomposition_summary(&decompose(&ip, n)?)),
        Command::Cup => {
            doc.decomposition = Some(decomposition_summary(&decompose(&ip, n)?));
            doc.cup = Some(cup_summary(checked_cup_table(&ip, n)?));
        }
        Command::Restrict => {
            let path = opts.subspace.as_ref().ok_or(CliError::MissingFlag("--subspace <path>"))?;
            let (vprime, echo) = parse_subspace_str(&read_file(path)?, parsed.arrangement.ambient_dim())?;
            let r = restriction_map(&parsed.arrangement, &vprime, n).map_err(CliError::computation)?;
            let target_elements = (0..r.target_poset.len()).map(|i| r.target_poset.name(i).to_string()).collect();
            doc.restriction = Some(RestrictionSummary {
                subspace: echo,
                target_complement_empty: r.target_complement_empty,
                target_elements,
                entries: r.entries,
            });
        }
        Command::VerifyBeta => doc.beta_certificate = Some(beta_certificate(&ip, n, opts.seed)?),
        Command::SheafCheck => doc.sheaf_check = Some(sheaf_summary(&ip, n)?),
        Command::Oracle => {
            let q = opts.q.ok_or(CliError::MissingFlag("--q <prime>"))?;
            doc.oracle = Some(oracle_summary(parsed, &ip, q)?);
        }
    }
    Ok(doc)
}
