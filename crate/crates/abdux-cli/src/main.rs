//! `abdux` — command-line front end for abductive reasoning with
//! integrity constraints and arbitrariness-minimal explanations.
//!
//! Exit codes: 0 = success / "yes", 1 = "no" / nothing found,
//! 2 = usage or input error, 3 = a resource cap was exceeded.

use std::collections::BTreeSet;
use std::fs;
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use abdux::abduction::{self, AgreementOptions, AgreementType};
use abdux::arbitrariness::{self, ArbitrarinessError, ArbitrarinessOptions};
use abdux::core::{constants_of, AbductiveTheory, Explanation, Observation};
use abdux::parser;
use abdux::reductions::{self, ReductionError};
use abdux::search::{self, SearchBounds, SearchError, SearchOptions, Searcher};
use abdux::semantics::{self, SemanticsError};

const EXIT_YES: i32 = 0;
const EXIT_NO: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_CAP: i32 = 3;

#[derive(Parser)]
#[command(
    name = "abdux",
    version,
    about = "Abductive logic programming with integrity constraints and a degree-of-arbitrariness measure on explanations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TypeArg {
    A,
    B,
    C,
    D,
}

impl From<TypeArg> for AgreementType {
    fn from(t: TypeArg) -> Self {
        match t {
            TypeArg::A => AgreementType::A,
            TypeArg::B => AgreementType::B,
            TypeArg::C => AgreementType::C,
            TypeArg::D => AgreementType::D,
        }
    }
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Agreement type used for explanation checks. On stratified
    /// theories all four coincide.
    #[arg(long = "type", value_enum, default_value = "d")]
    ty: TypeArg,
    /// Read agreement C literally (universal condition only), without
    /// the existential conjunct that keeps the A ⊆ B ⊆ C ⊆ D chain.
    #[arg(long)]
    agreement_c_literal: bool,
    /// Cap on total occurrences in E for degree computations.
    #[arg(long, default_value_t = arbitrariness::DEFAULT_OCCURRENCE_CAP)]
    cap_occurrences: usize,
    /// Cap on ground atoms for brute-force model enumeration
    /// (non-stratified theories only).
    #[arg(long, default_value_t = semantics::DEFAULT_ATOM_CAP)]
    cap_atoms: usize,
    /// Emit machine-readable JSON instead of prose.
    #[arg(long)]
    json: bool,
}

impl CommonOpts {
    fn agreement(&self) -> AgreementOptions {
        AgreementOptions {
            c_literal: self.agreement_c_literal,
            atom_cap: self.cap_atoms,
        }
    }

    fn arbitrariness(&self) -> ArbitrarinessOptions {
        ArbitrarinessOptions {
            occurrence_cap: self.cap_occurrences,
            agreement: self.agreement(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check whether an explanation file explains an observation;
    /// reports all four agreement types, constrainedness and degree.
    Check {
        #[arg(short = 't', long = "theory")]
        theory: PathBuf,
        #[arg(short = 'o', long = "observation")]
        observation: PathBuf,
        #[arg(short = 'e', long = "explanation")]
        explanation: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Print the degree of arbitrariness of an explanation.
    Degree {
        #[arg(short = 't', long = "theory")]
        theory: PathBuf,
        #[arg(short = 'o', long = "observation")]
        observation: PathBuf,
        #[arg(short = 'e', long = "explanation")]
        explanation: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Decide whether an explanation is constrained (degree 0).
    Constrained {
        #[arg(short = 't', long = "theory")]
        theory: PathBuf,
        #[arg(short = 'o', long = "observation")]
        observation: PathBuf,
        #[arg(short = 'e', long = "explanation")]
        explanation: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Search for explanations of an observation.
    Find {
        #[arg(short = 't', long = "theory")]
        theory: PathBuf,
        #[arg(short = 'o', long = "observation")]
        observation: PathBuf,
        /// Report the first constrained explanation (or, combined with
        /// --minimality / --rank-arbitrariness, keep only constrained
        /// explanations after filtering).
        #[arg(long)]
        constrained: bool,
        #[arg(long, default_value_t = 2)]
        max_add: usize,
        #[arg(long, default_value_t = 2)]
        max_del: usize,
        /// Post-filter: none, subset (subset-minimal), card
        /// (cardinality-minimal).
        #[arg(long, value_enum, default_value = "none")]
        minimality: MinimalityArg,
        /// Sort the surviving explanations by ascending degree.
        #[arg(long)]
        rank_arbitrariness: bool,
        /// Add K canonical fresh constants to the add-part domain.
        #[arg(long, default_value_t = 0)]
        with_fresh: usize,
        /// Cap on the number of candidate pairs.
        #[arg(long, default_value_t = search::DEFAULT_CANDIDATE_CAP)]
        cap_candidates: u64,
        /// Worker threads for degree/constrainedness verification.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Use the polynomial path for non-recursive Horn theories
        /// without constraints (implies --constrained).
        #[arg(long)]
        tractable: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Ground a theory and report its classification flags.
    Classify {
        #[arg(short = 't', long = "theory")]
        theory: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Generate a reduction instance from a DIMACS CNF or QDIMACS file.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Brute-force oracles for DIMACS CNF and QDIMACS inputs.
    Oracle {
        #[command(subcommand)]
        kind: OracleKind,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MinimalityArg {
    None,
    Subset,
    Card,
}

#[derive(Args, Clone)]
struct GenArgs {
    /// Input file (DIMACS CNF for the sat generators, QDIMACS with an
    /// ∃ block then a ∀ block for the qbf generators).
    #[arg(short = 'i', long = "input")]
    input: PathBuf,
    /// Output directory for theory.abd / observation.obs /
    /// candidate.exp.
    #[arg(short = 'd', long = "out-dir")]
    out_dir: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum GenKind {
    /// Non-recursive program with negation; bundled candidate is
    /// arbitrary iff the CNF is satisfiable.
    Thm4Sat(GenArgs),
    /// Non-recursive program with negation from ∃X∀Y ¬(matrix);
    /// a constrained explanation exists iff that formula is true.
    Thm4Qbf(GenArgs),
    /// Recursive Horn program; bundled candidate arbitrary iff
    /// satisfiable.
    Thm5Sat(GenArgs),
    /// Recursive Horn program from ∃X∀Y ¬(matrix).
    Thm5Qbf(GenArgs),
    /// Non-recursive Horn program with integrity constraints; bundled
    /// candidate arbitrary iff satisfiable.
    Thm6Sat(GenArgs),
}

#[derive(Subcommand)]
enum OracleKind {
    /// Satisfiability of a DIMACS CNF by exhaustive enumeration.
    Sat {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Truth of a QDIMACS ∃X∀Y file by exhaustive enumeration. By
    /// default the matrix is read as a CNF (standard semantics);
    /// --dnf-dual evaluates ∃X∀Y ¬(matrix), the formula the qbf
    /// generators encode.
    Qbf {
        file: PathBuf,
        #[arg(long)]
        dnf_dual: bool,
        #[arg(long)]
        json: bool,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn cap(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_CAP,
            message: message.into(),
        }
    }
}

impl From<parser::ParseError> for Failure {
    fn from(e: parser::ParseError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<SemanticsError> for Failure {
    fn from(e: SemanticsError) -> Self {
        match e {
            SemanticsError::AtomCapExceeded { .. } => Failure::cap(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<abduction::AbductionError> for Failure {
    fn from(e: abduction::AbductionError) -> Self {
        match e {
            abduction::AbductionError::Semantics(s) => s.into(),
        }
    }
}

impl From<ArbitrarinessError> for Failure {
    fn from(e: ArbitrarinessError) -> Self {
        match e {
            ArbitrarinessError::OccurrenceCapExceeded { .. } => Failure::cap(e.to_string()),
            ArbitrarinessError::Abduction(inner) => inner.into(),
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::CandidateCapExceeded { .. } => Failure::cap(e.to_string()),
            SearchError::Abduction(inner) => inner.into(),
            SearchError::Arbitrariness(inner) => inner.into(),
            SearchError::Semantics(inner) => inner.into(),
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<ReductionError> for Failure {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::VarCapExceeded { .. } => Failure::cap(e.to_string()),
            ReductionError::Template(inner) => inner.into(),
            _ => Failure::usage(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {}", path.display(), e)))
}

fn load_theory(path: &Path) -> Result<AbductiveTheory, Failure> {
    Ok(parser::parse_theory_named(
        &path.display().to_string(),
        &read(path)?,
    )?)
}

fn load_observation(path: &Path, theory: &AbductiveTheory) -> Result<Observation, Failure> {
    let obs = parser::parse_observation_named(&path.display().to_string(), &read(path)?)?;
    theory
        .check_observation(&obs)
        .map_err(|e| Failure::usage(e.to_string()))?;
    Ok(obs)
}

fn load_explanation(path: &Path) -> Result<Explanation, Failure> {
    Ok(parser::parse_explanation_named(
        &path.display().to_string(),
        &read(path)?,
    )?)
}

fn atoms_json(atoms: &BTreeSet<abdux::core::GroundAtom>) -> serde_json::Value {
    json!(atoms.iter().map(|a| a.to_string()).collect::<Vec<_>>())
}

fn explanation_json(d: &Explanation) -> serde_json::Value {
    json!({ "add": atoms_json(&d.add), "del": atoms_json(&d.del) })
}

fn explanation_inline(d: &Explanation) -> String {
    let side = |s: &BTreeSet<abdux::core::GroundAtom>| {
        let items: Vec<String> = s.iter().map(|a| a.to_string()).collect();
        format!("{{{}}}", items.join(", "))
    };
    format!("({}, {})", side(&d.add), side(&d.del))
}

fn stats_json(candidates: u64, start: Instant) -> serde_json::Value {
    json!({
        "candidates_checked": candidates,
        "time_ms": start.elapsed().as_millis() as u64,
    })
}

fn cmd_check(
    theory: &Path,
    observation: &Path,
    explanation: &Path,
    common: &CommonOpts,
) -> Result<i32, Failure> {
    let start = Instant::now();
    let t = load_theory(theory)?;
    let o = load_observation(observation, &t)?;
    let d = load_explanation(explanation)?;
    let agreement = common.agreement();

    let mut types = Vec::new();
    let mut rejection = None;
    for ty in AgreementType::ALL {
        let r = abduction::is_explanation(&t, &o, &d, ty, &agreement)?;
        if r.rejection.is_some() && rejection.is_none() {
            rejection = r.rejection;
        }
        types.push((ty, r.verdict));
    }
    let selected: AgreementType = common.ty.into();
    let verdict = types.iter().find(|(ty, _)| *ty == selected).unwrap().1;

    let (constrained, degree) = if verdict {
        let arb = common.arbitrariness();
        let deg = arbitrariness::degree(&t, &o, &d, selected, &arb)?;
        (Some(deg == 0), Some(deg))
    } else {
        (None, None)
    };

    if common.json {
        println!(
            "{}",
            json!({
                "verdict": verdict,
                "explanation": explanation_json(&d),
                "types": types
                    .iter()
                    .map(|(ty, v)| (ty.to_string(), json!(v)))
                    .collect::<serde_json::Map<_, _>>(),
                "constrained": constrained,
                "degree": degree,
                "stats": stats_json(0, start),
            })
        );
    } else {
        let yes: Vec<String> = types
            .iter()
            .filter(|(_, v)| *v)
            .map(|(ty, _)| ty.to_string())
            .collect();
        if verdict {
            print!("explanation: yes (types {})", yes.join(","));
        } else {
            print!("explanation: no");
        }
        match (constrained, degree) {
            (Some(c), Some(g)) => {
                println!(
                    ", constrained: {}, degree: {}",
                    if c { "yes" } else { "no" },
                    g
                )
            }
            _ => match rejection {
                Some(r) => println!(" ({})", r),
                None => println!(),
            },
        }
    }
    Ok(if verdict { EXIT_YES } else { EXIT_NO })
}

fn cmd_degree(
    theory: &Path,
    observation: &Path,
    explanation: &Path,
    common: &CommonOpts,
) -> Result<i32, Failure> {
    let start = Instant::now();
    let t = load_theory(theory)?;
    let o = load_observation(observation, &t)?;
    let d = load_explanation(explanation)?;
    let ty: AgreementType = common.ty.into();
    match arbitrariness::degree(&t, &o, &d, ty, &common.arbitrariness()) {
        Ok(deg) => {
            if common.json {
                println!(
                    "{}",
                    json!({
                        "verdict": true,
                        "explanation": explanation_json(&d),
                        "degree": deg,
                        "stats": stats_json(0, start),
                    })
                );
            } else {
                println!("{}", deg);
            }
            Ok(EXIT_YES)
        }
        Err(ArbitrarinessError::NotAnExplanation { reason }) => {
            if common.json {
                println!(
                    "{}",
                    json!({
                        "verdict": false,
                        "explanation": explanation_json(&d),
                        "degree": null,
                        "reason": reason,
                        "stats": stats_json(0, start),
                    })
                );
            } else {
                eprintln!("not an explanation: {}", reason);
            }
            Ok(EXIT_NO)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_constrained(
    theory: &Path,
    observation: &Path,
    explanation: &Path,
    common: &CommonOpts,
) -> Result<i32, Failure> {
    let start = Instant::now();
    let t = load_theory(theory)?;
    let o = load_observation(observation, &t)?;
    let d = load_explanation(explanation)?;
    let ty: AgreementType = common.ty.into();
    match arbitrariness::is_constrained(&t, &o, &d, ty, &common.arbitrariness()) {
        Ok(c) => {
            if common.json {
                println!(
                    "{}",
                    json!({
                        "verdict": c,
                        "explanation": explanation_json(&d),
                        "stats": stats_json(0, start),
                    })
                );
            } else {
                println!("constrained: {}", if c { "yes" } else { "no" });
            }
            Ok(if c { EXIT_YES } else { EXIT_NO })
        }
        Err(ArbitrarinessError::NotAnExplanation { reason }) => {
            if common.json {
                println!(
                    "{}",
                    json!({
                        "verdict": false,
                        "explanation": explanation_json(&d),
                        "reason": reason,
                        "stats": stats_json(0, start),
                    })
                );
            } else {
                eprintln!("not an explanation: {}", reason);
            }
            Ok(EXIT_NO)
        }
        Err(e) => Err(e.into()),
    }
}

/// Degrees for a batch of explanations, fanned out over worker threads
/// in order-preserving chunks.
fn degrees_parallel(
    t: &AbductiveTheory,
    o: &Observation,
    ds: &[Explanation],
    ty: AgreementType,
    arb: &ArbitrarinessOptions,
    jobs: usize,
) -> Result<Vec<usize>, Failure> {
    if jobs <= 1 || ds.len() <= 1 {
        let mut out = Vec::with_capacity(ds.len());
        for d in ds {
            out.push(arbitrariness::degree(t, o, d, ty, arb)?);
        }
        return Ok(out);
    }
    let mut results: Vec<Result<usize, ArbitrarinessError>> = Vec::with_capacity(ds.len());
    for chunk in ds.chunks(jobs) {
        let mut chunk_results: Vec<Option<Result<usize, ArbitrarinessError>>> =
            vec![None; chunk.len()];
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for d in chunk {
                handles.push(scope.spawn(move || arbitrariness::degree(t, o, d, ty, arb)));
            }
            for (slot, h) in chunk_results.iter_mut().zip(handles) {
                *slot = Some(h.join().expect("degree worker panicked"));
            }
        });
        results.extend(chunk_results.into_iter().map(|r| r.unwrap()));
    }
    let mut out = Vec::with_capacity(results.len());
    for r in results {
        out.push(r.map_err(Failure::from)?);
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn cmd_find(
    theory: &Path,
    observation: &Path,
    constrained: bool,
    max_add: usize,
    max_del: usize,
    minimality: MinimalityArg,
    rank: bool,
    with_fresh: usize,
    cap_candidates: u64,
    jobs: usize,
    tractable: bool,
    common: &CommonOpts,
) -> Result<i32, Failure> {
    let start = Instant::now();
    let t = load_theory(theory)?;
    let o = load_observation(observation, &t)?;
    let ty: AgreementType = common.ty.into();
    let opts = SearchOptions {
        agreement: common.agreement(),
        occurrence_cap: common.cap_occurrences,
        candidate_cap: cap_candidates,
        with_fresh,
    };

    if tractable {
        let found = search::find_constrained_tractable(&t, &o, &opts)?;
        let bound = search::tractable_add_bound(&t, &o)?;
        return report_single(found, common, start, 0, SearchBounds::new(bound, 0));
    }

    let mut searcher = Searcher::new(&t, &o, ty, SearchBounds::new(max_add, max_del), opts)?;
    let post_filtering = !matches!(minimality, MinimalityArg::None) || rank;

    if constrained && !post_filtering {
        let found = if jobs <= 1 {
            searcher.find_constrained()?
        } else {
            find_constrained_parallel(&t, &o, &mut searcher, ty, common, jobs)?
        };
        let checked = searcher.stats().candidates_checked;
        let bounds = searcher.bounds();
        return report_single(found, common, start, checked, bounds);
    }

    if !post_filtering {
        // plain streaming find
        let mut count = 0u64;
        searcher.for_each_explanation(|d| {
            count += 1;
            if common.json {
                println!("{}", json!({ "explanation": explanation_json(d) }));
            } else {
                println!("{}", explanation_inline(d));
            }
            ControlFlow::Continue(())
        })?;
        let checked = searcher.stats().candidates_checked;
        if common.json {
            println!(
                "{}",
                json!({
                    "verdict": count > 0,
                    "found": count,
                    "stats": stats_json(checked, start),
                })
            );
        } else {
            println!(
                "found {} explanation(s), checked {} candidate(s) in {} ms",
                count,
                checked,
                start.elapsed().as_millis()
            );
        }
        return Ok(if count > 0 { EXIT_YES } else { EXIT_NO });
    }

    // enumerate, then compose the requested post-filters
    let mut found = searcher.enumerate()?;
    found = match minimality {
        MinimalityArg::None => found,
        MinimalityArg::Subset => searcher.filter_subset_minimal(&found)?,
        MinimalityArg::Card => searcher.filter_card_minimal(&found)?,
    };

    let arb = common.arbitrariness();
    let mut kept: Vec<(Explanation, Option<usize>)> = Vec::new();
    if constrained || rank {
        let degrees = degrees_parallel(&t, &o, &found, ty, &arb, jobs)?;
        for (d, deg) in found.into_iter().zip(degrees) {
            if !constrained || deg == 0 {
                kept.push((d, Some(deg)));
            }
        }
        if rank {
            kept.sort_by(|(d1, g1), (d2, g2)| g1.cmp(g2).then_with(|| d1.cmp(d2)));
        }
    } else {
        kept = found.into_iter().map(|d| (d, None)).collect();
    }

    let checked = searcher.stats().candidates_checked;
    for (d, deg) in &kept {
        if common.json {
            let mut obj = json!({ "explanation": explanation_json(d) });
            if let Some(g) = deg {
                obj["degree"] = json!(g);
            }
            println!("{}", obj);
        } else {
            match deg {
                Some(g) => println!("{}  degree: {}", explanation_inline(d), g),
                None => println!("{}", explanation_inline(d)),
            }
        }
    }
    if common.json {
        println!(
            "{}",
            json!({
                "verdict": !kept.is_empty(),
                "found": kept.len(),
                "stats": stats_json(checked, start),
            })
        );
    } else {
        println!(
            "found {} explanation(s), checked {} candidate(s) in {} ms",
            kept.len(),
            checked,
            start.elapsed().as_millis()
        );
    }
    Ok(if kept.is_empty() { EXIT_NO } else { EXIT_YES })
}

/// Order-preserving parallel constrained search: stream explanations,
/// verify constrainedness in chunks of `jobs` worker threads, return
/// the first hit in stream order.
fn find_constrained_parallel(
    t: &AbductiveTheory,
    o: &Observation,
    searcher: &mut Searcher,
    ty: AgreementType,
    common: &CommonOpts,
    jobs: usize,
) -> Result<Option<Explanation>, Failure> {
    let arb = common.arbitrariness();

    fn flush(
        t: &AbductiveTheory,
        o: &Observation,
        ty: AgreementType,
        arb: &ArbitrarinessOptions,
        buffer: &mut Vec<Explanation>,
    ) -> Result<Option<Explanation>, Failure> {
        let mut results: Vec<Option<Result<bool, ArbitrarinessError>>> = vec![None; buffer.len()];
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for d in buffer.iter() {
                handles.push(scope.spawn(move || arbitrariness::is_constrained(t, o, d, ty, arb)));
            }
            for (slot, h) in results.iter_mut().zip(handles) {
                *slot = Some(h.join().expect("constrainedness worker panicked"));
            }
        });
        for (d, r) in buffer.iter().zip(results) {
            match r.unwrap() {
                Ok(true) => return Ok(Some(d.clone())),
                Ok(false) => {}
                Err(e) => return Err(e.into()),
            }
        }
        buffer.clear();
        Ok(None)
    }

    let mut buffer: Vec<Explanation> = Vec::new();
    let mut answer: Option<Explanation> = None;
    let mut failure: Option<Failure> = None;
    searcher.for_each_explanation(|d| {
        buffer.push(d.clone());
        if buffer.len() >= jobs * 4 {
            match flush(t, o, ty, &arb, &mut buffer) {
                Ok(Some(hit)) => {
                    answer = Some(hit);
                    return ControlFlow::Break(());
                }
                Ok(None) => {}
                Err(e) => {
                    failure = Some(e);
                    return ControlFlow::Break(());
                }
            }
        }
        ControlFlow::Continue(())
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    if answer.is_none() && !buffer.is_empty() {
        answer = flush(t, o, ty, &arb, &mut buffer)?;
    }
    Ok(answer)
}

fn report_single(
    found: Option<Explanation>,
    common: &CommonOpts,
    start: Instant,
    checked: u64,
    bounds: SearchBounds,
) -> Result<i32, Failure> {
    let bounds_json = json!({ "max_add": bounds.max_add, "max_del": bounds.max_del });
    match found {
        Some(d) => {
            if common.json {
                println!(
                    "{}",
                    json!({
                        "verdict": true,
                        "explanation": explanation_json(&d),
                        "degree": 0,
                        "bounds": bounds_json,
                        "stats": stats_json(checked, start),
                    })
                );
            } else {
                println!("{}", explanation_inline(&d));
            }
            Ok(EXIT_YES)
        }
        None => {
            if common.json {
                println!(
                    "{}",
                    json!({
                        "verdict": false,
                        "explanation": null,
                        "bounds": bounds_json,
                        "stats": stats_json(checked, start),
                    })
                );
            } else {
                println!(
                    "no constrained explanation within bounds (max-add {}, max-del {})",
                    bounds.max_add, bounds.max_del
                );
            }
            Ok(EXIT_NO)
        }
    }
}

fn cmd_classify(theory: &Path, common: &CommonOpts) -> Result<i32, Failure> {
    let t = load_theory(theory)?;
    let gp = semantics::ground(t.rules(), &constants_of(&t))?;
    let c = gp.classify();
    if common.json {
        println!(
            "{}",
            json!({
                "stratified": c.stratified,
                "non_recursive": c.non_recursive,
                "horn": c.horn,
                "constraints": t.constraints().len(),
                "abducible_facts": t.abducible_facts().len(),
            })
        );
    } else {
        println!("stratified: {}", if c.stratified { "yes" } else { "no" });
        println!(
            "non-recursive: {}",
            if c.non_recursive { "yes" } else { "no" }
        );
        println!("horn: {}", if c.horn { "yes" } else { "no" });
        println!("integrity constraints: {}", t.constraints().len());
        println!("abducible facts (B): {}", t.abducible_facts().len());
    }
    Ok(EXIT_YES)
}

fn write_artifact(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, Failure> {
    let path = dir.join(name);
    fs::write(&path, contents)
        .map_err(|e| Failure::usage(format!("cannot write {}: {}", path.display(), e)))?;
    Ok(path)
}

fn cmd_gen(kind: &GenKind) -> Result<i32, Failure> {
    let (args, label) = match kind {
        GenKind::Thm4Sat(a) => (a, "thm4-sat"),
        GenKind::Thm4Qbf(a) => (a, "thm4-qbf"),
        GenKind::Thm5Sat(a) => (a, "thm5-sat"),
        GenKind::Thm5Qbf(a) => (a, "thm5-qbf"),
        GenKind::Thm6Sat(a) => (a, "thm6-sat"),
    };
    let text = read(&args.input)?;
    let name = args.input.display().to_string();
    fs::create_dir_all(&args.out_dir)
        .map_err(|e| Failure::usage(format!("cannot create {}: {}", args.out_dir.display(), e)))?;

    let (theory, observation, candidate, max_add) = match kind {
        GenKind::Thm4Sat(_) | GenKind::Thm5Sat(_) | GenKind::Thm6Sat(_) => {
            let f = parser::parse_dimacs_named(&name, &text)?;
            let r = match kind {
                GenKind::Thm4Sat(_) => reductions::gen_thm4_sat(&f)?,
                GenKind::Thm5Sat(_) => reductions::gen_thm5_sat(&f)?,
                _ => reductions::gen_thm6_sat(&f)?,
            };
            (r.theory, r.observation, Some(r.candidate), None)
        }
        GenKind::Thm4Qbf(_) | GenKind::Thm5Qbf(_) => {
            let q = parser::parse_qdimacs_named(&name, &text)?.negated_matrix_dnf();
            let r = match kind {
                GenKind::Thm4Qbf(_) => reductions::gen_thm4_qbf(&q)?,
                _ => reductions::gen_thm5_qbf(&q)?,
            };
            (r.theory, r.observation, None, Some(r.max_add))
        }
    };

    let theory_path = write_artifact(&args.out_dir, "theory.abd", &theory.to_string())?;
    let obs_path = write_artifact(&args.out_dir, "observation.obs", &observation.to_string())?;
    let cand_path = match &candidate {
        Some(c) => Some(write_artifact(
            &args.out_dir,
            "candidate.exp",
            &c.to_string(),
        )?),
        None => None,
    };

    if args.json {
        println!(
            "{}",
            json!({
                "generator": label,
                "theory": theory_path.display().to_string(),
                "observation": obs_path.display().to_string(),
                "candidate": cand_path.as_ref().map(|p| p.display().to_string()),
                "max_add": max_add,
            })
        );
    } else {
        println!("wrote {}", theory_path.display());
        println!("wrote {}", obs_path.display());
        if let Some(p) = &cand_path {
            println!("wrote {}", p.display());
        }
        if let Some(m) = max_add {
            println!("complete constrained search needs --max-add {}", m);
        }
    }
    Ok(EXIT_YES)
}

/// ∃X∀Y (CNF matrix) by exhaustive enumeration: the standard QDIMACS
/// reading.
fn exists_forall_cnf(q: &abdux::cnf::QbfCnf) -> Result<bool, Failure> {
    let total = q.num_x + q.num_y;
    if total > reductions::DEFAULT_VAR_CAP {
        return Err(Failure::cap(format!(
            "{} variables exceed the brute-force cap of {}",
            total,
            reductions::DEFAULT_VAR_CAP
        )));
    }
    let mut x = vec![false; q.num_x];
    let mut y = vec![false; q.num_y];
    'outer: for xm in 0u64..(1u64 << q.num_x) {
        for (i, a) in x.iter_mut().enumerate() {
            *a = xm & (1 << i) != 0;
        }
        for ym in 0u64..(1u64 << q.num_y) {
            for (i, a) in y.iter_mut().enumerate() {
                *a = ym & (1 << i) != 0;
            }
            if !q.matrix_eval(&x, &y) {
                continue 'outer;
            }
        }
        return Ok(true);
    }
    Ok(false)
}

fn cmd_oracle(kind: &OracleKind) -> Result<i32, Failure> {
    match kind {
        OracleKind::Sat {
            file,
            json: as_json,
        } => {
            let f = parser::parse_dimacs_named(&file.display().to_string(), &read(file)?)?;
            let sat = reductions::sat_bruteforce(&f)?;
            if *as_json {
                println!("{}", json!({ "verdict": sat }));
            } else {
                println!("{}", if sat { "satisfiable" } else { "unsatisfiable" });
            }
            Ok(if sat { EXIT_YES } else { EXIT_NO })
        }
        OracleKind::Qbf {
            file,
            dnf_dual,
            json: as_json,
        } => {
            let q = parser::parse_qdimacs_named(&file.display().to_string(), &read(file)?)?;
            let truth = if *dnf_dual {
                reductions::qbf_bruteforce(&q.negated_matrix_dnf())?
            } else {
                exists_forall_cnf(&q)?
            };
            if *as_json {
                println!("{}", json!({ "verdict": truth }));
            } else {
                println!("{}", if truth { "true" } else { "false" });
            }
            Ok(if truth { EXIT_YES } else { EXIT_NO })
        }
    }
}

fn run() -> Result<i32, Failure> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Check {
            theory,
            observation,
            explanation,
            common,
        } => cmd_check(theory, observation, explanation, common),
        Command::Degree {
            theory,
            observation,
            explanation,
            common,
        } => cmd_degree(theory, observation, explanation, common),
        Command::Constrained {
            theory,
            observation,
            explanation,
            common,
        } => cmd_constrained(theory, observation, explanation, common),
        Command::Find {
            theory,
            observation,
            constrained,
            max_add,
            max_del,
            minimality,
            rank_arbitrariness,
            with_fresh,
            cap_candidates,
            jobs,
            tractable,
            common,
        } => cmd_find(
            theory,
            observation,
            *constrained || *tractable,
            *max_add,
            *max_del,
            *minimality,
            *rank_arbitrariness,
            *with_fresh,
            *cap_candidates,
            (*jobs).max(1),
            *tractable,
            common,
        ),
        Command::Classify { theory, common } => cmd_classify(theory, common),
        Command::Gen { kind } => cmd_gen(kind),
        Command::Oracle { kind } => cmd_oracle(kind),
    }
}

fn main() {
    match run() {
        Ok(code) => std::process::exit(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            std::process::exit(f.code);
        }
    }
}
