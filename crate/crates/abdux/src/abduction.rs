//! The four agreement notions between an observation and a program with
//! integrity constraints, and explanation checking for each of them.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::core::{
    constants_of, AbductiveTheory, Constant, Constants, Explanation, GroundAtom,
    IntegrityConstraint, Observation, Rule,
};
use crate::semantics::{
    eval_constraints, ground, stable_model_stratified, stable_models_bruteforce_with_cap,
    HerbrandModel, SemanticsError, DEFAULT_ATOM_CAP,
};

/// The four agreement schemes, ordered from the most to the least
/// restrictive: explanation-hood is monotone along A ⊆ B ⊆ C ⊆ D.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AgreementType {
    A,
    B,
    C,
    D,
}

impl AgreementType {
    pub const ALL: [AgreementType; 4] = [
        AgreementType::A,
        AgreementType::B,
        AgreementType::C,
        AgreementType::D,
    ];
}

impl fmt::Display for AgreementType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AgreementType::A => f.write_str("A"),
            AgreementType::B => f.write_str("B"),
            AgreementType::C => f.write_str("C"),
            AgreementType::D => f.write_str("D"),
        }
    }
}

impl std::str::FromStr for AgreementType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(AgreementType::A),
            "B" | "b" => Ok(AgreementType::B),
            "C" | "c" => Ok(AgreementType::C),
            "D" | "d" => Ok(AgreementType::D),
            other => Err(format!("unknown agreement type `{}`", other)),
        }
    }
}

/// Knobs shared by every agreement evaluation.
#[derive(Clone, Copy, Debug)]
pub struct AgreementOptions {
    /// Read agreement C literally: only the universal condition
    /// "every model satisfying the constraints satisfies the
    /// observation", without requiring such a model to exist. The
    /// default keeps the existential conjunct so the A ⊆ B ⊆ C ⊆ D
    /// chain holds.
    pub c_literal: bool,
    /// Atom cap for the brute-force model enumeration used on
    /// non-stratified programs.
    pub atom_cap: usize,
}

impl Default for AgreementOptions {
    fn default() -> Self {
        AgreementOptions {
            c_literal: false,
            atom_cap: DEFAULT_ATOM_CAP,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AbductionError {
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// Why a candidate pair failed the explanation check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rejection {
    /// E and F overlap, so the pair is not even a candidate.
    AddDelOverlap(Vec<GroundAtom>),
    /// F must be a subset of the abducible facts of the program.
    DelNotInProgram(Vec<GroundAtom>),
    /// E and F may only contain abducible atoms.
    NotAbducible(Vec<GroundAtom>),
    /// The revised program does not agree with the observation.
    Disagrees,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(atoms: &[GroundAtom]) -> String {
            atoms
                .iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        }
        match self {
            Rejection::AddDelOverlap(atoms) => {
                write!(f, "add and delete sets overlap on {{{}}}", list(atoms))
            }
            Rejection::DelNotInProgram(atoms) => {
                write!(
                    f,
                    "delete set is not part of the program: {{{}}}",
                    list(atoms)
                )
            }
            Rejection::NotAbducible(atoms) => {
                write!(
                    f,
                    "non-abducible atom(s) in the explanation: {{{}}}",
                    list(atoms)
                )
            }
            Rejection::Disagrees => {
                write!(f, "observation does not agree with the revised program")
            }
        }
    }
}

/// Outcome of an explanation check: the verdict plus a diagnostic when
/// the candidate is rejected for a definitional reason.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub verdict: bool,
    pub rejection: Option<Rejection>,
}

impl CheckResult {
    fn yes() -> Self {
        CheckResult {
            verdict: true,
            rejection: None,
        }
    }

    fn no(rejection: Rejection) -> Self {
        CheckResult {
            verdict: false,
            rejection: Some(rejection),
        }
    }
}

/// The stable models of a rule set over the active domain: the single
/// perfect model when the program is stratified, otherwise every stable
/// model by brute force (subject to the atom cap).
pub fn models_of(
    rules: &[Rule],
    active_domain: &BTreeSet<Constant>,
    atom_cap: usize,
) -> Result<Vec<HerbrandModel>, AbductionError> {
    let gp = ground(rules, active_domain)?;
    if gp.stratified {
        Ok(vec![stable_model_stratified(&gp)?])
    } else {
        Ok(stable_models_bruteforce_with_cap(&gp, atom_cap)?)
    }
}

fn agrees_on_models(
    models: &[HerbrandModel],
    constraints: &[IntegrityConstraint],
    obs: &Observation,
    ty: AgreementType,
    domain: &BTreeSet<Constant>,
    opts: &AgreementOptions,
) -> bool {
    let sat_c = |m: &HerbrandModel| eval_constraints(m, constraints, domain);
    let sat_o = |m: &HerbrandModel| m.satisfies_all(&obs.atoms);
    match ty {
        // consistent, every model satisfies C, every model satisfies O
        AgreementType::A => {
            !models.is_empty() && models.iter().all(&sat_c) && models.iter().all(&sat_o)
        }
        // consistent, every model satisfies O, some model satisfies C
        AgreementType::B => {
            !models.is_empty() && models.iter().all(&sat_o) && models.iter().any(&sat_c)
        }
        // every model satisfying C satisfies O; by default also require
        // some model to satisfy C, which keeps the chain C ⊆ D
        AgreementType::C => {
            let universal = models.iter().all(|m| !sat_c(m) || sat_o(m));
            if opts.c_literal {
                universal
            } else {
                universal && models.iter().any(&sat_c)
            }
        }
        // some model satisfies both C and O
        AgreementType::D => models.iter().any(|m| sat_c(m) && sat_o(m)),
    }
}

/// Does the observation agree (in the given sense) with the program and
/// the constraints? The active domain is the constants of the inputs.
pub fn agrees(
    rules: &[Rule],
    constraints: &[IntegrityConstraint],
    obs: &Observation,
    ty: AgreementType,
    opts: &AgreementOptions,
) -> Result<bool, AbductionError> {
    let mut domain = constants_of(rules);
    constraints.collect_constants(&mut domain);
    obs.collect_constants(&mut domain);
    let models = models_of(rules, &domain, opts.atom_cap)?;
    Ok(agrees_on_models(
        &models,
        constraints,
        obs,
        ty,
        &domain,
        opts,
    ))
}

/// Checks whether Δ = (E, F) is an explanation of the observation with
/// respect to the theory, under the given agreement type: E and F must
/// be disjoint abducible sets with F ⊆ B, and the observation must
/// agree with (P ∪ E) \ F and the constraints.
///
/// Definitional failures (overlap, F ⊄ B, non-abducible atoms) come
/// back as a false verdict with a diagnostic, not an error.
pub fn is_explanation(
    theory: &AbductiveTheory,
    obs: &Observation,
    delta: &Explanation,
    ty: AgreementType,
    opts: &AgreementOptions,
) -> Result<CheckResult, AbductionError> {
    let overlap: Vec<GroundAtom> = delta.add.intersection(&delta.del).cloned().collect();
    if !overlap.is_empty() {
        return Ok(CheckResult::no(Rejection::AddDelOverlap(overlap)));
    }
    let non_abducible: Vec<GroundAtom> = delta
        .add
        .iter()
        .chain(delta.del.iter())
        .filter(|a| !theory.is_abducible_atom(a))
        .cloned()
        .collect();
    if !non_abducible.is_empty() {
        return Ok(CheckResult::no(Rejection::NotAbducible(non_abducible)));
    }
    let b = theory.abducible_facts();
    let outside: Vec<GroundAtom> = delta.del.difference(&b).cloned().collect();
    if !outside.is_empty() {
        return Ok(CheckResult::no(Rejection::DelNotInProgram(outside)));
    }

    let revised = theory.revised_rules(delta);
    let mut domain = constants_of(theory);
    obs.collect_constants(&mut domain);
    delta.collect_constants(&mut domain);
    let models = models_of(&revised, &domain, opts.atom_cap)?;
    if agrees_on_models(&models, theory.constraints(), obs, ty, &domain, opts) {
        Ok(CheckResult::yes())
    } else {
        Ok(CheckResult::no(Rejection::Disagrees))
    }
}

/// Convenience wrapper returning just the verdict.
pub fn is_explanation_verdict(
    theory: &AbductiveTheory,
    obs: &Observation,
    delta: &Explanation,
    ty: AgreementType,
    opts: &AgreementOptions,
) -> Result<bool, AbductionError> {
    Ok(is_explanation(theory, obs, delta, ty, opts)?.verdict)
}
