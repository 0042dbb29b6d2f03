//! The degree-of-arbitrariness machinery: occurrences of constants in
//! the add part of an explanation, replacement functions and their
//! independence, the degree itself, and constrained-explanation checks.
//!
//! The degree of Δ = (E, F) is the maximum number of pairwise
//! independent replacement functions whose fresh-constant images keep
//! Δ an explanation. Replacement functions range over E only; F never
//! contributes occurrences. Functions for different constants are
//! independent by definition, so the maximum decomposes into a sum of
//! per-constant packings of pairwise disjoint occurrence sets — an
//! equality the test suite checks against the naive maximization.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::abduction::{is_explanation, AbductionError, AgreementOptions, AgreementType};
use crate::core::{
    constants_of, fresh_constant, AbductiveTheory, Constant, Constants, Explanation, GroundAtom,
    Observation, Occurrence,
};

/// Default cap on the total number of occurrences in E that the
/// replacement-subset enumeration will accept. The enumeration is
/// exponential in the per-constant occurrence count; the underlying
/// decision problem is coNP-complete, so a cap with a clear error is
/// the honest interface.
pub const DEFAULT_OCCURRENCE_CAP: usize = 20;

/// A replacement function f_{E,C}: a target constant plus a nonempty
/// set of its occurrences inside E.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ReplacementFunction {
    pub constant: Constant,
    pub occurrences: BTreeSet<Occurrence>,
}

impl ReplacementFunction {
    pub fn new(
        constant: Constant,
        occurrences: impl IntoIterator<Item = Occurrence>,
    ) -> Result<Self, ArbitrarinessError> {
        let occurrences: BTreeSet<Occurrence> = occurrences.into_iter().collect();
        if occurrences.is_empty() {
            return Err(ArbitrarinessError::EmptyOccurrenceSet);
        }
        for o in &occurrences {
            if o.constant() != &constant {
                return Err(ArbitrarinessError::WrongConstant {
                    expected: constant.to_string(),
                    occurrence: o.to_string(),
                });
            }
        }
        Ok(ReplacementFunction {
            constant,
            occurrences,
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArbitrarinessError {
    #[error("a replacement function needs a nonempty occurrence set")]
    EmptyOccurrenceSet,
    #[error("occurrence {occurrence} does not refer to constant {expected}")]
    WrongConstant {
        expected: String,
        occurrence: String,
    },
    #[error("occurrence {occurrence} refers to an atom that is not in E")]
    StaleOccurrence { occurrence: String },
    #[error("E has {occurrences} occurrences, exceeding the cap of {cap}")]
    OccurrenceCapExceeded { occurrences: usize, cap: usize },
    #[error("the candidate pair is not an explanation: {reason}")]
    NotAnExplanation { reason: String },
    #[error(transparent)]
    Abduction(#[from] AbductionError),
}

/// Options for the degree computation.
#[derive(Clone, Copy, Debug)]
pub struct ArbitrarinessOptions {
    pub occurrence_cap: usize,
    pub agreement: AgreementOptions,
}

impl Default for ArbitrarinessOptions {
    fn default() -> Self {
        ArbitrarinessOptions {
            occurrence_cap: DEFAULT_OCCURRENCE_CAP,
            agreement: AgreementOptions::default(),
        }
    }
}

/// All occurrences of `c` in the atom set: pairs (atom, k) with the
/// k-th argument equal to `c` (1-based).
pub fn occurrences(e: &BTreeSet<GroundAtom>, c: &Constant) -> BTreeSet<Occurrence> {
    let mut out = BTreeSet::new();
    for atom in e {
        for (i, arg) in atom.args.iter().enumerate() {
            if arg == c {
                out.insert(Occurrence::new(atom.clone(), i + 1));
            }
        }
    }
    out
}

/// Total number of occurrences of constants in the atom set (the sum
/// of the arities of its atoms).
pub fn occurrence_count(e: &BTreeSet<GroundAtom>) -> usize {
    e.iter().map(|a| a.args.len()).sum()
}

/// f_{E,C}(x): E with exactly the occurrences in C rewritten to x.
/// Atoms may merge, so the result can be smaller than E.
pub fn apply_replacement(
    f: &ReplacementFunction,
    e: &BTreeSet<GroundAtom>,
    x: &Constant,
) -> Result<BTreeSet<GroundAtom>, ArbitrarinessError> {
    let mut positions: BTreeMap<&GroundAtom, BTreeSet<usize>> = BTreeMap::new();
    for o in &f.occurrences {
        if !e.contains(&o.atom) {
            return Err(ArbitrarinessError::StaleOccurrence {
                occurrence: o.to_string(),
            });
        }
        positions.entry(&o.atom).or_default().insert(o.position);
    }
    let mut out = BTreeSet::new();
    for atom in e {
        match positions.get(atom) {
            None => {
                out.insert(atom.clone());
            }
            Some(ks) => {
                let args = atom
                    .args
                    .iter()
                    .enumerate()
                    .map(|(i, a)| {
                        if ks.contains(&(i + 1)) {
                            x.clone()
                        } else {
                            a.clone()
                        }
                    })
                    .collect();
                out.insert(GroundAtom::new(atom.predicate.clone(), args));
            }
        }
    }
    Ok(out)
}

/// Two replacement functions are independent if they target different
/// constants or their occurrence sets are disjoint.
pub fn independent(f1: &ReplacementFunction, f2: &ReplacementFunction) -> bool {
    f1.constant != f2.constant || f1.occurrences.is_disjoint(&f2.occurrences)
}

fn ensure_explanation(
    theory: &AbductiveTheory,
    obs: &Observation,
    delta: &Explanation,
    ty: AgreementType,
    opts: &ArbitrarinessOptions,
) -> Result<(), ArbitrarinessError> {
    let check = is_explanation(theory, obs, delta, ty, &opts.agreement)?;
    if !check.verdict {
        return Err(ArbitrarinessError::NotAnExplanation {
            reason: check
                .rejection
                .map(|r| r.to_string())
                .unwrap_or_else(|| "rejected".to_string()),
        });
    }
    Ok(())
}

/// Picks the fresh constant ξ for `delta`: one not occurring in the
/// theory (program and constraints), the observation, or Δ itself.
pub fn fresh_for(theory: &AbductiveTheory, obs: &Observation, delta: &Explanation) -> Constant {
    let mut avoid = constants_of(theory);
    obs.collect_constants(&mut avoid);
    delta.collect_constants(&mut avoid);
    fresh_constant(&avoid)
}

/// Enumerates candidate replacement functions (constants of E crossed
/// with nonempty occurrence subsets) in a fixed deterministic order,
/// stopping early when the callback says so.
fn scan_replacements(
    theory: &AbductiveTheory,
    obs: &Observation,
    delta: &Explanation,
    ty: AgreementType,
    xi: &Constant,
    opts: &ArbitrarinessOptions,
    mut on_valid: impl FnMut(ReplacementFunction) -> bool,
) -> Result<(), ArbitrarinessError> {
    let total = occurrence_count(&delta.add);
    if total > opts.occurrence_cap.min(62) {
        return Err(ArbitrarinessError::OccurrenceCapExceeded {
            occurrences: total,
            cap: opts.occurrence_cap.min(62),
        });
    }
    for c in constants_of(&delta.add) {
        let occs: Vec<Occurrence> = occurrences(&delta.add, &c).into_iter().collect();
        let n = occs.len();
        for mask in 1u64..(1u64 << n) {
            let chosen: BTreeSet<Occurrence> = occs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, o)| o.clone())
                .collect();
            let f = ReplacementFunction {
                constant: c.clone(),
                occurrences: chosen,
            };
            let image = apply_replacement(&f, &delta.add, xi)?;
            let candidate = Explanation {
                add: image,
                del: delta.del.clone(),
            };
            if is_explanation(theory, obs, &candidate, ty, &opts.agreement)?.verdict && !on_valid(f)
            {
                return Ok(());
            }
        }
    }
    Ok(())
}

/// All replacement functions (c, C) whose ξ-image leaves Δ an
/// explanation, for a caller-chosen fresh constant ξ. The choice of ξ
/// does not affect the result as long as ξ avoids the theory, the
/// observation and Δ.
pub fn valid_replacements_with(
    theory: &AbductiveTheory,
    obs: &Observation,
    delta: &Explanation,
    ty: AgreementType,
    xi: &Constant,
    opts: &ArbitrarinessOptions,
) -> Result<Vec<ReplacementFunction>, ArbitrarinessError> {
    ensure_explanation(theory, obs, delta, ty, opts)?;
    let mut out = Vec::new();
    scan_replacements(theory, obs, delta, ty, xi, opts, |f| {
        out.push(f);
        true
    })?;
    Ok(out)
}

/// All valid replacement functions for Δ, with ξ picked automatically.
pub fn valid_replacements(
    theory: &AbductiveTheory,
    obs: &Observation,
    delta: &Explanation,
    ty: AgreementType,
    opts: &ArbitrarinessOptions,
) -> Result<Vec<ReplacementFunction>, ArbitrarinessError> {
    let xi = fresh_for(theory, obs, delta);
    valid_replacements_with(theory, obs, delta, ty, &xi, opts)
}

/// Maximum number of pairwise disjoint sets choosable from `sets`.
/// Only inclusion-minimal sets matter: a packing using a superset can
/// always swap in the subset.
fn max_disjoint_packing(sets: &[BTreeSet<Occurrence>]) -> usize {
    let minimal: Vec<&BTreeSet<Occurrence>> = sets
        .iter()
        .filter(|s| !sets.iter().any(|t| t != *s && t.is_subset(s)))
        .collect();
    fn dfs(minimal: &[&BTreeSet<Occurrence>], start: usize, used: &BTreeSet<Occurrence>) -> usize {
        let mut best = 0;
        for i in start..minimal.len() {
            if minimal[i].is_disjoint(used) {
                let mut next = used.clone();
                next.extend(minimal[i].iter().cloned());
                best = best.max(1 + dfs(minimal, i + 1, &next));
            }
        }
        best
    }
    dfs(&minimal, 0, &BTreeSet::new())
}

/// The degree of arbitrariness δ(Δ): the maximum cardinality of a
/// pairwise-independent set of valid replacement functions. Computed
/// per constant and summed, since functions for distinct constants are
/// always independent.
pub fn degree(
    theory: &AbductiveTheory,
    obs: &Observation,
    delta: &Explanation,
    ty: AgreementType,
    opts: &ArbitrarinessOptions,
) -> Result<usize, ArbitrarinessError> {
    let valid = valid_replacements(theory, obs, delta, ty, opts)?;
    let mut by_constant: BTreeMap<Constant, Vec<BTreeSet<Occurrence>>> = BTreeMap::new();
    for f in valid {
        by_constant
            .entry(f.constant)
            .or_default()
            .push(f.occurrences);
    }
    Ok(by_constant
        .values()
        .map(|sets| max_disjoint_packing(sets))
        .sum())
}

/// Is Δ constrained, i.e. δ(Δ) = 0? Short-circuits at the first valid
/// replacement without computing a packing.
pub fn is_constrained(
    theory: &AbductiveTheory,
    obs: &Observation,
    delta: &Explanation,
    ty: AgreementType,
    opts: &ArbitrarinessOptions,
) -> Result<bool, ArbitrarinessError> {
    ensure_explanation(theory, obs, delta, ty, opts)?;
    let xi = fresh_for(theory, obs, delta);
    let mut found = false;
    scan_replacements(theory, obs, delta, ty, &xi, opts, |_| {
        found = true;
        false
    })?;
    if !found {
        // constrained explanations draw every constant from T ∪ O
        debug_assert!(
            {
                let mut known = constants_of(theory);
                obs.collect_constants(&mut known);
                constants_of(delta).is_subset(&known)
            },
            "constrained explanation uses a constant outside the theory and observation"
        );
    }
    Ok(!found)
}
