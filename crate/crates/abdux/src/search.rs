//! Explanation search: ordered enumeration of candidate pairs (E, F),
//! constrained-explanation search, subset- and cardinality-minimality
//! filters, arbitrariness ranking, and the polynomial fast path for
//! non-recursive Horn theories without constraints.
//!
//! Candidates draw E from the ground abducible atoms over the constants
//! of the theory and observation (optionally extended by canonical
//! fresh constants) and F from the abducible facts B. They are emitted
//! in nondecreasing |E| + |F| order with deterministic ties: fewer
//! additions first, then lexicographic on the add and delete sets.
//!
//! When the theory's rules are stratified, candidate checking runs on a
//! pair of precompiled fixpoint engines (one grounding over the search
//! domain, one over the domain plus the fresh constant ξ), so a single
//! check costs one fixpoint evaluation instead of a full regrounding.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use thiserror::Error;

use crate::abduction::{is_explanation, AbductionError, AgreementOptions, AgreementType};
use crate::arbitrariness::{self, occurrence_count, ArbitrarinessError, ArbitrarinessOptions};
use crate::core::{
    constants_of, fresh_constant, AbductiveTheory, Constant, Constants, CoreError, Explanation,
    GroundAtom, IntegrityConstraint, Observation, Predicate, Term,
};
use crate::semantics::{ground, EvalScratch, Evaluator, GroundProgram, SemanticsError};

/// Default cap on the number of candidate pairs a search may visit.
pub const DEFAULT_CANDIDATE_CAP: u64 = 10_000_000;

/// Size bounds for the candidate space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_add: usize,
    pub max_del: usize,
}

impl SearchBounds {
    pub fn new(max_add: usize, max_del: usize) -> Self {
        SearchBounds { max_add, max_del }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub agreement: AgreementOptions,
    pub occurrence_cap: usize,
    pub candidate_cap: u64,
    /// Number of canonical fresh constants added to the add-part
    /// domain. Zero keeps the search over the constants of the theory
    /// and observation, which is complete for constrained explanations.
    pub with_fresh: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            agreement: AgreementOptions::default(),
            occurrence_cap: arbitrariness::DEFAULT_OCCURRENCE_CAP,
            candidate_cap: DEFAULT_CANDIDATE_CAP,
            with_fresh: 0,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("candidate space of {candidates} pairs exceeds the cap of {cap}")]
    CandidateCapExceeded { candidates: u128, cap: u64 },
    #[error("observation is invalid for this theory: {0}")]
    InvalidObservation(String),
    #[error("theory is outside the tractable class: {0}")]
    ClassMismatch(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Abduction(#[from] AbductionError),
    #[error(transparent)]
    Arbitrariness(#[from] ArbitrarinessError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SearchStats {
    pub candidates_checked: u64,
    pub explanations_found: u64,
}

/// A ground integrity-constraint instance over evaluator atom ids.
/// Atoms that can never hold are dropped at compile time: a missing
/// positive body atom kills the instance, missing negative literals
/// and head disjuncts just disappear.
#[derive(Clone, Debug)]
struct GroundIc {
    pos: Vec<u32>,
    neg: Vec<u32>,
    heads: Vec<u32>,
}

fn compile_constraints(
    constraints: &[IntegrityConstraint],
    domain: &BTreeSet<Constant>,
    ev: &Evaluator,
) -> Vec<GroundIc> {
    let domain: Vec<Constant> = domain.iter().cloned().collect();
    let mut out = Vec::new();
    for c in constraints {
        let mut vars: Vec<crate::core::Variable> = Vec::new();
        for a in c
            .heads
            .iter()
            .chain(c.body_pos.iter())
            .chain(c.body_neg.iter())
        {
            for v in a.variables() {
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
        }
        let mut odometer = vec![0usize; vars.len()];
        if vars.is_empty() {
            compile_one_ic(c, &Default::default(), ev, &mut out);
            continue;
        }
        if domain.is_empty() {
            continue;
        }
        loop {
            let assignment: std::collections::BTreeMap<_, _> = vars
                .iter()
                .cloned()
                .zip(odometer.iter().map(|&i| domain[i].clone()))
                .collect();
            compile_one_ic(c, &assignment, ev, &mut out);
            let mut k = 0;
            loop {
                if k == odometer.len() {
                    break;
                }
                odometer[k] += 1;
                if odometer[k] < domain.len() {
                    break;
                }
                odometer[k] = 0;
                k += 1;
            }
            if k == odometer.len() {
                break;
            }
        }
    }
    out
}

fn ground_atom_of(
    atom: &crate::core::Atom,
    assignment: &std::collections::BTreeMap<crate::core::Variable, Constant>,
) -> GroundAtom {
    GroundAtom::new(
        atom.predicate.clone(),
        atom.args
            .iter()
            .map(|t| match t {
                Term::Const(c) => c.clone(),
                Term::Var(v) => assignment[v].clone(),
            })
            .collect(),
    )
}

fn compile_one_ic(
    c: &IntegrityConstraint,
    assignment: &std::collections::BTreeMap<crate::core::Variable, Constant>,
    ev: &Evaluator,
    out: &mut Vec<GroundIc>,
) {
    let mut pos = Vec::with_capacity(c.body_pos.len());
    for a in &c.body_pos {
        match ev.atom_id(&ground_atom_of(a, assignment)) {
            Some(id) => pos.push(id),
            None => return, // body can never be satisfied
        }
    }
    let neg: Vec<u32> = c
        .body_neg
        .iter()
        .filter_map(|a| ev.atom_id(&ground_atom_of(a, assignment)))
        .collect();
    let heads: Vec<u32> = c
        .heads
        .iter()
        .filter_map(|a| ev.atom_id(&ground_atom_of(a, assignment)))
        .collect();
    out.push(GroundIc { pos, neg, heads });
}

fn constraints_hold(ics: &[GroundIc], scratch: &EvalScratch) -> bool {
    ics.iter().all(|ic| {
        let body = ic.pos.iter().all(|&a| scratch.is_true(a))
            && ic.neg.iter().all(|&a| !scratch.is_true(a));
        !body || ic.heads.iter().any(|&a| scratch.is_true(a))
    })
}

/// Precompiled engine for repeated explanation checks against one
/// (theory, observation) pair over a fixed search domain.
struct FastEngine {
    ev: Evaluator,
    ev_fresh: Evaluator,
    xi: Constant,
    obs_ids: Vec<u32>,
    obs_ids_fresh: Vec<u32>,
    ics: Vec<GroundIc>,
    ics_fresh: Vec<GroundIc>,
    c_literal_for: Option<AgreementType>,
    scratch: EvalScratch,
    scratch_fresh: EvalScratch,
    facts_buf: Vec<u32>,
}

impl FastEngine {
    fn verdict(
        obs_ok: bool,
        ics_ok: bool,
        c_literal_for: Option<AgreementType>,
        ty: AgreementType,
    ) -> bool {
        // One stable model: the four agreement notions coincide, except
        // for the literal reading of C, which is an implication.
        if c_literal_for == Some(ty) {
            !ics_ok || obs_ok
        } else {
            ics_ok && obs_ok
        }
    }

    fn check(&mut self, facts: &[u32], ty: AgreementType) -> bool {
        self.ev.eval(facts, &mut self.scratch);
        let obs_ok = self.obs_ids.iter().all(|&a| self.scratch.is_true(a));
        let ics_ok = constraints_hold(&self.ics, &self.scratch);
        Self::verdict(obs_ok, ics_ok, self.c_literal_for, ty)
    }

    fn check_fresh(&mut self, facts: &[u32], ty: AgreementType) -> bool {
        self.ev_fresh.eval(facts, &mut self.scratch_fresh);
        let obs_ok = self
            .obs_ids_fresh
            .iter()
            .all(|&a| self.scratch_fresh.is_true(a));
        let ics_ok = constraints_hold(&self.ics_fresh, &self.scratch_fresh);
        Self::verdict(obs_ok, ics_ok, self.c_literal_for, ty)
    }
}

/// Lexicographic fixed-size combination generator over 0..n.
struct Combos {
    n: usize,
    k: usize,
    state: Vec<usize>,
    fresh: bool,
    done: bool,
}

impl Combos {
    fn new(n: usize, k: usize) -> Self {
        Combos {
            n,
            k,
            state: (0..k).collect(),
            fresh: true,
            done: k > n,
        }
    }

    fn next(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if self.fresh {
            self.fresh = false;
            return Some(&self.state);
        }
        // advance rightmost index that can still move
        let k = self.k;
        if k == 0 {
            self.done = true;
            return None;
        }
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.state[i] < self.n - (k - i) {
                self.state[i] += 1;
                for j in i + 1..k {
                    self.state[j] = self.state[j - 1] + 1;
                }
                return Some(&self.state);
            }
        }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut out: u128 = 1;
    for i in 0..k {
        out = out.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    out
}

enum Engine {
    Fast(Box<FastEngine>),
    /// Fallback for non-stratified theories: every candidate goes
    /// through the public checker, brute-force model enumeration
    /// included.
    Generic,
}

/// A prepared search session for one (theory, observation, type,
/// bounds) tuple.
pub struct Searcher<'a> {
    theory: &'a AbductiveTheory,
    obs: &'a Observation,
    ty: AgreementType,
    bounds: SearchBounds,
    opts: SearchOptions,
    domain: BTreeSet<Constant>,
    add_universe: Vec<GroundAtom>,
    add_ids: Vec<u32>,
    del_universe: Vec<GroundAtom>,
    del_ids: Vec<u32>,
    engine: Engine,
    /// Indices into `add_universe` that a constrained explanation can
    /// actually use; computed on demand.
    constrained_universe: Option<Vec<usize>>,
    stats: SearchStats,
}

impl<'a> Searcher<'a> {
    pub fn new(
        theory: &'a AbductiveTheory,
        obs: &'a Observation,
        ty: AgreementType,
        bounds: SearchBounds,
        opts: SearchOptions,
    ) -> Result<Self, SearchError> {
        theory
            .check_observation(obs)
            .map_err(|e| SearchError::InvalidObservation(e.to_string()))?;

        let mut domain = constants_of(theory);
        obs.collect_constants(&mut domain);
        for _ in 0..opts.with_fresh {
            let f = fresh_constant(&domain);
            domain.insert(f);
        }

        // size the candidate space before materializing anything
        let n_dom = domain.len();
        let num_add_atoms: u128 = theory
            .abducibles()
            .iter()
            .map(|p| (n_dom as u128).saturating_pow(p.arity as u32))
            .sum();
        let b_atoms = theory.abducible_facts();
        let e_count: u128 = (0..=bounds.max_add)
            .map(|e| binomial_u128(num_add_atoms, e))
            .fold(0u128, u128::saturating_add);
        let f_count: u128 = (0..=bounds.max_del)
            .map(|f| binomial(b_atoms.len(), f))
            .fold(0u128, u128::saturating_add);
        let total = e_count.saturating_mul(f_count);
        if total > opts.candidate_cap as u128 {
            return Err(SearchError::CandidateCapExceeded {
                candidates: total,
                cap: opts.candidate_cap,
            });
        }

        let add_universe: Vec<GroundAtom> = enumerate_abducible_atoms(theory.abducibles(), &domain);
        let del_universe: Vec<GroundAtom> = b_atoms.iter().cloned().collect();

        let remainder = theory.remainder();
        let gp = ground(&remainder, &domain)?;
        let engine;
        let mut add_ids = Vec::new();
        let mut del_ids = Vec::new();
        if gp.stratified {
            let xi = fresh_constant(&domain);
            let mut fresh_domain = domain.clone();
            fresh_domain.insert(xi.clone());
            let gp_fresh = ground(&remainder, &fresh_domain)?;

            let extras = add_universe
                .iter()
                .chain(del_universe.iter())
                .chain(obs.atoms.iter())
                .cloned();
            let ev = Evaluator::new(&gp, extras)?;
            let extras_fresh = enumerate_abducible_atoms(theory.abducibles(), &fresh_domain)
                .into_iter()
                .chain(del_universe.iter().cloned())
                .chain(obs.atoms.iter().cloned());
            let ev_fresh = Evaluator::new(&gp_fresh, extras_fresh)?;

            add_ids = add_universe
                .iter()
                .map(|a| ev.atom_id(a).unwrap())
                .collect();
            del_ids = del_universe
                .iter()
                .map(|a| ev.atom_id(a).unwrap())
                .collect();
            let obs_ids = obs.atoms.iter().map(|a| ev.atom_id(a).unwrap()).collect();
            let obs_ids_fresh = obs
                .atoms
                .iter()
                .map(|a| ev_fresh.atom_id(a).unwrap())
                .collect();
            let ics = compile_constraints(theory.constraints(), &domain, &ev);
            let ics_fresh = compile_constraints(theory.constraints(), &fresh_domain, &ev_fresh);
            engine = Engine::Fast(Box::new(FastEngine {
                ev,
                ev_fresh,
                xi,
                obs_ids,
                obs_ids_fresh,
                ics,
                ics_fresh,
                c_literal_for: opts.agreement.c_literal.then_some(AgreementType::C),
                scratch: EvalScratch::default(),
                scratch_fresh: EvalScratch::default(),
                facts_buf: Vec::new(),
            }));
        } else {
            engine = Engine::Generic;
        }

        Ok(Searcher {
            theory,
            obs,
            ty,
            bounds,
            opts,
            domain,
            add_universe,
            add_ids,
            del_universe,
            del_ids,
            engine,
            constrained_universe: None,
            stats: SearchStats::default(),
        })
    }

    pub fn stats(&self) -> SearchStats {
        self.stats
    }

    /// The size bounds this searcher enumerates within. They are the
    /// only source of incompleteness for constrained search: the
    /// constant restriction to the theory and observation loses
    /// nothing.
    pub fn bounds(&self) -> SearchBounds {
        self.bounds
    }

    pub fn domain(&self) -> &BTreeSet<Constant> {
        &self.domain
    }

    fn explanation_of(&self, add_idx: &[usize], del_idx: &[usize]) -> Explanation {
        Explanation {
            add: add_idx
                .iter()
                .map(|&i| self.add_universe[i].clone())
                .collect(),
            del: del_idx
                .iter()
                .map(|&i| self.del_universe[i].clone())
                .collect(),
        }
    }

    /// Checks one candidate, given as indices into the universes.
    fn check_candidate(
        &mut self,
        add_idx: &[usize],
        del_idx: &[usize],
    ) -> Result<bool, SearchError> {
        self.stats.candidates_checked += 1;
        match &mut self.engine {
            Engine::Fast(fe) => {
                let fe = fe.as_mut();
                fe.facts_buf.clear();
                for (i, &id) in self.del_ids.iter().enumerate() {
                    if !del_idx.contains(&i) {
                        fe.facts_buf.push(id);
                    }
                }
                for &i in add_idx {
                    fe.facts_buf.push(self.add_ids[i]);
                }
                let facts = std::mem::take(&mut fe.facts_buf);
                let ok = fe.check(&facts, self.ty);
                fe.facts_buf = facts;
                Ok(ok)
            }
            Engine::Generic => {
                let delta = self.explanation_of(add_idx, del_idx);
                Ok(
                    is_explanation(self.theory, self.obs, &delta, self.ty, &self.opts.agreement)?
                        .verdict,
                )
            }
        }
    }

    /// Constrainedness of a candidate already known to be an
    /// explanation: scans replacement functions over the fresh-constant
    /// grounding, stopping at the first valid one.
    fn candidate_is_constrained(
        &mut self,
        add_idx: &[usize],
        del_idx: &[usize],
    ) -> Result<bool, SearchError> {
        let delta = self.explanation_of(add_idx, del_idx);
        let cap = self.opts.occurrence_cap.min(62);
        if occurrence_count(&delta.add) > cap {
            return Err(SearchError::Arbitrariness(
                ArbitrarinessError::OccurrenceCapExceeded {
                    occurrences: occurrence_count(&delta.add),
                    cap,
                },
            ));
        }
        let Engine::Fast(_) = &self.engine else {
            let arb = ArbitrarinessOptions {
                occurrence_cap: self.opts.occurrence_cap,
                agreement: self.opts.agreement,
            };
            return Ok(arbitrariness::is_constrained(
                self.theory,
                self.obs,
                &delta,
                self.ty,
                &arb,
            )?);
        };
        let (xi, base_fresh) = {
            let Engine::Fast(fe) = &self.engine else {
                unreachable!()
            };
            let base: Vec<u32> = self
                .del_universe
                .iter()
                .enumerate()
                .filter(|(i, _)| !del_idx.contains(i))
                .map(|(_, a)| fe.ev_fresh.atom_id(a).unwrap())
                .collect();
            (fe.xi.clone(), base)
        };
        for c in constants_of(&delta.add) {
            let occs: Vec<crate::core::Occurrence> = arbitrariness::occurrences(&delta.add, &c)
                .into_iter()
                .collect();
            for mask in 1u64..(1u64 << occs.len()) {
                let image = replace_by_mask(&delta.add, &occs, mask, &xi);
                let Engine::Fast(fe) = &mut self.engine else {
                    unreachable!()
                };
                let fe = fe.as_mut();
                fe.facts_buf.clear();
                fe.facts_buf.extend_from_slice(&base_fresh);
                for a in &image {
                    let id = fe
                        .ev_fresh
                        .atom_id(a)
                        .expect("replacement image stays in the interned universe");
                    fe.facts_buf.push(id);
                }
                let facts = std::mem::take(&mut fe.facts_buf);
                let ok = fe.check_fresh(&facts, self.ty);
                fe.facts_buf = facts;
                self.stats.candidates_checked += 1;
                if ok {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Streams every explanation within the bounds, in the documented
    /// order, to the callback. `universe` selects the add-part indices
    /// to draw from (None means the full universe).
    fn drive(
        &mut self,
        universe: Option<&[usize]>,
        mut cb: impl FnMut(&mut Self, &[usize], &[usize]) -> Result<ControlFlow<()>, SearchError>,
    ) -> Result<(), SearchError> {
        let full: Vec<usize> = (0..self.add_universe.len()).collect();
        let add_pool: Vec<usize> = match universe {
            Some(u) => u.to_vec(),
            None => full,
        };
        let nb = self.del_universe.len();
        let max_t = self.bounds.max_add + self.bounds.max_del;
        let mut e_buf: Vec<usize> = Vec::new();
        let mut f_pool: Vec<usize> = Vec::new();
        for t in 0..=max_t {
            for e_size in 0..=t.min(self.bounds.max_add) {
                let f_size = t - e_size;
                if f_size > self.bounds.max_del || f_size > nb {
                    continue;
                }
                if e_size > add_pool.len() {
                    continue;
                }
                let mut e_combos = Combos::new(add_pool.len(), e_size);
                while let Some(e_sel) = e_combos.next() {
                    e_buf.clear();
                    e_buf.extend(e_sel.iter().map(|&i| add_pool[i]));
                    // deletions never overlap the additions
                    f_pool.clear();
                    for (i, b) in self.del_universe.iter().enumerate() {
                        if !e_buf.iter().any(|&j| &self.add_universe[j] == b) {
                            f_pool.push(i);
                        }
                    }
                    if f_size > f_pool.len() {
                        continue;
                    }
                    let mut f_combos = Combos::new(f_pool.len(), f_size);
                    while let Some(f_sel) = f_combos.next() {
                        let f_idx: Vec<usize> = f_sel.iter().map(|&i| f_pool[i]).collect();
                        if self.check_candidate(&e_buf, &f_idx)? {
                            self.stats.explanations_found += 1;
                            if cb(self, &e_buf, &f_idx)?.is_break() {
                                return Ok(());
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Streams explanations in order to the callback; return
    /// `ControlFlow::Break(())` to stop early.
    pub fn for_each_explanation(
        &mut self,
        mut cb: impl FnMut(&Explanation) -> ControlFlow<()>,
    ) -> Result<(), SearchError> {
        self.drive(None, |s, e_idx, f_idx| {
            Ok(cb(&s.explanation_of(e_idx, f_idx)))
        })
    }

    /// All explanations within the bounds, in order.
    pub fn enumerate(&mut self) -> Result<Vec<Explanation>, SearchError> {
        let mut out = Vec::new();
        self.for_each_explanation(|d| {
            out.push(d.clone());
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }

    /// Indices of add-universe atoms that can matter to a constrained
    /// explanation: atoms mentioned (positively or negatively) by some
    /// ground rule instance whose non-abducible positive body is
    /// derivable under the most generous fact set, or mentioned by an
    /// integrity constraint. An explanation containing any other
    /// positive-arity atom is arbitrary outright (replacing one of its
    /// occurrences changes nothing), and dropping other zero-arity
    /// atoms leaves a smaller explanation with the same status, so the
    /// restriction loses no witnesses and keeps the first one.
    fn constrained_universe(&mut self) -> Result<Vec<usize>, SearchError> {
        if let Some(u) = &self.constrained_universe {
            return Ok(u.clone());
        }
        let computed = match &self.engine {
            Engine::Generic => (0..self.add_universe.len()).collect::<Vec<usize>>(),
            Engine::Fast(fe) => {
                let xi = fe.xi.clone();
                let mut fresh_domain = self.domain.clone();
                fresh_domain.insert(xi);
                let remainder = self.theory.remainder();
                let gp = ground(&remainder, &fresh_domain)?;
                let keep = relevant_abducibles(&gp, self.theory, &fresh_domain, &self.del_universe);
                (0..self.add_universe.len())
                    .filter(|&i| keep.contains(&self.add_universe[i]))
                    .collect()
            }
        };
        self.constrained_universe = Some(computed.clone());
        Ok(computed)
    }

    /// The first (in enumeration order) constrained explanation within
    /// the bounds, if any. Restricting the add part to the constants of
    /// the theory and observation loses no constrained explanations;
    /// the size bounds are the only source of incompleteness.
    pub fn find_constrained(&mut self) -> Result<Option<Explanation>, SearchError> {
        let universe = self.constrained_universe()?;
        let mut found: Option<Explanation> = None;
        let mut err: Option<SearchError> = None;
        self.drive(Some(&universe), |s, e_idx, f_idx| {
            match s.candidate_is_constrained(e_idx, f_idx) {
                Ok(true) => {
                    found = Some(s.explanation_of(e_idx, f_idx));
                    Ok(ControlFlow::Break(()))
                }
                Ok(false) => Ok(ControlFlow::Continue(())),
                Err(e) => {
                    err = Some(e);
                    Ok(ControlFlow::Break(()))
                }
            }
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        Ok(found)
    }

    /// Keeps the explanations with no other explanation componentwise
    /// below them. Dominators can only be sub-pairs, so the check
    /// enumerates subsets of each candidate rather than the full space.
    pub fn filter_subset_minimal(
        &mut self,
        ds: &[Explanation],
    ) -> Result<Vec<Explanation>, SearchError> {
        let mut out = Vec::new();
        'next: for d in ds {
            let subpairs = (1u128 << d.add.len().min(127)).saturating_mul(1u128 << d.del.len().min(127));
            if d.size() >= 62 || subpairs > self.opts.candidate_cap as u128 {
                return Err(SearchError::CandidateCapExceeded {
                    candidates: subpairs,
                    cap: self.opts.candidate_cap,
                });
            }
            let adds: Vec<GroundAtom> = d.add.iter().cloned().collect();
            let dels: Vec<GroundAtom> = d.del.iter().cloned().collect();
            for am in 0u64..(1u64 << adds.len()) {
                for dm in 0u64..(1u64 << dels.len()) {
                    if am == (1u64 << adds.len()) - 1 && dm == (1u64 << dels.len()) - 1 {
                        continue; // the pair itself
                    }
                    let sub = Explanation {
                        add: adds
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| am & (1 << i) != 0)
                            .map(|(_, a)| a.clone())
                            .collect(),
                        del: dels
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| dm & (1 << i) != 0)
                            .map(|(_, a)| a.clone())
                            .collect(),
                    };
                    if self.check_explanation(&sub)? {
                        continue 'next; // dominated
                    }
                }
            }
            out.push(d.clone());
        }
        Ok(out)
    }

    /// Keeps the explanations whose size equals the smallest size of
    /// any explanation in the bounded candidate space.
    pub fn filter_card_minimal(
        &mut self,
        ds: &[Explanation],
    ) -> Result<Vec<Explanation>, SearchError> {
        let mut smallest: Option<usize> = None;
        self.for_each_explanation(|d| {
            smallest = Some(d.size());
            ControlFlow::Break(())
        })?;
        Ok(match smallest {
            None => ds.to_vec(),
            Some(m) => ds.iter().filter(|d| d.size() == m).cloned().collect(),
        })
    }

    /// Sorts explanations by ascending degree of arbitrariness, then by
    /// the usual (size, lexicographic) order.
    pub fn rank_by_arbitrariness(
        &mut self,
        ds: &[Explanation],
    ) -> Result<Vec<(Explanation, usize)>, SearchError> {
        let arb = ArbitrarinessOptions {
            occurrence_cap: self.opts.occurrence_cap,
            agreement: self.opts.agreement,
        };
        let mut out = Vec::with_capacity(ds.len());
        for d in ds {
            let deg = arbitrariness::degree(self.theory, self.obs, d, self.ty, &arb)?;
            out.push((d.clone(), deg));
        }
        out.sort_by(|(d1, g1), (d2, g2)| g1.cmp(g2).then_with(|| d1.cmp(d2)));
        Ok(out)
    }

    /// Checks an arbitrary explanation through the same options this
    /// searcher uses (public path; not restricted to the universe).
    pub fn check_explanation(&mut self, d: &Explanation) -> Result<bool, SearchError> {
        self.stats.candidates_checked += 1;
        Ok(is_explanation(self.theory, self.obs, d, self.ty, &self.opts.agreement)?.verdict)
    }
}

fn binomial_u128(n: u128, k: usize) -> u128 {
    let mut out: u128 = 1;
    for i in 0..k {
        let factor = n.saturating_sub(i as u128);
        if factor == 0 {
            return 0;
        }
        out = out.saturating_mul(factor) / (i as u128 + 1);
    }
    out
}

fn enumerate_abducible_atoms(
    abducibles: &BTreeSet<Predicate>,
    domain: &BTreeSet<Constant>,
) -> Vec<GroundAtom> {
    let domain: Vec<Constant> = domain.iter().cloned().collect();
    let mut out = Vec::new();
    for p in abducibles {
        if p.arity == 0 {
            out.push(GroundAtom::prop(p.name.clone()));
            continue;
        }
        if domain.is_empty() {
            continue;
        }
        let mut odometer = vec![0usize; p.arity];
        loop {
            out.push(GroundAtom::new(
                p.name.clone(),
                odometer.iter().map(|&i| domain[i].clone()).collect(),
            ));
            let mut k = 0;
            loop {
                if k == odometer.len() {
                    break;
                }
                odometer[k] += 1;
                if odometer[k] < domain.len() {
                    break;
                }
                odometer[k] = 0;
                k += 1;
            }
            if k == odometer.len() {
                break;
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn replace_by_mask(
    e: &BTreeSet<GroundAtom>,
    occs: &[crate::core::Occurrence],
    mask: u64,
    xi: &Constant,
) -> BTreeSet<GroundAtom> {
    let mut positions: std::collections::BTreeMap<&GroundAtom, BTreeSet<usize>> =
        std::collections::BTreeMap::new();
    for (i, o) in occs.iter().enumerate() {
        if mask & (1 << i) != 0 {
            positions.entry(&o.atom).or_default().insert(o.position);
        }
    }
    e.iter()
        .map(|atom| match positions.get(atom) {
            None => atom.clone(),
            Some(ks) => GroundAtom::new(
                atom.predicate.clone(),
                atom.args
                    .iter()
                    .enumerate()
                    .map(|(i, a)| {
                        if ks.contains(&(i + 1)) {
                            xi.clone()
                        } else {
                            a.clone()
                        }
                    })
                    .collect(),
            ),
        })
        .collect()
}

/// Abducible atoms that can influence any candidate check: those
/// mentioned by a rule instance whose non-abducible positive body is
/// derivable when every abducible atom is assumed present (negation
/// ignored), plus everything whose predicate appears in a constraint.
fn relevant_abducibles(
    gp: &GroundProgram,
    theory: &AbductiveTheory,
    domain: &BTreeSet<Constant>,
    b_atoms: &[GroundAtom],
) -> BTreeSet<GroundAtom> {
    let is_abducible = |id: u32| -> bool { theory.is_abducible(&gp.atom(id).pred()) };
    // most generous model: all abducibles plus B, negation dropped
    let mut truth = vec![false; gp.num_atoms()];
    for (id, atom) in gp.atoms().iter().enumerate() {
        if theory.is_abducible(&atom.pred()) {
            truth[id] = true;
        }
    }
    for a in b_atoms {
        if let Some(id) = gp.atom_id(a) {
            truth[id as usize] = true;
        }
    }
    loop {
        let mut changed = false;
        for r in &gp.rules {
            if !truth[r.head as usize] && r.pos.iter().all(|&a| truth[a as usize]) {
                truth[r.head as usize] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut keep: BTreeSet<GroundAtom> = BTreeSet::new();
    for r in &gp.rules {
        let viable = r.pos.iter().all(|&a| is_abducible(a) || truth[a as usize]);
        if !viable {
            continue;
        }
        for &a in r.pos.iter().chain(r.neg.iter()) {
            if is_abducible(a) {
                keep.insert(gp.atom(a).clone());
            }
        }
    }
    // constraints are checked coarsely: any abducible predicate they
    // mention keeps its whole atom space
    let mut constrained_preds: BTreeSet<Predicate> = BTreeSet::new();
    for c in theory.constraints() {
        for a in c
            .heads
            .iter()
            .chain(c.body_pos.iter())
            .chain(c.body_neg.iter())
        {
            let p = a.pred();
            if theory.is_abducible(&p) {
                constrained_preds.insert(p);
            }
        }
    }
    if !constrained_preds.is_empty() {
        for a in enumerate_abducible_atoms(&constrained_preds, domain) {
            keep.insert(a);
        }
    }
    keep
}

/// The polynomial decision procedure for non-recursive Horn theories
/// without integrity constraints: candidates take any subset of the
/// zero-arity abducibles missing from B plus at most k positive-arity
/// abducible atoms over the constants of theory and observation, where
/// k bounds the number of abducible leaves in any proof of the
/// observation. Returns the first constrained explanation found.
fn ensure_tractable_class(theory: &AbductiveTheory) -> Result<(), SearchError> {
    let remainder = theory.remainder();
    let gp = ground(&remainder, &constants_of(theory))?;
    let class = gp.classify();
    if !class.horn {
        return Err(SearchError::ClassMismatch(
            "the program uses negation".into(),
        ));
    }
    if !class.non_recursive {
        return Err(SearchError::ClassMismatch(
            "the program is recursive".into(),
        ));
    }
    if !theory.constraints().is_empty() {
        return Err(SearchError::ClassMismatch(
            "the theory has integrity constraints".into(),
        ));
    }
    Ok(())
}

/// The add-part size the tractable path searches within: every
/// zero-arity abducible missing from B plus the proof-leaf bound k.
/// A bounded generic search with this `max_add` and `max_del = 0`
/// covers the same space.
pub fn tractable_add_bound(
    theory: &AbductiveTheory,
    obs: &Observation,
) -> Result<usize, SearchError> {
    ensure_tractable_class(theory)?;
    let b = theory.abducible_facts();
    let zero_missing = theory
        .abducibles()
        .iter()
        .filter(|p| p.arity == 0)
        .map(|p| GroundAtom::prop(p.name.clone()))
        .filter(|a| !b.contains(a))
        .count();
    Ok(zero_missing + proof_leaf_bound(theory, obs))
}

pub fn find_constrained_tractable(
    theory: &AbductiveTheory,
    obs: &Observation,
    opts: &SearchOptions,
) -> Result<Option<Explanation>, SearchError> {
    theory
        .check_observation(obs)
        .map_err(|e| SearchError::InvalidObservation(e.to_string()))?;
    ensure_tractable_class(theory)?;

    let k = proof_leaf_bound(theory, obs);
    let b = theory.abducible_facts();
    let mut domain = constants_of(theory);
    obs.collect_constants(&mut domain);

    let zero_arity: Vec<GroundAtom> = theory
        .abducibles()
        .iter()
        .filter(|p| p.arity == 0)
        .map(|p| GroundAtom::prop(p.name.clone()))
        .filter(|a| !b.contains(a))
        .collect();
    let positive: Vec<GroundAtom> = enumerate_abducible_atoms(
        &theory
            .abducibles()
            .iter()
            .filter(|p| p.arity > 0)
            .cloned()
            .collect(),
        &domain,
    )
    .into_iter()
    .filter(|a| !b.contains(a))
    .collect();

    // reuse the prepared engine; bounds sized to the candidate shape
    let bounds = SearchBounds::new(zero_arity.len() + k, 0);
    let mut searcher = Searcher::new(theory, obs, AgreementType::D, bounds, *opts)?;
    let zero_idx: Vec<usize> = zero_arity
        .iter()
        .map(|a| {
            searcher
                .add_universe
                .binary_search(a)
                .expect("zero-arity atom in universe")
        })
        .collect();
    let pos_idx: Vec<usize> = positive
        .iter()
        .map(|a| {
            searcher
                .add_universe
                .binary_search(a)
                .expect("positive atom in universe")
        })
        .collect();

    for size in 0..=(zero_idx.len() + k) {
        for zs in 0..=size.min(zero_idx.len()) {
            let ps = size - zs;
            if ps > k || ps > pos_idx.len() {
                continue;
            }
            let mut z_combos = Combos::new(zero_idx.len(), zs);
            while let Some(z_sel) = z_combos.next() {
                let z_now: Vec<usize> = z_sel.iter().map(|&i| zero_idx[i]).collect();
                let mut p_combos = Combos::new(pos_idx.len(), ps);
                while let Some(p_sel) = p_combos.next() {
                    let mut e_idx: Vec<usize> = z_now.clone();
                    e_idx.extend(p_sel.iter().map(|&i| pos_idx[i]));
                    e_idx.sort_unstable();
                    if searcher.check_candidate(&e_idx, &[])?
                        && searcher.candidate_is_constrained(&e_idx, &[])?
                    {
                        return Ok(Some(searcher.explanation_of(&e_idx, &[])));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Upper bound on the number of abducible facts any proof forest of
/// the observation can consume: per predicate, the worst rule body sum
/// over the (acyclic) rule graph, with abducible predicates counting
/// as one leaf each.
fn proof_leaf_bound(theory: &AbductiveTheory, obs: &Observation) -> usize {
    fn weight(
        theory: &AbductiveTheory,
        pred: &Predicate,
        memo: &mut std::collections::BTreeMap<Predicate, usize>,
    ) -> usize {
        if let Some(&w) = memo.get(pred) {
            return w;
        }
        if theory.is_abducible(pred) {
            memo.insert(pred.clone(), 1);
            return 1;
        }
        let mut best = 0;
        for r in theory.rules() {
            if &r.head.pred() == pred && !r.body_pos.is_empty() {
                let sum: usize = r
                    .body_pos
                    .iter()
                    .map(|a| weight(theory, &a.pred(), memo))
                    .sum();
                best = best.max(sum);
            }
        }
        memo.insert(pred.clone(), best);
        best
    }
    let mut memo = std::collections::BTreeMap::new();
    obs.atoms
        .iter()
        .map(|a| weight(theory, &a.pred(), &mut memo))
        .sum()
}
