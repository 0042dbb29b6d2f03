//! Grounding and model computation: predicate dependency analysis with
//! stratification, the perfect model of stratified ground programs via
//! iterated least fixpoints, a brute-force stable-model enumerator used
//! as an oracle, integrity-constraint evaluation over the active domain,
//! and skeptical entailment.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::core::{Constant, Constants, GroundAtom, IntegrityConstraint, Predicate, Rule, Term};

/// Default cap on the number of ground atoms the brute-force
/// stable-model enumerator will accept.
pub const DEFAULT_ATOM_CAP: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("unsafe rule `{0}` reached grounding")]
    UnsafeRule(String),
    #[error("program is not stratified")]
    NotStratified,
    #[error("ground program has {atoms} atoms, exceeding the brute-force cap of {cap}")]
    AtomCapExceeded { atoms: usize, cap: usize },
    #[error("program is inconsistent: it has no stable model")]
    Inconsistent,
}

/// A finite set of ground atoms; the result of model computation.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct HerbrandModel {
    pub atoms: BTreeSet<GroundAtom>,
}

impl HerbrandModel {
    pub fn new(atoms: impl IntoIterator<Item = GroundAtom>) -> Self {
        HerbrandModel {
            atoms: atoms.into_iter().collect(),
        }
    }

    pub fn contains(&self, atom: &GroundAtom) -> bool {
        self.atoms.contains(atom)
    }

    pub fn satisfies_all(&self, atoms: &BTreeSet<GroundAtom>) -> bool {
        atoms.iter().all(|a| self.atoms.contains(a))
    }
}

impl fmt::Display for HerbrandModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", a)?;
        }
        f.write_str("}")
    }
}

/// The three program classes the complexity results distinguish.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub stratified: bool,
    pub non_recursive: bool,
    pub horn: bool,
}

/// A ground rule over interned atom ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundRule {
    pub head: u32,
    pub pos: Vec<u32>,
    pub neg: Vec<u32>,
}

/// A dependency edge `body predicate → head predicate`, marked negative
/// when the body atom is negated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependencyEdge {
    pub from: Predicate,
    pub to: Predicate,
    pub negative: bool,
}

/// All instantiations of a rule set over the active domain, together
/// with the predicate dependency graph, stratification metadata, and
/// the classification flags.
#[derive(Clone, Debug)]
pub struct GroundProgram {
    atoms: Vec<GroundAtom>,
    atom_ids: HashMap<GroundAtom, u32>,
    pub rules: Vec<GroundRule>,
    pub domain: BTreeSet<Constant>,
    edges: Vec<DependencyEdge>,
    pub stratified: bool,
    pub non_recursive: bool,
    pub horn: bool,
    strata: BTreeMap<Predicate, usize>,
    num_strata: usize,
}

impl GroundProgram {
    pub fn atom(&self, id: u32) -> &GroundAtom {
        &self.atoms[id as usize]
    }

    pub fn atom_id(&self, atom: &GroundAtom) -> Option<u32> {
        self.atom_ids.get(atom).copied()
    }

    pub fn atoms(&self) -> &[GroundAtom] {
        &self.atoms
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn dependency_edges(&self) -> &[DependencyEdge] {
        &self.edges
    }

    pub fn classify(&self) -> Classification {
        Classification {
            stratified: self.stratified,
            non_recursive: self.non_recursive,
            horn: self.horn,
        }
    }

    /// The stratum of a predicate, when the program is stratified.
    /// Predicates not mentioned by any rule sit at stratum 0.
    pub fn stratum_of(&self, pred: &Predicate) -> Option<usize> {
        if !self.stratified {
            return None;
        }
        Some(self.strata.get(pred).copied().unwrap_or(0))
    }

    pub fn num_strata(&self) -> usize {
        self.num_strata
    }

    fn intern(&mut self, atom: GroundAtom) -> u32 {
        if let Some(&id) = self.atom_ids.get(&atom) {
            return id;
        }
        let id = self.atoms.len() as u32;
        self.atoms.push(atom.clone());
        self.atom_ids.insert(atom, id);
        id
    }
}

/// The three classification flags per the dependency-graph invariants.
pub fn classify(gp: &GroundProgram) -> Classification {
    gp.classify()
}

struct PredGraph {
    preds: Vec<Predicate>,
    index: BTreeMap<Predicate, usize>,
    // adjacency: from → (to, negative)
    succ: Vec<Vec<(usize, bool)>>,
    edges: Vec<DependencyEdge>,
}

impl PredGraph {
    fn build(rules: &[Rule]) -> Self {
        let mut g = PredGraph {
            preds: Vec::new(),
            index: BTreeMap::new(),
            succ: Vec::new(),
            edges: Vec::new(),
        };
        let node = |g: &mut PredGraph, p: Predicate| -> usize {
            if let Some(&i) = g.index.get(&p) {
                return i;
            }
            let i = g.preds.len();
            g.preds.push(p.clone());
            g.index.insert(p, i);
            g.succ.push(Vec::new());
            i
        };
        let mut seen = BTreeSet::new();
        for r in rules {
            let h = node(&mut g, r.head.pred());
            for (a, negative) in r
                .body_pos
                .iter()
                .map(|a| (a, false))
                .chain(r.body_neg.iter().map(|a| (a, true)))
            {
                let b = node(&mut g, a.pred());
                if seen.insert((b, h, negative)) {
                    g.succ[b].push((h, negative));
                    g.edges.push(DependencyEdge {
                        from: g.preds[b].clone(),
                        to: g.preds[h].clone(),
                        negative,
                    });
                }
            }
        }
        g
    }

    /// Tarjan SCC; returns the component id of每 node. Graphs here are
    /// predicate-level and stay small, so recursion depth is bounded.
    fn sccs(&self) -> Vec<usize> {
        struct State<'a> {
            g: &'a PredGraph,
            index: Vec<Option<usize>>,
            low: Vec<usize>,
            on_stack: Vec<bool>,
            stack: Vec<usize>,
            next: usize,
            comp: Vec<usize>,
            ncomp: usize,
        }
        fn visit(st: &mut State, v: usize) {
            st.index[v] = Some(st.next);
            st.low[v] = st.next;
            st.next += 1;
            st.stack.push(v);
            st.on_stack[v] = true;
            for &(w, _) in &st.g.succ[v] {
                if st.index[w].is_none() {
                    visit(st, w);
                    st.low[v] = st.low[v].min(st.low[w]);
                } else if st.on_stack[w] {
                    st.low[v] = st.low[v].min(st.index[w].unwrap());
                }
            }
            if st.low[v] == st.index[v].unwrap() {
                while let Some(w) = st.stack.pop() {
                    st.on_stack[w] = false;
                    st.comp[w] = st.ncomp;
                    if w == v {
                        break;
                    }
                }
                st.ncomp += 1;
            }
        }
        let n = self.preds.len();
        let mut st = State {
            g: self,
            index: vec![None; n],
            low: vec![0; n],
            on_stack: vec![false; n],
            stack: Vec::new(),
            next: 0,
            comp: vec![0; n],
            ncomp: 0,
        };
        for v in 0..n {
            if st.index[v].is_none() {
                visit(&mut st, v);
            }
        }
        st.comp
    }
}

/// Grounds `rules` over the active domain: the constants occurring in
/// the rules plus `extra_constants`. Computes the dependency graph,
/// SCC-based stratification and the classification flags.
pub fn ground(
    rules: &[Rule],
    extra_constants: &BTreeSet<Constant>,
) -> Result<GroundProgram, SemanticsError> {
    for r in rules {
        if !r.is_safe() {
            return Err(SemanticsError::UnsafeRule(r.to_string()));
        }
    }
    let mut domain: BTreeSet<Constant> = extra_constants.clone();
    rules.collect_constants(&mut domain);

    let graph = PredGraph::build(rules);
    let comp = graph.sccs();
    let horn = rules.iter().all(|r| r.body_neg.is_empty());
    let mut stratified = true;
    let mut non_recursive = true;
    for (v, succs) in graph.succ.iter().enumerate() {
        for &(w, negative) in succs {
            if comp[v] == comp[w] {
                non_recursive = false;
                if negative {
                    stratified = false;
                }
            }
        }
    }

    // Strata via the SCC condensation: positive edges keep the stratum,
    // negative edges raise it.
    let mut strata = BTreeMap::new();
    let mut num_strata = 0;
    if stratified {
        let ncomp = comp.iter().copied().max().map_or(0, |m| m + 1);
        let mut comp_succ: Vec<Vec<(usize, bool)>> = vec![Vec::new(); ncomp];
        let mut indeg = vec![0usize; ncomp];
        for (v, succs) in graph.succ.iter().enumerate() {
            for &(w, negative) in succs {
                if comp[v] != comp[w] {
                    comp_succ[comp[v]].push((comp[w], negative));
                    indeg[comp[w]] += 1;
                }
            }
        }
        let mut level = vec![0usize; ncomp];
        let mut queue: Vec<usize> = (0..ncomp).filter(|&c| indeg[c] == 0).collect();
        while let Some(c) = queue.pop() {
            for &(d, negative) in &comp_succ[c] {
                let req = level[c] + usize::from(negative);
                if req > level[d] {
                    level[d] = req;
                }
                indeg[d] -= 1;
                if indeg[d] == 0 {
                    queue.push(d);
                }
            }
        }
        for (v, p) in graph.preds.iter().enumerate() {
            strata.insert(p.clone(), level[comp[v]]);
        }
        num_strata = level.iter().copied().max().map_or(0, |m| m + 1).max(1);
    }

    let mut gp = GroundProgram {
        atoms: Vec::new(),
        atom_ids: HashMap::new(),
        rules: Vec::new(),
        domain: domain.clone(),
        edges: graph.edges,
        stratified,
        non_recursive,
        horn,
        strata,
        num_strata,
    };

    let domain_vec: Vec<Constant> = domain.iter().cloned().collect();
    for r in rules {
        let mut vars: Vec<_> = Vec::new();
        for a in std::iter::once(&r.head)
            .chain(r.body_pos.iter())
            .chain(r.body_neg.iter())
        {
            for v in a.variables() {
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
        }
        if vars.is_empty() {
            push_instance(&mut gp, r, &BTreeMap::new());
            continue;
        }
        if domain_vec.is_empty() {
            continue; // no instantiations over an empty domain
        }
        let mut odometer = vec![0usize; vars.len()];
        loop {
            let assignment: BTreeMap<_, _> = vars
                .iter()
                .cloned()
                .zip(odometer.iter().map(|&i| domain_vec[i].clone()))
                .collect();
            push_instance(&mut gp, r, &assignment);
            let mut k = 0;
            loop {
                if k == odometer.len() {
                    break;
                }
                odometer[k] += 1;
                if odometer[k] < domain_vec.len() {
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
    Ok(gp)
}

fn substitute(
    atom: &crate::core::Atom,
    assignment: &BTreeMap<crate::core::Variable, Constant>,
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

fn push_instance(
    gp: &mut GroundProgram,
    rule: &Rule,
    assignment: &BTreeMap<crate::core::Variable, Constant>,
) {
    let head = substitute(&rule.head, assignment);
    let head = gp.intern(head);
    let pos = rule
        .body_pos
        .iter()
        .map(|a| gp.intern(substitute(a, assignment)))
        .collect();
    let neg = rule
        .body_neg
        .iter()
        .map(|a| gp.intern(substitute(a, assignment)))
        .collect();
    gp.rules.push(GroundRule { head, pos, neg });
}

/// A reusable fixpoint engine for stratified ground rule sets. Compiled
/// once, then evaluated against many different fact sets; the search
/// layer leans on this to keep candidate checking cheap.
#[derive(Clone, Debug)]
pub struct Evaluator {
    atoms: Vec<GroundAtom>,
    atom_ids: HashMap<GroundAtom, u32>,
    heads: Vec<u32>,
    negs: Vec<Vec<u32>>,
    pos_counts: Vec<u32>,
    rule_stratum: Vec<u32>,
    watchers: Vec<Vec<u32>>,
    zero_pos_rules: Vec<u32>,
    num_strata: usize,
}

/// Scratch buffers for [`Evaluator::eval`]; reuse across calls.
#[derive(Clone, Debug, Default)]
pub struct EvalScratch {
    truth: Vec<bool>,
    counts: Vec<u32>,
    queues: Vec<Vec<u32>>,
    trail: Vec<u32>,
}

impl Evaluator {
    /// Compiles a stratified ground program. `extra_atoms` are interned
    /// alongside the program atoms so they can appear in fact sets later
    /// (candidate abducibles, observation atoms).
    pub fn new(
        gp: &GroundProgram,
        extra_atoms: impl IntoIterator<Item = GroundAtom>,
    ) -> Result<Self, SemanticsError> {
        if !gp.stratified {
            return Err(SemanticsError::NotStratified);
        }
        let mut atoms = gp.atoms.clone();
        let mut atom_ids = gp.atom_ids.clone();
        for a in extra_atoms {
            atom_ids.entry(a).or_insert_with_key(|a| {
                atoms.push(a.clone());
                (atoms.len() - 1) as u32
            });
        }
        let n_rules = gp.rules.len();
        let mut heads = Vec::with_capacity(n_rules);
        let mut negs = Vec::with_capacity(n_rules);
        let mut pos_counts = Vec::with_capacity(n_rules);
        let mut rule_stratum = Vec::with_capacity(n_rules);
        let mut watchers: Vec<Vec<u32>> = vec![Vec::new(); atoms.len()];
        let mut zero_pos_rules = Vec::new();
        for (i, r) in gp.rules.iter().enumerate() {
            heads.push(r.head);
            negs.push(r.neg.clone());
            pos_counts.push(r.pos.len() as u32);
            let stratum = gp
                .stratum_of(&gp.atom(r.head).pred())
                .expect("stratified program has strata");
            rule_stratum.push(stratum as u32);
            if r.pos.is_empty() {
                zero_pos_rules.push(i as u32);
            }
            // deduplicate repeated body atoms so counters stay accurate
            let mut uniq: Vec<u32> = r.pos.clone();
            uniq.sort_unstable();
            uniq.dedup();
            pos_counts[i] = uniq.len() as u32;
            for a in uniq {
                watchers[a as usize].push(i as u32);
            }
        }
        Ok(Evaluator {
            atoms,
            atom_ids,
            heads,
            negs,
            pos_counts,
            rule_stratum,
            watchers,
            zero_pos_rules,
            num_strata: gp.num_strata.max(1),
        })
    }

    pub fn atom_id(&self, atom: &GroundAtom) -> Option<u32> {
        self.atom_ids.get(atom).copied()
    }

    pub fn atom(&self, id: u32) -> &GroundAtom {
        &self.atoms[id as usize]
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    /// Computes the perfect model of the compiled rules plus `facts`.
    /// After the call, `scratch.truth()` holds the model; `scratch`
    /// may be reused for the next evaluation.
    pub fn eval(&self, facts: &[u32], scratch: &mut EvalScratch) {
        let n_atoms = self.atoms.len();
        let n_rules = self.heads.len();
        if scratch.truth.len() != n_atoms
            || scratch.counts.len() != n_rules
            || scratch.queues.len() != self.num_strata
        {
            scratch.truth = vec![false; n_atoms];
            scratch.counts = vec![0; n_rules];
            scratch.queues = vec![Vec::new(); self.num_strata];
            scratch.trail = Vec::new();
        } else {
            for &a in &scratch.trail {
                scratch.truth[a as usize] = false;
            }
            for q in &mut scratch.queues {
                q.clear();
            }
        }
        scratch.trail.clear();
        scratch.counts.copy_from_slice(&self.pos_counts);

        for &r in &self.zero_pos_rules {
            scratch.queues[self.rule_stratum[r as usize] as usize].push(r);
        }
        for &a in facts {
            self.set_true(a, 0, scratch);
        }
        for s in 0..self.num_strata {
            while let Some(r) = scratch.queues[s].pop() {
                let r = r as usize;
                if self.negs[r].iter().any(|&a| scratch.truth[a as usize]) {
                    continue;
                }
                self.set_true(self.heads[r], s, scratch);
            }
        }
    }

    fn set_true(&self, atom: u32, _current_stratum: usize, scratch: &mut EvalScratch) {
        if scratch.truth[atom as usize] {
            return;
        }
        scratch.truth[atom as usize] = true;
        scratch.trail.push(atom);
        for &r in &self.watchers[atom as usize] {
            let c = &mut scratch.counts[r as usize];
            *c -= 1;
            if *c == 0 {
                scratch.queues[self.rule_stratum[r as usize] as usize].push(r);
            }
        }
    }

    /// Convenience wrapper producing a `HerbrandModel`.
    pub fn eval_model(&self, facts: &[u32], scratch: &mut EvalScratch) -> HerbrandModel {
        self.eval(facts, scratch);
        HerbrandModel::new(
            scratch
                .trail
                .iter()
                .map(|&a| self.atoms[a as usize].clone()),
        )
    }
}

impl EvalScratch {
    pub fn is_true(&self, id: u32) -> bool {
        self.truth[id as usize]
    }

    pub fn true_atoms(&self) -> &[u32] {
        &self.trail
    }
}

/// The unique stable model (perfect model) of a stratified ground
/// program, by iterated least fixpoints along the strata.
pub fn stable_model_stratified(gp: &GroundProgram) -> Result<HerbrandModel, SemanticsError> {
    let ev = Evaluator::new(gp, [])?;
    let mut scratch = EvalScratch::default();
    Ok(ev.eval_model(&[], &mut scratch))
}

fn least_model_of_reduct(rules: &[GroundRule], model: &[bool], out: &mut [bool]) {
    out.iter_mut().for_each(|b| *b = false);
    // small programs only; a simple fixpoint loop is fine here
    loop {
        let mut changed = false;
        for r in rules {
            if out[r.head as usize] {
                continue;
            }
            if r.neg.iter().any(|&a| model[a as usize]) {
                continue; // deleted by the reduct
            }
            if r.pos.iter().all(|&a| out[a as usize]) {
                out[r.head as usize] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
}

/// All stable models of a ground normal program by exhaustive
/// enumeration of interpretations over the atoms occurring in it:
/// M is stable iff M equals the least model of the Gelfond–Lifschitz
/// reduct of the program by M. Models come back in lexicographic order.
pub fn stable_models_bruteforce_with_cap(
    gp: &GroundProgram,
    cap: usize,
) -> Result<Vec<HerbrandModel>, SemanticsError> {
    let n = gp.atoms.len();
    let cap = cap.min(62);
    if n > cap {
        return Err(SemanticsError::AtomCapExceeded { atoms: n, cap });
    }
    let mut models = BTreeSet::new();
    let mut candidate = vec![false; n];
    let mut least = vec![false; n];
    for mask in 0u64..(1u64 << n) {
        for (i, c) in candidate.iter_mut().enumerate() {
            *c = mask & (1 << i) != 0;
        }
        least_model_of_reduct(&gp.rules, &candidate, &mut least);
        if least == candidate {
            models.insert(HerbrandModel::new(
                candidate
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(i, _)| gp.atoms[i].clone()),
            ));
        }
    }
    Ok(models.into_iter().collect())
}

pub fn stable_models_bruteforce(gp: &GroundProgram) -> Result<Vec<HerbrandModel>, SemanticsError> {
    stable_models_bruteforce_with_cap(gp, DEFAULT_ATOM_CAP)
}

/// True iff every ground instantiation of every constraint over the
/// active domain holds in M: body satisfied implies some head atom in M.
/// Constraint safety lets the instantiation enumerate matches of the
/// positive body against M instead of the whole domain product.
pub fn eval_constraints(
    model: &HerbrandModel,
    constraints: &[IntegrityConstraint],
    active_domain: &BTreeSet<Constant>,
) -> bool {
    constraints
        .iter()
        .all(|c| eval_one_constraint(model, c, active_domain))
}

fn eval_one_constraint(
    model: &HerbrandModel,
    c: &IntegrityConstraint,
    active_domain: &BTreeSet<Constant>,
) -> bool {
    // index the model by predicate for the join
    let mut by_pred: BTreeMap<Predicate, Vec<&GroundAtom>> = BTreeMap::new();
    for a in &model.atoms {
        by_pred.entry(a.pred()).or_default().push(a);
    }
    let mut assignment: BTreeMap<crate::core::Variable, Constant> = BTreeMap::new();
    join_positive(model, c, active_domain, &by_pred, 0, &mut assignment)
}

fn unify(
    pattern: &crate::core::Atom,
    fact: &GroundAtom,
    assignment: &mut BTreeMap<crate::core::Variable, Constant>,
    bound_here: &mut Vec<crate::core::Variable>,
) -> bool {
    debug_assert_eq!(pattern.args.len(), fact.args.len());
    for (t, c) in pattern.args.iter().zip(fact.args.iter()) {
        match t {
            Term::Const(k) => {
                if k != c {
                    return false;
                }
            }
            Term::Var(v) => match assignment.get(v) {
                Some(bound) => {
                    if bound != c {
                        return false;
                    }
                }
                None => {
                    assignment.insert(v.clone(), c.clone());
                    bound_here.push(v.clone());
                }
            },
        }
    }
    true
}

fn join_positive(
    model: &HerbrandModel,
    c: &IntegrityConstraint,
    active_domain: &BTreeSet<Constant>,
    by_pred: &BTreeMap<Predicate, Vec<&GroundAtom>>,
    depth: usize,
    assignment: &mut BTreeMap<crate::core::Variable, Constant>,
) -> bool {
    if depth == c.body_pos.len() {
        // quantification ranges over the active domain only
        if !assignment.values().all(|v| active_domain.contains(v)) {
            return true;
        }
        let neg_sat = c
            .body_neg
            .iter()
            .all(|a| !model.contains(&substitute(a, assignment)));
        if !neg_sat {
            return true; // body false, instance vacuously holds
        }
        return c
            .heads
            .iter()
            .any(|h| model.contains(&substitute(h, assignment)));
    }
    let pattern = &c.body_pos[depth];
    let Some(facts) = by_pred.get(&pattern.pred()) else {
        return true; // no match, body unsatisfiable from here on
    };
    for fact in facts {
        let mut bound_here = Vec::new();
        if unify(pattern, fact, assignment, &mut bound_here) {
            let ok = join_positive(model, c, active_domain, by_pred, depth + 1, assignment);
            for v in &bound_here {
                assignment.remove(v);
            }
            if !ok {
                return false;
            }
        } else {
            for v in &bound_here {
                assignment.remove(v);
            }
        }
    }
    true
}

/// Skeptical entailment: Φ holds in every model. An empty model set
/// means the program is inconsistent, which is reported to the caller.
pub fn entails_skeptical(
    models: &[HerbrandModel],
    atoms: &BTreeSet<GroundAtom>,
) -> Result<bool, SemanticsError> {
    if models.is_empty() {
        return Err(SemanticsError::Inconsistent);
    }
    Ok(models.iter().all(|m| m.satisfies_all(atoms)))
}
