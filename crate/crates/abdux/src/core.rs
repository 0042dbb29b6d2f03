//! Vocabulary-level domain types shared by every other module: constants,
//! terms, atoms, rules, integrity constraints, abductive theories,
//! observations, explanations and occurrences.
//!
//! All values here are immutable after construction and freely shareable
//! across threads.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Prefix of the reserved constant namespace. User-facing convention is
/// that ordinary input sticks to plain lowercase tokens; constants minted
/// by [`fresh_constant`] and by the reduction generators start with `_`
/// so freshness is checkable syntactically.
pub const RESERVED_PREFIX: &str = "_";

/// A constant symbol: a lowercase identifier, an integer literal, or a
/// reserved `_`-prefixed token. Equality is exact token equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constant(String);

impl Constant {
    pub fn new(name: impl Into<String>) -> Self {
        Constant(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// True for constants in the reserved (generator/fresh) namespace.
    pub fn is_reserved(&self) -> bool {
        self.0.starts_with(RESERVED_PREFIX)
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Constant({})", self.0)
    }
}

impl From<&str> for Constant {
    fn from(s: &str) -> Self {
        Constant::new(s)
    }
}

/// A variable: an uppercase-initial identifier.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(String);

impl Variable {
    pub fn new(name: impl Into<String>) -> Self {
        Variable(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Variable({})", self.0)
    }
}

/// A term is either a constant or a variable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Const(Constant),
    Var(Variable),
}

impl Term {
    pub fn constant(name: impl Into<String>) -> Self {
        Term::Const(Constant::new(name))
    }

    pub fn variable(name: impl Into<String>) -> Self {
        Term::Var(Variable::new(name))
    }

    pub fn as_constant(&self) -> Option<&Constant> {
        match self {
            Term::Const(c) => Some(c),
            Term::Var(_) => None,
        }
    }

    pub fn is_ground(&self) -> bool {
        matches!(self, Term::Const(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) => c.fmt(f),
            Term::Var(v) => v.fmt(f),
        }
    }
}

/// A predicate name together with its arity, e.g. `q/2`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Predicate {
    pub name: String,
    pub arity: usize,
}

impl Predicate {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Predicate {
            name: name.into(),
            arity,
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Predicate({}/{})", self.name, self.arity)
    }
}

/// An atom over terms; ground iff all arguments are constants.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn pred(&self) -> Predicate {
        Predicate::new(self.predicate.clone(), self.args.len())
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    /// The ground image of this atom, if it has no variables.
    pub fn to_ground(&self) -> Option<GroundAtom> {
        let mut args = Vec::with_capacity(self.args.len());
        for t in &self.args {
            args.push(t.as_constant()?.clone());
        }
        Some(GroundAtom::new(self.predicate.clone(), args))
    }

    pub fn variables(&self) -> BTreeSet<Variable> {
        self.args
            .iter()
            .filter_map(|t| match t {
                Term::Var(v) => Some(v.clone()),
                Term::Const(_) => None,
            })
            .collect()
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                a.fmt(f)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// A variable-free atom. Observations, explanations and Herbrand models
/// are sets of these.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAtom {
    pub predicate: String,
    pub args: Vec<Constant>,
}

impl GroundAtom {
    pub fn new(predicate: impl Into<String>, args: Vec<Constant>) -> Self {
        GroundAtom {
            predicate: predicate.into(),
            args,
        }
    }

    /// A zero-arity ground atom.
    pub fn prop(predicate: impl Into<String>) -> Self {
        GroundAtom::new(predicate, Vec::new())
    }

    pub fn pred(&self) -> Predicate {
        Predicate::new(self.predicate.clone(), self.args.len())
    }

    pub fn to_atom(&self) -> Atom {
        Atom::new(
            self.predicate.clone(),
            self.args.iter().cloned().map(Term::Const).collect(),
        )
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_atom().fmt(f)
    }
}

/// A normal rule `head :- body_pos, not body_neg`. A fact is a rule with
/// an empty body and a ground head.
///
/// Safety: every variable of the head or of a negated body atom must
/// occur in some positive body atom. This is checked at parse time and
/// by [`AbductiveTheory::new`]; it keeps grounding over the active
/// domain finite and complete.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub head: Atom,
    pub body_pos: Vec<Atom>,
    pub body_neg: Vec<Atom>,
}

impl Rule {
    pub fn new(head: Atom, body_pos: Vec<Atom>, body_neg: Vec<Atom>) -> Self {
        Rule {
            head,
            body_pos,
            body_neg,
        }
    }

    pub fn fact(head: GroundAtom) -> Self {
        Rule {
            head: head.to_atom(),
            body_pos: Vec::new(),
            body_neg: Vec::new(),
        }
    }

    pub fn is_fact(&self) -> bool {
        self.body_pos.is_empty() && self.body_neg.is_empty() && self.head.is_ground()
    }

    /// Variables of the head or a negated body atom that appear in no
    /// positive body atom.
    pub fn unsafe_variables(&self) -> BTreeSet<Variable> {
        let mut positive = BTreeSet::new();
        for a in &self.body_pos {
            positive.extend(a.variables());
        }
        let mut out = BTreeSet::new();
        for v in self.head.variables() {
            if !positive.contains(&v) {
                out.insert(v.clone());
            }
        }
        for a in &self.body_neg {
            for v in a.variables() {
                if !positive.contains(&v) {
                    out.insert(v.clone());
                }
            }
        }
        out
    }

    pub fn is_safe(&self) -> bool {
        self.unsafe_variables().is_empty()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.head.fmt(f)?;
        if !self.body_pos.is_empty() || !self.body_neg.is_empty() {
            f.write_str(" :- ")?;
            let mut first = true;
            for a in &self.body_pos {
                if !first {
                    f.write_str(", ")?;
                }
                first = false;
                a.fmt(f)?;
            }
            for a in &self.body_neg {
                if !first {
                    f.write_str(", ")?;
                }
                first = false;
                f.write_str("not ")?;
                a.fmt(f)?;
            }
        }
        f.write_str(".")
    }
}

/// A universally closed safe implication `body ⊃ h1 ∨ ... ∨ hm` (m ≥ 0).
/// An empty head makes it a denial: the body must not be jointly
/// satisfiable. Safety: every variable occurs in a positive body atom.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntegrityConstraint {
    pub heads: Vec<Atom>,
    pub body_pos: Vec<Atom>,
    pub body_neg: Vec<Atom>,
}

impl IntegrityConstraint {
    pub fn new(heads: Vec<Atom>, body_pos: Vec<Atom>, body_neg: Vec<Atom>) -> Self {
        IntegrityConstraint {
            heads,
            body_pos,
            body_neg,
        }
    }

    pub fn unsafe_variables(&self) -> BTreeSet<Variable> {
        let mut positive = BTreeSet::new();
        for a in &self.body_pos {
            positive.extend(a.variables());
        }
        let mut out = BTreeSet::new();
        let heads_and_negs = self.heads.iter().chain(self.body_neg.iter());
        for a in heads_and_negs {
            for v in a.variables() {
                if !positive.contains(&v) {
                    out.insert(v.clone());
                }
            }
        }
        out
    }

    pub fn is_safe(&self) -> bool {
        self.unsafe_variables().is_empty()
    }
}

impl fmt::Display for IntegrityConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("#ic ")?;
        for (i, h) in self.heads.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            h.fmt(f)?;
        }
        if !self.heads.is_empty() {
            f.write_str(" ")?;
        }
        f.write_str(":- ")?;
        let mut first = true;
        for a in &self.body_pos {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            a.fmt(f)?;
        }
        for a in &self.body_neg {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            f.write_str("not ")?;
            a.fmt(f)?;
        }
        f.write_str(".")
    }
}

/// Errors raised when assembling ill-formed domain values.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("unsafe rule `{rule}`: variable(s) {vars:?} not bound by a positive body atom")]
    UnsafeRule { rule: String, vars: Vec<String> },
    #[error(
        "unsafe constraint `{constraint}`: variable(s) {vars:?} not bound by a positive body atom"
    )]
    UnsafeConstraint {
        constraint: String,
        vars: Vec<String>,
    },
    #[error("rule `{rule}` has abducible head predicate {predicate} but is not a ground fact")]
    NonFactAbducibleHead { rule: String, predicate: String },
    #[error("explanation adds and deletes the same atom(s): {atoms:?}")]
    OverlappingExplanation { atoms: Vec<String> },
    #[error("observation atom {atom} uses abducible predicate {predicate}")]
    AbducibleObservation { atom: String, predicate: String },
}

/// An abductive theory ⟨program, abducibles, constraints⟩. Every rule
/// whose head predicate is abducible must be a ground fact; those facts
/// form the set B, the rest of the program is the remainder R.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbductiveTheory {
    rules: Vec<Rule>,
    abducibles: BTreeSet<Predicate>,
    constraints: Vec<IntegrityConstraint>,
}

impl AbductiveTheory {
    pub fn new(
        rules: Vec<Rule>,
        abducibles: BTreeSet<Predicate>,
        constraints: Vec<IntegrityConstraint>,
    ) -> Result<Self, CoreError> {
        for r in &rules {
            let vars = r.unsafe_variables();
            if !vars.is_empty() {
                return Err(CoreError::UnsafeRule {
                    rule: r.to_string(),
                    vars: vars.into_iter().map(|v| v.name().to_string()).collect(),
                });
            }
            if abducibles.contains(&r.head.pred()) && !r.is_fact() {
                return Err(CoreError::NonFactAbducibleHead {
                    rule: r.to_string(),
                    predicate: r.head.pred().to_string(),
                });
            }
        }
        for c in &constraints {
            let vars = c.unsafe_variables();
            if !vars.is_empty() {
                return Err(CoreError::UnsafeConstraint {
                    constraint: c.to_string(),
                    vars: vars.into_iter().map(|v| v.name().to_string()).collect(),
                });
            }
        }
        Ok(AbductiveTheory {
            rules,
            abducibles,
            constraints,
        })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn abducibles(&self) -> &BTreeSet<Predicate> {
        &self.abducibles
    }

    pub fn constraints(&self) -> &[IntegrityConstraint] {
        &self.constraints
    }

    pub fn is_abducible(&self, pred: &Predicate) -> bool {
        self.abducibles.contains(pred)
    }

    pub fn is_abducible_atom(&self, atom: &GroundAtom) -> bool {
        self.is_abducible(&atom.pred())
    }

    /// B: the ground abducible facts of the program.
    pub fn abducible_facts(&self) -> BTreeSet<GroundAtom> {
        self.rules
            .iter()
            .filter(|r| r.is_fact() && self.abducibles.contains(&r.head.pred()))
            .filter_map(|r| r.head.to_ground())
            .collect()
    }

    /// R: the rules and facts that are not abducible facts.
    pub fn remainder(&self) -> Vec<Rule> {
        self.rules
            .iter()
            .filter(|r| !(r.is_fact() && self.abducibles.contains(&r.head.pred())))
            .cloned()
            .collect()
    }

    /// Checks the observation invariant: no observed predicate is abducible.
    pub fn check_observation(&self, obs: &Observation) -> Result<(), CoreError> {
        for a in &obs.atoms {
            if self.is_abducible_atom(a) {
                return Err(CoreError::AbducibleObservation {
                    atom: a.to_string(),
                    predicate: a.pred().to_string(),
                });
            }
        }
        Ok(())
    }

    /// The program revised by an explanation: (P ∪ E) \ F, as a rule list.
    pub fn revised_rules(&self, delta: &Explanation) -> Vec<Rule> {
        let mut out: Vec<Rule> = self
            .rules
            .iter()
            .filter(|r| match r.head.to_ground() {
                Some(g) if r.is_fact() => !delta.del.contains(&g),
                _ => true,
            })
            .cloned()
            .collect();
        for a in &delta.add {
            let fact = Rule::fact(a.clone());
            if !out.contains(&fact) {
                out.push(fact);
            }
        }
        out
    }
}

impl fmt::Display for AbductiveTheory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.abducibles {
            writeln!(f, "#abducible {}.", p)?;
        }
        for r in &self.rules {
            writeln!(f, "{}", r)?;
        }
        for c in &self.constraints {
            writeln!(f, "{}", c)?;
        }
        Ok(())
    }
}

/// A finite set of ground non-abducible atoms to be explained.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Observation {
    pub atoms: BTreeSet<GroundAtom>,
}

impl Observation {
    pub fn new(atoms: impl IntoIterator<Item = GroundAtom>) -> Self {
        Observation {
            atoms: atoms.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        Observation::default()
    }
}

impl fmt::Display for Observation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.atoms {
            writeln!(f, "{}.", a)?;
        }
        Ok(())
    }
}

/// An explanation candidate Δ = (E, F): disjoint finite sets of ground
/// abducible atoms to add and to delete. `del ⊆ B` is checked against a
/// concrete theory at explanation-checking time, not here.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Explanation {
    pub add: BTreeSet<GroundAtom>,
    pub del: BTreeSet<GroundAtom>,
}

impl Explanation {
    pub fn new(
        add: impl IntoIterator<Item = GroundAtom>,
        del: impl IntoIterator<Item = GroundAtom>,
    ) -> Result<Self, CoreError> {
        let add: BTreeSet<_> = add.into_iter().collect();
        let del: BTreeSet<_> = del.into_iter().collect();
        let overlap: Vec<String> = add.intersection(&del).map(|a| a.to_string()).collect();
        if !overlap.is_empty() {
            return Err(CoreError::OverlappingExplanation { atoms: overlap });
        }
        Ok(Explanation { add, del })
    }

    pub fn empty() -> Self {
        Explanation::default()
    }

    /// |E| + |F|, the size used by cardinality minimality and ordering.
    pub fn size(&self) -> usize {
        self.add.len() + self.del.len()
    }

    /// True if `other` is componentwise ⊆ this explanation and distinct.
    pub fn strictly_dominated_by(&self, other: &Explanation) -> bool {
        other != self && other.add.is_subset(&self.add) && other.del.is_subset(&self.del)
    }
}

impl PartialOrd for Explanation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Explanation {
    /// Total order used everywhere a tie must break deterministically:
    /// total size, then number of additions, then the add set, then
    /// the delete set.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.add.len().cmp(&other.add.len()))
            .then_with(|| self.add.cmp(&other.add))
            .then_with(|| self.del.cmp(&other.del))
    }
}

impl fmt::Display for Explanation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.add {
            writeln!(f, "#add {}.", a)?;
        }
        for a in &self.del {
            writeln!(f, "#del {}.", a)?;
        }
        Ok(())
    }
}

/// An occurrence `p(x)^k` of a constant inside a set of ground atoms:
/// the atom together with a 1-based argument position.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occurrence {
    pub atom: GroundAtom,
    pub position: usize,
}

impl Occurrence {
    pub fn new(atom: GroundAtom, position: usize) -> Self {
        debug_assert!(position >= 1 && position <= atom.args.len());
        Occurrence { atom, position }
    }

    /// The constant this occurrence refers to.
    pub fn constant(&self) -> &Constant {
        &self.atom.args[self.position - 1]
    }
}

impl fmt::Display for Occurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.atom, self.position)
    }
}

/// Collects the constants syntactically occurring in a value.
pub trait Constants {
    fn collect_constants(&self, out: &mut BTreeSet<Constant>);
}

/// The exact set of constants syntactically occurring in the input.
/// Monotone under union of inputs.
pub fn constants_of<T: Constants + ?Sized>(x: &T) -> BTreeSet<Constant> {
    let mut out = BTreeSet::new();
    x.collect_constants(&mut out);
    out
}

impl Constants for Constant {
    fn collect_constants(&self, out: &mut BTreeSet<Constant>) {
        out.insert(self.clone());
    }
}

impl Constants for Term {
    fn collect_constants(&self, out: &mut BTreeSet<Constant>) {
        if let Term::Const(c) = self {
            out.insert(c.clone());
        }
    }
}

impl Constants for Atom {
    fn collect_constants(&self, out: &mut BTreeSet<Constant>) {
        for t in &self.args {
            t.collect_constants(out);
        }
    }
}

impl Constants for GroundAtom {
    fn collect_constants(&self, out: &mut BTreeSet<Constant>) {
        for c in &self.args {
            out.insert(c.clone());
        }
    }
}

impl Constants for Rule {
    fn collect_constants(&self, out: &mut BTreeSet<Constant>) {
        self.head.collect_constants(out);
        for a in self.body_pos.iter().chain(self.body_neg.iter()) {
            a.collect_constants(out);
        }
    }
}

impl Constants for IntegrityConstraint {
    fn collect_constants(&self, out: &mut BTreeSet<Constant>) {
        for a in self
            .heads
            .iter()
            .chain(self.body_pos.iter())
            .chain(self.body_neg.iter())
        {
            a.collect_constants(out);
        }
    }
}

impl Constants for AbductiveTheory {
    fn collect_constants(&self, out: &mut BTreeSet<Constant>) {
        for r in &self.rules {
            r.collect_constants(out);
        }
        for c in &self.constraints {
            c.collect_constants(out);
        }
    }
}

impl Constants for Observation {
    fn collect_constants(&self, out: &mut BTreeSet<Constant>) {
        for a in &self.atoms {
            a.collect_constants(out);
        }
    }
}

impl Constants for Explanation {
    fn collect_constants(&self, out: &mut BTreeSet<Constant>) {
        for a in self.add.iter().chain(self.del.iter()) {
            a.collect_constants(out);
        }
    }
}

impl<T: Constants> Constants for BTreeSet<T> {
    fn collect_constants(&self, out: &mut BTreeSet<Constant>) {
        for x in self {
            x.collect_constants(out);
        }
    }
}

impl<T: Constants> Constants for [T] {
    fn collect_constants(&self, out: &mut BTreeSet<Constant>) {
        for x in self {
            x.collect_constants(out);
        }
    }
}

/// Returns a constant not in `avoid`: the reserved token `_i` with the
/// lowest index `i` not already taken. Deterministic given `avoid`.
pub fn fresh_constant(avoid: &BTreeSet<Constant>) -> Constant {
    for i in 0.. {
        let candidate = Constant::new(format!("{}{}", RESERVED_PREFIX, i));
        if !avoid.contains(&candidate) {
            return candidate;
        }
    }
    unreachable!("the constant universe is open-ended")
}

/// Applies a constant-to-constant mapping everywhere in a value.
/// Constants outside the map are left unchanged. With an injective map
/// this is the renaming the semantics is insensitive to.
pub trait RenameConstants: Sized {
    fn rename_constants(&self, map: &dyn Fn(&Constant) -> Constant) -> Self;
}

impl RenameConstants for Term {
    fn rename_constants(&self, map: &dyn Fn(&Constant) -> Constant) -> Self {
        match self {
            Term::Const(c) => Term::Const(map(c)),
            Term::Var(v) => Term::Var(v.clone()),
        }
    }
}

impl RenameConstants for Atom {
    fn rename_constants(&self, map: &dyn Fn(&Constant) -> Constant) -> Self {
        Atom::new(
            self.predicate.clone(),
            self.args.iter().map(|t| t.rename_constants(map)).collect(),
        )
    }
}

impl RenameConstants for GroundAtom {
    fn rename_constants(&self, map: &dyn Fn(&Constant) -> Constant) -> Self {
        GroundAtom::new(self.predicate.clone(), self.args.iter().map(map).collect())
    }
}

impl RenameConstants for Rule {
    fn rename_constants(&self, map: &dyn Fn(&Constant) -> Constant) -> Self {
        Rule::new(
            self.head.rename_constants(map),
            self.body_pos
                .iter()
                .map(|a| a.rename_constants(map))
                .collect(),
            self.body_neg
                .iter()
                .map(|a| a.rename_constants(map))
                .collect(),
        )
    }
}

impl RenameConstants for IntegrityConstraint {
    fn rename_constants(&self, map: &dyn Fn(&Constant) -> Constant) -> Self {
        IntegrityConstraint::new(
            self.heads.iter().map(|a| a.rename_constants(map)).collect(),
            self.body_pos
                .iter()
                .map(|a| a.rename_constants(map))
                .collect(),
            self.body_neg
                .iter()
                .map(|a| a.rename_constants(map))
                .collect(),
        )
    }
}

impl RenameConstants for AbductiveTheory {
    fn rename_constants(&self, map: &dyn Fn(&Constant) -> Constant) -> Self {
        AbductiveTheory {
            rules: self.rules.iter().map(|r| r.rename_constants(map)).collect(),
            abducibles: self.abducibles.clone(),
            constraints: self
                .constraints
                .iter()
                .map(|c| c.rename_constants(map))
                .collect(),
        }
    }
}

impl RenameConstants for Observation {
    fn rename_constants(&self, map: &dyn Fn(&Constant) -> Constant) -> Self {
        Observation::new(self.atoms.iter().map(|a| a.rename_constants(map)))
    }
}

impl RenameConstants for Explanation {
    fn rename_constants(&self, map: &dyn Fn(&Constant) -> Constant) -> Self {
        Explanation {
            add: self.add.iter().map(|a| a.rename_constants(map)).collect(),
            del: self.del.iter().map(|a| a.rename_constants(map)).collect(),
        }
    }
}
