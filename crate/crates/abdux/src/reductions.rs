//! Reduction instance generators: each one turns a CNF or two-level
//! QBF into an abduction problem whose constrained-explanation behavior
//! mirrors the formula, making the hardness constructions executable.
//! Brute-force SAT and QBF oracles live here too, so every generated
//! instance can be checked against an independent answer.
//!
//! The five generators and their contracts:
//!
//! - [`gen_thm4_sat`]: stratified non-recursive program with negation,
//!   no constraints; the bundled candidate U is always an explanation
//!   and is arbitrary iff the CNF is satisfiable.
//! - [`gen_thm4_qbf`]: same program class; a constrained explanation
//!   exists iff ∃X∀Y G is true.
//! - [`gen_thm5_sat`]: recursive Horn program; bundled (E, ∅) is
//!   arbitrary iff the CNF is satisfiable.
//! - [`gen_thm5_qbf`]: recursive Horn program; a constrained
//!   explanation exists iff ∃X∀Y G is true.
//! - [`gen_thm6_sat`]: non-recursive Horn program with two integrity
//!   constraints; bundled (E, ∅) is arbitrary iff the CNF is
//!   satisfiable.
//!
//! Marker constants `_t`, `_f`, `_0` and clause names `_c1`.. live in
//! the reserved namespace so they cannot collide with input variables.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::cnf::{Cnf, QbfDnf, QbfVar};
use crate::core::{
    AbductiveTheory, Constant, CoreError, Explanation, GroundAtom, Observation, Predicate, Rule,
};
use crate::parser::{parse_theory_named, ParseError};

/// Variable cap for the brute-force oracles.
pub const DEFAULT_VAR_CAP: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("{vars} variables exceed the brute-force cap of {cap}")]
    VarCapExceeded { vars: usize, cap: usize },
    #[error("reduction precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("internal rule template failed to parse: {0}")]
    Template(#[from] ParseError),
}

/// Satisfiability by exhaustive assignment enumeration.
pub fn sat_bruteforce(f: &Cnf) -> Result<bool, ReductionError> {
    if f.num_vars > DEFAULT_VAR_CAP {
        return Err(ReductionError::VarCapExceeded {
            vars: f.num_vars,
            cap: DEFAULT_VAR_CAP,
        });
    }
    let n = f.num_vars;
    let mut assignment = vec![false; n];
    for mask in 0u64..(1u64 << n) {
        for (i, a) in assignment.iter_mut().enumerate() {
            *a = mask & (1 << i) != 0;
        }
        if f.eval(&assignment) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Truth of ∃X ∀Y G with G in DNF, by exhaustive enumeration.
pub fn qbf_bruteforce(q: &QbfDnf) -> Result<bool, ReductionError> {
    let total = q.num_x + q.num_y;
    if total > DEFAULT_VAR_CAP {
        return Err(ReductionError::VarCapExceeded {
            vars: total,
            cap: DEFAULT_VAR_CAP,
        });
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

/// A generated SAT-style instance: the theory, the observation, and
/// the candidate explanation whose constrainedness mirrors the input
/// formula's satisfiability.
#[derive(Clone, Debug)]
pub struct SatReduction {
    pub theory: AbductiveTheory,
    pub observation: Observation,
    pub candidate: Explanation,
}

/// A generated QBF-style instance: a constrained explanation exists
/// iff the source formula is true. `max_add` bounds the add-part size
/// a complete constrained-explanation search needs to consider for
/// this construction.
#[derive(Clone, Debug)]
pub struct QbfReduction {
    pub theory: AbductiveTheory,
    pub observation: Observation,
    pub max_add: usize,
}

fn kc(name: &str) -> Constant {
    Constant::new(name)
}

fn yc(i: usize) -> Constant {
    Constant::new(format!("y{}", i))
}

fn xc(i: usize) -> Constant {
    Constant::new(format!("x{}", i))
}

fn cc(i: usize) -> Constant {
    Constant::new(format!("_c{}", i))
}

fn fact1(pred: &str, a: Constant) -> Rule {
    Rule::fact(GroundAtom::new(pred, vec![a]))
}

fn fact2(pred: &str, a: Constant, b: Constant) -> Rule {
    Rule::fact(GroundAtom::new(pred, vec![a, b]))
}

fn parse_rules(name: &str, src: &str) -> Result<Vec<Rule>, ReductionError> {
    Ok(parse_theory_named(name, src)?.rules().to_vec())
}

fn goal_observation() -> Observation {
    Observation::new([GroundAtom::prop("goal")])
}

fn reject_empty_clauses(clauses_empty: bool, what: &str) -> Result<(), ReductionError> {
    if clauses_empty {
        return Err(ReductionError::Precondition(format!(
            "{} must not contain an empty clause: the encoding keys clause atoms off their literals",
            what
        )));
    }
    Ok(())
}

/// Literal-occurrence facts `pos(v, c_j)` / `ngtd(v, c_j)` shared by
/// every construction. `var_name` maps a literal to its constant.
fn literal_facts(clauses: &[Vec<(Constant, bool)>]) -> Vec<Rule> {
    let mut out = Vec::new();
    for (j, clause) in clauses.iter().enumerate() {
        for (v, negated) in clause {
            let pred = if *negated { "ngtd" } else { "pos" };
            out.push(fact2(pred, v.clone(), cc(j + 1)));
        }
    }
    out
}

fn cnf_clause_constants(f: &Cnf) -> Vec<Vec<(Constant, bool)>> {
    f.clauses
        .iter()
        .map(|cl| cl.iter().map(|l| (yc(l.var), l.negated)).collect())
        .collect()
}

fn qbf_clause_constants(clauses: &[Vec<crate::cnf::QbfLit>]) -> Vec<Vec<(Constant, bool)>> {
    clauses
        .iter()
        .map(|cl| {
            cl.iter()
                .map(|l| {
                    let c = match l.var {
                        QbfVar::X(i) => xc(i),
                        QbfVar::Y(i) => yc(i),
                    };
                    (c, l.negated)
                })
                .collect()
        })
        .collect()
}

/// Checks that for every assignment to the ∃ variables, the all-false
/// assignment to the ∀ variables satisfies the DNF matrix.
fn check_allfalse_precondition(q: &QbfDnf) -> Result<(), ReductionError> {
    if q.num_x > DEFAULT_VAR_CAP {
        return Err(ReductionError::VarCapExceeded {
            vars: q.num_x,
            cap: DEFAULT_VAR_CAP,
        });
    }
    let y = vec![false; q.num_y];
    let mut x = vec![false; q.num_x];
    for xm in 0u64..(1u64 << q.num_x) {
        for (i, a) in x.iter_mut().enumerate() {
            *a = xm & (1 << i) != 0;
        }
        if !q.matrix_eval(&x, &y) {
            return Err(ReductionError::Precondition(format!(
                "the all-false ∀-assignment must satisfy the matrix under every ∃-assignment; \
                 it fails for ∃-assignment {:?}",
                x
            )));
        }
    }
    Ok(())
}

const THM4_SAT_RULES: &str = "\
clause(C) :- pos(A,C).
clause(C) :- ngtd(A,C).
true(A) :- in_y(A), gate(W), not choose(A,W).
holds(C) :- pos(A,C), true(A).
holds(C) :- ngtd(A,C), not true(A).
clfalse :- clause(C), not holds(C).
sat :- not clfalse.
sometrue :- in_y(A), true(A).
allfalse :- not sometrue.
bad :- choose(A,W), not in_y(A).
goal :- allfalse, not bad.
goal :- sat, not bad.
";

/// Non-recursive program with negation, no constraints. The candidate
/// U = ({choose(y,_0) : y}, ∅) is always an explanation; it is
/// arbitrary iff the CNF is satisfiable. Requires a CNF the all-false
/// assignment does not satisfy.
pub fn gen_thm4_sat(f: &Cnf) -> Result<SatReduction, ReductionError> {
    reject_empty_clauses(f.has_empty_clause(), "the CNF")?;
    if f.eval(&vec![false; f.num_vars]) {
        return Err(ReductionError::Precondition(
            "the all-false assignment satisfies the CNF".to_string(),
        ));
    }
    let mut rules = Vec::new();
    for i in 1..=f.num_vars {
        rules.push(fact1("in_y", yc(i)));
    }
    rules.push(fact1("gate", kc("_0")));
    rules.extend(literal_facts(&cnf_clause_constants(f)));
    rules.extend(parse_rules("<thm4-sat rules>", THM4_SAT_RULES)?);
    let theory =
        AbductiveTheory::new(rules, BTreeSet::from([Predicate::new("choose", 2)]), vec![])?;
    let candidate = Explanation::new(
        (1..=f.num_vars).map(|i| GroundAtom::new("choose", vec![yc(i), kc("_0")])),
        [],
    )?;
    Ok(SatReduction {
        theory,
        observation: goal_observation(),
        candidate,
    })
}

const THM4_QBF_RULES: &str = "\
clause(C) :- pos(A,C).
clause(C) :- ngtd(A,C).
true_y(A) :- in_y(A), gate(W), not choose(A,W).
true(A) :- true_x(A).
true(A) :- true_y(A).
holds(C) :- pos(A,C), true(A).
holds(C) :- ngtd(A,C), not true(A).
clfalse :- clause(C), not holds(C).
sat :- not clfalse.
sometrue :- in_y(A), true_y(A).
allfalse :- not sometrue.
bad :- choose(A,W), not in_y(A).
bad :- true_x(A), not in_x(A).
good(A) :- in_y(A), choose(A,W).
bad :- in_y(A), not good(A).
goal :- allfalse, not bad.
goal :- sat, not bad.
";

/// Non-recursive program with negation, no constraints, built from
/// ∃X∀Y G (G in DNF): a constrained explanation of `goal` exists iff
/// the formula is true. Internally encodes the CNF F = ¬G.
pub fn gen_thm4_qbf(q: &QbfDnf) -> Result<QbfReduction, ReductionError> {
    check_allfalse_precondition(q)?;
    let f = q.negated_matrix_cnf();
    reject_empty_clauses(f.clauses.iter().any(|c| c.is_empty()), "the matrix dual")?;
    let mut rules = Vec::new();
    for i in 1..=q.num_x {
        rules.push(fact1("in_x", xc(i)));
    }
    for i in 1..=q.num_y {
        rules.push(fact1("in_y", yc(i)));
    }
    rules.push(fact1("gate", kc("_0")));
    rules.extend(literal_facts(&qbf_clause_constants(&f.clauses)));
    rules.extend(parse_rules("<thm4-qbf rules>", THM4_QBF_RULES)?);
    let theory = AbductiveTheory::new(
        rules,
        BTreeSet::from([Predicate::new("true_x", 1), Predicate::new("choose", 2)]),
        vec![],
    )?;
    Ok(QbfReduction {
        theory,
        observation: goal_observation(),
        max_add: q.num_x + q.num_y,
    })
}

/// Rule list for the Horn SAT construction; the chain endpoints depend
/// on the instance (first/last clause names), so the tail is formatted.
fn thm5_sat_rules(m: usize) -> String {
    format!(
        "clause(C) :- pos(A,C).\n\
         clause(C) :- ngtd(A,C).\n\
         true(A) :- in_y(A), p(A,Z), p(_t,Z).\n\
         false(A) :- in_y(A), p(A,Z), p(_f,Z).\n\
         clsat(C) :- pos(A,C), true(A).\n\
         clsat(C) :- ngtd(A,C), false(A).\n\
         ok(_t).\n\
         ok(A) :- ok(B), next(B,A), true(A).\n\
         ok(A) :- ok(B), next(B,A), false(A).\n\
         ok(_f) :- ok(B), next(B,_f).\n\
         sat(_c1) :- clsat(_c1).\n\
         sat(C) :- sat(B), next_c(B,C), clsat(C).\n\
         goal :- ok(_f), sat(_c{m}), p(_f,Z).\n",
        m = m
    )
}

/// Recursive Horn program, no constraints. The candidate
/// E = {p(y,_0) : y} ∪ {p(_f,_0)} explains `goal`; (E, ∅) is arbitrary
/// iff the CNF is satisfiable. Needs at least one variable and one
/// clause so the scanning chains exist.
pub fn gen_thm5_sat(f: &Cnf) -> Result<SatReduction, ReductionError> {
    reject_empty_clauses(f.has_empty_clause(), "the CNF")?;
    let n = f.num_vars;
    let m = f.clauses.len();
    if n == 0 || m == 0 {
        return Err(ReductionError::Precondition(
            "the variable and clause chains need at least one variable and one clause".to_string(),
        ));
    }
    let mut rules = Vec::new();
    for i in 1..=n {
        rules.push(fact1("in_y", yc(i)));
    }
    rules.push(fact1("in_y", kc("_t")));
    rules.push(fact1("in_y", kc("_f")));
    rules.extend(literal_facts(&cnf_clause_constants(f)));
    rules.push(fact2("next", kc("_t"), yc(1)));
    for i in 1..n {
        rules.push(fact2("next", yc(i), yc(i + 1)));
    }
    rules.push(fact2("next", yc(n), kc("_f")));
    for j in 1..m {
        rules.push(fact2("next_c", cc(j), cc(j + 1)));
    }
    rules.push(fact2("p", kc("_t"), kc("_0")));
    rules.extend(parse_rules("<thm5-sat rules>", &thm5_sat_rules(m))?);
    let theory = AbductiveTheory::new(rules, BTreeSet::from([Predicate::new("p", 2)]), vec![])?;
    let candidate = Explanation::new(
        (1..=n)
            .map(|i| GroundAtom::new("p", vec![yc(i), kc("_0")]))
            .chain([GroundAtom::new("p", vec![kc("_f"), kc("_0")])]),
        [],
    )?;
    Ok(SatReduction {
        theory,
        observation: goal_observation(),
        candidate,
    })
}

// Rules 3 and 4 carry an in_x guard: without it, a lone false_x(y)
// with y from the ∀ block derives false(y) with no replaceable
// anchor, and instances of false formulas gain constrained
// explanations. The guard is what the construction's case analysis
// assumes of these two rules.
const THM5_QBF_RULES: &str = "\
clause(C) :- pos(A,C).
clause(C) :- ngtd(A,C).
true(A) :- in_x(A), true_x(A).
false(A) :- in_x(A), false_x(A).
true(B) :- in_x(B), true_x(A), false_x(A).
false(B) :- in_x(B), true_x(A), false_x(A).
true(B) :- in_y(B), true_x(A), false_x(A).
false(B) :- in_y(B), true_x(A), false_x(A).
true(A) :- in_y(A), assign(A,Z), tr(Z).
false(A) :- in_y(A), assign(A,Z), fa(Z).
clsat(C) :- pos(A,C), true(A).
clsat(C) :- ngtd(A,C), false(A).
ok_x(A) :- f_x(A), true(A).
ok_x(A) :- f_x(A), false(A).
ok_x(A) :- ok_x(B), next_x(B,A), true(A).
ok_x(A) :- ok_x(B), next_x(B,A), false(A).
good_x :- ok_x(A), l_x(A).
ok_y(A) :- f_y(A), true(A).
ok_y(A) :- f_y(A), false(A).
ok_y(A) :- ok_y(B), next_y(B,A), true(A).
ok_y(A) :- ok_y(B), next_y(B,A), false(A).
good_y :- ok_y(A), l_y(A).
sat(C) :- clsat(C), f_c(C).
sat(C) :- sat(B), next_c(B,C), clsat(C).
good_c :- sat(C), l_c(C).
goal :- good_x, good_y, good_c, fa(Z).
goal :- good_x, good_y, in_y(A), false(A), true(A), fa(Z).
";

/// Recursive Horn program, no constraints, built from ∃X∀Y G (G in
/// DNF): a constrained explanation of `goal` exists iff the formula is
/// true. With an empty ∃ or ∀ block the corresponding chain collapses
/// to a `good_x.` / `good_y.` fact.
pub fn gen_thm5_qbf(q: &QbfDnf) -> Result<QbfReduction, ReductionError> {
    check_allfalse_precondition(q)?;
    let f = q.negated_matrix_cnf();
    reject_empty_clauses(f.clauses.iter().any(|c| c.is_empty()), "the matrix dual")?;
    let k = q.num_x;
    let n = q.num_y;
    let m = f.clauses.len();
    if m == 0 {
        // G has no terms, so G ≡ false and the all-false precondition
        // already failed; unreachable in practice, kept as a guard.
        return Err(ReductionError::Precondition(
            "the matrix has no terms".to_string(),
        ));
    }
    let mut rules = Vec::new();
    for i in 1..=k {
        rules.push(fact1("in_x", xc(i)));
    }
    for i in 1..=n {
        rules.push(fact1("in_y", yc(i)));
    }
    rules.push(fact1("in_y", kc("_t")));
    rules.push(fact1("in_y", kc("_f")));
    rules.extend(literal_facts(&qbf_clause_constants(&f.clauses)));
    if k > 0 {
        rules.push(fact1("f_x", xc(1)));
        rules.push(fact1("l_x", xc(k)));
        for i in 1..k {
            rules.push(fact2("next_x", xc(i), xc(i + 1)));
        }
    } else {
        rules.push(Rule::fact(GroundAtom::prop("good_x")));
    }
    if n > 0 {
        rules.push(fact1("f_y", yc(1)));
        rules.push(fact1("l_y", yc(n)));
        for i in 1..n {
            rules.push(fact2("next_y", yc(i), yc(i + 1)));
        }
    } else {
        rules.push(Rule::fact(GroundAtom::prop("good_y")));
    }
    rules.push(fact1("f_c", cc(1)));
    rules.push(fact1("l_c", cc(m)));
    for j in 1..m {
        rules.push(fact2("next_c", cc(j), cc(j + 1)));
    }
    rules.push(fact1("tr", kc("_0")));
    rules.extend(parse_rules("<thm5-qbf rules>", THM5_QBF_RULES)?);
    let theory = AbductiveTheory::new(
        rules,
        BTreeSet::from([
            Predicate::new("true_x", 1),
            Predicate::new("false_x", 1),
            Predicate::new("assign", 2),
            Predicate::new("fa", 1),
        ]),
        vec![],
    )?;
    // Constrained explanations pick one truth value per ∃ variable,
    // anchor every ∀ variable with assign(y,_0), and carry fa(_0);
    // with no ∀ variables the goal instead runs through a marker pair
    // assign(_t,_0) (or _f), one atom more.
    let max_add = k + n + 1 + usize::from(n == 0);
    Ok(QbfReduction {
        theory,
        observation: goal_observation(),
        max_add,
    })
}

const THM6_SAT_RULES: &str = "\
clause(C) :- pos(A,C).
clause(C) :- ngtd(A,C).
true(A) :- in_y(A), p(A,Z), p(_t,Z).
false(A) :- in_y(A), p(A,Z), p(_f,Z).
clsat(C) :- pos(A,C), true(A).
clsat(C) :- ngtd(A,C), false(A).
goal :- p(_f,X).
#ic clsat(C) :- clause(C).
#ic false(A) | true(A) :- in_y(A).
";

/// Non-recursive Horn program with two integrity constraints. The
/// candidate E = {p(y,_0) : y} ∪ {p(_f,_0)} explains `goal`; (E, ∅)
/// is arbitrary iff the CNF is satisfiable. An empty CNF is fine
/// (vacuously satisfiable, first constraint vacuous).
pub fn gen_thm6_sat(f: &Cnf) -> Result<SatReduction, ReductionError> {
    reject_empty_clauses(f.has_empty_clause(), "the CNF")?;
    let n = f.num_vars;
    let mut rules = Vec::new();
    for i in 1..=n {
        rules.push(fact1("in_y", yc(i)));
    }
    rules.push(fact1("in_y", kc("_t")));
    rules.push(fact1("in_y", kc("_f")));
    rules.extend(literal_facts(&cnf_clause_constants(f)));
    rules.push(fact2("p", kc("_t"), kc("_0")));
    let template = parse_theory_named("<thm6-sat rules>", THM6_SAT_RULES)?;
    rules.extend(template.rules().to_vec());
    let theory = AbductiveTheory::new(
        rules,
        BTreeSet::from([Predicate::new("p", 2)]),
        template.constraints().to_vec(),
    )?;
    let candidate = Explanation::new(
        (1..=n)
            .map(|i| GroundAtom::new("p", vec![yc(i), kc("_0")]))
            .chain([GroundAtom::new("p", vec![kc("_f"), kc("_0")])]),
        [],
    )?;
    Ok(SatReduction {
        theory,
        observation: goal_observation(),
        candidate,
    })
}
