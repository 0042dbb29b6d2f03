//! Shared fixtures and deterministic random-instance generators for
//! the integration and acceptance suites.
#![allow(dead_code)] // each test target uses its own subset

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::Rng;

use abdux::cnf::{QbfDnf, QbfLit, QbfVar};
use abdux::core::{
    AbductiveTheory, Atom, Constant, Explanation, GroundAtom, IntegrityConstraint, Observation,
    Predicate, Rule, Term,
};

pub const EX1: &str =
    "saturday. skiing :- saturday, not snows. on_campus :- not skiing. #abducible snows/0.";

pub const EX6: &str =
    "t :- p(X), not q(X). p(1). p(2). q(1). q(2). q(3). #abducible p/1. #abducible q/1.";

pub const EX7: &str = "p(X) :- q(X,Y), s(X,Y,Z). s(X,Y,Z) :- r(X,Y,Z), t(X,Z).\n\
     q(a,b). q(a,c). r(a,b,c). #abducible q/2. #abducible r/3. #abducible t/2.";

pub const EX2: &str = "account(X) :- staff(X), trained(X), current(X).\n\
     account(X) :- visitor(X), approved(X).\n\
     security_breach(W) :- unauthorized_access(W,X), account(X).\n\
     staff(tom). staff(mary). visitor(dan). trained(tom).\n\
     #abducible staff/1. #abducible visitor/1. #abducible trained/1.\n\
     #abducible current/1. #abducible approved/1. #abducible unauthorized_access/2.";

pub fn ga(pred: &str, args: &[&str]) -> GroundAtom {
    GroundAtom::new(pred, args.iter().map(|a| Constant::new(*a)).collect())
}

/// A random theory with a stratified rule part: predicate levels make
/// positive dependencies non-increasing and negative dependencies
/// strictly decreasing. Abducible predicates sit at level 0 and only
/// ever appear as facts.
pub struct RandomInstance {
    pub theory: AbductiveTheory,
    pub observation: Observation,
    pub delta: Explanation,
}

struct PredInfo {
    pred: Predicate,
    level: usize,
    abducible: bool,
}

fn random_args(rng: &mut StdRng, arity: usize, vars: &[&str], constants: &[Constant]) -> Vec<Term> {
    (0..arity)
        .map(|_| {
            if !vars.is_empty() && rng.gen_bool(0.5) {
                Term::variable(vars[rng.gen_range(0..vars.len())])
            } else {
                Term::Const(constants[rng.gen_range(0..constants.len())].clone())
            }
        })
        .collect()
}

fn random_ground_args(rng: &mut StdRng, arity: usize, constants: &[Constant]) -> Vec<Constant> {
    (0..arity)
        .map(|_| constants[rng.gen_range(0..constants.len())].clone())
        .collect()
}

/// Builds a random stratified abductive theory with ≤ 8 predicates and
/// ≤ 6 constants, plus an observation and a candidate pair sampled
/// from its abducible atoms.
pub fn random_stratified_instance(rng: &mut StdRng, with_constraints: bool) -> RandomInstance {
    let n_const = rng.gen_range(2..=6);
    let constants: Vec<Constant> = (0..n_const)
        .map(|i| Constant::new(format!("c{}", i)))
        .collect();
    let n_pred = rng.gen_range(4..=8);
    let n_abducible = rng.gen_range(1..=(n_pred / 2).max(1));

    let mut preds = Vec::new();
    for i in 0..n_pred {
        let abducible = i < n_abducible;
        let arity = rng.gen_range(0..=2);
        preds.push(PredInfo {
            pred: Predicate::new(format!("p{}", i), arity),
            level: if abducible { 0 } else { rng.gen_range(1..=3) },
            abducible,
        });
    }

    let mut rules: Vec<Rule> = Vec::new();
    // abducible facts (B)
    for info in preds.iter().filter(|p| p.abducible) {
        for _ in 0..rng.gen_range(0..=2) {
            rules.push(Rule::fact(GroundAtom::new(
                info.pred.name.clone(),
                random_ground_args(rng, info.pred.arity, &constants),
            )));
        }
    }
    // stratified rules for the non-abducible predicates
    let var_names = ["X", "Y"];
    for hi in 0..preds.len() {
        if preds[hi].abducible {
            continue;
        }
        let level = preds[hi].level;
        for _ in 0..rng.gen_range(1..=2) {
            let n_pos = rng.gen_range(1..=2);
            let pos_choices: Vec<usize> = (0..preds.len())
                .filter(|&i| preds[i].level <= level && i != hi)
                .collect();
            let neg_choices: Vec<usize> = (0..preds.len())
                .filter(|&i| preds[i].level < level)
                .collect();
            if pos_choices.is_empty() {
                // fall back to a ground fact for this head
                rules.push(Rule::fact(GroundAtom::new(
                    preds[hi].pred.name.clone(),
                    random_ground_args(rng, preds[hi].pred.arity, &constants),
                )));
                continue;
            }
            let mut body_pos = Vec::new();
            for _ in 0..n_pos {
                let b = pos_choices[rng.gen_range(0..pos_choices.len())];
                body_pos.push(Atom::new(
                    preds[b].pred.name.clone(),
                    random_args(rng, preds[b].pred.arity, &var_names, &constants),
                ));
            }
            let bound: Vec<String> = {
                let mut s = BTreeSet::new();
                for a in &body_pos {
                    for v in a.variables() {
                        s.insert(v.name().to_string());
                    }
                }
                s.into_iter().collect()
            };
            let bound_refs: Vec<&str> = bound.iter().map(|s| s.as_str()).collect();
            let mut body_neg = Vec::new();
            if !neg_choices.is_empty() && rng.gen_bool(0.5) {
                let b = neg_choices[rng.gen_range(0..neg_choices.len())];
                body_neg.push(Atom::new(
                    preds[b].pred.name.clone(),
                    random_args(rng, preds[b].pred.arity, &bound_refs, &constants),
                ));
            }
            let head = Atom::new(
                preds[hi].pred.name.clone(),
                random_args(rng, preds[hi].pred.arity, &bound_refs, &constants),
            );
            rules.push(Rule::new(head, body_pos, body_neg));
        }
    }

    let mut constraints = Vec::new();
    if with_constraints {
        for _ in 0..rng.gen_range(0..=2) {
            let n_pos = rng.gen_range(1..=2);
            let mut body_pos = Vec::new();
            for _ in 0..n_pos {
                let b = rng.gen_range(0..preds.len());
                body_pos.push(Atom::new(
                    preds[b].pred.name.clone(),
                    random_args(rng, preds[b].pred.arity, &var_names, &constants),
                ));
            }
            let bound: Vec<String> = {
                let mut s = BTreeSet::new();
                for a in &body_pos {
                    for v in a.variables() {
                        s.insert(v.name().to_string());
                    }
                }
                s.into_iter().collect()
            };
            let bound_refs: Vec<&str> = bound.iter().map(|s| s.as_str()).collect();
            let mut body_neg = Vec::new();
            if rng.gen_bool(0.4) {
                let b = rng.gen_range(0..preds.len());
                body_neg.push(Atom::new(
                    preds[b].pred.name.clone(),
                    random_args(rng, preds[b].pred.arity, &bound_refs, &constants),
                ));
            }
            let mut heads = Vec::new();
            for _ in 0..rng.gen_range(0..=2) {
                let h = rng.gen_range(0..preds.len());
                heads.push(Atom::new(
                    preds[h].pred.name.clone(),
                    random_args(rng, preds[h].pred.arity, &bound_refs, &constants),
                ));
            }
            constraints.push(IntegrityConstraint::new(heads, body_pos, body_neg));
        }
    }

    let abducibles: BTreeSet<Predicate> = preds
        .iter()
        .filter(|p| p.abducible)
        .map(|p| p.pred.clone())
        .collect();
    let theory = AbductiveTheory::new(rules, abducibles.clone(), constraints)
        .expect("generated theory is well-formed");

    // sample an observation over non-abducible predicates
    let mut obs_atoms = BTreeSet::new();
    for _ in 0..rng.gen_range(0..=2) {
        let candidates: Vec<&PredInfo> = preds.iter().filter(|p| !p.abducible).collect();
        let p = candidates[rng.gen_range(0..candidates.len())];
        obs_atoms.insert(GroundAtom::new(
            p.pred.name.clone(),
            random_ground_args(rng, p.pred.arity, &constants),
        ));
    }
    let observation = Observation { atoms: obs_atoms };

    // sample a candidate pair from the abducible atoms
    let b = theory.abducible_facts();
    let abducible_list: Vec<&PredInfo> = preds.iter().filter(|p| p.abducible).collect();
    let mut add = BTreeSet::new();
    for _ in 0..rng.gen_range(0..=2) {
        let p = abducible_list[rng.gen_range(0..abducible_list.len())];
        add.insert(GroundAtom::new(
            p.pred.name.clone(),
            random_ground_args(rng, p.pred.arity, &constants),
        ));
    }
    let mut del = BTreeSet::new();
    let b_vec: Vec<&GroundAtom> = b.iter().collect();
    if !b_vec.is_empty() && rng.gen_bool(0.6) {
        let a = b_vec[rng.gen_range(0..b_vec.len())];
        if !add.contains(a) {
            del.insert(a.clone());
        }
    }
    let delta = Explanation { add, del };

    RandomInstance {
        theory,
        observation,
        delta,
    }
}

/// A random ground normal program (cycles through negation allowed),
/// with abducibles drawn from atoms that head no rule. Stays within
/// the brute-force atom cap.
pub fn random_ground_normal_instance(rng: &mut StdRng) -> RandomInstance {
    let n_atoms = rng.gen_range(4..=8);
    let names: Vec<String> = (0..n_atoms).map(|i| format!("a{}", i)).collect();
    let n_rules = rng.gen_range(2..=6);
    let mut rules = Vec::new();
    let mut heads = BTreeSet::new();
    for _ in 0..n_rules {
        let h = rng.gen_range(0..n_atoms);
        heads.insert(h);
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for _ in 0..rng.gen_range(0..=2) {
            let b = rng.gen_range(0..n_atoms);
            let atom = Atom::new(names[b].clone(), vec![]);
            if rng.gen_bool(0.5) {
                pos.push(atom);
            } else {
                neg.push(atom);
            }
        }
        rules.push(Rule::new(Atom::new(names[h].clone(), vec![]), pos, neg));
    }
    // abducibles: atoms never used as a rule head
    let abducible_ids: Vec<usize> = (0..n_atoms).filter(|i| !heads.contains(i)).collect();
    let abducibles: BTreeSet<Predicate> = abducible_ids
        .iter()
        .map(|&i| Predicate::new(names[i].clone(), 0))
        .collect();
    for &i in &abducible_ids {
        if rng.gen_bool(0.5) {
            rules.push(Rule::fact(GroundAtom::prop(names[i].clone())));
        }
    }
    let mut constraints = Vec::new();
    for _ in 0..rng.gen_range(0..=1) {
        let b = rng.gen_range(0..n_atoms);
        let mut heads = Vec::new();
        for _ in 0..rng.gen_range(0..=2) {
            heads.push(Atom::new(names[rng.gen_range(0..n_atoms)].clone(), vec![]));
        }
        let body_neg = if rng.gen_bool(0.4) {
            vec![Atom::new(names[rng.gen_range(0..n_atoms)].clone(), vec![])]
        } else {
            vec![]
        };
        constraints.push(IntegrityConstraint::new(
            heads,
            vec![Atom::new(names[b].clone(), vec![])],
            body_neg,
        ));
    }
    let theory = AbductiveTheory::new(rules, abducibles.clone(), constraints)
        .expect("generated ground theory is well-formed");

    let b = theory.abducible_facts();
    let mut obs_atoms = BTreeSet::new();
    for _ in 0..rng.gen_range(0..=2) {
        let i = rng.gen_range(0..n_atoms);
        if !abducibles.contains(&Predicate::new(names[i].clone(), 0)) {
            obs_atoms.insert(GroundAtom::prop(names[i].clone()));
        }
    }
    let mut add = BTreeSet::new();
    for &i in &abducible_ids {
        if rng.gen_bool(0.3) {
            add.insert(GroundAtom::prop(names[i].clone()));
        }
    }
    let mut del = BTreeSet::new();
    for a in &b {
        if rng.gen_bool(0.3) && !add.contains(a) {
            del.insert(a.clone());
        }
    }
    RandomInstance {
        theory,
        observation: Observation { atoms: obs_atoms },
        delta: Explanation { add, del },
    }
}

/// A random non-recursive Horn constraint-free instance for the
/// tractable-path comparison.
pub fn random_nr_horn_instance(rng: &mut StdRng) -> (AbductiveTheory, Observation) {
    let n_const = rng.gen_range(2..=5);
    let constants: Vec<Constant> = (0..n_const)
        .map(|i| Constant::new(format!("c{}", i)))
        .collect();
    let n_abducible = rng.gen_range(1..=2);
    let n_derived = rng.gen_range(1..=3);

    let mut preds = Vec::new();
    for i in 0..n_abducible {
        preds.push(PredInfo {
            pred: Predicate::new(format!("p{}", i), rng.gen_range(0..=2)),
            level: 0,
            abducible: true,
        });
    }
    for i in 0..n_derived {
        preds.push(PredInfo {
            pred: Predicate::new(format!("d{}", i), rng.gen_range(0..=1)),
            level: i + 1,
            abducible: false,
        });
    }

    let mut rules = Vec::new();
    for info in preds.iter().filter(|p| p.abducible) {
        for _ in 0..rng.gen_range(0..=2) {
            rules.push(Rule::fact(GroundAtom::new(
                info.pred.name.clone(),
                random_ground_args(rng, info.pred.arity, &constants),
            )));
        }
    }
    let var_names = ["X"];
    for hi in 0..preds.len() {
        if preds[hi].abducible {
            continue;
        }
        let level = preds[hi].level;
        // strictly lower levels only: non-recursive by construction
        let pos_choices: Vec<usize> = (0..preds.len())
            .filter(|&i| preds[i].level < level)
            .collect();
        for _ in 0..rng.gen_range(1..=2) {
            let mut body_pos = Vec::new();
            for _ in 0..rng.gen_range(1..=2) {
                let b = pos_choices[rng.gen_range(0..pos_choices.len())];
                body_pos.push(Atom::new(
                    preds[b].pred.name.clone(),
                    random_args(rng, preds[b].pred.arity, &var_names, &constants),
                ));
            }
            let bound: Vec<String> = {
                let mut s = BTreeSet::new();
                for a in &body_pos {
                    for v in a.variables() {
                        s.insert(v.name().to_string());
                    }
                }
                s.into_iter().collect()
            };
            let bound_refs: Vec<&str> = bound.iter().map(|s| s.as_str()).collect();
            let head = Atom::new(
                preds[hi].pred.name.clone(),
                random_args(rng, preds[hi].pred.arity, &bound_refs, &constants),
            );
            rules.push(Rule::new(head, body_pos, vec![]));
        }
    }

    let abducibles: BTreeSet<Predicate> = preds
        .iter()
        .filter(|p| p.abducible)
        .map(|p| p.pred.clone())
        .collect();
    let theory =
        AbductiveTheory::new(rules, abducibles, vec![]).expect("generated theory is well-formed");

    let derived: Vec<&PredInfo> = preds.iter().filter(|p| !p.abducible).collect();
    let p = derived[rng.gen_range(0..derived.len())];
    let observation = Observation::new([GroundAtom::new(
        p.pred.name.clone(),
        random_ground_args(rng, p.pred.arity, &constants),
    )]);
    (theory, observation)
}

/// A random two-level QBF ∃X∀Y G with G in DNF, admissible for the
/// quantified generators: nonempty terms and the all-false ∀
/// assignment satisfies the matrix under every ∃ assignment.
pub fn random_admissible_qbf(
    rng: &mut StdRng,
    num_x: usize,
    num_y: usize,
    num_terms: usize,
) -> Option<QbfDnf> {
    let total = num_x + num_y;
    assert!(total >= 1);
    let mut terms = Vec::new();
    for _ in 0..num_terms {
        let len = rng.gen_range(1..=total.min(3));
        let mut term = Vec::new();
        let mut used = BTreeSet::new();
        for _ in 0..len {
            let v = rng.gen_range(0..total);
            if !used.insert(v) {
                continue;
            }
            let var = if v < num_x {
                QbfVar::X(v + 1)
            } else {
                QbfVar::Y(v - num_x + 1)
            };
            term.push(QbfLit::new(var, rng.gen_bool(0.5)));
        }
        if term.is_empty() {
            return None;
        }
        terms.push(term);
    }
    let q = QbfDnf {
        num_x,
        num_y,
        terms,
    };
    // admissibility: all-false ∀ assignment models the matrix under
    // every ∃ assignment
    let y = vec![false; num_y];
    let mut x = vec![false; num_x];
    for mask in 0u64..(1 << num_x) {
        for (i, b) in x.iter_mut().enumerate() {
            *b = mask & (1 << i) != 0;
        }
        if !q.matrix_eval(&x, &y) {
            return None;
        }
    }
    Some(q)
}

/// Random ground stratified program: propositional atoms with levels,
/// positive bodies from the same level or below, negated bodies
/// strictly below.
pub fn random_ground_stratified_program(rng: &mut StdRng) -> Vec<Rule> {
    let n_atoms = rng.gen_range(4..=10);
    let levels: Vec<usize> = (0..n_atoms).map(|_| rng.gen_range(0..=2)).collect();
    let names: Vec<String> = (0..n_atoms).map(|i| format!("g{}", i)).collect();
    let mut rules = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let h = rng.gen_range(0..n_atoms);
        rules.push(Rule::fact(GroundAtom::prop(names[h].clone())));
    }
    for _ in 0..rng.gen_range(2..=8) {
        let h = rng.gen_range(0..n_atoms);
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for _ in 0..rng.gen_range(0..=2) {
            let b = rng.gen_range(0..n_atoms);
            if levels[b] <= levels[h] {
                pos.push(Atom::new(names[b].clone(), vec![]));
            }
        }
        for _ in 0..rng.gen_range(0..=1) {
            let b = rng.gen_range(0..n_atoms);
            if levels[b] < levels[h] {
                neg.push(Atom::new(names[b].clone(), vec![]));
            }
        }
        rules.push(Rule::new(Atom::new(names[h].clone(), vec![]), pos, neg));
    }
    rules
}

/// All CNFs over exactly `num_vars` variables with 1..=max_clauses
/// distinct nonempty clauses, as (num_vars, clauses) pairs ready for
/// `Cnf::new`.
pub fn exhaustive_cnfs(num_vars: usize, max_clauses: usize) -> Vec<abdux::cnf::Cnf> {
    use abdux::cnf::{Cnf, Lit};
    // a variable is positive, negative, or absent per clause, so clauses
    // are nonempty and non-tautological
    let mut clause_pool: Vec<Vec<Lit>> = Vec::new();
    let mut states = vec![0usize; num_vars];
    loop {
        let clause: Vec<Lit> = states
            .iter()
            .enumerate()
            .filter_map(|(i, &s)| match s {
                1 => Some(Lit::pos(i + 1)),
                2 => Some(Lit::neg(i + 1)),
                _ => None,
            })
            .collect();
        if !clause.is_empty() {
            clause_pool.push(clause);
        }
        let mut k = 0;
        loop {
            if k == states.len() {
                break;
            }
            states[k] += 1;
            if states[k] < 3 {
                break;
            }
            states[k] = 0;
            k += 1;
        }
        if k == states.len() {
            break;
        }
    }
    let mut out = Vec::new();
    let n = clause_pool.len();
    for count in 1..=max_clauses.min(n) {
        let mut idx: Vec<usize> = (0..count).collect();
        loop {
            out.push(Cnf::new(
                num_vars,
                idx.iter().map(|&i| clause_pool[i].clone()).collect(),
            ));
            // next combination
            let mut i = count;
            loop {
                if i == 0 {
                    idx.clear();
                    break;
                }
                i -= 1;
                if idx[i] < n - (count - i) {
                    idx[i] += 1;
                    for j in i + 1..count {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
            if idx.is_empty() {
                break;
            }
        }
    }
    out
}
