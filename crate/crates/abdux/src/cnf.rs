//! Propositional formula values fed to the reduction generators: plain
//! CNFs over variables y1..yn, and two-level quantified formulas
//! ∃x1..xk ∀y1..yn with either a CNF or a DNF matrix.

use std::fmt;

/// A literal over a 1-based variable index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit {
    pub var: usize,
    pub negated: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Self {
        Lit {
            var,
            negated: false,
        }
    }

    pub fn neg(var: usize) -> Self {
        Lit { var, negated: true }
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        assignment[self.var - 1] != self.negated
    }
}

/// A CNF formula over variables y1..y`num_vars`. Clauses may mention a
/// variable at most implicitly; unused variables are fine.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<Lit>>,
}

impl Cnf {
    pub fn new(num_vars: usize, clauses: Vec<Vec<Lit>>) -> Self {
        Cnf { num_vars, clauses }
    }

    /// True iff every clause has a true literal under `assignment`.
    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|cl| cl.iter().any(|l| l.eval(assignment)))
    }

    pub fn has_empty_clause(&self) -> bool {
        self.clauses.iter().any(|cl| cl.is_empty())
    }
}

impl fmt::Display for Cnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p cnf {} {}", self.num_vars, self.clauses.len())?;
        for cl in &self.clauses {
            for l in cl {
                write!(
                    f,
                    "{} ",
                    if l.negated {
                        -(l.var as i64)
                    } else {
                        l.var as i64
                    }
                )?;
            }
            writeln!(f, "0")?;
        }
        Ok(())
    }
}

/// A variable of a two-level QBF: either from the ∃ block (x1..xk) or
/// the ∀ block (y1..yn), 1-based within its block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QbfVar {
    X(usize),
    Y(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QbfLit {
    pub var: QbfVar,
    pub negated: bool,
}

impl QbfLit {
    pub fn new(var: QbfVar, negated: bool) -> Self {
        QbfLit { var, negated }
    }

    pub fn eval(&self, x: &[bool], y: &[bool]) -> bool {
        let v = match self.var {
            QbfVar::X(i) => x[i - 1],
            QbfVar::Y(i) => y[i - 1],
        };
        v != self.negated
    }
}

/// ∃x1..xk ∀y1..yn F with F a CNF matrix. This is the standard QDIMACS
/// reading of a file with an ∃ block followed by a ∀ block.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QbfCnf {
    pub num_x: usize,
    pub num_y: usize,
    pub clauses: Vec<Vec<QbfLit>>,
}

impl QbfCnf {
    /// The De Morgan dual of the matrix: ∃X ∀Y ¬F with ¬F in DNF, one
    /// term per clause of F with every literal flipped. The reduction
    /// generators consume formulas in this shape.
    pub fn negated_matrix_dnf(&self) -> QbfDnf {
        QbfDnf {
            num_x: self.num_x,
            num_y: self.num_y,
            terms: self
                .clauses
                .iter()
                .map(|cl| cl.iter().map(|l| QbfLit::new(l.var, !l.negated)).collect())
                .collect(),
        }
    }

    pub fn matrix_eval(&self, x: &[bool], y: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|cl| cl.iter().any(|l| l.eval(x, y)))
    }
}

/// ∃x1..xk ∀y1..yn G with G a DNF matrix (a disjunction of conjunctive
/// terms). The input shape of the quantified reduction generators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QbfDnf {
    pub num_x: usize,
    pub num_y: usize,
    pub terms: Vec<Vec<QbfLit>>,
}

impl QbfDnf {
    /// True iff some term has all literals true under (x, y).
    pub fn matrix_eval(&self, x: &[bool], y: &[bool]) -> bool {
        self.terms.iter().any(|t| t.iter().all(|l| l.eval(x, y)))
    }

    /// The CNF F with G = ¬F, recovered clause-by-clause by De Morgan.
    pub fn negated_matrix_cnf(&self) -> QbfCnf {
        QbfCnf {
            num_x: self.num_x,
            num_y: self.num_y,
            clauses: self
                .terms
                .iter()
                .map(|t| t.iter().map(|l| QbfLit::new(l.var, !l.negated)).collect())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cnf_eval() {
        // (y1 ∨ y2) ∧ (¬y1)
        let f = Cnf::new(2, vec![vec![Lit::pos(1), Lit::pos(2)], vec![Lit::neg(1)]]);
        assert!(f.eval(&[false, true]));
        assert!(!f.eval(&[true, true]));
        assert!(!f.eval(&[false, false]));
    }

    #[test]
    fn dnf_dual_roundtrip() {
        let q = QbfCnf {
            num_x: 1,
            num_y: 1,
            clauses: vec![vec![
                QbfLit::new(QbfVar::X(1), false),
                QbfLit::new(QbfVar::Y(1), true),
            ]],
        };
        let dual = q.negated_matrix_dnf();
        assert_eq!(dual.negated_matrix_cnf(), q);
        // ¬(x ∨ ¬y) = ¬x ∧ y
        assert!(dual.matrix_eval(&[false], &[true]));
        assert!(!dual.matrix_eval(&[true], &[true]));
    }
}
