//! 3-CNF formulas: DIMACS input/output, a brute-force oracle and random
//! instances.

use std::fmt;

use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest variable count accepted by exhaustive assignment search.
pub const MAX_BRUTEFORCE_VARS: usize = 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Literal {
    /// 1-based variable index.
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn from_dimacs(lit: i64) -> Literal {
        Literal {
            var: lit.unsigned_abs() as usize,
            positive: lit > 0,
        }
    }

    pub fn to_dimacs(self) -> i64 {
        if self.positive {
            self.var as i64
        } else {
            -(self.var as i64)
        }
    }

    pub fn satisfied_by(self, assignment: &Assignment) -> bool {
        assignment.value(self.var) == self.positive
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Clause(pub [Literal; 3]);

impl Clause {
    /// Literals sorted by variable.
    pub fn sorted(&self) -> [Literal; 3] {
        let mut lits = self.0;
        lits.sort_by_key(|l| l.var);
        lits
    }

    pub fn satisfied_by(&self, assignment: &Assignment) -> bool {
        self.0.iter().any(|l| l.satisfied_by(assignment))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self> {
        if num_vars < 3 {
            return Err(Error::InvalidFormula(format!(
                "at least 3 variables are required, got {num_vars}"
            )));
        }
        for (t, c) in clauses.iter().enumerate() {
            check_clause(c, num_vars).map_err(|m| Error::InvalidFormula(format!("clause {}: {m}", t + 1)))?;
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn satisfied_by(&self, assignment: &Assignment) -> bool {
        self.clauses.iter().all(|c| c.satisfied_by(assignment))
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c.0 {
                s.push_str(&l.to_dimacs().to_string());
                s.push(' ');
            }
            s.push_str("0\n");
        }
        s
    }
}

fn check_clause(c: &Clause, num_vars: usize) -> std::result::Result<(), String> {
    for l in c.0 {
        if l.var == 0 || l.var > num_vars {
            return Err(format!("variable {} out of range 1..={num_vars}", l.var));
        }
    }
    let [a, b, d] = c.sorted();
    if a.var == b.var || b.var == d.var {
        return Err("a variable appears more than once".into());
    }
    Ok(())
}

/// Parses DIMACS CNF where every clause has exactly three literals over
/// distinct variables. Clauses may span lines; `c` lines are comments.
pub fn parse_dimacs(input: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    let mut clause_line = 0;
    let mut last_line = 0;
    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(dimacs(line_no, "duplicate problem line"));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(dimacs(line_no, "expected `p cnf <vars> <clauses>`"));
            }
            let v = parts[2]
                .parse()
                .map_err(|_| dimacs(line_no, "variable count is not a number"))?;
            let c = parts[3]
                .parse()
                .map_err(|_| dimacs(line_no, "clause count is not a number"))?;
            header = Some((v, c));
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(dimacs(line_no, "clause before the problem line"));
        };
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| dimacs(line_no, &format!("`{tok}` is not an integer literal")))?;
            if current.is_empty() {
                clause_line = line_no;
            }
            if lit == 0 {
                if current.len() != 3 {
                    return Err(dimacs(
                        clause_line,
                        &format!("clause has {} literals, expected 3", current.len()),
                    ));
                }
                let clause = Clause([
                    Literal::from_dimacs(current[0]),
                    Literal::from_dimacs(current[1]),
                    Literal::from_dimacs(current[2]),
                ]);
                check_clause(&clause, num_vars).map_err(|m| dimacs(clause_line, &m))?;
                clauses.push(clause);
                current.clear();
            } else {
                current.push(lit);
            }
        }
    }
    let Some((num_vars, num_clauses)) = header else {
        return Err(dimacs(last_line.max(1), "missing problem line"));
    };
    if !current.is_empty() {
        return Err(dimacs(clause_line, "clause is not terminated by 0"));
    }
    if clauses.len() != num_clauses {
        return Err(dimacs(
            last_line.max(1),
            &format!("header declares {num_clauses} clauses, found {}", clauses.len()),
        ));
    }
    if num_vars < 3 {
        return Err(dimacs(1, "at least 3 variables are required"));
    }
    CnfFormula::new(num_vars, clauses)
}

fn dimacs(line: usize, message: &str) -> Error {
    Error::Dimacs {
        line,
        message: message.to_string(),
    }
}

/// Truth values indexed by 1-based variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment(values)
    }

    pub fn num_vars(&self) -> usize {
        self.0.len()
    }

    pub fn value(&self, var: usize) -> bool {
        self.0[var - 1]
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }

    /// The `index`-th assignment in binary order: F < T, variable 1 most
    /// significant.
    pub fn nth(num_vars: usize, index: u64) -> Self {
        Assignment(
            (1..=num_vars)
                .map(|u| index >> (num_vars - u) & 1 == 1)
                .collect(),
        )
    }

    /// All `2^num_vars` assignments in binary order.
    pub fn all(num_vars: usize) -> impl Iterator<Item = Assignment> {
        (0..1u64 << num_vars).map(move |i| Assignment::nth(num_vars, i))
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "T" } else { "F" })?;
        }
        Ok(())
    }
}

pub(crate) fn guard_vars(num_vars: usize) -> Result<()> {
    if num_vars > MAX_BRUTEFORCE_VARS {
        return Err(Error::TooLarge {
            what: "variable count for exhaustive search",
            max: MAX_BRUTEFORCE_VARS,
            got: num_vars,
        });
    }
    Ok(())
}

/// Smallest satisfying assignment in binary order, if any.
pub fn sat_bruteforce(formula: &CnfFormula) -> Result<Option<Assignment>> {
    guard_vars(formula.num_vars())?;
    Ok(Assignment::all(formula.num_vars()).find(|a| formula.satisfied_by(a)))
}

/// A formula with `num_clauses` clauses, each over three distinct variables
/// chosen uniformly with independent random polarities.
pub fn random_formula<R: Rng + ?Sized>(num_vars: usize, num_clauses: usize, rng: &mut R) -> Result<CnfFormula> {
    if num_vars < 3 {
        return Err(Error::InvalidFormula(format!(
            "at least 3 variables are required, got {num_vars}"
        )));
    }
    let clauses = (0..num_clauses)
        .map(|_| {
            let vars = sample(rng, num_vars, 3);
            let mut lits = [Literal { var: 0, positive: true }; 3];
            for (slot, var) in lits.iter_mut().zip(vars.iter()) {
                *slot = Literal {
                    var: var + 1,
                    positive: rng.gen_bool(0.5),
                };
            }
            Clause(lits)
        })
        .collect();
    CnfFormula::new(num_vars, clauses)
}

/// The 8 clauses over variables `a, b, c` with every polarity pattern; the
/// resulting formula is unsatisfiable.
pub fn all_polarity_clauses(a: usize, b: usize, c: usize) -> Vec<Clause> {
    (0..8)
        .map(|mask: u8| {
            Clause([
                Literal { var: a, positive: mask & 4 == 0 },
                Literal { var: b, positive: mask & 2 == 0 },
                Literal { var: c, positive: mask & 1 == 0 },
            ])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn parse_examples() {
        let f = parse_dimacs("p cnf 3 1\n1 -2 3 0\n").unwrap();
        assert_eq!(f.num_vars(), 3);
        assert_eq!(
            f.clauses()[0].0,
            [
                Literal { var: 1, positive: true },
                Literal { var: 2, positive: false },
                Literal { var: 3, positive: true }
            ]
        );
        match parse_dimacs("p cnf 3 1\n1 1 2 0\n") {
            Err(Error::Dimacs { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_dimacs("c hi\np cnf 3 1\n1 2 0\n") {
            Err(Error::Dimacs { line: 3, message }) => assert!(message.contains("2 literals")),
            other => panic!("{other:?}"),
        }
        assert!(parse_dimacs("p cnf x 1\n").is_err());
        assert!(parse_dimacs("1 2 3 0\n").is_err());
        assert!(parse_dimacs("p cnf 3 2\n1 2 3 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 0\n").is_err());
        assert!(parse_dimacs("p cnf 3 1\n1 2 4 0\n").is_err());
    }

    #[test]
    fn clauses_may_span_lines() {
        let f = parse_dimacs("p cnf 4 2\n1 -2\n 3 0 2 3 -4 0\n").unwrap();
        assert_eq!(f.clauses().len(), 2);
    }

    #[test]
    fn dimacs_round_trip() {
        let f = parse_dimacs("p cnf 4 2\n1 -2 3 0\n-4 2 1 0\n").unwrap();
        assert_eq!(parse_dimacs(&f.to_dimacs()).unwrap(), f);
    }

    #[test]
    fn bruteforce_examples() {
        let f = parse_dimacs("p cnf 3 1\n1 -2 3 0\n").unwrap();
        assert_eq!(
            sat_bruteforce(&f).unwrap(),
            Some(Assignment::new(vec![false, false, false]))
        );
        let unsat = CnfFormula::new(3, all_polarity_clauses(1, 2, 3)).unwrap();
        assert_eq!(sat_bruteforce(&unsat).unwrap(), None);
        let empty = CnfFormula::new(4, vec![]).unwrap();
        assert_eq!(
            sat_bruteforce(&empty).unwrap(),
            Some(Assignment::new(vec![false; 4]))
        );
        assert!(sat_bruteforce(&CnfFormula::new(26, vec![]).unwrap()).is_err());
    }

    #[test]
    fn assignment_order() {
        let all: Vec<String> = Assignment::all(3).map(|a| a.to_string()).collect();
        assert_eq!(all, ["FFF", "FFT", "FTF", "FTT", "TFF", "TFT", "TTF", "TTT"]);
    }

    #[test]
    fn random_formulas_are_valid() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let f = random_formula(4, 3, &mut rng).unwrap();
            assert_eq!(f.clauses().len(), 3);
        }
    }
}
