//! CNF formulas in DIMACS form: a `p cnf <vars> <clauses>` header, `c`
//! comment lines, and zero-terminated clauses of signed variable indices.

use std::fmt;

use rand::Rng;

use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cnf {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl Cnf {
    /// Literals must be nonzero with `|lit| <= num_vars`.
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self, ParseError> {
        for lit in clauses.iter().flatten() {
            if *lit == 0 || lit.unsigned_abs() as usize > num_vars {
                return Err(ParseError::Dimacs {
                    line: 0,
                    msg: format!("literal {lit} out of range for {num_vars} variables"),
                });
            }
        }
        Ok(Cnf { num_vars, clauses })
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |msg: String| ParseError::Dimacs { line: line_no, msg };
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('%') {
                continue;
            }
            if trimmed.starts_with('p') {
                if header.is_some() {
                    return Err(err("duplicate header".into()));
                }
                let fields: Vec<&str> = trimmed.split_whitespace().collect();
                match fields.as_slice() {
                    ["p", "cnf", vars, count] => {
                        let vars = vars
                            .parse()
                            .map_err(|_| err(format!("bad variable count {vars:?}")))?;
                        let count = count
                            .parse()
                            .map_err(|_| err(format!("bad clause count {count:?}")))?;
                        header = Some((vars, count));
                    }
                    _ => return Err(err(format!("malformed header {trimmed:?}"))),
                }
                continue;
            }
            let (vars, _) = header.ok_or_else(|| err("clause before header".into()))?;
            for token in trimmed.split_whitespace() {
                let lit: i32 = token
                    .parse()
                    .map_err(|_| err(format!("bad literal {token:?}")))?;
                if lit == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else if lit.unsigned_abs() as usize > vars {
                    return Err(err(format!("literal {lit} exceeds {vars} variables")));
                } else {
                    current.push(lit);
                }
            }
        }
        let (vars, count) = header.ok_or(ParseError::Dimacs {
            line: 0,
            msg: "missing `p cnf` header".into(),
        })?;
        if !current.is_empty() {
            clauses.push(current);
        }
        if clauses.len() != count {
            return Err(ParseError::Dimacs {
                line: 0,
                msg: format!("header declares {count} clauses, found {}", clauses.len()),
            });
        }
        Ok(Cnf {
            num_vars: vars,
            clauses,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// Formula size: the larger of the variable count and the number of literal occurrences.
    pub fn size(&self) -> usize {
        let literals: usize = self.clauses.iter().map(Vec::len).sum();
        literals.max(self.num_vars)
    }

    /// `assignment[i]` is the value of variable `i + 1`.
    pub fn eval(&self, assignment: &[bool]) -> bool {
        assert_eq!(assignment.len(), self.num_vars);
        self.clauses.iter().all(|clause| {
            clause
                .iter()
                .any(|&lit| assignment[lit.unsigned_abs() as usize - 1] == (lit > 0))
        })
    }

    /// Every satisfying assignment, by enumeration in counting order
    /// (variable 1 is the low bit).
    pub fn satisfying_assignments(&self) -> Vec<Vec<bool>> {
        assert!(self.num_vars <= 24, "brute force limited to 24 variables");
        (0u32..1 << self.num_vars)
            .map(|bits| {
                (0..self.num_vars)
                    .map(|i| (bits >> i) & 1 == 1)
                    .collect::<Vec<bool>>()
            })
            .filter(|a| self.eval(a))
            .collect()
    }

    pub fn to_dimacs(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Cnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p cnf {} {}", self.num_vars, self.clauses.len())?;
        for clause in &self.clauses {
            for lit in clause {
                write!(f, "{lit} ")?;
            }
            writeln!(f, "0")?;
        }
        Ok(())
    }
}

/// A random formula over `n` variables with exactly one satisfying assignment.
///
/// Adds random 3-clauses (narrower when `n < 3`) that the planted
/// assignment satisfies until it is the only model left.
pub fn random_unique_sat(rng: &mut impl Rng, n: usize) -> (Cnf, Vec<bool>) {
    assert!((1..=16).contains(&n));
    let planted: Vec<bool> = (0..n).map(|_| rng.random()).collect();
    let width = n.min(3);
    let mut cnf = Cnf {
        num_vars: n,
        clauses: Vec::new(),
    };
    while cnf.satisfying_assignments().len() > 1 {
        let mut vars: Vec<usize> = (1..=n).collect();
        let clause = loop {
            for i in 0..width {
                let j = rng.random_range(i..n);
                vars.swap(i, j);
            }
            let clause: Vec<i32> = vars[..width]
                .iter()
                .map(|&v| if rng.random() { v as i32 } else { -(v as i32) })
                .collect();
            if clause
                .iter()
                .any(|&l| planted[l.unsigned_abs() as usize - 1] == (l > 0))
            {
                break clause;
            }
        };
        cnf.clauses.push(clause);
    }
    (cnf, planted)
}
