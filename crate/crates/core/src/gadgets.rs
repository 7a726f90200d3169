//! The clause-indicator formula families over all 3-clauses on `x1..xn`.

use crate::error::{Error, Result};
use crate::formula::{Clause, CnfFormula, EpfFormula, Formula, Interpretation, Literal, Var};
use std::collections::{BTreeMap, BTreeSet};

/// `π(n)` in canonical order with its indicator variables.
///
/// Variables: `x1..xn`, then `z_c` for each clause, then `z′_c`, then `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseIndex {
    pub n: usize,
    clauses: Vec<Clause>,
    position: BTreeMap<Clause, usize>,
}

impl ClauseIndex {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooSmall(n));
        }
        let mut clauses = Vec::with_capacity(8 * n * (n - 1) * (n - 2) / 6);
        for i in 1..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    for signs in 0u8..8 {
                        let vars = [i, j, k];
                        let lits = vars
                            .iter()
                            .enumerate()
                            .map(|(b, v)| Literal::new(Var::new(*v as u32), signs >> b & 1 == 0));
                        clauses.push(Clause::new(lits).expect("distinct variables"));
                    }
                }
            }
        }
        let position = clauses.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        Ok(ClauseIndex {
            n,
            clauses,
            position,
        })
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn position(&self, c: &Clause) -> Option<usize> {
        self.position.get(c).copied()
    }

    pub fn x(&self, i: usize) -> Var {
        Var::new(i as u32)
    }

    pub fn z(&self, c: usize) -> Var {
        Var::new((self.n + 1 + c) as u32)
    }

    pub fn z_prime(&self, c: usize) -> Var {
        Var::new((self.n + self.len() + 1 + c) as u32)
    }

    pub fn y(&self) -> Var {
        Var::new((self.n + 2 * self.len() + 1) as u32)
    }

    pub fn z_vars(&self) -> BTreeSet<Var> {
        (0..self.len()).map(|c| self.z(c)).collect()
    }

    /// Positions of `φ`'s clauses in `π(n)`.
    pub fn positions(&self, phi: &CnfFormula) -> Result<BTreeSet<usize>> {
        phi.clauses()
            .iter()
            .map(|c| self.position(c).ok_or_else(|| Error::ClauseNotInPi(c.to_string())))
            .collect()
    }
}

/// `Ψ_n = ∃x1…xn ⋀_{c∈π(n)} (c ∨ ¬z_c)`.
pub fn build_psi_upper(n: usize) -> Result<EpfFormula> {
    let idx = ClauseIndex::new(n)?;
    Ok(psi_upper(&idx))
}

pub fn psi_upper(idx: &ClauseIndex) -> EpfFormula {
    let clauses = idx
        .clauses()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            Clause::new(c.literals().iter().copied().chain([idx.z(i).neg()])).expect("fresh indicator")
        })
        .collect();
    let num_vars = (idx.n + idx.len()) as u32;
    let matrix = CnfFormula::new(num_vars, clauses).expect("in range");
    EpfFormula::new((1..=idx.n).map(|i| idx.x(i)), matrix).expect("every x occurs")
}

/// `M_φ` over the `z_c`: exactly the indicators of `φ`'s clauses are true.
pub fn encode_upper(phi: &CnfFormula, n: usize) -> Result<Interpretation> {
    let idx = ClauseIndex::new(n)?;
    let on = idx.positions(phi)?;
    Interpretation::new(idx.z_vars(), on.into_iter().map(|c| idx.z(c)).collect())
}

/// `ψ_n = ((¬y ∧ ⋀(c ∨ ¬z_c)) ∨ (y ∧ x1 ∧ … ∧ xn)) ∧ ⋀(z_c ↔ ¬z′_c)`.
pub fn build_psi_lower(n: usize) -> Result<Formula> {
    let idx = ClauseIndex::new(n)?;
    Ok(psi_lower(&idx))
}

pub fn psi_lower(idx: &ClauseIndex) -> Formula {
    let y = Formula::Atom(idx.y());
    let indicated = Formula::and_all(idx.clauses().iter().enumerate().map(|(i, c)| {
        Formula::or(c.to_formula(), Formula::not(Formula::Atom(idx.z(i))))
    }));
    let all_x = Formula::and_all((1..=idx.n).map(|i| Formula::Atom(idx.x(i))));
    let rails = Formula::and_all((0..idx.len()).map(|i| {
        Formula::iff(Formula::Atom(idx.z(i)), Formula::not(Formula::Atom(idx.z_prime(i))))
    }));
    Formula::and(
        Formula::or(
            Formula::and(Formula::not(y.clone()), indicated),
            Formula::and(y, all_x),
        ),
        rails,
    )
}

/// `M_φ = {y, x1..xn} ∪ {z_c : c ∈ φ} ∪ {z′_c : c ∉ φ}` over `vars(ψ_n)`.
pub fn encode_lower(phi: &CnfFormula, n: usize) -> Result<Interpretation> {
    let idx = ClauseIndex::new(n)?;
    let on = idx.positions(phi)?;
    let domain = (1..=idx.y().index()).map(Var::new).collect();
    let true_atoms = (1..=n)
        .map(|i| idx.x(i))
        .chain([idx.y()])
        .chain((0..idx.len()).map(|c| if on.contains(&c) { idx.z(c) } else { idx.z_prime(c) }))
        .collect();
    Interpretation::new(domain, true_atoms)
}

/// A 3CNF made of the clauses of `π(n)` at the given positions.
pub fn phi_from_positions(idx: &ClauseIndex, positions: &BTreeSet<usize>) -> CnfFormula {
    CnfFormula::from_clauses(positions.iter().map(|p| idx.clauses()[*p].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat::Limits;
    use crate::systems::{is_minimal_model, model_check, Strategy, SystemId, Theory};

    fn lit(n: i64) -> Literal {
        Literal::from_dimacs(n).unwrap()
    }

    fn cnf(clauses: &[&[i64]]) -> CnfFormula {
        CnfFormula::from_clauses(
            clauses
                .iter()
                .map(|c| Clause::new(c.iter().map(|n| lit(*n))).unwrap())
                .collect(),
        )
    }

    fn binom3(n: usize) -> usize {
        n * (n - 1) * (n - 2) / 6
    }

    #[test]
    fn pi_sizes() {
        for n in 3..=6 {
            assert_eq!(ClauseIndex::new(n).unwrap().len(), 8 * binom3(n));
        }
        assert_eq!(ClauseIndex::new(2), Err(Error::TooSmall(2)));
    }

    #[test]
    fn canonical_order_starts_positive() {
        let idx = ClauseIndex::new(4).unwrap();
        assert_eq!(idx.clauses()[0], cnf(&[&[1, 2, 3]]).clauses()[0]);
        assert_eq!(idx.clauses()[1], cnf(&[&[-1, 2, 3]]).clauses()[0]);
        assert_eq!(idx.clauses()[8], cnf(&[&[1, 2, 4]]).clauses()[0]);
    }

    #[test]
    fn upper_shapes() {
        let psi = build_psi_upper(3).unwrap();
        assert_eq!(psi.free().len(), 8);
        assert_eq!(psi.bound().len(), 3);
        assert_eq!(build_psi_upper(4).unwrap().free().len(), 32);
        let empty = encode_upper(&CnfFormula::default(), 3).unwrap();
        assert!(model_check(SystemId::EpfFSat, &Theory::Epf(psi), &empty).unwrap());
    }

    #[test]
    fn upper_examples() {
        let psi = Theory::Epf(build_psi_upper(3).unwrap());
        let one = encode_upper(&cnf(&[&[1, 2, 3]]), 3).unwrap();
        assert_eq!(one.true_atoms().len(), 1);
        assert!(model_check(SystemId::EpfFSat, &psi, &one).unwrap());
        let idx = ClauseIndex::new(3).unwrap();
        let all = CnfFormula::from_clauses(idx.clauses().to_vec());
        let m = encode_upper(&all, 3).unwrap();
        assert!(!model_check(SystemId::EpfFSat, &psi, &m).unwrap());
        assert!(matches!(
            encode_upper(&cnf(&[&[1, 2]]), 3),
            Err(Error::ClauseNotInPi(_))
        ));
    }

    #[test]
    fn lower_shapes() {
        assert_eq!(build_psi_lower(3).unwrap().vars().len(), 20);
        assert_eq!(build_psi_lower(4).unwrap().vars().len(), 69);
    }

    #[test]
    fn lower_examples() {
        let limits = Limits::default();
        let psi = build_psi_lower(3).unwrap();
        let idx = ClauseIndex::new(3).unwrap();
        let all = CnfFormula::from_clauses(idx.clauses().to_vec());
        let m = encode_lower(&all, 3).unwrap();
        assert!(psi.evaluate(&m).unwrap());
        assert!(is_minimal_model(&psi, &m, Strategy::SatBased, &limits).unwrap());
        let single = encode_lower(&cnf(&[&[1, 2, 3]]), 3).unwrap();
        assert!(psi.evaluate(&single).unwrap());
        assert!(!is_minimal_model(&psi, &single, Strategy::SatBased, &limits).unwrap());
    }
}
