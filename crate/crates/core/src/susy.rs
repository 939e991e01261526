//! Exact verification of the N=2 superalgebra and the grading relations.
//!
//! Each relation is evaluated as one or more residual maps that must vanish
//! identically. Failures are reported, never raised.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::exec::Exec;
use crate::gauss::GaussInt;
use crate::graph::DirectedGraph;
use crate::linmap::{int_json, LinearMap};
use crate::operators::{build_super_operators, SuperOperators};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub name: &'static str,
    /// Largest absolute entry part over all residual maps.
    #[serde(serialize_with = "serialize_bigint")]
    pub residual: BigInt,
    pub nonzero_entries: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn serialize_bigint<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    int_json(v).serialize(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlgebraReport {
    pub relations: Vec<RelationCheck>,
}

impl AlgebraReport {
    pub fn all_pass(&self) -> bool {
        self.relations.iter().all(|r| r.pass)
    }

    pub fn get(&self, name: &str) -> Option<&RelationCheck> {
        self.relations.iter().find(|r| r.name == name)
    }
}

type Residuals = fn(&SuperOperators) -> Result<Vec<LinearMap>>;

fn check(name: &'static str, ops: &SuperOperators, residuals: Residuals) -> RelationCheck {
    match residuals(ops) {
        Ok(maps) => {
            let residual = maps.iter().map(LinearMap::max_abs_entry).max().unwrap_or_default();
            let nonzero_entries = maps.iter().map(LinearMap::nnz).sum();
            RelationCheck {
                name,
                pass: residual.is_zero(),
                residual,
                nonzero_entries,
                note: None,
            }
        }
        Err(err) => RelationCheck {
            name,
            residual: BigInt::zero(),
            nonzero_entries: 0,
            pass: false,
            note: Some(err.to_string()),
        },
    }
}

fn run(ops: &SuperOperators, relations: &[(&'static str, Residuals)], exec: Exec) -> AlgebraReport {
    AlgebraReport {
        relations: exec.map(relations, |&(name, f)| check(name, ops, f)),
    }
}

fn i() -> GaussInt {
    GaussInt::i()
}

const SUPERALGEBRA: &[(&str, Residuals)] = &[
    ("Q+^2 = 0", |o| Ok(vec![o.q_plus.compose(&o.q_plus)?])),
    ("Q-^2 = 0", |o| Ok(vec![o.q_minus.compose(&o.q_minus)?])),
    ("{Q+,Q-} = H_S", |o| {
        Ok(vec![o.q_plus.anticommutator(&o.q_minus)?.sub(&o.hamiltonian)?])
    }),
    ("[H_S,Q+] = [H_S,Q-] = 0", |o| {
        Ok(vec![
            o.hamiltonian.commutator(&o.q_plus)?,
            o.hamiltonian.commutator(&o.q_minus)?,
        ])
    }),
    ("Q1^2 = Q2^2 = H_S", |o| {
        Ok(vec![
            o.q1.compose(&o.q1)?.sub(&o.hamiltonian)?,
            o.q2.compose(&o.q2)?.sub(&o.hamiltonian)?,
        ])
    }),
    ("{Q1,Q2} = 0", |o| Ok(vec![o.q1.anticommutator(&o.q2)?])),
    ("Q+- = (Q1 +- iQ2)/2", |o| {
        let iq2 = o.q2.scale(&i());
        Ok(vec![
            o.q1.add(&iq2)?.halve()?.sub(&o.q_plus)?,
            o.q1.sub(&iq2)?.halve()?.sub(&o.q_minus)?,
            // and back: Q1 = Q+ + Q-, Q2 = -i(Q+ - Q-)
            o.q_plus.add(&o.q_minus)?.sub(&o.q1)?,
            o.q_plus.sub(&o.q_minus)?.scale(&-i()).sub(&o.q2)?,
        ])
    }),
    ("[H_S,Q1] = [H_S,Q2] = 0", |o| {
        Ok(vec![o.hamiltonian.commutator(&o.q1)?, o.hamiltonian.commutator(&o.q2)?])
    }),
];

const GRADING: &[(&str, Residuals)] = &[
    ("chi^2 = 1", |o| {
        Ok(vec![o
            .chi
            .compose(&o.chi)?
            .sub(&LinearMap::identity(o.chi.domain()))?])
    }),
    ("chi = chi*", |o| Ok(vec![o.chi.sub(&o.chi.adjoint())?])),
    ("{Q1,chi} = 0", |o| Ok(vec![o.q1.anticommutator(&o.chi)?])),
    ("{Q2,chi} = 0", |o| Ok(vec![o.q2.anticommutator(&o.chi)?])),
    ("Q2 = i chi Q1 = -i Q1 chi", |o| {
        Ok(vec![
            o.q2.sub(&o.chi.compose(&o.q1)?.scale(&i()))?,
            o.q2.add(&o.q1.compose(&o.chi)?.scale(&i()))?,
        ])
    }),
    ("P0 = (1+chi)/2, P1 = (1-chi)/2", |o| {
        let id = LinearMap::identity(o.chi.domain());
        Ok(vec![
            id.add(&o.chi)?.halve()?.sub(&o.p0)?,
            id.sub(&o.chi)?.halve()?.sub(&o.p1)?,
        ])
    }),
    ("P0^2 = P0, P1^2 = P1", |o| {
        Ok(vec![o.p0.compose(&o.p0)?.sub(&o.p0)?, o.p1.compose(&o.p1)?.sub(&o.p1)?])
    }),
    ("P0 P1 = P1 P0 = 0", |o| {
        Ok(vec![o.p0.compose(&o.p1)?, o.p1.compose(&o.p0)?])
    }),
    ("P0 + P1 = 1", |o| {
        Ok(vec![o.p0.add(&o.p1)?.sub(&LinearMap::identity(o.chi.domain()))?])
    }),
    ("[H_S,chi] = 0", |o| Ok(vec![o.hamiltonian.commutator(&o.chi)?])),
];

pub fn verify_superalgebra(g: &DirectedGraph) -> AlgebraReport {
    verify_superalgebra_with(g, Exec::default())
}

pub fn verify_superalgebra_with(g: &DirectedGraph, exec: Exec) -> AlgebraReport {
    superalgebra_report(&build_super_operators(g), exec)
}

/// Superalgebra relations for an arbitrary set of charges.
pub fn superalgebra_report(ops: &SuperOperators, exec: Exec) -> AlgebraReport {
    run(ops, SUPERALGEBRA, exec)
}

pub fn verify_grading(g: &DirectedGraph) -> AlgebraReport {
    verify_grading_with(g, Exec::default())
}

pub fn verify_grading_with(g: &DirectedGraph, exec: Exec) -> AlgebraReport {
    grading_report(&build_super_operators(g), exec)
}

pub fn grading_report(ops: &SuperOperators, exec: Exec) -> AlgebraReport {
    run(ops, GRADING, exec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{erdos_renyi, seeded};
    use crate::graph::Mode;

    fn k2() -> DirectedGraph {
        DirectedGraph::oriented(2, vec![(0, 1)]).unwrap()
    }

    #[test]
    fn k2_superalgebra_is_exact() {
        let r = verify_superalgebra(&k2());
        assert_eq!(r.relations.len(), 8);
        for rel in &r.relations {
            assert!(rel.pass, "{}", rel.name);
            assert!(rel.residual.is_zero());
        }
    }

    #[test]
    fn random_graph_superalgebra() {
        let g = erdos_renyi(30, 0.2, Mode::Oriented, &mut seeded(1));
        assert!(verify_superalgebra(&g).all_pass());
        assert!(verify_grading(&g).all_pass());
    }

    #[test]
    fn edgeless_graph_passes_trivially() {
        let g = DirectedGraph::empty(3).unwrap();
        let ops = build_super_operators(&g);
        assert!(ops.q1.is_zero() && ops.q2.is_zero() && ops.q_plus.is_zero());
        assert!(verify_superalgebra(&g).all_pass());
        assert!(verify_grading(&g).all_pass());
    }

    #[test]
    fn c3_grading() {
        let c3 = DirectedGraph::oriented(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let r = verify_grading(&c3);
        assert!(r.all_pass());
        assert_eq!(r.get("{Q1,chi} = 0").unwrap().nonzero_entries, 0);
    }

    #[test]
    fn broken_charge_is_reported_not_raised() {
        let mut ops = build_super_operators(&k2());
        // A charge that is no longer nilpotent.
        ops.q_plus = ops.q1.clone();
        let r = superalgebra_report(&ops, Exec::Sequential);
        let rel = r.get("Q+^2 = 0").unwrap();
        assert!(!rel.pass);
        assert_eq!(rel.residual, BigInt::from(2));
        assert!(!r.all_pass());

        let mut ops = build_super_operators(&k2());
        ops.q2 = ops.q1.clone();
        let rel = superalgebra_report(&ops, Exec::Sequential);
        let rel = rel.get("Q+- = (Q1 +- iQ2)/2").unwrap();
        assert!(!rel.pass);
        assert!(rel.note.as_deref().unwrap().contains("odd entry"));
    }

    #[test]
    fn strategies_give_identical_reports() {
        let g = erdos_renyi(20, 0.3, Mode::Symmetric, &mut seeded(3));
        assert_eq!(
            verify_superalgebra_with(&g, Exec::Sequential),
            verify_superalgebra_with(&g, Exec::Parallel)
        );
    }
}
