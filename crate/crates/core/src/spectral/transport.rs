use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use super::{dense_eigen, ser_f64, ser_f64_map, SpectralContext};
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::linmap::{LinearMap, SpaceTag, StateVector};

/// Residuals of moving an eigenvector of `d*d` to the edge space and into
/// eigenvectors of the supercharges.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransportReport {
    #[serde(serialize_with = "ser_f64")]
    pub energy: f64,
    #[serde(skip)]
    pub g: StateVector,
    /// Max-modulus residual of each transported relation.
    #[serde(serialize_with = "ser_f64_map")]
    pub residuals: BTreeMap<&'static str, f64>,
    /// `1 − |⟨u, w⟩|²` for the normalized `Q1` pair `(f, ±g)`.
    #[serde(serialize_with = "ser_f64")]
    pub q1_pair_independence: f64,
    #[serde(serialize_with = "ser_f64")]
    pub q2_pair_independence: f64,
    /// Distance of `(f, g)` from either `χ` eigenspace, relative to its norm.
    #[serde(serialize_with = "ser_f64")]
    pub mixing: f64,
    pub pass: bool,
}

fn residual(op: &LinearMap, v: &StateVector, eigenvalue: f64) -> f64 {
    let image = op.apply(v).expect("operator acts on the vector's space");
    image
        .sub(&v.scale(Complex64::new(eigenvalue, 0.0)))
        .expect("same space")
        .max_abs()
}

fn independence(a: &StateVector, b: &StateVector) -> f64 {
    let overlap = a.dot(b).norm() / (a.norm() * b.norm());
    1.0 - overlap * overlap
}

impl SpectralContext {
    pub fn transport(&self, energy: f64, f: &StateVector, tol: f64) -> Result<TransportReport> {
        let (n, m) = (self.n, self.m);
        if f.space() != SpaceTag::Vertex(n) {
            return Err(Error::SpaceMismatch {
                expected: SpaceTag::Vertex(n),
                found: f.space(),
            });
        }
        if energy <= tol {
            return Err(Error::EnergyBelowTolerance { energy, tol });
        }
        let f = f.scale(Complex64::new(1.0 / f.norm(), 0.0));
        let eigen_residual = residual(&self.laplacian, &f, energy);
        if eigen_residual > tol {
            return Err(Error::NotAnEigenpair {
                residual: eigen_residual,
                tol,
            });
        }

        let lambda = energy.sqrt();
        let d = &self.incidence.d;
        let d_star = &self.incidence.d_star;
        let g = d.apply(&f)?.scale(Complex64::new(1.0 / lambda, 0.0));
        let minus_g = g.scale(Complex64::new(-1.0, 0.0));
        let i_f = f.scale(Complex64::i());
        let ops = &self.ops;

        let plus = StateVector::join(&f, &g)?;
        let minus = StateVector::join(&f, &minus_g)?;
        let q2_plus = StateVector::join(&i_f, &g)?;
        let q2_minus = StateVector::join(&i_f, &minus_g)?;
        let bosonic = StateVector::join(&f, &StateVector::zeros(SpaceTag::Edge(m)))?;
        let fermionic = StateVector::join(&StateVector::zeros(SpaceTag::Vertex(n)), &g)?;

        let mut residuals = BTreeMap::new();
        residuals.insert("d*d f - E f", eigen_residual);
        residuals.insert("|g| - 1", (g.norm() - 1.0).abs());
        residuals.insert("dd* g - E g", residual(&self.edge_laplacian, &g, energy));
        residuals.insert(
            "d* g - lambda f",
            d_star.apply(&g)?.sub(&f.scale(Complex64::new(lambda, 0.0)))?.max_abs(),
        );
        residuals.insert(
            "d f - lambda g",
            d.apply(&f)?.sub(&g.scale(Complex64::new(lambda, 0.0)))?.max_abs(),
        );
        residuals.insert("Q1 (f,g) - lambda (f,g)", residual(&ops.q1, &plus, lambda));
        residuals.insert("Q1 (f,-g) + lambda (f,-g)", residual(&ops.q1, &minus, -lambda));
        residuals.insert("Q2 (if,g) - lambda (if,g)", residual(&ops.q2, &q2_plus, lambda));
        residuals.insert("Q2 (if,-g) + lambda (if,-g)", residual(&ops.q2, &q2_minus, -lambda));
        let hs = [&plus, &minus, &q2_plus, &q2_minus, &bosonic, &fermionic]
            .iter()
            .map(|v| residual(&ops.hamiltonian, v, energy))
            .fold(0.0, f64::max);
        residuals.insert("H_S v - E v", hs);
        residuals.insert(
            "chi (f,0) - (f,0), chi (0,g) + (0,g)",
            residual(&ops.chi, &bosonic, 1.0).max(residual(&ops.chi, &fermionic, -1.0)),
        );

        let q1_pair_independence = independence(&plus, &minus);
        let q2_pair_independence = independence(&q2_plus, &q2_minus);
        let chi_plus = ops.chi.apply(&plus)?;
        let mixing = chi_plus
            .sub(&plus)?
            .norm()
            .min(chi_plus.sub(&plus.scale((-1.0).into()))?.norm())
            / plus.norm();

        let pass = residuals.values().all(|&r| r < tol)
            && q1_pair_independence > tol
            && q2_pair_independence > tol
            && mixing > tol;
        Ok(TransportReport {
            energy,
            g,
            residuals,
            q1_pair_independence,
            q2_pair_independence,
            mixing,
            pass,
        })
    }

    /// Eigenpairs of `d*d` from a dense solve, ascending.
    pub fn laplacian_eigenpairs(&self) -> Vec<(f64, StateVector)> {
        let (values, vectors) = dense_eigen(self.dense_d.transpose() * &self.dense_d);
        values
            .into_iter()
            .enumerate()
            .map(|(k, e)| {
                let col: Vec<f64> = vectors.column(k).iter().copied().collect();
                (
                    e,
                    StateVector::from_real(SpaceTag::Vertex(self.n), &col).expect("length n"),
                )
            })
            .collect()
    }
}

/// Verifies the transport relations for one eigenpair `(E, f)` of `d*d`.
pub fn transport_eigenpair(g: &DirectedGraph, energy: f64, f: &StateVector, tol: f64) -> Result<TransportReport> {
    SpectralContext::new(g).transport(energy, f, tol)
}

pub fn laplacian_eigenpairs(g: &DirectedGraph) -> Vec<(f64, StateVector)> {
    SpectralContext::new(g).laplacian_eigenpairs()
}

impl SpectralContext {
    /// Transport reports for every eigenpair above the zero modes. The exact
    /// rank of `d` decides how many eigenpairs are zero modes.
    pub fn transport_all(&self, tol: f64) -> Result<Vec<TransportReport>> {
        let zeros = self.n - self.rank;
        self.laplacian_eigenpairs()
            .into_iter()
            .skip(zeros)
            .map(|(e, f)| self.transport(e, &f, tol))
            .collect()
    }
}

pub fn transport_all(g: &DirectedGraph, tol: f64) -> Result<Vec<TransportReport>> {
    SpectralContext::new(g).transport_all(tol)
}
