//! Spectra of the graph operators and the structure susy imposes on them.
//!
//! Exact elimination decides every dimension question; dense eigensolvers
//! only supply eigenvalues and eigenvectors. When a nonzero part of a
//! spectrum is needed, the number of zero eigenvalues to drop is taken from
//! the exact kernel dimension, never from a floating threshold.

mod kernel;
mod polar;
mod transport;

use faer::{Mat, Side};
use nalgebra::DMatrix;
use serde::{Serialize, Serializer};

pub use crate::exact::exact_rank;
pub use kernel::{kernel_report, zero_mode_classification, ComponentKernel, KernelReport, ZeroModeReport};
pub use polar::{polar_decompose, PolarParts, PolarReport};
pub use transport::{laplacian_eigenpairs, transport_all, transport_eigenpair, TransportReport};

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::linmap::LinearMap;
use crate::operators::{build_incidence, build_super_operators, Incidence, SuperOperators};

/// Default tolerance for eigenvalue comparisons.
pub const SPECTRAL_TOL: f64 = 1e-8;
/// Default tolerance for eigenvector residuals.
pub const VECTOR_TOL: f64 = 1e-6;

/// Rounds to 15 significant digits and folds `-0.0` into `0.0`.
pub fn round_sig15(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let r: f64 = format!("{x:.14e}").parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub(crate) fn ser_f64<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig15(*x))
}

pub(crate) fn ser_f64_map<S: Serializer>(
    xs: &std::collections::BTreeMap<&'static str, f64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(xs.iter().map(|(k, &x)| (k, round_sig15(x))))
}

pub(crate) fn ser_f64s<S: Serializer>(xs: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|&x| round_sig15(x)))
}

/// Sorted eigenvalues of a self-adjoint operator, with multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub source: String,
    #[serde(serialize_with = "ser_f64s")]
    pub eigenvalues: Vec<f64>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Eigenvalues with the `zeros` smallest removed.
    pub fn without_lowest(&self, zeros: usize) -> Vec<f64> {
        self.eigenvalues[zeros.min(self.len())..].to_vec()
    }
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn to_faer(m: &DMatrix<f64>) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, f64>) -> DMatrix<f64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Ascending eigenvalues and matching orthonormal eigenvector columns. A
/// solver that fails to converge yields NaN, which fails every comparison.
pub(crate) fn dense_eigen(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    match to_faer(&m).self_adjoint_eigen(Side::Lower) {
        Ok(eig) => {
            let values = eig.S().column_vector().iter().copied().collect();
            (values, from_faer(eig.U()))
        }
        Err(_) => (vec![f64::NAN; n], DMatrix::from_element(n, n, f64::NAN)),
    }
}

/// Sorted eigenvalues only, without forming eigenvectors.
pub(crate) fn dense_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    sorted(
        to_faer(&m)
            .self_adjoint_eigenvalues(Side::Lower)
            .unwrap_or_else(|_| vec![f64::NAN; n]),
    )
}

/// Thin SVD `m = U Σ Vᵀ` with singular values in nonincreasing order.
pub(crate) fn dense_svd(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>, DMatrix<f64>) {
    let k = m.nrows().min(m.ncols());
    match to_faer(m).thin_svd() {
        Ok(svd) => (
            svd.S().column_vector().iter().copied().collect(),
            from_faer(svd.U()),
            from_faer(svd.V()),
        ),
        Err(_) => (
            vec![f64::NAN; k],
            DMatrix::from_element(m.nrows(), k, f64::NAN),
            DMatrix::from_element(m.ncols(), k, f64::NAN),
        ),
    }
}

/// Full spectrum of a self-adjoint map.
///
/// Complex Hermitian maps `A + iB` go through the real symmetric embedding
/// `[[A, −B], [B, A]]`, which carries every eigenvalue twice; every second
/// eigenvalue of the sorted embedded spectrum is kept.
pub fn symmetric_spectrum(m: &LinearMap, source: &str) -> Result<Spectrum> {
    if !m.is_self_adjoint() {
        return Err(Error::NotSelfAdjoint);
    }
    let eigenvalues = if m.is_real() {
        dense_eigenvalues(m.to_dense_real())
    } else {
        let c = m.to_dense_complex();
        let n = c.nrows();
        let embedded = DMatrix::from_fn(2 * n, 2 * n, |r, col| {
            let z = c[(r % n, col % n)];
            match (r < n, col < n) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
            }
        });
        dense_eigenvalues(embedded).into_iter().step_by(2).collect()
    };
    Ok(Spectrum {
        source: source.to_string(),
        eigenvalues,
    })
}

/// Outcome of a sorted pointwise multiset comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MultisetMatch {
    pub pass: bool,
    /// Largest deviation: absolute when both values are at most 1 in
    /// magnitude, relative to the larger magnitude otherwise.
    #[serde(serialize_with = "ser_f64")]
    pub max_deviation: f64,
}

pub fn multisets_match(a: &[f64], b: &[f64], tol: f64) -> MultisetMatch {
    if a.len() != b.len() {
        return MultisetMatch {
            pass: false,
            max_deviation: f64::INFINITY,
        };
    }
    let (a, b) = (sorted(a.to_vec()), sorted(b.to_vec()));
    let max_deviation = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(1.0))
        .fold(0.0, f64::max);
    MultisetMatch {
        pass: max_deviation <= tol,
        max_deviation,
    }
}

/// Operators and exact ranks shared by the spectral analyses of one graph.
#[derive(Debug, Clone)]
pub struct SpectralContext {
    pub n: usize,
    pub m: usize,
    pub incidence: Incidence,
    pub ops: SuperOperators,
    /// Exact rank of `d`.
    pub rank: usize,
    pub dense_d: DMatrix<f64>,
    /// `d*d` and `dd*`, exact.
    pub laplacian: LinearMap,
    pub edge_laplacian: LinearMap,
}

impl SpectralContext {
    pub fn new(g: &DirectedGraph) -> Self {
        let incidence = build_incidence(g);
        let rank = exact_rank(&incidence.d);
        let dense_d = incidence.d.to_dense_real();
        let laplacian = incidence.d_star.compose(&incidence.d).expect("H0 -> H1 -> H0");
        let edge_laplacian = incidence.d.compose(&incidence.d_star).expect("H1 -> H0 -> H1");
        Self {
            laplacian,
            edge_laplacian,
            n: g.n(),
            m: g.m(),
            ops: build_super_operators(g),
            incidence,
            rank,
            dense_d,
        }
    }

    pub fn laplacian_spectrum(&self) -> Spectrum {
        let l = self.dense_d.transpose() * &self.dense_d;
        Spectrum {
            source: "d*d".into(),
            eigenvalues: dense_eigenvalues(l),
        }
    }

    pub fn edge_laplacian_spectrum(&self) -> Spectrum {
        let l = &self.dense_d * self.dense_d.transpose();
        Spectrum {
            source: "dd*".into(),
            eigenvalues: dense_eigenvalues(l),
        }
    }

    pub fn hamiltonian_spectrum(&self) -> Spectrum {
        symmetric_spectrum(&self.ops.hamiltonian, "H_S").expect("H_S is self-adjoint")
    }

    /// Squared singular values of `d` for the `rank` largest singular values, ascending.
    pub fn squared_singular_values(&self) -> Vec<f64> {
        if self.m == 0 {
            return Vec::new();
        }
        let sv = to_faer(&self.dense_d)
            .singular_values()
            .unwrap_or_else(|_| vec![f64::NAN; self.n.min(self.m)]);
        sorted(sv.into_iter().take(self.rank).map(|s| s * s).collect())
    }

    pub fn pairing(&self, tol: f64) -> PairingReport {
        let laplacian = self.laplacian_spectrum();
        let edge = self.edge_laplacian_spectrum();
        let hamiltonian = self.hamiltonian_spectrum();
        let sigma_sq = self.squared_singular_values();
        let nz_l = laplacian.without_lowest(self.n - self.rank);
        let nz_e = edge.without_lowest(self.m - self.rank);
        let nz_h = hamiltonian.without_lowest(self.n + self.m - 2 * self.rank);
        let union = sorted(nz_l.iter().chain(&nz_e).copied().collect());
        let twofold = nz_h
            .chunks(2)
            .all(|p| p.len() == 2 && multisets_match(&p[..1], &p[1..], tol).pass);

        let laplacian_vs_edge = multisets_match(&nz_l, &nz_e, tol);
        let laplacian_vs_singular = multisets_match(&nz_l, &sigma_sq, tol);
        let edge_vs_singular = multisets_match(&nz_e, &sigma_sq, tol);
        let hamiltonian_is_union = multisets_match(&nz_h, &union, tol);
        PairingReport {
            pass: laplacian_vs_edge.pass
                && laplacian_vs_singular.pass
                && edge_vs_singular.pass
                && hamiltonian_is_union.pass
                && twofold,
            laplacian_vs_edge,
            laplacian_vs_singular,
            edge_vs_singular,
            hamiltonian_is_union,
            twofold_degenerate: twofold,
            squared_singular_values: sigma_sq,
            laplacian,
            edge_laplacian: edge,
            hamiltonian,
        }
    }

    pub fn dirac(&self, tol: f64) -> DiracReport {
        let q1 = symmetric_spectrum(&self.ops.q1, "Q1").expect("Q1 is self-adjoint");
        let q2 = symmetric_spectrum(&self.ops.q2, "Q2").expect("Q2 is Hermitian");
        let hamiltonian = self.hamiltonian_spectrum();
        let negated = |s: &Spectrum| s.eigenvalues.iter().map(|x| -x).collect::<Vec<_>>();
        let squares: Vec<f64> = q1.eigenvalues.iter().map(|x| x * x).collect();
        let q1_symmetric = multisets_match(&q1.eigenvalues, &negated(&q1), tol);
        let q2_symmetric = multisets_match(&q2.eigenvalues, &negated(&q2), tol);
        let q1_equals_q2 = multisets_match(&q1.eigenvalues, &q2.eigenvalues, tol);
        let squares_match_hamiltonian = multisets_match(&squares, &hamiltonian.eigenvalues, tol);
        DiracReport {
            pass: q1_symmetric.pass && q2_symmetric.pass && q1_equals_q2.pass && squares_match_hamiltonian.pass,
            q1,
            q2,
            hamiltonian,
            q1_symmetric,
            q2_symmetric,
            q1_equals_q2,
            squares_match_hamiltonian,
        }
    }
}

/// Nonzero spectra of `d*d`, `dd*` and `H_S` against the singular values of `d`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairingReport {
    pub laplacian: Spectrum,
    pub edge_laplacian: Spectrum,
    pub hamiltonian: Spectrum,
    #[serde(serialize_with = "ser_f64s")]
    pub squared_singular_values: Vec<f64>,
    pub laplacian_vs_edge: MultisetMatch,
    pub laplacian_vs_singular: MultisetMatch,
    pub edge_vs_singular: MultisetMatch,
    pub hamiltonian_is_union: MultisetMatch,
    pub twofold_degenerate: bool,
    pub pass: bool,
}

pub fn pairing_check(g: &DirectedGraph, tol: f64) -> PairingReport {
    SpectralContext::new(g).pairing(tol)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiracReport {
    pub q1: Spectrum,
    pub q2: Spectrum,
    pub hamiltonian: Spectrum,
    pub q1_symmetric: MultisetMatch,
    pub q2_symmetric: MultisetMatch,
    pub q1_equals_q2: MultisetMatch,
    pub squares_match_hamiltonian: MultisetMatch,
    pub pass: bool,
}

pub fn dirac_spectrum(g: &DirectedGraph, tol: f64) -> DiracReport {
    SpectralContext::new(g).dirac(tol)
}
