use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::Serialize;

use super::{ser_f64_map, ser_f64s, SpectralContext};
use crate::exact::IntMatrix;
use crate::graph::DirectedGraph;

/// Factors of `d = S|d|`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarParts {
    /// `σ₁ ≥ … ≥ σ_r > 0`, with `r` the exact rank of `d`.
    pub singular_values: Vec<f64>,
    /// Partial isometry `H₀ → H₁`, isometric on `(Ker d)^⊥`.
    pub s: DMatrix<f64>,
    /// `|d| = (d*d)^{1/2}`.
    pub abs_d: DMatrix<f64>,
    /// `|d*| = (dd*)^{1/2}`.
    pub abs_d_star: DMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolarReport {
    #[serde(skip)]
    pub parts: PolarParts,
    #[serde(serialize_with = "ser_f64s")]
    pub singular_values: Vec<f64>,
    /// Max-entry norm of each identity's residual.
    #[serde(serialize_with = "ser_f64_map")]
    pub residuals: BTreeMap<&'static str, f64>,
    pub pass: bool,
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Orthogonal projector onto the span of the columns of `basis`.
fn projector(basis: DMatrix<f64>, dim: usize) -> DMatrix<f64> {
    if basis.ncols() == 0 {
        return DMatrix::zeros(dim, dim);
    }
    let q = basis.qr().q();
    &q * q.transpose()
}

impl SpectralContext {
    pub fn polar_parts(&self) -> PolarParts {
        let (n, m, r) = (self.n, self.m, self.rank);
        if m == 0 || r == 0 {
            return PolarParts {
                singular_values: Vec::new(),
                s: DMatrix::zeros(m, n),
                abs_d: DMatrix::zeros(n, n),
                abs_d_star: DMatrix::zeros(m, m),
            };
        }
        let (values, u, v) = super::dense_svd(&self.dense_d);
        let ur = u.columns(0, r).into_owned();
        let vr = v.columns(0, r).into_owned();
        let singular_values = values[..r].to_vec();
        let sigma = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(singular_values.clone()));

        PolarParts {
            s: &ur * vr.transpose(),
            abs_d: &vr * &sigma * vr.transpose(),
            abs_d_star: &ur * &sigma * ur.transpose(),
            singular_values,
        }
    }

    pub fn polar(&self, tol: f64) -> PolarReport {
        let parts = self.polar_parts();
        let (n, m) = (self.n, self.m);
        let d = &self.dense_d;
        let d_star = d.transpose();
        let s = &parts.s;
        let s_star = s.transpose();
        let (abs_d, abs_d_star) = (&parts.abs_d, &parts.abs_d_star);

        // Projector onto Ker d from an exact kernel basis.
        let kernel = IntMatrix::from_real_map(&self.incidence.d).nullspace();
        let basis = DMatrix::from_fn(n, kernel.len(), |i, k| {
            kernel[k]
                .iter()
                .find(|(c, _)| *c == i)
                .map_or(0.0, |(_, v)| num_traits::ToPrimitive::to_f64(v).unwrap_or(f64::NAN))
        });
        let p_ker = projector(basis, n);
        let range_proj = s * &s_star;

        let mut residuals = BTreeMap::new();
        residuals.insert("d - S|d|", max_abs(&(d - s * abs_d)));
        residuals.insert("d* - |d|S*", max_abs(&(&d_star - abs_d * &s_star)));
        residuals.insert("|d*| - S|d|S*", max_abs(&(abs_d_star - s * abs_d * &s_star)));
        residuals.insert("S(d*d)S* - dd*", max_abs(&(s * (&d_star * d) * &s_star - d * &d_star)));
        residuals.insert("|d|^2 - d*d", max_abs(&(abs_d * abs_d - &d_star * d)));
        residuals.insert("|d*|^2 - dd*", max_abs(&(abs_d_star * abs_d_star - d * &d_star)));
        residuals.insert(
            "S*S - (1 - P_ker d)",
            max_abs(&(&s_star * s - (DMatrix::identity(n, n) - p_ker))),
        );
        residuals.insert("SS*d - d", max_abs(&(&range_proj * d - d)));
        residuals.insert("(SS*)^2 - SS*", max_abs(&(&range_proj * &range_proj - &range_proj)));
        residuals.insert("tr(SS*) - rank d", (range_proj.trace() - self.rank as f64).abs());

        // Q1 = [[0, S*], [S, 0]] · diag(|d|, |d*|)
        let dim = n + m;
        let mut iso = DMatrix::zeros(dim, dim);
        iso.view_mut((0, n), (n, m)).copy_from(&s_star);
        iso.view_mut((n, 0), (m, n)).copy_from(s);
        let mut abs_q = DMatrix::zeros(dim, dim);
        abs_q.view_mut((0, 0), (n, n)).copy_from(abs_d);
        abs_q.view_mut((n, n), (m, m)).copy_from(abs_d_star);
        let q1 = self.ops.q1.to_dense_real();
        residuals.insert("Q1 - U|Q1|", max_abs(&(&q1 - &iso * &abs_q)));

        let pass = residuals.values().all(|&r| r < tol);
        PolarReport {
            singular_values: parts.singular_values.clone(),
            parts,
            residuals,
            pass,
        }
    }
}

pub fn polar_decompose(g: &DirectedGraph, tol: f64) -> PolarReport {
    SpectralContext::new(g).polar(tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::SPECTRAL_TOL;

    #[test]
    fn k2_polar() {
        let g = DirectedGraph::oriented(2, vec![(0, 1)]).unwrap();
        let r = polar_decompose(&g, SPECTRAL_TOL);
        assert!(r.pass, "{:?}", r.residuals);
        assert!((r.singular_values[0] - 2f64.sqrt()).abs() < 1e-12);
        // |d| = L / √2 for the single edge, since L² = 2L.
        let h = 1.0 / 2f64.sqrt();
        let expect = DMatrix::from_row_slice(2, 2, &[h, -h, -h, h]);
        assert!(max_abs(&(&r.parts.abs_d - expect)) < 1e-12);
        // S sends (x1 - x0)/√2 to the unit edge.
        let f = nalgebra::DVector::from_vec(vec![-h, h]);
        assert!(((&r.parts.s * f)[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tree_isometry_complements_constants() {
        let g = DirectedGraph::oriented(4, vec![(0, 1), (2, 1), (1, 3)]).unwrap();
        let r = polar_decompose(&g, SPECTRAL_TOL);
        assert!(r.pass, "{:?}", r.residuals);
        let ss = r.parts.s.transpose() * &r.parts.s;
        let expect = DMatrix::identity(4, 4) - DMatrix::from_element(4, 4, 0.25);
        assert!(max_abs(&(ss - expect)) < 1e-10);
    }

    #[test]
    fn edgeless_polar_is_empty() {
        let g = DirectedGraph::empty(3).unwrap();
        let r = polar_decompose(&g, SPECTRAL_TOL);
        assert!(r.pass);
        assert_eq!(r.parts.s.shape(), (0, 3));
        assert!(r.residuals.values().all(|&x| x == 0.0));
    }
}
