//! Sparse exact linear maps between the vertex space, the edge space and
//! their direct sum, plus dense complex state vectors.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gauss::GaussInt;

/// The Hilbert space an operator acts on, with its dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpaceTag {
    /// Functions on vertices.
    Vertex(usize),
    /// Functions on directed edges.
    Edge(usize),
    /// Vertex block first, then edge block.
    Super { vertices: usize, edges: usize },
}

impl SpaceTag {
    pub fn dim(self) -> usize {
        match self {
            SpaceTag::Vertex(n) | SpaceTag::Edge(n) => n,
            SpaceTag::Super { vertices, edges } => vertices + edges,
        }
    }

    fn with_dim(self, dim: usize) -> SpaceTag {
        match self {
            SpaceTag::Vertex(_) => SpaceTag::Vertex(dim),
            SpaceTag::Edge(_) => SpaceTag::Edge(dim),
            SpaceTag::Super { vertices, .. } => SpaceTag::Super {
                vertices,
                edges: dim.saturating_sub(vertices),
            },
        }
    }
}

fn expect_space(expected: SpaceTag, found: SpaceTag) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::SpaceMismatch { expected, found })
    }
}

/// Sparse operator with exact Gaussian-integer entries.
///
/// Stored row-compressed with columns sorted inside each row, which is the
/// same thing as coordinate triplets sorted by `(row, col)`. Zero entries are
/// never stored, so two maps are equal exactly when their entry lists are.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    domain: SpaceTag,
    codomain: SpaceTag,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<GaussInt>,
}

impl LinearMap {
    /// Builds a map from unordered triplets. Repeated coordinates are summed
    /// and zero sums dropped.
    pub fn from_triplets<I>(domain: SpaceTag, codomain: SpaceTag, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, GaussInt)>,
    {
        let (rows, cols) = (codomain.dim(), domain.dim());
        let mut acc: Vec<BTreeMap<usize, GaussInt>> = vec![BTreeMap::new(); rows];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "entry ({r}, {c}) outside {rows}x{cols}");
            *acc[r].entry(c).or_default() += &v;
        }
        Self::from_rows(
            domain,
            codomain,
            acc.into_iter().map(|row| row.into_iter().collect()).collect(),
        )
    }

    /// `rows[r]` must be sorted by column with no repeats.
    fn from_rows(domain: SpaceTag, codomain: SpaceTag, rows: Vec<Vec<(usize, GaussInt)>>) -> Self {
        debug_assert_eq!(rows.len(), codomain.dim());
        let mut row_ptr = Vec::with_capacity(rows.len() + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for row in rows {
            for (c, v) in row {
                if !v.is_zero() {
                    cols.push(c);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        Self {
            domain,
            codomain,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn zero(domain: SpaceTag, codomain: SpaceTag) -> Self {
        Self::from_rows(domain, codomain, vec![Vec::new(); codomain.dim()])
    }

    pub fn identity(space: SpaceTag) -> Self {
        Self::diagonal(space, (0..space.dim()).map(|_| GaussInt::real(1)))
    }

    pub fn diagonal<I: IntoIterator<Item = GaussInt>>(space: SpaceTag, diag: I) -> Self {
        Self::from_triplets(space, space, diag.into_iter().enumerate().map(|(i, v)| (i, i, v)))
    }

    /// Assembles a map on the direct sum from its four blocks
    /// `[[vv, ve], [ev, ee]]` (rows, columns: vertex then edge).
    pub fn block(vv: &LinearMap, ve: &LinearMap, ev: &LinearMap, ee: &LinearMap) -> Result<Self> {
        let (n, m) = (vv.domain.dim(), ee.domain.dim());
        expect_space(SpaceTag::Vertex(n), vv.codomain)?;
        expect_space(SpaceTag::Vertex(n), vv.domain)?;
        expect_space(SpaceTag::Edge(m), ve.domain)?;
        expect_space(SpaceTag::Vertex(n), ve.codomain)?;
        expect_space(SpaceTag::Vertex(n), ev.domain)?;
        expect_space(SpaceTag::Edge(m), ev.codomain)?;
        expect_space(SpaceTag::Edge(m), ee.codomain)?;
        let space = SpaceTag::Super { vertices: n, edges: m };
        let shifted = |map: &LinearMap, dr: usize, dc: usize| {
            map.triplets()
                .map(move |(r, c, v)| (r + dr, c + dc, v.clone()))
                .collect::<Vec<_>>()
        };
        let mut all = shifted(vv, 0, 0);
        all.extend(shifted(ve, 0, n));
        all.extend(shifted(ev, n, 0));
        all.extend(shifted(ee, n, n));
        Ok(Self::from_triplets(space, space, all))
    }

    /// Extracts the sub-map on a row range and column range.
    pub fn sub_block(
        &self,
        rows: std::ops::Range<usize>,
        cols: std::ops::Range<usize>,
        domain: SpaceTag,
        codomain: SpaceTag,
    ) -> Self {
        assert_eq!(rows.len(), codomain.dim());
        assert_eq!(cols.len(), domain.dim());
        let triplets: Vec<_> = rows
            .clone()
            .flat_map(|r| {
                self.row(r)
                    .filter(|(c, _)| cols.contains(c))
                    .map(move |(c, v)| (r, c, v.clone()))
                    .collect::<Vec<_>>()
            })
            .map(|(r, c, v)| (r - rows.start, c - cols.start, v))
            .collect();
        Self::from_triplets(domain, codomain, triplets)
    }

    pub fn domain(&self) -> SpaceTag {
        self.domain
    }

    pub fn codomain(&self) -> SpaceTag {
        self.codomain
    }

    pub fn nrows(&self) -> usize {
        self.codomain.dim()
    }

    pub fn ncols(&self) -> usize {
        self.domain.dim()
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.vals.iter().all(GaussInt::is_real)
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, &GaussInt)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[span.clone()].iter().copied().zip(&self.vals[span])
    }

    pub fn get(&self, r: usize, c: usize) -> GaussInt {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.cols[span.clone()].binary_search(&c) {
            Ok(k) => self.vals[span.start + k].clone(),
            Err(_) => GaussInt::zero(),
        }
    }

    /// Entries in `(row, col)` order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &GaussInt)> + '_ {
        (0..self.nrows()).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    /// Largest absolute real or imaginary part over all entries (0 for the zero map).
    pub fn max_abs_entry(&self) -> BigInt {
        self.vals.iter().map(GaussInt::max_abs).max().unwrap_or_default()
    }

    pub fn adjoint(&self) -> Self {
        let triplets: Vec<_> = self.triplets().map(|(r, c, v)| (c, r, v.conj())).collect();
        Self::from_triplets(self.codomain, self.domain, triplets)
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.domain == self.codomain && *self == self.adjoint()
    }

    pub fn add(&self, other: &LinearMap) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &LinearMap) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &LinearMap, op: impl Fn(&GaussInt, &GaussInt) -> GaussInt) -> Result<Self> {
        expect_space(self.domain, other.domain)?;
        expect_space(self.codomain, other.codomain)?;
        let zero = GaussInt::zero();
        let rows = (0..self.nrows())
            .map(|r| {
                let mut merged: BTreeMap<usize, GaussInt> = BTreeMap::new();
                for (c, v) in self.row(r) {
                    merged.insert(c, op(v, &zero));
                }
                for (c, v) in other.row(r) {
                    let lhs = self.get(r, c);
                    merged.insert(c, op(&lhs, v));
                }
                merged.into_iter().collect()
            })
            .collect();
        Ok(Self::from_rows(self.domain, self.codomain, rows))
    }

    pub fn scale(&self, c: &GaussInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.domain, self.codomain);
        }
        let mut out = self.clone();
        for v in &mut out.vals {
            *v = c * v;
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&GaussInt::real(-1))
    }

    /// Exact division by two; fails on the first odd entry.
    pub fn halve(&self) -> Result<Self> {
        let mut out = self.clone();
        for (k, v) in out.vals.iter_mut().enumerate() {
            *v = v.halve().ok_or_else(|| {
                let row = self.row_ptr.partition_point(|&p| p <= k) - 1;
                Error::OddEntry { row, col: self.cols[k] }
            })?;
        }
        Ok(out)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &LinearMap) -> Result<Self> {
        self.compose_with(other, Exec::default())
    }

    /// Row-wise sparse product; rows are independent, so the parallel
    /// strategy yields the same entries as the sequential one.
    pub fn compose_with(&self, other: &LinearMap, exec: Exec) -> Result<Self> {
        expect_space(self.domain, other.codomain)?;
        let rows = exec.map_range(self.nrows(), |r| {
            let mut acc: BTreeMap<usize, GaussInt> = BTreeMap::new();
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    *acc.entry(c).or_default() += &(a * b);
                }
            }
            acc.into_iter().collect()
        });
        Ok(Self::from_rows(other.domain, self.codomain, rows))
    }

    /// `MN − NM`.
    pub fn commutator(&self, other: &LinearMap) -> Result<Self> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    /// `MN + NM`.
    pub fn anticommutator(&self, other: &LinearMap) -> Result<Self> {
        self.compose(other)?.add(&other.compose(self)?)
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        expect_space(self.domain, v.space)?;
        let coeffs = (0..self.nrows())
            .map(|r| self.row(r).map(|(c, a)| a.to_complex() * v.coeffs[c]).sum())
            .collect();
        Ok(StateVector {
            space: self.codomain,
            coeffs,
        })
    }

    /// Exact product with a Gaussian-integer coefficient vector.
    pub fn apply_exact(&self, v: &[GaussInt]) -> Result<Vec<GaussInt>> {
        if v.len() != self.ncols() {
            return Err(Error::SpaceMismatch {
                expected: self.domain,
                found: self.domain.with_dim(v.len()),
            });
        }
        Ok((0..self.nrows())
            .map(|r| {
                let mut acc = GaussInt::zero();
                for (c, a) in self.row(r) {
                    acc += &(a * &v[c]);
                }
                acc
            })
            .collect())
    }

    /// Real parts as a dense matrix. Only meaningful when [`Self::is_real`].
    pub fn to_dense_real(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.nrows(), self.ncols());
        for (r, c, v) in self.triplets() {
            m[(r, c)] = v.to_complex().re;
        }
        m
    }

    pub fn to_dense_complex(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.nrows(), self.ncols());
        for (r, c, v) in self.triplets() {
            m[(r, c)] = v.to_complex();
        }
        m
    }

    /// One `(row, col, re, im)` line per stored entry, sorted by `(row, col)`.
    pub fn to_triplet_text(&self) -> String {
        let mut out = String::new();
        for (r, c, v) in self.triplets() {
            let _ = writeln!(out, "({r}, {c}, {}, {})", v.re, v.im);
        }
        out
    }

    /// Triplets as a JSON array of `[row, col, re, im]`.
    pub fn to_json(&self) -> serde_json::Value {
        self.triplets()
            .map(|(r, c, v)| serde_json::json!([r, c, int_json(&v.re), int_json(&v.im)]))
            .collect()
    }
}

/// JSON number when the value fits in 64 bits, decimal string otherwise.
pub(crate) fn int_json(v: &BigInt) -> serde_json::Value {
    match v.to_i64() {
        Some(x) => x.into(),
        None => v.to_string().into(),
    }
}

/// Dense complex coefficient vector over one of the three spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    space: SpaceTag,
    coeffs: Vec<Complex64>,
}

impl StateVector {
    pub fn new(space: SpaceTag, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != space.dim() {
            return Err(Error::SpaceMismatch {
                expected: space,
                found: space.with_dim(coeffs.len()),
            });
        }
        Ok(Self { space, coeffs })
    }

    pub fn from_real(space: SpaceTag, coeffs: &[f64]) -> Result<Self> {
        Self::new(space, coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(space: SpaceTag) -> Self {
        Self {
            space,
            coeffs: vec![Complex64::zero(); space.dim()],
        }
    }

    /// The `k`-th basis vector.
    pub fn basis(space: SpaceTag, k: usize) -> Self {
        let mut v = Self::zeros(space);
        v.coeffs[k] = Complex64::new(1.0, 0.0);
        v
    }

    /// `(f, g)ᵀ` on the direct sum.
    pub fn join(f: &StateVector, g: &StateVector) -> Result<Self> {
        let n = f.space.dim();
        let m = g.space.dim();
        expect_space(SpaceTag::Vertex(n), f.space)?;
        expect_space(SpaceTag::Edge(m), g.space)?;
        let coeffs = f.coeffs.iter().chain(&g.coeffs).copied().collect();
        Ok(Self {
            space: SpaceTag::Super { vertices: n, edges: m },
            coeffs,
        })
    }

    /// Vertex and edge parts of a super-vector.
    pub fn split(&self) -> Option<(StateVector, StateVector)> {
        let SpaceTag::Super { vertices, edges } = self.space else {
            return None;
        };
        Some((
            StateVector {
                space: SpaceTag::Vertex(vertices),
                coeffs: self.coeffs[..vertices].to_vec(),
            },
            StateVector {
                space: SpaceTag::Edge(edges),
                coeffs: self.coeffs[vertices..].to_vec(),
            },
        ))
    }

    pub fn space(&self) -> SpaceTag {
        self.space
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `⟨self, other⟩`, antilinear in the first slot.
    pub fn dot(&self, other: &StateVector) -> Complex64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: Complex64) -> StateVector {
        StateVector {
            space: self.space,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn sub(&self, other: &StateVector) -> Result<StateVector> {
        expect_space(self.space, other.space)?;
        Ok(StateVector {
            space: self.space,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}
