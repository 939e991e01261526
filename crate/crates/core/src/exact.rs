//! Exact rank and kernel computations over the rationals.
//!
//! Rows are kept as sparse integer vectors. Elimination replaces a row by
//! `p·row − c·pivot_row` and then divides out the row content, so entries
//! stay integral and small on incidence-like matrices. Gaussian-integer maps
//! go through the real embedding `[[A, −B], [B, A]]`, whose rank is twice the
//! complex rank.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::exec::Exec;
use crate::linmap::LinearMap;

pub type SparseVec = Vec<(usize, BigInt)>;

/// Below this many rows to update, a pivot step runs sequentially.
const PARALLEL_ROWS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    ncols: usize,
    rows: Vec<SparseVec>,
}

impl IntMatrix {
    /// Rows must be sorted by column; zeros are dropped.
    pub fn from_rows(ncols: usize, rows: Vec<SparseVec>) -> Self {
        let rows = rows
            .into_iter()
            .map(|r| {
                debug_assert!(r.windows(2).all(|w| w[0].0 < w[1].0));
                debug_assert!(r.iter().all(|(c, _)| *c < ncols));
                r.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        Self { ncols, rows }
    }

    /// Integer matrix of a real map. Imaginary parts are ignored.
    pub fn from_real_map(m: &LinearMap) -> Self {
        let rows = (0..m.nrows())
            .map(|r| {
                m.row(r)
                    .filter(|(_, v)| !v.re.is_zero())
                    .map(|(c, v)| (c, v.re.clone()))
                    .collect()
            })
            .collect();
        Self { ncols: m.ncols(), rows }
    }

    /// Real embedding `[[A, −B], [B, A]]` of `A + iB`.
    pub fn real_embedding(m: &LinearMap) -> Self {
        let (nr, nc) = (m.nrows(), m.ncols());
        let mut rows = vec![Vec::new(); 2 * nr];
        for r in 0..nr {
            let mut top = Vec::new();
            let mut bottom = Vec::new();
            let mut top_right = Vec::new();
            let mut bottom_right = Vec::new();
            for (c, v) in m.row(r) {
                if !v.re.is_zero() {
                    top.push((c, v.re.clone()));
                    bottom_right.push((c + nc, v.re.clone()));
                }
                if !v.im.is_zero() {
                    top_right.push((c + nc, -&v.im));
                    bottom.push((c, v.im.clone()));
                }
            }
            top.extend(top_right);
            bottom.extend(bottom_right);
            rows[r] = top;
            rows[r + nr] = bottom;
        }
        Self { ncols: 2 * nc, rows }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rank(&self) -> usize {
        self.rank_with(Exec::default())
    }

    pub fn rank_with(&self, exec: Exec) -> usize {
        eliminate_exact(&self.rows, false, exec).len()
    }

    /// Integer basis of the right kernel, one primitive sparse vector per
    /// free column, in increasing order of that column.
    pub fn nullspace(&self) -> Vec<SparseVec> {
        self.nullspace_with(Exec::default())
    }

    pub fn nullspace_with(&self, exec: Exec) -> Vec<SparseVec> {
        let pivots = eliminate_exact(&self.rows, true, exec);
        let mut is_pivot = vec![false; self.ncols];
        for p in &pivots {
            is_pivot[p.col] = true;
        }
        // Column-wise view of the reduced rows restricted to free columns.
        let mut by_free: Vec<Vec<(usize, &BigInt)>> = vec![Vec::new(); self.ncols];
        for (k, p) in pivots.iter().enumerate() {
            for (c, v) in &p.row {
                if !is_pivot[*c] {
                    by_free[*c].push((k, v));
                }
            }
        }
        (0..self.ncols)
            .filter(|&j| !is_pivot[j])
            .map(|j| {
                let scale = by_free[j]
                    .iter()
                    .fold(BigInt::one(), |acc, &(k, _)| acc.lcm(pivots[k].value()));
                let mut v: SparseVec = by_free[j]
                    .iter()
                    .map(|&(k, a)| {
                        let p = &pivots[k];
                        (p.col, -(a * &scale) / p.value())
                    })
                    .collect();
                v.push((j, scale));
                v.sort_by_key(|(c, _)| *c);
                make_primitive(&mut v);
                v
            })
            .collect()
    }
}

struct Pivot {
    col: usize,
    row: SparseVec,
}

impl Pivot {
    fn value(&self) -> &BigInt {
        let k = self
            .row
            .binary_search_by_key(&self.col, |(c, _)| *c)
            .expect("pivot entry present");
        &self.row[k].1
    }
}

fn make_primitive(row: &mut SparseVec) {
    let g = row.iter().fold(BigInt::zero(), |g, (_, v)| g.gcd(v));
    if g.is_zero() || g.is_one() {
        return;
    }
    for (_, v) in row.iter_mut() {
        *v /= &g;
    }
}

/// Integer entry type for elimination. Arithmetic returns `None` when the
/// result does not fit.
trait Entry: Clone + Send + Sync {
    fn is_nil(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn cmp_abs(&self, other: &Self) -> Ordering;
    fn gcd_with(&self, other: &Self) -> Self;
    fn div_exact(&self, other: &Self) -> Self;
    fn mul(a: &Self, x: &Self) -> Option<Self>;
    /// `a·x − b·y`
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
    /// `−b·y`
    fn neg_mul(b: &Self, y: &Self) -> Option<Self>;
}

impl Entry for i64 {
    fn is_nil(&self) -> bool {
        *self == 0
    }

    fn is_unit(&self) -> bool {
        self.unsigned_abs() == 1
    }

    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }

    fn gcd_with(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }

    fn div_exact(&self, other: &Self) -> Self {
        self / other
    }

    // i64::MIN is never produced, so negation and abs cannot overflow.
    fn mul(a: &Self, x: &Self) -> Option<Self> {
        a.checked_mul(*x).filter(|&v| v != i64::MIN)
    }

    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        a.checked_mul(*x)?
            .checked_sub(b.checked_mul(*y)?)
            .filter(|&v| v != i64::MIN)
    }

    fn neg_mul(b: &Self, y: &Self) -> Option<Self> {
        b.checked_mul(*y).filter(|&v| v != i64::MIN).map(|v| -v)
    }
}

impl Entry for BigInt {
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }

    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }

    fn gcd_with(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }

    fn div_exact(&self, other: &Self) -> Self {
        self / other
    }

    fn mul(a: &Self, x: &Self) -> Option<Self> {
        Some(a * x)
    }

    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        Some(a * x - b * y)
    }

    fn neg_mul(b: &Self, y: &Self) -> Option<Self> {
        Some(-(b * y))
    }
}

type Row<T> = Vec<(usize, T)>;

fn lookup<T>(row: &Row<T>, col: usize) -> Option<&T> {
    row.binary_search_by_key(&col, |(c, _)| *c).ok().map(|k| &row[k].1)
}

fn primitive<T: Entry>(row: &mut Row<T>) {
    let Some(first) = row.first() else {
        return;
    };
    let mut g = first.1.clone();
    for (_, v) in &row[1..] {
        if g.is_unit() {
            return;
        }
        g = g.gcd_with(v);
    }
    if !g.is_unit() {
        for (_, v) in row.iter_mut() {
            *v = v.div_exact(&g);
        }
    }
}

/// `row ← (p/g)·row − (c/g)·pivot` where `c` is the row's entry at the pivot
/// column and `g = gcd(p, c)`; the result has a zero at the pivot column.
/// Returns `false` on overflow, leaving the row unspecified.
fn reduce<T: Entry>(row: &mut Row<T>, pivot: &Row<T>, col: usize, p: &T) -> bool {
    let Some(c) = lookup(row, col).cloned() else {
        return true;
    };
    let g = p.gcd_with(&c);
    let (rm, pm) = (p.div_exact(&g), c.div_exact(&g));
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut a, mut b) = (row.iter().peekable(), pivot.iter().peekable());
    loop {
        let (col, value) = match (a.peek(), b.peek()) {
            (Some((ca, va)), Some((cb, vb))) if ca == cb => {
                let e = (*ca, T::mul_sub(&rm, va, &pm, vb));
                a.next();
                b.next();
                e
            }
            (Some((ca, va)), Some((cb, _))) if ca < cb => {
                let e = (*ca, T::mul(&rm, va));
                a.next();
                e
            }
            (Some((ca, va)), None) => {
                let e = (*ca, T::mul(&rm, va));
                a.next();
                e
            }
            (_, Some((cb, vb))) => {
                let e = (*cb, T::neg_mul(&pm, vb));
                b.next();
                e
            }
            (None, None) => break,
        };
        let Some(value) = value else {
            return false;
        };
        if !value.is_nil() {
            out.push((col, value));
        }
    }
    primitive(&mut out);
    *row = out;
    true
}

/// Sparse elimination; returns the pivot rows, or `None` on overflow. With
/// `jordan`, every pivot column is also cleared from the earlier pivot rows.
///
/// Pivots are taken from a sparsest active row, at the entry whose column
/// is shared by the fewest active rows, preferring entries of magnitude one.
fn eliminate<T: Entry>(rows: Vec<Row<T>>, jordan: bool, exec: Exec) -> Option<Vec<(usize, Row<T>)>> {
    let mut active: Vec<Row<T>> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    let ncols = active
        .iter()
        .filter_map(|r| r.last())
        .map(|(c, _)| c + 1)
        .max()
        .unwrap_or(0);
    let mut col_count = vec![0usize; ncols];
    for r in &active {
        for (c, _) in r {
            col_count[*c] += 1;
        }
    }
    let mut pivots: Vec<(usize, Row<T>)> = Vec::new();
    let overflow = AtomicBool::new(false);
    while !active.is_empty() {
        let k = (0..active.len()).min_by_key(|&k| active[k].len()).expect("non-empty");
        let row = active.swap_remove(k);
        for (c, _) in &row {
            col_count[*c] -= 1;
        }
        let (col, value) = row
            .iter()
            .min_by(|x, y| {
                (!x.1.is_unit())
                    .cmp(&!y.1.is_unit())
                    .then(col_count[x.0].cmp(&col_count[y.0]))
                    .then(x.1.cmp_abs(&y.1))
                    .then(x.0.cmp(&y.0))
            })
            .map(|(c, v)| (*c, v.clone()))
            .expect("active rows are non-empty");

        let mut targets: Vec<&mut Row<T>> = active.iter_mut().filter(|r| lookup(r, col).is_some()).collect();
        for r in &targets {
            for (c, _) in r.iter() {
                col_count[*c] -= 1;
            }
        }
        let updated = targets.len();
        if jordan {
            targets.extend(pivots.iter_mut().map(|p| &mut p.1).filter(|r| lookup(r, col).is_some()));
        }
        let exec = if targets.len() >= PARALLEL_ROWS {
            exec
        } else {
            Exec::Sequential
        };
        exec.for_each_mut(&mut targets, |r| {
            if !reduce(r, &row, col, &value) {
                overflow.store(true, AtomicOrdering::Relaxed);
            }
        });
        if overflow.load(AtomicOrdering::Relaxed) {
            return None;
        }
        for r in &targets[..updated] {
            for (c, _) in r.iter() {
                col_count[*c] += 1;
            }
        }

        active.retain(|r| !r.is_empty());
        pivots.push((col, row));
    }
    Some(pivots)
}

/// Runs on machine integers when every entry fits and nothing overflows,
/// and on arbitrary-precision integers otherwise.
fn eliminate_exact(rows: &[SparseVec], jordan: bool, exec: Exec) -> Vec<Pivot> {
    let small: Option<Vec<Row<i64>>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|(c, v)| v.to_i64().filter(|&x| x != i64::MIN).map(|x| (*c, x)))
                .collect()
        })
        .collect();
    if let Some(pivots) = small.and_then(|rows| eliminate(rows, jordan, exec)) {
        return pivots
            .into_iter()
            .map(|(col, row)| Pivot {
                col,
                row: row.into_iter().map(|(c, v)| (c, BigInt::from(v))).collect(),
            })
            .collect();
    }
    eliminate(rows.to_vec(), jordan, exec)
        .expect("arbitrary precision does not overflow")
        .into_iter()
        .map(|(col, row)| Pivot { col, row })
        .collect()
}

/// Rank over `ℚ(i)` of a Gaussian-integer map.
pub fn exact_rank(m: &LinearMap) -> usize {
    exact_rank_with(m, Exec::default())
}

pub fn exact_rank_with(m: &LinearMap, exec: Exec) -> usize {
    if m.is_real() {
        IntMatrix::from_real_map(m).rank_with(exec)
    } else {
        IntMatrix::real_embedding(m).rank_with(exec) / 2
    }
}

/// Rank of a family of sparse integer vectors living in a space of dimension `dim`.
pub fn rank_of_vectors(vectors: &[SparseVec], dim: usize) -> usize {
    IntMatrix::from_rows(dim, vectors.to_vec()).rank()
}
