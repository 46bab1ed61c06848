//! Sparse exact linear algebra: rank, kernel, image, solve, row reduction,
//! and subquotient spaces with stored projections.
//!
//! Matrices are column-major sparse; entries are always nonzero field
//! elements. Zero-row and zero-column matrices are first-class values.
//! All routines are deterministic: identical inputs produce identical
//! outputs, including basis choices.

use crate::scalar::{Field, Scalar};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

/// A sparse vector: strictly increasing row indices, nonzero entries.
pub type SparseVec = Vec<(u32, Scalar)>;

#[derive(Debug, Error, Clone)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("containment violation: vector #{index} of the claimed subspace is not in the ambient span")]
    Containment {
        index: usize,
        /// Residue after reduction; a witness that the vector escapes the span.
        witness: SparseVec,
    },
    #[error("vector does not lie in the spanned subspace")]
    NotInSpan,
}

/// dst += c * src, both sorted sparse vectors.
pub fn axpy(dst: &SparseVec, c: &Scalar, src: &SparseVec) -> SparseVec {
    if c.is_zero() || src.is_empty() {
        return dst.clone();
    }
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        if j >= src.len() || (i < dst.len() && dst[i].0 < src[j].0) {
            out.push(dst[i].clone());
            i += 1;
        } else if i >= dst.len() || src[j].0 < dst[i].0 {
            let v = c.mul(&src[j].1);
            if !v.is_zero() {
                out.push((src[j].0, v));
            }
            j += 1;
        } else {
            let v = dst[i].1.add(&c.mul(&src[j].1));
            if !v.is_zero() {
                out.push((dst[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale(v: &SparseVec, c: &Scalar) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, s)| (*i, c.mul(s))).collect()
}

/// Sparse column-major matrix over an exact field.
#[derive(Clone, PartialEq)]
pub struct SparseMat {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<SparseVec>,
}

impl std::fmt::Debug for SparseMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut s = String::new();
        write!(s, "SparseMat {}x{} over {} [", self.rows, self.cols, self.field)?;
        for (j, col) in self.data.iter().enumerate() {
            for (i, v) in col {
                write!(s, " ({i},{j})={v}")?;
            }
        }
        write!(f, "{s} ]")
    }
}

impl SparseMat {
    pub fn zero(rows: usize, cols: usize, field: Field) -> Self {
        SparseMat {
            rows,
            cols,
            field,
            data: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize, field: Field) -> Self {
        let mut m = Self::zero(n, n, field);
        for j in 0..n {
            m.data[j].push((j as u32, field.one()));
        }
        m
    }

    pub fn from_cols(rows: usize, field: Field, cols: Vec<SparseVec>) -> Self {
        for c in &cols {
            debug_assert!(c.windows(2).all(|w| w[0].0 < w[1].0));
            debug_assert!(c.iter().all(|(i, v)| (*i as usize) < rows && !v.is_zero()));
        }
        SparseMat {
            rows,
            cols: cols.len(),
            field,
            data: cols,
        }
    }

    /// Test helper: dense row-major integer entries.
    pub fn from_dense_i64(rows: usize, cols: usize, field: Field, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        let mut m = Self::zero(rows, cols, field);
        for r in 0..rows {
            for c in 0..cols {
                let v = field.from_i64(entries[r * cols + c]);
                if !v.is_zero() {
                    m.data[c].push((r as u32, v));
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn field(&self) -> Field {
        self.field
    }
    pub fn col(&self, j: usize) -> &SparseVec {
        &self.data[j]
    }
    pub fn nnz(&self) -> usize {
        self.data.iter().map(|c| c.len()).sum()
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(r < self.rows && c < self.cols);
        let col = &mut self.data[c];
        match col.binary_search_by_key(&(r as u32), |e| e.0) {
            Ok(k) => {
                if v.is_zero() {
                    col.remove(k);
                } else {
                    col[k].1 = v;
                }
            }
            Err(k) => {
                if !v.is_zero() {
                    col.insert(k, (r as u32, v));
                }
            }
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Scalar) {
        if v.is_zero() {
            return;
        }
        let col = &mut self.data[c];
        match col.binary_search_by_key(&(r as u32), |e| e.0) {
            Ok(k) => {
                let s = col[k].1.add(v);
                if s.is_zero() {
                    col.remove(k);
                } else {
                    col[k].1 = s;
                }
            }
            Err(k) => col.insert(k, (r as u32, v.clone())),
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        match self.data[c].binary_search_by_key(&(r as u32), |e| e.0) {
            Ok(k) => self.data[c][k].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn set_col(&mut self, j: usize, col: SparseVec) {
        debug_assert!(col.iter().all(|(i, v)| (*i as usize) < self.rows && !v.is_zero()));
        self.data[j] = col;
    }

    pub fn is_zero_mat(&self) -> bool {
        self.data.iter().all(|c| c.is_empty())
    }

    pub fn transpose(&self) -> SparseMat {
        let mut cols: Vec<SparseVec> = vec![Vec::new(); self.rows];
        for (j, col) in self.data.iter().enumerate() {
            for (i, v) in col {
                cols[*i as usize].push((j as u32, v.clone()));
            }
        }
        SparseMat {
            rows: self.cols,
            cols: self.rows,
            field: self.field,
            data: cols,
        }
    }

    /// Matrix product self * other.
    pub fn mat_mul(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.cols, other.rows, "mat_mul dimension mismatch");
        assert_eq!(self.field, other.field);
        let mut out = Vec::with_capacity(other.cols);
        for j in 0..other.cols {
            out.push(self.apply(other.col(j)));
        }
        SparseMat {
            rows: self.rows,
            cols: other.cols,
            field: self.field,
            data: out,
        }
    }

    /// self * v for a sparse column vector.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (j, c) in v {
            acc = axpy(&acc, c, &self.data[*j as usize]);
        }
        acc
    }

    /// Concatenate columns of `other` to the right of `self`.
    pub fn hstack(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.field, other.field);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        SparseMat {
            rows: self.rows,
            cols: self.cols + other.cols,
            field: self.field,
            data,
        }
    }

    pub fn rank(&self) -> usize {
        column_reduce(self, Track::RankOnly).rank
    }

    /// Basis of the null space; columns are independent and
    /// `cols(kernel) = cols(self) - rank(self)`.
    pub fn kernel_basis(&self) -> SparseMat {
        let red = column_reduce(self, Track::Kernel);
        SparseMat {
            rows: self.cols,
            cols: red.kernel.len(),
            field: self.field,
            data: red.kernel,
        }
    }

    /// Basis of the column space, returned as a subset of the original columns.
    pub fn image_basis(&self) -> SparseMat {
        let red = column_reduce(self, Track::RankOnly);
        let data: Vec<SparseVec> = red
            .pivot_cols
            .iter()
            .map(|&j| self.data[j].clone())
            .collect();
        SparseMat {
            rows: self.rows,
            cols: data.len(),
            field: self.field,
            data,
        }
    }

    /// Solves `self * x = v`. `Ok(None)` means the system is inconsistent.
    pub fn solve(&self, v: &SparseVec) -> Result<Option<SparseVec>, LinalgError> {
        if let Some((i, _)) = v.last() {
            if *i as usize >= self.rows {
                return Err(LinalgError::DimensionMismatch(format!(
                    "rhs touches row {} but matrix has {} rows",
                    i, self.rows
                )));
            }
        }
        Ok(Solver::new(self).solve(v))
    }

    /// Reduced row-echelon form with pivot columns and rank.
    /// The row space is preserved and the output is canonical.
    pub fn row_reduce(&self) -> Rref {
        let mut rows: Vec<SparseVec> = {
            let t = self.transpose();
            t.data
        };
        let mut pivots: Vec<usize> = Vec::new();
        let mut done: Vec<SparseVec> = Vec::new();
        // Gauss-Jordan over sparse rows; pivot on the leftmost available column.
        loop {
            // find the row with the smallest leading index among remaining rows
            let mut best: Option<(usize, u32)> = None;
            for (k, r) in rows.iter().enumerate() {
                if let Some((lead, _)) = r.first() {
                    if best.map_or(true, |(_, bl)| *lead < bl) {
                        best = Some((k, *lead));
                    }
                }
            }
            let Some((k, lead)) = best else { break };
            let mut piv = rows.swap_remove(k);
            let inv = piv[0].1.inv().expect("nonzero lead");
            piv = scale(&piv, &inv);
            for r in rows.iter_mut() {
                if let Ok(pos) = r.binary_search_by_key(&lead, |e| e.0) {
                    let c = r[pos].1.neg();
                    *r = axpy(r, &c, &piv);
                }
            }
            for d in done.iter_mut() {
                if let Ok(pos) = d.binary_search_by_key(&lead, |e| e.0) {
                    let c = d[pos].1.neg();
                    *d = axpy(d, &c, &piv);
                }
            }
            pivots.push(lead as usize);
            done.push(piv);
        }
        // sort rows by pivot column
        let mut order: Vec<usize> = (0..done.len()).collect();
        order.sort_by_key(|&i| pivots[i]);
        let rows_sorted: Vec<SparseVec> = order.iter().map(|&i| done[i].clone()).collect();
        let mut pivots_sorted: Vec<usize> = pivots.clone();
        pivots_sorted.sort_unstable();
        let rank = rows_sorted.len();
        let reduced = SparseMat {
            rows: self.cols,
            cols: self.rows,
            field: self.field,
            data: {
                let mut padded = rows_sorted;
                padded.resize(self.rows, Vec::new());
                padded
            },
        }
        .transpose();
        Rref {
            reduced,
            pivots: pivots_sorted,
            rank,
        }
    }
}

/// Kronecker product with pair indices `(i, k) -> i * rows(b) + k`,
/// `(j, l) -> j * cols(b) + l`.
pub fn kron(a: &SparseMat, b: &SparseMat) -> SparseMat {
    assert_eq!(a.field(), b.field());
    let rows = a.rows() * b.rows();
    let cols = a.cols() * b.cols();
    let mut data: Vec<SparseVec> = Vec::with_capacity(cols);
    for j in 0..a.cols() {
        for l in 0..b.cols() {
            let mut col: SparseVec = Vec::new();
            for (i, ca) in a.col(j) {
                for (k, cb) in b.col(l) {
                    col.push((
                        *i * b.rows() as u32 + *k,
                        ca.mul(cb),
                    ));
                }
            }
            col.sort_by_key(|(r, _)| *r);
            data.push(col);
        }
    }
    SparseMat {
        rows,
        cols,
        field: a.field(),
        data,
    }
}

/// Result of [`SparseMat::row_reduce`].
pub struct Rref {
    pub reduced: SparseMat,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

enum Track {
    RankOnly,
    Kernel,
}

struct ColReduction {
    rank: usize,
    pivot_cols: Vec<usize>,
    kernel: Vec<SparseVec>,
}

/// Left-to-right column reduction. Pivot of a column is its largest row
/// index; stored pivot columns are scaled to unit leading coefficient.
fn column_reduce(m: &SparseMat, track: Track) -> ColReduction {
    let mut owner: Vec<i64> = vec![-1; m.rows];
    let mut stored: Vec<SparseVec> = Vec::new();
    let mut stored_v: Vec<SparseVec> = Vec::new();
    let mut pivot_cols = Vec::new();
    let mut kernel = Vec::new();
    let track_v = matches!(track, Track::Kernel);
    for j in 0..m.cols {
        let mut cur = m.data[j].clone();
        let mut v: SparseVec = vec![(j as u32, m.field.one())];
        loop {
            let Some((low, lead)) = cur.last().map(|(i, s)| (*i as usize, s.clone())) else {
                if track_v {
                    kernel.push(v);
                }
                break;
            };
            let o = owner[low];
            if o < 0 {
                let inv = lead.inv().expect("nonzero lead");
                cur = scale(&cur, &inv);
                owner[low] = stored.len() as i64;
                stored.push(cur);
                if track_v {
                    stored_v.push(scale(&v, &inv));
                }
                pivot_cols.push(j);
                break;
            }
            let o = o as usize;
            let c = lead.neg();
            cur = axpy(&cur, &c, &stored[o]);
            if track_v {
                v = axpy(&v, &c, &stored_v[o]);
            }
        }
    }
    ColReduction {
        rank: pivot_cols.len(),
        pivot_cols,
        kernel,
    }
}

/// Cached reduction of a matrix for repeated linear solves.
pub struct Solver {
    owner: Vec<i64>,
    stored: Vec<SparseVec>,
    stored_v: Vec<SparseVec>,
}

impl Solver {
    pub fn new(m: &SparseMat) -> Solver {
        let mut owner: Vec<i64> = vec![-1; m.rows];
        let mut stored: Vec<SparseVec> = Vec::new();
        let mut stored_v: Vec<SparseVec> = Vec::new();
        for j in 0..m.cols {
            let mut cur = m.data[j].clone();
            let mut v: SparseVec = vec![(j as u32, m.field.one())];
            loop {
                let Some((low, lead)) = cur.last().map(|(i, s)| (*i as usize, s.clone())) else {
                    break;
                };
                let o = owner[low];
                if o < 0 {
                    let inv = lead.inv().expect("nonzero lead");
                    owner[low] = stored.len() as i64;
                    stored.push(scale(&cur, &inv));
                    stored_v.push(scale(&v, &inv));
                    break;
                }
                let o = o as usize;
                let c = lead.neg();
                cur = axpy(&cur, &c, &stored[o]);
                v = axpy(&v, &c, &stored_v[o]);
            }
        }
        Solver {
            owner,
            stored,
            stored_v,
        }
    }

    /// Returns `x` with `m * x = v`, or `None` if inconsistent.
    pub fn solve(&self, v: &SparseVec) -> Option<SparseVec> {
        let mut cur = v.clone();
        let mut x: SparseVec = Vec::new();
        loop {
            let Some((low, lead)) = cur.last().map(|(i, s)| (*i as usize, s.clone())) else {
                return Some(x);
            };
            let o = self.owner[low];
            if o < 0 {
                return None;
            }
            let o = o as usize;
            x = axpy(&x, &lead, &self.stored_v[o]);
            let c = lead.neg();
            cur = axpy(&cur, &c, &self.stored[o]);
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RowTag {
    Small,
    Big,
}

struct EchRow {
    vec: SparseVec,
    tag: RowTag,
    /// Position among rows of the same tag, in insertion order.
    ordinal: usize,
}

/// Incremental sparse row echelon. Each stored row has unit leading
/// coefficient at its smallest support index, and pivots are unique.
pub struct Echelon {
    field: Field,
    ambient: usize,
    rows: Vec<EchRow>,
    pivot_row: BTreeMap<u32, usize>,
    tag_counts: [usize; 2],
}

impl Echelon {
    pub fn new(ambient: usize, field: Field) -> Echelon {
        Echelon {
            field,
            ambient,
            rows: Vec::new(),
            pivot_row: BTreeMap::new(),
            tag_counts: [0, 0],
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Reduces `v` against the echelon, returning the residue and the
    /// coefficients used, as pairs (row index, coefficient).
    pub fn express(&self, v: &SparseVec) -> (SparseVec, Vec<(usize, Scalar)>) {
        let mut cur = v.clone();
        let mut coeffs: Vec<(usize, Scalar)> = Vec::new();
        let mut residue: SparseVec = Vec::new();
        loop {
            let Some((idx, c)) = cur.first().map(|(i, s)| (*i, s.clone())) else {
                break;
            };
            match self.pivot_row.get(&idx) {
                Some(&r) => {
                    coeffs.push((r, c.clone()));
                    cur = axpy(&cur, &c.neg(), &self.rows[r].vec);
                }
                None => {
                    residue.push((idx, c));
                    cur.remove(0);
                }
            }
        }
        // `coeffs` may mention a row several times if reduction reintroduced
        // its pivot; merge.
        coeffs.sort_by_key(|(r, _)| *r);
        let mut merged: Vec<(usize, Scalar)> = Vec::new();
        for (r, c) in coeffs {
            match merged.last_mut() {
                Some((lr, lc)) if *lr == r => *lc = lc.add(&c),
                _ => merged.push((r, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        (residue, merged)
    }

    /// Inserts a vector; returns the new row's index if it enlarged the span.
    pub fn insert(&mut self, v: &SparseVec, tag: RowTag) -> Option<usize> {
        debug_assert!(v.iter().all(|(i, _)| (*i as usize) < self.ambient));
        let (residue, _) = self.express(v);
        if residue.is_empty() {
            return None;
        }
        let inv = residue[0].1.inv().expect("nonzero lead");
        let vec = scale(&residue, &inv);
        let pivot = vec[0].0;
        let tag_slot = match tag {
            RowTag::Small => 0,
            RowTag::Big => 1,
        };
        let ordinal = self.tag_counts[tag_slot];
        self.tag_counts[tag_slot] += 1;
        let idx = self.rows.len();
        self.rows.push(EchRow { vec, tag, ordinal });
        self.pivot_row.insert(pivot, idx);
        Some(idx)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// A subquotient `span(big) / span(small)` of an ambient coordinate space,
/// with a stored projection onto class coordinates.
///
/// The representative basis consists of echelon rows generated while
/// inserting the `big` spanning set after the `small` one; the projection
/// vanishes exactly on `span(small)` and is the identity on class
/// coordinates of the representatives.
pub struct Subquotient {
    field: Field,
    ambient: usize,
    dim: usize,
    ech: Echelon,
    reps: Vec<SparseVec>,
}

impl Subquotient {
    /// `small` and `big` are spanning sets; requires span(small) ⊆ span(big),
    /// which is checked, with a witness vector reported on violation.
    pub fn new(
        ambient: usize,
        field: Field,
        small: &[SparseVec],
        big: &[SparseVec],
    ) -> Result<Subquotient, LinalgError> {
        // containment check: every small vector must lie in span(big)
        let mut big_ech = Echelon::new(ambient, field);
        for b in big {
            big_ech.insert(b, RowTag::Big);
        }
        for (k, s) in small.iter().enumerate() {
            let (residue, _) = big_ech.express(s);
            if !residue.is_empty() {
                return Err(LinalgError::Containment {
                    index: k,
                    witness: residue,
                });
            }
        }
        let mut ech = Echelon::new(ambient, field);
        for s in small {
            ech.insert(s, RowTag::Small);
        }
        let mut reps: Vec<SparseVec> = Vec::new();
        for b in big {
            if let Some(idx) = ech.insert(b, RowTag::Big) {
                reps.push(ech.rows[idx].vec.clone());
            }
        }
        let dim = reps.len();
        Ok(Subquotient {
            field,
            ambient,
            dim,
            ech,
            reps,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Class coordinates of `v ∈ span(big)` with respect to the
    /// representative basis. Errors if `v` is outside `span(big)`.
    pub fn project(&self, v: &SparseVec) -> Result<SparseVec, LinalgError> {
        let (residue, coeffs) = self.ech.express(v);
        if !residue.is_empty() {
            return Err(LinalgError::NotInSpan);
        }
        let mut out: SparseVec = Vec::new();
        for (r, c) in coeffs {
            let row = &self.ech.rows[r];
            if row.tag == RowTag::Big {
                out.push((row.ordinal as u32, c));
            }
        }
        out.sort_by_key(|(i, _)| *i);
        Ok(out)
    }

    /// Ambient representative of the i-th class basis vector.
    pub fn representative(&self, i: usize) -> &SparseVec {
        &self.reps[i]
    }

    /// The representatives as the columns of an ambient × dim matrix.
    pub fn representative_matrix(&self) -> SparseMat {
        SparseMat::from_cols(self.ambient, self.field, self.reps.clone())
    }

    /// The projection as a dim × ambient matrix (columns are projections of
    /// ambient unit vectors). Only meaningful when span(big) is the whole
    /// ambient space or callers stay inside span(big).
    pub fn projection_matrix(&self) -> Result<SparseMat, LinalgError> {
        let mut cols = Vec::with_capacity(self.ambient);
        for j in 0..self.ambient {
            let unit: SparseVec = vec![(j as u32, self.field.one())];
            cols.push(self.project(&unit)?);
        }
        Ok(SparseMat::from_cols(self.dim, self.field, cols))
    }
}

/// Quotient of a full coordinate space by the span of a relation set, with
/// projection and section matrices satisfying `proj * section = identity`.
pub struct QuotientSpace {
    pub ambient: usize,
    pub dim: usize,
    pub field: Field,
    /// dim × ambient
    pub proj: SparseMat,
    /// ambient × dim; maps class basis vectors to ambient representatives.
    pub section: SparseMat,
}

impl QuotientSpace {
    pub fn from_relations(ambient: usize, field: Field, relations: &[SparseVec]) -> QuotientSpace {
        let mut ech = Echelon::new(ambient, field);
        for r in relations {
            ech.insert(r, RowTag::Small);
        }
        // class coordinates = ambient coordinates that are not pivots
        let mut class_cols: Vec<u32> = Vec::new();
        for j in 0..ambient as u32 {
            if !ech.pivot_row.contains_key(&j) {
                class_cols.push(j);
            }
        }
        let dim = class_cols.len();
        let mut class_of: BTreeMap<u32, u32> = BTreeMap::new();
        for (k, j) in class_cols.iter().enumerate() {
            class_of.insert(*j, k as u32);
        }
        let mut proj_cols: Vec<SparseVec> = Vec::with_capacity(ambient);
        for j in 0..ambient as u32 {
            if let Some(&k) = class_of.get(&j) {
                proj_cols.push(vec![(k, field.one())]);
            } else {
                let unit: SparseVec = vec![(j, field.one())];
                let (residue, _) = ech.express(&unit);
                let mut col: SparseVec = residue
                    .iter()
                    .map(|(i, c)| (class_of[i], c.clone()))
                    .collect();
                col.sort_by_key(|(i, _)| *i);
                proj_cols.push(col);
            }
        }
        let proj = SparseMat::from_cols(dim, field, proj_cols);
        let section_cols: Vec<SparseVec> = class_cols
            .iter()
            .map(|&j| vec![(j, field.one())])
            .collect();
        let section = SparseMat::from_cols(ambient, field, section_cols);
        QuotientSpace {
            ambient,
            dim,
            field,
            proj,
            section,
        }
    }

    /// Identity quotient (no relations) of the given ambient dimension.
    pub fn trivial(ambient: usize, field: Field) -> QuotientSpace {
        QuotientSpace {
            ambient,
            dim: ambient,
            field,
            proj: SparseMat::identity(ambient, field),
            section: SparseMat::identity(ambient, field),
        }
    }
}
