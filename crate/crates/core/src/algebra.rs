//! Finite-dimensional algebras with explicit bases and structure constants,
//! compiled from bound quiver presentations, and split extensions
//! `A = B ⊕ M` presented by a marked arrow set.

use crate::linalg::{Echelon, RowTag, SparseMat, SparseVec};
use crate::quiver::{Path, QuiverSpec};
use crate::scalar::Field;
use std::sync::Arc;
use thiserror::Error;

/// A finite-dimensional associative algebra given by a basis and a
/// multiplication table, together with an orthogonal idempotent
/// decomposition of the unit.
///
/// `basic_split` records that the semisimple quotient splits as a product of
/// copies of the base field indexed by the idempotents; this is what vertex
/// simples and global-dimension computations rely on.
#[derive(Clone)]
pub struct Algebra {
    pub field: Field,
    pub dim: usize,
    pub labels: Vec<String>,
    /// mul[i][j] = coordinates of basis_i * basis_j.
    mul: Vec<Vec<SparseVec>>,
    /// Basis indices of the orthogonal idempotents summing to 1.
    pub idempotents: Vec<usize>,
    /// Columns spanning the Jacobson radical, when known.
    pub radical: Option<SparseMat>,
    pub basic_split: bool,
}

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("arrow ideal is not nilpotent at length cap {cap}; surviving length-{cap} classes: {survivors:?}")]
    NotNilpotentAtCap { cap: usize, survivors: Vec<String> },
    #[error("associativity fails on basis triple ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
    #[error("multiplication table is not closed or malformed: {0}")]
    MalformedTable(String),
    #[error("spec error: {0}")]
    Spec(#[from] crate::quiver::SpecError),
    #[error("budget exceeded: {0}")]
    Budget(String),
}

impl Algebra {
    /// Builds an algebra from a raw multiplication table. All structural
    /// invariants (closure, associativity, idempotents) are re-verified.
    pub fn from_table(
        field: Field,
        labels: Vec<String>,
        mul: Vec<Vec<SparseVec>>,
        idempotents: Vec<usize>,
        radical: Option<SparseMat>,
        basic_split: bool,
    ) -> Result<Algebra, AlgebraError> {
        let dim = labels.len();
        if mul.len() != dim || mul.iter().any(|r| r.len() != dim) {
            return Err(AlgebraError::MalformedTable(format!(
                "table shape is not {dim} x {dim}"
            )));
        }
        let alg = Algebra {
            field,
            dim,
            labels,
            mul,
            idempotents,
            radical,
            basic_split,
        };
        alg.verify()?;
        Ok(alg)
    }

    fn verify(&self) -> Result<(), AlgebraError> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                if self.mul[i][j]
                    .iter()
                    .any(|(k, _)| *k as usize >= self.dim)
                {
                    return Err(AlgebraError::MalformedTable(format!(
                        "product {} * {} leaves the basis span",
                        self.labels[i], self.labels[j]
                    )));
                }
            }
        }
        // orthogonal idempotents summing to 1
        let one = self.unit();
        for &e in &self.idempotents {
            let ee = self.mul[e][e].clone();
            if ee != vec![(e as u32, self.field.one())] {
                return Err(AlgebraError::MalformedTable(format!(
                    "{} is not idempotent",
                    self.labels[e]
                )));
            }
        }
        for &e in &self.idempotents {
            for &f in &self.idempotents {
                if e != f && !self.mul[e][f].is_empty() {
                    return Err(AlgebraError::MalformedTable(format!(
                        "idempotents {} and {} are not orthogonal",
                        self.labels[e], self.labels[f]
                    )));
                }
            }
        }
        for j in 0..self.dim {
            let unit_j: SparseVec = vec![(j as u32, self.field.one())];
            if self.mul_elements(&one, &unit_j) != unit_j
                || self.mul_elements(&unit_j, &one) != unit_j
            {
                return Err(AlgebraError::MalformedTable(format!(
                    "unit does not act as identity on {}",
                    self.labels[j]
                )));
            }
        }
        // exhaustive associativity on basis triples
        for i in 0..self.dim {
            for j in 0..self.dim {
                let ij = self.mul[i][j].clone();
                for k in 0..self.dim {
                    let jk = &self.mul[j][k];
                    let left = self.mul_coords_right(&ij, k);
                    let right = self.mul_coords_left(i, jk);
                    if left != right {
                        return Err(AlgebraError::NotAssociative(
                            self.labels[i].clone(),
                            self.labels[j].clone(),
                            self.labels[k].clone(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn unit(&self) -> SparseVec {
        let mut v: SparseVec = self
            .idempotents
            .iter()
            .map(|&e| (e as u32, self.field.one()))
            .collect();
        v.sort_by_key(|(i, _)| *i);
        v
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &SparseVec {
        &self.mul[i][j]
    }

    /// x * basis_k
    fn mul_coords_right(&self, x: &SparseVec, k: usize) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (i, c) in x {
            acc = crate::linalg::axpy(&acc, c, &self.mul[*i as usize][k]);
        }
        acc
    }

    /// basis_i * y
    fn mul_coords_left(&self, i: usize, y: &SparseVec) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (j, c) in y {
            acc = crate::linalg::axpy(&acc, c, &self.mul[i][*j as usize]);
        }
        acc
    }

    pub fn mul_elements(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (i, c) in x {
            let row = self.mul_coords_left(*i as usize, y);
            acc = crate::linalg::axpy(&acc, c, &row);
        }
        acc
    }

    /// Matrix of left multiplication by basis_g.
    pub fn left_mul_matrix(&self, g: usize) -> SparseMat {
        let cols = (0..self.dim).map(|j| self.mul[g][j].clone()).collect();
        SparseMat::from_cols(self.dim, self.field, cols)
    }

    /// Matrix of right multiplication by basis_g.
    pub fn right_mul_matrix(&self, g: usize) -> SparseMat {
        let cols = (0..self.dim).map(|j| self.mul[j][g].clone()).collect();
        SparseMat::from_cols(self.dim, self.field, cols)
    }

    /// The opposite algebra on the same basis.
    pub fn opposite(&self) -> Algebra {
        let mul = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.mul[j][i].clone()).collect())
            .collect();
        Algebra {
            field: self.field,
            dim: self.dim,
            labels: self.labels.clone(),
            mul,
            idempotents: self.idempotents.clone(),
            radical: self.radical.clone(),
            basic_split: self.basic_split,
        }
    }

    /// Tensor product of algebras over the base field; basis pairs are
    /// indexed by `i * dim(other) + j`.
    pub fn tensor(&self, other: &Algebra) -> Algebra {
        assert_eq!(self.field, other.field, "tensor over mismatched fields");
        let d1 = self.dim;
        let d2 = other.dim;
        let dim = d1 * d2;
        let mut labels = Vec::with_capacity(dim);
        for i in 0..d1 {
            for j in 0..d2 {
                labels.push(format!("{}(x){}", self.labels[i], other.labels[j]));
            }
        }
        let pair = |i: usize, j: usize| -> u32 { (i * d2 + j) as u32 };
        let mut mul: Vec<Vec<SparseVec>> = vec![vec![Vec::new(); dim]; dim];
        for i in 0..d1 {
            for j in 0..d2 {
                for i2 in 0..d1 {
                    for j2 in 0..d2 {
                        let a = &self.mul[i][i2];
                        let b = &other.mul[j][j2];
                        let mut out: SparseVec = Vec::with_capacity(a.len() * b.len());
                        for (ka, ca) in a {
                            for (kb, cb) in b {
                                out.push((pair(*ka as usize, *kb as usize), ca.mul(cb)));
                            }
                        }
                        out.sort_by_key(|(k, _)| *k);
                        mul[(i * d2 + j) as usize][(i2 * d2 + j2) as usize] = out;
                    }
                }
            }
        }
        let mut idempotents = Vec::new();
        for &e in &self.idempotents {
            for &f in &other.idempotents {
                idempotents.push((e * d2 + f) as usize);
            }
        }
        idempotents.sort_unstable();
        // rad(A (x) B) = rad A (x) B + A (x) rad B, valid because the
        // semisimple quotients here are split products of the base field.
        let radical = match (&self.radical, &other.radical) {
            (Some(ra), Some(rb)) => {
                let mut cols: Vec<SparseVec> = Vec::new();
                for c in 0..ra.cols() {
                    let col = ra.col(c);
                    for j in 0..d2 {
                        let mut v: SparseVec = col
                            .iter()
                            .map(|(i, s)| (pair(*i as usize, j), s.clone()))
                            .collect();
                        v.sort_by_key(|(k, _)| *k);
                        cols.push(v);
                    }
                }
                for c in 0..rb.cols() {
                    let col = rb.col(c);
                    for i in 0..d1 {
                        let mut v: SparseVec = col
                            .iter()
                            .map(|(j, s)| (pair(i, *j as usize), s.clone()))
                            .collect();
                        v.sort_by_key(|(k, _)| *k);
                        cols.push(v);
                    }
                }
                Some(SparseMat::from_cols(dim, self.field, cols))
            }
            _ => None,
        };
        Algebra {
            field: self.field,
            dim,
            labels,
            mul,
            idempotents,
            radical,
            basic_split: self.basic_split && other.basic_split,
        }
    }

    /// The semisimple commutative algebra k^n on orthogonal idempotents.
    pub fn product_of_fields(field: Field, labels: Vec<String>) -> Algebra {
        let dim = labels.len();
        let mut mul: Vec<Vec<SparseVec>> = vec![vec![Vec::new(); dim]; dim];
        for (i, row) in mul.iter_mut().enumerate() {
            row[i] = vec![(i as u32, field.one())];
        }
        Algebra {
            field,
            dim,
            labels,
            mul,
            idempotents: (0..dim).collect(),
            radical: Some(SparseMat::zero(dim, 0, field)),
            basic_split: true,
        }
    }

    /// True when the basis consists exactly of the orthogonal idempotents
    /// (the vertex-span case), enabling the fast tensor path.
    pub fn is_idempotent_basis(&self) -> bool {
        self.idempotents.len() == self.dim
    }
}

/// A compiled bound quiver algebra: the algebra together with the
/// representative path of each basis class.
#[derive(Clone)]
pub struct CompiledAlgebra {
    pub algebra: Arc<Algebra>,
    pub spec: QuiverSpec,
    /// `paths[i]` is the path representing basis class `i`.
    pub paths: Vec<Path>,
}

/// Compiles a quiver with admissible relations into a basis-and-structure-
/// constants algebra by linear algebra on the path space filtered by length
/// up to the spec's cap.
///
/// The basis consists of the lexicographically smallest surviving paths.
/// Fails if the arrow ideal is still nonzero at the cap. For relations whose
/// terms all have equal length the filtered closure is exact; mixed-length
/// relations may require a larger cap to close.
pub fn compile_algebra(spec: &QuiverSpec) -> Result<CompiledAlgebra, AlgebraError> {
    let field = spec.field;
    let cap = spec.length_cap;
    let paths = QuiverSpec::paths_up_to(&spec.quiver, cap, 500_000)?;
    let n = paths.len();
    let path_index = |p: &Path| -> Option<usize> { paths.binary_search_by(|q| cmp_paths(q, p)).ok() };

    // Relation ideal saturated by path multiplication on both sides, within
    // the length filtration. Coordinates are reversed so echelon pivots land
    // on the largest paths and survivors are the smallest.
    let rev = |i: usize| -> u32 { (n - 1 - i) as u32 };
    let mut ech = Echelon::new(n, field);
    for rel in &spec.relations {
        for u in &paths {
            if u.target != rel.source() {
                continue;
            }
            'w: for w in &paths {
                if w.source != rel.target() {
                    continue;
                }
                let mut vec_rev: SparseVec = Vec::new();
                for term in &rel.terms {
                    let total = u.len() + term.path.len() + w.len();
                    if total > cap {
                        // keep saturation uniform across terms
                        continue 'w;
                    }
                    let p = u.then(&term.path).unwrap().then(w).unwrap();
                    let k = path_index(&p).expect("saturated path enumerated");
                    vec_rev.push((rev(k), term.coeff.clone()));
                }
                vec_rev.sort_by_key(|(i, _)| *i);
                vec_rev = merge_dups(vec_rev);
                ech.insert(&vec_rev, RowTag::Small);
            }
        }
    }

    // classes of length-cap paths must vanish, otherwise the arrow ideal is
    // not nilpotent within the cap
    let mut survivors_at_cap = Vec::new();
    for (k, p) in paths.iter().enumerate() {
        if p.len() == cap {
            let unit: SparseVec = vec![(rev(k), field.one())];
            let (residue, _) = ech.express(&unit);
            if !residue.is_empty() {
                survivors_at_cap.push(p.label(&spec.quiver));
            }
        }
    }
    if !survivors_at_cap.is_empty() {
        return Err(AlgebraError::NotNilpotentAtCap {
            cap,
            survivors: survivors_at_cap,
        });
    }

    // surviving basis classes = paths whose reversed coordinate is not a pivot
    let mut basis_paths: Vec<Path> = Vec::new();
    let mut class_of_path: Vec<Option<usize>> = vec![None; n];
    for (k, p) in paths.iter().enumerate() {
        let unit: SparseVec = vec![(rev(k), field.one())];
        let (residue, _) = ech.express(&unit);
        if residue == unit {
            class_of_path[k] = Some(basis_paths.len());
            basis_paths.push(p.clone());
        }
    }
    let dim = basis_paths.len();

    // expresses a path-space vector (ordinary coordinates) in the class basis
    let express_classes = |v: &SparseVec| -> SparseVec {
        let mut rv: SparseVec = v.iter().map(|(i, c)| (rev(*i as usize), c.clone())).collect();
        rv.sort_by_key(|(i, _)| *i);
        let (residue, _) = ech.express(&rv);
        let mut out: SparseVec = residue
            .iter()
            .map(|(ri, c)| {
                let k = n - 1 - *ri as usize;
                (
                    class_of_path[k].expect("residue supported on survivors") as u32,
                    c.clone(),
                )
            })
            .collect();
        out.sort_by_key(|(i, _)| *i);
        out
    };

    let mut mul: Vec<Vec<SparseVec>> = vec![vec![Vec::new(); dim]; dim];
    for (i, p) in basis_paths.iter().enumerate() {
        for (j, q) in basis_paths.iter().enumerate() {
            // basis_i * basis_j = "first q, then p"
            if q.target != p.source {
                continue;
            }
            let prod = q.then(p).unwrap();
            if prod.len() >= cap {
                continue; // zero: arrow ideal vanishes from the cap on
            }
            let k = path_index(&prod).expect("product within cap enumerated");
            mul[i][j] = express_classes(&vec![(k as u32, field.one())]);
        }
    }

    let labels: Vec<String> = basis_paths.iter().map(|p| p.label(&spec.quiver)).collect();
    let idempotents: Vec<usize> = (0..spec.quiver.vertices.len()).collect();
    let radical_cols: Vec<SparseVec> = (0..dim)
        .filter(|&i| !basis_paths[i].is_empty())
        .map(|i| vec![(i as u32, field.one())])
        .collect();
    let radical = SparseMat::from_cols(dim, field, radical_cols);
    let algebra = Algebra::from_table(field, labels, mul, idempotents, Some(radical), true)?;
    Ok(CompiledAlgebra {
        algebra: Arc::new(algebra),
        spec: spec.clone(),
        paths: basis_paths,
    })
}

fn cmp_paths(a: &Path, b: &Path) -> std::cmp::Ordering {
    (a.len(), &a.arrows, a.source).cmp(&(b.len(), &b.arrows, b.source))
}

fn merge_dups(v: SparseVec) -> SparseVec {
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, c) in v {
        match out.last_mut() {
            Some((li, lc)) if *li == i => *lc = lc.add(&c),
            _ => out.push((i, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

/// A split extension `A = B ⊕ M`: `B` a unital subalgebra spanned by basis
/// classes, `M` a two-sided ideal spanned by the complementary classes, and
/// the retraction onto `B` along `M`.
#[derive(Clone)]
pub struct SplitExtension {
    pub algebra: Arc<Algebra>,
    pub b_indices: Vec<usize>,
    pub m_indices: Vec<usize>,
    /// `B` as a standalone algebra on the `b_indices` classes, in order.
    pub b_algebra: Arc<Algebra>,
    /// Retraction A -> B as a dim(B) x dim(A) matrix.
    pub pi: SparseMat,
    /// Inclusion B -> A as a dim(A) x dim(B) matrix.
    pub inclusion: SparseMat,
}

/// First violated split-extension axiom, with witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplitViolation {
    NotPartition,
    UnitNotInB,
    BNotClosed { i: String, j: String },
    MNotLeftIdeal { a: String, m: String },
    MNotRightIdeal { m: String, a: String },
    PiNotMultiplicative { i: String, j: String },
}

impl std::fmt::Display for SplitViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SplitViolation::NotPartition => write!(f, "index sets do not partition the basis"),
            SplitViolation::UnitNotInB => write!(f, "unit not in B"),
            SplitViolation::BNotClosed { i, j } => {
                write!(f, "B not closed under multiplication: {i} * {j} leaves B")
            }
            SplitViolation::MNotLeftIdeal { a, m } => {
                write!(f, "A*M not contained in M: {a} * {m} leaves M")
            }
            SplitViolation::MNotRightIdeal { m, a } => {
                write!(f, "M*A not contained in M: {m} * {a} leaves M")
            }
            SplitViolation::PiNotMultiplicative { i, j } => {
                write!(f, "projection is not multiplicative on ({i}, {j})")
            }
        }
    }
}

/// Verifies every split-extension axiom independently; returns the first
/// violation, or `None` when all hold.
pub fn check_split(alg: &Algebra, b_set: &[usize], m_set: &[usize]) -> Option<SplitViolation> {
    let dim = alg.dim;
    let mut seen = vec![false; dim];
    for &i in b_set.iter().chain(m_set.iter()) {
        if i >= dim || seen[i] {
            return Some(SplitViolation::NotPartition);
        }
        seen[i] = true;
    }
    if !seen.iter().all(|&s| s) {
        return Some(SplitViolation::NotPartition);
    }
    let in_b = |k: u32| b_set.contains(&(k as usize));
    let in_m = |k: u32| m_set.contains(&(k as usize));
    if !alg.unit().iter().all(|(k, _)| in_b(*k)) {
        return Some(SplitViolation::UnitNotInB);
    }
    for &i in b_set {
        for &j in b_set {
            if !alg.basis_product(i, j).iter().all(|(k, _)| in_b(*k)) {
                return Some(SplitViolation::BNotClosed {
                    i: alg.labels[i].clone(),
                    j: alg.labels[j].clone(),
                });
            }
        }
    }
    for a in 0..dim {
        for &m in m_set {
            if !alg.basis_product(a, m).iter().all(|(k, _)| in_m(*k)) {
                return Some(SplitViolation::MNotLeftIdeal {
                    a: alg.labels[a].clone(),
                    m: alg.labels[m].clone(),
                });
            }
            if !alg.basis_product(m, a).iter().all(|(k, _)| in_m(*k)) {
                return Some(SplitViolation::MNotRightIdeal {
                    m: alg.labels[m].clone(),
                    a: alg.labels[a].clone(),
                });
            }
        }
    }
    // multiplicativity of the coordinate retraction
    for i in 0..dim {
        for j in 0..dim {
            let full = alg.basis_product(i, j);
            let projected: SparseVec = full
                .iter()
                .filter(|(k, _)| in_b(*k))
                .cloned()
                .collect();
            let expected = if in_b(i as u32) && in_b(j as u32) {
                full.clone()
            } else {
                Vec::new()
            };
            if projected != expected {
                return Some(SplitViolation::PiNotMultiplicative {
                    i: alg.labels[i].clone(),
                    j: alg.labels[j].clone(),
                });
            }
        }
    }
    None
}

#[derive(Debug, Error)]
#[error("marked arrows do not present a split extension: {violation}")]
pub struct SplitError {
    pub violation: SplitViolation,
}

/// Presents `A = B ⊕ M` from the compiled algebra of a marked quiver spec:
/// `B` is spanned by the basis classes using no marked arrow, `M` by those
/// using at least one. Errors when the relation ideal mixes the two spans.
pub fn split_from_marked(compiled: &CompiledAlgebra) -> Result<SplitExtension, SplitError> {
    let alg = &compiled.algebra;
    let marked = &compiled.spec.marked;
    let mut b_indices = Vec::new();
    let mut m_indices = Vec::new();
    for (i, p) in compiled.paths.iter().enumerate() {
        if p.arrows.iter().any(|a| marked.contains(a)) {
            m_indices.push(i);
        } else {
            b_indices.push(i);
        }
    }
    if let Some(violation) = check_split(alg, &b_indices, &m_indices) {
        return Err(SplitError { violation });
    }
    Ok(build_split(alg.clone(), b_indices, m_indices))
}

/// Assembles the split-extension data once the axioms are known to hold.
pub fn build_split(alg: Arc<Algebra>, b_indices: Vec<usize>, m_indices: Vec<usize>) -> SplitExtension {
    let field = alg.field;
    let dim_b = b_indices.len();
    let pos_in_b = |k: usize| -> Option<usize> { b_indices.iter().position(|&x| x == k) };
    // B as standalone algebra
    let labels_b: Vec<String> = b_indices.iter().map(|&i| alg.labels[i].clone()).collect();
    let mut mul_b: Vec<Vec<SparseVec>> = vec![vec![Vec::new(); dim_b]; dim_b];
    for (bi, &i) in b_indices.iter().enumerate() {
        for (bj, &j) in b_indices.iter().enumerate() {
            let prod = alg.basis_product(i, j);
            let mut v: SparseVec = prod
                .iter()
                .map(|(k, c)| (pos_in_b(*k as usize).expect("B closed") as u32, c.clone()))
                .collect();
            v.sort_by_key(|(k, _)| *k);
            mul_b[bi][bj] = v;
        }
    }
    let idem_b: Vec<usize> = alg
        .idempotents
        .iter()
        .map(|&e| pos_in_b(e).expect("idempotents lie in B"))
        .collect();
    let radical_b = alg.radical.as_ref().map(|r| {
        // restrict radical columns supported inside B
        let mut cols = Vec::new();
        for c in 0..r.cols() {
            let col = r.col(c);
            if col.iter().all(|(k, _)| pos_in_b(*k as usize).is_some()) {
                let mut v: SparseVec = col
                    .iter()
                    .map(|(k, s)| (pos_in_b(*k as usize).unwrap() as u32, s.clone()))
                    .collect();
                v.sort_by_key(|(k, _)| *k);
                cols.push(v);
            }
        }
        SparseMat::from_cols(dim_b, field, cols)
    });
    let b_algebra = Algebra::from_table(
        field,
        labels_b,
        mul_b,
        idem_b,
        radical_b,
        alg.basic_split,
    )
    .expect("B inherits the algebra axioms");

    let mut pi = SparseMat::zero(dim_b, alg.dim, field);
    for (bi, &i) in b_indices.iter().enumerate() {
        pi.set(bi, i, field.one());
    }
    let mut inclusion = SparseMat::zero(alg.dim, dim_b, field);
    for (bi, &i) in b_indices.iter().enumerate() {
        inclusion.set(i, bi, field.one());
    }
    SplitExtension {
        algebra: alg,
        b_indices,
        m_indices,
        b_algebra: Arc::new(b_algebra),
        pi,
        inclusion,
    }
}

impl SplitExtension {
    /// Decomposition a = a_B + a_M in A-coordinates.
    pub fn decompose(&self, a: &SparseVec) -> (SparseVec, SparseVec) {
        let mut b_part: SparseVec = Vec::new();
        let mut m_part: SparseVec = Vec::new();
        for (k, c) in a {
            if self.b_indices.contains(&(*k as usize)) {
                b_part.push((*k, c.clone()));
            } else {
                m_part.push((*k, c.clone()));
            }
        }
        (b_part, m_part)
    }

    /// The M-component in A-coordinates of a basis element of A.
    pub fn m_component_of_basis(&self, k: usize) -> Option<usize> {
        if self.m_indices.contains(&k) {
            Some(k)
        } else {
            None
        }
    }

    pub fn dim_m(&self) -> usize {
        self.m_indices.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::QuiverSpec;

    pub(crate) const A2: &str = r#"
field = "Q"
vertices = ["1", "2"]
marked = ["a"]

[[arrows]]
name = "a"
source = "1"
target = "2"
"#;

    pub(crate) const DUAL_NUMBERS: &str = r#"
field = "Q"
vertices = ["1"]
marked = ["x"]

[[arrows]]
name = "x"
source = "1"
target = "1"

[[relations]]
terms = [{ coeff = "1", path = ["x", "x"] }]
"#;

    pub(crate) const A3_REL: &str = r#"
field = "Q"
vertices = ["1", "2", "3"]
marked = ["b"]

[[arrows]]
name = "a"
source = "1"
target = "2"

[[arrows]]
name = "b"
source = "2"
target = "3"

[[relations]]
terms = [{ coeff = "1", path = ["a", "b"] }]
"#;

    #[test]
    fn compile_a2() {
        let spec = QuiverSpec::parse(A2).unwrap();
        let c = compile_algebra(&spec).unwrap();
        assert_eq!(c.algebra.dim, 3);
        assert_eq!(c.algebra.labels, vec!["e1", "e2", "a"]);
        // e2 * a = a (first a, then e2), a * e1 = a, a * a = 0
        let one = Field::Rational.one();
        assert_eq!(c.algebra.basis_product(1, 2), &vec![(2u32, one.clone())]);
        assert_eq!(c.algebra.basis_product(2, 0), &vec![(2u32, one)]);
        assert!(c.algebra.basis_product(2, 2).is_empty());
        assert!(c.algebra.basis_product(0, 2).is_empty());
    }

    #[test]
    fn compile_dual_numbers() {
        let spec = QuiverSpec::parse(DUAL_NUMBERS).unwrap();
        let c = compile_algebra(&spec).unwrap();
        assert_eq!(c.algebra.dim, 2);
        assert_eq!(c.algebra.labels, vec!["e1", "x"]);
        assert!(c.algebra.basis_product(1, 1).is_empty());
    }

    #[test]
    fn compile_a3_with_relation() {
        // hand path enumeration: e1, e2, e3, a, b survive; a*b dies
        let spec = QuiverSpec::parse(A3_REL).unwrap();
        let c = compile_algebra(&spec).unwrap();
        assert_eq!(c.algebra.dim, 5);
        assert_eq!(c.algebra.labels, vec!["e1", "e2", "e3", "a", "b"]);
        // b * a is the path a-then-b, which the relation kills
        assert!(c.algebra.basis_product(4, 3).is_empty());
    }

    #[test]
    fn loop_without_relation_fails_at_cap() {
        let text = r#"
field = "Q"
vertices = ["1"]
length_cap = 4

[[arrows]]
name = "x"
source = "1"
target = "1"
"#;
        let spec = QuiverSpec::parse(text).unwrap();
        match compile_algebra(&spec) {
            Err(AlgebraError::NotNilpotentAtCap { cap, survivors }) => {
                assert_eq!(cap, 4);
                assert_eq!(survivors, vec!["x*x*x*x"]);
            }
            _ => panic!("expected nilpotency failure"),
        }
    }

    #[test]
    fn path_count_equals_dimension_without_relations() {
        // acyclic, no relations: dim = number of paths
        let text = r#"
field = "Q"
vertices = ["1", "2", "3", "4"]

[[arrows]]
name = "a"
source = "1"
target = "2"

[[arrows]]
name = "b"
source = "2"
target = "3"

[[arrows]]
name = "c"
source = "2"
target = "4"
"#;
        let spec = QuiverSpec::parse(text).unwrap();
        let c = compile_algebra(&spec).unwrap();
        let paths = QuiverSpec::paths_up_to(&spec.quiver, spec.length_cap, 10_000).unwrap();
        assert_eq!(c.algebra.dim, paths.len()); // 4 + 3 + 2
        assert_eq!(c.algebra.dim, 9);
    }

    #[test]
    fn split_a2_marked() {
        let spec = QuiverSpec::parse(A2).unwrap();
        let c = compile_algebra(&spec).unwrap();
        let se = split_from_marked(&c).unwrap();
        assert_eq!(se.b_indices, vec![0, 1]);
        assert_eq!(se.m_indices, vec![2]);
        assert_eq!(se.b_algebra.dim, 2);
        assert!(se.b_algebra.is_idempotent_basis());
    }

    #[test]
    fn split_degenerate_no_marks() {
        let mut spec = QuiverSpec::parse(A2).unwrap();
        spec.marked.clear();
        let c = compile_algebra(&spec).unwrap();
        let se = split_from_marked(&c).unwrap();
        assert_eq!(se.m_indices.len(), 0);
        assert_eq!(se.b_algebra.dim, 3);
    }

    #[test]
    fn split_a3_marked_b() {
        let spec = QuiverSpec::parse(A3_REL).unwrap();
        let c = compile_algebra(&spec).unwrap();
        let se = split_from_marked(&c).unwrap();
        // B = span{e1,e2,e3,a}, M = span{b}; the class of a*b is 0
        assert_eq!(se.b_indices, vec![0, 1, 2, 3]);
        assert_eq!(se.m_indices, vec![4]);
        // hand check that M is an ideal: b*a = 0, e3 * b = b
        assert!(c.algebra.basis_product(4, 3).is_empty());
        assert_eq!(
            c.algebra.basis_product(2, 4),
            &vec![(4u32, Field::Rational.one())]
        );
    }

    #[test]
    fn check_split_diagnostics() {
        let spec = QuiverSpec::parse(A2).unwrap();
        let c = compile_algebra(&spec).unwrap();
        // healthy split
        assert_eq!(check_split(&c.algebra, &[0, 1], &[2]), None);
        // unit not in B
        assert_eq!(
            check_split(&c.algebra, &[0], &[1, 2]),
            Some(SplitViolation::UnitNotInB)
        );
        // M not ideal-closed: put the idempotent e2 inside M. Then
        // a * e1 = a must stay in M but e2 * a = a also shows e2-violations;
        // the first reported axiom is the unit one, so use a 3-dim example
        // where the unit stays in B: dual numbers with M = span{e}? the unit
        // fails there too, so build the counterexample by hand: A3 with
        // relation, B = {e1,e2,e3,b}, M = {a}: then b*a = 0 is fine but
        // B is not closed? e_i products stay; b*b = 0; so B closed. M ideal:
        // a*e1 = a ok, e2*a = a ok, b*a = 0 ok... that one is a valid split
        // too. Use instead B = {e1, e2, e3}, M = {a, b} in A3: valid. The
        // genuinely broken partition: B = {e1, e2, e3, a, b} minus... take
        // M = {a} with b in B for the quiver WITHOUT the relation: then
        // b*a = the surviving path a*b which is neither in M nor B-pure.
        let text = r#"
field = "Q"
vertices = ["1", "2", "3"]

[[arrows]]
name = "a"
source = "1"
target = "2"

[[arrows]]
name = "b"
source = "2"
target = "3"
"#;
        let spec2 = QuiverSpec::parse(text).unwrap();
        let c2 = compile_algebra(&spec2).unwrap();
        // basis: e1 e2 e3 a b a*b ; M = {a}: b * a = a*b not in M
        let v = check_split(&c2.algebra, &[0, 1, 2, 4, 5], &[3]);
        assert_eq!(
            v,
            Some(SplitViolation::MNotLeftIdeal {
                a: "b".into(),
                m: "a".into()
            })
        );
    }

    #[test]
    fn decompose_splits_coordinates() {
        let spec = QuiverSpec::parse(A2).unwrap();
        let c = compile_algebra(&spec).unwrap();
        let se = split_from_marked(&c).unwrap();
        let one = c.algebra.unit();
        let (b, m) = se.decompose(&one);
        assert_eq!(b, one);
        assert!(m.is_empty());
        let f = Field::Rational;
        let mixed: SparseVec = vec![(0, f.one()), (2, f.one())];
        let (b, m) = se.decompose(&mixed);
        assert_eq!(b, vec![(0, f.one())]);
        assert_eq!(m, vec![(2, f.one())]);
    }

    #[test]
    fn enveloping_dimensions_and_unit() {
        let spec = QuiverSpec::parse(A2).unwrap();
        let c = compile_algebra(&spec).unwrap();
        let env = c.algebra.tensor(&c.algebra.opposite());
        assert_eq!(env.dim, 9);
        assert_eq!(env.idempotents.len(), 4);
        // from_table-level verification of associativity/unit is implicit in
        // construction; re-verify through the public constructor
        let rebuilt = Algebra::from_table(
            env.field,
            env.labels.clone(),
            (0..env.dim)
                .map(|i| (0..env.dim).map(|j| env.basis_product(i, j).clone()).collect())
                .collect(),
            env.idempotents.clone(),
            env.radical.clone(),
            env.basic_split,
        );
        assert!(rebuilt.is_ok());
    }
}
