//! Finite-dimensional modules and bimodules over structure-constant
//! algebras, and the enveloping-algebra dictionary between bimodules and
//! one-sided modules.

use crate::algebra::Algebra;
use crate::linalg::{SparseMat, SparseVec};
use crate::scalar::Field;
use std::sync::Arc;
use thiserror::Error;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Error)]
pub enum ModuleError {
    #[error("action is not unital on basis vector {0}")]
    NotUnital(usize),
    #[error("action not associative on algebra pair ({0}, {1})")]
    NotAssociative(String, String),
    #[error("left and right actions do not commute on pair ({0}, {1})")]
    ActionsDoNotCommute(String, String),
    #[error("action table has wrong shape")]
    Shape,
}

/// A one-sided module: `action[g]` is the matrix of the action of basis
/// element `g` (left: `x -> g.x`; right: `x -> x.g`).
#[derive(Clone)]
pub struct Module {
    pub algebra: Arc<Algebra>,
    pub side: Side,
    pub dim: usize,
    pub action: Vec<SparseMat>,
}

impl Module {
    pub fn new(
        algebra: Arc<Algebra>,
        side: Side,
        dim: usize,
        action: Vec<SparseMat>,
    ) -> Result<Module, ModuleError> {
        let m = Module {
            algebra,
            side,
            dim,
            action,
        };
        m.verify()?;
        Ok(m)
    }

    pub fn from_parts_unchecked(
        algebra: Arc<Algebra>,
        side: Side,
        dim: usize,
        action: Vec<SparseMat>,
    ) -> Module {
        Module {
            algebra,
            side,
            dim,
            action,
        }
    }

    pub fn field(&self) -> Field {
        self.algebra.field
    }

    pub fn verify(&self) -> Result<(), ModuleError> {
        let alg = &self.algebra;
        if self.action.len() != alg.dim
            || self
                .action
                .iter()
                .any(|m| m.rows() != self.dim || m.cols() != self.dim)
        {
            return Err(ModuleError::Shape);
        }
        let id = SparseMat::identity(self.dim, self.field());
        let mut unit_action = SparseMat::zero(self.dim, self.dim, self.field());
        for &e in &alg.idempotents {
            unit_action = add_mats(&unit_action, &self.action[e]);
        }
        if unit_action != id {
            return Err(ModuleError::NotUnital(0));
        }
        for g in 0..alg.dim {
            for h in 0..alg.dim {
                // composite action of the product g*h
                let gh = alg.basis_product(g, h);
                let mut expected = SparseMat::zero(self.dim, self.dim, self.field());
                for (k, c) in gh {
                    expected = add_scaled(&expected, c, &self.action[*k as usize]);
                }
                let composed = match self.side {
                    Side::Left => self.action[g].mat_mul(&self.action[h]),
                    Side::Right => self.action[h].mat_mul(&self.action[g]),
                };
                if composed != expected {
                    return Err(ModuleError::NotAssociative(
                        alg.labels[g].clone(),
                        alg.labels[h].clone(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn zero(algebra: Arc<Algebra>, side: Side) -> Module {
        let action = (0..algebra.dim)
            .map(|_| SparseMat::zero(0, 0, algebra.field))
            .collect();
        Module {
            algebra,
            side,
            dim: 0,
            action,
        }
    }

    /// The regular module: the algebra acting on itself.
    pub fn regular(algebra: Arc<Algebra>, side: Side) -> Module {
        let dim = algebra.dim;
        let action = (0..dim)
            .map(|g| match side {
                Side::Left => algebra.left_mul_matrix(g),
                Side::Right => algebra.right_mul_matrix(g),
            })
            .collect();
        Module {
            algebra,
            side,
            dim,
            action,
        }
    }

    /// The simple module at the idempotent with ordinal `v` (basic split
    /// algebras with known radical only): one-dimensional, the idempotent
    /// acts by 1, the radical and the other idempotents act by 0.
    pub fn simple_at(algebra: Arc<Algebra>, v: usize, side: Side) -> Module {
        assert!(algebra.basic_split, "simples need a basic split algebra");
        let rad = algebra
            .radical
            .as_ref()
            .expect("simples need a known radical");
        let field = algebra.field;
        // character: coefficient of the class of e_v in A/rad
        let qs = crate::linalg::QuotientSpace::from_relations(
            algebra.dim,
            field,
            &(0..rad.cols()).map(|c| rad.col(c).clone()).collect::<Vec<_>>(),
        );
        assert_eq!(
            qs.dim,
            algebra.idempotents.len(),
            "semisimple quotient must be spanned by the idempotents"
        );
        let ev: SparseVec = vec![(algebra.idempotents[v] as u32, field.one())];
        let ev_class = qs.proj.apply(&ev);
        assert_eq!(ev_class.len(), 1);
        let coord = ev_class[0].0;
        let mut action = Vec::with_capacity(algebra.dim);
        for g in 0..algebra.dim {
            let unit_g: SparseVec = vec![(g as u32, field.one())];
            let cls = qs.proj.apply(&unit_g);
            let lambda = cls
                .iter()
                .find(|(i, _)| *i == coord)
                .map(|(_, c)| c.clone())
                .unwrap_or_else(|| field.zero());
            let mut m = SparseMat::zero(1, 1, field);
            m.set(0, 0, lambda);
            action.push(m);
        }
        Module {
            algebra,
            side,
            dim: 1,
            action,
        }
    }

    /// Reinterprets a right module as a left module over the opposite algebra
    /// (or vice versa); the action matrices are unchanged.
    pub fn over_opposite(&self, op: Arc<Algebra>) -> Module {
        debug_assert_eq!(op.dim, self.algebra.dim);
        Module {
            algebra: op,
            side: match self.side {
                Side::Left => Side::Right,
                Side::Right => Side::Left,
            },
            dim: self.dim,
            action: self.action.clone(),
        }
    }

    pub fn direct_sum(&self, other: &Module) -> Module {
        assert_eq!(self.side, other.side);
        assert_eq!(self.algebra.dim, other.algebra.dim);
        let dim = self.dim + other.dim;
        let field = self.field();
        let action = (0..self.algebra.dim)
            .map(|g| {
                let mut m = SparseMat::zero(dim, dim, field);
                let a = &self.action[g];
                let b = &other.action[g];
                for j in 0..a.cols() {
                    for (i, c) in a.col(j) {
                        m.set(*i as usize, j, c.clone());
                    }
                }
                for j in 0..b.cols() {
                    for (i, c) in b.col(j) {
                        m.set(self.dim + *i as usize, self.dim + j, c.clone());
                    }
                }
                m
            })
            .collect();
        Module {
            algebra: self.algebra.clone(),
            side: self.side,
            dim,
            action,
        }
    }
}

fn add_mats(a: &SparseMat, b: &SparseMat) -> SparseMat {
    add_scaled(a, &a.field().one(), b)
}

fn add_scaled(a: &SparseMat, c: &crate::scalar::Scalar, b: &SparseMat) -> SparseMat {
    assert_eq!(a.rows(), b.rows());
    assert_eq!(a.cols(), b.cols());
    let cols = (0..a.cols())
        .map(|j| crate::linalg::axpy(a.col(j), c, b.col(j)))
        .collect();
    SparseMat::from_cols(a.rows(), a.field(), cols)
}

/// A bimodule over one algebra: commuting unital left and right actions.
#[derive(Clone)]
pub struct Bimodule {
    pub algebra: Arc<Algebra>,
    pub dim: usize,
    pub left: Vec<SparseMat>,
    pub right: Vec<SparseMat>,
}

impl Bimodule {
    pub fn new(
        algebra: Arc<Algebra>,
        dim: usize,
        left: Vec<SparseMat>,
        right: Vec<SparseMat>,
    ) -> Result<Bimodule, ModuleError> {
        let b = Bimodule {
            algebra,
            dim,
            left,
            right,
        };
        b.verify()?;
        Ok(b)
    }

    pub fn from_parts_unchecked(
        algebra: Arc<Algebra>,
        dim: usize,
        left: Vec<SparseMat>,
        right: Vec<SparseMat>,
    ) -> Bimodule {
        Bimodule {
            algebra,
            dim,
            left,
            right,
        }
    }

    pub fn field(&self) -> Field {
        self.algebra.field
    }

    pub fn verify(&self) -> Result<(), ModuleError> {
        self.left_module().verify()?;
        self.right_module().verify()?;
        for g in 0..self.algebra.dim {
            for h in 0..self.algebra.dim {
                let lr = self.left[g].mat_mul(&self.right[h]);
                let rl = self.right[h].mat_mul(&self.left[g]);
                if lr != rl {
                    return Err(ModuleError::ActionsDoNotCommute(
                        self.algebra.labels[g].clone(),
                        self.algebra.labels[h].clone(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn left_module(&self) -> Module {
        Module {
            algebra: self.algebra.clone(),
            side: Side::Left,
            dim: self.dim,
            action: self.left.clone(),
        }
    }

    pub fn right_module(&self) -> Module {
        Module {
            algebra: self.algebra.clone(),
            side: Side::Right,
            dim: self.dim,
            action: self.right.clone(),
        }
    }

    /// The regular bimodule: the algebra with outer multiplications.
    pub fn regular(algebra: Arc<Algebra>) -> Bimodule {
        let dim = algebra.dim;
        let left = (0..dim).map(|g| algebra.left_mul_matrix(g)).collect();
        let right = (0..dim).map(|g| algebra.right_mul_matrix(g)).collect();
        Bimodule {
            algebra,
            dim,
            left,
            right,
        }
    }

    pub fn zero(algebra: Arc<Algebra>) -> Bimodule {
        let action: Vec<SparseMat> = (0..algebra.dim)
            .map(|_| SparseMat::zero(0, 0, algebra.field))
            .collect();
        Bimodule {
            algebra,
            dim: 0,
            left: action.clone(),
            right: action,
        }
    }

    /// Restricts the actions along a sub-basis embedding: the sub-algebra's
    /// basis element `i` is `embedding[i]` in the ambient algebra.
    pub fn restrict(&self, sub: Arc<Algebra>, embedding: &[usize]) -> Bimodule {
        assert_eq!(sub.dim, embedding.len());
        let left = embedding.iter().map(|&g| self.left[g].clone()).collect();
        let right = embedding.iter().map(|&g| self.right[g].clone()).collect();
        Bimodule {
            algebra: sub,
            dim: self.dim,
            left,
            right,
        }
    }

    /// The one-dimensional bimodule on which the algebra acts through the
    /// vertex characters `v` (left) and `w` (right).
    pub fn simple_pair(algebra: Arc<Algebra>, v: usize, w: usize) -> Bimodule {
        let lm = Module::simple_at(algebra.clone(), v, Side::Left);
        let rm = Module::simple_at(algebra.clone(), w, Side::Right);
        Bimodule {
            algebra,
            dim: 1,
            left: lm.action,
            right: rm.action,
        }
    }

    /// The induced left module over the enveloping algebra `env = A (x) A^op`
    /// with `(a (x) b) . x = a.x.b`.
    pub fn as_left_module_over_env(&self, env: Arc<Algebra>) -> Module {
        let d = self.algebra.dim;
        assert_eq!(env.dim, d * d);
        let mut action = Vec::with_capacity(env.dim);
        for i in 0..d {
            for j in 0..d {
                action.push(self.left[i].mat_mul(&self.right[j]));
            }
        }
        Module {
            algebra: env,
            side: Side::Left,
            dim: self.dim,
            action,
        }
    }

    /// The induced right module over the enveloping algebra with
    /// `x . (a (x) b) = b.x.a`.
    pub fn as_right_module_over_env(&self, env: Arc<Algebra>) -> Module {
        let d = self.algebra.dim;
        assert_eq!(env.dim, d * d);
        let mut action = Vec::with_capacity(env.dim);
        for i in 0..d {
            for j in 0..d {
                action.push(self.left[j].mat_mul(&self.right[i]));
            }
        }
        Module {
            algebra: env,
            side: Side::Right,
            dim: self.dim,
            action,
        }
    }

    /// Applies the left action of an algebra element given by coordinates.
    pub fn act_left(&self, a: &SparseVec, x: &SparseVec) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (g, c) in a {
            let gx = self.left[*g as usize].apply(x);
            acc = crate::linalg::axpy(&acc, c, &gx);
        }
        acc
    }

    pub fn act_right(&self, x: &SparseVec, a: &SparseVec) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (g, c) in a {
            let xg = self.right[*g as usize].apply(x);
            acc = crate::linalg::axpy(&acc, c, &xg);
        }
        acc
    }

    /// Right-type of each basis vector when the basis is pure for the
    /// idempotent decomposition: `types[x] = Some(v)` when `x . e_v = x`.
    pub fn right_types(&self) -> Option<Vec<usize>> {
        pure_types(self, Side::Right)
    }

    pub fn left_types(&self) -> Option<Vec<usize>> {
        pure_types(self, Side::Left)
    }
}

fn pure_types(b: &Bimodule, side: Side) -> Option<Vec<usize>> {
    let idem = &b.algebra.idempotents;
    let field = b.field();
    let mut types = vec![usize::MAX; b.dim];
    for (ord, &e) in idem.iter().enumerate() {
        let m = match side {
            Side::Left => &b.left[e],
            Side::Right => &b.right[e],
        };
        for x in 0..b.dim {
            let col = m.col(x);
            if col.is_empty() {
                continue;
            }
            if col.len() == 1 && col[0].0 as usize == x && col[0].1 == field.one() {
                if types[x] != usize::MAX {
                    return None;
                }
                types[x] = ord;
            } else {
                return None;
            }
        }
    }
    if types.iter().any(|&t| t == usize::MAX) {
        return None;
    }
    Some(types)
}

/// `M` as a `B`-bimodule for a split extension: the complementary basis
/// classes with the multiplication of the big algebra restricted on both
/// sides.
pub fn m_bimodule(se: &crate::algebra::SplitExtension) -> Bimodule {
    let field = se.algebra.field;
    let dim = se.m_indices.len();
    let pos = |k: usize| -> Option<usize> { se.m_indices.iter().position(|&x| x == k) };
    let mut left = Vec::with_capacity(se.b_algebra.dim);
    let mut right = Vec::with_capacity(se.b_algebra.dim);
    for &b in &se.b_indices {
        let mut lm = SparseMat::zero(dim, dim, field);
        let mut rm = SparseMat::zero(dim, dim, field);
        for (mj, &m) in se.m_indices.iter().enumerate() {
            for (k, c) in se.algebra.basis_product(b, m) {
                lm.set(pos(*k as usize).expect("M is a left ideal"), mj, c.clone());
            }
            for (k, c) in se.algebra.basis_product(m, b) {
                rm.set(pos(*k as usize).expect("M is a right ideal"), mj, c.clone());
            }
        }
        left.push(lm);
        right.push(rm);
    }
    Bimodule {
        algebra: se.b_algebra.clone(),
        dim,
        left,
        right,
    }
}

/// An `A`-bimodule restricted to a `B`-bimodule along a split extension.
pub fn restrict_to_b(se: &crate::algebra::SplitExtension, x: &Bimodule) -> Bimodule {
    assert_eq!(x.algebra.dim, se.algebra.dim);
    x.restrict(se.b_algebra.clone(), &se.b_indices)
}

/// The arrow span of a quiver as a bimodule over the vertex span: the
/// idempotent at a vertex acts on an arrow by target matching on the left
/// and source matching on the right. Tensor powers over the vertex span
/// enumerate paths, so this bimodule is tensor-nilpotent exactly when the
/// quiver has no oriented cycle.
pub fn arrow_bimodule(
    q: &crate::quiver::Quiver,
    field: Field,
) -> (Arc<Algebra>, Bimodule) {
    let labels: Vec<String> = q.vertices.iter().map(|v| format!("e{v}")).collect();
    let b = Arc::new(Algebra::product_of_fields(field, labels));
    let dim = q.arrows.len();
    let mut left = Vec::with_capacity(b.dim);
    let mut right = Vec::with_capacity(b.dim);
    for v in 0..b.dim {
        let mut lm = SparseMat::zero(dim, dim, field);
        let mut rm = SparseMat::zero(dim, dim, field);
        for (k, a) in q.arrows.iter().enumerate() {
            if a.target == v {
                lm.set(k, k, field.one());
            }
            if a.source == v {
                rm.set(k, k, field.one());
            }
        }
        left.push(lm);
        right.push(rm);
    }
    let m = Bimodule {
        algebra: b.clone(),
        dim,
        left,
        right,
    };
    (b, m)
}

/// The enveloping algebra `A (x) A^op` together with its factor.
pub struct Enveloping {
    pub algebra: Arc<Algebra>,
    pub env: Arc<Algebra>,
}

/// Builds `A^e = A (x) A^op`; the basis is indexed by pairs `(i, j)` at
/// position `i * dim + j`, so `(a (x) b) . (a' (x) b') = a a' (x) b' b`.
pub fn enveloping(algebra: Arc<Algebra>) -> Enveloping {
    let env = algebra.tensor(&algebra.opposite());
    Enveloping {
        algebra,
        env: Arc::new(env),
    }
}
