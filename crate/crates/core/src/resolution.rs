//! Projective covers, minimal projective resolutions, projective and global
//! dimension, one-sided projectivity, Tor over enveloping algebras, the
//! two-sided bar resolution of a bimodule, the boundedness certificate, and
//! the global-dimension transfer check.

use crate::algebra::{Algebra, SplitExtension};
use crate::bimodule::{enveloping, m_bimodule, Bimodule, Module, Side};
use crate::complex::ChainComplex;
use crate::config::{Budget, BudgetExceeded};
use crate::linalg::{kron, Echelon, RowTag, Solver, SparseMat, SparseVec};
use crate::tensor::{nilpotency_index, tensor_over_algebra, NilpotencyIndex};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ResolutionError {
    #[error("radical unavailable: raw multiplication tables over GF(p) are not supported")]
    RadicalUnavailable,
    #[error("radical is not nilpotent (not an admissible presentation)")]
    RadicalNotNilpotent,
    #[error("global dimension needs a basic split presentation with known radical")]
    NotBasicSplit,
    #[error("cover is not minimal: kernel escapes the radical")]
    CoverNotMinimal,
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error(transparent)]
    Complex(#[from] crate::complex::ComplexError),
    #[error("{0}")]
    Other(String),
}

/// The Jacobson radical as a column span: the stored arrow-ideal span for
/// presented algebras, or the kernel of the trace form in characteristic
/// zero; verified nilpotent by powering.
pub fn radical(alg: &Algebra) -> Result<SparseMat, ResolutionError> {
    let rad = match &alg.radical {
        Some(r) => r.clone(),
        None => match alg.field {
            crate::scalar::Field::Rational => trace_form_radical(alg),
            crate::scalar::Field::Prime(_) => return Err(ResolutionError::RadicalUnavailable),
        },
    };
    // nilpotency by powering spans
    let mut current: Vec<SparseVec> = (0..rad.cols()).map(|j| rad.col(j).clone()).collect();
    for _ in 0..=alg.dim {
        if current.is_empty() {
            return Ok(rad);
        }
        let mut next: Vec<SparseVec> = Vec::new();
        let mut ech = Echelon::new(alg.dim, alg.field);
        for r in &current {
            for c in 0..rad.cols() {
                let prod = alg.mul_elements(r, rad.col(c));
                if !prod.is_empty() && ech.insert(&prod, RowTag::Small).is_some() {
                    next.push(prod);
                }
            }
        }
        current = next;
    }
    Err(ResolutionError::RadicalNotNilpotent)
}

fn trace_form_radical(alg: &Algebra) -> SparseMat {
    // Gram matrix of (x, y) -> trace(L_{xy}); kernel = radical in char 0
    let field = alg.field;
    let mut gram = SparseMat::zero(alg.dim, alg.dim, field);
    for i in 0..alg.dim {
        for j in 0..alg.dim {
            // trace of left multiplication by basis_i * basis_j
            let prod = alg.basis_product(i, j);
            let mut tr = field.zero();
            for (g, c) in prod {
                let lm = alg.left_mul_matrix(*g as usize);
                let mut diag = field.zero();
                for k in 0..alg.dim {
                    diag = diag.add(&lm.get(k, k));
                }
                tr = tr.add(&c.mul(&diag));
            }
            if !tr.is_zero() {
                gram.set(i, j, tr);
            }
        }
    }
    gram.kernel_basis()
}

/// A projective cover: the covering projective (a sum of vertex projectives
/// with recorded multiplicities), the surjection onto the module, and the
/// kernel as a module with its inclusion.
pub struct Cover {
    pub projective: Module,
    /// multiplicity of the projective at each idempotent ordinal
    pub multiplicities: Vec<usize>,
    /// cover map: projective -> target
    pub map: SparseMat,
    pub kernel: Module,
    /// kernel basis inside the projective
    pub kernel_inclusion: SparseMat,
}

/// The indecomposable projective at idempotent ordinal `v`: the coordinate
/// submodule `A.e_v` (left) or `e_v.A` (right).
pub fn vertex_projective(alg: &Arc<Algebra>, v: usize, side: Side) -> (Module, Vec<usize>) {
    let e = alg.idempotents[v];
    let field = alg.field;
    let keep: Vec<usize> = (0..alg.dim)
        .filter(|&g| {
            let prod = match side {
                Side::Left => alg.basis_product(g, e),
                Side::Right => alg.basis_product(e, g),
            };
            prod == &vec![(g as u32, field.one())]
        })
        .collect();
    let dim = keep.len();
    let pos = |k: usize| keep.iter().position(|&x| x == k);
    let action: Vec<SparseMat> = (0..alg.dim)
        .map(|g| {
            let mut m = SparseMat::zero(dim, dim, field);
            for (j, &h) in keep.iter().enumerate() {
                let prod = match side {
                    Side::Left => alg.basis_product(g, h),
                    Side::Right => alg.basis_product(h, g),
                };
                for (k, c) in prod {
                    if let Some(i) = pos(*k as usize) {
                        m.set(i, j, c.clone());
                    }
                }
            }
            m
        })
        .collect();
    (
        Module::from_parts_unchecked(alg.clone(), side, dim, action),
        keep,
    )
}

fn act_element(x: &Module, a: &SparseVec, v: &SparseVec) -> SparseVec {
    let mut acc: SparseVec = Vec::new();
    for (g, c) in a {
        let gv = x.action[*g as usize].apply(v);
        acc = crate::linalg::axpy(&acc, c, &gv);
    }
    acc
}

/// The projective cover of a finite-dimensional module over a basic split
/// algebra with known radical. The cover is surjective with kernel inside
/// the radical of the projective (verified).
pub fn projective_cover(x: &Module) -> Result<Cover, ResolutionError> {
    let alg = &x.algebra;
    if !alg.basic_split {
        return Err(ResolutionError::NotBasicSplit);
    }
    let rad = radical(alg)?;
    let field = x.field();
    // top = X / rad.X
    let mut radx: Vec<SparseVec> = Vec::new();
    for c in 0..rad.cols() {
        for xi in 0..x.dim {
            let unit: SparseVec = vec![(xi as u32, field.one())];
            let v = act_element(x, rad.col(c), &unit);
            if !v.is_empty() {
                radx.push(v);
            }
        }
    }
    let top = crate::linalg::QuotientSpace::from_relations(x.dim, field, &radx);
    // generators per idempotent: lift a basis of e_v . top
    let mut generators: Vec<(usize, SparseVec)> = Vec::new(); // (vertex ordinal, element of X)
    let mut multiplicities = vec![0usize; alg.idempotents.len()];
    for (vord, &e) in alg.idempotents.iter().enumerate() {
        // induced action of e on top
        let et = top
            .proj
            .mat_mul(&x.action[e])
            .mat_mul(&top.section);
        let im = et.image_basis();
        for j in 0..im.cols() {
            let lifted = top.section.apply(im.col(j));
            let gen = x.action[e].apply(&lifted);
            generators.push((vord, gen));
            multiplicities[vord] += 1;
        }
    }
    // assemble P = direct sum of vertex projectives, ordered by generator list
    let mut proj_parts: Vec<(Module, Vec<usize>)> = Vec::new();
    for &(vord, _) in &generators {
        proj_parts.push(vertex_projective(alg, vord, x.side));
    }
    let total_dim: usize = proj_parts.iter().map(|(m, _)| m.dim).sum();
    let mut action: Vec<SparseMat> = (0..alg.dim)
        .map(|_| SparseMat::zero(total_dim, total_dim, field))
        .collect();
    {
        let mut offset = 0usize;
        for (part, _) in &proj_parts {
            for g in 0..alg.dim {
                for j in 0..part.dim {
                    for (i, c) in part.action[g].col(j) {
                        action[g].set(offset + *i as usize, offset + j, c.clone());
                    }
                }
            }
            offset += part.dim;
        }
    }
    let projective = Module::from_parts_unchecked(alg.clone(), x.side, total_dim, action);
    // cover map: on the copy at generator (v, gen): basis h of A e_v -> h . gen
    let mut cols: Vec<SparseVec> = Vec::with_capacity(total_dim);
    for (k, (part, keep)) in proj_parts.iter().enumerate() {
        let gen = &generators[k].1;
        for &h in keep {
            let unit_h: SparseVec = vec![(h as u32, field.one())];
            cols.push(act_element(x, &unit_h, gen));
        }
        let _ = part;
    }
    let map = SparseMat::from_cols(x.dim, field, cols);
    if map.rank() != x.dim {
        return Err(ResolutionError::Other(
            "cover map is not surjective".into(),
        ));
    }
    // kernel with module structure
    let kernel_inclusion = map.kernel_basis();
    let kdim = kernel_inclusion.cols();
    let solver = Solver::new(&kernel_inclusion);
    let kaction: Vec<SparseMat> = (0..alg.dim)
        .map(|g| {
            let mut m = SparseMat::zero(kdim, kdim, field);
            for j in 0..kdim {
                let img = projective.action[g].apply(kernel_inclusion.col(j));
                let coords = solver
                    .solve(&img)
                    .expect("kernel is a submodule");
                for (i, c) in coords {
                    m.set(i as usize, j, c);
                }
            }
            m
        })
        .collect();
    let kernel = Module::from_parts_unchecked(alg.clone(), x.side, kdim, kaction);
    // minimality: kernel inside rad . P
    let mut radp: Vec<SparseVec> = Vec::new();
    for c in 0..rad.cols() {
        for pj in 0..projective.dim {
            let unit: SparseVec = vec![(pj as u32, field.one())];
            let v = act_element(&projective, rad.col(c), &unit);
            if !v.is_empty() {
                radp.push(v);
            }
        }
    }
    let mut ech = Echelon::new(projective.dim, field);
    for v in &radp {
        ech.insert(v, RowTag::Small);
    }
    for j in 0..kdim {
        let (residue, _) = ech.express(kernel_inclusion.col(j));
        if !residue.is_empty() {
            return Err(ResolutionError::CoverNotMinimal);
        }
    }
    Ok(Cover {
        projective,
        multiplicities,
        map,
        kernel,
        kernel_inclusion,
    })
}

/// `true` when the projective cover is an isomorphism.
pub fn is_projective(x: &Module) -> Result<bool, ResolutionError> {
    let cover = projective_cover(x)?;
    Ok(cover.kernel.dim == 0 && cover.projective.dim == x.dim)
}

/// Projectivity of a bimodule's one-sided structure.
pub fn one_sided_projectivity(m: &Bimodule, side: Side) -> Result<bool, ResolutionError> {
    match side {
        Side::Left => is_projective(&m.left_module()),
        Side::Right => {
            // right modules are resolved directly; vertex projectives mirror
            is_projective(&m.right_module())
        }
    }
}

/// One step of a minimal resolution.
pub struct ResolutionStep {
    pub module: Module,
    /// differential into the previous step's module (or the resolved module
    /// for the first step)
    pub differential: SparseMat,
    pub multiplicities: Vec<usize>,
}

pub struct MinimalResolution {
    pub steps: Vec<ResolutionStep>,
    /// `Some(pd)` when the resolution terminated (last kernel zero);
    /// `None` when the cap was reached first.
    pub finished_pd: Option<usize>,
    /// dimension of the syzygy left over at the cap (0 if finished)
    pub syzygy_dim: usize,
}

/// Iterated projective covers of syzygies, stopping at the zero syzygy or at
/// the cap. Differentials compose to zero and each image lies inside the
/// radical of the next projective (minimality, verified in the covers).
pub fn minimal_resolution(x: &Module, cap: usize) -> Result<MinimalResolution, ResolutionError> {
    let mut steps: Vec<ResolutionStep> = Vec::new();
    let mut current: Module = x.clone();
    // inclusion of the current syzygy into the previous projective
    let mut prev_inclusion: Option<SparseMat> = None;
    loop {
        if current.dim == 0 {
            return Ok(MinimalResolution {
                syzygy_dim: 0,
                finished_pd: Some(steps.len().saturating_sub(1)),
                steps,
            });
        }
        if steps.len() > cap {
            return Ok(MinimalResolution {
                syzygy_dim: current.dim,
                finished_pd: None,
                steps,
            });
        }
        let cover = projective_cover(&current)?;
        let differential = match &prev_inclusion {
            None => cover.map.clone(),
            Some(incl) => incl.mat_mul(&cover.map),
        };
        prev_inclusion = Some(cover.kernel_inclusion.clone());
        let next = cover.kernel.clone();
        steps.push(ResolutionStep {
            module: cover.projective,
            differential,
            multiplicities: cover.multiplicities,
        });
        current = next;
    }
}

/// Projective dimension, or a lower bound when the cap was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum PdResult {
    Finite(usize),
    AtLeast(usize),
}

impl PdResult {
    pub fn finite(&self) -> Option<usize> {
        match self {
            PdResult::Finite(v) => Some(*v),
            PdResult::AtLeast(_) => None,
        }
    }
}

impl std::fmt::Display for PdResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PdResult::Finite(v) => write!(f, "{v}"),
            PdResult::AtLeast(c) => write!(f, ">= {c}"),
        }
    }
}

pub fn projective_dimension(x: &Module, cap: usize) -> Result<PdResult, ResolutionError> {
    let res = minimal_resolution(x, cap)?;
    Ok(match res.finished_pd {
        Some(pd) => PdResult::Finite(pd),
        None => PdResult::AtLeast(cap),
    })
}

/// Global dimension as the maximum projective dimension of the vertex
/// simples (left modules); requires a basic split presentation.
pub fn global_dimension(alg: &Arc<Algebra>, cap: usize) -> Result<PdResult, ResolutionError> {
    if !alg.basic_split || alg.radical.is_none() {
        return Err(ResolutionError::NotBasicSplit);
    }
    let mut max_pd = 0usize;
    for v in 0..alg.idempotents.len() {
        let s = Module::simple_at(alg.clone(), v, Side::Left);
        match projective_dimension(&s, cap)? {
            PdResult::Finite(d) => max_pd = max_pd.max(d),
            PdResult::AtLeast(c) => return Ok(PdResult::AtLeast(c)),
        }
    }
    Ok(PdResult::Finite(max_pd))
}

/// Tor dimensions from a minimal resolution of the left module `z`:
/// `dims[k] = dim Tor_k(x, z)` for `k <= max_degree`. `complete` is false
/// when the resolution hit its cap before covering the window.
pub struct TorResult {
    pub dims: Vec<usize>,
    pub complete: bool,
}

pub fn tor_dims(
    x_right: &Module,
    z_left: &Module,
    max_degree: usize,
) -> Result<TorResult, ResolutionError> {
    assert!(matches!(x_right.side, Side::Right));
    assert!(matches!(z_left.side, Side::Left));
    let cap = max_degree + 1;
    let res = minimal_resolution(z_left, cap)?;
    let complete = res.finished_pd.is_some() || res.steps.len() >= max_degree + 2;
    // tensor the resolution
    let field = x_right.field();
    let mut quotients = Vec::with_capacity(res.steps.len());
    for step in &res.steps {
        quotients.push(tensor_over_algebra(x_right, &step.module));
    }
    let mut ranks: Vec<usize> = Vec::new(); // rank of induced d_k : T_k -> T_{k-1}, k >= 1
    for k in 1..res.steps.len() {
        let d = &res.steps[k].differential;
        let idx = SparseMat::identity(x_right.dim, field);
        let big = kron(&idx, d);
        let induced = quotients[k - 1]
            .proj
            .mat_mul(&big)
            .mat_mul(&quotients[k].section);
        ranks.push(induced.rank());
    }
    let t_dim = |k: usize| -> usize { quotients.get(k).map(|q| q.dim).unwrap_or(0) };
    let rank_at = |k: usize| -> usize {
        if k >= 1 && k <= ranks.len() {
            ranks[k - 1]
        } else {
            0
        }
    };
    let mut dims = Vec::with_capacity(max_degree + 1);
    for k in 0..=max_degree {
        if k < res.steps.len() || res.finished_pd.is_some() {
            dims.push(t_dim(k).saturating_sub(rank_at(k) + rank_at(k + 1)));
        } else {
            break;
        }
    }
    Ok(TorResult { dims, complete })
}

/// `Tor_*^{B^e}(X, Z)` for bimodules over B, resolving `Z` minimally as a
/// left module over the enveloping algebra.
pub fn tor_over_env(
    x: &Bimodule,
    z: &Bimodule,
    max_degree: usize,
) -> Result<TorResult, ResolutionError> {
    let env = enveloping(x.algebra.clone());
    let x_right = x.as_right_module_over_env(env.env.clone());
    let z_left = z.as_left_module_over_env(env.env.clone());
    tor_dims(&x_right, &z_left, max_degree)
}

/// The two-sided bar resolution of a bimodule by free bimodules
/// `B^(x)q (x) M (x) B^(x)p`, with the bar differentials and the special
/// multiplication augmentation. Terms are graded by `p + q = t + 1`.
pub struct TwoSidedBar {
    /// augmented complex: degree 0 is M, degree t+1 the t-th term
    pub augmented: ChainComplex,
    /// per degree t, the bimodule structure of the t-th term
    pub terms: Vec<Bimodule>,
}

pub fn two_sided_bar_resolution(
    m: &Bimodule,
    length: usize,
    budget: &Budget,
) -> Result<TwoSidedBar, ResolutionError> {
    let field = m.field();
    let b = &m.algebra;
    let db = b.dim;
    let dm = m.dim;
    let top_dim = crate::config::chain_dim(dm * db * db, db, length);
    budget
        .check("two-sided bar resolution", top_dim)
        .map_err(ResolutionError::Budget)?;

    // the degree-t term is the sum of the blocks (q, p) with q + p = t + 2
    // and q, p >= 1; layout inside a block: ((b_1..b_q), m, (b'_1..b'_p)),
    // b-major
    let summand_dim = |q: usize, p: usize| db.pow(q as u32) * dm * db.pow(p as u32);
    let summands_at = |t: usize| -> Vec<(usize, usize)> {
        (1..=t + 1).map(|q| (q, t + 2 - q)).collect()
    };
    let offsets = |t: usize| -> Vec<usize> {
        let mut off = vec![0usize];
        for (q, p) in summands_at(t) {
            off.push(off.last().unwrap() + summand_dim(q, p));
        }
        off
    };

    let decode = |idx: usize, q: usize, p: usize| -> (Vec<usize>, usize, Vec<usize>) {
        let mut rest = idx;
        let mut right = vec![0usize; p];
        for i in (0..p).rev() {
            right[i] = rest % db;
            rest /= db;
        }
        let mid = rest % dm;
        rest /= dm;
        let mut left = vec![0usize; q];
        for i in (0..q).rev() {
            left[i] = rest % db;
            rest /= db;
        }
        (left, mid, right)
    };
    let encode = |left: &[usize], mid: usize, right: &[usize]| -> usize {
        let mut idx = 0usize;
        for &j in left {
            idx = idx * db + j;
        }
        idx = idx * dm + mid;
        for &j in right {
            idx = idx * db + j;
        }
        idx
    };

    let mut dims: Vec<usize> = vec![dm];
    for t in 0..=length {
        dims.push(*offsets(t).last().unwrap());
    }

    let mut boundaries: Vec<SparseMat> = Vec::new();
    // augmentation: ^1M^1 -> M, b (x) m (x) b' -> b.m.b'
    {
        let mut cols: Vec<SparseVec> = Vec::with_capacity(dims[1]);
        for idx in 0..dims[1] {
            let (left, mid, right) = decode(idx, 1, 1);
            let unit: SparseVec = vec![(mid as u32, field.one())];
            let lm = m.left[left[0]].apply(&unit);
            let out = m.right[right[0]].apply(&lm);
            cols.push(out);
        }
        boundaries.push(SparseMat::from_cols(dm, field, cols));
    }
    for t in 1..=length {
        let src_summands = summands_at(t);
        let tgt_summands = summands_at(t - 1);
        let tgt_off = offsets(t - 1);
        let tgt_pos = |q: usize, p: usize| -> Option<usize> {
            tgt_summands
                .iter()
                .position(|&(qq, pp)| qq == q && pp == p)
        };
        let mut cols: Vec<SparseVec> = Vec::with_capacity(dims[t + 1]);
        for (si, &(q, p)) in src_summands.iter().enumerate() {
            for idx in 0..summand_dim(q, p) {
                let (left, mid, right) = decode(idx, q, p);
                let mut col: SparseVec = Vec::new();
                // vertical: reduce p by one (target (q, p-1)), sign (-1)^{q+1}
                if p >= 2 {
                    if let Some(tp) = tgt_pos(q, p - 1) {
                        let base = tgt_off[tp];
                        let outer = if (q + 1) % 2 == 1 {
                            field.from_i64(-1)
                        } else {
                            field.one()
                        };
                        // m . b'_1
                        let unit: SparseVec = vec![(mid as u32, field.one())];
                        for (mo, c) in m.right[right[0]].apply(&unit) {
                            let e = encode(&left, mo as usize, &right[1..]);
                            col.push(((base + e) as u32, outer.mul(&c)));
                        }
                        // merges b'_i b'_{i+1}, sign (-1)^i inside
                        for i in 0..p - 1 {
                            let prod = b.basis_product(right[i], right[i + 1]);
                            if prod.is_empty() {
                                continue;
                            }
                            let inner = if (i + 1) % 2 == 1 {
                                field.from_i64(-1)
                            } else {
                                field.one()
                            };
                            for (g, c) in prod {
                                let mut r2 = Vec::with_capacity(p - 1);
                                for (pos, &j) in right.iter().enumerate() {
                                    if pos == i {
                                        r2.push(*g as usize);
                                    } else if pos == i + 1 {
                                        continue;
                                    } else {
                                        r2.push(j);
                                    }
                                }
                                let e = encode(&left, mid, &r2);
                                col.push(((base + e) as u32, outer.mul(&inner).mul(c)));
                            }
                        }
                    }
                }
                // horizontal: reduce q by one (target (q-1, p))
                if q >= 2 {
                    if let Some(tp) = tgt_pos(q - 1, p) {
                        let base = tgt_off[tp];
                        // merges b_i b_{i+1}, sign (-1)^i
                        for i in 0..q - 1 {
                            let prod = b.basis_product(left[i], left[i + 1]);
                            if prod.is_empty() {
                                continue;
                            }
                            let sign = if (i + 1) % 2 == 1 {
                                field.from_i64(-1)
                            } else {
                                field.one()
                            };
                            for (g, c) in prod {
                                let mut l2 = Vec::with_capacity(q - 1);
                                for (pos, &j) in left.iter().enumerate() {
                                    if pos == i {
                                        l2.push(*g as usize);
                                    } else if pos == i + 1 {
                                        continue;
                                    } else {
                                        l2.push(j);
                                    }
                                }
                                let e = encode(&l2, mid, &right);
                                col.push(((base + e) as u32, sign.mul(c)));
                            }
                        }
                        // b_q . m with sign (-1)^q
                        let sign = if q % 2 == 1 {
                            field.from_i64(-1)
                        } else {
                            field.one()
                        };
                        let unit: SparseVec = vec![(mid as u32, field.one())];
                        for (mo, c) in m.left[left[q - 1]].apply(&unit) {
                            let e = encode(&left[..q - 1], mo as usize, &right);
                            col.push(((base + e) as u32, sign.mul(&c)));
                        }
                    }
                }
                let mut col = col;
                col.sort_by_key(|(i, _)| *i);
                let mut merged: SparseVec = Vec::new();
                for (i, c) in col {
                    match merged.last_mut() {
                        Some((li, lc)) if *li == i => *lc = lc.add(&c),
                        _ => merged.push((i, c)),
                    }
                }
                merged.retain(|(_, c)| !c.is_zero());
                cols.push(merged);
            }
            let _ = si;
        }
        boundaries.push(SparseMat::from_cols(dims[t], field, cols));
    }
    let augmented = ChainComplex::new(field, dims, boundaries)?;

    // bimodule structure on each term: outer left on b_1, outer right on b'_p
    let mut terms: Vec<Bimodule> = Vec::new();
    for t in 0..=length {
        let total = augmented.dim(t + 1);
        let mut left_act: Vec<SparseMat> = Vec::with_capacity(db);
        let mut right_act: Vec<SparseMat> = Vec::with_capacity(db);
        for g in 0..db {
            let mut lm = SparseMat::zero(total, total, field);
            let mut rm = SparseMat::zero(total, total, field);
            let off = offsets(t);
            for (si, &(q, p)) in summands_at(t).iter().enumerate() {
                for idx in 0..summand_dim(q, p) {
                    let (left, mid, right) = decode(idx, q, p);
                    for (h, c) in b.basis_product(g, left[0]) {
                        let mut l2 = left.clone();
                        l2[0] = *h as usize;
                        let e = encode(&l2, mid, &right);
                        lm.add_to(off[si] + e, off[si] + idx, c);
                    }
                    for (h, c) in b.basis_product(right[p - 1], g) {
                        let mut r2 = right.clone();
                        r2[p - 1] = *h as usize;
                        let e = encode(&left, mid, &r2);
                        rm.add_to(off[si] + e, off[si] + idx, c);
                    }
                }
            }
            left_act.push(lm);
            right_act.push(rm);
        }
        terms.push(Bimodule::from_parts_unchecked(
            b.clone(),
            total,
            left_act,
            right_act,
        ));
    }
    Ok(TwoSidedBar { augmented, terms })
}

impl TwoSidedBar {
    /// Tor dimensions computed through this resolution: the homology of
    /// `x (x)_{B^e} terms`.
    pub fn tor_dims(&self, x: &Bimodule, max_degree: usize) -> Vec<usize> {
        let field = x.field();
        let quotients: Vec<crate::linalg::QuotientSpace> = self
            .terms
            .iter()
            .map(|t| crate::tensor::tensor_over_env(x, t))
            .collect();
        let mut ranks: Vec<usize> = Vec::new();
        for t in 1..self.terms.len() {
            let d = self.augmented.boundary(t + 1);
            let idx = SparseMat::identity(x.dim, field);
            // the tensor layout here is (x, term): expand d on the right
            let big = kron(&idx, &d);
            let induced = quotients[t - 1]
                .proj
                .mat_mul(&big)
                .mat_mul(&quotients[t].section);
            ranks.push(induced.rank());
        }
        let rank_at = |k: usize| -> usize {
            if k >= 1 && k <= ranks.len() {
                ranks[k - 1]
            } else {
                0
            }
        };
        (0..=max_degree.min(self.terms.len().saturating_sub(2)))
            .map(|k| quotients[k].dim - rank_at(k) - rank_at(k + 1))
            .collect()
    }
}

/// The boundedness certificate for the ideal of a split extension:
/// tensor-nilpotency index, projective dimension over the enveloping
/// algebra, one-sided projectivity, and the combined verdict.
#[derive(Debug, Clone, serde::Serialize)]
pub struct BoundedCertificate {
    pub nilpotency: NilpotencyIndex,
    pub pd_env: PdResult,
    pub left_projective: bool,
    pub right_projective: bool,
    /// true only when every hypothesis is established
    pub bounded: bool,
    /// true when a cap was reached, so the verdict is "not established"
    /// rather than definitively false
    pub capped: bool,
}

impl BoundedCertificate {
    /// n*u when certified.
    pub fn nu(&self) -> Option<usize> {
        match (self.nilpotency.finite(), self.pd_env.finite(), self.bounded) {
            (Some(n), Some(u), true) => Some(n * u),
            _ => None,
        }
    }
}

pub fn bounded_certificate(
    se: &SplitExtension,
    cap_nilpotency: usize,
    cap_pd: usize,
) -> Result<BoundedCertificate, ResolutionError> {
    let m = m_bimodule(se);
    let nilpotency = nilpotency_index(&m, cap_nilpotency);
    let env = enveloping(se.b_algebra.clone());
    let m_env = m.as_left_module_over_env(env.env.clone());
    let pd_env = projective_dimension(&m_env, cap_pd)?;
    let left_projective = one_sided_projectivity(&m, Side::Left)?;
    let right_projective = one_sided_projectivity(&m, Side::Right)?;
    let capped = nilpotency.finite().is_none() || pd_env.finite().is_none();
    let bounded = nilpotency.finite().is_some()
        && pd_env.finite().is_some()
        && (left_projective || right_projective);
    Ok(BoundedCertificate {
        nilpotency,
        pd_env,
        left_projective,
        right_projective,
        bounded,
        capped,
    })
}

/// Global-dimension transfer data: both global dimensions, their finiteness
/// agreement when decidable, and exactness of the induced-module resolutions
/// of every vertex simple obtained from the reduced relative resolution.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SmoothnessReport {
    pub gldim_a: PdResult,
    pub gldim_b: PdResult,
    /// Some(true/false) when both sides are decided within the cap
    pub finiteness_agrees: Option<bool>,
    pub induced_resolutions_exact: bool,
}

pub fn smoothness_transfer_check(
    se: &SplitExtension,
    cap: usize,
    budget: &Budget,
) -> Result<SmoothnessReport, ResolutionError> {
    let gldim_a = global_dimension(&se.algebra, cap)?;
    let gldim_b = global_dimension(&se.b_algebra, cap)?;
    let finiteness_agrees = match (gldim_a.finite(), gldim_b.finite()) {
        (Some(_), Some(_)) => Some(true),
        _ => None,
    };
    // re-derive the finite induced resolutions of the vertex simples
    let m = m_bimodule(se);
    let nil = nilpotency_index(&m, cap.max(2));
    let mut induced_ok = true;
    if let Some(n) = nil.finite() {
        let res = crate::bar::reduced_relative_resolution(se, n, budget)
            .map_err(|e| ResolutionError::Other(e.to_string()))?;
        for v in 0..se.algebra.idempotents.len() {
            let s = Module::simple_at(se.algebra.clone(), v, Side::Left);
            let complex = res
                .tensor_with_left_module(&s)
                .map_err(|e| ResolutionError::Other(e.to_string()))?;
            let h = complex.homology_dims();
            if h.iter().any(|d| d.value() != 0) {
                induced_ok = false;
            }
        }
    } else {
        induced_ok = false;
    }
    Ok(SmoothnessReport {
        gldim_a,
        gldim_b,
        finiteness_agrees,
        induced_resolutions_exact: induced_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{compile_algebra, split_from_marked};
    use crate::quiver::QuiverSpec;
    use crate::scalar::Field;

    fn load(text: &str) -> (crate::algebra::CompiledAlgebra, SplitExtension) {
        let spec = QuiverSpec::parse(text).unwrap();
        let c = compile_algebra(&spec).unwrap();
        let se = split_from_marked(&c).unwrap();
        (c, se)
    }

    #[test]
    fn radical_of_semisimple_and_dual_numbers() {
        let (c, se) = load(crate::samples::A2);
        assert_eq!(radical(&se.b_algebra).unwrap().cols(), 0);
        assert_eq!(radical(&c.algebra).unwrap().cols(), 1);
        let (cd, _) = load(crate::samples::DUAL_NUMBERS);
        let r = radical(&cd.algebra).unwrap();
        assert_eq!(r.cols(), 1);
        assert_eq!(r.col(0), &vec![(1u32, Field::Rational.one())]);
    }

    #[test]
    fn trace_form_radical_matches_presented_one() {
        // strip the stored radical of the dual numbers and recompute in
        // characteristic zero through the trace form
        let (cd, _) = load(crate::samples::DUAL_NUMBERS);
        let mut raw = (*cd.algebra).clone();
        raw.radical = None;
        let r = radical(&raw).unwrap();
        assert_eq!(r.cols(), 1);
    }

    #[test]
    fn radical_unsupported_over_prime_field_raw_tables() {
        let spec = QuiverSpec::parse(
            "field = \"GF(5)\"\nvertices = [\"1\"]\n\n[[arrows]]\nname = \"x\"\nsource = \"1\"\ntarget = \"1\"\n\n[[relations]]\nterms = [{ coeff = \"1\", path = [\"x\", \"x\"] }]\n",
        )
        .unwrap();
        let c = compile_algebra(&spec).unwrap();
        let mut raw = (*c.algebra).clone();
        raw.radical = None;
        assert!(matches!(
            radical(&raw),
            Err(ResolutionError::RadicalUnavailable)
        ));
    }

    #[test]
    fn cover_of_vertex_simple() {
        let (c, _) = load(crate::samples::A2);
        let s1 = Module::simple_at(c.algebra.clone(), 0, Side::Left);
        let cover = projective_cover(&s1).unwrap();
        // P(S_1) = A e_1 = span{e1, a}: kernel is the radical part
        assert_eq!(cover.projective.dim, 2);
        assert_eq!(cover.kernel.dim, 1);
        assert_eq!(cover.multiplicities, vec![1, 0]);
    }

    #[test]
    fn cover_of_projective_is_isomorphism() {
        let (c, _) = load(crate::samples::A2);
        let (p1, _) = vertex_projective(&c.algebra, 0, Side::Left);
        assert!(is_projective(&p1).unwrap());
        let reg = Module::regular(c.algebra.clone(), Side::Left);
        assert!(is_projective(&reg).unwrap());
    }

    #[test]
    fn cover_of_simple_over_dual_numbers() {
        let (cd, _) = load(crate::samples::DUAL_NUMBERS);
        let s = Module::simple_at(cd.algebra.clone(), 0, Side::Left);
        let cover = projective_cover(&s).unwrap();
        assert_eq!(cover.projective.dim, 2);
        assert_eq!(cover.kernel.dim, 1);
        // periodic: pd is infinite, reported as a bound
        assert_eq!(
            projective_dimension(&s, 6).unwrap(),
            PdResult::AtLeast(6)
        );
    }

    #[test]
    fn minimal_resolution_of_a2_simple() {
        let (c, _) = load(crate::samples::A2);
        let s1 = Module::simple_at(c.algebra.clone(), 0, Side::Left);
        let res = minimal_resolution(&s1, 5).unwrap();
        assert_eq!(res.finished_pd, Some(1));
        assert_eq!(res.steps.len(), 2);
        // differentials compose to zero
        let d1 = &res.steps[1].differential;
        let d0 = &res.steps[0].differential;
        assert!(d0.mat_mul(d1).is_zero_mat());
    }

    #[test]
    fn zero_module_has_pd_zero() {
        let (c, _) = load(crate::samples::A2);
        let z = Module::zero(c.algebra.clone(), Side::Left);
        assert_eq!(projective_dimension(&z, 4).unwrap(), PdResult::Finite(0));
    }

    #[test]
    fn global_dimensions_of_corpus() {
        let (c, se) = load(crate::samples::A2);
        assert_eq!(global_dimension(&c.algebra, 8).unwrap(), PdResult::Finite(1));
        assert_eq!(global_dimension(&se.b_algebra, 8).unwrap(), PdResult::Finite(0));
        let (c3, se3) = load(crate::samples::A3_REL);
        assert_eq!(global_dimension(&c3.algebra, 8).unwrap(), PdResult::Finite(2));
        assert_eq!(global_dimension(&se3.b_algebra, 8).unwrap(), PdResult::Finite(1));
        let (cd, _) = load(crate::samples::DUAL_NUMBERS);
        assert_eq!(global_dimension(&cd.algebra, 6).unwrap(), PdResult::AtLeast(6));
    }

    #[test]
    fn one_sided_projectivity_cases() {
        // over a semisimple base everything is projective
        let (_c, se) = load(crate::samples::A2);
        let m = m_bimodule(&se);
        assert!(one_sided_projectivity(&m, Side::Left).unwrap());
        assert!(one_sided_projectivity(&m, Side::Right).unwrap());
        // the ideal of the linear three-vertex quiver: projective on the
        // left (vertex 3 is a sink in B), not on the right
        let (_c3, se3) = load(crate::samples::A3_REL);
        let m3 = m_bimodule(&se3);
        assert!(one_sided_projectivity(&m3, Side::Left).unwrap());
        assert!(!one_sided_projectivity(&m3, Side::Right).unwrap());
        // a non-projective module over the dual numbers
        let (cd, _) = load(crate::samples::DUAL_NUMBERS);
        let s = Module::simple_at(cd.algebra.clone(), 0, Side::Left);
        assert!(!is_projective(&s).unwrap());
    }

    #[test]
    fn tor_cases() {
        let (c, se) = load(crate::samples::A2);
        // Z projective over the enveloping algebra: Tor vanishes upward
        let m = m_bimodule(&se);
        let breg = Bimodule::regular(se.b_algebra.clone());
        let t = tor_over_env(&breg, &m, 4).unwrap();
        assert!(t.complete);
        assert_eq!(t.dims[0], 0); // M_B = 0 here
        assert!(t.dims[1..].iter().all(|d| *d == 0));
        // Tor_0 = dim of the env tensor
        let x = Bimodule::regular(c.algebra.clone()).restrict(se.b_algebra.clone(), &se.b_indices);
        let t2 = tor_over_env(&x, &breg, 3).unwrap();
        assert_eq!(
            t2.dims[0],
            crate::tensor::tensor_over_env(&x, &breg).dim
        );
    }

    #[test]
    fn two_sided_bar_over_base_field() {
        // B = k: the resolution collapses to an exact complex of k-spaces
        let (_cd, sed) = load(crate::samples::DUAL_NUMBERS);
        let m = m_bimodule(&sed);
        let bar = two_sided_bar_resolution(&m, 4, &Budget::default()).unwrap();
        let h = bar.augmented.homology_dims();
        for k in 0..=4 {
            assert_eq!(h[k].value(), 0, "degree {k}");
        }
    }

    #[test]
    fn two_sided_bar_exact_and_tor_agrees() {
        let (_c, se) = load(crate::samples::A3_REL);
        let m = m_bimodule(&se);
        let bar = two_sided_bar_resolution(&m, 4, &Budget::default()).unwrap();
        // d^2 = 0 holds by construction; exactness in the window
        let h = bar.augmented.homology_dims();
        for k in 0..=4 {
            assert_eq!(h[k].value(), 0, "degree {k}");
        }
        // Tor through the bar resolution matches the minimal-resolution route
        let breg = Bimodule::regular(se.b_algebra.clone());
        let via_bar = bar.tor_dims(&breg, 3);
        let via_min = tor_over_env(&breg, &m, 3).unwrap();
        assert_eq!(via_bar, via_min.dims[..via_bar.len()]);
    }

    #[test]
    fn certificates_of_corpus() {
        let (_c, se) = load(crate::samples::A2);
        let cert = bounded_certificate(&se, 8, 8).unwrap();
        assert_eq!(cert.nilpotency, NilpotencyIndex::Finite(2));
        assert_eq!(cert.pd_env, PdResult::Finite(0));
        assert!(cert.left_projective && cert.right_projective);
        assert!(cert.bounded && !cert.capped);
        assert_eq!(cert.nu(), Some(0));

        let (_cd, sed) = load(crate::samples::DUAL_NUMBERS);
        let cert = bounded_certificate(&sed, 8, 8).unwrap();
        assert!(!cert.bounded);
        assert!(cert.capped);
        assert_eq!(cert.nilpotency, NilpotencyIndex::AtLeast(8));
        // over the base field the ideal is free on both sides; only the
        // nilpotency hypothesis fails
        assert!(cert.left_projective && cert.right_projective);
        assert_eq!(cert.pd_env, PdResult::Finite(0));

        let (_cu, seu) = load(crate::samples::A2_UNMARKED);
        let cert = bounded_certificate(&seu, 8, 8).unwrap();
        assert_eq!(cert.nilpotency, NilpotencyIndex::Finite(1));
        assert_eq!(cert.pd_env, PdResult::Finite(0));
        assert!(cert.bounded);
        assert_eq!(cert.nu(), Some(0));

        let (_c3, se3) = load(crate::samples::A3_REL);
        let cert = bounded_certificate(&se3, 8, 8).unwrap();
        assert_eq!(cert.nilpotency, NilpotencyIndex::Finite(2));
        assert_eq!(cert.pd_env, PdResult::Finite(1));
        assert!(cert.left_projective && !cert.right_projective);
        assert!(cert.bounded);
        assert_eq!(cert.nu(), Some(2));
    }

    #[test]
    fn smoothness_transfer_on_corpus() {
        for text in [crate::samples::A2, crate::samples::A2_UNMARKED, crate::samples::A3_REL] {
            let (_c, se) = load(text);
            let rep = smoothness_transfer_check(&se, 8, &Budget::default()).unwrap();
            assert_eq!(rep.finiteness_agrees, Some(true), "{text}");
            assert!(rep.induced_resolutions_exact, "{text}");
        }
    }

    #[test]
    fn tensor_power_pd_bound() {
        // pd(M^(x)p) <= p*u for one-side projective M with finite u
        let (_c3, se3) = load(crate::samples::A3_REL);
        let m3 = m_bimodule(&se3);
        let env = enveloping(se3.b_algebra.clone());
        let powers = crate::tensor::tensor_powers(&m3, 3);
        let u = 1usize;
        for p in 1..=3 {
            if powers[p].bimodule.dim == 0 {
                continue;
            }
            let z = powers[p].bimodule.as_left_module_over_env(env.env.clone());
            let pd = projective_dimension(&z, 8).unwrap();
            match pd {
                PdResult::Finite(d) => assert!(d <= p * u, "p={p} pd={d}"),
                PdResult::AtLeast(_) => panic!("unexpected cap"),
            }
        }
    }

    #[test]
    fn hereditary_random_quivers_have_gldim_at_most_one() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..6 {
            let spec = crate::samples::random_dag_spec(&mut rng, Field::Rational, 4, 4);
            if !spec.relations.is_empty() {
                continue;
            }
            let c = compile_algebra(&spec).unwrap();
            match global_dimension(&c.algebra, 6).unwrap() {
                PdResult::Finite(d) => assert!(d <= 1, "dim {d}"),
                PdResult::AtLeast(_) => panic!("hereditary algebra hit the cap"),
            }
        }
    }
}
