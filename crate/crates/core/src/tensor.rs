//! Tensor products over a base algebra, tensor powers, nilpotency index,
//! coinvariants/invariants, and tensors/Hom over the enveloping algebra.
//!
//! Every quotient construction stores its projection and a section, so later
//! boundary maps can be written as matrices without re-deriving the
//! identifications. Pair indices are always x-major: `(x, y) -> x * dim_y + y`.

use crate::bimodule::{Bimodule, Module};
use crate::linalg::{kron, QuotientSpace, SparseMat, SparseVec};

/// X ⊗_B Y together with the quotient data from X ⊗_k Y.
pub struct BTensor {
    pub bimodule: Bimodule,
    pub quotient: QuotientSpace,
}

/// Realizes X ⊗_B Y as the cokernel of (x, b, y) -> x.b ⊗ y − x ⊗ b.y,
/// with the outer actions induced from the left action on X and the right
/// action on Y.
///
/// When the base algebra is spanned by its orthogonal idempotents and both
/// bases are vertex-pure, an idempotent-matching fast path produces the same
/// quotient without elimination; the two routes agree exactly.
pub fn tensor_over_b(x: &Bimodule, y: &Bimodule) -> BTensor {
    let quotient = match fast_quotient(x, y) {
        Some(q) => q,
        None => generic_quotient(x, y),
    };
    let bimodule = induced_bimodule(x, y, &quotient);
    BTensor { bimodule, quotient }
}

/// The generic cokernel route (always valid).
pub fn tensor_over_b_generic(x: &Bimodule, y: &Bimodule) -> BTensor {
    let quotient = generic_quotient(x, y);
    let bimodule = induced_bimodule(x, y, &quotient);
    BTensor { bimodule, quotient }
}

fn generic_quotient(x: &Bimodule, y: &Bimodule) -> QuotientSpace {
    let field = x.field();
    let ambient = x.dim * y.dim;
    let mut relations: Vec<SparseVec> = Vec::new();
    for g in 0..x.algebra.dim {
        let xg = &x.right[g];
        let gy = &y.left[g];
        for xi in 0..x.dim {
            let xcol = xg.col(xi);
            for eta in 0..y.dim {
                let ycol = gy.col(eta);
                let mut rel: SparseVec = Vec::new();
                for (i, c) in xcol {
                    rel.push((*i * y.dim as u32 + eta as u32, c.clone()));
                }
                for (j, c) in ycol {
                    rel.push((xi as u32 * y.dim as u32 + *j, c.neg()));
                }
                rel.sort_by_key(|(i, _)| *i);
                let rel = merge(rel);
                if !rel.is_empty() {
                    relations.push(rel);
                }
            }
        }
    }
    QuotientSpace::from_relations(ambient, field, &relations)
}

fn fast_quotient(x: &Bimodule, y: &Bimodule) -> Option<QuotientSpace> {
    if !x.algebra.is_idempotent_basis() {
        return None;
    }
    let rt = x.right_types()?;
    let lt = y.left_types()?;
    let field = x.field();
    let ambient = x.dim * y.dim;
    let mut class_cols: Vec<u32> = Vec::new();
    for xi in 0..x.dim {
        for eta in 0..y.dim {
            if rt[xi] == lt[eta] {
                class_cols.push((xi * y.dim + eta) as u32);
            }
        }
    }
    let dim = class_cols.len();
    let mut proj_cols: Vec<SparseVec> = vec![Vec::new(); ambient];
    for (k, &c) in class_cols.iter().enumerate() {
        proj_cols[c as usize] = vec![(k as u32, field.one())];
    }
    let proj = SparseMat::from_cols(dim, field, proj_cols);
    let section_cols: Vec<SparseVec> = class_cols
        .iter()
        .map(|&c| vec![(c, field.one())])
        .collect();
    let section = SparseMat::from_cols(ambient, field, section_cols);
    Some(QuotientSpace {
        ambient,
        dim,
        field,
        proj,
        section,
    })
}

fn induced_bimodule(x: &Bimodule, y: &Bimodule, q: &QuotientSpace) -> Bimodule {
    let alg = x.algebra.clone();
    let idy = SparseMat::identity(y.dim, y.field());
    let idx = SparseMat::identity(x.dim, x.field());
    let mut left = Vec::with_capacity(alg.dim);
    let mut right = Vec::with_capacity(alg.dim);
    for g in 0..alg.dim {
        let lg = kron(&x.left[g], &idy);
        left.push(q.proj.mat_mul(&lg).mat_mul(&q.section));
        let rg = kron(&idx, &y.right[g]);
        right.push(q.proj.mat_mul(&rg).mat_mul(&q.section));
    }
    Bimodule::from_parts_unchecked(alg, q.dim, left, right)
}

fn merge(v: SparseVec) -> SparseVec {
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

/// One tensor power of a bimodule, with the flat projection from the
/// full k-linear tensor power `M^(x) p` when `p >= 1`.
pub struct TensorPower {
    pub power: usize,
    pub bimodule: Bimodule,
    /// Quotient `M^(x) p -> M^(x)_B p`; `None` for `p = 0` and for powers
    /// past the first vanishing one.
    pub flat: Option<QuotientSpace>,
}

/// Left-associated tensor powers `M^(x)_B p` for `p = 0 ..= up_to`.
/// The 0-th power is the regular bimodule `B`.
pub fn tensor_powers(m: &Bimodule, up_to: usize) -> Vec<TensorPower> {
    let mut out: Vec<TensorPower> = Vec::with_capacity(up_to + 1);
    out.push(TensorPower {
        power: 0,
        bimodule: Bimodule::regular(m.algebra.clone()),
        flat: None,
    });
    if up_to == 0 {
        return out;
    }
    out.push(TensorPower {
        power: 1,
        bimodule: m.clone(),
        flat: Some(QuotientSpace::trivial(m.dim, m.field())),
    });
    for p in 2..=up_to {
        let prev = &out[p - 1];
        if prev.bimodule.dim == 0 {
            out.push(TensorPower {
                power: p,
                bimodule: Bimodule::zero(m.algebra.clone()),
                flat: None,
            });
            continue;
        }
        let step = tensor_over_b(&prev.bimodule, m);
        let flat = prev.flat.as_ref().map(|pf| {
            let idm = SparseMat::identity(m.dim, m.field());
            let proj = step.quotient.proj.mat_mul(&kron(&pf.proj, &idm));
            let section = kron(&pf.section, &idm).mat_mul(&step.quotient.section);
            QuotientSpace {
                ambient: pf.ambient * m.dim,
                dim: step.quotient.dim,
                field: m.field(),
                proj,
                section,
            }
        });
        out.push(TensorPower {
            power: p,
            bimodule: step.bimodule,
            flat,
        });
    }
    out
}

/// Index of B-tensor nilpotency: least `n` with `M^(x)_B n = 0`, or `>= cap`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum NilpotencyIndex {
    Finite(usize),
    AtLeast(usize),
}

impl NilpotencyIndex {
    pub fn finite(&self) -> Option<usize> {
        match self {
            NilpotencyIndex::Finite(n) => Some(*n),
            NilpotencyIndex::AtLeast(_) => None,
        }
    }
}

impl std::fmt::Display for NilpotencyIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NilpotencyIndex::Finite(n) => write!(f, "{n}"),
            NilpotencyIndex::AtLeast(c) => write!(f, ">= {c}"),
        }
    }
}

pub fn nilpotency_index(m: &Bimodule, cap: usize) -> NilpotencyIndex {
    assert!(cap >= 1);
    if m.dim == 0 {
        return NilpotencyIndex::Finite(1);
    }
    let mut current = m.clone();
    for p in 2..=cap {
        let step = tensor_over_b(&current, m);
        if step.bimodule.dim == 0 {
            return NilpotencyIndex::Finite(p);
        }
        current = step.bimodule;
    }
    NilpotencyIndex::AtLeast(cap)
}

/// Coinvariants X_B = X / <b.x − x.b> with stored projection.
pub fn coinvariants(x: &Bimodule) -> QuotientSpace {
    let field = x.field();
    let mut relations: Vec<SparseVec> = Vec::new();
    for g in 0..x.algebra.dim {
        for xi in 0..x.dim {
            let unit: SparseVec = vec![(xi as u32, field.one())];
            let bx = x.left[g].apply(&unit);
            let xb = x.right[g].apply(&unit);
            let rel = crate::linalg::axpy(&bx, &field.from_i64(-1), &xb);
            if !rel.is_empty() {
                relations.push(rel);
            }
        }
    }
    QuotientSpace::from_relations(x.dim, field, &relations)
}

/// Invariants X^B = {x | b.x = x.b for all b}, as columns of a basis.
pub fn invariants(x: &Bimodule) -> SparseMat {
    let field = x.field();
    let nb = x.algebra.dim;
    let mut stacked = SparseMat::zero(nb * x.dim, x.dim, field);
    for g in 0..nb {
        for xi in 0..x.dim {
            let unit: SparseVec = vec![(xi as u32, field.one())];
            let bx = x.left[g].apply(&unit);
            let xb = x.right[g].apply(&unit);
            let diff = crate::linalg::axpy(&bx, &field.from_i64(-1), &xb);
            for (i, c) in diff {
                stacked.add_to(g * x.dim + i as usize, xi, &c);
            }
        }
    }
    stacked.kernel_basis()
}

/// X ⊗_{B^e} Z: the quotient of X ⊗_k Z by `x.b ⊗ z − x ⊗ b.z` and
/// `b.x ⊗ z − x ⊗ z.b`, with stored projection. Pair index `(x, z)` is
/// `x * dim_z + z`.
pub fn tensor_over_env(x: &Bimodule, z: &Bimodule) -> QuotientSpace {
    if x.algebra.is_idempotent_basis() {
        if let (Some(xrt), Some(xlt), Some(zlt), Some(zrt)) = (
            x.right_types(),
            x.left_types(),
            z.left_types(),
            z.right_types(),
        ) {
            let field = x.field();
            let ambient = x.dim * z.dim;
            let mut class_cols: Vec<u32> = Vec::new();
            for xi in 0..x.dim {
                for zi in 0..z.dim {
                    if xrt[xi] == zlt[zi] && xlt[xi] == zrt[zi] {
                        class_cols.push((xi * z.dim + zi) as u32);
                    }
                }
            }
            let dim = class_cols.len();
            let mut proj_cols: Vec<SparseVec> = vec![Vec::new(); ambient];
            for (k, &c) in class_cols.iter().enumerate() {
                proj_cols[c as usize] = vec![(k as u32, field.one())];
            }
            let proj = SparseMat::from_cols(dim, field, proj_cols);
            let section_cols: Vec<SparseVec> = class_cols
                .iter()
                .map(|&c| vec![(c, field.one())])
                .collect();
            let section = SparseMat::from_cols(ambient, field, section_cols);
            return QuotientSpace {
                ambient,
                dim,
                field,
                proj,
                section,
            };
        }
    }
    tensor_over_env_generic(x, z)
}

/// The generic two-sided cokernel route for X ⊗_{B^e} Z.
pub fn tensor_over_env_generic(x: &Bimodule, z: &Bimodule) -> QuotientSpace {
    let field = x.field();
    let ambient = x.dim * z.dim;
    let dz = z.dim as u32;
    let mut relations: Vec<SparseVec> = Vec::new();
    for g in 0..x.algebra.dim {
        for xi in 0..x.dim {
            let unit_x: SparseVec = vec![(xi as u32, field.one())];
            let xg = x.right[g].apply(&unit_x);
            let gx = x.left[g].apply(&unit_x);
            for zi in 0..z.dim {
                let unit_z: SparseVec = vec![(zi as u32, field.one())];
                let gz = z.left[g].apply(&unit_z);
                let zg = z.right[g].apply(&unit_z);
                // x.g ⊗ z − x ⊗ g.z
                let mut rel1: SparseVec = xg
                    .iter()
                    .map(|(i, c)| (*i * dz + zi as u32, c.clone()))
                    .collect();
                for (j, c) in &gz {
                    rel1.push((xi as u32 * dz + *j, c.neg()));
                }
                rel1.sort_by_key(|(i, _)| *i);
                let rel1 = merge(rel1);
                if !rel1.is_empty() {
                    relations.push(rel1);
                }
                // g.x ⊗ z − x ⊗ z.g
                let mut rel2: SparseVec = gx
                    .iter()
                    .map(|(i, c)| (*i * dz + zi as u32, c.clone()))
                    .collect();
                for (j, c) in &zg {
                    rel2.push((xi as u32 * dz + *j, c.neg()));
                }
                rel2.sort_by_key(|(i, _)| *i);
                let rel2 = merge(rel2);
                if !rel2.is_empty() {
                    relations.push(rel2);
                }
            }
        }
    }
    QuotientSpace::from_relations(ambient, field, &relations)
}

/// X ⊗_E Z for a right module X and a left module Z over the same algebra.
pub fn tensor_over_algebra(x: &Module, z: &Module) -> QuotientSpace {
    assert!(matches!(x.side, crate::bimodule::Side::Right));
    assert!(matches!(z.side, crate::bimodule::Side::Left));
    assert_eq!(x.algebra.dim, z.algebra.dim);
    let field = x.field();
    let ambient = x.dim * z.dim;
    let dz = z.dim as u32;
    let mut relations: Vec<SparseVec> = Vec::new();
    for g in 0..x.algebra.dim {
        for xi in 0..x.dim {
            let unit_x: SparseVec = vec![(xi as u32, field.one())];
            let xg = x.action[g].apply(&unit_x);
            for zi in 0..z.dim {
                let unit_z: SparseVec = vec![(zi as u32, field.one())];
                let gz = z.action[g].apply(&unit_z);
                let mut rel: SparseVec = xg
                    .iter()
                    .map(|(i, c)| (*i * dz + zi as u32, c.clone()))
                    .collect();
                for (j, c) in &gz {
                    rel.push((xi as u32 * dz + *j, c.neg()));
                }
                rel.sort_by_key(|(i, _)| *i);
                let rel = merge(rel);
                if !rel.is_empty() {
                    relations.push(rel);
                }
            }
        }
    }
    QuotientSpace::from_relations(ambient, field, &relations)
}

/// The space Hom_{B^e}(Z, X) of bimodule maps, with a basis of matrices.
pub struct HomEnv {
    pub dim: usize,
    /// Each basis element as an x.dim × z.dim matrix.
    pub basis: Vec<SparseMat>,
}

/// Hom_{B^e}(Z, X) as the kernel of the bimodule-compatibility constraints
/// inside the full linear-map space.
pub fn hom_over_env(z: &Bimodule, x: &Bimodule) -> HomEnv {
    let field = x.field();
    let unknowns = x.dim * z.dim; // F index (r, c) -> r * z.dim + c
    let nb = x.algebra.dim;
    let mut constraints = SparseMat::zero(2 * nb * unknowns, unknowns, field);
    let mut row_base = 0usize;
    for g in 0..nb {
        // F . z.left[g] − x.left[g] . F = 0 and same on the right
        for (which, (za, xa)) in [(&z.left[g], &x.left[g]), (&z.right[g], &x.right[g])]
            .into_iter()
            .enumerate()
        {
            let _ = which;
            for r in 0..x.dim {
                for c in 0..z.dim {
                    let fidx = r * z.dim + c;
                    // (F ∘ za) has entry at (r, c') for every za[(c, c')]
                    for cprime in 0..z.dim {
                        let coeff = za.get(c, cprime);
                        if !coeff.is_zero() {
                            constraints.add_to(row_base + r * z.dim + cprime, fidx, &coeff);
                        }
                    }
                    // (xa ∘ F) has entry at (r', c) for every xa[(r', r)]
                    for (rprime, coeff) in xa.col(r) {
                        constraints.add_to(
                            row_base + *rprime as usize * z.dim + c,
                            fidx,
                            &coeff.neg(),
                        );
                    }
                }
            }
            row_base += unknowns;
        }
    }
    let ker = constraints.kernel_basis();
    let mut basis = Vec::with_capacity(ker.cols());
    for j in 0..ker.cols() {
        let mut m = SparseMat::zero(x.dim, z.dim, field);
        for (idx, coeff) in ker.col(j) {
            let r = *idx as usize / z.dim;
            let c = *idx as usize % z.dim;
            m.set(r, c, coeff.clone());
        }
        basis.push(m);
    }
    HomEnv {
        dim: basis.len(),
        basis,
    }
}
