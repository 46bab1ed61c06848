//! Bundled example specs and randomized spec generation for tests and demos.

use crate::quiver::{Arrow, Quiver, QuiverSpec};
use crate::scalar::Field;
use rand::Rng;

/// Two vertices, one marked arrow.
pub const A2: &str = include_str!("../../../specs/a2.toml");
/// Linear three-vertex quiver with one relation, top arrow marked.
pub const A3_REL: &str = include_str!("../../../specs/a3_rel.toml");
/// Four vertices, two marked arrows, one relation.
pub const FOUR_VERTEX: &str = include_str!("../../../specs/four_vertex.toml");
/// Dual numbers split as k + kx.
pub const DUAL_NUMBERS: &str = include_str!("../../../specs/dual_numbers.toml");
/// Degenerate extension with an empty marked set.
pub const A2_UNMARKED: &str = include_str!("../../../specs/a2_unmarked.toml");

/// A random acyclic quiver spec with every arrow marked, suitable for
/// pipeline smoke-testing: at most `max_vertices` vertices and `max_arrows`
/// arrows, arrows only from lower to higher vertex, and optionally one
/// monomial relation on a length-two path.
pub fn random_dag_spec<R: Rng>(rng: &mut R, field: Field, max_vertices: usize, max_arrows: usize) -> QuiverSpec {
    let nv = rng.random_range(2..=max_vertices);
    let vertices: Vec<String> = (1..=nv).map(|v| v.to_string()).collect();
    let na = rng.random_range(1..=max_arrows);
    let mut arrows = Vec::new();
    for k in 0..na {
        let s = rng.random_range(0..nv - 1);
        let t = rng.random_range(s + 1..nv);
        arrows.push(Arrow {
            name: format!("a{k}"),
            source: s,
            target: t,
        });
    }
    let quiver = Quiver { vertices, arrows };
    // maybe kill one composable pair
    let mut relations = Vec::new();
    if rng.random_bool(0.5) {
        let pairs: Vec<(usize, usize)> = (0..quiver.arrows.len())
            .flat_map(|i| (0..quiver.arrows.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| quiver.arrows[i].target == quiver.arrows[j].source)
            .collect();
        if !pairs.is_empty() {
            let (i, j) = pairs[rng.random_range(0..pairs.len())];
            relations.push(crate::quiver::Relation {
                terms: vec![crate::quiver::RelationTerm {
                    coeff: field.one(),
                    path: crate::quiver::Path {
                        source: quiver.arrows[i].source,
                        target: quiver.arrows[j].target,
                        arrows: vec![i, j],
                    },
                }],
            });
        }
    }
    let marked = (0..quiver.arrows.len()).collect();
    QuiverSpec {
        quiver,
        relations,
        marked,
        field,
        length_cap: 8,
    }
}

/// A random quiver that may contain oriented cycles (no relations, nothing
/// marked); used for cycle/nilpotency cross-checks.
pub fn random_quiver<R: Rng>(rng: &mut R, max_vertices: usize, max_arrows: usize) -> Quiver {
    let nv = rng.random_range(1..=max_vertices);
    let vertices: Vec<String> = (1..=nv).map(|v| v.to_string()).collect();
    let na = rng.random_range(1..=max_arrows);
    let arrows = (0..na)
        .map(|k| Arrow {
            name: format!("a{k}"),
            source: rng.random_range(0..nv),
            target: rng.random_range(0..nv),
        })
        .collect();
    Quiver { vertices, arrows }
}
