//! Acceptance suite: one test per criterion, each printing a pass line.
//!
//! Corpus:
//!   (i)   two vertices, one marked arrow                  [specs/a2.toml]
//!   (ii)  linear three-vertex quiver with a relation      [specs/a3_rel.toml]
//!   (iii) four vertices, two marked arrows, one relation  [specs/four_vertex.toml]
//!   (iv)  dual numbers (negative control)                 [specs/dual_numbers.toml]
//!   (v)   degenerate extension with nothing marked        [specs/a2_unmarked.toml]
//!   (vi)  ten randomized small specs (seeded)

use hochschild::algebra::{compile_algebra, split_from_marked, CompiledAlgebra, SplitExtension};
use hochschild::bar::{
    iota_kappa, mbq_decomposition, reduced_relative_resolution, relative_complex,
    vanishing_check,
};
use hochschild::bimodule::{m_bimodule, restrict_to_b, Bimodule};
use hochschild::config::Budget;
use hochschild::jz::{f1_vanishing_window, han_transfer_report, jz_verify, HanVerdict};
use hochschild::linalg::{SparseMat, SparseVec};
use hochschild::quiver::QuiverSpec;
use hochschild::resolution::{bounded_certificate, global_dimension, PdResult};
use hochschild::samples;
use hochschild::scalar::Field;
use hochschild::tensor::{nilpotency_index, NilpotencyIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

struct Entry {
    name: &'static str,
    compiled: CompiledAlgebra,
    split: SplitExtension,
    /// coefficients used for bar-level checks
    x: Bimodule,
}

fn load(name: &'static str, text: &str) -> Entry {
    let spec = QuiverSpec::parse(text).unwrap();
    let compiled = compile_algebra(&spec).unwrap();
    let split = split_from_marked(&compiled).unwrap();
    let x = if name == "four_vertex" {
        // keep the bar complexes affordable on the seven-dimensional entry
        Bimodule::simple_pair(compiled.algebra.clone(), 1, 0)
    } else {
        Bimodule::regular(compiled.algebra.clone())
    };
    Entry {
        name,
        compiled,
        split,
        x,
    }
}

fn fixed_corpus() -> Vec<Entry> {
    vec![
        load("a2", samples::A2),
        load("a3_rel", samples::A3_REL),
        load("four_vertex", samples::FOUR_VERTEX),
        load("dual_numbers", samples::DUAL_NUMBERS),
        load("a2_unmarked", samples::A2_UNMARKED),
    ]
}

fn random_corpus(count: usize) -> Vec<Entry> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_55);
    let mut out = Vec::new();
    while out.len() < count {
        let spec = samples::random_dag_spec(&mut rng, Field::Prime(32003), 4, 3);
        let compiled = match compile_algebra(&spec) {
            Ok(c) => c,
            Err(_) => continue,
        };
        if compiled.algebra.dim > 5 {
            continue;
        }
        let split = match split_from_marked(&compiled) {
            Ok(s) => s,
            Err(_) => continue,
        };
        let x = Bimodule::regular(compiled.algebra.clone());
        out.push(Entry {
            name: "random",
            compiled,
            split,
            x,
        });
    }
    out
}

fn mat_square_is_zero(c: &hochschild::complex::ChainComplex) -> bool {
    (2..=c.top_degree()).all(|k| c.boundary(k - 1).mat_mul(&c.boundary(k)).is_zero_mat())
}

/// Criterion 1: the boundary law holds exactly for every complex the
/// corpus pipelines build, in degrees up to 6, within the runtime budget.
#[test]
fn criterion_01_boundary_law() {
    let t0 = Instant::now();
    let budget = Budget::default();
    let mut complexes = 0usize;
    for e in fixed_corpus().iter().chain(random_corpus(10).iter()) {
        let ik = iota_kappa(&e.split, &e.x, 6, &budget).unwrap();
        for c in [&*ik.triple.c, &*ik.triple.d, &*ik.triple.e] {
            assert!(mat_square_is_zero(c), "{}", e.name);
            complexes += 1;
        }
        let res = reduced_relative_resolution(&e.split, 4, &budget);
        if let Ok(res) = res {
            assert!(mat_square_is_zero(&res.augmented), "{}", e.name);
            complexes += 1;
        }
        let m = m_bimodule(&e.split);
        if m.dim > 0 {
            let bar = hochschild::resolution::two_sided_bar_resolution(&m, 4, &budget).unwrap();
            assert!(mat_square_is_zero(&bar.augmented), "{}", e.name);
            complexes += 1;
        }
    }
    let elapsed = t0.elapsed();
    assert!(
        elapsed.as_secs() < 60,
        "boundary-law sweep took {elapsed:?}"
    );
    println!("criterion 01 PASS: b∘b = 0 exactly on {complexes} complexes in {elapsed:?}");
}

/// Criterion 2: the contracting homotopy satisfies d t + t d = id in every
/// constructible degree and is right-linear over the big algebra, as exact
/// matrix identities, on the first three corpus entries.
#[test]
fn criterion_02_homotopy_law() {
    let budget = Budget::default();
    for text in [samples::A2, samples::A3_REL, samples::FOUR_VERTEX] {
        let e = load("h", text);
        // construction runs the homotopy identities; re-run both checks
        let res = reduced_relative_resolution(&e.split, 5, &budget).unwrap();
        res.verify_homotopy().unwrap();
        res.verify_homotopy_right_linear().unwrap();
    }
    println!("criterion 02 PASS: homotopy identities and right-linearity exact on (i)-(iii)");
}

/// Independent degree-<=1 oracle for the relative homology: the coinvariant
/// quotient and the two-sided tensor with the ideal are recomputed through
/// the generic cokernel route, with the boundary written down directly.
fn relative_h1_oracle(e: &Entry) -> (usize, usize) {
    let field = e.compiled.algebra.field;
    let x_b = restrict_to_b(&e.split, &e.x);
    let m = m_bimodule(&e.split);
    // E_0 = X / <b x - x b>
    let e0 = hochschild::tensor::coinvariants(&x_b);
    // E_1 = X (x)_{B^e} M through the generic route
    let e1 = hochschild::tensor::tensor_over_env_generic(&x_b, &m);
    // b_1(x (x) m) = x.m - m.x, entered directly
    let mut b1 = SparseMat::zero(e0.dim, e1.dim, field);
    for cls in 0..e1.dim {
        let rep = e1.section.col(cls);
        for (idx, coeff) in rep {
            let xi = *idx as usize / m.dim;
            let mo = *idx as usize % m.dim;
            let a_idx = e.split.m_indices[mo];
            let unit: SparseVec = vec![(xi as u32, field.one())];
            let xm = e.x.right[a_idx].apply(&unit);
            let mx = e.x.left[a_idx].apply(&unit);
            let diff = hochschild::linalg::axpy(&xm, &field.from_i64(-1), &mx);
            let projected = e0.proj.apply(&diff);
            for (i, c) in projected {
                b1.add_to(i as usize, cls, &coeff.mul(&c));
            }
        }
    }
    // with E_2 = 0 (index 2), H_1 = Ker b_1 and H_0 = E_0 / Im b_1
    let h1 = e1.dim - b1.rank();
    let h0 = e0.dim - b1.rank();
    (h0, h1)
}

/// Criterion 3: for the three index-2 entries the relative chain and
/// cochain spaces vanish from degree 2 on, and the degree-<=1 homology
/// matches an independent direct computation.
#[test]
fn criterion_03_vanishing_from_index() {
    let budget = Budget::default();
    for text in [samples::A2, samples::A3_REL, samples::FOUR_VERTEX] {
        let e = load("v", text);
        let m = m_bimodule(&e.split);
        assert_eq!(nilpotency_index(&m, 8), NilpotencyIndex::Finite(2));
        let rep = vanishing_check(&e.split, &e.x, 6, &budget).unwrap();
        assert_eq!(rep.nilpotency_index, 2);
        assert!(rep.chain_spaces_vanish_from_index);
        assert!(rep.homology_vanishes);
        assert!(rep.cohomology_vanishes);
        // oracle comparison in low degrees
        let rel = relative_complex(&e.split, &e.x, 6, &budget).unwrap();
        let dims = rel.complex.homology_dims();
        let (h0, h1) = relative_h1_oracle(&e);
        assert_eq!(dims[0].value(), h0, "{text}");
        assert_eq!(dims[1].value(), h1, "{text}");
    }
    println!("criterion 03 PASS: index-2 vanishing and the direct low-degree oracle agree on (i)-(iii)");
}

/// Criterion 4: the kernel decomposition identities hold exactly on the
/// first entry with regular coefficients for degrees 1..4, with binomial
/// summand counts (six blocks with two ideal slots at degree four).
#[test]
fn criterion_04_kernel_decomposition() {
    let budget = Budget::default();
    let e = load("a2", samples::A2);
    let binom = |n: usize, p: usize| -> usize {
        let mut acc = 1usize;
        for i in 0..p {
            acc = acc * (n - i) / (i + 1);
        }
        acc
    };
    for n in 1..=4 {
        let d = mbq_decomposition(&e.split, &e.x, n, &budget).unwrap();
        assert!(d.kernel_identity, "kernel identity at degree {n}");
        assert!(d.image_identity, "image identity at degree {n}");
        assert!(d.quotient_identity, "quotient identity at degree {n}");
        for p in 0..=n {
            assert_eq!(d.summands[p].len(), binom(n, p));
        }
        let total: usize = d.summands.iter().flatten().map(|s| s.dim).sum();
        assert_eq!(total, d.total_dim);
    }
    let d4 = mbq_decomposition(&e.split, &e.x, 4, &budget).unwrap();
    assert_eq!(d4.summands[2].len(), 6);
    println!("criterion 04 PASS: subspace identities exact for degrees 1..4, six blocks at (4, 2)");
}

/// Criterion 5: the comparison maps verify corpus-wide — injectivity,
/// surjectivity, vanishing composite above degree zero, and the chain-map
/// property (all verified inside the constructor, which errors otherwise).
#[test]
fn criterion_05_comparison_maps() {
    let budget = Budget::default();
    let mut entries = 0usize;
    for e in fixed_corpus().iter().chain(random_corpus(10).iter()) {
        let ik = iota_kappa(&e.split, &e.x, 5, &budget).unwrap();
        for k in 0..=5usize {
            assert_eq!(ik.triple.iota.matrix(k).rank(), ik.triple.c.dim(k));
            assert_eq!(ik.triple.kappa.matrix(k).rank(), ik.triple.e.dim(k));
            if k >= 1 {
                assert!(ik
                    .triple
                    .kappa
                    .matrix(k)
                    .mat_mul(ik.triple.iota.matrix(k))
                    .is_zero_mat());
            }
        }
        entries += 1;
    }
    println!("criterion 05 PASS: comparison maps verified on {entries} corpus entries");
}

/// Criterion 6: on every certified entry the subquotient complex is exact
/// from n*u on, and the long sequence verifies at every node in
/// [n*u + 1, 5], with explicitly constructed connecting maps re-checked
/// under randomized lifts; within the runtime budget.
#[test]
fn criterion_06_long_exact_window() {
    let t0 = Instant::now();
    let budget = Budget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xD317A);
    let mut verified = 0usize;
    for e in fixed_corpus().iter().chain(random_corpus(10).iter()) {
        let cert = bounded_certificate(&e.split, 8, 8).unwrap();
        if !cert.bounded {
            continue;
        }
        let nu = cert.nu().unwrap();
        let r = jz_verify(&e.split, &e.x, 6, 8, 8, &budget, &mut rng).unwrap();
        assert!(r.claimed, "{}", e.name);
        assert!(
            r.m_obs <= nu,
            "{}: measured degree {} exceeds bound {}",
            e.name,
            r.m_obs,
            nu
        );
        assert!(r.window_pass, "{}: {:?}", e.name, r.nodes.nodes);
        assert!(
            hochschild::jz::window_all_pass(&r.nodes, nu + 1, 5),
            "{}",
            e.name
        );
        // connecting maps for the window are materialized
        for k in (nu + 1)..=5 {
            assert!(
                r.deltas.iter().any(|d| d.degree == k),
                "{}: missing connecting map at degree {k}",
                e.name
            );
        }
        // first-page vanishing window of the certified entry
        let f1 = f1_vanishing_window(&e.split, &e.x, 5, &cert).unwrap();
        assert!(f1.hypothesis_ok, "{}", e.name);
        assert_eq!(f1.vanish_from_nu, Some(true), "{}", e.name);
        assert!(f1.vanish_from_index, "{}", e.name);
        verified += 1;
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs() < 120, "window sweep took {elapsed:?}");
    assert!(verified >= 4 + 10, "only {verified} certified entries");
    println!(
        "criterion 06 PASS: sequence verified on {verified} certified entries in {elapsed:?}"
    );
}

/// Criterion 7: the two Hochschild tables agree in the window on certified
/// entries, the mixed table vanishes from the projective dimension on, and
/// the first entry has table (2, 0, 0, 0, 0, 0), cross-checked against the
/// bar-complex route.
#[test]
fn criterion_07_homology_window_equality() {
    let budget = Budget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7A);
    for e in fixed_corpus().iter().chain(random_corpus(10).iter()) {
        let cert = bounded_certificate(&e.split, 8, 8).unwrap();
        if !cert.bounded {
            continue;
        }
        let r = han_transfer_report(&e.split, 6, 8, 8, &budget, 0, &mut rng).unwrap();
        assert_eq!(r.window_equal, Some(true), "{}", e.name);
        assert_eq!(r.h_bm_vanishes_from_u, Some(true), "{}", e.name);
        assert!(r.summand_inequality, "{}", e.name);
    }
    // frozen values for the first entry, via the resolution route
    let e = load("a2", samples::A2);
    let r = han_transfer_report(&e.split, 6, 8, 8, &budget, 0, &mut rng).unwrap();
    assert_eq!(r.h_aa, vec![2, 0, 0, 0, 0, 0]);
    // independent route: the bar complex of the regular coefficients
    let bar = hochschild::bar::bar_complex(&e.compiled.algebra, &e.x, 6, &budget).unwrap();
    let bar_dims = bar.homology_dims();
    for k in 0..=5 {
        assert_eq!(bar_dims[k].value(), r.h_aa[k], "degree {k}");
    }
    println!("criterion 07 PASS: window equality, mixed-table vanishing, and the frozen table agree with the bar route");
}

/// Criterion 8: both global dimensions are finite on certified entries; the
/// first entry has base dimension 0 and full dimension 1 (hand resolutions).
#[test]
fn criterion_08_global_dimension_transfer() {
    let budget = Budget::default();
    for e in fixed_corpus().iter().chain(random_corpus(10).iter()) {
        let cert = bounded_certificate(&e.split, 8, 8).unwrap();
        if !cert.bounded {
            continue;
        }
        let rep =
            hochschild::resolution::smoothness_transfer_check(&e.split, 8, &budget).unwrap();
        assert_eq!(rep.finiteness_agrees, Some(true), "{}", e.name);
        assert!(rep.induced_resolutions_exact, "{}", e.name);
    }
    let e = load("a2", samples::A2);
    assert_eq!(
        global_dimension(&e.split.b_algebra, 8).unwrap(),
        PdResult::Finite(0)
    );
    assert_eq!(
        global_dimension(&e.compiled.algebra, 8).unwrap(),
        PdResult::Finite(1)
    );
    println!("criterion 08 PASS: global dimensions finite on certified entries; frozen values hold");
}

/// Criterion 9 (negative control): the dual numbers are rejected by the
/// certificate, their homology matches the periodic two-term resolution
/// frozen by hand, and the global dimension reports a cap.
#[test]
fn criterion_09_negative_control() {
    let budget = Budget::default();
    let e = load("dual", samples::DUAL_NUMBERS);
    let cert = bounded_certificate(&e.split, 8, 8).unwrap();
    assert!(!cert.bounded);
    assert_eq!(cert.nilpotency, NilpotencyIndex::AtLeast(8));

    // hand oracle: the periodic complex ... -> A -(2x)-> A -(0)-> A with
    // A = span{1, x}; multiplication by 2x sends 1 to 2x and x to 0
    let f = Field::Rational;
    let zero = SparseMat::zero(2, 2, f);
    let mut mul2x = SparseMat::zero(2, 2, f);
    mul2x.set(1, 0, f.from_i64(2));
    let mut dims = vec![2usize; 8];
    dims.push(2);
    let boundaries: Vec<SparseMat> = (1..=8)
        .map(|k| if k % 2 == 1 { zero.clone() } else { mul2x.clone() })
        .collect();
    let oracle = hochschild::complex::ChainComplex::new(f, dims, boundaries).unwrap();
    let oracle_dims = oracle.homology_dims();

    let bar = hochschild::bar::bar_complex(&e.compiled.algebra, &e.x, 6, &budget).unwrap();
    let bar_dims = bar.homology_dims();
    assert_eq!(bar_dims[0].value(), 2);
    assert_eq!(oracle_dims[0].value(), 2);
    for k in 1..=5 {
        assert_eq!(bar_dims[k].value(), 1, "degree {k}");
        assert_eq!(oracle_dims[k].value(), 1, "oracle degree {k}");
    }
    assert_eq!(
        global_dimension(&e.compiled.algebra, 8).unwrap(),
        PdResult::AtLeast(8)
    );
    // the transfer report refuses to claim anything
    let mut rng = ChaCha8Rng::seed_from_u64(0x9);
    let r = han_transfer_report(&e.split, 6, 8, 8, &budget, 200_000, &mut rng).unwrap();
    assert_eq!(r.verdict, HanVerdict::HypothesesNotMet);
    println!("criterion 09 PASS: negative control rejected; homology matches the periodic oracle");
}

/// Criterion 10: over random quivers, the absence of oriented cycles is
/// equivalent to finite tensor nilpotency of the arrow bimodule over the
/// vertex span; within the runtime budget.
#[test]
fn criterion_10_cycles_and_nilpotency() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1C7E5);
    for i in 0..10 {
        let quiver = samples::random_quiver(&mut rng, 5, 6);
        let (_, arrows) = hochschild::bimodule::arrow_bimodule(&quiver, Field::Rational);
        let cap = quiver.vertices.len() + 1;
        let finite = nilpotency_index(&arrows, cap).finite().is_some();
        assert_eq!(
            quiver.has_oriented_cycle(),
            !finite,
            "quiver #{i} with {} arrows",
            quiver.arrows.len()
        );
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs() < 10, "cycle sweep took {elapsed:?}");
    println!("criterion 10 PASS: cycle detection matches tensor nilpotency on 10 random quivers in {elapsed:?}");
}

/// Criterion 11: two runs of the transfer command on the four-vertex entry
/// produce byte-identical machine reports.
#[test]
fn criterion_11_determinism() {
    let bin = env!("CARGO_BIN_EXE_hochschild");
    let spec = concat!(env!("CARGO_MANIFEST_DIR"), "/../../specs/four_vertex.toml");
    let run = || {
        let out = std::process::Command::new(bin)
            .args([
                "han",
                spec,
                "--format",
                "machine",
            ])
            .output()
            .expect("binary runs");
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    let first = run();
    let second = run();
    assert!(!first.is_empty());
    assert_eq!(first, second, "reports differ between runs");
    println!("criterion 11 PASS: byte-identical machine reports across runs");
}
