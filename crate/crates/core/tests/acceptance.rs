//! Acceptance criteria AC-1 through AC-9. Prints one PASS/FAIL line per
//! criterion and exits non-zero if any fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use holonomy::coords::{mutate, random_generic, CoordinateTuple, Sampling};
use holonomy::develop::{
    canonical_occurrences, check_nondegeneracy, develop, develop_patch, develop_with,
    extract_coordinates, generator_word, monodromy, nondegeneracy_certificate,
    verify_equivariance, Degeneracy, DevelopOptions, DevelopedComplex, DualPath, LiftedVertex,
    DEFAULT_PATCH_BUDGET,
};
use holonomy::mobius::{cross_ratio, trace_squared, Extended, MoebiusMap, ProjectivePoint};
use holonomy::surface::{
    canonical_triangulation, dual_graph_rooted, flip, quad_labels, Signature, SurfaceError,
    Triangulation,
};
use holonomy::thurston::grafting_data;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SIGNATURES: [(usize, &[usize]); 4] = [(1, &[3]), (0, &[3, 3, 3]), (1, &[4, 3]), (2, &[5])];
const BOUND: f64 = 1.6;

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn triangulation(g: usize, poles: &[usize]) -> Triangulation {
    canonical_triangulation(&Signature::new(g, poles.to_vec()).unwrap()).unwrap()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(1.0)
}

fn ext_rel(a: Extended, b: Extended) -> f64 {
    match (a, b) {
        (Extended::Finite(x), Extended::Finite(y)) => rel(x, y),
        (Extended::Infinity, Extended::Infinity) => 0.0,
        _ => f64::INFINITY,
    }
}

type Word = Vec<(usize, bool)>;

/// Ten distinct reduced words in the free generators, fixed per rank.
fn fixed_words(rank: usize) -> Vec<Word> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed + rank as u64);
    let mut out: Vec<Word> = Vec::new();
    while out.len() < 10 {
        let len = rng.gen_range(2..=6);
        let mut w: Word = Vec::with_capacity(len);
        while w.len() < len {
            let letter = (rng.gen_range(0..rank), rng.gen_bool(0.5));
            if w.last() != Some(&(letter.0, !letter.1)) {
                w.push(letter);
            }
        }
        if !out.contains(&w) {
            out.push(w);
        }
    }
    out
}

fn ac1() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for (g, poles) in SIGNATURES {
        let tri = triangulation(g, poles);
        for seed in 0..100 {
            let c = random_generic(&tri, seed, BOUND, Sampling::Complex);
            let dev = develop(&tri, &c).map_err(|e| e.to_string())?;
            let err = extract_coordinates(&dev).map_err(|e| e.to_string())?.max_relative_error(&c);
            ensure(err < 1e-9, || format!("({g},{poles:?}) seed {seed}: error {err:e}"))?;
            worst = worst.max(err);
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("max rel. error {worst:.2e} over 400 tuples in {elapsed:.2?}"))
}

fn ac2() -> Outcome {
    let mut worst: f64 = 0.0;
    for (g, poles) in SIGNATURES {
        let tri = triangulation(g, poles);
        for seed in 0..100 {
            let c = random_generic(&tri, seed, BOUND, Sampling::Complex);
            let r = verify_equivariance(&develop(&tri, &c).map_err(|e| e.to_string())?);
            ensure(r < 1e-9, || format!("({g},{poles:?}) seed {seed}: residual {r:e}"))?;
            worst = worst.max(r);
        }
    }
    let mut least_detected = f64::INFINITY;
    for (g, poles) in SIGNATURES {
        let tri = triangulation(g, poles);
        let c = random_generic(&tri, 1, BOUND, Sampling::Complex);
        let dev = develop(&tri, &c).map_err(|e| e.to_string())?;
        for t in 0..tri.triangle_count() {
            for corner in 0..3 {
                let (z, w) = dev.flags()[t][corner].hom();
                // Unit-size step orthogonal to the current point.
                let p = ProjectivePoint::new(z - 1e-3 * w.conj(), w + 1e-3 * z.conj()).unwrap();
                let r = verify_equivariance(&dev.with_flag(t, corner, p));
                ensure(r >= 1e-4, || {
                    format!("({g},{poles:?}) triangle {t} corner {corner}: perturbation gave {r:e}")
                })?;
                least_detected = least_detected.min(r);
            }
        }
    }
    Ok(format!(
        "max residual {worst:.2e}; every 1e-3 perturbation detected (least {least_detected:.2e})"
    ))
}

struct Probe {
    loops: Vec<DualPath>,
    lifts: Vec<LiftedVertex>,
}

/// Generator words and lifted marked points, based at `base`.
fn probe(dev: &DevelopedComplex, base: usize) -> Probe {
    let tri = dev.triangulation();
    let rank = dev.dual().cotree.len();
    let words = fixed_words(rank);
    let loops: Vec<DualPath> = words
        .iter()
        .map(|w| generator_word(dev.dual(), tri, base, w))
        .collect();
    let tree = dual_graph_rooted(tri, base);
    // The fundamental-domain framing and its translates by each generator
    // and inverse.
    let mut translates = vec![DualPath::empty(base)];
    for i in 0..rank {
        translates.push(generator_word(dev.dual(), tri, base, &[(i, false)]));
        translates.push(generator_word(dev.dual(), tri, base, &[(i, true)]));
    }
    let mut lifts = Vec::new();
    for (_, (t, corner)) in canonical_occurrences(tri) {
        let to = DualPath::from_root(&tree, tri, t);
        for l in &translates {
            lifts.push(LiftedVertex {
                path: l.then(&to),
                corner,
            });
        }
    }
    Probe { loops, lifts }
}

fn ac3() -> Outcome {
    let mut worst: f64 = 0.0;
    let (mut flips, mut skipped, mut quads) = (0usize, 0usize, 0usize);
    for (g, poles) in [(1, &[3][..]), (0, &[3, 3, 3][..])] {
        let tri = triangulation(g, poles);
        for a in tri.arcs() {
            let Ok(q) = quad_labels(&tri, a) else { continue };
            if flip(&tri, a).is_err() {
                continue;
            }
            let base = (0..tri.triangle_count())
                .find(|&t| t != q.near && t != q.far)
                .ok_or("no triangle outside the quadrilateral")?;
            let opts = DevelopOptions { base, rotation: 0 };
            for seed in 0..25 {
                let c = random_generic(&tri, 1000 + seed, BOUND, Sampling::Complex);
                if (c.get(a).unwrap() + 1.0).norm() < 1e-3 {
                    skipped += 1;
                    continue;
                }
                let before = develop_with(&tri, &c, opts).map_err(|e| e.to_string())?;
                let (tri2, c2) = mutate(&c, &tri, a).map_err(|e| e.to_string())?;
                let after = develop_with(&tri2, &c2, opts).map_err(|e| e.to_string())?;
                let p = probe(&before, base);
                for l in &p.loops {
                    let l2 = l.transport_across_flip(&tri, a, &tri2).map_err(|e| e.to_string())?;
                    let t1 = trace_squared(&l.holonomy(&before));
                    let t2 = trace_squared(&l2.holonomy(&after));
                    let d = rel(t1, t2);
                    ensure(d < 1e-8, || format!("({g},{poles:?}) arc {a} seed {seed}: trace² {t1} vs {t2}"))?;
                    worst = worst.max(d);
                }
                let mut pairs = Vec::with_capacity(p.lifts.len());
                for v in &p.lifts {
                    let v2 = v.transport_across_flip(&tri, a, &tri2).map_err(|e| e.to_string())?;
                    pairs.push((v.flag(&before), v2.flag(&after)));
                }
                let n = pairs.len();
                for i in 0..n {
                    for j in i + 1..n {
                        for k in j + 1..n {
                            for l in k + 1..n {
                                let (a0, b0) = (pairs[i], pairs[j]);
                                let (c0, d0) = (pairs[k], pairs[l]);
                                let (Ok(x), Ok(y)) = (
                                    cross_ratio(&a0.0, &b0.0, &c0.0, &d0.0),
                                    cross_ratio(&a0.1, &b0.1, &c0.1, &d0.1),
                                ) else {
                                    continue;
                                };
                                let d = ext_rel(x, y);
                                ensure(d < 1e-8, || {
                                    format!("({g},{poles:?}) arc {a} seed {seed}: framing cross-ratio off by {d:e}")
                                })?;
                                worst = worst.max(d);
                                quads += 1;
                            }
                        }
                    }
                }
                flips += 1;
            }
        }
    }
    Ok(format!(
        "{flips} flip+mutate runs ({skipped} excluded near -1), {quads} framing quadruples; max rel. deviation {worst:.2e}"
    ))
}

fn ac4() -> Outcome {
    let (mut flag_im, mut trace_im) = (0.0f64, 0.0f64);
    for (g, poles) in SIGNATURES {
        let tri = triangulation(g, poles);
        for seed in 0..50 {
            let c = random_generic(&tri, seed, BOUND, Sampling::PositiveReal);
            let dev = develop(&tri, &c).map_err(|e| e.to_string())?;
            for p in dev.flags().iter().flatten() {
                if let Some(z) = p.affine(1e-12) {
                    flag_im = flag_im.max(z.im.abs());
                }
            }
            let rep = monodromy(&dev);
            let mut maps: Vec<MoebiusMap> = rep.generators.iter().map(|g| g.matrix).collect();
            maps.extend(fixed_words(rep.rank()).iter().map(|w| rep.evaluate(w)));
            for m in maps {
                trace_im = trace_im.max(trace_squared(&m).im.abs());
            }
        }
    }
    ensure(flag_im < 1e-10, || format!("flag imaginary part {flag_im:e}"))?;
    ensure(trace_im < 1e-9, || format!("trace² imaginary part {trace_im:e}"))?;
    Ok(format!("max |Im flag| {flag_im:.2e}, max |Im trace²| {trace_im:.2e} over 200 positive tuples"))
}

fn ac5() -> Outcome {
    for (g, poles) in SIGNATURES {
        let sig = Signature::new(g, poles.to_vec()).unwrap();
        let tri = canonical_triangulation(&sig).unwrap();
        let m: usize = poles.iter().map(|n| n - 2).sum();
        let k = poles.len();
        let (g_, k_, m_) = (g as i64, k as i64, m as i64);
        ensure(tri.interior_arc_count() as i64 == m_ + 6 * g_ + 3 * k_ - 6, || format!("({g},{poles:?}) arcs"))?;
        ensure(tri.triangle_count() as i64 == m_ + 4 * g_ + 2 * k_ - 4, || format!("({g},{poles:?}) triangles"))?;
        ensure(develop(&tri, &CoordinateTuple::constant(&tri, Complex64::new(1.0, 0.0)))
            .map(|d| d.dual().cotree.len())
            .ok() == Some(2 * g + k - 1), || format!("({g},{poles:?}) cotree rank"))?;
        for (i, &n) in poles.iter().enumerate() {
            let on_i = (0..tri.vertex_count()).filter(|&v| tri.vertex_component(v) == i).count();
            ensure(on_i == n - 2, || format!("({g},{poles:?}) boundary {i} has {on_i} vertices"))?;
        }
    }
    for poles in [vec![3], vec![3, 3]] {
        match Signature::new(0, poles.clone()) {
            Err(SurfaceError::InvalidSignature(msg)) if msg.contains("non-negative") => {}
            other => return Err(format!("(0,{poles:?}) not rejected: {other:?}")),
        }
    }
    Ok("counts exact on 4 signatures; (0,(3)) and (0,(3,3)) rejected".into())
}

fn ac6() -> Outcome {
    let mut certs = 0;
    for (g, poles) in SIGNATURES {
        let tri = triangulation(g, poles);
        for seed in 0..100 {
            let c = random_generic(&tri, seed, BOUND, Sampling::Complex);
            let dev = develop(&tri, &c).map_err(|e| e.to_string())?;
            nondegeneracy_certificate(&dev).map_err(|e| format!("({g},{poles:?}) seed {seed}: {e}"))?;
            certs += 1;
        }
    }
    // Degenerate fixture: flags in {0, ∞} with boundary endpoints apart,
    // generators diagonal.
    let tri = triangulation(1, &[3]);
    let zero = ProjectivePoint::zero();
    let inf = ProjectivePoint::INFINITY;
    let mut flags = vec![[zero, inf, zero]; tri.triangle_count()];
    for b in tri.boundary_arcs() {
        let (t, s) = tri.locate(b.half_edge);
        flags[t][s] = zero;
        flags[t][(s + 1) % 3] = inf;
        flags[t][(s + 2) % 3] = zero;
    }
    let diag = |l: f64| {
        MoebiusMap::from_matrix([
            [Complex64::new(l, 0.0), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(1.0 / l, 0.0)],
        ])
        .unwrap()
    };
    match check_nondegeneracy(&tri, &flags, &[diag(2.0), diag(0.3)], 1e-9) {
        Err(Degeneracy::D2 { .. }) => {}
        other => return Err(format!("degenerate fixture not flagged D2: {other:?}")),
    }
    Ok(format!("{certs} certificates issued; {{0, ∞}} fixture flagged D2"))
}

fn ac7() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for (g, poles) in SIGNATURES {
        let tri = triangulation(g, poles);
        let m: usize = poles.iter().map(|n| n - 2).sum();
        for seed in 0..100 {
            for sampling in [Sampling::Complex, Sampling::PositiveReal] {
                let c = random_generic(&tri, seed, BOUND, sampling);
                let w = grafting_data(&tri, &c).map_err(|e| e.to_string())?;
                if sampling == Sampling::PositiveReal {
                    ensure(w.lamination.finite_leaves.is_empty(), || "positive tuple has finite leaves".into())?;
                }
                ensure(w.lamination.infinite_leaves.len() == m, || "infinite-leaf count".into())?;
                for (a, x) in c.iter() {
                    let bend = w.lamination.finite_leaves.get(&a).copied().unwrap_or(0.0);
                    let r = Complex64::from_polar(w.surface.shear[&a], bend);
                    let d = (r - x).norm() / x.norm().max(1.0);
                    ensure(d <= 1e-12, || format!("arc {a}: reconstruction off by {d:e}"))?;
                    worst = worst.max(d);
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} witnesses; max reconstruction error {worst:.2e}"))
}

fn ac8() -> Outcome {
    for (g, poles) in SIGNATURES {
        let tri = triangulation(g, poles);
        for seed in 0..10 {
            let a = serde_json::to_string(&random_generic(&tri, seed, BOUND, Sampling::Complex)).unwrap();
            let b = serde_json::to_string(&random_generic(&tri, seed, BOUND, Sampling::Complex)).unwrap();
            ensure(a == b, || "random tuples differ".into())?;
            let c = random_generic(&tri, seed, BOUND, Sampling::Complex);
            let w1 = serde_json::to_string(&grafting_data(&tri, &c).unwrap()).unwrap();
            let w2 = serde_json::to_string(&grafting_data(&tri, &c).unwrap()).unwrap();
            ensure(w1 == w2, || "witness differs".into())?;
        }
        let again = triangulation(g, poles);
        ensure(again.data() == tri.data(), || "canonical triangulation differs".into())?;
    }
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for (g, poles) in SIGNATURES {
        let tri = triangulation(g, poles);
        for a in tri.arcs() {
            let Ok(once) = flip(&tri, a) else { continue };
            let twice = flip(&once, a).map_err(|e| e.to_string())?;
            ensure(twice.canonical_form() == tri.canonical_form(), || format!("flip∘flip at arc {a}"))?;
            for seed in 0..10 {
                let c = random_generic(&tri, seed, BOUND, Sampling::Complex);
                if (c.get(a).unwrap() + 1.0).norm() < 1e-3 {
                    continue;
                }
                let (t1, c1) = mutate(&c, &tri, a).map_err(|e| e.to_string())?;
                let (t2, c2) = mutate(&c1, &t1, a).map_err(|e| e.to_string())?;
                ensure(t2.canonical_form() == tri.canonical_form(), || "mutate∘mutate triangulation".into())?;
                let mut by_arc = BTreeMap::new();
                for (b, x) in c2.iter() {
                    by_arc.insert(b, x);
                }
                for (b, x) in c.iter() {
                    let d = rel(x, by_arc[&b]);
                    ensure(d < 1e-12, || format!("mutate∘mutate arc {b} off by {d:e}"))?;
                    worst = worst.max(d);
                }
                checked += 1;
            }
        }
    }
    Ok(format!("byte-identical reruns; {checked} double mutations, max deviation {worst:.2e}"))
}

fn ac9() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_holonomy");
    let dir = std::env::temp_dir().join(format!("holonomy-ac9-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let tri_path = dir.join("tri.json");
    let witness_path = dir.join("witness.json");
    let svg_path = dir.join("patch.svg");
    let start = Instant::now();
    let run = |args: &[&str]| -> Result<(), String> {
        let out = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
        ensure(out.status.success(), || {
            format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr))
        })
    };
    run(&["generate", "--genus", "1", "--poles", "3", "-o", tri_path.to_str().unwrap()])?;
    run(&["develop", "--triangulation", tri_path.to_str().unwrap(), "--seed", "7", "-o", witness_path.to_str().unwrap()])?;
    run(&["render", "--triangulation", tri_path.to_str().unwrap(), "--seed", "7", "--depth", "4", "-o", svg_path.to_str().unwrap()])?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(2), || format!("pipeline took {elapsed:?}"))?;
    let svg = std::fs::read_to_string(&svg_path).map_err(|e| e.to_string())?;
    let doc = roxmltree::Document::parse(&svg).map_err(|e| e.to_string())?;
    let polygons = doc.descendants().filter(|n| n.has_tag_name("polygon")).count();
    let tri = triangulation(1, &[3]);
    let c = random_generic(&tri, 7, BOUND, Sampling::Complex);
    let expected = develop_patch(&tri, &c, 4, DEFAULT_PATCH_BUDGET).map_err(|e| e.to_string())?.len();
    ensure(polygons == expected, || format!("{polygons} polygons, patch has {expected}"))?;
    let witness: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&witness_path).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
    ensure(witness["schema"] == "holonomy.witness/1", || "witness schema".into())?;
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("pipeline in {elapsed:.2?}; {polygons} triangles = patch size at depth 4"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("AC-1", "round-trip", ac1),
        ("AC-2", "equivariance", ac2),
        ("AC-3", "flip/mutation coherence", ac3),
        ("AC-4", "Fuchsian positivity", ac4),
        ("AC-5", "combinatorial exactness", ac5),
        ("AC-6", "non-degeneracy certificate", ac6),
        ("AC-7", "grafting witness", ac7),
        ("AC-8", "determinism and involution", ac8),
        ("AC-9", "CLI smoke", ac9),
    ];
    let mut failed = 0;
    for (id, name, f) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(f))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("{id} PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("{id} FAIL {name}: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 9 criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
