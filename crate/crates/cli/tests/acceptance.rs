//! End-to-end acceptance checks. Each test prints one PASS/FAIL line.

use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;

use ifsdyn::random::{agreeing_prefix, random_alphabet, random_contraction, random_sequence, MapKind};
use ifsdyn::render::ChaosGameConfig;
use ifsdyn::verify::{overlapping_pair, sierpinski};
use ifsdyn::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1.0 / (1u64 << 40) as f64;
const LOG3_LOG2: f64 = 1.584962500721156;

fn report(n: u32, what: &str, ok: bool, detail: String) {
    println!("{} criterion {n}: {what} ({detail})", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {detail}");
}

fn spaces() -> Vec<SpaceBox> {
    vec![
        SpaceBox::unit(1).unwrap(),
        SpaceBox::unit(2).unwrap(),
        SpaceBox::new(&[-1.0, 0.0], &[2.0, 0.5]).unwrap(),
        SpaceBox::unit(3).unwrap(),
    ]
}

fn pick_alphabet(rng: &mut ChaCha8Rng) -> Arc<ContractionAlphabet> {
    let all = spaces();
    let space = all[rng.gen_range(0..all.len())];
    let m = rng.gen_range(2..=4);
    Arc::new(random_alphabet(rng, &space, m, MapKind::General { max_ratio: 0.9 }).unwrap())
}

/// Sup over the box of |(A - B)x + (a - b)|: a convex function, so the
/// maximum sits on a vertex. Enumerated here from the bounds directly.
fn oracle_sup(f: &AffineContraction, g: &AffineContraction) -> f64 {
    let space = f.space();
    let dim = space.dim();
    let (fa, ga) = (f.matrix(), g.matrix());
    (0..1usize << dim)
        .map(|mask| {
            let x: Vec<f64> = (0..dim)
                .map(|i| if mask >> i & 1 == 1 { space.upper()[i] } else { space.lower()[i] })
                .collect();
            (0..dim)
                .map(|r| {
                    let v: f64 = (0..dim).map(|c| (fa[r][c] - ga[r][c]) * x[c]).sum::<f64>() + f.offset()[r] - g.offset()[r];
                    v * v
                })
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

fn oracle_bounded(f: &AffineContraction, g: &AffineContraction) -> f64 {
    let d = oracle_sup(f, g);
    d / (1.0 + d)
}

/// The weighted series summed term by term from `index`, far past the tolerance.
fn oracle_series(f: &IfsSequence, g: &IfsSequence) -> f64 {
    (1..=60u64)
        .map(|k| oracle_bounded(f.alphabet().map(f.index(k)), g.alphabet().map(g.index(k))) / (k as f64).exp2())
        .sum()
}

fn line_alphabet(n: usize) -> (Arc<ContractionAlphabet>, Vec<Symbol>) {
    let space = SpaceBox::unit(1).unwrap();
    let r = 1.0 / (n as f64 + 1.0);
    let entries = (0..n)
        .map(|k| (format!("f{}", k + 1), validate_contraction(&space, &[vec![r]], &[k as f64 * r]).unwrap()))
        .collect();
    let a = Arc::new(ContractionAlphabet::new(space, entries).unwrap());
    let s = a.symbols().collect();
    (a, s)
}

#[test]
fn criterion_01_metric_axioms() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut violations = 0;
    let mut worst_oracle_gap = 0.0f64;
    for _ in 0..1000 {
        let all = spaces();
        let space = all[rng.gen_range(0..all.len())];
        let [f, g, h] = [(); 3].map(|_| random_contraction(&mut rng, &space, 0.95).unwrap());
        worst_oracle_gap = worst_oracle_gap.max((sup_distance(&f, &g).unwrap() - oracle_sup(&f, &g)).abs());
        // the triangle check allows a few ulps of rounding in the sum
        for d in [sup_distance as fn(&_, &_) -> Result<f64>, bounded_distance] {
            let (fg, gf, gh, fh) = (d(&f, &g).unwrap(), d(&g, &f).unwrap(), d(&g, &h).unwrap(), d(&f, &h).unwrap());
            let ok = d(&f, &f).unwrap() == 0.0 && fg > 0.0 && fg == gf && fh <= (fg + gh) * (1.0 + 4.0 * f64::EPSILON);
            violations += usize::from(!ok);
        }
        violations += usize::from(bounded_distance(&f, &g).unwrap() >= 1.0);
    }
    let mut seq_violations = 0;
    let mut worst_series_gap = 0.0f64;
    for _ in 0..200 {
        let a = pick_alphabet(&mut rng);
        let [f, g, h] = [(); 3].map(|_| random_sequence(&mut rng, &a));
        let d = |x: &IfsSequence, y: &IfsSequence| sequence_distance(x, y, TOL).unwrap();
        let fg = d(&f, &g);
        let slack = 2.0 * fg.tail_bound;
        worst_series_gap = worst_series_gap.max((fg.value - oracle_series(&f, &g)).abs());
        let ok = d(&f, &f).value == 0.0
            && (fg.value - d(&g, &f).value).abs() <= slack
            && d(&f, &h).value <= fg.value + d(&g, &h).value + slack
            && fg.upper() < 1.0
            && (fg.value - oracle_series(&f, &g)).abs() <= slack;
        seq_violations += usize::from(!ok);
    }
    report(
        1,
        "metric axioms",
        violations == 0 && seq_violations == 0 && worst_oracle_gap <= 1e-12,
        format!("map violations {violations}, sequence violations {seq_violations}, vertex oracle gap {worst_oracle_gap:e}, series oracle gap {worst_series_gap:e}"),
    );
}

#[test]
fn criterion_02_agreeing_prefix_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut failures = 0;
    let mut worst = 0.0f64;
    for i in 0..200 {
        let n = 1 + i % 20;
        let a = pick_alphabet(&mut rng);
        let f = random_sequence(&mut rng, &a);
        let g = agreeing_prefix(&mut rng, &f, n);
        assert_eq!(f.prefix(n), g.prefix(n));
        let r = sequence_distance(&f, &g, TOL).unwrap();
        let ratio = r.upper() * (n as f64).exp2();
        worst = worst.max(ratio);
        failures += usize::from(ratio >= 1.0);
    }
    // the converse fails: closer than 1/4 yet different at index 2
    let (a, s) = line_alphabet(2);
    let f = IfsSequence::eventually_periodic(a.clone(), vec![], vec![s[0]]).unwrap();
    let g = IfsSequence::eventually_periodic(a.clone(), vec![s[0], s[1]], vec![s[0]]).unwrap();
    let d = sequence_distance(&f, &g, TOL).unwrap();
    let witness = d.upper() < 0.25 && f.index(1) == g.index(1) && f.index(2) != g.index(2);
    report(
        2,
        "agreeing prefixes are close",
        failures == 0 && witness,
        format!("failures {failures}, worst D*2^n {worst:.4}, converse witness D={:.6}", d.value),
    );
}

#[test]
fn criterion_03_shift_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_excess = f64::NEG_INFINITY;
    let mut continuity_failures = 0;
    for _ in 0..100 {
        let a = pick_alphabet(&mut rng);
        let (f, g) = (random_sequence(&mut rng, &a), random_sequence(&mut rng, &a));
        let d = sequence_distance(&f, &g, TOL).unwrap();
        let ds = sequence_distance(&shift(&f), &shift(&g), TOL).unwrap();
        let head = oracle_bounded(a.map(f.index(1)), a.map(g.index(1)));
        let err = (ds.value - (2.0 * d.value - head)).abs();
        worst_excess = worst_excess.max(err - (1e-10 + 2.0 * d.tail_bound));
        continuity_failures += usize::from(ds.value > 2.0 * d.upper());
    }
    report(
        3,
        "shift distance identity",
        worst_excess <= 0.0 && continuity_failures == 0,
        format!("worst error minus allowance {worst_excess:e}, continuity violations {continuity_failures}"),
    );
}

#[test]
fn criterion_04_group_property() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut shift_failures = 0;
    let mut scale_worst = 0.0f64;
    let mut zero_failures = 0;
    for _ in 0..50 {
        let a = pick_alphabet(&mut rng);
        let f = random_sequence(&mut rng, &a);
        let (n1, n2) = (rng.gen_range(0..100_000u64), rng.gen_range(0..100_000u64));
        let r = verify_group_property(&EvolutionOperator::SHIFT, &f, Time::Steps(n1), Time::Steps(n2), 0.0).unwrap();
        // independent check on the streams
        let composed = shift_n(&shift_n(&f, n2), n1);
        let direct = shift_n(&f, n1 + n2);
        shift_failures += usize::from(!r.passed || composed.prefix(200) != direct.prefix(200));
        zero_failures += usize::from(EvolutionOperator::SHIFT.evolve(&f, Time::Steps(0)).unwrap() != f);
    }
    for _ in 0..50 {
        let a = pick_alphabet(&mut rng);
        let f = random_sequence(&mut rng, &a);
        let (t1, t2) = (rng.gen_range(0.0..3.0), rng.gen_range(0.0..3.0));
        let op = EvolutionOperator::SCALE_EXP;
        let composed = op.evolve(&op.evolve(&f, Time::Real(t2)).unwrap(), Time::Real(t1)).unwrap();
        let direct = op.evolve(&f, Time::Real(t1 + t2)).unwrap();
        for s in a.symbols() {
            let (x, y) = (composed.alphabet().map(s), direct.alphabet().map(s));
            let (mx, my) = (x.matrix(), y.matrix());
            for (rx, ry) in mx.iter().zip(&my) {
                for (u, v) in rx.iter().zip(ry) {
                    scale_worst = scale_worst.max((u - v).abs());
                }
            }
            for (u, v) in x.offset().iter().zip(y.offset()) {
                scale_worst = scale_worst.max((u - v).abs());
            }
        }
        zero_failures += usize::from(op.evolve(&f, Time::Real(0.0)).unwrap() != f);
    }
    report(
        4,
        "group property",
        shift_failures == 0 && scale_worst <= 1e-12 && zero_failures == 0,
        format!("shift failures {shift_failures}, scale coefficient error {scale_worst:e}, time-zero failures {zero_failures}"),
    );
}

#[test]
fn criterion_05_periodicity() {
    let (a, s) = line_alphabet(6);
    let h = 10_000;
    let class = |f: &IfsSequence| classify_periodicity(f, h).classification;
    let mut bad = Vec::new();
    for n in 1..=4usize {
        let word = s[..n].to_vec();
        let periodic = IfsSequence::eventually_periodic(a.clone(), vec![], word.clone()).unwrap();
        let want = if n == 1 { Periodicity::Fixed } else { Periodicity::Periodic(n as u64) };
        if class(&periodic) != want {
            bad.push(format!("periodic n={n}"));
        }
        let eventually_fixed = IfsSequence::eventually_periodic(a.clone(), word.clone(), vec![s[0]]).unwrap();
        let want = if n == 1 { Periodicity::Fixed } else { Periodicity::EventuallyFixed(n as u64) };
        if class(&eventually_fixed) != want {
            bad.push(format!("eventually fixed n={n}"));
        }
        let pre = vec![s[4], s[5]];
        let mixed = IfsSequence::eventually_periodic(a.clone(), pre, word).unwrap();
        let want = if n == 1 {
            Periodicity::EventuallyFixed(2)
        } else {
            Periodicity::EventuallyPeriodic { preperiod: 2, period: n as u64 }
        };
        if class(&mixed) != want {
            bad.push(format!("preperiod 2 period {n}"));
        }
    }
    let constant = IfsSequence::eventually_periodic(a.clone(), vec![], vec![s[3]]).unwrap();
    if class(&constant) != Periodicity::Fixed || shift(&constant) != constant {
        bad.push("fixed point".into());
    }

    let blocks = IfsSequence::block_enumeration(a.clone(), vec![s[0], s[1]]).unwrap();
    let two = IfsSequence::eventually_periodic(a.clone(), vec![], vec![s[0], s[1]]).unwrap();
    let coexist = classify_periodicity(&blocks, 1000).classification == Periodicity::AperiodicUpTo(1000)
        && classify_periodicity(&two, 1000).classification == Periodicity::Periodic(2)
        && distinct_system(&blocks) == distinct_system(&two)
        && distinct_system(&blocks).names() == ["f1", "f2"];
    if !coexist {
        bad.push("block enumeration coexistence".into());
    }

    for n in 2..=4usize {
        let period: Vec<Symbol> = (0..n).flat_map(|r| (0..n).map(move |i| (r + i) % n)).map(|i| s[i]).collect();
        let f = IfsSequence::eventually_periodic(a.clone(), vec![], period).unwrap();
        if shift_n(&f, (n * n) as u64).prefix(300) != f.prefix(300) {
            bad.push(format!("rotation return n={n}"));
        }
    }
    report(5, "periodicity classification", bad.is_empty(), format!("mismatches {bad:?}"));
}

#[test]
fn criterion_06_density() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut failures = 0;
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let a = pick_alphabet(&mut rng);
        let f = random_sequence(&mut rng, &a);
        for n in 1..=12usize {
            let g = periodic_truncation(&f, n);
            let ratio = sequence_distance(&f, &g, TOL).unwrap().upper() * (n as f64).exp2();
            worst = worst.max(ratio);
            failures += usize::from(ratio >= 1.0 || g.prefix(n) != f.prefix(n));
        }
    }
    report(6, "periodic points are dense", failures == 0, format!("failures {failures} of 600, worst D*2^n {worst:.4}"));
}

#[test]
fn criterion_07_dimension() {
    let gasket = uniform_dimension(3, 0.5).unwrap().s;
    let e1 = (gasket - LOG3_LOG2).abs();
    let half = 0.5 * (-std::f64::consts::LN_2).exp();
    let evolved = evolved_dimension(gasket, 0.5, half).unwrap().s;
    let resolved = moran_dimension(&[half; 3]).unwrap().s;
    let e2 = (evolved - 0.792481250360578).abs().max((resolved - 0.792481250360578).abs());

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let m = rng.gen_range(2..=6);
        let r = rng.gen_range(0.05..0.45);
        let t = rng.gen_range(0.0..2.0);
        let space = SpaceBox::unit(2).unwrap();
        let a = Arc::new(random_alphabet(&mut rng, &space, m, MapKind::UniformSimilarity { ratio: r }).unwrap());
        let names: Vec<String> = a.symbols().map(|s| a.name(s).to_string()).collect();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        let f = IfsSequence::from_names(a.clone(), &[], &names).unwrap();
        let s = uniform_dimension(m, r).unwrap().s;
        let g = EvolutionOperator::SCALE_EXP.evolve(&f, Time::Real(t)).unwrap();
        let ratios = distinct_system(&g).ratios();
        let formula = evolved_dimension(s, r, r * (-t).exp()).unwrap().s;
        // closed form for m equal ratios
        let closed = (m as f64).ln() / -(r * (-t).exp()).ln();
        worst = worst.max((formula - moran_dimension(&ratios).unwrap().s).abs()).max((formula - closed).abs());
    }
    report(
        7,
        "dimension under evolution",
        e1 <= 1e-12 && e2 <= 1e-10 && worst <= 1e-10,
        format!("gasket error {e1:e}, ln2 error {e2:e}, two-path worst {worst:e}"),
    );
}

#[test]
fn criterion_08_open_set_condition() {
    let square = OpenBox::interior(&SpaceBox::unit(2).unwrap());
    let gasket = sierpinski();
    let satisfied = osc_check(&gasket, &square).unwrap().is_satisfied();

    let pair = overlapping_pair();
    let interval = OpenBox::interior(&SpaceBox::unit(1).unwrap());
    let witness_ok = match osc_check(&pair, &interval).unwrap().verdict {
        // open images are (0, 0.6) and (0.4, 1)
        OscVerdict::Violated(ifsdyn::osc::OscViolation::Overlap { witness, .. }) => witness[0] > 0.4 && witness[0] < 0.6,
        _ => false,
    };

    let seq = embed_finite(&gasket).unwrap();
    let mut preserved = [0u64, 1, 2, 5]
        .iter()
        .all(|&n| osc_preserved_under_shift(&seq, &square, n).unwrap().passed());
    let a = seq.alphabet().clone();
    let s: Vec<Symbol> = a.symbols().collect();
    let dropping = IfsSequence::eventually_periodic(a, vec![s[2]], vec![s[0], s[1]]).unwrap();
    let r = osc_preserved_under_shift(&dropping, &square, 1).unwrap();
    preserved &= r.passed() && r.original.len() == 3 && r.shifted.len() == 2;

    report(
        8,
        "open set condition",
        satisfied && witness_ok && preserved,
        format!("sierpinski satisfied {satisfied}, overlap witness {witness_ok}, shift preservation {preserved}"),
    );
}

#[test]
fn criterion_09_attractor_quality() {
    let gasket = sierpinski();
    let mut config = ChaosGameConfig::new(512, 1_000_000, 42);
    let chaos = attractor_chaos_game(&gasket, &config).unwrap();
    let estimate = box_counting_dimension(&chaos).unwrap().s;
    let err = (estimate - LOG3_LOG2).abs();

    let det = attractor_deterministic(&gasket, 512, 200, 0.0).unwrap();
    let contained = chaos.is_subset_of(&det.raster.dilate(1)).unwrap();

    let again = attractor_chaos_game(&gasket, &config).unwrap();
    let mut identical = again == chaos;
    for workers in [1, 3, 8] {
        config.workers = Some(workers);
        identical &= attractor_chaos_game(&gasket, &config).unwrap() == chaos;
    }
    report(
        9,
        "attractor rendering",
        err <= 0.08 && contained && identical,
        format!("box-counting {estimate:.5} (error {err:.5}), contained {contained}, bit-identical {identical}"),
    );
}

fn scenarios() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    paths
}

#[test]
fn criterion_10_cli() {
    let bin = env!("CARGO_BIN_EXE_ifsdyn");
    let mut failures = Vec::new();
    let paths = scenarios();
    for path in &paths {
        let status = Command::new(bin)
            .arg("--scenario")
            .arg(path)
            .args(["verify", "--suite", "all"])
            .output()
            .unwrap();
        if !status.status.success() {
            failures.push(format!("verify {}", path.display()));
        }
        let text = std::fs::read_to_string(path).unwrap();
        let parsed = Scenario::parse(&text).unwrap();
        let reparsed = Scenario::parse(&parsed.to_json()).unwrap();
        if reparsed != parsed || reparsed.to_json() != parsed.to_json() {
            failures.push(format!("round trip {}", path.display()));
        }
    }

    let tmp = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let render = |name: &str| {
        let out = tmp.join(name);
        let ok = Command::new(bin)
            .args(["--seed", "42", "attractor", "sierpinski", "--method", "chaos", "--points", "200000", "--out"])
            .arg(&out)
            .status()
            .unwrap()
            .success();
        assert!(ok, "attractor command failed");
        std::fs::read(out).unwrap()
    };
    let (first, second) = (render("acceptance_a.pgm"), render("acceptance_b.pgm"));
    if first != second || !first.starts_with(b"P2\n") {
        failures.push("pgm differs between runs".into());
    }
    report(
        10,
        "command line",
        failures.is_empty() && !paths.is_empty(),
        format!("{} scenarios, failures {failures:?}", paths.len()),
    );
}
