//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Runs without the libtest harness so the verdict lines always reach the
//! terminal. Expensive objects are built once and shared between criteria.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use flockgq::blt::{
    disjoint_lines, equiv_partition, fingerprint, fingerprint_classes, is_blt, linear_blt, search_blts, BltSet,
    BltVerdict,
};
use flockgq::field::GaloisField;
use flockgq::fieldred::cp_compare;
use flockgq::hemisystem::{
    build_hemisystem, complement, tactical_table, Hemisystem, HemisystemSpec, SChoice, TacticalTable, XPiTable,
};
use flockgq::knarr::{gq_verify, GenQuadrangle, KnarrModel};
use flockgq::polar::{DichotomyOutcome, LineType, Quadric, ReflexiveForm, SymplecticSpace};
use flockgq::pqgraph::{
    concurrency_graph, eigenspace_membership, indicator, inner_product_check, point_graph, srg_check, tight_set,
    tight_set_eigen_check, Graph, Membership, SrgParams,
};
use flockgq::projspace::{all_points, Subspace};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

fn gf(q: u32) -> GaloisField {
    GaloisField::new(q, 1, None).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

struct Built {
    ell: usize,
    s: Vec<usize>,
    hem: Hemisystem,
    tactical: TacticalTable,
}

struct Case {
    q: usize,
    label: String,
    blt: BltSet,
    model: KnarrModel,
    build_time: Duration,
    built: Vec<Built>,
}

fn build(model: &KnarrModel, blt: &BltSet, ell_index: usize, s: Vec<usize>) -> Built {
    let ells = disjoint_lines(blt).unwrap();
    let part = equiv_partition(blt, &ells[ell_index]).unwrap();
    let spec = HemisystemSpec::from_partition(model, &part, SChoice::Indices(s.clone())).unwrap();
    let table = XPiTable::new(model, &spec.ell, &spec.planes_on_ell).unwrap();
    let hem = build_hemisystem(model, &spec, &table).unwrap();
    let tactical = tactical_table(model, &spec, &table).unwrap();
    Built {
        ell: ell_index,
        s,
        hem,
        tactical,
    }
}

fn case(blt: BltSet, label: &str) -> Case {
    let blt = blt.standardize().unwrap();
    let t = Instant::now();
    let model = KnarrModel::from_blt(&blt).unwrap();
    Case {
        q: blt.q(),
        label: label.into(),
        blt,
        model,
        build_time: t.elapsed(),
        built: Vec::new(),
    }
}

/// q = 3 linear with every (ell, S); q = 5 linear and FTW with three seeded (ell, S) each.
fn cases() -> Vec<Case> {
    let mut out = Vec::new();
    let mut c3 = case(linear_blt(&gf(3)).unwrap(), "linear");
    let n3 = disjoint_lines(&c3.blt).unwrap().len();
    for ell in 0..n3 {
        for s in 0..3 {
            let b = build(&c3.model, &c3.blt, ell, vec![s]);
            c3.built.push(b);
        }
    }
    out.push(c3);

    let f5 = gf(5);
    let found = search_blts(&SymplecticSpace::new(&f5, 4).unwrap(), Some(2)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for (blt, label) in [(linear_blt(&f5).unwrap(), "linear"), (found[1].clone(), "FTW (search#1)")] {
        let mut c = case(blt, label);
        let n = disjoint_lines(&c.blt).unwrap().len();
        let mut ells: Vec<usize> = (0..n).collect();
        ells.shuffle(&mut rng);
        for &ell in &ells[..3] {
            let mut s: Vec<usize> = (0..4).collect();
            s.shuffle(&mut rng);
            let mut s = s[..2].to_vec();
            s.sort_unstable();
            let b = build(&c.model, &c.blt, ell, s);
            c.built.push(b);
        }
        out.push(c);
    }
    out
}

fn criterion_1(cases: &[Case]) -> Verdict {
    let mut notes = Vec::new();
    for c in cases {
        let q = c.q;
        let g = &c.model.gq;
        let t = Instant::now();
        let report = gq_verify(g);
        let elapsed = c.build_time + t.elapsed();
        let limit = if q == 3 { Duration::from_secs(5) } else { Duration::from_secs(120) };
        ensure(report.passed(), || format!("q={q} {}: {:?}", c.label, report.violations))?;
        ensure(g.num_points() == (q * q + 1) * (q * q * q + 1), || format!("q={q}: {} points", g.num_points()))?;
        ensure(g.num_lines() == (q + 1) * (q * q * q + 1), || format!("q={q}: {} lines", g.num_lines()))?;
        ensure(elapsed < limit, || format!("q={q} took {elapsed:?}"))?;
        notes.push(format!("q={q} {} {}/{} in {:.2?}", c.label, g.num_points(), g.num_lines(), elapsed));
    }
    Ok(notes.join("; "))
}

fn criterion_2(cases: &[Case]) -> Verdict {
    let mut notes = Vec::new();
    for c in cases {
        let q = c.q;
        let size = (q * q * q + 1) * (q + 1) / 2;
        for b in &c.built {
            let r = &b.hem.report;
            ensure(r.passed && r.size == size && r.per_point == (q + 1) / 2, || {
                format!("q={q} {} ell={} S={:?}: {r:?}", c.label, b.ell, b.s)
            })?;
        }
        notes.push(format!("q={q} {}: {} x |H|={size}", c.label, c.built.len()));
    }
    let q3 = &cases[0];
    ensure(q3.built.len() == 36, || format!("q=3 built {} of 12 x 3", q3.built.len()))?;
    Ok(notes.join("; "))
}

fn criterion_3(cases: &[Case]) -> Verdict {
    let mut rows = 0;
    for c in cases {
        let q = c.q;
        for b in &c.built {
            let t = &b.tactical;
            ensure(t.matches && t.h_sums_ok, || format!("q={q} ell={} S={:?}: {:?}", b.ell, b.s, t.rows))?;
            for r in t.rows.iter().filter(|r| r.label.starts_with("X~")) {
                let e = r.expected;
                let (a, ac) = (2 * e[2], 2 * e[3]);
                ensure(a + ac == q + 1 && e[0] == 0 && e[1] == 0 && e[4] == e[2] && e[5] == e[3], || {
                    format!("bad X~ row {r:?}")
                })?;
                rows += 1;
            }
        }
    }
    Ok(format!("{} tables, {rows} X~ rows, all entries exact", cases.iter().map(|c| c.built.len()).sum::<usize>()))
}

/// Lines of W(3,q) meeting both `a` and `b`, by brute force over all t.i. lines.
fn brute_trace(all: &[Subspace], f: &GaloisField, a: &Subspace, b: &Subspace) -> BTreeSet<Subspace> {
    all.iter()
        .filter(|m| m.meet_dim(f, a) > 0 && m.meet_dim(f, b) > 0)
        .cloned()
        .collect()
}

fn criterion_4() -> Verdict {
    let mut pairs = 0;
    let mut sets = Vec::new();
    let f3 = gf(3);
    let w3 = SymplecticSpace::new(&f3, 4).unwrap();
    sets.extend(search_blts(&w3, None).unwrap());
    let f5 = gf(5);
    let w5 = SymplecticSpace::new(&f5, 4).unwrap();
    let found = search_blts(&w5, None).unwrap();
    for (_, members) in fingerprint_classes(&found).unwrap() {
        sets.push(found[members[0]].clone());
    }
    sets.push(linear_blt(&f5).unwrap().standardize().unwrap());
    for blt in &sets {
        let f = blt.field();
        let q = blt.q();
        let all = blt.space.enumerate_ti(2).unwrap();
        for ell in disjoint_lines(blt).unwrap() {
            let traces: Vec<BTreeSet<Subspace>> = blt.lines.iter().map(|b| brute_trace(&all, f, b, &ell)).collect();
            let m = traces.len();
            let mut rel = vec![vec![true; m]; m];
            for i in 0..m {
                for j in 0..m {
                    if i != j {
                        let common = traces[i].intersection(&traces[j]).count();
                        ensure(common == 0 || common == 2, || format!("q={q}: trace meet {common}"))?;
                        rel[i][j] = common == 0;
                    }
                }
            }
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        ensure(!(rel[i][j] && rel[j][k]) || rel[i][k], || format!("q={q}: not transitive"))?;
                    }
                }
            }
            let class: Vec<usize> = (0..m).map(|j| rel[0][j] as usize).collect();
            let plus = class.iter().sum::<usize>();
            ensure(plus == (q + 1) / 2 && m - plus == (q + 1) / 2, || format!("q={q}: classes {plus}|{}", m - plus))?;
            let part = equiv_partition(blt, &ell).map_err(|e| e.to_string())?;
            let lib: BTreeSet<&Subspace> = part.class_plus.iter().collect();
            let ours: BTreeSet<&Subspace> = (0..m).filter(|&j| rel[0][j]).map(|j| &blt.lines[j]).collect();
            let other: BTreeSet<&Subspace> = (0..m).filter(|&j| !rel[0][j]).map(|j| &blt.lines[j]).collect();
            ensure(lib == ours || lib == other, || "library split differs from brute force".into())?;
            pairs += 1;
        }
    }
    Ok(format!("{} BLT-sets, {pairs} (B, ell) pairs, traces by brute force", sets.len()))
}

fn random_config(
    qd: &Quadric,
    f: &GaloisField,
    singular: &[Subspace],
    rng: &mut ChaCha8Rng,
) -> Option<DichotomyOutcome> {
    let q = f.order() as u32;
    let mut vec5 = || -> Vec<_> { (0..5).map(|_| f.element(rng.random_range(0..q)).unwrap()).collect() };
    let (a, b) = (vec5(), vec5());
    let e = Subspace::span_of(f, 5, &[a, b]).ok()?;
    if e.dim() != 2 || qd.line_type(&e).ok()? != LineType::External {
        return None;
    }
    let conic = qd.singular_points_on(&qd.perp(&e));
    let mut picks: Vec<&Subspace> = conic.choose_multiple(rng, 3).collect();
    picks.shuffle(rng);
    let v = singular.choose(rng)?;
    qd.dichotomy_outcome(&e, [picks[0], picks[1], picks[2]], v).ok()
}

fn criterion_5() -> Verdict {
    let f = gf(3);
    let qd = Quadric::parabolic(&f);
    let singular = qd.singular_points();
    let points = all_points(&f, 5);
    let mut lines = BTreeSet::new();
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            lines.insert(a.join(&f, b).unwrap());
        }
    }
    let (mut decided, mut degenerate, mut bad) = (0usize, 0usize, 0usize);
    for e in lines.iter().filter(|l| qd.line_type(l).unwrap() == LineType::External) {
        let conic = qd.singular_points_on(&qd.perp(e));
        for b0 in &conic {
            for b1 in &conic {
                for b2 in &conic {
                    if b0 == b1 || b1 == b2 || b0 == b2 {
                        continue;
                    }
                    for v in &singular {
                        match qd.dichotomy_outcome(e, [b0, b1, b2], v) {
                            Ok(DichotomyOutcome::Decided { differ }) => {
                                decided += 1;
                                bad += usize::from(!differ);
                            }
                            Ok(DichotomyOutcome::Degenerate(..)) => degenerate += 1,
                            Err(_) => {}
                        }
                    }
                }
            }
        }
    }
    ensure(bad == 0 && decided > 0, || format!("q=3: {bad} counterexamples in {decided}"))?;
    let mut notes = vec![format!("q=3 exhaustive {decided} decided ({degenerate} degenerate)")];
    for q in [5, 7] {
        let f = gf(q);
        let qd = Quadric::parabolic(&f);
        let singular = qd.singular_points();
        let mut rng = ChaCha8Rng::seed_from_u64(q as u64);
        let (mut decided, mut degenerate, mut bad) = (0usize, 0usize, 0usize);
        while decided < 1000 {
            match random_config(&qd, &f, &singular, &mut rng) {
                Some(DichotomyOutcome::Decided { differ }) => {
                    decided += 1;
                    bad += usize::from(!differ);
                }
                Some(DichotomyOutcome::Degenerate(..)) => degenerate += 1,
                None => {}
            }
        }
        ensure(bad == 0, || format!("q={q}: {bad} counterexamples"))?;
        notes.push(format!("q={q} {decided} random ({degenerate} degenerate)"));
    }
    Ok(notes.join("; "))
}

/// `A^2 = kI + lambda A + mu (J - I - A)` by dense integer products.
fn srg_identity(g: &Graph, p: SrgParams) -> bool {
    let n = g.order();
    let a: Vec<Vec<i64>> = (0..n as u32)
        .map(|x| (0..n as u32).map(|y| g.adjacent(x, y) as i64).collect())
        .collect();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let sq: i64 = (0..n).map(|k| a[i][k] * a[k][j]).sum();
            let id = (i == j) as i64;
            let rhs = p.k as i64 * id + p.lambda as i64 * a[i][j] + p.mu as i64 * (1 - id - a[i][j]);
            sq == rhs
        })
    })
}

fn criterion_6(cases: &[Case]) -> Verdict {
    let mut notes = Vec::new();
    for c in [&cases[0], &cases[1]] {
        let q = c.q;
        let want = SrgParams::of_hemisystem(q);
        let h = &c.built[0].hem.lines;
        for (name, set) in [("H", h.clone()), ("complement", complement(&c.model.gq, h))] {
            let g = concurrency_graph(&c.model.gq, &set);
            let got = srg_check(&g);
            ensure(got == Ok(want), || format!("q={q} {name}: {got:?}"))?;
            ensure(srg_identity(&g, want), || format!("q={q} {name}: matrix identity fails"))?;
        }
        notes.push(format!("q={q} SRG({},{},{},{}) for H and complement", want.v, want.k, want.lambda, want.mu));
    }
    Ok(notes.join("; "))
}

fn criterion_7(cases: &[Case]) -> Verdict {
    let mut notes = Vec::new();
    for c in [&cases[0], &cases[1]] {
        let q = c.q;
        let s = q as i64;
        let dual = point_graph(&c.model.gq.dualize());
        for b in &c.built {
            let m = eigenspace_membership(&indicator(dual.order(), &b.hem.lines), &dual, s).unwrap();
            ensure(m == Membership::V0Minus, || format!("q={q} ell={} S={:?}: {m:?}", b.ell, b.s))?;
        }
        if q == 3 {
            let n = dual.order() as u32;
            let mut checked = 0;
            for x in 0..n {
                for y in x + 1..n {
                    if !dual.adjacent(x, y) {
                        ensure(tight_set_eigen_check(x, y, &dual, s).unwrap(), || format!("tight set {x},{y}"))?;
                        checked += 1;
                    }
                }
            }
            notes.push(format!("q=3 {checked} tight sets"));
        }
        let h = &c.built[0].hem.lines;
        let (x, y) = h
            .iter()
            .find_map(|&x| h.iter().find(|&&y| y != x && !dual.adjacent(x, y)).map(|&y| (x, y)))
            .unwrap();
        let t = tight_set(&dual, x, y, s).unwrap();
        let ip = inner_product_check(&t, &indicator(dual.order(), h), &dual, s).unwrap();
        let mu = ip.dot - 2 * s;
        let want = ((q - 1) * (q - 1) / 2) as i64;
        ensure(ip.holds && mu == want, || format!("q={q}: {ip:?}, mu={mu}"))?;
        notes.push(format!("q={q} {} in V0+V-, mu={mu}", c.built.len()));
    }
    Ok(notes.join("; "))
}

fn criterion_8() -> Verdict {
    let r3 = cp_compare(&gf(3)).map_err(|e| e.to_string())?;
    ensure(r3.matched(), || format!("q=3: {r3:?}"))?;
    ensure(r3.orbits.external == [36, 36] && r3.orbits.lines_on_p == [2, 2] && r3.r_size == 1, || {
        format!("q=3 orbit table {:?} |R|={}", r3.orbits, r3.r_size)
    })?;
    let r5 = cp_compare(&gf(5)).map_err(|e| e.to_string())?;
    ensure(r5.chain_holds(), || format!("q=5: {r5:?}"))?;
    ensure(r5.orbits.external == [300, 300] && r5.orbits.lines_on_p == [3, 3] && r5.r_size == 2, || {
        format!("q=5 orbit table {:?} |R|={}", r5.orbits, r5.r_size)
    })?;
    Ok(format!(
        "q=3 set equality |M+|={} |R|=1; q=5 chain holds |R|=2, full equality {}",
        r3.m_plus,
        r5.matched()
    ))
}

fn criterion_9() -> Verdict {
    let f = gf(5);
    let w = SymplecticSpace::new(&f, 4).unwrap();
    let found = search_blts(&w, None).unwrap();
    let classes = fingerprint_classes(&found).unwrap();
    ensure(classes.len() == 2, || format!("{} classes", classes.len()))?;
    for (_, members) in &classes {
        let b = &found[members[0]];
        ensure(is_blt(&w, &b.lines).unwrap().passed(), || "class representative fails is_blt".into())?;
    }
    let linear = fingerprint(&linear_blt(&f).unwrap().standardize().unwrap()).unwrap();
    ensure(classes.iter().any(|(fp, _)| *fp == linear), || "no class matches the linear set".into())?;

    let base = &found[classes[1].1[0]];
    let rest = &base.lines[1..];
    let all = w.enumerate_ti(2).unwrap();
    let replacement = all
        .iter()
        .filter(|l| !base.lines.contains(l) && rest.iter().all(|b| b.meet_dim(&f, l) == 0))
        .find(|l| {
            let mut lines = vec![(*l).clone()];
            lines.extend_from_slice(rest);
            !is_blt(&w, &lines).unwrap().passed()
        })
        .ok_or("no disjoint replacement breaks the set")?;
    let mut corrupted = vec![replacement.clone()];
    corrupted.extend_from_slice(rest);
    match is_blt(&w, &corrupted).unwrap() {
        BltVerdict::Witness { line, members } => {
            let meets = corrupted.iter().filter(|b| b.meet_dim(&f, &line) > 0).count();
            ensure(members.len() >= 3 && meets == members.len(), || "witness does not check out".into())?;
            Ok(format!(
                "{} sets in classes {:?}; corrupted set rejected, witness meets {} members",
                found.len(),
                classes.iter().map(|(_, m)| m.len()).collect::<Vec<_>>(),
                meets
            ))
        }
        other => Err(format!("corrupted set gave {other:?}")),
    }
}

fn run_construct(dir: &Path, threads: Option<&str>) -> Result<(), String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_flockgq"));
    if let Some(t) = threads {
        cmd.args(["--threads", t]);
    }
    cmd.args(["construct", "--q", "3", "--blt", "builtin:linear", "--ell", "0", "--out"]);
    cmd.arg(dir);
    let out = cmd.output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())
}

fn criterion_10() -> Verdict {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    run_construct(a.path(), Some("1"))?;
    run_construct(b.path(), None)?;
    let files = ["certificate.json", "hemisystem.g6", "complement.g6", "hemisystem.lines", "gq.txt", "blt.txt"];
    for name in files {
        let x = std::fs::read(a.path().join(name)).map_err(|e| format!("{name}: {e}"))?;
        let y = std::fs::read(b.path().join(name)).map_err(|e| format!("{name}: {e}"))?;
        ensure(x == y, || format!("{name} differs between runs"))?;
    }
    let g6 = std::fs::read_to_string(a.path().join("hemisystem.g6")).unwrap();
    let g = Graph::from_graph6(&g6).map_err(|e| e.to_string())?;
    let gq = GenQuadrangle::from_text(&std::fs::read_to_string(a.path().join("gq.txt")).unwrap()).unwrap();
    ensure(srg_check(&g) == Ok(SrgParams::of_hemisystem(3)) && gq.num_lines() == 112, || {
        "exported files do not decode to the certified objects".into()
    })?;
    Ok(format!("{} files byte-identical across runs (1 thread vs default)", files.len()))
}

fn main() -> ExitCode {
    let t = Instant::now();
    let shared = panic::catch_unwind(cases);
    let shared = shared.ok();
    let shared = &shared;
    println!("acceptance: shared constructions ready in {:.2?}", t.elapsed());
    let with_cases = |f: fn(&[Case]) -> Verdict| -> Box<dyn Fn() -> Verdict + '_> {
        Box::new(move || match shared {
            Some(c) => f(c),
            None => Err("shared constructions panicked".into()),
        })
    };
    let criteria: Vec<(&str, Box<dyn Fn() -> Verdict + '_>)> = vec![
        ("Knarr GQ axioms", with_cases(criterion_1)),
        ("hemisystems for all (ell, S) at q=3, sampled at q=5", with_cases(criterion_2)),
        ("tactical decomposition table", with_cases(criterion_3)),
        ("equivalence relation and {0,2} traces", Box::new(criterion_4)),
        ("isometry-type dichotomy", Box::new(criterion_5)),
        ("SRG certification", with_cases(criterion_6)),
        ("spectral checks", with_cases(criterion_7)),
        ("elliptic-quadric comparison", Box::new(criterion_8)),
        ("BLT search classes and rejection", Box::new(criterion_9)),
        ("deterministic CLI output", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let verdict = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match verdict {
            Ok(detail) => println!("criterion {:>2} PASS  {name} [{:.2?}]: {detail}", i + 1, t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} [{:.2?}]: {why}", i + 1, t.elapsed());
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
