//! `flockgq`: build, certify and re-verify hemisystems of flock generalised
//! quadrangles.
//!
//! Exit codes: 0 when every check passes, 1 on a verification failure, 2 on
//! bad input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use flockgq::blt::{
    compatibility_check, disjoint_lines, equiv_partition, fingerprint, fingerprint_classes, linear_blt, search_blts,
    BltSet, Fingerprint,
};
use flockgq::field::GaloisField;
use flockgq::fieldred::cp_compare;
use flockgq::hemisystem::{
    build_hemisystem, complement, lineset_from_text, lineset_to_text, regularity_check, strong_condition_check,
    tactical_table, verify_hemisystem, HemisystemReport, HemisystemSpec, SChoice, StrongCheck, TacticalTable,
    XPiTable,
};
use flockgq::knarr::{gq_verify, gq_verify_sampled, GenQuadrangle, GqReport, KnarrModel};
use flockgq::polar::SymplecticSpace;
use flockgq::pqgraph::{
    concurrency_graph, eigenspace_membership, indicator, inner_product_check, point_graph, pq_check, srg_check,
    tight_set_eigen_check, Graph, InnerProduct, Membership, PqReport, SrgFailure, SrgParams,
};
use flockgq::projspace::Subspace;

/// Above this many points the GQ axioms are sampled instead of checked exhaustively.
const EXHAUSTIVE_GQ_LIMIT: usize = 60_000;

#[derive(Parser)]
#[command(name = "flockgq", version, about = "Hemisystems of flock generalised quadrangles, with certificates")]
struct Cli {
    /// Worker threads (defaults to all cores; never changes output).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a hemisystem and write its certificate, line sets and graphs.
    Construct(ConstructArgs),
    /// Re-verify a GQ and a line set from files.
    Verify(VerifyArgs),
    /// Exhaustive BLT-set search with fingerprint classes.
    SearchBlt(SearchArgs),
    /// Load and validate BLT files, or list the built-in sources for q.
    Catalog(CatalogArgs),
    /// Compare the elliptic-quadric hemisystem of H(3,q^2) with the construction.
    CpCompare(CpArgs),
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    q: Option<usize>,
    /// builtin:linear, builtin:search#<i>, or a BLT file.
    #[arg(long, default_value = "builtin:linear")]
    blt: String,
    /// Index into the sorted lines disjoint from every member.
    #[arg(long, default_value_t = 0)]
    ell: usize,
    /// `default` or comma-separated indices into the eligible planes on ell.
    #[arg(long, default_value = "default")]
    s: String,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Seed for sampled checks.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of sampled tight-set pairs (all pairs when q = 3).
    #[arg(long, default_value_t = 64)]
    samples: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, required_unless_present = "certificate")]
    gq: Option<PathBuf>,
    #[arg(long, required_unless_present = "certificate")]
    lineset: Option<PathBuf>,
    /// Take the GQ and line set embedded in a certificate instead.
    #[arg(long, conflicts_with_all = ["gq", "lineset"])]
    certificate: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    q: usize,
    #[arg(long)]
    limit: Option<usize>,
    /// Write one representative per class here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CatalogArgs {
    #[arg(long)]
    file: Vec<PathBuf>,
    #[arg(long)]
    q: Option<usize>,
}

#[derive(Args)]
struct CpArgs {
    #[arg(long)]
    q: usize,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Input(anyhow::Error),
    Check(String),
}

impl From<flockgq::Error> for Failure {
    fn from(e: flockgq::Error) -> Self {
        match e {
            flockgq::Error::Integrity(m) => Failure::Check(m),
            other => Failure::Input(other.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads(cli.threads) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    let result = match cli.command {
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify(a),
        Command::SearchBlt(a) => search(a),
        Command::Catalog(a) => catalog(a),
        Command::CpCompare(a) => cp(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(feature = "parallel")]
fn configure_threads(n: Option<usize>) -> anyhow::Result<()> {
    if let Some(n) = n {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(_: Option<usize>) -> anyhow::Result<()> {
    Ok(())
}

fn field_for(q: usize) -> anyhow::Result<GaloisField> {
    let p = (2..=q).find(|d| q % d == 0).ok_or_else(|| anyhow!("q must be at least 2"))?;
    let mut k = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    if r != 1 || p == 2 {
        return Err(anyhow!("q = {q} is not a power of an odd prime"));
    }
    Ok(GaloisField::new(p as u32, k, None)?)
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(dir: &Path, name: &str, text: &str) -> anyhow::Result<()> {
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

/// Resolves a BLT source to a set and a canonical description of the source.
fn resolve_blt(q: Option<usize>, source: &str) -> anyhow::Result<BltSet> {
    if let Some(rest) = source.strip_prefix("builtin:") {
        let q = q.ok_or_else(|| anyhow!("--q is required for built-in BLT-sets"))?;
        let f = field_for(q)?;
        if rest == "linear" {
            return Ok(linear_blt(&f)?);
        }
        let i: usize = rest
            .strip_prefix("search#")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| anyhow!("unknown built-in {source}; use builtin:linear or builtin:search#<i>"))?;
        let w = SymplecticSpace::new(&f, 4)?;
        let found = search_blts(&w, Some(i + 1))?;
        let mut b = found
            .into_iter()
            .nth(i)
            .ok_or_else(|| anyhow!("search at q = {q} finds fewer than {} sets", i + 1))?;
        b.label = format!("search#{i}");
        return Ok(b);
    }
    let path = Path::new(source);
    let label = path.file_stem().and_then(|s| s.to_str()).unwrap_or("file").to_string();
    let blt = BltSet::from_text(&read(path)?, &label)?;
    if let Some(q) = q {
        if blt.q() != q {
            return Err(anyhow!("{source} is over GF({}), not GF({q})", blt.q()));
        }
    }
    Ok(blt)
}

fn parse_s(text: &str) -> anyhow::Result<SChoice> {
    if text == "default" {
        return Ok(SChoice::Default);
    }
    let ix = text
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| anyhow!("bad S index {t:?}")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(SChoice::Indices(ix))
}

#[derive(Serialize)]
struct BltSection {
    source: String,
    label: String,
    fingerprint: Fingerprint,
    /// The set on the default form, as used for the construction.
    text: String,
}

#[derive(Serialize)]
struct Selectors {
    ell_index: usize,
    ell_candidates: usize,
    ell: String,
    o_plus: Vec<usize>,
    o_minus: Vec<usize>,
    compatible: bool,
    s: Vec<usize>,
    s_c: Vec<usize>,
    s_planes: Vec<String>,
}

#[derive(Serialize)]
struct GqSection {
    exhaustive: bool,
    report: GqReport,
    text: String,
}

#[derive(Serialize)]
struct LineSetSection {
    report: HemisystemReport,
    srg: Result<SrgParams, SrgFailure>,
    membership: Membership,
    lines: Vec<u32>,
    graph6: String,
}

#[derive(Serialize)]
struct Spectral {
    tight_pairs_checked: usize,
    tight_sets_ok: bool,
    inner_product: Option<InnerProduct>,
    mu_recovered: Option<i64>,
}

#[derive(Serialize)]
struct Certificate {
    q: usize,
    seed: u64,
    blt: BltSection,
    selectors: Selectors,
    gq: GqSection,
    strong_condition: StrongCheck,
    regularity: bool,
    tactical: TacticalTable,
    counts: [usize; 3],
    expected_srg: SrgParams,
    hemisystem: LineSetSection,
    complement: LineSetSection,
    partial_quadrangle: PqReport,
    partial_quadrangle_ok: bool,
    spectral: Spectral,
    passed: bool,
}

fn line_section(gq: &GenQuadrangle, dual: &Graph, s: i64, lines: Vec<u32>) -> Result<LineSetSection, Failure> {
    let g = concurrency_graph(gq, &lines);
    Ok(LineSetSection {
        report: verify_hemisystem(gq, &lines),
        srg: srg_check(&g),
        membership: eigenspace_membership(&indicator(dual.order(), &lines), dual, s)?,
        graph6: g.to_graph6(),
        lines,
    })
}

/// Non-adjacent pairs of `g`, all of them or `n` drawn with a seeded generator.
fn noncollinear_pairs(g: &Graph, all: bool, n: usize, seed: u64) -> Vec<(u32, u32)> {
    use rand::{Rng, SeedableRng};
    let v = g.order() as u32;
    if all {
        return (0..v)
            .flat_map(|x| (x + 1..v).map(move |y| (x, y)))
            .filter(|&(x, y)| !g.adjacent(x, y))
            .collect();
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let (x, y) = (rng.random_range(0..v), rng.random_range(0..v));
        if x != y && !g.adjacent(x, y) {
            out.push((x, y));
        }
    }
    out
}

fn construct(a: ConstructArgs) -> Outcome {
    let source = resolve_blt(a.q, &a.blt)?;
    let blt = source.standardize()?;
    let q = blt.q();
    let model = KnarrModel::from_blt(&blt)?;
    let gq = &model.gq;
    let exhaustive = gq.num_points() <= EXHAUSTIVE_GQ_LIMIT;
    let gq_report = if exhaustive {
        gq_verify(gq)
    } else {
        gq_verify_sampled(gq, 100_000, a.seed)
    };

    let ells = disjoint_lines(&blt)?;
    let ell = ells
        .get(a.ell)
        .ok_or_else(|| anyhow!("--ell {} out of range: {} candidate lines", a.ell, ells.len()))?;
    let part = equiv_partition(&blt, ell)?;
    let compatible = compatibility_check(&part)?;
    let spec = HemisystemSpec::from_partition(&model, &part, parse_s(&a.s)?)?;
    let table = XPiTable::new(&model, &spec.ell, &spec.planes_on_ell)?;
    let strong = strong_condition_check(&model, &spec, &table)?;
    let regular = regularity_check(&spec, &table);
    let h = build_hemisystem(&model, &spec, &table).map_err(|e| Failure::Check(e.to_string()))?;
    let tactical = tactical_table(&model, &spec, &table)?;

    let s = q as i64;
    let dual = point_graph(&gq.dualize());
    let comp = complement(gq, &h.lines);
    let hem = line_section(gq, &dual, s, h.lines.clone())?;
    let com = line_section(gq, &dual, s, comp)?;
    let expected = SrgParams::of_hemisystem(q);
    let pq = pq_check(gq, &h.lines);
    let pq_ok = pq.is_pq((q - 1) / 2, q * q, expected.mu);

    let pairs = noncollinear_pairs(&dual, q == 3, a.samples, a.seed);
    let mut tight_ok = true;
    for &(x, y) in &pairs {
        tight_ok &= tight_set_eigen_check(x, y, &dual, s)?;
    }
    let h_pair = h
        .lines
        .iter()
        .find_map(|&x| h.lines.iter().find(|&&y| y != x && !dual.adjacent(x, y)).map(|&y| (x, y)));
    let inner = match h_pair {
        Some((x, y)) => {
            let t = flockgq::pqgraph::tight_set(&dual, x, y, s)?;
            Some(inner_product_check(&t, &indicator(dual.order(), &h.lines), &dual, s)?)
        }
        None => None,
    };
    let mu = inner.map(|ip| ip.dot - 2 * s);

    let passed = gq_report.passed()
        && strong.direct
        && strong.via_quotient
        && regular
        && tactical.matches
        && hem.report.passed
        && com.report.passed
        && hem.srg == Ok(expected)
        && com.srg == Ok(expected)
        && hem.membership == Membership::V0Minus
        && com.membership == Membership::V0Minus
        && pq_ok
        && tight_ok
        && inner.is_some_and(|ip| ip.holds)
        && mu == Some(expected.mu as i64);

    let cert = Certificate {
        q,
        seed: a.seed,
        blt: BltSection {
            source: a.blt.clone(),
            label: blt.label.clone(),
            fingerprint: fingerprint(&blt)?,
            text: blt.to_text(),
        },
        selectors: Selectors {
            ell_index: a.ell,
            ell_candidates: ells.len(),
            ell: ell.serialize(),
            o_plus: spec.o_plus.clone(),
            o_minus: spec.o_minus.clone(),
            compatible,
            s: spec.s.clone(),
            s_c: spec.s_c.clone(),
            s_planes: spec.s_planes().iter().map(Subspace::serialize).collect(),
        },
        gq: GqSection {
            exhaustive,
            report: gq_report,
            text: gq.to_text(),
        },
        strong_condition: strong,
        regularity: regular,
        tactical,
        counts: [h.o_plus, h.l_plus_s, h.l_minus_sc],
        expected_srg: expected,
        partial_quadrangle: pq,
        partial_quadrangle_ok: pq_ok,
        spectral: Spectral {
            tight_pairs_checked: pairs.len(),
            tight_sets_ok: tight_ok,
            inner_product: inner,
            mu_recovered: mu,
        },
        passed,
        hemisystem: hem,
        complement: com,
    };

    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    let nl = gq.num_lines();
    write(&a.out, "blt.txt", &cert.blt.text)?;
    write(&a.out, "gq.txt", &cert.gq.text)?;
    write(&a.out, "hemisystem.lines", &lineset_to_text(nl, &cert.hemisystem.lines))?;
    write(&a.out, "complement.lines", &lineset_to_text(nl, &cert.complement.lines))?;
    write(&a.out, "hemisystem.g6", &format!("{}\n", cert.hemisystem.graph6))?;
    write(&a.out, "complement.g6", &format!("{}\n", cert.complement.graph6))?;
    write(&a.out, "certificate.json", &json(&cert))?;

    println!(
        "q={q} blt={} ell={} |H|={} srg={:?} passed={}",
        cert.blt.label,
        a.ell,
        cert.hemisystem.lines.len(),
        cert.hemisystem.srg,
        passed
    );
    println!("wrote {}", a.out.display());
    if passed {
        Ok(())
    } else {
        Err(Failure::Check("certificate has failing checks; see certificate.json".into()))
    }
}

#[derive(Serialize)]
struct VerifyReport {
    gq: GqReport,
    hemisystem: HemisystemReport,
    srg: Option<Result<SrgParams, SrgFailure>>,
    expected_srg: Option<SrgParams>,
    membership: Option<Membership>,
    passed: bool,
}

fn verify(a: VerifyArgs) -> Outcome {
    let (gq_text, set_text) = match &a.certificate {
        Some(path) => {
            let v: serde_json::Value = serde_json::from_str(&read(path)?).context("parsing certificate")?;
            let gq = v["gq"]["text"].as_str().ok_or_else(|| anyhow!("certificate lacks gq.text"))?;
            let lines: Vec<u32> = serde_json::from_value(v["hemisystem"]["lines"].clone())
                .context("certificate lacks hemisystem.lines")?;
            let g = GenQuadrangle::from_text(gq)?;
            (gq.to_string(), lineset_to_text(g.num_lines(), &lines))
        }
        None => (
            read(a.gq.as_deref().expect("clap requires --gq"))?,
            read(a.lineset.as_deref().expect("clap requires --lineset"))?,
        ),
    };
    let gq = GenQuadrangle::from_text(&gq_text)?;
    let (nl, lines) = lineset_from_text(&set_text)?;
    if nl != gq.num_lines() {
        return Err(anyhow!("line set is for {nl} lines, GQ has {}", gq.num_lines()).into());
    }
    let gq_report = gq_verify(&gq);
    let hemisystem = verify_hemisystem(&gq, &lines);
    let (s, t) = gq.order();
    // Spectral and SRG checks need order (q^2, q) and a genuine hemisystem.
    let shaped = t > 1 && s == t * t && hemisystem.passed;
    let (srg, expected_srg, membership) = if shaped {
        let dual = point_graph(&gq.dualize());
        let m = eigenspace_membership(&indicator(dual.order(), &lines), &dual, t as i64)?;
        (Some(srg_check(&concurrency_graph(&gq, &lines))), Some(SrgParams::of_hemisystem(t)), Some(m))
    } else {
        (None, None, None)
    };
    let passed = gq_report.passed()
        && hemisystem.passed
        && srg.as_ref().zip(expected_srg).is_some_and(|(r, e)| r.as_ref() == Ok(&e))
        && membership == Some(Membership::V0Minus);
    let report = VerifyReport {
        gq: gq_report,
        hemisystem,
        srg,
        expected_srg,
        membership,
        passed,
    };
    print!("{}", json(&report));
    if passed {
        println!("PASS");
        Ok(())
    } else {
        let w = report
            .hemisystem
            .witnesses
            .first()
            .map(|(p, c)| format!("point {p} lies on {c} lines of the set, expected {}", report.hemisystem.per_point))
            .unwrap_or_else(|| "see report".into());
        Err(Failure::Check(w))
    }
}

fn search(a: SearchArgs) -> Outcome {
    let f = field_for(a.q)?;
    let w = SymplecticSpace::new(&f, 4)?;
    let found = search_blts(&w, a.limit)?;
    let bad = found.iter().position(|b| !b.verify().map(|v| v.passed()).unwrap_or(false));
    let classes = fingerprint_classes(&found)?;
    println!("q={} found {} BLT-sets containing the least line", a.q, found.len());
    println!("{} fingerprint classes", classes.len());
    for (k, (fp, members)) in classes.iter().enumerate() {
        println!(
            "class {k}: {} sets, first builtin:search#{}, fingerprint {:?}",
            members.len(),
            members[0],
            fp
        );
    }
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (k, (_, members)) in classes.iter().enumerate() {
            write(dir, &format!("class{k}.blt"), &found[members[0]].to_text())?;
        }
    }
    match bad {
        Some(i) => Err(Failure::Check(format!("search result {i} fails the BLT check"))),
        None => Ok(()),
    }
}

fn catalog(a: CatalogArgs) -> Outcome {
    if a.file.is_empty() && a.q.is_none() {
        return Err(anyhow!("give --file or --q").into());
    }
    for path in &a.file {
        let blt = resolve_blt(None, path.to_str().ok_or_else(|| anyhow!("non-UTF-8 path"))?)?;
        println!(
            "{}: label {} q {} fingerprint {:?} valid",
            path.display(),
            blt.label,
            blt.q(),
            fingerprint(&blt)?
        );
    }
    if let Some(q) = a.q {
        let linear = resolve_blt(Some(q), "builtin:linear")?;
        println!("builtin:linear q {q} fingerprint {:?}", fingerprint(&linear)?);
        println!("builtin:search#<i> q {q}: i-th set of `search-blt --q {q}`");
    }
    Ok(())
}

fn cp(a: CpArgs) -> Outcome {
    let f = field_for(a.q)?;
    let r = cp_compare(&f)?;
    println!("q={} H(3,q^2): {} points, {} lines", r.q, r.hermitian_points, r.hermitian_lines);
    println!("elliptic points {}  tangents {}  externals {}", r.elliptic_points, r.tangents, r.externals);
    println!("orbit table ({} generators)", r.generators);
    println!("  external lines   {:?}", r.orbits.external);
    println!("  tangent lines    {:?}", r.orbits.tangent);
    println!("  lines on P       {:?}", r.orbits.lines_on_p);
    println!("|R| = {}  |M+| = {}  |L+_R| = {}", r.r_size, r.m_plus, r.l_plus_r);
    if let Some(path) = &a.out {
        fs::write(path, json(&r)).with_context(|| format!("writing {}", path.display()))?;
    }
    if r.matched() {
        println!("MATCH");
        Ok(())
    } else {
        println!("MISMATCH");
        Err(Failure::Check(format!("comparison failed: {}", json(&r))))
    }
}
