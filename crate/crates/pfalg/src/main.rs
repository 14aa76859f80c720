//! Command-line front end for the partial-function algebra toolkit.
//!
//! Exit codes: 0 when every checked assertion holds, 1 when a checked
//! property fails (the witness is printed), 2 for usage or input errors.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};
use serde::Serialize;

use pfalg_core::algebra::FinAlgebra;
use pfalg_core::catalog::{self, GateMode, LawStatus, Universe};
use pfalg_core::pfun::{generate_subalgebra, parse_pfun_file, DEFAULT_CLOSURE_CAP};
use pfalg_core::repr::{
    build_representation, choose_family, render_representation, verify_representation, RepReport,
    ReprError, Representation,
};
use pfalg_core::search::{search_model, SearchLimits, SearchOutcome};
use pfalg_core::syntax::{check_lawset, parse_law, parse_law_file, Law, Signature};

#[derive(Parser)]
#[command(
    name = "pfalg",
    version,
    about = "algebras of finite partial functions"
)]
struct Cli {
    /// Emit a machine-readable mirror of the report.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a law set against an algebra file, or against a universe of
    /// concrete partial functions.
    Check {
        /// Catalog law set name or path to a .laws file.
        #[arg(long)]
        laws: String,
        /// Algebra file to check against.
        #[arg(long)]
        algebra: Option<PathBuf>,
        /// Universe spec: `2x2` for P(2,2), `pt3` for PT(3), ...
        #[arg(long)]
        universe: Option<String>,
        /// Check every assignment (default for universes).
        #[arg(long)]
        exhaustive: bool,
        /// Check a seeded random sample of this many assignments.
        #[arg(long)]
        sample: Option<usize>,
        /// Seed for `--sample`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Close a set of functions under a signature and print the tables.
    Closure {
        #[arg(long)]
        functions: PathBuf,
        /// Comma-separated symbols, e.g. `res,ovr`.
        #[arg(long)]
        sig: String,
        #[arg(long, default_value_t = DEFAULT_CLOSURE_CAP)]
        cap: usize,
        /// Write the algebra file here as well.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build and verify a concrete representation of an algebra.
    Represent {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        sig: String,
        /// Export the representation to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Re-read the exported file and re-check it bit for bit
        /// (requires --out).
        #[arg(long)]
        verify: bool,
    },
    /// Search for a model of a law set, optionally falsifying one law.
    Search {
        #[arg(long)]
        laws: String,
        #[arg(long)]
        size: usize,
        /// 1-based index of a law (or a literal law) the model must falsify.
        #[arg(long)]
        negate: Option<String>,
        /// Least-number isomorphism pruning.
        #[arg(long)]
        lnh: bool,
    },
    /// Certify each law of a set as non-redundant by counter-model search.
    Irredundance {
        #[arg(long)]
        laws: String,
        #[arg(long, default_value_t = 4)]
        max_size: usize,
    },
    /// Replay the expected facts of a bundled example (or `all`).
    Reproduce { name: String },
    /// List the bundled law sets and examples with their statuses.
    CatalogList,
}

/// A report is built once as structured lines, then rendered as text or
/// mirrored as JSON, so both carry identical content.
#[derive(Serialize)]
struct Report {
    command: String,
    sections: Vec<Section>,
    ok: bool,
}

#[derive(Serialize)]
struct Section {
    title: String,
    lines: Vec<String>,
}

impl Report {
    fn new(command: &str) -> Report {
        Report {
            command: command.to_string(),
            sections: Vec::new(),
            ok: true,
        }
    }

    fn section(&mut self, title: impl Into<String>) -> &mut Section {
        self.sections.push(Section {
            title: title.into(),
            lines: Vec::new(),
        });
        self.sections.last_mut().unwrap()
    }

    /// Writes the report; a closed pipe is not an error for a reader that
    /// has seen enough.
    fn print(&self, json: bool) {
        let stdout = std::io::stdout();
        let mut out = stdout.lock();
        let _ = self.write_to(&mut out, json);
    }

    fn write_to(&self, out: &mut impl Write, json: bool) -> std::io::Result<()> {
        if json {
            writeln!(
                out,
                "{}",
                serde_json::to_string(self).expect("serializable")
            )?;
            return Ok(());
        }
        for s in &self.sections {
            writeln!(out, "== {}", s.title)?;
            for l in &s.lines {
                writeln!(out, "{l}")?;
            }
        }
        writeln!(out, "{}", if self.ok { "ok" } else { "FAILED" })
    }
}

impl Section {
    fn line(&mut self, l: impl Into<String>) {
        self.lines.push(l.into());
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command, cli.json) {
        Ok(report) => {
            report.print(cli.json);
            if report.ok {
                ExitCode::from(0)
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn search_timeout() -> Duration {
    let secs = std::env::var("PFALG_TIMEOUT_SECS")
        .ok()
        .and_then(|v| v.parse::<u64>().ok())
        .unwrap_or(60);
    Duration::from_secs(secs)
}

/// Loads laws from a catalog entry name or a file path. Catalog entries come
/// back with their gate statuses; files are gated here so quarantine marks
/// are available either way.
fn load_laws(spec: &str) -> anyhow::Result<(String, Vec<Law>, Vec<bool>)> {
    if let Ok(entry) = catalog::load_lawset(spec) {
        let sound: Vec<bool> = entry.outcomes.iter().map(|o| o.status.is_sound()).collect();
        return Ok((entry.name.to_string(), entry.laws, sound));
    }
    let path = PathBuf::from(spec);
    if !path.exists() {
        anyhow::bail!("`{spec}` is neither a catalog law set nor a file");
    }
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "laws".to_string());
    let text = fs::read_to_string(&path)?;
    let laws = parse_law_file(&stem, &text).map_err(|e| anyhow::anyhow!("{spec}: {e}"))?;
    let sound = vec![true; laws.len()];
    Ok((stem, laws, sound))
}

fn load_algebra(path: &PathBuf) -> anyhow::Result<FinAlgebra> {
    let text = fs::read_to_string(path)?;
    FinAlgebra::parse(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

fn run(command: Command, _json: bool) -> anyhow::Result<Report> {
    match command {
        Command::Check {
            laws,
            algebra,
            universe,
            exhaustive,
            sample,
            seed,
        } => cmd_check(laws, algebra, universe, exhaustive, sample, seed),
        Command::Closure {
            functions,
            sig,
            cap,
            out,
        } => cmd_closure(functions, sig, cap, out),
        Command::Represent {
            algebra,
            sig,
            out,
            verify,
        } => cmd_represent(algebra, sig, out, verify),
        Command::Search {
            laws,
            size,
            negate,
            lnh,
        } => cmd_search(laws, size, negate, lnh),
        Command::Irredundance { laws, max_size } => cmd_irredundance(laws, max_size),
        Command::Reproduce { name } => cmd_reproduce(name),
        Command::CatalogList => cmd_catalog_list(),
    }
}

fn cmd_check(
    laws_spec: String,
    algebra: Option<PathBuf>,
    universe: Option<String>,
    _exhaustive: bool,
    sample: Option<usize>,
    seed: u64,
) -> anyhow::Result<Report> {
    let (name, laws, sound) = load_laws(&laws_spec)?;
    let mut report = Report::new("check");
    match (algebra, universe) {
        (Some(path), None) => {
            let alg = load_algebra(&path)?;
            let section = report.section(format!("check {name} on {}", path.display()));
            if let Some(note) = derived_res_note(&alg, &laws) {
                section.line(note);
            }
            let result = check_lawset(&alg, &laws).map_err(|e| anyhow::anyhow!("{e}"))?;
            let mut failed = false;
            for (i, (law, outcome)) in result.results.iter().enumerate() {
                let tag = if sound[i] { "" } else { " [quarantined]" };
                match outcome.violation() {
                    None => section.line(format!("law {}{tag}: pass", law.name)),
                    Some(v) => {
                        section.line(format!(
                            "law {}{tag}: FAIL at {}",
                            law.name,
                            v.describe(&alg)
                        ));
                        if sound[i] {
                            failed = true;
                        }
                    }
                }
            }
            report.ok = !failed;
        }
        (None, Some(u)) => {
            let universe = Universe::parse(&u)
                .ok_or_else(|| anyhow::anyhow!("bad universe `{u}` (want `2x2` or `pt3`)"))?;
            if universe.cardinality() > 2000 {
                anyhow::bail!(
                    "universe {universe} has {} functions; tabulating it is out of reach",
                    universe.cardinality()
                );
            }
            let built = universe.build();
            let mode = match sample {
                Some(count) => GateMode::Sampled { count, seed },
                None => GateMode::Exhaustive,
            };
            let section = report.section(format!("check {name} over {universe}"));
            let outcomes =
                catalog::soundness_gate(&laws, &built, mode).map_err(|e| anyhow::anyhow!("{e}"))?;
            let mut failed = false;
            for (i, o) in outcomes.iter().enumerate() {
                match &o.status {
                    LawStatus::Sound => section.line(format!("law {}: pass", o.law.name)),
                    LawStatus::Quarantined(w) => {
                        let documented = !sound[i];
                        section.line(format!(
                            "law {}: FAIL at {w}{}",
                            o.law.name,
                            if documented { " [quarantined]" } else { "" }
                        ));
                        if !documented {
                            failed = true;
                        }
                    }
                }
            }
            report.ok = !failed;
        }
        _ => anyhow::bail!("give exactly one of --algebra or --universe"),
    }
    Ok(report)
}

fn cmd_closure(
    functions: PathBuf,
    sig: String,
    cap: usize,
    out: Option<PathBuf>,
) -> anyhow::Result<Report> {
    let text = fs::read_to_string(&functions)?;
    let (_, _, funs) = parse_pfun_file(&text).map_err(|e| anyhow::anyhow!("{e}"))?;
    let signature = Signature::from_names(&sig).map_err(|e| anyhow::anyhow!("{e}"))?;
    let closure =
        generate_subalgebra(&funs, &signature, cap).map_err(|e| anyhow::anyhow!("{e}"))?;
    let mut report = Report::new("closure");
    let section = report.section(format!(
        "closure of {} generators under {signature}",
        funs.len()
    ));
    section.line(format!("elements: {}", closure.algebra.size()));
    for (i, f) in closure.elements.iter().enumerate() {
        section.line(f.render_line(closure.algebra.label(i)));
    }
    for l in closure.algebra.render().lines() {
        section.line(l);
    }
    if let Some(path) = out {
        fs::write(&path, closure.algebra.render())?;
        report
            .section("export")
            .line(format!("wrote {}", path.display()));
    }
    Ok(report)
}

fn describe_repr_report(rep: &Representation, report: &RepReport, section: &mut Section) {
    section.line(format!("family: {}", rep.family.kind));
    section.line(format!(
        "filters: {}, base points: {}",
        rep.family.filters.len(),
        rep.base.size()
    ));
    match report.injectivity_failure {
        None => section.line("injective: pass"),
        Some((a, b)) => section.line(format!(
            "injective: FAIL ({} and {} share an image)",
            rep.algebra.label(a),
            rep.algebra.label(b)
        )),
    }
    match report.zero_to_empty {
        None => section.line("zero: none distinguished"),
        Some(true) => section.line("zero maps to the empty function: pass"),
        Some(false) => section.line("zero maps to the empty function: FAIL"),
    }
    for (sym, failure) in &report.symbols {
        match failure {
            None => section.line(format!("symbol {sym}: pass")),
            Some(f) => {
                let args: Vec<&str> = f.args.iter().map(|&x| rep.algebra.label(x)).collect();
                section.line(format!(
                    "symbol {sym}: FAIL at ({}): mapped {} vs concrete {}",
                    args.join(","),
                    f.expected,
                    f.got
                ));
            }
        }
    }
}

fn cmd_represent(
    algebra: PathBuf,
    sig: String,
    out: Option<PathBuf>,
    verify: bool,
) -> anyhow::Result<Report> {
    if verify && out.is_none() {
        anyhow::bail!("--verify needs --out");
    }
    let alg = load_algebra(&algebra)?;
    let signature = Signature::from_names(&sig).map_err(|e| anyhow::anyhow!("{e}"))?;
    let mut report = Report::new("represent");
    let prepared = match choose_family(&alg, &signature) {
        Ok(p) => p,
        Err(ReprError::AxiomsFail { lawset, violation }) => {
            let section = report.section(format!("represent {} as {signature}", algebra.display()));
            section.line(format!(
                "refused: algebra fails `{lawset}` at {}",
                violation.describe(&alg)
            ));
            report.ok = false;
            return Ok(report);
        }
        Err(e) => anyhow::bail!("{e}"),
    };
    let rep = build_representation(&prepared.algebra, &prepared.family)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let rep_report = verify_representation(&rep).map_err(|e| anyhow::anyhow!("{e}"))?;
    let section = report.section(format!("represent {} as {signature}", algebra.display()));
    section.line(format!(
        "host: {} elements (after lift)",
        prepared.algebra.size()
    ));
    describe_repr_report(&rep, &rep_report, section);
    report.ok = rep_report.all_pass();
    if let Some(path) = out {
        let rendered = render_representation(&rep);
        fs::write(&path, &rendered)?;
        let mut lines: Vec<String> = vec![format!("wrote {}", path.display())];
        let mut export_ok = true;
        if verify {
            let back = fs::read_to_string(&path)?;
            if back != rendered {
                lines.push("re-read: bytes differ: FAIL".to_string());
                export_ok = false;
            } else {
                lines.push("re-read: byte-identical: pass".to_string());
            }
            // re-check the exported images independently of the build
            let tail: String = {
                let idx = back.find("source:").unwrap_or(0);
                back[idx..].to_string()
            };
            let (_, _, funs) = parse_pfun_file(&tail).map_err(|e| anyhow::anyhow!("{e}"))?;
            let mut images = Vec::with_capacity(rep.algebra.size());
            for a in 0..rep.algebra.size() {
                let label = rep.algebra.label(a);
                let f = funs
                    .iter()
                    .find(|(n, _)| n == label)
                    .map(|(_, f)| f.clone())
                    .ok_or_else(|| anyhow::anyhow!("exported file misses `{label}`"))?;
                images.push(f);
            }
            let reread = Representation {
                images,
                ..rep.clone()
            };
            let recheck = verify_representation(&reread).map_err(|e| anyhow::anyhow!("{e}"))?;
            if recheck.all_pass() {
                lines.push("re-check of exported images: pass".to_string());
            } else {
                lines.push("re-check of exported images: FAIL".to_string());
                export_ok = false;
            }
        }
        let section = report.section("export");
        for l in lines {
            section.line(l);
        }
        if !export_ok {
            report.ok = false;
        }
    }
    Ok(report)
}

/// The two derived forms of restriction are announced, never silent.
fn derived_res_note(alg: &FinAlgebra, laws: &[Law]) -> Option<String> {
    let uses_res = laws
        .iter()
        .any(|l| l.symbols().contains(&pfalg_core::Sym::Res));
    if !uses_res || alg.signature().contains(pfalg_core::Sym::Res) {
        return None;
    }
    if alg.signature().contains(pfalg_core::Sym::Mns) {
        Some("note: res is derived as mns(y,mns(y,x))".to_string())
    } else if alg.signature().contains(pfalg_core::Sym::Dom)
        && alg.signature().contains(pfalg_core::Sym::Cmp)
    {
        Some("note: res is derived as cmp(dom(x),y)".to_string())
    } else {
        None
    }
}

fn find_negated(laws: &[Law], spec: &str) -> anyhow::Result<Law> {
    if let Ok(idx) = spec.parse::<usize>() {
        if idx == 0 || idx > laws.len() {
            anyhow::bail!("--negate index out of range (1..={})", laws.len());
        }
        return Ok(laws[idx - 1].clone());
    }
    parse_law("negated", spec).map_err(|e| anyhow::anyhow!("--negate: {e}"))
}

fn cmd_search(
    laws_spec: String,
    size: usize,
    negate: Option<String>,
    lnh: bool,
) -> anyhow::Result<Report> {
    if size == 0 {
        anyhow::bail!("--size must be at least 1");
    }
    let (name, laws, _) = load_laws(&laws_spec)?;
    let negated = negate.map(|s| find_negated(&laws, &s)).transpose()?;
    let mut sig = Signature::default();
    for law in laws.iter().chain(negated.as_ref()) {
        for s in law.symbols() {
            sig = sig.with(s);
        }
    }
    let deadline = Instant::now() + search_timeout();
    let cancel = move || Instant::now() >= deadline;
    let limits = SearchLimits {
        cancel: Some(&cancel),
        least_number: lnh,
        ..SearchLimits::default()
    };
    let search_started = Instant::now();
    let result = search_model(&sig, &laws, size, negated.as_ref(), &limits)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    eprintln!("search elapsed: {:?}", search_started.elapsed());
    let mut report = Report::new("search");
    let section = report.section(format!("search {name} at size {size}"));
    section.line(format!("nodes: {}", result.stats.nodes));
    match &result.outcome {
        SearchOutcome::Model {
            algebra,
            negated_witness,
        } => {
            section.line("outcome: model found");
            for l in algebra.render().lines() {
                section.line(l);
            }
            if let Some(w) = negated_witness {
                section.line(format!("negated law fails at {}", w.describe(algebra)));
            }
        }
        SearchOutcome::Exhausted => section.line("outcome: exhausted (no model at this size)"),
        SearchOutcome::Aborted => section.line("outcome: timeout (search incomplete)"),
    }
    Ok(report)
}

fn cmd_irredundance(laws_spec: String, max_size: usize) -> anyhow::Result<Report> {
    let (name, laws, _) = load_laws(&laws_spec)?;
    let mut sig = Signature::default();
    for law in &laws {
        for s in law.symbols() {
            sig = sig.with(s);
        }
    }
    let mut report = Report::new("irredundance");
    report
        .section(format!("irredundance of {name}"))
        .line(format!("laws: {}, sizes tried: 2..={max_size}", laws.len()));
    let timeout = search_timeout();
    let all_started = Instant::now();
    let mut certs = Vec::new();
    for (i, omitted) in laws.iter().enumerate() {
        let rest: Vec<Law> = laws
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, l)| l.clone())
            .collect();
        let mut outcome = None;
        let mut nodes = 0u64;
        let mut aborted = false;
        for size in 2..=max_size {
            // a fresh deadline per (law, size) pair
            let deadline = Instant::now() + timeout;
            let cancel = move || Instant::now() >= deadline;
            let limits = SearchLimits {
                cancel: Some(&cancel),
                ..SearchLimits::default()
            };
            let r = search_model(&sig, &rest, size, Some(omitted), &limits)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            nodes += r.stats.nodes;
            match r.outcome {
                SearchOutcome::Model {
                    algebra,
                    negated_witness,
                } => {
                    outcome = Some((algebra, negated_witness, size));
                    break;
                }
                SearchOutcome::Aborted => aborted = true,
                SearchOutcome::Exhausted => {}
            }
        }
        certs.push((omitted.clone(), outcome, nodes, aborted));
    }
    eprintln!("irredundance elapsed: {:?}", all_started.elapsed());
    for (omitted, outcome, nodes, aborted) in certs {
        let section = report.section(format!("omit {}", omitted.name));
        section.line(format!("law: {omitted}"));
        section.line(format!("nodes: {nodes}"));
        match outcome {
            Some((algebra, witness, size)) => {
                section.line(format!("certificate: counter-model of size {size}"));
                for l in algebra.render().lines() {
                    section.line(l);
                }
                if let Some(w) = witness {
                    section.line(format!("omitted law fails at {}", w.describe(&algebra)));
                }
            }
            None => {
                section.line(format!(
                    "certificate: none up to size {max_size}{}",
                    if aborted { " (search timed out)" } else { "" }
                ));
            }
        }
    }
    Ok(report)
}

fn reproduce_one(report: &mut Report, name: &str) -> anyhow::Result<()> {
    let example = catalog::load_example(name).map_err(|e| anyhow::anyhow!("{e}"))?;
    let section = report.section(format!("reproduce {name}"));
    for f in &example.facts {
        section.line(format!("fact: {f}"));
    }
    for d in &example.discrepancies {
        section.line(format!("discrepancy: {d}"));
    }
    if let Some((law, v)) = &example.violation {
        let host = example.quotient.as_ref().unwrap_or(&example.algebra);
        section.line(format!(
            "violation: {} [{}] at {}",
            law.name,
            law,
            v.describe(host)
        ));
    }
    // the matching representation route, where one exists
    let route: Option<Signature> = match name {
        "properqe" => Some(Signature::from_names("mns").unwrap()),
        "updatecapqv" => Some(Signature::from_names("res,cap,upd").unwrap()),
        "droi" => Some(Signature::from_names("res,cap,ovr").unwrap()),
        _ => None,
    };
    if let Some(sig) = route {
        match choose_family(&example.algebra, &sig) {
            Ok(prepared) => {
                let rep = build_representation(&prepared.algebra, &prepared.family)
                    .map_err(|e| anyhow::anyhow!("{e}"))?;
                let rep_report = verify_representation(&rep).map_err(|e| anyhow::anyhow!("{e}"))?;
                let verdict = if rep_report.all_pass() {
                    "pass"
                } else {
                    "FAIL"
                };
                section.line(format!(
                    "representation as {sig}: {} filters, {} base points, all checks {verdict}",
                    rep.family.filters.len(),
                    rep.base.size()
                ));
                if !rep_report.all_pass() {
                    report.ok = false;
                }
            }
            Err(ReprError::AxiomsFail { lawset, violation }) => {
                // expected exactly for the skew-lattice example
                section.line(format!(
                    "representation as {sig}: refused, algebra fails `{lawset}` at {}",
                    violation.describe(&example.algebra)
                ));
                if name != "droi" {
                    report.ok = false;
                }
            }
            Err(e) => anyhow::bail!("{e}"),
        }
    }
    Ok(())
}

fn cmd_reproduce(name: String) -> anyhow::Result<Report> {
    let mut report = Report::new("reproduce");
    if name == "all" {
        for n in catalog::example_names() {
            reproduce_one(&mut report, n)?;
        }
    } else {
        reproduce_one(&mut report, &name)?;
    }
    Ok(report)
}

fn cmd_catalog_list() -> anyhow::Result<Report> {
    let mut report = Report::new("catalog-list");
    let section = report.section("law sets");
    for name in catalog::lawset_names() {
        let entry = catalog::load_lawset(name).map_err(|e| anyhow::anyhow!("{e}"))?;
        section.line(format!(
            "{name}  kind={}  sig={}  laws={}  status={}  ({})",
            entry.kind,
            entry.signature,
            entry.laws.len(),
            entry.status_line(),
            entry.provenance
        ));
    }
    let section = report.section("examples");
    for name in catalog::example_names() {
        let ex = catalog::load_example(name).map_err(|e| anyhow::anyhow!("{e}"))?;
        section.line(format!(
            "{name}  elements={}  sig={}  facts={} discrepancies={}",
            ex.algebra.size(),
            ex.closure_signature,
            ex.facts.len(),
            ex.discrepancies.len()
        ));
    }
    Ok(report)
}
