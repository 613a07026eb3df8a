//! Argument types and the five subcommands.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};
use zpgabor_core::gabor::{
    duality_check, indicator_equivalence_check, make_flat_window, make_gauss_window, make_parabola_dual_window,
    make_product_window, make_qr_row_window, make_sign_flip_window, theorem15_check, theorem16_check, theorem17_check,
};
use zpgabor_core::group::{parabola, subgroup_and_complement};
use zpgabor_core::pairs::{is_packing, is_spectral_pair, is_tiling_pair, square_sum_identity_everywhere, WeightFn};
use zpgabor_core::search::{find_spectrum, find_tiling_complement, parse_token, JobKind, SearchJob, Shard};
use zpgabor_core::{
    dft, idft, is_orthonormal_basis, plancherel_check, Backend, GaborSystem, GroupParams, NormMode, PointSet, Rational,
    Verdict, Window,
};

use crate::checkpoint::Checkpoint;
use crate::error::CliError;
use crate::formats::{
    any_window_to_json, float_window_to_json, job_from_json, set_from_json, set_to_json, verdict_to_json,
    window_from_json, window_to_json, with_backend, AnyWindow,
};
use crate::runner::{self, RunOptions};

type Result<T> = std::result::Result<T, CliError>;

pub const WINDOW_NAMES: &[&str] = &["indicator", "gauss", "flat", "sign-flip", "product", "qr-row", "parabola-dual"];
pub const SET_NAMES: &[&str] = &["parabola", "subgroup", "complement", "full", "origin"];

#[derive(Parser, Debug)]
#[command(name = "zpgabor", version, about = "Exact Gabor bases, spectral sets and tilings over Z_p^d")]
pub struct Cli {
    /// Add a `wall_time_ms` field to search reports.
    #[arg(long, global = true)]
    pub timing: bool,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a named window or point set.
    Construct(ConstructArgs),
    /// Decide a property; exit 0 on pass, 1 on fail.
    Verify(VerifyArgs),
    /// Run an enumeration or search.
    Search(SearchArgs),
    /// Forward (or inverse) transform of a window.
    Fourier(FourierArgs),
    /// Merge shard reports, or render reports and verdicts as text.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Exact,
    Float,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Exact => Backend::Exact,
            BackendArg::Float => Backend::Float,
        }
    }
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    /// Window: indicator, gauss, flat, sign-flip, product, qr-row,
    /// parabola-dual. Set: parabola, subgroup, complement, full, origin.
    pub name: String,
    /// The prime.
    #[arg(long)]
    pub p: Option<u64>,
    /// The dimension.
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    /// Rank of the subgroup `Z_p^k × {0}` for `subgroup` and `complement`.
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    /// Point set for `indicator`.
    #[arg(long = "E", alias = "set", value_name = "PATH")]
    pub set: Option<PathBuf>,
    /// Factors for `product`.
    #[arg(long, value_name = "PATH")]
    pub f: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub h: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = BackendArg::Exact)]
    pub backend: BackendArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyKind {
    Spectral,
    Tiling,
    Packing,
    GaborBasis,
    Thm15,
    Thm16,
    Thm17,
    SquareSum,
    Plancherel,
    Duality,
    Indicator,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub kind: VerifyKind,
    #[arg(long, value_name = "PATH")]
    pub window: Option<PathBuf>,
    /// Point set.
    #[arg(long = "E", alias = "set", value_name = "PATH")]
    pub set: Option<PathBuf>,
    /// Translations.
    #[arg(long = "A", value_name = "PATH")]
    pub a: Option<PathBuf>,
    /// Modulations, or a spectrum.
    #[arg(long = "B", value_name = "PATH")]
    pub b: Option<PathBuf>,
    #[arg(long)]
    pub k: Option<u32>,
    /// Require `‖g‖ = 1` exactly instead of the scale-free test.
    #[arg(long)]
    pub normalized: bool,
    #[arg(long, value_enum, default_value_t = BackendArg::Exact)]
    pub backend: BackendArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SearchKind {
    Tiles,
    Spectral,
    Fuglede,
    FindSpectrum,
    FindTiling,
    WeightedSpectra,
    Question1,
    /// Continue from `--checkpoint`.
    Resume,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(value_enum)]
    pub kind: SearchKind,
    /// The prime.
    #[arg(long)]
    pub p: Option<u64>,
    /// The dimension.
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    /// Point set for `find-spectrum` and `find-tiling`.
    #[arg(long = "E", alias = "set", value_name = "PATH")]
    pub set: Option<PathBuf>,
    /// Comma-separated values: rationals (`1/2`) or `c·ζ^k` as `cz<k>`.
    #[arg(long, allow_hyphen_values = true)]
    pub alphabet: Option<String>,
    /// `INDEX/COUNT`: keep integers `n` with `n mod COUNT = INDEX`.
    #[arg(long, value_name = "I/C")]
    pub shard: Option<String>,
    /// Worker threads; the output does not depend on it.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Maximum number of integers visited in this shard (`1e7` accepted).
    #[arg(long, value_name = "NODES")]
    pub budget: Option<String>,
    /// Stop after this many milliseconds (checked between chunks).
    #[arg(long, value_name = "MS")]
    pub max_millis: Option<u64>,
    /// Integers per chunk between budget checks and checkpoints.
    #[arg(long, default_value_t = runner::DEFAULT_CHUNK as u64)]
    pub chunk: u64,
    /// Checkpoint file, rewritten after every chunk; read by `resume`.
    #[arg(long, value_name = "PATH")]
    pub checkpoint: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FourierArgs {
    #[arg(long, value_name = "PATH")]
    pub window: PathBuf,
    #[arg(long)]
    pub inverse: bool,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Report or verdict files.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Print the merged report as JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

/// What a command produced: a JSON document or text, and the exit code.
#[derive(Debug)]
pub enum Output {
    Json(Json, i32),
    Text(String, i32),
}

pub fn context(cmd: &Command) -> &'static str {
    match cmd {
        Command::Construct(_) => "construct",
        Command::Verify(_) => "verify",
        Command::Search(_) => "search",
        Command::Fourier(_) => "fourier",
        Command::Report(_) => "report",
    }
}

pub fn dispatch(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Construct(a) => construct(a).map(|j| Output::Json(j, 0)),
        Command::Verify(a) => verify(a),
        Command::Search(a) => search(a, cli.timing),
        Command::Fourier(a) => fourier(a).map(|j| Output::Json(j, 0)),
        Command::Report(a) => report(a),
    }
}

// ---------------------------------------------------------------- input

pub fn read_json(path: &Path) -> Result<Json> {
    let shown = path.display().to_string();
    let text = if shown == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::io(&shown, e))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| CliError::io(&shown, e))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Format(format!("{shown}: {e}")))
}

fn need<'a, T>(v: &'a Option<T>, flag: &str) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| CliError::Usage(format!("missing {flag}")))
}

fn load_set(path: &Option<PathBuf>, flag: &str) -> Result<PointSet> {
    set_from_json(&read_json(need(path, flag)?)?)
}

fn load_window(path: &Option<PathBuf>) -> Result<AnyWindow> {
    window_from_json(&read_json(need(path, "--window")?)?)
}

fn need_p(p: Option<u64>) -> Result<u64> {
    p.ok_or_else(|| CliError::Usage("missing --p".into()))
}

// ------------------------------------------------------------ construct

fn construct(a: &ConstructArgs) -> Result<Json> {
    if SET_NAMES.contains(&a.name.as_str()) {
        let params = GroupParams::new(need_p(a.p)?, a.d)?;
        let set = match a.name.as_str() {
            "parabola" => parabola(params)?,
            "subgroup" => subgroup_and_complement(params, a.k)?.0,
            "complement" => subgroup_and_complement(params, a.k)?.1,
            "full" => PointSet::full(params),
            _ => PointSet::singleton(params, 0),
        };
        return Ok(set_to_json(&set));
    }
    let exact = |path: &Option<PathBuf>, flag: &str| -> Result<Window<_>> {
        window_from_json(&read_json(need(path, flag)?)?)?.exact()
    };
    let window = match a.name.as_str() {
        "indicator" => Window::indicator(&load_set(&a.set, "--E")?),
        "gauss" => make_gauss_window(need_p(a.p)?)?,
        "flat" => make_flat_window(need_p(a.p)?)?,
        "sign-flip" => make_sign_flip_window(need_p(a.p)?)?,
        "product" => make_product_window(&exact(&a.f, "--f")?, &exact(&a.h, "--h")?)?,
        "qr-row" => make_qr_row_window(need_p(a.p)?)?,
        "parabola-dual" => make_parabola_dual_window(need_p(a.p)?)?.window,
        other => {
            return Err(CliError::Usage(format!(
                "unknown constructor {other:?}; windows: {}; sets: {}",
                WINDOW_NAMES.join(", "),
                SET_NAMES.join(", ")
            )))
        }
    };
    Ok(match a.backend {
        BackendArg::Exact => window_to_json(&window),
        BackendArg::Float => float_window_to_json(&window.to_float()),
    })
}

// --------------------------------------------------------------- verify

fn verdict_output(v: &Verdict, backend: Backend) -> Output {
    Output::Json(with_backend(verdict_to_json(v), backend), if v.passed { 0 } else { 1 })
}

fn exact_only(kind: VerifyKind, backend: BackendArg) -> Result<()> {
    if backend == BackendArg::Float {
        return Err(CliError::Usage(format!("{kind:?} is decided exactly; --backend float is not available")));
    }
    Ok(())
}

fn verify(a: &VerifyArgs) -> Result<Output> {
    let backend = Backend::from(a.backend);
    let verdict = match a.kind {
        VerifyKind::Spectral => is_spectral_pair(&load_set(&a.set, "--E")?, &load_set(&a.b, "--B")?)?,
        VerifyKind::Tiling => is_tiling_pair(&load_set(&a.set, "--E")?, &load_set(&a.a, "--A")?)?,
        VerifyKind::Packing => is_packing(&load_set(&a.set, "--E")?, &load_set(&a.a, "--A")?)?,
        VerifyKind::Indicator => {
            indicator_equivalence_check(&load_set(&a.set, "--E")?, &load_set(&a.a, "--A")?, &load_set(&a.b, "--B")?)?
        }
        VerifyKind::GaborBasis | VerifyKind::Duality => {
            let (window, ta, tb) = (load_window(&a.window)?, load_set(&a.a, "--A")?, load_set(&a.b, "--B")?);
            let mode = if a.normalized { NormMode::Normalized } else { NormMode::ScaleFree };
            let dual = a.kind == VerifyKind::Duality;
            match (a.backend, window) {
                (BackendArg::Exact, AnyWindow::Exact(g)) => {
                    let sys = GaborSystem::new(g, ta, tb)?;
                    if dual {
                        duality_check(&sys)?
                    } else {
                        is_orthonormal_basis(&sys, mode)?
                    }
                }
                (BackendArg::Exact, AnyWindow::Float(_)) => {
                    return Err(CliError::Usage("float window given; pass --backend float".into()))
                }
                (BackendArg::Float, w) => {
                    let sys = GaborSystem::new(w.to_float(), ta, tb)?;
                    if dual {
                        duality_check(&sys)?
                    } else {
                        is_orthonormal_basis(&sys, mode)?
                    }
                }
            }
        }
        VerifyKind::Plancherel => match (a.backend, load_window(&a.window)?) {
            (BackendArg::Exact, AnyWindow::Exact(g)) => plancherel_check(&g),
            (BackendArg::Exact, AnyWindow::Float(_)) => {
                return Err(CliError::Usage("float window given; pass --backend float".into()))
            }
            (BackendArg::Float, w) => plancherel_check(&w.to_float()),
        },
        VerifyKind::Thm15 | VerifyKind::Thm16 => {
            exact_only(a.kind, a.backend)?;
            let g = load_window(&a.window)?.exact()?;
            let (ta, tb) = (load_set(&a.a, "--A")?, load_set(&a.b, "--B")?);
            if a.kind == VerifyKind::Thm15 {
                theorem15_check(&g, &ta, &tb)?
            } else {
                theorem16_check(&g, &ta, &tb)?
            }
        }
        VerifyKind::Thm17 => {
            exact_only(a.kind, a.backend)?;
            theorem17_check(&load_window(&a.window)?.exact()?, *need(&a.k, "--k")?)?
        }
        VerifyKind::SquareSum => {
            exact_only(a.kind, a.backend)?;
            // the identity is stated for unit mass; any positive multiple is rescaled
            let weight = WeightFn::from_window(&load_window(&a.window)?.exact()?)?.normalized()?;
            square_sum_identity_everywhere(&weight, &load_set(&a.b, "--B")?)?
        }
    };
    Ok(verdict_output(&verdict, backend))
}

// --------------------------------------------------------------- search

/// Parses `12`, `1e7`, `2.5e3` as a nonnegative integer node count.
pub fn parse_budget(s: &str) -> Result<u128> {
    let bad = || CliError::Usage(format!("bad --budget {s:?}; expected an integer like 10000 or 1e7"));
    if let Ok(n) = s.parse::<u128>() {
        return Ok(n);
    }
    let x: f64 = s.parse().map_err(|_| bad())?;
    if !x.is_finite() || x < 0.0 || x.fract() != 0.0 || x > 1e30 {
        return Err(bad());
    }
    Ok(x as u128)
}

pub fn parse_shard(s: &str) -> Result<Shard> {
    let bad = || CliError::Usage(format!("bad --shard {s:?}; expected INDEX/COUNT"));
    let (i, c) = s.split_once('/').ok_or_else(bad)?;
    Ok(Shard::new(i.trim().parse().map_err(|_| bad())?, c.trim().parse().map_err(|_| bad())?)?)
}

fn alphabet_tokens(a: &SearchArgs) -> Result<Vec<String>> {
    let raw = need(&a.alphabet, "--alphabet")?;
    let tokens: Vec<String> = raw.split(',').map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect();
    if tokens.is_empty() {
        return Err(CliError::Usage("--alphabet is empty".into()));
    }
    Ok(tokens)
}

fn build_job(a: &SearchArgs) -> Result<SearchJob> {
    let kind = match a.kind {
        SearchKind::FindSpectrum | SearchKind::FindTiling => {
            let set = load_set(&a.set, "--E")?;
            let params = set.params();
            let kind =
                if a.kind == SearchKind::FindSpectrum { JobKind::FindSpectrum(set) } else { JobKind::FindTiling(set) };
            return Ok(SearchJob::new(params, kind));
        }
        SearchKind::Tiles => JobKind::AllTiles,
        SearchKind::Spectral => JobKind::AllSpectral,
        SearchKind::Fuglede => JobKind::FugledeCompare,
        SearchKind::WeightedSpectra => JobKind::WeightedSpectra {
            alphabet: alphabet_tokens(a)?
                .iter()
                .map(|t| t.parse::<Rational>())
                .collect::<std::result::Result<_, _>>()?,
        },
        SearchKind::Question1 => {
            let p = need_p(a.p)?;
            let p32 = zpgabor_core::cyclotomic::ensure_prime(p)?;
            JobKind::Question1 {
                alphabet: alphabet_tokens(a)?
                    .iter()
                    .map(|t| parse_token(p32, t))
                    .collect::<std::result::Result<_, _>>()?,
            }
        }
        SearchKind::Resume => unreachable!("handled by the caller"),
    };
    Ok(SearchJob::new(GroupParams::new(need_p(a.p)?, a.d)?, kind))
}

fn search(a: &SearchArgs, timing: bool) -> Result<Output> {
    let opts = RunOptions { jobs: a.jobs, chunk: a.chunk as u128, checkpoint: a.checkpoint.clone() };
    let (job, resume) = if a.kind == SearchKind::Resume {
        let path = need(&a.checkpoint, "--checkpoint")?;
        let cp = Checkpoint::read(path)?;
        (job_from_json(&cp.job)?, Some(cp.progress))
    } else {
        let mut job = build_job(a)?;
        if let Some(s) = &a.shard {
            job.shard = parse_shard(s)?;
        }
        job.budget.max_nodes = a.budget.as_deref().map(parse_budget).transpose()?;
        job.budget.max_millis = a.max_millis;
        (job, None)
    };
    match &job.kind {
        JobKind::FindSpectrum(set) => {
            return Ok(match find_spectrum(set)? {
                Some(b) => Output::Json(set_to_json(&b), 0),
                None => Output::Json(Json::Null, 1),
            })
        }
        JobKind::FindTiling(set) => {
            return Ok(match find_tiling_complement(set)? {
                Some(t) => Output::Json(set_to_json(&t), 0),
                None => Output::Json(Json::Null, 1),
            })
        }
        _ => {}
    }
    let outcome = runner::run(&job, &opts, resume)?;
    let mut code = if outcome.complete { 0 } else { 1 };
    if matches!(job.kind, JobKind::FugledeCompare) && outcome.progress.count("mismatches") > 0 {
        code = 1;
    }
    Ok(Output::Json(outcome.report_json(&job, timing), code))
}

// -------------------------------------------------------------- fourier

fn fourier(a: &FourierArgs) -> Result<Json> {
    let w = window_from_json(&read_json(&a.window)?)?;
    let out = match (w, a.inverse) {
        (AnyWindow::Exact(g), false) => AnyWindow::Exact(dft(&g)),
        (AnyWindow::Exact(g), true) => AnyWindow::Exact(idft(&g)),
        (AnyWindow::Float(g), false) => AnyWindow::Float(dft(&g)),
        (AnyWindow::Float(g), true) => AnyWindow::Float(idft(&g)),
    };
    Ok(any_window_to_json(&out))
}

// --------------------------------------------------------------- report

fn key_of(finding: &Json) -> u128 {
    finding.get("key").and_then(|k| crate::formats::u128_from_json(k).ok()).unwrap_or(0)
}

/// Merges reports of the same search over disjoint shards.
pub fn merge_reports(docs: &[Json]) -> Result<Json> {
    let first = docs.first().ok_or_else(|| CliError::Usage("no reports".into()))?;
    let mut merged = first.clone();
    for doc in &docs[1..] {
        for field in ["kind", "params"] {
            if doc.get(field) != first.get(field) {
                return Err(CliError::Format(format!("reports differ in \"{field}\"; cannot merge")));
            }
        }
        let visited =
            crate::formats::u128_from_json(&merged["visited"])? + crate::formats::u128_from_json(&doc["visited"])?;
        merged["visited"] = crate::formats::u128_to_json(visited);
        let complete = merged["complete"].as_bool().unwrap_or(false) && doc["complete"].as_bool().unwrap_or(false);
        merged["complete"] = Json::Bool(complete);
        let counts = crate::formats::report_counts_from_json(doc)?;
        let mut total = crate::formats::report_counts_from_json(&merged)?;
        for (k, v) in counts {
            *total.entry(k).or_insert(0) += v;
        }
        merged["counts"] = json!(total);
        let mut findings = merged["findings"].as_array().cloned().unwrap_or_default();
        findings.extend(doc["findings"].as_array().cloned().unwrap_or_default());
        findings.sort_by_key(key_of);
        merged["findings"] = Json::Array(findings);
    }
    if docs.len() > 1 {
        let shards: Vec<Json> = docs.iter().map(|d| d["shard"].clone()).collect();
        merged["shard"] = Json::Array(shards);
        if let Some(obj) = merged.as_object_mut() {
            obj.remove("wall_time_ms");
        }
    }
    Ok(merged)
}

fn render_verdict(v: &Json, name: &str, depth: usize, out: &mut String) {
    let passed = v["passed"].as_bool().unwrap_or(false);
    let pad = "  ".repeat(depth);
    out.push_str(&format!("{pad}{} {name}\n", if passed { "PASS" } else { "FAIL" }));
    if let Some(w) = v.get("witness") {
        out.push_str(&format!("{pad}  witness: {w}\n"));
    }
    for part in v["parts"].as_array().into_iter().flatten() {
        render_verdict(&part["verdict"], part["name"].as_str().unwrap_or("?"), depth + 1, out);
    }
}

fn render_report(r: &Json, out: &mut String) {
    out.push_str(&format!("search   {}\n", r["kind"].as_str().unwrap_or("?")));
    out.push_str(&format!("group    Z_{}^{}\n", r["params"]["p"], r["params"]["d"]));
    out.push_str(&format!("shard    {}\n", r["shard"]));
    out.push_str(&format!("visited  {}\n", r["visited"]));
    out.push_str(&format!("complete {}\n", r["complete"]));
    if let Some(counts) = r["counts"].as_object() {
        let width = counts.keys().map(String::len).max().unwrap_or(0);
        for (k, v) in counts {
            out.push_str(&format!("  {k:<width$}  {v}\n"));
        }
    }
    let findings = r["findings"].as_array().map(Vec::len).unwrap_or(0);
    out.push_str(&format!("findings {findings}\n"));
    if let Some(ms) = r.get("wall_time_ms") {
        out.push_str(&format!("time     {ms} ms\n"));
    }
}

fn report(a: &ReportArgs) -> Result<Output> {
    let docs = a.inputs.iter().map(|p| read_json(p)).collect::<Result<Vec<_>>>()?;
    let all_verdicts = docs.iter().all(|d| d.get("passed").is_some());
    if all_verdicts {
        let mut text = String::new();
        for (doc, path) in docs.iter().zip(&a.inputs) {
            render_verdict(doc, &path.display().to_string(), 0, &mut text);
        }
        let code = if docs.iter().all(|d| d["passed"].as_bool() == Some(true)) { 0 } else { 1 };
        return Ok(if a.json { Output::Json(Json::Array(docs), code) } else { Output::Text(text, code) });
    }
    if docs.iter().any(|d| d.get("kind").is_none()) {
        return Err(CliError::Format("inputs must all be verdicts or all be search reports".into()));
    }
    let merged = merge_reports(&docs)?;
    let code = if merged["complete"].as_bool() == Some(true) { 0 } else { 1 };
    if a.json {
        Ok(Output::Json(merged, code))
    } else {
        let mut text = String::new();
        render_report(&merged, &mut text);
        Ok(Output::Text(text, code))
    }
}
