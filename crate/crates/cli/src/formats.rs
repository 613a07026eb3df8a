//! JSON encodings of the core types.
//!
//! Rationals are `[num, den]` pairs; each part is a JSON integer when it
//! fits in an `i64` and a decimal string otherwise. Both spellings are
//! accepted on input.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value as Json};
use zpgabor_core::search::{Finding, JobKind, Question1Flags, SearchJob, Shard};
use zpgabor_core::{
    Backend, Certificate, CycNum, GroupParams, Point, PointSet, Rational, Value, Verdict, Window, Witness,
};

use crate::error::CliError;

type Result<T> = std::result::Result<T, CliError>;

fn bad(message: impl Into<String>) -> CliError {
    CliError::Format(message.into())
}

fn big_int(s: String) -> Json {
    match s.parse::<i64>() {
        Ok(n) => Json::from(n),
        Err(_) => Json::String(s),
    }
}

fn int_text(v: &Json) -> Result<String> {
    match v {
        Json::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string()),
        Json::String(s) => Ok(s.clone()),
        other => Err(bad(format!("expected an integer, got {other}"))),
    }
}

pub fn rational_to_json(q: &Rational) -> Json {
    let (n, d) = q.to_parts_string();
    Json::Array(vec![big_int(n), big_int(d)])
}

pub fn rational_from_json(v: &Json) -> Result<Rational> {
    let parts = v.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("rational must be [num, den]"))?;
    let text = format!("{}/{}", int_text(&parts[0])?, int_text(&parts[1])?);
    Ok(text.parse::<Rational>()?)
}

/// Counters and integers beyond `u64` are written as strings.
pub fn u128_to_json(n: u128) -> Json {
    u64::try_from(n).map(Json::from).unwrap_or_else(|_| Json::String(n.to_string()))
}

pub fn u128_from_json(v: &Json) -> Result<u128> {
    int_text(v)?.parse().map_err(|_| bad(format!("expected a nonnegative integer, got {v}")))
}

// ------------------------------------------------------------- scalars

pub fn cyc_to_json(x: &CycNum) -> Json {
    json!({
        "p": x.modulus(),
        "coeffs": x.coeffs().iter().map(rational_to_json).collect::<Vec<_>>(),
    })
}

pub fn cyc_from_json(v: &Json) -> Result<CycNum> {
    let p = v.get("p").and_then(Json::as_u64).ok_or_else(|| bad("scalar needs an integer \"p\""))?;
    let coeffs = v
        .get("coeffs")
        .and_then(Json::as_array)
        .ok_or_else(|| bad("scalar needs a \"coeffs\" array"))?
        .iter()
        .map(rational_from_json)
        .collect::<Result<Vec<_>>>()?;
    Ok(CycNum::from_coeffs(p, coeffs)?)
}

pub fn complex_to_json(z: &Complex64) -> Json {
    json!([z.re, z.im])
}

pub fn complex_from_json(v: &Json) -> Result<Complex64> {
    match v.as_array().map(|a| a.as_slice()) {
        Some([re, im]) => Ok(Complex64::new(
            re.as_f64().ok_or_else(|| bad("float re must be a number"))?,
            im.as_f64().ok_or_else(|| bad("float im must be a number"))?,
        )),
        _ => Err(bad("float scalar must be [re, im]")),
    }
}

pub fn value_to_json(v: &Value) -> Json {
    match v {
        Value::Exact(x) => cyc_to_json(x),
        Value::Float(z) => complex_to_json(z),
    }
}

// -------------------------------------------------------------- points

pub fn point_to_json(x: &Point) -> Json {
    Json::from(x.coords().to_vec())
}

fn coords_from_json(v: &Json) -> Result<Vec<i64>> {
    v.as_array()
        .ok_or_else(|| bad("point must be an array of coordinates"))?
        .iter()
        .map(|c| c.as_i64().ok_or_else(|| bad("coordinates must be integers")))
        .collect()
}

#[derive(Serialize, Deserialize)]
struct SetDoc {
    p: u64,
    d: u32,
    points: Vec<Json>,
}

pub fn set_to_json(set: &PointSet) -> Json {
    let params = set.params();
    json!({
        "p": params.p(),
        "d": params.d(),
        "points": set.points().iter().map(point_to_json).collect::<Vec<_>>(),
    })
}

pub fn set_from_json(v: &Json) -> Result<PointSet> {
    let doc: SetDoc = serde_json::from_value(v.clone()).map_err(|e| bad(format!("point set: {e}")))?;
    let params = GroupParams::new(doc.p, doc.d)?;
    let mut set = PointSet::empty(params);
    for c in &doc.points {
        let coords = coords_from_json(c)?;
        if let Some(bad_c) = coords.iter().find(|&&v| v < 0 || v >= doc.p as i64) {
            return Err(bad(format!("coordinate {bad_c} outside 0..{}", doc.p)));
        }
        let x = params.point_from(&coords)?;
        if !set.insert_index(params.index(&x)) {
            return Err(bad(format!("duplicate point {c}")));
        }
    }
    Ok(set)
}

pub fn params_json(params: GroupParams) -> Json {
    json!({ "p": params.p(), "d": params.d() })
}

// ------------------------------------------------------------- windows

/// A window in either backend.
#[derive(Clone, Debug)]
pub enum AnyWindow {
    Exact(Window<CycNum>),
    Float(Window<Complex64>),
}

impl AnyWindow {
    pub fn params(&self) -> GroupParams {
        match self {
            AnyWindow::Exact(w) => w.params(),
            AnyWindow::Float(w) => w.params(),
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            AnyWindow::Exact(_) => Backend::Exact,
            AnyWindow::Float(_) => Backend::Float,
        }
    }

    pub fn exact(self) -> Result<Window<CycNum>> {
        match self {
            AnyWindow::Exact(w) => Ok(w),
            AnyWindow::Float(_) => Err(CliError::Usage("this operation needs an exact window".into())),
        }
    }

    /// The float shadow (identity on float windows).
    pub fn to_float(&self) -> Window<Complex64> {
        match self {
            AnyWindow::Exact(w) => w.to_float(),
            AnyWindow::Float(w) => w.clone(),
        }
    }
}

pub fn window_to_json(w: &Window<CycNum>) -> Json {
    let params = w.params();
    json!({
        "p": params.p(),
        "d": params.d(),
        "backend": Backend::Exact.name(),
        "values": w.values().iter().map(cyc_to_json).collect::<Vec<_>>(),
    })
}

pub fn float_window_to_json(w: &Window<Complex64>) -> Json {
    let params = w.params();
    json!({
        "p": params.p(),
        "d": params.d(),
        "backend": Backend::Float.name(),
        "values": w.values().iter().map(complex_to_json).collect::<Vec<_>>(),
    })
}

pub fn any_window_to_json(w: &AnyWindow) -> Json {
    match w {
        AnyWindow::Exact(w) => window_to_json(w),
        AnyWindow::Float(w) => float_window_to_json(w),
    }
}

pub fn window_from_json(v: &Json) -> Result<AnyWindow> {
    let p = v.get("p").and_then(Json::as_u64).ok_or_else(|| bad("window needs an integer \"p\""))?;
    let d = v.get("d").and_then(Json::as_u64).ok_or_else(|| bad("window needs an integer \"d\""))?;
    let params = GroupParams::new(p, d as u32)?;
    let values = v.get("values").and_then(Json::as_array).ok_or_else(|| bad("window needs a \"values\" array"))?;
    match v.get("backend").and_then(Json::as_str).unwrap_or("exact") {
        "exact" => {
            let vals = values.iter().map(cyc_from_json).collect::<Result<Vec<_>>>()?;
            if let Some(x) = vals.iter().find(|x| x.modulus() != params.p()) {
                return Err(bad(format!("value over p = {} in a window over p = {p}", x.modulus())));
            }
            Ok(AnyWindow::Exact(Window::new(params, vals)?))
        }
        "float" => {
            let vals = values.iter().map(complex_from_json).collect::<Result<Vec<_>>>()?;
            Ok(AnyWindow::Float(Window::new(params, vals)?))
        }
        other => Err(bad(format!("unknown backend {other:?}; expected \"exact\" or \"float\""))),
    }
}

// ------------------------------------------------------------ verdicts

fn atom_json(a: &zpgabor_core::Atom) -> Json {
    json!({ "a": point_to_json(&a.a), "b": point_to_json(&a.b) })
}

pub fn witness_to_json(w: &Witness) -> Json {
    match w {
        Witness::ModulationPair { first, second } => {
            json!({ "type": "modulation_pair", "first": point_to_json(first), "second": point_to_json(second) })
        }
        Witness::AtomPair { first, second, inner } => json!({
            "type": "atom_pair",
            "first": atom_json(first),
            "second": atom_json(second),
            "inner": value_to_json(inner),
        }),
        Witness::Coverage { point, count } => {
            json!({ "type": "coverage", "point": point_to_json(point), "count": count })
        }
        Witness::Cardinality { what, expected, found } => {
            json!({ "type": "cardinality", "what": what, "expected": expected, "found": found })
        }
        Witness::Abscissa { x, count } => json!({ "type": "abscissa", "x": x, "count": count }),
        Witness::Point { point, reason } => json!({ "type": "point", "point": point_to_json(point), "reason": reason }),
        Witness::Slice { slice, frequency, reason } => {
            json!({ "type": "slice", "slice": slice, "frequency": frequency, "reason": reason })
        }
        Witness::Set { set, reason } => json!({ "type": "set", "set": set_to_json(set), "reason": reason }),
        Witness::Part(name) => json!({ "type": "part", "part": name }),
        Witness::Note(note) => json!({ "type": "note", "note": note }),
    }
}

pub fn certificate_to_json(c: &Certificate) -> Json {
    match c {
        Certificate::CoverCounts(counts) => json!({ "type": "cover_counts", "counts": counts }),
        Certificate::NormSquared(v) => json!({ "type": "norm_squared", "value": value_to_json(v) }),
        Certificate::Set(s) => json!({ "type": "set", "set": set_to_json(s) }),
        Certificate::Value(v) => json!({ "type": "value", "value": value_to_json(v) }),
    }
}

pub fn verdict_to_json(v: &Verdict) -> Json {
    let mut out = Map::new();
    out.insert("passed".into(), Json::Bool(v.passed));
    if let Some(w) = &v.witness {
        out.insert("witness".into(), witness_to_json(w));
    }
    if let Some(c) = &v.certificate {
        out.insert("certificate".into(), certificate_to_json(c));
    }
    if !v.parts.is_empty() {
        let parts = v.parts.iter().map(|(name, part)| json!({ "name": name, "verdict": verdict_to_json(part) }));
        out.insert("parts".into(), Json::Array(parts.collect()));
    }
    Json::Object(out)
}

/// Adds the backend banner; float results are marked non-authoritative.
pub fn with_backend(mut verdict: Json, backend: Backend) -> Json {
    if let Json::Object(map) = &mut verdict {
        map.insert("backend".into(), Json::from(backend.name()));
        if backend == Backend::Float {
            map.insert("authoritative".into(), Json::Bool(false));
            map.insert(
                "banner".into(),
                Json::from("float backend: tolerance-based result, not a proof; re-run with --backend exact"),
            );
        }
    }
    verdict
}

// ------------------------------------------------------------- searches

fn flags_json(f: &Question1Flags) -> Json {
    json!({
        "non_product": f.non_product,
        "non_positive": f.non_positive,
        "modulus_not_indicator": f.modulus_not_indicator,
        "spectrum_not_indicator": f.spectrum_not_indicator,
        "support_ne_modulations": f.support_ne_modulations,
        "support_not_tile": f.support_not_tile,
    })
}

pub fn finding_to_json(f: &Finding) -> Json {
    let key = u128_to_json(f.key());
    match f {
        Finding::Tile { set, complement } => {
            json!({ "type": "tile", "key": key, "set": set_to_json(set), "complement": set_to_json(complement) })
        }
        Finding::Spectral { set, spectrum } => {
            json!({ "type": "spectral", "key": key, "set": set_to_json(set), "spectrum": set_to_json(spectrum) })
        }
        Finding::Mismatch { set, tiles, spectral } => {
            json!({ "type": "mismatch", "key": key, "set": set_to_json(set), "tiles": tiles, "spectral": spectral })
        }
        Finding::WeightedSpectrum { weight, spectrum, constant, .. } => json!({
            "type": "weighted_spectrum",
            "key": key,
            "weight": weight.values().iter().map(rational_to_json).collect::<Vec<_>>(),
            "spectrum": set_to_json(spectrum),
            "constant": constant,
        }),
        Finding::Question1 { window, translations, modulations, flags, .. } => json!({
            "type": "question1",
            "key": key,
            "window": window_to_json(window),
            "A": set_to_json(translations),
            "B": set_to_json(modulations),
            "flags": flags_json(flags),
        }),
    }
}

pub fn shard_to_json(s: &Shard) -> Json {
    json!({ "index": s.index(), "count": s.count() })
}

fn shard_from_json(v: &Json) -> Result<Shard> {
    let get = |k: &str| v.get(k).and_then(Json::as_u64).ok_or_else(|| bad(format!("shard needs \"{k}\"")));
    Ok(Shard::new(get("index")? as u32, get("count")? as u32)?)
}

pub fn job_to_json(job: &SearchJob) -> Json {
    let mut out = Map::new();
    out.insert("p".into(), Json::from(job.params.p()));
    out.insert("d".into(), Json::from(job.params.d()));
    out.insert("kind".into(), Json::from(job.kind.name()));
    match &job.kind {
        JobKind::FindSpectrum(set) | JobKind::FindTiling(set) => {
            out.insert("set".into(), set_to_json(set));
        }
        JobKind::WeightedSpectra { alphabet } => {
            out.insert("weights".into(), Json::Array(alphabet.iter().map(rational_to_json).collect()));
        }
        JobKind::Question1 { alphabet } => {
            out.insert("alphabet".into(), Json::Array(alphabet.iter().map(cyc_to_json).collect()));
        }
        _ => {}
    }
    let mut budget = Map::new();
    if let Some(n) = job.budget.max_nodes {
        budget.insert("max_nodes".into(), u128_to_json(n));
    }
    if let Some(ms) = job.budget.max_millis {
        budget.insert("max_millis".into(), Json::from(ms));
    }
    out.insert("budget".into(), Json::Object(budget));
    out.insert("shard".into(), shard_to_json(&job.shard));
    Json::Object(out)
}

pub fn job_from_json(v: &Json) -> Result<SearchJob> {
    let p = v.get("p").and_then(Json::as_u64).ok_or_else(|| bad("job needs \"p\""))?;
    let d = v.get("d").and_then(Json::as_u64).ok_or_else(|| bad("job needs \"d\""))?;
    let params = GroupParams::new(p, d as u32)?;
    let kind_name = v.get("kind").and_then(Json::as_str).ok_or_else(|| bad("job needs \"kind\""))?;
    let set = || -> Result<PointSet> {
        let s = set_from_json(v.get("set").ok_or_else(|| bad("job needs \"set\""))?)?;
        if s.params() != params {
            return Err(bad("job set lives in a different group"));
        }
        Ok(s)
    };
    let list = |key: &str| v.get(key).and_then(Json::as_array).ok_or_else(|| bad(format!("job needs \"{key}\"")));
    let kind = match kind_name {
        "tiles" => JobKind::AllTiles,
        "spectral" => JobKind::AllSpectral,
        "fuglede" => JobKind::FugledeCompare,
        "find-spectrum" => JobKind::FindSpectrum(set()?),
        "find-tiling" => JobKind::FindTiling(set()?),
        "weighted-spectra" => JobKind::WeightedSpectra {
            alphabet: list("weights")?.iter().map(rational_from_json).collect::<Result<_>>()?,
        },
        "question1" => {
            JobKind::Question1 { alphabet: list("alphabet")?.iter().map(cyc_from_json).collect::<Result<_>>()? }
        }
        other => return Err(bad(format!("unknown job kind {other:?}"))),
    };
    let mut job = SearchJob::new(params, kind);
    if let Some(b) = v.get("budget") {
        if let Some(n) = b.get("max_nodes") {
            job.budget.max_nodes = Some(u128_from_json(n)?);
        }
        if let Some(ms) = b.get("max_millis") {
            job.budget.max_millis = Some(ms.as_u64().ok_or_else(|| bad("max_millis must be an integer"))?);
        }
    }
    if let Some(s) = v.get("shard") {
        job.shard = shard_from_json(s)?;
    }
    Ok(job)
}

/// Reads the `counts` object of a report document.
pub fn report_counts_from_json(v: &Json) -> Result<std::collections::BTreeMap<String, u64>> {
    let counts = v.get("counts").and_then(Json::as_object).ok_or_else(|| bad("report needs \"counts\""))?;
    counts.iter().map(|(k, n)| Ok((k.clone(), n.as_u64().ok_or_else(|| bad("counts must be integers"))?))).collect()
}
