//! Experiment configuration files.
//!
//! The format is line oriented: `key = value` pairs under optional
//! `[section]` headers, `#` comments, comma-separated lists. Keys before
//! the first header are top-level keys.
//!
//! ```text
//! kind = distribution
//! seed = 7
//!
//! [family]
//! background = free            # preset name, `random` (with k), or omit and give a, b
//! perturbation = trace_class_demo
//! scale = 1.0
//!
//! [ladder]
//! n = 64, 256, 1024
//!
//! [analysis]
//! tests = z^2, z^4, hat(0.5, 0.05, 0.1)
//! ```
//!
//! | section      | key                 | default        |
//! |--------------|---------------------|----------------|
//! | (top)        | `kind`              | required       |
//! | (top)        | `seed`              | 20240101       |
//! | (top)        | `out`               | `.`            |
//! | `family`     | `background`        | `free`         |
//! | `family`     | `a`, `b`, `k`       | none           |
//! | `family`     | `perturbation`      | `none`         |
//! | `family`     | `scale`             | 1              |
//! | `family`     | `bound`             | 1e6            |
//! | `family`     | `source`            | `jacobi`       |
//! | `ladder`     | `n`                 | required       |
//! | `analysis`   | `eps`               | 0.1            |
//! | `analysis`   | `tests`             | `z^2`          |
//! | `analysis`   | `nodes`             | 1024           |
//! | `analysis`   | `range_grid`        | 4096           |
//! | `analysis`   | `gap_tol`           | 1e-6 x width   |
//! | `analysis`   | `abs_threshold`     | 0.05           |
//! | `analysis`   | `points`            | 0              |
//! | `analysis`   | `j_max`             | 3              |
//! | `analysis`   | `require_convergence` | false        |
//! | `instances`  | `count`             | 0              |
//! | `instances`  | `min_order`         | 2              |
//! | `instances`  | `max_order`         | 32             |
//! | `instances`  | `structure`         | `tridiagonal`  |
//! | `instances`  | `bandwidth`         | 3              |

use std::cell::Cell;
use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;
use speclab_core::analysis::{Family, TestFunction};
use speclab_core::random::{InstanceGenerator, DEFAULT_SEED};
use speclab_core::sequences::{BackgroundPreset, CoefficientSequence, PeriodicBackground, PerturbationPreset};
use speclab_core::symbols::periodic_symbol;
use speclab_core::Complex64;

/// Largest ladder rung accepted by any experiment.
pub const MAX_RUNG: usize = 4096;
/// Largest rung for `norms` sections (dense SVD).
pub const MAX_NORMS_RUNG: usize = 512;
/// Largest rung for `blockcheck` (dense truncations).
pub const MAX_BLOCK_RUNG: usize = 1024;
/// Largest order of a random instance.
pub const MAX_INSTANCE_ORDER: usize = 256;

const SECTIONS: [&str; 4] = ["analysis", "family", "instances", "ladder"];

/// Every accepted key with its default, sorted.
pub const KEYS: [(&str, &str); 26] = [
    ("analysis.abs_threshold", "0.05"),
    ("analysis.eps", "0.1"),
    ("analysis.gap_tol", "1e-6 x range width"),
    ("analysis.j_max", "3"),
    ("analysis.nodes", "1024"),
    ("analysis.points", "0"),
    ("analysis.range_grid", "4096"),
    ("analysis.require_convergence", "false"),
    ("analysis.tests", "z^2"),
    ("family.a", "none"),
    ("family.b", "none"),
    ("family.background", "free"),
    ("family.bound", "1e6"),
    ("family.k", "none"),
    ("family.perturbation", "none"),
    ("family.scale", "1"),
    ("family.source", "jacobi"),
    ("instances.bandwidth", "3"),
    ("instances.count", "0"),
    ("instances.max_order", "32"),
    ("instances.min_order", "2"),
    ("instances.structure", "tridiagonal"),
    ("kind", "required"),
    ("ladder.n", "required"),
    ("out", "."),
    ("seed", "20240101"),
];

/// A config problem, located by line (0 when a required key is missing).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub field: String,
    pub message: String,
}

impl ConfigError {
    fn new(line: usize, field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError { line, field: field.into(), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "`{}`: {}", self.field, self.message)
        } else {
            write!(f, "line {}: `{}`: {}", self.line, self.field, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

type Parsed<T> = Result<T, ConfigError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Attract,
    Blockcheck,
    Cluster,
    Distribution,
    Inequalities,
    Norms,
}

impl Kind {
    pub const ALL: [Kind; 6] =
        [Kind::Attract, Kind::Blockcheck, Kind::Cluster, Kind::Distribution, Kind::Inequalities, Kind::Norms];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Attract => "attract",
            Kind::Blockcheck => "blockcheck",
            Kind::Cluster => "cluster",
            Kind::Distribution => "distribution",
            Kind::Inequalities => "inequalities",
            Kind::Norms => "norms",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            Kind::Attract => "distances from given points to the j_max nearest eigenvalues along the ladder",
            Kind::Blockcheck => "truncated block Toeplitz vs periodic Jacobi identity, range components, gap outliers",
            Kind::Cluster => "outlier counts q_eps(n, S) around the essential range S of the background symbol",
            Kind::Distribution => "eigenvalue means of test functions against the symbol integrals",
            Kind::Inequalities => "Ky Fan-Mirsky, nonreal outlier bound and recurrence residual checks",
            Kind::Norms => "trace norm vs entrywise l1 sandwich on sections and seeded instances",
        }
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Kind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            let names: Vec<_> = Kind::ALL.iter().map(|k| k.name()).collect();
            format!("unknown kind `{s}` (expected one of {})", names.join(", "))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BackgroundSpec {
    Preset { name: String },
    Explicit { a: Vec<f64>, b: Vec<f64> },
    Random { k: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Jacobi,
    Toeplitz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Structure {
    Tridiagonal,
    Dense,
    Banded { bandwidth: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilySpec {
    pub background: BackgroundSpec,
    pub perturbation: String,
    pub scale: f64,
    pub bound: f64,
    pub source: Source,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceSpec {
    pub count: usize,
    pub min_order: usize,
    pub max_order: usize,
    pub structure: Structure,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub family: FamilySpec,
    pub ladder: Vec<usize>,
    pub eps: Vec<f64>,
    pub tests: Vec<TestFunction>,
    pub quadrature_nodes: usize,
    pub range_grid: usize,
    pub gap_tol: Option<f64>,
    pub abs_threshold: f64,
    pub points: Vec<Complex64>,
    pub j_max: usize,
    pub require_convergence: bool,
    pub instances: InstanceSpec,
}

struct Entry {
    line: usize,
    value: String,
    used: Cell<bool>,
}

/// Raw `section.key -> value` pairs.
struct Document {
    entries: BTreeMap<String, Entry>,
}

impl Document {
    fn parse(text: &str) -> Parsed<Self> {
        let mut entries: BTreeMap<String, Entry> = BTreeMap::new();
        let mut section = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(rest) = body.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| ConfigError::new(line, body, "section header must end with `]`"))?
                    .trim();
                if !SECTIONS.contains(&name) {
                    return Err(ConfigError::new(
                        line,
                        name,
                        format!("unknown section (expected one of {})", SECTIONS.join(", ")),
                    ));
                }
                section = name.to_string();
                continue;
            }
            let (key, value) =
                body.split_once('=').ok_or_else(|| ConfigError::new(line, body, "expected `key = value`"))?;
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(ConfigError::new(line, key, "invalid key"));
            }
            let full = if section.is_empty() { key.to_string() } else { format!("{section}.{key}") };
            if value.is_empty() {
                return Err(ConfigError::new(line, full, "empty value"));
            }
            if let Some(prev) = entries.get(&full) {
                return Err(ConfigError::new(line, full, format!("duplicate key (first set on line {})", prev.line)));
            }
            entries.insert(full, Entry { line, value: value.to_string(), used: Cell::new(false) });
        }
        Ok(Document { entries })
    }

    fn raw(&self, field: &str) -> Option<(&str, usize)> {
        self.entries.get(field).map(|e| {
            e.used.set(true);
            (e.value.as_str(), e.line)
        })
    }

    fn line(&self, field: &str) -> usize {
        self.entries.get(field).map_or(0, |e| e.line)
    }

    fn get<T>(&self, field: &str, parse: impl Fn(&str) -> Result<T, String>) -> Parsed<Option<T>> {
        match self.raw(field) {
            None => Ok(None),
            Some((v, line)) => parse(v).map(Some).map_err(|m| ConfigError::new(line, field, m)),
        }
    }

    fn or<T>(&self, field: &str, default: T, parse: impl Fn(&str) -> Result<T, String>) -> Parsed<T> {
        Ok(self.get(field, parse)?.unwrap_or(default))
    }

    fn list<T>(&self, field: &str, parse: impl Fn(&str) -> Result<T, String>) -> Parsed<Option<Vec<T>>> {
        self.get(field, |v| split_list(v)?.iter().map(|s| parse(s)).collect())
    }

    fn unused(&self) -> Option<(&str, usize)> {
        self.entries.iter().find(|(_, e)| !e.used.get()).map(|(k, e)| (k.as_str(), e.line))
    }
}

/// Splits on commas outside parentheses.
fn split_list(v: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in v.chars() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err("unbalanced `)`".into());
                }
            }
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur).trim().to_string());
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if depth != 0 {
        return Err("unbalanced `(`".into());
    }
    out.push(cur.trim().to_string());
    if out.iter().any(|s| s.is_empty()) {
        return Err("empty list element".into());
    }
    Ok(out)
}

fn uint(v: &str) -> Result<usize, String> {
    v.parse().map_err(|_| format!("expected a nonnegative integer, got `{v}`"))
}

fn seed(v: &str) -> Result<u64, String> {
    v.parse().map_err(|_| format!("expected a 64-bit unsigned integer, got `{v}`"))
}

fn real(v: &str) -> Result<f64, String> {
    match v.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(format!("expected a finite number, got `{v}`")),
    }
}

fn boolean(v: &str) -> Result<bool, String> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(format!("expected `true` or `false`, got `{v}`")),
    }
}

fn name(v: &str) -> Result<String, String> {
    Ok(v.to_string())
}

/// `x`, `yi`, `x+yi`, `x-yi`, `i`, `-i`.
pub fn parse_complex(v: &str) -> Result<Complex64, String> {
    let s: String = v.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("expected a complex number like `1.5-0.5i`, got `{v}`");
    let Some(body) = s.strip_suffix('i') else {
        return real(&s).map(|x| Complex64::new(x, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&p| (bytes[p] == b'+' || bytes[p] == b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    let imag = |t: &str| -> Result<f64, String> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => real(t).map_err(|_| bad()),
        }
    };
    match split {
        Some(p) => Ok(Complex64::new(real(&body[..p]).map_err(|_| bad())?, imag(&body[p..])?)),
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

/// `1`, `z`, `z^q`, `hat(center, inner, outer)`, `poly(c0, c1, ...)`.
pub fn parse_test_function(v: &str) -> Result<TestFunction, String> {
    let s = v.trim();
    if s == "1" {
        return Ok(TestFunction::monomial(0));
    }
    if s == "z" {
        return Ok(TestFunction::monomial(1));
    }
    if let Some(q) = s.strip_prefix("z^") {
        let q: u32 = q.trim().parse().map_err(|_| format!("bad monomial degree in `{s}`"))?;
        return Ok(TestFunction::monomial(q));
    }
    let args = |prefix: &str| -> Option<Result<Vec<String>, String>> {
        s.strip_prefix(prefix)
            .and_then(|r| r.trim_start().strip_prefix('('))
            .and_then(|r| r.strip_suffix(')'))
            .map(split_list)
    };
    if let Some(a) = args("hat") {
        let a = a?;
        if a.len() != 3 {
            return Err(format!("`hat` takes (center, inner, outer), got `{s}`"));
        }
        let center = parse_complex(&a[0])?;
        return TestFunction::hat(center, real(&a[1])?, real(&a[2])?).map_err(|e| e.to_string());
    }
    if let Some(a) = args("poly") {
        let coeffs = a?.iter().map(|c| parse_complex(c)).collect::<Result<Vec<_>, _>>()?;
        return Ok(TestFunction::polynomial(coeffs));
    }
    Err(format!("unknown test function `{s}` (expected 1, z, z^q, hat(c, r0, r1) or poly(c0, ...))"))
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let doc = Document::parse(text)?;
        let kind: Kind =
            doc.get("kind", |v| v.parse())?.ok_or_else(|| ConfigError::new(0, "kind", "missing required key"))?;
        let seed = doc.or("seed", DEFAULT_SEED, seed)?;
        let out = doc.get("out", |v| Ok(PathBuf::from(v)))?;

        let a = doc.list("family.a", real)?;
        let b = doc.list("family.b", real)?;
        let k = doc.get("family.k", uint)?;
        let preset = doc.get("family.background", name)?;
        let background = match (preset.as_deref(), a, b) {
            (Some("random"), None, None) => {
                let k =
                    k.ok_or_else(|| ConfigError::new(doc.line("family.background"), "family.k", "`random` needs k"))?;
                if !(1..=16).contains(&k) {
                    return Err(ConfigError::new(doc.line("family.k"), "family.k", "k must be in 1..=16"));
                }
                BackgroundSpec::Random { k }
            }
            (Some(p), None, None) => {
                BackgroundPreset::from_name(p)
                    .map_err(|e| ConfigError::new(doc.line("family.background"), "family.background", e.to_string()))?;
                BackgroundSpec::Preset { name: p.to_string() }
            }
            (None, Some(a), Some(b)) => BackgroundSpec::Explicit { a, b },
            (None, None, None) => BackgroundSpec::Preset { name: "free".into() },
            (Some(_), _, _) => {
                return Err(ConfigError::new(
                    doc.line("family.background"),
                    "family.background",
                    "give either a preset name or explicit a, b vectors",
                ))
            }
            (None, _, _) => {
                let line = doc.line("family.a").max(doc.line("family.b"));
                return Err(ConfigError::new(line, "family.a", "explicit backgrounds need both a and b"));
            }
        };
        let perturbation = doc.or("family.perturbation", "none".to_string(), name)?;
        PerturbationPreset::from_name(&perturbation)
            .map_err(|e| ConfigError::new(doc.line("family.perturbation"), "family.perturbation", e.to_string()))?;
        let scale = doc.or("family.scale", 1.0, real)?;
        let bound = doc.or("family.bound", speclab_core::sequences::DEFAULT_BOUND_GUARD, real)?;
        if bound <= 0.0 {
            return Err(ConfigError::new(doc.line("family.bound"), "family.bound", "must be positive"));
        }
        let source = doc.or("family.source", Source::Jacobi, |v| match v {
            "jacobi" => Ok(Source::Jacobi),
            "toeplitz" => Ok(Source::Toeplitz),
            _ => Err(format!("expected `jacobi` or `toeplitz`, got `{v}`")),
        })?;

        let ladder =
            doc.list("ladder.n", uint)?.ok_or_else(|| ConfigError::new(0, "ladder.n", "missing required key"))?;
        let eps = doc.list("analysis.eps", real)?.unwrap_or_else(|| vec![0.1]);
        let tests = doc.list("analysis.tests", parse_test_function)?.unwrap_or_else(|| vec![TestFunction::monomial(2)]);
        let quadrature_nodes = doc.or("analysis.nodes", speclab_core::symbols::DEFAULT_QUADRATURE_NODES, uint)?;
        let range_grid = doc.or("analysis.range_grid", speclab_core::symbols::DEFAULT_RANGE_GRID, uint)?;
        let gap_tol = doc.get("analysis.gap_tol", real)?;
        let abs_threshold = doc.or("analysis.abs_threshold", 0.05, real)?;
        let points = doc.list("analysis.points", parse_complex)?.unwrap_or_else(|| vec![Complex64::new(0.0, 0.0)]);
        let j_max = doc.or("analysis.j_max", 3, uint)?;
        let require_convergence = doc.or("analysis.require_convergence", false, boolean)?;

        let count = doc.or("instances.count", 0, uint)?;
        let min_order = doc.or("instances.min_order", 2, uint)?;
        let max_order = doc.or("instances.max_order", 32, uint)?;
        let bandwidth = doc.or("instances.bandwidth", 3, uint)?;
        let structure = doc.or("instances.structure", Structure::Tridiagonal, |v| match v {
            "tridiagonal" => Ok(Structure::Tridiagonal),
            "dense" => Ok(Structure::Dense),
            "banded" => Ok(Structure::Banded { bandwidth }),
            _ => Err(format!("expected `tridiagonal`, `dense` or `banded`, got `{v}`")),
        })?;

        if let Some((key, line)) = doc.unused() {
            return Err(ConfigError::new(line, key, "unknown key"));
        }

        let cfg = ExperimentConfig {
            kind,
            seed,
            out,
            family: FamilySpec { background, perturbation, scale, bound, source },
            ladder,
            eps,
            tests,
            quadrature_nodes,
            range_grid,
            gap_tol,
            abs_threshold,
            points,
            j_max,
            require_convergence,
            instances: InstanceSpec { count, min_order, max_order, structure },
        };
        cfg.validate(&doc)?;
        Ok(cfg)
    }

    fn validate(&self, doc: &Document) -> Parsed<()> {
        let err = |field: &str, msg: String| Err(ConfigError::new(doc.line(field), field, msg));
        let l = &self.ladder;
        if l[0] == 0 || l.windows(2).any(|w| w[0] >= w[1]) {
            return err("ladder.n", "rungs must be positive and strictly increasing".into());
        }
        let cap = match self.kind {
            Kind::Norms => MAX_NORMS_RUNG,
            Kind::Blockcheck => MAX_BLOCK_RUNG,
            _ => MAX_RUNG,
        };
        if l[l.len() - 1] > cap {
            return err("ladder.n", format!("largest rung must be at most {cap} for kind {}", self.kind.name()));
        }
        if self.eps.iter().any(|&e| e <= 0.0) {
            return err("analysis.eps", "values must be positive".into());
        }
        if self.quadrature_nodes == 0 {
            return err("analysis.nodes", "must be positive".into());
        }
        if self.range_grid < 64 {
            return err("analysis.range_grid", "must be at least 64".into());
        }
        if matches!(self.gap_tol, Some(g) if g < 0.0) {
            return err("analysis.gap_tol", "must be nonnegative".into());
        }
        if self.abs_threshold <= 0.0 {
            return err("analysis.abs_threshold", "must be positive".into());
        }
        if self.kind == Kind::Attract && (self.j_max == 0 || self.j_max > l[0]) {
            return err("analysis.j_max", format!("must be in 1..={} (the smallest rung)", l[0]));
        }
        let inst = &self.instances;
        if inst.min_order == 0 || inst.min_order > inst.max_order || inst.max_order > MAX_INSTANCE_ORDER {
            return err("instances.max_order", format!("need 1 <= min_order <= max_order <= {MAX_INSTANCE_ORDER}"));
        }
        if let Structure::Banded { bandwidth } = inst.structure {
            if bandwidth % 2 == 0 {
                return err("instances.bandwidth", "must be odd".into());
            }
        }
        self.background().map_err(|m| ConfigError::new(doc.line("family.a"), "family.background", m))?;
        if self.family.source == Source::Toeplitz && self.family.perturbation != "none" {
            return err("family.source", "the toeplitz source takes no perturbation".into());
        }
        if self.kind == Kind::Blockcheck && self.family.perturbation != "none" {
            return err("family.perturbation", "blockcheck uses the background only".into());
        }
        Ok(())
    }

    /// The periodic background; `random` backgrounds are drawn from the seed.
    pub fn background(&self) -> Result<PeriodicBackground, String> {
        match &self.family.background {
            BackgroundSpec::Preset { name } => {
                BackgroundPreset::from_name(name).map(BackgroundPreset::background).map_err(|e| e.to_string())
            }
            BackgroundSpec::Explicit { a, b } => {
                PeriodicBackground::new(a.clone(), b.clone()).map_err(|e| e.to_string())
            }
            BackgroundSpec::Random { k } => {
                let (a, b) = InstanceGenerator::new(self.seed).periodic_vectors(*k);
                PeriodicBackground::new(a, b).map_err(|e| e.to_string())
            }
        }
    }

    /// The coefficient sequence: background plus the scaled preset perturbation.
    pub fn sequence(&self) -> Result<CoefficientSequence, String> {
        let preset = PerturbationPreset::from_name(&self.family.perturbation).map_err(|e| e.to_string())?;
        let seq = preset.sequence(self.background()?, self.family.scale).map_err(|e| e.to_string())?;
        Ok(seq.with_bound(self.family.bound))
    }

    pub fn family(&self) -> Result<Family, String> {
        Ok(match self.family.source {
            Source::Jacobi => Family::Jacobi(self.sequence()?),
            Source::Toeplitz => Family::TruncatedToeplitz(periodic_symbol(&self.background()?)),
        })
    }

    pub fn is_unperturbed(&self) -> bool {
        self.family.perturbation == "none" || self.family.scale == 0.0
    }
}

impl FromStr for ExperimentConfig {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        ExperimentConfig::parse(s)
    }
}
