use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::esa::DEFAULT_EPS;
use crate::experiments::{Axis, Probe, Problem, PROBLEM_NAMES};
use crate::fractional_time::{OrderPreset, VariableOrder};
use crate::qsc::MIN_CELLS_PERTURBED;
use crate::schemes::SchemeKind;

/// Top-level action.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    Convergence,
    Compare,
    Properties,
    Bench,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Solve => "solve",
            Self::Convergence => "convergence",
            Self::Compare => "compare",
            Self::Properties => "properties",
            Self::Bench => "bench",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Markdown,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Self::Csv),
            "md" | "markdown" => Ok(Self::Markdown),
            _ => Err("expected `csv` or `md`".into()),
        }
    }
}

/// Order function as written in a configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaSpec {
    Preset(OrderPreset),
    /// `α(t) = p + q t`.
    Affine(f64, f64),
    Constant(f64),
}

impl AlphaSpec {
    pub fn order(self, horizon: f64) -> Result<VariableOrder> {
        match self {
            Self::Preset(p) => VariableOrder::preset(p, horizon),
            Self::Affine(p, q) => VariableOrder::affine(p, q, horizon),
            Self::Constant(a) => VariableOrder::constant(a, horizon),
        }
    }
}

impl FromStr for AlphaSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if let Some(rest) = s.strip_prefix("affine:") {
            let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
            return match parts[..] {
                [p, q] => Ok(Self::Affine(parse_f64(p)?, parse_f64(q)?)),
                _ => Err("expected `affine:p,q`".into()),
            };
        }
        if let Some(rest) = s.strip_prefix("const:") {
            return Ok(Self::Constant(parse_f64(rest.trim())?));
        }
        s.parse::<OrderPreset>()
            .map(Self::Preset)
            .map_err(|_| "expected a0, a1, a2, a3, affine:p,q or const:a".into())
    }
}

impl fmt::Display for AlphaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Preset(p) => f.write_str(p.name()),
            Self::Affine(p, q) => write!(f, "affine:{p},{q}"),
            Self::Constant(a) => write!(f, "const:{a}"),
        }
    }
}

/// Error measure requested for a convergence study.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    Exact,
    TwoMesh,
}

/// Validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub scheme: SchemeKind,
    /// Schemes of `compare`; empty selects every scheme the mesh admits.
    pub schemes: Vec<SchemeKind>,
    pub alpha: AlphaSpec,
    pub problem: String,
    /// Overrides the problem's diffusion coefficient.
    pub kappa: Option<f64>,
    pub horizon: f64,
    pub levels: Vec<usize>,
    pub mx: Vec<usize>,
    pub my: Vec<usize>,
    pub epsilon: f64,
    pub axis: Axis,
    pub measure: MeasureKind,
    pub probe: Probe,
    pub output: Option<PathBuf>,
    /// Collocation values of the final solution (`solve` only).
    pub solution: Option<PathBuf>,
    pub format: Format,
    /// Report wall seconds; off keeps reports byte-identical across runs.
    pub timing: bool,
    pub repeats: usize,
    pub filter: Option<String>,
    /// Threshold checks of `convergence --assert`.
    pub assert: bool,
    pub order_min: Option<f64>,
    pub order_max: Option<f64>,
}

const KEYS: [&str; 21] = [
    "scheme", "schemes", "alpha", "problem", "kappa", "t", "n", "mx", "my", "epsilon", "axis", "measure", "probe",
    "output", "solution", "format", "timing", "repeats", "filter", "order_min", "order_max",
];

/// Where a setting came from, for error messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Origin {
    Line(usize),
    Flag,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Line(n) => write!(f, "line {n}"),
            Self::Flag => f.write_str("command line"),
        }
    }
}

fn parse_f64(s: &str) -> std::result::Result<f64, String> {
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("`{s}` is not a finite number"))
}

/// A count such as `64` or `2^6`.
fn parse_count(s: &str) -> std::result::Result<usize, String> {
    let v = match s.split_once('^') {
        Some((b, e)) => {
            let (b, e) = (b.trim().parse::<usize>(), e.trim().parse::<u32>());
            match (b, e) {
                (Ok(b), Ok(e)) => b.checked_pow(e).ok_or_else(|| format!("`{s}` overflows"))?,
                _ => return Err(format!("`{s}` is not a count")),
            }
        }
        None => s.parse::<usize>().map_err(|_| format!("`{s}` is not a count"))?,
    };
    if v == 0 {
        return Err("counts must be positive".into());
    }
    Ok(v)
}

fn parse_list<T>(s: &str, item: impl Fn(&str) -> std::result::Result<T, String>) -> std::result::Result<Vec<T>, String> {
    let v = s
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(item)
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if v.is_empty() {
        return Err("list is empty".into());
    }
    Ok(v)
}

fn parse_bool(s: &str) -> std::result::Result<bool, String> {
    match s {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err("expected true or false".into()),
    }
}

fn parse_probe(s: &str) -> std::result::Result<Probe, String> {
    if s == "final" {
        return Ok(Probe::Final);
    }
    if let Some(t) = s.strip_prefix("t=") {
        return parse_f64(t.trim()).map(Probe::Time);
    }
    if let Some(k) = s.strip_prefix("level=") {
        return parse_count(k.trim()).map(Probe::Level);
    }
    Err("expected `final`, `t=<time>` or `level=<k>`".into())
}

/// Splits `key = value` text into settings; `#` starts a comment.
fn read_lines(text: &str) -> Result<Vec<(String, String, Origin)>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let origin = Origin::Line(idx + 1);
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("{origin}: expected `key = value`, got `{line}`")))?;
        out.push((k.trim().to_string(), v.trim().to_string(), origin));
    }
    Ok(out)
}

/// Parses a configuration file body and applies `overrides` on top.
///
/// Keys are case-insensitive; every error names the offending key and the
/// line (or the command line) that set it.
pub fn parse_config(command: Command, text: &str, overrides: &[(String, String)]) -> Result<RunConfig> {
    let mut settings = read_lines(text)?;
    settings.extend(overrides.iter().map(|(k, v)| (k.clone(), v.clone(), Origin::Flag)));
    let mut cfg = RunConfig {
        command,
        scheme: SchemeKind::AdiQscL1p,
        schemes: Vec::new(),
        alpha: AlphaSpec::Preset(OrderPreset::A1),
        problem: "example62_corrected".into(),
        kappa: None,
        horizon: 1.0,
        levels: vec![64],
        mx: vec![16],
        my: Vec::new(),
        epsilon: DEFAULT_EPS,
        axis: Axis::Time,
        measure: MeasureKind::Exact,
        probe: Probe::Final,
        output: None,
        solution: None,
        format: Format::Csv,
        timing: false,
        repeats: 3,
        filter: None,
        assert: false,
        order_min: None,
        order_max: None,
    };
    let mut seen: HashMap<&'static str, Origin> = HashMap::new();
    for (key, value, origin) in &settings {
        let lower = key.to_ascii_lowercase();
        let Some(&k) = KEYS.iter().find(|&&k| k == lower) else {
            return Err(Error::Config(format!(
                "{origin}: unknown key `{key}`; expected one of {}",
                KEYS.join(", ")
            )));
        };
        let bad = |msg: String| Error::Config(format!("{origin}: `{key}` = `{value}`: {msg}"));
        let v = value.as_str();
        match k {
            "scheme" => cfg.scheme = v.parse().map_err(|e: Error| bad(e.to_string()))?,
            "schemes" => {
                cfg.schemes = parse_list(v, |s| s.parse::<SchemeKind>().map_err(|e| e.to_string())).map_err(bad)?
            }
            "alpha" => cfg.alpha = v.parse().map_err(bad)?,
            "problem" => {
                Problem::from_name(v).map_err(|_| bad(format!("expected one of {}", PROBLEM_NAMES.join(", "))))?;
                cfg.problem = v.to_string();
            }
            "kappa" => cfg.kappa = Some(parse_f64(v).map_err(bad)?),
            "t" => cfg.horizon = parse_f64(v).map_err(bad)?,
            "n" => cfg.levels = parse_list(v, parse_count).map_err(bad)?,
            "mx" => cfg.mx = parse_list(v, parse_count).map_err(bad)?,
            "my" => cfg.my = parse_list(v, parse_count).map_err(bad)?,
            "epsilon" => cfg.epsilon = parse_f64(v).map_err(bad)?,
            "axis" => cfg.axis = v.parse().map_err(|_| bad("expected `time` or `space`".into()))?,
            "measure" => {
                cfg.measure = match v {
                    "exact" => MeasureKind::Exact,
                    "two_mesh" => MeasureKind::TwoMesh,
                    _ => return Err(bad("expected `exact` or `two_mesh`".into())),
                }
            }
            "probe" => cfg.probe = parse_probe(v).map_err(bad)?,
            "output" => cfg.output = Some(PathBuf::from(v)),
            "solution" => cfg.solution = Some(PathBuf::from(v)),
            "format" => cfg.format = v.parse().map_err(bad)?,
            "timing" => cfg.timing = parse_bool(v).map_err(bad)?,
            "repeats" => cfg.repeats = parse_count(v).map_err(bad)?,
            "filter" => cfg.filter = Some(v.to_string()),
            "order_min" => cfg.order_min = Some(parse_f64(v).map_err(bad)?),
            "order_max" => cfg.order_max = Some(parse_f64(v).map_err(bad)?),
            _ => unreachable!("key list and match arms agree"),
        }
        seen.insert(k, *origin);
    }
    if cfg.my.is_empty() {
        cfg.my = cfg.mx.clone();
    }
    if !seen.contains_key("measure") && Problem::from_name(&cfg.problem)?.exact.is_none() {
        cfg.measure = MeasureKind::TwoMesh;
    }
    if !seen.contains_key("axis") && cfg.levels.len() == 1 && cfg.mx.len() > 1 {
        cfg.axis = Axis::Space;
    }
    validate(&cfg, &seen)?;
    Ok(cfg)
}

fn validate(cfg: &RunConfig, seen: &HashMap<&'static str, Origin>) -> Result<()> {
    let at = |k: &str| seen.get(k).map_or_else(|| "default".to_string(), |o| o.to_string());
    let fail = |k: &str, msg: String| Err(Error::Config(format!("{}: `{k}`: {msg}", at(k))));
    if cfg.kappa.is_some_and(|k| k <= 0.0) {
        return fail("kappa", "must be positive".into());
    }
    if cfg.horizon <= 0.0 {
        return fail("T", "must be positive".into());
    }
    if let Err(e) = cfg.alpha.order(cfg.horizon) {
        return fail("alpha", format!("{e}"));
    }
    let kinds: Vec<SchemeKind> = match cfg.command {
        Command::Compare => cfg.schemes.clone(),
        Command::Bench => vec![SchemeKind::AdiQscL1p, SchemeKind::AdiQscFl1p],
        _ => vec![cfg.scheme],
    };
    let key = if cfg.command == Command::Compare && !cfg.schemes.is_empty() { "schemes" } else { "scheme" };
    if kinds.iter().any(|k| k.is_fast()) && !(cfg.epsilon > 0.0 && cfg.epsilon <= (-1.0f64).exp()) {
        return fail("epsilon", format!("fast schemes need 0 < epsilon <= 1/e, got {}", cfg.epsilon));
    }
    if let Some(k) = kinds.iter().find(|k| k.is_optimal()) {
        for (name, list) in [("Mx", &cfg.mx), ("My", &cfg.my)] {
            if let Some(m) = list.iter().find(|&&m| m < MIN_CELLS_PERTURBED) {
                return fail(
                    &name.to_ascii_lowercase(),
                    format!("{} needs {name} >= {MIN_CELLS_PERTURBED}, got {m} (set by {key} at {})", k.label(), at(key)),
                );
            }
        }
    }
    if cfg.mx.len() != cfg.my.len() {
        return fail("my", format!("gives {} values but Mx gives {}", cfg.my.len(), cfg.mx.len()));
    }
    match cfg.command {
        Command::Convergence => {
            let list = match cfg.axis {
                Axis::Time => &cfg.levels,
                Axis::Space => &cfg.mx,
            };
            let k = if cfg.axis == Axis::Time { "n" } else { "mx" };
            if list.len() < 2 || list.windows(2).any(|w| w[1] <= w[0]) {
                return fail(k, format!("a {} study needs at least two increasing values", cfg.axis));
            }
            let other = if cfg.axis == Axis::Time { &cfg.mx } else { &cfg.levels };
            if other.len() != 1 {
                return fail(if k == "n" { "mx" } else { "n" }, "the fixed axis takes a single value".into());
            }
            if cfg.mx != cfg.my {
                return fail("my", "convergence studies refine square meshes; drop My or set it equal to Mx".into());
            }
            if cfg.measure == MeasureKind::TwoMesh && cfg.axis == Axis::Space {
                return fail("measure", "two-mesh estimates refine time only".into());
            }
            if cfg.measure == MeasureKind::Exact && Problem::from_name(&cfg.problem)?.exact.is_none() {
                return fail("measure", format!("{} has no exact solution; use two_mesh", cfg.problem));
            }
        }
        Command::Bench => {
            if cfg.levels.windows(2).any(|w| w[1] <= w[0]) {
                return fail("n", "bench needs increasing N values".into());
            }
            if cfg.mx.len() != 1 || cfg.mx != cfg.my {
                return fail("mx", "bench runs a single square mesh".into());
            }
        }
        Command::Solve | Command::Compare => {
            if cfg.levels.len() != 1 || cfg.mx.len() != 1 {
                return fail("n", format!("{} takes a single N and a single Mx, My", cfg.command.name()));
            }
        }
        Command::Properties => {}
    }
    if let (Some(lo), Some(hi)) = (cfg.order_min, cfg.order_max) {
        if lo > hi {
            return fail("order_min", format!("exceeds order_max = {hi}"));
        }
    }
    Ok(())
}

impl RunConfig {
    pub fn problem(&self) -> Result<Problem> {
        let mut p = Problem::from_name(&self.problem)?.with_horizon(self.horizon);
        if let Some(k) = self.kappa {
            p = p.with_kappa(k);
        }
        Ok(p)
    }

    pub fn order(&self) -> Result<VariableOrder> {
        self.alpha.order(self.horizon)
    }

    /// Accepted band of observed orders for `convergence --assert`.
    pub fn order_band(&self, kind: SchemeKind) -> (f64, f64) {
        let default = match (self.axis, kind.is_optimal()) {
            (Axis::Space, true) => (3.8, 4.6),
            (Axis::Space, false) => (1.85, 2.15),
            (Axis::Time, _) => (1.7, 2.4),
        };
        (self.order_min.unwrap_or(default.0), self.order_max.unwrap_or(default.1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn empty_file_with_flags() {
        let cfg = parse_config(
            Command::Convergence,
            "",
            &flags(&[("scheme", "qsc_l1p"), ("N", "1024"), ("Mx", "16,32,64"), ("alpha", "a1")]),
        )
        .unwrap();
        assert_eq!(cfg.axis, Axis::Space);
        assert_eq!(cfg.my, vec![16, 32, 64]);
        assert_eq!(cfg.alpha, AlphaSpec::Preset(OrderPreset::A1));
    }

    #[test]
    fn file_values_and_overrides() {
        let text = "# study\nalpha = affine:0.7,-0.2\nN = 2^4, 2^5 # powers\nMx = 8\nformat = md\n";
        let cfg = parse_config(Command::Convergence, text, &flags(&[("format", "csv")])).unwrap();
        assert_eq!(cfg.alpha, AlphaSpec::Affine(0.7, -0.2));
        assert_eq!(cfg.levels, vec![16, 32]);
        assert_eq!(cfg.format, Format::Csv);
        assert_eq!(cfg.axis, Axis::Time);
    }

    #[test]
    fn optimal_scheme_needs_six_cells() {
        let text = "scheme = opt_adi_qsc_fl1p\nMx = 4\n";
        let err = parse_config(Command::Solve, text, &[]).unwrap_err().to_string();
        assert!(err.contains("line 2") && err.contains("Mx >= 6"), "{err}");
    }

    #[test]
    fn errors_name_key_and_line() {
        let err = parse_config(Command::Solve, "N = 10\nfoo = 1\n", &[]).unwrap_err().to_string();
        assert!(err.contains("line 2") && err.contains("foo"), "{err}");
        let err = parse_config(Command::Solve, "\n\nN = ten\n", &[]).unwrap_err().to_string();
        assert!(err.contains("line 3") && err.contains("`N`"), "{err}");
        let err = parse_config(Command::Solve, "just text\n", &[]).unwrap_err().to_string();
        assert!(err.contains("line 1"), "{err}");
        let err = parse_config(Command::Convergence, "N = 16\n", &[]).unwrap_err().to_string();
        assert!(err.contains("two increasing"), "{err}");
        let err = parse_config(Command::Solve, "scheme = adi_qsc_fl1p\nepsilon = 0.5\n", &[]).unwrap_err().to_string();
        assert!(err.contains("line 2") && err.contains("epsilon"), "{err}");
    }

    #[test]
    fn problems_without_exact_solution_default_to_two_mesh() {
        let cfg = parse_config(Command::Convergence, "problem = example61_corrected\nN = 16,32\n", &[]).unwrap();
        assert_eq!(cfg.measure, MeasureKind::TwoMesh);
        let err = parse_config(Command::Convergence, "problem = example61\nmeasure = exact\nN = 16,32\n", &[]);
        assert!(err.is_err());
    }

    #[test]
    fn value_parsers() {
        assert_eq!(parse_count("2^10"), Ok(1024));
        assert!(parse_count("0").is_err());
        assert_eq!(parse_probe("level=1"), Ok(Probe::Level(1)));
        assert_eq!(parse_probe("t=0.015625"), Ok(Probe::Time(0.015625)));
        assert_eq!("const:0.5".parse::<AlphaSpec>(), Ok(AlphaSpec::Constant(0.5)));
        assert!("a9".parse::<AlphaSpec>().is_err());
    }
}
