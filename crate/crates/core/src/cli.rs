//! Command-line front end shared by the `crinv` binary.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::convexity::{
    axis_conditions, convexifiability_verdict, gamma, model_convexity, AxisConditions, KNModel, KNOptions, KNReport,
    Verdict,
};
use crate::error::{Error, Result};
use crate::multitype::{infer_multitype, is_distinguished, MultitypeOptions, MultitypeResult};
use crate::planar::{analyze, classify, ModelTag, PlanarReport};
use crate::poly::{parse_defining_equation, parse_ratio, Polynomial};

#[derive(Debug, Parser)]
#[command(name = "crinv", version, about = "Invariants of real hypersurfaces given by polynomial defining equations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Planar invariants, model class, normal-form check and stability group.
    Classify(InputArgs),
    /// Multitype weight in the given coordinates.
    Multitype {
        #[command(flatten)]
        input: InputArgs,
        /// Also search over permutations of the coordinate axes.
        #[arg(long)]
        permute: bool,
        #[arg(long, default_value_t = 1000)]
        max_denominator: u64,
    },
    /// Kohn-Nirenberg numbers and the non-convexifiability verdict.
    Kn {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        numeric: NumericArgs,
    },
    /// Convexity of the model |z|^k + a|z|^(k-l) Re z^l.
    Model {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
        #[arg(long)]
        a: String,
        #[arg(long)]
        json: bool,
    },
    /// Normal-form conditions only.
    NormalForm(InputArgs),
    /// Table of convexity thresholds; `--k 4..8` is inclusive.
    GammaTable {
        #[arg(long)]
        k: String,
        #[arg(long)]
        l: Option<u32>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Inline defining equation.
    #[arg(long, conflicts_with = "file")]
    pub expr: Option<String>,
    /// File holding the defining equation.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Number of complex variables z; inferred from the largest index when absent.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct NumericArgs {
    /// Grid points per reduced real dimension.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Number of best grid cells refined by the simplex method.
    #[arg(long = "refine", default_value_t = 4)]
    pub refinements: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Input {
    Expr(String),
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Task {
    Classify,
    Multitype { permute: bool, max_denominator: u64 },
    Kn { grid: Option<usize>, refinements: usize, tol: f64 },
    Model { k: u32, l: u32, a: String },
    NormalForm,
    GammaTable { k_from: u32, k_to: u32, l: Option<u32> },
}

/// A validated invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub task: Task,
    pub input: Option<Input>,
    pub n: Option<usize>,
    pub format: Format,
}

fn format_of(json: bool) -> Format {
    if json {
        Format::Json
    } else {
        Format::Text
    }
}

fn input_of(a: &InputArgs) -> Result<Input> {
    match (&a.expr, &a.file) {
        (Some(e), None) => Ok(Input::Expr(e.clone())),
        (None, Some(f)) => Ok(Input::File(f.clone())),
        _ => Err(Error::Domain("exactly one of --expr and --file is required".into())),
    }
}

fn parse_k_range(s: &str) -> Result<(u32, u32)> {
    let bad = || Error::Domain(format!("--k expects an integer or a range a..b, got '{s}'"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a.trim(), b.trim().trim_start_matches('=')),
        None => (s.trim(), s.trim()),
    };
    let a: u32 = a.parse().map_err(|_| bad())?;
    let b: u32 = b.parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

impl TryFrom<Cli> for RunConfig {
    type Error = Error;

    fn try_from(cli: Cli) -> Result<Self> {
        let with_input = |task: Task, a: &InputArgs| -> Result<RunConfig> {
            Ok(RunConfig {
                task,
                input: Some(input_of(a)?),
                n: a.n,
                format: format_of(a.json),
            })
        };
        let cfg = match cli.command {
            Command::Classify(a) => with_input(Task::Classify, &a)?,
            Command::NormalForm(a) => with_input(Task::NormalForm, &a)?,
            Command::Multitype {
                input,
                permute,
                max_denominator,
            } => with_input(
                Task::Multitype {
                    permute,
                    max_denominator,
                },
                &input,
            )?,
            Command::Kn { input, numeric } => with_input(
                Task::Kn {
                    grid: numeric.grid,
                    refinements: numeric.refinements,
                    tol: numeric.tol,
                },
                &input,
            )?,
            Command::Model { k, l, a, json } => RunConfig {
                task: Task::Model { k, l, a },
                input: None,
                n: None,
                format: format_of(json),
            },
            Command::GammaTable { k, l, json } => {
                let (k_from, k_to) = parse_k_range(&k)?;
                RunConfig {
                    task: Task::GammaTable { k_from, k_to, l },
                    input: None,
                    n: None,
                    format: format_of(json),
                }
            }
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if let Task::Kn { grid, tol, .. } = &self.task {
            if !(*tol > 0.0) {
                return Err(Error::Domain(format!("--tol must be positive, got {tol}")));
            }
            if let Some(g) = grid {
                if *g < 8 {
                    return Err(Error::Domain(format!("--grid must be at least 8, got {g}")));
                }
            }
        }
        if self.n == Some(0) {
            return Err(Error::Domain("--n must be at least 1".into()));
        }
        Ok(())
    }

    fn polynomial(&self) -> Result<Polynomial> {
        let text = match &self.input {
            Some(Input::Expr(e)) => e.clone(),
            Some(Input::File(p)) => {
                std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?
            }
            None => return Err(Error::Domain("this command needs --expr or --file".into())),
        };
        let n = self.n.unwrap_or_else(|| infer_dimension(&text));
        parse_defining_equation(text.trim(), n)
    }
}

/// Largest variable index in the text, at least 1.
fn infer_dimension(text: &str) -> usize {
    let b = text.as_bytes();
    let mut best = 1;
    let mut i = 0;
    while i < b.len() {
        if b[i] == b'z' || b[i] == b'Z' {
            let start = i + 1;
            let mut j = start;
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            if let Ok(v) = text[start..j].parse::<usize>() {
                best = best.max(v);
            }
            i = j;
        } else {
            i += 1;
        }
    }
    best
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map_err(|e| Error::Json(e.to_string()))
}

#[derive(Serialize)]
struct KnOutput<'a> {
    multitype: &'a MultitypeResult,
    leading: String,
    axis_conditions: &'a AxisConditions,
    report: &'a KNReport,
}

#[derive(Serialize)]
struct GammaRow {
    l: u32,
    k: u32,
    branch: String,
    gamma_exact: String,
    gamma_float: f64,
}

/// Executes a command and returns the text written to standard output.
pub fn run(cfg: &RunConfig) -> Result<String> {
    cfg.validate()?;
    match &cfg.task {
        Task::Classify => {
            let rep = classify(&cfg.polynomial()?)?;
            match cfg.format {
                Format::Json => to_json(&rep),
                Format::Text => Ok(planar_text(&rep)),
            }
        }
        Task::NormalForm => {
            let rep = analyze(&cfg.polynomial()?)?;
            match cfg.format {
                Format::Json => to_json(&rep.normal_form),
                Format::Text => {
                    let mut s = format!("branch: {}\n", tag_name(rep.normal_form.branch));
                    for c in &rep.normal_form.checks {
                        let _ = writeln!(s, "{} {}", if c.passed { "ok  " } else { "FAIL" }, c.condition);
                        if !c.passed {
                            let _ = writeln!(s, "     offending: {}", c.offending.join(", "));
                        }
                    }
                    Ok(s)
                }
            }
        }
        Task::Multitype {
            permute,
            max_denominator,
        } => {
            let res = infer_multitype(
                &cfg.polynomial()?,
                &MultitypeOptions {
                    permute: *permute,
                    max_denominator: *max_denominator,
                },
            )?;
            match cfg.format {
                Format::Json => to_json(&res),
                Format::Text => Ok(format!(
                    "weight: ({})\nmultitype: ({})\nscope: {}\nweight-one part: {}\n",
                    res.weight.to_strings().join(", "),
                    res.multitype.join(", "),
                    match res.scope {
                        crate::multitype::Scope::FixedCoordinates => "fixed coordinates",
                        crate::multitype::Scope::PermutationSearched => "axis permutations searched",
                    },
                    res.certificate.weight1_part
                )),
            }
        }
        Task::Kn {
            grid,
            refinements,
            tol,
        } => {
            let psi = cfg.polynomial()?;
            let mt = infer_multitype(&psi, &MultitypeOptions::default())?;
            let m = common_entry(&mt)?;
            let leading = is_distinguished(&mt.weight, &psi).weight1;
            let axes = axis_conditions(&leading, m)?;
            let opts = KNOptions {
                grid: *grid,
                refinements: *refinements,
                tol: *tol,
                ..KNOptions::default()
            };
            let rep = convexifiability_verdict(&leading, m, &opts)?;
            match cfg.format {
                Format::Json => to_json(&KnOutput {
                    multitype: &mt,
                    leading: leading.to_string(),
                    axis_conditions: &axes,
                    report: &rep,
                }),
                Format::Text => {
                    let mut s = format!("m = {m}\n");
                    for (l, e) in &rep.per_l {
                        let _ = writeln!(
                            s,
                            "l = {l}: kappa = {}, threshold = {}, margin = {}",
                            e.kappa, e.threshold, e.margin
                        );
                    }
                    for v in &axes.violations {
                        let _ = writeln!(s, "axis violation: {v}");
                    }
                    let _ = match &rep.verdict {
                        Verdict::Obstructed { l, .. } => writeln!(s, "verdict: obstructed at l = {l}"),
                        Verdict::Inconclusive => writeln!(s, "verdict: inconclusive"),
                    };
                    Ok(s)
                }
            }
        }
        Task::Model { k, l, a } => {
            let a = parse_ratio(a).ok_or_else(|| Error::Domain(format!("--a must be a rational number, got '{a}'")))?;
            let res = model_convexity(&KNModel::new(*k, *l, a)?)?;
            match cfg.format {
                Format::Json => to_json(&res),
                Format::Text => Ok(format!(
                    "gamma = {} ({})\nconvex: {}\nconvexifiable: {}\n",
                    res.gamma.exact_string(),
                    res.gamma.value,
                    res.convex,
                    res.convexifiable.map_or("undetermined (l divides k)".to_string(), |b| b.to_string())
                )),
            }
        }
        Task::GammaTable { k_from, k_to, l } => {
            let mut rows = Vec::new();
            for k in *k_from..=*k_to {
                let ls: Vec<u32> = match l {
                    Some(l) => vec![*l],
                    None => (2..=k).step_by(2).collect(),
                };
                for l in ls {
                    if l > k {
                        continue;
                    }
                    let g = gamma(l, k)?;
                    rows.push(GammaRow {
                        l,
                        k,
                        branch: format!("{:?}", g.branch).to_lowercase(),
                        gamma_exact: g.exact_string(),
                        gamma_float: g.value,
                    });
                }
            }
            match cfg.format {
                Format::Json => to_json(&rows),
                Format::Text => {
                    let mut s = String::from("l,k,branch,gamma_exact,gamma_float\n");
                    for r in rows {
                        let _ = writeln!(s, "{},{},{},{},{}", r.l, r.k, r.branch, r.gamma_exact, r.gamma_float);
                    }
                    Ok(s)
                }
            }
        }
    }
}

fn common_entry(mt: &MultitypeResult) -> Result<u32> {
    let entries = mt.entries();
    let first = entries[0].clone();
    let uniform = entries.iter().all(|e| *e == first);
    match first {
        Some(m) if uniform && m.is_integer() => {
            let v: u32 = m
                .to_integer()
                .try_into()
                .map_err(|_| Error::Domain("multitype entry too large".into()))?;
            if v % 2 == 0 {
                return Ok(v);
            }
            Err(Error::precondition(
                "all multitype entries must equal one even integer m",
                format!("common entry {v} is odd"),
            ))
        }
        _ => Err(Error::precondition(
            "all multitype entries must equal one even integer m",
            format!("multitype is ({})", mt.multitype.join(", ")),
        )),
    }
}

fn tag_name(t: ModelTag) -> &'static str {
    match t {
        ModelTag::Circular => "circular",
        ModelTag::Tubular => "tubular",
        ModelTag::Generic => "generic",
    }
}

fn planar_text(r: &PlanarReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "k = {}, e = {}, d = {}", r.k, r.e, r.d.map_or("-".into(), |d| d.to_string()));
    let _ = writeln!(s, "model: {} ({})", tag_name(r.model), r.model_group.symbol);
    let _ = writeln!(s, "model group: {}", r.model_group.description);
    if let Some(p) = &r.normalization.normalized_leading {
        let _ = writeln!(s, "normalized leading part: {p}");
    }
    if let Some(sc) = &r.normalization.scale_exact {
        let _ = writeln!(s, "scale: {sc}");
    }
    let theta: Vec<String> = r.theta.iter().map(|t| format!("({},{},{})", t[0], t[1], t[2])).collect();
    let _ = writeln!(s, "Theta: {{{}}}", theta.join(", "));
    let _ = writeln!(s, "mu0: {}", r.mu0.map_or("-".into(), |m| m.to_string()));
    if let Some(a) = &r.aut {
        let _ = writeln!(s, "aut: {}", a.tag.label());
    }
    for c in &r.caveats {
        let _ = writeln!(s, "caveat: {c}");
    }
    let _ = writeln!(s, "truncation degree: {}", r.truncation_degree);
    s
}

/// `error[code]: message` for standard error.
pub fn render_error(e: &Error) -> String {
    format!("error[{}]: {e}", e.code())
}

/// Runs a parsed command line and returns the exit status.
pub fn main_with(cli: Cli, out: &mut impl std::io::Write, err: &mut impl std::io::Write) -> i32 {
    let result = RunConfig::try_from(cli).and_then(|cfg| run(&cfg));
    match result {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            if !text.ends_with('\n') {
                let _ = out.write_all(b"\n");
            }
            0
        }
        Err(e) => {
            let _ = writeln!(err, "{}", render_error(&e));
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("crinv").chain(args.iter().copied())).unwrap()
    }

    fn exec(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = main_with(cli(args), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn classify_theta_example() {
        let (code, out, _) = exec(&["classify", "--n", "1", "--expr", "|z1|^4 + z1^3*Z1*u + z1*Z1^3*u", "--json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["aut"], "Finite(2)");
    }

    #[test]
    fn model_example() {
        let (code, out, _) = exec(&["model", "--k", "8", "--l", "6", "--a", "15/7", "--json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["convex"], false);
        assert_eq!(v["convexifiable"], false);
    }

    #[test]
    fn gamma_table_rows() {
        let (code, out, _) = exec(&["gamma-table", "--k", "4..8", "--json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v
            .as_array()
            .unwrap()
            .iter()
            .any(|r| r["l"] == 6 && r["k"] == 8 && r["gamma_exact"] == "2/7"));
        let (_, csv, _) = exec(&["gamma-table", "--k", "8"]);
        assert!(csv.starts_with("l,k,branch,gamma_exact,gamma_float\n"));
        assert!(csv.contains("6,8,rational,2/7,"));
    }

    #[test]
    fn error_codes() {
        let (code, _, err) = exec(&["classify", "--expr", "|z1|^3"]);
        assert_eq!(code, 2);
        assert!(err.starts_with("error[parse_error]"));
        let (code, _, err) = exec(&["classify", "--expr", "|z1|^4 + z1*u + Z1*u"]);
        assert_eq!(code, 2);
        assert!(err.contains("requires normal coordinates"));
        let (code, _, _) = exec(&["kn", "--expr", "|z1|^4 + |z2|^4", "--grid", "4"]);
        assert_eq!(code, 2);
        let (code, _, err) = exec(&["classify", "--file", "/nonexistent/crinv-input"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("error[io_error]"));
    }

    #[test]
    fn kn_requires_equal_entries() {
        let (code, _, err) = exec(&["kn", "--expr", "|z1|^4 + |z2|^6"]);
        assert_eq!(code, 2);
        assert!(err.contains("multitype"));
    }

    #[test]
    fn json_is_deterministic() {
        let args = ["kn", "--expr", "|z1|^4 + |z2|^4 + 2*Re(z1^3*Z2)", "--json", "--grid", "16"];
        let a = exec(&args).1;
        let b = exec(&args).1;
        assert_eq!(a, b);
        assert!(a.contains("\"verdict\""));
    }

    #[test]
    fn dimension_inference() {
        assert_eq!(infer_dimension("|z1|^2 + Z3*z3"), 3);
        assert_eq!(infer_dimension("u"), 1);
    }
}
