//! Command-line front end: argument parsing, run descriptors and report
//! rendering. The `qhj` binary is a thin wrapper around [`main_with_args`].

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::catalog::{Domain, Family, MaxLevel, PotentialSpec, SpecJson, UnitSystem};
use crate::error::{QhjError, Result};
use crate::oracle::{oracle_eigenvalue, OracleConfig};
use crate::quantizer::solve_level;
use crate::residues::{
    fixed_poles, gamma_contribution, infinity_contribution, laurent_branch, report_scale, PoleKind,
};
use crate::semiclassical::{swkb_integral, swkb_level, wkb_level};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    List,
    Spectrum,
    Verify,
    Residues,
    WkbCompare,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Qhj,
    Closed,
    Oracle,
    Wkb,
    Swkb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRange {
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

/// Everything needed to reproduce one invocation. Serializes to the JSON
/// accepted by `--config`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunDescriptor {
    pub command: CommandKind,
    pub spec: Option<SpecJson>,
    pub levels: usize,
    pub methods: Vec<Method>,
    pub tol: f64,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
    pub energy: Option<f64>,
    pub sweep: Option<SweepRange>,
}

impl Default for RunDescriptor {
    fn default() -> Self {
        RunDescriptor {
            command: CommandKind::List,
            spec: None,
            levels: 5,
            methods: Vec::new(),
            tol: 1e-13,
            format: OutputFormat::Table,
            output: None,
            energy: None,
            sweep: None,
        }
    }
}

impl RunDescriptor {
    fn potential(&self) -> Result<PotentialSpec> {
        match &self.spec {
            Some(s) => PotentialSpec::try_from(s.clone()),
            None => Err(QhjError::MissingParameter("family".into())),
        }
    }

    /// Methods to run, with the command's default when none were given.
    pub fn effective_methods(&self) -> Vec<Method> {
        let mut m = if self.methods.is_empty() {
            match self.command {
                CommandKind::Verify => vec![Method::Qhj, Method::Closed, Method::Oracle],
                CommandKind::WkbCompare => {
                    vec![Method::Qhj, Method::Closed, Method::Wkb, Method::Swkb]
                }
                _ => vec![Method::Qhj, Method::Closed],
            }
        } else {
            self.methods.clone()
        };
        m.sort();
        m.dedup();
        m
    }

    pub fn validate(&self) -> Result<()> {
        if self.command == CommandKind::List {
            return Ok(());
        }
        self.potential()?;
        if self.levels < 1 {
            return Err(QhjError::Contract("--levels must be at least 1".into()));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(QhjError::Contract(format!(
                "--tol must lie in (0, 1), got {}",
                self.tol
            )));
        }
        if let Some(e) = self.energy {
            if !e.is_finite() {
                return Err(QhjError::Contract("--energy must be finite".into()));
            }
        }
        if self.command == CommandKind::Sweep {
            let Some(s) = &self.sweep else {
                return Err(QhjError::MissingParameter("param".into()));
            };
            if s.steps < 1 || !s.from.is_finite() || !s.to.is_finite() {
                return Err(QhjError::Contract(
                    "sweep needs finite --from/--to and --steps ≥ 1".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qhj",
    version,
    about = "Bound-state spectra from quantum Hamilton-Jacobi residues"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the potential families and their parameters.
    List(RunArgs),
    /// Compute levels with the selected methods.
    Spectrum(RunArgs),
    /// Cross-check QHJ, closed-form and numerical eigenvalues.
    Verify(RunArgs),
    /// Show the fixed poles, residue candidates and contour terms.
    Residues(RunArgs),
    /// Compare WKB and SWKB levels with the exact spectrum.
    WkbCompare(RunArgs),
    /// Repeat a spectrum over a linear range of one parameter.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long = "A")]
    pub a: Option<f64>,
    #[arg(long = "B")]
    pub b: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long = "L")]
    pub l: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long = "method", value_enum, value_delimiter = ',')]
    pub methods: Vec<Method>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub energy: Option<f64>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long)]
    pub param: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub from: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub to: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
}

impl Cli {
    /// Merges the flags over the `--config` file (if any).
    pub fn into_descriptor(self) -> Result<RunDescriptor> {
        let (kind, run, sweep) = match self.command {
            Command::List(r) => (CommandKind::List, r, None),
            Command::Spectrum(r) => (CommandKind::Spectrum, r, None),
            Command::Verify(r) => (CommandKind::Verify, r, None),
            Command::Residues(r) => (CommandKind::Residues, r, None),
            Command::WkbCompare(r) => (CommandKind::WkbCompare, r, None),
            Command::Sweep(s) => (CommandKind::Sweep, s.run.clone(), Some(s)),
        };
        let mut d = match &run.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| QhjError::Io(format!("{}: {e}", path.display())))?;
                serde_json::from_str::<RunDescriptor>(&text)
                    .map_err(|e| QhjError::Contract(format!("config {}: {e}", path.display())))?
            }
            None => RunDescriptor::default(),
        };
        d.command = kind;
        d.spec = merge_spec(d.spec.take(), &run)?;
        if let Some(n) = run.levels {
            d.levels = n;
        }
        if !run.methods.is_empty() {
            d.methods = run.methods.clone();
        }
        if let Some(t) = run.tol {
            d.tol = t;
        }
        if let Some(f) = run.format {
            d.format = f;
        }
        if run.output.is_some() {
            d.output = run.output.clone();
        }
        if run.energy.is_some() {
            d.energy = run.energy;
        }
        if let Some(s) = sweep {
            let base = d.sweep.take();
            let pick = |flag: Option<f64>, old: Option<f64>, name: &str| {
                flag.or(old)
                    .ok_or_else(|| QhjError::MissingParameter(name.to_string()))
            };
            let param = s.param.or(base.as_ref().map(|b| b.param.clone()));
            d.sweep = match param {
                None => None,
                Some(param) => Some(SweepRange {
                    param,
                    from: pick(s.from, base.as_ref().map(|b| b.from), "from")?,
                    to: pick(s.to, base.as_ref().map(|b| b.to), "to")?,
                    steps: s.steps.or(base.as_ref().map(|b| b.steps)).unwrap_or(5),
                }),
            };
        }
        Ok(d)
    }
}

fn merge_spec(base: Option<SpecJson>, run: &RunArgs) -> Result<Option<SpecJson>> {
    let flags = [
        ("A", run.a),
        ("B", run.b),
        ("alpha", run.alpha),
        ("omega", run.omega),
        ("L", run.l),
    ];
    let mut spec = match (base, &run.family) {
        (Some(b), Some(f)) if Family::from_name(&b.family)? == Family::from_name(f)? => b,
        (_, Some(f)) => SpecJson {
            family: Family::from_name(f)?.name().to_string(),
            params: BTreeMap::new(),
            hbar: 1.0,
            mass: 1.0,
        },
        (Some(b), None) => b,
        (None, None) => {
            let any =
                flags.iter().any(|(_, v)| v.is_some()) || run.hbar.is_some() || run.mass.is_some();
            if any {
                return Err(QhjError::MissingParameter("family".into()));
            }
            return Ok(None);
        }
    };
    for (name, v) in flags {
        if let Some(v) = v {
            spec.params.insert(name.to_string(), v);
        }
    }
    if let Some(h) = run.hbar {
        spec.hbar = h;
    }
    if let Some(m) = run.mass {
        spec.mass = m;
    }
    Ok(Some(spec))
}

/// A rendered report plus whether every check in it passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub passed: bool,
}

/// Runs a validated descriptor and renders its report.
pub fn run(d: &RunDescriptor) -> Result<Report> {
    d.validate()?;
    match d.command {
        CommandKind::List => Ok(pass(render_list(d.format))),
        CommandKind::Spectrum => {
            let spec = d.potential()?;
            let t = spectrum_table(&spec, d)?;
            Ok(pass(render_levels(&spec, &t, d.format, None)))
        }
        CommandKind::Verify => verify(d),
        CommandKind::Residues => residues(d).map(pass),
        CommandKind::WkbCompare => wkb_compare(d).map(pass),
        CommandKind::Sweep => sweep(d).map(pass),
    }
}

fn pass(text: String) -> Report {
    Report { text, passed: true }
}

/// Rounds to 15 significant digits so JSON prints at most that many.
fn r15(x: f64) -> f64 {
    if x.is_finite() {
        format!("{x:.14e}").parse().unwrap_or(x)
    } else {
        x
    }
}

fn num(x: Option<f64>) -> Value {
    match x {
        Some(v) if v.is_finite() => json!(r15(v)),
        _ => Value::Null,
    }
}

fn cnum(z: Complex64) -> Value {
    json!([r15(z.re), r15(z.im)])
}

fn csv_num(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.14e}")).unwrap_or_default()
}

fn table_num(x: Option<f64>) -> String {
    match x {
        None => "-".into(),
        Some(v) if v == 0.0 => "0".into(),
        Some(v) if (1e-3..1e6).contains(&v.abs()) => {
            let digits = v.abs().log10().floor() as i32 + 1;
            format!("{:.*}", (9 - digits).max(0) as usize, v)
        }
        Some(v) => format!("{v:.8e}"),
    }
}

fn table_complex(z: Complex64) -> String {
    let im = table_num(Some(z.im.abs()));
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{sign}{im}i", table_num(Some(z.re)))
}

fn pad_table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(c, s)| format!("{s:>w$}", w = widths[c]))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn csv_rows(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for r in rows {
        w.write_record(r).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s
}

fn render_list(format: OutputFormat) -> String {
    let domain = |spec: &PotentialSpec| {
        match (spec.family(), spec.domain()) {
            (_, Domain::FullLine) => "-inf < x < inf",
            (_, Domain::HalfLine) => "x > 0",
            (Family::SquareWell, _) => "0 < x < L",
            (Family::ScarfI, _) => "|alpha x| < pi/2",
            (_, Domain::Interval(..)) => "0 < alpha x < pi",
        }
        .to_string()
    };
    let entries: Vec<(Family, String, &str)> = Family::ALL
        .iter()
        .map(|&f| {
            let spec = example_spec(f);
            let levels = match spec.max_level() {
                MaxLevel::Unbounded => "unbounded",
                MaxLevel::Finite(_) => "finite",
            };
            (f, domain(&spec), levels)
        })
        .collect();
    match format {
        OutputFormat::Json => json_text(&Value::Array(
            entries
                .iter()
                .map(|(f, d, l)| {
                    json!({"family": f.name(), "parameters": f.parameter_names(), "domain": d, "levels": l})
                })
                .collect(),
        )),
        OutputFormat::Csv => csv_rows(
            &["family", "parameters", "domain", "levels"],
            &entries.iter().map(|(f, d, l)| vec![f.name().into(), f.parameter_names().join(" "), d.clone(), l.to_string()]).collect::<Vec<_>>(),
        ),
        OutputFormat::Table => {
            let mut rows = vec![vec!["family".to_string(), "parameters".into(), "domain".into(), "levels".into()]];
            for (f, d, l) in &entries {
                rows.push(vec![f.name().into(), f.parameter_names().join(","), d.clone(), l.to_string()]);
            }
            pad_table(&rows)
        }
    }
}

/// A valid member of each family, used only to describe domains.
fn example_spec(f: Family) -> PotentialSpec {
    let spec = match f {
        Family::HarmonicOscillator | Family::HalfLineOscillator => PotentialSpec::new(
            f,
            &[("omega".to_string(), 1.0)].into(),
            UnitSystem::default(),
        ),
        Family::SquareWell => PotentialSpec::square_well(1.0),
        Family::Eckart => PotentialSpec::eckart(1.0, 4.0, 1.0),
        Family::GenPoschlTeller => PotentialSpec::shape_invariant(f, 1.0, 3.0, 1.0),
        _ => PotentialSpec::shape_invariant(f, 3.0, 1.0, 1.0),
    };
    spec.expect("example parameters are valid")
}

#[derive(Debug, Clone, Default, PartialEq)]
struct Row {
    n: usize,
    e_qhj: Option<f64>,
    e_closed: Option<f64>,
    e_oracle: Option<f64>,
    e_wkb: Option<f64>,
    e_swkb: Option<f64>,
    j_residual: Option<f64>,
}

struct LevelTable {
    rows: Vec<Row>,
    notices: Vec<String>,
}

fn spectrum_table(spec: &PotentialSpec, d: &RunDescriptor) -> Result<LevelTable> {
    let methods = d.effective_methods();
    let has = |m: Method| methods.contains(&m);
    let mut rows = Vec::new();
    let mut notices = Vec::new();
    let oracle_config = OracleConfig::default();
    for n in 0..d.levels {
        if !spec.max_level().admits(n) {
            notices.push(format!(
                "no bound state n = {n}: {} has bound levels only up to n = {}",
                spec.family(),
                spec.max_level().clamp_count(usize::MAX) - 1
            ));
            continue;
        }
        let mut row = Row {
            n,
            ..Row::default()
        };
        if has(Method::Qhj) {
            let level = solve_level(spec, n, d.tol)?;
            row.e_qhj = Some(level.e_qhj);
            row.j_residual = Some(level.j_residual);
        }
        if has(Method::Closed) {
            row.e_closed = Some(spec.closed_form_energy(n)?);
        }
        if has(Method::Oracle) {
            row.e_oracle = Some(oracle_eigenvalue(spec, n, &oracle_config)?.energy);
        }
        if has(Method::Wkb) {
            row.e_wkb = Some(wkb_level(spec, n, d.tol)?);
        }
        if has(Method::Swkb) {
            let shift = spec.ground_state_shift().map_err(|_| {
                QhjError::Contract(format!(
                    "swkb needs a superpotential; {} has none",
                    spec.family()
                ))
            })?;
            row.e_swkb = Some(swkb_level(spec, n, d.tol)? + shift);
        }
        rows.push(row);
    }
    Ok(LevelTable { rows, notices })
}

const LEVEL_COLUMNS: [&str; 7] = [
    "n",
    "e_qhj",
    "e_closed",
    "e_oracle",
    "e_wkb",
    "e_swkb",
    "j_residual",
];

fn row_values(r: &Row) -> [Option<f64>; 6] {
    [
        r.e_qhj,
        r.e_closed,
        r.e_oracle,
        r.e_wkb,
        r.e_swkb,
        r.j_residual,
    ]
}

fn row_json(r: &Row) -> Value {
    let mut m = serde_json::Map::new();
    m.insert("n".into(), json!(r.n));
    for (k, v) in LEVEL_COLUMNS[1..].iter().zip(row_values(r)) {
        m.insert(k.to_string(), num(v));
    }
    Value::Object(m)
}

/// Extra per-level JSON fields and table columns (used by `verify`).
type Extra<'a> = Option<(&'a [&'a str], &'a dyn Fn(&Row) -> Vec<Value>)>;

fn render_levels(
    spec: &PotentialSpec,
    t: &LevelTable,
    format: OutputFormat,
    extra: Extra,
) -> String {
    match format {
        OutputFormat::Json => {
            let levels: Vec<Value> = t
                .rows
                .iter()
                .map(|r| {
                    let mut v = row_json(r);
                    if let Some((names, f)) = extra {
                        for (k, x) in names.iter().zip(f(r)) {
                            v[*k] = x;
                        }
                    }
                    v
                })
                .collect();
            json_text(&json!({"spec": spec, "levels": levels, "notices": t.notices}))
        }
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = t
                .rows
                .iter()
                .map(|r| {
                    std::iter::once(r.n.to_string())
                        .chain(row_values(r).iter().map(|v| csv_num(*v)))
                        .collect()
                })
                .collect();
            csv_rows(&LEVEL_COLUMNS, &rows)
        }
        OutputFormat::Table => {
            let mut head: Vec<String> = LEVEL_COLUMNS.iter().map(|s| s.to_string()).collect();
            if let Some((names, _)) = extra {
                head.extend(names.iter().map(|s| s.to_string()));
            }
            let mut rows = vec![head];
            for r in &t.rows {
                let mut line: Vec<String> = std::iter::once(r.n.to_string())
                    .chain(row_values(r).iter().map(|v| table_num(*v)))
                    .collect();
                if let Some((_, f)) = extra {
                    line.extend(f(r).iter().map(|v| match v {
                        Value::Number(x) => table_num(x.as_f64()),
                        Value::Null => "-".into(),
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    }));
                }
                rows.push(line);
            }
            let mut out = format!("# {}\n", spec_line(spec));
            out.push_str(&pad_table(&rows));
            for n in &t.notices {
                let _ = writeln!(out, "# {n}");
            }
            out
        }
    }
}

fn spec_line(spec: &PotentialSpec) -> String {
    let params: Vec<String> = spec
        .params()
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    let u = spec.units();
    format!(
        "{} {} hbar={} mass={}",
        spec.family(),
        params.join(" "),
        u.hbar,
        u.mass
    )
}

const QHJ_TOL: f64 = 1e-9;
const ORACLE_TOL: f64 = 1e-6;

fn rel_dev(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    Some((a? - b?).abs() / b?.abs().max(1.0))
}

fn verify(d: &RunDescriptor) -> Result<Report> {
    let spec = d.potential()?;
    let t = spectrum_table(&spec, d)?;
    let ok = |r: &Row| {
        let q = rel_dev(r.e_qhj, r.e_closed).is_none_or(|x| x <= QHJ_TOL);
        let o = rel_dev(r.e_oracle, r.e_closed.or(r.e_qhj)).is_none_or(|x| x <= ORACLE_TOL);
        q && o
    };
    let passed = t.rows.iter().all(ok);
    let extra = |r: &Row| {
        vec![
            num(rel_dev(r.e_qhj, r.e_closed)),
            num(rel_dev(r.e_oracle, r.e_closed.or(r.e_qhj))),
            json!(if ok(r) { "ok" } else { "FAIL" }),
        ]
    };
    let names = ["qhj_dev", "oracle_dev", "status"];
    let text = render_levels(&spec, &t, d.format, Some((&names, &extra)));
    Ok(Report { text, passed })
}

fn residues(d: &RunDescriptor) -> Result<String> {
    let spec = d.potential()?;
    let energy = match d.energy {
        Some(e) => e,
        None => spec.closed_form_energy(0)?,
    };
    let scale = report_scale(&spec);
    let mut records = Vec::new();
    for pole in fixed_poles(&spec) {
        let branch = laurent_branch(&pole, &spec, energy)?;
        let gamma = match pole.kind {
            PoleKind::Infinity => infinity_contribution(&spec, energy)?,
            _ => gamma_contribution(&pole, &spec, energy)?,
        } * scale;
        records.push((pole, branch, gamma));
    }
    let location = |p: &crate::residues::FixedPole| match p.kind {
        PoleKind::Infinity => json!("infinity"),
        _ => cnum(p.y),
    };
    Ok(match d.format {
        OutputFormat::Json => json_text(&Value::Array(
            records
                .iter()
                .map(|(p, b, g)| {
                    json!({
                        "location": location(p),
                        "kind": p.kind.to_string(),
                        "c2": cnum(p.c2),
                        "candidates": [cnum(b.candidates[0]), cnum(b.candidates[1])],
                        "selected": cnum(b.selected),
                        "gamma": cnum(*g),
                    })
                })
                .collect(),
        )),
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = records
                .iter()
                .map(|(p, b, g)| {
                    let c = |z: Complex64| vec![format!("{:.14e}", z.re), format!("{:.14e}", z.im)];
                    let mut r = vec![p.label(), p.kind.to_string()];
                    r.extend(c(b.selected));
                    r.extend(c(*g));
                    r
                })
                .collect();
            csv_rows(
                &[
                    "location",
                    "kind",
                    "selected_re",
                    "selected_im",
                    "gamma_re",
                    "gamma_im",
                ],
                &rows,
            )
        }
        OutputFormat::Table => {
            let mut rows = vec![vec![
                "location".to_string(),
                "kind".into(),
                "candidate_0".into(),
                "candidate_1".into(),
                "selected".into(),
                "scaled_gamma".into(),
            ]];
            for (p, b, g) in &records {
                rows.push(vec![
                    p.label(),
                    p.kind.to_string(),
                    table_complex(b.candidates[0]),
                    table_complex(b.candidates[1]),
                    table_complex(b.selected),
                    table_complex(*g),
                ]);
            }
            format!(
                "# {} E={energy} (gamma scaled by {scale})\n{}",
                spec_line(&spec),
                pad_table(&rows)
            )
        }
    })
}

fn wkb_compare(d: &RunDescriptor) -> Result<String> {
    let spec = d.potential()?;
    let shift = spec.ground_state_shift().ok();
    let hbar = spec.units().hbar;
    let mut notices = Vec::new();
    if shift.is_none() {
        notices.push(format!(
            "{} has no superpotential; SWKB columns are empty",
            spec.family()
        ));
    }
    let mut rows: Vec<[Option<f64>; 5]> = Vec::new();
    let mut ns = Vec::new();
    for n in 0..d.levels {
        if !spec.max_level().admits(n) {
            notices.push(format!("no bound state n = {n}"));
            continue;
        }
        let closed = spec.closed_form_energy(n)?;
        let qhj = solve_level(&spec, n, d.tol)?.e_qhj;
        let wkb = wkb_level(&spec, n, d.tol)?;
        let (swkb, defect) = match shift {
            Some(c) => {
                let e = swkb_level(&spec, n, d.tol)? + c;
                let integral = swkb_integral(&spec, closed - c)?.value;
                (
                    Some(e),
                    Some(integral - n as f64 * std::f64::consts::PI * hbar),
                )
            }
            None => (None, None),
        };
        ns.push(n);
        rows.push([Some(closed), Some(qhj), Some(wkb), swkb, defect]);
    }
    let cols = ["n", "e_closed", "e_qhj", "e_wkb", "e_swkb", "swkb_defect"];
    Ok(match d.format {
        OutputFormat::Json => {
            let levels: Vec<Value> = ns
                .iter()
                .zip(&rows)
                .map(|(n, r)| {
                    let mut m = serde_json::Map::new();
                    m.insert("n".into(), json!(n));
                    for (k, v) in cols[1..].iter().zip(r) {
                        m.insert(k.to_string(), num(*v));
                    }
                    Value::Object(m)
                })
                .collect();
            json_text(&json!({"spec": spec, "levels": levels, "notices": notices}))
        }
        OutputFormat::Csv => csv_rows(
            &cols,
            &ns.iter()
                .zip(&rows)
                .map(|(n, r)| {
                    std::iter::once(n.to_string())
                        .chain(r.iter().map(|v| csv_num(*v)))
                        .collect()
                })
                .collect::<Vec<_>>(),
        ),
        OutputFormat::Table => {
            let mut table = vec![cols.iter().map(|s| s.to_string()).collect::<Vec<_>>()];
            for (n, r) in ns.iter().zip(&rows) {
                table.push(
                    std::iter::once(n.to_string())
                        .chain(r.iter().map(|v| table_num(*v)))
                        .collect(),
                );
            }
            let mut out = format!("# {}\n{}", spec_line(&spec), pad_table(&table));
            for n in &notices {
                let _ = writeln!(out, "# {n}");
            }
            out
        }
    })
}

fn sweep_values(s: &SweepRange) -> Vec<f64> {
    if s.steps == 1 {
        return vec![s.from];
    }
    (0..s.steps)
        .map(|i| s.from + (s.to - s.from) * i as f64 / (s.steps - 1) as f64)
        .collect()
}

fn sweep(d: &RunDescriptor) -> Result<String> {
    let base = d.potential()?;
    let range = d.sweep.as_ref().expect("validated sweep");
    // validate every point before computing any
    let specs: Vec<(f64, PotentialSpec)> = sweep_values(range)
        .into_iter()
        .map(|v| base.with_param(&range.param, v).map(|s| (v, s)))
        .collect::<Result<_>>()?;
    let tables: Vec<LevelTable> = specs
        .iter()
        .map(|(_, s)| spectrum_table(s, d))
        .collect::<Result<_>>()?;
    Ok(match d.format {
        OutputFormat::Json => json_text(&Value::Array(
            specs
                .iter()
                .zip(&tables)
                .map(|((v, s), t)| {
                    json!({
                        "param": range.param,
                        "value": r15(*v),
                        "spec": s,
                        "levels": t.rows.iter().map(row_json).collect::<Vec<_>>(),
                        "notices": t.notices,
                    })
                })
                .collect(),
        )),
        OutputFormat::Csv => {
            let mut header = vec!["param", "value"];
            header.extend(LEVEL_COLUMNS);
            let mut rows = Vec::new();
            for ((v, _), t) in specs.iter().zip(&tables) {
                for r in &t.rows {
                    let mut line = vec![range.param.clone(), format!("{v:.14e}"), r.n.to_string()];
                    line.extend(row_values(r).iter().map(|x| csv_num(*x)));
                    rows.push(line);
                }
            }
            csv_rows(&header, &rows)
        }
        OutputFormat::Table => {
            let mut out = String::new();
            for ((_, s), t) in specs.iter().zip(&tables) {
                out.push_str(&render_levels(s, t, OutputFormat::Table, None));
                out.push('\n');
            }
            out
        }
    })
}

/// Exit status for an error: 1 for bad input, 2 for numerical failure.
pub fn exit_code(e: &QhjError) -> i32 {
    if e.is_validation() {
        1
    } else {
        2
    }
}

/// The `{code, message, context}` record written to stderr.
pub fn error_record(e: &QhjError, context: Value) -> String {
    serde_json::to_string(&json!({"code": e.code(), "message": e.to_string(), "context": context}))
        .expect("json value")
}

/// Parses `args` (including the program name), runs, and writes the report
/// to `out` (or the `--output` file) and errors to `err`. Returns the exit
/// status.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let rec = json!({"code": "usage", "message": e.to_string().trim_end(), "context": {}});
            let _ = writeln!(err, "{rec}");
            return 1;
        }
    };
    let descriptor = match cli.into_descriptor() {
        Ok(d) => d,
        Err(e) => {
            let _ = writeln!(err, "{}", error_record(&e, json!({})));
            return exit_code(&e);
        }
    };
    let context = json!({"command": descriptor.command, "spec": descriptor.spec});
    let report = match run(&descriptor) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "{}", error_record(&e, context));
            return exit_code(&e);
        }
    };
    let written = match &descriptor.output {
        Some(path) => std::fs::write(path, &report.text)
            .map_err(|e| QhjError::Io(format!("{}: {e}", path.display()))),
        None => out
            .write_all(report.text.as_bytes())
            .map_err(|e| QhjError::Io(e.to_string())),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "{}", error_record(&e, context));
        return exit_code(&e);
    }
    if report.passed {
        0
    } else {
        let e = QhjError::Oracle("verification tolerances exceeded".into());
        let _ = writeln!(err, "{}", error_record(&e, context));
        2
    }
}
