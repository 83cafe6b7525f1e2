mod output;

use clap::error::{ContextKind, ContextValue, ErrorKind};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dyson_minor::correlation::{correlation_density, gap_probability, CorrelationQuery};
use dyson_minor::eynard_mehta_oracle::{
    discretized_minor_kernel, Grid, OracleFamily, PathDescriptor,
};
use dyson_minor::minor_kernels::{bead_limit_sweep, compare_representations, representation_grid};
use dyson_minor::monte_carlo::{
    empirical_gap_probability, level_histogram, observation_rows, simulate, Process, SimConfig,
};
use dyson_minor::{
    BeadParam, Kernel, KernelEvalConfig, KernelFamily, Representation, SpaceTimePoint,
};
use output::{resolve_output, Cell, Table};
use serde::Serialize;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "dyson-minor",
    version,
    about = "Correlation kernels of the Dyson Brownian minor process and Warren's process"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Serialize)]
struct Common {
    /// Output file; relative paths go under $DYSONMINOR_OUTPUT_DIR when set. Defaults to stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Upper bound on worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Kernel values at pairs of points.
    Kernel(KernelArgs),
    /// Series against contour evaluation on the fixed 30-pair grid.
    CompareReps(CompareArgs),
    /// Correlation function det[K(p_i, p_j)] at a set of points.
    Corr(CorrArgs),
    /// Scaled DBM kernel against its bead limit for a list of N.
    BeadLimit(BeadLimitArgs),
    /// One-point density from the discrete L-ensemble of a space-like path.
    Oracle(OracleArgs),
    /// Simulated paths of the matrix process or Warren's process.
    Simulate(SimulateArgs),
    /// Probability of no particle in an interval at a fixed level.
    Gap(GapArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum FamilyArg {
    Dbm,
    Warren,
    Bead,
    Adbm,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum RepArg {
    Series,
    Contour,
    Residues,
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
struct PointArg {
    level: i64,
    time: f64,
    position: f64,
}

impl From<PointArg> for SpaceTimePoint {
    fn from(p: PointArg) -> Self {
        SpaceTimePoint::new(p.level, p.time, p.position)
    }
}

fn parse_point(s: &str) -> Result<PointArg, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected level,time,position but got `{s}`"));
    }
    let level = parts[0].parse::<i64>().map_err(|e| format!("level: {e}"))?;
    let time = parts[1].parse::<f64>().map_err(|e| format!("time: {e}"))?;
    let position = parts[2]
        .parse::<f64>()
        .map_err(|e| format!("position: {e}"))?;
    Ok(PointArg {
        level,
        time,
        position,
    })
}

fn parse_node(s: &str) -> Result<(i64, f64), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(format!("expected level,time but got `{s}`"));
    }
    let level = parts[0].parse::<i64>().map_err(|e| format!("level: {e}"))?;
    let time = parts[1].parse::<f64>().map_err(|e| format!("time: {e}"))?;
    Ok((level, time))
}

fn parse_f64_pair(s: &str) -> Result<(f64, f64), String> {
    let v = parse_f64_list(s)?;
    if v.len() != 2 {
        return Err(format!(
            "expected two comma-separated numbers but got `{s}`"
        ));
    }
    Ok((v[0], v[1]))
}

fn parse_i64_pair(s: &str) -> Result<(i64, i64), String> {
    let v: Vec<i64> = s
        .split(',')
        .map(|p| p.trim().parse::<i64>().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    if v.len() != 2 {
        return Err(format!(
            "expected two comma-separated integers but got `{s}`"
        ));
    }
    Ok((v[0], v[1]))
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect()
}

#[derive(Args, Debug, Serialize)]
struct KernelArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Bulk position of the bead kernel.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    a: f64,
    /// First point as level,time,position; repeat for several rows.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true, required = true)]
    point: Vec<PointArg>,
    /// Second point; one value is paired with every --point.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true, required = true)]
    point2: Vec<PointArg>,
    #[arg(long, value_enum, default_value_t = RepArg::Series)]
    representation: RepArg,
}

#[derive(Args, Debug, Serialize)]
struct CompareArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Pair grid; only `default` is available.
    #[arg(long, default_value = "default")]
    grid: String,
    /// Replace the times of every pair by t,t'.
    #[arg(long, value_parser = parse_f64_pair, allow_hyphen_values = true)]
    times: Option<(f64, f64)>,
}

#[derive(Args, Debug, Serialize)]
struct CorrArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    a: f64,
    /// Query point as level,time,position; repeat for each point.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true, required = true)]
    point: Vec<PointArg>,
    #[arg(long, value_enum, default_value_t = RepArg::Series)]
    representation: RepArg,
}

#[derive(Args, Debug, Serialize)]
struct BeadLimitArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: f64,
    /// Relative levels n,n'.
    #[arg(long, value_parser = parse_i64_pair, allow_hyphen_values = true, default_value = "0,0")]
    levels: (i64, i64),
    /// t' − t.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    dt: f64,
    /// x − x'; the points sit at ±dx/2.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    dx: f64,
    #[arg(long = "N", value_delimiter = ',', default_value = "50,100,200,400")]
    n_values: Vec<u64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum OracleFamilyArg {
    Ou,
    Warren,
}

#[derive(Args, Debug, Serialize)]
struct OracleArgs {
    #[arg(long, value_enum, default_value_t = OracleFamilyArg::Ou)]
    family: OracleFamilyArg,
    /// Path node as level,time; repeat in path order, ending at level 1.
    #[arg(long, value_parser = parse_node, required = true)]
    node: Vec<(i64, f64)>,
    #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
    grid_min: f64,
    #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
    grid_max: f64,
    #[arg(long, default_value_t = 200)]
    grid_points: usize,
    /// Virtual-particle position.
    #[arg(long, default_value_t = -8.0, allow_hyphen_values = true)]
    u: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ProcessArg {
    Dbm,
    Warren,
}

#[derive(Args, Debug, Serialize)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    process: ProcessArg,
    /// Matrix size, or number of levels for Warren's process.
    #[arg(long, default_value_t = 2)]
    size: usize,
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    times: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    paths: usize,
    #[arg(long, default_value_t = dyson_minor::monte_carlo::DEFAULT_EULER_STEP)]
    euler_step: f64,
    /// Emit a histogram of this level instead of raw observations.
    #[arg(long)]
    histogram_level: Option<usize>,
    /// Observation time of the histogram.
    #[arg(long)]
    histogram_time: Option<f64>,
    /// Histogram bin edges.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    edges: Option<Vec<f64>>,
}

#[derive(Args, Debug, Serialize)]
struct GapArgs {
    #[arg(long)]
    level: i64,
    #[arg(long, default_value_t = 0.0)]
    time: f64,
    /// Lower end; `-inf` is allowed.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(serialize_with = "extended_real")]
    lower: f64,
    /// Upper end; `inf` is allowed.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(serialize_with = "extended_real")]
    upper: f64,
    #[arg(long, default_value_t = 64)]
    nodes: usize,
    /// Also estimate the probability from this many GUE draws.
    #[arg(long)]
    mc_paths: Option<usize>,
}

fn extended_real<S: serde::Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str(&output::format_float(*v))
    }
}

#[derive(Debug)]
struct Failure {
    kind: &'static str,
    parameter: Option<String>,
    message: String,
    code: u8,
}

impl Failure {
    fn validation(parameter: &str, message: impl Into<String>) -> Self {
        Failure {
            kind: "validation",
            parameter: Some(parameter.to_string()),
            message: message.into(),
            code: 2,
        }
    }

    fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        Failure {
            kind: "io",
            parameter: Some("output".into()),
            message: format!("{}: {e}", path.display()),
            code: 5,
        }
    }

    fn report(&self) {
        let record = json!({
            "error": self.kind,
            "parameter": self.parameter,
            "message": self.message,
            "exit_code": self.code,
        });
        eprintln!("{record}");
    }
}

impl From<dyson_minor::Error> for Failure {
    fn from(e: dyson_minor::Error) -> Self {
        use dyson_minor::Error as E;
        let message = e.to_string();
        let (kind, parameter, code) = match &e {
            E::Domain { parameter, .. } => ("validation", Some(parameter.clone()), 2),
            E::DegreeOverflow { .. } => ("validation", Some("degree".to_string()), 2),
            E::Configuration(_) => ("validation", None, 2),
            E::Convergence { .. } | E::Truncation { .. } | E::Numerical(_) => {
                ("convergence", None, 3)
            }
            E::Conditioning { .. } => ("conditioning", None, 4),
        };
        Failure {
            kind,
            parameter,
            message,
            code,
        }
    }
}

type Outcome = Result<Table, Failure>;

fn kernel_family(f: FamilyArg, a: f64) -> Result<KernelFamily, Failure> {
    Ok(match f {
        FamilyArg::Dbm => KernelFamily::Dbm,
        FamilyArg::Warren => KernelFamily::Warren,
        FamilyArg::Bead => KernelFamily::Bead(BeadParam::new(a)?),
        FamilyArg::Adbm => KernelFamily::Adbm,
    })
}

fn representation(r: RepArg) -> Representation {
    match r {
        RepArg::Series => Representation::series(),
        RepArg::Contour => Representation::contour(),
        RepArg::Residues => Representation::Residues,
    }
}

fn finite(name: &str, v: f64) -> Result<(), Failure> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Failure::validation(
            name,
            format!("must be finite, got {v}"),
        ))
    }
}

fn run_kernel(args: &KernelArgs) -> Outcome {
    let family = kernel_family(args.family, args.a)?;
    let kernel = Kernel::new(
        family,
        KernelEvalConfig::with_representation(representation(args.representation)),
    );
    let pairs: Vec<(PointArg, PointArg)> = if args.point2.len() == 1 {
        args.point.iter().map(|&p| (p, args.point2[0])).collect()
    } else if args.point2.len() == args.point.len() {
        args.point
            .iter()
            .copied()
            .zip(args.point2.iter().copied())
            .collect()
    } else {
        return Err(Failure::validation(
            "point2",
            "give one --point2 or one per --point",
        ));
    };
    let mut t = Table::new(vec!["n", "t", "x", "n2", "t2", "x2", "value"]);
    for (p, q) in pairs {
        let v = kernel.eval(&p.into(), &q.into())?;
        t.push(vec![
            p.level.into(),
            p.time.into(),
            p.position.into(),
            q.level.into(),
            q.time.into(),
            q.position.into(),
            v.into(),
        ]);
    }
    Ok(t)
}

fn run_compare(args: &CompareArgs) -> Outcome {
    let family = match args.family {
        FamilyArg::Dbm => KernelFamily::Dbm,
        FamilyArg::Warren => KernelFamily::Warren,
        _ => {
            return Err(Failure::validation(
                "family",
                "representations are compared for dbm and warren",
            ))
        }
    };
    if args.grid != "default" {
        return Err(Failure::validation(
            "grid",
            format!("unknown grid `{}`", args.grid),
        ));
    }
    let mut pairs = representation_grid();
    if let Some((t, t2)) = args.times {
        let min_ok = |v: f64| match family {
            KernelFamily::Warren => v > 0.0,
            _ => v >= 0.0,
        };
        if !t.is_finite() || !t2.is_finite() || !min_ok(t) || !min_ok(t2) {
            let need = if family == KernelFamily::Warren {
                "positive"
            } else {
                "nonnegative"
            };
            return Err(Failure::validation(
                "times",
                format!("times must be finite and {need}, got {t},{t2}"),
            ));
        }
        if t > t2 && pairs.iter().any(|(p, q)| p.level > q.level) {
            return Err(Failure::validation(
                "times",
                "t must not exceed t' when the first level is higher",
            ));
        }
        for (p, q) in pairs.iter_mut() {
            p.time = t;
            q.time = t2;
        }
    }
    let rows = compare_representations(family, &pairs)?;
    let mut t = Table::new(vec![
        "n",
        "t",
        "x",
        "n2",
        "t2",
        "x2",
        "series",
        "contour",
        "relative_difference",
    ]);
    let mut worst = 0.0f64;
    for r in &rows {
        worst = worst.max(r.relative_difference);
        t.push(vec![
            r.p.level.into(),
            r.p.time.into(),
            r.p.position.into(),
            r.p2.level.into(),
            r.p2.time.into(),
            r.p2.position.into(),
            r.series.into(),
            r.contour.into(),
            r.relative_difference.into(),
        ]);
    }
    t.meta("max_relative_difference", json!(worst));
    Ok(t)
}

fn run_corr(args: &CorrArgs) -> Outcome {
    let family = kernel_family(args.family, args.a)?;
    let kernel = Kernel::new(
        family,
        KernelEvalConfig::with_representation(representation(args.representation)),
    );
    let points: Vec<SpaceTimePoint> = args.point.iter().map(|&p| p.into()).collect();
    let d = correlation_density(&CorrelationQuery::new(kernel, points)?)?;
    let mut t = Table::new(vec!["order", "value", "raw", "clamped"]);
    t.push(vec![
        args.point.len().into(),
        d.value.into(),
        d.raw.into(),
        Cell::Int(d.clamped as i64),
    ]);
    Ok(t)
}

fn run_bead_limit(args: &BeadLimitArgs) -> Outcome {
    finite("dt", args.dt)?;
    finite("dx", args.dx)?;
    let a = BeadParam::new(args.a)?;
    let rows = bead_limit_sweep(
        a,
        args.levels,
        (0.0, args.dt),
        (0.5 * args.dx, -0.5 * args.dx),
        &args.n_values,
    )?;
    let (lo, hi) = a.saddle_points();
    let mut t = Table::new(vec!["N", "scaled", "limit", "error"]);
    for r in &rows {
        t.push(vec![
            r.big_n.into(),
            r.scaled.into(),
            r.limit.into(),
            r.error.into(),
        ]);
    }
    let decreasing = rows.windows(2).all(|w| w[1].error < w[0].error);
    t.meta("u_plus", json!([hi.re, hi.im]));
    t.meta("u_minus", json!([lo.re, lo.im]));
    t.meta("errors_strictly_decreasing", json!(decreasing));
    Ok(t)
}

fn run_oracle(args: &OracleArgs) -> Outcome {
    let path = PathDescriptor::new(&args.node)?;
    let grid = Grid::uniform(args.grid_min, args.grid_max, args.grid_points)?;
    let (family, kfam) = match args.family {
        OracleFamilyArg::Ou => (OracleFamily::OU, KernelFamily::Dbm),
        OracleFamilyArg::Warren => (OracleFamily::Warren, KernelFamily::Warren),
    };
    let k = discretized_minor_kernel(&path, &grid, args.u, family)?;
    let analytic = Kernel::new(kfam, KernelEvalConfig::default());
    let mut t = Table::new(vec![
        "node",
        "level",
        "time",
        "position",
        "rho1",
        "analytic",
        "deviation",
    ]);
    let mut worst = 0.0f64;
    for m in 0..path.len() {
        let (level, time) = (path.levels()[m], path.times()[m]);
        for (i, r) in k.rho1(m).into_iter().enumerate() {
            let x = grid.points()[i];
            let p = SpaceTimePoint::new(level, time, x);
            let a = analytic.eval(&p, &p)?;
            worst = worst.max((r - a).abs());
            t.push(vec![
                m.into(),
                level.into(),
                time.into(),
                x.into(),
                r.into(),
                a.into(),
                (r - a).abs().into(),
            ]);
        }
    }
    t.meta(
        "diagnostics",
        serde_json::to_value(k.diagnostics()).expect("diagnostics serialize"),
    );
    t.meta("max_deviation", json!(worst));
    Ok(t)
}

fn run_simulate(args: &SimulateArgs, seed: u64) -> Outcome {
    let process = match args.process {
        ProcessArg::Dbm => Process::Dbm,
        ProcessArg::Warren => Process::Warren,
    };
    let mut cfg = SimConfig::new(args.size, args.times.clone(), args.paths, seed);
    cfg.euler_step = args.euler_step;
    match (args.histogram_level, args.histogram_time, &args.edges) {
        (None, None, None) => {
            let paths = simulate(process, &cfg)?;
            let mut t = Table::new(vec!["path_id", "level", "time", "particle", "position"]);
            for r in observation_rows(&paths) {
                t.push(vec![
                    r.path_id.into(),
                    r.level.into(),
                    r.time.into(),
                    r.particle.into(),
                    r.position.into(),
                ]);
            }
            Ok(t)
        }
        (Some(level), Some(time), Some(edges)) => {
            let h = level_histogram(process, &cfg, level, time, edges)?;
            let mut t = Table::new(vec![
                "bin_lower",
                "bin_upper",
                "count",
                "density",
                "standard_error",
            ]);
            let (d, se) = (h.density(), h.standard_error());
            for i in 0..h.counts.len() {
                t.push(vec![
                    h.edges[i].into(),
                    h.edges[i + 1].into(),
                    h.counts[i].into(),
                    d[i].into(),
                    se[i].into(),
                ]);
            }
            Ok(t)
        }
        _ => Err(Failure::validation(
            "histogram_level",
            "a histogram needs --histogram-level, --histogram-time and --edges together",
        )),
    }
}

fn run_gap(args: &GapArgs, seed: u64) -> Outcome {
    let p = gap_probability(args.level, args.time, (args.lower, args.upper), args.nodes)?;
    let mc = match args.mc_paths {
        Some(paths) => {
            let n = usize::try_from(args.level)
                .map_err(|_| Failure::validation("level", "level must be positive"))?;
            Some(empirical_gap_probability(
                n,
                (args.lower, args.upper),
                paths,
                seed,
            )?)
        }
        None => None,
    };
    let mut cols = vec!["level", "time", "lower", "upper", "nodes", "probability"];
    let mut row: Vec<Cell> = vec![
        args.level.into(),
        args.time.into(),
        args.lower.into(),
        args.upper.into(),
        args.nodes.into(),
        p.into(),
    ];
    if let Some(e) = mc {
        cols.extend(["mc_estimate", "mc_standard_error"]);
        row.extend([e.estimate.into(), e.standard_error.into()]);
    }
    let mut t = Table::new(cols);
    t.push(row);
    Ok(t)
}

fn execute(cli: &Cli) -> Result<(), Failure> {
    if let Some(n) = cli.common.threads {
        if n == 0 {
            return Err(Failure::validation("threads", "need at least one thread"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::validation("threads", e.to_string()))?;
    }
    let stochastic = matches!(
        cli.command,
        Command::Simulate(_)
            | Command::Gap(GapArgs {
                mc_paths: Some(_),
                ..
            })
    );
    let seed = cli.common.seed.unwrap_or(0);
    let (name, config, table) = match &cli.command {
        Command::Kernel(a) => ("kernel", json!(a), run_kernel(a)?),
        Command::CompareReps(a) => ("compare-reps", json!(a), run_compare(a)?),
        Command::Corr(a) => ("corr", json!(a), run_corr(a)?),
        Command::BeadLimit(a) => ("bead-limit", json!(a), run_bead_limit(a)?),
        Command::Oracle(a) => ("oracle", json!(a), run_oracle(a)?),
        Command::Simulate(a) => ("simulate", json!(a), run_simulate(a, seed)?),
        Command::Gap(a) => ("gap", json!(a), run_gap(a, seed)?),
    };
    let mut table = table;
    let extra = std::mem::take(&mut table.metadata);
    table.meta("version", json!(env!("CARGO_PKG_VERSION")));
    table.meta("command", json!(name));
    table.meta("seed", if stochastic { json!(seed) } else { json!(null) });
    table.meta("config", config);
    table.metadata.extend(extra);

    let bytes = match cli.common.format {
        Format::Csv => table.to_csv().map_err(|e| Failure {
            kind: "io",
            parameter: None,
            message: e.to_string(),
            code: 5,
        })?,
        Format::Json => table.to_json(),
    };
    match &cli.common.output {
        Some(path) => {
            let path = resolve_output(path);
            std::fs::write(&path, bytes).map_err(|e| Failure::io(&path, e))?;
        }
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes)
                .and_then(|_| out.flush())
                .map_err(|e| Failure::io(std::path::Path::new("<stdout>"), e))?;
        }
    }
    Ok(())
}

fn clap_failure(e: &clap::Error) -> Failure {
    let parameter = match e.get(ContextKind::InvalidArg) {
        Some(ContextValue::String(s)) => Some(s.clone()),
        Some(ContextValue::Strings(v)) => Some(v.join(" ")),
        _ => None,
    };
    let message = e.render().to_string();
    let message = message
        .lines()
        .next()
        .unwrap_or_default()
        .trim_start_matches("error: ")
        .to_string();
    Failure {
        kind: "validation",
        parameter,
        message,
        code: 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            if matches!(
                e.kind(),
                ErrorKind::DisplayHelp
                    | ErrorKind::DisplayVersion
                    | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            ) {
                let _ = e.print();
                return if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                    ExitCode::from(2)
                } else {
                    ExitCode::SUCCESS
                };
            }
            let f = clap_failure(&e);
            f.report();
            return ExitCode::from(f.code);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            f.report();
            ExitCode::from(f.code)
        }
    }
}
