//! Command-line front end: build holonomic gates from laser configurations,
//! verify the holonomy conditions, export entangling-power sweeps, and run
//! inverse pulse design.
//!
//! Exit codes: 0 success/pass, 2 input error, 3 degenerate physics input,
//! 4 verification failure.

use holonomy_cli::json;

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use holonomy::{
    check_cyclicity, check_parallel_transport, classify_gate, design_for_entangling_power,
    design_for_weyl_c, design_perfect_entangler, effective_hamiltonian_closed_form, from_angular,
    holonomy_gate, holonomy_run_time, project_to_dfs, propagator_closed_form, propagator_oracle,
    sweep_entangling_power, table_row_pulses, to_angular, zeno_regime_check, AngularParams,
    ClassificationReport, Error as CoreError, HolonomicGate, Mat4, PulseSet, SweepGrid,
    TableRowParams, ZenoRegime, ZenoReport,
};

use holonomy::build_laser_hamiltonian;

const EXIT_INPUT: i32 = 2;
const EXIT_DEGENERATE: i32 = 3;
const EXIT_VERIFY: i32 = 4;

const PROJECTION_THRESHOLD: f64 = 1e-13;
const ORACLE_THRESHOLD: f64 = 1e-12;
const CYCLICITY_THRESHOLD: f64 = 1e-10;
const PARALLEL_TRANSPORT_THRESHOLD: f64 = 1e-10;
const UNITARITY_THRESHOLD: f64 = 1e-12;

const DEFAULT_MC_SAMPLES: usize = 10_000;

#[derive(Parser)]
#[command(name = "holonomy", version, about = "Holonomic two-qubit gate toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the holonomic gate and its classification.
    Gate(RunArgs),
    /// Classification-only output for the holonomic gate.
    Classify(RunArgs),
    /// Run the holonomy verification battery (projection identity,
    /// oracle equivalence, cyclicity, parallel transport, unitarity).
    Verify(RunArgs),
    /// Export the entangling-power surface over a (theta, varphi) grid.
    Sweep(SweepArgs),
    /// Inverse design: laser parameters for a target entangling power,
    /// Weyl point, perfect entangler, or drive-pattern table row.
    Design(DesignArgs),
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Structured JSON config file; inline flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Four complex Rabi frequencies as re,im,re,im,re,im,re,im
    /// (order: Omega0_1, Omega0_2, Omega1_1, Omega1_2).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pulses: Option<Vec<f64>>,
    /// Angular parameters omega,theta,varphi,phi1,phi2,phi3.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    angular: Option<Vec<f64>>,
    /// Output format (only json is meaningful for these commands).
    #[arg(long, default_value = "json")]
    format: OutputFormat,
    /// Monte-Carlo sample count for the entangling-power estimate.
    #[arg(long)]
    mc_samples: Option<usize>,
    /// Seed for the Monte-Carlo estimate.
    #[arg(long)]
    seed: Option<u64>,
    /// Output path (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Grid size as nTheta,nVarphi.
    #[arg(long, value_delimiter = ',', default_value = "101,101")]
    grid: Vec<usize>,
    /// Theta range as lo,hi (radians).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    theta_range: Option<Vec<f64>>,
    /// Varphi range as lo,hi (radians).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    varphi_range: Option<Vec<f64>>,
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DesignArgs {
    /// Target entangling power in [0, 2/9].
    #[arg(long, allow_hyphen_values = true)]
    target_ep: Option<f64>,
    /// Target Weyl parameter c in [0, pi/2]; the gate lands on (pi/2, c, c).
    #[arg(long, allow_hyphen_values = true)]
    target_c: Option<f64>,
    /// Design for the perfect-entangler point (pi/2, pi/4, pi/4).
    #[arg(long)]
    perfect_entangler: bool,
    /// Emit pulses matching the given drive-pattern table row (1-7).
    #[arg(long)]
    table_row: Option<u8>,
    /// Free theta for table rows 6-7 (radians).
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Free varphi for table rows 4, 5, 7 (radians).
    #[arg(long, allow_hyphen_values = true)]
    varphi: Option<f64>,
    /// Overall drive scale omega.
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    #[arg(long, default_value = "json")]
    format: OutputFormat,
    #[arg(long, default_value_t = DEFAULT_MC_SAMPLES)]
    mc_samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, clap::ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    pulses: Option<[[f64; 2]; 4]>,
    angular: Option<[f64; 6]>,
    zeno: Option<ZenoConfig>,
    mc_samples: Option<usize>,
    seed: Option<u64>,
}

#[derive(Deserialize, Clone, Copy)]
#[serde(deny_unknown_fields)]
struct ZenoConfig {
    g: f64,
    kappa: f64,
    threshold: Option<f64>,
}

/// Fully resolved run input after merging config file and flags.
struct ResolvedInput {
    pulses: PulseSet,
    params: AngularParams,
    zeno: Option<ZenoRegime>,
    mc_samples: usize,
    seed: u64,
}

#[derive(Serialize)]
struct InputEcho {
    pulses: PulseSet,
    angular: AngularParams,
}

#[derive(Serialize)]
struct GateSection {
    /// Row-major 4x4 matrix over |00>, |01>, |10>, |11>, entries as [re, im].
    matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize)]
struct CheckResult {
    value: f64,
    threshold: f64,
    pass: bool,
}

impl CheckResult {
    fn new(value: f64, threshold: f64) -> Self {
        Self {
            value,
            threshold,
            pass: value <= threshold,
        }
    }
}

#[derive(Serialize)]
struct VerificationSection {
    projection_identity: CheckResult,
    oracle_vs_closed_form: CheckResult,
    cyclicity: CheckResult,
    parallel_transport_max: CheckResult,
    gate_unitarity: CheckResult,
    status: &'static str,
}

#[derive(Serialize)]
struct ZenoSection {
    g: f64,
    kappa: f64,
    threshold: f64,
    ratio: f64,
    valid: bool,
}

#[derive(Serialize)]
struct DesignSection {
    target: String,
    angular: AngularParams,
    pulses: PulseSet,
}

#[derive(Serialize)]
struct ReportEnvelope {
    tool_version: &'static str,
    input: Option<InputEcho>,
    design: Option<DesignSection>,
    gate: Option<GateSection>,
    classification: Option<ClassificationReport>,
    verification: Option<VerificationSection>,
    zeno: Option<ZenoSection>,
}

impl ReportEnvelope {
    fn empty() -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION"),
            input: None,
            design: None,
            gate: None,
            classification: None,
            verification: None,
            zeno: None,
        }
    }
}

fn bail(code: i32, msg: impl std::fmt::Display) -> ! {
    eprintln!("error: {msg}");
    std::process::exit(code)
}

fn core_fail(e: CoreError) -> ! {
    let code = match e {
        CoreError::DegenerateDrive => EXIT_DEGENERATE,
        _ => EXIT_INPUT,
    };
    bail(code, e)
}

fn ok_or_fail<T>(r: Result<T, CoreError>) -> T {
    r.unwrap_or_else(|e| core_fail(e))
}

fn load_config(path: &PathBuf) -> FileConfig {
    let text = fs::read_to_string(path)
        .unwrap_or_else(|e| bail(EXIT_INPUT, format!("cannot read {}: {e}", path.display())));
    serde_json::from_str(&text)
        .unwrap_or_else(|e| bail(EXIT_INPUT, format!("bad config {}: {e}", path.display())))
}

fn expect_len<T>(flag: &str, values: &[T], n: usize) {
    if values.len() != n {
        bail(
            EXIT_INPUT,
            format!("{flag} needs {n} comma-separated values, got {}", values.len()),
        );
    }
}

fn resolve_input(args: &RunArgs) -> ResolvedInput {
    let file = args
        .config
        .as_ref()
        .map(load_config)
        .unwrap_or_default();

    let flag_pulses = args.pulses.as_ref().map(|v| {
        expect_len("--pulses", v, 8);
        let c = |i: usize| num_complex::Complex::new(v[2 * i], v[2 * i + 1]);
        ok_or_fail(PulseSet::new(c(0), c(1), c(2), c(3)))
    });
    let file_pulses = file.pulses.map(|p| {
        let c = |i: usize| num_complex::Complex::new(p[i][0], p[i][1]);
        ok_or_fail(PulseSet::new(c(0), c(1), c(2), c(3)))
    });
    let flag_angular = args.angular.as_ref().map(|v| {
        expect_len("--angular", v, 6);
        ok_or_fail(AngularParams::new(v[0], v[1], v[2], v[3], v[4], v[5]))
    });
    let file_angular = file
        .angular
        .map(|a| ok_or_fail(AngularParams::new(a[0], a[1], a[2], a[3], a[4], a[5])));

    // flags override the file; within each source, exactly one of the
    // two parametrizations must be given
    let (pulses, params) = match (flag_pulses, flag_angular, file_pulses, file_angular) {
        (Some(_), Some(_), _, _) => bail(EXIT_INPUT, "--pulses and --angular are mutually exclusive"),
        (Some(p), None, _, _) => (p, ok_or_fail(to_angular(&p))),
        (None, Some(a), _, _) => (ok_or_fail(from_angular(&a)), a),
        (None, None, Some(_), Some(_)) => {
            bail(EXIT_INPUT, "config must set exactly one of pulses/angular")
        }
        (None, None, Some(p), None) => (p, ok_or_fail(to_angular(&p))),
        (None, None, None, Some(a)) => (ok_or_fail(from_angular(&a)), a),
        (None, None, None, None) => {
            bail(EXIT_INPUT, "no input: give --pulses, --angular, or --config")
        }
    };

    let zeno = file.zeno.map(|z| {
        ok_or_fail(ZenoRegime::new(
            z.g,
            z.kappa,
            z.threshold.unwrap_or(ZenoRegime::DEFAULT_THRESHOLD),
        ))
    });

    ResolvedInput {
        pulses,
        params,
        zeno,
        mc_samples: args
            .mc_samples
            .or(file.mc_samples)
            .unwrap_or(DEFAULT_MC_SAMPLES),
        seed: args.seed.or(file.seed).unwrap_or(0),
    }
}

fn zeno_section(pulses: &PulseSet, regime: &ZenoRegime) -> ZenoSection {
    let ZenoReport { ratio, valid } = ok_or_fail(zeno_regime_check(pulses, regime));
    if !valid {
        eprintln!(
            "warning: drive amplitudes outside the Zeno regime \
             (ratio {ratio:.3e} >= threshold {})",
            regime.threshold
        );
    }
    ZenoSection {
        g: regime.g,
        kappa: regime.kappa,
        threshold: regime.threshold,
        ratio,
        valid,
    }
}

fn gate_section(gate: &HolonomicGate) -> GateSection {
    let m = gate.matrix();
    let matrix = (0..4)
        .map(|i| (0..4).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect();
    GateSection { matrix }
}

fn unitarity_deviation(m: &Mat4) -> f64 {
    (m.adjoint() * m - Mat4::identity()).norm()
}

fn write_output(out: &Option<PathBuf>, bytes: &[u8]) {
    match out {
        Some(path) => fs::write(path, bytes)
            .unwrap_or_else(|e| bail(EXIT_INPUT, format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .unwrap_or_else(|e| bail(EXIT_INPUT, format!("cannot write stdout: {e}"))),
    }
}

fn require_json(format: OutputFormat) {
    if format != OutputFormat::Json {
        bail(EXIT_INPUT, "this command only supports --format json");
    }
}

fn cmd_gate(args: &RunArgs, classification_only: bool) {
    require_json(args.format);
    let input = resolve_input(args);
    let gate = ok_or_fail(holonomy_gate(&input.params));
    let classification = ok_or_fail(classify_gate(&input.params, input.mc_samples, input.seed));
    let mut envelope = ReportEnvelope::empty();
    envelope.input = Some(InputEcho {
        pulses: input.pulses,
        angular: input.params,
    });
    if !classification_only {
        envelope.gate = Some(gate_section(&gate));
    }
    envelope.classification = Some(classification);
    envelope.zeno = input.zeno.map(|z| zeno_section(&input.pulses, &z));
    write_output(&args.out, &json::to_bytes(&envelope));
}

fn cmd_verify(args: &RunArgs) {
    require_json(args.format);
    let input = resolve_input(args);
    let params = input.params;

    let projected = project_to_dfs(&ok_or_fail(build_laser_hamiltonian(&input.pulses)));
    let closed = ok_or_fail(effective_hamiltonian_closed_form(&input.pulses));
    let projection_dev = (projected.matrix() - closed.matrix()).norm();

    let tau = ok_or_fail(holonomy_run_time(params.omega));
    let h = ok_or_fail(effective_hamiltonian_closed_form(&ok_or_fail(from_angular(&params))));
    let mut oracle_dev: f64 = 0.0;
    for i in 0..10 {
        let t = tau * (i as f64) / 9.0;
        let a = ok_or_fail(propagator_closed_form(&params, t));
        let b = ok_or_fail(propagator_oracle(&h, t));
        oracle_dev = oracle_dev.max((a.matrix() - b.matrix()).norm());
    }

    let cyclicity = ok_or_fail(check_cyclicity(&params));
    let transport = ok_or_fail(check_parallel_transport(&params, 100));
    let gate = ok_or_fail(holonomy_gate(&params));
    let unitarity = unitarity_deviation(gate.matrix());

    let checks = VerificationSection {
        projection_identity: CheckResult::new(projection_dev, PROJECTION_THRESHOLD),
        oracle_vs_closed_form: CheckResult::new(oracle_dev, ORACLE_THRESHOLD),
        cyclicity: CheckResult::new(cyclicity, CYCLICITY_THRESHOLD),
        parallel_transport_max: CheckResult::new(transport, PARALLEL_TRANSPORT_THRESHOLD),
        gate_unitarity: CheckResult::new(unitarity, UNITARITY_THRESHOLD),
        status: "pass",
    };
    let all_pass = checks.projection_identity.pass
        && checks.oracle_vs_closed_form.pass
        && checks.cyclicity.pass
        && checks.parallel_transport_max.pass
        && checks.gate_unitarity.pass;

    let mut envelope = ReportEnvelope::empty();
    envelope.input = Some(InputEcho {
        pulses: input.pulses,
        angular: params,
    });
    envelope.verification = Some(VerificationSection {
        status: if all_pass { "pass" } else { "fail" },
        ..checks
    });
    // Zeno violation is a warning: the holonomy algebra holds regardless
    envelope.zeno = input.zeno.map(|z| zeno_section(&input.pulses, &z));
    write_output(&args.out, &json::to_bytes(&envelope));
    if !all_pass {
        std::process::exit(EXIT_VERIFY);
    }
}

fn cmd_sweep(args: &SweepArgs) {
    expect_len("--grid", &args.grid, 2);
    if let Some(r) = &args.theta_range {
        expect_len("--theta-range", r, 2);
    }
    if let Some(r) = &args.varphi_range {
        expect_len("--varphi-range", r, 2);
    }
    let mut grid = SweepGrid {
        n_theta: args.grid[0],
        n_varphi: args.grid[1],
        ..SweepGrid::default()
    };
    if let Some(r) = &args.theta_range {
        grid.theta_range = (r[0], r[1]);
    }
    if let Some(r) = &args.varphi_range {
        grid.varphi_range = (r[0], r[1]);
    }
    let records = ok_or_fail(sweep_entangling_power(&grid));
    let bytes = match args.format {
        OutputFormat::Csv => {
            let mut out = String::from("theta,varphi,ep\n");
            for r in &records {
                out.push_str(&format!(
                    "{:.16e},{:.16e},{:.16e}\n",
                    r.theta, r.varphi, r.ep
                ));
            }
            out.into_bytes()
        }
        OutputFormat::Json => json::to_bytes(&records),
    };
    write_output(&args.out, &bytes);
}

fn cmd_design(args: &DesignArgs) {
    require_json(args.format);
    let selected = [
        args.target_ep.is_some(),
        args.target_c.is_some(),
        args.perfect_entangler,
        args.table_row.is_some(),
    ]
    .iter()
    .filter(|&&x| x)
    .count();
    if selected != 1 {
        bail(
            EXIT_INPUT,
            "give exactly one of --target-ep, --target-c, --perfect-entangler, --table-row",
        );
    }

    let (target, params) = if let Some(ep) = args.target_ep {
        (
            format!("entangling power {ep}"),
            ok_or_fail(design_for_entangling_power(ep, args.omega)),
        )
    } else if let Some(c) = args.target_c {
        (
            format!("Weyl point (pi/2, {c}, {c})"),
            ok_or_fail(design_for_weyl_c(c, args.omega)),
        )
    } else if args.perfect_entangler {
        (
            "perfect entangler (pi/2, pi/4, pi/4)".to_string(),
            ok_or_fail(design_perfect_entangler(args.omega)),
        )
    } else {
        let row = args.table_row.unwrap();
        let mut free = TableRowParams::scale_only(args.omega);
        if let Some(theta) = args.theta {
            free.theta = theta;
        }
        if let Some(varphi) = args.varphi {
            free.varphi = varphi;
        }
        let pulses = ok_or_fail(table_row_pulses(row, &free));
        (format!("table row {row}"), ok_or_fail(to_angular(&pulses)))
    };

    let pulses = ok_or_fail(from_angular(&params));
    let gate = ok_or_fail(holonomy_gate(&params));
    let classification = ok_or_fail(classify_gate(&params, args.mc_samples, args.seed));

    let mut envelope = ReportEnvelope::empty();
    envelope.design = Some(DesignSection {
        target,
        angular: params,
        pulses,
    });
    envelope.gate = Some(gate_section(&gate));
    envelope.classification = Some(classification);
    write_output(&args.out, &json::to_bytes(&envelope));
}

fn main() {
    let cli = Cli::parse();
    match &cli.command {
        Command::Gate(args) => cmd_gate(args, false),
        Command::Classify(args) => cmd_gate(args, true),
        Command::Verify(args) => cmd_verify(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Design(args) => cmd_design(args),
    }
}
