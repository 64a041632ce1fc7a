//! File-based command line around the library: compile circuits to ROM and
//! angle tables, run the dual simulation, verify the CNOT pattern, and
//! print timing budgets.
//!
//! Exit codes: 0 success, 1 failed checks, 2 unusable input,
//! 3 impossible forced branch, 4 infeasible timing budget.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mbqc::error::Error;
use mbqc::simulator::simulate_circuit;
use mbqc::timing::{
    analog_budget, delay_line_length, phase_legality, pin_count, ClockPlan, PhotonicParams,
    TimingBudget,
};
use mbqc::trace::{parse_outcome_matrix, Trace};
use mbqc::verifier::{
    check_correl_products_on, enumerate_branches_on, BranchMode, ClusterGraph,
};
use mbqc::{compile, Circuit, StateVector};

#[derive(Parser)]
#[command(name = "mbqc", version, about = "photonic MBQC compiler, simulator and timing tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a circuit file into program-word ROM and angle-table files.
    Compile(CompileArgs),
    /// Compile and run a circuit, write the trace, print the fidelity.
    Simulate(SimulateArgs),
    /// Check the two-row CNOT pattern against its stabilizer algebra.
    VerifyCnot(VerifyArgs),
    /// Print photonic timing budgets for a clock frequency.
    Timing(TimingArgs),
}

#[derive(Args)]
struct CompileArgs {
    /// Circuit file (qubits N, then one gate line per layer).
    circuit: PathBuf,
    /// Output path for the program-word ROM.
    #[arg(long, default_value = "rom.txt")]
    rom: PathBuf,
    /// Output path for the basis-angle table.
    #[arg(long, default_value = "angles.tsv")]
    angles: PathBuf,
    /// Append the final computational-basis readout round (z = 0 column).
    #[arg(long)]
    emit_final_z: bool,
}

#[derive(Args)]
struct SimulateArgs {
    /// Circuit file.
    circuit: PathBuf,
    /// RNG seed, recorded in the trace header.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Replace random measurement outcomes with a forced matrix
    /// (one line of bits per row).
    #[arg(long)]
    forced_outcomes: Option<PathBuf>,
    /// Write the trace to this file instead of stdout.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Branch coverage: "all" or "sample".
    #[arg(long, default_value = "sample")]
    branches: String,
    /// Number of branches in sample mode.
    #[arg(long, default_value_t = 256)]
    sample_size: usize,
    /// Seed for branch sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Debug: move the vertical link to this column (0-6) and expect
    /// failures.
    #[arg(long)]
    perturb_link: Option<usize>,
}

#[derive(Args)]
struct TimingArgs {
    /// Photonic clock frequency in Hz.
    #[arg(long)]
    freq: f64,
    /// Waveguide mode index.
    #[arg(long, default_value_t = mbqc::timing::DEFAULT_MODE_INDEX)]
    neff: f64,
    /// Logic time consumed inside the digital system, seconds.
    #[arg(long)]
    tlogic: Option<f64>,
    /// X_s and X_r phases in degrees.
    #[arg(long, num_args = 2, value_names = ["PHASE_S", "PHASE_R"])]
    phases: Option<Vec<f64>>,
    /// Input clock-to-out time, seconds.
    #[arg(long, default_value_t = 0.0)]
    tco: f64,
    /// Output setup time, seconds.
    #[arg(long, default_value_t = 0.0)]
    tsu: f64,
    /// Internal X_s-to-X_r processing time, seconds.
    #[arg(long, default_value_t = 0.0)]
    tinternal: f64,
    /// Logical rows for the pin-count report.
    #[arg(long)]
    rows: Option<usize>,
    /// Pin count with byproducts on a serial interface.
    #[arg(long)]
    serial: bool,
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::ImpossibleBranch { .. } => 3,
        Error::InfeasibleBudget { .. } => 4,
        Error::CircuitParse { .. }
        | Error::TraceParse { .. }
        | Error::RomParse { .. }
        | Error::TableParse { .. }
        | Error::OutcomeParse { .. }
        | Error::OutcomeShapeMismatch { .. }
        | Error::NonPositiveFrequency(_)
        | Error::BadModeIndex(_)
        | Error::BadClockPhases { .. }
        | Error::NegativeBudget
        | Error::NoRows
        | Error::Io { .. } => 2,
        _ => 1,
    }
}

fn read_file(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Error> {
    fs::write(path, contents).map_err(|e| Error::io(path.display().to_string(), e))
}

fn cmd_compile(args: &CompileArgs) -> Result<u8, Error> {
    let circuit = Circuit::parse(&read_file(&args.circuit)?)?;
    let mut image = compile(&circuit)?;
    if args.emit_final_z {
        image = image.with_readout_round();
    }
    write_file(&args.rom, &image.rom_text())?;
    write_file(&args.angles, &image.table_text())?;
    println!(
        "compiled {} rows x {} rounds -> {} and {}",
        image.n_rows,
        image.total_rounds,
        args.rom.display(),
        args.angles.display()
    );
    Ok(0)
}

fn cmd_simulate(args: &SimulateArgs) -> Result<u8, Error> {
    let circuit = Circuit::parse(&read_file(&args.circuit)?)?;
    let forced = match &args.forced_outcomes {
        Some(path) => Some(parse_outcome_matrix(&read_file(path)?)?),
        None => None,
    };
    let result = simulate_circuit(&circuit, args.seed, forced.as_deref())?;
    let trace = Trace {
        n_qubits: circuit.n_rows,
        seed: args.seed,
        rounds: result.run.trace.last().map(|r| r.round + 1).unwrap_or(0),
        records: result.run.trace.clone(),
    };
    let text = trace.write();
    match &args.trace {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    println!("fidelity={:.12}", result.fidelity);
    Ok(if result.fidelity >= 1.0 - 1e-9 { 0 } else { 1 })
}

fn cmd_verify_cnot(args: &VerifyArgs) -> Result<u8, Error> {
    let graph = match args.perturb_link {
        Some(column) => ClusterGraph::cnot_graph_with_link(column)?,
        None => ClusterGraph::cnot_graph(),
    };
    let correl = check_correl_products_on(&graph)?;
    println!("equation\tsymbolic\texpectation\tpass");
    for eq in &correl.equations {
        println!(
            "{}\t{}\t{:.12}\t{}",
            eq.label,
            if eq.symbolic_ok { "ok" } else { "mismatch" },
            eq.expectation,
            if eq.pass() { "pass" } else { "FAIL" }
        );
    }

    let mode = match args.branches.as_str() {
        "all" => BranchMode::All,
        "sample" => BranchMode::Sample {
            count: args.sample_size,
            seed: args.seed,
        },
        other => {
            return Err(Error::CircuitParse {
                line: 0,
                column: 0,
                msg: format!("--branches must be 'all' or 'sample', got '{other}'"),
            })
        }
    };
    let plus = StateVector::plus_state(2)?;
    let report = enumerate_branches_on(&graph, &plus, mode)?;
    let passed = report.branches.iter().filter(|b| b.pass).count();
    println!(
        "branches\t{}\tpassed\t{}\tskipped\t{}\tmin_fidelity\t{:.12}",
        report.branches.len(),
        passed,
        report.skipped_zero_probability,
        report.min_fidelity
    );
    Ok(u8::from(!(correl.all_pass() && report.all_pass)))
}

fn cmd_timing(args: &TimingArgs) -> Result<u8, Error> {
    let params = PhotonicParams::with_mode_index(args.neff)?;
    if args.freq <= 0.0 || args.freq.is_nan() {
        return Err(Error::NonPositiveFrequency(args.freq));
    }
    println!("quantity\tvalue");
    println!("period_s\t{:.6e}", args.freq.recip());
    println!(
        "delay_line_m\t{:.6e}",
        delay_line_length(args.freq, &params)?
    );
    if let Some(t_logic) = args.tlogic {
        println!("analog_budget_s\t{:.6e}", analog_budget(args.freq, t_logic)?);
    }
    if let Some(rows) = args.rows {
        println!("pin_count\t{}", pin_count(rows, args.serial)?);
    }
    if let Some(phases) = &args.phases {
        let plan = ClockPlan::new(args.freq, phases[0], phases[1])?;
        let budget = TimingBudget::new(args.tco, args.tsu, args.tinternal)?;
        println!("check\trequired_s\tavailable_s\tmargin_s\tpass");
        let mut all_pass = true;
        for c in phase_legality(&plan, &budget) {
            all_pass &= c.pass;
            println!(
                "{}\t{:.6e}\t{:.6e}\t{:.6e}\t{}",
                c.name,
                c.required,
                c.available,
                c.margin,
                if c.pass { "pass" } else { "FAIL" }
            );
        }
        return Ok(u8::from(!all_pass));
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compile(args) => cmd_compile(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::VerifyCnot(args) => cmd_verify_cnot(args),
        Command::Timing(args) => cmd_timing(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
