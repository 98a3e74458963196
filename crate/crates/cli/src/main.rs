//! `numacap`: VM capacity of multi-NUMA servers.
//!
//! Capacity lists are given in pNUMA label order `1..n`; every formula
//! depends on the labeling, see the README for each topology's labels.

mod check;
mod inputs;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use numacap::capacity::cluster_capacity;
use numacap::{place, vmcap, CapacityVector, Method, TopologyId};

use crate::inputs::{FlavorFile, StateFile};
use crate::report::{ClusterReport, EvalOutput, PlaceOutput, ServerRow};

#[derive(Parser)]
#[command(name = "numacap", version, about = "VM capacity of multi-NUMA servers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// How many VMs fit, given per-node capacities
    Eval(InstanceArgs),
    /// A concrete placement reaching the capacity
    Place(InstanceArgs),
    /// Capacity per server and in total for one flavor
    Cluster(ClusterArgs),
    /// Compare the closed form with the exact solver
    Verify(VerifyArgs),
    /// Evaluations per second
    Bench(BenchArgs),
}

#[derive(Args)]
struct InstanceArgs {
    /// pNUMA topology (k2, k3, c4, k4, l4, cq3, q33, k<n>, k<m>_<n>, star<n>)
    #[arg(long)]
    topology: TopologyId,
    /// vNUMA topology
    #[arg(long)]
    vnuma: TopologyId,
    /// Per-node capacities in label order, comma separated
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    caps: Vec<u64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ClusterArgs {
    #[arg(long)]
    state: PathBuf,
    #[arg(long)]
    flavors: PathBuf,
    /// Flavor id
    #[arg(long)]
    flavor: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    topology: TopologyId,
    #[arg(long)]
    vnuma: TopologyId,
    /// Largest capacity tried per node; the default is 20 when sampling
    #[arg(long, required_unless_present = "samples")]
    max_cap: Option<u64>,
    /// Random capacity vectors instead of the full sweep
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    topology: TopologyId,
    #[arg(long)]
    vnuma: TopologyId,
    #[arg(long, default_value_t = 1_000_000)]
    iters: u64,
    /// Oracle evaluations; defaults to the smaller of --iters and 1000
    #[arg(long)]
    oracle_iters: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string(value)?);
    Ok(())
}

fn caps(args: &InstanceArgs) -> Result<CapacityVector> {
    Ok(CapacityVector::new(args.caps.clone())?)
}

fn eval(args: InstanceArgs) -> Result<ExitCode> {
    let result = vmcap(args.topology, args.vnuma, &caps(&args)?)?;
    if result.method == Method::Oracle {
        eprintln!(
            "note: no closed form for {}/{}, solved by exhaustive search",
            args.topology, args.vnuma
        );
    }
    if args.json {
        print_json(&EvalOutput { count: result.count })?;
    } else {
        println!("{}", result.count);
    }
    Ok(ExitCode::SUCCESS)
}

fn place_cmd(args: InstanceArgs) -> Result<ExitCode> {
    let matches = place(args.topology, args.vnuma, &caps(&args)?)?;
    print_json(&PlaceOutput {
        count: matches.len() as u64,
        matches,
    })?;
    Ok(ExitCode::SUCCESS)
}

fn cluster(args: ClusterArgs) -> Result<ExitCode> {
    let state: StateFile = inputs::load(&args.state)?;
    let flavors: FlavorFile = inputs::load(&args.flavors)?;
    let flavor = flavors.find(&args.flavor)?;
    let result = cluster_capacity(&state.servers, flavor);
    let report = ClusterReport {
        flavor: flavor.id.clone(),
        servers: result
            .servers
            .iter()
            .map(|s| ServerRow {
                id: s.id.clone(),
                capacity: s.capacity.as_ref().ok().copied(),
                error: s.capacity.as_ref().err().map(ToString::to_string),
            })
            .collect(),
        total: result.total,
    };
    if args.json {
        print_json(&report)?;
    } else {
        print!("{}", report.render());
    }
    let failed = result.failures().count();
    if failed > 0 {
        eprintln!("error: {failed} server(s) could not be evaluated and are left out of the total");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(args: VerifyArgs) -> Result<ExitCode> {
    let report = check::verify(&check::Sweep {
        topology: args.topology,
        vnuma: args.vnuma,
        max_cap: args.max_cap.unwrap_or(20),
        samples: args.samples,
        seed: args.seed,
        inject_fault: args.inject_fault,
    })?;
    if args.json {
        print_json(&report)?;
    } else {
        print!("{}", report.render());
    }
    Ok(if report.mismatches == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn bench(args: BenchArgs) -> Result<ExitCode> {
    let oracle_iters = args.oracle_iters.unwrap_or(args.iters.min(1_000));
    let report = check::bench(args.topology, args.vnuma, args.iters, oracle_iters, args.seed)?;
    if args.json {
        print_json(&report)?;
    } else {
        print!("{}", report.render());
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Eval(a) => eval(a),
        Command::Place(a) => place_cmd(a),
        Command::Cluster(a) => cluster(a),
        Command::Verify(a) => verify(a),
        Command::Bench(a) => bench(a),
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(2)
    })
}
