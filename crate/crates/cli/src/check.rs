//! Oracle sweeps and throughput measurement.

use std::hint::black_box;
use std::time::Instant;

use anyhow::{bail, Result};
use numacap::formulas::select_method;
use numacap::oracle::{oracle_vmcap, MAX_ORACLE_TOTAL, MAX_ORACLE_VERTICES};
use numacap::{place, vmcap, Graph, Method, TopologyId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::report::{BenchReport, Counterexample, SweepMode, Throughput, VerifyReport};

/// Largest exhaustive sweep `verify` runs.
pub const MAX_SWEEP_CASES: u64 = 50_000_000;

pub struct Sweep {
    pub topology: TopologyId,
    pub vnuma: TopologyId,
    pub max_cap: u64,
    pub samples: Option<u64>,
    pub seed: u64,
    /// Adds one to the formula on inputs with a positive first entry, so the
    /// sweep has something to find.
    pub inject_fault: bool,
}

struct Instance {
    topology: TopologyId,
    vnuma: TopologyId,
    host: Graph,
    guest: Graph,
    inject_fault: bool,
}

impl Instance {
    fn check(&self, b: &[u64]) -> Result<Option<Counterexample>> {
        let mut formula = vmcap(self.topology, self.vnuma, b)?.count;
        if self.inject_fault && b[0] > 0 {
            formula += 1;
        }
        let oracle = oracle_vmcap(&self.host, &self.guest, b)?.count;
        let placement = place(self.topology, self.vnuma, b)?;
        let problem = match placement.validate(&self.host, &self.guest, b) {
            Err(e) => Some(e),
            Ok(()) if placement.len() as u64 != oracle => {
                Some(format!("{} matches where {oracle} fit", placement.len()))
            }
            Ok(()) => None,
        };
        Ok((formula != oracle || problem.is_some()).then(|| Counterexample {
            caps: b.to_vec(),
            formula,
            oracle,
            placement: problem,
        }))
    }
}

fn decode(mut index: u64, len: usize, max: u64) -> Vec<u64> {
    let mut b = vec![0; len];
    for slot in b.iter_mut().rev() {
        *slot = index % (max + 1);
        index /= max + 1;
    }
    b
}

fn closed_form_method(topology: TopologyId, vnuma: TopologyId) -> Result<Method> {
    let n = topology.validate()?.vertex_count();
    let method = select_method(topology, vnuma, &vec![0u64; n])?;
    Ok(method)
}

pub fn verify(sweep: &Sweep) -> Result<VerifyReport> {
    let method = closed_form_method(sweep.topology, sweep.vnuma)?;
    if !method.is_closed_form() {
        bail!("no closed form for {}/{}, nothing to verify", sweep.topology, sweep.vnuma);
    }
    let n = sweep.topology.vertex_count();
    if n > MAX_ORACLE_VERTICES {
        bail!("the oracle handles at most {MAX_ORACLE_VERTICES} pNUMA nodes, {} has {n}", sweep.topology);
    }
    if sweep.max_cap.saturating_mul(n as u64) > MAX_ORACLE_TOTAL {
        bail!(
            "max-cap {} allows a total of {}, the oracle handles at most {MAX_ORACLE_TOTAL}",
            sweep.max_cap,
            sweep.max_cap.saturating_mul(n as u64)
        );
    }
    let instance = Instance {
        topology: sweep.topology,
        vnuma: sweep.vnuma,
        host: sweep.topology.expand()?,
        guest: sweep.vnuma.expand()?,
        inject_fault: sweep.inject_fault,
    };

    let (mode, cases, failures) = match sweep.samples {
        None => {
            let cases = (sweep.max_cap + 1)
                .checked_pow(n as u32)
                .filter(|&c| c <= MAX_SWEEP_CASES)
                .ok_or_else(|| anyhow::anyhow!("sweep larger than {MAX_SWEEP_CASES} cases, use --samples"))?;
            let failures = (0..cases)
                .into_par_iter()
                .map(|i| instance.check(&decode(i, n, sweep.max_cap)))
                .filter_map(Result::transpose)
                .collect::<Result<Vec<_>>>()?;
            (SweepMode::Exhaustive, cases, failures)
        }
        Some(samples) => {
            let mut rng = ChaCha8Rng::seed_from_u64(sweep.seed);
            let inputs: Vec<Vec<u64>> = (0..samples)
                .map(|_| (0..n).map(|_| rng.gen_range(0..=sweep.max_cap)).collect())
                .collect();
            let failures = inputs
                .par_iter()
                .map(|b| instance.check(b))
                .filter_map(Result::transpose)
                .collect::<Result<Vec<_>>>()?;
            (SweepMode::Sampled, samples, failures)
        }
    };
    Ok(VerifyReport {
        topology: sweep.topology,
        vnuma: sweep.vnuma,
        method,
        mode,
        max_cap: sweep.max_cap,
        seed: sweep.samples.map(|_| sweep.seed),
        cases,
        mismatches: failures.len() as u64,
        first_counterexample: failures.into_iter().next(),
    })
}

fn throughput(iterations: u64, start: Instant) -> Throughput {
    let seconds = start.elapsed().as_secs_f64();
    Throughput {
        iterations,
        seconds,
        per_second: if seconds > 0.0 { iterations as f64 / seconds } else { f64::INFINITY },
    }
}

pub fn bench(topology: TopologyId, vnuma: TopologyId, iterations: u64, oracle_iterations: u64, seed: u64) -> Result<BenchReport> {
    let method = closed_form_method(topology, vnuma)?;
    let n = topology.vertex_count();
    let cap = (MAX_ORACLE_TOTAL / n as u64).min(20);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs: Vec<Vec<u64>> = (0..1024)
        .map(|_| (0..n).map(|_| rng.gen_range(0..=cap)).collect())
        .collect();

    let start = Instant::now();
    let mut acc = 0u64;
    for i in 0..iterations {
        let b = black_box(&inputs[i as usize % inputs.len()]);
        acc = acc.wrapping_add(vmcap(topology, vnuma, b)?.count);
    }
    black_box(acc);
    let closed_form = throughput(iterations, start);

    let oracle = if n <= MAX_ORACLE_VERTICES {
        let host = topology.expand()?;
        let guest = vnuma.expand()?;
        let start = Instant::now();
        for i in 0..oracle_iterations {
            let b = black_box(&inputs[i as usize % inputs.len()]);
            acc = acc.wrapping_add(oracle_vmcap(&host, &guest, b)?.count);
        }
        black_box(acc);
        Some(throughput(oracle_iterations, start))
    } else {
        None
    };
    Ok(BenchReport {
        topology,
        vnuma,
        method,
        closed_form,
        oracle,
    })
}
