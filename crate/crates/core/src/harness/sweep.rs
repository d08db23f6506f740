use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{generate, GeneratorSpec};
use crate::error::{Error, Result};
use crate::minor::{find_minor_pipeline_with, MinorPipelineOptions, WitnessSource};
use crate::subdivision::{
    find_subdivision_pipeline_with, SubdivisionMode, SubdivisionPipelineOptions, SubdivisionSource,
};
use crate::verify::{verify_minor_model, verify_subdivision};

/// Which pipeline a sweep runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    Minor,
    Subdivision,
    MinorOrSubdivision,
}

impl std::str::FromStr for SweepMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "minor" => Ok(SweepMode::Minor),
            "subdivision" => Ok(SweepMode::Subdivision),
            "minor_or_subdivision" => Ok(SweepMode::MinorOrSubdivision),
            _ => Err(Error::InvalidParameter(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// A minor built by the construction.
    Minor,
    /// A subdivision built by the construction (or a trivial one).
    Subdivision,
    /// The extracted graph was tiny and went to exhaustive search; a witness
    /// may or may not have been found.
    Handoff,
    /// The construction gave up or the input failed a precondition.
    Stalled,
}

/// One row of a sweep. CSV columns, in order: family, n, param, blob_count,
/// seed, t, epsilon, delta, eta, sigma, k, f_m, outcome, witness_size,
/// log_n, ratio, runtime_ms, verifier_valid, detail.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub family: String,
    pub n: usize,
    pub param: f64,
    pub blob_count: usize,
    pub seed: u64,
    pub t: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub eta: f64,
    pub sigma: f64,
    /// Scales of the extracted graph; 0 when no construction ran.
    pub k: usize,
    pub f_m: f64,
    pub outcome: Outcome,
    pub witness_size: usize,
    pub log_n: f64,
    pub ratio: f64,
    pub runtime_ms: u64,
    pub verifier_valid: bool,
    pub detail: String,
}

impl ExperimentRecord {
    /// Whether the record carries a verified witness.
    pub fn has_witness(&self) -> bool {
        self.witness_size > 0 && self.verifier_valid
    }
}

/// Runs one pipeline per spec on a thread pool. Records come back in spec
/// order; a failing spec yields a `stalled` record and the sweep goes on.
pub fn run_experiment_sweep(
    specs: &[GeneratorSpec],
    t: usize,
    epsilon: f64,
    mode: SweepMode,
) -> Vec<ExperimentRecord> {
    specs
        .par_iter()
        .map(|s| run_one(s, t, epsilon, mode))
        .collect()
}

pub fn run_one(spec: &GeneratorSpec, t: usize, epsilon: f64, mode: SweepMode) -> ExperimentRecord {
    let start = Instant::now();
    let mut rec = ExperimentRecord {
        family: spec.family.to_string(),
        n: spec.n,
        param: spec.param,
        blob_count: spec.blob_count,
        seed: spec.seed,
        t,
        epsilon,
        delta: 0.0,
        eta: 0.0,
        sigma: 0.0,
        k: 0,
        f_m: 0.0,
        outcome: Outcome::Stalled,
        witness_size: 0,
        log_n: (spec.n.max(1) as f64).ln(),
        ratio: 0.0,
        runtime_ms: 0,
        verifier_valid: false,
        detail: String::new(),
    };
    if let Err(e) = fill(&mut rec, spec, t, epsilon, mode) {
        rec.outcome = Outcome::Stalled;
        rec.witness_size = 0;
        rec.verifier_valid = false;
        rec.detail = e.to_string();
    }
    if rec.log_n > 0.0 {
        rec.ratio = rec.witness_size as f64 / rec.log_n;
    }
    rec.runtime_ms = start.elapsed().as_millis() as u64;
    rec
}

fn fill(
    rec: &mut ExperimentRecord,
    spec: &GeneratorSpec,
    t: usize,
    epsilon: f64,
    mode: SweepMode,
) -> Result<()> {
    let g = generate(spec)?;
    rec.n = g.n();
    rec.log_n = (g.n().max(1) as f64).ln();
    match mode {
        SweepMode::Minor => {
            let r = find_minor_pipeline_with(&g, t, epsilon, &MinorPipelineOptions::default())?;
            rec.delta = r.params.delta;
            rec.eta = r.params.eta;
            rec.sigma = r.params.sigma;
            if let Some(s) = &r.scales {
                rec.k = s.k;
                rec.f_m = s.f_m;
            }
            rec.outcome = match r.source {
                WitnessSource::Construction => Outcome::Minor,
                WitnessSource::BruteForce | WitnessSource::NotFound => Outcome::Handoff,
            };
            if let Some(model) = &r.model {
                rec.verifier_valid = verify_minor_model(&g, model).valid;
                rec.witness_size = model.total_vertices;
            }
            rec.detail = format!("{:?} on {} extracted vertices", r.source, r.extracted_order);
        }
        SweepMode::Subdivision | SweepMode::MinorOrSubdivision => {
            let opts = SubdivisionPipelineOptions {
                mode: if mode == SweepMode::Subdivision {
                    SubdivisionMode::Subdivision
                } else {
                    SubdivisionMode::MinorOrSubdivision
                },
                ..SubdivisionPipelineOptions::default()
            };
            let r = find_subdivision_pipeline_with(&g, t, epsilon, &opts)?;
            rec.delta = r.params.delta;
            rec.eta = r.params.eta;
            rec.sigma = r.params.sigma;
            if let Some(s) = &r.scales {
                rec.k = s.k;
                rec.f_m = s.f_m;
            }
            rec.outcome = match r.source {
                SubdivisionSource::BruteForceSubdivision
                | SubdivisionSource::BruteForceMinor
                | SubdivisionSource::NotFound => Outcome::Handoff,
                _ => Outcome::Subdivision,
            };
            if let Some(model) = &r.subdivision {
                rec.verifier_valid = verify_subdivision(&g, model).valid;
                rec.witness_size = model.total_vertices;
            } else if let Some(model) = &r.minor {
                rec.verifier_valid = verify_minor_model(&g, model).valid;
                rec.witness_size = model.total_vertices;
            }
            rec.detail = format!("{:?} on {} extracted vertices", r.source, r.extracted_order);
        }
    }
    if rec.witness_size > 0 && !rec.verifier_valid {
        return Err(Error::Internal("witness failed verification".into()));
    }
    Ok(())
}

pub fn write_csv<W: Write>(records: &[ExperimentRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(records: &[ExperimentRecord], out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, records)?;
    Ok(())
}
