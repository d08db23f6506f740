use serde::{Deserialize, Serialize};

use super::{build_small_minor_with, MinorModel, MinorOptions};
use crate::error::{Error, Result};
use crate::expansion::{
    extract_expander_with, DerivedScales, ExpansionParams, ExtractOptions, ExtractionMode,
};
use crate::graph::{average_degree, Graph};
use crate::verify::{
    brute_force_find_minor, verify_minor_model, MINOR_ORACLE_MAX_N, MINOR_ORACLE_MAX_T,
};

/// `max(0.638 t sqrt(log t), 1)`: the usual `Theta(t sqrt(log t))` density
/// form for forcing a `K_t` minor, with an adjustable constant.
pub fn default_density_target(t: usize) -> f64 {
    let tf = t as f64;
    (0.638 * tf * tf.ln().max(0.0).sqrt()).max(1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinorPipelineOptions {
    /// Declared density above which a `K_t` minor is expected; defaults to
    /// [`default_density_target`].
    pub density_target: Option<f64>,
    pub extract: ExtractOptions,
    pub minor: MinorOptions,
    /// How many times to retry a stalled construction with twice as many nice sets.
    pub retries: usize,
}

impl Default for MinorPipelineOptions {
    fn default() -> Self {
        MinorPipelineOptions {
            density_target: None,
            extract: ExtractOptions::default(),
            minor: MinorOptions::default(),
            retries: 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessSource {
    /// Built by the staged construction inside the extracted expander.
    Construction,
    /// Found by exhaustive search in a small extracted graph.
    BruteForce,
    /// No witness: the extracted graph was small and exhaustive search found none.
    NotFound,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinorPipelineResult {
    pub source: WitnessSource,
    /// Model in input-graph ids; verified against the input.
    pub model: Option<MinorModel>,
    pub params: ExpansionParams,
    pub density_target: f64,
    pub density_precondition_met: bool,
    pub extraction_mode: ExtractionMode,
    pub extracted_order: usize,
    pub scales: Option<DerivedScales>,
}

/// Extracts an expander from `g` and builds a small `K_t` minor in it,
/// falling back to exhaustive search when the extracted graph is tiny.
pub fn find_minor_pipeline(g: &Graph, t: usize, epsilon: f64) -> Result<MinorPipelineResult> {
    find_minor_pipeline_with(g, t, epsilon, &MinorPipelineOptions::default())
}

pub fn find_minor_pipeline_with(
    g: &Graph,
    t: usize,
    epsilon: f64,
    opts: &MinorPipelineOptions,
) -> Result<MinorPipelineResult> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "epsilon = {epsilon} must be positive"
        )));
    }
    let target = opts
        .density_target
        .unwrap_or_else(|| default_density_target(t));
    if target.is_nan() || target <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "density target {target} must be positive"
        )));
    }
    let density = average_degree(g)?;
    let density_precondition_met = *density.numer() as f64 >= target * *density.denom() as f64;
    // epsilon at least the target would make delta meaningless; cap it.
    let eps = if epsilon < target {
        epsilon
    } else {
        target / 2.0
    };
    let p = ExpansionParams::for_minor(t, eps / (3.0 * target), g.n().max(3))?;
    let extraction = extract_expander_with(g, &p, false, &opts.extract)?;
    let h = &extraction.subgraph;
    let mut result = MinorPipelineResult {
        source: WitnessSource::NotFound,
        model: None,
        params: p.clone(),
        density_target: target,
        density_precondition_met,
        extraction_mode: extraction.mode,
        extracted_order: h.n(),
        scales: None,
    };

    if extraction.mode == ExtractionMode::BelowThreshold
        && h.n() <= MINOR_ORACLE_MAX_N
        && t <= MINOR_ORACLE_MAX_T
    {
        if let Some(model) = brute_force_find_minor(h, t)? {
            result.source = WitnessSource::BruteForce;
            result.model = Some(model.map_to_host(&extraction.map));
        }
    } else if h.n() >= 3 {
        let scales = DerivedScales::new(h.n(), &p)?;
        let mut minor_opts = opts.minor.clone();
        let mut attempt = 0;
        let model = loop {
            match build_small_minor_with(h, t, &scales, &p, &minor_opts) {
                Ok(model) => break model,
                Err(Error::Stalled { stage, detail }) if attempt < opts.retries => {
                    log::info!("minor construction stalled at stage {stage} ({detail}); retrying");
                    let size = minor_opts
                        .nice_size
                        .unwrap_or_else(|| crate::expansion::floor_pow(h.n(), 0.25))
                        .max(1);
                    let current = minor_opts
                        .nice_count
                        .unwrap_or_else(|| crate::expansion::floor_pow(h.n(), 0.25).max(2 * t));
                    minor_opts.nice_count = Some((2 * current).min(h.n() / size));
                    attempt += 1;
                }
                Err(e) => return Err(e),
            }
        };
        result.source = WitnessSource::Construction;
        result.model = Some(model.map_to_host(&extraction.map));
        result.scales = Some(scales);
    }

    if let Some(model) = &result.model {
        let report = verify_minor_model(g, model);
        if !report.valid {
            return Err(Error::Internal(format!(
                "mapped minor model failed verification: {:?}",
                report.violations
            )));
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    #[test]
    fn density_target_form() {
        assert_eq!(default_density_target(1), 1.0);
        assert!((default_density_target(4) - 0.638 * 4.0 * 4f64.ln().sqrt()).abs() < 1e-12);
    }

    #[test]
    fn tree_has_no_triangle_minor() {
        let g = families::path(12);
        let r = find_minor_pipeline(&g, 3, 1.0).unwrap();
        assert_eq!(r.source, WitnessSource::NotFound);
        assert_eq!(r.extraction_mode, ExtractionMode::BelowThreshold);
    }

    #[test]
    fn small_clique_goes_to_brute_force() {
        let g = families::complete(6);
        let r = find_minor_pipeline(&g, 5, 1.0).unwrap();
        assert_eq!(r.source, WitnessSource::BruteForce);
        assert!(verify_minor_model(&g, r.model.as_ref().unwrap()).valid);
    }

    #[test]
    fn blobs_yield_a_minor_inside_one_blob() {
        let blob = families::complete(40);
        let g = families::disjoint_union(&blob, &blob);
        let r = find_minor_pipeline(&g, 4, 1.0).unwrap();
        assert_eq!(r.source, WitnessSource::Construction);
        let model = r.model.unwrap();
        let all: Vec<usize> = model.branch_sets.iter().flat_map(|s| s.iter()).collect();
        assert!(all.iter().all(|&v| v < 40) || all.iter().all(|&v| v >= 40));
    }
}
