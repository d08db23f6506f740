use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{
    build_units_dense, build_units_sparse, connect_units, split_by_degree_with, DegreeSplit,
    SparseOutcome, SubdivisionModel, Unit, UnitOptions,
};
use crate::error::{Error, Result};
use crate::expansion::{
    extract_expander_with, floor_pow, DerivedScales, ExpansionParams, ExtractOptions,
    ExtractionMode,
};
use crate::graph::{Graph, Path, VertexSet};
use crate::minor::MinorModel;
use crate::verify::{
    brute_force_find_minor, brute_force_find_subdivision, verify_minor_model, verify_subdivision,
    MINOR_ORACLE_MAX_N, MINOR_ORACLE_MAX_T, SUBDIVISION_ORACLE_MAX_N, SUBDIVISION_ORACLE_MAX_T,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubdivisionMode {
    #[default]
    Subdivision,
    /// Accept a `K_t` minor from exhaustive search when no subdivision is found.
    MinorOrSubdivision,
}

impl std::str::FromStr for SubdivisionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "subdivision" => Ok(SubdivisionMode::Subdivision),
            "minor_or_subdivision" | "minor-or-subdivision" => {
                Ok(SubdivisionMode::MinorOrSubdivision)
            }
            _ => Err(Error::InvalidParameter(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubdivisionSource {
    /// `t <= 2`: a vertex or an edge.
    Trivial,
    /// Units built around high-degree stars, then joined.
    DenseUnits,
    /// Units built from small balls, then joined.
    SparseUnits,
    /// Exits into the high-degree part gave the corners directly.
    Exits,
    BruteForceSubdivision,
    BruteForceMinor,
    NotFound,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubdivisionPipelineOptions {
    pub mode: SubdivisionMode,
    pub extract: ExtractOptions,
    pub units: UnitOptions,
    /// Stars wanted from the degree split; `None` means
    /// `max(floor(m^(6 sigma)), 4(t + 1))`.
    pub star_target: Option<usize>,
    /// `c` in the minimum-degree floor `c t sqrt(log t) + 3t`.
    pub degree_floor_constant: f64,
}

impl Default for SubdivisionPipelineOptions {
    fn default() -> Self {
        SubdivisionPipelineOptions {
            mode: SubdivisionMode::Subdivision,
            extract: ExtractOptions::default(),
            units: UnitOptions::default(),
            star_target: None,
            degree_floor_constant: 1.0 / 128.0,
        }
    }
}

/// `c t sqrt(log t) + 3t`.
pub fn degree_floor(t: usize, c: f64) -> f64 {
    let tf = t as f64;
    c * tf * tf.ln().max(0.0).sqrt() + 3.0 * tf
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubdivisionPipelineResult {
    pub source: SubdivisionSource,
    /// In input-graph ids; verified against the input.
    pub subdivision: Option<SubdivisionModel>,
    /// Only from exhaustive search in `minor_or_subdivision` mode.
    pub minor: Option<MinorModel>,
    /// Units built on the way, in input-graph ids.
    pub units: Vec<Unit>,
    pub params: ExpansionParams,
    pub extraction_mode: ExtractionMode,
    pub extracted_order: usize,
    pub scales: Option<DerivedScales>,
    pub degree_floor: f64,
    pub min_degree: usize,
    /// Stalls met on routes that were abandoned for a later one.
    pub abandoned: Vec<String>,
}

/// Extracts a small-set expander from `g` and builds a small `K_t`
/// subdivision in it from units, falling back to exhaustive search when the
/// extracted graph is tiny.
pub fn find_subdivision_pipeline(
    g: &Graph,
    t: usize,
    epsilon: f64,
    mode: SubdivisionMode,
) -> Result<SubdivisionPipelineResult> {
    let opts = SubdivisionPipelineOptions {
        mode,
        ..SubdivisionPipelineOptions::default()
    };
    find_subdivision_pipeline_with(g, t, epsilon, &opts)
}

pub fn find_subdivision_pipeline_with(
    g: &Graph,
    t: usize,
    epsilon: f64,
    opts: &SubdivisionPipelineOptions,
) -> Result<SubdivisionPipelineResult> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "epsilon = {epsilon} must be positive"
        )));
    }
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    // delta = epsilon / 3 must stay below 1.
    let p = ExpansionParams::for_subdivision(t, epsilon.min(1.0) / 3.0, g.n().max(3))?;
    let floor = degree_floor(t, opts.degree_floor_constant);
    let mut result = SubdivisionPipelineResult {
        source: SubdivisionSource::NotFound,
        subdivision: None,
        minor: None,
        units: Vec::new(),
        params: p.clone(),
        extraction_mode: ExtractionMode::PlainExpander,
        extracted_order: g.n(),
        scales: None,
        degree_floor: floor,
        min_degree: g.min_degree(),
        abandoned: Vec::new(),
    };
    if t <= 2 {
        let model = if t == 1 {
            Some(SubdivisionModel::new(vec![0], BTreeMap::new()))
        } else {
            g.edges().next().map(|(u, v)| {
                SubdivisionModel::new(
                    vec![u, v],
                    BTreeMap::from([((0, 1), Path::from_vec_unchecked(vec![u, v]))]),
                )
            })
        };
        if model.is_some() {
            result.source = SubdivisionSource::Trivial;
        }
        result.subdivision = model;
        return Ok(result);
    }

    let extraction = extract_expander_with(g, &p, true, &opts.extract)?;
    let h = &extraction.subgraph;
    let m = h.n();
    result.extraction_mode = extraction.mode;
    result.extracted_order = m;
    result.min_degree = h.min_degree();

    if extraction.mode == ExtractionMode::BelowThreshold {
        if m <= SUBDIVISION_ORACLE_MAX_N && t <= SUBDIVISION_ORACLE_MAX_T {
            if let Some(model) = brute_force_find_subdivision(h, t)? {
                result.source = SubdivisionSource::BruteForceSubdivision;
                result.subdivision = Some(model.map_to_host(&extraction.map));
            }
        }
        if result.subdivision.is_none()
            && opts.mode == SubdivisionMode::MinorOrSubdivision
            && m <= MINOR_ORACLE_MAX_N
            && t <= MINOR_ORACLE_MAX_T
        {
            if let Some(model) = brute_force_find_minor(h, t)? {
                result.source = SubdivisionSource::BruteForceMinor;
                result.minor = Some(model.map_to_host(&extraction.map));
            }
        }
        if m <= SUBDIVISION_ORACLE_MAX_N.max(MINOR_ORACLE_MAX_N) || m < 3 {
            return finish(g, result);
        }
    }

    let d = DerivedScales::new(m, &p)?;
    result.scales = Some(d.clone());
    let star_target = opts
        .star_target
        .unwrap_or_else(|| floor_pow(m, 6.0 * p.sigma).max(4 * (t + 1)));

    // Too few stars to reach the target still feed the dense route.
    let split = split_by_degree_with(h, p.sigma, Some(star_target));
    let stars = split.stars();
    if stars.len() > t {
        let built = build_units_dense(h, stars, &VertexSet::new(), &d, &p, &opts.units)
            .and_then(|units| try_connect(h, &units, t, &d, &p).map(|model| (units, model)));
        match built {
            Ok((units, model)) => {
                result.source = SubdivisionSource::DenseUnits;
                result.subdivision = Some(model.map_to_host(&extraction.map));
                result.units = units
                    .iter()
                    .map(|u| u.map_to_host(&extraction.map))
                    .collect();
                return finish(g, result);
            }
            Err(e @ Error::Stalled { .. }) => {
                log::info!("dense units route abandoned: {e}");
                result.abandoned.push(format!("dense: {e}"));
            }
            Err(e) => return Err(e),
        }
    }

    // Set aside every high-degree star so the rest has small degrees.
    let x = match split_by_degree_with(h, p.sigma, Some(usize::MAX)) {
        DegreeSplit::SparseResidue { x, .. } => x,
        DegreeSplit::Stars(_) => unreachable!("an unbounded star target always ends in a residue"),
    };
    match build_units_sparse(h, &x, &d, &p, floor, &opts.units)? {
        SparseOutcome::Subdivision(model) => {
            result.source = SubdivisionSource::Exits;
            result.subdivision = Some(model.map_to_host(&extraction.map));
        }
        SparseOutcome::Units(units) => {
            let model = try_connect(h, &units, t, &d, &p)?;
            result.source = SubdivisionSource::SparseUnits;
            result.subdivision = Some(model.map_to_host(&extraction.map));
            result.units = units
                .iter()
                .map(|u| u.map_to_host(&extraction.map))
                .collect();
        }
    }
    finish(g, result)
}

fn try_connect(
    h: &Graph,
    units: &[Unit],
    t: usize,
    d: &DerivedScales,
    p: &ExpansionParams,
) -> Result<SubdivisionModel> {
    if units.len() < t {
        return Err(Error::stalled(
            0,
            format!("built {} units, need {t}", units.len()),
        ));
    }
    connect_units(h, units, t, d, p)
}

fn finish(g: &Graph, result: SubdivisionPipelineResult) -> Result<SubdivisionPipelineResult> {
    if let Some(model) = &result.subdivision {
        let report = verify_subdivision(g, model);
        if !report.valid {
            return Err(Error::Internal(format!(
                "mapped subdivision failed verification: {:?}",
                report.violations
            )));
        }
    }
    if let Some(model) = &result.minor {
        let report = verify_minor_model(g, model);
        if !report.valid {
            return Err(Error::Internal(format!(
                "mapped minor failed verification: {:?}",
                report.violations
            )));
        }
    }
    Ok(result)
}
