//! Spec and config ingestion plus the eval/field entry points shared by the
//! binary and the test suites.

use std::path::Path;

use serde::Serialize;

use rho_core::continuation::{rho_estimate_point, rho_field, GridField};
use rho_core::{Cx, EngineConfig, ProblemSpec, Rho, RhoError};

use crate::manifest::RunManifest;
use crate::{CliError, exit_codes};

/// Optional per-flag overrides applied on top of the config file.
#[derive(Debug, Clone, Default)]
pub struct EngineOverrides {
    pub n_rays_init: Option<usize>,
    pub refine_depth: Option<usize>,
    pub refine_trigger: Option<f64>,
    pub rtol: Option<f64>,
    pub atol: Option<f64>,
    pub h_min: Option<f64>,
    pub t_cap: Option<f64>,
    pub eps_sing: Option<f64>,
    pub z_max: Option<f64>,
    pub bisect_tol: Option<f64>,
}

impl EngineOverrides {
    fn apply(&self, cfg: &mut EngineConfig) {
        macro_rules! take {
            ($field:ident) => {
                if let Some(v) = self.$field {
                    cfg.$field = v;
                }
            };
        }
        take!(n_rays_init);
        take!(refine_depth);
        take!(refine_trigger);
        take!(rtol);
        take!(atol);
        take!(h_min);
        take!(t_cap);
        take!(eps_sing);
        take!(z_max);
        take!(bisect_tol);
    }
}

pub fn load_spec(path: &Path) -> Result<(ProblemSpec, Vec<u8>), CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::io(format!("cannot read spec {}: {e}", path.display())))?;
    let spec: ProblemSpec = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::invalid_spec(format!("spec parse error: {e}")))?;
    let report = spec.validate();
    if !report.is_valid() {
        return Err(CliError::invalid_spec(format!("invalid spec: {report}")));
    }
    Ok((spec, bytes))
}

pub fn load_config(path: Option<&Path>, overrides: &EngineOverrides) -> Result<EngineConfig, CliError> {
    let mut cfg = match path {
        Some(p) => {
            let bytes = std::fs::read(p)
                .map_err(|e| CliError::io(format!("cannot read config {}: {e}", p.display())))?;
            serde_json::from_slice(&bytes)
                .map_err(|e| CliError::invalid_spec(format!("config parse error: {e}")))?
        }
        None => EngineConfig::default(),
    };
    overrides.apply(&mut cfg);
    cfg.check().map_err(|e| CliError::invalid_spec(format!("invalid config: {e}")))?;
    Ok(cfg)
}

/// Parses `re,im` (one coordinate) or `re,im;re,im;…` (product tuples).
pub fn parse_point(text: &str) -> Result<Vec<Cx>, CliError> {
    let mut out = Vec::new();
    for part in text.split(';') {
        let comps: Vec<&str> = part.split(',').map(str::trim).collect();
        if comps.len() != 2 {
            return Err(CliError::invalid_point(format!(
                "point component '{part}' is not of the form re,im"
            )));
        }
        let re: f64 = comps[0]
            .parse()
            .map_err(|_| CliError::invalid_point(format!("bad real part '{}'", comps[0])))?;
        let im: f64 = comps[1]
            .parse()
            .map_err(|_| CliError::invalid_point(format!("bad imaginary part '{}'", comps[1])))?;
        out.push(Cx::new(re, im));
    }
    Ok(out)
}

pub fn parse_bbox(text: &str) -> Result<(Cx, Cx), CliError> {
    let comps: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::invalid_point(format!("bbox '{text}' is not x0,y0,x1,y1")))?;
    if comps.len() != 4 {
        return Err(CliError::invalid_point("bbox needs four components"));
    }
    Ok((Cx::new(comps[0], comps[1]), Cx::new(comps[2], comps[3])))
}

fn map_engine_error(e: RhoError) -> CliError {
    let code = match &e {
        RhoError::PointOutsideRegion { .. } | RhoError::DimensionMismatch { .. } => {
            exit_codes::INVALID_POINT
        }
        _ => exit_codes::INVALID_SPEC,
    };
    CliError { code, message: e.to_string() }
}

/// Result document of `rho eval`.
#[derive(Debug, Serialize)]
pub struct EvalDocument {
    pub value: Rho,
    pub lower: f64,
    pub upper: Rho,
    pub argmin_theta: Option<f64>,
    pub rays_used: usize,
    pub refinement_rounds: usize,
    /// Per-factor radii for split products (empty otherwise).
    pub factor_values: Vec<Rho>,
    pub manifest_hash: String,
    pub manifest: RunManifest,
}

pub fn run_eval(
    spec_path: &Path,
    point_text: &str,
    config: &EngineConfig,
    seed: u64,
) -> Result<EvalDocument, CliError> {
    let (spec, spec_bytes) = load_spec(spec_path)?;
    let point = parse_point(point_text)?;
    let est = rho_estimate_point(&spec, &point, config).map_err(map_engine_error)?;
    let manifest = RunManifest::new(
        serde_json::json!({"cmd": "eval", "point": point_text}),
        &spec_path.display().to_string(),
        &spec_bytes,
        config,
        seed,
    );
    Ok(EvalDocument {
        value: est.value,
        lower: est.lower,
        upper: est.upper,
        argmin_theta: est.argmin_theta,
        rays_used: est.rays_used,
        refinement_rounds: est.refinement_rounds,
        factor_values: est.factor_estimates.iter().map(|f| f.value).collect(),
        manifest_hash: manifest.hash(),
        manifest,
    })
}

pub struct FieldRun {
    pub field: GridField,
    pub manifest: RunManifest,
    pub manifest_hash: String,
}

#[allow(clippy::too_many_arguments)]
pub fn run_field(
    spec_path: &Path,
    bbox_text: &str,
    nx: usize,
    ny: usize,
    config: &EngineConfig,
    seed: u64,
) -> Result<FieldRun, CliError> {
    let (spec, spec_bytes) = load_spec(spec_path)?;
    let bbox = parse_bbox(bbox_text)?;
    let field = rho_field(&spec, bbox, nx, ny, config).map_err(map_engine_error)?;
    let manifest = RunManifest::new(
        serde_json::json!({"cmd": "field", "bbox": bbox_text, "nx": nx, "ny": ny}),
        &spec_path.display().to_string(),
        &spec_bytes,
        config,
        seed,
    );
    let manifest_hash = manifest.hash();
    Ok(FieldRun { field, manifest, manifest_hash })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_parsing() {
        assert_eq!(parse_point("1,0").unwrap(), vec![Cx::new(1.0, 0.0)]);
        assert_eq!(
            parse_point("0.5,0; -1,2").unwrap(),
            vec![Cx::new(0.5, 0.0), Cx::new(-1.0, 2.0)]
        );
        assert!(parse_point("1").is_err());
        assert!(parse_point("a,b").is_err());
    }

    #[test]
    fn bbox_parsing() {
        let (lo, hi) = parse_bbox("-1,-1,1,1").unwrap();
        assert_eq!(lo, Cx::new(-1.0, -1.0));
        assert_eq!(hi, Cx::new(1.0, 1.0));
        assert!(parse_bbox("1,2,3").is_err());
    }

    #[test]
    fn overrides_apply() {
        let mut o = EngineOverrides::default();
        o.t_cap = Some(10.0);
        o.n_rays_init = Some(16);
        let cfg = load_config(None, &o).unwrap();
        assert_eq!(cfg.t_cap, 10.0);
        assert_eq!(cfg.n_rays_init, 16);
        assert_eq!(cfg.rtol, EngineConfig::default().rtol);
    }
}
