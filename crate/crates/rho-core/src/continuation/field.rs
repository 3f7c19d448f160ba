//! Rasterized `ρ` fields over a rectangle.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::RhoError;
use crate::geometry::ProblemSpec;
use crate::types::{Cx, Rho};

use super::config::EngineConfig;
use super::estimate::{estimate_scalar, rho_estimate};
use super::ray::ScalarProblem;

/// Value of one grid cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum GridCell {
    Value(f64),
    Unbounded,
    OutsideDomain,
}

impl GridCell {
    pub fn rho(self) -> Option<Rho> {
        match self {
            GridCell::Value(v) => Some(Rho::Finite(v)),
            GridCell::Unbounded => Some(Rho::Unbounded),
            GridCell::OutsideDomain => None,
        }
    }
}

/// A scalar field sampled at cell centers of a rectangle, row-major with
/// `index = j·nx + i`, `i` along the real axis.
#[derive(Debug, Clone, Serialize)]
pub struct GridField {
    pub bbox: (Cx, Cx),
    pub nx: usize,
    pub ny: usize,
    pub cells: Vec<GridCell>,
}

impl GridField {
    pub fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.nx && j < self.ny);
        j * self.nx + i
    }

    pub fn center(&self, i: usize, j: usize) -> Cx {
        let (lo, hi) = self.bbox;
        Cx::new(
            lo.re + (hi.re - lo.re) * (i as f64 + 0.5) / self.nx as f64,
            lo.im + (hi.im - lo.im) * (j as f64 + 0.5) / self.ny as f64,
        )
    }

    pub fn get(&self, i: usize, j: usize) -> GridCell {
        self.cells[self.index(i, j)]
    }

    pub fn cell_size(&self) -> (f64, f64) {
        let (lo, hi) = self.bbox;
        ((hi.re - lo.re) / self.nx as f64, (hi.im - lo.im) / self.ny as f64)
    }
}

/// Evaluates `ρ` at every in-region cell center of the grid. Cells are
/// processed in parallel but reduced in index order, so the result is
/// independent of the execution schedule.
pub fn rho_field(
    spec: &ProblemSpec,
    bbox: (Cx, Cx),
    nx: usize,
    ny: usize,
    cfg: &EngineConfig,
) -> Result<GridField, RhoError> {
    cfg.check()?;
    spec.require_valid()?;
    if spec.is_product() {
        return Err(RhoError::Invalid("rho_field works on one-dimensional problems".into()));
    }
    if nx == 0 || ny == 0 {
        return Err(RhoError::Invalid("grid must have at least one cell per axis".into()));
    }
    let (lo, hi) = bbox;
    if !(hi.re > lo.re && hi.im > lo.im) {
        return Err(RhoError::Invalid("bbox corners must be ordered".into()));
    }

    let mut field = GridField { bbox, nx, ny, cells: Vec::new() };
    let centers: Vec<Cx> =
        (0..nx * ny).map(|idx| field.center(idx % nx, idx / nx)).collect();
    let prob = ScalarProblem::of(spec);
    field.cells = centers
        .par_iter()
        .map(|&c| {
            if !spec.region.contains(c) {
                return GridCell::OutsideDomain;
            }
            match estimate_scalar(&prob, c, cfg).value {
                Rho::Finite(v) => GridCell::Value(v),
                Rho::Unbounded => GridCell::Unbounded,
            }
        })
        .collect();
    Ok(field)
}

/// Minimum of `ρ` over the cell centers of a nonempty cell set, the set
/// version of the pointwise radius. `Unbounded` only when every point is.
pub fn rho_over_points(
    spec: &ProblemSpec,
    points: &[Cx],
    cfg: &EngineConfig,
) -> Result<Rho, RhoError> {
    if points.is_empty() {
        return Err(RhoError::EmptySet);
    }
    let values: Vec<Rho> = points
        .par_iter()
        .map(|&p| rho_estimate(spec, p, cfg).map(|e| e.value))
        .collect::<Result<_, _>>()?;
    Ok(values.into_iter().fold(Rho::Unbounded, Rho::min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{DomainSpec, FrameSpec};

    fn cx(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    #[test]
    fn unit_disk_center_cell() {
        let spec = ProblemSpec::new(
            DomainSpec::Plane,
            DomainSpec::disk(cx(0.0, 0.0), 1.0),
            FrameSpec::ConstOne,
        );
        let field = rho_field(
            &spec,
            (cx(-1.0, -1.0), cx(1.0, 1.0)),
            3,
            3,
            &EngineConfig::default(),
        )
        .unwrap();
        match field.get(1, 1) {
            GridCell::Value(v) => assert!((v - 1.0).abs() < 0.01, "center rho = {v}"),
            other => panic!("center cell should be a value, got {other:?}"),
        }
        // Corner cells at (±2/3, ±2/3) lie inside the disk; the field marks
        // only true exterior cells as outside.
        assert!(field.cells.iter().all(|c| *c != GridCell::Unbounded));
    }

    #[test]
    fn bbox_outside_region_is_all_outside() {
        let spec = ProblemSpec::new(
            DomainSpec::Plane,
            DomainSpec::disk(cx(0.0, 0.0), 1.0),
            FrameSpec::ConstOne,
        );
        let field = rho_field(
            &spec,
            (cx(5.0, 5.0), cx(6.0, 6.0)),
            4,
            4,
            &EngineConfig::default(),
        )
        .unwrap();
        assert!(field.cells.iter().all(|c| *c == GridCell::OutsideDomain));
    }

    #[test]
    fn rho_over_points_minimum_rule() {
        let spec = ProblemSpec::new(
            DomainSpec::Plane,
            DomainSpec::disk(cx(0.0, 0.0), 1.0),
            FrameSpec::ConstOne,
        );
        let v = rho_over_points(&spec, &[cx(0.0, 0.0), cx(0.5, 0.0)], &EngineConfig::default())
            .unwrap();
        let v = v.finite().unwrap();
        assert!((v - 0.5).abs() < 0.005, "min rho = {v}");
    }

    #[test]
    fn empty_set_rejected() {
        let spec = ProblemSpec::new(
            DomainSpec::Plane,
            DomainSpec::disk(cx(0.0, 0.0), 1.0),
            FrameSpec::ConstOne,
        );
        assert!(matches!(
            rho_over_points(&spec, &[], &EngineConfig::default()),
            Err(RhoError::EmptySet)
        ));
    }
}
