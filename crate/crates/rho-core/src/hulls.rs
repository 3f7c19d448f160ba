//! Rasterized holomorphically convex hulls of compact sets in plane
//! domains, and the hull-based checkers.
//!
//! For a plane domain `Ω` the holomorphically convex hull of a compact `K`
//! is `K` together with the relatively compact components of `Ω ∖ K` — the
//! analytic definition (domination of every holomorphic function by its max
//! on `K`) is not directly computable, but this geometric characterization
//! is, by flood fill on a raster. The accuracy parameter is the cell size,
//! which every report carries.

use rayon::prelude::*;
use serde::Serialize;

use crate::continuation::{rho_over_points, EngineConfig};
use crate::error::RhoError;
use crate::geometry::{DomainSpec, ProblemSpec};
use crate::types::{Cx, Rho};

/// Cell-center rasterization of a region over a rectangle. Row-major,
/// `index = j·nx + i`.
#[derive(Debug, Clone, Serialize)]
pub struct Raster {
    pub bbox: (Cx, Cx),
    pub nx: usize,
    pub ny: usize,
    /// `true` where the cell center lies in the region.
    pub mask: Vec<bool>,
}

impl Raster {
    pub fn build(region: &DomainSpec, bbox: (Cx, Cx), nx: usize, ny: usize) -> Result<Self, RhoError> {
        region.check_well_formed()?;
        if nx == 0 || ny == 0 {
            return Err(RhoError::Invalid("raster needs at least one cell per axis".into()));
        }
        let mut r = Raster { bbox, nx, ny, mask: Vec::with_capacity(nx * ny) };
        for j in 0..ny {
            for i in 0..nx {
                r.mask.push(region.contains(r.center(i, j)));
            }
        }
        Ok(r)
    }

    pub fn center(&self, i: usize, j: usize) -> Cx {
        let (lo, hi) = self.bbox;
        Cx::new(
            lo.re + (hi.re - lo.re) * (i as f64 + 0.5) / self.nx as f64,
            lo.im + (hi.im - lo.im) * (j as f64 + 0.5) / self.ny as f64,
        )
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn cell_size(&self) -> (f64, f64) {
        let (lo, hi) = self.bbox;
        ((hi.re - lo.re) / self.nx as f64, (hi.im - lo.im) / self.ny as f64)
    }

    /// Cell set of all in-region cells whose center satisfies `pred`.
    pub fn select(&self, pred: impl Fn(Cx) -> bool) -> Vec<bool> {
        let mut out = vec![false; self.nx * self.ny];
        for j in 0..self.ny {
            for i in 0..self.nx {
                let idx = self.index(i, j);
                if self.mask[idx] && pred(self.center(i, j)) {
                    out[idx] = true;
                }
            }
        }
        out
    }

    pub fn centers_of(&self, cells: &[bool]) -> Vec<Cx> {
        let mut out = Vec::new();
        for j in 0..self.ny {
            for i in 0..self.nx {
                if cells[self.index(i, j)] {
                    out.push(self.center(i, j));
                }
            }
        }
        out
    }
}

/// A compact cell set together with its holomorphically convex hull.
#[derive(Debug, Clone, Serialize)]
pub struct HullResult {
    pub k_mask: Vec<bool>,
    pub hull_mask: Vec<bool>,
    /// Number of relatively compact components of `Ω ∖ K` that were filled.
    pub filled_components: usize,
}

/// Computes the hull of `k` inside the rasterized region by flood-filling
/// `Ω ∖ K` from every cell adjacent to the region boundary or to the raster
/// frame; unreached components are enclosed holes and join the hull.
pub fn hull_compute(k: &[bool], region: &DomainSpec, raster: &Raster) -> Result<HullResult, RhoError> {
    let n = raster.nx * raster.ny;
    if k.len() != n {
        return Err(RhoError::Invalid("cell set length does not match the raster".into()));
    }
    for idx in 0..n {
        if k[idx] && !raster.mask[idx] {
            return Err(RhoError::Containment("K has cells outside the region".into()));
        }
    }
    if !region.is_bounded() {
        let on_frame = (0..n).any(|idx| {
            let (i, j) = (idx % raster.nx, idx / raster.nx);
            k[idx] && (i == 0 || j == 0 || i == raster.nx - 1 || j == raster.ny - 1)
        });
        if on_frame {
            return Err(RhoError::HullAmbiguous);
        }
    }

    // Free cells: region minus K. Seeds: free cells touching the raster
    // frame or 4-adjacent to an out-of-region cell.
    let (nx, ny) = (raster.nx, raster.ny);
    let free = |idx: usize| raster.mask[idx] && !k[idx];
    let mut reached = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    for j in 0..ny {
        for i in 0..nx {
            let idx = raster.index(i, j);
            if !free(idx) {
                continue;
            }
            let on_frame = i == 0 || j == 0 || i == nx - 1 || j == ny - 1;
            let touches_outside = neighbors4(i, j, nx, ny)
                .into_iter()
                .flatten()
                .any(|nidx| !raster.mask[nidx]);
            if on_frame || touches_outside {
                reached[idx] = true;
                queue.push_back(idx);
            }
        }
    }
    while let Some(idx) = queue.pop_front() {
        let (i, j) = (idx % nx, idx / nx);
        for nidx in neighbors4(i, j, nx, ny).into_iter().flatten() {
            if free(nidx) && !reached[nidx] {
                reached[nidx] = true;
                queue.push_back(nidx);
            }
        }
    }

    let mut hull_mask = k.to_vec();
    let mut hole = vec![false; n];
    for idx in 0..n {
        if free(idx) && !reached[idx] {
            hull_mask[idx] = true;
            hole[idx] = true;
        }
    }
    let filled_components = count_components(&hole, nx, ny);
    Ok(HullResult { k_mask: k.to_vec(), hull_mask, filled_components })
}

fn neighbors4(i: usize, j: usize, nx: usize, ny: usize) -> [Option<usize>; 4] {
    [
        (i > 0).then(|| j * nx + i - 1),
        (i + 1 < nx).then(|| j * nx + i + 1),
        (j > 0).then(|| (j - 1) * nx + i),
        (j + 1 < ny).then(|| (j + 1) * nx + i),
    ]
}

fn count_components(cells: &[bool], nx: usize, ny: usize) -> usize {
    let mut seen = vec![false; cells.len()];
    let mut count = 0;
    let mut queue = std::collections::VecDeque::new();
    for start in 0..cells.len() {
        if !cells[start] || seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        queue.push_back(start);
        while let Some(idx) = queue.pop_front() {
            let (i, j) = (idx % nx, idx / nx);
            for nidx in neighbors4(i, j, nx, ny).into_iter().flatten() {
                if cells[nidx] && !seen[nidx] {
                    seen[nidx] = true;
                    queue.push_back(nidx);
                }
            }
        }
    }
    count
}

/// `ρ(S, Ω) = inf {ρ(a, Ω) : a ∈ S}` over the cell centers of `S`.
pub fn rho_over_set(
    cells: &[bool],
    spec: &ProblemSpec,
    raster: &Raster,
    cfg: &EngineConfig,
) -> Result<Rho, RhoError> {
    let centers = raster.centers_of(cells);
    rho_over_points(spec, &centers, cfg)
}

/// Either a constant bound or a scalar field evaluated at cell centers,
/// standing in for `|f|` of a holomorphic `f`.
pub enum HullBound<'a> {
    Const(f64),
    Field(&'a (dyn Fn(Cx) -> f64 + Sync)),
}

impl HullBound<'_> {
    fn eval(&self, z: Cx) -> f64 {
        match self {
            HullBound::Const(c) => *c,
            HullBound::Field(f) => f(z),
        }
    }
}

/// Outcome of the hull domination check.
#[derive(Debug, Clone, Serialize)]
pub struct CtReport {
    /// `|f| ≤ ρ` held on `K` (the hypothesis); the check is aborted when it
    /// fails and the remaining fields are not meaningful.
    pub precondition_ok: bool,
    /// `max over hull cells of |f| − ρ`; at most `tol` when the bound
    /// propagates to the hull.
    pub worst_bound_violation: f64,
    pub rho_k: Rho,
    pub rho_hull: Rho,
    /// `|ρ(K, Ω) − ρ(K̂_Ω, Ω)|`.
    pub equality_gap: f64,
    pub filled_components: usize,
    pub cell_size: (f64, f64),
    pub tol: f64,
    pub pass: bool,
}

/// Checks that a bound `|f| ≤ ρ` on `K` propagates to the hull `K̂_Ω`, and
/// that `ρ(K, Ω) = ρ(K̂_Ω, Ω)`, within `tol`.
pub fn check_ct(
    k: &[bool],
    spec: &ProblemSpec,
    f: &HullBound<'_>,
    raster: &Raster,
    cfg: &EngineConfig,
    tol: f64,
) -> Result<CtReport, RhoError> {
    spec.require_valid()?;
    let hull = hull_compute(k, &spec.region, raster)?;
    let k_centers = raster.centers_of(k);
    if k_centers.is_empty() {
        return Err(RhoError::EmptySet);
    }

    let rho_at = |pts: &[Cx]| -> Result<Vec<Rho>, RhoError> {
        pts.par_iter()
            .map(|&p| crate::continuation::rho_estimate(spec, p, cfg).map(|e| e.value))
            .collect()
    };

    let k_rho = rho_at(&k_centers)?;
    let mut precondition_ok = true;
    let mut rho_k = Rho::Unbounded;
    for (&c, &r) in k_centers.iter().zip(&k_rho) {
        rho_k = rho_k.min(r);
        if f.eval(c) > r.as_f64() + tol {
            precondition_ok = false;
        }
    }
    if !precondition_ok {
        return Ok(CtReport {
            precondition_ok,
            worst_bound_violation: f64::INFINITY,
            rho_k,
            rho_hull: rho_k,
            equality_gap: f64::INFINITY,
            filled_components: hull.filled_components,
            cell_size: raster.cell_size(),
            tol,
            pass: false,
        });
    }

    let hull_centers = raster.centers_of(&hull.hull_mask);
    let hull_rho = rho_at(&hull_centers)?;
    let mut rho_hull = Rho::Unbounded;
    let mut worst = f64::NEG_INFINITY;
    for (&c, &r) in hull_centers.iter().zip(&hull_rho) {
        rho_hull = rho_hull.min(r);
        worst = worst.max(f.eval(c) - r.as_f64());
    }
    let equality_gap = match (rho_k, rho_hull) {
        (Rho::Finite(a), Rho::Finite(b)) => (a - b).abs(),
        (Rho::Unbounded, Rho::Unbounded) => 0.0,
        _ => f64::INFINITY,
    };
    let pass = worst <= tol && equality_gap <= tol;
    Ok(CtReport {
        precondition_ok,
        worst_bound_violation: worst,
        rho_k,
        rho_hull,
        equality_gap,
        filled_components: hull.filled_components,
        cell_size: raster.cell_size(),
        tol,
        pass,
    })
}

/// Outcome of the nested-domain approximation hypothesis
/// `max over b ∈ ∂Ω of ρ(b, Ω′) < ρ(K, Ω)`.
#[derive(Debug, Clone, Serialize)]
pub struct RungeReport {
    pub holds: bool,
    /// `max over ∂Ω samples of ρ(b, Ω′)`.
    pub boundary_sup: f64,
    /// `ρ(K, Ω)`.
    pub rho_k: f64,
    pub boundary_samples: usize,
}

/// Evaluates the strict inequality that makes `(Ω, Ω′)` admit uniform
/// approximation on `K`; both sides are computed with the ambient frame.
pub fn check_runge_condition(
    omega: &DomainSpec,
    omega_prime: &DomainSpec,
    k: &[bool],
    raster: &Raster,
    ambient_spec: &ProblemSpec,
    cfg: &EngineConfig,
    boundary_spacing: f64,
) -> Result<RungeReport, RhoError> {
    ambient_spec.require_valid()?;
    if !omega.is_subset_of(omega_prime) {
        return Err(RhoError::Containment("the inner domain must be contained in the outer".into()));
    }
    if !omega_prime.is_subset_of(&ambient_spec.ambient) {
        return Err(RhoError::Containment(
            "the outer domain must be contained in the ambient domain".into(),
        ));
    }
    let k_centers = raster.centers_of(k);
    if k_centers.is_empty() {
        return Err(RhoError::EmptySet);
    }
    if k_centers.iter().any(|&c| !omega.contains(c)) {
        return Err(RhoError::Containment("K must be contained in the inner domain".into()));
    }

    let boundary = omega.boundary_points(boundary_spacing)?;
    let spec_outer = ProblemSpec::new(
        ambient_spec.ambient.clone(),
        omega_prime.clone(),
        ambient_spec.frame.clone(),
    );
    let spec_inner =
        ProblemSpec::new(ambient_spec.ambient.clone(), omega.clone(), ambient_spec.frame.clone());

    let sup: f64 = boundary
        .par_iter()
        .map(|&b| crate::continuation::rho_estimate(&spec_outer, b, cfg).map(|e| e.value.as_f64()))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    let rho_k = rho_over_points(&spec_inner, &k_centers, cfg)?.as_f64();

    Ok(RungeReport {
        holds: sup < rho_k,
        boundary_sup: sup,
        rho_k,
        boundary_samples: boundary.len(),
    })
}

/// Renders a cell mask as a plain (P1) portable bitmap, `1` = in the set.
pub fn mask_to_pbm(mask: &[bool], nx: usize, ny: usize) -> String {
    let mut out = String::with_capacity(mask.len() * 2 + 32);
    out.push_str("P1\n");
    out.push_str(&format!("{nx} {ny}\n"));
    // Image rows run top-down; the grid's j axis runs bottom-up.
    for j in (0..ny).rev() {
        for i in 0..nx {
            out.push(if mask[j * nx + i] { '1' } else { '0' });
            out.push(if i + 1 == nx { '\n' } else { ' ' });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::FrameSpec;

    fn cx(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    fn disk2_raster(n: usize) -> (DomainSpec, Raster) {
        let region = DomainSpec::disk(cx(0.0, 0.0), 2.0);
        let raster =
            Raster::build(&region, (cx(-2.0, -2.0), cx(2.0, 2.0)), n, n).unwrap();
        (region, raster)
    }

    #[test]
    fn annular_band_hull_fills_the_disk() {
        let (region, raster) = disk2_raster(128);
        let band = raster.select(|z| {
            let r = z.norm();
            (0.9..=1.1).contains(&r)
        });
        let hull = hull_compute(&band, &region, &raster).unwrap();
        assert_eq!(hull.filled_components, 1);
        // Every cell of the inner disk joins the hull; outside stays out.
        for j in 0..raster.ny {
            for i in 0..raster.nx {
                let idx = raster.index(i, j);
                let r = raster.center(i, j).norm();
                if r <= 0.85 {
                    assert!(hull.hull_mask[idx], "inner cell ({i},{j}) not filled");
                }
                if r >= 1.15 && raster.mask[idx] {
                    assert!(!hull.hull_mask[idx], "outer cell ({i},{j}) wrongly filled");
                }
            }
        }
    }

    #[test]
    fn band_around_the_annulus_hole_is_its_own_hull() {
        // The region has a hole: the inner component of the band complement
        // touches the region boundary, so it is not relatively compact.
        let region = DomainSpec::annulus(cx(0.0, 0.0), 0.2, 2.0);
        let raster =
            Raster::build(&region, (cx(-2.0, -2.0), cx(2.0, 2.0)), 128, 128).unwrap();
        let band = raster.select(|z| {
            let r = z.norm();
            (0.9..=1.1).contains(&r)
        });
        let hull = hull_compute(&band, &region, &raster).unwrap();
        assert_eq!(hull.filled_components, 0);
        assert_eq!(hull.hull_mask, band);
    }

    #[test]
    fn single_cell_hull_is_itself() {
        let (region, raster) = disk2_raster(64);
        let mut k = vec![false; 64 * 64];
        k[raster.index(32, 32)] = true;
        let hull = hull_compute(&k, &region, &raster).unwrap();
        assert_eq!(hull.hull_mask, k);
        assert_eq!(hull.filled_components, 0);
    }

    #[test]
    fn hull_is_idempotent_and_monotone() {
        let (region, raster) = disk2_raster(96);
        let band = raster.select(|z| (0.9..=1.1).contains(&z.norm()));
        let hull = hull_compute(&band, &region, &raster).unwrap();
        let again = hull_compute(&hull.hull_mask, &region, &raster).unwrap();
        assert_eq!(again.hull_mask, hull.hull_mask, "idempotence");

        let smaller = raster.select(|z| (0.95..=1.05).contains(&z.norm()));
        let hull_small = hull_compute(&smaller, &region, &raster).unwrap();
        for idx in 0..hull.hull_mask.len() {
            assert!(
                !hull_small.hull_mask[idx] || hull.hull_mask[idx],
                "monotonicity violated at {idx}"
            );
        }
    }

    #[test]
    fn unbounded_region_with_k_touching_frame_is_ambiguous() {
        let region = DomainSpec::Plane;
        let raster = Raster::build(&region, (cx(-1.0, -1.0), cx(1.0, 1.0)), 16, 16).unwrap();
        let mut k = vec![false; 256];
        k[0] = true;
        assert!(matches!(hull_compute(&k, &region, &raster), Err(RhoError::HullAmbiguous)));
    }

    #[test]
    fn k_outside_region_rejected() {
        let (region, raster) = disk2_raster(32);
        let k = vec![true; 32 * 32];
        assert!(hull_compute(&k, &region, &raster).is_err());
    }

    #[test]
    fn ct_equality_on_the_band_fixture() {
        let region = DomainSpec::disk(cx(0.0, 0.0), 2.0);
        let spec = ProblemSpec::new(DomainSpec::Plane, region.clone(), FrameSpec::ConstOne);
        let raster =
            Raster::build(&region, (cx(-2.0, -2.0), cx(2.0, 2.0)), 128, 128).unwrap();
        let band = raster.select(|z| (0.9..=1.1).contains(&z.norm()));
        let report = check_ct(
            &band,
            &spec,
            &HullBound::Const(0.85),
            &raster,
            &EngineConfig::default(),
            2e-2,
        )
        .unwrap();
        assert!(report.precondition_ok);
        assert!(report.pass, "report: {report:?}");
        // rho(K) = 2 - 1.1 = 0.9 and the filled hull attains it at |z| = 1.1.
        assert!((report.rho_k.as_f64() - 0.9).abs() < 0.03);
        assert!(report.equality_gap <= 2e-2);
    }

    #[test]
    fn ct_precondition_violation_aborts() {
        let region = DomainSpec::disk(cx(0.0, 0.0), 2.0);
        let spec = ProblemSpec::new(DomainSpec::Plane, region.clone(), FrameSpec::ConstOne);
        let raster = Raster::build(&region, (cx(-2.0, -2.0), cx(2.0, 2.0)), 64, 64).unwrap();
        let band = raster.select(|z| (0.9..=1.1).contains(&z.norm()));
        // Bound 5.0 exceeds rho everywhere on K.
        let report = check_ct(
            &band,
            &spec,
            &HullBound::Const(5.0),
            &raster,
            &EngineConfig::default(),
            1e-2,
        )
        .unwrap();
        assert!(!report.precondition_ok);
        assert!(!report.pass);
    }

    #[test]
    fn runge_fixtures() {
        let ambient = ProblemSpec::new(
            DomainSpec::disk(cx(0.0, 0.0), 2.0),
            DomainSpec::disk(cx(0.0, 0.0), 2.0),
            FrameSpec::ConstOne,
        );
        let k_region = DomainSpec::disk(cx(0.0, 0.0), 0.6);
        let raster = Raster::build(&k_region, (cx(-0.6, -0.6), cx(0.6, 0.6)), 96, 96).unwrap();
        let k = raster.select(|z| z.norm() <= 0.5);
        let omega = DomainSpec::disk(cx(0.0, 0.0), 1.0);
        let cfg = EngineConfig::default();

        let tight = check_runge_condition(
            &omega,
            &DomainSpec::disk(cx(0.0, 0.0), 1.2),
            &k,
            &raster,
            &ambient,
            &cfg,
            0.05,
        )
        .unwrap();
        // 0.2 < 0.5
        assert!(tight.holds, "report: {tight:?}");
        assert!((tight.boundary_sup - 0.2).abs() < 0.01);
        assert!((tight.rho_k - 0.5).abs() < 0.02);

        let loose = check_runge_condition(
            &omega,
            &DomainSpec::disk(cx(0.0, 0.0), 1.6),
            &k,
            &raster,
            &ambient,
            &cfg,
            0.05,
        )
        .unwrap();
        // 0.6 < 0.5 is false
        assert!(!loose.holds, "report: {loose:?}");
        assert!((loose.boundary_sup - 0.6).abs() < 0.01);
    }

    #[test]
    fn pbm_shape() {
        let mask = vec![true, false, false, true];
        let pbm = mask_to_pbm(&mask, 2, 2);
        // Top image row is the j = 1 grid row.
        assert_eq!(pbm, "P1\n2 2\n0 1\n1 0\n");
    }
}
