//! Staged construction of a continuous plurisubharmonic exhaustion
//! surrogate `ψ = max(−log ρ, p)` on a grid.
//!
//! The stages mirror the inductive bookkeeping of the exhaustion proof:
//! `p₁ ≡ C₁` dominates `−log ρ` on the first stage, and each later stage
//! adds `C_ν (|a|² − r_{ν−1}²)⁺` with `C_ν` large enough to dominate on
//! the new annulus. Because the added term vanishes identically inside the
//! previous stage, `ψ_{ν+1} = ψ_ν` there bit-for-bit. The builder verifies
//! that identity and the growth of the outside levels (the exhaustion
//! surrogate); it checks the construction's bookkeeping, not Steinness.

use serde::Serialize;

use crate::continuation::{GridCell, GridField};
use crate::error::RhoError;

#[derive(Debug, Clone, Serialize)]
pub struct ExhaustionField {
    pub nx: usize,
    pub ny: usize,
    /// Final `ψ` per cell; `None` outside the field's domain.
    pub psi: Vec<Option<f64>>,
    /// `−log ρ` per cell (`-∞` where `ρ` is unbounded).
    pub neg_log_rho: Vec<Option<f64>>,
    pub stage_count: usize,
    /// Stage constants `C₁ … C_ν`, strictly increasing and positive.
    pub constants: Vec<f64>,
    /// `min ψ` outside each stage radius: the plateau record showing that
    /// sublevel sets stay inside stage balls.
    pub plateau_levels: Vec<f64>,
    /// `ψ_{ν+1} = ψ_ν` held bit-exactly on every stage-`ν` cell.
    pub stage_consistency_exact: bool,
    /// Plateau levels grow strictly stage over stage.
    pub sublevels_nested: bool,
}

/// Builds the staged exhaustion surrogate from a `ρ` field.
///
/// `psh_fail_mask` marks cells excluded from the domination maxima (the
/// closed set where `−log ρ` is not trusted); the first-stage constant is
/// raised over the immediate neighborhood of such cells so the plateau
/// covers them.
pub fn build_exhaustion(
    field: &GridField,
    psh_fail_mask: &[bool],
    stage_radii: &[f64],
) -> Result<ExhaustionField, RhoError> {
    let n = field.nx * field.ny;
    if psh_fail_mask.len() != n {
        return Err(RhoError::Invalid("fail mask length does not match the grid".into()));
    }
    if stage_radii.len() < 2 {
        return Err(RhoError::Invalid("need at least two stage radii".into()));
    }
    if stage_radii.windows(2).any(|w| w[1] <= w[0]) || stage_radii[0] <= 0.0 {
        return Err(RhoError::NonMonotoneStages);
    }

    let neg_log: Vec<Option<f64>> = field
        .cells
        .iter()
        .map(|c| match c {
            GridCell::Value(v) => Some(-v.ln()),
            GridCell::Unbounded => Some(f64::NEG_INFINITY),
            GridCell::OutsideDomain => None,
        })
        .collect();
    let radius_of = |idx: usize| field.center(idx % field.nx, idx / field.nx).norm();

    // First stage: dominate -log rho on stage-1 cells outside the fail
    // mask, and over the 1-ring neighborhood of failed cells so the
    // plateau constant covers that set too.
    let mut c1 = f64::NEG_INFINITY;
    for idx in 0..n {
        let Some(v) = neg_log[idx] else { continue };
        if radius_of(idx) >= stage_radii[0] {
            continue;
        }
        if v == f64::INFINITY {
            return Err(RhoError::UnboundedInStage { stage: 1 });
        }
        if !psh_fail_mask[idx] {
            c1 = c1.max(v);
        } else {
            for nb in neighbors8(idx, field.nx, field.ny) {
                if let Some(w) = neg_log[nb] {
                    c1 = c1.max(w);
                }
            }
        }
    }
    if c1 == f64::NEG_INFINITY {
        c1 = 0.0;
    }
    let c1 = c1 + 1.0;

    let (dx, dy) = field.cell_size();
    let cell_diag = (dx * dx + dy * dy).sqrt();

    let mut constants = vec![c1];
    let mut p: Vec<Option<f64>> =
        neg_log.iter().map(|v| v.map(|_| c1)).collect();
    let mut psi: Vec<Option<f64>> = (0..n)
        .map(|idx| neg_log[idx].map(|v| v.max(p[idx].unwrap())))
        .collect();
    let mut stage_consistency_exact = true;

    for nu in 1..stage_radii.len() {
        let r_prev = stage_radii[nu - 1];
        let r_here = stage_radii[nu];
        // Required slope over the new annulus; the denominator is
        // regularized at collar cells where |a| barely exceeds the previous
        // radius (a grid cell cannot witness an arbitrarily thin margin).
        let denom_floor = cell_diag * (2.0 * r_prev + cell_diag);
        let mut needed = 0.0f64;
        for idx in 0..n {
            let (Some(v), Some(p_prev)) = (neg_log[idx], p[idx]) else { continue };
            if psh_fail_mask[idx] {
                continue;
            }
            let r = radius_of(idx);
            if r < r_prev || r >= r_here {
                continue;
            }
            if v == f64::INFINITY {
                return Err(RhoError::UnboundedInStage { stage: nu + 1 });
            }
            let denom = (r * r - r_prev * r_prev).max(denom_floor);
            needed = needed.max((v - p_prev) / denom);
        }
        let c_nu = needed.max(*constants.last().unwrap()) + 1.0;
        constants.push(c_nu);

        let mut psi_next = psi.clone();
        for idx in 0..n {
            let Some(p_prev) = p[idx] else { continue };
            let r = radius_of(idx);
            let bump = (r * r - r_prev * r_prev).max(0.0);
            let p_new = p_prev + c_nu * bump;
            p[idx] = Some(p_new);
            psi_next[idx] = neg_log[idx].map(|v| v.max(p_new));
        }
        // The previous-stage cells must be untouched, exactly.
        for idx in 0..n {
            if radius_of(idx) < r_prev && psi_next[idx] != psi[idx] {
                stage_consistency_exact = false;
            }
        }
        psi = psi_next;
    }

    let mut plateau_levels = Vec::with_capacity(stage_radii.len());
    for &r in stage_radii {
        let level = (0..n)
            .filter(|&idx| radius_of(idx) >= r)
            .filter_map(|idx| psi[idx])
            .fold(f64::INFINITY, f64::min);
        plateau_levels.push(level);
    }
    let finite_levels: Vec<f64> =
        plateau_levels.iter().copied().filter(|l| l.is_finite()).collect();
    let sublevels_nested = finite_levels.windows(2).all(|w| w[1] > w[0]);

    Ok(ExhaustionField {
        nx: field.nx,
        ny: field.ny,
        psi,
        neg_log_rho: neg_log,
        stage_count: stage_radii.len(),
        constants,
        plateau_levels,
        stage_consistency_exact,
        sublevels_nested,
    })
}

fn neighbors8(idx: usize, nx: usize, ny: usize) -> Vec<usize> {
    let (i, j) = ((idx % nx) as isize, (idx / nx) as isize);
    let mut out = Vec::with_capacity(8);
    for dj in -1..=1 {
        for di in -1..=1 {
            if di == 0 && dj == 0 {
                continue;
            }
            let (ni, nj) = (i + di, j + dj);
            if ni >= 0 && nj >= 0 && (ni as usize) < nx && (nj as usize) < ny {
                out.push(nj as usize * nx + ni as usize);
            }
        }
    }
    out
}

impl ExhaustionField {
    /// `ψ ≥ −log ρ` pointwise (true by construction; exposed for tests).
    pub fn dominates_neg_log_rho(&self) -> bool {
        self.psi
            .iter()
            .zip(&self.neg_log_rho)
            .all(|(p, v)| match (p, v) {
                (Some(p), Some(v)) => p >= v,
                (None, None) => true,
                _ => false,
            })
    }
}
