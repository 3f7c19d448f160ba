//! Plane domains and their finite Cartesian products.

use serde::{Deserialize, Serialize};

use crate::error::RhoError;
use crate::types::Cx;

/// Relative width of the polygon edge collar: points closer to an edge than
/// `POLYGON_COLLAR_REL` times the bounding-box diameter count as boundary, so
/// open-set membership has a deterministic tie-break on edges.
pub const POLYGON_COLLAR_REL: f64 = 1e-12;

/// An open subset of the plane, or a finite product of such.
///
/// All variants are open sets. Product factors must be one-dimensional;
/// nested products are flattened on construction of problem specs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DomainSpec {
    /// The whole plane.
    Plane,
    /// The plane with the origin removed.
    PuncturedPlane,
    Disk {
        center: Cx,
        radius: f64,
    },
    Annulus {
        center: Cx,
        r_in: f64,
        r_out: f64,
    },
    /// `{z : Re(conj(direction) · (z − base)) > 0}`; `direction` is the
    /// inward unit normal of the boundary line.
    HalfPlane {
        base: Cx,
        direction: Cx,
    },
    /// Simple polygon interior, even–odd rule, vertices in order.
    Polygon {
        vertices: Vec<Cx>,
    },
    Product {
        factors: Vec<DomainSpec>,
    },
}

impl DomainSpec {
    pub fn disk(center: Cx, radius: f64) -> Self {
        DomainSpec::Disk { center, radius }
    }

    pub fn annulus(center: Cx, r_in: f64, r_out: f64) -> Self {
        DomainSpec::Annulus { center, r_in, r_out }
    }

    /// Number of complex coordinates a point of this domain carries.
    pub fn dim(&self) -> usize {
        match self {
            DomainSpec::Product { factors } => factors.iter().map(|f| f.dim()).sum(),
            _ => 1,
        }
    }

    pub fn factors(&self) -> &[DomainSpec] {
        match self {
            DomainSpec::Product { factors } => factors,
            _ => std::slice::from_ref(self),
        }
    }

    /// Checks the structural invariants of the variant itself.
    pub fn check_well_formed(&self) -> Result<(), RhoError> {
        match self {
            DomainSpec::Disk { radius, center } => {
                if !(radius.is_finite() && *radius > 0.0) || !center.is_finite() {
                    return Err(RhoError::Invalid(format!("disk radius {radius} must be positive")));
                }
            }
            DomainSpec::Annulus { r_in, r_out, center } => {
                if !(r_in.is_finite() && *r_in > 0.0 && r_out.is_finite() && r_out > r_in)
                    || !center.is_finite()
                {
                    return Err(RhoError::Invalid(format!(
                        "annulus radii must satisfy 0 < r_in < r_out, got ({r_in}, {r_out})"
                    )));
                }
            }
            DomainSpec::HalfPlane { direction, base } => {
                if !base.is_finite() || (direction.norm() - 1.0).abs() > 1e-9 {
                    return Err(RhoError::Invalid(
                        "half-plane direction must be a unit vector".into(),
                    ));
                }
            }
            DomainSpec::Polygon { vertices } => {
                if vertices.len() < 3 {
                    return Err(RhoError::Invalid("polygon needs at least 3 vertices".into()));
                }
                if vertices.iter().any(|v| !v.is_finite()) {
                    return Err(RhoError::Invalid("polygon vertex is not finite".into()));
                }
                if polygon_self_intersects(vertices) {
                    return Err(RhoError::Invalid("polygon must be simple".into()));
                }
            }
            DomainSpec::Product { factors } => {
                if factors.is_empty() {
                    return Err(RhoError::Invalid("product needs at least one factor".into()));
                }
                for f in factors {
                    if matches!(f, DomainSpec::Product { .. }) {
                        return Err(RhoError::Invalid(
                            "product factors must be one-dimensional; flatten nested products"
                                .into(),
                        ));
                    }
                    f.check_well_formed()?;
                }
            }
            DomainSpec::Plane | DomainSpec::PuncturedPlane => {}
        }
        Ok(())
    }

    /// Open-set membership for a one-dimensional domain.
    pub fn contains(&self, z: Cx) -> bool {
        debug_assert!(!matches!(self, DomainSpec::Product { .. }), "use contains_point for products");
        match self {
            DomainSpec::Plane => true,
            DomainSpec::PuncturedPlane => z.re != 0.0 || z.im != 0.0,
            DomainSpec::Disk { center, radius } => (z - center).norm() < *radius,
            DomainSpec::Annulus { center, r_in, r_out } => {
                let r = (z - center).norm();
                *r_in < r && r < *r_out
            }
            DomainSpec::HalfPlane { base, direction } => {
                (direction.conj() * (z - base)).re > 0.0
            }
            DomainSpec::Polygon { vertices } => {
                let collar = POLYGON_COLLAR_REL * polygon_bbox_diameter(vertices);
                point_in_polygon_even_odd(vertices, z)
                    && distance_to_polygon_edges(vertices, z) > collar
            }
            DomainSpec::Product { .. } => unreachable!(),
        }
    }

    /// Membership for a tuple of coordinates; the slice length must match
    /// the domain dimension.
    pub fn contains_point(&self, z: &[Cx]) -> Result<bool, RhoError> {
        if z.len() != self.dim() {
            return Err(RhoError::DimensionMismatch { expected: self.dim(), got: z.len() });
        }
        match self {
            DomainSpec::Product { factors } => {
                let mut offset = 0;
                for f in factors {
                    let d = f.dim();
                    if !f.contains_point(&z[offset..offset + d])? {
                        return Ok(false);
                    }
                    offset += d;
                }
                Ok(true)
            }
            _ => Ok(self.contains(z[0])),
        }
    }

    /// Euclidean distance from an interior point to the complement;
    /// `+∞` for the whole plane, the minimum over factors for products.
    ///
    /// Errors if the point is not inside the domain.
    pub fn boundary_gap(&self, z: Cx) -> Result<f64, RhoError> {
        if matches!(self, DomainSpec::Product { .. }) {
            return Err(RhoError::DimensionMismatch { expected: self.dim(), got: 1 });
        }
        if !self.contains(z) {
            return Err(RhoError::PointOutsideRegion { point: z });
        }
        Ok(self.interior_gap(z))
    }

    /// `boundary_gap` over coordinate tuples.
    pub fn boundary_gap_point(&self, z: &[Cx]) -> Result<f64, RhoError> {
        if z.len() != self.dim() {
            return Err(RhoError::DimensionMismatch { expected: self.dim(), got: z.len() });
        }
        match self {
            DomainSpec::Product { factors } => {
                let mut gap = f64::INFINITY;
                let mut offset = 0;
                for f in factors {
                    let d = f.dim();
                    gap = gap.min(f.boundary_gap_point(&z[offset..offset + d])?);
                    offset += d;
                }
                Ok(gap)
            }
            _ => self.boundary_gap(z[0]),
        }
    }

    /// Distance to the complement without the membership precondition:
    /// returns 0 for points outside. Used as a proximity indicator inside
    /// the continuation engine.
    pub(crate) fn interior_gap(&self, z: Cx) -> f64 {
        match self {
            DomainSpec::Plane => f64::INFINITY,
            DomainSpec::PuncturedPlane => z.norm(),
            DomainSpec::Disk { center, radius } => (radius - (z - center).norm()).max(0.0),
            DomainSpec::Annulus { center, r_in, r_out } => {
                let r = (z - center).norm();
                (r - r_in).min(r_out - r).max(0.0)
            }
            DomainSpec::HalfPlane { base, direction } => {
                (direction.conj() * (z - base)).re.max(0.0)
            }
            DomainSpec::Polygon { vertices } => {
                if point_in_polygon_even_odd(vertices, z) {
                    distance_to_polygon_edges(vertices, z)
                } else {
                    0.0
                }
            }
            DomainSpec::Product { .. } => unreachable!("interior_gap is one-dimensional"),
        }
    }

    /// Isolated points of the complement. Continuation cannot detect these
    /// by membership flips (the complement has empty interior there), so the
    /// engine tracks proximity to them explicitly.
    pub(crate) fn punctures(&self) -> Vec<Cx> {
        match self {
            DomainSpec::PuncturedPlane => vec![Cx::new(0.0, 0.0)],
            _ => Vec::new(),
        }
    }

    /// Representative points of complement components that a uniform ray fan
    /// can miss entirely (an annulus hole subtends an arbitrarily small
    /// angle from a distant basepoint). Fan refinement steers rays toward
    /// these targets.
    pub(crate) fn complement_targets(&self) -> Vec<Cx> {
        match self {
            DomainSpec::PuncturedPlane => vec![Cx::new(0.0, 0.0)],
            DomainSpec::Annulus { center, .. } => vec![*center],
            _ => Vec::new(),
        }
    }

    /// Width of the complement component nearest to `z`: the scale a step
    /// must resolve so the trajectory cannot jump over it. Unbounded solid
    /// complements (disk exteriors, half-planes) return infinity — their
    /// crossings are caught by membership flips at any step size. The
    /// puncture returns zero: only the proximity machinery can see it.
    pub(crate) fn complement_feature_width(&self, z: Cx) -> f64 {
        match self {
            DomainSpec::PuncturedPlane => 0.0,
            DomainSpec::Annulus { center, r_in, r_out } => {
                let r = (z - center).norm();
                if r - r_in < r_out - r {
                    2.0 * r_in
                } else {
                    f64::INFINITY
                }
            }
            _ => f64::INFINITY,
        }
    }

    /// True when the domain is a bounded subset of the plane.
    pub fn is_bounded(&self) -> bool {
        match self {
            DomainSpec::Disk { .. } | DomainSpec::Annulus { .. } | DomainSpec::Polygon { .. } => {
                true
            }
            DomainSpec::Product { factors } => factors.iter().all(|f| f.is_bounded()),
            _ => false,
        }
    }

    /// Evenly spaced samples of the topological boundary, at most `spacing`
    /// apart along each boundary component. Only bounded one-dimensional
    /// domains have a finite boundary to discretize.
    pub fn boundary_points(&self, spacing: f64) -> Result<Vec<Cx>, RhoError> {
        let circle = |center: Cx, r: f64, out: &mut Vec<Cx>| {
            let n = ((2.0 * std::f64::consts::PI * r / spacing).ceil() as usize).max(16);
            for j in 0..n {
                let th = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
                out.push(center + Cx::from_polar(r, th));
            }
        };
        let mut pts = Vec::new();
        match self {
            DomainSpec::Disk { center, radius } => circle(*center, *radius, &mut pts),
            DomainSpec::Annulus { center, r_in, r_out } => {
                circle(*center, *r_in, &mut pts);
                circle(*center, *r_out, &mut pts);
            }
            DomainSpec::Polygon { vertices } => {
                let n = vertices.len();
                for i in 0..n {
                    let a = vertices[i];
                    let b = vertices[(i + 1) % n];
                    let len = (b - a).norm();
                    let m = ((len / spacing).ceil() as usize).max(2);
                    for j in 0..m {
                        pts.push(a + (b - a) * (j as f64 / m as f64));
                    }
                }
            }
            _ => {
                return Err(RhoError::Invalid(
                    "boundary discretization requires a bounded plane domain".into(),
                ))
            }
        }
        Ok(pts)
    }

    /// Deterministic interior sample points, used for the dense part of
    /// region-in-ambient validation.
    pub(crate) fn interior_samples(&self, per_axis: usize) -> Vec<Cx> {
        let (lo, hi) = match self.sample_bbox() {
            Some(b) => b,
            None => (Cx::new(-2.0, -2.0), Cx::new(2.0, 2.0)),
        };
        let mut out = Vec::new();
        for j in 0..per_axis {
            for i in 0..per_axis {
                let x = lo.re + (hi.re - lo.re) * (i as f64 + 0.5) / per_axis as f64;
                let y = lo.im + (hi.im - lo.im) * (j as f64 + 0.5) / per_axis as f64;
                let z = Cx::new(x, y);
                if self.contains(z) {
                    out.push(z);
                }
            }
        }
        out
    }

    fn sample_bbox(&self) -> Option<(Cx, Cx)> {
        match self {
            DomainSpec::Disk { center, radius } => Some((
                center - Cx::new(*radius, *radius),
                center + Cx::new(*radius, *radius),
            )),
            DomainSpec::Annulus { center, r_out, .. } => Some((
                center - Cx::new(*r_out, *r_out),
                center + Cx::new(*r_out, *r_out),
            )),
            DomainSpec::Polygon { vertices } => {
                let (mut x0, mut y0, mut x1, mut y1) =
                    (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
                for v in vertices {
                    x0 = x0.min(v.re);
                    y0 = y0.min(v.im);
                    x1 = x1.max(v.re);
                    y1 = y1.max(v.im);
                }
                Some((Cx::new(x0, y0), Cx::new(x1, y1)))
            }
            _ => None,
        }
    }

    /// Exact subset test between symbolic variants where one exists,
    /// otherwise a dense-sampling fallback.
    pub fn is_subset_of(&self, ambient: &DomainSpec) -> bool {
        if self == ambient {
            return true;
        }
        match (self, ambient) {
            (_, DomainSpec::Plane) => true,
            // Region avoids the puncture iff it does not contain 0; the
            // symbolic variants make this exact except for polygons, where
            // the collar rule already decides membership of the origin.
            (region, DomainSpec::PuncturedPlane) => {
                !region_may_contain(region, Cx::new(0.0, 0.0))
            }
            (DomainSpec::Disk { center, radius }, DomainSpec::Disk { center: c2, radius: r2 }) => {
                (center - c2).norm() + radius <= *r2
            }
            (
                DomainSpec::Annulus { center, r_out, .. },
                DomainSpec::Disk { center: c2, radius: r2 },
            ) => (center - c2).norm() + r_out <= *r2,
            (
                DomainSpec::Disk { center, radius },
                DomainSpec::Annulus { center: c2, r_in, r_out },
            ) => {
                let d = (center - c2).norm();
                d - radius >= *r_in && d + radius <= *r_out
            }
            (
                DomainSpec::Annulus { center, r_in, r_out },
                DomainSpec::Annulus { center: c2, r_in: i2, r_out: o2 },
            ) => {
                let d = (center - c2).norm();
                d + r_out <= *o2 && r_in - d >= *i2
            }
            (DomainSpec::Product { factors }, DomainSpec::Product { factors: af }) => {
                factors.len() == af.len()
                    && factors.iter().zip(af).all(|(r, a)| r.is_subset_of(a))
            }
            (region, ambient) => {
                // Dense fallback: interior grid plus slightly-shrunk boundary.
                region
                    .interior_samples(24)
                    .into_iter()
                    .all(|z| ambient.contains(z))
            }
        }
    }
}

fn region_may_contain(region: &DomainSpec, p: Cx) -> bool {
    match region {
        DomainSpec::Polygon { .. } => region.contains(p) || region.interior_gap(p) > 0.0,
        DomainSpec::Product { .. } => true,
        _ => region.contains(p),
    }
}

fn polygon_bbox_diameter(vertices: &[Cx]) -> f64 {
    let (mut x0, mut y0, mut x1, mut y1) =
        (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for v in vertices {
        x0 = x0.min(v.re);
        y0 = y0.min(v.im);
        x1 = x1.max(v.re);
        y1 = y1.max(v.im);
    }
    ((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt()
}

/// Even–odd crossing rule against a horizontal ray toward `+x`.
fn point_in_polygon_even_odd(vertices: &[Cx], z: Cx) -> bool {
    let n = vertices.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (vi, vj) = (vertices[i], vertices[j]);
        if (vi.im > z.im) != (vj.im > z.im) {
            let x_cross = vi.re + (z.im - vi.im) / (vj.im - vi.im) * (vj.re - vi.re);
            if z.re < x_cross {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

fn distance_to_polygon_edges(vertices: &[Cx], z: Cx) -> f64 {
    let n = vertices.len();
    let mut best = f64::INFINITY;
    for i in 0..n {
        best = best.min(point_segment_distance(z, vertices[i], vertices[(i + 1) % n]));
    }
    best
}

fn point_segment_distance(p: Cx, a: Cx, b: Cx) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

fn segments_properly_intersect(a: Cx, b: Cx, c: Cx, d: Cx) -> bool {
    let cross = |u: Cx, v: Cx| u.re * v.im - u.im * v.re;
    let d1 = cross(b - a, c - a);
    let d2 = cross(b - a, d - a);
    let d3 = cross(d - c, a - c);
    let d4 = cross(d - c, b - c);
    (d1 * d2 < 0.0) && (d3 * d4 < 0.0)
}

fn polygon_self_intersects(vertices: &[Cx]) -> bool {
    let n = vertices.len();
    for i in 0..n {
        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
        for j in i + 1..n {
            // Skip edges sharing a vertex.
            if j == i || (j + 1) % n == i || (i + 1) % n == j {
                continue;
            }
            let (c, d) = (vertices[j], vertices[(j + 1) % n]);
            if segments_properly_intersect(a, b, c, d) {
                return true;
            }
        }
    }
    false
}
