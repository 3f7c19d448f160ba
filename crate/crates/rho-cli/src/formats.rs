//! File formats: the field CSV, the grayscale PGM (P5) of `−log ρ`, and a
//! sidecar describing the clamp constants.

use serde::Serialize;

use rho_core::continuation::{GridCell, GridField};

/// Renders the field as CSV with columns exactly `re,im,rho,status`.
///
/// The manifest hash rides in a leading `#` comment line so the file is
/// self-identifying without disturbing the column contract. Every number is
/// finite except the literal `inf` for unbounded cells; outside cells carry
/// `0` with status `outside`.
pub fn field_to_csv(field: &GridField, manifest_hash: &str) -> String {
    let mut out = String::new();
    out.push_str(&format!("# manifest_sha256={manifest_hash}\n"));
    out.push_str("re,im,rho,status\n");
    for j in 0..field.ny {
        for i in 0..field.nx {
            let c = field.center(i, j);
            let (rho, status) = match field.get(i, j) {
                GridCell::Value(v) => (format!("{v}"), "ok"),
                GridCell::Unbounded => ("inf".to_string(), "unbounded"),
                GridCell::OutsideDomain => ("0".to_string(), "outside"),
            };
            out.push_str(&format!("{},{},{},{}\n", c.re, c.im, rho, status));
        }
    }
    out
}

/// Clamp constants used by the PGM mapping, recorded in the sidecar.
#[derive(Debug, Clone, Serialize)]
pub struct PgmScale {
    /// Smallest finite `−log ρ` over in-region cells; maps to gray 255.
    pub neg_log_rho_min: f64,
    /// Largest finite `−log ρ`; maps to gray 0.
    pub neg_log_rho_max: f64,
    /// Gray value used for out-of-region cells.
    pub outside_gray: u8,
}

/// Renders clamped `−log ρ` as a binary 8-bit PGM (P5), bright where `ρ`
/// is large. Unbounded cells clamp to the minimum (brightest); the top
/// image row is the largest-imaginary-part grid row.
pub fn field_to_pgm(field: &GridField) -> (Vec<u8>, PgmScale) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for cell in &field.cells {
        if let GridCell::Value(v) = cell {
            let nl = -v.ln();
            lo = lo.min(nl);
            hi = hi.max(nl);
        }
    }
    if !lo.is_finite() || !hi.is_finite() {
        lo = 0.0;
        hi = 0.0;
    }
    let span = hi - lo;
    let scale = PgmScale { neg_log_rho_min: lo, neg_log_rho_max: hi, outside_gray: 0 };

    let mut bytes = Vec::with_capacity(field.nx * field.ny + 32);
    bytes.extend_from_slice(format!("P5\n{} {}\n255\n", field.nx, field.ny).as_bytes());
    for j in (0..field.ny).rev() {
        for i in 0..field.nx {
            let gray = match field.get(i, j) {
                GridCell::Value(v) => {
                    let nl = -v.ln();
                    if span > 0.0 {
                        (255.0 * (1.0 - (nl - lo) / span)).round().clamp(0.0, 255.0) as u8
                    } else {
                        255
                    }
                }
                GridCell::Unbounded => 255,
                GridCell::OutsideDomain => scale.outside_gray,
            };
            bytes.push(gray);
        }
    }
    (bytes, scale)
}
