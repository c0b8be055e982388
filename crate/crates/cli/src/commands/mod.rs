pub mod phi_scan;
pub mod plot;
pub mod recover;
pub mod trace;
pub mod verify;

use hypbisect::hcore::HPoint;
use serde_json::{json, Value};

use crate::model::Model;

/// Parses `a,b,...` into exactly `N` numbers.
pub fn parse_numbers<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    v.try_into()
        .map_err(|v: Vec<f64>| format!("expected {N} comma-separated numbers, got {}", v.len()))
}

pub fn parse_xy(s: &str) -> Result<[f64; 2], String> {
    parse_numbers::<2>(s)
}

pub fn parse_xyxy(s: &str) -> Result<[f64; 4], String> {
    parse_numbers::<4>(s)
}

/// A point in every representation the tools emit.
pub fn point_json(p: &HPoint) -> Value {
    json!({
        "hyperboloid": p.coords(),
        "disk": Model::Disk.project(p),
        "half_plane": Model::HalfPlane.project(p),
    })
}

/// `n` equally spaced values from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}
