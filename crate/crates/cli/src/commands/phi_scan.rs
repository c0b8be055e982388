use clap::Args;
use hypbisect::hcore::{geodesic_through, FermiCoords, Geodesic};
use hypbisect::squarehyp::{level, PointPair};
use hypbisect::verify::FORBIDDEN_LEVEL;
use hypbisect::GeomError;
use serde_json::json;

use super::{linspace, parse_xyxy};
use crate::model::Model;
use crate::output::{json, num, write_atomic, Csv};
use crate::{CliError, Format, RunConfig};

#[derive(Args, Debug)]
pub struct PhiScanArgs {
    /// Arclengths of x, y, u, v on the axis.
    #[arg(long, value_parser = parse_xyxy, allow_hyphen_values = true, default_value = "1,-1,3,-2")]
    at: [f64; 4],
    /// Foot of the perpendicular on the axis.
    #[arg(long, allow_hyphen_values = true, default_value_t = -1.5)]
    w: f64,
    /// Distances K from the axis. Defaults to 0, 0.02, ..., 0.4.
    #[arg(long, value_delimiter = ',')]
    k: Vec<f64>,
    /// Axis through two model points, as `a,b,c,d`. Defaults to the real diameter.
    #[arg(long, value_parser = parse_xyxy, allow_hyphen_values = true)]
    axis: Option<[f64; 4]>,
}

#[derive(Debug, PartialEq, Eq)]
enum Monotone {
    Decreasing,
    Increasing,
    Constant,
    None,
}

impl Monotone {
    fn name(&self) -> &'static str {
        match self {
            Monotone::Decreasing => "strictly-decreasing",
            Monotone::Increasing => "strictly-increasing",
            Monotone::Constant => "constant",
            Monotone::None => "none",
        }
    }
}

fn monotone(values: &[f64], tol: f64) -> Monotone {
    let d: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    if d.is_empty() {
        Monotone::None
    } else if d.iter().all(|x| x.abs() <= tol) {
        Monotone::Constant
    } else if d.iter().all(|&x| x < 0.0) {
        Monotone::Decreasing
    } else if d.iter().all(|&x| x > 0.0) {
        Monotone::Increasing
    } else {
        Monotone::None
    }
}

/// The displayed quotient `(A^2 - B^2) / (C^2 - D^2)` at the foot of the perpendicular.
fn axis_quotient(at: [f64; 4], w: f64) -> f64 {
    let [a, b, c, d] = at.map(|s| (s - w).abs());
    (a * a - b * b) / (c * c - d * d)
}

/// Default `--tol`: 1e-12, the change in Φ below which the scan counts as constant.
pub fn run(cfg: &RunConfig, args: &PhiScanArgs) -> Result<bool, CliError> {
    let tol = cfg.tol_or(1e-12)?;
    let ks = if args.k.is_empty() {
        linspace(0.0, 0.4, 21)
    } else {
        args.k.clone()
    };
    if ks.iter().any(|k| !k.is_finite()) || !args.w.is_finite() {
        return Err(CliError::Usage("K grid and w must be finite".into()));
    }
    let [a, b, c, d] = args.axis.unwrap_or(match cfg.model {
        Model::Disk => [0.0, 0.0, 0.5, 0.0],
        Model::HalfPlane => [0.0, 1.0, 0.0, 2.0],
    });
    let axis: Geodesic = geodesic_through(&cfg.point([a, b])?, &cfg.point([c, d])?)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    // Two pairs rather than an OrderedQuadruple: equal pairs are a valid scan here.
    let [x, y, u, v] = args.at.map(|s| axis.point_at(s));
    let xy = PointPair::new(x, y).map_err(|e| CliError::Usage(e.to_string()))?;
    let uv = PointPair::new(u, v).map_err(|e| CliError::Usage(e.to_string()))?;
    let quotient_at = |k: f64| -> Result<f64, GeomError> {
        let p = axis.fermi_point(FermiCoords::new(args.w, k));
        let den = level(&uv, &p);
        if den.abs() <= FORBIDDEN_LEVEL {
            return Err(GeomError::OnForbiddenLocus { level: den });
        }
        Ok(level(&xy, &p) / den)
    };

    let rows: Vec<(f64, Result<f64, GeomError>)> =
        ks.iter().map(|&k| (k, quotient_at(k))).collect();
    let valid: Vec<f64> = rows
        .iter()
        .filter_map(|(_, r)| r.as_ref().ok().copied())
        .collect();
    let trend = monotone(&valid, tol);
    let forbidden = rows.iter().filter(|(_, r)| r.is_err()).count();
    let quotient = axis_quotient(args.at, args.w);

    let mut prev: Option<f64> = None;
    let mut table = Vec::new();
    for (k, r) in &rows {
        match r {
            Ok(v) => {
                table.push((*k, Some(*v), prev.map(|p| v - p), "ok".to_string()));
                prev = Some(*v);
            }
            Err(GeomError::OnForbiddenLocus { .. }) => {
                table.push((*k, None, None, "forbidden-locus".into()))
            }
            Err(e) => table.push((*k, None, None, e.to_string())),
        }
    }
    match cfg.format {
        Format::Csv => {
            let mut csv = Csv::new(&["K", "Phi", "first_difference", "status"]);
            csv.meta("seed", cfg.seed)
                .meta("tolerance", num(tol))
                .meta("forbidden_level", num(FORBIDDEN_LEVEL))
                .meta("at", args.at.map(num).join(","))
                .meta("w", num(args.w))
                .meta("axis_quotient", num(quotient))
                .meta("monotone", trend.name());
            for (k, v, d, status) in &table {
                let f = |x: &Option<f64>| num(x.unwrap_or(f64::NAN));
                csv.row(vec![num(*k), f(v), f(d), status.clone()]);
            }
            write_atomic(&cfg.out, "phi_scan.csv", &csv.render())?;
        }
        Format::Json => {
            let doc = json!({
                "seed": cfg.seed,
                "tolerance": tol,
                "forbidden_level": FORBIDDEN_LEVEL,
                "at": args.at,
                "w": args.w,
                "axis_quotient": quotient,
                "monotone": trend.name(),
                "rows": table.iter().map(|(k, v, d, s)| json!({
                    "K": k, "Phi": v, "first_difference": d, "status": s,
                })).collect::<Vec<_>>(),
            });
            write_atomic(&cfg.out, "phi_scan.json", &json(&doc))?;
        }
    }
    println!(
        "{} rows, {forbidden} on the forbidden locus, monotone: {}, axis quotient {quotient}",
        rows.len(),
        trend.name()
    );
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trend_detection() {
        assert_eq!(monotone(&[3.0, 2.0, 1.0], 1e-12), Monotone::Decreasing);
        assert_eq!(monotone(&[1.0, 2.0, 3.0], 1e-12), Monotone::Increasing);
        assert_eq!(monotone(&[1.0, 1.0, 1.0], 1e-12), Monotone::Constant);
        assert_eq!(monotone(&[1.0, 2.0, 1.0], 1e-12), Monotone::None);
    }

    #[test]
    fn quotient_of_the_example_ordering() {
        assert!((axis_quotient([1.0, -1.0, 3.0, -2.0], -1.5) - 0.3).abs() < 1e-15);
        assert_eq!(axis_quotient([1.0, -1.0, 1.0, -1.0], 0.3), 1.0);
    }
}
