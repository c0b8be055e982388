use clap::Args;
use hypbisect::squarehyp::{solve_on_perpendicular, LevelSet, PointPair};
use hypbisect::GeomError;
use serde_json::json;

use super::{parse_xy, point_json};
use crate::output::{json, num, write_atomic, Csv};
use crate::{CliError, Format, RunConfig};

pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Args, Debug)]
pub struct TraceArgs {
    /// First point of the pair, in model coordinates.
    #[arg(long, value_parser = parse_xy, allow_hyphen_values = true)]
    x: [f64; 2],
    /// Second point of the pair, in model coordinates.
    #[arg(long, value_parser = parse_xy, allow_hyphen_values = true)]
    y: [f64; 2],
    /// Levels to trace.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        default_value = "-1,0,1"
    )]
    k: Vec<f64>,
    /// Largest perpendicular offset from the axis.
    #[arg(long, default_value_t = 3.0)]
    t_max: f64,
    /// Samples per side; each curve has 2n+1 rows.
    #[arg(long, default_value_t = 50)]
    n: usize,
}

struct Row {
    t: f64,
    fermi: Option<(f64, [f64; 2], f64)>,
    error: Option<String>,
}

fn trace_rows(pair: &PointPair, k: f64, t_max: f64, n: usize, cfg: &RunConfig) -> Vec<Row> {
    let ls = LevelSet::new(*pair, k);
    (0..=2 * n)
        .map(|j| {
            let t = t_max * (j as f64 - n as f64) / n as f64;
            match solve_on_perpendicular(pair, t, k) {
                Ok(f) => {
                    let p = pair.axis().fermi_point(f);
                    Row {
                        t,
                        fermi: Some((f.s, cfg.model.project(&p), ls.residual(&p))),
                        error: None,
                    }
                }
                Err(e @ GeomError::BracketFailure { .. }) => Row {
                    t,
                    fermi: None,
                    error: Some(format!("bracket-failure: {e}")),
                },
                Err(e) => Row {
                    t,
                    fermi: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

/// Default `--tol`: 1e-10 on the level residual.
pub fn run(cfg: &RunConfig, args: &TraceArgs) -> Result<bool, CliError> {
    let tol = cfg.tol_or(DEFAULT_TOL)?;
    if args.n < 1 || !(args.t_max > 0.0 && args.t_max.is_finite()) {
        return Err(CliError::Usage(
            "need --n >= 1 and a positive finite --t-max".into(),
        ));
    }
    if args.k.is_empty() || args.k.iter().any(|k| !k.is_finite()) {
        return Err(CliError::Usage("--k needs finite levels".into()));
    }
    let (x, y) = (cfg.point(args.x)?, cfg.point(args.y)?);
    let pair = PointPair::new(x, y).map_err(|e| CliError::Usage(e.to_string()))?;

    let mut ok = true;
    let mut curves = Vec::new();
    for (i, &k) in args.k.iter().enumerate() {
        let rows = trace_rows(&pair, k, args.t_max, args.n, cfg);
        let failures = rows.iter().filter(|r| r.error.is_some()).count();
        let worst = rows
            .iter()
            .filter_map(|r| r.fermi.map(|f| f.2.abs()))
            .fold(0.0, f64::max);
        let curve_ok = failures == 0 && worst <= tol;
        ok &= curve_ok;
        println!(
            "k = {k}: {} rows, max residual {worst:.3e}, {failures} failures{}",
            rows.len(),
            if curve_ok { "" } else { " (FAIL)" }
        );
        match cfg.format {
            Format::Csv => {
                let mut csv =
                    Csv::new(&["t", "s", "model_x", "model_y", "level_residual", "status"]);
                csv.meta("seed", cfg.seed)
                    .meta("tolerance", num(tol))
                    .meta("model", cfg.model.name())
                    .meta("x", format!("{},{}", num(args.x[0]), num(args.x[1])))
                    .meta("y", format!("{},{}", num(args.y[0]), num(args.y[1])))
                    .meta("k", num(k))
                    .meta("max_level_residual", num(worst));
                for r in &rows {
                    let cells = match (&r.fermi, &r.error) {
                        (Some((s, z, res)), _) => {
                            vec![
                                num(r.t),
                                num(*s),
                                num(z[0]),
                                num(z[1]),
                                num(*res),
                                "ok".into(),
                            ]
                        }
                        (None, e) => {
                            let nan = num(f64::NAN);
                            let status = e
                                .as_deref()
                                .unwrap_or("error")
                                .split(':')
                                .next()
                                .unwrap()
                                .to_string();
                            vec![num(r.t), nan.clone(), nan.clone(), nan.clone(), nan, status]
                        }
                    };
                    csv.row(cells);
                }
                write_atomic(&cfg.out, &format!("trace_{i:02}.csv"), &csv.render())?;
            }
            Format::Json => curves.push(json!({
                "k": k,
                "max_level_residual": worst,
                "rows": rows.iter().map(|r| json!({
                    "t": r.t,
                    "s": r.fermi.map(|f| f.0),
                    "model": r.fermi.map(|f| f.1),
                    "level_residual": r.fermi.map(|f| f.2),
                    "error": r.error,
                })).collect::<Vec<_>>(),
            })),
        }
    }
    if cfg.format == Format::Json {
        let doc = json!({
            "seed": cfg.seed,
            "tolerance": tol,
            "model": cfg.model.name(),
            "x": point_json(pair.x()),
            "y": point_json(pair.y()),
            "curves": curves,
        });
        write_atomic(&cfg.out, "trace.json", &json(&doc))?;
    }
    Ok(ok)
}
