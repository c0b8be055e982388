use clap::{Args, ValueEnum};
use hypbisect::hcore::{geodesic_through, lambert_quad, translate_along, FermiCoords, HPoint};
use hypbisect::squarehyp::{solve_on_perpendicular, PointPair};

use super::parse_xy;
use crate::output::write_atomic;
use crate::svg::{Object, PlotSpec, Style, Window};
use crate::{CliError, RunConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    /// Lambert quadrilateral with sides A and K and its diagonal.
    Lambert,
    /// Flow of y along SH_0 and the level set through y.
    ClosestPoint,
    /// A collinear ordered quadruple with a perpendicular at w.
    Quadruple,
    /// Spine SH_0 and the leaves SH_k, SH_-k of one factor pair.
    Bisector,
}

impl Figure {
    fn file_stem(self) -> &'static str {
        match self {
            Figure::Lambert => "lambert",
            Figure::ClosestPoint => "closest_point",
            Figure::Quadruple => "quadruple",
            Figure::Bisector => "bisector",
        }
    }
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    #[arg(long, value_enum)]
    figure: Figure,
    /// Side A of the Lambert quadrilateral.
    #[arg(long, default_value_t = 0.5)]
    a: f64,
    /// Side K of the Lambert quadrilateral, or the leaf level of the bisector figure.
    #[arg(long, default_value_t = 0.5)]
    k: f64,
    /// First point of the pair, in model coordinates.
    #[arg(long, value_parser = parse_xy, allow_hyphen_values = true, default_value = "-0.3,-0.1")]
    x: [f64; 2],
    /// Second point of the pair, in model coordinates.
    #[arg(long, value_parser = parse_xy, allow_hyphen_values = true, default_value = "0.25,0.2")]
    y: [f64; 2],
    /// Arclengths of x, y, u, v on the axis (quadruple figure).
    #[arg(long, value_parser = super::parse_xyxy, allow_hyphen_values = true, default_value = "1,-1,3,-2")]
    at: [f64; 4],
    /// Foot of the perpendicular on the axis (quadruple figure).
    #[arg(long, allow_hyphen_values = true, default_value_t = -1.5)]
    w: f64,
    /// Visible region as xmin,xmax,ymin,ymax in model coordinates.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
}

const AXIS: Style = Style::dashed("#888888");
const SPINE: Style = Style::solid("#1f77b4");
const LEAF: Style = Style::solid("#d62728");
const EDGE: Style = Style::solid("#000000");

/// Points of the level set `k` on perpendiculars |t| <= t_max; offsets where
/// the solver has no bracket are skipped.
fn level_curve(pair: &PointPair, k: f64, t_max: f64, n: usize) -> Vec<HPoint> {
    (0..=2 * n)
        .filter_map(|j| {
            let t = t_max * (j as f64 - n as f64) / n as f64;
            solve_on_perpendicular(pair, t, k)
                .ok()
                .map(|f| pair.axis().fermi_point(f))
        })
        .collect()
}

pub fn build(cfg: &RunConfig, args: &PlotArgs) -> Result<PlotSpec, CliError> {
    let window = match &args.window {
        Some(w) => Window::parse(w, cfg.model).map_err(CliError::Usage)?,
        None => Window::default_for(cfg.model),
    };
    let pair = || -> Result<PointPair, CliError> {
        PointPair::new(cfg.point(args.x)?, cfg.point(args.y)?)
            .map_err(|e| CliError::Usage(e.to_string()))
    };
    let mut objects = Vec::new();
    let title = match args.figure {
        Figure::Lambert => {
            let q = lambert_quad(args.a, args.k).map_err(|e| CliError::Usage(e.to_string()))?;
            let v = q.vertices;
            for i in 0..4 {
                objects.push(Object::Segment(v[i], v[(i + 1) % 4], EDGE));
            }
            objects.push(Object::Segment(v[0], v[2], Style::dashed("#1f77b4")));
            objects.extend(v.iter().map(|p| Object::Point(*p, String::new())));
            format!(
                "Lambert quadrilateral A={} K={} B={:.12}",
                args.a, args.k, q.b
            )
        }
        Figure::ClosestPoint => {
            let pair = pair()?;
            let sh0 = pair.bisector();
            let k_half = pair.half_distance();
            objects.push(Object::Geodesic(*pair.axis(), AXIS));
            objects.push(Object::Geodesic(sh0, SPINE));
            objects.push(Object::Curve(
                level_curve(&pair, 4.0 * k_half * k_half, 3.0, 60),
                LEAF,
            ));
            for i in 1..=6 {
                for t in [0.5 * i as f64, -0.5 * i as f64] {
                    objects.push(Object::Point(
                        translate_along(&sh0, t).apply(pair.y()),
                        String::new(),
                    ));
                }
            }
            objects.push(Object::Point(*pair.x(), "x".into()));
            objects.push(Object::Point(*pair.y(), "y".into()));
            format!("closest point, K={:.12}", k_half)
        }
        Figure::Quadruple => {
            let axis = geodesic_through(&HPoint::origin(), &HPoint::from_spatial(1.0, 0.0))
                .expect("distinct points");
            let [x, y, u, v] = args.at.map(|s| axis.point_at(s));
            let xy = PointPair::new(x, y).map_err(|e| CliError::Usage(e.to_string()))?;
            let uv = PointPair::new(u, v).map_err(|e| CliError::Usage(e.to_string()))?;
            objects.push(Object::Geodesic(axis, EDGE));
            objects.push(Object::Geodesic(xy.bisector(), SPINE));
            objects.push(Object::Geodesic(uv.bisector(), LEAF));
            objects.push(Object::Geodesic(axis.perpendicular_at(args.w), AXIS));
            for (p, label) in [(x, "x"), (y, "y"), (u, "u"), (v, "v")] {
                objects.push(Object::Point(p, label.into()));
            }
            objects.push(Object::Point(
                axis.fermi_point(FermiCoords::new(args.w, 0.0)),
                "w".into(),
            ));
            format!("ordered quadruple at {:?}, w={}", args.at, args.w)
        }
        Figure::Bisector => {
            let pair = pair()?;
            objects.push(Object::Geodesic(pair.bisector(), SPINE));
            for k in [args.k, -args.k] {
                objects.push(Object::Curve(level_curve(&pair, k, 4.0, 80), LEAF));
            }
            objects.push(Object::Point(*pair.x(), "x".into()));
            objects.push(Object::Point(*pair.y(), "y".into()));
            format!("bisector factor: spine and leaves k=+-{}", args.k)
        }
    };
    Ok(PlotSpec {
        title,
        model: cfg.model,
        window,
        seed: cfg.seed,
        objects,
    })
}

pub fn run(cfg: &RunConfig, args: &PlotArgs) -> Result<bool, CliError> {
    let spec = build(cfg, args)?;
    let path = write_atomic(
        &cfg.out,
        &format!("{}.svg", args.figure.file_stem()),
        &spec.render(),
    )?;
    println!("wrote {}", path.display());
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Model;
    use crate::Format;

    fn cfg(model: Model) -> RunConfig {
        RunConfig {
            seed: 3,
            tol: None,
            out: ".".into(),
            model,
            format: Format::Csv,
        }
    }

    fn args(figure: Figure) -> PlotArgs {
        PlotArgs {
            figure,
            a: 0.5,
            k: 0.5,
            x: [-0.3, -0.1],
            y: [0.25, 0.2],
            at: [1.0, -1.0, 3.0, -2.0],
            w: -1.5,
            window: None,
        }
    }

    #[test]
    fn drawn_points_are_inside_the_disk() {
        for f in [
            Figure::Lambert,
            Figure::ClosestPoint,
            Figure::Quadruple,
            Figure::Bisector,
        ] {
            let spec = build(&cfg(Model::Disk), &args(f)).unwrap();
            for z in spec.model_points() {
                assert!(z[0] * z[0] + z[1] * z[1] < 1.0, "{f:?} {z:?}");
            }
            let mut upper = args(f);
            upper.x = [-0.3, 0.9];
            upper.y = [0.25, 1.2];
            let spec = build(&cfg(Model::HalfPlane), &upper).unwrap();
            assert!(spec.model_points().iter().all(|z| z[1] > 0.0), "{f:?}");
        }
    }

    #[test]
    fn bisector_figure_has_three_curves() {
        let spec = build(&cfg(Model::Disk), &args(Figure::Bisector)).unwrap();
        let svg = spec.render();
        assert_eq!(
            svg.matches("<path").count() + svg.matches("<polyline").count(),
            3
        );
        assert!(matches!(spec.objects[0], Object::Geodesic(..)));
    }

    #[test]
    fn lambert_figure_is_the_hcore_construction() {
        let spec = build(&cfg(Model::Disk), &args(Figure::Lambert)).unwrap();
        let q = lambert_quad(0.5, 0.5).unwrap();
        let Object::Segment(p, r, _) = &spec.objects[4] else {
            panic!("diagonal expected")
        };
        assert_eq!((*p, *r), (q.vertices[0], q.vertices[2]));
        assert!(spec.title.contains(&format!("{:.12}", q.b)));
    }

    #[test]
    fn rendering_is_deterministic() {
        let a = build(&cfg(Model::Disk), &args(Figure::ClosestPoint))
            .unwrap()
            .render();
        let b = build(&cfg(Model::Disk), &args(Figure::ClosestPoint))
            .unwrap()
            .render();
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_window_is_a_usage_error() {
        let mut a = args(Figure::Lambert);
        a.window = Some("1,0,0,1".into());
        assert!(matches!(
            build(&cfg(Model::Disk), &a),
            Err(CliError::Usage(_))
        ));
    }
}
