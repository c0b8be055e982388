//! Deterministic SVG rendering of hyperbolic figures in the disk or
//! half-plane model. Geodesics are drawn as circular arcs through three of
//! their points, which makes them orthogonal to the model boundary.

use std::fmt::Write as _;

use hypbisect::hcore::{midpoint, Geodesic, HPoint};

use crate::model::Model;

const WIDTH: f64 = 600.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub x: [f64; 2],
    pub y: [f64; 2],
}

impl Window {
    pub fn default_for(model: Model) -> Self {
        match model {
            Model::Disk => Window {
                x: [-1.05, 1.05],
                y: [-1.05, 1.05],
            },
            Model::HalfPlane => Window {
                x: [-4.0, 4.0],
                y: [0.0, 4.0],
            },
        }
    }

    pub fn parse(spec: &str, model: Model) -> Result<Self, String> {
        let v: Vec<f64> = spec
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| format!("window value {t:?}: {e}"))
            })
            .collect::<Result<_, _>>()?;
        if v.len() != 4 {
            return Err(format!(
                "window needs xmin,xmax,ymin,ymax, got {} values",
                v.len()
            ));
        }
        let w = Window {
            x: [v[0], v[1]],
            y: [v[2], v[3]],
        };
        if !v.iter().all(|x| x.is_finite()) || !(w.x[0] < w.x[1]) || !(w.y[0] < w.y[1]) {
            return Err(format!("empty or non-finite window {spec:?}"));
        }
        if model == Model::HalfPlane && w.y[1] <= 0.0 {
            return Err("window lies entirely below the half-plane".into());
        }
        Ok(w)
    }

    fn height(&self) -> f64 {
        WIDTH * (self.y[1] - self.y[0]) / (self.x[1] - self.x[0])
    }

    fn screen(&self, z: [f64; 2]) -> [f64; 2] {
        [
            (z[0] - self.x[0]) / (self.x[1] - self.x[0]) * WIDTH,
            (self.y[1] - z[1]) / (self.x[1] - self.x[0]) * WIDTH,
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Style {
    pub stroke: &'static str,
    pub dashed: bool,
}

impl Style {
    pub const fn solid(stroke: &'static str) -> Self {
        Style {
            stroke,
            dashed: false,
        }
    }

    pub const fn dashed(stroke: &'static str) -> Self {
        Style {
            stroke,
            dashed: true,
        }
    }

    fn attrs(&self) -> String {
        let dash = if self.dashed {
            " stroke-dasharray=\"6 4\""
        } else {
            ""
        };
        format!(
            "fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"{dash}",
            self.stroke
        )
    }
}

/// Something to draw, in hyperboloid coordinates.
#[derive(Clone, Debug)]
pub enum Object {
    /// A complete geodesic, drawn between its ideal endpoints.
    Geodesic(Geodesic, Style),
    /// The geodesic segment between two points.
    Segment(HPoint, HPoint, Style),
    /// A polyline through sampled points.
    Curve(Vec<HPoint>, Style),
    Point(HPoint, String),
}

#[derive(Clone, Debug)]
pub struct PlotSpec {
    pub title: String,
    pub model: Model,
    pub window: Window,
    pub seed: u64,
    pub objects: Vec<Object>,
}

fn n(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

/// Path data for the circular arc (or line) from `p` through `m` to `q`, all
/// in screen coordinates.
pub fn arc_path(p: [f64; 2], m: [f64; 2], q: [f64; 2]) -> String {
    let o = cross(sub(m, p), sub(q, m));
    let scale = sub(q, p)[0].hypot(sub(q, p)[1]).max(1e-300);
    if o.abs() < 1e-9 * scale * scale {
        return format!("M {} {} L {} {}", n(p[0]), n(p[1]), n(q[0]), n(q[1]));
    }
    // Circumcentre of p, m, q.
    let (b, c) = (sub(m, p), sub(q, p));
    let d = 2.0 * cross(b, c);
    let b2 = b[0] * b[0] + b[1] * b[1];
    let c2 = c[0] * c[0] + c[1] * c[1];
    let centre = [
        p[0] + (c[1] * b2 - b[1] * c2) / d,
        p[1] + (b[0] * c2 - c[0] * b2) / d,
    ];
    let r = sub(p, centre)[0].hypot(sub(p, centre)[1]);
    let chord = sub(q, p);
    let (side_m, side_c) = (cross(chord, sub(m, p)), cross(chord, sub(centre, p)));
    let large = side_m * side_c > 0.0 && side_c.abs() > 1e-12 * scale * scale;
    format!(
        "M {} {} A {} {} 0 {} {} {} {}",
        n(p[0]),
        n(p[1]),
        n(r),
        n(r),
        large as u8,
        (o > 0.0) as u8,
        n(q[0]),
        n(q[1])
    )
}

impl PlotSpec {
    fn screen(&self, p: &HPoint) -> [f64; 2] {
        self.window.screen(self.model.project(p))
    }

    fn geodesic_path(&self, g: &Geodesic) -> String {
        let ends = g
            .ideal_endpoints()
            .map(|v| self.model.ideal([v[0], v[1], v[2]]));
        let mid = self.screen(&g.point_at(0.0));
        match ends {
            [Some(a), Some(b)] => arc_path(self.window.screen(a), mid, self.window.screen(b)),
            // One end at infinity in the half-plane: a vertical ray.
            [Some(a), None] | [None, Some(a)] => {
                let p = self.window.screen(a);
                format!(
                    "M {} {} L {} {}",
                    n(p[0]),
                    n(p[1]),
                    n(p[0]),
                    n(self.window.screen([a[0], self.window.y[1]])[1])
                )
            }
            [None, None] => unreachable!("a geodesic has two distinct ideal endpoints"),
        }
    }

    pub fn render(&self) -> String {
        let h = self.window.height();
        let mut out = String::new();
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
            n(WIDTH),
            n(h),
            n(WIDTH),
            n(h)
        );
        let _ = writeln!(
            out,
            "<!-- {} | model: {} | seed: {} -->",
            self.title,
            self.model.name(),
            self.seed
        );
        let _ = writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
        match self.model {
            Model::Disk => {
                let c = self.window.screen([0.0, 0.0]);
                let r = self.window.screen([1.0, 0.0])[0] - c[0];
                let _ = writeln!(
                    out,
                    "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>",
                    n(c[0]),
                    n(c[1]),
                    n(r)
                );
            }
            Model::HalfPlane => {
                let y = self.window.screen([0.0, 0.0])[1];
                let _ = writeln!(
                    out,
                    "<line x1=\"0.000\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1\"/>",
                    n(y),
                    n(WIDTH),
                    n(y)
                );
            }
        }
        for obj in &self.objects {
            match obj {
                Object::Geodesic(g, style) => {
                    let _ = writeln!(
                        out,
                        "<path d=\"{}\" {}/>",
                        self.geodesic_path(g),
                        style.attrs()
                    );
                }
                Object::Segment(p, q, style) => {
                    let m = midpoint(p, q).unwrap_or(*p);
                    let d = arc_path(self.screen(p), self.screen(&m), self.screen(q));
                    let _ = writeln!(out, "<path d=\"{d}\" {}/>", style.attrs());
                }
                Object::Curve(pts, style) => {
                    let coords: Vec<String> = pts
                        .iter()
                        .map(|p| {
                            let s = self.screen(p);
                            format!("{},{}", n(s[0]), n(s[1]))
                        })
                        .collect();
                    let _ = writeln!(
                        out,
                        "<polyline points=\"{}\" {}/>",
                        coords.join(" "),
                        style.attrs()
                    );
                }
                Object::Point(p, label) => {
                    let s = self.screen(p);
                    let _ = writeln!(
                        out,
                        "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"black\"/>",
                        n(s[0]),
                        n(s[1])
                    );
                    if !label.is_empty() {
                        let _ = writeln!(
                            out,
                            "<text x=\"{}\" y=\"{}\" font-family=\"serif\" font-size=\"14\">{label}</text>",
                            n(s[0] + 5.0),
                            n(s[1] - 5.0)
                        );
                    }
                }
            }
        }
        out.push_str("</svg>\n");
        out
    }

    /// Every drawn point, converted to the model.
    #[cfg(test)]
    pub fn model_points(&self) -> Vec<[f64; 2]> {
        let mut out = Vec::new();
        for obj in &self.objects {
            match obj {
                Object::Geodesic(g, _) => out.push(self.model.project(&g.point_at(0.0))),
                Object::Segment(p, q, _) => {
                    out.push(self.model.project(p));
                    out.push(self.model.project(q));
                }
                Object::Curve(pts, _) => out.extend(pts.iter().map(|p| self.model.project(p))),
                Object::Point(p, _) => out.push(self.model.project(p)),
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hypbisect::hcore::geodesic_through;

    fn parse_arc(d: &str) -> Vec<f64> {
        d.split_whitespace()
            .filter_map(|t| t.parse().ok())
            .collect()
    }

    #[test]
    fn diameter_is_a_straight_line() {
        let g = geodesic_through(&HPoint::origin(), &HPoint::from_spatial(1.0, 0.0)).unwrap();
        let spec = PlotSpec {
            title: "t".into(),
            model: Model::Disk,
            window: Window::default_for(Model::Disk),
            seed: 0,
            objects: vec![],
        };
        assert!(spec.geodesic_path(&g).contains(" L "));
    }

    #[test]
    fn arcs_meet_the_unit_circle_orthogonally() {
        let spec = PlotSpec {
            title: "t".into(),
            model: Model::Disk,
            window: Window {
                x: [-1.0, 1.0],
                y: [-1.0, 1.0],
            },
            seed: 0,
            objects: vec![],
        };
        let g = geodesic_through(
            &HPoint::from_spatial(0.4, 0.9),
            &HPoint::from_spatial(1.2, -0.3),
        )
        .unwrap();
        let d = spec.geodesic_path(&g);
        assert!(d.contains(" A "), "{d}");
        let v = parse_arc(&d);
        // Back to model units: screen = 300 (x + 1), 300 (1 - y).
        let r = v[2] / 300.0;
        // Orthogonality: |centre|^2 = 1 + r^2, with the centre recovered from an endpoint.
        let p = [v[0] / 300.0 - 1.0, 1.0 - v[1] / 300.0];
        let q = [v[7] / 300.0 - 1.0, 1.0 - v[8] / 300.0];
        assert!(((p[0] * p[0] + p[1] * p[1]) - 1.0).abs() < 1e-4);
        assert!(((q[0] * q[0] + q[1] * q[1]) - 1.0).abs() < 1e-4);
        let chord = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt();
        // For an arc orthogonal to the unit circle the chord between the ideal
        // endpoints satisfies chord = 2 r / sqrt(1 + r^2).
        assert!(
            (chord - 2.0 * r / (1.0 + r * r).sqrt()).abs() < 1e-4,
            "{chord} {r}"
        );
        assert_eq!(v[5], 0.0, "large-arc flag");
    }

    #[test]
    fn arc_flags_follow_the_middle_point() {
        let d = arc_path([1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]);
        assert_eq!(d, "M 1.000 0.000 A 1.000 1.000 0 0 1 -1.000 0.000");
        let d = arc_path([1.0, 0.0], [0.0, -1.0], [-1.0, 0.0]);
        assert!(d.ends_with("0 0 0 -1.000 0.000"), "{d}");
        let d = arc_path([1.0, 0.0], [0.6, 0.8], [-1.0, 0.0]);
        assert!(d.contains(" 0 0 1 "), "{d}");
        let d = arc_path([0.6, 0.8], [-1.0, 0.0], [0.6, -0.8]);
        assert!(d.contains(" 0 1 0 ") || d.contains(" 0 1 1 "), "{d}");
    }

    #[test]
    fn window_validation() {
        assert!(Window::parse("-1,1,-1,1", Model::Disk).is_ok());
        assert!(Window::parse("1,-1,-1,1", Model::Disk).is_err());
        assert!(Window::parse("-1,1,-2,-1", Model::HalfPlane).is_err());
        assert!(Window::parse("-1,1,0", Model::Disk).is_err());
        assert!(Window::parse("a,1,0,1", Model::Disk).is_err());
    }
}
