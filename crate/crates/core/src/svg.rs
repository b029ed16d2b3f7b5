//! Static SVG figures of roots and critical points.
//!
//! Roots are drawn as red circles, critical points as blue crosses (one per
//! unit of multiplicity), support outlines in black, and for pairing
//! experiments a green circle of the pairing radius about each outer `ξ`.
//! The viewport is a function of the data alone, so equal inputs give
//! byte-identical files.

use std::fmt::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::experiments::ExperimentKind;
use crate::measure::{Measure, MeasureSpec, Outline};

const CANVAS: f64 = 600.0;
const MARGIN: f64 = 0.08;
const GLYPH: f64 = 4.0;

/// Everything a figure shows. Serialized next to the SVG so a figure can be
/// re-rendered without rerunning the trial.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FigureData {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentKind>,
    #[serde(default)]
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureSpec>,
    #[serde(default)]
    pub epsilon: f64,
    #[serde(default)]
    pub roots: Vec<Complex64>,
    /// Expanded by multiplicity.
    #[serde(default)]
    pub critical_points: Vec<Complex64>,
    /// Centres of the pairing circles.
    #[serde(default)]
    pub xi: Vec<Complex64>,
    #[serde(default)]
    pub pairing_radius: f64,
}

struct View {
    lo: Complex64,
    scale: f64,
}

impl View {
    /// Square viewport containing every drawn object, with a margin. An
    /// empty figure shows `[-1, 1]²`.
    fn fit(boxes: &[(Complex64, f64)]) -> Self {
        let (mut lo, mut hi) = (
            Complex64::new(f64::INFINITY, f64::INFINITY),
            Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        );
        for &(c, r) in boxes
            .iter()
            .filter(|(c, r)| c.re.is_finite() && c.im.is_finite() && r.is_finite())
        {
            lo.re = lo.re.min(c.re - r);
            lo.im = lo.im.min(c.im - r);
            hi.re = hi.re.max(c.re + r);
            hi.im = hi.im.max(c.im + r);
        }
        if !lo.re.is_finite() {
            lo = Complex64::new(-1.0, -1.0);
            hi = Complex64::new(1.0, 1.0);
        }
        let side = (hi.re - lo.re).max(hi.im - lo.im).max(1e-9);
        let mid = (lo + hi) / 2.0;
        let half = side * (0.5 + MARGIN);
        Self {
            lo: mid - Complex64::new(half, half),
            scale: CANVAS / (2.0 * half),
        }
    }

    fn x(&self, z: Complex64) -> f64 {
        (z.re - self.lo.re) * self.scale
    }

    /// SVG y grows downward.
    fn y(&self, z: Complex64) -> f64 {
        CANVAS - (z.im - self.lo.im) * self.scale
    }
}

fn outline_boxes(outlines: &[Outline]) -> Vec<(Complex64, f64)> {
    let mut out = Vec::new();
    for o in outlines {
        match o {
            Outline::Circle { center, radius } => out.push((*center, *radius)),
            Outline::Polygon(v) => out.extend(v.iter().map(|&p| (p, 0.0))),
        }
    }
    out
}

/// Renders `data` as an SVG document.
pub fn render(data: &FigureData) -> String {
    let outlines = data
        .measure
        .as_ref()
        .and_then(|s| Measure::try_from(s).ok())
        .map(|m| m.outlines())
        .unwrap_or_default();
    let show_xi = data.experiment == Some(ExperimentKind::Pairing) && data.pairing_radius > 0.0;

    let mut boxes = outline_boxes(&outlines);
    boxes.extend(data.roots.iter().map(|&z| (z, 0.0)));
    boxes.extend(data.critical_points.iter().map(|&z| (z, 0.0)));
    if show_xi {
        boxes.extend(data.xi.iter().map(|&z| (z, data.pairing_radius)));
    }
    let v = View::fit(&boxes);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" viewBox="0 0 {CANVAS} {CANVAS}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let origin = Complex64::new(0.0, 0.0);
    let (ox, oy) = (v.x(origin), v.y(origin));
    if (0.0..=CANVAS).contains(&oy) {
        let _ = writeln!(
            s,
            r##"<line class="axis" x1="0" y1="{oy:.3}" x2="{CANVAS}" y2="{oy:.3}" stroke="#999" stroke-width="0.5"/>"##
        );
    }
    if (0.0..=CANVAS).contains(&ox) {
        let _ = writeln!(
            s,
            r##"<line class="axis" x1="{ox:.3}" y1="0" x2="{ox:.3}" y2="{CANVAS}" stroke="#999" stroke-width="0.5"/>"##
        );
    }

    for o in &outlines {
        match o {
            Outline::Circle { center, radius } => {
                let _ = writeln!(
                    s,
                    r#"<circle class="support" cx="{:.3}" cy="{:.3}" r="{:.3}" fill="none" stroke="black" stroke-width="1"/>"#,
                    v.x(*center),
                    v.y(*center),
                    radius * v.scale
                );
            }
            Outline::Polygon(pts) => {
                let coords: Vec<String> = pts.iter().map(|&p| format!("{:.3},{:.3}", v.x(p), v.y(p))).collect();
                let _ = writeln!(
                    s,
                    r#"<polygon class="support" points="{}" fill="none" stroke="black" stroke-width="1"/>"#,
                    coords.join(" ")
                );
            }
        }
    }

    if show_xi {
        for &xi in &data.xi {
            let _ = writeln!(
                s,
                r#"<circle class="pairing" cx="{:.3}" cy="{:.3}" r="{:.3}" fill="none" stroke="green" stroke-width="1"/>"#,
                v.x(xi),
                v.y(xi),
                data.pairing_radius * v.scale
            );
        }
    }

    for &z in &data.roots {
        let _ = writeln!(
            s,
            r#"<circle class="root" cx="{:.3}" cy="{:.3}" r="{GLYPH}" fill="none" stroke="red" stroke-width="1"/>"#,
            v.x(z),
            v.y(z)
        );
    }

    for &w in &data.critical_points {
        let (x, y) = (v.x(w), v.y(w));
        let _ = writeln!(
            s,
            r#"<path class="critical" d="M{:.3},{:.3}L{:.3},{:.3}M{:.3},{:.3}L{:.3},{:.3}" stroke="blue" stroke-width="1"/>"#,
            x - GLYPH,
            y - GLYPH,
            x + GLYPH,
            y + GLYPH,
            x - GLYPH,
            y + GLYPH,
            x + GLYPH,
            y - GLYPH
        );
    }

    s.push_str("</svg>\n");
    s
}

/// Renders `data` and writes it to `path`.
pub fn write(path: &std::path::Path, data: &FigureData) -> Result<()> {
    std::fs::write(path, render(data))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(s: &str, class: &str) -> usize {
        s.matches(&format!(r#"class="{class}""#)).count()
    }

    #[test]
    fn empty_input_draws_axes_only() {
        let s = render(&FigureData::default());
        assert_eq!(count(&s, "axis"), 2);
        assert_eq!(
            count(&s, "root") + count(&s, "critical") + count(&s, "support") + count(&s, "pairing"),
            0
        );
        assert!(s.ends_with("</svg>\n"));
    }

    #[test]
    fn glyph_counts() {
        let roots: Vec<Complex64> = (0..100).map(|k| Complex64::from_polar(1.0, k as f64 * 0.0628)).collect();
        let crit: Vec<Complex64> = (0..99).map(|k| Complex64::from_polar(0.99, k as f64 * 0.0634)).collect();
        let data = FigureData {
            experiment: Some(ExperimentKind::Pairing),
            n: 100,
            measure: Some(Measure::unit_circle().spec()),
            epsilon: 0.15,
            roots,
            critical_points: crit,
            xi: vec![Complex64::new(1.5, 0.0)],
            pairing_radius: 0.04,
        };
        let s = render(&data);
        assert_eq!(count(&s, "root"), 100);
        assert_eq!(count(&s, "critical"), 99);
        assert_eq!(count(&s, "support"), 1);
        assert_eq!(count(&s, "pairing"), 1);
        assert_eq!(s, render(&data));
    }

    #[test]
    fn pairing_circles_only_for_pairing() {
        let data = FigureData {
            experiment: Some(ExperimentKind::NoOutliers),
            xi: vec![Complex64::new(1.5, 0.0)],
            pairing_radius: 0.04,
            ..FigureData::default()
        };
        assert_eq!(count(&render(&data), "pairing"), 0);
    }

    #[test]
    fn everything_lands_on_canvas() {
        let v = View::fit(&[(Complex64::new(-3.0, 5.0), 0.0), (Complex64::new(7.0, -1.0), 0.5)]);
        for z in [Complex64::new(-3.0, 5.0), Complex64::new(7.5, -1.5)] {
            assert!((0.0..=CANVAS).contains(&v.x(z)));
            assert!((0.0..=CANVAS).contains(&v.y(z)));
        }
    }
}
