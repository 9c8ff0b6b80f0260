//! CSV and SVG emission. Output is deterministic: fixed float formatting,
//! no timestamps, and an optional metadata string embedded verbatim.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::profiles::{Direction, ProfileCurve};

/// Write curves as `v,value,direction,space,provenance` rows, preceded by a
/// `#`-comment line carrying `metadata` when given.
pub fn write_profile_csv<W: Write>(
    curves: &[ProfileCurve],
    metadata: Option<&str>,
    mut out: W,
) -> Result<()> {
    if let Some(m) = metadata {
        writeln!(out, "# {}", m.replace('\n', " "))?;
    }
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Format(format!("csv: {e}"));
    w.write_record(["v", "value", "direction", "space", "provenance"])
        .map_err(csv_err)?;
    for c in curves {
        for s in c.samples() {
            w.write_record([
                format!("{:e}", s.v),
                format!("{:e}", s.value),
                c.direction().as_str().to_string(),
                c.space().as_str().to_string(),
                s.provenance.clone(),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeriesStyle {
    Line {
        dashed: bool,
    },
    Scatter,
    /// Horizontal line at the given value across the plot.
    HLine(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub style: SeriesStyle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_axes: bool,
    pub series: Vec<Series>,
}

const W: f64 = 720.0;
const H: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 200.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

impl Plot {
    fn transform(&self, v: f64) -> Option<f64> {
        if self.log_axes {
            (v > 0.0).then(|| v.log10())
        } else {
            v.is_finite().then_some(v)
        }
    }

    fn ranges(&self) -> Option<([f64; 2], [f64; 2])> {
        let mut xr = [f64::INFINITY, f64::NEG_INFINITY];
        let mut yr = xr;
        for s in &self.series {
            if let SeriesStyle::HLine(y) = s.style {
                if let Some(y) = self.transform(y) {
                    yr = [yr[0].min(y), yr[1].max(y)];
                }
            }
            for &(x, y) in &s.points {
                if let (Some(x), Some(y)) = (self.transform(x), self.transform(y)) {
                    xr = [xr[0].min(x), xr[1].max(x)];
                    yr = [yr[0].min(y), yr[1].max(y)];
                }
            }
        }
        if !xr[0].is_finite() || !yr[0].is_finite() {
            return None;
        }
        let pad = |r: [f64; 2]| {
            let span = r[1] - r[0];
            let p = if span > 0.0 {
                0.05 * span
            } else {
                0.5 * r[0].abs().max(1.0)
            };
            [r[0] - p, r[1] + p]
        };
        Some((pad(xr), pad(yr)))
    }

    /// Render to SVG text; `metadata` goes into a `<metadata>` element.
    pub fn render(&self, metadata: Option<&str>) -> Result<String> {
        if self.series.is_empty() {
            return Err(Error::InvalidParameter {
                name: "series",
                reason: "a plot needs at least one series".into(),
            });
        }
        let (xr, yr) = self.ranges().ok_or(Error::InvalidParameter {
            name: "series",
            reason: "no plottable points".into(),
        })?;
        let pw = W - LEFT - RIGHT;
        let ph = H - TOP - BOTTOM;
        let sx = |x: f64| LEFT + (x - xr[0]) / (xr[1] - xr[0]) * pw;
        let sy = |y: f64| TOP + ph - (y - yr[0]) / (yr[1] - yr[0]) * ph;
        let tick = |v: f64| {
            if self.log_axes {
                format!("1e{v:.1}")
            } else {
                format!("{v:.3e}")
            }
        };

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
        );
        if let Some(m) = metadata {
            let _ = writeln!(s, "<metadata>{}</metadata>", escape(m));
        }
        let _ = writeln!(
            s,
            r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            LEFT + pw / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            s,
            r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
        );
        for i in 0..=4 {
            let f = i as f64 / 4.0;
            let xv = xr[0] + f * (xr[1] - xr[0]);
            let yv = yr[0] + f * (yr[1] - yr[0]);
            let (px, py) = (sx(xv), sy(yv));
            let _ = writeln!(
                s,
                r#"<line x1="{px:.1}" y1="{:.1}" x2="{px:.1}" y2="{:.1}" stroke="black"/><text x="{px:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
                TOP + ph,
                TOP + ph + 5.0,
                TOP + ph + 20.0,
                tick(xv)
            );
            let _ = writeln!(
                s,
                r#"<line x1="{:.1}" y1="{py:.1}" x2="{LEFT}" y2="{py:.1}" stroke="black"/><text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
                LEFT - 5.0,
                LEFT - 8.0,
                py + 4.0,
                tick(yv)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            LEFT + pw / 2.0,
            H - 15.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="20" y="{:.1}" text-anchor="middle" transform="rotate(-90 20 {:.1})">{}</text>"#,
            TOP + ph / 2.0,
            TOP + ph / 2.0,
            escape(&self.y_label)
        );

        for (idx, series) in self.series.iter().enumerate() {
            let color = PALETTE[idx % PALETTE.len()];
            let pts: Vec<(f64, f64)> = series
                .points
                .iter()
                .filter_map(|&(x, y)| Some((sx(self.transform(x)?), sy(self.transform(y)?))))
                .collect();
            match series.style {
                SeriesStyle::Line { dashed } => {
                    let d: Vec<String> =
                        pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                    let dash = if dashed {
                        r#" stroke-dasharray="6 4""#
                    } else {
                        ""
                    };
                    let _ = writeln!(
                        s,
                        r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"{dash}/>"#,
                        d.join(" ")
                    );
                }
                SeriesStyle::Scatter => {
                    for (x, y) in &pts {
                        let _ = writeln!(
                            s,
                            r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{color}"/>"#
                        );
                    }
                }
                SeriesStyle::HLine(v) => {
                    if let Some(y) = self.transform(v) {
                        let _ = writeln!(
                            s,
                            r#"<line x1="{LEFT}" y1="{:.2}" x2="{:.1}" y2="{:.2}" stroke="{color}" stroke-width="2" stroke-dasharray="6 4"/>"#,
                            sy(y),
                            LEFT + pw,
                            sy(y)
                        );
                    }
                }
            }
            let ly = TOP + 10.0 + 18.0 * idx as f64;
            let lx = W - RIGHT + 15.0;
            let _ = writeln!(
                s,
                r#"<rect x="{lx:.1}" y="{:.1}" width="12" height="12" fill="{color}"/><text x="{:.1}" y="{:.1}">{}</text>"#,
                ly - 10.0,
                lx + 18.0,
                ly,
                escape(&series.label)
            );
        }
        s.push_str("</svg>\n");
        Ok(s)
    }
}

/// Profile curves as one plot: upper bounds solid, lower bounds dashed.
pub fn profile_plot(curves: &[ProfileCurve], log_axes: bool) -> Result<Plot> {
    if curves.is_empty() {
        return Err(Error::InvalidParameter {
            name: "curves",
            reason: "need at least one curve".into(),
        });
    }
    Ok(Plot {
        title: "Isoperimetric profile bracket".into(),
        x_label: "volume".into(),
        y_label: "boundary measure".into(),
        log_axes,
        series: curves
            .iter()
            .map(|c| Series {
                label: format!(
                    "{} {} ({})",
                    c.space().as_str(),
                    c.direction().as_str(),
                    c.provenance()
                ),
                points: c.samples().iter().map(|s| (s.v, s.value)).collect(),
                style: SeriesStyle::Line {
                    dashed: c.direction() == Direction::Lower,
                },
            })
            .collect(),
    })
}

pub fn emit_plot(
    curves: &[ProfileCurve],
    path: &Path,
    log_axes: bool,
    metadata: Option<&str>,
) -> Result<()> {
    let svg = profile_plot(curves, log_axes)?.render(metadata)?;
    std::fs::write(path, svg)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{Sample, SpaceTag};

    fn curve(dir: Direction, vals: &[(f64, f64)]) -> ProfileCurve {
        let samples = vals
            .iter()
            .map(|&(v, value)| Sample {
                v,
                value,
                provenance: "test".into(),
            })
            .collect();
        ProfileCurve::new(samples, dir, SpaceTag::N1Cc, "test").unwrap()
    }

    #[test]
    fn csv_columns() {
        let c = curve(Direction::Upper, &[(0.5, 2.0)]);
        let mut buf = Vec::new();
        write_profile_csv(&[c], Some("{\"seed\":1}"), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# {\"seed\":1}");
        assert_eq!(lines[1], "v,value,direction,space,provenance");
        assert_eq!(lines[2], "5e-1,2e0,upper,N1_cc,test");
    }

    #[test]
    fn svg_is_deterministic_with_legend() {
        let up = curve(Direction::Upper, &[(0.1, 1.0), (0.5, 2.0)]);
        let lo = curve(Direction::Lower, &[(0.1, 0.5), (0.5, 0.5)]);
        let a = profile_plot(&[up.clone(), lo.clone()], false)
            .unwrap()
            .render(Some("cfg"))
            .unwrap();
        let b = profile_plot(&[up, lo], false)
            .unwrap()
            .render(Some("cfg"))
            .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.matches("<polyline").count(), 2);
        assert!(a.contains("stroke-dasharray"));
        assert!(a.contains("<metadata>cfg</metadata>"));
        assert!(profile_plot(&[], false).is_err());
    }

    #[test]
    fn constant_curve_is_horizontal() {
        let c = curve(Direction::Lower, &[(1.0, 3.0), (2.0, 3.0)]);
        let svg = profile_plot(&[c], true).unwrap().render(None).unwrap();
        let line = svg.lines().find(|l| l.starts_with("<polyline")).unwrap();
        let pts: Vec<&str> = line.split('"').nth(1).unwrap().split(' ').collect();
        let ys: Vec<&str> = pts.iter().map(|p| p.split(',').nth(1).unwrap()).collect();
        assert_eq!(ys[0], ys[1]);
    }
}
