//! SVG figures: received power spectra in dB, AOR/AOA PDFs, and spreads
//! against steering angle and beamwidth.

use log::warn;
use plotters::prelude::*;

use crate::error::{Error, Result};
use crate::estimator::MarginalSpectrum;
use crate::harness::output::RunArtifacts;

/// Display floor of dB axes.
pub const DB_FLOOR: f64 = -60.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    /// File stem, e.g. `pdf_phi`.
    pub name: String,
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

fn db_floored(v: f64) -> f64 {
    if v > 0.0 {
        (10.0 * v.log10()).max(DB_FLOOR)
    } else {
        DB_FLOOR
    }
}

fn spectrum_db(s: &MarginalSpectrum) -> Vec<(f64, f64)> {
    s.axis().centers().into_iter().zip(s.values()).map(|(c, &v)| (c, db_floored(v))).collect()
}

fn point_label(alpha: f64, hpbw_phi: f64) -> String {
    format!("α={alpha}° HPBWφ={hpbw_phi}°")
}

fn distinct(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Figures for a run. Datasets with zero power are skipped with a warning,
/// as are figures left without any series.
pub fn figures(a: &RunArtifacts) -> Vec<Figure> {
    if a.points.is_empty() {
        warn!("no sweep points; no figures produced");
        return Vec::new();
    }
    let mut figs = Vec::new();
    let mut spectra = |name: &str, title: &str, axis: &str, pick: fn(&crate::PointResult) -> &MarginalSpectrum| {
        let mut series = Vec::new();
        for p in &a.points {
            let s = pick(&p.result);
            if s.values().iter().all(|&v| v <= 0.0) {
                warn!("{}: zero received power, skipped in {name}", p.tag);
                continue;
            }
            series.push(Series {
                label: point_label(p.result.omega.alpha, p.result.omega.hpbw_phi),
                points: spectrum_db(s),
            });
        }
        figs.push(Figure {
            name: name.into(),
            title: title.into(),
            x_label: axis.into(),
            y_label: "power [dB]".into(),
            series,
        });
    };
    spectra("pr_phi_db", "Received power P_R(φ)", "φ [deg]", |r| &r.pr_phi);
    spectra("pr_theta_db", "Received power P_R(θ)", "θ [deg]", |r| &r.pr_theta);

    for (name, title, axis, aor, aoa) in [
        (
            "pdf_theta",
            "Elevation PDF",
            "θ [deg]",
            (|r| &r.aor_theta) as fn(&crate::PointResult) -> &crate::MarginalPdf,
            (|r| &r.aoa_theta) as fn(&crate::PointResult) -> &crate::MarginalPdf,
        ),
        ("pdf_phi", "Azimuth PDF", "φ [deg]", |r| &r.aor_phi, |r| &r.aoa_phi),
    ] {
        let to_points = |pdf: &crate::MarginalPdf| -> Vec<(f64, f64)> {
            pdf.axis().centers().into_iter().zip(pdf.values().iter().copied()).collect()
        };
        let mut series: Vec<Series> = a
            .points
            .iter()
            .map(|p| Series {
                label: format!("AOR {}", point_label(p.result.omega.alpha, p.result.omega.hpbw_phi)),
                points: to_points(aor(&p.result)),
            })
            .collect();
        series.push(Series {
            label: "AOA".into(),
            points: to_points(aoa(&a.points[0].result)),
        });
        figs.push(Figure {
            name: name.into(),
            title: title.into(),
            x_label: axis.into(),
            y_label: "density [1/deg]".into(),
            series,
        });
    }

    let reports = a.spreads();
    let hpbws = distinct(reports.iter().map(|r| r.omega.hpbw_phi));
    let alphas = distinct(reports.iter().map(|r| r.omega.alpha));
    let abs_alphas = distinct(alphas.iter().map(|x| x.abs()));
    if abs_alphas.len() > 1 {
        let mut series = Vec::new();
        for &h in &hpbws {
            let suffix = if hpbws.len() > 1 { format!(" HPBWφ={h}°") } else { String::new() };
            for (label, get) in [("σθ", (|r| r.sigma_theta) as fn(&crate::SpreadReport) -> f64), ("σφ", |r| r.sigma_phi)] {
                let points = abs_alphas
                    .iter()
                    .map(|&aa| {
                        let vals: Vec<f64> = reports
                            .iter()
                            .filter(|r| r.omega.hpbw_phi == h && r.omega.alpha.abs() == aa)
                            .map(get)
                            .collect();
                        (aa, vals.iter().sum::<f64>() / vals.len() as f64)
                    })
                    .collect();
                series.push(Series { label: format!("{label}{suffix}"), points });
            }
        }
        figs.push(Figure {
            name: "sigma_vs_alpha".into(),
            title: "AOR spread versus |α|".into(),
            x_label: "|α| [deg]".into(),
            y_label: "σ [deg]".into(),
            series,
        });
    }
    if hpbws.len() > 1 {
        let mut series = Vec::new();
        for &al in &alphas {
            let pts: Vec<&crate::harness::output::PointArtifact> =
                a.points.iter().filter(|p| p.result.omega.alpha == al).collect();
            let suffix = if alphas.len() > 1 { format!(" α={al}°") } else { String::new() };
            series.push(Series {
                label: format!("AOR{suffix}"),
                points: pts.iter().map(|p| (p.result.omega.hpbw_phi, p.result.aor.sigma_phi)).collect(),
            });
            series.push(Series {
                label: format!("AOA{suffix}"),
                points: pts.iter().map(|p| (p.result.omega.hpbw_phi, p.result.aoa.sigma_phi)).collect(),
            });
        }
        figs.push(Figure {
            name: "sigma_vs_hpbw".into(),
            title: "Azimuth spread versus HPBWφ".into(),
            x_label: "HPBWφ [deg]".into(),
            y_label: "σφ [deg]".into(),
            series,
        });
    }

    figs.retain(|f| {
        if f.series.is_empty() {
            warn!("figure {} has no data; skipped", f.name);
        }
        !f.series.is_empty()
    });
    figs
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
    if !(lo.is_finite() && hi.is_finite()) {
        return (0.0, 1.0);
    }
    let pad = if hi > lo { 0.05 * (hi - lo) } else { 1.0 };
    (lo - pad, hi + pad)
}

fn plot_err<E: std::error::Error + Send + Sync>(e: DrawingAreaErrorKind<E>) -> Error {
    Error::Domain(format!("plot rendering: {e}"))
}

/// Renders a line chart as an SVG document.
pub fn render_svg(fig: &Figure) -> Result<String> {
    let (x0, x1) = range(fig.series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let (y0, y1) = range(fig.series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    let mut buf = String::new();
    {
        let root = SVGBackend::with_string(&mut buf, (900, 560)).into_drawing_area();
        root.fill(&WHITE).map_err(plot_err)?;
        let mut chart = ChartBuilder::on(&root)
            .caption(&fig.title, ("sans-serif", 22))
            .margin(12)
            .x_label_area_size(45)
            .y_label_area_size(65)
            .build_cartesian_2d(x0..x1, y0..y1)
            .map_err(plot_err)?;
        chart
            .configure_mesh()
            .x_desc(fig.x_label.as_str())
            .y_desc(fig.y_label.as_str())
            .draw()
            .map_err(plot_err)?;
        for (i, s) in fig.series.iter().enumerate() {
            let color = Palette99::pick(i).to_rgba();
            chart
                .draw_series(LineSeries::new(s.points.iter().copied(), color.stroke_width(2)))
                .map_err(plot_err)?
                .label(s.label.as_str())
                .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], color.stroke_width(2)));
        }
        chart
            .configure_series_labels()
            .background_style(WHITE.mix(0.85))
            .border_style(BLACK)
            .draw()
            .map_err(plot_err)?;
        root.present().map_err(plot_err)?;
    }
    Ok(buf)
}
