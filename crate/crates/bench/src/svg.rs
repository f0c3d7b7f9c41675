//! Complex-plane scatter plots as standalone SVG 1.1.

use std::fmt::Write as _;
use std::path::Path;

use mgss_core::dense::ComplexSpectrum;
use mgss_core::spectra::{GammaSpectrumReport, PrecondSpectrumReport};

use crate::output::write_atomic;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 40.0;
const DOT_RADIUS: f64 = 2.5;

/// Anything carrying a list of eigenvalues to plot.
pub trait ScatterSource {
    fn spectrum(&self) -> &ComplexSpectrum;
}

impl ScatterSource for ComplexSpectrum {
    fn spectrum(&self) -> &ComplexSpectrum {
        self
    }
}

impl ScatterSource for PrecondSpectrumReport {
    fn spectrum(&self) -> &ComplexSpectrum {
        &self.eigenvalues
    }
}

impl ScatterSource for GammaSpectrumReport {
    fn spectrum(&self) -> &ComplexSpectrum {
        &self.eigenvalues
    }
}

/// Maps the complex plane to pixels with equal scaling on both axes.
struct Frame {
    x0: f64,
    y1: f64,
    scale: f64,
}

impl Frame {
    fn fit(points: &[(f64, f64)]) -> Self {
        // always show the disc |z - 1/2| <= 1/2 and the markers at 0 and 1
        let (mut xmin, mut xmax, mut ymax) = (-0.1f64, 1.1f64, 0.6f64);
        for &(re, im) in points.iter().filter(|p| p.0.is_finite() && p.1.is_finite()) {
            xmin = xmin.min(re);
            xmax = xmax.max(re);
            ymax = ymax.max(im.abs());
        }
        let pad = 0.05 * (xmax - xmin).max(2.0 * ymax);
        let (xmin, xmax, ymax) = (xmin - pad, xmax + pad, ymax + pad);
        let scale = ((WIDTH - 2.0 * MARGIN) / (xmax - xmin)).min((HEIGHT - 2.0 * MARGIN) / (2.0 * ymax));
        // centre the plotted window inside the canvas
        let x0 = xmin - ((WIDTH - 2.0 * MARGIN) / scale - (xmax - xmin)) / 2.0;
        let y1 = (HEIGHT - 2.0 * MARGIN) / scale / 2.0;
        Self { x0, y1, scale }
    }

    fn px(&self, re: f64) -> f64 {
        MARGIN + (re - self.x0) * self.scale
    }

    fn py(&self, im: f64) -> f64 {
        MARGIN + (self.y1 - im) * self.scale
    }
}

/// Axes, markers at 0, ½ and 1, the circle `|z − ½| = ½` and one
/// `class="eig"` dot per eigenvalue. An empty spectrum gets the axes and
/// markers only. Output depends only on the spectrum.
pub fn render_eigen_scatter<R: ScatterSource + ?Sized>(report: &R) -> String {
    let points = &report.spectrum().eigenvalues;
    let f = Frame::fit(points);
    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(
        s,
        "<style>.axis{{stroke:#444;stroke-width:1}} .bound{{fill:none;stroke:#c33;stroke-width:1;stroke-dasharray:4 3}} \
         .marker{{stroke:#444;stroke-width:1}} .label{{font:12px sans-serif;fill:#222}} .eig{{fill:#1f5fa8}}</style>"
    )
    .unwrap();
    writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();

    let (xl, xr) = (MARGIN, WIDTH - MARGIN);
    let (yt, yb) = (MARGIN, HEIGHT - MARGIN);
    let (ox, oy) = (f.px(0.0), f.py(0.0));
    writeln!(s, r#"<line class="axis" x1="{xl:.4}" y1="{oy:.4}" x2="{xr:.4}" y2="{oy:.4}"/>"#).unwrap();
    writeln!(s, r#"<line class="axis" x1="{ox:.4}" y1="{yt:.4}" x2="{ox:.4}" y2="{yb:.4}"/>"#).unwrap();
    writeln!(s, r#"<text class="label" x="{:.4}" y="{:.4}">Re</text>"#, xr - 18.0, oy - 6.0).unwrap();
    writeln!(s, r#"<text class="label" x="{:.4}" y="{:.4}">Im</text>"#, ox + 6.0, yt + 12.0).unwrap();

    for (value, label) in [(0.0, "0"), (0.5, "½"), (1.0, "1")] {
        let x = f.px(value);
        writeln!(
            s,
            r#"<line class="marker" x1="{x:.4}" y1="{:.4}" x2="{x:.4}" y2="{:.4}"/>"#,
            oy - 5.0,
            oy + 5.0
        )
        .unwrap();
        writeln!(s, r#"<text class="label" x="{:.4}" y="{:.4}">{label}</text>"#, x + 3.0, oy + 18.0).unwrap();
    }

    if !points.is_empty() {
        writeln!(
            s,
            r#"<circle class="bound" cx="{:.4}" cy="{:.4}" r="{:.4}"/>"#,
            f.px(0.5),
            f.py(0.0),
            0.5 * f.scale
        )
        .unwrap();
    }

    for &(re, im) in points.iter().filter(|p| p.0.is_finite() && p.1.is_finite()) {
        writeln!(
            s,
            r#"<circle class="eig" cx="{:.4}" cy="{:.4}" r="{DOT_RADIUS}"/>"#,
            f.px(re),
            f.py(im)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

pub fn emit_eigen_scatter<R: ScatterSource + ?Sized>(report: &R, path: &Path) -> std::io::Result<()> {
    write_atomic(path, render_eigen_scatter(report).as_bytes())
}
