//! SVG figures of developed patches in the affine chart.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::coords::CoordinateTuple;
use crate::develop::{Pleat, PatchTriangle};
use crate::mobius::ProjectivePoint;
use crate::surface::Triangulation;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    /// Width and height in pixels.
    pub size: u32,
    /// Chart radius: points farther out are clipped radially onto it.
    pub radius: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            size: 800,
            radius: 4.0,
        }
    }
}

struct Chart {
    size: f64,
    radius: f64,
}

impl Chart {
    /// Pixel position, and whether the point was clipped.
    fn place(&self, p: &ProjectivePoint) -> (f64, f64, bool) {
        let (x, y, clipped) = match p.affine(1e-12) {
            Some(z) if z.norm() <= self.radius => (z.re, z.im, false),
            Some(z) => {
                let s = self.radius / z.norm();
                (z.re * s, z.im * s, true)
            }
            None => (self.radius, 0.0, true),
        };
        let scale = self.size / (2.0 * self.radius);
        (
            (x + self.radius) * scale,
            (self.radius - y) * scale,
            clipped,
        )
    }
}

/// Blue for flat arcs through red for a half-turn.
fn bend_color(bend: f64) -> String {
    let folded = bend.min(std::f64::consts::TAU - bend) / std::f64::consts::PI;
    let t = folded.clamp(0.0, 1.0);
    let r = (40.0 + 215.0 * t).round() as u8;
    let b = (255.0 - 215.0 * t).round() as u8;
    format!("#{r:02x}40{b:02x}")
}

pub fn render_patch(
    tri: &Triangulation,
    coords: &CoordinateTuple,
    patch: &[PatchTriangle],
    options: &RenderOptions,
) -> String {
    let chart = Chart {
        size: options.size as f64,
        radius: options.radius,
    };
    let mut svg = String::new();
    let size = options.size;
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(svg, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);

    let _ = writeln!(svg, r##"<g class="triangles" fill="#dde6f0" fill-opacity="0.35" stroke="none">"##);
    for (k, p) in patch.iter().enumerate() {
        let pts: Vec<String> = p
            .flags
            .iter()
            .map(|f| {
                let (x, y, _) = chart.place(f);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(
            svg,
            r#"<polygon data-index="{k}" data-triangle="{}" points="{}"/>"#,
            p.triangle,
            pts.join(" ")
        );
    }
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(svg, r#"<g class="arcs" stroke-width="1.5">"#);
    for p in patch {
        for (slot, &h) in tri.triangle(p.triangle).iter().enumerate() {
            let (x1, y1, _) = chart.place(&p.flags[slot]);
            let (x2, y2, _) = chart.place(&p.flags[(slot + 1) % 3]);
            let color = match tri.arc_of(h) {
                Some(a) => bend_color(Pleat::of(coords.get(a).unwrap_or_default()).bend),
                None => "#000000".to_string(),
            };
            let _ = writeln!(
                svg,
                r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="{color}"/>"#
            );
        }
    }
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(svg, r#"<g class="vertices">"#);
    let mut seen = BTreeSet::new();
    for p in patch {
        for f in &p.flags {
            let (x, y, clipped) = chart.place(f);
            let key = ((x * 1000.0).round() as i64, (y * 1000.0).round() as i64);
            if !seen.insert(key) {
                continue;
            }
            let class = if f.affine(1e-12).is_none() {
                "inf"
            } else if clipped {
                "clipped"
            } else {
                "vertex"
            };
            let _ = writeln!(
                svg,
                r#"<circle class="{class}" cx="{x:.3}" cy="{y:.3}" r="3"/>"#
            );
        }
    }
    let _ = writeln!(svg, "</g>");
    svg.push_str("</svg>\n");
    svg
}
