use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::mechanics::{Pose2, Vec2};
use crate::world::TrajectoryLog;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlotStyle {
    /// Canvas size (px).
    pub width: u32,
    pub height: u32,
    /// Footprints drawn along the run, start and end included.
    pub keyframes: usize,
}

impl Default for PlotStyle {
    fn default() -> Self {
        Self { width: 800, height: 600, keyframes: 8 }
    }
}

struct Frame {
    min: Vec2,
    scale: f64,
    height: f64,
    pad: f64,
}

impl Frame {
    fn px(&self, p: &Vec2) -> (f64, f64) {
        (self.pad + (p.x - self.min.x) * self.scale, self.height - self.pad - (p.y - self.min.y) * self.scale)
    }

    fn points(&self, pts: &[Vec2]) -> String {
        let mut s = String::new();
        for (i, p) in pts.iter().enumerate() {
            let (x, y) = self.px(p);
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{x:.2},{y:.2}");
        }
        s
    }
}

fn corners(pose: &Pose2, footprint: [f64; 2]) -> Vec<Vec2> {
    let (hx, hy) = (footprint[0] / 2.0, footprint[1] / 2.0);
    [(-hx, -hy), (hx, -hy), (hx, hy), (-hx, hy)].iter().map(|&(x, y)| pose.transform_point(&Vec2::new(x, y))).collect()
}

/// Poses and stage indices at which footprints are drawn.
fn keyframes(log: &TrajectoryLog, count: usize) -> Vec<(Pose2, usize)> {
    let mut frames = vec![(log.start_pose, 0)];
    let n = log.records.len();
    if n > 0 && count > 2 {
        for k in 1..count - 1 {
            let r = &log.records[k * n / (count - 1)];
            frames.push((r.pose, r.stage));
        }
    }
    frames.push((log.final_pose, log.stages.len().saturating_sub(1)));
    frames.dedup_by(|a, b| a.0 == b.0);
    frames
}

/// Deterministic SVG of the run: footprint keyframes with their contacts,
/// reference paths, the object-origin path and the tracking-point trace.
pub fn render_plot(log: &TrajectoryLog, style: &PlotStyle) -> String {
    let footprint = log.object.footprint;
    let frames = keyframes(log, style.keyframes.max(2));
    let com: Vec<Vec2> = std::iter::once(log.start_pose.position())
        .chain(log.records.iter().map(|r| r.pose.position()))
        .chain(std::iter::once(log.final_pose.position()))
        .collect();
    let trace: Vec<Vec2> = log.records.iter().map(|r| r.tracking_point).collect();

    let mut all: Vec<Vec2> = com.clone();
    all.extend(trace.iter().copied());
    for (pose, _) in &frames {
        all.extend(corners(pose, footprint));
    }
    for s in &log.stages {
        all.extend(s.reference.iter().copied());
        all.extend(corners(&s.goal, footprint));
    }
    let min = all.iter().fold(Vec2::new(f64::INFINITY, f64::INFINITY), |m, p| m.inf(p));
    let max = all.iter().fold(Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY), |m, p| m.sup(p));
    let pad = 20.0;
    let (w, h) = (style.width as f64, style.height as f64);
    let span = (max - min).map(|v| v.max(1e-9));
    let scale = ((w - 2.0 * pad) / span.x).min((h - 2.0 * pad) / span.y);
    let f = Frame { min, scale, height: h, pad };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        style.width, style.height, style.width, style.height
    );
    let _ = writeln!(svg, r#"<title>{}</title>"#, escape(&log.scenario));
    let _ = writeln!(svg, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    for s in &log.stages {
        let _ = writeln!(
            svg,
            r##"<polygon class="goal" points="{}" fill="none" stroke="#2a9d4b" stroke-dasharray="2,2"/>"##,
            f.points(&corners(&s.goal, footprint))
        );
        if s.reference.len() > 1 {
            let _ = writeln!(
                svg,
                r##"<polyline class="reference" points="{}" fill="none" stroke="#888888" stroke-dasharray="6,4"/>"##,
                f.points(&s.reference)
            );
        }
    }
    for (pose, stage) in &frames {
        let _ = writeln!(
            svg,
            r##"<polygon class="footprint" points="{}" fill="#4a7fc1" fill-opacity="0.12" stroke="#4a7fc1"/>"##,
            f.points(&corners(pose, footprint))
        );
        if let Some(s) = log.stages.get(*stage) {
            for c in &s.contacts {
                let (x, y) = f.px(&pose.transform_point(c));
                let _ = writeln!(svg, r##"<circle class="contact" cx="{x:.2}" cy="{y:.2}" r="3" fill="#d1495b"/>"##);
            }
        }
    }
    if com.len() > 1 {
        let _ = writeln!(
            svg,
            r##"<polyline class="path" points="{}" fill="none" stroke="#1d3557" stroke-width="1.5"/>"##,
            f.points(&com)
        );
    }
    if trace.len() > 1 {
        let _ = writeln!(
            svg,
            r##"<polyline class="tracking" points="{}" fill="none" stroke="#e76f51" stroke-width="1"/>"##,
            f.points(&trace)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
