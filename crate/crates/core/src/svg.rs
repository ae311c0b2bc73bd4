//! SVG 1.1 figure of a rounded body: `T*A`, its inner and outer circles,
//! contact directions, and the images of the canonical and John ellipses.

use std::f64::consts::PI;
use std::fmt::Write;

use crate::banach_mazur::RoundingResult;
use crate::geometry::{Ellipse, LinearMap2, SymmetricConvexBody, Vec2};

const SIZE: f64 = 480.0;
const MARGIN: f64 = 40.0;

struct Frame {
    scale: f64,
}

impl Frame {
    fn x(&self, p: Vec2) -> f64 {
        SIZE / 2.0 + self.scale * p.x
    }

    fn y(&self, p: Vec2) -> f64 {
        SIZE / 2.0 - self.scale * p.y
    }

    fn path(&self, pts: &[Vec2]) -> String {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let _ = write!(
                d,
                "{}{:.3},{:.3} ",
                if i == 0 { "M" } else { "L" },
                self.x(*p),
                self.y(*p)
            );
        }
        d.push('Z');
        d
    }
}

fn ellipse_points(e: &Ellipse, m: &LinearMap2) -> Vec<Vec2> {
    (0..256)
        .map(|k| m.apply(e.point(2.0 * PI * k as f64 / 256.0)))
        .collect()
}

/// Render the figure. `john` is drawn after mapping by `T*`; the canonical
/// ellipse maps to the inner circle.
pub fn render(body: &SymmetricConvexBody, result: &RoundingResult, john: Option<&Ellipse>) -> String {
    let t = &result.t_star;
    let f = Frame {
        scale: (SIZE / 2.0 - MARGIN) / result.outer,
    };
    let mut boundary: Vec<Vec2> = match body.vertices() {
        Some(v) => v.iter().map(|p| t.apply(*p)).collect(),
        None => body.half_boundary().iter().map(|p| t.apply(*p)).collect(),
    };
    if body.vertices().is_none() {
        let neg: Vec<Vec2> = boundary.iter().map(|p| -*p).collect();
        boundary.extend(neg);
    }

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<title>Rounded body, rho = {:.9}</title>"#, result.rho);
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(
        s,
        r##"<path id="body" d="{}" fill="#dde8f4" stroke="#1f4e79" stroke-width="1.5"/>"##,
        f.path(&boundary)
    );
    let (cx, cy) = (SIZE / 2.0, SIZE / 2.0);
    let _ = writeln!(
        s,
        r##"<circle id="outer-circle" cx="{cx}" cy="{cy}" r="{:.3}" fill="none" stroke="#b22222" stroke-dasharray="6,4"/>"##,
        f.scale * result.outer
    );
    let _ = writeln!(
        s,
        r##"<circle id="inner-circle" cx="{cx}" cy="{cy}" r="{:.3}" fill="none" stroke="#2e7d32" stroke-dasharray="2,3"/>"##,
        f.scale * result.inner
    );
    if let Some(j) = john {
        let _ = writeln!(
            s,
            r##"<path id="john-ellipse" d="{}" fill="none" stroke="#6a1b9a" stroke-width="1"/>"##,
            f.path(&ellipse_points(j, t))
        );
    }
    let marks = |s: &mut String, angles: &[f64], r: f64, class: &str, color: &str| {
        for &a in angles {
            for sign in [1.0, -1.0] {
                let p = Vec2::from_angle(a) * (sign * r);
                let _ = writeln!(
                    s,
                    r#"<circle class="{class}" cx="{:.3}" cy="{:.3}" r="4" fill="{color}"/>"#,
                    f.x(p),
                    f.y(p)
                );
            }
        }
    };
    marks(&mut s, &result.outer_contacts, result.outer, "outer-contact", "#b22222");
    marks(&mut s, &result.inner_contacts, result.inner, "inner-contact", "#2e7d32");
    let note = if result.full_circle {
        "inner and outer circles coincide (ellipse); every direction is a contact".to_string()
    } else {
        format!(
            "rho = {:.9}, {} outer / {} inner contacts, certified = {}",
            result.rho,
            result.outer_contacts.len(),
            result.inner_contacts.len(),
            result.certified
        )
    };
    let _ = writeln!(
        s,
        r#"<text id="note" x="10" y="{}" font-family="sans-serif" font-size="12">{note}</text>"#,
        SIZE - 12.0
    );
    s.push_str("</svg>\n");
    s
}
