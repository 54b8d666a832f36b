//! Deterministic SVG drawings of matchings, 2-factors and squished matchings.

use std::fmt::Write as _;

use crate::mesh::{FaceClass, FaceId, HexMesh, Matching, PropellerMap};
use crate::overlay::TwoFactor;
use crate::squish::project;
use crate::Result;

const SCALE: f64 = 40.0;
const SQRT3_2: f64 = 0.866_025_403_784_438_6;

/// Planar lattice point to drawing coordinates; the lattice axes are 120
/// degrees apart and y grows downward in SVG.
fn point(u: f64, v: f64) -> (f64, f64) {
    ((u - v / 2.0) * SCALE, -v * SQRT3_2 * SCALE)
}

fn centroid(mesh: &HexMesh, vertex: usize) -> (f64, f64) {
    let (x, y) = mesh.vertices()[vertex].centroid3();
    point(x as f64 / 3.0, y as f64 / 3.0)
}

fn class_name(c: FaceClass) -> &'static str {
    match c {
        FaceClass::A => "A",
        FaceClass::B => "B",
        FaceClass::C => "C",
    }
}

struct Canvas {
    body: String,
    min: (f64, f64),
    max: (f64, f64),
}

impl Canvas {
    fn new(mesh: &HexMesh) -> Canvas {
        let mut c = Canvas { body: String::new(), min: (f64::MAX, f64::MAX), max: (f64::MIN, f64::MIN) };
        for f in mesh.edges() {
            for (u, v) in f.corners() {
                c.extend(point(u as f64, v as f64));
            }
        }
        c
    }

    fn extend(&mut self, (x, y): (f64, f64)) {
        self.min = (self.min.0.min(x), self.min.1.min(y));
        self.max = (self.max.0.max(x), self.max.1.max(y));
    }

    fn rhombus(&mut self, f: &FaceId, class: &str) {
        let pts: Vec<String> = f
            .corners()
            .iter()
            .map(|&(u, v)| {
                let (x, y) = point(u as f64, v as f64);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(self.body, r#"<polygon class="rhombus {class} {}" points="{}"/>"#, class_name(f.class), pts.join(" "));
    }

    fn segment(&mut self, a: (f64, f64), b: (f64, f64), class: &str) {
        let _ = writeln!(
            self.body,
            r#"<line class="{class}" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
            a.0, a.1, b.0, b.1
        );
    }

    fn finish(self) -> String {
        let pad = SCALE / 2.0;
        let (x0, y0) = (self.min.0 - pad, self.min.1 - pad);
        let (w, h) = (self.max.0 - self.min.0 + 2.0 * pad, self.max.1 - self.min.1 + 2.0 * pad);
        format!(
            concat!(
                "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.2} {:.2} {:.2} {:.2}\">\n",
                "<style>\n",
                ".rhombus {{ stroke: #333; stroke-width: 1; }}\n",
                ".rhombus.A {{ fill: #f2f2f2; }} .rhombus.B {{ fill: #b0b0b0; }} .rhombus.C {{ fill: #707070; }}\n",
                ".rhombus.outline {{ fill: none; stroke: #ccc; }}\n",
                ".doubled {{ stroke: #1f4e9c; stroke-width: 6; }}\n",
                ".loop {{ stroke: #c0392b; stroke-width: 2; stroke-dasharray: 6 3; }}\n",
                ".short {{ stroke: #999; stroke-width: 1; }}\n",
                ".dimer {{ stroke: #111; stroke-width: 3; }}\n",
                "</style>\n{}</svg>\n"
            ),
            x0, y0, w, h, self.body
        )
    }
}

/// The lozenge tiling of a matching: one filled rhombus per matched edge.
pub fn render_matching(mesh: &HexMesh, m: &Matching) -> String {
    let mut c = Canvas::new(mesh);
    for f in m.faces(mesh) {
        c.rhombus(&f, "tile");
    }
    c.finish()
}

/// Outline of every mesh rhombus, then doubled edges as thick segments and
/// loop edges as dashed segments between triangle centres.
pub fn render_two_factor(mesh: &HexMesh, lambda: &TwoFactor) -> String {
    let mut c = Canvas::new(mesh);
    for f in mesh.edges() {
        c.rhombus(f, "outline");
    }
    for &e in lambda.doubled() {
        let (x, y) = mesh.ends(e);
        c.segment(centroid(mesh, x), centroid(mesh, y), "doubled");
    }
    for lp in lambda.loops() {
        for &e in lp {
            let (x, y) = mesh.ends(e);
            c.segment(centroid(mesh, x), centroid(mesh, y), "loop");
        }
    }
    c.finish()
}

/// A matching of an even mesh as dimers, with the propeller short edges
/// faint, and its projected 2-factor drawn at double scale on top.
pub fn render_squish(pm: &PropellerMap, m: &Matching) -> Result<String> {
    let even = pm.even();
    let mut c = Canvas::new(even);
    for p in pm.propellers() {
        for &e in &p.short {
            let (x, y) = even.ends(e);
            c.segment(centroid(even, x), centroid(even, y), "short");
        }
    }
    for &e in m.edges() {
        let (x, y) = even.ends(e);
        c.segment(centroid(even, x), centroid(even, y), "dimer");
    }
    let lambda = project(pm, m)?;
    let base = pm.base();
    let doubled_pos = |v: usize| {
        let (x, y) = centroid(base, v);
        (2.0 * x, 2.0 * y)
    };
    for &e in lambda.doubled() {
        let (x, y) = base.ends(e);
        c.segment(doubled_pos(x), doubled_pos(y), "doubled");
    }
    for lp in lambda.loops() {
        for &e in lp {
            let (x, y) = base.ends(e);
            c.segment(doubled_pos(x), doubled_pos(y), "loop");
        }
    }
    Ok(c.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{all_matchings, matching_of, PlanePartition};
    use crate::mesh::BoxDims;
    use crate::overlay::overlay;

    #[test]
    fn rhombus_counts() {
        let d = BoxDims::new(3, 3, 3).unwrap();
        let mesh = HexMesh::new(d);
        let m = matching_of(&mesh, &PlanePartition::empty(d)).unwrap();
        let svg = render_matching(&mesh, &m);
        assert_eq!(svg.matches("<polygon").count(), 27);
        assert_eq!(svg, render_matching(&mesh, &m));
    }

    #[test]
    fn two_factor_styles() {
        let mesh = HexMesh::new(BoxDims::new(1, 1, 1).unwrap());
        let ms = all_matchings(&mesh);
        let svg = render_two_factor(&mesh, &overlay(&mesh, &ms[0], &ms[1]).unwrap());
        assert_eq!(svg.matches(r#"class="loop""#).count(), 6);
        let svg = render_two_factor(&mesh, &overlay(&mesh, &ms[0], &ms[0]).unwrap());
        assert_eq!(svg.matches(r#"class="doubled""#).count(), 3);
    }
}
