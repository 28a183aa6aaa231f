//! Convex polygons under the Eikonal (parallel inward offset) flow, and
//! equilibrium counting with respect to a reference point.

use serde::Serialize;

use crate::error::{Error, Result};

pub type Point = [f64; 2];

#[inline]
fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
fn norm(a: Point) -> f64 {
    dot(a, a).sqrt()
}

/// Supporting line `n·x = c` with unit inward normal `n`; the interior is
/// `n·x ≥ c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Line {
    pub n: Point,
    pub c: f64,
}

/// Point on both lines, if they are not parallel.
fn intersect(a: &Line, b: &Line) -> Option<Point> {
    let det = cross(a.n, b.n);
    if det.abs() < 1e-14 {
        return None;
    }
    Some([
        (a.c * b.n[1] - b.c * a.n[1]) / det,
        (a.n[0] * b.c - b.n[0] * a.c) / det,
    ])
}

/// A strictly convex polygon with counter-clockwise vertices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

/// An edge that shrank to zero length during an offset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CollapseEvent {
    pub t: f64,
    /// Index of the edge in the polygon the offset started from.
    pub edge: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PolyCriticalKind {
    /// Foot of the perpendicular on an edge.
    EdgeMinimum,
    /// Vertex farther than its neighborhood on both edges.
    VertexMaximum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolyCriticalPoint {
    pub kind: PolyCriticalKind,
    /// Edge index for minima, vertex index for maxima.
    pub index: usize,
    pub location: Point,
    pub distance: f64,
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidPolygon(format!("need at least 3 vertices, got {n}")));
        }
        if vertices.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPolygon("vertex coordinates must be finite".into()));
        }
        let poly = Self { vertices };
        let diam = poly.diameter();
        for i in 0..n {
            let (a, b) = (poly.vertices[i], poly.vertices[(i + 1) % n]);
            if norm(sub(b, a)) <= 1e-12 * diam {
                return Err(Error::InvalidPolygon(format!("vertices {i} and {} coincide", (i + 1) % n)));
            }
        }
        for i in 0..n {
            let (a, b, c) = (
                poly.vertices[i],
                poly.vertices[(i + 1) % n],
                poly.vertices[(i + 2) % n],
            );
            if !(cross(sub(b, a), sub(c, b)) > 0.0) {
                return Err(Error::InvalidPolygon(format!(
                    "not strictly convex and counter-clockwise at vertex {}",
                    (i + 1) % n
                )));
            }
        }
        if !(poly.area() > 0.0) {
            return Err(Error::InvalidPolygon("polygon has no area".into()));
        }
        Ok(poly)
    }

    /// Square `[x0, x0+side] × [y0, y0+side]`.
    pub fn square(x0: f64, y0: f64, side: f64) -> Result<Self> {
        Self::new(vec![
            [x0, y0],
            [x0 + side, y0],
            [x0 + side, y0 + side],
            [x0, y0 + side],
        ])
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn area(&self) -> f64 {
        let n = self.len();
        0.5 * (0..n)
            .map(|i| cross(self.vertices[i], self.vertices[(i + 1) % n]))
            .sum::<f64>()
    }

    pub fn centroid(&self) -> Point {
        let n = self.len();
        // Shift to the first vertex for conditioning.
        let o = self.vertices[0];
        let (mut a, mut cx, mut cy) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let p = sub(self.vertices[i], o);
            let q = sub(self.vertices[(i + 1) % n], o);
            let w = cross(p, q);
            a += w;
            cx += (p[0] + q[0]) * w;
            cy += (p[1] + q[1]) * w;
        }
        [o[0] + cx / (3.0 * a), o[1] + cy / (3.0 * a)]
    }

    pub fn diameter(&self) -> f64 {
        let mut d = 0.0_f64;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max(norm(sub(*a, *b)));
            }
        }
        d
    }

    pub(crate) fn lines(&self) -> Vec<Line> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
                let e = sub(b, a);
                let l = norm(e);
                let nrm = [-e[1] / l, e[0] / l];
                Line { n: nrm, c: dot(nrm, a) }
            })
            .collect()
    }

    /// Signed distance from `p` to each edge line (positive inside).
    pub fn edge_distances(&self, p: Point) -> Vec<f64> {
        self.lines().iter().map(|l| dot(l.n, p) - l.c).collect()
    }

    /// Largest inscribed circle `(center, radius)`.
    ///
    /// When the maximal circle can slide (two parallel edges bind it), the
    /// center with the smallest `y`, then the smallest `x`, is returned.
    pub fn incircle(&self) -> (Point, f64) {
        incircle_of_lines(&self.lines()).expect("a valid polygon has an incircle")
    }

    pub fn inradius(&self) -> f64 {
        self.incircle().1
    }

    /// `p` lies strictly inside, by more than `1e-12` of the diameter.
    pub fn contains_strictly(&self, p: Point) -> bool {
        let tol = 1e-12 * self.diameter();
        self.edge_distances(p).iter().all(|&d| d > tol)
    }

    /// Inward parallel offset by `t`.
    pub fn eikonal_offset(&self, t: f64) -> Result<ConvexPolygon> {
        Ok(self.eikonal_offset_with_events(t)?.0)
    }

    /// Inward offset by `t`, removing edges as they shrink to zero length.
    pub fn eikonal_offset_with_events(&self, t: f64) -> Result<(ConvexPolygon, Vec<CollapseEvent>)> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::Usage(format!("offset must be non-negative, got {t}")));
        }
        let inradius = self.inradius();
        if t >= inradius {
            return Err(Error::PolygonVanished { t, inradius });
        }
        let mut state = OffsetState::new(self);
        let mut events = Vec::new();
        state.advance(t, &mut events)?;
        Ok((state.polygon()?, events))
    }

    /// Critical points of the distance from `reference` along the boundary.
    pub fn critical_points(&self, reference: Point) -> Result<Vec<PolyCriticalPoint>> {
        if !self.contains_strictly(reference) {
            return Err(Error::Domain(format!(
                "reference {reference:?} is not strictly inside the polygon"
            )));
        }
        let n = self.len();
        let v = &self.vertices;
        let s = self.foot_parameters(reference);
        let mut out = Vec::new();
        for i in 0..n {
            if s[i] > 0.0 && s[(i + n - 1) % n] < 1.0 {
                out.push(PolyCriticalPoint {
                    kind: PolyCriticalKind::VertexMaximum,
                    index: i,
                    location: v[i],
                    distance: norm(sub(v[i], reference)),
                });
            }
            if s[i] > 0.0 && s[i] < 1.0 {
                let e = sub(v[(i + 1) % n], v[i]);
                let foot = [v[i][0] + s[i] * e[0], v[i][1] + s[i] * e[1]];
                out.push(PolyCriticalPoint {
                    kind: PolyCriticalKind::EdgeMinimum,
                    index: i,
                    location: foot,
                    distance: norm(sub(foot, reference)),
                });
            }
        }
        Ok(out)
    }

    /// Foot parameter of `p` on each edge, 0 at the edge's start vertex and
    /// 1 at its end.
    pub fn foot_parameters(&self, p: Point) -> Vec<f64> {
        let n = self.len();
        let v = &self.vertices;
        (0..n)
            .map(|i| {
                let e = sub(v[(i + 1) % n], v[i]);
                dot(sub(p, v[i]), e) / dot(e, e)
            })
            .collect()
    }

    /// Number of static equilibria with respect to `reference`.
    pub fn critical_point_count(&self, reference: Point) -> Result<usize> {
        Ok(self.critical_points(reference)?.len())
    }

    /// Similarity transform `x → scale·(x − origin)`.
    pub fn transformed(&self, origin: Point, scale: f64) -> ConvexPolygon {
        ConvexPolygon {
            vertices: self
                .vertices
                .iter()
                .map(|p| [scale * (p[0] - origin[0]), scale * (p[1] - origin[1])])
                .collect(),
        }
    }
}

/// Maximal circle inside `n_i·x ≥ c_i + ρ` by enumerating binding triples.
pub(crate) fn incircle_of_lines(lines: &[Line]) -> Option<(Point, f64)> {
    let n = lines.len();
    let mut best: Option<(Point, f64)> = None;
    let scale = lines.iter().map(|l| l.c.abs()).fold(1.0, f64::max);
    let tol = 1e-12 * scale;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let Some((p, rho)) = solve_triple(&lines[i], &lines[j], &lines[k]) else {
                    continue;
                };
                if !(rho > 0.0) {
                    continue;
                }
                if lines.iter().any(|l| dot(l.n, p) - l.c < rho - tol) {
                    continue;
                }
                best = match best {
                    None => Some((p, rho)),
                    Some((bp, br)) => {
                        if rho > br + tol {
                            Some((p, rho))
                        } else if rho >= br - tol && (p[1], p[0]) < (bp[1], bp[0]) {
                            Some((p, rho.max(br)))
                        } else {
                            Some((bp, br.max(rho)))
                        }
                    }
                }
            }
        }
    }
    best
}

/// Center and radius of the circle tangent to three lines from inside.
fn solve_triple(a: &Line, b: &Line, c: &Line) -> Option<(Point, f64)> {
    // [n_x n_y −1] [x y ρ]^T = c for each line; Cramer's rule.
    let m = [
        [a.n[0], a.n[1], -1.0],
        [b.n[0], b.n[1], -1.0],
        [c.n[0], c.n[1], -1.0],
    ];
    let rhs = [a.c, b.c, c.c];
    let det3 = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det3(&m);
    if d.abs() < 1e-12 {
        return None;
    }
    let mut sol = [0.0; 3];
    for (col, s) in sol.iter_mut().enumerate() {
        let mut mm = m;
        for row in 0..3 {
            mm[row][col] = rhs[row];
        }
        *s = det3(&mm) / d;
    }
    Some(([sol[0], sol[1]], sol[2]))
}

/// Offset in progress: the surviving supporting lines, in boundary order,
/// with their original edge indices.
#[derive(Debug, Clone)]
pub(crate) struct OffsetState {
    pub lines: Vec<Line>,
    pub ids: Vec<usize>,
    pub t: f64,
}

impl OffsetState {
    pub fn new(poly: &ConvexPolygon) -> Self {
        let lines = poly.lines();
        let ids = (0..lines.len()).collect();
        Self { lines, ids, t: 0.0 }
    }

    /// Vertex `i` joins line `i − 1` and line `i`.
    pub fn vertices(&self) -> Result<Vec<Point>> {
        let n = self.lines.len();
        (0..n)
            .map(|i| {
                intersect(&self.lines[(i + n - 1) % n], &self.lines[i]).ok_or(Error::PolygonVanished {
                    t: self.t,
                    inradius: 0.0,
                })
            })
            .collect()
    }

    pub fn polygon(&self) -> Result<ConvexPolygon> {
        Ok(ConvexPolygon {
            vertices: self.vertices()?,
        })
    }

    /// Edge lengths and their rates of change under unit inward speed.
    fn edge_rates(&self) -> Result<Vec<(f64, f64)>> {
        let n = self.lines.len();
        let v = self.vertices()?;
        // Vertex velocity u solves n_{i−1}·u = 1, n_i·u = 1.
        let u: Vec<Point> = (0..n)
            .map(|i| {
                let (a, b) = (&self.lines[(i + n - 1) % n], &self.lines[i]);
                let det = cross(a.n, b.n);
                [(b.n[1] - a.n[1]) / det, (a.n[0] - b.n[0]) / det]
            })
            .collect();
        Ok((0..n)
            .map(|i| {
                let e = [self.lines[i].n[1], -self.lines[i].n[0]];
                let j = (i + 1) % n;
                (dot(sub(v[j], v[i]), e), dot(sub(u[j], u[i]), e))
            })
            .collect())
    }

    /// Time until the next edge collapse, if any edge is shrinking.
    pub fn next_collapse(&self) -> Result<Option<f64>> {
        Ok(self
            .edge_rates()?
            .iter()
            .filter(|(_, rate)| *rate < 0.0)
            .map(|(len, rate)| (-len / rate).max(0.0))
            .min_by(f64::total_cmp))
    }

    fn shift(&mut self, dt: f64) {
        for l in &mut self.lines {
            l.c += dt;
        }
        self.t += dt;
    }

    /// Offsets by `dt` more, removing collapsed edges on the way.
    pub fn advance(&mut self, dt: f64, events: &mut Vec<CollapseEvent>) -> Result<()> {
        let target = self.t + dt;
        loop {
            let remaining = target - self.t;
            let rates = self.edge_rates()?;
            let scale = rates.iter().map(|r| r.0.abs()).fold(0.0, f64::max).max(1e-300);
            let next = rates
                .iter()
                .filter(|(_, r)| *r < 0.0)
                .map(|(l, r)| (-l / r).max(0.0))
                .fold(f64::INFINITY, f64::min);
            if next > remaining {
                self.shift(remaining);
                return Ok(());
            }
            self.shift(next);
            // Drop every edge that is now (numerically) gone.
            let rates = self.edge_rates()?;
            let mut keep_lines = Vec::with_capacity(self.lines.len());
            let mut keep_ids = Vec::with_capacity(self.lines.len());
            for (i, (len, _)) in rates.iter().enumerate() {
                if *len <= 1e-12 * scale {
                    events.push(CollapseEvent {
                        t: self.t,
                        edge: self.ids[i],
                    });
                } else {
                    keep_lines.push(self.lines[i]);
                    keep_ids.push(self.ids[i]);
                }
            }
            if keep_lines.len() == self.lines.len() {
                // Rounding left the collapsing edge marginally positive.
                let (i, _) = rates
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1 .0.total_cmp(&b.1 .0))
                    .expect("non-empty");
                events.push(CollapseEvent {
                    t: self.t,
                    edge: self.ids[i],
                });
                keep_lines.remove(i);
                keep_ids.remove(i);
            }
            if keep_lines.len() < 3 {
                return Err(Error::PolygonVanished {
                    t: self.t,
                    inradius: 0.0,
                });
            }
            self.lines = keep_lines;
            self.ids = keep_ids;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> ConvexPolygon {
        let h = 3f64.sqrt() / 2.0;
        ConvexPolygon::new(vec![[0.0, 0.0], [1.0, 0.0], [0.5, h]]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(ConvexPolygon::new(vec![[0.0, 0.0], [1.0, 0.0]]).is_err());
        // Clockwise.
        assert!(ConvexPolygon::new(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]]).is_err());
        // Collinear middle vertex.
        assert!(ConvexPolygon::new(vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [1.0, 1.0]]).is_err());
        // Repeated vertex.
        assert!(ConvexPolygon::new(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).is_err());
    }

    #[test]
    fn square_basics() {
        let s = ConvexPolygon::square(-1.0, -1.0, 2.0).unwrap();
        assert_eq!(s.area(), 4.0);
        assert_eq!(s.centroid(), [0.0, 0.0]);
        let (c, r) = s.incircle();
        assert!((r - 1.0).abs() < 1e-14 && c[0].abs() < 1e-14 && c[1].abs() < 1e-14);
    }

    #[test]
    fn square_offset() {
        let s = ConvexPolygon::square(-1.0, -1.0, 2.0).unwrap();
        let o = s.eikonal_offset(0.5).unwrap();
        let expected = ConvexPolygon::square(-0.5, -0.5, 1.0).unwrap();
        for (a, b) in o.vertices().iter().zip(expected.vertices()) {
            assert!((a[0] - b[0]).abs() < 1e-14 && (a[1] - b[1]).abs() < 1e-14);
        }
        assert!(matches!(s.eikonal_offset(1.0), Err(Error::PolygonVanished { .. })));
    }

    #[test]
    fn triangle_offset_is_similar() {
        let tri = triangle();
        let (ic, r) = tri.incircle();
        for t in [0.05, 0.1, 0.2, 0.28] {
            let o = tri.eikonal_offset(t).unwrap();
            assert_eq!(o.len(), 3);
            let k = (r - t) / r;
            for (a, b) in o.vertices().iter().zip(tri.vertices()) {
                let expect = [ic[0] + k * (b[0] - ic[0]), ic[1] + k * (b[1] - ic[1])];
                assert!((a[0] - expect[0]).abs() < 1e-12 && (a[1] - expect[1]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn offset_removes_short_edge() {
        // A square with one corner clipped by a short edge; the clip edge
        // collapses first.
        let p = ConvexPolygon::new(vec![
            [0.0, 0.0],
            [2.0, 0.0],
            [2.0, 1.9],
            [1.9, 2.0],
            [0.0, 2.0],
        ])
        .unwrap();
        let (o, ev) = p.eikonal_offset_with_events(0.5).unwrap();
        assert_eq!(o.len(), 4);
        assert_eq!(ev.len(), 1);
        assert_eq!(ev[0].edge, 2);
        assert!(ev[0].t > 0.0 && ev[0].t < 0.5);
        // Edge directions are preserved.
        let before: Vec<_> = p.lines().iter().map(|l| l.n).collect();
        for l in o.lines() {
            assert!(before.iter().any(|n| (n[0] - l.n[0]).abs() < 1e-12 && (n[1] - l.n[1]).abs() < 1e-12));
        }
    }

    #[test]
    fn square_center_has_eight_equilibria() {
        let s = ConvexPolygon::square(-1.0, -1.0, 2.0).unwrap();
        let pts = s.critical_points([0.0, 0.0]).unwrap();
        assert_eq!(pts.len(), 8);
        assert_eq!(pts.iter().filter(|p| p.kind == PolyCriticalKind::EdgeMinimum).count(), 4);
        assert!(s.critical_point_count([1.0, 0.0]).is_err());
    }

    #[test]
    fn triangle_incenter_has_six_equilibria() {
        let tri = triangle();
        assert_eq!(tri.critical_point_count(tri.incircle().0).unwrap(), 6);
    }
}
