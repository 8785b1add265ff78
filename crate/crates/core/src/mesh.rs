//! Geometry and boundary discretization primitives.
//!
//! Boundaries are polylines of straight two-node elements. The element normal
//! always points to the right of the traversal direction, so a fluid region
//! lies to the left of its boundary: interior regions are traversed
//! counterclockwise and exterior regions (the fluid around an obstacle)
//! clockwise. With that convention the normal points out of the fluid in both
//! cases.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{FsiError, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point2D) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Point at `t` in [0, 1] on the segment from `self` to `other`.
    pub fn lerp(&self, other: &Point2D, t: f64) -> Point2D {
        Point2D::new(self.x + t * (other.x - self.x), self.y + t * (other.y - self.y))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitNormal {
    pub nx: f64,
    pub ny: f64,
}

impl UnitNormal {
    pub fn dot(&self, v: (f64, f64)) -> f64 {
        self.nx * v.0 + self.ny * v.1
    }
}

/// Which side of the boundary the fluid occupies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// Bounded fluid region inside the loop (counterclockwise traversal).
    Interior,
    /// Unbounded fluid outside the loop (clockwise traversal).
    Exterior,
}

/// Oriented polyline of linear boundary elements with continuous node numbering.
#[derive(Clone, Debug)]
pub struct BoundaryMesh {
    nodes: Vec<Point2D>,
    elements: Vec<[usize; 2]>,
    orientation: Orientation,
    groups: Vec<usize>,
    lengths: Vec<f64>,
    normals: Vec<UnitNormal>,
    incoming: Vec<Option<usize>>,
    outgoing: Vec<Option<usize>>,
}

impl BoundaryMesh {
    /// Validates connectivity and caches lengths and normals. `groups` tags each
    /// element with a caller-defined id (e.g. the side of a rectangle).
    pub fn new(
        nodes: Vec<Point2D>,
        elements: Vec<[usize; 2]>,
        orientation: Orientation,
        groups: Option<Vec<usize>>,
    ) -> Result<Self> {
        if elements.is_empty() {
            return Err(FsiError::InvalidMesh("mesh has no elements".into()));
        }
        if let Some(p) = nodes.iter().find(|p| !p.is_finite()) {
            return Err(FsiError::InvalidMesh(format!("non-finite node coordinate {p:?}")));
        }
        let groups = groups.unwrap_or_else(|| vec![0; elements.len()]);
        if groups.len() != elements.len() {
            return Err(FsiError::InvalidArgument("one group tag per element required".into()));
        }
        let mut incoming = vec![None; nodes.len()];
        let mut outgoing = vec![None; nodes.len()];
        let mut lengths = Vec::with_capacity(elements.len());
        let mut normals = Vec::with_capacity(elements.len());
        for (e, &[a, b]) in elements.iter().enumerate() {
            if a >= nodes.len() || b >= nodes.len() {
                return Err(FsiError::InvalidMesh(format!("element {e} references a missing node")));
            }
            let l = nodes[a].distance(&nodes[b]);
            if !(l > 0.0) {
                return Err(FsiError::InvalidMesh(format!("element {e} has zero length")));
            }
            if outgoing[a].replace(e).is_some() || incoming[b].replace(e).is_some() {
                return Err(FsiError::InvalidMesh(format!(
                    "element {e} breaks the single-polyline connectivity"
                )));
            }
            let (dx, dy) = (nodes[b].x - nodes[a].x, nodes[b].y - nodes[a].y);
            lengths.push(l);
            normals.push(UnitNormal { nx: dy / l, ny: -dx / l });
        }
        let mesh = Self {
            nodes,
            elements,
            orientation,
            groups,
            lengths,
            normals,
            incoming,
            outgoing,
        };
        mesh.check_orientation()?;
        Ok(mesh)
    }

    fn check_orientation(&self) -> Result<()> {
        for lp in self.closed_loops() {
            let area: f64 = lp
                .iter()
                .map(|&e| {
                    let [a, b] = self.elements[e];
                    let (p, q) = (self.nodes[a], self.nodes[b]);
                    0.5 * (p.x * q.y - q.x * p.y)
                })
                .sum();
            let ok = match self.orientation {
                Orientation::Interior => area > 0.0,
                Orientation::Exterior => area < 0.0,
            };
            if !ok {
                return Err(FsiError::InvalidMesh(format!(
                    "closed loop with signed area {area} contradicts {:?} orientation",
                    self.orientation
                )));
            }
        }
        Ok(())
    }

    /// Element lists of every closed loop, in traversal order.
    pub fn closed_loops(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.elements.len()];
        let mut loops = Vec::new();
        for start in 0..self.elements.len() {
            if seen[start] {
                continue;
            }
            let mut lp = vec![start];
            seen[start] = true;
            let mut e = start;
            let closed = loop {
                match self.outgoing[self.elements[e][1]] {
                    Some(next) if next == start => break true,
                    Some(next) if !seen[next] => {
                        seen[next] = true;
                        lp.push(next);
                        e = next;
                    }
                    _ => break false,
                }
            };
            if closed {
                loops.push(lp);
            }
        }
        loops
    }

    pub fn nodes(&self) -> &[Point2D] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> Point2D {
        self.nodes[i]
    }

    pub fn elements(&self) -> &[[usize; 2]] {
        &self.elements
    }

    pub fn element(&self, e: usize) -> [usize; 2] {
        self.elements[e]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn element_count(&self) -> usize {
        self.elements.len()
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn group(&self, e: usize) -> usize {
        self.groups[e]
    }

    pub fn length(&self, e: usize) -> f64 {
        self.lengths[e]
    }

    pub fn total_length(&self) -> f64 {
        self.lengths.iter().sum()
    }

    pub fn incoming(&self, node: usize) -> Option<usize> {
        self.incoming[node]
    }

    pub fn outgoing(&self, node: usize) -> Option<usize> {
        self.outgoing[node]
    }

    pub fn element_normal(&self, e: usize) -> Result<UnitNormal> {
        self.normals
            .get(e)
            .copied()
            .ok_or_else(|| FsiError::InvalidArgument(format!("element index {e} out of range")))
    }

    /// Fraction `theta / 2pi` of the full angle occupied by the fluid at `node`.
    pub fn corner_coefficient(&self, node: usize) -> Result<f64> {
        if node >= self.nodes.len() {
            return Err(FsiError::InvalidArgument(format!("node index {node} out of range")));
        }
        match (self.incoming[node], self.outgoing[node]) {
            (Some(ein), Some(eout)) => {
                let din = self.direction(ein);
                let dout = self.direction(eout);
                let cross = din.0 * dout.1 - din.1 * dout.0;
                let dot = din.0 * dout.0 + din.1 * dout.1;
                let turning = cross.atan2(dot);
                Ok((PI - turning) / (2.0 * PI))
            }
            _ => Err(FsiError::InvalidMesh(format!("node {node} is dangling"))),
        }
    }

    /// True when the two elements meeting at `node` are not collinear, or the
    /// node terminates an open polyline.
    pub fn is_corner(&self, node: usize) -> bool {
        match self.corner_coefficient(node) {
            Ok(c) => (c - 0.5).abs() > 1e-9,
            Err(_) => true,
        }
    }

    fn direction(&self, e: usize) -> (f64, f64) {
        let [a, b] = self.elements[e];
        let l = self.lengths[e];
        ((self.nodes[b].x - self.nodes[a].x) / l, (self.nodes[b].y - self.nodes[a].y) / l)
    }

    /// Nodes of group `g` in traversal order, including the end nodes.
    pub fn group_nodes(&self, g: usize) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for (e, &[a, b]) in self.elements.iter().enumerate() {
            if self.groups[e] != g {
                continue;
            }
            if out.last() != Some(&a) {
                out.push(a);
            }
            out.push(b);
        }
        out
    }

    /// Elements of group `g` in traversal order.
    pub fn group_elements(&self, g: usize) -> Vec<usize> {
        (0..self.elements.len()).filter(|&e| self.groups[e] == g).collect()
    }

    /// Plain-text dump: `nodes <N> elements <E>`, node coordinates, then 0-based connectivity.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "nodes {} elements {}", self.nodes.len(), self.elements.len());
        for p in &self.nodes {
            let _ = writeln!(s, "{:.17e} {:.17e}", p.x, p.y);
        }
        for [a, b] in &self.elements {
            let _ = writeln!(s, "{a} {b}");
        }
        s
    }
}

/// `n` equal elements from `start` to `end`.
pub fn build_line_mesh(start: Point2D, end: Point2D, n: usize) -> Result<BoundaryMesh> {
    if n == 0 {
        return Err(FsiError::InvalidArgument("line mesh needs at least one element".into()));
    }
    if start.distance(&end) == 0.0 {
        return Err(FsiError::InvalidArgument("line mesh endpoints coincide".into()));
    }
    let nodes = (0..=n).map(|i| start.lerp(&end, i as f64 / n as f64)).collect();
    let elements = (0..n).map(|i| [i, i + 1]).collect();
    BoundaryMesh::new(nodes, elements, Orientation::Interior, None)
}

/// Side tags used by rectangle meshes.
pub mod side {
    pub const BOTTOM: usize = 0;
    pub const RIGHT: usize = 1;
    pub const TOP: usize = 2;
    pub const LEFT: usize = 3;
}

/// Closed counterclockwise rectangle `[0, width] x [0, height]` with per-side
/// element counts `round(length * n_per_unit)`, at least one.
pub fn build_rectangle_boundary(width: f64, height: f64, n_per_unit: f64) -> Result<BoundaryMesh> {
    if !(width > 0.0 && height > 0.0) {
        return Err(FsiError::InvalidArgument(format!(
            "rectangle dimensions must be positive, got {width} x {height}"
        )));
    }
    if !(n_per_unit > 0.0) {
        return Err(FsiError::InvalidArgument("element density must be positive".into()));
    }
    let nx = ((width * n_per_unit).round() as usize).max(1);
    let ny = ((height * n_per_unit).round() as usize).max(1);
    rectangle_with_counts(Point2D::new(0.0, 0.0), width, height, [nx, ny, nx, ny], Orientation::Interior)
}

/// Rectangle with lower-left corner `origin` and explicit element counts for the
/// `[bottom, right, top, left]` sides. Interior meshes run counterclockwise from
/// the lower-left corner, exterior meshes clockwise. Elements carry the side tag
/// from [`side`].
pub fn rectangle_with_counts(
    origin: Point2D,
    width: f64,
    height: f64,
    counts: [usize; 4],
    orientation: Orientation,
) -> Result<BoundaryMesh> {
    if !(width > 0.0 && height > 0.0) {
        return Err(FsiError::InvalidArgument(format!(
            "rectangle dimensions must be positive, got {width} x {height}"
        )));
    }
    if counts.iter().any(|&c| c == 0) {
        return Err(FsiError::InvalidArgument("every rectangle side needs an element".into()));
    }
    let (x0, y0) = (origin.x, origin.y);
    let (x1, y1) = (x0 + width, y0 + height);
    let corners = [
        Point2D::new(x0, y0),
        Point2D::new(x1, y0),
        Point2D::new(x1, y1),
        Point2D::new(x0, y1),
    ];
    // (from corner, to corner, side tag, element count) in traversal order
    let sides: Vec<(usize, usize, usize)> = match orientation {
        Orientation::Interior => vec![(0, 1, side::BOTTOM), (1, 2, side::RIGHT), (2, 3, side::TOP), (3, 0, side::LEFT)],
        Orientation::Exterior => vec![(0, 3, side::LEFT), (3, 2, side::TOP), (2, 1, side::RIGHT), (1, 0, side::BOTTOM)],
    };
    let mut nodes = Vec::new();
    let mut groups = Vec::new();
    for &(a, b, tag) in &sides {
        let n = counts[tag];
        for i in 0..n {
            nodes.push(corners[a].lerp(&corners[b], i as f64 / n as f64));
            groups.push(tag);
        }
    }
    let n = nodes.len();
    let elements = (0..n).map(|i| [i, (i + 1) % n]).collect();
    BoundaryMesh::new(nodes, elements, orientation, Some(groups))
}

/// Arc-length description of one side of a straight coupling interface.
#[derive(Clone, Debug, PartialEq)]
pub struct InterfaceSide {
    /// Node indices in the owning discretization, ordered along the interface.
    pub nodes: Vec<usize>,
    /// Arc-length coordinate of each node measured from the interface start.
    pub coords: Vec<f64>,
}

impl InterfaceSide {
    pub fn max_spacing(&self) -> f64 {
        self.coords.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    pub fn min_spacing(&self) -> f64 {
        self.coords.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }
}

/// A straight coupling interface and the two node sets that discretize it.
/// For fluid-structure interfaces side A is the structure (non-mortar side).
#[derive(Clone, Debug, PartialEq)]
pub struct InterfaceDescriptor {
    pub start: Point2D,
    pub end: Point2D,
    pub side_a: InterfaceSide,
    pub side_b: InterfaceSide,
    dissimilarity: f64,
}

impl InterfaceDescriptor {
    /// Projects both node sets onto the segment `start -> end`. Nodes must lie on
    /// the segment within `1e-10` of its length and be strictly increasing.
    pub fn new(
        start: Point2D,
        end: Point2D,
        side_a: (&[usize], &[Point2D]),
        side_b: (&[usize], &[Point2D]),
    ) -> Result<Self> {
        let length = start.distance(&end);
        if length == 0.0 {
            return Err(FsiError::InvalidArgument("interface endpoints coincide".into()));
        }
        let project = |(ids, pts): (&[usize], &[Point2D]), label: &str| -> Result<InterfaceSide> {
            if ids.len() != pts.len() || pts.len() < 2 {
                return Err(FsiError::DegenerateInterface(format!(
                    "{label} side needs at least two nodes"
                )));
            }
            let (tx, ty) = ((end.x - start.x) / length, (end.y - start.y) / length);
            let mut coords = Vec::with_capacity(pts.len());
            for p in pts {
                let (dx, dy) = (p.x - start.x, p.y - start.y);
                let off = (dx * ty - dy * tx).abs();
                let s = dx * tx + dy * ty;
                if off > 1e-10 * length || s < -1e-10 * length || s > length * (1.0 + 1e-10) {
                    return Err(FsiError::Mismatch(format!(
                        "{label} node {p:?} is not on the interface segment"
                    )));
                }
                coords.push(s.clamp(0.0, length));
            }
            if coords.windows(2).any(|w| w[1] <= w[0]) {
                return Err(FsiError::Mismatch(format!("{label} nodes are not increasing along the interface")));
            }
            Ok(InterfaceSide {
                nodes: ids.to_vec(),
                coords,
            })
        };
        let side_a = project(side_a, "side A")?;
        let side_b = project(side_b, "side B")?;
        let hmax = side_a.max_spacing().max(side_b.max_spacing());
        let hmin = side_a.min_spacing().min(side_b.min_spacing());
        Ok(Self {
            start,
            end,
            side_a,
            side_b,
            dissimilarity: hmax / hmin,
        })
    }

    pub fn length(&self) -> f64 {
        self.start.distance(&self.end)
    }

    /// Mesh-dissimilarity parameter `h_max / h_min` over both sides.
    pub fn dissimilarity(&self) -> f64 {
        self.dissimilarity
    }

    /// Unit tangent from start to end.
    pub fn tangent(&self) -> (f64, f64) {
        let l = self.length();
        ((self.end.x - self.start.x) / l, (self.end.y - self.start.y) / l)
    }

    pub fn point_at(&self, s: f64) -> Point2D {
        self.start.lerp(&self.end, s / self.length())
    }
}
