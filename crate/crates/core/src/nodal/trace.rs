//! Marching-squares extraction of the nodal set as polylines.
//!
//! Graph nodes are sign changes on grid edges (placed by linear
//! interpolation) and sample points known to be zeros. Each cell links the
//! nodes on its boundary. A zero sample where two branches cross has one
//! incident segment in each of the four surrounding cells; it is split into
//! two pass-through nodes pairing opposite quadrants, so that each smooth
//! branch becomes its own curve. After splitting every node must have degree
//! 1 (an end on the box boundary) or 2.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::grid::SignGrid;
use crate::error::{Error, Result};

pub type Point = (f64, f64);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub points: Vec<Point>,
    /// Closed curves repeat no point: the last point connects to the first.
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceResult {
    pub curves: Vec<Curve>,
    /// Connected components of the nodal set before crossings are split.
    pub nodal_set_components: usize,
    /// Double crossings (zero samples where two branches cross).
    pub singular_points: Vec<Point>,
    /// Curve ends on the box boundary.
    pub boundary_ends: usize,
    /// Cells that needed the star fallback (three or more boundary events
    /// other than a plain saddle).
    pub ambiguous_cells: usize,
}

impl TraceResult {
    pub fn closed_curves(&self) -> usize {
        self.curves.iter().filter(|c| c.closed).count()
    }

    pub fn open_curves(&self) -> usize {
        self.curves.iter().filter(|c| !c.closed).count()
    }
}

struct Node {
    pos: Point,
    boundary: bool,
    /// Grid coordinates for zero samples.
    vertex: Option<(usize, usize)>,
    edges: Vec<usize>,
}

struct Graph {
    nodes: HashMap<usize, Node>,
    /// Endpoints and the cell that produced the segment.
    edges: Vec<([usize; 2], usize)>,
    seen: HashSet<(usize, usize)>,
}

impl Graph {
    fn add_node(&mut self, id: usize, node: impl FnOnce() -> Node) {
        self.nodes.entry(id).or_insert_with(node);
    }

    fn add_edge(&mut self, a: usize, b: usize, cell: usize) {
        if a == b || !self.seen.insert((a.min(b), a.max(b))) {
            return;
        }
        let e = self.edges.len();
        self.edges.push(([a, b], cell));
        self.nodes.get_mut(&a).expect("node exists").edges.push(e);
        self.nodes.get_mut(&b).expect("node exists").edges.push(e);
    }
}

struct Event {
    id: usize,
    pos: Point,
    vertex: Option<(usize, usize)>,
    boundary: bool,
}

pub fn trace_nodal_curves(grid: &SignGrid) -> Result<TraceResult> {
    let (nx, ny) = (grid.nx(), grid.ny());
    let nv = nx * ny;
    let nh = (nx - 1) * ny;
    let nu = nx * (ny - 1);
    let star_base = nv + nh + nu;
    let vid = |i: usize, j: usize| j * nx + i;
    let hid = |i: usize, j: usize| nv + j * (nx - 1) + i;
    let uid = |i: usize, j: usize| nv + nh + j * nx + i;

    let mut g = Graph {
        nodes: HashMap::new(),
        edges: Vec::new(),
        seen: HashSet::new(),
    };
    let mut ambiguous_cells = 0;

    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let s: [i8; 4] = corners.map(|(a, b)| grid.sign(a, b));
            if s[0] != 0 && s.iter().all(|&v| v == s[0]) {
                continue;
            }
            let cell = j * (nx - 1) + i;
            let mut events: Vec<Event> = Vec::with_capacity(4);
            for k in 0..4 {
                let (ci, cj) = corners[k];
                if s[k] == 0 {
                    events.push(Event {
                        id: vid(ci, cj),
                        pos: (grid.xs[ci], grid.ys[cj]),
                        vertex: Some((ci, cj)),
                        boundary: ci == 0 || cj == 0 || ci == nx - 1 || cj == ny - 1,
                    });
                }
                let kn = (k + 1) % 4;
                if s[k] * s[kn] < 0 {
                    let (ai, aj) = corners[k];
                    let (bi, bj) = corners[kn];
                    let (va, vb) = (grid.value(ai, aj), grid.value(bi, bj));
                    let w = va / (va - vb);
                    let pos = (
                        grid.xs[ai] + w * (grid.xs[bi] - grid.xs[ai]),
                        grid.ys[aj] + w * (grid.ys[bj] - grid.ys[aj]),
                    );
                    let (id, boundary) = if aj == bj {
                        let lo = ai.min(bi);
                        (hid(lo, aj), aj == 0 || aj == ny - 1)
                    } else {
                        let lo = aj.min(bj);
                        (uid(ai, lo), ai == 0 || ai == nx - 1)
                    };
                    events.push(Event {
                        id,
                        pos,
                        vertex: None,
                        boundary,
                    });
                }
            }
            for e in &events {
                let (pos, boundary, vertex) = (e.pos, e.boundary, e.vertex);
                g.add_node(e.id, || Node {
                    pos,
                    boundary,
                    vertex,
                    edges: Vec::new(),
                });
            }
            match events.len() {
                0 | 1 => {}
                2 => g.add_edge(events[0].id, events[1].id, cell),
                4 if events.iter().all(|e| e.vertex.is_none()) => {
                    // alternating corners; events are bottom, right, top, left
                    let center = grid.saddle_centers.get(&cell).copied().unwrap_or_else(|| {
                        let m: f64 = corners.iter().map(|&(a, b)| grid.value(a, b)).sum();
                        if m >= 0.0 {
                            1
                        } else {
                            -1
                        }
                    });
                    if center == s[0] {
                        g.add_edge(events[0].id, events[1].id, cell);
                        g.add_edge(events[2].id, events[3].id, cell);
                    } else {
                        g.add_edge(events[3].id, events[0].id, cell);
                        g.add_edge(events[1].id, events[2].id, cell);
                    }
                }
                _ => {
                    ambiguous_cells += 1;
                    let star = star_base + cell;
                    let cx = 0.5 * (grid.xs[i] + grid.xs[i + 1]);
                    let cy = 0.5 * (grid.ys[j] + grid.ys[j + 1]);
                    g.add_node(star, || Node {
                        pos: (cx, cy),
                        boundary: false,
                        vertex: None,
                        edges: Vec::new(),
                    });
                    for e in &events {
                        g.add_edge(star, e.id, cell);
                    }
                }
            }
        }
    }

    let nodal_set_components = count_components(&g);
    let singular_points = split_crossings(&mut g, nx, star_base + (nx - 1) * (ny - 1));

    let mut ids: Vec<usize> = g.nodes.keys().copied().collect();
    ids.sort_unstable();
    let mut boundary_ends = 0;
    for id in &ids {
        let node = &g.nodes[id];
        match node.edges.len() {
            0 | 2 => {}
            1 if node.boundary => boundary_ends += 1,
            1 => {
                return Err(Error::Topology(format!(
                    "curve ends inside the box at ({:.6}, {:.6}); the grid is too coarse",
                    node.pos.0, node.pos.1
                )))
            }
            d => {
                return Err(Error::Topology(format!(
                    "branch point of degree {d} at ({:.6}, {:.6})",
                    node.pos.0, node.pos.1
                )))
            }
        }
    }

    let mut used = vec![false; g.edges.len()];
    let mut curves = Vec::new();
    for id in &ids {
        if g.nodes[id].edges.len() == 1 && !used[g.nodes[id].edges[0]] {
            curves.push(walk(&g, *id, &mut used, false));
        }
    }
    for id in &ids {
        if g.nodes[id].edges.iter().any(|&e| !used[e]) {
            curves.push(walk(&g, *id, &mut used, true));
        }
    }

    Ok(TraceResult {
        curves,
        nodal_set_components,
        singular_points,
        boundary_ends,
        ambiguous_cells,
    })
}

fn walk(g: &Graph, start: usize, used: &mut [bool], closed: bool) -> Curve {
    let mut points = vec![g.nodes[&start].pos];
    let mut cur = start;
    while let Some(&e) = g.nodes[&cur].edges.iter().find(|&&e| !used[e]) {
        used[e] = true;
        let [a, b] = g.edges[e].0;
        cur = if a == cur { b } else { a };
        if closed && cur == start {
            break;
        }
        points.push(g.nodes[&cur].pos);
    }
    Curve { points, closed }
}

fn count_components(g: &Graph) -> usize {
    let mut seen: HashSet<usize> = HashSet::new();
    let mut count = 0;
    for (&id, node) in &g.nodes {
        if node.edges.is_empty() || seen.contains(&id) {
            continue;
        }
        count += 1;
        let mut stack = vec![id];
        seen.insert(id);
        while let Some(v) = stack.pop() {
            for &e in &g.nodes[&v].edges {
                let [a, b] = g.edges[e].0;
                let w = if a == v { b } else { a };
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
    }
    count
}

/// Splits every zero sample with one segment in each quadrant cell into two
/// nodes (NE with SW, NW with SE). Returns the split positions, sorted.
fn split_crossings(g: &mut Graph, nx: usize, mut next_id: usize) -> Vec<Point> {
    let cells_per_row = nx - 1;
    let mut ids: Vec<usize> = g
        .nodes
        .iter()
        .filter(|(_, n)| n.vertex.is_some() && n.edges.len() == 4)
        .map(|(&id, _)| id)
        .collect();
    ids.sort_unstable();
    let mut points = Vec::new();
    for id in ids {
        let (vi, vj) = g.nodes[&id].vertex.expect("filtered");
        let mut quadrant = [None; 4];
        for &e in &g.nodes[&id].edges {
            let cell = g.edges[e].1;
            let (ci, cj) = (cell % cells_per_row, cell / cells_per_row);
            let q = match (ci == vi, cj == vj) {
                (true, true) => 0,   // NE
                (false, true) => 1,  // NW
                (false, false) => 2, // SW
                (true, false) => 3,  // SE
            };
            if quadrant[q].replace(e).is_some() {
                quadrant = [None; 4];
                break;
            }
        }
        let [Some(_ne), Some(nw), Some(_sw), Some(se)] = quadrant else {
            continue;
        };
        let node = g.nodes.get_mut(&id).expect("exists");
        node.edges.retain(|&e| e != nw && e != se);
        let (pos, boundary) = (node.pos, node.boundary);
        let twin = next_id;
        next_id += 1;
        for e in [nw, se] {
            for end in g.edges[e].0.iter_mut() {
                if *end == id {
                    *end = twin;
                }
            }
        }
        g.nodes.insert(
            twin,
            Node {
                pos,
                boundary,
                vertex: None,
                edges: vec![nw, se],
            },
        );
        points.push(pos);
    }
    points
}

/// Approximate crossings of the curves with the line `y = α x`.
///
/// Curves lying within `on_line_tol` of the line along their whole length
/// are part of the line and skipped. A crossing is a sign change of
/// `y - α x` along a curve; points exactly on the line are crossing points
/// only when the curve passes to the other side.
pub fn line_crossings(curves: &[Curve], alpha: f64, on_line_tol: f64) -> Vec<Point> {
    let mut out = Vec::new();
    for c in curves {
        let g: Vec<f64> = c.points.iter().map(|&(x, y)| y - alpha * x).collect();
        if g.iter().all(|v| v.abs() <= on_line_tol) {
            continue;
        }
        let nonzero: Vec<usize> = (0..g.len()).filter(|&k| g[k] != 0.0).collect();
        if nonzero.is_empty() {
            continue;
        }
        let mut pairs: Vec<(usize, usize)> = nonzero.windows(2).map(|w| (w[0], w[1])).collect();
        if c.closed && nonzero.len() > 1 {
            pairs.push((*nonzero.last().expect("non-empty"), nonzero[0]));
        }
        for (a, b) in pairs {
            if g[a].signum() == g[b].signum() {
                continue;
            }
            let next = (a + 1) % g.len();
            if next != b {
                // zero points in between: the curve passes through the line there
                out.push(c.points[next]);
            } else {
                let (pa, pb) = (c.points[a], c.points[b]);
                let w = g[a] / (g[a] - g[b]);
                out.push((pa.0 + w * (pb.0 - pa.0), pa.1 + w * (pb.1 - pa.1)));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nodal::grid::SampleLines;

    #[test]
    fn circle_is_one_closed_curve() {
        let g = SignGrid::from_fn(SampleLines::square(2.0, 80, &[], &[]), |x, y| x * x + y * y - 1.0);
        let t = trace_nodal_curves(&g).unwrap();
        assert_eq!(t.curves.len(), 1);
        assert!(t.curves[0].closed);
        assert_eq!(t.boundary_ends, 0);
        for &(x, y) in &t.curves[0].points {
            assert!(((x * x + y * y).sqrt() - 1.0).abs() < 2e-3);
        }
        assert_eq!(line_crossings(&t.curves, 0.5, 0.0).len(), 2);
    }

    #[test]
    fn line_is_one_open_curve() {
        let g = SignGrid::separable_sum(SampleLines::square(1.0, 50, &[], &[]), |x| x - 0.2, |y| 0.3 * y);
        let t = trace_nodal_curves(&g).unwrap();
        assert_eq!(t.curves.len(), 1);
        assert!(!t.curves[0].closed);
        assert_eq!(t.boundary_ends, 2);
    }

    #[test]
    fn exact_cross_is_split() {
        // (x - y)(x + y) sampled with the diagonal exactly on samples
        let l = SampleLines::square(1.0, 41, &[0.0], &[]);
        let g = SignGrid::separable_sum(l, |x| x * x, |y| -y * y);
        let t = trace_nodal_curves(&g).unwrap();
        assert_eq!(t.singular_points, vec![(0.0, 0.0)]);
        assert_eq!(t.nodal_set_components, 1);
        assert_eq!(t.curves.len(), 2);
        assert_eq!(t.boundary_ends, 4);
    }

    #[test]
    fn crossings_through_vertices() {
        let curve = Curve {
            points: vec![(-1.0, 1.0), (0.0, 0.0), (1.0, -1.0)],
            closed: false,
        };
        assert_eq!(line_crossings(std::slice::from_ref(&curve), 1.0, 0.0), vec![(0.0, 0.0)]);
        assert!(line_crossings(&[curve], -1.0, 1e-12).is_empty());
    }
}
