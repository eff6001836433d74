// Copyright 2026 the flatgeo Authors
// SPDX-License-Identifier: Apache-2.0

//! Saddle connections by developing-map search.
//!
//! From every corner of the cone point an open angular window is pushed
//! through the polygons it meets. Vertices strictly inside the window end a
//! saddle connection; edges on the far side split the window and the search
//! continues in the glued polygon. The start ray of each corner is the edge
//! itself and is emitted directly, so every directed connection is found
//! exactly once.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{ExactCoord, Rational, Vec2};
use crate::flatsurf::{ConeAngle, EdgeRef, FlatSurface};
use crate::length::FlatLength;

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub polygon: usize,
    /// Endpoints in the polygon's own coordinates.
    pub from: Vec2,
    pub to: Vec2,
}

/// A point where a connection passes through the interior of a glued edge,
/// recorded as the parameter along the `a` side of the gluing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePoint {
    pub gluing: usize,
    pub param: ExactCoord,
}

#[derive(Clone, Debug)]
pub struct SaddleConnection {
    pub id: usize,
    pub holonomy: Vec2,
    pub length_sq: ExactCoord,
    pub departure: ConeAngle,
    /// Coordinate of the direction pointing back along the connection at its
    /// end; equals the departure of the reverse connection.
    pub arrival: ConeAngle,
    pub departure_corner: usize,
    /// Corner containing the final piece (for an edge connection: the
    /// corner at the far end of the edge inside the same polygon).
    pub arrival_corner: usize,
    /// Edges exited, in order.
    pub crossing_word: Vec<EdgeRef>,
    pub pieces: Vec<Piece>,
    pub edge_points: Vec<EdgePoint>,
    /// Gluing id when the connection runs along a polygon edge.
    pub along_edge: Option<usize>,
    pub reverse_id: usize,
}

impl SaddleConnection {
    pub fn length(&self) -> FlatLength {
        FlatLength::from_length_sq(&self.length_sq)
    }

    pub fn length_f64(&self) -> f64 {
        self.length_sq.to_f64().sqrt()
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub node_budget: u64,
    /// Visit corners last-to-first; results are identical.
    pub reverse_order: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            node_budget: DEFAULT_NODE_BUDGET,
            reverse_order: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SaddleSet {
    pub bound: Rational,
    pub connections: Vec<SaddleConnection>,
    pub nodes_expanded: u64,
}

impl SaddleSet {
    pub fn len(&self) -> usize {
        self.connections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.connections.is_empty()
    }

    pub fn get(&self, id: usize) -> &SaddleConnection {
        &self.connections[id]
    }

    pub fn reverse(&self, id: usize) -> usize {
        self.connections[id].reverse_id
    }

    /// Index of the unoriented connection: the smaller of the two ids.
    pub fn undirected(&self, id: usize) -> usize {
        id.min(self.connections[id].reverse_id)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, SaddleConnection> {
        self.connections.iter()
    }

    /// Columns: `id,hol_x,hol_y,length,departure_index,arrival_index,reverse_id`,
    /// with corner indices for departure and arrival.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,hol_x,hol_y,length,departure_index,arrival_index,reverse_id\n");
        for sc in &self.connections {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                sc.id,
                sc.holonomy.x,
                sc.holonomy.y,
                sc.length(),
                sc.departure_corner,
                sc.arrival_corner,
                sc.reverse_id
            )
            .unwrap();
        }
        out
    }
}

struct Found {
    corner: usize,
    holonomy: Vec2,
    arrival_corner: usize,
    crossing_word: Vec<EdgeRef>,
    pieces: Vec<Piece>,
    edge_points: Vec<EdgePoint>,
    along_edge: Option<usize>,
}

struct Frame {
    polygon: usize,
    offset: Vec2,
    entry: Option<usize>,
}

struct Exit {
    edge: usize,
    a: Vec2,
    b: Vec2,
}

struct Search<'s> {
    surface: &'s FlatSurface,
    bound_sq: ExactCoord,
    nodes: &'s AtomicU64,
    budget: u64,
    corner: usize,
    out: Vec<Found>,
}

/// Smallest squared distance from the origin to the segment `[p, q]`.
fn dist_sq_le(p: &Vec2, q: &Vec2, bound_sq: &ExactCoord) -> bool {
    let pq = q - p;
    if p.dot(&pq).signum() >= 0 {
        return &p.norm_sq() <= bound_sq;
    }
    let qp = p - q;
    if q.dot(&qp).signum() >= 0 {
        return &q.norm_sq() <= bound_sq;
    }
    let c = p.cross(q);
    &c * &c <= bound_sq * &pq.norm_sq()
}

fn strictly_inside(a: &Vec2, b: &Vec2, x: &Vec2) -> bool {
    a.cross(x).signum() > 0 && x.cross(b).signum() > 0
}

fn crossing_param(a: &Vec2, b: &Vec2, dir: &Vec2) -> (ExactCoord, ExactCoord) {
    // dir·t = a + u (b − a)
    let e = b - a;
    let den = dir.cross(&e);
    let t = a.cross(&e) / &den;
    let u = a.cross(dir) / &den;
    (t, u)
}

impl<'s> Search<'s> {
    fn tick(&self) -> Result<()> {
        let n = self.nodes.fetch_add(1, AtomicOrdering::Relaxed) + 1;
        if n > self.budget {
            return Err(Error::LimitExceeded { limit: self.budget });
        }
        Ok(())
    }

    fn emit_vertex(&mut self, path: &[(Frame, Option<Exit>)], last: &Frame, vertex: usize, x: Vec2) {
        let s = self.surface;
        let mut crossing_word = Vec::new();
        let mut pieces = Vec::new();
        let mut edge_points = Vec::new();
        let mut entry_point = Vec2::zero();
        for (frame, exit) in path {
            let exit = exit.as_ref().expect("interior frames have exits");
            let (t, u) = crossing_param(&exit.a, &exit.b, &x);
            let point = x.scale(&t);
            pieces.push(Piece {
                polygon: frame.polygon,
                from: &entry_point - &frame.offset,
                to: &point - &frame.offset,
            });
            let e = EdgeRef::new(frame.polygon, exit.edge);
            let g = s.glued(e);
            let param = if g.primary { u } else { ExactCoord::one() - u };
            edge_points.push(EdgePoint {
                gluing: g.id,
                param,
            });
            crossing_word.push(e);
            entry_point = point;
        }
        pieces.push(Piece {
            polygon: last.polygon,
            from: &entry_point - &last.offset,
            to: &x - &last.offset,
        });
        self.out.push(Found {
            corner: self.corner,
            holonomy: x,
            arrival_corner: s.corner_index(last.polygon, vertex),
            crossing_word,
            pieces,
            edge_points,
            along_edge: None,
        });
    }

    fn explore(
        &mut self,
        path: &mut Vec<(Frame, Option<Exit>)>,
        frame: Frame,
        wa: Vec2,
        wb: Vec2,
        origin_vertex: Option<usize>,
    ) -> Result<()> {
        self.tick()?;
        let s = self.surface;
        let poly = s.polygon(frame.polygon);
        let n = poly.len();
        let dev: Vec<Vec2> = (0..n).map(|i| poly.vertex(i) + &frame.offset).collect();

        for (u, x) in dev.iter().enumerate() {
            if Some(u) == origin_vertex {
                continue;
            }
            if strictly_inside(&wa, &wb, x) && &x.norm_sq() <= &self.bound_sq {
                self.emit_vertex(path, &frame, u, x.clone());
            }
        }

        let mut exits = Vec::new();
        for j in 0..n {
            if Some(j) == frame.entry {
                continue;
            }
            if let Some(v) = origin_vertex {
                if j == v || j == poly.prev(v) {
                    continue;
                }
            }
            let a = &dev[j];
            let b = &dev[(j + 1) % n];
            if a.cross(b).signum() <= 0 {
                continue;
            }
            let lo = if wa.cross(a).signum() > 0 { a.clone() } else { wa.clone() };
            let hi = if b.cross(&wb).signum() > 0 { b.clone() } else { wb.clone() };
            if lo.cross(&hi).signum() <= 0 {
                continue;
            }
            if !dist_sq_le(a, b, &self.bound_sq) {
                continue;
            }
            exits.push((j, a.clone(), b.clone(), lo, hi));
        }

        let polygon = frame.polygon;
        let offset = frame.offset.clone();
        for (j, a, b, lo, hi) in exits {
            let e = EdgeRef::new(polygon, j);
            let g = s.glued(e);
            let next = Frame {
                polygon: g.other.polygon,
                offset: &s.translation_across(e) + &offset,
                entry: Some(g.other.edge),
            };
            path.push((
                Frame {
                    polygon,
                    offset: offset.clone(),
                    entry: frame.entry,
                },
                Some(Exit { edge: j, a, b }),
            ));
            let r = self.explore(path, next, lo, hi, None);
            path.pop();
            r?;
        }
        Ok(())
    }

    fn run(&mut self) -> Result<()> {
        let s = self.surface;
        let c = &s.corners()[self.corner];
        let poly = s.polygon(c.polygon);
        let start = c.start.clone();
        if start.norm_sq() <= self.bound_sq {
            let e = EdgeRef::new(c.polygon, c.vertex);
            self.out.push(Found {
                corner: self.corner,
                holonomy: start.clone(),
                arrival_corner: s.corner_index(c.polygon, poly.next(c.vertex)),
                crossing_word: Vec::new(),
                pieces: Vec::new(),
                edge_points: Vec::new(),
                along_edge: Some(s.glued(e).id),
            });
        }
        let frame = Frame {
            polygon: c.polygon,
            offset: -poly.vertex(c.vertex),
            entry: None,
        };
        let mut path = Vec::new();
        self.explore(&mut path, frame, c.start.clone(), c.end.clone(), Some(c.vertex))
    }
}

fn search_all(
    surface: &FlatSurface,
    bound_sq: &ExactCoord,
    opts: &SearchOptions,
) -> Result<(Vec<Found>, u64)> {
    let nodes = AtomicU64::new(0);
    let mut order: Vec<usize> = (0..surface.corner_count()).collect();
    if opts.reverse_order {
        order.reverse();
    }
    let per_corner: Vec<Result<Vec<Found>>> = order
        .par_iter()
        .map(|&corner| {
            let mut s = Search {
                surface,
                bound_sq: bound_sq.clone(),
                nodes: &nodes,
                budget: opts.node_budget,
                corner,
                out: Vec::new(),
            };
            s.run().map(|_| s.out)
        })
        .collect();
    let mut all = Vec::new();
    for r in per_corner {
        all.extend(r?);
    }
    Ok((all, nodes.load(AtomicOrdering::Relaxed)))
}

fn assemble(surface: &FlatSurface, found: Vec<Found>) -> Vec<SaddleConnection> {
    let mut items: Vec<SaddleConnection> = found
        .into_iter()
        .map(|f| {
            let back = -&f.holonomy;
            let departure = surface.cone_coordinate(f.corner, &f.holonomy);
            let arrival = match f.along_edge {
                Some(_) => {
                    // reverse runs along the glued edge from the next corner
                    let c = &surface.corners()[f.arrival_corner];
                    let nxt = (f.arrival_corner + 1) % surface.corner_count();
                    debug_assert!(c.end.same_direction(&back));
                    surface.cone_coordinate(nxt, &back)
                }
                None => surface.cone_coordinate(f.arrival_corner, &back),
            };
            SaddleConnection {
                id: 0,
                length_sq: f.holonomy.norm_sq(),
                holonomy: f.holonomy,
                departure,
                arrival,
                departure_corner: f.corner,
                arrival_corner: f.arrival_corner,
                crossing_word: f.crossing_word,
                pieces: f.pieces,
                edge_points: f.edge_points,
                along_edge: f.along_edge,
                reverse_id: usize::MAX,
            }
        })
        .collect();
    items.sort_by(|a, b| {
        a.length_sq
            .cmp(&b.length_sq)
            .then_with(|| a.departure.cmp(&b.departure))
    });
    let by_departure: BTreeMap<ConeAngle, usize> = items
        .iter()
        .enumerate()
        .map(|(i, sc)| (sc.departure.clone(), i))
        .collect();
    for i in 0..items.len() {
        items[i].id = i;
        let r = *by_departure
            .get(&items[i].arrival)
            .expect("the reverse of a connection has the same length");
        debug_assert!(items[r].holonomy == -&items[i].holonomy);
        items[i].reverse_id = r;
    }
    items
}

/// All directed saddle connections of length at most `l`.
pub fn enumerate_saddle_connections(
    surface: &FlatSurface,
    l: &Rational,
    opts: &SearchOptions,
) -> Result<SaddleSet> {
    if *l <= Rational::from_integer(0) {
        return Err(Error::InvalidInput("L must be positive".into()));
    }
    let l_exact = ExactCoord::rational(*l);
    let bound_sq = &l_exact * &l_exact;
    let (found, nodes) = search_all(surface, &bound_sq, opts)?;
    Ok(SaddleSet {
        bound: *l,
        connections: assemble(surface, found),
        nodes_expanded: nodes,
    })
}

/// Squared length of the shortest saddle connection of squared length at
/// most `bound_sq`, if any.
pub fn shortest_length_sq(
    surface: &FlatSurface,
    bound_sq: &ExactCoord,
    node_budget: u64,
) -> Result<Option<ExactCoord>> {
    let opts = SearchOptions {
        node_budget,
        reverse_order: false,
    };
    let (found, _) = search_all(surface, bound_sq, &opts)?;
    Ok(found.iter().map(|f| f.holonomy.norm_sq()).min())
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthRow {
    pub l: Rational,
    pub count: usize,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthTable {
    pub rows: Vec<GrowthRow>,
    /// Largest `count / L²` over the grid.
    pub b0: f64,
}

/// Directed saddle-connection counts over an increasing grid of lengths.
pub fn saddle_growth(
    surface: &FlatSurface,
    l_grid: &[Rational],
    opts: &SearchOptions,
) -> Result<GrowthTable> {
    if l_grid.is_empty() || l_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(
            "L grid must be nonempty and increasing".into(),
        ));
    }
    let top = enumerate_saddle_connections(surface, l_grid.last().unwrap(), opts)?;
    let rows: Vec<GrowthRow> = l_grid
        .iter()
        .map(|l| {
            let le = ExactCoord::rational(*l);
            let b = &le * &le;
            let count = top.iter().filter(|sc| sc.length_sq <= b).count();
            let lf = le.to_f64();
            GrowthRow {
                l: *l,
                count,
                ratio: count as f64 / (lf * lf),
            }
        })
        .collect();
    let b0 = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(GrowthTable { rows, b0 })
}

/// Replays the crossing word from the departure corner and returns the
/// developed endpoint; used to check that connections are self-consistent.
pub fn retrace(surface: &FlatSurface, sc: &SaddleConnection) -> Vec2 {
    let c = &surface.corners()[sc.departure_corner];
    let mut offset = -surface.polygon(c.polygon).vertex(c.vertex);
    let mut polygon = c.polygon;
    for e in &sc.crossing_word {
        assert_eq!(e.polygon, polygon, "crossing word is not a path");
        offset = &surface.translation_across(*e) + &offset;
        polygon = surface.glued(*e).other.polygon;
    }
    let end = &surface.corners()[sc.arrival_corner];
    assert_eq!(end.polygon, polygon);
    surface.polygon(polygon).vertex(end.vertex) + &offset
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flatsurf::{l_origami_3, regular_octagon};

    fn q(n: i128, m: i128) -> Rational {
        Rational::new(n, m)
    }

    #[test]
    fn nothing_below_unit_length() {
        let s = l_origami_3();
        let set = enumerate_saddle_connections(&s, &q(1, 2), &SearchOptions::default()).unwrap();
        assert!(set.is_empty());
    }

    #[test]
    fn unit_connections_on_l_shape() {
        // 3 horizontal and 3 vertical unit edges, each in both directions
        let s = l_origami_3();
        let set = enumerate_saddle_connections(&s, &q(1, 1), &SearchOptions::default()).unwrap();
        assert_eq!(set.len(), 12);
        for sc in set.iter() {
            assert_eq!(sc.length_sq, ExactCoord::one());
            assert!(sc.along_edge.is_some());
        }
    }

    #[test]
    fn octagon_sides() {
        let s = regular_octagon();
        let set = enumerate_saddle_connections(&s, &q(1, 1), &SearchOptions::default()).unwrap();
        assert_eq!(set.len(), 8);
    }

    #[test]
    fn reverse_is_an_involution() {
        let s = l_origami_3();
        let set = enumerate_saddle_connections(&s, &q(3, 1), &SearchOptions::default()).unwrap();
        assert_eq!(set.len() % 2, 0);
        for sc in set.iter() {
            let r = set.get(sc.reverse_id);
            assert_eq!(r.reverse_id, sc.id);
            assert_eq!(r.holonomy, -&sc.holonomy);
            assert_ne!(r.id, sc.id);
        }
    }

    #[test]
    fn retrace_reproduces_holonomy() {
        for s in [l_origami_3(), regular_octagon()] {
            let set =
                enumerate_saddle_connections(&s, &q(3, 1), &SearchOptions::default()).unwrap();
            for sc in set.iter() {
                assert_eq!(retrace(&s, sc), sc.holonomy);
            }
        }
    }

    #[test]
    fn diagonal_of_a_square() {
        // the L-shape has diagonal connections of length √2 through each square
        let s = l_origami_3();
        let set = enumerate_saddle_connections(&s, &q(3, 2), &SearchOptions::default()).unwrap();
        let diag: Vec<_> = set
            .iter()
            .filter(|sc| sc.length_sq == ExactCoord::int(2))
            .collect();
        assert!(!diag.is_empty());
        assert!(diag.iter().all(|sc| sc.pieces.len() == sc.crossing_word.len() + 1));
    }

    #[test]
    fn budget_is_enforced() {
        let s = l_origami_3();
        let opts = SearchOptions {
            node_budget: 5,
            reverse_order: false,
        };
        assert!(matches!(
            enumerate_saddle_connections(&s, &q(4, 1), &opts),
            Err(Error::LimitExceeded { limit: 5 })
        ));
    }

    #[test]
    fn growth_is_monotone() {
        let s = l_origami_3();
        let grid = [q(1, 1), q(2, 1), q(4, 1)];
        let t = saddle_growth(&s, &grid, &SearchOptions::default()).unwrap();
        assert!(t.rows.windows(2).all(|w| w[0].count <= w[1].count));
        let max = t.rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
        assert_eq!(t.b0, max);
        assert!(saddle_growth(&s, &[q(3, 1), q(1, 1)], &SearchOptions::default()).is_err());
    }
}
