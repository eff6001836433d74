// Copyright 2026 the flatgeo Authors
// SPDX-License-Identifier: Apache-2.0

//! Hyperbolic reference model of a translation surface.
//!
//! Every `k`-gon of the flat presentation is replaced by the regular
//! hyperbolic `k`-gon whose angles are `2π/N`, `N` being the number of
//! corners, and sides are glued by the same combinatorics. The result is a
//! closed hyperbolic surface homeomorphic to the flat one, with the cone
//! point becoming an ordinary point. Free homotopy classes carry over through
//! the sequence of polygon sides a curve crosses, which makes the model an
//! independent check of flat self-intersection counts and lengths.
//!
//! Matrices act on the Poincaré disk and lie in `SU(1,1)`. Geometry along an
//! axis is always computed in the local frame of the tile being inspected,
//! so nothing is evaluated close to the ideal boundary.

use std::collections::VecDeque;
use std::f64::consts::PI;
use std::ops::Mul;

use num_complex::Complex64;

use rayon::prelude::*;

use crate::crossing::{self_intersection, CrossingContext};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::flatsurf::{EdgeRef, FlatSurface};
use crate::geodesy::{enumerate_closed_geodesics, primitive_period, GeodesicWord, JunctionTable, WordOptions};
use crate::saddle::{enumerate_saddle_connections, SaddleSet, SearchOptions};

pub const HYP_TOL: f64 = 1e-9;

type C = Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub a: C,
    pub b: C,
    pub c: C,
    pub d: C,
}

impl Mat2 {
    pub fn identity() -> Self {
        Mat2 {
            a: C::new(1.0, 0.0),
            b: C::new(0.0, 0.0),
            c: C::new(0.0, 0.0),
            d: C::new(1.0, 0.0),
        }
    }

    pub fn rotation(theta: f64) -> Self {
        Mat2 {
            a: C::from_polar(1.0, theta / 2.0),
            b: C::new(0.0, 0.0),
            c: C::new(0.0, 0.0),
            d: C::from_polar(1.0, -theta / 2.0),
        }
    }

    /// Hyperbolic translation taking `0` to `m`.
    pub fn translation_to(m: C) -> Self {
        let s = 1.0 / (1.0 - m.norm_sqr()).sqrt();
        Mat2 {
            a: C::new(s, 0.0),
            b: m * s,
            c: m.conj() * s,
            d: C::new(s, 0.0),
        }
    }

    /// Rotation by `π` about `m`.
    pub fn half_turn(m: C) -> Self {
        let t = Mat2::translation_to(m);
        t * Mat2::rotation(PI) * t.inverse()
    }

    pub fn det(&self) -> C {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Self {
        let det = self.det();
        Mat2 {
            a: self.d / det,
            b: -self.b / det,
            c: -self.c / det,
            d: self.a / det,
        }
    }

    pub fn trace(&self) -> C {
        self.a + self.d
    }

    pub fn apply(&self, z: C) -> C {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    pub fn distance_to_identity_up_to_sign(&self) -> f64 {
        let id = Mat2::identity();
        let plus = [self.a - id.a, self.b, self.c, self.d - id.d];
        let minus = [self.a + id.a, self.b, self.c, self.d + id.d];
        let n = |v: [C; 4]| v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        n(plus).min(n(minus))
    }

    /// Conjugate into `SL(2, R)` acting on the upper half plane.
    pub fn to_real(&self) -> [[f64; 2]; 2] {
        let i = C::new(0.0, 1.0);
        let cay = Mat2 {
            a: C::new(1.0, 0.0),
            b: -i,
            c: C::new(1.0, 0.0),
            d: i,
        };
        let r = cay.inverse() * *self * cay;
        [[r.a.re, r.b.re], [r.c.re, r.d.re]]
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, o: Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

pub fn disk_to_klein(z: C) -> C {
    z * (2.0 / (1.0 + z.norm_sqr()))
}

pub fn klein_to_disk(k: C) -> C {
    k / (1.0 + (1.0 - k.norm_sqr()).max(0.0).sqrt())
}

fn cross(a: C, b: C) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Side-paired regular hyperbolic polygons.
#[derive(Clone, Debug)]
pub struct HyperbolicModel {
    sides: usize,
    /// Klein-model vertices of the standard polygon.
    klein_vertices: Vec<C>,
    /// `pairing[p][j]` maps the frame of the tile across side `j` of a
    /// type-`p` tile into the frame of that tile.
    pairing: Vec<Vec<Mat2>>,
    across: Vec<Vec<EdgeRef>>,
    corners: Vec<(usize, usize)>,
    /// Tree path from polygon 0 to each polygon.
    position: Vec<Mat2>,
    /// Gluings outside the spanning tree, one generator each.
    generator_gluings: Vec<usize>,
    gluing_of: Vec<Vec<(usize, bool)>>,
    pub circumradius: f64,
    pub inradius: f64,
}

impl HyperbolicModel {
    pub fn new(surface: &FlatSurface) -> Result<Self> {
        let polys = surface.polygons();
        let k = polys[0].len();
        if polys.iter().any(|p| p.len() != k) {
            return Err(Error::NoCatalogue(
                "polygons with different numbers of sides".into(),
            ));
        }
        let n = surface.corner_count();
        let alpha = 2.0 * PI / n as f64;
        let kf = k as f64;
        let cosh_r = (1.0 / (PI / kf).tan()) / (alpha / 2.0).tan();
        let cosh_rin = (alpha / 2.0).cos() / (PI / kf).sin();
        if cosh_r <= 1.0 || cosh_rin <= 1.0 {
            return Err(Error::NoCatalogue(format!(
                "no hyperbolic regular {k}-gon with angle 2π/{n}"
            )));
        }
        let circumradius = cosh_r.acosh();
        let inradius = cosh_rin.acosh();
        let klein_r = circumradius.tanh();
        let disk_rin = (inradius / 2.0).tanh();
        let vertex_angle = |v: usize| 2.0 * PI * v as f64 / kf;
        let klein_vertices = (0..k).map(|v| C::from_polar(klein_r, vertex_angle(v))).collect();

        let mut pairing = vec![Vec::with_capacity(k); polys.len()];
        let mut across = vec![Vec::with_capacity(k); polys.len()];
        let mut gluing_of = vec![Vec::with_capacity(k); polys.len()];
        for (p, poly) in polys.iter().enumerate() {
            for j in 0..poly.len() {
                let g = surface.glued(EdgeRef::new(p, j));
                let mid = C::from_polar(disk_rin, (vertex_angle(j) + vertex_angle(j + 1)) / 2.0);
                let rot = Mat2::rotation(2.0 * PI * (j as f64 - g.other.edge as f64) / kf);
                pairing[p].push(Mat2::half_turn(mid) * rot);
                across[p].push(g.other);
                gluing_of[p].push((g.id, g.primary));
            }
        }

        let mut position = vec![None; polys.len()];
        let mut tree = vec![false; surface.gluings().len()];
        position[0] = Some(Mat2::identity());
        let mut queue = VecDeque::from([0usize]);
        while let Some(p) = queue.pop_front() {
            for j in 0..k {
                let q = across[p][j].polygon;
                if position[q].is_none() {
                    position[q] = Some(position[p].unwrap() * pairing[p][j]);
                    tree[gluing_of[p][j].0] = true;
                    queue.push_back(q);
                }
            }
        }
        let corners = surface
            .corners()
            .iter()
            .map(|c| (c.polygon, c.vertex))
            .collect();
        Ok(HyperbolicModel {
            sides: k,
            klein_vertices,
            pairing,
            across,
            corners,
            position: position.into_iter().map(|m| m.unwrap()).collect(),
            generator_gluings: (0..tree.len()).filter(|&g| !tree[g]).collect(),
            gluing_of,
            circumradius,
            inradius,
        })
    }

    pub fn pairing(&self, e: EdgeRef) -> Mat2 {
        self.pairing[e.polygon][e.edge]
    }

    pub fn across(&self, e: EdgeRef) -> EdgeRef {
        self.across[e.polygon][e.edge]
    }

    /// Deck transformation generators, one per gluing outside the spanning
    /// tree, as matrices on the disk.
    pub fn generators(&self) -> Vec<Mat2> {
        self.generator_gluings
            .iter()
            .map(|&g| {
                let (p, j) = self.primary_side(g);
                let q = self.across[p][j].polygon;
                self.position[p] * self.pairing[p][j] * self.position[q].inverse()
            })
            .collect()
    }

    pub fn generators_real(&self) -> Vec<[[f64; 2]; 2]> {
        self.generators().iter().map(Mat2::to_real).collect()
    }

    fn primary_side(&self, gluing: usize) -> (usize, usize) {
        for (p, sides) in self.gluing_of.iter().enumerate() {
            for (j, &(g, primary)) in sides.iter().enumerate() {
                if g == gluing && primary {
                    return (p, j);
                }
            }
        }
        unreachable!("every gluing has a primary side")
    }

    /// Product of the side pairings met when circling the vertex once
    /// counter-clockwise, starting from the first corner.
    pub fn vertex_relation(&self) -> Mat2 {
        let mut m = Mat2::identity();
        for &(p, v) in &self.corners {
            let e = EdgeRef::new(p, (v + self.sides - 1) % self.sides);
            m = m * self.pairing(e);
        }
        m
    }

    fn next_corner_ccw(&self, c: usize) -> usize {
        (c + 1) % self.corners.len()
    }

    /// Sides crossed by the closed curve obtained from a closed flat word by
    /// pushing it off the cone point at every junction.
    pub fn crossing_sequence(
        &self,
        surface: &FlatSurface,
        set: &SaddleSet,
        letters: &[usize],
    ) -> Vec<EdgeRef> {
        let n = surface.corner_count();
        let mut seq = Vec::new();
        for (i, &l) in letters.iter().enumerate() {
            let sc = set.get(l);
            seq.extend(sc.crossing_word.iter().copied());
            let next = set.get(letters[(i + 1) % letters.len()]);
            let from = sc.arrival_corner;
            let to = next.departure_corner;
            let ccw = (to + n - from) % n;
            if ccw <= n - ccw {
                let mut c = from;
                for _ in 0..ccw {
                    let (p, v) = self.corners[c];
                    seq.push(EdgeRef::new(p, (v + self.sides - 1) % self.sides));
                    c = self.next_corner_ccw(c);
                }
            } else {
                let mut c = from;
                for _ in 0..n - ccw {
                    let (p, v) = self.corners[c];
                    seq.push(EdgeRef::new(p, v));
                    c = (c + n - 1) % n;
                }
            }
        }
        seq
    }

    /// Word in the generators, `±(index + 1)`, cyclically reduced.
    pub fn generator_word(&self, seq: &[EdgeRef]) -> Vec<i32> {
        let mut w: Vec<i32> = Vec::new();
        for e in seq {
            let (g, primary) = self.gluing_of[e.polygon][e.edge];
            if let Some(i) = self.generator_gluings.iter().position(|&x| x == g) {
                let letter = if primary { i as i32 + 1 } else { -(i as i32 + 1) };
                if w.last() == Some(&-letter) {
                    w.pop();
                } else {
                    w.push(letter);
                }
            }
        }
        while w.len() >= 2 && w[0] == -w[w.len() - 1] {
            w.pop();
            w.remove(0);
        }
        w
    }

    /// Deck transformation of a closed side sequence, in the frame of the
    /// tile where the sequence starts.
    pub fn holonomy(&self, seq: &[EdgeRef]) -> Mat2 {
        seq.iter()
            .fold(Mat2::identity(), |m, &e| m * self.pairing(e))
    }

    pub fn word_holonomy(&self, surface: &FlatSurface, set: &SaddleSet, letters: &[usize]) -> Mat2 {
        self.holonomy(&self.crossing_sequence(surface, set, letters))
    }

    fn inside_expanded(&self, p: C, eps: f64) -> bool {
        let k = self.sides;
        (0..k).all(|j| {
            let a = self.klein_vertices[j];
            let b = self.klein_vertices[(j + 1) % k];
            cross(b - a, p - a) >= -eps * (b - a).norm()
        })
    }

    /// Parameter interval of the chord `u + t(v − u)` inside the standard
    /// polygon grown by `eps`.
    fn clip(&self, u: C, v: C, eps: f64) -> Option<(f64, f64)> {
        let k = self.sides;
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let d = v - u;
        for j in 0..k {
            let a = self.klein_vertices[j];
            let b = self.klein_vertices[(j + 1) % k];
            let e = b - a;
            // inside: cross(e, p − a) + eps|e| ≥ 0
            let f0 = cross(e, u - a) + eps * e.norm();
            let f1 = cross(e, d);
            if f1.abs() < 1e-300 {
                if f0 < 0.0 {
                    return None;
                }
            } else {
                let t = -f0 / f1;
                if f1 > 0.0 {
                    lo = lo.max(t);
                } else {
                    hi = hi.min(t);
                }
            }
        }
        (lo <= hi).then_some((lo, hi))
    }
}

pub fn hyperbolic_length_of(m: &Mat2) -> Result<f64> {
    let tr = m.trace().re.abs();
    if tr <= 2.0 + HYP_TOL {
        return Err(Error::EllipticOrParabolic { trace: tr });
    }
    Ok(2.0 * (tr / 2.0).acosh())
}

/// Repelling and attracting fixed points on the unit circle.
fn axis_endpoints(m: &Mat2) -> (C, C) {
    let disc = ((m.a - m.d) * (m.a - m.d) + 4.0 * m.b * m.c).sqrt();
    let z1 = ((m.a - m.d) + disc) / (2.0 * m.c);
    let z2 = ((m.a - m.d) - disc) / (2.0 * m.c);
    let (z1, z2) = (z1 / z1.norm(), z2 / z2.norm());
    if (m.c * z1 + m.d).norm() > 1.0 {
        (z2, z1)
    } else {
        (z1, z2)
    }
}

/// An axis seen from one tile: chord endpoints in the tile frame and the
/// axis parameter of the chord's Klein midpoint.
#[derive(Clone, Copy, Debug)]
struct AxisView {
    polygon: usize,
    u: C,
    v: C,
    foot: f64,
}

impl AxisView {
    fn param_at(&self, t: f64) -> f64 {
        self.foot + 0.5 * (t / (1.0 - t)).ln()
    }

    fn project(&self, k: C) -> f64 {
        let d = self.v - self.u;
        ((k - self.u).re * d.re + (k - self.u).im * d.im) / d.norm_sqr()
    }

    /// The same axis seen from the tile across side `j`.
    fn step(&self, model: &HyperbolicModel, j: usize) -> AxisView {
        let e = EdgeRef::new(self.polygon, j);
        let m = model.pairing(e);
        let inv = m.inverse();
        let u = inv.apply(self.u);
        let v = inv.apply(self.v);
        let (u, v) = (u / u.norm(), v / v.norm());
        let mid = (u + v) / 2.0;
        let back = disk_to_klein(m.apply(klein_to_disk(mid)));
        let t = self.project(back).clamp(1e-300, 1.0 - 1e-16);
        AxisView {
            polygon: model.across(e).polygon,
            u,
            v,
            foot: self.param_at(t),
        }
    }

    /// Signed offset of the tile centre from the axis.
    fn centre_offset(&self) -> f64 {
        cross(self.v - self.u, -self.u) / (self.v - self.u).norm()
    }
}

fn angular_gap(a: C, b: C) -> f64 {
    (a / b).arg().abs()
}

fn on_ccw_arc(from: C, to: C, x: C) -> bool {
    let span = (to / from).arg().rem_euclid(2.0 * PI);
    let at = (x / from).arg().rem_euclid(2.0 * PI);
    at > 0.0 && at < span
}

fn chord_intersection(u: C, v: C, p: C, q: C) -> f64 {
    let d1 = v - u;
    let d2 = q - p;
    cross(p - u, d2) / cross(d1, d2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HypIntersection {
    pub count: u64,
    /// Set when the class is a proper power and the count was derived from
    /// its primitive root.
    pub from_root_power: Option<usize>,
}

/// Self-intersection of the closed geodesic in the class of `holonomy`,
/// assumed primitive, with the walk started in a tile of type `polygon`.
pub fn primitive_self_intersection(
    model: &HyperbolicModel,
    holonomy: &Mat2,
    polygon: usize,
) -> Result<u64> {
    let ell = hyperbolic_length_of(holonomy)?;
    let (u, v) = axis_endpoints(holonomy);
    let mut view = AxisView {
        polygon,
        u,
        v,
        foot: 0.0,
    };
    let eps = 1e-9;

    // walk from the start tile toward the foot of the axis
    let mut steps = 0;
    while model.clip(view.u, view.v, eps).is_none() {
        let f = (view.u + view.v) / 2.0;
        let k = model.sides;
        let mut best: Option<(f64, usize)> = None;
        for j in 0..k {
            let a = model.klein_vertices[j];
            let b = model.klein_vertices[(j + 1) % k];
            let denom = cross(b - a, f);
            let num = cross(b - a, -a);
            if denom < 0.0 {
                let t = num / -denom;
                if best.map_or(true, |(bt, _)| t < bt) {
                    best = Some((t, j));
                }
            }
        }
        let Some((_, j)) = best else {
            return Err(Error::NumericallyUnstable("axis foot not reachable".into()));
        };
        view = view.step(model, j);
        steps += 1;
        if steps > 10_000 {
            return Err(Error::NumericallyUnstable("axis walk did not converge".into()));
        }
    }

    let span = |w: &AxisView| -> Option<(f64, f64)> {
        let (lo, hi) = model.clip(w.u, w.v, eps)?;
        let lo = lo.clamp(1e-300, 1.0 - 1e-16);
        let hi = hi.clamp(1e-300, 1.0 - 1e-16);
        Some((w.param_at(lo), w.param_at(hi)))
    };
    let relevant = |w: &AxisView| {
        span(w).is_some_and(|(a, b)| b >= -1e-7 && a <= ell + 1e-7)
    };
    let same_tile = |a: &AxisView, b: &AxisView| {
        a.polygon == b.polygon
            && (a.foot - b.foot).abs() < 1e-7
            && (a.centre_offset() - b.centre_offset()).abs() < 1e-7
    };

    // every tile meeting the segment of the axis from parameter 0 to ℓ
    let mut tiles: Vec<AxisView> = Vec::new();
    let mut queue = VecDeque::new();
    let mut seed = view;
    let mut guard = 0;
    while !relevant(&seed) {
        let (_, hi) = span(&seed).unwrap();
        let forward = hi < 0.0;
        let (lo_t, hi_t) = model.clip(seed.u, seed.v, eps).unwrap();
        let t = if forward { hi_t } else { lo_t };
        let p = seed.u + (seed.v - seed.u) * t;
        let k = model.sides;
        let j = (0..k)
            .min_by(|&x, &y| {
                let dist = |j: usize| {
                    let a = model.klein_vertices[j];
                    let b = model.klein_vertices[(j + 1) % k];
                    cross(b - a, p - a).abs() / (b - a).norm()
                };
                dist(x).partial_cmp(&dist(y)).unwrap()
            })
            .unwrap();
        seed = seed.step(model, j);
        guard += 1;
        if guard > 10_000 {
            return Err(Error::NumericallyUnstable("axis segment not reached".into()));
        }
    }
    tiles.push(seed);
    queue.push_back(seed);
    while let Some(w) = queue.pop_front() {
        for j in 0..model.sides {
            let nw = w.step(model, j);
            if relevant(&nw) && !tiles.iter().any(|t| same_tile(t, &nw)) {
                tiles.push(nw);
                queue.push_back(nw);
            }
            if tiles.len() > 200_000 {
                return Err(Error::NumericallyUnstable("too many tiles".into()));
            }
        }
    }

    // lifts crossing the segment: the axis as seen from another tile of the
    // same type, placed in the frame of this one
    let mut found: Vec<(f64, f64)> = Vec::new();
    for a in &tiles {
        for b in &tiles {
            if a.polygon != b.polygon {
                continue;
            }
            if (a.u - b.u).norm() < 1e-7 && (a.v - b.v).norm() < 1e-7 {
                continue;
            }
            let gaps = [
                angular_gap(a.u, b.u),
                angular_gap(a.u, b.v),
                angular_gap(a.v, b.u),
                angular_gap(a.v, b.v),
            ];
            let inside_u = on_ccw_arc(a.u, a.v, b.u);
            let inside_v = on_ccw_arc(a.u, a.v, b.v);
            if inside_u == inside_v {
                continue;
            }
            if gaps.iter().any(|&g| g < 10.0 * HYP_TOL) {
                return Err(Error::NumericallyUnstable("nearly tangent lifts".into()));
            }
            let t = chord_intersection(a.u, a.v, b.u, b.v);
            let s = a.param_at(t.clamp(1e-300, 1.0 - 1e-16));
            if !(-1e-7..=ell + 1e-7).contains(&s) {
                continue;
            }
            let p = a.u + (a.v - a.u) * t;
            if !model.inside_expanded(p, 1e-6) {
                continue;
            }
            let mut s_mod = s.rem_euclid(ell);
            if ell - s_mod < 1e-7 {
                s_mod = 0.0;
            }
            let cr = ((b.u - a.u) * (b.v - a.v) / ((b.u - a.v) * (b.v - a.u))).re;
            let dup = found.iter().any(|&(s2, c2)| {
                let ds = (s_mod - s2).abs();
                ds.min(ell - ds) < 1e-6 && (cr - c2).abs() < 1e-6 * (1.0 + cr.abs())
            });
            if !dup {
                found.push((s_mod, cr));
            }
        }
    }
    if found.len() % 2 != 0 {
        return Err(Error::NumericallyUnstable(format!(
            "odd number of crossing lifts ({})",
            found.len()
        )));
    }
    Ok(found.len() as u64 / 2)
}

/// Hyperbolic length of the closed geodesic freely homotopic to a closed
/// flat word.
pub fn hyp_length(
    model: &HyperbolicModel,
    surface: &FlatSurface,
    set: &SaddleSet,
    letters: &[usize],
) -> Result<f64> {
    hyperbolic_length_of(&model.word_holonomy(surface, set, letters))
}

/// Self-intersection of the closed geodesic freely homotopic to a closed
/// flat word. Proper powers `u^k` are reduced to their root via
/// `k² i(u) + k − 1`.
pub fn hyp_self_intersection(
    model: &HyperbolicModel,
    surface: &FlatSurface,
    set: &SaddleSet,
    letters: &[usize],
) -> Result<HypIntersection> {
    let period = primitive_period(letters);
    let k = letters.len() / period;
    let root = &letters[..period];
    let seq = model.crossing_sequence(surface, set, root);
    let start = surface.corners()[set.get(root[0]).departure_corner].polygon;
    let i0 = primitive_self_intersection(model, &model.holonomy(&seq), start)?;
    if k == 1 {
        Ok(HypIntersection {
            count: i0,
            from_root_power: None,
        })
    } else {
        let k = k as u64;
        Ok(HypIntersection {
            count: k * k * i0 + k - 1,
            from_root_power: Some(k as usize),
        })
    }
}

/// Like [`hyp_self_intersection`] but refuses proper powers.
pub fn hyp_self_intersection_primitive(
    model: &HyperbolicModel,
    surface: &FlatSurface,
    set: &SaddleSet,
    letters: &[usize],
) -> Result<u64> {
    let period = primitive_period(letters);
    if period != letters.len() {
        return Err(Error::NonPrimitive {
            power: letters.len() / period,
        });
    }
    Ok(hyp_self_intersection(model, surface, set, letters)?.count)
}

/// Product of generators for a word of `±(index + 1)` letters.
pub fn word_matrix(model: &HyperbolicModel, word: &[i32]) -> Mat2 {
    let gens = model.generators();
    word.iter().fold(Mat2::identity(), |m, &l| {
        let g = gens[l.unsigned_abs() as usize - 1];
        m * if l > 0 { g } else { g.inverse() }
    })
}

pub fn hyp_length_word(model: &HyperbolicModel, word: &[i32]) -> Result<f64> {
    hyperbolic_length_of(&word_matrix(model, word))
}

/// Self-intersection of the class of a cyclically reduced group word.
pub fn hyp_self_intersection_word(model: &HyperbolicModel, word: &[i32]) -> Result<HypIntersection> {
    let n = word.len();
    let period = (1..=n)
        .find(|&p| n % p == 0 && (0..n).all(|i| word[i] == word[(i + p) % n]))
        .unwrap_or(n);
    // generators act in the frame of the tile of polygon 0
    let i0 = primitive_self_intersection(model, &word_matrix(model, &word[..period]), 0)?;
    let k = (n / period.max(1)) as u64;
    Ok(HypIntersection {
        count: k * k * i0 + k - 1,
        from_root_power: (k > 1).then_some(k as usize),
    })
}

/// Distance a point of the axis is moved, computed from the fixed points
/// rather than the trace.
pub fn axis_displacement(m: &Mat2) -> f64 {
    let (u, v) = axis_endpoints(m);
    let p = klein_to_disk((u + v) / 2.0);
    let q = m.apply(p);
    let num = (p - q).norm();
    let den = (C::new(1.0, 0.0) - p.conj() * q).norm();
    2.0 * (num / den).atanh()
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleRow {
    pub key: String,
    pub flat_length: f64,
    pub hyp_length: Option<f64>,
    pub k_flat: u64,
    pub k_hyp: Option<u64>,
    pub error: Option<String>,
}

impl OracleRow {
    pub fn ratio(&self) -> Option<f64> {
        self.hyp_length.map(|h| h / self.flat_length)
    }

    pub fn agree(&self) -> bool {
        self.k_hyp == Some(self.k_flat)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub rows: Vec<OracleRow>,
    pub min_ratio: f64,
    pub max_ratio: f64,
}

impl OracleReport {
    /// Smallest integer `λ` with `l₀/λ ≤ l ≤ λ l₀` on every row.
    pub fn lambda(&self) -> f64 {
        self.max_ratio.max(1.0 / self.min_ratio).ceil()
    }

    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(OracleRow::agree)
    }

    /// `canonical_key,flat_length,hyp_length,ratio,K_flat,K_hyp,agree`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("canonical_key,flat_length,hyp_length,ratio,K_flat,K_hyp,agree\n");
        for r in &self.rows {
            let opt = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:.12}"));
            out.push_str(&format!(
                "{},{:.12},{},{},{},{},{}\n",
                r.key,
                r.flat_length,
                opt(r.hyp_length),
                opt(r.ratio()),
                r.k_flat,
                r.k_hyp.map_or(String::new(), |k| k.to_string()),
                r.agree()
            ));
        }
        out
    }
}

/// Flat and hyperbolic lengths and self-intersections of the given classes.
pub fn compare_classes(
    model: &HyperbolicModel,
    ctx: &CrossingContext,
    words: &[GeodesicWord],
) -> Result<OracleReport> {
    let rows: Vec<OracleRow> = words
        .par_iter()
        .map(|w| {
            let k_flat = self_intersection(ctx, w)?.total;
            let hyp = hyp_length(model, ctx.surface, ctx.set, &w.letters);
            let k = hyp_self_intersection(model, ctx.surface, ctx.set, &w.letters);
            let error = match (&hyp, &k) {
                (Err(e), _) | (_, Err(e)) => Some(e.to_string()),
                _ => None,
            };
            Ok(OracleRow {
                key: w.canonical_key.clone(),
                flat_length: w.length.to_f64(),
                hyp_length: hyp.ok(),
                k_flat,
                k_hyp: k.ok().map(|h| h.count),
                error,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ratios: Vec<f64> = rows.iter().filter_map(OracleRow::ratio).collect();
    Ok(OracleReport {
        min_ratio: ratios.iter().copied().fold(f64::INFINITY, f64::min),
        max_ratio: ratios.iter().copied().fold(0.0, f64::max),
        rows,
    })
}

/// Enumerates all classes up to `l` and compares them with the model.
pub fn length_ratio_report(surface: &FlatSurface, l: &Rational, opts: &WordOptions, search: &SearchOptions) -> Result<OracleReport> {
    let model = HyperbolicModel::new(surface)?;
    let set = enumerate_saddle_connections(surface, l, search)?;
    let table = JunctionTable::new(surface, &set);
    let words = enumerate_closed_geodesics(&set, &table, l, opts)?;
    let ctx = CrossingContext::new(surface, &set);
    compare_classes(&model, &ctx, &words)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;
    use crate::flatsurf::{l_origami_3, origami, regular_octagon};
    use crate::saddle::{enumerate_saddle_connections, SearchOptions};

    fn close(a: C, b: C) -> bool {
        (a - b).norm() < 1e-9
    }

    #[test]
    fn radii_of_the_square_tiling() {
        let m = HyperbolicModel::new(&l_origami_3()).unwrap();
        // cosh R = cot(π/4) cot(π/12) = 2 + √3
        assert!((m.circumradius.cosh() - (2.0 + 3f64.sqrt())).abs() < 1e-12);
        assert!((m.inradius.cosh() - (PI / 12.0).cos() / (PI / 4.0).sin()).abs() < 1e-12);
    }

    #[test]
    fn pairings_match_sides() {
        for s in [l_origami_3(), regular_octagon()] {
            let m = HyperbolicModel::new(&s).unwrap();
            let k = m.sides;
            let vd: Vec<C> = m.klein_vertices.iter().map(|&z| klein_to_disk(z)).collect();
            for p in 0..s.polygons().len() {
                for j in 0..k {
                    let e = EdgeRef::new(p, j);
                    let q = m.across(e);
                    let g = m.pairing(e);
                    assert!(close(g.apply(vd[q.edge]), vd[(j + 1) % k]));
                    assert!(close(g.apply(vd[(q.edge + 1) % k]), vd[j]));
                    assert!((g.det() - C::new(1.0, 0.0)).norm() < 1e-12);
                    // the glued tile lies across the side
                    assert!(!m.inside_expanded(disk_to_klein(g.apply(C::new(0.0, 0.0))), 0.0));
                    // pairings are inverse to each other
                    let back = m.pairing(q);
                    assert!((g * back).distance_to_identity_up_to_sign() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn vertex_relation_is_trivial() {
        for s in [l_origami_3(), regular_octagon()] {
            let m = HyperbolicModel::new(&s).unwrap();
            assert!(m.vertex_relation().distance_to_identity_up_to_sign() < 1e-8);
            assert_eq!(m.generators().len() as u32, 2 * s.genus());
            for g in m.generators_real() {
                let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
                assert!((det - 1.0).abs() < 1e-9);
                assert!((g[0][0] + g[1][1]).abs() > 2.0);
            }
        }
    }

    #[test]
    fn simple_closed_curves_have_no_self_intersection() {
        let s = l_origami_3();
        let set = enumerate_saddle_connections(&s, &Rational::from_integer(1), &SearchOptions::default())
            .unwrap();
        let m = HyperbolicModel::new(&s).unwrap();
        for sc in set.iter() {
            let r = hyp_self_intersection(&m, &s, &set, &[sc.id]).unwrap();
            assert_eq!(r.count, 0);
            let twice = hyp_self_intersection(&m, &s, &set, &[sc.id, sc.id]).unwrap();
            assert_eq!(twice.count, 1);
            assert_eq!(twice.from_root_power, Some(2));
            assert!(matches!(
                hyp_self_intersection_primitive(&m, &s, &set, &[sc.id, sc.id]),
                Err(Error::NonPrimitive { power: 2 })
            ));
        }
    }

    #[test]
    fn lengths_are_conjugation_invariant() {
        let s = origami(&[1, 0, 2], &[2, 1, 0]).unwrap();
        let set = enumerate_saddle_connections(&s, &Rational::from_integer(1), &SearchOptions::default())
            .unwrap();
        let m = HyperbolicModel::new(&s).unwrap();
        let seq = m.crossing_sequence(&s, &set, &[0]);
        let l = hyperbolic_length_of(&m.holonomy(&seq)).unwrap();
        let mut rotated = seq.clone();
        rotated.rotate_left(1);
        // rotating the side sequence conjugates the holonomy
        let l2 = hyperbolic_length_of(&m.holonomy(&rotated)).unwrap();
        assert!((l - l2).abs() < 1e-9);
        assert!(l > 0.0);
    }

    #[test]
    fn group_word_lengths() {
        let m = HyperbolicModel::new(&regular_octagon()).unwrap();
        let la = hyp_length_word(&m, &[1]).unwrap();
        let laa = hyp_length_word(&m, &[1, 1]).unwrap();
        assert!((laa - 2.0 * la).abs() < 1e-6);
        let conj = hyp_length_word(&m, &[2, 1, -2]).unwrap();
        assert!((conj - la).abs() < 1e-9);
        let inv = hyp_length_word(&m, &[-1]).unwrap();
        assert!((inv - la).abs() < 1e-9);
        assert!(matches!(hyp_length_word(&m, &[]), Err(Error::EllipticOrParabolic { .. })));
        for w in [vec![1], vec![1, 2], vec![1, 2, -1, 3]] {
            let g = word_matrix(&m, &w);
            let l = hyperbolic_length_of(&g).unwrap();
            assert!((axis_displacement(&g) - l).abs() < 1e-7, "{w:?}");
        }
    }

    #[test]
    fn generators_are_simple_and_powers_add_crossings() {
        let m = HyperbolicModel::new(&regular_octagon()).unwrap();
        for g in 1..=4 {
            assert_eq!(hyp_self_intersection_word(&m, &[g]).unwrap().count, 0);
            let cube = hyp_self_intersection_word(&m, &[g, g, g]).unwrap();
            assert_eq!(cube.count, 2);
            assert_eq!(cube.from_root_power, Some(3));
        }
    }

    #[test]
    fn side_connections_of_the_octagon_are_simple_classes() {
        let s = regular_octagon();
        let set = enumerate_saddle_connections(&s, &Rational::from_integer(1), &SearchOptions::default())
            .unwrap();
        let m = HyperbolicModel::new(&s).unwrap();
        for sc in set.iter() {
            let w = m.generator_word(&m.crossing_sequence(&s, &set, &[sc.id]));
            assert!(!w.is_empty());
            assert!(hyp_length_word(&m, &w).unwrap() > 0.0);
            assert_eq!(hyp_self_intersection_word(&m, &w).unwrap().count, 0);
        }
    }

    #[test]
    fn generator_words_match_holonomy() {
        let s = l_origami_3();
        let l = Rational::from_integer(2);
        let set = enumerate_saddle_connections(&s, &l, &SearchOptions::default()).unwrap();
        let table = JunctionTable::new(&s, &set);
        let words = enumerate_closed_geodesics(&set, &table, &l, &WordOptions::default()).unwrap();
        let m = HyperbolicModel::new(&s).unwrap();
        let ctx = CrossingContext::new(&s, &set);
        for w in &words {
            let seq = m.crossing_sequence(&s, &set, &w.letters);
            let gw = m.generator_word(&seq);
            let a = hyperbolic_length_of(&m.holonomy(&seq)).unwrap();
            let b = hyp_length_word(&m, &gw).unwrap();
            assert!((a - b).abs() < 1e-8);
            // a figure-eight class: one crossing from both sides
            let flat = self_intersection(&ctx, w).unwrap().total;
            if w.is_primitive() {
                assert_eq!(hyp_self_intersection_word(&m, &gw).unwrap().count, flat);
            }
        }
    }
}
