// Copyright 2026 the flatgeo Authors
// SPDX-License-Identifier: Apache-2.0

//! Translation surfaces with a single cone point, presented as convex
//! polygons glued along edges by translations.
//!
//! Edge `j` of a polygon runs from vertex `j` to vertex `j + 1`
//! (counter-clockwise). The corner at vertex `v` is bounded by the ray along
//! edge `v` (its *start* ray) and the ray back along edge `v − 1` (its *end*
//! ray); sweeping counter-clockwise from start to end covers the interior.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{is_square_free, ExactCoord, Vec2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeRef {
    pub polygon: usize,
    pub edge: usize,
}

impl EdgeRef {
    pub fn new(polygon: usize, edge: usize) -> Self {
        EdgeRef { polygon, edge }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon {
    pub vertices: Vec<Vec2>,
}

impl Polygon {
    pub fn new(vertices: Vec<Vec2>) -> Self {
        Polygon { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &Vec2 {
        &self.vertices[i % self.len()]
    }

    pub fn next(&self, i: usize) -> usize {
        (i + 1) % self.len()
    }

    pub fn prev(&self, i: usize) -> usize {
        (i + self.len() - 1) % self.len()
    }

    /// Vector from vertex `j` to vertex `j + 1`.
    pub fn edge_vector(&self, j: usize) -> Vec2 {
        self.vertex(j + 1) - self.vertex(j)
    }

    /// Every turn is a strict left turn and the boundary winds once.
    pub fn is_strictly_convex_ccw(&self) -> bool {
        let n = self.len();
        if n < 3 {
            return false;
        }
        let mut wraps = 0;
        for j in 0..n {
            let e = self.edge_vector(j);
            let f = self.edge_vector(j + 1);
            if e.is_zero() || e.cross(&f).signum() <= 0 {
                return false;
            }
            if f.cmp_arg(&e) == Ordering::Less {
                wraps += 1;
            }
        }
        wraps == 1
    }

    pub fn area(&self) -> ExactCoord {
        let mut twice = ExactCoord::zero();
        for j in 0..self.len() {
            twice = twice + self.vertex(j).cross(self.vertex(j + 1));
        }
        twice / ExactCoord::int(2)
    }
}

/// A point on the circle of directions at the cone point.
///
/// `sheet` counts completed turns of `2π` from the reference corner, so the
/// absolute angle is `2π·sheet + arg(dir)`. Two coordinates are equal when
/// they have the same sheet and parallel directions.
#[derive(Clone, Debug)]
pub struct ConeAngle {
    pub sheet: u32,
    pub dir: Vec2,
}

impl ConeAngle {
    pub fn radians(&self) -> f64 {
        let (x, y) = self.dir.to_f64();
        let mut a = y.atan2(x);
        if a < 0.0 {
            a += 2.0 * std::f64::consts::PI;
        }
        2.0 * std::f64::consts::PI * self.sheet as f64 + a
    }
}

impl PartialEq for ConeAngle {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ConeAngle {}

impl PartialOrd for ConeAngle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ConeAngle {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sheet
            .cmp(&other.sheet)
            .then_with(|| self.dir.cmp_arg(&other.dir))
    }
}

impl fmt::Display for ConeAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.sheet, self.dir)
    }
}

#[derive(Clone, Debug)]
pub struct Corner {
    pub polygon: usize,
    pub vertex: usize,
    /// Direction of edge `vertex`.
    pub start: Vec2,
    /// Direction back along edge `vertex − 1`.
    pub end: Vec2,
    /// Sheet of the start ray.
    pub sheet: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gluing {
    pub id: usize,
    pub other: EdgeRef,
    /// True when this edge is the `a` side of the stored pair.
    pub primary: bool,
}

#[derive(Clone, Debug)]
pub struct FlatSurface {
    name: String,
    field_discriminant: u32,
    polygons: Vec<Polygon>,
    gluings: Vec<(EdgeRef, EdgeRef)>,
    partner: Vec<Vec<Gluing>>,
    genus: u32,
    systole: ExactCoord,
    corners: Vec<Corner>,
    corner_of: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    fn push(&mut self, name: &'static str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name,
            passed,
            detail: detail.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "pass" } else { "FAIL" };
            writeln!(f, "{mark} {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Unvalidated presentation: what a surface file describes.
#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    pub name: String,
    pub field_discriminant: u32,
    pub polygons: Vec<Polygon>,
    pub gluings: Vec<(EdgeRef, EdgeRef)>,
    pub systole: Option<ExactCoord>,
}

/// Vertex classes and corner cycles derived from a presentation whose
/// gluings are already known to be translations.
struct CornerCycles {
    /// Each cycle lists `(polygon, vertex)` in counter-clockwise order.
    cycles: Vec<Vec<(usize, usize)>>,
    /// Number of full turns made by each cycle.
    turns: Vec<u32>,
}

fn partner_table(p: &Presentation) -> std::result::Result<Vec<Vec<Option<Gluing>>>, String> {
    let mut table: Vec<Vec<Option<Gluing>>> =
        p.polygons.iter().map(|q| vec![None; q.len()]).collect();
    for (id, (a, b)) in p.gluings.iter().enumerate() {
        for e in [a, b] {
            if e.polygon >= p.polygons.len() || e.edge >= p.polygons[e.polygon].len() {
                return Err(format!("gluing {id} references missing edge {e:?}"));
            }
        }
        if a == b {
            return Err(format!("gluing {id} glues edge {a:?} to itself"));
        }
        for (e, other, primary) in [(a, b, true), (b, a, false)] {
            let slot = &mut table[e.polygon][e.edge];
            if slot.is_some() {
                return Err(format!("edge {e:?} is glued more than once"));
            }
            *slot = Some(Gluing {
                id,
                other: *other,
                primary,
            });
        }
    }
    for (pi, row) in table.iter().enumerate() {
        for (e, g) in row.iter().enumerate() {
            if g.is_none() {
                return Err(format!("edge ({pi}, {e}) is not glued"));
            }
        }
    }
    Ok(table)
}

fn corner_cycles(polygons: &[Polygon], partner: &[Vec<Gluing>]) -> CornerCycles {
    let mut seen: Vec<Vec<bool>> = polygons.iter().map(|q| vec![false; q.len()]).collect();
    let mut cycles = Vec::new();
    let mut turns = Vec::new();
    for p0 in 0..polygons.len() {
        for v0 in 0..polygons[p0].len() {
            if seen[p0][v0] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut wraps = 0u32;
            let (mut p, mut v) = (p0, v0);
            loop {
                seen[p][v] = true;
                cyc.push((p, v));
                let poly = &polygons[p];
                let start = poly.edge_vector(v);
                let g = partner[p][poly.prev(v)];
                let (q, w) = (g.other.polygon, g.other.edge);
                let next_start = polygons[q].edge_vector(w);
                if next_start.cmp_arg(&start) == Ordering::Less {
                    wraps += 1;
                }
                p = q;
                v = w;
                if (p, v) == (p0, v0) {
                    break;
                }
            }
            cycles.push(cyc);
            turns.push(wraps);
        }
    }
    CornerCycles { cycles, turns }
}

impl Presentation {
    /// Checks every invariant that does not need a saddle-connection search.
    fn structural_report(&self) -> (ValidationReport, Option<Vec<Vec<Gluing>>>, Option<CornerCycles>) {
        let mut report = ValidationReport::default();

        let field_ok = self.field_discriminant == 0
            || (self.field_discriminant > 1 && is_square_free(self.field_discriminant));
        report.push(
            "field",
            field_ok,
            format!("discriminant {}", self.field_discriminant),
        );
        let foreign = self
            .polygons
            .iter()
            .flat_map(|q| q.vertices.iter())
            .flat_map(|v| [&v.x, &v.y])
            .any(|c| c.discriminant() != 0 && c.discriminant() != self.field_discriminant);
        report.push(
            "coordinates in field",
            !foreign,
            if foreign { "a coordinate uses another discriminant" } else { "ok" },
        );

        let bad: Vec<usize> = (0..self.polygons.len())
            .filter(|&i| !self.polygons[i].is_strictly_convex_ccw())
            .collect();
        report.push(
            "convex polygons",
            bad.is_empty() && !self.polygons.is_empty(),
            if bad.is_empty() { "ok".to_string() } else { format!("not convex: {bad:?}") },
        );

        let partner = match partner_table(self) {
            Ok(t) => {
                report.push("edge pairing", true, "every edge glued exactly once");
                t.into_iter()
                    .map(|row| row.into_iter().map(|g| g.unwrap()).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            }
            Err(msg) => {
                report.push("edge pairing", false, msg);
                return (report, None, None);
            }
        };

        let mut not_translation = Vec::new();
        for (a, b) in &self.gluings {
            let ea = self.polygons[a.polygon].edge_vector(a.edge);
            let eb = self.polygons[b.polygon].edge_vector(b.edge);
            if ea != -&eb {
                not_translation.push((*a, *b));
            }
        }
        report.push(
            "translation gluings",
            not_translation.is_empty(),
            if not_translation.is_empty() {
                "ok".to_string()
            } else {
                format!("not translations: {not_translation:?}")
            },
        );
        if !not_translation.is_empty() || !bad.is_empty() {
            return (report, Some(partner), None);
        }

        let cc = corner_cycles(&self.polygons, &partner);
        let singular = cc.turns.iter().filter(|&&t| t != 1).count();
        let regular = cc.turns.len() - singular;
        report.push(
            "single singularity",
            singular == 1 && regular == 0,
            format!(
                "{} vertex classes, angles {:?}·2π",
                cc.turns.len(),
                cc.turns
            ),
        );

        let v = cc.cycles.len() as i64;
        let e = self.gluings.len() as i64;
        let f = self.polygons.len() as i64;
        let chi = v - e + f;
        let genus = (2 - chi) / 2;
        let total_turns: i64 = cc.turns.iter().map(|&t| t as i64).sum();
        // Gauss–Bonnet: Σ (angle − 2π) = −2πχ
        let gauss_bonnet = (total_turns - v) == -chi && (2 - chi) % 2 == 0;
        report.push(
            "cone angle",
            gauss_bonnet && genus >= 2,
            format!("χ = {chi}, genus {genus}, total angle {total_turns}·2π"),
        );

        match &self.systole {
            Some(s) => report.push("systole positive", s.signum() > 0, format!("{s}")),
            None => report.push("systole positive", false, "missing"),
        }
        (report, Some(partner), Some(cc))
    }

    /// Full structural validation (no systole cross-check).
    pub fn validate(&self) -> ValidationReport {
        self.structural_report().0
    }

    pub fn build(self) -> Result<FlatSurface> {
        let (report, partner, cc) = self.structural_report();
        let fail = |name: &str| report.checks.iter().any(|c| c.name == name && !c.passed);
        if fail("field") || fail("coordinates in field") {
            return Err(Error::MalformedDocument(
                "coordinates are not in the declared field".into(),
            ));
        }
        if let Some(&i) = (0..self.polygons.len())
            .filter(|&i| !self.polygons[i].is_strictly_convex_ccw())
            .collect::<Vec<_>>()
            .first()
        {
            return Err(Error::NonConvexPolygon(i));
        }
        if self.polygons.is_empty() {
            return Err(Error::MalformedDocument("no polygons".into()));
        }
        let Some(partner) = partner else {
            let detail = report
                .failures()
                .first()
                .map(|c| c.detail.clone())
                .unwrap_or_default();
            return Err(Error::MalformedDocument(detail));
        };
        for (a, b) in &self.gluings {
            let ea = self.polygons[a.polygon].edge_vector(a.edge);
            let eb = self.polygons[b.polygon].edge_vector(b.edge);
            if ea != -&eb {
                return Err(Error::GluingNotTranslation {
                    a: (a.polygon, a.edge),
                    b: (b.polygon, b.edge),
                });
            }
        }
        let cc = cc.expect("cycles are computed once gluings are translations");
        let singular = cc.turns.iter().filter(|&&t| t != 1).count();
        if singular > 1 {
            return Err(Error::MultipleSingularities { classes: singular });
        }
        if cc.cycles.len() > 1 {
            return Err(Error::RegularVertexClass);
        }
        if fail("cone angle") {
            return Err(Error::InvalidInput(
                "presentation does not have genus at least 2".into(),
            ));
        }
        let systole = self.systole.clone().ok_or(Error::NonPositiveSystole)?;
        if systole.signum() <= 0 {
            return Err(Error::NonPositiveSystole);
        }
        let turns = cc.turns[0];
        let genus = turns.div_ceil(2);

        let mut corners = Vec::new();
        let mut corner_of: Vec<Vec<usize>> =
            self.polygons.iter().map(|q| vec![0; q.len()]).collect();
        let mut sheet = 0u32;
        let cycle = &cc.cycles[0];
        for (i, &(p, v)) in cycle.iter().enumerate() {
            let poly = &self.polygons[p];
            let start = poly.edge_vector(v);
            let end = poly.vertex(poly.prev(v)) - poly.vertex(v);
            corner_of[p][v] = i;
            corners.push(Corner {
                polygon: p,
                vertex: v,
                start: start.clone(),
                end: end.clone(),
                sheet,
            });
            if end.cmp_arg(&start) == Ordering::Less {
                sheet += 1;
            }
        }
        debug_assert_eq!(sheet, turns);

        Ok(FlatSurface {
            name: self.name,
            field_discriminant: self.field_discriminant,
            polygons: self.polygons,
            gluings: self.gluings,
            partner,
            genus,
            systole,
            corners,
            corner_of,
        })
    }
}

impl FlatSurface {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field_discriminant(&self) -> u32 {
        self.field_discriminant
    }

    pub fn polygons(&self) -> &[Polygon] {
        &self.polygons
    }

    pub fn polygon(&self, i: usize) -> &Polygon {
        &self.polygons[i]
    }

    pub fn gluings(&self) -> &[(EdgeRef, EdgeRef)] {
        &self.gluings
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// Number of `2π` turns around the cone point, `2g − 1`.
    pub fn sheets(&self) -> u32 {
        2 * self.genus - 1
    }

    /// Cone angle stored as an integer multiple of π.
    pub fn cone_angle_over_pi(&self) -> u32 {
        2 * self.sheets()
    }

    pub fn cone_angle(&self) -> f64 {
        self.cone_angle_over_pi() as f64 * std::f64::consts::PI
    }

    pub fn systole(&self) -> &ExactCoord {
        &self.systole
    }

    pub fn area(&self) -> ExactCoord {
        self.polygons
            .iter()
            .fold(ExactCoord::zero(), |acc, p| acc + p.area())
    }

    /// Replaces the catalogued systole without checking it.
    pub fn with_systole(mut self, systole: ExactCoord) -> Self {
        self.systole = systole;
        self
    }

    pub fn glued(&self, e: EdgeRef) -> Gluing {
        self.partner[e.polygon][e.edge]
    }

    /// Translation taking the local frame of the polygon across `e` to the
    /// local frame of `e.polygon`, so that the two edges coincide.
    pub fn translation_across(&self, e: EdgeRef) -> Vec2 {
        let g = self.glued(e);
        let p = &self.polygons[e.polygon];
        let q = &self.polygons[g.other.polygon];
        p.vertex(e.edge + 1) - q.vertex(g.other.edge)
    }

    /// Corners in counter-clockwise order around the cone point.
    pub fn corners(&self) -> &[Corner] {
        &self.corners
    }

    pub fn corner_index(&self, polygon: usize, vertex: usize) -> usize {
        self.corner_of[polygon][vertex]
    }

    pub fn corner_count(&self) -> usize {
        self.corners.len()
    }

    /// Coordinate of a direction leaving the cone point from corner `c`.
    /// `dir` must lie in the half-open sector `[start, end)` of the corner.
    pub fn cone_coordinate(&self, c: usize, dir: &Vec2) -> ConeAngle {
        let corner = &self.corners[c];
        let mut sheet = corner.sheet;
        if dir.cmp_arg(&corner.start) == Ordering::Less {
            sheet += 1;
        }
        ConeAngle {
            sheet: sheet % self.sheets(),
            dir: dir.clone(),
        }
    }

    /// Structural checks plus the systole cross-check against the shortest
    /// saddle connection (every saddle connection closes up to a closed
    /// geodesic, and every cylinder is bounded by saddle connections).
    pub fn validate(&self) -> ValidationReport {
        let mut report = self.presentation().validate();
        let s2 = &self.systole * &self.systole;
        let probe = crate::saddle::shortest_length_sq(self, &s2, 1_000_000);
        let (ok, detail) = match probe {
            Ok(Some(shortest)) if shortest == s2 => (true, format!("shortest saddle connection {}", self.systole)),
            Ok(Some(shortest)) if shortest < s2 => (
                false,
                format!("systole not realized: a closed geodesic of length² {shortest} is shorter"),
            ),
            Ok(_) => (
                false,
                "systole not realized: no closed geodesic of that length".to_string(),
            ),
            Err(e) => (false, format!("search failed: {e}")),
        };
        report.push("systole realized", ok, detail);
        report
    }

    pub fn presentation(&self) -> Presentation {
        Presentation {
            name: self.name.clone(),
            field_discriminant: self.field_discriminant,
            polygons: self.polygons.clone(),
            gluings: self.gluings.clone(),
            systole: Some(self.systole.clone()),
        }
    }

    pub fn to_document(&self) -> String {
        crate::surface_file::serialize(&self.presentation())
    }
}

impl PartialEq for FlatSurface {
    fn eq(&self, other: &Self) -> bool {
        self.presentation() == other.presentation()
    }
}

pub fn load_surface(document: &str) -> Result<FlatSurface> {
    crate::surface_file::parse(document)?.build()
}

fn unit_square_at(x: i64, y: i64) -> Polygon {
    Polygon::new(vec![
        Vec2::ints(x, y),
        Vec2::ints(x + 1, y),
        Vec2::ints(x + 1, y + 1),
        Vec2::ints(x, y + 1),
    ])
}

/// Cycle structure of a permutation given by images (0-based).
pub fn cycles(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for i in 0..perm.len() {
        if seen[i] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            cyc.push(j);
            j = perm[j];
        }
        out.push(cyc);
    }
    out
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

/// Commutator `v⁻¹ h⁻¹ v h` (apply `h` first): its cycles are the vertex
/// classes of the square-tiled surface.
pub fn commutator(h: &[usize], v: &[usize]) -> Vec<usize> {
    let hi = inverse(h);
    let vi = inverse(v);
    (0..h.len()).map(|i| vi[hi[v[h[i]]]]).collect()
}

/// Square-tiled surface: square `i` has right neighbour `h[i]` and upper
/// neighbour `v[i]`. Squares are laid out at `positions` (or on a row).
pub fn origami_at(
    name: &str,
    h: &[usize],
    v: &[usize],
    positions: Option<&[(i64, i64)]>,
) -> Result<FlatSurface> {
    let n = h.len();
    if n == 0 || v.len() != n || !is_permutation(h) || !is_permutation(v) {
        return Err(Error::InvalidInput(
            "origami needs two permutations of the same size".into(),
        ));
    }
    let mut reach = vec![false; n];
    let mut stack = vec![0];
    reach[0] = true;
    while let Some(i) = stack.pop() {
        for j in [h[i], v[i]] {
            if !reach[j] {
                reach[j] = true;
                stack.push(j);
            }
        }
    }
    if reach.iter().any(|r| !r) {
        return Err(Error::InvalidInput("origami is not connected".into()));
    }
    let cyc = cycles(&commutator(h, v));
    if cyc.len() != 1 {
        return Err(Error::OrigamiHasMultipleSingularities { cycles: cyc.len() });
    }
    let polygons = (0..n)
        .map(|i| {
            let (x, y) = positions.map(|p| p[i]).unwrap_or((2 * i as i64, 0));
            unit_square_at(x, y)
        })
        .collect();
    let mut gluings = Vec::new();
    for i in 0..n {
        gluings.push((EdgeRef::new(i, 1), EdgeRef::new(h[i], 3)));
    }
    for i in 0..n {
        gluings.push((EdgeRef::new(i, 2), EdgeRef::new(v[i], 0)));
    }
    Presentation {
        name: name.to_string(),
        field_discriminant: 0,
        polygons,
        gluings,
        systole: Some(ExactCoord::one()),
    }
    .build()
}

pub fn origami(h: &[usize], v: &[usize]) -> Result<FlatSurface> {
    origami_at(&origami_name(h, v), h, v, None)
}

fn cycle_notation(p: &[usize]) -> String {
    cycles(p)
        .iter()
        .map(|c| {
            let items: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            format!("({})", items.join(" "))
        })
        .collect()
}

fn origami_name(h: &[usize], v: &[usize]) -> String {
    format!("origami({},{})", cycle_notation(h), cycle_notation(v))
}

/// Parses products of cycles like `(1 2 3)(4)` with 1-based labels.
fn parse_cycles(text: &str, n: usize) -> Option<Vec<usize>> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut rest = text.trim();
    while !rest.is_empty() {
        rest = rest.strip_prefix('(')?;
        let close = rest.find(')')?;
        let items: Vec<usize> = rest[..close]
            .split(|c: char| c == ' ' || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<usize>().ok().filter(|&x| x >= 1 && x <= n).map(|x| x - 1))
            .collect::<Option<_>>()?;
        for k in 0..items.len() {
            perm[items[k]] = items[(k + 1) % items.len()];
        }
        rest = rest[close + 1..].trim_start();
    }
    is_permutation(&perm).then_some(perm)
}

fn parse_origami(name: &str) -> Option<(Vec<usize>, Vec<usize>)> {
    let body = name.trim().strip_prefix("origami(")?.strip_suffix(')')?;
    // split at the comma between the two permutations (depth zero)
    let mut depth = 0i32;
    let mut split = None;
    for (i, c) in body.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => split = Some(i),
            _ => {}
        }
    }
    let i = split?;
    let (hs, vs) = (&body[..i], &body[i + 1..]);
    let n = hs
        .split(|c: char| !c.is_ascii_digit())
        .chain(vs.split(|c: char| !c.is_ascii_digit()))
        .filter_map(|s| s.parse::<usize>().ok())
        .max()?;
    Some((parse_cycles(hs, n)?, parse_cycles(vs, n)?))
}

pub fn l_origami_3() -> FlatSurface {
    origami_at(
        "L-origami-3",
        &[1, 0, 2],
        &[2, 1, 0],
        Some(&[(0, 0), (1, 0), (0, 1)]),
    )
    .expect("L-shaped origami is valid")
}

/// Regular octagon with side 1, opposite sides glued.
pub fn regular_octagon() -> FlatSurface {
    let h = |p: i64, q: i64, r: i64, s: i64| ExactCoord::quad(p, q, r, s, 2);
    let vertices = vec![
        Vec2::new(h(0, 1, 0, 1), h(0, 1, 0, 1)),
        Vec2::new(h(1, 1, 0, 1), h(0, 1, 0, 1)),
        Vec2::new(h(1, 1, 1, 2), h(0, 1, 1, 2)),
        Vec2::new(h(1, 1, 1, 2), h(1, 1, 1, 2)),
        Vec2::new(h(1, 1, 0, 1), h(1, 1, 1, 1)),
        Vec2::new(h(0, 1, 0, 1), h(1, 1, 1, 1)),
        Vec2::new(h(0, 1, -1, 2), h(1, 1, 1, 2)),
        Vec2::new(h(0, 1, -1, 2), h(0, 1, 1, 2)),
    ];
    let gluings = (0..4)
        .map(|j| (EdgeRef::new(0, j), EdgeRef::new(0, j + 4)))
        .collect();
    Presentation {
        name: "regular-octagon".into(),
        field_discriminant: 2,
        polygons: vec![Polygon::new(vertices)],
        gluings,
        systole: Some(ExactCoord::one()),
    }
    .build()
    .expect("regular octagon is valid")
}

pub const BUILTIN_NAMES: [&str; 2] = ["regular-octagon", "L-origami-3"];

/// `regular-octagon`, `L-origami-3`, or `origami(h,v)` in 1-based cycle
/// notation, e.g. `origami((1 2),(1 3))`.
pub fn builtin_surface(name: &str) -> Result<FlatSurface> {
    match name {
        "regular-octagon" => Ok(regular_octagon()),
        "L-origami-3" => Ok(l_origami_3()),
        _ => match parse_origami(name) {
            Some((h, v)) => origami(&h, &v),
            None => Err(Error::UnknownSurface(name.to_string())),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn octagon_has_genus_two() {
        let s = regular_octagon();
        assert_eq!(s.genus(), 2);
        assert_eq!(s.cone_angle_over_pi(), 6);
        assert_eq!(s.corner_count(), 8);
    }

    #[test]
    fn l_origami_has_genus_two_and_area_three() {
        let s = l_origami_3();
        assert_eq!(s.genus(), 2);
        assert_eq!(s.cone_angle_over_pi(), 6);
        assert_eq!(s.area(), ExactCoord::int(3));
        assert_eq!(s.corner_count(), 12);
    }

    #[test]
    fn corner_angles_sum_to_cone_angle() {
        // each corner's interior angle, measured in floats, summed
        for s in [regular_octagon(), l_origami_3()] {
            let total: f64 = s
                .corners()
                .iter()
                .map(|c| {
                    let (ax, ay) = c.start.to_f64();
                    let (bx, by) = c.end.to_f64();
                    (ax * by - ay * bx).atan2(ax * bx + ay * by)
                })
                .sum();
            assert!((total - s.cone_angle()).abs() < 1e-9, "{total}");
        }
    }

    #[test]
    fn euler_characteristic_gives_genus() {
        for s in [regular_octagon(), l_origami_3()] {
            let e = s.gluings().len() as i64;
            let f = s.polygons().len() as i64;
            let chi = 1 - e + f;
            assert_eq!((2 - chi) / 2, s.genus() as i64);
            assert_eq!(s.sheets() as i64, 2 * s.genus() as i64 - 1);
        }
    }

    #[test]
    fn consecutive_corners_share_rays() {
        let s = l_origami_3();
        let n = s.corner_count();
        for i in 0..n {
            let a = &s.corners()[i];
            let b = &s.corners()[(i + 1) % n];
            assert!(a.end.same_direction(&b.start));
        }
    }

    #[test]
    fn rotation_gluing_is_rejected() {
        // square whose right edge is glued to its top edge
        let sq = unit_square_at(0, 0);
        let p = Presentation {
            name: "bad".into(),
            field_discriminant: 0,
            polygons: vec![sq],
            gluings: vec![
                (EdgeRef::new(0, 1), EdgeRef::new(0, 2)),
                (EdgeRef::new(0, 0), EdgeRef::new(0, 3)),
            ],
            systole: Some(ExactCoord::one()),
        };
        assert!(matches!(p.build(), Err(Error::GluingNotTranslation { .. })));
    }

    #[test]
    fn two_vertex_classes_fail_validation() {
        // two squares glued into a torus-with-slit shape: h = id, v = (0 1)
        // gives a torus cover with two regular vertex classes
        let p = Presentation {
            name: "two-classes".into(),
            field_discriminant: 0,
            polygons: vec![unit_square_at(0, 0), unit_square_at(0, 1)],
            gluings: vec![
                (EdgeRef::new(0, 1), EdgeRef::new(0, 3)),
                (EdgeRef::new(1, 1), EdgeRef::new(1, 3)),
                (EdgeRef::new(0, 2), EdgeRef::new(1, 0)),
                (EdgeRef::new(1, 2), EdgeRef::new(0, 0)),
            ],
            systole: Some(ExactCoord::one()),
        };
        let report = p.validate();
        assert!(!report.passed());
        assert!(report
            .failures()
            .iter()
            .any(|c| c.name == "single singularity"));
        assert!(p.build().is_err());
    }

    #[test]
    fn commutator_of_inverse_pair_is_trivial() {
        // h = (1 2 3), v = (1 3 2) = h⁻¹ commute, so every square corner is
        // its own vertex class
        let h = [1, 2, 0];
        let v = [2, 0, 1];
        assert_eq!(commutator(&h, &v), vec![0, 1, 2]);
        assert_eq!(
            origami(&h, &v).unwrap_err(),
            Error::OrigamiHasMultipleSingularities { cycles: 3 }
        );
        assert!(matches!(
            builtin_surface("origami((1 2 3),(1 3 2))"),
            Err(Error::OrigamiHasMultipleSingularities { cycles: 3 })
        ));
    }

    #[test]
    fn origami_by_name_matches_l_shape() {
        let s = builtin_surface("origami((1 2)(3),(1 3)(2))").unwrap();
        assert_eq!(s.genus(), 2);
        assert_eq!(s.corner_count(), 12);
        assert!(matches!(
            builtin_surface("torus"),
            Err(Error::UnknownSurface(_))
        ));
    }

    #[test]
    fn staircase_origami_has_genus_three() {
        // five-square staircase: the commutator is a single 5-cycle
        let h = [1, 0, 3, 2, 4];
        let v = [0, 2, 1, 4, 3];
        assert_eq!(cycles(&commutator(&h, &v)).len(), 1);
        let s = origami(&h, &v).unwrap();
        assert_eq!(s.genus(), 3);
        assert_eq!(s.cone_angle_over_pi(), 10);
    }

    #[test]
    fn builtins_validate() {
        for s in [regular_octagon(), l_origami_3()] {
            let r = s.validate();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn wrong_systole_is_reported() {
        let s = l_origami_3().with_systole(ExactCoord::int(2));
        let r = s.validate();
        let bad = r.failures();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].name, "systole realized");
        assert!(bad[0].detail.contains("not realized"));
    }
}
