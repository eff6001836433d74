// Copyright 2026 the flatgeo Authors
// SPDX-License-Identifier: Apache-2.0

//! Self-intersection numbers of geodesic words.
//!
//! A word is pushed off the cone point: each letter becomes a strand in the
//! band around its saddle connection, and consecutive strands are joined by
//! chords inside a small disc around the cone point. Crossings away from the
//! disc are transverse intersections of distinct saddle connections and are
//! counted exactly from the polygon pieces. Crossings inside the disc are
//! interleaving chord pairs, minimised over the order of strands within each
//! band.
//!
//! Strands of one band keep their relative order along the band, so the
//! lane of a strand is read counter-clockwise at the departure end of the
//! band's forward direction and clockwise at the other end.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::Vec2;
use crate::flatsurf::FlatSurface;
use crate::geodesy::{arc_word, ArcWord, GeodesicWord};
use crate::saddle::{Piece, SaddleConnection, SaddleSet};

pub const DEFAULT_ORDERING_BUDGET: u128 = 1_000_000;

fn orient(a: &Vec2, b: &Vec2, c: &Vec2) -> i32 {
    (b - a).cross(&(c - a)).signum()
}

/// Open segments cross at a single interior point.
fn proper_crossing(p: &Piece, q: &Piece) -> bool {
    let d1 = orient(&p.from, &p.to, &q.from);
    let d2 = orient(&p.from, &p.to, &q.to);
    let d3 = orient(&q.from, &q.to, &p.from);
    let d4 = orient(&q.from, &q.to, &p.to);
    d1 * d2 < 0 && d3 * d4 < 0
}

/// Transverse intersections of two saddle connections away from the cone
/// point. Zero for a connection and itself or its reverse.
pub fn connection_crossings(a: &SaddleConnection, b: &SaddleConnection) -> u32 {
    if a.id == b.id || a.id == b.reverse_id {
        return 0;
    }
    match (a.along_edge, b.along_edge) {
        (Some(_), Some(_)) => 0,
        (Some(g), None) => b.edge_points.iter().filter(|p| p.gluing == g).count() as u32,
        (None, Some(g)) => a.edge_points.iter().filter(|p| p.gluing == g).count() as u32,
        (None, None) => {
            let mut n = 0;
            for p in &a.pieces {
                for q in &b.pieces {
                    if p.polygon == q.polygon && proper_crossing(p, q) {
                        n += 1;
                    }
                }
            }
            for p in &a.edge_points {
                n += b.edge_points.iter().filter(|q| *q == p).count() as u32;
            }
            n
        }
    }
}

/// Precomputed geometry for crossing counts over one saddle-connection set.
pub struct CrossingContext<'a> {
    pub surface: &'a FlatSurface,
    pub set: &'a SaddleSet,
    interior: Vec<u32>,
    /// Rank of each connection's departure in counter-clockwise order.
    slot_rank: Vec<usize>,
    pub ordering_budget: u128,
}

impl<'a> CrossingContext<'a> {
    pub fn new(surface: &'a FlatSurface, set: &'a SaddleSet) -> Self {
        let n = set.len();
        let interior: Vec<u32> = (0..n * n)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k / n, k % n);
                let (ui, uj) = (set.undirected(i), set.undirected(j));
                if i == ui && j == uj && i < j {
                    connection_crossings(set.get(i), set.get(j))
                } else {
                    0
                }
            })
            .collect();
        let mut interior_full = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let (ui, uj) = (set.undirected(i), set.undirected(j));
                let (a, b) = (ui.min(uj), ui.max(uj));
                interior_full[i * n + j] = interior[a * n + b];
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| set.get(a).departure.cmp(&set.get(b).departure));
        let mut slot_rank = vec![0; n];
        for (r, &i) in order.iter().enumerate() {
            slot_rank[i] = r;
        }
        CrossingContext {
            surface,
            set,
            interior: interior_full,
            slot_rank,
            ordering_budget: DEFAULT_ORDERING_BUDGET,
        }
    }

    pub fn crossings(&self, a: usize, b: usize) -> u32 {
        self.interior[a * self.set.len() + b]
    }

    pub fn slot_rank(&self, letter: usize) -> usize {
        self.slot_rank[letter]
    }

    /// Counter-clockwise ranks of the two ends of the band of `letter`,
    /// starting with the departure of its smaller-id direction.
    fn band_slots(&self, letter: usize) -> (usize, usize) {
        let u = self.set.undirected(letter);
        (self.slot_rank[u], self.slot_rank[self.set.reverse(u)])
    }

    pub fn diagram(&self, groups: &[(&[usize], bool)]) -> StrandDiagram {
        let mut bands: Vec<usize> = Vec::new();
        let mut band_slots = Vec::new();
        let mut occurrences = Vec::new();
        let mut chords = Vec::new();
        for (g, (letters, closed)) in groups.iter().enumerate() {
            let base = occurrences.len();
            for &l in letters.iter() {
                let u = self.set.undirected(l);
                let b = match bands.iter().position(|&x| x == u) {
                    Some(b) => b,
                    None => {
                        bands.push(u);
                        band_slots.push(self.band_slots(l));
                        bands.len() - 1
                    }
                };
                occurrences.push((b, l == u));
            }
            let n = letters.len();
            let m = if *closed { n } else { n.saturating_sub(1) };
            for i in 0..m {
                chords.push(Chord {
                    arrival: base + i,
                    departure: base + (i + 1) % n,
                    group: g,
                });
            }
        }
        StrandDiagram::new(band_slots, occurrences, chords)
    }

    fn interior_within(&self, letters: &[usize]) -> u64 {
        let mut total = 0u64;
        for i in 0..letters.len() {
            for j in i + 1..letters.len() {
                total += self.crossings(letters[i], letters[j]) as u64;
            }
        }
        total
    }

    fn interior_between(&self, a: &[usize], b: &[usize]) -> u64 {
        a.iter()
            .flat_map(|&x| b.iter().map(move |&y| (x, y)))
            .map(|(x, y)| self.crossings(x, y) as u64)
            .sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Chord {
    /// Occurrence whose arrival point starts the chord.
    pub arrival: usize,
    /// Occurrence whose departure point ends the chord.
    pub departure: usize,
    pub group: usize,
}

/// Occurrences of saddle connections around the cone-point disc.
#[derive(Clone, Debug)]
pub struct StrandDiagram {
    /// Counter-clockwise slot ranks `(e1, e2)` of each band. A forward strand
    /// departs at `e1` and arrives at `e2`.
    pub band_slots: Vec<(usize, usize)>,
    /// `(band, forward)` per occurrence.
    pub occurrences: Vec<(usize, bool)>,
    pub chords: Vec<Chord>,
    members: Vec<Vec<usize>>,
}

/// Lane of every occurrence, indexed like `StrandDiagram::occurrences`.
pub type BandOrdering = Vec<usize>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Pairs {
    All,
    AcrossGroups,
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..k).collect();
    loop {
        out.push(p.clone());
        // next lexicographic permutation
        let Some(i) = (1..k).rev().find(|&i| p[i - 1] < p[i]) else {
            break;
        };
        let j = (i..k).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
    out
}

fn interleave(a: (usize, usize), b: (usize, usize)) -> bool {
    let (a0, a1) = (a.0.min(a.1), a.0.max(a.1));
    let (b0, b1) = (b.0.min(b.1), b.0.max(b.1));
    (a0 < b0 && b0 < a1 && a1 < b1) || (b0 < a0 && a0 < b1 && b1 < a1)
}

/// Number of interleaving pairs among chords given by endpoint positions.
pub fn count_interleavings(chords: &[(usize, usize)]) -> usize {
    let mut n = 0;
    for i in 0..chords.len() {
        for j in i + 1..chords.len() {
            if interleave(chords[i], chords[j]) {
                n += 1;
            }
        }
    }
    n
}

impl StrandDiagram {
    pub fn new(
        band_slots: Vec<(usize, usize)>,
        occurrences: Vec<(usize, bool)>,
        chords: Vec<Chord>,
    ) -> Self {
        let mut members = vec![Vec::new(); band_slots.len()];
        for (i, &(b, _)) in occurrences.iter().enumerate() {
            members[b].push(i);
        }
        StrandDiagram {
            band_slots,
            occurrences,
            chords,
            members,
        }
    }

    /// Counter-clockwise sort keys `(slot, offset)` of the departure and
    /// arrival points of occurrence `i`.
    pub fn endpoint_keys(&self, lanes: &BandOrdering, i: usize) -> ((usize, usize), (usize, usize)) {
        let (b, forward) = self.occurrences[i];
        let k = self.members[b].len();
        let lane = lanes[i];
        let (e1, e2) = self.band_slots[b];
        let at_e1 = (e1, lane);
        let at_e2 = (e2, k - 1 - lane);
        if forward {
            (at_e1, at_e2)
        } else {
            (at_e2, at_e1)
        }
    }

    /// Positions `0..2n` of every departure and arrival point in
    /// counter-clockwise order.
    pub fn positions(&self, lanes: &BandOrdering) -> (Vec<usize>, Vec<usize>) {
        let n = self.occurrences.len();
        let mut keys = Vec::with_capacity(2 * n);
        for i in 0..n {
            let (d, a) = self.endpoint_keys(lanes, i);
            keys.push((d, 2 * i));
            keys.push((a, 2 * i + 1));
        }
        keys.sort();
        let mut dep = vec![0; n];
        let mut arr = vec![0; n];
        for (pos, (_, code)) in keys.iter().enumerate() {
            if code % 2 == 0 {
                dep[code / 2] = pos;
            } else {
                arr[code / 2] = pos;
            }
        }
        (dep, arr)
    }

    fn count(&self, lanes: &BandOrdering, pairs: Pairs) -> usize {
        let (dep, arr) = self.positions(lanes);
        let segs: Vec<(usize, usize, usize)> = self
            .chords
            .iter()
            .map(|c| (arr[c.arrival], dep[c.departure], c.group))
            .collect();
        let mut n = 0;
        for i in 0..segs.len() {
            for j in i + 1..segs.len() {
                if pairs == Pairs::AcrossGroups && segs[i].2 == segs[j].2 {
                    continue;
                }
                if interleave((segs[i].0, segs[i].1), (segs[j].0, segs[j].1)) {
                    n += 1;
                }
            }
        }
        n
    }

    pub fn crossings(&self, lanes: &BandOrdering) -> usize {
        self.count(lanes, Pairs::All)
    }

    pub fn identity_ordering(&self) -> BandOrdering {
        let mut lanes = vec![0; self.occurrences.len()];
        for m in &self.members {
            for (lane, &i) in m.iter().enumerate() {
                lanes[i] = lane;
            }
        }
        lanes
    }

    pub fn ordering_count(&self) -> u128 {
        self.members
            .iter()
            .map(|m| (1..=m.len() as u128).product::<u128>())
            .try_fold(1u128, |acc, f| acc.checked_mul(f))
            .unwrap_or(u128::MAX)
    }

    /// Minimum crossing count over all band orderings, with the
    /// lexicographically first ordering attaining it.
    fn minimise(&self, pairs: Pairs, budget: u128) -> Result<(usize, BandOrdering)> {
        let size = self.ordering_count();
        if size > budget {
            return Err(Error::BudgetExceeded {
                size,
                limit: budget,
            });
        }
        let perms: Vec<Vec<Vec<usize>>> =
            self.members.iter().map(|m| permutations(m.len())).collect();
        let mut digit = vec![0usize; self.members.len()];
        let mut lanes = vec![0; self.occurrences.len()];
        let mut best: Option<(usize, BandOrdering)> = None;
        loop {
            for (b, m) in self.members.iter().enumerate() {
                for (j, &i) in m.iter().enumerate() {
                    lanes[i] = perms[b][digit[b]][j];
                }
            }
            let c = self.count(&lanes, pairs);
            if best.as_ref().map_or(true, |(bc, _)| c < *bc) {
                best = Some((c, lanes.clone()));
                if c == 0 {
                    break;
                }
            }
            // odometer, last band fastest
            let mut b = self.members.len();
            loop {
                if b == 0 {
                    return Ok(best.unwrap());
                }
                b -= 1;
                digit[b] += 1;
                if digit[b] < perms[b].len() {
                    break;
                }
                digit[b] = 0;
            }
        }
        Ok(best.unwrap())
    }

    pub fn min_crossings(&self, budget: u128) -> Result<(usize, BandOrdering)> {
        self.minimise(Pairs::All, budget)
    }

    pub fn min_crossings_between_groups(&self, budget: u128) -> Result<(usize, BandOrdering)> {
        self.minimise(Pairs::AcrossGroups, budget)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CrossingReport {
    pub interior: u64,
    pub disc: u64,
    pub total: u64,
}

impl CrossingReport {
    fn new(interior: u64, disc: u64) -> Self {
        CrossingReport {
            interior,
            disc,
            total: interior + disc,
        }
    }
}

/// Interior crossings among the letter occurrences of a word.
pub fn interior_crossing_count(ctx: &CrossingContext, letters: &[usize]) -> u64 {
    ctx.interior_within(letters)
}

/// Minimum number of interleaving chord pairs over band orderings.
pub fn min_disc_crossings(diagram: &StrandDiagram, budget: u128) -> Result<(usize, BandOrdering)> {
    diagram.min_crossings(budget)
}

fn closed_report(ctx: &CrossingContext, letters: &[usize]) -> Result<CrossingReport> {
    let d = ctx.diagram(&[(letters, true)]);
    let (disc, _) = d.min_crossings(ctx.ordering_budget)?;
    Ok(CrossingReport::new(
        ctx.interior_within(letters),
        disc as u64,
    ))
}

fn arc_report(ctx: &CrossingContext, letters: &[usize]) -> Result<CrossingReport> {
    let d = ctx.diagram(&[(letters, false)]);
    let (disc, _) = d.min_crossings(ctx.ordering_budget)?;
    Ok(CrossingReport::new(
        ctx.interior_within(letters),
        disc as u64,
    ))
}

pub fn self_intersection(ctx: &CrossingContext, word: &GeodesicWord) -> Result<CrossingReport> {
    closed_report(ctx, &word.letters)
}

pub fn closed_word_self_intersection(ctx: &CrossingContext, letters: &[usize]) -> Result<CrossingReport> {
    closed_report(ctx, letters)
}

pub fn arc_self_intersection(ctx: &CrossingContext, arc: &ArcWord) -> Result<CrossingReport> {
    arc_report(ctx, &arc.letters)
}

pub fn arc_pair_intersection(ctx: &CrossingContext, a: &ArcWord, b: &ArcWord) -> Result<u64> {
    let d = ctx.diagram(&[(&a.letters, false), (&b.letters, false)]);
    let (disc, _) = d.min_crossings_between_groups(ctx.ordering_budget)?;
    Ok(ctx.interior_between(&a.letters, &b.letters) + disc as u64)
}

pub fn is_simple_arc(ctx: &CrossingContext, arc: &ArcWord) -> Result<bool> {
    Ok(arc_self_intersection(ctx, arc)?.total == 0)
}

fn is_simple_letters(ctx: &CrossingContext, letters: &[usize]) -> Result<bool> {
    Ok(arc_report(ctx, letters)?.total == 0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimpleArcDecomposition {
    pub pieces: Vec<ArcWord>,
    pub m: usize,
    pub start_offset: usize,
}

fn rotated(letters: &[usize], r: usize) -> Vec<usize> {
    letters[r..].iter().chain(&letters[..r]).copied().collect()
}

/// Shortest cyclic partition into simple arcs: greedy maximal pieces from
/// every starting offset, keeping the first offset with the fewest pieces.
pub fn decompose_into_simple_arcs(
    ctx: &CrossingContext,
    word: &GeodesicWord,
) -> Result<SimpleArcDecomposition> {
    let n = word.letters.len();
    let mut best: Option<(usize, usize, Vec<usize>)> = None;
    for r in 0..n {
        let w = rotated(&word.letters, r);
        let mut cuts = Vec::new();
        let mut p = 0;
        while p < n {
            let mut len = 1;
            while p + len < n && is_simple_letters(ctx, &w[p..p + len + 1])? {
                len += 1;
            }
            cuts.push(len);
            p += len;
        }
        if best.as_ref().map_or(true, |(m, _, _)| cuts.len() < *m) {
            best = Some((cuts.len(), r, cuts));
        }
    }
    let (m, r, cuts) = best.expect("words are nonempty");
    let w = rotated(&word.letters, r);
    let mut pieces = Vec::new();
    let mut p = 0;
    for len in cuts {
        pieces.push(arc_word(ctx.set, &w[p..p + len]));
        p += len;
    }
    Ok(SimpleArcDecomposition {
        pieces,
        m,
        start_offset: r,
    })
}

fn concat(set: &SaddleSet, parts: &[&ArcWord]) -> ArcWord {
    let letters: Vec<usize> = parts.iter().flat_map(|a| a.letters.iter().copied()).collect();
    arc_word(set, &letters)
}

/// `e_i = δ_i δ_{i+1}` for `m ≥ 2` (empty otherwise).
pub fn build_c1(set: &SaddleSet, d: &SimpleArcDecomposition) -> Vec<ArcWord> {
    let m = d.m;
    if m < 2 {
        return Vec::new();
    }
    (0..m)
        .map(|i| concat(set, &[&d.pieces[i], &d.pieces[(i + 1) % m]]))
        .collect()
}

/// `f_i = e_i e_{i+2} = δ_i δ_{i+1} δ_{i+2} δ_{i+3}`, defined when `m ≥ 4`.
pub fn build_c2(set: &SaddleSet, d: &SimpleArcDecomposition) -> Result<Vec<ArcWord>> {
    let m = d.m;
    if m < 4 {
        return Err(Error::TooFewPieces { m });
    }
    Ok((0..m)
        .map(|i| {
            let parts: Vec<&ArcWord> = (0..4).map(|k| &d.pieces[(i + k) % m]).collect();
            concat(set, &parts)
        })
        .collect())
}

pub fn build_c1_c2(set: &SaddleSet, d: &SimpleArcDecomposition) -> (Vec<ArcWord>, Result<Vec<ArcWord>>) {
    (build_c1(set, d), build_c2(set, d))
}

/// Largest subfamily whose members pairwise have intersection number zero.
/// `disjoint[i][j]` says whether members `i` and `j` are disjoint.
pub fn max_disjoint_subfamily(disjoint: &[Vec<bool>]) -> Result<Vec<usize>> {
    let n = disjoint.len();
    if n > 20 {
        return Err(Error::BudgetExceeded {
            size: 1u128 << n,
            limit: 1 << 20,
        });
    }
    let adj: Vec<u32> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i && disjoint[i][j])
                .fold(0u32, |m, j| m | (1 << j))
        })
        .collect();
    let mut best = 0u32;
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() <= best.count_ones() {
            continue;
        }
        let ok = (0..n)
            .filter(|&i| mask & (1 << i) != 0)
            .all(|i| mask & !(1 << i) & !adj[i] == 0);
        if ok {
            best = mask;
        }
    }
    Ok((0..n).filter(|&i| best & (1 << i) != 0).collect())
}

/// Combinatorial data of a simple arc relative to the saddle connections it
/// uses.
///
/// The endpoints of the connections split the disc boundary into intervals
/// `I_1, …, I_{2m}`, numbered clockwise starting from the last interval in
/// counter-clockwise order. Boundary points are numbered `1..=2n`
/// clockwise from the start of `I_1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcData {
    /// `n[i][j]`: chords joining `I_{i+1}` and `I_{j+1}` (symmetric).
    pub n: Vec<Vec<u32>>,
    pub t0: usize,
    pub t1: usize,
    pub i0: usize,
    pub i1: usize,
}

impl ArcData {
    /// Number of chords: `Σ_{i ≤ j} n_ij`.
    pub fn chord_total(&self) -> u32 {
        let k = self.n.len();
        (0..k)
            .flat_map(|i| (i..k).map(move |j| (i, j)))
            .map(|(i, j)| self.n[i][j])
            .sum()
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.n[i - 1][j - 1]
    }
}

/// Reads off the data of an arc diagram (one group, open) under `lanes`.
pub fn arc_data_with_ordering(d: &StrandDiagram, lanes: &BandOrdering) -> ArcData {
    let mut slots: Vec<usize> = d
        .band_slots
        .iter()
        .flat_map(|&(a, b)| [a, b])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    slots.reverse();
    let interval = |slot: usize| slots.iter().position(|&s| s == slot).unwrap();
    let n = d.occurrences.len();

    let mut keys: Vec<((usize, usize), usize)> = Vec::with_capacity(2 * n);
    for i in 0..n {
        let (dep, arr) = d.endpoint_keys(lanes, i);
        keys.push((dep, 2 * i));
        keys.push((arr, 2 * i + 1));
    }
    // clockwise: decreasing counter-clockwise key
    keys.sort_by(|a, b| b.cmp(a));
    let number = |code: usize| keys.iter().position(|k| k.1 == code).unwrap() + 1;
    let slot_of = |code: usize| keys.iter().find(|k| k.1 == code).unwrap().0 .0;

    let k = slots.len();
    let mut counts = vec![vec![0u32; k]; k];
    for c in &d.chords {
        let a = interval(slot_of(2 * c.arrival + 1));
        let b = interval(slot_of(2 * c.departure));
        counts[a][b] += 1;
        if a != b {
            counts[b][a] += 1;
        }
    }
    ArcData {
        n: counts,
        t0: number(0),
        t1: number(2 * (n - 1) + 1),
        i0: interval(slot_of(0)) + 1,
        i1: interval(slot_of(2 * (n - 1) + 1)) + 1,
    }
}

/// Data `D(δ)` of a simple arc; `sigma` must list exactly its distinct
/// unoriented saddle connections (any orientation).
pub fn encode_arc_data(ctx: &CrossingContext, arc: &ArcWord, sigma: &[usize]) -> Result<ArcData> {
    let used: BTreeSet<usize> = arc.letters.iter().map(|&l| ctx.set.undirected(l)).collect();
    let given: BTreeSet<usize> = sigma.iter().map(|&l| ctx.set.undirected(l)).collect();
    if used != given {
        return Err(Error::InvalidInput(
            "Σ must be the set of saddle connections used by the arc".into(),
        ));
    }
    let d = ctx.diagram(&[(&arc.letters, false)]);
    let (disc, lanes) = d.min_crossings(ctx.ordering_budget)?;
    if disc > 0 || ctx.interior_within(&arc.letters) > 0 {
        return Err(Error::NotSimple);
    }
    Ok(arc_data_with_ordering(&d, &lanes))
}

/// Distinct unoriented saddle connections of a word.
pub fn distinct_connections(set: &SaddleSet, letters: &[usize]) -> Vec<usize> {
    letters
        .iter()
        .map(|&l| set.undirected(l))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;
    use crate::flatsurf::l_origami_3;
    use crate::geodesy::{enumerate_closed_geodesics, JunctionTable, WordOptions};
    use crate::saddle::{enumerate_saddle_connections, SearchOptions};

    #[test]
    fn chord_rule() {
        assert_eq!(count_interleavings(&[(1, 3), (2, 4)]), 1);
        assert_eq!(count_interleavings(&[(1, 2), (3, 4)]), 0);
        assert_eq!(count_interleavings(&[(1, 4), (2, 3)]), 0);
    }

    #[test]
    fn permutations_are_lexicographic() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![0, 1, 2]);
        assert_eq!(p[5], vec![2, 1, 0]);
        let mut q = p.clone();
        q.sort();
        assert_eq!(p, q);
    }

    /// Band A departs at slot 0 and arrives at 1; band B departs at 3 and
    /// arrives at 2.
    fn transverse() -> Vec<(usize, usize)> {
        vec![(0, 1), (3, 2)]
    }

    #[test]
    fn arc_of_two_letters_is_simple_but_closure_is_not() {
        // A then B joins 1 to 3; closing joins 2 to 0, which separates 1 from 3
        let occ = vec![(0, true), (1, true)];
        let open = StrandDiagram::new(
            transverse(),
            occ.clone(),
            vec![Chord { arrival: 0, departure: 1, group: 0 }],
        );
        let closed = StrandDiagram::new(
            transverse(),
            occ,
            vec![
                Chord { arrival: 0, departure: 1, group: 0 },
                Chord { arrival: 1, departure: 0, group: 0 },
            ],
        );
        assert_eq!(open.min_crossings(10).unwrap().0, 0);
        assert_eq!(closed.min_crossings(10).unwrap().0, 1);
    }

    #[test]
    fn doubled_letter_crosses_once() {
        // σσ: two strands in one band; either lane order gives one crossing
        let d = StrandDiagram::new(
            vec![(0, 1)],
            vec![(0, true), (0, true)],
            vec![
                Chord { arrival: 0, departure: 1, group: 0 },
                Chord { arrival: 1, departure: 0, group: 0 },
            ],
        );
        assert_eq!(d.crossings(&vec![0, 1]), 1);
        assert_eq!(d.crossings(&vec![1, 0]), 1);
    }

    #[test]
    fn budget_guard() {
        let occ = vec![(0, true); 12];
        let d = StrandDiagram::new(vec![(0, 1)], occ, Vec::new());
        assert!(matches!(
            d.min_crossings(1_000_000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn figure_example_data() {
        // slots I4 < I3 < I2 < I1 counter-clockwise; A joins I4 to I3, B joins I2 to I1
        let d = StrandDiagram::new(
            vec![(0, 1), (2, 3)],
            vec![(0, true), (1, true), (0, true)],
            vec![
                Chord { arrival: 0, departure: 1, group: 0 },
                Chord { arrival: 1, departure: 2, group: 0 },
            ],
        );
        let lanes = vec![1, 0, 0];
        assert_eq!(d.crossings(&lanes), 0);
        let data = arc_data_with_ordering(&d, &lanes);
        assert_eq!(data.get(1, 4), 1);
        assert_eq!(data.get(4, 1), 1);
        assert_eq!(data.get(2, 3), 1);
        assert_eq!(data.chord_total(), 2);
        assert_eq!((data.t0, data.t1, data.i0, data.i1), (5, 3, 4, 3));
    }

    #[test]
    fn disjoint_family_search() {
        let t = true;
        let f = false;
        let g = vec![
            vec![f, t, t, f],
            vec![t, f, t, f],
            vec![t, t, f, t],
            vec![f, f, t, f],
        ];
        assert_eq!(max_disjoint_subfamily(&g).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn single_letters_are_simple() {
        let s = l_origami_3();
        let set = enumerate_saddle_connections(&s, &Rational::from_integer(2), &SearchOptions::default())
            .unwrap();
        let ctx = CrossingContext::new(&s, &set);
        let table = JunctionTable::new(&s, &set);
        for sc in set.iter() {
            let a = arc_word(&set, &[sc.id]);
            assert!(is_simple_arc(&ctx, &a).unwrap());
            let data = encode_arc_data(&ctx, &a, &[sc.id]).unwrap();
            assert_eq!(data.chord_total(), 0);
            assert_ne!(data.i0, data.i1);
        }
        let words = enumerate_closed_geodesics(&set, &table, &Rational::from_integer(2), &WordOptions::default())
            .unwrap();
        for w in words.iter().filter(|w| w.letters.len() == 1) {
            assert_eq!(self_intersection(&ctx, w).unwrap().total, 0);
        }
        for w in words.iter().filter(|w| w.letters.len() == 2 && w.letters[0] == w.letters[1]) {
            // a doubled simple closed curve crosses itself once
            assert_eq!(self_intersection(&ctx, w).unwrap().total, 1);
        }
    }

    #[test]
    fn unit_edges_do_not_cross_in_the_interior() {
        let s = l_origami_3();
        let set = enumerate_saddle_connections(&s, &Rational::from_integer(1), &SearchOptions::default())
            .unwrap();
        for a in set.iter() {
            for b in set.iter() {
                assert_eq!(connection_crossings(a, b), 0);
            }
        }
    }

    #[test]
    fn diagonal_crosses_the_other_diagonal_of_its_square() {
        // the two diagonals of square 0 cross at its centre
        let s = l_origami_3();
        let set = enumerate_saddle_connections(&s, &Rational::new(3, 2), &SearchOptions::default())
            .unwrap();
        let inside_square_0 = |x: i64, y: i64| {
            set.iter()
                .find(|sc| {
                    sc.holonomy == Vec2::ints(x, y)
                        && sc.pieces.len() == 1
                        && sc.pieces[0].polygon == 0
                })
                .unwrap()
        };
        let d1 = inside_square_0(1, 1);
        let d2 = inside_square_0(-1, 1);
        assert_eq!(connection_crossings(d1, d2), 1);
    }
}
