// Copyright 2026 the flatgeo Authors
// SPDX-License-Identifier: Apache-2.0

//! Closed geodesics and geodesic arcs through the cone point as words in
//! directed saddle connections.
//!
//! A concatenation `σ τ` is locally geodesic at the cone point when both
//! angles between the incoming back-direction of `σ` and the outgoing
//! direction of `τ` are at least π.

use std::f64::consts::PI;
use std::fmt::Write;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{Rational, Vec2};
use crate::flatsurf::{ConeAngle, FlatSurface};
use crate::length::FlatLength;
use crate::saddle::{SaddleConnection, SaddleSet};

pub const DEFAULT_WORD_BUDGET: u64 = 50_000_000;

/// The angle `2π·turns + (ccw angle from `from` to `to`)`, the latter in
/// `[0, 2π)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AngleGap {
    pub turns: u32,
    pub from: Vec2,
    pub to: Vec2,
}

impl AngleGap {
    fn residual_is_zero(&self) -> bool {
        self.from.same_direction(&self.to)
    }

    /// Residual angle is at least π.
    fn residual_at_least_pi(&self) -> bool {
        let c = self.from.cross(&self.to).signum();
        c < 0 || (c == 0 && self.from.dot(&self.to).signum() < 0)
    }

    pub fn at_least_pi(&self) -> bool {
        self.turns >= 1 || self.residual_at_least_pi()
    }

    pub fn is_zero(&self) -> bool {
        self.turns == 0 && self.residual_is_zero()
    }

    pub fn radians(&self) -> f64 {
        let (ax, ay) = self.from.to_f64();
        let (bx, by) = self.to.to_f64();
        let mut r = (ax * by - ay * bx).atan2(ax * bx + ay * by);
        if r < 0.0 {
            r += 2.0 * PI;
        }
        if self.residual_is_zero() {
            r = 0.0;
        }
        2.0 * PI * self.turns as f64 + r
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JunctionGeometry {
    pub gap_ccw: AngleGap,
    pub gap_cw: AngleGap,
}

/// Counter-clockwise gap from `a` to `d` around a cone of `sheets` turns.
pub fn ccw_gap(a: &ConeAngle, d: &ConeAngle, sheets: u32) -> AngleGap {
    let wrapped = (d.dir.cmp_arg(&a.dir) == std::cmp::Ordering::Less) as u32;
    let k = (d.sheet + 2 * sheets - a.sheet - wrapped) % sheets;
    AngleGap {
        turns: k,
        from: a.dir.clone(),
        to: d.dir.clone(),
    }
}

pub fn junction_geometry(
    surface: &FlatSurface,
    incoming: &SaddleConnection,
    outgoing: &SaddleConnection,
) -> JunctionGeometry {
    let w = surface.sheets();
    let a = &incoming.arrival;
    let d = &outgoing.departure;
    let ccw = ccw_gap(a, d, w);
    let cw_turns = if ccw.residual_is_zero() {
        w - ccw.turns
    } else {
        w - ccw.turns - 1
    };
    JunctionGeometry {
        gap_cw: AngleGap {
            turns: cw_turns,
            from: d.dir.clone(),
            to: a.dir.clone(),
        },
        gap_ccw: ccw,
    }
}

/// True iff both gaps at the junction are at least π.
pub fn is_geodesic_junction(
    surface: &FlatSurface,
    incoming: &SaddleConnection,
    outgoing: &SaddleConnection,
) -> (bool, JunctionGeometry) {
    let g = junction_geometry(surface, incoming, outgoing);
    (g.gap_ccw.at_least_pi() && g.gap_cw.at_least_pi(), g)
}

/// Dense junction table over a saddle-connection set.
#[derive(Clone, Debug)]
pub struct JunctionTable {
    n: usize,
    ok: Vec<bool>,
}

impl JunctionTable {
    pub fn new(surface: &FlatSurface, set: &SaddleSet) -> Self {
        let n = set.len();
        let ok: Vec<bool> = (0..n * n)
            .into_par_iter()
            .map(|k| is_geodesic_junction(surface, set.get(k / n), set.get(k % n)).0)
            .collect();
        JunctionTable { n, ok }
    }

    pub fn allows(&self, incoming: usize, outgoing: usize) -> bool {
        self.ok[incoming * self.n + outgoing]
    }

    pub fn successors(&self, incoming: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.allows(incoming, j))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ArcWord {
    pub letters: Vec<usize>,
    pub length: FlatLength,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicWord {
    pub letters: Vec<usize>,
    pub canonical_key: String,
    pub length: FlatLength,
    /// Every letter points the same way, so the curve bounds a cylinder.
    pub cylinder_boundary: bool,
}

impl GeodesicWord {
    pub fn power(&self) -> usize {
        let n = self.letters.len();
        n / primitive_period(&self.letters)
    }

    pub fn is_primitive(&self) -> bool {
        self.power() == 1
    }
}

pub fn word_length(set: &SaddleSet, letters: &[usize]) -> FlatLength {
    letters
        .iter()
        .fold(FlatLength::zero(), |acc, &l| acc.add(&set.get(l).length()))
}

pub fn arc_word(set: &SaddleSet, letters: &[usize]) -> ArcWord {
    ArcWord {
        letters: letters.to_vec(),
        length: word_length(set, letters),
    }
}

pub fn geodesic_word(set: &SaddleSet, letters: &[usize], oriented: bool) -> GeodesicWord {
    let first = &set.get(letters[0]).holonomy;
    GeodesicWord {
        letters: letters.to_vec(),
        canonical_key: key_string(&canonical_letters(set, letters, oriented)),
        length: word_length(set, letters),
        cylinder_boundary: letters
            .iter()
            .all(|&l| set.get(l).holonomy.same_direction(first)),
    }
}

/// Checks every junction of a linear word.
pub fn is_geodesic_arc(table: &JunctionTable, letters: &[usize]) -> bool {
    !letters.is_empty() && letters.windows(2).all(|w| table.allows(w[0], w[1]))
}

/// Checks every junction of a cyclic word, including the wrap-around.
pub fn is_geodesic_cycle(table: &JunctionTable, letters: &[usize]) -> bool {
    is_geodesic_arc(table, letters) && table.allows(*letters.last().unwrap(), letters[0])
}

/// Smallest `p` such that the cyclic word is invariant under rotation by `p`.
pub fn primitive_period(letters: &[usize]) -> usize {
    let n = letters.len();
    (1..=n)
        .find(|&p| n % p == 0 && (0..n).all(|i| letters[i] == letters[(i + p) % n]))
        .unwrap_or(n)
}

fn min_rotation(w: &[usize]) -> Vec<usize> {
    let n = w.len();
    (0..n)
        .map(|r| w[r..].iter().chain(&w[..r]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

pub fn reversed(set: &SaddleSet, letters: &[usize]) -> Vec<usize> {
    letters.iter().rev().map(|&l| set.reverse(l)).collect()
}

/// Lexicographic minimum over rotations of the word and (unless `oriented`)
/// of its reversal.
pub fn canonical_letters(set: &SaddleSet, letters: &[usize], oriented: bool) -> Vec<usize> {
    let a = min_rotation(letters);
    if oriented {
        return a;
    }
    let b = min_rotation(&reversed(set, letters));
    a.min(b)
}

pub fn key_string(letters: &[usize]) -> String {
    letters
        .iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(".")
}

/// Columns: `canonical_key,n_letters,length,letters`, letters space-separated.
pub fn words_csv(words: &[GeodesicWord]) -> String {
    let mut out = String::from("canonical_key,n_letters,length,letters\n");
    for w in words {
        let letters: Vec<String> = w.letters.iter().map(|l| l.to_string()).collect();
        writeln!(
            out,
            "{},{},{},{}",
            w.canonical_key,
            w.letters.len(),
            w.length,
            letters.join(" ")
        )
        .unwrap();
    }
    out
}

/// Canonical key of an unoriented cyclic word.
pub fn canonicalize(set: &SaddleSet, letters: &[usize]) -> String {
    key_string(&canonical_letters(set, letters, false))
}

#[derive(Clone, Debug)]
pub struct WordOptions {
    pub word_budget: u64,
    pub oriented: bool,
    pub primitive_only: bool,
    /// Process first letters last-to-first; results are identical.
    pub reverse_order: bool,
}

impl Default for WordOptions {
    fn default() -> Self {
        WordOptions {
            word_budget: DEFAULT_WORD_BUDGET,
            oriented: false,
            primitive_only: false,
            reverse_order: false,
        }
    }
}

const SLACK: f64 = 1e-9;

/// Exact-when-needed test `Σ lengths ≤ L` given the floating-point sum.
fn within(set: &SaddleSet, letters: &[usize], approx: f64, l: &Rational, lf: f64) -> bool {
    if approx < lf - SLACK {
        true
    } else if approx > lf + SLACK {
        false
    } else {
        word_length(set, letters).le(l)
    }
}

struct Dfs<'a> {
    set: &'a SaddleSet,
    table: &'a JunctionTable,
    lens: Vec<f64>,
    l: Rational,
    lf: f64,
    nodes: &'a AtomicU64,
    budget: u64,
}

impl<'a> Dfs<'a> {
    fn tick(&self) -> Result<()> {
        let n = self.nodes.fetch_add(1, AtomicOrdering::Relaxed) + 1;
        if n > self.budget {
            return Err(Error::LimitExceeded { limit: self.budget });
        }
        Ok(())
    }

    fn closed(
        &self,
        word: &mut Vec<usize>,
        sum: f64,
        opts: &WordOptions,
        out: &mut Vec<GeodesicWord>,
    ) -> Result<()> {
        self.tick()?;
        let first = word[0];
        let last = *word.last().unwrap();
        if self.table.allows(last, first) {
            let canon = canonical_letters(self.set, word, opts.oriented);
            if canon == *word && (!opts.primitive_only || primitive_period(word) == word.len()) {
                out.push(geodesic_word(self.set, word, opts.oriented));
            }
        }
        for next in self.table.successors(last) {
            if next < first || (!opts.oriented && self.set.reverse(next) < first) {
                continue;
            }
            let s = sum + self.lens[next];
            word.push(next);
            let keep = within(self.set, word, s, &self.l, self.lf);
            let r = if keep { self.closed(word, s, opts, out) } else { Ok(()) };
            word.pop();
            r?;
        }
        Ok(())
    }

    fn arcs(&self, word: &mut Vec<usize>, sum: f64, out: &mut Vec<ArcWord>) -> Result<()> {
        self.tick()?;
        out.push(arc_word(self.set, word));
        let last = *word.last().unwrap();
        for next in self.table.successors(last) {
            let s = sum + self.lens[next];
            word.push(next);
            let keep = within(self.set, word, s, &self.l, self.lf);
            let r = if keep { self.arcs(word, s, out) } else { Ok(()) };
            word.pop();
            r?;
        }
        Ok(())
    }
}

fn check_bound(set: &SaddleSet, l: &Rational) -> Result<()> {
    if *l <= Rational::from_integer(0) {
        return Err(Error::InvalidInput("L must be positive".into()));
    }
    if *l > set.bound {
        return Err(Error::InvalidInput(format!(
            "word length bound {l} exceeds the saddle-connection bound {}",
            set.bound
        )));
    }
    Ok(())
}

fn first_letters(set: &SaddleSet, reverse: bool) -> Vec<usize> {
    let mut v: Vec<usize> = (0..set.len()).collect();
    if reverse {
        v.reverse();
    }
    v
}

/// Closed geodesic words of length at most `l`, one per canonical key,
/// sorted by canonical letters.
pub fn enumerate_closed_geodesics(
    set: &SaddleSet,
    table: &JunctionTable,
    l: &Rational,
    opts: &WordOptions,
) -> Result<Vec<GeodesicWord>> {
    check_bound(set, l)?;
    let nodes = AtomicU64::new(0);
    let dfs = Dfs {
        set,
        table,
        lens: set.iter().map(|sc| sc.length_f64()).collect(),
        l: *l,
        lf: crate::exact::ExactCoord::rational(*l).to_f64(),
        nodes: &nodes,
        budget: opts.word_budget,
    };
    let parts: Vec<Result<Vec<GeodesicWord>>> = first_letters(set, opts.reverse_order)
        .par_iter()
        .map(|&s0| {
            let mut out = Vec::new();
            if !opts.oriented && set.reverse(s0) < s0 {
                return Ok(out);
            }
            let mut word = vec![s0];
            if within(set, &word, dfs.lens[s0], l, dfs.lf) {
                dfs.closed(&mut word, dfs.lens[s0], opts, &mut out)?;
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for p in parts {
        all.extend(p?);
    }
    all.sort_by(|a, b| a.letters.cmp(&b.letters));
    Ok(all)
}

/// Linear geodesic words of length at most `l` (oriented), sorted.
pub fn enumerate_arcs(
    set: &SaddleSet,
    table: &JunctionTable,
    l: &Rational,
    opts: &WordOptions,
) -> Result<Vec<ArcWord>> {
    check_bound(set, l)?;
    let nodes = AtomicU64::new(0);
    let dfs = Dfs {
        set,
        table,
        lens: set.iter().map(|sc| sc.length_f64()).collect(),
        l: *l,
        lf: crate::exact::ExactCoord::rational(*l).to_f64(),
        nodes: &nodes,
        budget: opts.word_budget,
    };
    let parts: Vec<Result<Vec<ArcWord>>> = first_letters(set, opts.reverse_order)
        .par_iter()
        .map(|&s0| {
            let mut out = Vec::new();
            let mut word = vec![s0];
            if within(set, &word, dfs.lens[s0], l, dfs.lf) {
                dfs.arcs(&mut word, dfs.lens[s0], &mut out)?;
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for p in parts {
        all.extend(p?);
    }
    all.sort_by(|a, b| {
        a.letters
            .len()
            .cmp(&b.letters.len())
            .then_with(|| a.letters.cmp(&b.letters))
    });
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flatsurf::{l_origami_3, regular_octagon};
    use crate::saddle::{enumerate_saddle_connections, SearchOptions};

    fn setup(l: i128) -> (FlatSurface, SaddleSet, JunctionTable) {
        let s = l_origami_3();
        let set = enumerate_saddle_connections(&s, &Rational::from_integer(l), &SearchOptions::default())
            .unwrap();
        let t = JunctionTable::new(&s, &set);
        (s, set, t)
    }

    #[test]
    fn backtracking_is_not_geodesic() {
        let (s, set, _) = setup(2);
        for sc in set.iter() {
            let (ok, g) = is_geodesic_junction(&s, sc, set.get(sc.reverse_id));
            assert!(!ok);
            assert!(g.gap_ccw.is_zero());
        }
    }

    #[test]
    fn gaps_add_up_to_cone_angle() {
        let (s, set, _) = setup(2);
        for a in set.iter() {
            for b in set.iter() {
                let g = junction_geometry(&s, a, b);
                let total = g.gap_ccw.radians() + g.gap_cw.radians();
                assert!((total - s.cone_angle()).abs() < 1e-9, "{total}");
            }
        }
    }

    #[test]
    fn repeating_a_letter_is_geodesic() {
        // a lone saddle connection closes up with odd multiples of π on both sides
        for s in [l_origami_3(), regular_octagon()] {
            let set = enumerate_saddle_connections(&s, &Rational::from_integer(2), &SearchOptions::default())
                .unwrap();
            for sc in set.iter() {
                let (ok, g) = is_geodesic_junction(&s, sc, sc);
                assert!(ok);
                let a = g.gap_ccw.radians() / PI;
                assert!((a - a.round()).abs() < 1e-9 && a.round() as i64 % 2 == 1);
            }
        }
    }

    #[test]
    fn horizontal_then_vertical_at_a_corner() {
        // Leaving square 0 rightwards along its bottom edge arrives at the
        // bottom-right corner of square 0 looking left (back-direction π).
        // Continuing up the right edge of square 0 leaves an angle of π/2
        // inside the square: not geodesic.
        let (s, set, _) = setup(1);
        let find = |x: i64, y: i64, corner: usize| {
            set.iter()
                .find(|sc| sc.holonomy == Vec2::ints(x, y) && sc.departure_corner == corner)
                .unwrap()
        };
        let c00 = s.corner_index(0, 0);
        let c01 = s.corner_index(0, 1);
        let right = find(1, 0, c00);
        let up = find(0, 1, c01);
        assert_eq!(right.arrival_corner, c01);
        let (ok, g) = is_geodesic_junction(&s, right, up);
        assert!(!ok);
        assert!((g.gap_cw.radians() - PI / 2.0).abs() < 1e-12);
        assert!((g.gap_ccw.radians() - 5.5 * PI).abs() < 1e-12);
    }

    #[test]
    fn canonical_key_examples() {
        let (_, set, _) = setup(1);
        let a = 0;
        let b = 2;
        assert_eq!(canonicalize(&set, &[a, b]), canonicalize(&set, &[b, a]));
        assert_eq!(
            canonicalize(&set, &[a, b]),
            canonicalize(&set, &[set.reverse(b), set.reverse(a)])
        );
        // three letters: the six candidates by hand
        let w = [4, 1, 7];
        let r = reversed(&set, &w);
        let mut cands = vec![
            vec![w[0], w[1], w[2]],
            vec![w[1], w[2], w[0]],
            vec![w[2], w[0], w[1]],
            vec![r[0], r[1], r[2]],
            vec![r[1], r[2], r[0]],
            vec![r[2], r[0], r[1]],
        ];
        cands.sort();
        assert_eq!(canonicalize(&set, &w), key_string(&cands[0]));
    }

    #[test]
    fn nothing_below_shortest_connection() {
        let (_, set, t) = setup(1);
        let words =
            enumerate_closed_geodesics(&set, &t, &Rational::new(1, 2), &WordOptions::default()).unwrap();
        assert!(words.is_empty());
        let arcs = enumerate_arcs(&set, &t, &Rational::new(1, 2), &WordOptions::default()).unwrap();
        assert!(arcs.is_empty());
    }

    #[test]
    fn single_letters_are_closed_geodesics() {
        let (_, set, t) = setup(2);
        let words =
            enumerate_closed_geodesics(&set, &t, &Rational::from_integer(2), &WordOptions::default()).unwrap();
        for sc in set.iter() {
            let key = canonicalize(&set, &[sc.id]);
            assert!(words.iter().any(|w| w.canonical_key == key));
        }
    }

    #[test]
    fn oriented_count_doubles_non_palindromes() {
        let (_, set, t) = setup(2);
        let l = Rational::from_integer(2);
        let un = enumerate_closed_geodesics(&set, &t, &l, &WordOptions::default()).unwrap();
        let or = enumerate_closed_geodesics(
            &set,
            &t,
            &l,
            &WordOptions {
                oriented: true,
                ..Default::default()
            },
        )
        .unwrap();
        let self_reverse = un
            .iter()
            .filter(|w| {
                canonical_letters(&set, &w.letters, true)
                    == canonical_letters(&set, &reversed(&set, &w.letters), true)
            })
            .count();
        assert_eq!(or.len(), 2 * un.len() - self_reverse);
    }

    #[test]
    fn budget_limits_words() {
        let (_, set, t) = setup(2);
        let opts = WordOptions {
            word_budget: 3,
            ..Default::default()
        };
        assert!(matches!(
            enumerate_closed_geodesics(&set, &t, &Rational::from_integer(2), &opts),
            Err(Error::LimitExceeded { .. })
        ));
    }
}
