// Copyright 2026 the flatgeo Authors
// SPDX-License-Identifier: Apache-2.0

//! Count tables for closed geodesics and simple arcs, the constants of the
//! counting bounds, inequality checks and growth fits.
//!
//! Everything is computed from one census at the largest length of the
//! grid; smaller lengths are read off by filtering. Per-class work runs on
//! the ambient rayon pool and is collected in enumeration order, so output
//! does not depend on the number of workers.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::crossing::{
    arc_pair_intersection, arc_self_intersection, build_c1, build_c2, decompose_into_simple_arcs,
    distinct_connections, encode_arc_data, max_disjoint_subfamily, self_intersection, ArcData,
    CrossingContext, CrossingReport, DEFAULT_ORDERING_BUDGET,
};
use crate::error::{Error, Result};
use crate::exact::{ExactCoord, Rational};
use crate::flatsurf::FlatSurface;
use crate::geodesy::{enumerate_arcs, enumerate_closed_geodesics, JunctionTable, WordOptions};
use crate::length::FlatLength;
use crate::saddle::{enumerate_saddle_connections, saddle_growth, SaddleSet, SearchOptions};

#[derive(Clone, Debug, Default)]
pub struct CountOptions {
    pub search: SearchOptions,
    pub words: WordOptions,
    pub ordering_budget: Option<u128>,
    /// Leave the arc list empty.
    pub skip_arcs: bool,
}

impl CountOptions {
    pub fn reversed(mut self) -> Self {
        self.search.reverse_order = !self.search.reverse_order;
        self.words.reverse_order = !self.words.reverse_order;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundConstants {
    pub g: u32,
    pub b_g: u32,
    pub d_g: u32,
    pub c_g: u32,
    pub c_prime: u32,
    pub c: u32,
    pub l0: f64,
    pub b0: f64,
    pub c0: f64,
    pub ln_c0: f64,
}

impl BoundConstants {
    pub fn new(g: u32, l0: f64, b0: f64) -> Result<Self> {
        if g < 2 || !(l0 > 0.0) || !(b0 > 0.0) {
            return Err(Error::InvalidInput(format!(
                "constants need g ≥ 2, l₀ > 0, b₀ > 0 (g = {g}, l₀ = {l0}, b₀ = {b0})"
            )));
        }
        let b_g = 2 * g - 1;
        let d_g = b_g * b_g + 4;
        let c_g = b_g * b_g + 2 * b_g + 4;
        let c_prime = 15;
        let ln_c0 = 16f64.ln() + 2.0 * b_g as f64 * b0.ln() - d_g as f64 * l0.ln();
        Ok(BoundConstants {
            g,
            b_g,
            d_g,
            c_g,
            c_prime,
            c: (2 * g - 2) * c_prime,
            l0,
            b0,
            c0: ln_c0.exp(),
            ln_c0,
        })
    }

    /// `ln (c₀ L)^{c_g}`.
    pub fn ln_simple_arc_bound(&self, l: f64) -> f64 {
        self.c_g as f64 * (self.ln_c0 + l.ln())
    }

    /// `ln (c₀ L^{c_g})^{c √K}`.
    pub fn ln_geodesic_bound(&self, l: f64, k: u64) -> f64 {
        self.c as f64 * (k as f64).sqrt() * (self.ln_c0 + self.c_g as f64 * l.ln())
    }
}

/// A closed geodesic class and its intersection data.
#[derive(Clone, Debug)]
pub struct ClassRecord {
    pub key: String,
    pub letters: Vec<usize>,
    pub length: FlatLength,
    pub crossings: CrossingReport,
    pub pieces: usize,
    pub power: usize,
    pub cylinder_boundary: bool,
}

#[derive(Clone, Debug)]
pub struct ArcRecord {
    pub letters: Vec<usize>,
    pub length: FlatLength,
    pub simple: bool,
}

/// Every class and arc up to one length.
pub struct Census {
    pub surface: FlatSurface,
    pub l_max: Rational,
    pub set: SaddleSet,
    pub table: JunctionTable,
    pub classes: Vec<ClassRecord>,
    pub arcs: Vec<ArcRecord>,
    pub options: CountOptions,
}

impl Census {
    pub fn new(surface: &FlatSurface, l_max: &Rational, options: &CountOptions) -> Result<Self> {
        let set = enumerate_saddle_connections(surface, l_max, &options.search)?;
        let table = JunctionTable::new(surface, &set);
        let words = enumerate_closed_geodesics(&set, &table, l_max, &options.words)?;
        let arc_words = if options.skip_arcs {
            Vec::new()
        } else {
            enumerate_arcs(&set, &table, l_max, &options.words)?
        };
        let mut ctx = CrossingContext::new(surface, &set);
        if let Some(b) = options.ordering_budget {
            ctx.ordering_budget = b;
        }
        let classes = words
            .par_iter()
            .map(|w| {
                let crossings = self_intersection(&ctx, w)?;
                let pieces = decompose_into_simple_arcs(&ctx, w)?.m;
                Ok(ClassRecord {
                    key: w.canonical_key.clone(),
                    letters: w.letters.clone(),
                    length: w.length.clone(),
                    crossings,
                    pieces,
                    power: w.power(),
                    cylinder_boundary: w.cylinder_boundary,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let arcs = arc_words
            .par_iter()
            .map(|a| {
                Ok(ArcRecord {
                    letters: a.letters.clone(),
                    length: a.length.clone(),
                    simple: arc_self_intersection(&ctx, a)?.total == 0,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        drop(ctx);
        Ok(Census {
            surface: surface.clone(),
            l_max: *l_max,
            set,
            table,
            classes,
            arcs,
            options: options.clone(),
        })
    }

    pub fn context(&self) -> CrossingContext<'_> {
        let mut ctx = CrossingContext::new(&self.surface, &self.set);
        ctx.ordering_budget = self.options.ordering_budget.unwrap_or(DEFAULT_ORDERING_BUDGET);
        ctx
    }

    pub fn simple_arc_count(&self, l: &Rational) -> usize {
        self.arcs.iter().filter(|a| a.simple && a.length.le(l)).count()
    }

    pub fn class_count(&self, l: &Rational, k: Option<u64>) -> usize {
        self.classes
            .iter()
            .filter(|c| c.length.le(l) && k.map_or(true, |k| c.crossings.total <= k))
            .count()
    }

    /// Per-class CSV: `canonical_key,length,K_total,K_interior,K_disc,m`.
    pub fn classes_csv(&self) -> String {
        let mut out = String::from("canonical_key,length,K_total,K_interior,K_disc,m\n");
        for c in &self.classes {
            writeln!(
                out,
                "{},{:.12},{},{},{},{}",
                c.key,
                c.length.to_f64(),
                c.crossings.total,
                c.crossings.interior,
                c.crossings.disc,
                c.pieces
            )
            .unwrap();
        }
        out
    }
}

fn check_grid(name: &str, values: &[Rational]) -> Result<()> {
    if values.is_empty() || values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(format!(
            "{name} must be nonempty and strictly increasing"
        )));
    }
    if values[0] <= Rational::from_integer(0) {
        return Err(Error::InvalidInput(format!("{name} must be positive")));
    }
    Ok(())
}

fn check_k_grid(values: &[Option<u64>]) -> Result<()> {
    let sorted = values.windows(2).all(|w| match (w[0], w[1]) {
        (Some(a), Some(b)) => a < b,
        (Some(_), None) => true,
        _ => false,
    });
    if values.is_empty() || !sorted {
        return Err(Error::InvalidInput(
            "K grid must be nonempty and strictly increasing (∞ last)".into(),
        ));
    }
    Ok(())
}

fn ratio_f64(r: &Rational) -> f64 {
    ExactCoord::rational(*r).to_f64()
}

/// Systole and measured quadratic saddle-connection constant.
pub fn measured_constants(
    surface: &FlatSurface,
    l_grid: &[Rational],
    opts: &SearchOptions,
) -> Result<BoundConstants> {
    let growth = saddle_growth(surface, l_grid, opts)?;
    BoundConstants::new(surface.genus(), surface.systole().to_f64(), growth.b0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountRow {
    #[serde(serialize_with = "ser_rational")]
    pub l: Rational,
    /// `None` means no bound on self-intersection.
    pub k: Option<u64>,
    pub count_g_star: usize,
    pub count_c0: usize,
    pub max_m_observed: usize,
    pub c0_bound_ok: bool,
    /// Not applicable for `K = 0` and unbounded `K`.
    pub g_star_bound_ok: Option<bool>,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountTable {
    pub surface: String,
    pub constants: BoundConstants,
    pub oriented: bool,
    pub primitive_only: bool,
    pub node_budget: u64,
    pub word_budget: u64,
    pub rows: Vec<CountRow>,
}

fn k_label(k: Option<u64>) -> String {
    k.map_or(String::new(), |k| k.to_string())
}

impl CountTable {
    /// Columns: `L,K,count_G_star,count_C0,max_m_observed,c0_bound_ok,g_star_bound_ok`.
    /// An empty `K` means unbounded; an empty last column means not
    /// applicable.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("L,K,count_G_star,count_C0,max_m_observed,c0_bound_ok,g_star_bound_ok\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.l,
                k_label(r.k),
                r.count_g_star,
                r.count_c0,
                r.max_m_observed,
                r.c0_bound_ok,
                r.g_star_bound_ok.map_or(String::new(), |b| b.to_string())
            )
            .unwrap();
        }
        out
    }

    pub fn bounds_hold(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.c0_bound_ok && r.g_star_bound_ok != Some(false))
    }

    /// Counts are nondecreasing in `L` and in `K`.
    pub fn is_monotone(&self) -> bool {
        let mut by_k: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut by_l: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
        for r in &self.rows {
            by_k.entry(k_label(r.k)).or_default().push(r.count_g_star);
            by_l.entry(r.l).or_default().push(r.count_g_star);
        }
        let nondecreasing = |v: &Vec<usize>| v.windows(2).all(|w| w[0] <= w[1]);
        by_k.values().all(nondecreasing) && by_l.values().all(nondecreasing)
    }
}

pub fn count_table_from_census(
    census: &Census,
    constants: &BoundConstants,
    l_grid: &[Rational],
    k_grid: &[Option<u64>],
) -> Result<CountTable> {
    check_grid("L grid", l_grid)?;
    check_k_grid(k_grid)?;
    if *l_grid.last().unwrap() > census.l_max {
        return Err(Error::InvalidInput("L grid exceeds the census length".into()));
    }
    let mut rows = Vec::new();
    for l in l_grid {
        let lf = ratio_f64(l);
        let c0 = census.simple_arc_count(l);
        let c0_ok = c0 == 0 || (c0 as f64).ln() <= constants.ln_simple_arc_bound(lf);
        for &k in k_grid {
            let counted = census
                .classes
                .iter()
                .filter(|c| c.length.le(l) && k.map_or(true, |k| c.crossings.total <= k));
            let (count, max_m) = counted.fold((0, 0), |(n, m), c| (n + 1, m.max(c.pieces)));
            let g_ok = match k {
                Some(k) if k >= 1 => {
                    Some(count == 0 || (count as f64).ln() <= constants.ln_geodesic_bound(lf, k))
                }
                _ => None,
            };
            rows.push(CountRow {
                l: *l,
                k,
                count_g_star: count,
                count_c0: c0,
                max_m_observed: max_m,
                c0_bound_ok: c0_ok,
                g_star_bound_ok: g_ok,
            });
        }
    }
    Ok(CountTable {
        surface: census.surface.name().to_string(),
        constants: constants.clone(),
        oriented: census.options.words.oriented,
        primitive_only: census.options.words.primitive_only,
        node_budget: census.options.search.node_budget,
        word_budget: census.options.words.word_budget,
        rows,
    })
}

/// `#G*(L, K)` and `#C₀(L)` over the grids, with bound verdicts.
pub fn count_geodesics(
    surface: &FlatSurface,
    l_grid: &[Rational],
    k_grid: &[Option<u64>],
    opts: &CountOptions,
) -> Result<CountTable> {
    check_grid("L grid", l_grid)?;
    check_k_grid(k_grid)?;
    let census = Census::new(surface, l_grid.last().unwrap(), opts)?;
    let constants = measured_constants(surface, l_grid, &opts.search)?;
    count_table_from_census(&census, &constants, l_grid, k_grid)
}

/// `#C₀(L)` over the grid.
pub fn count_simple_arcs(
    surface: &FlatSurface,
    l_grid: &[Rational],
    opts: &CountOptions,
) -> Result<Vec<(Rational, usize)>> {
    check_grid("L grid", l_grid)?;
    let census = Census::new(surface, l_grid.last().unwrap(), opts)?;
    Ok(l_grid
        .iter()
        .map(|l| (*l, census.simple_arc_count(l)))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub checked: usize,
    pub violations: usize,
    pub witnesses: Vec<String>,
}

impl Verdict {
    fn new(name: &str) -> Self {
        Verdict {
            name: name.to_string(),
            checked: 0,
            violations: 0,
            witnesses: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.witnesses.len() < 10 {
                self.witnesses.push(witness());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub surface: String,
    pub constants: BoundConstants,
    pub verdicts: Vec<Verdict>,
    /// Largest `Σ_{i≠j} i(f_i, f_j) / K` seen, without the diagonal.
    pub max_f_pair_ratio_off_diagonal: f64,
    /// Largest `Σ_{i,j} i(f_i, f_j) / K` seen, diagonal included.
    pub max_f_pair_ratio: f64,
    pub table: CountTable,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(Verdict::passed)
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }
}

pub const ARC_CONNECTIONS: &str = "simple arc uses at most 2g-1 connections";
pub const ARC_DATA_INJECTIVE: &str = "arc data injective per connection set";
pub const ARC_CHORDS: &str = "arc chord total at most L/l0";
pub const PIECES_LENGTH: &str = "pieces at most L/l0";
pub const PIECES_SQRT_K: &str = "pieces at most c sqrt K";
pub const E_SELF: &str = "e_i self-intersection at least 1";
pub const F_SELF: &str = "f_i self-intersection at least 2";
pub const F_PAIRS: &str = "sum of f_i f_j intersections at most 32K";
pub const F_DISJOINT: &str = "disjoint f subfamilies at most 2g-2";
pub const C0_BOUND: &str = "#C0(L) at most (c0 L)^c_g";
pub const G_STAR_BOUND: &str = "#G*(L,K) at most (c0 L^c_g)^(c sqrt K)";

fn smallest_grid_length<'a>(l_grid: &'a [Rational], len: &FlatLength) -> &'a Rational {
    l_grid.iter().find(|l| len.le(l)).unwrap_or(l_grid.last().unwrap())
}

struct ClassChecks {
    e_self: Vec<(bool, String)>,
    f_self: Vec<(bool, String)>,
    f_pairs: Option<(bool, String, f64, f64)>,
    f_disjoint: Option<(bool, String)>,
}

fn check_class(ctx: &CrossingContext, census: &Census, c: &ClassRecord, g: u32) -> Result<ClassChecks> {
    let word = crate::geodesy::geodesic_word(&census.set, &c.letters, census.options.words.oriented);
    let d = decompose_into_simple_arcs(ctx, &word)?;
    let k = c.crossings.total;
    let mut out = ClassChecks {
        e_self: Vec::new(),
        f_self: Vec::new(),
        f_pairs: None,
        f_disjoint: None,
    };
    for (i, e) in build_c1(&census.set, &d).iter().enumerate() {
        let s = arc_self_intersection(ctx, e)?.total;
        out.e_self.push((s >= 1, format!("{} e_{i}: {s}", c.key)));
    }
    if let Ok(f) = build_c2(&census.set, &d) {
        let m = f.len();
        let mut selfs = Vec::with_capacity(m);
        for (i, fi) in f.iter().enumerate() {
            let s = arc_self_intersection(ctx, fi)?.total;
            selfs.push(s);
            out.f_self.push((s >= 2, format!("{} f_{i}: {s}", c.key)));
        }
        let mut pair = vec![vec![0u64; m]; m];
        for i in 0..m {
            for j in i + 1..m {
                let x = arc_pair_intersection(ctx, &f[i], &f[j])?;
                pair[i][j] = x;
                pair[j][i] = x;
            }
        }
        let off: u64 = pair.iter().flatten().sum();
        let diag: u64 = selfs.iter().sum();
        let total = off + diag;
        out.f_pairs = Some((
            total <= 32 * k,
            format!("{}: Σ = {total} (off-diagonal {off}), K = {k}", c.key),
            off as f64 / k as f64,
            total as f64 / k as f64,
        ));
        let disjoint: Vec<Vec<bool>> = (0..m)
            .map(|i| (0..m).map(|j| i != j && pair[i][j] == 0).collect())
            .collect();
        let best = max_disjoint_subfamily(&disjoint)?;
        out.f_disjoint = Some((
            best.len() as u32 <= 2 * g - 2,
            format!("{}: disjoint f family {best:?}", c.key),
        ));
    }
    Ok(out)
}

/// Checks every inequality of the counting argument on all classes and
/// simple arcs up to the largest grid length.
pub fn verify_inequalities(
    surface: &FlatSurface,
    l_grid: &[Rational],
    k_grid: &[Option<u64>],
    opts: &CountOptions,
) -> Result<VerifyReport> {
    check_grid("L grid", l_grid)?;
    check_k_grid(k_grid)?;
    let census = Census::new(surface, l_grid.last().unwrap(), opts)?;
    let constants = measured_constants(surface, l_grid, &opts.search)?;
    verify_with_census(&census, &constants, l_grid, k_grid)
}

/// Checks on simple arcs: number of distinct connections, injectivity of
/// arc data within each connection set, and the chord count.
pub fn arc_verdicts(census: &Census, constants: &BoundConstants, l_grid: &[Rational]) -> Result<Vec<Verdict>> {
    let ctx = census.context();
    let g = constants.g;
    let l0 = census.surface.systole().clone();
    let mut arc_conn = Verdict::new(ARC_CONNECTIONS);
    let mut arc_inj = Verdict::new(ARC_DATA_INJECTIVE);
    let mut arc_chords = Verdict::new(ARC_CHORDS);
    let simple: Vec<&ArcRecord> = census.arcs.iter().filter(|a| a.simple).collect();
    let data: Vec<(Vec<usize>, ArcData)> = simple
        .par_iter()
        .map(|a| {
            let sigma = distinct_connections(&census.set, &a.letters);
            let arc = crate::geodesy::arc_word(&census.set, &a.letters);
            Ok((sigma.clone(), encode_arc_data(&ctx, &arc, &sigma)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut seen: BTreeMap<(Vec<usize>, ArcData), usize> = BTreeMap::new();
    for (idx, (a, (sigma, d))) in simple.iter().zip(&data).enumerate() {
        arc_conn.record(sigma.len() as u32 <= 2 * g - 1, || {
            format!("{:?} uses {:?}", a.letters, sigma)
        });
        let l = smallest_grid_length(l_grid, &a.length);
        // n − 1 chords, compared with L/l₀ exactly
        let chords = ExactCoord::int(d.chord_total() as i64);
        arc_chords.record(&chords * &l0 <= ExactCoord::rational(*l), || {
            format!("{:?}: {} chords at L = {l}", a.letters, d.chord_total())
        });
        match seen.get(&(sigma.clone(), d.clone())) {
            Some(&other) => arc_inj.record(false, || {
                format!("{:?} and {:?} share data", simple[other].letters, a.letters)
            }),
            None => {
                arc_inj.record(true, String::new);
                seen.insert((sigma.clone(), d.clone()), idx);
            }
        }
    }
    Ok(vec![arc_conn, arc_inj, arc_chords])
}

/// Checks on the simple-arc decompositions of classes with `K ≥ 1`, with
/// the largest `Σ i(f_i, f_j) / K` seen (off-diagonal, then total).
pub fn class_verdicts(
    census: &Census,
    constants: &BoundConstants,
    l_grid: &[Rational],
) -> Result<(Vec<Verdict>, f64, f64)> {
    let ctx = census.context();
    let g = constants.g;
    let l0 = census.surface.systole().clone();
    let mut pieces_len = Verdict::new(PIECES_LENGTH);
    let mut pieces_k = Verdict::new(PIECES_SQRT_K);
    let mut e_self = Verdict::new(E_SELF);
    let mut f_self = Verdict::new(F_SELF);
    let mut f_pairs = Verdict::new(F_PAIRS);
    let mut f_disjoint = Verdict::new(F_DISJOINT);
    let hard: Vec<&ClassRecord> = census.classes.iter().filter(|c| c.crossings.total >= 1).collect();
    let checks = hard
        .par_iter()
        .map(|c| check_class(&ctx, census, c, g))
        .collect::<Result<Vec<_>>>()?;
    let (mut worst_off, mut worst) = (0.0f64, 0.0f64);
    for (c, ch) in hard.iter().zip(checks) {
        let l = smallest_grid_length(l_grid, &c.length);
        let m = ExactCoord::int(c.pieces as i64);
        pieces_len.record(&m * &l0 <= ExactCoord::rational(*l), || {
            format!("{}: m = {} at L = {l}", c.key, c.pieces)
        });
        let k = c.crossings.total;
        // m ≤ c√K  ⟺  m² ≤ c²K
        let cc = constants.c as u64;
        pieces_k.record((c.pieces as u64).pow(2) <= cc * cc * k, || {
            format!("{}: m = {}, K = {k}", c.key, c.pieces)
        });
        for (ok, w) in ch.e_self {
            e_self.record(ok, || w);
        }
        for (ok, w) in ch.f_self {
            f_self.record(ok, || w);
        }
        if let Some((ok, w, off, all)) = ch.f_pairs {
            f_pairs.record(ok, || w);
            worst_off = worst_off.max(off);
            worst = worst.max(all);
        }
        if let Some((ok, w)) = ch.f_disjoint {
            f_disjoint.record(ok, || w);
        }
    }
    Ok((
        vec![pieces_len, pieces_k, e_self, f_self, f_pairs, f_disjoint],
        worst_off,
        worst,
    ))
}

/// Checks of the two counting bounds on every row of a table.
pub fn table_verdicts(table: &CountTable) -> Vec<Verdict> {
    let mut c0 = Verdict::new(C0_BOUND);
    let mut gs = Verdict::new(G_STAR_BOUND);
    let mut last_l = None;
    for r in &table.rows {
        if last_l != Some(r.l) {
            c0.record(r.c0_bound_ok, || format!("L = {}: {}", r.l, r.count_c0));
            last_l = Some(r.l);
        }
        if let Some(ok) = r.g_star_bound_ok {
            gs.record(ok, || {
                format!("L = {}, K = {}: {}", r.l, k_label(r.k), r.count_g_star)
            });
        }
    }
    vec![c0, gs]
}

pub fn verify_with_census(
    census: &Census,
    constants: &BoundConstants,
    l_grid: &[Rational],
    k_grid: &[Option<u64>],
) -> Result<VerifyReport> {
    let mut verdicts = arc_verdicts(census, constants, l_grid)?;
    let (classes, off, all) = class_verdicts(census, constants, l_grid)?;
    verdicts.extend(classes);
    let table = count_table_from_census(census, constants, l_grid, k_grid)?;
    verdicts.extend(table_verdicts(&table));
    Ok(VerifyReport {
        surface: census.surface.name().to_string(),
        constants: constants.clone(),
        verdicts,
        max_f_pair_ratio_off_diagonal: off,
        max_f_pair_ratio: all,
        table,
    })
}

/// Least-squares slope of `y` on `x`.
pub fn least_squares_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "{} points, need at least 2",
            points.len()
        )));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("all grid lengths equal".into()));
    }
    Ok(sxy / sxx)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Fits {
    /// Slope of `ln #G*(L)` against `L`.
    pub delta_hat: f64,
    /// Slope of `ln #G*(L, 0)` against `ln L`, when a `K = 0` column exists.
    pub simple_poly_exponent_hat: Option<f64>,
}

pub fn fit_counts(lengths: &[f64], counts: &[usize]) -> Result<f64> {
    let pts: Vec<(f64, f64)> = lengths
        .iter()
        .zip(counts)
        .filter(|(_, &c)| c > 0)
        .map(|(&l, &c)| (l, (c as f64).ln()))
        .collect();
    least_squares_slope(&pts)
}

pub fn fit_exponents(table: &CountTable) -> Result<Fits> {
    let column = |k: Option<u64>| -> (Vec<f64>, Vec<usize>) {
        table
            .rows
            .iter()
            .filter(|r| r.k == k)
            .map(|r| (ratio_f64(&r.l), r.count_g_star))
            .unzip()
    };
    let (ls, all) = column(None);
    let delta_hat = fit_counts(&ls, &all)?;
    let (ls0, simple) = column(Some(0));
    let simple_poly_exponent_hat = if ls0.is_empty() {
        None
    } else {
        let logs: Vec<f64> = ls0.iter().map(|l| l.ln()).collect();
        fit_counts(&logs, &simple).ok()
    };
    Ok(Fits {
        delta_hat,
        simple_poly_exponent_hat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flatsurf::l_origami_3;

    #[test]
    fn genus_two_constants() {
        let c = BoundConstants::new(2, 1.0, 2.0).unwrap();
        assert_eq!((c.b_g, c.d_g, c.c_g, c.c), (3, 13, 19, 30));
        assert!((c.c0 - 16.0 * 64.0).abs() < 1e-9);
        assert!(BoundConstants::new(2, 0.0, 1.0).is_err());
    }

    #[test]
    fn fits_of_exact_data() {
        assert_eq!(fit_counts(&[1.0, 2.0, 3.0], &[1, 1, 1]).unwrap(), 0.0);
        let d = fit_counts(&[1.0, 2.0, 3.0], &[2, 4, 8]).unwrap();
        assert!((d - 2f64.ln()).abs() < 1e-9);
        assert!(matches!(
            fit_counts(&[1.0], &[3]),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn grids_are_validated() {
        let s = l_origami_3();
        let r = |n| Rational::from_integer(n);
        let e = count_geodesics(&s, &[r(3), r(1)], &[None], &CountOptions::default());
        assert!(matches!(e, Err(Error::InvalidInput(_))));
        let e = count_geodesics(&s, &[r(1)], &[None, Some(1)], &CountOptions::default());
        assert!(matches!(e, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn saturated_and_simple_columns() {
        let s = l_origami_3();
        let r = |n| Rational::from_integer(n);
        let t = count_geodesics(&s, &[r(1), r(2)], &[Some(0), Some(100), None], &CountOptions::default())
            .unwrap();
        assert!(t.is_monotone());
        assert!(t.bounds_hold());
        for pair in t.rows.chunks(3) {
            assert_eq!(pair[1].count_g_star, pair[2].count_g_star);
        }
        // the 12 unit connections are simple one-letter arcs
        assert!(t.rows[0].count_c0 >= 12);
    }
}
