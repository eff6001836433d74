// Copyright 2026 the flatgeo Authors
// SPDX-License-Identifier: Apache-2.0

//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;

use flatgeo::bounds::{
    arc_verdicts, class_verdicts, count_geodesics, count_table_from_census, fit_exponents,
    measured_constants, table_verdicts, Census, CountOptions, Verdict, ARC_CHORDS,
    ARC_CONNECTIONS, ARC_DATA_INJECTIVE,
};
use flatgeo::crossing::CrossingContext;
use flatgeo::flatsurf::{l_origami_3, regular_octagon};
use flatgeo::geodesy::{enumerate_closed_geodesics, JunctionTable, WordOptions};
use flatgeo::hyperoracle::{compare_classes, hyp_length, HyperbolicModel};
use flatgeo::saddle::{enumerate_saddle_connections, SearchOptions};
use flatgeo::smoothing::smoothing_row;
use flatgeo::{FlatSurface, Rational};

type Outcome = Result<String, String>;

fn grid(v: &[i128]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from_integer(x)).collect()
}

fn verdict_summary(vs: &[&Verdict]) -> Outcome {
    let text: Vec<String> = vs
        .iter()
        .map(|v| format!("{} {}/{}", v.name, v.checked - v.violations, v.checked))
        .collect();
    let bad: Vec<String> = vs
        .iter()
        .filter(|v| !v.passed())
        .map(|v| format!("{} fails, e.g. {}", v.name, v.witnesses.first().cloned().unwrap_or_default()))
        .collect();
    if bad.is_empty() {
        Ok(text.join(", "))
    } else {
        Err(format!("{}; {}", text.join(", "), bad.join("; ")))
    }
}

fn oracle_agreement(s: &FlatSurface, l: i128) -> Result<(usize, usize), String> {
    let lr = Rational::from_integer(l);
    let model = HyperbolicModel::new(s).map_err(|e| e.to_string())?;
    let set = enumerate_saddle_connections(s, &lr, &SearchOptions::default()).map_err(|e| e.to_string())?;
    let table = JunctionTable::new(s, &set);
    let words = enumerate_closed_geodesics(&set, &table, &lr, &WordOptions::default())
        .map_err(|e| e.to_string())?;
    let ctx = CrossingContext::new(s, &set);
    let report = compare_classes(&model, &ctx, &words).map_err(|e| e.to_string())?;
    let agree = report.rows.iter().filter(|r| r.agree()).count();
    Ok((agree, report.rows.len()))
}

fn criterion_1() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (s, l) in [(l_origami_3(), 3), (regular_octagon(), 2)] {
        let (agree, n) = oracle_agreement(&s, l)?;
        ok &= agree == n && n > 0;
        parts.push(format!("{} L={l}: {agree}/{n} classes agree", s.name()));
    }
    let msg = parts.join(", ");
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_2() -> Outcome {
    let s = l_origami_3();
    let ls = grid(&[1, 2, 3]);
    let census = Census::new(&s, &Rational::from_integer(3), &CountOptions::default()).map_err(|e| e.to_string())?;
    let constants = measured_constants(&s, &ls, &SearchOptions::default()).map_err(|e| e.to_string())?;
    let vs = arc_verdicts(&census, &constants, &ls).map_err(|e| e.to_string())?;
    let picked: Vec<&Verdict> = [ARC_CONNECTIONS, ARC_DATA_INJECTIVE, ARC_CHORDS]
        .iter()
        .map(|n| vs.iter().find(|v| v.name == *n).unwrap())
        .collect();
    verdict_summary(&picked)
}

fn criterion_3() -> Outcome {
    // the f_i family needs m ≥ 4 pieces, which first occurs at L = 6
    let s = l_origami_3();
    let ls = grid(&[1, 2, 3, 4, 5, 6]);
    let opts = CountOptions {
        skip_arcs: true,
        ..Default::default()
    };
    let census = Census::new(&s, &Rational::from_integer(6), &opts).map_err(|e| e.to_string())?;
    let constants = measured_constants(&s, &ls, &opts.search).map_err(|e| e.to_string())?;
    let (vs, off, all) = class_verdicts(&census, &constants, &ls).map_err(|e| e.to_string())?;
    let refs: Vec<&Verdict> = vs.iter().collect();
    verdict_summary(&refs).map(|m| format!("{m}; worst f-pair ratio {all} (off-diagonal {off})"))
}

fn criterion_4() -> Outcome {
    let s = l_origami_3();
    let ls = grid(&[1, 2, 3, 4]);
    let ks = [Some(1), Some(2), Some(4), Some(8), None];
    let table = count_geodesics(&s, &ls, &ks, &CountOptions::default()).map_err(|e| e.to_string())?;
    let vs = table_verdicts(&table);
    let refs: Vec<&Verdict> = vs.iter().collect();
    verdict_summary(&refs).map(|m| format!("{m}; c0 = {:.4e}", table.constants.c0))
}

fn criterion_5() -> Outcome {
    let s = l_origami_3();
    let l = Rational::from_integer(4);
    let model = HyperbolicModel::new(&s).map_err(|e| e.to_string())?;
    let set = enumerate_saddle_connections(&s, &l, &SearchOptions::default()).map_err(|e| e.to_string())?;
    let table = JunctionTable::new(&s, &set);
    let words = enumerate_closed_geodesics(&set, &table, &l, &WordOptions::default()).map_err(|e| e.to_string())?;
    let ratios: Vec<(f64, f64)> = words
        .iter()
        .map(|w| {
            let flat = w.length.to_f64();
            let hyp = hyp_length(&model, &s, &set, &w.letters)?;
            let doubled: Vec<usize> = w.letters.iter().chain(&w.letters).copied().collect();
            let hyp2 = hyp_length(&model, &s, &set, &doubled)?;
            Ok((hyp / flat, hyp2 / (2.0 * flat)))
        })
        .collect::<flatgeo::Result<_>>()
        .map_err(|e| e.to_string())?;
    let max = ratios.iter().map(|r| r.0).fold(f64::NEG_INFINITY, f64::max);
    let min = ratios.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let lambda = max.max(1.0 / min).ceil();
    let sandwich = ratios.iter().all(|r| r.0 >= 1.0 / lambda && r.0 <= lambda);
    let worst_square = ratios.iter().map(|r| (r.0 - r.1).abs()).fold(0.0, f64::max);
    let msg = format!(
        "{} classes, ratio in [{min:.4}, {max:.4}], lambda = {lambda}, worst |ratio(g^2) - ratio(g)| = {worst_square:.2e}",
        words.len()
    );
    if sandwich && worst_square <= 1e-6 && !words.is_empty() {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_6() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for t in [0.1, 0.05, 0.01] {
        let r = smoothing_row(6.0 * PI, t, 3000).map_err(|e| e.to_string())?;
        let convex = r.worst_concavity <= 0.0;
        let curved = r.max_curvature <= -t * t / 2.0;
        let boundary = r.boundary_error <= 1e-10;
        let cone = (r.cone_angle - 2.0 * PI).abs() <= 0.01 * 2.0 * PI;
        let area = r.area < 6.0 * PI * t;
        ok &= convex && curved && boundary && cone && area;
        parts.push(format!(
            "t={t}: max K {:.3e} (limit {:.3e}), area {:.4e} < {:.4e}, cone {:.6}, boundary {:.1e}, convex {convex}",
            r.max_curvature,
            -t * t / 2.0,
            r.area,
            6.0 * PI * t,
            r.cone_angle,
            r.boundary_error
        ));
    }
    let msg = parts.join("; ");
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_7() -> Outcome {
    let mut runs = 0;
    for s in [l_origami_3(), regular_octagon()] {
        let mut baseline: Option<String> = None;
        let ls = grid(&[1, 2, 3]);
        let ks = [Some(0), Some(1), Some(2), None];
        for workers in [1, 2, 4] {
            for reversed in [false, true] {
                let opts = if reversed {
                    CountOptions::default().reversed()
                } else {
                    CountOptions::default()
                };
                let csv = rayon::ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .build()
                    .map_err(|e| e.to_string())?
                    .install(|| count_geodesics(&s, &ls, &ks, &opts))
                    .map_err(|e| e.to_string())?
                    .to_csv();
                runs += 1;
                match &baseline {
                    None => baseline = Some(csv),
                    Some(b) if *b != csv => {
                        return Err(format!(
                            "{}: table differs with {workers} workers, reversed = {reversed}",
                            s.name()
                        ))
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(format!("{runs} runs over 2 surfaces, 1/2/4 workers, both orders: identical tables"))
}

fn criterion_8() -> Outcome {
    let s = l_origami_3();
    let census = Census::new(&s, &Rational::from_integer(4), &CountOptions::default()).map_err(|e| e.to_string())?;
    let mut deltas = Vec::new();
    for g in [vec![2, 3], vec![2, 3, 4]] {
        let ls = grid(&g);
        let constants = measured_constants(&s, &ls, &SearchOptions::default()).map_err(|e| e.to_string())?;
        let table = count_table_from_census(&census, &constants, &ls, &[None]).map_err(|e| e.to_string())?;
        let fits = fit_exponents(&table).map_err(|e| e.to_string())?;
        deltas.push(fits.delta_hat);
    }
    let monotone = deltas[1] >= deltas[0];
    let msg = format!(
        "delta_hat {{2,3}} = {:.4}, {{2,3,4}} = {:.4}, non-decreasing: {monotone} (reported only)",
        deltas[0], deltas[1]
    );
    if deltas.iter().all(|&d| d > 0.0) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("oracle equivalence", criterion_1),
        ("simple arc data", criterion_2),
        ("decomposition inequalities", criterion_3),
        ("counting bounds", criterion_4),
        ("length comparison", criterion_5),
        ("smoothing", criterion_6),
        ("determinism", criterion_7),
        ("growth rate", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(m) => println!("PASS criterion {} ({name}): {m}", i + 1),
            Err(m) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {m}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
