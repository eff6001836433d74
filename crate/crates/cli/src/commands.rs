// Copyright 2026 the flatgeo Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::Path;

use serde::Serialize;

use flatgeo::bounds::{
    fit_exponents, measured_constants, verify_with_census, BoundConstants, Census, CountOptions,
    CountTable, Fits, Verdict,
};
use flatgeo::crossing::CrossingContext;
use flatgeo::geodesy::{enumerate_closed_geodesics, words_csv, JunctionTable, WordOptions};
use flatgeo::hyperoracle::{compare_classes, HyperbolicModel};
use flatgeo::saddle::{enumerate_saddle_connections, SearchOptions};
use flatgeo::smoothing::{smoothing_csv, smoothing_row, SmoothingRow};
use flatgeo::{Error, Rational};

use crate::config::RunConfig;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 1;
pub const EXIT_VERIFY: u8 = 2;

const SMOOTHING_SAMPLES: usize = 3000;

#[derive(Debug, Default, Serialize)]
struct Parameters {
    l: String,
    l_grid: Vec<String>,
    k_grid: Vec<String>,
    t_grid: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    budget_nodes: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    budget_words: Option<u64>,
    primitive_only: bool,
    oriented: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    workers: Option<usize>,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct SurfaceInfo {
    name: String,
    source: String,
    genus: u32,
    cone_angle_over_pi: u32,
    polygons: usize,
    systole: f64,
}

#[derive(Debug, Serialize)]
struct OracleSummary {
    classes: usize,
    agreeing: usize,
    min_ratio: f64,
    max_ratio: f64,
    lambda: f64,
}

#[derive(Debug, Serialize)]
struct SmoothingSummary {
    t: f64,
    t0: f64,
    max_curvature: f64,
    curvature_limit: f64,
    area: f64,
    area_limit: f64,
    cone_angle: f64,
    boundary_error: f64,
    worst_concavity: f64,
    passed: bool,
}

#[derive(Debug, Serialize)]
struct Summary {
    command: String,
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<String>,
    surface: SurfaceInfo,
    parameters: Parameters,
    artifacts: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    saddle_connections: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    classes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    constants: Option<BoundConstants>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fits: Option<Fits>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_f_pair_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_f_pair_ratio_off_diagonal: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    smoothing: Vec<SmoothingSummary>,
}

/// Artifacts of one run, written to the output directory at the end.
struct Run<'a> {
    cfg: &'a RunConfig,
    summary: Summary,
    files: Vec<(String, String)>,
    witnesses: Vec<String>,
}

fn label(k: Option<u64>) -> String {
    k.map_or("inf".to_string(), |k| k.to_string())
}

impl<'a> Run<'a> {
    fn new(cfg: &'a RunConfig) -> Self {
        let s = &cfg.surface;
        Run {
            cfg,
            summary: Summary {
                command: cfg.command.name().to_string(),
                status: "ok".into(),
                message: None,
                surface: SurfaceInfo {
                    name: s.name().to_string(),
                    source: cfg.surface_label.clone(),
                    genus: s.genus(),
                    cone_angle_over_pi: s.cone_angle_over_pi(),
                    polygons: s.polygons().len(),
                    systole: s.systole().to_f64(),
                },
                parameters: Parameters {
                    l: cfg.l.to_string(),
                    l_grid: cfg.l_grid.iter().map(|l| l.to_string()).collect(),
                    k_grid: cfg.k_grid.iter().map(|&k| label(k)).collect(),
                    t_grid: cfg.t_grid.clone(),
                    budget_nodes: cfg.budget_nodes,
                    budget_words: cfg.budget_words,
                    primitive_only: cfg.primitive_only,
                    oriented: cfg.oriented,
                    workers: cfg.workers,
                    seed: cfg.seed,
                },
                artifacts: Vec::new(),
                saddle_connections: None,
                classes: None,
                constants: None,
                fits: None,
                max_f_pair_ratio: None,
                max_f_pair_ratio_off_diagonal: None,
                oracle: None,
                verdicts: Vec::new(),
                smoothing: Vec::new(),
            },
            files: Vec::new(),
            witnesses: Vec::new(),
        }
    }

    fn file(&mut self, name: &str, contents: String) {
        self.files.push((name.to_string(), contents));
    }

    fn search(&self) -> SearchOptions {
        let mut o = SearchOptions::default();
        if let Some(n) = self.cfg.budget_nodes {
            o.node_budget = n;
        }
        o
    }

    fn words(&self, primitive_only: bool) -> WordOptions {
        let mut o = WordOptions {
            oriented: self.cfg.oriented,
            primitive_only,
            ..Default::default()
        };
        if let Some(n) = self.cfg.budget_words {
            o.word_budget = n;
        }
        o
    }

    fn count_options(&self, primitive_only: bool) -> CountOptions {
        CountOptions {
            search: self.search(),
            words: self.words(primitive_only),
            ..Default::default()
        }
    }

    fn grid_max(&self) -> Rational {
        *self.cfg.l_grid.last().unwrap()
    }

    fn enumerate_sc(&mut self) -> flatgeo::Result<()> {
        let set = enumerate_saddle_connections(&self.cfg.surface, &self.cfg.l, &self.search())?;
        self.summary.saddle_connections = Some(set.len());
        self.file("saddle_connections.csv", set.to_csv());
        Ok(())
    }

    fn enumerate_geodesics(&mut self) -> flatgeo::Result<()> {
        let s = &self.cfg.surface;
        let set = enumerate_saddle_connections(s, &self.cfg.l, &self.search())?;
        let table = JunctionTable::new(s, &set);
        let words = enumerate_closed_geodesics(&set, &table, &self.cfg.l, &self.words(self.cfg.primitive_only))?;
        self.summary.saddle_connections = Some(set.len());
        self.summary.classes = Some(words.len());
        self.file("geodesics.csv", words_csv(&words));
        Ok(())
    }

    fn table(&mut self, primitive_only: bool) -> flatgeo::Result<(Census, BoundConstants, CountTable)> {
        let cfg = self.cfg;
        let census = Census::new(&cfg.surface, &self.grid_max(), &self.count_options(primitive_only))?;
        let constants = measured_constants(&cfg.surface, &cfg.l_grid, &self.search())?;
        let table =
            flatgeo::bounds::count_table_from_census(&census, &constants, &cfg.l_grid, &cfg.k_grid)?;
        Ok((census, constants, table))
    }

    fn count(&mut self) -> flatgeo::Result<()> {
        // iterates are counted unless asked otherwise; with the flag both tables are kept
        let (census, constants, table) = self.table(false)?;
        self.summary.fits = fit_exponents(&table).ok();
        self.summary.classes = Some(census.classes.len());
        self.summary.saddle_connections = Some(census.set.len());
        self.summary.verdicts = flatgeo::bounds::table_verdicts(&table);
        self.summary.constants = Some(constants);
        self.file("count_table.csv", table.to_csv());
        if self.cfg.primitive_only {
            let (_, _, prim) = self.table(true)?;
            self.file("count_table_primitive.csv", prim.to_csv());
        }
        Ok(())
    }

    fn verify(&mut self) -> flatgeo::Result<()> {
        let (census, constants, _) = self.table(self.cfg.primitive_only)?;
        let report = verify_with_census(&census, &constants, &self.cfg.l_grid, &self.cfg.k_grid)?;
        self.summary.classes = Some(census.classes.len());
        self.summary.saddle_connections = Some(census.set.len());
        self.summary.fits = fit_exponents(&report.table).ok();
        self.summary.max_f_pair_ratio = Some(report.max_f_pair_ratio);
        self.summary.max_f_pair_ratio_off_diagonal = Some(report.max_f_pair_ratio_off_diagonal);
        self.summary.constants = Some(constants);
        self.file("classes.csv", census.classes_csv());
        self.file("count_table.csv", report.table.to_csv());
        for v in report.verdicts.iter().filter(|v| !v.passed()) {
            for w in &v.witnesses {
                self.witnesses.push(format!("{}: {w}", v.name));
            }
            if v.witnesses.is_empty() {
                self.witnesses.push(format!("{}: {} violations", v.name, v.violations));
            }
        }
        self.summary.verdicts = report.verdicts;
        Ok(())
    }

    fn oracle_compare(&mut self) -> flatgeo::Result<()> {
        let s = &self.cfg.surface;
        let model = HyperbolicModel::new(s)?;
        let set = enumerate_saddle_connections(s, &self.cfg.l, &self.search())?;
        let table = JunctionTable::new(s, &set);
        let words = enumerate_closed_geodesics(&set, &table, &self.cfg.l, &self.words(self.cfg.primitive_only))?;
        let ctx = CrossingContext::new(s, &set);
        let report = compare_classes(&model, &ctx, &words)?;
        for r in report.rows.iter().filter(|r| !r.agree()) {
            self.witnesses.push(format!(
                "{}: flat {} hyperbolic {}{}",
                r.key,
                r.k_flat,
                r.k_hyp.map_or("none".to_string(), |k| k.to_string()),
                r.error.as_ref().map_or(String::new(), |e| format!(" ({e})"))
            ));
        }
        self.summary.saddle_connections = Some(set.len());
        self.summary.classes = Some(words.len());
        self.summary.oracle = Some(OracleSummary {
            classes: report.rows.len(),
            agreeing: report.rows.iter().filter(|r| r.agree()).count(),
            min_ratio: report.min_ratio,
            max_ratio: report.max_ratio,
            lambda: report.lambda(),
        });
        self.file("oracle.csv", report.to_csv());
        Ok(())
    }

    fn smoothing_check(&mut self) -> flatgeo::Result<()> {
        let alpha = self.cfg.surface.cone_angle();
        let rows: Vec<SmoothingRow> = self
            .cfg
            .t_grid
            .iter()
            .map(|&t| smoothing_row(alpha, t, SMOOTHING_SAMPLES))
            .collect::<flatgeo::Result<_>>()?;
        for r in &rows {
            let limit = -r.t * r.t / 2.0;
            let checks = [
                ("convexity", r.worst_concavity <= 0.0),
                ("curvature", r.max_curvature <= limit),
                ("area", r.bound_ok),
                ("boundary", r.boundary_error <= 1e-10),
                ("cone angle", (r.cone_angle - 2.0 * std::f64::consts::PI).abs() <= 0.02 * std::f64::consts::PI),
            ];
            for (name, ok) in checks {
                if !ok {
                    self.witnesses.push(format!("t = {}: {name} check fails", r.t));
                }
            }
            self.summary.smoothing.push(SmoothingSummary {
                t: r.t,
                t0: r.t0,
                max_curvature: r.max_curvature,
                curvature_limit: limit,
                area: r.area,
                area_limit: alpha * r.t,
                cone_angle: r.cone_angle,
                boundary_error: r.boundary_error,
                worst_concavity: r.worst_concavity,
                passed: checks.iter().all(|c| c.1),
            });
        }
        self.file("smoothing.csv", smoothing_csv(&rows));
        Ok(())
    }

    fn execute(&mut self) -> flatgeo::Result<()> {
        use crate::config::Command::*;
        match self.cfg.command {
            EnumerateSc => self.enumerate_sc(),
            EnumerateGeodesics => self.enumerate_geodesics(),
            Count => self.count(),
            Verify => self.verify(),
            OracleCompare => self.oracle_compare(),
            SmoothingCheck => self.smoothing_check(),
        }
    }

    fn write(mut self, out: &Path) -> std::io::Result<()> {
        fs::create_dir_all(out)?;
        if !self.witnesses.is_empty() {
            let mut text = self.witnesses.join("\n");
            text.push('\n');
            self.files.push(("witnesses.txt".into(), text));
        }
        for (name, contents) in &self.files {
            fs::write(out.join(name), contents)?;
            self.summary.artifacts.push(name.clone());
        }
        self.summary.artifacts.push("summary.toml".into());
        let doc = toml::to_string(&self.summary).map_err(std::io::Error::other)?;
        fs::write(out.join("summary.toml"), doc)
    }
}

/// Runs one command, writes its artifacts and returns the exit status.
pub fn run(cfg: &RunConfig) -> u8 {
    let mut r = Run::new(cfg);
    let code = match r.execute() {
        Ok(()) if r.witnesses.is_empty() && r.summary.verdicts.iter().all(Verdict::passed) => EXIT_OK,
        Ok(()) => {
            r.summary.status = "verification_failed".into();
            eprintln!("verification failed; see witnesses.txt in {}", cfg.out.display());
            EXIT_VERIFY
        }
        Err(e) => {
            // no partial tables are written
            r.files.clear();
            r.witnesses.clear();
            r.summary.status = match e {
                Error::LimitExceeded { .. } | Error::BudgetExceeded { .. } => "incomplete".into(),
                _ => "error".into(),
            };
            r.summary.message = Some(e.to_string());
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    };
    if let Err(e) = r.write(&cfg.out) {
        eprintln!("error: cannot write to {}: {e}", cfg.out.display());
        return EXIT_CONFIG;
    }
    code
}
