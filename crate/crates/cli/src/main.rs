// Copyright 2026 the flatgeo Authors
// SPDX-License-Identifier: Apache-2.0

//! `flatgeo --surface L-origami-3 --command verify --L-grid 1,2,3 --out out/`
//!
//! Exit status: 0 when every requested check passes, 2 when a check fails
//! (witnesses are written next to the summary), 1 on configuration errors
//! and exhausted budgets.

use std::process::ExitCode;

use clap::Parser;

mod commands;
mod config;

use config::{Args, RunConfig};

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(commands::EXIT_CONFIG);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let cfg = match RunConfig::from_args(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(commands::EXIT_CONFIG);
        }
    };
    if let Some(n) = cfg.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: --workers: {e}");
            return ExitCode::from(commands::EXIT_CONFIG);
        }
    }
    ExitCode::from(commands::run(&cfg))
}
