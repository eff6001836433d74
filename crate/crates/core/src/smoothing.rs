// Copyright 2026 the flatgeo Authors
// SPDX-License-Identifier: Apache-2.0

//! Negatively curved smoothings of the cone point.
//!
//! Metrics are `ds² = dr² + g(r)² dθ²` on a disc, with curvature `−g''/g`
//! and circumference `2π g(r)`. Write `S(r) = sinh(tr)/t` and
//! `A = α/2π`. The cone metric of angle `α` and curvature `−t²` is
//! `g = A S`; the smooth disc is `g = S`.
//!
//! The interpolating profile is `g = c S` with `c' = W/S²` for a bump `W ≥ 0`
//! supported in `[t₀, 2t]`. Then `−g''/g = −t² − W'/(c S²)`, so the
//! curvature stays at most `−t²/2` as long as `W'` is not too negative.
//! `W` rises on `[t₀, 2t₀]`, stays constant on `[2t₀, t]` and decays on
//! `[t, 2t]`; `t₀` is chosen so that `c` climbs from 1 to `A`.
//!
//! The tangent-line breakpoints `s₀ < s₁ < t` of the piecewise convex
//! comparison profile are reported alongside.

use std::f64::consts::PI;
use std::fmt::Write;

use crate::error::{Error, Result};

fn s_of(t: f64, r: f64) -> f64 {
    (t * r).sinh() / t
}

fn smoothstep(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    x * x * (3.0 - 2.0 * x)
}

fn smoothstep_slope(x: f64) -> f64 {
    if (0.0..=1.0).contains(&x) {
        6.0 * x * (1.0 - x)
    } else {
        0.0
    }
}

// 8-point Gauss–Legendre on [-1, 1]
const GL_X: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_W: [f64; 8] = [
    0.101_228_536_290_376_26,
    0.222_381_034_453_374_47,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_47,
    0.101_228_536_290_376_26,
];

fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, pieces: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let h = (b - a) / pieces as f64;
    let mut total = 0.0;
    for k in 0..pieces {
        let lo = a + k as f64 * h;
        let mid = lo + h / 2.0;
        for (x, w) in GL_X.iter().zip(GL_W) {
            total += w * f(mid + x * h / 2.0) * h / 2.0;
        }
    }
    total
}

/// Tangent-line breakpoints of the piecewise comparison profile: the line
/// tangent to `A S` at `t` meets zero at `s₀`, and the tangent to `S` at
/// `s₀` meets it at `s₁`.
pub fn tangent_breakpoints(alpha: f64, t: f64) -> (f64, f64) {
    let a = alpha / (2.0 * PI);
    let s0 = t - (t * t).tanh() / t;
    let s1 = s0 + (t * s0).sinh() / (t * (a * (t * t).cosh() - (t * s0).cosh()));
    (s0, s1)
}

/// The interpolating metric in closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct Smoothing {
    pub alpha: f64,
    pub t: f64,
    pub t0: f64,
    pub s0: f64,
    pub s1: f64,
    w_max: f64,
    /// `∫₀^{2t} W/S²`, before normalisation.
    total: f64,
}

impl Smoothing {
    pub fn new(alpha: f64, t: f64) -> Result<Self> {
        if !(alpha > 2.0 * PI) || !(t > 0.0) || !t.is_finite() {
            return Err(Error::ConstructionFailed(format!(
                "need α > 2π and t > 0, got α = {alpha}, t = {t}"
            )));
        }
        let (s0, s1) = tangent_breakpoints(alpha, t);
        if !(0.0 < s0 && s0 < s1 && s1 < t) {
            return Err(Error::ConstructionFailed(format!(
                "tangent points out of order: s₀ = {s0}, s₁ = {s1}, t = {t}"
            )));
        }
        let target = alpha / (2.0 * PI) - 1.0;
        let st = s_of(t, t);
        let w_max = 0.25 * t.powi(3) * st * st;
        let mut probe = Smoothing {
            alpha,
            t,
            t0: t / 4.0,
            s0,
            s1,
            w_max,
            total: 0.0,
        };
        let (mut lo, mut hi) = (0.0f64, t / 2.0);
        probe.t0 = hi;
        if probe.raw_integral(2.0 * t) > target {
            return Err(Error::ConstructionFailed(format!(
                "t = {t} too large for α = {alpha}"
            )));
        }
        // the integral decreases in t₀ and blows up as t₀ → 0
        for _ in 0..200 {
            let mid = if lo == 0.0 { hi / 16.0 } else { (lo * hi).sqrt() };
            probe.t0 = mid;
            if probe.raw_integral(2.0 * t) > target {
                lo = mid;
            } else {
                hi = mid;
            }
            if lo > 0.0 && (hi - lo) <= 1e-15 * hi {
                break;
            }
        }
        probe.t0 = hi;
        probe.total = probe.raw_integral(2.0 * t);
        Ok(probe)
    }

    pub fn cone_factor(&self) -> f64 {
        self.alpha / (2.0 * PI)
    }

    fn w(&self, r: f64) -> f64 {
        let (t0, t) = (self.t0, self.t);
        if r <= t0 || r >= 2.0 * t {
            0.0
        } else if r < 2.0 * t0 {
            self.w_max * smoothstep((r - t0) / t0)
        } else if r <= t {
            self.w_max
        } else {
            self.w_max * (1.0 - smoothstep((r - t) / t))
        }
    }

    fn w_slope(&self, r: f64) -> f64 {
        let (t0, t) = (self.t0, self.t);
        if r <= t0 || r >= 2.0 * t {
            0.0
        } else if r < 2.0 * t0 {
            self.w_max * smoothstep_slope((r - t0) / t0) / t0
        } else if r <= t {
            0.0
        } else {
            -self.w_max * smoothstep_slope((r - t) / t) / t
        }
    }

    /// `∫₀^r W/S²` before normalisation.
    fn raw_integral(&self, r: f64) -> f64 {
        let (t0, t) = (self.t0, self.t);
        let f = |x: f64| self.w(x) / s_of(t, x).powi(2);
        let mut total = integrate(f, t0, r.min(2.0 * t0), 64);
        let (a, b) = (2.0 * t0, r.min(t));
        if b > a {
            // ∫ dr / S² = t (coth(ta) − coth(tb))
            let coth = |x: f64| 1.0 / x.tanh();
            total += self.w_max * t * (coth(t * a) - coth(t * b));
        }
        total += integrate(f, t, r.min(2.0 * t), 64);
        total
    }

    fn c(&self, r: f64) -> f64 {
        if r <= self.t0 {
            1.0
        } else if r >= 2.0 * self.t {
            self.cone_factor()
        } else {
            1.0 + (self.cone_factor() - 1.0) * self.raw_integral(r) / self.total
        }
    }

    pub fn g(&self, r: f64) -> f64 {
        let s = s_of(self.t, r);
        if r <= self.t0 {
            s
        } else if r >= 2.0 * self.t {
            self.cone_factor() * s
        } else {
            self.c(r) * s
        }
    }

    /// `−g''/g` in closed form.
    pub fn curvature(&self, r: f64) -> f64 {
        let scale = (self.cone_factor() - 1.0) / self.total;
        let s = s_of(self.t, r);
        -self.t * self.t - scale * self.w_slope(r) / (self.c(r) * s * s)
    }

    /// `2π ∫₀^{3t} g`.
    pub fn area(&self) -> f64 {
        let t = self.t;
        let g = |r: f64| self.g(r);
        let cuts = [0.0, self.t0, 2.0 * self.t0, t, 2.0 * t, 3.0 * t];
        let mut total = 0.0;
        for w in cuts.windows(2) {
            total += integrate(g, w[0], w[1], 32);
        }
        2.0 * PI * total
    }

    /// Cone angle at the centre, extrapolated from `2π g(ε)/ε` at three
    /// shrinking radii inside `[0, t₀]`.
    pub fn cone_angle_at_centre(&self) -> f64 {
        let e = self.t0.min(self.t) / 2.0;
        let ratio = |x: f64| 2.0 * PI * self.g(x) / x;
        let (a, b, c) = (ratio(e), ratio(e / 2.0), ratio(e / 4.0));
        // error is O(ε²): two Richardson steps
        let ab = (4.0 * b - a) / 3.0;
        let bc = (4.0 * c - b) / 3.0;
        (16.0 * bc - ab) / 15.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadialProfile {
    pub alpha: f64,
    pub t: f64,
    pub h: f64,
    pub samples: Vec<(f64, f64)>,
    pub s0: Option<f64>,
    pub s1: Option<f64>,
    pub t0: Option<f64>,
}

impl RadialProfile {
    /// Largest `−Δ²g` among interior samples; nonpositive for convex data.
    pub fn worst_concavity(&self) -> f64 {
        self.samples
            .windows(3)
            .map(|w| -(w[2].1 - 2.0 * w[1].1 + w[0].1))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_increasing(&self) -> bool {
        self.samples.windows(2).all(|w| w[1].1 > w[0].1)
    }

    /// Finite-difference `−g''/g` at interior samples.
    pub fn finite_difference_curvature(&self) -> Vec<(f64, f64)> {
        let h = self.h;
        self.samples
            .windows(3)
            .filter(|w| w[1].1 > 0.0)
            .map(|w| (w[1].0, -(w[2].1 - 2.0 * w[1].1 + w[0].1) / (h * h) / w[1].1))
            .collect()
    }
}

fn sample(f: impl Fn(f64) -> f64, r_max: f64, h: f64) -> Vec<(f64, f64)> {
    let n = (r_max / h).round() as usize;
    (0..=n).map(|i| i as f64 * h).map(|r| (r, f(r))).collect()
}

/// `g = (α/2π) sinh(tr)/t` on `[0, r_max]`.
pub fn cone_profile(alpha: f64, t: f64, r_max: f64, h: f64) -> RadialProfile {
    let a = alpha / (2.0 * PI);
    RadialProfile {
        alpha,
        t,
        h,
        samples: sample(|r| a * s_of(t, r), r_max, h),
        s0: None,
        s1: None,
        t0: None,
    }
}

/// The smoothing sampled on `[0, 3t]` with step `h`.
pub fn build_interpolation(alpha: f64, t: f64, h: f64) -> Result<(Smoothing, RadialProfile)> {
    let sm = Smoothing::new(alpha, t)?;
    let profile = RadialProfile {
        alpha,
        t,
        h,
        samples: sample(|r| sm.g(r), 3.0 * t, h),
        s0: Some(sm.s0),
        s1: Some(sm.s1),
        t0: Some(sm.t0),
    };
    Ok((sm, profile))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AreaCheck {
    pub area: f64,
    pub bound: f64,
    pub bound_ok: bool,
}

pub fn check_area(alpha: f64, t: f64) -> Result<AreaCheck> {
    let sm = Smoothing::new(alpha, t)?;
    let area = sm.area();
    let bound = 6.0 * PI * t;
    Ok(AreaCheck {
        area,
        bound,
        bound_ok: area < bound,
    })
}

/// One row of the smoothing report.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothingRow {
    pub t: f64,
    pub alpha: f64,
    pub s0: f64,
    pub s1: f64,
    pub t0: f64,
    pub max_curvature: f64,
    pub min_curvature: f64,
    pub area: f64,
    pub bound_ok: bool,
    pub cone_angle: f64,
    pub worst_concavity: f64,
    pub boundary_error: f64,
}

/// Evaluates the smoothing on a grid of `samples` points over `[0, 3t]`.
pub fn smoothing_row(alpha: f64, t: f64, samples: usize) -> Result<SmoothingRow> {
    let h = 3.0 * t / samples as f64;
    let (sm, profile) = build_interpolation(alpha, t, h)?;
    let mut radii: Vec<f64> = profile.samples.iter().map(|s| s.0).filter(|&r| r > 0.0).collect();
    // the rise of W is far below the grid step; probe it directly
    radii.extend((1..64).map(|i| sm.t0 * (1.0 + i as f64 / 64.0)));
    let curv: Vec<f64> = radii.iter().map(|&r| sm.curvature(r)).collect();
    let a = sm.cone_factor();
    let boundary_error = profile
        .samples
        .iter()
        .map(|&(r, g)| {
            if r <= sm.t0 {
                (g - s_of(t, r)).abs()
            } else if r >= 2.0 * t {
                (g - a * s_of(t, r)).abs()
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max);
    let area = sm.area();
    Ok(SmoothingRow {
        t,
        alpha,
        s0: sm.s0,
        s1: sm.s1,
        t0: sm.t0,
        max_curvature: curv.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        min_curvature: curv.iter().copied().fold(f64::INFINITY, f64::min),
        area,
        bound_ok: area < 6.0 * PI * t,
        cone_angle: sm.cone_angle_at_centre(),
        worst_concavity: profile.worst_concavity(),
        boundary_error,
    })
}

/// Columns: `t,alpha,s0,s1,t0,max_curvature,min_curvature,area,bound_ok`.
pub fn smoothing_csv(rows: &[SmoothingRow]) -> String {
    let mut out = String::from("t,alpha,s0,s1,t0,max_curvature,min_curvature,area,bound_ok\n");
    for r in rows {
        writeln!(
            out,
            "{},{:.12},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{}",
            r.t, r.alpha, r.s0, r.s1, r.t0, r.max_curvature, r.min_curvature, r.area, r.bound_ok
        )
        .unwrap();
    }
    out
}
