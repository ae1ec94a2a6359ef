//! Least-squares comparison of the soliton-pair law against the Zener law.

use serde::{Deserialize, Serialize};

use crate::numerics::{least_squares_fit, FitOptions, FitResult};
use crate::transport::{
    current_sge, current_zener, validate_field_grid, CurveSeries, TransportParams,
};
use crate::wavefunctional::linspace;
use crate::{Error, Result};

/// Default comparison window in units of the threshold field.
pub const DEFAULT_WINDOW: (f64, f64) = (1.2, 5.0);
/// Number of grid points used by [`zener_comparison`].
pub const DEFAULT_GRID_POINTS: usize = 100;

/// Parameter of the soliton-pair law that a fit may adjust.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FreeParam {
    CTilde1,
    CV,
}

impl FreeParam {
    fn get(self, tp: &TransportParams) -> f64 {
        match self {
            FreeParam::CTilde1 => tp.c_tilde1,
            FreeParam::CV => tp.c_v,
        }
    }

    fn set(self, tp: &mut TransportParams, v: f64) {
        match self {
            FreeParam::CTilde1 => tp.c_tilde1 = v,
            FreeParam::CV => tp.c_v = v,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FreeParam::CTilde1 => "c_tilde1",
            FreeParam::CV => "c_v",
        }
    }
}

impl std::str::FromStr for FreeParam {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "c_tilde1" => Ok(FreeParam::CTilde1),
            "c_v" => Ok(FreeParam::CV),
            other => Err(Error::domain(format!(
                "unknown free parameter '{other}' (expected c_tilde1 or c_v)"
            ))),
        }
    }
}

/// Copies `start` with the fitted values written into the `free` slots.
pub fn apply_params(
    start: &TransportParams,
    free: &[FreeParam],
    values: &[f64],
) -> TransportParams {
    let mut tp = *start;
    for (p, &v) in free.iter().zip(values) {
        p.set(&mut tp, v);
    }
    tp
}

fn check_free(free: &[FreeParam]) -> Result<()> {
    for (i, p) in free.iter().enumerate() {
        if free[..i].contains(p) {
            return Err(Error::domain(format!(
                "free parameter {} listed twice",
                p.name()
            )));
        }
    }
    Ok(())
}

/// Fits the soliton-pair law to `(E, I)` data, adjusting only `free`.
/// `FitResult::params` follows the order of `free`.
pub fn fit_sge_to_series(
    data: &[(f64, f64)],
    free: &[FreeParam],
    start: &TransportParams,
) -> Result<FitResult> {
    start.validate()?;
    check_free(free)?;
    let fields: Vec<f64> = data.iter().map(|p| p.0).collect();
    validate_field_grid(&fields)?;
    let params0: Vec<f64> = free.iter().map(|p| p.get(start)).collect();
    let model = |e: f64, values: &[f64]| {
        let tp = apply_params(start, free, values);
        current_sge(e, &tp).unwrap_or(f64::NAN)
    };
    least_squares_fit(model, &params0, data, &FitOptions::default())
}

/// Samples the Zener law of `tp_zener` on `e_grid` and fits the soliton-pair law
/// to it. The threshold field is taken from `tp_zener` and held fixed.
pub fn fit_sge_to_zener(
    tp_zener: &TransportParams,
    e_grid: &[f64],
    free: &[FreeParam],
    start: &TransportParams,
) -> Result<FitResult> {
    tp_zener.validate()?;
    validate_field_grid(e_grid)?;
    if let Some(e) = e_grid.iter().find(|&&e| e <= tp_zener.e_t) {
        return Err(Error::domain(format!(
            "fit grid point E = {e} is not above the threshold field {}",
            tp_zener.e_t
        )));
    }
    let data = e_grid
        .iter()
        .map(|&e| Ok((e, current_zener(e, tp_zener)?)))
        .collect::<Result<Vec<_>>>()?;
    let start = TransportParams {
        e_t: tp_zener.e_t,
        ..*start
    };
    fit_sge_to_series(&data, free, &start)
}

/// Relative deviation of one series from a reference series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonMetrics {
    pub rms_rel: f64,
    pub max_rel: f64,
    pub grid_lo: f64,
    pub grid_hi: f64,
}

/// Compares `a` against the reference `b` over the points with `lo <= E <= hi`.
///
/// Deviations are normalized by `b`, so the metrics are not symmetric in
/// the two arguments.
pub fn compare_series(
    a: &CurveSeries,
    b: &CurveSeries,
    window: (f64, f64),
) -> Result<ComparisonMetrics> {
    let (lo, hi) = window;
    if !(lo <= hi) {
        return Err(Error::domain(format!(
            "empty comparison window [{lo}, {hi}]"
        )));
    }
    let inside = |s: &CurveSeries| -> Vec<(f64, f64)> {
        s.points
            .iter()
            .copied()
            .filter(|&(e, _)| e >= lo && e <= hi)
            .collect()
    };
    let (pa, pb) = (inside(a), inside(b));
    if pa.is_empty() && pb.is_empty() {
        return Err(Error::domain(format!(
            "no points inside window [{lo}, {hi}]"
        )));
    }
    if pa.len() != pb.len() || pa.iter().zip(&pb).any(|(x, y)| x.0 != y.0) {
        return Err(Error::domain(
            "series do not share the same field grid inside the window",
        ));
    }
    let mut sum_sq = 0.0;
    let mut max_rel: f64 = 0.0;
    for (&(e, ia), &(_, ib)) in pa.iter().zip(&pb) {
        if ib == 0.0 || !ib.is_finite() {
            return Err(Error::domain(format!(
                "reference current is zero or not finite at E = {e}"
            )));
        }
        let rel = (ia - ib).abs() / ib.abs();
        sum_sq += rel * rel;
        max_rel = max_rel.max(rel);
    }
    Ok(ComparisonMetrics {
        rms_rel: (sum_sq / pa.len() as f64).sqrt(),
        max_rel,
        grid_lo: lo,
        grid_hi: hi,
    })
}

/// Outcome of fitting the soliton-pair law to a Zener curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZenerComparison {
    pub fit: FitResult,
    pub fitted: TransportParams,
    pub sge: CurveSeries,
    pub zener: CurveSeries,
    pub metrics: ComparisonMetrics,
}

/// Fits `c_tilde1` and `c_v` to the Zener curve of `tp_zener` on `n` evenly
/// spaced fields spanning `window` (in units of `E_T`), starting from `start`.
pub fn zener_comparison(
    tp_zener: &TransportParams,
    start: &TransportParams,
    window: (f64, f64),
    n: usize,
) -> Result<ZenerComparison> {
    if n < 2 {
        return Err(Error::domain("comparison grid needs at least 2 points"));
    }
    let grid = linspace(window.0 * tp_zener.e_t, window.1 * tp_zener.e_t, n);
    let free = [FreeParam::CTilde1, FreeParam::CV];
    let fit = fit_sge_to_zener(tp_zener, &grid, &free, start)?;
    let fitted = apply_params(
        &TransportParams {
            e_t: tp_zener.e_t,
            ..*start
        },
        &free,
        &fit.params,
    );
    let sge = crate::transport::curve_series(crate::CurrentModel::Sge, &fitted, &grid)?;
    let zener = crate::transport::curve_series(crate::CurrentModel::Zener, tp_zener, &grid)?;
    let metrics = compare_series(&sge, &zener, (grid[0], grid[n - 1]))?;
    Ok(ZenerComparison {
        fit,
        fitted,
        sge,
        zener,
        metrics,
    })
}
