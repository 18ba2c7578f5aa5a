use super::distance::DistanceSample;
use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LojaPair {
    #[serde(rename = "EG")]
    Eg,
    #[serde(rename = "FG")]
    Fg,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct LojaFit {
    pub pair: LojaPair,
    pub l_hat: f64,
    pub c_hat: f64,
    /// Log-log slope of the per-bin maximum of X^L/G against G at L = l_hat.
    pub slope: f64,
    pub samples_used: usize,
    pub stable: bool,
}

pub const MIN_SAMPLES: usize = 30;
/// A slope above this counts as bounded as G → 0.
pub const SLOPE_TOLERANCE: f64 = -0.1;
const BINS: usize = 6;

/// Smallest L in {1, 1.25, …, 8} for which max X^L/G stays bounded as the samples approach S.
/// Boundedness is read off the closest half of the samples: split into bins by G, the log of each
/// bin's maximum ratio is regressed on log G, and a slope ≥ −0.1 counts as stable.
pub fn empirical_loja_fit(samples: &[DistanceSample], pair: LojaPair) -> Result<LojaFit> {
    let mut pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|s| s.g > 0.0)
        .map(|s| {
            let x = match pair {
                LojaPair::Eg => Some(s.e),
                LojaPair::Fg => s.f,
            };
            x.map(|x| (x.max(0.0), s.g))
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::InvalidInput("F values missing for the FG fit".into()))?;
    if pts.len() < MIN_SAMPLES {
        return Err(Error::InvalidInput(format!("{} samples with G > 0, need {MIN_SAMPLES}", pts.len())));
    }
    pts.sort_by(|a, b| a.1.total_cmp(&b.1));
    let near = &pts[..pts.len() / 2];
    let per_bin = near.len() / BINS;
    let grid: Vec<f64> = (0..=28).map(|k| 1.0 + 0.25 * k as f64).collect();
    let mut last = None;
    for &l in &grid {
        let ratio = |(x, g): &(f64, f64)| x.powf(l) / g;
        let mut xs = vec![];
        let mut ys = vec![];
        for b in 0..BINS {
            let bin = &near[b * per_bin..if b + 1 == BINS { near.len() } else { (b + 1) * per_bin }];
            let m = bin.iter().map(ratio).fold(0.0, f64::max);
            if m > 0.0 {
                let gmed = bin[bin.len() / 2].1;
                xs.push(gmed.ln());
                ys.push(m.ln());
            }
        }
        let slope = if xs.len() < 3 { 0.0 } else { regression_slope(&xs, &ys) };
        let c_hat = pts.iter().map(ratio).fold(0.0, f64::max);
        let fit = LojaFit { pair, l_hat: l, c_hat, slope, samples_used: pts.len(), stable: slope >= SLOPE_TOLERANCE };
        if fit.stable {
            return Ok(fit);
        }
        last = Some(fit);
    }
    Ok(last.expect("nonempty grid"))
}

fn regression_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}
