use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use super::transient::TraceRecord;
use crate::{math, Error, Result};

/// Delay-embeds one recorded channel: points `(v[k], v[k−lag])` for
/// `k = lag..N`.
pub fn delay_embed(trace: &TraceRecord, channel: usize, lag: usize) -> Result<Vec<[f64; 2]>> {
    if channel >= trace.samples.cols() {
        return Err(Error::invalid(format!("trace has no channel {channel}")));
    }
    delay_embed_series(&trace.channel(channel), lag)
}

pub fn delay_embed_series(series: &[f64], lag: usize) -> Result<Vec<[f64; 2]>> {
    if lag == 0 || lag >= series.len() {
        return Err(Error::invalid(format!(
            "lag must be in 1..{}, got {lag}",
            series.len()
        )));
    }
    Ok(series[lag..].iter().zip(series).map(|(&now, &then)| [now, then]).collect())
}

/// Number of occupied cells when the points' bounding box is split into a
/// `resolution × resolution` grid. A degenerate axis maps to a single cell.
pub fn portrait_coverage(points: &[[f64; 2]], resolution: usize) -> usize {
    if points.is_empty() {
        return 0;
    }
    let resolution = resolution.max(1);
    let mut lo = points[0];
    let mut hi = points[0];
    for p in points {
        for a in 0..2 {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    let bin = |v: f64, a: usize| -> usize {
        let span = hi[a] - lo[a];
        if !(span > 0.0) {
            return 0;
        }
        let k = math::floor((v - lo[a]) / span * resolution as f64) as usize;
        k.min(resolution - 1)
    };
    points.iter().map(|p| (bin(p[0], 0), bin(p[1], 1))).collect::<BTreeSet<_>>().len()
}
