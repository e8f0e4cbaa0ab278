//! CSV tables (RFC 4180 quoting via the `csv` crate).

use brickcomp_core::network::TraceRecord;
use serde::{Deserialize, Serialize};

/// CSV with a header row; every row must match the header width.
pub fn write_csv<S: AsRef<str>>(header: &[S], rows: impl IntoIterator<Item = Vec<String>>) -> csv::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header.iter().map(AsRef::as_ref))?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

/// `t` followed by one column per recorded node id.
pub fn write_trace(trace: &TraceRecord) -> csv::Result<Vec<u8>> {
    let header: Vec<String> = std::iter::once("t".to_string()).chain(trace.nodes.iter().map(|n| n.to_string())).collect();
    let rows = (0..trace.len()).map(|k| {
        std::iter::once(trace.times[k]).chain(trace.samples.row(k).iter().copied()).map(|v| v.to_string()).collect()
    });
    write_csv(&header, rows)
}

/// Node ids and rows of `[t, v...]` from [`write_trace`] output.
pub fn read_trace(bytes: &[u8]) -> anyhow::Result<(Vec<usize>, Vec<Vec<f64>>)> {
    let mut r = csv::Reader::from_reader(bytes);
    let header = r.headers()?.clone();
    anyhow::ensure!(header.get(0) == Some("t"), "trace header must start with `t`");
    let nodes = header.iter().skip(1).map(str::parse).collect::<Result<Vec<usize>, _>>()?;
    let mut rows = Vec::new();
    for rec in r.records() {
        rows.push(rec?.iter().map(str::parse).collect::<Result<Vec<f64>, _>>()?);
    }
    Ok((nodes, rows))
}

/// One flooded src → dst pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouteRow {
    pub scenario_id: String,
    pub fault_count: usize,
    pub src: usize,
    pub dst: usize,
    pub delivered: bool,
    /// Empty when not delivered.
    pub hops: Option<u32>,
    pub messages: u64,
    /// Reachable through alive cells within the ttl.
    pub oracle_reachable: bool,
}

const ROUTE_HEADER: [&str; 8] =
    ["scenario_id", "fault_count", "src", "dst", "delivered", "hops", "messages", "oracle_reachable"];

pub fn write_route_rows(rows: &[RouteRow]) -> csv::Result<Vec<u8>> {
    if rows.is_empty() {
        return write_csv(&ROUTE_HEADER, []);
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

pub fn read_route_rows(bytes: &[u8]) -> csv::Result<Vec<RouteRow>> {
    csv::Reader::from_reader(bytes).deserialize().collect()
}
