use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use cmsoule::ntheory::primes_in;
use cmsoule::padic::{frobenius_generates_test, purely_local_test, Side};
use cmsoule::quadfield::{split_in, Field, QuadInt, CANONICALIZATION};
use cmsoule::Result;

/// Candidates handed to one worker.
pub const CHUNK: u64 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRecord {
    pub p: u64,
    pub pi: QuadInt,
    pub purely_local_p_bar: bool,
    pub purely_local_p: bool,
    pub frobenius_generates: bool,
}

/// A prime at which a purely-local test fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CounterExample {
    pub p: u64,
    pub pi: QuadInt,
    pub p_bar_side: bool,
    pub p_side: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub d: u32,
    pub min_p: u64,
    pub max_p: u64,
    pub canonicalization: &'static str,
    pub split_primes: usize,
    pub records: Vec<ScanRecord>,
    pub counter_examples: Vec<CounterExample>,
    pub elapsed_seconds: f64,
}

fn record(field: Field, p: u64) -> Result<Option<ScanRecord>> {
    let sp = match split_in(field, p) {
        Ok(sp) => sp,
        Err(_) => return Ok(None),
    };
    Ok(Some(ScanRecord {
        p,
        purely_local_p_bar: purely_local_test(&sp, Side::PBar),
        purely_local_p: purely_local_test(&sp, Side::P),
        frobenius_generates: frobenius_generates_test(&sp)?,
        pi: sp.pi,
    }))
}

/// Tests every split prime `5 <= p <= max_p` of `K = Q(√-d)`.
///
/// The range is cut into fixed chunks of [`CHUNK`] integers, processed in
/// parallel and merged in order, so the records do not depend on scheduling.
pub fn scan(field: Field, max_p: u64) -> Result<ScanReport> {
    let start = Instant::now();
    let chunks: Vec<(u64, u64)> = (0..=max_p / CHUNK)
        .map(|k| (k * CHUNK, ((k + 1) * CHUNK - 1).min(max_p)))
        .filter(|&(lo, hi)| hi >= 5 && lo <= hi)
        .collect();
    let parts = chunks
        .par_iter()
        .map(|&(lo, hi)| {
            primes_in(lo.max(5), hi)
                .into_iter()
                .filter_map(|p| record(field, p).transpose())
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut records: Vec<ScanRecord> = parts.into_iter().flatten().collect();
    records.sort_by_key(|r| r.p);
    let counter_examples = records
        .iter()
        .filter(|r| !r.purely_local_p_bar || !r.purely_local_p)
        .map(|r| CounterExample {
            p: r.p,
            pi: r.pi.clone(),
            p_bar_side: !r.purely_local_p_bar,
            p_side: !r.purely_local_p,
        })
        .collect();
    Ok(ScanReport {
        d: field.d(),
        min_p: 5,
        max_p,
        canonicalization: CANONICALIZATION,
        split_primes: records.len(),
        records,
        counter_examples,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Records as CSV with a header row.
pub fn to_csv(report: &ScanReport) -> csv::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "p",
        "pi_a",
        "pi_b",
        "purely_local_p_bar",
        "purely_local_p",
        "frobenius_generates",
    ])?;
    for r in &report.records {
        w.write_record([
            r.p.to_string(),
            r.pi.a().to_string(),
            r.pi.b().to_string(),
            r.purely_local_p_bar.to_string(),
            r.purely_local_p.to_string(),
            r.frobenius_generates.to_string(),
        ])?;
    }
    w.into_inner().map_err(|e| e.into_error().into())
}
