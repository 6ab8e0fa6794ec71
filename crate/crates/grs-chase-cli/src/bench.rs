//! Per-edge multiplication table against the closed-form bounds.

use std::fmt::Write as _;

use grs_chase::{bench_kernel, BenchRow, GrsCode, KernelKind};

pub fn bench_rows(
    code: &GrsCode,
    kinds: &[KernelKind],
    r_max: usize,
    eta: usize,
    trials: usize,
    seed: u64,
) -> grs_chase::Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &k in kinds {
        rows.extend(bench_kernel(code, k, r_max, eta, trials, seed)?);
    }
    Ok(rows)
}

pub fn render(code: &GrsCode, rows: &[BenchRow]) -> String {
    let mut out = String::new();
    writeln!(out, "# GF({}) n={} d={} t={}", code.field().q(), code.n(), code.d(), code.t()).unwrap();
    writeln!(out, "{:<6} {:>5} {:>8} {:>9} {:>6}  status", "kernel", "depth", "edges", "max_mults", "bound").unwrap();
    for r in rows {
        let bound = r.bound.map_or("-".into(), |b| b.to_string());
        let (mults, status) = if r.edges == 0 {
            ("-".to_string(), "no edges")
        } else if r.ok() {
            (r.max_mults.to_string(), "ok")
        } else {
            (r.max_mults.to_string(), "VIOLATION")
        };
        writeln!(out, "{:<6} {:>5} {:>8} {:>9} {:>6}  {status}", r.kernel.to_string(), r.depth, r.edges, mults, bound).unwrap();
    }
    out
}
