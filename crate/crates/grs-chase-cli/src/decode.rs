//! Single-word decoding with a human-readable report.

use std::fmt::Write as _;

use grs_chase::{log_likelihood, DecodeResult, Decoder, ErrorEstimate, Gf, GrsCode, ReliabilityInfo};

use crate::config::parse_u32;

/// Splits on commas and whitespace; symbols are decimal or `0x` hex.
pub fn parse_symbols(text: &str, q: usize) -> Result<Vec<Gf>, String> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .enumerate()
        .map(|(i, s)| {
            let v = parse_u32(s).map_err(|e| format!("symbol {i}: {e}"))?;
            if v as usize >= q {
                return Err(format!("symbol {i}: {v} is not in GF({q})"));
            }
            Ok(Gf(v as u16))
        })
        .collect()
}

pub fn parse_reliabilities(text: &str) -> Result<Vec<f64>, String> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .enumerate()
        .map(|(i, s)| s.parse::<f64>().map_err(|e| format!("reliability {i}: {e}")))
        .collect()
}

/// `POS=A/B/...`: ranked alternatives for one coordinate.
pub fn parse_alternative(text: &str, q: usize) -> Result<(usize, Vec<Gf>), String> {
    let (pos, vals) = text
        .split_once('=')
        .ok_or_else(|| format!("alternative {text:?}: expected POS=SYM/SYM"))?;
    let pos = pos
        .trim()
        .parse()
        .map_err(|e| format!("alternative {text:?}: bad position: {e}"))?;
    let vals = parse_symbols(&vals.replace('/', ","), q).map_err(|e| format!("alternative {text:?}: {e}"))?;
    Ok((pos, vals))
}

fn fmt_word(w: &[Gf]) -> String {
    w.iter().map(|g| g.0.to_string()).collect::<Vec<_>>().join(" ")
}

fn fmt_error(code: &GrsCode, e: &ErrorEstimate) -> String {
    let mut s = String::new();
    for (&p, &v) in e.positions().iter().zip(e.values()) {
        write!(s, " {p}(locator {}, value {})", code.locator(p).0, v.0).unwrap();
    }
    s
}

/// Decodes `info` and renders the report. The result is returned as well so
/// the caller can pick an exit code.
pub fn decode_report(dec: &Decoder, info: &ReliabilityInfo) -> grs_chase::Result<(String, DecodeResult)> {
    let code = dec.code();
    let y = info.hard();
    let r = dec.decode(info)?;
    let mut out = String::new();
    writeln!(
        out,
        "code: GF({}) n={} k={} d={} t={}",
        code.field().q(),
        code.n(),
        code.k(),
        code.d(),
        code.t()
    )
    .unwrap();
    writeln!(out, "received: {}", fmt_word(&y)).unwrap();
    match &r.hd {
        Some(e) => writeln!(out, "hard decision: success, {} errors:{}", e.weight(), fmt_error(code, e)).unwrap(),
        None => {
            writeln!(out, "hard decision: failed").unwrap();
            let mode = if dec.config().gmd { "erased" } else { "unreliable" };
            writeln!(out, "{mode} coordinates: {:?}", r.unreliable).unwrap();
            writeln!(
                out,
                "tree: {} nodes, {} edges, {} multiplications",
                r.stats.nodes, r.stats.edges, r.stats.ops.mults
            )
            .unwrap();
            writeln!(out, "candidates: {}", r.candidates.len()).unwrap();
            for (i, c) in r.candidates.iter().enumerate() {
                let ev = c.error.as_vector(code.n());
                let w: Vec<Gf> = y.iter().zip(&ev).map(|(&a, &b)| a - b).collect();
                writeln!(
                    out,
                    "  [{i}] weight {} log-likelihood {:.3}:{}",
                    c.error.weight(),
                    log_likelihood(&w, info),
                    fmt_error(code, &c.error)
                )
                .unwrap();
            }
            if let Some(i) = r.selected_index {
                writeln!(out, "selected: {i}").unwrap();
            }
        }
    }
    match &r.codeword {
        Some(x) => writeln!(out, "codeword: {}", fmt_word(x)).unwrap(),
        None => writeln!(out, "codeword: none").unwrap(),
    }
    Ok((out, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbol_parsing() {
        assert_eq!(parse_symbols("1, 0x0f 3", 16).unwrap(), vec![Gf(1), Gf(15), Gf(3)]);
        assert!(parse_symbols("16", 16).is_err());
        assert!(parse_symbols("1,a", 16).is_err());
        assert_eq!(parse_alternative("3=5/0x7", 16).unwrap(), (3, vec![Gf(5), Gf(7)]));
        assert!(parse_alternative("3:5", 16).is_err());
        assert_eq!(parse_reliabilities("0.5 1").unwrap(), vec![0.5, 1.0]);
    }
}
