//! Diagnostics CSV stream.
//!
//! Header `t,mass,F,D,l2,gradl2,lapl2,h2,linf,l6` with an extra `hs` column
//! when a Sobolev index is tracked. Values are printed with 17 significant
//! digits so parsing them back reproduces the doubles exactly.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::diagnostics::DiagnosticsRecord;
use crate::error::{Error, Result};

pub const BASE_HEADER: &str = "t,mass,F,D,l2,gradl2,lapl2,h2,linf,l6";

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn csv_string(records: &[DiagnosticsRecord]) -> Result<String> {
    if records.is_empty() {
        return Err(Error::InvalidSolverConfig(
            "refusing to write an empty diagnostics CSV".into(),
        ));
    }
    let with_hs = records[0].hs.is_some();
    if records.iter().any(|r| r.hs.is_some() != with_hs) {
        return Err(Error::InvalidSolverConfig(
            "records disagree about the hs column".into(),
        ));
    }
    let mut out = String::new();
    out.push_str(BASE_HEADER);
    if with_hs {
        out.push_str(",hs");
    }
    out.push('\n');
    for r in records {
        let mut row: Vec<String> = vec![
            fmt(r.t),
            fmt(r.mass),
            fmt(r.free_energy),
            fmt(r.dissipation),
            fmt(r.l2),
            fmt(r.grad_l2),
            fmt(r.lap_l2),
            fmt(r.h2),
            fmt(r.linf),
            fmt(r.l6),
        ];
        if let Some(hs) = r.hs {
            row.push(fmt(hs));
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

pub fn write_csv(records: &[DiagnosticsRecord], path: &Path) -> Result<()> {
    let text = csv_string(records)?;
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}

/// Parses a diagnostics CSV produced by [`write_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<DiagnosticsRecord>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidSolverConfig("empty CSV".into()))?;
    let with_hs = match header {
        h if h == BASE_HEADER => false,
        h if h == format!("{BASE_HEADER},hs") => true,
        other => {
            return Err(Error::InvalidSolverConfig(format!(
                "unexpected CSV header '{other}'"
            )))
        }
    };
    let expected = if with_hs { 11 } else { 10 };
    let mut records = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let cells: Vec<f64> = line
            .split(',')
            .map(|c| {
                c.parse::<f64>().map_err(|_| {
                    Error::InvalidSolverConfig(format!(
                        "bad number '{c}' on CSV row {}",
                        lineno + 2
                    ))
                })
            })
            .collect::<Result<_>>()?;
        if cells.len() != expected {
            return Err(Error::InvalidSolverConfig(format!(
                "row {} has {} columns, expected {expected}",
                lineno + 2,
                cells.len()
            )));
        }
        records.push(DiagnosticsRecord {
            t: cells[0],
            mass: cells[1],
            free_energy: cells[2],
            dissipation: cells[3],
            l2: cells[4],
            grad_l2: cells[5],
            lap_l2: cells[6],
            h2: cells[7],
            linf: cells[8],
            l6: cells[9],
            hs: with_hs.then(|| cells[10]),
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(t: f64, hs: Option<f64>) -> DiagnosticsRecord {
        DiagnosticsRecord {
            t,
            mass: 0.1 + t,
            free_energy: 248.04257166570033,
            dissipation: 1.0 / 3.0,
            l2: 2.0f64.sqrt(),
            grad_l2: 6.02e23,
            lap_l2: 1e-300,
            h2: 7.25,
            linf: 0.9999999999999999,
            l6: 3.3,
            hs,
        }
    }

    #[test]
    fn single_record_gives_two_lines() {
        let text = csv_string(&[record(0.0, None)]).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.starts_with(BASE_HEADER));
    }

    #[test]
    fn decimal_round_trip_is_exact() {
        let records = vec![record(0.0, Some(1.5)), record(0.125, Some(2.5))];
        let text = csv_string(&records).unwrap();
        let back = parse_csv(&text).unwrap();
        assert_eq!(records.len(), back.len());
        for (a, b) in records.iter().zip(&back) {
            for ((_, x), (_, y)) in a.named_values().iter().zip(b.named_values()) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }

    #[test]
    fn column_count_is_constant() {
        let text = csv_string(&[record(0.0, None), record(1.0, None)]).unwrap();
        let counts: Vec<usize> = text.lines().map(|l| l.split(',').count()).collect();
        assert!(counts.iter().all(|&c| c == counts[0]));
    }

    #[test]
    fn empty_and_mixed_inputs_are_rejected() {
        assert!(csv_string(&[]).is_err());
        assert!(csv_string(&[record(0.0, None), record(1.0, Some(1.0))]).is_err());
    }
}
