//! CSV ingestion for the `data` subcommand.
//!
//! - lifetimes: header `time,censored`, `censored` ∈ {0, 1}.
//! - histories: header `system_id,event_time`, rows in any order. An empty
//!   `event_time` registers a system that had no events. Events after the
//!   analysis horizon are ignored.

use std::collections::BTreeMap;
use std::io::Read;

use gt_core::{EventHistory, LifetimeRecord, LifetimeSample};

use crate::CliError;

fn reader<R: Read>(input: R, expected: &[&str]) -> Result<csv::Reader<R>, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = rdr.headers().map_err(|e| malformed(1, e))?;
    let got: Vec<&str> = headers.iter().collect();
    if got != expected {
        return Err(CliError::MalformedCsv {
            line: 1,
            message: format!(
                "expected header `{}`, found `{}`",
                expected.join(","),
                got.join(",")
            ),
        });
    }
    Ok(rdr)
}

fn malformed(line: u64, e: impl std::fmt::Display) -> CliError {
    CliError::MalformedCsv {
        line,
        message: e.to_string(),
    }
}

fn parse_time(line: u64, cell: &str) -> Result<f64, CliError> {
    match cell.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
        _ => Err(malformed(
            line,
            format!("expected a positive time, found `{cell}`"),
        )),
    }
}

pub fn read_lifetimes<R: Read>(input: R, horizon: f64) -> Result<LifetimeSample, CliError> {
    let mut rdr = reader(input, &["time", "censored"])?;
    let mut records = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| malformed(e.position().map_or(0, |p| p.line()), e))?;
        let line = row.position().map_or(0, |p| p.line());
        let time = parse_time(line, &row[0])?;
        let censored = match &row[1] {
            "0" => false,
            "1" => true,
            other => {
                return Err(malformed(
                    line,
                    format!("censored must be 0 or 1, found `{other}`"),
                ))
            }
        };
        records.push(LifetimeRecord { time, censored });
    }
    Ok(LifetimeSample::new(records, horizon)?)
}

pub fn read_histories<R: Read>(input: R, horizon: f64) -> Result<Vec<EventHistory>, CliError> {
    let mut rdr = reader(input, &["system_id", "event_time"])?;
    let mut systems: BTreeMap<String, Vec<(f64, u64)>> = BTreeMap::new();
    for row in rdr.records() {
        let row = row.map_err(|e| malformed(e.position().map_or(0, |p| p.line()), e))?;
        let line = row.position().map_or(0, |p| p.line());
        let id = &row[0];
        if id.is_empty() {
            return Err(malformed(line, "empty system_id"));
        }
        let events = systems.entry(id.to_string()).or_default();
        if !row[1].is_empty() {
            events.push((parse_time(line, &row[1])?, line));
        }
    }
    systems
        .into_iter()
        .map(|(id, mut events)| {
            events.sort_by(|a, b| a.0.total_cmp(&b.0));
            if let Some(w) = events.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(malformed(
                    w[1].1,
                    format!("duplicate event time {} for system {id}", w[1].0),
                ));
            }
            let times = events
                .into_iter()
                .map(|(t, _)| t)
                .filter(|&t| t <= horizon)
                .collect();
            Ok(EventHistory::new(id, times, horizon)?)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lifetimes_parse() {
        let csv = "time,censored\n1,0\n2,1\n3,0\n";
        let s = read_lifetimes(csv.as_bytes(), 3.0).unwrap();
        assert_eq!(s.records().len(), 3);
        assert!(s.records()[1].censored);
    }

    #[test]
    fn lifetimes_bad_row_reports_line() {
        let csv = "time,censored\n1,0\n2,yes\n";
        match read_lifetimes(csv.as_bytes(), 3.0) {
            Err(CliError::MalformedCsv { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let csv = "time,censored\n1,0\n-4,0\n";
        assert!(matches!(
            read_lifetimes(csv.as_bytes(), 3.0),
            Err(CliError::MalformedCsv { line: 3, .. })
        ));
    }

    #[test]
    fn wrong_header() {
        let csv = "t,c\n1,0\n";
        assert!(matches!(
            read_lifetimes(csv.as_bytes(), 3.0),
            Err(CliError::MalformedCsv { line: 1, .. })
        ));
    }

    #[test]
    fn histories_group_and_sort() {
        let csv = "system_id,event_time\nb,2\na,1\nb,1\nc,\nb,9\n";
        let hs = read_histories(csv.as_bytes(), 2.0).unwrap();
        let ids: Vec<&str> = hs.iter().map(|h| h.system_id()).collect();
        assert_eq!(ids, ["a", "b", "c"]);
        assert_eq!(hs[1].event_times(), &[1.0, 2.0]);
        assert!(hs[2].event_times().is_empty());
    }

    #[test]
    fn histories_duplicate_event() {
        let csv = "system_id,event_time\na,1\na,1\n";
        assert!(matches!(
            read_histories(csv.as_bytes(), 2.0),
            Err(CliError::MalformedCsv { line: 3, .. })
        ));
    }
}
