//! Trajectory CSV: header `t_s,re[,im]`, `#` comments, strictly
//! increasing times. The `fid` output columns `re_beta,im_beta` are accepted
//! as aliases so generated curves read back unchanged.

use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};
use crate::params::Trajectory;
use crate::C64;

fn csv_err(line: u64, msg: impl Into<String>) -> Error {
    Error::Csv {
        line,
        msg: msg.into(),
    }
}

fn parse_field(raw: &str, name: &str, line: u64) -> Result<f64> {
    let v: f64 = raw
        .parse()
        .map_err(|_| csv_err(line, format!("{name} is not a number: {raw:?}")))?;
    if !v.is_finite() {
        return Err(csv_err(line, format!("{name} is not finite")));
    }
    Ok(v)
}

pub fn read_trajectory<R: Read>(reader: R, label: &str) -> Result<Trajectory> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let header = rdr
        .headers()
        .map_err(|e| csv_err(e.position().map_or(1, |p| p.line()), e.to_string()))?
        .clone();
    let header_line = rdr.position().line().max(1);
    let cols: Vec<&str> = header.iter().collect();
    let has_im = match cols.as_slice() {
        ["t_s", "re" | "re_beta"] => false,
        ["t_s", "re", "im"] | ["t_s", "re_beta", "im_beta"] => true,
        _ => {
            return Err(csv_err(
                header_line,
                format!("expected header t_s,re[,im], got {}", cols.join(",")),
            ))
        }
    };
    let want = if has_im { 3 } else { 2 };
    let mut times = Vec::new();
    let mut values = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_err(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != want {
            return Err(csv_err(
                line,
                format!("expected {want} fields, got {}", record.len()),
            ));
        }
        let t = parse_field(&record[0], "t_s", line)?;
        let re = parse_field(&record[1], "re", line)?;
        let im = if has_im { parse_field(&record[2], "im", line)? } else { 0.0 };
        if let Some(&prev) = times.last() {
            if t <= prev {
                return Err(csv_err(line, format!("time {t} does not exceed previous {prev}")));
            }
        }
        times.push(t);
        values.push(C64::new(re, im));
    }
    if times.is_empty() {
        return Err(csv_err(header_line, "no data rows"));
    }
    Trajectory::new(times, values, label)
}

pub fn load_trajectory(path: &Path) -> Result<Trajectory> {
    let file = std::fs::File::open(path)?;
    let label = path
        .file_stem()
        .map_or_else(|| "csv".to_string(), |s| s.to_string_lossy().into_owned());
    read_trajectory(std::io::BufReader::new(file), &label)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Trajectory> {
        read_trajectory(text.as_bytes(), "t")
    }

    #[test]
    fn reads_with_and_without_imaginary_column() {
        let a = parse("# comment\nt_s,re,im\n0,1,0.5\n0.1,0.9,-0.25\n").unwrap();
        assert_eq!(a.values()[1], C64::new(0.9, -0.25));
        let b = parse("t_s,re\n0,1\n0.1,0.5\n# trailing\n").unwrap();
        assert_eq!(b.times(), &[0.0, 0.1]);
        assert_eq!(b.values()[1], C64::new(0.5, 0.0));
    }

    #[test]
    fn non_monotone_times_report_line() {
        match parse("t_s,re\n0,1\n0.2,1\n0.1,1\n") {
            Err(Error::Csv { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_rows_report_line() {
        match parse("t_s,re\n0,1\n0.1,abc\n") {
            Err(Error::Csv { line, msg }) => {
                assert_eq!(line, 3);
                assert!(msg.contains("re"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("t_s,re\n0,1,2\n"), Err(Error::Csv { line: 2, .. })));
        assert!(matches!(parse("t_s,re\n0,\"1,5\"\n"), Err(Error::Csv { .. })));
    }

    #[test]
    fn accepts_fid_output_columns() {
        let t = parse("# omega1_radps = 0\nt_s,re_beta,im_beta\n0,1,0\n0.5,0.25,0.125\n").unwrap();
        assert_eq!(t.values()[1], C64::new(0.25, 0.125));
    }

    #[test]
    fn bad_header_or_empty_body() {
        assert!(matches!(parse("time,re\n0,1\n"), Err(Error::Csv { .. })));
        assert!(matches!(parse("t_s,re\n"), Err(Error::Csv { .. })));
    }
}
