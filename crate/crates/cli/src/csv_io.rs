//! Fixed-layout CSV for observable series.

use atomlaser::{ObservableRow, ObservableSeries, PathTag};
use num_complex::Complex64;

pub const HEADER: [&str; 11] = [
    "t", "re_a", "im_a", "n", "nn", "re_a2", "im_a2", "Q", "S1", "S2", "path",
];

/// `{:.16e}` keeps 17 significant digits, enough to round-trip any f64.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// One CSV document holding every series, one row per grid point, tagged by
/// the `path` column.
pub fn emit_csv(series: &[ObservableSeries]) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(HEADER).expect("write to memory");
    for s in series {
        for r in &s.rows {
            w.write_record([
                num(r.t),
                num(r.a.re),
                num(r.a.im),
                num(r.n),
                num(r.nn),
                num(r.a2.re),
                num(r.a2.im),
                r.q.map(num).unwrap_or_default(),
                num(r.s1),
                num(r.s2),
                s.path.as_str().to_string(),
            ])
            .expect("write to memory");
        }
    }
    w.into_inner().expect("flush to memory")
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub path: PathTag,
    pub row: ObservableRow,
}

#[derive(Debug, thiserror::Error)]
pub enum CsvReadError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("line {line}: {message}")]
    Field { line: u64, message: String },
}

/// Reads back a document written by [`emit_csv`].
pub fn parse_csv(bytes: &[u8]) -> Result<Vec<CsvRow>, CsvReadError> {
    let mut r = csv::Reader::from_reader(bytes);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != HEADER {
        return Err(CsvReadError::Field {
            line: 1,
            message: format!("unexpected header {header:?}"),
        });
    }
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let err = |message: String| CsvReadError::Field { line, message };
        let f = |i: usize| -> Result<f64, CsvReadError> {
            rec[i]
                .parse::<f64>()
                .map_err(|e| err(format!("column {}: {e}", HEADER[i])))
        };
        let q = if rec[7].is_empty() { None } else { Some(f(7)?) };
        let path = match &rec[10] {
            "closed_form" => PathTag::ClosedForm,
            "oracle" => PathTag::Oracle,
            "exact" => PathTag::Exact,
            other => return Err(err(format!("unknown path `{other}`"))),
        };
        out.push(CsvRow {
            path,
            row: ObservableRow {
                t: f(0)?,
                a: Complex64::new(f(1)?, f(2)?),
                n: f(3)?,
                nn: f(4)?,
                a2: Complex64::new(f(5)?, f(6)?),
                q,
                s1: f(8)?,
                s2: f(9)?,
            },
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use atomlaser::closed_form::evaluate_series;
    use atomlaser::{AtomLaser, DeformationParams, FidelityOptions, LaserParams, TimeGrid};

    fn fig1a() -> AtomLaser {
        AtomLaser::new(
            DeformationParams::new(0.2).unwrap(),
            LaserParams {
                omega: 1.0,
                coupling: 0.1,
                n_c: 1e5,
                alpha_mag: 0.5,
                theta: 0.0,
            },
        )
        .unwrap()
    }

    #[test]
    fn three_samples_four_lines() {
        let s = evaluate_series(
            &TimeGrid::new(0.0, 1.0, 3).unwrap(),
            &fig1a(),
            &FidelityOptions::default(),
        );
        let bytes = emit_csv(&[s]);
        let text = String::from_utf8(bytes).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(!text.contains('\r'));
        assert!(text.ends_with('\n'));
        assert_eq!(
            text.lines().next().unwrap(),
            "t,re_a,im_a,n,nn,re_a2,im_a2,Q,S1,S2,path"
        );
    }

    #[test]
    fn undefined_q_is_empty_field() {
        let mut m = fig1a();
        m.las.alpha_mag = 0.0;
        let s = evaluate_series(
            &TimeGrid::new(0.0, 1.0, 2).unwrap(),
            &m,
            &FidelityOptions::default(),
        );
        let text = String::from_utf8(emit_csv(&[s])).unwrap();
        let row = text.lines().nth(1).unwrap();
        assert_eq!(row.split(',').nth(7), Some(""));
        assert_eq!(parse_csv(text.as_bytes()).unwrap()[0].row.q, None);
    }
}
