//! CSV tables: gauge time series and 1D cuts.

use std::fmt::Write as _;
use std::path::Path;

use crate::drivers::CutRow;
use crate::solver::GaugeSeries;

/// Header `t,<gauge names>`, then one row per sample.
pub fn gauges_csv_string(series: &GaugeSeries) -> String {
    let mut s = String::from("t");
    for n in &series.names {
        s.push(',');
        s.push_str(n);
    }
    s.push('\n');
    for (t, row) in series.times.iter().zip(&series.values) {
        let _ = write!(s, "{t:?}");
        for v in row {
            let _ = write!(s, ",{v:?}");
        }
        s.push('\n');
    }
    s
}

pub fn write_gauges_csv(series: &GaugeSeries, path: &Path) -> std::io::Result<()> {
    std::fs::write(path, gauges_csv_string(series))
}

/// Columns `x,h,u,h_exact,u_exact`; exact columns are empty where undefined.
pub fn cut_csv_string(rows: &[CutRow]) -> String {
    let mut s = String::from("x,h,u,h_exact,u_exact\n");
    let opt = |v: Option<f64>| v.map_or(String::new(), |v| format!("{v:?}"));
    for r in rows {
        let _ = writeln!(s, "{:?},{:?},{:?},{},{}", r.x, r.h, r.u, opt(r.h_exact), opt(r.u_exact));
    }
    s
}

pub fn write_cut_csv(rows: &[CutRow], path: &Path) -> std::io::Result<()> {
    std::fs::write(path, cut_csv_string(rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_series_is_header_only() {
        let g = GaugeSeries {
            names: vec!["a".into(), "b".into()],
            ..Default::default()
        };
        assert_eq!(gauges_csv_string(&g), "t,a,b\n");
    }

    #[test]
    fn rows_match_buffer() {
        let g = GaugeSeries {
            names: vec!["g".into()],
            vertices: vec![0],
            times: vec![0.0, 0.5],
            values: vec![vec![1.0], vec![0.1 + 0.2]],
        };
        let text = gauges_csv_string(&g);
        let parsed: Vec<(f64, f64)> = text
            .lines()
            .skip(1)
            .map(|l| {
                let (a, b) = l.split_once(',').unwrap();
                (a.parse().unwrap(), b.parse().unwrap())
            })
            .collect();
        assert_eq!(parsed, vec![(0.0, 1.0), (0.5, 0.1 + 0.2)]);
    }

    #[test]
    fn cut_leaves_missing_exact_empty() {
        let row = CutRow {
            x: 0.5,
            h: 1.0,
            eta: 1.0,
            u: 0.0,
            h_exact: None,
            u_exact: Some(2.0),
        };
        assert_eq!(cut_csv_string(&[row]), "x,h,u,h_exact,u_exact\n0.5,1.0,0.0,,2.0\n");
    }
}
