//! Number formatting and CSV helpers shared by the reports and the CLI.

use std::fs::File;
use std::io::Write;
use std::path::Path;

/// Seventeen significant digits: positional for decimal exponents in
/// `[−5, 16]`, scientific otherwise. Round-trips every finite `f64`.
pub fn format_float(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{v:.16e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..=16).contains(&exp) {
        format!("{:.*}", (16 - exp) as usize, v)
    } else {
        sci
    }
}

/// Writes a CSV file with a header row. Fields are written verbatim.
pub fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(std::io::Error::other)?;
    for r in rows {
        w.write_record(r).map_err(std::io::Error::other)?;
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    File::create(path)?.write_all(&bytes)
}

/// Rows of coordinates followed by one value, formatted for `write_csv`.
pub fn point_rows(points: &[Vec<f64>], values: &[f64]) -> Vec<Vec<String>> {
    points
        .iter()
        .zip(values)
        .map(|(p, v)| {
            let mut row: Vec<String> = p.iter().map(|&c| format_float(c)).collect();
            row.push(format_float(*v));
            row
        })
        .collect()
}

/// `x1, …, xn` header names.
pub fn coordinate_names(prefix: &str, dim: usize) -> Vec<String> {
    if dim == 1 {
        vec![prefix.to_string()]
    } else {
        (1..=dim).map(|i| format!("{prefix}{i}")).collect()
    }
}
