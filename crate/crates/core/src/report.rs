//! Output formatting shared by the CLI and the golden checks: the 4-decimal
//! rounding policy, CSV emission (RFC-style quoting, LF endings, header row),
//! and deterministic JSON.

use std::io::Write;

/// Round half away from zero at the fourth decimal.
pub fn round_4dp(x: f64) -> f64 {
    (x * 10_000.0).round() / 10_000.0
}

pub fn format_4dp(x: f64) -> String {
    format!("{:.4}", round_4dp(x))
}

pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Header plus rows, each already stringified, LF endings.
pub fn write_csv<W: Write>(
    out: &mut W,
    header: &[&str],
    rows: &[Vec<String>],
) -> std::io::Result<()> {
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        let line: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn csv_to_string(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, header, rows).expect("in-memory write");
    String::from_utf8(buf).expect("utf8")
}
