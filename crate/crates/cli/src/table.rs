//! Numeric tables and their CSV encoding.

use std::fmt::Write as _;

/// Column-labelled rows of reals. Absent values are `None` and print empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn new(name: impl Into<String>, headers: &[&str]) -> Self {
        Self {
            name: name.into(),
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_headers(name: impl Into<String>, headers: Vec<String>) -> Self {
        Self {
            name: name.into(),
            headers,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        self.push_optional(row.into_iter().map(Some).collect());
    }

    pub fn push_optional(&mut self, row: Vec<Option<f64>>) {
        assert_eq!(
            row.len(),
            self.headers.len(),
            "row width for table {}",
            self.name
        );
        self.rows.push(row);
    }

    pub fn column(&self, header: &str) -> Option<Vec<Option<f64>>> {
        let i = self.headers.iter().position(|h| h == header)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// RFC 4180 text with LF line endings and 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = self.headers.iter().map(|h| quote(h)).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                if let Some(v) = v {
                    write!(out, "{}", format_real(*v)).expect("write to string");
                }
            }
            out.push('\n');
        }
        out
    }
}

pub fn format_real(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "NaN".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new("demo", &["kt", "a,b"]);
        t.push(vec![0.1, -2.0]);
        t.push_optional(vec![Some(1.0), None]);
        assert_eq!(
            t.to_csv(),
            "kt,\"a,b\"\n1.0000000000000001e-1,-2.0000000000000000e0\n1.0000000000000000e0,\n"
        );
    }

    #[test]
    fn seventeen_digits_round_trip() {
        let x = std::f64::consts::PI / 7.0;
        assert_eq!(format_real(x).parse::<f64>().unwrap(), x);
    }
}
