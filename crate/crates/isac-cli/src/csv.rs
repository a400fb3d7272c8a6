//! Minimal CSV emission with a fixed numeric format.
//!
//! Floats use 17 significant digits (`{:.16e}`), which round-trips every
//! `f64`; infinities print as `inf`. Lines end in `\n`.

use std::fmt::Write;

pub fn num(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".to_string()
    } else if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// Parses a field written by [`num`].
pub fn parse_num(s: &str) -> Option<f64> {
    match s {
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => s.parse().ok(),
    }
}

#[derive(Debug, Default)]
pub struct CsvWriter {
    out: String,
}

impl CsvWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn comment(&mut self, text: &str) {
        let _ = writeln!(self.out, "# {text}");
    }

    pub fn header(&mut self, cols: &[&str]) {
        self.out.push_str(&cols.join(","));
        self.out.push('\n');
    }

    pub fn row<S: AsRef<str>>(&mut self, fields: &[S]) {
        for (i, f) in fields.iter().enumerate() {
            if i > 0 {
                self.out.push(',');
            }
            self.out.push_str(f.as_ref());
        }
        self.out.push('\n');
    }

    pub fn numbers(&mut self, values: &[f64]) {
        let fields: Vec<String> = values.iter().map(|&v| num(v)).collect();
        self.row(&fields);
    }

    pub fn finish(self) -> String {
        self.out
    }
}
