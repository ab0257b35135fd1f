//! Minimal CSV assembly with RFC-4180-style quoting and `#` comment lines.
//!
//! All numbers are written with `{:?}`, which always uses `.` as the decimal
//! separator, never inserts grouping separators, and round-trips every f64
//! (printing `inf` for the symbolic-infinite burst rates).

/// In-memory CSV document.
#[derive(Default)]
pub struct Csv {
    buf: String,
}

/// Quotes one field when it contains a comma, quote, or line break.
fn quote(field: &str) -> String {
    if field.contains(['"', ',', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// One f64 as a CSV field.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

impl Csv {
    pub fn new() -> Self {
        Csv::default()
    }

    /// A `# `-prefixed comment line (not part of the tabular data).
    pub fn comment(&mut self, text: &str) {
        self.buf.push_str("# ");
        self.buf.push_str(text);
        self.buf.push('\n');
    }

    /// One data row.
    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut first = true;
        for f in fields {
            if !first {
                self.buf.push(',');
            }
            first = false;
            self.buf.push_str(&quote(f.as_ref()));
        }
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}
