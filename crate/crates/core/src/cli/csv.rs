//! Deterministic CSV: `{:.16e}` numbers, LF endings, a trailing `flag` column.

use num_complex::Complex64;

/// Row status written in the `flag` column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Flag {
    Ok,
    Singular,
    NoConv,
}

impl Flag {
    pub fn as_str(self) -> &'static str {
        match self {
            Flag::Ok => "ok",
            Flag::Singular => "singular",
            Flag::NoConv => "noconv",
        }
    }
}

/// Scientific notation with 17 significant digits; `-0` prints as `0`.
pub fn format_number(v: f64) -> String {
    format!("{:.16e}", v + 0.0)
}

/// A row under construction. Non-finite numbers become empty cells and mark
/// the row `singular`, so no bare `NaN` reaches the output.
#[derive(Debug, Clone)]
pub struct Row {
    cells: Vec<String>,
    flag: Flag,
}

impl Default for Row {
    fn default() -> Self {
        Self { cells: Vec::new(), flag: Flag::Ok }
    }
}

impl Row {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num(mut self, v: f64) -> Self {
        if v.is_finite() {
            self.cells.push(format_number(v));
        } else {
            self.cells.push(String::new());
            self.flag = self.flag.max(Flag::Singular);
        }
        self
    }

    pub fn complex(self, z: Complex64) -> Self {
        self.num(z.re).num(z.im)
    }

    /// `n` empty cells for values that do not exist in this row.
    pub fn blank(mut self, n: usize) -> Self {
        self.cells.extend(std::iter::repeat_n(String::new(), n));
        self
    }

    pub fn flag(mut self, flag: Flag) -> Self {
        self.flag = self.flag.max(flag);
        self
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Row>,
}

impl Table {
    /// `columns` excludes the `flag` column, which is appended.
    pub fn new(columns: &[&str]) -> Self {
        let mut header: Vec<String> = columns.iter().map(|c| c.to_string()).collect();
        header.push("flag".into());
        Self { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Row) {
        assert_eq!(row.cells.len() + 1, self.header.len(), "row width must match the header");
        self.rows.push(row);
    }

    /// Worst flag over all rows.
    pub fn worst_flag(&self) -> Flag {
        self.rows.iter().map(|r| r.flag).max().unwrap_or(Flag::Ok)
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for cell in &row.cells {
                out.push_str(cell);
                out.push(',');
            }
            out.push_str(row.flag.as_str());
            out.push('\n');
        }
        out
    }
}
