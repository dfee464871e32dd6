//! Tabular reports rendered as CSV (default) or JSON.
//!
//! Every table carries a `provenance` column naming the operation that
//! produced its numbers, and every report echoes the resolved flags in its
//! header. The only line that differs between identical runs is the
//! `generated` timestamp; [`comparable`] also blanks the `seconds` columns.

use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i128),
    Float(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => match i64::try_from(*v) {
                Ok(x) => json!(x),
                Err(_) => match u64::try_from(*v) {
                    Ok(x) => json!(x),
                    Err(_) => json!(v.to_string()),
                },
            },
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(v) => json!(v.to_string()),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Empty => Value::Null,
        }
    }
}

macro_rules! int_cell {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(v: $t) -> Self {
                Cell::Int(v as i128)
            }
        }
    )*};
}
int_cell!(u8, u32, u64, usize, i32, i64);

impl From<u128> for Cell {
    fn from(v: u128) -> Self {
        i128::try_from(v).map_or_else(|_| Cell::Text(v.to_string()), Cell::Int)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    /// A table whose last column is `provenance`.
    pub fn new(name: &str, columns: &[&str]) -> Self {
        let mut columns: Vec<String> = columns.iter().map(|c| c.to_string()).collect();
        columns.push("provenance".into());
        Self {
            name: name.into(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, provenance: &str, mut row: Vec<Cell>) {
        assert_eq!(row.len() + 1, self.columns.len(), "row width for table {}", self.name);
        row.push(Cell::Text(provenance.into()));
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub command: String,
    pub flags: Vec<(String, String)>,
    pub notes: Vec<String>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(command: &str, flags: Vec<(String, String)>) -> Self {
        Self {
            command: command.into(),
            flags,
            ..Default::default()
        }
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn to_csv(&self, generated: &str) -> String {
        let mut out = String::new();
        out.push_str(&format!("# waring {}\n", self.command));
        out.push_str(&format!("# generated: {generated}\n"));
        let flags: Vec<String> = self.flags.iter().map(|(k, v)| format!("{k}={v}")).collect();
        out.push_str(&format!("# flags: {}\n", flags.join(" ")));
        for note in &self.notes {
            out.push_str(&format!("# note: {note}\n"));
        }
        for table in &self.tables {
            out.push_str(&format!("\n# table: {}\n", table.name));
            let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
            w.write_record(&table.columns).expect("in-memory write");
            for row in &table.rows {
                w.write_record(row.iter().map(Cell::csv)).expect("in-memory write");
            }
            out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf-8"));
        }
        out
    }

    pub fn to_json(&self, generated: &str) -> String {
        let flags: Map<String, Value> = self.flags.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let tables: Map<String, Value> = self
            .tables
            .iter()
            .map(|t| {
                let rows: Vec<Value> = t
                    .rows
                    .iter()
                    .map(|r| {
                        Value::Object(t.columns.iter().cloned().zip(r.iter().map(Cell::json)).collect())
                    })
                    .collect();
                (t.name.clone(), Value::Array(rows))
            })
            .collect();
        let doc = json!({
            "command": self.command,
            "generated": generated,
            "flags": flags,
            "notes": self.notes,
            "tables": tables,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("serialisable");
        s.push('\n');
        s
    }
}

/// Text of a rendered report with the timestamp line removed and every
/// `seconds` cell blanked, for byte comparison between runs.
pub fn comparable(text: &str) -> String {
    let mut out = Vec::new();
    let mut seconds_col: Option<usize> = None;
    let mut expect_header = false;
    for line in text.lines() {
        if line.starts_with("# generated:") || line.trim_start().starts_with("\"generated\":") {
            continue;
        }
        if line.trim_start().starts_with("\"seconds\":") {
            continue;
        }
        if line.starts_with("# table:") {
            expect_header = true;
            seconds_col = None;
            out.push(line.to_string());
            continue;
        }
        if expect_header {
            expect_header = false;
            seconds_col = split_csv(line).iter().position(|c| c == "seconds");
            out.push(line.to_string());
            continue;
        }
        match seconds_col {
            Some(i) if !line.is_empty() && !line.starts_with('#') => {
                let mut cells = split_csv(line);
                if i < cells.len() {
                    cells[i].clear();
                }
                out.push(cells.join("\u{1f}"));
            }
            _ => out.push(line.to_string()),
        }
    }
    out.join("\n")
}

fn split_csv(line: &str) -> Vec<String> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(line.as_bytes());
    r.records()
        .next()
        .and_then(|rec| rec.ok())
        .map(|rec| rec.iter().map(str::to_string).collect())
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(seconds: f64) -> Report {
        let mut r = Report::new("count", vec![("k".into(), "3".into())]);
        let mut t = Table::new("counts", &["k", "S", "seconds"]);
        t.push("aux_count::s_count", vec![3u32.into(), 15u128.into(), seconds.into()]);
        r.tables.push(t);
        r
    }

    #[test]
    fn csv_layout() {
        let text = sample(0.5).to_csv("T");
        assert!(text.contains("# flags: k=3\n"));
        assert!(text.contains("k,S,seconds,provenance\n3,15,0.5,aux_count::s_count\n"));
    }

    #[test]
    fn comparison_ignores_time() {
        let a = sample(0.5).to_csv("one");
        let b = sample(0.25).to_csv("two");
        assert_ne!(a, b);
        assert_eq!(comparable(&a), comparable(&b));
        let a = sample(0.5).to_json("one");
        let b = sample(0.25).to_json("two");
        assert_eq!(comparable(&a), comparable(&b));
        assert_ne!(comparable(&sample(0.5).to_csv("x")), comparable(&sample(0.5).to_json("x")));
    }

    #[test]
    fn json_cells() {
        let text = sample(0.5).to_json("T");
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["tables"]["counts"][0]["S"], json!(15));
        assert_eq!(v["tables"]["counts"][0]["provenance"], json!("aux_count::s_count"));
    }
}
