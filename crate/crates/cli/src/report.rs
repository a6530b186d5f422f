//! Tabular reports rendered as CSV or JSON.
//!
//! Numbers are written with 12 significant digits in exponent form, so
//! identical inputs give byte-identical files.

use serde_json::{json, Map, Value as Json};

use crate::config::{OutputFormat, RunConfig};

/// Bumped when the CSV columns of any command change.
pub const CSV_SCHEMA: u32 = 1;
pub const TOOL: &str = "schurdirac";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Missing,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<i32> for Cell {
    fn from(x: i32) -> Self {
        Cell::Int(x.into())
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl From<Option<String>> for Cell {
    fn from(x: Option<String>) -> Self {
        x.map_or(Cell::Missing, Cell::Text)
    }
}

pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.11e}")
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Missing => "nan".into(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Cell::Num(x) if x.is_finite() => {
                let rounded: f64 = format_number(*x).parse().expect("formatted float");
                json!(rounded)
            }
            Cell::Num(_) | Cell::Missing => Json::Null,
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub columns: Vec<&'static str>,
    /// Number of leading columns written to CSV; JSON rows carry all.
    pub csv_width: usize,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(String, Cell)>,
}

impl Report {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            csv_width: columns.len(),
            columns,
            rows: Vec::new(),
            summary: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn push_summary(&mut self, key: impl Into<String>, value: impl Into<Cell>) {
        self.summary.push((key.into(), value.into()));
    }

    pub fn render(&self, cfg: &RunConfig, wall_time: Option<f64>) -> String {
        match cfg.output_format {
            OutputFormat::Csv => self.to_csv(cfg, wall_time),
            OutputFormat::Json => self.to_json(cfg, wall_time),
        }
    }

    pub fn to_csv(&self, cfg: &RunConfig, wall_time: Option<f64>) -> String {
        let mut out = format!(
            "# {} {} csv-schema={} command={}\n",
            TOOL,
            env!("CARGO_PKG_VERSION"),
            CSV_SCHEMA,
            cfg.command
        );
        for (k, v) in cfg.entries() {
            out += &format!("# config {k}={v}\n");
        }
        for (k, v) in &self.summary {
            out += &format!("# {k}={}\n", v.csv());
        }
        if let Some(t) = wall_time {
            out += &format!("# wall_time_s={}\n", format_number(t));
        }
        out += &self.columns[..self.csv_width].join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row[..self.csv_width].iter().map(Cell::csv).collect();
            out += &cells.join(",");
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, cfg: &RunConfig, wall_time: Option<f64>) -> String {
        let config: Map<String, Json> = cfg
            .entries()
            .into_iter()
            .map(|(k, v)| (k.to_string(), json!(v)))
            .collect();
        let mut metadata = Map::new();
        metadata.insert("tool".into(), json!(TOOL));
        metadata.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        metadata.insert("command".into(), json!(cfg.command.name()));
        metadata.insert("config".into(), Json::Object(config));
        if let Some(t) = wall_time {
            metadata.insert("wall_time_s".into(), Cell::Num(t).json());
        }
        let summary: Map<String, Json> = self.summary.iter().map(|(k, v)| (k.clone(), v.json())).collect();
        let rows: Vec<Json> = self
            .rows
            .iter()
            .map(|row| {
                Json::Object(
                    self.columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.to_string(), v.json()))
                        .collect(),
                )
            })
            .collect();
        let doc = json!({
            "metadata": metadata,
            "summary": summary,
            "rows": rows,
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
        text.push('\n');
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn numbers_have_twelve_significant_digits() {
        assert_eq!(format_number(1.0 + 0.75f64.sqrt() - 0.5), "1.36602540378e0");
        assert_eq!(format_number(-2.5e-7), "-2.50000000000e-7");
        assert_eq!(format_number(f64::NAN), "nan");
    }

    #[test]
    fn csv_layout() {
        let cfg = parse_config("command=c2\nnu=0.5\noutput.format=csv").unwrap();
        let mut r = Report::new(vec!["a", "b", "extra"]);
        r.csv_width = 2;
        r.push_row(vec![Cell::Num(1.0), Cell::Missing, Cell::Text("x".into())]);
        r.push_summary("nu_star", Some(1.01));
        let csv = r.to_csv(&cfg, None);
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# schurdirac 0.1.0 csv-schema=1 command=c2"));
        assert!(lines.contains(&"# config nu=0.5"));
        assert!(lines.contains(&"# nu_star=1.01000000000e0"));
        assert_eq!(&lines[lines.len() - 2..], &["a,b", "1.00000000000e0,nan"]);
    }

    #[test]
    fn json_rows_carry_all_columns() {
        let cfg = parse_config("command=c2\nnu=0.5").unwrap();
        let mut r = Report::new(vec!["a", "b"]);
        r.csv_width = 1;
        r.push_row(vec![Cell::Num(1.0 / 3.0), Cell::Missing]);
        let doc: Json = serde_json::from_str(&r.to_json(&cfg, Some(0.25))).unwrap();
        assert_eq!(doc["rows"][0]["a"], json!(0.333333333333));
        assert!(doc["rows"][0]["b"].is_null());
        assert_eq!(doc["metadata"]["config"]["nu"], json!("0.5"));
        assert_eq!(doc["metadata"]["wall_time_s"], json!(0.25));
    }
}
