//! Typed records and their CSV, JSON and schema renderings.

use std::fmt::Write as _;

use serde_json::{json, Map, Value as Json};
use zq_incidence::Rational;

use crate::config::Experiment;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Int,
    Rational,
    Float,
    Bool,
    Text,
}

impl Kind {
    pub fn tag(self) -> &'static str {
        match self {
            Kind::Int => "int",
            Kind::Rational => "rational",
            Kind::Float => "float",
            Kind::Bool => "bool",
            Kind::Text => "text",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Column {
    pub name: &'static str,
    pub kind: Kind,
    pub doc: &'static str,
}

pub const fn col(name: &'static str, kind: Kind, doc: &'static str) -> Column {
    Column { name, kind, doc }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i128),
    Rational(Rational),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl Value {
    fn kind(&self) -> Kind {
        match self {
            Value::Int(_) => Kind::Int,
            Value::Rational(_) => Kind::Rational,
            Value::Float(_) => Kind::Float,
            Value::Bool(_) => Kind::Bool,
            Value::Text(_) => Kind::Text,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        use num_traits::ToPrimitive;
        match self {
            Value::Int(v) => Some(*v as f64),
            Value::Rational(r) => r.to_f64(),
            Value::Float(x) => Some(*x),
            _ => None,
        }
    }
}

/// Floats with 17 significant digits; non-finite values spelled out.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

fn render(v: &Value) -> String {
    match v {
        Value::Int(i) => i.to_string(),
        Value::Rational(r) => {
            if r.is_integer() {
                r.numer().to_string()
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }
        }
        Value::Float(x) => format_float(*x),
        Value::Bool(b) => b.to_string(),
        Value::Text(s) => {
            if s.contains([',', '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.clone()
            }
        }
    }
}

fn to_json(v: &Value) -> Json {
    match v {
        Value::Int(i) => i64::try_from(*i).map_or_else(|_| json!(i.to_string()), |x| json!(x)),
        Value::Float(x) if x.is_finite() => json!(x),
        Value::Bool(b) => json!(b),
        other => json!(render(other).trim_matches('"')),
    }
}

/// One output line, built column by column.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Row {
    cells: Vec<(&'static str, Value)>,
    /// `Some(false)` marks a failed hard check.
    pub hard_ok: Option<bool>,
}

impl Row {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn int(mut self, name: &'static str, v: impl Into<i128>) -> Self {
        self.cells.push((name, Value::Int(v.into())));
        self
    }

    pub fn uint(self, name: &'static str, v: usize) -> Self {
        self.int(name, v as i128)
    }

    pub fn rational(mut self, name: &'static str, v: Rational) -> Self {
        self.cells.push((name, Value::Rational(v)));
        self
    }

    pub fn float(mut self, name: &'static str, v: f64) -> Self {
        self.cells.push((name, Value::Float(v)));
        self
    }

    pub fn boolean(mut self, name: &'static str, v: bool) -> Self {
        self.cells.push((name, Value::Bool(v)));
        self
    }

    pub fn text(mut self, name: &'static str, v: impl Into<String>) -> Self {
        self.cells.push((name, Value::Text(v.into())));
        self
    }

    /// Record a hard check; the row passes only if every check does.
    pub fn check(mut self, ok: bool) -> Self {
        self.hard_ok = Some(self.hard_ok.unwrap_or(true) && ok);
        self
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.cells.iter().find(|c| c.0 == name).map(|c| &c.1)
    }

    pub fn values(&self) -> impl Iterator<Item = &Value> {
        self.cells.iter().map(|c| &c.1)
    }
}

/// All rows of one run, in trial order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub experiment: Experiment,
    pub columns: Vec<Column>,
    pub rows: Vec<Row>,
}

impl Table {
    /// Checks every row against the declared columns.
    pub fn new(experiment: Experiment, columns: Vec<Column>, rows: Vec<Row>) -> Self {
        for (i, r) in rows.iter().enumerate() {
            let names: Vec<&str> = r.cells.iter().map(|c| c.0).collect();
            let expected: Vec<&str> = columns.iter().map(|c| c.name).collect();
            assert_eq!(names, expected, "{experiment} row {i} does not match its columns");
            for (c, (_, v)) in columns.iter().zip(&r.cells) {
                assert_eq!(c.kind, v.kind(), "{experiment} column {} has the wrong type", c.name);
            }
        }
        Self {
            experiment,
            columns,
            rows,
        }
    }

    pub fn hard_failures(&self) -> usize {
        self.rows.iter().filter(|r| r.hard_ok == Some(false)).count()
    }

    pub fn hard_checks(&self) -> usize {
        self.rows.iter().filter(|r| r.hard_ok.is_some()).count()
    }

    /// `(min, median)` of the `slack` column, when there is one.
    pub fn slack_summary(&self) -> Option<(f64, f64)> {
        let mut s: Vec<f64> = self.rows.iter().filter_map(|r| r.get("slack")?.as_f64()).collect();
        if s.is_empty() {
            return None;
        }
        s.sort_by(f64::total_cmp);
        let n = s.len();
        let median = if n % 2 == 1 {
            s[n / 2]
        } else {
            (s[n / 2 - 1] + s[n / 2]) / 2.0
        };
        Some((s[0], median))
    }

    fn summary_fields(&self) -> Vec<(&'static str, String)> {
        let mut f = vec![
            ("records", self.rows.len().to_string()),
            ("hard_checks", self.hard_checks().to_string()),
            ("hard_failures", self.hard_failures().to_string()),
        ];
        if let Some((min, median)) = self.slack_summary() {
            f.push(("min_slack", format_float(min)));
            f.push(("median_slack", format_float(median)));
        }
        f
    }

    /// Header of `name[type]` cells, one line per row, and a trailing
    /// `# summary` comment when there are rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let header: Vec<String> = self
            .columns
            .iter()
            .map(|c| format!("{}[{}]", c.name, c.kind.tag()))
            .collect();
        s.push_str(&header.join(","));
        s.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.values().map(render).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        if !self.rows.is_empty() {
            let fields: Vec<String> = self
                .summary_fields()
                .into_iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            let _ = writeln!(s, "# summary {}", fields.join(" "));
        }
        s
    }

    pub fn to_json(&self) -> String {
        let columns: Vec<Json> = self
            .columns
            .iter()
            .map(|c| json!({"name": c.name, "type": c.kind.tag()}))
            .collect();
        let records: Vec<Json> = self
            .rows
            .iter()
            .map(|r| {
                Json::Object(
                    r.cells
                        .iter()
                        .map(|(k, v)| (k.to_string(), to_json(v)))
                        .collect::<Map<_, _>>(),
                )
            })
            .collect();
        let summary: Map<String, Json> = self
            .summary_fields()
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.parse::<u64>().map_or(json!(v), |n| json!(n))))
            .collect();
        let doc = json!({
            "experiment": self.experiment.name(),
            "columns": columns,
            "records": records,
            "summary": summary,
        });
        let mut out = serde_json::to_string_pretty(&doc).expect("json serialization");
        out.push('\n');
        out
    }

    /// One line per column: `name<TAB>type<TAB>description`.
    pub fn schema(&self) -> String {
        let mut s = format!("# {} columns\n", self.experiment.name());
        for c in &self.columns {
            let _ = writeln!(s, "{}\t{}\t{}", c.name, c.kind.tag(), c.doc);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const COLS: [Column; 3] = [
        col("q", Kind::Int, "modulus"),
        col("main", Kind::Rational, "main term"),
        col("slack", Kind::Float, "ratio"),
    ];

    #[test]
    fn csv_layout() {
        let rows = vec![
            Row::new()
                .int("q", 3)
                .rational("main", Rational::new(7.into(), 2.into()))
                .float("slack", f64::INFINITY)
                .check(true),
            Row::new()
                .int("q", 5)
                .rational("main", Rational::from_integer(4.into()))
                .float("slack", 0.5)
                .check(false),
        ];
        let t = Table::new(Experiment::DotIncidence, COLS.to_vec(), rows);
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "q[int],main[rational],slack[float]");
        assert_eq!(lines[1], "3,7/2,inf");
        assert_eq!(lines[2], "5,4,5.0000000000000000e-1");
        assert!(
            lines[3].starts_with("# summary records=2 hard_checks=2 hard_failures=1 min_slack=5.0000000000000000e-1")
        );
        assert_eq!(t.hard_failures(), 1);
        let json: Json = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(json["records"][0]["slack"], json!("inf"));
        assert_eq!(json["records"][1]["main"], json!("4"));
        assert!(t.schema().contains("main\trational\tmain term"));
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = Table::new(Experiment::Zaremba, COLS.to_vec(), vec![]);
        assert_eq!(t.to_csv(), "q[int],main[rational],slack[float]\n");
    }

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 123456.789e-300, -2.5e17] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    #[should_panic]
    fn mismatched_rows_are_rejected() {
        Table::new(Experiment::Zaremba, COLS.to_vec(), vec![Row::new().int("q", 1)]);
    }
}
