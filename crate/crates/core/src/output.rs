//! CSV output.
//!
//! Every file starts with `#` lines: the tool version, the schema name and
//! the effective configuration, one `key = value` per line. A header row
//! and the data follow. Floats use 17 significant digits.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    Float,
    Count,
    /// A positive integer, `aperiodic`, or `none`.
    Period,
    Label,
    Flag,
}

use ColumnKind::*;

#[derive(Debug)]
pub struct Schema {
    pub name: &'static str,
    pub columns: &'static [(&'static str, ColumnKind)],
}

pub const SCHEMAS: &[Schema] = &[
    Schema {
        name: "simulate",
        columns: &[("t", Count), ("E", Float)],
    },
    Schema {
        name: "simulate-2d",
        columns: &[("t", Count), ("E", Float), ("lambda", Float)],
    },
    Schema {
        name: "bifurcate",
        columns: &[
            ("param_value", Float),
            ("sample_index", Count),
            ("state_value", Float),
            ("lyapunov", Float),
            ("period", Period),
            ("status", Label),
        ],
    },
    Schema {
        name: "bifurcate-2d",
        columns: &[
            ("param_value", Float),
            ("sample_index", Count),
            ("state_value", Float),
            ("lambda", Float),
            ("lyapunov", Float),
            ("period", Period),
            ("status", Label),
        ],
    },
    Schema {
        name: "cobweb-curve",
        columns: &[("E", Float), ("gamma_E", Float)],
    },
    Schema {
        name: "cobweb-staircase",
        columns: &[("seq", Count), ("x", Float), ("y", Float)],
    },
    Schema {
        name: "fixed-points",
        columns: &[
            ("E_star", Float),
            ("gamma_prime", Float),
            ("class", Label),
            ("regime", Label),
        ],
    },
    Schema {
        name: "fixed-points-2d",
        columns: &[
            ("E_star", Float),
            ("lambda_star", Float),
            ("gamma_prime", Float),
            ("class", Label),
            ("regime", Label),
        ],
    },
    Schema {
        name: "absorbing-interval",
        columns: &[
            ("lambda", Float),
            ("E_c", Float),
            ("E_min", Float),
            ("E_max", Float),
            ("unimodal", Flag),
        ],
    },
    Schema {
        name: "stability",
        columns: &[
            ("E_star", Float),
            ("lambda_star", Float),
            ("gamma_e", Float),
            ("gamma_lambda", Float),
            ("v_e", Float),
            ("v_lambda", Float),
            ("trace", Float),
            ("det", Float),
            ("schur_1", Float),
            ("schur_2", Float),
            ("schur_3", Float),
            ("stable", Flag),
            ("spectral_radius", Float),
            ("nearest_bifurcation", Label),
            ("bifurcation_residual", Float),
            ("status", Label),
        ],
    },
    Schema {
        name: "mu-threshold",
        columns: &[
            ("E_star", Float),
            ("lambda_star", Float),
            ("mu", Float),
            ("stable", Flag),
            ("g_star", Float),
            ("h_star", Float),
            ("g_hat", Float),
            ("h_hat", Float),
            ("mu_bar_at_point", Float),
            ("mu_bar_conservative", Float),
            ("status", Label),
        ],
    },
    Schema {
        name: "comparative-statics",
        columns: &[
            ("kappa", Float),
            ("E_star", Float),
            ("gamma_e", Float),
            ("gamma_kappa", Float),
            ("gamma_kappa_via_premium", Float),
            ("dE_dkappa", Float),
            ("status", Label),
        ],
    },
];

pub fn schema(name: &str) -> Option<&'static Schema> {
    SCHEMAS.iter().find(|s| s.name == name)
}

pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn flag(b: bool) -> String {
    b.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputFile {
    pub name: String,
    pub contents: String,
}

/// Rows for one schema, rendered on demand.
#[derive(Debug)]
pub struct Table {
    pub schema: &'static Schema,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(schema_name: &str) -> Self {
        Table {
            schema: schema(schema_name).unwrap_or_else(|| panic!("no schema `{schema_name}`")),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.schema.columns.len(), "row width for {}", self.schema.name);
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self, effective: &[(String, String)]) -> String {
        let mut out = format!(
            "# edudyn {}\n# schema = {}\n",
            env!("CARGO_PKG_VERSION"),
            self.schema.name
        );
        for (k, v) in effective {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.schema.columns.iter().map(|c| c.0))
            .expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        let body = w.into_inner().expect("in-memory write");
        out.push_str(std::str::from_utf8(&body).expect("utf-8 fields"));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct OutputError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidatedFile {
    pub schema: &'static str,
    pub rows: usize,
    pub config: Vec<(String, String)>,
}

fn bad(line: usize, message: impl Into<String>) -> OutputError {
    OutputError {
        line,
        message: message.into(),
    }
}

fn check_cell(kind: ColumnKind, v: &str) -> bool {
    match kind {
        Float => v.parse::<f64>().is_ok(),
        Count => v.parse::<u64>().is_ok(),
        Period => v == "aperiodic" || v == "none" || v.parse::<u32>().is_ok_and(|p| p >= 1),
        Label => !v.is_empty() && !v.contains(char::is_whitespace),
        Flag => v == "true" || v == "false",
    }
}

/// Re-parses a file written by [`Table::render`].
pub fn validate_csv(text: &str) -> Result<ValidatedFile, OutputError> {
    let mut lines = text.lines().enumerate();
    let version = lines.next().map(|(_, l)| l).unwrap_or("");
    if !version.starts_with("# edudyn ") {
        return Err(bad(1, "missing version line"));
    }
    let (_, schema_line) = lines.next().ok_or_else(|| bad(2, "missing schema line"))?;
    let name = schema_line
        .strip_prefix("# schema = ")
        .ok_or_else(|| bad(2, "missing schema line"))?;
    let schema = schema(name).ok_or_else(|| bad(2, format!("unknown schema `{name}`")))?;

    let mut config = Vec::new();
    let mut header_line = 0;
    for (i, l) in lines {
        match l.strip_prefix("# ") {
            Some(kv) => {
                let (k, v) = kv
                    .split_once(" = ")
                    .ok_or_else(|| bad(i + 1, "malformed config echo"))?;
                config.push((k.to_string(), v.to_string()));
            }
            None => {
                header_line = i + 1;
                break;
            }
        }
    }
    if header_line == 0 {
        return Err(bad(text.lines().count() + 1, "missing header row"));
    }

    let body: String = text
        .lines()
        .skip(header_line - 1)
        .map(|l| format!("{l}\n"))
        .collect();
    let mut reader = csv::ReaderBuilder::new().from_reader(body.as_bytes());
    let headers = reader.headers().map_err(|e| bad(header_line, e.to_string()))?;
    let expected: Vec<&str> = schema.columns.iter().map(|c| c.0).collect();
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(bad(header_line, format!("header does not match schema `{name}`")));
    }
    let mut rows = 0;
    for (k, rec) in reader.records().enumerate() {
        let line = header_line + 1 + k;
        let rec = rec.map_err(|e| bad(line, e.to_string()))?;
        for ((col, kind), v) in schema.columns.iter().zip(rec.iter()) {
            if !check_cell(*kind, v) {
                return Err(bad(line, format!("bad value `{v}` in column `{col}`")));
            }
        }
        rows += 1;
    }
    Ok(ValidatedFile {
        schema: schema.name,
        rows,
        config,
    })
}
