//! Report values and their table, JSON and CSV renderings.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value as Json};
use systole_core::num::to_decimal_string;
use systole_core::pi_scaled::PiScaled;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(PiScaled),
    Enclosure { lo: BigRational, hi: BigRational },
    Int(i64),
    Bool(bool),
    Text(String),
    List(Vec<Value>),
}

impl Value {
    pub fn rational(q: BigRational) -> Self {
        Value::Exact(PiScaled::rational(q))
    }

    pub fn render(&self, approx: Option<usize>) -> String {
        match self {
            Value::Exact(p) => match approx {
                Some(d) => format!("{p} (approx. {})", to_decimal_string(&p.approx_rational(), d)),
                None => p.to_string(),
            },
            Value::Enclosure { lo, hi } => match approx {
                Some(d) => format!("[{lo}, {hi}] (approx. {})", to_decimal_string(&((lo + hi) / BigRational::from_integer(2.into())), d)),
                None => format!("[{lo}, {hi}]"),
            },
            Value::Int(n) => n.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => s.clone(),
            Value::List(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.render(approx)).collect();
                format!("[{}]", parts.join(", "))
            }
        }
    }

    pub fn to_json(&self, approx: Option<usize>) -> Json {
        match self {
            Value::Exact(p) => {
                let mut obj = exact_json(&p.coefficient, p.pi_exponent);
                if let Some(d) = approx {
                    obj["approx"] = json!(to_decimal_string(&p.approx_rational(), d));
                }
                obj
            }
            Value::Enclosure { lo, hi } => json!({ "lo": exact_json(lo, 0), "hi": exact_json(hi, 0) }),
            Value::Int(n) => json!(n),
            Value::Bool(b) => json!(b),
            Value::Text(s) => json!(s),
            Value::List(v) => Json::Array(v.iter().map(|x| x.to_json(approx)).collect()),
        }
    }
}

/// `{numerator, denominator, pi_exponent}` with the integers as decimal strings.
pub fn exact_json(q: &BigRational, pi_exponent: i32) -> Json {
    json!({
        "numerator": q.numer().to_string(),
        "denominator": q.denom().to_string(),
        "pi_exponent": pi_exponent,
    })
}

/// Inverse of [`exact_json`].
pub fn parse_exact_json(v: &Json) -> Option<PiScaled> {
    let field = |k: &str| -> Option<BigInt> {
        match v.get(k)? {
            Json::String(s) => s.parse().ok(),
            Json::Number(n) => n.as_i64().map(BigInt::from),
            _ => None,
        }
    };
    let num = field("numerator")?;
    let den = field("denominator")?;
    if den == BigInt::from(0) {
        return None;
    }
    let k = i32::try_from(v.get("pi_exponent")?.as_i64()?).ok()?;
    Some(PiScaled::new(BigRational::new(num, den), k))
}

/// One result row: ordered named fields.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Record {
    pub fields: Vec<(String, Value)>,
}

impl Record {
    pub fn new() -> Self {
        Record::default()
    }

    pub fn with(mut self, key: &str, v: Value) -> Self {
        self.fields.push((key.to_string(), v));
        self
    }

    pub fn push(&mut self, key: &str, v: Value) {
        self.fields.push((key.to_string(), v));
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}

pub fn render(records: &[Record], format: Format, approx: Option<usize>) -> String {
    match format {
        Format::Table => {
            let mut out = String::new();
            for (i, r) in records.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                let width = r.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in &r.fields {
                    out.push_str(&format!("{k:<width$}  {}\n", v.render(approx)));
                }
            }
            out
        }
        Format::Json => {
            let rows: Vec<Json> = records
                .iter()
                .map(|r| {
                    let mut m = Map::new();
                    for (k, v) in &r.fields {
                        m.insert(k.clone(), v.to_json(approx));
                    }
                    Json::Object(m)
                })
                .collect();
            let doc = if rows.len() == 1 { rows.into_iter().next().unwrap() } else { Json::Array(rows) };
            let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut header: Vec<String> = Vec::new();
            for r in records {
                for (k, _) in &r.fields {
                    if !header.contains(k) {
                        header.push(k.clone());
                    }
                }
            }
            let mut out = header.iter().map(|h| csv_cell(h)).collect::<Vec<_>>().join(",");
            out.push('\n');
            for r in records {
                let row: Vec<String> =
                    header.iter().map(|h| r.get(h).map_or(String::new(), |v| csv_cell(&v.render(approx)))).collect();
                out.push_str(&row.join(","));
                out.push('\n');
            }
            out
        }
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
