//! Output documents: JSON with 17 significant digits, CSV with 12.

use std::io;

use serde::Serialize;

use crate::diffop::ExpansionTerm;
use crate::error::Result;
use crate::experiments::ExperimentReport;
use crate::moments::CentralMomentSplit;
use crate::operator::EvalResult;

/// JSON formatter writing every float as `d.ddddddddddddddddde±x` (17 significant digits).
#[derive(Debug, Default, Clone, Copy)]
pub struct SignificantDigits;

impl serde_json::ser::Formatter for SignificantDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Serializes `value` as one line of JSON; non-finite floats become `null`.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SignificantDigits);
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) if v.is_nan() => "nan".into(),
            Cell::Num(v) if v.is_infinite() => if *v > 0.0 { "inf".into() } else { "-inf".into() },
            Cell::Num(v) => format!("{v:.11e}"),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

/// A flat table rendered as CSV with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io_err = |e: csv::Error| crate::Error::Domain(format!("csv output: {e}"));
        w.write_record(&self.headers).map_err(io_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(io_err)?;
        }
        let bytes = w.into_inner().map_err(|e| crate::Error::Domain(format!("csv output: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv of UTF-8 cells is UTF-8"))
    }
}

pub fn eval_table(r: &EvalResult) -> Table {
    Table {
        headers: vec!["value", "truncation_error_bound", "terms_used"],
        rows: vec![vec![Cell::Num(r.value), Cell::Num(r.truncation_error_bound), Cell::Int(r.terms_used as i64)]],
    }
}

pub fn central_moment_table(c: &CentralMomentSplit) -> Table {
    Table {
        headers: vec!["main", "tail", "total"],
        rows: vec![vec![Cell::Num(c.main), Cell::Num(c.tail), Cell::Num(c.total)]],
    }
}

pub fn expansion_table(terms: &[ExpansionTerm]) -> Table {
    Table {
        headers: vec!["order", "derivative_order", "value"],
        rows: terms
            .iter()
            .map(|t| vec![Cell::Int(t.order as i64), Cell::Int(t.derivative_order as i64), Cell::Num(t.value)])
            .collect(),
    }
}

pub fn report_table(report: &ExperimentReport) -> Table {
    Table {
        headers: vec!["n", "value", "reference", "error", "bound"],
        rows: report
            .rows
            .iter()
            .map(|r| {
                vec![
                    Cell::Num(r.n),
                    Cell::Num(r.value),
                    Cell::Num(r.reference),
                    Cell::Num(r.error),
                    r.bound.map_or(Cell::Empty, Cell::Num),
                ]
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_uses_seventeen_digits() {
        #[derive(Serialize)]
        struct P {
            b: f64,
            a: f64,
            c: Option<f64>,
        }
        let s = to_json(&P { b: 2.0, a: 0.1, c: None });
        assert_eq!(s, "{\"b\":2.0000000000000000e0,\"a\":1.0000000000000001e-1,\"c\":null}\n");
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["a"].as_f64(), Some(0.1));
        assert_eq!(to_json(&f64::NAN), "null\n");
    }

    #[test]
    fn csv_uses_twelve_digits() {
        let t = Table {
            headers: vec!["x", "label", "gap"],
            rows: vec![vec![Cell::Num(1.0 / 3.0), Cell::Text("a,b".into()), Cell::Empty]],
        };
        assert_eq!(t.to_csv().unwrap(), "x,label,gap\n3.33333333333e-1,\"a,b\",\n");
    }
}
