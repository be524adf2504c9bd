//! CSV output shared by the command-line tools.

use crate::error::{Error, Result};
use std::io::Write;
use std::path::Path;

/// One CSV field.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Text(String),
    /// Printed with six significant digits.
    Num(f64),
    /// Printed with the shortest representation that round-trips.
    Full(f64),
    /// Printed with a fixed number of decimals.
    Fixed(f64, usize),
    Flag(bool),
    Empty,
}

impl Field {
    pub fn text(s: impl Into<String>) -> Self {
        Field::Text(s.into())
    }

    pub fn opt(v: Option<f64>) -> Self {
        v.map_or(Field::Empty, Field::Num)
    }

    pub fn render(&self) -> String {
        match self {
            Field::Text(s) => s.clone(),
            Field::Num(v) => format_sig(*v, 6),
            Field::Full(v) if v.is_nan() => String::new(),
            Field::Full(v) => format!("{v:?}"),
            Field::Fixed(v, d) if v.is_finite() => format!("{v:.d$}", d = *d),
            Field::Fixed(..) => String::new(),
            Field::Flag(b) => b.to_string(),
            Field::Empty => String::new(),
        }
    }
}

/// Format with `digits` significant digits, trailing zeros trimmed, in
/// the style of C's `%g`.
pub fn format_sig(v: f64, digits: usize) -> String {
    if v.is_nan() {
        return String::new();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Header plus rows, all of the same width.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CsvTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Field>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        CsvTable { headers: headers.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Field>) -> Result<()> {
        if row.len() != self.headers.len() {
            return Err(Error::LengthMismatch { what: "csv row", expected: self.headers.len(), actual: row.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn write_to<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&self.headers).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Field::render)).map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_to(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
    }
}

/// Write to `path`, or to standard output when no path is given.
pub fn emit_csv(table: &CsvTable, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            let file = std::fs::File::create(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            table.write_to(std::io::BufWriter::new(file))
        }
        None => table.write_to(std::io::stdout().lock()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(0.665352123, 6), "0.665352");
        assert_eq!(format_sig(5.70567612, 6), "5.70568");
        assert_eq!(format_sig(100.0, 6), "100");
        assert_eq!(format_sig(-0.000123456789, 6), "-0.000123457");
        assert_eq!(format_sig(1.5e-9, 6), "1.5e-9");
        assert_eq!(format_sig(0.0000532948, 6), "5.32948e-5");
        assert_eq!(format_sig(1234567.0, 6), "1.23457e6");
        assert_eq!(format_sig(999999.7, 6), "1e6");
        assert_eq!(format_sig(0.0, 6), "0");
    }

    #[test]
    fn empty_and_single_row() {
        let mut t = CsvTable::new(["a", "b"]);
        assert_eq!(t.to_csv_string().unwrap(), "a,b\r\n");
        t.push(vec![Field::text("x,y"), Field::Num(0.5)]).unwrap();
        assert_eq!(t.to_csv_string().unwrap(), "a,b\r\n\"x,y\",0.5\r\n");
        assert!(t.push(vec![Field::Empty]).is_err());
    }

    #[test]
    fn full_precision_round_trips() {
        let v = 0.1 + 0.2;
        assert_eq!(Field::Full(v).render().parse::<f64>().unwrap(), v);
        assert_eq!(Field::Fixed(0.665352, 4).render(), "0.6654");
    }
}
