//! File formats and deterministic JSON output.
//!
//! Matrices are read either as text (first line `n`, then `n` rows of `n`
//! whitespace-separated numbers) or as JSON `{"n": .., "entries": [[..], ..]}`.
//! Tuples and second fundamental forms are JSON only.
//!
//! Every float written by [`to_json`] uses `{:.16e}`, which is 17 significant
//! digits and round-trips exactly, so identical values always serialize to
//! identical bytes.

use std::io;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::ser::Formatter;

use crate::curvature::SecondFundamentalForm;
use crate::ddvv::SymmetricTuple;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Parses a matrix in either accepted format, choosing JSON when the first
/// non-blank character is `{`.
pub fn parse_matrix(text: &str) -> Result<Matrix> {
    if text.trim_start().starts_with('{') {
        parse_json(text, "matrix")
    } else {
        parse_matrix_text(text)
    }
}

/// Parses the text matrix format, reporting the offending line on error.
pub fn parse_matrix_text(text: &str) -> Result<Matrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line_no, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let n: usize = header
        .parse()
        .map_err(|_| Error::Parse(format!("line {line_no}: expected dimension n, found {header:?}")))?;
    if n == 0 {
        return Err(Error::Parse(format!("line {line_no}: dimension must be positive")));
    }

    let mut data = Vec::with_capacity(n * n);
    for row in 0..n {
        let (line_no, line) = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {n} rows, found {row}")))?;
        let before = data.len();
        for (col, token) in line.split_whitespace().enumerate() {
            let v: f64 = token.parse().map_err(|_| {
                Error::Parse(format!("line {line_no}, column {}: {token:?} is not a number", col + 1))
            })?;
            if !v.is_finite() {
                return Err(Error::Parse(format!("line {line_no}, column {}: non-finite entry", col + 1)));
            }
            data.push(v);
        }
        let found = data.len() - before;
        if found != n {
            return Err(Error::Parse(format!("line {line_no}: expected {n} entries, found {found}")));
        }
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(Error::Parse(format!("line {line_no}: unexpected content after {n} rows")));
    }
    Matrix::from_row_major(n, data)
}

/// Writes the text matrix format.
pub fn matrix_to_text(a: &Matrix) -> String {
    let mut out = format!("{}\n", a.n());
    for row in a.rows() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_tuple(text: &str) -> Result<SymmetricTuple> {
    parse_json(text, "tuple")
}

pub fn parse_form(text: &str) -> Result<SecondFundamentalForm> {
    parse_json(text, "second fundamental form")
}

/// A pair `{"x": matrix, "y": matrix}`.
pub fn parse_pair(text: &str) -> Result<(Matrix, Matrix)> {
    #[derive(serde::Deserialize)]
    struct Pair {
        x: Matrix,
        y: Matrix,
    }
    let p: Pair = parse_json(text, "matrix pair")?;
    p.x.check_same_dim(&p.y)?;
    Ok((p.x, p.y))
}

fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        // serde_json reports (0, 0) for errors raised by our own validation
        if e.line() == 0 {
            Error::Parse(format!("{what}: {e}"))
        } else {
            Error::Parse(format!("{what}: line {}, column {}: {e}", e.line(), e.column()))
        }
    })
}

/// `serde_json` formatter that writes every float as `{:.16e}`.
#[derive(Debug, Default, Clone, Copy)]
pub struct FixedFloatFormatter;

impl Formatter for FixedFloatFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Compact JSON with fixed float formatting and a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloatFormatter);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}
