//! Dense text matrices: a `rows cols` header line, then one line per row of
//! space-separated values with 17 significant digits.

use std::fmt::Write as _;

use eodabe::{DenseMatrix, Error, Result};

pub fn format_dense(m: &DenseMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|x| format!("{x:.16e}")).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out
}

pub fn parse_dense(text: &str) -> Result<DenseMatrix> {
    let mut tokens = text.split_whitespace();
    let mut dim = |what: &str| -> Result<usize> {
        tokens
            .next()
            .ok_or_else(|| Error::Parse(format!("missing {what}")))?
            .parse()
            .map_err(|_| Error::Parse(format!("bad {what}")))
    };
    let rows = dim("row count")?;
    let cols = dim("column count")?;
    let data = tokens
        .enumerate()
        .map(|(k, t)| match t.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => Err(Error::Parse(format!(
                "entry {k}: {t:?} is not a finite number"
            ))),
        })
        .collect::<Result<Vec<_>>>()?;
    if data.len() != rows * cols {
        return Err(Error::Parse(format!(
            "expected {} entries for {rows}x{cols}, found {}",
            rows * cols,
            data.len()
        )));
    }
    DenseMatrix::from_vec(rows, cols, data)
}
