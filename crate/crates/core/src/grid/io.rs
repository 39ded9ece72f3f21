//! PSGRID v1, a plain-text grid exchange format.
//!
//! ```text
//! PSGRID 1
//! nx <int> np <int>
//! xmin <float> xmax <float>
//! pmin <float> pmax <float>
//! order <float|derived>
//! data
//! <np rows of nx values, row j at fixed p_j ascending, x ascending>
//! ```
//!
//! Header floats use the shortest representation that round-trips; samples
//! are written with 17 significant digits, so reading back reproduces every
//! `f64` bit for bit.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{GridGeometry, Order, ScalarField2D, MIN_SAMPLES};
use crate::error::{Error, PsgridError};
use crate::real::Real;

type ParseResult<T> = std::result::Result<T, PsgridError>;

pub fn write_psgrid<T: Real, W: Write>(field: &ScalarField2D<T>, mut out: W) -> ParseResult<()> {
    let g = field.geometry();
    writeln!(out, "PSGRID 1")?;
    writeln!(out, "nx {} np {}", g.nx(), g.np())?;
    writeln!(out, "xmin {} xmax {}", g.xmin().as_f64(), g.xmax().as_f64())?;
    writeln!(out, "pmin {} pmax {}", g.pmin().as_f64(), g.pmax().as_f64())?;
    match field.order() {
        Order::Distribution(s) => writeln!(out, "order {}", s.as_f64())?,
        Order::Derived => writeln!(out, "order derived")?,
    }
    writeln!(out, "data")?;
    let mut line = String::with_capacity(g.nx() * 24);
    for j in 0..g.np() {
        line.clear();
        for (i, v) in field.row(j).iter().enumerate() {
            if i > 0 {
                line.push(' ');
            }
            use std::fmt::Write as _;
            write!(line, "{:.16e}", v.as_f64()).expect("writing to a String");
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_grid<T: Real>(field: &ScalarField2D<T>, path: impl AsRef<Path>) -> ParseResult<()> {
    write_psgrid(field, BufWriter::new(File::create(path)?))
}

pub fn read_grid<T: Real>(path: impl AsRef<Path>) -> ParseResult<ScalarField2D<T>> {
    read_psgrid(BufReader::new(File::open(path)?))
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    number: usize,
}

impl<R: BufRead> Lines<R> {
    fn next_line(&mut self) -> ParseResult<Option<String>> {
        match self.inner.next() {
            Some(line) => {
                self.number += 1;
                Ok(Some(line?))
            }
            None => Ok(None),
        }
    }

    fn header(&mut self, what: &str) -> ParseResult<String> {
        self.next_line()?.ok_or_else(|| PsgridError::Malformed {
            line: self.number + 1,
            message: format!("unexpected end of file, expected {what}"),
        })
    }
}

fn malformed(line: usize, message: impl Into<String>) -> PsgridError {
    PsgridError::Malformed {
        line,
        message: message.into(),
    }
}

/// Splits `key1 v1 key2 v2` and checks the keys.
fn keyed<'a>(text: &'a str, line: usize, keys: &[&str]) -> ParseResult<Vec<&'a str>> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.len() != 2 * keys.len() || tokens.iter().step_by(2).zip(keys).any(|(t, k)| t != k) {
        return Err(malformed(
            line,
            format!(
                "expected `{}`",
                keys.iter()
                    .map(|k| format!("{k} <value>"))
                    .collect::<Vec<_>>()
                    .join(" ")
            ),
        ));
    }
    Ok(tokens.into_iter().skip(1).step_by(2).collect())
}

fn parse_float(token: &str, line: usize) -> ParseResult<f64> {
    let v: f64 = token
        .parse()
        .map_err(|_| malformed(line, format!("`{token}` is not a number")))?;
    if !v.is_finite() {
        return Err(PsgridError::NonFinite {
            line,
            token: token.to_string(),
        });
    }
    Ok(v)
}

fn parse_count(token: &str, line: usize) -> ParseResult<usize> {
    token
        .parse()
        .map_err(|_| malformed(line, format!("`{token}` is not a sample count")))
}

pub fn read_psgrid<T: Real, R: BufRead>(reader: R) -> ParseResult<ScalarField2D<T>> {
    let mut lines = Lines {
        inner: reader.lines(),
        number: 0,
    };

    let magic = lines.header("`PSGRID 1`")?;
    if magic.trim() != "PSGRID 1" {
        return Err(malformed(1, format!("bad magic `{}`", magic.trim())));
    }

    let text = lines.header("grid size")?;
    let dims = keyed(&text, 2, &["nx", "np"])?;
    let (nx, np) = (parse_count(dims[0], 2)?, parse_count(dims[1], 2)?);
    if nx < MIN_SAMPLES || np < MIN_SAMPLES {
        return Err(PsgridError::GridTooSmall { line: 2, nx, np });
    }

    let text = lines.header("x range")?;
    let xr = keyed(&text, 3, &["xmin", "xmax"])?;
    let (xmin, xmax) = (parse_float(xr[0], 3)?, parse_float(xr[1], 3)?);

    let text = lines.header("p range")?;
    let pr = keyed(&text, 4, &["pmin", "pmax"])?;
    let (pmin, pmax) = (parse_float(pr[0], 4)?, parse_float(pr[1], 4)?);

    let text = lines.header("order")?;
    let order = match keyed(&text, 5, &["order"])?[0] {
        "derived" => Order::Derived,
        token => Order::Distribution(T::lit(parse_float(token, 5)?)),
    };

    let text = lines.header("`data`")?;
    if text.trim() != "data" {
        return Err(malformed(6, "expected `data`"));
    }

    let geometry = GridGeometry::new(
        nx,
        np,
        T::lit(xmin),
        T::lit(xmax),
        T::lit(pmin),
        T::lit(pmax),
    )
    .map_err(|e| malformed(3, e.to_string()))?;

    let expected = nx * np;
    let mut values = Vec::with_capacity(expected);
    for _ in 0..np {
        let Some(row) = lines.next_line()? else {
            return Err(PsgridError::DimensionMismatch {
                line: lines.number + 1,
                expected,
                found: values.len(),
            });
        };
        let before = values.len();
        for token in row.split_whitespace() {
            values.push(T::lit(parse_float(token, lines.number)?));
        }
        let found = values.len() - before;
        if found != nx {
            return Err(PsgridError::RowLength {
                line: lines.number,
                expected: nx,
                found,
            });
        }
    }
    while let Some(extra) = lines.next_line()? {
        if !extra.trim().is_empty() {
            return Err(malformed(lines.number, "trailing data after the last row"));
        }
    }

    ScalarField2D::new(geometry, order, values).map_err(|e| match e {
        Error::NonFinite { index } => PsgridError::NonFinite {
            line: 7 + index / nx,
            token: "overflow".into(),
        },
        other => malformed(5, other.to_string()),
    })
}
