//! Matrix Market (`.mtx`) reading and writing.
//!
//! Supports the `matrix` object in `coordinate` and `array` formats with
//! `real`, `integer`, `complex` and `pattern` fields and `general`,
//! `symmetric`, `hermitian` and `skew-symmetric` symmetry. Symmetric
//! storage keeps only the stored triangle; [`MatrixMarket::to_csr`] and
//! [`MatrixMarket::to_dense`] expand it.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use super::{CMatrix, CsrMatrix};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MtxFormat {
    Coordinate,
    Array,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MtxField {
    Real,
    Integer,
    Complex,
    Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MtxSymmetry {
    General,
    Symmetric,
    Hermitian,
    SkewSymmetric,
}

/// A matrix as stored in a Matrix Market file (0-based indices).
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixMarket {
    pub rows: usize,
    pub cols: usize,
    pub format: MtxFormat,
    pub field: MtxField,
    pub symmetry: MtxSymmetry,
    pub entries: Vec<(usize, usize, Complex64)>,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

impl MatrixMarket {
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
        let tokens: Vec<String> = header
            .split_whitespace()
            .map(|t| t.to_ascii_lowercase())
            .collect();
        if tokens.len() != 5 || tokens[0] != "%%matrixmarket" {
            return Err(parse_err(
                hline,
                "expected '%%MatrixMarket matrix <format> <field> <symmetry>'",
            ));
        }
        if tokens[1] != "matrix" {
            return Err(parse_err(
                hline,
                format!("unsupported object '{}'", tokens[1]),
            ));
        }
        let format = match tokens[2].as_str() {
            "coordinate" => MtxFormat::Coordinate,
            "array" => MtxFormat::Array,
            other => return Err(parse_err(hline, format!("unknown format '{other}'"))),
        };
        let field = match tokens[3].as_str() {
            "real" | "double" => MtxField::Real,
            "integer" => MtxField::Integer,
            "complex" => MtxField::Complex,
            "pattern" => MtxField::Pattern,
            other => return Err(parse_err(hline, format!("unknown field '{other}'"))),
        };
        let symmetry = match tokens[4].as_str() {
            "general" => MtxSymmetry::General,
            "symmetric" => MtxSymmetry::Symmetric,
            "hermitian" => MtxSymmetry::Hermitian,
            "skew-symmetric" => MtxSymmetry::SkewSymmetric,
            other => return Err(parse_err(hline, format!("unknown symmetry '{other}'"))),
        };
        if format == MtxFormat::Array && field == MtxField::Pattern {
            return Err(parse_err(
                hline,
                "array format cannot use the pattern field",
            ));
        }
        if symmetry == MtxSymmetry::Hermitian && field != MtxField::Complex {
            return Err(parse_err(
                hline,
                "hermitian symmetry requires the complex field",
            ));
        }

        let mut data = lines.filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('%')
        });
        let (sline, size) = data
            .next()
            .ok_or_else(|| parse_err(hline + 1, "missing size line"))?;
        let size: Vec<&str> = size.split_whitespace().collect();
        let num = |s: &str, line: usize| -> Result<usize> {
            s.parse()
                .map_err(|_| parse_err(line, format!("invalid integer '{s}'")))
        };
        let expected_size_tokens = if format == MtxFormat::Coordinate {
            3
        } else {
            2
        };
        if size.len() != expected_size_tokens {
            return Err(parse_err(
                sline,
                format!("size line needs {expected_size_tokens} integers"),
            ));
        }
        let rows = num(size[0], sline)?;
        let cols = num(size[1], sline)?;
        if symmetry != MtxSymmetry::General && rows != cols {
            return Err(parse_err(
                sline,
                "symmetric storage requires a square matrix",
            ));
        }

        let value_tokens = match field {
            MtxField::Pattern => 0,
            MtxField::Complex => 2,
            _ => 1,
        };
        let parse_value = |toks: &[&str], line: usize| -> Result<Complex64> {
            let f = |s: &str| -> Result<f64> {
                s.parse::<f64>()
                    .map_err(|_| parse_err(line, format!("invalid number '{s}'")))
            };
            Ok(match field {
                MtxField::Pattern => Complex64::new(1.0, 0.0),
                MtxField::Complex => Complex64::new(f(toks[0])?, f(toks[1])?),
                MtxField::Integer => {
                    let v: i64 = toks[0]
                        .parse()
                        .map_err(|_| parse_err(line, format!("invalid integer '{}'", toks[0])))?;
                    Complex64::new(v as f64, 0.0)
                }
                MtxField::Real => Complex64::new(f(toks[0])?, 0.0),
            })
        };

        let mut entries = Vec::new();
        match format {
            MtxFormat::Coordinate => {
                let nnz = num(size[2], sline)?;
                entries.reserve(nnz);
                for _ in 0..nnz {
                    let (line, text) = data
                        .next()
                        .ok_or_else(|| parse_err(sline, format!("expected {nnz} entries")))?;
                    let toks: Vec<&str> = text.split_whitespace().collect();
                    if toks.len() != 2 + value_tokens {
                        return Err(parse_err(
                            line,
                            format!("expected {} fields", 2 + value_tokens),
                        ));
                    }
                    let i = num(toks[0], line)?;
                    let j = num(toks[1], line)?;
                    if i == 0 || j == 0 || i > rows || j > cols {
                        return Err(parse_err(
                            line,
                            format!("index ({i}, {j}) outside {rows}x{cols}"),
                        ));
                    }
                    let v = parse_value(&toks[2..], line)?;
                    check_triangle(symmetry, i - 1, j - 1, v, line)?;
                    entries.push((i - 1, j - 1, v));
                }
            }
            MtxFormat::Array => {
                // column-major; symmetric variants list the lower triangle only
                for j in 0..cols {
                    let start = match symmetry {
                        MtxSymmetry::General => 0,
                        MtxSymmetry::SkewSymmetric => j + 1,
                        _ => j,
                    };
                    for i in start..rows {
                        let (line, text) = data
                            .next()
                            .ok_or_else(|| parse_err(sline, "array data ended early"))?;
                        let toks: Vec<&str> = text.split_whitespace().collect();
                        if toks.len() != value_tokens {
                            return Err(parse_err(line, format!("expected {value_tokens} fields")));
                        }
                        let v = parse_value(&toks, line)?;
                        check_triangle(symmetry, i, j, v, line)?;
                        entries.push((i, j, v));
                    }
                }
            }
        }
        if let Some((line, _)) = data.next() {
            return Err(parse_err(line, "unexpected trailing data"));
        }
        Ok(Self {
            rows,
            cols,
            format,
            field,
            symmetry,
            entries,
        })
    }

    /// Expanded CSR matrix.
    pub fn to_csr(&self) -> Result<CsrMatrix> {
        let mut trip = Vec::with_capacity(2 * self.entries.len());
        for &(i, j, v) in &self.entries {
            trip.push((i, j, v));
            if i != j {
                match self.symmetry {
                    MtxSymmetry::General => {}
                    MtxSymmetry::Symmetric => trip.push((j, i, v)),
                    MtxSymmetry::Hermitian => trip.push((j, i, v.conj())),
                    MtxSymmetry::SkewSymmetric => trip.push((j, i, -v)),
                }
            }
        }
        CsrMatrix::from_triplets(self.rows, self.cols, &trip)
    }

    pub fn to_dense(&self) -> Result<CMatrix> {
        Ok(self.to_csr()?.to_dense())
    }

    /// Wrap a CSR matrix as general coordinate storage (real field when every
    /// value is real).
    pub fn from_csr(m: &CsrMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            format: MtxFormat::Coordinate,
            field: if m.is_real() {
                MtxField::Real
            } else {
                MtxField::Complex
            },
            symmetry: MtxSymmetry::General,
            entries: m.triplets().collect(),
        }
    }

    /// Serialize. Values use the shortest representation that parses back
    /// to the identical double.
    pub fn to_string_mtx(&self) -> String {
        let format = match self.format {
            MtxFormat::Coordinate => "coordinate",
            MtxFormat::Array => "array",
        };
        let field = match self.field {
            MtxField::Real => "real",
            MtxField::Integer => "integer",
            MtxField::Complex => "complex",
            MtxField::Pattern => "pattern",
        };
        let symmetry = match self.symmetry {
            MtxSymmetry::General => "general",
            MtxSymmetry::Symmetric => "symmetric",
            MtxSymmetry::Hermitian => "hermitian",
            MtxSymmetry::SkewSymmetric => "skew-symmetric",
        };
        let mut out = format!("%%MatrixMarket matrix {} {} {}\n", format, field, symmetry);
        let value = |v: Complex64| -> String {
            match self.field {
                MtxField::Pattern => String::new(),
                MtxField::Real => format!(" {:e}", v.re),
                MtxField::Integer => format!(" {}", v.re as i64),
                MtxField::Complex => format!(" {:e} {:e}", v.re, v.im),
            }
        };
        match self.format {
            MtxFormat::Coordinate => {
                let _ = writeln!(out, "{} {} {}", self.rows, self.cols, self.entries.len());
                for &(i, j, v) in &self.entries {
                    let _ = writeln!(out, "{} {}{}", i + 1, j + 1, value(v));
                }
            }
            MtxFormat::Array => {
                let _ = writeln!(out, "{} {}", self.rows, self.cols);
                for &(_, _, v) in &self.entries {
                    let _ = writeln!(out, "{}", value(v).trim_start());
                }
            }
        }
        out
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_string_mtx())?;
        Ok(())
    }
}

fn check_triangle(sym: MtxSymmetry, i: usize, j: usize, v: Complex64, line: usize) -> Result<()> {
    match sym {
        MtxSymmetry::General => Ok(()),
        _ if i < j => Err(parse_err(
            line,
            "symmetric storage must list the lower triangle",
        )),
        MtxSymmetry::SkewSymmetric if i == j => {
            Err(parse_err(line, "skew-symmetric diagonal must be absent"))
        }
        MtxSymmetry::Hermitian if i == j && v.im != 0.0 => {
            Err(parse_err(line, "hermitian diagonal must be real"))
        }
        _ => Ok(()),
    }
}

/// Read a Matrix Market file and expand it to CSR.
pub fn load_matrix_market(path: impl AsRef<Path>) -> Result<CsrMatrix> {
    MatrixMarket::read(path)?.to_csr()
}
