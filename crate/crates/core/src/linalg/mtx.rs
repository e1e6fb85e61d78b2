//! Matrix Market reader for square real symmetric matrices.

use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::dense::DenseMatrix;
use crate::linalg::operator::SymmetricOperator;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    Coordinate,
    Array,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    Symmetric,
    General,
}

pub fn load_matrix_market(path: impl AsRef<Path>) -> Result<SymmetricOperator> {
    let text = std::fs::read_to_string(path)?;
    parse_matrix_market(&text)
}

pub fn parse_matrix_market(text: &str) -> Result<SymmetricOperator> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (hline, header) = lines.next().ok_or(Error::Malformed {
        line: 1,
        message: "empty file".into(),
    })?;
    let (layout, symmetry) = parse_header(hline, header)?;

    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (sline, size) = body.next().ok_or(Error::Malformed {
        line: hline + 1,
        message: "missing size line".into(),
    })?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Malformed {
            line: sline,
            message: format!("bad size line: {e}"),
        })?;
    let expected = if layout == Layout::Coordinate { 3 } else { 2 };
    if dims.len() != expected {
        return Err(Error::Malformed {
            line: sline,
            message: format!("size line needs {expected} integers"),
        });
    }
    let (rows, cols) = (dims[0], dims[1]);
    if rows != cols {
        return Err(Error::Structural(format!("matrix is {rows}x{cols}, not square")));
    }
    if rows == 0 {
        return Err(Error::Structural("matrix has dimension 0".into()));
    }
    let n = rows;

    match layout {
        Layout::Coordinate => {
            let nnz = dims[2];
            let mut triplets = Vec::with_capacity(nnz);
            for (line, l) in body.by_ref() {
                if triplets.len() == nnz {
                    return Err(Error::Malformed {
                        line,
                        message: format!("more than the declared {nnz} entries"),
                    });
                }
                let toks: Vec<&str> = l.split_whitespace().collect();
                if toks.len() != 3 {
                    return Err(Error::Malformed {
                        line,
                        message: "coordinate entry needs row, column and value".into(),
                    });
                }
                let i = parse_index(toks[0], n, line)?;
                let j = parse_index(toks[1], n, line)?;
                let v = parse_value(toks[2], line)?;
                if symmetry == Symmetry::Symmetric && j > i {
                    return Err(Error::Malformed {
                        line,
                        message: "symmetric storage expects lower-triangle entries".into(),
                    });
                }
                triplets.push((i, j, v));
            }
            if triplets.len() != nnz {
                return Err(Error::Malformed {
                    line: text.lines().count(),
                    message: format!("declared {nnz} entries, found {}", triplets.len()),
                });
            }
            match symmetry {
                Symmetry::Symmetric => SymmetricOperator::from_lower_triplets(n, &triplets),
                Symmetry::General => SymmetricOperator::from_general_triplets(n, &triplets),
            }
        }
        Layout::Array => {
            let mut a = DenseMatrix::zeros(n, n);
            let slots: Vec<(usize, usize)> = match symmetry {
                Symmetry::Symmetric => (0..n).flat_map(|j| (j..n).map(move |i| (i, j))).collect(),
                Symmetry::General => (0..n).flat_map(|j| (0..n).map(move |i| (i, j))).collect(),
            };
            let mut filled = 0;
            for (line, l) in body.by_ref() {
                for tok in l.split_whitespace() {
                    let Some(&(i, j)) = slots.get(filled) else {
                        return Err(Error::Malformed {
                            line,
                            message: format!("more than the expected {} values", slots.len()),
                        });
                    };
                    let v = parse_value(tok, line)?;
                    a[(i, j)] = v;
                    if symmetry == Symmetry::Symmetric {
                        a[(j, i)] = v;
                    }
                    filled += 1;
                }
            }
            if filled != slots.len() {
                return Err(Error::Malformed {
                    line: text.lines().count(),
                    message: format!("expected {} values, found {filled}", slots.len()),
                });
            }
            SymmetricOperator::from_dense(&a)
        }
    }
}

fn parse_header(line: usize, header: &str) -> Result<(Layout, Symmetry)> {
    let toks: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if toks.len() != 5 || toks[0] != "%%matrixmarket" || toks[1] != "matrix" {
        return Err(Error::Malformed {
            line,
            message: "expected '%%MatrixMarket matrix <format> <field> <symmetry>'".into(),
        });
    }
    let layout = match toks[2].as_str() {
        "coordinate" => Layout::Coordinate,
        "array" => Layout::Array,
        other => {
            return Err(Error::Malformed {
                line,
                message: format!("unknown format '{other}'"),
            })
        }
    };
    match toks[3].as_str() {
        "real" | "integer" | "double" => {}
        "complex" | "pattern" => {
            return Err(Error::Unsupported(format!("{} field", toks[3])));
        }
        other => {
            return Err(Error::Malformed {
                line,
                message: format!("unknown field '{other}'"),
            })
        }
    }
    let symmetry = match toks[4].as_str() {
        "symmetric" => Symmetry::Symmetric,
        "general" => Symmetry::General,
        "skew-symmetric" => return Err(Error::Structural("skew-symmetric matrix is not symmetric".into())),
        "hermitian" => return Err(Error::Unsupported("hermitian symmetry".into())),
        other => {
            return Err(Error::Malformed {
                line,
                message: format!("unknown symmetry '{other}'"),
            })
        }
    };
    Ok((layout, symmetry))
}

fn parse_index(tok: &str, n: usize, line: usize) -> Result<usize> {
    let i: usize = tok.parse().map_err(|_| Error::Malformed {
        line,
        message: format!("bad index '{tok}'"),
    })?;
    if i == 0 || i > n {
        return Err(Error::Malformed {
            line,
            message: format!("index {i} outside 1..={n}"),
        });
    }
    Ok(i - 1)
}

fn parse_value(tok: &str, line: usize) -> Result<f64> {
    match tok.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Malformed {
            line,
            message: format!("bad value '{tok}'"),
        }),
    }
}
