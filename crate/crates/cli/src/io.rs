//! Input files and their JSON shapes.
//!
//! * complex number: `[re, im]` (a bare number is read as a real value)
//! * frame: `{"dim": n, "vectors": [[z, ...], ...]}`
//! * matrix: `{"rows": r, "cols": c, "data": [z, ...]}` in row-major order;
//!   `data` may also be given as `r` rows of `c` entries each
//! * symbol: `{"values": [z, ...], "lower": a, "upper": b}` with both bounds
//!   optional

use std::fs;
use std::path::Path;

use kframe_core::{ComplexMatrix, Frame, Symbol, C64};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum Scalar {
    Pair([f64; 2]),
    Real(f64),
}

impl From<Scalar> for C64 {
    fn from(s: Scalar) -> C64 {
        match s {
            Scalar::Pair([re, im]) => C64::new(re, im),
            Scalar::Real(re) => C64::new(re, 0.0),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameFile {
    dim: usize,
    vectors: Vec<Vec<Scalar>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    data: Vec<Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SymbolFile {
    values: Vec<Scalar>,
    lower: Option<f64>,
    upper: Option<f64>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn decode<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn dimension(path: &Path, field: String, message: String) -> CliError {
    CliError::Dimension {
        path: path.display().to_string(),
        field,
        message,
    }
}

fn finite(path: &Path, field: &str, z: C64) -> Result<C64, CliError> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(dimension(path, field.to_string(), "entry is not finite".into()))
    }
}

pub fn parse_frame(path: &Path, text: &str) -> Result<Frame, CliError> {
    let file: FrameFile = decode(path, text)?;
    if file.dim == 0 {
        return Err(dimension(path, "dim".into(), "must be positive".into()));
    }
    if file.vectors.is_empty() {
        return Err(dimension(
            path,
            "vectors".into(),
            "at least one vector is required".into(),
        ));
    }
    let mut entries = vec![C64::new(0.0, 0.0); file.dim * file.vectors.len()];
    let count = file.vectors.len();
    for (j, v) in file.vectors.into_iter().enumerate() {
        if v.len() != file.dim {
            return Err(dimension(
                path,
                format!("vectors[{j}]"),
                format!("has {} entries, dim is {}", v.len(), file.dim),
            ));
        }
        for (i, z) in v.into_iter().enumerate() {
            entries[i * count + j] = finite(path, &format!("vectors[{j}][{i}]"), z.into())?;
        }
    }
    let t = ComplexMatrix::from_row_major(file.dim, count, entries).map_err(CliError::Core)?;
    Frame::from_synthesis(t).map_err(CliError::Core)
}

pub fn parse_matrix(path: &Path, text: &str) -> Result<ComplexMatrix, CliError> {
    let file: MatrixFile = decode(path, text)?;
    if file.rows == 0 || file.cols == 0 {
        return Err(dimension(path, "rows/cols".into(), "must be positive".into()));
    }
    // The declared shape decides the layout: `rows * cols` scalars is flat,
    // `rows` entries is a list of rows. With one column a row `[z]` is never
    // itself a scalar, so the two readings cannot collide.
    let n = file.rows * file.cols;
    let is_flat = file.data.len() == n && file.data.iter().all(|v| Scalar::deserialize(v).is_ok());
    let flat: Vec<(String, Value)> = if is_flat {
        file.data
            .into_iter()
            .enumerate()
            .map(|(k, v)| (format!("data[{k}]"), v))
            .collect()
    } else if file.data.len() == file.rows {
        let mut flat = Vec::with_capacity(n);
        for (i, row) in file.data.into_iter().enumerate() {
            let row = match row {
                Value::Array(r) if r.len() == file.cols => r,
                Value::Array(r) => {
                    return Err(dimension(
                        path,
                        format!("data[{i}]"),
                        format!("ragged row: {} entries, expected {}", r.len(), file.cols),
                    ))
                }
                _ => return Err(dimension(path, format!("data[{i}]"), "expected a row".into())),
            };
            flat.extend(row.into_iter().enumerate().map(|(j, v)| (format!("data[{i}][{j}]"), v)));
        }
        flat
    } else {
        return Err(dimension(
            path,
            "data".into(),
            format!(
                "has {} entries, expected {} (flat) or {} rows for a {}x{} matrix",
                file.data.len(),
                n,
                file.rows,
                file.rows,
                file.cols
            ),
        ));
    };
    let entries = flat
        .into_iter()
        .map(|(field, v)| {
            let z: Scalar = serde_json::from_value(v)
                .map_err(|_| dimension(path, field.clone(), "expected a number or [re, im]".into()))?;
            finite(path, &field, z.into())
        })
        .collect::<Result<Vec<_>, _>>()?;
    ComplexMatrix::from_row_major(file.rows, file.cols, entries).map_err(CliError::Core)
}

pub fn parse_symbol(path: &Path, text: &str) -> Result<Symbol, CliError> {
    let file: SymbolFile = decode(path, text)?;
    if file.values.is_empty() {
        return Err(dimension(
            path,
            "values".into(),
            "at least one value is required".into(),
        ));
    }
    let values = file
        .values
        .into_iter()
        .enumerate()
        .map(|(k, z)| finite(path, &format!("values[{k}]"), z.into()))
        .collect::<Result<Vec<_>, _>>()?;
    match (file.lower, file.upper) {
        (None, None) => Symbol::new(values).map_err(CliError::Core),
        (Some(a), Some(b)) => Symbol::with_bounds(values, a, b).map_err(CliError::Core),
        _ => Err(dimension(
            path,
            "lower/upper".into(),
            "give both bounds or neither".into(),
        )),
    }
}

pub fn load_frame(path: &Path) -> Result<Frame, CliError> {
    parse_frame(path, &read(path)?)
}

pub fn load_matrix(path: &Path) -> Result<ComplexMatrix, CliError> {
    parse_matrix(path, &read(path)?)
}

pub fn load_symbol(path: &Path) -> Result<Symbol, CliError> {
    parse_symbol(path, &read(path)?)
}

pub fn scalar_json(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn vector_json(v: &kframe_core::ComplexVector) -> Value {
    Value::Array(v.iter().map(|&z| scalar_json(z)).collect())
}

pub fn frame_json(f: &Frame) -> Value {
    json!({
        "dim": f.dim(),
        "vectors": f.vectors().iter().map(vector_json).collect::<Vec<_>>(),
    })
}

pub fn matrix_json(m: &ComplexMatrix) -> Value {
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "data": m.row_major().into_iter().map(scalar_json).collect::<Vec<_>>(),
    })
}

pub fn symbol_json(s: &Symbol) -> Value {
    let values: Vec<Value> = s.values().iter().map(|&z| scalar_json(z)).collect();
    if s.bounds_declared() {
        json!({ "values": values, "lower": s.lower_mod(), "upper": s.upper_mod() })
    } else {
        json!({ "values": values })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use kframe_core::fixtures;

    fn p() -> &'static Path {
        Path::new("test.json")
    }

    #[test]
    fn frame_round_trip() {
        let f = fixtures::planar_projection().frame;
        let text = frame_json(&f).to_string();
        let back = parse_frame(p(), &text).unwrap();
        assert_eq!(back, f);
        assert_eq!((back.dim(), back.len()), (2, 3));
    }

    #[test]
    fn matrix_round_trip() {
        let k = fixtures::c4_operator();
        let back = parse_matrix(p(), &matrix_json(&k).to_string()).unwrap();
        assert_eq!(&back, &k);
        let d = parse_matrix(p(), r#"{"rows":2,"cols":2,"data":[[1,0],[0,0],[0,0],[0,0]]}"#).unwrap();
        assert_eq!(d, ComplexMatrix::from_real_diagonal(&[1.0, 0.0]));
        let d = parse_matrix(p(), r#"{"rows":2,"cols":2,"data":[[1,0],[0,0]]}"#).unwrap();
        assert_eq!(d, ComplexMatrix::from_real_diagonal(&[1.0, 0.0]));
        let d = parse_matrix(p(), r#"{"rows":1,"cols":1,"data":[[[0,2]]]}"#).unwrap();
        assert_eq!(
            d,
            ComplexMatrix::from_row_major(1, 1, vec![C64::new(0.0, 2.0)]).unwrap()
        );
    }

    #[test]
    fn nested_rows_are_accepted() {
        let text = r#"{"rows":2,"cols":2,"data":[[[1,0],[0,0]],[[0,0],[0,0]]]}"#;
        let d = parse_matrix(p(), text).unwrap();
        assert_eq!(d, ComplexMatrix::from_real_diagonal(&[1.0, 0.0]));
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let text = r#"{"rows":2,"cols":2,"data":[[[1,0],[0,0]],[[0,0]]]}"#;
        match parse_matrix(p(), text) {
            Err(CliError::Dimension { field, .. }) => assert_eq!(field, "data[1]"),
            other => panic!("{other:?}"),
        }
        let text = r#"{"dim":2,"vectors":[[1,0],[1]]}"#;
        assert!(matches!(parse_frame(p(), text), Err(CliError::Dimension { .. })));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let text = "{\n  \"dim\": 2,\n  \"vectors\": [[1, 0],\n}";
        match parse_frame(p(), text) {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_frame(p(), r#"{"dim":2,"vecs":[]}"#),
            Err(CliError::Parse { .. })
        ));
    }

    #[test]
    fn symbols() {
        let s = parse_symbol(p(), r#"{"values":[1,[0,2]]}"#).unwrap();
        assert_eq!(s.values()[1], C64::new(0.0, 2.0));
        assert!(!s.bounds_declared());
        let s = parse_symbol(p(), r#"{"values":[1,[0,2]],"lower":0.5,"upper":3}"#).unwrap();
        assert_eq!((s.lower_mod(), s.upper_mod()), (0.5, 3.0));
        assert_eq!(parse_symbol(p(), &symbol_json(&s).to_string()).unwrap(), s);
        assert!(parse_symbol(p(), r#"{"values":[1],"lower":0.5}"#).is_err());
        assert!(matches!(
            parse_symbol(p(), r#"{"values":[4],"lower":0.5,"upper":3}"#),
            Err(CliError::Core(_))
        ));
    }
}
