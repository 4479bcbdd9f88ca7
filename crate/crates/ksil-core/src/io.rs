//! Comma-delimited dataset ingestion and emission. Values are written with
//! the shortest round-trip decimal representation, so a written file reads
//! back to exactly the same doubles.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::dataset::{validate_dataset, Dataset};
use crate::error::{Error, Result};

/// Column holding ground-truth labels, by header name or 0-based index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    Name(String),
    Index(usize),
}

impl LabelColumn {
    /// Interpret a CLI argument: a number means an index, anything else a name.
    pub fn parse(s: &str) -> LabelColumn {
        match s.parse::<usize>() {
            Ok(i) => LabelColumn::Index(i),
            Err(_) => LabelColumn::Name(s.to_string()),
        }
    }
}

/// Load a CSV file into a dataset. Feature cells must parse as floats; the
/// optional label column is carried through as strings.
pub fn load_csv(
    path: impl AsRef<Path>,
    has_header: bool,
    label_column: Option<&LabelColumn>,
) -> Result<Dataset> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::ParseError {
            row: 0,
            column: None,
            message: e.to_string(),
        })?;
    let label_idx = match label_column {
        None => None,
        Some(LabelColumn::Index(i)) => Some(*i),
        Some(LabelColumn::Name(name)) => {
            if !has_header {
                return Err(Error::InvalidConfig(format!(
                    "label column \"{name}\" given by name but the file has no header"
                )));
            }
            let headers = reader.headers().map_err(|e| Error::ParseError {
                row: 1,
                column: None,
                message: e.to_string(),
            })?;
            let idx = headers.iter().position(|h| h == name);
            Some(idx.ok_or_else(|| {
                Error::InvalidConfig(format!("no column named \"{name}\" in the header"))
            })?)
        }
    };

    let mut points = Vec::new();
    let mut labels = Vec::new();
    let mut width: Option<usize> = None;
    for record in reader.records() {
        let record = record.map_err(|e| Error::ParseError {
            row: 0,
            column: None,
            message: e.to_string(),
        })?;
        let line = record
            .position()
            .map(|p| p.line() as usize)
            .unwrap_or(points.len() + 1);
        match width {
            None => {
                width = Some(record.len());
                if let Some(idx) = label_idx {
                    if idx >= record.len() {
                        return Err(Error::InvalidConfig(format!(
                            "label column index {idx} out of range for {} columns",
                            record.len()
                        )));
                    }
                }
            }
            Some(w) if record.len() != w => {
                return Err(Error::MixedArity {
                    row: line,
                    expected: w,
                    found: record.len(),
                });
            }
            _ => {}
        }
        let mut row = Vec::with_capacity(record.len());
        for (col, field) in record.iter().enumerate() {
            if Some(col) == label_idx {
                labels.push(field.to_string());
                continue;
            }
            let value: f64 = field.parse().map_err(|_| Error::ParseError {
                row: line,
                column: Some(col),
                message: format!("cannot parse \"{field}\" as a number"),
            })?;
            row.push(value);
        }
        points.push(row);
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into());
    validate_dataset(
        points,
        if label_idx.is_some() {
            Some(labels)
        } else {
            None
        },
        name,
    )
}

/// Write a dataset as CSV with a `f0..f{d-1}[,label]` header.
pub fn write_dataset_csv(data: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let file = File::create(path)?;
    let mut w = BufWriter::new(file);
    let d = data.dim();
    for j in 0..d {
        if j > 0 {
            write!(w, ",")?;
        }
        write!(w, "f{j}")?;
    }
    if data.labels().is_some() {
        write!(w, ",label")?;
    }
    writeln!(w)?;
    for (i, p) in data.points().iter().enumerate() {
        for (j, v) in p.iter().enumerate() {
            if j > 0 {
                write!(w, ",")?;
            }
            write!(w, "{v}")?;
        }
        if let Some(labels) = data.labels() {
            write!(w, ",{}", labels[i])?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn plain_numeric_csv() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("plain.csv");
        std::fs::write(&path, "0.5,1.5\n2.0,3.0\n4.0,5.0\n").unwrap();
        let data = load_csv(&path, false, None).unwrap();
        assert_eq!(data.n(), 3);
        assert_eq!(data.dim(), 2);
        assert!(data.labels().is_none());
    }

    #[test]
    fn label_column_by_name() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("labeled.csv");
        std::fs::write(&path, "x,y,class\n1,2,a\n3,4,b\n").unwrap();
        let col = LabelColumn::parse("class");
        let data = load_csv(&path, true, Some(&col)).unwrap();
        assert_eq!(data.dim(), 2);
        assert_eq!(data.labels().unwrap(), &["a".to_string(), "b".to_string()]);
    }

    #[test]
    fn parse_error_names_row() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        let mut content = String::new();
        for i in 0..6 {
            content.push_str(&format!("{i},1.0\n"));
        }
        content.push_str("oops,2.0\n");
        std::fs::write(&path, content).unwrap();
        let err = load_csv(&path, false, None).unwrap_err();
        match err {
            Error::ParseError { row, .. } => assert_eq!(row, 7),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn mixed_arity_rejected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("ragged.csv");
        std::fs::write(&path, "1,2\n3,4,5\n").unwrap();
        assert!(matches!(
            load_csv(&path, false, None).unwrap_err(),
            Error::MixedArity { row: 2, .. }
        ));
    }

    #[test]
    fn round_trip_exact() {
        use crate::synth::{generate_synthetic, SyntheticSpec};
        let data = generate_synthetic(&SyntheticSpec::blobs(50, 3, 2, 1.3, 0.1, 5)).unwrap();
        let dir = tempdir().unwrap();
        let path = dir.path().join("roundtrip.csv");
        write_dataset_csv(&data, &path).unwrap();
        let back = load_csv(&path, true, Some(&LabelColumn::parse("label"))).unwrap();
        assert_eq!(back.points(), data.points());
        assert_eq!(back.labels(), data.labels());
    }
}
