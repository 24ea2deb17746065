use std::collections::BTreeSet;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::Dataset;
use crate::error::{Error, Result};
use crate::numerics::Matrix;

/// Which column holds class labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabelColumn {
    Name(String),
    Index(usize),
}

impl LabelColumn {
    /// A header name when one matches, else a zero-based index.
    pub fn parse(spec: &str) -> Self {
        match spec.parse::<usize>() {
            Ok(i) => LabelColumn::Index(i),
            Err(_) => LabelColumn::Name(spec.to_string()),
        }
    }
}

/// Shortest representation that parses back to the same bits.
pub fn format_f64(v: f64) -> String {
    format!("{v:?}")
}

/// First record of a CSV file.
pub fn read_header(path: impl AsRef<Path>) -> Result<Vec<String>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    match rdr.records().next() {
        Some(r) => Ok(r?.iter().map(str::to_string).collect()),
        None => Ok(Vec::new()),
    }
}

pub fn load_csv(path: impl AsRef<Path>, label_column: Option<&LabelColumn>, has_header: bool) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into());
    read_csv(file, &name, label_column, has_header)
}

/// Parses CSV text. Row and column numbers in errors are 1-based file
/// positions, counting the header line.
pub fn read_csv(reader: impl Read, name: &str, label_column: Option<&LabelColumn>, has_header: bool) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut records = rdr.records();

    let header: Option<Vec<String>> = if has_header {
        match records.next() {
            Some(r) => Some(r?.iter().map(str::to_string).collect()),
            None => return Err(Error::invalid("empty CSV file")),
        }
    } else {
        None
    };

    let mut rows: Vec<csv::StringRecord> = Vec::new();
    for r in records {
        let r = r?;
        if r.len() == 1 && r[0].is_empty() {
            continue;
        }
        rows.push(r);
    }
    let width = header.as_ref().map(Vec::len).or_else(|| rows.first().map(|r| r.len()));
    let Some(width) = width else {
        return Err(Error::invalid("CSV has no columns"));
    };
    let line0 = usize::from(has_header) + 1;

    let label_idx = match label_column {
        None => None,
        Some(LabelColumn::Index(i)) => Some(*i),
        Some(LabelColumn::Name(n)) => {
            let h = header
                .as_ref()
                .ok_or_else(|| Error::invalid(format!("label column {n:?} given by name but file has no header")))?;
            Some(
                h.iter()
                    .position(|c| c == n)
                    .ok_or_else(|| Error::invalid(format!("no column named {n:?}")))?,
            )
        }
    };
    if let Some(i) = label_idx {
        if i >= width {
            return Err(Error::invalid(format!("label column {i} out of range for {width} columns")));
        }
    }

    let d = width - usize::from(label_idx.is_some());
    let mut data = Vec::with_capacity(rows.len() * d);
    let mut raw_labels = Vec::new();
    for (r, rec) in rows.iter().enumerate() {
        if rec.len() != width {
            return Err(Error::Parse {
                row: line0 + r,
                column: rec.len().min(width) + 1,
                message: format!("expected {width} fields, found {}", rec.len()),
            });
        }
        for (c, cell) in rec.iter().enumerate() {
            if Some(c) == label_idx {
                raw_labels.push(cell.to_string());
                continue;
            }
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                row: line0 + r,
                column: c + 1,
                message: format!("not a number: {cell:?}"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    row: line0 + r,
                    column: c + 1,
                    message: format!("non-finite value {cell:?}"),
                });
            }
            data.push(v);
        }
    }

    let x = Matrix::new(rows.len(), d, data)?;
    let feature_names = header.map(|h| {
        h.into_iter()
            .enumerate()
            .filter(|(c, _)| Some(*c) != label_idx)
            .map(|(_, s)| s)
            .collect()
    });
    let labels = label_idx.map(|_| dense_labels(&raw_labels));
    Ok(Dataset {
        name: name.to_string(),
        x,
        labels,
        feature_names,
    })
}

/// Maps raw label strings to ids `0..m` in sorted order: numeric when every
/// label parses as a number, lexicographic otherwise.
fn dense_labels(raw: &[String]) -> Vec<usize> {
    let numeric: Option<Vec<f64>> = raw.iter().map(|s| s.parse::<f64>().ok()).collect();
    match numeric {
        Some(vals) => {
            let mut uniq = vals.clone();
            uniq.sort_by(f64::total_cmp);
            uniq.dedup();
            vals.iter()
                .map(|v| uniq.binary_search_by(|u| u.total_cmp(v)).unwrap())
                .collect()
        }
        None => {
            let uniq: Vec<&String> = raw.iter().collect::<BTreeSet<_>>().into_iter().collect();
            raw.iter().map(|s| uniq.binary_search(&s).unwrap()).collect()
        }
    }
}

/// Writes a header row (feature names, or `x0..`), then one row per sample.
/// Labels, when present, go in a trailing `label` column.
pub fn write_csv(ds: &Dataset, mut out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(&mut out);
    let mut header: Vec<String> = match &ds.feature_names {
        Some(f) if f.len() == ds.d() => f.clone(),
        _ => (0..ds.d()).map(|j| format!("x{j}")).collect(),
    };
    if ds.labels.is_some() {
        header.push("label".into());
    }
    w.write_record(&header)?;
    let mut rec = Vec::with_capacity(header.len());
    for i in 0..ds.n() {
        rec.clear();
        rec.extend(ds.x.row(i).iter().map(|&v| format_f64(v)));
        if let Some(l) = &ds.labels {
            rec.push(l[i].to_string());
        }
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

pub fn save_csv(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut buf = std::io::BufWriter::new(file);
    write_csv(ds, &mut buf)?;
    buf.flush().map_err(|e| Error::io(path, e))
}
