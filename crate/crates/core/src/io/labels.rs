use std::io::{Read, Write};

use crate::error::FormatError;
use crate::partition::Partition;

/// Writes `point,label` rows with noise as `-1`.
pub fn write_labels_csv<W: Write>(w: W, partition: &Partition) -> Result<(), FormatError> {
    let mut writer = csv::Writer::from_writer(w);
    writer.write_record(["point", "label"])?;
    for (p, l) in partition.signed_labels().into_iter().enumerate() {
        writer.write_record([p.to_string(), l.to_string()])?;
    }
    writer.flush()?;
    Ok(())
}

/// Reads a `point,label` file. Rows may come in any order but must cover
/// `0..n` exactly once.
pub fn read_labels_csv<R: Read>(r: R) -> Result<Partition, FormatError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let headers = reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["point", "label"] {
        return Err(FormatError::Value(format!("expected header point,label, found {headers:?}")));
    }
    let mut rows: Vec<(usize, i64)> = Vec::new();
    for (i, record) in reader.deserialize().enumerate() {
        let row: (usize, i64) = record.map_err(|e| FormatError::BadRow {
            row: i + 2,
            detail: e.to_string(),
        })?;
        rows.push(row);
    }
    let n = rows.len();
    let mut labels = vec![None; n];
    let mut seen = vec![false; n];
    for (i, &(p, l)) in rows.iter().enumerate() {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(FormatError::BadRow {
                row: i + 2,
                detail: format!("point {p} is out of range or repeated"),
            });
        }
        labels[p] = match l {
            -1 => None,
            l if l >= 0 => Some(l as usize),
            l => {
                return Err(FormatError::BadRow {
                    row: i + 2,
                    detail: format!("label {l} is negative"),
                })
            }
        };
    }
    Ok(Partition::from_labels(&labels))
}

/// Labels as a JSON array with `null` for noise.
pub fn labels_json(partition: &Partition) -> serde_json::Value {
    serde_json::Value::from(
        partition
            .labels()
            .iter()
            .map(|l| l.map_or(serde_json::Value::Null, serde_json::Value::from))
            .collect::<Vec<_>>(),
    )
}
