use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Edge id -> embedding, all of one width.
///
/// Components are stored as `f32`; arithmetic on them is done in `f64`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VectorTable {
    ids: Vec<String>,
    data: Vec<f32>,
    width: usize,
    index: HashMap<String, usize>,
}

impl VectorTable {
    pub fn new(width: usize) -> Self {
        VectorTable {
            width,
            ..Default::default()
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn row(&self, i: usize) -> &[f32] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    pub fn get(&self, id: &str) -> Option<&[f32]> {
        self.index.get(id).map(|&i| self.row(i))
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Appends a vector. `row` is used in error messages.
    pub fn push_row(&mut self, id: &str, values: &[f32], row: usize) -> Result<()> {
        if self.ids.is_empty() && self.width == 0 {
            self.width = values.len();
        }
        if values.len() != self.width || values.is_empty() {
            return Err(Error::VectorWidth {
                row,
                expected: self.width,
                found: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row });
        }
        if self.index.contains_key(id) {
            return Err(Error::DuplicateId {
                row,
                id: id.to_owned(),
            });
        }
        self.index.insert(id.to_owned(), self.ids.len());
        self.ids.push(id.to_owned());
        self.data.extend_from_slice(values);
        Ok(())
    }

    pub fn push(&mut self, id: &str, values: &[f32]) -> Result<()> {
        let row = self.len() + 1;
        self.push_row(id, values, row)
    }

    /// Rows whose id satisfies `keep`, in their original order.
    pub fn filter(&self, mut keep: impl FnMut(&str) -> bool) -> VectorTable {
        let mut out = VectorTable::new(self.width);
        for (i, id) in self.ids.iter().enumerate() {
            if keep(id) {
                out.push(id, self.row(i)).expect("rows already validated");
            }
        }
        out
    }

    pub fn write_tsv(&self, mut out: impl Write) -> Result<()> {
        for (i, id) in self.ids.iter().enumerate() {
            let values: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(out, "{id}\t{}", values.join(","))?;
        }
        Ok(())
    }
}

/// Reads `id<TAB>v0,v1,...` rows, or an id followed by whitespace-separated
/// values. The layout is detected per row.
pub fn load_vectors(reader: impl BufRead) -> Result<VectorTable> {
    let mut table = VectorTable::default();
    let mut values = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let row = i + 1;
        let line = line?;
        let line = line.trim_end_matches(['\r', '\n']);
        if line.trim().is_empty() {
            continue;
        }
        let (id, rest) = match line.split_once('\t') {
            Some(parts) => parts,
            None => line
                .trim_start()
                .split_once(char::is_whitespace)
                .ok_or_else(|| Error::malformed(row, "row has an id but no vector"))?,
        };
        let id = id.trim();
        if id.is_empty() {
            return Err(Error::malformed(row, "empty id"));
        }
        values.clear();
        let parts: Box<dyn Iterator<Item = &str>> = if rest.contains(',') {
            Box::new(rest.split(',').map(str::trim))
        } else {
            Box::new(rest.split_whitespace())
        };
        for p in parts {
            let v: f32 = p
                .parse()
                .map_err(|_| Error::malformed(row, format!("invalid number {p:?}")))?;
            values.push(v);
        }
        table.push_row(id, &values, row)?;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_rows_width_three() {
        let t = load_vectors("a\t1,2,3\nb\t4,5,6\n".as_bytes()).unwrap();
        assert_eq!((t.width(), t.len()), (3, 2));
        assert_eq!(t.get("b"), Some(&[4.0f32, 5.0, 6.0][..]));
    }

    #[test]
    fn whitespace_layout_is_detected() {
        let t = load_vectors("a 1 2 3\nb\t4 5 6\n".as_bytes()).unwrap();
        assert_eq!((t.width(), t.len()), (3, 2));
    }

    #[test]
    fn inconsistent_width_names_row() {
        let err = load_vectors("a\t1,2,3\nb\t1,2,3,4\n".as_bytes()).unwrap_err();
        assert_eq!(
            err.to_string(),
            "inconsistent vector width at row 2: expected 3, found 4"
        );
    }

    #[test]
    fn nan_is_rejected() {
        let err = load_vectors("a\t1,NaN,3\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("non-finite component"));
        assert!(load_vectors("a\t1,inf,3\n".as_bytes()).is_err());
    }

    #[test]
    fn duplicate_id_is_rejected() {
        let err = load_vectors("a\t1,2\na\t3,4\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("row 2"));
    }

    #[test]
    fn garbage_value_is_rejected() {
        assert!(load_vectors("a\t1,x\n".as_bytes()).is_err());
        assert!(load_vectors("lonely\n".as_bytes()).is_err());
    }
}
