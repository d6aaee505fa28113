//! Growth tables and their CSV/JSON form.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthEntry {
    pub dim: usize,
    /// `false` marks a lower bound: some product left the truncation.
    pub exact: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthTable {
    pub label: String,
    entries: BTreeMap<usize, GrowthEntry>,
}

#[derive(Serialize, Deserialize)]
struct Row {
    n: usize,
    dim: usize,
    exact: bool,
}

impl GrowthTable {
    pub fn new(label: impl Into<String>) -> Self {
        GrowthTable { label: label.into(), entries: BTreeMap::new() }
    }

    pub fn insert(&mut self, n: usize, dim: usize, exact: bool) {
        self.entries.insert(n, GrowthEntry { dim, exact });
    }

    pub fn get(&self, n: usize) -> Option<GrowthEntry> {
        self.entries.get(&n).copied()
    }

    pub fn dim(&self, n: usize) -> Option<usize> {
        self.get(n).map(|e| e.dim)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, GrowthEntry)> + '_ {
        self.entries.iter().map(|(&n, &e)| (n, e))
    }

    pub fn all_exact(&self) -> bool {
        self.entries.values().all(|e| e.exact)
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.entries
            .values()
            .zip(self.entries.values().skip(1))
            .all(|(a, b)| a.dim <= b.dim)
    }

    /// Writes `n,dim,exact` rows after a header. Comment lines go first.
    pub fn write_csv<W: Write>(&self, mut out: W, comments: &[String]) -> Result<()> {
        for c in comments {
            writeln!(out, "# {c}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        for (n, e) in self.iter() {
            w.serialize(Row { n, dim: e.dim, exact: e.exact })?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a table written by [`GrowthTable::write_csv`]. The `exact`
    /// column is optional and defaults to `true`.
    pub fn read_csv<R: Read>(input: R, label: impl Into<String>) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(input);
        let headers = rdr.headers()?.clone();
        let col = |name: &str| headers.iter().position(|h| h == name);
        let n_col = col("n").or_else(|| col("degree")).unwrap_or(0);
        let dim_col = col("dim").unwrap_or(1);
        let exact_col = col("exact");
        let mut t = GrowthTable::new(label);
        for rec in rdr.records() {
            let rec = rec?;
            let field = |i: usize| {
                rec.get(i)
                    .ok_or_else(|| Error::Parse(format!("short CSV row {:?}", rec.position())))
            };
            let n: usize = field(n_col)?
                .parse()
                .map_err(|_| Error::Parse(format!("bad n `{}`", &rec[n_col])))?;
            let dim: usize = field(dim_col)?
                .parse()
                .map_err(|_| Error::Parse(format!("bad dim `{}`", &rec[dim_col])))?;
            let exact = match exact_col {
                Some(i) => match field(i)? {
                    "true" => true,
                    "false" => false,
                    other => return Err(Error::Parse(format!("bad exact flag `{other}`"))),
                },
                None => true,
            };
            t.insert(n, dim, exact);
        }
        Ok(t)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
