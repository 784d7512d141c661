//! CSV ingestion. A header row is required; columns are selected by name, and rows with a missing
//! or unparsable selected field are dropped and counted.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::altman::FirmRecord;
use crate::error::{Error, Result};

/// A CSV file held as strings.
#[derive(Debug, Clone)]
pub struct Table {
    headers: Vec<String>,
    rows: Vec<csv::StringRecord>,
}

/// Parses a numeric cell. Blank cells and the usual missing-value markers give `None`.
pub fn parse_number(cell: &str) -> Option<f64> {
    let cell = cell.trim();
    match cell {
        "" | "NA" | "N/A" | "NaN" | "nan" | "null" | "." => None,
        _ => cell.parse::<f64>().ok().filter(|v| v.is_finite()),
    }
}

impl Table {
    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        if headers.iter().all(String::is_empty) {
            return Err(Error::Parse {
                format: "csv",
                message: "missing header row".into(),
            });
        }
        let rows = rdr.records().collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Self { headers, rows })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_reader(File::open(path)?)
    }

    pub fn headers(&self) -> &[String] {
        &self.headers
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn has_column(&self, name: &str) -> bool {
        self.headers.iter().any(|h| h == name)
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    }

    fn cell(&self, row: usize, col: usize) -> &str {
        self.rows[row].get(col).unwrap_or("")
    }

    /// Reads the named columns as numbers, keeping only rows where all of them parse.
    pub fn numeric_columns(&self, names: &[&str]) -> Result<NumericSelection> {
        let idx = names
            .iter()
            .map(|n| self.column_index(n))
            .collect::<Result<Vec<_>>>()?;
        let mut columns = vec![Vec::new(); names.len()];
        let mut rows = Vec::new();
        let mut parsed = Vec::with_capacity(idx.len());
        for r in 0..self.rows.len() {
            parsed.clear();
            parsed.extend(idx.iter().map(|&c| parse_number(self.cell(r, c))));
            if parsed.iter().all(Option::is_some) {
                for (col, v) in columns.iter_mut().zip(&parsed) {
                    col.push(v.unwrap());
                }
                rows.push(r);
            }
        }
        Ok(NumericSelection {
            dropped: self.rows.len() - rows.len(),
            columns,
            rows,
        })
    }

    /// Reads firm records through a column mapping.
    ///
    /// The eleven monetary fields must all parse. The deletion-reason and year columns are
    /// optional: when absent from the header every record gets no deletion reason and year 0; when
    /// present, a blank deletion reason means none, while an unparsable one drops the row.
    pub fn firm_records(&self, mapping: &FirmColumns) -> Result<FirmSelection> {
        let idx = mapping
            .field_columns()
            .iter()
            .map(|n| self.column_index(n))
            .collect::<Result<Vec<_>>>()?;
        let delrsn_col = self.column_index(&mapping.delrsn).ok();
        let year_col = self.column_index(&mapping.fiscal_year).ok();

        let mut records = Vec::new();
        let mut rows = Vec::new();
        'rows: for r in 0..self.rows.len() {
            let mut fields = [0.0; 11];
            for (f, &c) in fields.iter_mut().zip(&idx) {
                match parse_number(self.cell(r, c)) {
                    Some(v) => *f = v,
                    None => continue 'rows,
                }
            }
            let delrsn = match delrsn_col.map(|c| self.cell(r, c).trim()) {
                None | Some("") => None,
                Some(s) => match parse_code(s) {
                    Some(code) => Some(code),
                    None => continue 'rows,
                },
            };
            let fiscal_year = match year_col {
                None => 0,
                Some(c) => match parse_number(self.cell(r, c)) {
                    Some(y) if y.fract() == 0.0 => y as i32,
                    _ => continue 'rows,
                },
            };
            records.push(FirmRecord::from_fields(fields, delrsn, fiscal_year));
            rows.push(r);
        }
        Ok(FirmSelection {
            dropped: self.rows.len() - rows.len(),
            records,
            rows,
            has_year: year_col.is_some(),
        })
    }
}

fn parse_code(s: &str) -> Option<u32> {
    s.parse::<u32>().ok().or_else(|| {
        parse_number(s)
            .filter(|v| *v >= 0.0 && v.fract() == 0.0)
            .map(|v| v as u32)
    })
}

/// Columns that parsed, plus which source rows survived.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericSelection {
    pub columns: Vec<Vec<f64>>,
    /// Source row index of each kept row.
    pub rows: Vec<usize>,
    pub dropped: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FirmSelection {
    pub records: Vec<FirmRecord>,
    pub rows: Vec<usize>,
    pub dropped: usize,
    /// Whether the year column was present.
    pub has_year: bool,
}

/// CSV column names for the firm fields. Defaults are the Compustat mnemonics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirmColumns {
    pub act: String,
    pub lct: String,
    pub at: String,
    pub re: String,
    pub ni: String,
    pub xint: String,
    pub txt: String,
    pub csho: String,
    pub prcc_f: String,
    pub tl: String,
    pub sale: String,
    pub delrsn: String,
    pub fiscal_year: String,
}

impl Default for FirmColumns {
    fn default() -> Self {
        Self {
            act: "act".into(),
            lct: "lct".into(),
            at: "at".into(),
            re: "re".into(),
            ni: "ni".into(),
            xint: "xint".into(),
            txt: "txt".into(),
            csho: "csho".into(),
            prcc_f: "prcc_f".into(),
            tl: "tl".into(),
            sale: "sale".into(),
            delrsn: "delrsn".into(),
            fiscal_year: "fyear".into(),
        }
    }
}

impl FirmColumns {
    /// Column names of the eleven monetary fields, in [`FirmRecord::FIELDS`] order.
    pub fn field_columns(&self) -> [&str; 11] {
        [
            &self.act,
            &self.lct,
            &self.at,
            &self.re,
            &self.ni,
            &self.xint,
            &self.txt,
            &self.csho,
            &self.prcc_f,
            &self.tl,
            &self.sale,
        ]
    }
}
