//! Dense node × feature matrices with column labels.

use std::io::{Read, Write};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    data: DMatrix<f64>,
    labels: Vec<String>,
}

impl FeatureMatrix {
    pub fn new(data: DMatrix<f64>, labels: Vec<String>) -> Result<Self> {
        if labels.len() != data.ncols() {
            return Err(Error::invalid(format!(
                "{} column labels for {} columns",
                labels.len(),
                data.ncols()
            )));
        }
        if let Some(idx) = data.iter().position(|x| !x.is_finite()) {
            let (r, c) = (idx % data.nrows().max(1), idx / data.nrows().max(1));
            return Err(Error::invalid(format!("non-finite feature at row {r}, column {c}")));
        }
        Ok(FeatureMatrix { data, labels })
    }

    /// Columns labelled `x0, x1, ...`.
    pub fn unlabeled(data: DMatrix<f64>) -> Result<Self> {
        let labels = (0..data.ncols()).map(|j| format!("x{j}")).collect();
        FeatureMatrix::new(data, labels)
    }

    /// Single column.
    pub fn column_vector(values: &[f64], label: &str) -> Result<Self> {
        FeatureMatrix::new(
            DMatrix::from_column_slice(values.len(), 1, values),
            vec![label.to_string()],
        )
    }

    pub fn nrows(&self) -> usize {
        self.data.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.data.ncols()
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_data(self) -> DMatrix<f64> {
        self.data
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[(i, j)]
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.data.row(i).iter().copied().collect()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.data.column(j).iter().copied().collect()
    }

    /// Side-by-side concatenation.
    pub fn hstack(&self, other: &FeatureMatrix) -> Result<Self> {
        if self.nrows() != other.nrows() {
            return Err(Error::invalid("row counts differ"));
        }
        let mut data = DMatrix::zeros(self.nrows(), self.ncols() + other.ncols());
        data.columns_mut(0, self.ncols()).copy_from(&self.data);
        data.columns_mut(self.ncols(), other.ncols()).copy_from(&other.data);
        let labels = self.labels.iter().chain(&other.labels).cloned().collect();
        FeatureMatrix::new(data, labels)
    }

    /// Apply `ln(1 + x)` elementwise.
    pub fn log1p(&self) -> Result<Self> {
        if let Some(x) = self.data.iter().find(|&&x| x <= -1.0) {
            return Err(Error::invalid(format!("log1p undefined for {x}")));
        }
        FeatureMatrix::new(self.data.map(f64::ln_1p), self.labels.clone())
    }

    pub fn min_value(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// CSV with a header row of column labels, one row per node.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.labels)?;
        for i in 0..self.nrows() {
            out.write_record(self.data.row(i).iter().map(|x| format!("{x}")))?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let labels: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        let mut values = Vec::new();
        let mut rows = 0;
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            if rec.len() != labels.len() {
                return Err(Error::invalid(format!("row {} has {} fields", i + 1, rec.len())));
            }
            for f in rec.iter() {
                values.push(f.trim().parse::<f64>().map_err(|_| {
                    Error::invalid(format!("row {}: `{f}` is not a number", i + 1))
                })?);
            }
            rows += 1;
        }
        FeatureMatrix::new(DMatrix::from_row_slice(rows, labels.len(), &values), labels)
    }
}
