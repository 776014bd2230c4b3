//! Labeled contingency tables and their probability form.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, MarginAxis, Result};

/// A labeled nonnegative two-way table of counts or compositions.
#[derive(Debug, Clone, PartialEq)]
pub struct ContingencyTable {
    values: DMatrix<f64>,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
}

impl ContingencyTable {
    /// Builds a table, validating shape and entries: at least 2 x 2, all
    /// entries nonnegative and finite, at least one entry positive.
    pub fn new(
        values: DMatrix<f64>,
        row_labels: Vec<String>,
        col_labels: Vec<String>,
    ) -> Result<Self> {
        if values.nrows() < 2 || values.ncols() < 2 {
            return Err(Error::InvalidTable(format!(
                "need at least 2 rows and 2 columns, got {}x{}",
                values.nrows(),
                values.ncols()
            )));
        }
        Self::from_parts_relaxed(values, row_labels, col_labels)
    }

    /// Same validation as [`ContingencyTable::new`] except the minimum
    /// size bound: merging every line of a rank-1 table legitimately
    /// collapses a dimension to one.
    pub(crate) fn from_parts_relaxed(
        values: DMatrix<f64>,
        row_labels: Vec<String>,
        col_labels: Vec<String>,
    ) -> Result<Self> {
        if row_labels.len() != values.nrows() || col_labels.len() != values.ncols() {
            return Err(Error::InvalidTable(format!(
                "label counts ({}, {}) do not match table shape {}x{}",
                row_labels.len(),
                col_labels.len(),
                values.nrows(),
                values.ncols()
            )));
        }
        let mut any_positive = false;
        for j in 0..values.ncols() {
            for i in 0..values.nrows() {
                let v = values[(i, j)];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidTable(format!(
                        "entry ({i}, {j}) = {v} is negative or not finite"
                    )));
                }
                any_positive |= v > 0.0;
            }
        }
        if !any_positive {
            return Err(Error::InvalidTable("all entries are zero".into()));
        }
        Ok(Self {
            values,
            row_labels,
            col_labels,
        })
    }

    /// Builds a table from row slices with generated labels `R1..RI` and
    /// `C1..CJ`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidTable("empty table".into()));
        }
        let ncols = rows[0].len();
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::InvalidTable("ragged rows".into()));
        }
        let values = DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]);
        let row_labels = (1..=rows.len()).map(|i| format!("R{i}")).collect();
        let col_labels = (1..=ncols).map(|j| format!("C{j}")).collect();
        Self::new(values, row_labels, col_labels)
    }

    pub fn nrows(&self) -> usize {
        self.values.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[(i, j)]
    }

    /// Grand total of all entries.
    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// The probability form `P = N / n` of a table together with its
/// marginals, which double as the CA metric weights.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrespondenceMatrix {
    p: DMatrix<f64>,
    r: DVector<f64>,
    c: DVector<f64>,
    n: f64,
}

impl CorrespondenceMatrix {
    /// Marginals are recomputed from `p`; rows and columns summing to
    /// zero are rejected because the metric matrices must stay positive
    /// definite.
    pub(crate) fn from_probabilities(p: DMatrix<f64>, n: f64) -> Result<Self> {
        let nrows = p.nrows();
        let ncols = p.ncols();
        let r = DVector::from_fn(nrows, |i, _| p.row(i).sum());
        let c = DVector::from_fn(ncols, |j, _| p.column(j).sum());
        for i in 0..nrows {
            if r[i] <= 0.0 {
                return Err(Error::ZeroMarginal {
                    index: i,
                    axis: MarginAxis::Row,
                });
            }
        }
        for j in 0..ncols {
            if c[j] <= 0.0 {
                return Err(Error::ZeroMarginal {
                    index: j,
                    axis: MarginAxis::Column,
                });
            }
        }
        Ok(Self { p, r, c, n })
    }

    pub fn nrows(&self) -> usize {
        self.p.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.p.ncols()
    }

    /// The probability table itself.
    pub fn p(&self) -> &DMatrix<f64> {
        &self.p
    }

    /// Row marginals `p_{i+}`.
    pub fn row_marginals(&self) -> &DVector<f64> {
        &self.r
    }

    /// Column marginals `p_{+j}`.
    pub fn col_marginals(&self) -> &DVector<f64> {
        &self.c
    }

    /// Grand total of the source table.
    pub fn grand_total(&self) -> f64 {
        self.n
    }
}

/// Converts a table to its correspondence matrix.
///
/// Fails with [`Error::ZeroMarginal`] when a row or column sums to zero;
/// empty lines are never dropped silently.
pub fn normalize(table: &ContingencyTable) -> Result<CorrespondenceMatrix> {
    let n = table.total();
    let p = table.values() / n;
    CorrespondenceMatrix::from_probabilities(p, n)
}
