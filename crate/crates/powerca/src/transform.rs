//! Elementwise and structural preprocessing: power and log transforms,
//! indicator reduction, proportional-line merging, zero-pattern
//! statistics, and the one-zero-column reduction to a 2 x 2 table.

use nalgebra::DMatrix;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::table::ContingencyTable;

/// Entrywise power `n_ij^alpha` for `alpha` in `(0, 1]`.
///
/// Zeros stay zero (`0^alpha = 0` by continuity); `alpha = 0` is
/// rejected rather than returning the all-ones table, so that callers
/// reach the indicator limit through [`indicator`] intentionally.
pub fn power_transform(table: &ContingencyTable, alpha: f64) -> Result<ContingencyTable> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    let values = table
        .values()
        .map(|v| if v == 0.0 { 0.0 } else { v.powf(alpha) });
    ContingencyTable::new(
        values,
        table.row_labels().to_vec(),
        table.col_labels().to_vec(),
    )
}

/// The 0/1 pattern of positive entries, the `alpha -> 0` limit of the
/// power transform.
pub fn indicator(table: &ContingencyTable) -> ContingencyTable {
    let values = table.values().map(|v| if v > 0.0 { 1.0 } else { 0.0 });
    ContingencyTable::new(
        values,
        table.row_labels().to_vec(),
        table.col_labels().to_vec(),
    )
    .expect("indicator of a valid table is valid")
}

/// Entrywise natural logarithm; every entry must be strictly positive.
pub fn log_transform(table: &ContingencyTable) -> Result<DMatrix<f64>> {
    for j in 0..table.ncols() {
        for i in 0..table.nrows() {
            if table.get(i, j) <= 0.0 {
                return Err(Error::NonPositiveEntry { row: i, col: j });
            }
        }
    }
    Ok(table.values().map(f64::ln))
}

/// Result of merging proportional rows and columns.
///
/// `row_groups` and `col_groups` partition the original indices; each
/// group is pairwise proportional and its lines were summed into one
/// line of `merged`.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeReport {
    pub merged: ContingencyTable,
    pub row_groups: Vec<Vec<usize>>,
    pub col_groups: Vec<Vec<usize>>,
}

/// Cross-product proportionality test; exact for integer counts, no
/// divisions, zero lines compare proportional to everything.
fn proportional(x: &[f64], y: &[f64], tol: f64) -> bool {
    let max_x = x.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let max_y = y.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let bound = tol * max_x * max_y;
    for i in 0..x.len() {
        for j in (i + 1)..x.len() {
            if (x[i] * y[j] - x[j] * y[i]).abs() > bound {
                return false;
            }
        }
    }
    true
}

fn group_proportional_lines(lines: &[Vec<f64>], tol: f64) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut assigned = vec![false; lines.len()];
    for i in 0..lines.len() {
        if assigned[i] {
            continue;
        }
        let mut group = vec![i];
        assigned[i] = true;
        for j in (i + 1)..lines.len() {
            if assigned[j] {
                continue;
            }
            if group
                .iter()
                .all(|&k| proportional(&lines[k], &lines[j], tol))
            {
                group.push(j);
                assigned[j] = true;
            }
        }
        groups.push(group);
    }
    groups
}

fn merge_rows_once(
    values: &DMatrix<f64>,
    labels: &[String],
    tol: f64,
) -> (DMatrix<f64>, Vec<String>, Vec<Vec<usize>>) {
    let lines: Vec<Vec<f64>> = (0..values.nrows())
        .map(|i| values.row(i).iter().copied().collect())
        .collect();
    let groups = group_proportional_lines(&lines, tol);
    let merged = DMatrix::from_fn(groups.len(), values.ncols(), |gi, j| {
        groups[gi].iter().map(|&i| values[(i, j)]).sum()
    });
    let merged_labels = groups
        .iter()
        .map(|g| {
            g.iter()
                .map(|&i| labels[i].as_str())
                .collect::<Vec<_>>()
                .join("+")
        })
        .collect();
    (merged, merged_labels, groups)
}

fn compose(outer: &[Vec<usize>], inner: &[Vec<usize>]) -> Vec<Vec<usize>> {
    inner
        .iter()
        .map(|g| {
            let mut members: Vec<usize> =
                g.iter().flat_map(|&k| outer[k].iter().copied()).collect();
            members.sort_unstable();
            members
        })
        .collect()
}

/// Merges pairwise-proportional rows and/or columns, repeating until a
/// fixpoint; the CA/TCA of the merged table equals that of the original
/// by distributional equivalence.
pub fn merge_proportional(table: &ContingencyTable, rows: bool, cols: bool) -> MergeReport {
    let tol = Tolerances::DEFAULT.proportionality;
    let mut values = table.values().clone();
    let mut row_labels = table.row_labels().to_vec();
    let mut col_labels = table.col_labels().to_vec();
    let mut row_groups: Vec<Vec<usize>> = (0..values.nrows()).map(|i| vec![i]).collect();
    let mut col_groups: Vec<Vec<usize>> = (0..values.ncols()).map(|j| vec![j]).collect();

    loop {
        let mut changed = false;
        if rows {
            let (merged, labels, groups) = merge_rows_once(&values, &row_labels, tol);
            if merged.nrows() < values.nrows() {
                row_groups = compose(&row_groups, &groups);
                values = merged;
                row_labels = labels;
                changed = true;
            }
        }
        if cols {
            let transposed = values.transpose();
            let (merged_t, labels, groups) = merge_rows_once(&transposed, &col_labels, tol);
            if merged_t.nrows() < values.ncols() {
                col_groups = compose(&col_groups, &groups);
                values = merged_t.transpose();
                col_labels = labels;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let merged = ContingencyTable::from_parts_relaxed(values, row_labels, col_labels)
        .expect("merged table entries stay nonnegative");
    MergeReport {
        merged,
        row_groups,
        col_groups,
    }
}

/// Zero-cell counts of a table.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroStats {
    pub total_cells: usize,
    pub zero_cells: usize,
    pub zero_percent: f64,
    pub per_column_zeros: Vec<usize>,
}

pub fn zero_stats(table: &ContingencyTable) -> ZeroStats {
    let total_cells = table.nrows() * table.ncols();
    let per_column_zeros: Vec<usize> = (0..table.ncols())
        .map(|j| {
            (0..table.nrows())
                .filter(|&i| table.get(i, j) == 0.0)
                .count()
        })
        .collect();
    let zero_cells = per_column_zeros.iter().sum();
    ZeroStats {
        total_cells,
        zero_cells,
        zero_percent: 100.0 * zero_cells as f64 / total_cells as f64,
        per_column_zeros,
    }
}

/// The 2 x 2 table equivalent (by merging) to an `I x J` indicator
/// matrix with `m` zeros in one column:
/// `[[0, m(J-1)], [I-m, (I-m)(J-1)]]`, grand total `IJ - m`.
pub fn one_zero_column_reduction(rows: usize, cols: usize, m: usize) -> Result<ContingencyTable> {
    if cols < 2 {
        return Err(Error::InvalidTable(format!(
            "need at least 2 columns, got {cols}"
        )));
    }
    if m < 1 || m > rows.saturating_sub(1) {
        return Err(Error::BadZeroCount {
            m,
            max: rows.saturating_sub(1),
        });
    }
    let (i, j, m_f) = (rows as f64, cols as f64, m as f64);
    let values = DMatrix::from_row_slice(
        2,
        2,
        &[0.0, m_f * (j - 1.0), i - m_f, (i - m_f) * (j - 1.0)],
    );
    ContingencyTable::new(
        values,
        vec!["zero_rows".into(), "pos_rows".into()],
        vec!["zero_col".into(), "pos_cols".into()],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn table(rows: &[Vec<f64>]) -> ContingencyTable {
        ContingencyTable::from_rows(rows).unwrap()
    }

    #[test]
    fn power_identity_at_one() {
        let t = table(&[vec![1.0, 5.0], vec![2.0, 7.0]]);
        let p = power_transform(&t, 1.0).unwrap();
        assert_eq!(p.values(), t.values());
    }

    #[test]
    fn square_roots() {
        let t = table(&[vec![4.0, 9.0], vec![1.0, 16.0]]);
        let p = power_transform(&t, 0.5).unwrap();
        assert_eq!(
            p.values(),
            table(&[vec![2.0, 3.0], vec![1.0, 4.0]]).values()
        );
    }

    #[test]
    fn small_alpha_stays_near_one_and_keeps_zeros() {
        let t = table(&[vec![0.0, 1.0, 37.0], vec![10000.0, 250.0, 3.0]]);
        let p = power_transform(&t, 1e-4).unwrap();
        assert_eq!(p.get(0, 0), 0.0);
        for j in 0..3 {
            for i in 0..2 {
                let v = p.get(i, j);
                if v != 0.0 {
                    assert!((0.999..=1.001).contains(&v), "entry {v}");
                }
            }
        }
    }

    #[test]
    fn alpha_domain() {
        let t = table(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert!(matches!(
            power_transform(&t, 0.0),
            Err(Error::InvalidAlpha(_))
        ));
        assert!(matches!(
            power_transform(&t, -0.5),
            Err(Error::InvalidAlpha(_))
        ));
        assert!(matches!(
            power_transform(&t, 1.5),
            Err(Error::InvalidAlpha(_))
        ));
    }

    #[test]
    fn indicator_pattern_and_idempotence() {
        let t = table(&[vec![0.0, 3.0], vec![2.0, 0.0]]);
        let z = indicator(&t);
        assert_eq!(
            z.values(),
            table(&[vec![0.0, 1.0], vec![1.0, 0.0]]).values()
        );
        assert_eq!(indicator(&z).values(), z.values());
    }

    #[test]
    fn indicator_of_positive_table_is_all_ones() {
        let t = table(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]);
        let z = indicator(&t);
        assert!(z.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn log_values() {
        let e = std::f64::consts::E;
        let t = table(&[vec![e, e * e], vec![1.0, e]]);
        let l = log_transform(&t).unwrap();
        assert_abs_diff_eq!(l[(0, 0)], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(l[(0, 1)], 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(l[(1, 0)], 0.0, epsilon = 1e-14);

        let ones = table(&[vec![1.0, 1.0], vec![1.0, 1.0]]);
        assert!(log_transform(&ones).unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn log_rejects_zero() {
        let t = table(&[vec![0.0, 1.0], vec![2.0, 3.0]]);
        assert!(matches!(
            log_transform(&t),
            Err(Error::NonPositiveEntry { row: 0, col: 0 })
        ));
    }

    #[test]
    fn merges_exactly_proportional_rows() {
        let t = table(&[
            vec![1.0, 2.0, 3.0],
            vec![2.0, 4.0, 6.0],
            vec![1.0, 0.0, 1.0],
        ]);
        let report = merge_proportional(&t, true, true);
        assert_eq!(report.merged.nrows(), 2);
        assert_eq!(report.row_groups[0], vec![0, 1]);
        let first_row: Vec<f64> = report.merged.values().row(0).iter().copied().collect();
        assert_eq!(first_row, vec![3.0, 6.0, 9.0]);
        assert_eq!(report.merged.row_labels()[0], "R1+R2");
    }

    #[test]
    fn merge_is_idempotent() {
        let t = table(&[
            vec![1.0, 2.0, 2.0, 5.0],
            vec![3.0, 6.0, 6.0, 15.0],
            vec![1.0, 1.0, 1.0, 0.0],
            vec![2.0, 0.0, 0.0, 7.0],
        ]);
        let once = merge_proportional(&t, true, true);
        let twice = merge_proportional(&once.merged, true, true);
        assert_eq!(once.merged.values(), twice.merged.values());
    }

    #[test]
    fn merged_groups_are_pairwise_proportional() {
        let t = table(&[
            vec![1.0, 2.0, 4.0],
            vec![3.0, 6.0, 12.0],
            vec![0.5, 1.0, 2.0],
            vec![1.0, 1.0, 1.0],
        ]);
        let report = merge_proportional(&t, true, false);
        assert_eq!(report.row_groups[0], vec![0, 1, 2]);
        let tol = Tolerances::DEFAULT.proportionality;
        for g in &report.row_groups {
            for a in 0..g.len() {
                for b in (a + 1)..g.len() {
                    let x: Vec<f64> = t.values().row(g[a]).iter().copied().collect();
                    let y: Vec<f64> = t.values().row(g[b]).iter().copied().collect();
                    assert!(proportional(&x, &y, tol));
                }
            }
        }
    }

    #[test]
    fn rank_one_table_collapses() {
        let t = table(&[vec![1.0, 1.0], vec![1.0, 1.0], vec![2.0, 2.0]]);
        let report = merge_proportional(&t, true, true);
        assert_eq!(report.merged.nrows(), 1);
        assert_eq!(report.merged.ncols(), 1);
        assert_eq!(report.merged.get(0, 0), 8.0);
    }

    #[test]
    fn merges_rows_and_columns_together() {
        let t = table(&[
            vec![1.0, 2.0, 4.0, 1.0],
            vec![3.0, 1.0, 2.0, 5.0],
            vec![2.0, 4.0, 8.0, 2.0],
            vec![6.0, 2.0, 4.0, 10.0],
        ]);
        // rows {0,2} and {1,3} proportional; columns {1,2} proportional
        let report = merge_proportional(&t, true, true);
        assert_eq!(report.row_groups, vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(report.col_groups, vec![vec![0], vec![1, 2], vec![3]]);
        assert_eq!(report.merged.nrows(), 2);
        assert_eq!(report.merged.ncols(), 3);
        assert_eq!(
            report.merged.values(),
            table(&[vec![3.0, 18.0, 3.0], vec![9.0, 9.0, 15.0]]).values()
        );
        assert_eq!(report.merged.col_labels()[1], "C2+C3");
    }

    #[test]
    fn rows_only_merge_leaves_columns_alone() {
        let t = table(&[vec![1.0, 2.0], vec![2.0, 4.0], vec![1.0, 0.0]]);
        let report = merge_proportional(&t, true, false);
        assert_eq!(report.merged.nrows(), 2);
        assert_eq!(report.merged.ncols(), 2);
        assert_eq!(report.col_groups, vec![vec![0], vec![1]]);
    }

    #[test]
    fn zero_statistics() {
        let t = table(&[vec![0.0, 3.0, 0.0], vec![2.0, 0.0, 5.0]]);
        let s = zero_stats(&t);
        assert_eq!(s.total_cells, 6);
        assert_eq!(s.zero_cells, 3);
        assert_abs_diff_eq!(s.zero_percent, 50.0, epsilon = 1e-12);
        assert_eq!(s.per_column_zeros, vec![1, 1, 1]);

        let pos = table(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert_eq!(zero_stats(&pos).zero_percent, 0.0);
    }

    #[test]
    fn reduction_tables() {
        let r = one_zero_column_reduction(12, 26, 1).unwrap();
        assert_eq!(
            r.values(),
            table(&[vec![0.0, 25.0], vec![11.0, 275.0]]).values()
        );
        assert_eq!(r.total(), (12 * 26 - 1) as f64);

        let r = one_zero_column_reduction(105, 11, 26).unwrap();
        assert_eq!(
            r.values(),
            table(&[vec![0.0, 260.0], vec![79.0, 790.0]]).values()
        );
        assert_eq!(r.total(), (105 * 11 - 26) as f64);

        let r = one_zero_column_reduction(2, 2, 1).unwrap();
        assert_eq!(
            r.values(),
            table(&[vec![0.0, 1.0], vec![1.0, 1.0]]).values()
        );
    }

    #[test]
    fn reduction_validates_zero_count() {
        assert!(matches!(
            one_zero_column_reduction(12, 26, 0),
            Err(Error::BadZeroCount { .. })
        ));
        assert!(matches!(
            one_zero_column_reduction(12, 26, 12),
            Err(Error::BadZeroCount { .. })
        ));
    }

    #[test]
    fn power_converges_monotonically_to_indicator() {
        let t = table(&[vec![0.0, 2.0, 37.0], vec![400.0, 0.3, 1.0]]);
        let z = indicator(&t);
        let alphas = [0.5, 0.1, 0.01, 0.001];
        let mut last = f64::INFINITY;
        for &alpha in &alphas {
            let p = power_transform(&t, alpha).unwrap();
            let diff = (p.values() - z.values()).abs().max();
            assert!(diff <= last + 1e-15, "not monotone at alpha={alpha}");
            // |n^a - 1| <= a |ln n| e^(a |ln n|) over positive entries
            let max_log = t
                .values()
                .iter()
                .filter(|&&v| v > 0.0)
                .fold(0.0f64, |a, &v| a.max(v.ln().abs()));
            assert!(diff <= alpha * max_log * (alpha * max_log).exp() + 1e-15);
            last = diff;
        }
    }
}
