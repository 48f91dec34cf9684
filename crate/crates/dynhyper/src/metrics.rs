//! Partition agreement metrics: normalized mutual information and the
//! adjusted Rand index, computed from the label contingency table.

use crate::error::{Error, Result};

/// Counts n_ij of items with label i in `a` and j in `b`, plus marginals.
struct Contingency {
    table: Vec<Vec<u64>>,
    row: Vec<u64>,
    col: Vec<u64>,
    n: u64,
}

fn contingency(a: &[u32], b: &[u32]) -> Result<Contingency> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            a: a.len(),
            b: b.len(),
        });
    }
    let ka = a.iter().copied().max().map_or(0, |m| m as usize + 1);
    let kb = b.iter().copied().max().map_or(0, |m| m as usize + 1);
    let mut table = vec![vec![0u64; kb]; ka];
    for (&x, &y) in a.iter().zip(b) {
        table[x as usize][y as usize] += 1;
    }
    let row: Vec<u64> = table.iter().map(|r| r.iter().sum()).collect();
    let col: Vec<u64> = (0..kb).map(|j| table.iter().map(|r| r[j]).sum()).collect();
    Ok(Contingency {
        table,
        row,
        col,
        n: a.len() as u64,
    })
}

/// Normalized mutual information, geometric normalization
/// I(a; b) / sqrt(H(a) H(b)).
///
/// Conventions for degenerate partitions: if both labelings are constant the
/// score is 1 when they agree as partitions (they always do), and 0 if
/// exactly one entropy is zero.
pub fn nmi(a: &[u32], b: &[u32]) -> Result<f64> {
    let c = contingency(a, b)?;
    let n = c.n as f64;
    let mut h_a = 0.0;
    for &r in &c.row {
        if r > 0 {
            let p = r as f64 / n;
            h_a -= p * p.ln();
        }
    }
    let mut h_b = 0.0;
    for &s in &c.col {
        if s > 0 {
            let p = s as f64 / n;
            h_b -= p * p.ln();
        }
    }
    if h_a == 0.0 && h_b == 0.0 {
        return Ok(1.0);
    }
    if h_a == 0.0 || h_b == 0.0 {
        return Ok(0.0);
    }
    let mut mi = 0.0;
    for (i, row) in c.table.iter().enumerate() {
        for (j, &nij) in row.iter().enumerate() {
            if nij > 0 {
                let pij = nij as f64 / n;
                let pi = c.row[i] as f64 / n;
                let pj = c.col[j] as f64 / n;
                mi += pij * (pij / (pi * pj)).ln();
            }
        }
    }
    Ok((mi / (h_a * h_b).sqrt()).clamp(0.0, 1.0))
}

/// Adjusted Rand index. 1 for identical partitions (up to relabeling), about
/// 0 for independent ones; can be negative and is reported raw.
pub fn ari(a: &[u32], b: &[u32]) -> Result<f64> {
    let c = contingency(a, b)?;
    let choose2 = |x: u64| (x * x.saturating_sub(1) / 2) as f64;
    let sum_ij: f64 = c
        .table
        .iter()
        .flat_map(|r| r.iter())
        .map(|&x| choose2(x))
        .sum();
    let sum_a: f64 = c.row.iter().map(|&x| choose2(x)).sum();
    let sum_b: f64 = c.col.iter().map(|&x| choose2(x)).sum();
    let total = choose2(c.n);
    let expected = sum_a * sum_b / total;
    let max_index = 0.5 * (sum_a + sum_b);
    if (max_index - expected).abs() < 1e-300 {
        // both partitions trivial (all singletons or all one cluster)
        return Ok(1.0);
    }
    Ok((sum_ij - expected) / (max_index - expected))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_up_to_relabeling() {
        let a = vec![0, 0, 1, 1, 2, 2];
        let b = vec![2, 2, 0, 0, 1, 1];
        assert_eq!(nmi(&a, &b).unwrap(), 1.0);
        assert_eq!(ari(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn constant_vs_balanced() {
        let a = vec![0, 0, 0, 0];
        let b = vec![0, 0, 1, 1];
        assert_eq!(nmi(&a, &b).unwrap(), 0.0);
        assert_eq!(ari(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn six_node_example_brute_force() {
        // labels (0,0,0,1,1,1) vs (0,0,1,1,1,1); ARI checked against direct
        // pair counting over all C(6,2) = 15 pairs
        let a = vec![0, 0, 0, 1, 1, 1];
        let b = vec![0, 0, 1, 1, 1, 1];
        let mut same_same = 0.0;
        let mut same_diff = 0.0;
        let mut diff_same = 0.0;
        let mut diff_diff = 0.0;
        for i in 0..6 {
            for j in (i + 1)..6 {
                match (a[i] == a[j], b[i] == b[j]) {
                    (true, true) => same_same += 1.0,
                    (true, false) => same_diff += 1.0,
                    (false, true) => diff_same += 1.0,
                    (false, false) => diff_diff += 1.0,
                }
            }
        }
        // ARI from the pair-count form
        let n_pairs = 15.0;
        let sum_a = same_same + same_diff;
        let sum_b = same_same + diff_same;
        let expected = sum_a * sum_b / n_pairs;
        let max_index = 0.5 * (sum_a + sum_b);
        let want = (same_same - expected) / (max_index - expected);
        let got = ari(&a, &b).unwrap();
        assert!((got - want).abs() < 1e-12, "got {got} want {want}");
        let _ = diff_diff;

        // NMI by direct formula for the same pair
        let got_nmi = nmi(&a, &b).unwrap();
        let h = |ps: &[f64]| -> f64 { ps.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum() };
        let h_a = h(&[0.5, 0.5]);
        let h_b = h(&[2.0 / 6.0, 4.0 / 6.0]);
        let mi = {
            let cells: [(f64, f64, f64); 3] = [
                (2.0 / 6.0, 0.5, 2.0 / 6.0),
                (1.0 / 6.0, 0.5, 4.0 / 6.0),
                (3.0 / 6.0, 0.5, 4.0 / 6.0),
            ];
            cells
                .iter()
                .map(|&(pij, pi, pj)| pij * (pij / (pi * pj)).ln())
                .sum::<f64>()
        };
        let want_nmi = mi / (h_a * h_b).sqrt();
        assert!((got_nmi - want_nmi).abs() < 1e-12);
    }

    #[test]
    fn length_mismatch_rejected() {
        assert!(matches!(
            nmi(&[0, 1], &[0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            ari(&[0], &[0, 1]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn ari_can_go_negative() {
        // anti-correlated partitions on 4 points
        let a = vec![0, 0, 1, 1];
        let b = vec![0, 1, 0, 1];
        let v = ari(&a, &b).unwrap();
        assert!(v < 0.0, "ari {v}");
    }
}
