//! Independent dense eigensolver used only to cross-check the power-iteration
//! path: the complex Hermitian matrix embeds into the real symmetric
//! [[X, -Y], [Y, X]] (each eigenvalue doubled), which a cyclic Jacobi sweep
//! diagonalizes. No code is shared with the optimizer.

use qcw_core::HermitianOperator;

/// All eigenvalues of the embedded real symmetric matrix, ascending. Each
/// eigenvalue of the Hermitian input appears twice; the maximum is unchanged.
pub fn eigenvalues_doubled(op: &HermitianOperator) -> Vec<f64> {
    let d = op.dim();
    let n = 2 * d;
    let mut a = vec![vec![0.0f64; n]; n];
    for i in 0..d {
        for j in 0..d {
            let e = op.entry(i, j);
            a[i][j] = e.re;
            a[i][j + d] = -e.im;
            a[i + d][j] = e.im;
            a[i + d][j + d] = e.re;
        }
    }
    let scale: f64 = a
        .iter()
        .flatten()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
        .max(1.0);

    for _sweep in 0..200 {
        let mut off = 0.0;
        for (p, row) in a.iter().enumerate() {
            for value in &row[p + 1..] {
                off += value * value;
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            let mut eigenvalues: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
            eigenvalues.sort_by(f64::total_cmp);
            return eigenvalues;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let rp = row[p];
                    let rq = row[q];
                    row[p] = c * rp - s * rq;
                    row[q] = s * rp + c * rq;
                }
                let (low, high) = a.split_at_mut(q);
                for (apk, aqk) in low[p].iter_mut().zip(high[0].iter_mut()) {
                    let x = *apk;
                    let y = *aqk;
                    *apk = c * x - s * y;
                    *aqk = s * x + c * y;
                }
            }
        }
    }
    panic!("jacobi sweep did not converge");
}

/// Largest eigenvalue of the Hermitian operator.
pub fn max_eigenvalue(op: &HermitianOperator) -> f64 {
    *eigenvalues_doubled(op).last().expect("nonempty spectrum")
}
