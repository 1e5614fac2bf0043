//! Small dense complex least-squares solves by modified Gram–Schmidt QR.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Minimizes `‖A c − b‖₂` for a tall matrix given row by row.
pub fn least_squares(rows: &[Vec<Complex64>], b: &[Complex64]) -> Result<Vec<Complex64>> {
    let m = rows.len();
    let n = rows.first().map_or(0, |r| r.len());
    if n == 0 || m < n || b.len() != m || rows.iter().any(|r| r.len() != n) {
        return Err(Error::InsufficientData(format!(
            "least squares needs at least {n} consistent rows, got {m}"
        )));
    }
    // Column-major copy; columns are orthonormalized in place.
    let mut q: Vec<Vec<Complex64>> = (0..n)
        .map(|j| rows.iter().map(|r| r[j]).collect())
        .collect();
    let mut r = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    let scale: f64 = q.iter().map(|c| norm(c)).fold(0.0, f64::max);
    for j in 0..n {
        for i in 0..j {
            let d = dot(&q[i], &q[j]);
            r[i][j] = d;
            let qi = q[i].clone();
            for (x, y) in q[j].iter_mut().zip(qi) {
                *x -= d * y;
            }
        }
        let nj = norm(&q[j]);
        if nj <= 1e-13 * scale {
            return Err(Error::Singular(format!(
                "least-squares column {j} is dependent"
            )));
        }
        r[j][j] = Complex64::new(nj, 0.0);
        for x in q[j].iter_mut() {
            *x /= nj;
        }
    }
    let qtb: Vec<Complex64> = (0..n).map(|j| dot(&q[j], b)).collect();
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    for j in (0..n).rev() {
        let mut s = qtb[j];
        for k in j + 1..n {
            s -= r[j][k] * c[k];
        }
        c[j] = s / r[j][j];
    }
    Ok(c)
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}
