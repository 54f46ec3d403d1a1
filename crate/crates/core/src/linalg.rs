use nalgebra::DMatrix;

/// Gram–Schmidt with one re-orthogonalization pass, processing columns in
/// index order. Returns `(q, r)` with `a = q * r`, `q` orthonormal and `r`
/// upper triangular with positive diagonal, so orientation is preserved.
/// `None` when a column is (numerically) dependent on its predecessors.
pub fn gram_schmidt(a: &DMatrix<f64>) -> Option<(DMatrix<f64>, DMatrix<f64>)> {
    let (rows, cols) = a.shape();
    let mut q = DMatrix::<f64>::zeros(rows, cols);
    let mut r = DMatrix::<f64>::zeros(cols, cols);
    for j in 0..cols {
        let mut v = a.column(j).clone_owned();
        let scale = v.norm();
        for _pass in 0..2 {
            for i in 0..j {
                let coeff = q.column(i).dot(&v);
                r[(i, j)] += coeff;
                v.axpy(-coeff, &q.column(i), 1.0);
            }
        }
        let len = v.norm();
        if !(len > 1e-14 * scale.max(f64::MIN_POSITIVE)) || len == 0.0 {
            return None;
        }
        r[(j, j)] = len;
        q.set_column(j, &(v / len));
    }
    Some((q, r))
}

/// Singular values sorted in descending order.
pub fn singular_values_desc(a: &DMatrix<f64>) -> Vec<f64> {
    let mut s: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Largest absolute entry.
pub fn max_abs(a: &DMatrix<f64>) -> f64 {
    a.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(a: &DMatrix<f64>) -> Vec<f64> {
    let sym = (a + a.transpose()) * 0.5;
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}
