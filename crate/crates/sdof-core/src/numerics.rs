//! Complex dense linear algebra for the precoder designs: SVD-based null
//! spaces, Hermitian-definite generalized eigenproblems, and stable
//! log-determinant rate evaluation.
//!
//! Backed by nalgebra's complex factorizations. Null bases are built as
//! orthonormal complements of SVD column bases rather than from a Gram
//! matrix, which keeps their residuals at machine precision instead of
//! sqrt(machine precision). All zero-dimension edge cases (empty channel
//! matrices from degenerate antenna splits) are handled explicitly because
//! the underlying factorizations reject empty inputs.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Result, SdofError};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Relative singular-value threshold: anything below this times the
/// largest singular value counts as zero when judging rank.
pub const RANK_TOL_REL: f64 = 1e-10;

/// Relative positive-definiteness floor: a Cholesky pivot below this times
/// trace/dim means the matrix is treated as singular.
pub const PD_TOL_REL: f64 = 1e-12;

/// Orthonormal basis of a null space, together with the relative rank
/// threshold that was used to decide its dimension.
#[derive(Debug, Clone)]
pub struct NullBasis {
    pub basis: CMatrix,
    pub tol_used: f64,
}

impl NullBasis {
    /// Number of basis vectors.
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }
}

// --- internal building blocks ---

/// Orthonormal basis of the column space, with rank cut at
/// `RANK_TOL_REL * sigma_max`. Empty or all-zero input gives a basis with
/// zero columns.
fn col_basis(m: &CMatrix) -> Result<CMatrix> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Ok(CMatrix::zeros(rows, 0));
    }
    let svd = m.clone().try_svd(true, false, f64::EPSILON, 0).ok_or_else(|| {
        SdofError::Numerical(format!("SVD did not converge on a {rows}x{cols} matrix"))
    })?;
    let u = svd.u.expect("u requested");
    let sv = svd.singular_values;
    let smax = sv[0];
    if smax <= 0.0 {
        return Ok(CMatrix::zeros(rows, 0));
    }
    let rank = sv.iter().take_while(|&&s| s > RANK_TOL_REL * smax).count();
    Ok(u.columns(0, rank).into_owned())
}

/// Orthonormal basis of the orthogonal complement of span(u1) in C^dim,
/// where u1 has orthonormal columns. Pivoted modified Gram-Schmidt over
/// the identity candidates, with a second orthogonalization pass per
/// vector; keeps residuals at machine precision and picks the coordinate
/// axes exactly when u1 is empty.
fn orthonormal_complement(u1: &CMatrix, dim: usize) -> CMatrix {
    let r = u1.ncols();
    debug_assert!(u1.nrows() == dim);
    let want = dim - r;
    let mut basis = CMatrix::zeros(dim, want);
    if want == 0 {
        return basis;
    }

    let mut candidates: Vec<CVector> = (0..dim)
        .map(|i| {
            let mut e = CVector::zeros(dim);
            e[i] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();
    let mut used = vec![false; dim];

    let project_out = |v: &mut CVector, u1: &CMatrix, picked: &CMatrix, npicked: usize| {
        if u1.ncols() > 0 {
            let coeff = u1.adjoint() * &*v;
            *v -= u1 * coeff;
        }
        for j in 0..npicked {
            let col = picked.column(j).into_owned();
            let c: Complex64 = col.dotc(v);
            v.axpy(-c, &col, Complex64::new(1.0, 0.0));
        }
    };

    for cand in candidates.iter_mut() {
        project_out(cand, u1, &basis, 0);
    }

    for k in 0..want {
        // Pivot: the candidate with the strictly largest remaining norm is
        // the most numerically independent choice. Ties keep the earliest
        // coordinate so an empty span yields the identity columns in order.
        let mut best = usize::MAX;
        let mut best_norm = -1.0;
        for (i, v) in candidates.iter().enumerate() {
            if !used[i] {
                let n = v.norm();
                if n > best_norm {
                    best = i;
                    best_norm = n;
                }
            }
        }
        used[best] = true;
        let mut v = candidates[best].clone();
        project_out(&mut v, u1, &basis, k); // second pass for stability
        let n = v.norm();
        v /= Complex64::new(n, 0.0);
        basis.set_column(k, &v);
        for (i, cand) in candidates.iter_mut().enumerate() {
            if !used[i] {
                let c: Complex64 = v.dotc(cand);
                cand.axpy(-c, &v, Complex64::new(1.0, 0.0));
            }
        }
    }
    basis
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Cholesky with the crate's relative positive-definiteness floor.
fn cholesky_checked(s: &CMatrix, what: &str) -> Result<nalgebra::Cholesky<Complex64, nalgebra::Dyn>> {
    let n = s.nrows();
    // Absolute values: equals the trace for genuinely positive definite
    // input, but keeps the threshold meaningful for indefinite garbage
    // whose signed trace can cancel to zero.
    let trace = s.diagonal().iter().map(|d| d.re.abs()).sum::<f64>();
    let chol = nalgebra::Cholesky::new(s.clone()).ok_or_else(|| {
        SdofError::Numerical(format!("{what} is not positive definite"))
    })?;
    // Written so a NaN pivot (which the factorization can emit instead of
    // failing on indefinite input) also lands in the error branch.
    let threshold = PD_TOL_REL * trace / n.max(1) as f64;
    for i in 0..n {
        let pivot = chol.l_dirty()[(i, i)].re.powi(2);
        if !(pivot > threshold) {
            return Err(SdofError::Numerical(format!(
                "{what} is not positive definite within tolerance (pivot {pivot:.3e})"
            )));
        }
    }
    Ok(chol)
}

/// Orthonormal basis of the column space (for building projectors onto
/// spans of non-orthonormal vector collections).
pub(crate) fn range_basis(m: &CMatrix) -> Result<CMatrix> {
    col_basis(m)
}

// --- public operations ---

/// Orthonormal basis of the left null space of `m` (all u with u^H m = 0).
/// Dimension is rows - rank, with rank judged by singular values above
/// [`RANK_TOL_REL`] times the largest. A matrix with zero columns has full
/// left null space (the identity basis, exactly).
pub fn left_null_basis(m: &CMatrix) -> Result<NullBasis> {
    let u1 = col_basis(m)?;
    let basis = orthonormal_complement(&u1, m.nrows());
    Ok(NullBasis { basis, tol_used: RANK_TOL_REL })
}

/// Orthonormal basis of the (right) null space of `m` (all v with
/// m v = 0). Dimension is cols - rank.
pub fn null_basis(m: &CMatrix) -> Result<NullBasis> {
    let u1 = col_basis(&m.adjoint())?;
    let basis = orthonormal_complement(&u1, m.ncols());
    Ok(NullBasis { basis, tol_used: RANK_TOL_REL })
}

/// Top-k generalized eigenpairs of the Hermitian-definite pencil (a, b),
/// descending by eigenvalue; b must be Hermitian positive definite.
/// Eigenvectors are b-orthonormal (v^H b v = 1).
///
/// Route: Cholesky b = L L^H, then an ordinary Hermitian eigenproblem on
/// L^-1 a L^-H, mapping eigenvectors back through L^-H.
pub fn gen_eig_hermitian(a: &CMatrix, b: &CMatrix, k: usize) -> Result<Vec<(f64, CVector)>> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n || b.ncols() != n {
        return Err(SdofError::Dimension(format!(
            "generalized eigenproblem needs square matrices of one size, got {}x{} and {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    if k > n {
        return Err(SdofError::Dimension(format!("k = {k} exceeds dimension {n}")));
    }
    if k == 0 || n == 0 {
        return Ok(Vec::new());
    }

    let chol = cholesky_checked(&hermitian_part(b), "pencil matrix b")?;
    let l = chol.l();
    let a_h = hermitian_part(a);

    // C = L^-1 A L^-H, built from two triangular solves.
    let y = l
        .solve_lower_triangular(&a_h)
        .ok_or_else(|| SdofError::Numerical("singular Cholesky factor".into()))?;
    let z = l
        .solve_lower_triangular(&y.adjoint())
        .ok_or_else(|| SdofError::Numerical("singular Cholesky factor".into()))?;
    let c = hermitian_part(&z.adjoint());

    let eig = nalgebra::SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));

    let lt = l.adjoint();
    let mut out = Vec::with_capacity(k);
    for &i in order.iter().take(k) {
        let u = eig.eigenvectors.column(i).into_owned();
        let v = lt
            .solve_upper_triangular(&u)
            .ok_or_else(|| SdofError::Numerical("singular Cholesky factor".into()))?;
        out.push((eig.eigenvalues[i], v));
    }
    Ok(out)
}

/// Mutual-information rate log2 det(I + (sigma^2 I + W)^-1 H Q H^H) in
/// bits, for channel `h`, transmit covariance `q` and interference
/// covariance `w`. Computed through Cholesky factors only: whiten by
/// S = sigma^2 I + W, form the whitened signal covariance, and take its
/// log-determinant. Errors if S is not positive definite within
/// tolerance. A receiver or transmitter with zero antennas gets 0 bits.
pub fn rate_logdet(h: &CMatrix, q: &CMatrix, w: &CMatrix, sigma2: f64) -> Result<f64> {
    let (m, n) = h.shape();
    if q.nrows() != n || q.ncols() != n {
        return Err(SdofError::Dimension(format!(
            "transmit covariance is {}x{}, expected {n}x{n}",
            q.nrows(),
            q.ncols()
        )));
    }
    if w.nrows() != m || w.ncols() != m {
        return Err(SdofError::Dimension(format!(
            "interference covariance is {}x{}, expected {m}x{m}",
            w.nrows(),
            w.ncols()
        )));
    }
    if sigma2 <= 0.0 {
        return Err(SdofError::Config(format!("noise power must be positive, got {sigma2}")));
    }
    if m == 0 || n == 0 {
        return Ok(0.0);
    }

    let s = hermitian_part(w) + CMatrix::identity(m, m) * Complex64::new(sigma2, 0.0);
    let chol = cholesky_checked(&s, "noise-plus-interference covariance")?;
    let bw = chol
        .l()
        .solve_lower_triangular(h)
        .ok_or_else(|| SdofError::Numerical("singular Cholesky factor".into()))?;
    let signal = hermitian_part(&(&bw * hermitian_part(q) * bw.adjoint()));
    let eye_plus = CMatrix::identity(m, m) + signal;
    let chol2 = cholesky_checked(&hermitian_part(&eye_plus), "whitened signal covariance")?;
    let logdet: f64 = (0..m).map(|i| 2.0 * chol2.l_dirty()[(i, i)].re.log2()).sum();
    Ok(logdet.max(0.0))
}

// --- tests ---
