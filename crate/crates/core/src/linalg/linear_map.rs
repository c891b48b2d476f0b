use crate::error::{check_dim, invalid, Result};
use crate::linalg::Vector;

/// A linear operator `A: ℝ^dim_in → ℝ^dim_out` together with its adjoint.
///
/// Implementors provide the slice kernels; the `Vector` methods check
/// dimensions and allocate.
pub trait LinearMap: Send + Sync {
    fn dim_in(&self) -> usize;
    fn dim_out(&self) -> usize;

    /// `out = A x`, with `x.len() == dim_in` and `out.len() == dim_out`.
    fn apply_into(&self, x: &[f64], out: &mut [f64]);

    /// `out = Aᵀ y`, with `y.len() == dim_out` and `out.len() == dim_in`.
    fn apply_adjoint_into(&self, y: &[f64], out: &mut [f64]);

    fn apply(&self, x: &Vector) -> Result<Vector> {
        check_dim(self.dim_in(), x.dim())?;
        let mut out = vec![0.0; self.dim_out()];
        self.apply_into(x.as_slice(), &mut out);
        Ok(Vector::from_raw(out))
    }

    fn apply_adjoint(&self, y: &Vector) -> Result<Vector> {
        check_dim(self.dim_out(), y.dim())?;
        let mut out = vec![0.0; self.dim_in()];
        self.apply_adjoint_into(y.as_slice(), &mut out);
        Ok(Vector::from_raw(out))
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return invalid("matrix dimensions must be positive");
        }
        check_dim(rows * cols, data.len())?;
        if data.iter().any(|v| !v.is_finite()) {
            return invalid("matrix entries must be finite");
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        let mut data = vec![0.0; n * n];
        for (i, d) in diag.iter().enumerate() {
            data[i * n + i] = *d;
        }
        Self::new(n, n, data)
    }

    /// Materializes any linear map column by column.
    pub fn materialize(map: &dyn LinearMap) -> Self {
        let (rows, cols) = (map.dim_out(), map.dim_in());
        let mut data = vec![0.0; rows * cols];
        let mut e = vec![0.0; cols];
        let mut col = vec![0.0; rows];
        for j in 0..cols {
            e[j] = 1.0;
            map.apply_into(&e, &mut col);
            for i in 0..rows {
                data[i * cols + j] = col[i];
            }
            e[j] = 0.0;
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut data = vec![0.0; self.data.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn scale(&mut self, a: f64) {
        self.data.iter_mut().for_each(|v| *v *= a);
    }
}

impl LinearMap for DenseMatrix {
    fn dim_in(&self) -> usize {
        self.cols
    }

    fn dim_out(&self) -> usize {
        self.rows
    }

    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        for (o, row) in out.iter_mut().zip(self.data.chunks_exact(self.cols)) {
            let mut acc = 0.0;
            for (a, xj) in row.iter().zip(x) {
                acc += a * xj;
            }
            *o = acc;
        }
    }

    fn apply_adjoint_into(&self, y: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (row, yi) in self.data.chunks_exact(self.cols).zip(y) {
            for (o, a) in out.iter_mut().zip(row) {
                *o += a * yi;
            }
        }
    }
}

/// A dense matrix paired with an explicitly supplied adjoint matrix.
///
/// Used to exercise adjoint checks; nothing forces the two to agree.
#[derive(Debug, Clone)]
pub struct ExplicitPair {
    forward: DenseMatrix,
    adjoint: DenseMatrix,
}

impl ExplicitPair {
    pub fn new(forward: DenseMatrix, adjoint: DenseMatrix) -> Result<Self> {
        check_dim(forward.rows(), adjoint.cols())?;
        check_dim(forward.cols(), adjoint.rows())?;
        Ok(Self { forward, adjoint })
    }
}

impl LinearMap for ExplicitPair {
    fn dim_in(&self) -> usize {
        self.forward.cols()
    }

    fn dim_out(&self) -> usize {
        self.forward.rows()
    }

    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        self.forward.apply_into(x, out);
    }

    fn apply_adjoint_into(&self, y: &[f64], out: &mut [f64]) {
        self.adjoint.apply_into(y, out);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdentityMap {
    dim: usize,
}

impl IdentityMap {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "identity map dimension must be at least 1");
        Self { dim }
    }
}

impl LinearMap for IdentityMap {
    fn dim_in(&self) -> usize {
        self.dim
    }

    fn dim_out(&self) -> usize {
        self.dim
    }

    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        out.copy_from_slice(x);
    }

    fn apply_adjoint_into(&self, y: &[f64], out: &mut [f64]) {
        out.copy_from_slice(y);
    }
}

/// The zero operator; turns the smooth term into a constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZeroMap {
    dim_in: usize,
    dim_out: usize,
}

impl ZeroMap {
    pub fn new(dim_in: usize, dim_out: usize) -> Self {
        assert!(dim_in >= 1 && dim_out >= 1);
        Self { dim_in, dim_out }
    }
}

impl LinearMap for ZeroMap {
    fn dim_in(&self) -> usize {
        self.dim_in
    }

    fn dim_out(&self) -> usize {
        self.dim_out
    }

    fn apply_into(&self, _x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
    }

    fn apply_adjoint_into(&self, _y: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
    }
}
