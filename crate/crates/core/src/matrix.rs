//! Dense matrices with exact entries and echelon-form linear algebra.
//!
//! Everything here is deterministic and exact: reduced row echelon form is
//! the canonical one (unit pivots, zeros above and below, pivot columns
//! strictly increasing), kernels come with a fixed free-variable basis, and
//! inconsistent systems return a certified witness row `y` with `y A = 0`
//! and `y b != 0` rather than a bare failure. The [`SpanAccumulator`] keeps
//! an incrementally reduced basis of a subspace and can express members in
//! coordinates relative to the vectors that were accepted into it, which is
//! how the algebra layer works in coordinates without re-echelonizing.

use rand::Rng;
use thiserror::Error;

use crate::field::{BaseScalar, Field, FieldElement, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix dimensions {0}x{1} and {2}x{3} are incompatible")]
    Shape(usize, usize, usize, usize),
    #[error("matrices belong to different fields")]
    FieldMismatch,
    #[error("ragged rows: expected {expected} entries, found {got}")]
    Ragged { expected: usize, got: usize },
    #[error("matrix is not invertible")]
    Singular,
}

/// Row-major dense matrix over a fixed field.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn zero(field: &Field, rows: usize, cols: usize) -> ExactMatrix {
        ExactMatrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> ExactMatrix {
        let mut m = ExactMatrix::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_elements(
        field: &Field,
        rows: Vec<Vec<FieldElement>>,
    ) -> Result<ExactMatrix, MatrixError> {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(MatrixError::Ragged {
                    expected: ncols,
                    got: row.len(),
                });
            }
            for e in row {
                if e.field() != field {
                    return Err(MatrixError::FieldMismatch);
                }
                data.push(e.into_value());
            }
        }
        Ok(ExactMatrix {
            field: field.clone(),
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    /// Entries given as nonnegative integers, mapped through the field.
    pub fn from_u64_rows(field: &Field, rows: &[Vec<u64>]) -> ExactMatrix {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            assert_eq!(row.len(), ncols, "ragged integer rows");
            for &e in row {
                data.push(field.from_u64(e));
            }
        }
        ExactMatrix {
            field: field.clone(),
            rows: nrows,
            cols: ncols,
            data,
        }
    }

    pub fn from_i64_rows(field: &Field, rows: &[Vec<i64>]) -> ExactMatrix {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            assert_eq!(row.len(), ncols, "ragged integer rows");
            for &e in row {
                data.push(field.from_i64(e));
            }
        }
        ExactMatrix {
            field: field.clone(),
            rows: nrows,
            cols: ncols,
            data,
        }
    }

    pub(crate) fn from_scalar_rows(field: &Field, rows: Vec<Vec<Scalar>>) -> ExactMatrix {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            assert_eq!(row.len(), ncols, "ragged scalar rows");
            data.extend(row);
        }
        ExactMatrix {
            field: field.clone(),
            rows: nrows,
            cols: ncols,
            data,
        }
    }

    pub fn random<R: Rng + ?Sized>(
        field: &Field,
        rows: usize,
        cols: usize,
        rng: &mut R,
    ) -> ExactMatrix {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        ExactMatrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.field.el(self.data[r * self.cols + c].clone())
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        assert!(v.field() == &self.field, "entry from a different field");
        self.data[r * self.cols + c] = v.into_value();
    }

    pub(crate) fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub(crate) fn row_scalars(&self, r: usize) -> Vec<Scalar> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub(crate) fn col_scalars(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    /// Row-major flattening, the coordinate vector used by the span and
    /// algebra layers.
    pub(crate) fn vectorize(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| self.field.is_zero(v))
    }

    pub fn is_identity(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.at(r, c);
                let ok = if r == c {
                    self.field.is_one(v)
                } else {
                    self.field.is_zero(v)
                };
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    fn check_same_shape(&self, other: &ExactMatrix) -> Result<(), MatrixError> {
        if self.field != other.field {
            return Err(MatrixError::FieldMismatch);
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::Shape(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &ExactMatrix) -> ExactMatrix {
        self.check_same_shape(other).expect("matrix addition");
        let data = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| self.field.add(a, b))
            .collect();
        ExactMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &ExactMatrix) -> ExactMatrix {
        self.check_same_shape(other).expect("matrix subtraction");
        let data = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| self.field.sub(a, b))
            .collect();
        ExactMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn neg(&self) -> ExactMatrix {
        let data = self.data.iter().map(|a| self.field.neg(a)).collect();
        ExactMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, c: &FieldElement) -> ExactMatrix {
        assert!(c.field() == &self.field, "scalar from a different field");
        self.scale_raw(c.value())
    }

    pub(crate) fn scale_raw(&self, c: &Scalar) -> ExactMatrix {
        let data = self.data.iter().map(|a| self.field.mul(a, c)).collect();
        ExactMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert!(self.field == other.field, "matrix product across fields");
        assert_eq!(
            self.cols, other.rows,
            "matrix product shape {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let f = self.field.spec();
        let mut out = ExactMatrix::zero(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let t = f.mul(a, b);
                    let cur = &out.data[i * other.cols + j];
                    out.data[i * other.cols + j] = f.add(cur, &t);
                }
            }
        }
        out
    }

    /// Matrix-vector product (column convention).
    pub(crate) fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let f = self.field.spec();
        let mut out = vec![f.zero(); self.rows];
        for i in 0..self.rows {
            let mut acc = f.zero();
            for k in 0..self.cols {
                let a = self.at(i, k);
                if f.is_zero(a) || f.is_zero(&v[k]) {
                    continue;
                }
                let t = f.mul(a, &v[k]);
                acc = f.add(&acc, &t);
            }
            out[i] = acc;
        }
        out
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut out = ExactMatrix::zero(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.at(r, c).clone();
            }
        }
        out
    }

    pub fn pow(&self, e: u64) -> ExactMatrix {
        assert!(self.is_square(), "powers need a square matrix");
        let mut acc = ExactMatrix::identity(&self.field, self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn trace(&self) -> FieldElement {
        assert!(self.is_square(), "trace needs a square matrix");
        let f = self.field.spec();
        let mut acc = f.zero();
        for i in 0..self.rows {
            acc = f.add(&acc, self.at(i, i));
        }
        self.field.el(acc)
    }

    /// Kronecker (tensor) product: `(A kron B)[(i,k),(j,l)] = A[i,j] B[k,l]`.
    pub fn kronecker(&self, other: &ExactMatrix) -> ExactMatrix {
        assert!(self.field == other.field, "tensor product across fields");
        let f = self.field.spec();
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = ExactMatrix::zero(&self.field, rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.at(i, j);
                if f.is_zero(a) {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.at(k, l);
                        if f.is_zero(b) {
                            continue;
                        }
                        let v = f.mul(a, b);
                        out.data[(i * other.rows + k) * cols + (j * other.cols + l)] = v;
                    }
                }
            }
        }
        out
    }

    /// Maps every entry of a base-field matrix into an extension.
    pub fn embed(&self, target: &Field) -> Result<ExactMatrix, crate::field::FieldError> {
        let mut data = Vec::with_capacity(self.data.len());
        for v in &self.data {
            let e = crate::field::embed_base(&self.field.el(v.clone()), target)?;
            data.push(e.into_value());
        }
        Ok(ExactMatrix {
            field: target.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    // -- echelon forms -----------------------------------------------------

    /// Canonical reduced row echelon form.
    pub fn rref(&self) -> ExactMatrix {
        let (rows, _pivots, _t) = row_reduce(&self.field, self.to_rows(), false);
        let mut padded = rows;
        while padded.len() < self.rows {
            padded.push(vec![self.field.zero(); self.cols]);
        }
        ExactMatrix::from_scalar_rows(&self.field, padded)
    }

    pub fn rank(&self) -> usize {
        let (_rows, pivots, _t) = row_reduce(&self.field, self.to_rows(), false);
        pivots.len()
    }

    /// Basis of the right kernel `{x : Ax = 0}`, in the canonical
    /// free-variable order (each basis vector has a 1 in "its" free column
    /// and zeros in the other free columns).
    pub fn kernel(&self) -> Vec<Vec<FieldElement>> {
        let f = self.field.spec();
        let (rows, pivots, _t) = row_reduce(&self.field, self.to_rows(), false);
        let pivot_set: Vec<Option<usize>> = {
            let mut m = vec![None; self.cols];
            for (i, &p) in pivots.iter().enumerate() {
                m[p] = Some(i);
            }
            m
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(&rows[i][free]);
            }
            basis.push(v.into_iter().map(|s| self.field.el(s)).collect());
        }
        basis
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Solves `A X = B` column by column, free variables set to zero.
    /// An inconsistent system yields a certificate `y` with `y A = 0` and
    /// `y B != 0` (a left null row separating `B` from the column space).
    pub fn solve(&self, rhs: &ExactMatrix) -> Result<ExactMatrix, InconsistencyWitness> {
        assert!(self.field == rhs.field, "solve across fields");
        assert_eq!(self.rows, rhs.rows, "rhs row count mismatch");
        let f = self.field.spec();
        let (rows, pivots, transform) = row_reduce(&self.field, self.to_rows(), true);
        let t = transform.expect("transform requested");
        // reduced rhs = T * B
        let rank = pivots.len();
        let mut out = ExactMatrix::zero(&self.field, self.cols, rhs.cols);
        for j in 0..rhs.cols {
            let b = rhs.col_scalars(j);
            let tb: Vec<Scalar> = t
                .iter()
                .map(|trow| {
                    let mut acc = f.zero();
                    for (k, c) in trow.iter().enumerate() {
                        if f.is_zero(c) || f.is_zero(&b[k]) {
                            continue;
                        }
                        let m = f.mul(c, &b[k]);
                        acc = f.add(&acc, &m);
                    }
                    acc
                })
                .collect();
            for (i, tbv) in tb.iter().enumerate().skip(rank) {
                if !f.is_zero(tbv) {
                    let witness = t[i]
                        .iter()
                        .map(|s| self.field.el(s.clone()))
                        .collect::<Vec<_>>();
                    return Err(InconsistencyWitness {
                        row: witness,
                        column: j,
                    });
                }
            }
            for (i, &p) in pivots.iter().enumerate() {
                out.data[p * rhs.cols + j] = tb[i].clone();
            }
        }
        let _ = rows;
        Ok(out)
    }

    pub fn inverse(&self) -> Result<ExactMatrix, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::Shape(self.rows, self.cols, self.cols, self.rows));
        }
        let (_rows, pivots, transform) = row_reduce(&self.field, self.to_rows(), true);
        if pivots.len() != self.rows {
            return Err(MatrixError::Singular);
        }
        let t = transform.expect("transform requested");
        Ok(ExactMatrix::from_scalar_rows(&self.field, t))
    }

    fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row_scalars(r)).collect()
    }
}

/// Certificate that `A x = b` has no solution: a row `y` with `y A = 0`
/// and `y b != 0` (for the indicated rhs column).
#[derive(Clone, Debug)]
pub struct InconsistencyWitness {
    pub row: Vec<FieldElement>,
    pub column: usize,
}

impl std::fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let cells: Vec<Vec<String>> = (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| format!("{}", self.get(r, c)))
                    .collect()
            })
            .collect();
        let widths: Vec<usize> = (0..self.cols)
            .map(|c| cells.iter().map(|row| row[c].len()).max().unwrap_or(1))
            .collect();
        for (i, row) in cells.iter().enumerate() {
            write!(f, "[ ")?;
            for (c, cell) in row.iter().enumerate() {
                write!(f, "{cell:>width$} ", width = widths[c])?;
            }
            write!(f, "]")?;
            if i + 1 < self.rows {
                writeln!(f)?;
            }
        }
        if self.rows == 0 {
            write!(f, "[ ]")?;
        }
        Ok(())
    }
}

impl std::fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{}x{} over {}:", self.rows, self.cols, self.field)?;
        std::fmt::Display::fmt(self, f)
    }
}

/// Gauss-Jordan elimination to canonical reduced row echelon form.
/// Returns the nonzero reduced rows, their pivot columns (strictly
/// increasing), and, when requested, the full `m x m` transform `T` with
/// `T A = R` (rows of `T` beyond the rank witness left-null combinations).
fn row_reduce(
    field: &Field,
    mut rows: Vec<Vec<Scalar>>,
    track: bool,
) -> (Vec<Vec<Scalar>>, Vec<usize>, Option<Vec<Vec<Scalar>>>) {
    let f = field.spec();
    let m = rows.len();
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut t: Option<Vec<Vec<Scalar>>> = if track {
        Some(
            (0..m)
                .map(|i| {
                    let mut r = vec![f.zero(); m];
                    r[i] = f.one();
                    r
                })
                .collect(),
        )
    } else {
        None
    };

    // For rational rows, clear denominators first: pure row scaling, so the
    // canonical result is unchanged while intermediate entries stay small.
    if field.characteristic() == 0 && field.degree() == 1 {
        for (i, row) in rows.iter_mut().enumerate() {
            let scale = common_denominator(row);
            if let Some(s) = scale {
                for v in row.iter_mut() {
                    *v = f.mul(v, &s);
                }
                if let Some(t) = t.as_mut() {
                    for v in t[i].iter_mut() {
                        *v = f.mul(v, &s);
                    }
                }
            }
        }
    }

    let mut pivots = Vec::new();
    let mut next_row = 0usize;
    for col in 0..ncols {
        let Some(pivot_row) = (next_row..m).find(|&r| !f.is_zero(&rows[r][col])) else {
            continue;
        };
        rows.swap(next_row, pivot_row);
        if let Some(t) = t.as_mut() {
            t.swap(next_row, pivot_row);
        }
        let inv = f.inv(&rows[next_row][col]).expect("pivot is nonzero");
        for v in rows[next_row].iter_mut() {
            *v = f.mul(v, &inv);
        }
        if let Some(t) = t.as_mut() {
            for v in t[next_row].iter_mut() {
                *v = f.mul(v, &inv);
            }
        }
        for r in 0..m {
            if r == next_row || f.is_zero(&rows[r][col]) {
                continue;
            }
            let factor = rows[r][col].clone();
            for c in 0..ncols {
                let sub = f.mul(&factor, &rows[next_row][c]);
                rows[r][c] = f.sub(&rows[r][c], &sub);
            }
            if let Some(t) = t.as_mut() {
                for c in 0..m {
                    let sub = f.mul(&factor, &t[next_row][c]);
                    t[r][c] = f.sub(&t[r][c], &sub);
                }
            }
        }
        pivots.push(col);
        next_row += 1;
        if next_row == m {
            break;
        }
    }
    rows.truncate(next_row);
    (rows, pivots, t)
}

/// Least common multiple of the denominators in a rational row, as a
/// scalar, or `None` when scaling would be a no-op.
fn common_denominator(row: &[Scalar]) -> Option<Scalar> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::One;
    let mut lcm = BigInt::one();
    for v in row {
        if let Scalar::Base(BaseScalar::Rat(q)) = v {
            lcm = lcm.lcm(q.denom());
        }
    }
    if lcm.is_one() {
        None
    } else {
        Some(Scalar::Base(BaseScalar::Rat(num_rational::BigRational::from(
            lcm,
        ))))
    }
}

// ---------------------------------------------------------------------------
// SpanAccumulator
// ---------------------------------------------------------------------------

/// Incrementally reduced basis of a subspace of `F^dim`.
///
/// Vectors are inserted one at a time; each is reduced against the current
/// basis and either absorbed (rank unchanged) or normalized, back-substituted
/// and stored. With coordinate tracking on, the accumulator can express any
/// member of the span as a combination of the *accepted* insertions, in
/// insertion order — the coordinate system the algebra layer computes in.
pub struct SpanAccumulator {
    field: Field,
    dim: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
    /// expr[i]: stored row i as a combination of accepted insertions
    expr: Option<Vec<Vec<Scalar>>>,
}

impl SpanAccumulator {
    pub fn new(field: &Field, dim: usize, track_coordinates: bool) -> SpanAccumulator {
        SpanAccumulator {
            field: field.clone(),
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
            expr: if track_coordinates {
                Some(Vec::new())
            } else {
                None
            },
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub(crate) fn basis_rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    /// Reduces `v` in place against the stored rows; with tracking on, also
    /// returns the elimination coefficients against the stored rows.
    fn reduce(&self, v: &mut [Scalar]) -> Vec<Scalar> {
        let f = self.field.spec();
        let mut coeffs = vec![f.zero(); self.rows.len()];
        for (i, row) in self.rows.iter().enumerate() {
            let p = self.pivots[i];
            if f.is_zero(&v[p]) {
                continue;
            }
            let c = v[p].clone();
            for k in p..self.dim {
                let sub = f.mul(&c, &row[k]);
                v[k] = f.sub(&v[k], &sub);
            }
            coeffs[i] = c;
        }
        coeffs
    }

    /// Inserts a vector; returns true when the rank grew.
    pub fn insert(&mut self, v: Vec<Scalar>) -> bool {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let f = self.field.spec();
        let mut v = v;
        let coeffs = self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        // normalize the new row
        let inv = f.inv(&v[p]).expect("leading entry nonzero");
        for x in v.iter_mut() {
            *x = f.mul(x, &inv);
        }
        // new row expression: (v_original - sum coeffs_i row_i) * inv
        let new_expr = self.expr.as_ref().map(|expr| {
            let n_orig = self.rows.len() + 1; // accepted count after insert
            let mut e = vec![f.zero(); n_orig];
            e[n_orig - 1] = inv.clone();
            for (i, c) in coeffs.iter().enumerate() {
                if f.is_zero(c) {
                    continue;
                }
                let scaled = f.mul(c, &inv);
                for (k, prev) in expr[i].iter().enumerate() {
                    let sub = f.mul(&scaled, prev);
                    e[k] = f.sub(&e[k], &sub);
                }
            }
            e
        });

        // back-substitute into existing rows to keep the basis reduced
        for i in 0..self.rows.len() {
            let c = self.rows[i][p].clone();
            if f.is_zero(&c) {
                continue;
            }
            for k in 0..self.dim {
                let sub = f.mul(&c, &v[k]);
                self.rows[i][k] = f.sub(&self.rows[i][k], &sub);
            }
            if let (Some(expr), Some(ne)) = (self.expr.as_mut(), new_expr.as_ref()) {
                let old_len = expr[i].len();
                expr[i].resize(ne.len().max(old_len), f.zero());
                for (k, nv) in ne.iter().enumerate() {
                    let sub = f.mul(&c, nv);
                    expr[i][k] = f.sub(&expr[i][k], &sub);
                }
            }
        }

        // keep rows sorted by pivot column
        let pos = self
            .pivots
            .iter()
            .position(|&q| q > p)
            .unwrap_or(self.pivots.len());
        self.rows.insert(pos, v);
        self.pivots.insert(pos, p);
        if let (Some(expr), Some(ne)) = (self.expr.as_mut(), new_expr) {
            for e in expr.iter_mut() {
                e.resize(ne.len(), f.zero());
            }
            expr.insert(pos, ne);
        }
        true
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let f = self.field.spec();
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| f.is_zero(x))
    }

    /// Coordinates of `v` relative to the accepted insertions (in insertion
    /// order), or `None` when `v` is outside the span. Requires tracking.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let expr = self
            .expr
            .as_ref()
            .expect("accumulator built without coordinate tracking");
        let f = self.field.spec();
        let mut w = v.to_vec();
        let coeffs = self.reduce(&mut w);
        if !w.iter().all(|x| f.is_zero(x)) {
            return None;
        }
        let mut out = vec![f.zero(); self.rows.len()];
        for (i, c) in coeffs.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            for (k, e) in expr[i].iter().enumerate() {
                let add = f.mul(c, e);
                out[k] = f.add(&out[k], &add);
            }
        }
        out.truncate(self.rows.len());
        Some(out)
    }
}
