use rand::Rng;

use super::{inv_mod, mul_mod, sub_mod, AlgebraError, Element, RingCtx};

/// Dense row-major matrix over a [`RingCtx`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    ctx: RingCtx,
    rows: usize,
    cols: usize,
    data: Vec<Element>,
}

impl Matrix {
    pub fn zeros(ctx: &RingCtx, rows: usize, cols: usize) -> Self {
        Matrix { ctx: ctx.clone(), rows, cols, data: vec![ctx.zero(); rows * cols] }
    }

    pub fn identity(ctx: &RingCtx, n: usize) -> Self {
        let mut m = Matrix::zeros(ctx, n, n);
        for i in 0..n {
            m.data[i * n + i] = ctx.one();
        }
        m
    }

    pub fn from_rows(ctx: &RingCtx, rows: Vec<Vec<Element>>) -> Result<Self, AlgebraError> {
        let cols = rows.first().map_or(0, Vec::len);
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(AlgebraError::Shape("ragged rows".into()));
            }
            for e in row {
                if !ctx.contains(&e) {
                    return Err(AlgebraError::ContextMismatch);
                }
                data.push(e);
            }
        }
        Ok(Matrix { ctx: ctx.clone(), rows: nrows, cols, data })
    }

    /// Builds a matrix over a scalar context from row-major residues.
    pub fn from_scalars(
        ctx: &RingCtx,
        rows: usize,
        cols: usize,
        values: &[u64],
    ) -> Result<Self, AlgebraError> {
        if ctx.width() != 1 || values.len() != rows * cols {
            return Err(AlgebraError::Shape(format!("{rows}x{cols} from {} values", values.len())));
        }
        let data: Vec<Element> = values.iter().map(|&v| Element::scalar(v)).collect();
        if !data.iter().all(|e| ctx.contains(e)) {
            return Err(AlgebraError::ContextMismatch);
        }
        Ok(Matrix { ctx: ctx.clone(), rows, cols, data })
    }

    pub fn random<R: Rng + ?Sized>(ctx: &RingCtx, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| ctx.random(rng)).collect();
        Matrix { ctx: ctx.clone(), rows, cols, data }
    }

    pub fn ctx(&self) -> &RingCtx {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Element {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Element) {
        debug_assert!(self.ctx.contains(&value));
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Element] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Element> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Element>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.ctx, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(&self.ctx, self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out.data[i * cols.len() + jj] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn select_rows(&self, rows: impl IntoIterator<Item = usize>) -> Matrix {
        let mut data = Vec::new();
        let mut count = 0;
        for i in rows {
            data.extend_from_slice(self.row(i));
            count += 1;
        }
        Matrix { ctx: self.ctx.clone(), rows: count, cols: self.cols, data }
    }

    /// Copy with row `i` deleted.
    pub fn without_row(&self, i: usize) -> Matrix {
        self.select_rows((0..self.rows).filter(|&r| r != i))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, AlgebraError> {
        if self.ctx != other.ctx {
            return Err(AlgebraError::ContextMismatch);
        }
        if self.cols != other.rows {
            return Err(AlgebraError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(&self.ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if self.ctx.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = self.ctx.mul(a, other.get(k, j));
                    let idx = i * other.cols + j;
                    out.data[idx] = self.ctx.add(&out.data[idx], &prod);
                }
            }
        }
        Ok(out)
    }

    /// Column-vector product `M · x`.
    pub fn mul_vec(&self, x: &[Element]) -> Result<Vec<Element>, AlgebraError> {
        if x.len() != self.cols {
            return Err(AlgebraError::Shape(format!("vector of length {} for {} columns", x.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(x).fold(self.ctx.zero(), |acc, (a, b)| {
                    self.ctx.add(&acc, &self.ctx.mul(a, b))
                })
            })
            .collect())
    }

    /// Row-vector product `x · M`.
    pub fn left_mul_vec(&self, x: &[Element]) -> Result<Vec<Element>, AlgebraError> {
        if x.len() != self.rows {
            return Err(AlgebraError::Shape(format!("vector of length {} for {} rows", x.len(), self.rows)));
        }
        let mut out = vec![self.ctx.zero(); self.cols];
        for (i, a) in x.iter().enumerate() {
            if self.ctx.is_zero(a) {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = self.ctx.add(o, &self.ctx.mul(a, self.get(i, j)));
            }
        }
        Ok(out)
    }

    /// Rewrites an extension-field matrix over its prime subfield: column `j`
    /// becomes `m` columns holding each entry's basis coordinates.
    pub fn expand_to_base(&self) -> Result<Matrix, AlgebraError> {
        let base = self.ctx.base_field()?;
        let m = self.ctx.extension_degree();
        let data = self
            .data
            .iter()
            .flat_map(|e| e.residues().iter().map(|&r| Element::scalar(r)))
            .collect();
        Ok(Matrix { ctx: base, rows: self.rows, cols: self.cols * m, data })
    }

    /// Rank over the context field.
    pub fn rank(&self) -> Result<usize, AlgebraError> {
        let mut work = self.clone();
        Ok(work.row_reduce()?.len())
    }

    /// Solves `M · x = target`, or `None` when `target` is outside the column span.
    pub fn solve_membership(&self, target: &[Element]) -> Result<Option<Vec<Element>>, AlgebraError> {
        if target.len() != self.rows {
            return Err(AlgebraError::Shape(format!("target of length {} for {} rows", target.len(), self.rows)));
        }
        let mut aug = Matrix::zeros(&self.ctx, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.data[i * (self.cols + 1) + j] = self.get(i, j).clone();
            }
            if !self.ctx.contains(&target[i]) {
                return Err(AlgebraError::ContextMismatch);
            }
            aug.data[i * (self.cols + 1) + self.cols] = target[i].clone();
        }
        let pivots = aug.row_reduce()?;
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![self.ctx.zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols).clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Matrix, AlgebraError> {
        if self.rows != self.cols {
            return Err(AlgebraError::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(&self.ctx, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i * 2 * n + j] = self.get(i, j).clone();
            }
            aug.data[i * 2 * n + n + i] = self.ctx.one();
        }
        let pivots = aug.row_reduce()?;
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(AlgebraError::Singular);
        }
        Ok(aug.select_columns(&(n..2 * n).collect::<Vec<_>>()))
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn row_reduce(&mut self) -> Result<Vec<usize>, AlgebraError> {
        match self.ctx {
            RingCtx::PrimeField { p } => Ok(self.row_reduce_prime(p)),
            RingCtx::ExtField { .. } => self.row_reduce_generic(),
            _ => Err(AlgebraError::NotAField),
        }
    }

    fn row_reduce_prime(&mut self, p: u64) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut a: Vec<u64> = self.data.iter().map(Element::value).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    a.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = inv_mod(a[r * cols + c], p).expect("nonzero in a prime field");
            for j in c..cols {
                a[r * cols + j] = mul_mod(a[r * cols + j], inv, p);
            }
            for i in 0..rows {
                let factor = a[i * cols + c];
                if i == r || factor == 0 {
                    continue;
                }
                for j in c..cols {
                    let v = mul_mod(factor, a[r * cols + j], p);
                    a[i * cols + j] = sub_mod(a[i * cols + j], v, p);
                }
            }
            pivots.push(c);
            r += 1;
        }
        for (e, v) in self.data.iter_mut().zip(a) {
            *e = Element::scalar(v);
        }
        pivots
    }

    fn row_reduce_generic(&mut self) -> Result<Vec<usize>, AlgebraError> {
        let ctx = self.ctx.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| !ctx.is_zero(self.get(i, c))) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = ctx.invert(self.get(r, c))?;
            for j in c..cols {
                self.data[r * cols + j] = ctx.mul(&self.data[r * cols + j], &inv);
            }
            for i in 0..rows {
                if i == r || ctx.is_zero(self.get(i, c)) {
                    continue;
                }
                let factor = self.get(i, c).clone();
                for j in c..cols {
                    let v = ctx.mul(&factor, &self.data[r * cols + j]);
                    self.data[i * cols + j] = ctx.sub(&self.data[i * cols + j], &v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Ok(pivots)
    }
}
