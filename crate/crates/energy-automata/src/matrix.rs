//! Matrices over the energy-function semiring and test vectors over the
//! semimodule, with star closure by two independent algorithms and omega
//! closure by block recursion.

use thiserror::Error;

use crate::efun::PiecewiseEnergyFunction;
use crate::vsem::{act, omega, ThresholdTest};

use PiecewiseEnergyFunction as Pef;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
}

fn dim_err(context: impl Into<String>) -> MatrixError {
    MatrixError::DimensionMismatch { context: context.into() }
}

/// A rectangular matrix of energy functions; square in all star/omega
/// contexts. Zero-dimension blocks are allowed so that block recursions
/// degenerate gracefully.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Pef>,
}

/// A column vector of threshold tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestVector(pub Vec<ThresholdTest>);

impl TestVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bottoms(n: usize) -> Self {
        TestVector(vec![ThresholdTest::bottom(); n])
    }

    pub fn join(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.len() != other.len() {
            return Err(dim_err(format!("vector join {} vs {}", self.len(), other.len())));
        }
        Ok(TestVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a.join(b)).collect(),
        ))
    }
}

impl FunctionMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Pef>) -> Result<Self, MatrixError> {
        if entries.len() != rows * cols {
            return Err(dim_err(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        Ok(FunctionMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Pef>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(dim_err("ragged rows"));
        }
        Ok(FunctionMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        FunctionMatrix { rows, cols, entries: vec![Pef::bottom_function(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.get_mut(i, i) = Pef::identity();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Dimension of a square matrix.
    pub fn n(&self) -> usize {
        debug_assert_eq!(self.rows, self.cols);
        self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &Pef {
        &self.entries[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Pef {
        &mut self.entries[i * self.cols + j]
    }

    pub fn join(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(dim_err(format!(
                "join {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(FunctionMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.join(b)).collect(),
        })
    }

    /// (MN)ᵢⱼ = ⋁ₖ Mᵢₖ;Nₖⱼ with diagrammatic composition.
    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.cols != other.rows {
            return Err(dim_err(format!(
                "mul {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Pef::bottom_function();
                for k in 0..self.cols {
                    acc = acc.join(&self.get(i, k).compose(other.get(k, j)));
                }
                *out.get_mut(i, j) = acc;
            }
        }
        Ok(out)
    }

    /// Matrix star by block recursion, splitting off the first row and
    /// column as the scalar block.
    pub fn star_block(&self) -> Result<Self, MatrixError> {
        if self.rows != self.cols {
            return Err(dim_err(format!("star of a {}x{} matrix", self.rows, self.cols)));
        }
        Ok(self.star_block_unchecked())
    }

    fn star_block_unchecked(&self) -> Self {
        let n = self.rows;
        if n == 0 {
            return Self::zero(0, 0);
        }
        if n == 1 {
            let mut m = Self::zero(1, 1);
            *m.get_mut(0, 0) = self.get(0, 0).star();
            return m;
        }
        let (a, b, c, d) = self.split(1);
        let a_star = a.star_block_unchecked();
        let d_star = d.star_block_unchecked();
        // e = a ∨ b d* c,  f = d ∨ c a* b
        let e = a.join(&b.mul(&d_star).unwrap().mul(&c).unwrap()).unwrap();
        let f = d.join(&c.mul(&a_star).unwrap().mul(&b).unwrap()).unwrap();
        let e_star = e.star_block_unchecked();
        let f_star = f.star_block_unchecked();
        let top_right = e_star.mul(&b).unwrap().mul(&d_star).unwrap();
        let bottom_left = f_star.mul(&c).unwrap().mul(&a_star).unwrap();
        Self::from_blocks(&e_star, &top_right, &bottom_left, &f_star)
    }

    /// Matrix star by Gauss-Jordan style pivot elimination:
    /// Aᵢⱼ ← Aᵢⱼ ∨ Aᵢₚ(Aₚₚ)*Aₚⱼ per pivot p, then the diagonal is closed
    /// with the identity.
    pub fn star_elim(&self) -> Result<Self, MatrixError> {
        if self.rows != self.cols {
            return Err(dim_err(format!("star of a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut a = self.clone();
        for p in 0..n {
            let pivot_star = a.get(p, p).star();
            let old = a.clone();
            for i in 0..n {
                for j in 0..n {
                    let through = old.get(i, p).compose(&pivot_star).compose(old.get(p, j));
                    *a.get_mut(i, j) = old.get(i, j).join(&through);
                }
            }
        }
        for i in 0..n {
            let closed = a.get(i, i).join(&Pef::identity());
            *a.get_mut(i, i) = closed;
        }
        Ok(a)
    }

    /// Matrix omega by the block formula, splitting off the first row and
    /// column as the scalar block:
    /// Mᵚ = ((a ∨ b d* c)ᵚ ∨ (a ∨ b d* c)* b dᵚ ; (d ∨ c a* b)ᵚ ∨ (d ∨ c a* b)* c aᵚ).
    pub fn omega_block(&self) -> Result<TestVector, MatrixError> {
        if self.rows != self.cols {
            return Err(dim_err(format!("omega of a {}x{} matrix", self.rows, self.cols)));
        }
        Ok(self.omega_block_unchecked())
    }

    fn omega_block_unchecked(&self) -> TestVector {
        let n = self.rows;
        if n == 0 {
            return TestVector(vec![]);
        }
        if n == 1 {
            return TestVector(vec![omega(self.get(0, 0))]);
        }
        let (a, b, c, d) = self.split(1);
        let a_star = a.star_block_unchecked();
        let d_star = d.star_block_unchecked();
        let e = a.join(&b.mul(&d_star).unwrap().mul(&c).unwrap()).unwrap();
        let f = d.join(&c.mul(&a_star).unwrap().mul(&b).unwrap()).unwrap();

        let d_omega = d.omega_block_unchecked();
        let top = e
            .omega_block_unchecked()
            .join(&e.star_block_unchecked().act(&b.act(&d_omega).unwrap()).unwrap())
            .unwrap();

        let a_omega = a.omega_block_unchecked();
        let bottom = f
            .omega_block_unchecked()
            .join(&f.star_block_unchecked().act(&c.act(&a_omega).unwrap()).unwrap())
            .unwrap();

        let mut out = top.0;
        out.extend(bottom.0);
        TestVector(out)
    }

    /// (Mv)ᵢ = ⋁ⱼ act(Mᵢⱼ, vⱼ).
    pub fn act(&self, v: &TestVector) -> Result<TestVector, MatrixError> {
        if self.cols != v.len() {
            return Err(dim_err(format!("act {}x{} on vector of {}", self.rows, self.cols, v.len())));
        }
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = ThresholdTest::bottom();
            for j in 0..self.cols {
                acc = acc.join(&act(self.get(i, j), &v.0[j]));
            }
            out.push(acc);
        }
        Ok(TestVector(out))
    }

    /// Splits into blocks at row/column `k`: (a: k×k, b: k×(n−k),
    /// c: (n−k)×k, d: (n−k)×(n−k)).
    pub fn split(&self, k: usize) -> (Self, Self, Self, Self) {
        let n = self.rows;
        debug_assert_eq!(self.rows, self.cols);
        debug_assert!(k <= n);
        let sub = |r0: usize, r1: usize, c0: usize, c1: usize| {
            let mut entries = Vec::with_capacity((r1 - r0) * (c1 - c0));
            for i in r0..r1 {
                for j in c0..c1 {
                    entries.push(self.get(i, j).clone());
                }
            }
            FunctionMatrix { rows: r1 - r0, cols: c1 - c0, entries }
        };
        (sub(0, k, 0, k), sub(0, k, k, n), sub(k, n, 0, k), sub(k, n, k, n))
    }

    fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        debug_assert_eq!(a.rows, b.rows);
        debug_assert_eq!(c.rows, d.rows);
        debug_assert_eq!(a.cols, c.cols);
        debug_assert_eq!(b.cols, d.cols);
        let n = a.rows + c.rows;
        let m = a.cols + b.cols;
        let mut out = Self::zero(n, m);
        for i in 0..a.rows {
            for j in 0..a.cols {
                *out.get_mut(i, j) = a.get(i, j).clone();
            }
            for j in 0..b.cols {
                *out.get_mut(i, a.cols + j) = b.get(i, j).clone();
            }
        }
        for i in 0..c.rows {
            for j in 0..c.cols {
                *out.get_mut(a.rows + i, j) = c.get(i, j).clone();
            }
            for j in 0..d.cols {
                *out.get_mut(a.rows + i, a.cols + j) = d.get(i, j).clone();
            }
        }
        out
    }
}

/// α M* κ-style row selection: joins the vector entries at the positions
/// where `alpha` is set.
pub fn row_act(alpha: &[bool], v: &TestVector) -> Result<ThresholdTest, MatrixError> {
    if alpha.len() != v.len() {
        return Err(dim_err(format!("row_act {} vs {}", alpha.len(), v.len())));
    }
    let mut acc = ThresholdTest::bottom();
    for (sel, t) in alpha.iter().zip(&v.0) {
        if *sel {
            acc = acc.join(t);
        }
    }
    Ok(acc)
}
