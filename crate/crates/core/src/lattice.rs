//! Exact integer matrices: Smith normal form, abelian group structure of
//! `ℤⁿ / L`, and lattice membership.
//!
//! Row and column operations are logged so callers can replay them as
//! Nielsen moves on words.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// All rows must have length `cols`.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>], cols: usize) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Invalid(format!(
                    "row {} has {} entries, expected {cols}",
                    i + 1,
                    r.len()
                )));
            }
            for (j, x) in r.iter().enumerate() {
                m.data[i * cols + j] = x.clone().into();
            }
        }
        Ok(m)
    }

    pub fn from_i64_rows(rows: &[Vec<i64>], cols: usize) -> Result<Self> {
        Self::from_rows(rows, cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_i64(&self, i: usize) -> Vec<i64> {
        self.row(i)
            .iter()
            .map(|x| x.to_i64().expect("entry exceeds i64"))
            .collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] += a * other.get(k, j);
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += x * self.get(i, j);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Determinant by fraction-free elimination (square matrices only).
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    fn add_row(&mut self, target: usize, source: usize, f: &BigInt) {
        for c in 0..self.cols {
            let v = self.get(source, c) * f;
            self.data[target * self.cols + c] += v;
        }
    }

    fn add_col(&mut self, target: usize, source: usize, f: &BigInt) {
        for r in 0..self.rows {
            let v = self.get(r, source) * f;
            self.data[r * self.cols + target] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let idx = i * self.cols + c;
            self.data[idx] = -std::mem::take(&mut self.data[idx]);
        }
    }

    pub fn apply_row_op(&mut self, op: &ElemOp) {
        match op {
            ElemOp::Swap(i, j) => self.swap_rows(*i, *j),
            ElemOp::Add {
                target,
                source,
                factor,
            } => self.add_row(*target, *source, factor),
            ElemOp::Negate(i) => self.negate_row(*i),
        }
    }

    pub fn apply_col_op(&mut self, op: &ElemOp) {
        match op {
            ElemOp::Swap(i, j) => self.swap_cols(*i, *j),
            ElemOp::Add {
                target,
                source,
                factor,
            } => self.add_col(*target, *source, factor),
            ElemOp::Negate(i) => {
                for r in 0..self.rows {
                    let idx = r * self.cols + i;
                    self.data[idx] = -std::mem::take(&mut self.data[idx]);
                }
            }
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", r.join(" "))?;
        }
        Ok(())
    }
}

/// Elementary row or column operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElemOp {
    Swap(usize, usize),
    /// `line[target] += factor · line[source]`
    Add {
        target: usize,
        source: usize,
        factor: BigInt,
    },
    Negate(usize),
}

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal with
/// `d₁ | d₂ | …`, all nonnegative.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    /// Row operations in application order (`U` is their product).
    pub row_ops: Vec<ElemOp>,
    /// Column operations in application order (`V` is their product).
    pub col_ops: Vec<ElemOp>,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

struct Smith {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
    row_ops: Vec<ElemOp>,
    col_ops: Vec<ElemOp>,
}

impl Smith {
    fn row(&mut self, op: ElemOp) {
        if matches!(op, ElemOp::Swap(i, j) if i == j) {
            return;
        }
        self.a.apply_row_op(&op);
        self.u.apply_row_op(&op);
        self.row_ops.push(op);
    }

    fn col(&mut self, op: ElemOp) {
        if matches!(op, ElemOp::Swap(i, j) if i == j) {
            return;
        }
        self.a.apply_col_op(&op);
        self.v.apply_col_op(&op);
        self.col_ops.push(op);
    }

    /// Smallest nonzero |entry| in the lower-right block from `t`,
    /// first in row-major order on ties.
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = self.a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                    best = Some((i, j, ax));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn run(&mut self) {
        let n = self.a.rows().min(self.a.cols());
        for t in 0..n {
            let Some((pi, pj)) = self.pivot(t) else { break };
            self.row(ElemOp::Swap(t, pi));
            self.col(ElemOp::Swap(t, pj));
            loop {
                let p = self.a.get(t, t).clone();
                // column below the pivot
                let mut restart = false;
                for i in t + 1..self.a.rows() {
                    let x = self.a.get(i, t).clone();
                    if x.is_zero() {
                        continue;
                    }
                    let q = &x / &p;
                    if !q.is_zero() {
                        self.row(ElemOp::Add {
                            target: i,
                            source: t,
                            factor: -q,
                        });
                    }
                    if !self.a.get(i, t).is_zero() {
                        self.row(ElemOp::Swap(t, i));
                        restart = true;
                        break;
                    }
                }
                if restart {
                    continue;
                }
                for j in t + 1..self.a.cols() {
                    let x = self.a.get(t, j).clone();
                    if x.is_zero() {
                        continue;
                    }
                    let q = &x / &p;
                    if !q.is_zero() {
                        self.col(ElemOp::Add {
                            target: j,
                            source: t,
                            factor: -q,
                        });
                    }
                    if !self.a.get(t, j).is_zero() {
                        self.col(ElemOp::Swap(t, j));
                        restart = true;
                        break;
                    }
                }
                if restart {
                    continue;
                }
                // divisibility of the remaining block
                let bad = (t + 1..self.a.rows()).find(|&i| {
                    (t + 1..self.a.cols()).any(|j| !self.a.get(i, j).is_multiple_of(&p))
                });
                match bad {
                    Some(i) => self.row(ElemOp::Add {
                        target: t,
                        source: i,
                        factor: BigInt::one(),
                    }),
                    None => break,
                }
            }
            if self.a.get(t, t).is_negative() {
                self.row(ElemOp::Negate(t));
            }
        }
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let mut s = Smith {
        a: m.clone(),
        u: IntMatrix::identity(m.rows()),
        v: IntMatrix::identity(m.cols()),
        row_ops: Vec::new(),
        col_ops: Vec::new(),
    };
    s.run();
    SmithDecomposition {
        u: s.u,
        d: s.a,
        v: s.v,
        row_ops: s.row_ops,
        col_ops: s.col_ops,
    }
}

/// Structure of a finitely generated abelian group: `ℤ/γ₁ × … × ℤ/γ_r × ℤ^t`
/// with `γ_i ≥ 2` and `γ_i | γ_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianStructure {
    pub invariant_factors: Vec<BigInt>,
    pub free_rank: usize,
}

impl AbelianStructure {
    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.invariant_factors.iter().product())
    }
}

impl fmt::Display for AbelianStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|g| format!("Z/{g}"))
            .collect();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" x "))
        }
    }
}

/// Structure of `ℤⁿ / rowspan(L)` where `n = L.cols()`.
pub fn abelian_structure(l: &IntMatrix) -> AbelianStructure {
    let snf = smith_normal_form(l);
    let diag = snf.diagonal();
    let nonzero = diag.iter().filter(|x| !x.is_zero()).count();
    AbelianStructure {
        invariant_factors: diag
            .into_iter()
            .filter(|x| !x.is_zero() && !x.is_one())
            .collect(),
        free_rank: l.cols() - nonzero,
    }
}

/// Integer coefficients `x` with `x · L = v`, if `v` lies in the row span.
pub fn lattice_member(l: &IntMatrix, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if v.len() != l.cols() {
        return Err(Error::Invalid(format!(
            "vector has length {}, lattice lives in dimension {}",
            v.len(),
            l.cols()
        )));
    }
    let snf = smith_normal_form(l);
    // x L = v  <=>  (x U^-1) D = v V
    let z = snf.v.left_apply_row(v);
    let diag = snf.diagonal();
    let mut y = vec![BigInt::zero(); l.rows()];
    for (j, zj) in z.iter().enumerate() {
        let dj = diag.get(j).cloned().unwrap_or_default();
        if dj.is_zero() {
            if !zj.is_zero() {
                return Ok(None);
            }
        } else {
            let (q, r) = zj.div_rem(&dj);
            if !r.is_zero() {
                return Ok(None);
            }
            y[j] = q;
        }
    }
    let x = snf.u.left_apply(&y);
    debug_assert_eq!(l.left_apply(&x), v.to_vec());
    Ok(Some(x))
}

impl IntMatrix {
    /// `v · self` for a row vector `v`.
    pub fn left_apply_row(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.left_apply(v)
    }
}

/// Inverse of a unimodular matrix.
pub fn inverse_unimodular(v: &IntMatrix) -> Result<IntMatrix> {
    let n = v.rows();
    let snf = smith_normal_form(v);
    if snf.diagonal().iter().any(|d| d.abs() != BigInt::from(1)) {
        return Err(Error::Invalid("matrix is not unimodular".into()));
    }
    // U·V·W = I (diagonal of ones) gives V⁻¹ = W·U.
    let inv = snf.v.mul(&snf.u);
    debug_assert_eq!(v.mul(&inv), IntMatrix::identity(n));
    Ok(inv)
}

pub fn to_bigints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
