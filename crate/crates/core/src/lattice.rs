//! Small dense integer matrices for intersection forms.
//!
//! Everything here is exact: determinants use fraction-free Bareiss
//! elimination over `i128`, which is more than enough for the matrix sizes a
//! fibre configuration produces.

use std::fmt;

/// Square integer matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    size: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(size: usize) -> Self {
        Self {
            size,
            data: vec![0; size * size],
        }
    }

    /// Builds a matrix from rows. Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let size = rows.len();
        let mut data = Vec::with_capacity(size * size);
        for row in rows {
            assert_eq!(row.len(), size, "matrix rows must all have length {size}");
            data.extend(row);
        }
        Self { size, data }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.data[row * self.size + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: i64) {
        self.data[row * self.size + col] = value;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i64]> {
        self.data.chunks(self.size.max(1)).take(self.size)
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.size).map(|i| self.get(i, i)).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.size);
        self.rows()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Submatrix on the given row/column indices, in the given order.
    pub fn principal_submatrix(&self, indices: &[usize]) -> Self {
        let mut sub = Self::zeros(indices.len());
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                sub.set(a, b, self.get(i, j));
            }
        }
        sub
    }

    /// Exact determinant (Bareiss). The empty matrix has determinant 1.
    pub fn determinant(&self) -> i128 {
        let n = self.size;
        if n == 0 {
            return 1;
        }
        let mut m: Vec<Vec<i128>> = self
            .rows()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if m[k][k] == 0 {
                match (k + 1..n).find(|&r| m[r][k] != 0) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
                }
            }
            prev = m[k][k];
        }
        sign * m[n - 1][n - 1]
    }

    /// Determinants of the leading principal minors of size 1..=n.
    pub fn leading_principal_minors(&self) -> Vec<i128> {
        (1..=self.size)
            .map(|k| {
                let idx: Vec<usize> = (0..k).collect();
                self.principal_submatrix(&idx).determinant()
            })
            .collect()
    }

    /// Sylvester's criterion applied to `-M`: the k-th leading minor of a
    /// negative definite matrix has sign `(-1)^k`.
    pub fn is_negative_definite(&self) -> bool {
        self.is_symmetric()
            && self
                .leading_principal_minors()
                .iter()
                .enumerate()
                .all(|(i, &det)| if i % 2 == 0 { det < 0 } else { det > 0 })
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .data
            .iter()
            .map(|x| x.to_string().len())
            .max()
            .unwrap_or(1);
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>width$}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}
