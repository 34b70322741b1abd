use super::{QDOperator, WeylError};
use crate::exactalg::{CoefMap, CoefPoly};

/// Square matrix with [`QDOperator`] entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpMatrix {
    n: usize,
    entries: Vec<QDOperator>,
}

impl OpMatrix {
    pub fn zeros(n: usize) -> Self {
        OpMatrix { n, entries: vec![QDOperator::zero(); n * n] }
    }

    pub fn from_rows(rows: Vec<Vec<QDOperator>>) -> Result<Self, WeylError> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(WeylError::NotSquare { rows: n, cols: bad.len() });
        }
        Ok(OpMatrix { n, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> QDOperator) -> Self {
        let entries = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| f(i, j)).collect();
        OpMatrix { n, entries }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &QDOperator {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: QDOperator) {
        self.entries[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<QDOperator>> {
        self.entries.chunks(self.n.max(1)).take(self.n).map(<[_]>::to_vec).collect()
    }

    /// Zero below the subdiagonal and `-1` on it.
    pub fn is_almost_triangular(&self) -> bool {
        let minus_one = QDOperator::constant(CoefPoly::from_int(-1));
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                if i == j + 1 {
                    *self.get(i, j) == minus_one
                } else if i > j + 1 {
                    self.get(i, j).is_zero()
                } else {
                    true
                }
            })
        })
    }

    /// Transpose with respect to the anti-diagonal: `M^τ_ij = M_{n-1-j, n-1-i}`.
    pub fn antitranspose(&self) -> OpMatrix {
        let last = self.n.saturating_sub(1);
        OpMatrix::from_fn(self.n, |i, j| self.get(last - j, last - i).clone())
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> OpMatrix {
        let keep: Vec<usize> = (0..self.n).filter(|&k| k != skip_row).collect();
        let cols: Vec<usize> = (0..self.n).filter(|&k| k != skip_col).collect();
        OpMatrix::from_fn(self.n - 1, |i, j| self.get(keep[i], cols[j]).clone())
    }

    /// Right determinant: uses the leading-minor recursion when the matrix
    /// is almost triangular, cofactor expansion otherwise.
    pub fn right_determinant(&self) -> QDOperator {
        if self.is_almost_triangular() {
            self.right_determinant_hessenberg()
        } else {
            self.right_determinant_cofactor()
        }
    }

    /// Expansion along the rightmost column, `Σ_i (-1)^{i+last} M_{i,last} · det(minor)`,
    /// each entry multiplying its cofactor from the left.
    pub fn right_determinant_cofactor(&self) -> QDOperator {
        match self.n {
            0 => QDOperator::one(),
            1 => self.get(0, 0).clone(),
            n => {
                let last = n - 1;
                let mut acc = QDOperator::zero();
                for i in 0..n {
                    let entry = self.get(i, last);
                    if entry.is_zero() {
                        continue;
                    }
                    let term = entry.compose(&self.minor(i, last).right_determinant_cofactor());
                    acc = if (i + last) % 2 == 0 { &acc + &term } else { &acc - &term };
                }
                acc
            }
        }
    }

    /// Leading principal minors of an almost triangular matrix:
    /// `P_0 = 1`, `P_{i+1} = Σ_{j ≤ i} M_{ji} P_j`; returns `P_n`.
    ///
    /// The shape is not checked; callers wanting the fallback should use
    /// [`OpMatrix::right_determinant`].
    pub fn right_determinant_hessenberg(&self) -> QDOperator {
        let mut p = vec![QDOperator::one()];
        for i in 0..self.n {
            let mut next = QDOperator::zero();
            for (j, pj) in p.iter().enumerate() {
                let m = self.get(j, i);
                if !m.is_zero() {
                    next = &next + &m.compose(pj);
                }
            }
            p.push(next);
        }
        p.pop().expect("non-empty")
    }
}

impl CoefMap for OpMatrix {
    fn map_coefs(&self, f: &dyn Fn(&CoefPoly) -> CoefPoly) -> Self {
        OpMatrix { n: self.n, entries: self.entries.iter().map(|e| e.map_coefs(f)).collect() }
    }
}
