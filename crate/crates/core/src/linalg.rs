//! Dense row reduction over any [`Field`]: rank, null space, solving.
//!
//! Exact fields pivot on the first nonzero entry; floating fields pivot on the
//! largest magnitude and treat entries below `tol` (relative to the largest
//! entry of the input) as zero.

use crate::scalar::Field;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<F> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<F>,
}

impl<F: Field> Mat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row);
        }
        Mat { rows: r, cols: c, data }
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul(&self, other: &Mat<F>) -> Mat<F> {
        assert_eq!(self.cols, other.rows);
        let mut out: Mat<F> = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let slot = &mut out.data[i * other.cols + j];
                    let prod = a.clone() * b.clone();
                    *slot = if slot.is_zero() { prod } else { std::mem::replace(slot, F::zero()) + prod };
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc + a.clone() * x.clone();
                    }
                }
                acc
            })
            .collect()
    }

    fn max_magnitude(&self) -> f64 {
        self.data.iter().map(Field::magnitude).fold(0.0, f64::max)
    }
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<F: Field>(m: &mut Mat<F>, tol: f64) -> Vec<usize> {
    let scale = m.max_magnitude().max(1.0);
    let thresh = tol * scale;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let mut best: Option<(usize, f64)> = None;
        for i in r..m.rows {
            let e = m.get(i, c);
            if e.negligible(thresh) {
                continue;
            }
            let mag = e.magnitude();
            match best {
                None => best = Some((i, mag)),
                Some((_, bm)) if mag > bm && !F::EXACT => best = Some((i, mag)),
                _ => {}
            }
            if F::EXACT {
                break;
            }
        }
        let Some((p, _)) = best else { continue };
        if p != r {
            for j in 0..m.cols {
                m.data.swap(p * m.cols + j, r * m.cols + j);
            }
        }
        let inv = F::one() / m.get(r, c).clone();
        for j in c..m.cols {
            let v = m.get(r, j).clone();
            if !v.is_zero() {
                m.set(r, j, v * inv.clone());
            }
        }
        let pivot_row: Vec<F> = m.row(r).to_vec();
        for i in 0..m.rows {
            if i == r {
                continue;
            }
            let f = m.get(i, c).clone();
            if f.is_zero() {
                continue;
            }
            for j in c..m.cols {
                if pivot_row[j].is_zero() {
                    continue;
                }
                let v = m.get(i, j).clone() - f.clone() * pivot_row[j].clone();
                m.set(i, j, v);
            }
            if !F::EXACT {
                m.set(i, c, F::zero());
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &Mat<F>, tol: f64) -> usize {
    let mut w = m.clone();
    rref(&mut w, tol).len()
}

/// Basis of the right null space `{v : m v = 0}`.
pub fn null_space<F: Field>(m: &Mat<F>, tol: f64) -> Vec<Vec<F>> {
    let mut w = m.clone();
    let pivots = rref(&mut w, tol);
    let mut basis = Vec::new();
    for free in 0..m.cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![F::zero(); m.cols];
        v[free] = F::one();
        for (r, &pc) in pivots.iter().enumerate() {
            let e = w.get(r, free).clone();
            if !e.is_zero() {
                v[pc] = -e;
            }
        }
        basis.push(v);
    }
    basis
}

/// Rank of the span of a list of vectors.
pub fn span_rank<F: Field>(vectors: &[Vec<F>], tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    rank(&Mat::from_rows(vectors.to_vec()), tol)
}

/// Square-matrix inverse, `None` when singular.
pub fn inverse<F: Field>(m: &Mat<F>, tol: f64) -> Option<Mat<F>> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut aug = Mat::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, n + i, F::one());
    }
    let pivots = rref(&mut aug, tol);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    let mut out = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, aug.get(i, n + j).clone());
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Q};
    use num_traits::Zero;

    #[test]
    fn null_space_of_rank_one() {
        let m = Mat::from_rows(vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]]);
        let ns = null_space(&m, 0.0);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.apply(v).iter().all(|x: &Q| x.is_zero()));
        }
    }

    #[test]
    fn float_rank_respects_tolerance() {
        let m = Mat::from_rows(vec![vec![1.0, 1.0], vec![1.0, 1.0 + 1e-14]]);
        assert_eq!(rank(&m, 1e-10), 1);
        assert_eq!(rank(&m, 0.0), 2);
    }

    #[test]
    fn inverse_round_trip() {
        let m = Mat::from_rows(vec![vec![q(2), q(1)], vec![q(5), q(3)]]);
        let inv = inverse(&m, 0.0).unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(2));
    }
}
