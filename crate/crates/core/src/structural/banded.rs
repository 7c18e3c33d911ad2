use super::{Result, StructuralError};

/// Square matrix with equal lower and upper bandwidth, row-major band storage.
#[derive(Debug, Clone)]
pub struct BandedMatrix {
    n: usize,
    b: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, half_bandwidth: usize) -> Self {
        let b = half_bandwidth.min(n.saturating_sub(1));
        Self {
            n,
            b,
            data: vec![0.0; n * (2 * b + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn half_bandwidth(&self) -> usize {
        self.b
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * (2 * self.b + 1) + (j + self.b - i)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i.abs_diff(j) > self.b {
            0.0
        } else {
            self.data[self.idx(i, j)]
        }
    }

    /// Adds to an entry; panics if it lies outside the band.
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(i.abs_diff(j) <= self.b, "entry ({i}, {j}) outside band {}", self.b);
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.b);
                let hi = (i + self.b).min(self.n - 1);
                (lo..=hi).map(|j| self.data[self.idx(i, j)] * x[j]).sum()
            })
            .collect()
    }

    /// Solves `A x = rhs` by LU factorization without pivoting, consuming the
    /// matrix. Stiffness matrices here are diagonally dominant enough that
    /// pivoting is not needed; a vanishing pivot is reported as singular.
    pub fn solve(mut self, rhs: &[f64]) -> Result<Vec<f64>> {
        let (n, b) = (self.n, self.b);
        let scale = self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tiny = scale * 1e-14;
        for k in 0..n {
            let pivot = self.data[self.idx(k, k)];
            if !(pivot.abs() > tiny) {
                return Err(StructuralError::Singular(k));
            }
            let end = (k + b + 1).min(n);
            for i in k + 1..end {
                let ik = self.idx(i, k);
                let l = self.data[ik] / pivot;
                if l == 0.0 {
                    continue;
                }
                self.data[ik] = l;
                let (ki, ii) = (self.idx(k, k), self.idx(i, k));
                for off in 1..end - k {
                    self.data[ii + off] -= l * self.data[ki + off];
                }
            }
        }
        let mut x = rhs.to_vec();
        for i in 0..n {
            let lo = i.saturating_sub(b);
            let mut s = x[i];
            for j in lo..i {
                s -= self.data[self.idx(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let hi = (i + b).min(n - 1);
            let mut s = x[i];
            for j in i + 1..=hi {
                s -= self.data[self.idx(i, j)] * x[j];
            }
            x[i] = s / self.data[self.idx(i, i)];
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_tridiagonal_system() {
        let n = 50;
        let mut a = BandedMatrix::zeros(n, 1);
        for i in 0..n {
            a.add(i, i, 4.0);
            if i > 0 {
                a.add(i, i - 1, -1.0);
            }
            if i + 1 < n {
                a.add(i, i + 1, -1.5);
            }
        }
        let x: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let rhs = a.mul_vec(&x);
        let y = a.solve(&rhs).unwrap();
        for (p, q) in x.iter().zip(&y) {
            assert!((p - q).abs() < 1e-12);
        }
    }

    #[test]
    fn matches_dense_solve() {
        let n = 30;
        let b = 4;
        let mut a = BandedMatrix::zeros(n, b);
        let mut dense = nalgebra::DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for j in i.saturating_sub(b)..=(i + b).min(n - 1) {
                let v = if i == j { 10.0 } else { ((i * 7 + j * 3) % 5) as f64 * 0.3 - 0.6 };
                a.add(i, j, v);
                dense[(i, j)] = v;
            }
        }
        let rhs: Vec<f64> = (0..n).map(|i| i as f64 * 0.1 - 1.0).collect();
        let x = a.solve(&rhs).unwrap();
        let y = dense.lu().solve(&nalgebra::DVector::from_vec(rhs)).unwrap();
        for i in 0..n {
            assert!((x[i] - y[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_pivot_is_singular() {
        let mut a = BandedMatrix::zeros(3, 1);
        a.add(0, 0, 1.0);
        a.add(2, 2, 1.0);
        assert!(matches!(a.solve(&[1.0, 1.0, 1.0]), Err(StructuralError::Singular(1))));
    }
}
