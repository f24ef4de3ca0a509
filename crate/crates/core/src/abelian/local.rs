//! Linear algebra over the local ring Z/p^M.
//!
//! Every finite abelian p-group of exponent dividing p^M is a module over this
//! ring, so kernels, images and cokernels reduce to Smith normal form here.

pub type Mat = Vec<Vec<i128>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalRing {
    pub p: i128,
    pub m: u32,
    pub modulus: i128,
}

impl LocalRing {
    pub fn new(p: u64, m: u32) -> Self {
        let p = p as i128;
        let modulus = p.checked_pow(m).expect("p^M overflows i128");
        assert!(
            modulus < (1i128 << 62),
            "local ring modulus too large for exact products"
        );
        LocalRing { p, m, modulus }
    }

    pub fn reduce(&self, x: i128) -> i128 {
        x.rem_euclid(self.modulus)
    }

    pub fn add(&self, a: i128, b: i128) -> i128 {
        self.reduce(a + b)
    }

    pub fn sub(&self, a: i128, b: i128) -> i128 {
        self.reduce(a - b)
    }

    pub fn mul(&self, a: i128, b: i128) -> i128 {
        self.reduce(self.reduce(a) * self.reduce(b))
    }

    /// p-adic valuation capped at M (so 0 has valuation M).
    pub fn val(&self, x: i128) -> u32 {
        let mut x = self.reduce(x);
        if x == 0 {
            return self.m;
        }
        let mut v = 0;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }

    pub fn pow_p(&self, e: u32) -> i128 {
        if e >= self.m {
            0
        } else {
            self.p.pow(e)
        }
    }

    /// Inverse of a unit.
    pub fn inv(&self, a: i128) -> i128 {
        let a = self.reduce(a);
        let (g, x, _) = ext_gcd(a, self.modulus);
        assert_eq!(g, 1, "element {a} is not a unit mod {}", self.modulus);
        self.reduce(x)
    }

    /// Splits x = p^v * u with u a unit; returns (v, u). Zero gives (M, 0).
    pub fn split(&self, x: i128) -> (u32, i128) {
        let x = self.reduce(x);
        if x == 0 {
            return (self.m, 0);
        }
        let v = self.val(x);
        (v, x / self.p.pow(v))
    }
}

pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// Smith normal form `P * A * Q = D` over Z/p^M with `D` diagonal of prime powers.
#[derive(Debug, Clone)]
pub struct LocalSnf {
    pub ring: LocalRing,
    pub rows: usize,
    pub cols: usize,
    pub p: Mat,
    pub pinv: Mat,
    pub q: Mat,
    /// Valuations of the diagonal entries for indices below the rank.
    pub diag_val: Vec<u32>,
}

impl LocalSnf {
    pub fn rank(&self) -> usize {
        self.diag_val.len()
    }

    pub fn compute(ring: LocalRing, a: &Mat, rows: usize, cols: usize) -> Self {
        let mut d: Mat = a
            .iter()
            .map(|r| r.iter().map(|&x| ring.reduce(x)).collect())
            .collect();
        if d.is_empty() {
            d = vec![vec![]; rows];
        }
        let mut p = identity(rows);
        let mut pinv = identity(rows);
        let mut q = identity(cols);
        let mut diag_val = Vec::new();
        let n = rows.min(cols);
        for t in 0..n {
            let mut best: Option<(u32, usize, usize)> = None;
            for (i, row) in d.iter().enumerate().skip(t) {
                for (j, &x) in row.iter().enumerate().skip(t) {
                    let v = ring.val(x);
                    if v < ring.m && best.map_or(true, |(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                        if v == 0 {
                            break;
                        }
                    }
                }
                if matches!(best, Some((0, _, _))) {
                    break;
                }
            }
            let Some((v, bi, bj)) = best else { break };
            d.swap(t, bi);
            p.swap(t, bi);
            for row in pinv.iter_mut() {
                row.swap(t, bi);
            }
            for row in d.iter_mut() {
                row.swap(t, bj);
            }
            for row in q.iter_mut() {
                row.swap(t, bj);
            }
            // normalise pivot to exactly p^v
            let (_, u) = ring.split(d[t][t]);
            let uinv = ring.inv(u);
            for x in d[t].iter_mut() {
                *x = ring.mul(*x, uinv);
            }
            for x in p[t].iter_mut() {
                *x = ring.mul(*x, uinv);
            }
            for row in pinv.iter_mut() {
                row[t] = ring.mul(row[t], u);
            }
            let piv = ring.p.pow(v);
            for i in 0..rows {
                if i == t || d[i][t] == 0 {
                    continue;
                }
                let f = d[i][t] / piv;
                for j in 0..cols {
                    let s = ring.mul(f, d[t][j]);
                    d[i][j] = ring.sub(d[i][j], s);
                }
                for j in 0..rows {
                    let s = ring.mul(f, p[t][j]);
                    p[i][j] = ring.sub(p[i][j], s);
                }
                for row in pinv.iter_mut() {
                    let s = ring.mul(f, row[i]);
                    row[t] = ring.add(row[t], s);
                }
            }
            for j in (t + 1)..cols {
                if d[t][j] == 0 {
                    continue;
                }
                let f = d[t][j] / piv;
                for row in d.iter_mut() {
                    let s = ring.mul(f, row[t]);
                    row[j] = ring.sub(row[j], s);
                }
                for row in q.iter_mut() {
                    let s = ring.mul(f, row[t]);
                    row[j] = ring.sub(row[j], s);
                }
            }
            diag_val.push(v);
        }
        LocalSnf {
            ring,
            rows,
            cols,
            p,
            pinv,
            q,
            diag_val,
        }
    }

    /// Generators of the solution module `{x : A x = 0}`.
    pub fn kernel_generators(&self) -> Vec<Vec<i128>> {
        let ring = self.ring;
        let mut out = Vec::new();
        for i in 0..self.cols {
            let scale = if i < self.rank() {
                let v = self.diag_val[i];
                if v == 0 {
                    continue;
                }
                ring.pow_p(ring.m - v)
            } else {
                1
            };
            out.push(
                (0..self.cols)
                    .map(|r| ring.mul(self.q[r][i], scale))
                    .collect(),
            );
        }
        out
    }

    /// One solution of `A x = b`, if any.
    pub fn solve(&self, b: &[i128]) -> Option<Vec<i128>> {
        let ring = self.ring;
        let pb = mat_vec(ring, &self.p, b);
        let mut y = vec![0i128; self.cols];
        for (i, &c) in pb.iter().enumerate() {
            if i < self.rank() {
                let v = self.diag_val[i];
                if ring.val(c) < v {
                    return None;
                }
                y[i] = ring.reduce(c) / ring.p.pow(v);
            } else if ring.reduce(c) != 0 {
                return None;
            }
        }
        Some(mat_vec(ring, &self.q, &y))
    }
}

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

pub fn mat_vec(ring: LocalRing, a: &Mat, x: &[i128]) -> Vec<i128> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(0i128, |acc, (&r, &v)| ring.add(acc, ring.mul(r, v)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_mul(ring: LocalRing, a: &Mat, b: &Mat) -> Mat {
        let n = b.first().map_or(0, |r| r.len());
        a.iter()
            .map(|row| {
                (0..n)
                    .map(|j| {
                        row.iter()
                            .enumerate()
                            .fold(0, |acc, (k, &x)| ring.add(acc, ring.mul(x, b[k][j])))
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn snf_reconstructs_diagonal() {
        let ring = LocalRing::new(2, 4);
        let a: Mat = vec![vec![2, 4, 6], vec![4, 8, 3], vec![0, 2, 2]];
        let s = LocalSnf::compute(ring, &a, 3, 3);
        let d = mat_mul(ring, &mat_mul(ring, &s.p, &a), &s.q);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j && i < s.rank() {
                    ring.pow_p(s.diag_val[i])
                } else {
                    0
                };
                assert_eq!(d[i][j], expect, "entry {i},{j}");
            }
        }
        assert_eq!(mat_mul(ring, &s.p, &s.pinv), identity(3));
    }

    #[test]
    fn kernel_of_multiplication_by_two() {
        let ring = LocalRing::new(2, 3);
        let s = LocalSnf::compute(ring, &vec![vec![2]], 1, 1);
        let k = s.kernel_generators();
        assert_eq!(k.len(), 1);
        assert_eq!(ring.val(k[0][0]), 2);
    }

    #[test]
    fn solve_reports_inconsistency() {
        let ring = LocalRing::new(3, 2);
        let s = LocalSnf::compute(ring, &vec![vec![3]], 1, 1);
        assert!(s.solve(&[1]).is_none());
        assert_eq!(s.solve(&[6]).map(|x| ring.mul(x[0], 3)), Some(6));
    }
}
