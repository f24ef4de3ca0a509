//! Dense vectors over F_p stored one entry per byte, and an incremental
//! echelon basis with optional bookkeeping tags.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp {
    pub p: u8,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        assert!((2..=251).contains(&p), "field characteristic out of range");
        Fp { p: p as u8 }
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        ((a as u16 + b as u16) % self.p as u16) as u8
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.p as u16) as u8
    }

    /// `(-1)^k`.
    #[inline]
    pub fn sign(self, k: usize) -> u8 {
        if k % 2 == 0 {
            1
        } else {
            self.p - 1
        }
    }

    pub fn from_i64(self, x: i64) -> u8 {
        x.rem_euclid(self.p as i64) as u8
    }

    pub fn inv(self, a: u8) -> u8 {
        assert!(a % self.p != 0, "zero has no inverse");
        (1..self.p).find(|&b| self.mul(a, b) == 1).expect("field")
    }

    /// `dst += c * src`.
    #[inline]
    pub fn axpy(self, dst: &mut [u8], c: u8, src: &[u8]) {
        if c == 0 {
            return;
        }
        if self.p == 2 {
            for (d, &s) in dst.iter_mut().zip(src) {
                *d ^= s;
            }
        } else if self.p < 128 && (c == 1 || c == self.p - 1) {
            // byte lanes: d + s or d + (p - s) stays below 2p < 256
            let p = self.p;
            let minus = c != 1;
            for (d, &s) in dst.iter_mut().zip(src) {
                let t = *d + if minus { p - s } else { s };
                *d = if t >= p { t - p } else { t };
            }
        } else {
            // Barrett reduction: t < 2^16, so q is floor(t / p) or one less
            let p = self.p as u32;
            let m = (1u32 << 16) / p;
            let c = c as u32;
            for (d, &s) in dst.iter_mut().zip(src) {
                let t = *d as u32 + c * s as u32;
                let r = t - ((t * m) >> 16) * p;
                *d = if r >= p { r - p } else { r } as u8;
            }
        }
    }

    pub fn scale(self, v: &mut [u8], c: u8) {
        if c == 1 {
            return;
        }
        for x in v.iter_mut() {
            *x = self.mul(*x, c);
        }
    }

    pub fn dot(self, a: &[u8], b: &[u8]) -> u8 {
        let s: u64 = a.iter().zip(b).map(|(&x, &y)| x as u64 * y as u64).sum();
        (s % self.p as u64) as u8
    }
}

/// Rows in echelon form with unit pivots. Each row carries a tag vector that
/// records what the row stands for in some other basis.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub f: Fp,
    width: usize,
    tag_width: usize,
    rows: Vec<Vec<u8>>,
    tags: Vec<Vec<u8>>,
    pivot_row: Vec<usize>,
    pivot_col: Vec<usize>,
}

const NONE: usize = usize::MAX;

impl Echelon {
    pub fn new(f: Fp, width: usize, tag_width: usize) -> Self {
        Echelon {
            f,
            width,
            tag_width,
            rows: Vec::new(),
            tags: Vec::new(),
            pivot_row: vec![NONE; width],
            pivot_col: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Widens every tag with zeros.
    pub fn with_tag_width(mut self, tag_width: usize) -> Self {
        assert!(tag_width >= self.tag_width);
        for t in &mut self.tags {
            t.resize(tag_width, 0);
        }
        self.tag_width = tag_width;
        self
    }

    /// Reduces `v` in place; returns the accumulated tag of the subtracted rows.
    pub fn reduce(&self, v: &mut [u8]) -> Vec<u8> {
        let mut acc = vec![0u8; self.tag_width];
        for col in 0..self.width {
            let c = v[col];
            if c == 0 {
                continue;
            }
            let r = self.pivot_row[col];
            if r == NONE {
                continue;
            }
            // rows vanish left of their pivot
            self.f.axpy(&mut v[col..], self.f.neg(c), &self.rows[r][col..]);
            if self.tag_width > 0 {
                self.f.axpy(&mut acc, c, &self.tags[r]);
            }
        }
        acc
    }

    /// Inserts `v` with the given tag; returns whether the rank grew.
    pub fn insert_tagged(&mut self, mut v: Vec<u8>, tag: Vec<u8>) -> bool {
        let acc = self.reduce(&mut v);
        let Some(col) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let mut t = tag;
        if self.tag_width > 0 {
            let f = self.f;
            for (x, &a) in t.iter_mut().zip(&acc) {
                *x = f.add(*x, f.neg(a));
            }
        }
        let inv = self.f.inv(v[col]);
        self.f.scale(&mut v, inv);
        self.f.scale(&mut t, inv);
        self.pivot_row[col] = self.rows.len();
        self.pivot_col.push(col);
        self.rows.push(v);
        self.tags.push(t);
        true
    }

    pub fn insert(&mut self, v: Vec<u8>) -> bool {
        let tag = vec![0u8; self.tag_width];
        self.insert_tagged(v, tag)
    }

    /// Whether `v` lies in the row span.
    pub fn contains(&self, v: &[u8]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Basis of `{x : row . x = 0 for every row}`.
    pub fn nullspace(&self) -> Vec<Vec<u8>> {
        let f = self.f;
        // back-substitute to reduced form, latest pivots first
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| self.pivot_col[r]);
        let mut rows = self.rows.clone();
        for i in (0..order.len()).rev() {
            let r = order[i];
            let col = self.pivot_col[r];
            for &o in &order[..i] {
                let c = rows[o][col];
                if c != 0 {
                    let (a, b) = if o < r {
                        let (lo, hi) = rows.split_at_mut(r);
                        (&mut lo[o], &hi[0])
                    } else {
                        let (lo, hi) = rows.split_at_mut(o);
                        (&mut hi[0], &lo[r])
                    };
                    f.axpy(a, f.neg(c), b);
                }
            }
        }
        let mut out = Vec::new();
        for free in 0..self.width {
            if self.pivot_row[free] != NONE {
                continue;
            }
            let mut x = vec![0u8; self.width];
            x[free] = 1;
            for (r, row) in rows.iter().enumerate() {
                let c = row[free];
                if c != 0 {
                    x[self.pivot_col[r]] = f.neg(c);
                }
            }
            out.push(x);
        }
        out
    }
}

/// Rank of a list of vectors.
pub fn rank_of(f: Fp, width: usize, vs: impl IntoIterator<Item = Vec<u8>>) -> usize {
    let mut e = Echelon::new(f, width, 0);
    for v in vs {
        e.insert(v);
    }
    e.rank()
}
