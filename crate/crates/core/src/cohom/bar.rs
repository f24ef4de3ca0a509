//! Cohomology of a finite group from normalized inhomogeneous bar cochains.
//!
//! An n-cochain is a function on n-tuples of non-identity elements. A cochain
//! `c` with prescribed coboundary is determined by its values `c(y, s)` with
//! last entry in a generating set `S`: the coboundary equation at
//! `(y, u, s)` expresses `c(y, us)` through values ending in `s` and `c(y, u)`,
//! so a breadth-first walk over right multiplication by `S` fills in every
//! value as a linear form in those parameters. The remaining equations,
//! those at `(y, u, s)` whose edge `u -> us` was not used by the walk, cut
//! out the solutions. Equations with last entry outside `S` follow from these
//! because the defect `dc - w` is itself a cocycle.

use std::collections::VecDeque;

use super::fp::{Echelon, Fp};
use super::group::GroupTable;
use crate::error::{invariant, Error, Result};

/// Largest value table the solver will allocate, in bytes.
pub const BYTE_BUDGET: usize = 1 << 28;

/// A finite-dimensional F_p[G]-module: `action[g]` is the row-major matrix of `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coefficients {
    pub dim: usize,
    pub action: Vec<Vec<u8>>,
}

impl Coefficients {
    pub fn trivial(order: usize) -> Self {
        Coefficients {
            dim: 1,
            action: vec![vec![1]; order],
        }
    }

    #[inline]
    fn entry(&self, g: usize, row: usize, col: usize) -> u8 {
        self.action[g][row * self.dim + col]
    }

    pub fn is_trivial(&self) -> bool {
        let d = self.dim;
        self.action
            .iter()
            .all(|a| (0..d).all(|i| (0..d).all(|j| a[i * d + j] == u8::from(i == j))))
    }
}

/// Values of an n-cochain: entry `t * dim + k` is component `k` at tuple `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    pub n: usize,
    pub dim: usize,
    pub data: Vec<u8>,
}

impl Cochain {
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }
}

pub struct Bar {
    pub g: GroupTable,
    pub f: Fp,
    pub coeff: Coefficients,
    pub gens: Vec<usize>,
    m: usize,
}

/// Solution space of `dc = sum_j lambda_j w_j` for an n-cochain `c`.
struct System {
    width: usize,
    params: usize,
    values: Vec<u8>,
    eqs: Echelon,
}

/// Cocycles, coboundaries and class representatives in one degree.
pub struct BarDegree {
    pub n: usize,
    pub dim_z: usize,
    pub dim_b: usize,
    pub reps: Vec<Cochain>,
    reducer: Echelon,
    /// Table positions read off when projecting a cocycle to parameters.
    proj: Vec<usize>,
}

impl BarDegree {
    pub fn betti(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of the class of a cocycle in the basis `reps`.
    pub fn class_of(&self, c: &Cochain) -> Result<Vec<u8>> {
        if c.n != self.n {
            return invariant("cochain of the wrong degree");
        }
        let mut v: Vec<u8> = self.proj.iter().map(|&i| c.data[i]).collect();
        let tag = self.reducer.reduce(&mut v);
        if v.iter().any(|&x| x != 0) {
            return invariant("cochain is not a cocycle");
        }
        Ok(tag)
    }
}

impl Bar {
    pub fn new(g: &GroupTable, p: u64, coeff: Coefficients) -> Self {
        let gens = g.generating_set();
        Bar {
            m: g.order() - 1,
            g: g.clone(),
            f: Fp::new(p),
            coeff,
            gens,
        }
    }

    pub fn trivial(g: &GroupTable, p: u64) -> Self {
        Self::new(g, p, Coefficients::trivial(g.order()))
    }

    /// Number of non-identity tuples of length n.
    pub fn tuples(&self, n: usize) -> usize {
        self.m.pow(n as u32)
    }

    /// Index of a tuple, or `None` if it contains the identity.
    #[inline]
    pub fn encode(&self, t: &[usize]) -> Option<usize> {
        let mut idx = 0;
        for &x in t {
            if x == 0 {
                return None;
            }
            idx = idx * self.m + (x - 1);
        }
        Some(idx)
    }

    pub fn decode(&self, mut idx: usize, n: usize) -> Vec<usize> {
        let mut t = vec![0; n];
        for i in (0..n).rev() {
            t[i] = idx % self.m + 1;
            idx /= self.m;
        }
        t
    }

    fn check_budget(&self, n: usize, width: usize) -> Result<()> {
        let cells = (self.m as u128).pow(n as u32) * self.coeff.dim as u128 * width as u128;
        if cells > BYTE_BUDGET as u128 {
            return Err(Error::Resource(format!(
                "bar cochains in degree {n} for a group of order {} need about {cells} bytes",
                self.g.order()
            )));
        }
        Ok(())
    }

    /// Parameter column of `c(y, gens[si])`, component `k`.
    fn param_col(&self, y: usize, si: usize, k: usize) -> usize {
        (y * self.gens.len() + si) * self.coeff.dim + k
    }

    fn solve(&self, n: usize, rhs: &[Cochain]) -> Result<System> {
        assert!(n >= 1);
        let d = self.coeff.dim;
        let f = self.f;
        let ns = self.gens.len();
        let prefixes = self.tuples(n - 1);
        let params = prefixes * ns * d;
        let width = params + rhs.len();
        self.check_budget(n, width)?;
        let total = self.tuples(n);
        let mut values = vec![0u8; total * d * width];
        let at = |t: usize, k: usize| (t * d + k) * width;
        for y in 0..prefixes {
            let mut tup = self.decode(y, n - 1);
            tup.push(0);
            for (si, &s) in self.gens.iter().enumerate() {
                tup[n - 1] = s;
                let t = self.encode(&tup).expect("non-identity tuple");
                for k in 0..d {
                    values[at(t, k) + self.param_col(y, si, k)] = 1;
                }
            }
        }
        let mut known = vec![false; self.g.order()];
        known[0] = true;
        let mut queue = VecDeque::new();
        for &s in &self.gens {
            known[s] = true;
            queue.push_back(s);
        }
        let mut tree = vec![false; self.g.order() * ns];
        let mut h = vec![0usize; n + 1];
        let mut buf = vec![0u8; width];
        let mut scratch = vec![0usize; n];
        while let Some(u) = queue.pop_front() {
            for (si, &s) in self.gens.iter().enumerate() {
                let x = self.g.mul(u, s);
                if known[x] {
                    continue;
                }
                known[x] = true;
                tree[u * ns + si] = true;
                queue.push_back(x);
                for y in 0..prefixes {
                    let pre = self.decode(y, n - 1);
                    h[..n - 1].copy_from_slice(&pre);
                    h[n - 1] = u;
                    h[n] = s;
                    scratch[..n - 1].copy_from_slice(&pre);
                    scratch[n - 1] = x;
                    let target = self.encode(&scratch).expect("non-identity tuple");
                    for k in 0..d {
                        self.defect_row(n, &h, k, rhs, &values, width, Some(n), &mut buf);
                        // buf = dc(h) - w(h) without the i = n term; solve for it
                        let sgn = f.sign(n);
                        let dst = at(target, k);
                        for (j, b) in buf.iter().enumerate() {
                            values[dst + j] = f.mul(f.neg(*b), sgn);
                        }
                    }
                }
            }
        }
        let mut eqs = Echelon::new(f, width, 0);
        for u in 1..self.g.order() {
            for (si, &s) in self.gens.iter().enumerate() {
                if tree[u * ns + si] {
                    continue;
                }
                for y in 0..prefixes {
                    let pre = self.decode(y, n - 1);
                    h[..n - 1].copy_from_slice(&pre);
                    h[n - 1] = u;
                    h[n] = s;
                    for k in 0..d {
                        self.defect_row(n, &h, k, rhs, &values, width, None, &mut buf);
                        if buf.iter().any(|&b| b != 0) {
                            eqs.insert(buf.clone());
                        }
                    }
                }
            }
        }
        Ok(System {
            width,
            params,
            values,
            eqs,
        })
    }

    /// Component `k` of `dc(h) - sum_j lambda_j w_j(h)` as a linear form,
    /// leaving out the face with index `skip`.
    #[allow(clippy::too_many_arguments)]
    fn defect_row(
        &self,
        n: usize,
        h: &[usize],
        k: usize,
        rhs: &[Cochain],
        values: &[u8],
        width: usize,
        skip: Option<usize>,
        out: &mut [u8],
    ) {
        let f = self.f;
        let d = self.coeff.dim;
        out.fill(0);
        let row = |t: usize, c: usize| &values[(t * d + c) * width..(t * d + c + 1) * width];
        // face 0: h_1 . c(h_2, ..., h_{n+1})
        if let Some(t) = self.encode(&h[1..]) {
            for c in 0..d {
                let a = self.coeff.entry(h[0], k, c);
                f.axpy(out, a, row(t, c));
            }
        }
        let mut merged = vec![0usize; n];
        for i in 1..=n {
            if skip == Some(i) {
                continue;
            }
            merged[..i - 1].copy_from_slice(&h[..i - 1]);
            merged[i - 1] = self.g.mul(h[i - 1], h[i]);
            merged[i..].copy_from_slice(&h[i + 1..]);
            if let Some(t) = self.encode(&merged) {
                f.axpy(out, f.sign(i), row(t, k));
            }
        }
        if let Some(t) = self.encode(&h[..n]) {
            f.axpy(out, f.sign(n + 1), row(t, k));
        }
        if let Some(t) = self.encode(h) {
            let base = width - rhs.len();
            for (j, w) in rhs.iter().enumerate() {
                out[base + j] = f.add(out[base + j], f.neg(w.data[t * d + k]));
            }
        }
    }

    fn table_from(&self, n: usize, sys: &System, x: &[u8]) -> Cochain {
        let d = self.coeff.dim;
        let total = self.tuples(n);
        let data = (0..total * d)
            .map(|i| self.f.dot(&sys.values[i * sys.width..(i + 1) * sys.width], x))
            .collect();
        Cochain { n, dim: d, data }
    }

    fn fixed_points(&self) -> Vec<Vec<u8>> {
        let d = self.coeff.dim;
        let f = self.f;
        let mut e = Echelon::new(f, d, 0);
        for &s in &self.gens {
            for i in 0..d {
                let row: Vec<u8> = (0..d)
                    .map(|j| f.add(self.coeff.entry(s, i, j), f.neg(u8::from(i == j))))
                    .collect();
                e.insert(row);
            }
        }
        e.nullspace()
    }

    /// Dimension of the n-cocycles.
    pub fn dim_z(&self, n: usize) -> Result<usize> {
        if n == 0 {
            return Ok(self.fixed_points().len());
        }
        let sys = self.solve(n, &[])?;
        Ok(sys.width - sys.eqs.rank())
    }

    /// Betti numbers `b_0..=b_max`.
    pub fn betti(&self, max: usize) -> Result<Vec<usize>> {
        let d = self.coeff.dim;
        let mut out = Vec::with_capacity(max + 1);
        let mut prev_z = 0;
        for n in 0..=max {
            let z = self.dim_z(n)?;
            let b = if n == 0 {
                0
            } else {
                self.tuples(n - 1) * d - prev_z
            };
            out.push(z - b);
            prev_z = z;
        }
        Ok(out)
    }

    pub fn degree(&self, n: usize) -> Result<BarDegree> {
        let d = self.coeff.dim;
        let f = self.f;
        if n == 0 {
            let fixed = self.fixed_points();
            let mut reducer = Echelon::new(f, d, fixed.len());
            let mut reps = Vec::new();
            for (j, v) in fixed.iter().enumerate() {
                let mut tag = vec![0u8; fixed.len()];
                tag[j] = 1;
                reducer.insert_tagged(v.clone(), tag);
                reps.push(Cochain {
                    n: 0,
                    dim: d,
                    data: v.clone(),
                });
            }
            return Ok(BarDegree {
                n,
                dim_z: fixed.len(),
                dim_b: 0,
                reps,
                reducer,
                proj: (0..d).collect(),
            });
        }
        let sys = self.solve(n, &[])?;
        let z_basis = sys.eqs.nullspace();
        let params = sys.params;
        let prefixes = self.tuples(n - 1);
        // projection positions, in parameter-column order
        let mut proj = vec![0usize; params];
        for y in 0..prefixes {
            let mut tup = self.decode(y, n - 1);
            tup.push(0);
            for (si, &s) in self.gens.iter().enumerate() {
                tup[n - 1] = s;
                let t = self.encode(&tup).expect("non-identity tuple");
                for k in 0..d {
                    proj[self.param_col(y, si, k)] = t * d + k;
                }
            }
        }
        // coboundaries of elementary (n-1)-cochains, read at the parameters
        let mut bvecs = vec![vec![0u8; params]; prefixes * d];
        let mut merged = vec![0usize; n - 1];
        for y in 0..prefixes {
            let pre = self.decode(y, n - 1);
            for (si, &s) in self.gens.iter().enumerate() {
                let mut h = pre.clone();
                h.push(s);
                for k in 0..d {
                    let col = self.param_col(y, si, k);
                    if let Some(z) = self.encode(&h[1..]) {
                        for c in 0..d {
                            let a = self.coeff.entry(h[0], k, c);
                            let v = &mut bvecs[z * d + c][col];
                            *v = f.add(*v, a);
                        }
                    }
                    for i in 1..n {
                        merged[..i - 1].copy_from_slice(&h[..i - 1]);
                        merged[i - 1] = self.g.mul(h[i - 1], h[i]);
                        merged[i..].copy_from_slice(&h[i + 1..]);
                        if let Some(z) = self.encode(&merged) {
                            let v = &mut bvecs[z * d + k][col];
                            *v = f.add(*v, f.sign(i));
                        }
                    }
                    if let Some(z) = self.encode(&h[..n - 1]) {
                        let v = &mut bvecs[z * d + k][col];
                        *v = f.add(*v, f.sign(n));
                    }
                }
            }
        }
        let mut bspan = Echelon::new(f, params, 0);
        for v in bvecs {
            bspan.insert(v);
        }
        let dim_b = bspan.rank();
        let dim_z = z_basis.len();
        if dim_b > dim_z {
            return invariant("coboundaries exceed cocycles");
        }
        let betti = dim_z - dim_b;
        let mut reducer = bspan.with_tag_width(betti);
        let mut reps = Vec::new();
        for z in z_basis {
            if reps.len() == betti {
                break;
            }
            let mut tag = vec![0u8; betti];
            tag[reps.len()] = 1;
            if reducer.insert_tagged(z.clone(), tag) {
                reps.push(self.table_from(n, &sys, &z));
            }
        }
        if reps.len() != betti {
            return invariant("class representatives do not span the quotient");
        }
        Ok(BarDegree {
            n,
            dim_z,
            dim_b,
            reps,
            reducer,
            proj,
        })
    }

    /// Dimension of `{lambda : sum_j lambda_j w_j is a coboundary}` for
    /// (n+1)-cocycles `w_j`.
    pub fn coboundary_relations(&self, n: usize, w: &[Cochain]) -> Result<usize> {
        if w.iter().any(|c| c.n != n + 1) {
            return invariant("right-hand sides must have degree n + 1");
        }
        if n == 0 {
            // the coboundary of a constant c is g.c - c
            let d = self.coeff.dim;
            let mut cols: Vec<Vec<u8>> = w.iter().map(|c| c.data.clone()).collect();
            for v in 0..d {
                let mut col = vec![0u8; self.tuples(1) * d];
                for g in 1..self.g.order() {
                    for k in 0..d {
                        let a = self.coeff.entry(g, k, v);
                        col[(g - 1) * d + k] = self.f.add(a, self.f.neg(u8::from(k == v)));
                    }
                }
                cols.push(col);
            }
            // relations among the columns, projected to the w part
            let rows = self.tuples(1) * d;
            let mut e = Echelon::new(self.f, cols.len(), 0);
            for r in 0..rows {
                e.insert(cols.iter().map(|c| c[r]).collect());
            }
            return Ok(project_rank(self.f, &e.nullspace(), 0, w.len()));
        }
        let sys = self.solve(n, w)?;
        Ok(project_rank(self.f, &sys.eqs.nullspace(), sys.params, w.len()))
    }

    /// Full coboundary, evaluated on every (n+1)-tuple.
    pub fn coboundary(&self, c: &Cochain) -> Cochain {
        let n = c.n;
        let d = self.coeff.dim;
        let f = self.f;
        let total = self.tuples(n + 1);
        let mut data = vec![0u8; total * d];
        let mut merged = vec![0usize; n];
        for t in 0..total {
            let h = self.decode(t, n + 1);
            for k in 0..d {
                let mut acc = 0u8;
                if let Some(z) = self.encode(&h[1..]) {
                    for cc in 0..d {
                        acc = f.add(acc, f.mul(self.coeff.entry(h[0], k, cc), c.data[z * d + cc]));
                    }
                }
                for i in 1..=n {
                    merged[..i - 1].copy_from_slice(&h[..i - 1]);
                    merged[i - 1] = self.g.mul(h[i - 1], h[i]);
                    merged[i..].copy_from_slice(&h[i + 1..]);
                    if let Some(z) = self.encode(&merged) {
                        acc = f.add(acc, f.mul(f.sign(i), c.data[z * d + k]));
                    }
                }
                if let Some(z) = self.encode(&h[..n]) {
                    acc = f.add(acc, f.mul(f.sign(n + 1), c.data[z * d + k]));
                }
                data[t * d + k] = acc;
            }
        }
        Cochain {
            n: n + 1,
            dim: d,
            data,
        }
    }

    /// Cup product of cochains with trivial coefficients.
    pub fn cup(&self, a: &Cochain, b: &Cochain) -> Cochain {
        let tb = self.tuples(b.n);
        let mut data = Vec::with_capacity(a.data.len() * tb);
        for &x in &a.data {
            for &y in &b.data {
                data.push(self.f.mul(x, y));
            }
        }
        Cochain {
            n: a.n + b.n,
            dim: 1,
            data,
        }
    }

    /// A homomorphism `G -> F_p` as a 1-cochain.
    pub fn character(&self, s: &[u8]) -> Cochain {
        Cochain {
            n: 1,
            dim: 1,
            data: s[1..].to_vec(),
        }
    }
}

fn project_rank(f: Fp, basis: &[Vec<u8>], offset: usize, len: usize) -> usize {
    let mut e = Echelon::new(f, len, 0);
    for v in basis {
        e.insert(v[offset..offset + len].to_vec());
    }
    e.rank()
}

/// Cochain maps between a group and a normal subgroup of prime index, with
/// trivial coefficients.
pub struct SubgroupMaps<'a> {
    pub big: &'a Bar,
    pub small: &'a Bar,
    /// Label in `big` of each element of `small`.
    pub embed: Vec<usize>,
    /// Label in `small` of each element of `big`, if it lies in the subgroup.
    pub back: Vec<Option<usize>>,
    /// Right coset representative of each element (smallest label in `K x`).
    pub rep: Vec<usize>,
    pub transversal: Vec<usize>,
}

impl<'a> SubgroupMaps<'a> {
    pub fn new(big: &'a Bar, small: &'a Bar, embed: Vec<usize>) -> Self {
        let g = &big.g;
        let mut back = vec![None; g.order()];
        for (i, &x) in embed.iter().enumerate() {
            back[x] = Some(i);
        }
        let mut rep = vec![usize::MAX; g.order()];
        let mut transversal = Vec::new();
        for x in 0..g.order() {
            if rep[x] != usize::MAX {
                continue;
            }
            transversal.push(x);
            for &k in &embed {
                rep[g.mul(k, x)] = x;
            }
        }
        SubgroupMaps {
            big,
            small,
            embed,
            back,
            rep,
            transversal,
        }
    }

    pub fn restrict(&self, c: &Cochain) -> Cochain {
        let n = c.n;
        let total = self.small.tuples(n);
        let data = (0..total)
            .map(|t| {
                let tk = self.small.decode(t, n);
                let tg: Vec<usize> = tk.iter().map(|&x| self.embed[x]).collect();
                c.data[self.big.encode(&tg).expect("embedding keeps non-identity")]
            })
            .collect();
        Cochain { n, dim: 1, data }
    }

    /// `(tr f)(g_1..g_n) = sum_t f(k_1..k_n)` with `t_{i-1} g_i = k_i t_i`.
    pub fn transfer(&self, c: &Cochain) -> Cochain {
        let g = &self.big.g;
        let f = self.big.f;
        let n = c.n;
        let total = self.big.tuples(n);
        let mut ks = vec![0usize; n];
        let data = (0..total)
            .map(|t| {
                let h = self.big.decode(t, n);
                let mut acc = 0u8;
                for &t0 in &self.transversal {
                    let mut cur = t0;
                    for (i, &gi) in h.iter().enumerate() {
                        let x = g.mul(cur, gi);
                        let next = self.rep[x];
                        let k = g.mul(x, g.inv(next));
                        ks[i] = self.back[k].expect("coset decomposition lands in the subgroup");
                        cur = next;
                    }
                    if let Some(idx) = self.small.encode(&ks) {
                        acc = f.add(acc, c.data[idx]);
                    }
                }
                acc
            })
            .collect();
        Cochain { n, dim: 1, data }
    }
}
