use serde::{Deserialize, Serialize};

use super::local::{LocalRing, LocalSnf, Mat};
use super::qz::Qz;
use crate::error::{invalid, Error, Result};

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `Z/p^{k_1} + ... + Z/p^{k_s}` with `k_1 >= ... >= k_s >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawGroup")]
pub struct PGroup {
    p: u64,
    exponents: Vec<u32>,
}

#[derive(Deserialize)]
struct RawGroup {
    p: u64,
    exponents: Vec<u32>,
}

impl TryFrom<RawGroup> for PGroup {
    type Error = Error;
    fn try_from(r: RawGroup) -> Result<Self> {
        PGroup::new(r.p, r.exponents)
    }
}

/// Element of a [`PGroup`], given by its coordinates in the standard cyclic basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GElem(pub Vec<i64>);

impl GElem {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

impl PGroup {
    pub fn new(p: u64, exponents: Vec<u32>) -> Result<Self> {
        if !is_prime(p) {
            return invalid(format!("{p} is not prime"));
        }
        if exponents.iter().any(|&k| k == 0) {
            return invalid("exponents must be positive");
        }
        if exponents.windows(2).any(|w| w[0] < w[1]) {
            return invalid("exponents must be non-increasing");
        }
        let g = PGroup { p, exponents };
        if (g.max_exponent() as f64) * (p as f64).log2() > 60.0 {
            return Err(Error::Resource(format!(
                "cyclic factor of order {p}^{} exceeds 60-bit arithmetic",
                g.max_exponent()
            )));
        }
        Ok(g)
    }

    /// Builds a group from any list of exponents, dropping zeros and sorting.
    pub fn normalized(p: u64, mut exponents: Vec<u32>) -> Result<Self> {
        exponents.retain(|&k| k > 0);
        exponents.sort_unstable_by(|a, b| b.cmp(a));
        PGroup::new(p, exponents)
    }

    pub fn trivial(p: u64) -> Self {
        PGroup::new(p, vec![]).expect("prime")
    }

    pub fn cyclic(p: u64, k: u32) -> Self {
        PGroup::normalized(p, vec![k]).expect("valid cyclic group")
    }

    pub fn elementary(p: u64, rank: usize) -> Self {
        PGroup::new(p, vec![1; rank]).expect("valid elementary group")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn max_exponent(&self) -> u32 {
        self.exponents.first().copied().unwrap_or(0)
    }

    /// `log_p |G|`.
    pub fn log_order(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.log_order())
    }

    pub fn is_elementary(&self) -> bool {
        self.exponents.iter().all(|&k| k == 1)
    }

    pub fn modulus(&self, i: usize) -> i64 {
        (self.p as i64).pow(self.exponents[i])
    }

    pub fn moduli(&self) -> Vec<i64> {
        (0..self.rank()).map(|i| self.modulus(i)).collect()
    }

    pub(crate) fn ring_with(&self, other: &PGroup) -> LocalRing {
        LocalRing::new(self.p, self.max_exponent().max(other.max_exponent()) + 1)
    }

    pub(crate) fn ring(&self) -> LocalRing {
        self.ring_with(self)
    }

    pub fn zero(&self) -> GElem {
        GElem(vec![0; self.rank()])
    }

    pub fn basis(&self, i: usize) -> GElem {
        let mut c = vec![0; self.rank()];
        c[i] = 1;
        GElem(c)
    }

    pub fn elem(&self, coords: &[i64]) -> Result<GElem> {
        if coords.len() != self.rank() {
            return invalid(format!(
                "element has {} coordinates, group has rank {}",
                coords.len(),
                self.rank()
            ));
        }
        Ok(self.reduce(coords))
    }

    pub fn reduce(&self, coords: &[i64]) -> GElem {
        GElem(
            coords
                .iter()
                .enumerate()
                .map(|(i, &c)| c.rem_euclid(self.modulus(i)))
                .collect(),
        )
    }

    pub(crate) fn reduce_wide(&self, coords: &[i128]) -> GElem {
        GElem(
            coords
                .iter()
                .enumerate()
                .map(|(i, &c)| c.rem_euclid(self.modulus(i) as i128) as i64)
                .collect(),
        )
    }

    pub fn contains(&self, x: &GElem) -> bool {
        x.0.len() == self.rank()
            && x.0
                .iter()
                .enumerate()
                .all(|(i, &c)| (0..self.modulus(i)).contains(&c))
    }

    pub fn add(&self, x: &GElem, y: &GElem) -> GElem {
        let c: Vec<i64> = x.0.iter().zip(&y.0).map(|(a, b)| a + b).collect();
        self.reduce(&c)
    }

    pub fn neg(&self, x: &GElem) -> GElem {
        let c: Vec<i64> = x.0.iter().map(|a| -a).collect();
        self.reduce(&c)
    }

    pub fn sub(&self, x: &GElem, y: &GElem) -> GElem {
        self.add(x, &self.neg(y))
    }

    pub fn scale(&self, k: i64, x: &GElem) -> GElem {
        let c: Vec<i128> = x.0.iter().map(|&a| a as i128 * k as i128).collect();
        self.reduce_wide(&c)
    }

    pub fn is_zero(&self, x: &GElem) -> bool {
        x.0.iter().all(|&c| c == 0)
    }

    /// Smallest power of p annihilating `x`.
    pub fn elem_order(&self, x: &GElem) -> u128 {
        let mut ord = 1u128;
        for (i, &c) in x.0.iter().enumerate() {
            let m = self.modulus(i);
            let c = c.rem_euclid(m);
            if c == 0 {
                continue;
            }
            let mut v = 0u32;
            let mut t = c;
            while t % self.p as i64 == 0 {
                t /= self.p as i64;
                v += 1;
            }
            let o = (self.p as u128).pow(self.exponents[i] - v);
            ord = ord.max(o);
        }
        ord
    }

    /// All elements in mixed-radix order. Intended for small groups only.
    pub fn elements(&self) -> impl Iterator<Item = GElem> + '_ {
        let moduli = self.moduli();
        let total: u128 = moduli.iter().map(|&m| m as u128).product();
        (0..total).map(move |mut idx| {
            let mut c = vec![0i64; moduli.len()];
            for (i, &m) in moduli.iter().enumerate().rev() {
                c[i] = (idx % m as u128) as i64;
                idx /= m as u128;
            }
            GElem(c)
        })
    }

    pub fn direct_sum(&self, other: &PGroup) -> Result<(PGroup, Vec<usize>)> {
        if self.p != other.p {
            return invalid("direct sum of groups for different primes");
        }
        let mut tagged: Vec<(u32, usize)> = self
            .exponents
            .iter()
            .chain(other.exponents.iter())
            .copied()
            .enumerate()
            .map(|(i, k)| (k, i))
            .collect();
        tagged.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        // position[i] = slot of the i-th summand of (self ++ other) in the sorted group
        let mut position = vec![0; tagged.len()];
        for (slot, &(_, i)) in tagged.iter().enumerate() {
            position[i] = slot;
        }
        let g = PGroup::new(self.p, tagged.iter().map(|t| t.0).collect())?;
        Ok((g, position))
    }

    /// Pontryagin dual. Abstractly isomorphic, so the exponent vector is unchanged.
    pub fn dual_group(&self) -> PGroup {
        self.clone()
    }

    /// Standard pairing `W x dual(W) -> Q/Z`, `<x, chi> = sum x_i chi_i / p^{k_i}`.
    pub fn dual_pairing(&self, x: &GElem, chi: &GElem) -> Qz {
        (0..self.rank())
            .map(|i| Qz::new(x.0[i] as i128 * chi.0[i] as i128, self.modulus(i) as i128))
            .sum()
    }
}

impl std::fmt::Display for PGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.exponents.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|&k| format!("Z/{}", (self.p as u128).pow(k)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Homomorphism `source -> target` by an integer matrix (rows index the target).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hom {
    source: PGroup,
    target: PGroup,
    matrix: Vec<Vec<i64>>,
}

impl Hom {
    /// Validates `A_ij = 0 mod p^{max(0, l_i - k_j)}` and reduces entries mod `p^{l_i}`.
    pub fn new(source: PGroup, target: PGroup, matrix: Vec<Vec<i64>>) -> Result<Self> {
        if source.p != target.p {
            return invalid("source and target have different primes");
        }
        if matrix.len() != target.rank() {
            return invalid(format!(
                "matrix has {} rows, target has rank {}",
                matrix.len(),
                target.rank()
            ));
        }
        let p = source.p as i64;
        let mut reduced = Vec::with_capacity(matrix.len());
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != source.rank() {
                return invalid(format!(
                    "row {i} has {} entries, source has rank {}",
                    row.len(),
                    source.rank()
                ));
            }
            let li = target.exponents[i];
            let mut r = Vec::with_capacity(row.len());
            for (j, &a) in row.iter().enumerate() {
                let kj = source.exponents[j];
                let need = li.saturating_sub(kj);
                if a.rem_euclid(p.pow(need)) != 0 {
                    return invalid(format!(
                        "entry ({i},{j}) = {a} is not divisible by {p}^{need}; the map is not well defined"
                    ));
                }
                r.push(a.rem_euclid(target.modulus(i)));
            }
            reduced.push(r);
        }
        Ok(Hom {
            source,
            target,
            matrix: reduced,
        })
    }

    pub fn identity(g: &PGroup) -> Hom {
        let n = g.rank();
        let m = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        Hom::new(g.clone(), g.clone(), m).expect("identity is well formed")
    }

    pub fn zero(source: &PGroup, target: &PGroup) -> Hom {
        Hom::new(
            source.clone(),
            target.clone(),
            vec![vec![0; source.rank()]; target.rank()],
        )
        .expect("zero map is well formed")
    }

    /// Multiplication by an integer on `g`.
    pub fn scalar(g: &PGroup, k: i64) -> Hom {
        let n = g.rank();
        let m = (0..n)
            .map(|i| (0..n).map(|j| if i == j { k } else { 0 }).collect())
            .collect();
        Hom::new(g.clone(), g.clone(), m).expect("scalar map is well formed")
    }

    /// Builds the map sending basis vector `j` to `images[j]`.
    pub fn from_images(source: &PGroup, target: &PGroup, images: &[GElem]) -> Result<Hom> {
        if images.len() != source.rank() {
            return invalid("need one image per source generator");
        }
        let m = (0..target.rank())
            .map(|i| images.iter().map(|x| x.0[i]).collect())
            .collect();
        Hom::new(source.clone(), target.clone(), m)
    }

    pub fn source(&self) -> &PGroup {
        &self.source
    }

    pub fn target(&self) -> &PGroup {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn apply(&self, x: &GElem) -> GElem {
        let c: Vec<i128> = self
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&x.0)
                    .map(|(&a, &b)| a as i128 * b as i128)
                    .sum()
            })
            .collect();
        self.target.reduce_wide(&c)
    }

    /// Image of the j-th source generator.
    pub fn column(&self, j: usize) -> GElem {
        GElem(self.matrix.iter().map(|r| r[j]).collect())
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &Hom) -> Result<Hom> {
        if first.target != self.source {
            return invalid("composition of incompatible maps");
        }
        let images: Vec<GElem> = (0..first.source.rank())
            .map(|j| self.apply(&first.column(j)))
            .collect();
        Hom::from_images(&first.source, &self.target, &images)
    }

    pub fn add(&self, other: &Hom) -> Result<Hom> {
        if self.source != other.source || self.target != other.target {
            return invalid("sum of maps with different domains");
        }
        let images: Vec<GElem> = (0..self.source.rank())
            .map(|j| self.target.add(&self.column(j), &other.column(j)))
            .collect();
        Hom::from_images(&self.source, &self.target, &images)
    }

    pub fn neg(&self) -> Hom {
        let images: Vec<GElem> = (0..self.source.rank())
            .map(|j| self.target.neg(&self.column(j)))
            .collect();
        Hom::from_images(&self.source, &self.target, &images).expect("negation is well formed")
    }

    pub fn sub(&self, other: &Hom) -> Result<Hom> {
        self.add(&other.neg())
    }

    pub fn pow(&self, n: u32) -> Result<Hom> {
        if self.source != self.target {
            return invalid("power of a non-endomorphism");
        }
        let mut acc = Hom::identity(&self.source);
        for _ in 0..n {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(|&a| a == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && *self == Hom::identity(&self.source)
    }

    fn wide_matrix(&self) -> Mat {
        self.matrix
            .iter()
            .map(|r| r.iter().map(|&a| a as i128).collect())
            .collect()
    }

    /// Kernel with its embedding into the source.
    pub fn kernel(&self) -> (PGroup, Hom) {
        let sq = self.kernel_subquotient();
        let emb = sq.embedding();
        (sq.group().clone(), emb)
    }

    pub(crate) fn kernel_subquotient(&self) -> Subquotient {
        let gens = self.kernel_generators();
        Subquotient::new(&self.source, &gens, &[])
    }

    /// Generators (not necessarily minimal) of the kernel.
    pub fn kernel_generators(&self) -> Vec<GElem> {
        let ring = self.source.ring_with(&self.target);
        let n = self.source.rank();
        let m = self.target.rank();
        let a = self.wide_matrix();
        let big: Mat = (0..m)
            .map(|i| {
                let mut row = a[i].clone();
                for k in 0..m {
                    row.push(if k == i {
                        self.target.modulus(i) as i128
                    } else {
                        0
                    });
                }
                row
            })
            .collect();
        let snf = LocalSnf::compute(ring, &big, m, n + m);
        snf.kernel_generators()
            .into_iter()
            .map(|v| self.source.reduce_wide(&v[..n]))
            .filter(|x| !self.source.is_zero(x))
            .collect()
    }

    /// Some `x` with `self(x) = y`, or `None` when `y` is not in the image.
    pub fn preimage(&self, y: &GElem) -> Option<GElem> {
        if !self.target.contains(y) {
            return None;
        }
        let ring = self.source.ring_with(&self.target);
        let n = self.source.rank();
        let m = self.target.rank();
        let a = self.wide_matrix();
        let big: Mat = (0..m)
            .map(|i| {
                let mut row = a[i].clone();
                row.extend((0..m).map(|k| {
                    if k == i {
                        self.target.modulus(i) as i128
                    } else {
                        0
                    }
                }));
                row
            })
            .collect();
        let snf = LocalSnf::compute(ring, &big, m, n + m);
        let b: Vec<i128> = y.0.iter().map(|&c| c as i128).collect();
        let sol = snf.solve(&b)?;
        Some(self.source.reduce_wide(&sol[..n]))
    }

    /// Image with its embedding into the target.
    pub fn image(&self) -> (PGroup, Hom) {
        let gens: Vec<GElem> = (0..self.source.rank()).map(|j| self.column(j)).collect();
        let sq = Subquotient::new(&self.target, &gens, &[]);
        (sq.group().clone(), sq.embedding())
    }

    /// Cokernel with the projection from the target.
    pub fn cokernel(&self) -> (PGroup, Hom) {
        let gens: Vec<GElem> = (0..self.target.rank()).map(|i| self.target.basis(i)).collect();
        let rels: Vec<GElem> = (0..self.source.rank()).map(|j| self.column(j)).collect();
        let sq = Subquotient::new(&self.target, &gens, &rels);
        let images: Vec<GElem> = gens
            .iter()
            .map(|g| sq.coords(g).expect("generator lies in the whole group"))
            .collect();
        let proj = Hom::from_images(&self.target, sq.group(), &images)
            .expect("projection onto a quotient is well formed");
        (sq.group().clone(), proj)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().0.is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().0.is_trivial()
    }

    pub fn is_bijective(&self) -> bool {
        self.source.order() == self.target.order() && self.is_injective()
    }
}

/// The image of `<gens>` in `ambient / <rels>`, presented in normal form.
#[derive(Debug, Clone)]
pub struct Subquotient {
    ambient: PGroup,
    group: PGroup,
    gens: Vec<GElem>,
    to_h: Mat,
    lifts: Vec<GElem>,
    solver: LocalSnf,
}

impl Subquotient {
    pub fn new(ambient: &PGroup, gens: &[GElem], rels: &[GElem]) -> Subquotient {
        let ring = ambient.ring();
        let m = ambient.rank();
        let k = gens.len();
        let f = rels.len();
        // relation lattice: {c : E c in <rels> + p^l Z^m}
        let big: Mat = (0..m)
            .map(|i| {
                let mut row: Vec<i128> = gens.iter().map(|g| g.0[i] as i128).collect();
                row.extend(rels.iter().map(|r| r.0[i] as i128));
                for t in 0..m {
                    row.push(if t == i { ambient.modulus(i) as i128 } else { 0 });
                }
                row
            })
            .collect();
        let rel_snf = LocalSnf::compute(ring, &big, m, k + f + m);
        let rel_cols: Vec<Vec<i128>> = rel_snf
            .kernel_generators()
            .into_iter()
            .map(|v| v[..k].to_vec())
            .collect();
        // k x q matrix of relations
        let q = rel_cols.len();
        let rel_mat: Mat = (0..k)
            .map(|i| rel_cols.iter().map(|c| c[i]).collect())
            .collect();
        let snf = LocalSnf::compute(ring, &rel_mat, k, q);
        let mut factors: Vec<(u32, usize)> = Vec::new();
        for i in 0..k {
            let v = if i < snf.rank() { snf.diag_val[i] } else { ring.m };
            if v > 0 {
                assert!(
                    v < ring.m,
                    "subquotient of a finite group must be finite"
                );
                factors.push((v, i));
            }
        }
        factors.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let group = PGroup::new(ambient.p(), factors.iter().map(|t| t.0).collect())
            .expect("subquotient exponents are valid");
        let to_h: Mat = factors.iter().map(|&(_, i)| snf.p[i].clone()).collect();
        let lifts: Vec<GElem> = factors
            .iter()
            .map(|&(_, i)| {
                let c: Vec<i128> = (0..k).map(|r| snf.pinv[r][i]).collect();
                let mut acc = vec![0i128; m];
                for (g, &cj) in gens.iter().zip(&c) {
                    for t in 0..m {
                        acc[t] = ring.add(acc[t], ring.mul(g.0[t] as i128, cj));
                    }
                }
                ambient.reduce_wide(&acc)
            })
            .collect();
        let span: Mat = (0..m)
            .map(|i| {
                let mut row: Vec<i128> = gens.iter().map(|g| g.0[i] as i128).collect();
                for t in 0..m {
                    row.push(if t == i { ambient.modulus(i) as i128 } else { 0 });
                }
                row
            })
            .collect();
        let solver = LocalSnf::compute(ring, &span, m, k + m);
        Subquotient {
            ambient: ambient.clone(),
            group,
            gens: gens.to_vec(),
            to_h,
            lifts,
            solver,
        }
    }

    pub fn group(&self) -> &PGroup {
        &self.group
    }

    pub fn ambient(&self) -> &PGroup {
        &self.ambient
    }

    /// Coordinates in the normal-form group of an element of `<gens>`; `None` outside it.
    pub fn coords(&self, x: &GElem) -> Option<GElem> {
        let b: Vec<i128> = x.0.iter().map(|&c| c as i128).collect();
        let sol = self.solver.solve(&b)?;
        let c = &sol[..self.gens.len()];
        let ring = self.solver.ring;
        let y: Vec<i128> = self
            .to_h
            .iter()
            .map(|row| {
                row.iter()
                    .zip(c)
                    .fold(0, |acc, (&a, &v)| ring.add(acc, ring.mul(a, v)))
            })
            .collect();
        Some(self.group.reduce_wide(&y))
    }

    /// A representative in the ambient group.
    pub fn lift(&self, h: &GElem) -> GElem {
        let mut acc = self.ambient.zero();
        for (l, &c) in self.lifts.iter().zip(&h.0) {
            acc = self.ambient.add(&acc, &self.ambient.scale(c, l));
        }
        acc
    }

    /// Inclusion into the ambient group. Only meaningful without relations.
    pub fn embedding(&self) -> Hom {
        Hom::from_images(&self.group, &self.ambient, &self.lifts)
            .expect("embedding of a subgroup is well formed")
    }

    /// Map on subquotients induced by `f: self.ambient -> other.ambient`.
    pub fn induced(&self, f: &Hom, other: &Subquotient) -> Result<Hom> {
        let images = self
            .lifts
            .iter()
            .map(|l| {
                other.coords(&f.apply(l)).ok_or_else(|| {
                    Error::Invalid("map does not preserve the subquotient".into())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Hom::from_images(&self.group, &other.group, &images)
    }
}

/// `ker(d_out) / im(d_in)` for composable maps with `d_out ∘ d_in = 0`.
pub fn homology(d_in: &Hom, d_out: &Hom) -> Result<Subquotient> {
    if d_in.target() != d_out.source() {
        return invalid("homology of non-composable maps");
    }
    if !d_out.compose(d_in)?.is_zero() {
        return invalid("homology requires d_out ∘ d_in = 0");
    }
    let gens = d_out.kernel_generators();
    let rels: Vec<GElem> = (0..d_in.source().rank()).map(|j| d_in.column(j)).collect();
    Ok(Subquotient::new(d_out.source(), &gens, &rels))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_kernel_order(f: &Hom) -> usize {
        f.source()
            .elements()
            .filter(|x| f.target().is_zero(&f.apply(x)))
            .count()
    }

    #[test]
    fn element_orders() {
        let g = PGroup::new(2, vec![2, 1]).unwrap();
        assert_eq!(g.elem_order(&g.zero()), 1);
        assert_eq!(g.elem_order(&GElem(vec![2, 1])), 2);
        let z8 = PGroup::cyclic(2, 3);
        assert_eq!(z8.elem_order(&z8.basis(0)), 8);
    }

    #[test]
    fn rejects_bad_groups_and_maps() {
        assert!(PGroup::new(4, vec![1]).is_err());
        assert!(PGroup::new(2, vec![1, 2]).is_err());
        let z2 = PGroup::cyclic(2, 1);
        let z4 = PGroup::cyclic(2, 2);
        // Z/2 -> Z/4 must land in 2Z/4
        assert!(Hom::new(z2.clone(), z4.clone(), vec![vec![1]]).is_err());
        assert!(Hom::new(z2, z4, vec![vec![2]]).is_ok());
    }

    #[test]
    fn kernel_of_doubling_on_z4() {
        let z4 = PGroup::cyclic(2, 2);
        let (k, emb) = Hom::scalar(&z4, 2).kernel();
        assert_eq!(k, PGroup::cyclic(2, 1));
        assert_eq!(emb.apply(&k.basis(0)), GElem(vec![2]));
    }

    #[test]
    fn cokernel_of_p_on_cyclic() {
        for p in [2u64, 3, 5] {
            let g = PGroup::cyclic(p, 2);
            let (c, proj) = Hom::scalar(&g, p as i64).cokernel();
            assert_eq!(c, PGroup::cyclic(p, 1));
            assert_eq!(c.elem_order(&proj.apply(&g.basis(0))), p as u128);
        }
    }

    #[test]
    fn one_plus_minus_one_is_zero() {
        let g = PGroup::cyclic(2, 5);
        let zeta = Hom::scalar(&g, -1);
        let n = Hom::identity(&g).add(&zeta).unwrap();
        assert_eq!(n.kernel().0, g);
        assert_eq!(brute_kernel_order(&n) as u128, g.order());
    }

    #[test]
    fn mixed_kernel_matches_enumeration() {
        let g = PGroup::new(3, vec![2, 1]).unwrap();
        let h = PGroup::new(3, vec![2, 2]).unwrap();
        let f = Hom::new(g.clone(), h, vec![vec![3, 3], vec![1, 6]]).unwrap();
        let (k, _) = f.kernel();
        assert_eq!(k.order() as usize, brute_kernel_order(&f));
        let (im, _) = f.image();
        assert_eq!(k.order() * im.order(), g.order());
    }

    #[test]
    fn dual_pairing_is_perfect_on_z9() {
        let g = PGroup::cyclic(3, 2);
        for x in g.elements().filter(|x| !g.is_zero(x)) {
            assert!(g
                .elements()
                .any(|chi| !g.dual_pairing(&x, &chi).is_zero()));
        }
        assert_eq!(g.dual_group(), g);
        assert_eq!(PGroup::trivial(2).dual_group(), PGroup::trivial(2));
    }

    #[test]
    fn homology_of_two_step_complex() {
        // Z/4 -x2-> Z/4 -x2-> Z/4 has homology Z/2/Z/2... ker 2 = <2> = im 2, so 0
        let z4 = PGroup::cyclic(2, 2);
        let two = Hom::scalar(&z4, 2);
        let h = homology(&two, &two).unwrap();
        assert!(h.group().is_trivial());
        let z8 = PGroup::cyclic(2, 3);
        let four = Hom::scalar(&z8, 4);
        let twice = Hom::scalar(&z8, 2);
        // ker(x2 on Z/8) = <4> = im(x4): trivial; ker(x4) = <2>, im(x2)=<2>: trivial
        assert!(homology(&four, &twice).unwrap().group().is_trivial());
        let zero = Hom::zero(&z8, &z8);
        assert_eq!(homology(&zero, &four).unwrap().group(), &PGroup::cyclic(2, 2));
    }
}
