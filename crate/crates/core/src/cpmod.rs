//! Finite modules over the cyclic group C_p: Tate cohomology, left/right
//! elementary blocks and the open/closed chain modules built from them.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::abelian::local::{LocalRing, LocalSnf, Mat};
use crate::abelian::{homology, GElem, Hom, PGroup, Subquotient};
use crate::error::{invalid, invariant, Error, Result};

/// A finite abelian p-group with an automorphism `zeta` satisfying `zeta^p = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CpModule {
    group: PGroup,
    zeta: Hom,
}

#[derive(Deserialize)]
struct RawModule {
    p: u64,
    exponents: Vec<u32>,
    zeta: Vec<Vec<i64>>,
}

impl<'de> Deserialize<'de> for CpModule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = RawModule::deserialize(d)?;
        let g = PGroup::new(r.p, r.exponents).map_err(serde::de::Error::custom)?;
        let z = Hom::new(g.clone(), g.clone(), r.zeta).map_err(serde::de::Error::custom)?;
        CpModule::new(g, z).map_err(serde::de::Error::custom)
    }
}

impl CpModule {
    pub fn new(group: PGroup, zeta: Hom) -> Result<Self> {
        if zeta.source() != &group || zeta.target() != &group {
            return invalid("zeta must be an endomorphism of the carrier");
        }
        if !zeta.pow(group.p() as u32)?.is_identity() {
            return invalid("zeta^p is not the identity");
        }
        Ok(CpModule { group, zeta })
    }

    pub fn trivial_action(group: PGroup) -> Self {
        let zeta = Hom::identity(&group);
        CpModule { group, zeta }
    }

    pub fn p(&self) -> u64 {
        self.group.p()
    }

    pub fn group(&self) -> &PGroup {
        &self.group
    }

    pub fn zeta(&self) -> &Hom {
        &self.zeta
    }

    /// `1 + zeta + ... + zeta^{p-1}`.
    pub fn norm(&self) -> Hom {
        let mut acc = Hom::identity(&self.group);
        let mut power = Hom::identity(&self.group);
        for _ in 1..self.p() {
            power = self.zeta.compose(&power).expect("endomorphism");
            acc = acc.add(&power).expect("endomorphism");
        }
        acc
    }

    pub fn one_minus_zeta(&self) -> Hom {
        Hom::identity(&self.group)
            .sub(&self.zeta)
            .expect("endomorphism")
    }

    /// Module structure on `sq`, where `zeta` acts on `sq.ambient()` and preserves it.
    pub fn from_subquotient(sq: &Subquotient, zeta: &Hom) -> Result<Self> {
        let z = sq.induced(zeta, sq)?;
        CpModule::new(sq.group().clone(), z)
    }

    pub fn direct_sum(&self, other: &CpModule) -> Result<CpModule> {
        let (g, slots) = stack(&[self.group.clone(), other.group.clone()])?;
        let z = block_diagonal(&g, &slots, &[&self.zeta, &other.zeta]);
        CpModule::new(g, z)
    }

    /// The smallest zeta-stable subgroup containing `gens`.
    pub fn lambda_span(&self, gens: &[GElem]) -> Subquotient {
        let mut all = Vec::new();
        for g in gens {
            let mut x = g.clone();
            for _ in 0..self.p() {
                all.push(x.clone());
                x = self.zeta.apply(&x);
            }
        }
        Subquotient::new(&self.group, &all, &[])
    }
}

/// Concatenates groups into one normal-form group. `slots[b][j]` is the
/// coordinate of the j-th summand of block `b`.
fn stack(groups: &[PGroup]) -> Result<(PGroup, Vec<Vec<usize>>)> {
    let p = groups.first().map_or(2, |g| g.p());
    let mut cur = PGroup::trivial(p);
    let mut slots: Vec<Vec<usize>> = Vec::new();
    for g in groups {
        let (next, pos) = cur.direct_sum(g)?;
        let r = cur.rank();
        for s in slots.iter_mut() {
            for x in s.iter_mut() {
                *x = pos[*x];
            }
        }
        slots.push((0..g.rank()).map(|j| pos[r + j]).collect());
        cur = next;
    }
    Ok((cur, slots))
}

fn block_diagonal(total: &PGroup, slots: &[Vec<usize>], maps: &[&Hom]) -> Hom {
    let n = total.rank();
    let mut m = vec![vec![0i64; n]; n];
    for (s, f) in slots.iter().zip(maps) {
        for (i, &si) in s.iter().enumerate() {
            for (j, &sj) in s.iter().enumerate() {
                m[si][sj] = f.matrix()[i][j];
            }
        }
    }
    Hom::new(total.clone(), total.clone(), m).expect("block-diagonal map is well formed")
}

fn place(total: &PGroup, slot: &[usize], x: &GElem) -> GElem {
    let mut c = vec![0i64; total.rank()];
    for (&s, &v) in slot.iter().zip(&x.0) {
        c[s] = v;
    }
    GElem(c)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TateTable {
    pub h_odd: u32,
    pub h_even: u32,
    pub fixed: PGroup,
    pub coinv: PGroup,
}

fn fp_dimension(sq: &Subquotient) -> Result<u32> {
    if sq.group().max_exponent() > 1 {
        return invariant("Tate group is not killed by p");
    }
    Ok(sq.group().log_order())
}

pub fn tate_cohomology(m: &CpModule) -> Result<TateTable> {
    let n = m.norm();
    let d = m.one_minus_zeta();
    let odd = homology(&d, &n)?;
    let even = homology(&n, &d)?;
    Ok(TateTable {
        h_odd: fp_dimension(&odd)?,
        h_even: fp_dimension(&even)?,
        fixed: d.kernel().0,
        coinv: d.cokernel().0,
    })
}

/// Dimensions of `H^i(C_p, W)` for `1 <= i <= cap`, each computed from its own
/// stage of the periodic resolution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodicityReport {
    pub dims: Vec<(u32, u32)>,
    pub periodic: bool,
}

pub fn fp_t_module_structure(m: &CpModule, cap: u32) -> Result<PeriodicityReport> {
    if cap < 2 {
        return invalid("degree cap must be at least 2");
    }
    let n = m.norm();
    let d = m.one_minus_zeta();
    let mut groups: Vec<PGroup> = Vec::new();
    let mut dims = Vec::new();
    for i in 1..=cap {
        // cochain differential into degree i, then out of it
        let (into, out) = if i % 2 == 1 { (&d, &n) } else { (&n, &d) };
        let h = homology(into, out)?;
        dims.push((i, fp_dimension(&h)?));
        groups.push(h.group().clone());
    }
    let periodic = groups.windows(3).all(|w| w[0] == w[2]);
    Ok(PeriodicityReport { dims, periodic })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockKind {
    L,
    R,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub kind: BlockKind,
    #[serde(rename = "N")]
    pub n: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Glue {
    FiberedSum,
    KernelIdentification,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChainItem {
    Block(Block),
    Glue { glue: Glue },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub p: u64,
    pub chain: Vec<ChainItem>,
    #[serde(default)]
    pub relation: Option<Vec<i64>>,
}

impl BlockSpec {
    pub fn open(p: u64, blocks: &[Block], glues: &[Glue]) -> Self {
        let mut chain = Vec::new();
        for (i, b) in blocks.iter().enumerate() {
            if i > 0 {
                chain.push(ChainItem::Glue { glue: glues[i - 1] });
            }
            chain.push(ChainItem::Block(*b));
        }
        BlockSpec {
            p,
            chain,
            relation: None,
        }
    }

    pub fn closed(p: u64, blocks: &[Block], glues: &[Glue], relation: Vec<i64>) -> Self {
        BlockSpec {
            relation: Some(relation),
            ..Self::open(p, blocks, glues)
        }
    }

    fn split(&self) -> Result<(Vec<Block>, Vec<Glue>)> {
        let mut blocks = Vec::new();
        let mut glues = Vec::new();
        for (i, item) in self.chain.iter().enumerate() {
            match (i % 2, item) {
                (0, ChainItem::Block(b)) => blocks.push(*b),
                (1, ChainItem::Glue { glue }) => glues.push(*glue),
                _ => return invalid("chain must alternate blocks and glue tags"),
            }
        }
        if blocks.is_empty() || glues.len() + 1 != blocks.len() {
            return invalid("chain must start and end with a block");
        }
        Ok((blocks, glues))
    }
}

/// One elementary block with its two F_p handles.
struct BlockData {
    module: CpModule,
    /// Coefficients of the projection onto the top quotient, mod p.
    top: Vec<i64>,
    socle: GElem,
}

fn left_block(p: u64, n: u32) -> Result<BlockData> {
    let g = PGroup::new(p, vec![n])?;
    let socle = GElem(vec![(p as i64).pow(n - 1)]);
    Ok(BlockData {
        module: CpModule::trivial_action(g),
        top: vec![1],
        socle,
    })
}

/// Matrix of multiplication by `pi = 1 - zeta` on the basis `1, pi, ..., pi^{p-2}`
/// of the cyclotomic integers.
fn pi_matrix(p: u64) -> Vec<Vec<i128>> {
    let d = (p - 1) as usize;
    if p == 2 {
        return vec![vec![2]];
    }
    // coefficients of Phi_p(1 - x) = sum_k (1 - x)^k
    let mut g = vec![0i128; d + 1];
    let mut binom = vec![1i128];
    for _k in 0..p {
        for (i, &b) in binom.iter().enumerate() {
            g[i] += if i % 2 == 0 { b } else { -b };
        }
        let mut next = vec![1i128; binom.len() + 1];
        for i in 1..binom.len() {
            next[i] = binom[i - 1] + binom[i];
        }
        binom = next;
    }
    let lead = g[d];
    let mut m = vec![vec![0i128; d]; d];
    for i in 0..d - 1 {
        m[i + 1][i] = 1;
    }
    for (i, row) in m.iter_mut().enumerate() {
        row[d - 1] = -g[i] * lead; // lead = +-1
    }
    m
}

fn mat_mul_int(a: &[Vec<i128>], b: &[Vec<i128>], modulus: i128) -> Vec<Vec<i128>> {
    let n = b[0].len();
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .enumerate()
                        .map(|(k, &x)| x * b[k][j])
                        .sum::<i128>()
                        .rem_euclid(modulus)
                })
                .collect()
        })
        .collect()
}

fn right_block(p: u64, n: u32) -> Result<BlockData> {
    let d = (p - 1) as usize;
    let c = n.div_ceil(d as u32);
    let modulus = (p as i128).pow(c);
    let ambient = PGroup::new(p, vec![c; d])?;
    let pi = pi_matrix(p);
    let ident: Vec<Vec<i128>> = (0..d)
        .map(|i| (0..d).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut pow = ident.clone();
    let mut socle_vec = ident.iter().map(|r| r[0]).collect::<Vec<_>>();
    for k in 0..n {
        if k == n - 1 {
            socle_vec = pow.iter().map(|r| r[0]).collect();
        }
        pow = mat_mul_int(&pi, &pow, modulus);
    }
    let to_elem = |v: &[i128]| ambient.reduce(&v.iter().map(|&x| x as i64).collect::<Vec<_>>());
    let rels: Vec<GElem> = (0..d)
        .map(|j| to_elem(&pow.iter().map(|r| r[j]).collect::<Vec<_>>()))
        .collect();
    let gens: Vec<GElem> = (0..d).map(|i| ambient.basis(i)).collect();
    let sq = Subquotient::new(&ambient, &gens, &rels);
    if sq.group().log_order() != n {
        return invariant(format!("O/pi^{n} has the wrong order"));
    }
    let zeta_rows: Vec<Vec<i64>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| (ident[i][j] - pi[i][j]).rem_euclid(modulus) as i64)
                .collect()
        })
        .collect();
    let zeta_amb = Hom::new(ambient.clone(), ambient.clone(), zeta_rows)?;
    let module = CpModule::from_subquotient(&sq, &zeta_amb)?;
    let pp = p as i64;
    let top = (0..sq.group().rank())
        .map(|i| sq.lift(&sq.group().basis(i)).0[0].rem_euclid(pp))
        .collect();
    let socle = sq
        .coords(&to_elem(&socle_vec))
        .ok_or_else(|| Error::Invariant("socle outside the block".into()))?;
    Ok(BlockData { module, top, socle })
}

fn realize(p: u64, b: Block) -> Result<BlockData> {
    if b.n == 0 {
        return invalid("block length must be positive");
    }
    match b.kind {
        BlockKind::L => left_block(p, b.n),
        BlockKind::R => right_block(p, b.n),
    }
}

/// Coefficients of `f` over F_p with trailing zeros removed.
fn trim_poly(f: &[i64], p: i64) -> Vec<i64> {
    let mut v: Vec<i64> = f.iter().map(|a| a.rem_euclid(p)).collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn inv_mod(a: i64, p: i64) -> i64 {
    let r = LocalRing::new(p as u64, 1);
    r.inv(a as i128) as i64
}

fn poly_divmod(f: &[i64], g: &[i64], p: i64) -> (Vec<i64>, Vec<i64>) {
    let mut r = trim_poly(f, p);
    let g = trim_poly(g, p);
    let inv = inv_mod(*g.last().expect("nonzero divisor"), p);
    if r.len() < g.len() {
        return (vec![], r);
    }
    let mut q = vec![0i64; r.len() - g.len() + 1];
    while r.len() >= g.len() {
        let shift = r.len() - g.len();
        let c = (r.last().unwrap() * inv).rem_euclid(p);
        q[shift] = c;
        for (i, &gi) in g.iter().enumerate() {
            r[shift + i] = (r[shift + i] - c * gi).rem_euclid(p);
        }
        r = trim_poly(&r, p);
    }
    (q, r)
}

/// Whether `f` is a power of an irreducible polynomial other than `t`.
pub fn is_power_of_irreducible(f: &[i64], p: u64) -> bool {
    let pp = p as i64;
    let f = trim_poly(f, pp);
    if f.len() < 2 || f[0] == 0 {
        return false;
    }
    let deg = f.len() - 1;
    // smallest-degree monic divisor is irreducible
    let mut factor: Option<Vec<i64>> = None;
    'outer: for d in 1..=deg {
        let count = pp.pow(d as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut x = idx;
            for _ in 0..d {
                g.push(x % pp);
                x /= pp;
            }
            g.push(1);
            if poly_divmod(&f, &g, pp).1.is_empty() {
                factor = Some(g);
                break 'outer;
            }
        }
    }
    let g = factor.expect("f divides itself");
    let mut rest = f;
    while rest.len() > 1 {
        let (q, r) = poly_divmod(&rest, &g, pp);
        if !r.is_empty() {
            return false;
        }
        rest = q;
    }
    true
}

/// Builds the module described by a block chain and checks its Tate table:
/// open chains must give `(1, 1)`, closed ones `(0, 0)`.
pub fn build_block_module(spec: &BlockSpec) -> Result<CpModule> {
    let p = spec.p;
    if !crate::abelian::is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    let (blocks, glues) = spec.split()?;
    for w in blocks.windows(2) {
        if w[0].kind == w[1].kind {
            return invalid("ill-typed gluing: neighbouring blocks must be of opposite kinds");
        }
    }
    for w in glues.windows(2) {
        if w[0] == w[1] {
            return invalid("ill-typed gluing: a block cannot use the same handle twice");
        }
    }
    for (i, b) in blocks.iter().enumerate() {
        if i > 0 && i + 1 < blocks.len() && b.n < 2 {
            return invalid("ill-typed gluing: an inner block of length 1 has no separate top and socle");
        }
    }
    let copies = match &spec.relation {
        None => 1,
        Some(f) => {
            if blocks.len() < 2
                || glues.first() != Some(&Glue::FiberedSum)
                || glues.last() != Some(&Glue::FiberedSum)
            {
                return invalid(
                    "a closing relation needs free socles at both ends (first and last links fibered)",
                );
            }
            if !is_power_of_irreducible(f, p) {
                return invalid("closing polynomial must be a power of an irreducible other than t");
            }
            trim_poly(f, p as i64).len() - 1
        }
    };
    let data = blocks
        .iter()
        .map(|&b| realize(p, b))
        .collect::<Result<Vec<_>>>()?;
    let nb = data.len();
    let mut groups = Vec::new();
    for _ in 0..copies {
        groups.extend(data.iter().map(|d| d.module.group().clone()));
    }
    let (total, slots) = stack(&groups)?;
    let zetas: Vec<&Hom> = (0..copies)
        .flat_map(|_| data.iter().map(|d| d.module.zeta()))
        .collect();
    let zeta = block_diagonal(&total, &slots, &zetas);

    // fibered links: equalise tops of neighbours
    let pp = p as i64;
    let mut constraints: Vec<Vec<i64>> = Vec::new();
    let mut rels: Vec<GElem> = Vec::new();
    for c in 0..copies {
        for (i, g) in glues.iter().enumerate() {
            let (a, b) = (c * nb + i, c * nb + i + 1);
            match g {
                Glue::FiberedSum => {
                    let mut row = vec![0i64; total.rank()];
                    for (&s, &t) in slots[a].iter().zip(&data[i].top) {
                        row[s] = (row[s] + t).rem_euclid(pp);
                    }
                    for (&s, &t) in slots[b].iter().zip(&data[i + 1].top) {
                        row[s] = (row[s] - t).rem_euclid(pp);
                    }
                    constraints.push(row);
                }
                Glue::KernelIdentification => {
                    let x = place(&total, &slots[a], &data[i].socle);
                    let y = place(&total, &slots[b], &data[i + 1].socle);
                    rels.push(total.sub(&x, &y));
                }
            }
        }
    }
    if let Some(f) = &spec.relation {
        // x_first^(i) = sum_j C[i][j] x_last^(j), C the companion matrix of f
        let f = trim_poly(f, pp);
        let d = copies;
        let lead_inv = inv_mod(f[d], pp);
        let mut comp = vec![vec![0i64; d]; d];
        for i in 1..d {
            comp[i][i - 1] = 1;
        }
        for (i, row) in comp.iter_mut().enumerate() {
            row[d - 1] = (-f[i] * lead_inv).rem_euclid(pp);
        }
        for (i, row) in comp.iter().enumerate() {
            let mut r = place(&total, &slots[i * nb], &data[0].socle);
            for (j, &cij) in row.iter().enumerate() {
                let y = place(&total, &slots[j * nb + nb - 1], &data[nb - 1].socle);
                r = total.sub(&r, &total.scale(cij, &y));
            }
            rels.push(r);
        }
    }
    let elementary = PGroup::elementary(p, constraints.len());
    let phi = Hom::new(total.clone(), elementary, constraints)?;
    let gens = phi.kernel_generators();
    let u = Subquotient::new(&total, &gens, &[]);
    for r in &rels {
        if u.coords(r).is_none() {
            return invalid("ill-typed gluing: an identified socle is cut out by a fibered link");
        }
    }
    let sq = Subquotient::new(&total, &gens, &rels);
    let module = CpModule::from_subquotient(&sq, &zeta)?;
    let t = tate_cohomology(&module)?;
    let expect = if spec.relation.is_some() { 0 } else { 1 };
    if t.h_odd != expect || t.h_even != expect {
        return invariant(format!(
            "constructed module has Tate table ({}, {}), expected ({expect}, {expect})",
            t.h_odd, t.h_even
        ));
    }
    Ok(module)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum CohomologicalClass {
    CohomologicallyTrivial,
    /// `count` open summands and no cohomologically trivial summand found.
    OpenLike { count: u32, confirmed: bool },
    /// Open summands together with summands killing Tate cohomology.
    MixedReport { h: u32, trivial_summands: usize },
}

/// Largest carrier (as log_p of the order, times log2 p) searched for summands.
const SEARCH_LIMIT_BITS: f64 = 10.0;

pub fn classify_cohomological(m: &CpModule) -> Result<CohomologicalClass> {
    let t = tate_cohomology(m)?;
    if t.h_odd != t.h_even {
        return invariant("Herbrand quotient differs from 1 on a finite module");
    }
    if t.h_odd == 0 {
        return Ok(CohomologicalClass::CohomologicallyTrivial);
    }
    let bits = m.group().log_order() as f64 * (m.p() as f64).log2();
    if bits > SEARCH_LIMIT_BITS {
        return Ok(CohomologicalClass::OpenLike {
            count: t.h_odd,
            confirmed: false,
        });
    }
    let parts = decompose(m)?;
    let mut trivial = 0;
    for part in &parts {
        if tate_cohomology(part)?.h_odd == 0 {
            trivial += 1;
        }
    }
    Ok(if trivial == 0 {
        CohomologicalClass::OpenLike {
            count: t.h_odd,
            confirmed: true,
        }
    } else {
        CohomologicalClass::MixedReport {
            h: t.h_odd,
            trivial_summands: trivial,
        }
    })
}

/// Splits off cyclic Lambda-submodules that are direct summands until none is
/// left. Cyclic modules over Z_p[C_p] are indecomposable, so each piece except
/// possibly the last is indecomposable.
pub fn decompose(m: &CpModule) -> Result<Vec<CpModule>> {
    let mut out = Vec::new();
    let mut rest = m.clone();
    'outer: while !rest.group().is_trivial() {
        let g = rest.group().clone();
        let divisible: std::collections::HashSet<GElem> =
            g.elements().map(|x| g.scale(g.p() as i64, &x)).collect();
        let mut seen = std::collections::HashSet::new();
        for x in g.elements() {
            if g.is_zero(&x) {
                continue;
            }
            let span = rest.lambda_span(&[x]);
            if span.group() == &g {
                continue;
            }
            let emb = span.embedding();
            let elems: Vec<GElem> = span.group().elements().map(|a| emb.apply(&a)).collect();
            let mut key = elems.clone();
            key.sort();
            if !seen.insert(key) {
                continue;
            }
            // a summand must be pure: A ∩ pW = pA
            let a_div: std::collections::HashSet<GElem> = elems
                .iter()
                .map(|a| g.scale(g.p() as i64, a))
                .collect();
            if elems
                .iter()
                .any(|a| divisible.contains(a) && !a_div.contains(a))
            {
                continue;
            }
            let sub = CpModule::from_subquotient(&span, rest.zeta())?;
            if let Some(r) = retraction(&rest, &sub, &emb)? {
                let (kg, kemb) = r.kernel();
                let ksq = Subquotient::new(
                    &g,
                    &(0..kg.rank()).map(|j| kemb.column(j)).collect::<Vec<_>>(),
                    &[],
                );
                let comp = CpModule::from_subquotient(&ksq, rest.zeta())?;
                out.push(sub);
                rest = comp;
                continue 'outer;
            }
        }
        out.push(rest.clone());
        break;
    }
    Ok(out)
}

/// A zeta-equivariant `r: W -> A` with `r ∘ emb = id`, if one exists.
fn retraction(w: &CpModule, a: &CpModule, emb: &Hom) -> Result<Option<Hom>> {
    let wg = w.group();
    let ag = a.group();
    let (s, t) = (wg.rank(), ag.rank());
    let p = wg.p() as i128;
    let ring = LocalRing::new(wg.p(), wg.max_exponent().max(ag.max_exponent()) + 1);
    let shift = |i: usize, j: usize| ag.exponents()[i].saturating_sub(wg.exponents()[j]);
    let var = |i: usize, j: usize| i * s + j;
    let nv = t * s;
    // equations: rows of (coefficient vector over vars, modulus exponent, rhs)
    let mut eqs: Vec<(Vec<i128>, u32, i128)> = Vec::new();
    let zw = w.zeta().matrix();
    let za = a.zeta().matrix();
    for i in 0..t {
        for j in 0..s {
            // (R zw - za R)_{ij}
            let mut row = vec![0i128; nv];
            for k in 0..s {
                row[var(i, k)] += p.pow(shift(i, k)) * zw[k][j] as i128;
            }
            for l in 0..t {
                row[var(l, j)] -= za[i][l] as i128 * p.pow(shift(l, j));
            }
            eqs.push((row, ag.exponents()[i], 0));
        }
        let e = emb.matrix();
        for l in 0..t {
            let mut row = vec![0i128; nv];
            for k in 0..s {
                row[var(i, k)] += p.pow(shift(i, k)) * e[k][l] as i128;
            }
            eqs.push((row, ag.exponents()[i], i128::from(i == l)));
        }
    }
    let ne = eqs.len();
    let a_mat: Mat = eqs
        .iter()
        .enumerate()
        .map(|(r, (row, e, _))| {
            let mut full: Vec<i128> = row.iter().map(|&x| ring.reduce(x)).collect();
            full.extend((0..ne).map(|c| if c == r { ring.pow_p(*e) } else { 0 }));
            full
        })
        .collect();
    let rhs: Vec<i128> = eqs.iter().map(|e| e.2).collect();
    let snf = LocalSnf::compute(ring, &a_mat, ne, nv + ne);
    let Some(sol) = snf.solve(&rhs) else {
        return Ok(None);
    };
    let m: Vec<Vec<i64>> = (0..t)
        .map(|i| {
            (0..s)
                .map(|j| ring.mul(sol[var(i, j)], p.pow(shift(i, j))) as i64)
                .collect()
        })
        .collect();
    let r = Hom::new(wg.clone(), ag.clone(), m)?;
    if !r.compose(emb)?.is_identity() || r.compose(w.zeta())? != a.zeta().compose(&r)? {
        return invariant("retraction solve produced a non-retraction");
    }
    Ok(Some(r))
}

/// A random finite module: a subquotient of a free `(Z/p^c)[C_p]`-module of
/// rank `r`, rejected until its order is at most `p^max_log`.
pub fn random_module<R: Rng>(rng: &mut R, p: u64, max_log: u32) -> CpModule {
    loop {
        let c = rng.gen_range(1..=3u32);
        let r = rng.gen_range(1..=2usize);
        let pu = p as usize;
        let ambient = PGroup::new(p, vec![c; pu * r]).expect("valid");
        let mut zm = vec![vec![0i64; pu * r]; pu * r];
        for b in 0..r {
            for i in 0..pu {
                zm[b * pu + (i + 1) % pu][b * pu + i] = 1;
            }
        }
        let zeta = Hom::new(ambient.clone(), ambient.clone(), zm).expect("permutation");
        let free = CpModule::trivial_action(ambient.clone());
        let free = CpModule { zeta, ..free };
        let modulus = (p as i64).pow(c);
        let rand_elem = |rng: &mut R| {
            GElem((0..ambient.rank()).map(|_| rng.gen_range(0..modulus)).collect())
        };
        let ugens: Vec<GElem> = (0..rng.gen_range(1..=2)).map(|_| rand_elem(rng)).collect();
        let u = free.lambda_span(&ugens);
        let uemb = u.embedding();
        let mut dgens = Vec::new();
        for _ in 0..rng.gen_range(0..=2) {
            let coeffs: Vec<i64> = (0..u.group().rank())
                .map(|_| rng.gen_range(0..modulus))
                .collect();
            dgens.push(uemb.apply(&u.group().reduce(&coeffs)));
        }
        let d = free.lambda_span(&dgens);
        let demb = d.embedding();
        let rels: Vec<GElem> = (0..d.group().rank()).map(|j| demb.column(j)).collect();
        let ugen_list: Vec<GElem> = (0..u.group().rank()).map(|j| uemb.column(j)).collect();
        let sq = Subquotient::new(&ambient, &ugen_list, &rels);
        if sq.group().log_order() <= max_log {
            return CpModule::from_subquotient(&sq, free.zeta()).expect("stable subquotient");
        }
    }
}
