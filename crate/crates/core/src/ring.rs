//! Mod-2 cohomology rings of small 3-manifold-like data and the covering case
//! analysis for first homology Z/2 + Z/4.
//!
//! Classes in H^1(M; F_2) are identified with elements of order dividing 2 in
//! the first homology via the linking form. The cup products of a closed
//! 3-manifold are then a symmetric trilinear form `mu(a, b, c) = <abc, [M]>`,
//! and the standing identity `mu(a, a, b) = (a, b)` ties it to the form.
//! A degree-2 class is recorded as the functional `c -> mu(a, b, c)`, which is
//! faithful by Poincare duality.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::abelian::{GElem, Hom, PGroup, Qz};
use crate::cohom::bar::{Bar, Cochain};
use crate::cohom::group::GroupTable;
use crate::covering::{build_shrinking, obstruct_split_anisotropic};
use crate::cpmod::{tate_cohomology, CpModule};
use crate::error::{invalid, invariant, Result};
use crate::linkform::{orthogonal_complement, FormedCpAction, LinkForm};

// ---------------------------------------------------------------------------
// Trilinear tables on F_2^3

/// Vectors of F_2^3 as bit masks; bit `i` is the coefficient of the i-th basis class.
type V3 = u8;

const LETTERS: [char; 3] = ['x', 'y', 'z'];

/// The ten sorted index triples, in the order of `TrilinearTable::mu`.
fn monomials() -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(10);
    for i in 0..3 {
        for j in i..3 {
            for k in j..3 {
                out.push([i, j, k]);
            }
        }
    }
    out
}

fn monomial_index(i: usize, j: usize, k: usize) -> usize {
    let mut t = [i, j, k];
    t.sort_unstable();
    monomials().iter().position(|m| *m == t).expect("sorted triple")
}

fn monomial_name(m: &[usize]) -> String {
    m.iter().map(|&i| LETTERS[i]).collect()
}

/// A symmetric trilinear form on F_2^3, stored by its values on basis monomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TrilinearTable {
    pub mu: [u8; 10],
}

impl TrilinearTable {
    pub fn from_bits(bits: u16) -> Self {
        let mut mu = [0u8; 10];
        for (i, m) in mu.iter_mut().enumerate() {
            *m = ((bits >> i) & 1) as u8;
        }
        TrilinearTable { mu }
    }

    pub fn basis_value(&self, i: usize, j: usize, k: usize) -> u8 {
        self.mu[monomial_index(i, j, k)]
    }

    pub fn value(&self, a: V3, b: V3, c: V3) -> u8 {
        let mut acc = 0;
        for i in (0..3).filter(|i| a >> i & 1 == 1) {
            for j in (0..3).filter(|j| b >> j & 1 == 1) {
                for k in (0..3).filter(|k| c >> k & 1 == 1) {
                    acc ^= self.basis_value(i, j, k);
                }
            }
        }
        acc
    }

    /// The product `ab` as the functional `c -> mu(a, b, c)`, packed as bits.
    pub fn product(&self, a: V3, b: V3) -> V3 {
        (0..3).fold(0, |acc, k| acc | self.value(a, b, 1 << k) << k)
    }

    /// `mu(A a, A b, A c)` where column `j` of `A` is `cols[j]`.
    pub fn transform(&self, cols: &[V3; 3]) -> Self {
        let mut mu = [0u8; 10];
        for (slot, m) in monomials().iter().enumerate() {
            mu[slot] = self.value(cols[m[0]], cols[m[1]], cols[m[2]]);
        }
        TrilinearTable { mu }
    }

    /// Dimension of the kernel of `a -> wa` on H^1.
    pub fn kernel_of_product(&self, w: V3) -> Vec<V3> {
        (1..8u8).filter(|&a| self.product(w, a) == 0).collect()
    }

    pub fn has_zero_products(&self) -> bool {
        [(0, 1), (0, 2), (1, 2)]
            .iter()
            .all(|&(i, j)| self.product(1 << i, 1 << j) == 0)
    }

    /// `x^2 = yz`, `y^2 = xz`, `z^2 = xy` in this basis.
    pub fn has_cyclic_squares(&self) -> bool {
        (0..3).all(|i| {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            self.product(1 << i, 1 << i) == self.product(1 << j, 1 << k)
        })
    }

    fn products_map(&self) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        for i in 0..3 {
            for j in i..3 {
                let f = self.product(1 << i, 1 << j);
                out.insert(monomial_name(&[i, j]), functional_name(f));
            }
        }
        out
    }
}

/// A degree-2 class named by its Poincare dual degree-1 class.
fn functional_name(f: V3) -> String {
    if f == 0 {
        return "0".into();
    }
    let parts: Vec<String> = (0..3)
        .filter(|k| f >> k & 1 == 1)
        .map(|k| format!("{}*", LETTERS[k]))
        .collect();
    parts.join(" + ")
}

impl Serialize for TrilinearTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View {
            mu: BTreeMap<String, u8>,
            products: BTreeMap<String, String>,
        }
        let mu = monomials()
            .iter()
            .zip(self.mu)
            .map(|(m, v)| (monomial_name(m), v))
            .collect();
        View {
            mu,
            products: self.products_map(),
        }
        .serialize(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Alternative {
    /// `xy = xz = yz = 0`.
    ZeroProducts,
    /// `x^2 = yz, y^2 = xz, z^2 = xy`.
    CyclicSquares,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrilinearClass {
    pub representative: TrilinearTable,
    pub orbit_size: usize,
    pub alternative: Option<Alternative>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrilinearClassification {
    pub raw_count: usize,
    /// Tables removed by each predicate, in the order the predicates run.
    pub eliminated: Vec<(String, usize)>,
    pub survivors: Vec<TrilinearTable>,
    pub stabilizer_order: usize,
    pub classes: Vec<TrilinearClass>,
}

/// The F_2-valued bilinear form `2 (a, b)` on the 2-torsion of a rank-3 form.
fn f2_form(link: &LinkForm) -> Result<[[u8; 3]; 3]> {
    let g = link.group();
    if g.p() != 2 || g.exponents() != [1, 1, 1] {
        return invalid("the form must live on (Z/2)^3");
    }
    let mut b = [[0u8; 3]; 3];
    for (i, row) in b.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            *e = u8::from(!link.pair(&g.basis(i), &g.basis(j)).is_zero());
        }
    }
    if b != [[1, 0, 0], [0, 1, 0], [0, 0, 1]] {
        return invalid("classification needs an orthonormal basis: the form must be <1/2>+<1/2>+<1/2>");
    }
    Ok(b)
}

fn bilinear(b: &[[u8; 3]; 3], x: V3, y: V3) -> u8 {
    let mut acc = 0;
    for (i, row) in b.iter().enumerate() {
        for (j, &e) in row.iter().enumerate() {
            acc ^= (x >> i) & (y >> j) & 1 & e;
        }
    }
    acc
}

type Predicate = (&'static str, Box<dyn Fn(&TrilinearTable) -> bool>);

/// The constraints a cup-product table must meet, in elimination order.
///
/// The last two encode the module analysis of the double cover defined by an
/// isotropic class `w`: its first homology must be one open summand plus a
/// regular `Z/2[C_2]`, so `b_1` of the cover is 3 and, by the transfer exact
/// sequence, multiplication by `w` has a one-dimensional kernel. Solving
/// `w (a x_i + b x_j + c x_k) = 0` with the standing identity leaves
/// `c = 1, a = b = xyz`.
fn trilinear_predicates(b: [[u8; 3]; 3]) -> Vec<Predicate> {
    let isotropic: Vec<V3> = (1..8u8).filter(|&w| bilinear(&b, w, w) == 0).collect();
    let iso2 = isotropic.clone();
    vec![
        (
            "compatibility",
            Box::new(move |t: &TrilinearTable| {
                (0..8u8).all(|a| (0..8u8).all(|c| t.value(a, a, c) == bilinear(&b, a, c)))
            }),
        ),
        (
            "poincare_duality",
            Box::new(|t: &TrilinearTable| (1..8u8).all(|a| (1..8u8).any(|c| t.product(a, c) != 0))),
        ),
        (
            "isotropic_kernel_rank_one",
            Box::new(move |t: &TrilinearTable| isotropic.iter().all(|&w| t.kernel_of_product(w).len() == 1)),
        ),
        (
            "kernel_element_shape",
            Box::new(move |t: &TrilinearTable| {
                let xyz = t.basis_value(0, 1, 2);
                iso2.iter().all(|&w| {
                    let off = 7 ^ w;
                    // only w = x_i + x_j has a single complementary basis vector
                    if off.count_ones() != 1 {
                        return true;
                    }
                    let expected = if xyz == 1 { w | off } else { off };
                    t.kernel_of_product(w) == vec![expected]
                })
            }),
        ),
    ]
}

/// Invertible 3x3 matrices over F_2 preserving the bilinear form `b`.
fn form_stabilizer(b: &[[u8; 3]; 3]) -> Vec<[V3; 3]> {
    let mut out = Vec::new();
    for c0 in 1..8u8 {
        for c1 in 1..8u8 {
            for c2 in 1..8u8 {
                let cols = [c0, c1, c2];
                if (c0 ^ c1) == 0 || (c0 ^ c2) == 0 || (c1 ^ c2) == 0 || c0 ^ c1 ^ c2 == 0 {
                    continue;
                }
                let preserves = (0..3).all(|i| {
                    (0..3).all(|j| bilinear(b, cols[i], cols[j]) == b[i][j])
                });
                if preserves {
                    out.push(cols);
                }
            }
        }
    }
    out
}

/// Every cup-product table on H^1 = F_2^3 compatible with an orthonormal
/// linking form, sorted into orbits under form-preserving basis change.
pub fn classify_trilinear(link: &LinkForm) -> Result<TrilinearClassification> {
    let b = f2_form(link)?;
    let preds = trilinear_predicates(b);
    let mut eliminated: Vec<(String, usize)> = preds.iter().map(|(n, _)| (n.to_string(), 0)).collect();
    let mut survivors = Vec::new();
    for bits in 0..1u16 << 10 {
        let t = TrilinearTable::from_bits(bits);
        match preds.iter().position(|(_, p)| !p(&t)) {
            Some(i) => eliminated[i].1 += 1,
            None => survivors.push(t),
        }
    }
    let stab = form_stabilizer(&b);
    let mut remaining: BTreeSet<TrilinearTable> = survivors.iter().copied().collect();
    let mut classes = Vec::new();
    while let Some(&rep) = remaining.iter().next() {
        let orbit: BTreeSet<TrilinearTable> = stab.iter().map(|a| rep.transform(a)).collect();
        for t in &orbit {
            if !remaining.remove(t) {
                return invariant("surviving tables are not closed under basis change");
            }
        }
        let alternative = if orbit.iter().any(|t| t.has_zero_products()) {
            Some(Alternative::ZeroProducts)
        } else if orbit.iter().any(|t| t.has_cyclic_squares()) {
            Some(Alternative::CyclicSquares)
        } else {
            None
        };
        classes.push(TrilinearClass {
            representative: rep,
            orbit_size: orbit.len(),
            alternative,
        });
    }
    Ok(TrilinearClassification {
        raw_count: 1 << 10,
        eliminated,
        survivors,
        stabilizer_order: stab.len(),
        classes,
    })
}

// ---------------------------------------------------------------------------
// Rings computed from the bar resolution

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RingFact {
    pub statement: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RingPresentation {
    pub family: String,
    pub generators: Vec<String>,
    pub relations: Vec<String>,
    pub facts: Vec<RingFact>,
    pub verified: bool,
}

impl RingPresentation {
    fn new(family: &str, generators: &[&str], relations: Vec<String>, facts: Vec<RingFact>) -> Self {
        let verified = facts.iter().all(|f| f.holds);
        RingPresentation {
            family: family.into(),
            generators: generators.iter().map(|s| s.to_string()).collect(),
            relations,
            facts,
            verified,
        }
    }
}

fn fact(statement: impl Into<String>, holds: bool) -> RingFact {
    RingFact {
        statement: statement.into(),
        holds,
    }
}

fn add_cochains(a: &Cochain, b: &Cochain) -> Cochain {
    Cochain {
        n: a.n,
        dim: a.dim,
        data: a.data.iter().zip(&b.data).map(|(x, y)| x ^ y).collect(),
    }
}

/// Degree 1 and 2 of `H^*(G; F_2)` with cup products on degree-1 classes.
struct LowDegrees {
    bar: Bar,
    h1: Vec<Cochain>,
    h2: crate::cohom::bar::BarDegree,
}

impl LowDegrees {
    fn new(g: &GroupTable) -> Result<Self> {
        let bar = Bar::trivial(g, 2);
        let h1 = bar.degree(1)?.reps;
        let h2 = bar.degree(2)?;
        Ok(LowDegrees { bar, h1, h2 })
    }

    /// Every nonzero degree-1 class, with its coordinates in `h1`.
    fn classes(&self) -> Vec<(Vec<u8>, Cochain)> {
        let d = self.h1.len();
        (1u32..1 << d)
            .map(|mask| {
                let coords: Vec<u8> = (0..d).map(|i| (mask >> i & 1) as u8).collect();
                let mut c = Cochain {
                    n: 1,
                    dim: 1,
                    data: vec![0; self.h1[0].data.len()],
                };
                for (i, r) in self.h1.iter().enumerate() {
                    if coords[i] == 1 {
                        c = add_cochains(&c, r);
                    }
                }
                (coords, c)
            })
            .collect()
    }

    fn class(&self, c: &Cochain) -> Result<Vec<u8>> {
        self.h2.class_of(c)
    }

    fn cup_class(&self, a: &Cochain, b: &Cochain) -> Result<Vec<u8>> {
        self.class(&self.bar.cup(a, b))
    }

    /// Ordered pairs of distinct nonzero classes, which are exactly the bases when `b_1 = 2`.
    fn bases(&self) -> Vec<(Cochain, Cochain)> {
        let cls = self.classes();
        let mut out = Vec::new();
        for (i, (_, a)) in cls.iter().enumerate() {
            for (j, (_, b)) in cls.iter().enumerate() {
                if i != j {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        out
    }

    /// Rank of the span of `x^2, xy, y^2` in H^2.
    fn product_rank(&self) -> Result<usize> {
        let (x, y) = (&self.h1[0], &self.h1[1]);
        let vs = [
            self.cup_class(x, x)?,
            self.cup_class(x, y)?,
            self.cup_class(y, y)?,
        ];
        let mut rank = 0;
        let mut basis: Vec<Vec<u8>> = Vec::new();
        for v in vs {
            let mut v = v;
            for b in &basis {
                let pivot = b.iter().position(|&e| e == 1).expect("nonzero");
                if v[pivot] == 1 {
                    v = v.iter().zip(b).map(|(a, c)| a ^ c).collect();
                }
            }
            if v.iter().any(|&e| e == 1) {
                basis.push(v);
                rank += 1;
            }
        }
        Ok(rank)
    }
}

/// The 2-cocycle on `V = C_2 x C_2` of a central extension `C_2 -> P -> V`.
///
/// `P` is a two-generator group in the `r^a s^b` labelling with `r` of order
/// 4; `V` is `cyclic_product([2, 2])`, whose element `(i, j)` has label `2i + j`.
fn extension_cocycle(p: &GroupTable, v: &Bar) -> Result<Cochain> {
    let m = p.order() / 2;
    let center = m / 2;
    let section = |w: usize| (w / 2) + m * (w % 2);
    let mut data = vec![0u8; v.tuples(2)];
    for a in 1..4 {
        for b in 1..4 {
            let ab = v.g.mul(a, b);
            let defect = p.mul(p.mul(section(a), section(b)), p.inv(section(ab)));
            if defect != 0 && defect != center {
                return invariant("section defect is not central of order 2");
            }
            let idx = v.encode(&[a, b]).expect("non-identity");
            data[idx] = u8::from(defect == center);
        }
    }
    Ok(Cochain { n: 2, dim: 1, data })
}

/// Cohomology facts for the quaternion and dihedral groups of order 8 and 16,
/// each checked on bar cochains.
pub fn quaternion_ring_facts() -> Result<Vec<RingPresentation>> {
    let v = GroupTable::cyclic_product(&[2, 2])?;
    let lv = LowDegrees::new(&v)?;
    let mut out = Vec::new();

    let q8 = GroupTable::quaternion(8)?;
    let l = LowDegrees::new(&q8)?;
    let mut facts = vec![fact("b_1 = 2", l.h1.len() == 2)];
    let cls = l.classes();
    for i in 0..cls.len() {
        for j in i + 1..cls.len() {
            let (x, y) = (&cls[i].1, &cls[j].1);
            let s = add_cochains(&add_cochains(&l.bar.cup(x, x), &l.bar.cup(y, y)), &l.bar.cup(x, y));
            let zero = l.class(&s)?.iter().all(|&e| e == 0);
            facts.push(fact(
                format!("x^2 + xy + y^2 = 0 for x = {:?}, y = {:?}", cls[i].0, cls[j].0),
                zero,
            ));
        }
    }
    let e = lv.class(&extension_cocycle(&q8, &lv.bar)?)?;
    let (x, y) = (&lv.h1[0], &lv.h1[1]);
    let q = add_cochains(&add_cochains(&lv.bar.cup(x, x), &lv.bar.cup(y, y)), &lv.bar.cup(x, y));
    facts.push(fact(
        "extension class over C_2 x C_2 is x^2 + xy + y^2",
        lv.class(&q)? == e,
    ));
    out.push(RingPresentation::new("Q8", &["x", "y"], vec!["x^2 + xy + y^2 = 0".into()], facts));

    let q16 = GroupTable::quaternion(16)?;
    let l = LowDegrees::new(&q16)?;
    let mut split = None;
    for (x, y) in l.bases() {
        if l.cup_class(&x, &y)?.iter().all(|&e| e == 0) {
            split = Some((x, y));
            break;
        }
    }
    let facts = vec![
        fact("b_1 = 2", l.h1.len() == 2),
        fact("some basis of H^1 has xy = 0", split.is_some()),
    ];
    out.push(RingPresentation::new("Q16", &["x", "y"], vec!["xy = 0".into()], facts));

    let d8 = GroupTable::dihedral(8)?;
    let l = LowDegrees::new(&d8)?;
    let mut facts = vec![
        fact("b_1 = 2", l.h1.len() == 2),
        fact("b_2 = 3", l.h2.betti() == 3),
        fact("x^2, xy, y^2 satisfy exactly one relation", l.product_rank()? == 2),
    ];
    let mut split = false;
    for (x, y) in l.bases() {
        split |= l.cup_class(&x, &y)?.iter().all(|&e| e == 0);
    }
    facts.push(fact("some basis of H^1 has xy = 0", split));
    let e = lv.class(&extension_cocycle(&d8, &lv.bar)?)?;
    let mut is_product = false;
    for (x, y) in lv.bases() {
        is_product |= lv.cup_class(&x, &y)? == e;
    }
    facts.push(fact("extension class over C_2 x C_2 is xy in some basis", is_product));
    out.push(RingPresentation::new("D8", &["x", "y"], vec!["xy = 0".into()], facts));
    Ok(out)
}

// ---------------------------------------------------------------------------
// The ring for first homology Z/4 + Z/2

fn half(q: Qz) -> u8 {
    u8::from(!q.is_zero())
}

/// Cup-product ring of a closed 3-manifold whose 2-primary first homology is
/// `Z/4 + Z/2` with the given linking form.
///
/// `U` is dual to `2u` and `V` to `v`, where `u` and `v` generate the two
/// summands. The relations follow from three rules: a class squares to zero
/// iff its dual element is divisible by 2 (the Bockstein), `mu(a, a, b) =
/// (a, b)`, and a degree-2 class vanishing against all of H^1 is zero.
pub fn ring_z2z4(link: &LinkForm) -> Result<RingPresentation> {
    let g = link.group();
    if g.p() != 2 || g.exponents() != [2, 1] {
        return invalid("ring relations are derived only for first homology Z/4 + Z/2");
    }
    let u2 = g.scale(2, &g.basis(0));
    let v = g.basis(1);
    let elems = [u2.clone(), v.clone()];
    // mu(a, a, b) = (a, b) determines every value on a 2-dimensional space
    let form = |i: usize, j: usize| half(link.pair(&elems[i], &elems[j]));
    let mu = |i: usize, j: usize, k: usize| -> u8 {
        let mut t = [i, j, k];
        t.sort_unstable();
        if t[0] == t[1] {
            form(t[0], t[2])
        } else {
            form(t[1], t[0])
        }
    };
    let product = |i: usize, j: usize| [mu(i, j, 0), mu(i, j, 1)];
    let divisible = |x: &GElem| (0..g.modulus(0)).any(|a| {
        (0..g.modulus(1)).any(|b| g.scale(2, &GElem(vec![a, b])) == *x)
    });
    let u_sq_zero = divisible(&u2);
    let v_sq_zero = divisible(&v);
    let facts = vec![
        fact("U^2 = 0 by the Bockstein rule", u_sq_zero),
        fact("U^2 pairs to zero with H^1", product(0, 0) == [0, 0]),
        fact("V^2 is nonzero by the Bockstein rule", !v_sq_zero),
        fact("V^2 pairs nontrivially with H^1", product(1, 1) != [0, 0]),
        fact("UV pairs to zero with H^1", product(0, 1) == [0, 0]),
        fact("V^3 = 1", mu(1, 1, 1) == 1),
        fact("U^3 = 0", mu(0, 0, 0) == 0),
        fact("V^2 U = 0", mu(1, 1, 0) == 0),
    ];
    if product(1, 1) == [0, 0] {
        return invalid("(v, v) = 0 forces V^2 = 0, contradicting the Bockstein of V");
    }
    Ok(RingPresentation::new(
        "Z/2+Z/4",
        &["U", "V"],
        vec!["U^2 = 0".into(), "UV = 0".into(), "V^3 = 1".into()],
        facts,
    ))
}

// ---------------------------------------------------------------------------
// Double covers when the first homology is Z/4 + Z/2

/// How the second deck involution moves `r` in `R = <t> + <r, s>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RMove {
    /// `r -> r`
    Fixes,
    /// `r -> r + 2^(n-1) t`
    FixesShifted,
    /// `r -> s`
    Swaps,
    /// `r -> s + 2^(n-1) t`
    SwapsShifted,
}

const MOVES: [RMove; 4] = [RMove::Fixes, RMove::FixesShifted, RMove::Swaps, RMove::SwapsShifted];

/// The form on the regular summand `<r, s>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairForm {
    /// `(r, r) = (s, s) = 1/2`, `(r, s) = 0`.
    Diagonal,
    /// `(r, r) = (s, s) = 0`, `(r, s) = 1/2`.
    Hyperbolic,
}

/// First homology of the double cover `Q` of the isotropic cover: `Z/2^n t`
/// plus the regular module `<r, s>`, with `eta` swapping `r, s` and acting by
/// `eta_sign` on `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RShape {
    pub n: u32,
    pub eta_sign: i64,
    pub pair_form: PairForm,
}

impl RShape {
    fn group(&self) -> PGroup {
        PGroup::new(2, vec![self.n, 1, 1]).expect("valid exponents")
    }

    fn form(&self) -> LinkForm {
        let (a, b) = match self.pair_form {
            PairForm::Diagonal => (Qz::new(1, 2), Qz::ZERO),
            PairForm::Hyperbolic => (Qz::ZERO, Qz::new(1, 2)),
        };
        let gram = vec![
            vec![Qz::new(1, 1 << self.n), Qz::ZERO, Qz::ZERO],
            vec![Qz::ZERO, a, b],
            vec![Qz::ZERO, b, a],
        ];
        LinkForm::new(self.group(), gram).expect("nondegenerate")
    }

    fn eta(&self) -> Hom {
        let g = self.group();
        let images = [g.scale(self.eta_sign, &g.basis(0)), g.basis(2), g.basis(1)];
        Hom::from_images(&g, &g, &images).expect("well defined")
    }

    fn shift(&self) -> i64 {
        1 << (self.n - 1)
    }
}

/// A candidate for the second deck involution on `R`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ActionCandidate {
    pub shape: RShape,
    /// `zeta t = multiplier t + (r + s)` if false, `multiplier t` if true.
    pub t_invariant: bool,
    pub multiplier: i64,
    pub r_move: RMove,
    pub zeta: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntermediateCover {
    /// Which involution of the Klein group is the deck involution of `Q -> G`.
    pub involution: String,
    pub tate: (u32, u32),
    /// `ker(1 - sigma)`.
    pub fixed: PGroup,
    /// `im(1 + sigma)`.
    pub norm_image: PGroup,
    pub coinvariants: PGroup,
    /// Groups containing the coinvariants with index 2.
    pub overgroups: Vec<PGroup>,
    /// Overgroups carrying an anisotropic-cover module structure over `M`.
    pub realized: Vec<PGroup>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CandidateOutcome {
    NotAnAction { reason: String },
    Eliminated { rule: String, witness: String },
    Reduced { to: RMove, multiplier: i64 },
    Survived { covers: Vec<IntermediateCover> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Elimination {
    pub subject: String,
    pub rule: String,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseAnalysis {
    pub n_max: u32,
    /// Homology of the cover defined by `U`.
    pub isotropic_cover: PGroup,
    /// Closed summands of the isotropic cover ruled out.
    pub closed_summand_eliminations: Vec<Elimination>,
    pub shape_eliminations: Vec<Elimination>,
    pub candidates: Vec<(ActionCandidate, CandidateOutcome)>,
    pub survivors: Vec<PGroup>,
    pub expected: Vec<PGroup>,
    pub matches: bool,
}

fn names(g: &PGroup, x: &GElem) -> String {
    let labels = ["t", "r", "s"];
    let mut parts = Vec::new();
    for (i, &c) in x.coords().iter().enumerate() {
        let c = c.rem_euclid(g.modulus(i));
        match c {
            0 => {}
            1 => parts.push(labels[i].to_string()),
            _ => parts.push(format!("{c}{}", labels[i])),
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn classify_move(shape: &RShape, zeta: &Hom) -> Option<RMove> {
    let g = shape.group();
    let zr = zeta.apply(&g.basis(1));
    let ht = g.scale(shape.shift(), &g.basis(0));
    let cands = [
        g.basis(1),
        g.add(&g.basis(1), &ht),
        g.basis(2),
        g.add(&g.basis(2), &ht),
    ];
    let found = cands.iter().position(|c| *c == zr)?;
    Some(MOVES[found])
}

fn make_zeta(shape: &RShape, t_invariant: bool, u: i64, mv: RMove) -> Result<Hom> {
    let g = shape.group();
    let (t, r, s) = (g.basis(0), g.basis(1), g.basis(2));
    let ht = g.scale(shape.shift(), &t);
    let mut zt = g.scale(u, &t);
    if !t_invariant {
        zt = g.add(&zt, &g.add(&r, &s));
    }
    let zr = match mv {
        RMove::Fixes => r,
        RMove::FixesShifted => g.add(&r, &ht),
        RMove::Swaps => s.clone(),
        RMove::SwapsShifted => g.add(&s, &ht),
    };
    // commuting with eta forces zeta s = eta zeta r
    let zs = shape.eta().apply(&zr);
    Hom::from_images(&g, &g, &[zt, zr, zs])
}

fn candidate_of(shape: &RShape, zeta: &Hom) -> Option<ActionCandidate> {
    let g = shape.group();
    let zt = zeta.apply(&g.basis(0));
    let c = &zt.coords()[1..];
    let t_invariant = match c {
        [0, 0] => true,
        [1, 1] => false,
        _ => return None,
    };
    Some(ActionCandidate {
        shape: shape.clone(),
        t_invariant,
        multiplier: zt.coords()[0].rem_euclid(1 << shape.n),
        r_move: classify_move(shape, zeta)?,
        zeta: zeta.matrix().to_vec(),
    })
}

fn orthogonality_witness(form: &LinkForm, zeta: &Hom) -> Option<String> {
    let g = form.group();
    for i in 0..g.rank() {
        for j in i..g.rank() {
            let (x, y) = (g.basis(i), g.basis(j));
            let before = form.pair(&x, &y);
            let after = form.pair(&zeta.apply(&x), &zeta.apply(&y));
            if before != after {
                return Some(format!(
                    "(zeta {a}, zeta {b}) = ({za}, {zb}) = {after} but ({a}, {b}) = {before}",
                    a = names(g, &x),
                    b = names(g, &y),
                    za = names(g, &zeta.apply(&x)),
                    zb = names(g, &zeta.apply(&y)),
                ));
            }
        }
    }
    None
}

/// Multiplier of `h` on the cyclic summand `<t>`, if `<t>` is `h`-stable.
fn multiplier_on_t(g: &PGroup, h: &Hom) -> Option<i64> {
    let ht = h.apply(&g.basis(0));
    (ht.coords()[1] == 0 && ht.coords()[2] == 0).then(|| ht.coords()[0])
}

/// Whether `Z/2^n` with form `<1/2^n>` admits the action `u` as a split
/// anisotropic summand. Memoized: each verdict computes extension cohomology.
fn split_action_ok(n: u32, u: i64) -> Result<bool> {
    thread_local! {
        static CACHE: RefCell<HashMap<(u32, i64), bool>> = RefCell::new(HashMap::new());
    }
    let u = u.rem_euclid(1 << n);
    if let Some(b) = CACHE.with(|c| c.borrow().get(&(n, u)).copied()) {
        return Ok(b);
    }
    let f = LinkForm::diagonal(2, &[(n, 1)])?;
    let z = Hom::scalar(f.group(), u);
    let ok = obstruct_split_anisotropic(&FormedCpAction::new(f, z)?)?.consistent;
    CACHE.with(|c| c.borrow_mut().insert((n, u), ok));
    Ok(ok)
}

/// All groups of order `2 |y|` containing `y` with index 2.
fn index_two_overgroups(y: &PGroup) -> Result<Vec<PGroup>> {
    fn partitions(total: u32, max: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if total == 0 {
            out.push(acc.clone());
            return;
        }
        for part in (1..=max.min(total)).rev() {
            acc.push(part);
            partitions(total - part, part, acc, out);
            acc.pop();
        }
    }
    let mut parts = Vec::new();
    let total = y.log_order() + 1;
    partitions(total, total, &mut Vec::new(), &mut parts);
    let mut out = Vec::new();
    for e in parts {
        let x = PGroup::new(2, e)?;
        let z2 = PGroup::cyclic(2, 1);
        let contains = (1u32..1 << x.rank()).any(|mask| {
            let images: Vec<GElem> = (0..x.rank())
                .map(|i| GElem(vec![i64::from(mask >> i & 1)]))
                .collect();
            let chi = Hom::from_images(&x, &z2, &images).expect("characters are well defined");
            chi.kernel().0 == *y
        });
        if contains {
            out.push(x);
        }
    }
    Ok(out)
}

/// Cap on the involution search per group.
const INVOLUTION_SEARCH_LIMIT: u128 = 1 << 22;

/// Whether `x` carries an involution making it the first homology of an
/// anisotropic double cover of `M` whose defining character has kernel `k`:
/// Tate-trivial, invariants and coinvariants both `k`, and generated over
/// `Z[C_2]` by `rank k` elements.
fn anisotropic_realizable(x: &PGroup, k: &PGroup) -> Result<bool> {
    let r = x.rank();
    let ex = x.exponents().to_vec();
    let mut cells: Vec<(i64, i64)> = Vec::new();
    let mut total: u128 = 1;
    for &li in &ex {
        for &kj in &ex {
            let step = 1i64 << li.saturating_sub(kj);
            let count = (1i64 << li) / step;
            cells.push((step, count));
            total *= count as u128;
        }
    }
    if total > INVOLUTION_SEARCH_LIMIT {
        return Err(crate::Error::Resource(format!(
            "involution search on {x} has {total} candidates"
        )));
    }
    let id = Hom::identity(x);
    let mut idx = vec![0i64; cells.len()];
    loop {
        let matrix: Vec<Vec<i64>> = (0..r)
            .map(|i| (0..r).map(|j| idx[i * r + j] * cells[i * r + j].0).collect())
            .collect();
        let theta = Hom::new(x.clone(), x.clone(), matrix)?;
        if theta.compose(&theta)? == id {
            let m = CpModule::new(x.clone(), theta)?;
            let t = tate_cohomology(&m)?;
            if t.h_odd == 0 && t.h_even == 0 && t.fixed == *k && t.coinv == *k {
                let gens = k.rank();
                let generated = match gens {
                    1 => x
                        .elements()
                        .any(|g| m.lambda_span(&[g]).group() == x),
                    _ => true,
                };
                if generated {
                    return Ok(true);
                }
            }
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(false);
            }
            idx[pos] += 1;
            if idx[pos] < cells[pos].1 {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

struct AnalysisContext {
    /// Kernels of the anisotropic characters of `M`.
    anisotropic_kernels: Vec<PGroup>,
    realizable: RefCell<HashMap<PGroup, bool>>,
}

impl AnalysisContext {
    fn realizable(&self, x: &PGroup) -> Result<bool> {
        if let Some(&b) = self.realizable.borrow().get(x) {
            return Ok(b);
        }
        let mut ok = false;
        for k in &self.anisotropic_kernels {
            ok |= anisotropic_realizable(x, k)?;
        }
        self.realizable.borrow_mut().insert(x.clone(), ok);
        Ok(ok)
    }
}

fn intermediate_cover(
    ctx: &AnalysisContext,
    shape: &RShape,
    sigma: &Hom,
    label: &str,
) -> Result<IntermediateCover> {
    let m = CpModule::new(shape.group(), sigma.clone())?;
    let t = tate_cohomology(&m)?;
    let norm_image = m.norm().image().0;
    let overgroups = index_two_overgroups(&t.coinv)?;
    let mut realized = Vec::new();
    for x in &overgroups {
        if ctx.realizable(x)? {
            realized.push(x.clone());
        }
    }
    Ok(IntermediateCover {
        involution: label.into(),
        tate: (t.h_odd, t.h_even),
        fixed: t.fixed,
        norm_image,
        coinvariants: t.coinv,
        overgroups,
        realized,
    })
}

fn evaluate(ctx: &AnalysisContext, shape: &RShape, zeta: &Hom, relabel: bool) -> Result<CandidateOutcome> {
    let g = shape.group();
    let eta = shape.eta();
    let id = Hom::identity(&g);
    if zeta.compose(zeta)? != id {
        return Ok(CandidateOutcome::NotAnAction {
            reason: "zeta does not square to the identity".into(),
        });
    }
    if zeta.compose(&eta)? != eta.compose(zeta)? {
        return Ok(CandidateOutcome::NotAnAction {
            reason: "zeta does not commute with eta".into(),
        });
    }
    if *zeta == id || *zeta == eta {
        return Ok(CandidateOutcome::NotAnAction {
            reason: "zeta and eta do not generate a group of order 4".into(),
        });
    }
    let ze = zeta.compose(&eta)?;
    let Some(cand) = candidate_of(shape, zeta) else {
        return Ok(CandidateOutcome::NotAnAction {
            reason: "zeta t does not project to a zeta-invariant class".into(),
        });
    };
    let form = shape.form();

    if relabel && matches!(cand.r_move, RMove::Swaps | RMove::FixesShifted) {
        let Some(other) = candidate_of(shape, &ze) else {
            return invariant("relabelled involution left the candidate family");
        };
        let inner = evaluate(ctx, shape, &ze, false)?;
        return Ok(match inner {
            CandidateOutcome::Eliminated { rule, witness } => CandidateOutcome::Eliminated {
                rule: format!("relabels_to_{}", serde_json::to_value(other.r_move)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default()),
                witness: format!(
                    "zeta*eta sends r to {}; then {rule}: {witness}",
                    names(&g, &ze.apply(&g.basis(1)))
                ),
            },
            _ => CandidateOutcome::Reduced {
                to: other.r_move,
                multiplier: other.multiplier,
            },
        });
    }

    if cand.r_move == RMove::Fixes {
        // <r, s> is zeta-stable, so its orthogonal complement <t> must be too
        let comp = orthogonal_complement(&form, &[g.basis(1), g.basis(2)])?;
        let emb = &comp.embedding;
        let src = emb.source();
        let stable = (0..src.rank()).all(|i| {
            let y = zeta.apply(&emb.apply(&src.basis(i)));
            emb.preimage(&y).is_some()
        });
        if !stable {
            let w = orthogonality_witness(&form, zeta).unwrap_or_default();
            return Ok(CandidateOutcome::Eliminated {
                rule: "stable_pair_with_unstable_complement".into(),
                witness: format!(
                    "zeta fixes r and s but moves t to {}, so zeta is not orthogonal: {w}",
                    names(&g, &zeta.apply(&g.basis(0)))
                ),
            });
        }
    }
    if let Some(w) = orthogonality_witness(&form, zeta) {
        return Ok(CandidateOutcome::Eliminated {
            rule: "not_orthogonal".into(),
            witness: w,
        });
    }

    // a zeta-stable <t> is a split anisotropic summand for zeta and zeta*eta
    if let (Some(a), Some(b)) = (multiplier_on_t(&g, zeta), multiplier_on_t(&g, &ze)) {
        let n = shape.n;
        let (ok_a, ok_b) = (split_action_ok(n, a)?, split_action_ok(n, b)?);
        if !(ok_a && ok_b) {
            return Ok(CandidateOutcome::Eliminated {
                rule: "split_anisotropic_action".into(),
                witness: format!(
                    "<t> is stable; zeta acts by {a} and zeta*eta by {b} mod {}, not both -1",
                    1i64 << n
                ),
            });
        }
    }

    let covers = vec![
        intermediate_cover(ctx, shape, zeta, "zeta")?,
        intermediate_cover(ctx, shape, &ze, "zeta_eta")?,
    ];
    if let Some(c) = covers.iter().find(|c| c.tate == (0, 0)) {
        return Ok(CandidateOutcome::Eliminated {
            rule: "cohomologically_trivial_intermediate_cover".into(),
            witness: format!(
                "{}: ker(1 - sigma) = {} equals im(1 + sigma) = {}, Tate table (0, 0)",
                c.involution, c.fixed, c.norm_image
            ),
        });
    }
    // each intermediate cover is also an anisotropic double cover of M
    if let Some(c) = covers.iter().find(|c| c.realized.is_empty()) {
        let over: Vec<String> = c.overgroups.iter().map(|g| g.to_string()).collect();
        return Ok(CandidateOutcome::Eliminated {
            rule: "no_realizable_intermediate_homology".into(),
            witness: format!(
                "{}: coinvariants {} sit with index 2 only in [{}], none of which is a \
                 Tate-trivial module with the coinvariants of an anisotropic cover",
                c.involution,
                c.coinvariants,
                over.join(", ")
            ),
        });
    }
    Ok(CandidateOutcome::Survived { covers })
}

fn shapes(n: u32, elims: &mut Vec<Elimination>) -> Result<Vec<RShape>> {
    let mut out: Vec<RShape> = Vec::new();
    for eta_sign in [-1i64, 1] {
        for pair_form in [PairForm::Diagonal, PairForm::Hyperbolic] {
            let shape = RShape { n, eta_sign, pair_form };
            if out.iter().any(|s| s.pair_form == pair_form && s.eta() == shape.eta()) {
                continue;
            }
            // <t> is a split anisotropic summand for eta as well
            if !split_action_ok(n, eta_sign)? {
                elims.push(Elimination {
                    subject: format!("n = {n}, eta t = {eta_sign} t, {pair_form:?}"),
                    rule: "split_anisotropic_action".into(),
                    witness: format!("eta acts on <t> = Z/{} by {eta_sign}, not -1", 1i64 << n),
                });
                continue;
            }
            out.push(shape);
        }
    }
    Ok(out)
}

/// The expected answer: `(Z/2)^3`, `Z/4 + Z/4`, and `Z/2 + Z/2^(n+1)` with
/// `2^(n+1) <= 2^n_max`.
pub fn expected_z2z4_covers(n_max: u32) -> Vec<PGroup> {
    let mut out: BTreeSet<PGroup> = BTreeSet::new();
    out.insert(PGroup::new(2, vec![1, 1, 1]).expect("valid"));
    out.insert(PGroup::new(2, vec![2, 2]).expect("valid"));
    for n in 1..n_max {
        out.insert(PGroup::new(2, vec![n + 1, 1]).expect("valid"));
    }
    out.into_iter().collect()
}

/// Candidate homology of the double covers of a manifold with 2-primary first
/// homology `Z/4 + Z/2`, obtained by enumerating every compatible pair of
/// commuting deck involutions on the homology of the `C_2 x C_2` cover and
/// discarding those that violate a computed constraint. The cyclic summand
/// `<t>` ranges over `Z/2^n` with `n < n_max`.
pub fn covering_case_analysis_z2z4(n_max: u32) -> Result<CaseAnalysis> {
    if n_max < 2 {
        return invalid("n_max must be at least 2");
    }
    if n_max > 8 {
        return Err(crate::Error::Resource("n_max is limited to 8".into()));
    }
    let base = LinkForm::diagonal(2, &[(2, 1), (1, 1)])?;
    let bg = base.group();
    let mut anisotropic_kernels: Vec<PGroup> = Vec::new();
    for z in bg.elements() {
        if bg.elem_order(&z) == 2 && !base.pair(&z, &z).is_zero() {
            let k = orthogonal_complement(&base, &[z])?.form.group().clone();
            if !anisotropic_kernels.contains(&k) {
                anisotropic_kernels.push(k);
            }
        }
    }
    let ctx = AnalysisContext {
        anisotropic_kernels,
        realizable: RefCell::new(HashMap::new()),
    };

    // the cover defined by U = (2u, .) shrinks the Z/4 summand
    let iso = build_shrinking(2, &[(2, 1), (1, 1)], 0)?;
    let isotropic_cover = iso.cover().group().clone();

    let mut closed_summand_eliminations = Vec::new();
    for m in 3..=n_max {
        let h = 1i64 << (m - 1);
        for u in [h - 1, h + 1] {
            if !split_action_ok(m, u)? {
                closed_summand_eliminations.push(Elimination {
                    subject: format!("closed summand Z/{} with action {u}", 1i64 << m),
                    rule: "split_anisotropic_action".into(),
                    witness: format!("a split anisotropic Z/{} with multiplier {u} != -1", 1i64 << m),
                });
            }
        }
    }

    let mut shape_eliminations = Vec::new();
    let mut candidates = Vec::new();
    let mut survivors: BTreeSet<PGroup> = BTreeSet::new();
    survivors.insert(isotropic_cover.clone());
    for n in 1..n_max {
        for shape in shapes(n, &mut shape_eliminations)? {
            for t_invariant in [false, true] {
                for u in (1..1i64 << n).step_by(2) {
                    for mv in MOVES {
                        let zeta = match make_zeta(&shape, t_invariant, u, mv) {
                            Ok(z) => z,
                            Err(_) => continue,
                        };
                        let outcome = evaluate(&ctx, &shape, &zeta, true)?;
                        if let CandidateOutcome::Survived { covers } = &outcome {
                            for c in covers {
                                survivors.extend(c.realized.iter().cloned());
                            }
                        }
                        candidates.push((
                            ActionCandidate {
                                shape: shape.clone(),
                                t_invariant,
                                multiplier: u,
                                r_move: mv,
                                zeta: zeta.matrix().to_vec(),
                            },
                            outcome,
                        ));
                    }
                }
            }
        }
    }
    let survivors: Vec<PGroup> = survivors.into_iter().collect();
    let expected = expected_z2z4_covers(n_max);
    Ok(CaseAnalysis {
        n_max,
        isotropic_cover,
        closed_summand_eliminations,
        shape_eliminations,
        candidates,
        matches: survivors == expected,
        survivors,
        expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orthonormal() -> LinkForm {
        LinkForm::diagonal(2, &[(1, 1), (1, 1), (1, 1)]).unwrap()
    }

    #[test]
    fn trilinear_two_classes() {
        let c = classify_trilinear(&orthonormal()).unwrap();
        assert_eq!(c.survivors.len(), 2);
        assert_eq!(c.stabilizer_order, 6);
        assert_eq!(c.classes.len(), 2);
        let alts: Vec<_> = c.classes.iter().map(|k| k.alternative).collect();
        assert!(alts.contains(&Some(Alternative::ZeroProducts)));
        assert!(alts.contains(&Some(Alternative::CyclicSquares)));
        let total: usize = c.eliminated.iter().map(|e| e.1).sum();
        assert_eq!(total + c.survivors.len(), 1024);
    }

    #[test]
    fn trilinear_rejects_other_forms() {
        let h = LinkForm::new(
            PGroup::new(2, vec![1, 1, 1]).unwrap(),
            vec![
                vec![Qz::new(1, 2), Qz::ZERO, Qz::ZERO],
                vec![Qz::ZERO, Qz::ZERO, Qz::new(1, 2)],
                vec![Qz::ZERO, Qz::new(1, 2), Qz::ZERO],
            ],
        )
        .unwrap();
        assert!(classify_trilinear(&h).is_err());
        assert!(classify_trilinear(&LinkForm::diagonal(2, &[(2, 1)]).unwrap()).is_err());
    }

    #[test]
    fn quaternion_facts_hold() {
        for r in quaternion_ring_facts().unwrap() {
            assert!(r.verified, "{r:?}");
        }
    }

    #[test]
    fn z2z4_ring() {
        let f = LinkForm::diagonal(2, &[(2, 1), (1, 1)]).unwrap();
        let r = ring_z2z4(&f).unwrap();
        assert!(r.verified, "{r:?}");
        assert_eq!(r.relations, vec!["U^2 = 0", "UV = 0", "V^3 = 1"]);
        assert!(ring_z2z4(&orthonormal()).is_err());
    }

    fn groups(v: &[&[u32]]) -> Vec<PGroup> {
        let mut out: Vec<PGroup> = v.iter().map(|e| PGroup::new(2, e.to_vec()).unwrap()).collect();
        out.sort();
        out
    }

    #[test]
    fn case_analysis_survivors() {
        let a = covering_case_analysis_z2z4(6).unwrap();
        assert_eq!(a.isotropic_cover, PGroup::new(2, vec![1, 1, 1]).unwrap());
        assert_eq!(
            a.survivors,
            groups(&[&[1, 1, 1], &[2, 2], &[4, 1], &[5, 1], &[6, 1]])
        );
        // Z/2 + Z/4 and Z/2 + Z/8 are not reached
        assert!(!a.matches);
        assert_eq!(a.closed_summand_eliminations.len(), 8);
    }

    #[test]
    fn first_three_cases_carry_witnesses() {
        let a = covering_case_analysis_z2z4(4).unwrap();
        for (c, o) in &a.candidates {
            if c.t_invariant {
                continue;
            }
            match (c.r_move, o) {
                (RMove::Fixes | RMove::Swaps, CandidateOutcome::Eliminated { witness, .. }) => {
                    assert!(witness.contains("not orthogonal"), "{witness}");
                }
                (RMove::Fixes | RMove::Swaps, CandidateOutcome::NotAnAction { .. }) => {}
                (RMove::Fixes | RMove::Swaps, other) => panic!("{c:?} {other:?}"),
                (RMove::FixesShifted, CandidateOutcome::Eliminated { rule, .. }) => {
                    assert!(rule.starts_with("relabels_to_swaps_shifted"));
                }
                (RMove::FixesShifted, CandidateOutcome::Reduced { to, .. }) => {
                    assert_eq!(*to, RMove::SwapsShifted);
                }
                _ => {}
            }
        }
    }

    #[test]
    fn shifted_branch_kernel_and_image() {
        // zeta t = 5t + r + s, zeta r = r + 4t on Z/8 + Z/2 + Z/2
        let shape = RShape { n: 3, eta_sign: -1, pair_form: PairForm::Diagonal };
        let z = make_zeta(&shape, false, 5, RMove::FixesShifted).unwrap();
        let m = CpModule::new(shape.group(), z).unwrap();
        let t = tate_cohomology(&m).unwrap();
        assert_eq!(t.fixed, PGroup::new(2, vec![2, 1]).unwrap());
        assert_eq!(m.norm().image().0, PGroup::new(2, vec![2]).unwrap());
        assert_eq!((t.h_odd, t.h_even), (1, 1));
    }

    #[test]
    fn anisotropic_cover_groups() {
        let k = PGroup::cyclic(2, 2);
        let yes = [&[3u32][..], &[2, 2], &[4, 1]];
        let no = [&[2u32, 1][..], &[3, 1], &[3, 2]];
        for e in yes {
            assert!(anisotropic_realizable(&PGroup::new(2, e.to_vec()).unwrap(), &k).unwrap(), "{e:?}");
        }
        for e in no {
            assert!(!anisotropic_realizable(&PGroup::new(2, e.to_vec()).unwrap(), &k).unwrap(), "{e:?}");
        }
    }

    #[test]
    fn overgroups_of_z4_z2() {
        let y = PGroup::new(2, vec![2, 1]).unwrap();
        let mut got = index_two_overgroups(&y).unwrap();
        got.sort();
        assert_eq!(got, groups(&[&[3, 1], &[2, 2], &[2, 1, 1]]));
    }
}
