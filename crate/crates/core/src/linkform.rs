//! Q/Z-valued linking forms on finite abelian p-groups.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::abelian::{is_prime, GElem, Hom, PGroup, Qz, Subquotient};
use crate::error::{invalid, invariant, Error, Result};

/// Symmetric bilinear pairing `W x W -> Q/Z` given by its Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawForm")]
pub struct LinkForm {
    group: PGroup,
    gram: Vec<Vec<Qz>>,
}

#[derive(Deserialize)]
struct RawForm {
    group: PGroup,
    gram: Vec<Vec<Qz>>,
}

impl TryFrom<RawForm> for LinkForm {
    type Error = Error;
    fn try_from(r: RawForm) -> Result<Self> {
        LinkForm::new(r.group, r.gram)
    }
}

fn is_power_of(p: i128, mut d: i128) -> Option<u32> {
    let mut e = 0;
    while d > 1 {
        if d % p != 0 {
            return None;
        }
        d /= p;
        e += 1;
    }
    Some(e)
}

impl LinkForm {
    /// Validates symmetry and that entry `(i,j)` has denominator dividing `p^{min(k_i,k_j)}`.
    /// Nondegeneracy is a separate check.
    pub fn new(group: PGroup, gram: Vec<Vec<Qz>>) -> Result<Self> {
        let s = group.rank();
        if gram.len() != s || gram.iter().any(|r| r.len() != s) {
            return invalid(format!("gram matrix must be {s}x{s}"));
        }
        let p = group.p() as i128;
        for i in 0..s {
            for j in 0..s {
                if gram[i][j] != gram[j][i] {
                    return invalid(format!("gram matrix is not symmetric at ({i},{j})"));
                }
                let bound = group.exponents()[i].min(group.exponents()[j]);
                match is_power_of(p, gram[i][j].den()) {
                    Some(e) if e <= bound => {}
                    _ => {
                        return invalid(format!(
                            "entry ({i},{j}) = {} has denominator not dividing {p}^{bound}",
                            gram[i][j]
                        ))
                    }
                }
            }
        }
        Ok(LinkForm { group, gram })
    }

    /// Orthogonal sum of cyclic forms `<a_i / p^{k_i}>`, given as `(k_i, a_i)` with `k_i` non-increasing.
    pub fn diagonal(p: u64, entries: &[(u32, i128)]) -> Result<Self> {
        let group = PGroup::new(p, entries.iter().map(|e| e.0).collect())?;
        let s = entries.len();
        let mut gram = vec![vec![Qz::ZERO; s]; s];
        for (i, &(k, a)) in entries.iter().enumerate() {
            gram[i][i] = Qz::new(a, (p as i128).pow(k));
        }
        LinkForm::new(group, gram)
    }

    /// Hyperbolic plane on `Z/p^k + Z/p^k`: zero diagonal, off-diagonal `1/p^k`.
    pub fn hyperbolic(p: u64, k: u32) -> Result<Self> {
        let group = PGroup::new(p, vec![k, k])?;
        let h = Qz::new(1, (p as i128).pow(k));
        LinkForm::new(group, vec![vec![Qz::ZERO, h], vec![h, Qz::ZERO]])
    }

    pub fn group(&self) -> &PGroup {
        &self.group
    }

    pub fn p(&self) -> u64 {
        self.group.p()
    }

    pub fn gram(&self) -> &[Vec<Qz>] {
        &self.gram
    }

    pub fn pair(&self, x: &GElem, y: &GElem) -> Qz {
        let mut acc = Qz::ZERO;
        for (i, &a) in x.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.0.iter().enumerate() {
                if b != 0 {
                    acc = acc + self.gram[i][j].scale(a as i128 * b as i128);
                }
            }
        }
        acc
    }

    /// Adjoint `W -> dual(W)`, `x -> (x, -)`, in dual coordinates.
    pub fn adjoint(&self) -> Hom {
        let g = &self.group;
        let images: Vec<GElem> = (0..g.rank())
            .map(|i| {
                let c: Vec<i64> = (0..g.rank())
                    .map(|j| {
                        let q = self.gram[i][j];
                        (q.num() * (g.modulus(j) as i128 / q.den())) as i64
                    })
                    .collect();
                g.reduce(&c)
            })
            .collect();
        Hom::from_images(g, g, &images).expect("adjoint of a well-formed gram is well defined")
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.adjoint().is_bijective()
    }

    /// Gram matrix of the restriction to the elements `gens`.
    pub fn gram_on(&self, gens: &[GElem]) -> Vec<Vec<Qz>> {
        gens.iter()
            .map(|x| gens.iter().map(|y| self.pair(x, y)).collect())
            .collect()
    }

    /// Form restricted to a subgroup, expressed in the subgroup's normal-form basis.
    pub fn restrict(&self, sub: &Subquotient) -> Result<LinkForm> {
        let gens: Vec<GElem> = (0..sub.group().rank())
            .map(|i| sub.lift(&sub.group().basis(i)))
            .collect();
        LinkForm::new(sub.group().clone(), self.gram_on(&gens))
    }

    /// Whether `zeta` preserves the form.
    pub fn is_invariant_under(&self, zeta: &Hom) -> bool {
        let g = &self.group;
        (0..g.rank()).all(|i| {
            (0..g.rank()).all(|j| {
                let a = zeta.apply(&g.basis(i));
                let b = zeta.apply(&g.basis(j));
                self.pair(&a, &b) == self.gram[i][j]
            })
        })
    }
}

impl std::fmt::Display for LinkForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<String> = self
            .gram
            .iter()
            .map(|r| {
                r.iter()
                    .map(|q| q.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        write!(f, "{} [{}]", self.group, rows.join("; "))
    }
}

pub fn check_nondegenerate(f: &LinkForm) -> bool {
    f.is_nondegenerate()
}

/// Induced form on `V = p^l W`: `(u, v)_V = (x, v)` for any `x` with `p^l x = u`.
pub fn restrict_to_scaled(f: &LinkForm, l: u32) -> Result<LinkForm> {
    if !f.is_nondegenerate() {
        return invalid("restriction to p^l W requires a nondegenerate form");
    }
    let g = f.group();
    let p = g.p() as i128;
    let keep: Vec<usize> = (0..g.rank()).filter(|&i| g.exponents()[i] > l).collect();
    let group = PGroup::new(g.p(), keep.iter().map(|&i| g.exponents()[i] - l).collect())?;
    let gram = keep
        .iter()
        .map(|&i| {
            keep.iter()
                .map(|&j| f.gram()[i][j].scale(p.pow(l)))
                .collect()
        })
        .collect();
    LinkForm::new(group, gram)
}

/// Result of an orthogonal splitting into cyclic pieces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagonalization {
    pub basis: Vec<GElem>,
    pub diagonal: Vec<Qz>,
    pub exponents: Vec<u32>,
}

fn legendre_is_square(a: i128, p: i128) -> bool {
    let a = a.rem_euclid(p);
    (1..p).any(|x| (x * x) % p == a)
}

/// Square root of a unit `c` modulo `p^k` (p odd), if it exists.
fn sqrt_mod_prime_power(c: i128, p: i128, k: u32) -> Option<i128> {
    let c0 = c.rem_euclid(p);
    let mut r = (1..p).find(|x| (x * x) % p == c0)?;
    let mut modulus = p;
    for _ in 1..k {
        modulus *= p;
        // Newton step r <- r - (r^2 - c) / (2r)
        let inv = crate::abelian::local::ext_gcd((2 * r).rem_euclid(modulus), modulus).1;
        let fr = (r * r - c).rem_euclid(modulus);
        r = (r - fr * inv).rem_euclid(modulus);
    }
    Some(r)
}

/// Smallest positive representative of the square class of the unit `a` mod p.
fn canonical_square_class(a: i128, p: i128) -> i128 {
    if legendre_is_square(a, p) {
        1
    } else {
        (2..p)
            .find(|&n| !legendre_is_square(n, p))
            .expect("odd primes have non-residues")
    }
}

/// Orthogonal basis of cyclic summands for an odd prime.
///
/// At each step the top layer of the remaining subgroup is searched for an
/// element with nonzero self-pairing (basis vectors first, then sums of two
/// basis vectors in lexicographic order); its lift splits off a cyclic summand
/// and the procedure recurses on the orthogonal complement.
pub fn diagonalize_odd(f: &LinkForm) -> Result<Diagonalization> {
    let p = f.p();
    if p == 2 {
        return invalid("odd-prime diagonalization does not cover p = 2; use normalize_two");
    }
    if !f.is_nondegenerate() {
        return invalid("diagonalization requires a nondegenerate form");
    }
    let w = f.group().clone();
    let pi = p as i128;
    // current subgroup as a list of generators in W-coordinates forming its normal-form basis
    let mut current = Subquotient::new(
        &w,
        &(0..w.rank()).map(|i| w.basis(i)).collect::<Vec<_>>(),
        &[],
    );
    let mut basis = Vec::new();
    let mut diagonal = Vec::new();
    let mut exponents = Vec::new();
    while !current.group().is_trivial() {
        let y = current.group().clone();
        let k = y.max_exponent();
        let top: Vec<usize> = (0..y.rank()).filter(|&i| y.exponents()[i] == k).collect();
        let lifts: Vec<GElem> = (0..y.rank()).map(|i| current.lift(&y.basis(i))).collect();
        let full = pi.pow(k);
        let good = |x: &GElem| f.pair(x, x).order() == full;
        let mut chosen = None;
        for &i in &top {
            if good(&lifts[i]) {
                chosen = Some(lifts[i].clone());
                break;
            }
        }
        if chosen.is_none() {
            'outer: for (a, &i) in top.iter().enumerate() {
                for &j in &top[a + 1..] {
                    let x = w.add(&lifts[i], &lifts[j]);
                    if good(&x) {
                        chosen = Some(x);
                        break 'outer;
                    }
                }
            }
        }
        let Some(x) = chosen else {
            return invariant("no anisotropic element on the top layer of a nondegenerate form");
        };
        let q = f.pair(&x, &x);
        let unit = q.num();
        let target = canonical_square_class(unit, pi);
        let ratio = target
            * crate::abelian::local::ext_gcd(unit.rem_euclid(full), full)
                .1
                .rem_euclid(full);
        let u = sqrt_mod_prime_power(ratio.rem_euclid(full), pi, k)
            .expect("ratio of equal square classes is a square");
        let x = w.scale(u as i64, &x);
        let q = f.pair(&x, &x);
        debug_assert_eq!(q.num(), target);
        // orthogonal complement of x inside the current subgroup
        let y_lifts: Vec<GElem> = (0..y.rank()).map(|i| current.lift(&y.basis(i))).collect();
        let cyc = PGroup::cyclic(p, k);
        let images: Vec<GElem> = y_lifts
            .iter()
            .map(|l| {
                let v = f.pair(&x, l);
                GElem(vec![(v.num() * (full / v.den())) as i64])
            })
            .collect();
        let hom = Hom::from_images(&y, &cyc, &images)?;
        let ker_gens: Vec<GElem> = hom
            .kernel_generators()
            .iter()
            .map(|h| current.lift(h))
            .collect();
        current = Subquotient::new(&w, &ker_gens, &[]);
        basis.push(x);
        diagonal.push(q);
        exponents.push(k);
    }
    let d = Diagonalization {
        basis,
        diagonal,
        exponents,
    };
    verify_diagonalization(f, &d)?;
    Ok(d)
}

/// Checks that `d` is an orthogonal basis with the advertised diagonal.
pub fn verify_diagonalization(f: &LinkForm, d: &Diagonalization) -> Result<()> {
    let w = f.group();
    let p = w.p() as i128;
    for (i, x) in d.basis.iter().enumerate() {
        for (j, y) in d.basis.iter().enumerate() {
            let v = f.pair(x, y);
            if i == j {
                if v != d.diagonal[i] || v.order() != p.pow(d.exponents[i]) {
                    return invariant(format!("diagonal entry {i} has the wrong order"));
                }
            } else if !v.is_zero() {
                return invariant(format!("basis vectors {i} and {j} are not orthogonal"));
            }
        }
    }
    let src = PGroup::new(w.p(), d.exponents.clone())?;
    let change = Hom::from_images(&src, w, &d.basis)?;
    if !change.is_bijective() {
        return invariant("diagonal basis does not generate the group");
    }
    Ok(())
}

/// Block found by the 2-adic normalizer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum TwoAdicBlock {
    /// Cyclic summand `<a / 2^k>` spanned by `generator`.
    Diagonal { generator: GElem, value: Qz },
    /// Elementary hyperbolic plane spanned by two isotropic vectors.
    Hyperbolic { first: GElem, second: GElem },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum TwoAdicNormalForm {
    Classified { blocks: Vec<TwoAdicBlock> },
    Unclassified { reason: String },
}

/// Splits a 2-primary form into diagonal summands and elementary hyperbolic planes.
/// Shapes outside these two families are reported as unclassified.
pub fn normalize_two(f: &LinkForm) -> Result<TwoAdicNormalForm> {
    if f.p() != 2 {
        return invalid("the 2-adic normalizer only accepts p = 2");
    }
    if !f.is_nondegenerate() {
        return invalid("normalization requires a nondegenerate form");
    }
    let w = f.group().clone();
    let mut current = Subquotient::new(
        &w,
        &(0..w.rank()).map(|i| w.basis(i)).collect::<Vec<_>>(),
        &[],
    );
    let mut blocks = Vec::new();
    while !current.group().is_trivial() {
        let y = current.group().clone();
        let k = y.max_exponent();
        let full = 1i128 << k;
        let lifts: Vec<GElem> = (0..y.rank()).map(|i| current.lift(&y.basis(i))).collect();
        let top: Vec<usize> = (0..y.rank()).filter(|&i| y.exponents()[i] == k).collect();
        let mut split: Vec<GElem> = Vec::new();
        let mut candidates: Vec<GElem> = top.iter().map(|&i| lifts[i].clone()).collect();
        for (a, &i) in top.iter().enumerate() {
            for &j in &top[a + 1..] {
                candidates.push(w.add(&lifts[i], &lifts[j]));
            }
        }
        if let Some(x) = candidates.iter().find(|x| f.pair(x, x).order() == full) {
            split.push(x.clone());
            blocks.push(TwoAdicBlock::Diagonal {
                generator: x.clone(),
                value: f.pair(x, x),
            });
        } else if k == 1 {
            let pair = top.iter().enumerate().find_map(|(a, &i)| {
                top[a + 1..]
                    .iter()
                    .find(|&&j| !f.pair(&lifts[i], &lifts[j]).is_zero())
                    .map(|&j| (lifts[i].clone(), lifts[j].clone()))
            });
            let Some((e1, e2)) = pair else {
                return invariant("degenerate top layer in a nondegenerate form");
            };
            split.push(e1.clone());
            split.push(e2.clone());
            blocks.push(TwoAdicBlock::Hyperbolic {
                first: e1,
                second: e2,
            });
        } else {
            return Ok(TwoAdicNormalForm::Unclassified {
                reason: format!("even-type block on Z/2^{k} factors"),
            });
        }
        let y_lifts = lifts;
        let cyc = PGroup::new(2, vec![k; split.len()])?;
        let images: Vec<GElem> = y_lifts
            .iter()
            .map(|l| {
                GElem(
                    split
                        .iter()
                        .map(|x| {
                            let v = f.pair(x, l);
                            (v.num() * (full / v.den())) as i64
                        })
                        .collect(),
                )
            })
            .collect();
        let hom = Hom::from_images(&y, &cyc, &images)?;
        let ker_gens: Vec<GElem> = hom
            .kernel_generators()
            .iter()
            .map(|h| current.lift(h))
            .collect();
        current = Subquotient::new(&w, &ker_gens, &[]);
    }
    Ok(TwoAdicNormalForm::Classified { blocks })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Isotropy {
    Isotropic,
    Anisotropic,
    SplitAnisotropic,
}

pub fn isotropy_class(f: &LinkForm, z: &GElem) -> Result<Isotropy> {
    let g = f.group();
    if !g.contains(z) {
        return invalid("element does not belong to the carrier");
    }
    if g.is_zero(z) {
        return invalid("isotropy of the zero element is undefined");
    }
    let q = f.pair(z, z);
    Ok(if q.is_zero() {
        Isotropy::Isotropic
    } else if q.order() as u128 == g.elem_order(z) {
        Isotropy::SplitAnisotropic
    } else {
        Isotropy::Anisotropic
    })
}

/// `S^perp` with its induced form and inclusion into the carrier.
#[derive(Debug, Clone)]
pub struct Complement {
    pub form: LinkForm,
    pub embedding: Hom,
}

pub fn orthogonal_complement(f: &LinkForm, s: &[GElem]) -> Result<Complement> {
    let w = f.group();
    if s.iter().any(|x| !w.contains(x)) {
        return invalid("generator does not belong to the carrier");
    }
    let sub = Subquotient::new(w, s, &[]);
    let restricted = f.restrict(&sub)?;
    if !restricted.is_nondegenerate() {
        return invalid(
            "the form restricted to <S> is degenerate, so <S> has no orthogonal complement summand",
        );
    }
    let h = sub.group();
    let h_gens: Vec<GElem> = (0..h.rank()).map(|i| sub.lift(&h.basis(i))).collect();
    let images: Vec<GElem> = (0..w.rank())
        .map(|i| {
            let c: Vec<i64> = h_gens
                .iter()
                .enumerate()
                .map(|(j, x)| {
                    let v = f.pair(&w.basis(i), x);
                    (v.num() * (h.modulus(j) as i128 / v.den())) as i64
                })
                .collect();
            h.reduce(&c)
        })
        .collect();
    let hom = Hom::from_images(w, h, &images)?;
    let comp = Subquotient::new(w, &hom.kernel_generators(), &[]);
    let form = f.restrict(&comp)?;
    let embedding = comp.embedding();
    Ok(Complement { form, embedding })
}

/// A form together with an orthogonal automorphism of order dividing p.
#[derive(Debug, Clone)]
pub struct FormedCpAction {
    form: LinkForm,
    zeta: Hom,
}

impl FormedCpAction {
    pub fn new(form: LinkForm, zeta: Hom) -> Result<Self> {
        let g = form.group();
        if zeta.source() != g || zeta.target() != g {
            return invalid("zeta must be an endomorphism of the carrier");
        }
        if !zeta.pow(form.p() as u32)?.is_identity() {
            return invalid("zeta^p is not the identity");
        }
        if !form.is_invariant_under(&zeta) {
            return invalid("zeta does not preserve the form");
        }
        Ok(FormedCpAction { form, zeta })
    }

    pub fn form(&self) -> &LinkForm {
        &self.form
    }

    pub fn zeta(&self) -> &Hom {
        &self.zeta
    }
}

/// Parity check: `dim_Fp (Im(1 - zeta) ⊗ F_p)` is even.
pub fn check_parity_lemma(a: &FormedCpAction) -> Result<bool> {
    Ok(parity_dimension(a)? % 2 == 0)
}

pub fn parity_dimension(a: &FormedCpAction) -> Result<usize> {
    if a.form.p() == 2 {
        return invalid("the parity statement requires an odd prime");
    }
    let g = a.form.group();
    let d = Hom::identity(g).sub(&a.zeta)?;
    Ok(d.image().0.rank())
}

/// A form on a finite abelian group `⊕ Z/n_i` with arbitrary orders.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MixedForm {
    pub orders: Vec<u64>,
    pub gram: Vec<Vec<Qz>>,
}

/// One p-primary piece of a [`MixedForm`].
#[derive(Debug, Clone)]
pub struct PrimaryPiece {
    pub form: LinkForm,
    /// Generators of the piece as integer coefficient vectors in the original basis.
    pub generators: Vec<Vec<i128>>,
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl MixedForm {
    fn pair(&self, x: &[i128], y: &[i128]) -> Qz {
        let mut acc = Qz::ZERO;
        for (i, &a) in x.iter().enumerate() {
            for (j, &b) in y.iter().enumerate() {
                acc = acc + self.gram[i][j].scale(a * b);
            }
        }
        acc
    }

    /// Splits into orthogonal p-primary pieces, checking that cross terms vanish.
    pub fn primary_decomposition(&self) -> Result<Vec<PrimaryPiece>> {
        let s = self.orders.len();
        if self.gram.len() != s || self.gram.iter().any(|r| r.len() != s) {
            return invalid("gram matrix size does not match the group");
        }
        if self.orders.iter().any(|&n| n == 0) {
            return invalid("cyclic orders must be positive");
        }
        let mut primes: Vec<u64> = self
            .orders
            .iter()
            .flat_map(|&n| factorize(n).into_iter().map(|f| f.0))
            .collect();
        primes.sort_unstable();
        primes.dedup();
        let mut pieces: Vec<(u64, Vec<(u32, Vec<i128>)>)> = Vec::new();
        for &p in &primes {
            let mut gens = Vec::new();
            for (i, &n) in self.orders.iter().enumerate() {
                let v = factorize(n)
                    .into_iter()
                    .find(|f| f.0 == p)
                    .map_or(0, |f| f.1);
                if v == 0 {
                    continue;
                }
                let mut c = vec![0i128; s];
                c[i] = (n / p.pow(v)) as i128;
                gens.push((v, c));
            }
            gens.sort_by(|a, b| b.0.cmp(&a.0));
            pieces.push((p, gens));
        }
        for (a, (p, ga)) in pieces.iter().enumerate() {
            for (q, gb) in &pieces[a + 1..] {
                for (_, x) in ga {
                    for (_, y) in gb {
                        if !self.pair(x, y).is_zero() {
                            return invariant(format!(
                                "{p}-primary and {q}-primary parts are not orthogonal"
                            ));
                        }
                    }
                }
            }
        }
        pieces
            .into_iter()
            .map(|(p, gens)| {
                let group = PGroup::new(p, gens.iter().map(|g| g.0).collect())?;
                let vecs: Vec<Vec<i128>> = gens.into_iter().map(|g| g.1).collect();
                let gram = vecs
                    .iter()
                    .map(|x| vecs.iter().map(|y| self.pair(x, y)).collect())
                    .collect();
                Ok(PrimaryPiece {
                    form: LinkForm::new(group, gram)?,
                    generators: vecs,
                })
            })
            .collect()
    }
}

/// A random nondegenerate form on a random p-group of order at most `p^max_log`.
/// Off-diagonal entries are random, so the Gram matrix is rarely diagonal.
pub fn random_form<R: Rng>(rng: &mut R, p: u64, max_log: u32) -> Result<LinkForm> {
    if !is_prime(p) || max_log == 0 {
        return invalid("random_form needs a prime and max_log >= 1");
    }
    loop {
        let mut left = max_log;
        let mut exps = Vec::new();
        while left > 0 && (exps.is_empty() || rng.gen_bool(0.6)) {
            let k = rng.gen_range(1..=left.min(3));
            exps.push(k);
            left -= k;
        }
        exps.sort_unstable_by(|a, b| b.cmp(a));
        let group = PGroup::new(p, exps.clone())?;
        let r = exps.len();
        let mut gram = vec![vec![Qz::ZERO; r]; r];
        for i in 0..r {
            for j in i..r {
                let den = (p as i128).pow(exps[i].min(exps[j]));
                let q = Qz::new(rng.gen_range(0..den), den);
                gram[i][j] = q;
                gram[j][i] = q;
            }
        }
        if let Ok(f) = LinkForm::new(group, gram) {
            if f.is_nondegenerate() {
                return Ok(f);
            }
        }
    }
}

fn mat_mul_mod(a: &[Vec<i64>], b: &[Vec<i64>], p: i64) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum::<i64>().rem_euclid(p)).collect())
        .collect()
}

/// A random nontrivial isometry of order p on a random nondegenerate form on
/// `(Z/p)^rank`, for odd p and `rank >= 3` (below that the orthogonal group
/// has order prime to p). Built as a power of a product of reflections.
pub fn random_orthogonal_action<R: Rng>(rng: &mut R, p: u64, rank: usize) -> Result<FormedCpAction> {
    if p == 2 || !is_prime(p) {
        return invalid("random orthogonal actions need an odd prime");
    }
    if rank < 3 {
        return invalid("order-p isometries need rank at least 3");
    }
    let pi = p as i64;
    let inv = |x: i64| crate::abelian::local::ext_gcd(x.rem_euclid(pi) as i128, pi as i128).1.rem_euclid(pi as i128) as i64;
    loop {
        let mut b = vec![vec![0i64; rank]; rank];
        for i in 0..rank {
            for j in i..rank {
                let v = rng.gen_range(0..pi);
                b[i][j] = v;
                b[j][i] = v;
            }
        }
        let group = PGroup::elementary(p, rank);
        let gram = b.iter().map(|row| row.iter().map(|&x| Qz::new(x as i128, p as i128)).collect()).collect();
        let form = match LinkForm::new(group.clone(), gram) {
            Ok(f) if f.is_nondegenerate() => f,
            _ => continue,
        };
        let bil = |x: &[i64], y: &[i64]| {
            (0..rank).map(|i| (0..rank).map(|j| x[i] * b[i][j] * y[j]).sum::<i64>()).sum::<i64>().rem_euclid(pi)
        };
        let ident: Vec<Vec<i64>> = (0..rank).map(|i| (0..rank).map(|j| i64::from(i == j)).collect()).collect();
        let mut g = ident.clone();
        for _ in 0..2 * rank + 2 {
            let v: Vec<i64> = (0..rank).map(|_| rng.gen_range(0..pi)).collect();
            let q = bil(&v, &v);
            if q == 0 {
                continue;
            }
            // x -> x - 2 (x,v)/(v,v) v, with column j the image of e_j
            let c = 2 * inv(q) % pi;
            let refl: Vec<Vec<i64>> = (0..rank)
                .map(|i| {
                    (0..rank)
                        .map(|j| {
                            let bjv: i64 = (0..rank).map(|k| b[j][k] * v[k]).sum();
                            (ident[i][j] - c * bjv % pi * v[i]).rem_euclid(pi)
                        })
                        .collect()
                })
                .collect();
            g = mat_mul_mod(&refl, &g, pi);
        }
        let mut order = 1usize;
        let mut acc = g.clone();
        while acc != ident {
            acc = mat_mul_mod(&acc, &g, pi);
            order += 1;
        }
        if order % p as usize != 0 {
            continue;
        }
        let mut zeta = ident.clone();
        for _ in 0..order / p as usize {
            zeta = mat_mul_mod(&zeta, &g, pi);
        }
        let z = Hom::new(group.clone(), group, zeta)?;
        return FormedCpAction::new(form, z);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i128, d: i128) -> Qz {
        Qz::new(n, d)
    }

    #[test]
    fn nondegeneracy_examples() {
        assert!(LinkForm::diagonal(3, &[(1, 1)]).unwrap().is_nondegenerate());
        assert!(LinkForm::hyperbolic(2, 1).unwrap().is_nondegenerate());
        let z4 = PGroup::cyclic(2, 2);
        let f = LinkForm::new(z4.clone(), vec![vec![q(1, 2)]]).unwrap();
        assert!(!f.is_nondegenerate());
        // brute force: the adjoint kernel has order 2
        let kernel = z4
            .elements()
            .filter(|x| z4.elements().all(|y| f.pair(x, &y).is_zero()))
            .count();
        assert_eq!(kernel, 2);
        assert!(LinkForm::new(PGroup::cyclic(2, 1), vec![vec![q(1, 4)]]).is_err());
    }

    #[test]
    fn rejects_asymmetric_gram() {
        let g = PGroup::elementary(3, 2);
        assert!(LinkForm::new(g, vec![vec![q(1, 3), q(1, 3)], vec![q(2, 3), q(1, 3)]]).is_err());
    }

    #[test]
    fn scaled_restriction_examples() {
        let f = LinkForm::diagonal(2, &[(2, 1)]).unwrap();
        assert_eq!(restrict_to_scaled(&f, 0).unwrap(), f);
        let v = restrict_to_scaled(&f, 1).unwrap();
        assert_eq!(v, LinkForm::diagonal(2, &[(1, 1)]).unwrap());
        let f = LinkForm::diagonal(3, &[(2, 1), (1, 1)]).unwrap();
        assert_eq!(
            restrict_to_scaled(&f, 1).unwrap(),
            LinkForm::diagonal(3, &[(1, 1)]).unwrap()
        );
    }

    #[test]
    fn scaled_restriction_is_independent_of_lift() {
        let f = LinkForm::new(
            PGroup::new(3, vec![2, 1]).unwrap(),
            vec![vec![q(2, 9), q(1, 3)], vec![q(1, 3), q(1, 3)]],
        )
        .unwrap();
        assert!(f.is_nondegenerate());
        let w = f.group();
        for x in w.elements() {
            for x2 in w.elements() {
                if w.scale(3, &x) != w.scale(3, &x2) {
                    continue;
                }
                for v in w.elements() {
                    let v3 = w.scale(3, &v);
                    assert_eq!(f.pair(&x, &v3), f.pair(&x2, &v3));
                }
            }
        }
    }

    #[test]
    fn hyperbolic_diagonalizes_at_three() {
        let f = LinkForm::hyperbolic(3, 1).unwrap();
        let d = diagonalize_odd(&f).unwrap();
        assert_eq!(d.exponents, vec![1, 1]);
        assert!(d.diagonal.iter().all(|v| v.order() == 3));
        // first vector is a unit multiple of e1 + e2
        assert!(d.basis[0] == GElem(vec![1, 1]) || d.basis[0] == GElem(vec![2, 2]));
    }

    #[test]
    fn diagonal_input_keeps_basis_up_to_units() {
        let f = LinkForm::diagonal(5, &[(2, 2), (1, 1)]).unwrap();
        let d = diagonalize_odd(&f).unwrap();
        assert_eq!(d.exponents, vec![2, 1]);
        assert_eq!(d.basis[0].0[1], 0);
        assert_eq!(d.basis[1].0[0], 0);
        // 2 is a non-residue mod 5 so its class is represented by 2
        assert_eq!(d.diagonal[0], q(2, 25));
        assert_eq!(d.diagonal[1], q(1, 5));
    }

    #[test]
    fn diagonalize_rejects_two() {
        assert!(diagonalize_odd(&LinkForm::hyperbolic(2, 1).unwrap()).is_err());
    }

    #[test]
    fn two_adic_shapes() {
        let h = normalize_two(&LinkForm::hyperbolic(2, 1).unwrap()).unwrap();
        assert!(matches!(h, TwoAdicNormalForm::Classified { ref blocks }
            if matches!(blocks[..], [TwoAdicBlock::Hyperbolic { .. }])));
        let d = normalize_two(&LinkForm::diagonal(2, &[(1, 1), (1, 1)]).unwrap()).unwrap();
        assert!(matches!(d, TwoAdicNormalForm::Classified { ref blocks } if blocks.len() == 2));
        let u = normalize_two(&LinkForm::hyperbolic(2, 2).unwrap()).unwrap();
        assert!(matches!(u, TwoAdicNormalForm::Unclassified { .. }));
    }

    #[test]
    fn isotropy_examples() {
        let h = LinkForm::hyperbolic(2, 1).unwrap();
        assert_eq!(isotropy_class(&h, &GElem(vec![1, 0])).unwrap(), Isotropy::Isotropic);
        let c = LinkForm::diagonal(2, &[(1, 1)]).unwrap();
        assert_eq!(
            isotropy_class(&c, &GElem(vec![1])).unwrap(),
            Isotropy::SplitAnisotropic
        );
        let c4 = LinkForm::diagonal(2, &[(2, 1)]).unwrap();
        assert_eq!(isotropy_class(&c4, &GElem(vec![2])).unwrap(), Isotropy::Isotropic);
        assert!(isotropy_class(&c, &GElem(vec![0])).is_err());
    }

    #[test]
    fn complement_examples() {
        let f = LinkForm::diagonal(3, &[(1, 1), (1, 2)]).unwrap();
        let c = orthogonal_complement(&f, &[GElem(vec![1, 0])]).unwrap();
        assert_eq!(c.form.group(), &PGroup::cyclic(3, 1));
        assert_eq!(c.form.gram()[0][0].order(), 3);
        let all = orthogonal_complement(&f, &[GElem(vec![1, 0]), GElem(vec![0, 1])]).unwrap();
        assert!(all.form.group().is_trivial());
        let h = LinkForm::hyperbolic(2, 1).unwrap();
        assert!(orthogonal_complement(&h, &[GElem(vec![1, 1])]).is_err());
    }

    #[test]
    fn parity_on_trivial_and_permutation() {
        let f = LinkForm::diagonal(3, &[(1, 1), (1, 1), (1, 1)]).unwrap();
        let id = FormedCpAction::new(f.clone(), Hom::identity(f.group())).unwrap();
        assert_eq!(parity_dimension(&id).unwrap(), 0);
        let g = f.group().clone();
        let cycle = Hom::new(g.clone(), g, vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        let a = FormedCpAction::new(f, cycle).unwrap();
        assert_eq!(parity_dimension(&a).unwrap(), 2);
        assert!(check_parity_lemma(&a).unwrap());
    }

    #[test]
    fn formed_action_rejects_non_isometry() {
        let f = LinkForm::diagonal(3, &[(1, 1), (1, 2)]).unwrap();
        let g = f.group().clone();
        let swap = Hom::new(g.clone(), g, vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert!(FormedCpAction::new(f, swap).is_err());
    }

    #[test]
    fn primary_decomposition_splits_orders() {
        let m = MixedForm {
            orders: vec![6],
            gram: vec![vec![q(1, 6)]],
        };
        let pieces = m.primary_decomposition().unwrap();
        assert_eq!(pieces.len(), 2);
        assert_eq!(pieces[0].form.p(), 2);
        assert_eq!(pieces[1].form.p(), 3);
        assert!(pieces.iter().all(|pc| pc.form.is_nondegenerate()));
    }
}
