//! Algebraic stand-ins for degree-p cyclic coverings: a base form on `V`, a
//! cover form on `W` with a deck automorphism `zeta`, and the projection
//! `pi: W -> V` and transfer `t: V -> W` tied together by reciprocity.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::abelian::{is_prime, GElem, Hom, PGroup, Qz, Subquotient};
use crate::cohom::{cohomology_fp, GroupTable};
use crate::cpmod::{
    build_block_module, tate_cohomology, Block, BlockKind, BlockSpec, CohomologicalClass,
    CpModule,
};
use crate::error::{invalid, Error, Result};
use crate::linkform::{
    diagonalize_odd, normalize_two, orthogonal_complement, FormedCpAction, LinkForm,
    TwoAdicBlock, TwoAdicNormalForm,
};

/// Carriers up to this order get exhaustive reciprocity checks.
pub const EXHAUSTIVE_ORDER: u128 = 1 << 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringModel {
    base: LinkForm,
    cover: LinkForm,
    zeta: Hom,
    proj: Hom,
    trans: Hom,
    degree: u64,
}

#[derive(Serialize, Deserialize)]
struct RawModel {
    base: LinkForm,
    cover: LinkForm,
    zeta: Vec<Vec<i64>>,
    proj: Vec<Vec<i64>>,
    trans: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    degree: Option<u64>,
}

impl Serialize for CoveringModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawModel {
            base: self.base.clone(),
            cover: self.cover.clone(),
            zeta: self.zeta.matrix().to_vec(),
            proj: self.proj.matrix().to_vec(),
            trans: self.trans.matrix().to_vec(),
            degree: Some(self.degree),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoveringModel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = RawModel::deserialize(d)?;
        let (v, w) = (r.base.group().clone(), r.cover.group().clone());
        let build = || -> Result<CoveringModel> {
            let zeta = Hom::new(w.clone(), w.clone(), r.zeta)?;
            let proj = Hom::new(w.clone(), v.clone(), r.proj)?;
            let trans = Hom::new(v.clone(), w.clone(), r.trans)?;
            let degree = r.degree.unwrap_or(v.p());
            CoveringModel::new(r.base.clone(), r.cover.clone(), zeta, proj, trans, degree)
        };
        build().map_err(serde::de::Error::custom)
    }
}

impl CoveringModel {
    /// Checks shapes only; the covering identities are left to [`validate_model`]
    /// so that broken models can still be inspected.
    pub fn new(
        base: LinkForm,
        cover: LinkForm,
        zeta: Hom,
        proj: Hom,
        trans: Hom,
        degree: u64,
    ) -> Result<Self> {
        let (v, w) = (base.group(), cover.group());
        if v.p() != w.p() {
            return invalid("base and cover forms live over different primes");
        }
        if zeta.source() != w || zeta.target() != w {
            return invalid("zeta must be an endomorphism of the cover group");
        }
        if proj.source() != w || proj.target() != v {
            return invalid("projection must map the cover group to the base group");
        }
        if trans.source() != v || trans.target() != w {
            return invalid("transfer must map the base group to the cover group");
        }
        if degree != 1 && degree != v.p() {
            return invalid(format!("covering degree must be 1 or {}", v.p()));
        }
        Ok(CoveringModel {
            base,
            cover,
            zeta,
            proj,
            trans,
            degree,
        })
    }

    /// The degree-one covering of a form by itself.
    pub fn identity(form: &LinkForm) -> Self {
        let id = Hom::identity(form.group());
        CoveringModel {
            base: form.clone(),
            cover: form.clone(),
            zeta: id.clone(),
            proj: id.clone(),
            trans: id,
            degree: 1,
        }
    }

    pub fn with_transfer(&self, trans: Hom) -> Result<Self> {
        let mut m = self.clone();
        if trans.source() != self.base.group() || trans.target() != self.cover.group() {
            return invalid("transfer must map the base group to the cover group");
        }
        m.trans = trans;
        Ok(m)
    }

    pub fn base(&self) -> &LinkForm {
        &self.base
    }

    pub fn cover(&self) -> &LinkForm {
        &self.cover
    }

    pub fn zeta(&self) -> &Hom {
        &self.zeta
    }

    pub fn proj(&self) -> &Hom {
        &self.proj
    }

    pub fn trans(&self) -> &Hom {
        &self.trans
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn p(&self) -> u64 {
        self.base.p()
    }

    /// `1 + zeta + ... + zeta^{degree-1}`.
    pub fn norm(&self) -> Hom {
        let w = self.cover.group();
        let mut acc = Hom::zero(w, w);
        let mut pw = Hom::identity(w);
        for _ in 0..self.degree {
            acc = acc.add(&pw).expect("endomorphisms of one group add");
            pw = self.zeta.compose(&pw).expect("endomorphisms compose");
        }
        acc
    }

    pub fn module(&self) -> Result<CpModule> {
        CpModule::new(self.cover.group().clone(), self.zeta.clone())
    }
}

/// Counterexample attached to a failed check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<GElem>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<GElem>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub key: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub checks: Vec<Check>,
    pub passed: bool,
    /// `(h_odd, h_even)` of the cover as a C_p-module, when defined.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tate: Option<(u32, u32)>,
}

impl Verdict {
    fn new(checks: Vec<Check>, tate: Option<(u32, u32)>) -> Self {
        let passed = checks.iter().all(|c| c.holds);
        Verdict {
            checks,
            passed,
            tate,
        }
    }

    pub fn check(&self, key: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.key == key)
    }

    pub fn holds(&self, key: &str) -> bool {
        self.check(key).is_some_and(|c| c.holds)
    }
}

fn show(x: &GElem) -> String {
    format!("{:?}", x.0)
}

fn pass(key: &str) -> Check {
    Check {
        key: key.into(),
        holds: true,
        witness: None,
    }
}

fn fail(key: &str, x: Option<GElem>, y: Option<GElem>, lhs: String, rhs: String) -> Check {
    Check {
        key: key.into(),
        holds: false,
        witness: Some(Witness { x, y, lhs, rhs }),
    }
}

fn flag(key: &str, holds: bool, lhs: impl FnOnce() -> (String, String)) -> Check {
    if holds {
        pass(key)
    } else {
        let (l, r) = lhs();
        fail(key, None, None, l, r)
    }
}

/// Compares two maps with the same source on its basis.
fn maps_agree(key: &str, f: &Hom, g: &Hom) -> Check {
    let src = f.source();
    for i in 0..src.rank() {
        let x = src.basis(i);
        let (a, b) = (f.apply(&x), g.apply(&x));
        if a != b {
            return fail(key, Some(x), None, show(&a), show(&b));
        }
    }
    pass(key)
}

fn basis(g: &PGroup) -> Vec<GElem> {
    (0..g.rank()).map(|i| g.basis(i)).collect()
}

fn nondegenerate_check(key: &str, f: &LinkForm) -> Check {
    let adj = f.adjoint();
    match adj.kernel_generators().into_iter().next() {
        None if adj.is_bijective() => pass(key),
        Some(x) => fail(key, Some(x), None, "radical element".into(), "0".into()),
        None => fail(key, None, None, "adjoint not bijective".into(), String::new()),
    }
}

/// Checks every covering identity, each with a witness on failure.
pub fn validate_model(m: &CoveringModel) -> Result<Verdict> {
    let (v, w) = (m.base.group(), m.cover.group());
    let mut checks = Vec::new();

    let zd = m.zeta.pow(m.degree as u32)?;
    checks.push(maps_agree("zeta_order", &zd, &Hom::identity(w)));

    let mut inv = pass("cover_form_invariant");
    'outer: for x in basis(w) {
        for y in basis(w) {
            let a = m.cover.pair(&m.zeta.apply(&x), &m.zeta.apply(&y));
            let b = m.cover.pair(&x, &y);
            if a != b {
                inv = fail(
                    "cover_form_invariant",
                    Some(x),
                    Some(y),
                    a.to_string(),
                    b.to_string(),
                );
                break 'outer;
            }
        }
    }
    checks.push(inv);

    checks.push(maps_agree(
        "projection_invariant",
        &m.proj.compose(&m.zeta)?,
        &m.proj,
    ));

    let exhaustive = w.order() <= EXHAUSTIVE_ORDER && v.order() <= EXHAUSTIVE_ORDER;
    let (xs, ys): (Vec<GElem>, Vec<GElem>) = if exhaustive {
        (w.elements().collect(), v.elements().collect())
    } else {
        (basis(w), basis(v))
    };
    let ty: Vec<GElem> = ys.iter().map(|y| m.trans.apply(y)).collect();
    let mut rec = pass(if exhaustive {
        "reciprocity"
    } else {
        "reciprocity_on_basis"
    });
    'rec: for x in &xs {
        let px = m.proj.apply(x);
        for (y, t) in ys.iter().zip(&ty) {
            let a = m.base.pair(&px, y);
            let b = m.cover.pair(x, t);
            if a != b {
                rec = fail(
                    &rec.key,
                    Some(x.clone()),
                    Some(y.clone()),
                    a.to_string(),
                    b.to_string(),
                );
                break 'rec;
            }
        }
    }
    checks.push(rec);

    checks.push(maps_agree(
        "transfer_after_projection_is_norm",
        &m.trans.compose(&m.proj)?,
        &m.norm(),
    ));
    checks.push(maps_agree(
        "projection_after_transfer_is_degree",
        &m.proj.compose(&m.trans)?,
        &Hom::scalar(v, m.degree as i64),
    ));
    checks.push(nondegenerate_check("base_nondegenerate", &m.base));
    checks.push(nondegenerate_check("cover_nondegenerate", &m.cover));

    let mut tate = None;
    if checks[0].holds {
        if let Ok(module) = m.module() {
            let t = tate_cohomology(&module)?;
            tate = Some((t.h_odd, t.h_even));
            checks.push(flag("herbrand_quotient_one", t.h_odd == t.h_even, || {
                (t.h_odd.to_string(), t.h_even.to_string())
            }));
        }
    }
    Ok(Verdict::new(checks, tate))
}

fn tate_pair(m: &CoveringModel) -> Result<(u32, u32)> {
    let t = tate_cohomology(&m.module()?)?;
    Ok((t.h_odd, t.h_even))
}

/// Equality of two subgroups of `g` given by generators.
fn same_subgroup(g: &PGroup, a: &[GElem], b: &[GElem]) -> bool {
    let sa = Subquotient::new(g, a, &[]);
    let sb = Subquotient::new(g, b, &[]);
    sa.group().order() == sb.group().order() && b.iter().all(|x| sa.coords(x).is_some())
}

fn fixed_generators(m: &CoveringModel) -> Result<Vec<GElem>> {
    let d = m.zeta.sub(&Hom::identity(m.cover.group()))?;
    Ok(d.kernel_generators())
}

/// An orthogonal generating set of a nondegenerate form, each with a flag
/// telling whether it spans an anisotropic cyclic summand.
fn orthogonal_generators(f: &LinkForm) -> Vec<(GElem, bool)> {
    let g = f.group();
    let diagonal = (0..g.rank()).all(|i| (0..g.rank()).all(|j| i == j || f.gram()[i][j].is_zero()));
    if diagonal {
        return basis(g).into_iter().map(|x| (x, true)).collect();
    }
    if f.p() == 2 {
        if let Ok(TwoAdicNormalForm::Classified { blocks }) = normalize_two(f) {
            return blocks
                .into_iter()
                .flat_map(|b| match b {
                    TwoAdicBlock::Diagonal { generator, .. } => vec![(generator, true)],
                    TwoAdicBlock::Hyperbolic { first, second } => {
                        vec![(first, false), (second, false)]
                    }
                })
                .collect();
        }
    } else if let Ok(d) = diagonalize_odd(f) {
        return d.basis.into_iter().map(|x| (x, true)).collect();
    }
    basis(g).into_iter().map(|x| (x, false)).collect()
}

/// Structure checks for a covering whose defining character is `(., z)` with
/// `z` of order p and `(z, z) != 0`.
pub fn verify_anisotropic(m: &CoveringModel, z: &GElem) -> Result<Verdict> {
    let (v, w) = (m.base.group(), m.cover.group());
    let p = m.p();
    if !v.contains(z) || v.elem_order(z) != p as u128 {
        return invalid("z must have order p in the base group");
    }
    if m.base.pair(z, z).is_zero() {
        return invalid("z is isotropic; use the isotropic verifier");
    }
    for x in basis(w) {
        if !m.base.pair(&m.proj.apply(&x), z).is_zero() {
            return invalid("projection leaves the kernel of (., z): wrong defining character");
        }
    }
    let comp = orthogonal_complement(&m.base, std::slice::from_ref(z))?;
    let gens: Vec<(GElem, bool)> = orthogonal_generators(&comp.form)
        .into_iter()
        .map(|(x, a)| (comp.embedding.apply(&x), a))
        .collect();
    let module = m.module()?;
    let mut checks = Vec::new();

    let tate = tate_pair(m)?;
    checks.push(flag("tate_vanishing", tate == (0, 0), || {
        (format!("{tate:?}"), "(0, 0)".into())
    }));

    let img = m.proj.image().0.order();
    checks.push(flag(
        "projection_image",
        img == comp.form.group().order(),
        || (img.to_string(), comp.form.group().order().to_string()),
    ));

    let mut ord = pass("transfer_order");
    for (e, aniso) in &gens {
        let te = m.trans.apply(e);
        let want = if *aniso {
            m.base.pair(e, e).order() as u128
        } else {
            v.elem_order(e)
        };
        let got = w.elem_order(&te);
        if got != want {
            ord = fail(
                "transfer_order",
                Some(e.clone()),
                None,
                got.to_string(),
                want.to_string(),
            );
            break;
        }
    }
    checks.push(ord);

    let t_on = m.trans.compose(&comp.embedding)?;
    checks.push(match t_on.kernel_generators().into_iter().next() {
        None => pass("transfer_injective_on_complement"),
        Some(k) => fail(
            "transfer_injective_on_complement",
            Some(comp.embedding.apply(&k)),
            None,
            "t(x) = 0".into(),
            "x = 0".into(),
        ),
    });

    let t_img: Vec<GElem> = gens.iter().map(|(e, _)| m.trans.apply(e)).collect();
    let fixed = fixed_generators(m)?;
    checks.push(flag(
        "invariants_are_transfer_image",
        same_subgroup(w, &fixed, &t_img),
        || ("W^zeta".into(), "t(z^perp)".into()),
    ));

    let lifts: Option<Vec<GElem>> = gens.iter().map(|(e, _)| m.proj.preimage(e)).collect();
    match lifts {
        None => {
            checks.push(fail(
                "lifts_generate",
                None,
                None,
                "no lift".into(),
                "lift exists".into(),
            ));
        }
        Some(lifts) => {
            let span = module.lambda_span(&lifts);
            checks.push(flag(
                "lifts_generate",
                span.group().order() == w.order(),
                || (span.group().order().to_string(), w.order().to_string()),
            ));
            let mut total: u128 = 1;
            let mut coinv_ok = true;
            let mut coinv_witness = None;
            for ((e, _), l) in gens.iter().zip(&lifts) {
                let s = module.lambda_span(std::slice::from_ref(l));
                total = total.saturating_mul(s.group().order());
                let piece = CpModule::from_subquotient(&s, m.zeta())?;
                let c = piece.one_minus_zeta().cokernel().0;
                if c.rank() > 1 || c.order() != v.elem_order(e) {
                    coinv_ok = false;
                    coinv_witness.get_or_insert((e.clone(), c.to_string()));
                }
            }
            checks.push(flag("direct_sum_of_cyclics", total == w.order(), || {
                (total.to_string(), w.order().to_string())
            }));
            checks.push(match coinv_witness {
                Some((e, c)) if !coinv_ok => fail(
                    "coinvariants_match_complement",
                    Some(e.clone()),
                    None,
                    c,
                    format!("Z/{}", v.elem_order(&e)),
                ),
                _ => pass("coinvariants_match_complement"),
            });
        }
    }
    Ok(Verdict::new(checks, Some(tate)))
}

/// Structure checks when the defining character kills every basis vector but
/// `e_s`, which has order `p^{k_s}`, `k_s >= 2`, and is orthogonal to the rest.
pub fn verify_shrinking(m: &CoveringModel, s: usize) -> Result<Verdict> {
    let (v, w) = (m.base.group(), m.cover.group());
    let p = m.p() as i64;
    if s >= v.rank() {
        return invalid("index out of range for the base group");
    }
    let ks = v.exponents()[s];
    if ks < 2 {
        return invalid("the shrinking summand must have order at least p^2");
    }
    if (0..v.rank()).any(|i| i != s && !m.base.gram()[s][i].is_zero()) {
        return invalid("e_s is not orthogonal to the other basis vectors");
    }
    for x in basis(w) {
        if m.proj.apply(&x).0[s] % p != 0 {
            return invalid("projection leaves the kernel of the character: wrong defining character");
        }
    }
    let module = m.module()?;
    let es = v.basis(s);
    let vs = m.trans.apply(&es);
    let mut checks = Vec::new();

    let want = (p as u128).pow(ks - 1);
    let got = w.elem_order(&vs);
    checks.push(flag("split_summand_order", got == want, || {
        (got.to_string(), want.to_string())
    }));
    checks.push(flag(
        "trivial_action_on_split_summand",
        m.zeta.apply(&vs) == vs,
        || (show(&m.zeta.apply(&vs)), show(&vs)),
    ));

    let others: Vec<GElem> = (0..v.rank()).filter(|&i| i != s).map(|i| v.basis(i)).collect();
    let lifts: Option<Vec<GElem>> = others.iter().map(|e| m.proj.preimage(e)).collect();
    let split = match lifts {
        None => false,
        Some(lifts) => {
            let span = module.lambda_span(&lifts);
            let sg: Vec<GElem> = (0..span.group().rank())
                .map(|i| span.lift(&span.group().basis(i)))
                .collect();
            let orth = sg.iter().all(|x| m.cover.pair(x, &vs).is_zero());
            let mut all = sg.clone();
            all.push(vs.clone());
            let whole = Subquotient::new(w, &all, &[]).group().order() == w.order();
            orth && whole && span.group().order().saturating_mul(got) == w.order()
        }
    };
    checks.push(flag("orthogonal_splitting", split, || {
        ("not an orthogonal direct sum".into(), "W = S + <t e_s>".into())
    }));

    let ker = m.trans.kernel().0.order();
    checks.push(flag("transfer_kernel_order_p", ker == p as u128, || {
        (ker.to_string(), p.to_string())
    }));

    let t_img: Vec<GElem> = basis(v).iter().map(|e| m.trans.apply(e)).collect();
    checks.push(flag(
        "invariants_are_transfer_image",
        same_subgroup(w, &fixed_generators(m)?, &t_img),
        || ("W^zeta".into(), "t(V)".into()),
    ));
    let tate = tate_pair(m)?;
    Ok(Verdict::new(checks, Some(tate)))
}

/// Structure checks for a covering whose defining character is `(., e_b)`,
/// where `(e_a, e_b)` is a hyperbolic pair of order-p basis vectors.
pub fn verify_isotropic(m: &CoveringModel, pair: (usize, usize)) -> Result<Verdict> {
    let (v, w) = (m.base.group(), m.cover.group());
    let p = m.p();
    let (a, b) = pair;
    let r = v.rank();
    if a >= r || b >= r || a == b {
        return invalid("hyperbolic pair indices out of range");
    }
    let g = m.base.gram();
    let hyperbolic = v.exponents()[a] == 1
        && v.exponents()[b] == 1
        && g[a][a].is_zero()
        && g[b][b].is_zero()
        && !g[a][b].is_zero()
        && (0..r).all(|i| i == a || i == b || (g[i][a].is_zero() && g[i][b].is_zero()));
    if !hyperbolic {
        return invalid("the chosen basis vectors do not form an orthogonal hyperbolic pair");
    }
    let eb = v.basis(b);
    for x in basis(w) {
        if !m.base.pair(&m.proj.apply(&x), &eb).is_zero() {
            return invalid("projection leaves the kernel of (., e_b): wrong defining character");
        }
    }
    let module = m.module()?;
    let mut checks = Vec::new();
    let tate = tate_pair(m)?;
    checks.push(flag("tate_one_one", tate == (1, 1), || {
        (format!("{tate:?}"), "(1, 1)".into())
    }));

    let t_inv = m.trans.apply(&v.basis(a));
    let ord_t = w.elem_order(&t_inv);
    checks.push(flag("invariant_order_p", ord_t == p as u128, || {
        (ord_t.to_string(), p.to_string())
    }));

    // sum a_i t(e_i) + a T = 0 forces p^{k_i} | a_i and p | a
    let mut others: Vec<usize> = (0..r).filter(|&i| i != a && i != b).collect();
    others.sort_by(|&i, &j| v.exponents()[j].cmp(&v.exponents()[i]));
    let mut exps: Vec<u32> = others.iter().map(|&i| v.exponents()[i]).collect();
    exps.push(1);
    let src = PGroup::new(p, exps)?;
    let mut imgs: Vec<GElem> = others.iter().map(|&i| m.trans.apply(&v.basis(i))).collect();
    imgs.push(t_inv.clone());
    let rel = Hom::from_images(&src, w, &imgs);
    checks.push(match rel {
        Ok(h) => match h.kernel_generators().into_iter().next() {
            None => pass("transfer_relations"),
            Some(k) => fail(
                "transfer_relations",
                Some(k),
                None,
                "nontrivial relation".into(),
                "none".into(),
            ),
        },
        Err(_) => fail(
            "transfer_relations",
            None,
            None,
            "transfer images have too large order".into(),
            "orders dividing p^{k_i}".into(),
        ),
    });
    checks.push(flag(
        "invariants_generated",
        same_subgroup(w, &fixed_generators(m)?, &imgs),
        || ("W^zeta".into(), "<t(e_i), T>".into()),
    ));

    let lifts: Option<Vec<GElem>> = others
        .iter()
        .map(|&i| m.proj.preimage(&v.basis(i)))
        .collect();
    let lifts = lifts.unwrap_or_default();
    let span = module.lambda_span(&lifts);
    let sg: Vec<GElem> = (0..span.group().rank())
        .map(|i| span.lift(&span.group().basis(i)))
        .collect();
    let complement = if sg.is_empty() {
        Some(basis(w))
    } else {
        orthogonal_complement(&m.cover, &sg)
            .ok()
            .map(|c| basis(c.form.group()).iter().map(|x| c.embedding.apply(x)).collect())
    };
    checks.push(flag("lift_span_nondegenerate", complement.is_some(), || {
        ("degenerate".into(), "nondegenerate".into())
    }));
    let comp = complement.unwrap_or_default();
    let n = m.norm();
    let killed = comp.iter().find(|x| !w.is_zero(&n.apply(x)));
    checks.push(match killed {
        None => pass("complement_is_norm_annihilated"),
        Some(x) => fail(
            "complement_is_norm_annihilated",
            Some(x.clone()),
            None,
            show(&n.apply(x)),
            "0".into(),
        ),
    });
    checks.push(flag(
        "invariant_in_complement",
        sg.iter().all(|s| m.cover.pair(s, &t_inv).is_zero()),
        || ("(T, S) != 0".into(), "0".into()),
    ));
    let proj_comp: Vec<GElem> = comp.iter().map(|x| m.proj.apply(x)).collect();
    let reaches = Subquotient::new(v, &proj_comp, &[]).coords(&eb).is_some();
    checks.push(flag("complement_lifts_character_vector", reaches, || {
        ("e_b not in pi(S^perp)".into(), "e_b".into())
    }));
    Ok(Verdict::new(checks, Some(tate)))
}

/// One summand of the cover assembled from local coordinates.
struct Piece {
    exps: Vec<u32>,
    zeta: Vec<Vec<i64>>,
    gram: Vec<Vec<Qz>>,
    /// Image in `V` of each local basis vector.
    proj: Vec<GElem>,
    /// `(base index, local element)` contributions to the transfer.
    trans: Vec<(usize, GElem)>,
}

/// `Lambda / p^k` with the regular form `(zeta^a v, zeta^b v) = delta_ab a/p^k`.
fn free_piece(v: &PGroup, i: usize, a: i128) -> Piece {
    let p = v.p() as usize;
    let k = v.exponents()[i];
    let mut zeta = vec![vec![0i64; p]; p];
    for j in 0..p {
        zeta[(j + 1) % p][j] = 1;
    }
    let mut gram = vec![vec![Qz::ZERO; p]; p];
    for (j, row) in gram.iter_mut().enumerate() {
        row[j] = Qz::new(a, (p as i128).pow(k));
    }
    Piece {
        exps: vec![k; p],
        zeta,
        gram,
        proj: vec![v.basis(i); p],
        trans: vec![(i, GElem(vec![1; p]))],
    }
}

fn assemble(base: LinkForm, pieces: Vec<Piece>) -> Result<CoveringModel> {
    let v = base.group().clone();
    let p = v.p();
    let mut exps: Vec<u32> = Vec::new();
    let mut offsets = Vec::new();
    for pc in &pieces {
        offsets.push(exps.len());
        exps.extend(&pc.exps);
    }
    let n = exps.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| exps[b].cmp(&exps[a]));
    let mut pos = vec![0; n];
    for (k, &o) in order.iter().enumerate() {
        pos[o] = k;
    }
    let w = PGroup::new(p, order.iter().map(|&o| exps[o]).collect())?;
    let mut zeta = vec![vec![0i64; n]; n];
    let mut gram = vec![vec![Qz::ZERO; n]; n];
    let mut proj = vec![v.zero(); n];
    let mut trans = vec![vec![0i64; n]; v.rank()];
    for (pc, &off) in pieces.iter().zip(&offsets) {
        for i in 0..pc.exps.len() {
            for j in 0..pc.exps.len() {
                zeta[pos[off + i]][pos[off + j]] = pc.zeta[i][j];
                gram[pos[off + i]][pos[off + j]] = pc.gram[i][j];
            }
            proj[pos[off + i]] = pc.proj[i].clone();
        }
        for (vi, x) in &pc.trans {
            for (j, &c) in x.0.iter().enumerate() {
                trans[*vi][pos[off + j]] += c;
            }
        }
    }
    let cover = LinkForm::new(w.clone(), gram)?;
    let zeta = Hom::new(w.clone(), w.clone(), zeta)?;
    let proj = Hom::from_images(&w, &v, &proj)?;
    let t_images: Vec<GElem> = trans.iter().map(|c| w.reduce(c)).collect();
    let trans = Hom::from_images(&v, &w, &t_images)?;
    CoveringModel::new(base, cover, zeta, proj, trans, p)
}

fn check_blocks(p: u64, blocks: &[(u32, i128)]) -> Result<()> {
    if !is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    if blocks.iter().any(|&(_, a)| a.rem_euclid(p as i128) == 0) {
        return invalid("diagonal entries must be units");
    }
    Ok(())
}

/// Model over `V = (+) <a_i/p^{k_i}> (+) <a/p>` with defining character
/// `(., z)`, `z` the last basis vector. The cover is a sum of free
/// `Z/p^{k_i}[C_p]` modules with the regular form. Returns the model and `z`.
pub fn build_anisotropic(
    p: u64,
    blocks: &[(u32, i128)],
    z_unit: i128,
) -> Result<(CoveringModel, GElem)> {
    check_blocks(p, blocks)?;
    check_blocks(p, &[(1, z_unit)])?;
    let mut entries = blocks.to_vec();
    entries.push((1, z_unit));
    let base = LinkForm::diagonal(p, &entries)?;
    let v = base.group().clone();
    let pieces = blocks
        .iter()
        .enumerate()
        .map(|(i, &(_, a))| free_piece(&v, i, a))
        .collect();
    let z = v.basis(blocks.len());
    Ok((assemble(base, pieces)?, z))
}

/// The smallest twisted instance for p = 2: `W = Z/2^k` with
/// `zeta = 2^{k-1} - 1` and form `<1/2^k>`, over `V = <1/2> (+) <1/2>` with
/// `z` the second generator.
pub fn build_anisotropic_twisted(k: u32) -> Result<(CoveringModel, GElem)> {
    if !(3..=30).contains(&k) {
        return invalid("the twisted cover needs 3 <= k <= 30");
    }
    let base = LinkForm::diagonal(2, &[(1, 1), (1, 1)])?;
    let v = base.group().clone();
    let half = 1i64 << (k - 1);
    let piece = Piece {
        exps: vec![k],
        zeta: vec![vec![half - 1]],
        gram: vec![vec![Qz::new(1, 1i128 << k)]],
        proj: vec![v.basis(0)],
        trans: vec![(0, GElem(vec![half]))],
    };
    let z = v.basis(1);
    Ok((assemble(base, vec![piece])?, z))
}

/// Model for the shrinking case over `V = (+) <a_i/p^{k_i}>`, with the
/// character nonzero only on `e_s`: free pieces for `i != s` and a trivial
/// `Z/p^{k_s - 1}` carrying `<a_s/p^{k_s-1}>`.
pub fn build_shrinking(p: u64, blocks: &[(u32, i128)], s: usize) -> Result<CoveringModel> {
    check_blocks(p, blocks)?;
    if s >= blocks.len() {
        return invalid("shrinking index out of range");
    }
    let (ks, a_s) = blocks[s];
    if ks < 2 {
        return invalid("the shrinking summand must have order at least p^2");
    }
    let base = LinkForm::diagonal(p, blocks)?;
    let v = base.group().clone();
    let mut pieces: Vec<Piece> = blocks
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != s)
        .map(|(i, &(_, a))| free_piece(&v, i, a))
        .collect();
    pieces.push(Piece {
        exps: vec![ks - 1],
        zeta: vec![vec![1]],
        gram: vec![vec![Qz::new(a_s, (p as i128).pow(ks - 1))]],
        proj: vec![v.scale(p as i64, &v.basis(s))],
        trans: vec![(s, GElem(vec![1]))],
    });
    assemble(base, pieces)
}

/// Largest number of candidate Gram matrices tried on the open summand.
const GRAM_SEARCH_LIMIT: u128 = 1 << 22;

/// An invariant nondegenerate symmetric form on `module` with
/// `(x, T) = eps(x)/p`, where `eps` is the coinvariant map and `T` spans the
/// invariants.
fn open_summand_form(
    module: &CpModule,
    eps: &Hom,
    t: &GElem,
) -> Result<Option<LinkForm>> {
    let g = module.group();
    let p = g.p() as i128;
    let r = g.rank();
    let cells: Vec<(usize, usize)> = (0..r).flat_map(|i| (i..r).map(move |j| (i, j))).collect();
    let sizes: Vec<i128> = cells
        .iter()
        .map(|&(i, j)| p.pow(g.exponents()[i].min(g.exponents()[j])))
        .collect();
    let total = sizes.iter().try_fold(1u128, |acc, &s| acc.checked_mul(s as u128));
    if total.map_or(true, |t| t > GRAM_SEARCH_LIMIT) {
        return Err(Error::Resource("gram search space too large".into()));
    }
    let mut digits = vec![0i128; cells.len()];
    loop {
        let mut gram = vec![vec![Qz::ZERO; r]; r];
        for ((&(i, j), &d), &s) in cells.iter().zip(&digits).zip(&sizes) {
            gram[i][j] = Qz::new(d, s);
            gram[j][i] = gram[i][j];
        }
        let f = LinkForm::new(g.clone(), gram)?;
        let pairs_t = (0..r).all(|i| {
            let x = g.basis(i);
            f.pair(&x, t) == Qz::new(eps.apply(&x).0[0] as i128, p)
        });
        if pairs_t && f.is_invariant_under(module.zeta()) && f.is_nondegenerate() {
            return Ok(Some(f));
        }
        let mut c = 0;
        loop {
            if c == digits.len() {
                return Ok(None);
            }
            digits[c] += 1;
            if digits[c] < sizes[c] {
                break;
            }
            digits[c] = 0;
            c += 1;
        }
    }
}

/// Model over `V = (+) <a_i/p^{k_i}> (+) H` with `H` the hyperbolic plane on
/// `(e_a, e_b)` and defining character `(., e_b)`. The open summand is
/// `Z/2^m` with `zeta = -1` for p = 2 and `O/pi^m` (m odd, at least 3) for odd p.
/// Returns the model and the pair indices.
pub fn build_isotropic(
    p: u64,
    blocks: &[(u32, i128)],
    m: u32,
) -> Result<(CoveringModel, (usize, usize))> {
    check_blocks(p, blocks)?;
    let s = blocks.len();
    let mut exps: Vec<u32> = blocks.iter().map(|b| b.0).collect();
    exps.extend([1, 1]);
    let vg = PGroup::new(p, exps)?;
    let mut gram = vec![vec![Qz::ZERO; s + 2]; s + 2];
    for (i, &(k, a)) in blocks.iter().enumerate() {
        gram[i][i] = Qz::new(a, (p as i128).pow(k));
    }
    gram[s][s + 1] = Qz::new(1, p as i128);
    gram[s + 1][s] = gram[s][s + 1];
    let base = LinkForm::new(vg.clone(), gram)?;
    let (ea, eb) = (s, s + 1);
    let mut pieces: Vec<Piece> = blocks
        .iter()
        .enumerate()
        .map(|(i, &(_, a))| free_piece(&vg, i, a))
        .collect();
    if p == 2 {
        if !(2..=30).contains(&m) {
            return invalid("the open summand Z/2^m needs 2 <= m <= 30");
        }
        pieces.push(Piece {
            exps: vec![m],
            zeta: vec![vec![-1]],
            gram: vec![vec![Qz::new(1, 1i128 << m)]],
            proj: vec![vg.basis(eb)],
            trans: vec![(ea, GElem(vec![1i64 << (m - 1)]))],
        });
    } else {
        if m < 3 || m % 2 == 0 {
            return invalid("the open summand O/pi^m needs odd m >= 3 for odd p");
        }
        let spec = BlockSpec::open(
            p,
            &[Block {
                kind: BlockKind::R,
                n: m,
            }],
            &[],
        );
        let module = build_block_module(&spec)?;
        let g = module.group().clone();
        let (_, eps) = module.one_minus_zeta().cokernel();
        let fixed = module.one_minus_zeta().kernel();
        let t = fixed.1.column(0);
        // normalise eps so that it takes the value 1 somewhere
        let form = open_summand_form(&module, &eps, &t)?.ok_or_else(|| {
            Error::Invariant("no invariant form pairs the open summand with its invariant".into())
        })?;
        pieces.push(Piece {
            exps: g.exponents().to_vec(),
            zeta: module.zeta().matrix().to_vec(),
            gram: form.gram().to_vec(),
            proj: (0..g.rank())
                .map(|i| vg.scale(eps.apply(&g.basis(i)).0[0], &vg.basis(eb)))
                .collect(),
            trans: vec![(ea, t)],
        });
    }
    Ok((assemble(base, pieces)?, (ea, eb)))
}

/// Shape of the cover's homology predicted from the defining element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtensionShape {
    AllOpen,
    OneClosedPlusOpens,
}

impl ExtensionShape {
    /// Tate table `(h_odd, h_even)` a cover of this shape must have.
    pub fn expected_tate(self) -> (u32, u32) {
        match self {
            ExtensionShape::AllOpen => (1, 1),
            ExtensionShape::OneClosedPlusOpens => (0, 0),
        }
    }

    pub fn consistent_with(self, class: &CohomologicalClass) -> bool {
        match (self, class) {
            (ExtensionShape::AllOpen, CohomologicalClass::OpenLike { count, .. }) => *count == 1,
            (ExtensionShape::AllOpen, CohomologicalClass::MixedReport { h, .. }) => *h == 1,
            (ExtensionShape::OneClosedPlusOpens, CohomologicalClass::CohomologicallyTrivial) => {
                true
            }
            _ => false,
        }
    }
}

pub fn predict_extension_shape(v: &LinkForm, z: &GElem) -> Result<ExtensionShape> {
    let g = v.group();
    if !g.contains(z) || g.elem_order(z) != g.p() as u128 {
        return invalid("z must have order p");
    }
    Ok(if v.pair(z, z).is_zero() {
        ExtensionShape::AllOpen
    } else {
        ExtensionShape::OneClosedPlusOpens
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitClass {
    /// Any split anisotropic summand for an odd prime.
    OddPrime,
    /// Action by `-1`: allowed, the extension group is quaternionic.
    MinusOne,
    /// Trivial action.
    TrivialAction,
    /// Action by `2^{n-1} +- 1`.
    Twisted,
}

/// Mod-2 cohomology of the split extension `C_{2^n} ⋊ C_2` for the summand's action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionGroupCheck {
    pub group_order: usize,
    pub twist: usize,
    pub dims: Vec<usize>,
    /// Periodic groups have `dim H^3(P; F_2) = 1`.
    pub periodic: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitSummand {
    pub generator: GElem,
    pub order: u128,
    pub multiplier: i64,
    pub tate: (u32, u32),
    pub class: SplitClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionGroupCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitReport {
    pub p: u64,
    pub summands: Vec<SplitSummand>,
    /// An odd-prime split anisotropic summand exists.
    pub violation: bool,
    /// A 2-primary summand with action other than `-1` exists.
    pub flagged: bool,
    pub consistent: bool,
}

/// Largest extension group whose cohomology is computed for a flagged summand.
const EXTENSION_ORDER_LIMIT: usize = 32;

/// Searches invariant cyclic subgroups `<x>` with `ord (x,x) = ord x`.
pub fn obstruct_split_anisotropic(a: &FormedCpAction) -> Result<SplitReport> {
    let f = a.form();
    let g = f.group();
    let p = g.p();
    if !f.is_nondegenerate() {
        return invalid("the invariant form is degenerate");
    }
    if g.log_order() > 6 {
        return Err(Error::Resource(format!(
            "exhaustive search covers |W| <= {p}^6"
        )));
    }
    let zeta = a.zeta();
    let mut seen: HashSet<GElem> = HashSet::new();
    let mut summands = Vec::new();
    let mut cache: BTreeMap<(usize, usize), ExtensionGroupCheck> = BTreeMap::new();
    for x in g.elements() {
        if g.is_zero(&x) || seen.contains(&x) {
            continue;
        }
        let ord = g.elem_order(&x);
        for u in 1..ord as i64 {
            if u % p as i64 != 0 {
                seen.insert(g.scale(u, &x));
            }
        }
        if f.pair(&x, &x).order() as u128 != ord {
            continue;
        }
        let zx = zeta.apply(&x);
        let Some(u) = (0..ord as i64).find(|&u| g.scale(u, &x) == zx) else {
            continue;
        };
        let cyc = PGroup::new(p, vec![ord.ilog(p as u128)])?;
        let module = CpModule::new(cyc.clone(), Hom::scalar(&cyc, u))?;
        let t = tate_cohomology(&module)?;
        let class = if p != 2 {
            SplitClass::OddPrime
        } else if (u + 1) % ord as i64 == 0 {
            SplitClass::MinusOne
        } else if u == 1 {
            SplitClass::TrivialAction
        } else {
            SplitClass::Twisted
        };
        let extension = match class {
            SplitClass::TrivialAction | SplitClass::Twisted
                if 2 * ord as usize <= EXTENSION_ORDER_LIMIT =>
            {
                let key = (ord as usize, u as usize);
                if let std::collections::btree_map::Entry::Vacant(e) = cache.entry(key) {
                    let grp = GroupTable::split_metacyclic(key.0, key.1)?;
                    let dims = cohomology_fp(&grp, 2, 3)?.dims;
                    e.insert(ExtensionGroupCheck {
                        group_order: grp.order(),
                        twist: key.1,
                        periodic: dims[3] == 1,
                        dims,
                    });
                }
                cache.get(&key).cloned()
            }
            _ => None,
        };
        summands.push(SplitSummand {
            generator: x.clone(),
            order: ord,
            multiplier: u,
            tate: (t.h_odd, t.h_even),
            class,
            extension,
        });
    }
    let violation = summands.iter().any(|s| s.class == SplitClass::OddPrime);
    let flagged = summands
        .iter()
        .any(|s| matches!(s.class, SplitClass::TrivialAction | SplitClass::Twisted));
    Ok(SplitReport {
        p,
        summands,
        violation,
        flagged,
        consistent: !violation && !flagged,
    })
}

/// Predicted pro-p completion for a small first homology group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "family")]
pub enum H1Prediction {
    FiniteCyclic,
    /// `Q_{2^n}` for some `n >= min_log_order`.
    GeneralizedQuaternion { min_log_order: u32 },
    Quaternion8,
    OutsideClassifiedRange,
}

pub fn small_h1_classifier(v: &LinkForm) -> H1Prediction {
    let g = v.group();
    if g.rank() == 1 {
        return H1Prediction::FiniteCyclic;
    }
    if g.p() == 2 && g.exponents() == [1, 1] && v.is_nondegenerate() {
        let anisotropic = g.elements().any(|x| !v.pair(&x, &x).is_zero());
        return if anisotropic {
            H1Prediction::GeneralizedQuaternion { min_log_order: 4 }
        } else {
            H1Prediction::Quaternion8
        };
    }
    H1Prediction::OutsideClassifiedRange
}

/// Lower bounds along a tower of p-class field extensions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TowerSeq {
    pub p: u64,
    /// Rank lower bounds `r_1, r_2, ...`.
    pub r: Vec<u128>,
    /// `log_p` of the exponent lower bound at each level; none at level one.
    pub e: Vec<Option<u128>>,
    /// The exponent bound itself when it fits in 128 bits.
    pub e_value: Vec<Option<u128>>,
    /// Predicted `dim H^i(G; F_p)` for `i = 0..=3` at the first level.
    pub predicted_table: [u128; 4],
}

pub fn tower_bounds(r1: u64, p: u64, depth: usize) -> Result<TowerSeq> {
    if r1 < 4 {
        return invalid("rank of H_1(M; F_p) must be at least 4");
    }
    if !is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    if depth == 0 {
        return invalid("depth must be at least 1");
    }
    let overflow = || Error::Resource("rank bound exceeds 128 bits".into());
    let mut r = vec![r1 as u128];
    while r.len() < depth {
        let x = *r.last().expect("nonempty");
        let next = x.checked_mul(x - 1).ok_or_else(overflow)?.div_ceil(2);
        r.push(next);
    }
    let e: Vec<Option<u128>> = (0..depth)
        .map(|i| if i == 0 { None } else { Some(r[i - 1] - 1) })
        .collect();
    let e_value = e
        .iter()
        .map(|k| {
            k.and_then(|k| u32::try_from(k).ok())
                .and_then(|k| (p as u128).checked_pow(k))
        })
        .collect();
    Ok(TowerSeq {
        p,
        predicted_table: [1, r[0], r[0], 1],
        r,
        e,
        e_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn valid(m: &CoveringModel) {
        let v = validate_model(m).unwrap();
        assert!(v.passed, "{:#?}", v.checks.iter().filter(|c| !c.holds).collect::<Vec<_>>());
    }

    #[test]
    fn identity_covering_passes() {
        let f = LinkForm::diagonal(3, &[(2, 1), (1, 2)]).unwrap();
        valid(&CoveringModel::identity(&f));
    }

    #[test]
    fn doubled_transfer_is_caught() {
        let (m, _) = build_anisotropic_twisted(3).unwrap();
        valid(&m);
        let bad = m.with_transfer(Hom::scalar(m.cover().group(), 2).compose(m.trans()).unwrap())
            .unwrap();
        let v = validate_model(&bad).unwrap();
        let rec = v.check("reciprocity").unwrap();
        assert!(!rec.holds);
        let w = rec.witness.as_ref().unwrap();
        assert_ne!(w.lhs, w.rhs);
    }

    #[test]
    fn twisted_anisotropic_model() {
        for k in 3..=6 {
            let (m, z) = build_anisotropic_twisted(k).unwrap();
            valid(&m);
            let v = verify_anisotropic(&m, &z).unwrap();
            assert!(v.passed, "k = {k}: {:#?}", v.checks);
        }
    }

    #[test]
    fn free_anisotropic_models() {
        for (p, blocks, a) in [
            (2u64, vec![(2u32, 1i128)], 1i128),
            (2, vec![(3, 3), (1, 1)], 1),
            (3, vec![(2, 1)], 2),
            (3, vec![(1, 1), (1, 2)], 1),
            (5, vec![(1, 2)], 1),
        ] {
            let (m, z) = build_anisotropic(p, &blocks, a).unwrap();
            valid(&m);
            let v = verify_anisotropic(&m, &z).unwrap();
            assert!(v.passed, "{p} {blocks:?}: {:#?}", v.checks);
        }
    }

    #[test]
    fn shrinking_models() {
        for (p, blocks, s) in [
            (2u64, vec![(2u32, 1i128)], 0usize),
            (3, vec![(2, 1)], 0),
            (2, vec![(3, 1), (1, 1)], 0),
            (3, vec![(1, 1), (1, 1)], 0),
        ] {
            if blocks[s].0 < 2 {
                assert!(build_shrinking(p, &blocks, s).is_err());
                continue;
            }
            let m = build_shrinking(p, &blocks, s).unwrap();
            valid(&m);
            let v = verify_shrinking(&m, s).unwrap();
            assert!(v.passed, "{p} {blocks:?}: {:#?}", v.checks);
        }
    }

    #[test]
    fn isotropic_models() {
        let cases: [(u64, Vec<(u32, i128)>, u32); 3] = [
            (2, vec![], 2),
            (2, vec![(2, 1)], 3),
            (3, vec![], 3),
        ];
        for (p, blocks, m) in cases {
            let (model, pair) = build_isotropic(p, &blocks, m).unwrap();
            valid(&model);
            let v = verify_isotropic(&model, pair).unwrap();
            assert!(v.passed, "{p} {blocks:?}: {:#?}", v.checks);
        }
    }

    #[test]
    fn extension_shapes() {
        let h = LinkForm::hyperbolic(2, 1).unwrap();
        let e1 = h.group().basis(0);
        assert_eq!(predict_extension_shape(&h, &e1).unwrap(), ExtensionShape::AllOpen);
        let d = LinkForm::diagonal(2, &[(1, 1)]).unwrap();
        assert_eq!(
            predict_extension_shape(&d, &d.group().basis(0)).unwrap(),
            ExtensionShape::OneClosedPlusOpens
        );
        let c4 = LinkForm::diagonal(2, &[(2, 1)]).unwrap();
        assert!(predict_extension_shape(&c4, &c4.group().basis(0)).is_err());
    }

    #[test]
    fn small_h1() {
        let c8 = LinkForm::diagonal(2, &[(3, 1)]).unwrap();
        assert_eq!(small_h1_classifier(&c8), H1Prediction::FiniteCyclic);
        let h = LinkForm::hyperbolic(2, 1).unwrap();
        assert_eq!(small_h1_classifier(&h), H1Prediction::Quaternion8);
        let d = LinkForm::diagonal(2, &[(1, 1), (1, 1)]).unwrap();
        assert_eq!(
            small_h1_classifier(&d),
            H1Prediction::GeneralizedQuaternion { min_log_order: 4 }
        );
        let e = LinkForm::diagonal(3, &[(1, 1), (1, 1)]).unwrap();
        assert_eq!(small_h1_classifier(&e), H1Prediction::OutsideClassifiedRange);
    }

    #[test]
    fn tower() {
        let t = tower_bounds(4, 2, 5).unwrap();
        assert_eq!(t.r, vec![4, 6, 15, 105, 5460]);
        assert_eq!(t.e, vec![None, Some(3), Some(5), Some(14), Some(104)]);
        assert_eq!(t.e_value[1..4], [Some(8), Some(32), Some(1 << 14)]);
        assert_eq!(t.predicted_table, [1, 4, 4, 1]);
        assert_eq!(tower_bounds(7, 3, 1).unwrap().r, vec![7]);
        assert!(tower_bounds(3, 2, 3).is_err());
        assert!(matches!(tower_bounds(4, 2, 12), Err(Error::Resource(_))));
    }
}
