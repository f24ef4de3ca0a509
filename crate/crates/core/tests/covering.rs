use cpalg::abelian::{GElem, Hom, PGroup, Qz};
use cpalg::covering::*;
use cpalg::cpmod::{classify_cohomological, CpModule};
use cpalg::linkform::{FormedCpAction, LinkForm};
use proptest::prelude::*;

fn model_json(v: serde_json::Value) -> CoveringModel {
    serde_json::from_value(v).unwrap()
}

fn cyclic_action(p: u64, n: u32, u: i64) -> FormedCpAction {
    let f = LinkForm::diagonal(p, &[(n, 1)]).unwrap();
    let z = Hom::scalar(f.group(), u);
    FormedCpAction::new(f, z).unwrap()
}

#[test]
fn literal_round_trip() {
    let (m, _) = build_anisotropic(3, &[(2, 1)], 1).unwrap();
    let s = serde_json::to_string(&m).unwrap();
    let back: CoveringModel = serde_json::from_str(&s).unwrap();
    assert_eq!(back, m);
}

#[test]
fn identity_literal_degree_one() {
    let m = model_json(serde_json::json!({
        "base": {"group": {"p": 2, "exponents": [2]}, "gram": [["1/4"]]},
        "cover": {"group": {"p": 2, "exponents": [2]}, "gram": [["1/4"]]},
        "zeta": [[1]], "proj": [[1]], "trans": [[1]], "degree": 1
    }));
    assert!(validate_model(&m).unwrap().passed);
}

#[test]
fn tate_nonvanishing_cover_fails_anisotropic_check() {
    // trivial action on Z/4 over <1/2> + <1/2>; the covering identities hold
    let m = model_json(serde_json::json!({
        "base": {"group": {"p": 2, "exponents": [1, 1]}, "gram": [["1/2", "0"], ["0", "1/2"]]},
        "cover": {"group": {"p": 2, "exponents": [2]}, "gram": [["1/4"]]},
        "zeta": [[1]], "proj": [[1], [0]], "trans": [[2, 0]]
    }));
    assert!(validate_model(&m).unwrap().passed);
    let z = GElem(vec![0, 1]);
    let v = verify_anisotropic(&m, &z).unwrap();
    assert!(!v.passed);
    assert!(!v.holds("tate_vanishing"));
    assert_eq!(v.tate, Some((1, 1)));
    assert!(!v.holds("invariants_are_transfer_image"));
}

#[test]
fn anisotropic_preconditions() {
    let (m, z) = build_anisotropic(2, &[(2, 1)], 1).unwrap();
    let e0 = m.base().group().basis(0);
    assert!(verify_anisotropic(&m, &e0).is_err());
    let h = LinkForm::hyperbolic(2, 1).unwrap();
    let m2 = CoveringModel::identity(&h);
    assert!(verify_anisotropic(&m2, &h.group().basis(0)).is_err());
    assert!(verify_anisotropic(&m, &z).unwrap().passed);
}

#[test]
fn shrinking_examples() {
    for (p, k) in [(2u64, 2u32), (3, 2), (2, 3), (5, 2)] {
        let m = build_shrinking(p, &[(k, 1)], 0).unwrap();
        assert!(validate_model(&m).unwrap().passed);
        let v = verify_shrinking(&m, 0).unwrap();
        assert!(v.passed, "{p} {k}: {:?}", v.checks);
        let w = m.cover().group();
        assert_eq!(w, &PGroup::new(p, vec![k - 1]).unwrap());
        assert!(m.zeta().is_identity());
    }
    assert!(build_shrinking(3, &[(1, 1)], 0).is_err());
    let m = CoveringModel::identity(&LinkForm::diagonal(3, &[(1, 1)]).unwrap());
    assert!(verify_shrinking(&m, 0).is_err());
}

#[test]
fn shrinking_violation() {
    let m = model_json(serde_json::json!({
        "base": {"group": {"p": 2, "exponents": [2]}, "gram": [["1/4"]]},
        "cover": {"group": {"p": 2, "exponents": [2]}, "gram": [["1/4"]]},
        "zeta": [[1]], "proj": [[2]], "trans": [[1]]
    }));
    let v = verify_shrinking(&m, 0).unwrap();
    assert!(!v.holds("split_summand_order"));
    let w = &v.check("split_summand_order").unwrap().witness.as_ref().unwrap();
    assert_eq!((w.lhs.as_str(), w.rhs.as_str()), ("4", "2"));
    assert!(!validate_model(&m).unwrap().passed);
}

#[test]
fn isotropic_examples() {
    let (m, pair) = build_isotropic(2, &[], 2).unwrap();
    assert_eq!(m.base(), &LinkForm::hyperbolic(2, 1).unwrap());
    assert!(validate_model(&m).unwrap().passed);
    assert!(verify_isotropic(&m, pair).unwrap().passed);
    for (p, blocks, n) in [(2u64, vec![(1u32, 1i128)], 4u32), (3, vec![(1, 2)], 3), (5, vec![], 3)] {
        let (m, pair) = build_isotropic(p, &blocks, n).unwrap();
        assert!(validate_model(&m).unwrap().passed);
        let v = verify_isotropic(&m, pair).unwrap();
        assert!(v.passed, "{p}: {:?}", v.checks);
        assert!(v.holds("transfer_relations"));
    }
    assert!(build_isotropic(3, &[], 2).is_err());
}

#[test]
fn isotropic_with_free_cover_fails_tate() {
    // regular F_2[C_2] over the hyperbolic plane: Tate-trivial, and no transfer
    // can satisfy both reciprocity and t∘π = N
    let m = model_json(serde_json::json!({
        "base": {"group": {"p": 2, "exponents": [1, 1]}, "gram": [["0", "1/2"], ["1/2", "0"]]},
        "cover": {"group": {"p": 2, "exponents": [1, 1]}, "gram": [["1/2", "0"], ["0", "1/2"]]},
        "zeta": [[0, 1], [1, 0]], "proj": [[0, 0], [1, 1]], "trans": [[1, 0], [1, 0]]
    }));
    let r = validate_model(&m).unwrap();
    assert!(r.holds("reciprocity"));
    assert!(!r.holds("transfer_after_projection_is_norm"));
    let v = verify_isotropic(&m, (0, 1)).unwrap();
    assert!(!v.holds("tate_one_one"));
    assert!(!v.passed);
    let d = LinkForm::diagonal(2, &[(1, 1), (1, 1)]).unwrap();
    assert!(verify_isotropic(&CoveringModel::identity(&d), (0, 1)).is_err());
}

#[test]
fn shape_prediction_matches_constructed_covers() {
    let (m, z) = build_anisotropic(3, &[(1, 1)], 1).unwrap();
    let shape = predict_extension_shape(m.base(), &z).unwrap();
    assert_eq!(shape, ExtensionShape::OneClosedPlusOpens);
    assert!(shape.consistent_with(&classify_cohomological(&m.module().unwrap()).unwrap()));
    let (m, (_, b)) = build_isotropic(2, &[], 3).unwrap();
    let eb = m.base().group().basis(b);
    let shape = predict_extension_shape(m.base(), &eb).unwrap();
    assert_eq!(shape, ExtensionShape::AllOpen);
    assert!(shape.consistent_with(&classify_cohomological(&m.module().unwrap()).unwrap()));
}

#[test]
fn split_anisotropic_obstruction() {
    let r = obstruct_split_anisotropic(&cyclic_action(2, 3, -1)).unwrap();
    assert!(r.consistent);
    assert_eq!(r.summands.len(), 1);
    assert_eq!(r.summands[0].class, SplitClass::MinusOne);

    for n in [3u32, 4] {
        let r = obstruct_split_anisotropic(&cyclic_action(2, n, (1 << (n - 1)) + 1)).unwrap();
        assert!(r.flagged && !r.consistent);
        let s = &r.summands[0];
        assert_eq!(s.class, SplitClass::Twisted);
        assert_ne!(s.tate, (1, 1));
        let ext = s.extension.as_ref().unwrap();
        assert!(!ext.periodic, "{ext:?}");
    }

    let r = obstruct_split_anisotropic(&cyclic_action(2, 2, 1)).unwrap();
    assert_eq!(r.summands[0].class, SplitClass::TrivialAction);
    assert_eq!(r.summands[0].tate, (1, 1));
    assert!(!r.summands[0].extension.as_ref().unwrap().periodic);

    let r = obstruct_split_anisotropic(&cyclic_action(3, 1, 1)).unwrap();
    assert!(r.violation);

    // an anisotropic but not split form on Z/9 + Z/3 with trivial action
    let f = LinkForm::diagonal(3, &[(2, 1), (1, 1)]).unwrap();
    let id = Hom::identity(f.group());
    let r = obstruct_split_anisotropic(&FormedCpAction::new(f, id).unwrap()).unwrap();
    assert!(r.violation);

    let deg = LinkForm::new(PGroup::new(2, vec![1]).unwrap(), vec![vec![Qz::ZERO]]).unwrap();
    let id = Hom::identity(deg.group());
    assert!(obstruct_split_anisotropic(&FormedCpAction::new(deg, id).unwrap()).is_err());
}

#[test]
fn hyperbolic_cover_has_no_split_summand() {
    let h = LinkForm::hyperbolic(2, 1).unwrap();
    let id = Hom::identity(h.group());
    let r = obstruct_split_anisotropic(&FormedCpAction::new(h, id).unwrap()).unwrap();
    assert!(r.summands.is_empty() && r.consistent);
}

#[test]
fn tower_growth() {
    let t = tower_bounds(4, 3, 6).unwrap();
    assert!(t.r.windows(2).all(|w| w[1] > w[0]));
    assert_eq!(t.r[5], 5460 * 5459 / 2);
    assert!(t.e_value[5].is_none());
}

fn module_of(m: &CoveringModel) -> CpModule {
    m.module().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn built_models_satisfy_identities(
        p in prop::sample::select(vec![2u64, 3]),
        k in 1u32..=3,
        a in 1i128..=4,
        za in 1i128..=2,
    ) {
        let a = if a % p as i128 == 0 { a + 1 } else { a };
        let za = if za % p as i128 == 0 { 1 } else { za };
        let (m, z) = build_anisotropic(p, &[(k, a)], za).unwrap();
        prop_assert!(validate_model(&m).unwrap().passed);
        let v = verify_anisotropic(&m, &z).unwrap();
        prop_assert!(v.passed);
        let t = cpalg::cpmod::tate_cohomology(&module_of(&m)).unwrap();
        prop_assert_eq!(t.h_odd, t.h_even);
        if k >= 2 {
            let s = build_shrinking(p, &[(k, a)], 0).unwrap();
            prop_assert!(validate_model(&s).unwrap().passed);
            prop_assert!(verify_shrinking(&s, 0).unwrap().passed);
        }
    }

    #[test]
    fn perturbed_transfer_breaks_reciprocity(
        k in 3u32..=5,
        c0 in 0i64..2,
        c1 in 0i64..2,
    ) {
        let (m, _) = build_anisotropic_twisted(k).unwrap();
        let w = m.cover().group().clone();
        let v = m.base().group().clone();
        let delta = Hom::from_images(&v, &w, &[w.reduce(&[c0 << (k - 1)]), w.reduce(&[c1 << (k - 1)])]).unwrap();
        prop_assume!(!delta.is_zero());
        let bad = m.with_transfer(m.trans().add(&delta).unwrap()).unwrap();
        let r = validate_model(&bad).unwrap();
        let rec = r.check("reciprocity").unwrap();
        prop_assert!(!rec.holds);
        let wit = rec.witness.as_ref().unwrap();
        let (x, y) = (wit.x.clone().unwrap(), wit.y.clone().unwrap());
        prop_assert_ne!(
            bad.base().pair(&bad.proj().apply(&x), &y),
            bad.cover().pair(&x, &bad.trans().apply(&y))
        );
    }
}
