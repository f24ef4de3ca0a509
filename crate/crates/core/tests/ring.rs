use cpalg::abelian::{PGroup, Qz};
use cpalg::linkform::LinkForm;
use cpalg::ring::*;
use proptest::prelude::*;

fn orthonormal() -> LinkForm {
    LinkForm::diagonal(2, &[(1, 1), (1, 1), (1, 1)]).unwrap()
}

#[test]
fn survivors_satisfy_the_standing_identity_exhaustively() {
    let c = classify_trilinear(&orthonormal()).unwrap();
    for t in &c.survivors {
        for a in 0..8u8 {
            for b in 0..8u8 {
                let link = (a & b).count_ones() as u8 & 1;
                assert_eq!(t.value(a, a, b), link);
            }
        }
    }
}

#[test]
fn elimination_counts_are_traceable() {
    let c = classify_trilinear(&orthonormal()).unwrap();
    let names: Vec<&str> = c.eliminated.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(
        names,
        ["compatibility", "poincare_duality", "isotropic_kernel_rank_one", "kernel_element_shape"]
    );
    // the identity pins every value except xyz
    assert_eq!(c.eliminated[0].1, 1024 - 2);
    let json = serde_json::to_value(&c).unwrap();
    assert!(json["survivors"][0]["mu"]["xyz"].is_number());
}

#[test]
fn cyclic_squares_table() {
    let c = classify_trilinear(&orthonormal()).unwrap();
    let t = c
        .survivors
        .iter()
        .find(|t| t.basis_value(0, 1, 2) == 1)
        .unwrap();
    assert!(t.has_cyclic_squares());
    assert!(!t.has_zero_products());
    // x^2 + y^2 = xz + yz when xyz = 1
    let lhs = t.product(1, 1) ^ t.product(2, 2);
    let rhs = t.product(1, 4) ^ t.product(2, 4);
    assert_eq!(lhs, rhs);
}

#[test]
fn ring_rejects_forms_without_anisotropic_generator() {
    let g = PGroup::new(2, vec![2, 1]).unwrap();
    let f = LinkForm::new(
        g,
        vec![vec![Qz::new(1, 4), Qz::new(1, 2)], vec![Qz::new(1, 2), Qz::ZERO]],
    )
    .unwrap();
    assert!(ring_z2z4(&f).is_err());
    let ok = LinkForm::diagonal(2, &[(2, 3), (1, 1)]).unwrap();
    let r = ring_z2z4(&ok).unwrap();
    assert!(r.verified);
    assert!(r.facts.iter().any(|f| f.statement == "U^3 = 0" && f.holds));
    assert!(r.facts.iter().any(|f| f.statement == "V^2 U = 0" && f.holds));
}

#[test]
fn quaternion_and_dihedral_rings() {
    let rs = quaternion_ring_facts().unwrap();
    let fam: Vec<&str> = rs.iter().map(|r| r.family.as_str()).collect();
    assert_eq!(fam, ["Q8", "Q16", "D8"]);
    let q8 = &rs[0];
    let pair_facts = q8
        .facts
        .iter()
        .filter(|f| f.statement.starts_with("x^2 + xy + y^2"))
        .count();
    assert_eq!(pair_facts, 3);
    assert!(rs.iter().all(|r| r.verified));
}

#[test]
fn case_analysis_report_serializes() {
    let a = covering_case_analysis_z2z4(4).unwrap();
    let json = serde_json::to_value(&a).unwrap();
    assert_eq!(json["isotropic_cover"]["exponents"], serde_json::json!([1, 1, 1]));
    let survivors: Vec<PGroup> = a.survivors.clone();
    assert!(survivors.contains(&PGroup::new(2, vec![2, 2]).unwrap()));
    assert!(survivors.contains(&PGroup::new(2, vec![4, 1]).unwrap()));
    for (_, o) in &a.candidates {
        if let CandidateOutcome::Eliminated { witness, .. } = o {
            assert!(!witness.is_empty());
        }
    }
    assert!(covering_case_analysis_z2z4(1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn incompatible_tables_never_survive(bits in 0u16..1024) {
        let t = TrilinearTable::from_bits(bits);
        let compatible = (0..8u8).all(|a| (0..8u8).all(|b| {
            t.value(a, a, b) == (a & b).count_ones() as u8 & 1
        }));
        let c = classify_trilinear(&orthonormal()).unwrap();
        if !compatible {
            prop_assert!(!c.survivors.contains(&t));
        }
    }

    #[test]
    fn survivors_closed_under_permutations(p in 0usize..6, k in 0usize..2) {
        let perms: [[u8; 3]; 6] = [[1, 2, 4], [1, 4, 2], [2, 1, 4], [2, 4, 1], [4, 1, 2], [4, 2, 1]];
        let c = classify_trilinear(&orthonormal()).unwrap();
        let t = c.survivors[k].transform(&perms[p]);
        prop_assert!(c.survivors.contains(&t));
    }

    #[test]
    fn trilinear_is_symmetric(bits in 0u16..1024, a in 0u8..8, b in 0u8..8, c in 0u8..8) {
        let t = TrilinearTable::from_bits(bits);
        let v = t.value(a, b, c);
        prop_assert_eq!(v, t.value(b, a, c));
        prop_assert_eq!(v, t.value(c, b, a));
        prop_assert_eq!(t.value(a ^ b, b, c), t.value(a, b, c) ^ t.value(b, b, c));
    }
}
