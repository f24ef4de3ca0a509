use cpalg::abelian::PGroup;
use cpalg::cpmod::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod common;
use common::{chains, inner_ok};

#[test]
fn open_chains_have_tate_one_one() {
    for p in [2u64, 3, 5] {
        let max_n = if p == 5 { 2 } else { 3 };
        let mut built = 0;
        for (blocks, glues) in chains(4, max_n) {
            let spec = BlockSpec::open(p, &blocks, &glues);
            match build_block_module(&spec) {
                Ok(m) => {
                    built += 1;
                    let t = tate_cohomology(&m).unwrap();
                    assert_eq!((t.h_odd, t.h_even), (1, 1), "{spec:?}");
                }
                Err(e) => assert!(!inner_ok(&blocks), "{spec:?}: {e}"),
            }
        }
        assert!(built > 0);
    }
}

#[test]
fn closed_chains_are_cohomologically_trivial() {
    for p in [2u64, 3, 5] {
        for (blocks, glues) in chains(4, 3) {
            let ends_fibered = glues.first() == Some(&Glue::FiberedSum)
                && glues.last() == Some(&Glue::FiberedSum);
            if !ends_fibered || !inner_ok(&blocks) || p == 5 && blocks.len() > 2 {
                continue;
            }
            let ends_long = blocks[0].n >= 2 && blocks[blocks.len() - 1].n >= 2;
            for a0 in 1..p as i64 {
                for a1 in 1..p as i64 {
                    let spec = BlockSpec::closed(p, &blocks, &glues, vec![a0, a1]);
                    match build_block_module(&spec) {
                        Ok(m) => {
                            let t = tate_cohomology(&m).unwrap();
                            assert_eq!((t.h_odd, t.h_even), (0, 0), "{spec:?}");
                        }
                        Err(e) => assert!(!ends_long, "{spec:?}: {e}"),
                    }
                }
            }
        }
    }
}

#[test]
fn closed_chain_with_quadratic_relation() {
    let blocks = [
        Block { kind: BlockKind::L, n: 2 },
        Block { kind: BlockKind::R, n: 2 },
    ];
    for (p, f) in [(2u64, vec![1, 1, 1]), (2, vec![1, 0, 1]), (3, vec![1, 0, 1])] {
        let spec = BlockSpec::closed(p, &blocks, &[Glue::FiberedSum], f);
        let m = build_block_module(&spec).unwrap();
        assert_eq!(tate_cohomology(&m).unwrap().h_odd, 0);
    }
    let bad = BlockSpec::closed(3, &blocks, &[Glue::FiberedSum], vec![2, 0, 1]);
    assert!(build_block_module(&bad).is_err());
}

#[test]
fn ill_typed_gluings_are_rejected() {
    let l = Block { kind: BlockKind::L, n: 2 };
    let r = Block { kind: BlockKind::R, n: 2 };
    assert!(build_block_module(&BlockSpec::open(2, &[l, l], &[Glue::FiberedSum])).is_err());
    assert!(build_block_module(&BlockSpec::open(
        3,
        &[l, r, l],
        &[Glue::FiberedSum, Glue::FiberedSum]
    ))
    .is_err());
    let spec: Result<BlockSpec, _> =
        serde_json::from_str(r#"{"p":2,"chain":[{"kind":"L","N":1},{"kind":"R","N":1}]}"#);
    assert!(build_block_module(&spec.unwrap()).is_err());
}

#[test]
fn single_blocks() {
    let l = build_block_module(&BlockSpec::open(3, &[Block { kind: BlockKind::L, n: 2 }], &[]))
        .unwrap();
    assert_eq!(l.group(), &PGroup::cyclic(3, 2));
    assert!(l.zeta().is_identity());
    let r = build_block_module(&BlockSpec::open(2, &[Block { kind: BlockKind::R, n: 1 }], &[]))
        .unwrap();
    assert_eq!(r.group(), &PGroup::cyclic(2, 1));
    assert!(r.zeta().is_identity());
}

#[test]
fn two_opens_are_open_like() {
    let a = build_block_module(&BlockSpec::open(2, &[Block { kind: BlockKind::L, n: 1 }], &[]))
        .unwrap();
    let b = build_block_module(&BlockSpec::open(2, &[Block { kind: BlockKind::R, n: 2 }], &[]))
        .unwrap();
    let c = classify_cohomological(&a.direct_sum(&b).unwrap()).unwrap();
    assert_eq!(
        c,
        CohomologicalClass::OpenLike {
            count: 2,
            confirmed: true
        }
    );
}

#[test]
fn periodicity_report() {
    let m = CpModule::trivial_action(PGroup::cyclic(5, 1));
    let r = fp_t_module_structure(&m, 6).unwrap();
    assert!(r.periodic);
    assert!(r.dims.iter().all(|&(_, d)| d == 1));
    assert!(fp_t_module_structure(&m, 1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn herbrand_and_euler(seed in any::<u64>(), pi in 0usize..3) {
        let p = [2u64, 3, 5][pi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_module(&mut rng, p, 6);
        let t = tate_cohomology(&m).unwrap();
        prop_assert_eq!(t.h_odd, t.h_even);
        prop_assert_eq!(t.fixed.order(), t.coinv.order());
        let r = fp_t_module_structure(&m, 5).unwrap();
        prop_assert!(r.periodic);
    }

    #[test]
    fn tate_is_additive(seed in any::<u64>(), pi in 0usize..2) {
        let p = [2u64, 3][pi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_module(&mut rng, p, 4);
        let b = random_module(&mut rng, p, 4);
        let s = tate_cohomology(&a.direct_sum(&b).unwrap()).unwrap();
        let ta = tate_cohomology(&a).unwrap();
        let tb = tate_cohomology(&b).unwrap();
        prop_assert_eq!(s.h_odd, ta.h_odd + tb.h_odd);
        prop_assert_eq!(s.fixed.order(), ta.fixed.order() * tb.fixed.order());
    }
}
