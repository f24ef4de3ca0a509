//! The long exact sequence attached to a normal subgroup of index two,
//! the filtration spectral sequence for odd index, and the inequalities
//! between the Betti numbers of a group and of an index-p subgroup.

use serde::Serialize;

use super::bar::{Bar, BarDegree, Cochain, Coefficients, SubgroupMaps};
use super::fast::cohomology_fp;
use super::fp::{rank_of, Fp};
use super::group::GroupTable;
use crate::error::{invalid, invariant, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LesDegree {
    pub degree: usize,
    pub b_g: usize,
    pub b_k: usize,
    pub rank_res: usize,
    pub rank_tr: usize,
    /// Rank of cup with `s` from degree `i` to `i + 1`.
    pub rank_cup: usize,
    /// `k_i = dim ker(x s: H^i(G) -> H^{i+1}(G))`.
    pub k: usize,
    /// Exactness at `H^i(G)` between `x s` and restriction.
    pub exact_before_res: bool,
    /// Exactness at `H^i(K)`.
    pub exact_at_subgroup: bool,
    /// Exactness at `H^i(G)` between transfer and `x s`.
    pub exact_after_tr: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LesReport {
    pub group_order: usize,
    pub subgroup_order: usize,
    pub degrees: Vec<LesDegree>,
    pub exact: bool,
}

/// The subgroup as a table, its membership mask, and the index.
fn subgroup_data(g: &GroupTable, subgroup: &[usize]) -> Result<(GroupTable, Vec<usize>, Vec<bool>, usize)> {
    let mut elems = subgroup.to_vec();
    elems.sort_unstable();
    elems.dedup();
    let index = g.check_prime_index_normal(&elems)?;
    let (k, embed) = g.subgroup_table(&elems)?;
    let mut mask = vec![false; g.order()];
    for &x in &elems {
        mask[x] = true;
    }
    Ok((k, embed, mask, index))
}

/// A homomorphism `s: G -> Z/p` with the given kernel, as values.
fn defining_character(g: &GroupTable, mask: &[bool], p: usize) -> Result<Vec<u8>> {
    let chars = g.characters_mod_p(p);
    chars
        .into_iter()
        .find(|c| (0..g.order()).all(|x| (c[x] == 0) == mask[x]))
        .map_or_else(|| invariant("no character with the given kernel"), Ok)
}

fn classes(deg: &BarDegree, cochains: impl IntoIterator<Item = Cochain>) -> Result<Vec<Vec<u8>>> {
    cochains.into_iter().map(|c| deg.class_of(&c)).collect()
}

fn all_zero(vs: &[Vec<u8>]) -> bool {
    vs.iter().all(|v| v.iter().all(|&x| x == 0))
}

/// `H^i(G) -r-> H^i(K) -t-> H^i(G) -xs-> H^{i+1}(G)` for `K` of index 2,
/// with every map computed on bar cochains.
pub fn transfer_exact_sequence(g: &GroupTable, subgroup: &[usize], max_deg: usize) -> Result<LesReport> {
    let (k, embed, mask, index) = subgroup_data(g, subgroup)?;
    if index != 2 {
        return invalid("the exact sequence needs a subgroup of index 2; use the filtration for odd index");
    }
    let f = Fp::new(2);
    let big = Bar::trivial(g, 2);
    let small = Bar::trivial(&k, 2);
    let maps = SubgroupMaps::new(&big, &small, embed);
    let s = big.character(&defining_character(g, &mask, 2)?);
    let gdeg: Vec<BarDegree> = (0..=max_deg).map(|n| big.degree(n)).collect::<Result<_>>()?;
    let kdeg: Vec<BarDegree> = (0..=max_deg).map(|n| small.degree(n)).collect::<Result<_>>()?;
    let mut degrees: Vec<LesDegree> = Vec::new();
    for i in 0..=max_deg {
        let (gd, kd) = (&gdeg[i], &kdeg[i]);
        let (b_g, b_k) = (gd.betti(), kd.betti());
        let res = classes(kd, gd.reps.iter().map(|r| maps.restrict(r)))?;
        let tr = classes(gd, kd.reps.iter().map(|r| maps.transfer(r)))?;
        let tr_res = classes(gd, gd.reps.iter().map(|r| maps.transfer(&maps.restrict(r))))?;
        let rank_res = rank_of(f, b_k, res);
        let rank_tr = rank_of(f, b_g, tr);
        let cups: Vec<Cochain> = gd.reps.iter().map(|r| big.cup(&s, r)).collect();
        let k_i = big.coboundary_relations(i, &cups)?;
        let cup_tr: Vec<Cochain> = kd.reps.iter().map(|r| big.cup(&s, &maps.transfer(r))).collect();
        let cup_tr_zero = big.coboundary_relations(i, &cup_tr)? == cup_tr.len();
        let exact_before_res = if i == 0 {
            rank_res == b_g
        } else {
            let prev = &gdeg[i - 1];
            let res_cup = classes(kd, prev.reps.iter().map(|r| maps.restrict(&big.cup(&s, r))))?;
            all_zero(&res_cup) && b_g - rank_res == degrees[i - 1].rank_cup
        };
        degrees.push(LesDegree {
            degree: i,
            b_g,
            b_k,
            rank_res,
            rank_tr,
            rank_cup: b_g - k_i,
            k: k_i,
            exact_before_res,
            exact_at_subgroup: all_zero(&tr_res) && b_k - rank_tr == rank_res,
            exact_after_tr: cup_tr_zero && k_i == rank_tr,
        });
    }
    let exact = degrees
        .iter()
        .all(|d| d.exact_before_res && d.exact_at_subgroup && d.exact_after_tr);
    Ok(LesReport {
        group_order: g.order(),
        subgroup_order: k.order(),
        degrees,
        exact,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdemVerdict {
    pub name: String,
    pub degree: usize,
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

/// F_p-ranks `r_1..=r_max` of `H^i(G, Z)` from `b_i = r_i + r_{i+1}`, `r_1 = 0`.
fn integral_ranks(b: &[usize], max: usize) -> Vec<i64> {
    let mut r = vec![0i64; max + 1];
    for i in 1..max {
        r[i + 1] = b[i] as i64 - r[i];
    }
    r
}

/// Checks `b_i(K) <= p b_i(G)`, `b_i(G) > 0`, the first-degree bound when
/// `p = 2` and `G^ab` is elementary, the integral rank bounds, and for
/// `p = 2` the identity `b_i(K) = k_i + k_{i-1} + b_i(G) - b_{i-1}(G)`.
pub fn adem_inequalities(g: &GroupTable, subgroup: &[usize], p: u64, max_deg: usize) -> Result<Vec<AdemVerdict>> {
    let (k, _, _, index) = subgroup_data(g, subgroup)?;
    if index as u64 != p {
        return invalid(format!("subgroup has index {index}, not {p}"));
    }
    let bg = cohomology_fp(g, p, max_deg)?.dims;
    let bk = cohomology_fp(&k, p, max_deg)?.dims;
    let pi = p as i64;
    let mut out = Vec::new();
    let mut push = |name: &str, degree: usize, lhs: i64, rhs: i64, holds: bool| {
        out.push(AdemVerdict {
            name: name.to_string(),
            degree,
            lhs,
            rhs,
            holds,
        })
    };
    for i in 1..=max_deg {
        let (l, r) = (bk[i] as i64, pi * bg[i] as i64);
        push("b_i(K) <= p b_i(G)", i, l, r, l <= r);
    }
    for (i, &b) in bg.iter().enumerate() {
        push("b_i(G) > 0", i, b as i64, 0, b > 0);
    }
    if p == 2 && g.abelianization_is_elementary(2) && max_deg >= 1 {
        let (l, r) = (bk[1] as i64, pi * (bg[1] as i64 - 1));
        push("b_1(K) <= p (b_1(G) - 1)", 1, l, r, l <= r);
    }
    let (rg, rk) = (integral_ranks(&bg, max_deg), integral_ranks(&bk, max_deg));
    for i in 1..=max_deg {
        let lhs = pi * rg[i];
        if i % 2 == 0 {
            push("p r_i(G) >= r_i(K) + 1", i, lhs, rk[i] + 1, lhs > rk[i]);
        } else {
            push("p r_i(G) >= r_i(K) - 1", i, lhs, rk[i] - 1, lhs >= rk[i] - 1);
        }
    }
    if p == 2 {
        let les = transfer_exact_sequence(g, subgroup, max_deg)?;
        for i in 0..=max_deg {
            let d = &les.degrees[i];
            let prev_k = if i == 0 { 0 } else { les.degrees[i - 1].k as i64 };
            let prev_b = if i == 0 { 0 } else { bg[i - 1] as i64 };
            let rhs = d.k as i64 + prev_k + bg[i] as i64 - prev_b;
            push("b_i(K) = k_i + k_{i-1} + b_i(G) - b_{i-1}(G)", i, bk[i] as i64, rhs, bk[i] as i64 == rhs);
        }
    }
    Ok(out)
}

/// One check that the first differential `H^n(V_{l+1}/V_l) -> H^{n+1}(V_l/V_{l-1})`
/// is cup product with `s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DifferentialCheck {
    pub layer: usize,
    pub degree: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiltrationReport {
    pub p: u64,
    /// Dimension of each successive quotient `V_l / V_{l-1}`.
    pub layers: Vec<usize>,
    pub layers_trivial: bool,
    /// `e1[l][n] = dim H^n(G, V_{l+1}/V_l)`.
    pub e1: Vec<Vec<usize>>,
    pub d1_checks: Vec<DifferentialCheck>,
    pub e2: Vec<Vec<usize>>,
    /// Graded pieces of the filtration induced on `H^n(G, F_p[G/K])`.
    pub e_inf: Vec<Vec<usize>>,
    /// `dim H^n(G, F_p[G/K])`.
    pub abutment: Vec<usize>,
    /// `dim H^n(K, F_p)` from an independent bar computation.
    pub subgroup_betti: Vec<usize>,
    pub converges: bool,
}

fn binomial_mod(n: usize, k: usize, p: u64) -> u8 {
    if k > n {
        return 0;
    }
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
    }
    (c % p as u128) as u8
}

/// Action of `g` on `F_p[G/K]` in the basis `u_j = (zeta - 1)^j e`, where
/// `zeta^k u_j = sum_t C(k, t) u_{j+t}`, restricted to the coordinate window
/// `lo..hi`.
fn window_action(s: &[u8], p: u64, lo: usize, hi: usize) -> Coefficients {
    let d = hi - lo;
    let action = s
        .iter()
        .map(|&k| {
            let mut m = vec![0u8; d * d];
            for j in 0..d {
                for i in j..d {
                    m[i * d + j] = binomial_mod(k as usize, i - j, p);
                }
            }
            m
        })
        .collect();
    Coefficients { dim: d, action }
}

/// The filtration `V_l = ker (zeta - 1)^l` of `F_p[G/K]` for `K` of odd prime
/// index, the first two pages of its spectral sequence in degrees `<= max_deg`,
/// and the graded pieces of the abutment.
pub fn filtration_first_page(g: &GroupTable, subgroup: &[usize], max_deg: usize) -> Result<FiltrationReport> {
    let (k, _, mask, index) = subgroup_data(g, subgroup)?;
    if index == 2 {
        return invalid("index 2: use the transfer exact sequence");
    }
    let p = index as u64;
    let pu = index;
    let f = Fp::new(p);
    let s_vals = defining_character(g, &mask, pu)?;
    let big = Bar::trivial(g, p);
    let gdeg: Vec<BarDegree> = (0..=max_deg + 1).map(|n| big.degree(n)).collect::<Result<_>>()?;
    let b: Vec<usize> = gdeg.iter().map(BarDegree::betti).collect();
    // V_l is spanned by the last l basis vectors u_{p-l}, .., u_{p-1}
    let layers: Vec<usize> = (1..=pu).map(|_| 1).collect();
    let layers_trivial = (0..pu).all(|j| window_action(&s_vals, p, j, j + 1).is_trivial());
    let e1: Vec<Vec<usize>> = (0..pu).map(|_| b[..=max_deg].to_vec()).collect();
    let s = big.character(&s_vals);
    let mut d1_checks = Vec::new();
    for layer in 1..pu {
        // window u_{p-layer-1} (upper), u_{p-layer} (lower)
        let lo = pu - layer - 1;
        let pair = Bar::new(g, p, window_action(&s_vals, p, lo, lo + 2));
        for n in 0..=max_deg.min(2) {
            let mut holds = true;
            for z in &gdeg[n].reps {
                let lifted = Cochain {
                    n,
                    dim: 2,
                    data: z.data.iter().flat_map(|&x| [x, 0]).collect(),
                };
                let dz = pair.coboundary(&lifted);
                let upper_zero = dz.data.iter().step_by(2).all(|&x| x == 0);
                let lower = Cochain {
                    n: n + 1,
                    dim: 1,
                    data: dz.data.iter().skip(1).step_by(2).copied().collect(),
                };
                let got = gdeg[n + 1].class_of(&lower)?;
                let want = gdeg[n + 1].class_of(&big.cup(&s, z))?;
                holds &= upper_zero && got == want;
            }
            d1_checks.push(DifferentialCheck {
                layer,
                degree: n,
                holds,
            });
        }
    }
    // x s ranks: cup_rank[n] = rank H^n -> H^{n+1}
    let mut cup_rank = Vec::new();
    for n in 0..=max_deg {
        let cups: Vec<Cochain> = gdeg[n].reps.iter().map(|r| big.cup(&s, r)).collect();
        cup_rank.push(b[n] - big.coboundary_relations(n, &cups)?);
    }
    // layer index 0 is V_1 (the bottom); d_1 runs from layer l + 1 down to l
    let e2: Vec<Vec<usize>> = (0..pu)
        .map(|l| {
            (0..=max_deg)
                .map(|n| {
                    let outgoing = if l > 0 { cup_rank[n] } else { 0 };
                    let incoming = if l + 1 < pu && n > 0 { cup_rank[n - 1] } else { 0 };
                    b[n] - outgoing - incoming
                })
                .collect()
        })
        .collect();
    // graded pieces: rank of H^n(V_l) -> H^n(F_p[G/K])
    let whole = Bar::new(g, p, window_action(&s_vals, p, 0, pu));
    let whole_deg: Vec<BarDegree> = (0..=max_deg).map(|n| whole.degree(n)).collect::<Result<_>>()?;
    let abutment: Vec<usize> = whole_deg.iter().map(BarDegree::betti).collect();
    let mut image_rank = vec![vec![0usize; max_deg + 1]; pu + 1];
    for l in 1..=pu {
        let sub = Bar::new(g, p, window_action(&s_vals, p, pu - l, pu));
        for n in 0..=max_deg {
            let deg = sub.degree(n)?;
            let pushed: Vec<Cochain> = deg
                .reps
                .iter()
                .map(|r| Cochain {
                    n,
                    dim: pu,
                    data: r
                        .data
                        .chunks(l)
                        .flat_map(|v| std::iter::repeat_n(0u8, pu - l).chain(v.iter().copied()))
                        .collect(),
                })
                .collect();
            let cls = classes(&whole_deg[n], pushed)?;
            image_rank[l][n] = rank_of(f, abutment[n], cls);
        }
    }
    let e_inf: Vec<Vec<usize>> = (1..=pu)
        .map(|l| (0..=max_deg).map(|n| image_rank[l][n] - image_rank[l - 1][n]).collect())
        .collect();
    let subgroup_betti = Bar::trivial(&k, p).betti(max_deg)?;
    let converges = abutment == subgroup_betti
        && (0..=max_deg).all(|n| {
            (0..pu).map(|l| e_inf[l][n]).sum::<usize>() == abutment[n]
                && (0..pu).all(|l| e_inf[l][n] <= e2[l][n])
        });
    Ok(FiltrationReport {
        p,
        layers,
        layers_trivial,
        e1,
        d1_checks,
        e2,
        e_inf,
        abutment,
        subgroup_betti,
        converges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_four_over_two() {
        let g = GroupTable::cyclic(4).unwrap();
        let (elems, _) = g.index_p_subgroups(2).remove(0);
        let r = transfer_exact_sequence(&g, &elems, 3).unwrap();
        assert!(r.exact);
        let ks: Vec<usize> = r.degrees.iter().map(|d| d.k).collect();
        assert_eq!(ks, vec![0, 1, 0, 1]);
        assert!(r.degrees.iter().all(|d| d.b_k == 1));
        let adem = adem_inequalities(&g, &elems, 2, 3).unwrap();
        assert!(adem.iter().all(|v| v.holds), "{adem:?}");
    }

    #[test]
    fn klein_four_diagonal() {
        let g = GroupTable::cyclic_product(&[2, 2]).unwrap();
        for (elems, _) in g.index_p_subgroups(2) {
            let r = transfer_exact_sequence(&g, &elems, 3).unwrap();
            assert!(r.exact);
            assert_eq!(r.degrees[0].k, 0);
            let adem = adem_inequalities(&g, &elems, 2, 3).unwrap();
            assert!(adem.iter().all(|v| v.holds));
            assert!(adem.iter().any(|v| v.name.starts_with("b_1(K) <= p (b_1(G) - 1)")));
        }
    }

    #[test]
    fn rejects_wrong_subgroups() {
        let g = GroupTable::cyclic(9).unwrap();
        let (elems, _) = g.index_p_subgroups(3).remove(0);
        assert!(transfer_exact_sequence(&g, &elems, 2).is_err());
        assert!(transfer_exact_sequence(&g, &[0], 2).is_err());
    }

    #[test]
    fn filtration_of_cyclic_nine() {
        let g = GroupTable::cyclic(9).unwrap();
        let (elems, _) = g.index_p_subgroups(3).remove(0);
        let r = filtration_first_page(&g, &elems, 2).unwrap();
        assert_eq!(r.layers, vec![1, 1, 1]);
        assert!(r.layers_trivial);
        assert!(r.d1_checks.iter().all(|c| c.holds));
        assert!(r.converges);
        assert_eq!(r.subgroup_betti, vec![1, 1, 1]);
    }

    #[test]
    fn filtration_of_elementary_three() {
        let g = GroupTable::cyclic_product(&[3, 3]).unwrap();
        for (elems, _) in g.index_p_subgroups(3) {
            let r = filtration_first_page(&g, &elems, 2).unwrap();
            assert!(r.d1_checks.iter().all(|c| c.holds));
            assert!(r.converges, "{r:?}");
        }
    }
}
