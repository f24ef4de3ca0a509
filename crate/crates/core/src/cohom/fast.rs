//! Mod-p cohomology dimensions from small explicit resolutions, and the
//! dispatcher that picks between them and the bar engine.

use serde::Serialize;

use super::bar::Bar;
use super::fp::{rank_of, Fp};
use super::group::{Family, GroupTable};
use crate::abelian::{is_prime, PGroup};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Coprime,
    CyclicProduct,
    Quaternion,
    Bar,
    DoubleComplex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "ring", rename_all = "kebab-case")]
pub enum Coefficient {
    Fp { p: u64 },
    Z { p: u64 },
}

/// One integral cohomology group: free part plus a finite p-group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegralGroup {
    pub free_rank: usize,
    pub torsion: PGroup,
}

/// Cohomology dimensions `b_0..=b_max`. Over Z, `dims[i]` is `log_p` of the
/// order of the torsion in degree `i` and `groups` holds the full answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    pub coefficient: Coefficient,
    pub dims: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub groups: Option<Vec<IntegralGroup>>,
    pub method: Method,
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) || p > 251 {
        return invalid(format!("{p} is not a supported prime"));
    }
    Ok(())
}

/// `dim H^n` for `n <= max` of a cochain complex of F_p-spaces of dimension
/// `dims[n]` with differential ranks `ranks[n]: C^n -> C^{n+1}`.
fn homology_dims(dims: &[usize], ranks: &[usize], max: usize) -> Vec<usize> {
    (0..=max)
        .map(|n| dims[n] - ranks[n] - if n == 0 { 0 } else { ranks[n - 1] })
        .collect()
}

/// Tensor product of the 2-periodic resolutions of `Z/n_i`, reduced mod p.
/// The cochain differential raises one index `a_i` by one; the factor is
/// `(-1)^{a_1 + .. + a_{i-1}}` times `0` (new `a_i` odd) or `n_i` (even).
pub fn cyclic_product_betti(orders: &[usize], p: u64, max: usize) -> Vec<usize> {
    let f = Fp::new(p);
    let r = orders.len();
    let indices = |n: usize| -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = vec![0usize; r];
        fn rec(i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(cur.clone());
                return;
            }
            for a in 0..=left {
                cur[i] = a;
                rec(i + 1, left - a, cur, out);
            }
        }
        if r == 0 {
            if n == 0 {
                out.push(Vec::new());
            }
        } else {
            rec(0, n, &mut cur, &mut out);
        }
        out
    };
    let basis: Vec<Vec<Vec<usize>>> = (0..=max + 1).map(indices).collect();
    let mut ranks = Vec::new();
    for n in 0..=max {
        let target = &basis[n + 1];
        let pos = |a: &[usize]| target.iter().position(|b| b == a).expect("index in range");
        let cols = basis[n].iter().map(|a| {
            let mut col = vec![0u8; target.len()];
            let mut prefix = 0;
            for i in 0..r {
                if (a[i] + 1) % 2 == 0 {
                    let mut b = a.clone();
                    b[i] += 1;
                    let c = f.mul(f.sign(prefix), f.from_i64(orders[i] as i64));
                    col[pos(&b)] = f.add(col[pos(&b)], c);
                }
                prefix += a[i];
            }
            col
        });
        ranks.push(rank_of(f, target.len(), cols));
    }
    let dims: Vec<usize> = basis.iter().map(Vec::len).collect();
    homology_dims(&dims, &ranks, max)
}

/// The 4-periodic resolution of `Q_{4m} = <x, y | x^m = y^2, y x y^{-1} = x^{-1}>`
/// after applying the augmentation: ranks `1, 2, 2, 1` and differentials
/// `(0 0)`, `[[m, -2], [2, 0]]`, `(0 0)^T`, `4m`.
pub fn quaternion_betti(order: usize, p: u64, max: usize) -> Vec<usize> {
    let f = Fp::new(p);
    let m = (order / 4) as i64;
    let dims: Vec<usize> = (0..=max + 1)
        .map(|n| if n % 4 == 1 || n % 4 == 2 { 2 } else { 1 })
        .collect();
    let ranks: Vec<usize> = (0..=max)
        .map(|n| match (n + 1) % 4 {
            2 => rank_of(
                f,
                2,
                [vec![f.from_i64(m), 2 % p as u8], vec![f.from_i64(-2), 0]],
            ),
            0 => usize::from(f.from_i64(4 * m) != 0),
            _ => 0,
        })
        .collect();
    homology_dims(&dims, &ranks, max)
}

/// Bar-resolution dimensions, with no fast path.
pub fn cohomology_fp_bar(g: &GroupTable, p: u64, max_deg: usize) -> Result<BettiTable> {
    check_prime(p)?;
    Ok(BettiTable {
        coefficient: Coefficient::Fp { p },
        dims: Bar::trivial(g, p).betti(max_deg)?,
        groups: None,
        method: Method::Bar,
    })
}

/// `dim H^i(G, F_p)` for `i <= max_deg`, by the cheapest available method.
pub fn cohomology_fp(g: &GroupTable, p: u64, max_deg: usize) -> Result<BettiTable> {
    check_prime(p)?;
    let table = |dims, method| BettiTable {
        coefficient: Coefficient::Fp { p },
        dims,
        groups: None,
        method,
    };
    if g.order() % p as usize != 0 {
        let dims = (0..=max_deg).map(|n| usize::from(n == 0)).collect();
        return Ok(table(dims, Method::Coprime));
    }
    match g.family() {
        Some(Family::Cyclic(orders)) => Ok(table(
            cyclic_product_betti(orders, p, max_deg),
            Method::CyclicProduct,
        )),
        Some(Family::Quaternion(order)) => {
            Ok(table(quaternion_betti(*order, p, max_deg), Method::Quaternion))
        }
        _ => cohomology_fp_bar(g, p, max_deg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_abelian_poincare_series() {
        assert_eq!(cyclic_product_betti(&[2, 2], 2, 5), vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(cyclic_product_betti(&[3, 3, 3], 3, 3), vec![1, 3, 6, 10]);
        assert_eq!(cyclic_product_betti(&[2], 2, 3), vec![1, 1, 1, 1]);
        assert_eq!(cyclic_product_betti(&[6], 3, 3), vec![1, 1, 1, 1]);
        assert_eq!(cyclic_product_betti(&[5, 4], 2, 3), vec![1, 1, 1, 1]);
    }

    #[test]
    fn quaternion_period_four() {
        assert_eq!(quaternion_betti(8, 2, 8), vec![1, 2, 2, 1, 1, 2, 2, 1, 1]);
        assert_eq!(quaternion_betti(16, 2, 4), vec![1, 2, 2, 1, 1]);
        // Q_12 at p = 3 has a normal Sylow Z/3 with quotient acting by -1
        assert_eq!(quaternion_betti(12, 3, 4), vec![1, 0, 0, 1, 1]);
    }

    #[test]
    fn dispatch() {
        let q8 = GroupTable::quaternion(8).unwrap();
        let t = cohomology_fp(&q8, 2, 3).unwrap();
        assert_eq!((t.dims.clone(), t.method), (vec![1, 2, 2, 1], Method::Quaternion));
        let t = cohomology_fp(&q8, 3, 3).unwrap();
        assert_eq!(t.method, Method::Coprime);
        assert_eq!(cohomology_fp_bar(&q8, 2, 3).unwrap().dims, vec![1, 2, 2, 1]);
    }
}
