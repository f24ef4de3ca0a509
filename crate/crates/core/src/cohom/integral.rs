//! Cohomology of `Z/p x Z/p` with coefficients in a module given by two
//! commuting automorphisms, from the tensor square of the periodic resolution.
//!
//! Degree n cochains are `W^{n+1}`, block `a` sitting at bidegree `(a, n-a)`.
//! The horizontal differential out of block `a` is `A - 1` for even `a` and
//! the norm `1 + A + .. + A^{p-1}` for odd `a`; the vertical one is the same
//! with `B`, signed by `(-1)^a`.

use serde::{Deserialize, Serialize};

use super::fast::{BettiTable, Coefficient, IntegralGroup, Method};
use crate::abelian::{homology, is_prime, Hom, PGroup};
use crate::error::{invalid, invariant, Error, Result};

/// A `Z/p x Z/p`-module: either a lattice `Z^d` or a finite abelian p-group,
/// with the two generators acting by `a` and `b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ZpZpModule {
    Lattice {
        p: u64,
        a: Vec<Vec<i64>>,
        b: Vec<Vec<i64>>,
    },
    Finite {
        p: u64,
        exponents: Vec<u32>,
        a: Vec<Vec<i64>>,
        b: Vec<Vec<i64>>,
    },
}

impl ZpZpModule {
    /// The trivial lattice `Z`.
    pub fn integers(p: u64) -> Self {
        ZpZpModule::Lattice {
            p,
            a: vec![vec![1]],
            b: vec![vec![1]],
        }
    }

    /// The trivial module `Z/p^k`.
    pub fn trivial_cyclic(p: u64, k: u32) -> Self {
        ZpZpModule::Finite {
            p,
            exponents: vec![k],
            a: vec![vec![1]],
            b: vec![vec![1]],
        }
    }

    pub fn zero(p: u64) -> Self {
        ZpZpModule::Finite {
            p,
            exponents: vec![],
            a: vec![],
            b: vec![],
        }
    }

    pub fn p(&self) -> u64 {
        match self {
            ZpZpModule::Lattice { p, .. } | ZpZpModule::Finite { p, .. } => *p,
        }
    }

    fn actions(&self) -> (&[Vec<i64>], &[Vec<i64>]) {
        match self {
            ZpZpModule::Lattice { a, b, .. } | ZpZpModule::Finite { a, b, .. } => (a, b),
        }
    }

    fn dim(&self) -> usize {
        match self {
            ZpZpModule::Lattice { a, .. } => a.len(),
            ZpZpModule::Finite { exponents, .. } => exponents.len(),
        }
    }
}

type IMat = Vec<Vec<i128>>;

fn to_imat(m: &[Vec<i64>]) -> IMat {
    m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect()
}

fn mat_mul(a: &IMat, b: &IMat) -> Result<IMat> {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![0i128; m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l] == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] = a[i][l]
                    .checked_mul(b[l][j])
                    .and_then(|x| x.checked_add(out[i][j]))
                    .ok_or_else(|| Error::Resource("integer overflow in matrix product".into()))?;
            }
        }
    }
    Ok(out)
}

fn identity(d: usize) -> IMat {
    (0..d).map(|i| (0..d).map(|j| i128::from(i == j)).collect()).collect()
}

/// Reduces entries modulo the cyclic moduli of the rows (no-op for lattices).
fn reduce(m: &mut IMat, moduli: Option<&[i128]>) {
    if let Some(q) = moduli {
        for (row, &qi) in m.iter_mut().zip(q) {
            for x in row.iter_mut() {
                *x = x.rem_euclid(qi);
            }
        }
    }
}

struct Actions {
    d: usize,
    /// `(A - 1, N_A, B - 1, N_B)`.
    a_minus: IMat,
    a_norm: IMat,
    b_minus: IMat,
    b_norm: IMat,
}

fn actions(w: &ZpZpModule) -> Result<Actions> {
    let p = w.p();
    if !is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    let d = w.dim();
    let (a, b) = w.actions();
    for m in [a, b] {
        if m.len() != d || m.iter().any(|r| r.len() != d) {
            return invalid("action matrices must be square of the module's rank");
        }
    }
    let moduli: Option<Vec<i128>> = match w {
        ZpZpModule::Finite { exponents, .. } => {
            Some(exponents.iter().map(|&e| (p as i128).pow(e)).collect())
        }
        ZpZpModule::Lattice { .. } => None,
    };
    let q = moduli.as_deref();
    let (a, b) = (to_imat(a), to_imat(b));
    let mut ab = mat_mul(&a, &b)?;
    let mut ba = mat_mul(&b, &a)?;
    reduce(&mut ab, q);
    reduce(&mut ba, q);
    if ab != ba {
        return invalid("the two actions do not commute");
    }
    let id = identity(d);
    let mut norms = Vec::new();
    for m in [&a, &b] {
        let mut acc = id.clone();
        let mut pw = id.clone();
        for _ in 1..p {
            pw = mat_mul(&pw, m)?;
            reduce(&mut pw, q);
            for i in 0..d {
                for j in 0..d {
                    acc[i][j] += pw[i][j];
                }
            }
        }
        let mut last = mat_mul(&pw, m)?;
        reduce(&mut last, q);
        let mut idr = id.clone();
        reduce(&mut idr, q);
        if last != idr {
            return invalid("an action does not have order dividing p");
        }
        reduce(&mut acc, q);
        norms.push(acc);
    }
    let minus = |m: &IMat| -> IMat {
        let mut out = m.clone();
        for (i, row) in out.iter_mut().enumerate() {
            row[i] -= 1;
        }
        reduce(&mut out, q);
        out
    };
    Ok(Actions {
        d,
        a_minus: minus(&a),
        b_minus: minus(&b),
        b_norm: norms.pop().expect("two norms"),
        a_norm: norms.pop().expect("two norms"),
    })
}

/// Differential `C^n -> C^{n+1}` as a `(n+2)d x (n+1)d` matrix.
fn differential(act: &Actions, n: usize) -> IMat {
    let d = act.d;
    let mut m = vec![vec![0i128; (n + 1) * d]; (n + 2) * d];
    for a in 0..=n {
        let b = n - a;
        let h = if a % 2 == 0 { &act.a_minus } else { &act.a_norm };
        let v = if b % 2 == 0 { &act.b_minus } else { &act.b_norm };
        let sign = if a % 2 == 0 { 1 } else { -1 };
        for i in 0..d {
            for j in 0..d {
                m[(a + 1) * d + i][a * d + j] += h[i][j];
                m[a * d + i][a * d + j] += sign * v[i][j];
            }
        }
    }
    m
}

/// Rank and diagonal of the Smith normal form of an integer matrix.
pub fn smith_diagonal(mut m: IMat) -> Result<(usize, Vec<i128>)> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let overflow = || Error::Resource("integer overflow in Smith normal form".into());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0
                    && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let piv = m[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = m[i][t].div_euclid(piv);
                if q != 0 {
                    for j in t..cols {
                        m[i][j] = q
                            .checked_mul(m[t][j])
                            .and_then(|x| m[i][j].checked_sub(x))
                            .ok_or_else(overflow)?;
                    }
                }
                dirty |= m[i][t] != 0;
            }
            for j in t + 1..cols {
                let q = m[t][j].div_euclid(piv);
                if q != 0 {
                    for row in m.iter_mut().skip(t) {
                        row[j] = q
                            .checked_mul(row[t])
                            .and_then(|x| row[j].checked_sub(x))
                            .ok_or_else(overflow)?;
                    }
                }
                dirty |= m[t][j] != 0;
            }
            if !dirty {
                // divisibility of the rest by the pivot
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| m[i][j] % piv != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..cols {
                            m[t][j] = m[t][j].checked_add(m[i][j]).ok_or_else(overflow)?;
                        }
                        continue;
                    }
                }
            }
            // move the smallest entry of row/column t to the pivot
            let mut small = (t, t);
            for i in t..rows {
                if m[i][t] != 0 && m[i][t].abs() < m[small.0][small.1].abs() {
                    small = (i, t);
                }
            }
            for j in t..cols {
                if m[t][j] != 0 && m[t][j].abs() < m[small.0][small.1].abs() {
                    small = (t, j);
                }
            }
            m.swap(t, small.0);
            for row in m.iter_mut() {
                row.swap(t, small.1);
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    Ok((diag.len(), diag))
}

fn pgroup_from_factors(p: u64, factors: &[i128]) -> Result<PGroup> {
    let mut exps = Vec::new();
    for &f in factors {
        let mut x = f;
        let mut e = 0;
        while x % p as i128 == 0 {
            x /= p as i128;
            e += 1;
        }
        if x != 1 {
            return invariant(format!("torsion factor {f} is not a power of {p}"));
        }
        if e > 0 {
            exps.push(e);
        }
    }
    PGroup::normalized(p, exps)
}

/// `H^i(Z/p x Z/p, W)` for `i <= max_deg`.
pub fn cohomology_int_zpzp(w: &ZpZpModule, max_deg: usize) -> Result<BettiTable> {
    let act = actions(w)?;
    let p = w.p();
    let d = act.d;
    let mut groups = Vec::with_capacity(max_deg + 1);
    match w {
        ZpZpModule::Lattice { .. } => {
            let mut prev: (usize, Vec<i128>) = (0, Vec::new());
            for n in 0..=max_deg {
                let cur = smith_diagonal(differential(&act, n))?;
                let free_rank = (n + 1) * d - cur.0 - prev.0;
                let torsion: Vec<i128> = prev.1.iter().copied().filter(|&f| f != 1).collect();
                groups.push(IntegralGroup {
                    free_rank,
                    torsion: pgroup_from_factors(p, &torsion)?,
                });
                prev = cur;
            }
        }
        ZpZpModule::Finite { exponents, .. } => {
            let cochains = |n: usize| {
                let exps: Vec<u32> = (0..=n).flat_map(|_| exponents.iter().copied()).collect();
                PGroup::new(p, exps)
            };
            let hom = |n: usize| -> Result<Hom> {
                let m = differential(&act, n)
                    .into_iter()
                    .map(|r| r.into_iter().map(|x| x as i64).collect())
                    .collect();
                Hom::new(cochains(n)?, cochains(n + 1)?, m)
            };
            let mut d_in = Hom::zero(&PGroup::trivial(p), &cochains(0)?);
            for n in 0..=max_deg {
                let d_out = hom(n)?;
                let h = homology(&d_in, &d_out)?;
                groups.push(IntegralGroup {
                    free_rank: 0,
                    torsion: h.group().clone(),
                });
                d_in = d_out;
            }
        }
    }
    Ok(BettiTable {
        coefficient: Coefficient::Z { p },
        dims: groups.iter().map(|g| g.torsion.log_order() as usize).collect(),
        groups: Some(groups),
        method: Method::DoubleComplex,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibilityCheck {
    pub degree: usize,
    pub condition: String,
    pub value: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    /// `a_l = log_p |H^l(Z/p x Z/p, W)|` for `l = 1..=cap`.
    pub a: Vec<usize>,
    pub checks: Vec<AdmissibilityCheck>,
    pub admissible: bool,
}

/// Tests the dimension pattern forced on `H^*(Z/p x Z/p, W)` when `W` is the
/// second cohomology of a free-action homology sphere quotient:
/// `a_1 <= 3`, `a_2 <= 4`, and from degree 3 on `a_{2n} = 2n + 1`,
/// `a_{2n-1} = 2n`.
pub fn admissibility_filter(w: &ZpZpModule, cap: usize) -> Result<AdmissibilityReport> {
    if cap < 3 {
        return invalid("the degree cap must be at least 3");
    }
    let table = cohomology_int_zpzp(w, cap)?;
    let groups = table.groups.expect("integral table");
    if groups[1..].iter().any(|g| g.free_rank > 0) {
        return invalid("positive-degree cohomology has a free part");
    }
    let a: Vec<usize> = table.dims[1..].to_vec();
    let mut checks = Vec::new();
    for (i, &v) in a.iter().enumerate() {
        let l = i + 1;
        let (condition, holds) = match l {
            1 => ("a_1 <= 3".to_string(), v <= 3),
            2 => ("a_2 <= 4".to_string(), v <= 4),
            _ => (format!("a_{l} = {}", l + 1), v == l + 1),
        };
        checks.push(AdmissibilityCheck {
            degree: l,
            condition,
            value: v,
            holds,
        });
    }
    let admissible = checks.iter().all(|c| c.holds);
    Ok(AdmissibilityReport {
        a,
        checks,
        admissible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_diagonal_small() {
        let (r, d) = smith_diagonal(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]).unwrap();
        assert_eq!(r, 3);
        assert_eq!(d, vec![2, 6, 12]);
        let (r, d) = smith_diagonal(vec![vec![4, 6]]).unwrap();
        assert_eq!((r, d), (1, vec![2]));
    }

    #[test]
    fn integral_cohomology_of_trivial_lattice() {
        for p in [2, 3, 5] {
            let t = cohomology_int_zpzp(&ZpZpModule::integers(p), 8).unwrap();
            assert_eq!(t.dims, vec![0, 0, 2, 1, 3, 2, 4, 3, 5]);
            let g = t.groups.unwrap();
            assert_eq!(g[0].free_rank, 1);
            assert!(g[1..].iter().all(|h| h.free_rank == 0 && h.torsion.is_elementary()));
        }
    }

    #[test]
    fn finite_coefficients_match_universal_coefficients() {
        // trivial F_p: dims n + 1
        let t = cohomology_int_zpzp(&ZpZpModule::trivial_cyclic(3, 1), 5).unwrap();
        assert_eq!(t.dims, vec![1, 2, 3, 4, 5, 6]);
        let t = cohomology_int_zpzp(&ZpZpModule::zero(2), 3).unwrap();
        assert_eq!(t.dims, vec![0; 4]);
    }

    #[test]
    fn rejects_noncommuting_actions() {
        let w = ZpZpModule::Lattice {
            p: 2,
            a: vec![vec![0, 1], vec![1, 0]],
            b: vec![vec![-1, 0], vec![0, 1]],
        };
        assert!(cohomology_int_zpzp(&w, 2).is_err());
    }

    #[test]
    fn admissibility_rejects_trivial_modules() {
        assert!(!admissibility_filter(&ZpZpModule::zero(2), 6).unwrap().admissible);
        assert!(!admissibility_filter(&ZpZpModule::integers(3), 6).unwrap().admissible);
    }
}
