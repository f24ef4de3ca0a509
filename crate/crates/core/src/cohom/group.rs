//! Finite groups given by multiplication tables, with the small named families.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::abelian::is_prime;
use crate::error::{invalid, Error, Result};

/// Named families with a closed-form description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// Direct product of cyclic groups of the given orders.
    Cyclic(Vec<usize>),
    Dihedral(usize),
    Quaternion(usize),
    SemiDihedral(usize),
}

/// A finite group with elements `0..order`, identity `0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupTable {
    order: usize,
    mult: Vec<u32>,
    inv: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<Family>,
    /// Designated normal subgroup of prime index, as a sorted element list.
    #[serde(skip_serializing_if = "Option::is_none")]
    subgroup: Option<Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawGroupTable {
    Family {
        family: String,
        #[serde(default)]
        order: Option<usize>,
        #[serde(default)]
        orders: Option<Vec<usize>>,
        #[serde(default)]
        subgroup: Option<Vec<usize>>,
    },
    Table {
        order: usize,
        mult: Vec<Vec<usize>>,
        #[serde(default)]
        subgroup: Option<Vec<usize>>,
    },
}

impl<'de> Deserialize<'de> for GroupTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawGroupTable::deserialize(d)?;
        let (g, sub) = match raw {
            RawGroupTable::Family {
                family,
                order,
                orders,
                subgroup,
            } => {
                let g = match (family.as_str(), order, orders) {
                    ("C", _, Some(o)) => GroupTable::cyclic_product(&o),
                    ("C", Some(n), None) => GroupTable::cyclic_product(&[n]),
                    ("D", Some(n), _) => GroupTable::dihedral(n),
                    ("Q", Some(n), _) => GroupTable::quaternion(n),
                    ("SD", Some(n), _) => GroupTable::semidihedral(n),
                    _ => invalid(format!("unknown or incomplete family literal {family:?}")),
                };
                (g, subgroup)
            }
            RawGroupTable::Table {
                order,
                mult,
                subgroup,
            } => (GroupTable::from_table(order, &mult), subgroup),
        };
        let mut g = g.map_err(serde::de::Error::custom)?;
        if let Some(s) = sub {
            g = g.with_subgroup(s).map_err(serde::de::Error::custom)?;
        }
        Ok(g)
    }
}

impl GroupTable {
    /// Validates a Cayley table and relabels so the identity is element 0.
    pub fn from_table(order: usize, mult: &[Vec<usize>]) -> Result<Self> {
        if order == 0 || order > 4096 {
            return invalid("group order must be between 1 and 4096");
        }
        if mult.len() != order || mult.iter().any(|r| r.len() != order) {
            return invalid("multiplication table must be order x order");
        }
        if mult.iter().flatten().any(|&x| x >= order) {
            return invalid("multiplication table entry out of range");
        }
        let e = (0..order)
            .find(|&e| (0..order).all(|x| mult[e][x] == x && mult[x][e] == x))
            .ok_or_else(|| Error::Invalid("no identity element".into()))?;
        for (i, row) in mult.iter().enumerate() {
            let mut seen = vec![false; order];
            for &x in row {
                if std::mem::replace(&mut seen[x], true) {
                    return invalid(format!("row {i} is not a permutation, so inverses fail"));
                }
            }
        }
        if order <= 256 {
            for a in 0..order {
                for b in 0..order {
                    let ab = mult[a][b];
                    for c in 0..order {
                        if mult[ab][c] != mult[a][mult[b][c]] {
                            return invalid(format!("not associative at ({a}, {b}, {c})"));
                        }
                    }
                }
            }
        }
        // swap labels 0 and e
        let relabel = |x: usize| {
            if x == e {
                0
            } else if x == 0 {
                e
            } else {
                x
            }
        };
        let mut flat = vec![0u32; order * order];
        for a in 0..order {
            for b in 0..order {
                flat[relabel(a) * order + relabel(b)] = relabel(mult[a][b]) as u32;
            }
        }
        Ok(Self::finish(order, flat, None))
    }

    fn finish(order: usize, mult: Vec<u32>, family: Option<Family>) -> Self {
        let mut inv = vec![0u32; order];
        for a in 0..order {
            for b in 0..order {
                if mult[a * order + b] == 0 {
                    inv[a] = b as u32;
                    break;
                }
            }
        }
        GroupTable {
            order,
            mult,
            inv,
            family,
            subgroup: None,
        }
    }

    fn from_fn(order: usize, family: Family, f: impl Fn(usize, usize) -> usize) -> Self {
        Self::from_fn_opt(order, Some(family), f)
    }

    fn from_fn_opt(order: usize, family: Option<Family>, f: impl Fn(usize, usize) -> usize) -> Self {
        let mut mult = vec![0u32; order * order];
        for a in 0..order {
            for b in 0..order {
                mult[a * order + b] = f(a, b) as u32;
            }
        }
        Self::finish(order, mult, family)
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        Self::cyclic_product(&[n])
    }

    pub fn cyclic_product(orders: &[usize]) -> Result<Self> {
        if orders.iter().any(|&n| n == 0) {
            return invalid("cyclic factor orders must be positive");
        }
        let order: usize = orders.iter().product();
        if order > 4096 {
            return invalid("group order must be at most 4096");
        }
        let orders_v = orders.to_vec();
        Ok(Self::from_fn(order, Family::Cyclic(orders_v.clone()), move |a, b| {
            let mut out = 0;
            let (mut x, mut y, mut stride) = (a, b, 1);
            for &n in orders_v.iter().rev() {
                out += ((x % n + y % n) % n) * stride;
                x /= n;
                y /= n;
                stride *= n;
            }
            out
        }))
    }

    /// Elements `a + m*b` standing for `r^a s^b` with `s r s^-1 = r^twist`.
    fn metacyclic(m: usize, twist: usize, square: usize, family: Family) -> Self {
        Self::metacyclic_opt(m, twist, square, Some(family))
    }

    fn metacyclic_opt(m: usize, twist: usize, square: usize, family: Option<Family>) -> Self {
        Self::from_fn_opt(2 * m, family, move |x, y| {
            let (a, b) = (x % m, x / m);
            let (c, d) = (y % m, y / m);
            let c2 = if b == 1 { c * twist % m } else { c };
            let mut e = (a + c2) % m;
            let f = b + d;
            if f == 2 {
                e = (e + square) % m;
            }
            e + m * (f % 2)
        })
    }

    /// Split extension `C_m ⋊ C_2` where the involution acts by `x -> x^twist`.
    pub fn split_metacyclic(m: usize, twist: usize) -> Result<Self> {
        if m < 2 || 2 * m > 4096 {
            return invalid("cyclic part must have order between 2 and 2048");
        }
        if twist % m == 0 || (twist * twist) % m != 1 % m {
            return invalid("twist must be an involution modulo m");
        }
        Ok(Self::metacyclic_opt(m, twist % m, 0, None))
    }

    /// Dihedral group of the given order `2m`.
    pub fn dihedral(order: usize) -> Result<Self> {
        if order < 4 || order % 2 != 0 {
            return invalid("dihedral order must be even and at least 4");
        }
        let m = order / 2;
        Ok(Self::metacyclic(m, m - 1, 0, Family::Dihedral(order)))
    }

    /// Generalized quaternion (dicyclic) group of order `4m`, `m >= 2`.
    pub fn quaternion(order: usize) -> Result<Self> {
        if order < 8 || order % 4 != 0 {
            return invalid("quaternion order must be a multiple of 4 and at least 8");
        }
        let m = order / 2;
        Ok(Self::metacyclic(m, m - 1, m / 2, Family::Quaternion(order)))
    }

    /// Semidihedral group of order `2^n`, `n >= 4`.
    pub fn semidihedral(order: usize) -> Result<Self> {
        if order < 16 || !order.is_power_of_two() {
            return invalid("semidihedral order must be a power of two, at least 16");
        }
        let m = order / 2;
        Ok(Self::metacyclic(m, m / 2 - 1, 0, Family::SemiDihedral(order)))
    }

    pub fn with_subgroup(mut self, mut elems: Vec<usize>) -> Result<Self> {
        elems.sort_unstable();
        elems.dedup();
        self.check_prime_index_normal(&elems)?;
        self.subgroup = Some(elems);
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn family(&self) -> Option<&Family> {
        self.family.as_ref()
    }

    pub fn subgroup(&self) -> Option<&[usize]> {
        self.subgroup.as_deref()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn elem_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Membership mask of the subgroup generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.order];
        mask[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !mask[y] {
                    mask[y] = true;
                    queue.push_back(y);
                }
            }
        }
        mask
    }

    /// A small generating set, chosen greedily by the size of the span.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut mask = self.generated(&gens);
        while mask.iter().any(|&b| !b) {
            let best = (1..self.order)
                .filter(|&x| !mask[x])
                .max_by_key(|&x| {
                    let mut t = gens.clone();
                    t.push(x);
                    (self.generated(&t).iter().filter(|&&b| b).count(), usize::MAX - x)
                })
                .expect("some element is missing");
            gens.push(best);
            mask = self.generated(&gens);
        }
        gens
    }

    fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn commutator_subgroup(&self) -> Vec<bool> {
        let mut gens: Vec<usize> = Vec::new();
        for a in 0..self.order {
            for b in 0..self.order {
                let c = self.commutator(a, b);
                if c != 0 && !gens.contains(&c) {
                    gens.push(c);
                }
            }
        }
        self.generated(&gens)
    }

    /// Whether `G / [G, G]` is elementary abelian of exponent `p`.
    pub fn abelianization_is_elementary(&self, p: usize) -> bool {
        let comm = self.commutator_subgroup();
        (0..self.order).all(|a| {
            let mut x = 0;
            for _ in 0..p {
                x = self.mul(x, a);
            }
            comm[x]
        })
    }

    fn power(&self, a: usize, k: usize) -> usize {
        (0..k).fold(0, |x, _| self.mul(x, a))
    }

    /// Every homomorphism `s: G -> Z/p` up to scalars, as value vectors.
    /// Their kernels are exactly the normal subgroups of index `p`.
    pub fn characters_mod_p(&self, p: usize) -> Vec<Vec<u8>> {
        let mut gens: Vec<usize> = (0..self.order).map(|a| self.power(a, p)).collect();
        for a in 0..self.order {
            for b in 0..self.order {
                gens.push(self.commutator(a, b));
            }
        }
        gens.retain(|&x| x != 0);
        gens.sort_unstable();
        gens.dedup();
        let frattini = self.generated(&gens);
        let mut vec_of: Vec<Option<Vec<u8>>> = vec![None; self.order];
        let mut rank = 0;
        for (x, inside) in frattini.iter().enumerate() {
            if *inside {
                vec_of[x] = Some(Vec::new());
            }
        }
        while let Some(x) = (0..self.order).find(|&x| vec_of[x].is_none()) {
            let known: Vec<(usize, Vec<u8>)> = (0..self.order)
                .filter_map(|y| vec_of[y].clone().map(|v| (y, v)))
                .collect();
            for (y, v) in known {
                let mut z = y;
                for a in 1..p {
                    z = self.mul(z, x);
                    let mut w = v.clone();
                    w.resize(rank + 1, 0);
                    w[rank] = a as u8;
                    vec_of[z] = Some(w);
                }
            }
            rank += 1;
        }
        let coords: Vec<Vec<u8>> = vec_of
            .into_iter()
            .map(|v| {
                let mut v = v.expect("every coset reached");
                v.resize(rank, 0);
                v
            })
            .collect();
        let mut out = Vec::new();
        let total = p.pow(rank as u32);
        for idx in 1..total {
            let mut f = Vec::with_capacity(rank);
            let mut t = idx;
            for _ in 0..rank {
                f.push((t % p) as u8);
                t /= p;
            }
            // normalise: first nonzero coefficient is 1
            if f.iter().find(|&&c| c != 0) != Some(&1) {
                continue;
            }
            out.push(
                coords
                    .iter()
                    .map(|v| {
                        (v.iter().zip(&f).map(|(&a, &b)| a as usize * b as usize).sum::<usize>()
                            % p) as u8
                    })
                    .collect(),
            );
        }
        out
    }

    /// Normal subgroups of index `p`, each with a defining character.
    pub fn index_p_subgroups(&self, p: usize) -> Vec<(Vec<usize>, Vec<u8>)> {
        self.characters_mod_p(p)
            .into_iter()
            .map(|s| ((0..self.order).filter(|&x| s[x] == 0).collect(), s))
            .collect()
    }

    pub(crate) fn check_prime_index_normal(&self, elems: &[usize]) -> Result<usize> {
        if elems.first() != Some(&0) || elems.iter().any(|&x| x >= self.order) {
            return invalid("subgroup must contain the identity and valid elements");
        }
        let mut mask = vec![false; self.order];
        for &x in elems {
            mask[x] = true;
        }
        for &a in elems {
            for &b in elems {
                if !mask[self.mul(a, b)] {
                    return invalid("subgroup is not closed under multiplication");
                }
            }
        }
        for g in 0..self.order {
            for &k in elems {
                if !mask[self.mul(self.mul(self.inv(g), k), g)] {
                    return invalid("subgroup is not normal");
                }
            }
        }
        if self.order % elems.len() != 0 || !is_prime((self.order / elems.len()) as u64) {
            return invalid("subgroup does not have prime index");
        }
        Ok(self.order / elems.len())
    }

    /// The subgroup on `elems` (sorted, containing 0) as its own table,
    /// together with the embedding of its labels.
    pub fn subgroup_table(&self, elems: &[usize]) -> Result<(GroupTable, Vec<usize>)> {
        let mut pos = vec![usize::MAX; self.order];
        for (i, &x) in elems.iter().enumerate() {
            pos[x] = i;
        }
        if elems.first() != Some(&0) {
            return invalid("subgroup must list the identity first");
        }
        let n = elems.len();
        let mut mult = vec![0u32; n * n];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                let c = pos[self.mul(a, b)];
                if c == usize::MAX {
                    return invalid("subgroup is not closed under multiplication");
                }
                mult[i * n + j] = c as u32;
            }
        }
        Ok((Self::finish(n, mult, None), elems.to_vec()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quaternion_relations() {
        let q = GroupTable::quaternion(8).unwrap();
        let (a, b) = (1, 4);
        assert_eq!(q.elem_order(a), 4);
        assert_eq!(q.elem_order(b), 4);
        assert_eq!(q.mul(b, b), q.mul(a, a));
        // b a b^-1 = a^-1
        assert_eq!(q.mul(q.mul(b, a), q.inv(b)), q.inv(a));
        assert!(!q.is_abelian());
        // unique element of order 2
        assert_eq!((1..8).filter(|&x| q.elem_order(x) == 2).count(), 1);
    }

    #[test]
    fn family_invariants() {
        let d = GroupTable::dihedral(8).unwrap();
        assert_eq!((1..8).filter(|&x| d.elem_order(x) == 2).count(), 5);
        let sd = GroupTable::semidihedral(16).unwrap();
        assert_eq!((1..16).filter(|&x| sd.elem_order(x) == 2).count(), 5);
        let q16 = GroupTable::quaternion(16).unwrap();
        assert_eq!((1..16).filter(|&x| q16.elem_order(x) == 2).count(), 1);
        let c = GroupTable::cyclic_product(&[4, 2]).unwrap();
        assert!(c.is_abelian());
        assert_eq!(c.generating_set().len(), 2);
    }

    #[test]
    fn index_two_subgroups() {
        let counts = [
            (GroupTable::cyclic(8).unwrap(), 1),
            (GroupTable::cyclic_product(&[2, 2]).unwrap(), 3),
            (GroupTable::cyclic_product(&[2, 2, 2]).unwrap(), 7),
            (GroupTable::quaternion(8).unwrap(), 3),
            (GroupTable::dihedral(8).unwrap(), 3),
            (GroupTable::semidihedral(16).unwrap(), 3),
        ];
        for (g, n) in counts {
            let subs = g.index_p_subgroups(2);
            assert_eq!(subs.len(), n);
            for (k, _) in subs {
                assert_eq!(g.check_prime_index_normal(&k).unwrap(), 2);
            }
        }
        let s3 = GroupTable::dihedral(6).unwrap();
        assert!(s3.index_p_subgroups(3).is_empty());
        assert_eq!(s3.index_p_subgroups(2).len(), 1);
    }

    #[test]
    fn table_validation() {
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(GroupTable::from_table(2, &bad).is_err());
        let g = GroupTable::from_table(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(g.mul(1, 1), 0);
        let lit: GroupTable = serde_json::from_str(r#"{"family":"Q","order":16}"#).unwrap();
        assert_eq!(lit.order(), 16);
        let lit: GroupTable = serde_json::from_str(r#"{"family":"C","orders":[4,2]}"#).unwrap();
        assert_eq!(lit.order(), 8);
        assert!(serde_json::from_str::<GroupTable>(r#"{"family":"C","orders":[4],"subgroup":[0,1]}"#).is_err());
        assert!(serde_json::from_str::<GroupTable>(r#"{"family":"C","orders":[4],"subgroup":[0,2]}"#).is_ok());
    }
}
