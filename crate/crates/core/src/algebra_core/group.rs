use super::arith::lcm;
use super::cyclo::CyclotomicNumber;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Z/d_1 x ... x Z/d_t with elements as exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    orders: Vec<u64>,
}

pub type Elt = Vec<u64>;

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<u64>) -> Arc<Self> {
        assert!(orders.iter().all(|&d| d >= 1), "cyclic orders must be positive");
        Arc::new(Self { orders })
    }

    pub fn trivial() -> Arc<Self> {
        Self::new(vec![])
    }

    pub fn cyclic(n: u64) -> Arc<Self> {
        Self::new(vec![n])
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn size(&self) -> usize {
        self.orders.iter().product::<u64>() as usize
    }

    /// Least common multiple of the cyclic orders.
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |a, &d| lcm(a, d))
    }

    pub fn identity(&self) -> Elt {
        vec![0; self.orders.len()]
    }

    /// Mixed-radix index, first coordinate most significant (lexicographic order).
    pub fn index(&self, g: &[u64]) -> usize {
        let mut idx = 0usize;
        for (x, &d) in g.iter().zip(&self.orders) {
            idx = idx * d as usize + (*x % d) as usize;
        }
        idx
    }

    pub fn element(&self, mut idx: usize) -> Elt {
        let mut out = vec![0; self.orders.len()];
        for i in (0..self.orders.len()).rev() {
            let d = self.orders[i] as usize;
            out[i] = (idx % d) as u64;
            idx /= d;
        }
        out
    }

    pub fn elements(&self) -> impl Iterator<Item = Elt> + '_ {
        (0..self.size()).map(move |i| self.element(i))
    }

    pub fn op(&self, a: &[u64], b: &[u64]) -> Elt {
        a.iter().zip(b).zip(&self.orders).map(|((x, y), d)| (x + y) % d).collect()
    }

    pub fn inv(&self, a: &[u64]) -> Elt {
        a.iter().zip(&self.orders).map(|(x, d)| (d - x % d) % d).collect()
    }

    pub fn pow(&self, a: &[u64], k: i64) -> Elt {
        a.iter()
            .zip(&self.orders)
            .map(|(x, &d)| ((*x as i128 * k as i128).rem_euclid(d as i128)) as u64)
            .collect()
    }

    pub fn op_index(&self, i: usize, j: usize) -> usize {
        // mixed radix addition with carries dropped per coordinate
        let mut idx = 0usize;
        let mut a = i;
        let mut b = j;
        let mut place = 1usize;
        for &d in self.orders.iter().rev() {
            let d = d as usize;
            let s = (a % d + b % d) % d;
            idx += s * place;
            place *= d;
            a /= d;
            b /= d;
        }
        idx
    }

    pub fn inv_index(&self, i: usize) -> usize {
        let mut idx = 0usize;
        let mut a = i;
        let mut place = 1usize;
        for &d in self.orders.iter().rev() {
            let d = d as usize;
            idx += ((d - a % d) % d) * place;
            place *= d;
            a /= d;
        }
        idx
    }

    pub fn elt_order(&self, a: &[u64]) -> u64 {
        a.iter()
            .zip(&self.orders)
            .fold(1, |acc, (&x, &d)| lcm(acc, d / super::arith::gcd(x % d, d)))
    }

    /// Characters in lexicographic exponent order, trivial first.
    pub fn characters(self: &Arc<Self>) -> Vec<Character> {
        let dual = FiniteAbelianGroup::new(self.orders.clone());
        dual.elements().map(|e| Character::new(self.clone(), e)).collect()
    }

    pub fn subgroup(self: &Arc<Self>, gens: &[Elt]) -> Subgroup {
        Subgroup::generated(self.clone(), gens)
    }

    /// Quotient by a subgroup, returning the quotient group and the projection on exponents.
    pub fn quotient(self: &Arc<Self>, h: &Subgroup) -> Quotient {
        let t = self.rank();
        let mut rows: Vec<Vec<i64>> = Vec::new();
        for (i, &d) in self.orders.iter().enumerate() {
            let mut r = vec![0i64; t];
            r[i] = d as i64;
            rows.push(r);
        }
        for g in &h.gens {
            rows.push(g.iter().map(|&x| x as i64).collect());
        }
        let (diag, v) = smith_columns(rows, t);
        let mut keep = Vec::new();
        let mut orders = Vec::new();
        for (i, &d) in diag.iter().enumerate() {
            if d != 1 {
                keep.push(i);
                orders.push(d as u64);
            }
        }
        Quotient { source: self.clone(), target: FiniteAbelianGroup::new(orders), v, keep }
    }
}

/// Projection G -> G/H in canonical cyclic coordinates.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub source: Arc<FiniteAbelianGroup>,
    pub target: Arc<FiniteAbelianGroup>,
    v: Vec<Vec<i64>>,
    keep: Vec<usize>,
}

impl Quotient {
    pub fn project(&self, g: &[u64]) -> Elt {
        let t = self.source.rank();
        self.keep
            .iter()
            .zip(self.target.orders())
            .map(|(&col, &d)| {
                let mut s: i128 = 0;
                for i in 0..t {
                    s += g[i] as i128 * self.v[i][col] as i128;
                }
                s.rem_euclid(d as i128) as u64
            })
            .collect()
    }

    pub fn project_index(&self, i: usize) -> usize {
        self.target.index(&self.project(&self.source.element(i)))
    }
}

/// Smith normal form of an integer matrix with `cols` columns; returns the diagonal (length
/// `cols`, zeros allowed) and the column transform V with rowspace(A)·V = rowspace(diag).
fn smith_columns(mut a: Vec<Vec<i64>>, cols: usize) -> (Vec<i64>, Vec<Vec<i64>>) {
    let rows = a.len();
    let mut v: Vec<Vec<i64>> = (0..cols).map(|i| (0..cols).map(|j| (i == j) as i64).collect()).collect();
    let mut diag = vec![0i64; cols];
    let mut r0 = 0usize;
    for c0 in 0..cols {
        if r0 >= rows {
            break;
        }
        loop {
            // pivot: smallest nonzero absolute value in the remaining block
            let mut best: Option<(usize, usize)> = None;
            for i in r0..rows {
                for j in c0..cols {
                    if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return (diag, v);
            };
            a.swap(r0, pi);
            for row in a.iter_mut() {
                row.swap(c0, pj);
            }
            for row in v.iter_mut() {
                row.swap(c0, pj);
            }
            let p = a[r0][c0];
            let mut clean = true;
            for i in 0..rows {
                if i != r0 && a[i][c0] != 0 {
                    let q = a[i][c0] / p;
                    for j in 0..cols {
                        a[i][j] -= q * a[r0][j];
                    }
                    if a[i][c0] != 0 {
                        clean = false;
                    }
                }
            }
            for j in 0..cols {
                if j != c0 && a[r0][j] != 0 {
                    let q = a[r0][j] / p;
                    for i in 0..rows {
                        a[i][j] -= q * a[i][c0];
                    }
                    for row in v.iter_mut() {
                        row[j] -= q * row[c0];
                    }
                    if a[r0][j] != 0 {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            // divisibility condition for the rest of the block
            let mut fix = None;
            'outer: for i in r0 + 1..rows {
                for j in c0 + 1..cols {
                    if a[i][j] % p != 0 {
                        fix = Some(i);
                        break 'outer;
                    }
                }
            }
            if let Some(i) = fix {
                for j in 0..cols {
                    a[r0][j] += a[i][j];
                }
                continue;
            }
            break;
        }
        if a[r0][c0] < 0 {
            for j in 0..cols {
                a[r0][j] = -a[r0][j];
            }
        }
        diag[c0] = a[r0][c0];
        r0 += 1;
    }
    (diag, v)
}

/// A subgroup stored by generators together with its enumerated membership table.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub group: Arc<FiniteAbelianGroup>,
    pub gens: Vec<Elt>,
    members: Vec<bool>,
    size: usize,
}

impl Subgroup {
    pub fn generated(group: Arc<FiniteAbelianGroup>, gens: &[Elt]) -> Self {
        let n = group.size();
        let mut members = vec![false; n];
        let id = group.index(&group.identity());
        members[id] = true;
        let mut frontier = vec![id];
        let gen_idx: Vec<usize> = gens.iter().map(|g| group.index(g)).collect();
        while let Some(x) = frontier.pop() {
            for &g in &gen_idx {
                let y = group.op_index(x, g);
                if !members[y] {
                    members[y] = true;
                    frontier.push(y);
                }
            }
        }
        let size = members.iter().filter(|&&b| b).count();
        Self { group, gens: gens.to_vec(), members, size }
    }

    pub fn trivial(group: Arc<FiniteAbelianGroup>) -> Self {
        Self::generated(group, &[])
    }

    pub fn whole(group: Arc<FiniteAbelianGroup>) -> Self {
        let gens: Vec<Elt> = (0..group.rank())
            .map(|i| {
                let mut e = group.identity();
                e[i] = 1;
                e
            })
            .collect();
        Self::generated(group, &gens)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, g: &[u64]) -> bool {
        self.members[self.group.index(g)]
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.members[i]
    }

    pub fn member_indices(&self) -> Vec<usize> {
        (0..self.members.len()).filter(|&i| self.members[i]).collect()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.member_indices().into_iter().all(|i| other.contains_index(i))
    }

    /// Subgroup generated by self and other.
    pub fn join(&self, other: &Subgroup) -> Subgroup {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Subgroup::generated(self.group.clone(), &gens)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, o: &Self) -> bool {
        self.group == o.group && self.members == o.members
    }
}

/// A character chi(g) = zeta_d^{sum e_i g_i d/d_i} with d the group exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Character {
    group: Arc<FiniteAbelianGroup>,
    exps: Vec<u64>,
}

impl Character {
    pub fn new(group: Arc<FiniteAbelianGroup>, exps: Vec<u64>) -> Self {
        assert_eq!(exps.len(), group.rank());
        let exps = exps.iter().zip(group.orders()).map(|(e, d)| e % d).collect();
        Self { group, exps }
    }

    pub fn trivial(group: Arc<FiniteAbelianGroup>) -> Self {
        let e = group.identity();
        Self::new(group, e)
    }

    pub fn group(&self) -> &Arc<FiniteAbelianGroup> {
        &self.group
    }

    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// chi(g) = zeta_n^k, returned as (n, k) with n the group exponent.
    pub fn value_exp(&self, g: &[u64]) -> (u64, u64) {
        let d = self.group.exponent();
        let mut s: u128 = 0;
        for ((e, x), &di) in self.exps.iter().zip(g).zip(self.group.orders()) {
            s += (*e as u128) * (*x as u128) * (d / di) as u128;
        }
        (d, (s % d as u128) as u64)
    }

    pub fn value_exp_index(&self, i: usize) -> (u64, u64) {
        self.value_exp(&self.group.element(i))
    }

    pub fn value(&self, g: &[u64]) -> CyclotomicNumber {
        let (d, k) = self.value_exp(g);
        CyclotomicNumber::root_of_unity(d, k as i64)
    }

    pub fn inverse(&self) -> Self {
        let e = self.group.inv(&self.exps);
        Self::new(self.group.clone(), e)
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.group, o.group);
        let e = self.group.op(&self.exps, &o.exps);
        Self::new(self.group.clone(), e)
    }

    pub fn pow(&self, k: i64) -> Self {
        Self::new(self.group.clone(), self.group.pow(&self.exps, k))
    }

    /// Order of chi in the dual group.
    pub fn order(&self) -> u64 {
        let d = self.group.exponent();
        (1..=d).find(|&m| self.pow(m as i64).is_trivial()).unwrap()
    }

    pub fn is_trivial_on(&self, h: &Subgroup) -> bool {
        h.gens.iter().all(|g| self.value_exp(g).1 == 0)
    }

    /// Index of chi among characters_of(G).
    pub fn index(&self) -> usize {
        self.group.index(&self.exps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characters_enumeration() {
        let g = FiniteAbelianGroup::new(vec![2]);
        let ch = g.characters();
        assert_eq!(ch.len(), 2);
        assert!(ch[0].is_trivial());
        assert_eq!(ch[1].value(&[1]), CyclotomicNumber::from_int(-1));
        let g3 = FiniteAbelianGroup::cyclic(3);
        for c in g3.characters() {
            let v = c.value(&[1]);
            assert!(v.pow(3).unwrap().is_one());
        }
        assert_eq!(FiniteAbelianGroup::new(vec![2, 4]).characters().len(), 8);
    }

    #[test]
    fn quotient_orders() {
        let g = FiniteAbelianGroup::new(vec![4, 6]);
        let h = g.subgroup(&[vec![2, 3]]);
        assert_eq!(h.size(), 2);
        let q = g.quotient(&h);
        assert_eq!(q.target.size(), 12);
        // projection is a homomorphism with kernel H
        for a in g.elements() {
            let pa = q.project(&a);
            assert_eq!(pa == q.target.identity(), h.contains(&a));
            for b in g.elements().step_by(5) {
                assert_eq!(q.project(&g.op(&a, &b)), q.target.op(&pa, &q.project(&b)));
            }
        }
    }

    #[test]
    fn index_ops() {
        let g = FiniteAbelianGroup::new(vec![3, 5, 2]);
        for i in 0..g.size() {
            assert_eq!(g.index(&g.element(i)), i);
            let j = (i * 7) % g.size();
            assert_eq!(g.op_index(i, j), g.index(&g.op(&g.element(i), &g.element(j))));
            assert_eq!(g.op_index(i, g.inv_index(i)), 0);
        }
    }
}
