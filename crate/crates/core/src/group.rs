//! Finite groups as dense Cayley tables.
//!
//! Elements are indices `0..n`. The table is stored row-major so that
//! `table[g * n + h]` is the index of the product `gh`. Permutation groups are
//! composed right to left: `(gh)(x) = g(h(x))`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on group orders (`|S_7|`).
pub const DEFAULT_ORDER_CAP: usize = 5040;

/// Groups up to this order have associativity checked exhaustively.
const EXHAUSTIVE_ASSOC_MAX: usize = 64;
const SAMPLED_ASSOC_TRIPLES: usize = 10_000;

/// Standard group families understood by [`make_group`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupFamily {
    Cyclic(usize),
    /// Direct product of cyclic factors, each at least 2.
    Abelian(Vec<usize>),
    /// Symmetries of the regular `m`-gon, order `2m`.
    Dihedral(usize),
    Symmetric(usize),
    Alternating(usize),
    /// `PSL(2, p)` for an odd prime `p`.
    Psl2(u64),
    /// Closure of a list of permutations on a common domain.
    FromGenerators(Vec<Vec<usize>>),
}

impl fmt::Display for GroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupFamily::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupFamily::Abelian(factors) => {
                let parts: Vec<String> = factors.iter().map(|m| m.to_string()).collect();
                write!(f, "abelian:{}", parts.join("x"))
            }
            GroupFamily::Dihedral(m) => write!(f, "dihedral:{m}"),
            GroupFamily::Symmetric(k) => write!(f, "sym:{k}"),
            GroupFamily::Alternating(k) => write!(f, "alt:{k}"),
            GroupFamily::Psl2(p) => write!(f, "psl2:{p}"),
            GroupFamily::FromGenerators(gens) => {
                write!(f, "perm")?;
                for g in gens {
                    let images: Vec<String> = g.iter().map(|x| x.to_string()).collect();
                    write!(f, ":{}", images.join(","))?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for GroupFamily {
    type Err = Error;

    /// Parses `cyclic:4`, `abelian:2x2x3`, `dihedral:6`, `sym:5`, `alt:5`,
    /// `psl2:7`, `trivial`, and `perm:1,2,0:1,0,2` (generators as image lists).
    fn from_str(spec: &str) -> Result<Self> {
        let bad = |reason: &str| Error::Parse { spec: spec.to_string(), reason: reason.to_string() };
        let spec_trim = spec.trim();
        if spec_trim == "trivial" {
            return Ok(GroupFamily::Cyclic(1));
        }
        let (kind, arg) = spec_trim.split_once(':').ok_or_else(|| bad("expected <family>:<argument>"))?;
        let number = |s: &str| -> Result<usize> {
            s.trim().parse::<usize>().map_err(|_| bad("argument is not a non-negative integer"))
        };
        let family = match kind.trim() {
            "cyclic" => {
                let n = number(arg)?;
                if n == 0 {
                    return Err(bad("cyclic order must be positive"));
                }
                GroupFamily::Cyclic(n)
            }
            "abelian" => {
                let factors = arg.split('x').map(number).collect::<Result<Vec<_>>>()?;
                if factors.is_empty() || factors.iter().any(|&m| m < 2) {
                    return Err(bad("abelian factors must all be at least 2"));
                }
                GroupFamily::Abelian(factors)
            }
            "dihedral" => {
                let m = number(arg)?;
                if m == 0 {
                    return Err(bad("dihedral parameter must be positive"));
                }
                GroupFamily::Dihedral(m)
            }
            "sym" => GroupFamily::Symmetric(number(arg)?),
            "alt" => GroupFamily::Alternating(number(arg)?),
            "psl2" => GroupFamily::Psl2(number(arg)? as u64),
            "perm" => {
                let gens = arg
                    .split(':')
                    .map(|g| g.split(',').map(number).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                GroupFamily::FromGenerators(gens)
            }
            _ => return Err(bad("unknown family (expected cyclic, abelian, dihedral, sym, alt, psl2, perm)")),
        };
        Ok(family)
    }
}

/// A validated finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<u32>,
    identity: usize,
    inverse: Vec<usize>,
}

/// On-disk form: `{name, order, table}` with the table as nested rows.
#[derive(Serialize, Deserialize)]
struct GroupDocument {
    name: String,
    order: usize,
    table: Vec<Vec<u32>>,
}

impl Serialize for FiniteGroup {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let doc = GroupDocument {
            name: self.name.clone(),
            order: self.order,
            table: self.table.chunks(self.order).map(<[u32]>::to_vec).collect(),
        };
        doc.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FiniteGroup {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = GroupDocument::deserialize(deserializer)?;
        if doc.table.len() != doc.order || doc.table.iter().any(|row| row.len() != doc.order) {
            return Err(serde::de::Error::custom("table shape does not match order"));
        }
        let flat = doc.table.into_iter().flatten().collect();
        FiniteGroup::from_table(doc.name, doc.order, flat).map_err(serde::de::Error::custom)
    }
}

impl FiniteGroup {
    /// Builds a group from a row-major table, locating the identity and
    /// inverses and running the full validation suite.
    pub fn from_table(name: impl Into<String>, order: usize, table: Vec<u32>) -> Result<Self> {
        if order == 0 || table.len() != order * order {
            return Err(Error::InvalidTable(format!("table of length {} for order {order}", table.len())));
        }
        if table.iter().any(|&x| x as usize >= order) {
            return Err(Error::InvalidTable("entry out of range".into()));
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| table[e * order + g] as usize == g && table[g * order + e] as usize == g))
            .ok_or_else(|| Error::InvalidTable("no two-sided identity".into()))?;
        let mut inverse = vec![usize::MAX; order];
        for (g, inv) in inverse.iter_mut().enumerate() {
            let row = &table[g * order..(g + 1) * order];
            *inv = row
                .iter()
                .position(|&x| x as usize == identity)
                .ok_or_else(|| Error::InvalidTable(format!("element {g} has no right inverse")))?;
        }
        let group = FiniteGroup { name: name.into(), order, table, identity, inverse };
        group.validate(0)?;
        Ok(group)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inverse
    }

    /// Row `g` of the table: `row(g)[h] = gh`. This is also the permutation
    /// carried by `g` in the left regular representation.
    pub fn row(&self, g: usize) -> &[u32] {
        &self.table[g * self.order..(g + 1) * self.order]
    }

    /// Product `gh`. Panics if either index is out of range.
    #[inline]
    pub fn multiply(&self, g: usize, h: usize) -> usize {
        assert!(g < self.order && h < self.order, "element index out of range");
        self.table[g * self.order + h] as usize
    }

    /// `g²`.
    pub fn square_element(&self, g: usize) -> usize {
        self.multiply(g, g)
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.multiply(x, g);
            k += 1;
        }
        k
    }

    /// Least common multiple of all element orders.
    pub fn exponent(&self) -> usize {
        (0..self.order).map(|g| self.element_order(g)).fold(1, lcm)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|g| (g + 1..self.order).all(|h| self.multiply(g, h) == self.multiply(h, g)))
    }

    /// `hgh⁻¹`.
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.multiply(self.multiply(h, g), self.inverse[h])
    }

    /// Checks the Latin-square, identity, inverse and associativity laws.
    /// Associativity is exhaustive up to order 64 and sampled with
    /// `10⁴` seeded triples above that.
    pub fn validate(&self, seed: u64) -> Result<()> {
        let n = self.order;
        let mut seen = vec![0usize; n];
        for (stamp, g) in (1..).zip(0..n) {
            for h in 0..n {
                let x = self.table[g * n + h] as usize;
                if seen[x] == stamp {
                    return Err(Error::InvalidTable(format!("row {g} repeats element {x}")));
                }
                seen[x] = stamp;
            }
        }
        seen.iter_mut().for_each(|s| *s = 0);
        for (stamp, h) in (1..).zip(0..n) {
            for g in 0..n {
                let x = self.table[g * n + h] as usize;
                if seen[x] == stamp {
                    return Err(Error::InvalidTable(format!("column {h} repeats element {x}")));
                }
                seen[x] = stamp;
            }
        }
        let e = self.identity;
        for g in 0..n {
            if self.table[e * n + g] as usize != g || self.table[g * n + e] as usize != g {
                return Err(Error::InvalidTable(format!("identity law fails at {g}")));
            }
            if self.table[g * n + self.inverse[g]] as usize != e {
                return Err(Error::InvalidTable(format!("inverse law fails at {g}")));
            }
        }
        let assoc = |a: usize, b: usize, c: usize| {
            self.multiply(self.multiply(a, b), c) == self.multiply(a, self.multiply(b, c))
        };
        if n <= EXHAUSTIVE_ASSOC_MAX {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !assoc(a, b, c) {
                            return Err(Error::InvalidTable(format!("not associative at ({a},{b},{c})")));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..SAMPLED_ASSOC_TRIPLES {
                let (a, b, c) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
                if !assoc(a, b, c) {
                    return Err(Error::InvalidTable(format!("not associative at ({a},{b},{c})")));
                }
            }
        }
        Ok(())
    }

    pub fn conjugacy_classes(&self) -> ConjugacyClasses {
        let n = self.order;
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        // identity first, then in order of smallest representative
        let starts = std::iter::once(self.identity).chain((0..n).filter(|&g| g != self.identity));
        for g in starts {
            if class_of[g] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members = Vec::new();
            for h in 0..n {
                let c = self.conjugate(g, h);
                if class_of[c] == usize::MAX {
                    class_of[c] = id;
                    members.push(c);
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        ConjugacyClasses { classes, class_of }
    }

    /// The commutator subgroup `[G, G]`, as a sorted element list.
    pub fn derived_subgroup(&self) -> Vec<usize> {
        let n = self.order;
        let mut is_commutator = vec![false; n];
        for a in 0..n {
            for b in 0..n {
                let c = self.multiply(self.multiply(self.inverse[a], self.inverse[b]), self.multiply(a, b));
                is_commutator[c] = true;
            }
        }
        let gens: Vec<usize> = (0..n).filter(|&g| is_commutator[g]).collect();
        self.generated_subgroup(&gens)
    }

    /// `|G / [G, G]|`, the number of linear characters.
    pub fn commutator_index(&self) -> usize {
        self.order / self.derived_subgroup().len()
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order];
        member[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        let mut elems = vec![self.identity];
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.multiply(x, s);
                if !member[y] {
                    member[y] = true;
                    elems.push(y);
                    queue.push_back(y);
                }
            }
        }
        elems.sort_unstable();
        elems
    }

    /// Normal subgroups found by searching unions of conjugacy classes that
    /// contain the identity, have order dividing `n` and are closed under
    /// multiplication. Returns `None` when there are too many classes for an
    /// exhaustive search (more than 20).
    pub fn normal_subgroups(&self, classes: &ConjugacyClasses) -> Option<Vec<Vec<usize>>> {
        let others: Vec<&Vec<usize>> = classes.classes.iter().filter(|c| !c.contains(&self.identity)).collect();
        if others.len() > 20 {
            return None;
        }
        let mut found = Vec::new();
        for mask in 0u32..(1u32 << others.len()) {
            let size = 1 + others
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, c)| c.len())
                .sum::<usize>();
            if !self.order.is_multiple_of(size) {
                continue;
            }
            let mut member = vec![false; self.order];
            member[self.identity] = true;
            for (i, c) in others.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    c.iter().for_each(|&g| member[g] = true);
                }
            }
            let elems: Vec<usize> = (0..self.order).filter(|&g| member[g]).collect();
            let closed = elems.iter().all(|&a| elems.iter().all(|&b| member[self.multiply(a, b)]));
            if closed {
                found.push(elems);
            }
        }
        Some(found)
    }

    /// True when the only normal subgroups are trivial and the whole group.
    /// `None` if the class search is too large to run.
    pub fn is_simple(&self) -> Option<bool> {
        if self.order == 1 {
            return Some(false);
        }
        let classes = self.conjugacy_classes();
        self.normal_subgroups(&classes).map(|ns| ns.len() == 2)
    }
}

/// Partition of a group into conjugacy classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugacyClasses {
    /// Sorted members of each class; class 0 is `{identity}`.
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
}

impl ConjugacyClasses {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// Index of the class `K⁻¹` for every class `K`.
    pub fn inverse_classes(&self, group: &FiniteGroup) -> Vec<usize> {
        self.classes.iter().map(|c| self.class_of[group.inverse(c[0])]).collect()
    }
}

/// Builds and validates a group from a standard family, refusing orders above `cap`.
pub fn make_group(family: &GroupFamily, cap: usize) -> Result<FiniteGroup> {
    let name = family.to_string();
    let check_cap = |order: usize| {
        if order > cap {
            Err(Error::OrderCap { order, cap })
        } else {
            Ok(())
        }
    };
    match family {
        GroupFamily::Cyclic(n) => {
            if *n == 0 {
                return Err(Error::InvalidArgument("cyclic order must be positive".into()));
            }
            check_cap(*n)?;
            abelian_product(name, &[*n])
        }
        GroupFamily::Abelian(factors) => {
            if factors.is_empty() || factors.iter().any(|&m| m < 2) {
                return Err(Error::InvalidArgument("abelian factors must be at least 2".into()));
            }
            let order = factors.iter().try_fold(1usize, |acc, &m| acc.checked_mul(m)).unwrap_or(usize::MAX);
            check_cap(order)?;
            abelian_product(name, factors)
        }
        GroupFamily::Dihedral(m) => {
            if *m == 0 {
                return Err(Error::InvalidArgument("dihedral parameter must be positive".into()));
            }
            check_cap(2 * m)?;
            dihedral(name, *m)
        }
        GroupFamily::Symmetric(k) => {
            check_cap(factorial(*k))?;
            let mut gens = Vec::new();
            if *k >= 2 {
                let mut swap: Vec<usize> = (0..*k).collect();
                swap.swap(0, 1);
                gens.push(swap);
                gens.push((0..*k).map(|i| (i + 1) % k).collect());
            }
            from_generators_named(name, &gens, (*k).max(1), cap)
        }
        GroupFamily::Alternating(k) => {
            check_cap((factorial(*k) / 2).max(1))?;
            // 3-cycles (0 1 i) generate A_k
            let gens: Vec<Vec<usize>> = (2..*k)
                .map(|i| {
                    let mut p: Vec<usize> = (0..*k).collect();
                    p[0] = 1;
                    p[1] = i;
                    p[i] = 0;
                    p
                })
                .collect();
            from_generators_named(name, &gens, (*k).max(1), cap)
        }
        GroupFamily::Psl2(p) => {
            if *p < 3 || !is_prime(*p) {
                return Err(Error::NotOddPrime(*p));
            }
            let p = *p as usize;
            check_cap(p * (p * p - 1) / 2)?;
            // action on the projective line {0, …, p-1, ∞=p}
            let inf = p;
            let translate: Vec<usize> = (0..=p).map(|z| if z == inf { inf } else { (z + 1) % p }).collect();
            let invert: Vec<usize> = (0..=p)
                .map(|z| match z {
                    0 => inf,
                    z if z == inf => 0,
                    z => (p - mod_inverse(z, p)) % p,
                })
                .collect();
            from_generators_named(name, &[translate, invert], p + 1, cap)
        }
        GroupFamily::FromGenerators(gens) => {
            let degree = gens.first().map(Vec::len).unwrap_or(1);
            from_generators_named(name, gens, degree, cap)
        }
    }
}

/// Closes a set of permutations under composition (breadth-first over the
/// right action of the generators) and returns the resulting group.
pub fn from_generators(gens: &[Vec<usize>], cap: usize) -> Result<FiniteGroup> {
    make_group(&GroupFamily::FromGenerators(gens.to_vec()), cap)
}

fn from_generators_named(name: String, gens: &[Vec<usize>], degree: usize, cap: usize) -> Result<FiniteGroup> {
    for g in gens {
        if g.len() != degree {
            return Err(Error::InvalidGenerators(format!(
                "generator of length {} on a domain of size {degree}",
                g.len()
            )));
        }
        let mut hit = vec![false; degree];
        for &x in g {
            if x >= degree || std::mem::replace(&mut hit[x], true) {
                return Err(Error::InvalidGenerators(format!("{g:?} is not a permutation")));
            }
        }
    }
    let identity: Vec<u32> = (0..degree as u32).collect();
    let gens: Vec<Vec<u32>> = gens.iter().map(|g| g.iter().map(|&x| x as u32).collect()).collect();

    let mut index: HashMap<Vec<u32>, usize> = HashMap::from([(identity.clone(), 0)]);
    let mut elems = vec![identity];
    // parent[h] = (x, s) with h = x · gens[s]
    let mut parent: Vec<(usize, usize)> = vec![(0, usize::MAX)];
    let mut right: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    while next < elems.len() {
        let x = elems[next].clone();
        let mut row = Vec::with_capacity(gens.len());
        for (si, s) in gens.iter().enumerate() {
            let y: Vec<u32> = s.iter().map(|&i| x[i as usize]).collect();
            let id = match index.get(&y) {
                Some(&id) => id,
                None => {
                    let id = elems.len();
                    if id + 1 > cap {
                        return Err(Error::OrderCap { order: id + 1, cap });
                    }
                    index.insert(y.clone(), id);
                    elems.push(y);
                    parent.push((next, si));
                    id
                }
            };
            row.push(id);
        }
        right.push(row);
        next += 1;
    }

    let n = elems.len();
    let mut table = vec![0u32; n * n];
    for g in 0..n {
        table[g * n] = g as u32;
        // BFS order guarantees parent[h].0 < h
        for h in 1..n {
            let (p, s) = parent[h];
            table[g * n + h] = right[table[g * n + p] as usize][s] as u32;
        }
    }
    FiniteGroup::from_table(name, n, table)
}

fn abelian_product(name: String, factors: &[usize]) -> Result<FiniteGroup> {
    let n: usize = factors.iter().product();
    let digits = |mut x: usize| {
        let mut d = Vec::with_capacity(factors.len());
        for &m in factors.iter().rev() {
            d.push(x % m);
            x /= m;
        }
        d.reverse();
        d
    };
    let encode = |d: &[usize]| d.iter().zip(factors).fold(0, |acc, (&x, &m)| acc * m + x);
    let coords: Vec<Vec<usize>> = (0..n).map(digits).collect();
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            let sum: Vec<usize> = coords[a].iter().zip(&coords[b]).zip(factors).map(|((x, y), m)| (x + y) % m).collect();
            table[a * n + b] = encode(&sum) as u32;
        }
    }
    FiniteGroup::from_table(name, n, table)
}

/// Element `r^i s^j` is stored at index `i + m j`.
fn dihedral(name: String, m: usize) -> Result<FiniteGroup> {
    let n = 2 * m;
    let mut table = vec![0u32; n * n];
    for x in 0..n {
        let (a, b) = (x % m, x / m);
        for y in 0..n {
            let (c, d) = (y % m, y / m);
            // r^a s^b r^c s^d = r^(a ± c) s^(b+d)
            let rot = if b == 0 { (a + c) % m } else { (a + m - c) % m };
            table[x * n + y] = (rot + m * ((b + d) % 2)) as u32;
        }
    }
    FiniteGroup::from_table(name, n, table)
}

fn factorial(k: usize) -> usize {
    (1..=k).try_fold(1usize, |acc, i| acc.checked_mul(i)).unwrap_or(usize::MAX)
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_inverse(z: usize, p: usize) -> usize {
    // p prime: z^(p-2)
    let mut result = 1usize;
    let mut base = z % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(spec: &str) -> FiniteGroup {
        make_group(&spec.parse().unwrap(), DEFAULT_ORDER_CAP).unwrap()
    }

    /// Class sizes by brute-force conjugation, independent of `conjugacy_classes`.
    fn brute_class_sizes(g: &FiniteGroup) -> Vec<usize> {
        let n = g.order();
        let mut done = vec![false; n];
        let mut sizes = Vec::new();
        for x in 0..n {
            if done[x] {
                continue;
            }
            let mut orbit: Vec<usize> = (0..n).map(|h| g.multiply(g.multiply(h, x), g.inverse(h))).collect();
            orbit.sort_unstable();
            orbit.dedup();
            orbit.iter().for_each(|&y| done[y] = true);
            sizes.push(orbit.len());
        }
        sizes.sort_unstable();
        sizes
    }

    #[test]
    fn parses_family_specs() {
        assert_eq!("cyclic:4".parse::<GroupFamily>().unwrap(), GroupFamily::Cyclic(4));
        assert_eq!("abelian:2x2x3".parse::<GroupFamily>().unwrap(), GroupFamily::Abelian(vec![2, 2, 3]));
        assert_eq!("psl2:7".parse::<GroupFamily>().unwrap(), GroupFamily::Psl2(7));
        assert_eq!("trivial".parse::<GroupFamily>().unwrap(), GroupFamily::Cyclic(1));
        assert_eq!(
            "perm:1,2,0:1,0,2".parse::<GroupFamily>().unwrap(),
            GroupFamily::FromGenerators(vec![vec![1, 2, 0], vec![1, 0, 2]])
        );
        for bad in ["cyclic", "cyclic:x", "abelian:2x1", "foo:3", "cyclic:0", "perm:1,a"] {
            assert!(bad.parse::<GroupFamily>().is_err(), "{bad}");
        }
        for spec in ["cyclic:4", "abelian:2x2x3", "dihedral:6", "sym:5", "alt:5", "psl2:7", "perm:1,2,0:1,0,2"] {
            assert_eq!(spec.parse::<GroupFamily>().unwrap().to_string(), spec);
        }
    }

    #[test]
    fn cyclic_four() {
        let g = build("cyclic:4");
        assert_eq!(g.order(), 4);
        assert!(g.is_abelian());
        assert_eq!(g.multiply(1, 3), 0);
        assert_eq!(g.multiply(g.identity(), 3), 3);
    }

    #[test]
    fn orders_of_families() {
        for (spec, n) in [
            ("sym:3", 6),
            ("sym:4", 24),
            ("alt:4", 12),
            ("alt:5", 60),
            ("dihedral:4", 8),
            ("psl2:5", 60),
            ("psl2:7", 168),
            ("abelian:2x2x2", 8),
            ("sym:1", 1),
            ("alt:2", 1),
        ] {
            assert_eq!(build(spec).order(), n, "{spec}");
        }
    }

    #[test]
    fn class_structure_matches_brute_force() {
        for (spec, sizes) in [
            ("sym:3", vec![1, 2, 3]),
            ("sym:4", vec![1, 3, 6, 6, 8]),
            ("dihedral:4", vec![1, 1, 2, 2, 2]),
            ("alt:5", vec![1, 12, 12, 15, 20]),
            ("abelian:2x2", vec![1, 1, 1, 1]),
        ] {
            let g = build(spec);
            let mut got = g.conjugacy_classes().sizes();
            got.sort_unstable();
            assert_eq!(got, sizes, "{spec}");
            assert_eq!(brute_class_sizes(&g), sizes, "{spec}");
        }
    }

    #[test]
    fn psl2_five_matches_alt_five() {
        let a = build("alt:5");
        let p = build("psl2:5");
        let mut sa = a.conjugacy_classes().sizes();
        let mut sp = p.conjugacy_classes().sizes();
        sa.sort_unstable();
        sp.sort_unstable();
        assert_eq!(sa, sp);
        assert_eq!(a.commutator_index(), 1);
        assert_eq!(p.commutator_index(), 1);
    }

    #[test]
    fn square_map() {
        let c2 = build("cyclic:2");
        assert_eq!(c2.square_element(1), 0);
        let c3 = build("cyclic:3");
        let mut sq: Vec<usize> = (0..3).map(|g| c3.square_element(g)).collect();
        sq.sort_unstable();
        assert_eq!(sq, vec![0, 1, 2]);
        let d4 = build("dihedral:4");
        for reflection in 4..8 {
            assert_eq!(d4.square_element(reflection), d4.identity());
        }
    }

    #[test]
    fn identity_sits_in_singleton_class() {
        for spec in ["sym:4", "dihedral:5", "psl2:7"] {
            let g = build(spec);
            let cc = g.conjugacy_classes();
            assert_eq!(cc.classes[0], vec![g.identity()]);
            assert_eq!(cc.sizes().iter().sum::<usize>(), g.order());
            assert!(cc.sizes().iter().all(|s| g.order().is_multiple_of(*s)));
        }
    }

    #[test]
    fn simplicity_witness() {
        assert_eq!(build("alt:5").is_simple(), Some(true));
        assert_eq!(build("alt:6").is_simple(), Some(true));
        assert_eq!(build("psl2:7").is_simple(), Some(true));
        assert_eq!(build("sym:4").is_simple(), Some(false));
        assert_eq!(build("alt:4").is_simple(), Some(false));
        assert_eq!(build("cyclic:5").is_simple(), Some(true));
    }

    #[test]
    fn commutator_index_examples() {
        assert_eq!(build("sym:3").commutator_index(), 2);
        assert_eq!(build("alt:4").commutator_index(), 3);
        assert_eq!(build("dihedral:4").commutator_index(), 4);
        assert_eq!(build("cyclic:6").commutator_index(), 6);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(make_group(&GroupFamily::Psl2(9), DEFAULT_ORDER_CAP), Err(Error::NotOddPrime(9))));
        assert!(matches!(make_group(&GroupFamily::Psl2(2), DEFAULT_ORDER_CAP), Err(Error::NotOddPrime(2))));
        assert!(matches!(make_group(&GroupFamily::Symmetric(8), DEFAULT_ORDER_CAP), Err(Error::OrderCap { .. })));
        assert!(matches!(make_group(&GroupFamily::Cyclic(10), 5), Err(Error::OrderCap { .. })));
        assert!(matches!(
            from_generators(&[vec![1, 0, 2], vec![1, 0]], DEFAULT_ORDER_CAP),
            Err(Error::InvalidGenerators(_))
        ));
        assert!(matches!(from_generators(&[vec![0, 0, 1]], DEFAULT_ORDER_CAP), Err(Error::InvalidGenerators(_))));
        // S_5 generated inside a cap of 100
        assert!(matches!(
            from_generators(&[vec![1, 0, 2, 3, 4], vec![1, 2, 3, 4, 0]], 100),
            Err(Error::OrderCap { .. })
        ));
    }

    #[test]
    fn rejects_broken_tables() {
        // not a Latin square
        assert!(FiniteGroup::from_table("bad", 2, vec![0, 1, 1, 1]).is_err());
        // Latin square with identity but not associative (order 5 loop)
        let loop5: Vec<u32> = vec![
            0, 1, 2, 3, 4, //
            1, 0, 3, 4, 2, //
            2, 4, 0, 1, 3, //
            3, 2, 4, 0, 1, //
            4, 3, 1, 2, 0,
        ];
        assert!(matches!(FiniteGroup::from_table("loop", 5, loop5), Err(Error::InvalidTable(_))));
    }

    #[test]
    fn json_round_trip() {
        let g = build("dihedral:3");
        let text = serde_json::to_string(&g).unwrap();
        let back: FiniteGroup = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["order"], 6);
        assert_eq!(value["name"], "dihedral:3");
        assert_eq!(value["table"].as_array().unwrap().len(), 6);
    }
}
