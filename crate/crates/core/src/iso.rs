//! Exhaustive search for semigroup isomorphisms between small cross-sections.
//!
//! The search works on multiplication tables only. Pruning uses properties
//! that any isomorphism preserves; a candidate is accepted only after the
//! whole table has been checked.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::section::CrossSection;
use crate::transform::Transformation;
use crate::Limits;

/// Multiplication table of a finite semigroup on `0..len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyTable {
    mul: Vec<Vec<usize>>,
}

impl CayleyTable {
    /// Fails unless `mul` is square with entries in range.
    pub fn new(mul: Vec<Vec<usize>>) -> Result<Self> {
        let k = mul.len();
        if mul.iter().any(|row| row.len() != k || row.iter().any(|&x| x >= k)) {
            return Err(Error::domain("multiplication table is not closed"));
        }
        Ok(CayleyTable { mul })
    }

    /// Table of a closed set of transformations, composed left to right.
    pub fn of_elements(elements: &[Transformation]) -> Result<Self> {
        let index: std::collections::HashMap<&Transformation, usize> =
            elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mut mul = vec![vec![0; elements.len()]; elements.len()];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                let ab = a.compose(b)?;
                mul[i][j] = *index
                    .get(&ab)
                    .ok_or_else(|| Error::domain(format!("{a} * {b} = {ab} leaves the set")))?;
            }
        }
        Ok(CayleyTable { mul })
    }

    pub fn len(&self) -> usize {
        self.mul.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mul.is_empty()
    }

    pub fn product(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn is_associative(&self) -> bool {
        let k = self.len();
        (0..k).all(|a| (0..k).all(|b| (0..k).all(|c| self.mul[self.mul[a][b]][c] == self.mul[a][self.mul[b][c]])))
    }

    /// Whether `map` sends products to products.
    pub fn is_homomorphism(&self, other: &CayleyTable, map: &[usize]) -> bool {
        map.len() == self.len()
            && (0..self.len()).all(|a| (0..self.len()).all(|b| map[self.mul[a][b]] == other.mul[map[a]][map[b]]))
    }

    /// Isomorphism-invariant fingerprint of each element.
    fn profiles(&self) -> Vec<Profile> {
        let k = self.len();
        (0..k)
            .map(|a| {
                let idempotent = self.mul[a][a] == a;
                let right_ideal = distinct((0..k).map(|s| self.mul[a][s]));
                let left_ideal = distinct((0..k).map(|s| self.mul[s][a]));
                let fixes_left = (0..k).filter(|&s| self.mul[s][a] == s).count();
                let fixes_right = (0..k).filter(|&s| self.mul[a][s] == s).count();
                // powers a, a^2, ... until one repeats
                let mut seen = vec![usize::MAX; k];
                let mut p = a;
                let mut i = 1;
                while seen[p] == usize::MAX {
                    seen[p] = i;
                    p = self.mul[p][a];
                    i += 1;
                }
                let index = seen[p];
                let period = i - seen[p];
                Profile {
                    idempotent,
                    right_ideal,
                    left_ideal,
                    fixes_left,
                    fixes_right,
                    index,
                    period,
                }
            })
            .collect()
    }
}

fn distinct(it: impl Iterator<Item = usize>) -> usize {
    let mut v: Vec<usize> = it.collect();
    v.sort_unstable();
    v.dedup();
    v.len()
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Profile {
    idempotent: bool,
    right_ideal: usize,
    left_ideal: usize,
    fixes_left: usize,
    fixes_right: usize,
    index: usize,
    period: usize,
}

/// An isomorphism of multiplication tables, as `map[a] = image of a`.
pub fn table_isomorphism(s: &CayleyTable, t: &CayleyTable) -> Option<Vec<usize>> {
    let k = s.len();
    if k != t.len() {
        return None;
    }
    let ps = s.profiles();
    let pt = t.profiles();
    let mut sorted_s = ps.clone();
    let mut sorted_t = pt.clone();
    sorted_s.sort();
    sorted_t.sort();
    if sorted_s != sorted_t {
        return None;
    }

    // Branch on idempotents first, rarest profile first.
    let rarity = |p: &Profile| ps.iter().filter(|q| *q == p).count();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&a| (!ps[a].idempotent, rarity(&ps[a]), a));

    let mut search = Search {
        s,
        t,
        ps: &ps,
        pt: &pt,
        map: vec![None; k],
        used: vec![false; k],
        log: Vec::new(),
    };
    if search.run(&order, 0) {
        let map: Vec<usize> = search.map.iter().map(|m| m.expect("complete")).collect();
        // the search only promises consistency of the pairs it touched
        if s.is_homomorphism(t, &map) {
            return Some(map);
        }
    }
    None
}

struct Search<'a> {
    s: &'a CayleyTable,
    t: &'a CayleyTable,
    ps: &'a [Profile],
    pt: &'a [Profile],
    map: Vec<Option<usize>>,
    used: Vec<bool>,
    log: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self, order: &[usize], at: usize) -> bool {
        let Some(pos) = (at..order.len()).find(|&i| self.map[order[i]].is_none()) else {
            return true;
        };
        let a = order[pos];
        for b in 0..self.t.len() {
            if self.used[b] || self.ps[a] != self.pt[b] {
                continue;
            }
            let mark = self.log.len();
            if self.assign(a, b) && self.run(order, pos + 1) {
                return true;
            }
            self.undo(mark);
        }
        false
    }

    fn undo(&mut self, mark: usize) {
        while self.log.len() > mark {
            let a = self.log.pop().expect("nonempty");
            let b = self.map[a].take().expect("logged entries are set");
            self.used[b] = false;
        }
    }

    /// Sets `a -> b` and closes under products with every mapped element.
    fn assign(&mut self, a: usize, b: usize) -> bool {
        let mut queue = vec![(a, b)];
        while let Some((a, b)) = queue.pop() {
            match self.map[a] {
                Some(x) if x == b => continue,
                Some(_) => return false,
                None => {}
            }
            if self.used[b] || self.ps[a] != self.pt[b] {
                return false;
            }
            self.map[a] = Some(b);
            self.used[b] = true;
            self.log.push(a);
            for &c in &self.log {
                let d = self.map[c].expect("logged entries are set");
                queue.push((self.s.product(a, c), self.t.product(b, d)));
                queue.push((self.s.product(c, a), self.t.product(d, b)));
            }
        }
        true
    }
}

/// A semigroup isomorphism between two cross-sections.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bijection {
    pub pairs: Vec<(Transformation, Transformation)>,
}

impl Bijection {
    pub fn image(&self, a: &Transformation) -> Option<&Transformation> {
        self.pairs.iter().find(|(x, _)| x == a).map(|(_, y)| y)
    }
}

/// Searches for a multiplication-preserving bijection `S1 -> S2`.
pub fn oracle_semigroup_iso(s1: &CrossSection, s2: &CrossSection, limits: &Limits) -> Result<Option<Bijection>> {
    for s in [s1, s2] {
        if s.len() > limits.iso_max {
            return Err(Error::Guard {
                what: "isomorphism search",
                n: s.len(),
                limit: limits.iso_max,
            });
        }
    }
    if s1.len() != s2.len() {
        return Ok(None);
    }
    let (a, b) = (s1.elements(), s2.elements());
    let (ta, tb) = (CayleyTable::of_elements(a)?, CayleyTable::of_elements(b)?);
    Ok(table_isomorphism(&ta, &tb).map(|map| Bijection {
        pairs: map
            .iter()
            .enumerate()
            .map(|(i, &j)| (a[i].clone(), b[j].clone()))
            .collect(),
    }))
}
