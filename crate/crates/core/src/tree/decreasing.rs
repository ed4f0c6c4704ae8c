//! Decreasing trees, skeletons and elementary components.

use std::collections::BTreeMap;

use super::ordered::OrderedTree;
use crate::error::{Error, Result};
use crate::Limits;

impl OrderedTree {
    /// Whether inner trees shrink down every ancestor chain.
    ///
    /// For non-root `x` strictly below `y`: on `ω(1)` the right inner trees
    /// must subordinate, on `ω(n)` the left ones, and off both paths both.
    /// Pairs with mixed membership carry no condition.
    pub fn is_decreasing(&self) -> bool {
        self.decreasing_violation().is_none()
    }

    /// The first offending pair, described, or `None` for a decreasing tree.
    pub fn decreasing_violation(&self) -> Option<String> {
        let n = self.n() as u8;
        let on_first = self.omega_mask(1);
        let on_last = self.omega_mask(n);
        let bit = |x: u8| 1u64 << (x - 1);
        let lefts: Vec<_> = (0..=n)
            .map(|x| if x == 0 { Default::default() } else { self.left_inner(x) })
            .collect();
        let rights: Vec<_> = (0..=n)
            .map(|x| {
                if x == 0 {
                    Default::default()
                } else {
                    self.right_inner(x)
                }
            })
            .collect();
        for x in self.labels().filter(|&x| x != self.root()) {
            for &y in self.omega(x).iter().skip(1) {
                if y == self.root() {
                    break;
                }
                let (xi, yi) = (x as usize, y as usize);
                let in1 = |v| on_first & bit(v) != 0;
                let inn = |v| on_last & bit(v) != 0;
                let check_right = || rights[xi].subordinates(&rights[yi]);
                let check_left = || lefts[xi].subordinates(&lefts[yi]);
                let fails = if in1(x) && in1(y) {
                    !check_right()
                } else if inn(x) && inn(y) {
                    !check_left()
                } else if !in1(x) && !inn(x) && !in1(y) && !inn(y) {
                    !(check_left() && check_right())
                } else {
                    false
                };
                if fails {
                    return Some(format!(
                        "inner trees of {x} do not subordinate those of its ancestor {y}"
                    ));
                }
            }
        }
        None
    }

    /// Root in `{1, n}` with the other endpoint as its only child.
    pub fn is_elementary(&self) -> bool {
        let n = self.n() as u8;
        if n < 2 {
            return false;
        }
        let r = self.root();
        let other = if r == 1 {
            n
        } else if r == n {
            1
        } else {
            return false;
        };
        let kids: Vec<u8> = [self.son(r), self.daughter(r)].into_iter().flatten().collect();
        kids == [other]
    }

    /// `ω(1) ∪ ω(n)`, sorted.
    pub fn skeleton(&self) -> Vec<u8> {
        let mask = self.omega_mask(1) | self.omega_mask(self.n() as u8);
        self.labels().filter(|&x| mask >> (x - 1) & 1 == 1).collect()
    }

    /// One elementary component per skeleton vertex other than the root,
    /// in label order.
    pub fn elementary_decomposition(&self) -> Vec<Component> {
        self.skeleton()
            .into_iter()
            .filter(|&a| a != self.root())
            .map(|a| self.component(a))
            .collect()
    }

    /// `T^a`: the vertices `a`, `p(a)` and every label strictly between them,
    /// relabelled to `1..=k+1`.
    pub fn component(&self, a: u8) -> Component {
        let p = self.parent(a).expect("component of the root requested");
        let (lo, hi) = (a.min(p), a.max(p));
        let mut links = BTreeMap::new();
        let local = |x: u8| x - lo + 1;
        for v in lo..=hi {
            let inside = |c: Option<u8>| c.filter(|&c| (lo..=hi).contains(&c)).map(local);
            let (s, d) = (inside(self.son(v)), inside(self.daughter(v)));
            if s.is_some() || d.is_some() {
                links.insert(local(v), (s, d));
            }
        }
        let tree = OrderedTree::from_links((hi - lo + 1) as usize, local(p), &links)
            .expect("an interval between a vertex and its parent spans a subtree");
        Component {
            vertex: a,
            parent: p,
            offset: lo,
            tree,
        }
    }
}

/// An elementary piece of a decreasing tree, in local labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// The skeleton vertex `a`.
    pub vertex: u8,
    /// Its parent `p(a)`, the root of the component.
    pub parent: u8,
    /// Global label of local label 1.
    pub offset: u8,
    pub tree: OrderedTree,
}

impl Component {
    pub fn global(&self, local: u8) -> u8 {
        local + self.offset - 1
    }

    pub fn local(&self, global: u8) -> u8 {
        global + 1 - self.offset
    }
}

/// All decreasing trees on `n` labels.
pub fn enumerate_decreasing(n: usize, limits: &Limits) -> Result<Vec<OrderedTree>> {
    Ok(OrderedTree::all(n, limits)?
        .into_iter()
        .filter(OrderedTree::is_decreasing)
        .collect())
}

/// Fails with [`Error::NotDecreasing`] unless `t` is decreasing.
pub fn require_decreasing(t: &OrderedTree) -> Result<()> {
    match t.decreasing_violation() {
        None => Ok(()),
        Some(why) => Err(Error::NotDecreasing(why)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(json: &str) -> OrderedTree {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn worked_example_trees() {
        let t4 = tree(r#"{"n":4,"root":1,"nodes":{"1":{"daughter":2},"2":{"daughter":4},"4":{"son":3}}}"#);
        assert!(!t4.is_decreasing());
        let t1 = tree(r#"{"n":5,"root":2,"nodes":{"2":{"son":1,"daughter":4},"4":{"son":3,"daughter":5}}}"#);
        let t2 = tree(r#"{"n":5,"root":5,"nodes":{"5":{"son":1},"1":{"daughter":4},"4":{"son":3},"3":{"son":2}}}"#);
        assert!(t1.is_decreasing());
        assert!(t2.is_decreasing());
        assert!(t2.is_elementary());
        assert_eq!(t2.skeleton(), vec![1, 5]);
        let parts = t2.elementary_decomposition();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].tree, t2);
    }

    #[test]
    fn chains() {
        for n in 1..=7 {
            let c = OrderedTree::right_chain(n);
            assert!(c.is_decreasing());
            assert_eq!(c.skeleton(), (1..=n as u8).collect::<Vec<_>>());
            for comp in c.elementary_decomposition() {
                assert_eq!(comp.tree.n(), 2);
                assert_eq!(comp.parent + 1, comp.vertex);
            }
        }
    }

    #[test]
    fn small_counts() {
        let limits = Limits::default();
        assert_eq!(enumerate_decreasing(1, &limits).unwrap().len(), 1);
        assert_eq!(enumerate_decreasing(2, &limits).unwrap().len(), 2);
    }

    #[test]
    fn components_are_elementary_and_tile() {
        let limits = Limits::default();
        for n in 2..=8 {
            for t in enumerate_decreasing(n, &limits).unwrap() {
                let parts = t.elementary_decomposition();
                let mut covered = vec![0usize; n + 1];
                for c in &parts {
                    assert!(c.tree.is_elementary(), "{t:?} component {c:?}");
                    for x in 1..=c.tree.n() as u8 {
                        covered[c.global(x) as usize] += 1;
                    }
                }
                let skeleton = t.skeleton();
                for x in 1..=n as u8 {
                    let times = covered[x as usize];
                    if skeleton.contains(&x) {
                        assert!(times >= 1);
                    } else {
                        assert_eq!(times, 1, "{t:?} label {x}");
                    }
                }
            }
        }
    }
}
