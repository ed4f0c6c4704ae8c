//! The R-cross-section `Φ` of a decreasing tree, and its inverse.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::ConvexPartition;
use crate::section::{CrossSection, GreenRelation};
use crate::transform::Transformation;
use crate::tree::{require_decreasing, OrderedTree};

/// Blocks of a convex partition arranged as a binary tree by a search tree.
///
/// Node ids are block indices of `kernel`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionTree {
    pub kernel: ConvexPartition,
    pub root: usize,
    pub son: Vec<Option<usize>>,
    pub daughter: Vec<Option<usize>>,
    /// The highest label of each block, reached from the nearest ancestor gap.
    pub leading: Vec<u8>,
}

impl PartitionTree {
    /// The root block holds the tree root. Each block then takes as son the
    /// block of the highest label in the gap left of it (bounded by the
    /// region it was assigned), and as daughter the same on the right.
    pub fn build(t: &OrderedTree, kernel: &ConvexPartition) -> Result<Self> {
        if t.n() != kernel.n() {
            return Err(Error::SizeMismatch {
                left: t.n(),
                right: kernel.n(),
            });
        }
        let m = kernel.block_count();
        let mut pt = PartitionTree {
            kernel: kernel.clone(),
            root: kernel.block_of(t.root()),
            son: vec![None; m],
            daughter: vec![None; m],
            leading: vec![0; m],
        };
        pt.leading[pt.root] = t.root();
        let mut stack = vec![(pt.root, 1u8, t.n() as u8)];
        while let Some((b, lo, hi)) = stack.pop() {
            let block = kernel.block(b);
            let (l, r) = (*block.start(), *block.end());
            if l > lo {
                let lead = t.highest_in(lo, l - 1).expect("gap is nonempty");
                let c = kernel.block_of(lead);
                pt.son[b] = Some(c);
                pt.leading[c] = lead;
                stack.push((c, lo, l - 1));
            }
            if r < hi {
                let lead = t.highest_in(r + 1, hi).expect("gap is nonempty");
                let c = kernel.block_of(lead);
                pt.daughter[b] = Some(c);
                pt.leading[c] = lead;
                stack.push((c, r + 1, hi));
            }
        }
        Ok(pt)
    }

    /// The unique homomorphism into `t`: root block to the root, then
    /// son to son and daughter to daughter. Values are per block.
    pub fn homomorphism(&self, t: &OrderedTree) -> Result<Vec<u8>> {
        let mut value = vec![0u8; self.son.len()];
        value[self.root] = t.root();
        let mut stack = vec![self.root];
        while let Some(b) = stack.pop() {
            let x = value[b];
            for (child, target, side) in [
                (self.son[b], t.son(x), "son"),
                (self.daughter[b], t.daughter(x), "daughter"),
            ] {
                let Some(c) = child else { continue };
                let Some(y) = target else {
                    return Err(Error::NotDecreasing(format!(
                        "block {} needs a {side} of {x}, which does not exist",
                        self.kernel.block(c).start()
                    )));
                };
                value[c] = y;
                stack.push(c);
            }
        }
        Ok(value)
    }
}

/// `φ^K`: each block of `kernel` goes where the partition tree homomorphism sends it.
pub fn phi(t: &OrderedTree, kernel: &ConvexPartition) -> Result<Transformation> {
    require_decreasing(t)?;
    phi_unchecked(t, kernel)
}

fn phi_unchecked(t: &OrderedTree, kernel: &ConvexPartition) -> Result<Transformation> {
    let pt = PartitionTree::build(t, kernel)?;
    let values = pt.homomorphism(t)?;
    Transformation::from_blocks(kernel, &values)
}

/// `Φ` for a decreasing tree: one `φ^K` per convex partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiSemigroup {
    tree: OrderedTree,
    /// Indexed by the cut mask of the kernel.
    by_kernel: Vec<Transformation>,
}

impl PhiSemigroup {
    pub fn new(t: &OrderedTree) -> Result<Self> {
        require_decreasing(t)?;
        let n = t.n();
        let by_kernel = (0..1u64 << (n - 1))
            .map(|mask| phi_unchecked(t, &ConvexPartition::from_cut_mask(n, mask)))
            .collect::<Result<_>>()?;
        Ok(PhiSemigroup {
            tree: t.clone(),
            by_kernel,
        })
    }

    pub fn tree(&self) -> &OrderedTree {
        &self.tree
    }

    pub fn len(&self) -> usize {
        self.by_kernel.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_kernel.is_empty()
    }

    pub fn get(&self, kernel: &ConvexPartition) -> &Transformation {
        &self.by_kernel[kernel.cut_mask() as usize]
    }

    /// Representative of the R-class of `t` (order-preserving).
    pub fn representative(&self, t: &Transformation) -> Result<&Transformation> {
        Ok(self.get(&t.kernel()?))
    }

    pub fn iter(&self) -> impl Iterator<Item = &Transformation> {
        self.by_kernel.iter()
    }

    pub fn to_cross_section(&self) -> CrossSection {
        CrossSection::new(self.tree.n(), GreenRelation::R, self.by_kernel.clone()).expect("every element has n points")
    }

    /// Rows for printing: partitions by descending block count, then by
    /// right ends.
    pub fn table(&self) -> Vec<TableRow> {
        let mut kernels = ConvexPartition::all(self.tree.n());
        kernels.sort_by(|a, b| {
            b.block_count()
                .cmp(&a.block_count())
                .then_with(|| a.right_ends().cmp(b.right_ends()))
        });
        kernels
            .into_iter()
            .map(|k| {
                let t = self.get(&k).clone();
                TableRow {
                    partition: k.to_string(),
                    values: k.right_ends().iter().map(|&e| t.apply(e)).collect(),
                    images: t.images().to_vec(),
                }
            })
            .collect()
    }

    pub fn render_table(&self) -> String {
        let rows = self.table();
        let w = rows.iter().map(|r| r.partition.len()).max().unwrap_or(0).max(1);
        let mut out = String::new();
        let _ = writeln!(out, "{:<w$} | block values", "K");
        let _ = writeln!(out, "{}-+-{}", "-".repeat(w), "-".repeat(12));
        for r in &rows {
            let values: Vec<String> = r.values.iter().map(u8::to_string).collect();
            let _ = writeln!(out, "{:<w$} | {}", r.partition, values.join(","));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub partition: String,
    /// Image of each block, left to right.
    pub values: Vec<u8>,
    pub images: Vec<u8>,
}

pub fn phi_semigroup(t: &OrderedTree) -> Result<PhiSemigroup> {
    PhiSemigroup::new(t)
}

/// Elements of `Φ` whose kernel has `ω(v)` as a transversal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaSet {
    pub vertex: u8,
    pub members: Vec<Transformation>,
}

impl ThetaSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Every member is idempotent with image `ω(v)`, and `ab = a` for all
    /// members `a`, `b`.
    pub fn check(&self, t: &OrderedTree) -> Result<()> {
        let path = t.omega_mask(self.vertex);
        for a in &self.members {
            if !a.is_idempotent() || a.image_mask() != path {
                return Err(Error::Internal(format!(
                    "{a} is not an idempotent onto ω({})",
                    self.vertex
                )));
            }
            for b in &self.members {
                if a.then(b) != *a {
                    return Err(Error::Internal(format!("{a} * {b} != {a}")));
                }
            }
        }
        Ok(())
    }
}

pub fn theta_set(phi: &PhiSemigroup, v: u8) -> ThetaSet {
    let path: Vec<u8> = phi.tree().omega(v);
    let members = phi
        .iter()
        .filter(|a| {
            let k = a.kernel().expect("Φ is order-preserving");
            k.block_count() == path.len() && {
                let mut hit = vec![false; k.block_count()];
                path.iter().all(|&x| !std::mem::replace(&mut hit[k.block_of(x)], true))
            }
        })
        .cloned()
        .collect();
    ThetaSet { vertex: v, members }
}

/// The filtration of `{1..n}` by images of elements of growing rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WChain {
    /// `W'_i = W_i \ W_{i-1}`, with `W'_0 = {r}`.
    pub levels: Vec<BTreeSet<u8>>,
}

impl WChain {
    pub fn from_section(s: &CrossSection) -> Result<Self> {
        let n = s.n();
        let constant = s
            .elements()
            .iter()
            .find(|e| e.is_constant())
            .ok_or_else(|| Error::NotCrossSection("no constant element".into()))?;
        let mut levels = vec![BTreeSet::from([constant.apply(1)])];
        let mut seen = constant.image_mask();
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut rank = 1;
        while seen != full {
            rank += 1;
            if rank > n {
                return Err(Error::NotCrossSection("images never cover every point".into()));
            }
            let layer = s
                .elements()
                .iter()
                .filter(|e| e.rank() == rank)
                .fold(seen, |m, e| m | e.image_mask());
            let fresh = layer & !seen;
            let i = levels.len();
            if fresh.count_ones() as u128 > 1u128 << i.min(127) {
                return Err(Error::NotCrossSection(format!(
                    "W'_{i} has {} points, more than 2^{i}",
                    fresh.count_ones()
                )));
            }
            if fresh == 0 {
                return Err(Error::NotCrossSection(format!("W'_{i} is empty")));
            }
            levels.push((1..=n as u8).filter(|&x| fresh >> (x - 1) & 1 == 1).collect());
            seen = layer;
        }
        Ok(WChain { levels })
    }

    /// Level of each label, in label order.
    pub fn level_of_labels(&self, n: usize) -> Vec<usize> {
        let mut out = vec![0; n];
        for (i, layer) in self.levels.iter().enumerate() {
            for &x in layer {
                out[x as usize - 1] = i;
            }
        }
        out
    }
}

/// Recovers the decreasing tree of an R-cross-section from its W-chain.
pub fn reconstruct_tree(s: &CrossSection) -> Result<OrderedTree> {
    if s.relation() != GreenRelation::R {
        return Err(Error::NotCrossSection("an R-cross-section is required".into()));
    }
    s.validate()?;
    let chain = WChain::from_section(s)?;
    let t = OrderedTree::from_levels(&chain.level_of_labels(s.n()))
        .map_err(|e| Error::NotCrossSection(format!("W-chain levels do not form a search tree: {e}")))?;
    require_decreasing(&t)?;
    let back = PhiSemigroup::new(&t)?.to_cross_section();
    if back != *s {
        return Err(Error::NotCrossSection(format!(
            "the tree {t} read from the W-chain generates a different section"
        )));
    }
    Ok(t)
}
