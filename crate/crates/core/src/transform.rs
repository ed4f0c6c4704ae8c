//! Total transformations of the chain `1 < 2 < ... < n`.
//!
//! Points are 1-based everywhere in the public API. Transformations act on
//! the right, so a composite `a.compose(b)` first applies `a` and then `b`:
//! `x(ab) = (xa)b`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{ConvexPartition, SetPartition};

/// Largest chain length any value in this crate can describe. Image sets
/// are packed into a `u64`.
pub const MAX_POINTS: usize = 64;

/// A total map of `{1..n}` into itself, stored as its image sequence.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawTransformation", into = "RawTransformation")]
pub struct Transformation {
    images: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
struct RawTransformation {
    n: usize,
    images: Vec<u32>,
}

impl TryFrom<RawTransformation> for Transformation {
    type Error = Error;

    fn try_from(raw: RawTransformation) -> Result<Self> {
        if raw.images.len() != raw.n {
            return Err(Error::domain(format!(
                "transformation declares n = {} but lists {} images",
                raw.n,
                raw.images.len()
            )));
        }
        Transformation::from_slice(&raw.images)
    }
}

impl From<Transformation> for RawTransformation {
    fn from(t: Transformation) -> Self {
        RawTransformation {
            n: t.n(),
            images: t.images.iter().map(|&x| x as u32).collect(),
        }
    }
}

impl Transformation {
    /// Builds a transformation from its 1-based image sequence.
    pub fn new(images: Vec<u8>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::domain("a transformation needs at least one point"));
        }
        if n > MAX_POINTS {
            return Err(Error::domain(format!("n = {n} exceeds {MAX_POINTS} points")));
        }
        if let Some(bad) = images.iter().find(|&&y| y == 0 || y as usize > n) {
            return Err(Error::domain(format!("image {bad} lies outside 1..={n}")));
        }
        Ok(Transformation { images })
    }

    pub fn from_slice<T: Copy + TryInto<u8>>(images: &[T]) -> Result<Self> {
        let mut out = Vec::with_capacity(images.len());
        for &y in images {
            let y: u8 = y.try_into().map_err(|_| Error::domain("image value out of range"))?;
            out.push(y);
        }
        Transformation::new(out)
    }

    /// Caller guarantees the images are valid.
    pub(crate) fn from_vec_unchecked(images: Vec<u8>) -> Self {
        debug_assert!(images.iter().all(|&y| y >= 1 && y as usize <= images.len()));
        Transformation { images }
    }

    pub fn identity(n: usize) -> Self {
        assert!((1..=MAX_POINTS).contains(&n));
        Transformation {
            images: (1..=n as u8).collect(),
        }
    }

    /// `const_x` on `n` points.
    pub fn constant(n: usize, x: u8) -> Self {
        assert!((1..=MAX_POINTS).contains(&n) && x >= 1 && x as usize <= n);
        Transformation { images: vec![x; n] }
    }

    /// The order-preserving map sending the i-th block of `kernel` to `values[i]`.
    pub fn from_blocks(kernel: &ConvexPartition, values: &[u8]) -> Result<Self> {
        if kernel.block_count() != values.len() {
            return Err(Error::domain(format!(
                "{} blocks but {} values",
                kernel.block_count(),
                values.len()
            )));
        }
        let mut images = Vec::with_capacity(kernel.n());
        for (block, &v) in kernel.blocks().zip(values) {
            images.extend(block.map(|_| v));
        }
        Transformation::new(images)
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    /// `x` applied to this map (`xα`), 1-based.
    pub fn apply(&self, x: u8) -> u8 {
        self.images[x as usize - 1]
    }

    /// Left-to-right composite: first `self`, then `other`.
    pub fn compose(&self, other: &Transformation) -> Result<Transformation> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(self.then(other))
    }

    pub(crate) fn then(&self, other: &Transformation) -> Transformation {
        Transformation {
            images: self.images.iter().map(|&y| other.apply(y)).collect(),
        }
    }

    pub fn is_order_preserving(&self) -> bool {
        self.images.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn is_idempotent(&self) -> bool {
        self.images.iter().all(|&y| self.apply(y) == y)
    }

    pub fn is_constant(&self) -> bool {
        self.images.iter().all(|&y| y == self.images[0])
    }

    /// Image as a sorted set of points.
    pub fn image(&self) -> BTreeSet<u8> {
        self.images.iter().copied().collect()
    }

    /// Image as a bitmask, bit `x - 1` for point `x`.
    pub fn image_mask(&self) -> u64 {
        self.images.iter().fold(0, |m, &y| m | (1u64 << (y - 1)))
    }

    pub fn rank(&self) -> usize {
        self.image_mask().count_ones() as usize
    }

    /// Kernel of an order-preserving map as a convex partition.
    pub fn kernel(&self) -> Result<ConvexPartition> {
        if !self.is_order_preserving() {
            return Err(Error::domain(
                "convex kernel requested for a map that is not order-preserving",
            ));
        }
        let n = self.n();
        let ends: Vec<u8> = (1..=n)
            .filter(|&x| x == n || self.images[x - 1] != self.images[x])
            .map(|x| x as u8)
            .collect();
        ConvexPartition::new(n, ends)
    }

    /// Kernel of an arbitrary map, blocks ordered by their least element.
    pub fn set_kernel(&self) -> SetPartition {
        let n = self.n();
        let mut blocks: Vec<Vec<u8>> = Vec::new();
        let mut slot = vec![usize::MAX; n + 1];
        for x in 1..=n as u8 {
            let y = self.apply(x) as usize;
            if slot[y] == usize::MAX {
                slot[y] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[slot[y]].push(x);
        }
        SetPartition::from_blocks_unchecked(n, blocks)
    }

    /// Higgins' map `α ↦ α*` from `O_n` into `O_{n+1}`.
    ///
    /// With `k_1 < ... < k_t` the block maxima of `ker α` and `r_i = k_i α`,
    /// `xα* = 1` for `x ≤ r_1`, `k_i + 1` for `r_i < x ≤ r_{i+1}`, and `n + 1`
    /// for `x > r_t`. It reverses products: `(αβ)* = β*α*`.
    pub fn higgins_dual(&self) -> Result<Transformation> {
        let kernel = self.kernel()?;
        let n = self.n();
        if n + 1 > MAX_POINTS {
            return Err(Error::domain("dual would exceed the point limit"));
        }
        let ks: Vec<u8> = kernel.right_ends().to_vec();
        let rs: Vec<u8> = ks.iter().map(|&k| self.apply(k)).collect();
        let t = ks.len();
        let images = (1..=(n + 1) as u8)
            .map(|x| {
                if x <= rs[0] {
                    1
                } else if x > rs[t - 1] {
                    (n + 1) as u8
                } else {
                    let i = (0..t - 1)
                        .find(|&i| rs[i] < x && x <= rs[i + 1])
                        .expect("image values of an order-preserving map are increasing");
                    ks[i] + 1
                }
            })
            .collect();
        Transformation::new(images)
    }

    /// Two-row notation: kernel blocks followed by their images.
    pub fn two_row(&self) -> (String, String) {
        let kernel = self.set_kernel();
        let top: Vec<String> = kernel.blocks().iter().map(|b| block_label(b)).collect();
        let bottom: Vec<String> = kernel.blocks().iter().map(|b| self.apply(b[0]).to_string()).collect();
        let widths: Vec<usize> = top.iter().zip(&bottom).map(|(a, b)| a.len().max(b.len())).collect();
        let pad = |cells: &[String]| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:^w$}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        (pad(&top), pad(&bottom))
    }
}

pub(crate) fn block_label(block: &[u8]) -> String {
    let sep = if block.iter().any(|&x| x >= 10) { "," } else { "" };
    let body: Vec<String> = block.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", body.join(sep))
}

impl fmt::Debug for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kernel = self.set_kernel();
        let blocks: String = kernel.blocks().iter().map(|b| block_label(b)).collect();
        let values: Vec<String> = kernel.blocks().iter().map(|b| self.apply(b[0]).to_string()).collect();
        write!(f, "({} -> {})", blocks, values.join(","))
    }
}

/// Every order-preserving map of an `n`-chain, lexicographic by image sequence.
#[derive(Clone, Debug)]
pub struct OrderPreservingMaps {
    current: Option<Vec<u8>>,
}

impl Iterator for OrderPreservingMaps {
    type Item = Transformation;

    fn next(&mut self) -> Option<Transformation> {
        let cur = self.current.take()?;
        let n = cur.len() as u8;
        let out = Transformation::from_vec_unchecked(cur.clone());
        // next nondecreasing sequence: bump the rightmost entry below n and
        // flatten the tail to that value
        let mut next = cur;
        if let Some(i) = (0..next.len()).rev().find(|&i| next[i] < n) {
            let v = next[i] + 1;
            for slot in &mut next[i..] {
                *slot = v;
            }
            self.current = Some(next);
        }
        Some(out)
    }
}

/// Streams `O_n` in lexicographic order of image sequences.
pub fn enumerate_on(n: usize, limits: &crate::Limits) -> Result<OrderPreservingMaps> {
    if n == 0 || n > limits.on_max {
        return Err(Error::Guard {
            what: "enumerating O_n",
            n,
            limit: limits.on_max,
        });
    }
    Ok(OrderPreservingMaps {
        current: Some(vec![1; n]),
    })
}
