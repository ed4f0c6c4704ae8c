//! Convex partitions of a chain and general set partitions.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transform::{block_label, MAX_POINTS};

/// A decomposition of `{1..n}` into consecutive intervals, stored by the
/// right endpoints of its blocks.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConvexPartition {
    n: usize,
    right_ends: Vec<u8>,
}

impl ConvexPartition {
    pub fn new(n: usize, right_ends: Vec<u8>) -> Result<Self> {
        if n == 0 || n > MAX_POINTS {
            return Err(Error::InvalidPartition(format!("n = {n} is out of range")));
        }
        if right_ends.last().map(|&k| k as usize) != Some(n) {
            return Err(Error::InvalidPartition(format!(
                "right ends {right_ends:?} must finish at {n}"
            )));
        }
        if right_ends[0] == 0 || right_ends.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPartition(format!(
                "right ends {right_ends:?} must be strictly increasing from 1"
            )));
        }
        Ok(ConvexPartition { n, right_ends })
    }

    /// Partition whose internal cuts are the set bits of `mask`: bit `i - 1`
    /// cuts between `i` and `i + 1`.
    pub fn from_cut_mask(n: usize, mask: u64) -> Self {
        assert!((1..=MAX_POINTS).contains(&n));
        let mut right_ends: Vec<u8> = (1..n as u8).filter(|&i| mask >> (i - 1) & 1 == 1).collect();
        right_ends.push(n as u8);
        ConvexPartition { n, right_ends }
    }

    pub fn singletons(n: usize) -> Self {
        ConvexPartition::from_cut_mask(n, (1u64 << (n - 1)) - 1)
    }

    pub fn whole(n: usize) -> Self {
        ConvexPartition::from_cut_mask(n, 0)
    }

    /// Reads `"1,2|3,4|5"`: blocks separated by `|`, points by `,`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut next = 1usize;
        let mut right_ends = Vec::new();
        for block in text.trim().split('|') {
            let mut last = None;
            for item in block.split(',') {
                let item = item.trim();
                let x: usize = item
                    .parse()
                    .map_err(|_| Error::InvalidPartition(format!("cannot read point {item:?} in {text:?}")))?;
                if x != next {
                    return Err(Error::InvalidPartition(format!(
                        "expected point {next} but found {x} in {text:?}; blocks must be consecutive intervals listed in order"
                    )));
                }
                next += 1;
                last = Some(x);
            }
            right_ends.push(last.expect("split yields at least one item") as u8);
        }
        ConvexPartition::new(next - 1, right_ends)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn right_ends(&self) -> &[u8] {
        &self.right_ends
    }

    pub fn block_count(&self) -> usize {
        self.right_ends.len()
    }

    pub fn cut_mask(&self) -> u64 {
        self.right_ends[..self.right_ends.len() - 1]
            .iter()
            .fold(0, |m, &k| m | 1u64 << (k - 1))
    }

    pub fn blocks(&self) -> impl Iterator<Item = RangeInclusive<u8>> + '_ {
        let starts = std::iter::once(1).chain(self.right_ends.iter().map(|&k| k + 1));
        starts.zip(self.right_ends.iter()).map(|(a, &b)| a..=b)
    }

    pub fn block(&self, i: usize) -> RangeInclusive<u8> {
        let lo = if i == 0 { 1 } else { self.right_ends[i - 1] + 1 };
        lo..=self.right_ends[i]
    }

    /// Index of the block containing `x`.
    pub fn block_of(&self, x: u8) -> usize {
        self.right_ends.partition_point(|&k| k < x)
    }

    /// All `2^(n-1)` convex partitions, by block count and then right ends.
    pub fn all(n: usize) -> Vec<ConvexPartition> {
        let mut out: Vec<_> = (0..1u64 << (n - 1))
            .map(|m| ConvexPartition::from_cut_mask(n, m))
            .collect();
        out.sort_by(|a, b| (a.block_count(), &a.right_ends).cmp(&(b.block_count(), &b.right_ends)));
        out
    }
}

impl FromStr for ConvexPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ConvexPartition::parse(s)
    }
}

impl fmt::Display for ConvexPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for block in self.blocks() {
            let points: Vec<u8> = block.collect();
            write!(f, "{}", block_label(&points))?;
        }
        Ok(())
    }
}

impl fmt::Debug for ConvexPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An arbitrary partition of `{1..n}`, blocks sorted internally and ordered
/// by their least elements.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<u8>>,
}

impl SetPartition {
    pub(crate) fn from_blocks_unchecked(n: usize, blocks: Vec<Vec<u8>>) -> Self {
        SetPartition { n, blocks }
    }

    pub fn new(n: usize, mut blocks: Vec<Vec<u8>>) -> Result<Self> {
        let mut seen = vec![false; n + 1];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            block.sort_unstable();
            for &x in block.iter() {
                if x == 0 || x as usize > n || std::mem::replace(&mut seen[x as usize], true) {
                    return Err(Error::InvalidPartition(format!(
                        "point {x} is out of range or repeated"
                    )));
                }
            }
        }
        if seen[1..].iter().any(|s| !s) {
            return Err(Error::InvalidPartition("blocks do not cover every point".into()));
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(SetPartition { n, blocks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<u8>] {
        &self.blocks
    }

    /// Every set partition of `{1..n}`, generated through restricted growth
    /// strings in lexicographic order.
    pub fn all(n: usize) -> Vec<SetPartition> {
        let mut out = Vec::new();
        let mut rgs = vec![0usize; n];
        loop {
            let k = rgs.iter().max().map_or(0, |m| m + 1);
            let mut blocks = vec![Vec::new(); k];
            for (i, &b) in rgs.iter().enumerate() {
                blocks[b].push(i as u8 + 1);
            }
            out.push(SetPartition { n, blocks });

            // advance: rightmost position that may still grow
            let mut i = n;
            loop {
                if i <= 1 {
                    return out;
                }
                i -= 1;
                let prefix_max = rgs[..i].iter().max().copied().unwrap_or(0);
                if rgs[i] <= prefix_max {
                    rgs[i] += 1;
                    for r in &mut rgs[i + 1..] {
                        *r = 0;
                    }
                    break;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let k: ConvexPartition = "1,2|3,4|5".parse().unwrap();
        assert_eq!(k.right_ends(), &[2, 4, 5]);
        assert_eq!(k.to_string(), "{12}{34}{5}");
        assert_eq!(k.block_of(3), 1);
        assert_eq!(k.block_of(5), 2);
        assert_eq!(k.block(0), 1..=2);
        assert!(ConvexPartition::parse("1,3|2").is_err());
        assert!(ConvexPartition::parse("1,x").is_err());
        assert!(ConvexPartition::parse("2|1").is_err());
    }

    #[test]
    fn cut_mask_round_trip() {
        for n in 1..=6 {
            for m in 0..1u64 << (n - 1) {
                let k = ConvexPartition::from_cut_mask(n, m);
                assert_eq!(k.cut_mask(), m);
                assert_eq!(k.block_count(), m.count_ones() as usize + 1);
                let covered: Vec<u8> = k.blocks().flatten().collect();
                assert_eq!(covered, (1..=n as u8).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn all_is_sorted_by_block_count() {
        let all = ConvexPartition::all(4);
        assert_eq!(all.len(), 8);
        assert_eq!(all[0], ConvexPartition::whole(4));
        assert_eq!(all[7], ConvexPartition::singletons(4));
        assert_eq!(all[1].right_ends(), &[1, 4]);
    }

    #[test]
    fn set_partitions_match_bell_numbers() {
        // Bell numbers via the triangle, independent of the generator
        let mut row = vec![1u64];
        let mut bell = vec![1u64];
        for _ in 0..6 {
            let mut next = vec![*row.last().unwrap()];
            for &x in &row {
                let v = next.last().unwrap() + x;
                next.push(v);
            }
            bell.push(next[0]);
            row = next;
        }
        for (n, &count) in bell.iter().enumerate().take(7).skip(1) {
            let all = SetPartition::all(n);
            assert_eq!(all.len() as u64, count);
            let unique: std::collections::HashSet<_> = all.iter().cloned().collect();
            assert_eq!(unique.len(), all.len());
        }
    }

    #[test]
    fn set_partition_validation() {
        assert!(SetPartition::new(3, vec![vec![3, 1], vec![2]]).is_ok());
        assert!(SetPartition::new(3, vec![vec![1], vec![2]]).is_err());
        assert!(SetPartition::new(3, vec![vec![1, 2], vec![2, 3]]).is_err());
    }
}
