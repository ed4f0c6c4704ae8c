//! Green's relations and cross-sections.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{ConvexPartition, SetPartition};
use crate::transform::Transformation;
use crate::Limits;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GreenRelation {
    R,
    L,
    H,
    D,
}

impl fmt::Display for GreenRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GreenRelation::R => "R",
            GreenRelation::L => "L",
            GreenRelation::H => "H",
            GreenRelation::D => "D",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for GreenRelation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" | "r" => Ok(GreenRelation::R),
            "L" | "l" => Ok(GreenRelation::L),
            "H" | "h" => Ok(GreenRelation::H),
            "D" | "d" => Ok(GreenRelation::D),
            other => Err(Error::domain(format!("unknown relation {other:?}"))),
        }
    }
}

/// Whether `a` and `b` lie in the same class of `rel`. Kernels are compared
/// as set partitions, so the test is also meaningful outside `O_n`.
pub fn green_related(a: &Transformation, b: &Transformation, rel: GreenRelation) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    let same_kernel = || a.set_kernel() == b.set_kernel();
    let same_image = || a.image_mask() == b.image_mask();
    Ok(match rel {
        GreenRelation::R => same_kernel(),
        GreenRelation::L => same_image(),
        GreenRelation::H => same_kernel() && same_image(),
        GreenRelation::D => a.rank() == b.rank(),
    })
}

/// Which monoid a cross-section is checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Universe {
    /// Order-preserving maps only.
    OrderPreserving,
    /// The full transformation monoid.
    Full,
}

/// A set of transformations claimed to meet every class of a relation once.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSection", into = "RawSection")]
pub struct CrossSection {
    n: usize,
    relation: GreenRelation,
    elements: Vec<Transformation>,
}

#[derive(Serialize, Deserialize)]
struct RawSection {
    n: usize,
    relation: GreenRelation,
    elements: Vec<Transformation>,
}

impl TryFrom<RawSection> for CrossSection {
    type Error = Error;

    fn try_from(raw: RawSection) -> Result<Self> {
        CrossSection::new(raw.n, raw.relation, raw.elements)
    }
}

impl From<CrossSection> for RawSection {
    fn from(s: CrossSection) -> Self {
        RawSection {
            n: s.n,
            relation: s.relation,
            elements: s.elements,
        }
    }
}

impl fmt::Debug for CrossSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-section of {} points {:?}", self.relation, self.n, self.elements)
    }
}

impl CrossSection {
    /// Collects `elements` (sorted, duplicates dropped). No section property
    /// is checked here; see [`CrossSection::validate`].
    pub fn new(n: usize, relation: GreenRelation, mut elements: Vec<Transformation>) -> Result<Self> {
        if let Some(bad) = elements.iter().find(|e| e.n() != n) {
            return Err(Error::SizeMismatch {
                left: n,
                right: bad.n(),
            });
        }
        elements.sort();
        elements.dedup();
        Ok(CrossSection { n, relation, elements })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn relation(&self) -> GreenRelation {
        self.relation
    }

    pub fn elements(&self) -> &[Transformation] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, t: &Transformation) -> bool {
        self.elements.binary_search(t).is_ok()
    }

    pub fn is_cross_section(&self) -> bool {
        self.validate().is_ok()
    }

    /// Checks membership in `O_n`, closure, and that every class has exactly
    /// one representative.
    pub fn validate(&self) -> Result<()> {
        self.validate_in(Universe::OrderPreserving)
    }

    pub fn validate_in(&self, universe: Universe) -> Result<()> {
        let n = self.n;
        if universe == Universe::OrderPreserving {
            if let Some(bad) = self.elements.iter().find(|e| !e.is_order_preserving()) {
                return Err(Error::NotCrossSection(format!("{bad} is not order-preserving")));
            }
        }
        let expected = match (self.relation, universe) {
            (GreenRelation::R, Universe::OrderPreserving) => 1usize << (n - 1),
            (GreenRelation::R, Universe::Full) => SetPartition::all(n).len(),
            (GreenRelation::L, _) => (1usize << n) - 1,
            (rel, _) => {
                return Err(Error::NotCrossSection(format!(
                    "validation is implemented for R and L only, not {rel}"
                )))
            }
        };
        let mut keys: HashMap<ClassKey, &Transformation> = HashMap::new();
        for e in &self.elements {
            if let Some(prev) = keys.insert(class_key(e, self.relation), e) {
                return Err(Error::NotCrossSection(format!(
                    "{prev} and {e} represent the same {}-class",
                    self.relation
                )));
            }
        }
        if keys.len() != expected {
            return Err(Error::NotCrossSection(format!(
                "{} of {expected} {}-classes are represented",
                keys.len(),
                self.relation
            )));
        }
        let members: HashSet<&Transformation> = self.elements.iter().collect();
        for a in &self.elements {
            for b in &self.elements {
                let ab = a.then(b);
                if !members.contains(&ab) {
                    return Err(Error::NotCrossSection(format!(
                        "not closed: {a} * {b} = {ab} is missing"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Points fixed by every non-constant element.
    pub fn fixed_points(&self) -> BTreeSet<u8> {
        (1..=self.n as u8)
            .filter(|&x| {
                self.elements
                    .iter()
                    .filter(|e| !e.is_constant())
                    .all(|e| e.apply(x) == x)
            })
            .collect()
    }

    /// The element in the class of `t`, if any.
    pub fn representative_of(&self, t: &Transformation) -> Option<&Transformation> {
        let key = class_key(t, self.relation);
        self.elements.iter().find(|e| class_key(e, self.relation) == key)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum ClassKey {
    Kernel(SetPartition),
    Image(u64),
}

fn class_key(t: &Transformation, rel: GreenRelation) -> ClassKey {
    match rel {
        GreenRelation::L => ClassKey::Image(t.image_mask()),
        _ => ClassKey::Kernel(t.set_kernel()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Ascending,
    Descending,
}

/// The dense R-cross-section: an `m`-block partition goes to `1..m`
/// (ascending) or to `n-m+1..n` (descending).
pub fn dense_cross_section(n: usize, direction: Direction) -> CrossSection {
    let elements = (0..1u64 << (n - 1))
        .map(|mask| {
            let k = ConvexPartition::from_cut_mask(n, mask);
            let m = k.block_count() as u8;
            let offset = match direction {
                Direction::Ascending => 0,
                Direction::Descending => n as u8 - m,
            };
            let values: Vec<u8> = (1..=m).map(|i| i + offset).collect();
            Transformation::from_blocks(&k, &values).expect("values fit in 1..n")
        })
        .collect();
    CrossSection::new(n, GreenRelation::R, elements).expect("all elements have n points")
}

/// Pekhterev's section `R(≺)` of the full transformation monoid: blocks of
/// each set partition, sorted by their `≺`-least points, go to `u_1, u_2, ...`
/// where `order = [u_1, ..., u_n]`.
pub fn pekhterev_r_section(order: &[u8], limits: &Limits) -> Result<CrossSection> {
    let n = order.len();
    if n == 0 || n > limits.tn_max {
        return Err(Error::Guard {
            what: "enumerating set partitions",
            n,
            limit: limits.tn_max,
        });
    }
    let mut rank = vec![usize::MAX; n + 1];
    for (i, &u) in order.iter().enumerate() {
        if u == 0 || u as usize > n || rank[u as usize] != usize::MAX {
            return Err(Error::domain(format!("{order:?} is not a permutation of 1..{n}")));
        }
        rank[u as usize] = i;
    }
    let elements = SetPartition::all(n)
        .into_iter()
        .map(|p| {
            let mut blocks: Vec<&Vec<u8>> = p.blocks().iter().collect();
            blocks.sort_by_key(|b| b.iter().map(|&x| rank[x as usize]).min());
            let mut images = vec![0u8; n];
            for (i, block) in blocks.iter().enumerate() {
                for &x in block.iter() {
                    images[x as usize - 1] = order[i];
                }
            }
            Transformation::from_vec_unchecked(images)
        })
        .collect();
    CrossSection::new(n, GreenRelation::R, elements)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(images: &[u8]) -> Transformation {
        Transformation::new(images.to_vec()).unwrap()
    }

    #[test]
    fn green_examples() {
        let a = t(&[1, 1, 3]);
        assert!(green_related(&a, &t(&[2, 2, 3]), GreenRelation::R).unwrap());
        assert!(green_related(&a, &t(&[1, 3, 3]), GreenRelation::L).unwrap());
        assert!(!green_related(&a, &t(&[1, 3, 3]), GreenRelation::H).unwrap());
        assert!(!green_related(
            &Transformation::identity(3),
            &Transformation::constant(3, 1),
            GreenRelation::D
        )
        .unwrap());
        assert!(green_related(&a, &Transformation::identity(2), GreenRelation::R).is_err());
    }

    #[test]
    fn dense_sections_are_valid() {
        for n in 1..=6 {
            for dir in [Direction::Ascending, Direction::Descending] {
                let s = dense_cross_section(n, dir);
                assert_eq!(s.len(), 1 << (n - 1));
                s.validate().unwrap();
            }
        }
        let one = dense_cross_section(1, Direction::Ascending);
        assert_eq!(one.elements(), &[Transformation::constant(1, 1)]);
    }

    #[test]
    fn removing_identity_breaks_the_section() {
        let s = dense_cross_section(4, Direction::Ascending);
        let rest: Vec<_> = s
            .elements()
            .iter()
            .filter(|e| **e != Transformation::identity(4))
            .cloned()
            .collect();
        let broken = CrossSection::new(4, GreenRelation::R, rest).unwrap();
        assert!(!broken.is_cross_section());
    }

    #[test]
    fn dense_fixed_points() {
        let asc = dense_cross_section(4, Direction::Ascending);
        assert_eq!(asc.fixed_points().into_iter().collect::<Vec<_>>(), vec![1]);
        let desc = dense_cross_section(4, Direction::Descending);
        assert_eq!(desc.fixed_points().into_iter().collect::<Vec<_>>(), vec![4]);
    }

    #[test]
    fn pekhterev_sections() {
        let limits = Limits::default();
        let two = pekhterev_r_section(&[1, 2], &limits).unwrap();
        assert_eq!(two.len(), 2);

        let three = pekhterev_r_section(&[1, 2, 3], &limits).unwrap();
        assert!(three.contains(&t(&[1, 2, 1])));
        three.validate_in(Universe::Full).unwrap();

        for n in 1..=5 {
            let natural: Vec<u8> = (1..=n as u8).collect();
            let full = pekhterev_r_section(&natural, &limits).unwrap();
            let monotone: Vec<_> = full
                .elements()
                .iter()
                .filter(|e| e.is_order_preserving())
                .cloned()
                .collect();
            let restricted = CrossSection::new(n, GreenRelation::R, monotone).unwrap();
            assert_eq!(restricted, dense_cross_section(n, Direction::Ascending));
        }

        let odd = pekhterev_r_section(&[3, 1, 4, 2], &limits).unwrap();
        odd.validate_in(Universe::Full).unwrap();
        assert!(pekhterev_r_section(&[1, 1], &limits).is_err());
        assert!(pekhterev_r_section(&[1, 2, 3, 4, 5, 6, 7], &limits).is_err());
    }

    #[test]
    fn json_shape() {
        let s = dense_cross_section(2, Direction::Ascending);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(
            text,
            r#"{"n":2,"relation":"R","elements":[{"n":2,"images":[1,1]},{"n":2,"images":[1,2]}]}"#
        );
        let back: CrossSection = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }
}
