//! Isomorphism of R-cross-sections read off their trees.
//!
//! Two decreasing trees give isomorphic semigroups when their skeletons line
//! up, either label for label or through `x ↦ n + 1 - x`, and the inner
//! trees of paired elementary components are similar with one common
//! orientation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::iso::{oracle_semigroup_iso, Bijection};
use crate::lsection::{similar, SimilarityKind};
use crate::phi::phi_semigroup;
use crate::tree::{require_decreasing, Component, Gender, OrderedTree};
use crate::Limits;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkeletonVertex {
    pub label: u8,
    pub parent: Option<u8>,
    pub gender: Option<Gender>,
    /// `|p(a) - a|`; absent at the root.
    pub gap: Option<u8>,
}

/// `ω(1) ∪ ω(n)` as a labelled path, sorted by label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkeletonSignature {
    pub n: usize,
    pub root: u8,
    pub vertices: Vec<SkeletonVertex>,
}

impl SkeletonSignature {
    pub fn of(t: &OrderedTree) -> Self {
        let vertices = t
            .skeleton()
            .into_iter()
            .map(|a| {
                let parent = t.parent(a);
                SkeletonVertex {
                    label: a,
                    parent,
                    gender: parent.map(|p| {
                        if t.son(p) == Some(a) {
                            Gender::Son
                        } else {
                            Gender::Daughter
                        }
                    }),
                    gap: parent.map(|p| p.abs_diff(a)),
                }
            })
            .collect();
        SkeletonSignature {
            n: t.n(),
            root: t.root(),
            vertices,
        }
    }

    pub fn mirror(&self) -> Self {
        let flip = |x: u8| self.n as u8 + 1 - x;
        let mut vertices: Vec<SkeletonVertex> = self
            .vertices
            .iter()
            .map(|v| SkeletonVertex {
                label: flip(v.label),
                parent: v.parent.map(flip),
                gender: v.gender.map(|g| match g {
                    Gender::Son => Gender::Daughter,
                    Gender::Daughter => Gender::Son,
                }),
                gap: v.gap,
            })
            .collect();
        vertices.reverse();
        SkeletonSignature {
            n: self.n,
            root: flip(self.root),
            vertices,
        }
    }

    pub fn labels(&self) -> Vec<u8> {
        self.vertices.iter().map(|v| v.label).collect()
    }
}

pub fn skeleton_signature(t: &OrderedTree) -> Result<SkeletonSignature> {
    require_decreasing(t)?;
    Ok(SkeletonSignature::of(t))
}

/// `|Θ^x|` by the recursion `|Θ^rt| = 1`, `|Θ^x| = |Θ^{p(x)}|·|p(x) - x|`.
pub fn theta_cardinality(t: &OrderedTree, x: u8) -> Result<u64> {
    if !t.skeleton().contains(&x) {
        return Err(Error::domain(format!("{x} is not on the skeleton")));
    }
    let mut count = 1u64;
    let mut v = x;
    while let Some(p) = t.parent(v) {
        count *= p.abs_diff(v) as u64;
        v = p;
    }
    Ok(count)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Alignment {
    /// `a♯ = a`.
    Identity,
    /// `a♯ = n + 1 - a`.
    Mirror,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Iso,
    Anti,
    None,
}

/// How the skeleton alignment constrains the orientation of the witnesses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coupling {
    /// Identity alignment with isomorphisms, mirror alignment with
    /// anti-isomorphisms.
    Tied,
    /// Either alignment with either common orientation.
    Free,
}

/// The coupling that agrees with exhaustive search.
pub const ADOPTED_COUPLING: Coupling = Coupling::Free;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentMatch {
    pub vertex: u8,
    pub partner: u8,
    pub similarity: SimilarityKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoVerdict {
    pub isomorphic: bool,
    pub orientation: Orientation,
    pub alignment: Option<Alignment>,
    /// Pairing of components under the alignment that was tried last, or the
    /// successful one.
    pub components: Vec<ComponentMatch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Bijection>,
}

pub fn classify(t1: &OrderedTree, t2: &OrderedTree) -> Result<IsoVerdict> {
    classify_with(t1, t2, ADOPTED_COUPLING)
}

pub fn classify_with(t1: &OrderedTree, t2: &OrderedTree, coupling: Coupling) -> Result<IsoVerdict> {
    if t1.n() != t2.n() {
        return Err(Error::SizeMismatch {
            left: t1.n(),
            right: t2.n(),
        });
    }
    let (s1, s2) = (skeleton_signature(t1)?, skeleton_signature(t2)?);
    let n = t1.n() as u8;
    let mut last = Vec::new();
    for alignment in [Alignment::Identity, Alignment::Mirror] {
        let target = match alignment {
            Alignment::Identity => s1.clone(),
            Alignment::Mirror => s1.mirror(),
        };
        if target != s2 {
            continue;
        }
        let partner = |a: u8| match alignment {
            Alignment::Identity => a,
            Alignment::Mirror => n + 1 - a,
        };
        let matches: Vec<ComponentMatch> = t1
            .elementary_decomposition()
            .iter()
            .map(|c| {
                let b = partner(c.vertex);
                let d = t2.component(b);
                ComponentMatch {
                    vertex: c.vertex,
                    partner: b,
                    similarity: similar(c.tree.inner_tree().shape(), d.tree.inner_tree().shape()).kind(),
                }
            })
            .collect();
        let allows = |o: Orientation| {
            matches.iter().all(|m| {
                matches!(
                    (o, m.similarity),
                    (_, SimilarityKind::Both)
                        | (Orientation::Iso, SimilarityKind::Iso)
                        | (Orientation::Anti, SimilarityKind::Anti)
                )
            })
        };
        let candidates: &[Orientation] = match (coupling, alignment) {
            (Coupling::Tied, Alignment::Identity) => &[Orientation::Iso],
            (Coupling::Tied, Alignment::Mirror) => &[Orientation::Anti],
            (Coupling::Free, _) => &[Orientation::Iso, Orientation::Anti],
        };
        if let Some(&o) = candidates.iter().find(|&&o| allows(o)) {
            return Ok(IsoVerdict {
                isomorphic: true,
                orientation: o,
                alignment: Some(alignment),
                components: matches,
                witness: None,
            });
        }
        last = matches;
    }
    Ok(IsoVerdict {
        isomorphic: false,
        orientation: Orientation::None,
        alignment: None,
        components: last,
        witness: None,
    })
}

/// [`classify`], plus a semigroup isomorphism `Φ(t1) -> Φ(t2)` found by
/// exhaustive search. Fails if the two disagree.
pub fn classify_with_oracle(t1: &OrderedTree, t2: &OrderedTree, limits: &Limits) -> Result<IsoVerdict> {
    let mut verdict = classify(t1, t2)?;
    let (p1, p2) = (phi_semigroup(t1)?, phi_semigroup(t2)?);
    let witness = oracle_semigroup_iso(&p1.to_cross_section(), &p2.to_cross_section(), limits)?;
    if witness.is_some() != verdict.isomorphic {
        return Err(Error::Internal(format!(
            "classification says {} but search says {} for {t1:?} and {t2:?}",
            verdict.isomorphic,
            witness.is_some()
        )));
    }
    verdict.witness = witness;
    Ok(verdict)
}

/// `π^(a,b)`: the vertex map between similar elementary components induced
/// by a witness on their inner trees. Labels are local, `1..=k+1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PiMap {
    pub source: u8,
    pub target: u8,
    pub orientation: Orientation,
    /// `map[x - 1]` is the image of local label `x`.
    pub map: Vec<u8>,
}

impl PiMap {
    /// Fails unless the inner trees are similar with the given orientation.
    pub fn new(source: &Component, target: &Component, orientation: Orientation) -> Result<Self> {
        let (ga, gb) = (source.tree.inner_tree(), target.tree.inner_tree());
        let sim = similar(ga.shape(), gb.shape());
        let witness = match orientation {
            Orientation::Iso => sim.iso,
            Orientation::Anti => sim.anti,
            Orientation::None => None,
        }
        .ok_or_else(|| Error::domain("inner trees are not similar in that orientation"))?;
        let k = source.tree.n() as u8;
        let mut map = vec![0u8; k as usize];
        for (v, &(i, j)) in ga.cells().iter().enumerate() {
            if i != j {
                continue;
            }
            let (y, _) = gb.cells()[witness[v]];
            map[i as usize - 1] = match orientation {
                // x' ψ = y'
                Orientation::Iso => y,
                // x' ψ = (y - 1)'
                _ => y + 1,
            };
        }
        // the one label without a cell of its own
        map[k as usize - 1] = match orientation {
            Orientation::Iso => k,
            _ => 1,
        };
        Ok(PiMap {
            source: source.vertex,
            target: target.vertex,
            orientation,
            map,
        })
    }

    pub fn apply(&self, x: u8) -> u8 {
        self.map[x as usize - 1]
    }

    /// Checks `ω(xπ) = ω(x)π` for every `x` other than the two ends.
    pub fn check_omega_property(&self, source: &Component, target: &Component) -> Result<()> {
        let (ta, tb) = (&source.tree, &target.tree);
        let (a, pa) = (source.local(source.vertex), source.local(source.parent));
        for x in ta.labels().filter(|&x| x != a && x != pa) {
            let mut lhs = tb.omega(self.apply(x));
            let mut rhs: Vec<u8> = ta.omega(x).into_iter().map(|y| self.apply(y)).collect();
            lhs.sort_unstable();
            rhs.sort_unstable();
            if lhs != rhs {
                return Err(Error::Internal(format!("ω({x})π = {rhs:?} but ω({x}π) = {lhs:?}")));
            }
        }
        Ok(())
    }
}
