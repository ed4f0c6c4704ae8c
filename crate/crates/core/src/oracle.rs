//! Exhaustive search for cross-sections of `O_n`, and the checks that compare
//! it with the tree constructions.

use std::collections::{BTreeSet, HashMap};
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lsection::{dual_r_cross_section, elementary_from_respectful, enumerate_respectful, l_cross_section};
use crate::partition::ConvexPartition;
use crate::phi::{reconstruct_tree, PhiSemigroup};
use crate::section::{CrossSection, GreenRelation};
use crate::transform::{enumerate_on, Transformation};
use crate::tree::enumerate_decreasing;
use crate::Limits;

/// Outcome of one exhaustive search.
#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub n: usize,
    pub relation: GreenRelation,
    pub found: Vec<CrossSection>,
    pub nodes_explored: u64,
    #[serde(serialize_with = "as_seconds")]
    pub wall_time: Duration,
}

fn as_seconds<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

/// Options for [`brute_force_cross_sections`].
#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    /// Lift the size guard.
    pub force: bool,
    /// Abort once this much wall time has passed.
    pub budget: Option<Duration>,
}

struct Search {
    /// Product table over the enumerated monoid.
    product: Vec<u32>,
    size: usize,
    class_of: Vec<usize>,
    candidates: Vec<Vec<u32>>,
    rep: Vec<Option<u32>>,
    fixed: Vec<u32>,
    found: Vec<Vec<u32>>,
    nodes: u64,
    deadline: Option<(Instant, Duration)>,
}

impl Search {
    /// Fixes `e` as the representative of its class and propagates every
    /// forced product. On a clash the partial assignment stays on `fixed`
    /// for the caller to [`Search::undo`].
    fn assign(&mut self, e: u32) -> std::result::Result<(), ()> {
        let mut queue = vec![e];
        self.rep[self.class_of[e as usize]] = Some(e);
        self.fixed.push(e);
        while let Some(x) = queue.pop() {
            let mut i = 0;
            while i < self.fixed.len() {
                let y = self.fixed[i];
                for p in [
                    self.product[x as usize * self.size + y as usize],
                    self.product[y as usize * self.size + x as usize],
                ] {
                    let c = self.class_of[p as usize];
                    match self.rep[c] {
                        Some(r) if r == p => {}
                        Some(_) => return Err(()),
                        None => {
                            self.rep[c] = Some(p);
                            self.fixed.push(p);
                            queue.push(p);
                        }
                    }
                }
                i += 1;
            }
        }
        Ok(())
    }

    fn undo(&mut self, mark: usize) {
        while self.fixed.len() > mark {
            let e = self.fixed.pop().expect("above mark");
            self.rep[self.class_of[e as usize]] = None;
        }
    }

    fn run(&mut self) -> Result<()> {
        self.nodes += 1;
        if let Some((start, budget)) = self.deadline {
            if self.nodes.is_multiple_of(1024) && start.elapsed() > budget {
                return Err(Error::domain(format!(
                    "search budget of {:.1} s exhausted after {} nodes",
                    budget.as_secs_f64(),
                    self.nodes
                )));
            }
        }
        let Some(class) = self.rep.iter().position(Option::is_none) else {
            let mut chosen: Vec<u32> = self.rep.iter().map(|r| r.expect("complete")).collect();
            chosen.sort_unstable();
            self.found.push(chosen);
            return Ok(());
        };
        for i in 0..self.candidates[class].len() {
            let e = self.candidates[class][i];
            let mark = self.fixed.len();
            if self.assign(e).is_ok() {
                self.run()?;
            }
            self.undo(mark);
        }
        Ok(())
    }
}

/// Every R- or L-cross-section of `O_n`, by backtracking over class
/// representatives with closure propagation.
///
/// Classes are visited by block count (or image size) and then
/// lexicographically; candidates in lexicographic image order.
pub fn brute_force_cross_sections(
    n: usize,
    relation: GreenRelation,
    limits: &Limits,
    options: &SearchOptions,
) -> Result<SearchReport> {
    let cap = match relation {
        GreenRelation::R => limits.brute_r_max,
        GreenRelation::L => limits.brute_l_max,
        other => {
            return Err(Error::domain(format!(
                "exhaustive search supports R and L, not {other}"
            )))
        }
    };
    if n == 0 || (!options.force && n > cap) {
        return Err(Error::Guard {
            what: "exhaustive cross-section search",
            n,
            limit: cap,
        });
    }
    let start = Instant::now();
    let on_limits = Limits {
        on_max: limits.on_max.max(if options.force { n } else { 0 }),
        ..limits.clone()
    };
    let elements: Vec<Transformation> = enumerate_on(n, &on_limits)?.collect();
    let size = elements.len();
    let index: HashMap<&Transformation, u32> = elements.iter().enumerate().map(|(i, e)| (e, i as u32)).collect();
    let mut product = Vec::with_capacity(size * size);
    for a in &elements {
        for b in &elements {
            product.push(index[&a.then(b)]);
        }
    }

    // class keys in visiting order
    let keys: Vec<u64> = match relation {
        GreenRelation::R => ConvexPartition::all(n).iter().map(ConvexPartition::cut_mask).collect(),
        _ => {
            let mut subsets: Vec<u64> = (1..1u64 << n).collect();
            let sorted_points = |m: u64| -> Vec<u32> { (0..n as u32).filter(|i| m >> i & 1 == 1).collect() };
            subsets.sort_by(|&a, &b| {
                a.count_ones()
                    .cmp(&b.count_ones())
                    .then_with(|| sorted_points(a).cmp(&sorted_points(b)))
            });
            subsets
        }
    };
    let class_index: HashMap<u64, usize> = keys.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let key_of = |e: &Transformation| match relation {
        GreenRelation::R => e.kernel().expect("order-preserving").cut_mask(),
        _ => e.image_mask(),
    };
    let class_of: Vec<usize> = elements.iter().map(|e| class_index[&key_of(e)]).collect();
    let mut candidates = vec![Vec::new(); keys.len()];
    for (i, &c) in class_of.iter().enumerate() {
        candidates[c].push(i as u32);
    }

    let mut search = Search {
        product,
        size,
        class_of,
        candidates,
        rep: vec![None; keys.len()],
        fixed: Vec::new(),
        found: Vec::new(),
        nodes: 0,
        deadline: options.budget.map(|b| (start, b)),
    };
    search.run()?;

    let mut found = Vec::with_capacity(search.found.len());
    for chosen in &search.found {
        let s = CrossSection::new(
            n,
            relation,
            chosen.iter().map(|&i| elements[i as usize].clone()).collect(),
        )?;
        s.validate()
            .map_err(|e| Error::Internal(format!("search produced an invalid section: {e}")))?;
        found.push(s);
    }
    found.sort_by(|a, b| a.elements().cmp(b.elements()));
    let before = found.len();
    found.dedup();
    if found.len() != before {
        return Err(Error::Internal("search produced a duplicate section".into()));
    }
    Ok(SearchReport {
        n,
        relation,
        found,
        nodes_explored: search.nodes,
        wall_time: start.elapsed(),
    })
}

/// Result of comparing a construction with exhaustive search.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Verification {
    pub n: usize,
    pub constructed: usize,
    pub searched: usize,
    pub discrepancies: Vec<String>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

fn compare(n: usize, built: Vec<CrossSection>, searched: &[CrossSection], what: &str) -> Verification {
    let mut v = Verification {
        n,
        constructed: built.len(),
        searched: searched.len(),
        discrepancies: Vec::new(),
    };
    let built_set: BTreeSet<Vec<Transformation>> = built.iter().map(|s| s.elements().to_vec()).collect();
    let searched_set: BTreeSet<Vec<Transformation>> = searched.iter().map(|s| s.elements().to_vec()).collect();
    if built_set.len() != built.len() {
        v.discrepancies.push(format!("two {what} give the same section"));
    }
    for s in built_set.difference(&searched_set) {
        v.discrepancies
            .push(format!("constructed but not found by search: {s:?}"));
    }
    for s in searched_set.difference(&built_set) {
        v.discrepancies
            .push(format!("found by search but not constructed: {s:?}"));
    }
    v
}

/// R-cross-sections of `O_n` are exactly the `Φ` of decreasing trees.
pub fn verify_description_theorem(n: usize, limits: &Limits, options: &SearchOptions) -> Result<Verification> {
    let report = brute_force_cross_sections(n, GreenRelation::R, limits, options)?;
    let built = enumerate_decreasing(n, limits)?
        .iter()
        .map(|t| Ok(PhiSemigroup::new(t)?.to_cross_section()))
        .collect::<Result<Vec<_>>>()?;
    Ok(compare(n, built, &report.found, "decreasing trees"))
}

/// L-cross-sections of `O_n` are exactly the `L^Γ` of respectful trees.
pub fn verify_l_theorem(n: usize, limits: &Limits, options: &SearchOptions) -> Result<Verification> {
    let report = brute_force_cross_sections(n, GreenRelation::L, limits, options)?;
    let built = enumerate_respectful(n, limits)?
        .iter()
        .map(l_cross_section)
        .collect::<Result<Vec<_>>>()?;
    Ok(compare(n, built, &report.found, "respectful trees"))
}

/// For R-cross-sections of `O_{n+1}`: two fixed points, an elementary tree,
/// and being the dual of an L-cross-section of `O_n` all coincide. Also
/// checks `(L^Γ)* = Φ(T) \ {const_rt}` for the elementary trees `T` of each
/// respectful `Γ`.
pub fn verify_dual_theorem(n: usize, limits: &Limits, options: &SearchOptions) -> Result<Verification> {
    let mut v = Verification {
        n,
        ..Verification::default()
    };
    let mut duals = BTreeSet::new();
    for g in enumerate_respectful(n, limits)? {
        let l = l_cross_section(&g)?;
        for root in [1u8, n as u8 + 1] {
            let t = elementary_from_respectful(&g, root)?;
            let phi = PhiSemigroup::new(&t)?;
            let lhs: BTreeSet<Transformation> = l
                .elements()
                .iter()
                .map(Transformation::higgins_dual)
                .collect::<Result<_>>()?;
            let constant = Transformation::constant(n + 1, root);
            let rhs: BTreeSet<Transformation> = phi.iter().filter(|a| **a != constant).cloned().collect();
            if lhs != rhs {
                v.discrepancies
                    .push(format!("(L^Γ)* differs from Φ \\ {{const_{root}}} for Γ = {g:?}"));
            }
            let dual = dual_r_cross_section(&l, root)?;
            if dual != phi.to_cross_section() {
                v.discrepancies
                    .push(format!("dual section with const_{root} differs from Φ for Γ = {g:?}"));
            }
            duals.insert(dual.elements().to_vec());
        }
    }
    v.constructed = duals.len();
    let report = brute_force_cross_sections(n + 1, GreenRelation::R, limits, options)?;
    v.searched = report.found.len();
    for s in &report.found {
        let two_fixed = s.fixed_points().len() == 2;
        let elementary = reconstruct_tree(s)?.is_elementary();
        let is_dual = duals.contains(s.elements());
        if two_fixed != elementary || two_fixed != is_dual {
            v.discrepancies.push(format!(
                "{s:?}: two fixed points = {two_fixed}, elementary tree = {elementary}, dual = {is_dual}"
            ));
        }
    }
    Ok(v)
}

/// One row of [`count_summary`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountRow {
    pub n: usize,
    pub order_preserving_maps: usize,
    pub convex_partitions: usize,
    pub decreasing_trees: usize,
    pub r_cross_sections: usize,
    pub respectful_trees: usize,
    pub l_cross_sections: Option<usize>,
    pub two_fixed_point_sections: usize,
    /// Twice the number of respectful trees with `n - 1` leaves.
    pub expected_two_fixed_point_sections: usize,
}

/// Counts for `n = 1..=n_max`; L-sections are searched only within the L guard.
pub fn count_summary(n_max: usize, limits: &Limits) -> Result<Vec<CountRow>> {
    let options = SearchOptions::default();
    (1..=n_max)
        .map(|n| {
            let r = brute_force_cross_sections(n, GreenRelation::R, limits, &options)?;
            let l = if n <= limits.brute_l_max {
                Some(
                    brute_force_cross_sections(n, GreenRelation::L, limits, &options)?
                        .found
                        .len(),
                )
            } else {
                None
            };
            let expected = if n == 1 {
                0
            } else if n == 2 {
                // the only respectful tree with one leaf gives two sections
                2
            } else {
                2 * enumerate_respectful(n - 1, limits)?.len()
            };
            Ok(CountRow {
                n,
                order_preserving_maps: enumerate_on(n, limits)?.count(),
                convex_partitions: 1 << (n - 1),
                decreasing_trees: enumerate_decreasing(n, limits)?.len(),
                r_cross_sections: r.found.len(),
                respectful_trees: enumerate_respectful(n, limits)?.len(),
                l_cross_sections: l,
                two_fixed_point_sections: r.found.iter().filter(|s| s.fixed_points().len() == 2).count(),
                expected_two_fixed_point_sections: expected,
            })
        })
        .collect()
}
