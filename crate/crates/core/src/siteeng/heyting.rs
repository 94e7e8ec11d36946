//! Heyting structure of closed sieves: negation, De Morgan and Boolean tests,
//! dense topologies and the DeMorganization by lattice search.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::BitSet;

use super::{FinCategory, SiteError, Topology};

/// The closed sieves on one object, with negation precomputed by brute force.
#[derive(Clone, Debug)]
pub struct ClosedLattice {
    pub object: usize,
    /// Closed sieves ordered by size, then members.
    pub elements: Vec<BitSet>,
    index: HashMap<BitSet, usize>,
    neg: Vec<usize>,
    bottom: usize,
    top: usize,
}

fn closure_fn<'a>(
    site: &'a FinCategory,
    top: &'a Topology,
    d: usize,
) -> impl Fn(&BitSet) -> BitSet + 'a {
    let trivial = top.is_trivial(site);
    move |s: &BitSet| if trivial { s.clone() } else { top.closure(site, d, s) }
}

impl ClosedLattice {
    pub fn new(site: &FinCategory, top: &Topology, d: usize) -> ClosedLattice {
        let cl = closure_fn(site, top, d);
        let start = cl(&site.empty_sieve());
        let mut seen: HashSet<BitSet> = HashSet::new();
        seen.insert(start.clone());
        let mut stack = vec![start.clone()];
        while let Some(c) = stack.pop() {
            for &f in site.morphisms_into(d) {
                if c.contains(f) {
                    continue;
                }
                let next = cl(&c.union(site.principal_sieve(f)));
                if seen.insert(next.clone()) {
                    stack.push(next);
                }
            }
        }
        let mut elements: Vec<BitSet> = seen.into_iter().collect();
        elements.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter())));
        let index: HashMap<BitSet, usize> =
            elements.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let bottom = index[&start];
        let top_idx = index[&site.max_sieve(d)];
        let bot = &elements[bottom];
        let neg = elements
            .iter()
            .map(|c| {
                let mut join = site.empty_sieve();
                for t in &elements {
                    if t.intersection(c).is_subset(bot) {
                        join.union_with(t);
                    }
                }
                index[&cl(&join)]
            })
            .collect();
        ClosedLattice { object: d, elements, index, neg, bottom, top: top_idx }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, s: &BitSet) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn neg_index(&self, i: usize) -> usize {
        self.neg[i]
    }

    pub fn bottom(&self) -> &BitSet {
        &self.elements[self.bottom]
    }

    pub fn top(&self) -> &BitSet {
        &self.elements[self.top]
    }

    /// Closed join of two lattice elements.
    fn join(&self, site: &FinCategory, top: &Topology, a: usize, b: usize) -> usize {
        let u = self.elements[a].union(&self.elements[b]);
        let c = if top.is_trivial(site) { u } else { top.closure(site, self.object, &u) };
        self.index[&c]
    }
}

/// Pseudo-complement of a closed sieve in the lattice of closed sieves.
pub fn heyting_neg(
    site: &FinCategory,
    top: &Topology,
    d: usize,
    s: &BitSet,
) -> Result<BitSet, SiteError> {
    let lat = ClosedLattice::new(site, top, d);
    let i = lat.index_of(s).ok_or_else(|| {
        SiteError::InternalError(format!("{} is not a closed sieve", site.format_sieve(s)))
    })?;
    Ok(lat.elements[lat.neg_index(i)].clone())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeMorganReport {
    pub holds: bool,
    /// First failing object and closed sieve.
    pub witness: Option<(usize, BitSet)>,
}

fn check_lattices(
    site: &FinCategory,
    top: &Topology,
    law: impl Fn(&ClosedLattice, usize) -> usize,
) -> DeMorganReport {
    for d in 0..site.num_objects() {
        let lat = ClosedLattice::new(site, top, d);
        for i in 0..lat.len() {
            let j = law(&lat, i);
            if lat.join(site, top, j, lat.neg_index(i)) != lat.top {
                return DeMorganReport { holds: false, witness: Some((d, lat.elements[i].clone())) };
            }
        }
    }
    DeMorganReport { holds: true, witness: None }
}

/// `¬S ∨ ¬¬S` is maximal for every closed sieve on every object.
pub fn is_demorgan(site: &FinCategory, top: &Topology) -> DeMorganReport {
    check_lattices(site, top, |lat, i| lat.neg_index(lat.neg_index(i)))
}

/// `S ∨ ¬S` is maximal for every closed sieve on every object.
pub fn is_boolean(site: &FinCategory, top: &Topology) -> DeMorganReport {
    check_lattices(site, top, |_, i| i)
}

/// Covers are the sieves whose closure has trivial negation.
pub fn dense_topology(site: &FinCategory, top: &Topology) -> Result<Topology, SiteError> {
    let mut least = Vec::with_capacity(site.num_objects());
    let mut dense_sets = Vec::with_capacity(site.num_objects());
    for d in 0..site.num_objects() {
        let lat = ClosedLattice::new(site, top, d);
        let all = site.all_sieves(d);
        let dense: Vec<bool> = all
            .iter()
            .map(|s| {
                let c = top.closure(site, d, s);
                lat.neg_index(lat.index[&c]) == lat.bottom
            })
            .collect();
        let mut m = site.max_sieve(d);
        for (s, &ok) in all.iter().zip(&dense) {
            if ok {
                m = m.intersection(s);
            }
        }
        least.push(m);
        dense_sets.push((all, dense));
    }
    let out = Topology::from_least(least);
    out.check_axioms(site).map_err(SiteError::InternalError)?;
    for (d, (all, dense)) in dense_sets.iter().enumerate() {
        for (s, &ok) in all.iter().zip(dense) {
            if ok != out.covers(d, s) {
                return Err(SiteError::InternalError(format!(
                    "dense sieves on {} are not a filter",
                    site.object_name(d)
                )));
            }
        }
    }
    Ok(out)
}

/// Every cover of `finer` has a closure (for `base`) with trivial negation.
pub fn is_dense_over(
    site: &FinCategory,
    base: &Topology,
    finer: &Topology,
) -> Result<bool, SiteError> {
    if !base.is_contained_in(finer) {
        return Err(SiteError::NotARefinement);
    }
    Ok((0..site.num_objects()).all(|d| {
        let lat = ClosedLattice::new(site, base, d);
        let c = base.closure(site, d, finer.least_cover(d));
        lat.neg_index(lat.index[&c]) == lat.bottom
    }))
}

/// All topologies `T` with `low ⊆ T ⊆ high`, by adding one cover of `high`
/// at a time and saturating.
pub fn intermediate_topologies(
    site: &FinCategory,
    low: &Topology,
    high: &Topology,
) -> Vec<Topology> {
    let candidates: Vec<(usize, BitSet)> = (0..site.num_objects())
        .flat_map(|d| {
            site.all_sieves(d)
                .into_iter()
                .filter(move |s| high.covers(d, s))
                .map(move |s| (d, s))
        })
        .collect();
    let mut seen: HashSet<Topology> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(low.clone());
    queue.push_back(low.clone());
    let mut out = Vec::new();
    while let Some(t) = queue.pop_front() {
        for (d, s) in &candidates {
            if t.covers(*d, s) {
                continue;
            }
            let next = t.refine(site, &[(*d, s.clone())]);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
        out.push(t);
    }
    out
}

/// Smallest topology between `top` and its dense topology whose sheaves
/// satisfy De Morgan's law, i.e. the largest dense De Morgan subtopos.
pub fn demorganization(site: &FinCategory, top: &Topology) -> Result<Topology, SiteError> {
    let dense = dense_topology(site, top)?;
    let candidates: Vec<Topology> = intermediate_topologies(site, top, &dense)
        .into_iter()
        .filter(|t| is_demorgan(site, t).holds)
        .collect();
    let minimal: Vec<&Topology> = candidates
        .iter()
        .filter(|t| !candidates.iter().any(|u| u != *t && u.is_contained_in(t)))
        .collect();
    match minimal.as_slice() {
        [only] => Ok((*only).clone()),
        other => Err(SiteError::AmbiguousMaximum(other.len())),
    }
}
