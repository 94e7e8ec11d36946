//! Grothendieck topologies stored by their least cover on each object.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::BitSet;

use super::{FinCategory, SiteError};

/// A topology on a finite site. The covers of `d` are exactly the sieves
/// containing `least[d]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Topology {
    least: Vec<BitSet>,
}

/// File form: generators of covering sieves per object; the engine saturates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyDesc {
    pub covers: BTreeMap<String, Vec<Vec<String>>>,
}

impl Topology {
    /// Only maximal sieves cover.
    pub fn trivial(site: &FinCategory) -> Topology {
        Topology { least: (0..site.num_objects()).map(|d| site.max_sieve(d)).collect() }
    }

    pub fn from_least(least: Vec<BitSet>) -> Topology {
        Topology { least }
    }

    /// Least topology in which every listed sieve covers its object.
    pub fn saturate(site: &FinCategory, precoverage: &[(usize, BitSet)]) -> Topology {
        Topology::trivial(site).refine(site, precoverage)
    }

    /// Least topology containing `self` and the listed covers.
    pub fn refine(&self, site: &FinCategory, extra: &[(usize, BitSet)]) -> Topology {
        let mut least = self.least.clone();
        for (d, s) in extra {
            least[*d] = least[*d].intersection(s);
        }
        // greatest family below the generators that is stable and transitive
        loop {
            let mut changed = false;
            for f in 0..site.num_morphisms() {
                let (e, d) = (site.src(f), site.dst(f));
                let pulled = site.pullback(f, &least[d]);
                if !least[e].is_subset(&pulled) {
                    least[e] = least[e].intersection(&pulled);
                    changed = true;
                }
            }
            for d in 0..site.num_objects() {
                let comp = composite(site, &least[d], &least);
                if !least[d].is_subset(&comp) {
                    least[d] = least[d].intersection(&comp);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        Topology { least }
    }

    pub fn least_cover(&self, d: usize) -> &BitSet {
        &self.least[d]
    }

    pub fn least_covers(&self) -> &[BitSet] {
        &self.least
    }

    pub fn covers(&self, d: usize, s: &BitSet) -> bool {
        self.least[d].is_subset(s)
    }

    pub fn is_trivial(&self, site: &FinCategory) -> bool {
        (0..site.num_objects()).all(|d| self.least[d].same(&site.max_sieve(d)))
    }

    /// `{ f : f*S covers }`.
    pub fn closure(&self, site: &FinCategory, d: usize, s: &BitSet) -> BitSet {
        let mut out = site.empty_sieve();
        for &f in site.morphisms_into(d) {
            if s.contains(f) || self.covers(site.src(f), &site.pullback(f, s)) {
                out.insert(f);
            }
        }
        out
    }

    /// Every cover of `self` is a cover of `other`.
    pub fn is_contained_in(&self, other: &Topology) -> bool {
        self.least.iter().zip(&other.least).all(|(a, b)| b.is_subset(a))
    }

    /// Number of covering sieves summed over objects.
    pub fn cover_count(&self, site: &FinCategory) -> usize {
        (0..site.num_objects())
            .map(|d| site.all_sieves(d).iter().filter(|s| self.covers(d, s)).count())
            .sum()
    }

    /// Check maximality, stability and transitivity; the filter form makes
    /// upward closure automatic.
    pub fn check_axioms(&self, site: &FinCategory) -> Result<(), String> {
        for d in 0..site.num_objects() {
            if !site.is_sieve(d, &self.least[d]) {
                return Err(format!("least cover on {} is not a sieve", site.object_name(d)));
            }
        }
        for f in 0..site.num_morphisms() {
            let pulled = site.pullback(f, &self.least[site.dst(f)]);
            if !self.least[site.src(f)].is_subset(&pulled) {
                return Err(format!("not stable along {}", site.format_morphism(f)));
            }
        }
        for d in 0..site.num_objects() {
            if !self.least[d].is_subset(&composite(site, &self.least[d], &self.least)) {
                return Err(format!("not transitive at {}", site.object_name(d)));
            }
        }
        Ok(())
    }

    pub fn from_desc(site: &FinCategory, desc: &TopologyDesc) -> Result<Topology, SiteError> {
        let mut pre = Vec::new();
        for (obj, sieves) in &desc.covers {
            let d = site.object_index(obj)?;
            for gens in sieves {
                let ids = gens
                    .iter()
                    .map(|g| site.morphism_index(g))
                    .collect::<Result<Vec<_>, _>>()?;
                pre.push((d, site.generate_sieve(d, &ids)?));
            }
        }
        Ok(Topology::saturate(site, &pre))
    }

    /// Generators of the least cover on every object.
    pub fn to_desc(&self, site: &FinCategory) -> TopologyDesc {
        TopologyDesc {
            covers: (0..site.num_objects())
                .map(|d| {
                    let gens = site
                        .sieve_generators(&self.least[d])
                        .into_iter()
                        .map(|f| site.morphism_name(f).to_string())
                        .collect();
                    (site.object_name(d).to_string(), vec![gens])
                })
                .collect(),
        }
    }
}

/// `{ f∘g : f ∈ S, g ∈ M(src f) }`.
fn composite(site: &FinCategory, s: &BitSet, least: &[BitSet]) -> BitSet {
    let mut out = site.empty_sieve();
    for f in s.iter() {
        for g in least[site.src(f)].iter() {
            out.insert(site.compose(f, g).expect("composable"));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RigidityReport {
    pub rigid: bool,
    /// Objects whose only cover is the maximal sieve.
    pub irreducibles: Vec<usize>,
    /// Objects where the sieve generated from irreducibles is not the least cover.
    pub failures: Vec<usize>,
}

/// A topology is rigid when every object's least cover is generated by the
/// morphisms into it from irreducible objects.
pub fn rigidity_check(site: &FinCategory, top: &Topology) -> RigidityReport {
    let n = site.num_objects();
    let irreducibles: Vec<usize> =
        (0..n).filter(|&d| top.least_cover(d).same(&site.max_sieve(d))).collect();
    let failures = (0..n)
        .filter(|&d| {
            let gens: Vec<usize> = site
                .morphisms_into(d)
                .iter()
                .copied()
                .filter(|&f| irreducibles.contains(&site.src(f)))
                .collect();
            let s = site.generate_sieve(d, &gens).expect("generators end at d");
            !s.same(top.least_cover(d))
        })
        .collect::<Vec<_>>();
    RigidityReport { rigid: failures.is_empty(), irreducibles, failures }
}

#[cfg(test)]
mod tests {
    use super::super::category::fixtures::*;
    use super::*;

    fn j1(c: &FinCategory) -> Topology {
        let p = c.object_index("p").unwrap();
        let gens = [c.morphism_index("qp").unwrap(), c.morphism_index("rp").unwrap()];
        Topology::saturate(c, &[(p, c.generate_sieve(p, &gens).unwrap())])
    }

    #[test]
    fn saturation_examples() {
        let c = cospan();
        assert_eq!(Topology::saturate(&c, &[]), Topology::trivial(&c));
        let j = j1(&c);
        j.check_axioms(&c).unwrap();
        let p = c.object_index("p").unwrap();
        assert_eq!(j.least_cover(p).len(), 2);
        // q and r keep only their maximal sieves; p gains one more
        assert_eq!(j.cover_count(&c), 4);
        let again = Topology::saturate(&c, &[(p, j.least_cover(p).clone())]);
        assert_eq!(again, j);
    }

    #[test]
    fn closure_examples() {
        let c = cospan();
        let p = c.object_index("p").unwrap();
        let qp = c.morphism_index("qp").unwrap();
        let s = c.generate_sieve(p, &[qp]).unwrap();
        let triv = Topology::trivial(&c);
        for d in 0..3 {
            for s in c.all_sieves(d) {
                assert_eq!(triv.closure(&c, d, &s), s);
            }
        }
        let j = j1(&c);
        assert_eq!(j.closure(&c, p, &s), s);
        assert_eq!(j.closure(&c, p, j.least_cover(p)), c.max_sieve(p));
    }

    #[test]
    fn closure_is_a_closure_operator() {
        let c = cospan();
        let j = j1(&c);
        for d in 0..3 {
            let all = c.all_sieves(d);
            for s in &all {
                let cs = j.closure(&c, d, s);
                assert!(s.is_subset(&cs));
                assert_eq!(j.closure(&c, d, &cs), cs);
                assert_eq!(cs.same(&c.max_sieve(d)), j.covers(d, s));
                for t in &all {
                    if s.is_subset(t) {
                        assert!(cs.is_subset(&j.closure(&c, d, t)));
                    }
                }
            }
        }
    }

    #[test]
    fn rigidity_examples() {
        let c = cospan();
        let triv = rigidity_check(&c, &Topology::trivial(&c));
        assert!(triv.rigid);
        assert_eq!(triv.irreducibles, [0, 1, 2]);
        let r = rigidity_check(&c, &j1(&c));
        assert!(r.rigid);
        let names: Vec<&str> = r.irreducibles.iter().map(|&o| c.object_name(o)).collect();
        assert_eq!(names, ["q", "r"]);
    }

    #[test]
    fn desc_round_trip() {
        let c = cospan();
        let j = j1(&c);
        let text = serde_json::to_string(&j.to_desc(&c)).unwrap();
        let back = Topology::from_desc(&c, &serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, j);
    }
}
