//! Amalgamation of spans and the atomic topology.

use serde::Serialize;

use crate::BitSet;

use super::{FinCategory, SiteError, Topology};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OreReport {
    pub holds: bool,
    /// A span `(f: a -> b, g: a -> c)` with no cocone.
    pub witness: Option<(usize, usize)>,
}

/// Every span `f: a -> b`, `g: a -> c` admits `h: b -> d`, `k: c -> d` with
/// `h∘f = k∘g`.
pub fn ore_check(c: &FinCategory) -> OreReport {
    for a in 0..c.num_objects() {
        let out = c.morphisms_from(a);
        for (i, &f) in out.iter().enumerate() {
            for &g in &out[i + 1..] {
                if !amalgamates(c, f, g) {
                    return OreReport { holds: false, witness: Some((f, g)) };
                }
            }
        }
    }
    OreReport { holds: true, witness: None }
}

fn amalgamates(c: &FinCategory, f: usize, g: usize) -> bool {
    c.morphisms_from(c.dst(f)).iter().any(|&h| {
        let hf = c.compose(h, f).unwrap();
        c.morphisms_from(c.dst(g))
            .iter()
            .any(|&k| c.dst(k) == c.dst(h) && c.compose(k, g) == Some(hf))
    })
}

/// All nonempty sieves on `site` as a topology, if they form one.
pub fn atomic_on_site(site: &FinCategory) -> Result<Topology, SiteError> {
    let mut least = Vec::with_capacity(site.num_objects());
    for d in 0..site.num_objects() {
        // every nonempty sieve contains a principal one
        let mut m = site.max_sieve(d);
        for &f in site.morphisms_into(d) {
            m = m.intersection(site.principal_sieve(f));
        }
        least.push(m);
    }
    for f in 0..site.num_morphisms() {
        for &g in site.morphisms_into(site.dst(f)) {
            let pulled: BitSet = site.pullback(f, site.principal_sieve(g));
            if pulled.is_empty() {
                return Err(SiteError::NotAtomicizable {
                    sieve: site.format_sieve(site.principal_sieve(g)),
                    along: site.format_morphism(f),
                });
            }
        }
    }
    let top = Topology::from_least(least);
    top.check_axioms(site).map_err(SiteError::InternalError)?;
    Ok(top)
}

/// Atomic topology on the site `c^op`, whose sieves are the cosieves of `c`.
pub fn atomic_topology(c: &FinCategory) -> Result<Topology, SiteError> {
    atomic_on_site(&c.opposite())
}

#[cfg(test)]
mod tests {
    use super::super::category::fixtures::*;
    use super::super::dense_topology;
    use super::*;

    fn chain() -> FinCategory {
        desc(
            r#"{"objects":["a","b","c"],
                "morphisms":[{"id":"1a","src":"a","dst":"a"},{"id":"1b","src":"b","dst":"b"},
                             {"id":"1c","src":"c","dst":"c"},{"id":"ab","src":"a","dst":"b"},
                             {"id":"bc","src":"b","dst":"c"},{"id":"ac","src":"a","dst":"c"}],
                "compose":[["bc","ab","ac"]],
                "identities":{"a":"1a","b":"1b","c":"1c"}}"#,
        )
    }

    fn wedge() -> FinCategory {
        desc(
            r#"{"objects":["p","q","r"],
                "morphisms":[{"id":"1p","src":"p","dst":"p"},{"id":"1q","src":"q","dst":"q"},
                             {"id":"1r","src":"r","dst":"r"},{"id":"pq","src":"p","dst":"q"},
                             {"id":"pr","src":"p","dst":"r"}],
                "identities":{"p":"1p","q":"1q","r":"1r"}}"#,
        )
    }

    #[test]
    fn ore_examples() {
        assert!(ore_check(&chain()).holds);
        let w = wedge();
        let r = ore_check(&w);
        assert!(!r.holds);
        let (f, g) = r.witness.unwrap();
        assert_eq!((w.morphism_name(f), w.morphism_name(g)), ("pq", "pr"));
    }

    #[test]
    fn atomic_examples() {
        let a = arrow();
        let t = atomic_topology(&a).unwrap();
        let site = a.opposite();
        for d in 0..2 {
            for s in site.all_sieves(d) {
                assert_eq!(t.covers(d, &s), !s.is_empty());
            }
        }
        assert!(matches!(atomic_topology(&wedge()), Err(SiteError::NotAtomicizable { .. })));
        let pt = point();
        assert_eq!(atomic_topology(&pt).unwrap(), Topology::trivial(&pt));
    }

    #[test]
    fn atomic_matches_dense_under_ore() {
        for c in [chain(), arrow(), point()] {
            let site = c.opposite();
            assert_eq!(
                atomic_topology(&c).unwrap(),
                dense_topology(&site, &Topology::trivial(&site)).unwrap()
            );
        }
    }
}
