//! Presheaves on a finite site and the sheaf condition.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::BitSet;

use super::{FinCategory, SiteError, Topology};

/// File form: element lists per object and, per morphism `f: e -> d`, the
/// restriction map `P(d) -> P(e)`. Identity actions may be omitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresheafDesc {
    pub sets: BTreeMap<String, Vec<Value>>,
    #[serde(default)]
    pub actions: BTreeMap<String, BTreeMap<String, Value>>,
}

/// A contravariant functor `site -> Set` given by finite tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presheaf {
    pub elements: Vec<Vec<String>>,
    /// `action[f][x]`: restriction of `x ∈ P(dst f)` along `f`.
    pub action: Vec<Vec<usize>>,
}

fn label(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl Presheaf {
    pub fn from_desc(site: &FinCategory, desc: &PresheafDesc) -> Result<Presheaf, SiteError> {
        let bad = |m: String| SiteError::InvalidPresheaf(m);
        let mut elements = vec![Vec::new(); site.num_objects()];
        for (obj, elems) in &desc.sets {
            let d = site.object_index(obj).map_err(|e| bad(e.to_string()))?;
            elements[d] = elems.iter().map(label).collect();
        }
        for (d, names) in elements.iter().enumerate() {
            if !desc.sets.contains_key(site.object_name(d)) {
                return Err(bad(format!("no set for object {}", site.object_name(d))));
            }
            if names.iter().collect::<HashSet<_>>().len() != names.len() {
                return Err(bad(format!("repeated element at {}", site.object_name(d))));
            }
        }
        let mut action = Vec::with_capacity(site.num_morphisms());
        for f in 0..site.num_morphisms() {
            let (e, d) = (site.src(f), site.dst(f));
            let table = match desc.actions.get(site.morphism_name(f)) {
                Some(t) => t,
                None if site.is_identity(f) => {
                    action.push((0..elements[d].len()).collect());
                    continue;
                }
                None => return Err(bad(format!("no action for {}", site.morphism_name(f)))),
            };
            let row = elements[d]
                .iter()
                .map(|x| {
                    let y = table
                        .get(x)
                        .ok_or_else(|| bad(format!("{} undefined on {x}", site.morphism_name(f))))?;
                    let y = label(y);
                    elements[e]
                        .iter()
                        .position(|z| *z == y)
                        .ok_or_else(|| bad(format!("{y} is not in P({})", site.object_name(e))))
                })
                .collect::<Result<Vec<_>, _>>()?;
            action.push(row);
        }
        let p = Presheaf { elements, action };
        p.check_functor(site)?;
        Ok(p)
    }

    pub fn to_desc(&self, site: &FinCategory) -> PresheafDesc {
        PresheafDesc {
            sets: (0..site.num_objects())
                .map(|d| {
                    let v = self.elements[d].iter().map(|x| Value::String(x.clone())).collect();
                    (site.object_name(d).to_string(), v)
                })
                .collect(),
            actions: (0..site.num_morphisms())
                .map(|f| {
                    let e = site.src(f);
                    let t = self.elements[site.dst(f)]
                        .iter()
                        .zip(&self.action[f])
                        .map(|(x, &y)| (x.clone(), Value::String(self.elements[e][y].clone())))
                        .collect();
                    (site.morphism_name(f).to_string(), t)
                })
                .collect(),
        }
    }

    fn check_functor(&self, site: &FinCategory) -> Result<(), SiteError> {
        for d in 0..site.num_objects() {
            let id = site.identity(d);
            if self.action[id].iter().enumerate().any(|(x, &y)| x != y) {
                return Err(SiteError::InvalidPresheaf(format!(
                    "identity on {} acts nontrivially",
                    site.object_name(d)
                )));
            }
        }
        for g in 0..site.num_morphisms() {
            for &f in site.morphisms_into(site.src(g)) {
                let gf = site.compose(g, f).unwrap();
                for x in 0..self.elements[site.dst(g)].len() {
                    if self.action[gf][x] != self.action[f][self.action[g][x]] {
                        return Err(SiteError::InvalidPresheaf(format!(
                            "restriction along {} is not functorial",
                            site.morphism_name(gf)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `Hom(-, c)`.
    pub fn representable(site: &FinCategory, c: usize) -> Presheaf {
        let homs: Vec<Vec<usize>> =
            (0..site.num_objects()).map(|d| site.hom(d, c).collect()).collect();
        let elements = homs
            .iter()
            .map(|hs| hs.iter().map(|&h| site.morphism_name(h).to_string()).collect())
            .collect();
        let action = (0..site.num_morphisms())
            .map(|f| {
                let e = site.src(f);
                homs[site.dst(f)]
                    .iter()
                    .map(|&h| {
                        let hf = site.compose(h, f).unwrap();
                        homs[e].iter().position(|&k| k == hf).unwrap()
                    })
                    .collect()
            })
            .collect();
        Presheaf { elements, action }
    }

    /// Number of matching families on `s`, stopping once `limit` is exceeded.
    pub fn matching_families(&self, site: &FinCategory, s: &BitSet, limit: usize) -> usize {
        let mut members: Vec<usize> = s.iter().collect();
        members.sort_by_key(|&f| std::cmp::Reverse(site.principal_sieve(f).len()));
        let pos: Vec<Option<usize>> = {
            let mut v = vec![None; site.num_morphisms()];
            for (i, &f) in members.iter().enumerate() {
                v[f] = Some(i);
            }
            v
        };
        // constraints x_{f∘h} = P(h)(x_f), attached to whichever end is assigned last
        let mut checks: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); members.len()];
        for (i, &f) in members.iter().enumerate() {
            for &h in site.morphisms_into(site.src(f)) {
                let fh = site.compose(f, h).unwrap();
                let j = pos[fh].expect("sieve is closed under precomposition");
                checks[i.max(j)].push((i, h, j));
            }
        }
        let mut assign = vec![usize::MAX; members.len()];
        let mut count = 0;
        self.extend(site, &members, &checks, &mut assign, 0, &mut count, limit);
        count
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &self,
        site: &FinCategory,
        members: &[usize],
        checks: &[Vec<(usize, usize, usize)>],
        assign: &mut Vec<usize>,
        k: usize,
        count: &mut usize,
        limit: usize,
    ) {
        if *count > limit {
            return;
        }
        if k == members.len() {
            *count += 1;
            return;
        }
        for x in 0..self.elements[site.src(members[k])].len() {
            assign[k] = x;
            if checks[k].iter().all(|&(i, h, j)| assign[j] == self.action[h][assign[i]]) {
                self.extend(site, members, checks, assign, k + 1, count, limit);
            }
        }
        assign[k] = usize::MAX;
    }

    /// Unique amalgamation of matching families on the sieve `s` on `d`.
    pub fn is_sheaf_for(&self, site: &FinCategory, d: usize, s: &BitSet) -> bool {
        let n = self.elements[d].len();
        let restrictions: HashSet<Vec<usize>> =
            (0..n).map(|x| s.iter().map(|f| self.action[f][x]).collect()).collect();
        restrictions.len() == n && self.matching_families(site, s, n) == n
    }
}

/// Sheaf condition for every cover. It suffices to test the least cover of
/// each object: an amalgamation on `M(d) ⊆ S` is unique on `S`, and it
/// restricts correctly along `f ∈ S` because both candidates agree on the
/// cover `f*M(d) ⊇ M(src f)`.
pub fn is_sheaf(site: &FinCategory, top: &Topology, p: &Presheaf) -> bool {
    (0..site.num_objects()).all(|d| p.is_sheaf_for(site, d, top.least_cover(d)))
}
