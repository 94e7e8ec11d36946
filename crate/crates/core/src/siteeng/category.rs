//! Finite categories with a dense composition table, and sieves on them.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::BitSet;

use super::SiteError;

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismDesc {
    pub id: String,
    pub src: String,
    pub dst: String,
}

/// File form of a category. `compose` lists `[g, f, g∘f]`; composites with an
/// identity may be omitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryDesc {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismDesc>,
    #[serde(default)]
    pub compose: Vec<[String; 3]>,
    pub identities: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<String>,
    names: Vec<String>,
    src: Vec<usize>,
    dst: Vec<usize>,
    identity: Vec<usize>,
    /// `comp[g * m + f] = g∘f`, or `NONE` when `dst f != src g`.
    comp: Vec<u32>,
    into: Vec<Vec<usize>>,
    out_of: Vec<Vec<usize>>,
    principal: Vec<BitSet>,
}

impl FinCategory {
    /// Build and validate from raw parts. `compose(g, f)` is consulted for
    /// every composable pair with neither side an identity.
    pub fn from_parts(
        objects: Vec<String>,
        morphisms: Vec<(String, usize, usize)>,
        identity: Vec<usize>,
        mut compose: impl FnMut(usize, usize) -> Option<usize>,
    ) -> Result<FinCategory, SiteError> {
        let n = objects.len();
        let m = morphisms.len();
        for (name, s, d) in &morphisms {
            if *s >= n || *d >= n {
                return Err(SiteError::DanglingMorphism(name.clone()));
            }
        }
        if identity.len() != n {
            return Err(SiteError::MissingIdentity(
                objects.get(identity.len()).cloned().unwrap_or_default(),
            ));
        }
        for (o, &i) in identity.iter().enumerate() {
            if i >= m || morphisms[i].1 != o || morphisms[i].2 != o {
                return Err(SiteError::MissingIdentity(objects[o].clone()));
            }
        }
        let src: Vec<usize> = morphisms.iter().map(|x| x.1).collect();
        let dst: Vec<usize> = morphisms.iter().map(|x| x.2).collect();
        let names: Vec<String> = morphisms.into_iter().map(|x| x.0).collect();
        let is_id: Vec<bool> = (0..m).map(|f| identity[src[f]] == f && dst[f] == src[f]).collect();
        let mut comp = vec![NONE; m * m];
        for g in 0..m {
            for f in 0..m {
                if dst[f] != src[g] {
                    continue;
                }
                let gf = if is_id[g] {
                    f
                } else if is_id[f] {
                    g
                } else {
                    let h = compose(g, f).ok_or_else(|| SiteError::MissingComposite {
                        g: names[g].clone(),
                        f: names[f].clone(),
                    })?;
                    if h >= m || src[h] != src[f] || dst[h] != dst[g] {
                        return Err(SiteError::BadComposite {
                            g: names[g].clone(),
                            f: names[f].clone(),
                        });
                    }
                    h
                };
                comp[g * m + f] = gf as u32;
            }
        }
        let mut into = vec![Vec::new(); n];
        let mut out_of = vec![Vec::new(); n];
        for f in 0..m {
            into[dst[f]].push(f);
            out_of[src[f]].push(f);
        }
        let mut cat = FinCategory {
            objects,
            names,
            src,
            dst,
            identity,
            comp,
            into,
            out_of,
            principal: Vec::new(),
        };
        cat.check_associative()?;
        cat.principal = (0..m)
            .map(|f| BitSet::from_iter(m, cat.into[cat.src[f]].iter().map(|&g| cat.compose(f, g).unwrap())))
            .collect();
        Ok(cat)
    }

    fn check_associative(&self) -> Result<(), SiteError> {
        let m = self.names.len();
        for h in 0..m {
            for &g in &self.into[self.src[h]] {
                let hg = self.compose(h, g).unwrap();
                for &f in &self.into[self.src[g]] {
                    let gf = self.compose(g, f).unwrap();
                    if self.compose(hg, f) != self.compose(h, gf) {
                        return Err(SiteError::NonAssociative {
                            h: self.names[h].clone(),
                            g: self.names[g].clone(),
                            f: self.names[f].clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn from_desc(desc: &CategoryDesc) -> Result<FinCategory, SiteError> {
        let obj_idx: BTreeMap<&str, usize> =
            desc.objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
        let mor_idx: BTreeMap<&str, usize> =
            desc.morphisms.iter().enumerate().map(|(i, f)| (f.id.as_str(), i)).collect();
        if mor_idx.len() != desc.morphisms.len() || obj_idx.len() != desc.objects.len() {
            return Err(SiteError::Duplicate);
        }
        let morphisms = desc
            .morphisms
            .iter()
            .map(|f| {
                match (obj_idx.get(f.src.as_str()), obj_idx.get(f.dst.as_str())) {
                    (Some(&s), Some(&d)) => Ok((f.id.clone(), s, d)),
                    _ => Err(SiteError::DanglingMorphism(f.id.clone())),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let identity = desc
            .objects
            .iter()
            .map(|o| {
                desc.identities
                    .get(o)
                    .and_then(|i| mor_idx.get(i.as_str()).copied())
                    .ok_or_else(|| SiteError::MissingIdentity(o.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut table = BTreeMap::new();
        for [g, f, gf] in &desc.compose {
            let look = |s: &String| {
                mor_idx.get(s.as_str()).copied().ok_or_else(|| SiteError::DanglingMorphism(s.clone()))
            };
            table.insert((look(g)?, look(f)?), look(gf)?);
        }
        FinCategory::from_parts(desc.objects.clone(), morphisms, identity, |g, f| {
            table.get(&(g, f)).copied()
        })
    }

    pub fn to_desc(&self) -> CategoryDesc {
        let m = self.names.len();
        let mut compose = Vec::new();
        for g in 0..m {
            for f in 0..m {
                if let Some(gf) = self.compose(g, f) {
                    if !self.is_identity(g) && !self.is_identity(f) {
                        compose.push([
                            self.names[g].clone(),
                            self.names[f].clone(),
                            self.names[gf].clone(),
                        ]);
                    }
                }
            }
        }
        CategoryDesc {
            objects: self.objects.clone(),
            morphisms: (0..m)
                .map(|f| MorphismDesc {
                    id: self.names[f].clone(),
                    src: self.objects[self.src[f]].clone(),
                    dst: self.objects[self.dst[f]].clone(),
                })
                .collect(),
            compose,
            identities: self
                .identity
                .iter()
                .enumerate()
                .map(|(o, &i)| (self.objects[o].clone(), self.names[i].clone()))
                .collect(),
        }
    }

    /// The opposite category, with the same object and morphism names.
    pub fn opposite(&self) -> FinCategory {
        let m = self.names.len();
        let morphisms = (0..m).map(|f| (self.names[f].clone(), self.dst[f], self.src[f])).collect();
        FinCategory::from_parts(self.objects.clone(), morphisms, self.identity.clone(), |g, f| {
            self.compose(f, g)
        })
        .expect("opposite of a valid category is valid")
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.names.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_name(&self, o: usize) -> &str {
        &self.objects[o]
    }

    pub fn morphism_name(&self, f: usize) -> &str {
        &self.names[f]
    }

    pub fn object_index(&self, name: &str) -> Result<usize, SiteError> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| SiteError::UnknownObject(name.to_string()))
    }

    pub fn morphism_index(&self, name: &str) -> Result<usize, SiteError> {
        self.names
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| SiteError::UnknownMorphism(name.to_string()))
    }

    pub fn src(&self, f: usize) -> usize {
        self.src[f]
    }

    pub fn dst(&self, f: usize) -> usize {
        self.dst[f]
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identity[o]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identity[self.src[f]] == f
    }

    /// `g∘f` when `dst f = src g`.
    #[inline]
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        let v = self.comp[g * self.names.len() + f];
        (v != NONE).then_some(v as usize)
    }

    pub fn morphisms_into(&self, d: usize) -> &[usize] {
        &self.into[d]
    }

    pub fn morphisms_from(&self, d: usize) -> &[usize] {
        &self.out_of[d]
    }

    pub fn hom(&self, a: usize, b: usize) -> impl Iterator<Item = usize> + '_ {
        self.out_of[a].iter().copied().filter(move |&f| self.dst[f] == b)
    }

    // ---- sieves (sets of morphisms into an object closed under precomposition)

    pub fn empty_sieve(&self) -> BitSet {
        BitSet::new(self.names.len())
    }

    pub fn max_sieve(&self, d: usize) -> BitSet {
        BitSet::from_iter(self.names.len(), self.into[d].iter().copied())
    }

    /// `{ f∘g }` over all `g` into `src f`.
    pub fn principal_sieve(&self, f: usize) -> &BitSet {
        &self.principal[f]
    }

    pub fn generate_sieve(&self, d: usize, gens: &[usize]) -> Result<BitSet, SiteError> {
        let mut s = self.empty_sieve();
        for &f in gens {
            if f >= self.names.len() || self.dst[f] != d {
                return Err(SiteError::InvalidGenerator {
                    morphism: self.names.get(f).cloned().unwrap_or_default(),
                    object: self.objects[d].clone(),
                });
            }
            s.union_with(&self.principal[f]);
        }
        Ok(s)
    }

    pub fn is_sieve(&self, d: usize, s: &BitSet) -> bool {
        s.iter().all(|f| f < self.names.len() && self.dst[f] == d && self.principal[f].is_subset(s))
    }

    /// `f*S = { g : f∘g ∈ S }`, a sieve on `src f`.
    pub fn pullback(&self, f: usize, s: &BitSet) -> BitSet {
        let mut out = self.empty_sieve();
        for &g in &self.into[self.src[f]] {
            if s.contains(self.compose(f, g).unwrap()) {
                out.insert(g);
            }
        }
        out
    }

    /// Minimal generators: members not of the form `f∘g` with `g` a non-identity
    /// and `f` in the sieve, after collapsing mutually factoring morphisms.
    pub fn sieve_generators(&self, s: &BitSet) -> Vec<usize> {
        let mut gens: Vec<usize> = Vec::new();
        let mut covered = self.empty_sieve();
        let mut members: Vec<usize> = s.iter().collect();
        members.sort_by_key(|&f| std::cmp::Reverse(self.principal[f].len()));
        for f in members {
            if !covered.contains(f) {
                gens.push(f);
                covered.union_with(&self.principal[f]);
            }
        }
        gens.sort();
        gens
    }

    /// Every sieve on `d`, as unions of principal sieves, ordered by size then bits.
    pub fn all_sieves(&self, d: usize) -> Vec<BitSet> {
        let mut seen: HashSet<BitSet> = HashSet::new();
        let start = self.empty_sieve();
        seen.insert(start.clone());
        let mut stack = vec![start];
        while let Some(s) = stack.pop() {
            for &f in &self.into[d] {
                if s.contains(f) {
                    continue;
                }
                let t = s.union(&self.principal[f]);
                if seen.insert(t.clone()) {
                    stack.push(t);
                }
            }
        }
        let mut out: Vec<BitSet> = seen.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter())));
        out
    }

    pub fn format_sieve(&self, s: &BitSet) -> String {
        let parts: Vec<String> = s.iter().map(|f| self.format_morphism(f)).collect();
        format!("{{{}}}", parts.join(", "))
    }

    pub fn format_morphism(&self, f: usize) -> String {
        format!("{}: {}->{}", self.names[f], self.objects[self.src[f]], self.objects[self.dst[f]])
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn validation_examples() {
        assert_eq!(point().num_morphisms(), 1);
        assert_eq!(cospan().num_morphisms(), 5);
        // a non-associative monoid table on {1, e, t}: t∘t = e, e∘t = e, t∘e = t, e∘e = e
        let bad = r#"{"objects":["*"],
            "morphisms":[{"id":"1","src":"*","dst":"*"},{"id":"e","src":"*","dst":"*"},{"id":"t","src":"*","dst":"*"}],
            "compose":[["e","e","e"],["e","t","e"],["t","e","t"],["t","t","e"]],
            "identities":{"*":"1"}}"#;
        let r = FinCategory::from_desc(&serde_json::from_str(bad).unwrap());
        assert!(matches!(r, Err(SiteError::NonAssociative { .. })), "{r:?}");
        let missing = r#"{"objects":["a"],"morphisms":[{"id":"f","src":"a","dst":"a"}],"identities":{}}"#;
        assert!(matches!(
            FinCategory::from_desc(&serde_json::from_str(missing).unwrap()),
            Err(SiteError::MissingIdentity(_))
        ));
        let dangling = r#"{"objects":["a"],"morphisms":[{"id":"1","src":"a","dst":"a"},{"id":"f","src":"a","dst":"z"}],"identities":{"a":"1"}}"#;
        assert!(matches!(
            FinCategory::from_desc(&serde_json::from_str(dangling).unwrap()),
            Err(SiteError::DanglingMorphism(_))
        ));
    }

    #[test]
    fn generation_examples() {
        let c = cospan();
        let p = c.object_index("p").unwrap();
        let id = c.identity(p);
        assert_eq!(c.generate_sieve(p, &[id]).unwrap(), c.max_sieve(p));
        assert!(c.generate_sieve(p, &[]).unwrap().is_empty());
        let qp = c.morphism_index("qp").unwrap();
        assert_eq!(c.generate_sieve(p, &[qp]).unwrap().iter().collect::<Vec<_>>(), [qp]);
        let q = c.object_index("q").unwrap();
        assert!(matches!(c.generate_sieve(q, &[qp]), Err(SiteError::InvalidGenerator { .. })));
        assert_eq!(c.all_sieves(p).len(), 5);
    }

    #[test]
    fn desc_round_trip() {
        let c = cospan();
        let again = FinCategory::from_desc(&c.to_desc()).unwrap();
        assert_eq!(again, c);
        assert_eq!(c.opposite().opposite(), c);
    }
}
