//! Unital ring homomorphisms between finite regular rings.
//!
//! A map from a product of fields into a field factors through exactly one
//! component, so a hom `R -> S` is a choice, for every component of `S`, of a
//! source component of `R` and a field embedding.

use crate::polyfield::{embeddings, Embedding, FieldElement};

use super::{RegularRing, RingElement};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingHom {
    /// `parts[j] = (i, e)`: target component `j` reads source component `i` through `e`.
    pub parts: Vec<(usize, Embedding)>,
}

impl RingHom {
    pub fn apply(&self, src: &RegularRing, dst: &RegularRing, x: &RingElement) -> RingElement {
        RingElement(
            self.parts
                .iter()
                .zip(dst.components())
                .map(|(&(i, ref e), g)| e.apply(&src.components()[i], g, x.0[i]))
                .collect(),
        )
    }

    /// `after ∘ self` for `self: R -> S` and `after: S -> T`.
    pub fn then(&self, after: &RingHom, s: &RegularRing, t: &RegularRing) -> RingHom {
        let parts = after
            .parts
            .iter()
            .zip(t.components())
            .map(|(&(j, ref outer), tk)| {
                let (i, ref inner) = self.parts[j];
                let mid = &s.components()[j];
                let image: FieldElement = tk.eval(&mid.to_poly(inner.image), outer.image);
                (i, Embedding { image })
            })
            .collect();
        RingHom { parts }
    }

    pub fn is_identity(&self, r: &RegularRing) -> bool {
        self.parts.len() == r.len()
            && self
                .parts
                .iter()
                .enumerate()
                .all(|(j, (i, e))| *i == j && e.image == r.components()[j].generator())
    }
}

/// All unital homomorphisms `R -> S`, in lexicographic order of choices.
pub fn hom_enumerate(r: &RegularRing, s: &RegularRing) -> Vec<RingHom> {
    let options: Vec<Vec<(usize, Embedding)>> = s
        .components()
        .iter()
        .map(|g| {
            r.components()
                .iter()
                .enumerate()
                .flat_map(|(i, f)| embeddings(f, g).into_iter().map(move |e| (i, e)))
                .collect()
        })
        .collect();
    let mut out = vec![Vec::new()];
    for opts in &options {
        let mut next = Vec::with_capacity(out.len() * opts.len());
        for prefix in &out {
            for o in opts {
                let mut v: Vec<(usize, Embedding)> = prefix.clone();
                v.push(o.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out.into_iter().map(|parts| RingHom { parts }).collect()
}
