//! Finite von Neumann regular rings in product-of-fields normal form.
//!
//! A finite commutative regular ring is a finite product of finite fields, so a
//! [`RegularRing`] is stored as a sorted list of canonical [`FiniteField`]s.
//! Rings presented as `F_p[x]/(f)` keep their presentation in an [`Origin`]
//! so that polynomials in `x` can be pushed through the projections.

mod decompose;
mod hom;
mod presented;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::polyfield::{make_field, min_poly, FieldElement, FiniteField, Poly, PolyError};

pub use decompose::{
    decompose_presented, decompose_with, decomposition_strategies, CrtProjection, Decomposition,
    DecompositionStrategy, IdempotentSplitting,
};
pub use hom::{hom_enumerate, RingHom};
pub use presented::PresentedRing;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("element is zero or invertible; no nontrivial idempotent to split on")]
    NotSplittable,
    #[error("F_{p}[x]/({f}) is not regular: the relation has a repeated factor")]
    NotRegular { p: u64, f: String },
    #[error("components have different characteristics")]
    MixedCharacteristic,
    #[error("decomposition routes disagree: {0}")]
    DecompositionMismatch(String),
    #[error("element has {got} components, ring has {want}")]
    ComponentMismatch { got: usize, want: usize },
    #[error("cannot parse ring `{0}`")]
    ParseRing(String),
    #[error("cannot parse element `{0}`")]
    ParseElement(String),
}

/// A ring element as one field element per component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElement(pub Vec<FieldElement>);

/// Record of a presented form `F_p[x]/(f)`: `factors[i]` is the minimal
/// polynomial of the image of `x` in component `i`.
#[derive(Clone, Debug)]
pub struct Origin {
    pub p: u64,
    pub f: Poly,
    pub factors: Vec<Poly>,
    roots: OnceLock<Vec<FieldElement>>,
}

impl PartialEq for Origin {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.f == other.f && self.factors == other.factors
    }
}

impl Eq for Origin {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularRing {
    components: Vec<FiniteField>,
    origin: Option<Origin>,
}

impl RegularRing {
    /// Product of the given fields, sorted into normal form.
    pub fn product(mut components: Vec<FiniteField>) -> Self {
        components.sort();
        RegularRing { components, origin: None }
    }

    pub fn zero_ring() -> Self {
        RegularRing { components: Vec::new(), origin: None }
    }

    /// Build a presented ring from its distinct irreducible factors.
    pub(crate) fn from_factors(p: u64, f: Poly, factors: Vec<Poly>) -> Result<Self, RingError> {
        let mut pairs: Vec<(FiniteField, Poly)> = factors
            .into_iter()
            .map(|g| Ok((make_field(p, g.deg0())?, g)))
            .collect::<Result<_, PolyError>>()?;
        pairs.sort();
        let (components, factors) = pairs.into_iter().unzip();
        Ok(RegularRing {
            components,
            origin: Some(Origin { p, f, factors, roots: OnceLock::new() }),
        })
    }

    pub fn components(&self) -> &[FiniteField] {
        &self.components
    }

    pub fn origin(&self) -> Option<&Origin> {
        self.origin.as_ref()
    }

    pub fn is_zero_ring(&self) -> bool {
        self.components.is_empty()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Number of elements; `None` on overflow.
    pub fn size(&self) -> Option<u128> {
        self.components
            .iter()
            .try_fold(1u128, |acc, f| acc.checked_mul(f.size() as u128))
    }

    /// Same ring up to isomorphism (multiset equality of components).
    pub fn isomorphic(&self, other: &RegularRing) -> bool {
        self.components == other.components
    }

    /// Forget the presentation.
    pub fn normal_form(&self) -> RegularRing {
        RegularRing { components: self.components.clone(), origin: None }
    }

    pub fn zero(&self) -> RingElement {
        RingElement(self.components.iter().map(|f| f.zero()).collect())
    }

    pub fn one(&self) -> RingElement {
        RingElement(self.components.iter().map(|f| f.one()).collect())
    }

    fn check(&self, x: &RingElement) -> Result<(), RingError> {
        if x.0.len() != self.components.len() {
            return Err(RingError::ComponentMismatch { got: x.0.len(), want: self.components.len() });
        }
        Ok(())
    }

    fn zip(
        &self,
        a: &RingElement,
        b: &RingElement,
        op: impl Fn(&FiniteField, FieldElement, FieldElement) -> FieldElement,
    ) -> RingElement {
        RingElement(
            self.components
                .iter()
                .zip(a.0.iter().zip(&b.0))
                .map(|(f, (&x, &y))| op(f, x, y))
                .collect(),
        )
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.zip(a, b, |f, x, y| f.add(x, y))
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.zip(a, b, |f, x, y| f.sub(x, y))
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.zip(a, b, |f, x, y| f.mul(x, y))
    }

    pub fn pow(&self, a: &RingElement, e: u64) -> RingElement {
        RingElement(self.components.iter().zip(&a.0).map(|(f, &x)| f.pow(x, e)).collect())
    }

    pub fn is_zero(&self, a: &RingElement) -> bool {
        a.0.iter().all(|x| x.0 == 0)
    }

    pub fn is_unit(&self, a: &RingElement) -> bool {
        a.0.iter().all(|x| x.0 != 0)
    }

    /// All elements in mixed-radix order (first component varies slowest).
    pub fn elements(&self) -> impl Iterator<Item = RingElement> + '_ {
        let sizes: Vec<u64> = self.components.iter().map(|f| f.size()).collect();
        let total = self.size().expect("ring too large to enumerate");
        (0..total).map(move |mut idx| {
            let mut comps = vec![FieldElement(0); sizes.len()];
            for (k, &s) in sizes.iter().enumerate().rev() {
                comps[k] = FieldElement((idx % s as u128) as u64);
                idx /= s as u128;
            }
            RingElement(comps)
        })
    }

    /// Least `N >= 1` with `x^{N+1} = x`: the lcm of the multiplicative orders
    /// of the nonzero components (a zero component contributes 1).
    pub fn star_exponent(&self, x: &RingElement) -> u64 {
        self.components
            .iter()
            .zip(&x.0)
            .filter_map(|(f, &a)| f.order(a))
            .fold(1u64, num_integer::lcm)
    }

    /// The quasi-inverse `x*`, i.e. `x^{2N-1}` for the least `N` with `x^{N+1} = x`.
    pub fn star(&self, x: &RingElement) -> Result<RingElement, RingError> {
        self.check(x)?;
        let n = self.star_exponent(x);
        Ok(self.pow(x, 2 * n - 1))
    }

    /// Kill-or-invert decomposition along `a`: `R/(a)` keeps the components
    /// where `a` vanishes, `R/(aa* - 1)` the ones where it is invertible.
    pub fn principal_cover(&self, a: &RingElement) -> Result<PrincipalCover, RingError> {
        self.check(a)?;
        let (killed, inverted): (Vec<usize>, Vec<usize>) =
            (0..self.components.len()).partition(|&i| a.0[i].0 == 0);
        Ok(PrincipalCover {
            killed_ring: self.restrict(&killed),
            inverted_ring: self.restrict(&inverted),
            witness: CoverWitness { killed, inverted },
        })
    }

    /// Quotients `(R/(yy*), R/(yy* - 1))` for `y` neither zero nor invertible.
    pub fn split_idempotent(&self, y: &RingElement) -> Result<(RegularRing, RegularRing), RingError> {
        self.check(y)?;
        if self.is_zero(y) || self.is_unit(y) {
            return Err(RingError::NotSplittable);
        }
        let e = self.mul(y, &self.star(y)?);
        let killed: Vec<usize> = (0..self.len()).filter(|&i| e.0[i].0 == 0).collect();
        let kept: Vec<usize> = (0..self.len()).filter(|&i| e.0[i].0 == 1).collect();
        debug_assert_eq!(killed.len() + kept.len(), self.len());
        Ok((self.restrict(&killed), self.restrict(&kept)))
    }

    /// Quotient onto the listed components (in order).
    pub fn restrict(&self, idx: &[usize]) -> RegularRing {
        let components = idx.iter().map(|&i| self.components[i].clone()).collect();
        let origin = self.origin.as_ref().map(|o| {
            let factors: Vec<Poly> = idx.iter().map(|&i| o.factors[i].clone()).collect();
            let f = factors.iter().fold(Poly::one(o.p), |acc, g| acc.mul(g));
            let roots = OnceLock::new();
            if let Some(r) = o.roots.get() {
                let _ = roots.set(idx.iter().map(|&i| r[i]).collect());
            }
            Origin { p: o.p, f, factors, roots }
        });
        RegularRing { components, origin }
    }

    /// Set of characteristics of the component fields; empty for the zero ring.
    pub fn char_set(&self) -> BTreeSet<u64> {
        self.components.iter().map(|f| f.p()).collect()
    }

    /// `{ min_poly(x_i) }` over the components.
    pub fn element_type(&self, x: &RingElement) -> Result<BTreeSet<Poly>, RingError> {
        self.check(x)?;
        if self.char_set().len() > 1 {
            return Err(RingError::MixedCharacteristic);
        }
        Ok(self.components.iter().zip(&x.0).map(|(f, &a)| min_poly(f, a)).collect())
    }

    /// Images of `x` in each component for a presented ring; computed by root
    /// search on first use.
    pub fn presented_roots(&self) -> Option<&[FieldElement]> {
        let o = self.origin.as_ref()?;
        Some(o.roots.get_or_init(|| {
            self.components
                .iter()
                .zip(&o.factors)
                .map(|(field, g)| {
                    field
                        .elements()
                        .find(|&b| field.eval(g, b) == field.zero())
                        .expect("factor has a root in its residue field")
                })
                .collect()
        }))
    }

    /// Image of a polynomial in `x` under the projections of a presented ring.
    pub fn project_poly(&self, g: &Poly) -> Option<RingElement> {
        let roots = self.presented_roots()?;
        Some(RingElement(
            self.components.iter().zip(roots).map(|(f, &r)| f.eval(g, r)).collect(),
        ))
    }

    pub fn display_element(&self, x: &RingElement) -> String {
        let parts: Vec<String> =
            self.components.iter().zip(&x.0).map(|(f, &a)| f.display_element(a)).collect();
        format!("({})", parts.join(", "))
    }

    /// Parse `(c_1, ..., c_k)` with components written as polynomials in the
    /// field generator `x`, or, for presented rings, a single polynomial in `x`.
    pub fn parse_element(&self, s: &str) -> Result<RingElement, RingError> {
        let t = s.trim();
        let err = || RingError::ParseElement(s.to_string());
        if let Some(inner) = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| t.strip_prefix('[').and_then(|r| r.strip_suffix(']')))
        {
            let parts: Vec<&str> =
                if inner.trim().is_empty() { Vec::new() } else { inner.split(',').collect() };
            if parts.len() != self.len() {
                return Err(RingError::ComponentMismatch { got: parts.len(), want: self.len() });
            }
            let comps = self
                .components
                .iter()
                .zip(parts)
                .map(|(f, part)| f.parse_element(part).map_err(|_| err()))
                .collect::<Result<_, _>>()?;
            return Ok(RingElement(comps));
        }
        match &self.origin {
            Some(o) => {
                let g = Poly::parse(t).map_err(|_| err())?.reduce(o.p);
                self.project_poly(&g).ok_or_else(err)
            }
            None if self.len() == 1 => {
                Ok(RingElement(vec![self.components[0].parse_element(t).map_err(|_| err())?]))
            }
            None => Err(err()),
        }
    }

    /// Parse `GF(4) x GF(2)`, `GF(2^3)`, `GF(2)[x]/(x^2+x)` or `0`.
    pub fn parse(s: &str) -> Result<RegularRing, RingError> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || RingError::ParseRing(s.to_string());
        if t == "0" {
            return Ok(RegularRing::zero_ring());
        }
        if let Some(idx) = t.find("[x]/(") {
            let field = parse_gf(&t[..idx]).ok_or_else(err)?;
            if field.degree() != 1 {
                return Err(err());
            }
            let rel = t[idx + 5..].strip_suffix(')').ok_or_else(err)?;
            let f = Poly::parse(rel).map_err(|_| err())?;
            return Ok(decompose_presented(field.p(), &f)?.ring);
        }
        let fields = t
            .split('x')
            .filter(|part| !part.is_empty())
            .map(|part| parse_gf(part).ok_or_else(err))
            .collect::<Result<Vec<_>, _>>()?;
        if fields.is_empty() {
            return Err(err());
        }
        Ok(RegularRing::product(fields))
    }
}

fn parse_gf(s: &str) -> Option<FiniteField> {
    let inner = s.strip_prefix("GF(")?.strip_suffix(')')?;
    let (p, n) = match inner.split_once('^') {
        Some((p, n)) => (p.parse::<u64>().ok()?, n.parse::<usize>().ok()?),
        None => {
            let q: u64 = inner.parse().ok()?;
            let p = (2..=q).find(|d| q % d == 0)?;
            let mut n = 0;
            let mut r = q;
            while r % p == 0 {
                r /= p;
                n += 1;
            }
            if r != 1 {
                return None;
            }
            (p, n)
        }
    };
    make_field(p, n).ok()
}

impl fmt::Display for RegularRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" x "))?;
        if let Some(o) = &self.origin {
            write!(f, "  [= GF({})[x]/({})]", o.p, o.f.terms())?;
        }
        Ok(())
    }
}

/// Bijection `R -> R/(a) x R/(aa* - 1)` recorded by the component indices
/// each side keeps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverWitness {
    pub killed: Vec<usize>,
    pub inverted: Vec<usize>,
}

impl CoverWitness {
    pub fn apply(&self, x: &RingElement) -> (RingElement, RingElement) {
        (
            RingElement(self.killed.iter().map(|&i| x.0[i]).collect()),
            RingElement(self.inverted.iter().map(|&i| x.0[i]).collect()),
        )
    }

    pub fn invert(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let n = self.killed.len() + self.inverted.len();
        let mut out = vec![FieldElement(0); n];
        for (k, &i) in self.killed.iter().enumerate() {
            out[i] = a.0[k];
        }
        for (k, &i) in self.inverted.iter().enumerate() {
            out[i] = b.0[k];
        }
        RingElement(out)
    }
}

#[derive(Clone, Debug)]
pub struct PrincipalCover {
    /// `R/(a)`
    pub killed_ring: RegularRing,
    /// `R/(aa* - 1)`
    pub inverted_ring: RegularRing,
    pub witness: CoverWitness,
}
