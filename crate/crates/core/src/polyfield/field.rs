//! Finite fields `F_{p^n}` as `Z/p[x]/(m)` for a canonical irreducible `m`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use super::irreducible::irreducibles_of_degree;
use super::poly::{check_prime, Poly};
use super::PolyError;

/// Fields up to this size get exp/log tables on first use.
const TABLE_LIMIT: u64 = 1 << 16;

/// Element of a finite field, encoded as the base-`p` integer whose `k`-th digit
/// is the coefficient of `alpha^k` (`alpha` the class of `x`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(pub u64);

#[derive(Debug)]
struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

#[derive(Debug)]
struct FieldInner {
    p: u64,
    n: usize,
    modulus: Poly,
    size: u64,
    tables: OnceLock<Option<Tables>>,
}

/// `F_{p^n}`; cheap to clone.
#[derive(Clone, Debug)]
pub struct FiniteField(Arc<FieldInner>);

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.n == other.0.n && self.0.modulus == other.0.modulus
    }
}

impl Eq for FiniteField {}

impl std::hash::Hash for FiniteField {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.n.hash(state);
        self.0.modulus.hash(state);
    }
}

impl PartialOrd for FiniteField {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FiniteField {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.0.p, self.0.n, &self.0.modulus).cmp(&(other.0.p, other.0.n, &other.0.modulus))
    }
}

/// The canonical field: modulus is the least irreducible monic of degree `n`.
pub fn make_field(p: u64, n: usize) -> Result<FiniteField, PolyError> {
    check_prime(p)?;
    if n == 0 {
        return Err(PolyError::InvalidDegree(0));
    }
    let size = p
        .checked_pow(n as u32)
        .filter(|q| *q <= u32::MAX as u64)
        .ok_or(PolyError::FieldTooLarge { p, n })?;
    let modulus = irreducibles_of_degree(p, n)[0].clone();
    Ok(FiniteField(Arc::new(FieldInner { p, n, modulus, size, tables: OnceLock::new() })))
}

impl FiniteField {
    /// Field with an explicitly supplied modulus; must be monic irreducible.
    pub fn with_modulus(modulus: Poly) -> Result<FiniteField, PolyError> {
        let p = modulus.modulus();
        if !super::is_irreducible(&modulus, p)? {
            return Err(PolyError::InvalidPolynomial(modulus.to_string()));
        }
        let n = modulus.deg0();
        let size = p
            .checked_pow(n as u32)
            .filter(|q| *q <= u32::MAX as u64)
            .ok_or(PolyError::FieldTooLarge { p, n })?;
        Ok(FiniteField(Arc::new(FieldInner { p, n, modulus, size, tables: OnceLock::new() })))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> usize {
        self.0.n
    }

    pub fn modulus(&self) -> &Poly {
        &self.0.modulus
    }

    pub fn size(&self) -> u64 {
        self.0.size
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// The class of `x`. For a prime field with modulus `x` this is zero.
    pub fn generator(&self) -> FieldElement {
        if self.0.n == 1 {
            FieldElement(self.from_int(-self.0.modulus.coeff(0)).0)
        } else {
            FieldElement(self.0.p)
        }
    }

    pub fn from_int(&self, c: i64) -> FieldElement {
        FieldElement(c.rem_euclid(self.0.p as i64) as u64)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.0.size).map(FieldElement)
    }

    /// `true` if the element lies in the prime subfield.
    pub fn is_prime_subfield(&self, a: FieldElement) -> bool {
        a.0 < self.0.p
    }

    fn digits(&self, a: FieldElement, out: &mut [u64]) {
        let p = self.0.p;
        let mut v = a.0;
        for d in out.iter_mut().take(self.0.n) {
            *d = v % p;
            v /= p;
        }
    }

    fn encode(&self, digits: &[u64]) -> FieldElement {
        let p = self.0.p;
        FieldElement(digits.iter().take(self.0.n).rev().fold(0, |acc, d| acc * p + d))
    }

    pub fn to_poly(&self, a: FieldElement) -> Poly {
        let mut d = vec![0u64; self.0.n];
        self.digits(a, &mut d);
        Poly::new(d.into_iter().map(|c| c as i64).collect(), self.0.p)
    }

    pub fn from_poly(&self, f: &Poly) -> FieldElement {
        let r = f.reduce(self.0.p).rem(&self.0.modulus);
        let d: Vec<u64> = (0..self.0.n).map(|k| r.coeff(k) as u64).collect();
        self.encode(&d)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.0.p;
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u64;
        let mut w = 1u64;
        for _ in 0..self.0.n {
            out += ((x % p + y % p) % p) * w;
            x /= p;
            y /= p;
            w *= p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let p = self.0.p;
        let mut x = a.0;
        let mut out = 0u64;
        let mut w = 1u64;
        for _ in 0..self.0.n {
            out += ((p - x % p) % p) * w;
            x /= p;
            w *= p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    fn tables(&self) -> Option<&Tables> {
        self.0
            .tables
            .get_or_init(|| (self.0.size <= TABLE_LIMIT).then(|| self.build_tables()))
            .as_ref()
    }

    fn build_tables(&self) -> Tables {
        let q = self.0.size as usize;
        let order = q as u64 - 1;
        let factors = super::irreducible::prime_divisors(order);
        let primitive = (1..q as u64)
            .map(FieldElement)
            .find(|&g| factors.iter().all(|&r| self.poly_pow(g, order / r) != self.one()))
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; q];
        let mut log = vec![0u32; q];
        let mut cur = self.one();
        for k in 0..order as usize {
            exp[k] = cur.0 as u32;
            log[cur.0 as usize] = k as u32;
            cur = self.poly_mul(cur, primitive);
        }
        Tables { exp, log }
    }

    fn poly_mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let n = self.0.n;
        let p = self.0.p;
        let mut da = [0u64; 32];
        let mut db = [0u64; 32];
        self.digits(a, &mut da);
        self.digits(b, &mut db);
        let mut prod = [0u64; 64];
        for i in 0..n {
            if da[i] == 0 {
                continue;
            }
            for j in 0..n {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        // reduce by the monic modulus
        let m = self.0.modulus.coeffs();
        for k in (n..2 * n).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..n {
                prod[k - n + j] = (prod[k - n + j] + c * (p - m[j] as u64)) % p;
            }
        }
        self.encode(&prod[..n])
    }

    fn poly_pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.poly_mul(acc, base);
            }
            base = self.poly_mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return self.zero();
        }
        match self.tables() {
            Some(t) => {
                let order = self.0.size - 1;
                let k = (t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64) % order;
                FieldElement(t.exp[k as usize] as u64)
            }
            None => self.poly_mul(a, b),
        }
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return self.one();
        }
        if a.0 == 0 {
            return self.zero();
        }
        match self.tables() {
            Some(t) => {
                let order = self.0.size - 1;
                let k = (t.log[a.0 as usize] as u128 * e as u128 % order as u128) as usize;
                FieldElement(t.exp[k] as u64)
            }
            None => self.poly_pow(a, e),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        (a.0 != 0).then(|| self.pow(a, self.0.size - 2))
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: FieldElement) -> Option<u64> {
        if a.0 == 0 {
            return None;
        }
        let group = self.0.size - 1;
        let mut ord = group;
        for r in super::irreducible::prime_divisors(group) {
            while ord % r == 0 && self.pow(a, ord / r) == self.one() {
                ord /= r;
            }
        }
        Some(ord)
    }

    pub fn frobenius(&self, a: FieldElement) -> FieldElement {
        self.pow(a, self.0.p)
    }

    /// Evaluate a polynomial over `Z/p` (or `Z`, reduced) at a field element.
    pub fn eval(&self, f: &Poly, a: FieldElement) -> FieldElement {
        f.coeffs()
            .iter()
            .rev()
            .fold(self.zero(), |acc, &c| self.add(self.mul(acc, a), self.from_int(c)))
    }

    pub fn display_element(&self, a: FieldElement) -> String {
        self.to_poly(a).terms()
    }

    pub fn parse_element(&self, s: &str) -> Result<FieldElement, PolyError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let coeffs = super::poly::parse_terms(&compact, 'x').map_err(|_| PolyError::Parse(s.to_string()))?;
        Ok(self.from_poly(&Poly::new(coeffs, self.0.p)))
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; {})", self.0.p, self.0.n, self.0.modulus.terms())
    }
}

/// A field homomorphism `F -> G`, determined by the image of `F`'s generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Embedding {
    pub image: FieldElement,
}

impl Embedding {
    pub fn apply(&self, src: &FiniteField, dst: &FiniteField, a: FieldElement) -> FieldElement {
        dst.eval(&src.to_poly(a), self.image)
    }
}

/// All homomorphisms `F -> G`: the roots of `F`'s modulus in `G`, found by
/// exhaustive search.
pub fn embeddings(src: &FiniteField, dst: &FiniteField) -> Vec<Embedding> {
    if src.p() != dst.p() || dst.degree() % src.degree() != 0 {
        return Vec::new();
    }
    dst.elements()
        .filter(|&b| dst.eval(src.modulus(), b) == dst.zero())
        .map(|image| Embedding { image })
        .collect()
}

/// Minimal polynomial over `Z/p` of a field element: the product of
/// `(X - c)` over its Frobenius conjugates.
pub fn min_poly(field: &FiniteField, a: FieldElement) -> Poly {
    let mut conj = vec![a];
    loop {
        let next = field.frobenius(*conj.last().unwrap());
        if next == a {
            break;
        }
        conj.push(next);
    }
    // coefficients over the field, lowest first
    let mut acc = vec![field.one()];
    for c in conj {
        let mut next = vec![field.zero(); acc.len() + 1];
        for (k, &v) in acc.iter().enumerate() {
            next[k + 1] = field.add(next[k + 1], v);
            next[k] = field.sub(next[k], field.mul(v, c));
        }
        acc = next;
    }
    let coeffs = acc
        .into_iter()
        .map(|v| {
            assert!(field.is_prime_subfield(v), "conjugate product left the prime field");
            v.0 as i64
        })
        .collect();
    Poly::new(coeffs, field.p())
}
