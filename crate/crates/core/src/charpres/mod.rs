//! Characteristic sets of regular rings presented by one generator `x`,
//! integer relations and inversion constraints.
//!
//! A prime `p` is a characteristic of the presented ring iff some field of
//! characteristic `p` contains a common root of the relations at which every
//! inverted polynomial is nonzero. Over `Z/p` and over `Q` this reduces to
//! gcds: take the radical of the gcd of the relations and divide out every
//! factor it shares with an inverted polynomial; a root survives iff the
//! residue is nonconstant.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::polyfield::zpoly::{content, resultant, to_bigints, QPoly};
use crate::polyfield::{enumerate_irreducibles, factor_distinct, is_prime, squarefree_part, Poly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharError {
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime bound must be at least 2, got {0}")]
    BoundTooSmall(u64),
    #[error("{p} is not a characteristic of the ring, so the fiber is empty")]
    EmptyFiber { p: u64 },
    #[error("certificate N={certificate} fails at p={p}: {detail}")]
    DichotomyViolation { p: u64, certificate: String, detail: String },
}

/// Relations `n·1 = 0` and `g(x) = 0`, with the listed polynomials and primes
/// made invertible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PresentationDesc", into = "PresentationDesc")]
pub struct Presentation {
    pub modulus_n: u64,
    pub relations: Vec<Poly>,
    pub invert_polys: Vec<Poly>,
    pub invert_primes: BTreeSet<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct PresentationDesc {
    #[serde(default)]
    modulus_n: u64,
    #[serde(default)]
    relations: Vec<String>,
    #[serde(default)]
    invert_polys: Vec<String>,
    #[serde(default)]
    invert_primes: Vec<u64>,
}

fn parse_integer_poly(s: &str) -> Result<Poly, CharError> {
    let f = Poly::parse(s).map_err(|e| CharError::InvalidPresentation(e.to_string()))?;
    if f.modulus() != 0 {
        return Err(CharError::InvalidPresentation(format!("`{s}` must have integer coefficients")));
    }
    Ok(f)
}

impl TryFrom<PresentationDesc> for Presentation {
    type Error = CharError;
    fn try_from(d: PresentationDesc) -> Result<Self, CharError> {
        let relations = d.relations.iter().map(|s| parse_integer_poly(s)).collect::<Result<_, _>>()?;
        let invert_polys =
            d.invert_polys.iter().map(|s| parse_integer_poly(s)).collect::<Result<_, _>>()?;
        Presentation::new(d.modulus_n, relations, invert_polys, d.invert_primes)
    }
}

impl From<Presentation> for PresentationDesc {
    fn from(p: Presentation) -> Self {
        PresentationDesc {
            modulus_n: p.modulus_n,
            relations: p.relations.iter().map(Poly::terms).collect(),
            invert_polys: p.invert_polys.iter().map(Poly::terms).collect(),
            invert_primes: p.invert_primes.into_iter().collect(),
        }
    }
}

impl Presentation {
    pub fn new(
        modulus_n: u64,
        relations: Vec<Poly>,
        invert_polys: Vec<Poly>,
        invert_primes: impl IntoIterator<Item = u64>,
    ) -> Result<Presentation, CharError> {
        let invert_primes: BTreeSet<u64> = invert_primes.into_iter().collect();
        if let Some(&q) = invert_primes.iter().find(|&&q| !is_prime(q)) {
            return Err(CharError::NotPrime(q));
        }
        if let Some(f) = relations.iter().chain(&invert_polys).find(|f| f.modulus() != 0) {
            return Err(CharError::InvalidPresentation(format!("{f} must have integer coefficients")));
        }
        Ok(Presentation { modulus_n, relations, invert_polys, invert_primes })
    }

    /// `Z[x]` with no relations.
    pub fn free() -> Presentation {
        Presentation {
            modulus_n: 0,
            relations: Vec::new(),
            invert_polys: Vec::new(),
            invert_primes: BTreeSet::new(),
        }
    }

    pub fn with_modulus(mut self, n: u64) -> Self {
        self.modulus_n = n;
        self
    }

    pub fn with_relation(mut self, g: Poly) -> Self {
        self.relations.push(g);
        self
    }

    pub fn with_inverse(mut self, u: Poly) -> Self {
        self.invert_polys.push(u);
        self
    }

    pub fn with_inverted_prime(mut self, q: u64) -> Result<Self, CharError> {
        if !is_prime(q) {
            return Err(CharError::NotPrime(q));
        }
        self.invert_primes.insert(q);
        Ok(self)
    }

    pub fn from_json(s: &str) -> Result<Presentation, CharError> {
        serde_json::from_str(s).map_err(|e| CharError::InvalidPresentation(e.to_string()))
    }

    fn nonzero_relations(&self) -> impl Iterator<Item = &Poly> {
        self.relations.iter().filter(|g| !g.is_zero())
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut rels: Vec<String> = Vec::new();
        if self.modulus_n != 0 {
            rels.push(self.modulus_n.to_string());
        }
        rels.extend(self.nonzero_relations().map(Poly::terms));
        write!(f, "Z[x]")?;
        if !rels.is_empty() {
            write!(f, "/({})", rels.join(", "))?;
        }
        let inv: Vec<String> = self
            .invert_primes
            .iter()
            .map(u64::to_string)
            .chain(self.invert_polys.iter().map(Poly::terms))
            .collect();
        if !inv.is_empty() {
            write!(f, "[1/({})]", inv.join(", "))?;
        }
        Ok(())
    }
}

/// Divide out of `r` every factor it shares with one of `us` (mod p).
fn strip_mod_p(mut r: Poly, us: &[Poly]) -> Poly {
    for u in us {
        loop {
            let g = r.gcd(u);
            if g.deg0() == 0 {
                break;
            }
            r = r.div_rem(&g).0;
        }
    }
    r
}

fn strip_q(mut r: QPoly, us: &[QPoly]) -> QPoly {
    for u in us {
        loop {
            let g = r.gcd(u);
            if g.degree().unwrap_or(0) == 0 {
                break;
            }
            r = r.div_rem(&g).0;
        }
    }
    r
}

/// The reduced picture of a presentation over `F_p`.
enum Fiber {
    Empty,
    /// No relation survives: `x` may be transcendental.
    Free,
    /// Radical of the effective relation with shared factors removed.
    Residue(Poly),
}

fn fiber(pres: &Presentation, p: u64) -> Fiber {
    if pres.invert_primes.contains(&p) || (pres.modulus_n != 0 && pres.modulus_n % p != 0) {
        return Fiber::Empty;
    }
    let reduced: Vec<Poly> =
        pres.relations.iter().map(|g| g.reduce(p)).filter(|g| !g.is_zero()).collect();
    let us: Vec<Poly> = pres.invert_polys.iter().map(|u| u.reduce(p)).collect();
    if reduced.is_empty() {
        return if us.iter().all(|u| !u.is_zero()) { Fiber::Free } else { Fiber::Empty };
    }
    if reduced.iter().any(|g| g.is_constant()) {
        return Fiber::Empty;
    }
    let g_eff = reduced.iter().skip(1).fold(reduced[0].clone(), |acc, g| acc.gcd(g));
    if g_eff.is_constant() {
        return Fiber::Empty;
    }
    let r = strip_mod_p(squarefree_part(&g_eff, p).expect("nonzero"), &us);
    if r.deg0() >= 1 {
        Fiber::Residue(r)
    } else {
        Fiber::Empty
    }
}

/// Whether some field of characteristic `p` is a quotient of the ring.
pub fn member_char_p(pres: &Presentation, p: u64) -> Result<bool, CharError> {
    if !is_prime(p) {
        return Err(CharError::NotPrime(p));
    }
    Ok(!matches!(fiber(pres, p), Fiber::Empty))
}

/// Stripped radical of the relations over `Q`. `Ok(None)` when there are no
/// relations, `Err(())` when the ring has no characteristic-0 quotient.
fn residue_q(pres: &Presentation) -> Result<Option<QPoly>, ()> {
    if pres.modulus_n != 0 {
        return Err(());
    }
    let us: Vec<QPoly> = pres.invert_polys.iter().map(QPoly::from_poly).collect();
    let rels: Vec<QPoly> = pres.nonzero_relations().map(QPoly::from_poly).collect();
    if rels.is_empty() {
        return if us.iter().any(QPoly::is_zero) { Err(()) } else { Ok(None) };
    }
    let g = rels.iter().skip(1).fold(rels[0].clone(), |acc, h| acc.gcd(h));
    if g.degree().unwrap_or(0) == 0 {
        return Err(());
    }
    let r = strip_q(g.squarefree(), &us);
    if r.degree().unwrap_or(0) >= 1 {
        Ok(Some(r))
    } else {
        Err(())
    }
}

/// Whether some field of characteristic 0 is a quotient of the ring.
pub fn member_char_zero(pres: &Presentation) -> bool {
    residue_q(pres).is_ok()
}

fn serialize_bigint<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

/// Why the characteristic set has the shape it has.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Certificate {
    /// Every member divides `n`.
    FiniteWithoutZero {
        #[serde(serialize_with = "serialize_bigint")]
        n: BigInt,
    },
    /// Every prime not dividing `n` is a member.
    CofiniteWithZero {
        #[serde(serialize_with = "serialize_bigint")]
        n: BigInt,
    },
}

impl Certificate {
    pub fn integer(&self) -> &BigInt {
        match self {
            Certificate::FiniteWithoutZero { n } | Certificate::CofiniteWithZero { n } => n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharSet {
    pub contains_zero: bool,
    /// Member primes up to `bound`.
    pub primes_in: Vec<u64>,
    pub bound: u64,
    pub certificate: Certificate,
}

impl CharSet {
    /// Primes up to the bound that are not members.
    pub fn primes_out(&self) -> Vec<u64> {
        primes_up_to(self.bound).filter(|p| !self.primes_in.contains(p)).collect()
    }
}

fn brace(items: &[u64]) -> String {
    let v: Vec<String> = items.iter().map(u64::to_string).collect();
    format!("{{{}}}", v.join(", "))
}

impl fmt::Display for CharSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.contains_zero {
            let out = self.primes_out();
            write!(f, "{{0}} ∪ P")?;
            if !out.is_empty() {
                write!(f, "∖{}", brace(&out))?;
            }
        } else if self.primes_in.is_empty() {
            write!(f, "∅")?;
        } else {
            write!(f, "{}", brace(&self.primes_in))?;
        }
        write!(f, " [certified by N={}, checked to B={}]", self.certificate.integer(), self.bound)
    }
}

pub fn primes_up_to(b: u64) -> impl Iterator<Item = u64> {
    (2..=b).filter(|&p| is_prime(p))
}

fn product(it: impl IntoIterator<Item = BigInt>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |a, b| a * b)
}

/// For a ring with a characteristic-0 quotient: primes dividing none of
/// `lc(r)`, `Res(r, u)` or the inverted primes keep a root of `r` off every
/// `u`, where `r` is the stripped residue over `Q` made primitive.
fn cofinite_certificate(pres: &Presentation, r: Option<QPoly>) -> BigInt {
    let inverted = product(pres.invert_primes.iter().map(|&q| BigInt::from(q)));
    let core = match r {
        None => product(pres.invert_polys.iter().map(content)),
        Some(r) => {
            let rz = r.primitive();
            let lc = rz.last().expect("nonconstant").clone();
            lc * product(pres.invert_polys.iter().map(|u| resultant(&rz, &to_bigints(u))))
        }
    };
    (core * inverted).abs()
}

/// For a ring without a characteristic-0 quotient: an integer `D` with
/// `D·U^m` in the ideal of the relations over `Z[x]`, `U` the product of the
/// inverted polynomials. A characteristic not dividing `D` would force
/// `U(x) = 0`.
fn finite_certificate(pres: &Presentation) -> BigInt {
    if pres.modulus_n != 0 {
        return BigInt::from(pres.modulus_n);
    }
    let rels: Vec<QPoly> = pres.nonzero_relations().map(QPoly::from_poly).collect();
    if rels.is_empty() {
        // some inverted polynomial is zero, so 0 = 1
        return BigInt::one();
    }
    // g = Σ c_i rel_i
    let mut g = rels[0].clone();
    let mut cof = vec![QPoly::one()];
    for h in &rels[1..] {
        let (d, s, t) = g.ext_gcd(h);
        cof = cof.iter().map(|c| c.mul(&s)).collect();
        cof.push(t);
        g = d;
    }
    let u = pres.invert_polys.iter().fold(QPoly::one(), |acc, u| acc.mul(&QPoly::from_poly(u)));
    let mut power = QPoly::one();
    for _ in 0..=g.degree().unwrap_or(0) {
        let (q, rem) = power.div_rem(&g);
        if rem.is_zero() {
            return cof
                .iter()
                .map(|c| c.mul(&q).denominator_lcm())
                .fold(BigInt::one(), |a, b| a.lcm(&b));
        }
        power = power.mul(&u);
    }
    // a root of g avoids every u, so the ring has a characteristic-0 quotient
    unreachable!("finite certificate requested for a ring with characteristic 0")
}

/// Characteristic set up to `bound`, with a certificate that is validated at
/// every prime up to the bound.
pub fn char_set(pres: &Presentation, bound: u64) -> Result<CharSet, CharError> {
    if bound < 2 {
        return Err(CharError::BoundTooSmall(bound));
    }
    let residue = residue_q(pres);
    let contains_zero = residue.is_ok();
    let certificate = match residue {
        Ok(r) => Certificate::CofiniteWithZero { n: cofinite_certificate(pres, r) },
        Err(()) => Certificate::FiniteWithoutZero { n: finite_certificate(pres) },
    };
    let mut primes_in = Vec::new();
    for p in primes_up_to(bound) {
        let member = member_char_p(pres, p)?;
        let divides = (certificate.integer() % BigInt::from(p)).is_zero();
        let violated = match certificate {
            Certificate::FiniteWithoutZero { .. } => member && !divides,
            Certificate::CofiniteWithZero { .. } => !member && !divides,
        };
        if violated {
            return Err(CharError::DichotomyViolation {
                p,
                certificate: certificate.integer().to_string(),
                detail: format!("membership of {p} contradicts the certificate for {pres}"),
            });
        }
        if member {
            primes_in.push(p);
        }
    }
    Ok(CharSet { contains_zero, primes_in, bound, certificate })
}

fn serialize_polys<S: Serializer>(v: &[Poly], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(Poly::terms))
}

/// Minimal polynomials mod p realised by `x` in field quotients; `∞` stands
/// for a transcendental image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeSet {
    pub p: u64,
    pub contains_infinity: bool,
    #[serde(serialize_with = "serialize_polys")]
    pub polys_in: Vec<Poly>,
    /// Degree bound applied when the set is cofinite.
    pub degree_bound: usize,
}

impl fmt::Display for TypeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut items: Vec<String> = self.polys_in.iter().map(Poly::terms).collect();
        if self.contains_infinity {
            items.push("∞".to_string());
        }
        write!(f, "{{{}}}", items.join(", "))?;
        if self.contains_infinity {
            write!(f, " [listed to degree {}]", self.degree_bound)?;
        }
        Ok(())
    }
}

pub fn type_set(pres: &Presentation, p: u64, degree_bound: usize) -> Result<TypeSet, CharError> {
    if !is_prime(p) {
        return Err(CharError::NotPrime(p));
    }
    let us: Vec<Poly> = pres.invert_polys.iter().map(|u| u.reduce(p)).collect();
    let avoids = |h: &Poly| us.iter().all(|u| !h.divides(u));
    let (contains_infinity, polys_in) = match fiber(pres, p) {
        Fiber::Empty => return Err(CharError::EmptyFiber { p }),
        Fiber::Free => {
            let all = enumerate_irreducibles(p, degree_bound).expect("prime checked");
            (true, all.into_iter().filter(|h| avoids(h)).collect())
        }
        Fiber::Residue(r) => (false, factor_distinct(&r, p).expect("nonzero residue")),
    };
    Ok(TypeSet { p, contains_infinity, polys_in, degree_bound })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverUnionReport {
    pub whole: CharSet,
    pub killed: CharSet,
    pub inverted: CharSet,
    pub holds: bool,
}

/// Checks `Char R = Char R/(a) ∪ Char R[1/a]` on `{0}` and the primes up to
/// `bound`.
pub fn cover_union_check(pres: &Presentation, a: &Poly, bound: u64) -> Result<CoverUnionReport, CharError> {
    let whole = char_set(pres, bound)?;
    let killed = char_set(&pres.clone().with_relation(a.clone()), bound)?;
    let inverted = char_set(&pres.clone().with_inverse(a.clone()), bound)?;
    let union: BTreeSet<u64> = killed.primes_in.iter().chain(&inverted.primes_in).copied().collect();
    let holds = whole.contains_zero == (killed.contains_zero || inverted.contains_zero)
        && whole.primes_in.iter().copied().collect::<BTreeSet<_>>() == union;
    Ok(CoverUnionReport { whole, killed, inverted, holds })
}

/// A finite set of characteristics: primes, optionally with 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharTarget {
    pub zero: bool,
    pub primes: BTreeSet<u64>,
}

impl CharTarget {
    /// Parses a comma-separated list such as `0,2,3`.
    pub fn parse(s: &str) -> Result<CharTarget, CharError> {
        let mut t = CharTarget::default();
        for part in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let v: u64 = part
                .parse()
                .map_err(|_| CharError::InvalidPresentation(format!("bad characteristic `{part}`")))?;
            match v {
                0 => t.zero = true,
                q if is_prime(q) => {
                    t.primes.insert(q);
                }
                q => return Err(CharError::NotPrime(q)),
            }
        }
        Ok(t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Yes,
    No,
    UnknownBeyondBound,
}

/// Largest trial divisor used when factoring a certificate.
const TRIAL_LIMIT: u64 = 1_000_000;

/// Prime factors of `n` found by trial division, and whether the
/// factorization is complete.
fn prime_factors(n: &BigInt) -> (Vec<u64>, bool) {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = 2u64;
    while d <= TRIAL_LIMIT {
        let bd = BigInt::from(d);
        if &bd * &bd > n {
            break;
        }
        if (&n % &bd).is_zero() {
            out.push(d);
            while (&n % &bd).is_zero() {
                n /= &bd;
            }
        }
        d += 1;
    }
    if n.is_one() {
        return (out, true);
    }
    // a cofactor below the square of the last trial divisor is prime
    let complete = BigInt::from(d) * BigInt::from(d) > n;
    if complete {
        if let Some(q) = n.to_u64() {
            out.push(q);
        } else {
            return (out, false);
        }
    }
    (out, complete)
}

/// Whether every characteristic of the ring lies in `target`, i.e. whether
/// the ring belongs to the cosieve of quotients with characteristics in
/// `target`.
pub fn t_sieve_member(pres: &Presentation, target: &CharTarget, bound: u64) -> Result<Verdict, CharError> {
    let cs = char_set(pres, bound)?;
    if cs.contains_zero {
        // infinitely many characteristics against a finite target
        return Ok(Verdict::No);
    }
    if cs.primes_in.iter().any(|p| !target.primes.contains(p)) {
        return Ok(Verdict::No);
    }
    let (factors, complete) = prime_factors(cs.certificate.integer());
    for q in factors {
        if q > bound && !target.primes.contains(&q) && member_char_p(pres, q)? {
            return Ok(Verdict::No);
        }
    }
    Ok(if complete { Verdict::Yes } else { Verdict::UnknownBeyondBound })
}
