//! Finite truncations of the site of finite regular rings, and the checks
//! run on them: rigidity, covers by characteristic, amalgamation of field
//! embeddings, atomicity of the dense topology on fields of one
//! characteristic, and Frobenius orbits on embeddings.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::polyfield::{embeddings, is_prime, make_field, Embedding, FiniteField, PolyError};
use crate::regring::{hom_enumerate, RegularRing, RingError, RingHom};
use crate::siteeng::{
    atomic_topology, dense_topology, is_boolean, rigidity_check, CategoryDesc, FinCategory,
    SiteError, Topology, TopologyDesc,
};
use crate::BitSet;

pub const DEFAULT_CEILING: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldSiteError {
    #[error("truncation has {objects} objects, above the ceiling of {ceiling}")]
    TooLarge { objects: usize, ceiling: usize },
    #[error("{0} is not an object of the site")]
    UnknownObject(String),
    #[error("invalid bound: {0}")]
    InvalidBound(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Site(#[from] SiteError),
}

/// Short object name: `F4xF3`, or `0` for the zero ring.
pub fn ring_name(r: &RegularRing) -> String {
    if r.is_zero_ring() {
        return "0".to_string();
    }
    let parts: Vec<String> = r.components().iter().map(|f| format!("F{}", f.size())).collect();
    parts.join("x")
}

/// A category whose objects are regular rings and whose morphisms are ring
/// homomorphisms, stored either as they are or reversed.
struct RingCategory {
    category: FinCategory,
    homs: Vec<RingHom>,
}

fn ring_category(objects: &[RegularRing], reversed: bool) -> Result<RingCategory, FieldSiteError> {
    let n = objects.len();
    let names: Vec<String> = objects.iter().map(ring_name).collect();
    let mut morphisms = Vec::new();
    let mut homs = Vec::new();
    let mut index: HashMap<(usize, usize, RingHom), usize> = HashMap::new();
    let mut identity = vec![usize::MAX; n];
    for a in 0..n {
        for b in 0..n {
            for (k, h) in hom_enumerate(&objects[a], &objects[b]).into_iter().enumerate() {
                let id = morphisms.len();
                if a == b && h.is_identity(&objects[a]) {
                    identity[a] = id;
                }
                let (s, d) = if reversed { (b, a) } else { (a, b) };
                morphisms.push((format!("{}->{}#{k}", names[a], names[b]), s, d));
                index.insert((a, b, h.clone()), id);
                homs.push(h);
            }
        }
    }
    // endpoints of each hom as a ring map
    let ends: Vec<(usize, usize)> =
        morphisms.iter().map(|&(_, s, d)| if reversed { (d, s) } else { (s, d) }).collect();
    let category = FinCategory::from_parts(names, morphisms, identity, |g, f| {
        // ring maps compose in the category's order, or reversed
        let (first, second) = if reversed { (g, f) } else { (f, g) };
        let (a, b) = ends[first];
        let (b2, c) = ends[second];
        debug_assert_eq!(b, b2);
        let h = homs[first].then(&homs[second], &objects[b], &objects[c]);
        index.get(&(a, c, h)).copied()
    })?;
    Ok(RingCategory { category, homs })
}

/// Finite regular rings with component characteristics at most
/// `prime_bound`, component degrees at most `degree_bound` and at most
/// `max_components` components, as a site whose morphisms `d -> c` are the
/// ring homomorphisms `c -> d`.
#[derive(Clone, Debug)]
pub struct TruncatedSite {
    pub prime_bound: u64,
    pub degree_bound: usize,
    pub max_components: usize,
    pub objects: Vec<RegularRing>,
    pub category: FinCategory,
    /// Ring homomorphism behind each site morphism `d -> c`, as a map `c -> d`.
    pub homs: Vec<RingHom>,
    pub coverage: Topology,
}

fn multisets(fields: &[FiniteField], k: usize) -> Vec<Vec<FiniteField>> {
    fn go(fields: &[FiniteField], start: usize, left: usize, cur: &mut Vec<FiniteField>, out: &mut Vec<Vec<FiniteField>>) {
        out.push(cur.clone());
        if left == 0 {
            return;
        }
        for i in start..fields.len() {
            cur.push(fields[i].clone());
            go(fields, i, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(fields, 0, k, &mut Vec::new(), &mut out);
    out
}

/// The fields `GF(p^d)` for primes `p ≤ prime_bound` and `d ≤ degree_bound`.
fn fields_up_to(prime_bound: u64, degree_bound: usize) -> Result<Vec<FiniteField>, FieldSiteError> {
    let mut out = Vec::new();
    for p in (2..=prime_bound).filter(|&p| is_prime(p)) {
        for d in 1..=degree_bound {
            out.push(make_field(p, d)?);
        }
    }
    Ok(out)
}

pub fn build_truncated_site(
    prime_bound: u64,
    degree_bound: usize,
    max_components: usize,
) -> Result<TruncatedSite, FieldSiteError> {
    build_truncated_site_with_ceiling(prime_bound, degree_bound, max_components, DEFAULT_CEILING)
}

pub fn build_truncated_site_with_ceiling(
    prime_bound: u64,
    degree_bound: usize,
    max_components: usize,
    ceiling: usize,
) -> Result<TruncatedSite, FieldSiteError> {
    if prime_bound < 2 || degree_bound < 1 {
        return Err(FieldSiteError::InvalidBound(format!(
            "need P ≥ 2 and D ≥ 1, got P={prime_bound}, D={degree_bound}"
        )));
    }
    let fields = fields_up_to(prime_bound, degree_bound)?;
    let mut objects: Vec<RegularRing> =
        multisets(&fields, max_components).into_iter().map(RegularRing::product).collect();
    if objects.len() > ceiling {
        return Err(FieldSiteError::TooLarge { objects: objects.len(), ceiling });
    }
    objects.sort_by_key(|r| (r.len(), r.components().to_vec()));
    let RingCategory { category, homs } = ring_category(&objects, true)?;

    let mut generators: Vec<(usize, BitSet)> = Vec::new();
    let mut seen = BTreeSet::new();
    for (c, r) in objects.iter().enumerate() {
        if r.is_zero_ring() {
            generators.push((c, category.empty_sieve()));
            continue;
        }
        for a in r.elements() {
            let cover = r.principal_cover(&a)?;
            let gens = [&cover.witness.killed, &cover.witness.inverted]
                .into_iter()
                .map(|idx| projection(&objects, &category, &homs, c, idx))
                .collect::<Result<Vec<_>, _>>()?;
            let s = category.generate_sieve(c, &gens)?;
            if seen.insert((c, s.clone())) {
                generators.push((c, s));
            }
        }
    }
    let coverage = Topology::saturate(&category, &generators);
    coverage.check_axioms(&category).map_err(SiteError::InternalError)?;
    Ok(TruncatedSite { prime_bound, degree_bound, max_components, objects, category, homs, coverage })
}

/// Site morphism for the quotient of object `c` onto the components `idx`.
fn projection(
    objects: &[RegularRing],
    site: &FinCategory,
    homs: &[RingHom],
    c: usize,
    idx: &[usize],
) -> Result<usize, FieldSiteError> {
    let r = &objects[c];
    let q = r.restrict(idx);
    let d = objects
        .iter()
        .position(|o| o.components() == q.components())
        .ok_or_else(|| FieldSiteError::UnknownObject(ring_name(&q)))?;
    let want = RingHom {
        parts: idx.iter().map(|&i| (i, Embedding { image: r.components()[i].generator() })).collect(),
    };
    site.hom(d, c)
        .find(|&f| homs[f] == want)
        .ok_or_else(|| FieldSiteError::UnknownObject(format!("projection {} -> {}", ring_name(r), ring_name(&q))))
}

/// JSON form of a truncated site, readable by the generic site tools.
#[derive(Clone, Debug, Serialize)]
pub struct SiteDump {
    pub category: CategoryDesc,
    pub topology: TopologyDesc,
}

impl TruncatedSite {
    pub fn object_index(&self, r: &RegularRing) -> Result<usize, FieldSiteError> {
        self.objects
            .iter()
            .position(|o| o.isomorphic(r))
            .ok_or_else(|| FieldSiteError::UnknownObject(ring_name(r)))
    }

    pub fn object_name(&self, c: usize) -> &str {
        self.category.object_name(c)
    }

    pub fn dump(&self) -> SiteDump {
        SiteDump { category: self.category.to_desc(), topology: self.coverage.to_desc(&self.category) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldRigidityReport {
    pub rigid: bool,
    pub irreducibles: Vec<String>,
    pub fields: Vec<String>,
    pub zero_ring_irreducible: bool,
    /// Objects whose least cover is not generated from irreducibles.
    pub failures: Vec<String>,
    pub holds: bool,
}

/// Rigidity of the coverage, with the irreducible objects expected to be
/// exactly the fields.
pub fn rigidity_check_field(site: &TruncatedSite) -> FieldRigidityReport {
    let r = rigidity_check(&site.category, &site.coverage);
    let name = |c: &usize| site.object_name(*c).to_string();
    let fields: Vec<usize> = (0..site.objects.len()).filter(|&c| site.objects[c].len() == 1).collect();
    let zero_ring_irreducible = r.irreducibles.iter().any(|&c| site.objects[c].is_zero_ring());
    let holds = r.rigid && r.irreducibles == fields && !zero_ring_irreducible;
    FieldRigidityReport {
        rigid: r.rigid,
        irreducibles: r.irreducibles.iter().map(name).collect(),
        fields: fields.iter().map(name).collect(),
        zero_ring_irreducible,
        failures: r.failures.iter().map(name).collect(),
        holds,
    }
}

/// Whether the quotients `R -> R/(p)`, one per characteristic of `R`, cover `R`.
pub fn char_cover_check(site: &TruncatedSite, r: &RegularRing) -> Result<bool, FieldSiteError> {
    let c = site.object_index(r)?;
    let ring = &site.objects[c];
    let mut gens = Vec::new();
    for p in ring.char_set() {
        let idx: Vec<usize> = (0..ring.len()).filter(|&i| ring.components()[i].p() == p).collect();
        gens.push(projection(&site.objects, &site.category, &site.homs, c, &idx)?);
    }
    let s = site.category.generate_sieve(c, &gens)?;
    Ok(site.coverage.covers(c, &s))
}

fn field_objects(p: u64, degrees: &[usize]) -> Result<Vec<RegularRing>, FieldSiteError> {
    degrees.iter().map(|&d| Ok(RegularRing::product(vec![make_field(p, d)?]))).collect()
}

fn check_field_bounds(p: u64, degree_bound: usize) -> Result<(), FieldSiteError> {
    if !is_prime(p) {
        return Err(PolyError::InvalidModulus(p).into());
    }
    if degree_bound < 1 {
        return Err(FieldSiteError::InvalidBound("degree bound must be at least 1".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OreFieldsReport {
    pub p: u64,
    pub degree_bound: usize,
    /// Spans whose amalgam fits within the degree bound.
    pub tested: usize,
    /// Degree triples `(source, left, right)` whose amalgam is too large.
    pub untestable: Vec<(usize, usize, usize)>,
    /// Degree triples of spans that failed to amalgamate.
    pub failures: Vec<(usize, usize, usize)>,
    pub holds: bool,
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Amalgamation of spans of embeddings among `GF(p^d)`, `d ≤ degree_bound`.
pub fn ore_fields(p: u64, degree_bound: usize) -> Result<OreFieldsReport, FieldSiteError> {
    check_field_bounds(p, degree_bound)?;
    let degrees: Vec<usize> = (1..=degree_bound).collect();
    let objects = field_objects(p, &degrees)?;
    let RingCategory { category: c, .. } = ring_category(&objects, false)?;
    let deg = |o: usize| degrees[o];
    let mut tested = 0;
    let mut untestable = BTreeSet::new();
    let mut failures = BTreeSet::new();
    for a in 0..c.num_objects() {
        let out = c.morphisms_from(a);
        for &f in out {
            for &g in out {
                let key = (deg(a), deg(c.dst(f)), deg(c.dst(g)));
                if lcm(key.1, key.2) > degree_bound {
                    untestable.insert(key);
                    continue;
                }
                tested += 1;
                let ok = c.morphisms_from(c.dst(f)).iter().any(|&h| {
                    let hf = c.compose(h, f);
                    c.hom(c.dst(g), c.dst(h)).any(|k| c.compose(k, g) == hf)
                });
                if !ok {
                    failures.insert(key);
                }
            }
        }
    }
    Ok(OreFieldsReport {
        p,
        degree_bound,
        tested,
        untestable: untestable.into_iter().collect(),
        holds: failures.is_empty(),
        failures: failures.into_iter().collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtomicBooleanReport {
    pub p: u64,
    /// Degrees of the fields in the truncation: the divisors of the bound.
    pub degrees: Vec<usize>,
    pub dense_equals_atomic: bool,
    pub boolean: bool,
    pub holds: bool,
}

/// On the fields `GF(p^d)` with `d | degree_bound` and their embeddings, the
/// dense topology over the trivial one equals the atomic topology and is
/// Boolean. Degrees dividing the bound are closed under amalgamation, so the
/// atomic topology exists on this truncation.
pub fn atomic_booleanization_check(p: u64, degree_bound: usize) -> Result<AtomicBooleanReport, FieldSiteError> {
    check_field_bounds(p, degree_bound)?;
    let degrees: Vec<usize> = (1..=degree_bound).filter(|d| degree_bound % d == 0).collect();
    let objects = field_objects(p, &degrees)?;
    let RingCategory { category: c, .. } = ring_category(&objects, false)?;
    let site = c.opposite();
    let atomic = atomic_topology(&c)?;
    let dense = dense_topology(&site, &Topology::trivial(&site))?;
    let dense_equals_atomic = dense == atomic;
    let boolean = is_boolean(&site, &dense).holds;
    Ok(AtomicBooleanReport { p, degrees, dense_equals_atomic, boolean, holds: dense_equals_atomic && boolean })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GSetReport {
    pub p: u64,
    pub m: usize,
    pub n: usize,
    pub hom_count: usize,
    /// Orbit sizes under the Frobenius of the codomain.
    pub orbits: Vec<usize>,
    pub transitive: bool,
    pub holds: bool,
}

impl fmt::Display for GSetReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let orbits: Vec<String> = self.orbits.iter().map(usize::to_string).collect();
        write!(f, "count={} orbits=[{}]", self.hom_count, orbits.join(", "))?;
        if self.transitive {
            write!(f, " transitive")?;
        }
        Ok(())
    }
}

/// Embeddings `GF(p^m) -> GF(p^n)` and their orbits under `x ↦ x^p` on the
/// codomain. Expected: `m` embeddings in one orbit when `m | n`, none otherwise.
pub fn gset_homcount(p: u64, m: usize, n: usize) -> Result<GSetReport, FieldSiteError> {
    if m < 1 || n < 1 {
        return Err(FieldSiteError::InvalidBound("degrees must be at least 1".into()));
    }
    let src = make_field(p, m)?;
    let dst = make_field(p, n)?;
    let homs = embeddings(&src, &dst);
    let mut seen = vec![false; homs.len()];
    let mut orbits = Vec::new();
    for start in 0..homs.len() {
        if seen[start] {
            continue;
        }
        let mut size = 0;
        let mut cur = homs[start].image;
        loop {
            let i = homs.iter().position(|e| e.image == cur).expect("Frobenius permutes embeddings");
            if seen[i] {
                break;
            }
            seen[i] = true;
            size += 1;
            cur = dst.frobenius(cur);
        }
        orbits.push(size);
    }
    let hom_count = homs.len();
    let transitive = orbits.len() == 1;
    let expected = if n % m == 0 { m } else { 0 };
    let holds = hom_count == expected && (hom_count == 0 || orbits == [m]);
    Ok(GSetReport { p, m, n, hom_count, orbits, transitive, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::siteeng::{is_sheaf, Presheaf};

    fn names(site: &TruncatedSite) -> Vec<&str> {
        site.category.objects().iter().map(String::as_str).collect()
    }

    fn ring(s: &str) -> RegularRing {
        RegularRing::parse(s).unwrap()
    }

    #[test]
    fn truncation_objects() {
        assert_eq!(names(&build_truncated_site(2, 1, 2).unwrap()), ["0", "F2", "F2xF2"]);
        assert_eq!(names(&build_truncated_site(3, 1, 1).unwrap()), ["0", "F2", "F3"]);
        assert_eq!(names(&build_truncated_site(2, 2, 1).unwrap()), ["0", "F2", "F4"]);
        assert!(matches!(
            build_truncated_site_with_ceiling(3, 3, 3, 64),
            Err(FieldSiteError::TooLarge { .. })
        ));
    }

    #[test]
    fn rigidity_examples() {
        let s = build_truncated_site(2, 1, 2).unwrap();
        let r = rigidity_check_field(&s);
        assert!(r.holds, "{r:?}");
        assert_eq!(r.irreducibles, ["F2"]);
        // F2xF2 is covered by its two projections and nothing smaller
        let c = s.category.object_index("F2xF2").unwrap();
        assert_eq!(s.category.sieve_generators(s.coverage.least_cover(c)).len(), 2);

        let r = rigidity_check_field(&build_truncated_site(2, 2, 2).unwrap());
        assert!(r.holds);
        assert_eq!(r.irreducibles, ["F2", "F4"]);

        let s = build_truncated_site(3, 1, 2).unwrap();
        assert!(rigidity_check_field(&s).holds);
        assert!(char_cover_check(&s, &ring("GF(2) x GF(3)")).unwrap());
        assert!(char_cover_check(&s, &ring("GF(2)")).unwrap());
        assert!(char_cover_check(&s, &ring("0")).unwrap());
        assert!(matches!(char_cover_check(&s, &ring("GF(5)")), Err(FieldSiteError::UnknownObject(_))));
    }

    #[test]
    fn representables_are_sheaves() {
        let s = build_truncated_site(2, 1, 2).unwrap();
        for c in 0..s.objects.len() {
            assert!(is_sheaf(&s.category, &s.coverage, &Presheaf::representable(&s.category, c)));
        }
    }

    #[test]
    fn ore_fields_examples() {
        let r = ore_fields(2, 4).unwrap();
        assert!(r.holds);
        assert!(r.untestable.contains(&(1, 2, 3)));
        assert!(ore_fields(2, 6).unwrap().holds);
        let one = ore_fields(5, 1).unwrap();
        assert!(one.holds && one.untestable.is_empty());
        assert_eq!(one.tested, 1);
    }

    #[test]
    fn atomic_booleanization_examples() {
        for (p, d) in [(2, 4), (3, 2), (5, 1)] {
            let r = atomic_booleanization_check(p, d).unwrap();
            assert!(r.holds, "{r:?}");
        }
    }

    #[test]
    fn gset_examples() {
        let r = gset_homcount(2, 2, 4).unwrap();
        assert_eq!((r.hom_count, r.orbits.clone(), r.holds), (2, vec![2], true));
        assert_eq!(r.to_string(), "count=2 orbits=[2] transitive");
        assert_eq!(gset_homcount(2, 3, 4).unwrap().hom_count, 0);
        let r = gset_homcount(3, 1, 5).unwrap();
        assert_eq!((r.hom_count, r.orbits.clone()), (1, vec![1]));
    }
}
