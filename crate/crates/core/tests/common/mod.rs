//! Shared fixtures and brute-force oracles for the integration tests.
#![allow(dead_code)]

use regtopos::charpres::Presentation;
use regtopos::polyfield::{make_field, Poly};
use regtopos::siteeng::{CategoryDesc, FinCategory, Topology};

pub fn poly(s: &str) -> Poly {
    Poly::parse(s).unwrap()
}

// ---------------------------------------------------------------- presentations

const RELATION_SETS: &[&[&str]] = &[
    &[],
    &["0"],
    &["6"],
    &["x^2-2"],
    &["x^2+1"],
    &["x^2-x"],
    &["x^3-x"],
    &["2x-1"],
    &["5x-3"],
    &["x^2-3"],
    &["4x^2-1"],
    &["x^2+x+1"],
    &["x^3+x+1"],
    &["x^3-2"],
    &["3x^2+x+1"],
    &["x^4+1"],
    &["x^4-x"],
    &["x^4-5x^2+6"],
    &["x^2+3x+5"],
    &["x^2-2", "x^3-2x"],
    &["2x-1", "x^2-3"],
    &["x^2-1", "x^2+x"],
];

/// Inversion constraints; entries starting with `p` are inverted primes.
const INVERSION_SETS: &[&[&str]] = &[
    &[],
    &["p2"],
    &["p3"],
    &["x"],
    &["x+1"],
    &["x-1"],
    &["2x+1"],
    &["x^2+1"],
    &["x", "x+1"],
    &["p2", "x"],
    &["3", "x^2+1"],
    &["x-1", "x+1"],
];

fn build(modulus: u64, rels: &[&str], inv: &[&str]) -> Presentation {
    let mut p = Presentation::free().with_modulus(modulus);
    for r in rels {
        p = p.with_relation(poly(r));
    }
    for u in inv {
        p = match u.strip_prefix('p') {
            Some(q) => p.with_inverted_prime(q.parse().unwrap()).unwrap(),
            None => p.with_inverse(poly(u)),
        };
    }
    p
}

/// Deterministic grammar of one-generator presentations: relations of
/// degree at most 4, at most two inversion constraints.
pub fn grammar() -> Vec<Presentation> {
    let mut out = Vec::new();
    for rels in RELATION_SETS {
        for inv in INVERSION_SETS {
            out.push(build(0, rels, inv));
        }
    }
    for n in [4, 6, 10, 30] {
        for (rels, inv) in [
            (&[][..], &[][..]),
            (&["x^2+1"][..], &[][..]),
            (&["x^2-x"][..], &["x"][..]),
            (&["2x-1"][..], &[][..]),
            (&[][..], &["p3"][..]),
        ] {
            out.push(build(n, rels, inv));
        }
    }
    out
}

/// Root search in `GF(p^k)`, `k ≤ 4`: some element kills every relation and
/// no inverted polynomial. Complete for relations of degree at most 4.
pub fn brute_member(pres: &Presentation, p: u64) -> bool {
    if pres.invert_primes.contains(&p) || (pres.modulus_n != 0 && pres.modulus_n % p != 0) {
        return false;
    }
    for k in 1..=4 {
        let f = make_field(p, k).unwrap();
        let rels: Vec<Poly> = pres.relations.iter().map(|g| g.reduce(p)).collect();
        let us: Vec<Poly> = pres.invert_polys.iter().map(|u| u.reduce(p)).collect();
        let hit = f.elements().any(|a| {
            rels.iter().all(|g| f.eval(g, a) == f.zero()) && us.iter().all(|u| f.eval(u, a) != f.zero())
        });
        if hit {
            return true;
        }
    }
    false
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

pub fn mobius(n: u64) -> i64 {
    let mut m = n;
    let mut sign = 1;
    for d in 2..=n {
        if m % d == 0 {
            m /= d;
            if m % d == 0 {
                return 0;
            }
            sign = -sign;
        }
    }
    sign
}

/// Monic irreducibles of degree `n` over `F_p` by the necklace formula.
pub fn necklace(p: u64, n: u64) -> u64 {
    let s: i64 = (1..=n).filter(|d| n % d == 0).map(|d| mobius(d) * (p as i64).pow((n / d) as u32)).sum();
    (s / n as i64) as u64
}

// ---------------------------------------------------------------- sites

pub fn category(json: &str) -> FinCategory {
    let desc: CategoryDesc = serde_json::from_str(json).unwrap();
    FinCategory::from_desc(&desc).unwrap()
}

fn ids(objs: &[&str]) -> (String, String, String) {
    let o: Vec<String> = objs.iter().map(|x| format!("\"{x}\"")).collect();
    let m: Vec<String> = objs.iter().map(|x| format!("{{\"id\":\"1{x}\",\"src\":\"{x}\",\"dst\":\"{x}\"}}")).collect();
    let i: Vec<String> = objs.iter().map(|x| format!("\"{x}\":\"1{x}\"")).collect();
    (o.join(","), m.join(","), i.join(","))
}

/// Category from objects, extra morphisms `(id, src, dst)` and composites
/// `(g, f, g∘f)`; identities are added.
pub fn small(objs: &[&str], arrows: &[(&str, &str, &str)], comp: &[(&str, &str, &str)]) -> FinCategory {
    let (o, m, i) = ids(objs);
    let mut ms = vec![m];
    ms.extend(arrows.iter().map(|(id, s, d)| format!("{{\"id\":\"{id}\",\"src\":\"{s}\",\"dst\":\"{d}\"}}")));
    let cs: Vec<String> = comp.iter().map(|(g, f, h)| format!("[\"{g}\",\"{f}\",\"{h}\"]")).collect();
    category(&format!(
        "{{\"objects\":[{o}],\"morphisms\":[{}],\"compose\":[{}],\"identities\":{{{i}}}}}",
        ms.join(","),
        cs.join(",")
    ))
}

pub fn cospan() -> FinCategory {
    small(&["q", "p", "r"], &[("qp", "q", "p"), ("rp", "r", "p")], &[])
}

/// Small sites with a base topology, for exhaustive topology checks.
pub fn fixture_sites() -> Vec<(&'static str, FinCategory, Topology)> {
    let mut out: Vec<(&'static str, FinCategory)> = vec![
        ("cospan", cospan()),
        ("point", small(&["a"], &[], &[])),
        ("arrow", small(&["a", "b"], &[("ab", "a", "b")], &[])),
        (
            "chain",
            small(&["a", "b", "c"], &[("ab", "a", "b"), ("bc", "b", "c"), ("ac", "a", "c")], &[("bc", "ab", "ac")]),
        ),
        ("span", small(&["p", "q", "r"], &[("pq", "p", "q"), ("pr", "p", "r")], &[])),
        ("parallel", small(&["a", "b"], &[("f", "a", "b"), ("g", "a", "b")], &[])),
        ("discrete", small(&["a", "b"], &[], &[])),
        ("involution", small(&["a"], &[("e", "a", "a")], &[("e", "e", "1a")])),
        ("idempotent", small(&["a"], &[("e", "a", "a")], &[("e", "e", "e")])),
        (
            "square",
            small(
                &["a", "b", "c", "d"],
                &[("ab", "a", "b"), ("ac", "a", "c"), ("bd", "b", "d"), ("cd", "c", "d"), ("ad", "a", "d")],
                &[("bd", "ab", "ad"), ("cd", "ac", "ad")],
            ),
        ),
        (
            "retract",
            small(
                &["a", "b"],
                &[("f", "a", "b"), ("e", "b", "b"), ("g", "a", "b")],
                &[("e", "e", "e"), ("e", "f", "g"), ("e", "g", "g")],
            ),
        ),
        (
            "two-cospan",
            small(
                &["q", "p", "r", "s"],
                &[("qp", "q", "p"), ("rp", "r", "p"), ("sp", "s", "p")],
                &[],
            ),
        ),
    ];
    let mut sites: Vec<(&'static str, FinCategory, Topology)> =
        out.drain(..).map(|(n, c)| {
            let t = Topology::trivial(&c);
            (n, c, t)
        }).collect();
    // a nontrivial base: {q->p} covers p in the cospan
    let c = cospan();
    let p = c.object_index("p").unwrap();
    let s = c.generate_sieve(p, &[c.morphism_index("qp").unwrap()]).unwrap();
    let base = Topology::saturate(&c, &[(p, s)]);
    sites.push(("cospan/q-covers", c, base));
    sites
}

// ---------------------------------------------------------------- topology oracle
//
// Sieves are bit masks over morphism indices; a topology is the list of
// covering sieves on each object.

pub type Mask = u64;

pub fn mask(s: &regtopos::BitSet) -> Mask {
    s.iter().fold(0, |m, f| m | (1 << f))
}

fn into(c: &FinCategory, d: usize) -> Vec<usize> {
    (0..c.num_morphisms()).filter(|&f| c.dst(f) == d).collect()
}

pub fn max_mask(c: &FinCategory, d: usize) -> Mask {
    into(c, d).iter().fold(0, |m, f| m | (1 << f))
}

/// All sieves on `d`, by filtering every subset of the morphisms into `d`.
pub fn sieves(c: &FinCategory, d: usize) -> Vec<Mask> {
    let ms = into(c, d);
    assert!(ms.len() <= 20 && c.num_morphisms() <= 64);
    (0u64..1 << ms.len())
        .map(|bits| (0..ms.len()).filter(|i| bits >> i & 1 == 1).fold(0, |m, i| m | (1 << ms[i])))
        .filter(|&s| {
            (0..c.num_morphisms()).all(|f| {
                s >> f & 1 == 0 || into(c, c.src(f)).iter().all(|&g| s >> c.compose(f, g).unwrap() & 1 == 1)
            })
        })
        .collect()
}

pub fn pull(c: &FinCategory, f: usize, s: Mask) -> Mask {
    into(c, c.src(f)).iter().filter(|&&g| s >> c.compose(f, g).unwrap() & 1 == 1).fold(0, |m, g| m | (1 << g))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleTop {
    pub covers: Vec<Vec<Mask>>,
}

impl OracleTop {
    pub fn covers(&self, d: usize, s: Mask) -> bool {
        self.covers[d].contains(&s)
    }

    pub fn from_library(c: &FinCategory, t: &Topology) -> OracleTop {
        OracleTop {
            covers: (0..c.num_objects())
                .map(|d| sieves(c, d).into_iter().filter(|&s| mask(t.least_cover(d)) & !s == 0).collect())
                .collect(),
        }
    }

    /// Finer than `other`: every cover of `other` is a cover here.
    pub fn contains(&self, other: &OracleTop) -> bool {
        other.covers.iter().enumerate().all(|(d, cs)| cs.iter().all(|&s| self.covers(d, s)))
    }

    pub fn closure(&self, c: &FinCategory, d: usize, s: Mask) -> Mask {
        into(c, d).into_iter().filter(|&f| self.covers(c.src(f), pull(c, f, s))).fold(0, |m, f| m | (1 << f))
    }

    fn closed(&self, c: &FinCategory, d: usize) -> Vec<Mask> {
        sieves(c, d).into_iter().filter(|&s| self.closure(c, d, s) == s).collect()
    }

    /// Pseudo-complement in the lattice of closed sieves on `d`.
    pub fn neg(&self, c: &FinCategory, d: usize, s: Mask) -> Mask {
        let bottom = self.closure(c, d, 0);
        let cands: Vec<Mask> = self.closed(c, d).into_iter().filter(|&t| t & s & !bottom == 0).collect();
        *cands.iter().find(|&&t| cands.iter().all(|&u| u & !t == 0)).expect("Heyting algebra")
    }

    fn law(&self, c: &FinCategory, second: impl Fn(usize, Mask) -> Mask) -> bool {
        (0..c.num_objects()).all(|d| {
            self.closed(c, d).into_iter().all(|s| {
                let n = self.neg(c, d, s);
                self.closure(c, d, n | second(d, s)) == max_mask(c, d)
            })
        })
    }

    pub fn demorgan(&self, c: &FinCategory) -> bool {
        self.law(c, |d, s| self.neg(c, d, self.neg(c, d, s)))
    }

    pub fn boolean(&self, c: &FinCategory) -> bool {
        self.law(c, |_, s| s)
    }

    /// Dense over `base`: the initial `base`-sheaf is a sheaf here.
    pub fn dense_over(&self, c: &FinCategory, base: &OracleTop) -> bool {
        let empty_ok: Vec<bool> = (0..c.num_objects()).map(|d| base.covers(d, 0)).collect();
        (0..c.num_objects()).all(|d| {
            self.covers[d].iter().all(|&s| {
                let all_in = (0..c.num_morphisms()).filter(|f| s >> f & 1 == 1).all(|f| empty_ok[c.src(f)]);
                !all_in || empty_ok[d]
            })
        })
    }
}

fn is_topology(c: &FinCategory, all: &[Vec<Mask>], t: &OracleTop) -> bool {
    let n = c.num_objects();
    for d in 0..n {
        if !t.covers(d, max_mask(c, d)) {
            return false;
        }
        for &s in &t.covers[d] {
            for f in into(c, d) {
                if !t.covers(c.src(f), pull(c, f, s)) {
                    return false;
                }
            }
        }
        for &s in &all[d] {
            if t.covers(d, s) {
                continue;
            }
            for &r in &t.covers[d] {
                let local = (0..c.num_morphisms())
                    .filter(|f| r >> f & 1 == 1)
                    .all(|f| t.covers(c.src(f), pull(c, f, s)));
                if local {
                    return false;
                }
            }
        }
    }
    true
}

/// Every Grothendieck topology on `c`, by trying every choice of least cover
/// per object and checking the axioms directly.
pub fn all_topologies(c: &FinCategory) -> Vec<OracleTop> {
    let n = c.num_objects();
    let all: Vec<Vec<Mask>> = (0..n).map(|d| sieves(c, d)).collect();
    let mut out = Vec::new();
    let mut pick = vec![0usize; n];
    loop {
        let covers: Vec<Vec<Mask>> = (0..n)
            .map(|d| all[d].iter().copied().filter(|&s| all[d][pick[d]] & !s == 0).collect())
            .collect();
        let t = OracleTop { covers };
        if is_topology(c, &all, &t) {
            out.push(t);
        }
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            pick[k] += 1;
            if pick[k] < all[k].len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}
