//! `irr`, `field`, `ring` and `pres` commands.

use std::fs;

use clap::{Args, Subcommand};
use serde_json::{json, Value};

use regtopos::charpres::{
    char_set, cover_union_check, t_sieve_member, type_set, CharError, CharTarget, Presentation, Verdict,
};
use regtopos::polyfield::{
    embeddings, enumerate_irreducibles, irreducibility_tests, is_irreducible, make_field, min_poly, Poly,
};
use regtopos::regring::{decompose_presented, decompose_with, hom_enumerate, RegularRing, RingError};

use crate::{Fail, Outcome};

#[derive(Subcommand)]
pub enum IrrCmd {
    /// List monic irreducibles of degree 1..=D over Z/p.
    Enumerate { p: u64, max_degree: usize },
    /// Decide irreducibility of a monic polynomial, e.g. `x^2+1 mod 3`.
    Test {
        poly: String,
        /// Prime, if the polynomial has no `mod p` suffix.
        #[arg(long)]
        p: Option<u64>,
        /// Registered test to use; all of them when omitted.
        #[arg(long)]
        method: Option<String>,
    },
}

#[derive(Subcommand)]
pub enum FieldCmd {
    /// The field GF(p^n) and its defining modulus.
    Make { p: u64, n: usize },
    /// Embeddings GF(p^m) -> GF(p^n).
    Embed { p: u64, m: usize, n: usize },
    /// Minimal polynomial of an element of GF(p^n), written in the generator x.
    Minpoly { p: u64, n: usize, element: String },
}

#[derive(Subcommand)]
pub enum RingCmd {
    /// The quasi-inverse x* of an element.
    Star { ring: String, element: String },
    /// The principal cover R -> R/(a), R -> R/(aa*-1).
    Cover { ring: String, element: String },
    /// Split along the idempotent yy* of an element that is neither zero nor a unit.
    Split { ring: String, element: String },
    /// Decompose F_p[x]/(f) into a product of fields.
    Decompose {
        p: u64,
        poly: String,
        /// Registered decomposition route; all routes must agree when omitted.
        #[arg(long)]
        strategy: Option<String>,
    },
    /// Minimal polynomials of an element's components.
    Type { ring: String, element: String },
    /// Ring homomorphisms between two rings.
    Homs { source: String, target: String },
}

#[derive(Args)]
pub struct PresInput {
    /// Presentation JSON file.
    #[arg(long, conflicts_with = "pres")]
    file: Option<String>,
    /// Presentation JSON given inline.
    #[arg(long)]
    pres: Option<String>,
}

impl PresInput {
    fn load(&self) -> Result<Presentation, Fail> {
        let text = match (&self.file, &self.pres) {
            (Some(path), _) => fs::read_to_string(path)?,
            (None, Some(s)) => s.clone(),
            (None, None) => return Err("give --file or --pres".into()),
        };
        Ok(Presentation::from_json(&text)?)
    }
}

#[derive(Subcommand)]
pub enum PresCmd {
    /// Characteristic set with its certificate.
    Char {
        #[command(flatten)]
        input: PresInput,
        #[arg(long, default_value_t = 100)]
        bound: u64,
    },
    /// Type set of the fiber at p.
    Type {
        #[command(flatten)]
        input: PresInput,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 3)]
        degree: usize,
    },
    /// Char R = Char R/(a) ∪ Char R[1/a].
    CoverUnion {
        #[command(flatten)]
        input: PresInput,
        #[arg(long)]
        a: String,
        #[arg(long, default_value_t = 100)]
        bound: u64,
    },
    /// Does Char R lie in the target set, e.g. `--target 0,2,3`.
    Tsieve {
        #[command(flatten)]
        input: PresInput,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 100)]
        bound: u64,
    },
}

fn parse_poly(s: &str) -> Result<Poly, Fail> {
    Ok(Poly::parse(s)?)
}

pub fn irr(cmd: IrrCmd) -> Result<Outcome, Fail> {
    match cmd {
        IrrCmd::Enumerate { p, max_degree } => {
            let polys: Vec<String> = enumerate_irreducibles(p, max_degree)?.iter().map(Poly::terms).collect();
            Ok(Outcome::done(
                polys.join("\n"),
                json!({ "p": p, "max_degree": max_degree, "count": polys.len(), "polys": polys }),
            ))
        }
        IrrCmd::Test { poly, p, method } => {
            let f = parse_poly(&poly)?;
            let p = match (f.modulus(), p) {
                (0, Some(p)) => p,
                (0, None) => return Err("give a prime with --p or a `mod p` suffix".into()),
                (m, Some(p)) if m != p => return Err(format!("polynomial is mod {m}, --p is {p}").into()),
                (m, _) => m,
            };
            let f = f.reduce(p);
            is_irreducible(&f, p)?;
            let reg = irreducibility_tests();
            let names: Vec<String> = match method {
                Some(m) => vec![reg.get(&m)?.name().to_string()],
                None => reg.names().iter().map(|s| s.to_string()).collect(),
            };
            let verdicts: Vec<(String, bool)> =
                names.into_iter().map(|n| (n.clone(), reg.get(&n).unwrap().is_irreducible(&f))).collect();
            let verdict = verdicts[0].1;
            if verdicts.iter().any(|(_, v)| *v != verdict) {
                return Err(format!("irreducibility tests disagree on {f}: {verdicts:?}").into());
            }
            let word = if verdict { "irreducible" } else { "reducible" };
            let by: Vec<&str> = verdicts.iter().map(|(n, _)| n.as_str()).collect();
            Ok(Outcome::new(
                format!("{f}: {word} ({})", by.join(", ")),
                json!({ "poly": f.terms(), "p": p, "irreducible": verdict, "methods": by }),
                verdict,
            ))
        }
    }
}

pub fn field(cmd: FieldCmd) -> Result<Outcome, Fail> {
    match cmd {
        FieldCmd::Make { p, n } => {
            let f = make_field(p, n)?;
            Ok(Outcome::done(
                format!("{f}, {} elements", f.size()),
                json!({ "p": p, "degree": n, "modulus": f.modulus().terms(), "size": f.size() }),
            ))
        }
        FieldCmd::Embed { p, m, n } => {
            let src = make_field(p, m)?;
            let dst = make_field(p, n)?;
            let images: Vec<String> =
                embeddings(&src, &dst).iter().map(|e| dst.display_element(e.image)).collect();
            let text = if images.is_empty() {
                format!("no embeddings GF({p}^{m}) -> GF({p}^{n})")
            } else {
                images.iter().map(|i| format!("x -> {i}")).collect::<Vec<_>>().join("\n")
            };
            Ok(Outcome::new(
                text,
                json!({ "source": src.modulus().terms(), "target": dst.modulus().terms(), "images": images }),
                !images.is_empty(),
            ))
        }
        FieldCmd::Minpoly { p, n, element } => {
            let f = make_field(p, n)?;
            let a = f.parse_element(&element)?;
            let g = min_poly(&f, a);
            Ok(Outcome::done(
                g.terms(),
                json!({ "field": f.modulus().terms(), "element": f.display_element(a), "minpoly": g.terms() }),
            ))
        }
    }
}

fn ring_json(r: &RegularRing) -> Value {
    json!({ "ring": r.to_string(), "size": r.size().map(|s| s.to_string()) })
}

pub fn ring(cmd: RingCmd) -> Result<Outcome, Fail> {
    match cmd {
        RingCmd::Star { ring, element } => {
            let r = RegularRing::parse(&ring)?;
            let x = r.parse_element(&element)?;
            let s = r.star(&x)?;
            let (xs, ss) = (r.display_element(&x), r.display_element(&s));
            Ok(Outcome::done(format!("{xs}* = {ss}"), json!({ "element": xs, "star": ss })))
        }
        RingCmd::Cover { ring, element } => {
            let r = RegularRing::parse(&ring)?;
            let a = r.parse_element(&element)?;
            let c = r.principal_cover(&a)?;
            Ok(Outcome::done(
                format!("R/(a) = {}\nR/(aa*-1) = {}", c.killed_ring, c.inverted_ring),
                json!({
                    "killed": ring_json(&c.killed_ring),
                    "inverted": ring_json(&c.inverted_ring),
                    "killed_components": c.witness.killed,
                    "inverted_components": c.witness.inverted,
                }),
            ))
        }
        RingCmd::Split { ring, element } => {
            let r = RegularRing::parse(&ring)?;
            let y = r.parse_element(&element)?;
            match r.split_idempotent(&y) {
                Ok((a, b)) => Ok(Outcome::done(
                    format!("{a}\n{b}"),
                    json!({ "split": true, "parts": [ring_json(&a), ring_json(&b)] }),
                )),
                Err(RingError::NotSplittable) => Ok(Outcome::new(
                    "no split: the element is zero or a unit",
                    json!({ "split": false }),
                    false,
                )),
                Err(e) => Err(e.into()),
            }
        }
        RingCmd::Decompose { p, poly, strategy } => {
            let f = parse_poly(&poly)?;
            let d = match strategy {
                Some(s) => decompose_with(&s, p, &f)?,
                None => decompose_presented(p, &f)?,
            };
            let routes: Vec<Value> = d
                .routes
                .iter()
                .map(|(n, fs)| json!({ "route": n, "factors": fs.iter().map(Poly::terms).collect::<Vec<_>>() }))
                .collect();
            let lines: Vec<String> = d
                .routes
                .iter()
                .map(|(n, fs)| format!("  {n}: {}", fs.iter().map(Poly::terms).collect::<Vec<_>>().join(" * ")))
                .collect();
            Ok(Outcome::done(
                format!("{}\n{}", d.ring, lines.join("\n")),
                json!({ "ring": ring_json(&d.ring), "routes": routes }),
            ))
        }
        RingCmd::Type { ring, element } => {
            let r = RegularRing::parse(&ring)?;
            let x = r.parse_element(&element)?;
            let t: Vec<String> = r.element_type(&x)?.iter().map(Poly::terms).collect();
            Ok(Outcome::done(format!("{{{}}}", t.join(", ")), json!({ "type": t })))
        }
        RingCmd::Homs { source, target } => {
            let r = RegularRing::parse(&source)?;
            let s = RegularRing::parse(&target)?;
            let homs = hom_enumerate(&r, &s);
            let shown: Vec<Value> = homs
                .iter()
                .map(|h| {
                    Value::Array(
                        h.parts
                            .iter()
                            .zip(s.components())
                            .map(|(&(i, ref e), g)| json!({ "from": i, "image": g.display_element(e.image) }))
                            .collect(),
                    )
                })
                .collect();
            let lines: Vec<String> = homs
                .iter()
                .map(|h| {
                    let parts: Vec<String> = h
                        .parts
                        .iter()
                        .zip(s.components())
                        .enumerate()
                        .map(|(j, (&(i, ref e), g))| format!("{i}->{j} x->{}", g.display_element(e.image)))
                        .collect();
                    parts.join("; ")
                })
                .collect();
            let mut text = format!("{} homomorphisms", homs.len());
            for l in lines {
                text.push_str("\n  ");
                text.push_str(&l);
            }
            Ok(Outcome::new(text, json!({ "count": homs.len(), "homs": shown }), !homs.is_empty()))
        }
    }
}

pub fn pres(cmd: PresCmd) -> Result<Outcome, Fail> {
    match cmd {
        PresCmd::Char { input, bound } => {
            let p = input.load()?;
            let cs = char_set(&p, bound)?;
            let mut j = serde_json::to_value(&cs)?;
            j["presentation"] = serde_json::to_value(&p)?;
            Ok(Outcome::done(cs.to_string(), j))
        }
        PresCmd::Type { input, p, degree } => {
            let pres = input.load()?;
            match type_set(&pres, p, degree) {
                Ok(t) => {
                    let mut j = serde_json::to_value(&t)?;
                    j["presentation"] = serde_json::to_value(&pres)?;
                    Ok(Outcome::done(t.to_string(), j))
                }
                Err(e @ CharError::EmptyFiber { .. }) => Ok(Outcome::new(
                    e.to_string(),
                    json!({ "p": p, "empty": true, "presentation": pres }),
                    false,
                )),
                Err(e) => Err(e.into()),
            }
        }
        PresCmd::CoverUnion { input, a, bound } => {
            let pres = input.load()?;
            let a = parse_poly(&a)?;
            let r = cover_union_check(&pres, &a, bound)?;
            let text = format!(
                "Char R = {}\nChar R/(a) = {}\nChar R[1/a] = {}\nunion {}",
                r.whole,
                r.killed,
                r.inverted,
                if r.holds { "holds" } else { "fails" }
            );
            Ok(Outcome::new(text, serde_json::to_value(&r)?, r.holds))
        }
        PresCmd::Tsieve { input, target, bound } => {
            let pres = input.load()?;
            let t = CharTarget::parse(&target)?;
            let v = t_sieve_member(&pres, &t, bound)?;
            let word = match v {
                Verdict::Yes => "yes",
                Verdict::No => "no",
                Verdict::UnknownBeyondBound => "unknown beyond bound",
            };
            Ok(Outcome::new(word, json!({ "verdict": v, "target": t, "bound": bound }), v == Verdict::Yes))
        }
    }
}
