//! `site` and `fieldsite` commands.

use std::fs;

use clap::{Args, Subcommand};
use serde_json::{json, Value};

use regtopos::fieldsite::{
    atomic_booleanization_check, build_truncated_site, char_cover_check, gset_homcount, ore_fields,
    rigidity_check_field, TruncatedSite,
};
use regtopos::regring::RegularRing;
use regtopos::siteeng::{
    heyting_neg, is_boolean, is_demorgan, is_sheaf, ore_check, rigidity_check, topology_constructions,
    CategoryDesc, DeMorganReport, FinCategory, Presheaf, PresheafDesc, SiteError, Topology, TopologyDesc,
};
use regtopos::BitSet;

use crate::{Fail, Outcome};

#[derive(Args)]
pub struct SiteInput {
    /// Category JSON, or a dumped site with `category` and `topology` keys.
    #[arg(long)]
    cat: String,
    /// A registered construction (trivial, atomic, dense, demorganize) or a
    /// topology JSON file. Constructions are built over the site's own
    /// topology when the file carries one, else over the trivial topology.
    #[arg(long)]
    top: Option<String>,
}

struct Loaded {
    site: FinCategory,
    top: Topology,
}

impl SiteInput {
    fn category(&self) -> Result<(FinCategory, Option<TopologyDesc>), Fail> {
        let v: Value = serde_json::from_str(&fs::read_to_string(&self.cat)?)?;
        let (cat, top) = match v.get("category") {
            Some(c) => (c.clone(), v.get("topology").cloned()),
            None => (v, None),
        };
        let desc: CategoryDesc = serde_json::from_value(cat)?;
        let top = top.map(serde_json::from_value).transpose()?;
        Ok((FinCategory::from_desc(&desc)?, top))
    }

    fn load(&self) -> Result<Loaded, Fail> {
        let (site, embedded) = self.category()?;
        let base = match &embedded {
            Some(d) => Topology::from_desc(&site, d)?,
            None => Topology::trivial(&site),
        };
        let top = match &self.top {
            None => base,
            Some(name) => {
                let reg = topology_constructions();
                match reg.get(name) {
                    Ok(c) => c.build(&site, &base)?,
                    Err(unknown) => {
                        let text = fs::read_to_string(name)
                            .map_err(|e| format!("{unknown}; no topology file `{name}` ({e})"))?;
                        let desc: TopologyDesc = serde_json::from_str(&text)?;
                        Topology::from_desc(&site, &desc)?
                    }
                }
            }
        };
        Ok(Loaded { site, top })
    }
}

#[derive(Args)]
pub struct SieveArg {
    /// Object the sieve lives on.
    #[arg(long)]
    object: String,
    /// Comma-separated generating morphisms; empty for the empty sieve.
    #[arg(long, default_value = "")]
    sieve: String,
}

impl SieveArg {
    fn resolve(&self, site: &FinCategory) -> Result<(usize, BitSet), Fail> {
        let d = site.object_index(&self.object)?;
        let gens = self
            .sieve
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|g| site.morphism_index(g))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((d, site.generate_sieve(d, &gens)?))
    }
}

#[derive(Args)]
pub struct Truncation {
    /// Largest characteristic.
    #[arg(long, default_value_t = 3)]
    primes: u64,
    /// Largest field degree.
    #[arg(long, default_value_t = 3)]
    degree: usize,
    /// Largest number of field factors.
    #[arg(long, default_value_t = 2)]
    components: usize,
}

impl Truncation {
    fn build(&self) -> Result<TruncatedSite, Fail> {
        Ok(build_truncated_site(self.primes, self.degree, self.components)?)
    }
}

#[derive(Subcommand)]
pub enum SiteCmd {
    /// Check the category (and topology) and echo its normal form.
    Validate(SiteInput),
    /// Saturate the given topology file's covers into a topology.
    Saturate(SiteInput),
    /// J-closure of a sieve.
    Closure {
        #[command(flatten)]
        input: SiteInput,
        #[command(flatten)]
        sieve: SieveArg,
    },
    /// Heyting negation of a closed sieve.
    Neg {
        #[command(flatten)]
        input: SiteInput,
        #[command(flatten)]
        sieve: SieveArg,
    },
    /// Does the sheaf topos satisfy De Morgan's law.
    Demorgan(SiteInput),
    /// The dense topology over the given one.
    Dense(SiteInput),
    /// The DeMorganization of the given topology.
    Demorganize(SiteInput),
    /// Is the sheaf topos Boolean.
    Boolean(SiteInput),
    /// Does every span amalgamate.
    Ore(SiteInput),
    /// The topology whose covers are all nonempty sieves.
    Atomic(SiteInput),
    /// Is a presheaf a sheaf for the topology.
    Sheaf {
        #[command(flatten)]
        input: SiteInput,
        /// Presheaf JSON file.
        #[arg(long, conflicts_with = "representable")]
        presheaf: Option<String>,
        /// Use the presheaf represented by this object.
        #[arg(long)]
        representable: Option<String>,
    },
    /// Are least covers generated by maps out of irreducible objects.
    Rigid(SiteInput),
    /// Write a truncated field site as a site JSON file.
    Dump(Truncation),
}

#[derive(Subcommand)]
pub enum FieldsiteCmd {
    /// Build a truncation and summarize it.
    Build(Truncation),
    /// Rigidity of the truncated coverage.
    Rigid(Truncation),
    /// Characteristics are preserved along covers of a ring.
    Charcover {
        #[command(flatten)]
        trunc: Truncation,
        /// Ring literal, e.g. `GF(4) x GF(3)`.
        #[arg(long)]
        ring: String,
    },
    /// Ore condition on the fields of characteristic p up to degree D.
    Orefields { p: u64, degree_bound: usize },
    /// Dense equals atomic and is Boolean on the fields of characteristic p.
    Atomicbool { p: u64, degree_bound: usize },
    /// Embeddings GF(p^m) -> GF(p^n) as a Galois set.
    Gset { p: u64, m: usize, n: usize },
}

fn top_json(site: &FinCategory, top: &Topology) -> Value {
    serde_json::to_value(top.to_desc(site)).expect("descriptors serialize")
}

fn top_text(site: &FinCategory, top: &Topology) -> String {
    (0..site.num_objects())
        .map(|d| format!("{}: {}", site.object_name(d), site.format_sieve(top.least_cover(d))))
        .collect::<Vec<_>>()
        .join("\n")
}

fn topology_outcome(site: &FinCategory, top: &Topology) -> Outcome {
    Outcome::done(top_text(site, top), top_json(site, top))
}

fn sieve_json(site: &FinCategory, s: &BitSet) -> Value {
    json!(s.iter().map(|f| site.morphism_name(f)).collect::<Vec<_>>())
}

fn law_outcome(site: &FinCategory, r: &DeMorganReport) -> Outcome {
    let text = match &r.witness {
        None => "true".to_string(),
        Some((d, s)) => format!("false; witness object {}, sieve {}", site.object_name(*d), site.format_sieve(s)),
    };
    let witness = r.witness.as_ref().map(|(d, s)| json!({ "object": site.object_name(*d), "sieve": sieve_json(site, s) }));
    Outcome::new(text, json!({ "holds": r.holds, "witness": witness }), r.holds)
}

pub fn site(cmd: SiteCmd) -> Result<Outcome, Fail> {
    match cmd {
        SiteCmd::Validate(input) => {
            let (site, embedded) = input.category()?;
            let l = input.load()?;
            l.top.check_axioms(&l.site)?;
            let desc = site.to_desc();
            let mut text = format!("valid: {} objects, {} morphisms", site.num_objects(), site.num_morphisms());
            if embedded.is_some() || input.top.is_some() {
                text.push_str(&format!(", topology with {} covering sieves", l.top.cover_count(&l.site)));
            }
            Ok(Outcome::done(text, serde_json::to_value(desc)?))
        }
        SiteCmd::Saturate(input) => {
            let l = input.load()?;
            Ok(topology_outcome(&l.site, &l.top))
        }
        SiteCmd::Closure { input, sieve } => {
            let l = input.load()?;
            let (d, s) = sieve.resolve(&l.site)?;
            let c = l.top.closure(&l.site, d, &s);
            Ok(Outcome::done(
                l.site.format_sieve(&c),
                json!({ "object": l.site.object_name(d), "closure": sieve_json(&l.site, &c) }),
            ))
        }
        SiteCmd::Neg { input, sieve } => {
            let l = input.load()?;
            let (d, s) = sieve.resolve(&l.site)?;
            let n = heyting_neg(&l.site, &l.top, d, &s)?;
            Ok(Outcome::done(
                l.site.format_sieve(&n),
                json!({ "object": l.site.object_name(d), "negation": sieve_json(&l.site, &n) }),
            ))
        }
        SiteCmd::Demorgan(input) => {
            let l = input.load()?;
            Ok(law_outcome(&l.site, &is_demorgan(&l.site, &l.top)))
        }
        SiteCmd::Boolean(input) => {
            let l = input.load()?;
            Ok(law_outcome(&l.site, &is_boolean(&l.site, &l.top)))
        }
        SiteCmd::Dense(input) => construct(input, "dense"),
        SiteCmd::Demorganize(input) => construct(input, "demorganize"),
        SiteCmd::Atomic(input) => construct(input, "atomic"),
        SiteCmd::Ore(input) => {
            let l = input.load()?;
            let r = ore_check(&l.site);
            let text = match r.witness {
                None => "true".to_string(),
                Some((f, g)) => format!(
                    "false; span {}, {} has no cocone",
                    l.site.format_morphism(f),
                    l.site.format_morphism(g)
                ),
            };
            let witness = r.witness.map(|(f, g)| json!([l.site.morphism_name(f), l.site.morphism_name(g)]));
            Ok(Outcome::new(text, json!({ "holds": r.holds, "witness": witness }), r.holds))
        }
        SiteCmd::Sheaf { input, presheaf, representable } => {
            let l = input.load()?;
            let p = match (presheaf, representable) {
                (Some(path), _) => {
                    let desc: PresheafDesc = serde_json::from_str(&fs::read_to_string(path)?)?;
                    Presheaf::from_desc(&l.site, &desc)?
                }
                (None, Some(obj)) => Presheaf::representable(&l.site, l.site.object_index(&obj)?),
                (None, None) => return Err("give --presheaf or --representable".into()),
            };
            let holds = is_sheaf(&l.site, &l.top, &p);
            Ok(Outcome::new(if holds { "sheaf" } else { "not a sheaf" }, json!({ "sheaf": holds }), holds))
        }
        SiteCmd::Rigid(input) => {
            let l = input.load()?;
            let r = rigidity_check(&l.site, &l.top);
            let names = |v: &[usize]| v.iter().map(|&d| l.site.object_name(d).to_string()).collect::<Vec<_>>();
            let text = format!(
                "{}; irreducible objects [{}]{}",
                r.rigid,
                names(&r.irreducibles).join(", "),
                if r.failures.is_empty() { String::new() } else { format!("; fails at [{}]", names(&r.failures).join(", ")) }
            );
            Ok(Outcome::new(
                text,
                json!({ "rigid": r.rigid, "irreducibles": names(&r.irreducibles), "failures": names(&r.failures) }),
                r.rigid,
            ))
        }
        SiteCmd::Dump(trunc) => {
            let site = trunc.build()?;
            let dump = serde_json::to_value(site.dump())?;
            Ok(Outcome::done(serde_json::to_string_pretty(&dump)?, dump))
        }
    }
}

/// A construction that does not exist on this site is a negative answer,
/// not an input error.
fn construct(input: SiteInput, name: &str) -> Result<Outcome, Fail> {
    let l = input.load()?;
    match topology_constructions().get(name)?.build(&l.site, &l.top) {
        Ok(top) => Ok(topology_outcome(&l.site, &top)),
        Err(e @ (SiteError::NotAtomicizable { .. } | SiteError::AmbiguousMaximum(_))) => {
            Ok(Outcome::new(format!("none: {e}"), json!({ "exists": false, "reason": e.to_string() }), false))
        }
        Err(e) => Err(e.into()),
    }
}

pub fn fieldsite(cmd: FieldsiteCmd) -> Result<Outcome, Fail> {
    match cmd {
        FieldsiteCmd::Build(trunc) => {
            let s = trunc.build()?;
            let names: Vec<&str> = (0..s.objects.len()).map(|c| s.object_name(c)).collect();
            let text = format!(
                "{} objects, {} morphisms, {} covering sieves\n{}",
                s.objects.len(),
                s.category.num_morphisms(),
                s.coverage.cover_count(&s.category),
                names.join(" ")
            );
            Ok(Outcome::done(text, serde_json::to_value(s.dump())?))
        }
        FieldsiteCmd::Rigid(trunc) => {
            let r = rigidity_check_field(&trunc.build()?);
            let text = format!(
                "{}; irreducible objects [{}]",
                if r.holds { "rigid" } else { "not rigid" },
                r.irreducibles.join(", ")
            );
            Ok(Outcome::new(text, serde_json::to_value(&r)?, r.holds))
        }
        FieldsiteCmd::Charcover { trunc, ring } => {
            let s = trunc.build()?;
            let r = RegularRing::parse(&ring)?;
            let holds = char_cover_check(&s, &r)?;
            Ok(Outcome::new(holds.to_string(), json!({ "ring": r.to_string(), "holds": holds }), holds))
        }
        FieldsiteCmd::Orefields { p, degree_bound } => {
            let r = ore_fields(p, degree_bound)?;
            let text = format!(
                "{}; {} spans tested, {} beyond the degree bound, {} failures",
                r.holds,
                r.tested,
                r.untestable.len(),
                r.failures.len()
            );
            Ok(Outcome::new(text, serde_json::to_value(&r)?, r.holds))
        }
        FieldsiteCmd::Atomicbool { p, degree_bound } => {
            let r = atomic_booleanization_check(p, degree_bound)?;
            let text = format!(
                "{}; degrees {:?}, dense = atomic: {}, boolean: {}",
                r.holds, r.degrees, r.dense_equals_atomic, r.boolean
            );
            Ok(Outcome::new(text, serde_json::to_value(&r)?, r.holds))
        }
        FieldsiteCmd::Gset { p, m, n } => {
            let r = gset_homcount(p, m, n)?;
            Ok(Outcome::new(r.to_string(), serde_json::to_value(&r)?, r.holds))
        }
    }
}
