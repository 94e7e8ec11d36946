//! Named constructions of a topology from a site and a base topology.

use crate::registry::Registry;

use super::{atomic_on_site, demorganization, dense_topology, FinCategory, SiteError, Topology};

pub trait TopologyConstruction: Send + Sync {
    fn name(&self) -> &'static str;
    fn build(&self, site: &FinCategory, base: &Topology) -> Result<Topology, SiteError>;
}

struct Trivial;

impl TopologyConstruction for Trivial {
    fn name(&self) -> &'static str {
        "trivial"
    }
    fn build(&self, site: &FinCategory, _: &Topology) -> Result<Topology, SiteError> {
        Ok(Topology::trivial(site))
    }
}

struct Atomic;

impl TopologyConstruction for Atomic {
    fn name(&self) -> &'static str {
        "atomic"
    }
    fn build(&self, site: &FinCategory, _: &Topology) -> Result<Topology, SiteError> {
        atomic_on_site(site)
    }
}

struct Dense;

impl TopologyConstruction for Dense {
    fn name(&self) -> &'static str {
        "dense"
    }
    fn build(&self, site: &FinCategory, base: &Topology) -> Result<Topology, SiteError> {
        dense_topology(site, base)
    }
}

struct DeMorganize;

impl TopologyConstruction for DeMorganize {
    fn name(&self) -> &'static str {
        "demorganize"
    }
    fn build(&self, site: &FinCategory, base: &Topology) -> Result<Topology, SiteError> {
        demorganization(site, base)
    }
}

pub fn topology_constructions() -> Registry<dyn TopologyConstruction> {
    let mut r: Registry<dyn TopologyConstruction> = Registry::new("topology");
    let all: [Box<dyn TopologyConstruction>; 4] =
        [Box::new(Trivial), Box::new(Atomic), Box::new(Dense), Box::new(DeMorganize)];
    for c in all {
        r.register(c.name(), c);
    }
    r
}
