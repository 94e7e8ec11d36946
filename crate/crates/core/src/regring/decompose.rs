//! Decomposition of a presented ring `F_p[x]/(f)` into its field factors.

use crate::polyfield::{check_prime, factor_distinct, squarefree_part, Poly, PolyError};
use crate::registry::Registry;

use super::{PresentedRing, RegularRing, RingError};

/// A route from a squarefree relation to the minimal polynomials of the
/// image of `x` in each field factor.
pub trait DecompositionStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    /// Distinct monic irreducible factors of a monic squarefree `f`, sorted.
    fn field_factors(&self, p: u64, f: &Poly) -> Result<Vec<Poly>, RingError>;
}

/// Factor `f` by trial division; the projections `F_p[x]/(f) -> F_p[x]/(g_i)`
/// are then the Chinese-remainder isomorphism.
pub struct CrtProjection;

impl DecompositionStrategy for CrtProjection {
    fn name(&self) -> &'static str {
        "crt"
    }

    fn field_factors(&self, p: u64, f: &Poly) -> Result<Vec<Poly>, RingError> {
        Ok(factor_distinct(f, p)?)
    }
}

/// Split repeatedly along idempotents `zz*`, working only with quotient-ring
/// arithmetic. Candidates `z` come from the Frobenius-fixed subalgebra, which
/// is nonconstant exactly when the quotient is not a field.
pub struct IdempotentSplitting;

impl DecompositionStrategy for IdempotentSplitting {
    fn name(&self) -> &'static str {
        "split"
    }

    fn field_factors(&self, p: u64, f: &Poly) -> Result<Vec<Poly>, RingError> {
        let mut pending = vec![f.reduce(p).monic()];
        let mut out = Vec::new();
        while let Some(g) = pending.pop() {
            if g.deg0() == 1 {
                out.push(g);
                continue;
            }
            let ring = PresentedRing::new(p, &g)?;
            let basis = ring.frobenius_fixed_basis();
            let Some(y) = basis.iter().find(|y| !y.is_constant()) else {
                out.push(g);
                continue;
            };
            let (a, b) = split_once(&ring, y)?;
            pending.push(a);
            pending.push(b);
        }
        out.sort();
        Ok(out)
    }
}

/// Find `c` with `e = (y - c)(y - c)*` a nontrivial idempotent and return the
/// relations of `R/(e)` and `R/(e - 1)`.
fn split_once(ring: &PresentedRing, y: &Poly) -> Result<(Poly, Poly), RingError> {
    let p = ring.p();
    let g = ring.relation();
    let one = Poly::one(p);
    for c in 0..p as i64 {
        let z = y.sub(&Poly::constant(c, p));
        let e = ring.mul(&z, &ring.star(&z)?);
        if e.is_zero() || e == one {
            continue;
        }
        return Ok((g.gcd(&e), g.gcd(&e.sub(&one))));
    }
    Err(RingError::NotSplittable)
}

pub fn decomposition_strategies() -> Registry<dyn DecompositionStrategy> {
    let mut r: Registry<dyn DecompositionStrategy> = Registry::new("decomposition strategy");
    r.register("crt", Box::new(CrtProjection));
    r.register("split", Box::new(IdempotentSplitting));
    r
}

/// Normal form of `F_p[x]/(f)` together with the factor lists produced by
/// each route.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub ring: RegularRing,
    pub routes: Vec<(String, Vec<Poly>)>,
}

fn prepare(p: u64, f: &Poly) -> Result<Poly, RingError> {
    check_prime(p)?;
    let g = f.reduce(p);
    if g.degree().unwrap_or(0) == 0 || !g.is_monic() {
        return Err(PolyError::InvalidPolynomial(g.to_string()).into());
    }
    if squarefree_part(&g, p)? != g {
        return Err(RingError::NotRegular { p, f: g.terms() });
    }
    Ok(g)
}

/// Decompose with one named route.
pub fn decompose_with(strategy: &str, p: u64, f: &Poly) -> Result<Decomposition, RingError> {
    let g = prepare(p, f)?;
    let reg = decomposition_strategies();
    let s = reg.get(strategy).map_err(|e| RingError::DecompositionMismatch(e.to_string()))?;
    let factors = s.field_factors(p, &g)?;
    Ok(Decomposition {
        ring: RegularRing::from_factors(p, g, factors.clone())?,
        routes: vec![(s.name().to_string(), factors)],
    })
}

/// Decompose by every registered route and require them to agree.
pub fn decompose_presented(p: u64, f: &Poly) -> Result<Decomposition, RingError> {
    let g = prepare(p, f)?;
    let mut routes = Vec::new();
    for (name, s) in decomposition_strategies().iter() {
        routes.push((name.to_string(), s.field_factors(p, &g)?));
    }
    let first = routes[0].1.clone();
    for (name, factors) in &routes[1..] {
        if *factors != first {
            return Err(RingError::DecompositionMismatch(format!(
                "{} gives {:?}, {} gives {:?}",
                routes[0].0, first, name, factors
            )));
        }
    }
    Ok(Decomposition { ring: RegularRing::from_factors(p, g, first)?, routes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    #[test]
    fn decomposition_examples() {
        let d = decompose_presented(2, &pp("x^2+x")).unwrap();
        assert_eq!(d.ring.components().iter().map(|f| f.size()).collect::<Vec<_>>(), [2, 2]);
        let d = decompose_presented(2, &pp("x^2+x+1")).unwrap();
        assert_eq!(d.ring.components().iter().map(|f| f.size()).collect::<Vec<_>>(), [4]);
        assert!(matches!(
            decompose_presented(2, &pp("x^3+x")),
            Err(RingError::NotRegular { .. })
        ));
    }

    #[test]
    fn routes_agree_on_all_small_squarefree() {
        for p in [2u64, 3] {
            for d in 1..=4 {
                for f in crate::polyfield::monics_of_degree(p, d) {
                    match decompose_presented(p, &f) {
                        Ok(dec) => {
                            let total: usize = dec.ring.components().iter().map(|c| c.degree()).sum();
                            assert_eq!(total, d);
                        }
                        Err(RingError::NotRegular { .. }) => {
                            assert_ne!(squarefree_part(&f, p).unwrap(), f)
                        }
                        Err(e) => panic!("{f}: {e}"),
                    }
                }
            }
        }
    }

    #[test]
    fn projections_are_ring_maps() {
        let r = decompose_presented(3, &pp("x^3-x")).unwrap().ring;
        let a = pp("x^2+2 mod 3");
        let b = pp("2x+1 mod 3");
        let ab = a.mul(&b);
        assert_eq!(
            r.project_poly(&ab).unwrap(),
            r.mul(&r.project_poly(&a).unwrap(), &r.project_poly(&b).unwrap())
        );
    }
}
