//! Irreducibility tests, enumeration of monic irreducibles and distinct-factor
//! factorization over `Z/p`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::poly::{check_prime, Poly};
use super::PolyError;
use crate::registry::Registry;

/// A decision procedure for irreducibility of a monic polynomial of degree
/// at least one over `Z/p`.
pub trait IrreducibilityTest: Send + Sync {
    fn name(&self) -> &'static str;
    fn is_irreducible(&self, f: &Poly) -> bool;
}

/// Rabin's test: `f | x^{p^n} - x` and `gcd(x^{p^{n/q}} - x, f) = 1` for
/// every prime `q | n`.
pub struct Rabin;

impl IrreducibilityTest for Rabin {
    fn name(&self) -> &'static str {
        "rabin"
    }

    fn is_irreducible(&self, f: &Poly) -> bool {
        let p = f.modulus();
        let n = f.deg0();
        if n == 1 {
            return true;
        }
        let x = Poly::x(p);
        // frob[k] = x^{p^k} mod f
        let mut frob = vec![x.rem(f)];
        for k in 0..n {
            let next = frob[k].pow_mod(p, f);
            frob.push(next);
        }
        if frob[n] != x.rem(f) {
            return false;
        }
        prime_divisors(n as u64).into_iter().all(|q| {
            let h = frob[n / q as usize].sub(&x);
            h.gcd(f).is_constant()
        })
    }
}

/// Trial division by every monic polynomial of degree `1..=n/2`.
pub struct TrialDivision;

impl IrreducibilityTest for TrialDivision {
    fn name(&self) -> &'static str {
        "trial"
    }

    fn is_irreducible(&self, f: &Poly) -> bool {
        let p = f.modulus();
        let n = f.deg0();
        (1..=n / 2).all(|d| monics_of_degree(p, d).all(|g| !g.divides(f)))
    }
}

pub fn irreducibility_tests() -> Registry<dyn IrreducibilityTest> {
    let mut r: Registry<dyn IrreducibilityTest> = Registry::new("irreducibility test");
    r.register("rabin", Box::new(Rabin));
    r.register("trial", Box::new(TrialDivision));
    r
}

pub(crate) fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// All monic polynomials of exact degree `d` over `Z/p`, ordered by the
/// coefficient tuple `(c_{d-1}, ..., c_0)` ascending.
pub fn monics_of_degree(p: u64, d: usize) -> impl Iterator<Item = Poly> {
    let count = p.pow(d as u32);
    (0..count).map(move |mut idx| {
        let mut c = vec![0i64; d + 1];
        c[d] = 1;
        for k in 0..d {
            c[k] = (idx % p) as i64;
            idx /= p;
        }
        Poly::new(c, p)
    })
}

pub fn is_irreducible(f: &Poly, p: u64) -> Result<bool, PolyError> {
    check_prime(p)?;
    let f = f.reduce(p);
    if f.is_constant() || !f.is_monic() {
        return Err(PolyError::InvalidPolynomial(f.to_string()));
    }
    Ok(Rabin.is_irreducible(&f))
}

type IrrCache = Mutex<HashMap<(u64, usize), Arc<Vec<Poly>>>>;

fn irr_cache() -> &'static IrrCache {
    static CACHE: OnceLock<IrrCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Monic irreducibles of exact degree `d`, in canonical order. Cached per `(p, d)`.
pub fn irreducibles_of_degree(p: u64, d: usize) -> Arc<Vec<Poly>> {
    if let Some(v) = irr_cache().lock().unwrap().get(&(p, d)) {
        return v.clone();
    }
    let v: Arc<Vec<Poly>> =
        Arc::new(monics_of_degree(p, d).filter(|f| Rabin.is_irreducible(f)).collect());
    irr_cache().lock().unwrap().insert((p, d), v.clone());
    v
}

pub fn enumerate_irreducibles(p: u64, dmax: usize) -> Result<Vec<Poly>, PolyError> {
    check_prime(p)?;
    if dmax == 0 {
        return Err(PolyError::InvalidDegree(0));
    }
    Ok((1..=dmax)
        .flat_map(|d| irreducibles_of_degree(p, d).as_ref().clone())
        .collect())
}

/// Distinct monic irreducible factors of `f` over `Z/p`, in canonical order.
///
/// Divides out irreducibles of increasing degree; once the cofactor has degree
/// below twice the current degree it is itself irreducible.
pub fn factor_distinct(f: &Poly, p: u64) -> Result<Vec<Poly>, PolyError> {
    check_prime(p)?;
    let mut rest = f.reduce(p);
    if rest.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    rest = rest.monic();
    let mut out = Vec::new();
    let mut d = 1;
    while rest.deg0() >= 2 * d {
        for g in irreducibles_of_degree(p, d).iter() {
            if rest.deg0() < d {
                break;
            }
            if g.divides(&rest) {
                out.push(g.clone());
                while g.divides(&rest) {
                    rest = rest.div_rem(g).0;
                }
            }
        }
        d += 1;
    }
    if rest.deg0() >= 1 {
        out.push(rest);
    }
    out.sort();
    Ok(out)
}

/// Monic product of the distinct irreducible factors of `f` over `Z/p`.
pub fn squarefree_part(f: &Poly, p: u64) -> Result<Poly, PolyError> {
    check_prime(p)?;
    let f = f.reduce(p);
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    Ok(radical(&f.monic()))
}

fn radical(f: &Poly) -> Poly {
    let p = f.modulus();
    if f.is_constant() {
        return Poly::one(p);
    }
    let df = f.derivative();
    if df.is_zero() {
        // f = g(x^p) = g(x)^p since c^p = c in Z/p
        return radical(&f.decimate(p as usize));
    }
    let c = f.gcd(&df);
    let w = f.div_rem(&c).0.monic();
    let rc = radical(&c);
    let g = w.gcd(&rc);
    w.mul(&rc).div_rem(&g).0.monic()
}

pub fn poly_gcd(f: &Poly, g: &Poly, p: u64) -> Result<Poly, PolyError> {
    check_prime(p)?;
    Ok(f.reduce(p).gcd(&g.reduce(p)))
}
