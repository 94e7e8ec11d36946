//! Polynomials over `Z` and `Z/p`, irreducibility, distinct-factor
//! factorization and the canonical finite fields built from them.

mod field;
mod irreducible;
mod poly;
pub mod zpoly;

use thiserror::Error;

pub use field::{embeddings, make_field, min_poly, Embedding, FieldElement, FiniteField};
pub use irreducible::{
    enumerate_irreducibles, factor_distinct, irreducibility_tests, irreducibles_of_degree,
    is_irreducible, monics_of_degree, poly_gcd, squarefree_part, IrreducibilityTest, Rabin,
    TrialDivision,
};
pub(crate) use poly::{check_prime, inv_mod};
pub use poly::{is_prime, Poly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("{0} is not a prime modulus")]
    InvalidModulus(u64),
    #[error("polynomial is zero modulo p")]
    ZeroPolynomial,
    #[error("expected a monic polynomial of degree >= 1, got {0}")]
    InvalidPolynomial(String),
    #[error("invalid degree {0}")]
    InvalidDegree(usize),
    #[error("GF({p}^{n}) is too large to represent")]
    FieldTooLarge { p: u64, n: usize },
    #[error("cannot parse polynomial `{0}`")]
    Parse(String),
}

/// Möbius function, by trial factorization.
pub fn mobius(n: u64) -> i64 {
    let mut n = n;
    let mut k = 0;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            k += 1;
        }
        d += 1;
    }
    if n > 1 {
        k += 1;
    }
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Number of monic irreducibles of degree `n` over `F_p`:
/// `(1/n) * sum_{d | n} mu(d) p^{n/d}`.
pub fn necklace_count(p: u64, n: u64) -> u64 {
    let total: i64 = (1..=n)
        .filter(|d| n % d == 0)
        .map(|d| mobius(d) * p.pow((n / d) as u32) as i64)
        .sum();
    (total / n as i64) as u64
}
