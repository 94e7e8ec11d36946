//! Arithmetic in a presented quotient `F_p[x]/(f)`, without factoring `f`.

use crate::polyfield::{inv_mod, Poly};

use super::RingError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedRing {
    p: u64,
    f: Poly,
}

impl PresentedRing {
    /// `f` is reduced mod `p` and made monic; it must have degree >= 1.
    pub fn new(p: u64, f: &Poly) -> Result<Self, RingError> {
        let f = f.reduce(p);
        if f.degree().unwrap_or(0) == 0 {
            return Err(crate::polyfield::PolyError::InvalidPolynomial(f.to_string()).into());
        }
        Ok(PresentedRing { p, f: f.monic() })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn relation(&self) -> &Poly {
        &self.f
    }

    pub fn size(&self) -> u128 {
        (self.p as u128).pow(self.f.deg0() as u32)
    }

    pub fn reduce(&self, a: &Poly) -> Poly {
        a.reduce(self.p).rem(&self.f)
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        a.mul(b).rem(&self.f)
    }

    pub fn pow(&self, a: &Poly, e: u64) -> Poly {
        a.pow_mod(e, &self.f)
    }

    /// `a*` by iterating powers until `a^{N+1} = a` and returning
    /// `a^{2N-1}`. Fails with `NotRegular` when no power returns to `a`,
    /// which happens exactly when `a` has a nilpotent part.
    pub fn star(&self, a: &Poly) -> Result<Poly, RingError> {
        let a = self.reduce(a);
        let limit = self.size();
        let mut power = self.mul(&a, &a);
        let mut n: u64 = 1;
        while power != a {
            if n as u128 > limit {
                return Err(RingError::NotRegular { p: self.p, f: self.f.terms() });
            }
            power = self.mul(&power, &a);
            n += 1;
        }
        Ok(self.pow(&a, 2 * n - 1))
    }

    /// Basis of the Frobenius-fixed subalgebra `{ y : y^p = y }`, found as the
    /// kernel of `Q - I` where row `i` of `Q` is `x^{p i} mod f`. Its dimension
    /// equals the number of distinct irreducible factors when `f` is squarefree.
    pub fn frobenius_fixed_basis(&self) -> Vec<Poly> {
        let p = self.p;
        let n = self.f.deg0();
        let xp = Poly::x(p).pow_mod(p, &self.f);
        // columns of the matrix (Q^T - I); solve (Q^T - I) c = 0
        let mut m = vec![vec![0u64; n]; n];
        let mut row = Poly::one(p);
        for i in 0..n {
            for j in 0..n {
                m[j][i] = row.coeff(j) as u64;
            }
            m[i][i] = (m[i][i] + p - 1) % p;
            row = self.mul(&row, &xp);
        }
        nullspace_mod_p(m, p)
            .into_iter()
            .map(|v| Poly::new(v.into_iter().map(|c| c as i64).collect(), p))
            .collect()
    }
}

/// Kernel of an `n x n` matrix over `F_p`, as a list of basis vectors.
fn nullspace_mod_p(mut m: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    let cols = if n == 0 { 0 } else { m[0].len() };
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..n).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, pr);
        let inv = inv_mod(m[r][c], p);
        for v in m[r].iter_mut() {
            *v = *v * inv % p;
        }
        for i in 0..n {
            if i != r && m[i][c] != 0 {
                let k = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] + (p - k) * m[r][j]) % p;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == n {
            break;
        }
    }
    (0..cols)
        .filter(|c| !pivot_cols.contains(c))
        .map(|free| {
            let mut v = vec![0u64; cols];
            v[free] = 1;
            for (i, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = (p - m[i][free]) % p;
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_subalgebra_dimension_counts_factors() {
        let r = PresentedRing::new(2, &Poly::new(vec![0, 1, 1], 2)).unwrap();
        assert_eq!(r.frobenius_fixed_basis().len(), 2);
        let r = PresentedRing::new(2, &Poly::new(vec![1, 1, 1], 2)).unwrap();
        assert_eq!(r.frobenius_fixed_basis().len(), 1);
        // x^3 - x over F_3 splits into three linear factors
        let r = PresentedRing::new(3, &Poly::new(vec![0, 2, 0, 1], 3)).unwrap();
        for y in r.frobenius_fixed_basis() {
            assert_eq!(r.pow(&y, 3), y);
        }
        assert_eq!(r.frobenius_fixed_basis().len(), 3);
    }

    #[test]
    fn star_detects_nilpotents() {
        let r = PresentedRing::new(2, &Poly::new(vec![0, 1, 0, 1], 2)).unwrap();
        // x + 1 has a nilpotent part modulo (x+1)^2
        assert!(r.star(&Poly::new(vec![1, 1], 2)).is_err());
        let s = PresentedRing::new(5, &Poly::new(vec![0, 1], 5)).unwrap();
        assert_eq!(s.star(&Poly::constant(2, 5)).unwrap(), Poly::constant(3, 5));
    }
}
