//! Dense univariate polynomials over the integers or over `Z/p`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::PolyError;

/// Dense polynomial, lowest degree first.
///
/// `modulus == 0` means integer coefficients; otherwise every coefficient is
/// reduced into `[0, modulus)`. The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<i64>,
    modulus: u64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn check_prime(p: u64) -> Result<(), PolyError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(PolyError::InvalidModulus(p))
    }
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod_u64(a, p - 2, p)
}

pub(crate) fn pow_mod_u64(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn reduce_coeff(c: i64, p: u64) -> i64 {
    c.rem_euclid(p as i64)
}

impl Poly {
    pub fn new(coeffs: Vec<i64>, modulus: u64) -> Self {
        let mut coeffs = coeffs;
        if modulus > 0 {
            for c in coeffs.iter_mut() {
                *c = reduce_coeff(*c, modulus);
            }
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs, modulus }
    }

    pub fn integer(coeffs: Vec<i64>) -> Self {
        Self::new(coeffs, 0)
    }

    pub fn zero(modulus: u64) -> Self {
        Poly { coeffs: Vec::new(), modulus }
    }

    pub fn one(modulus: u64) -> Self {
        Self::constant(1, modulus)
    }

    pub fn constant(c: i64, modulus: u64) -> Self {
        Self::new(vec![c], modulus)
    }

    /// The polynomial `x`.
    pub fn x(modulus: u64) -> Self {
        Self::new(vec![0, 1], modulus)
    }

    /// `x^k`.
    pub fn monomial(k: usize, modulus: u64) -> Self {
        let mut c = vec![0; k + 1];
        c[k] = 1;
        Self::new(c, modulus)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0; handy for bounds.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> i64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeff(&self, k: usize) -> i64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    /// Reduction of an integer polynomial (or re-reduction) modulo `p`.
    pub fn reduce(&self, p: u64) -> Poly {
        Poly::new(self.coeffs.clone(), p)
    }

    /// Forget the modulus, keeping the `[0, p)` representatives.
    pub fn lift(&self) -> Poly {
        Poly::new(self.coeffs.clone(), 0)
    }

    fn same_ring(&self, other: &Poly) {
        assert_eq!(self.modulus, other.modulus, "mixing polynomials over different rings");
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.same_ring(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Poly::new(c, self.modulus)
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect(), self.modulus)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.same_ring(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.modulus);
        }
        let mut c = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        let p = self.modulus as i64;
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
                if p > 0 {
                    c[i + j] %= p;
                }
            }
        }
        Poly::new(c, self.modulus)
    }

    pub fn scale(&self, k: i64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect(), self.modulus)
    }

    pub fn derivative(&self) -> Poly {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * k as i64)
            .collect();
        Poly::new(c, self.modulus)
    }

    fn field_modulus(&self) -> u64 {
        assert!(self.modulus > 0, "operation requires coefficients mod p");
        self.modulus
    }

    /// Scale to leading coefficient 1 (mod p). The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Poly {
        let p = self.field_modulus();
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.leading() as u64, p) as i64;
        self.scale(inv)
    }

    /// Euclidean division mod p. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        self.same_ring(d);
        let p = self.field_modulus();
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.coeffs.len() - 1;
        let inv = inv_mod(d.leading() as u64, p) as i64;
        let mut r = self.coeffs.clone();
        if r.len() < d.coeffs.len() {
            return (Poly::zero(p), self.clone());
        }
        let mut q = vec![0i64; r.len() - dd];
        let pi = p as i64;
        for k in (0..q.len()).rev() {
            let c = r[k + dd] * inv % pi;
            q[k] = c;
            if c == 0 {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] = (r[k + j] - c * dc).rem_euclid(pi);
            }
        }
        r.truncate(dd);
        (Poly::new(q, p), Poly::new(r, p))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    pub fn divides(&self, f: &Poly) -> bool {
        f.rem(self).is_zero()
    }

    /// Monic gcd mod p; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod m` over `Z/p`.
    pub fn pow_mod(&self, mut e: u64, m: &Poly) -> Poly {
        let p = self.field_modulus();
        let mut base = self.rem(m);
        let mut acc = Poly::one(p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// Horner evaluation mod p at an integer point.
    pub fn eval_mod(&self, x: u64) -> u64 {
        let p = self.field_modulus();
        self.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| (acc * (x % p) + c as u64) % p)
    }

    /// Substitute `x -> x^k`.
    pub fn compose_power(&self, k: usize) -> Poly {
        let mut c = vec![0i64; self.coeffs.len().saturating_sub(1) * k + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[i * k] = *a;
        }
        Poly::new(c, self.modulus)
    }

    /// Keep only the coefficients of `x^{k*i}`, reindexed to `x^i`.
    pub(crate) fn decimate(&self, k: usize) -> Poly {
        let c = self.coeffs.iter().step_by(k).copied().collect();
        Poly::new(c, self.modulus)
    }

    /// Ordering used for enumerations: degree, then coefficient tuple from the
    /// top coefficient down.
    pub fn canonical_cmp(&self, other: &Poly) -> Ordering {
        self.modulus
            .cmp(&other.modulus)
            .then(self.coeffs.len().cmp(&other.coeffs.len()))
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_cmp(other)
    }
}

/// Writes `x^3+2x+1`; the integer case uses explicit signs (`x^2-2`).
fn fmt_terms(coeffs: &[i64], var: &str, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if coeffs.is_empty() {
        return write!(f, "0");
    }
    let mut first = true;
    for (k, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let neg = c < 0;
        let a = c.unsigned_abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, "{}", if neg { "-" } else { "+" })?;
        }
        first = false;
        match k {
            0 => write!(f, "{a}")?,
            _ => {
                if a != 1 {
                    write!(f, "{a}")?;
                }
                write!(f, "{var}")?;
                if k > 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(&self.coeffs, "x", f)?;
        if self.modulus > 0 {
            write!(f, " mod {}", self.modulus)?;
        }
        Ok(())
    }
}

impl Poly {
    /// Display without the `mod p` suffix.
    pub fn terms(&self) -> String {
        struct T<'a>(&'a [i64]);
        impl fmt::Display for T<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt_terms(self.0, "x", f)
            }
        }
        T(&self.coeffs).to_string()
    }

    /// Parse terms like `x^3+2x+1` with an optional trailing `mod p`.
    /// Whitespace is ignored and `*` between coefficient and `x` is allowed.
    pub fn parse(s: &str) -> Result<Poly, PolyError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (body, modulus) = match compact.find("mod") {
            Some(i) => {
                let m = compact[i + 3..]
                    .parse::<u64>()
                    .map_err(|_| PolyError::Parse(s.to_string()))?;
                check_prime(m)?;
                (&compact[..i], m)
            }
            None => (&compact[..], 0),
        };
        Ok(Poly::new(parse_terms(body, 'x').map_err(|_| PolyError::Parse(s.to_string()))?, modulus))
    }
}

/// Parse a sum of terms in one variable into a dense coefficient vector.
pub(crate) fn parse_terms(body: &str, var: char) -> Result<Vec<i64>, ()> {
    if body.is_empty() {
        return Err(());
    }
    let mut coeffs: Vec<i64> = Vec::new();
    let chars: Vec<char> = body.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let mut sign = 1i64;
        if chars[i] == '+' || chars[i] == '-' {
            if chars[i] == '-' {
                sign = -1;
            }
            i += 1;
        } else if i > 0 {
            return Err(());
        }
        let start = i;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        let num: Option<i64> = if i > start {
            Some(chars[start..i].iter().collect::<String>().parse().map_err(|_| ())?)
        } else {
            None
        };
        if i < chars.len() && chars[i] == '*' {
            i += 1;
            if i >= chars.len() || chars[i] != var {
                return Err(());
            }
        }
        let mut power = 0usize;
        if i < chars.len() && chars[i] == var {
            i += 1;
            power = 1;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let s2 = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i == s2 {
                    return Err(());
                }
                power = chars[s2..i].iter().collect::<String>().parse().map_err(|_| ())?;
            }
        } else if num.is_none() {
            return Err(());
        }
        let c = sign * num.unwrap_or(1);
        if coeffs.len() <= power {
            coeffs.resize(power + 1, 0);
        }
        coeffs[power] += c;
    }
    Ok(coeffs)
}

impl FromStr for Poly {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Poly::parse(s)
    }
}
