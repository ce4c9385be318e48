//! Table-driven arithmetic in GF(p^r).
//!
//! Elements are identified by a code `sum c_i p^i` over their coefficient
//! vector `(c_0, .., c_{r-1})` with respect to the modulus. Multiplication goes
//! through exp/log tables built once against a fixed generator: the first
//! primitive element in code order.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported field size. The log table is `O(q)`.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(pub u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// GF(q) context. Immutable once built.
#[derive(Clone)]
pub struct FieldCtx {
    p: u32,
    r: u32,
    q: u32,
    /// Monic, constant term first, length `r + 1`.
    modulus: Vec<u32>,
    generator: FieldElem,
    /// `exp[i] = g^i` for `i` in `0..2(q-1)`, doubled to skip a reduction.
    exp: Vec<u32>,
    /// `log[x]` for nonzero `x`; `log[0]` is unused.
    log: Vec<u32>,
    /// Distinct primes dividing `q - 1`.
    order_factors: Vec<u64>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("r", &self.r)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.r == other.r && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs in
/// increasing prime order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut a = 0;
            while n % d == 0 {
                n /= d;
                a += 1;
            }
            out.push((d, a));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `Some((p, r))` if `q = p^r` for a prime `p`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    match factorize(q).as_slice() {
        [(p, r)] => Some((*p, *r)),
        _ => None,
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub(crate) fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Coefficients of a polynomial `c_0 + c_1 x + ..` over GF(p), trimmed.
fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Remainder of `a` modulo a monic `m` over GF(p).
fn poly_rem(p: u32, a: &[u32], m: &[u32]) -> Vec<u32> {
    let mut a = a.to_vec();
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                let t = (u64::from(lead) * u64::from(c)) % u64::from(p);
                let idx = i + shift;
                a[idx] = ((u64::from(a[idx]) + u64::from(p) - t) % u64::from(p)) as u32;
            }
        }
        a.pop();
    }
    a
}

/// Irreducibility of a monic polynomial over GF(p) by trial division with
/// every monic polynomial of degree at most half its degree.
pub fn is_irreducible(p: u32, monic: &[u32]) -> bool {
    let deg = monic.len().saturating_sub(1);
    if deg == 0 || monic.last() != Some(&1) {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = u64::from(p).pow(d as u32);
        for code in 0..count {
            let mut divisor = digits(code, p, d);
            divisor.push(1);
            if trim(poly_rem(p, monic, &divisor)).is_empty() {
                return false;
            }
        }
    }
    true
}

fn digits(mut code: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((code % u64::from(p)) as u32);
        code /= u64::from(p);
    }
    out
}

/// Monic irreducible polynomials of degree `r` over GF(p) in lexicographic
/// order of `(c_0, .., c_{r-1})`, constant term compared first.
pub fn irreducibles(p: u32, r: u32) -> impl Iterator<Item = Vec<u32>> {
    let count = u64::from(p).pow(r);
    (0..count).filter_map(move |code| {
        // c_0 is the most significant digit
        let mut c = digits(code, p, r as usize);
        c.reverse();
        c.push(1);
        is_irreducible(p, &c).then_some(c)
    })
}

impl FieldCtx {
    /// GF(p^r) with the lexicographically smallest monic irreducible modulus.
    pub fn new(p: u64, r: u32) -> Result<Self> {
        Self::check_size(p, r)?;
        let modulus = irreducibles(p as u32, r)
            .next()
            .ok_or_else(|| Error::Internal(format!("no irreducible of degree {r} over GF({p})")))?;
        Self::with_modulus(p, r, &modulus)
    }

    /// GF(q) for a prime power `q`.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, r) = prime_power(q)
            .ok_or_else(|| Error::param(format!("{q} is not a prime power")))?;
        Self::new(p, r)
    }

    fn check_size(p: u64, r: u32) -> Result<u64> {
        if r == 0 {
            return Err(Error::param("extension degree must be at least 1"));
        }
        if !is_prime(p) {
            return Err(Error::param(format!("{p} is not prime")));
        }
        match p.checked_pow(r) {
            Some(q) if q <= MAX_FIELD_SIZE => Ok(q),
            _ => Err(Error::Resource(format!(
                "field size {p}^{r} exceeds {MAX_FIELD_SIZE}"
            ))),
        }
    }

    /// GF(p^r) represented modulo the given monic polynomial (constant term first).
    pub fn with_modulus(p: u64, r: u32, modulus: &[u32]) -> Result<Self> {
        let q = Self::check_size(p, r)?;
        if modulus.len() != r as usize + 1 || modulus[r as usize] != 1 {
            return Err(Error::param("modulus must be monic of degree r"));
        }
        if modulus.iter().any(|&c| u64::from(c) >= p) {
            return Err(Error::param("modulus coefficients must be reduced mod p"));
        }
        if !is_irreducible(p as u32, modulus) {
            return Err(Error::param(format!(
                "modulus {modulus:?} is reducible over GF({p})"
            )));
        }
        let order_factors: Vec<u64> = factorize(q - 1).into_iter().map(|(l, _)| l).collect();
        let mut ctx = FieldCtx {
            p: p as u32,
            r,
            q: q as u32,
            modulus: modulus.to_vec(),
            generator: FieldElem::ONE,
            exp: Vec::new(),
            log: Vec::new(),
            order_factors,
        };
        let generator = (1..ctx.q)
            .map(FieldElem)
            .find(|&x| ctx.is_primitive_slow(x))
            .ok_or_else(|| Error::Internal("no primitive element found".into()))?;
        ctx.generator = generator;
        ctx.build_tables()?;
        Ok(ctx)
    }

    fn build_tables(&mut self) -> Result<()> {
        let order = (self.q - 1) as usize;
        let mut exp = Vec::with_capacity(2 * order);
        let mut log = vec![u32::MAX; self.q as usize];
        let mut x = FieldElem::ONE;
        for i in 0..order {
            if log[x.0 as usize] != u32::MAX {
                return Err(Error::Internal("generator order below q-1".into()));
            }
            log[x.0 as usize] = i as u32;
            exp.push(x.0);
            x = self.mul_slow(x, self.generator);
        }
        let doubled = exp.clone();
        exp.extend(doubled);
        self.exp = exp;
        self.log = log;
        Ok(())
    }

    pub fn p(&self) -> u64 {
        u64::from(self.p)
    }

    pub fn degree(&self) -> u32 {
        self.r
    }

    pub fn order(&self) -> u64 {
        u64::from(self.q)
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The fixed generator all stored logs refer to.
    pub fn generator(&self) -> FieldElem {
        self.generator
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(FieldElem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FieldElem> {
        (1..self.q).map(FieldElem)
    }

    pub fn coeffs(&self, x: FieldElem) -> Vec<u32> {
        digits(u64::from(x.0), self.p, self.r as usize)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElem> {
        if coeffs.len() != self.r as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::param(format!(
                "coefficient vector {coeffs:?} is not an element of GF({})",
                self.q
            )));
        }
        Ok(FieldElem(
            coeffs
                .iter()
                .rev()
                .fold(0u32, |acc, &c| acc * self.p + c),
        ))
    }

    pub fn elem(&self, code: u64) -> Result<FieldElem> {
        if code >= u64::from(self.q) {
            return Err(Error::param(format!("{code} is not an element of GF({})", self.q)));
        }
        Ok(FieldElem(code as u32))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> FieldElem {
        FieldElem(v.rem_euclid(i64::from(self.p)) as u32)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.r == 1 {
            let s = a.0 + b.0;
            return FieldElem(if s >= self.p { s - self.p } else { s });
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut w = 1u32;
        for _ in 0..self.r {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * w;
            w = w.wrapping_mul(self.p);
            x /= self.p;
            y /= self.p;
        }
        FieldElem(out)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.r == 1 {
            return FieldElem(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let mut x = a.0;
        let mut out = 0u32;
        let mut w = 1u32;
        for _ in 0..self.r {
            let d = (self.p - x % self.p) % self.p;
            out += d * w;
            w = w.wrapping_mul(self.p);
            x /= self.p;
        }
        FieldElem(out)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        let i = self.log[a.0 as usize] + self.log[b.0 as usize];
        FieldElem(self.exp[i as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.0 == 0 {
            return Err(Error::param("zero has no inverse"));
        }
        let order = self.q - 1;
        let l = self.log[a.0 as usize];
        Ok(FieldElem(self.exp[((order - l) % order) as usize]))
    }

    /// `a^k`; `0^0 = 1` and negative powers of zero are an error.
    pub fn pow(&self, a: FieldElem, k: i64) -> Result<FieldElem> {
        if a.0 == 0 {
            return match k {
                0 => Ok(FieldElem::ONE),
                k if k > 0 => Ok(FieldElem::ZERO),
                _ => Err(Error::param("negative power of zero")),
            };
        }
        let order = i64::from(self.q - 1);
        let l = i64::from(self.log[a.0 as usize]);
        let e = (l as i128 * k as i128).rem_euclid(order as i128) as usize;
        Ok(FieldElem(self.exp[e]))
    }

    /// `g^k` for the fixed generator `g`.
    pub fn gen_pow(&self, k: u64) -> FieldElem {
        FieldElem(self.exp[(k % u64::from(self.q - 1)) as usize])
    }

    /// Log of a nonzero element against the fixed generator.
    pub fn log_gen(&self, x: FieldElem) -> Result<u64> {
        if x.0 == 0 || x.0 >= self.q {
            return Err(Error::param("log of zero or a non-element"));
        }
        Ok(u64::from(self.log[x.0 as usize]))
    }

    pub fn is_primitive(&self, x: FieldElem) -> Result<bool> {
        if x.0 == 0 {
            return Err(Error::param("zero is never primitive"));
        }
        let order = u64::from(self.q - 1);
        let l = self.log_gen(x)?;
        Ok(self
            .order_factors
            .iter()
            .all(|&ell| (l * (order / ell)) % order != 0))
    }

    /// Primitivity by repeated squaring through the polynomial representation;
    /// used before the tables exist.
    fn is_primitive_slow(&self, x: FieldElem) -> bool {
        let order = u64::from(self.q - 1);
        self.order_factors
            .iter()
            .all(|&ell| self.pow_slow(x, order / ell) != FieldElem::ONE)
    }

    fn pow_slow(&self, mut base: FieldElem, mut k: u64) -> FieldElem {
        let mut acc = FieldElem::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            k >>= 1;
        }
        acc
    }

    fn mul_slow(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let p = u64::from(self.p);
        let (ca, cb) = (self.coeffs(a), self.coeffs(b));
        let mut prod = vec![0u32; 2 * self.r as usize];
        for (i, &x) in ca.iter().enumerate() {
            for (j, &y) in cb.iter().enumerate() {
                let t = u64::from(prod[i + j]) + u64::from(x) * u64::from(y);
                prod[i + j] = (t % p) as u32;
            }
        }
        let mut rem = poly_rem(self.p, &prod, &self.modulus);
        rem.resize(self.r as usize, 0);
        FieldElem(rem.iter().rev().fold(0u32, |acc, &c| acc * self.p + c))
    }

    /// `a` with `base^a = x`, `0 <= a <= q - 2`.
    pub fn dlog(&self, base: FieldElem, x: FieldElem) -> Result<u64> {
        if !self.is_primitive(base)? {
            return Err(Error::param(format!(
                "base {} is not primitive",
                self.format(base)
            )));
        }
        let order = u64::from(self.q - 1);
        let lx = self.log_gen(x)?;
        let lb = self.log_gen(base)?;
        let inv = mod_inverse(lb, order).unwrap_or(0);
        Ok(((u128::from(lx) * u128::from(inv)) % u128::from(order)) as u64)
    }

    /// Whether `x` is a nonzero square. Defined for odd `q` only.
    pub fn is_qr(&self, x: FieldElem) -> Result<bool> {
        if self.p == 2 {
            return Err(Error::param("quadratic character needs odd q"));
        }
        Ok(self.log_gen(x)? % 2 == 0)
    }

    /// Horner evaluation of an integer polynomial (constant term first).
    pub fn eval_poly(&self, coeffs: &[i64], x: FieldElem) -> FieldElem {
        coeffs.iter().rev().fold(FieldElem::ZERO, |acc, &c| {
            self.add(self.mul(acc, x), self.from_int(c))
        })
    }

    /// Integers for prime fields, bracketed coefficient tuples otherwise.
    pub fn format(&self, x: FieldElem) -> String {
        if self.r == 1 {
            return x.0.to_string();
        }
        let c: Vec<String> = self.coeffs(x).iter().map(u32::to_string).collect();
        format!("[{}]", c.join(","))
    }
}
