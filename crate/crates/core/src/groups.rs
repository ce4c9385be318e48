//! Finite Abelian groups given as direct sums of cyclic groups, and the
//! splitting predicate over them.
//!
//! Every element has a canonical integer code (mixed radix over the component
//! orders), so equality, hashing and the element order used by the search are
//! all plain integer operations on codes.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::errorball::{enumerate_sparse, BallSpec, ErrorVector, SparseVector};
use crate::gf::{factorize, gcd, prime_power, FieldCtx};

/// Groups above this order are refused by enumeration and parsing.
pub const MAX_GROUP_ORDER: u64 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupKind {
    Cyclic(u64),
    DirectSum(Vec<u64>),
    FieldAdditive(Arc<FieldCtx>),
}

/// A finite Abelian group `Z_{m_1} + .. + Z_{m_r}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroup {
    kind: GroupKind,
    moduli: Vec<u64>,
    /// Code weight of each component.
    weights: Vec<u64>,
    order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub coords: Vec<u64>,
}

impl GroupElement {
    pub fn new(coords: Vec<u64>) -> Self {
        GroupElement { coords }
    }
}

impl AbelianGroup {
    pub fn cyclic(m: u64) -> Result<Self> {
        Self::build(GroupKind::Cyclic(m), vec![m])
    }

    /// Direct sum with components in the given order. A single component
    /// yields a cyclic group.
    pub fn direct_sum(moduli: &[u64]) -> Result<Self> {
        match moduli {
            [] => Err(Error::param("direct sum needs at least one component")),
            [m] => Self::cyclic(*m),
            _ => Self::build(GroupKind::DirectSum(moduli.to_vec()), moduli.to_vec()),
        }
    }

    /// Additive group of GF(q), coordinates over the prime subfield.
    pub fn field_additive(ctx: Arc<FieldCtx>) -> Result<Self> {
        let moduli = vec![ctx.p(); ctx.degree() as usize];
        Self::build(GroupKind::FieldAdditive(ctx), moduli)
    }

    fn build(kind: GroupKind, moduli: Vec<u64>) -> Result<Self> {
        if moduli.iter().any(|&m| m < 2) {
            return Err(Error::param("every cyclic component needs order at least 2"));
        }
        let order = moduli
            .iter()
            .try_fold(1u64, |acc, &m| acc.checked_mul(m))
            .filter(|&o| o <= MAX_GROUP_ORDER)
            .ok_or_else(|| Error::Resource(format!("group order exceeds {MAX_GROUP_ORDER}")))?;
        let weights = match kind {
            // field codes put the constant coefficient in the lowest digit
            GroupKind::FieldAdditive(_) => {
                let mut w = Vec::with_capacity(moduli.len());
                let mut acc = 1u64;
                for &m in &moduli {
                    w.push(acc);
                    acc *= m;
                }
                w
            }
            _ => {
                let mut w = vec![1u64; moduli.len()];
                for i in (0..moduli.len().saturating_sub(1)).rev() {
                    w[i] = w[i + 1] * moduli[i + 1];
                }
                w
            }
        };
        Ok(AbelianGroup {
            kind,
            moduli,
            weights,
            order,
        })
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn field(&self) -> Option<&Arc<FieldCtx>> {
        match &self.kind {
            GroupKind::FieldAdditive(f) => Some(f),
            _ => None,
        }
    }

    /// Minimum number of generators: the largest count of components sharing a prime.
    pub fn rank(&self) -> usize {
        let mut counts: HashMap<u64, usize> = HashMap::new();
        for &m in &self.moduli {
            for (p, _) in factorize(m) {
                *counts.entry(p).or_default() += 1;
            }
        }
        counts.values().copied().max().unwrap_or(0)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::new(vec![0; self.moduli.len()])
    }

    pub fn check(&self, a: &GroupElement) -> Result<()> {
        if a.coords.len() != self.moduli.len()
            || a.coords.iter().zip(&self.moduli).any(|(&x, &m)| x >= m)
        {
            return Err(Error::param(format!(
                "{} is not an element of {self}",
                self.format_element(a)
            )));
        }
        Ok(())
    }

    /// Reduce arbitrary integers into an element.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.moduli.len() {
            return Err(Error::param(format!(
                "{} coordinates given for a group with {} components",
                coords.len(),
                self.moduli.len()
            )));
        }
        Ok(GroupElement::new(
            coords
                .iter()
                .zip(&self.moduli)
                .map(|(&x, &m)| x.rem_euclid(m as i64) as u64)
                .collect(),
        ))
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.decode(self.add_code(self.encode(a), self.encode(b))))
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(self.decode(self.neg_code(self.encode(a))))
    }

    /// `m a`, with negative `m` meaning `|m| (-a)`.
    pub fn scalar(&self, m: i64, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(self.decode(self.scale_code(m, self.encode(a))))
    }

    pub fn encode(&self, a: &GroupElement) -> u64 {
        a.coords.iter().zip(&self.weights).map(|(x, w)| x * w).sum()
    }

    pub fn decode(&self, code: u64) -> GroupElement {
        GroupElement::new(
            self.weights
                .iter()
                .zip(&self.moduli)
                .map(|(&w, &m)| (code / w) % m)
                .collect(),
        )
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(|c| self.decode(c))
    }

    #[inline]
    pub fn add_code(&self, a: u64, b: u64) -> u64 {
        if self.moduli.len() == 1 {
            let s = a + b;
            return if s >= self.order { s - self.order } else { s };
        }
        let mut out = 0;
        for (&w, &m) in self.weights.iter().zip(&self.moduli) {
            let s = (a / w) % m + (b / w) % m;
            out += if s >= m { s - m } else { s } * w;
        }
        out
    }

    #[inline]
    pub fn neg_code(&self, a: u64) -> u64 {
        if self.moduli.len() == 1 {
            return if a == 0 { 0 } else { self.order - a };
        }
        let mut out = 0;
        for (&w, &m) in self.weights.iter().zip(&self.moduli) {
            let x = (a / w) % m;
            out += if x == 0 { 0 } else { m - x } * w;
        }
        out
    }

    pub fn scale_code(&self, k: i64, a: u64) -> u64 {
        let mut out = 0;
        for (&w, &m) in self.weights.iter().zip(&self.moduli) {
            let x = ((a / w) % m) as i128;
            let kk = i128::from(k).rem_euclid(m as i128);
            out += ((x * kk) % m as i128) as u64 * w;
        }
        out
    }

    /// Additive order of an element.
    pub fn element_order_code(&self, a: u64) -> u64 {
        self.weights
            .iter()
            .zip(&self.moduli)
            .map(|(&w, &m)| m / gcd((a / w) % m, m))
            .fold(1, |acc, o| acc / gcd(acc, o) * o)
    }

    /// Representative of `a` under independent unit scaling of each
    /// component: `gcd(x_i, m_i)` per coordinate (zero stays zero).
    pub fn orbit_rep_code(&self, a: u64) -> u64 {
        self.weights
            .iter()
            .zip(&self.moduli)
            .map(|(&w, &m)| {
                let x = (a / w) % m;
                if x == 0 {
                    0
                } else {
                    gcd(x, m) * w
                }
            })
            .sum()
    }

    /// `sum c_i s_i` over codes.
    pub fn dot_codes(&self, coeffs: &[(usize, i64)], s: &[u64]) -> u64 {
        coeffs.iter().fold(0, |acc, &(i, c)| {
            self.add_code(acc, self.scale_code(c, s[i]))
        })
    }

    /// Number of elements in the subgroup generated by `gens`.
    pub fn generated_size(&self, gens: &[u64]) -> u64 {
        let mut member = vec![false; self.order as usize];
        let mut elems = vec![0u64];
        member[0] = true;
        for &g in gens {
            if member[g as usize] {
                continue;
            }
            let mut i = 0;
            while i < elems.len() {
                let x = self.add_code(elems[i], g);
                if !member[x as usize] {
                    member[x as usize] = true;
                    elems.push(x);
                }
                i += 1;
            }
        }
        elems.len() as u64
    }

    /// Integer for single-component groups, `(a,b,..)` otherwise.
    pub fn format_element(&self, a: &GroupElement) -> String {
        match a.coords.as_slice() {
            [x] => x.to_string(),
            cs => format!(
                "({})",
                cs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
            ),
        }
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            GroupKind::Cyclic(m) => write!(f, "Z{m}"),
            GroupKind::DirectSum(ms) => {
                let parts: Vec<String> = ms.iter().map(|m| format!("Z{m}")).collect();
                f.write_str(&parts.join("x"))
            }
            GroupKind::FieldAdditive(ctx) => write!(f, "GF({})", ctx.order()),
        }
    }
}

impl FromStr for AbelianGroup {
    type Err = Error;

    /// `Z15`, `Z3xZ5`, `GF(81)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("GF(").and_then(|t| t.strip_suffix(')')) {
            let q: u64 = inner
                .parse()
                .map_err(|_| Error::Parse(format!("bad field size in {s:?}")))?;
            let (p, r) = prime_power(q)
                .ok_or_else(|| Error::Parse(format!("{q} is not a prime power")))?;
            return Self::field_additive(Arc::new(FieldCtx::new(p, r)?));
        }
        let moduli = s
            .split('x')
            .map(|part| {
                part.strip_prefix('Z')
                    .and_then(|m| m.parse::<u64>().ok())
                    .ok_or_else(|| Error::Parse(format!("bad group notation {s:?}")))
            })
            .collect::<Result<Vec<u64>>>()?;
        Self::direct_sum(&moduli)
    }
}

/// A group together with one element per coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingSequence {
    pub group: AbelianGroup,
    pub elems: Vec<GroupElement>,
}

impl SplittingSequence {
    pub fn new(group: AbelianGroup, elems: Vec<GroupElement>) -> Result<Self> {
        for e in &elems {
            group.check(e)?;
        }
        Ok(SplittingSequence { group, elems })
    }

    /// Sequence over a single-component group from integers (reduced mod the order).
    pub fn from_ints(group: AbelianGroup, xs: &[i64]) -> Result<Self> {
        let elems = xs
            .iter()
            .map(|&x| group.element(&[x]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(group, elems)
    }

    pub fn from_codes(group: AbelianGroup, codes: &[u64]) -> Result<Self> {
        if let Some(c) = codes.iter().find(|&&c| c >= group.order()) {
            return Err(Error::param(format!("code {c} outside group {group}")));
        }
        let elems = codes.iter().map(|&c| group.decode(c)).collect();
        Ok(SplittingSequence { group, elems })
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn codes(&self) -> Vec<u64> {
        self.elems.iter().map(|e| self.group.encode(e)).collect()
    }

    /// Comma-separated integers for single-component groups; otherwise
    /// `;`-separated tuples with `,` between coordinates.
    pub fn format_elems(&self) -> String {
        let single = self.group.moduli().len() == 1;
        let parts: Vec<String> = self
            .elems
            .iter()
            .map(|e| {
                e.coords
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        parts.join(if single { "," } else { ";" })
    }

    /// Inverse of [`SplittingSequence::format_elems`].
    pub fn parse_elems(group: AbelianGroup, s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_int = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad integer {t:?} in sequence")))
        };
        let elems = if group.moduli().len() == 1 {
            s.split(',')
                .map(|t| parse_int(t).and_then(|x| group.element(&[x])))
                .collect::<Result<Vec<_>>>()?
        } else {
            s.split(';')
                .map(|tuple| {
                    let coords = tuple
                        .trim()
                        .trim_start_matches('(')
                        .trim_end_matches(')')
                        .split(',')
                        .map(parse_int)
                        .collect::<Result<Vec<i64>>>()?;
                    group.element(&coords)
                })
                .collect::<Result<Vec<_>>>()?
        };
        Self::new(group, elems)
    }
}

/// `sum coeffs[i] * s[i]` in the sequence's group.
pub fn dot(coeffs: &[i64], s: &SplittingSequence) -> Result<GroupElement> {
    if coeffs.len() != s.elems.len() {
        return Err(Error::param(format!(
            "{} coefficients for a sequence of length {}",
            coeffs.len(),
            s.elems.len()
        )));
    }
    let g = &s.group;
    let code = coeffs
        .iter()
        .zip(&s.elems)
        .fold(0, |acc, (&c, e)| g.add_code(acc, g.scale_code(c, g.encode(e))));
    Ok(g.decode(code))
}

/// Two ball vectors with the same image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collision {
    pub first: ErrorVector,
    pub second: ErrorVector,
    pub value: GroupElement,
}

impl fmt::Display for Collision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.value.coords.iter().map(u64::to_string).collect();
        let v = if v.len() == 1 { v[0].clone() } else { format!("({})", v.join(",")) };
        write!(f, "({}) and ({}) both map to {v}", self.first, self.second)
    }
}

fn check_length(spec: &BallSpec, s: &SplittingSequence) -> Result<()> {
    if s.elems.len() != spec.n {
        return Err(Error::param(format!(
            "sequence length {} does not match n={}",
            s.elems.len(),
            spec.n
        )));
    }
    Ok(())
}

fn find_collision(
    ball: &[SparseVector],
    spec: &BallSpec,
    s: &SplittingSequence,
) -> Option<Collision> {
    let g = &s.group;
    let codes = s.codes();
    let mut seen: HashMap<u64, usize> = HashMap::with_capacity(ball.len());
    for (idx, v) in ball.iter().enumerate() {
        let c = g.dot_codes(v, &codes);
        if let Some(&prev) = seen.get(&c) {
            return Some(Collision {
                first: ErrorVector::from_sparse(spec.n, &ball[prev]),
                second: ErrorVector::from_sparse(spec.n, v),
                value: g.decode(c),
            });
        }
        seen.insert(c, idx);
    }
    None
}

/// First pair of ball vectors (in canonical ball order) with equal images.
pub fn first_collision(spec: &BallSpec, s: &SplittingSequence) -> Result<Option<Collision>> {
    check_length(spec, s)?;
    let ball = enumerate_sparse(spec)?;
    Ok(find_collision(&ball, spec, s))
}

/// Whether the ball maps injectively into the group under `e -> e . s`.
pub fn is_splitting(spec: &BallSpec, s: &SplittingSequence) -> Result<bool> {
    Ok(first_collision(spec, s)?.is_none())
}

/// Splitting with `|ball| = |G|`, i.e. `ker(x -> x . s)` tiles `Z^n` with the ball.
pub fn is_perfect_splitting(spec: &BallSpec, s: &SplittingSequence) -> Result<bool> {
    check_length(spec, s)?;
    let ball = enumerate_sparse(spec)?;
    if ball.len() as u64 != s.group.order() {
        return Ok(false);
    }
    Ok(find_collision(&ball, spec, s).is_none())
}

/// Partitions of `a` in reverse lexicographic order: `[a]` first.
fn partitions(a: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(a, a, &mut Vec::new(), &mut out);
    out
}

/// One group per isomorphism class, in primary decomposition form
/// (prime-power components sorted by prime, then exponent).
pub fn enumerate_abelian_groups(order: u64) -> Result<Vec<AbelianGroup>> {
    if order < 2 {
        return Err(Error::param("group order must be at least 2"));
    }
    if order > MAX_GROUP_ORDER {
        return Err(Error::Resource(format!(
            "order {order} exceeds the factorization bound {MAX_GROUP_ORDER}"
        )));
    }
    let mut shapes: Vec<Vec<u64>> = vec![Vec::new()];
    for (p, a) in factorize(order) {
        let mut next = Vec::new();
        for prefix in &shapes {
            for part in partitions(a) {
                let mut comps = prefix.clone();
                let mut local: Vec<u64> = part.iter().map(|&k| p.pow(k)).collect();
                local.sort_unstable();
                comps.extend(local);
                next.push(comps);
            }
        }
        shapes = next;
    }
    shapes.iter().map(|m| AbelianGroup::direct_sum(m)).collect()
}
