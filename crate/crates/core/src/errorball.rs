//! Burst error balls over `Z^n`.
//!
//! A ball is the set of error vectors whose entries lie in `[-k_minus, k_plus]`
//! and whose support fits in one window of `b` consecutive coordinates. In the
//! cyclic model windows wrap around modulo `n`; in the non-cyclic model a
//! window starting near the end is clipped at coordinate `n - 1`.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of stored integers an enumeration may produce.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 10_000_000;

/// Parameters identifying `E(n, b, k+, k-)` (non-cyclic) or `E°(n, b, k+, k-)` (cyclic).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BallSpec {
    pub n: usize,
    pub b: usize,
    pub k_plus: u32,
    pub k_minus: u32,
    pub cyclic: bool,
}

impl BallSpec {
    pub fn new(n: usize, b: usize, k_plus: u32, k_minus: u32, cyclic: bool) -> Result<Self> {
        let spec = BallSpec {
            n,
            b,
            k_plus,
            k_minus,
            cyclic,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn cyclic(n: usize, b: usize, k_plus: u32, k_minus: u32) -> Result<Self> {
        Self::new(n, b, k_plus, k_minus, true)
    }

    pub fn noncyclic(n: usize, b: usize, k_plus: u32, k_minus: u32) -> Result<Self> {
        Self::new(n, b, k_plus, k_minus, false)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::param("n must be at least 1"));
        }
        if self.b == 0 || self.b > self.n {
            return Err(Error::param(format!(
                "burst length b={} must satisfy 1 <= b <= n={}",
                self.b, self.n
            )));
        }
        if self.k_plus + self.k_minus == 0 {
            return Err(Error::param("k_plus + k_minus must be at least 1"));
        }
        Ok(())
    }

    /// Number of distinct symbol values an error entry can take, `k+ + k- + 1`.
    pub fn alphabet(&self) -> u64 {
        u64::from(self.k_plus) + u64::from(self.k_minus) + 1
    }

    /// Coordinates covered by the window starting at `start`.
    fn window(&self, start: usize) -> impl Iterator<Item = usize> + '_ {
        let len = if self.cyclic {
            self.b
        } else {
            self.b.min(self.n - start)
        };
        (0..len).map(move |j| (start + j) % self.n)
    }

    fn in_range(&self, x: i64) -> bool {
        x >= -i64::from(self.k_minus) && x <= i64::from(self.k_plus)
    }
}

impl fmt::Display for BallSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ball n={} b={} kplus={} kminus={} cyclic={}",
            self.n, self.b, self.k_plus, self.k_minus, self.cyclic
        )
    }
}

/// Accepts the `Display` form; the leading `ball` is optional and fields may
/// also be separated by commas.
impl std::str::FromStr for BallSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut fields: [Option<&str>; 5] = [None; 5];
        let keys = ["n", "b", "kplus", "kminus", "cyclic"];
        let mut tokens = s.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty());
        let mut first = tokens.next();
        if first == Some("ball") {
            first = tokens.next();
        }
        for tok in first.into_iter().chain(tokens) {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {tok:?}")))?;
            let idx = keys
                .iter()
                .position(|&key| key == k)
                .ok_or_else(|| Error::Parse(format!("unknown ball field {k:?}")))?;
            if fields[idx].replace(v).is_some() {
                return Err(Error::Parse(format!("ball field {k:?} given twice")));
            }
        }
        let get = |i: usize| fields[i].ok_or_else(|| Error::Parse(format!("ball field {:?} missing", keys[i])));
        let num = |i: usize| -> Result<u64> {
            get(i)?
                .parse()
                .map_err(|_| Error::Parse(format!("ball field {:?} is not a number", keys[i])))
        };
        let cyclic = match get(4)? {
            "true" => true,
            "false" => false,
            other => return Err(Error::Parse(format!("cyclic must be true or false, got {other:?}"))),
        };
        let narrow = |i: usize| -> Result<u32> {
            u32::try_from(num(i)?).map_err(|_| Error::Parse(format!("ball field {:?} too large", keys[i])))
        };
        BallSpec::new(num(0)? as usize, num(1)? as usize, narrow(2)?, narrow(3)?, cyclic)
    }
}

/// A dense error vector of length `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ErrorVector(pub Vec<i64>);

impl ErrorVector {
    pub fn zero(n: usize) -> Self {
        ErrorVector(vec![0; n])
    }

    pub fn from_sparse(n: usize, entries: &[(usize, i64)]) -> Self {
        let mut v = vec![0; n];
        for &(i, x) in entries {
            v[i] = x;
        }
        ErrorVector(v)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl fmt::Display for ErrorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_csv(f, &self.0)
    }
}

pub(crate) fn write_csv(f: &mut fmt::Formatter<'_>, xs: &[i64]) -> fmt::Result {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

/// Nonzero entries `(coordinate, value)` sorted by coordinate.
pub type SparseVector = Vec<(usize, i64)>;

/// `(k+ + k-) (k+ + k- + 1)^(b-1)`: nonzero burst patterns anchored at a fixed start.
pub fn e_param(b: usize, k_plus: u32, k_minus: u32) -> Result<u64> {
    if b == 0 {
        return Err(Error::param("b must be at least 1"));
    }
    let k = u64::from(k_plus) + u64::from(k_minus);
    if k == 0 {
        return Err(Error::param("k_plus + k_minus must be at least 1"));
    }
    let exp = u32::try_from(b - 1).map_err(|_| Error::param("b too large"))?;
    (k + 1)
        .checked_pow(exp)
        .and_then(|p| p.checked_mul(k))
        .ok_or_else(|| Error::param("e parameter overflows u64"))
}

/// Advance an odometer over `[lo, hi]^len`, last position fastest.
fn next_pattern(pattern: &mut [i64], lo: i64, hi: i64) -> bool {
    for x in pattern.iter_mut().rev() {
        if *x < hi {
            *x += 1;
            return true;
        }
        *x = lo;
    }
    false
}

/// Upper bound on the ball size, before deduplication.
fn raw_size_bound(spec: &BallSpec) -> u64 {
    let per_window = spec
        .alphabet()
        .checked_pow(spec.b as u32)
        .unwrap_or(u64::MAX)
        .saturating_sub(1);
    (spec.n as u64).saturating_mul(per_window).saturating_add(1)
}

/// Enumerate the ball as sparse vectors in canonical order: the zero vector
/// first, then windows by start index, patterns in lexicographic order, with
/// later duplicates dropped.
///
/// The budget bounds `b * |ball|` stored entries.
pub fn enumerate_sparse_with_budget(spec: &BallSpec, budget: u64) -> Result<Vec<SparseVector>> {
    spec.validate()?;
    let bound = raw_size_bound(spec);
    if bound.saturating_mul(spec.b as u64) > budget {
        return Err(Error::Resource(format!(
            "ball {spec} may hold {bound} vectors, over the enumeration budget {budget}"
        )));
    }
    let lo = -i64::from(spec.k_minus);
    let hi = i64::from(spec.k_plus);
    let mut seen: HashSet<SparseVector> = HashSet::with_capacity(bound as usize);
    let mut out = Vec::with_capacity(bound as usize);
    out.push(Vec::new());
    seen.insert(Vec::new());

    let mut pattern = Vec::with_capacity(spec.b);
    for start in 0..spec.n {
        let coords: Vec<usize> = spec.window(start).collect();
        pattern.clear();
        pattern.resize(coords.len(), lo);
        loop {
            if pattern.iter().any(|&x| x != 0) {
                let mut v: SparseVector = coords
                    .iter()
                    .zip(&pattern)
                    .filter(|(_, &x)| x != 0)
                    .map(|(&i, &x)| (i, x))
                    .collect();
                v.sort_unstable();
                if seen.insert(v.clone()) {
                    out.push(v);
                }
            }
            if !next_pattern(&mut pattern, lo, hi) {
                break;
            }
        }
    }
    Ok(out)
}

pub fn enumerate_sparse(spec: &BallSpec) -> Result<Vec<SparseVector>> {
    enumerate_sparse_with_budget(spec, DEFAULT_ENUMERATION_BUDGET)
}

/// All vectors of the ball, including zero, in canonical order.
pub fn enumerate_ball_with_budget(spec: &BallSpec, budget: u64) -> Result<Vec<ErrorVector>> {
    spec.validate()?;
    let bound = raw_size_bound(spec);
    if bound.saturating_mul(spec.n as u64) > budget {
        return Err(Error::Resource(format!(
            "ball {spec} may need {} stored entries, over the enumeration budget {budget}",
            bound.saturating_mul(spec.n as u64)
        )));
    }
    Ok(enumerate_sparse_with_budget(spec, u64::MAX)?
        .iter()
        .map(|v| ErrorVector::from_sparse(spec.n, v))
        .collect())
}

pub fn enumerate_ball(spec: &BallSpec) -> Result<Vec<ErrorVector>> {
    enumerate_ball_with_budget(spec, DEFAULT_ENUMERATION_BUDGET)
}

/// Cardinality of the ball, always by enumeration. In the cyclic case with
/// `n >= 2b - 1` the count is checked against `e * n + 1`.
pub fn ball_size(spec: &BallSpec) -> Result<u64> {
    let size = enumerate_sparse(spec)?.len() as u64;
    if spec.cyclic && spec.n + 1 >= 2 * spec.b {
        let e = e_param(spec.b, spec.k_plus, spec.k_minus)?;
        let expected = e * spec.n as u64 + 1;
        if expected != size {
            return Err(Error::Internal(format!(
                "enumerated |{spec}| = {size} but e*n+1 = {expected}"
            )));
        }
    }
    Ok(size)
}

/// Membership test for the ball.
pub fn contains(spec: &BallSpec, v: &[i64]) -> Result<bool> {
    spec.validate()?;
    if v.len() != spec.n {
        return Err(Error::param(format!(
            "vector length {} does not match n={}",
            v.len(),
            spec.n
        )));
    }
    if !v.iter().all(|&x| spec.in_range(x)) {
        return Ok(false);
    }
    let support: Vec<usize> = (0..spec.n).filter(|&i| v[i] != 0).collect();
    let (Some(&first), Some(&last)) = (support.first(), support.last()) else {
        return Ok(true);
    };
    if !spec.cyclic {
        return Ok(last - first < spec.b);
    }
    let n = spec.n;
    Ok(support
        .iter()
        .any(|&start| support.iter().all(|&j| (j + n - start) % n < spec.b)))
}
