//! Explicit splitting sequences.
//!
//! Two kinds live here: closed-form sequences over cyclic groups for 2-bursts
//! of `(1,0)` errors, and sequences over the additive group of GF(q) built
//! from powers of a primitive element that satisfies a discrete-log covering
//! condition on a family of polynomials.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::errorball::{e_param, BallSpec};
use crate::gf::{mod_inverse, FieldCtx, FieldElem};
use crate::groups::{is_perfect_splitting, AbelianGroup, GroupElement, SplittingSequence};

/// `1_m (x) a + b (x) 1_n` over `Z_g`: copies of `a` shifted by each entry of `b` in turn.
pub fn boxplus(a: &[u64], b: &[u64], g: u64) -> Result<Vec<u64>> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::param("boxplus needs non-empty operands"));
    }
    if g == 0 {
        return Err(Error::param("modulus must be positive"));
    }
    Ok(b.iter()
        .flat_map(|&shift| a.iter().map(move |&x| (x + shift) % g))
        .collect())
}

fn steps(step: u64, last: u64) -> Vec<u64> {
    (0..=last / step).map(|i| i * step).collect()
}

/// Perfect splitting of `Z_{2n}` by `E(n, 2, 1, 0)`, `n >= 2`.
pub fn construct_noncyclic_2_10(n: usize) -> Result<SplittingSequence> {
    if n < 2 {
        return Err(Error::param("non-cyclic (2,1,0) construction needs n >= 2"));
    }
    let n64 = n as u64;
    let g = 2 * n64;
    let m = n64 / 2;
    let s: Vec<u64> = if n % 2 == 1 {
        let base = if m % 2 == 0 {
            [m + 1, 3 * m + 3]
        } else {
            [3 * m + 2, m + 2]
        };
        let mut s = boxplus(&base, &steps(2, 2 * m), g)?;
        s.truncate(n);
        s
    } else if m % 2 == 0 {
        boxplus(&[m + 1, 3 * m + 1], &steps(2, 2 * m - 2), g)?
    } else if m == 1 {
        vec![1, 2]
    } else {
        let s1 = (0..m - 1).map(|i| 1 + 2 * i);
        let s2 = (0..(m + 1) / 2).map(|i| 2 * m + 1 + 4 * i);
        let s3 = (0..(m + 1) / 2).map(|i| 4 * m - 3 - 4 * i);
        s1.chain(s2).chain(s3).collect()
    };
    SplittingSequence::from_codes(AbelianGroup::cyclic(g)?, &s)
}

/// Perfect splitting of `Z_{2n+1}` by `E°(n, 2, 1, 0)` for `n >= 4`,
/// `n = 1, 4 (mod 6)`.
pub fn construct_cyclic_2_10(n: usize) -> Result<SplittingSequence> {
    if n < 4 || !(n % 6 == 1 || n % 6 == 4) {
        return Err(Error::Unsupported(format!(
            "cyclic (2,1,0) construction covers n >= 4 with n = 1, 4 (mod 6), not n = {n}"
        )));
    }
    let n64 = n as u64;
    let g = 2 * n64 + 1;
    let s: Vec<u64> = if n % 6 == 1 {
        let m = (n64 - 1) / 6;
        let base = [3 * m + 1, 3 * m + 2, 6 * m + 2, 6 * m + 4, 2, 9 * m + 5];
        let mut s = boxplus(&base, &steps(3, 3 * m), g)?;
        s.truncate(n);
        s
    } else {
        let m = (n64 - 4) / 6;
        if m == 0 {
            vec![1, 3, 2, 6]
        } else {
            let base = [1, 9 * m + 10, 3 * m + 2, 3 * m + 7, 6 * m + 7, 6 * m + 8];
            let mut s = boxplus(&base, &steps(3, 3 * (m - 1)), g)?;
            s.extend([6 * m + 5, 12 * m + 6, 6 * m + 6, 9 * m + 7]);
            s
        }
    };
    SplittingSequence::from_codes(AbelianGroup::cyclic(g)?, &s)
}

/// Polynomial families whose discrete logs drive the field constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `{ (1, x^e, .., x^((b-1)e)) . c : c in [-k-, k+]^b, c_0 != 0 }`, for `s_alpha`.
    Burst { b: usize, k_plus: u32, k_minus: u32 },
    /// `{±1, ±x^3, ±(1+x^3), ±(1-x^3), ±(x^3+x^12), ±(x^3-x^12)}`, for `r_alpha`.
    Interleaved,
    /// `1+x^6, 1+2x^6, 2, 2+x^6, 2+2x^6` with residues `{1..5}` mod 6, for 2-bursts of `(2,0)` errors.
    TwoTwoZero,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Burst {
                b,
                k_plus,
                k_minus,
            } => write!(f, "F({b},{k_plus},{k_minus})"),
            Family::Interleaved => f.write_str("R"),
            Family::TwoTwoZero => f.write_str("C220"),
        }
    }
}

/// An integer polynomial, constant term first.
pub type IntPoly = Vec<i64>;

/// Coefficient values in `[-k-, k+]` ordered `0, 1, -1, 2, -2, ..`.
fn digit_order(k_plus: u32, k_minus: u32) -> Vec<i64> {
    let mut out = vec![0];
    for m in 1..=i64::from(k_plus.max(k_minus)) {
        if m <= i64::from(k_plus) {
            out.push(m);
        }
        if m <= i64::from(k_minus) {
            out.push(-m);
        }
    }
    out
}

/// Coefficient vectors `c` of the burst family: `c_0` outermost, then the
/// tail counted with `c_1` fastest.
fn burst_coefficients(b: usize, k_plus: u32, k_minus: u32) -> Vec<Vec<i64>> {
    let digits = digit_order(k_plus, k_minus);
    let mut out = Vec::new();
    for &c0 in digits.iter().skip(1) {
        let mut idx = vec![0usize; b - 1];
        loop {
            let mut c = vec![c0];
            c.extend(idx.iter().map(|&i| digits[i]));
            out.push(c);
            let mut pos = 0;
            while pos < idx.len() {
                idx[pos] += 1;
                if idx[pos] < digits.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == idx.len() {
                break;
            }
        }
    }
    out
}

fn sparse_poly(terms: &[(usize, i64)]) -> IntPoly {
    let deg = terms.iter().map(|&(d, _)| d).max().unwrap_or(0);
    let mut p = vec![0; deg + 1];
    for &(d, c) in terms {
        p[d] += c;
    }
    while p.len() > 1 && p.last() == Some(&0) {
        p.pop();
    }
    p
}

impl Family {
    pub fn burst(b: usize, k_plus: u32, k_minus: u32) -> Self {
        Family::Burst {
            b,
            k_plus,
            k_minus,
        }
    }

    /// Modulus the discrete logs are reduced by.
    pub fn modulus(&self) -> Result<u64> {
        match *self {
            Family::Burst {
                b,
                k_plus,
                k_minus,
            } => e_param(b, k_plus, k_minus),
            Family::Interleaved => Ok(12),
            Family::TwoTwoZero => Ok(6),
        }
    }

    /// Residues the logs must cover exactly.
    pub fn required_residues(&self) -> Result<BTreeSet<u64>> {
        Ok(match self {
            Family::TwoTwoZero => (1..=5).collect(),
            _ => (0..self.modulus()?).collect(),
        })
    }

    /// Whether GF(q) is in the family's admissible class.
    pub fn admissible(&self, q: u64) -> Result<bool> {
        Ok(match self {
            Family::Burst { .. } => (q - 1) % self.modulus()? == 0,
            Family::Interleaved => q % 24 == 13,
            Family::TwoTwoZero => q % 6 == 1,
        })
    }

    /// The family's polynomials in their fixed order.
    pub fn polys(&self) -> Result<Vec<IntPoly>> {
        match *self {
            Family::Burst {
                b,
                k_plus,
                k_minus,
            } => {
                BallSpec::new(b, b, k_plus, k_minus, false)?;
                let e = self.modulus()?;
                if e.saturating_mul(b as u64) > 1 << 20 {
                    return Err(Error::Resource(format!("family {self} has degree too large")));
                }
                let e = e as usize;
                Ok(burst_coefficients(b, k_plus, k_minus)
                    .iter()
                    .map(|c| {
                        let terms: Vec<(usize, i64)> =
                            c.iter().enumerate().map(|(j, &cj)| (j * e, cj)).collect();
                        sparse_poly(&terms)
                    })
                    .collect())
            }
            Family::Interleaved => {
                let bases: [&[(usize, i64)]; 6] = [
                    &[(0, 1)],
                    &[(3, 1)],
                    &[(0, 1), (3, 1)],
                    &[(0, 1), (3, -1)],
                    &[(3, 1), (12, 1)],
                    &[(3, 1), (12, -1)],
                ];
                Ok(bases
                    .iter()
                    .flat_map(|t| {
                        let neg: Vec<(usize, i64)> = t.iter().map(|&(d, c)| (d, -c)).collect();
                        [sparse_poly(t), sparse_poly(&neg)]
                    })
                    .collect())
            }
            Family::TwoTwoZero => Ok(vec![
                sparse_poly(&[(0, 1), (6, 1)]),
                sparse_poly(&[(0, 1), (6, 2)]),
                sparse_poly(&[(0, 2)]),
                sparse_poly(&[(0, 2), (6, 1)]),
                sparse_poly(&[(0, 2), (6, 2)]),
            ]),
        }
    }
}

/// Outcome of evaluating a family at a primitive element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub q: u64,
    pub alpha: FieldElem,
    pub alpha_text: String,
    pub family: Family,
    /// `log_alpha(f_i(alpha))`, `None` where `f_i(alpha) = 0`.
    pub logs: Vec<Option<u64>>,
    pub satisfied: bool,
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let logs: Vec<String> = self
            .logs
            .iter()
            .map(|l| l.map_or_else(|| "-".to_string(), |v| v.to_string()))
            .collect();
        write!(
            f,
            "q={} alpha={} family={} logs=[{}] satisfied={}",
            self.q,
            self.alpha_text,
            self.family,
            logs.join(","),
            self.satisfied
        )
    }
}

/// How family logs are judged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConditionMode {
    /// Residues modulo the family modulus must cover the required set.
    #[default]
    Coverage,
    /// Fixed residues mod 9 for 3-bursts of `(1,1)` errors (needs `q = 19 mod 36`).
    FixedAssignment,
}

/// Targets mod 9 for `1±x^e, 1+x^2e, 1-x^2e, 1±x^e±x^2e` as coefficient vectors.
const FIXED_311: [([i64; 3], u64); 8] = [
    ([1, 1, 0], 1),
    ([1, -1, 0], 2),
    ([1, 0, 1], 6),
    ([1, 0, -1], 3),
    ([1, 1, 1], 5),
    ([1, -1, 1], 7),
    ([1, 1, -1], 4),
    ([1, -1, -1], 8),
];

/// Evaluate `family` at `alpha` and judge the logs in coverage mode.
pub fn check_condition(f: &FieldCtx, alpha: FieldElem, family: Family) -> Result<ConditionReport> {
    check_condition_mode(f, alpha, family, ConditionMode::Coverage)
}

pub fn check_condition_mode(
    f: &FieldCtx,
    alpha: FieldElem,
    family: Family,
    mode: ConditionMode,
) -> Result<ConditionReport> {
    if alpha.is_zero() || !f.is_primitive(alpha)? {
        return Err(Error::param(format!("{} is not primitive", f.format(alpha))));
    }
    let order = f.order() - 1;
    let inv = mod_inverse(f.log_gen(alpha)?, order)
        .ok_or_else(|| Error::Internal("primitive element with non-unit log".into()))?;
    let polys = family.polys()?;
    let logs: Vec<Option<u64>> = polys
        .iter()
        .map(|p| {
            let v = f.eval_poly(p, alpha);
            f.log_gen(v)
                .ok()
                .map(|l| ((u128::from(l) * u128::from(inv)) % u128::from(order)) as u64)
        })
        .collect();
    let satisfied = if logs.iter().any(Option::is_none) {
        false
    } else {
        match mode {
            ConditionMode::Coverage => {
                let h = family.modulus()?;
                let residues: Vec<u64> = logs.iter().flatten().map(|l| l % h).collect();
                let distinct: BTreeSet<u64> = residues.iter().copied().collect();
                distinct.len() == residues.len() && distinct == family.required_residues()?
            }
            ConditionMode::FixedAssignment => {
                if family != Family::burst(3, 1, 1) || f.order() % 36 != 19 {
                    return Err(Error::Unsupported(format!(
                        "fixed residue assignment is defined for F(3,1,1) with q = 19 mod 36, not {family} at q={}",
                        f.order()
                    )));
                }
                let e = family.modulus()? as usize;
                FIXED_311.iter().all(|(c, target)| {
                    let poly = sparse_poly(&[(0, c[0]), (e, c[1]), (2 * e, c[2])]);
                    polys
                        .iter()
                        .position(|p| *p == poly)
                        .and_then(|i| logs[i])
                        .is_some_and(|l| l % 9 == *target)
                })
            }
        }
    };
    Ok(ConditionReport {
        q: f.order(),
        alpha,
        alpha_text: f.format(alpha),
        family,
        logs,
        satisfied,
    })
}

/// First primitive element, in element order, satisfying the family's condition.
pub fn find_primitive(f: &FieldCtx, family: Family) -> Result<Option<(FieldElem, ConditionReport)>> {
    find_primitive_mode(f, family, ConditionMode::Coverage)
}

pub fn find_primitive_mode(
    f: &FieldCtx,
    family: Family,
    mode: ConditionMode,
) -> Result<Option<(FieldElem, ConditionReport)>> {
    if !family.admissible(f.order())? {
        return Err(Error::param(format!(
            "q={} is not admissible for family {family}",
            f.order()
        )));
    }
    for alpha in f.nonzero() {
        if !f.is_primitive(alpha)? {
            continue;
        }
        let report = check_condition_mode(f, alpha, family, mode)?;
        if report.satisfied {
            return Ok(Some((alpha, report)));
        }
    }
    Ok(None)
}

fn field_sequence(f: &Arc<FieldCtx>, elems: &[FieldElem]) -> Result<SplittingSequence> {
    let group = AbelianGroup::field_additive(Arc::clone(f))?;
    let elems = elems
        .iter()
        .map(|&x| GroupElement::new(f.coeffs(x).into_iter().map(u64::from).collect()))
        .collect();
    SplittingSequence::new(group, elems)
}

fn verify_or_fail(spec: &BallSpec, s: SplittingSequence) -> Result<SplittingSequence> {
    if is_perfect_splitting(spec, &s)? {
        Ok(s)
    } else {
        Err(Error::Internal(format!(
            "constructed sequence does not split GF({}) by {spec}",
            s.group.order()
        )))
    }
}

/// `s_alpha = (1, alpha^e, .., alpha^((n-1)e))` with `n = (q-1)/e`, a perfect
/// splitting of GF(q) by `E°(n, b, k+, k-)`. With `verify` the result is
/// re-checked by enumeration before it is returned.
pub fn construct_salpha(
    f: &Arc<FieldCtx>,
    b: usize,
    k_plus: u32,
    k_minus: u32,
    alpha: FieldElem,
    verify: bool,
) -> Result<SplittingSequence> {
    let e = e_param(b, k_plus, k_minus)?;
    let q = f.order();
    if (q - 1) % e != 0 {
        return Err(Error::param(format!("e={e} does not divide q-1={}", q - 1)));
    }
    let n = ((q - 1) / e) as usize;
    if n + 1 < 2 * b {
        return Err(Error::Unsupported(format!(
            "n=(q-1)/e={n} is below 2b-1={}",
            2 * b - 1
        )));
    }
    let report = check_condition(f, alpha, Family::burst(b, k_plus, k_minus))?;
    if !report.satisfied {
        return Err(Error::ConditionUnsatisfied(Box::new(report)));
    }
    let step = f.pow(alpha, e as i64)?;
    let elems: Vec<FieldElem> = std::iter::successors(Some(FieldElem::ONE), |&x| Some(f.mul(x, step)))
        .take(n)
        .collect();
    let s = field_sequence(f, &elems)?;
    if verify {
        verify_or_fail(&BallSpec::cyclic(n, b, k_plus, k_minus)?, s)
    } else {
        Ok(s)
    }
}

/// `r_alpha = (1, alpha^3, alpha^12, alpha^15, ..)` of length `n = (q-1)/6`
/// for `q = 13 (mod 24)`, a perfect splitting of GF(q) by `E°(n, 2, 1, 1)`.
pub fn construct_ralpha(f: &Arc<FieldCtx>, alpha: FieldElem, verify: bool) -> Result<SplittingSequence> {
    let q = f.order();
    if q % 24 != 13 {
        return Err(Error::Unsupported(format!(
            "interleaved construction needs q = 13 (mod 24), got q={q}"
        )));
    }
    let m = (q - 1) / 12;
    let n = (2 * m) as usize;
    if n < 3 {
        return Err(Error::Unsupported(format!(
            "interleaved construction needs n=(q-1)/6 >= 3, got n={n}"
        )));
    }
    let report = check_condition(f, alpha, Family::Interleaved)?;
    if !report.satisfied {
        return Err(Error::ConditionUnsatisfied(Box::new(report)));
    }
    let mut elems = Vec::with_capacity(n);
    for l in 0..m as i64 {
        elems.push(f.pow(alpha, 12 * l)?);
        elems.push(f.pow(alpha, 12 * l + 3)?);
    }
    let s = field_sequence(f, &elems)?;
    if verify {
        verify_or_fail(&BallSpec::cyclic(n, 2, 1, 1)?, s)
    } else {
        Ok(s)
    }
}
