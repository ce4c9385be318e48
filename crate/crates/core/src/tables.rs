//! Reproduction of the published computer-search tables.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::constructions::{find_primitive_mode, ConditionMode, Family};
use crate::error::{Error, Result};
use crate::errorball::{e_param, BallSpec};
use crate::gf::{irreducibles, prime_power, FieldCtx};
use crate::groups::{is_perfect_splitting, AbelianGroup, SplittingSequence};
use crate::search::{search_splitting, SearchOptions};

pub const MAX_SCAN_Q: u64 = 1 << 20;

/// Rows of the bad-field table, named by the condition they test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Table2Row {
    /// 2-bursts of `(1,1)` errors, `q = 7 mod 12`.
    T44,
    /// Interleaved family, `q = 13 mod 24`.
    T48,
    /// 3-bursts of `(1,0)` errors, `q = 1 mod 4`.
    T45,
    /// 3-bursts of `(1,1)` errors, `q = 19 mod 36`.
    T46,
}

impl Table2Row {
    pub const ALL: [Table2Row; 4] = [Table2Row::T44, Table2Row::T48, Table2Row::T45, Table2Row::T46];

    pub fn family(self) -> Family {
        match self {
            Table2Row::T44 => Family::burst(2, 1, 1),
            Table2Row::T48 => Family::Interleaved,
            Table2Row::T45 => Family::burst(3, 1, 0),
            Table2Row::T46 => Family::burst(3, 1, 1),
        }
    }

    /// `(m, r)` with admissible `q = r mod m`.
    pub fn residue_class(self) -> (u64, u64) {
        match self {
            Table2Row::T44 => (12, 7),
            Table2Row::T48 => (24, 13),
            Table2Row::T45 => (4, 1),
            Table2Row::T46 => (36, 19),
        }
    }

    /// Burst parameters `(b, k+, k-)` whose `e(2b-1)+1` starts the scan.
    fn burst(self) -> (usize, u32, u32) {
        match self {
            Table2Row::T44 | Table2Row::T48 => (2, 1, 1),
            Table2Row::T45 => (3, 1, 0),
            Table2Row::T46 => (3, 1, 1),
        }
    }

    pub fn q_start(self) -> u64 {
        let (b, kp, km) = self.burst();
        e_param(b, kp, km).expect("fixed parameters") * (2 * b as u64 - 1) + 1
    }

    pub fn mode(self) -> ConditionMode {
        ConditionMode::Coverage
    }

    pub fn name(self) -> &'static str {
        match self {
            Table2Row::T44 => "T44",
            Table2Row::T48 => "T48",
            Table2Row::T45 => "T45",
            Table2Row::T46 => "T46",
        }
    }
}

impl std::str::FromStr for Table2Row {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Table2Row::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown table row {s:?}")))
    }
}

/// Verdict for one field size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldVerdict {
    pub q: u64,
    /// First suitable primitive element, formatted.
    pub alpha: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table2Result {
    pub row: Table2Row,
    pub q_max: u64,
    pub verdicts: Vec<FieldVerdict>,
}

impl Table2Result {
    pub fn good(&self) -> Vec<u64> {
        self.verdicts.iter().filter(|v| v.alpha.is_some()).map(|v| v.q).collect()
    }

    pub fn bad(&self) -> Vec<u64> {
        self.verdicts.iter().filter(|v| v.alpha.is_none()).map(|v| v.q).collect()
    }

    pub fn report(&self) -> String {
        let (m, r) = self.row.residue_class();
        let mut out = String::new();
        let _ = writeln!(
            out,
            "table2 row={} family={} class={r}mod{m} qmin={} qmax={}",
            self.row.name(),
            self.row.family(),
            self.row.q_start(),
            self.q_max
        );
        for v in &self.verdicts {
            match &v.alpha {
                Some(a) => writeln!(out, "q={} good alpha={a}", v.q),
                None => writeln!(out, "q={} bad", v.q),
            }
            .expect("writing to a string");
        }
        let _ = writeln!(
            out,
            "summary row={} good={} bad={} badlist={}",
            self.row.name(),
            self.good().len(),
            self.bad().len(),
            join(&self.bad())
        );
        out
    }
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

fn check_q_max(q_max: u64) -> Result<()> {
    if q_max > MAX_SCAN_Q {
        return Err(Error::param(format!("q_max {q_max} exceeds {MAX_SCAN_Q}")));
    }
    Ok(())
}

fn prime_powers_in(lo: u64, hi: u64, m: u64, r: u64) -> Vec<u64> {
    (lo..=hi)
        .filter(|q| q % m == r && prime_power(*q).is_some())
        .collect()
}

fn verdict(f: &FieldCtx, family: Family, mode: ConditionMode) -> Result<FieldVerdict> {
    Ok(FieldVerdict {
        q: f.order(),
        alpha: find_primitive_mode(f, family, mode)?.map(|(a, _)| f.format(a)),
    })
}

/// Classify every admissible prime power in `[q_start, q_max]` as good (a
/// suitable primitive element exists) or bad.
pub fn reproduce_table2(row: Table2Row, q_max: u64) -> Result<Table2Result> {
    check_q_max(q_max)?;
    let (m, r) = row.residue_class();
    let qs = prime_powers_in(row.q_start(), q_max, m, r);
    let verdicts = qs
        .par_iter()
        .map(|&q| verdict(&FieldCtx::of_order(q)?, row.family(), row.mode()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Table2Result {
        row,
        q_max,
        verdicts,
    })
}

/// A field size whose good/bad verdict depends on the chosen modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulusDisagreement {
    pub q: u64,
    pub modulus: Vec<u32>,
    pub default_good: bool,
    pub alternate_good: bool,
}

/// Recompute the verdict of every proper prime power in the row's range
/// under the second-smallest irreducible modulus and list disagreements.
pub fn cross_check_moduli(row: Table2Row, q_max: u64) -> Result<Vec<ModulusDisagreement>> {
    check_q_max(q_max)?;
    let (m, r) = row.residue_class();
    let mut out = Vec::new();
    for q in prime_powers_in(row.q_start(), q_max, m, r) {
        let (p, deg) = prime_power(q).expect("filtered");
        if deg < 2 {
            continue;
        }
        let default = verdict(&FieldCtx::of_order(q)?, row.family(), row.mode())?;
        let modulus = irreducibles(p as u32, deg)
            .nth(1)
            .ok_or_else(|| Error::Internal(format!("fewer than two irreducibles for q={q}")))?;
        let alt = FieldCtx::with_modulus(p, deg, &modulus)?;
        let alternate = verdict(&alt, row.family(), row.mode())?;
        if default.alpha.is_some() != alternate.alpha.is_some() {
            out.push(ModulusDisagreement {
                q,
                modulus,
                default_good: default.alpha.is_some(),
                alternate_good: alternate.alpha.is_some(),
            });
        }
    }
    Ok(out)
}

/// Field sizes `q = 1 mod 6`, from 19 up to `q_max`, admitting a primitive
/// element for 2-bursts of `(2,0)` errors.
pub fn scan_good_q_220(q_max: u64) -> Result<Vec<u64>> {
    check_q_max(q_max)?;
    let lo = e_param(2, 2, 0)? * 3 + 1;
    let qs = prime_powers_in(lo, q_max, 6, 1);
    let verdicts = qs
        .par_iter()
        .map(|&q| verdict(&FieldCtx::of_order(q)?, Family::TwoTwoZero, ConditionMode::Coverage))
        .collect::<Result<Vec<_>>>()?;
    Ok(verdicts
        .into_iter()
        .filter(|v| v.alpha.is_some())
        .map(|v| v.q)
        .collect())
}

pub fn goodq220_report(q_max: u64) -> Result<String> {
    let good = scan_good_q_220(q_max)?;
    let mut out = format!("goodq220 qmax={q_max}\n");
    for q in &good {
        let _ = writeln!(out, "q={q} good");
    }
    let _ = writeln!(out, "summary good={} list={}", good.len(), join(&good));
    Ok(out)
}

/// One published `(ball, group, sequence)` row.
#[derive(Debug, Clone, Copy)]
pub struct TableRow {
    pub table: u8,
    pub spec: (usize, usize, u32, u32, bool),
    pub order: u64,
    pub seq: &'static [i64],
}

impl TableRow {
    pub fn ball(&self) -> Result<BallSpec> {
        let (n, b, kp, km, cyc) = self.spec;
        BallSpec::new(n, b, kp, km, cyc)
    }

    pub fn sequence(&self) -> Result<SplittingSequence> {
        SplittingSequence::from_ints(AbelianGroup::cyclic(self.order)?, self.seq)
    }
}

const fn row(table: u8, n: usize, kp: u32, km: u32, cyclic: bool, order: u64, seq: &'static [i64]) -> TableRow {
    TableRow {
        table,
        spec: (n, 2, kp, km, cyclic),
        order,
        seq,
    }
}

pub const TABLE3: &[TableRow] = &[
    row(3, 3, 2, 0, true, 19, &[1, 7, 11]),
    row(3, 4, 2, 0, true, 25, &[1, 5, 4, 20]),
    row(3, 3, 2, 0, false, 15, &[1, 5, 4]),
    row(3, 4, 2, 0, false, 21, &[1, 5, 20, 18]),
];

pub const TABLE4: &[TableRow] = &[
    row(4, 4, 1, 1, true, 25, &[1, 5, 2, 10]),
    row(4, 5, 1, 1, true, 31, &[1, 4, 15, 2, 8]),
    row(4, 6, 1, 1, true, 37, &[1, 8, 10, 6, 11, 14]),
    row(4, 8, 1, 1, true, 49, &[1, 4, 21, 9, 2, 18, 8, 14]),
    row(4, 9, 1, 1, true, 55, &[1, 3, 12, 25, 6, 20, 27, 17, 22]),
    row(4, 10, 1, 1, true, 61, &[1, 3, 11, 24, 9, 25, 30, 12, 29, 22]),
    row(4, 11, 1, 1, true, 67, &[1, 3, 9, 27, 14, 25, 8, 24, 5, 15, 22]),
    row(4, 12, 1, 1, true, 73, &[1, 3, 8, 27, 33, 12, 30, 20, 29, 7, 32, 15]),
    row(4, 13, 1, 1, true, 79, &[1, 3, 8, 14, 37, 17, 10, 26, 38, 9, 39, 21, 34]),
    row(4, 14, 1, 1, true, 85, &[1, 3, 8, 14, 31, 7, 41, 9, 21, 39, 10, 23, 42, 27]),
];

pub const TABLE5: &[TableRow] = &[
    row(5, 3, 1, 1, false, 15, &[1, 5, 2]),
    row(5, 4, 1, 1, false, 21, &[1, 4, 10, 2]),
    row(5, 5, 1, 1, false, 27, &[1, 4, 10, 2, 9]),
    row(5, 6, 1, 1, false, 33, &[1, 14, 10, 2, 5, 11]),
    row(5, 7, 1, 1, false, 39, &[1, 3, 12, 19, 6, 16, 5]),
    row(5, 8, 1, 1, false, 45, &[1, 3, 12, 20, 14, 21, 5, 22]),
    row(5, 9, 1, 1, false, 51, &[1, 3, 9, 16, 5, 24, 10, 23, 8]),
    row(5, 10, 1, 1, false, 57, &[1, 3, 8, 25, 13, 28, 6, 20, 27, 9]),
    row(5, 11, 1, 1, false, 63, &[1, 3, 8, 29, 7, 25, 15, 28, 16, 30, 24]),
    row(5, 12, 1, 1, false, 69, &[1, 3, 8, 17, 32, 13, 29, 7, 28, 18, 12, 26]),
    row(5, 13, 1, 1, false, 75, &[1, 3, 8, 14, 32, 19, 31, 16, 26, 9, 30, 7, 27]),
    row(5, 14, 1, 1, false, 81, &[1, 3, 8, 14, 30, 13, 40, 21, 12, 35, 10, 39, 24, 31]),
];

pub fn table_rows(table: u8) -> Result<&'static [TableRow]> {
    match table {
        3 => Ok(TABLE3),
        4 => Ok(TABLE4),
        5 => Ok(TABLE5),
        _ => Err(Error::param(format!("no sequence table {table}"))),
    }
}

/// Result of checking one published row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowCheck {
    pub table: u8,
    pub spec: BallSpec,
    pub group: String,
    pub seq: String,
    pub verified: bool,
    /// Sequence found by independent search, when requested.
    pub searched: Option<String>,
}

impl RowCheck {
    pub fn line(&self) -> String {
        let mut s = format!(
            "table{} {} group={} seq={} verified={}",
            self.table, self.spec, self.group, self.seq, self.verified
        );
        if let Some(found) = &self.searched {
            let _ = write!(s, " search={found}");
        }
        s
    }
}

/// Verify every row of the given tables; with `search`, also find a
/// splitting for each row's parameters independently. Any failing row is an
/// error naming it.
pub fn reproduce_tables345(tables: &[u8], search: Option<&SearchOptions>) -> Result<Vec<RowCheck>> {
    let mut out = Vec::new();
    for &t in tables {
        for r in table_rows(t)? {
            let spec = r.ball()?;
            let s = r.sequence()?;
            let verified = is_perfect_splitting(&spec, &s)?;
            let label = format!("table {t} row {spec} over Z{} ({})", r.order, s.format_elems());
            if !verified {
                return Err(Error::Internal(format!("{label} does not verify")));
            }
            let searched = match search {
                Some(opts) => {
                    let report = search_splitting(&spec, &s.group, opts)?;
                    match report.found() {
                        Some(found) => Some(found.format_elems()),
                        None => {
                            return Err(Error::Internal(format!("{label}: search found nothing")))
                        }
                    }
                }
                None => None,
            };
            out.push(RowCheck {
                table: t,
                spec,
                group: s.group.to_string(),
                seq: s.format_elems(),
                verified,
                searched,
            });
        }
    }
    Ok(out)
}

pub fn tables345_report(table: u8, search: Option<&SearchOptions>) -> Result<String> {
    let rows = reproduce_tables345(&[table], search)?;
    let mut out = format!("table{table} rows={}\n", rows.len());
    for r in &rows {
        out.push_str(&r.line());
        out.push('\n');
    }
    Ok(out)
}
