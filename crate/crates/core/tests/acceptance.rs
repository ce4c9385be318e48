//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p burstlattice --test acceptance`.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use burstlattice::constructions::{construct_ralpha, find_primitive, Family};
use burstlattice::gf::{prime_power, FieldCtx, FieldElem};
use burstlattice::search::{search_splitting, SearchOptions};
use burstlattice::tables::{reproduce_table2, scan_good_q_220, table_rows, Table2Row};
use burstlattice::{
    ball_size, code_from_splitting, construct_cyclic_2_10, construct_noncyclic_2_10,
    construct_salpha, enumerate_abelian_groups, is_perfect_splitting, is_splitting,
    prove_nonexistence, AbelianGroup, BallSpec, LatticeCode, SplittingSequence,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: burstlattice::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn criterion_1() -> Check {
    for n in 2..=200usize {
        let size = |cyclic, kp, km| lib(BallSpec::new(n, 2, kp, km, cyclic).and_then(|s| ball_size(&s)));
        let n64 = n as u64;
        ensure(size(false, 1, 0)? == 2 * n64, || format!("|E({n},2,1,0)|"))?;
        ensure(size(false, 1, 1)? == 6 * n64 - 3, || format!("|E({n},2,1,1)|"))?;
        ensure(size(false, 2, 0)? == 6 * n64 - 3, || format!("|E({n},2,2,0)|"))?;
        // cyclic windows of length 2 are distinct once n >= 3
        if n >= 3 {
            ensure(size(true, 1, 0)? == 2 * n64 + 1, || format!("|E°({n},2,1,0)|"))?;
            ensure(size(true, 1, 1)? == 6 * n64 + 1, || format!("|E°({n},2,1,1)|"))?;
            ensure(size(true, 2, 0)? == 6 * n64 + 1, || format!("|E°({n},2,2,0)|"))?;
        }
    }
    Ok("all six ball families match for n <= 200".into())
}

fn noncyclic_codes() -> Result<Vec<(BallSpec, SplittingSequence)>, String> {
    (2..=200)
        .map(|n| Ok((lib(BallSpec::noncyclic(n, 2, 1, 0))?, lib(construct_noncyclic_2_10(n))?)))
        .collect()
}

fn cyclic_codes() -> Result<Vec<(BallSpec, SplittingSequence)>, String> {
    (4..=199)
        .filter(|n| n % 6 == 1 || n % 6 == 4)
        .map(|n| Ok((lib(BallSpec::cyclic(n, 2, 1, 0))?, lib(construct_cyclic_2_10(n))?)))
        .collect()
}

fn field_codes() -> Result<Vec<(BallSpec, SplittingSequence)>, String> {
    (7..=1009u64)
        .filter(|&q| q % 2 == 1 && prime_power(q).is_some())
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&q| {
            let f = Arc::new(lib(FieldCtx::of_order(q))?);
            let (alpha, _) = lib(find_primitive(&f, Family::burst(2, 1, 0)))?
                .ok_or_else(|| format!("no primitive element for GF({q})"))?;
            let s = lib(construct_salpha(&f, 2, 1, 0, alpha, false))?;
            Ok((lib(BallSpec::cyclic(((q - 1) / 2) as usize, 2, 1, 0))?, s))
        })
        .collect()
}

fn all_perfect(codes: &[(BallSpec, SplittingSequence)]) -> Result<(), String> {
    codes.par_iter().try_for_each(|(spec, s)| {
        ensure(lib(is_perfect_splitting(spec, s))?, || {
            format!("{spec} over {} does not split", s.group)
        })
    })
}

fn criterion_2() -> Check {
    let codes = noncyclic_codes()?;
    all_perfect(&codes)?;
    let cases: BTreeSet<usize> = (2..=200usize).map(|n| n % 4).collect();
    Ok(format!("{} sequences verified, n mod 4 classes {cases:?}", codes.len()))
}

fn criterion_3() -> Check {
    let codes = cyclic_codes()?;
    all_perfect(&codes)?;
    Ok(format!("{} admissible n verified", codes.len()))
}

fn criterion_4() -> Check {
    let codes = field_codes()?;
    all_perfect(&codes)?;
    Ok(format!("{} odd prime powers 7..1009 verified", codes.len()))
}

fn criterion_5() -> Check {
    let expected: [(Table2Row, &[u64], Option<usize>); 4] = [
        (Table2Row::T44, &[19, 43, 127], Some(41)),
        (
            Table2Row::T48,
            &[37, 61, 109, 157, 181, 229, 277, 349, 373, 397, 421, 613, 661, 733, 829],
            None,
        ),
        (
            Table2Row::T45,
            &[25, 37, 49, 61, 97, 101, 121, 157, 169, 289, 361, 449, 601, 729],
            None,
        ),
        (
            Table2Row::T46,
            &[199, 271, 307, 343, 379, 487, 523, 631, 739, 811, 883, 919, 991],
            Some(2),
        ),
    ];
    let mut summary = Vec::new();
    for (row, bad, good) in expected {
        let r = lib(reproduce_table2(row, 1000))?;
        ensure(r.bad() == bad, || format!("{} bad list {:?}", row.name(), r.bad()))?;
        if let Some(g) = good {
            ensure(r.good().len() == g, || format!("{} good count {}", row.name(), r.good().len()))?;
        }
        summary.push(format!("{} {}/{}", row.name(), r.good().len(), r.bad().len()));
    }
    Ok(format!("good/bad {}", summary.join(", ")))
}

fn criterion_6() -> Check {
    let expected = [
        19, 79, 103, 163, 181, 199, 229, 349, 373, 397, 421, 487, 499, 541, 613, 619, 631, 643, 691,
        709, 733, 739, 751, 769, 787, 823, 853, 859, 907, 967, 997,
    ];
    let got = lib(scan_good_q_220(1000))?;
    ensure(got == expected, || format!("got {got:?}"))?;
    Ok(format!("{} values", got.len()))
}

fn criterion_7() -> Check {
    let mut count = 0;
    for t in [3, 4, 5] {
        for row in lib(table_rows(t))? {
            let spec = lib(row.ball())?;
            let s = lib(row.sequence())?;
            ensure(lib(is_perfect_splitting(&spec, &s))?, || {
                format!("table {t}: {spec} over Z{} ({})", row.order, s.format_elems())
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} published rows verified"))
}

fn criterion_8() -> Check {
    let opts = SearchOptions::default();
    let mut done = Vec::new();
    for n in 5..=7usize {
        for cyclic in [true, false] {
            let spec = lib(BallSpec::new(n, 2, 2, 0, cyclic))?;
            let order = if cyclic { 6 * n as u64 + 1 } else { 6 * n as u64 - 3 };
            ensure(lib(prove_nonexistence(&spec, order, &opts))?, || {
                format!("{spec} splits some group of order {order}")
            })?;
            done.push(order);
        }
    }
    Ok(format!("no group splits at orders {done:?}"))
}

fn round_trip(code: &LatticeCode, seed: u64) -> Result<u64, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = code.message_positions().len();
    let mut words = vec![vec![0i64; code.n()]];
    for _ in 0..100 {
        let msg: Vec<i64> = (0..k).map(|_| rng.gen_range(-1000..=1000)).collect();
        words.push(lib(code.encode(&msg))?);
    }
    let ball: Vec<_> = code.ball_vectors().collect();
    let mut checked = 0;
    for x in &words {
        for e in &ball {
            let y: Vec<i64> = x.iter().zip(e.entries()).map(|(a, b)| a + b).collect();
            let (c, got) = lib(code.decode(&y))?;
            ensure(&c == x && &got == e, || {
                format!("{} over {}: y={y:?} decoded wrongly", code.spec(), code.splitting().group)
            })?;
            checked += 1;
        }
    }
    Ok(checked)
}

fn criterion_9() -> Check {
    let mut codes = noncyclic_codes()?;
    codes.extend(cyclic_codes()?);
    codes.extend(field_codes()?);
    codes.retain(|(_, s)| s.group.order() <= 1009);
    let total: u64 = codes
        .par_iter()
        .enumerate()
        .map(|(i, (spec, s))| {
            let code = lib(code_from_splitting(spec, s))?;
            round_trip(&code, i as u64)
        })
        .collect::<Result<Vec<_>, String>>()?
        .into_iter()
        .sum();
    Ok(format!("{} codes, {total} decodes, 0 failures", codes.len()))
}

/// Known splittings used as seeds for the invariance properties.
fn splitting_pool() -> Result<Vec<(BallSpec, SplittingSequence)>, String> {
    let mut pool = Vec::new();
    for t in [3, 4, 5] {
        for row in lib(table_rows(t))? {
            pool.push((lib(row.ball())?, lib(row.sequence())?));
        }
    }
    pool.extend(noncyclic_codes()?.into_iter().take(20));
    pool.extend(cyclic_codes()?.into_iter().take(6));
    for q in [7u64, 9, 25, 27, 49, 81] {
        let f = Arc::new(lib(FieldCtx::of_order(q))?);
        let (alpha, _) = lib(find_primitive(&f, Family::burst(2, 1, 0)))?.ok_or("no alpha")?;
        pool.push((
            lib(BallSpec::cyclic(((q - 1) / 2) as usize, 2, 1, 0))?,
            lib(construct_salpha(&f, 2, 1, 0, alpha, true))?,
        ));
    }
    for q in [31u64, 67, 79] {
        let f = Arc::new(lib(FieldCtx::of_order(q))?);
        if let Some((alpha, _)) = lib(find_primitive(&f, Family::burst(2, 1, 1)))? {
            pool.push((
                lib(BallSpec::cyclic(((q - 1) / 6) as usize, 2, 1, 1))?,
                lib(construct_salpha(&f, 2, 1, 1, alpha, true))?,
            ));
        }
    }
    let f = Arc::new(lib(FieldCtx::of_order(853))?);
    if let Some((alpha, _)) = lib(find_primitive(&f, Family::Interleaved))? {
        let s = lib(construct_ralpha(&f, alpha, true))?;
        pool.push((lib(BallSpec::cyclic(s.len(), 2, 1, 1))?, s));
    }
    Ok(pool)
}

/// Apply a group automorphism: per-component unit scaling, or
/// multiplication by a nonzero field element for field groups.
fn apply_automorphism(s: &SplittingSequence, pick: u64) -> SplittingSequence {
    let g = &s.group;
    let codes = s.codes();
    let mapped: Vec<u64> = match g.field() {
        Some(f) => {
            let c = FieldElem((1 + pick % (f.order() - 1)) as u32);
            codes.iter().map(|&x| u64::from(f.mul(FieldElem(x as u32), c).0)).collect()
        }
        None => {
            let units: Vec<u64> = g
                .moduli()
                .iter()
                .enumerate()
                .map(|(i, &m)| {
                    let us: Vec<u64> = (1..m.max(2)).filter(|&u| gcd(u, m) == 1).collect();
                    us[((pick >> (8 * i)) % us.len() as u64) as usize]
                })
                .collect();
            codes
                .iter()
                .map(|&x| {
                    let el = g.decode(x);
                    let scaled: Vec<i64> = el
                        .coords
                        .iter()
                        .zip(&units)
                        .map(|(&c, &u)| (c * u) as i64)
                        .collect();
                    g.encode(&g.element(&scaled).expect("in range"))
                })
                .collect()
        }
    };
    SplittingSequence::from_codes(g.clone(), &mapped).expect("valid codes")
}

/// Rotation for cyclic balls, reversal for non-cyclic ones.
fn apply_symmetry(spec: &BallSpec, s: &SplittingSequence, shift: usize) -> SplittingSequence {
    let mut elems = s.elems.clone();
    if spec.cyclic {
        let len = elems.len();
        elems.rotate_left(shift % len);
    } else if shift % 2 == 1 {
        elems.reverse();
    }
    SplittingSequence::new(s.group.clone(), elems).expect("same group")
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn run_prop<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn phi(mut n: u64) -> u64 {
    let mut out = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

fn pruning_instances() -> Result<Vec<(BallSpec, AbelianGroup)>, String> {
    let mut out = Vec::new();
    for n in 2..=31usize {
        for b in 2..=n {
            for kp in 0..=4u32 {
                for km in 0..=4u32 {
                    for cyclic in [false, true] {
                        let Ok(spec) = BallSpec::new(n, b, kp, km, cyclic) else { continue };
                        if burstlattice::e_param(b, kp, km).map_or(true, |e| e > 31) {
                            continue;
                        }
                        let size = lib(ball_size(&spec))?;
                        if size > 31 {
                            continue;
                        }
                        for g in lib(enumerate_abelian_groups(size))? {
                            out.push((spec, g));
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn criterion_10() -> Check {
    // invariance of the splitting predicate under automorphisms and ball symmetries
    let pool = splitting_pool()?;
    let pool_len = pool.len();
    run_prop(400, (0..pool_len, any::<u64>(), 0usize..64, any::<bool>()), |(i, pick, shift, scramble)| {
        let (spec, s) = &pool[i];
        let mut base = s.clone();
        if scramble {
            // a nearby sequence that usually does not split
            let mut codes = base.codes();
            let j = (pick as usize) % codes.len();
            codes[j] = (codes[j] + 1 + pick % 5) % base.group.order();
            base = SplittingSequence::from_codes(base.group.clone(), &codes).unwrap();
        }
        let before = is_splitting(spec, &base).unwrap();
        let after = is_splitting(spec, &apply_symmetry(spec, &apply_automorphism(&base, pick), shift)).unwrap();
        prop_assert_eq!(before, after);
        if !scramble {
            prop_assert!(before);
        }
        Ok(())
    })?;

    // discrete logs turn products into sums
    let qs: Vec<u64> = (3..=4096).filter(|&q| prime_power(q).is_some()).collect();
    let fields: Vec<FieldCtx> = qs
        .iter()
        .step_by(7)
        .map(|&q| FieldCtx::of_order(q).unwrap())
        .collect();
    run_prop(2000, (0..fields.len(), any::<u32>(), any::<u32>(), any::<u32>()), |(i, a, b, c)| {
        let f = &fields[i];
        let q1 = f.order() - 1;
        let a = FieldElem(1 + a % q1 as u32);
        let b = FieldElem(1 + b % q1 as u32);
        let base = f.gen_pow(u64::from(c) % q1);
        let la = f.log_gen(a).unwrap();
        let lb = f.log_gen(b).unwrap();
        prop_assert_eq!(f.log_gen(f.mul(a, b)).unwrap(), (la + lb) % q1);
        if f.is_primitive(base).unwrap() {
            let (da, db) = (f.dlog(base, a).unwrap(), f.dlog(base, b).unwrap());
            prop_assert_eq!(f.dlog(base, f.mul(a, b)).unwrap(), (da + db) % q1);
            prop_assert_eq!(f.pow(base, da as i64).unwrap(), a);
        }
        Ok(())
    })?;

    // primitive element counts
    let mut counted = 0;
    for q in (2..=1009u64).filter(|&q| prime_power(q).is_some()) {
        let f = lib(FieldCtx::of_order(q))?;
        let mut prim = 0;
        for x in f.nonzero() {
            if lib(f.is_primitive(x))? {
                prim += 1;
            }
        }
        ensure(prim == phi(q - 1), || format!("GF({q}) has {prim} primitive elements"))?;
        counted += 1;
    }

    // pruning never changes the search result
    let instances = pruning_instances()?;
    let variants = [
        SearchOptions::default(),
        SearchOptions {
            prune_rotation: false,
            ..SearchOptions::default()
        },
        SearchOptions {
            prune_orbit: false,
            ..SearchOptions::default()
        },
    ];
    instances.par_iter().try_for_each(|(spec, g)| {
        let reference = lib(search_splitting(spec, g, &SearchOptions::unpruned()))?.outcome;
        for opts in &variants {
            let got = lib(search_splitting(spec, g, opts))?.outcome;
            ensure(got == reference, || format!("{spec} over {g}: pruning changed the outcome"))?;
        }
        Ok::<(), String>(())
    })?;

    Ok(format!(
        "invariance over {pool_len} seeds, dlog over {} fields, phi counts for {counted} fields, pruning on {} instances",
        fields.len(),
        instances.len()
    ))
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, Duration, fn() -> Check);
    let criteria: [Criterion; 10] = [
        (1, "ball sizes", Duration::from_secs(10), criterion_1),
        (2, "non-cyclic (2,1,0) construction", Duration::from_secs(30), criterion_2),
        (3, "cyclic (2,1,0) construction", Duration::from_secs(30), criterion_3),
        (4, "field construction for (2,1,0)", Duration::from_secs(300), criterion_4),
        (5, "bad-field table", Duration::from_secs(600), criterion_5),
        (6, "good q for (2,2,0)", Duration::from_secs(120), criterion_6),
        (7, "published sequence tables", Duration::from_secs(5), criterion_7),
        (8, "nonexistence for (2,2,0), 5 <= n <= 7", Duration::from_secs(1800), criterion_8),
        (9, "codec round trip", Duration::from_secs(600), criterion_9),
        (10, "property suites", Duration::from_secs(300), criterion_10),
    ];
    let mut failed = 0;
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let line = match result {
            Ok(detail) if elapsed <= limit => {
                format!("PASS criterion {id:>2} {name}: {detail} [{elapsed:.2?} <= {limit:?}]")
            }
            Ok(detail) => {
                failed += 1;
                format!("FAIL criterion {id:>2} {name}: {detail} but took {elapsed:.2?} > {limit:?}")
            }
            Err(why) => {
                failed += 1;
                format!("FAIL criterion {id:>2} {name}: {why} [{elapsed:.2?}]")
            }
        };
        println!("{line}");
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
