use burstlattice::search::{search_all_groups, search_splitting, Outcome, SearchOptions};
use burstlattice::tables::{reproduce_tables345, table_rows};
use burstlattice::{
    construct_cyclic_2_10, construct_noncyclic_2_10, is_perfect_splitting, prove_nonexistence,
    AbelianGroup, BallSpec,
};

#[test]
fn search_agrees_with_constructions() {
    let opts = SearchOptions::default();
    for n in 2..=15 {
        let spec = BallSpec::noncyclic(n, 2, 1, 0).unwrap();
        assert!(construct_noncyclic_2_10(n).is_ok());
        let r = search_splitting(&spec, &AbelianGroup::cyclic(2 * n as u64).unwrap(), &opts).unwrap();
        assert!(r.found().is_some(), "{spec}");
    }
    for n in [4, 7, 10, 13, 15] {
        let spec = BallSpec::cyclic(n, 2, 1, 0).unwrap();
        let order = 2 * n as u64 + 1;
        if construct_cyclic_2_10(n).is_ok() {
            let r = search_splitting(&spec, &AbelianGroup::cyclic(order).unwrap(), &opts).unwrap();
            assert!(r.found().is_some(), "{spec}");
        }
    }
}

#[test]
fn lexicographic_minima_are_the_published_rows() {
    // the published sequences happen to be the smallest ones under element order
    let opts = SearchOptions::default();
    for t in [3, 4, 5] {
        for row in table_rows(t).unwrap().iter().filter(|r| r.spec.0 <= 9) {
            let spec = row.ball().unwrap();
            let s = row.sequence().unwrap();
            let r = search_splitting(&spec, &s.group, &opts).unwrap();
            assert_eq!(r.outcome, Outcome::Found(s), "table {t} {spec}");
        }
    }
}

#[test]
fn searched_rows_verify() {
    let opts = SearchOptions::default();
    let checks = reproduce_tables345(&[3], Some(&opts)).unwrap();
    assert!(checks.iter().all(|c| c.verified && c.searched.is_some()));
}

#[test]
fn deterministic_reports() {
    let spec = BallSpec::noncyclic(6, 2, 1, 1).unwrap();
    let opts = SearchOptions::default();
    let a = search_all_groups(&spec, 33, &opts).unwrap();
    let b = search_all_groups(&spec, 33, &opts).unwrap();
    let par = search_all_groups(&spec, 33, &SearchOptions { jobs: 3, ..opts }).unwrap();
    for ((x, y), z) in a.iter().zip(&b).zip(&par) {
        assert_eq!(x.outcome, y.outcome);
        assert_eq!(x.nodes_visited, y.nodes_visited);
        assert_eq!(x.outcome, z.outcome);
        if let Some(s) = x.found() {
            assert!(is_perfect_splitting(&spec, s).unwrap());
        }
    }
}

/// Nonexistence for 8 <= n <= 11; minutes to hours. Run with `--ignored`.
#[test]
#[ignore]
fn nonexistence_for_larger_n() {
    let opts = SearchOptions {
        jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
        ..SearchOptions::default()
    };
    for n in 8..=11usize {
        for cyclic in [true, false] {
            let spec = BallSpec::new(n, 2, 2, 0, cyclic).unwrap();
            let order = if cyclic { 6 * n as u64 + 1 } else { 6 * n as u64 - 3 };
            assert!(prove_nonexistence(&spec, order, &opts).unwrap(), "{spec}");
        }
    }
}

/// Independent search for every published row, including n up to 14.
#[test]
#[ignore]
fn search_confirms_every_published_row() {
    let opts = SearchOptions {
        jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
        ..SearchOptions::default()
    };
    let checks = reproduce_tables345(&[3, 4, 5], Some(&opts)).unwrap();
    assert_eq!(checks.len(), 26);
}
