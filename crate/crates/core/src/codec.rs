//! Lattice codes from perfect splittings: membership, a systematic encoder,
//! syndrome decoding and a burst channel.
//!
//! The code is the kernel of `x -> sum x_i s_i`. Because the splitting is
//! perfect, every syndrome has exactly one ball vector, so decoding is a table
//! lookup.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::errorball::{enumerate_sparse, BallSpec, ErrorVector, SparseVector};
use crate::groups::{is_perfect_splitting, GroupElement, SplittingSequence};

/// Budget on the number of coefficient tuples scanned to build the encoder.
const ENCODER_BUDGET: u64 = 1 << 24;

#[derive(Debug, Clone)]
pub struct LatticeCode {
    spec: BallSpec,
    splitting: SplittingSequence,
    /// Component coordinates of each `s_i`, flattened `n x rank`.
    components: Vec<i64>,
    /// Ball vector per syndrome code.
    syndromes: Vec<SparseVector>,
    /// Ball vectors in canonical order, zero first.
    ball: Vec<SparseVector>,
    info_positions: Vec<usize>,
    /// Canonical info-coordinate values per group code, each in `[0, ord(s_i))`.
    solutions: Vec<Vec<u64>>,
}

/// Where and how a burst hits a codeword.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BurstChoice {
    /// Pattern of length `b` starting at coordinate `start`.
    Explicit { start: usize, pattern: Vec<i64> },
    /// Uniform over the ball, excluding zero unless `include_zero`.
    Random { include_zero: bool },
}

/// Aggregate round-trip statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimulationReport {
    pub trials: u64,
    pub successes: u64,
    pub failures: u64,
}

impl LatticeCode {
    pub fn new(spec: BallSpec, splitting: SplittingSequence) -> Result<Self> {
        code_from_splitting(&spec, &splitting)
    }

    pub fn spec(&self) -> &BallSpec {
        &self.spec
    }

    pub fn splitting(&self) -> &SplittingSequence {
        &self.splitting
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    /// Coordinates whose values the encoder solves for.
    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    /// Coordinates carrying the message, in increasing order.
    pub fn message_positions(&self) -> Vec<usize> {
        (0..self.n()).filter(|i| !self.info_positions.contains(i)).collect()
    }

    pub fn table_len(&self) -> usize {
        self.syndromes.len()
    }

    /// Ball vector with the given syndrome.
    pub fn lookup(&self, syndrome: &GroupElement) -> Result<ErrorVector> {
        let g = &self.splitting.group;
        g.check(syndrome)?;
        Ok(ErrorVector::from_sparse(
            self.n(),
            &self.syndromes[g.encode(syndrome) as usize],
        ))
    }

    fn check_len(&self, x: &[i64]) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::param(format!(
                "vector has length {}, code length is {}",
                x.len(),
                self.n()
            )));
        }
        Ok(())
    }

    fn syndrome_code(&self, x: &[i64]) -> u64 {
        let g = &self.splitting.group;
        let moduli = g.moduli();
        let r = moduli.len();
        let mut acc = [0i128; 64];
        let acc = &mut acc[..r];
        for (&xi, comps) in x.iter().zip(self.components.chunks_exact(r)) {
            for (a, &c) in acc.iter_mut().zip(comps) {
                *a += i128::from(xi) * i128::from(c);
            }
        }
        let residues = acc
            .iter()
            .zip(moduli)
            .map(|(&a, &m)| a.rem_euclid(i128::from(m)) as u64)
            .collect();
        g.encode(&GroupElement::new(residues))
    }

    pub fn syndrome(&self, x: &[i64]) -> Result<GroupElement> {
        self.check_len(x)?;
        Ok(self.splitting.group.decode(self.syndrome_code(x)))
    }

    pub fn is_codeword(&self, x: &[i64]) -> Result<bool> {
        self.check_len(x)?;
        Ok(self.syndrome_code(x) == 0)
    }

    /// Place the message on the non-info coordinates and solve the info
    /// coordinates so the syndrome vanishes. Message integers are kept as is.
    pub fn encode(&self, message: &[i64]) -> Result<Vec<i64>> {
        let free = self.message_positions();
        if message.len() != free.len() {
            return Err(Error::param(format!(
                "message has length {}, expected {}",
                message.len(),
                free.len()
            )));
        }
        let g = &self.splitting.group;
        let mut x = vec![0i64; self.n()];
        for (&i, &m) in free.iter().zip(message) {
            x[i] = m;
        }
        let target = g.neg_code(self.syndrome_code(&x));
        for (&i, &c) in self.info_positions.iter().zip(&self.solutions[target as usize]) {
            x[i] = c as i64;
        }
        if self.syndrome_code(&x) != 0 {
            return Err(Error::Internal("encoder produced a non-codeword".into()));
        }
        Ok(x)
    }

    /// Message coordinates of a vector, the inverse of `encode` on codewords.
    pub fn extract_message(&self, x: &[i64]) -> Result<Vec<i64>> {
        self.check_len(x)?;
        Ok(self.message_positions().iter().map(|&i| x[i]).collect())
    }

    /// Split `y` into the nearest codeword and the ball vector that was added.
    pub fn decode(&self, y: &[i64]) -> Result<(Vec<i64>, ErrorVector)> {
        self.check_len(y)?;
        let e = ErrorVector::from_sparse(self.n(), &self.syndromes[self.syndrome_code(y) as usize]);
        let c = y.iter().zip(e.entries()).map(|(a, b)| a - b).collect();
        Ok((c, e))
    }

    /// Draw a ball vector uniformly, excluding zero unless asked.
    pub fn random_error<R: Rng + ?Sized>(&self, rng: &mut R, include_zero: bool) -> ErrorVector {
        let lo = usize::from(!include_zero).min(self.ball.len() - 1);
        let idx = rng.gen_range(lo..self.ball.len());
        ErrorVector::from_sparse(self.n(), &self.ball[idx])
    }

    /// Every vector of the ball, zero first.
    pub fn ball_vectors(&self) -> impl Iterator<Item = ErrorVector> + '_ {
        self.ball.iter().map(|v| ErrorVector::from_sparse(self.n(), v))
    }

    /// Decode `x + e` for random codewords and bursts and count exact recoveries.
    pub fn simulate(&self, trials: u64, seed: u64, magnitude: i64) -> Result<SimulationReport> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = self.message_positions().len();
        let mut successes = 0;
        for _ in 0..trials {
            let msg: Vec<i64> = (0..k).map(|_| rng.gen_range(-magnitude..=magnitude)).collect();
            let x = self.encode(&msg)?;
            let e = self.random_error(&mut rng, false);
            let y: Vec<i64> = x.iter().zip(e.entries()).map(|(a, b)| a + b).collect();
            let (c, got) = self.decode(&y)?;
            if c == x && got == e {
                successes += 1;
            }
        }
        Ok(SimulationReport {
            trials,
            successes,
            failures: trials - successes,
        })
    }
}

/// Package a perfect splitting as a code.
pub fn code_from_splitting(spec: &BallSpec, s: &SplittingSequence) -> Result<LatticeCode> {
    if s.len() != spec.n {
        return Err(Error::param(format!(
            "sequence has length {}, ball has n={}",
            s.len(),
            spec.n
        )));
    }
    if !is_perfect_splitting(spec, s)? {
        return Err(Error::Precondition(format!(
            "({}) is not a perfect splitting of {} by {spec}",
            s.format_elems(),
            s.group
        )));
    }
    let g = &s.group;
    let codes = s.codes();
    if g.rank() > 64 {
        return Err(Error::Resource(format!("{g} has more than 64 components")));
    }
    let components = s
        .elems
        .iter()
        .flat_map(|e| e.coords.iter().map(|&c| c as i64))
        .collect();
    let ball = enumerate_sparse(spec)?;
    let mut syndromes = vec![Vec::new(); g.order() as usize];
    for v in &ball {
        syndromes[g.dot_codes(v, &codes) as usize] = v.clone();
    }
    let info_positions = choose_info_positions(s)?;
    let solutions = solve_table(s, &info_positions)?;
    Ok(LatticeCode {
        spec: *spec,
        splitting: s.clone(),
        components,
        syndromes,
        ball,
        info_positions,
        solutions,
    })
}

/// The generating set of `rank(G)` coordinates that is smallest in the
/// order preferring higher indices, so the solved symbols trail the message.
fn choose_info_positions(s: &SplittingSequence) -> Result<Vec<usize>> {
    let g = &s.group;
    let rank = g.rank();
    let codes = s.codes();
    let order: Vec<usize> = (0..codes.len()).rev().collect();

    fn dfs(
        g: &crate::groups::AbelianGroup,
        codes: &[u64],
        order: &[usize],
        from: usize,
        rank: usize,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if chosen.len() == rank {
            let gens: Vec<u64> = chosen.iter().map(|&i| codes[i]).collect();
            return g.generated_size(&gens) == g.order();
        }
        for k in from..order.len() {
            if order.len() - k < rank - chosen.len() {
                break;
            }
            chosen.push(order[k]);
            if dfs(g, codes, order, k + 1, rank, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    let mut chosen = Vec::with_capacity(rank);
    if g.order() == 1 {
        return Ok(Vec::new());
    }
    if dfs(g, &codes, &order, 0, rank, &mut chosen) {
        chosen.sort_unstable();
        Ok(chosen)
    } else {
        Err(Error::Precondition(format!(
            "no {rank} coordinates of ({}) generate {}",
            s.format_elems(),
            g
        )))
    }
}

/// For each group element, the first coefficient tuple (lexicographic, each
/// entry in `[0, ord(s_i))`) over the info coordinates that reaches it.
fn solve_table(s: &SplittingSequence, info: &[usize]) -> Result<Vec<Vec<u64>>> {
    let g = &s.group;
    let codes = s.codes();
    let gens: Vec<u64> = info.iter().map(|&i| codes[i]).collect();
    let ords: Vec<u64> = gens.iter().map(|&c| g.element_order_code(c)).collect();
    let total = ords.iter().try_fold(1u64, |acc, &o| acc.checked_mul(o));
    if total.is_none_or(|t| t > ENCODER_BUDGET) {
        return Err(Error::Resource(format!(
            "encoder table for {} needs more than {ENCODER_BUDGET} entries",
            g
        )));
    }
    let mut table: Vec<Option<Vec<u64>>> = vec![None; g.order() as usize];
    let mut coeffs = vec![0u64; gens.len()];
    loop {
        let val = coeffs
            .iter()
            .zip(&gens)
            .fold(0, |acc, (&c, &x)| g.add_code(acc, g.scale_code(c as i64, x)));
        if table[val as usize].is_none() {
            table[val as usize] = Some(coeffs.clone());
        }
        let mut pos = coeffs.len();
        loop {
            if pos == 0 {
                return table
                    .into_iter()
                    .map(|t| t.ok_or_else(|| Error::Internal("info coordinates do not generate".into())))
                    .collect();
            }
            pos -= 1;
            coeffs[pos] += 1;
            if coeffs[pos] < ords[pos] {
                break;
            }
            coeffs[pos] = 0;
        }
    }
}

/// `x + e` for the requested burst.
pub fn inject_burst(
    spec: &BallSpec,
    x: &[i64],
    choice: &BurstChoice,
    rng: Option<&mut ChaCha8Rng>,
) -> Result<Vec<i64>> {
    if x.len() != spec.n {
        return Err(Error::param(format!(
            "vector has length {}, ball has n={}",
            x.len(),
            spec.n
        )));
    }
    let e = match choice {
        BurstChoice::Explicit { start, pattern } => explicit_burst(spec, *start, pattern)?,
        BurstChoice::Random { include_zero } => {
            let rng = rng.ok_or_else(|| Error::param("random bursts need a seeded generator"))?;
            let ball = enumerate_sparse(spec)?;
            let lo = usize::from(!include_zero).min(ball.len() - 1);
            ErrorVector::from_sparse(spec.n, &ball[rng.gen_range(lo..ball.len())])
        }
    };
    Ok(x.iter().zip(e.entries()).map(|(a, b)| a + b).collect())
}

fn explicit_burst(spec: &BallSpec, start: usize, pattern: &[i64]) -> Result<ErrorVector> {
    spec.validate()?;
    if start >= spec.n {
        return Err(Error::param(format!("burst start {start} outside 0..{}", spec.n)));
    }
    if pattern.len() > spec.b {
        return Err(Error::param(format!(
            "pattern of length {} exceeds burst length {}",
            pattern.len(),
            spec.b
        )));
    }
    let lo = -i64::from(spec.k_minus);
    let hi = i64::from(spec.k_plus);
    let mut v = vec![0i64; spec.n];
    for (j, &c) in pattern.iter().enumerate() {
        if c < lo || c > hi {
            return Err(Error::param(format!("pattern entry {c} outside [{lo}, {hi}]")));
        }
        if c == 0 {
            continue;
        }
        let pos = start + j;
        if pos >= spec.n && !spec.cyclic {
            return Err(Error::param(format!(
                "burst at {start} wraps past coordinate {}, not allowed for a non-cyclic ball",
                spec.n - 1
            )));
        }
        v[pos % spec.n] = c;
    }
    Ok(ErrorVector(v))
}
