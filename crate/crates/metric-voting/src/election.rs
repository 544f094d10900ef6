//! Election instances, pairwise margins, plurality scores, candidate
//! distributions, instance file I/O, and instance generators.
//!
//! Voters are stored as weighted blocks: a block is a strict ranking of all
//! candidates together with a positive rational weight. Weights are
//! normalized to sum to one on construction, so "a `w` fraction of voters"
//! is represented directly by a block of weight `w`. Unit-voter instances
//! simply use equal weights.

use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::{format_rational, parse_rational, rat_int, rat_to_f64, Rational};

#[derive(Debug, thiserror::Error)]
pub enum ElectionError {
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid instance: {0}")]
    Validation(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

/// A weighted voter block: one strict ranking shared by a `weight` fraction
/// of the electorate, listed from most to least preferred.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoterBlock {
    pub weight: Rational,
    pub ranking: Vec<usize>,
}

/// An election instance: `m` candidates and a non-empty list of weighted
/// voter blocks whose weights sum to one.
///
/// Immutable after construction; derived tables (candidate positions,
/// pairwise margins) are computed once and cached.
#[derive(Debug)]
pub struct ElectionInstance {
    m: usize,
    voters: Vec<VoterBlock>,
    /// positions[v][c] = rank of candidate `c` in block `v` (0 = favorite).
    positions: Vec<Vec<usize>>,
    margins_zero: OnceLock<PairwiseMatrix>,
    margins_half: OnceLock<PairwiseMatrix>,
}

impl Clone for ElectionInstance {
    fn clone(&self) -> Self {
        ElectionInstance {
            m: self.m,
            voters: self.voters.clone(),
            positions: self.positions.clone(),
            margins_zero: OnceLock::new(),
            margins_half: OnceLock::new(),
        }
    }
}

impl ElectionInstance {
    /// Validates rankings and weights and normalizes weights to sum 1.
    pub fn new(m: usize, voters: Vec<(Rational, Vec<usize>)>) -> Result<Self, ElectionError> {
        if m == 0 {
            return Err(ElectionError::Validation("need at least one candidate".into()));
        }
        if voters.is_empty() {
            return Err(ElectionError::Validation("need at least one voter".into()));
        }
        let mut total = Rational::zero();
        let mut blocks = Vec::with_capacity(voters.len());
        for (weight, ranking) in voters {
            if !weight.is_positive() {
                return Err(ElectionError::Validation(format!(
                    "voter weight {} is not positive",
                    format_rational(&weight)
                )));
            }
            validate_permutation(m, &ranking)?;
            total += &weight;
            blocks.push(VoterBlock { weight, ranking });
        }
        for block in &mut blocks {
            block.weight = &block.weight / &total;
        }
        let positions = blocks
            .iter()
            .map(|b| {
                let mut pos = vec![0usize; m];
                for (p, &c) in b.ranking.iter().enumerate() {
                    pos[c] = p;
                }
                pos
            })
            .collect();
        Ok(ElectionInstance {
            m,
            voters: blocks,
            positions,
            margins_zero: OnceLock::new(),
            margins_half: OnceLock::new(),
        })
    }

    pub fn candidate_count(&self) -> usize {
        self.m
    }

    pub fn voters(&self) -> &[VoterBlock] {
        &self.voters
    }

    pub fn block_count(&self) -> usize {
        self.voters.len()
    }

    /// Rank of candidate `c` in block `v` (0 = favorite).
    pub fn position(&self, v: usize, c: usize) -> usize {
        self.positions[v][c]
    }

    /// True iff block `v` strictly prefers candidate `i` over `j`.
    pub fn prefers(&self, v: usize, i: usize, j: usize) -> bool {
        self.positions[v][i] < self.positions[v][j]
    }

    /// Parses the instance file format: a `m k` header line followed by `k`
    /// lines `w i_1 ... i_m` (weight, then a full ranking from most to least
    /// preferred). Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, ElectionError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(idx, l)| (idx + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (header_no, header) = lines
            .next()
            .ok_or_else(|| ElectionError::Parse { line: 0, message: "empty input".into() })?;
        let mut it = header.split_whitespace();
        let m: usize = parse_field(&mut it, header_no, "candidate count")?;
        let k: usize = parse_field(&mut it, header_no, "voter count")?;
        if it.next().is_some() {
            return Err(ElectionError::Parse {
                line: header_no,
                message: "trailing tokens after header".into(),
            });
        }
        let mut voters = Vec::with_capacity(k);
        for _ in 0..k {
            let (no, line) = lines.next().ok_or_else(|| ElectionError::Parse {
                line: header_no,
                message: format!("expected {k} voter lines"),
            })?;
            let mut tokens = line.split_whitespace();
            let weight_tok = tokens.next().ok_or_else(|| ElectionError::Parse {
                line: no,
                message: "missing weight".into(),
            })?;
            let weight = parse_rational(weight_tok)
                .map_err(|e| ElectionError::Parse { line: no, message: e.to_string() })?;
            let ranking: Vec<usize> = tokens
                .map(|t| {
                    t.parse::<usize>().map_err(|_| ElectionError::Parse {
                        line: no,
                        message: format!("bad candidate index `{t}`"),
                    })
                })
                .collect::<Result<_, _>>()?;
            if ranking.len() != m {
                return Err(ElectionError::Parse {
                    line: no,
                    message: format!("expected {m} ranking entries, got {}", ranking.len()),
                });
            }
            voters.push((weight, ranking));
        }
        if let Some((no, _)) = lines.next() {
            return Err(ElectionError::Parse { line: no, message: "unexpected extra line".into() });
        }
        ElectionInstance::new(m, voters)
    }

    /// Serializes in the same file format accepted by [`ElectionInstance::parse`].
    pub fn to_file_string(&self) -> String {
        let mut out = format!("{} {}\n", self.m, self.voters.len());
        for block in &self.voters {
            out.push_str(&format_rational(&block.weight));
            for c in &block.ranking {
                out.push(' ');
                out.push_str(&c.to_string());
            }
            out.push('\n');
        }
        out
    }

    /// Pairwise margin matrix: entry `(i, j)` is the total weight of voters
    /// preferring `i` over `j`. The diagonal is 0 or 1/2 per `mode`.
    pub fn margins(&self, mode: DiagonalMode) -> &PairwiseMatrix {
        let cell = match mode {
            DiagonalMode::Zero => &self.margins_zero,
            DiagonalMode::Half => &self.margins_half,
        };
        cell.get_or_init(|| {
            let mut s = vec![vec![Rational::zero(); self.m]; self.m];
            for block in &self.voters {
                for (hi, &i) in block.ranking.iter().enumerate() {
                    for &j in &block.ranking[hi + 1..] {
                        s[i][j] += &block.weight;
                    }
                }
            }
            if mode == DiagonalMode::Half {
                let half = Rational::new(1.into(), 2.into());
                for (i, row) in s.iter_mut().enumerate() {
                    row[i] = half.clone();
                }
            }
            PairwiseMatrix { mode, s }
        })
    }

    /// Plurality scores: entry `i` is the total weight of voters whose top
    /// choice is `i`. Sums to exactly 1.
    pub fn plurality(&self) -> CandidateDistribution {
        let mut p = vec![Rational::zero(); self.m];
        for block in &self.voters {
            p[block.ranking[0]] += &block.weight;
        }
        CandidateDistribution::exact(p)
    }
}

fn parse_field<T: std::str::FromStr>(
    it: &mut std::str::SplitWhitespace,
    line: usize,
    what: &str,
) -> Result<T, ElectionError> {
    it.next()
        .ok_or_else(|| ElectionError::Parse { line, message: format!("missing {what}") })?
        .parse::<T>()
        .map_err(|_| ElectionError::Parse { line, message: format!("bad {what}") })
}

fn validate_permutation(m: usize, ranking: &[usize]) -> Result<(), ElectionError> {
    if ranking.len() != m {
        return Err(ElectionError::Validation(format!(
            "ranking has {} entries, expected {m}",
            ranking.len()
        )));
    }
    let mut seen = vec![false; m];
    for &c in ranking {
        if c >= m {
            return Err(ElectionError::Validation(format!("candidate index {c} out of range")));
        }
        if seen[c] {
            return Err(ElectionError::Validation(format!("ranking repeats candidate {c}")));
        }
        seen[c] = true;
    }
    Ok(())
}

/// Diagonal convention for [`PairwiseMatrix`]. `Half` is used by the
/// pairwise-majority game behind Maximal Lotteries; `Zero` everywhere else.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagonalMode {
    Zero,
    Half,
}

/// Exact pairwise margins `s[i][j]`; off-diagonal entries satisfy
/// `s[i][j] + s[j][i] = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairwiseMatrix {
    mode: DiagonalMode,
    s: Vec<Vec<Rational>>,
}

impl PairwiseMatrix {
    pub fn mode(&self) -> DiagonalMode {
        self.mode
    }

    pub fn size(&self) -> usize {
        self.s.len()
    }

    pub fn margin(&self, i: usize, j: usize) -> &Rational {
        &self.s[i][j]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.s
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.s.iter().map(|row| row.iter().map(rat_to_f64).collect()).collect()
    }
}

/// A probability vector over candidates, either exact or binary64.
///
/// Rules that only count voters produce exact vectors; anything that mixes
/// with irrational weights is approximate. `probs_exact` converts binary64
/// entries losslessly, so downstream rational identities stay exact in the
/// entries even for approximate distributions.
#[derive(Debug, Clone, PartialEq)]
pub enum CandidateDistribution {
    Exact(Vec<Rational>),
    Approx(Vec<f64>),
}

impl CandidateDistribution {
    /// Wraps an exact probability vector. Panics if entries are negative or
    /// do not sum to exactly 1 (that is an internal logic error).
    pub fn exact(p: Vec<Rational>) -> Self {
        assert!(p.iter().all(|x| !x.is_negative()), "negative probability");
        let total: Rational = p.iter().sum();
        assert!(total.is_one(), "probabilities sum to {total}, expected 1");
        CandidateDistribution::Exact(p)
    }

    /// Wraps a binary64 probability vector; entries must be within 1e-9 of
    /// a valid distribution.
    pub fn approx(p: Vec<f64>) -> Self {
        assert!(p.iter().all(|x| *x >= -1e-9), "negative probability");
        let total: f64 = p.iter().sum();
        assert!((total - 1.0).abs() <= 1e-9, "probabilities sum to {total}");
        CandidateDistribution::Approx(p.into_iter().map(|x| x.max(0.0)).collect())
    }

    pub fn point_mass(m: usize, winner: usize) -> Self {
        let mut p = vec![Rational::zero(); m];
        p[winner] = Rational::one();
        CandidateDistribution::Exact(p)
    }

    pub fn len(&self) -> usize {
        match self {
            CandidateDistribution::Exact(p) => p.len(),
            CandidateDistribution::Approx(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CandidateDistribution::Exact(_))
    }

    pub fn prob_f64(&self, i: usize) -> f64 {
        match self {
            CandidateDistribution::Exact(p) => rat_to_f64(&p[i]),
            CandidateDistribution::Approx(p) => p[i],
        }
    }

    pub fn probs_f64(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.prob_f64(i)).collect()
    }

    /// Entry-wise exact view; binary64 entries are converted losslessly.
    pub fn probs_exact(&self) -> Vec<Rational> {
        match self {
            CandidateDistribution::Exact(p) => p.clone(),
            CandidateDistribution::Approx(p) => {
                p.iter().map(|&x| Rational::from_float(x).expect("finite")).collect()
            }
        }
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.prob_f64(i) > 0.0).collect()
    }

    pub fn total_variation(&self, other: &CandidateDistribution) -> f64 {
        assert_eq!(self.len(), other.len());
        (0..self.len()).map(|i| (self.prob_f64(i) - other.prob_f64(i)).abs()).sum::<f64>() / 2.0
    }
}

impl fmt::Display for CandidateDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CandidateDistribution::Exact(p) => {
                let parts: Vec<String> =
                    p.iter().enumerate().map(|(i, x)| format!("{i}: {}", format_rational(x))).collect();
                write!(f, "{}", parts.join(", "))
            }
            CandidateDistribution::Approx(p) => {
                let parts: Vec<String> =
                    p.iter().enumerate().map(|(i, x)| format!("{i}: {x:.9}")).collect();
                write!(f, "{}", parts.join(", "))
            }
        }
    }
}

/// `n` unit-weight voters with independent uniformly random rankings of `m`
/// candidates. Deterministic for a fixed seed.
pub fn gen_random(m: usize, n: usize, seed: u64) -> ElectionInstance {
    assert!(m >= 1 && n >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let voters = (0..n)
        .map(|_| {
            let mut ranking: Vec<usize> = (0..m).collect();
            ranking.shuffle(&mut rng);
            (Rational::one(), ranking)
        })
        .collect();
    ElectionInstance::new(m, voters).expect("generated instance is valid")
}

/// Random instance whose pairwise margins all lie within `eps` of 1/2,
/// found by rejection sampling. Deterministic for a fixed seed.
pub fn gen_balanced(m: usize, n: usize, eps: &Rational, seed: u64) -> ElectionInstance {
    let half = Rational::new(1.into(), 2.into());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let sub_seed = rng.gen::<u64>();
        let inst = gen_random(m, n, sub_seed);
        let margins = inst.margins(DiagonalMode::Zero);
        let ok = (0..m).all(|i| {
            (0..m)
                .filter(|&j| j != i)
                .all(|j| (margins.margin(i, j) - &half).abs() <= *eps)
        });
        if ok {
            return inst;
        }
    }
}

/// Adversarial family for uncovered-set dictatorships: candidates
/// `{best, rival} ∪ U`, where a `1-beta` block ranks `best ≻ U ≻ rival` and
/// a `beta` block splits equally over `j ∈ U` with `j ≻ rival ≻ best ≻ U∖j`.
///
/// "Members of a set in every order equally often" is realized by cyclic
/// rotations at equal weight, which preserves the cross-set margins:
/// `s[rival][best] = beta`, `s[best][j] = 1 - beta/|U|` and
/// `s[rival][j] = beta(1 - 1/|U|)` for every `j ∈ U`.
///
/// Candidate indexing: 0 = `best`, 1 = `rival`, `2..2+u_size` = `U`.
pub fn gen_radius_lb(beta: &Rational, u_size: usize) -> Result<ElectionInstance, ElectionError> {
    check_beta_open(beta)?;
    if u_size < 2 {
        return Err(ElectionError::Parameter("need |U| >= 2".into()));
    }
    let q = u_size;
    let m = q + 2;
    let best = 0usize;
    let rival = 1usize;
    let u = |idx: usize| 2 + (idx % q);
    let one = Rational::one();
    let w_top = (&one - beta) / rat_int(q as i64); // per rotation of the 1-beta block
    let w_u = beta / rat_int(q as i64); // per member block of the beta block
    let mut voters = Vec::with_capacity(2 * q);
    for tau in 0..q {
        let mut ranking = Vec::with_capacity(m);
        ranking.push(best);
        ranking.extend((0..q).map(|off| u(tau + off)));
        ranking.push(rival);
        voters.push((w_top.clone(), ranking));
    }
    for j in 0..q {
        let mut ranking = Vec::with_capacity(m);
        ranking.push(u(j));
        ranking.push(rival);
        ranking.push(best);
        ranking.extend((1..q).map(|off| u(j + off)));
        voters.push((w_u.clone(), ranking));
    }
    ElectionInstance::new(m, voters)
}

/// Adversarial family for consensus-builder rules: candidates `{best}` plus
/// tiers `C_1 ... C_{T+1}` of size `T` each, with ballot blocks of weight
/// `1 - beta - 1/T`, `1/T`, and `beta/T` per tier, realized with
/// synchronized cyclic rotations. Satisfies
/// `s[c_1][best] = 1/T + beta(1 - 1/T)` exactly and
/// `s[c_{t+1}][c_t] >= 1 - 2 beta / T` across adjacent tiers.
///
/// Candidate indexing: 0 = `best`; tier `t` (1-based) occupies
/// `1 + (t-1)T .. 1 + tT`.
pub fn gen_rcb_lb(beta: &Rational, t: usize) -> Result<ElectionInstance, ElectionError> {
    check_beta_open(beta)?;
    if t < 2 {
        return Err(ElectionError::Parameter("need T >= 2".into()));
    }
    let tf = rat_int(t as i64);
    let one = Rational::one();
    let w_main = &one - beta - (&one / &tf);
    if !w_main.is_positive() {
        return Err(ElectionError::Parameter(format!(
            "1 - beta - 1/T = {} must be positive",
            format_rational(&w_main)
        )));
    }
    let tiers = t + 1;
    let m = 1 + t * tiers;
    let best = 0usize;
    // member `p` of 1-based tier `tier`
    let member = |tier: usize, p: usize| 1 + (tier - 1) * t + (p % t);
    let rotated = |tier: usize, tau: usize| -> Vec<usize> {
        (0..t).map(|off| member(tier, tau + off)).collect()
    };
    let rotated_without = |tier: usize, tau: usize| -> Vec<usize> {
        (1..t).map(|off| member(tier, tau + off)).collect()
    };
    let mut voters = Vec::new();
    let w1 = &w_main / &tf;
    let w2 = (&one / &tf) / &tf;
    let w3 = (beta / &tf) / &tf;
    for tau in 0..t {
        // best ≻ C_{T+1} ≻ ... ≻ C_1
        let mut ranking = vec![best];
        for tier in (1..=tiers).rev() {
            ranking.extend(rotated(tier, tau));
        }
        voters.push((w1.clone(), ranking));
        // C_{T+1} ≻ ... ≻ C_1 ≻ best
        let mut ranking = Vec::with_capacity(m);
        for tier in (1..=tiers).rev() {
            ranking.extend(rotated(tier, tau));
        }
        ranking.push(best);
        voters.push((w2.clone(), ranking));
    }
    for tier_t in 1..=t {
        for tau in 0..t {
            // (C_t∖c_t) ≻ ... ≻ (C_1∖c_1) ≻ best ≻ C_{T+1} ≻ ... ≻ C_{t+1} ≻ c_t ≻ ... ≻ c_1
            let mut ranking = Vec::with_capacity(m);
            for tier in (1..=tier_t).rev() {
                ranking.extend(rotated_without(tier, tau));
            }
            ranking.push(best);
            for tier in (tier_t + 1..=tiers).rev() {
                ranking.extend(rotated(tier, tau));
            }
            for tier in (1..=tier_t).rev() {
                ranking.push(member(tier, tau));
            }
            voters.push((w3.clone(), ranking));
        }
    }
    ElectionInstance::new(m, voters)
}

fn check_beta_open(beta: &Rational) -> Result<(), ElectionError> {
    let half = Rational::new(1.into(), 2.into());
    if *beta <= half || *beta >= Rational::one() {
        return Err(ElectionError::Parameter(format!(
            "beta = {} must lie strictly inside (1/2, 1)",
            format_rational(beta)
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    pub(crate) fn fig1() -> ElectionInstance {
        ElectionInstance::parse("2 2\n1 0 1\n1 1 0\n").unwrap()
    }

    fn three_cycle() -> ElectionInstance {
        // a≻b≻c, b≻c≻a, c≻a≻b
        ElectionInstance::new(
            3,
            vec![
                (Rational::one(), vec![0, 1, 2]),
                (Rational::one(), vec![1, 2, 0]),
                (Rational::one(), vec![2, 0, 1]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn parses_two_voter_instance() {
        let e = fig1();
        assert_eq!(e.candidate_count(), 2);
        assert_eq!(e.voters()[0].weight, rat(1, 2));
        assert_eq!(e.voters()[0].ranking, vec![0, 1]);
    }

    #[test]
    fn parses_degenerate_single_candidate() {
        let e = ElectionInstance::parse("1 1\n1 0\n").unwrap();
        assert_eq!(e.candidate_count(), 1);
        assert_eq!(e.voters()[0].weight, rat_int(1));
    }

    #[test]
    fn rejects_repeated_candidate() {
        let err = ElectionInstance::parse("2 1\n1 0 0\n").unwrap_err();
        assert!(matches!(err, ElectionError::Validation(_)), "{err}");
    }

    #[test]
    fn rejects_nonpositive_weight_and_bad_header() {
        assert!(ElectionInstance::parse("2 1\n0 0 1\n").is_err());
        assert!(ElectionInstance::parse("2 1\n-1/2 0 1\n").is_err());
        assert!(ElectionInstance::parse("x 1\n1 0\n").is_err());
        assert!(ElectionInstance::parse("2 2\n1 0 1\n").is_err());
    }

    #[test]
    fn file_round_trip() {
        let e = gen_random(4, 6, 3);
        let text = e.to_file_string();
        let back = ElectionInstance::parse(&text).unwrap();
        assert_eq!(back.to_file_string(), text);
    }

    #[test]
    fn margins_of_disagreeing_pair() {
        let e = fig1();
        let s = e.margins(DiagonalMode::Zero);
        assert_eq!(*s.margin(0, 1), rat(1, 2));
        assert_eq!(*s.margin(1, 0), rat(1, 2));
        assert_eq!(*s.margin(0, 0), rat_int(0));
        let h = e.margins(DiagonalMode::Half);
        assert_eq!(*h.margin(0, 0), rat(1, 2));
    }

    #[test]
    fn margins_of_three_cycle() {
        let e = three_cycle();
        let s = e.margins(DiagonalMode::Zero);
        assert_eq!(*s.margin(0, 1), rat(2, 3));
        assert_eq!(*s.margin(1, 2), rat(2, 3));
        assert_eq!(*s.margin(2, 0), rat(2, 3));
        assert_eq!(*s.margin(1, 0), rat(1, 3));
    }

    #[test]
    fn margins_unanimous_top() {
        let e = ElectionInstance::new(
            3,
            vec![(Rational::one(), vec![0, 1, 2]), (Rational::one(), vec![0, 2, 1])],
        )
        .unwrap();
        let s = e.margins(DiagonalMode::Zero);
        assert_eq!(*s.margin(0, 1), rat_int(1));
        assert_eq!(*s.margin(0, 2), rat_int(1));
    }

    #[test]
    fn margin_antisymmetry_on_random_instances() {
        for seed in 0..20 {
            let e = gen_random(2 + (seed as usize % 4), 2 + (seed as usize % 5), seed);
            let s = e.margins(DiagonalMode::Zero);
            let m = e.candidate_count();
            for i in 0..m {
                assert!(s.margin(i, i).is_zero());
                for j in 0..m {
                    if i != j {
                        assert!((s.margin(i, j) + s.margin(j, i)).is_one());
                    }
                }
            }
        }
    }

    #[test]
    fn plurality_examples() {
        assert_eq!(
            fig1().plurality(),
            CandidateDistribution::exact(vec![rat(1, 2), rat(1, 2)])
        );
        let e = ElectionInstance::new(
            3,
            vec![
                (Rational::one(), vec![0, 1, 2]),
                (Rational::one(), vec![0, 2, 1]),
                (Rational::one(), vec![1, 2, 0]),
            ],
        )
        .unwrap();
        assert_eq!(
            e.plurality(),
            CandidateDistribution::exact(vec![rat(2, 3), rat(1, 3), rat_int(0)])
        );
    }

    #[test]
    fn gen_random_is_reproducible() {
        let a = gen_random(3, 4, 7);
        let b = gen_random(3, 4, 7);
        assert_eq!(a.to_file_string(), b.to_file_string());
        let c = gen_random(3, 4, 8);
        assert_ne!(a.to_file_string(), c.to_file_string());
    }

    #[test]
    fn gen_random_single_candidate() {
        let e = gen_random(1, 5, 1);
        assert!(e.voters().iter().all(|b| b.ranking == vec![0]));
    }

    #[test]
    fn gen_random_margins_near_half_for_large_n() {
        let e = gen_random(4, 10_000, 1);
        let s = e.margins(DiagonalMode::Zero);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    let v = rat_to_f64(s.margin(i, j));
                    assert!((v - 0.5).abs() < 0.05, "margin {i}->{j} = {v}");
                }
            }
        }
    }

    #[test]
    fn radius_lb_margins_match_closed_forms() {
        // grid: beta in {0.55, 0.60, ..., 0.95}, |U| in {2..10}
        for nb in 0..=8 {
            let beta = rat(55 + 5 * nb, 100);
            for q in 2..=10usize {
                let e = gen_radius_lb(&beta, q).unwrap();
                let s = e.margins(DiagonalMode::Zero);
                let qf = rat_int(q as i64);
                assert_eq!(*s.margin(1, 0), beta, "rival-over-best margin");
                for j in 2..2 + q {
                    assert_eq!(*s.margin(0, j), Rational::one() - &beta / &qf);
                    assert_eq!(*s.margin(1, j), &beta * (Rational::one() - Rational::one() / &qf));
                }
            }
        }
    }

    #[test]
    fn radius_lb_example_margins() {
        let e = gen_radius_lb(&rat(7, 10), 5).unwrap();
        let s = e.margins(DiagonalMode::Zero);
        assert_eq!(*s.margin(1, 0), rat(7, 10));
        assert_eq!(*s.margin(0, 2), rat(43, 50));
    }

    #[test]
    fn rcb_lb_margins() {
        let beta = rat(3, 5);
        let t = 10usize;
        let e = gen_rcb_lb(&beta, t).unwrap();
        assert_eq!(e.candidate_count(), 1 + t * (t + 1));
        let s = e.margins(DiagonalMode::Zero);
        // s[c_1][best] = 1/T + beta(1 - 1/T) = 0.64
        for p in 0..t {
            assert_eq!(*s.margin(1 + p, 0), rat(16, 25));
        }
        // adjacent tiers: s[c_{i+1}][c_i] >= 1 - 2 beta / T = 0.88
        let bound = rat(22, 25);
        for tier in 1..=t {
            for p in 0..t {
                for p2 in 0..t {
                    let hi = 1 + tier * t + p2;
                    let lo = 1 + (tier - 1) * t + p;
                    assert!(
                        *s.margin(hi, lo) >= bound,
                        "tier {tier} margin {} < 0.88",
                        format_rational(s.margin(hi, lo))
                    );
                }
            }
        }
    }

    #[test]
    fn rcb_lb_rejects_nonpositive_main_block() {
        let err = gen_rcb_lb(&rat(3, 5), 2).unwrap_err();
        assert!(matches!(err, ElectionError::Parameter(_)), "{err}");
    }

    #[test]
    fn generators_reject_bad_beta() {
        assert!(gen_radius_lb(&rat(1, 2), 5).is_err());
        assert!(gen_radius_lb(&rat_int(1), 5).is_err());
        assert!(gen_rcb_lb(&rat(2, 5), 5).is_err());
    }

    #[test]
    fn balanced_generator_respects_eps() {
        let eps = rat(1, 10);
        let e = gen_balanced(3, 24, &eps, 5);
        let s = e.margins(DiagonalMode::Zero);
        let half = rat(1, 2);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!((s.margin(i, j) - &half).abs() <= eps);
                }
            }
        }
    }

    #[test]
    fn weights_normalize_to_one() {
        let e = ElectionInstance::new(
            2,
            vec![(rat_int(3), vec![0, 1]), (rat_int(1), vec![1, 0])],
        )
        .unwrap();
        assert_eq!(e.voters()[0].weight, rat(3, 4));
        let total: Rational = e.voters().iter().map(|b| b.weight.clone()).sum();
        assert!(total.is_one());
    }
}
