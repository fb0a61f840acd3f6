//! Quadrics kept under inner projections.
//!
//! For a finite set `Γ ⊂ X`, `κ_Γ(X) = dim (I_{π_Γ(X)})_2` equals the
//! dimension of the quadrics in `(I_X)_2` that are singular at every point
//! of `Γ`, i.e. whose gradients vanish at affine representatives of the
//! points. The κ-sequence records this number along a chain of random
//! points, and the quadratic persistence `qp(X)` is the length of the chain
//! needed to reach zero.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graphs::bits;
use crate::models::{monomials, eval_monomial, ModelSource, QuadricSpace, VarietyModel, DEFAULT_SAMPLE_BOUND};
use crate::polytopes::combinations;
use crate::ratlin::{rat, Rational, RationalMatrix};

/// The subspace of `(I_X)_2` singular at the points added so far.
#[derive(Debug, Clone)]
pub struct KappaChain<'a> {
    quadrics: &'a QuadricSpace,
    /// Rows span the subspace, in reduced row echelon form.
    basis: Vec<Vec<Rational>>,
}

impl<'a> KappaChain<'a> {
    pub fn new(quadrics: &'a QuadricSpace) -> Self {
        let d = quadrics.dim();
        let basis = RationalMatrix::identity(d);
        Self { quadrics, basis: (0..d).map(|r| basis.row(r).to_vec()).collect() }
    }

    pub fn kappa(&self) -> usize {
        self.basis.len()
    }

    /// Imposes that the quadrics be singular at `p`; only the gradient
    /// conditions restricted to the current subspace are solved.
    pub fn add_point(&mut self, p: &[Rational]) {
        if self.basis.is_empty() {
            return;
        }
        let g = self.quadrics.gradient_matrix(p);
        let k = self.basis.len();
        let mut restricted = RationalMatrix::zeros(g.rows(), k);
        for i in 0..g.rows() {
            for (r, v) in self.basis.iter().enumerate() {
                let s = g
                    .row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b);
                restricted.set(i, r, s);
            }
        }
        let kernel = restricted.kernel_basis();
        if kernel.len() == k {
            return;
        }
        let d = self.quadrics.dim();
        let rows: Vec<Vec<Rational>> = kernel
            .iter()
            .map(|mu| {
                let mut v = vec![Rational::zero(); d];
                for (coef, row) in mu.iter().zip(&self.basis) {
                    if coef.is_zero() {
                        continue;
                    }
                    for (x, y) in v.iter_mut().zip(row) {
                        if !y.is_zero() {
                            *x += coef * y;
                        }
                    }
                }
                v
            })
            .collect();
        let (r, pivots) = RationalMatrix::from_rows(d, rows).rref();
        self.basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
    }

    /// Basis of the current subspace as coefficient vectors over the basis
    /// of `(I_X)_2`.
    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }
}

fn check_points(model: &VarietyModel, gamma: &[Vec<Rational>]) -> Result<()> {
    for (i, p) in gamma.iter().enumerate() {
        model
            .check_membership(p)
            .map_err(|reason| Error::NotOnVariety { point: i, reason })?;
    }
    Ok(())
}

/// `κ_Γ(X)`: the dimension of the quadrics in `(I_X)_2` singular at every
/// point of `gamma`.
pub fn kappa_at(model: &VarietyModel, gamma: &[Vec<Rational>]) -> Result<usize> {
    check_points(model, gamma)?;
    let mut chain = KappaChain::new(&model.quadrics);
    for p in gamma {
        chain.add_point(p);
    }
    Ok(chain.kappa())
}

/// κ values along chains of random points, merged over trials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaSequence {
    /// `κ_0, κ_1, …, κ_k` with `κ_k = 0`.
    pub values: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Every trial produced the same sequence.
    pub agreement: bool,
    pub per_trial: Vec<Vec<usize>>,
}

impl KappaSequence {
    pub fn qp(&self) -> usize {
        self.values.len() - 1
    }
}

/// Random stream for trial `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// One chain of random points: the κ values and the points used.
fn random_chain(model: &VarietyModel, rng: &mut ChaCha8Rng) -> Result<(Vec<usize>, Vec<Vec<Rational>>)> {
    let mut chain = KappaChain::new(&model.quadrics);
    let mut values = vec![chain.kappa()];
    let mut points = Vec::new();
    // qp <= codim for non-degenerate X; stalls come from unlucky samples
    let max_steps = 2 * (model.n + 1);
    while chain.kappa() > 0 {
        if points.len() == max_steps {
            return Err(Error::Inconsistent {
                theorem: "qp <= codim".into(),
                detail: format!("κ still {} after {max_steps} random points", chain.kappa()),
            });
        }
        let p = model.sample_point(rng, DEFAULT_SAMPLE_BOUND);
        chain.add_point(&p);
        values.push(chain.kappa());
        points.push(p);
    }
    Ok((values, points))
}

/// The κ-sequence of an irreducible model: each trial adds random points one
/// at a time until no quadric survives; the reported sequence is the
/// entrywise minimum over trials.
pub fn kappa_sequence(model: &VarietyModel, trials: usize, seed: u64) -> Result<KappaSequence> {
    if !model.irreducible {
        return Err(Error::Reducible);
    }
    let trials = trials.max(1);
    let per_trial: Vec<Vec<usize>> = (0..trials)
        .into_par_iter()
        .map(|t| random_chain(model, &mut trial_rng(seed, t)).map(|(v, _)| v))
        .collect::<Result<_>>()?;
    let len = per_trial.iter().map(Vec::len).min().expect("at least one trial");
    let values = (0..len).map(|j| per_trial.iter().map(|s| s[j]).min().unwrap()).collect();
    let agreement = per_trial.windows(2).all(|w| w[0] == w[1]);
    Ok(KappaSequence { values, trials, seed, agreement, per_trial })
}

/// Quadratic persistence of an irreducible model.
pub fn qp(model: &VarietyModel, trials: usize, seed: u64) -> Result<usize> {
    Ok(kappa_sequence(model, trials, seed)?.qp())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchStatus {
    Found,
    Inconclusive,
}

/// Outcome of a witness search for `qp(X) <= k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QpSearch {
    pub status: SearchStatus,
    /// Smallest witness size found.
    pub k: Option<usize>,
    pub witness: Vec<Vec<Rational>>,
    /// Every candidate set smaller than `k` was tried. Exact for point sets;
    /// for graph models the candidates carry random coordinates, so this is
    /// best effort.
    pub exhaustive_below: bool,
    /// A certified lower bound on `qp(X)`.
    pub certified_lower: usize,
}

impl QpSearch {
    /// `k` is known to equal `qp(X)`.
    pub fn is_exact(&self) -> bool {
        self.k == Some(self.certified_lower)
    }
}

/// Cap on chain extensions during the graph witness search.
pub const GRAPH_SEARCH_NODE_CAP: usize = 200_000;

/// Searches point sets `Γ` with `|Γ| <= max_size` and `κ_Γ = 0`.
///
/// Point sets: all subsets of the configuration, by increasing size.
/// Graph models: a greedy chain over components (maximal cliques carrying
/// random nonzero coordinates) and coordinate points, then an exhaustive
/// pass over multisets of those candidates of smaller size. Irreducible
/// models: the random chains of [`kappa_sequence`].
pub fn qp_upper_search(model: &VarietyModel, max_size: usize, trials: usize, seed: u64) -> Result<QpSearch> {
    let lower = usize::from(model.dim_i2() > 0);
    match &model.source {
        ModelSource::PointSet(c) => Ok(search_pointset(model, c.points(), max_size)),
        ModelSource::Graph(_, cliques) if !model.irreducible => {
            Ok(search_graph(model, cliques, max_size, trials.max(1), seed))
        }
        _ => {
            let mut best: Option<(Vec<usize>, Vec<Vec<Rational>>)> = None;
            for t in 0..trials.max(1) {
                let run = random_chain(model, &mut trial_rng(seed, t))?;
                if best.as_ref().map_or(true, |b| run.1.len() < b.1.len()) {
                    best = Some(run);
                }
            }
            let (_, witness) = best.expect("at least one trial");
            let k = witness.len();
            if k > max_size {
                return Ok(QpSearch {
                    status: SearchStatus::Inconclusive,
                    k: None,
                    witness: Vec::new(),
                    exhaustive_below: false,
                    certified_lower: lower,
                });
            }
            Ok(QpSearch { status: SearchStatus::Found, k: Some(k), witness, exhaustive_below: false, certified_lower: lower })
        }
    }
}

fn search_pointset(model: &VarietyModel, points: &[Vec<Rational>], max_size: usize) -> QpSearch {
    for size in 0..=max_size.min(points.len()) {
        for subset in combinations(points.len(), size) {
            let mut chain = KappaChain::new(&model.quadrics);
            for &i in &subset {
                chain.add_point(&points[i]);
            }
            if chain.kappa() == 0 {
                return QpSearch {
                    status: SearchStatus::Found,
                    k: Some(size),
                    witness: subset.iter().map(|&i| points[i].clone()).collect(),
                    exhaustive_below: true,
                    certified_lower: size,
                };
            }
        }
    }
    QpSearch {
        status: SearchStatus::Inconclusive,
        k: None,
        witness: Vec::new(),
        exhaustive_below: true,
        certified_lower: (max_size.min(points.len()) + 1).min(points.len() + 1),
    }
}

/// Candidate kinds for graph witnesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Candidate {
    /// A point with random nonzero coordinates on a maximal clique.
    Component(u64),
    /// The coordinate point `e_i`.
    Coordinate(usize),
}

impl Candidate {
    fn point(self, n: usize, rng: &mut ChaCha8Rng) -> Vec<Rational> {
        let mut p = vec![Rational::zero(); n + 1];
        match self {
            Candidate::Component(mask) => {
                for v in bits(mask) {
                    let x = loop {
                        let x = rng.gen_range(-DEFAULT_SAMPLE_BOUND..=DEFAULT_SAMPLE_BOUND);
                        if x != 0 {
                            break x;
                        }
                    };
                    p[v] = rat(x);
                }
            }
            Candidate::Coordinate(i) => p[i] = rat(1),
        }
        p
    }

    fn repeatable(self) -> bool {
        matches!(self, Candidate::Component(m) if m.count_ones() > 1)
    }
}

fn search_graph(model: &VarietyModel, cliques: &[u64], max_size: usize, trials: usize, seed: u64) -> QpSearch {
    let n = model.n;
    let mut candidates: Vec<Candidate> = cliques.iter().map(|&c| Candidate::Component(c)).collect();
    candidates.extend((0..=n).filter(|&i| !cliques.contains(&(1u64 << i))).map(Candidate::Coordinate));
    let lower = usize::from(model.dim_i2() > 0);

    // greedy: at each step keep the candidate that kills the most quadrics
    let mut best: Option<Vec<Vec<Rational>>> = None;
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let mut chain = KappaChain::new(&model.quadrics);
        let mut witness = Vec::new();
        while chain.kappa() > 0 && witness.len() < max_size {
            let step = candidates
                .iter()
                .map(|c| {
                    let p = c.point(n, &mut rng);
                    let mut next = chain.clone();
                    next.add_point(&p);
                    (next.kappa(), p, next)
                })
                .min_by_key(|(k, _, _)| *k)
                .expect("candidates are nonempty");
            if step.0 == chain.kappa() {
                break;
            }
            witness.push(step.1);
            chain = step.2;
        }
        if chain.kappa() == 0 && best.as_ref().map_or(true, |b| witness.len() < b.len()) {
            best = Some(witness);
        }
    }

    // exhaustive pass over smaller multisets of candidates
    let limit = best.as_ref().map_or(max_size, |b| b.len().saturating_sub(1));
    let mut rng = trial_rng(seed, trials);
    let mut nodes = 0usize;
    let mut exhausted = true;
    for size in 0..=limit {
        let mut picked = Vec::new();
        let chain = KappaChain::new(&model.quadrics);
        match graph_dfs(n, &candidates, 0, size, chain, &mut picked, &mut rng, &mut nodes) {
            DfsResult::Found => {
                best = Some(picked);
                break;
            }
            DfsResult::CapHit => {
                exhausted = false;
                break;
            }
            DfsResult::Exhausted => {}
        }
    }

    match best {
        Some(witness) => {
            let k = witness.len();
            let certified_lower = if k <= lower { k } else { lower };
            QpSearch {
                status: SearchStatus::Found,
                k: Some(k),
                witness,
                exhaustive_below: exhausted,
                certified_lower,
            }
        }
        None => QpSearch {
            status: SearchStatus::Inconclusive,
            k: None,
            witness: Vec::new(),
            exhaustive_below: exhausted,
            certified_lower: lower,
        },
    }
}

enum DfsResult {
    Found,
    Exhausted,
    CapHit,
}

#[allow(clippy::too_many_arguments)]
fn graph_dfs(
    n: usize,
    candidates: &[Candidate],
    start: usize,
    remaining: usize,
    chain: KappaChain<'_>,
    picked: &mut Vec<Vec<Rational>>,
    rng: &mut ChaCha8Rng,
    nodes: &mut usize,
) -> DfsResult {
    if chain.kappa() == 0 {
        return DfsResult::Found;
    }
    // each point lowers κ by at most n + 1
    if remaining == 0 || chain.kappa() > remaining * (n + 1) {
        return DfsResult::Exhausted;
    }
    for (idx, &c) in candidates.iter().enumerate().skip(start) {
        *nodes += 1;
        if *nodes > GRAPH_SEARCH_NODE_CAP {
            return DfsResult::CapHit;
        }
        let p = c.point(n, rng);
        let mut next = chain.clone();
        next.add_point(&p);
        if next.kappa() == chain.kappa() {
            continue;
        }
        picked.push(p);
        let next_start = if c.repeatable() { idx } else { idx + 1 };
        match graph_dfs(n, candidates, next_start, remaining - 1, next, picked, rng, nodes) {
            DfsResult::Exhausted => {
                picked.pop();
            }
            other => return other,
        }
    }
    DfsResult::Exhausted
}

/// Independent estimate of `κ_Γ(X)` by interpolation: the dimension of the
/// quadrics in linear forms vanishing on `Span(Γ)` that vanish at
/// `nsamples` random points of `X`. No gradients are involved. Point-set
/// models use all of their points instead of random draws.
pub fn kappa_oracle<R: Rng + ?Sized>(
    model: &VarietyModel,
    gamma: &[Vec<Rational>],
    nsamples: usize,
    rng: &mut R,
) -> Result<usize> {
    check_points(model, gamma)?;
    let span = if gamma.is_empty() {
        0
    } else {
        RationalMatrix::from_rows(model.n + 1, gamma.to_vec()).rank()
    };
    if span != gamma.len() {
        return Err(Error::GammaNotGeneral { expected: gamma.len(), got: span });
    }
    let forms: Vec<Vec<Rational>> = if gamma.is_empty() {
        let id = RationalMatrix::identity(model.n + 1);
        (0..=model.n).map(|r| id.row(r).to_vec()).collect()
    } else {
        RationalMatrix::from_rows(model.n + 1, gamma.to_vec()).kernel_basis()
    };
    let samples: Vec<Vec<Rational>> = match &model.source {
        ModelSource::PointSet(c) => c.points().to_vec(),
        _ => (0..nsamples).map(|_| model.sample_point(rng, DEFAULT_SAMPLE_BOUND)).collect(),
    };
    let monos = monomials(forms.len(), 2);
    let rows: Vec<Vec<Rational>> = samples
        .iter()
        .map(|p| {
            let y: Vec<Rational> = forms
                .iter()
                .map(|l| l.iter().zip(p).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
                .collect();
            monos.iter().map(|m| eval_monomial(m, &y)).collect()
        })
        .collect();
    let rank = RationalMatrix::from_rows(monos.len(), rows).rank();
    Ok(monos.len() - rank)
}
