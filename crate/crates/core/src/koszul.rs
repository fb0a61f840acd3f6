//! Koszul cohomology of the homogeneous coordinate ring.
//!
//! `K_{p,q}` is the middle homology of
//! `∧^{p+1}V ⊗ R_{q-1} → ∧^p V ⊗ R_q → ∧^{p-1}V ⊗ R_{q+1}` with `V = S_1`.
//! Toric and graph models are multigraded, so every differential splits
//! into small blocks indexed by weight; ranks are taken block by block.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graphs::GraphSpec;
use crate::models::{monomials, ModelSource, PointConfig, VarietyModel};
use crate::polytopes::{combinations, sumset, LatticeConfig};
use crate::ratlin::{clear_denominators, rank_of_integer_rows, Rational, RationalMatrix};

/// Default cap on materialized matrix entries per `(p, q)` pair.
pub const DEFAULT_BUDGET: usize = 50_000_000;

/// Highest internal degree whose differential is supported.
pub const MAX_Q: usize = 3;

/// Wedges are stored as `u32` masks.
pub const MAX_VARIABLES: usize = 32;

/// Sparse image of `x_i · b` in the next graded piece.
type Image = Vec<(usize, Rational)>;

/// One graded piece `R_q` with a fixed basis.
#[derive(Debug, Clone)]
struct Piece {
    /// Multidegree of each basis element (empty when ungraded).
    weights: Vec<Vec<i64>>,
    /// `mult[i][b]`: `x_i` times basis element `b`, in the basis of `R_{q+1}`.
    mult: Vec<Vec<Image>>,
}

/// Graded pieces `R_0, …, R_{top}` of the coordinate ring, with the
/// multiplication maps `S_1 ⊗ R_q → R_{q+1}` for `q < top`.
#[derive(Debug, Clone)]
pub struct CoordinateRing {
    nvars: usize,
    /// Weight of the variable `x_i`.
    var_weights: Vec<Vec<i64>>,
    pieces: Vec<Piece>,
}

impl CoordinateRing {
    pub fn new(model: &VarietyModel, top: usize) -> Result<Self> {
        if model.n + 1 > MAX_VARIABLES {
            return Err(Error::TooLarge { what: "variables for Koszul complexes".into(), limit: MAX_VARIABLES });
        }
        match &model.source {
            ModelSource::Toric(a) => Ok(toric_ring(a, top)),
            ModelSource::Graph(g, _) => Ok(graph_ring(g, top)),
            ModelSource::PointSet(c) => Ok(pointset_ring(c, top)),
        }
    }

    /// `dim R_q`.
    pub fn dim(&self, q: usize) -> usize {
        self.pieces[q].weights.len()
    }

    pub fn top(&self) -> usize {
        self.pieces.len() - 1
    }
}

fn toric_ring(a: &LatticeConfig, top: usize) -> CoordinateRing {
    let sums: Vec<Vec<Vec<i64>>> = (0..=top).map(|q| sumset(a, q)).collect();
    let pieces = (0..=top)
        .map(|q| {
            let mult = if q < top {
                let index: HashMap<&[i64], usize> =
                    sums[q + 1].iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
                a.points()
                    .iter()
                    .map(|ai| {
                        sums[q]
                            .iter()
                            .map(|b| {
                                let sum: Vec<i64> = b.iter().zip(ai).map(|(x, y)| x + y).collect();
                                vec![(index[sum.as_slice()], Rational::one())]
                            })
                            .collect()
                    })
                    .collect()
            } else {
                Vec::new()
            };
            Piece { weights: sums[q].clone(), mult }
        })
        .collect();
    CoordinateRing { nvars: a.len(), var_weights: a.points().to_vec(), pieces }
}

fn exponent_vector(m: &[usize], nvars: usize) -> Vec<i64> {
    let mut e = vec![0; nvars];
    for &i in m {
        e[i] += 1;
    }
    e
}

fn graph_ring(g: &GraphSpec, top: usize) -> CoordinateRing {
    let nvars = g.vertex_count();
    let support = |m: &[usize]| m.iter().fold(0u64, |acc, &i| acc | (1u64 << i));
    let bases: Vec<Vec<Vec<usize>>> = (0..=top)
        .map(|q| monomials(nvars, q).into_iter().filter(|m| g.is_clique(support(m))).collect())
        .collect();
    let pieces = (0..=top)
        .map(|q| {
            let mult = if q < top {
                let index: HashMap<&[usize], usize> =
                    bases[q + 1].iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
                (0..nvars)
                    .map(|i| {
                        bases[q]
                            .iter()
                            .map(|m| {
                                let mut prod = m.clone();
                                prod.push(i);
                                prod.sort_unstable();
                                match index.get(prod.as_slice()) {
                                    Some(&j) => vec![(j, Rational::one())],
                                    None => Vec::new(),
                                }
                            })
                            .collect()
                    })
                    .collect()
            } else {
                Vec::new()
            };
            Piece { weights: bases[q].iter().map(|m| exponent_vector(m, nvars)).collect(), mult }
        })
        .collect();
    let var_weights = (0..nvars).map(|i| exponent_vector(&[i], nvars)).collect();
    CoordinateRing { nvars, var_weights, pieces }
}

fn pointset_ring(c: &PointConfig, top: usize) -> CoordinateRing {
    let nvars = c.n() + 1;
    let monos: Vec<Vec<Vec<usize>>> = (0..=top).map(|q| monomials(nvars, q)).collect();
    // R_q is spanned by the pivot monomials of the evaluation matrix; any
    // monomial is the combination read off its rref column
    let reduced: Vec<(RationalMatrix, Vec<usize>)> = (0..=top).map(|q| c.evaluation_matrix(q).rref()).collect();
    let pieces = (0..=top)
        .map(|q| {
            let (_, pivots) = &reduced[q];
            let mult = if q < top {
                let index: HashMap<&[usize], usize> =
                    monos[q + 1].iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
                let (r, next_pivots) = &reduced[q + 1];
                (0..nvars)
                    .map(|i| {
                        pivots
                            .iter()
                            .map(|&col| {
                                let mut prod = monos[q][col].clone();
                                prod.push(i);
                                prod.sort_unstable();
                                let c = index[prod.as_slice()];
                                (0..next_pivots.len())
                                    .filter(|&row| !r.get(row, c).is_zero())
                                    .map(|row| (row, r.get(row, c).clone()))
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            } else {
                Vec::new()
            };
            Piece { weights: vec![Vec::new(); pivots.len()], mult }
        })
        .collect();
    CoordinateRing { nvars, var_weights: vec![Vec::new(); nvars], pieces }
}

fn check_degrees(model: &VarietyModel, p: usize, q: usize) -> Result<()> {
    if q > MAX_Q {
        return Err(Error::UnsupportedDegree(q));
    }
    if p > model.n + 1 {
        return Err(Error::InvalidInput(format!("wedge degree {p} exceeds n + 1 = {}", model.n + 1)));
    }
    Ok(())
}

/// Image of `e_I ⊗ b` under the differential, as `((I', b'), coefficient)`.
fn apply(ring: &CoordinateRing, q: usize, wedge: u32, b: usize) -> Vec<((u32, usize), Rational)> {
    let mut out = Vec::new();
    let mut s = 0;
    let mut rest = wedge;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let sign = if s % 2 == 0 { Rational::one() } else { -Rational::one() };
        let smaller = wedge & !(1u32 << i);
        for (b2, c) in &ring.pieces[q].mult[i][b] {
            out.push(((smaller, *b2), &sign * c));
        }
        s += 1;
    }
    out
}

fn wedge_masks(nvars: usize, p: usize) -> Vec<u32> {
    combinations(nvars, p)
        .into_iter()
        .map(|c| c.iter().fold(0u32, |acc, &i| acc | (1u32 << i)))
        .collect()
}

/// Matrix of `d: ∧^p V ⊗ R_q → ∧^{p-1} V ⊗ R_{q+1}`; rows index the
/// codomain, columns the domain, both ordered by lex wedge index and then
/// by the basis of the graded piece.
pub fn koszul_differential(model: &VarietyModel, p: usize, q: usize) -> Result<RationalMatrix> {
    check_degrees(model, p, q)?;
    let ring = CoordinateRing::new(model, q + 1)?;
    Ok(differential_matrix(&ring, p, q))
}

fn differential_matrix(ring: &CoordinateRing, p: usize, q: usize) -> RationalMatrix {
    let dom = wedge_masks(ring.nvars, p);
    let cols = dom.len() * ring.dim(q);
    if p == 0 {
        return RationalMatrix::zeros(0, cols);
    }
    let cod = wedge_masks(ring.nvars, p - 1);
    let cod_index: HashMap<u32, usize> = cod.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let next = ring.dim(q + 1);
    let mut m = RationalMatrix::zeros(cod.len() * next, cols);
    for (wi, &w) in dom.iter().enumerate() {
        for b in 0..ring.dim(q) {
            for ((w2, b2), c) in apply(ring, q, w, b) {
                let r = cod_index[&w2] * next + b2;
                let col = wi * ring.dim(q) + b;
                let v = m.get(r, col) + c;
                m.set(r, col, v);
            }
        }
    }
    m
}

/// Domain elements `(I, b)` of `∧^p V ⊗ R_q`, grouped by weight.
fn blocks(ring: &CoordinateRing, p: usize, q: usize) -> HashMap<Vec<i64>, Vec<(u32, usize)>> {
    let mut out: HashMap<Vec<i64>, Vec<(u32, usize)>> = HashMap::new();
    for w in wedge_masks(ring.nvars, p) {
        let mut wt = ring.pieces[q].weights.first().map_or_else(Vec::new, |v| vec![0; v.len()]);
        let mut rest = w;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            for (x, y) in wt.iter_mut().zip(&ring.var_weights[i]) {
                *x += y;
            }
        }
        for (b, bw) in ring.pieces[q].weights.iter().enumerate() {
            let key: Vec<i64> = wt.iter().zip(bw).map(|(x, y)| x + y).collect();
            out.entry(key).or_default().push((w, b));
        }
    }
    out
}

/// One block of a differential: a sparse row per domain element and the
/// number of codomain coordinates the rows touch.
struct Block {
    rows: Vec<Vec<(usize, Rational)>>,
    ncols: usize,
}

impl Block {
    fn entries(&self) -> usize {
        self.rows.len() * self.ncols
    }

    fn rank(self) -> usize {
        let ncols = self.ncols;
        let dense: Vec<Vec<BigInt>> = self
            .rows
            .into_iter()
            .map(|entries| {
                let mut row = vec![Rational::zero(); ncols];
                for (j, c) in entries {
                    row[j] = c;
                }
                clear_denominators(&row)
            })
            .collect();
        rank_of_integer_rows(dense, ncols)
    }
}

fn build_block(ring: &CoordinateRing, q: usize, elems: &[(u32, usize)]) -> Block {
    let mut index: HashMap<(u32, usize), usize> = HashMap::new();
    let rows = elems
        .iter()
        .map(|&(w, b)| {
            let mut acc: HashMap<usize, Rational> = HashMap::new();
            for (key, c) in apply(ring, q, w, b) {
                let next = index.len();
                let j = *index.entry(key).or_insert(next);
                *acc.entry(j).or_insert_with(Rational::zero) += c;
            }
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
        })
        .collect();
    Block { rows, ncols: index.len() }
}

/// Blockwise rank of `d_{p,q}`, keyed by weight, or `TooLarge` when the
/// dense blocks would exceed `budget` entries.
fn block_ranks(ring: &CoordinateRing, p: usize, q: usize, budget: usize) -> Result<HashMap<Vec<i64>, usize>> {
    if p == 0 || p > ring.nvars {
        return Ok(HashMap::new());
    }
    let groups: Vec<(Vec<i64>, Vec<(u32, usize)>)> = blocks(ring, p, q).into_iter().collect();
    let built: Vec<(Vec<i64>, Block)> =
        groups.par_iter().map(|(w, elems)| (w.clone(), build_block(ring, q, elems))).collect();
    let entries: usize = built.iter().map(|(_, b)| b.entries()).sum();
    if entries > budget {
        return Err(Error::TooLarge { what: format!("Koszul differential d_{{{p},{q}}}"), limit: budget });
    }
    Ok(built.into_par_iter().map(|(w, b)| (w, b.rank())).collect())
}

fn koszul_dim_in(ring: &CoordinateRing, p: usize, q: usize, budget: usize) -> Result<usize> {
    if p > ring.nvars {
        return Ok(0);
    }
    let out_ranks = block_ranks(ring, p, q, budget)?;
    let in_ranks = if q == 0 { HashMap::new() } else { block_ranks(ring, p + 1, q - 1, budget)? };
    let mut total = 0;
    for (w, elems) in blocks(ring, p, q) {
        let r_out = out_ranks.get(&w).copied().unwrap_or(0);
        let r_in = in_ranks.get(&w).copied().unwrap_or(0);
        total += elems.len() - r_out - r_in;
    }
    Ok(total)
}

fn require_nondegenerate(model: &VarietyModel) -> Result<()> {
    if model.nondegenerate {
        Ok(())
    } else {
        Err(Error::Degenerate)
    }
}

/// `dim K_{p,q} = dim ker d_{p,q} − rank d_{p+1,q−1}`.
pub fn koszul_dim(model: &VarietyModel, p: usize, q: usize) -> Result<usize> {
    require_nondegenerate(model)?;
    check_degrees(model, p, q)?;
    let ring = CoordinateRing::new(model, q + 1)?;
    koszul_dim_in(&ring, p, q, DEFAULT_BUDGET)
}

/// Green–Lazarsfeld index: finite, or infinite for 2-regular rings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlIndex {
    Finite(usize),
    Infinite,
}

impl std::fmt::Display for GlIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GlIndex::Finite(j) => write!(f, "{j}"),
            GlIndex::Infinite => f.write_str("inf"),
        }
    }
}

/// The first two rows of the Betti table up to `p_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearStrand {
    /// `K_{p,1}` for `p = 1..=p_max` (index 0 holds `p = 1`).
    pub k_p1: Vec<usize>,
    /// `K_{p,2}` for `p = 0..=p_max`; shorter when truncated.
    pub k_p2: Vec<usize>,
    pub ell: usize,
    pub gl_index: GlIndex,
    pub p_max: usize,
    /// Some requested entry was not computed; `ell` and a finite
    /// `gl_index` are then lower bounds.
    pub truncated: bool,
}

/// Computes `K_{p,1}` and `K_{p,2}` up to `p_max`, refusing any
/// differential whose blocks exceed `budget` entries.
pub fn linear_strand(model: &VarietyModel, p_max: usize, budget: usize) -> Result<LinearStrand> {
    require_nondegenerate(model)?;
    if p_max > model.n {
        return Err(Error::InvalidInput(format!("p_max {p_max} exceeds n = {}", model.n)));
    }
    let ring = CoordinateRing::new(model, 3)?;
    let mut truncated = false;

    let mut k_p1 = Vec::with_capacity(p_max);
    for p in 1..=p_max {
        if k_p1.last() == Some(&0) {
            // once K_{p,1} vanishes, the linear strand has ended
            k_p1.push(0);
            continue;
        }
        match koszul_dim_in(&ring, p, 1, budget) {
            Ok(k) => k_p1.push(k),
            Err(Error::TooLarge { .. }) => {
                truncated = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let strand_ended = p_max == model.n || k_p1.last() == Some(&0);
    if !strand_ended {
        truncated = true;
    }
    let ell = k_p1.iter().rposition(|&k| k != 0).map_or(0, |i| i + 1);

    let mut k_p2 = Vec::with_capacity(p_max + 1);
    for p in 0..=p_max {
        match koszul_dim_in(&ring, p, 2, budget) {
            Ok(k) => k_p2.push(k),
            Err(Error::TooLarge { .. }) => {
                truncated = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let gl_index = match k_p2.iter().position(|&k| k != 0) {
        Some(j) => GlIndex::Finite(j.saturating_sub(1)),
        None if k_p2.len() == p_max + 1 && p_max == model.n => GlIndex::Infinite,
        None => {
            truncated = true;
            GlIndex::Finite(k_p2.len().saturating_sub(1))
        }
    };
    Ok(LinearStrand { k_p1, k_p2, ell, gl_index, p_max, truncated })
}
