//! Variety models: toric varieties of lattice configurations, Stanley–Reisner
//! varieties of graphs, and finite point sets.
//!
//! Each model carries its ambient dimension `n`, its dimension, the space
//! of quadrics `(I_X)_2` as coefficient vectors over the lex-ordered
//! monomials `x_i x_j` (`i <= j`), and a way to draw rational points of `X`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::graphs::{self, bits};
use crate::polytopes::{binomial, sumset};
use crate::ratlin::{rat, Rational, RationalMatrix};

pub use crate::graphs::GraphSpec;
pub use crate::polytopes::LatticeConfig;

/// Default half-width of the box integer torus coordinates are drawn from.
pub const DEFAULT_SAMPLE_BOUND: i64 = 50;

/// Degree-`q` monomials in `nvars` variables as nondecreasing index lists,
/// in lex order.
pub fn monomials(nvars: usize, q: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(q);
    fn go(nvars: usize, q: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == q {
            out.push(cur.clone());
            return;
        }
        for i in start..nvars {
            cur.push(i);
            go(nvars, q, i, cur, out);
            cur.pop();
        }
    }
    go(nvars, q, 0, &mut cur, &mut out);
    out
}

/// Position of `x_i x_j` in the lex order of quadratic monomials in
/// `n + 1` variables.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = (i.min(j), i.max(j));
    i * (n + 1) - i * i.saturating_sub(1) / 2 + (j - i)
}

/// Value of a monomial (given as an index list) at a point.
pub fn eval_monomial(m: &[usize], p: &[Rational]) -> Rational {
    m.iter().fold(Rational::one(), |acc, &i| acc * &p[i])
}

/// A finite set of points in `P^n` with rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointConfig {
    n: usize,
    points: Vec<Vec<Rational>>,
}

/// `p` and `q` are the same projective point.
pub fn projectively_equal(p: &[Rational], q: &[Rational]) -> bool {
    p.len() == q.len()
        && (0..p.len()).all(|i| (i + 1..p.len()).all(|j| &p[i] * &q[j] == &p[j] * &q[i]))
}

impl PointConfig {
    pub fn new(n: usize, points: Vec<Vec<Rational>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("point configuration is empty".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != n + 1 {
                return Err(Error::InvalidInput(format!(
                    "point {i} has {} coordinates, expected {}",
                    p.len(),
                    n + 1
                )));
            }
            if p.iter().all(Zero::is_zero) {
                return Err(Error::InvalidInput(format!("point {i} has all coordinates zero")));
            }
            if let Some(j) = points[..i].iter().position(|q| projectively_equal(p, q)) {
                return Err(Error::DuplicatePoint { first: j, second: i });
            }
        }
        Ok(Self { n, points })
    }

    pub fn from_i64(n: usize, points: &[Vec<i64>]) -> Result<Self> {
        Self::new(n, points.iter().map(|p| p.iter().map(|&x| rat(x)).collect()).collect())
    }

    /// Points `[1 : t : t^2 : … : t^n]` on the rational normal curve.
    pub fn rational_normal_curve(n: usize, params: &[i64]) -> Result<Self> {
        let pts: Vec<Vec<i64>> = params.iter().map(|&t| (0..=n as u32).map(|e| t.pow(e)).collect()).collect();
        Self::from_i64(n, &pts)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    /// Matrix of the degree-`q` monomials evaluated at the points, one row
    /// per point.
    pub fn evaluation_matrix(&self, q: usize) -> RationalMatrix {
        let monos = monomials(self.n + 1, q);
        let rows = self
            .points
            .iter()
            .map(|p| monos.iter().map(|m| eval_monomial(m, p)).collect())
            .collect();
        RationalMatrix::from_rows(monos.len(), rows)
    }
}

/// Basis of `(I_X)_2`, coefficient vectors of length `C(n+2, 2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadricSpace {
    n: usize,
    basis: Vec<Vec<Rational>>,
    /// Nonzero terms `(i, j, c)` of each basis vector, `i <= j`.
    terms: Vec<Vec<(usize, usize, Rational)>>,
}

impl QuadricSpace {
    pub fn new(n: usize, basis: Vec<Vec<Rational>>) -> Self {
        let monos = monomials(n + 1, 2);
        let terms = basis
            .iter()
            .map(|v| {
                assert_eq!(v.len(), monos.len(), "quadric has wrong length");
                v.iter()
                    .zip(&monos)
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, m)| (m[0], m[1], c.clone()))
                    .collect()
            })
            .collect();
        Self { n, basis, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn terms(&self, b: usize) -> &[(usize, usize, Rational)] {
        &self.terms[b]
    }

    /// Value of basis quadric `b` at `p`.
    pub fn evaluate(&self, b: usize, p: &[Rational]) -> Rational {
        self.terms[b]
            .iter()
            .fold(Rational::zero(), |acc, (i, j, c)| acc + c * &p[*i] * &p[*j])
    }

    /// `(n+1) × dim` matrix whose column `b` is the gradient of basis
    /// quadric `b` at `p`.
    pub fn gradient_matrix(&self, p: &[Rational]) -> RationalMatrix {
        let mut g = RationalMatrix::zeros(self.n + 1, self.dim());
        for (b, terms) in self.terms.iter().enumerate() {
            let mut col = vec![Rational::zero(); self.n + 1];
            for (i, j, c) in terms {
                if i == j {
                    col[*i] += c * &p[*i] * rat(2);
                } else {
                    col[*i] += c * &p[*j];
                    col[*j] += c * &p[*i];
                }
            }
            for (r, v) in col.into_iter().enumerate() {
                g.set(r, b, v);
            }
        }
        g
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Toric,
    Graph,
    PointSet,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Toric => "toric",
            ModelKind::Graph => "graph",
            ModelKind::PointSet => "points",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelSource {
    Toric(LatticeConfig),
    /// The graph and its maximal cliques as vertex bitmasks.
    Graph(GraphSpec, Vec<u64>),
    PointSet(PointConfig),
}

/// A projective variety `X ⊆ P^n` with its quadric space and a sampler.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarietyModel {
    pub kind: ModelKind,
    pub n: usize,
    pub dim_x: usize,
    pub irreducible: bool,
    pub nondegenerate: bool,
    pub quadrics: QuadricSpace,
    pub source: ModelSource,
}

/// Basis of the kernel of `x_i x_j -> [a_i + a_j]`: one binomial
/// `m_0 - m_t` per extra monomial in each fibre.
pub fn toric_quadrics(a: &LatticeConfig) -> QuadricSpace {
    let n = a.len() - 1;
    let monos = monomials(n + 1, 2);
    let mut fibres: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for (idx, m) in monos.iter().enumerate() {
        let sum: Vec<i64> = a.points()[m[0]].iter().zip(&a.points()[m[1]]).map(|(x, y)| x + y).collect();
        fibres.entry(sum).or_default().push(idx);
    }
    let mut groups: Vec<Vec<usize>> = fibres.into_values().filter(|g| g.len() > 1).collect();
    groups.sort();
    let mut basis = Vec::new();
    for g in groups {
        for &other in &g[1..] {
            let mut v = vec![Rational::zero(); monos.len()];
            v[g[0]] = Rational::one();
            v[other] = -Rational::one();
            basis.push(v);
        }
    }
    QuadricSpace::new(n, basis)
}

pub fn toric_model(a: &LatticeConfig) -> Result<VarietyModel> {
    if a.len() < 2 {
        return Err(Error::InvalidInput("a toric model needs at least two lattice points".into()));
    }
    Ok(VarietyModel {
        kind: ModelKind::Toric,
        n: a.len() - 1,
        dim_x: a.affine_dim(),
        irreducible: true,
        nondegenerate: true,
        quadrics: toric_quadrics(a),
        source: ModelSource::Toric(a.clone()),
    })
}

pub fn graph_model(g: &GraphSpec) -> Result<VarietyModel> {
    if g.vertex_count() < 2 {
        return Err(Error::InvalidInput("a graph model needs at least two vertices".into()));
    }
    let n = g.vertex_count() - 1;
    let monos = monomials(n + 1, 2);
    let basis = monos
        .iter()
        .enumerate()
        .filter(|(_, m)| m[0] != m[1] && !g.has_edge(m[0], m[1]))
        .map(|(idx, _)| {
            let mut v = vec![Rational::zero(); monos.len()];
            v[idx] = Rational::one();
            v
        })
        .collect();
    let cliques = graphs::maximal_cliques(g)?;
    let omega = cliques.iter().map(|c| c.count_ones() as usize).max().unwrap_or(0);
    Ok(VarietyModel {
        kind: ModelKind::Graph,
        n,
        dim_x: omega - 1,
        irreducible: cliques.len() == 1,
        nondegenerate: true,
        quadrics: QuadricSpace::new(n, basis),
        source: ModelSource::Graph(g.clone(), cliques),
    })
}

pub fn pointset_model(c: &PointConfig) -> Result<VarietyModel> {
    let n = c.n();
    let quadrics = c.evaluation_matrix(2).kernel_basis();
    let span = c.evaluation_matrix(1).rank();
    Ok(VarietyModel {
        kind: ModelKind::PointSet,
        n,
        dim_x: 0,
        irreducible: c.points().len() == 1,
        nondegenerate: span == n + 1,
        quadrics: QuadricSpace::new(n, quadrics),
        source: ModelSource::PointSet(c.clone()),
    })
}

impl VarietyModel {
    pub fn codim(&self) -> usize {
        self.n - self.dim_x
    }

    pub fn dim_i2(&self) -> usize {
        self.quadrics.dim()
    }

    /// `dim R_q` of the homogeneous coordinate ring, for `q <= 3`.
    pub fn hilbert_dim(&self, q: usize) -> Result<usize> {
        if q > 3 {
            return Err(Error::UnsupportedDegree(q));
        }
        Ok(match &self.source {
            ModelSource::Toric(a) => sumset(a, q).len(),
            ModelSource::Graph(_, cliques) => monomials(self.n + 1, q)
                .iter()
                .filter(|m| {
                    let support = m.iter().fold(0u64, |acc, &i| acc | 1 << i);
                    cliques.iter().any(|c| support & !c == 0)
                })
                .count(),
            ModelSource::PointSet(c) => c.evaluation_matrix(q).rank(),
        })
    }

    /// A random rational point of `X`. Toric models evaluate the monomial
    /// parametrization at integer torus points with coordinates in
    /// `[-bound, bound] \ {0}`; graph models pick a maximal clique uniformly
    /// and fill its coordinates with nonzero integers from the same box;
    /// point sets return one of their points.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> Vec<Rational> {
        let nonzero = |rng: &mut R| loop {
            let v = rng.gen_range(-bound..=bound);
            if v != 0 {
                return v;
            }
        };
        match &self.source {
            ModelSource::Toric(a) => {
                let t: Vec<i64> = (0..a.d()).map(|_| nonzero(rng)).collect();
                toric_point(a, &t)
            }
            ModelSource::Graph(_, cliques) => {
                let clique = cliques[rng.gen_range(0..cliques.len())];
                let mut p = vec![Rational::zero(); self.n + 1];
                for v in bits(clique) {
                    p[v] = rat(nonzero(rng));
                }
                p
            }
            ModelSource::PointSet(c) => c.points()[rng.gen_range(0..c.points().len())].clone(),
        }
    }

    /// Checks that `p` is a point of `X`: every basis quadric vanishes, and
    /// in addition cubic binomials vanish for toric models and `p` is one of
    /// the stored points for point sets.
    pub fn check_membership(&self, p: &[Rational]) -> std::result::Result<(), String> {
        if p.len() != self.n + 1 {
            return Err(format!("expected {} coordinates, got {}", self.n + 1, p.len()));
        }
        if p.iter().all(Zero::is_zero) {
            return Err("all coordinates are zero".into());
        }
        for b in 0..self.quadrics.dim() {
            if !self.quadrics.evaluate(b, p).is_zero() {
                return Err(format!("basis quadric {b} does not vanish"));
            }
        }
        match &self.source {
            ModelSource::Toric(a) => {
                let mut fibres: BTreeMap<Vec<i64>, Rational> = BTreeMap::new();
                for m in monomials(self.n + 1, 3) {
                    let sum: Vec<i64> = (0..a.d()).map(|k| m.iter().map(|&i| a.points()[i][k]).sum()).collect();
                    let value = eval_monomial(&m, p);
                    match fibres.get(&sum) {
                        Some(v) if v != &value => {
                            return Err(format!("cubic binomial through {m:?} does not vanish"))
                        }
                        Some(_) => {}
                        None => {
                            fibres.insert(sum, value);
                        }
                    }
                }
                Ok(())
            }
            ModelSource::Graph(..) => Ok(()),
            ModelSource::PointSet(c) => {
                if c.points().iter().any(|q| projectively_equal(p, q)) {
                    Ok(())
                } else {
                    Err("not one of the configuration points".into())
                }
            }
        }
    }
}

/// `[t^{a_0} : … : t^{a_n}]` after translating `A` into the nonnegative
/// orthant.
pub fn toric_point(a: &LatticeConfig, t: &[i64]) -> Vec<Rational> {
    let mins: Vec<i64> = (0..a.d()).map(|k| a.points().iter().map(|p| p[k]).min().unwrap_or(0)).collect();
    a.points()
        .iter()
        .map(|p| {
            let v = p.iter().zip(&mins).zip(t).fold(BigInt::one(), |acc, ((x, m), &ti)| {
                acc * BigInt::from(ti).pow((x - m) as u32)
            });
            Rational::from_integer(v)
        })
        .collect()
}

/// `C(n+2, 2)`, the number of quadratic monomials on `P^n`.
pub fn quadric_monomial_count(n: usize) -> usize {
    binomial(n + 2, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytopes::{lattice_points, simplex_triangle};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn twisted_cubic() -> VarietyModel {
        toric_model(&LatticeConfig::new(vec![vec![0], vec![1], vec![2], vec![3]]).unwrap()).unwrap()
    }

    #[test]
    fn monomial_order() {
        let m = monomials(3, 2);
        assert_eq!(m.len(), 6);
        assert_eq!(m[0], vec![0, 0]);
        assert_eq!(m[1], vec![0, 1]);
        assert_eq!(m[3], vec![1, 1]);
        for (idx, mono) in monomials(5, 2).iter().enumerate() {
            assert_eq!(pair_index(4, mono[0], mono[1]), idx);
        }
        assert_eq!(monomials(4, 3).len(), 20);
        assert_eq!(monomials(4, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn toric_examples() {
        let tc = twisted_cubic();
        assert_eq!((tc.n, tc.dim_x, tc.dim_i2()), (3, 1, 3));
        let v2 = toric_model(&simplex_triangle(2)).unwrap();
        assert_eq!((v2.n, v2.dim_x, v2.dim_i2()), (5, 2, 6));
        let sq = toric_model(&lattice_points(&[vec![0, 0], vec![1, 1]]).unwrap()).unwrap();
        assert_eq!(sq.dim_i2(), 0);
        let square = LatticeConfig::new(vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let seg = toric_model(&square).unwrap();
        assert_eq!((seg.n, seg.dim_x, seg.dim_i2()), (3, 2, 1));
        let line = LatticeConfig::new(vec![vec![0], vec![1]]).unwrap();
        assert_eq!(toric_model(&line).unwrap().dim_i2(), 0);
        assert!(toric_model(&LatticeConfig::new(vec![vec![0]]).unwrap()).is_err());
    }

    #[test]
    fn binomial_basis_shape() {
        let v3 = toric_model(&simplex_triangle(3)).unwrap();
        assert_eq!(v3.dim_i2(), 27);
        for v in v3.quadrics.basis() {
            let nz: Vec<_> = v.iter().filter(|x| !x.is_zero()).collect();
            assert_eq!(nz.len(), 2);
            assert_eq!(nz[0] + nz[1], Rational::zero());
        }
    }

    #[test]
    fn graph_examples() {
        let c5 = graph_model(&GraphSpec::cycle(5)).unwrap();
        assert_eq!((c5.dim_i2(), c5.dim_x, c5.irreducible), (5, 1, false));
        let p = graph_model(&GraphSpec::petersen()).unwrap();
        assert_eq!((p.dim_i2(), p.dim_x), (30, 1));
        assert_eq!(p.hilbert_dim(2).unwrap(), 9 + 15 + 1);
        let k4 = graph_model(&GraphSpec::complete(4)).unwrap();
        assert_eq!((k4.dim_i2(), k4.dim_x, k4.irreducible), (0, 3, true));
    }

    #[test]
    fn pointset_examples() {
        let three = PointConfig::from_i64(2, &[vec![1, 2, 3], vec![1, -1, 5], vec![2, 7, 1]]).unwrap();
        assert_eq!(pointset_model(&three).unwrap().dim_i2(), 3);
        let one = PointConfig::from_i64(4, &[vec![1, 0, 0, 0, 0]]).unwrap();
        let m = pointset_model(&one).unwrap();
        assert_eq!(m.dim_i2(), 15 - 1);
        assert!(m.irreducible && !m.nondegenerate);
        let rnc = PointConfig::rational_normal_curve(5, &[1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
        assert_eq!(rnc.evaluation_matrix(2).rank(), 8);
        assert_eq!(pointset_model(&rnc).unwrap().dim_i2(), 21 - 8);
        assert!(PointConfig::from_i64(1, &[vec![1, 2], vec![2, 4]]).is_err());
        assert!(PointConfig::from_i64(1, &[vec![0, 0]]).is_err());
    }

    #[test]
    fn hilbert_dims() {
        let tc = twisted_cubic();
        assert_eq!(tc.hilbert_dim(0).unwrap(), 1);
        assert_eq!(tc.hilbert_dim(2).unwrap(), 7);
        assert_eq!(tc.hilbert_dim(3).unwrap(), 10);
        let v2 = toric_model(&simplex_triangle(2)).unwrap();
        assert_eq!(v2.hilbert_dim(2).unwrap(), 15);
        assert_eq!(v2.hilbert_dim(4), Err(Error::UnsupportedDegree(4)));
    }

    #[test]
    fn samples_lie_on_models() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let models = [
            twisted_cubic(),
            toric_model(&simplex_triangle(3)).unwrap(),
            graph_model(&GraphSpec::petersen()).unwrap(),
            graph_model(&GraphSpec::new(3, &[(1, 2)]).unwrap()).unwrap(),
        ];
        for m in &models {
            for _ in 0..10 {
                let p = m.sample_point(&mut rng, DEFAULT_SAMPLE_BOUND);
                assert_eq!(m.check_membership(&p), Ok(()));
            }
        }
        let a = LatticeConfig::new(vec![vec![0], vec![1], vec![2], vec![3]]).unwrap();
        assert_eq!(toric_point(&a, &[2]), vec![rat(1), rat(2), rat(4), rat(8)]);
        let g = graph_model(&GraphSpec::new(3, &[(1, 2)]).unwrap()).unwrap();
        assert!(g.check_membership(&[rat(0), rat(1), rat(1)]).is_ok());
        assert!(g.check_membership(&[rat(1), rat(1), rat(0)]).is_err());
    }

    #[test]
    fn toric_membership_uses_cubics() {
        // {0, 1, 3} has no quadrics; x_1^3 - x_0^2 x_2 separates [1:2:3]
        let a = LatticeConfig::new(vec![vec![0], vec![1], vec![3]]).unwrap();
        let m = toric_model(&a).unwrap();
        assert_eq!(m.dim_i2(), 0);
        assert!(m.check_membership(&[rat(1), rat(2), rat(3)]).is_err());
        assert!(m.check_membership(&toric_point(&a, &[3])).is_ok());
    }
}
