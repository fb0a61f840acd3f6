//! Lattice point configurations and the polytope constructions used for
//! toric models: lattice points of a hull, Minkowski sums, parallel line
//! covers, normalized volume, prisms, pyramids and Lawrence prisms.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ratlin::{clear_denominators, RationalMatrix};

/// A finite set of distinct lattice points in `Z^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeConfig {
    d: usize,
    points: Vec<Vec<i64>>,
    affine_dim: usize,
}

impl LatticeConfig {
    /// Keeps the given order; rejects empty input, ragged coordinates and
    /// repeated points.
    pub fn new(points: Vec<Vec<i64>>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::InvalidInput("lattice configuration is empty".into()));
        };
        let d = first.len();
        if let Some(bad) = points.iter().position(|p| p.len() != d) {
            return Err(Error::InvalidInput(format!(
                "lattice point {bad} has {} coordinates, expected {d}",
                points[bad].len()
            )));
        }
        let mut seen = BTreeMap::new();
        for (i, p) in points.iter().enumerate() {
            if let Some(&first) = seen.get(p) {
                return Err(Error::DuplicatePoint { first, second: i });
            }
            seen.insert(p.clone(), i);
        }
        let affine_dim = affine_dimension(&points);
        Ok(Self { d, points, affine_dim })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    /// Same points in sorted order.
    pub fn sorted(&self) -> Self {
        let mut points = self.points.clone();
        points.sort();
        Self { points, ..self.clone() }
    }
}

fn affine_dimension(points: &[Vec<i64>]) -> usize {
    if points.len() < 2 {
        return 0;
    }
    let d = points[0].len();
    let diffs: Vec<i64> = points[1..]
        .iter()
        .flat_map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b))
        .collect();
    RationalMatrix::from_i64(points.len() - 1, d, &diffs).rank()
}

/// Facet description of the convex hull of a point set, in integers:
/// `eq · x = c` for every equality and `ineq · x <= c` for every facet.
struct Hull {
    equalities: Vec<(Vec<BigInt>, BigInt)>,
    inequalities: Vec<(Vec<BigInt>, BigInt)>,
}

fn dot(a: &[BigInt], x: &[i64]) -> BigInt {
    a.iter().zip(x).map(|(a, &x)| a * x).sum()
}

impl Hull {
    fn new(points: &[Vec<i64>]) -> Self {
        let d = points[0].len();
        let k = affine_dimension(points);
        let origin = &points[0];
        let diff = |p: &Vec<i64>| -> Vec<i64> { p.iter().zip(origin).map(|(a, b)| a - b).collect() };
        let all_diffs: Vec<i64> = points[1..].iter().flat_map(diff).collect();
        let eq_normals: Vec<Vec<BigInt>> = RationalMatrix::from_i64(points.len() - 1, d, &all_diffs)
            .kernel_basis()
            .iter()
            .map(|v| clear_denominators(v))
            .collect();
        let equalities = eq_normals.iter().map(|n| (n.clone(), dot(n, origin))).collect();

        let mut inequalities: Vec<(Vec<BigInt>, BigInt)> = Vec::new();
        let mut seen = BTreeSet::new();
        if k >= 1 {
            for subset in combinations(points.len(), k) {
                let base = &points[subset[0]];
                let mut rows: Vec<i64> = Vec::new();
                for &i in &subset[1..] {
                    rows.extend(points[i].iter().zip(base).map(|(a, b)| a - b));
                }
                for n in &eq_normals {
                    rows.extend(n.iter().map(|x| x.to_i64().expect("hull normal fits in i64")));
                }
                let m = RationalMatrix::from_i64(rows.len() / d, d, &rows);
                let kernel = m.kernel_basis();
                if kernel.len() != 1 {
                    continue;
                }
                let mut normal = clear_denominators(&kernel[0]);
                let offset = dot(&normal, base);
                let values: Vec<BigInt> = points.iter().map(|p| dot(&normal, p)).collect();
                let (normal, offset) = if values.iter().all(|v| v <= &offset) {
                    (normal, offset)
                } else if values.iter().all(|v| v >= &offset) {
                    normal.iter_mut().for_each(|x| *x = -x.clone());
                    (normal, -offset)
                } else {
                    continue;
                };
                if seen.insert((normal.clone(), offset.clone())) {
                    inequalities.push((normal, offset));
                }
            }
        }
        Hull { equalities, inequalities }
    }

    fn contains(&self, x: &[i64]) -> bool {
        self.equalities.iter().all(|(n, c)| &dot(n, x) == c)
            && self.inequalities.iter().all(|(n, c)| &dot(n, x) <= c)
    }
}

/// All `k`-subsets of `0..n` in lex order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Every integer point of the convex hull of `vertices`, in lex order.
pub fn lattice_points(vertices: &[Vec<i64>]) -> Result<LatticeConfig> {
    let Some(first) = vertices.first() else {
        return Err(Error::InvalidInput("no vertices given".into()));
    };
    let d = first.len();
    if vertices.iter().any(|v| v.len() != d) {
        return Err(Error::InvalidInput("vertices have mixed dimensions".into()));
    }
    let distinct: Vec<Vec<i64>> = vertices.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let hull = Hull::new(&distinct);
    let lo: Vec<i64> = (0..d).map(|i| distinct.iter().map(|v| v[i]).min().unwrap()).collect();
    let hi: Vec<i64> = (0..d).map(|i| distinct.iter().map(|v| v[i]).max().unwrap()).collect();
    let mut points = Vec::new();
    let mut x = lo.clone();
    loop {
        if hull.contains(&x) {
            points.push(x.clone());
        }
        // odometer over the bounding box, last coordinate fastest
        let mut i = d;
        loop {
            if i == 0 {
                return LatticeConfig::new(points);
            }
            i -= 1;
            if x[i] < hi[i] {
                x[i] += 1;
                for j in i + 1..d {
                    x[j] = lo[j];
                }
                break;
            }
        }
    }
}

/// Distinct `q`-fold sums of points of `a`, sorted. `q = 0` gives the
/// origin alone.
pub fn sumset(a: &LatticeConfig, q: usize) -> Vec<Vec<i64>> {
    let mut current: BTreeSet<Vec<i64>> = BTreeSet::from([vec![0; a.d()]]);
    for _ in 0..q {
        let mut next = BTreeSet::new();
        for s in &current {
            for p in a.points() {
                next.insert(s.iter().zip(p).map(|(x, y)| x + y).collect::<Vec<_>>());
            }
        }
        current = next;
    }
    current.into_iter().collect()
}

/// `|A + A|`.
pub fn minkowski_count(a: &LatticeConfig) -> usize {
    sumset(a, 2).len()
}

/// A minimal cover of a configuration by parallel lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineCover {
    pub lines: usize,
    /// Primitive direction of the lines; `None` when every point sits on its
    /// own line or there is a single point.
    pub direction: Option<Vec<i64>>,
    /// Lattice lengths of the covering segments, ascending, when the cover
    /// uses a direction.
    pub segment_lengths: Vec<usize>,
    /// Every line meets the configuration in consecutive lattice points
    /// along the direction.
    pub consecutive: bool,
}

fn primitive(v: Vec<i64>) -> Vec<i64> {
    let g = v.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    let mut v: Vec<i64> = v.into_iter().map(|x| x / g).collect();
    // canonical sign: first nonzero entry positive
    if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    v
}

/// Groups the points by the line through them in direction `v`.
fn lines_along(a: &LatticeConfig, v: &[i64]) -> BTreeMap<Vec<i64>, Vec<Vec<i64>>> {
    let d = a.d();
    let mut groups: BTreeMap<Vec<i64>, Vec<Vec<i64>>> = BTreeMap::new();
    for p in a.points() {
        let mut key = Vec::with_capacity(d * d.saturating_sub(1) / 2);
        for i in 0..d {
            for j in i + 1..d {
                key.push(p[i] * v[j] - p[j] * v[i]);
            }
        }
        groups.entry(key).or_default().push(p.clone());
    }
    groups
}

/// Fewest parallel lines covering all points, searched over the primitive
/// directions of pairwise differences.
pub fn min_line_cover(a: &LatticeConfig) -> LineCover {
    let singles = LineCover {
        lines: a.len(),
        direction: None,
        segment_lengths: vec![0; a.len()],
        consecutive: true,
    };
    let mut directions = BTreeSet::new();
    for (i, p) in a.points().iter().enumerate() {
        for q in &a.points()[i + 1..] {
            directions.insert(primitive(q.iter().zip(p).map(|(x, y)| x - y).collect()));
        }
    }
    let mut best = singles;
    for v in directions {
        let groups = lines_along(a, &v);
        if groups.len() >= best.lines {
            continue;
        }
        let vv: i64 = v.iter().map(|x| x * x).sum();
        let mut consecutive = true;
        let mut lengths = Vec::new();
        for pts in groups.values() {
            let mut ts: Vec<i64> = pts.iter().map(|p| p.iter().zip(&v).map(|(x, y)| x * y).sum()).collect();
            ts.sort_unstable();
            // consecutive lattice points along v differ by v·v in v·x
            consecutive &= ts.windows(2).all(|w| w[1] - w[0] == vv);
            lengths.push(((ts[ts.len() - 1] - ts[0]) / vv) as usize);
        }
        lengths.sort_unstable();
        best = LineCover { lines: groups.len(), direction: Some(v), segment_lengths: lengths, consecutive };
    }
    best
}

/// Normalized volume of `conv(A)` with respect to the affine lattice
/// spanned by `A`.
pub fn normalized_volume(a: &LatticeConfig) -> Result<u64> {
    let k = a.affine_dim();
    if k == 0 {
        return Err(Error::InvalidInput("normalized volume needs a hull of dimension at least 1".into()));
    }
    let coords = lattice_coordinates(a);
    // the k-th finite difference of the Ehrhart counts is k! vol
    let mut total = BigInt::zero();
    for t in 0..=k {
        let scaled: Vec<Vec<i64>> = coords.iter().map(|p| p.iter().map(|x| x * t as i64).collect()).collect();
        let count = if t == 0 { 1 } else { lattice_points(&scaled)?.len() };
        let sign = if (k - t) % 2 == 0 { 1 } else { -1 };
        total += BigInt::from(sign * binomial(k, t) as i64 * count as i64);
    }
    total.to_u64().ok_or_else(|| Error::InvalidInput("negative normalized volume".into()))
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Coordinates of `A - a_0` in a basis of the lattice spanned by the
/// differences; the result is a full-dimensional configuration in `Z^k`.
pub fn lattice_coordinates(a: &LatticeConfig) -> Vec<Vec<i64>> {
    let origin = &a.points()[0];
    let diffs: Vec<Vec<i64>> = a.points().iter().map(|p| p.iter().zip(origin).map(|(x, y)| x - y).collect()).collect();
    let (basis, pivots) = integer_echelon(diffs.clone(), a.d());
    diffs
        .iter()
        .map(|x| {
            let mut coeff = Vec::with_capacity(basis.len());
            for (r, &pc) in pivots.iter().enumerate() {
                let partial: i64 = (0..r).map(|s| coeff[s] * basis[s][pc]).sum();
                let rem = x[pc] - partial;
                debug_assert_eq!(rem % basis[r][pc], 0, "point outside the difference lattice");
                coeff.push(rem / basis[r][pc]);
            }
            coeff
        })
        .collect()
}

/// Row echelon form over the integers using unimodular row operations; the
/// nonzero rows are a basis of the row lattice.
fn integer_echelon(mut rows: Vec<Vec<i64>>, ncols: usize) -> (Vec<Vec<i64>>, Vec<usize>) {
    let mut basis = Vec::new();
    let mut pivots = Vec::new();
    for c in 0..ncols {
        loop {
            let nonzero: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][c] != 0).collect();
            let Some(&small) = nonzero.iter().min_by_key(|&&i| rows[i][c].abs()) else { break };
            if nonzero.len() == 1 {
                let mut row = rows.swap_remove(small);
                if row[c] < 0 {
                    row.iter_mut().for_each(|x| *x = -*x);
                }
                basis.push(row);
                pivots.push(c);
                break;
            }
            let pivot_row = rows[small].clone();
            for &i in &nonzero {
                if i != small {
                    let f = Integer::div_floor(&rows[i][c], &pivot_row[c]);
                    for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                        *x -= f * y;
                    }
                }
            }
        }
    }
    (basis, pivots)
}

/// `A × {0, 1, …, k}` after saturating `A` to its hull's lattice points.
pub fn prism(a: &LatticeConfig, k: usize) -> Result<LatticeConfig> {
    if k == 0 {
        return Err(Error::InvalidInput("prism height must be at least 1".into()));
    }
    let base = lattice_points(a.points())?;
    let points = (0..=k as i64)
        .flat_map(|h| {
            base.points().iter().map(move |p| {
                let mut q = p.clone();
                q.push(h);
                q
            })
        })
        .collect();
    LatticeConfig::new(points)
}

/// Pyramid over `A`: the base at height 0 in `Z × Z^d` and apex `e_0`.
pub fn pyramid(a: &LatticeConfig) -> Result<LatticeConfig> {
    let base = lattice_points(a.points())?;
    let mut apex = vec![0; a.d() + 1];
    apex[0] = 1;
    let mut points = vec![apex];
    points.extend(base.points().iter().map(|p| {
        let mut q = vec![0];
        q.extend(p);
        q
    }));
    LatticeConfig::new(points)
}

/// Lattice points of `conv{0, e_1, …, e_{k-1}, a_0 e_k, e_1 + a_1 e_k, …,
/// e_{k-1} + a_{k-1} e_k}` in `Z^k`.
pub fn lawrence_prism(heights: &[u32]) -> Result<LatticeConfig> {
    let k = heights.len();
    if k == 0 {
        return Err(Error::InvalidInput("Lawrence prism needs at least one height".into()));
    }
    if heights.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidInput("Lawrence prism heights must be nondecreasing".into()));
    }
    let mut vertices = Vec::new();
    for (i, &h) in heights.iter().enumerate() {
        let mut base = vec![0i64; k];
        if i > 0 {
            base[i - 1] = 1;
        }
        let mut top = base.clone();
        top[k - 1] += h as i64;
        vertices.push(base);
        vertices.push(top);
    }
    lattice_points(&vertices)
}

/// `conv{0, j e_1, j e_2}`.
pub fn simplex_triangle(j: i64) -> LatticeConfig {
    lattice_points(&[vec![0, 0], vec![j, 0], vec![0, j]]).expect("triangle is valid")
}

/// Integer points of `2·conv(A)`.
pub fn doubled_hull_count(a: &LatticeConfig) -> Result<usize> {
    let doubled: Vec<Vec<i64>> = a.points().iter().map(|p| p.iter().map(|x| 2 * x).collect()).collect();
    Ok(lattice_points(&doubled)?.len())
}

/// Applies `x -> M x + t` to every point.
pub fn transform(a: &LatticeConfig, m: &[Vec<i64>], t: &[i64]) -> Result<LatticeConfig> {
    let points = a
        .points()
        .iter()
        .map(|p| m.iter().zip(t).map(|(row, s)| row.iter().zip(p).map(|(x, y)| x * y).sum::<i64>() + s).collect())
        .collect();
    LatticeConfig::new(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(points: &[&[i64]]) -> LatticeConfig {
        LatticeConfig::new(points.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn rejects_duplicates() {
        let err = LatticeConfig::new(vec![vec![0], vec![1], vec![0]]).unwrap_err();
        assert_eq!(err, Error::DuplicatePoint { first: 0, second: 2 });
    }

    #[test]
    fn lattice_points_examples() {
        assert_eq!(simplex_triangle(2).len(), 6);
        assert_eq!(lattice_points(&[vec![0], vec![3]]).unwrap().points(), &[vec![0], vec![1], vec![2], vec![3]]);
        let square = lattice_points(&[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(square.len(), 4);
        // a segment inside the plane
        let seg = lattice_points(&[vec![0, 0], vec![2, 4]]).unwrap();
        assert_eq!(seg.points(), &[vec![0, 0], vec![1, 2], vec![2, 4]]);
        assert_eq!(seg.affine_dim(), 1);
    }

    #[test]
    fn minkowski_examples() {
        assert_eq!(minkowski_count(&cfg(&[&[0], &[1], &[2], &[3]])), 7);
        assert_eq!(minkowski_count(&simplex_triangle(3)), 28);
        assert_eq!(minkowski_count(&cfg(&[&[5, 5]])), 1);
    }

    #[test]
    fn line_covers() {
        for j in 1..5 {
            assert_eq!(min_line_cover(&simplex_triangle(j)).lines, j as usize + 1);
        }
        let square = cfg(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let tall = prism(&square, 3).unwrap();
        let cover = min_line_cover(&tall);
        assert_eq!(cover.lines, 4);
        assert_eq!(cover.direction, Some(vec![0, 0, 1]));
        assert_eq!(cover.segment_lengths, vec![3, 3, 3, 3]);
        assert!(cover.consecutive);
        assert_eq!(min_line_cover(&cfg(&[&[0, 0], &[1, 1], &[3, 3]])).lines, 1);
        assert!(!min_line_cover(&cfg(&[&[0, 0], &[1, 1], &[3, 3]])).consecutive);
        assert_eq!(min_line_cover(&cfg(&[&[2]])).lines, 1);
    }

    #[test]
    fn volumes() {
        assert_eq!(normalized_volume(&cfg(&[&[0], &[1], &[2], &[3]])).unwrap(), 3);
        assert_eq!(normalized_volume(&simplex_triangle(2)).unwrap(), 4);
        assert_eq!(normalized_volume(&cfg(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])).unwrap(), 2);
        // {0, 2, 4} spans the lattice 2Z, where it is a segment of length 2
        assert_eq!(normalized_volume(&cfg(&[&[0], &[2], &[4]])).unwrap(), 2);
        assert!(normalized_volume(&cfg(&[&[1, 1]])).is_err());
    }

    #[test]
    fn constructions() {
        let tri = cfg(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(prism(&tri, 2).unwrap().len(), 9);
        assert_eq!(pyramid(&simplex_triangle(2)).unwrap().len(), 7);
        let lp = lawrence_prism(&[1, 2]).unwrap();
        assert_eq!(lp.len(), 5);
        assert!(lawrence_prism(&[2, 1]).is_err());
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn doubled_hull_matches_sums_for_normal_triangle() {
        let t = simplex_triangle(3);
        assert_eq!(doubled_hull_count(&t).unwrap(), minkowski_count(&t));
    }
}
