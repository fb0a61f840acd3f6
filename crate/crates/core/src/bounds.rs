//! Bounds on the Pythagoras number and extremal certificates.
//!
//! Upper bounds come from the dimension of `R_2`, from the
//! Green–Lazarsfeld index, and from a 2-regular variety containing `X`
//! (a rational normal scroll for toric models, a chordal completion for
//! graph models). The lower bound `n + 1 − qp(X)` needs an irreducible
//! model with a certified quadratic persistence.

use std::fmt;

use crate::error::{Error, Result};
use crate::graphs::{treewidth, treewidth_upper_bound, GraphSpec, EXACT_TREEWIDTH_CAP};
use crate::koszul::{linear_strand, GlIndex, LinearStrand, DEFAULT_BUDGET, MAX_VARIABLES};
use crate::models::{ModelKind, ModelSource, VarietyModel};
use crate::polytopes::{binomial, lattice_points, min_line_cover, normalized_volume, LatticeConfig};
use crate::projection::{kappa_sequence, qp_upper_search, SearchStatus};

/// Largest `r >= 0` with `C(r + 1, 2) < dim_r2`.
pub fn convex_bound(dim_r2: usize) -> usize {
    let mut r = 0;
    while binomial(r + 2, 2) < dim_r2 {
        r += 1;
    }
    r
}

/// `n + 1 − min{g, codim}`.
pub fn gl_bound(n: usize, gl_index: GlIndex, codim: usize) -> usize {
    let m = match gl_index {
        GlIndex::Finite(g) => g.min(codim),
        GlIndex::Infinite => codim,
    };
    n + 1 - m
}

/// `n + 1 − qp`.
pub fn qp_lower_bound(n: usize, qp: usize) -> usize {
    n + 1 - qp
}

/// `ε = C(codim + 1, 2) − dim (I_X)_2`; negative values signal an
/// inconsistent model.
pub fn quadratic_deficiency(codim: usize, dim_i2: usize) -> Result<usize> {
    binomial(codim + 1, 2).checked_sub(dim_i2).ok_or_else(|| Error::Inconsistent {
        theorem: "quadratic deficiency".into(),
        detail: format!("dim I_2 = {dim_i2} exceeds C({}, 2)", codim + 1),
    })
}

/// Where an upper bound comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Convex,
    GreenLazarsfeld,
    ScrollLineCover,
    Treewidth,
    PrismFormula,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::Convex => "convex",
            Provenance::GreenLazarsfeld => "green-lazarsfeld",
            Provenance::ScrollLineCover => "scroll/line-cover",
            Provenance::Treewidth => "treewidth",
            Provenance::PrismFormula => "prism-formula",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpperBound {
    pub value: usize,
    pub provenance: Provenance,
    pub note: Option<String>,
}

/// Upper bound from a 2-regular variety containing `X`.
pub fn scroll_bound(model: &VarietyModel) -> Result<UpperBound> {
    match &model.source {
        ModelSource::Toric(a) => {
            let cover = min_line_cover(a);
            if !cover.consecutive {
                return Err(Error::NotApplicable(
                    "the minimal line cover skips lattice points, so it does not give a scroll".into(),
                ));
            }
            Ok(UpperBound {
                value: cover.lines + 1,
                provenance: Provenance::ScrollLineCover,
                note: Some(format!("{} parallel lines, segment lengths {:?}", cover.lines, cover.segment_lengths)),
            })
        }
        ModelSource::Graph(g, _) => {
            let (tw, note) = graph_treewidth(g);
            Ok(UpperBound { value: tw + 1, provenance: Provenance::Treewidth, note: Some(note) })
        }
        ModelSource::PointSet(_) => Err(Error::NotApplicable("no scroll or chordal bound for point sets".into())),
    }
}

fn graph_treewidth(g: &GraphSpec) -> (usize, String) {
    match treewidth(g) {
        Ok(tw) => (tw, format!("treewidth {tw}")),
        Err(_) => {
            let tw = treewidth_upper_bound(g);
            (tw, format!("treewidth <= {tw} (heuristic, more than {EXACT_TREEWIDTH_CAP} vertices)"))
        }
    }
}

/// Formula values for the prism `P × [0, k]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrismInvariants {
    pub qp: usize,
    pub py: usize,
    pub ell: usize,
}

/// `qp = ell = k|A| − 1` and `py = |A| + 1` for the prism over the lattice
/// polytope spanned by `A`, once `dim ≥ 2` and `k ≥ |A| / (dim − 1) − 1`.
pub fn prism_invariants(a: &LatticeConfig, k: usize) -> Result<PrismInvariants> {
    let base = lattice_points(a.points())?;
    let dim = base.affine_dim();
    if dim < 2 {
        return Err(Error::NotApplicable(format!("base polytope has dimension {dim}, need at least 2")));
    }
    let m = base.len();
    if (k + 1) * (dim - 1) < m {
        return Err(Error::NotApplicable(format!("height {k} is below {m}/{} - 1", dim - 1)));
    }
    Ok(PrismInvariants { qp: k * m - 1, py: m + 1, ell: k * m - 1 })
}

/// Recognizes `A = B × {h, …, h + k}` along some coordinate, with `B` the
/// lattice points of its hull; returns `(B, k)`.
pub fn as_prism(a: &LatticeConfig) -> Option<(LatticeConfig, usize)> {
    let d = a.d();
    for c in 0..d {
        let lo = a.points().iter().map(|p| p[c]).min()?;
        let hi = a.points().iter().map(|p| p[c]).max()?;
        let k = (hi - lo) as usize;
        if k == 0 || a.len() % (k + 1) != 0 {
            continue;
        }
        let drop = |p: &Vec<i64>| -> Vec<i64> { p.iter().enumerate().filter(|&(i, _)| i != c).map(|(_, &x)| x).collect() };
        let base: Vec<Vec<i64>> = a.points().iter().filter(|p| p[c] == lo).map(drop).collect();
        if base.len() * (k + 1) != a.len() {
            continue;
        }
        let mut expected: Vec<Vec<i64>> = (lo..=hi)
            .flat_map(|h| {
                base.iter().map(move |b| {
                    let mut q = b.clone();
                    q.insert(c, h);
                    q
                })
            })
            .collect();
        expected.sort();
        let mut actual = a.points().to_vec();
        actual.sort();
        if expected != actual {
            continue;
        }
        let b = LatticeConfig::new(base).ok()?;
        if lattice_points(b.points()).ok()?.len() == b.len() {
            return Some((b, k));
        }
    }
    None
}

/// Quadratic persistence as far as it is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QpValue {
    Exact(usize),
    /// Only `qp <= k` is certified.
    Upper(usize),
    Unknown,
}

impl QpValue {
    pub fn exact(self) -> Option<usize> {
        match self {
            QpValue::Exact(k) => Some(k),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LowerBound {
    pub value: usize,
    /// The hypotheses behind `py >= n + 1 − qp` are not verified.
    pub advisory: bool,
}

/// Fired extremal results.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// `ε = 0`, `qp = codim` and `deg = 1 + codim`: `py = dim + 1`.
    MinimalDegree { py: usize },
    /// `ε ∈ {1, 2}` forces `qp = codim − 1`; with the ACM flag, `py = dim + 2`.
    NearlyMinimal { qp: usize, py: Option<usize> },
    /// `qp >= ell` checked.
    StrandLength { qp: usize, ell: usize },
    /// Prism formulas apply.
    Prism(PrismInvariants),
}

impl Certificate {
    pub fn name(&self) -> &'static str {
        match self {
            Certificate::MinimalDegree { .. } => "minimal-degree",
            Certificate::NearlyMinimal { .. } => "nearly-minimal",
            Certificate::StrandLength { .. } => "qp-at-least-strand-length",
            Certificate::Prism(_) => "prism",
        }
    }

    /// The exact Pythagoras number, if this certificate gives one.
    pub fn py(&self) -> Option<usize> {
        match self {
            Certificate::MinimalDegree { py } => Some(*py),
            Certificate::NearlyMinimal { py, .. } => *py,
            Certificate::Prism(p) => Some(p.py),
            Certificate::StrandLength { .. } => None,
        }
    }
}

/// Options for [`full_report`].
#[derive(Debug, Clone)]
pub struct ReportConfig {
    pub trials: usize,
    pub seed: u64,
    /// Highest wedge degree for the strand; defaults to `n`.
    pub p_max: Option<usize>,
    /// Largest witness tried by the point-set and graph searches; defaults
    /// to `n + 1`.
    pub max_gamma: Option<usize>,
    pub budget: usize,
    /// The user asserts that `X` is arithmetically Cohen–Macaulay.
    pub acm: bool,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self { trials: 3, seed: 42, p_max: None, max_gamma: None, budget: DEFAULT_BUDGET, acm: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PyBoundsReport {
    pub kind: ModelKind,
    pub n: usize,
    pub dim_x: usize,
    pub codim: usize,
    pub dim_i2: usize,
    pub dim_r2: usize,
    pub eps: usize,
    pub degree: Option<u64>,
    pub qp: QpValue,
    pub strand: Option<LinearStrand>,
    pub lower: Option<LowerBound>,
    pub uppers: Vec<UpperBound>,
    pub certificates: Vec<Certificate>,
    /// `[lower, upper]` from certified bounds only.
    pub interval: (usize, Option<usize>),
    /// Boundary lattice points minus three, for lattice polygons; advisory.
    pub gl_prediction: Option<usize>,
    pub assumptions: Vec<String>,
    pub warnings: Vec<String>,
}

/// Checks the extremal implications and returns the certificates that fire.
pub fn classify_extremal(
    model: &VarietyModel,
    qp: usize,
    eps: usize,
    degree: Option<u64>,
    strand: Option<&LinearStrand>,
    acm: bool,
) -> Result<Vec<Certificate>> {
    let codim = model.codim();
    let mut out = Vec::new();
    let fail = |theorem: &str, detail: String| Error::Inconsistent { theorem: theorem.into(), detail };

    if (eps == 0) != (qp == codim) {
        return Err(fail("minimal degree", format!("eps = {eps} but qp = {qp}, codim = {codim}")));
    }
    if let Some(deg) = degree {
        if (deg == 1 + codim as u64) != (qp == codim) {
            return Err(fail("minimal degree", format!("deg = {deg} but qp = {qp}, codim = {codim}")));
        }
    }
    if eps == 0 {
        out.push(Certificate::MinimalDegree { py: model.dim_x + 1 });
    }
    if eps == 1 || eps == 2 {
        if qp + 1 != codim {
            return Err(fail("small deficiency", format!("eps = {eps} but qp = {qp}, codim = {codim}")));
        }
    }
    if qp + 1 == codim && (eps == 1 || eps == 2 || acm) {
        out.push(Certificate::NearlyMinimal { qp, py: acm.then_some(model.dim_x + 2) });
    }
    if let Some(s) = strand {
        if qp < s.ell {
            return Err(fail("qp >= strand length", format!("qp = {qp} < ell = {}", s.ell)));
        }
        out.push(Certificate::StrandLength { qp, ell: s.ell });
    }
    Ok(out)
}

/// Polygon boundary count minus three, via Pick's formula.
fn boundary_prediction(a: &LatticeConfig) -> Option<usize> {
    if a.d() != 2 || a.affine_dim() != 2 || lattice_points(a.points()).ok()?.len() != a.len() {
        return None;
    }
    let vol = normalized_volume(a).ok()? as usize;
    (2 * a.len()).checked_sub(vol + 2)?.checked_sub(3)
}

/// Runs every applicable computation and assembles the report.
pub fn full_report(model: &VarietyModel, config: &ReportConfig) -> Result<PyBoundsReport> {
    let n = model.n;
    let codim = model.codim();
    let dim_i2 = model.dim_i2();
    let dim_r2 = binomial(n + 2, 2) - dim_i2;
    let eps = quadratic_deficiency(codim, dim_i2)?;
    let mut assumptions = Vec::new();
    let mut warnings = Vec::new();

    let degree = match &model.source {
        ModelSource::Toric(a) if a.affine_dim() > 0 => Some(normalized_volume(a)?),
        _ => None,
    };

    let qp = if model.irreducible {
        let seq = kappa_sequence(model, config.trials, config.seed)?;
        if !seq.agreement {
            warnings.push(format!("trials disagree: {:?}", seq.per_trial));
        }
        assumptions.push(format!(
            "qp from {} random chains (seed {}); generic points assumed",
            config.trials, config.seed
        ));
        QpValue::Exact(seq.qp())
    } else {
        let search = qp_upper_search(model, config.max_gamma.unwrap_or(n + 1), config.trials, config.seed)?;
        match (search.status.clone(), search.k) {
            (SearchStatus::Found, Some(k)) if search.is_exact() => QpValue::Exact(k),
            (SearchStatus::Found, Some(k)) => QpValue::Upper(k),
            _ => {
                warnings.push("no witness found within the search limit".into());
                QpValue::Unknown
            }
        }
    };

    let strand = if !model.nondegenerate {
        warnings.push("degenerate model: Koszul strand skipped".into());
        None
    } else if n + 1 > MAX_VARIABLES {
        warnings.push(format!("more than {MAX_VARIABLES} variables: Koszul strand skipped"));
        None
    } else {
        let s = linear_strand(model, config.p_max.unwrap_or(n).min(n), config.budget)?;
        if s.truncated {
            warnings.push("Koszul strand truncated: ell and gl_index are lower bounds".into());
        }
        Some(s)
    };

    let mut uppers = Vec::new();
    if model.nondegenerate {
        if dim_i2 > 0 {
            uppers.push(UpperBound { value: convex_bound(dim_r2), provenance: Provenance::Convex, note: None });
        }
        if let Some(s) = &strand {
            // a truncated strand gives a lower bound on g, so the bound stays valid
            uppers.push(UpperBound {
                value: gl_bound(n, s.gl_index, codim),
                provenance: Provenance::GreenLazarsfeld,
                note: Some(format!("gl_index {}", s.gl_index)),
            });
        }
        match scroll_bound(model) {
            Ok(b) => uppers.push(b),
            Err(Error::NotApplicable(why)) if model.kind != ModelKind::PointSet => warnings.push(why),
            Err(Error::NotApplicable(_)) => {}
            Err(e) => return Err(e),
        }
    } else {
        warnings.push("degenerate model: upper bounds need a non-degenerate variety".into());
    }

    let mut certificates = Vec::new();
    let mut lower = None;
    let certified_model = model.irreducible && model.nondegenerate;
    match qp {
        QpValue::Exact(k) if certified_model => {
            lower = Some(LowerBound { value: qp_lower_bound(n, k), advisory: false });
            certificates = classify_extremal(model, k, eps, degree, strand.as_ref(), config.acm)?;
            if config.acm {
                assumptions.push("arithmetically Cohen-Macaulay (user supplied)".into());
            }
        }
        QpValue::Exact(k) | QpValue::Upper(k) => {
            lower = Some(LowerBound { value: qp_lower_bound(n, k), advisory: true });
        }
        QpValue::Unknown => {}
    }
    if model.kind != ModelKind::PointSet {
        assumptions.push("totally real: rational points are Zariski dense".into());
    }

    if let ModelSource::Toric(a) = &model.source {
        if let Some((base, k)) = as_prism(a) {
            if let Ok(p) = prism_invariants(&base, k) {
                if let Some(q) = qp.exact() {
                    if q != p.qp {
                        return Err(Error::Inconsistent {
                            theorem: "prism formula".into(),
                            detail: format!("computed qp = {q}, formula {}", p.qp),
                        });
                    }
                }
                uppers.push(UpperBound {
                    value: p.py,
                    provenance: Provenance::PrismFormula,
                    note: Some(format!("base with {} points, height {k}", base.len())),
                });
                certificates.push(Certificate::Prism(p));
            }
        }
    }

    let upper = uppers.iter().map(|u| u.value).min();
    let mut lo = lower.filter(|l| !l.advisory).map_or(1, |l| l.value);
    let mut hi = upper;
    for py in certificates.iter().filter_map(Certificate::py) {
        lo = lo.max(py);
        hi = Some(hi.map_or(py, |h| h.min(py)));
    }
    if let Some(h) = hi {
        if lo > h {
            return Err(Error::Inconsistent {
                theorem: "lower bound <= upper bounds".into(),
                detail: format!("lower {lo} exceeds upper {h}"),
            });
        }
    }

    let gl_prediction = match &model.source {
        ModelSource::Toric(a) => boundary_prediction(a),
        _ => None,
    };
    if let (Some(pred), Some(s)) = (gl_prediction, &strand) {
        if s.gl_index != GlIndex::Finite(pred) && !s.truncated {
            warnings.push(format!("boundary-count predictor gives {pred}, computed gl_index {}", s.gl_index));
        }
    }

    Ok(PyBoundsReport {
        kind: model.kind,
        n,
        dim_x: model.dim_x,
        codim,
        dim_i2,
        dim_r2,
        eps,
        degree,
        qp,
        strand,
        lower,
        uppers,
        certificates,
        interval: (lo, hi),
        gl_prediction,
        assumptions,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{graph_model, toric_model};
    use crate::polytopes::{prism, simplex_triangle};

    fn upper(r: &PyBoundsReport, p: Provenance) -> Option<usize> {
        r.uppers.iter().find(|u| u.provenance == p).map(|u| u.value)
    }

    #[test]
    fn formulas() {
        assert_eq!(convex_bound(25), 6);
        assert_eq!(convex_bound(27), 6);
        assert_eq!(convex_bound(3), 1);
        assert_eq!(convex_bound(1), 0);
        assert_eq!(gl_bound(9, GlIndex::Finite(2), 8), 8);
        assert_eq!(gl_bound(5, GlIndex::Infinite, 3), 3);
        assert_eq!(qp_lower_bound(5, 3), 3);
        assert_eq!(quadratic_deficiency(2, 3).unwrap(), 0);
        assert_eq!(quadratic_deficiency(7, 27).unwrap(), 1);
        assert!(quadratic_deficiency(1, 2).is_err());
    }

    #[test]
    fn convex_bound_is_tight() {
        for d in 1..200 {
            let r = convex_bound(d);
            assert!(binomial(r + 1, 2) < d && d <= binomial(r + 2, 2));
        }
    }

    #[test]
    fn prism_formula() {
        let tri = simplex_triangle(1);
        assert_eq!(prism_invariants(&tri, 2).unwrap(), PrismInvariants { qp: 5, py: 4, ell: 5 });
        assert!(prism_invariants(&tri, 1).is_err());
        let sq = LatticeConfig::new(vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(prism_invariants(&sq, 3).unwrap().qp, 11);
        let seg = LatticeConfig::new(vec![vec![0], vec![1]]).unwrap();
        assert!(matches!(prism_invariants(&seg, 5), Err(Error::NotApplicable(_))));
        let (b, k) = as_prism(&prism(&tri, 2).unwrap()).unwrap();
        assert_eq!((b.len(), k), (3, 2));
    }

    #[test]
    fn petersen_report() {
        let r = full_report(&graph_model(&GraphSpec::petersen()).unwrap(), &ReportConfig::default()).unwrap();
        assert_eq!(upper(&r, Provenance::Convex), Some(6));
        assert_eq!(upper(&r, Provenance::GreenLazarsfeld), Some(8));
        assert_eq!(upper(&r, Provenance::Treewidth), Some(5));
        assert_eq!(r.interval.1, Some(5));
        assert!(r.lower.map_or(true, |l| l.advisory));
    }

    #[test]
    fn cycle_report() {
        let r = full_report(&graph_model(&GraphSpec::cycle(6)).unwrap(), &ReportConfig::default()).unwrap();
        assert_eq!(upper(&r, Provenance::GreenLazarsfeld), Some(3));
        assert_eq!(upper(&r, Provenance::Treewidth), Some(3));
    }

    #[test]
    fn veronese_reports() {
        let v2 = full_report(&toric_model(&simplex_triangle(2)).unwrap(), &ReportConfig::default()).unwrap();
        assert_eq!(v2.interval, (3, Some(3)));
        assert_eq!(v2.eps, 0);
        assert!(v2.certificates.contains(&Certificate::MinimalDegree { py: 3 }));
        assert_eq!(v2.gl_prediction, Some(3));

        let v3 = full_report(&toric_model(&simplex_triangle(3)).unwrap(), &ReportConfig::default()).unwrap();
        assert_eq!(v3.qp, QpValue::Exact(6));
        assert_eq!(v3.eps, 1);
        assert_eq!(v3.lower, Some(LowerBound { value: 4, advisory: false }));
        assert_eq!(upper(&v3, Provenance::ScrollLineCover), Some(5));
        assert!(v3.certificates.iter().any(|c| matches!(c, Certificate::NearlyMinimal { qp: 6, .. })));
    }

    #[test]
    fn twisted_cubic_certificate() {
        let tc = toric_model(&LatticeConfig::new(vec![vec![0], vec![1], vec![2], vec![3]]).unwrap()).unwrap();
        let r = full_report(&tc, &ReportConfig::default()).unwrap();
        assert_eq!(r.degree, Some(3));
        assert_eq!(r.interval, (2, Some(2)));
        assert!(r.certificates.contains(&Certificate::StrandLength { qp: 2, ell: 2 }));
    }

    #[test]
    fn violated_implication_is_reported() {
        let tc = toric_model(&LatticeConfig::new(vec![vec![0], vec![1], vec![2], vec![3]]).unwrap()).unwrap();
        let err = classify_extremal(&tc, 1, 0, Some(3), None, false).unwrap_err();
        assert!(matches!(err, Error::Inconsistent { ref theorem, .. } if theorem == "minimal degree"));
    }
}
