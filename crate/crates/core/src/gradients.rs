//! Predicted homology-growth limits, measured ratio sequences and verdicts.
//!
//! Predictions come from closed formulas in `χ(G)`, `ρ` and the reduced
//! Betti numbers of the flag complex. Measurements are exact ratios
//! `dim_K H_j(B) / [G : B]` along a chain of finite-index subgroups. A
//! verdict never asserts a limit; it records an exact oracle identity or a
//! strictly monotone approach.

use num_rational::Ratio;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::cover::{cover_homology, kunneth_oracle, ns_rank_oracle, CoverError};
use crate::graph::{classify, cliques, product_graph, SimplicialGraph};
use crate::hierarchy::{chi_tree, decompose, DecompositionTree};
use crate::homology::{euler_char_cliques, ExactField, FlagComplex};
use crate::quotients::{CosetAction, QuotientChain, QuotientOrigin};

pub type Rational = Ratio<i64>;

fn ser_ratio<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(r)
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GradientError {
    #[error("prediction not applicable: {0}")]
    NotApplicable(String),
    #[error("requested degree {requested} exceeds the top cell dimension {top}")]
    DegreeOutOfRange { requested: usize, top: usize },
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

impl GradientError {
    pub fn code(&self) -> &'static str {
        match self {
            GradientError::NotApplicable(_) => "gradient.not_applicable",
            GradientError::DegreeOutOfRange { .. } => "gradient.degree_out_of_range",
            GradientError::Inconsistent(_) => "gradient.inconsistent",
            GradientError::Cover(e) => e.code(),
        }
    }
}

/// Which closed formula a predicted limit comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitSource {
    /// Rank gradient `-χ` of a limit group over a coherent RAAG.
    RankGradient,
    /// `H_1` growth `-χ` over a coherent (chordal) RAAG.
    CoherentH1,
    /// Vanishing growth in degrees `>= 2` over a coherent RAAG.
    CoherentHigher,
    /// `(-1)^ρ χ` in degree `ρ` and zero elsewhere, for products of `ρ`
    /// centerless non-abelian factors.
    ProductRho,
    /// `b̄_{j-1}(L, K)` of the flag complex.
    FlagBetti,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredictedLimit {
    pub degree: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub limit: Rational,
    pub source: LimitSource,
}

/// A gradient that is predicted but never measured here.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnmeasuredGradient {
    pub name: String,
    #[serde(serialize_with = "ser_ratio")]
    pub limit: Rational,
    pub source: LimitSource,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorSummary {
    pub vertices: usize,
    pub edges: usize,
    pub chi: i64,
    pub centerless_nonabelian: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradientPrediction {
    pub field: ExactField,
    pub chi: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<usize>,
    /// The prediction each degree is judged against.
    pub limits: Vec<PredictedLimit>,
    /// Flag-complex prediction, always present for comparison.
    pub flag_betti: Vec<PredictedLimit>,
    /// Degrees where `limits` and `flag_betti` disagree.
    pub conflicts: Vec<usize>,
    pub unmeasured: Vec<UnmeasuredGradient>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<FactorSummary>>,
    pub notes: Vec<String>,
}

impl GradientPrediction {
    pub fn limit_at(&self, degree: usize) -> Option<&PredictedLimit> {
        self.limits.iter().find(|l| l.degree == degree)
    }
}

pub enum PredictInput<'a> {
    Single(&'a SimplicialGraph),
    /// Explicit direct product of Droms RAAGs.
    Product(&'a [SimplicialGraph]),
}

/// Number of factors that are non-abelian with trivial center.
pub fn rho_of_product(factors: &[DecompositionTree]) -> usize {
    factors.iter().filter(|t| t.is_centerless_nonabelian()).count()
}

fn int(v: i64) -> Rational {
    Rational::from_integer(v)
}

fn flag_predictions(graph: &SimplicialGraph, field: ExactField) -> Vec<PredictedLimit> {
    let betti = FlagComplex::new(graph).reduced_betti_numbers(field);
    let top = cliques(graph).clique_number();
    (1..=top)
        .map(|j| PredictedLimit {
            degree: j,
            limit: int(betti.get(j - 1).copied().unwrap_or(0) as i64),
            source: LimitSource::FlagBetti,
        })
        .collect()
}

fn conflicts(primary: &[PredictedLimit], flag: &[PredictedLimit]) -> Vec<usize> {
    primary
        .iter()
        .zip(flag)
        .filter(|(a, b)| a.source != LimitSource::FlagBetti && a.limit != b.limit)
        .map(|(a, _)| a.degree)
        .collect()
}

pub fn predict(input: PredictInput<'_>, field: ExactField) -> Result<GradientPrediction, GradientError> {
    match input {
        PredictInput::Single(graph) => Ok(predict_single(graph, field)),
        PredictInput::Product(factors) => predict_product(factors, field),
    }
}

fn predict_single(graph: &SimplicialGraph, field: ExactField) -> GradientPrediction {
    let chi = euler_char_cliques(graph);
    let flag = flag_predictions(graph, field);
    let class = classify(graph);
    let mut notes = Vec::new();
    let mut unmeasured = Vec::new();
    let limits = if class.is_chordal {
        notes.push("coherent RAAG (chordal defining graph)".to_string());
        unmeasured.push(UnmeasuredGradient {
            name: "rank_gradient".into(),
            limit: int(-chi),
            source: LimitSource::RankGradient,
        });
        unmeasured.push(UnmeasuredGradient {
            name: "deficiency_gradient".into(),
            limit: int(chi),
            source: LimitSource::RankGradient,
        });
        for k in 2..=flag.len() {
            unmeasured.push(UnmeasuredGradient {
                name: format!("volume_gradient_{k}"),
                limit: int(0),
                source: LimitSource::RankGradient,
            });
        }
        flag.iter()
            .map(|f| PredictedLimit {
                degree: f.degree,
                limit: if f.degree == 1 { int(-chi) } else { int(0) },
                source: if f.degree == 1 {
                    LimitSource::CoherentH1
                } else {
                    LimitSource::CoherentHigher
                },
            })
            .collect()
    } else {
        notes.push("not chordal: only the flag-complex formula applies".to_string());
        flag.clone()
    };
    let conflicts = conflicts(&limits, &flag);
    if !conflicts.is_empty() {
        notes.push("coherent and flag-complex predictions disagree; no verdict at those degrees".into());
    }
    GradientPrediction {
        field,
        chi,
        rho: None,
        limits,
        flag_betti: flag,
        conflicts,
        unmeasured,
        factors: None,
        notes,
    }
}

fn predict_product(factors: &[SimplicialGraph], field: ExactField) -> Result<GradientPrediction, GradientError> {
    if factors.is_empty() {
        return Err(GradientError::NotApplicable("empty product".into()));
    }
    let trees = factors
        .iter()
        .enumerate()
        .map(|(i, f)| {
            decompose(f).map_err(|e| GradientError::NotApplicable(format!("factor {}: {e}", i + 1)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let rho = rho_of_product(&trees);
    let chi: i64 = trees.iter().map(chi_tree).product();
    let joined = product_graph(factors);
    let chi_cells = euler_char_cliques(&joined);
    if chi != chi_cells {
        return Err(GradientError::Inconsistent(format!(
            "product of factor Euler characteristics {chi} differs from cell count {chi_cells}"
        )));
    }
    let flag = flag_predictions(&joined, field);
    let sign = if rho % 2 == 0 { 1 } else { -1 };
    let limits: Vec<PredictedLimit> = flag
        .iter()
        .map(|f| PredictedLimit {
            degree: f.degree,
            limit: if f.degree == rho { int(sign * chi) } else { int(0) },
            source: LimitSource::ProductRho,
        })
        .collect();
    let conflicts = conflicts(&limits, &flag);
    let mut notes = vec![format!(
        "direct product of {} Droms factors, {rho} centerless non-abelian",
        factors.len()
    )];
    if !conflicts.is_empty() {
        notes.push("product and flag-complex predictions disagree; no verdict at those degrees".into());
    }
    let summaries = factors
        .iter()
        .zip(&trees)
        .map(|(g, t)| FactorSummary {
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            chi: chi_tree(t),
            centerless_nonabelian: t.is_centerless_nonabelian(),
        })
        .collect();
    Ok(GradientPrediction {
        field,
        chi,
        rho: Some(rho),
        limits,
        flag_betti: flag,
        conflicts,
        unmeasured: Vec::new(),
        factors: Some(summaries),
        notes,
    })
}

/// One finite-index subgroup along a chain.
#[derive(Debug, Clone)]
pub struct ChainStep {
    pub action: CosetAction,
    pub origin: QuotientOrigin,
}

/// Steps of a certified nested congruence chain.
pub fn steps_from_chain(chain: &QuotientChain) -> Vec<ChainStep> {
    chain
        .quotients()
        .iter()
        .map(|q| ChainStep {
            action: q.regular_action(),
            origin: q.origin(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MeasuredRow {
    pub step: usize,
    pub index: usize,
    pub degree: usize,
    pub dim: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub ratio: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepSummary {
    pub step: usize,
    pub index: usize,
    pub origin: QuotientOrigin,
    pub dims: Vec<usize>,
    /// `Σ (−1)^j dim H_j`
    pub euler_sum: i64,
    /// `N · χ(G)`
    pub euler_expected: i64,
    pub euler_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Measurement {
    pub field: ExactField,
    pub nested: bool,
    pub rows: Vec<MeasuredRow>,
    pub steps: Vec<StepSummary>,
    #[serde(skip)]
    clique_counts: Vec<usize>,
}

/// Cover homology at every step, reported for degrees `0..=max_degree`.
pub fn measure(
    graph: &SimplicialGraph,
    steps: &[ChainStep],
    nested: bool,
    field: ExactField,
    max_degree: usize,
) -> Result<Measurement, GradientError> {
    let counts = cliques(graph).counts();
    let top = counts.len() - 1;
    if max_degree > top {
        return Err(GradientError::DegreeOutOfRange {
            requested: max_degree,
            top,
        });
    }
    let chi = euler_char_cliques(graph);
    let dims: Vec<Vec<usize>> = steps
        .par_iter()
        .map(|s| cover_homology(graph, &s.action, field))
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for (i, (step, d)) in steps.iter().zip(dims).enumerate() {
        let n = step.action.degree();
        for (j, &dim) in d.iter().enumerate().take(max_degree + 1) {
            rows.push(MeasuredRow {
                step: i,
                index: n,
                degree: j,
                dim,
                ratio: Rational::new(dim as i64, n as i64),
            });
        }
        let euler_sum = d
            .iter()
            .enumerate()
            .map(|(j, &x)| if j % 2 == 0 { x as i64 } else { -(x as i64) })
            .sum();
        summaries.push(StepSummary {
            step: i,
            index: n,
            origin: step.origin,
            dims: d,
            euler_sum,
            euler_expected: n as i64 * chi,
            euler_ok: euler_sum == n as i64 * chi,
        });
    }
    Ok(Measurement {
        field,
        nested,
        rows,
        steps: summaries,
        clique_counts: counts,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    ExactMatchViaOracle,
    MonotoneTrendTowardPrediction,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportPolicy {
    /// Fewest steps for any verdict other than `Inconclusive`.
    pub min_steps: usize,
}

impl Default for ReportPolicy {
    fn default() -> Self {
        ReportPolicy { min_steps: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeVerdict {
    pub degree: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub prediction: Rational,
    pub verdict: Verdict,
    /// Strictly decreasing distance to the prediction over all steps.
    pub monotone: bool,
    /// Closed formula reproducing every measured row at this degree.
    pub oracle: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GradientReport {
    pub prediction: GradientPrediction,
    pub rows: Vec<MeasuredRow>,
    pub steps: Vec<StepSummary>,
    pub verdicts: Vec<DegreeVerdict>,
    pub caveats: Vec<String>,
}

impl GradientReport {
    pub fn verdict_at(&self, degree: usize) -> Option<&DegreeVerdict> {
        self.verdicts.iter().find(|v| v.degree == degree)
    }

    pub fn ratios_at(&self, degree: usize) -> Vec<Rational> {
        self.rows
            .iter()
            .filter(|r| r.degree == degree)
            .map(|r| r.ratio)
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// Rows only, header `step,index,degree,dim,ratio`.
    pub fn rows_csv(&self) -> String {
        let mut out = String::from("step,index,degree,dim,ratio\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{},{}\n", r.step, r.index, r.degree, r.dim, r.ratio));
        }
        out
    }
}

/// Expected homology dimensions of one step from a closed formula.
fn oracle_dims(
    prediction: &GradientPrediction,
    measurement: &Measurement,
    step: &StepSummary,
) -> Option<(&'static str, Vec<u64>)> {
    let n = step.index as u64;
    let counts = &measurement.clique_counts;
    let top = counts.len() - 1;
    let pad = |mut v: Vec<u64>| {
        v.resize(top + 1, 0);
        v
    };
    if top == 1 {
        // edgeless graph: a subgroup of index N in F_k has rank 1 + N(k − 1)
        let k = counts[1] as u64;
        return Some(("nielsen_schreier", pad(vec![1, ns_rank_oracle(k, n)])));
    }
    if let (Some(factors), QuotientOrigin::Congruence { m }) = (&prediction.factors, step.origin) {
        if factors.len() >= 2 && factors.iter().all(|f| f.edges == 0) {
            let mut dims = vec![1u64];
            let mut total = 1u64;
            for f in factors {
                let ni = m.checked_pow(f.vertices as u32)?;
                total = total.checked_mul(ni)?;
                dims = kunneth_oracle(&dims, &[1, ns_rank_oracle(f.vertices as u64, ni)]);
            }
            if total == n {
                return Some(("kunneth", pad(dims)));
            }
        }
    }
    if n == 1 {
        return Some(("clique_counts", counts.iter().map(|&c| c as u64).collect()));
    }
    None
}

/// Renders a verdict for every predicted degree.
pub fn report(
    prediction: &GradientPrediction,
    measurement: &Measurement,
    policy: ReportPolicy,
) -> GradientReport {
    let oracles: Vec<Option<(&'static str, Vec<u64>)>> = measurement
        .steps
        .iter()
        .map(|s| oracle_dims(prediction, measurement, s))
        .collect();
    let measured_degrees: Vec<usize> = measurement.rows.iter().map(|r| r.degree).collect();
    let mut verdicts = Vec::new();
    for limit in &prediction.limits {
        if !measured_degrees.contains(&limit.degree) {
            continue;
        }
        let rows: Vec<&MeasuredRow> = measurement
            .rows
            .iter()
            .filter(|r| r.degree == limit.degree)
            .collect();
        let distances: Vec<Rational> = rows.iter().map(|r| (r.ratio - limit.limit).abs()).collect();
        let monotone = rows.len() >= 2 && distances.windows(2).all(|w| w[1] < w[0]);
        let oracle = oracle_match(&oracles, &rows);
        let conflict = prediction.conflicts.contains(&limit.degree);
        let (verdict, note) = if conflict {
            (
                Verdict::Inconclusive,
                Some("predictions disagree at this degree".to_string()),
            )
        } else if rows.len() < policy.min_steps {
            (
                Verdict::Inconclusive,
                Some(format!("fewer than {} steps", policy.min_steps)),
            )
        } else if monotone {
            (Verdict::MonotoneTrendTowardPrediction, None)
        } else if oracle.is_some() {
            (Verdict::ExactMatchViaOracle, None)
        } else {
            (Verdict::Inconclusive, None)
        };
        verdicts.push(DegreeVerdict {
            degree: limit.degree,
            prediction: limit.limit,
            verdict,
            monotone,
            oracle,
            note,
        });
    }
    let mut caveats = vec!["finite-level evidence only: limits are not certified".to_string()];
    let congruence = measurement
        .steps
        .iter()
        .any(|s| matches!(s.origin, QuotientOrigin::Congruence { .. }));
    if congruence {
        caveats.push(
            "proxy chain: congruence quotients are normal but their kernels do not intersect to the trivial group"
                .to_string(),
        );
    }
    if !measurement.nested && measurement.steps.len() > 1 {
        caveats.push("steps are separate quotients, not a certified nested chain".to_string());
    }
    if measurement.steps.iter().any(|s| !s.euler_ok) {
        caveats.push("Euler characteristic check failed on at least one step".to_string());
    }
    GradientReport {
        prediction: prediction.clone(),
        rows: measurement.rows.clone(),
        steps: measurement.steps.clone(),
        verdicts,
        caveats,
    }
}

fn oracle_match(
    oracles: &[Option<(&'static str, Vec<u64>)>],
    rows: &[&MeasuredRow],
) -> Option<&'static str> {
    let mut name = None;
    for row in rows {
        let (n, dims) = oracles.get(row.step)?.as_ref()?;
        if dims.get(row.degree).copied() != Some(row.dim as u64) {
            return None;
        }
        match name {
            None => name = Some(*n),
            Some(prev) if prev != *n => return None,
            _ => {}
        }
    }
    name
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::quotients::{chain, make_congruence, DEFAULT_DEGREE_CAP};

    const Q: ExactField = ExactField::Rationals;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn congruence_steps(g: &SimplicialGraph, moduli: &[u64]) -> Vec<ChainStep> {
        moduli
            .iter()
            .map(|&m| {
                let q = make_congruence(g, m, DEFAULT_DEGREE_CAP).unwrap();
                ChainStep {
                    action: q.regular_action(),
                    origin: q.origin(),
                }
            })
            .collect()
    }

    #[test]
    fn rho_examples() {
        let f2 = decompose(&SimplicialGraph::edgeless(2)).unwrap();
        let star = decompose(&parse_graph("vertices: c a b\nedges: c-a c-b").unwrap()).unwrap();
        let z = decompose(&SimplicialGraph::edgeless(1)).unwrap();
        assert_eq!(rho_of_product(&[f2.clone(), f2.clone()]), 2);
        assert_eq!(rho_of_product(&[f2, star]), 1);
        assert_eq!(rho_of_product(&[z]), 0);
    }

    #[test]
    fn free_group_prediction() {
        let p = predict(PredictInput::Single(&SimplicialGraph::edgeless(2)), Q).unwrap();
        assert_eq!(p.chi, -1);
        assert_eq!(p.limits.len(), 1);
        assert_eq!(p.limits[0].limit, r(1, 1));
        assert_eq!(p.limits[0].source, LimitSource::CoherentH1);
        assert!(p.conflicts.is_empty());
        assert_eq!(p.unmeasured[0].limit, r(1, 1));
    }

    #[test]
    fn chordal_graph_predictions_coincide() {
        let g = parse_graph("vertices: a b c d e\nedges: a-b b-c a-c c-d d-e").unwrap();
        let p = predict(PredictInput::Single(&g), Q).unwrap();
        assert!(p.conflicts.is_empty());
        assert_eq!(p.limit_at(2).unwrap().limit, r(0, 1));
        assert_eq!(p.limit_at(3).unwrap().source, LimitSource::CoherentHigher);
    }

    #[test]
    fn product_of_free_groups_prediction() {
        let f2 = parse_graph("vertices: a b").unwrap();
        let p = predict(PredictInput::Product(&[f2.clone(), f2]), Q).unwrap();
        assert_eq!((p.chi, p.rho), (1, Some(2)));
        assert_eq!(p.limit_at(1).unwrap().limit, r(0, 1));
        assert_eq!(p.limit_at(2).unwrap().limit, r(1, 1));
        assert_eq!(p.limit_at(2).unwrap().source, LimitSource::ProductRho);
        assert!(p.conflicts.is_empty());
    }

    #[test]
    fn square_as_single_graph_uses_flag_formula() {
        let p = predict(PredictInput::Single(&SimplicialGraph::cycle(4)), ExactField::PrimeField(2)).unwrap();
        assert_eq!(p.limits, p.flag_betti);
        assert_eq!(p.limit_at(1).unwrap().limit, r(0, 1));
        assert_eq!(p.limit_at(2).unwrap().limit, r(1, 1));
    }

    #[test]
    fn non_droms_factor_is_rejected() {
        let err = predict(PredictInput::Product(&[SimplicialGraph::path(4)]), Q).unwrap_err();
        assert!(matches!(err, GradientError::NotApplicable(_)));
    }

    #[test]
    fn free_group_chain_measurement() {
        let f2 = SimplicialGraph::edgeless(2);
        let c = chain(&f2, &[2, 4], DEFAULT_DEGREE_CAP).unwrap();
        let m = measure(&f2, &steps_from_chain(&c), true, Q, 1).unwrap();
        let ratios: Vec<Rational> = m.rows.iter().filter(|r| r.degree == 1).map(|r| r.ratio).collect();
        assert_eq!(ratios, vec![r(5, 4), r(17, 16)]);
        assert!(m.steps.iter().all(|s| s.euler_ok));
    }

    #[test]
    fn square_list_measurement() {
        let c4 = SimplicialGraph::cycle(4);
        let m = measure(&c4, &congruence_steps(&c4, &[2, 3]), false, Q, 2).unwrap();
        let ratios: Vec<Rational> = m.rows.iter().filter(|r| r.degree == 2).map(|r| r.ratio).collect();
        assert_eq!(ratios, vec![r(25, 16), r(100, 81)]);
    }

    #[test]
    fn trivial_step_measures_clique_counts() {
        let g = parse_graph("vertices: a b c\nedges: a-b b-c").unwrap();
        let steps = vec![ChainStep {
            action: CosetAction::trivial(&g),
            origin: QuotientOrigin::Custom,
        }];
        let m = measure(&g, &steps, false, Q, 2).unwrap();
        let dims: Vec<usize> = m.rows.iter().map(|r| r.dim).collect();
        assert_eq!(dims, vec![1, 3, 2]);
        assert!(matches!(
            measure(&g, &steps, false, Q, 3),
            Err(GradientError::DegreeOutOfRange { requested: 3, top: 2 })
        ));
    }

    #[test]
    fn free_group_report() {
        let f2 = SimplicialGraph::edgeless(2);
        let c = chain(&f2, &[2, 4, 8], DEFAULT_DEGREE_CAP).unwrap();
        let m = measure(&f2, &steps_from_chain(&c), true, Q, 1).unwrap();
        let p = predict(PredictInput::Single(&f2), Q).unwrap();
        let rep = report(&p, &m, ReportPolicy::default());
        assert_eq!(rep.ratios_at(1), vec![r(5, 4), r(17, 16), r(65, 64)]);
        let v = rep.verdict_at(1).unwrap();
        assert_eq!(v.verdict, Verdict::MonotoneTrendTowardPrediction);
        assert_eq!(v.oracle, Some("nielsen_schreier"));
        assert!(rep.caveats.iter().any(|c| c.starts_with("proxy chain")));
    }

    #[test]
    fn square_product_report() {
        let c4 = SimplicialGraph::cycle(4);
        let f2 = parse_graph("vertices: a b").unwrap();
        let p = predict(PredictInput::Product(&[f2.clone(), f2]), Q).unwrap();
        let m = measure(&c4, &congruence_steps(&c4, &[2, 3, 4]), false, Q, 2).unwrap();
        let rep = report(&p, &m, ReportPolicy::default());
        assert_eq!(rep.ratios_at(2), vec![r(25, 16), r(100, 81), r(289, 256)]);
        let v2 = rep.verdict_at(2).unwrap();
        assert_eq!(v2.verdict, Verdict::MonotoneTrendTowardPrediction);
        assert_eq!(v2.oracle, Some("kunneth"));
        let v1 = rep.verdict_at(1).unwrap();
        assert!(v1.monotone);
        assert!(rep.caveats.iter().any(|c| c.contains("not a certified nested chain")));
    }

    #[test]
    fn single_row_is_inconclusive() {
        let f2 = SimplicialGraph::edgeless(2);
        let p = predict(PredictInput::Single(&f2), Q).unwrap();
        let m = measure(&f2, &congruence_steps(&f2, &[2]), false, Q, 1).unwrap();
        let rep = report(&p, &m, ReportPolicy::default());
        let v = rep.verdict_at(1).unwrap();
        assert_eq!(v.verdict, Verdict::Inconclusive);
        assert_eq!(v.oracle, Some("nielsen_schreier"));
    }

    #[test]
    fn exact_oracle_without_trend() {
        let f2 = SimplicialGraph::edgeless(2);
        let p = predict(PredictInput::Single(&f2), Q).unwrap();
        let step = ChainStep {
            action: CosetAction::trivial(&f2),
            origin: QuotientOrigin::Custom,
        };
        let m = measure(&f2, &vec![step; 3], false, Q, 1).unwrap();
        let rep = report(&p, &m, ReportPolicy::default());
        let v = rep.verdict_at(1).unwrap();
        assert!(!v.monotone);
        assert_eq!(v.verdict, Verdict::ExactMatchViaOracle);
        assert_eq!(v.oracle, Some("nielsen_schreier"));
    }

    #[test]
    fn free_times_cyclic_trend() {
        let g = parse_graph("vertices: a b c\nedges: a-c b-c").unwrap();
        let f2 = parse_graph("vertices: a b").unwrap();
        let z = parse_graph("vertices: c").unwrap();
        let p = predict(PredictInput::Product(&[f2, z]), Q).unwrap();
        assert_eq!((p.chi, p.rho), (0, Some(1)));
        let m = measure(&g, &congruence_steps(&g, &[2, 3, 4]), false, Q, 2).unwrap();
        let rep = report(&p, &m, ReportPolicy::default());
        assert_eq!(rep.ratios_at(2), vec![r(5, 8), r(10, 27), r(17, 64)]);
        let v2 = rep.verdict_at(2).unwrap();
        assert_eq!(v2.verdict, Verdict::MonotoneTrendTowardPrediction);
        assert_eq!(v2.oracle, Some("kunneth"));
    }

    #[test]
    fn csv_rows() {
        let f2 = SimplicialGraph::edgeless(2);
        let p = predict(PredictInput::Single(&f2), Q).unwrap();
        let m = measure(&f2, &congruence_steps(&f2, &[2]), false, Q, 1).unwrap();
        let rep = report(&p, &m, ReportPolicy::default());
        assert_eq!(rep.rows_csv(), "step,index,degree,dim,ratio\n0,4,0,1,1/4\n0,4,1,5,5/4\n");
    }
}
