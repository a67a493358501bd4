//! Finite quotients, coset actions, congruence chains and fiber products.
//!
//! Finite groups are carried only as generator permutations. A point `x` is
//! acted on from the right: `x · g`. For a regular action, point `x` is
//! identified with the unique group element sending the basepoint `0` to `x`.

use std::collections::VecDeque;
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;
use thiserror::Error;

use crate::graph::SimplicialGraph;

/// Default bound on the number of coset points.
pub const DEFAULT_DEGREE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum QuotientError {
    #[error("image of {vertex} is not a bijection of 0..{degree}")]
    NotBijection { vertex: String, degree: usize },
    #[error("image of {vertex} has degree {found}, expected {expected}")]
    DegreeMismatch {
        vertex: String,
        expected: usize,
        found: usize,
    },
    #[error("expected {expected} generator images, found {found}")]
    ImageCount { expected: usize, found: usize },
    #[error("no image given for vertex {0}")]
    MissingImage(String),
    #[error("image given for unknown vertex {0}")]
    UnknownVertex(String),
    #[error("images of adjacent vertices {0} and {1} do not commute")]
    CommutationViolation(String, String),
    #[error("action is not transitive (orbit sizes {0:?})")]
    NotTransitive(Vec<usize>),
    #[error("action is transitive but not regular; use a coset action instead")]
    NotRegular,
    #[error("degree {degree} exceeds the cap of {cap}")]
    DegreeCapExceeded { degree: String, cap: usize },
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("chain moduli must increase with each dividing the next ({prev} then {next})")]
    ChainDivisibility { prev: u64, next: u64 },
    #[error("chain certificate fails at step {step}: {reason}")]
    BrokenChain { step: usize, reason: String },
    #[error("identification of quotients is invalid: {0}")]
    IsoInvalid(String),
    #[error("malformed quotient description: {0}")]
    Malformed(String),
}

impl QuotientError {
    pub fn code(&self) -> &'static str {
        match self {
            QuotientError::NotBijection { .. } => "quotient.not_bijection",
            QuotientError::DegreeMismatch { .. } => "quotient.degree_mismatch",
            QuotientError::ImageCount { .. } => "quotient.image_count",
            QuotientError::MissingImage(_) => "quotient.missing_image",
            QuotientError::UnknownVertex(_) => "quotient.unknown_vertex",
            QuotientError::CommutationViolation(..) => "quotient.commutation_violation",
            QuotientError::NotTransitive(_) => "quotient.not_transitive",
            QuotientError::NotRegular => "quotient.not_regular",
            QuotientError::DegreeCapExceeded { .. } => "resource.degree_cap",
            QuotientError::BadModulus(_) => "quotient.bad_modulus",
            QuotientError::ChainDivisibility { .. } => "quotient.chain_divisibility",
            QuotientError::BrokenChain { .. } => "quotient.broken_chain",
            QuotientError::IsoInvalid(_) => "quotient.iso_invalid",
            QuotientError::Malformed(_) => "quotient.malformed",
        }
    }

    pub fn is_resource_cap(&self) -> bool {
        matches!(self, QuotientError::DegreeCapExceeded { .. })
    }
}

/// Permutation of `0..n` in one-line image notation: `self[x]` is `x · self`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    /// Returns `None` unless `images` is a bijection of `0..images.len()`.
    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return None;
            }
            seen[x] = true;
        }
        Some(Perm(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.0[x as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.apply(x)).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(x, &y)| x as u32 == y)
    }

    pub fn commutes_with(&self, other: &Perm) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(x, &y)| other.apply(y) == self.apply(other.apply(x as u32)))
    }

    pub fn pow(&self, k: u64) -> Perm {
        let mut out = Perm::identity(self.degree());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = out.then(&base);
            }
            base = base.then(&base);
            k >>= 1;
        }
        out
    }

    /// Order as the lcm of cycle lengths.
    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.0.len()];
        let mut order = 1u64;
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] as usize;
                len += 1;
            }
            order = num_integer::lcm(order, len);
        }
        order
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.0)
    }
}

/// Sizes of the orbits of the group generated by `gens` on `0..degree`,
/// ordered by smallest point.
pub fn orbit_sizes(degree: usize, gens: &[Perm]) -> Vec<usize> {
    let mut seen = vec![false; degree];
    let mut sizes = Vec::new();
    for start in 0..degree {
        if !seen[start] {
            sizes.push(orbit_of(start as u32, gens, &mut seen).len());
        }
    }
    sizes
}

fn orbit_of(start: u32, gens: &[Perm], seen: &mut [bool]) -> Vec<u32> {
    let mut orbit = vec![start];
    seen[start as usize] = true;
    let mut i = 0;
    while i < orbit.len() {
        let x = orbit[i];
        for g in gens {
            let y = g.apply(x);
            if !seen[y as usize] {
                seen[y as usize] = true;
                orbit.push(y);
            }
        }
        i += 1;
    }
    orbit
}

/// Transitive action of a RAAG on a finite set of cosets; the stabilizer
/// of the basepoint is the modelled finite-index subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetAction {
    degree: usize,
    images: Vec<Perm>,
    basepoint: u32,
}

impl CosetAction {
    /// Validates degrees, commutation along edges and transitivity.
    pub fn new(graph: &SimplicialGraph, images: Vec<Perm>) -> Result<Self, QuotientError> {
        let degree = images.first().map_or(1, Perm::degree);
        let action = CosetAction {
            degree,
            images,
            basepoint: 0,
        };
        action.validate(graph)?;
        Ok(action)
    }

    /// Restricts an action to the orbit of `basepoint`, renumbering that
    /// orbit in discovery order with the basepoint as point 0.
    pub fn from_orbit(
        graph: &SimplicialGraph,
        images: &[Perm],
        basepoint: u32,
    ) -> Result<Self, QuotientError> {
        let degree = images.first().map_or(1, Perm::degree);
        let mut seen = vec![false; degree];
        let orbit = orbit_of(basepoint, images, &mut seen);
        let mut pos = vec![u32::MAX; degree];
        for (i, &x) in orbit.iter().enumerate() {
            pos[x as usize] = i as u32;
        }
        let restricted = images
            .iter()
            .map(|p| Perm(orbit.iter().map(|&x| pos[p.apply(x) as usize]).collect()))
            .collect();
        CosetAction::new(graph, restricted)
    }

    /// The action of the whole group on a single point.
    pub fn trivial(graph: &SimplicialGraph) -> Self {
        CosetAction {
            degree: 1,
            images: vec![Perm::identity(1); graph.vertex_count()],
            basepoint: 0,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn basepoint(&self) -> u32 {
        self.basepoint
    }

    pub fn image(&self, v: usize) -> &Perm {
        &self.images[v]
    }

    pub fn images(&self) -> &[Perm] {
        &self.images
    }

    pub fn validate(&self, graph: &SimplicialGraph) -> Result<(), QuotientError> {
        if self.images.len() != graph.vertex_count() {
            return Err(QuotientError::ImageCount {
                expected: graph.vertex_count(),
                found: self.images.len(),
            });
        }
        for (v, p) in self.images.iter().enumerate() {
            if p.degree() != self.degree {
                return Err(QuotientError::DegreeMismatch {
                    vertex: graph.label(v).to_string(),
                    expected: self.degree,
                    found: p.degree(),
                });
            }
            if Perm::from_images(p.0.clone()).is_none() {
                return Err(QuotientError::NotBijection {
                    vertex: graph.label(v).to_string(),
                    degree: self.degree,
                });
            }
        }
        for (a, b) in graph.edges() {
            if !self.images[a].commutes_with(&self.images[b]) {
                return Err(QuotientError::CommutationViolation(
                    graph.label(a).to_string(),
                    graph.label(b).to_string(),
                ));
            }
        }
        let sizes = orbit_sizes(self.degree, &self.images);
        if sizes.len() != 1 {
            return Err(QuotientError::NotTransitive(sizes));
        }
        Ok(())
    }

    /// True when every pair of generator images commutes.
    pub fn has_abelian_image(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, a)| self.images[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    /// Map `x ↦ c(x)` commuting with the action and sending the basepoint
    /// to `target`, if one exists. For a regular action it is left
    /// multiplication by the element at `target`.
    fn equivariant_map(&self, target: u32) -> Option<Vec<u32>> {
        let mut map = vec![u32::MAX; self.degree];
        map[self.basepoint as usize] = target;
        let mut queue = VecDeque::from([self.basepoint]);
        while let Some(x) = queue.pop_front() {
            let cx = map[x as usize];
            for g in &self.images {
                let (y, cy) = (g.apply(x), g.apply(cx));
                match map[y as usize] {
                    u32::MAX => {
                        map[y as usize] = cy;
                        queue.push_back(y);
                    }
                    prev if prev != cy => return None,
                    _ => {}
                }
            }
        }
        Some(map)
    }

    /// A transitive action is regular exactly when the equivariant maps
    /// sending the basepoint to each of its generator neighbours exist.
    pub fn is_regular(&self) -> bool {
        self.images
            .iter()
            .all(|g| self.equivariant_map(g.apply(self.basepoint)).is_some())
    }

    /// Shortest generator word (vertex indices) carrying the basepoint to
    /// each point.
    pub fn words(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<Option<(u32, usize)>> = vec![None; self.degree];
        let mut seen = vec![false; self.degree];
        seen[self.basepoint as usize] = true;
        let mut order = vec![self.basepoint];
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            for (v, g) in self.images.iter().enumerate() {
                let y = g.apply(x);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    parent[y as usize] = Some((x, v));
                    order.push(y);
                }
            }
            i += 1;
        }
        let mut words: Vec<Vec<usize>> = vec![Vec::new(); self.degree];
        for &x in &order[1..] {
            let (p, v) = parent[x as usize].expect("reached points have parents");
            let mut w = words[p as usize].clone();
            w.push(v);
            words[x as usize] = w;
        }
        words
    }

    pub fn apply_word(&self, x: u32, word: &[usize]) -> u32 {
        word.iter().fold(x, |y, &v| self.images[v].apply(y))
    }

    /// `{"degree": N, "images": {label: [...]}}` in vertex order.
    pub fn to_json(&self, graph: &SimplicialGraph) -> Value {
        let doc = ActionDoc {
            graph,
            action: self,
        };
        serde_json::to_value(doc).expect("action serializes")
    }

    /// Reads the JSON form written by [`to_json`](Self::to_json).
    pub fn from_json(graph: &SimplicialGraph, doc: &Value) -> Result<Self, QuotientError> {
        CosetAction::new(graph, images_from_json(graph, doc)?)
    }
}

struct ActionDoc<'a> {
    graph: &'a SimplicialGraph,
    action: &'a CosetAction,
}

impl Serialize for ActionDoc<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        struct Images<'a>(&'a ActionDoc<'a>);
        impl Serialize for Images<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.action.images.len()))?;
                for (v, p) in self.0.action.images.iter().enumerate() {
                    map.serialize_entry(self.0.graph.label(v), p)?;
                }
                map.end()
            }
        }
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("degree", &self.action.degree)?;
        map.serialize_entry("images", &Images(self))?;
        map.end()
    }
}

fn images_from_json(graph: &SimplicialGraph, doc: &Value) -> Result<Vec<Perm>, QuotientError> {
    let malformed = |m: &str| QuotientError::Malformed(m.to_string());
    let degree = doc
        .get("degree")
        .and_then(Value::as_u64)
        .ok_or_else(|| malformed("missing integer \"degree\""))? as usize;
    let images = doc
        .get("images")
        .and_then(Value::as_object)
        .ok_or_else(|| malformed("missing object \"images\""))?;
    for key in images.keys() {
        if graph.index_of(key).is_none() {
            return Err(QuotientError::UnknownVertex(key.clone()));
        }
    }
    let mut perms = Vec::with_capacity(graph.vertex_count());
    for label in graph.labels() {
        let raw = images
            .get(label)
            .ok_or_else(|| QuotientError::MissingImage(label.clone()))?;
        let list: Vec<u32> = serde_json::from_value(raw.clone())
            .map_err(|e| QuotientError::Malformed(format!("image of {label}: {e}")))?;
        if list.len() != degree {
            return Err(QuotientError::DegreeMismatch {
                vertex: label.clone(),
                expected: degree,
                found: list.len(),
            });
        }
        let perm = Perm::from_images(list).ok_or_else(|| QuotientError::NotBijection {
            vertex: label.clone(),
            degree,
        })?;
        perms.push(perm);
    }
    Ok(perms)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum QuotientOrigin {
    /// Abelianization reduced mod `m`.
    Congruence { m: u64 },
    Custom,
}

/// Surjection from a RAAG onto a finite group `Q`, stored as the right
/// regular action of `Q` on itself. Its kernel is the basepoint stabilizer.
#[derive(Debug, Clone)]
pub struct FiniteQuotient {
    source: SimplicialGraph,
    action: CosetAction,
    origin: QuotientOrigin,
}

impl FiniteQuotient {
    pub fn source(&self) -> &SimplicialGraph {
        &self.source
    }

    /// `|Q|`, equal to the index of the kernel.
    pub fn order(&self) -> usize {
        self.action.degree
    }

    pub fn origin(&self) -> QuotientOrigin {
        self.origin
    }

    pub fn image(&self, v: usize) -> &Perm {
        self.action.image(v)
    }

    /// Right regular action of the quotient, degree `|Q|`.
    pub fn regular_action(&self) -> CosetAction {
        self.action.clone()
    }

    /// Re-runs every validity check, including regularity.
    pub fn validate(&self) -> Result<(), QuotientError> {
        self.action.validate(&self.source)?;
        if !self.action.is_regular() {
            return Err(QuotientError::NotRegular);
        }
        Ok(())
    }

    /// Left multiplication by the element at `point`.
    pub fn left_translation(&self, point: u32) -> Perm {
        Perm(
            self.action
                .equivariant_map(point)
                .expect("regular actions admit left translations"),
        )
    }

    pub fn to_json(&self) -> Value {
        self.action.to_json(&self.source)
    }
}

/// Quotient onto the trivial group.
pub fn trivial_quotient(graph: &SimplicialGraph) -> FiniteQuotient {
    FiniteQuotient {
        source: graph.clone(),
        action: CosetAction::trivial(graph),
        origin: QuotientOrigin::Custom,
    }
}

/// `G → (Z/m)^V`, each vertex translating its own coordinate. Point
/// `Σ x_v m^v` encodes the tuple `(x_v)`, first vertex fastest.
pub fn make_congruence(
    graph: &SimplicialGraph,
    m: u64,
    cap: usize,
) -> Result<FiniteQuotient, QuotientError> {
    if m < 2 {
        return Err(QuotientError::BadModulus(m));
    }
    let n = graph.vertex_count() as u32;
    let degree = m
        .checked_pow(n)
        .filter(|&d| d <= cap as u64)
        .ok_or_else(|| QuotientError::DegreeCapExceeded {
            degree: format!("{m}^{n}"),
            cap,
        })? as usize;
    let m = m as usize;
    let images = (0..graph.vertex_count())
        .map(|v| {
            let stride = m.pow(v as u32);
            Perm(
                (0..degree)
                    .map(|x| {
                        let digit = (x / stride) % m;
                        let y = if digit == m - 1 {
                            x - (m - 1) * stride
                        } else {
                            x + stride
                        };
                        y as u32
                    })
                    .collect(),
            )
        })
        .collect();
    Ok(FiniteQuotient {
        source: graph.clone(),
        action: CosetAction {
            degree,
            images,
            basepoint: 0,
        },
        origin: QuotientOrigin::Congruence { m: m as u64 },
    })
}

/// Validates user-supplied generator images (one per vertex, in vertex
/// order) as the regular action of a finite quotient.
pub fn custom_quotient(
    graph: &SimplicialGraph,
    images: Vec<Perm>,
) -> Result<FiniteQuotient, QuotientError> {
    let action = CosetAction::new(graph, images)?;
    if !action.is_regular() {
        return Err(QuotientError::NotRegular);
    }
    Ok(FiniteQuotient {
        source: graph.clone(),
        action,
        origin: QuotientOrigin::Custom,
    })
}

/// Reads `{"degree": N, "images": {...}}` as a custom quotient.
pub fn quotient_from_json(graph: &SimplicialGraph, doc: &Value) -> Result<FiniteQuotient, QuotientError> {
    custom_quotient(graph, images_from_json(graph, doc)?)
}

/// Nested congruence quotients `m_1 | m_2 | ...`. Each step carries the
/// reduction map `Q_{n+1} → Q_n` on points, which certifies
/// `ker Q_{n+1} ⊆ ker Q_n`.
#[derive(Debug, Clone)]
pub struct QuotientChain {
    quotients: Vec<FiniteQuotient>,
    reductions: Vec<Vec<u32>>,
}

impl QuotientChain {
    pub fn quotients(&self) -> &[FiniteQuotient] {
        &self.quotients
    }

    pub fn indices(&self) -> Vec<usize> {
        self.quotients.iter().map(FiniteQuotient::order).collect()
    }

    /// Checks that every reduction map is surjective, fixes the basepoint
    /// and intertwines the generator images.
    pub fn verify(&self) -> Result<(), QuotientError> {
        for (step, red) in self.reductions.iter().enumerate() {
            let (lo, hi) = (&self.quotients[step], &self.quotients[step + 1]);
            let broken = |reason: &str| QuotientError::BrokenChain {
                step,
                reason: reason.to_string(),
            };
            if red.len() != hi.order() {
                return Err(broken("reduction has wrong domain size"));
            }
            let mut hit = vec![false; lo.order()];
            red.iter().for_each(|&y| hit[y as usize] = true);
            if !hit.iter().all(|&h| h) {
                return Err(broken("reduction is not surjective"));
            }
            if red[hi.action.basepoint as usize] != lo.action.basepoint {
                return Err(broken("reduction moves the basepoint"));
            }
            for v in 0..lo.source.vertex_count() {
                let ok = (0..hi.order() as u32)
                    .all(|x| red[hi.image(v).apply(x) as usize] == lo.image(v).apply(red[x as usize]));
                if !ok {
                    return Err(broken(&format!(
                        "reduction does not commute with {}",
                        lo.source.label(v)
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Congruence chain for moduli where each divides the next.
pub fn chain(
    graph: &SimplicialGraph,
    moduli: &[u64],
    cap: usize,
) -> Result<QuotientChain, QuotientError> {
    for w in moduli.windows(2) {
        if w[1] <= w[0] || w[1] % w[0] != 0 {
            return Err(QuotientError::ChainDivisibility {
                prev: w[0],
                next: w[1],
            });
        }
    }
    let quotients = moduli
        .iter()
        .map(|&m| make_congruence(graph, m, cap))
        .collect::<Result<Vec<_>, _>>()?;
    let n = graph.vertex_count() as u32;
    let reductions = moduli
        .windows(2)
        .map(|w| {
            let (lo, hi) = (w[0] as usize, w[1] as usize);
            (0..hi.pow(n))
                .map(|x| {
                    let mut rest = x;
                    let mut y = 0;
                    let mut stride = 1;
                    for _ in 0..n {
                        y += (rest % hi) % lo * stride;
                        rest /= hi;
                        stride *= lo;
                    }
                    y as u32
                })
                .collect()
        })
        .collect();
    let chain = QuotientChain {
        quotients,
        reductions,
    };
    chain.verify()?;
    Ok(chain)
}

/// Certificate that `S ∩ G_i` is non-trivial: `vertex^exponent` lies in
/// the kernel of the quotient map of factor `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FullnessWitness {
    pub factor: usize,
    pub vertex: String,
    pub exponent: u64,
}

/// Fiber product `S = {(a, b) : f(a) = g(b)}` of two quotients with a
/// common target, as the basepoint stabilizer of an action of
/// `G_1 × G_2` on `Q`.
#[derive(Debug, Clone)]
pub struct FiberProduct {
    pub graph: SimplicialGraph,
    pub action: CosetAction,
    /// Number of vertices of the first factor; they come first in `graph`.
    pub left_vertices: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubdirectCheck {
    pub index: usize,
    /// `[G_i : p_i(S)]` for each factor.
    pub projection_index: [usize; 2],
    pub projections_surjective: bool,
    pub fullness: Vec<FullnessWitness>,
    pub full: bool,
}

impl FiberProduct {
    fn factor_images(&self, factor: usize) -> &[Perm] {
        let imgs = self.action.images();
        if factor == 0 {
            &imgs[..self.left_vertices]
        } else {
            &imgs[self.left_vertices..]
        }
    }

    /// Projection onto factor `i` is surjective iff the other factor alone
    /// acts transitively; in general `[G_i : p_i(S)]` is the number of
    /// orbits of the other factor. Fullness is witnessed by a power of a
    /// generator whose image is trivial.
    pub fn check_subdirect(&self) -> SubdirectCheck {
        let degree = self.action.degree();
        let mut projection_index = [0; 2];
        for (i, slot) in projection_index.iter_mut().enumerate() {
            let other = self.factor_images(1 - i);
            let mut seen = vec![false; degree];
            let orbit = orbit_of(self.action.basepoint(), other, &mut seen).len();
            *slot = degree / orbit;
        }
        let mut fullness = Vec::new();
        for factor in 0..2 {
            let offset = if factor == 0 { 0 } else { self.left_vertices };
            let witness = self
                .factor_images(factor)
                .iter()
                .enumerate()
                .find_map(|(v, p)| {
                    let exponent = p.order();
                    p.pow(exponent).is_identity().then(|| FullnessWitness {
                        factor,
                        vertex: self.graph.label(v + offset).to_string(),
                        exponent,
                    })
                });
            fullness.extend(witness);
        }
        SubdirectCheck {
            index: degree,
            projection_index,
            projections_surjective: projection_index == [1, 1],
            full: fullness.len() == 2,
            fullness,
        }
    }
}

/// Builds the fiber product of `q1: G_1 → Q` and `q2: G_2 → Q'` where
/// `iso[y]` is the point of `Q` identified with point `y` of `Q'`.
///
/// `G_1` acts by `x ↦ f(a)^{-1} x` and `G_2` by `x ↦ x g(b)`, so the
/// basepoint stabilizer is exactly `S`.
pub fn fiber_action(
    q1: &FiniteQuotient,
    q2: &FiniteQuotient,
    iso: &[u32],
    cap: usize,
) -> Result<FiberProduct, QuotientError> {
    let n = q1.order();
    if n > cap {
        return Err(QuotientError::DegreeCapExceeded {
            degree: n.to_string(),
            cap,
        });
    }
    let bad = |m: String| QuotientError::IsoInvalid(m);
    if q2.order() != n {
        return Err(bad(format!("orders differ ({n} vs {})", q2.order())));
    }
    let phi = Perm::from_images(iso.to_vec())
        .filter(|p| p.degree() == n)
        .ok_or_else(|| bad("not a bijection of the quotient points".into()))?;
    if phi.apply(0) != 0 {
        return Err(bad("identity is not sent to identity".into()));
    }
    // φ(y · s) = φ(y) · φ(s) for every point y and generator s of Q'
    let words = q1.action.words();
    for w in 0..q2.source.vertex_count() {
        let s = q2.image(w);
        let target_word = &words[phi.apply(s.apply(0)) as usize];
        for y in 0..n as u32 {
            if phi.apply(s.apply(y)) != q1.action.apply_word(phi.apply(y), target_word) {
                return Err(bad(format!(
                    "not a homomorphism at generator {}",
                    q2.source.label(w)
                )));
            }
        }
    }
    let graph = q1.source.join_relabeled(&q2.source);
    let phi_inv = phi.inverse();
    let mut images = Vec::with_capacity(graph.vertex_count());
    for v in 0..q1.source.vertex_count() {
        images.push(q1.left_translation(q1.image(v).apply(0)).inverse());
    }
    for w in 0..q2.source.vertex_count() {
        images.push(phi_inv.then(q2.image(w)).then(&phi));
    }
    let action = CosetAction::new(&graph, images)?;
    Ok(FiberProduct {
        graph,
        action,
        left_vertices: q1.source.vertex_count(),
    })
}
