//! Canonical desingularization of conical complexes.
//!
//! Two phases share one engine. The barycentric phase subdivides, from the
//! top dimension down, every irreducible singular cell of the input at its
//! canonical barycenter; the result is simplicial. The minimal phase then
//! repeatedly subdivides at order-minimal small vectors until every cell is
//! regular. Each batch of centers is one marking batch, which is what makes
//! the minimal vectors unique.
//!
//! The relative algorithm in [`crate::relative`] plugs a different
//! [`Policy`] into the same engine.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use thiserror::Error;

use crate::complex::{
    check_map, CellId, ComplexError, ComplexMap, ConicalComplex, MapKind, StarCenter,
};
use crate::cone::ConeError;
use crate::exactlin::{solve_integral, IntMatrix, IntVector};
use crate::marking::{Marking, MarkingError};
use crate::par::{self, Exec};

/// Environment variable overriding the minimal-phase iteration guard.
pub const GUARD_ENV: &str = "FANFORGE_SEED_GUARD";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Marking(#[from] MarkingError),
    #[error("iteration guard of {limit} batches exceeded")]
    GuardExceeded { limit: u64 },
    #[error("termination invariant did not decrease at step {step}")]
    NotDecreasing { step: usize },
    #[error("no canonical batch of centers exists")]
    NoCanonicalBatch,
    #[error("cell {0} is not a simplicial pair")]
    NotSimplicialPair(CellId),
    #[error("cell {0} is not balanced")]
    NotBalanced(CellId),
    #[error("omega cell {0} is not simplicial")]
    NonSimplicialOmega(CellId),
    #[error("omega order is not total on cell {0}")]
    OrderNotTotal(CellId),
    #[error("cell {0} lies in omega")]
    InOmega(CellId),
    #[error("cell {0} is not relatively irreducible")]
    NotRelativelyIrreducible(CellId),
    #[error("trace does not fit the complex: {0}")]
    Replay(String),
    #[error("maps of kind {0} do not transport traces")]
    MapKindUnsupported(MapKind),
    #[error("invalid map: {0}")]
    InvalidMap(String),
}

/// Histogram of maximal-cell determinants above 1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DetPolynomial(pub BTreeMap<BigInt, usize>);

/// Histogram of `(dim ω, det(σ,ω))` over maximal cells that are not regular pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MuPolynomial(pub BTreeMap<(usize, BigInt), usize>);

/// Compares two histograms at the largest key where they differ.
fn cmp_histograms<K: Ord>(a: &BTreeMap<K, usize>, b: &BTreeMap<K, usize>) -> Ordering {
    let keys: BTreeSet<&K> = a.keys().chain(b.keys()).collect();
    for key in keys.into_iter().rev() {
        let (x, y) = (
            a.get(key).copied().unwrap_or(0),
            b.get(key).copied().unwrap_or(0),
        );
        if x != y {
            return x.cmp(&y);
        }
    }
    Ordering::Equal
}

impl DetPolynomial {
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `∑ a_i·i`.
    pub fn weight(&self) -> BigInt {
        self.0.iter().map(|(d, c)| d * BigInt::from(*c)).sum()
    }
}

impl PartialOrd for DetPolynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DetPolynomial {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_histograms(&self.0, &other.0)
    }
}

impl MuPolynomial {
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> BigInt {
        self.0.iter().map(|((_, d), c)| d * BigInt::from(*c)).sum()
    }
}

impl PartialOrd for MuPolynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MuPolynomial {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_histograms(&self.0, &other.0)
    }
}

/// The termination invariant recorded before each step; `None` when it is
/// not defined yet (some maximal cell is not simplicial).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Invariant {
    Pdet(Option<DetPolynomial>),
    Pmu(Option<MuPolynomial>),
}

impl Invariant {
    /// `Some(true)` when `self > other`; `None` when either is undefined.
    pub fn exceeds(&self, other: &Invariant) -> Option<bool> {
        match (self, other) {
            (Invariant::Pdet(Some(a)), Invariant::Pdet(Some(b))) => Some(a > b),
            (Invariant::Pmu(Some(a)), Invariant::Pmu(Some(b))) => Some(a > b),
            _ => None,
        }
    }

    fn to_json(&self) -> (&'static str, Value) {
        match self {
            Invariant::Pdet(p) => (
                "pdet",
                p.as_ref().map_or(Value::Null, |p| {
                    Value::Array(p.0.iter().map(|(d, c)| json!([d.to_string(), c])).collect())
                }),
            ),
            Invariant::Pmu(p) => (
                "pmu",
                p.as_ref().map_or(Value::Null, |p| {
                    Value::Array(
                        p.0.iter()
                            .map(|((i, d), c)| json!([i, d.to_string(), c]))
                            .collect(),
                    )
                }),
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Phase {
    Barycentric,
    Minimal,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Barycentric => "barycentric",
            Phase::Minimal => "minimal",
        }
    }
}

/// A center expressed in the input complex: the smallest input cell whose
/// relative interior holds it, with the carrier's vertices and the vector in
/// that cell's lattice coordinates. Ambient images are kept for output.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TraceCenter {
    pub cell: CellId,
    pub vector: IntVector,
    pub carrier_vertices: Vec<IntVector>,
    pub ambient_vector: IntVector,
    pub ambient_carrier: Vec<IntVector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub phase: Phase,
    pub centers: Vec<TraceCenter>,
    pub invariant: Invariant,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubdivisionTrace {
    pub steps: Vec<TraceStep>,
}

fn int_strings(v: &IntVector) -> Value {
    Value::Array(
        v.entries()
            .iter()
            .map(|x| Value::String(x.to_string()))
            .collect(),
    )
}

impl SubdivisionTrace {
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn centers(&self) -> impl Iterator<Item = (Phase, &TraceCenter)> {
        self.steps
            .iter()
            .flat_map(|s| s.centers.iter().map(move |c| (s.phase, c)))
    }

    /// One JSON object per step, one step per line.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            let centers: Vec<Value> = step
                .centers
                .iter()
                .map(|c| {
                    json!({
                        "cell": c.cell.0,
                        "carrier_vertices": c.ambient_carrier.iter().map(int_strings).collect::<Vec<_>>(),
                        "vector": int_strings(&c.ambient_vector),
                    })
                })
                .collect();
            let (key, inv) = step.invariant.to_json();
            let mut obj = serde_json::Map::new();
            obj.insert("phase".into(), Value::String(step.phase.as_str().into()));
            obj.insert("centers".into(), Value::Array(centers));
            obj.insert(key.into(), inv);
            out.push_str(&Value::Object(obj).to_string());
            out.push('\n');
        }
        out
    }

    /// Same phases and centers step by step, ignoring the recorded invariants.
    pub fn same_centers(&self, other: &SubdivisionTrace) -> bool {
        self.steps.len() == other.steps.len()
            && self
                .steps
                .iter()
                .zip(&other.steps)
                .all(|(a, b)| a.phase == b.phase && a.centers == b.centers)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ResolveOptions {
    pub exec: Exec,
    /// Overrides the default minimal-phase iteration bound.
    pub guard: Option<u64>,
}

impl ResolveOptions {
    /// Default options with the guard taken from `FANFORGE_SEED_GUARD` when set.
    pub fn from_env() -> Result<ResolveOptions, String> {
        let guard = match std::env::var(GUARD_ENV) {
            Ok(s) => Some(
                s.trim()
                    .parse::<u64>()
                    .map_err(|e| format!("{GUARD_ENV}: {e}"))?,
            ),
            Err(_) => None,
        };
        Ok(ResolveOptions {
            guard,
            ..ResolveOptions::default()
        })
    }

    pub fn sequential() -> ResolveOptions {
        ResolveOptions {
            exec: Exec::Sequential,
            guard: None,
        }
    }
}

/// Output of a resolution run.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub complex: ConicalComplex,
    pub trace: SubdivisionTrace,
    pub marking: Marking,
    /// Every cell's smallest containing input cell, with the matrix from the
    /// cell's lattice coordinates to that input cell's.
    pub ancestry: BTreeMap<CellId, (CellId, IntMatrix)>,
}

/// Histogram of determinants of the maximal cells.
pub fn det_polynomial(k: &ConicalComplex) -> Result<DetPolynomial, ResolveError> {
    let mut out = BTreeMap::new();
    for id in k.maximal_cells() {
        let det = k.cone(id).det()?;
        if det > BigInt::from(1) {
            *out.entry(det).or_insert(0) += 1;
        }
    }
    Ok(DetPolynomial(out))
}

/// The per-algorithm choices plugged into the engine.
pub(crate) trait Policy: Sync {
    /// Whether a cell of the input (still present) is a barycentric center carrier.
    fn is_target(&self, k: &ConicalComplex, id: CellId) -> bool;
    fn barycenter(&self, k: &ConicalComplex, id: CellId) -> Result<IntVector, ResolveError>;
    /// Small-vector candidates of a maximal cell, or `None` when it is done.
    fn candidates(
        &self,
        k: &ConicalComplex,
        id: CellId,
    ) -> Result<Option<Vec<IntVector>>, ResolveError>;
    fn invariant(&self, k: &ConicalComplex) -> Invariant;
    fn guard(&self, k: &ConicalComplex) -> u64;
}

struct Absolute;

impl Policy for Absolute {
    fn is_target(&self, k: &ConicalComplex, id: CellId) -> bool {
        k.cone(id).is_irreducible_singular()
    }

    fn barycenter(&self, k: &ConicalComplex, id: CellId) -> Result<IntVector, ResolveError> {
        Ok(k.cone(id).canonical_barycenter()?)
    }

    fn candidates(
        &self,
        k: &ConicalComplex,
        id: CellId,
    ) -> Result<Option<Vec<IntVector>>, ResolveError> {
        let cone = k.cone(id);
        if cone.is_regular() {
            return Ok(None);
        }
        Ok(Some(cone.small_vectors()?))
    }

    fn invariant(&self, k: &ConicalComplex) -> Invariant {
        Invariant::Pdet(det_polynomial(k).ok())
    }

    fn guard(&self, k: &ConicalComplex) -> u64 {
        det_polynomial(k).map_or(0, |p| p.weight().to_u64().unwrap_or(u64::MAX))
    }
}

pub(crate) struct Engine<'a, P: Policy> {
    policy: &'a P,
    opts: ResolveOptions,
    input: &'a ConicalComplex,
    pub(crate) state: Resolution,
    // chosen center per maximal cell; stays valid while the cell survives
    chosen: BTreeMap<CellId, Option<StarCenter>>,
    invariant: Option<Invariant>,
}

impl<'a, P: Policy> Engine<'a, P> {
    pub(crate) fn new(
        policy: &'a P,
        input: &'a ConicalComplex,
        marking: Marking,
        opts: ResolveOptions,
    ) -> Self {
        let ancestry = input
            .cells()
            .iter()
            .map(|(&id, c)| (id, (id, IntMatrix::identity(c.cone.dim()))))
            .collect();
        let state = Resolution {
            complex: input.clone(),
            trace: SubdivisionTrace::default(),
            marking,
            ancestry,
        };
        Engine {
            policy,
            opts,
            input,
            state,
            chosen: BTreeMap::new(),
            invariant: None,
        }
    }

    fn trace_center(&self, c: &StarCenter) -> TraceCenter {
        let (cell, m) = &self.state.ancestry[&c.carrier];
        let input = self.input.cone(*cell);
        let vector = m.mul_vec(&c.vector);
        let mut carrier_vertices: Vec<IntVector> = self
            .state
            .complex
            .cone(c.carrier)
            .vertices()
            .iter()
            .map(|u| m.mul_vec(u))
            .collect();
        carrier_vertices.sort_by_cached_key(|u| input.to_ambient(u));
        TraceCenter {
            cell: *cell,
            ambient_vector: input.to_ambient(&vector),
            ambient_carrier: carrier_vertices
                .iter()
                .map(|u| input.to_ambient(u))
                .collect(),
            vector,
            carrier_vertices,
        }
    }

    pub(crate) fn step(
        &mut self,
        phase: Phase,
        centers: Vec<StarCenter>,
    ) -> Result<(), ResolveError> {
        let invariant = match self.invariant.take() {
            Some(i) => i,
            None => self.policy.invariant(&self.state.complex),
        };
        let mut trace_centers: Vec<TraceCenter> =
            centers.iter().map(|c| self.trace_center(c)).collect();
        trace_centers.sort();
        let (parent, new_rays) = self.state.complex.star_subdivide_in_place(&centers)?;
        let created: Vec<_> = parent
            .iter()
            .map(|(&id, (p, b))| {
                let (o, m) = &self.state.ancestry[p];
                (id, (*o, m.mul(b)))
            })
            .collect();
        let k = &self.state.complex;
        self.state.ancestry.retain(|id, _| k.contains(*id));
        self.state.ancestry.extend(created);
        self.state.marking = self
            .state
            .marking
            .restrict_to(k)
            .extend_with_batch(&new_rays);
        self.state.trace.steps.push(TraceStep {
            phase,
            centers: trace_centers,
            invariant,
        });
        Ok(())
    }

    pub(crate) fn barycentric_phase(&mut self) -> Result<(), ResolveError> {
        let bound = self.input.next_id();
        for d in (2..=self.input.dim()).rev() {
            let k = &self.state.complex;
            let targets: Vec<CellId> = k
                .cells_of_dim(d)
                .into_iter()
                .filter(|id| id.0 < bound && self.policy.is_target(k, *id))
                .collect();
            if targets.is_empty() {
                continue;
            }
            let centers = par::try_map(self.opts.exec, &targets, |&id| {
                self.policy.barycenter(k, id).map(|vector| StarCenter {
                    carrier: id,
                    vector,
                })
            })?;
            self.step(Phase::Barycentric, centers)?;
        }
        Ok(())
    }

    /// Order-minimal candidate of every unfinished maximal cell.
    fn minimal_vectors(&mut self) -> Result<BTreeMap<CellId, StarCenter>, ResolveError> {
        let k = &self.state.complex;
        let maximal = k.maximal_cells();
        self.chosen
            .retain(|id, _| k.contains(*id) && k.cofaces(*id).is_empty());
        let fresh: Vec<CellId> = maximal
            .iter()
            .copied()
            .filter(|id| !self.chosen.contains_key(id))
            .collect();
        let found = par::try_map(
            self.opts.exec,
            &fresh,
            |&id| -> Result<Option<StarCenter>, ResolveError> {
                let Some(cands) = self.policy.candidates(k, id)? else {
                    return Ok(None);
                };
                let v = self.state.marking.minimal_among(k, id, &cands)?;
                let (carrier, vector) = k
                    .carrier(id, &v)
                    .ok_or(ResolveError::Replay("carrier face missing".into()))?;
                Ok(Some(StarCenter { carrier, vector }))
            },
        )?;
        self.chosen.extend(fresh.into_iter().zip(found));
        Ok(self
            .chosen
            .iter()
            .filter_map(|(id, c)| c.clone().map(|c| (*id, c)))
            .collect())
    }

    /// A center is taken when every maximal cell over its carrier selects it.
    /// Any two taken centers then have disjoint stars, and the set depends on
    /// the marked complex alone.
    fn canonical_batch(&self, chosen: &BTreeMap<CellId, StarCenter>) -> Vec<StarCenter> {
        let k = &self.state.complex;
        let mut batch: BTreeSet<StarCenter> = BTreeSet::new();
        for c in chosen.values() {
            let star = k.star(c.carrier).expect("carrier exists");
            if star
                .iter()
                .filter(|s| k.cofaces(**s).is_empty())
                .all(|s| chosen.get(s) == Some(c))
            {
                batch.insert(c.clone());
            }
        }
        batch.into_iter().collect()
    }

    pub(crate) fn minimal_phase(&mut self) -> Result<(), ResolveError> {
        let limit = self
            .opts
            .guard
            .unwrap_or_else(|| self.policy.guard(&self.state.complex));
        let mut rounds = 0u64;
        loop {
            let chosen = self.minimal_vectors()?;
            if chosen.is_empty() {
                return Ok(());
            }
            rounds += 1;
            if rounds > limit {
                return Err(ResolveError::GuardExceeded { limit });
            }
            let batch = self.canonical_batch(&chosen);
            if batch.is_empty() {
                return Err(ResolveError::NoCanonicalBatch);
            }
            self.step(Phase::Minimal, batch)?;
            let before = &self
                .state
                .trace
                .steps
                .last()
                .expect("step recorded")
                .invariant;
            let after = self.policy.invariant(&self.state.complex);
            if before.exceeds(&after) != Some(true) {
                return Err(ResolveError::NotDecreasing {
                    step: self.state.trace.steps.len() - 1,
                });
            }
            self.invariant = Some(after);
        }
    }
}

/// Canonical resolution: barycentric phase, then minimal phase.
pub fn resolve(k: &ConicalComplex, opts: ResolveOptions) -> Result<Resolution, ResolveError> {
    let mut engine = Engine::new(&Absolute, k, Marking::new(), opts);
    engine.barycentric_phase()?;
    engine.minimal_phase()?;
    Ok(engine.state)
}

/// Only the barycentric phase; the result is simplicial and regularly marked.
pub fn barycentric_phase(
    k: &ConicalComplex,
    opts: ResolveOptions,
) -> Result<Resolution, ResolveError> {
    let mut engine = Engine::new(&Absolute, k, Marking::new(), opts);
    engine.barycentric_phase()?;
    Ok(engine.state)
}

/// Only the minimal phase, starting from a simplicial regularly marked complex.
pub fn minimal_phase(
    k: &ConicalComplex,
    marking: Marking,
    opts: ResolveOptions,
) -> Result<Resolution, ResolveError> {
    let mut engine = Engine::new(&Absolute, k, marking, opts);
    engine.minimal_phase()?;
    Ok(engine.state)
}

/// Re-applies a trace to the complex it was recorded on (or to the target of
/// a pushed trace) and returns the resulting complex.
pub fn replay(k: &ConicalComplex, trace: &SubdivisionTrace) -> Result<Resolution, ResolveError> {
    replay_steps(k, trace, |_, _, _| {})
}

/// Like [`replay`], calling `inspect` with the complex before each step, the
/// step, and its centers located in that complex.
pub fn replay_steps<F>(
    k: &ConicalComplex,
    trace: &SubdivisionTrace,
    mut inspect: F,
) -> Result<Resolution, ResolveError>
where
    F: FnMut(&ConicalComplex, &TraceStep, &[StarCenter]),
{
    let mut engine = Engine::new(&Absolute, k, Marking::new(), ResolveOptions::sequential());
    // each live cell under (original cell, its vertices there in trace order)
    let mut keys: BTreeMap<CellId, (CellId, Vec<IntVector>)> = BTreeMap::new();
    let mut by_key: HashMap<(CellId, Vec<IntVector>), CellId> = HashMap::new();
    for step in &trace.steps {
        let current = &engine.state;
        keys.retain(|id, key| {
            let live = current.complex.contains(*id);
            if !live {
                by_key.remove(key);
            }
            live
        });
        for (id, (o, m)) in &current.ancestry {
            if keys.contains_key(id) {
                continue;
            }
            let mut verts: Vec<IntVector> = current
                .complex
                .cone(*id)
                .vertices()
                .iter()
                .map(|u| m.mul_vec(u))
                .collect();
            verts.sort_by_cached_key(|u| k.cone(*o).to_ambient(u));
            by_key.insert((*o, verts.clone()), *id);
            keys.insert(*id, (*o, verts));
        }
        let mut centers = Vec::new();
        for tc in &step.centers {
            let id = by_key
                .get(&(tc.cell, tc.carrier_vertices.clone()))
                .ok_or_else(|| {
                    ResolveError::Replay(format!("no carrier for {}", tc.ambient_vector))
                })?;
            let (_, m) = &current.ancestry[id];
            let vector = solve_integral(m, &tc.vector).ok_or_else(|| {
                ResolveError::Replay(format!("center {} not in its carrier", tc.ambient_vector))
            })?;
            centers.push(StarCenter {
                carrier: *id,
                vector,
            });
        }
        inspect(&current.complex, step, &centers);
        engine.step(step.phase, centers)?;
    }
    Ok(engine.state)
}

/// Transports a trace along a local isomorphism or regular local
/// projection. Centers whose carrier collapses are dropped, and so are steps
/// left without centers.
pub fn push_trace(
    f: &ComplexMap,
    trace: &SubdivisionTrace,
    src: &ConicalComplex,
    dst: &ConicalComplex,
) -> Result<SubdivisionTrace, ResolveError> {
    match check_map(f, src, dst) {
        Ok(MapKind::General) => return Err(ResolveError::MapKindUnsupported(MapKind::General)),
        Ok(_) => {}
        Err(v) => return Err(ResolveError::InvalidMap(v.to_string())),
    }
    let mut steps = Vec::new();
    for step in &trace.steps {
        let mut centers = Vec::new();
        for c in &step.centers {
            let (t, m) = &f.assignments[&c.cell];
            let vector = m.mul_vec(&c.vector);
            let image: Vec<IntVector> = c.carrier_vertices.iter().map(|u| m.mul_vec(u)).collect();
            let kept: Vec<IntVector> = image.into_iter().filter(|u| !u.is_zero()).collect();
            let rank = IntMatrix::from_rows(&kept, dst.cone(*t).dim()).rank();
            if vector.is_zero() || kept.len() != c.carrier_vertices.len() || rank != kept.len() {
                continue;
            }
            let cone = dst.cone(*t);
            let mut carrier_vertices = kept;
            carrier_vertices.sort_by_cached_key(|u| cone.to_ambient(u));
            centers.push(TraceCenter {
                cell: *t,
                ambient_vector: cone.to_ambient(&vector),
                ambient_carrier: carrier_vertices
                    .iter()
                    .map(|u| cone.to_ambient(u))
                    .collect(),
                vector,
                carrier_vertices,
            });
        }
        if centers.is_empty() {
            continue;
        }
        centers.sort();
        steps.push(TraceStep {
            phase: step.phase,
            centers,
            invariant: step.invariant.clone(),
        });
    }
    Ok(SubdivisionTrace { steps })
}

/// Resolves both sides of a map and checks that the pushed source trace is
/// the target trace. Returns the map kind on success.
pub fn check_functoriality(
    f: &ComplexMap,
    src: &ConicalComplex,
    dst: &ConicalComplex,
    opts: ResolveOptions,
) -> Result<(MapKind, bool), ResolveError> {
    let kind = check_map(f, src, dst).map_err(|v| ResolveError::InvalidMap(v.to_string()))?;
    if kind == MapKind::General {
        return Err(ResolveError::MapKindUnsupported(kind));
    }
    let a = resolve(src, opts)?;
    let b = resolve(dst, opts)?;
    let pushed = push_trace(f, &a.trace, src, dst)?;
    Ok((kind, pushed.same_centers(&b.trace)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> IntVector {
        IntVector::from_i64s(x)
    }

    fn fan(gens: &[&[&[i64]]]) -> ConicalComplex {
        let n = gens[0][0].len();
        let cones: Vec<Vec<IntVector>> = gens
            .iter()
            .map(|c| c.iter().map(|g| v(g)).collect())
            .collect();
        ConicalComplex::from_fan(&IntMatrix::identity(n), &cones).unwrap()
    }

    fn all_regular(k: &ConicalComplex) -> bool {
        k.maximal_cells().iter().all(|&id| k.cone(id).is_regular())
    }

    #[test]
    fn det_polynomial_examples() {
        assert!(det_polynomial(&fan(&[&[&[1, 0], &[0, 1]]]))
            .unwrap()
            .is_zero());
        let p = det_polynomial(&fan(&[&[&[1, 0], &[1, 3]]])).unwrap();
        assert_eq!(p.0, [(BigInt::from(3), 1)].into_iter().collect());
        let p = det_polynomial(&fan(&[&[&[1, 0], &[1, 2]], &[&[1, 0], &[1, -2]]])).unwrap();
        assert_eq!(p.0, [(BigInt::from(2), 2)].into_iter().collect());
    }

    #[test]
    fn regular_input_is_untouched() {
        let k = fan(&[&[&[1, 0], &[0, 1]]]);
        let r = resolve(&k, ResolveOptions::default()).unwrap();
        assert!(r.trace.is_empty());
        assert_eq!(r.complex, k);
    }

    #[test]
    fn a3_barycentric_step() {
        let k = fan(&[&[&[1, 0], &[1, 3]]]);
        let r = barycentric_phase(&k, ResolveOptions::default()).unwrap();
        assert_eq!(r.trace.steps.len(), 1);
        assert_eq!(r.trace.steps[0].centers[0].ambient_vector, v(&[2, 3]));
        assert_eq!(
            r.complex.ambient_shape(),
            vec![vec![v(&[1, 0]), v(&[2, 3])], vec![v(&[1, 3]), v(&[2, 3])]]
        );
        let dets: Vec<BigInt> = r
            .complex
            .maximal_cells()
            .iter()
            .map(|&id| r.complex.cone(id).det().unwrap())
            .collect();
        assert_eq!(dets, vec![BigInt::from(3), BigInt::from(3)]);
        assert!(r.marking.is_regularly_marked(&r.complex));
    }

    #[test]
    fn a1_resolved_by_barycenter() {
        let k = fan(&[&[&[1, 0], &[1, 2]]]);
        let r = resolve(&k, ResolveOptions::default()).unwrap();
        assert_eq!(r.trace.steps.len(), 1);
        assert_eq!(r.trace.steps[0].phase, Phase::Barycentric);
        assert!(all_regular(&r.complex));
    }

    #[test]
    fn a3_end_to_end() {
        let k = fan(&[&[&[1, 0], &[1, 3]]]);
        let r = resolve(&k, ResolveOptions::default()).unwrap();
        assert!(all_regular(&r.complex));
        let first_minimal: Vec<IntVector> = r.trace.steps[1]
            .centers
            .iter()
            .map(|c| c.ambient_vector.clone())
            .collect();
        assert_eq!(first_minimal, vec![v(&[1, 1]), v(&[1, 2])]);
        assert_eq!(r.complex.maximal_cells().len(), 4);
        assert!(r.complex.validate().is_empty());
    }

    #[test]
    fn abramovich_first_center() {
        let lattice = IntMatrix::from_i64_rows(&[vec![1, 1, 1], vec![1, -1, 0], vec![0, 0, 1]]);
        let k = ConicalComplex::from_fan(
            &lattice,
            &[vec![v(&[2, 0, 0]), v(&[0, 2, 0]), v(&[0, 0, 2])]],
        )
        .unwrap();
        let r = resolve(&k, ResolveOptions::default()).unwrap();
        assert_eq!(r.trace.steps[0].centers[0].ambient_vector, v(&[2, 2, 2]));
        assert!(all_regular(&r.complex));
    }

    #[test]
    fn replay_reproduces_resolution() {
        let k = fan(&[&[&[1, 0], &[1, 5]], &[&[1, 0], &[2, -3]]]);
        let r = resolve(&k, ResolveOptions::default()).unwrap();
        let again = replay(&k, &r.trace).unwrap();
        assert_eq!(again.complex, r.complex);
        assert_eq!(again.trace, r.trace);
    }

    #[test]
    fn guard_is_enforced() {
        let k = fan(&[&[&[1, 0], &[1, 7]]]);
        let opts = ResolveOptions {
            guard: Some(0),
            ..ResolveOptions::default()
        };
        assert_eq!(
            resolve(&k, opts).unwrap_err(),
            ResolveError::GuardExceeded { limit: 0 }
        );
    }

    #[test]
    fn identity_push_is_identity() {
        let k = fan(&[&[&[1, 0], &[1, 5]]]);
        let r = resolve(&k, ResolveOptions::default()).unwrap();
        let pushed = push_trace(&ComplexMap::identity(&k), &r.trace, &k, &k).unwrap();
        assert_eq!(pushed, r.trace);
    }

    #[test]
    fn json_lines_shape() {
        let k = fan(&[&[&[1, 0], &[1, 3]]]);
        let r = resolve(&k, ResolveOptions::default()).unwrap();
        let text = r.trace.to_json_lines();
        let first: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(first["phase"], "barycentric");
        assert_eq!(first["centers"][0]["vector"], json!(["2", "3"]));
        assert_eq!(first["pdet"], json!([["3", 1]]));
    }
}
