//! Conical complexes: cones glued along saturated face inclusions.
//!
//! There is no global ambient space. Each cell carries its cone in its own
//! lattice coordinates, and `faces` records every proper face `τ ≺ σ` with
//! the inclusion matrix `i_{τσ}` (shape `dim σ × dim τ`). The zero cone is an
//! ordinary cell. A fan is just the case where all cells share one ambient
//! lattice; [`ConicalComplex::from_fan`] builds the face maps for it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use im::{OrdMap, OrdSet};
use num_traits::{One, Signed};
use thiserror::Error;

use crate::cone::{Cone, ConeError};
use crate::exactlin::{
    saturated_basis, saturation_index, solve_integral, solve_rational, solve_rational_many,
    IntMatrix, IntVector, LinError,
};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CellId(pub usize);

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("unknown cell id {0}")]
    UnknownId(CellId),
    #[error("center in cell {0} is not primitive")]
    NotPrimitive(CellId),
    #[error("center is not in the relative interior of cell {0}")]
    NotInterior(CellId),
    #[error("stars of cells {0} and {1} are not disjoint")]
    StarsNotDisjoint(CellId, CellId),
    #[error("link cell {0} has no unique smallest star cell containing it")]
    NonUniqueJoin(CellId),
    #[error("cell set is not closed under faces: {0} is missing")]
    NotFaceClosed(CellId),
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Lin(#[from] LinError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub cone: Cone,
    /// Every proper face with its inclusion matrix.
    pub faces: BTreeMap<CellId, IntMatrix>,
}

/// A star subdivision center: a primitive vector (in the carrier's lattice
/// coordinates) in the relative interior of the carrier cell.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StarCenter {
    pub carrier: CellId,
    pub vector: IntVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub clause: &'static str,
    pub cells: Vec<CellId>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.cells.iter().map(ToString::to_string).collect();
        write!(
            f,
            "{}: cells [{}]: {}",
            self.clause,
            ids.join(", "),
            self.detail
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConicalComplex {
    // persistent maps: clones share structure, so copying a large complex
    // to subdivide one star costs only the star
    cells: OrdMap<CellId, Arc<Cell>>,
    cofaces: OrdMap<CellId, OrdSet<CellId>>,
    next_id: usize,
}

struct PlannedCell {
    host: CellId,
    b: IntMatrix,
    cone: Cone,
    old_faces: Vec<(CellId, IntMatrix)>,
    new_faces: Vec<(usize, IntMatrix)>,
}

/// Result of a star subdivision. `parent` sends every cell of the new complex
/// to the old cell containing it, with the matrix from new to old lattice
/// coordinates (the identity for untouched cells).
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub complex: ConicalComplex,
    pub parent: BTreeMap<CellId, (CellId, IntMatrix)>,
    /// The new ray cell of each center, in input order.
    pub new_rays: Vec<CellId>,
}

/// The sets attached to the singular locus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingSet {
    pub sing: BTreeSet<CellId>,
    pub sing_closure: BTreeSet<CellId>,
    pub reg: BTreeSet<CellId>,
}

impl ConicalComplex {
    /// Assembles a complex from cells without validating it.
    pub fn from_cells(cells: BTreeMap<CellId, Cell>) -> ConicalComplex {
        let next_id = cells.keys().next_back().map_or(0, |c| c.0 + 1);
        let cells = cells.into_iter().map(|(id, c)| (id, Arc::new(c))).collect();
        let mut k = ConicalComplex {
            cells,
            cofaces: OrdMap::new(),
            next_id,
        };
        k.rebuild_cofaces();
        k
    }

    fn rebuild_cofaces(&mut self) {
        let mut cofaces: BTreeMap<CellId, OrdSet<CellId>> =
            self.cells.keys().map(|&id| (id, OrdSet::new())).collect();
        for (&id, cell) in &self.cells {
            for f in cell.faces.keys() {
                cofaces.entry(*f).or_default().insert(id);
            }
        }
        self.cofaces = cofaces.into_iter().collect();
    }

    /// Cells are shared between clones until one of them is subdivided.
    pub fn cells(&self) -> &OrdMap<CellId, Arc<Cell>> {
        &self.cells
    }

    /// An owned copy of the cells, for building a modified complex.
    pub fn to_cells(&self) -> BTreeMap<CellId, Cell> {
        self.cells
            .iter()
            .map(|(&id, c)| (id, Cell::clone(c)))
            .collect()
    }

    pub fn ids(&self) -> impl Iterator<Item = CellId> + '_ {
        self.cells.keys().copied()
    }

    pub fn contains(&self, id: CellId) -> bool {
        self.cells.contains_key(&id)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn next_id(&self) -> usize {
        self.next_id
    }

    pub fn cell(&self, id: CellId) -> Result<&Cell, ComplexError> {
        self.cells
            .get(&id)
            .map(|c| &**c)
            .ok_or(ComplexError::UnknownId(id))
    }

    pub fn cone(&self, id: CellId) -> &Cone {
        &self.cells[&id].cone
    }

    pub fn dim(&self) -> usize {
        self.cells.values().map(|c| c.cone.dim()).max().unwrap_or(0)
    }

    pub fn cofaces(&self, id: CellId) -> &OrdSet<CellId> {
        static EMPTY: OnceLock<OrdSet<CellId>> = OnceLock::new();
        self.cofaces
            .get(&id)
            .unwrap_or_else(|| EMPTY.get_or_init(OrdSet::new))
    }

    /// `τ ≼ σ`.
    pub fn is_face(&self, tau: CellId, sigma: CellId) -> bool {
        tau == sigma
            || self
                .cells
                .get(&sigma)
                .is_some_and(|c| c.faces.contains_key(&tau))
    }

    /// `i_{τσ}`, the identity when `τ = σ`.
    pub fn inclusion(&self, tau: CellId, sigma: CellId) -> Option<IntMatrix> {
        if tau == sigma {
            return self
                .cells
                .get(&tau)
                .map(|c| IntMatrix::identity(c.cone.dim()));
        }
        self.cells.get(&sigma)?.faces.get(&tau).cloned()
    }

    pub fn maximal_cells(&self) -> Vec<CellId> {
        self.ids()
            .filter(|id| self.cofaces(*id).is_empty())
            .collect()
    }

    pub fn cells_of_dim(&self, d: usize) -> Vec<CellId> {
        self.cells
            .iter()
            .filter(|(_, c)| c.cone.dim() == d)
            .map(|(&id, _)| id)
            .collect()
    }

    pub fn rays(&self) -> Vec<CellId> {
        self.cells_of_dim(1)
    }

    /// The vertex of a ray cell.
    pub fn ray_vertex(&self, ray: CellId) -> &IntVector {
        &self.cone(ray).vertices()[0]
    }

    /// Image of the vertex set of `τ` in `σ`, as indices into `Vert(σ)`.
    pub fn face_index_set(&self, tau: CellId, sigma: CellId) -> Option<Vec<usize>> {
        let inc = self.inclusion(tau, sigma)?;
        let verts = self.cone(sigma).vertices();
        let mut out = Vec::new();
        for u in self.cone(tau).vertices() {
            let w = inc.mul_vec(u);
            out.push(verts.iter().position(|x| *x == w)?);
        }
        out.sort_unstable();
        Some(out)
    }

    /// Ray cells of `σ` aligned with `Vert(σ)`.
    pub fn vertex_rays(&self, sigma: CellId) -> Vec<CellId> {
        let n = self.cone(sigma).vertices().len();
        let mut out = vec![CellId(usize::MAX); n];
        for (&f, _) in self.cells[&sigma]
            .faces
            .iter()
            .filter(|(f, _)| self.cone(**f).dim() == 1)
        {
            if let Some(ix) = self.face_index_set(f, sigma) {
                out[ix[0]] = f;
            }
        }
        if self.cone(sigma).dim() == 1 {
            out[0] = sigma;
        }
        out
    }

    /// The face of `σ` spanned by the given vertices.
    pub fn face_with_vertices(&self, sigma: CellId, vertex_ids: &[usize]) -> Option<CellId> {
        let mut want = vertex_ids.to_vec();
        want.sort_unstable();
        if want.len() == self.cone(sigma).vertices().len() {
            return Some(sigma);
        }
        self.cells[&sigma]
            .faces
            .keys()
            .copied()
            .find(|&f| self.face_index_set(f, sigma).as_deref() == Some(&want))
    }

    /// The cell carrying `v ∈ σ` in its relative interior, with the
    /// coordinates of `v` there.
    pub fn carrier(&self, sigma: CellId, v: &IntVector) -> Option<(CellId, IntVector)> {
        let face = self.cone(sigma).carrier_face(v);
        let tau = self.face_with_vertices(sigma, &face)?;
        let inc = self.inclusion(tau, sigma)?;
        let x = solve_integral(&inc, v)?;
        Some((tau, x))
    }

    /// `Star(τ) = {σ : τ ≼ σ}`.
    pub fn star(&self, tau: CellId) -> Result<BTreeSet<CellId>, ComplexError> {
        self.cell(tau)?;
        let mut s: BTreeSet<CellId> = self.cofaces(tau).iter().copied().collect();
        s.insert(tau);
        Ok(s)
    }

    pub fn closed_star(&self, tau: CellId) -> Result<BTreeSet<CellId>, ComplexError> {
        let star = self.star(tau)?;
        let mut out = star.clone();
        for s in &star {
            out.extend(self.cells[s].faces.keys().copied());
        }
        Ok(out)
    }

    pub fn link(&self, tau: CellId) -> Result<BTreeSet<CellId>, ComplexError> {
        let star = self.star(tau)?;
        Ok(self.closed_star(tau)?.difference(&star).copied().collect())
    }

    pub fn is_subcomplex(&self, ids: &BTreeSet<CellId>) -> bool {
        ids.iter().all(|id| {
            self.cells
                .get(id)
                .is_some_and(|c| c.faces.keys().all(|f| ids.contains(f)))
        })
    }

    /// Extracts a face-closed subset with its restricted face maps.
    pub fn subcomplex(&self, ids: &BTreeSet<CellId>) -> Result<ConicalComplex, ComplexError> {
        let mut cells = BTreeMap::new();
        for &id in ids {
            let c = self.cell(id)?;
            if let Some(f) = c.faces.keys().find(|f| !ids.contains(f)) {
                return Err(ComplexError::NotFaceClosed(*f));
            }
            cells.insert(id, Cell::clone(c));
        }
        Ok(ConicalComplex::from_cells(cells))
    }

    /// Irreducible singular cells, the smallest subcomplex containing them,
    /// and the regular cells.
    pub fn sing_set(&self) -> SingSet {
        let sing: BTreeSet<CellId> = self
            .cells
            .iter()
            .filter(|(_, c)| c.cone.is_irreducible_singular())
            .map(|(&id, _)| id)
            .collect();
        let mut sing_closure = sing.clone();
        for s in &sing {
            sing_closure.extend(self.cells[s].faces.keys().copied());
        }
        let reg = self
            .cells
            .iter()
            .filter(|(_, c)| c.cone.is_regular() || c.cone.dim() == 0)
            .map(|(&id, _)| id)
            .collect();
        SingSet {
            sing,
            sing_closure,
            reg,
        }
    }

    /// Checks every clause of the definition and reports each failure.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let viol = |clause, cells: Vec<CellId>, detail: String| Violation {
            clause,
            cells,
            detail,
        };
        for (&sid, cell) in &self.cells {
            let sigma = &cell.cone;
            let faces_of_sigma = sigma.faces();
            let mut hit: BTreeMap<Vec<usize>, Vec<CellId>> = BTreeMap::new();
            for (&tid, inc) in &cell.faces {
                let Some(tcell) = self.cells.get(&tid) else {
                    out.push(viol(
                        "unknown-id",
                        vec![sid, tid],
                        "face refers to a missing cell".into(),
                    ));
                    continue;
                };
                let tau = &tcell.cone;
                if inc.rows() != sigma.dim() || inc.cols() != tau.dim() {
                    out.push(viol(
                        "face-map",
                        vec![tid, sid],
                        "inclusion matrix has the wrong shape".into(),
                    ));
                    continue;
                }
                if inc.rank() != tau.dim() {
                    out.push(viol(
                        "face-map",
                        vec![tid, sid],
                        "inclusion is not injective".into(),
                    ));
                    continue;
                }
                let Some(ix) = self.face_index_set(tid, sid) else {
                    out.push(viol(
                        "face-map",
                        vec![tid, sid],
                        "vertices do not map to vertices".into(),
                    ));
                    continue;
                };
                if !faces_of_sigma.contains(&ix)
                    || sigma.face_dim(&ix) != tau.dim()
                    || ix.len() == sigma.vertices().len()
                {
                    out.push(viol(
                        "face-map",
                        vec![tid, sid],
                        "image is not a proper face".into(),
                    ));
                    continue;
                }
                if !saturation_index(&inc.columns(), sigma.dim()).is_one() {
                    out.push(viol(
                        "saturation",
                        vec![tid, sid],
                        "image lattice is not saturated".into(),
                    ));
                }
                hit.entry(ix).or_default().push(tid);
                for (&rid, inner) in &tcell.faces {
                    match cell.faces.get(&rid) {
                        None => out.push(viol(
                            "transitivity",
                            vec![rid, tid, sid],
                            "face of a face is not recorded as a face".into(),
                        )),
                        Some(direct) => {
                            if inner.rows() == inc.cols() && &inc.mul(inner) != direct {
                                out.push(viol(
                                    "composition",
                                    vec![rid, tid, sid],
                                    "inclusions do not compose".into(),
                                ));
                            }
                        }
                    }
                }
            }
            for f in &faces_of_sigma {
                if f.len() == sigma.vertices().len() {
                    continue;
                }
                match hit.get(f).map(Vec::len).unwrap_or(0) {
                    1 => {}
                    0 => out.push(viol(
                        "face-completeness",
                        vec![sid],
                        format!("face {f:?} has no cell"),
                    )),
                    _ => out.push(viol(
                        "face-completeness",
                        hit[f].clone(),
                        format!("face {f:?} of {sid} has several cells"),
                    )),
                }
            }
        }
        out
    }

    /// Star subdivision at several centers with pairwise disjoint stars.
    ///
    /// Centers are applied in carrier order; disjointness makes the result
    /// independent of the order they are listed in. Every new cell `⟨v⟩+ρ`
    /// lives in the smallest star cell containing ρ, with lattice equal to
    /// that cell's lattice cut down to the span of `v` and ρ.
    pub fn star_subdivide(&self, centers: &[StarCenter]) -> Result<Subdivision, ComplexError> {
        let mut work = self.clone();
        let (mut parent, new_rays) = work.star_subdivide_in_place(centers)?;
        for (&id, c) in &work.cells {
            parent
                .entry(id)
                .or_insert_with(|| (id, IntMatrix::identity(c.cone.dim())));
        }
        Ok(Subdivision {
            complex: work,
            parent,
            new_rays,
        })
    }

    /// [`star_subdivide`](Self::star_subdivide) without the copy. Returns
    /// the parent of each new cell and the new rays; untouched cells keep
    /// their ids. On error the complex is left unchanged.
    #[allow(clippy::type_complexity)]
    pub fn star_subdivide_in_place(
        &mut self,
        centers: &[StarCenter],
    ) -> Result<(BTreeMap<CellId, (CellId, IntMatrix)>, Vec<CellId>), ComplexError> {
        let mut stars = Vec::new();
        for c in centers {
            let cone = self.cell(c.carrier)?.cone.clone();
            if c.vector.dim() != cone.dim() || c.vector.is_zero() || !c.vector.content().is_one() {
                return Err(ComplexError::NotPrimitive(c.carrier));
            }
            if !cone.in_relative_interior(&c.vector) {
                return Err(ComplexError::NotInterior(c.carrier));
            }
            stars.push(self.star(c.carrier)?);
        }
        for i in 0..centers.len() {
            for j in i + 1..centers.len() {
                if !stars[i].is_disjoint(&stars[j]) {
                    return Err(ComplexError::StarsNotDisjoint(
                        centers[i].carrier,
                        centers[j].carrier,
                    ));
                }
            }
        }
        let mut order: Vec<usize> = (0..centers.len()).collect();
        order.sort_by_key(|&i| (centers[i].carrier, centers[i].vector.clone()));
        let mut plans = Vec::with_capacity(order.len());
        for &i in &order {
            plans.push(self.plan_one(&centers[i], &stars[i])?);
        }
        let mut parent: BTreeMap<CellId, (CellId, IntMatrix)> = BTreeMap::new();
        let mut new_rays = vec![CellId(0); centers.len()];
        for (i, plan) in order.into_iter().zip(plans) {
            let (ray, created) = self.apply_plan(&stars[i], plan);
            new_rays[i] = ray;
            parent.extend(created);
        }
        Ok((parent, new_rays))
    }

    /// New cells `⟨v⟩+ρ` for one center, one per link cell in link order.
    /// Only reads cells of the star and its link, which other centers of a
    /// disjoint batch never touch.
    fn plan_one(
        &self,
        center: &StarCenter,
        star: &BTreeSet<CellId>,
    ) -> Result<Vec<PlannedCell>, ComplexError> {
        let tau = center.carrier;
        let mut link: BTreeSet<CellId> = BTreeSet::new();
        for s in star {
            link.extend(
                self.cells[s]
                    .faces
                    .keys()
                    .copied()
                    .filter(|f| !star.contains(f)),
            );
        }
        let mut link: Vec<CellId> = link.into_iter().collect();
        link.sort_by_key(|&r| (self.cone(r).dim(), r));

        // smallest star cell over each link cell, and the new cell's lattice in it
        let mut plan: Vec<PlannedCell> = Vec::with_capacity(link.len());
        let mut slot: BTreeMap<CellId, usize> = BTreeMap::new();
        for &rho in &link {
            let hosts: Vec<CellId> = star
                .iter()
                .copied()
                .filter(|&s| self.is_face(rho, s))
                .collect();
            let host = *hosts
                .iter()
                .min_by_key(|&&s| (self.cone(s).dim(), s))
                .expect("link cell lies in the star");
            if !hosts.iter().all(|&s| self.is_face(host, s)) {
                return Err(ComplexError::NonUniqueJoin(rho));
            }
            let hcone = self.cone(host);
            let dh = hcone.dim();
            let v_h = self
                .inclusion(tau, host)
                .expect("carrier is a face of its star")
                .mul_vec(&center.vector);
            let inc_rho = self
                .inclusion(rho, host)
                .expect("link cell is a face of its host");
            let mut gens: Vec<IntVector> = self
                .cone(rho)
                .vertices()
                .iter()
                .map(|u| inc_rho.mul_vec(u))
                .collect();
            gens.push(v_h);
            let b = IntMatrix::from_columns(&saturated_basis(&gens, dh), dh);
            let coords = solve_rational_many(&b, &gens)
                .into_iter()
                .map(|g| {
                    g.and_then(|g| g.to_integral())
                        .expect("generator lies in its saturated span")
                })
                .collect();
            let cone = Cone::new(hcone.lattice_basis().mul(&b), coords)?;
            slot.insert(rho, plan.len());
            plan.push(PlannedCell {
                host,
                b,
                cone,
                old_faces: Vec::new(),
                new_faces: Vec::new(),
            });
        }

        for (idx, &rho) in link.iter().enumerate() {
            let (host, b) = (plan[idx].host, plan[idx].b.clone());
            let mut below: Vec<CellId> = self.cells[&rho].faces.keys().copied().collect();
            below.push(rho);
            for r in below {
                let to_host = self
                    .inclusion(r, host)
                    .expect("face of link cell is a face of the host");
                plan[idx].old_faces.push((r, solve_matrix(&b, &to_host)));
                let j = slot[&r];
                if j != idx {
                    let (h2, b2) = (plan[j].host, &plan[j].b);
                    let lift = self
                        .inclusion(h2, host)
                        .ok_or(ComplexError::NonUniqueJoin(r))?
                        .mul(b2);
                    plan[idx].new_faces.push((j, solve_matrix(&b, &lift)));
                }
            }
        }
        Ok(plan)
    }

    #[allow(clippy::type_complexity)]
    fn apply_plan(
        &mut self,
        star: &BTreeSet<CellId>,
        plan: Vec<PlannedCell>,
    ) -> (CellId, Vec<(CellId, (CellId, IntMatrix))>) {
        let ids: Vec<CellId> = (0..plan.len()).map(|i| CellId(self.next_id + i)).collect();
        self.next_id += plan.len();
        let mut created = Vec::with_capacity(plan.len());
        for (i, p) in plan.into_iter().enumerate() {
            let mut faces: BTreeMap<CellId, IntMatrix> = p.old_faces.into_iter().collect();
            faces.extend(p.new_faces.into_iter().map(|(j, m)| (ids[j], m)));
            self.cells.insert(
                ids[i],
                Arc::new(Cell {
                    cone: p.cone,
                    faces,
                }),
            );
            created.push((ids[i], (p.host, p.b)));
        }
        for s in star {
            let cell = self.cells.remove(s).expect("star cell");
            for f in cell.faces.keys() {
                if let Some(up) = self.cofaces.get_mut(f) {
                    up.remove(s);
                }
            }
            self.cofaces.remove(s);
        }
        for id in &ids {
            self.cofaces.entry(*id).or_default();
            for f in self.cells[id].faces.keys() {
                self.cofaces.entry(*f).or_default().insert(*id);
            }
        }
        // the zero cell comes first in the link
        (ids[0], created)
    }

    /// Builds a fan complex. `lattice` has the lattice basis as columns;
    /// `cones` lists ambient generators of the maximal cones.
    pub fn from_fan(
        lattice: &IntMatrix,
        cones: &[Vec<IntVector>],
    ) -> Result<ConicalComplex, ComplexError> {
        let n = lattice.rows();
        let r = lattice.cols();
        let mut keyed: BTreeMap<Vec<IntVector>, Cone> = BTreeMap::new();
        for gens in cones {
            let coords = gens
                .iter()
                .enumerate()
                .map(|(i, g)| {
                    solve_rational(lattice, g)
                        .map(|x| x.clear_denominators().1)
                        .ok_or(ComplexError::Lin(LinError::SpanViolation { index: i }))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let sat = IntMatrix::from_columns(&saturated_basis(&coords, r), r);
            let top = Cone::from_ambient(lattice.mul(&sat), gens)?;
            for face in top.faces() {
                let verts: Vec<IntVector> = face
                    .iter()
                    .map(|&i| top.to_ambient(&top.vertices()[i]))
                    .collect();
                if keyed.contains_key(&verts) {
                    continue;
                }
                let vc: Vec<IntVector> = solve_rational_many(lattice, &verts)
                    .into_iter()
                    .map(|g| {
                        g.and_then(|g| g.to_integral())
                            .expect("vertex is a lattice point")
                    })
                    .collect();
                let basis = if vc.is_empty() {
                    IntMatrix::zeros(n, 0)
                } else {
                    lattice.mul(&IntMatrix::from_columns(&saturated_basis(&vc, r), r))
                };
                keyed.insert(verts.clone(), Cone::from_ambient(basis, &verts)?);
            }
        }
        let mut order: Vec<(Vec<IntVector>, Cone)> = keyed.into_iter().collect();
        order.sort_by(|a, b| (a.1.dim(), &a.0).cmp(&(b.1.dim(), &b.0)));
        let index: BTreeMap<Vec<IntVector>, CellId> = order
            .iter()
            .enumerate()
            .map(|(i, (k, _))| (k.clone(), CellId(i)))
            .collect();
        let mut cells = BTreeMap::new();
        for (i, (_, cone)) in order.iter().enumerate() {
            let mut faces = BTreeMap::new();
            for face in cone.faces() {
                if face.len() == cone.vertices().len() {
                    continue;
                }
                let verts: Vec<IntVector> = face
                    .iter()
                    .map(|&j| cone.to_ambient(&cone.vertices()[j]))
                    .collect();
                let fid = *index.get(&verts).ok_or_else(|| {
                    ComplexError::InvalidFan(format!(
                        "face {verts:?} of cone {i} is not a fan cone"
                    ))
                })?;
                let fcone = &order[fid.0].1;
                let inc = solve_matrix(cone.lattice_basis(), fcone.lattice_basis());
                if &cone.lattice_basis().mul(&inc) != fcone.lattice_basis() {
                    return Err(ComplexError::InvalidFan(format!(
                        "lattices of cones {} and {i} disagree",
                        fid.0
                    )));
                }
                faces.insert(fid, inc);
            }
            cells.insert(
                CellId(i),
                Cell {
                    cone: cone.clone(),
                    faces,
                },
            );
        }
        Ok(ConicalComplex::from_cells(cells))
    }

    /// Applies an ambient unimodular change of coordinates to every cell.
    /// Lattice coordinates and face maps are unchanged.
    pub fn transform_ambient(&self, u: &IntMatrix) -> ConicalComplex {
        let cells = self
            .cells
            .iter()
            .map(|(&id, c)| {
                (
                    id,
                    Arc::new(Cell {
                        cone: c.cone.transform(u),
                        faces: c.faces.clone(),
                    }),
                )
            })
            .collect();
        ConicalComplex {
            cells,
            cofaces: self.cofaces.clone(),
            next_id: self.next_id,
        }
    }

    /// Maximal cells as sorted ambient vertex lists, sorted. Two fans with the
    /// same ambient picture have equal shapes.
    pub fn ambient_shape(&self) -> Vec<Vec<IntVector>> {
        let mut out: Vec<Vec<IntVector>> = self
            .maximal_cells()
            .iter()
            .map(|&id| self.cone(id).ambient_vertices())
            .collect();
        out.sort();
        out
    }
}

/// Solves `a·X = b` column by column for an integral `X`.
pub(crate) fn solve_matrix(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let cols: Vec<IntVector> = solve_rational_many(a, &b.columns())
        .into_iter()
        .map(|c| {
            c.and_then(|c| c.to_integral())
                .expect("column lies in the lattice")
        })
        .collect();
    IntMatrix::from_columns(&cols, a.cols())
}

/// A map of complexes: each source cell goes to a target cell with a linear
/// map between their lattices (shape `dim σ' × dim σ`).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ComplexMap {
    pub assignments: BTreeMap<CellId, (CellId, IntMatrix)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    General,
    LocalIsomorphism,
    RegularLocalProjection,
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapKind::General => "general",
            MapKind::LocalIsomorphism => "local_isomorphism",
            MapKind::RegularLocalProjection => "regular_local_projection",
        })
    }
}

impl ComplexMap {
    /// Image of a vector of `σ` (in its coordinates): target cell and coordinates.
    pub fn apply(&self, sigma: CellId, v: &IntVector) -> Option<(CellId, IntVector)> {
        let (t, m) = self.assignments.get(&sigma)?;
        Some((*t, m.mul_vec(v)))
    }

    /// Identity map of a complex.
    pub fn identity(k: &ConicalComplex) -> ComplexMap {
        ComplexMap {
            assignments: k
                .cells()
                .iter()
                .map(|(&id, c)| (id, (id, IntMatrix::identity(c.cone.dim()))))
                .collect(),
        }
    }

    /// Matches two fans with the same cells up to an ambient linear map `u`
    /// (`u·src = dst`), producing the induced map.
    pub fn from_ambient_map(
        src: &ConicalComplex,
        dst: &ConicalComplex,
        u: &IntMatrix,
    ) -> Option<ComplexMap> {
        let mut index: BTreeMap<Vec<IntVector>, CellId> = BTreeMap::new();
        for (&id, c) in dst.cells() {
            let mut key = c.cone.ambient_vertices();
            key.sort();
            index.insert(key, id);
        }
        let mut assignments = BTreeMap::new();
        for (&id, c) in src.cells() {
            let mut key: Vec<IntVector> = c
                .cone
                .ambient_vertices()
                .iter()
                .map(|x| u.mul_vec(x))
                .filter(|x| !x.is_zero())
                .collect();
            key.sort();
            key.dedup();
            let target = *index.get(&key)?;
            let image = u.mul(c.cone.lattice_basis());
            let cols: Option<Vec<IntVector>> = image
                .columns()
                .iter()
                .map(|col| dst.cone(target).from_ambient_point(col))
                .collect();
            let m = IntMatrix::from_columns(&cols?, dst.cone(target).dim());
            assignments.insert(id, (target, m));
        }
        Some(ComplexMap { assignments })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapViolation {
    pub clause: &'static str,
    pub cell: CellId,
    pub detail: String,
}

impl fmt::Display for MapViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: cell {}: {}", self.clause, self.cell, self.detail)
    }
}

fn is_cell_isomorphism(m: &IntMatrix, src: &Cone, dst: &Cone) -> bool {
    if m.rows() != m.cols() || src.dim() != dst.dim() || !m.determinant().abs().is_one() {
        return false;
    }
    let mut image: Vec<IntVector> = src.vertices().iter().map(|v| m.mul_vec(v)).collect();
    let mut target = dst.vertices().to_vec();
    image.sort();
    target.sort();
    image == target
}

fn is_cell_projection(m: &IntMatrix, src: &Cone, dst: &Cone) -> bool {
    let verts = src.vertices();
    let (kernel, rest): (Vec<usize>, Vec<usize>) =
        (0..verts.len()).partition(|&i| m.mul_vec(&verts[i]).is_zero());
    if rest.len() + kernel.len() != verts.len() || m.rank() + kernel.len() != src.dim() {
        return false;
    }
    let (face, inc) = src.face_cone(&rest);
    if face.dim() + kernel.len() != src.dim() {
        return false;
    }
    let mut cols = inc.columns();
    cols.extend(kernel.iter().map(|&i| verts[i].clone()));
    if !IntMatrix::from_columns(&cols, src.dim())
        .determinant()
        .abs()
        .is_one()
    {
        return false;
    }
    is_cell_isomorphism(&m.mul(&inc), &face, dst)
}

/// Classifies a map, or reports the first violated clause.
pub fn check_map(
    f: &ComplexMap,
    src: &ConicalComplex,
    dst: &ConicalComplex,
) -> Result<MapKind, MapViolation> {
    let bad = |clause, cell, detail: &str| MapViolation {
        clause,
        cell,
        detail: detail.to_string(),
    };
    for (&sid, cell) in src.cells() {
        let Some((tid, m)) = f.assignments.get(&sid) else {
            return Err(bad("structure", sid, "cell has no image"));
        };
        let Ok(target) = dst.cell(*tid) else {
            return Err(bad("structure", sid, "image cell does not exist"));
        };
        if m.rows() != target.cone.dim() || m.cols() != cell.cone.dim() {
            return Err(bad("structure", sid, "matrix has the wrong shape"));
        }
        if !cell
            .cone
            .vertices()
            .iter()
            .all(|v| target.cone.contains(&m.mul_vec(v)))
        {
            return Err(bad("cone", sid, "a vertex leaves the image cone"));
        }
        let sum = cell
            .cone
            .vertices()
            .iter()
            .fold(IntVector::zeros(cell.cone.dim()), |a, v| &a + v);
        if !target.cone.in_relative_interior(&m.mul_vec(&sum)) {
            return Err(bad(
                "interior",
                sid,
                "interior does not map into the interior",
            ));
        }
        for (&rid, inc) in &cell.faces {
            let Some((rt, mr)) = f.assignments.get(&rid) else {
                return Err(bad("structure", rid, "cell has no image"));
            };
            let Some(tinc) = dst.inclusion(*rt, *tid) else {
                return Err(bad(
                    "commutation",
                    sid,
                    "image of a face is not a face of the image",
                ));
            };
            if m.mul(inc) != tinc.mul(mr) {
                return Err(bad(
                    "commutation",
                    sid,
                    "map does not commute with face inclusions",
                ));
            }
        }
    }
    let iso = src.cells().iter().all(|(id, c)| {
        let (t, m) = &f.assignments[id];
        is_cell_isomorphism(m, &c.cone, dst.cone(*t))
    });
    if iso {
        return Ok(MapKind::LocalIsomorphism);
    }
    let proj = src.cells().iter().all(|(id, c)| {
        let (t, m) = &f.assignments[id];
        is_cell_projection(m, &c.cone, dst.cone(*t))
    });
    if !proj {
        return Ok(MapKind::General);
    }
    let dst_sing = dst.sing_set().sing;
    for s in src.sing_set().sing {
        let (t, m) = &f.assignments[&s];
        if !dst_sing.contains(t) || !is_cell_isomorphism(m, src.cone(s), dst.cone(*t)) {
            return Err(bad(
                "sing-correspondence",
                s,
                "singular face does not map isomorphically",
            ));
        }
    }
    Ok(MapKind::RegularLocalProjection)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> IntVector {
        IntVector::from_i64s(x)
    }

    pub(crate) fn fan(gens: &[&[&[i64]]]) -> ConicalComplex {
        let n = gens[0][0].len();
        let cones: Vec<Vec<IntVector>> = gens
            .iter()
            .map(|c| c.iter().map(|g| v(g)).collect())
            .collect();
        ConicalComplex::from_fan(&IntMatrix::identity(n), &cones).unwrap()
    }

    fn max_shapes(k: &ConicalComplex) -> Vec<Vec<IntVector>> {
        k.ambient_shape()
    }

    #[test]
    fn quadrant_fan_is_valid() {
        let k = fan(&[&[&[1, 0], &[0, 1]]]);
        assert_eq!(k.len(), 4);
        assert!(k.validate().is_empty());
    }

    #[test]
    fn non_saturated_face_map_reported() {
        // re-glue the face ⟨e1, e1+2e2⟩ of ⟨e1, e1+2e2, e3⟩ through the
        // index-2 lattice its vertices generate
        let k = fan(&[&[&[1, 0, 0], &[1, 2, 0], &[0, 0, 1]]]);
        let top = k.maximal_cells()[0];
        let tau = k
            .cells_of_dim(2)
            .into_iter()
            .find(|&t| k.cone(t).ambient_vertices() == vec![v(&[1, 0, 0]), v(&[1, 2, 0])])
            .unwrap();
        let mut cells = k.to_cells();
        let basis = IntMatrix::from_i64_rows(&[vec![1, 1], vec![0, 2], vec![0, 0]]);
        let cone = Cone::new(basis.clone(), vec![v(&[1, 0]), v(&[0, 1])]).unwrap();
        let old_faces = cells[&tau].faces.clone();
        let mut faces = BTreeMap::new();
        for (f, _) in old_faces {
            let m = match k
                .cone(f)
                .ambient_vertices()
                .first()
                .map(|x| x.to_i64s().unwrap())
            {
                None => IntMatrix::zeros(2, 0),
                Some(x) if x == vec![1, 0, 0] => IntMatrix::from_i64_rows(&[vec![1], vec![0]]),
                Some(_) => IntMatrix::from_i64_rows(&[vec![0], vec![1]]),
            };
            faces.insert(f, m);
        }
        cells.insert(tau, Cell { cone, faces });
        cells.get_mut(&top).unwrap().faces.insert(tau, basis);
        let bad = ConicalComplex::from_cells(cells);
        let vs = bad.validate();
        assert_eq!(vs.len(), 1, "{vs:?}");
        assert_eq!(vs[0].clause, "saturation");
    }

    #[test]
    fn broken_composition_reported() {
        let k = fan(&[&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]]);
        let top = k.maximal_cells()[0];
        let e1 = k
            .rays()
            .into_iter()
            .find(|&r| k.cone(r).ambient_vertices() == vec![v(&[1, 0, 0])])
            .unwrap();
        let mut cells = k.to_cells();
        // send e1 to the e2 vertex directly while its facets still send it to e1
        cells
            .get_mut(&top)
            .unwrap()
            .faces
            .insert(e1, IntMatrix::from_i64_rows(&[vec![0], vec![1], vec![0]]));
        let bad = ConicalComplex::from_cells(cells);
        let vs = bad.validate();
        assert!(vs.iter().any(|x| x.clause == "composition"), "{vs:?}");
    }

    #[test]
    fn stars_and_links() {
        let k = fan(&[&[&[1, 0], &[0, 1]]]);
        let zero = k.cells_of_dim(0)[0];
        assert_eq!(k.star(zero).unwrap().len(), 4);
        let e1 = k.rays()[1];
        assert_eq!(k.cone(e1).ambient_vertices(), vec![v(&[1, 0])]);
        let top = k.maximal_cells()[0];
        assert_eq!(k.star(e1).unwrap(), [e1, top].into_iter().collect());
        let link = k.link(e1).unwrap();
        assert_eq!(link.len(), 2);
        assert!(link.contains(&zero));
        assert_eq!(k.star(top).unwrap().len(), 1);
        assert_eq!(k.link(top).unwrap().len(), 3);
        assert_eq!(k.star(CellId(77)), Err(ComplexError::UnknownId(CellId(77))));
    }

    #[test]
    fn subdivide_3d_at_diagonal() {
        let k = fan(&[&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]]);
        let top = k.maximal_cells()[0];
        let s = k
            .star_subdivide(&[StarCenter {
                carrier: top,
                vector: v(&[1, 1, 1]),
            }])
            .unwrap();
        assert_eq!(s.complex.maximal_cells().len(), 3);
        assert!(
            s.complex.validate().is_empty(),
            "{:?}",
            s.complex.validate()
        );
    }

    #[test]
    fn subdivide_a1_at_its_barycenter() {
        let k = fan(&[&[&[1, 0], &[1, 2]]]);
        let top = k.maximal_cells()[0];
        let s = k
            .star_subdivide(&[StarCenter {
                carrier: top,
                vector: v(&[1, 1]),
            }])
            .unwrap();
        assert_eq!(
            max_shapes(&s.complex),
            vec![vec![v(&[1, 0]), v(&[1, 1])], vec![v(&[1, 1]), v(&[1, 2])]]
        );
        for id in s.complex.maximal_cells() {
            assert!(s.complex.cone(id).is_regular());
        }
        assert_eq!(
            s.complex.cone(s.new_rays[0]).ambient_vertices(),
            vec![v(&[1, 1])]
        );
    }

    #[test]
    fn subdivide_ray_at_itself_is_identity_shape() {
        let k = fan(&[&[&[1, 0], &[0, 1]]]);
        let e1 = k.rays()[1];
        let s = k
            .star_subdivide(&[StarCenter {
                carrier: e1,
                vector: v(&[1]),
            }])
            .unwrap();
        assert_eq!(max_shapes(&s.complex), max_shapes(&k));
        assert!(s.complex.validate().is_empty());
    }

    #[test]
    fn subdivision_rejects_bad_centers() {
        let k = fan(&[&[&[1, 0], &[0, 1]]]);
        let top = k.maximal_cells()[0];
        let e1 = k.rays()[1];
        let r = k.star_subdivide(&[StarCenter {
            carrier: top,
            vector: v(&[2, 2]),
        }]);
        assert_eq!(r.unwrap_err(), ComplexError::NotPrimitive(top));
        let r = k.star_subdivide(&[StarCenter {
            carrier: top,
            vector: v(&[1, 0]),
        }]);
        assert_eq!(r.unwrap_err(), ComplexError::NotInterior(top));
        let r = k.star_subdivide(&[
            StarCenter {
                carrier: top,
                vector: v(&[1, 1]),
            },
            StarCenter {
                carrier: e1,
                vector: v(&[1]),
            },
        ]);
        assert!(matches!(r.unwrap_err(), ComplexError::StarsNotDisjoint(..)));
    }

    #[test]
    fn multi_center_order_independent() {
        let k = fan(&[&[&[1, 0], &[1, 3]], &[&[1, 0], &[1, -2]]]);
        let tops = k.maximal_cells();
        let c1 = StarCenter {
            carrier: tops[0],
            vector: k
                .carrier(tops[0], &k.cone(tops[0]).canonical_barycenter().unwrap())
                .unwrap()
                .1,
        };
        let c2 = StarCenter {
            carrier: tops[1],
            vector: k
                .carrier(tops[1], &k.cone(tops[1]).canonical_barycenter().unwrap())
                .unwrap()
                .1,
        };
        let a = k.star_subdivide(&[c1.clone(), c2.clone()]).unwrap().complex;
        let b = k.star_subdivide(&[c2, c1]).unwrap().complex;
        assert_eq!(a, b);
        assert!(a.validate().is_empty());
    }

    #[test]
    fn subcomplex_checks() {
        let k = fan(&[&[&[1, 0], &[1, 2]], &[&[1, 0], &[0, -1]]]);
        let rays: BTreeSet<CellId> = k.ids().filter(|&id| k.cone(id).dim() <= 1).collect();
        assert!(k.is_subcomplex(&rays));
        let top: BTreeSet<CellId> = [k.maximal_cells()[0]].into_iter().collect();
        assert!(!k.is_subcomplex(&top));
        assert!(matches!(
            k.subcomplex(&top),
            Err(ComplexError::NotFaceClosed(_))
        ));
        let ss = k.sing_set();
        assert!(k.is_subcomplex(&ss.reg));
        assert_eq!(ss.reg.len(), k.len() - 1);
        assert_eq!(ss.sing.len(), 1);
        assert_eq!(ss.sing_closure.len(), 4);
    }

    #[test]
    fn product_sing_set() {
        let k = fan(&[&[&[1, 0, 0], &[1, 2, 0], &[0, 0, 1]]]);
        let ss = k.sing_set();
        assert_eq!(ss.sing.len(), 1);
        let s = *ss.sing.iter().next().unwrap();
        assert_eq!(
            k.cone(s).ambient_vertices(),
            vec![v(&[1, 0, 0]), v(&[1, 2, 0])]
        );
    }

    #[test]
    fn map_classification() {
        let k = fan(&[&[&[1, 0], &[1, 2]]]);
        assert_eq!(
            check_map(&ComplexMap::identity(&k), &k, &k),
            Ok(MapKind::LocalIsomorphism)
        );

        let prod = fan(&[&[&[1, 0, 0], &[1, 2, 0], &[0, 0, 1]]]);
        let p = IntMatrix::from_i64_rows(&[vec![1, 0, 0], vec![0, 1, 0]]);
        let f = ComplexMap::from_ambient_map(&prod, &k, &p).unwrap();
        assert_eq!(
            check_map(&f, &prod, &k),
            Ok(MapKind::RegularLocalProjection)
        );

        let mut g = ComplexMap::identity(&k);
        let ray = k.rays()[0];
        g.assignments.insert(ray, (ray, IntMatrix::zeros(1, 1)));
        assert_eq!(check_map(&g, &k, &k).unwrap_err().clause, "interior");
    }
}
