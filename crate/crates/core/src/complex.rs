//! Abstract and geometric simplicial complexes with exact rational
//! coordinates: the join/link/star calculus, full geometric validation, and
//! canonical fingerprints.
//!
//! Complexes are immutable values; every operation returns a new complex so
//! flip sequences can keep old and new states for verification. Curved model
//! spaces are stored in their straight-line charts (Klein ball for
//! hyperbolic, gnomonic plane for spherical), so a geodesic simplex is a
//! rational linear simplex in chart coordinates and one validation code path
//! serves all three geometries.

use crate::linalg;
use crate::rat::{format_rat, Rat};
use itertools::Itertools;
use num_traits::{Signed, Zero};
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Opaque vertex label, unique within a complex and stable under operations
/// that do not delete the vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl std::fmt::Display for VertexId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// A point with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub coords: Vec<Rat>,
}

impl Point {
    pub fn new(coords: Vec<Rat>) -> Self {
        Point { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn add(&self, other: &Point) -> Point {
        Point::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, f: &Rat) -> Point {
        Point::new(self.coords.iter().map(|a| a * f).collect())
    }

    /// Appends one coordinate (used to lift a base point into a cone).
    pub fn lift(&self, last: Rat) -> Point {
        let mut c = self.coords.clone();
        c.push(last);
        Point::new(c)
    }

    /// Drops the last coordinate (orthogonal projection).
    pub fn project(&self) -> Point {
        Point::new(self.coords[..self.coords.len() - 1].to_vec())
    }
}

/// Vertex set of a simplex, strictly sorted; dimension is `len - 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AbstractSimplex {
    vertices: Vec<VertexId>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("duplicate vertex {0} inside a simplex")]
    DuplicateVertex(VertexId),
    #[error("empty simplex")]
    EmptySimplex,
    #[error("simplex {0} not in complex")]
    NotInComplex(String),
    #[error("coordinates missing for vertex {0}")]
    MissingCoordinates(VertexId),
    #[error("coordinate dimension mismatch for vertex {0}")]
    DimensionMismatch(VertexId),
    #[error("coordinates given for unknown vertex {0}")]
    UnknownVertex(VertexId),
}

impl AbstractSimplex {
    pub fn new(mut vertices: Vec<VertexId>) -> Result<Self, ComplexError> {
        if vertices.is_empty() {
            return Err(ComplexError::EmptySimplex);
        }
        vertices.sort_unstable();
        for w in vertices.windows(2) {
            if w[0] == w[1] {
                return Err(ComplexError::DuplicateVertex(w[0]));
            }
        }
        Ok(AbstractSimplex { vertices })
    }

    /// Test/demo helper: builds a simplex from raw vertex numbers.
    pub fn from_ids(ids: &[u32]) -> Self {
        Self::new(ids.iter().map(|&i| VertexId(i)).collect()).expect("valid vertex list")
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &AbstractSimplex) -> bool {
        self.vertices.iter().all(|v| other.contains(*v))
    }

    /// All nonempty faces, including the simplex itself.
    pub fn faces(&self) -> Vec<AbstractSimplex> {
        (1..=self.vertices.len())
            .flat_map(|k| self.vertices.iter().copied().combinations(k))
            .map(|vs| AbstractSimplex { vertices: vs })
            .collect()
    }

    /// The codimension-one faces.
    pub fn facets(&self) -> Vec<AbstractSimplex> {
        if self.vertices.len() == 1 {
            return Vec::new();
        }
        (0..self.vertices.len())
            .map(|skip| AbstractSimplex {
                vertices: self
                    .vertices
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, v)| *v)
                    .collect(),
            })
            .collect()
    }

    /// Vertex-set union; errors if the simplexes share a vertex.
    pub fn join(&self, other: &AbstractSimplex) -> Result<AbstractSimplex, ComplexError> {
        let mut vs = self.vertices.clone();
        vs.extend_from_slice(&other.vertices);
        AbstractSimplex::new(vs)
    }

    pub fn intersection(&self, other: &AbstractSimplex) -> Option<AbstractSimplex> {
        let common: Vec<VertexId> =
            self.vertices.iter().filter(|v| other.contains(**v)).copied().collect();
        if common.is_empty() {
            None
        } else {
            Some(AbstractSimplex { vertices: common })
        }
    }

    pub fn minus(&self, other: &AbstractSimplex) -> Option<AbstractSimplex> {
        let rest: Vec<VertexId> =
            self.vertices.iter().filter(|v| !other.contains(**v)).copied().collect();
        if rest.is_empty() {
            None
        } else {
            Some(AbstractSimplex { vertices: rest })
        }
    }
}

impl std::fmt::Display for AbstractSimplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{}}}", self.vertices.iter().map(|v| v.0.to_string()).join(","))
    }
}

/// An abstract simplicial complex: a family of simplexes closed under taking
/// subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Complex {
    simplexes: BTreeSet<AbstractSimplex>,
    maximal: BTreeSet<AbstractSimplex>,
}

impl Complex {
    pub fn empty() -> Self {
        Complex { simplexes: BTreeSet::new(), maximal: BTreeSet::new() }
    }

    /// Builds the face-closure of the given maximal members.
    pub fn from_maximal(maximal: Vec<AbstractSimplex>) -> Self {
        let mut simplexes = BTreeSet::new();
        for m in &maximal {
            for f in m.faces() {
                simplexes.insert(f);
            }
        }
        Self::from_closed_set(simplexes)
    }

    /// Wraps an already face-closed set, recomputing the maximal members.
    /// Debug builds assert closure.
    pub fn from_closed_set(simplexes: BTreeSet<AbstractSimplex>) -> Self {
        debug_assert!(simplexes
            .iter()
            .all(|s| s.facets().iter().all(|f| simplexes.contains(f))));
        let maximal = simplexes
            .iter()
            .filter(|s| {
                !simplexes.iter().any(|t| t.dim() > s.dim() && s.is_face_of(t))
            })
            .cloned()
            .collect();
        Complex { simplexes, maximal }
    }

    pub fn simplexes(&self) -> impl Iterator<Item = &AbstractSimplex> {
        self.simplexes.iter()
    }

    pub fn maximal(&self) -> impl Iterator<Item = &AbstractSimplex> {
        self.maximal.iter()
    }

    pub fn len(&self) -> usize {
        self.simplexes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplexes.is_empty()
    }

    pub fn contains(&self, s: &AbstractSimplex) -> bool {
        self.simplexes.contains(s)
    }

    pub fn dim(&self) -> Option<usize> {
        self.simplexes.iter().map(|s| s.dim()).max()
    }

    /// True when every maximal simplex has the same dimension.
    pub fn is_pure(&self) -> bool {
        self.maximal.iter().map(|s| s.dim()).all_equal()
    }

    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.simplexes
            .iter()
            .flat_map(|s| s.vertices().iter().copied())
            .collect()
    }

    pub fn simplexes_of_dim(&self, d: usize) -> impl Iterator<Item = &AbstractSimplex> {
        self.simplexes.iter().filter(move |s| s.dim() == d)
    }

    /// `lk(A, K) = { B in K : A join B in K }`.
    pub fn link(&self, a: &AbstractSimplex) -> Result<Complex, ComplexError> {
        if !self.contains(a) {
            return Err(ComplexError::NotInComplex(a.to_string()));
        }
        let mut out = BTreeSet::new();
        for s in &self.simplexes {
            if a.is_face_of(s) {
                if let Some(b) = s.minus(a) {
                    out.insert(b);
                }
            }
        }
        Ok(Complex::from_closed_set(out))
    }

    /// Closed star `st(A, K) = A join lk(A, K)`: all faces of simplexes
    /// containing `A`.
    pub fn star(&self, a: &AbstractSimplex) -> Result<Complex, ComplexError> {
        if !self.contains(a) {
            return Err(ComplexError::NotInComplex(a.to_string()));
        }
        let carriers: Vec<&AbstractSimplex> =
            self.maximal.iter().filter(|s| a.is_face_of(s)).collect();
        let mut out = BTreeSet::new();
        for s in carriers {
            for f in s.faces() {
                out.insert(f);
            }
        }
        Ok(Complex::from_closed_set(out))
    }

    /// Join of two vertex-disjoint complexes, including both factors.
    pub fn join(&self, other: &Complex) -> Result<Complex, ComplexError> {
        let mut out = self.simplexes.clone();
        for t in &other.simplexes {
            out.insert(t.clone());
            for s in &self.simplexes {
                out.insert(s.join(t)?);
            }
        }
        Ok(Complex::from_closed_set(out))
    }

    /// Sum over dimensions of `(-1)^d (number of d-simplexes)`.
    pub fn euler_characteristic(&self) -> i64 {
        self.simplexes
            .iter()
            .map(|s| if s.dim() % 2 == 0 { 1 } else { -1 })
            .sum()
    }

    /// Codimension-one simplexes of a pure complex incident to exactly one
    /// maximal simplex.
    pub fn boundary_facets(&self) -> Vec<AbstractSimplex> {
        let dim = match self.dim() {
            Some(d) if d > 0 => d,
            _ => return Vec::new(),
        };
        let mut count: BTreeMap<AbstractSimplex, usize> = BTreeMap::new();
        for top in self.simplexes_of_dim(dim) {
            for f in top.facets() {
                *count.entry(f).or_insert(0) += 1;
            }
        }
        count.into_iter().filter(|(_, c)| *c == 1).map(|(f, _)| f).collect()
    }
}

/// A face-closed subset of some host complex's simplexes. Construction takes
/// the closure, so any simplex list denotes a valid subcomplex.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Subcomplex {
    simplexes: BTreeSet<AbstractSimplex>,
}

impl Subcomplex {
    pub fn empty() -> Self {
        Subcomplex::default()
    }

    pub fn from_simplexes<I: IntoIterator<Item = AbstractSimplex>>(items: I) -> Self {
        let mut simplexes = BTreeSet::new();
        for s in items {
            for f in s.faces() {
                simplexes.insert(f);
            }
        }
        Subcomplex { simplexes }
    }

    pub fn contains(&self, s: &AbstractSimplex) -> bool {
        self.simplexes.contains(s)
    }

    pub fn is_empty(&self) -> bool {
        self.simplexes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &AbstractSimplex> {
        self.simplexes.iter()
    }

    pub fn is_subcomplex_of(&self, host: &Complex) -> bool {
        self.simplexes.iter().all(|s| host.contains(s))
    }
}

/// Model chart a geometric complex lives in. Curved geometries are handled
/// through their straight-line charts, so coordinates are always rational
/// vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Euclidean,
    KleinBall,
    SphereGnomonic,
}

impl Model {
    pub fn tag(&self) -> &'static str {
        match self {
            Model::Euclidean => "euclidean",
            Model::KleinBall => "klein-ball",
            Model::SphereGnomonic => "sphere-gnomonic",
        }
    }

    pub fn from_tag(s: &str) -> Option<Model> {
        match s {
            "euclidean" => Some(Model::Euclidean),
            "klein-ball" => Some(Model::KleinBall),
            "sphere-gnomonic" => Some(Model::SphereGnomonic),
            _ => None,
        }
    }
}

/// An abstract simplicial complex realized with exact rational vertex
/// coordinates in a model chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometricComplex {
    pub complex: Complex,
    coords: BTreeMap<VertexId, Point>,
    pub model: Model,
    pub ambient_dim: usize,
}

/// One entry of a [`ValidationReport`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Simplex with affinely dependent vertices.
    Degenerate(AbstractSimplex),
    /// Two distinct vertices share coordinates.
    DuplicateCoordinates(VertexId, VertexId),
    /// Two same-dimension simplexes with interleaved interiors.
    InteriorOverlap(AbstractSimplex, AbstractSimplex),
    /// A pair of simplexes whose point-set intersection is not their common
    /// face.
    NonFaceIntersection(AbstractSimplex, AbstractSimplex),
    /// A vertex outside the model chart's domain.
    ModelDomain(VertexId),
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Degenerate(s) => write!(f, "degenerate simplex {s}"),
            Violation::DuplicateCoordinates(a, b) => {
                write!(f, "vertices {a} and {b} share coordinates")
            }
            Violation::InteriorOverlap(a, b) => {
                write!(f, "interiors of {a} and {b} overlap")
            }
            Violation::NonFaceIntersection(a, b) => {
                write!(f, "{a} and {b} meet outside their common face")
            }
            Violation::ModelDomain(v) => write!(f, "vertex {v} outside model domain"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl GeometricComplex {
    pub fn new(
        complex: Complex,
        coords: BTreeMap<VertexId, Point>,
        model: Model,
        ambient_dim: usize,
    ) -> Result<Self, ComplexError> {
        for v in complex.vertices() {
            match coords.get(&v) {
                None => return Err(ComplexError::MissingCoordinates(v)),
                Some(p) if p.dim() != ambient_dim => {
                    return Err(ComplexError::DimensionMismatch(v))
                }
                _ => {}
            }
        }
        for v in coords.keys() {
            if !complex.contains(&AbstractSimplex { vertices: vec![*v] }) {
                return Err(ComplexError::UnknownVertex(*v));
            }
        }
        Ok(GeometricComplex { complex, coords, model, ambient_dim })
    }

    pub fn point(&self, v: VertexId) -> &Point {
        &self.coords[&v]
    }

    pub fn coords(&self) -> &BTreeMap<VertexId, Point> {
        &self.coords
    }

    pub fn simplex_points(&self, s: &AbstractSimplex) -> Vec<Vec<Rat>> {
        s.vertices().iter().map(|v| self.coords[v].coords.clone()).collect()
    }

    pub fn barycenter(&self, s: &AbstractSimplex) -> Point {
        let pts = self.simplex_points(s);
        let k = Rat::from_integer((pts.len() as i64).into());
        let mut acc = vec![Rat::zero(); self.ambient_dim];
        for p in &pts {
            for (a, x) in acc.iter_mut().zip(p) {
                *a += x;
            }
        }
        Point::new(acc.into_iter().map(|a| a / &k).collect())
    }

    /// Largest allocated vertex id plus one; fresh ids start here.
    pub fn next_vertex_id(&self) -> u32 {
        self.coords.keys().map(|v| v.0 + 1).max().unwrap_or(0)
    }

    /// Sum of |det| over full-dimensional maximal simplexes (the `1/n!`
    /// normalization is omitted consistently).
    pub fn total_volume(&self) -> Rat {
        let mut acc = Rat::zero();
        for m in self.complex.maximal() {
            if m.dim() == self.ambient_dim {
                acc += linalg::simplex_volume(&self.simplex_points(m));
            }
        }
        acc
    }

    /// Full geometric validation; every violation becomes a report entry.
    pub fn validate_geometric(&self) -> ValidationReport {
        let mut violations = Vec::new();

        // model-domain membership
        if self.model == Model::KleinBall {
            for (v, p) in &self.coords {
                let norm2: Rat = p.coords.iter().map(|x| x * x).sum();
                if norm2 >= Rat::from_integer(1.into()) {
                    violations.push(Violation::ModelDomain(*v));
                }
            }
        }

        // duplicate coordinates
        let mut by_coords: Vec<(&Point, VertexId)> =
            self.coords.iter().map(|(v, p)| (p, *v)).collect();
        by_coords.sort();
        for w in by_coords.windows(2) {
            if w[0].0 == w[1].0 {
                violations.push(Violation::DuplicateCoordinates(w[0].1, w[1].1));
            }
        }

        // nondegeneracy of every simplex
        for s in self.complex.simplexes() {
            if !linalg::affinely_independent(&self.simplex_points(s)) {
                violations.push(Violation::Degenerate(s.clone()));
            }
        }
        if !violations.is_empty() {
            // pair tests assume nondegenerate, distinct data
            return ValidationReport { violations };
        }

        // pairwise proper intersection of maximal simplexes; by closure this
        // covers every simplex pair
        let maximal: Vec<&AbstractSimplex> = self.complex.maximal().collect();
        let boxes: Vec<(Vec<Rat>, Vec<Rat>)> =
            maximal.iter().map(|m| self.bbox(m)).collect();
        for i in 0..maximal.len() {
            for j in i + 1..maximal.len() {
                if !bbox_overlap(&boxes[i], &boxes[j]) {
                    continue;
                }
                if let Some(v) = self.check_pair(maximal[i], maximal[j]) {
                    violations.push(v);
                }
            }
        }
        ValidationReport { violations }
    }

    fn bbox(&self, s: &AbstractSimplex) -> (Vec<Rat>, Vec<Rat>) {
        let pts = self.simplex_points(s);
        bbox_of(&pts)
    }

    /// Checks `|a| ∩ |b| = |a ∩ b|` for two nondegenerate simplexes; returns
    /// the violation if any.
    fn check_pair(&self, a: &AbstractSimplex, b: &AbstractSimplex) -> Option<Violation> {
        let a_pts = self.simplex_points(a);
        let b_pts = self.simplex_points(b);
        let common = a.intersection(b);
        let common_pts: Vec<Vec<Rat>> = match &common {
            Some(c) => self.simplex_points(c),
            None => Vec::new(),
        };
        if proper_intersection(&a_pts, &b_pts, &common_pts) {
            return None;
        }
        if a.dim() == b.dim() {
            Some(Violation::InteriorOverlap(a.clone(), b.clone()))
        } else {
            Some(Violation::NonFaceIntersection(a.clone(), b.clone()))
        }
    }

    /// Canonical byte encoding: vertices sorted by coordinates and densely
    /// relabeled, then the sorted simplex list. Two complexes get equal
    /// encodings iff they are equal up to a coordinate-preserving relabeling.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut verts: Vec<(&Point, VertexId)> =
            self.coords.iter().map(|(v, p)| (p, *v)).collect();
        verts.sort();
        let relabel: BTreeMap<VertexId, usize> =
            verts.iter().enumerate().map(|(i, (_, v))| (*v, i)).collect();
        let mut out = String::new();
        out.push_str("gc0|");
        out.push_str(self.model.tag());
        out.push_str(&format!("|d{}|", self.ambient_dim));
        for (p, _) in &verts {
            out.push('[');
            out.push_str(&p.coords.iter().map(format_rat).join(","));
            out.push(']');
        }
        out.push('|');
        let mut spx: Vec<Vec<usize>> = self
            .complex
            .simplexes()
            .map(|s| {
                let mut ids: Vec<usize> = s.vertices().iter().map(|v| relabel[v]).collect();
                ids.sort_unstable();
                ids
            })
            .collect();
        spx.sort();
        for s in spx {
            out.push('(');
            out.push_str(&s.iter().map(|i| i.to_string()).join(","));
            out.push(')');
        }
        out.into_bytes()
    }

    /// SHA-256 of the canonical encoding, as lowercase hex.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.canonical_bytes());
        hex_string(&h.finalize())
    }

    /// The coordinate-matching vertex bijection onto `other`, if one exists
    /// and induces a simplex bijection.
    pub fn vertex_bijection(&self, other: &GeometricComplex) -> Option<BTreeMap<VertexId, VertexId>> {
        if self.model != other.model || self.ambient_dim != other.ambient_dim {
            return None;
        }
        if self.coords.len() != other.coords.len() {
            return None;
        }
        let mut mine: Vec<(&Point, VertexId)> = self.coords.iter().map(|(v, p)| (p, *v)).collect();
        let mut theirs: Vec<(&Point, VertexId)> =
            other.coords.iter().map(|(v, p)| (p, *v)).collect();
        mine.sort();
        theirs.sort();
        let mut map = BTreeMap::new();
        for ((pa, va), (pb, vb)) in mine.iter().zip(&theirs) {
            if pa != pb {
                return None;
            }
            map.insert(*va, *vb);
        }
        // must be injective on coordinates for the map to be well defined
        if mine.windows(2).any(|w| w[0].0 == w[1].0) {
            return None;
        }
        for s in self.complex.simplexes() {
            let mapped =
                AbstractSimplex::new(s.vertices().iter().map(|v| map[v]).collect()).ok()?;
            if !other.complex.contains(&mapped) {
                return None;
            }
        }
        if self.complex.len() != other.complex.len() {
            return None;
        }
        Some(map)
    }
}

/// True iff there is a vertex bijection matching coordinates exactly and
/// inducing a simplex bijection.
pub fn complexes_equal(a: &GeometricComplex, b: &GeometricComplex) -> bool {
    a.vertex_bijection(b).is_some()
}

pub fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn bbox_of(pts: &[Vec<Rat>]) -> (Vec<Rat>, Vec<Rat>) {
    let dim = pts[0].len();
    let mut lo = pts[0].clone();
    let mut hi = pts[0].clone();
    for p in &pts[1..] {
        for d in 0..dim {
            if p[d] < lo[d] {
                lo[d] = p[d].clone();
            }
            if p[d] > hi[d] {
                hi[d] = p[d].clone();
            }
        }
    }
    (lo, hi)
}

pub fn bbox_overlap(a: &(Vec<Rat>, Vec<Rat>), b: &(Vec<Rat>, Vec<Rat>)) -> bool {
    a.0.iter()
        .zip(&a.1)
        .zip(b.0.iter().zip(&b.1))
        .all(|((alo, ahi), (blo, bhi))| alo <= bhi && blo <= ahi)
}

/// Closed containment of `p` in the simplex spanned by `pts`.
pub fn simplex_contains(pts: &[Vec<Rat>], p: &[Rat]) -> bool {
    match linalg::affine_coords(pts, p) {
        Some(lam) => lam.iter().all(|l| !l.is_negative()),
        None => false,
    }
}

/// Strict (relative-interior) containment of `p` in the simplex on `pts`.
pub fn relint_contains(pts: &[Vec<Rat>], p: &[Rat]) -> bool {
    match linalg::affine_coords(pts, p) {
        Some(lam) => lam.iter().all(|l| l.is_positive()),
        None => false,
    }
}

/// Decides whether `|a| ∩ |b|` equals the hull of `common` (which may be
/// empty). Exact: candidate points are the basic solutions of the matching
/// system, whose images span the intersection polytope.
pub fn proper_intersection(a: &[Vec<Rat>], b: &[Vec<Rat>], common: &[Vec<Rat>]) -> bool {
    // quick accept/reject through facet hyperplanes of either simplex
    if let Some(ok) = facet_separation(a, b, common) {
        return ok;
    }
    if let Some(ok) = facet_separation(b, a, common) {
        return ok;
    }
    for cand in intersection_candidates(a, b) {
        let inside_common = !common.is_empty() && simplex_contains(common, &cand);
        if !inside_common {
            return false;
        }
    }
    true
}

/// Tries to certify the pair through one of `a`'s facet hyperplanes: either
/// all of `b` lies strictly outside (disjoint hulls), or the common vertices
/// lie on the hyperplane with the rest of `b` strictly outside (clean shared
/// face). Returns `None` when no facet decides. Requires `a` full-dimensional
/// in the ambient space.
fn facet_separation(a: &[Vec<Rat>], b: &[Vec<Rat>], common: &[Vec<Rat>]) -> Option<bool> {
    let dim = a[0].len();
    if a.len() != dim + 1 {
        return None;
    }
    for skip in 0..a.len() {
        let facet: Vec<&Vec<Rat>> =
            a.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, p)| p).collect();
        let opp = &a[skip];
        // inward affine functional: zero on facet, positive at opp
        let f = match hyperplane_through(&facet, opp) {
            Some(f) => f,
            None => continue,
        };
        let eval = |p: &[Rat]| -> Rat {
            let mut acc = f.1.clone();
            for (c, x) in f.0.iter().zip(p) {
                acc += c * x;
            }
            acc
        };
        if b.iter().all(|p| eval(p).is_negative()) {
            return Some(common.is_empty());
        }
        if !common.is_empty()
            && common.iter().all(|p| eval(p).is_zero())
            && b.iter()
                .filter(|p| !common.contains(p))
                .all(|p| eval(p).is_negative())
        {
            return Some(true);
        }
    }
    None
}

/// Affine functional vanishing on `facet` and equal to one at `opp`.
fn hyperplane_through(facet: &[&Vec<Rat>], opp: &[Rat]) -> Option<(Vec<Rat>, Rat)> {
    let dim = opp.len();
    // solve for (normal, offset): normal . f_i + offset = 0, normal . opp + offset = 1
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(dim + 1);
    let mut rhs: Vec<Rat> = Vec::with_capacity(dim + 1);
    for f in facet {
        let mut r = (*f).clone();
        r.push(Rat::from_integer(1.into()));
        rows.push(r);
        rhs.push(Rat::zero());
    }
    let mut r = opp.to_vec();
    r.push(Rat::from_integer(1.into()));
    rows.push(r);
    rhs.push(Rat::from_integer(1.into()));
    let sol = linalg::solve_square(&rows, &rhs)?;
    let (offset, normal) = sol.split_last().map(|(o, n)| (o.clone(), n.to_vec()))?;
    Some((normal, offset))
}

/// Images of all basic feasible solutions of `{x in |a|, x in |b|}` written
/// in joint barycentric form. Their convex hull is exactly `|a| ∩ |b|`.
pub fn intersection_candidates(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let dim = a[0].len();
    let na = a.len();
    let nb = b.len();
    let nvars = na + nb;
    // equality rows: sum lambda = 1, sum mu = 1, coordinate matching
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    let one = Rat::from_integer(1.into());
    let mut r = vec![Rat::zero(); nvars];
    r[..na].fill(one.clone());
    rows.push(r);
    rhs.push(one.clone());
    let mut r = vec![Rat::zero(); nvars];
    r[na..].fill(one.clone());
    rows.push(r);
    rhs.push(one.clone());
    for d in 0..dim {
        let mut r = vec![Rat::zero(); nvars];
        for (i, p) in a.iter().enumerate() {
            r[i] = p[d].clone();
        }
        for (j, q) in b.iter().enumerate() {
            r[na + j] = -q[d].clone();
        }
        rows.push(r);
        rhs.push(Rat::zero());
    }
    let rk = linalg::rank(&rows);
    let mut out: Vec<Vec<Rat>> = Vec::new();
    for basis in (0..nvars).combinations(rk) {
        // solve the rank-sized subsystem with nonbasic vars at zero
        let sub: Vec<Vec<Rat>> = rows
            .iter()
            .map(|r| basis.iter().map(|&c| r[c].clone()).collect())
            .collect();
        if linalg::rank(&sub) != rk {
            continue;
        }
        // pick rk independent rows
        let mut chosen_rows: Vec<usize> = Vec::new();
        let mut acc: Vec<Vec<Rat>> = Vec::new();
        for (ri, row) in sub.iter().enumerate() {
            let mut trial = acc.clone();
            trial.push(row.clone());
            if linalg::rank(&trial) == trial.len() {
                acc = trial;
                chosen_rows.push(ri);
                if acc.len() == rk {
                    break;
                }
            }
        }
        if acc.len() != rk {
            continue;
        }
        let small_rhs: Vec<Rat> = chosen_rows.iter().map(|&ri| rhs[ri].clone()).collect();
        let sol = match linalg::solve_square(&acc, &small_rhs) {
            Some(s) => s,
            None => continue,
        };
        let mut z = vec![Rat::zero(); nvars];
        for (bi, &c) in basis.iter().enumerate() {
            z[c] = sol[bi].clone();
        }
        // must satisfy all rows, not just the chosen independent ones
        let feasible = rows.iter().zip(&rhs).all(|(row, want)| {
            let got: Rat = row.iter().zip(&z).map(|(a, b)| a * b).sum();
            got == *want
        }) && z.iter().all(|x| !x.is_negative());
        if !feasible {
            continue;
        }
        let mut x = vec![Rat::zero(); dim];
        for (i, p) in a.iter().enumerate() {
            for d in 0..dim {
                x[d] += &z[i] * &p[d];
            }
        }
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// Decides whether the relative interiors of two simplexes meet, by exact
/// linear programming on joint barycentric coordinates.
pub fn relints_intersect(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> bool {
    use crate::lp::{Cmp, GenLp, GenOutcome};
    let dim = a[0].len();
    let na = a.len();
    let nb = b.len();
    // vars: lambda (na), mu (nb), t; all nonnegative
    let n = na + nb + 1;
    let mut lp = GenLp::new(n);
    lp.nonneg = vec![true; n];
    lp.objective[n - 1] = Rat::from_integer(1.into());
    let one = Rat::from_integer(1.into());
    let mut row = vec![Rat::zero(); n];
    row[..na].fill(one.clone());
    lp.push_row(row, Cmp::Eq, one.clone());
    let mut row = vec![Rat::zero(); n];
    row[na..na + nb].fill(one.clone());
    lp.push_row(row, Cmp::Eq, one.clone());
    for d in 0..dim {
        let mut row = vec![Rat::zero(); n];
        for (i, p) in a.iter().enumerate() {
            row[i] = p[d].clone();
        }
        for (j, q) in b.iter().enumerate() {
            row[na + j] = -q[d].clone();
        }
        lp.push_row(row, Cmp::Eq, Rat::zero());
    }
    for i in 0..na {
        let mut row = vec![Rat::zero(); n];
        row[i] = one.clone();
        row[n - 1] = -one.clone();
        lp.push_row(row, Cmp::Ge, Rat::zero());
    }
    for j in 0..nb {
        let mut row = vec![Rat::zero(); n];
        row[na + j] = one.clone();
        row[n - 1] = -one.clone();
        lp.push_row(row, Cmp::Ge, Rat::zero());
    }
    match lp.solve() {
        GenOutcome::Optimal { value, .. } => value.is_positive(),
        GenOutcome::Infeasible => false,
        GenOutcome::Unbounded => unreachable!("t is bounded by 1/(na)"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, ratio};

    fn pt(xs: &[i64]) -> Point {
        Point::new(xs.iter().map(|&x| rat(x)).collect())
    }

    fn spx(ids: &[u32]) -> AbstractSimplex {
        AbstractSimplex::from_ids(ids)
    }

    pub(crate) fn geo2d(maximal: &[&[u32]], coords: &[(u32, [i64; 2])]) -> GeometricComplex {
        let complex = Complex::from_maximal(maximal.iter().map(|m| spx(m)).collect());
        let coords = coords
            .iter()
            .map(|(v, [x, y])| (VertexId(*v), pt(&[*x, *y])))
            .collect();
        GeometricComplex::new(complex, coords, Model::Euclidean, 2).unwrap()
    }

    #[test]
    fn closure_counts() {
        let k = Complex::from_maximal(vec![spx(&[0, 1, 2])]);
        assert_eq!(k.len(), 7);
        let k = Complex::from_maximal(vec![spx(&[0, 1]), spx(&[1, 2])]);
        assert_eq!(k.len(), 5);
        let k = Complex::from_maximal(vec![spx(&[0, 1, 2]), spx(&[1, 2, 3])]);
        assert_eq!(k.len(), 11);
        assert_eq!(k.maximal().count(), 2);
        assert!(AbstractSimplex::new(vec![VertexId(1), VertexId(1)]).is_err());
    }

    #[test]
    fn link_examples() {
        // boundary of the 3-simplex on {0,1,2,3}
        let bd = Complex::from_maximal(vec![
            spx(&[0, 1, 2]),
            spx(&[0, 1, 3]),
            spx(&[0, 2, 3]),
            spx(&[1, 2, 3]),
        ]);
        let lk = bd.link(&spx(&[0])).unwrap();
        let expect = Complex::from_maximal(vec![spx(&[1, 2]), spx(&[1, 3]), spx(&[2, 3])]);
        assert_eq!(lk, expect);

        let two = Complex::from_maximal(vec![spx(&[0, 1, 2]), spx(&[1, 2, 3])]);
        let lk = two.link(&spx(&[1, 2])).unwrap();
        let expect = Complex::from_maximal(vec![spx(&[0]), spx(&[3])]);
        assert_eq!(lk, expect);

        let tri = Complex::from_maximal(vec![spx(&[0, 1, 2])]);
        assert!(tri.link(&spx(&[0, 1, 2])).unwrap().is_empty());
        assert!(tri.link(&spx(&[5])).is_err());
    }

    #[test]
    fn star_examples() {
        let path = Complex::from_maximal(vec![spx(&[0, 1]), spx(&[1, 2])]);
        assert_eq!(path.star(&spx(&[1])).unwrap(), path);

        let two = Complex::from_maximal(vec![spx(&[0, 1, 2]), spx(&[1, 2, 3])]);
        assert_eq!(two.star(&spx(&[1, 2])).unwrap(), two);
        assert_eq!(
            two.star(&spx(&[0, 1, 2])).unwrap(),
            Complex::from_maximal(vec![spx(&[0, 1, 2])])
        );
        // st(A,K) = A * lk(A,K)
        for a in [spx(&[1]), spx(&[1, 2]), spx(&[0, 1, 2])] {
            let lk = two.link(&a).unwrap();
            let joined = Complex::from_maximal(vec![a.clone()]).join(&lk).unwrap();
            assert_eq!(two.star(&a).unwrap(), joined);
        }
    }

    #[test]
    fn validation_accepts_right_triangle() {
        let g = geo2d(&[&[0, 1, 2]], &[(0, [0, 0]), (1, [1, 0]), (2, [0, 1])]);
        assert!(g.validate_geometric().is_valid());
    }

    #[test]
    fn validation_flags_crossing_diagonal_triangles() {
        // both triangles contain the square's center
        let g = geo2d(
            &[&[0, 1, 2], &[0, 1, 3]],
            &[(0, [0, 0]), (1, [1, 0]), (2, [1, 1]), (3, [0, 1])],
        );
        let report = g.validate_geometric();
        assert_eq!(report.violations.len(), 1);
        match &report.violations[0] {
            Violation::InteriorOverlap(a, b) => {
                assert_eq!((a.clone(), b.clone()), (spx(&[0, 1, 2]), spx(&[0, 1, 3])));
            }
            v => panic!("unexpected violation {v:?}"),
        }
    }

    #[test]
    fn validation_flags_collinear_triangle() {
        let g = geo2d(&[&[0, 1, 2]], &[(0, [0, 0]), (1, [1, 1]), (2, [2, 2])]);
        let report = g.validate_geometric();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Degenerate(s) if *s == spx(&[0, 1, 2]))));
    }

    #[test]
    fn validation_flags_vertex_inside_edge() {
        // a T-vertex: vertex 3 in the interior of edge {0,1}
        let g = geo2d(
            &[&[0, 1, 2], &[3, 4, 5]],
            &[
                (0, [0, 0]),
                (1, [2, 0]),
                (2, [1, 2]),
                (3, [1, 0]),
                (4, [0, -2]),
                (5, [2, -2]),
            ],
        );
        let report = g.validate_geometric();
        assert!(!report.is_valid());
    }

    #[test]
    fn equality_up_to_relabeling() {
        let a = geo2d(&[&[0, 1, 2]], &[(0, [0, 0]), (1, [1, 0]), (2, [0, 1])]);
        let b = geo2d(&[&[7, 3, 9]], &[(7, [0, 0]), (3, [1, 0]), (9, [0, 1])]);
        assert!(complexes_equal(&a, &b));
        assert_eq!(a.fingerprint(), b.fingerprint());

        let square02 = geo2d(
            &[&[0, 1, 2], &[0, 2, 3]],
            &[(0, [0, 0]), (1, [1, 0]), (2, [1, 1]), (3, [0, 1])],
        );
        let square13 = geo2d(
            &[&[0, 1, 3], &[1, 2, 3]],
            &[(0, [0, 0]), (1, [1, 0]), (2, [1, 1]), (3, [0, 1])],
        );
        assert!(!complexes_equal(&square02, &square13));
        assert_ne!(square02.fingerprint(), square13.fingerprint());

        let moved = geo2d(&[&[0, 1, 2]], &[(0, [0, 0]), (1, [1, 0]), (2, [0, 2])]);
        assert!(!complexes_equal(&a, &moved));
    }

    #[test]
    fn relint_predicates() {
        let tri = vec![
            vec![rat(0), rat(0)],
            vec![rat(2), rat(0)],
            vec![rat(0), rat(2)],
        ];
        assert!(relint_contains(&tri, &[ratio(1, 2), ratio(1, 2)]));
        assert!(!relint_contains(&tri, &[rat(1), rat(0)]));
        assert!(simplex_contains(&tri, &[rat(1), rat(0)]));

        // two triangles sharing an edge have disjoint interiors
        let other = vec![
            vec![rat(2), rat(0)],
            vec![rat(0), rat(2)],
            vec![rat(2), rat(2)],
        ];
        assert!(!relints_intersect(&tri, &other));
        // overlapping triangles
        let shifted = vec![
            vec![rat(1), rat(0)],
            vec![rat(3), rat(0)],
            vec![rat(1), rat(2)],
        ];
        assert!(relints_intersect(&tri, &shifted));
        // vertex strictly inside a triangle
        assert!(relints_intersect(&tri, &[vec![ratio(1, 2), ratio(1, 2)]]));
    }

    #[test]
    fn euler_and_boundary() {
        let two = Complex::from_maximal(vec![spx(&[0, 1, 2]), spx(&[1, 2, 3])]);
        assert_eq!(two.euler_characteristic(), 1);
        assert_eq!(two.boundary_facets().len(), 4);
    }
}
