//! Stellar subdivisions and welds, bistellar moves, and replayable flip
//! sequences.
//!
//! A bistellar move `kappa(A, B)` replaces `A * dB` with `dA * B` when
//! `lk(A) = dB`. Its geometric validity is decided exactly: the `n+2`
//! vertices of `A` and `B` must carry a unique affine dependence whose sign
//! classes are exactly the vertex sets of `A` and `B` (the Radon partition).
//! This single sign test rejects combinatorial flips that are not geometric,
//! such as flipping the separating diagonal of a non-convex quadrilateral.

use crate::complex::{
    relint_contains, AbstractSimplex, Complex, GeometricComplex, Point, Subcomplex, VertexId,
};
use crate::linalg;
use crate::rat::Rat;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveKind {
    StellarSubdivide,
    StellarWeld,
    Bistellar,
}

/// A stellar or bistellar event with enough data to replay and invert it.
///
/// `vertex` carries the id and exact coordinates of the vertex the move
/// introduces or deletes: the subdivision point for stellar moves, and the
/// dimension-zero side of a vertex-inserting or vertex-removing bistellar
/// move. Keeping coordinates on removals is what makes inversion exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Move {
    pub kind: MoveKind,
    pub a: AbstractSimplex,
    pub b: Option<AbstractSimplex>,
    pub vertex: Option<(VertexId, Point)>,
}

impl Move {
    pub fn subdivide(a: AbstractSimplex, id: VertexId, point: Point) -> Move {
        Move { kind: MoveKind::StellarSubdivide, a, b: None, vertex: Some((id, point)) }
    }

    pub fn weld(a: AbstractSimplex, id: VertexId, point: Point) -> Move {
        Move { kind: MoveKind::StellarWeld, a, b: None, vertex: Some((id, point)) }
    }

    pub fn bistellar(
        a: AbstractSimplex,
        b: AbstractSimplex,
        vertex: Option<(VertexId, Point)>,
    ) -> Move {
        Move { kind: MoveKind::Bistellar, a, b: Some(b), vertex }
    }

    /// The move undoing this one.
    pub fn inverse(&self) -> Move {
        match self.kind {
            MoveKind::StellarSubdivide => Move { kind: MoveKind::StellarWeld, ..self.clone() },
            MoveKind::StellarWeld => Move { kind: MoveKind::StellarSubdivide, ..self.clone() },
            MoveKind::Bistellar => Move {
                kind: MoveKind::Bistellar,
                a: self.b.clone().expect("bistellar move has B"),
                b: Some(self.a.clone()),
                vertex: self.vertex.clone(),
            },
        }
    }

    /// The simplex whose open star the move removes. No removed simplex may
    /// belong to a fixed subcomplex, and every removed simplex contains this
    /// anchor.
    pub fn removal_anchor(&self) -> AbstractSimplex {
        match self.kind {
            MoveKind::StellarSubdivide | MoveKind::Bistellar => self.a.clone(),
            MoveKind::StellarWeld => {
                let (id, _) = self.vertex.as_ref().expect("weld records its vertex");
                AbstractSimplex::new(vec![*id]).expect("single vertex")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("simplex {0} not in complex")]
    NotInComplex(String),
    #[error("simplex {0} already in complex")]
    AlreadyPresent(String),
    #[error("point is not interior to {0}")]
    NotInterior(String),
    #[error("vertex {0} already in use")]
    VertexNotFresh(VertexId),
    #[error("bistellar move needs a fresh vertex with coordinates when dim B = 0")]
    FreshVertexNeeded,
    #[error("link of {0} does not match the boundary of {1}")]
    LinkMismatch(String, String),
    #[error("star of {0} is not a subdivided simplex pattern")]
    WeldPatternMismatch(String),
    #[error("move is not geometric: {0}")]
    NotGeometric(String),
    #[error("move touches fixed subcomplex at {0}")]
    FixedSubcomplexTouched(String),
    #[error("fingerprint mismatch at {0}")]
    FingerprintMismatch(&'static str),
    #[error("step {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<MoveError>,
    },
}

fn at_step(step: usize, e: MoveError) -> MoveError {
    MoveError::AtStep { step, source: Box::new(e) }
}

/// Replaces `st(A, K)` with `a * dA * lk(A, K)` for a point `a` in the open
/// interior of `|A|`.
pub fn stellar_subdivide(
    g: &GeometricComplex,
    a: &AbstractSimplex,
    id: VertexId,
    point: &Point,
) -> Result<GeometricComplex, MoveError> {
    if !g.complex.contains(a) {
        return Err(MoveError::NotInComplex(a.to_string()));
    }
    if g.coords().contains_key(&id) {
        return Err(MoveError::VertexNotFresh(id));
    }
    if !relint_contains(&g.simplex_points(a), &point.coords) {
        return Err(MoveError::NotInterior(a.to_string()));
    }
    let link = g.complex.link(a).expect("A is in the complex");
    let mut simplexes: BTreeSet<AbstractSimplex> =
        g.complex.simplexes().filter(|s| !a.is_face_of(s)).cloned().collect();
    let apex = AbstractSimplex::new(vec![id]).expect("fresh vertex");
    // a * dA * lk(A): proper face of A (possibly absent) joined with a link
    // simplex (possibly absent) and always the apex
    let mut boundary_parts: Vec<Option<AbstractSimplex>> = vec![None];
    for f in a.faces() {
        if f != *a {
            boundary_parts.push(Some(f));
        }
    }
    let mut link_parts: Vec<Option<AbstractSimplex>> = vec![None];
    link_parts.extend(link.simplexes().cloned().map(Some));
    for bp in &boundary_parts {
        for lp in &link_parts {
            let mut s = apex.clone();
            if let Some(bp) = bp {
                s = s.join(bp).expect("disjoint");
            }
            if let Some(lp) = lp {
                s = s.join(lp).expect("disjoint");
            }
            simplexes.insert(s);
        }
    }
    let mut coords = g.coords().clone();
    coords.insert(id, point.clone());
    let complex = Complex::from_closed_set(simplexes);
    Ok(GeometricComplex::new(complex, coords, g.model, g.ambient_dim)
        .expect("coords remain total"))
}

/// Convenience wrapper allocating the next free vertex id.
pub fn stellar_subdivide_fresh(
    g: &GeometricComplex,
    a: &AbstractSimplex,
    point: &Point,
) -> Result<(GeometricComplex, VertexId), MoveError> {
    let id = VertexId(g.next_vertex_id());
    stellar_subdivide(g, a, id, point).map(|out| (out, id))
}

/// Inverse of [`stellar_subdivide`]: removes vertex `welded` and restores the
/// simplex `a`.
pub fn stellar_weld(
    g: &GeometricComplex,
    a: &AbstractSimplex,
    welded: VertexId,
) -> Result<GeometricComplex, MoveError> {
    let vs = AbstractSimplex::new(vec![welded]).expect("vertex simplex");
    if !g.complex.contains(&vs) {
        return Err(MoveError::NotInComplex(vs.to_string()));
    }
    if g.complex.contains(a) {
        return Err(MoveError::AlreadyPresent(a.to_string()));
    }
    for v in a.vertices() {
        let s = AbstractSimplex::new(vec![*v]).expect("vertex simplex");
        if !g.complex.contains(&s) {
            return Err(MoveError::NotInComplex(s.to_string()));
        }
    }
    let lk_a = g.complex.link(&vs).expect("vertex in complex");
    // expect lk(a) = dA * L: recover L as the simplexes of lk(a) disjoint
    // from A whose join with every facet of A stays in lk(a)
    let facets = a.facets();
    if !facets.iter().all(|f| lk_a.contains(f)) {
        return Err(MoveError::WeldPatternMismatch(vs.to_string()));
    }
    let mut l_simplexes = BTreeSet::new();
    for b in lk_a.simplexes() {
        if b.vertices().iter().any(|v| a.contains(*v)) {
            continue;
        }
        if facets.iter().all(|f| f.join(b).map(|j| lk_a.contains(&j)).unwrap_or(false)) {
            l_simplexes.insert(b.clone());
        }
    }
    let link = Complex::from_closed_set(l_simplexes);
    // verify the pattern exactly: lk(a) == dA * L
    let boundary = Complex::from_maximal(facets.clone());
    let rebuilt = boundary.join(&link).expect("A and L vertex-disjoint");
    if rebuilt != lk_a {
        return Err(MoveError::WeldPatternMismatch(vs.to_string()));
    }
    // geometric: the welded vertex must sit in the open interior of |A|
    if !relint_contains(&g.simplex_points(a), &g.point(welded).coords) {
        return Err(MoveError::NotInterior(a.to_string()));
    }
    let mut simplexes: BTreeSet<AbstractSimplex> =
        g.complex.simplexes().filter(|s| !s.contains(welded)).cloned().collect();
    let mut link_parts: Vec<Option<AbstractSimplex>> = vec![None];
    link_parts.extend(link.simplexes().cloned().map(Some));
    for fa in a.faces() {
        for lp in &link_parts {
            let s = match lp {
                Some(lp) => fa.join(lp).expect("disjoint"),
                None => fa.clone(),
            };
            simplexes.insert(s);
        }
    }
    let mut coords = g.coords().clone();
    coords.remove(&welded);
    let complex = Complex::from_closed_set(simplexes);
    Ok(GeometricComplex::new(complex, coords, g.model, g.ambient_dim)
        .expect("coords remain total"))
}

/// The Radon-partition test at the heart of geometric bistellar validity:
/// the combined vertex points must carry a unique affine dependence with no
/// zero coefficient, whose positive and negative classes are exactly the two
/// given vertex sets.
fn radon_classes_match(a_pts: &[Vec<Rat>], b_pts: &[Vec<Rat>]) -> Result<(), MoveError> {
    let dim = a_pts[0].len();
    let mut cols: Vec<Vec<Rat>> = Vec::new();
    cols.extend(a_pts.iter().cloned());
    cols.extend(b_pts.iter().cloned());
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(dim + 1);
    for d in 0..dim {
        rows.push(cols.iter().map(|p| p[d].clone()).collect());
    }
    rows.push(vec![Rat::one(); cols.len()]);
    let kernel = linalg::kernel_vector(&rows)
        .ok_or_else(|| MoveError::NotGeometric("vertex configuration is degenerate".into()))?;
    if kernel.iter().any(|c| c.is_zero()) {
        return Err(MoveError::NotGeometric(
            "vertex configuration is not in general position".into(),
        ));
    }
    let na = a_pts.len();
    let a_sign = kernel[0].is_positive();
    let a_uniform = kernel[..na].iter().all(|c| c.is_positive() == a_sign);
    let b_uniform = kernel[na..].iter().all(|c| c.is_positive() != a_sign);
    if a_uniform && b_uniform {
        Ok(())
    } else {
        Err(MoveError::NotGeometric(
            "point sets of A*dB and dA*B differ (Radon partition mismatch)".into(),
        ))
    }
}

/// The bistellar move `kappa(A, B)`: replaces `A * dB` with `dA * B`.
///
/// When `dim B = 0` the move introduces a vertex and `fresh` must supply its
/// id and interior coordinates; when `dim A = 0` the move deletes the vertex
/// of `A`.
pub fn bistellar_move(
    g: &GeometricComplex,
    a: &AbstractSimplex,
    b: &AbstractSimplex,
    fresh: Option<&(VertexId, Point)>,
) -> Result<GeometricComplex, MoveError> {
    if !g.complex.contains(a) {
        return Err(MoveError::NotInComplex(a.to_string()));
    }
    if g.complex.contains(b) {
        return Err(MoveError::AlreadyPresent(b.to_string()));
    }
    let mut coords = g.coords().clone();
    if b.dim() == 0 {
        let (id, point) = fresh.ok_or(MoveError::FreshVertexNeeded)?;
        if *id != b.vertices()[0] {
            return Err(MoveError::FreshVertexNeeded);
        }
        if coords.contains_key(id) {
            return Err(MoveError::VertexNotFresh(*id));
        }
        coords.insert(*id, point.clone());
    } else {
        for v in b.vertices() {
            if !coords.contains_key(v) {
                return Err(MoveError::NotInComplex(format!("{v}")));
            }
        }
    }
    // combinatorial precondition: lk(A) = dB
    let lk = g.complex.link(a).expect("A in complex");
    let expected =
        if b.dim() == 0 { Complex::empty() } else { Complex::from_maximal(b.facets()) };
    if lk != expected {
        return Err(MoveError::LinkMismatch(a.to_string(), b.to_string()));
    }
    // geometric validity via the Radon partition of the n+2 points
    let a_pts = g.simplex_points(a);
    let b_pts: Vec<Vec<Rat>> =
        b.vertices().iter().map(|v| coords[v].coords.clone()).collect();
    radon_classes_match(&a_pts, &b_pts)?;

    let mut simplexes: BTreeSet<AbstractSimplex> =
        g.complex.simplexes().filter(|s| !a.is_face_of(s)).cloned().collect();
    // insert dA * B closed: proper face of A (possibly absent) with a face of B
    let mut a_parts: Vec<Option<AbstractSimplex>> = vec![None];
    for f in a.faces() {
        if f != *a {
            a_parts.push(Some(f));
        }
    }
    for fb in b.faces() {
        for fa in &a_parts {
            let s = match fa {
                Some(fa) => fa.join(&fb).expect("A and B vertex-disjoint"),
                None => fb.clone(),
            };
            simplexes.insert(s);
        }
    }
    if a.dim() == 0 {
        coords.remove(&a.vertices()[0]);
    }
    let complex = Complex::from_closed_set(simplexes);
    Ok(GeometricComplex::new(complex, coords, g.model, g.ambient_dim)
        .expect("coords remain total"))
}

/// Applies one recorded move.
pub fn apply_move(g: &GeometricComplex, m: &Move) -> Result<GeometricComplex, MoveError> {
    match m.kind {
        MoveKind::StellarSubdivide => {
            let (id, point) = m.vertex.as_ref().ok_or(MoveError::FreshVertexNeeded)?;
            stellar_subdivide(g, &m.a, *id, point)
        }
        MoveKind::StellarWeld => {
            let (id, _) = m.vertex.as_ref().ok_or(MoveError::FreshVertexNeeded)?;
            stellar_weld(g, &m.a, *id)
        }
        MoveKind::Bistellar => {
            let b = m.b.as_ref().expect("bistellar move has B");
            bistellar_move(g, &m.a, b, m.vertex.as_ref())
        }
    }
}

/// An ordered, replayable, invertible sequence of moves with endpoint
/// fingerprints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipSequence {
    pub moves: Vec<Move>,
    pub start_fingerprint: String,
    pub end_fingerprint: String,
    pub fixed_subcomplex: Option<Subcomplex>,
}

impl FlipSequence {
    pub fn identity(g: &GeometricComplex) -> FlipSequence {
        let fp = g.fingerprint();
        FlipSequence {
            moves: Vec::new(),
            start_fingerprint: fp.clone(),
            end_fingerprint: fp,
            fixed_subcomplex: None,
        }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Counts by move kind `(subdivides, welds, bistellar)`.
    pub fn counts(&self) -> (usize, usize, usize) {
        let mut c = (0, 0, 0);
        for m in &self.moves {
            match m.kind {
                MoveKind::StellarSubdivide => c.0 += 1,
                MoveKind::StellarWeld => c.1 += 1,
                MoveKind::Bistellar => c.2 += 1,
            }
        }
        c
    }
}

/// Replays a sequence with per-move geometric validation and endpoint
/// fingerprint checks. Errors carry the failing step index.
pub fn apply_sequence(
    g: &GeometricComplex,
    seq: &FlipSequence,
) -> Result<GeometricComplex, MoveError> {
    if g.fingerprint() != seq.start_fingerprint {
        return Err(MoveError::FingerprintMismatch("sequence start"));
    }
    let mut cur = g.clone();
    for (step, m) in seq.moves.iter().enumerate() {
        if let Some(fixed) = &seq.fixed_subcomplex {
            let anchor = m.removal_anchor();
            if fixed.contains(&anchor) {
                return Err(at_step(
                    step,
                    MoveError::FixedSubcomplexTouched(anchor.to_string()),
                ));
            }
        }
        cur = apply_move(&cur, m).map_err(|e| at_step(step, e))?;
    }
    if cur.fingerprint() != seq.end_fingerprint {
        return Err(MoveError::FingerprintMismatch("sequence end"));
    }
    Ok(cur)
}

/// Reversed sequence with each move inverted and the fingerprints swapped.
pub fn invert_sequence(seq: &FlipSequence) -> FlipSequence {
    FlipSequence {
        moves: seq.moves.iter().rev().map(Move::inverse).collect(),
        start_fingerprint: seq.end_fingerprint.clone(),
        end_fingerprint: seq.start_fingerprint.clone(),
        fixed_subcomplex: seq.fixed_subcomplex.clone(),
    }
}

/// Concatenates sequences whose endpoints agree.
pub fn concat_sequences(parts: &[FlipSequence]) -> Option<FlipSequence> {
    let first = parts.first()?;
    let mut moves = Vec::new();
    let mut cur_fp = first.start_fingerprint.clone();
    for p in parts {
        if p.start_fingerprint != cur_fp {
            return None;
        }
        moves.extend(p.moves.iter().cloned());
        cur_fp = p.end_fingerprint.clone();
    }
    Some(FlipSequence {
        moves,
        start_fingerprint: first.start_fingerprint.clone(),
        end_fingerprint: cur_fp,
        fixed_subcomplex: first.fixed_subcomplex.clone(),
    })
}
