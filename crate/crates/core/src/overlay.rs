//! Exact simplex intersection, common refinement of two triangulations into
//! a polytopal complex, and its triangulation by coning non-simplex cells.
//!
//! Intersections are computed two ways inside the crate: a general
//! basic-solution enumeration valid in any ambient dimension up to four
//! (`simplex_intersection`), and exact convex polygon clipping for the
//! two-dimensional overlay path. Planar overlays are what the end-to-end
//! pipeline consumes; higher-dimensional overlay is out of scope here.

use crate::complex::{
    bbox_of, bbox_overlap, intersection_candidates, simplex_contains, AbstractSimplex, Complex,
    GeometricComplex, Point, Subcomplex, VertexId,
};
use crate::lp::{Cmp, GenLp, GenOutcome};
use crate::rat::Rat;
use crate::subdivide::PickBook;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OverlayError {
    #[error("supports differ")]
    SupportMismatch,
    #[error("overlay requires two-dimensional Euclidean-chart complexes")]
    Unsupported,
    #[error("cell is not convex")]
    NonConvexCell,
    #[error("fixed subcomplex not respected at {0}")]
    FixedNotRespected(String),
}

/// Exact vertex description of `|S| ∩ |T|`: the extreme points of the
/// intersection polytope, empty when the simplexes do not meet.
pub fn simplex_intersection(s_pts: &[Vec<Rat>], t_pts: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let candidates = intersection_candidates(s_pts, t_pts);
    extreme_points(candidates)
}

/// Filters a finite point set down to its extreme points.
pub fn extreme_points(points: Vec<Vec<Rat>>) -> Vec<Vec<Rat>> {
    let mut out = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let others: Vec<&Vec<Rat>> =
            points.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| q).collect();
        if !in_convex_hull(p, &others) {
            out.push(p.clone());
        }
    }
    out
}

fn in_convex_hull(p: &[Rat], hull: &[&Vec<Rat>]) -> bool {
    if hull.is_empty() {
        return false;
    }
    let dim = p.len();
    let n = hull.len();
    let mut lp = GenLp::feasibility(n);
    lp.nonneg = vec![true; n];
    lp.push_row(vec![Rat::one(); n], Cmp::Eq, Rat::one());
    for d in 0..dim {
        lp.push_row(hull.iter().map(|q| q[d].clone()).collect(), Cmp::Eq, p[d].clone());
    }
    matches!(lp.solve(), GenOutcome::Optimal { .. })
}

// ---------------------------------------------------------------------------
// planar polygon primitives

/// Signed doubled area of a polygon given by an ordered vertex cycle.
pub fn polygon_area2(cycle: &[Vec<Rat>]) -> Rat {
    let mut acc = Rat::zero();
    let n = cycle.len();
    for i in 0..n {
        let a = &cycle[i];
        let b = &cycle[(i + 1) % n];
        acc += &a[0] * &b[1] - &a[1] * &b[0];
    }
    acc
}

fn cross(o: &[Rat], a: &[Rat], b: &[Rat]) -> Rat {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// Orders a set of distinct planar points counterclockwise around their
/// centroid. Input must be in convex position.
pub fn sort_ccw(points: Vec<Vec<Rat>>) -> Vec<Vec<Rat>> {
    let n = points.len();
    if n <= 2 {
        return points;
    }
    let k = Rat::from_integer((n as i64).into());
    let cx: Rat = points.iter().map(|p| p[0].clone()).sum::<Rat>() / &k;
    let cy: Rat = points.iter().map(|p| p[1].clone()).sum::<Rat>() / &k;
    let c = vec![cx, cy];
    let half = |p: &Vec<Rat>| -> u8 {
        let dy = &p[1] - &c[1];
        let dx = &p[0] - &c[0];
        if dy.is_positive() || (dy.is_zero() && dx.is_positive()) {
            0
        } else {
            1
        }
    };
    let mut pts = points;
    pts.sort_by(|a, b| {
        half(a).cmp(&half(b)).then_with(|| {
            let cr = cross(&c, a, b);
            if cr.is_positive() {
                std::cmp::Ordering::Less
            } else if cr.is_negative() {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            }
        })
    });
    pts
}

/// Clips a convex polygon (ccw cycle) by the closed halfplane on the left of
/// the directed line `a -> b`. Exact Sutherland-Hodgman step.
fn clip_halfplane(cycle: &[Vec<Rat>], a: &[Rat], b: &[Rat]) -> Vec<Vec<Rat>> {
    let side = |p: &[Rat]| cross(a, b, p);
    let mut out: Vec<Vec<Rat>> = Vec::new();
    let n = cycle.len();
    for i in 0..n {
        let cur = &cycle[i];
        let nxt = &cycle[(i + 1) % n];
        let sc = side(cur);
        let sn = side(nxt);
        if !sc.is_negative() {
            out.push(cur.clone());
        }
        if (sc.is_negative() && sn.is_positive()) || (sc.is_positive() && sn.is_negative()) {
            // exact intersection of segment cur-nxt with the line
            let t = &sc / (&sc - &sn);
            let p = vec![
                &cur[0] + (&nxt[0] - &cur[0]) * &t,
                &cur[1] + (&nxt[1] - &cur[1]) * &t,
            ];
            out.push(p);
        }
    }
    out.dedup();
    if out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

/// Exact intersection of two convex polygons given as ccw cycles. Returns the
/// ccw cycle of the intersection, or empty when it is lower-dimensional.
pub fn convex_clip(subject: &[Vec<Rat>], clip: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut cur = subject.to_vec();
    let n = clip.len();
    for i in 0..n {
        if cur.is_empty() {
            return Vec::new();
        }
        cur = clip_halfplane(&cur, &clip[i], &clip[(i + 1) % n]);
    }
    if cur.len() < 3 || !polygon_area2(&cur).is_positive() {
        return Vec::new();
    }
    cur
}

/// Ensures a triangle's points are in ccw order.
pub fn ccw_triangle(mut pts: Vec<Vec<Rat>>) -> Vec<Vec<Rat>> {
    if polygon_area2(&pts).is_negative() {
        pts.swap(1, 2);
    }
    pts
}

// ---------------------------------------------------------------------------
// polytopal complexes

/// One convex cell of an overlay, with its vertex cycle and the maximal
/// simplexes of the two inputs it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyCell {
    /// ccw-ordered vertex ids of the polygon.
    pub vertices: Vec<VertexId>,
    pub parent1: AbstractSimplex,
    pub parent2: AbstractSimplex,
}

/// Face-to-face collection of convex cells produced by intersecting two
/// triangulations of the same planar support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolytopalComplex {
    pub ambient_dim: usize,
    pub coords: BTreeMap<VertexId, Point>,
    pub cells: Vec<PolyCell>,
}

impl PolytopalComplex {
    pub fn cell_points(&self, cell: &PolyCell) -> Vec<Vec<Rat>> {
        cell.vertices.iter().map(|v| self.coords[v].coords.clone()).collect()
    }

    /// Total doubled area over all cells.
    pub fn total_area2(&self) -> Rat {
        self.cells.iter().map(|c| polygon_area2(&self.cell_points(c))).sum()
    }

    /// Edge cells (consecutive vertex pairs) of the face structure.
    pub fn edges(&self) -> BTreeSet<AbstractSimplex> {
        let mut out = BTreeSet::new();
        for c in &self.cells {
            let n = c.vertices.len();
            for i in 0..n {
                let e = AbstractSimplex::new(vec![c.vertices[i], c.vertices[(i + 1) % n]])
                    .expect("distinct endpoints");
                out.insert(e);
            }
        }
        out
    }
}

/// Key for exact coordinate deduplication.
fn coord_key(p: &[Rat]) -> Vec<Rat> {
    p.to_vec()
}

/// Intersects the maximal simplexes of two planar triangulations of the same
/// support into a face-to-face polytopal complex. Vertex ids reuse `g1`'s
/// then `g2`'s ids where coordinates coincide; genuinely new intersection
/// points get fresh ids from `book`.
pub fn common_refinement(
    g1: &GeometricComplex,
    g2: &GeometricComplex,
    book: &mut PickBook,
) -> Result<PolytopalComplex, OverlayError> {
    if g1.ambient_dim != 2 || g2.ambient_dim != 2 || g1.model != g2.model {
        return Err(OverlayError::Unsupported);
    }
    if g1.total_volume() != g2.total_volume() {
        return Err(OverlayError::SupportMismatch);
    }
    book.reserve(g1);
    book.reserve(g2);
    let mut id_of: BTreeMap<Vec<Rat>, VertexId> = BTreeMap::new();
    let mut coords: BTreeMap<VertexId, Point> = BTreeMap::new();
    for g in [g1, g2] {
        for (v, p) in g.coords() {
            id_of.entry(coord_key(&p.coords)).or_insert_with(|| {
                coords.insert(*v, p.clone());
                *v
            });
        }
    }
    let mut cells = Vec::new();
    let mut covered = Rat::zero();
    let g2_tops: Vec<(&AbstractSimplex, Vec<Vec<Rat>>, (Vec<Rat>, Vec<Rat>))> = g2
        .complex
        .maximal()
        .map(|t| {
            let pts = ccw_triangle(g2.simplex_points(t));
            let bb = bbox_of(&pts);
            (t, pts, bb)
        })
        .collect();
    for s in g1.complex.maximal() {
        let s_pts = ccw_triangle(g1.simplex_points(s));
        let s_box = bbox_of(&s_pts);
        for (t, t_pts, t_box) in &g2_tops {
            if !bbox_overlap(&s_box, t_box) {
                continue;
            }
            let piece = convex_clip(&s_pts, t_pts);
            if piece.is_empty() {
                continue;
            }
            covered += polygon_area2(&piece);
            let mut ids = Vec::with_capacity(piece.len());
            for p in &piece {
                let id = *id_of.entry(coord_key(p)).or_insert_with(|| {
                    let id = book.fresh_id();
                    coords.insert(id, Point::new(p.clone()));
                    id
                });
                ids.push(id);
            }
            cells.push(PolyCell {
                vertices: ids,
                parent1: s.clone(),
                parent2: (*t).clone(),
            });
        }
    }
    // the pieces must tile the support exactly
    if covered != g1.total_volume() {
        return Err(OverlayError::SupportMismatch);
    }
    let used: BTreeSet<VertexId> =
        cells.iter().flat_map(|c| c.vertices.iter().copied()).collect();
    coords.retain(|v, _| used.contains(v));
    Ok(PolytopalComplex { ambient_dim: 2, coords, cells })
}

/// Triangulates a polytopal complex: simplex cells are kept, non-simplex
/// cells are coned from the centroid of their vertices over their boundary
/// edges. Cells of `fixed` must appear among the faces and are never
/// touched.
pub fn triangulate_polytopal(
    c: &PolytopalComplex,
    fixed: &Subcomplex,
    book: &mut PickBook,
) -> Result<GeometricComplex, OverlayError> {
    let mut maximal: Vec<AbstractSimplex> = Vec::new();
    let mut coords = c.coords.clone();
    for cell in &c.cells {
        let pts = c.cell_points(cell);
        if !convex_ccw(&pts) {
            return Err(OverlayError::NonConvexCell);
        }
        let k = cell.vertices.len();
        if k == 3 {
            maximal.push(
                AbstractSimplex::new(cell.vertices.clone()).expect("distinct vertices"),
            );
            continue;
        }
        // fan from the vertex centroid
        let kq = Rat::from_integer((k as i64).into());
        let cx: Rat = pts.iter().map(|p| p[0].clone()).sum::<Rat>() / &kq;
        let cy: Rat = pts.iter().map(|p| p[1].clone()).sum::<Rat>() / &kq;
        let key = AbstractSimplex::new(cell.vertices.clone()).expect("distinct vertices");
        let (cid, cpt) = book.pick_point(&key, Point::new(vec![cx, cy]));
        coords.insert(cid, cpt);
        for i in 0..k {
            maximal.push(
                AbstractSimplex::new(vec![cell.vertices[i], cell.vertices[(i + 1) % k], cid])
                    .expect("distinct vertices"),
            );
        }
    }
    let complex = Complex::from_maximal(maximal);
    for s in fixed.iter() {
        if !complex.contains(s) {
            return Err(OverlayError::FixedNotRespected(s.to_string()));
        }
    }
    let used = complex.vertices();
    coords.retain(|v, _| used.contains(v));
    Ok(GeometricComplex::new(complex, coords, crate::complex::Model::Euclidean, 2)
        .expect("triangulation coordinates are total"))
}

fn convex_ccw(cycle: &[Vec<Rat>]) -> bool {
    let n = cycle.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        let c = cross(&cycle[i], &cycle[(i + 1) % n], &cycle[(i + 2) % n]);
        if c.is_negative() {
            return false;
        }
    }
    polygon_area2(cycle).is_positive()
}

/// Convenience: overlay two triangulations and triangulate the result.
pub fn refine_and_triangulate(
    g1: &GeometricComplex,
    g2: &GeometricComplex,
    fixed: &Subcomplex,
    book: &mut PickBook,
) -> Result<GeometricComplex, OverlayError> {
    let c = common_refinement(g1, g2, book)?;
    triangulate_polytopal(&c, fixed, book)
}

/// Checks that every maximal simplex of `sub` lies inside a maximal simplex
/// of each of `g1` and `g2` (exact containment).
pub fn is_common_subdivision(
    sub: &GeometricComplex,
    g1: &GeometricComplex,
    g2: &GeometricComplex,
) -> bool {
    for g in [g1, g2] {
        let tops: Vec<Vec<Vec<Rat>>> = g.complex.maximal().map(|m| g.simplex_points(m)).collect();
        for t in sub.complex.maximal() {
            let pts = sub.simplex_points(t);
            if !tops.iter().any(|mp| pts.iter().all(|p| simplex_contains(mp, p))) {
                return false;
            }
        }
        if g.total_volume() != sub.total_volume() {
            return false;
        }
    }
    true
}
