//! Derived subdivisions, relative to a fixed subcomplex, and the
//! interpolating subdivisions between a complex and one of its geometric
//! subdivisions.
//!
//! Interior points come from a [`PickBook`]: a shared allocator memoizing the
//! chosen vertex id and coordinates per subdivided simplex. Sharing one book
//! across related constructions (the levels of an interpolating tower, the
//! two cones of a connect) makes common subcomplexes subdivide identically,
//! ids included, which is what lets flip sequences compose literally.

use crate::complex::{
    bbox_of, simplex_contains, AbstractSimplex, Complex, GeometricComplex, Point, Subcomplex,
    VertexId,
};
use crate::moves::{stellar_subdivide, MoveError};
use crate::rat::Rat;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubdivisionError {
    #[error("{0}")]
    Move(#[from] MoveError),
    #[error("complex is not a subdivision of the base: {0}")]
    NotSubdivision(String),
    #[error("subdivision disagrees with the base on the fixed subcomplex at {0}")]
    DisagreesOnFixed(String),
    #[error("level {0} out of range")]
    BadLevel(usize),
}

/// Allocator and memo for subdivision vertices, keyed by the vertex set of
/// the subdivided simplex.
#[derive(Debug, Clone, Default)]
pub struct PickBook {
    next_id: u32,
    map: HashMap<Vec<VertexId>, (VertexId, Point)>,
}

impl PickBook {
    pub fn new(next_id: u32) -> Self {
        PickBook { next_id, map: HashMap::new() }
    }

    /// Makes sure fresh ids stay clear of every id in `g`.
    pub fn reserve(&mut self, g: &GeometricComplex) {
        self.next_id = self.next_id.max(g.next_vertex_id());
    }

    pub fn fresh_id(&mut self) -> VertexId {
        let id = VertexId(self.next_id);
        self.next_id += 1;
        id
    }

    /// The memoized pick for `a`, defaulting to its barycenter in `g`.
    pub fn pick_barycenter(
        &mut self,
        g: &GeometricComplex,
        a: &AbstractSimplex,
    ) -> (VertexId, Point) {
        if let Some(hit) = self.map.get(a.vertices()) {
            return hit.clone();
        }
        let id = self.fresh_id();
        let p = g.barycenter(a);
        self.map.insert(a.vertices().to_vec(), (id, p.clone()));
        (id, p)
    }

    /// The memoized pick for `a` with an explicit point.
    pub fn pick_point(&mut self, a: &AbstractSimplex, point: Point) -> (VertexId, Point) {
        if let Some(hit) = self.map.get(a.vertices()) {
            return hit.clone();
        }
        let id = self.fresh_id();
        self.map.insert(a.vertices().to_vec(), (id, point.clone()));
        (id, point)
    }

    pub fn lookup(&self, a: &AbstractSimplex) -> Option<&(VertexId, Point)> {
        self.map.get(a.vertices())
    }
}

/// Derived subdivision relative to `fixed`: stellar subdivision of every
/// simplex not in `fixed` of dimension at least one, in decreasing dimension
/// order, at the points supplied by `book` (barycenters by default).
pub fn derived_subdivision(
    g: &GeometricComplex,
    fixed: &Subcomplex,
    book: &mut PickBook,
) -> Result<GeometricComplex, MoveError> {
    book.reserve(g);
    let n = match g.complex.dim() {
        Some(n) => n,
        None => return Ok(g.clone()),
    };
    let mut cur = g.clone();
    for d in (1..=n).rev() {
        let targets: Vec<AbstractSimplex> = g
            .complex
            .simplexes_of_dim(d)
            .filter(|s| !fixed.contains(s))
            .cloned()
            .collect();
        for a in targets {
            let (id, p) = book.pick_barycenter(g, &a);
            cur = stellar_subdivide(&cur, &a, id, &p)?;
        }
    }
    Ok(cur)
}

/// `s` rounds of [`derived_subdivision`] with a shared book.
pub fn derived_power(
    g: &GeometricComplex,
    fixed: &Subcomplex,
    s: usize,
    book: &mut PickBook,
) -> Result<GeometricComplex, MoveError> {
    let mut cur = g.clone();
    for _ in 0..s {
        cur = derived_subdivision(&cur, fixed, book)?;
    }
    Ok(cur)
}

/// Convenience wrapper with a throwaway barycentric book.
pub fn derived_barycentric(
    g: &GeometricComplex,
    fixed: &Subcomplex,
) -> Result<GeometricComplex, MoveError> {
    derived_subdivision(g, fixed, &mut PickBook::new(g.next_vertex_id()))
}

/// The simplexes of `alpha` whose closed hull lies inside `|a|` (all their
/// vertices are contained in the hull of `a`'s points in `g`).
pub fn restriction_to_simplex(
    g: &GeometricComplex,
    alpha: &GeometricComplex,
    a: &AbstractSimplex,
) -> BTreeSet<AbstractSimplex> {
    let a_pts = g.simplex_points(a);
    let abox = bbox_of(&a_pts);
    let mut inside_vertex: BTreeMap<VertexId, bool> = BTreeMap::new();
    for (v, p) in alpha.coords() {
        let within_box = p
            .coords
            .iter()
            .zip(abox.0.iter().zip(&abox.1))
            .all(|(x, (lo, hi))| lo <= x && x <= hi);
        let inside = within_box && simplex_contains(&a_pts, &p.coords);
        inside_vertex.insert(*v, inside);
    }
    alpha
        .complex
        .simplexes()
        .filter(|s| s.vertices().iter().all(|v| inside_vertex[v]))
        .cloned()
        .collect()
}

/// Checks that `alpha` is a geometric subdivision of `g` that agrees with
/// `g` on `fixed` (same simplexes, same ids, same coordinates).
pub fn verify_subdivision(
    g: &GeometricComplex,
    alpha: &GeometricComplex,
    fixed: &Subcomplex,
) -> Result<(), SubdivisionError> {
    if alpha.model != g.model || alpha.ambient_dim != g.ambient_dim {
        return Err(SubdivisionError::NotSubdivision("model or dimension differ".into()));
    }
    let g_max: Vec<Vec<Vec<Rat>>> =
        g.complex.maximal().map(|m| g.simplex_points(m)).collect();
    for t in alpha.complex.maximal() {
        let t_pts = alpha.simplex_points(t);
        let hit = g_max.iter().any(|pts| t_pts.iter().all(|p| simplex_contains(pts, p)));
        if !hit {
            return Err(SubdivisionError::NotSubdivision(t.to_string()));
        }
    }
    // exact support match on full-dimensional volume
    if g.total_volume() != alpha.total_volume() {
        return Err(SubdivisionError::NotSubdivision("supports differ in volume".into()));
    }
    for s in fixed.iter() {
        if !alpha.complex.contains(s) {
            return Err(SubdivisionError::DisagreesOnFixed(s.to_string()));
        }
        for v in s.vertices() {
            if alpha.point(*v) != g.point(*v) {
                return Err(SubdivisionError::DisagreesOnFixed(s.to_string()));
            }
        }
    }
    Ok(())
}

/// The interpolating subdivision at level `r` between `g` and its
/// subdivision `alpha`, relative to `fixed`: simplexes in `fixed` or of
/// dimension at most `r` carry their `alpha`-subdivision, higher simplexes
/// are coned from a book-picked interior point over the already-subdivided
/// boundary. Level `n` reproduces `alpha`; level `0` with `alpha = g` is the
/// relative derived subdivision.
pub fn interpolating_subdivision(
    g: &GeometricComplex,
    alpha: &GeometricComplex,
    fixed: &Subcomplex,
    r: usize,
    book: &mut PickBook,
) -> Result<GeometricComplex, SubdivisionError> {
    verify_subdivision(g, alpha, fixed)?;
    let n = g.complex.dim().unwrap_or(0);
    if r > n {
        return Err(SubdivisionError::BadLevel(r));
    }
    Ok(build_tower(g, alpha, fixed, r, book))
}

/// Tower construction without the subdivision re-verification; the pipeline
/// calls this level by level with one shared book.
pub fn build_tower(
    g: &GeometricComplex,
    alpha: &GeometricComplex,
    fixed: &Subcomplex,
    r: usize,
    book: &mut PickBook,
) -> GeometricComplex {
    book.reserve(g);
    book.reserve(alpha);
    let n = g.complex.dim().unwrap_or(0);
    let mut subdiv: BTreeMap<AbstractSimplex, BTreeSet<AbstractSimplex>> = BTreeMap::new();
    let mut picked: BTreeMap<VertexId, Point> = BTreeMap::new();
    for d in 0..=n {
        let layer: Vec<AbstractSimplex> = g.complex.simplexes_of_dim(d).cloned().collect();
        for a in layer {
            let pieces = if fixed.contains(&a) || a.dim() <= r {
                restriction_to_simplex(g, alpha, &a)
            } else {
                let (cid, cpt) = book.pick_barycenter(g, &a);
                picked.insert(cid, cpt);
                let apex = AbstractSimplex::new(vec![cid]).expect("fresh vertex");
                let mut boundary: BTreeSet<AbstractSimplex> = BTreeSet::new();
                for f in a.facets() {
                    boundary.extend(subdiv[&f].iter().cloned());
                }
                let mut pieces = boundary.clone();
                pieces.insert(apex.clone());
                for s in &boundary {
                    pieces.insert(apex.join(s).expect("apex is fresh"));
                }
                pieces
            };
            subdiv.insert(a, pieces);
        }
    }
    let mut simplexes: BTreeSet<AbstractSimplex> = BTreeSet::new();
    for m in g.complex.maximal() {
        simplexes.extend(subdiv[m].iter().cloned());
    }
    let complex = Complex::from_closed_set(simplexes);
    let used = complex.vertices();
    let mut coords = BTreeMap::new();
    for v in used {
        let p = alpha
            .coords()
            .get(&v)
            .cloned()
            .or_else(|| picked.get(&v).cloned())
            .expect("tower vertex has coordinates");
        coords.insert(v, p);
    }
    GeometricComplex::new(complex, coords, g.model, g.ambient_dim)
        .expect("tower coordinates are total")
}

/// Number of maximal simplexes of the given dimension.
pub fn top_count(g: &GeometricComplex, dim: usize) -> usize {
    g.complex.simplexes_of_dim(dim).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{complexes_equal, Model};
    use crate::rat::rat;

    fn spx(ids: &[u32]) -> AbstractSimplex {
        AbstractSimplex::from_ids(ids)
    }

    fn geo(maximal: &[&[u32]], coords: &[(u32, &[i64])], dim: usize) -> GeometricComplex {
        let complex = Complex::from_maximal(maximal.iter().map(|m| spx(m)).collect());
        let coords: BTreeMap<VertexId, Point> = coords
            .iter()
            .map(|(v, xs)| (VertexId(*v), Point::new(xs.iter().map(|&x| rat(x)).collect())))
            .collect();
        GeometricComplex::new(complex, coords, Model::Euclidean, dim).unwrap()
    }

    fn triangle() -> GeometricComplex {
        geo(&[&[0, 1, 2]], &[(0, &[0, 0]), (1, &[6, 0]), (2, &[0, 6])], 2)
    }

    fn square_02() -> GeometricComplex {
        geo(
            &[&[0, 1, 2], &[0, 2, 3]],
            &[(0, &[0, 0]), (1, &[6, 0]), (2, &[6, 6]), (3, &[0, 6])],
            2,
        )
    }

    fn tetrahedron() -> GeometricComplex {
        geo(
            &[&[0, 1, 2, 3]],
            &[(0, &[0, 0, 0]), (1, &[12, 0, 0]), (2, &[0, 12, 0]), (3, &[0, 0, 12])],
            3,
        )
    }

    /// Independent count of the relative derived subdivision's top pieces:
    /// recursing over the boundary, with fixed simplexes and vertices
    /// contributing a single piece.
    fn derived_top_count_oracle(fixed: &Subcomplex, a: &AbstractSimplex) -> usize {
        if fixed.contains(a) || a.dim() == 0 {
            return 1;
        }
        a.facets().iter().map(|f| derived_top_count_oracle(fixed, f)).sum()
    }

    #[test]
    fn derived_counts_for_simplexes() {
        let b1 = derived_barycentric(&triangle(), &Subcomplex::empty()).unwrap();
        assert_eq!(top_count(&b1, 2), 6);
        assert!(b1.validate_geometric().is_valid());

        let b2 = derived_barycentric(&b1, &Subcomplex::empty()).unwrap();
        assert_eq!(top_count(&b2, 2), 36);

        let t1 = derived_barycentric(&tetrahedron(), &Subcomplex::empty()).unwrap();
        assert_eq!(top_count(&t1, 3), 24);
        assert!(t1.validate_geometric().is_valid());
    }

    #[test]
    fn derived_count_matches_factorial_rule() {
        let g = square_02();
        let b = derived_barycentric(&g, &Subcomplex::empty()).unwrap();
        // t tops of dimension n subdivide into t * (n+1)! tops
        assert_eq!(top_count(&b, 2), 2 * 6);
    }

    #[test]
    fn relative_derived_square_keeps_boundary() {
        let g = square_02();
        let boundary = Subcomplex::from_simplexes([
            spx(&[0, 1]),
            spx(&[1, 2]),
            spx(&[2, 3]),
            spx(&[0, 3]),
        ]);
        let b = derived_barycentric(&g, &boundary).unwrap();
        for e in [spx(&[0, 1]), spx(&[1, 2]), spx(&[2, 3]), spx(&[0, 3])] {
            assert!(b.complex.contains(&e));
        }
        let expected: usize =
            g.complex.maximal().map(|m| derived_top_count_oracle(&boundary, m)).sum();
        assert_eq!(top_count(&b, 2), expected);
        assert_eq!(expected, 8);
        assert!(b.validate_geometric().is_valid());
    }

    #[test]
    fn tower_level_n_is_alpha() {
        let g = triangle();
        let alpha = derived_barycentric(&g, &Subcomplex::empty()).unwrap();
        let mut book = PickBook::new(alpha.next_vertex_id());
        let t = interpolating_subdivision(&g, &alpha, &Subcomplex::empty(), 2, &mut book)
            .unwrap();
        assert_eq!(t, alpha);
    }

    #[test]
    fn tower_level_zero_is_relative_derived() {
        let g = square_02();
        let boundary = Subcomplex::from_simplexes([
            spx(&[0, 1]),
            spx(&[1, 2]),
            spx(&[2, 3]),
            spx(&[0, 3]),
        ]);
        let mut book = PickBook::new(g.next_vertex_id());
        let t = interpolating_subdivision(&g, &g, &boundary, 0, &mut book).unwrap();
        let b = derived_barycentric(&g, &boundary).unwrap();
        assert!(complexes_equal(&t, &b));
    }

    #[test]
    fn tower_intermediate_level_cones_interior() {
        // single triangle, alpha = derived, level 1: boundary edges derived,
        // interior coned from one point
        let g = triangle();
        let alpha = derived_barycentric(&g, &Subcomplex::empty()).unwrap();
        let mut book = PickBook::new(alpha.next_vertex_id());
        let t = interpolating_subdivision(&g, &alpha, &Subcomplex::empty(), 1, &mut book)
            .unwrap();
        assert_eq!(top_count(&t, 2), 6);
        assert_eq!(t.coords().len(), 7); // 3 corners + 3 midpoints + 1 cone point
        assert!(t.validate_geometric().is_valid());
        assert!(verify_subdivision(&g, &t, &Subcomplex::empty()).is_ok());
    }

    #[test]
    fn rejects_non_subdivision() {
        let g = triangle();
        let other = geo(&[&[0, 1, 2]], &[(0, &[0, 0]), (1, &[5, 0]), (2, &[0, 5])], 2);
        let mut book = PickBook::new(100);
        let err = interpolating_subdivision(&g, &other, &Subcomplex::empty(), 1, &mut book);
        assert!(matches!(err, Err(SubdivisionError::NotSubdivision(_))));
    }

    #[test]
    fn shared_book_gives_identical_outputs() {
        let g = square_02();
        let mut book = PickBook::new(g.next_vertex_id());
        let b1 = derived_subdivision(&g, &Subcomplex::empty(), &mut book).unwrap();
        let b2 = derived_subdivision(&g, &Subcomplex::empty(), &mut book).unwrap();
        assert_eq!(b1, b2);
    }
}
