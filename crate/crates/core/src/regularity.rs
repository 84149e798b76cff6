//! Height functions and regularity of triangulations.
//!
//! A triangulation is regular when some piecewise-linear height function is
//! strictly convex across every interior codimension-one simplex. The
//! strictness is handled with a fixed margin of one: the convexity system is
//! homogeneous in the heights, so any positive margin is equivalent and no
//! epsilon tuning exists anywhere.

use crate::complex::{AbstractSimplex, GeometricComplex, Subcomplex, VertexId};
use crate::linalg;
use crate::lp::{Cmp, GenLp, GenOutcome};
use crate::rat::Rat;
use crate::subdivide::{derived_subdivision, PickBook};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

/// Per-vertex rational heights inducing a piecewise-linear lift.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HeightFunction {
    pub heights: BTreeMap<VertexId, Rat>,
}

impl HeightFunction {
    pub fn new(heights: BTreeMap<VertexId, Rat>) -> Self {
        HeightFunction { heights }
    }

    pub fn zero_on(g: &GeometricComplex) -> Self {
        HeightFunction {
            heights: g.coords().keys().map(|v| (*v, Rat::zero())).collect(),
        }
    }

    /// Squared Euclidean norm of each vertex: the paraboloid lift whose lower
    /// envelope is the Delaunay triangulation.
    pub fn squared_norm_on(g: &GeometricComplex) -> Self {
        HeightFunction {
            heights: g
                .coords()
                .iter()
                .map(|(v, p)| (*v, p.coords.iter().map(|x| x * x).sum()))
                .collect(),
        }
    }

    pub fn get(&self, v: VertexId) -> Option<&Rat> {
        self.heights.get(&v)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegularityError {
    #[error("height missing for vertex {0}")]
    MissingHeight(VertexId),
    #[error("complex is not pure")]
    NotPure,
    #[error("facet {0} shared by more than two maximal simplexes")]
    OverSharedFacet(String),
    #[error("degenerate lifted simplex at {0}")]
    DegenerateLift(String),
    #[error("fixed height assignments are themselves infeasible")]
    FixedInfeasible,
    #[error("no regular subdivision found within s_max = {0} derived subdivisions")]
    Exhausted(usize),
    #[error("{0}")]
    Move(String),
}

/// Certifies `is_regular(complex, heights)` after `s` derived subdivisions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityCertificate {
    pub complex_fingerprint: String,
    pub heights: HeightFunction,
    pub s: usize,
}

/// Interior codimension-one simplexes with their two maximal cofaces.
pub fn interior_facets(
    g: &GeometricComplex,
) -> Result<Vec<(AbstractSimplex, AbstractSimplex, AbstractSimplex)>, RegularityError> {
    if !g.complex.is_pure() {
        return Err(RegularityError::NotPure);
    }
    let dim = match g.complex.dim() {
        Some(d) if d > 0 => d,
        _ => return Ok(Vec::new()),
    };
    let mut incident: BTreeMap<AbstractSimplex, Vec<AbstractSimplex>> = BTreeMap::new();
    for top in g.complex.simplexes_of_dim(dim) {
        for f in top.facets() {
            incident.entry(f).or_default().push(top.clone());
        }
    }
    let mut out = Vec::new();
    for (f, tops) in incident {
        match tops.len() {
            1 => {}
            2 => out.push((f, tops[0].clone(), tops[1].clone())),
            _ => return Err(RegularityError::OverSharedFacet(f.to_string())),
        }
    }
    Ok(out)
}

/// The linear form whose positivity expresses strict convexity of the lift
/// across one interior facet: coefficients over vertex heights, evaluating to
/// `h(v2) - (affine extension of h over sigma1 at v2)`.
fn convexity_form(
    g: &GeometricComplex,
    facet: &AbstractSimplex,
    sigma1: &AbstractSimplex,
    sigma2: &AbstractSimplex,
) -> Result<Vec<(VertexId, Rat)>, RegularityError> {
    let v2 = *sigma2
        .vertices()
        .iter()
        .find(|v| !facet.contains(**v))
        .expect("cofacet has an opposite vertex");
    let base_pts = g.simplex_points(sigma1);
    let alpha = linalg::affine_coords(&base_pts, &g.point(v2).coords)
        .ok_or_else(|| RegularityError::DegenerateLift(sigma1.to_string()))?;
    let mut form: Vec<(VertexId, Rat)> = vec![(v2, Rat::one())];
    for (u, a) in sigma1.vertices().iter().zip(alpha) {
        form.push((*u, -a));
    }
    Ok(form)
}

/// Strict convexity of the lift across every interior facet, decided by
/// exact sign computations.
pub fn is_regular(g: &GeometricComplex, h: &HeightFunction) -> Result<bool, RegularityError> {
    for v in g.complex.vertices() {
        if !h.heights.contains_key(&v) {
            return Err(RegularityError::MissingHeight(v));
        }
    }
    for (facet, s1, s2) in interior_facets(g)? {
        let form = convexity_form(g, &facet, &s1, &s2)?;
        let value: Rat = form.iter().map(|(v, c)| c * &h.heights[v]).sum();
        if !value.is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Searches for certifying heights by exact linear feasibility over the
/// facet-convexity system with margin one. Returns `None` when the strict
/// system is infeasible (the triangulation is not regular). Fixed heights are
/// honored; if they alone make the system infeasible while the free system is
/// feasible, that is reported distinctly.
pub fn find_heights(
    g: &GeometricComplex,
    fixed: Option<&BTreeMap<VertexId, Rat>>,
) -> Result<Option<HeightFunction>, RegularityError> {
    let vertices: Vec<VertexId> = g.complex.vertices().into_iter().collect();
    let index: BTreeMap<VertexId, usize> =
        vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let facets = interior_facets(g)?;
    let build = |with_fixed: bool| -> Result<GenLp, RegularityError> {
        let mut lp = GenLp::feasibility(vertices.len());
        for (facet, s1, s2) in &facets {
            let form = convexity_form(g, facet, s1, s2)?;
            let mut row = vec![Rat::zero(); vertices.len()];
            for (v, c) in form {
                row[index[&v]] += c;
            }
            lp.push_row(row, Cmp::Ge, Rat::one());
        }
        if with_fixed {
            if let Some(fixed) = fixed {
                for (v, val) in fixed {
                    let mut row = vec![Rat::zero(); vertices.len()];
                    row[index[v]] = Rat::one();
                    lp.push_row(row, Cmp::Eq, val.clone());
                }
            }
        }
        Ok(lp)
    };
    match build(true)?.solve() {
        GenOutcome::Optimal { y, .. } => {
            let heights =
                HeightFunction::new(vertices.iter().zip(y).map(|(v, h)| (*v, h)).collect());
            debug_assert_eq!(is_regular(g, &heights), Ok(true));
            Ok(Some(heights))
        }
        GenOutcome::Unbounded => unreachable!("feasibility problem has zero objective"),
        GenOutcome::Infeasible => {
            if fixed.is_some() {
                match build(false)?.solve() {
                    GenOutcome::Infeasible => Ok(None),
                    _ => Err(RegularityError::FixedInfeasible),
                }
            } else {
                Ok(None)
            }
        }
    }
}

/// Iterates derived subdivision (relative to `fixed`) until [`find_heights`]
/// succeeds, up to `s_max` rounds. Returns the subdivided complex alongside
/// its certificate. No computable bound on `s` exists, so exhaustion is an
/// explicit outcome rather than a panic.
pub fn regularize(
    g: &GeometricComplex,
    fixed: &Subcomplex,
    s_max: usize,
    book: &mut PickBook,
) -> Result<(GeometricComplex, RegularityCertificate), RegularityError> {
    let mut cur = g.clone();
    for s in 0..=s_max {
        if let Some(heights) = find_heights(&cur, None)? {
            let cert = RegularityCertificate {
                complex_fingerprint: cur.fingerprint(),
                heights,
                s,
            };
            return Ok((cur, cert));
        }
        if s < s_max {
            cur = derived_subdivision(&cur, fixed, book)
                .map_err(|e| RegularityError::Move(e.to_string()))?;
        }
    }
    Err(RegularityError::Exhausted(s_max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{Complex, Model, Point};
    use crate::rat::rat;

    fn spx(ids: &[u32]) -> AbstractSimplex {
        AbstractSimplex::from_ids(ids)
    }

    fn geo2d(maximal: &[&[u32]], coords: &[(u32, [i64; 2])]) -> GeometricComplex {
        let complex = Complex::from_maximal(maximal.iter().map(|m| spx(m)).collect());
        let coords: BTreeMap<VertexId, Point> = coords
            .iter()
            .map(|(v, [x, y])| (VertexId(*v), Point::new(vec![rat(*x), rat(*y)])))
            .collect();
        GeometricComplex::new(complex, coords, Model::Euclidean, 2).unwrap()
    }

    /// Two nested parallel triangles with the annulus triangulated in a
    /// spiral: the classical non-regular triangulation on six points.
    pub(crate) fn twisted_triangulation() -> GeometricComplex {
        geo2d(
            &[
                &[0, 1, 4],
                &[1, 2, 5],
                &[0, 2, 3],
                &[0, 3, 4],
                &[1, 4, 5],
                &[2, 3, 5],
                &[3, 4, 5],
            ],
            &[
                (0, [0, 0]),
                (1, [4, 0]),
                (2, [0, 4]),
                (3, [1, 1]),
                (4, [2, 1]),
                (5, [1, 2]),
            ],
        )
    }

    #[test]
    fn single_simplex_is_regular() {
        let g = geo2d(&[&[0, 1, 2]], &[(0, [0, 0]), (1, [1, 0]), (2, [0, 1])]);
        assert_eq!(is_regular(&g, &HeightFunction::zero_on(&g)), Ok(true));
        let h = find_heights(&g, None).unwrap().unwrap();
        assert_eq!(is_regular(&g, &h), Ok(true));
    }

    #[test]
    fn folded_square_is_not_regular() {
        // heights (1,0,1,0) on the diag-02 square: the affine extension of
        // h over {0,1,2} evaluated at vertex 3 is h0 - h1 + h2 = 2 > h3 = 0,
        // so the lift folds downward across the diagonal
        let g = geo2d(
            &[&[0, 1, 2], &[0, 2, 3]],
            &[(0, [0, 0]), (1, [1, 0]), (2, [1, 1]), (3, [0, 1])],
        );
        let mut h = HeightFunction::zero_on(&g);
        h.heights.insert(VertexId(0), rat(1));
        h.heights.insert(VertexId(2), rat(1));
        assert_eq!(is_regular(&g, &h), Ok(false));
        // the upward fold is regular
        let mut up = HeightFunction::zero_on(&g);
        up.heights.insert(VertexId(1), rat(1));
        up.heights.insert(VertexId(3), rat(1));
        assert_eq!(is_regular(&g, &up), Ok(true));
    }

    #[test]
    fn twisted_triangulation_is_valid_but_not_regular() {
        let g = twisted_triangulation();
        assert!(g.validate_geometric().is_valid(), "{:?}", g.validate_geometric());
        assert_eq!(find_heights(&g, None).unwrap(), None);
    }

    #[test]
    fn paraboloid_heights_certify_delaunay_square() {
        // unit square plus center: the fan is Delaunay for these points
        let g = geo2d(
            &[&[0, 1, 4], &[1, 2, 4], &[2, 3, 4], &[0, 3, 4]],
            &[(0, [0, 0]), (1, [2, 0]), (2, [2, 2]), (3, [0, 2]), (4, [1, 1])],
        );
        let h = HeightFunction::squared_norm_on(&g);
        assert_eq!(is_regular(&g, &h), Ok(true));
    }

    #[test]
    fn regularize_returns_zero_rounds_for_regular_input() {
        let g = geo2d(
            &[&[0, 1, 2], &[0, 2, 3]],
            &[(0, [0, 0]), (1, [1, 0]), (2, [1, 1]), (3, [0, 1])],
        );
        let mut book = PickBook::new(g.next_vertex_id());
        let (out, cert) = regularize(&g, &Subcomplex::empty(), 3, &mut book).unwrap();
        assert_eq!(cert.s, 0);
        assert_eq!(out, g);
        assert_eq!(is_regular(&out, &cert.heights), Ok(true));
    }

    #[test]
    fn regularize_subdivides_twisted_input() {
        let g = twisted_triangulation();
        let mut book = PickBook::new(g.next_vertex_id());
        let (out, cert) = regularize(&g, &Subcomplex::empty(), 3, &mut book).unwrap();
        assert!(cert.s >= 1);
        assert_eq!(is_regular(&out, &cert.heights), Ok(true));
        assert_eq!(cert.complex_fingerprint, out.fingerprint());

        let mut book = PickBook::new(g.next_vertex_id());
        let err = regularize(&g, &Subcomplex::empty(), 0, &mut book).unwrap_err();
        assert_eq!(err, RegularityError::Exhausted(0));
    }

    #[test]
    fn certificates_scale_and_translate() {
        let g = geo2d(
            &[&[0, 1, 2], &[0, 2, 3]],
            &[(0, [0, 0]), (1, [1, 0]), (2, [1, 1]), (3, [0, 1])],
        );
        let h = find_heights(&g, None).unwrap().unwrap();
        // lambda * h + (affine functional of coordinates) stays regular
        let mut scaled = HeightFunction::default();
        for (v, hv) in &h.heights {
            let p = g.point(*v);
            let affine = &p.coords[0] * rat(2) + &p.coords[1] * rat(-5) + rat(7);
            scaled.heights.insert(*v, hv * rat(3) + affine);
        }
        assert_eq!(is_regular(&g, &scaled), Ok(true));
    }

    #[test]
    fn fixed_heights_are_honored_or_reported() {
        let g = geo2d(
            &[&[0, 1, 2], &[0, 2, 3]],
            &[(0, [0, 0]), (1, [1, 0]), (2, [1, 1]), (3, [0, 1])],
        );
        let mut fixed = BTreeMap::new();
        fixed.insert(VertexId(0), rat(0));
        fixed.insert(VertexId(2), rat(0));
        let h = find_heights(&g, Some(&fixed)).unwrap().unwrap();
        assert_eq!(h.heights[&VertexId(0)], rat(0));
        assert_eq!(h.heights[&VertexId(2)], rat(0));
        assert_eq!(is_regular(&g, &h), Ok(true));
    }
}
