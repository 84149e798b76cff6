//! Model-space charts: the gnomonic projection of the open southern
//! hemisphere and domain checks for the Klein ball.
//!
//! Both charts send geodesics to straight lines, which is why a single
//! straight-line validation code path serves spherical, hyperbolic and
//! Euclidean data alike. Spherical points are exact rational points on the
//! unit sphere; inputs without a rational representation are rejected rather
//! than approximated.

use crate::complex::Point;
use crate::rat::Rat;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChartError {
    #[error("point is not on the unit sphere")]
    NotOnSphere,
    #[error("point lies on or above the equator")]
    OnOrAboveEquator,
    #[error("point lies on the unit sphere (ideal point)")]
    IdealPoint,
    #[error("point lies outside the closed unit ball")]
    OutsideBall,
}

fn norm2(p: &Point) -> Rat {
    p.coords.iter().map(|x| x * x).sum()
}

/// Radial projection of a rational point on the open southern hemisphere to
/// the tangent hyperplane `x_{n+1} = -1`:
/// `p -> (-p_1/p_{n+1}, ..., -p_n/p_{n+1}, -1)`.
pub fn gnomonic_project(p: &Point) -> Result<Point, ChartError> {
    if norm2(p) != Rat::one() {
        return Err(ChartError::NotOnSphere);
    }
    let last = p.coords.last().expect("nonempty point");
    if !last.is_negative() {
        return Err(ChartError::OnOrAboveEquator);
    }
    let mut out: Vec<Rat> =
        p.coords[..p.coords.len() - 1].iter().map(|x| -(x / last)).collect();
    out.push(-Rat::one());
    Ok(Point::new(out))
}

/// Domain check for segments in the Klein chart. Geodesics in the Klein
/// model are Euclidean straight lines as sets, so once both endpoints lie
/// strictly inside the unit ball the chart invariant holds; points on the
/// sphere are ideal and out of scope.
pub fn klein_geodesic_check(a: &Point, b: &Point) -> Result<bool, ChartError> {
    for p in [a, b] {
        let n2 = norm2(p);
        if n2 > Rat::one() {
            return Err(ChartError::OutsideBall);
        }
        if n2 == Rat::one() {
            return Err(ChartError::IdealPoint);
        }
    }
    Ok(true)
}

/// Fabricates an exact rational point on the unit sphere with strictly
/// negative last coordinate. Given free coordinates `u` and a parameter
/// `d > 0`, the Pythagorean completion `v = (N/d - d)/2`, `r = (N/d + d)/2`
/// with `N = 1 + sum u_i^2` satisfies `|u|^2 + v^2 + 1 = r^2` identically, so
/// `(u_1/r, ..., v/r, -1/r)` is rational and on the sphere.
pub fn rational_sphere_point(u: &[Rat], d: &Rat) -> Result<Point, ChartError> {
    if !d.is_positive() {
        return Err(ChartError::NotOnSphere);
    }
    let n_val: Rat = Rat::one() + u.iter().map(|x| x * x).sum::<Rat>();
    let half = Rat::new(1.into(), 2.into());
    let v = (&n_val / d - d.clone()) * &half;
    let r = (&n_val / d + d.clone()) * &half;
    let mut coords: Vec<Rat> = u.iter().map(|x| x / &r).collect();
    coords.push(&v / &r);
    coords.push(-(Rat::one() / &r));
    let p = Point::new(coords);
    debug_assert_eq!(norm2(&p), Rat::one());
    Ok(p)
}

/// Second intersection of the unit sphere with the line through the sphere
/// point `p` in direction `w`. Exact: the quadratic has `t = 0` as one root,
/// so the other root is rational. Returns `None` when the direction is
/// tangent (the second intersection equals `p`) or zero.
pub fn second_sphere_intersection(p: &Point, w: &Point) -> Option<Point> {
    let w2 = norm2(w);
    if w2.is_zero() {
        return None;
    }
    let pw: Rat = p.coords.iter().zip(&w.coords).map(|(a, b)| a * b).sum();
    if pw.is_zero() {
        return None;
    }
    let t = -(&pw + &pw) / w2;
    let q = p.add(&w.scale(&t));
    debug_assert_eq!(norm2(&q), Rat::one());
    Some(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, ratio};

    #[test]
    fn south_pole_projects_to_origin() {
        let p = Point::new(vec![rat(0), rat(0), rat(-1)]);
        let img = gnomonic_project(&p).unwrap();
        assert_eq!(img, Point::new(vec![rat(0), rat(0), rat(-1)]));
    }

    #[test]
    fn pythagorean_point_projects_by_formula() {
        // (3/5, 0, -4/5) -> (3/4, 0, -1)
        let p = Point::new(vec![ratio(3, 5), rat(0), ratio(-4, 5)]);
        let img = gnomonic_project(&p).unwrap();
        assert_eq!(img, Point::new(vec![ratio(3, 4), rat(0), rat(-1)]));
    }

    #[test]
    fn equator_and_off_sphere_points_rejected() {
        let eq = Point::new(vec![rat(1), rat(0), rat(0)]);
        assert_eq!(gnomonic_project(&eq), Err(ChartError::OnOrAboveEquator));
        let off = Point::new(vec![rat(1), rat(1), rat(-1)]);
        assert_eq!(gnomonic_project(&off), Err(ChartError::NotOnSphere));
    }

    #[test]
    fn klein_domain_checks() {
        let a = Point::new(vec![ratio(1, 2), rat(0)]);
        let b = Point::new(vec![rat(0), ratio(-3, 4)]);
        assert_eq!(klein_geodesic_check(&a, &b), Ok(true));
        let ideal = Point::new(vec![rat(1), rat(0)]);
        assert_eq!(klein_geodesic_check(&a, &ideal), Err(ChartError::IdealPoint));
        let outside = Point::new(vec![rat(2), rat(0)]);
        assert_eq!(klein_geodesic_check(&a, &outside), Err(ChartError::OutsideBall));
    }

    #[test]
    fn fabricated_sphere_points_are_rational_and_southern() {
        let p = rational_sphere_point(&[ratio(1, 3)], &ratio(1, 2)).unwrap();
        assert!(p.coords.last().unwrap().is_negative());
        // and a second intersection along a chord direction stays rational
        let w = Point::new(vec![rat(1), rat(0), rat(0)]);
        let q = second_sphere_intersection(&p, &w);
        assert!(q.is_some());
    }
}
