use std::collections::BTreeSet;

use super::Grid;

pub type SiteSet = BTreeSet<usize>;

/// Sites where |f| > tol.
pub fn support(f: &[f64], tol: f64) -> SiteSet {
    f.iter().enumerate().filter(|(_, v)| v.abs() > tol).map(|(i, _)| i).collect()
}

pub fn support_by<T>(f: &[T], tol: f64, norm: impl Fn(&T) -> f64) -> SiteSet {
    f.iter().enumerate().filter(|(_, v)| norm(v) > tol).map(|(i, _)| i).collect()
}

/// {a + b} with periodic wraparound.
pub fn minkowski_sum(grid: &Grid, a: &SiteSet, b: &SiteSet) -> SiteSet {
    a.iter().flat_map(|&x| b.iter().map(move |&y| grid.sum(x, y))).collect()
}

/// Sites within minimum-image distance `r` of `center`.
pub fn ball(grid: &Grid, center: usize, r: f64) -> SiteSet {
    (0..grid.len())
        .filter(|&x| grid.min_image_distance(grid.difference(x, center)) <= r + 1e-12)
        .collect()
}
