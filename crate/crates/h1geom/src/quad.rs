//! Composite Simpson quadrature on intervals and parameter rectangles.
//!
//! Node counts are odd (at least 3) per axis. Terms are accumulated by
//! pairwise summation in a fixed order, so results are deterministic for a
//! given grid.

use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;
use crate::surface::Rect;

use alloc::vec::Vec;

fn check_nodes(n: usize) -> Result<()> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidGrid { n1: n, n2: n });
    }
    Ok(())
}

/// Simpson weight of node `i` among `n` (odd), excluding the `h/3` factor.
fn weight(i: usize, n: usize) -> f64 {
    if i == 0 || i == n - 1 {
        1.0
    } else if i % 2 == 1 {
        4.0
    } else {
        2.0
    }
}

/// Simpson nodes and weights (with the h/3 factor folded in) for `n` odd
/// nodes on `[a, b]`.
pub(crate) fn nodes_weights(a: f64, b: f64, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    check_nodes(n)?;
    if !(a < b && a.is_finite() && b.is_finite()) {
        return Err(Error::EmptyRegion);
    }
    let h = (b - a) / (n - 1) as f64;
    let mut xs = Vec::with_capacity(n);
    let mut ws = Vec::with_capacity(n);
    for i in 0..n {
        xs.push(if i == n - 1 { b } else { a + i as f64 * h });
        ws.push(weight(i, n) * h / 3.0);
    }
    Ok((xs, ws))
}

/// Composite Simpson integral of `f` over `[a, b]` with `n` odd nodes.
pub fn simpson<F>(f: F, a: f64, b: f64, n: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    check_nodes(n)?;
    if !(a < b && a.is_finite() && b.is_finite()) {
        return Err(Error::EmptyRegion);
    }
    let h = (b - a) / (n - 1) as f64;
    let mut terms = Vec::with_capacity(n);
    for i in 0..n {
        let x = if i == n - 1 { b } else { a + i as f64 * h };
        terms.push(weight(i, n) * f(x)?);
    }
    Ok(pairwise_sum(&terms) * h / 3.0)
}

/// Composite Simpson integral of `f(p)` over a parameter rectangle with an
/// odd tensor grid `[n1, n2]`.
pub fn simpson_rect<F>(f: F, region: &Rect, grid: [usize; 2]) -> Result<f64>
where
    F: Fn([f64; 2]) -> Result<f64>,
{
    check_nodes(grid[0]).map_err(|_| Error::InvalidGrid {
        n1: grid[0],
        n2: grid[1],
    })?;
    check_nodes(grid[1]).map_err(|_| Error::InvalidGrid {
        n1: grid[0],
        n2: grid[1],
    })?;
    let [n1, n2] = grid;
    let h1 = (region.hi[0] - region.lo[0]) / (n1 - 1) as f64;
    let h2 = (region.hi[1] - region.lo[1]) / (n2 - 1) as f64;
    let coord = |lo: f64, hi: f64, h: f64, i: usize, n: usize| {
        if i == n - 1 {
            hi
        } else {
            lo + i as f64 * h
        }
    };
    let mut terms = Vec::with_capacity(n1 * n2);
    for i in 0..n1 {
        let x = coord(region.lo[0], region.hi[0], h1, i, n1);
        let wi = weight(i, n1);
        for k in 0..n2 {
            let y = coord(region.lo[1], region.hi[1], h2, k, n2);
            terms.push(wi * weight(k, n2) * f([x, y])?);
        }
    }
    Ok(pairwise_sum(&terms) * h1 * h2 / 9.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_cubics() {
        let v = simpson(|x| Ok(x * x * x - 2.0 * x + 1.0), 0.0, 2.0, 11).unwrap();
        assert!((v - (4.0 - 4.0 + 2.0)).abs() < 1e-14);
    }

    #[test]
    fn fourth_order_refinement() {
        let f = |x: f64| Ok((3.0 * x).sin().exp());
        let reference = simpson(f, 0.0, 1.0, 4001).unwrap();
        let e1 = (simpson(f, 0.0, 1.0, 21).unwrap() - reference).abs();
        let e2 = (simpson(f, 0.0, 1.0, 41).unwrap() - reference).abs();
        let ratio = e1 / e2;
        assert!((ratio - 16.0).abs() < 3.0, "ratio {ratio}");
    }

    #[test]
    fn rejects_even_or_tiny_grids() {
        assert!(matches!(
            simpson(|_| Ok(1.0), 0.0, 1.0, 4),
            Err(Error::InvalidGrid { .. })
        ));
        assert!(matches!(
            simpson(|_| Ok(1.0), 0.0, 1.0, 1),
            Err(Error::InvalidGrid { .. })
        ));
        let region = Rect::new([0.0, 0.0], [1.0, 1.0]).unwrap();
        assert!(matches!(
            simpson_rect(|_| Ok(1.0), &region, [10, 11]),
            Err(Error::InvalidGrid { .. })
        ));
    }

    #[test]
    fn tensor_grid_integrates_separable_products() {
        let region = Rect::new([0.0, -1.0], [1.0, 1.0]).unwrap();
        let v = simpson_rect(|p| Ok(p[0] * p[0] * p[1] * p[1]), &region, [5, 5]).unwrap();
        assert!((v - (1.0 / 3.0) * (2.0 / 3.0)).abs() < 1e-14);
    }

    #[test]
    fn errors_propagate_from_the_integrand() {
        let region = Rect::new([0.0, 0.0], [1.0, 1.0]).unwrap();
        let out = simpson_rect(
            |p| {
                if p[0] > 0.5 {
                    Err(Error::DegenerateSamples)
                } else {
                    Ok(1.0)
                }
            },
            &region,
            [5, 5],
        );
        assert_eq!(out, Err(Error::DegenerateSamples));
    }
}
