//! Small numeric helpers: deterministic summation, difference stencils and
//! tiny dense solves. Nothing here knows about the Heisenberg group.

#[allow(unused_imports)]
pub(crate) use num_traits::Float;

use alloc::vec::Vec;

/// Pairwise (cascade) summation; deterministic for a fixed slice order.
pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        let mut acc = 0.0;
        for &x in xs {
            acc += x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Three-point first derivative at the center of `[f_m, _, f_p]`.
pub(crate) fn central1(f_m: f64, f_p: f64, h: f64) -> f64 {
    (f_p - f_m) / (2.0 * h)
}

/// Three-point second derivative at the center.
pub(crate) fn central2(f_m: f64, f_0: f64, f_p: f64, h: f64) -> f64 {
    (f_p - 2.0 * f_0 + f_m) / (h * h)
}

/// Five-point first derivative at the center of `[f_m2, f_m1, _, f_p1, f_p2]`.
pub(crate) fn central1_order4(f_m2: f64, f_m1: f64, f_p1: f64, f_p2: f64, h: f64) -> f64 {
    (f_m2 - 8.0 * f_m1 + 8.0 * f_p1 - f_p2) / (12.0 * h)
}

/// Five-point second derivative at the center.
pub(crate) fn central2_order4(f_m2: f64, f_m1: f64, f_0: f64, f_p1: f64, f_p2: f64, h: f64) -> f64 {
    (-f_m2 + 16.0 * f_m1 - 30.0 * f_0 + 16.0 * f_p1 - f_p2) / (12.0 * h * h)
}

/// Solves a 2x2 system; `None` when the determinant is negligible relative to
/// the matrix scale.
pub(crate) fn solve2(m: [[f64; 2]; 2], rhs: [f64; 2]) -> Option<[f64; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let scale = m[0][0].abs() + m[0][1].abs() + m[1][0].abs() + m[1][1].abs();
    if det.abs() <= 1e-14 * scale * scale.max(1.0) {
        return None;
    }
    Some([
        (rhs[0] * m[1][1] - rhs[1] * m[0][1]) / det,
        (m[0][0] * rhs[1] - m[1][0] * rhs[0]) / det,
    ])
}

/// Solves a 3x3 system by Gaussian elimination with partial pivoting.
pub(crate) fn solve3(mut m: [[f64; 3]; 3], mut rhs: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let mut pivot = col;
        for row in col + 1..3 {
            if m[row][col].abs() > m[pivot][col].abs() {
                pivot = row;
            }
        }
        if m[pivot][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let pivot_row = m[col];
        for row in col + 1..3 {
            let factor = m[row][col] / pivot_row[col];
            for (entry, p) in m[row].iter_mut().zip(pivot_row).skip(col) {
                *entry -= factor * p;
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut out = [0.0; 3];
    for col in (0..3).rev() {
        let mut acc = rhs[col];
        for k in col + 1..3 {
            acc -= m[col][k] * out[k];
        }
        out[col] = acc / m[col][col];
    }
    Some(out)
}

/// Least-squares fit of `y ~ c0 + c1 s + c2 s^2`; returns the coefficients and
/// the largest absolute residual. `None` when the normal equations degenerate
/// (fewer than three distinct abscissae).
pub(crate) fn fit_quadratic(s: &[f64], y: &[f64]) -> Option<([f64; 3], f64)> {
    debug_assert_eq!(s.len(), y.len());
    // Fit in a centered, scaled abscissa so wide sample ranges stay
    // well-conditioned, then map the coefficients back.
    let n = s.len() as f64;
    let mu = s.iter().sum::<f64>() / n;
    let sigma = s.iter().fold(0.0f64, |m, &si| m.max((si - mu).abs()));
    if sigma == 0.0 {
        return None;
    }
    let mut pow = [0.0f64; 5];
    let mut mom = [0.0f64; 3];
    for (&si, &yi) in s.iter().zip(y) {
        let z = (si - mu) / sigma;
        let z2 = z * z;
        pow[0] += 1.0;
        pow[1] += z;
        pow[2] += z2;
        pow[3] += z2 * z;
        pow[4] += z2 * z2;
        mom[0] += yi;
        mom[1] += yi * z;
        mom[2] += yi * z2;
    }
    let m = [
        [pow[0], pow[1], pow[2]],
        [pow[1], pow[2], pow[3]],
        [pow[2], pow[3], pow[4]],
    ];
    let b = solve3(m, mom)?;
    let c = [
        b[0] - b[1] * mu / sigma + b[2] * mu * mu / (sigma * sigma),
        b[1] / sigma - 2.0 * b[2] * mu / (sigma * sigma),
        b[2] / (sigma * sigma),
    ];
    let mut worst = 0.0f64;
    for (&si, &yi) in s.iter().zip(y) {
        let fit = c[0] + c[1] * si + c[2] * si * si;
        worst = worst.max((fit - yi).abs());
    }
    Some((c, worst))
}

/// `n` evenly spaced values covering `[a, b]` inclusive.
pub(crate) fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    debug_assert!(n >= 2);
    let h = (b - a) / (n - 1) as f64;
    (0..n).map(|i| a + h * i as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_smooth_data() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64 * 0.37).sin()).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-9);
    }

    #[test]
    fn quadratic_fit_recovers_exact_polynomial() {
        let s = linspace(-2.0, 2.0, 11);
        let y: Vec<f64> = s.iter().map(|&v| 1.5 - 0.25 * v + 3.0 * v * v).collect();
        let (c, res) = fit_quadratic(&s, &y).unwrap();
        assert!((c[0] - 1.5).abs() < 1e-12);
        assert!((c[1] + 0.25).abs() < 1e-12);
        assert!((c[2] - 3.0).abs() < 1e-12);
        assert!(res < 1e-12);
    }

    #[test]
    fn solve2_rejects_singular_matrix() {
        assert!(solve2([[1.0, 2.0], [2.0, 4.0]], [1.0, 2.0]).is_none());
    }

    #[test]
    fn five_point_derivative_is_fourth_order() {
        let f = |x: f64| x.exp();
        let h = 0.1;
        let d = central1_order4(f(-2.0 * h), f(-h), f(h), f(2.0 * h), h);
        assert!((d - 1.0).abs() < 1e-5);
        let d3 = central1(f(-h), f(h), h);
        assert!((d - 1.0).abs() < (d3 - 1.0).abs() / 10.0);
    }
}
