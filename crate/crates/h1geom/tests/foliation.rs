//! Cross-chart consistency of characteristic foliations and areas: the same
//! surface described as a graph and as a ruled strip must agree pointwise, in
//! area, and along traced characteristics.

use h1geom::characteristic::{
    straightness_residual, trace_characteristic, trace_tgraph_characteristic,
};
use h1geom::surface::{builtin, Rect, RuledChart};
use h1geom::variation::area;
use h1geom::{Point, SurfaceChart};

/// The surface t = x y as a ruled chart seeded on its singular axis:
/// F(eps, s) = (s, eps, eps s).
fn ruled_paraboloid(eps_range: [f64; 2], s_range: [f64; 2]) -> RuledChart {
    RuledChart::analytic(
        |eps| Point::new(0.0, eps, 0.0),
        |_| [0.0, 1.0, 0.0],
        |_| [1.0, 0.0],
        |_| [0.0, 0.0],
        eps_range,
        s_range,
    )
}

#[test]
fn ruled_and_graph_charts_of_the_paraboloid_agree() {
    let ruled = SurfaceChart::ruled(ruled_paraboloid([0.1, 0.9], [0.2, 1.3]));
    let graph = builtin::paraboloid(Rect::new([0.15, 0.05], [1.35, 0.95]).unwrap());

    for i in 0..=8 {
        for j in 0..=8 {
            let e = 0.2 + 0.6 * (i as f64) / 8.0;
            let s = 0.3 + 0.9 * (j as f64) / 8.0;
            let p = ruled.point([e, s]);
            let q = graph.point([s, e]);
            assert!((p.x - q.x).abs() <= 1e-12);
            assert!((p.y - q.y).abs() <= 1e-12);
            assert!((p.t - q.t).abs() <= 1e-12);
        }
    }

    // Over matched windows both charts integrate the density 2x exactly:
    // the area is (1.2^2 - 0.3^2) * 0.6 = 0.81.
    let a_ruled = area(
        &ruled,
        &Rect::new([0.2, 0.3], [0.8, 1.2]).unwrap(),
        [41, 41],
    )
    .unwrap();
    let a_graph = area(
        &graph,
        &Rect::new([0.3, 0.2], [1.2, 0.8]).unwrap(),
        [41, 41],
    )
    .unwrap();
    assert!((a_ruled - 0.81).abs() <= 1e-12);
    assert!((a_graph - 0.81).abs() <= 1e-12);
}

#[test]
fn rotating_a_ruled_strip_preserves_area_and_straight_rulings() {
    let phi = 0.8f64;
    let (sin, cos) = phi.sin_cos();
    let rotated = SurfaceChart::ruled(RuledChart::analytic(
        move |eps| Point::new(0.0, eps, 0.0).rotate_about_t(phi),
        move |_| [-sin, cos, 0.0],
        move |_| [cos, sin],
        |_| [0.0, 0.0],
        [0.1, 0.9],
        [0.2, 1.3],
    ));

    let region = Rect::new([0.2, 0.3], [0.8, 1.2]).unwrap();
    let a = area(&rotated, &region, [41, 41]).unwrap();
    assert!((a - 0.81).abs() <= 1e-12);

    for i in 0..=4 {
        let e = 0.2 + 0.6 * (i as f64) / 4.0;
        let line: Vec<Point> = (0..=20)
            .map(|j| rotated.point([e, 0.3 + 0.9 * (j as f64) / 20.0]))
            .collect();
        assert!(straightness_residual(&line).unwrap() <= 1e-12);
    }
}

#[test]
fn sharpened_paraboloid_characteristics_are_lines_of_slope_one_over_lambda() {
    let lambda = 2.0;
    let chart = builtin::u_lambda(lambda, Rect::new([0.05, -1.0], [1.6, 1.0]).unwrap()).unwrap();
    let curve = trace_tgraph_characteristic(&chart, [0.5, 0.0], [-0.4, 0.4], 1e-3).unwrap();
    assert!(!curve.truncated);

    assert!(straightness_residual(&curve.points).unwrap() <= 1e-9);
    let first = curve.params.first().unwrap();
    let last = curve.params.last().unwrap();
    let slope = (last[1] - first[1]) / (last[0] - first[0]);
    assert!((slope - 1.0 / lambda).abs() <= 1e-9);
    assert!(curve.horizontality().unwrap() <= 1e-5);
}

#[test]
fn intrinsic_trace_of_the_square_root_graph_stays_on_its_closed_surface() {
    let lambda = 2.0;
    let chart = builtin::v_lambda(lambda, Rect::new([-0.5, 0.05], [0.8, 2.5]).unwrap()).unwrap();
    let curve = trace_characteristic(&chart, [0.0, 0.5], [-0.3, 0.5], 1e-3).unwrap();
    assert!(!curve.truncated);

    // Eliminating the chart parameter from (x, u, t - x u) with u = sqrt(lambda t)
    // leaves the closed relation T = Y |Y| / lambda - X Y.
    for p in &curve.points {
        assert!((p.t - (p.y * p.y.abs() / lambda - p.x * p.y)).abs() <= 1e-9);
    }

    // The chart-level profile is the explicit parabola t(x) = lambda (x + 0.5)^2.
    for q in &curve.params {
        assert!((q[1] - lambda * (q[0] + 0.5) * (q[0] + 0.5)).abs() <= 1e-9);
    }
}
