//! Property tests for the group layer and the adapted surface frame.

use h1geom::group::{horizontal_line, horizontality_residual};
use h1geom::surface::{builtin, Rect};
use h1geom::{FrameVector, NumericParams, Point, SurfaceChart};
use proptest::prelude::*;

fn coord() -> impl Strategy<Value = f64> {
    -3.0..3.0f64
}

fn point() -> impl Strategy<Value = Point> {
    (coord(), coord(), coord()).prop_map(|(x, y, t)| Point::new(x, y, t))
}

fn close(p: Point, q: Point, tol: f64) -> bool {
    (p.x - q.x).abs() <= tol && (p.y - q.y).abs() <= tol && (p.t - q.t).abs() <= tol
}

proptest! {
    #[test]
    fn product_is_associative(a in point(), b in point(), c in point()) {
        prop_assert!(close(a.product(b).product(c), a.product(b.product(c)), 1e-12));
    }

    #[test]
    fn inverses_cancel_on_both_sides(a in point()) {
        prop_assert!(close(a.product(a.inverse()), Point::ORIGIN, 1e-12));
        prop_assert!(close(a.inverse().product(a), Point::ORIGIN, 1e-12));
    }

    #[test]
    fn frame_components_round_trip(v in prop::array::uniform3(coord()), base in point()) {
        let back = FrameVector::from_euclidean(v, base).to_euclidean();
        for i in 0..3 {
            prop_assert!((v[i] - back[i]).abs() <= 1e-12);
        }
    }

    #[test]
    fn j_rotates_the_horizontal_part_by_a_quarter_turn(
        v in prop::array::uniform3(coord()),
        base in point(),
    ) {
        let w = FrameVector::new(v[0], v[1], v[2], base);
        let j = w.j();
        let jj = j.j();
        prop_assert!((jj.a + w.a).abs() <= 1e-12);
        prop_assert!((jj.b + w.b).abs() <= 1e-12);
        prop_assert_eq!(jj.c, 0.0);
        prop_assert!(j.inner(w.horizontal()).unwrap().abs() <= 1e-12);
        prop_assert!((j.norm() - w.horizontal().norm()).abs() <= 1e-12);
    }

    #[test]
    fn horizontal_lines_have_horizontal_tangents(
        p in point(),
        theta in 0.0..std::f64::consts::TAU,
    ) {
        let (b, a) = theta.sin_cos();
        let step = 0.05;
        let samples: Vec<Point> = (0..11)
            .map(|i| horizontal_line(p, a, b, (i as f64 - 5.0) * step))
            .collect();
        prop_assert!(horizontality_residual(&samples, step).unwrap() <= 1e-9);
    }
}

fn sample_chart(ix: usize) -> (SurfaceChart, Rect) {
    match ix {
        0 => (
            builtin::vertical_plane(0.7, Rect::new([-1.0, -1.0], [1.0, 1.0]).unwrap()),
            Rect::new([-0.9, -0.9], [0.9, 0.9]).unwrap(),
        ),
        1 => (
            builtin::paraboloid(Rect::new([0.2, -1.0], [1.5, 1.0]).unwrap()),
            Rect::new([0.25, -0.9], [1.4, 0.9]).unwrap(),
        ),
        _ => (
            builtin::helicoid([-1.0, 1.0], [-2.0, 2.0]),
            Rect::new([-0.9, -1.9], [0.9, 1.9]).unwrap(),
        ),
    }
}

proptest! {
    #[test]
    fn surface_frames_are_orthonormal_and_adapted(
        ix in 0usize..3,
        u in 0.0..1.0f64,
        v in 0.0..1.0f64,
    ) {
        let (chart, window) = sample_chart(ix);
        let p = [
            window.lo[0] + u * (window.hi[0] - window.lo[0]),
            window.lo[1] + v * (window.hi[1] - window.lo[1]),
        ];
        let fr = chart.frame(p, &NumericParams::default()).unwrap();

        prop_assert!((fr.nh_norm * fr.nh_norm + fr.n_t * fr.n_t - 1.0).abs() <= 1e-12);
        prop_assert!((fr.n.norm() - 1.0).abs() <= 1e-12);
        prop_assert!((fr.nu_h.norm() - 1.0).abs() <= 1e-12);
        prop_assert!((fr.z.norm() - 1.0).abs() <= 1e-12);
        prop_assert!((fr.s.norm() - 1.0).abs() <= 1e-12);
        prop_assert_eq!(fr.nu_h.c, 0.0);
        prop_assert_eq!(fr.z.c, 0.0);
        prop_assert!(fr.z.inner(fr.nu_h).unwrap().abs() <= 1e-12);
        prop_assert!(fr.n.inner(fr.z).unwrap().abs() <= 1e-12);
        prop_assert!(fr.n.inner(fr.s).unwrap().abs() <= 1e-12);
        prop_assert!(fr.z.inner(fr.s).unwrap().abs() <= 1e-12);

        let rebuilt = fr
            .nu_h
            .scale(fr.nh_norm)
            .add(FrameVector::new(0.0, 0.0, fr.n_t, fr.point))
            .unwrap();
        prop_assert!((rebuilt.a - fr.n.a).abs() <= 1e-12);
        prop_assert!((rebuilt.b - fr.n.b).abs() <= 1e-12);
        prop_assert!((rebuilt.c - fr.n.c).abs() <= 1e-12);
    }
}
