use proptest::prelude::*;

use rshape::geom::{convex_hull, polygon_area, polygon_contains, Point2, PointCloud};
use rshape::io::{parse_points, points_csv};
use rshape::spacing::gumbel_quantile;

fn coord() -> impl Strategy<Value = f64> {
    prop_oneof![
        -1e6..1e6f64,
        -1.0..1.0f64,
        Just(0.0),
        Just(-0.0),
        Just(1e-300),
    ]
}

proptest! {
    #[test]
    fn csv_round_trip_is_exact(pts in prop::collection::vec((coord(), coord()), 0..50)) {
        let pts: Vec<Point2> = pts.into_iter().map(|(x, y)| Point2::new(x, y)).collect();
        let text = points_csv(&pts);
        // ingestion drops exact duplicates, so compare to the deduped order
        let mut seen = std::collections::HashSet::new();
        let pts: Vec<Point2> = pts
            .into_iter()
            .filter(|p| seen.insert((p.x.to_bits(), p.y.to_bits())))
            .collect();
        let back = parse_points(&text, "prop").unwrap();
        // -0.0 prints as "-0" and reparses to -0.0; compare by bits
        prop_assert_eq!(pts.len(), back.len());
        for (a, b) in pts.iter().zip(back.points()) {
            prop_assert_eq!(a.x.to_bits(), b.x.to_bits());
            prop_assert_eq!(a.y.to_bits(), b.y.to_bits());
        }
    }

    #[test]
    fn convex_hull_contains_its_cloud(pts in prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 3..60)) {
        let pts: Vec<Point2> = pts.into_iter().map(|(x, y)| Point2::new(x, y)).collect();
        let cloud = PointCloud::new(pts.clone(), "prop").unwrap();
        if let Ok(hull) = convex_hull(&cloud) {
            prop_assert!(polygon_area(&hull) >= 0.0);
            for p in &pts {
                prop_assert!(polygon_contains(&hull, *p, 1e-9));
            }
        }
    }

    #[test]
    fn gumbel_quantile_is_monotone(a in 1e-6..0.5f64, step in 1e-6..0.4f64) {
        let b = a + step;
        prop_assert!(gumbel_quantile(a).unwrap() > gumbel_quantile(b).unwrap());
    }
}
