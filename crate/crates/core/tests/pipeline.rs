use std::collections::BTreeSet;

use honeycut::lattice::{build_graph, GraphConfig};
use honeycut::mask::{extract_faces, kept_faces};
use honeycut::pgm::{load_heatmap, save_heatmap};
use honeycut::synth::{generate_lattice, render_heatmap, GroundTruthLattice, Orientation};
use honeycut::{
    detect_nodes, plan_cuts, point_in_polygon, CentroidOptions, Heatmap, NodePoint,
    PipelineConfig, PlanInput, Point2, Polygon,
};

const L: f64 = 40.0;

fn lattice(rows: usize, cols: usize) -> GroundTruthLattice<f64> {
    generate_lattice(rows, cols, L, Point2::new(12.0, 12.0), Orientation::PointyTop).unwrap()
}

fn heatmap(lat: &GroundTruthLattice<f64>) -> Heatmap<f64> {
    let (w, h) = lat.canvas_size(12.0);
    render_heatmap(lat, 2.0, w, h).unwrap()
}

fn center(lat: &GroundTruthLattice<f64>) -> Point2<f64> {
    let b = lat.bbox().unwrap();
    Point2::new((b.min.x + b.max.x) / 2.0, (b.min.y + b.max.y) / 2.0)
}

/// Ground-truth node matched to each detection by nearest distance.
fn match_nodes(lat: &GroundTruthLattice<f64>, det: &[NodePoint<f64>]) -> Vec<usize> {
    det.iter()
        .map(|d| {
            (0..lat.nodes.len())
                .min_by(|&a, &b| {
                    d.position
                        .distance(lat.nodes[a])
                        .total_cmp(&d.position.distance(lat.nodes[b]))
                })
                .unwrap()
        })
        .collect()
}

#[test]
fn heatmap_round_trip_recovers_lattice() {
    let lat = lattice(8, 8);
    let det = detect_nodes(&heatmap(&lat), 0.3, &CentroidOptions::default());
    assert_eq!(det.len(), lat.nodes.len());
    let m = match_nodes(&lat, &det);
    assert_eq!(m.iter().collect::<BTreeSet<_>>().len(), det.len());
    let g = build_graph(det, &GraphConfig::default()).unwrap();
    let got: BTreeSet<(usize, usize)> = g
        .edges
        .iter()
        .map(|e| (m[e.a].min(m[e.b]), m[e.a].max(m[e.b])))
        .collect();
    let want: BTreeSet<(usize, usize)> = lat.adjacency.iter().copied().collect();
    assert_eq!(got, want);
}

#[test]
fn face_count_matches_ground_truth() {
    for orientation in [Orientation::PointyTop, Orientation::FlatTop] {
        let lat = generate_lattice(4, 4, L, Point2::new(0.0, 0.0), orientation).unwrap();
        let g = build_graph(lat.node_points(), &GraphConfig::default()).unwrap();
        let faces = extract_faces(&g);
        assert_eq!(faces.len(), lat.faces.len());
        let mut got: Vec<Vec<usize>> = faces.faces.clone();
        let mut want: Vec<Vec<usize>> = lat.faces.iter().map(|f| canonical(f)).collect();
        got.sort();
        want.sort();
        assert_eq!(got, want);
    }
}

fn canonical(f: &[usize]) -> Vec<usize> {
    let k = (0..f.len()).min_by_key(|&i| f[i]).unwrap();
    f[k..].iter().chain(&f[..k]).copied().collect()
}

#[test]
fn kept_faces_match_brute_force() {
    let lat = lattice(8, 8);
    let g = build_graph(lat.node_points(), &GraphConfig::default()).unwrap();
    let faces = extract_faces(&g);
    let target = Polygon::regular(center(&lat), 2.5 * L, 96).unwrap();
    let kept = kept_faces(&g, &faces, &target);
    let brute: Vec<usize> = (0..faces.len())
        .filter(|&i| {
            faces.faces[i].iter().all(|&v| {
                // winding number against the target
                let p = g.position(v);
                let vs = target.vertices();
                let mut wn = 0i32;
                for j in 0..vs.len() {
                    let (a, b) = (vs[j], vs[(j + 1) % vs.len()]);
                    let d = b - a;
                    let t = ((p - a).dot(d) / d.norm_sq()).clamp(0.0, 1.0);
                    if p.distance(a.lerp(b, t)) < 1e-9 {
                        // boundary points are outside
                        return false;
                    }
                    let side = (b - a).cross(p - a);
                    if a.y <= p.y && b.y > p.y && side > 0.0 {
                        wn += 1;
                    } else if a.y > p.y && b.y <= p.y && side < 0.0 {
                        wn -= 1;
                    }
                }
                wn != 0
            })
        })
        .collect();
    assert_eq!(kept, brute);
    assert!(!kept.is_empty() && kept.len() < faces.len());
}

#[test]
fn plan_is_translation_invariant() {
    let lat = lattice(6, 6);
    let target = Polygon::regular(center(&lat), 2.0 * L, 64).unwrap();
    let cfg = PipelineConfig::default();
    let a = plan_cuts(PlanInput::Nodes(lat.node_points()), &target, &cfg).unwrap();
    let shift = Point2::new(64.0, -32.0);
    let moved: Vec<Point2<f64>> = lat.nodes.iter().map(|&p| p + shift).collect();
    let b = plan_cuts(
        PlanInput::Nodes(honeycut::lattice::nodes_from_points(&moved)),
        &target.translated(shift),
        &cfg,
    )
    .unwrap();
    assert_eq!(a.plan.cuts.len(), b.plan.cuts.len());
    for (x, y) in a.plan.cuts.iter().zip(&b.plan.cuts) {
        assert_eq!(x.edge, y.edge);
        assert!((x.point + shift).distance(y.point) < 1e-9);
        assert_eq!(x.t, y.t);
    }
}

#[test]
fn plan_is_deterministic_and_well_formed() {
    let lat = lattice(8, 8);
    let hm = heatmap(&lat);
    let target = Polygon::regular(center(&lat), 2.5 * L, 64).unwrap();
    let cfg = PipelineConfig::default();
    let a = plan_cuts(PlanInput::Heatmap(&hm), &target, &cfg).unwrap();
    let b = plan_cuts(PlanInput::Heatmap(&hm), &target, &cfg).unwrap();
    assert_eq!(a.plan, b.plan);
    assert!(!a.plan.cuts.is_empty());
    let edges: BTreeSet<usize> = a.plan.cuts.iter().map(|c| c.edge).collect();
    assert_eq!(edges.len(), a.plan.cuts.len());
    // every cut edge joins a node inside the grown region to one outside it
    for c in &a.plan.cuts {
        let e = a.graph.edges[c.edge];
        let (p, q) = (a.graph.position(e.a), a.graph.position(e.b));
        assert_ne!(point_in_polygon(p, &a.contour), point_in_polygon(q, &a.contour));
        assert!(c.t >= 0.4 && c.t <= 0.6);
    }
}

#[test]
fn target_smaller_than_a_cell_is_reported() {
    let lat = lattice(4, 4);
    let tiny = Polygon::regular(center(&lat), 0.3 * L, 16).unwrap();
    let err = plan_cuts(PlanInput::Nodes(lat.node_points()), &tiny, &PipelineConfig::default())
        .unwrap_err();
    assert_eq!(err.stage.to_string(), "structure_mask");
    assert!(err.to_string().contains("target too small"));
}

#[test]
fn pgm_round_trip_within_quantisation() {
    let lat = lattice(2, 3);
    let hm = heatmap(&lat);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.pgm");
    save_heatmap(&hm, &path).unwrap();
    let back: Heatmap<f64> = load_heatmap(&path).unwrap();
    assert_eq!((back.width(), back.height()), (hm.width(), hm.height()));
    for (a, b) in hm.values().iter().zip(back.values()) {
        assert!((a - b).abs() <= 0.5 / 255.0 + 1e-12);
    }
}

#[test]
fn single_precision_pipeline() {
    let lat: GroundTruthLattice<f32> =
        generate_lattice(6, 6, 40.0f32, Point2::new(12.0, 12.0), Orientation::PointyTop).unwrap();
    let b = lat.bbox().unwrap();
    let c = Point2::new((b.min.x + b.max.x) / 2.0, (b.min.y + b.max.y) / 2.0);
    let target = Polygon::regular(c, 80.0f32, 64).unwrap();
    let r = plan_cuts(PlanInput::Nodes(lat.node_points()), &target, &PipelineConfig::default())
        .unwrap();
    assert!(!r.plan.cuts.is_empty());
    assert!(r.plan.cuts.iter().all(|c| c.t >= 0.4 && c.t <= 0.6));
}

