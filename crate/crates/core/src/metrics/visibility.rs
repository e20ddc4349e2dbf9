use crate::{Domain, Point};

/// Exact geodesic distance in a closed simple polygon: Dijkstra on the graph
/// whose vertices are the polygon corners plus `x` and `y`, joined when the
/// connecting segment stays in the closure. `None` if `y` is unreachable.
pub fn visibility_shortest_path(domain: &Domain, verts: &[Point], x: Point, y: Point) -> Option<f64> {
    let mut nodes = Vec::with_capacity(verts.len() + 2);
    nodes.push(x);
    nodes.push(y);
    nodes.extend_from_slice(verts);
    let n = nodes.len();
    let step = 1e-3 * domain.diameter();
    let mut weight = vec![f64::INFINITY; n * n];
    for i in 0..n {
        weight[i * n + i] = 0.0;
        for j in i + 1..n {
            if domain.segment_in_closure(nodes[i], nodes[j], step) {
                let w = (nodes[j] - nodes[i]).norm();
                weight[i * n + j] = w;
                weight[j * n + i] = w;
            }
        }
    }
    // dense Dijkstra, n is tiny
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    dist[0] = 0.0;
    for _ in 0..n {
        let u = (0..n)
            .filter(|&k| !done[k] && dist[k].is_finite())
            .min_by(|&a, &b| dist[a].total_cmp(&dist[b]))?;
        if u == 1 {
            return Some(dist[1]);
        }
        done[u] = true;
        for v in 0..n {
            let w = weight[u * n + v];
            if w.is_finite() && dist[u] + w < dist[v] {
                dist[v] = dist[u] + w;
            }
        }
    }
    dist[1].is_finite().then_some(dist[1])
}
