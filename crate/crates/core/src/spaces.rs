//! Standard test spaces, all with uniform weights.

use crate::mmspace::FiniteMMSpace;

/// Shortest-path metric of an unweighted connected graph.
pub fn graph_metric(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<f64>> {
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for &(a, b) in edges {
        d[a][b] = 1.0;
        d[b][a] = 1.0;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Cycle graph C_n.
pub fn cycle(n: usize) -> FiniteMMSpace {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    FiniteMMSpace::uniform(graph_metric(n, &edges)).expect("cycle metric is valid")
}

/// Points on a line with consecutive gaps `gaps`.
pub fn path(gaps: &[f64]) -> FiniteMMSpace {
    let mut pos = vec![0.0];
    for g in gaps {
        pos.push(pos[pos.len() - 1] + g);
    }
    line(&pos)
}

/// Points of ℝ with the induced metric.
pub fn line(positions: &[f64]) -> FiniteMMSpace {
    let d = positions.iter().map(|a| positions.iter().map(|b| (a - b).abs()).collect()).collect();
    FiniteMMSpace::uniform(d).expect("line metric is valid")
}

/// The Petersen graph.
pub fn petersen() -> FiniteMMSpace {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    FiniteMMSpace::uniform(graph_metric(10, &edges)).expect("Petersen metric is valid")
}

/// The k×k grid on the flat torus (ℤ/k)² with the quotient Euclidean metric
/// √(dx² + dy²), dx and dy being cyclic coordinate distances.
pub fn torus_grid(k: usize) -> FiniteMMSpace {
    let n = k * k;
    let cyc = |a: usize, b: usize| {
        let t = a.abs_diff(b);
        t.min(k - t) as f64
    };
    let d = (0..n)
        .map(|p| {
            (0..n)
                .map(|q| {
                    let (dx, dy) = (cyc(p / k, q / k), cyc(p % k, q % k));
                    (dx * dx + dy * dy).sqrt()
                })
                .collect()
        })
        .collect();
    FiniteMMSpace::uniform(d).expect("torus metric is valid")
}

/// Uniform three-point space with the given side lengths d01, d02, d12.
pub fn triangle(d01: f64, d02: f64, d12: f64) -> FiniteMMSpace {
    FiniteMMSpace::uniform(vec![
        vec![0.0, d01, d02],
        vec![d01, 0.0, d12],
        vec![d02, d12, 0.0],
    ])
    .expect("triangle metric is valid")
}
