//! Convex hulls and exact volumes in dimensions 1 to 3.

use crate::error::{LabError, Result};

pub type P2 = [f64; 2];
pub type P3 = [f64; 3];

fn cross2(o: P2, a: P2, b: P2) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn scale_of<const N: usize>(pts: &[[f64; N]]) -> f64 {
    pts.iter()
        .flat_map(|p| p.iter())
        .fold(1.0f64, |m, v| m.max(v.abs()))
}

/// Strict convex hull in counter-clockwise order (collinear and repeated
/// points dropped), by the monotone chain.
pub fn hull_2d(points: &[P2]) -> Vec<P2> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let tol = 1e-12 * scale_of(&pts).powi(2);
    pts.dedup_by(|a, b| (a[0] - b[0]).abs() <= 1e-12 && (a[1] - b[1]).abs() <= 1e-12);
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<P2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross2(lower[lower.len() - 2], lower[lower.len() - 1], p) <= tol {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<P2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross2(upper[upper.len() - 2], upper[upper.len() - 1], p) <= tol {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Shoelace area of a counter-clockwise polygon.
pub fn polygon_area(poly: &[P2]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
}

fn sub(a: P3, b: P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross3(a: P3, b: P3) -> P3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot3(a: P3, b: P3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Six times the signed volume of the tetrahedron `(a, b, c, d)`.
fn orient(a: P3, b: P3, c: P3, d: P3) -> f64 {
    dot3(cross3(sub(b, a), sub(c, a)), sub(d, a))
}

/// Triangulated hull with outward-oriented faces.
#[derive(Debug, Clone)]
pub struct Hull3 {
    pub points: Vec<P3>,
    pub faces: Vec<[usize; 3]>,
}

impl Hull3 {
    /// Indices of the input points that are hull vertices, sorted.
    pub fn vertex_indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.faces.iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn volume(&self) -> f64 {
        let idx = self.vertex_indices();
        let mut c = [0.0; 3];
        for &i in &idx {
            for d in 0..3 {
                c[d] += self.points[i][d] / idx.len() as f64;
            }
        }
        self.faces
            .iter()
            .map(|f| orient(c, self.points[f[0]], self.points[f[1]], self.points[f[2]]))
            .sum::<f64>()
            / 6.0
    }

    /// Unique undirected edges.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self
            .faces
            .iter()
            .flat_map(|f| [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])])
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        e.sort_unstable();
        e.dedup();
        e
    }

    /// True when `p` is inside or on the boundary.
    pub fn contains(&self, p: P3) -> bool {
        self.faces
            .iter()
            .all(|f| orient(self.points[f[0]], self.points[f[1]], self.points[f[2]], p) <= 0.0)
    }
}

/// Incremental 3D hull. Fails when all points are coplanar.
pub fn hull_3d(points: &[P3]) -> Result<Hull3> {
    let n = points.len();
    let flat = || LabError::Inadmissible("3D body is degenerate (all vertices coplanar)".into());
    if n < 4 {
        return Err(flat());
    }
    let scale = scale_of(points);
    let eps = 1e-12 * scale.powi(3);

    let i0 = 0;
    let i1 = (1..n)
        .max_by(|&a, &b| {
            let da = sub(points[a], points[i0]);
            let db = sub(points[b], points[i0]);
            dot3(da, da).total_cmp(&dot3(db, db))
        })
        .ok_or_else(flat)?;
    let i2 = (0..n)
        .max_by(|&a, &b| {
            let ca = cross3(sub(points[i1], points[i0]), sub(points[a], points[i0]));
            let cb = cross3(sub(points[i1], points[i0]), sub(points[b], points[i0]));
            dot3(ca, ca).total_cmp(&dot3(cb, cb))
        })
        .ok_or_else(flat)?;
    let i3 = (0..n)
        .max_by(|&a, &b| {
            orient(points[i0], points[i1], points[i2], points[a])
                .abs()
                .total_cmp(&orient(points[i0], points[i1], points[i2], points[b]).abs())
        })
        .ok_or_else(flat)?;
    let o = orient(points[i0], points[i1], points[i2], points[i3]);
    if o.abs() <= eps {
        return Err(flat());
    }
    let mut faces: Vec<[usize; 3]> = if o < 0.0 {
        vec![[i0, i1, i2], [i0, i3, i1], [i1, i3, i2], [i2, i3, i0]]
    } else {
        vec![[i0, i2, i1], [i0, i1, i3], [i1, i2, i3], [i2, i0, i3]]
    };

    for p in 0..n {
        if [i0, i1, i2, i3].contains(&p) {
            continue;
        }
        let visible: Vec<bool> = faces
            .iter()
            .map(|f| orient(points[f[0]], points[f[1]], points[f[2]], points[p]) > eps)
            .collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut edges = Vec::new();
        for (f, _) in faces.iter().zip(&visible).filter(|(_, &v)| v) {
            edges.extend([(f[0], f[1]), (f[1], f[2]), (f[2], f[0])]);
        }
        let horizon: Vec<(usize, usize)> = edges
            .iter()
            .copied()
            .filter(|&(a, b)| !edges.contains(&(b, a)))
            .collect();
        faces = faces
            .into_iter()
            .zip(visible)
            .filter(|(_, v)| !v)
            .map(|(f, _)| f)
            .collect();
        faces.extend(horizon.into_iter().map(|(a, b)| [a, b, p]));
    }
    Ok(Hull3 {
        points: points.to_vec(),
        faces,
    })
}

/// `max_v <v, u>` over a vertex list.
pub fn support(vertices: &[Vec<f64>], u: &[f64]) -> f64 {
    vertices
        .iter()
        .map(|v| v.iter().zip(u).map(|(a, b)| a * b).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Unit directions for sampled support functions: `±1` in 1D, 360 equally
/// spaced angles in 2D, and a 962-point Fibonacci lattice on the sphere in 3D.
pub fn direction_set(dimension: usize) -> Vec<Vec<f64>> {
    match dimension {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..360)
            .map(|k| {
                let a = (k as f64).to_radians();
                vec![a.cos(), a.sin()]
            })
            .collect(),
        _ => {
            let n = 962;
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..n)
                .map(|k| {
                    let z = 1.0 - (2 * k + 1) as f64 / n as f64;
                    let r = (1.0 - z * z).sqrt();
                    let phi = golden * k as f64;
                    vec![r * phi.cos(), r * phi.sin(), z]
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_2d_drops_interior_and_collinear() {
        let pts = [
            [0.0, 0.0],
            [1.0, 0.0],
            [0.5, 0.0],
            [1.0, 1.0],
            [0.0, 1.0],
            [0.5, 0.5],
        ];
        let h = hull_2d(&pts);
        assert_eq!(h.len(), 4);
        assert!((polygon_area(&h) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cube_and_simplex_volumes() {
        let mut cube = Vec::new();
        for i in 0..8 {
            cube.push([(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64]);
        }
        cube.push([0.5, 0.5, 0.5]);
        let h = hull_3d(&cube).unwrap();
        assert_eq!(h.vertex_indices().len(), 8);
        assert!((h.volume() - 1.0).abs() < 1e-14);
        assert!(h.contains([0.2, 0.9, 0.5]));
        assert!(!h.contains([1.2, 0.5, 0.5]));
        assert_eq!(h.edges().len(), 18);

        let s = hull_3d(&[[0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]).unwrap();
        assert!((s.volume() - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn coplanar_points_are_rejected() {
        let pts = [
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [1.0, 1.0, 0.0],
        ];
        assert!(hull_3d(&pts).is_err());
    }

    #[test]
    fn fibonacci_directions_are_unit() {
        let d = direction_set(3);
        assert_eq!(d.len(), 962);
        for u in d {
            assert!((u.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-14);
        }
    }
}
