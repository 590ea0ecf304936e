use std::fmt::Write as _;

use super::geometry::{hull_2d, hull_3d, polygon_area, P2, P3};
use crate::error::{LabError, Result};

fn check_dimension(dimension: usize) -> Result<()> {
    if !(1..=3).contains(&dimension) {
        return Err(LabError::Inadmissible(format!(
            "body dimension must be 1, 2 or 3, got {dimension}"
        )));
    }
    Ok(())
}

fn coords<const N: usize>(body: &[Vec<f64>]) -> Vec<[f64; N]> {
    body.iter()
        .map(|v| {
            let mut p = [0.0; N];
            p.copy_from_slice(v);
            p
        })
        .collect()
}

/// Number of hull vertices of a vertex list.
fn hull_vertex_count(body: &[Vec<f64>], dimension: usize) -> Result<usize> {
    Ok(match dimension {
        1 => {
            let (lo, hi) = body
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| {
                    (l.min(v[0]), h.max(v[0]))
                });
            if hi > lo {
                2
            } else {
                1
            }
        }
        2 => hull_2d(&coords::<2>(body)).len(),
        _ => hull_3d(&coords::<3>(body))?.vertex_indices().len(),
    })
}

/// Exact volume of the convex hull of `body`: length, shoelace area, or the
/// fan volume of a triangulated hull.
pub fn slice_volume(body: &[Vec<f64>], dimension: usize) -> Result<f64> {
    check_dimension(dimension)?;
    if let Some(v) = body.iter().find(|v| v.len() != dimension) {
        return Err(LabError::Mismatch(format!(
            "vertex {v:?} does not have {dimension} coordinates"
        )));
    }
    if body.is_empty() {
        return Ok(0.0);
    }
    Ok(match dimension {
        1 => {
            let (lo, hi) = body
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| {
                    (l.min(v[0]), h.max(v[0]))
                });
            hi - lo
        }
        2 => polygon_area(&hull_2d(&coords::<2>(body))),
        _ => match hull_3d(&coords::<3>(body)) {
            Ok(h) => h.volume(),
            Err(_) => 0.0,
        },
    })
}

/// Convex bodies `K_t` given by vertex lists at uniformly spaced `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexBodyFamily {
    dimension: usize,
    t_samples: Vec<f64>,
    bodies: Vec<Vec<Vec<f64>>>,
}

impl ConvexBodyFamily {
    pub fn new(dimension: usize, t_samples: Vec<f64>, bodies: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        check_dimension(dimension)?;
        if t_samples.len() != bodies.len() || t_samples.is_empty() {
            return Err(LabError::Mismatch(format!(
                "{} t samples for {} bodies",
                t_samples.len(),
                bodies.len()
            )));
        }
        if t_samples.len() >= 2 {
            let h = t_samples[1] - t_samples[0];
            for (k, w) in t_samples.windows(2).enumerate() {
                let d = w[1] - w[0];
                if !(d > 0.0) || (d - h).abs() > 1e-9 * h.abs().max(1.0) {
                    return Err(LabError::Invariant {
                        what: "uniform increasing t samples",
                        index: k + 1,
                        value: d,
                        tol: 1e-9,
                    });
                }
            }
        }
        for (k, body) in bodies.iter().enumerate() {
            if body
                .iter()
                .any(|v| v.len() != dimension || v.iter().any(|x| !x.is_finite()))
            {
                return Err(LabError::Mismatch(format!(
                    "body {k} has a vertex that is not a finite point of dimension {dimension}"
                )));
            }
            let count = if body.len() > dimension {
                hull_vertex_count(body, dimension).unwrap_or(0)
            } else {
                body.len()
            };
            if count != body.len() {
                return Err(LabError::Invariant {
                    what: "vertices in convex position",
                    index: k,
                    value: count as f64,
                    tol: body.len() as f64,
                });
            }
        }
        Ok(Self {
            dimension,
            t_samples,
            bodies,
        })
    }

    /// Builds a family from arbitrary point clouds, keeping only hull vertices.
    pub fn from_point_clouds(
        dimension: usize,
        t_samples: Vec<f64>,
        clouds: Vec<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        check_dimension(dimension)?;
        let bodies = clouds
            .into_iter()
            .map(|c| hull_vertices(&c, dimension))
            .collect::<Result<Vec<_>>>()?;
        Self::new(dimension, t_samples, bodies)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn t_samples(&self) -> &[f64] {
        &self.t_samples
    }

    pub fn bodies(&self) -> &[Vec<Vec<f64>>] {
        &self.bodies
    }

    pub fn len(&self) -> usize {
        self.bodies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bodies.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        if self.t_samples.len() < 2 {
            1.0
        } else {
            self.t_samples[1] - self.t_samples[0]
        }
    }

    pub fn volumes(&self) -> Result<Vec<f64>> {
        self.bodies
            .iter()
            .map(|b| slice_volume(b, self.dimension))
            .collect()
    }

    /// `body <t>` lines, each followed by one vertex per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "dimension {}", self.dimension).unwrap();
        for (t, body) in self.t_samples.iter().zip(&self.bodies) {
            writeln!(out, "body {t:.17e}").unwrap();
            for v in body {
                let line: Vec<String> = v.iter().map(|x| format!("{x:.17e}")).collect();
                writeln!(out, "{}", line.join(" ")).unwrap();
            }
        }
        out
    }

    /// Parses [`to_text`](Self::to_text). `#` lines and blank lines are
    /// ignored; without a `dimension` line the dimension is taken from the
    /// first vertex.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut dimension = None;
        let mut t_samples = Vec::new();
        let mut bodies: Vec<Vec<Vec<f64>>> = Vec::new();
        let num = |s: &str, line: usize| {
            s.parse::<f64>()
                .map_err(|e| LabError::Parse(format!("line {line}: bad number {s:?}: {e}")))
        };
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            match fields.next() {
                Some("dimension") => {
                    let d = fields
                        .next()
                        .and_then(|d| d.parse::<usize>().ok())
                        .ok_or_else(|| LabError::Parse(format!("line {}: bad dimension", i + 1)))?;
                    dimension = Some(d);
                }
                Some("body") => {
                    let t = fields.next().ok_or_else(|| {
                        LabError::Parse(format!("line {}: body without t", i + 1))
                    })?;
                    t_samples.push(num(t, i + 1)?);
                    bodies.push(Vec::new());
                }
                Some(_) => {
                    let v = line
                        .split_whitespace()
                        .map(|s| num(s, i + 1))
                        .collect::<Result<Vec<f64>>>()?;
                    let body = bodies.last_mut().ok_or_else(|| {
                        LabError::Parse(format!("line {}: vertex before any `body` line", i + 1))
                    })?;
                    dimension.get_or_insert(v.len());
                    body.push(v);
                }
                None => {}
            }
        }
        let dimension =
            dimension.ok_or_else(|| LabError::Parse("family has no vertices".into()))?;
        Self::new(dimension, t_samples, bodies)
    }
}

/// Hull vertices of a point cloud, as coordinate vectors.
pub fn hull_vertices(cloud: &[Vec<f64>], dimension: usize) -> Result<Vec<Vec<f64>>> {
    check_dimension(dimension)?;
    if cloud.iter().any(|v| v.len() != dimension) {
        return Err(LabError::Mismatch(format!(
            "points must have {dimension} coordinates"
        )));
    }
    Ok(match dimension {
        1 => {
            let (lo, hi) = cloud
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| {
                    (l.min(v[0]), h.max(v[0]))
                });
            if hi > lo {
                vec![vec![lo], vec![hi]]
            } else {
                vec![vec![lo]]
            }
        }
        2 => hull_2d(&coords::<2>(cloud))
            .into_iter()
            .map(|p: P2| p.to_vec())
            .collect(),
        _ => {
            let pts: Vec<P3> = coords::<3>(cloud);
            let h = hull_3d(&pts)?;
            h.vertex_indices()
                .into_iter()
                .map(|i| pts[i].to_vec())
                .collect()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(side: f64) -> Vec<Vec<f64>> {
        vec![
            vec![0.0, 0.0],
            vec![side, 0.0],
            vec![side, side],
            vec![0.0, side],
        ]
    }

    #[test]
    fn known_volumes() {
        assert_eq!(slice_volume(&square(1.0), 2).unwrap(), 1.0);
        let simplex = vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        assert!((slice_volume(&simplex, 3).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        let hexagon: Vec<Vec<f64>> = (0..6)
            .map(|k| {
                let a = k as f64 * std::f64::consts::PI / 3.0;
                vec![a.cos(), a.sin()]
            })
            .collect();
        let exact = 3.0 * 3f64.sqrt() / 2.0;
        assert!((slice_volume(&hexagon, 2).unwrap() - exact).abs() < 1e-14);
        assert_eq!(slice_volume(&[vec![-1.0], vec![2.5]], 1).unwrap(), 3.5);
    }

    #[test]
    fn rejects_non_convex_position() {
        let mut body = square(1.0);
        body.push(vec![0.5, 0.5]);
        assert!(ConvexBodyFamily::new(2, vec![0.0], vec![body]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let fam = ConvexBodyFamily::new(
            2,
            vec![0.0, 0.5, 1.0],
            vec![square(1.0), square(0.8), square(0.6)],
        )
        .unwrap();
        let back = ConvexBodyFamily::from_text(&fam.to_text()).unwrap();
        assert_eq!(back, fam);
        let bare = "# squares\nbody 0\n0 0\n1 0\n1 1\n0 1\nbody 1\n0 0\n2 0\n2 2\n0 2\n";
        let parsed = ConvexBodyFamily::from_text(bare).unwrap();
        assert_eq!(parsed.dimension(), 2);
        assert_eq!(parsed.volumes().unwrap(), vec![1.0, 4.0]);
    }
}
