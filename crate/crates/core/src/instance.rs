//! Problem data: a depot plus `n` targets with symmetric travel times.
//!
//! Node `0` is always the depot; targets carry ids `1..=n`. The travel-time
//! matrix must be symmetric, nonnegative, zero on the diagonal and satisfy
//! the triangle inequality. Instances are immutable after construction and
//! safe to share across threads.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::EPS_TRIANGLE;
use crate::walk::Visit;

/// Matrix index of the depot. Targets occupy indices `1..=n`.
pub const DEPOT_INDEX: usize = 0;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("need at least 3 targets plus a depot, got {0} nodes")]
    TooFewNodes(usize),
    #[error("depot index {index} out of range for {count} points")]
    DepotIndexOutOfRange { index: usize, count: usize },
    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),
    #[error("matrix must be {expected}x{expected}; row {row} has {len} entries")]
    BadShape { expected: usize, row: usize, len: usize },
    #[error("matrix is asymmetric at ({0}, {1})")]
    AsymmetricMatrix(usize, usize),
    #[error("negative entry at ({0}, {1})")]
    NegativeEntry(usize, usize),
    #[error("nonzero diagonal entry at node {0}")]
    NonzeroDiagonal(usize),
    #[error("triangle inequality violated: time[{0}][{2}] > time[{0}][{1}] + time[{1}][{2}]")]
    TriangleViolation(usize, usize, usize),
    #[error("invalid instance file: {0}")]
    Parse(String),
}

/// An immutable monitoring instance: `n` targets, one depot, symmetric
/// travel times over the `n + 1` nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    n: usize,
    /// Flattened `(n + 1) x (n + 1)` travel-time matrix, row-major.
    time: Vec<f64>,
    /// Planar coordinates per node when the instance is Euclidean; `[0]` is
    /// the depot. Kept for provenance and round-tripping only.
    coords: Option<Vec<[f64; 2]>>,
    name: Option<String>,
}

impl Instance {
    /// Euclidean instance from planar points. The point at `depot_index`
    /// becomes node 0; the remaining points become targets `1..=n` in their
    /// original order.
    pub fn from_points(points: &[[f64; 2]], depot_index: usize) -> Result<Self, InstanceError> {
        if points.len() < 4 {
            return Err(InstanceError::TooFewNodes(points.len()));
        }
        if depot_index >= points.len() {
            return Err(InstanceError::DepotIndexOutOfRange {
                index: depot_index,
                count: points.len(),
            });
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(InstanceError::DuplicatePoint(i, j));
                }
            }
        }
        let mut ordered = Vec::with_capacity(points.len());
        ordered.push(points[depot_index]);
        ordered.extend(
            points
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != depot_index)
                .map(|(_, p)| *p),
        );
        let count = ordered.len();
        let mut time = vec![0.0; count * count];
        for a in 0..count {
            for b in 0..count {
                let dx = ordered[a][0] - ordered[b][0];
                let dy = ordered[a][1] - ordered[b][1];
                time[a * count + b] = (dx * dx + dy * dy).sqrt();
            }
        }
        Ok(Self {
            n: count - 1,
            time,
            coords: Some(ordered),
            name: None,
        })
    }

    /// Instance from an explicit `(n + 1) x (n + 1)` matrix with node 0 as
    /// the depot. Validates symmetry, nonnegativity, the zero diagonal and
    /// the triangle inequality.
    pub fn from_matrix(matrix: &[Vec<f64>], n: usize) -> Result<Self, InstanceError> {
        if n < 3 {
            return Err(InstanceError::TooFewNodes(n + 1));
        }
        let count = n + 1;
        if matrix.len() != count {
            return Err(InstanceError::BadShape {
                expected: count,
                row: count,
                len: matrix.len(),
            });
        }
        for (row, r) in matrix.iter().enumerate() {
            if r.len() != count {
                return Err(InstanceError::BadShape {
                    expected: count,
                    row,
                    len: r.len(),
                });
            }
        }
        let mut time = vec![0.0; count * count];
        for a in 0..count {
            for b in 0..count {
                let t = matrix[a][b];
                if t < 0.0 {
                    return Err(InstanceError::NegativeEntry(a, b));
                }
                if (t - matrix[b][a]).abs() > EPS_TRIANGLE {
                    return Err(InstanceError::AsymmetricMatrix(a.min(b), a.max(b)));
                }
                time[a * count + b] = t;
            }
        }
        for a in 0..count {
            if time[a * count + a] != 0.0 {
                return Err(InstanceError::NonzeroDiagonal(a));
            }
        }
        let inst = Self {
            n,
            time,
            coords: None,
            name: None,
        };
        inst.validate_triangle()?;
        Ok(inst)
    }

    /// Seeded random Euclidean instance: `n + 1` points drawn uniformly from
    /// `[0, box_size]^2` with a ChaCha12 stream, so results are identical for
    /// a fixed seed on every platform.
    pub fn random(seed: u64, n: usize, box_size: f64) -> Result<Self, InstanceError> {
        if n < 3 {
            return Err(InstanceError::TooFewNodes(n + 1));
        }
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut points: Vec<[f64; 2]> = Vec::with_capacity(n + 1);
        while points.len() < n + 1 {
            let p = [
                rng.random_range(0.0..box_size),
                rng.random_range(0.0..box_size),
            ];
            if !points.contains(&p) {
                points.push(p);
            }
        }
        let mut inst = Self::from_points(&points, 0)?;
        inst.name = Some(format!("uniform-{seed}-n{n}"));
        Ok(inst)
    }

    /// Checks `time[a][c] <= time[a][b] + time[b][c]` for every triple,
    /// within the metric tolerance.
    pub fn validate_triangle(&self) -> Result<(), InstanceError> {
        let count = self.node_count();
        for a in 0..count {
            for b in 0..count {
                for c in 0..count {
                    if self.time_idx(a, c) > self.time_idx(a, b) + self.time_idx(b, c) + EPS_TRIANGLE
                    {
                        return Err(InstanceError::TriangleViolation(a, b, c));
                    }
                }
            }
        }
        Ok(())
    }

    /// Number of targets.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of nodes including the depot.
    pub fn node_count(&self) -> usize {
        self.n + 1
    }

    /// Target ids `1..=n`.
    pub fn targets(&self) -> impl Iterator<Item = usize> {
        1..=self.n
    }

    /// Travel time between two matrix indices.
    #[inline]
    pub fn time_idx(&self, a: usize, b: usize) -> f64 {
        self.time[a * (self.n + 1) + b]
    }

    /// Travel time between two visits.
    #[inline]
    pub fn time_between(&self, a: Visit, b: Visit) -> f64 {
        self.time_idx(a.index(), b.index())
    }

    /// Planar coordinates when the instance was built from points.
    pub fn coords(&self) -> Option<&[[f64; 2]]> {
        self.coords.as_deref()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = Some(name.into());
    }

    /// Serializes to the instance JSON format: the points form when
    /// coordinates are known, the matrix form otherwise. Floats are emitted
    /// at full double precision.
    pub fn to_json(&self) -> String {
        let file = match &self.coords {
            Some(coords) => InstanceFile::Points {
                name: self.name.clone(),
                targets: coords[1..].to_vec(),
                depot: coords[0],
            },
            None => InstanceFile::Matrix {
                name: self.name.clone(),
                matrix: (0..self.node_count())
                    .map(|a| (0..self.node_count()).map(|b| self.time_idx(a, b)).collect())
                    .collect(),
                n: self.n,
            },
        };
        serde_json::to_string_pretty(&file).expect("instance serialization cannot fail")
    }

    /// Parses either JSON form and validates the result.
    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        let file: InstanceFile =
            serde_json::from_str(text).map_err(|e| InstanceError::Parse(e.to_string()))?;
        match file {
            InstanceFile::Points {
                name,
                targets,
                depot,
            } => {
                let mut points = vec![depot];
                points.extend(targets);
                let mut inst = Self::from_points(&points, 0)?;
                inst.name = name;
                Ok(inst)
            }
            InstanceFile::Matrix { name, matrix, n } => {
                let mut inst = Self::from_matrix(&matrix, n)?;
                inst.name = name;
                Ok(inst)
            }
        }
    }
}

/// On-disk instance schema. Node 0 of the matrix form is the depot.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum InstanceFile {
    Points {
        #[serde(skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        targets: Vec<[f64; 2]>,
        depot: [f64; 2],
    },
    Matrix {
        #[serde(skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        matrix: Vec<Vec<f64>>,
        n: usize,
    },
}

/// Uniform metric over `n` targets and a depot: every edge costs 1.
/// Test fixture; every tour of the same length has the same cost.
pub fn uniform_instance(n: usize) -> Instance {
    let count = n + 1;
    let matrix: Vec<Vec<f64>> = (0..count)
        .map(|a| (0..count).map(|b| if a == b { 0.0 } else { 1.0 }).collect())
        .collect();
    Instance::from_matrix(&matrix, n).expect("uniform metric is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collinear_points_distance() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]];
        let inst = Instance::from_points(&pts, 0).unwrap();
        assert_eq!(inst.n(), 3);
        assert_eq!(inst.time_idx(DEPOT_INDEX, 3), 3.0);
        inst.validate_triangle().unwrap();
    }

    #[test]
    fn duplicate_points_rejected() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [1.0, 0.0], [3.0, 0.0]];
        match Instance::from_points(&pts, 0) {
            Err(InstanceError::DuplicatePoint(1, 2)) => {}
            other => panic!("expected DuplicatePoint, got {other:?}"),
        }
    }

    #[test]
    fn too_few_points_rejected() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]];
        assert!(matches!(
            Instance::from_points(&pts, 0),
            Err(InstanceError::TooFewNodes(3))
        ));
    }

    #[test]
    fn uniform_matrix_is_valid() {
        let inst = uniform_instance(3);
        assert_eq!(inst.time_idx(1, 2), 1.0);
        inst.validate_triangle().unwrap();
    }

    #[test]
    fn triangle_violation_reports_triple() {
        // time[1][2] = 10 but time[1][3] + time[3][2] = 2.
        let m = vec![
            vec![0.0, 1.0, 1.0, 1.0],
            vec![1.0, 0.0, 10.0, 1.0],
            vec![1.0, 10.0, 0.0, 1.0],
            vec![1.0, 1.0, 1.0, 0.0],
        ];
        match Instance::from_matrix(&m, 3) {
            Err(InstanceError::TriangleViolation(a, b, c)) => {
                let inst_ok = a.min(c) != a.max(c);
                assert!(inst_ok);
                assert!((a == 1 && c == 2) || (a == 2 && c == 1), "triple ({a},{b},{c})");
            }
            other => panic!("expected TriangleViolation, got {other:?}"),
        }
    }

    #[test]
    fn asymmetric_matrix_rejected() {
        let m = vec![
            vec![0.0, 1.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0, 1.0],
            vec![1.0, 1.0, 0.0, 2.0],
            vec![1.0, 1.0, 1.0, 0.0],
        ];
        assert!(matches!(
            Instance::from_matrix(&m, 3),
            Err(InstanceError::AsymmetricMatrix(2, 3))
        ));
    }

    #[test]
    fn random_is_deterministic_per_seed() {
        let a = Instance::random(1, 5, 100.0).unwrap();
        let b = Instance::random(1, 5, 100.0).unwrap();
        let c = Instance::random(2, 5, 100.0).unwrap();
        assert_eq!(a.time, b.time);
        assert_ne!(a.time, c.time);
        a.validate_triangle().unwrap();
    }

    #[test]
    fn coords_round_trip_bit_exact() {
        let inst = Instance::random(7, 6, 100.0).unwrap();
        let rebuilt = Instance::from_points(inst.coords().unwrap(), 0).unwrap();
        assert_eq!(inst.time, rebuilt.time);
    }

    #[test]
    fn json_round_trip_both_forms() {
        let inst = Instance::random(3, 4, 100.0).unwrap();
        let back = Instance::from_json(&inst.to_json()).unwrap();
        assert_eq!(inst.time, back.time);

        let uniform = uniform_instance(3);
        let back = Instance::from_json(&uniform.to_json()).unwrap();
        assert_eq!(uniform.time, back.time);

        // Matrix form accepts instances produced from points.
        let as_matrix: Vec<Vec<f64>> = (0..inst.node_count())
            .map(|a| (0..inst.node_count()).map(|b| inst.time_idx(a, b)).collect())
            .collect();
        let from_matrix = Instance::from_matrix(&as_matrix, inst.n()).unwrap();
        assert_eq!(inst.time, from_matrix.time);
    }
}
