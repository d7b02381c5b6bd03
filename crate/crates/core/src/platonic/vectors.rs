use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type Q = Ratio<i64>;

/// `m` unit vectors given by exact rational coordinates over a common squared length.
///
/// Vector `i` is `coords[i] / √norm_sq`, so every inner product is an exact rational.
/// Coordinates live in an ambient space whose dimension may exceed the span's.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorConfiguration {
    ambient: usize,
    coords: Vec<Vec<Q>>,
    norm_sq: Q,
    rank: usize,
}

impl VectorConfiguration {
    /// Every row must have squared length `norm_sq`.
    pub fn new(coords: Vec<Vec<Q>>, norm_sq: Q) -> Result<Self> {
        let ambient = coords.first().map_or(0, Vec::len);
        if coords.is_empty() || ambient == 0 {
            return Err(Error::InvalidArgument("a configuration needs at least one nonempty vector".into()));
        }
        if !norm_sq.is_positive() {
            return Err(Error::InvalidArgument("squared length must be positive".into()));
        }
        for (i, v) in coords.iter().enumerate() {
            if v.len() != ambient {
                return Err(Error::InvalidArgument(format!(
                    "vector {i} has {} coordinates, expected {ambient}",
                    v.len()
                )));
            }
            let n: Q = v.iter().map(|c| c * c).sum();
            if n != norm_sq {
                return Err(Error::Validation(format!("vector {i} has squared length {n}, expected {norm_sq}")));
            }
        }
        let rank = rational_rank(&coords);
        Ok(Self { ambient, coords, norm_sq, rank })
    }

    /// Integer coordinate rows sharing one squared length.
    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        let norm = rows.first().map_or(0, |r| r.iter().map(|c| c * c).sum());
        Self::new(rows.iter().map(|r| r.iter().map(|&c| Q::from_integer(c)).collect()).collect(), Q::from_integer(norm))
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Dimension of the span (exact rank).
    pub fn dim(&self) -> usize {
        self.rank
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn coords(&self) -> &[Vec<Q>] {
        &self.coords
    }

    pub fn norm_sq(&self) -> Q {
        self.norm_sq
    }

    /// Exact inner product of unit vectors `i` and `j`.
    pub fn dot(&self, i: usize, j: usize) -> Q {
        let raw: Q = self.coords[i].iter().zip(&self.coords[j]).map(|(a, b)| a * b).sum();
        raw / self.norm_sq
    }

    /// Frame operator `Σ_i V_i V_iᵀ` in ambient coordinates, row-major.
    pub fn frame_operator(&self) -> Vec<Q> {
        let n = self.ambient;
        let mut out = vec![Q::zero(); n * n];
        for v in &self.coords {
            for r in 0..n {
                for c in 0..n {
                    out[r * n + c] += v[r] * v[c];
                }
            }
        }
        out.iter_mut().for_each(|e| *e /= self.norm_sq);
        out
    }

    /// `VᵀV = (m/n)·Identity` on the span, checked exactly as `F² = (m/n)·F` for the
    /// frame operator `F` (its trace is `m`, so the nonzero eigenvalues are all `m/n`).
    pub fn is_semi_orthogonal(&self) -> bool {
        let n = self.ambient;
        let f = self.frame_operator();
        let factor = Q::new(self.len() as i64, self.rank as i64);
        (0..n).all(|r| {
            (0..n).all(|c| {
                let sq: Q = (0..n).map(|k| f[r * n + k] * f[k * n + c]).sum();
                sq == factor * f[r * n + c]
            })
        })
    }

    /// Frame operator expressed in an orthonormal basis of the span; equals
    /// `(m/n)·Identity` for semi-orthogonal configurations. Floating point.
    pub fn gram_in_span(&self) -> Vec<f64> {
        let coords = self.orthonormal_coordinates();
        let n = self.rank;
        let mut out = vec![0.0; n * n];
        for v in &coords {
            for r in 0..n {
                for c in 0..n {
                    out[r * n + c] += v[r] * v[c];
                }
            }
        }
        out
    }

    /// Unit vectors in coordinates of an orthonormal basis of their span (`m × n`).
    pub fn orthonormal_coordinates(&self) -> Vec<Vec<f64>> {
        let scale = 1.0 / (*self.norm_sq.numer() as f64 / *self.norm_sq.denom() as f64).sqrt();
        let rows: Vec<Vec<f64>> = self
            .coords
            .iter()
            .map(|v| v.iter().map(|c| *c.numer() as f64 / *c.denom() as f64 * scale).collect())
            .collect();
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for v in &rows {
            let mut u = v.clone();
            for _ in 0..2 {
                for b in &basis {
                    let d: f64 = u.iter().zip(b).map(|(x, y)| x * y).sum();
                    u.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
                }
            }
            let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-8 {
                basis.push(u.into_iter().map(|x| x / norm).collect());
            }
            if basis.len() == self.rank {
                break;
            }
        }
        rows.iter().map(|v| basis.iter().map(|b| v.iter().zip(b).map(|(x, y)| x * y).sum()).collect()).collect()
    }

    /// Integer rows `z_i = k·coords_i` with the common multiplier `k`, and the factor
    /// turning `‖Σ s_i z_i‖²` into the unit-vector value `‖Σ s_i V_i‖²`.
    pub fn integer_form(&self) -> (Vec<Vec<i64>>, Q) {
        let k = self.coords.iter().flatten().fold(1i64, |acc, c| crate::model::lcm(acc, *c.denom()));
        let rows = self.coords.iter().map(|v| v.iter().map(|c| (c * k).to_integer()).collect()).collect();
        (rows, Q::one() / (self.norm_sq * k * k))
    }
}

/// Exact rank by Gaussian elimination over the rationals.
fn rational_rank(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, pivot);
        let head = m[rank].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c] / head[c];
                for (x, h) in m[r].iter_mut().zip(&head) {
                    *x -= f * h;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// The 240 E8 roots in doubled coordinates: `(±2, ±2, 0⁶)` permutations and
/// `(±1)⁸` with an even number of minus signs.
pub fn e8_roots_doubled() -> Vec<[i64; 8]> {
    let mut roots = Vec::with_capacity(240);
    for i in 0..8 {
        for j in i + 1..8 {
            for si in [2, -2] {
                for sj in [2, -2] {
                    let mut r = [0; 8];
                    r[i] = si;
                    r[j] = sj;
                    roots.push(r);
                }
            }
        }
    }
    for mask in 0u32..256 {
        if mask.count_ones() % 2 == 0 {
            let mut r = [1; 8];
            for (k, c) in r.iter_mut().enumerate() {
                if mask >> k & 1 == 1 {
                    *c = -1;
                }
            }
            roots.push(r);
        }
    }
    roots
}

/// Fixed E8 root whose orthogonal complement carries E7.
pub const E7_AXIS_DOUBLED: [i64; 8] = [1; 8];

/// 63 unit vectors in dimension 7: one representative (first nonzero coordinate
/// positive) of each ± pair of the 126 E7 roots, in descending lexicographic order.
pub fn e7_vectors() -> VectorConfiguration {
    let dot = |a: &[i64; 8], b: &[i64; 8]| a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>();
    let roots: Vec<[i64; 8]> = e8_roots_doubled().into_iter().filter(|r| dot(r, &E7_AXIS_DOUBLED) == 0).collect();
    debug_assert_eq!(roots.len(), 126);
    let mut half: Vec<[i64; 8]> =
        roots.into_iter().filter(|r| r.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)).collect();
    half.sort_by(|a, b| b.cmp(a));
    let coords = half.iter().map(|r| r.iter().map(|&c| Q::new(c, 2)).collect()).collect();
    VectorConfiguration::new(coords, Q::from_integer(2)).expect("E7 roots share squared length 2")
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Serialize, Deserialize)]
struct ConfigurationDoc {
    version: u32,
    ambient: usize,
    /// Common squared length of the coordinate rows, as "p/q".
    norm_sq: String,
    /// Rational coordinates as "p/q" strings.
    vectors: Vec<Vec<String>>,
}

fn ratio_to_string(q: &Q) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn ratio_from_str(s: &str) -> Result<Q> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: i64 = n.trim().parse().map_err(|_| Error::Malformed(format!("bad rational {s:?}")))?;
    let d: i64 = d.trim().parse().map_err(|_| Error::Malformed(format!("bad rational {s:?}")))?;
    if d == 0 {
        return Err(Error::Malformed(format!("zero denominator in {s:?}")));
    }
    Ok(Q::new(n, d))
}

impl VectorConfiguration {
    pub fn to_json(&self) -> Result<String> {
        let doc = ConfigurationDoc {
            version: 1,
            ambient: self.ambient,
            norm_sq: ratio_to_string(&self.norm_sq),
            vectors: self.coords.iter().map(|v| v.iter().map(ratio_to_string).collect()).collect(),
        };
        Ok(serde_json::to_string(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ConfigurationDoc = serde_json::from_str(text)?;
        if doc.version != 1 {
            return Err(Error::Version { found: doc.version, expected: 1 });
        }
        let coords = doc
            .vectors
            .iter()
            .map(|v| v.iter().map(|s| ratio_from_str(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if coords.iter().any(|v| v.len() != doc.ambient) {
            return Err(Error::Malformed("coordinate count differs from the declared ambient dimension".into()));
        }
        Self::new(coords, ratio_from_str(&doc.norm_sq)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e8_has_240_roots_of_length_two() {
        let roots = e8_roots_doubled();
        assert_eq!(roots.len(), 240);
        assert!(roots.iter().all(|r| r.iter().map(|c| c * c).sum::<i64>() == 8));
    }

    #[test]
    fn e7_count_dimension_and_frame() {
        let v = e7_vectors();
        assert_eq!(v.len(), 63);
        assert_eq!(v.dim(), 7);
        assert_eq!(v.ambient_dim(), 8);
        assert!(v.is_semi_orthogonal());
        let g = v.gram_in_span();
        for r in 0..7 {
            for c in 0..7 {
                let want = if r == c { 9.0 } else { 0.0 };
                assert!((g[r * 7 + c] - want).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn e7_inner_products_are_half_integers() {
        let v = e7_vectors();
        let allowed = [Q::new(-1, 2), Q::zero(), Q::new(1, 2)];
        for i in 0..63 {
            assert_eq!(v.dot(i, i), Q::one());
            for j in i + 1..63 {
                assert!(allowed.contains(&v.dot(i, j)), "V{i}·V{j} = {}", v.dot(i, j));
            }
        }
    }

    #[test]
    fn e7_is_deterministic() {
        assert_eq!(e7_vectors().to_json().unwrap(), e7_vectors().to_json().unwrap());
    }

    #[test]
    fn json_round_trip() {
        let v = e7_vectors();
        let back = VectorConfiguration::from_json(&v.to_json().unwrap()).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn rejects_unequal_lengths() {
        assert!(VectorConfiguration::from_integers(&[vec![1, 0], vec![1, 1]]).is_err());
    }

    #[test]
    fn non_semi_orthogonal_detected() {
        let v = VectorConfiguration::from_integers(&[vec![1, 0], vec![0, 1], vec![1, 0]]).unwrap();
        assert!(!v.is_semi_orthogonal());
        let basis = VectorConfiguration::from_integers(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert!(basis.is_semi_orthogonal());
    }

    #[test]
    fn integer_form_scales_back() {
        let v = e7_vectors();
        let (rows, factor) = v.integer_form();
        let n: i64 = rows[0].iter().map(|c| c * c).sum();
        assert_eq!(factor * n, Q::one());
    }
}
