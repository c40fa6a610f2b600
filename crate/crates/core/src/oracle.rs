//! Independent float evaluator from the convolution definition
//! `M_Ξ(x) = ∫₀¹ M_{Ξ∖ζ}(x − tζ) dt`, bottoming out at `M_B = 1/|det B|` on
//! `B·[0,1)^s`.
//!
//! The inner spline is piecewise polynomial along the integration segment, so
//! with breakpoint splitting a low Gauss–Legendre order per piece is already
//! exact. Without splitting the integrand's kinks limit the accuracy to the
//! order's resolution of them.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::diffop::half_column_sum;
use crate::error::{BoxError, Result};
use crate::geometry::mesh_normals;
use crate::ratlinalg::{dot, to_f64, RatMatrix, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    /// Gauss–Legendre order per level (and the cap per piece when splitting).
    pub nodes_per_level: usize,
    /// Split each 1-D integral where the segment crosses the inner mesh.
    pub split_at_breakpoints: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { nodes_per_level: 32, split_at_breakpoints: true }
    }
}

impl QuadratureSpec {
    pub fn plain(nodes_per_level: usize) -> Self {
        Self { nodes_per_level, split_at_breakpoints: false }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(z) and its derivative.
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let step = p1 / dp;
            z -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

#[derive(Debug, Clone)]
struct Level {
    zeta: Vec<f64>,
    /// Canonical mesh normals of the inner matrix with the distinct plane
    /// offsets through its subset sums.
    planes: Vec<(Vec<f64>, Vec<f64>)>,
    /// Degree of the inner spline.
    inner_degree: usize,
}

/// Precomputed recursion for one direction matrix.
#[derive(Debug, Clone)]
pub struct ConvolutionOracle {
    levels: Vec<Level>,
    base_inv: Vec<Vec<f64>>,
    base_weight: f64,
    shift: Vec<f64>,
    spec: QuadratureSpec,
    rules: Vec<(Vec<f64>, Vec<f64>)>,
}

fn subset_sums(xi: &RatMatrix) -> Vec<Vec<Rational>> {
    let cols = xi.columns();
    let mut sums = BTreeSet::new();
    for mask in 0u64..(1u64 << cols.len()) {
        let mut p = vec![Rational::zero(); xi.rows()];
        for (j, c) in cols.iter().enumerate() {
            if mask >> j & 1 == 1 {
                p.iter_mut().zip(c).for_each(|(a, b)| *a += b);
            }
        }
        sums.insert(p);
    }
    sums.into_iter().collect()
}

impl ConvolutionOracle {
    pub fn new(xi: &RatMatrix, centered: bool, spec: QuadratureSpec) -> Result<Self> {
        assert!(spec.nodes_per_level >= 2, "nodes_per_level must be at least 2");
        let s = xi.rows();
        let rank = xi.rank();
        if rank < s {
            return Err(BoxError::DegenerateMatrix { rank, expected: s });
        }
        let mut remaining: Vec<usize> = (0..xi.cols()).collect();
        let mut levels = Vec::new();
        while remaining.len() > s {
            // Peel the last column whose removal keeps full rank.
            let pos = (0..remaining.len())
                .rev()
                .find(|&p| {
                    let mut rest = remaining.clone();
                    rest.remove(p);
                    xi.select_columns(&rest).rank() == s
                })
                .expect("a full-rank matrix with n > s has a removable column");
            let zeta = xi.column(remaining.remove(pos));
            let inner = xi.select_columns(&remaining);
            let sums = subset_sums(&inner);
            let planes = mesh_normals(&inner)
                .into_iter()
                .map(|nu| {
                    let offsets: BTreeSet<Rational> = sums.iter().map(|p| dot(&nu, p)).collect();
                    (nu.iter().map(to_f64).collect(), offsets.iter().map(to_f64).collect())
                })
                .collect();
            levels.push(Level { zeta: zeta.iter().map(to_f64).collect(), planes, inner_degree: remaining.len() - s });
        }
        let base = xi.select_columns(&remaining);
        let base_weight = 1.0 / to_f64(&base.det()?.abs());
        let base_inv = base.inverse()?.to_f64_rows();
        let shift = if centered { half_column_sum(xi).iter().map(to_f64).collect() } else { vec![0.0; s] };
        let rules = (0..=spec.nodes_per_level).map(|n| if n == 0 { (vec![], vec![]) } else { gauss_legendre(n) }).collect();
        Ok(Self { levels, base_inv, base_weight, shift, spec, rules })
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let y: Vec<f64> = x.iter().zip(&self.shift).map(|(a, b)| a + b).collect();
        self.eval_level(0, &y)
    }

    pub fn eval_many(&self, points: &[Vec<f64>]) -> Vec<f64> {
        points.par_iter().map(|p| self.eval(p)).collect()
    }

    fn eval_base(&self, x: &[f64]) -> f64 {
        let inside = self.base_inv.iter().all(|row| {
            let u: f64 = row.iter().zip(x).map(|(a, b)| a * b).sum();
            (0.0..1.0).contains(&u)
        });
        if inside {
            self.base_weight
        } else {
            0.0
        }
    }

    fn eval_level(&self, k: usize, x: &[f64]) -> f64 {
        let Some(level) = self.levels.get(k) else {
            return self.eval_base(x);
        };
        let mut cuts = vec![0.0, 1.0];
        let order = if self.spec.split_at_breakpoints {
            for (normal, offsets) in &level.planes {
                let nx: f64 = normal.iter().zip(x).map(|(a, b)| a * b).sum();
                let nz: f64 = normal.iter().zip(&level.zeta).map(|(a, b)| a * b).sum();
                if nz == 0.0 {
                    continue;
                }
                for off in offsets {
                    let t = (nx - off) / nz;
                    if t > 0.0 && t < 1.0 {
                        cuts.push(t);
                    }
                }
            }
            cuts.sort_by(f64::total_cmp);
            cuts.dedup();
            self.spec.nodes_per_level.min(level.inner_degree / 2 + 2)
        } else {
            self.spec.nodes_per_level
        };
        let (nodes, weights) = &self.rules[order];
        let mut total = 0.0;
        let mut y = vec![0.0; x.len()];
        for piece in cuts.windows(2) {
            let (a, b) = (piece[0], piece[1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (z, w) in nodes.iter().zip(weights) {
                let t = mid + half * z;
                for ((yi, xi), zi) in y.iter_mut().zip(x).zip(&level.zeta) {
                    *yi = xi - t * zi;
                }
                total += half * w * self.eval_level(k + 1, &y);
            }
        }
        total
    }
}

/// One-shot convenience wrapper around [`ConvolutionOracle`].
pub fn eval_convolution(xi: &RatMatrix, x: &[f64], spec: QuadratureSpec) -> Result<f64> {
    Ok(ConvolutionOracle::new(xi, false, spec)?.eval(x))
}

pub fn eval_convolution_centered(xi: &RatMatrix, x: &[f64], spec: QuadratureSpec) -> Result<f64> {
    Ok(ConvolutionOracle::new(xi, true, spec)?.eval(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn courant() -> RatMatrix {
        RatMatrix::from_i64(&[&[1, 0, 1], &[0, 1, 1]])
    }

    #[test]
    fn legendre_rules_integrate_polynomials() {
        for n in 1..=40 {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13, "n = {n}");
            let top = 2 * n as i32 - 2;
            let even: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(top)).sum();
            assert!((even - 2.0 / (top + 1) as f64).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn identity_and_outside() {
        let spec = QuadratureSpec::default();
        assert_eq!(eval_convolution(&RatMatrix::identity(2), &[0.5, 0.5], spec).unwrap(), 1.0);
        assert_eq!(eval_convolution(&courant(), &[3.0, 3.0], spec).unwrap(), 0.0);
    }

    #[test]
    fn courant_values() {
        let v = eval_convolution(&courant(), &[0.5, 0.25], QuadratureSpec::default()).unwrap();
        assert!((v - 0.25).abs() < 1e-12, "{v}");
        let v = eval_convolution(&courant(), &[0.25, 0.5], QuadratureSpec::plain(32)).unwrap();
        assert!((v - 0.25).abs() < 5e-2, "{v}");
    }

    #[test]
    fn degenerate_rejected() {
        let xi = RatMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert!(matches!(eval_convolution(&xi, &[0.0, 0.0], QuadratureSpec::default()), Err(BoxError::DegenerateMatrix { .. })));
    }

    #[test]
    fn plain_quadrature_converges() {
        let x = [0.7, 0.35];
        let exact = eval_convolution(&courant(), &x, QuadratureSpec::default()).unwrap();
        let err = |n| (eval_convolution(&courant(), &x, QuadratureSpec::plain(n)).unwrap() - exact).abs();
        let coarse = err(4).max(err(5)).max(err(6));
        let fine = err(64).max(err(65)).max(err(66));
        assert!(fine < coarse / 4.0, "coarse {coarse} fine {fine}");
    }

    proptest! {
        #[test]
        fn centered_is_translate(x in -1.5f64..1.5, y in -1.5f64..1.5) {
            let xi = RatMatrix::from_i64(&[&[1, 0, 1, -1], &[0, 1, 1, 1]]);
            let spec = QuadratureSpec::default();
            let a = eval_convolution_centered(&xi, &[x, y], spec).unwrap();
            let b = eval_convolution(&xi, &[x + 0.5, y + 1.5], spec).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}
