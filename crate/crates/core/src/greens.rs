//! Separable decomposition of the Green's function `Π (ξⱼ·ω)⁻¹`.
//!
//! Starting from the single term `w^(−1)`, each level trades one power of a
//! trailing `w(j)` for an extra power of the leading one using a kernel vector
//! `ν_α` of `Ξ` that vanishes wherever `α` vanishes. After `n − s` levels every
//! term involves exactly `s` linearly independent directions, so each has a
//! closed-form spatial inverse: a scaled, sheared truncated power.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{BoxError, Result};
use crate::ratlinalg::{RatMatrix, Rational};

/// A kernel vector of `Ξ` that is zero wherever `α` is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NuVector {
    pub nu: Vec<Rational>,
    /// Zero-based index of the first nonzero entry.
    pub lead: usize,
}

/// A term `c·w^(−α)` of the Fourier-side expansion.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GreensAtom {
    #[serde(rename = "c", with = "crate::io::rat")]
    pub coeff: Rational,
    pub alpha: Vec<u32>,
}

impl GreensAtom {
    pub fn support_size(&self) -> usize {
        self.alpha.iter().filter(|&&a| a != 0).count()
    }
}

/// Spatial form of one separable term:
/// `coeff · Π_j (A x)_j^(e_j) / e_j!` on the cone where `A x > 0`,
/// with `A = Ξ_α⁻¹` and `e = μ_α − 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpatialGreensTerm {
    /// `c / |det Ξ_α|`.
    #[serde(with = "crate::io::rat")]
    pub coeff: Rational,
    #[serde(with = "crate::io::rat_matrix")]
    pub xi_alpha_inv: RatMatrix,
    pub mu_minus_one: Vec<u32>,
    /// Zero-based column indices of the nonzero entries of `α`.
    pub sigma: Vec<usize>,
}

/// Caches `ker Ξ` so the per-atom kernel vectors are cheap to form.
#[derive(Debug, Clone)]
pub struct GreensBuilder {
    xi: RatMatrix,
    kernel: RatMatrix,
}

impl GreensBuilder {
    pub fn new(xi: &RatMatrix) -> Result<Self> {
        let kernel = xi.kernel_column_echelon()?;
        Ok(Self { xi: xi.clone(), kernel })
    }

    pub fn kernel(&self) -> &RatMatrix {
        &self.kernel
    }

    pub fn nu_vector(&self, alpha: &[u32]) -> Result<NuVector> {
        let n = self.xi.cols();
        let s = self.xi.rows();
        assert_eq!(alpha.len(), n, "alpha must have one entry per direction");
        let support = alpha.iter().filter(|&&a| a != 0).count();
        if support <= s || self.kernel.cols() == 0 {
            return Err(BoxError::NoSuchVector(alpha.to_vec()));
        }
        let nu = if support == n {
            self.kernel.column(0)
        } else {
            let zero_rows: Vec<usize> = (0..n).filter(|&j| alpha[j] == 0).collect();
            let c_alpha = self.kernel.select_rows(&zero_rows);
            let t_kernel = c_alpha.kernel_basis();
            if t_kernel.cols() == 0 {
                return Err(BoxError::NoSuchVector(alpha.to_vec()));
            }
            self.kernel.mul_vec(&t_kernel.column(0))
        };
        let lead = nu
            .iter()
            .position(|x| !x.is_zero())
            .ok_or_else(|| BoxError::NoSuchVector(alpha.to_vec()))?;
        assert!(
            alpha.iter().zip(&nu).all(|(a, v)| *a != 0 || v.is_zero()),
            "kernel vector must vanish where alpha does"
        );
        Ok(NuVector { nu, lead })
    }

    /// `P_0 … P_{n−s}`, like terms collected at every level.
    pub fn p_sets(&self) -> Result<Vec<Vec<GreensAtom>>> {
        let n = self.xi.cols();
        let s = self.xi.rows();
        let mut levels = vec![vec![GreensAtom { coeff: Rational::one(), alpha: vec![1; n] }]];
        for _ in 0..n - s {
            let prev = levels.last().expect("P_0 present");
            let mut next: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
            for atom in prev {
                let NuVector { nu, lead } = self.nu_vector(&atom.alpha)?;
                for j in lead + 1..n {
                    if nu[j].is_zero() {
                        continue;
                    }
                    let coeff = -&atom.coeff * &nu[j] / &nu[lead];
                    *next.entry(r_step(&atom.alpha, lead, j)).or_insert_with(Rational::zero) += coeff;
                }
            }
            levels.push(
                next.into_iter()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(alpha, coeff)| GreensAtom { coeff, alpha })
                    .collect(),
            );
        }
        Ok(levels)
    }

    pub fn spatial_terms(&self, atoms: &[GreensAtom]) -> Result<Vec<SpatialGreensTerm>> {
        spatial_terms(&self.xi, atoms)
    }
}

pub fn nu_vector(xi: &RatMatrix, alpha: &[u32]) -> Result<NuVector> {
    GreensBuilder::new(xi)?.nu_vector(alpha)
}

/// `α` with one unit moved from position `j` to position `m`.
pub fn r_step(alpha: &[u32], m: usize, j: usize) -> Vec<u32> {
    assert!(m < j && j < alpha.len(), "r_step needs m < j < n");
    assert!(alpha[j] > 0, "cannot decrement a zero entry");
    let mut out = alpha.to_vec();
    out[m] += 1;
    out[j] -= 1;
    out
}

pub fn build_p_sets(xi: &RatMatrix) -> Result<Vec<Vec<GreensAtom>>> {
    GreensBuilder::new(xi)?.p_sets()
}

/// Checks `Σ c·w^(−α) = Π w(j)⁻¹` exactly with `w(j) = ξⱼ·ω`.
///
/// The factor `i` in `w(j) = i ξⱼ·ω` appears as `i⁻ⁿ` on both sides and is dropped.
pub fn greens_fourier_check(xi: &RatMatrix, atoms: &[GreensAtom], omega: &[Rational]) -> Result<bool> {
    let w = xi.transpose().mul_vec(omega);
    if let Some(j) = w.iter().position(Zero::is_zero) {
        return Err(BoxError::PoleAtOmega(j));
    }
    let lhs = w.iter().fold(Rational::one(), |acc, x| acc / x);
    let rhs: Rational = atoms
        .iter()
        .map(|a| {
            let denom = a
                .alpha
                .iter()
                .zip(&w)
                .fold(Rational::one(), |acc, (&e, x)| acc * num_traits::pow(x.clone(), e as usize));
            &a.coeff / denom
        })
        .sum();
    Ok(lhs == rhs)
}

/// Spatial terms for a final level whose atoms each select exactly `s` columns.
pub fn spatial_terms(xi: &RatMatrix, atoms: &[GreensAtom]) -> Result<Vec<SpatialGreensTerm>> {
    atoms
        .iter()
        .map(|atom| {
            let sigma: Vec<usize> = (0..atom.alpha.len()).filter(|&j| atom.alpha[j] != 0).collect();
            if sigma.len() != xi.rows() {
                return Err(BoxError::SingularSelection(sigma));
            }
            let sub = xi.select_columns(&sigma);
            let det = sub.det()?;
            if det.is_zero() {
                return Err(BoxError::SingularSelection(sigma));
            }
            Ok(SpatialGreensTerm {
                coeff: &atom.coeff / det.abs(),
                xi_alpha_inv: sub.inverse()?,
                mu_minus_one: sigma.iter().map(|&j| atom.alpha[j] - 1).collect(),
                sigma,
            })
        })
        .collect()
}
