//! Spatial form of the difference operator: a signed sum of Dirac shifts.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::ratlinalg::{frac, RatMatrix, Rational};

/// One weighted Dirac shift `c·δ(· − p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShiftAtom {
    #[serde(rename = "c", with = "crate::io::rat")]
    pub coeff: Rational,
    #[serde(rename = "p", with = "crate::io::rat_vec")]
    pub shift: Vec<Rational>,
}

/// Half the column sum, `Ξ·1/2`; subtracting it centers the support at the origin.
pub fn half_column_sum(xi: &RatMatrix) -> Vec<Rational> {
    let half = frac(1, 2);
    (0..xi.rows()).map(|i| xi.row(i).iter().sum::<Rational>() * &half).collect()
}

/// All `2ⁿ` atoms before like terms are collected, built column by column:
/// each column `ζ` maps the current set `S` to `S ∪ {(−c, p + ζ)}`.
pub fn raw_support(xi: &RatMatrix) -> Vec<ShiftAtom> {
    let mut atoms = vec![ShiftAtom { coeff: Rational::one(), shift: vec![Rational::zero(); xi.rows()] }];
    for zeta in xi.columns() {
        let shifted: Vec<ShiftAtom> = atoms
            .iter()
            .map(|a| ShiftAtom {
                coeff: -a.coeff.clone(),
                shift: a.shift.iter().zip(&zeta).map(|(p, z)| p + z).collect(),
            })
            .collect();
        atoms.extend(shifted);
    }
    atoms
}

/// Collects like shifts, lexicographically ordered by shift.
pub fn collect_atoms(atoms: impl IntoIterator<Item = ShiftAtom>, keep_zero: bool) -> Vec<ShiftAtom> {
    let mut by_shift: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
    for a in atoms {
        *by_shift.entry(a.shift).or_insert_with(Rational::zero) += a.coeff;
    }
    by_shift
        .into_iter()
        .filter(|(_, c)| keep_zero || !c.is_zero())
        .map(|(shift, coeff)| ShiftAtom { coeff, shift })
        .collect()
}

/// The collected multiset of shifts of the difference operator. With
/// `centered`, every shift is translated by `−Ξ·1/2`.
pub fn difference_support(xi: &RatMatrix, centered: bool) -> Vec<ShiftAtom> {
    difference_support_with(xi, centered, false)
}

pub fn difference_support_with(xi: &RatMatrix, centered: bool, keep_zero: bool) -> Vec<ShiftAtom> {
    let mut raw = raw_support(xi);
    if centered {
        let c = half_column_sum(xi);
        for a in &mut raw {
            for (p, ci) in a.shift.iter_mut().zip(&c) {
                *p -= ci;
            }
        }
    }
    collect_atoms(raw, keep_zero)
}

/// `Σ c·f(x − p)` over the atoms.
pub fn apply_difference<F>(atoms: &[ShiftAtom], f: F, x: &[Rational]) -> Rational
where
    F: Fn(&[Rational]) -> Rational,
{
    atoms
        .iter()
        .map(|a| {
            let arg: Vec<Rational> = x.iter().zip(&a.shift).map(|(xi, p)| xi - p).collect();
            &a.coeff * f(&arg)
        })
        .sum()
}
