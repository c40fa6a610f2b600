//! Explicit piecewise-polynomial form.
//!
//! The spline is the difference operator applied to the Green's function:
//!
//! ```text
//! M(x) = Σ_{(b,p)∈S} Σ_{terms} b·c/|det Ξ_α| · ⟦Ξ_α⁻¹(x − p)⟧₊^(μ_α − 1)
//! ```
//!
//! Inside one mesh cell every one-sided power is either identically zero or a
//! plain polynomial, and which one is decided by the sign pattern of
//! `Ξ_α⁻¹(c − p)` at any interior point `c`. So a cell's polynomial is the sum
//! of the "open" terms, with their factorial normalization kept.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diffop::{difference_support, ShiftAtom};
use crate::error::{BoxError, Result};
use crate::geometry::{enumerate_regions, knot_planes, support_origin, support_zonotope, Hyperplane, Polyhedron, Region};
use crate::greens::{GreensAtom, GreensBuilder, SpatialGreensTerm};
use crate::poly::{factorial, MultiPoly};
use crate::ratlinalg::{to_f64, RatMatrix, Rational};

/// One `(shift, Green's term)` pair, pre-expanded.
#[derive(Debug, Clone)]
pub struct GreenPiece {
    /// `Ξ_α⁻¹`
    pub gate: RatMatrix,
    /// `Ξ_α⁻¹ p`
    pub gate_offset: Vec<Rational>,
    /// `b·c/|det Ξ_α| · ⟨Ξ_α⁻¹(x − p)⟩^(μ − 1)`
    pub poly: MultiPoly,
}

impl GreenPiece {
    fn gate_args(&self, x: &[Rational]) -> Vec<Rational> {
        self.gate.mul_vec(x).into_iter().zip(&self.gate_offset).map(|(a, b)| a - b).collect()
    }

    /// `Some(open)` off the cone boundary, `None` when an argument is exactly zero.
    pub fn is_open(&self, x: &[Rational]) -> Option<bool> {
        let args = self.gate_args(x);
        if args.iter().any(Zero::is_zero) {
            None
        } else {
            Some(args.iter().all(Signed::is_positive))
        }
    }

    pub fn is_open_f64(&self, x: &[f64]) -> Option<bool> {
        let mut open = true;
        for (i, off) in self.gate_offset.iter().enumerate() {
            let v: f64 = self.gate.row(i).iter().zip(x).map(|(a, b)| to_f64(a) * b).sum::<f64>() - to_f64(off);
            if v == 0.0 {
                return None;
            }
            open &= v > 0.0;
        }
        Some(open)
    }
}

/// Expands every `(b, p) × term` pair into a polynomial in `x`.
pub fn green_pieces(terms: &[SpatialGreensTerm], shifts: &[ShiftAtom]) -> Vec<GreenPiece> {
    let mut pieces = Vec::with_capacity(terms.len() * shifts.len());
    for atom in shifts {
        for term in terms {
            let a = &term.xi_alpha_inv;
            let s = a.rows();
            let offset = a.mul_vec(&atom.shift);
            let mut poly = MultiPoly::constant(s, &atom.coeff * &term.coeff);
            for (j, &e) in term.mu_minus_one.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let neg_off = -offset[j].clone();
                let linear = MultiPoly::linear(a.row(j), &neg_off);
                poly = (&poly * &linear.pow(e)).scale(&Rational::new(1.into(), factorial(e)));
            }
            pieces.push(GreenPiece { gate: a.clone(), gate_offset: offset, poly });
        }
    }
    pieces
}

/// Polynomial of the mesh cell containing `center`.
pub fn region_polynomial(terms: &[SpatialGreensTerm], shifts: &[ShiftAtom], center: &[Rational]) -> Result<MultiPoly> {
    polynomial_at(&green_pieces(terms, shifts), center)
}

pub fn polynomial_at(pieces: &[GreenPiece], center: &[Rational]) -> Result<MultiPoly> {
    let s = center.len();
    let mut out = MultiPoly::zero(s);
    for piece in pieces {
        match piece.is_open(center) {
            None => return Err(BoxError::CenterOnKnotPlane),
            Some(true) => out = out + piece.poly.clone(),
            Some(false) => {}
        }
    }
    Ok(out)
}

/// Exact integral of `poly` over a polytope via its triangulation.
pub fn integrate_over(poly: &MultiPoly, q: &Polyhedron) -> Rational {
    let s = q.dim();
    q.simplices()
        .iter()
        .map(|simplex| {
            let pts = q.simplex_points(simplex);
            let cols: Vec<Vec<Rational>> =
                pts[1..].iter().map(|p| p.iter().zip(&pts[0]).map(|(a, b)| a - b).collect()).collect();
            let a = RatMatrix::from_columns(&cols).expect("s columns of length s");
            debug_assert_eq!(a.rows(), s);
            let jac = a.det().expect("square").abs();
            poly.compose_affine(&a, &pts[0]).integrate_standard_simplex() * jac
        })
        .sum()
}

/// A cell together with its polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyRegion {
    #[serde(flatten)]
    pub region: Region,
    pub poly: MultiPoly,
}

/// The complete derived form of one box spline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PPForm {
    #[serde(with = "crate::io::rat_matrix")]
    pub xi: RatMatrix,
    pub centered: bool,
    #[serde(with = "crate::io::rat_matrix")]
    pub kernel: RatMatrix,
    #[serde(rename = "S")]
    pub shifts: Vec<ShiftAtom>,
    #[serde(rename = "P")]
    pub p_sets: Vec<Vec<GreensAtom>>,
    pub greens: Vec<SpatialGreensTerm>,
    pub support: Polyhedron,
    pub knot_planes: Vec<Hyperplane>,
    pub regions: Vec<PolyRegion>,
}

pub fn build_ppform(xi: &RatMatrix, centered: bool) -> Result<PPForm> {
    let builder = GreensBuilder::new(xi)?;
    let p_sets = builder.p_sets()?;
    let greens = builder.spatial_terms(p_sets.last().expect("P_0 present"))?;
    let shifts = difference_support(xi, centered);
    let origin = support_origin(xi, centered);
    let support = support_zonotope(xi)?.translate(&origin);
    let planes: Vec<Hyperplane> = knot_planes(xi).iter().map(|h| h.translate(&origin)).collect();
    let pieces = green_pieces(&greens, &shifts);
    let regions = enumerate_regions(xi, centered)?
        .into_par_iter()
        .map(|region| Ok(PolyRegion { poly: polynomial_at(&pieces, &region.center)?, region }))
        .collect::<Result<Vec<_>>>()?;
    Ok(PPForm {
        xi: xi.clone(),
        centered,
        kernel: builder.kernel().clone(),
        shifts,
        p_sets,
        greens,
        support,
        knot_planes: planes,
        regions,
    })
}

impl PPForm {
    pub fn dim(&self) -> usize {
        self.xi.rows()
    }

    pub fn pieces(&self) -> Vec<GreenPiece> {
        green_pieces(&self.greens, &self.shifts)
    }

    /// Index of the cell whose interior contains `x`.
    pub fn locate(&self, x: &[Rational]) -> Option<usize> {
        self.regions.iter().position(|r| r.region.polyhedron.strictly_contains(x))
    }

    pub fn on_knot_plane(&self, x: &[Rational]) -> bool {
        self.knot_planes.iter().any(|h| h.eval(x).is_zero())
    }

    /// Evaluates the double sum directly, exactly; undefined on knot planes.
    pub fn eval_distributional(&self, x: &[Rational]) -> Result<Rational> {
        if !self.support.contains(x) {
            return Ok(Rational::zero());
        }
        if self.on_knot_plane(x) {
            return Err(BoxError::OnKnotPlane);
        }
        let mut total = Rational::zero();
        for piece in self.pieces() {
            match piece.is_open(x) {
                None => return Err(BoxError::OnKnotPlane),
                Some(true) => total += piece.poly.eval(x),
                Some(false) => {}
            }
        }
        Ok(total)
    }

    pub fn eval_distributional_f64(&self, x: &[f64]) -> Result<f64> {
        if !self.support.contains_f64(x, 0.0) {
            return Ok(0.0);
        }
        let mut total = 0.0;
        for piece in self.pieces() {
            match piece.is_open_f64(x) {
                None => return Err(BoxError::OnKnotPlane),
                Some(true) => total += piece.poly.eval_f64(x),
                Some(false) => {}
            }
        }
        Ok(total)
    }

    /// Exact integral over the whole support.
    pub fn integral(&self) -> Rational {
        self.regions.par_iter().map(|r| integrate_over(&r.poly, &r.region.polyhedron)).sum()
    }

    /// Pairs of cells sharing a facet, with the facet's vertices.
    pub fn adjacent_pairs(&self) -> Vec<(usize, usize, Vec<Vec<Rational>>)> {
        let s = self.dim();
        let mut out = Vec::new();
        for i in 0..self.regions.len() {
            for j in i + 1..self.regions.len() {
                let vj = &self.regions[j].region.polyhedron.vertices;
                let common: Vec<Vec<Rational>> = self.regions[i]
                    .region
                    .polyhedron
                    .vertices
                    .iter()
                    .filter(|v| vj.contains(v))
                    .cloned()
                    .collect();
                if common.len() >= s && affine_rank(&common) + 1 == s {
                    out.push((i, j, common));
                }
            }
        }
        out
    }

    /// Adjacent pairs whose polynomials differ somewhere on the shared facet.
    pub fn continuity_defects(&self) -> Vec<(usize, usize)> {
        self.adjacent_pairs()
            .into_par_iter()
            .filter(|(i, j, facet)| {
                let diff = self.regions[*i].poly.clone() - self.regions[*j].poly.clone();
                !restrict_to_hull(&diff, facet).is_zero()
            })
            .map(|(i, j, _)| (i, j))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("PPForm serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| BoxError::Parse(e.to_string()))
    }

    /// Plain-text region table: index, center, polynomial.
    pub fn table(&self) -> String {
        let mut out = String::from("Region | Center | Polynomial Piece\n");
        for (i, r) in self.regions.iter().enumerate() {
            let center: Vec<String> = r.region.center.iter().map(ToString::to_string).collect();
            out.push_str(&format!("R{i} | ({}) | {}\n", center.join(", "), r.poly));
        }
        out
    }

    /// Human-readable dump of every derived set.
    pub fn report(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("Xi = {}\ncentered = {}\nker Xi = {}\n\n", self.xi, self.centered, self.kernel));
        out.push_str(&format!("S ({} atoms):\n", self.shifts.len()));
        for a in &self.shifts {
            let p: Vec<String> = a.shift.iter().map(ToString::to_string).collect();
            out.push_str(&format!("  ({}, ({}))\n", a.coeff, p.join(", ")));
        }
        for (k, level) in self.p_sets.iter().enumerate() {
            out.push_str(&format!("\nP_{k} ({} atoms):\n", level.len()));
            for a in level {
                let alpha: Vec<String> = a.alpha.iter().map(ToString::to_string).collect();
                out.push_str(&format!("  ({}, ({}))\n", a.coeff, alpha.join(", ")));
            }
        }
        out.push_str("\nGreen's terms:\n");
        for t in &self.greens {
            out.push_str(&format!(
                "  coeff {} | inv {} | exponents {:?} | columns {:?}\n",
                t.coeff, t.xi_alpha_inv, t.mu_minus_one, t.sigma
            ));
        }
        out.push('\n');
        out.push_str(&self.table());
        out
    }
}

fn affine_rank(points: &[Vec<Rational>]) -> usize {
    let diffs: Vec<Vec<Rational>> =
        points[1..].iter().map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect()).collect();
    if diffs.is_empty() {
        return 0;
    }
    RatMatrix::from_rows(diffs).expect("rectangular").rank()
}

/// `p` pulled back to affine coordinates on the hull of `points`.
fn restrict_to_hull(p: &MultiPoly, points: &[Vec<Rational>]) -> MultiPoly {
    let mut basis: Vec<Vec<Rational>> = Vec::new();
    for q in &points[1..] {
        let d: Vec<Rational> = q.iter().zip(&points[0]).map(|(a, b)| a - b).collect();
        let mut trial = basis.clone();
        trial.push(d.clone());
        if RatMatrix::from_rows(trial).expect("rectangular").rank() > basis.len() {
            basis.push(d);
        }
    }
    if basis.is_empty() {
        return MultiPoly::constant(0, p.eval(&points[0]));
    }
    let a = RatMatrix::from_columns(&basis).expect("columns");
    p.compose_affine(&a, &points[0])
}
