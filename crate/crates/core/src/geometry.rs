//! Support zonotope, knot planes of the mesh, and exact convex cells.
//!
//! Polyhedra carry both an H-representation (halfspaces, pruned to facets) and
//! a V-representation (vertices). Splitting by a plane keeps the two in sync
//! using exact edge/plane intersections, which is plenty at the sizes box
//! splines come in (`s ≤ 3`, `n ≤ 8` or so).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::diffop::half_column_sum;
use crate::error::{BoxError, Result};
use crate::poly::factorial;
use crate::ratlinalg::{dot, primitive, to_f64, RatMatrix, Rational};

/// The plane `{x : normal·x = offset}` in canonical form: primitive integer
/// normal whose first nonzero entry is positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Hyperplane {
    #[serde(with = "crate::io::rat_vec")]
    pub normal: Vec<Rational>,
    #[serde(with = "crate::io::rat")]
    pub offset: Rational,
}

impl Hyperplane {
    pub fn new(normal: &[Rational], offset: &Rational) -> Self {
        assert!(normal.iter().any(|x| !x.is_zero()), "hyperplane normal must be nonzero");
        let mut p = primitive(normal);
        let lead = p.iter().find(|x| !x.is_zero()).expect("nonzero").clone();
        if lead.is_negative() {
            p.iter_mut().for_each(|x| *x = -x.clone());
        }
        // The same positive factor maps the original normal onto `p`.
        let idx = normal.iter().position(|x| !x.is_zero()).expect("nonzero");
        let factor = Rational::from_integer(p[idx].clone()) / &normal[idx];
        Self { normal: p.into_iter().map(Rational::from_integer).collect(), offset: offset * factor }
    }

    /// `normal·x − offset`; nonpositive means the left (lower) side.
    pub fn eval(&self, x: &[Rational]) -> Rational {
        dot(&self.normal, x) - &self.offset
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.normal.iter().zip(x).map(|(a, b)| to_f64(a) * b).sum::<f64>() - to_f64(&self.offset)
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn translate(&self, t: &[Rational]) -> Self {
        Self { normal: self.normal.clone(), offset: &self.offset + dot(&self.normal, t) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    /// `normal·x ≤ offset`
    #[serde(rename = "le")]
    Below,
    /// `normal·x ≥ offset`
    #[serde(rename = "ge")]
    Above,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfSpace {
    pub plane: Hyperplane,
    pub side: Side,
}

impl HalfSpace {
    /// Signed slack; nonnegative inside.
    pub fn slack(&self, x: &[Rational]) -> Rational {
        let v = self.plane.eval(x);
        match self.side {
            Side::Below => -v,
            Side::Above => v,
        }
    }

    pub fn slack_f64(&self, x: &[f64]) -> f64 {
        let v = self.plane.eval_f64(x);
        match self.side {
            Side::Below => -v,
            Side::Above => v,
        }
    }
}

/// Bounded convex polytope with matching H- and V-representations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polyhedron {
    pub halfspaces: Vec<HalfSpace>,
    #[serde(with = "crate::io::rat_points")]
    pub vertices: Vec<Vec<Rational>>,
}

/// An open mesh cell and a point strictly inside it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub polyhedron: Polyhedron,
    #[serde(with = "crate::io::rat_vec")]
    pub center: Vec<Rational>,
}

/// Vertex classification against a plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SideCounts {
    pub below: usize,
    pub on: usize,
    pub above: usize,
}

impl SideCounts {
    pub fn splits(&self) -> bool {
        self.below > 0 && self.above > 0
    }
}

fn rank_of(vectors: &[Vec<Rational>], dim: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    RatMatrix::from_rows(vectors.to_vec()).map(|m| m.rank()).unwrap_or(0).min(dim)
}

fn affine_dim(points: &[&Vec<Rational>]) -> usize {
    let Some((p0, rest)) = points.split_first() else {
        return 0;
    };
    let diffs: Vec<Vec<Rational>> =
        rest.iter().map(|p| p.iter().zip(p0.iter()).map(|(a, b)| a - b).collect()).collect();
    rank_of(&diffs, p0.len())
}

impl Polyhedron {
    pub fn dim(&self) -> usize {
        self.vertices.first().map_or(0, Vec::len)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.halfspaces.iter().all(|h| !h.slack(x).is_negative())
    }

    pub fn strictly_contains(&self, x: &[Rational]) -> bool {
        self.halfspaces.iter().all(|h| h.slack(x).is_positive())
    }

    pub fn contains_f64(&self, x: &[f64], tol: f64) -> bool {
        self.halfspaces.iter().all(|h| h.slack_f64(x) >= -tol)
    }

    pub fn centroid(&self) -> Vec<Rational> {
        let k = Rational::from_integer(BigInt::from(self.vertices.len()));
        let mut c = vec![Rational::zero(); self.dim()];
        for v in &self.vertices {
            for (ci, vi) in c.iter_mut().zip(v) {
                *ci += vi;
            }
        }
        c.into_iter().map(|x| x / &k).collect()
    }

    pub fn classify(&self, h: &Hyperplane) -> SideCounts {
        let mut counts = SideCounts { below: 0, on: 0, above: 0 };
        for v in &self.vertices {
            match h.eval(v).cmp(&Rational::zero()) {
                Ordering::Less => counts.below += 1,
                Ordering::Equal => counts.on += 1,
                Ordering::Greater => counts.above += 1,
            }
        }
        counts
    }

    pub fn translate(&self, t: &[Rational]) -> Self {
        Self {
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| HalfSpace { plane: h.plane.translate(t), side: h.side })
                .collect(),
            vertices: self.vertices.iter().map(|v| v.iter().zip(t).map(|(a, b)| a + b).collect()).collect(),
        }
    }

    /// Indices of the halfspaces tight at each vertex.
    fn tight_sets(&self) -> Vec<BTreeSet<usize>> {
        self.vertices
            .iter()
            .map(|v| (0..self.halfspaces.len()).filter(|&i| self.halfspaces[i].slack(v).is_zero()).collect())
            .collect()
    }

    /// Vertex index sets of each facet, in halfspace order.
    fn facet_vertex_sets(&self) -> Vec<Vec<usize>> {
        (0..self.halfspaces.len())
            .map(|i| {
                (0..self.vertices.len())
                    .filter(|&v| self.halfspaces[i].slack(&self.vertices[v]).is_zero())
                    .collect()
            })
            .collect()
    }

    /// Drops duplicate and non-facet halfspaces.
    fn prune(mut self) -> Self {
        let s = self.dim();
        self.halfspaces.sort();
        self.halfspaces.dedup();
        let vertices = &self.vertices;
        self.halfspaces.retain(|h| {
            let tight: Vec<&Vec<Rational>> = vertices.iter().filter(|v| h.slack(v).is_zero()).collect();
            tight.len() >= s && affine_dim(&tight) + 1 == s
        });
        self
    }

    /// Pulling triangulation through the face lattice; each simplex is a list
    /// of `s + 1` vertex indices.
    pub fn simplices(&self) -> Vec<Vec<usize>> {
        let s = self.dim();
        let facets = self.facet_vertex_sets();
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let mut out = Vec::new();
        self.triangulate_face(&all, s, &facets, &mut Vec::new(), &mut out);
        out
    }

    fn triangulate_face(
        &self,
        face: &[usize],
        dim: usize,
        facets: &[Vec<usize>],
        prefix: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if dim == 0 {
            let mut simplex = prefix.clone();
            simplex.push(face[0]);
            out.push(simplex);
            return;
        }
        let apex = face[0];
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for f in facets {
            let sub: Vec<usize> = face.iter().copied().filter(|v| f.binary_search(v).is_ok()).collect();
            if sub.len() < dim || sub.contains(&apex) || sub.len() == face.len() || !seen.insert(sub.clone()) {
                continue;
            }
            let pts: Vec<&Vec<Rational>> = sub.iter().map(|&v| &self.vertices[v]).collect();
            if affine_dim(&pts) != dim - 1 {
                continue;
            }
            prefix.push(apex);
            self.triangulate_face(&sub, dim - 1, facets, prefix, out);
            prefix.pop();
        }
    }

    /// Exact hypervolume.
    pub fn volume(&self) -> Rational {
        let s = self.dim();
        let norm = Rational::from_integer(factorial(s as u32));
        self.simplices().iter().map(|simplex| simplex_volume(&self.simplex_points(simplex)) / &norm).sum()
    }

    pub fn simplex_points(&self, simplex: &[usize]) -> Vec<Vec<Rational>> {
        simplex.iter().map(|&i| self.vertices[i].clone()).collect()
    }
}

/// `|det(p₁ − p₀, …, p_s − p₀)|`, i.e. `s!` times the simplex volume.
pub fn simplex_volume(points: &[Vec<Rational>]) -> Rational {
    let p0 = &points[0];
    let rows: Vec<Vec<Rational>> =
        points[1..].iter().map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect()).collect();
    RatMatrix::from_rows(rows).expect("square").det().expect("square").abs()
}

/// Distinct canonical normals of the hyperplanes spanned by `s − 1` columns.
pub fn mesh_normals(xi: &RatMatrix) -> Vec<Vec<Rational>> {
    let s = xi.rows();
    let n = xi.cols();
    let mut normals = BTreeSet::new();
    for subset in combinations(n, s - 1) {
        let sub = xi.select_columns(&subset).transpose();
        let sub = if subset.is_empty() { RatMatrix::zeros(0, s) } else { sub };
        if sub.rows() > 0 && sub.rank() != s - 1 {
            continue;
        }
        let k = sub.kernel_basis();
        if k.cols() != 1 {
            continue;
        }
        normals.insert(Hyperplane::new(&k.column(0), &Rational::zero()).normal);
    }
    normals.into_iter().collect()
}

/// Index subsets of size `k` from `0..n`, in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn support_extent(xi: &RatMatrix, normal: &[Rational]) -> (Rational, Rational) {
    let projections = xi.transpose().mul_vec(normal);
    let lo = projections.iter().filter(|p| p.is_negative()).sum();
    let hi = projections.iter().filter(|p| p.is_positive()).sum();
    (lo, hi)
}

/// Origin of the support: `0`, or `−Ξ·1/2` for the centered spline.
pub fn support_origin(xi: &RatMatrix, centered: bool) -> Vec<Rational> {
    if centered {
        half_column_sum(xi).into_iter().map(|x| -x).collect()
    } else {
        vec![Rational::zero(); xi.rows()]
    }
}

/// `Ξ·[0,1]ⁿ`, the support of the uncentered box spline.
pub fn support_zonotope(xi: &RatMatrix) -> Result<Polyhedron> {
    let s = xi.rows();
    let rank = xi.rank();
    if rank < s {
        return Err(BoxError::DegenerateMatrix { rank, expected: s });
    }
    let mut halfspaces = Vec::new();
    for normal in mesh_normals(xi) {
        let (lo, hi) = support_extent(xi, &normal);
        halfspaces.push(HalfSpace { plane: Hyperplane::new(&normal, &hi), side: Side::Below });
        halfspaces.push(HalfSpace { plane: Hyperplane::new(&normal, &lo), side: Side::Above });
    }
    let cols = xi.columns();
    let mut sums: BTreeSet<Vec<Rational>> = BTreeSet::new();
    for mask in 0u64..(1u64 << xi.cols()) {
        let mut p = vec![Rational::zero(); s];
        for (j, c) in cols.iter().enumerate() {
            if mask >> j & 1 == 1 {
                for (pi, ci) in p.iter_mut().zip(c) {
                    *pi += ci;
                }
            }
        }
        sums.insert(p);
    }
    let vertices: Vec<Vec<Rational>> = sums
        .into_iter()
        .filter(|p| {
            let normals: Vec<Vec<Rational>> = halfspaces
                .iter()
                .filter(|h| h.slack(p).is_zero())
                .map(|h| h.plane.normal.clone())
                .collect();
            rank_of(&normals, s) == s
        })
        .collect();
    Ok(Polyhedron { halfspaces, vertices }.prune())
}

/// Lattice translates `H + Ξz` of every mesh hyperplane that meet the support
/// (boundary planes included), deduplicated and sorted.
pub fn knot_planes(xi: &RatMatrix) -> Vec<Hyperplane> {
    let mut planes = BTreeSet::new();
    for normal in mesh_normals(xi) {
        let projections = xi.transpose().mul_vec(&normal);
        // Offsets reachable by ν·Ξz form the group gℤ.
        let step = projections.iter().filter(|p| !p.is_zero()).fold(Rational::zero(), |g, p| rational_gcd(&g, p));
        if step.is_zero() {
            continue;
        }
        let (lo, hi) = support_extent(xi, &normal);
        let first = (&lo / &step).ceil().to_integer();
        let last = (&hi / &step).floor().to_integer();
        let mut k = first;
        while k <= last {
            planes.insert(Hyperplane::new(&normal, &(Rational::from_integer(k.clone()) * &step)));
            k += 1;
        }
    }
    planes.into_iter().collect()
}

fn rational_gcd(a: &Rational, b: &Rational) -> Rational {
    if a.is_zero() {
        return b.abs();
    }
    let num = a.numer().gcd(b.numer());
    let den = a.denom().lcm(b.denom());
    Rational::new(num, den)
}

/// Splits `q` into `q ∩ {h ≤ 0}` and `q ∩ {h ≥ 0}`.
pub fn split_polyhedron(q: &Polyhedron, h: &Hyperplane) -> Result<(Polyhedron, Polyhedron)> {
    let values: Vec<Rational> = q.vertices.iter().map(|v| h.eval(v)).collect();
    let below: Vec<usize> = (0..values.len()).filter(|&i| values[i].is_negative()).collect();
    let above: Vec<usize> = (0..values.len()).filter(|&i| values[i].is_positive()).collect();
    let on: Vec<usize> = (0..values.len()).filter(|&i| values[i].is_zero()).collect();
    if below.is_empty() || above.is_empty() {
        return Err(BoxError::NoSplit);
    }
    let s = q.dim();
    let tight = q.tight_sets();
    let mut cut: BTreeSet<Vec<Rational>> = BTreeSet::new();
    for &u in &below {
        for &v in &above {
            let common: BTreeSet<usize> = tight[u].intersection(&tight[v]).copied().collect();
            let normals: Vec<Vec<Rational>> = common.iter().map(|&i| q.halfspaces[i].plane.normal.clone()).collect();
            if rank_of(&normals, s) + 1 != s {
                continue;
            }
            let shared_face_has_more = (0..q.vertices.len())
                .any(|w| w != u && w != v && common.is_subset(&tight[w]));
            if shared_face_has_more {
                continue;
            }
            let t = &values[u] / (&values[u] - &values[v]);
            let p: Vec<Rational> = q.vertices[u]
                .iter()
                .zip(&q.vertices[v])
                .map(|(a, b)| a + &t * (b - a))
                .collect();
            cut.insert(p);
        }
    }
    let build = |side: &[usize], hs: Side| {
        let mut vertices: Vec<Vec<Rational>> =
            side.iter().chain(&on).map(|&i| q.vertices[i].clone()).chain(cut.iter().cloned()).collect();
        vertices.sort();
        vertices.dedup();
        let mut halfspaces = q.halfspaces.clone();
        halfspaces.push(HalfSpace { plane: h.clone(), side: hs });
        Polyhedron { halfspaces, vertices }.prune()
    };
    Ok((build(&below, Side::Below), build(&above, Side::Above)))
}

/// Every open cell of the mesh inside the support, sorted by center.
pub fn enumerate_regions(xi: &RatMatrix, centered: bool) -> Result<Vec<Region>> {
    let origin = support_origin(xi, centered);
    let support = support_zonotope(xi)?.translate(&origin);
    let planes: Vec<Hyperplane> = knot_planes(xi).iter().map(|h| h.translate(&origin)).collect();
    let mut cells = Vec::new();
    split_all(support, planes, &mut cells);
    let mut regions: Vec<Region> =
        cells.into_iter().map(|p| Region { center: p.centroid(), polyhedron: p }).collect();
    regions.sort_by(|a, b| a.center.cmp(&b.center));
    Ok(regions)
}

fn split_all(cell: Polyhedron, planes: Vec<Hyperplane>, out: &mut Vec<Polyhedron>) {
    let live: Vec<Hyperplane> = planes.into_iter().filter(|h| cell.classify(h).splits()).collect();
    let Some((first, rest)) = live.split_first() else {
        out.push(cell);
        return;
    };
    let (a, b) = split_polyhedron(&cell, first).expect("plane was classified as splitting");
    split_all(a, rest.to_vec(), out);
    split_all(b, rest.to_vec(), out);
}

/// Looks up region indices by exact center.
pub fn region_index(regions: &[Region]) -> BTreeMap<Vec<Rational>, usize> {
    regions.iter().enumerate().map(|(i, r)| (r.center.clone(), i)).collect()
}

/// Zonotope volume `Σ |det Ξ_σ|` over `s`-column subsets.
pub fn zonotope_volume(xi: &RatMatrix) -> Rational {
    combinations(xi.cols(), xi.rows())
        .into_iter()
        .map(|sub| xi.select_columns(&sub).det().expect("square").abs())
        .sum()
}

pub fn is_on_plane(planes: &[Hyperplane], x: &[Rational]) -> bool {
    planes.iter().any(|h| h.eval(x).is_zero())
}
