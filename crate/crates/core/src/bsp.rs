//! BSP tree over the support: build by recursive knot-plane splits, evaluate by
//! traversal.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diffop::difference_support;
use crate::error::Result;
use crate::geometry::{knot_planes, split_polyhedron, support_origin, support_zonotope, Hyperplane, Polyhedron};
use crate::greens::GreensBuilder;
use crate::poly::MultiPoly;
use crate::ppform::{green_pieces, polynomial_at, GreenPiece};
use crate::ratlinalg::{to_f64, RatMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BspNode {
    Internal { plane: Hyperplane, left: Box<BspNode>, right: Box<BspNode> },
    Leaf { region_id: usize, poly: MultiPoly },
}

impl BspNode {
    pub fn leaf_count(&self) -> usize {
        match self {
            BspNode::Internal { left, right, .. } => left.leaf_count() + right.leaf_count(),
            BspNode::Leaf { .. } => 1,
        }
    }

    pub fn internal_count(&self) -> usize {
        match self {
            BspNode::Internal { left, right, .. } => 1 + left.internal_count() + right.internal_count(),
            BspNode::Leaf { .. } => 0,
        }
    }

    /// Number of plane tests on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        match self {
            BspNode::Internal { left, right, .. } => 1 + left.depth().max(right.depth()),
            BspNode::Leaf { .. } => 0,
        }
    }

    fn leaf_f64(&self, x: &[f64]) -> &MultiPoly {
        let mut node = self;
        loop {
            match node {
                BspNode::Internal { plane, left, right } => {
                    node = if plane.eval_f64(x) <= 0.0 { left } else { right };
                }
                BspNode::Leaf { poly, .. } => return poly,
            }
        }
    }

    fn leaf_exact(&self, x: &[Rational]) -> (usize, &MultiPoly) {
        let mut node = self;
        loop {
            match node {
                BspNode::Internal { plane, left, right } => {
                    node = if plane.eval(x) <= Rational::zero() { left } else { right };
                }
                BspNode::Leaf { region_id, poly } => return (*region_id, poly),
            }
        }
    }

    fn relabel(&mut self, ids: &mut impl Iterator<Item = usize>) {
        match self {
            BspNode::Internal { left, right, .. } => {
                left.relabel(ids);
                right.relabel(ids);
            }
            BspNode::Leaf { region_id, .. } => *region_id = ids.next().expect("one id per leaf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BspTree {
    pub support: Polyhedron,
    pub root: BspNode,
}

impl BspTree {
    pub fn dim(&self) -> usize {
        self.support.dim()
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    pub fn leaf_count(&self) -> usize {
        self.root.leaf_count()
    }

    /// Float evaluation; zero outside the (weakly tested) support.
    pub fn eval(&self, x: &[f64]) -> f64 {
        if !self.support.contains_f64(x, 0.0) {
            return 0.0;
        }
        self.root.leaf_f64(x).eval_f64(x)
    }

    pub fn eval_exact(&self, x: &[Rational]) -> Rational {
        if !self.support.contains(x) {
            return Rational::zero();
        }
        self.root.leaf_exact(x).1.eval(x)
    }

    /// Region id of the leaf reached by `x` (weak side tests, so knot-plane
    /// points land in a neighbouring cell).
    pub fn locate(&self, x: &[Rational]) -> Option<usize> {
        self.support.contains(x).then(|| self.root.leaf_exact(x).0)
    }

    pub fn compile(&self) -> CompiledBsp {
        CompiledBsp::new(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tree serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| crate::error::BoxError::Parse(e.to_string()))
    }
}

pub fn eval_bsp(x: &[f64], tree: &BspTree) -> f64 {
    tree.eval(x)
}

/// A splitting plane with the two halves it produces.
struct Split {
    plane: Hyperplane,
    below: Polyhedron,
    above: Polyhedron,
}

fn best_split(planes: &[Hyperplane], q: &Polyhedron) -> Option<(usize, Split)> {
    planes
        .par_iter()
        .enumerate()
        .filter(|(_, h)| q.classify(h).splits())
        .map(|(i, h)| {
            let (below, above) = split_polyhedron(q, h).expect("plane splits");
            let imbalance = (below.volume() - above.volume()).abs();
            (imbalance, i, Split { plane: h.clone(), below, above })
        })
        .min_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)))
        .map(|(_, i, split)| (i, split))
}

/// Among planes strictly splitting `q`, the one with the most even volume
/// split; ties go to the earliest plane in canonical order.
pub fn choose_split(planes: &[Hyperplane], q: &Polyhedron) -> Option<Hyperplane> {
    let mut sorted = planes.to_vec();
    sorted.sort();
    best_split(&sorted, q).map(|(_, s)| s.plane)
}

fn build_node(cell: Polyhedron, planes: Vec<Hyperplane>, pieces: &[GreenPiece]) -> Result<(BspNode, Vec<Vec<Rational>>)> {
    let live: Vec<Hyperplane> = planes.into_iter().filter(|h| cell.classify(h).splits()).collect();
    let Some((i, split)) = best_split(&live, &cell) else {
        let center = cell.centroid();
        let poly = polynomial_at(pieces, &center)?;
        return Ok((BspNode::Leaf { region_id: 0, poly }, vec![center]));
    };
    let mut rest = live;
    rest.remove(i);
    let rest2 = rest.clone();
    let (left, right) = rayon::join(
        || build_node(split.below, rest, pieces),
        || build_node(split.above, rest2, pieces),
    );
    let (left, mut centers) = left?;
    let (right, more) = right?;
    centers.extend(more);
    Ok((BspNode::Internal { plane: split.plane, left: Box::new(left), right: Box::new(right) }, centers))
}

/// Builds the tree; leaf ids index the cells in ascending center order, the
/// same order `enumerate_regions` uses.
pub fn build_bsp(xi: &RatMatrix, centered: bool) -> Result<BspTree> {
    let builder = GreensBuilder::new(xi)?;
    let p_sets = builder.p_sets()?;
    let terms = builder.spatial_terms(p_sets.last().expect("P_0 present"))?;
    let pieces = green_pieces(&terms, &difference_support(xi, centered));
    let origin = support_origin(xi, centered);
    let support = support_zonotope(xi)?.translate(&origin);
    let planes: Vec<Hyperplane> = knot_planes(xi).iter().map(|h| h.translate(&origin)).collect();
    let (mut root, centers) = build_node(support.clone(), planes, &pieces)?;
    let mut order: Vec<usize> = (0..centers.len()).collect();
    order.sort_by(|&a, &b| centers[a].cmp(&centers[b]));
    let mut ids = vec![0; centers.len()];
    for (rank, &leaf) in order.iter().enumerate() {
        ids[leaf] = rank;
    }
    root.relabel(&mut ids.into_iter());
    Ok(BspTree { support, root })
}

/// Flat float copy of a tree for fast repeated evaluation.
#[derive(Debug, Clone)]
pub struct CompiledBsp {
    bounds: Vec<(Vec<f64>, f64, bool)>,
    nodes: Vec<FlatNode>,
    polys: Vec<Vec<(Vec<u32>, f64)>>,
}

#[derive(Debug, Clone)]
enum FlatNode {
    Internal { normal: Vec<f64>, offset: f64, left: usize, right: usize },
    Leaf(usize),
}

impl CompiledBsp {
    fn new(tree: &BspTree) -> Self {
        let bounds = tree
            .support
            .halfspaces
            .iter()
            .map(|h| {
                (
                    h.plane.normal.iter().map(to_f64).collect(),
                    to_f64(&h.plane.offset),
                    h.side == crate::geometry::Side::Above,
                )
            })
            .collect();
        let mut out = Self { bounds, nodes: Vec::new(), polys: Vec::new() };
        out.push(&tree.root);
        out
    }

    fn push(&mut self, node: &BspNode) -> usize {
        let idx = self.nodes.len();
        match node {
            BspNode::Leaf { poly, .. } => {
                self.polys.push(poly.float_terms());
                self.nodes.push(FlatNode::Leaf(self.polys.len() - 1));
            }
            BspNode::Internal { plane, left, right } => {
                self.nodes.push(FlatNode::Leaf(0));
                let l = self.push(left);
                let r = self.push(right);
                self.nodes[idx] = FlatNode::Internal {
                    normal: plane.normal.iter().map(to_f64).collect(),
                    offset: to_f64(&plane.offset),
                    left: l,
                    right: r,
                };
            }
        }
        idx
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let dot = |a: &[f64]| a.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
        let inside = self.bounds.iter().all(|(n, c, above)| {
            let v = dot(n) - c;
            if *above { v >= 0.0 } else { v <= 0.0 }
        });
        if !inside {
            return 0.0;
        }
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                FlatNode::Internal { normal, offset, left, right } => {
                    i = if dot(normal) - offset <= 0.0 { *left } else { *right };
                }
                FlatNode::Leaf(p) => {
                    return self.polys[*p]
                        .iter()
                        .map(|(e, c)| e.iter().zip(x).fold(*c, |acc, (&k, &xi)| acc * xi.powi(k as i32)))
                        .sum();
                }
            }
        }
    }
}
