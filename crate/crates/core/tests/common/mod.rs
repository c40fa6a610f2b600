#![allow(dead_code)]

use std::path::PathBuf;

use boxpp::geometry::Hyperplane;
use boxpp::ratlinalg::{parse_rational, to_f64};
use boxpp::ratlinalg::int;
use boxpp::{BspTree, GreensBuilder, MultiPoly, PPForm, Polyhedron, RatMatrix, Rational};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

/// Parses `1/4*x^2 - x*y + 3/2` style polynomials in `x, y, z`.
pub fn parse_poly(text: &str, num_vars: usize) -> MultiPoly {
    let mut out = MultiPoly::zero(num_vars);
    let cleaned = text.replace(' ', "");
    let mut terms = Vec::new();
    let mut cur = String::new();
    for ch in cleaned.chars() {
        if (ch == '+' || ch == '-') && !cur.is_empty() {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    for term in terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(rest) => (-Rational::one(), rest.to_string()),
            None => (Rational::one(), term.trim_start_matches('+').to_string()),
        };
        let mut coeff = sign;
        let mut exps = vec![0u32; num_vars];
        for factor in body.split('*') {
            let (base, power) = match factor.split_once('^') {
                Some((b, p)) => (b, p.parse::<u32>().expect("exponent")),
                None => (factor, 1),
            };
            match base {
                "x" => exps[0] += power,
                "y" => exps[1] += power,
                "z" => exps[2] += power,
                number => coeff *= parse_rational(number).expect("coefficient"),
            }
        }
        out.add_term(exps, coeff);
    }
    out
}

/// Table rows expanded to one polynomial per listed region.
pub fn load_table(name: &str) -> Vec<MultiPoly> {
    let text = std::fs::read_to_string(data_path(name)).expect("table file");
    let mut polys = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let (labels, poly) = line.split_once('|').expect("label | poly");
        let p = parse_poly(poly, 2);
        for _ in labels.split(',') {
            polys.push(p.clone());
        }
    }
    polys
}

/// Swaps the two variables of a bivariate polynomial.
pub fn swap_xy(p: &MultiPoly) -> MultiPoly {
    MultiPoly::from_terms(2, p.terms().map(|(e, c)| (vec![e[1], e[0]], c.clone())))
}

pub fn sorted(mut v: Vec<MultiPoly>) -> Vec<MultiPoly> {
    v.sort_by_key(|p| p.to_string());
    v
}

/// Distance from `x` to the nearest plane, with normals scaled to unit length.
pub fn plane_distance(planes: &[Hyperplane], x: &[f64]) -> f64 {
    planes
        .iter()
        .map(|h| {
            let n: Vec<f64> = h.normal.iter().map(to_f64).collect();
            let norm = n.iter().map(|v| v * v).sum::<f64>().sqrt();
            (h.eval_f64(x) / norm).abs()
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn bounding_box(q: &Polyhedron) -> Vec<(f64, f64)> {
    (0..q.dim())
        .map(|i| {
            let vals = q.vertices.iter().map(|v| to_f64(&v[i]));
            let lo = vals.clone().fold(f64::INFINITY, f64::min);
            let hi = vals.fold(f64::NEG_INFINITY, f64::max);
            (lo, hi)
        })
        .collect()
}

/// Random float points strictly inside the support and at least `gap` away
/// from every knot plane.
pub fn off_mesh_points(pp: &PPForm, count: usize, gap: f64, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let bounds = bounding_box(&pp.support);
    let mut out = Vec::new();
    while out.len() < count {
        let p: Vec<f64> = bounds.iter().map(|&(lo, hi)| rng.gen_range(lo..hi)).collect();
        if pp.support.contains_f64(&p, -gap) && plane_distance(&pp.knot_planes, &p) > gap {
            out.push(p);
        }
    }
    out
}

/// Random rational points in the support's bounding box, denominators up to `den`.
pub fn rational_points(q: &Polyhedron, count: usize, den: i64, rng: &mut impl Rng) -> Vec<Vec<Rational>> {
    let bounds = bounding_box(q);
    (0..count)
        .map(|_| {
            bounds
                .iter()
                .map(|&(lo, hi)| {
                    let d = rng.gen_range(1..=den);
                    let n = rng.gen_range(((lo - 0.5) * d as f64) as i64..=((hi + 0.5) * d as f64) as i64);
                    Rational::new(n.into(), d.into())
                })
                .collect()
        })
        .collect()
}

/// Full-rank integer matrix with small entries and no zero columns.
pub fn random_matrix(s: usize, n: usize, rng: &mut impl Rng) -> RatMatrix {
    loop {
        let rows: Vec<Vec<Rational>> =
            (0..s).map(|_| (0..n).map(|_| Rational::from_integer(rng.gen_range(-2i64..=2).into())).collect()).collect();
        let m = RatMatrix::from_rows(rows).unwrap();
        let zero_col = (0..n).any(|j| m.column(j).iter().all(Zero::is_zero));
        if !zero_col && m.rank() == s {
            return m;
        }
    }
}

/// Random rational ω off every pole `ω·ξ_j = 0`.
pub fn pole_free_omega(xi: &RatMatrix, rng: &mut impl Rng) -> Vec<Rational> {
    loop {
        let w: Vec<Rational> = (0..xi.rows())
            .map(|_| Rational::new(rng.gen_range(-40i64..=40).into(), rng.gen_range(1i64..=9).into()))
            .collect();
        if xi.transpose().mul_vec(&w).iter().all(|v| !v.is_zero()) {
            return w;
        }
    }
}

/// Violations of the P_k structure, described; empty when all hold.
pub fn structural_violations(xi: &RatMatrix) -> Vec<String> {
    let n = xi.cols();
    let b = GreensBuilder::new(xi).unwrap();
    let sets = b.p_sets().unwrap();
    let mut bad = Vec::new();
    for (k, level) in sets.iter().enumerate() {
        for atom in level {
            if atom.support_size() != n - k {
                bad.push(format!("P_{k} {:?}: support {}", atom.alpha, atom.support_size()));
            }
            if k + xi.rows() < n {
                let m = b.nu_vector(&atom.alpha).unwrap().lead;
                if atom.alpha[m + 1..].iter().any(|&a| a > 1) {
                    bad.push(format!("P_{k} {:?}: entry > 1 after m = {m}", atom.alpha));
                }
            } else {
                let cols: Vec<usize> = (0..n).filter(|&j| atom.alpha[j] > 0).collect();
                if xi.select_columns(&cols).det().unwrap().is_zero() {
                    bad.push(format!("P_{k} {:?}: singular", atom.alpha));
                }
            }
        }
    }
    bad
}

/// Integer translates summed at `x`.
pub fn integer_shift_sum(tree: &BspTree, x: &[Rational]) -> Rational {
    let bounds = bounding_box(&tree.support);
    let ranges: Vec<(i64, i64)> = x
        .iter()
        .zip(&bounds)
        .map(|(xi, &(lo, hi))| {
            let xf = boxpp::ratlinalg::to_f64(xi);
            ((xf - hi).floor() as i64 - 1, (xf - lo).ceil() as i64 + 1)
        })
        .collect();
    let mut total = Rational::zero();
    let mut j: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        let y: Vec<Rational> = x.iter().zip(&j).map(|(a, &b)| a - int(b)).collect();
        total += tree.eval_exact(&y);
        let mut d = 0;
        while d < j.len() {
            j[d] += 1;
            if j[d] <= ranges[d].1 {
                break;
            }
            j[d] = ranges[d].0;
            d += 1;
        }
        if d == j.len() {
            return total;
        }
    }
}

/// Compiles emitted C with a small driver and evaluates it at `points`.
pub fn run_emitted_c(source: &str, name: &str, dim: usize, points: &[Vec<f64>]) -> Vec<f64> {
    use std::io::Write;
    use std::process::{Command, Stdio};

    let dir = tempfile::tempdir().expect("temp dir");
    let driver = format!(
        "#include <stdio.h>\n{source}\nint main(void) {{\n    double x[{dim}];\n    for (;;) {{\n        for (int i = 0; i < {dim}; ++i) {{\n            if (scanf(\"%lf\", &x[i]) != 1) return 0;\n        }}\n        printf(\"%.17g\\n\", {name}(x));\n    }}\n}}\n"
    );
    let src = dir.path().join("eval.c");
    let bin = dir.path().join("eval");
    std::fs::write(&src, driver).unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-O1", "-ffp-contract=off", "-Wall", "-Werror", "-o"])
        .arg(&bin)
        .arg(&src)
        .status()
        .expect("a C compiler named cc");
    assert!(status.success(), "emitted source failed to compile");
    let mut child = Command::new(&bin).stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    {
        let mut stdin = child.stdin.take().unwrap();
        for p in points {
            let line: Vec<String> = p.iter().map(|v| format!("{v:e}")).collect();
            writeln!(stdin, "{}", line.join(" ")).unwrap();
        }
    }
    let out = child.wait_with_output().unwrap();
    String::from_utf8(out.stdout).unwrap().lines().map(|l| l.parse().unwrap()).collect()
}

/// Uniform float points in the support's bounding box, padded by `pad`.
pub fn box_points(q: &Polyhedron, count: usize, pad: f64, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let bounds = bounding_box(q);
    (0..count).map(|_| bounds.iter().map(|&(lo, hi)| rng.gen_range(lo - pad..hi + pad)).collect()).collect()
}
