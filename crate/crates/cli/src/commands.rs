use std::fmt;
use std::fs;
use std::path::Path;

use boxpp::io::parse_point;
use boxpp::ratlinalg::to_f64;
use boxpp::{build_bsp, build_ppform, emit_c, BoxError, BspTree, RatMatrix, Rational, XiSpec};
use rayon::prelude::*;

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Invalid(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Invalid(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) | CliError::Invalid(m) => f.write_str(m),
        }
    }
}

impl From<BoxError> for CliError {
    fn from(e: BoxError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load(path: &Path, centered: bool) -> Result<(RatMatrix, bool)> {
    let spec = XiSpec::parse(&read(path)?)?;
    Ok((spec.matrix()?, spec.centered || centered))
}

pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn derive(xi_file: &Path, centered: bool, json: bool) -> Result<String> {
    let (xi, centered) = load(xi_file, centered)?;
    let pp = build_ppform(&xi, centered)?;
    Ok(if json { pp.to_json() + "\n" } else { pp.report() })
}

fn check_dim(p: &[Rational], tree: &BspTree) -> Result<()> {
    if p.len() == tree.dim() {
        Ok(())
    } else {
        Err(CliError::Invalid(format!("point has {} coordinates, expected {}", p.len(), tree.dim())))
    }
}

pub fn eval(xi_file: &Path, centered: bool, inline: &[String], points_file: Option<&Path>, exact: bool) -> Result<String> {
    let (xi, centered) = load(xi_file, centered)?;
    let mut points = Vec::new();
    for p in inline {
        points.push(parse_point(p)?);
    }
    if let Some(path) = points_file {
        for line in read(path)?.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            points.push(parse_point(line)?);
        }
    }
    if points.is_empty() {
        return Err(CliError::Invalid("no points given; use --point or --points".into()));
    }
    let tree = build_bsp(&xi, centered)?;
    let compiled = tree.compile();
    let mut out = String::new();
    for p in &points {
        check_dim(p, &tree)?;
        if exact {
            out.push_str(&tree.eval_exact(p).to_string());
        } else {
            let x: Vec<f64> = p.iter().map(to_f64).collect();
            out.push_str(&compiled.eval(&x).to_string());
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn codegen(xi_file: &Path, centered: bool, name: &str) -> Result<String> {
    let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if !valid {
        return Err(CliError::Invalid(format!("not a C identifier: {name}")));
    }
    let (xi, centered) = load(xi_file, centered)?;
    Ok(emit_c(&build_bsp(&xi, centered)?, name))
}

pub fn grid(xi_file: &Path, centered: bool, resolution: usize) -> Result<String> {
    if resolution < 2 {
        return Err(CliError::Invalid("--resolution must be at least 2".into()));
    }
    let (xi, centered) = load(xi_file, centered)?;
    let tree = build_bsp(&xi, centered)?;
    let compiled = tree.compile();
    let s = tree.dim();
    let axes: Vec<Vec<f64>> = (0..s)
        .map(|i| {
            let coord = tree.support.vertices.iter().map(|v| &v[i]);
            let lo = coord.clone().min().expect("vertices").clone();
            let hi = coord.max().expect("vertices").clone();
            let steps = Rational::from_integer((resolution - 1).into());
            (0..resolution)
                .map(|k| to_f64(&(&lo + (&hi - &lo) * Rational::from_integer(k.into()) / &steps)))
                .collect()
        })
        .collect();
    let total = resolution.pow(s as u32);
    let rows: Vec<String> = (0..total)
        .into_par_iter()
        .map(|mut idx| {
            let mut p = Vec::with_capacity(s);
            for axis in axes.iter().rev() {
                p.push(axis[idx % resolution]);
                idx /= resolution;
            }
            p.reverse();
            let value = compiled.eval(&p);
            let mut row: Vec<String> = p.iter().map(f64::to_string).collect();
            row.push(value.to_string());
            row.join(",")
        })
        .collect();
    let names = ["x", "y", "z"];
    let mut header: Vec<String> = (0..s).map(|i| names.get(i).map_or(format!("x{i}"), |n| n.to_string())).collect();
    header.push("value".into());
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    Ok(out)
}
