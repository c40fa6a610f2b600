//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ratlinalg::{to_f64, RatMatrix, Rational};

/// Polynomial in `num_vars` variables; one entry per exponent vector, no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    num_vars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiPoly {
    pub fn zero(num_vars: usize) -> Self {
        Self { num_vars, terms: BTreeMap::new() }
    }

    pub fn constant(num_vars: usize, c: Rational) -> Self {
        let mut p = Self::zero(num_vars);
        p.add_term(vec![0; num_vars], c);
        p
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, Rational::one())
    }

    pub fn var(num_vars: usize, i: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exps: Vec<u32>, c: Rational) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    /// `a·x + b`.
    pub fn linear(a: &[Rational], b: &Rational) -> Self {
        let n = a.len();
        let mut p = Self::constant(n, b.clone());
        for (i, ai) in a.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, ai.clone());
        }
        p
    }

    pub fn from_terms(num_vars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero(num_vars);
        for (e, c) in terms {
            assert_eq!(e.len(), num_vars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero(self.num_vars);
        }
        Self { num_vars: self.num_vars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.num_vars), |acc, _| &acc * self)
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.num_vars, "point dimension");
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(x).fold(c.clone(), |acc, (&k, xi)| acc * num_traits::pow(xi.clone(), k as usize))
            })
            .sum()
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(x).fold(to_f64(c), |acc, (&k, xi)| acc * xi.powi(k as i32)))
            .sum()
    }

    /// `p(A x + b)`, expanded and collected.
    pub fn compose_affine(&self, a: &RatMatrix, b: &[Rational]) -> Self {
        assert_eq!(a.rows(), self.num_vars, "substitution rows must match variable count");
        assert_eq!(b.len(), self.num_vars, "offset length must match variable count");
        let out_vars = a.cols();
        let images: Vec<MultiPoly> = (0..self.num_vars).map(|i| MultiPoly::linear(a.row(i), &b[i])).collect();
        let mut powers: Vec<Vec<MultiPoly>> = images.iter().map(|p| vec![MultiPoly::one(out_vars), p.clone()]).collect();
        let mut out = MultiPoly::zero(out_vars);
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(out_vars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().expect("seeded") * &images[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][k as usize];
            }
            out = out + term;
        }
        out
    }

    /// Exact integral over the standard simplex `{u ≥ 0, Σu ≤ 1}`.
    pub fn integrate_standard_simplex(&self) -> Rational {
        let s = self.num_vars;
        self.terms
            .iter()
            .map(|(e, c)| {
                let num: BigInt = e.iter().map(|&k| factorial(k)).product();
                let total: u32 = e.iter().sum::<u32>() + s as u32;
                c * Rational::new(num, factorial(total))
            })
            .sum()
    }

    /// Coefficients as floats, for fast evaluation and code emission.
    pub fn float_terms(&self) -> Vec<(Vec<u32>, f64)> {
        self.terms.iter().map(|(e, c)| (e.clone(), to_f64(c))).collect()
    }

    pub fn variable_name(num_vars: usize, i: usize) -> String {
        if num_vars <= 3 {
            ["x", "y", "z"][i].to_string()
        } else {
            format!("x{}", i + 1)
        }
    }
}

pub(crate) fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * i)
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(mut self, rhs: MultiPoly) -> MultiPoly {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        self + (-rhs)
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly { num_vars: self.num_vars, terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    // Exponents add when monomials multiply.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(self.num_vars.max(rhs.num_vars));
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

/// Terms in descending graded order, `x` before `y`: `1/2*x^2 + x*y - 2*y + 4`.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (idx, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let name = Self::variable_name(self.num_vars, i);
                    if k == 1 { name } else { format!("{name}^{k}") }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    exps: Vec<u32>,
    #[serde(with = "crate::io::rat")]
    coeff: Rational,
}

#[derive(Serialize, Deserialize)]
struct PolyRecord {
    num_vars: usize,
    terms: Vec<TermRecord>,
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyRecord {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(e, c)| TermRecord { exps: e.clone(), coeff: c.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rec = PolyRecord::deserialize(d)?;
        if rec.terms.iter().any(|t| t.exps.len() != rec.num_vars) {
            return Err(serde::de::Error::custom("exponent vector length differs from num_vars"));
        }
        Ok(MultiPoly::from_terms(rec.num_vars, rec.terms.into_iter().map(|t| (t.exps, t.coeff))))
    }
}
