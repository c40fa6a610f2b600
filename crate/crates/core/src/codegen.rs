//! C source emitter for a built BSP tree.
//!
//! The output is one self-contained translation unit: a support test, then
//! nested `if`/`else` on plane sides, with each leaf a straight-line sum of
//! monomials. Coefficients are exact rationals rounded once to the nearest
//! double and printed in shortest round-trip form.

use std::fmt::Write;

use crate::bsp::{BspNode, BspTree};
use crate::geometry::Side;
use crate::poly::MultiPoly;
use crate::ratlinalg::{to_f64, Rational};

/// Shortest literal that parses back to the same double.
pub fn float_literal(v: f64) -> String {
    let text = format!("{v:?}");
    if text.contains(['.', 'e', 'E']) || text.contains("inf") || text.contains("NaN") {
        text
    } else {
        format!("{text}.0")
    }
}

fn rat_literal(q: &Rational) -> String {
    float_literal(to_f64(q))
}

fn linear_form(normal: &[Rational], offset: &Rational) -> String {
    let mut out = String::new();
    for (i, a) in normal.iter().enumerate() {
        let a = to_f64(a);
        if a == 0.0 {
            continue;
        }
        if !out.is_empty() {
            out.push_str(" + ");
        }
        let _ = write!(out, "{} * x[{i}]", float_literal(a));
    }
    if out.is_empty() {
        out.push_str("0.0");
    }
    let _ = write!(out, " - {}", rat_literal(offset));
    out
}

fn poly_expr(poly: &MultiPoly) -> String {
    if poly.is_zero() {
        return "0.0".into();
    }
    let terms: Vec<String> = poly
        .terms()
        .map(|(exps, c)| {
            let mut t = rat_literal(c);
            for (i, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    let _ = write!(t, " * x[{i}]");
                }
            }
            t
        })
        .collect();
    terms.join("\n        + ")
}

fn emit_node(node: &BspNode, indent: usize, out: &mut String) {
    let pad = "    ".repeat(indent);
    match node {
        BspNode::Leaf { region_id, poly } => {
            let _ = writeln!(out, "{pad}/* region {region_id} */");
            let _ = writeln!(out, "{pad}return {};", poly_expr(poly).replace('\n', &format!("\n{pad}")));
        }
        BspNode::Internal { plane, left, right } => {
            let _ = writeln!(out, "{pad}if ({} <= 0.0) {{", linear_form(&plane.normal, &plane.offset));
            emit_node(left, indent + 1, out);
            let _ = writeln!(out, "{pad}}} else {{");
            emit_node(right, indent + 1, out);
            let _ = writeln!(out, "{pad}}}");
        }
    }
}

/// Emits `double <name>(const double *x)` plus its support test.
pub fn emit_c(tree: &BspTree, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "/* Box spline evaluator: {} dimensions, {} regions. */", tree.dim(), tree.leaf_count());
    let _ = writeln!(out);
    let _ = writeln!(out, "static int {name}_in_support(const double *x)");
    let _ = writeln!(out, "{{");
    let mut tests = Vec::new();
    for h in &tree.support.halfspaces {
        let op = match h.side {
            Side::Below => "<=",
            Side::Above => ">=",
        };
        tests.push(format!("({} {op} 0.0)", linear_form(&h.plane.normal, &h.plane.offset)));
    }
    if tests.is_empty() {
        tests.push("1".into());
    }
    let _ = writeln!(out, "    return {};", tests.join("\n        && "));
    let _ = writeln!(out, "}}");
    let _ = writeln!(out);
    let _ = writeln!(out, "double {name}(const double *x)");
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "    if (!{name}_in_support(x)) {{");
    let _ = writeln!(out, "        return 0.0;");
    let _ = writeln!(out, "    }}");
    emit_node(&tree.root, 1, &mut out);
    let _ = writeln!(out, "}}");
    out
}
