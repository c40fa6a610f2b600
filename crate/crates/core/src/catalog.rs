//! Standard direction matrices.

use crate::ratlinalg::RatMatrix;

/// Courant element (three-direction linear box spline).
pub fn courant() -> RatMatrix {
    RatMatrix::from_i64(&[&[1, 0, 1], &[0, 1, 1]])
}

/// Zwart–Powell element.
pub fn zwart_powell() -> RatMatrix {
    RatMatrix::from_i64(&[&[1, 0, 1, -1], &[0, 1, 1, 1]])
}

/// Four-direction skewed element.
pub fn skewed() -> RatMatrix {
    RatMatrix::from_i64(&[&[1, 0, 1, 2], &[0, 1, 1, 1]])
}

/// Cubic box spline on the FCC lattice.
pub fn fcc() -> RatMatrix {
    RatMatrix::from_i64(&[&[1, 1, 1, -1, 0, 0], &[1, -1, 0, 0, 1, 1], &[0, 0, 1, 1, 1, -1]])
}

/// [`fcc`] with the second and sixth directions reversed. Same spline up to a
/// translation; its difference and Green's sets are the ones usually tabulated.
pub fn fcc_reflected() -> RatMatrix {
    RatMatrix::from_i64(&[&[1, -1, 1, -1, 0, 0], &[1, 1, 0, 0, 1, -1], &[0, 0, 1, 1, 1, 1]])
}

/// Name, matrix and whether the example is conventionally centered.
pub fn examples() -> Vec<(&'static str, RatMatrix, bool)> {
    vec![
        ("courant", courant(), false),
        ("zp", zwart_powell(), true),
        ("skewed", skewed(), true),
        ("fcc", fcc(), false),
    ]
}
