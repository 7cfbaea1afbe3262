//! Benchmark fixtures shared by the criterion benches.

use orbint::harness::{parse_matrix, parse_matrix_text};
use orbint::localfield::parse_polynomial;
use orbint::{FieldTag, Matrix, MonicPoly};

fn matrix(src: &str, q: u32, tag: FieldTag) -> Matrix {
    let rows = parse_matrix_text(src);
    let n = rows.len();
    parse_matrix(&rows, q, tag, n).expect("fixture matrix")
}

pub fn linear(src: &str, q: u32) -> Matrix {
    matrix(src, q, FieldTag::Base)
}

pub fn quaternion(src: &str, q: u32) -> Matrix {
    matrix(src, q, FieldTag::Quadratic)
}

pub fn monic(src: &str, q: u32) -> MonicPoly {
    let coeffs = parse_polynomial(src, q, FieldTag::Base).expect("fixture polynomial");
    let gf = coeffs[0].field();
    MonicPoly::from_coeffs(gf, coeffs).expect("fixture is monic")
}

/// Linear fixtures `(label, q, matrix text)`, roughly increasing in cost.
pub const LINEAR: &[(&str, u32, &str)] = &[
    ("n1_t4", 3, "t^4"),
    ("n2_diag", 3, "t^2, 0; 0, t^3"),
    ("n2_companion", 3, "0, t^3; 1, t"),
    ("n3_diag", 2, "t^2, 0, 0; 0, t^2 + t^3, 0; 0, 0, t^3"),
];

/// Quaternionic fixtures `(label, q, matrix text)`.
pub const QUATERNION: &[(&str, u32, &str)] =
    &[("n1_t2", 3, "t^2"), ("n2_diag", 3, "t, 0; 0, w*t^2")];

/// Polynomials for factorization benches.
pub const POLYS: &[(&str, u32, &str)] = &[
    ("cubic", 3, "T^3 - t*T^2 - t^3"),
    ("quartic", 5, "T^4 + t*T^3 + t^3*T + t^5"),
];
