use crate::error::{check_range, HeinzError, Result};
use crate::linalg::{singular_values, GeneralMatrix, PsdMatrix};
use crate::means::heinz_matrix;
use crate::verdict::{IndexedVerdict, Tolerances};

/// `σ_j(A^s B^{1-s} + A^{1-s} B^s) ≤ σ_j(A + B)` for every `j`.
///
/// This is the Heinz-mean singular value inequality with both sides doubled;
/// the tolerance scale is `1 + ‖A + B‖`.
pub fn zhan_check(a: &PsdMatrix, b: &PsdMatrix, s: f64, tol: &Tolerances) -> Result<IndexedVerdict> {
    if a.dim() != b.dim() {
        return Err(HeinzError::DimensionMismatch {
            context: "zhan_check",
            left: (a.dim(), a.dim()),
            right: (b.dim(), b.dim()),
        });
    }
    check_range("s", s, 0.0, 1.0, "[0, 1]")?;
    let lhs = heinz_matrix(a, b, s)?.scale(2.0);
    let sum: GeneralMatrix = a.as_general().try_add(b.as_general())?;
    let rhs = singular_values(&sum)?;
    let lhs = singular_values(&lhs)?;
    Ok(IndexedVerdict::leq(
        &lhs.values,
        &rhs.values,
        tol.loewner_rel,
        1.0 + rhs.largest(),
    ))
}
