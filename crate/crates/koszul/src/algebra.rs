//! Presented quiver algebras `kQ / I`.

use crate::element::PathElement;
use crate::quiver::Quiver;
use crate::scalar::FieldSpec;

/// A quiver with relations over an exact field. Relations must be uniform
/// (parallel paths of equal length); the `quadratic` flag records whether
/// every relation is homogeneous of path length two, which gates the Koszul
/// construction downstream.
#[derive(Clone, Debug)]
pub struct PresentedAlgebra {
    pub quiver: Quiver,
    pub field: FieldSpec,
    pub relations: Vec<PathElement>,
    pub quadratic: bool,
}

impl PresentedAlgebra {
    pub fn new(
        quiver: Quiver,
        field: FieldSpec,
        relations: Vec<PathElement>,
    ) -> Result<PresentedAlgebra, String> {
        field.validate()?;
        for (i, r) in relations.iter().enumerate() {
            if r.is_zero() {
                return Err(format!("relation {i} is zero"));
            }
            if !r.is_uniform() {
                return Err(format!("relation {i} is not uniform"));
            }
        }
        let quadratic = relations
            .iter()
            .all(|r| r.iter().all(|(p, _)| p.len() == 2));
        Ok(PresentedAlgebra {
            quiver,
            field,
            relations,
            quadratic,
        })
    }
}
