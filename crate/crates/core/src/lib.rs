//! Coordinatisation of finite projective planes and analysis of the planar
//! ternary rings they produce.

pub mod analysis;
pub mod catalog;
pub mod collineation;
pub mod coord;
pub mod field;
pub mod par;
pub mod plane;
pub mod poly;
pub mod properties;
pub mod ternary;

use thiserror::Error;

/// Union of the module errors, for callers that do not care which stage failed.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] field::FieldError),
    #[error(transparent)]
    Poly(#[from] poly::PolyError),
    #[error(transparent)]
    Table(#[from] ternary::TableError),
    #[error(transparent)]
    Property(#[from] properties::PropertyError),
    #[error(transparent)]
    Plane(#[from] plane::PlaneError),
    #[error(transparent)]
    Collineation(#[from] collineation::CollineationError),
    #[error(transparent)]
    Coord(#[from] coord::CoordError),
    #[error(transparent)]
    Analysis(#[from] analysis::AnalysisError),
    #[error(transparent)]
    Catalog(#[from] catalog::CatalogError),
}
