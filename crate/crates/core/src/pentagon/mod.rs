//! Convex polygons under Eikonal abrasion and the pentagon shape space.

#[allow(clippy::module_inception)]
pub mod pentagon;
pub mod polygon;

pub use pentagon::*;
pub use polygon::{CollapseEvent, ConvexPolygon, Point, PolyCriticalKind, PolyCriticalPoint};
