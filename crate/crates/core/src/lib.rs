//! Hyperbolic Voronoi diagrams built as clipped power diagrams in the Klein
//! disk, together with conversions to the Poincaré disk and upper half-plane,
//! nearest-neighbor and smallest-enclosing-ball queries, and disk isometries
//! for recentering the viewpoint.

pub mod bisector;
mod error;
pub mod hquery;
pub mod hvoronoi;
pub mod hypgeom;
pub mod mobius;
pub mod powerdiag;
mod vector;

pub use bisector::{klein_bisector, power_bisector, site_to_power, AffineLine, PowerSite};
pub use error::{Error, Result};
pub use hquery::{circumcenter2, circumcenter3, nearest_neighbor, smallest_enclosing_ball};
pub use hvoronoi::{
    build_hyperbolic_voronoi, build_weighted_voronoi, delaunay_complex, hyperbolic_delaunay,
    map_point, poincare_geodesic, render_chord, render_scene, CellEdge, DelaunayComplex,
    GeodesicArc, HyperbolicVoronoiDiagram, Model, Primitive, SceneEdge, SceneModel, UnknownModel,
    VoronoiEdge,
};
pub use hypgeom::{
    disk_to_halfplane, halfplane_to_disk, klein_distance, klein_to_poincare, poincare_distance,
    poincare_to_klein, HalfPlanePoint, HyperbolicBall, KleinPoint, PoincarePoint,
};
pub use mobius::{recenter_sites, transform_sites, MobiusTransform};
pub use powerdiag::{
    build_power_diagram, locate_cell, regular_triangulation, DiagramEdge, EdgeKind, PowerDiagram,
    Triangulation,
};
pub use vector::Vec2;
