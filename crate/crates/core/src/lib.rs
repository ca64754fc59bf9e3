//! Short paths through the doubly covered region of a covering of the plane
//! by closed unit discs.

pub mod bounds;
pub mod covering;
pub mod geom;
pub mod oracle;
pub mod pathgen;
pub mod subcover;
pub mod cli;
