pub mod deformation;
pub mod error;
pub mod exact;
pub mod graph;
pub mod ideal;
pub mod io;
pub mod monomial;
pub mod par;
pub mod parking;
pub mod resolution;
pub mod sandpile;
