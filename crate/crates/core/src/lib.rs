//! Finite relations, matrix categories over finite rigs, and bounded
//! checks of the structure that characterizes the category of relations.

pub mod bitmat;
pub mod checker;
pub mod cli;
pub mod corpus;
pub mod extraction;
pub mod matcat;
pub mod model;
pub mod rel;
pub mod rig;
mod text;
