//! Exact evaluation and decision procedures for threshold-measure
//! first-order logics over finite probability models.

pub mod corpus;
pub mod rat;
pub mod decide;
pub mod encode;
pub mod lp;
pub mod model;
pub mod semantics;
pub mod syntax;
