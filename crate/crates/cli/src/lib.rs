//! Front end for the `sullivan` engine: the declaration DSL
//! ([`dsl`]) and the analysis commands ([`run`]).

pub mod dsl;
pub mod run;
