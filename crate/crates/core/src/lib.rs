pub mod check;
pub mod cli;
pub mod engine;
pub mod lang;
pub mod model;
