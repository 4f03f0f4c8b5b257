pub mod batch;
pub mod geometry;
pub mod global;
pub mod kernel;
pub mod local;
pub mod probe;
pub mod reproduce;
