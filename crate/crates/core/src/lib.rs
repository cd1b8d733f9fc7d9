#![allow(clippy::result_large_err)]

pub mod chain;
pub mod examples;
pub mod family;
pub mod sample;
pub mod signature;
pub mod subst;
pub mod term;
pub mod verdict;
