#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod numerics;
pub mod spirals;
pub mod catalog;
pub mod sector;
pub mod boxcount;
pub mod slowfast;
pub mod cli;
