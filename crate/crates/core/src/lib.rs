//! Simulation of oscillatory fractional-order systems with pseudo- and
//! meta-damping, GA fitting of equivalent second-order `(τ, ξ)` models, and a
//! small neural network that predicts those optima from the fractional order.

pub mod cli;
pub mod fosystems;
pub mod gafit;
pub mod neural;
pub mod numfmt;
pub mod reference;
pub mod refmodel;
pub mod reproduce;
pub mod specfun;
