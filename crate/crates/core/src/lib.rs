//! Generalized Szász–Mirakjan–Durrmeyer operators `S_{n,j}`, `j` any integer.
//!
//! For `f` of exponential growth `|f(t)| <= K e^{At}` and `n > 2A`,
//!
//! ```text
//! (S_{n,j} f)(x) = f(0) sum_{k=0}^{j-1} s_{n,k}(x) + sum_{k>=j} s_{n,k}(x) n int_0^inf s_{n,k-j}(t) f(t) dt,
//! s_{n,k}(x) = (nx)^k / k! e^{-nx}.
//! ```
//!
//! `j = 0` gives the classical Szász–Mirakjan–Durrmeyer operators, `j = 1` the Phillips
//! (genuine) operators; for `j >= 1` constants and `x^j` are reproduced exactly.
//!
//! Modules:
//! * [`numerics`]: log-space basis, exact falling factorials, certified Poisson tails.
//! * [`moments`]: closed-form moments and central moments.
//! * [`diffop`]: exact polynomial calculus, `D_j^{2k}`, expansion coefficients.
//! * [`fexpr`]: expression parser/differentiator and [`FunctionSpec`].
//! * [`operator`]: numerical evaluation of `S_{n,j} f` and its derivatives.
//! * [`experiments`]: convergence, expansion-order and localization probes.
//! * [`cli`]: the `smd` command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod diffop;
pub mod error;
pub mod experiments;
pub mod fexpr;
pub mod moments;
pub mod numerics;
pub mod operator;
pub mod quadrature;
pub mod report;

pub use diffop::{ExpansionTerm, Polynomial};
pub use error::{Error, Result};
pub use fexpr::{Expr, FunctionSpec};
pub use moments::{CentralMomentSplit, OperatorParams};
pub use operator::{EvalResult, QuadratureConfig};
