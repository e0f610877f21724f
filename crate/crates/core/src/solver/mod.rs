mod factor;
mod groebner;
mod linalg;
mod numeric;
mod roots;
mod univariate;

pub use factor::{factor_univariate, Factorization};
pub use groebner::{
    buchberger, eliminate, lex_eliminant, normal_form, GroebnerBasis, GroebnerConfig, DEFAULT_MAX_PAIRS,
    DEFAULT_MAX_VARS,
};
pub use linalg::{determinant, solve_columns};
pub use numeric::{
    decompose, solve_numeric, AlgebraicSolution, Component, ComplexValue, Decomposition, SolveConfig,
};
pub use roots::polynomial_roots;
pub use univariate::{squarefree_decomposition, UniPoly};
