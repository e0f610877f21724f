use num_rational::BigRational;
use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

use super::factor::{factor_univariate, Factorization};
use super::groebner::{buchberger, GroebnerBasis, GroebnerConfig};
use super::linalg::solve_columns;
use super::roots::polynomial_roots;
use super::univariate::UniPoly;
use crate::error::{Error, Result};
use crate::poly::{Poly, TermOrder};

pub const DEFAULT_PRECISION_DIGITS: u32 = 30;
pub const DEFAULT_RESIDUAL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub precision_digits: u32,
    pub residual_tol: f64,
    pub groebner: GroebnerConfig,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            precision_digits: DEFAULT_PRECISION_DIGITS,
            residual_tol: DEFAULT_RESIDUAL,
            groebner: GroebnerConfig::default(),
        }
    }
}

impl SolveConfig {
    pub fn bits(&self) -> u32 {
        (self.precision_digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 64
    }
}

/// Decimal rendering of a complex number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: String,
    pub im: String,
}

impl ComplexValue {
    pub fn new(z: &Complex, digits: u32) -> Self {
        let show = |f: &Float| {
            if f.is_zero() {
                "0".to_string()
            } else {
                format!("{:.*}", digits as usize, f)
            }
        };
        ComplexValue { re: show(z.real()), im: show(z.imag()) }
    }
}

#[derive(Clone, Debug)]
pub struct AlgebraicSolution {
    pub values: Vec<Complex>,
    /// Largest generator modulus at the point.
    pub residual: f64,
    /// Smallest coordinate modulus.
    pub min_abs: f64,
    pub component: usize,
}

impl AlgebraicSolution {
    pub fn to_f64(&self) -> Vec<(f64, f64)> {
        self.values.iter().map(|z| (z.real().to_f64(), z.imag().to_f64())).collect()
    }
}

/// One Galois orbit of points, i.e. one irreducible factor of the
/// separating element's minimal polynomial.
#[derive(Clone, Debug)]
pub struct Component {
    pub index: usize,
    pub degree: usize,
    /// Coefficients of the separating linear form.
    pub separating: Vec<i64>,
    pub separating_factor: UniPoly,
    /// Variable whose eliminant factor generates the component's field, if any.
    pub field_variable: Option<String>,
    pub field: UniPoly,
    /// Irreducible eliminant factor of each variable on this component.
    pub variable_factors: Vec<UniPoly>,
    pub solutions: Vec<AlgebraicSolution>,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub variables: Vec<String>,
    pub empty: bool,
    pub positive_dimensional: bool,
    /// Quotient dimension of the input ideal.
    pub degree: Option<usize>,
    /// Number of distinct points.
    pub points: usize,
    /// Per-variable eliminant and its factorization.
    pub eliminants: Vec<(UniPoly, Factorization)>,
    pub components: Vec<Component>,
}

impl Decomposition {
    pub fn solutions(&self) -> impl Iterator<Item = &AlgebraicSolution> {
        self.components.iter().flat_map(|c| c.solutions.iter())
    }

    /// Every irreducible factor appearing in any variable eliminant.
    pub fn all_factors(&self) -> Vec<UniPoly> {
        let mut out: Vec<UniPoly> = Vec::new();
        for (_, f) in &self.eliminants {
            for p in f.irreducible_factors() {
                if !out.contains(p) {
                    out.push(p.clone());
                }
            }
        }
        out
    }
}

/// Decomposes a zero-dimensional system into Galois orbits of points with
/// high-precision coordinates. Positive-dimensional systems are reported
/// without components.
pub fn decompose(nvars: usize, generators: &[Poly], names: &[String], cfg: &SolveConfig) -> Result<Decomposition> {
    let gb = buchberger(nvars, generators, TermOrder::Grevlex, &cfg.groebner)?;
    let mut out = Decomposition {
        variables: names.to_vec(),
        empty: gb.is_unit(),
        positive_dimensional: false,
        degree: gb.zero_dim_degree(),
        points: 0,
        eliminants: Vec::new(),
        components: Vec::new(),
    };
    if out.empty {
        return Ok(out);
    }
    if out.degree.is_none() {
        out.positive_dimensional = true;
        return Ok(out);
    }
    let mut radical_gens = generators.to_vec();
    let mut radical = true;
    for v in 0..nvars {
        let e = gb.eliminant(v)?.primitive();
        let f = factor_univariate(&e)?;
        if f.factors.iter().any(|(_, m)| *m > 1) {
            radical = false;
            radical_gens.push(e.squarefree_part().to_poly(nvars, v, TermOrder::Grevlex));
        }
        out.eliminants.push((e, f));
    }
    let gb = if radical { gb } else { buchberger(nvars, &radical_gens, TermOrder::Grevlex, &cfg.groebner)? };
    let points = gb.zero_dim_degree().ok_or(Error::NotZeroDimensional)?;
    out.points = points;
    let (weights, u, mu) = separating_element(&gb, points)?;
    let shapes = shape_polynomials(&gb, &u, points)?;
    let bits = cfg.bits();
    let mu_factors = factor_univariate(&mu)?;
    for (index, (factor, _)) in mu_factors.factors.iter().enumerate() {
        let roots = polynomial_roots(factor, bits + 64)?;
        let mut solutions = Vec::new();
        for theta in &roots {
            let values: Vec<Complex> = shapes.iter().map(|g| Complex::with_val(bits, g.eval_complex(theta))).collect();
            let residual = generators
                .iter()
                .map(|g| g.eval_complex(&values, bits).abs().real().to_f64())
                .fold(0.0, f64::max);
            if residual.is_nan() || residual >= cfg.residual_tol {
                return Err(Error::PrecisionNotReached { residual });
            }
            let min_abs = values.iter().map(|z| z.clone().abs().real().to_f64()).fold(f64::INFINITY, f64::min);
            solutions.push(AlgebraicSolution { values, residual, min_abs, component: index });
        }
        let variable_factors: Vec<UniPoly> = (0..nvars)
            .map(|v| {
                out.eliminants[v]
                    .1
                    .irreducible_factors()
                    .min_by(|a, b| {
                        orbit_error(a, &solutions, v).total_cmp(&orbit_error(b, &solutions, v))
                    })
                    .cloned()
                    .expect("eliminant is non-constant")
            })
            .collect();
        let field_var = variable_factors.iter().position(|f| f.degree() == factor.degree());
        out.components.push(Component {
            index,
            degree: factor.degree(),
            separating: weights.clone(),
            separating_factor: factor.clone(),
            field_variable: field_var.map(|v| names[v].clone()),
            field: field_var.map_or_else(|| factor.clone(), |v| variable_factors[v].clone()),
            variable_factors,
            solutions,
        });
    }
    Ok(out)
}

fn orbit_error(f: &UniPoly, sols: &[AlgebraicSolution], v: usize) -> f64 {
    sols.iter().map(|s| f.eval_complex(&s.values[v]).abs().real().to_f64()).fold(0.0, f64::max)
}

/// Linear form whose minimal polynomial has degree equal to the number of points.
fn separating_element(gb: &GroebnerBasis, points: usize) -> Result<(Vec<i64>, Poly, UniPoly)> {
    let n = gb.nvars();
    let mut candidates: Vec<Vec<i64>> = (0..n)
        .rev()
        .map(|i| {
            let mut w = vec![0; n];
            w[i] = 1;
            w
        })
        .collect();
    for c in 2..40i64 {
        candidates.push((0..n).map(|i| c.pow(i as u32) % 1009 + 1).collect());
    }
    for w in candidates {
        let u = Poly::from_terms(
            n,
            gb.order(),
            w.iter().enumerate().map(|(i, &c)| {
                let mut m = vec![0; n];
                m[i] = 1;
                (m, BigRational::from_integer(c.into()))
            }),
        );
        let mu = gb.minimal_polynomial(&u)?;
        if mu.degree() == points {
            return Ok((w, u, mu.primitive()));
        }
    }
    Err(Error::PrecisionNotReached { residual: f64::INFINITY })
}

/// Each variable as a polynomial in the separating element modulo the ideal.
fn shape_polynomials(gb: &GroebnerBasis, u: &Poly, points: usize) -> Result<Vec<UniPoly>> {
    let basis = gb.standard_monomials().ok_or(Error::NotZeroDimensional)?;
    let coords = |p: &Poly| -> Vec<BigRational> {
        let mut v = vec![BigRational::from_integer(0.into()); basis.len()];
        for (m, c) in p.terms() {
            let k = basis.iter().position(|b| b == m).expect("normal form is standard");
            v[k] = c.clone();
        }
        v
    };
    let n = gb.nvars();
    let mut power = gb.reduce(&Poly::one(n, gb.order()));
    let mut columns = Vec::with_capacity(points);
    for _ in 0..points {
        columns.push(coords(&power));
        power = gb.reduce(&power.mul(u));
    }
    (0..n)
        .map(|v| {
            let x = gb.reduce(&Poly::var(n, gb.order(), v));
            solve_columns(&columns, &coords(&x)).map(UniPoly::new).ok_or(Error::NotZeroDimensional)
        })
        .collect()
}

/// All points of a zero-dimensional ideal given by a Gröbner basis.
pub fn solve_numeric(gb: &GroebnerBasis, precision_digits: u32) -> Result<Vec<AlgebraicSolution>> {
    if gb.zero_dim_degree().is_none() {
        return Err(Error::NotZeroDimensional);
    }
    let names: Vec<String> = (0..gb.nvars()).map(|i| format!("x{i}")).collect();
    let cfg = SolveConfig { precision_digits, ..Default::default() };
    let d = decompose(gb.nvars(), gb.polys(), &names, &cfg)?;
    Ok(d.components.into_iter().flat_map(|c| c.solutions).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(nvars: usize, terms: &[(&[u32], i64)]) -> Poly {
        Poly::from_int_terms(nvars, TermOrder::Grevlex, terms.iter().map(|(m, c)| (m.to_vec(), *c)))
    }

    #[test]
    fn eisenstein_roots() {
        let gb = buchberger(1, &[p(1, &[(&[2], 1), (&[1], -1), (&[0], 1)])], TermOrder::Grevlex, &Default::default())
            .unwrap();
        let sols = solve_numeric(&gb, 30).unwrap();
        assert_eq!(sols.len(), 2);
        let v: Vec<(f64, f64)> = sols.iter().map(|s| s.to_f64()[0]).collect();
        assert!((v[0].0 - 0.5).abs() < 1e-15 && (v[0].1 + 0.866_025_403_784_438_6).abs() < 1e-15);
        assert!((v[1].1 - 0.866_025_403_784_438_6).abs() < 1e-15);
    }

    #[test]
    fn non_radical_and_separating() {
        // four points (±1, ±1); no single coordinate separates them
        let gens = [
            p(2, &[(&[2, 0], 1), (&[0, 0], -1)]),
            p(2, &[(&[0, 2], 1), (&[0, 0], -1)]),
            p(2, &[(&[0, 0], 0)]),
        ];
        let names = vec!["x".to_string(), "y".to_string()];
        let d = decompose(2, &gens, &names, &SolveConfig::default()).unwrap();
        assert_eq!(d.points, 4);
        assert_eq!(d.solutions().count(), 4);
        let sq = [p(1, &[(&[2], 1), (&[1], -2), (&[0], 1)])];
        let d = decompose(1, &sq, &names[..1], &SolveConfig::default()).unwrap();
        assert_eq!(d.degree, Some(2));
        assert_eq!(d.points, 1);
    }
}
