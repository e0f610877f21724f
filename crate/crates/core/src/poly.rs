//! Sparse multivariate polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rug::Complex;
use serde::{Deserialize, Serialize};

pub type Monomial = Vec<u32>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TermOrder {
    Lex,
    #[default]
    Grevlex,
}

impl TermOrder {
    /// Compares monomials; variable 0 has the highest priority.
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            TermOrder::Lex => a.cmp(b),
            TermOrder::Grevlex => {
                let da: u64 = a.iter().map(|&x| x as u64).sum();
                let db: u64 = b.iter().map(|&x| x as u64).sum();
                da.cmp(&db).then_with(|| {
                    for i in (0..a.len()).rev() {
                        if a[i] != b[i] {
                            return b[i].cmp(&a[i]);
                        }
                    }
                    Ordering::Equal
                })
            }
        }
    }
}

impl FromStr for TermOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "lex" => Ok(TermOrder::Lex),
            "grevlex" => Ok(TermOrder::Grevlex),
            _ => Err(format!("unknown term order `{s}` (expected lex or grevlex)")),
        }
    }
}

impl fmt::Display for TermOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TermOrder::Lex => "lex",
            TermOrder::Grevlex => "grevlex",
        })
    }
}

pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn lcm(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(&x, &y)| x.max(y)).collect()
}

pub fn quotient(b: &[u32], a: &[u32]) -> Monomial {
    b.iter().zip(a).map(|(&y, &x)| y - x).collect()
}

pub fn degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

/// Polynomial whose terms are kept strictly decreasing in `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    order: TermOrder,
    terms: Vec<(Monomial, BigRational)>,
}

impl Poly {
    pub fn zero(nvars: usize, order: TermOrder) -> Self {
        Poly { nvars, order, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, order: TermOrder, c: BigRational) -> Self {
        Self::from_terms(nvars, order, vec![(vec![0; nvars], c)])
    }

    pub fn one(nvars: usize, order: TermOrder) -> Self {
        Self::constant(nvars, order, BigRational::one())
    }

    pub fn var(nvars: usize, order: TermOrder, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        Self::from_terms(nvars, order, vec![(m, BigRational::one())])
    }

    pub fn from_terms(
        nvars: usize,
        order: TermOrder,
        terms: impl IntoIterator<Item = (Monomial, BigRational)>,
    ) -> Self {
        let mut acc: HashMap<Monomial, BigRational> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.len(), nvars, "monomial arity");
            *acc.entry(m).or_insert_with(BigRational::zero) += c;
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Poly { nvars, order, terms }
    }

    pub fn from_int_terms(
        nvars: usize,
        order: TermOrder,
        terms: impl IntoIterator<Item = (Monomial, i64)>,
    ) -> Self {
        Self::from_terms(
            nvars,
            order,
            terms.into_iter().map(|(m, c)| (m, BigRational::from_integer(c.into()))),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> TermOrder {
        self.order
    }

    pub fn terms(&self) -> &[(Monomial, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.iter().all(|&e| e == 0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn with_order(&self, order: TermOrder) -> Self {
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Poly { nvars: self.nvars, order, terms }
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| degree(m)).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m[var]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m[var] > 0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.iter().map(|(m, _)| degree(m));
        match degs.next() {
            Some(d) => degs.all(|x| x == d),
            None => true,
        }
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        debug_assert_eq!(self.nvars, other.nvars);
        debug_assert_eq!(self.order, other.order);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                Ordering::Less
            } else if j == b.len() {
                Ordering::Greater
            } else {
                self.order.cmp(&a[i].0, &b[j].0)
            };
            match ord {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -b[j].1.clone() } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Poly { nvars: self.nvars, order: self.order, terms: out }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.merge(other, true)
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars, self.order);
        }
        Poly {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Multiplies by the term c·x^m; the order is preserved so no sort is needed.
    pub fn mul_term(&self, m: &[u32], c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars, self.order);
        }
        Poly {
            nvars: self.nvars,
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(x, d)| (x.iter().zip(m).map(|(a, b)| a + b).collect(), d * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut acc: HashMap<Monomial, BigRational> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                *acc.entry(m).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
        Poly::from_terms(self.nvars, self.order, acc)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one(self.nvars, self.order);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Removes and returns the leading term.
    pub(crate) fn pop_lead(&mut self) -> Option<(Monomial, BigRational)> {
        if self.terms.is_empty() {
            None
        } else {
            Some(self.terms.remove(0))
        }
    }

    /// Appends a term below every existing term; the caller guarantees the order.
    pub(crate) fn push_lower(&mut self, m: Monomial, c: BigRational) {
        debug_assert!(self
            .terms
            .last()
            .is_none_or(|(l, _)| self.order.cmp(l, &m) == Ordering::Greater));
        self.terms.push((m, c));
    }

    pub fn make_monic(&self) -> Poly {
        match self.leading_coeff() {
            Some(c) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// Scales to coprime integer coefficients with positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut den = BigInt::one();
        for (_, c) in &self.terms {
            den = den.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(&(c.numer() * (&den / c.denom())));
        }
        let mut factor = BigRational::new(den, g);
        if self.terms[0].1.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    pub fn integer_terms(&self) -> Option<Vec<(Monomial, BigInt)>> {
        self.terms
            .iter()
            .map(|(m, c)| c.is_integer().then(|| (m.clone(), c.to_integer())))
            .collect()
    }

    /// Replaces variable `var` by the rational `value`.
    pub fn substitute(&self, var: usize, value: &BigRational) -> Poly {
        Poly::from_terms(
            self.nvars,
            self.order,
            self.terms.iter().map(|(m, c)| {
                let mut m2 = m.clone();
                let e = std::mem::take(&mut m2[var]);
                (m2, c * pow_rat(value, e))
            }),
        )
    }

    /// Moves variable i to `map[i]` in a ring with `nvars` variables; variables
    /// mapped to `None` must not occur.
    pub fn remap(&self, nvars: usize, map: &[Option<usize>]) -> Poly {
        Poly::from_terms(
            nvars,
            self.order,
            self.terms.iter().map(|(m, c)| {
                let mut m2 = vec![0; nvars];
                for (i, &e) in m.iter().enumerate() {
                    if e > 0 {
                        let j = map[i].expect("remapped variable occurs in polynomial");
                        m2[j] += e;
                    }
                }
                (m2, c.clone())
            }),
        )
    }

    pub fn eval_complex(&self, point: &[Complex], prec: u32) -> Complex {
        let mut acc = Complex::new(prec);
        for (m, c) in &self.terms {
            let mut t = Complex::with_val(prec, rat_to_float(c, prec));
            for (x, &e) in point.iter().zip(m) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_rational(&self, point: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                t *= pow_rat(x, e);
            }
            acc += t;
        }
        acc
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{e}", names[i]) })
                .collect();
            if vars.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&abs.to_string());
                    out.push('*');
                }
                out.push_str(&vars.join("*"));
            }
        }
        out
    }
}

pub fn pow_rat(x: &BigRational, e: u32) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..e {
        out *= x;
    }
    out
}

pub fn rat_to_float(c: &BigRational, prec: u32) -> rug::Float {
    let n = rug::Integer::from_str_radix(&c.numer().to_str_radix(16), 16).expect("integer");
    let d = rug::Integer::from_str_radix(&c.denom().to_str_radix(16), 16).expect("integer");
    rug::Float::with_val(prec, rug::Rational::from((n, d)))
}

pub fn int_to_float(c: &BigInt, prec: u32) -> rug::Float {
    let n = rug::Integer::from_str_radix(&c.to_str_radix(16), 16).expect("integer");
    rug::Float::with_val(prec, n)
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        vec!["x".into(), "y".into(), "z".into()]
    }

    #[test]
    fn orders() {
        let g = TermOrder::Grevlex;
        // x*z < y^2 in grevlex, x*z > y^2 in lex
        assert_eq!(g.cmp(&[1, 0, 1], &[0, 2, 0]), Ordering::Less);
        assert_eq!(TermOrder::Lex.cmp(&[1, 0, 1], &[0, 2, 0]), Ordering::Greater);
        assert_eq!(g.cmp(&[0, 0, 2], &[1, 1, 0]), Ordering::Less);
    }

    #[test]
    fn arithmetic_and_display() {
        let o = TermOrder::Grevlex;
        let x = Poly::var(3, o, 0);
        let y = Poly::var(3, o, 1);
        let p = x.add(&y).mul(&x.sub(&y));
        assert_eq!(p.display(&names()), "x^2 - y^2");
        assert!(p.is_homogeneous());
        let q = p.scale(&BigRational::new(3.into(), 2.into())).sub(&Poly::one(3, o));
        assert_eq!(q.display(&names()), "3/2*x^2 - 3/2*y^2 - 1");
        assert_eq!(q.primitive().display(&names()), "3*x^2 - 3*y^2 - 2");
        let s = p.substitute(1, &rat(2));
        assert_eq!(s.display(&names()), "x^2 - 4");
    }

    #[test]
    fn complex_eval() {
        let o = TermOrder::Lex;
        let p = Poly::from_int_terms(1, o, vec![(vec![2], 1), (vec![1], -1), (vec![0], 1)]);
        let root = Complex::with_val(200, (0.5, 3f64.sqrt() / 2.0));
        let v = p.eval_complex(&[root], 200);
        assert!(v.abs().real().to_f64() < 1e-15);
    }
}
