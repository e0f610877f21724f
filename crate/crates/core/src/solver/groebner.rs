use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::linalg::solve_columns;
use super::univariate::UniPoly;
use crate::error::{Error, Result};
use crate::poly::{self, Monomial, Poly, TermOrder};

pub const DEFAULT_MAX_VARS: usize = 12;
pub const DEFAULT_MAX_PAIRS: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroebnerConfig {
    pub max_vars: usize,
    pub max_pairs: usize,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        GroebnerConfig { max_vars: DEFAULT_MAX_VARS, max_pairs: DEFAULT_MAX_PAIRS }
    }
}

/// Reduced Gröbner basis: monic generators sorted by ascending leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    nvars: usize,
    order: TermOrder,
    polys: Vec<Poly>,
}

impl GroebnerBasis {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> TermOrder {
        self.order
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    /// True when the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].is_constant()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn reduce(&self, f: &Poly) -> Poly {
        normal_form(&f.with_order(self.order), &self.polys)
    }

    pub fn contains(&self, f: &Poly) -> bool {
        self.reduce(f).is_zero()
    }

    fn leading(&self) -> Vec<&Monomial> {
        self.polys.iter().filter_map(|p| p.leading_monomial()).collect()
    }

    /// Standard monomials, or None if infinitely many.
    pub fn standard_monomials(&self) -> Option<Vec<Monomial>> {
        if self.is_unit() {
            return Some(Vec::new());
        }
        let lms = self.leading();
        let mut bounds = vec![0u32; self.nvars];
        for (i, b) in bounds.iter_mut().enumerate() {
            *b = lms
                .iter()
                .filter(|m| m.iter().enumerate().all(|(j, &e)| (j == i) == (e > 0)))
                .map(|m| m[i])
                .min()?;
        }
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.nvars];
        collect_standard(&lms, &bounds, 0, &mut cur, &mut out);
        out.sort_by(|a, b| self.order.cmp(a, b));
        Some(out)
    }

    /// Vector-space dimension of the quotient ring, None when positive-dimensional.
    pub fn zero_dim_degree(&self) -> Option<usize> {
        self.standard_monomials().map(|s| s.len())
    }

    /// Minimal polynomial of multiplication by `f` on the quotient ring.
    pub fn minimal_polynomial(&self, f: &Poly) -> Result<UniPoly> {
        let basis = self.standard_monomials().ok_or(Error::NotZeroDimensional)?;
        if basis.is_empty() {
            return Ok(UniPoly::one());
        }
        let coords = |p: &Poly| -> Vec<BigRational> {
            let mut v = vec![BigRational::zero(); basis.len()];
            for (m, c) in p.terms() {
                let k = basis.iter().position(|b| b == m).expect("normal form is standard");
                v[k] = c.clone();
            }
            v
        };
        let f = self.reduce(f);
        let mut power = self.reduce(&Poly::one(self.nvars, self.order));
        let mut columns = vec![coords(&power)];
        loop {
            power = self.reduce(&power.mul(&f));
            let v = coords(&power);
            if let Some(a) = solve_columns(&columns, &v) {
                let mut c: Vec<BigRational> = a.into_iter().map(|x| -x).collect();
                c.push(BigRational::from_integer(1.into()));
                return Ok(UniPoly::new(c));
            }
            columns.push(v);
        }
    }

    /// Minimal polynomial of the variable `var`.
    pub fn eliminant(&self, var: usize) -> Result<UniPoly> {
        self.minimal_polynomial(&Poly::var(self.nvars, self.order, var))
    }
}

fn collect_standard(
    lms: &[&Monomial],
    bounds: &[u32],
    i: usize,
    cur: &mut Vec<u32>,
    out: &mut Vec<Monomial>,
) {
    if i == bounds.len() {
        out.push(cur.clone());
        return;
    }
    for e in 0..bounds[i] {
        cur[i] = e;
        // divisibility is monotone, so a divisible prefix ends this branch
        let mut probe = cur.clone();
        for x in probe.iter_mut().skip(i + 1) {
            *x = 0;
        }
        if lms.iter().any(|m| poly::divides(m, &probe)) {
            break;
        }
        collect_standard(lms, bounds, i + 1, cur, out);
    }
    cur[i] = 0;
}

/// Full reduction of `f` modulo `g` (all terms, not just the leading one).
pub fn normal_form(f: &Poly, g: &[Poly]) -> Poly {
    let mut p = f.clone();
    let mut r = Poly::zero(f.nvars(), f.order());
    while let Some((m, c)) = p.pop_lead() {
        match g.iter().find(|h| h.leading_monomial().is_some_and(|lm| poly::divides(lm, &m))) {
            Some(h) => {
                let lm = h.leading_monomial().unwrap();
                let q = poly::quotient(&m, lm);
                let k = &c / h.leading_coeff().unwrap();
                let mut tail = h.clone();
                tail.pop_lead();
                p = p.sub(&tail.mul_term(&q, &k));
            }
            None => r.push_lower(m, c),
        }
    }
    r
}

fn s_polynomial(a: &Poly, b: &Poly) -> Poly {
    let (la, lb) = (a.leading_monomial().unwrap(), b.leading_monomial().unwrap());
    let l = poly::lcm(la, lb);
    let ca = a.leading_coeff().unwrap().recip();
    let cb = b.leading_coeff().unwrap().recip();
    a.mul_term(&poly::quotient(&l, la), &ca).sub(&b.mul_term(&poly::quotient(&l, lb), &cb))
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

/// Buchberger's algorithm with the sugar selection strategy and the product
/// and chain criteria; returns the reduced basis.
pub fn buchberger(
    nvars: usize,
    generators: &[Poly],
    order: TermOrder,
    config: &GroebnerConfig,
) -> Result<GroebnerBasis> {
    if nvars > config.max_vars {
        return Err(Error::TooManyVariables { vars: nvars, cap: config.max_vars });
    }
    let unit = || GroebnerBasis { nvars, order, polys: vec![Poly::one(nvars, order)] };
    let mut basis: Vec<Poly> = Vec::new();
    let mut sugar: Vec<u32> = Vec::new();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();

    let mut gens: Vec<Poly> = generators
        .iter()
        .map(|g| g.with_order(order))
        .filter(|g| !g.is_zero())
        .collect();
    gens.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    for g in gens {
        let r = normal_form(&g, &basis);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(unit());
        }
        let k = basis.len();
        pending.extend((0..k).map(|i| (i, k)));
        sugar.push(g.total_degree());
        basis.push(r.make_monic());
    }

    let mut processed = 0usize;
    while !pending.is_empty() {
        processed += 1;
        if processed > config.max_pairs {
            return Err(Error::BudgetExceeded { pairs: config.max_pairs });
        }
        let &(i, j) = pending
            .iter()
            .min_by(|&&(a, b), &&(c, d)| {
                let l1 = poly::lcm(basis[a].leading_monomial().unwrap(), basis[b].leading_monomial().unwrap());
                let l2 = poly::lcm(basis[c].leading_monomial().unwrap(), basis[d].leading_monomial().unwrap());
                pair_sugar(&basis, &sugar, a, b)
                    .cmp(&pair_sugar(&basis, &sugar, c, d))
                    .then_with(|| order.cmp(&l1, &l2))
                    .then_with(|| (a, b).cmp(&(c, d)))
            })
            .unwrap();
        pending.remove(&(i, j));
        let (li, lj) = (basis[i].leading_monomial().unwrap(), basis[j].leading_monomial().unwrap());
        if coprime(li, lj) {
            continue;
        }
        let l = poly::lcm(li, lj);
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && poly::divides(basis[k].leading_monomial().unwrap(), &l)
                && !pending.contains(&key(i, k))
                && !pending.contains(&key(j, k))
        });
        if chain {
            continue;
        }
        let s_sugar = pair_sugar(&basis, &sugar, i, j);
        let r = normal_form(&s_polynomial(&basis[i], &basis[j]), &basis);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(unit());
        }
        let k = basis.len();
        pending.extend((0..k).map(|i| (i, k)));
        sugar.push(s_sugar.max(r.total_degree()));
        basis.push(r.make_monic());
    }
    Ok(GroebnerBasis { nvars, order, polys: interreduce(basis, order) })
}

fn pair_sugar(basis: &[Poly], sugar: &[u32], i: usize, j: usize) -> u32 {
    let (li, lj) = (basis[i].leading_monomial().unwrap(), basis[j].leading_monomial().unwrap());
    let l = poly::lcm(li, lj);
    (sugar[i] + poly::degree(&l) - poly::degree(li)).max(sugar[j] + poly::degree(&l) - poly::degree(lj))
}

fn interreduce(basis: Vec<Poly>, order: TermOrder) -> Vec<Poly> {
    let mut minimal: Vec<Poly> = Vec::new();
    for (i, p) in basis.iter().enumerate() {
        let lm = p.leading_monomial().unwrap();
        let redundant = basis.iter().enumerate().any(|(j, q)| {
            let lq = q.leading_monomial().unwrap();
            j != i && poly::divides(lq, lm) && (lq != lm || j < i)
        });
        if !redundant {
            minimal.push(p.clone());
        }
    }
    let mut out: Vec<Poly> = (0..minimal.len())
        .map(|i| {
            let others: Vec<Poly> =
                minimal.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| q.clone()).collect();
            normal_form(&minimal[i], &others).make_monic()
        })
        .collect();
    out.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    out
}

/// Elimination ideal in the kept variables: a lex basis with every other
/// variable ordered above the kept ones. Results are expressed in the
/// original variable indexing, with lex order restricted to `keep`.
pub fn eliminate(
    nvars: usize,
    generators: &[Poly],
    keep: &[usize],
    config: &GroebnerConfig,
) -> Result<Vec<Poly>> {
    let mut perm: Vec<usize> = (0..nvars).filter(|v| !keep.contains(v)).collect();
    let dropped = perm.len();
    perm.extend(keep.iter().copied());
    // perm[new] = old
    let mut to_new = vec![None; nvars];
    for (new, &old) in perm.iter().enumerate() {
        to_new[old] = Some(new);
    }
    let mapped: Vec<Poly> =
        generators.iter().map(|g| g.with_order(TermOrder::Lex).remap(nvars, &to_new)).collect();
    let gb = buchberger(nvars, &mapped, TermOrder::Lex, config)?;
    let back: Vec<Option<usize>> = perm.iter().map(|&old| Some(old)).collect();
    Ok(gb
        .polys
        .iter()
        .filter(|p| (0..dropped).all(|v| !p.uses_var(v)))
        .map(|p| p.remap(nvars, &back))
        .collect())
}

/// Univariate eliminant of `var` via lex elimination (an independent route
/// to `GroebnerBasis::eliminant`).
pub fn lex_eliminant(nvars: usize, generators: &[Poly], var: usize, config: &GroebnerConfig) -> Result<UniPoly> {
    let polys = eliminate(nvars, generators, &[var], config)?;
    match polys.as_slice() {
        [] => Err(Error::NotZeroDimensional),
        [p] => Ok(UniPoly::from_poly(p, var).expect("eliminant is univariate").primitive()),
        _ => unreachable!("univariate ideals are principal"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(nvars: usize, terms: &[(&[u32], i64)]) -> Poly {
        Poly::from_int_terms(nvars, TermOrder::Grevlex, terms.iter().map(|(m, c)| (m.to_vec(), *c)))
    }

    fn names(k: usize) -> Vec<String> {
        ["x", "y", "z", "w"][..k].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn principal_is_basis() {
        let f = p(1, &[(&[2], 1), (&[1], -1), (&[0], -1)]);
        let gb = buchberger(1, std::slice::from_ref(&f), TermOrder::Grevlex, &Default::default()).unwrap();
        assert_eq!(gb.polys(), &[f]);
        assert_eq!(gb.zero_dim_degree(), Some(2));
    }

    #[test]
    fn unit_and_curve() {
        let gb = buchberger(1, &[p(1, &[(&[0], 3)])], TermOrder::Grevlex, &Default::default()).unwrap();
        assert!(gb.is_unit());
        assert_eq!(gb.zero_dim_degree(), Some(0));
        let curve = p(2, &[(&[1, 1], 1), (&[0, 0], -1)]);
        let gb = buchberger(2, &[curve], TermOrder::Grevlex, &Default::default()).unwrap();
        assert_eq!(gb.zero_dim_degree(), None);
    }

    #[test]
    fn eliminate_substitution() {
        let gens = [p(2, &[(&[1, 1], 1), (&[0, 0], -1)]), p(2, &[(&[0, 1], 1), (&[0, 0], -2)])];
        let out = eliminate(2, &gens, &[0], &Default::default()).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].primitive().display(&names(2)), "2*x - 1");
    }

    #[test]
    fn cyclic_three() {
        // x+y+z, xy+yz+zx, xyz-1: quotient of dimension 6
        let gens = [
            p(3, &[(&[1, 0, 0], 1), (&[0, 1, 0], 1), (&[0, 0, 1], 1)]),
            p(3, &[(&[1, 1, 0], 1), (&[0, 1, 1], 1), (&[1, 0, 1], 1)]),
            p(3, &[(&[1, 1, 1], 1), (&[0, 0, 0], -1)]),
        ];
        for order in [TermOrder::Grevlex, TermOrder::Lex] {
            let gb = buchberger(3, &gens, order, &Default::default()).unwrap();
            assert_eq!(gb.zero_dim_degree(), Some(6));
            for g in &gens {
                assert!(gb.contains(g));
            }
        }
        let gb = buchberger(3, &gens, TermOrder::Grevlex, &Default::default()).unwrap();
        let e = gb.eliminant(2).unwrap();
        assert_eq!(e.primitive().to_string(), "x^3 - 1");
        assert_eq!(lex_eliminant(3, &gens, 2, &Default::default()).unwrap().to_string(), "x^3 - 1");
    }

    #[test]
    fn variable_cap() {
        let gens = [Poly::var(13, TermOrder::Grevlex, 0)];
        assert!(matches!(
            buchberger(13, &gens, TermOrder::Grevlex, &Default::default()),
            Err(Error::TooManyVariables { vars: 13, cap: 12 })
        ));
    }
}
