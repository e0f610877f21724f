use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rug::{Complex, Float};
use serde::Serialize;

use super::roots::polynomial_roots;
use super::univariate::{squarefree_decomposition, UniPoly};
use crate::error::{Error, Result};
use crate::poly::int_to_float;

const MAX_SUBSETS: usize = 1 << 20;

/// p = content · ∏ f_i^{m_i} with each f_i primitive and irreducible over Q.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factorization {
    #[serde(serialize_with = "ser_rat")]
    pub content: BigRational,
    #[serde(serialize_with = "ser_factors")]
    pub factors: Vec<(UniPoly, u32)>,
}

fn ser_rat<S: serde::Serializer>(c: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&c.to_string())
}

fn ser_factors<S: serde::Serializer>(f: &[(UniPoly, u32)], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(f.len()))?;
    for (p, m) in f {
        let coeffs: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
        seq.serialize_element(&serde_json::json!({ "coefficients": coeffs, "multiplicity": m }))?;
    }
    seq.end()
}

impl Factorization {
    pub fn product(&self) -> UniPoly {
        self.factors
            .iter()
            .fold(UniPoly::new(vec![self.content.clone()]), |acc, (f, m)| acc.mul(&f.pow(*m)))
    }

    pub fn irreducible_factors(&self) -> impl Iterator<Item = &UniPoly> {
        self.factors.iter().map(|(f, _)| f)
    }
}

/// Factors a nonzero polynomial over Q. Candidate factors come from products
/// of numerically computed roots; each is confirmed by exact division and the
/// final product is checked against the input.
pub fn factor_univariate(p: &UniPoly) -> Result<Factorization> {
    if p.is_zero() {
        return Err(Error::InvalidConfig("cannot factor the zero polynomial".into()));
    }
    let prim = p.primitive();
    let content = p.lc() / prim.lc();
    let mut factors = Vec::new();
    let mut rest = prim.clone();
    // powers of x first
    let zeros = rest.coeffs().iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        factors.push((UniPoly::x(), zeros as u32));
        rest = UniPoly::new(rest.coeffs()[zeros..].to_vec());
    }
    for (part, mult) in squarefree_decomposition(&rest) {
        for f in split_squarefree(&part)? {
            factors.push((f, mult));
        }
    }
    factors.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| cmp_coeffs(&a.0, &b.0)).then(a.1.cmp(&b.1)));
    let out = Factorization { content, factors };
    if out.product() != *p {
        return Err(Error::FactorizationUnverified);
    }
    Ok(out)
}

fn cmp_coeffs(a: &UniPoly, b: &UniPoly) -> std::cmp::Ordering {
    a.coeffs().iter().rev().cmp(b.coeffs().iter().rev())
}

fn split_squarefree(a: &UniPoly) -> Result<Vec<UniPoly>> {
    let a = a.primitive();
    if a.degree() <= 1 {
        return Ok(vec![a]);
    }
    let lc = a.lc().to_integer();
    let mut prec = 256u32;
    let roots = loop {
        let roots = polynomial_roots(&a, prec)?;
        let need = bound_bits(&lc, &roots) + 128;
        if need <= prec {
            break roots;
        }
        prec = need;
    };
    let orbits = conjugation_orbits(&roots);
    let mut remaining: Vec<usize> = (0..orbits.len()).collect();
    let mut rest = a.clone();
    let mut found = Vec::new();
    let mut budget = MAX_SUBSETS;
    'outer: loop {
        let total: usize = remaining.iter().map(|&o| orbits[o].len()).sum();
        for size in 1..=remaining.len() {
            let mut chosen = Vec::new();
            if let Some(sel) =
                search(&orbits, &remaining, 0, size, total, &mut chosen, &roots, &rest, prec, &mut budget)?
            {
                let (f, q) = sel.1;
                found.push(f);
                rest = q;
                remaining.retain(|o| !sel.0.contains(o));
                if remaining.is_empty() {
                    break 'outer;
                }
                continue 'outer;
            }
        }
        return Err(Error::FactorizationUnverified);
    }
    Ok(found)
}

type Found = (Vec<usize>, (UniPoly, UniPoly));

#[allow(clippy::too_many_arguments)]
fn search(
    orbits: &[Vec<usize>],
    remaining: &[usize],
    start: usize,
    size: usize,
    total: usize,
    chosen: &mut Vec<usize>,
    roots: &[Complex],
    rest: &UniPoly,
    prec: u32,
    budget: &mut usize,
) -> Result<Option<Found>> {
    if chosen.len() == size {
        let deg: usize = chosen.iter().map(|&o| orbits[o].len()).sum();
        if deg * 2 > total && deg != total {
            return Ok(None);
        }
        if *budget == 0 {
            return Err(Error::FactorizationUnverified);
        }
        *budget -= 1;
        let idx: Vec<usize> = chosen.iter().flat_map(|&o| orbits[o].iter().copied()).collect();
        if let Some(f) = candidate(&idx, roots, rest, prec) {
            let (q, r) = rest.divrem(&f);
            if r.is_zero() && q.is_integral() {
                return Ok(Some((chosen.clone(), (f, q))));
            }
        }
        return Ok(None);
    }
    for k in start..remaining.len() {
        chosen.push(remaining[k]);
        let res = search(orbits, remaining, k + 1, size, total, chosen, roots, rest, prec, budget)?;
        chosen.pop();
        if res.is_some() {
            return Ok(res);
        }
    }
    Ok(None)
}

/// lc(rest)·∏(x − r) rounded to integers, if every coefficient is close to one.
fn candidate(idx: &[usize], roots: &[Complex], rest: &UniPoly, prec: u32) -> Option<UniPoly> {
    let lc = int_to_float(&rest.lc().to_integer(), prec);
    let mut c: Vec<Complex> = vec![Complex::with_val(prec, (lc, 0))];
    for &i in idx {
        let mut next = vec![Complex::new(prec); c.len() + 1];
        for (k, ck) in c.iter().enumerate() {
            next[k + 1] += ck;
            next[k] -= Complex::with_val(prec, ck * &roots[i]);
        }
        c = next;
    }
    c.reverse();
    let tol = Float::with_val(prec, 1e-12);
    let mut ints = Vec::with_capacity(c.len());
    for z in c.iter().rev() {
        if Float::with_val(prec, z.imag().abs_ref()) > tol {
            return None;
        }
        let re = z.real();
        let rounded = Float::with_val(prec, re.round_ref());
        if Float::with_val(prec, re - &rounded).abs() > tol {
            return None;
        }
        ints.push(rounded.to_integer()?);
    }
    // ints are from the constant term upwards after the double reversal
    let coeffs: Vec<BigInt> =
        ints.into_iter().map(|i| BigInt::parse_bytes(i.to_string().as_bytes(), 10).unwrap()).collect();
    let f = UniPoly::from_ints(&coeffs).primitive();
    (f.degree() == idx.len()).then_some(f)
}

/// Bits needed to resolve coefficients of lc·∏(x − r).
fn bound_bits(lc: &BigInt, roots: &[Complex]) -> u32 {
    let mut b = lc.abs().bits() as f64;
    for r in roots {
        b += (1.0 + Float::with_val(53, r.abs_ref()).to_f64()).log2();
    }
    b.ceil() as u32
}

/// Groups roots into complex-conjugate pairs and real singletons.
fn conjugation_orbits(roots: &[Complex]) -> Vec<Vec<usize>> {
    let mut used = vec![false; roots.len()];
    let mut out = Vec::new();
    let tol = 1e-20;
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let (re, im) = (roots[i].real().to_f64(), roots[i].imag().to_f64());
        if im.abs() < tol {
            out.push(vec![i]);
            continue;
        }
        let partner = (0..roots.len())
            .filter(|&j| !used[j])
            .min_by(|&a, &b| {
                let da = (roots[a].real().to_f64() - re).abs() + (roots[a].imag().to_f64() + im).abs();
                let db = (roots[b].real().to_f64() - re).abs() + (roots[b].imag().to_f64() + im).abs();
                da.total_cmp(&db)
            });
        match partner {
            Some(j) => {
                used[j] = true;
                out.push(vec![i, j]);
            }
            None => out.push(vec![i]),
        }
    }
    out
}

#[allow(dead_code)]
fn is_one(p: &UniPoly) -> bool {
    p.degree() == 0 && p.lc().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn show(f: &Factorization) -> Vec<(String, u32)> {
        f.factors.iter().map(|(p, m)| (p.to_string(), *m)).collect()
    }

    #[test]
    fn cyclotomic() {
        let f = factor_univariate(&UniPoly::from_i64(&[-1, 0, 0, 0, 1])).unwrap();
        assert_eq!(
            show(&f),
            vec![("x - 1".into(), 1), ("x + 1".into(), 1), ("x^2 + 1".into(), 1)]
        );
    }

    #[test]
    fn irreducible_quadratic() {
        let f = factor_univariate(&UniPoly::from_i64(&[1, -1, 1])).unwrap();
        assert_eq!(show(&f), vec![("x^2 - x + 1".into(), 1)]);
    }

    #[test]
    fn quartic_product_with_content() {
        let a = UniPoly::from_i64(&[-1, -3, -2, 0, 1]);
        let b = UniPoly::from_i64(&[-1, 1, 0, 0, 1]);
        let c = UniPoly::from_i64(&[3, 2]);
        let p = a.mul(&b).mul(&c.pow(2)).mul(&UniPoly::x()).scale(&BigRational::new(6.into(), 5.into()));
        let f = factor_univariate(&p).unwrap();
        assert_eq!(f.product(), p);
        let names: Vec<String> = f.irreducible_factors().map(|p| p.to_string()).collect();
        assert!(names.contains(&"x^4 - 2*x^2 - 3*x - 1".to_string()));
        assert!(names.contains(&"x^4 + x - 1".to_string()));
        assert_eq!(f.content, BigRational::new(6.into(), 5.into()));
    }
}
