//! Ptolemy ideals: one variable per point class, one relation per
//! (simplex, α ∈ Δ_{n−2}), identification signs substituted in.

use std::collections::HashMap;

use serde::Serialize;

use crate::cohomology::ObstructionCocycle;
use crate::error::{Error, Result};
use crate::poly::{Poly, TermOrder};
use crate::triangulation::{PointClass, Quad, Triangulation};

pub const DUMMY_VAR: &str = "t";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PtolemyIdeal {
    pub n: u32,
    pub sigma: Vec<i8>,
    /// Variable names; the dummy variable, if any, is last.
    pub variables: Vec<String>,
    /// Point class of each non-dummy variable.
    pub classes: Vec<usize>,
    pub generators: Vec<Poly>,
    pub num_relations: usize,
    pub saturated: bool,
    /// Point classes fixed to 1 by reduction, with their names.
    pub fixed: Vec<(usize, String)>,
}

impl PtolemyIdeal {
    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn relations(&self) -> &[Poly] {
        &self.generators[..self.num_relations]
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for g in &self.generators {
            out.push_str(&g.display(&self.variables));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> IdealJson {
        IdealJson {
            n: self.n,
            sigma: self.sigma.clone(),
            variables: self.variables.clone(),
            saturated: self.saturated,
            fixed: self.fixed.iter().map(|(_, n)| n.clone()).collect(),
            generators: self
                .generators
                .iter()
                .map(|g| {
                    g.terms()
                        .iter()
                        .map(|(m, c)| TermJson { coeff: c.to_string(), exponents: m.clone() })
                        .collect()
                })
                .collect(),
            text: self.generators.iter().map(|g| g.display(&self.variables)).collect(),
        }
    }

    /// Same generators with a different term order.
    pub fn with_order(&self, order: TermOrder) -> Self {
        let mut out = self.clone();
        out.generators = self.generators.iter().map(|g| g.with_order(order)).collect();
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TermJson {
    pub coeff: String,
    pub exponents: Vec<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdealJson {
    pub n: u32,
    pub sigma: Vec<i8>,
    pub variables: Vec<String>,
    pub saturated: bool,
    pub fixed: Vec<String>,
    pub generators: Vec<Vec<TermJson>>,
    pub text: Vec<String>,
}

/// Point classes of level n, one per Ptolemy variable.
pub fn integral_points(tri: &Triangulation, n: u32) -> Vec<PointClass> {
    tri.point_classes(n)
}

/// α ∈ Δ_{n−2}(Z) in lexicographic order.
fn level_points(m: u32) -> Vec<Quad> {
    let mut out = Vec::new();
    for a in 0..=m {
        for b in 0..=m - a {
            for c in 0..=m - a - b {
                out.push([a, b, c, m - a - b - c]);
            }
        }
    }
    out
}

fn add(a: &Quad, b: [u32; 4]) -> Quad {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

pub fn generate_ptolemy_relations(
    tri: &Triangulation,
    n: u32,
    sigma: &ObstructionCocycle,
) -> Result<PtolemyIdeal> {
    if n < 2 {
        return Err(Error::InvalidConfig(format!("n must be at least 2 (got {n})")));
    }
    if n != 2 && !sigma.is_trivial() {
        return Err(Error::UnsupportedObstruction { n });
    }
    let classes = integral_points(tri, n);
    let mut lookup: HashMap<(usize, Quad), (usize, i64)> = HashMap::new();
    for (idx, class) in classes.iter().enumerate() {
        if class.sign_conflict {
            return Err(Error::InconsistentSigns(format!(
                "{} is identified with its own negative",
                class.name()
            )));
        }
        for inst in &class.instances {
            let sign = inst.sign.ok_or(Error::UnsupportedSigns { n })?;
            lookup.insert((inst.tet, inst.t), (idx, sign as i64));
        }
    }
    let nv = classes.len();
    let order = TermOrder::Grevlex;
    let product = |k: usize, a: Quad, b: Quad, coeff: i64| {
        let (ia, sa) = lookup[&(k, a)];
        let (ib, sb) = lookup[&(k, b)];
        let mut m = vec![0; nv];
        m[ia] += 1;
        m[ib] += 1;
        (m, coeff * sa * sb)
    };
    let mut generators = Vec::new();
    for k in 0..tri.num_tetrahedra() {
        let s = |i: usize| sigma.sign(k, i) as i64;
        for alpha in level_points(n - 2) {
            let terms = vec![
                product(k, add(&alpha, [1, 0, 0, 1]), add(&alpha, [0, 1, 1, 0]), s(0) * s(3)),
                product(k, add(&alpha, [1, 1, 0, 0]), add(&alpha, [0, 0, 1, 1]), s(0) * s(1)),
                product(k, add(&alpha, [1, 0, 1, 0]), add(&alpha, [0, 1, 0, 1]), -s(0) * s(2)),
            ];
            generators.push(Poly::from_int_terms(nv, order, terms));
        }
    }
    Ok(PtolemyIdeal {
        n,
        sigma: sigma.face_signs().to_vec(),
        variables: classes.iter().map(|c| c.name()).collect(),
        classes: (0..nv).collect(),
        num_relations: generators.len(),
        generators,
        saturated: false,
        fixed: Vec::new(),
    })
}

/// Appends a dummy variable t and the relation t·∏c − 1.
pub fn saturate(ideal: &PtolemyIdeal) -> PtolemyIdeal {
    if ideal.saturated {
        return ideal.clone();
    }
    let nv = ideal.nvars();
    let map: Vec<Option<usize>> = (0..nv).map(Some).collect();
    let mut generators: Vec<Poly> =
        ideal.generators.iter().map(|g| g.remap(nv + 1, &map)).collect();
    let order = generators.first().map(|g| g.order()).unwrap_or_default();
    let relation = Poly::from_int_terms(nv + 1, order, vec![(vec![1; nv + 1], 1), (vec![0; nv + 1], -1)]);
    generators.push(relation);
    let mut variables = ideal.variables.clone();
    variables.push(DUMMY_VAR.to_string());
    PtolemyIdeal { variables, generators, saturated: true, ..ideal.clone() }
}

/// The substitution c_e ↦ τ(e)·c_e carrying P^σ onto P^{σ·δτ}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableScaling {
    pub factors: Vec<i8>,
}

impl VariableScaling {
    pub fn apply(&self, p: &Poly) -> Poly {
        let mut out = p.clone();
        for (i, &f) in self.factors.iter().enumerate() {
            if f < 0 {
                let v = Poly::var(p.nvars(), p.order(), i).neg();
                out = compose_var(&out, i, &v);
            }
        }
        out
    }

    pub fn apply_ideal(&self, ideal: &PtolemyIdeal) -> Vec<Poly> {
        ideal.generators.iter().map(|g| self.apply(g)).collect()
    }

    pub fn compose(&self, other: &VariableScaling) -> VariableScaling {
        VariableScaling {
            factors: self.factors.iter().zip(&other.factors).map(|(a, b)| a * b).collect(),
        }
    }
}

fn compose_var(p: &Poly, var: usize, value: &Poly) -> Poly {
    let mut out = Poly::zero(p.nvars(), p.order());
    for (m, c) in p.terms() {
        let mut m2 = m.clone();
        let e = std::mem::take(&mut m2[var]);
        let term = Poly::from_terms(p.nvars(), p.order(), vec![(m2, c.clone())]);
        out = out.add(&term.mul(&value.pow(e)));
    }
    out
}

/// Builds the scaling for an edge-class sign assignment τ (n = 2). A dummy
/// variable, if present, is left alone: ∏c changes by ∏τ which only flips t.
pub fn apply_coboundary_isomorphism(ideal: &PtolemyIdeal, tau: &[i8]) -> Result<VariableScaling> {
    if ideal.n != 2 {
        return Err(Error::UnsupportedObstruction { n: ideal.n });
    }
    let nclass = ideal.classes.len();
    let mut factors = vec![1i8; ideal.nvars()];
    for (v, &class) in ideal.classes.iter().enumerate() {
        factors[v] = *tau.get(class).ok_or_else(|| {
            Error::InvalidCocycle(format!("τ needs a sign per edge class ({nclass} given)"))
        })?;
    }
    if ideal.saturated {
        let prod: i8 = ideal.classes.iter().map(|&c| tau[c]).product::<i8>()
            * ideal.fixed.iter().map(|&(c, _)| tau[c]).product::<i8>();
        *factors.last_mut().unwrap() = prod;
    }
    Ok(VariableScaling { factors })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{coboundary_adjust, enumerate_h2, DEFAULT_H2_CAP};
    use crate::fixtures;

    fn texts(ideal: &PtolemyIdeal) -> Vec<String> {
        ideal.generators.iter().map(|g| g.primitive().display(&ideal.variables)).collect()
    }

    #[test]
    fn figure8_relations() {
        let t = fixtures::figure8();
        let h2 = enumerate_h2(&t, DEFAULT_H2_CAP).unwrap();
        let triv = generate_ptolemy_relations(&t, 2, &h2[0]).unwrap();
        assert_eq!(triv.variables, vec!["c_0011_0", "c_0101_0"]);
        // c23 c13 + c23^2 - c13^2 and c13 c23 + c13^2 - c23^2, up to sign
        let mut got = texts(&triv);
        got.sort();
        assert_eq!(
            got,
            vec![
                "c_0011_0^2 + c_0011_0*c_0101_0 - c_0101_0^2",
                "c_0011_0^2 - c_0011_0*c_0101_0 - c_0101_0^2",
            ]
        );
        let non = generate_ptolemy_relations(&t, 2, &h2[1]).unwrap();
        assert_eq!(texts(&non), vec!["c_0011_0^2 - c_0011_0*c_0101_0 + c_0101_0^2"; 2]);
    }

    #[test]
    fn sister_trivial_relations_coincide() {
        let t = fixtures::sister();
        let sigma = ObstructionCocycle::trivial(&t);
        let ideal = generate_ptolemy_relations(&t, 2, &sigma).unwrap();
        let g = &ideal.generators;
        assert!(g[0] == g[1] || g[0] == g[1].neg());
        let p = g[0].primitive();
        assert!(
            p.display(&ideal.variables) == "c_0011_0^2 + c_0011_0*c_0101_0 - c_0101_0^2",
            "{}",
            p.display(&ideal.variables)
        );
    }

    #[test]
    fn counts_and_homogeneity() {
        for t in [fixtures::figure8(), fixtures::doubled_simplex()] {
            for n in 2..=4u32 {
                let ideal =
                    generate_ptolemy_relations(&t, n, &ObstructionCocycle::trivial(&t)).unwrap();
                let b = (n + 1) * n * (n - 1) / 6;
                assert_eq!(ideal.generators.len(), t.num_tetrahedra() * b as usize);
                assert!(ideal.generators.iter().all(|g| g.is_homogeneous()));
                assert_eq!(saturate(&ideal).generators.len(), ideal.generators.len() + 1);
            }
        }
    }

    #[test]
    fn unsupported_cases() {
        let t = fixtures::sister();
        let sigma = ObstructionCocycle::trivial(&t);
        assert_eq!(
            generate_ptolemy_relations(&t, 3, &sigma).unwrap_err(),
            Error::UnsupportedSigns { n: 3 }
        );
        let f = fixtures::figure8();
        let h2 = enumerate_h2(&f, DEFAULT_H2_CAP).unwrap();
        assert_eq!(
            generate_ptolemy_relations(&f, 3, &h2[1]).unwrap_err(),
            Error::UnsupportedObstruction { n: 3 }
        );
    }

    #[test]
    fn coboundary_scaling_matches_adjusted_cocycle() {
        for t in [fixtures::figure8(), fixtures::sister(), fixtures::whitehead()] {
            let h2 = enumerate_h2(&t, DEFAULT_H2_CAP).unwrap();
            let e = t.edge_classes().len();
            for sigma in &h2 {
                let ideal = generate_ptolemy_relations(&t, 2, sigma).unwrap();
                for mask in 0..1u32 << e {
                    let tau: Vec<i8> =
                        (0..e).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
                    let adjusted = coboundary_adjust(&t, sigma, &tau).unwrap();
                    let target = generate_ptolemy_relations(&t, 2, &adjusted).unwrap();
                    let scaling = apply_coboundary_isomorphism(&ideal, &tau).unwrap();
                    for (a, b) in scaling.apply_ideal(&ideal).iter().zip(&target.generators) {
                        assert!(a == b || *a == b.neg());
                    }
                }
            }
        }
    }
}
