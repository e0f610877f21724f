use std::collections::VecDeque;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rug::{Complex, Float};
use serde::Serialize;

use super::cocycle::{build_natural_cocycle, NaturalCocycle};
use super::groupoid::{inverse_word, Groupoid, Step};
use super::mat2::{abs, Mat2};
use super::edge_values;
use crate::cohomology::{one_cocycles, ObstructionCocycle};
use crate::error::{Error, Result};
use crate::reduction::{BasicGeneratorSet, CycleKind, TreeStructure};
use crate::solver::{Component, ComplexValue};
use crate::triangulation::Triangulation;
use crate::variety::PtolemyIdeal;

/// Threshold below which a peripheral parameter counts as zero.
pub const PERIPHERAL_TOL: f64 = 1e-10;
/// Largest allowed recovery or fit residual.
pub const RECOVERY_TOL: f64 = 1e-9;

/// Anything that returns the trace of a loop of the edge-path groupoid.
pub trait TraceOracle {
    fn trace(&self, word: &[Step]) -> Complex;
}

impl TraceOracle for NaturalCocycle {
    fn trace(&self, word: &[Step]) -> Complex {
        NaturalCocycle::trace(self, word)
    }
}

#[derive(Clone, Debug)]
pub struct LoopTrace {
    /// Generator indices, 1-based, negative for inverses.
    pub generators: Vec<i32>,
    pub word: Vec<Step>,
    pub trace: Complex,
}

/// Generator loops and their traces, then products of two distinct
/// generators (and one inverted) when `length_cap` ≥ 2.
pub fn loop_traces(cocycle: &NaturalCocycle, length_cap: usize) -> Vec<LoopTrace> {
    let gens = cocycle.groupoid().generator_loops();
    let mut out: Vec<LoopTrace> = gens
        .iter()
        .enumerate()
        .map(|(i, w)| LoopTrace { generators: vec![i as i32 + 1], word: w.clone(), trace: cocycle.trace(w) })
        .collect();
    if length_cap >= 2 {
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                for inv in [false, true] {
                    let mut word = gens[i].clone();
                    let (second, label) = if inv {
                        (inverse_word(&gens[j]), -(j as i32 + 1))
                    } else {
                        (gens[j].clone(), j as i32 + 1)
                    };
                    word.extend(second);
                    let trace = cocycle.trace(&word);
                    out.push(LoopTrace { generators: vec![i as i32 + 1, label], word, trace });
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct PeripheralLoop {
    pub cusp: usize,
    /// Corner the loop starts and ends at.
    pub base: usize,
    pub word: Vec<Step>,
    pub matrix: Mat2,
    pub sign: i32,
    pub m: Complex,
}

/// Per cusp, the first fundamental cycle of its short-edge graph whose image
/// is ±β(m) with m ≠ 0, or `None` if the cusp is boundary-trivial.
pub fn peripheral_status(cocycle: &NaturalCocycle, num_cusps: usize) -> Vec<Option<PeripheralLoop>> {
    let g = cocycle.groupoid();
    (0..num_cusps)
        .map(|cusp| {
            let (base, cycles) = g.cusp_cycles(cusp);
            cycles.into_iter().find_map(|word| {
                let matrix = cocycle.eval(&word);
                let (sign, m) = matrix.as_unipotent(PERIPHERAL_TOL.sqrt())?;
                (abs(&m) > PERIPHERAL_TOL).then_some(PeripheralLoop { cusp, base, word, matrix, sign, m })
            })
        })
        .collect()
}

/// One nontrivial peripheral loop per cusp.
pub fn find_peripheral_loops(cocycle: &NaturalCocycle, tri: &Triangulation) -> Result<Vec<PeripheralLoop>> {
    peripheral_status(cocycle, tri.cusp_classes().len())
        .into_iter()
        .enumerate()
        .map(|(cusp, p)| p.ok_or(Error::BoundaryTrivialCusp { cusp }))
        .collect()
}

/// Iterated finite difference Δ_r(⋯Δ_1 f(h_1)⋯)(h_r) at x.
pub fn iterated_difference<T, F>(f: &F, x: &[T], h: &[T]) -> T
where
    T: Clone + Add<Output = T> + Sub<Output = T>,
    F: Fn(&[T]) -> T,
{
    fn go<T, F>(f: &F, x: &mut Vec<T>, h: &[T], r: usize) -> T
    where
        T: Clone + Add<Output = T> + Sub<Output = T>,
        F: Fn(&[T]) -> T,
    {
        if r == 0 {
            return f(x);
        }
        let base = go(f, x, h, r - 1);
        let old = x[r - 1].clone();
        x[r - 1] = old.clone() + h[r - 1].clone();
        let shifted = go(f, x, h, r - 1);
        x[r - 1] = old;
        shifted - base
    }
    let mut x = x.to_vec();
    go(f, &mut x, h, h.len())
}

/// Alternating sum of `g` over insertion patterns, Σ_b (−1)^{r−|b|} g(b).
pub fn insertion_difference(r: usize, g: impl Fn(&[bool]) -> Complex, prec: u32) -> Complex {
    let mut total = Complex::new(prec);
    for mask in 0u32..(1 << r) {
        let b: Vec<bool> = (0..r).map(|k| mask >> k & 1 == 1).collect();
        let v = g(&b);
        if (r as u32 - mask.count_ones()).is_multiple_of(2) {
            total += v;
        } else {
            total -= v;
        }
    }
    total
}

/// Closed word running through the long steps `edges` in order, joined by
/// peripheral paths, with the peripheral loop of the tail cusp inserted
/// before each long step k with `insert[k]`.
pub fn cycle_word(
    g: &Groupoid,
    edges: &[Step],
    insert: &[bool],
    peripheral: &[PeripheralLoop],
) -> Vec<Step> {
    let mut word = Vec::new();
    let mut at = g.head(*edges.last().expect("nonempty cycle"));
    for (k, &e) in edges.iter().enumerate() {
        let tail = g.tail(e);
        word.extend(g.peripheral_path(at, tail).expect("consecutive long steps share a cusp"));
        if insert[k] {
            let p = &peripheral[g.cusp(tail)];
            let y = g.peripheral_path(tail, p.base).expect("base on the same cusp");
            word.extend(y.iter().copied());
            word.extend(p.word.iter().copied());
            word.extend(inverse_word(&y));
        }
        word.push(e);
        at = g.head(e);
    }
    word
}

/// Leading coefficient (∏ m)(∏ c) of the traces of a cycle of long steps.
pub fn cycle_leading_term(
    oracle: &dyn TraceOracle,
    g: &Groupoid,
    edges: &[Step],
    peripheral: &[PeripheralLoop],
    prec: u32,
) -> Complex {
    insertion_difference(edges.len(), |b| oracle.trace(&cycle_word(g, edges, b, peripheral)), prec)
}

/// Directed long step of an edge class along its representative or against it,
/// with the sign relating its label to the class value.
fn class_step(tri: &Triangulation, class: usize, forward: bool) -> (Step, i32) {
    let table = tri.edge_table();
    let r = table.classes[class].representative();
    let (i, j) = if forward { (r.i, r.j) } else { (r.j, r.i) };
    let sign = table.oriented(r.tet, i, j).1 as i32;
    (Step::Long { tet: r.tet, i: i as u8, j: j as u8 }, sign)
}

fn signed_step(tri: &Triangulation, tet: usize, i: usize, j: usize) -> (Step, i32) {
    (Step::Long { tet, i: i as u8, j: j as u8 }, tri.edge_table().oriented(tet, i, j).1 as i32)
}

#[derive(Clone, Debug, Serialize)]
pub struct RecoveredCoordinate {
    pub class: usize,
    pub name: String,
    pub basic: bool,
    pub value: ComplexValue,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct Recovery {
    /// Peripheral parameter per cusp as recovered from traces.
    pub m: Vec<Complex>,
    /// Value per edge class; basic classes are 1.
    pub values: Vec<Complex>,
    pub basic: Vec<bool>,
}

/// Recovers every edge-class coordinate from traces alone, given the basic set
/// fixed to 1 and nontrivial peripheral loops.
pub fn recover_ptolemy_from_traces(
    tri: &Triangulation,
    g: &Groupoid,
    structure: &TreeStructure,
    basic: &[usize],
    peripheral: &[PeripheralLoop],
    oracle: &dyn TraceOracle,
    prec: u32,
) -> Result<Recovery> {
    let table = tri.edge_table();
    let ncusps = tri.cusp_classes().len();
    let cusp_of = tri.cusp_of();
    if peripheral.len() != ncusps {
        let cusp = peripheral.len();
        return Err(Error::BoundaryTrivialCusp { cusp });
    }
    let lead = |steps: &[Step]| cycle_leading_term(oracle, g, steps, peripheral, prec);
    let mut m: Vec<Option<Complex>> = vec![None; ncusps];
    // m_a m_b across an edge class with c = ±1
    let pair = |class: usize| {
        let (fwd, _) = class_step(tri, class, true);
        -lead(&[fwd, fwd.reverse()])
    };
    match structure.kind {
        CycleKind::SingleCusp { edge } | CycleKind::SelfEdge { edge } => {
            let (st, s) = class_step(tri, edge, true);
            m[table.classes[edge].cusps.0] = Some(lead(&[st]) * s);
        }
        CycleKind::ThreeCycle { tet, face, edges } => {
            let vs: Vec<usize> = (0..4).filter(|&x| x != face).collect();
            let (p, q, r) = (vs[0], vs[1], vs[2]);
            let steps = [signed_step(tri, tet, p, q), signed_step(tri, tet, q, r), signed_step(tri, tet, r, p)];
            let s: i32 = steps.iter().map(|x| x.1).product();
            let d3 = lead(&steps.map(|x| x.0));
            let mqr = pair(edges[0]);
            m[cusp_of[tet][p]] = Some(d3 * s / mqr);
        }
    }
    // propagate along the tree
    let mut changed = true;
    while changed {
        changed = false;
        for &e in &structure.tree {
            let (a, b) = table.classes[e].cusps;
            let (known, unknown) = match (&m[a], &m[b]) {
                (Some(_), None) => (a, b),
                (None, Some(_)) => (b, a),
                _ => continue,
            };
            let v = pair(e) / m[known].as_ref().expect("known");
            m[unknown] = Some(v);
            changed = true;
        }
    }
    let m: Vec<Complex> = m
        .into_iter()
        .enumerate()
        .map(|(cusp, v)| v.ok_or(Error::BoundaryTrivialCusp { cusp }))
        .collect::<Result<_>>()?;
    // tree adjacency on cusps
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); ncusps];
    for &e in &structure.tree {
        let (a, b) = table.classes[e].cusps;
        adj[a].push((b, e));
        adj[b].push((a, e));
    }
    let tree_path = |from: usize, to: usize| -> Vec<(Step, i32)> {
        let mut via: Vec<Option<(usize, usize)>> = vec![None; ncusps];
        let mut seen = vec![false; ncusps];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            for &(w, e) in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    via[w] = Some((u, e));
                    queue.push_back(w);
                }
            }
        }
        let mut out = Vec::new();
        let mut cur = to;
        while cur != from {
            let (u, e) = via[cur].expect("tree spans the cusps");
            let forward = table.classes[e].cusps.0 == u;
            out.push(class_step(tri, e, forward));
            cur = u;
        }
        out.reverse();
        out
    };
    let mut values = vec![Complex::with_val(prec, 1); table.len()];
    let mut is_basic = vec![false; table.len()];
    for class in 0..table.len() {
        if basic.contains(&class) {
            is_basic[class] = true;
            continue;
        }
        let (st, s) = class_step(tri, class, true);
        let (a, b) = table.classes[class].cusps;
        let mut steps = vec![(st, s)];
        steps.extend(tree_path(b, a));
        let d = lead(&steps.iter().map(|x| x.0).collect::<Vec<_>>());
        let mut denom = Complex::with_val(prec, 1);
        for &(step, sign) in &steps {
            denom *= &m[g.cusp(g.tail(step))];
            denom *= sign;
        }
        values[class] = d / denom;
    }
    Ok(Recovery { m, values, basic: is_basic })
}

/// Compares recovered values with the solution's.
pub fn recovery_table(tri: &Triangulation, rec: &Recovery, expected: &[Complex], digits: u32) -> Result<Vec<RecoveredCoordinate>> {
    let classes = tri.edge_classes();
    let mut out = Vec::new();
    for (class, v) in rec.values.iter().enumerate() {
        let prec = v.prec().0;
        let residual = abs(&Complex::with_val(prec, v - &expected[class]));
        if residual > RECOVERY_TOL {
            return Err(Error::RecoveryMismatch { class, residual });
        }
        out.push(RecoveredCoordinate {
            class,
            name: classes[class].name(),
            basic: rec.basic[class],
            value: ComplexValue::new(v, digits),
            residual,
        });
    }
    Ok(out)
}

/// Nearest fraction with denominator at most `max_den`, by continued fractions.
pub fn rationalize(x: &Float, max_den: u64) -> BigRational {
    let prec = x.prec();
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let mut r = x.clone();
    let mut best = BigRational::zero();
    for _ in 0..200 {
        let a = Float::with_val(prec, r.floor_ref());
        let ai = a.to_integer().expect("finite");
        let ai = BigInt::parse_bytes(ai.to_string().as_bytes(), 10).expect("integer");
        let p2 = &ai * &p1 + &p0;
        let q2 = &ai * &q1 + &q0;
        if q2.abs() > BigInt::from(max_den) {
            break;
        }
        best = BigRational::new(p2.clone(), q2.clone());
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = Float::with_val(prec, &r - &a);
        if frac.is_zero() || abs_f(&frac) < 1e-40 {
            break;
        }
        r = frac.recip();
    }
    best
}

fn abs_f(x: &Float) -> f64 {
    x.to_f64().abs()
}

fn rat_to_complex(q: &BigRational, prec: u32) -> Complex {
    let n = Float::with_val(prec, Float::parse(q.numer().to_string()).expect("integer"));
    let d = Float::with_val(prec, Float::parse(q.denom().to_string()).expect("integer"));
    Complex::with_val(prec, n / d)
}

/// Solves Σ_k a_k θ_j^k = v_j, rounds a_k to rationals and reports the
/// residual of the rounded fit.
pub fn fit_in_field(thetas: &[Complex], values: &[Complex]) -> (Vec<BigRational>, f64) {
    let d = thetas.len();
    let prec = thetas[0].prec().0;
    let mut rows: Vec<Vec<Complex>> = thetas
        .iter()
        .zip(values)
        .map(|(t, v)| {
            let mut row = Vec::with_capacity(d + 1);
            let mut pw = Complex::with_val(prec, 1);
            for _ in 0..d {
                row.push(pw.clone());
                pw *= t;
            }
            row.push(Complex::with_val(prec, v));
            row
        })
        .collect();
    for col in 0..d {
        let piv = (col..d)
            .max_by(|&a, &b| abs(&rows[a][col]).total_cmp(&abs(&rows[b][col])))
            .expect("rows");
        rows.swap(col, piv);
        let inv = Complex::with_val(prec, rows[col][col].recip_ref());
        for r in 0..d {
            if r == col {
                continue;
            }
            let factor = Complex::with_val(prec, &rows[r][col] * &inv);
            for c in col..=d {
                let t = Complex::with_val(prec, &factor * &rows[col][c]);
                rows[r][c] -= t;
            }
        }
    }
    let coeffs: Vec<BigRational> = (0..d)
        .map(|k| {
            let a = Complex::with_val(prec, &rows[k][d] / &rows[k][k]);
            rationalize(a.real(), 1_000_000_000_000)
        })
        .collect();
    let exact: Vec<Complex> = coeffs.iter().map(|q| rat_to_complex(q, prec)).collect();
    let residual = thetas
        .iter()
        .zip(values)
        .map(|(t, v)| {
            let mut acc = Complex::new(prec);
            let mut pw = Complex::with_val(prec, 1);
            for a in &exact {
                acc += Complex::with_val(prec, a * &pw);
                pw *= t;
            }
            abs(&(acc - v))
        })
        .fold(0.0, f64::max);
    (coeffs, residual)
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceFit {
    pub generators: Vec<i32>,
    pub trace: ComplexValue,
    /// Coefficients over the power basis 1, θ, θ², … of the field generator.
    pub coefficients: Vec<String>,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceFieldReport {
    pub ptolemy_field: String,
    pub field_generator: String,
    pub degree: usize,
    pub face_residual: f64,
    pub peripheral_m: Vec<ComplexValue>,
    pub recovery: Vec<RecoveredCoordinate>,
    pub max_recovery_residual: f64,
    pub traces: Vec<TraceFit>,
    pub max_fit_residual: f64,
    /// Fit residual of the same samples for a lift twisted by a 1-cocycle.
    pub alternate_lift_residual: Option<f64>,
    pub fields_agree: bool,
}

fn field_values(ideal: &PtolemyIdeal, component: &Component, prec: u32) -> Vec<Complex> {
    let var = component
        .field_variable
        .as_ref()
        .and_then(|name| ideal.variables.iter().position(|v| v == name));
    component
        .solutions
        .iter()
        .map(|s| match var {
            Some(v) => Complex::with_val(prec, &s.values[v]),
            None => {
                let mut acc = Complex::new(prec);
                for (w, x) in component.separating.iter().zip(&s.values) {
                    acc += Complex::with_val(prec, x * *w as i32);
                }
                acc
            }
        })
        .collect()
}

/// Traces of every conjugate of the component, per sampled word.
fn sample_traces(cocycles: &[NaturalCocycle], length_cap: usize) -> Vec<(Vec<i32>, Vec<Complex>)> {
    let first = loop_traces(&cocycles[0], length_cap);
    first
        .into_iter()
        .map(|lt| {
            let vals = cocycles.iter().map(|c| c.trace(&lt.word)).collect();
            (lt.generators, vals)
        })
        .collect()
}

/// Recovers the coordinates of solution `which` of `component` from traces
/// and checks that sampled traces lie in the Ptolemy field.
#[allow(clippy::too_many_arguments)]
pub fn trace_field_report(
    tri: &Triangulation,
    sigma: &ObstructionCocycle,
    ideal: &PtolemyIdeal,
    basic: &BasicGeneratorSet,
    component: &Component,
    which: usize,
    prec: u32,
    length_cap: usize,
) -> Result<TraceFieldReport> {
    let structure = basic
        .structure
        .as_ref()
        .ok_or_else(|| Error::InvalidConfig("basic set without a tree structure".into()))?;
    let digits = (prec as f64 / std::f64::consts::LOG2_10) as u32 - 20;
    let cocycles: Vec<NaturalCocycle> = component
        .solutions
        .iter()
        .map(|s| build_natural_cocycle(tri, sigma, &edge_values(tri, ideal, s), prec))
        .collect::<Result<_>>()?;
    let cocycle = &cocycles[which];
    let expected = edge_values(tri, ideal, &component.solutions[which]);
    let peripheral = find_peripheral_loops(cocycle, tri)?;
    let rec = recover_ptolemy_from_traces(tri, cocycle.groupoid(), structure, &basic.classes, &peripheral, cocycle, prec)?;
    let recovery = recovery_table(tri, &rec, &expected, digits.min(30))?;
    let max_recovery_residual = recovery.iter().map(|r| r.residual).fold(0.0, f64::max);

    let thetas = field_values(ideal, component, prec);
    let mut traces = Vec::new();
    let mut max_fit_residual = 0.0f64;
    for (generators, vals) in sample_traces(&cocycles, length_cap) {
        let (coeffs, residual) = fit_in_field(&thetas, &vals);
        max_fit_residual = max_fit_residual.max(residual);
        traces.push(TraceFit {
            generators,
            trace: ComplexValue::new(&vals[which], digits.min(30)),
            coefficients: coeffs.iter().map(|q| q.to_string()).collect(),
            residual,
        });
    }
    let alternate_lift_residual = one_cocycles(tri).into_iter().find(|t| t.iter().any(|&b| b)).map(|tau| {
        let twisted: Vec<NaturalCocycle> = component
            .solutions
            .iter()
            .filter_map(|s| {
                let mut vals = edge_values(tri, ideal, s);
                for (v, &flip) in vals.iter_mut().zip(&tau) {
                    if flip {
                        *v = -v.clone();
                    }
                }
                build_natural_cocycle(tri, sigma, &vals, prec).ok()
            })
            .collect();
        if twisted.len() != component.solutions.len() {
            return f64::INFINITY;
        }
        sample_traces(&twisted, length_cap)
            .into_iter()
            .map(|(_, vals)| fit_in_field(&thetas, &vals).1)
            .fold(0.0, f64::max)
    });
    let fields_agree = max_recovery_residual < RECOVERY_TOL
        && max_fit_residual < RECOVERY_TOL
        && alternate_lift_residual.is_none_or(|r| r < RECOVERY_TOL);
    Ok(TraceFieldReport {
        ptolemy_field: component.field.display("x"),
        field_generator: component.field_variable.clone().unwrap_or_else(|| "separating form".into()),
        degree: component.degree,
        face_residual: cocycle.face_residual,
        peripheral_m: peripheral.iter().map(|p| ComplexValue::new(&p.m, digits.min(30))).collect(),
        recovery,
        max_recovery_residual,
        traces,
        max_fit_residual,
        alternate_lift_residual,
        fields_agree,
    })
}
