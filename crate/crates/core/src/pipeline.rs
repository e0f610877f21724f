//! End-to-end runs over obstruction classes, with JSON-ready reports.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::cohomology::{build_complex, class_index, obstruction_classes, ObstructionCocycle};
use crate::error::{Error, Result};
use crate::poly::TermOrder;
use crate::reduction::{find_basic_generators, reduce_ideal, BasicGeneratorSet};
use crate::representation::{
    build_natural_cocycle, compute_shapes, edge_values, loop_traces, peripheral_status,
    trace_field_report, TraceFieldReport,
};
use crate::solver::{decompose, Component, ComplexValue, Decomposition, GroebnerConfig, SolveConfig};
use crate::triangulation::Triangulation;
use crate::variety::{generate_ptolemy_relations, saturate, PtolemyIdeal};

/// Digits printed for complex values in reports.
pub const REPORT_DIGITS: u32 = 20;

#[derive(Clone, Debug)]
pub enum ObstructionSelection {
    All,
    Index(usize),
    Cocycles(Vec<ObstructionCocycle>),
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub n: u32,
    pub obstruction: ObstructionSelection,
    pub order: TermOrder,
    pub precision_digits: u32,
    pub max_vars: usize,
    pub max_pairs: usize,
    /// Largest number of obstruction classes to enumerate.
    pub h2_cap: usize,
    /// Longest generator product sampled for traces.
    pub length_cap: usize,
    pub timings: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            n: 2,
            obstruction: ObstructionSelection::All,
            order: TermOrder::Grevlex,
            precision_digits: 60,
            max_vars: crate::solver::DEFAULT_MAX_VARS,
            max_pairs: crate::solver::DEFAULT_MAX_PAIRS,
            h2_cap: 1024,
            length_cap: 2,
            timings: false,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidConfig(format!("n must be at least 2 (got {})", self.n)));
        }
        if self.precision_digits < 30 {
            return Err(Error::InvalidConfig(format!(
                "precision must be at least 30 digits (got {})",
                self.precision_digits
            )));
        }
        Ok(())
    }

    pub fn solve_config(&self) -> SolveConfig {
        SolveConfig {
            precision_digits: self.precision_digits,
            groebner: GroebnerConfig { max_vars: self.max_vars, max_pairs: self.max_pairs },
            ..SolveConfig::default()
        }
    }

    pub fn bits(&self) -> u32 {
        self.solve_config().bits()
    }
}

/// Obstruction classes to run, with their index in the class list.
pub fn select_classes(tri: &Triangulation, cfg: &PipelineConfig) -> Result<Vec<(usize, ObstructionCocycle)>> {
    let classes = if cfg.n == 2 {
        obstruction_classes(tri, cfg.h2_cap)?
    } else {
        vec![ObstructionCocycle::trivial(tri)]
    };
    match &cfg.obstruction {
        ObstructionSelection::All => Ok(classes.into_iter().enumerate().collect()),
        ObstructionSelection::Index(i) => classes
            .get(*i)
            .cloned()
            .map(|s| vec![(*i, s)])
            .ok_or_else(|| Error::InvalidConfig(format!("obstruction index {i} out of range 0..{}", classes.len()))),
        ObstructionSelection::Cocycles(list) => {
            if cfg.n != 2 && list.iter().any(|s| !s.is_trivial()) {
                return Err(Error::UnsupportedObstruction { n: cfg.n });
            }
            list.iter()
                .map(|s| {
                    let idx = class_index(tri, &classes, s).ok_or_else(|| {
                        Error::InvalidCocycle("cocycle matches no enumerated class".into())
                    })?;
                    Ok((idx, s.clone()))
                })
                .collect()
        }
    }
}

/// Ideal, basic set and reduced saturated ideal of one obstruction class.
#[derive(Clone, Debug)]
pub struct ClassSetup {
    pub index: usize,
    pub sigma: ObstructionCocycle,
    pub ideal: PtolemyIdeal,
    pub basic: BasicGeneratorSet,
    pub reduced: PtolemyIdeal,
}

pub fn setup_class(
    tri: &Triangulation,
    n: u32,
    index: usize,
    sigma: &ObstructionCocycle,
    order: TermOrder,
) -> Result<ClassSetup> {
    let ideal = generate_ptolemy_relations(tri, n, sigma)?.with_order(order);
    let basic = find_basic_generators(tri, n)?;
    let reduced = saturate(&reduce_ideal(&ideal, &basic));
    Ok(ClassSetup { index, sigma: sigma.clone(), ideal, basic, reduced })
}

pub fn solve_class(setup: &ClassSetup, cfg: &PipelineConfig) -> Result<Decomposition> {
    let r = &setup.reduced;
    decompose(r.nvars(), &r.generators, &r.variables, &cfg.solve_config())
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct StageError {
    pub stage: String,
    /// "budget" for computational limits, "validation" otherwise.
    pub kind: String,
    pub message: String,
}

impl StageError {
    pub fn new(stage: &str, e: &Error) -> Self {
        StageError {
            stage: stage.into(),
            kind: if e.is_budget() { "budget" } else { "validation" }.into(),
            message: e.to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorReport {
    pub factor: String,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct EliminantReport {
    pub variable: String,
    pub polynomial: String,
    pub factors: Vec<FactorReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RepReport {
    pub face_residual: f64,
    pub generator_traces: Vec<ComplexValue>,
    /// Peripheral parameter per cusp; `None` for boundary-trivial cusps.
    pub peripheral_m: Vec<Option<ComplexValue>>,
    pub boundary_trivial_cusps: Vec<usize>,
    pub shapes: Vec<ComplexValue>,
    pub gluing_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentReport {
    pub index: usize,
    pub degree: usize,
    pub field: String,
    pub field_variable: Option<String>,
    pub solutions: Vec<Vec<ComplexValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representation: Option<RepReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_field: Option<TraceFieldReport>,
    pub errors: Vec<StageError>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub empty: bool,
    pub positive_dimensional: bool,
    pub degree: Option<usize>,
    pub points: usize,
    pub eliminants: Vec<EliminantReport>,
    pub components: Vec<ComponentReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    pub index: usize,
    pub face_signs: Vec<i8>,
    pub relations: usize,
    pub variables: Vec<String>,
    pub basic_generators: Vec<String>,
    pub reduced_variables: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solve: Option<SolveReport>,
    pub errors: Vec<StageError>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub name: Option<String>,
    pub n: u32,
    pub tetrahedra: usize,
    pub cusps: usize,
    pub edge_classes: usize,
    pub h2_dimension: usize,
    pub classes: Vec<ClassReport>,
}

impl RunReport {
    pub fn errors(&self) -> impl Iterator<Item = &StageError> {
        self.classes.iter().flat_map(|c| {
            c.errors.iter().chain(
                c.solve.iter().flat_map(|s| s.components.iter().flat_map(|comp| comp.errors.iter())),
            )
        })
    }

    pub fn has_budget_error(&self) -> bool {
        self.errors().any(|e| e.kind == "budget")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable summary.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} (n = {}, {} tetrahedra, {} cusps, dim H^2 = {})\n",
            self.name.as_deref().unwrap_or("triangulation"),
            self.n,
            self.tetrahedra,
            self.cusps,
            self.h2_dimension
        );
        for c in &self.classes {
            out.push_str(&format!("class {}: ", c.index));
            match &c.solve {
                None => out.push_str("not solved\n"),
                Some(s) if s.empty => out.push_str("empty\n"),
                Some(s) if s.positive_dimensional => out.push_str("positive-dimensional\n"),
                Some(s) => {
                    out.push_str(&format!("{} points\n", s.points));
                    for comp in &s.components {
                        out.push_str(&format!("  component {}: degree {}, field {}", comp.index, comp.degree, comp.field));
                        if let Some(t) = &comp.trace_field {
                            let verdict = if t.fields_agree { "fields agree" } else { "fields differ" };
                            out.push_str(&format!(", {verdict}"));
                        }
                        out.push('\n');
                    }
                }
            }
            for e in c.errors.iter().chain(c.solve.iter().flat_map(|s| s.components.iter().flat_map(|x| x.errors.iter()))) {
                out.push_str(&format!("  {} error: {}\n", e.stage, e.message));
            }
        }
        out
    }
}

pub fn eliminant_reports(d: &Decomposition) -> Vec<EliminantReport> {
    d.eliminants
        .iter()
        .zip(&d.variables)
        .map(|((p, f), v)| EliminantReport {
            variable: v.clone(),
            polynomial: p.display("x"),
            factors: f
                .factors
                .iter()
                .map(|(g, m)| FactorReport { factor: g.display("x"), multiplicity: *m })
                .collect(),
        })
        .collect()
}

/// Cocycle, peripheral, trace and shape summary of solution `which`.
pub fn representation_report(
    tri: &Triangulation,
    setup: &ClassSetup,
    component: &Component,
    which: usize,
    cfg: &PipelineConfig,
) -> Result<RepReport> {
    let values = edge_values(tri, &setup.reduced, &component.solutions[which]);
    let cocycle = build_natural_cocycle(tri, &setup.sigma, &values, cfg.bits())?;
    let status = peripheral_status(&cocycle, tri.cusp_classes().len());
    let shapes = compute_shapes(tri, &setup.sigma, &values)?;
    let show = |z: &rug::Complex| ComplexValue::new(z, REPORT_DIGITS);
    Ok(RepReport {
        face_residual: cocycle.face_residual,
        generator_traces: loop_traces(&cocycle, 1).iter().map(|t| show(&t.trace)).collect(),
        boundary_trivial_cusps: status.iter().enumerate().filter(|(_, p)| p.is_none()).map(|(i, _)| i).collect(),
        peripheral_m: status.iter().map(|p| p.as_ref().map(|p| show(&p.m))).collect(),
        shapes: shapes.shapes.iter().map(show).collect(),
        gluing_residual: shapes.gluing_residual,
    })
}

pub fn trace_field(
    tri: &Triangulation,
    setup: &ClassSetup,
    component: &Component,
    cfg: &PipelineConfig,
) -> Result<TraceFieldReport> {
    trace_field_report(tri, &setup.sigma, &setup.reduced, &setup.basic, component, 0, cfg.bits(), cfg.length_cap)
}

fn component_report(
    tri: &Triangulation,
    setup: &ClassSetup,
    comp: &Component,
    cfg: &PipelineConfig,
    with_trace_field: bool,
) -> ComponentReport {
    let mut errors = Vec::new();
    let (mut representation, mut trace) = (None, None);
    if cfg.n == 2 && !comp.solutions.is_empty() {
        match representation_report(tri, setup, comp, 0, cfg) {
            Ok(r) => representation = Some(r),
            Err(e) => errors.push(StageError::new("representation", &e)),
        }
        if with_trace_field {
            match trace_field(tri, setup, comp, cfg) {
                Ok(r) => trace = Some(r),
                Err(e) => errors.push(StageError::new("tracefield", &e)),
            }
        }
    }
    let nclass = setup.reduced.classes.len();
    ComponentReport {
        index: comp.index,
        degree: comp.degree,
        field: comp.field.display("x"),
        field_variable: comp.field_variable.clone(),
        solutions: comp
            .solutions
            .iter()
            .map(|s| s.values[..nclass].iter().map(|z| ComplexValue::new(z, REPORT_DIGITS)).collect())
            .collect(),
        representation,
        trace_field: trace,
        errors,
    }
}

pub fn solve_report(
    tri: &Triangulation,
    setup: &ClassSetup,
    d: &Decomposition,
    cfg: &PipelineConfig,
    with_representation: bool,
    with_trace_field: bool,
) -> SolveReport {
    SolveReport {
        empty: d.empty,
        positive_dimensional: d.positive_dimensional,
        degree: d.degree,
        points: d.points,
        eliminants: eliminant_reports(d),
        components: d
            .components
            .iter()
            .map(|c| {
                if with_representation {
                    component_report(tri, setup, c, cfg, with_trace_field)
                } else {
                    ComponentReport {
                        index: c.index,
                        degree: c.degree,
                        field: c.field.display("x"),
                        field_variable: c.field_variable.clone(),
                        solutions: c
                            .solutions
                            .iter()
                            .map(|s| {
                                s.values[..setup.reduced.classes.len()]
                                    .iter()
                                    .map(|z| ComplexValue::new(z, REPORT_DIGITS))
                                    .collect()
                            })
                            .collect(),
                        representation: None,
                        trace_field: None,
                        errors: Vec::new(),
                    }
                }
            })
            .collect(),
    }
}

/// How far the pipeline goes for each class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Reduce,
    Solve,
    Representation,
    TraceField,
}

/// Runs every selected class up to `stage`; per-class failures are recorded
/// in the report.
pub fn run_to(tri: &Triangulation, cfg: &PipelineConfig, stage: Stage) -> Result<RunReport> {
    cfg.validate()?;
    let selected = select_classes(tri, cfg)?;
    let mut classes = Vec::new();
    for (index, sigma) in selected {
        let mut timings = BTreeMap::new();
        let mut errors = Vec::new();
        let t = Instant::now();
        let setup = match setup_class(tri, cfg.n, index, &sigma, cfg.order) {
            Ok(s) => s,
            Err(e) => {
                errors.push(StageError::new("reduce", &e));
                classes.push(ClassReport {
                    index,
                    face_signs: sigma.face_signs().to_vec(),
                    relations: 0,
                    variables: Vec::new(),
                    basic_generators: Vec::new(),
                    reduced_variables: Vec::new(),
                    solve: None,
                    errors,
                    timings_ms: None,
                });
                continue;
            }
        };
        timings.insert("reduce".to_string(), t.elapsed().as_secs_f64() * 1e3);
        let mut solve = None;
        if stage >= Stage::Solve {
            let t = Instant::now();
            match solve_class(&setup, cfg) {
                Ok(d) => {
                    timings.insert("solve".to_string(), t.elapsed().as_secs_f64() * 1e3);
                    let t = Instant::now();
                    solve = Some(solve_report(
                        tri,
                        &setup,
                        &d,
                        cfg,
                        stage >= Stage::Representation,
                        stage >= Stage::TraceField,
                    ));
                    if stage >= Stage::Representation {
                        timings.insert("representation".to_string(), t.elapsed().as_secs_f64() * 1e3);
                    }
                }
                Err(e) => errors.push(StageError::new("solve", &e)),
            }
        }
        classes.push(ClassReport {
            index,
            face_signs: sigma.face_signs().to_vec(),
            relations: setup.ideal.num_relations,
            variables: setup.ideal.variables.clone(),
            basic_generators: setup.basic.names.clone(),
            reduced_variables: setup.reduced.variables.clone(),
            solve,
            errors,
            timings_ms: cfg.timings.then_some(timings),
        });
    }
    Ok(RunReport {
        name: tri.name().map(str::to_string),
        n: cfg.n,
        tetrahedra: tri.num_tetrahedra(),
        cusps: tri.cusp_classes().len(),
        edge_classes: tri.edge_classes().len(),
        h2_dimension: build_complex(tri).h2_dimension(),
        classes,
    })
}

/// The full pipeline.
pub fn run(tri: &Triangulation, cfg: &PipelineConfig) -> Result<RunReport> {
    run_to(tri, cfg, Stage::TraceField)
}
