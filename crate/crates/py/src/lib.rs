use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyComplex;

use ptolemy_core::cohomology::{build_complex, obstruction_classes};
use ptolemy_core::pipeline::{self, setup_class, solve_class, ObstructionSelection, PipelineConfig};
use ptolemy_core::poly::TermOrder;
use ptolemy_core::representation::{build_natural_cocycle, compute_shapes, edge_values};
use ptolemy_core::{fixtures, parse_triangulation, Error};

fn py_err(e: Error) -> PyErr {
    if e.is_budget() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

#[pyclass(name = "Triangulation", frozen)]
struct PyTriangulation {
    inner: ptolemy_core::Triangulation,
}

#[pymethods]
impl PyTriangulation {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_triangulation(text).map(|inner| PyTriangulation { inner }).map_err(py_err)
    }

    #[staticmethod]
    fn fixture(name: &str) -> PyResult<Self> {
        fixtures::load(name)
            .map(|inner| PyTriangulation { inner })
            .ok_or_else(|| PyValueError::new_err(format!("no bundled fixture {name}")))
    }

    #[getter]
    fn name(&self) -> Option<String> {
        self.inner.name().map(str::to_string)
    }

    #[getter]
    fn num_tetrahedra(&self) -> usize {
        self.inner.num_tetrahedra()
    }

    #[getter]
    fn num_cusps(&self) -> usize {
        self.inner.cusp_classes().len()
    }

    fn edge_classes(&self) -> Vec<String> {
        self.inner.edge_classes().iter().map(|c| c.name()).collect()
    }

    fn h2_dimension(&self) -> usize {
        build_complex(&self.inner).h2_dimension()
    }

    fn num_obstruction_classes(&self) -> PyResult<usize> {
        obstruction_classes(&self.inner, 1024).map(|c| c.len()).map_err(py_err)
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn __repr__(&self) -> String {
        format!(
            "Triangulation({}, {} tetrahedra)",
            self.inner.name().unwrap_or("unnamed"),
            self.inner.num_tetrahedra()
        )
    }

    /// Ptolemy relations of obstruction class `obstruction`, as strings.
    #[pyo3(signature = (obstruction = 0, n = 2))]
    fn ptolemy_relations(&self, obstruction: usize, n: u32) -> PyResult<Vec<String>> {
        let setup = class_setup(&self.inner, n, obstruction, 60)?.0;
        Ok(setup.ideal.relations().iter().map(|p| p.display(&setup.ideal.variables)).collect())
    }

    /// Reduced, saturated ideal of one class.
    #[pyo3(signature = (obstruction = 0, n = 2))]
    fn reduced_ideal(&self, obstruction: usize, n: u32) -> PyResult<Vec<String>> {
        let setup = class_setup(&self.inner, n, obstruction, 60)?.0;
        Ok(setup.reduced.to_text().lines().map(str::to_string).collect())
    }

    /// Irreducible factors of every eliminant of one class.
    #[pyo3(signature = (obstruction = 0, n = 2))]
    fn eliminant_factors(&self, obstruction: usize, n: u32) -> PyResult<Vec<String>> {
        let (setup, cfg) = class_setup(&self.inner, n, obstruction, 60)?;
        let d = solve_class(&setup, &cfg).map_err(py_err)?;
        Ok(d.all_factors().iter().map(|f| f.display("x")).collect())
    }

    /// Field polynomial of each component of one class.
    #[pyo3(signature = (obstruction = 0, n = 2))]
    fn fields(&self, obstruction: usize, n: u32) -> PyResult<Vec<String>> {
        let (setup, cfg) = class_setup(&self.inner, n, obstruction, 60)?;
        let d = solve_class(&setup, &cfg).map_err(py_err)?;
        Ok(d.components.iter().map(|c| c.field.display("x")).collect())
    }

    /// Numeric solutions of one class as lists of complex numbers, one per
    /// edge class (basic classes are 1).
    #[pyo3(signature = (obstruction = 0, precision = 60))]
    fn solutions<'py>(&self, py: Python<'py>, obstruction: usize, precision: u32) -> PyResult<Vec<Vec<Bound<'py, PyComplex>>>> {
        let (setup, cfg) = class_setup(&self.inner, 2, obstruction, precision)?;
        let d = solve_class(&setup, &cfg).map_err(py_err)?;
        Ok(d.solutions()
            .map(|s| {
                edge_values(&self.inner, &setup.reduced, s)
                    .iter()
                    .map(|z| PyComplex::from_doubles(py, z.real().to_f64(), z.imag().to_f64()))
                    .collect()
            })
            .collect())
    }

    /// Shapes of every solution of one class.
    #[pyo3(signature = (obstruction = 0))]
    fn shapes<'py>(&self, py: Python<'py>, obstruction: usize) -> PyResult<Vec<Vec<Bound<'py, PyComplex>>>> {
        let (setup, cfg) = class_setup(&self.inner, 2, obstruction, 60)?;
        let d = solve_class(&setup, &cfg).map_err(py_err)?;
        d.solutions()
            .map(|s| {
                let vals = edge_values(&self.inner, &setup.reduced, s);
                let sh = compute_shapes(&self.inner, &setup.sigma, &vals).map_err(py_err)?;
                Ok(sh.shapes.iter().map(|z| PyComplex::from_doubles(py, z.real().to_f64(), z.imag().to_f64())).collect())
            })
            .collect()
    }

    /// Largest face-relation residual of the natural cocycles of one class.
    #[pyo3(signature = (obstruction = 0))]
    fn face_residual(&self, obstruction: usize) -> PyResult<f64> {
        let (setup, cfg) = class_setup(&self.inner, 2, obstruction, 60)?;
        let d = solve_class(&setup, &cfg).map_err(py_err)?;
        let mut worst = 0.0f64;
        for s in d.solutions() {
            let vals = edge_values(&self.inner, &setup.reduced, s);
            let c = build_natural_cocycle(&self.inner, &setup.sigma, &vals, cfg.bits()).map_err(py_err)?;
            worst = worst.max(c.face_residual);
        }
        Ok(worst)
    }

    /// The whole pipeline as a JSON report.
    #[pyo3(signature = (n = 2, obstruction = None, precision = 60))]
    fn run(&self, n: u32, obstruction: Option<usize>, precision: u32) -> PyResult<String> {
        let cfg = PipelineConfig {
            n,
            obstruction: obstruction.map_or(ObstructionSelection::All, ObstructionSelection::Index),
            precision_digits: precision,
            ..PipelineConfig::default()
        };
        pipeline::run(&self.inner, &cfg).map(|r| r.to_json()).map_err(py_err)
    }
}

fn class_setup(
    tri: &ptolemy_core::Triangulation,
    n: u32,
    obstruction: usize,
    precision: u32,
) -> PyResult<(pipeline::ClassSetup, PipelineConfig)> {
    let cfg = PipelineConfig {
        n,
        obstruction: ObstructionSelection::Index(obstruction),
        precision_digits: precision,
        ..PipelineConfig::default()
    };
    cfg.validate().map_err(py_err)?;
    let (index, sigma) = pipeline::select_classes(tri, &cfg).map_err(py_err)?.remove(0);
    let setup = setup_class(tri, n, index, &sigma, TermOrder::Grevlex).map_err(py_err)?;
    Ok((setup, cfg))
}

#[pyfunction]
fn fixture_names() -> Vec<&'static str> {
    fixtures::ALL.iter().map(|(n, _)| *n).collect()
}

#[pymodule]
fn ptolemy(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTriangulation>()?;
    m.add_function(wrap_pyfunction!(fixture_names, m)?)?;
    Ok(())
}
