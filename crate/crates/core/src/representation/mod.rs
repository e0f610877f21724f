//! Natural cocycles of Ptolemy assignments, traces, shapes and trace fields.

mod cocycle;
mod groupoid;
mod mat2;
mod recovery;
mod shapes;

pub use cocycle::{build_natural_cocycle, from_labels, NaturalCocycle, FACE_TOL};
pub use groupoid::{inverse_word, Groupoid, Step};
pub use mat2::Mat2;
pub use recovery::{
    cycle_leading_term, cycle_word, find_peripheral_loops, fit_in_field, insertion_difference,
    iterated_difference, loop_traces, peripheral_status, rationalize, recover_ptolemy_from_traces,
    recovery_table, trace_field_report, LoopTrace, PeripheralLoop, RecoveredCoordinate, Recovery,
    TraceFieldReport, TraceFit, TraceOracle, PERIPHERAL_TOL, RECOVERY_TOL,
};
pub use shapes::{compute_shapes, ShapeAssignment};

use rug::Complex;

use crate::solver::AlgebraicSolution;
use crate::triangulation::Triangulation;
use crate::variety::PtolemyIdeal;

/// Per edge class values of a solution of an n = 2 ideal: fixed classes are 1
/// and the dummy variable is dropped.
pub fn edge_values(tri: &Triangulation, ideal: &PtolemyIdeal, solution: &AlgebraicSolution) -> Vec<Complex> {
    let prec = solution.values.first().map_or(128, |v| v.prec().0);
    let mut out = vec![Complex::with_val(prec, 1); tri.edge_table().len()];
    for (v, &class) in ideal.classes.iter().enumerate() {
        out[class] = solution.values[v].clone();
    }
    out
}
