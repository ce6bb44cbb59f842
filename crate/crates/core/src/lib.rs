pub mod bitset;
pub mod coverage;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod instance;
pub mod objectives;
pub mod random;
pub mod reductions;
pub mod solvers;
pub mod verify;
pub mod walk;

pub use bitset::VertexSet;
pub use dynamics::{simulate, simulate_periodic_with_cycle_detection, step, CounterState, PeriodicTrace, Process, SimulationTrace, Simulator};
pub use error::{Error, Result};
pub use graph::{parse_graph, serialize_graph, GraphBuilder, LabeledEdge, TemporalGraph};
pub use instance::{DynamicsKind, Objective, ProblemInstance, ScheduleConstraint, TransmissionSchedule};
pub use walk::restless_walk_active_oracle;
pub use coverage::{approx_solve, greedy_max_coverage, ApproxResult, CoverageInstance, GreedyResult};
pub use objectives::{check_schedule_constraint, evaluate, ObjectiveValue, RunSummary, Witness};
pub use reductions::{Certificate, GeneratedInstance, SetCoverInstance, VertexCoverInstance, WindowRegime};
pub use solvers::{exact_solve, periodic_fpt_maxspread, solve, ExactOptions, ExactResult, Method, SolveOptions, SolveOutput};
