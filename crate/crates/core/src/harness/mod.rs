//! Scenario files, runs, sweeps and plots behind the `macro` CLI.

mod plot;
mod runner;
mod scenario;
mod summary;

pub use plot::{render_plot, PlotStyle};
pub use runner::{
    exit_code, resolve_seed, run, run_scenario, sweep, sweep_csv, write_artifacts, RunArtifacts, SweepRow, SEED_ENV,
    SWEEP_HEADER,
};
pub use scenario::{
    apply_override, load_scenario, parse_scenario, scenario_from_value, Scenario, SimSection, StageSpec, Tolerance,
    SCENARIO_SCHEMA,
};
pub use summary::{summarize, StageSummary, SummaryMetrics, OMEGA_MIN};
