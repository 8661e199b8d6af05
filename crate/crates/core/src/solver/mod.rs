//! Time integration of a semi-discretization with downwind RK or multistep
//! methods. Implicit stages are solved simultaneously, by dense LU for linear
//! operator pairs and by Newton–Krylov otherwise.

mod newton;
mod run;
mod stepper;
mod trace;

pub use newton::{
    gmres, newton_continuation_solve, newton_krylov_solve, JacobianMode, NewtonOutcome,
    NewtonSettings, ParametrizedResidual,
};
pub use run::{run, step_schedule, RunConfig, RunOutput, STARTUP_FAMILY_R};
pub use stepper::{lmm_step, rk_step, HistoryEntry, StepContext, StepStats, Stepper};
pub use trace::{MonitorTrace, TraceRecord};
