//! Sample spaces, the event algebra generated by their bases, probability
//! worlds and i.i.d. sampling.

mod convergence;
mod event;
mod realset;
mod sample;
mod space;
mod world;

pub use convergence::{weak_convergence_check, EventDeviation, WeakConvergenceReport};
pub use event::{Event, EventForm};
pub use realset::{Endpoint, Interval, RealSet};
pub use sample::{empirical_count, sample, sample_trial, Points, SampleVector};
pub use space::SampleSpace;
pub use world::{is_feasible, prob, Atom, DensityPiece, World};

pub(crate) use sample::draw_points;
pub(crate) use world::require_feasible;
