//! Multi-phase IDA* solver engine for the 4x4x4 cube.

mod coord;
pub mod counting;
pub mod cube;
pub mod error;
mod geometry;
pub mod heuristic;
pub mod moves;
pub mod phases;
pub mod pruning;
pub mod scramble;
pub mod search;

pub use cube::{format_state, parse_state, Color, CubeState, ValidationReport};
pub use error::{CacheError, ParseMovesError, ParseStateError, SolveError};
pub use heuristic::{twist_distance, DistanceTable, TwistDistance};
pub use moves::{format_moves, parse_moves, Axis, Move, MoveSequence, Turn};
pub use phases::PhaseId;
pub use search::{SearchConfig, Solution, Solver};
