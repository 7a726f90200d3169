//! Logic systems over NP decision problems, model-equivalent reductions
//! between them, and the engines and checkers used to validate those reductions.

pub mod asp;
pub mod error;
pub mod formula;
pub mod gadgets;
pub mod harness;
pub mod io;
pub mod ntm;
pub mod reductions;
pub mod sat;
pub mod systems;
pub mod tableau;

pub use error::{Error, Result};
pub use formula::{Clause, CnfFormula, EpfFormula, Formula, Interpretation, Literal, QuantifiedFormula, Var};
pub use reductions::{verify_reduction, Reduction, VerificationReport};
pub use sat::Limits;
pub use systems::{LogicSystem, System, SystemId, Theory};
