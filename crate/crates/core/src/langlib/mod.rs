//! Membership oracles for the witness languages, Parikh images, the fixture
//! catalog and a seeded generator of small random machines.

mod fixtures;
mod oracle;
mod parikh;
mod random;

pub use fixtures::{fixture, fixtures, Fixture, LBA_TOY};
pub use oracle::{nsl_length_probe, nsl_word, oracle, OracleId, UnknownOracle, ALL as ORACLES};
pub use parikh::{parikh_of, parikh_upto, ParikhSource, ParikhVector};
pub use random::{random_machine, RandomSpec};
