use super::OracleId;
use crate::model::Automaton;

#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub name: &'static str,
    pub oracle: Option<OracleId>,
    pub source: &'static str,
}

impl Fixture {
    pub fn automaton(&self) -> Automaton {
        match Automaton::from_text(self.source) {
            Ok((m, _)) => m,
            Err(e) => panic!("fixture {} is invalid:\n{e}", self.name),
        }
    }

    pub fn file_name(&self) -> String {
        format!("{}.wtl", self.name)
    }
}

macro_rules! fixture_file {
    ($name:literal, $oracle:expr) => {
        Fixture {
            name: $name,
            oracle: $oracle,
            source: include_str!(concat!("../../../../fixtures/", $name, ".wtl")),
        }
    };
}

/// Text of the toy linear bounded automaton.
pub const LBA_TOY: &str = include_str!("../../../../fixtures/toy.lba");

const CATALOG: &[Fixture] = &[
    fixture_file!("exa21", Some(OracleId::LMismatch)),
    fixture_file!("exa22", Some(OracleId::LUnionExa22)),
    fixture_file!("exa22_l1", Some(OracleId::L1Exa22)),
    fixture_file!("exa22_l2", Some(OracleId::L2Exa22)),
    fixture_file!("m_L1", Some(OracleId::L1Sec3)),
    fixture_file!("m_L2", Some(OracleId::L2Sec3)),
    fixture_file!("m_union_L1L2", Some(OracleId::LUnionSec3)),
    fixture_file!("m_abc_counts", Some(OracleId::LCountsAbc)),
    fixture_file!("m_astar", Some(OracleId::RegAstar)),
    fixture_file!("m_empty", None),
    fixture_file!("m_fin", None),
];

pub fn fixtures() -> &'static [Fixture] {
    CATALOG
}

pub fn fixture(name: &str) -> Option<Automaton> {
    CATALOG.iter().find(|f| f.name == name).map(Fixture::automaton)
}
