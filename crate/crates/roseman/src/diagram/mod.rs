//! Combinatorial incidence data of a surface-knot diagram.

mod fixtures;
mod parse;
mod validate;

pub use fixtures::{fixture_source, load_fixture, FIXTURE_NAMES};
pub use parse::{parse_diagram, serialize_diagram};
pub use validate::{validate_diagram, ValidationReport, Violation};

use thiserror::Error;

pub use crate::dga_core::Sign;

macro_rules! label_newtype {
    ($name:ident, $prefix:literal) => {
        #[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
        pub struct $name(pub u32);

        impl std::fmt::Display for $name {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                write!(f, concat!($prefix, "{}"), self.0)
            }
        }
    };
}

label_newtype!(SheetId, "s");
label_newtype!(CurveId, "c");
label_newtype!(TripleId, "t");
label_newtype!(BranchId, "b");

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DoubleCurve {
    pub id: CurveId,
    pub over: SheetId,
    pub u_plus: SheetId,
    pub u_minus: SheetId,
}

/// Triple point. `b[α][β]` is the bottom sheet on side α of the top sheet
/// and side β of the middle sheet, with index 0 for `+` and 1 for `-`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TriplePoint {
    pub id: TripleId,
    pub t: SheetId,
    pub m_plus: SheetId,
    pub m_minus: SheetId,
    pub b: [[SheetId; 2]; 2],
    pub tm: CurveId,
    pub mb_plus: CurveId,
    pub mb_minus: CurveId,
    pub tb_plus: CurveId,
    pub tb_minus: CurveId,
}

impl TriplePoint {
    pub fn bpp(&self) -> SheetId {
        self.b[0][0]
    }
    pub fn bpm(&self) -> SheetId {
        self.b[0][1]
    }
    pub fn bmp(&self) -> SheetId {
        self.b[1][0]
    }
    pub fn bmm(&self) -> SheetId {
        self.b[1][1]
    }

    pub fn curves(&self) -> [CurveId; 5] {
        [self.tm, self.mb_plus, self.mb_minus, self.tb_plus, self.tb_minus]
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BranchPoint {
    pub id: BranchId,
    pub sign: Sign,
    pub dc: CurveId,
    pub sh: SheetId,
}

/// Sheets, double curves, triple points and branch points, each densely
/// labelled from 1. Element `k` of each vector carries label `k + 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Diagram {
    pub name: String,
    pub sheet_count: u32,
    pub curves: Vec<DoubleCurve>,
    pub triples: Vec<TriplePoint>,
    pub branches: Vec<BranchPoint>,
}

impl Diagram {
    pub fn empty(name: impl Into<String>, sheet_count: u32) -> Self {
        Diagram { name: name.into(), sheet_count, curves: vec![], triples: vec![], branches: vec![] }
    }

    pub fn curve(&self, c: CurveId) -> Option<&DoubleCurve> {
        self.curves.get((c.0 as usize).wrapping_sub(1))
    }

    pub fn triple(&self, t: TripleId) -> Option<&TriplePoint> {
        self.triples.get((t.0 as usize).wrapping_sub(1))
    }

    pub fn branch(&self, b: BranchId) -> Option<&BranchPoint> {
        self.branches.get((b.0 as usize).wrapping_sub(1))
    }

    pub fn sheets(&self) -> impl Iterator<Item = SheetId> {
        (1..=self.sheet_count).map(SheetId)
    }

    /// Branch points that index generators.
    pub fn positive_branches(&self) -> impl Iterator<Item = &BranchPoint> {
        self.branches.iter().filter(|b| b.sign == Sign::Plus)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: duplicate label {label}")]
    Duplicate { line: usize, label: String },
    #[error("line {line}: dangling reference to {label}")]
    Dangling { line: usize, label: String },
    #[error("labels of kind {kind} are not dense: missing {missing}")]
    NotDense { kind: &'static str, missing: String },
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
}
