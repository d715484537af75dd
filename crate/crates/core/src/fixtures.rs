//! Bundled example instances.
//!
//! * `fig1`: a 9-unit, 3-group 0/1 matrix used as the textbook walkthrough of
//!   the search (groups `{1,2,3}`, `{4,5,6}`, `{7,8,9}`).
//! * `tennis`: an 8x8 co-occurrence matrix of tennis game features, counting
//!   players who rank in the top five for both features. Features
//!   `{3,4,5,6,7}` form group 1 and `{1,2,8}` group 2.

use crate::io::{parse_dense_csv, parse_grouping};
use crate::matrix::{Grouping, SymmetricMatrix};

pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub matrix_csv: &'static str,
    pub groups_csv: &'static str,
}

impl Fixture {
    pub fn matrix(&self) -> SymmetricMatrix {
        parse_dense_csv(self.matrix_csv, self.name).expect("bundled fixture parses")
    }

    pub fn grouping(&self) -> Grouping {
        parse_grouping(self.groups_csv, self.name).expect("bundled fixture parses")
    }

    pub fn matrix_file_name(&self) -> String {
        format!("{}.csv", self.name)
    }

    pub fn groups_file_name(&self) -> String {
        format!("{}_groups.csv", self.name)
    }
}

pub const FIG1: Fixture = Fixture {
    name: "fig1",
    description: "9x9 0/1 matrix, K=3, walkthrough with m_bar=2",
    matrix_csv: include_str!("../fixtures/fig1.csv"),
    groups_csv: include_str!("../fixtures/fig1_groups.csv"),
};

pub const TENNIS: Fixture = Fixture {
    name: "tennis",
    description: "8x8 tennis feature co-occurrence counts, K=2, m_bar=3",
    matrix_csv: include_str!("../fixtures/tennis.csv"),
    groups_csv: include_str!("../fixtures/tennis_groups.csv"),
};

pub const ALL: &[Fixture] = &[FIG1, TENNIS];

pub fn by_name(name: &str) -> Option<&'static Fixture> {
    ALL.iter().find(|f| f.name == name)
}

pub fn fig1_matrix() -> SymmetricMatrix {
    FIG1.matrix()
}

pub fn fig1_grouping() -> Grouping {
    FIG1.grouping()
}

pub fn tennis_matrix() -> SymmetricMatrix {
    TENNIS.matrix()
}

pub fn tennis_grouping() -> Grouping {
    TENNIS.grouping()
}
