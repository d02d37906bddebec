//! Stratification of S_F by façons and star façons.

mod cells;
mod order;
mod star;

pub use cells::{arrangement_cells, partition_by_facons, CellFacons};
pub use order::{check_frontier, facon_less, merge_strata, order_of, point_less, render_dot, FrontierReport, Violation};
pub use star::{containment_matrix, star_stratify, Stratification, Stratum};
