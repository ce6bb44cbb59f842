//! Small bundled inputs: three SetCover families used by the reduction
//! tests and the three-vertex path used to compare SIS with renewal.

use super::SetCoverInstance;
use crate::graph::TemporalGraph;
use crate::instance::{Objective, ProblemInstance};

/// S_1 = {1,2,3}, S_2 = {3,7,8}, S_3 = {4,5,6} over [8]; used with δ = 3
/// for both the spread tree and the viral tree.
pub fn cover8_setcover() -> SetCoverInstance {
    SetCoverInstance::new(8, vec![vec![1, 2, 3], vec![3, 7, 8], vec![4, 5, 6]], 3).unwrap()
}

/// S_1 = {1,2,3}, S_2 = {3,6,7}, S_3 = {4,5} over [7]; the MinNonViralTime
/// tree example with δ = 3, d = 1.
pub fn cover7_setcover() -> SetCoverInstance {
    SetCoverInstance::new(7, vec![vec![1, 2, 3], vec![3, 6, 7], vec![4, 5]], 3).unwrap()
}

/// S_0 = {1,2}, S_1 = {3,5,6}, S_2 = {4} over [6] for the periodic path.
pub fn cover6_setcover() -> SetCoverInstance {
    SetCoverInstance::new(6, vec![vec![1, 2], vec![3, 5, 6], vec![4]], 3).unwrap()
}

/// Path s–x–y with δ = 2: `sx` at steps 1 and 3, `xy` at step 4.
pub const SIS_PATH_TGFT: &str = "tgf 1\n3 5\ne 0 1 1 3\ne 1 2 4\n";

/// Under classic SIS, transmitting at (1,3) reaches fewer vertices than
/// transmitting at (3) alone: the second transmission finds `x` still
/// active and cannot renew it, so `x` has expired when `xy` appears.
pub fn sis_path_instance() -> ProblemInstance {
    let g = crate::graph::parse_graph(SIS_PATH_TGFT).unwrap();
    ProblemInstance::new(g, 0, 2, 2, Objective::MaxSpread).unwrap()
}

pub fn sis_path_graph() -> TemporalGraph {
    sis_path_instance().graph
}
