//! Mod-p cohomology of finite groups, the transfer exact sequence for a
//! normal subgroup of index p, and integral cohomology of Z/p x Z/p.

pub mod bar;
pub mod fast;
pub mod fp;
pub mod group;
pub mod integral;
pub mod les;

pub use bar::{Bar, BarDegree, Coefficients, Cochain, SubgroupMaps};
pub use fast::{cohomology_fp, cohomology_fp_bar, BettiTable, Coefficient, IntegralGroup, Method};
pub use fp::{Echelon, Fp};
pub use group::{Family, GroupTable};
pub use les::{
    adem_inequalities, filtration_first_page, transfer_exact_sequence, AdemVerdict, FiltrationReport,
    LesDegree, LesReport,
};
pub use integral::{admissibility_filter, cohomology_int_zpzp, AdmissibilityReport, ZpZpModule};
