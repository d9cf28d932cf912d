//! Covering lemmas, maximal functions on finite ultrametric trees and on
//! interval grids, `L^p` bounds, distribution functions, conditional
//! expectations and the martingale maximal inequality. All weights are exact
//! rationals.

mod covering;
mod martingale;
mod maximal;

pub use covering::{
    interval_reduce, max_multiplicity, same_union, ultra_ball_reduce, vitali_select_line, vitali_select_tree,
    Interval, LineBall, VitaliSelection,
};
pub use martingale::{cond_expectation, martingale_maximal, DoobCheck, Filtration, MartingaleReport, Partition};
pub use maximal::{
    adversarial_interval_family, distribution_identity, lp_constant, lp_maximal_bound, maximal_function,
    weak_type_audit_tree, weak_type_verify, DistributionReport, FiniteUltraTree, IntervalModel, LpReport,
    WeakType, WeakTypeModel,
};
