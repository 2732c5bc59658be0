//! Log canonical thresholds of monomial ideals on smooth toric charts and
//! on `X × A^1`, computed from Newton polyhedra by exact linear programming.

mod ideal;
mod newton;
mod product;

pub use ideal::{ChartIdeal, IdealSheaf, MonomialSubscheme, SubschemeSpec};
pub use newton::{
    graded_family_lct_estimate, lct_chart, lct_chart_lp, lct_ideal_sheaf, lct_monomial,
    GradedLctEstimate, NewtonPolyhedron, Threshold,
};
pub use product::{lct_on_product_with_line, IdealSequenceOnXxA1};
