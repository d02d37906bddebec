mod curve;
mod roots;
mod solve;
mod template;
mod verify;

pub use curve::{blend_curves, ImageCurve};
pub use roots::{complex_roots, distinct_roots, rational_roots};
pub use solve::{format_curve, solve_ray, Ray, RaySystem};
pub use template::{infer_template, template_for, template_from_witness};
pub use verify::{
    blend_rays, choose_facons, coverage_check, facon_pairs, verify_thom_mather, CoverageReport, Grid, PairReport, PairSystems,
    SkippedPair, TubeReport,
};
