use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::curve::{blend_curves, ImageCurve};
use super::roots::to_complex;
use super::solve::{Ray, RaySystem};
use super::template::infer_template;
use crate::asymptotic::{fiber_nonempty, AsymptoticSet};
use crate::error::{Error, Result};
use crate::facon::Facon;
use crate::poly::{Polynomial, PolynomialMap, Rational};
use crate::stratify::{facon_less, Stratum};

/// Relative tolerance of the arc-length quadrature used inside the checks.
const ARC_TOL: f64 = 1e-12;
/// Extrapolation nodes `u = EXTRAP_BASE * 2^k`, `k < EXTRAP_NODES`.
const EXTRAP_NODES: usize = 6;
const EXTRAP_BASE: f64 = 32.0;
const FD_STEP: f64 = 1e-5;
const EPS0: f64 = 1.0;

/// Sampling of the two-strata configuration.
#[derive(Clone, Debug)]
pub struct Grid {
    pub u_samples: usize,
    pub t_samples: usize,
    /// Absolute tolerance of the commutation residuals.
    pub tol: f64,
    /// Start point; chosen automatically when absent.
    pub start: Option<Vec<Rational>>,
    /// Negative control: add `1e-3` to ρ at this sample.
    pub fault: Option<usize>,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            u_samples: 5,
            t_samples: 5,
            tol: 1e-9,
            start: None,
            fault: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub lower: String,
    pub upper: String,
    pub lower_facon: String,
    pub upper_facon: String,
    pub start: Vec<String>,
    pub max_pi_residual: f64,
    pub max_rho_residual: f64,
    /// Largest ρ found at a stratum point (zero when ρ vanishes there).
    pub rho_on_stratum: f64,
    pub rho_monotone: bool,
    pub rank_ok: bool,
    pub expected_rank: usize,
    pub min_rank: usize,
    pub samples: usize,
    pub violations: Vec<String>,
}

impl PairReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SkippedPair {
    pub lower: String,
    pub upper: String,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverageReport {
    pub trials: usize,
    pub covered: usize,
    pub on_asymptotic_set: usize,
    /// Points that were neither on S_F nor had a fiber.
    pub failures: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct TubeReport {
    pub pairs: Vec<PairReport>,
    pub skipped: Vec<SkippedPair>,
    pub coverage: Option<CoverageReport>,
}

impl TubeReport {
    pub fn passed(&self) -> bool {
        self.pairs.iter().all(PairReport::passed) && self.coverage.as_ref().is_none_or(|c| c.covered == c.trials)
    }
}

/// Convex combination of ray images sharing a limit point.
pub fn blend_rays(rays: &[Ray], weights: &[f64]) -> Result<ImageCurve> {
    let images: Vec<ImageCurve> = rays.iter().map(|r| r.image.clone()).collect();
    blend_curves(&images, weights)
}

fn dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

/// Neville extrapolation to `h = 0` of vector samples.
fn extrapolate(hs: &[f64], values: &[Vec<Complex64>]) -> Vec<Complex64> {
    let len = values[0].len();
    (0..len)
        .map(|c| {
            let mut p: Vec<Complex64> = values.iter().map(|v| v[c]).collect();
            let n = p.len();
            for level in 1..n {
                for i in 0..n - level {
                    let (hi, hj) = (hs[i], hs[i + level]);
                    p[i] = (p[i + 1] * hi - p[i] * hj) / (hi - hj);
                }
            }
            p[0]
        })
        .collect()
}

/// Façon pairs `κ_lower ≺ κ_upper` (or equal labels), by position.
pub fn facon_pairs(lower: &Stratum, upper: &Stratum) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, kl) in lower.facon_set.iter().enumerate() {
        for (j, ku) in upper.facon_set.iter().enumerate() {
            if facon_less(kl, ku) || kl == ku {
                out.push((i, j));
            }
        }
    }
    out
}

pub fn choose_facons(lower: &Stratum, upper: &Stratum) -> Option<(usize, usize)> {
    facon_pairs(lower, upper).into_iter().next()
}

/// Next point of a doubling continuation, assuming each parameter scales
/// like a power of `u`.
fn predict(prev: Option<&[Complex64]>, cur: &[Complex64]) -> Vec<Complex64> {
    match prev {
        Some(p) => p
            .iter()
            .zip(cur)
            .map(|(a, b)| if a.norm() == 0.0 { *b } else { b * b / a })
            .collect(),
        None => cur.to_vec(),
    }
}

/// Parameters `1, 2, 4, ..` up to `u` (a power of two times `1`).
fn doubling(u: f64) -> impl Iterator<Item = f64> {
    let steps = u.max(1.0).log2().round() as i32;
    (0..=steps).map(|k| 2f64.powi(k))
}

/// The two ray systems of a nested pair.
#[derive(Clone, Debug)]
pub struct PairSystems {
    pub lower: RaySystem,
    pub upper: RaySystem,
    pub lower_dim: i64,
    upper_equations: Vec<Polynomial>,
}

/// Start point data of a pair: rays from `a` and the limit lower curve.
struct Anchor {
    upper: Ray,
    lower: Ray,
    gamma: ImageCurve,
    gap: f64,
}

impl PairSystems {
    pub fn new(f: &PolynomialMap, lower: &Stratum, upper: &Stratum) -> Result<PairSystems> {
        let (i, j) = choose_facons(lower, upper).ok_or_else(|| {
            Error::Precondition(format!("no façon of {} precedes a façon of {}", lower.label, upper.label))
        })?;
        PairSystems::for_facons(f, lower, upper, i, j)
    }

    /// Systems for façon `i` of `lower` and façon `j` of `upper`.
    pub fn for_facons(f: &PolynomialMap, lower: &Stratum, upper: &Stratum, i: usize, j: usize) -> Result<PairSystems> {
        let kl: &Facon = &lower.facon_set[i];
        let ku: &Facon = &upper.facon_set[j];
        let tl = infer_template(f, lower, kl, &lower.witnesses[i])?;
        let tu = infer_template(f, upper, ku, &upper.witnesses[j])?;
        Ok(PairSystems {
            lower: RaySystem::new(f, lower, kl, &tl)?,
            upper: RaySystem::new(f, upper, ku, &tu)?,
            lower_dim: lower.dimension,
            upper_equations: upper.equations.generators().to_vec(),
        })
    }

    /// Lower ray from `ray(u)`, continued from the lower ray at `ray(1)`.
    fn follow(&self, sys: &RaySystem, ray: &ImageCurve, u: f64, reference: &[Complex64]) -> Result<Ray> {
        let mut prev: Option<Vec<Complex64>> = None;
        let mut r: Vec<Complex64> = reference.to_vec();
        let mut last = None;
        for v in doubling(u) {
            let next = sys.continue_from(&ray.at(v), &predict(prev.as_deref(), &r))?;
            prev = Some(std::mem::replace(&mut r, next.values.clone()));
            last = Some(next);
        }
        last.ok_or_else(|| Error::Precondition("empty continuation".into()))
    }

    /// Limit of the lower rays started along `ray` as its parameter tends to
    /// infinity: a curve inside the upper stratum ending on the lower one.
    /// `reference` is the lower ray from `ray(1)`.
    fn limit_lower_curve(&self, ray: &ImageCurve, reference: &[Complex64]) -> Result<ImageCurve> {
        let mut hs = Vec::with_capacity(EXTRAP_NODES);
        let mut vals = Vec::with_capacity(EXTRAP_NODES);
        let mut prev = Some(self.follow(&self.lower, ray, EXTRAP_BASE / 2.0, reference)?.values);
        let mut r = self.follow(&self.lower, ray, EXTRAP_BASE, reference)?.values;
        for k in 0..EXTRAP_NODES {
            let u = EXTRAP_BASE * 2f64.powi(k as i32);
            if k > 0 {
                let next = self.lower.continue_from(&ray.at(u), &predict(prev.as_deref(), &r))?.values;
                prev = Some(std::mem::replace(&mut r, next));
            }
            hs.push(1.0 / u);
            vals.push(self.lower.image_coefficients(&r));
        }
        self.lower.curve_from_coefficients(&extrapolate(&hs, &vals))
    }

    /// Whether the point at parameter `t` of the lower ray through the upper
    /// anchor ray at `u` lies in the tapered upper tube.
    fn in_tube(&self, anchor: &Anchor, u: f64, t: f64) -> Result<bool> {
        let low = self.follow(&self.lower, &anchor.upper.image, u, &anchor.lower.values)?;
        let up_u = self.follow(&self.upper, &anchor.upper.image, u, &anchor.upper.values)?;
        let up_x = self.follow(&self.upper, &low.image, t, &up_u.values)?;
        let eps = EPS0.min(dist(&up_x.limit, &low.limit) / 2.0);
        Ok(up_x.curvilinear_distance(1.0, ARC_TOL)? <= eps / 2.0)
    }

    /// Relative size of the upper stratum equations along `gamma`.
    fn off_upper(&self, gamma: &ImageCurve) -> f64 {
        let mut worst: f64 = 0.0;
        for s in [1.5, 2.0, 4.0] {
            let x = gamma.at(s);
            for p in &self.upper_equations {
                let v = p.evaluate_slice(&x).map_or(f64::INFINITY, |v| v.norm());
                worst = worst.max(v / (1.0 + p.evaluate_slice(&x.iter().map(|z| Complex64::new(z.norm(), 0.0)).collect::<Vec<_>>()).map_or(0.0, |v| v.norm())));
            }
        }
        worst
    }

    /// `(π_lower, ρ_lower)` from the lower ray through `x`, as real numbers.
    fn pi_rho(&self, x: &[Complex64], reference: &[Complex64]) -> Result<Vec<f64>> {
        let r = self.lower.solve_numeric_near(x, Some(reference))?;
        let mut out: Vec<f64> = r.limit.iter().flat_map(|z| [z.re, z.im]).collect();
        out.push(r.curvilinear_distance(1.0, ARC_TOL)?);
        Ok(out)
    }

    /// Real rank of `x -> (π, ρ)` by central differences.
    fn rank_at(&self, x: &[Complex64], reference: &[Complex64]) -> Result<usize> {
        let m = x.len();
        let rows = 2 * m + 1;
        let mut jac = DMatrix::<f64>::zeros(rows, 2 * m);
        for col in 0..2 * m {
            let dir = if col % 2 == 0 {
                Complex64::new(FD_STEP, 0.0)
            } else {
                Complex64::new(0.0, FD_STEP)
            };
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[col / 2] += dir;
            xm[col / 2] -= dir;
            let (fp, fm) = (self.pi_rho(&xp, reference)?, self.pi_rho(&xm, reference)?);
            for r in 0..rows {
                jac[(r, col)] = (fp[r] - fm[r]) / (2.0 * FD_STEP);
            }
        }
        let sv = jac.singular_values();
        let top = sv.iter().copied().fold(0.0, f64::max);
        Ok(sv.iter().filter(|&&s| s > 1e-6 * top).count())
    }

    /// Start point acceptable for the construction: both rays exist, the
    /// upper limit stays off the lower stratum and the limit lower curve
    /// lands where the lower ray does.
    fn admissible(&self, a: &[Complex64]) -> Option<Anchor> {
        let upper = self.upper.solve_numeric(a).ok()?;
        if upper.non_isolated {
            return None;
        }
        // Among lower rays with equal limits, keep the one whose limit
        // curve runs inside the closure of the upper stratum.
        let mut best: Option<(f64, Ray, ImageCurve)> = None;
        for lower in self.lower.branches(a) {
            if lower.non_isolated {
                continue;
            }
            let Ok(gamma) = self.limit_lower_curve(&upper.image, &lower.values) else {
                continue;
            };
            let Ok(end) = gamma.limit() else {
                continue;
            };
            let scale = 1.0 + lower.limit.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if dist(&end, &lower.limit) > 1e-7 * scale {
                continue;
            }
            let off = self.off_upper(&gamma);
            if best.as_ref().is_none_or(|(b, _, _)| off < *b - 1e-9) {
                best = Some((off, lower, gamma));
            }
        }
        let (_, lower, gamma) = best?;
        let end = gamma.limit().ok()?;
        let gap = dist(&upper.limit, &end);
        if gap <= 1e-6 {
            return None;
        }
        Some(Anchor {
            upper,
            lower,
            gamma,
            gap,
        })
    }
}

fn candidate_starts(n: usize) -> Vec<Vec<Rational>> {
    const VALUES: [i64; 6] = [1, 2, 3, -1, -2, -3];
    let mut out: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                VALUES.iter().map(move |&x| {
                    let mut v = v.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out.sort_by_key(|v| {
        let key: Vec<usize> = v.iter().map(|x| VALUES.iter().position(|y| y == x).unwrap_or(0)).collect();
        (v.iter().map(|x| x.abs()).max(), v.iter().map(|x| x.abs()).sum::<i64>(), key)
    });
    out.into_iter()
        .map(|v| v.into_iter().map(|x| Rational::from_integer(x.into())).collect())
        .collect()
}

/// Sample the Thom-Mather commutation relations for `lower ⊂ closure(upper)`.
/// Façon pairs are tried in order until one admits a start point.
pub fn verify_thom_mather(
    f: &PolynomialMap,
    sf: &AsymptoticSet,
    lower: &Stratum,
    upper: &Stratum,
    grid: &Grid,
) -> Result<PairReport> {
    let pairs = facon_pairs(lower, upper);
    if pairs.is_empty() {
        return Err(Error::Precondition(format!(
            "no façon of {} precedes a façon of {}",
            lower.label, upper.label
        )));
    }
    let starts = match &grid.start {
        Some(a) => {
            if sf.contains(a)? {
                return Err(Error::Precondition("start point lies on the asymptotic set".into()));
            }
            vec![a.clone()]
        }
        None => {
            let mut v = Vec::new();
            for a in candidate_starts(f.n()) {
                if !sf.contains(&a)? {
                    v.push(a);
                }
            }
            v
        }
    };
    for (i, j) in pairs {
        let sys = match PairSystems::for_facons(f, lower, upper, i, j) {
            Ok(s) => s,
            Err(e @ Error::ResourceLimit(_)) => return Err(e),
            Err(_) => continue,
        };
        for a in &starts {
            let ac: Vec<Complex64> = a.iter().map(to_complex).collect();
            if let Some(anchor) = sys.admissible(&ac) {
                return sample_pair(&sys, lower, upper, a, &anchor, grid);
            }
        }
    }
    Err(Error::Inconsistent(format!(
        "no admissible start point for {} under {}",
        lower.label, upper.label
    )))
}

fn sample_pair(
    sys: &PairSystems,
    lower: &Stratum,
    upper: &Stratum,
    a: &[Rational],
    anchor: &Anchor,
    grid: &Grid,
) -> Result<PairReport> {
    let up = &anchor.upper;
    // Tapered radii: ε on the upper tube, ε' = ε/2 for the inner shell.
    let eps = EPS0.min(anchor.gap / 2.0);
    let eps_inner = eps / 2.0;
    let mut u0 = 1.0;
    while up.curvilinear_distance(u0, ARC_TOL)? > eps_inner {
        u0 *= 2.0;
        if u0 > 1e9 {
            return Err(Error::Divergent("upper ray never enters the inner tube".into()));
        }
    }
    let nu = grid.u_samples;
    let nt = grid.t_samples;
    // The tube is tapered toward the lower stratum: every sampled point must
    // sit within ε'(π(x)) of its upper projection.
    while !(0..nt).all(|i| sys.in_tube(anchor, u0, 2f64.powi(i as i32)).unwrap_or(false)) {
        u0 *= 2.0;
        if u0 > 1e9 {
            return Err(Error::Divergent("samples never enter the tapered tube".into()));
        }
    }
    let idx: Vec<(usize, usize)> = (0..nu).flat_map(|j| (0..nt).map(move |i| (j, i))).collect();

    struct Sample {
        pi_res: f64,
        rho_res: f64,
        rho: f64,
        rho_stratum: f64,
        rank: usize,
    }
    let results: Vec<Result<Sample>> = idx
        .par_iter()
        .enumerate()
        .map(|(k, &(j, i))| {
            let uj = u0 * 2f64.powi(j as i32);
            let ti = 2f64.powi(i as i32);
            // Rays through a_j, continued from the rays through a.
            let low = sys.follow(&sys.lower, &up.image, uj, &anchor.lower.values)?;
            let up_j = sys.follow(&sys.upper, &up.image, uj, &up.values)?;
            let x = low.point_at(ti);
            let pi_x = low.project_pi();
            // Upper ray through x, continued along the lower ray from a_j.
            let up_x = sys.follow(&sys.upper, &low.image, ti, &up_j.values)?;
            let low_x = sys.follow(&sys.lower, &low.image, ti, &low.values)?;
            let gamma_x = sys.limit_lower_curve(&up_x.image, &low_x.values)?;
            let pi_pi_x = gamma_x.limit()?;
            let mut rho = anchor.gamma.arc_length(ti, ARC_TOL)?;
            if grid.fault == Some(k) {
                rho += 1e-3;
            }
            let rho_pi = gamma_x.arc_length(1.0, ARC_TOL)?;
            Ok(Sample {
                pi_res: dist(&pi_pi_x, &pi_x),
                rho_res: (rho_pi - rho).abs(),
                rho,
                rho_stratum: low.curvilinear_distance(f64::INFINITY, ARC_TOL)?,
                rank: sys.rank_at(&x, &low_x.values)?,
            })
        })
        .collect();

    let expected_rank = 2 * sys.lower_dim.max(0) as usize + 1;
    let mut report = PairReport {
        lower: lower.label.clone(),
        upper: upper.label.clone(),
        lower_facon: sys.lower.facon.to_string(),
        upper_facon: sys.upper.facon.to_string(),
        start: a.iter().map(ToString::to_string).collect(),
        max_pi_residual: 0.0,
        max_rho_residual: 0.0,
        rho_on_stratum: 0.0,
        rho_monotone: true,
        rank_ok: true,
        expected_rank,
        min_rank: usize::MAX,
        samples: 0,
        violations: Vec::new(),
    };
    let mut rhos = vec![vec![f64::NAN; nt]; nu];
    for (r, &(j, i)) in results.into_iter().zip(&idx) {
        match r {
            Ok(s) => {
                report.samples += 1;
                report.max_pi_residual = report.max_pi_residual.max(s.pi_res);
                report.max_rho_residual = report.max_rho_residual.max(s.rho_res);
                report.rho_on_stratum = report.rho_on_stratum.max(s.rho_stratum);
                report.min_rank = report.min_rank.min(s.rank);
                rhos[j][i] = s.rho;
                if s.pi_res.is_nan() || s.pi_res > grid.tol {
                    report.violations.push(format!("pi residual {:.3e} at sample ({j},{i})", s.pi_res));
                }
                if s.rho_res.is_nan() || s.rho_res > grid.tol {
                    report.violations.push(format!("rho residual {:.3e} at sample ({j},{i})", s.rho_res));
                }
                if s.rank != expected_rank {
                    report.rank_ok = false;
                    report.violations.push(format!("rank {} at sample ({j},{i})", s.rank));
                }
            }
            Err(e) => report.violations.push(format!("sample ({j},{i}) failed: {e}")),
        }
    }
    if report.min_rank == usize::MAX {
        report.min_rank = 0;
    }
    for row in &rhos {
        if row.windows(2).any(|w| !(w[1] < w[0])) {
            report.rho_monotone = false;
        }
    }
    if !report.rho_monotone {
        report.violations.push("rho not strictly decreasing along a ray".into());
    }
    if report.rho_on_stratum != 0.0 {
        report.violations.push("rho nonzero on the stratum".into());
    }
    Ok(report)
}

/// Random rational points are either on S_F or in the image of F.
pub fn coverage_check(f: &PolynomialMap, sf: &AsymptoticSet, trials: usize, seed: u64) -> Result<CoverageReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vec<Rational>> = (0..trials)
        .map(|_| {
            (0..f.n())
                .map(|_| Rational::new(rng.gen_range(-5i64..=5).into(), rng.gen_range(1i64..=3).into()))
                .collect()
        })
        .collect();
    let verdicts: Vec<(bool, bool)> = points
        .par_iter()
        .map(|a| {
            let on = sf.contains(a)?;
            Ok((on, on || fiber_nonempty(f, a)?))
        })
        .collect::<Result<_>>()?;
    let mut report = CoverageReport {
        trials,
        covered: 0,
        on_asymptotic_set: 0,
        failures: Vec::new(),
    };
    for (a, (on, ok)) in points.iter().zip(verdicts) {
        report.on_asymptotic_set += on as usize;
        if ok {
            report.covered += 1;
        } else {
            report.failures.push(a.iter().map(ToString::to_string).collect());
        }
    }
    Ok(report)
}
