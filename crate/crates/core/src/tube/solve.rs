use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Zero;

use super::curve::ImageCurve;
use super::roots::{distinct_roots, rational_roots, to_complex};
use crate::asymptotic::AsymptoticSet;
use crate::error::{Error, Result};
use crate::facon::Facon;
use crate::groebner::{fresh_name, InnerOrder, Ideal, MonomialOrder};
use crate::poly::{substitute_curve, Arena, ArenaRef, CurveAnsatz, LaurentExpansion, Polynomial, PolynomialMap, Rational};
use crate::stratify::Stratum;

const RESIDUAL_TOL: f64 = 1e-8;

/// A solved curve `γ` with `F(γ(1)) = start` and `F(γ(u)) -> limit`.
#[derive(Clone, Debug)]
pub struct Ray {
    pub template: CurveAnsatz,
    pub values: Vec<Complex64>,
    /// Exact symbol values when every one of them is rational.
    pub exact_values: Option<Vec<Rational>>,
    pub image: ImageCurve,
    pub start: Vec<Complex64>,
    pub limit: Vec<Complex64>,
    pub stratum: String,
    pub facon: Facon,
    /// Some symbol was free and set to 1.
    pub non_isolated: bool,
}

impl Ray {
    pub fn point_at(&self, u: f64) -> Vec<Complex64> {
        self.image.at(u)
    }

    /// Arc length of the image curve from `u` to the limit.
    pub fn curvilinear_distance(&self, u: f64, rel_tol: f64) -> Result<f64> {
        if u < 1.0 {
            return Err(Error::Precondition(format!("ray parameter {u} below 1")));
        }
        self.image.arc_length(u, rel_tol)
    }

    pub fn project_pi(&self) -> Vec<Complex64> {
        self.limit.clone()
    }

    /// Source curve with exact coefficients: per coordinate, `(exponent,
    /// coefficient)` pairs.
    pub fn exact_curve(&self) -> Option<Vec<Vec<(i64, Rational)>>> {
        let v = self.exact_values.as_ref()?;
        let mut out = Vec::new();
        for c in self.template.coords() {
            let shift = c.shift.evaluate_rational(v).ok()?;
            let mut terms = Vec::new();
            if c.weight == 0 {
                terms.push((0, shift));
            } else {
                let coeff = c.coeff.evaluate_rational(v).ok()?;
                if c.weight > 0 {
                    terms.push((c.weight, coeff));
                    terms.push((0, shift));
                } else {
                    terms.push((0, shift));
                    terms.push((c.weight, coeff));
                }
            }
            terms.retain(|t| !t.1.is_zero());
            out.push(terms);
        }
        Some(out)
    }
}

/// Printable form of an exact source curve, e.g. `(1 + 1/u, -2 + 1/u, u^2)`.
pub fn format_curve(curve: &[Vec<(i64, Rational)>]) -> String {
    let coord = |terms: &Vec<(i64, Rational)>| -> String {
        if terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (k, c)) in terms.iter().enumerate() {
            let neg = c < &Rational::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let one = a == Rational::from_integer(1.into());
            let body = match k {
                0 => a.to_string(),
                k if *k > 0 => {
                    let u = if *k == 1 { "u".to_string() } else { format!("u^{k}") };
                    if one {
                        u
                    } else {
                        format!("{a}*{u}")
                    }
                }
                k => {
                    let u = if *k == -1 { "u".to_string() } else { format!("u^{}", -k) };
                    if one {
                        format!("1/{u}")
                    } else {
                        format!("{a}/{u}")
                    }
                }
            };
            s.push_str(&body);
        }
        s
    };
    format!("({})", curve.iter().map(coord).collect::<Vec<_>>().join(", "))
}

fn eval_scaled(p: &Polynomial, point: &[Complex64]) -> (Complex64, f64) {
    let mut val = Complex64::zero();
    let mut scale = 0.0;
    for (m, c) in p.terms() {
        let mut t = to_complex(c);
        for (j, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                t *= point[j].powu(e);
            }
        }
        scale += t.norm();
        val += t;
    }
    (val, scale)
}

/// The polynomial system of one ray template against one stratum, with the
/// start point as parameters.
#[derive(Clone, Debug)]
pub struct RaySystem {
    template: CurveAnsatz,
    expansions: Vec<LaurentExpansion>,
    /// `u^0` coefficients, over the template symbols.
    limit_map: Vec<Polynomial>,
    /// `F(γ(1))`, over the template symbols.
    at_one: Vec<Polynomial>,
    /// Positive-power coefficients and stratum equations at the limit.
    constraints: Vec<Polynomial>,
    nonzero: Polynomial,
    /// Symbols followed by the start-point parameters.
    joint: ArenaRef,
    param_basis: Vec<Polynomial>,
    pub stratum: String,
    pub facon: Facon,
}

impl RaySystem {
    pub fn new(f: &PolynomialMap, stratum: &Stratum, facon: &Facon, template: &CurveAnsatz) -> Result<RaySystem> {
        if template.len() != f.n() {
            return Err(Error::InvalidAnsatz(format!(
                "template has {} coordinates for a map in {} variables",
                template.len(),
                f.n()
            )));
        }
        for (j, c) in template.coords().iter().enumerate() {
            let diverging = facon.diverging.contains(&j);
            if diverging != (c.weight > 0) {
                return Err(Error::InvalidAnsatz(format!(
                    "weight sign of coordinate {} does not match {facon}",
                    j + 1
                )));
            }
            if facon.fixed.contains(&j) && c.weight > 0 {
                return Err(Error::InvalidAnsatz(format!("fixed coordinate {} diverges", j + 1)));
            }
        }
        let symbols = template.symbols().clone();
        let expansions: Vec<LaurentExpansion> = f
            .components()
            .iter()
            .map(|p| substitute_curve(p, template))
            .collect::<Result<_>>()?;
        let limit_map: Vec<Polynomial> = expansions.iter().map(|e| e.coeff(0)).collect();
        let at_one: Vec<Polynomial> = expansions
            .iter()
            .map(|e| e.terms().fold(Polynomial::zero(&symbols), |acc, (_, p)| &acc + p))
            .collect();
        let mut constraints: Vec<Polynomial> = Vec::new();
        for e in &expansions {
            constraints.extend(e.positive_part().into_iter().map(|(_, p)| p));
        }
        for g in stratum.equations.generators() {
            constraints.push(g.compose(&limit_map)?);
        }
        constraints.retain(|p| !p.is_zero());
        let nonzero = template
            .coords()
            .iter()
            .filter(|c| c.weight != 0 && !c.coeff.is_constant())
            .fold(Polynomial::one(&symbols), |acc, c| &acc * &c.coeff);

        let mut names: Vec<String> = symbols.names().to_vec();
        for a in f.target().names() {
            let tmp = Arena::new(names.clone())?;
            names.push(if names.contains(a) { fresh_name(&tmp, "p") } else { a.clone() });
        }
        let joint = Arena::new(names)?;
        let m = symbols.len();
        let n = f.n();
        let sym_map: Vec<usize> = (0..m).collect();
        let mut gens: Vec<Polynomial> = constraints.iter().map(|p| p.embed(&joint, &sym_map)).collect();
        for (i, v) in at_one.iter().enumerate() {
            gens.push(&v.embed(&joint, &sym_map) - &Polynomial::var(&joint, m + i));
        }
        let mut ideal = Ideal::new(&joint, gens);
        if !nonzero.is_constant() {
            ideal = ideal.saturate(&nonzero.embed(&joint, &sym_map))?;
        }
        let order = MonomialOrder::Block(vec![
            ((0..m).collect(), InnerOrder::Lex),
            ((m..m + n).collect(), InnerOrder::GrevLex),
        ]);
        let param_basis = ideal.with_order(order)?.groebner()?.polynomials().to_vec();
        Ok(RaySystem {
            template: template.clone(),
            expansions,
            limit_map,
            at_one,
            constraints,
            nonzero,
            joint,
            param_basis,
            stratum: stratum.label.clone(),
            facon: facon.clone(),
        })
    }

    pub fn template(&self) -> &CurveAnsatz {
        &self.template
    }

    fn nsym(&self) -> usize {
        self.template.symbols().len()
    }

    /// Largest relative residual of the system at `values` for start `a`.
    fn residual(&self, values: &[Complex64], a: &[Complex64]) -> f64 {
        let mut worst: f64 = 0.0;
        for p in &self.constraints {
            let (v, s) = eval_scaled(p, values);
            worst = worst.max(v.norm() / (1.0 + s));
        }
        for (p, ai) in self.at_one.iter().zip(a) {
            let (v, s) = eval_scaled(p, values);
            worst = worst.max((v - ai).norm() / (1.0 + s + ai.norm()));
        }
        // Saturation already removed the branches where h vanishes
        // identically; only reject exact zeros here.
        let (h, _) = eval_scaled(&self.nonzero, values);
        if h.norm() == 0.0 || !h.norm().is_finite() {
            worst = worst.max(1.0);
        }
        worst
    }

    /// Gauss-Newton steps on the full system; back substitution through the
    /// triangular basis loses digits when parameters differ widely in size.
    fn refine(&self, values: Vec<Complex64>, a: &[Complex64]) -> Vec<Complex64> {
        self.newton(values, a, 4)
    }

    fn newton(&self, mut values: Vec<Complex64>, a: &[Complex64], steps: usize) -> Vec<Complex64> {
        let m = values.len();
        let eqs: Vec<(&Polynomial, Complex64)> = self
            .constraints
            .iter()
            .map(|p| (p, Complex64::zero()))
            .chain(self.at_one.iter().zip(a).map(|(p, ai)| (p, *ai)))
            .collect();
        let mut best = self.residual(&values, a);
        for _ in 0..steps {
            if best < 1e-15 {
                break;
            }
            let f = DVector::from_iterator(eqs.len(), eqs.iter().map(|(p, ai)| eval_scaled(p, &values).0 - ai));
            let jac = DMatrix::from_fn(eqs.len(), m, |r, c| eval_scaled(&eqs[r].0.derivative(c), &values).0);
            let Ok(step) = jac.svd(true, true).solve(&f, 1e-14) else {
                break;
            };
            let next: Vec<Complex64> = values.iter().zip(step.iter()).map(|(x, d)| x - d).collect();
            let r = self.residual(&next, a);
            if !(r < best) {
                break;
            }
            values = next;
            best = r;
        }
        values
    }

    fn limit_of(&self, values: &[Complex64]) -> Vec<Complex64> {
        self.limit_map.iter().map(|p| eval_scaled(p, values).0).collect()
    }

    /// Numeric solutions from the parametric basis; `(values, non_isolated)`.
    fn numeric_solutions(&self, basis: &[Polynomial], params: &[Complex64]) -> Vec<(Vec<Complex64>, bool)> {
        let m = self.nsym();
        let mut out = Vec::new();
        let mut point = vec![Complex64::zero(); m + params.len()];
        point[m..].copy_from_slice(params);
        descend(basis, m, m, &mut point, false, &mut out);
        out.into_iter().map(|(p, free)| (p[..m].to_vec(), free)).collect()
    }

    /// Exact rational solutions at a rational start point.
    fn exact_solutions(&self, a: &[Rational]) -> Result<Vec<Vec<Rational>>> {
        let symbols = self.template.symbols();
        let mut gens = self.constraints.clone();
        for (v, ai) in self.at_one.iter().zip(a) {
            gens.push(v - &Polynomial::constant(symbols, ai.clone()));
        }
        let mut ideal = Ideal::new(symbols, gens);
        if !self.nonzero.is_constant() {
            ideal = ideal.saturate(&self.nonzero)?;
        }
        let gb = ideal.with_order(MonomialOrder::Lex)?.groebner()?;
        let m = self.nsym();
        let mut out = Vec::new();
        let mut vals = vec![Rational::zero(); m];
        descend_exact(gb.polynomials(), m, &mut vals, &mut out);
        Ok(out)
    }

    fn build(&self, values: Vec<Complex64>, exact: Option<Vec<Rational>>, start: &[Complex64], free: bool) -> Result<Ray> {
        let image = self.curve_from_coefficients(&self.image_coefficients(&values))?;
        let limit = self.limit_of(&values);
        Ok(Ray {
            template: self.template.clone(),
            values,
            exact_values: exact,
            image,
            start: start.to_vec(),
            limit,
            stratum: self.stratum.clone(),
            facon: self.facon.clone(),
            non_isolated: free,
        })
    }

    /// Nearest limit wins; ties go to the values nearest `reference`, or
    /// without one to the lexicographically larger values.
    fn pick(
        &self,
        cands: Vec<(Vec<Complex64>, bool)>,
        a: &[Complex64],
        reference: Option<&[Complex64]>,
    ) -> Option<(Vec<Complex64>, bool)> {
        let dist = |v: &[Complex64]| -> f64 {
            self.limit_of(v)
                .iter()
                .zip(a)
                .map(|(x, y)| (x - y).norm_sqr())
                .sum::<f64>()
                .sqrt()
        };
        let mut best: Option<(f64, Vec<Complex64>, bool)> = None;
        for (v, free) in cands {
            let v = if free { v } else { self.refine(v, a) };
            if self.residual(&v, a) > RESIDUAL_TOL {
                continue;
            }
            let d = dist(&v);
            let better = match &best {
                None => true,
                Some((bd, bv, _)) => {
                    if (d - bd).abs() > 1e-9 * (1.0 + bd) {
                        d < *bd
                    } else if let Some(r) = reference {
                        let (dv, db) = (relative_distance(&v, r), relative_distance(bv, r));
                        if (dv - db).abs() > 1e-12 * (1.0 + db) {
                            dv < db
                        } else {
                            prefer(&v, bv)
                        }
                    } else {
                        prefer(&v, bv)
                    }
                }
            };
            if better {
                best = Some((d, v, free));
            }
        }
        best.map(|(_, v, f)| (v, f))
    }

    /// All rays from `a` whose limit is nearest to `a`, in tie-break order.
    pub fn branches(&self, a: &[Complex64]) -> Vec<Ray> {
        let mut cands: Vec<(Vec<Complex64>, bool)> = Vec::new();
        let mut rest = self.numeric_solutions(&self.param_basis, a);
        while let Some(best) = self.pick(rest.clone(), a, None) {
            if let Some(first) = cands.first() {
                let d = |v: &[Complex64]| dist_values(&self.limit_of(v), a);
                if (d(&best.0) - d(&first.0)).abs() > 1e-9 * (1.0 + d(&first.0)) {
                    break;
                }
            }
            rest.retain(|(v, _)| dist_values(v, &best.0) > 1e-9 * (1.0 + v.iter().map(|z| z.norm()).sum::<f64>()));
            cands.push(best);
        }
        cands.into_iter().filter_map(|(v, free)| self.build(v, None, a, free).ok()).collect()
    }

    /// The ray from `a` on the branch of `reference`, the parameters of a
    /// ray from a nearby point of the same family.
    pub fn continue_from(&self, a: &[Complex64], reference: &[Complex64]) -> Result<Ray> {
        let mut best: Option<(f64, Vec<Complex64>, bool)> = None;
        let mut cands = self.numeric_solutions(&self.param_basis, a);
        // Newton from the previous point of the family: the triangular
        // solve loses the branch when the start point is poorly conditioned.
        let predicted = self.newton(reference.to_vec(), a, 50);
        if self.residual(&predicted, a) <= 1e-12 {
            cands.push((predicted, false));
        }
        for (v, free) in cands {
            let v = if free { v } else { self.refine(v, a) };
            if self.residual(&v, a) > RESIDUAL_TOL {
                continue;
            }
            let d = relative_distance(&v, reference);
            if best.as_ref().is_none_or(|(bd, _, _)| d < *bd) {
                best = Some((d, v, free));
            }
        }
        match best {
            Some((_, v, free)) => self.build(v, None, a, free),
            None => self.solve_numeric_near(a, Some(reference)),
        }
    }

    /// Ray from a numeric start point.
    pub fn solve_numeric(&self, a: &[Complex64]) -> Result<Ray> {
        self.solve_numeric_near(a, None)
    }

    /// As [`RaySystem::solve_numeric`], following the branch of `reference`
    /// (symbol values of a nearby ray) among solutions with equal limits.
    pub fn solve_numeric_near(&self, a: &[Complex64], reference: Option<&[Complex64]>) -> Result<Ray> {
        let cands = self.numeric_solutions(&self.param_basis, a);
        if let Some((v, free)) = self.pick(cands, a, reference) {
            return self.build(v, None, a, free);
        }
        // The parametric basis may not specialise at this point; retry with
        // the exact start point when it is real.
        if a.iter().all(|z| z.im == 0.0) {
            let q: Option<Vec<Rational>> = a.iter().map(|z| Rational::from_float(z.re)).collect();
            if let Some(q) = q {
                return self.solve_exact_near(&q, reference);
            }
        }
        Err(Error::Inconsistent(format!("no ray of {} reaches {} from this point", self.facon, self.stratum)))
    }

    /// Ray from a rational start point, with exact parameters when they are
    /// rational.
    pub fn solve_exact(&self, a: &[Rational]) -> Result<Ray> {
        self.solve_exact_near(a, None)
    }

    fn solve_exact_near(&self, a: &[Rational], reference: Option<&[Complex64]>) -> Result<Ray> {
        let ac: Vec<Complex64> = a.iter().map(to_complex).collect();
        let exact = self.exact_solutions(a)?;
        let mut cands: Vec<(Vec<Complex64>, bool)> =
            exact.iter().map(|v| (v.iter().map(to_complex).collect(), false)).collect();
        let symbols = self.template.symbols();
        let mut gens = self.constraints.clone();
        for (v, ai) in self.at_one.iter().zip(a) {
            gens.push(v - &Polynomial::constant(symbols, ai.clone()));
        }
        let mut ideal = Ideal::new(symbols, gens);
        if !self.nonzero.is_constant() {
            ideal = ideal.saturate(&self.nonzero)?;
        }
        let gb = ideal.with_order(MonomialOrder::Lex)?.groebner()?;
        if gb.is_unit() {
            return Err(Error::Inconsistent(format!("no ray of {} reaches {}", self.facon, self.stratum)));
        }
        cands.extend(self.numeric_solutions(gb.polynomials(), &[]));
        let (v, free) = self
            .pick(cands, &ac, reference)
            .ok_or_else(|| Error::Inconsistent(format!("no ray of {} reaches {}", self.facon, self.stratum)))?;
        let matched = exact.into_iter().find(|q| {
            q.iter()
                .zip(&v)
                .all(|(x, y)| (to_complex(x) - y).norm() <= 1e-9 * (1.0 + y.norm()))
        });
        let values = match &matched {
            Some(q) => q.iter().map(to_complex).collect(),
            None => v,
        };
        self.build(values, matched, &ac, free)
    }

    /// Image-curve coefficients at `values`, flattened in expansion order.
    pub fn image_coefficients(&self, values: &[Complex64]) -> Vec<Complex64> {
        self.expansions
            .iter()
            .flat_map(|e| e.terms().map(|(_, p)| eval_scaled(p, values).0).collect::<Vec<_>>())
            .collect()
    }

    /// Inverse of [`RaySystem::image_coefficients`].
    pub fn curve_from_coefficients(&self, flat: &[Complex64]) -> Result<ImageCurve> {
        let mut it = flat.iter();
        let mut coords = Vec::new();
        for e in &self.expansions {
            let mut c = Vec::new();
            for (k, _) in e.terms() {
                let z = it.next().ok_or(Error::DimensionMismatch {
                    expected: self.expansions.len(),
                    got: flat.len(),
                })?;
                // Positive powers are constrained to vanish; drop rounding.
                if k <= 0 {
                    c.push((k, *z));
                }
            }
            coords.push(c);
        }
        ImageCurve::new(coords)
    }

    pub fn joint_arena(&self) -> &ArenaRef {
        &self.joint
    }

    /// Exact `F(γ(1))` and limit for rational parameters.
    pub fn exact_endpoints(&self, values: &[Rational]) -> Result<(Vec<Rational>, Vec<Rational>)> {
        let start = self.at_one.iter().map(|p| p.evaluate_rational(values)).collect::<Result<_>>()?;
        let limit = self.limit_map.iter().map(|p| p.evaluate_rational(values)).collect::<Result<_>>()?;
        Ok((start, limit))
    }

    /// Positive-power coefficients of `F∘γ` at exact parameters.
    pub fn exact_positive_part(&self, values: &[Rational]) -> Result<Vec<Rational>> {
        let mut out = Vec::new();
        for e in &self.expansions {
            for (_, p) in e.positive_part() {
                out.push(p.evaluate_rational(values)?);
            }
        }
        Ok(out)
    }
}

/// Tie-break between equally close solutions: lexicographically larger
/// real parts first.
/// Sum of coordinatewise relative distances, insensitive to the growth of
/// individual parameters along a continuation.
fn relative_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let s = x.norm() + y.norm();
            if s == 0.0 {
                0.0
            } else {
                (x - y).norm() / s
            }
        })
        .sum()
}

fn dist_values(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

fn prefer(a: &[Complex64], b: &[Complex64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if (x.re - y.re).abs() > 1e-12 * (1.0 + x.re.abs()) {
            return x.re > y.re;
        }
    }
    false
}

/// Coefficients in variable `k` at `point`, each with the size of its terms.
fn univariate_at(p: &Polynomial, k: usize, point: &[Complex64]) -> Vec<(Complex64, f64)> {
    let d = p.degree_in(k).unwrap_or(0);
    (0..=d).map(|e| eval_scaled(&p.coeff_in(k, e), point)).collect()
}

fn involves_only_from(p: &Polynomial, k: usize, m: usize) -> bool {
    p.variables().iter().all(|&v| v >= k || v >= m)
}

fn descend(
    basis: &[Polynomial],
    m: usize,
    level: usize,
    point: &mut Vec<Complex64>,
    free: bool,
    out: &mut Vec<(Vec<Complex64>, bool)>,
) {
    if level == 0 {
        out.push((point.clone(), free));
        return;
    }
    let k = level - 1;
    let mut best: Option<(Vec<Complex64>, Vec<Complex64>)> = None;
    for p in basis {
        if !p.involves(k) || !involves_only_from(p, k, m) {
            continue;
        }
        let mut cs = univariate_at(p, k, point);
        while cs.len() > 1 && cs.last().is_some_and(|(v, _)| v.norm() == 0.0) {
            cs.pop();
        }
        let full: Vec<Complex64> = cs.iter().map(|(v, _)| *v).collect();
        // A leading coefficient that cancels to rounding level is probably
        // zero; keep both readings and let the residual decide.
        while cs.len() > 1 && cs.last().is_some_and(|(v, s)| v.norm() <= 1e-10 * s) {
            cs.pop();
        }
        let c: Vec<Complex64> = cs.into_iter().map(|(v, _)| v).collect();
        if c.len() <= 1 {
            continue;
        }
        if best.as_ref().is_none_or(|(b, _)| c.len() < b.len()) {
            best = Some((c, full));
        }
    }
    match best {
        None => {
            point[k] = Complex64::new(1.0, 0.0);
            descend(basis, m, k, point, true, out);
        }
        Some((c, full)) => {
            let mut roots: Vec<Complex64> = Vec::new();
            let extra = if full.len() > c.len() { distinct_roots(&full) } else { Vec::new() };
            for r in distinct_roots(&c).into_iter().chain(extra) {
                if !roots.iter().any(|q| (q - r).norm() <= 1e-8 * q.norm().max(r.norm())) {
                    roots.push(r);
                }
            }
            for r in roots {
                point[k] = r;
                descend(basis, m, k, point, free, out);
            }
        }
    }
}

fn descend_exact(basis: &[Polynomial], level: usize, vals: &mut Vec<Rational>, out: &mut Vec<Vec<Rational>>) {
    if level == 0 {
        out.push(vals.clone());
        return;
    }
    let k = level - 1;
    let m = vals.len();
    let mut univariates: Vec<Vec<Rational>> = Vec::new();
    for p in basis {
        if !p.involves(k) || !involves_only_from(p, k, m) {
            continue;
        }
        let d = p.degree_in(k).unwrap_or(0);
        let mut c: Vec<Rational> = Vec::new();
        for e in 0..=d {
            let mut q = p.coeff_in(k, e);
            for j in level..m {
                q = q.substitute_value(j, &vals[j]);
            }
            match q.as_constant() {
                Some(v) => c.push(v),
                None => return,
            }
        }
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        if c.len() > 1 {
            univariates.push(c);
        }
    }
    if univariates.is_empty() {
        return;
    }
    univariates.sort_by_key(Vec::len);
    for r in rational_roots(&univariates[0]) {
        let ok = univariates[1..]
            .iter()
            .all(|c| c.iter().rev().fold(Rational::zero(), |acc, a| acc * &r + a).is_zero());
        if ok {
            vals[k] = r;
            descend_exact(basis, k, vals, out);
        }
    }
}

/// Ray from a rational start point outside S_F towards `stratum`.
pub fn solve_ray(
    f: &PolynomialMap,
    sf: &AsymptoticSet,
    a: &[Rational],
    stratum: &Stratum,
    facon: &Facon,
    template: &CurveAnsatz,
) -> Result<Ray> {
    if a.len() != f.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            got: a.len(),
        });
    }
    if sf.contains(a)? {
        return Err(Error::Precondition("start point lies on the asymptotic set".into()));
    }
    RaySystem::new(f, stratum, facon, template)?.solve_exact(a)
}
