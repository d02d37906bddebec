//! End-to-end acceptance checks, one line per criterion.

mod common;

use std::time::{Duration, Instant};

use common::*;
use facons_kit::asymptotic::{asymptotic_set, check_dominant, coordinate_eliminant};
use facons_kit::cli;
use facons_kit::facon::{star_refine, Facon};
use facons_kit::groebner::{radical_member, variety_containment, Ideal, MonomialOrder};
use facons_kit::poly::{int, Arena, Polynomial, PolynomialMap};
use facons_kit::stratify::{containment_matrix, partition_by_facons, point_less};
use facons_kit::tube::{coverage_check, format_curve, infer_template, solve_ray, verify_thom_mather, Grid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Duration, limit: f64) -> Result<(), String> {
    ensure(t.as_secs_f64() < limit, || format!("took {:.1}s, limit {limit}s", t.as_secs_f64()))
}

fn hyperplanes() -> Outcome {
    let t = Instant::now();
    let p = pipeline(PRODUCTS);
    let mut comps: Vec<String> = p.sf.polynomials().iter().map(|q| q.monic_lex().to_string()).collect();
    comps.sort();
    ensure(comps == ["a1", "a2", "a3"], || format!("components {comps:?}"))?;
    let cells = partition_by_facons(&p.sf, &p.search).map_err(|e| e.to_string())?;
    let cases: [(&str, [i64; 3], &[&str]); 7] = [
        ("i", [1, 0, 1], &["(1)[2]"]),
        ("ii", [1, 1, 0], &["(2)[1,3]"]),
        ("iii", [0, 1, 1], &["(3)[2]"]),
        ("iv", [1, 0, 0], &["(1)[2,3]", "(2)[1,3]"]),
        ("v", [0, 1, 0], &["(2)[1,3]", "(3)[1,2]"]),
        ("vi", [0, 0, 1], &["(1,3)[2]"]),
        ("vii", [0, 0, 0], &["(1)[2,3]", "(1,3)[2]", "(2)[1,3]", "(3)[1,2]"]),
    ];
    for (name, pt, want) in cases {
        let a: Vec<_> = pt.iter().map(|&v| int(v)).collect();
        let cell = cells
            .iter()
            .find(|c| c.cell.contains_point(&a).unwrap_or(false))
            .ok_or_else(|| format!("case {name}: no cell contains {pt:?}"))?;
        let mut got = cell.labels();
        got.sort();
        ensure(got == want, || format!("case {name}: {got:?} != {want:?}"))?;
    }
    within(t.elapsed(), 10.0)?;
    Ok(format!("3 hyperplanes, 7/7 façon cases, {:.2}s", t.elapsed().as_secs_f64()))
}

fn cusp() -> Outcome {
    let t = Instant::now();
    let p = pipeline(CUSP);
    let polys = p.sf.polynomials();
    let arena = p.f.target().clone();
    let a1 = Polynomial::var(&arena, 0);
    let a2 = Polynomial::var(&arena, 1);
    let want = &a2.pow(2) - &a1.pow(3);
    ensure(polys.len() == 1 && polys[0].monic_lex() == want.monic_lex(), || format!("components {polys:?}"))?;
    ensure(p.strat.strata.len() == 2, || format!("{} strata", p.strat.strata.len()))?;
    let origin = p
        .strat
        .strata
        .iter()
        .find(|s| s.dimension == 0)
        .ok_or("no zero-dimensional stratum")?;
    let star = Facon::parse("(2)[1]^{1*}").map_err(|e| e.to_string())?;
    ensure(origin.facon_set == [star], || format!("origin façons {}", origin.facon_text()))?;
    within(t.elapsed(), 10.0)?;
    Ok(format!("V(a2^2 - a1^3), 2 strata, origin {}, {:.2}s", origin.facon_text(), t.elapsed().as_secs_f64()))
}

fn shifted_ray() -> Outcome {
    let t = Instant::now();
    let p = pipeline(SHIFTED);
    let axis = stratum_by_facons(&p.strat, "{(3)[1,2]}");
    let plane = stratum_by_facons(&p.strat, "{(3)[1]}");
    let a = vec![int(3), int(1), int(3)];
    let facon = &axis.facon_set[0];
    let template = infer_template(&p.f, axis, facon, &axis.witnesses[0]).map_err(|e| e.to_string())?;
    let ray = solve_ray(&p.f, &p.sf, &a, axis, facon, &template).map_err(|e| e.to_string())?;
    let curve = ray.exact_curve().ok_or("ray is not rational")?;
    let text = format_curve(&curve);
    ensure(text == "(1 + 1/u, -2 + 1/u, u^2)", || format!("curve {text}"))?;
    let close = |x: &[num_complex::Complex64], y: [f64; 3]| x.iter().zip(y).all(|(u, v)| (u.re - v).abs() < 1e-12 && u.im.abs() < 1e-12);
    ensure(close(&ray.start, [3.0, 1.0, 3.0]), || format!("start {:?}", ray.start))?;
    ensure(close(&ray.limit, [0.0, 0.0, 2.0]), || format!("limit {:?}", ray.limit))?;
    let grid = Grid {
        start: Some(a),
        ..Grid::default()
    };
    let r = verify_thom_mather(&p.f, &p.sf, axis, plane, &grid).map_err(|e| e.to_string())?;
    ensure(r.max_pi_residual < 1e-9 && r.max_rho_residual < 1e-9, || {
        format!("residuals π {:.2e} ρ {:.2e}", r.max_pi_residual, r.max_rho_residual)
    })?;
    ensure(r.samples >= 25, || format!("{} samples", r.samples))?;
    ensure(r.passed(), || format!("violations {:?}", r.violations))?;
    within(t.elapsed(), 30.0)?;
    Ok(format!(
        "γ = {text}, π {:.1e}, ρ {:.1e} over {} samples, {:.2}s",
        r.max_pi_residual,
        r.max_rho_residual,
        r.samples,
        t.elapsed().as_secs_f64()
    ))
}

fn random_map(rng: &mut ChaCha8Rng) -> PolynomialMap {
    loop {
        let n = rng.gen_range(2..=3);
        let src = Arena::numbered("x", n);
        let comps: Vec<Polynomial> = (0..n).map(|_| random_polynomial(rng, &src, 3, 2)).collect();
        if let Ok(f) = PolynomialMap::with_default_targets(src, comps) {
            if check_dominant(&f) {
                return f;
            }
        }
    }
}

fn eliminant_vanishes(f: &PolynomialMap) -> Result<(), String> {
    let src = f.source();
    for i in 0..f.n() {
        let e = coordinate_eliminant(f, i).map_err(|e| e.to_string())?;
        let mut images = vec![Polynomial::var(src, i)];
        images.extend(f.components().iter().cloned());
        let back = e.compose(&images).map_err(|e| e.to_string())?;
        ensure(back.is_zero(), || format!("E_{} of {:?} does not vanish", i + 1, f.components()))?;
    }
    Ok(())
}

fn eliminants() -> Outcome {
    let t = Instant::now();
    for (_, text) in SAMPLE_MAPS {
        eliminant_vanishes(&map(text))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        eliminant_vanishes(&random_map(&mut rng))?;
    }
    Ok(format!("3 sample maps + 10 random maps, {:.2}s", t.elapsed().as_secs_f64()))
}

fn order_equivalence() -> Outcome {
    let t = Instant::now();
    let mut report = Vec::new();
    let mut bad = 0;
    for (name, text) in SAMPLE_MAPS {
        let p = pipeline(text);
        let s = &p.strat.strata;
        let c = containment_matrix(s).map_err(|e| e.to_string())?;
        let mut mismatches = Vec::new();
        for i in 0..s.len() {
            for j in 0..s.len() {
                if i == j {
                    continue;
                }
                let less = point_less(&s[i], &s[j]);
                if less != c[i][j] {
                    mismatches.push(format!("{}/{} ≺={less} ⊂={}", s[i].label, s[j].label, c[i][j]));
                }
                if less && s[i].order() < s[j].order() {
                    mismatches.push(format!("or({}) < or({})", s[i].label, s[j].label));
                }
            }
        }
        bad += mismatches.len();
        report.push(format!("{name}: {} ({})", mismatches.len(), mismatches.join(", ")));
    }
    let line = format!("violations {}, {:.2}s", report.join("; "), t.elapsed().as_secs_f64());
    if bad == 0 {
        Ok(line)
    } else {
        Err(line)
    }
}

fn star_properties() -> Outcome {
    let t = Instant::now();
    let mut groups = 0;
    for (name, text) in SAMPLE_MAPS {
        let p = pipeline(text);
        let cells = partition_by_facons(&p.sf, &p.search).map_err(|e| e.to_string())?;
        for cf in &cells {
            for fam in &cf.facons {
                let gs = star_refine(&cf.cell, &cf.families, &fam.facon).map_err(|e| e.to_string())?;
                groups += gs.len();
                let ctx = || format!("{name} cell {:?} {}", cf.cell.members, fam.facon);
                for w in gs.windows(2) {
                    ensure(w[0].dim > w[1].dim, || format!("{}: dims {} then {}", ctx(), w[0].dim, w[1].dim))?;
                }
                for i in 0..gs.len() {
                    for j in i + 1..gs.len() {
                        let inside = variety_containment(&gs[j].closure, &gs[i].closure).map_err(|e| e.to_string())?;
                        ensure(inside, || format!("{}: group {j} not in closure of group {i}", ctx()))?;
                        let meet = gs[i].closure.sum(&gs[j].closure);
                        let opens = gs[i]
                            .opens
                            .iter()
                            .chain(&gs[j].opens)
                            .fold(Polynomial::one(meet.arena()), |acc, h| &acc * h);
                        let disjoint = radical_member(&opens, &meet).map_err(|e| e.to_string())?;
                        ensure(disjoint, || format!("{}: groups {i} and {j} meet", ctx()))?;
                    }
                }
            }
        }
    }
    Ok(format!("{groups} groups checked, {:.2}s", t.elapsed().as_secs_f64()))
}

fn coverage() -> Outcome {
    let t = Instant::now();
    let (mut ok, mut total, mut on_sf) = (0, 0, 0);
    for (name, text) in SAMPLE_MAPS {
        let f = map(text);
        let sf = asymptotic_set(&f).map_err(|e| e.to_string())?;
        let r = coverage_check(&f, &sf, 20, 11).map_err(|e| e.to_string())?;
        ensure(r.failures.is_empty(), || format!("{name}: uncovered {:?}", r.failures))?;
        ok += r.covered;
        total += r.trials;
        on_sf += r.on_asymptotic_set;
    }
    ensure(ok == 60 && total == 60, || format!("{ok}/{total}"))?;
    Ok(format!("{ok}/{total} covered ({on_sf} on S_F), {:.2}s", t.elapsed().as_secs_f64()))
}

fn groebner() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut proper, mut oracle_rows) = (0, 0);
    for k in 0..50 {
        let n = rng.gen_range(2..=4);
        let arena = Arena::numbered("x", n);
        let ngens = rng.gen_range(2..=3);
        let gens: Vec<Polynomial> = (0..ngens).map(|_| random_polynomial(&mut rng, &arena, 3, 3)).collect();
        let order = if k % 2 == 0 { MonomialOrder::GrevLex } else { MonomialOrder::Lex };
        let gb = Ideal::new(&arena, gens.clone())
            .with_order(order.clone())
            .and_then(|i| i.groebner())
            .map_err(|e| format!("ideal {k}: {e}"))?;
        ensure(is_reduced_basis(&gb), || format!("ideal {k}: basis not reduced"))?;
        if !gb.is_unit() {
            proper += 1;
        }
        let mut shuffled = gens.clone();
        shuffled.reverse();
        shuffled.rotate_left(1);
        let gb2 = Ideal::new(&arena, shuffled)
            .with_order(order)
            .and_then(|i| i.groebner())
            .map_err(|e| format!("ideal {k}: {e}"))?;
        ensure(gb.polynomials() == gb2.polynomials(), || format!("ideal {k}: basis depends on generator order"))?;
        for g in &gens {
            ensure(gb.contains(g), || format!("ideal {k}: generator not reduced to zero"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let arena = Arena::new(["t", "x", "y"]).map_err(|e| e.to_string())?;
    let tv = Polynomial::var(&arena, 0);
    for k in 0..10 {
        let gens = if k < 5 {
            let p = random_polynomial(&mut rng, &Arena::numbered("s", 1), 2, 3).embed(&arena, &[0]);
            let q = random_polynomial(&mut rng, &Arena::numbered("s", 1), 3, 3).embed(&arena, &[0]);
            vec![&Polynomial::var(&arena, 1) - &p, &Polynomial::var(&arena, 2) - &q]
        } else {
            let mut g = random_polynomial(&mut rng, &arena, 2, 3);
            while !g.involves(0) {
                g = &g + &tv;
            }
            vec![g, random_polynomial(&mut rng, &arena, 2, 3)]
        };
        let elim = Ideal::new(&arena, gens.clone()).eliminate(&[0]).map_err(|e| format!("toy {k}: {e}"))?;
        let top = elim.generators().iter().filter_map(Polynomial::total_degree).max().unwrap_or(0);
        let span = BoundedSpan::new(&gens, &[0], (top + 3).max(4));
        for g in elim.generators() {
            let full = g.embed_by_name(&arena).map_err(|e| e.to_string())?;
            ensure(span.contains(&full), || format!("toy {k}: {g} not found below the degree bound"))?;
        }
        let rows = span.kept_rows();
        oracle_rows += rows.len();
        for r in rows {
            let r = r.restrict_to(elim.arena()).map_err(|e| e.to_string())?;
            ensure(elim.contains(&r).map_err(|e| e.to_string())?, || format!("toy {k}: {r} missing from the elimination ideal"))?;
        }
    }
    ensure(proper >= 25, || format!("only {proper} proper ideals in the pool"))?;
    Ok(format!(
        "50 random ideals ({proper} proper), 10 toy eliminations ({oracle_rows} oracle relations), {:.2}s",
        t.elapsed().as_secs_f64()
    ))
}

fn determinism() -> Outcome {
    let t = Instant::now();
    let dir = std::env::temp_dir().join(format!("facons-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    for (name, text) in SAMPLE_MAPS {
        let path = dir.join(format!("{name}.map"));
        std::fs::write(&path, text).map_err(|e| e.to_string())?;
        let run = || {
            let (mut out, mut err) = (Vec::new(), Vec::new());
            let args = ["facons", "analyze", path.to_str().unwrap(), "--seed", "5"];
            let code = cli::run(args, &mut out, &mut err);
            (code, out)
        };
        let (c1, o1) = run();
        let (c2, o2) = run();
        ensure(c1 == c2 && o1 == o2 && !o1.is_empty(), || format!("{name}: outputs differ"))?;
        serde_json::from_slice::<serde_json::Value>(&o1).map_err(|e| format!("{name}: {e}"))?;
    }
    std::fs::remove_dir_all(&dir).ok();
    Ok(format!("3 maps byte-identical, {:.2}s", t.elapsed().as_secs_f64()))
}

fn main() {
    let criteria: [(&str, Check); 9] = [
        ("hyperplane map: asymptotic set and façon cases", hyperplanes),
        ("cusp: asymptotic set and star strata", cusp),
        ("shifted map: exact ray and tube commutation", shifted_ray),
        ("eliminant identity", eliminants),
        ("point order versus closure containment", order_equivalence),
        ("star refinement properties", star_properties),
        ("coverage of the target", coverage),
        ("Gröbner engine properties", groebner),
        ("determinism of analyze", determinism),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {detail}", k + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
