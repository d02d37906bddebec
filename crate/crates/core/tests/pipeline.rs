mod common;

use common::*;
use facons_kit::asymptotic::{coordinate_eliminant, fiber_nonempty, phi0};
use facons_kit::facon::{classify_coordinates, facons_of_component, limit_constraints, star_refine, Cell, Facon};
use facons_kit::groebner::{radical_member, variety_containment, Ideal};
use facons_kit::parser::parse_expr;
use facons_kit::poly::{int, Arena, ArenaRef, CurveAnsatz, Polynomial};
use facons_kit::stratify::{check_frontier, facon_less, merge_strata, order_of, partition_by_facons, point_less, render_dot, Stratification};

fn poly(arena: &ArenaRef, s: &str) -> Polynomial {
    parse_expr(s, arena, 1, 1).unwrap()
}

fn ideal(arena: &ArenaRef, gens: &[&str]) -> Ideal {
    Ideal::new(arena, gens.iter().map(|g| poly(arena, g)))
}

fn k(s: &str) -> Facon {
    Facon::parse(s).unwrap()
}

#[test]
fn radical_membership() {
    let x = Arena::new(["x"]).unwrap();
    assert!(radical_member(&poly(&x, "x"), &ideal(&x, &["x^2"])).unwrap());
    assert!(!radical_member(&poly(&x, "x - 1"), &ideal(&x, &["x^2"])).unwrap());
    let r = Arena::new(["s", "a1", "a2"]).unwrap();
    assert!(radical_member(&poly(&r, "a2^2 - a1^3"), &ideal(&r, &["a1 - s^2", "a2 - s^3"])).unwrap());
}

#[test]
fn containment_of_varieties() {
    let a = Arena::new(["a1", "a2"]).unwrap();
    assert!(variety_containment(&ideal(&a, &["a1", "a2"]), &ideal(&a, &["a2"])).unwrap());
    assert!(!variety_containment(&ideal(&a, &["a2"]), &ideal(&a, &["a1", "a2"])).unwrap());
    assert!(!variety_containment(&ideal(&a, &["a1^3 - a2^2"]), &ideal(&a, &["a1"])).unwrap());
}

#[test]
fn elimination_of_graph_variables() {
    let r = Arena::new(["x1", "x2", "x3", "a1", "a2", "a3"]).unwrap();
    let i = ideal(&r, &["x1*x2 - a1", "x2*x3 - a2", "x1*x2*x3 - a3"]);
    let e = i.eliminate(&[1, 2]).unwrap();
    assert!(e.contains(&poly(e.arena(), "a2*x1 - a3")).unwrap());
    let same = i.eliminate(&[]).unwrap();
    assert!(variety_containment(&same, &i).unwrap() && variety_containment(&i, &same).unwrap());
}

#[test]
fn eliminants_of_sample_maps() {
    let f = map(PRODUCTS);
    let e = coordinate_eliminant(&f, 0).unwrap();
    assert_eq!(e.monic_lex(), poly(e.arena(), "a2*x1 - a3").monic_lex());
    assert_eq!(phi0(&e, 0).monic_lex().to_string(), "a2");

    let c = map(CUSP);
    let e1 = coordinate_eliminant(&c, 0).unwrap();
    assert_eq!(e1.monic_lex(), poly(e1.arena(), "x1^2 - 2*a2*x1 + a2^2 - a1^3").monic_lex());
    assert!(phi0(&e1, 0).is_constant());
    let e2 = coordinate_eliminant(&c, 1).unwrap();
    assert_eq!(e2.monic_lex(), poly(e2.arena(), "(a2^2 - a1^3)*x2^2 - 2*a1^2*x2 - a1").monic_lex());
    assert_eq!(phi0(&e2, 0).monic_lex(), poly(e2.arena(), "a2^2 - a1^3").monic_lex());
}

#[test]
fn shifted_map_asymptotic_set_is_two_planes() {
    let p = pipeline(SHIFTED);
    let mut comps: Vec<String> = p.sf.polynomials().iter().map(|q| q.monic_lex().to_string()).collect();
    comps.sort();
    assert_eq!(comps, ["a1", "a2"]);
}

#[test]
fn fibers_of_the_products_map() {
    let f = map(PRODUCTS);
    let p = pipeline(PRODUCTS);
    assert!(fiber_nonempty(&f, &[int(1), int(1), int(1)]).unwrap());
    let a = [int(1), int(1), int(0)];
    assert!(!fiber_nonempty(&f, &a).unwrap());
    assert!(p.sf.contains(&a).unwrap());
}

#[test]
fn limit_of_a_plane_family() {
    let f = map(PRODUCTS);
    let la = limit_constraints(&f, &CurveAnsatz::from_weights(&[1, -1, 0])).unwrap();
    assert_eq!(classify_coordinates(&la).unwrap(), k("(1)[2]"));
    assert_eq!(la.image_dim, 2);
    assert_eq!(la.limit_map[1].to_string(), "0");
}

#[test]
fn cusp_families() {
    let f = map(CUSP);
    let generic = limit_constraints(&f, &CurveAnsatz::from_weights(&[-1, 1])).unwrap();
    assert_eq!(classify_coordinates(&generic).unwrap(), k("(2)[1]"));
    assert_eq!(generic.image_dim, 1);
    let t = f.target().clone();
    assert!(generic.image.contains(&poly(&t, "a2^2 - a1^3")).unwrap());
    let steep = limit_constraints(&f, &CurveAnsatz::from_weights(&[-2, 1])).unwrap();
    assert!(steep.limit_map.iter().all(Polynomial::is_zero));
    assert_eq!(steep.image_dim, 0);
}

#[test]
fn shifted_axis_family() {
    let f = map(SHIFTED);
    let fam = partition_by_facons(&pipeline(SHIFTED).sf, &pipeline(SHIFTED).search)
        .unwrap()
        .into_iter()
        .find(|c| c.cell.contains_point(&[int(0), int(0), int(2)]).unwrap())
        .unwrap();
    assert_eq!(fam.labels(), ["(3)[1,2]"]);
    let w = &fam.facons[0].weights;
    let la = limit_constraints(&f, &CurveAnsatz::from_weights(w)).unwrap();
    assert_eq!(classify_coordinates(&la).unwrap(), k("(3)[1,2]"));
}

#[test]
fn facons_of_products_cells() {
    let f = map(PRODUCTS);
    let a = f.target().clone();
    let labels = |closure: &[&str], opens: &[&str]| {
        let cell = Cell::new(ideal(&a, closure), opens.iter().map(|o| poly(&a, o)).collect(), vec![0]).unwrap();
        let mut v: Vec<String> = facons_of_component(&f, &cell, 3).unwrap().iter().map(|x| x.facon.to_string()).collect();
        v.sort();
        v
    };
    assert_eq!(labels(&["a2"], &["a1", "a3"]), ["(1)[2]"]);
    assert_eq!(labels(&["a2", "a3"], &["a1"]), ["(1)[2,3]", "(2)[1,3]"]);
    assert_eq!(labels(&["a1", "a2", "a3"], &[]), ["(1)[2,3]", "(1,3)[2]", "(2)[1,3]", "(3)[1,2]"]);
}

#[test]
fn star_refinement_examples() {
    let p = pipeline(CUSP);
    let cells = partition_by_facons(&p.sf, &p.search).unwrap();
    assert_eq!(cells.len(), 1);
    assert_eq!(cells[0].labels(), ["(2)[1]"]);
    let gs = star_refine(&cells[0].cell, &cells[0].families, &k("(2)[1]")).unwrap();
    assert_eq!(gs.iter().map(|g| g.dim).collect::<Vec<_>>(), [1, 0]);
    assert_eq!(gs[1].level, 1);

    let p = pipeline(PRODUCTS);
    let cells = partition_by_facons(&p.sf, &p.search).unwrap();
    let plane = cells.iter().find(|c| c.cell.contains_point(&[int(1), int(0), int(1)]).unwrap()).unwrap();
    let gs = star_refine(&plane.cell, &plane.families, &k("(1)[2]")).unwrap();
    assert_eq!(gs.len(), 1);
    let origin = cells.iter().find(|c| c.cell.contains_point(&[int(0), int(0), int(0)]).unwrap()).unwrap();
    for fam in &origin.facons {
        assert_eq!(star_refine(&origin.cell, &origin.families, &fam.facon).unwrap().len(), 1);
    }
}

#[test]
fn products_filtration() {
    let p = pipeline(PRODUCTS);
    let cells = partition_by_facons(&p.sf, &p.search).unwrap();
    let mut dims: Vec<i64> = cells.iter().map(|c| p.strat.strata.iter().find(|s| s.cell == c.class).map_or(-2, |s| s.dimension)).collect();
    dims.sort();
    assert_eq!(cells.len(), 7);
    let mut sd: Vec<i64> = p.strat.strata.iter().map(|s| s.dimension).collect();
    sd.sort();
    assert_eq!(sd, [0, 1, 1, 1, 2, 2, 2]);
    let _ = dims;
}

#[test]
fn shifted_partition_is_planes_and_axis() {
    let p = pipeline(SHIFTED);
    let cells = partition_by_facons(&p.sf, &p.search).unwrap();
    let mut labels: Vec<String> = cells.iter().map(|c| c.labels().join(" ")).collect();
    labels.sort();
    assert_eq!(labels, ["(3)[1,2]", "(3)[1]", "(3)[2]"]);
}

#[test]
fn facon_order_cases() {
    assert!(facon_less(&k("(1,3)[2]"), &k("(1)[2]")));
    assert!(facon_less(&k("(1)[2,3]"), &k("(1)[2]")));
    assert!(facon_less(&k("(2)[1]^{1*}"), &k("(2)[1]")));
    assert!(!facon_less(&k("(1)[2]"), &k("(1)[2]")));
    assert!(!facon_less(&k("(1)[2]"), &k("(1,3)[2]")));
}

#[test]
fn point_order_on_products() {
    let p = pipeline(PRODUCTS);
    let s = &p.strat;
    let origin = stratum_by_facons(s, "{(1)[2,3], (1,3)[2], (2)[1,3], (3)[1,2]}");
    let axis1 = stratum_by_facons(s, "{(1)[2,3], (2)[1,3]}");
    let axis3 = stratum_by_facons(s, "{(1,3)[2]}");
    let plane1 = stratum_by_facons(s, "{(1)[2]}");
    assert!(point_less(origin, axis1));
    assert!(point_less(axis3, plane1));
    assert!(!point_less(plane1, origin));
    assert_eq!(order_of(origin), 4);
    assert_eq!(order_of(plane1), 1);
    assert_eq!(order_of(axis1), 2);
}

#[test]
fn frontier_reports() {
    for text in [PRODUCTS, CUSP] {
        assert!(check_frontier(&pipeline(text).strat).unwrap().is_clean());
    }
    let p = pipeline(CUSP);
    assert_eq!(p.strat.frontier_edges.len(), 1);
    let merged = merge_strata(&p.strat, 1, 0).unwrap();
    assert!(check_frontier(&merged).unwrap().is_clean() || merged.strata.len() == 1);

    let p = pipeline(PRODUCTS);
    let (lo, up) = p.strat.frontier_edges[0];
    let merged = merge_strata(&p.strat, lo, up).unwrap();
    assert!(!check_frontier(&merged).unwrap().is_clean());
}

#[test]
fn dot_output() {
    let cusp = render_dot(&pipeline(CUSP).strat);
    assert_eq!(cusp.matches("[label=").count(), 2);
    assert_eq!(cusp.matches("->").count(), 1);
    assert!(cusp.starts_with("digraph"));
    let products = pipeline(PRODUCTS).strat;
    let dot = render_dot(&products);
    assert_eq!(dot.matches("[label=").count(), 7);
    assert_eq!(dot.matches("->").count(), 9);
    assert_eq!(dot, render_dot(&pipeline(PRODUCTS).strat));

    let single = Stratification {
        strata: vec![products.strata[0].clone()],
        frontier_edges: Vec::new(),
    };
    let dot = render_dot(&single);
    assert_eq!(dot.matches("[label=").count(), 1);
    assert_eq!(dot.matches("->").count(), 0);
}
