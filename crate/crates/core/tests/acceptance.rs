//! Acceptance suite. Prints one `PASS`/`FAIL` line per criterion and exits
//! nonzero if any fails.

mod common;

use std::cell::Cell;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ncsurf_core::construct::{duncehat_construct, search_labelings, Construct, Coupling, LabelSearch, LabelingOutcome};
use ncsurf_core::delta::{dunce_hat, genus_two, torus, CollapseOutcome, NotCollapsibleReason, DEFAULT_BUDGET};
use ncsurf_core::lattice::positive_inertia;
use ncsurf_core::obstruction::{
    bezout_argument, case_valuations, compose_valuation, degeneration_case, limit_stratum, t_order, trivializing_point,
    z_contains, z_order, z_quadric, CaseId, QuadricZ, StratumKind, ZOrderArc,
};
use ncsurf_core::{ratio, Rational, RationalMatrix};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

const DEFAULT_LIMIT: Duration = Duration::from_secs(1);
const PROPERTY_LIMIT: Duration = Duration::from_secs(30);
const SEARCH_LIMIT: Duration = Duration::from_secs(60);
const PROPERTY_CASES: u32 = 100;
const LABEL_RANGE: (i64, i64) = (-4, 4);

type Outcome = Result<Vec<String>, String>;
type Criterion = (u32, &'static str, fn() -> Outcome, Duration);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn q(n: i64) -> Rational {
    ratio(n, 1)
}

fn c1_dunce_hat() -> Outcome {
    let d = dunce_hat();
    let chi = d.euler_characteristic().map_err(|e| e.to_string())?;
    let betti = d.betti_numbers().map_err(|e| e.to_string())?;
    let free = d.free_faces().map_err(|e| e.to_string())?;
    let outcome = d.collapse_search(DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    ensure(chi == 1, format!("χ = {chi}"))?;
    ensure((betti.b0, betti.b1, betti.b2) == (1, 0, 0), format!("Betti {betti:?}"))?;
    ensure(free.is_empty(), format!("{} free faces", free.len()))?;
    ensure(
        outcome == CollapseOutcome::NotCollapsible(NotCollapsibleReason::NoFreeFaces),
        format!("collapse_search: {outcome:?}"),
    )?;
    Ok(vec![format!("χ = 1, Betti (1,0,0), 0 free faces, NotCollapsible(\"{}\")", NotCollapsibleReason::NoFreeFaces)])
}

fn c2_dual_complex() -> Outcome {
    let dual = duncehat_construct().dual_complex();
    let (v, e, t) = dual.counts();
    ensure(dual.is_isomorphic(&dunce_hat()).map_err(|e| e.to_string())?, "dual complex is not the dunce hat")?;
    Ok(vec![format!("dual complex ({v} vertex, {e} edge, {t} triangle) ≅ dunce hat")])
}

fn without_ninth_point() -> Result<Construct, String> {
    let x = duncehat_construct();
    let mut comps = x.components().to_vec();
    comps[0].branches[1].class.0[9] = 0;
    Construct::new(comps, x.gluings().to_vec(), x.identifications().to_vec(), None).map_err(|e| e.to_string())
}

fn c3_triple_point_formula() -> Outcome {
    let r = duncehat_construct().triple_point_check();
    ensure(r.len() == 1, format!("{} gluing curves", r.len()))?;
    let r = &r[0];
    ensure(
        (r.from_degree, r.to_degree, r.triple_points, r.sum) == (-1, -2, 3, 0),
        format!("({}) + ({}) + {} = {}", r.from_degree, r.to_degree, r.triple_points, r.sum),
    )?;
    let mut lines = vec![format!("({}) + ({}) + {} = {}", r.from_degree, r.to_degree, r.triple_points, r.sum)];
    let v = without_ninth_point()?.triple_point_check();
    let v = &v[0];
    let line = format!("E9 omitted: ({}) + ({}) + {} = {}", v.from_degree, v.to_degree, v.triple_points, v.sum);
    ensure(!v.passed() && v.sum == 2, format!("{line}; expected a failing sum of 2"))?;
    lines.push(line);
    Ok(lines)
}

fn c4_dimensions() -> Outcome {
    let x = duncehat_construct();
    let chi = x.lattice(0).chi_tangent().map_err(|e| e.to_string())?;
    let expected = x.expected_moduli_dim().map_err(|e| e.to_string())?;
    let mo = x.obstruction_moduli_dim();
    let ds = x.dsemistable_expected_dim().map_err(|e| e.to_string())?;
    let line = format!("χ(T_X) = {chi}, expected_moduli_dim = {expected}, dim M_O = {mo}, dsemistable = {ds}");
    ensure((chi, expected, mo, ds) == (-10, 9, 2, 7), line.clone())?;
    Ok(vec![line])
}

fn c5_smoothing() -> Outcome {
    let x = duncehat_construct();
    let e = x.smoothing_euler().map_err(|e| e.to_string())?;
    let h = x.h11().map_err(|e| e.to_string())?;
    let line = format!("smoothing χ = {e}, h11 = {} ({})", h.h11, h.assumption);
    ensure(e == 11 && h.h11 == 9, line.clone())?;
    Ok(vec![line])
}

fn c6_case_table() -> Outcome {
    let mut lines = Vec::new();
    for id in CaseId::ALL {
        let case = degeneration_case(id);
        if id == CaseId::Case0 {
            ensure(compose_valuation(&case).is_err(), "case 0 composes an arc")?;
            continue;
        }
        let composed = compose_valuation(&case).map_err(|e| e.to_string())?;
        let tabulated = case_valuations(id).map_err(|e| e.to_string())?;
        let (want, line_expected) = if id == CaseId::Case2 { ([3, 2, -2], false) } else { ([-1, -1, 0], true) };
        ensure(
            composed.orders == want && tabulated.orders == want,
            format!("case {}: composed {composed}, tabulated {tabulated}", id.as_str()),
        )?;
        let stratum = limit_stratum(&composed);
        let on_line = matches!(stratum.kind, StratumKind::CoordinateLine { .. });
        let at_point = matches!(stratum.kind, StratumKind::CoordinatePoint { .. });
        ensure(
            if line_expected { on_line } else { at_point },
            format!("case {}: limit {} is {}", id.as_str(), stratum.limit_string(), stratum.kind),
        )?;
        lines.push(format!("case {}: {composed} → {} {}", id.as_str(), stratum.limit_string(), stratum.kind));
    }
    Ok(lines)
}

/// The quadric through oracle images of `O(-x)` at the given points.
fn fitted_quadric(xs: &[Rational]) -> Result<QuadricZ<Rational>, String> {
    let points: Vec<_> = xs.iter().map(common::sigma_oracle).collect();
    QuadricZ::fit_through(&points).ok_or_else(|| "no unique conic through the samples".to_string())
}

fn fitting_samples() -> Vec<Rational> {
    vec![q(-1), q(-2), q(-3), ratio(1, 2)]
}

fn c7_orders() -> Outcome {
    let z = fitted_quadric(&fitting_samples())?;
    let arc = ZOrderArc::<Rational>::generic([3, 2, -2]);
    let t = t_order(&arc);
    let zo = z_order(&arc, &z).map_err(|e| e.to_string())?;
    ensure((t, zo) == (9, 4), format!("t_order = {t}, z_order = {zo}"))?;
    let v = bezout_argument(4, 9, 2, 3).map_err(|e| e.to_string())?;
    ensure(v.contradiction && v.trace.contains("9/2 > 3"), format!("bezout: {}", v.trace))?;
    Ok(vec![format!("t_order = {t}, z_order = {zo} on the fitted quadric"), format!("bezout: {}", v.trace)])
}

fn c8_quadric_oracle() -> Outcome {
    let z = fitted_quadric(&fitting_samples())?;
    ensure(z.same_conic(&z_quadric()), format!("fitted {z:?} differs from Z"))?;
    for x in 2..=11 {
        let p = common::sigma_oracle(&q(x));
        ensure(z_contains(&z, &p), format!("O(-{x}) not on the fitted quadric"))?;
        let back = trivializing_point(&z, &p).map_err(|e| e.to_string())?;
        ensure(back == Some(q(x)), format!("trivializing_point(O(-{x})) = {back:?}"))?;
    }
    Ok(vec![
        format!("fitted (λ, μ, ν) = ({}, {}, {})", z.lambda, z.mu, z.nu),
        "x = 2..11: on the quadric, trivializing point recovered".into(),
    ])
}

fn run_property<S: Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<String, String>
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(Config { cases: PROPERTY_CASES, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))?;
    Ok(format!("{name}: {PROPERTY_CASES} cases"))
}

fn c9_properties() -> Outcome {
    let cohomology = run_property("cohomology = dual-complex Betti", common::skeleton(), |s| {
        let x = s.build();
        let betti = x.dual_complex().betti_numbers().map_err(|e| TestCaseError::fail(e.to_string()))?;
        let h = x.structure_sheaf_cohomology();
        prop_assert!(h.matches(&betti), "{h:?} vs {betti:?} for {s:?}");
        Ok(())
    })?;

    let congruence = (
        prop::collection::vec(-5i64..=5, 10),
        prop::collection::vec((0usize..4, 0usize..4, -3i64..=3, any::<bool>()), 0..12),
    );
    let inertia = run_property("positive_inertia under unimodular congruence", congruence, |(entries, moves)| {
        let m = common::symmetric(4, &entries);
        let a = common::unimodular(4, &moves);
        let n = common::congruent(&m, &a);
        let pi =
            |m: &[Vec<i64>]| positive_inertia(&RationalMatrix::from_i64_rows(m).expect("square")).expect("symmetric");
        prop_assert_eq!(pi(&m), pi(&n));
        Ok(())
    })?;

    let replayed = Cell::new(0);
    let replay = run_property("collapse certificates replay", common::small_complex(), |c| {
        let outcome = c.collapse_search(DEFAULT_BUDGET).map_err(|e| TestCaseError::fail(e.to_string()))?;
        if let CollapseOutcome::Collapsible(cert) = outcome {
            prop_assert!(cert.replay(&c).is_ok(), "certificate does not replay");
            replayed.set(replayed.get() + 1);
        }
        Ok(())
    })?;
    ensure(replayed.get() > 0, "no collapsible complex was generated")?;
    Ok(vec![cohomology, inertia, format!("{replay}, {} certificates replayed", replayed.get())])
}

fn describe(o: &LabelingOutcome) -> String {
    match o {
        LabelingOutcome::Found { labels, explored } => {
            let ls: Vec<String> = labels.iter().map(|(h, n)| format!("{h}={n}")).collect();
            format!("found after {explored} nodes: {}", ls.join(" "))
        }
        LabelingOutcome::Exhausted { explored } => format!("exhausted after {explored} nodes"),
    }
}

fn c10_surfaces() -> Outcome {
    let free = LabelSearch { min: LABEL_RANGE.0, max: LABEL_RANGE.1, coupling: Coupling::Free };
    let coupled = LabelSearch { coupling: Coupling::TriplePointFormula, ..free };

    let g2 = search_labelings(&genus_two(), &free).map_err(|e| e.to_string())?;
    let t = search_labelings(&torus(), &free).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let g2_coupled = search_labelings(&genus_two(), &coupled).map_err(|e| e.to_string())?;
    let coupled_time = start.elapsed();
    let t_coupled = search_labelings(&torus(), &coupled).map_err(|e| e.to_string())?;
    let info = format!(
        "info: with the triple point formula coupling, genus two {} ({coupled_time:.2?}); torus {}",
        describe(&g2_coupled),
        describe(&t_coupled)
    );
    ensure(!g2.is_found(), format!("genus two {}; {info}", describe(&g2)))?;
    ensure(t.is_found(), format!("torus {}", describe(&t)))?;
    Ok(vec![format!("genus two {}", describe(&g2)), format!("torus {}", describe(&t)), info])
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "dunce hat is contractible with no free faces", c1_dunce_hat, DEFAULT_LIMIT),
        (2, "dual complex of the construct is the dunce hat", c2_dual_complex, DEFAULT_LIMIT),
        (3, "triple point formula", c3_triple_point_formula, DEFAULT_LIMIT),
        (4, "moduli dimensions", c4_dimensions, DEFAULT_LIMIT),
        (5, "smoothing invariants", c5_smoothing, DEFAULT_LIMIT),
        (6, "degeneration case table", c6_case_table, DEFAULT_LIMIT),
        (7, "toric orbit orders and Bezout", c7_orders, DEFAULT_LIMIT),
        (8, "quadric Z oracle", c8_quadric_oracle, DEFAULT_LIMIT),
        (9, "property suite", c9_properties, PROPERTY_LIMIT),
        (10, "diagonal labelings on genus two and torus", c10_surfaces, SEARCH_LIMIT),
    ];
    let mut failed = 0;
    for (n, name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(lines) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}; {}", lines.join("; "))),
            o => o,
        };
        match outcome {
            Ok(lines) => {
                println!("PASS [{n}] {name} ({elapsed:.2?})");
                for l in lines {
                    println!("    {l}");
                }
            }
            Err(why) => {
                failed += 1;
                println!("FAIL [{n}] {name} ({elapsed:.2?})");
                println!("    {why}");
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
