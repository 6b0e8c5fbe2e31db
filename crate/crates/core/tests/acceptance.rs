//! Acceptance suite. One line per criterion; exits non-zero if any fails.

#![allow(clippy::needless_range_loop)]

use std::process::ExitCode;
use std::time::Instant;

use itertools::Itertools;
use num_traits::One;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use schemex_core::detect::{excess_route, mstar_decomposition_residual, nstar_route, predistance_route, tridiagonal_route};
use schemex_core::graph::{
    distance_data, graph_spectrum, is_distance_regular, random_regular_graph, scheme_from_drg, spectral_excess_report,
};
use schemex_core::poly::{graph_property_residual, kappa, lagrange_power_identity, predistance_polynomials};
use schemex_core::scalar::{scaled_error, Scalar};
use schemex_core::scheme::reorder_relations;
use schemex_core::spectral::{krein_parameters, primitive_idempotents, spectral_data};
use schemex_core::{
    corpus, detect, generate, AssociationScheme, CorpusEntry, ExactSpectrum, FamilySpec, Graph, IntersectionTensor,
    Rational, SpectralData, Spectrum, Verdict, WideSpectrum,
};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn scheme(spec: FamilySpec) -> AssociationScheme {
    generate(&spec).expect("valid family parameters")
}

fn route_equivalence(entries: &[CorpusEntry]) -> Outcome {
    let start = Instant::now();
    let mut disagreements = Vec::new();
    let mut decided = 0;
    for e in entries {
        let sd: SpectralData = spectral_data(&e.scheme).map_err(|err| format!("{}: {err}", e.name))?;
        let t = e.scheme.intersection_numbers();
        let sp = sd.spectrum();
        let verdicts = [
            tridiagonal_route(t).verdict,
            nstar_route(&e.scheme, &sd).map_err(|err| format!("{}: {err}", e.name))?.verdict,
            excess_route(&sd, t, 1e-6).map_err(|err| format!("{}: {err}", e.name))?.verdict,
            match &sp {
                Ok(sp) => {
                    let ps = predistance_polynomials(sp).map_err(|err| format!("{}: {err}", e.name))?;
                    predistance_route(&sd, &ps, 1e-6).map_err(|err| format!("{}: {err}", e.name))?.verdict
                }
                Err(_) => Verdict::PreconditionFailed,
            },
        ];
        let answers: Vec<Verdict> = verdicts.into_iter().filter(|v| *v != Verdict::PreconditionFailed).collect();
        decided += answers.len();
        if !answers.iter().all_equal() {
            disagreements.push(format!("{}: {verdicts:?}", e.name));
        }
        if answers.first() != Some(&e.expected) && e.expected != Verdict::PreconditionFailed {
            disagreements.push(format!("{}: expected {} got {verdicts:?}", e.name, e.expected));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    ensure(disagreements.is_empty(), || disagreements.join("; "))?;
    ensure(elapsed < 30.0, || format!("took {elapsed:.1} s"))?;
    Ok(format!("{} schemes, {decided} decided route verdicts, 0 disagreements, {elapsed:.2} s", entries.len()))
}

fn hypercube_spot_values() -> Outcome {
    let s = scheme(FamilySpec::Hamming { n: 3, q: 2 });
    let sd: SpectralData = spectral_data(&s).map_err(|e| e.to_string())?;
    let sp = sd.spectrum().map_err(|e| e.to_string())?;
    let want = [3.0, -3.0, 1.0];
    let mut worst = 0.0f64;
    for i in 1..=3 {
        let k = kappa(&sp, i).map_err(|e| e.to_string())?;
        worst = worst.max((k - want[i - 1]).abs()).max((-sd.q(i, 3) - want[i - 1]).abs());
    }
    ensure(worst < 1e-9, || format!("residual {worst:e}"))?;
    let report = detect::<f64>(&s).map_err(|e| e.to_string())?;
    let xi_d = report.ordering().map(|o| o[3]);
    ensure(report.l() == Some(3) && xi_d == Some(3), || format!("l = {:?}, ξ_d = {xi_d:?}", report.l()))?;
    Ok(format!("κ = -Q_i(3) = (3,-3,1), residual {worst:.1e}, l = ξ_d = 3"))
}

/// Orthogonal polynomial values on the spectrum by the Stieltjes procedure,
/// normalised so that `p_i(θ_0) = ‖p_i‖²`.
fn stieltjes_values(sp: &Spectrum) -> Vec<Vec<f64>> {
    let th = sp.theta();
    let n = sp.n() as f64;
    let w: Vec<f64> = sp.multiplicities().iter().map(|&m| m as f64 / n).collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).zip(&w).map(|((x, y), w)| x * y * w).sum::<f64>();
    let mut q: Vec<Vec<f64>> = vec![vec![1.0; th.len()]];
    for i in 1..th.len() {
        let last = &q[i - 1];
        let tq: Vec<f64> = last.iter().zip(th).map(|(v, t)| v * t).collect();
        let alpha = dot(&tq, last) / dot(last, last);
        let mut next: Vec<f64> = tq.iter().zip(last).map(|(a, b)| a - alpha * b).collect();
        if i >= 2 {
            let prev = &q[i - 2];
            let beta = dot(last, last) / dot(prev, prev);
            next.iter_mut().zip(prev).for_each(|(a, b)| *a -= beta * b);
        }
        q.push(next);
    }
    q.iter()
        .map(|v| {
            let c = v[0] / dot(v, v);
            v.iter().map(|x| x * c).collect()
        })
        .collect()
}

fn coincidence(entries: &[CorpusEntry]) -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for e in entries.iter().filter(|e| e.expected == Verdict::Yes) {
        let report = detect::<f64>(&e.scheme).map_err(|err| format!("{}: {err}", e.name))?;
        let order = report.ordering().ok_or_else(|| format!("{}: no ordering", e.name))?.to_vec();
        let sp = report.spectral.spectrum().map_err(|err| format!("{}: {err}", e.name))?;
        let oracle = stieltjes_values(&sp);
        for (i, &xi) in order.iter().enumerate() {
            for h in 0..=report.d {
                let target = report.spectral.p(xi, h);
                worst = worst.max(scaled_error(&oracle[i][h], &target));
            }
        }
        let lib = report.coincidence_residual.ok_or_else(|| format!("{}: no residual", e.name))?;
        worst = worst.max(lib);
        count += 1;
    }
    ensure(worst < 1e-8, || format!("max scaled residual {worst:e}"))?;
    Ok(format!("{count} positives, max scaled residual {worst:.1e}"))
}

fn distinct_in(rng: &mut StdRng, count: usize) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(count);
    while out.len() < count {
        let b = rng.random_range(-5.0..=5.0);
        if !out.contains(&b) {
            out.push(b);
        }
    }
    out
}

fn lagrange_identity() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x1a6);
    let mut exact_worst = 0.0f64;
    let mut float_worst = 0.0f64;
    for _ in 0..1000 {
        let d = rng.random_range(1..=10);
        let betas = distinct_in(&mut rng, d);
        let x: f64 = rng.random_range(-5.0..=5.0);
        let h = rng.random_range(0..d);
        let exact: Vec<Rational> = betas.iter().map(|&b| Rational::lit(b)).collect();
        let xe = Rational::lit(x);
        let got = lagrange_power_identity(&exact, &xe, h).map_err(|e| e.to_string())?;
        exact_worst = exact_worst.max(scaled_error(&got, &num_traits::pow(xe, h)));
        let approx = lagrange_power_identity(&betas, &x, h).map_err(|e| e.to_string())?;
        float_worst = float_worst.max(scaled_error(&approx, &x.powi(h as i32)));
    }
    ensure(exact_worst < 1e-8, || format!("max scaled error {exact_worst:e}"))?;
    Ok(format!("1000 instances, exact max scaled error {exact_worst:.1e} (f64 evaluation: {float_worst:.1e})"))
}

fn graph_identity() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0xe02);
    let start = Instant::now();
    let mut wide_worst = 0.0f64;
    let mut float_worst = 0.0f64;
    let mut largest_d = 0;
    for _ in 0..50 {
        let k = rng.random_range(3..=6);
        let n = loop {
            let n = rng.random_range(k + 2..=30);
            if n * k % 2 == 0 {
                break n;
            }
        };
        let g = random_regular_graph(n, k, &mut rng).map_err(|e| e.to_string())?;
        let sp: Spectrum = graph_spectrum(&g).map_err(|e| format!("n={n} k={k}: {e}"))?;
        let d = sp.d();
        largest_d = largest_d.max(d);
        let wide: WideSpectrum = sp.cast();
        let ps = predistance_polynomials(&wide).map_err(|e| e.to_string())?;
        for i in 1..=d {
            let r = graph_property_residual(&wide, &ps, i).map_err(|e| e.to_string())?;
            let scale = kappa(&wide, i).map_err(|e| e.to_string())?.approx().abs().max(1.0);
            wide_worst = wide_worst.max(r.approx().abs() / scale);
        }
        if let Ok(fps) = predistance_polynomials(&sp) {
            for i in 1..=d {
                if let (Ok(r), Ok(k)) = (graph_property_residual(&sp, &fps, i), kappa(&sp, i)) {
                    float_worst = float_worst.max(r.abs() / k.abs().max(1.0));
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    ensure(wide_worst < 1e-7, || format!("max residual {wide_worst:e}"))?;
    Ok(format!(
        "50 graphs (d up to {largest_d}), double-double max residual {wide_worst:.1e} in {elapsed:.2} s (f64 evaluation: {float_worst:.1e})"
    ))
}

fn mstar(entries: &[CorpusEntry]) -> Outcome {
    let mut worst = 0.0f64;
    let mut names = 0;
    for e in entries {
        let sd: SpectralData = spectral_data(&e.scheme).map_err(|err| err.to_string())?;
        if sd.repeated_theta().is_some() {
            continue;
        }
        for i in 1..=sd.d() {
            let r = mstar_decomposition_residual(&e.scheme, &sd, i).map_err(|err| format!("{}: {err}", e.name))?;
            worst = worst.max(r);
        }
        names += 1;
    }
    ensure(entries.iter().any(|e| e.expected == Verdict::No), || "corpus lacks a negative".into())?;
    ensure(worst < 1e-8, || format!("max residual {worst:e}"))?;
    Ok(format!("{names} schemes with distinct θ, max residual {worst:.1e}"))
}

fn spectral_sanity(entries: &[CorpusEntry]) -> Outcome {
    let mut failures = Vec::new();
    let mut krein_min = f64::INFINITY;
    for e in entries {
        let n = e.scheme.n() as f64;
        let sd: SpectralData = spectral_data(&e.scheme).map_err(|err| err.to_string())?;
        let d = sd.d();
        let pq = sd.p_matrix().dot(sd.q_matrix());
        let mut pq_err = 0.0f64;
        for i in 0..=d {
            for j in 0..=d {
                let want = if i == j { n } else { 0.0 };
                pq_err = pq_err.max((pq[[i, j]] - want).abs());
            }
        }
        if pq_err > 1e-8 * n {
            failures.push(format!("{}: PQ residual {pq_err:e}", e.name));
        }
        let m = sd.multiplicities();
        let frac = m.iter().map(|v| (v - v.round()).abs()).fold(0.0, f64::max);
        let total: f64 = m.iter().map(|v| v.round()).sum();
        if frac > 1e-8 || total != n {
            failures.push(format!("{}: multiplicities {m:?}", e.name));
        }
        let ids = primitive_idempotents(&e.scheme, &sd);
        let kt = krein_parameters(&sd, &ids).map_err(|err| err.to_string())?;
        krein_min = krein_min.min(kt.min() / n);
        if kt.min() < -1e-8 * n {
            failures.push(format!("{}: Krein minimum {:e}", e.name, kt.min()));
        }
    }
    ensure(failures.is_empty(), || failures.join("; "))?;
    Ok(format!("{} schemes, min Krein parameter / n = {krein_min:.1e}", entries.len()))
}

fn negatives() -> Outcome {
    let cyc = scheme(FamilySpec::Cyclotomic13);
    let report = detect::<f64>(&cyc).map_err(|e| e.to_string())?;
    for r in report.routes() {
        ensure(r.verdict == Verdict::No, || format!("cyclotomic13: {} says {}", r.route, r.verdict))?;
    }
    ensure(report.consensus == Verdict::No, || "cyclotomic13 consensus".into())?;
    for spec in [FamilySpec::DisjointCliques { cliques: 3, size: 3 }, FamilySpec::HypercubeReordered { perm: vec![0, 3, 2, 1] }] {
        let name = spec.to_string();
        let report = detect::<f64>(&scheme(spec)).map_err(|e| format!("{name}: {e}"))?;
        ensure(
            report.excess.verdict == Verdict::PreconditionFailed
                && report.predistance.verdict == Verdict::PreconditionFailed,
            || format!("{name}: spectral routes ran"),
        )?;
        ensure(report.tridiagonal.verdict == Verdict::No, || format!("{name}: tridiagonal {}", report.tridiagonal.verdict))?;
        let p_routes = [&report.tridiagonal, &report.nstar, &report.excess, &report.predistance];
        ensure(p_routes.iter().all(|r| r.verdict != Verdict::Yes), || format!("{name}: a route said yes"))?;
        ensure(report.outcome() == Verdict::PreconditionFailed, || format!("{name}: outcome {}", report.outcome()))?;
    }
    Ok("cyclotomic13 no on every route; both precondition cases fail the spectral routes, tridiagonal no".into())
}

fn petersen_graph() -> Graph {
    Graph::from_relation(&scheme(FamilySpec::Petersen), 1)
}

fn graph_side() -> Outcome {
    let g = petersen_graph();
    let dd = distance_data(&g).map_err(|e| e.to_string())?;
    ensure(dd.excess.len() == 10 && dd.excess.iter().all(|&e| e == 6), || format!("excess {:?}", dd.excess))?;
    let exact = ExactSpectrum::new(10, vec![Rational::lit(3.0), Rational::one(), Rational::lit(-2.0)], vec![1, 5, 4])
        .map_err(|e| e.to_string())?;
    let ps = predistance_polynomials(&exact).map_err(|e| e.to_string())?;
    ensure(*ps.value(2, 0) == Rational::lit(6.0), || format!("exact p_2(θ_0) = {}", ps.value(2, 0)))?;
    let report = spectral_excess_report(&g).map_err(|e| e.to_string())?;
    ensure((report.pd_at_theta0 - 6.0).abs() < 1e-9 && report.distance_regular, || {
        format!("p_2(θ_0) = {}, drg = {}", report.pd_at_theta0, report.distance_regular)
    })?;

    let broken = g.without_edge(0, g.neighbors(0)[0]);
    ensure(is_distance_regular(&broken) == Ok(false), || "Petersen minus an edge passed".into())?;
    ensure(scheme_from_drg(&broken).is_err(), || "Petersen minus an edge gave a scheme".into())?;

    for (name, g) in [
        ("petersen", petersen_graph()),
        ("C7", Graph::from_relation(&scheme(FamilySpec::Cycle { n: 7 }), 1)),
        ("Q3", Graph::from_relation(&scheme(FamilySpec::Hamming { n: 3, q: 2 }), 1)),
    ] {
        let s = scheme_from_drg(&g).map_err(|e| format!("{name}: {e}"))?;
        let report = detect::<f64>(&s).map_err(|e| format!("{name}: {e}"))?;
        let identity: Vec<usize> = (0..=s.d()).collect();
        ensure(report.consensus == Verdict::Yes && report.ordering() == Some(&identity[..]), || {
            format!("{name}: {} with ordering {:?}", report.consensus, report.ordering())
        })?;
    }
    Ok("Petersen excess 6 = p_2(θ_0) at all vertices; edge deletion detected; 3 round trips".into())
}

fn is_irreducible_tridiagonal(t: &IntersectionTensor, order: &[usize]) -> bool {
    let d = t.d();
    (0..=d).all(|a| {
        (0..=d).all(|b| {
            let v = t.get(1, order[b], order[a]);
            if a.abs_diff(b) > 1 {
                v == 0
            } else if a.abs_diff(b) == 1 {
                v > 0
            } else {
                true
            }
        })
    })
}

fn relabeled_cycle() -> Outcome {
    let c7 = scheme(FamilySpec::Cycle { n: 7 });
    let perm = [0, 2, 1, 3];
    let s = reorder_relations(&c7, &perm).map_err(|e| e.to_string())?;
    // distance i in the circulant graph {±2} is old relation min(2i mod 7, 7 − 2i mod 7)
    let expected: Vec<usize> = (0..=3)
        .map(|i| {
            let r = 2 * i % 7;
            perm[r.min(7 - r) % 7]
        })
        .collect();
    let t = s.intersection_numbers();
    let valid: Vec<Vec<usize>> = (2..=3)
        .permutations(2)
        .map(|rest| [vec![0, 1], rest].concat())
        .filter(|o| is_irreducible_tridiagonal(t, o))
        .collect();
    ensure(valid == vec![expected.clone()], || format!("brute force found {valid:?}, expected {expected:?}"))?;
    let report = detect::<f64>(&s).map_err(|e| e.to_string())?;
    ensure(report.consensus == Verdict::Yes, || format!("consensus {}", report.consensus))?;
    ensure(report.ordering() == Some(&expected[..]), || format!("ordering {:?}", report.ordering()))?;
    ensure(report.nstar.ordering.as_deref() == Some(&expected[..]), || format!("nstar ordering {:?}", report.nstar.ordering))?;
    Ok(format!("ordering {expected:?}, unique among all candidates"))
}

fn main() -> ExitCode {
    let entries = corpus();
    let criteria: Vec<Criterion> = vec![
        ("route equivalence over the corpus", Box::new(|| route_equivalence(&entries))),
        ("hypercube κ and dual eigenvalues", Box::new(hypercube_spot_values)),
        ("predistance values coincide with P", Box::new(|| coincidence(&entries))),
        ("Lagrange power identity", Box::new(lagrange_identity)),
        ("excess identity on random regular graphs", Box::new(graph_identity)),
        ("M* decomposition", Box::new(|| mstar(&entries))),
        ("spectral sanity", Box::new(|| spectral_sanity(&entries))),
        ("negative and precondition handling", Box::new(negatives)),
        ("graph side", Box::new(graph_side)),
        ("ordering recovery under relabeling", Box::new(relabeled_cycle)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
