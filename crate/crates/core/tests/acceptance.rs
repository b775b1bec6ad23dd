//! Acceptance checks. Each criterion prints one PASS/FAIL line; the test fails
//! if any criterion does.

#![allow(clippy::needless_range_loop)]

mod common;

use std::time::{Duration, Instant};

use common::{interior_instance, quadrature_expectation, random_ladder, random_trapezoid, rng, scale};
use fuzzyeq_core::economy::{corner_analysis, demand, utility_gain_closed_form, Economy, Method, PriceVector, SolverConfig};
use fuzzyeq_core::game::profiles;
use fuzzyeq_core::oracle::{grid_demand, grid_equilibrium, GridSpec};
use fuzzyeq_core::preference::{Element, FuzzyRelation, PreferenceOutcome};
use fuzzyeq_core::{solve_equilibrium, EquilibriumReport, FuzzyGame, FuzzyNumber};
use rand::Rng;

const CASES: usize = 1000;
const P1: f64 = 7.0 / 11.0;
const ALLOCATION: [[f64; 2]; 2] = [[73.0 / 65.0, 116.0 / 65.0], [187.0 / 65.0, 79.0 / 65.0]];

type Check = std::result::Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn solve(method: Method) -> (EquilibriumReport, Duration) {
    let start = Instant::now();
    let report = solve_equilibrium(&Economy::reference(), &SolverConfig { method, ..SolverConfig::default() })
        .expect("reference instance solves");
    (report, start.elapsed())
}

fn reference_price() -> Check {
    for method in [Method::Ascent, Method::Bisect] {
        let (r, took) = solve(method);
        ensure(r.converged, || format!("{method} did not converge"))?;
        ensure((r.price[0] - P1).abs() <= 1e-6, || format!("{method}: p1 = {}", r.price[0]))?;
        ensure(took < Duration::from_secs(1), || format!("{method} took {took:?}"))?;
    }
    Ok(())
}

fn reference_allocation() -> Check {
    let econ = Economy::reference();
    let total = econ.total_endowment();
    for method in [Method::Ascent, Method::Bisect] {
        let (r, _) = solve(method);
        for i in 0..2 {
            for h in 0..2 {
                let err = (r.allocation[i][h] - ALLOCATION[i][h]).abs();
                ensure(err <= 1e-6, || format!("{method}: x[{i}][{h}] off by {err}"))?;
            }
        }
        for h in 0..2 {
            let err = (r.allocation[0][h] + r.allocation[1][h] - total[h]).abs();
            ensure(err <= 1e-9, || format!("{method}: good {h} clears only to {err}"))?;
        }
    }
    Ok(())
}

fn economic_properties() -> Check {
    let econ = Economy::reference();
    let closed = utility_gain_closed_form(&econ, 0).map_err(|e| e.to_string())?;
    for method in [Method::Ascent, Method::Bisect] {
        let (r, _) = solve(method);
        ensure(r.residuals.clearing <= 1e-8, || format!("{method}: clearing {}", r.residuals.clearing))?;
        for i in 0..2 {
            let w = econ.endowment(i);
            let balance: f64 = (0..2).map(|h| r.price[h] * (r.allocation[i][h] - w[h])).sum();
            ensure(balance.abs() <= 1e-8, || format!("{method}: agent {i} budget off by {balance}"))?;
        }
        let u = econ.utility(0);
        let gain = u.expected_utility(&r.allocation[0]).unwrap() - u.expected_utility(econ.endowment(0)).unwrap();
        ensure((gain - 2.0 / 65.0).abs() <= 1e-8, || format!("{method}: gain {gain}"))?;
        ensure((gain - closed).abs() <= 1e-8, || format!("{method}: gain {gain} vs closed form {closed}"))?;
    }
    Ok(())
}

fn oracle_equivalence() -> Check {
    let econ = Economy::reference();
    let p = PriceVector::normalized(&[7.0, 4.0]).unwrap();
    let spec = GridSpec::new(1e-3).unwrap();
    let gap = |x: &[f64], y: &[f64]| x.iter().zip(y).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    for i in 0..2 {
        let g = grid_demand(econ.utility(i), econ.endowment(i), &p, &spec).map_err(|e| e.to_string())?;
        ensure(gap(&g.point, &ALLOCATION[i]) <= 2e-3, || format!("reference agent {i}: {:?}", g.point))?;
    }
    let mut rng = rng(4);
    for case in 0..50 {
        let (w, _, inst) = interior_instance(&mut rng, 2);
        let t: f64 = rng.gen_range(0.05..0.95);
        let p = PriceVector::normalized(&[1.0 - t, t]).unwrap();
        for i in 0..2 {
            let exact = demand(inst.utility(i), &w[i], &p, 1e-12).unwrap();
            let g = grid_demand(inst.utility(i), &w[i], &p, &spec).map_err(|e| e.to_string())?;
            ensure(gap(&g.point, &exact) <= 2e-3, || format!("instance {case}, agent {i}: {:?} vs {exact:?}", g.point))?;
        }
    }
    let scan = grid_equilibrium(&econ, 1e-4).map_err(|e| e.to_string())?;
    let p2 = 4.0 / 11.0;
    ensure((scan.price[1] - p2).abs() <= 1e-4, || format!("scan p2 = {}", scan.price[1]))?;
    ensure(scan.bracket.0 <= p2 && p2 <= scan.bracket.1, || format!("bracket {:?}", scan.bracket))
}

fn fuzzy_core() -> Check {
    let mut rng = rng(5);
    for case in 0..CASES {
        let f = random_ladder(&mut rng);
        let g = random_ladder(&mut rng);
        let tol = 1e-12 * (scale(&f) + scale(&g));
        let (ef, eg) = (f.expected_value(), g.expected_value());
        let sum = f.add(&g);
        let diff = f.subtract(&g);
        ensure((sum.expected_value() - (ef + eg)).abs() <= tol, || format!("case {case}: E(f+g)"))?;
        ensure((diff.expected_value() - (ef - eg)).abs() <= tol, || format!("case {case}: E(f-g)"))?;

        let lambda = if rng.gen() { rng.gen_range(0.001..5.0) } else { -rng.gen_range(0.001..5.0) };
        let scaled = f.scale(lambda);
        ensure((scaled.expected_value() - lambda * ef).abs() <= 1e-12 * lambda.abs() * scale(&f), || {
            format!("case {case}: E(λf) with λ = {lambda}")
        })?;

        for h in [&sum, &diff, &scaled, &f.shift(lambda), &(-&f)] {
            ensure(FuzzyNumber::from_levels(h.levels().to_vec()).is_ok(), || format!("case {case}: nesting lost"))?;
            let (a1, a2) = {
                let a: f64 = rng.gen();
                let b: f64 = rng.gen();
                (a.min(b), a.max(b))
            };
            let (l1, u1) = h.alpha_cut(a1).unwrap();
            let (l2, u2) = h.alpha_cut(a2).unwrap();
            ensure(l1 <= l2 && l2 <= u2 && u2 <= u1, || format!("case {case}: cuts at {a1} and {a2} not nested"))?;
        }

        let t = random_trapezoid(&mut rng);
        let trap = FuzzyNumber::trapezoid(t[0], t[1], t[2], t[3]).unwrap();
        let mean = t.iter().sum::<f64>() / 4.0;
        ensure((trap.expected_value() - mean).abs() <= 1e-12, || format!("case {case}: E of {t:?}"))?;
        ensure((quadrature_expectation(&trap, 64) - mean).abs() <= 1e-12, || format!("case {case}: quadrature of {t:?}"))?;

        let h = random_ladder(&mut rng);
        let geq = |a: &FuzzyNumber, b: &FuzzyNumber| a.compare(b, 0.0).is_weakly_superior();
        ensure(geq(&f, &g) || geq(&g, &f), || format!("case {case}: incomparable pair"))?;
        for (a, b, c) in [(&f, &g, &h), (&g, &h, &f), (&h, &f, &g), (&f, &h, &g), (&g, &f, &h), (&h, &g, &f)] {
            ensure(!(geq(a, b) && geq(b, c)) || geq(a, c), || format!("case {case}: transitivity"))?;
        }
    }
    Ok(())
}

fn labelled(mu: Vec<Vec<FuzzyNumber>>) -> FuzzyRelation {
    let elements = (0..mu.len()).map(|i| Element::Label(format!("e{i}"))).collect();
    FuzzyRelation::new(elements, mu).unwrap()
}

fn preference_suite() -> Check {
    const TOL: f64 = 1e-9;
    let mut rng = rng(6);
    for case in 0..CASES {
        let n = rng.gen_range(1..=8);
        let scores: Vec<f64> = (0..n).map(|_| rng.gen_range(0..4) as f64).collect();
        let mu = (0..n)
            .map(|x| {
                (0..n)
                    .map(|_| {
                        let f = random_ladder(&mut rng);
                        f.shift(scores[x] - f.expected_value())
                    })
                    .collect()
            })
            .collect();
        let r = labelled(mu);
        ensure(r.is_consistent(TOL), || format!("case {case}: consistent relation rejected"))?;
        let u = r.build_utility(TOL).map_err(|e| e.to_string())?;
        for x in 0..n {
            ensure(r.prefers(x, x, TOL).unwrap() == PreferenceOutcome::FuzzilyIndifferent, || {
                format!("case {case}: {x} not indifferent to itself")
            })?;
            for y in 0..n {
                let xy = r.prefers(x, y, TOL).unwrap();
                let yx = r.prefers(y, x, TOL).unwrap();
                ensure(xy.is_weak() || yx.is_weak(), || format!("case {case}: ({x}, {y}) incomparable"))?;
                ensure(!(xy.is_weak() && yx.is_weak()) || xy == PreferenceOutcome::FuzzilyIndifferent, || {
                    format!("case {case}: ({x}, {y}) mutual but not indifferent")
                })?;
                for z in 0..n {
                    let yz = r.prefers(y, z, TOL).unwrap();
                    let xz = r.prefers(x, z, TOL).unwrap();
                    ensure(!(xy.is_weak() && yz.is_weak()) || xz.is_weak(), || format!("case {case}: ({x}, {y}, {z})"))?;
                }
                let by_utility: PreferenceOutcome = u[x].compare(&u[y], TOL).into();
                ensure(by_utility == xy, || format!("case {case}: utility disagrees on ({x}, {y})"))?;
            }
        }
    }

    let one = FuzzyNumber::trapezoid(0.5, 1.0, 1.0, 1.5).unwrap();
    let zero = FuzzyNumber::crisp(0.0);
    let cycle = labelled(vec![
        vec![zero.clone(), one.clone(), zero.clone()],
        vec![zero.clone(), zero.clone(), one.clone()],
        vec![one.clone(), zero.clone(), zero.clone()],
    ]);
    let witness = cycle.consistency_witness(TOL);
    ensure(witness == Some((0, 1, 2)), || format!("cycle witness {witness:?}"))?;
    let (x, y, z) = (0, 1, 2);
    let weak = |a, b| cycle.prefers(a, b, TOL).unwrap().is_weak();
    ensure(weak(x, y) && weak(y, z) && !weak(x, z), || "witness does not break transitivity".into())?;
    ensure(cycle.build_utility(TOL).is_err(), || "utility built for a cycle".into())
}

fn game_suite() -> Check {
    const TOL: f64 = 1e-9;
    let tri = |c: f64| FuzzyNumber::trapezoid(c - 0.5, c - 0.25, c + 0.25, c + 0.5).unwrap();
    let pennies = FuzzyGame::bimatrix(
        vec![vec![tri(1.0), tri(-1.0)], vec![tri(-1.0), tri(1.0)]],
        vec![vec![tri(-1.0), tri(1.0)], vec![tri(1.0), tri(-1.0)]],
    )
    .unwrap();
    let sol = pennies.find_mixed_nash_2p(TOL).map_err(|e| e.to_string())?;
    ensure(sol.equilibria.len() == 1, || format!("pennies: {:?}", sol.equilibria))?;
    let halves = sol.equilibria[0].strategies().iter().flatten().all(|&p| (p - 0.5).abs() <= 1e-9);
    ensure(halves, || format!("pennies: {:?}", sol.equilibria[0]))?;

    let bos = FuzzyGame::crisp_bimatrix(&[vec![2.0, 0.0], vec![0.0, 1.0]], &[vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap();
    let bos_sol = bos.find_mixed_nash_2p(TOL).map_err(|e| e.to_string())?;
    ensure(bos_sol.equilibria.len() == 3, || format!("battle of the sexes: {:?}", bos_sol.equilibria))?;

    let mut rng = rng(7);
    let mut games = vec![pennies, bos];
    for _ in 0..CASES {
        let counts: Vec<usize> = (0..rng.gen_range(2..=3)).map(|_| rng.gen_range(1..=3)).collect();
        let cells: usize = counts.iter().product();
        let payoffs = (0..counts.len())
            .map(|_| (0..cells).map(|_| tri(rng.gen_range(-2..3) as f64)).collect())
            .collect();
        games.push(FuzzyGame::new(counts, payoffs).unwrap());
    }
    for (k, game) in games.iter().enumerate() {
        if game.players() == 2 {
            for eq in game.find_mixed_nash_2p(TOL).map_err(|e| e.to_string())?.equilibria {
                let report = game.verify_nash(&eq, TOL).map_err(|e| e.to_string())?;
                ensure(report.is_equilibrium, || format!("game {k}: {eq:?} fails verification"))?;
            }
        }
        let pure = game.find_pure_nash(TOL);
        for p in &pure {
            let mixed = fuzzyeq_core::MixedProfile::pure(p, game.strategy_counts()).unwrap();
            ensure(game.verify_nash(&mixed, TOL).unwrap().is_equilibrium, || format!("game {k}: pure {p:?}"))?;
        }
        let shift = rng.gen_range(-20.0..20.0);
        let player = rng.gen_range(0..game.players());
        ensure(game.shift_player(player, shift).find_pure_nash(TOL) == pure, || {
            format!("game {k}: shifting player {player} by {shift} changed the pure equilibria")
        })?;
        ensure(profiles(game.strategy_counts()).count() == game.strategy_counts().iter().product::<usize>(), || {
            format!("game {k}: profile enumeration")
        })?;
    }
    Ok(())
}

fn corner_rejection() -> Check {
    let econ = Economy::reference();
    let c = corner_analysis(&econ, 1e-10).map_err(|e| e.to_string())?;
    for i in 0..2 {
        let w = econ.endowment(i);
        let b = econ.utility(i).lin_expected();
        let free_first = vec![-b[0], w[1]];
        let free_second = vec![w[0], -b[1]];
        ensure(c.free_first.demands[i] == free_first, || format!("p=(0,1), agent {i}: {:?}", c.free_first.demands[i]))?;
        ensure(c.free_second.demands[i] == free_second, || format!("p=(1,0), agent {i}: {:?}", c.free_second.demands[i]))?;
    }
    // z₁ − z₂ = −A at p = (0, 1) and B at p = (1, 0).
    ensure(c.free_first.z1_minus_z2 == 7.0 && c.free_first.z1_minus_z2 > 0.0, || {
        format!("p=(0,1): z1 - z2 = {}", c.free_first.z1_minus_z2)
    })?;
    ensure(c.free_second.z1_minus_z2 == -4.0 && c.free_second.z1_minus_z2 < 0.0, || {
        format!("p=(1,0): z1 - z2 = {}", c.free_second.z1_minus_z2)
    })?;
    ensure(!c.free_first.solves_price_inequality && !c.free_second.solves_price_inequality, || {
        "a corner was accepted".into()
    })?;
    let (r, _) = solve(Method::Ascent);
    ensure(r.corners.as_ref() == Some(&c), || "solver report disagrees with the corner analysis".into())
}

#[test]
fn acceptance() {
    type Criterion = (&'static str, fn() -> Check);
    let criteria: [Criterion; 8] = [
        ("reference equilibrium price", reference_price),
        ("reference allocation and clearing", reference_allocation),
        ("economic properties at equilibrium", economic_properties),
        ("oracle equivalence", oracle_equivalence),
        ("fuzzy-core properties", fuzzy_core),
        ("preference suite", preference_suite),
        ("game suite", game_suite),
        ("corner-price rejection", corner_rejection),
    ];
    let mut failed = Vec::new();
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("criterion {}: PASS  {name}", k + 1),
            Err(why) => {
                println!("criterion {}: FAIL  {name}: {why}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
