use fogsim_core::analytic;
use fogsim_core::designs::Variant;
use fogsim_core::optimizer::{
    minimize_scalar, numeric_count_ratio, optimize_energy_split_numeric, optimize_length_numeric,
    optimize_m_continuous, optimize_m_integer, ScalarProblem,
};
use fogsim_core::sagnac::Squeezing;

const LOSSES: [f64; 3] = [0.2, 0.5, 1.0];
const SIGMAS: [f64; 5] = [0.0, 5.0, 10.0, 15.0, 20.0];
const COUNTS: [usize; 5] = [1, 2, 4, 8, 16];
const LENGTHS: [f64; 3] = [5.0, 15.0, 30.0];

fn db(s: f64) -> Squeezing {
    Squeezing::decibels(s).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn numeric_lengths_match_analytic() {
    for v in Variant::ALL {
        for &b in &LOSSES {
            for &sigma in &SIGMAS {
                if !v.uses_squeezing() && sigma != 0.0 {
                    continue;
                }
                for &m in &COUNTS {
                    if !v.is_distributed() && m != 1 {
                        continue;
                    }
                    let sq = db(sigma);
                    let exact = analytic::optimal_length(v, b, sq, m).unwrap();
                    let num = optimize_length_numeric(v, b, sq, m).unwrap();
                    assert!(
                        rel(num.length_km, exact.length_km) <= 1e-6,
                        "{v} b={b} σ={sigma} M={m}"
                    );
                    assert!(rel(num.variance, exact.variance) <= 1e-9);
                }
            }
        }
    }
}

#[test]
fn numeric_counts_match_analytic() {
    for v in [Variant::D, Variant::E] {
        for &b in &LOSSES {
            for &sigma in &SIGMAS {
                if v == Variant::D && sigma != 0.0 {
                    continue;
                }
                for &l in &LENGTHS {
                    let sq = db(sigma);
                    let exact = analytic::optimal_m(v, b, l, sq).unwrap();
                    let num = optimize_m_continuous(v, b, l, sq).unwrap();
                    assert!(
                        rel(num.m, exact.choice.continuous) <= 1e-6,
                        "{v} b={b} σ={sigma} L={l}: {} vs {}",
                        num.m,
                        exact.choice.continuous
                    );
                    assert!(rel(num.variance, exact.variance_continuous) <= 1e-9);
                }
            }
        }
    }
}

#[test]
fn integer_search_agrees_with_rounded_analytic() {
    for &b in &LOSSES {
        for &l in &LENGTHS {
            for &sigma in &SIGMAS {
                let s = optimize_m_integer(Variant::E, b, l, db(sigma), 64).unwrap();
                let a = s.analytic.unwrap();
                assert_eq!(s.m_best, a.choice.chosen, "b={b} L={l} σ={sigma}");
                let brute = s.profile.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
                assert_eq!(s.variance, brute);
            }
        }
    }
}

#[test]
fn energy_split_matches_analytic() {
    for &eta in &[0.1, 0.5, 0.9, 0.99, 1.0] {
        for &n in &[1.0, 10.0, 100.0, 1000.0, 1e5] {
            let exact = analytic::optimal_energy_split(n, eta, 1.0).unwrap();
            let num = optimize_energy_split_numeric(n, eta).unwrap();
            assert!(
                rel(num.n_s, exact.n_s) <= 1e-8,
                "η={eta} N={n}: {} vs {}",
                num.n_s,
                exact.n_s
            );
            assert!(rel(num.variance, exact.variance) <= 1e-8);
            assert!(num.n_s <= n / 2.0, "η={eta} N={n}");
        }
    }
}

/// Fixed-length ratios from the exhaustive integer search follow `e^Λ̃`
/// and stay well away from the optimized-length family `2e^Λ/(2+Λ)`.
#[test]
fn fixed_length_ratio_follows_count_exponent() {
    let (b, l) = (0.5, 400.0);
    for &sigma in &[5.0, 10.0, 15.0, 20.0] {
        let sq = db(sigma);
        let e = optimize_m_integer(Variant::E, b, l, sq, 2000).unwrap();
        let d = optimize_m_integer(Variant::D, b, l, Squeezing::NONE, 2000).unwrap();
        let ratio = e.variance / d.variance;
        let lt = analytic::capital_lambda_fixed(sq.mean_photons());
        let lam = analytic::capital_lambda(sq.mean_photons());
        assert!(
            (ratio - lt.exp()).abs() < 1e-4,
            "σ={sigma}: {ratio} vs {}",
            lt.exp()
        );
        assert!((ratio - 2.0 * lam.exp() / (2.0 + lam)).abs() > 0.1);
        assert!((ratio - lam.exp()).abs() > 0.05);
    }
}

#[test]
fn product_profile_lies_between_d_and_e() {
    let (b, l) = (0.5, 15.0);
    let sq = db(10.0);
    let d = optimize_m_integer(Variant::D, b, l, Squeezing::NONE, 32).unwrap();
    let p = optimize_m_integer(Variant::P, b, l, sq, 32).unwrap();
    let e = optimize_m_integer(Variant::E, b, l, sq, 32).unwrap();
    assert!(p.analytic.is_none());
    for m in 2..=32 {
        let (vd, vp, ve) = (d.profile[m - 1].1, p.profile[m - 1].1, e.profile[m - 1].1);
        assert!(ve < vp && vp < vd, "M={m}");
    }
}

#[test]
fn fixed_length_ratio_independent_of_fiber() {
    let sq = db(10.0);
    let base = numeric_count_ratio(0.5, 15.0, sq).unwrap();
    for (b, l) in [(0.25, 40.0), (1.0, 8.0), (0.2, 5.0)] {
        let r = numeric_count_ratio(b, l, sq).unwrap();
        assert!((r - base).abs() <= 1e-6, "b={b} L={l}: {r} vs {base}");
    }
}

#[test]
fn minimizer_is_deterministic() {
    let run = || {
        let p = ScalarProblem::new(|x: f64| (x - 1.3).powi(2) * (1.0 + x * x), -4.0, 9.0);
        minimize_scalar(&p).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn product_continuous_count_shares_the_budget() {
    let (b, l) = (0.5, 15.0);
    let sq = db(10.0);
    let n_s = sq.mean_photons();
    let c = 0.5 * std::f64::consts::LN_10 / 10.0;
    // brute-force scan of (M/L²)(r(N_s/M) + expm1(cL/M)) over a fine grid
    let var = |m: f64| {
        let x = n_s / m;
        let r = 1.0 / ((1.0 + x).sqrt() + x.sqrt()).powi(2);
        m / (l * l) * (r + (c * l / m).exp_m1())
    };
    let (m_scan, v_scan) = (1..=200_000)
        .map(|k| 0.5 + k as f64 * 1e-4)
        .map(|m| (m, var(m)))
        .fold(
            (0.0, f64::INFINITY),
            |acc, p| if p.1 < acc.1 { p } else { acc },
        );
    let by_db = optimize_m_continuous(Variant::P, b, l, sq).unwrap();
    let by_photons = optimize_m_continuous(Variant::P, b, l, Squeezing::Photons(n_s)).unwrap();
    assert!((by_db.m - m_scan).abs() < 1e-3, "{} vs {m_scan}", by_db.m);
    assert!((by_db.variance - v_scan).abs() < 1e-12);
    assert!((by_db.m - by_photons.m).abs() < 1e-8);
    let e = optimize_m_continuous(Variant::E, b, l, sq).unwrap();
    let d = optimize_m_continuous(Variant::D, b, l, Squeezing::NONE).unwrap();
    assert!(e.variance < by_db.variance && by_db.variance < d.variance);
}
