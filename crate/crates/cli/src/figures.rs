//! Figure data as CSV tables.

use fogsim_core::analytic;
use fogsim_core::designs::Variant;
use fogsim_core::optimizer;
use fogsim_core::sagnac::{loss_rate, transmissivity, Squeezing};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::table::{Cell, Table};

pub const FIGURE_IDS: [&str; 5] = ["3a", "3b", "5", "6", "7"];

pub fn figure(id: &str, cfg: &RunConfig) -> Result<Table, CliError> {
    match id {
        "3a" => energy_scaling(cfg),
        "3b" => length_scan(cfg),
        "5" => distributed_bars(cfg),
        "6" => count_profiles(cfg),
        "7" => ratio_surfaces(cfg),
        other => Err(CliError::Usage(format!(
            "unknown figure id '{other}' (expected one of {})",
            FIGURE_IDS.join(", ")
        ))),
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i + 1 == n {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    linspace(lo.log10(), hi.log10(), n)
        .into_iter()
        .map(|e| 10f64.powf(e))
        .collect()
}

fn points(cfg: &RunConfig, key: &str) -> Result<usize, CliError> {
    let n = cfg.usize(key)?;
    if n < 2 {
        return Err(CliError::Config(format!(
            "{key}: need at least 2 points, got {n}"
        )));
    }
    Ok(n)
}

fn range(cfg: &RunConfig, lo: &str, hi: &str) -> Result<(f64, f64), CliError> {
    let (a, b) = (cfg.positive(lo)?, cfg.positive(hi)?);
    if !(a < b) {
        return Err(CliError::Config(format!(
            "{lo}/{hi}: need {lo} < {hi}, got {a} and {b}"
        )));
    }
    Ok((a, b))
}

fn db(sigma: f64) -> Result<Squeezing, CliError> {
    Ok(Squeezing::decibels(sigma)?)
}

fn label(x: f64) -> String {
    format!("{x}")
}

/// `T²·Var` against total photon number for C (all photons in the laser)
/// and S (optimal laser/squeezer split) at several transmissivities.
fn energy_scaling(cfg: &RunConfig) -> Result<Table, CliError> {
    let (lo, hi) = range(cfg, "fig3a_n_min", "fig3a_n_max")?;
    let etas = [1.0, 0.9, 0.99, 0.999];
    let mut columns = vec!["n_total".to_string()];
    for eta in etas {
        columns.push(format!("c_eta_{}", label(eta)));
        columns.push(format!("s_eta_{}", label(eta)));
    }
    let mut t = Table::with_columns(columns);
    for n in logspace(lo, hi, points(cfg, "fig3a_points")?) {
        let mut row: Vec<Cell> = vec![n.into()];
        for eta in etas {
            row.push(analytic::var_classical(1.0, eta, n).into());
            row.push(analytic::optimal_energy_split(n, eta, 1.0)?.variance.into());
        }
        t.push(row);
    }
    Ok(t)
}

/// Normalized variance against fiber length for C and for S at 5, 10, 15
/// and infinite dB, plus the optimal-length curve traced as squeezing
/// rises from 0 to `fig3b_sigma_max`.
fn length_scan(cfg: &RunConfig) -> Result<Table, CliError> {
    let b = cfg.positive("b")?;
    let (lo, hi) = range(cfg, "fig3b_l_min", "fig3b_l_max")?;
    let n = points(cfg, "fig3b_points")?;
    let levels = [db(5.0)?, db(10.0)?, db(15.0)?, Squeezing::Infinite];
    let mut t = Table::new(&[
        "length_km",
        "c",
        "s_5db",
        "s_10db",
        "s_15db",
        "s_infdb",
        "opt_squeeze_db",
        "opt_length_km",
        "opt_variance",
    ]);
    let sigma_max = cfg.positive("fig3b_sigma_max")?;
    for (l, sigma) in linspace(lo, hi, n)
        .into_iter()
        .zip(linspace(0.0, sigma_max, n))
    {
        let mut row: Vec<Cell> = vec![
            l.into(),
            analytic::normalized_variance(1.0, b, l, 1.0).into(),
        ];
        for sq in levels {
            row.push(analytic::normalized_variance(sq.noise_factor(), b, l, 1.0).into());
        }
        let opt = analytic::optimal_length(Variant::S, b, db(sigma)?, 1)?;
        row.extend([sigma.into(), opt.length_km.into(), opt.variance.into()]);
        t.push(row);
    }
    Ok(t)
}

/// Optimized-length normalized variance of D, P (shared budget), P (one
/// full squeezer per interferometer) and E, with squeezer counts.
fn distributed_bars(cfg: &RunConfig) -> Result<Table, CliError> {
    let b = cfg.positive("b")?;
    let sq = db(cfg.f64("fig_sigma_db")?)?;
    let mut t = Table::new(&[
        "m",
        "d",
        "p_shared",
        "p_per_mode",
        "e",
        "squeezers_d",
        "squeezers_p_shared",
        "squeezers_p_per_mode",
        "squeezers_e",
    ]);
    for m in cfg.list_usize("fig5_counts")? {
        let var =
            |v: Variant, s: Squeezing| analytic::optimal_length(v, b, s, m).map(|o| o.variance);
        t.push(vec![
            m.into(),
            var(Variant::D, Squeezing::NONE)?.into(),
            var(Variant::P, sq)?.into(),
            var(Variant::P, sq.scaled(m))?.into(),
            var(Variant::E, sq)?.into(),
            0usize.into(),
            m.into(),
            m.into(),
            1usize.into(),
        ]);
    }
    Ok(t)
}

/// Fixed-length profiles against `M` for D, P (shared budget) and E at
/// each configured length, plus the optimized-`M` curves traced over a
/// length sweep that carries the Design E optimum from 1 to `fig6_m_max`.
fn count_profiles(cfg: &RunConfig) -> Result<Table, CliError> {
    let b = cfg.positive("b")?;
    let sq = db(cfg.f64("fig_sigma_db")?)?;
    let lengths = cfg.list_f64("fig6_lengths")?;
    let m_max = cfg.usize("fig6_m_max")?;
    if m_max < 2 {
        return Err(CliError::Config(format!(
            "fig6_m_max: need at least 2, got {m_max}"
        )));
    }
    let mut columns = vec!["m".to_string()];
    for &l in &lengths {
        for name in ["d", "p", "e"] {
            columns.push(format!("{name}_l{}", label(l)));
        }
    }
    columns.extend(
        [
            "param_length_km",
            "d_opt_m",
            "d_opt_variance",
            "p_opt_m",
            "p_opt_variance",
            "e_opt_m",
            "e_opt_variance",
        ]
        .map(String::from),
    );

    let profiles = lengths
        .iter()
        .map(|&l| {
            Ok([
                optimizer::optimize_m_integer(Variant::D, b, l, Squeezing::NONE, m_max)?.profile,
                optimizer::optimize_m_integer(Variant::P, b, l, sq, m_max)?.profile,
                optimizer::optimize_m_integer(Variant::E, b, l, sq, m_max)?.profile,
            ])
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let c = loss_rate(b);
    let e_scale = 1.0 + analytic::count_exponent(sq.noise_reduction());
    let mut t = Table::with_columns(columns);
    for (i, target) in linspace(1.0, m_max as f64, m_max).into_iter().enumerate() {
        let mut row: Vec<Cell> = vec![(i + 1).into()];
        for set in &profiles {
            for profile in set {
                row.push(profile[i].1.into());
            }
        }
        let l = target * e_scale / c;
        row.push(l.into());
        for (v, s) in [
            (Variant::D, Squeezing::NONE),
            (Variant::P, sq),
            (Variant::E, sq),
        ] {
            let opt = optimizer::optimize_m_continuous(v, b, l, s)?;
            row.extend([opt.m.into(), opt.variance.into()]);
        }
        t.push(row);
    }
    Ok(t)
}

/// Fixed-length sensitivity ratios over squeezing and `M`, with the
/// `1 − η` floor of each coil.
fn ratio_surfaces(cfg: &RunConfig) -> Result<Table, CliError> {
    let b = cfg.positive("b")?;
    let length = cfg.positive("fig7_length_km")?;
    let sigma_max = cfg.positive("fig7_sigma_max")?;
    let m_max = cfg.usize("fig7_m_max")?;
    let mut t = Table::new(&[
        "squeeze_db",
        "m",
        "eta",
        "r_s",
        "r_p",
        "r_e",
        "one_minus_eta",
    ]);
    let eta_single = transmissivity(b, length);
    for sigma in linspace(0.0, sigma_max, points(cfg, "fig7_sigma_points")?) {
        let sq = db(sigma)?;
        let r_s = analytic::fixed_eta_ratio(Variant::S, 1, sq, eta_single);
        for m in 1..=m_max {
            let eta = transmissivity(b, length / m as f64);
            t.push(vec![
                sigma.into(),
                m.into(),
                eta.into(),
                r_s.into(),
                analytic::fixed_eta_ratio(Variant::P, m, sq, eta).into(),
                analytic::fixed_eta_ratio(Variant::E, m, sq, eta).into(),
                (1.0 - eta).into(),
            ]);
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(linspace(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
        let g = logspace(1.0, 1e6, 61);
        assert_eq!(g.len(), 61);
        assert!((g[10] - 10.0).abs() < 1e-12 && g[60] == 1e6);
    }

    #[test]
    fn unknown_id() {
        let err = figure("4", &RunConfig::default()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.message().contains("'4'"));
    }
}
