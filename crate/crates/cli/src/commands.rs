use fogsim_core::analytic;
use fogsim_core::designs::{DesignConfig, Variant};
use fogsim_core::gaussian::Quadrature;
use fogsim_core::optimizer;
use fogsim_core::sagnac::{transmissivity, Squeezing};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::table::{Record, Table};

const TABLE_SIGMAS: [&str; 5] = ["5", "10", "15", "20", "inf"];

/// Both sensitivity-ratio rows, each from the closed form and from the
/// numeric optimizers, at 5, 10, 15, 20 and infinite dB.
pub fn table1(cfg: &RunConfig) -> Result<Table, CliError> {
    let b = cfg.positive("b")?;
    let length = cfg.opt_f64("fix_length")?.unwrap_or(15.0);
    let mut t = Table::new(&["row", "squeeze_db", "analytic", "numeric", "abs_diff"]);
    for row in ["optimized_length", "fixed_length"] {
        for sigma in TABLE_SIGMAS {
            let sq: Squeezing = sigma.parse()?;
            let ratios = analytic::sensitivity_ratios(sq, 1.0)?;
            let (exact, numeric) = match row {
                "optimized_length" => (
                    1.0 / ratios.optimized_length,
                    1.0 / optimizer::numeric_length_ratio(Variant::E, b, sq, 1)?,
                ),
                _ => (
                    1.0 / ratios.fixed_length,
                    1.0 / optimizer::numeric_count_ratio(b, length, sq)?,
                ),
            };
            t.push(vec![
                row.into(),
                sigma.into(),
                exact.into(),
                numeric.into(),
                (exact - numeric).abs().into(),
            ]);
        }
    }
    Ok(t)
}

struct Operating {
    eta: f64,
    t: f64,
    coil_km: Option<f64>,
}

/// Transmissivity and time factor, explicit or derived from the per-coil
/// length `length_km / M`.
fn operating_point(cfg: &RunConfig, m: usize) -> Result<Operating, CliError> {
    let coil_km = cfg.opt_f64("length_km")?.map(|l| l / m as f64);
    if let Some(l) = coil_km {
        if !(l > 0.0) {
            return Err(CliError::Config(format!(
                "length_km: must be positive, got {}",
                l * m as f64
            )));
        }
    }
    let eta = match (cfg.opt_f64("eta")?, coil_km) {
        (Some(eta), _) => eta,
        (None, Some(l)) => transmissivity(cfg.positive("b")?, l),
        (None, None) => 1.0,
    };
    if !(0.0..=1.0).contains(&eta) || eta == 0.0 {
        return Err(CliError::Config(format!(
            "eta: must lie in (0, 1], got {eta}"
        )));
    }
    let t = match (cfg.opt_f64("t")?, coil_km) {
        (Some(_), _) => cfg.positive("t")?,
        (None, Some(l)) => cfg.geometry()?.time_factor(l),
        (None, None) => 1.0,
    };
    Ok(Operating { eta, t, coil_km })
}

fn squeezing_fields(rec: Record, sq: Squeezing) -> Record {
    rec.field("n_s", sq.mean_photons())
        .field("squeeze_db", sq.db())
}

/// Small-angle estimator variance of one design at one operating point.
pub fn variance(cfg: &RunConfig) -> Result<Record, CliError> {
    let variant = cfg.variant()?;
    let m = cfg.usize("m")?;
    let n_v = cfg.positive("n_v")?;
    let sq = cfg.squeezing()?;
    let op = operating_point(cfg, m)?;
    let var = analytic::design_variance(variant, op.t, op.eta, n_v, m, sq)?;
    let v_scale = cfg.geometry()?.v_scale();
    let rec = Record::new()
        .field("design", variant.name())
        .field("m", m)
        .field("n_v", n_v)
        .field("laser_photons", m as f64 * n_v);
    Ok(squeezing_fields(rec, sq)
        .field("eta", op.eta)
        .field("t", op.t)
        .opt("coil_km", op.coil_km)
        .field("variance", var)
        .field("variance_normalized", var * n_v / (v_scale * v_scale))
        .field(
            "ratio_vs_baseline",
            analytic::fixed_eta_ratio(variant, m, sq, op.eta),
        )
        .field("baseline", variant.baseline().name()))
}

pub fn optimize(cfg: &RunConfig) -> Result<Record, CliError> {
    if cfg.is_set("energy") {
        return optimize_energy(cfg);
    }
    if cfg.is_set("fix_length") {
        return optimize_count(cfg);
    }
    optimize_length(cfg)
}

fn optimize_energy(cfg: &RunConfig) -> Result<Record, CliError> {
    let n = cfg.positive("energy")?;
    let eta = cfg.opt_f64("eta")?.unwrap_or(1.0);
    let exact = analytic::optimal_energy_split(n, eta, 1.0)?;
    let numeric = optimizer::optimize_energy_split_numeric(n, eta)?;
    Ok(Record::new()
        .field("mode", "energy_split")
        .field("n_total", n)
        .field("eta", eta)
        .field("n_s_analytic", exact.n_s)
        .field("n_s_numeric", numeric.n_s)
        .field("variance_t2_analytic", exact.variance)
        .field("variance_t2_numeric", numeric.variance)
        .field(
            "n_s_rel_diff",
            (exact.n_s - numeric.n_s).abs() / exact.n_s.abs().max(f64::MIN_POSITIVE),
        ))
}

fn optimize_length(cfg: &RunConfig) -> Result<Record, CliError> {
    let variant = cfg.variant()?;
    let m = cfg.usize("m")?;
    let b = cfg.positive("b")?;
    let sq = cfg.squeezing()?;
    let exact = analytic::optimal_length(variant, b, sq, m)?;
    let numeric = optimizer::optimize_length_numeric(variant, b, sq, m)?;
    let baseline = analytic::optimal_length(variant.baseline(), b, Squeezing::NONE, m)?;
    let rec = Record::new()
        .field("mode", "optimal_length")
        .field("design", variant.name())
        .field("m", m)
        .field("b", b);
    Ok(squeezing_fields(rec, sq)
        .field("length_km_analytic", exact.length_km)
        .field("length_km_numeric", numeric.length_km)
        .field("variance_normalized_analytic", exact.variance)
        .field("variance_normalized_numeric", numeric.variance)
        .field("exponent", exact.exponent)
        .field("ratio_vs_baseline", exact.variance / baseline.variance)
        .field("baseline", variant.baseline().name()))
}

fn optimize_count(cfg: &RunConfig) -> Result<Record, CliError> {
    let variant = cfg.variant()?;
    let length = cfg.positive("fix_length")?;
    let b = cfg.positive("b")?;
    let sq = cfg.squeezing()?;
    let m_max = cfg.usize("m_max")?;
    let search = optimizer::optimize_m_integer(variant, b, length, sq, m_max)?;
    let classical = optimizer::optimize_m_integer(Variant::D, b, length, Squeezing::NONE, m_max)?;
    let rec = Record::new()
        .field("mode", "optimal_count")
        .field("design", variant.name())
        .field("length_km", length)
        .field("b", b);
    let mut rec = squeezing_fields(rec, sq)
        .field("m_best", search.m_best)
        .field("variance_normalized", search.variance)
        .field("ratio_vs_d", search.variance / classical.variance)
        .field("m_best_d", classical.m_best);
    if let Some(a) = search.analytic {
        rec = rec
            .field("m_continuous_analytic", a.choice.continuous)
            .field("m_rounded_analytic", a.choice.chosen)
            .field("variance_continuous_analytic", a.variance_continuous);
    }
    // infinite squeezing pushes the continuous optimum to the search ceiling
    if !sq.is_infinite() || variant == Variant::D {
        let cont = optimizer::optimize_m_continuous(variant, b, length, sq)?;
        let cont_d = optimizer::optimize_m_continuous(Variant::D, b, length, Squeezing::NONE)?;
        rec = rec
            .field("m_continuous_numeric", cont.m)
            .field("variance_continuous_numeric", cont.variance)
            .field("ratio_vs_d_continuous", cont.variance / cont_d.variance);
    }
    Ok(rec)
}

/// Sensitivity ratios for the configured squeezing and transmissivity.
pub fn ratio(cfg: &RunConfig) -> Result<Record, CliError> {
    let variant = cfg.variant()?;
    let m = cfg.usize("m")?;
    variant.check_count(m)?;
    let sq = cfg.squeezing_level()?;
    let op = operating_point(cfg, m)?;
    let r = analytic::sensitivity_ratios(sq, op.eta)?;
    let rec = squeezing_fields(Record::new(), sq)
        .field("design", variant.name())
        .field("m", m)
        .field("eta", op.eta)
        .field(
            "ratio_design_fixed_eta",
            analytic::fixed_eta_ratio(variant, m, sq, op.eta),
        )
        .field("ratio_fixed_eta", r.fixed_eta)
        .field("ratio_optimized_length", r.optimized_length)
        .field("ratio_fixed_length", r.fixed_length)
        .field("limit_fixed_eta", r.fixed_eta_limit)
        .field("limit_optimized_length", r.optimized_length_limit)
        .field("limit_fixed_length", r.fixed_length_limit);
    Ok(rec)
}

/// Runs the Gaussian circuit and compares it with the closed forms.
pub fn simulate(cfg: &RunConfig) -> Result<Record, CliError> {
    let variant = cfg.variant()?;
    let m = cfg.usize("m")?;
    let n_v = cfg.positive("n_v")?;
    let sq = cfg.squeezing()?;
    if sq.is_infinite() {
        return Err(CliError::Config(
            "squeeze_db: the circuit simulation needs finite squeezing".into(),
        ));
    }
    let phi = cfg.f64("phi")?;
    let op = operating_point(cfg, m)?;
    let design_cfg = DesignConfig::new(variant, m, n_v, sq.mean_photons())?;
    let design = design_cfg.design();

    let circuit = design.circuit(&design_cfg, phi, op.eta)?;
    let input = design.input_state(&design_cfg)?;
    let output = circuit.run(&input)?;
    let stats = output.homodyne_stats(circuit.readout_mode(), Quadrature::Im)?;
    let closed = design.closed_form_homodyne(&design_cfg, phi, op.eta)?;
    let est = design.estimator_variance_sim(&design_cfg, op.eta, op.t)?;
    let analytic_var = design.analytic_estimator_variance(&design_cfg, op.eta, op.t)?;
    let v_scale = cfg.geometry()?.v_scale();

    let rec = Record::new()
        .field("design", variant.name())
        .field("m", m)
        .field("n_v", n_v);
    let mut rec = squeezing_fields(rec, sq)
        .field("phi", phi)
        .field("eta", op.eta)
        .field("t", op.t)
        .field("homodyne_mean", stats.mean)
        .field("homodyne_variance", stats.variance)
        .field("closed_form_mean", closed.mean)
        .field("closed_form_variance", closed.variance)
        .field("slope", est.slope)
        .field("estimator_variance", est.estimator_variance)
        .field("estimator_variance_normalized", est.normalized(v_scale))
        .field("analytic_variance", analytic_var)
        .field(
            "relative_deviation",
            (est.estimator_variance - analytic_var).abs() / analytic_var,
        );
    let samples = cfg.usize("samples")?;
    if samples > 0 {
        let seed = cfg.u64("seed")?;
        let xs = output.sample_homodyne(circuit.readout_mode(), Quadrature::Im, samples, seed)?;
        let n = samples as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = if samples > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        rec = rec
            .field("samples", samples)
            .field("seed", seed as usize)
            .field("sample_mean", mean)
            .field("sample_variance", var)
            .field("mean_z", (mean - stats.mean) / (stats.variance / n).sqrt());
    }
    Ok(rec)
}
