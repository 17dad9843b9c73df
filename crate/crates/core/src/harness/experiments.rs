use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dilation::{cocycle_residual, m_scaling, mc_expectation, MCEstimate};
use crate::error::{Error, Result};
use crate::forms::{
    covariant_derivative, curvature_two_form, detect_n0, dyadic_envelope, j1_element, junk_ladder,
    junk_probe_with, pi_one, pi_two, ConnectionSpec, UniversalOneForm,
};
use crate::harness::config::ExperimentConfig;
use crate::harness::random::{random_element, random_self_adjoint};
use crate::harness::report::{Check, Headline, RunReport, Series};
use crate::heat::{
    connes_sum, curvature_estimate, curvature_shift, dixmier_heat, equidistribution_check,
    volume_estimate, volume_form, ExtrapolationResult,
};
use crate::moyal::{
    classical_heat_trace, compactness_profile, nc_heat_trace, torus_dixmier, twisted_product,
    unit_bump, weyl_flow_mc, weyl_trace, PhaseFunction,
};
use crate::operators::resolvent_difference_trace_norm;
use crate::torus::{DerivationSpec, TorusElement, C64};

/// Name and committed default config of every experiment.
pub const EXPERIMENTS: &[(&str, &str)] = &[
    ("volume", include_str!("../../configs/volume.conf")),
    (
        "connes-limit",
        include_str!("../../configs/connes-limit.conf"),
    ),
    (
        "equidistribution",
        include_str!("../../configs/equidistribution.conf"),
    ),
    ("curvature", include_str!("../../configs/curvature.conf")),
    (
        "curvature-shift",
        include_str!("../../configs/curvature-shift.conf"),
    ),
    (
        "cancellation",
        include_str!("../../configs/cancellation.conf"),
    ),
    (
        "dixmier-volume-form",
        include_str!("../../configs/dixmier-volume-form.conf"),
    ),
    ("forms-j1", include_str!("../../configs/forms-j1.conf")),
    ("forms-junk", include_str!("../../configs/forms-junk.conf")),
    (
        "curvature-invariance",
        include_str!("../../configs/curvature-invariance.conf"),
    ),
    ("cocycle", include_str!("../../configs/cocycle.conf")),
    ("flow-mc", include_str!("../../configs/flow-mc.conf")),
    (
        "moyal-traces",
        include_str!("../../configs/moyal-traces.conf"),
    ),
    (
        "torus-dixmier",
        include_str!("../../configs/torus-dixmier.conf"),
    ),
    (
        "weyl-flow-mc",
        include_str!("../../configs/weyl-flow-mc.conf"),
    ),
    (
        "resolvent-trend",
        include_str!("../../configs/resolvent-trend.conf"),
    ),
    (
        "compactness",
        include_str!("../../configs/compactness.conf"),
    ),
];

pub fn experiment_names() -> Vec<&'static str> {
    EXPERIMENTS.iter().map(|e| e.0).collect()
}

/// Default config of `name` overlaid with `overrides`.
pub fn default_config(name: &str, overrides: &[String]) -> Result<ExperimentConfig> {
    let (_, base) = EXPERIMENTS.iter().find(|e| e.0 == name).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "unknown experiment `{name}`; known: {}",
            experiment_names().join(", ")
        ))
    })?;
    ExperimentConfig::from_layers(name, base, overrides)
}

#[derive(Default)]
struct Outcome {
    headline: Vec<Headline>,
    checks: Vec<Check>,
    series: Vec<Series>,
    records: serde_json::Map<String, serde_json::Value>,
}

impl Outcome {
    fn headline(&mut self, name: &str, value: f64, error: f64) {
        self.headline.push(Headline {
            name: name.into(),
            value,
            error,
        });
    }

    fn check(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail,
        });
    }

    fn series(&mut self, name: &str, points: Vec<[f64; 3]>) {
        self.series.push(Series {
            name: name.into(),
            points,
        });
    }

    fn record(&mut self, name: &str, value: impl Serialize) {
        self.records.insert(
            name.into(),
            serde_json::to_value(value).expect("plain data"),
        );
    }

    fn extrapolation(&mut self, name: &str, e: &ExtrapolationResult) {
        self.headline(name, e.value, e.error_estimate);
        self.series(name, e.samples.iter().map(|s| [s.0, s.1, 0.0]).collect());
    }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<RunReport> {
    let start = Instant::now();
    let c = config;
    let out = match c.experiment.as_str() {
        "volume" => volume(c),
        "connes-limit" => connes_limit(c),
        "equidistribution" => equidistribution(c),
        "curvature" => curvature(c),
        "curvature-shift" => shift(c, false),
        "cancellation" => shift(c, true),
        "dixmier-volume-form" => dixmier_volume_form(c),
        "forms-j1" => forms_j1(c),
        "forms-junk" => forms_junk(c),
        "curvature-invariance" => curvature_invariance(c),
        "cocycle" => cocycle(c),
        "flow-mc" => flow_mc(c),
        "moyal-traces" => moyal_traces(c),
        "torus-dixmier" => torus_dixmier_run(c),
        "weyl-flow-mc" => weyl_flow(c),
        "resolvent-trend" => resolvent_trend(c),
        "compactness" => compactness(c),
        other => Err(Error::InvalidParameter(format!(
            "unknown experiment `{other}`; known: {}",
            experiment_names().join(", ")
        ))),
    }?;
    let passed = out.checks.iter().all(|k| k.passed);
    Ok(RunReport {
        experiment: c.experiment.clone(),
        config: c.clone(),
        config_hash: c.hash(),
        headline: out.headline,
        checks: out.checks,
        series: out.series,
        records: out.records,
        passed,
        wall_clock_s: start.elapsed().as_secs_f64(),
    })
}

fn rng(c: &ExperimentConfig) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(c.seed.unwrap_or(0))
}

fn within(value: f64, target: f64, tol: f64) -> (bool, String) {
    let dev = (value - target).abs();
    (
        dev <= tol,
        format!("|{value:.10} − {target:.10}| = {dev:.3e} (tolerance {tol:.3e})"),
    )
}

fn volume(c: &ExperimentConfig) -> Result<Outcome> {
    let mut o = Outcome::default();
    let (grid, win) = (c.grid()?, c.window());
    let zero = TorusElement::zero(c.theta())?;
    let flat = volume_estimate(&zero, &zero, &grid, win)?;
    let pert = volume_estimate(
        &c.element(&c.r1, "r1")?,
        &c.element_or_zero(&c.r2, "r2")?,
        &grid,
        win,
    )?;
    o.extrapolation("volume_flat", &flat);
    o.extrapolation("volume_perturbed", &pert);
    let (ok, d) = within(flat.value, 2.0 * PI, 0.005 * 2.0 * PI);
    o.check("flat volume within 0.5% of 2π", ok, d);
    let (ok, d) = within(
        pert.value,
        flat.value,
        flat.error_estimate + pert.error_estimate,
    );
    o.check("perturbed volume equals flat within combined error", ok, d);
    Ok(o)
}

fn connes_limit(c: &ExperimentConfig) -> Result<Outcome> {
    let mut o = Outcome::default();
    let t = ExperimentConfig::require(c.t, "t")?;
    let v = connes_sum(t)?;
    o.headline("connes_sum", v, 0.0);
    let target = (PI / 2.0).sqrt();
    o.series(
        "connes_sum",
        (2..=8)
            .map(|k| {
                let s = 10f64.powi(-k);
                [s, connes_sum(s).unwrap_or(f64::NAN), 0.0]
            })
            .collect(),
    );
    let (ok, d) = within(v, target, 1e-4);
    o.check("√t Σ e^{-m²t/2} → √(π/2) within 1e-4", ok, d);
    Ok(o)
}

fn equidistribution(c: &ExperimentConfig) -> Result<Outcome> {
    let mut o = Outcome::default();
    let t = ExperimentConfig::require(c.t, "t")?;
    let v = equidistribution_check(c.theta(), t)?;
    o.headline("mean_sin_sq", v, 0.0);
    o.series(
        "mean_sin_sq",
        (2..=8)
            .map(|k| {
                let s = 10f64.powi(-k);
                [
                    s,
                    equidistribution_check(c.theta(), s).unwrap_or(f64::NAN),
                    0.0,
                ]
            })
            .collect(),
    );
    let (ok, d) = within(v, 0.5, 1e-3);
    o.check("E sin²(πX_t) → 1/2 within 1e-3", ok, d);
    Ok(o)
}

fn curvature(c: &ExperimentConfig) -> Result<Outcome> {
    let mut o = Outcome::default();
    let (grid, win) = (c.grid()?, c.window());
    let zero = TorusElement::zero(c.theta())?;
    let s = curvature_estimate(&zero, &zero, 2.0 * PI, &grid, win)?;
    o.extrapolation("curvature_flat", &s);
    let (ok, d) = within(s.value, 0.0, 1e-2);
    o.check("s(L₀) = 0 within 1e-2", ok, d);
    if c.r1.is_some() {
        let p = curvature_estimate(
            &c.element(&c.r1, "r1")?,
            &c.element_or_zero(&c.r2, "r2")?,
            2.0 * PI,
            &grid,
            win,
        )?;
        o.extrapolation("curvature_perturbed", &p);
    }
    Ok(o)
}

fn shift(c: &ExperimentConfig, cancellation: bool) -> Result<Outcome> {
    let mut o = Outcome::default();
    let r1 = c.element(&c.r1, "r1")?;
    let r2 = c.element_or_zero(&c.r2, "r2")?;
    let s = curvature_shift(&r1, &r2, &c.grid()?, c.window())?;
    o.series(
        "cancellation",
        s.cancellation.iter().map(|p| [p.0, p.1, 0.0]).collect(),
    );
    if cancellation {
        let worst = s.cancellation.iter().map(|p| p.1).fold(0.0, f64::max);
        o.headline("max_first_order_trace", worst, 0.0);
        o.check(
            "Tr(A e^{tL₀}) = 0 to 1e-12 at every grid point",
            worst <= 1e-12,
            format!("max |Tr(A e^{{tL₀}})| = {worst:.3e}"),
        );
    } else {
        o.extrapolation("curvature_shift", &s.estimate);
        let bound = 2.0 * PI.sqrt() / (3.0 * std::f64::consts::E);
        o.record("lower_bound", bound);
        let (ok, d) = within(s.estimate.value, PI / 3.0, 0.02 * PI / 3.0);
        o.check("estimate within 2% of π/3", ok, d);
        o.check(
            "estimate ≥ 2√π/(3e)",
            s.estimate.value >= bound,
            format!("{:.10} vs bound {bound:.10}", s.estimate.value),
        );
    }
    Ok(o)
}

fn dixmier_volume_form(c: &ExperimentConfig) -> Result<Outcome> {
    let mut o = Outcome::default();
    let (grid, win) = (c.grid()?, c.window());
    let a = c.element(&c.a, "a")?;
    let zero = TorusElement::zero(c.theta())?;
    let flat = dixmier_heat(&a, &zero, &zero, &grid, win)?;
    let vf = volume_form(&a, &c.element(&c.r, "r")?, &grid, win)?;
    o.headline("v0_heat", flat.heat.re, flat.heat_error);
    o.headline("v0_log_average", flat.log_average.re, flat.log_error);
    o.headline("v_perturbed", vf.value.re, vf.error);
    for r in &flat.resolvent {
        o.headline(&format!("v0_resolvent_z{}", r.z), r.value.re, r.error);
    }
    o.record("flat", &flat);
    o.record("perturbed", &vf);
    let (ok, d) = within(flat.heat.re, PI, 0.01 * PI);
    o.check("v₀(a) = π within 1%", ok, d);
    let (ok, d) = within(vf.value.re, flat.heat.re, vf.error + flat.heat_error);
    o.check("v(a) = v₀(a) within combined error", ok, d);
    let mut ok_all = true;
    let mut detail = String::new();
    for (i, p) in flat.resolvent.iter().enumerate() {
        for q in &flat.resolvent[i + 1..] {
            let (ok, d) = within(p.value.re, q.value.re, p.error + q.error);
            ok_all &= ok;
            detail += &format!("z = {} vs {}: {d}; ", p.z, q.z);
        }
    }
    o.check(
        "resolvent estimates independent of the shift",
        ok_all,
        detail,
    );
    Ok(o)
}

fn x_form(theta: f64) -> Result<UniversalOneForm> {
    let one = C64::new(1.0, 0.0);
    Ok(UniversalOneForm {
        terms: vec![
            (
                TorusElement::monomial(theta, -1, 0, one)?,
                TorusElement::monomial(theta, 1, 0, one)?,
            ),
            (
                TorusElement::monomial(theta, 1, 0, one)?,
                TorusElement::monomial(theta, -1, 0, one)?,
            ),
        ],
    })
}

fn forms_j1(c: &ExperimentConfig) -> Result<Outcome> {
    let mut o = Outcome::default();
    let x = x_form(c.theta())?;
    for m in c.i64_list(&c.m, "m")? {
        let r = TorusElement::monomial(c.theta(), m, 0, C64::new(1.0, 0.0))?;
        let img = pi_one(&x, &r)?;
        let pi_norm = img.omega1.norm() + img.omega2.norm();
        let two = pi_two(&x.delta_lift(), &r)?;
        let scalar = two.scalar.get(0, 0);
        let off = two.scalar.without_constant().norm() + two.gamma12.norm();
        o.headline(&format!("scalar_m{m}"), scalar.re, off);
        o.check(
            &format!("m = {m}: π(x) = 0"),
            pi_norm <= 1e-12,
            format!("‖π(x)‖ = {pi_norm:.3e}"),
        );
        let dev = (scalar.norm() - 2.0).abs() + off;
        o.check(
            &format!("m = {m}: |π(δx)| = 2"),
            dev <= 1e-12,
            format!("scalar {scalar}, deviation {dev:.3e}"),
        );
    }
    Ok(o)
}

fn forms_junk(c: &ExperimentConfig) -> Result<Outcome> {
    let mut o = Outcome::default();
    let theta = c.theta();
    let samples = ExperimentConfig::require(c.samples, "samples")?;
    let mut g = rng(c);
    let zero = TorusElement::zero(theta)?;
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let a1 = random_element(&mut g, theta, 2, 3);
        let b1 = random_element(&mut g, theta, 2, 3);
        let l = g.random_range(1..=4);
        let (w, _) = j1_element(&a1, &b1, l, &zero)?;
        let w = w.left_mul(&random_element(&mut g, theta, 1, 2));
        worst = worst.max(pi_two(&w.delta_lift(), &zero)?.gamma12.norm());
    }
    o.headline("flat_max_gamma12", worst, 0.0);
    o.check(
        &format!("r = 0: γ₁₂ part vanishes on {samples} J₁ elements"),
        worst <= 1e-12,
        format!("max ‖γ₁₂‖ = {worst:.3e}"),
    );
    let r = c.element(&c.r, "r")?;
    let l_max = ExperimentConfig::require(c.l_max, "l_max")?;
    let n0 = detect_n0(&r, l_max)?;
    let probe = junk_probe_with(&r, n0, n0 + 2)?;
    o.headline("n0", n0 as f64, 0.0);
    o.headline("probe_gamma12", probe.gamma12.norm(), 0.0);
    o.headline("probe_first", probe.first.norm(), 0.0);
    o.check(
        "r = U: probe δ-lift has γ₁₂ norm > 0.1",
        probe.gamma12.norm() > 0.1,
        format!("l = {}: ‖γ₁₂‖ = {:.6}", n0 + 2, probe.gamma12.norm()),
    );
    let ls: Vec<i64> = (n0..l_max).collect();
    let ladder = junk_ladder(&r, &ls)?;
    o.series(
        "second",
        ladder
            .iter()
            .map(|p| [p.l as f64, p.second.norm(), 0.0])
            .collect(),
    );
    let env = dyadic_envelope(&ladder);
    o.series(
        "second_dyadic_max",
        env.iter().map(|e| [e.0 as f64, e.1, 0.0]).collect(),
    );
    let monotone = env.len() >= 2 && env.windows(2).all(|w| w[1].1 < w[0].1);
    o.check(
        "second component decays over dyadic blocks of l",
        monotone,
        env.iter()
            .map(|e| format!("2^{}: {:.4}", e.0, e.1))
            .collect::<Vec<_>>()
            .join(", "),
    );
    Ok(o)
}

fn curvature_invariance(c: &ExperimentConfig) -> Result<Outcome> {
    let mut o = Outcome::default();
    let theta = c.theta();
    let samples = ExperimentConfig::require(c.samples, "samples")?;
    let mut g = rng(c);
    let d1 = DerivationSpec::canonical(theta, 1)?;
    let d2 = DerivationSpec::canonical(theta, 2)?;
    let mut worst: f64 = 0.0;
    let mut leibniz: f64 = 0.0;
    for _ in 0..samples {
        let conn = ConnectionSpec::new(
            random_element(&mut g, theta, 2, 4),
            random_element(&mut g, theta, 2, 4),
        )?;
        let xi = random_element(&mut g, theta, 2, 4);
        let r1 = random_self_adjoint(&mut g, theta, 2, 3);
        let r2 = random_self_adjoint(&mut g, theta, 2, 3);
        let base = curvature_two_form(&conn, &d1, &d2, &xi)?;
        let pert = curvature_two_form(
            &conn,
            &DerivationSpec::perturbed(1, r1.clone()),
            &DerivationSpec::perturbed(2, r2),
            &xi,
        )?;
        worst = worst.max(base.distance(&pert));
        let a = random_element(&mut g, theta, 2, 3);
        let dir = DerivationSpec::perturbed(1, r1);
        let lhs = covariant_derivative(&conn, &(&xi * &a), &dir)?;
        let rhs = &(&covariant_derivative(&conn, &xi, &dir)? * &a) + &(&xi * &dir.apply(&a)?);
        leibniz = leibniz.max(lhs.distance(&rhs));
    }
    o.headline("max_difference", worst, 0.0);
    o.headline("max_leibniz_residual", leibniz, 0.0);
    o.check(
        &format!("R(d₁,d₂)ξ = R(d₁+d_{{r₁}}, d₂+d_{{r₂}})ξ on {samples} samples"),
        worst <= 1e-12,
        format!("max norm {worst:.3e}"),
    );
    Ok(o)
}

fn cocycle(c: &ExperimentConfig) -> Result<Outcome> {
    let mut o = Outcome::default();
    let theta = c.theta();
    let samples = ExperimentConfig::require(c.samples, "samples")?;
    let settings = [
        (TorusElement::zero(theta)?, TorusElement::zero(theta)?),
        (c.element(&c.r1, "r1")?, c.element(&c.r2, "r2")?),
    ];
    for (k, (r1, r2)) in settings.iter().enumerate() {
        let mut g = rng(c);
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let x = random_element(&mut g, theta, 3, 5);
            let y = random_element(&mut g, theta, 3, 5);
            worst = worst.max(cocycle_residual(r1, r2, &x, &y)?.norm());
        }
        let label = if k == 0 { "flat" } else { "perturbed" };
        o.headline(&format!("max_residual_{label}"), worst, 0.0);
        o.check(
            &format!("{label}: cocycle residual ≤ 1e-12 on {samples} pairs"),
            worst <= 1e-12,
            format!("max norm {worst:.3e}"),
        );
    }
    Ok(o)
}

fn mc_series(est: &MCEstimate) -> Vec<[f64; 3]> {
    est.entries
        .iter()
        .enumerate()
        .map(|(i, e)| [i as f64, e.mean.re, e.stderr[0]])
        .collect()
}

fn flow_mc(c: &ExperimentConfig) -> Result<Outcome> {
    let mut o = Outcome::default();
    let a = c.element(&c.a, "a")?;
    let t = ExperimentConfig::require(c.t, "t")?;
    let m = ExperimentConfig::require(c.paths, "M")?;
    let seed = c.seed.unwrap_or(0);
    let est = mc_expectation(&a, t, m, seed)?;
    for e in &est.entries {
        o.headline(
            &format!("mean_re[{},{}]", e.mode[0], e.mode[1]),
            e.mean.re,
            e.stderr[0],
        );
    }
    o.series("modes", mc_series(&est));
    o.check(
        "|mean − e^{tL₀}a| ≤ 4·stderr for every mode",
        est.max_z() <= 4.0,
        format!("max z = {:.3}", est.max_z()),
    );
    o.record("estimate", &est);
    let counts = c.usize_list(&c.counts, "counts")?;
    let reps = ExperimentConfig::require(c.replicates, "replicates")?;
    let sc = m_scaling(&a, t, &counts, reps, seed)?;
    o.headline("scaling_exponent", sc.exponent, sc.exponent_stderr);
    o.series(
        "rms_error",
        sc.points.iter().map(|p| [p.0 as f64, p.1, 0.0]).collect(),
    );
    o.check(
        "error exponent in [0.4, 0.6]",
        (0.4..=0.6).contains(&sc.exponent),
        format!("exponent {:.4} ± {:.4}", sc.exponent, sc.exponent_stderr),
    );
    Ok(o)
}

fn phase_gaussian(c: &ExperimentConfig) -> Result<PhaseFunction> {
    let d = c.d.unwrap_or(1);
    let f = PhaseFunction::gaussian(
        d,
        ExperimentConfig::require(c.half_width, "L")?,
        ExperimentConfig::require(c.grid_points, "n")?,
        &vec![0.0; 2 * d],
        ExperimentConfig::require(c.sigma, "sigma")?,
        C64::new(1.0, 0.0),
    )?;
    f.check_support()?;
    Ok(f)
}

fn moyal_traces(c: &ExperimentConfig) -> Result<Outcome> {
    let mut o = Outcome::default();
    let f = phase_gaussian(c)?;
    let sigma = ExperimentConfig::require(c.sigma, "sigma")?;
    let exact = (2.0 * PI * sigma * sigma).powi(f.d() as i32);
    o.headline("integral", f.integral().re, 0.0);
    o.headline("weyl_trace", weyl_trace(&f).re, 0.0);
    let mut pts = Vec::new();
    for t in c.f64_list(&c.times, "times")? {
        let cl = classical_heat_trace(&f, t)?;
        let nc = nc_heat_trace(&f, t)?;
        pts.push([t, nc.scaled(), nc.error * t.powi(f.d() as i32)]);
        let (ok, d) = within(nc.scaled() / exact, 1.0, 1e-6);
        o.check(
            &format!("t = {t}: t^d·nc trace = ∫f (relative 1e-6)"),
            ok,
            d,
        );
        let (ok, d) = within(cl.value / nc.value, 1.0, 1e-6);
        o.check(&format!("t = {t}: classical = nc (relative 1e-6)"), ok, d);
    }
    o.series("scaled_nc_trace", pts);
    if f.d() == 1 {
        let g = PhaseFunction::gaussian(
            1,
            f.half_width(),
            f.points(),
            &[0.5, -0.3],
            0.8,
            C64::new(1.0, 0.5),
        )?;
        let fg = weyl_trace(&twisted_product(&f, &g)?);
        let gf = weyl_trace(&twisted_product(&g, &f)?);
        let pos = weyl_trace(&twisted_product(&g, &g.involution())?);
        o.record("trace_commutator", (fg - gf).norm());
        o.record("positivity", pos.re / g.l2_norm().powi(2));
    }
    Ok(o)
}

fn torus_dixmier_run(c: &ExperimentConfig) -> Result<Outcome> {
    let mut o = Outcome::default();
    let bump = unit_bump(ExperimentConfig::require(c.radius, "radius")?);
    let side = ExperimentConfig::require(c.side, "side")?;
    let cutoff = ExperimentConfig::require(c.cutoff, "cutoff")?;
    let runs = c
        .f64_list(&c.eps, "eps")?
        .into_iter()
        .map(|e| torus_dixmier(&bump, side, e, cutoff))
        .collect::<Result<Vec<_>>>()?;
    for r in &runs {
        o.headline(&format!("dixmier_eps{}", r.eps), r.value, r.error);
        let target = PI * r.integral;
        let (ok, d) = within(r.value, target, 0.1 * target);
        o.check(&format!("ε = {}: π∫f within 10%", r.eps), ok, d);
        o.check(
            &format!("ε = {}: at least 1e5 eigenvalues", r.eps),
            r.sufficient,
            format!("{} eigenvalues", r.eigenvalue_count),
        );
    }
    o.series(
        "dixmier",
        runs.iter().map(|r| [r.eps, r.value, r.error]).collect(),
    );
    let mut ok_all = true;
    let mut detail = String::new();
    for (i, p) in runs.iter().enumerate() {
        for q in &runs[i + 1..] {
            let (ok, d) = within(p.value, q.value, p.error + q.error);
            ok_all &= ok;
            detail += &format!("ε = {} vs {}: {d}; ", p.eps, q.eps);
        }
    }
    o.check("ε-independence within estimator error", ok_all, detail);
    Ok(o)
}

fn weyl_flow(c: &ExperimentConfig) -> Result<Outcome> {
    let mut o = Outcome::default();
    let f = phase_gaussian(c)?;
    let est = weyl_flow_mc(
        &f,
        ExperimentConfig::require(c.t, "t")?,
        ExperimentConfig::require(c.paths, "M")?,
        c.seed.unwrap_or(0),
    )?;
    o.headline("modes", est.entries.len() as f64, 0.0);
    o.headline("max_z", est.max_z(), 0.0);
    o.series(
        "z",
        est.entries
            .iter()
            .enumerate()
            .map(|(i, e)| [i as f64, e.z, 0.0])
            .collect(),
    );
    o.check(
        "every Fourier mode within 4·stderr of the heat multiplier",
        est.max_z() <= 4.0,
        format!("{} modes, max z = {:.3}", est.entries.len(), est.max_z()),
    );
    Ok(o)
}

fn resolvent_trend(c: &ExperimentConfig) -> Result<Outcome> {
    let mut o = Outcome::default();
    let windows = c.usize_list(&c.windows, "windows")?;
    let z = ExperimentConfig::require(c.z, "z")?;
    let v = resolvent_difference_trace_norm(
        &c.element(&c.r1, "r1")?,
        &c.element_or_zero(&c.r2, "r2")?,
        C64::new(z, 0.0),
        &windows,
    )?;
    o.series(
        "trace_norm",
        windows
            .iter()
            .zip(&v)
            .map(|(w, x)| [*w as f64, *x, 0.0])
            .collect(),
    );
    for (w, x) in windows.iter().zip(&v) {
        o.headline(&format!("trace_norm_N{w}"), *x, 0.0);
    }
    let steps: Vec<f64> = v.windows(2).map(|p| (p[1] - p[0]).abs()).collect();
    let ok = !steps.is_empty() && steps.windows(2).all(|s| s[1] < s[0]);
    o.check(
        "successive differences shrink",
        ok && steps.len() >= 2,
        format!("steps {steps:?}"),
    );
    Ok(o)
}

fn compactness(c: &ExperimentConfig) -> Result<Outcome> {
    let mut o = Outcome::default();
    let sigma = ExperimentConfig::require(c.sigma, "sigma")?;
    let p = compactness_profile(
        c.d.unwrap_or(2),
        ExperimentConfig::require(c.half_width, "L")?,
        ExperimentConfig::require(c.grid_points, "n")?,
        ExperimentConfig::require(c.t, "t")?,
        1e-6,
        |x| (-0.5 * x.iter().map(|v| v * v).sum::<f64>() / (sigma * sigma)).exp(),
    )?;
    o.series(
        "singular_values",
        p.singular_values
            .iter()
            .enumerate()
            .map(|(i, s)| [i as f64, *s, 0.0])
            .collect(),
    );
    let idx = p.decay_index.unwrap_or(p.dim);
    o.headline("decay_index", idx as f64, 0.0);
    o.check(
        "σ below 1e-6·σ₀ by index dim/4",
        idx <= p.dim / 4,
        format!("index {idx} of {}", p.dim),
    );
    Ok(o)
}
