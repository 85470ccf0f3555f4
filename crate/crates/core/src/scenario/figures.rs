// SPDX-License-Identifier: Apache-2.0

use nalgebra::Complex;
use rayon::prelude::*;

use super::config::{apply_parameter, ModeInit, Observable, ScenarioConfig};
use super::optimize::{optimize_detuning, optimize_detuning_by, Objective};
use super::output::{Cell, Evaluated, Table};
use super::{ScenarioError, ScenarioKind};
use crate::analysis::{
    double_swap_fidelity, log_negativity_series, logarithmic_negativity, phase_matched_target,
    simulate_transfer, stability, stability_of, transfer_fidelity_closed_form,
    transfer_fidelity_exact, FidelityBreakdown,
};
use crate::dynamics::{sample_trajectory, steady_state};
use crate::gaussian::GaussianState;
use crate::model::{
    build_quadrature_dynamics, transfer_time, DriveCase, SystemSpec, CAVITY_1, CAVITY_2, MECHANICS,
};

type Out<T> = Result<T, ScenarioError>;

#[derive(Default)]
struct Log {
    notes: Vec<String>,
    warnings: Vec<String>,
}

pub(crate) fn evaluate(cfg: &ScenarioConfig) -> Out<Evaluated> {
    let mut log = Log::default();
    log.notes.push(format!(
        "{} dynamics",
        if cfg.options.rwa {
            "rotating-wave"
        } else {
            "full (counter-rotating terms kept)"
        }
    ));
    let tables = match cfg.scenario {
        ScenarioKind::Fig2 => fig2(cfg, &mut log)?,
        ScenarioKind::Fig3a => fig3a(cfg, &mut log)?,
        ScenarioKind::Fig3b => fig3b(cfg, &mut log)?,
        ScenarioKind::Fig3cLd => fig3c_ld(cfg, &mut log)?,
        ScenarioKind::Fig3cDs => fig3c_ds(cfg, &mut log)?,
        ScenarioKind::Fig4a => fig4a(cfg, &mut log)?,
        ScenarioKind::Fig4b => fig4b(cfg, &mut log)?,
        ScenarioKind::Fig4c => fig4c(cfg, &mut log)?,
        ScenarioKind::CustomSweep => custom(cfg, &mut log)?,
    };
    for t in &tables {
        debug_assert!(t
            .rows
            .iter()
            .flatten()
            .all(|c| c.as_f64().is_none_or(f64::is_finite)));
    }
    Ok(Evaluated {
        tables,
        notes: log.notes,
        warnings: log.warnings,
    })
}

fn alpha(cfg: &ScenarioConfig) -> Complex<f64> {
    Complex::new(cfg.options.alpha_re, cfg.options.alpha_im)
}

fn initial_state(modes: &[ModeInit; 3]) -> Out<GaussianState> {
    let one =
        |m: &ModeInit| GaussianState::displaced_thermal(m.n, Complex::new(m.alpha_re, m.alpha_im));
    Ok(GaussianState::interface(
        one(&modes[0])?,
        one(&modes[1])?,
        one(&modes[2])?,
    )?)
}

fn mechanics_only(n_m: f64) -> [ModeInit; 3] {
    [ModeInit::VACUUM, ModeInit::thermal(n_m), ModeInit::VACUUM]
}

/// Number label for column names: `20`, `0.5`.
fn label(v: f64) -> String {
    format!("{v}")
}

fn sweep_values(cfg: &ScenarioConfig) -> Vec<f64> {
    cfg.sweep.as_ref().map(|s| s.values()).unwrap_or_default()
}

fn truncation_warning(log: &mut Log, what: &str, got: usize, want: usize, dt: f64) {
    if got < want {
        log.warnings.push(format!(
            "UnstableRegime: {what} diverges; series truncated at t = {} ({got} of {want} points)",
            (got.saturating_sub(1)) as f64 * dt
        ));
    }
}

fn fig2(cfg: &ScenarioConfig, log: &mut Log) -> Out<Vec<Table>> {
    let (dt, n) = (cfg.time.dt(), cfg.time.n_points);
    let main = build_quadrature_dynamics(&cfg.spec, cfg.options.rwa);
    let reference = build_quadrature_dynamics(&cfg.spec.with_n_th(0.0), cfg.options.rwa);
    let mut ref_init = cfg.initial;
    ref_init[MECHANICS] = ModeInit::VACUUM;
    let (init, ref_init) = (initial_state(&cfg.initial)?, initial_state(&ref_init)?);
    let (a, b) = rayon::join(
        || sample_trajectory(&main, &init, dt, n),
        || sample_trajectory(&reference, &ref_init, dt, n),
    );
    let (a, b) = (a?, b?);
    let rows = a.len().min(b.len());
    truncation_warning(log, "occupation dynamics", rows, n, dt);
    log.notes.push(
        "N1_ref: cavity 1 occupation with the mechanics initially in vacuum and n_th = 0".into(),
    );

    let mut t = Table::new(
        "fig2",
        &["t", "N1", "N2", "Nb", "N1_ref"],
        "t [1/G]",
        "occupation",
    );
    for k in 0..rows {
        t.rows.push(vec![
            (k as f64 * dt).into(),
            a[k].occupation(CAVITY_1)?.into(),
            a[k].occupation(CAVITY_2)?.into(),
            a[k].occupation(MECHANICS)?.into(),
            b[k].occupation(CAVITY_1)?.into(),
        ]);
    }
    Ok(vec![t])
}

fn fig3a(cfg: &ScenarioConfig, log: &mut Log) -> Out<Vec<Table>> {
    let n_ms = &cfg.options.n_m_values;
    let mut header = vec!["delta".to_string()];
    header.extend(n_ms.iter().map(|n| format!("F1_nm{}", label(*n))));
    let rows: Vec<Vec<Cell>> = sweep_values(cfg)
        .into_par_iter()
        .map(|delta| {
            let spec = cfg.spec.with_detuning(delta);
            let t0 = transfer_time(&spec)?;
            let mut row = vec![Cell::Real(delta)];
            for &n_m in n_ms {
                row.push(
                    transfer_fidelity_closed_form(&spec, alpha(cfg), n_m, t0)?
                        .f1
                        .into(),
                );
            }
            Ok(row)
        })
        .collect::<Out<_>>()?;
    log.notes.push(
        "F1 at t0 = pi/(2 lambda); on the grid delta^2/4G^2 = q the interference-reduced form applies, \
         elsewhere the eigenphase form n_m |exp(-i t0 l2) - exp(-i t0 l3)|^2"
            .into(),
    );
    let mut t = Table::new("fig3a", &[], "delta [G]", "F1");
    t.header = header;
    t.plot_columns = (1..t.header.len()).collect();
    t.rows = rows;
    Ok(vec![t])
}

fn exact_fidelity(spec: &SystemSpec, cfg: &ScenarioConfig, n_m: f64, t0: f64) -> Out<f64> {
    let final_state = simulate_transfer(spec, alpha(cfg), n_m, t0, cfg.options.rwa)?;
    let target = phase_matched_target(&final_state, alpha(cfg), CAVITY_2)?;
    Ok(transfer_fidelity_exact(&final_state, target, CAVITY_2)?)
}

fn fig3b(cfg: &ScenarioConfig, log: &mut Log) -> Out<Vec<Table>> {
    let n_ths = &cfg.options.n_th_values;
    let n_m = cfg.options.n_m;
    let mut header = vec!["delta".to_string(), "q".into()];
    header.extend(n_ths.iter().map(|n| format!("F_nth{}", label(*n))));
    header.extend(n_ths.iter().map(|n| format!("F_exact_nth{}", label(*n))));
    let rows: Vec<Vec<Cell>> = super::admissible_detunings(cfg.spec.g1, cfg.options.q_max)
        .into_par_iter()
        .map(|(q, delta)| {
            let mut closed = Vec::new();
            let mut exact = Vec::new();
            for &n_th in n_ths {
                let spec = cfg.spec.with_detuning(delta).with_n_th(n_th);
                let t0 = transfer_time(&spec)?;
                closed.push(Cell::Real(
                    transfer_fidelity_closed_form(&spec, alpha(cfg), n_m, t0)?.f,
                ));
                exact.push(Cell::Real(exact_fidelity(&spec, cfg, n_m, t0)?));
            }
            let mut row = vec![Cell::Real(delta), Cell::Int(q)];
            row.extend(closed);
            row.extend(exact);
            Ok(row)
        })
        .collect::<Out<_>>()?;
    log.notes.push(format!(
        "delta = 2G sqrt(q), t0 = pi/(2 lambda), n_m = {n_m}; F is the closed form F1 F2, \
         F_exact the propagated overlap with the phase-matched coherent target"
    ));
    let mut t = Table::new("fig3b", &[], "delta [G]", "F");
    t.plot_columns = (2..header.len()).collect();
    t.header = header;
    t.rows = rows;
    Ok(vec![t])
}

fn fig3c_note(log: &mut Log) {
    log.notes.push(
        "the adiabatic dark-state transfer (AT) curve is not generated; only the LD and DS curves are".into(),
    );
    log.notes.push(
        "interpretation: the horizontal axis is the bath occupation n_th at fixed initial phonon number n_m; \
         LD is the closed-form fidelity maximized over delta = 2G sqrt(q), DS the propagated double-swap fidelity"
            .into(),
    );
}

fn fig3c_ld(cfg: &ScenarioConfig, log: &mut Log) -> Out<Vec<Table>> {
    fig3c_note(log);
    let rows: Vec<Vec<Cell>> = sweep_values(cfg)
        .into_par_iter()
        .map(|n_th| {
            let (n_m, q_max) = (cfg.options.n_m, cfg.options.q_max);
            let closed = optimize_detuning(&cfg.spec, n_th, alpha(cfg), n_m, q_max)?;
            let exact =
                optimize_detuning_by(&cfg.spec, n_th, alpha(cfg), n_m, q_max, Objective::Exact)?;
            Ok(vec![
                Cell::Real(n_th),
                Cell::Real(closed.delta),
                Cell::Int(closed.q),
                Cell::Real(closed.fidelity.f),
                Cell::Real(closed.fidelity.f_exact.unwrap_or(f64::NAN)),
                Cell::Real(exact.delta),
                Cell::Int(exact.q),
                Cell::Real(exact.fidelity.f_exact.unwrap_or(f64::NAN)),
            ])
        })
        .collect::<Out<_>>()?;
    log.notes.push(
        "columns 1-4: optimum of the closed form and the propagated fidelity there; \
         columns 5-7: optimum of the propagated fidelity itself"
            .into(),
    );
    let header = [
        "n_th",
        "delta_opt",
        "q_opt",
        "F_opt",
        "F_exact_at_opt",
        "delta_opt_exact",
        "q_opt_exact",
        "F_exact_opt",
    ];
    let mut t = Table::new("fig3c_ld", &header, "n_th", "F");
    t.plot_columns = vec![3, 7];
    t.rows = rows;
    Ok(vec![t])
}

fn fig3c_ds(cfg: &ScenarioConfig, log: &mut Log) -> Out<Vec<Table>> {
    fig3c_note(log);
    log.notes.push(
        "double swap: two resonant pi/2 legs of length pi/(2 G_i), one coupling on at a time"
            .into(),
    );
    let rows: Vec<Vec<Cell>> = sweep_values(cfg)
        .into_par_iter()
        .map(|n_th| {
            let f = double_swap_fidelity(
                &cfg.spec.with_n_th(n_th),
                alpha(cfg),
                cfg.options.n_m,
                cfg.options.rwa,
            )?;
            Ok(vec![Cell::Real(n_th), Cell::Real(f)])
        })
        .collect::<Out<_>>()?;
    let mut t = Table::new("fig3c_ds", &["n_th", "F_ds"], "n_th", "F");
    t.rows = rows;
    Ok(vec![t])
}

/// Named red-blue coupling configurations of the entanglement study.
fn entangling_configs(with_zero_detuning: bool, delta: f64) -> Vec<(&'static str, f64, f64, f64)> {
    let (c, s) = (1f64.cosh(), 1f64.sinh());
    let g = (c * s).sqrt();
    if with_zero_detuning {
        vec![
            ("dl0_d15", g, g, 15.0),
            ("dl02_d15", c, s, 15.0),
            ("dl02_d0", c, s, 0.0),
        ]
    } else {
        vec![("dl0", g, g, delta), ("dl02", c, s, delta)]
    }
}

fn config_spec(base: &SystemSpec, g1: f64, g2: f64, delta: f64) -> SystemSpec {
    let mut spec = base.with_couplings(g1, g2).with_detuning(delta);
    spec.drive_case = DriveCase::RedBlue;
    spec
}

fn en_series(spec: &SystemSpec, cfg: &ScenarioConfig, init: &[ModeInit; 3]) -> Out<Vec<f64>> {
    let dynamics = build_quadrature_dynamics(spec, cfg.options.rwa);
    let series = log_negativity_series(
        &dynamics,
        &initial_state(init)?,
        cfg.time.dt(),
        cfg.time.n_points,
        CAVITY_1,
        CAVITY_2,
    )?;
    Ok(series.into_iter().map(|s| s.log_negativity).collect())
}

fn max_of(v: &[f64]) -> (f64, usize) {
    v.iter().enumerate().fold(
        (f64::NEG_INFINITY, 0),
        |(m, i), (k, &x)| if x > m { (x, k) } else { (m, i) },
    )
}

fn fig4a(cfg: &ScenarioConfig, log: &mut Log) -> Out<Vec<Table>> {
    let configs = entangling_configs(false, cfg.spec.delta1);
    let n_m = cfg.options.n_m;
    let jobs: Vec<(usize, f64)> = (0..configs.len())
        .flat_map(|c| [(c, n_m), (c, 0.0)])
        .collect();
    let series: Vec<Vec<f64>> = jobs
        .par_iter()
        .map(|&(c, n)| {
            let (_, g1, g2, d) = configs[c];
            en_series(&config_spec(&cfg.spec, g1, g2, d), cfg, &mechanics_only(n))
        })
        .collect::<Out<_>>()?;
    let rows = series.iter().map(Vec::len).min().unwrap_or(0);
    truncation_warning(
        log,
        "log-negativity",
        rows,
        cfg.time.n_points,
        cfg.time.dt(),
    );

    let mut header = vec!["t".to_string()];
    for (name, ..) in &configs {
        header.push(format!("EN_{name}"));
        header.push(format!("EN_{name}_nm0"));
    }
    let mut main = Table::new("fig4a", &[], "t [1/G]", "E_N");
    main.plot_columns = (1..header.len()).collect();
    main.header = header;
    for k in 0..rows {
        let mut row = vec![Cell::Real(k as f64 * cfg.time.dt())];
        row.extend(series.iter().map(|s| Cell::Real(s[k])));
        main.rows.push(row);
    }

    let inset_rows: Vec<Vec<Cell>> = cfg
        .options
        .n_m_values
        .par_iter()
        .map(|&n| {
            let mut row = vec![Cell::Real(n)];
            for &(_, g1, g2, d) in &configs {
                let s = en_series(&config_spec(&cfg.spec, g1, g2, d), cfg, &mechanics_only(n))?;
                let (m, at) = max_of(&s);
                row.push(Cell::Real(m));
                row.push(Cell::Real(at as f64 * cfg.time.dt()));
            }
            Ok(row)
        })
        .collect::<Out<_>>()?;
    let mut inset_header = vec!["n_m".to_string()];
    for (name, ..) in &configs {
        inset_header.push(format!("ENmax_{name}"));
        inset_header.push(format!("t_at_max_{name}"));
    }
    let mut inset = Table::new("fig4a_inset", &[], "n_m", "max E_N");
    inset.plot_columns = (0..configs.len()).map(|c| 1 + 2 * c).collect();
    inset.header = inset_header;
    inset.rows = inset_rows;

    for (name, g1, g2, d) in &configs {
        let p = crate::model::effective_params(&config_spec(&cfg.spec, *g1, *g2, *d))?;
        log.notes.push(format!(
            "{name}: G1 = {g1}, G2 = {g2}, delta = {d}, delta_lambda = {}",
            p.delta_lambda
        ));
    }
    log.notes.push(format!(
        "cavities start in vacuum, mechanics thermal with n_m = {n_m} (columns *_nm0: n_m = 0); \
         inset maxima over t in [0, {}]",
        cfg.time.t_max
    ));
    Ok(vec![main, inset])
}

fn fig4_config_notes(log: &mut Log, configs: &[(&str, f64, f64, f64)]) {
    for (name, g1, g2, d) in configs {
        log.notes
            .push(format!("{name}: G1 = {g1}, G2 = {g2}, delta = {d}"));
    }
}

fn fig4b(cfg: &ScenarioConfig, log: &mut Log) -> Out<Vec<Table>> {
    let configs = entangling_configs(true, 0.0);
    fig4_config_notes(log, &configs);
    for &(name, g1, g2, d) in &configs {
        let (stable, max_re) = stability_of(&build_quadrature_dynamics(
            &config_spec(&cfg.spec, g1, g2, d),
            cfg.options.rwa,
        ));
        if !stable {
            log.warnings.push(format!(
                "UnstableRegime: {name} has growing modes (max Re = {max_re:e}); its maximum is taken over the finite part of the series"
            ));
        }
    }
    let mechanics = mechanics_only(cfg.options.n_m);
    let rows: Vec<Vec<Cell>> = sweep_values(cfg)
        .into_par_iter()
        .map(|n_th| {
            let mut row = vec![Cell::Real(n_th)];
            for &(_, g1, g2, d) in &configs {
                let spec = config_spec(&cfg.spec, g1, g2, d).with_n_th(n_th);
                row.push(Cell::Real(max_of(&en_series(&spec, cfg, &mechanics)?).0));
            }
            Ok(row)
        })
        .collect::<Out<_>>()?;
    log.notes.push(format!(
        "maximum of E_N over t in [0, {}] with n_m = {}",
        cfg.time.t_max, cfg.options.n_m
    ));
    let mut header = vec!["n_th".to_string()];
    header.extend(configs.iter().map(|(n, ..)| format!("ENmax_{n}")));
    let mut t = Table::new("fig4b", &[], "n_th", "max E_N");
    t.plot_columns = (1..header.len()).collect();
    t.header = header;
    t.rows = rows;
    Ok(vec![t])
}

fn steady_en(spec: &SystemSpec, rwa: bool) -> Out<f64> {
    let ss = steady_state(&build_quadrature_dynamics(spec, rwa))?;
    Ok(logarithmic_negativity(&ss, CAVITY_1, CAVITY_2)?)
}

fn fig4c(cfg: &ScenarioConfig, log: &mut Log) -> Out<Vec<Table>> {
    let configs = entangling_configs(true, 0.0);
    fig4_config_notes(log, &configs);
    for &(name, g1, g2, d) in &configs {
        let (stable, max_re) = stability_of(&build_quadrature_dynamics(
            &config_spec(&cfg.spec, g1, g2, d),
            cfg.options.rwa,
        ));
        if !stable {
            return Err(ScenarioError::Unstable(format!(
                "{name} has no steady state (max Re = {max_re:e})"
            )));
        }
    }
    let rows: Vec<Vec<Cell>> = sweep_values(cfg)
        .into_par_iter()
        .map(|n_th| {
            let mut row = vec![Cell::Real(n_th)];
            for &(_, g1, g2, d) in &configs {
                row.push(Cell::Real(steady_en(
                    &config_spec(&cfg.spec, g1, g2, d).with_n_th(n_th),
                    cfg.options.rwa,
                )?));
            }
            Ok(row)
        })
        .collect::<Out<_>>()?;
    let mut header = vec!["n_th".to_string()];
    header.extend(configs.iter().map(|(n, ..)| format!("EN_ss_{n}")));
    let mut t = Table::new("fig4c", &[], "n_th", "steady-state E_N");
    t.plot_columns = (1..header.len()).collect();
    t.header = header;
    t.rows = rows;
    Ok(vec![t])
}

fn fidelity_row(spec: &SystemSpec, cfg: &ScenarioConfig) -> Out<FidelityBreakdown> {
    let t0 = transfer_time(spec)?;
    let mut f = transfer_fidelity_closed_form(spec, alpha(cfg), cfg.options.n_m, t0)?;
    f.f_exact = Some(exact_fidelity(spec, cfg, cfg.options.n_m, t0)?);
    Ok(f)
}

fn custom(cfg: &ScenarioConfig, log: &mut Log) -> Out<Vec<Table>> {
    let sweep = cfg
        .sweep
        .as_ref()
        .expect("custom sweeps always carry an axis");
    let p = sweep.parameter.as_str();
    let observable = cfg.options.observable;
    let header: Vec<&str> = match observable {
        Observable::Stability => vec![
            p,
            "max_real_part",
            "numeric_stable",
            "rh_first",
            "rh_second",
            "rh_stable",
        ],
        Observable::SteadyEn => vec![p, "EN_ss"],
        Observable::MaxEn => vec![p, "EN_max", "t_at_max"],
        Observable::Fidelity => vec![p, "F1", "F2", "F", "F_exact"],
    };
    let unstable_points = std::sync::Mutex::new(Vec::new());
    let rows: Vec<Vec<Cell>> = sweep
        .values()
        .into_par_iter()
        .map(|x| {
            let mut spec = cfg.spec;
            apply_parameter(&mut spec, p, x);
            Ok(match observable {
                Observable::Stability => {
                    let r = stability(&spec);
                    let (a, b, c) = match r.routh_hurwitz {
                        Some(rh) => (
                            Cell::Real(rh.first_condition),
                            Cell::Real(rh.second_condition),
                            Cell::Bool(rh.stable),
                        ),
                        None => (Cell::Empty, Cell::Empty, Cell::Empty),
                    };
                    vec![
                        Cell::Real(x),
                        Cell::Real(r.max_real_part),
                        Cell::Bool(r.numeric_stable),
                        a,
                        b,
                        c,
                    ]
                }
                Observable::SteadyEn => vec![
                    Cell::Real(x),
                    Cell::Real(steady_en(&spec, cfg.options.rwa)?),
                ],
                Observable::MaxEn => {
                    let (stable, _) =
                        stability_of(&build_quadrature_dynamics(&spec, cfg.options.rwa));
                    if !stable {
                        unstable_points.lock().expect("not poisoned").push(x);
                    }
                    let (m, at) = max_of(&en_series(&spec, cfg, &cfg.initial)?);
                    vec![
                        Cell::Real(x),
                        Cell::Real(m),
                        Cell::Real(at as f64 * cfg.time.dt()),
                    ]
                }
                Observable::Fidelity => {
                    let f = fidelity_row(&spec, cfg)?;
                    vec![
                        Cell::Real(x),
                        Cell::Real(f.f1),
                        Cell::Real(f.f2),
                        Cell::Real(f.f),
                        Cell::Real(f.f_exact.unwrap_or(f64::NAN)),
                    ]
                }
            })
        })
        .collect::<Out<_>>()?;
    let mut unstable = unstable_points.into_inner().expect("not poisoned");
    unstable.sort_by(f64::total_cmp);
    if !unstable.is_empty() {
        log.warnings.push(format!(
            "UnstableRegime: transient maxima requested where the drift has growing modes ({p} = {unstable:?})"
        ));
    }
    let mut t = Table::new("custom_sweep", &header, p, &format!("{observable:?}"));
    if observable == Observable::Stability {
        t.plot_columns = vec![1];
    }
    t.rows = rows;
    Ok(vec![t])
}
