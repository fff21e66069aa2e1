//! One function per subcommand: compute, then describe the result as a table,
//! a one-line summary and sidecar details.

use rf_forster::floquet::{floquet_arguments, sideband_table, sideband_table_auto};
use rf_forster::interaction::{dd_coupling, pair_shift};
use rf_forster::report::{Cell, Table};
use rf_forster::resonance::{ChannelSidebands, ResonanceSearch};
use rf_forster::spectrum::{find_peaks, simulate_spectrum, Backend, OracleOptions};
use rf_forster::{EnsembleConfig, FieldDrive, InteractionChannel, PairGeometry, ParameterSet, VolumeShape};
use serde_json::{json, Value};

use crate::args::*;
use crate::usage;

pub struct Report {
    pub table: Table,
    pub summary: String,
    pub details: Value,
    pub seed: Option<u64>,
}

pub fn run_command(cmd: &Command, params: &ParameterSet) -> anyhow::Result<Report> {
    match cmd {
        Command::Sidebands(a) => sidebands(a, params),
        Command::Resonances(a) => resonances(a, params),
        Command::PairShift(a) => pair_shift_table(a, params),
        Command::Spectrum(a) => spectrum(a, params),
        Command::StarkMap(a) => stark_map(a, params),
        Command::Replay(_) => unreachable!("replay is resolved by the dispatcher"),
    }
}

fn drive_of(rf: &RfArgs, f_dc: f64) -> anyhow::Result<FieldDrive> {
    let amp = rf.amplitude();
    if amp > 0.0 && rf.rf_freq.is_none() {
        return Err(usage("an rf amplitude needs --rf-freq"));
    }
    Ok(FieldDrive::new(f_dc, amp, rf.rf_freq.unwrap_or(0.0))?)
}

fn channel_json(ch: &InteractionChannel) -> Value {
    json!({
        "label": ch.label,
        "initial": [ch.initial[0].key.to_string(), ch.initial[1].key.to_string()],
        "final": [ch.final_pair[0].key.to_string(), ch.final_pair[1].key.to_string()],
        "delta0_MHz": ch.delta0,
        "curvature_MHz_per_Vcm2": ch.defect_curvature(),
        "C3_MHz_um3": ch.c3,
    })
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

fn sidebands(a: &SidebandsArgs, params: &ParameterSet) -> anyhow::Result<Report> {
    let state = params.find_state(&a.state)?;
    if a.rf.rf_freq.is_none() {
        return Err(usage("sidebands needs --rf-freq"));
    }
    let drive = drive_of(&a.rf, a.f_dc)?;
    let table = match a.m_max {
        Some(m) => sideband_table(state, &drive, m)?,
        None => sideband_table_auto(state, &drive)?,
    };
    let mut t = Table::new(["m", "amplitude", "intensity", "energy_MHz"]);
    for m in table.orders() {
        let amp = table.amplitude(m);
        t.push(vec![Cell::from(m), amp.into(), (amp * amp).into(), table.energy(m).into()]);
    }
    let (x, y) = floquet_arguments(state.alpha, &drive);
    let sum = table.intensity_sum();
    Ok(Report {
        summary: format!(
            "sidebands: {} at F_dc = {} V/cm, F_rf = {} V/cm, {} MHz; m_max = {}, sum of intensities = {:.12}",
            state.key, drive.f_dc, drive.f_rf, drive.freq_rf, table.m_max, sum
        ),
        details: json!({
            "state": state.key.to_string(),
            "drive": drive,
            "floquet_x": x,
            "floquet_y": y,
            "m_max": table.m_max,
            "intensity_sum": sum,
        }),
        table: t,
        seed: None,
    })
}

fn resonances(a: &ResonancesArgs, params: &ParameterSet) -> anyhow::Result<Report> {
    let ch = params.channel(&a.channel)?;
    let Some(freq) = a.rf.rf_freq else {
        return Err(usage("resonances needs --rf-freq"));
    };
    let amp = a.rf.amplitude();
    let search = ResonanceSearch::default().with_rf_amplitude(if a.ac_shift { amp } else { 0.0 });
    let loci = search.run(ch, freq, a.f_range, a.orders)?;
    let mut t = Table::new(["m", "F_resonance_Vcm", "defect_slope_MHz_per_Vcm", "weight"]);
    let mut rows = Vec::new();
    for l in &loci {
        let drive = FieldDrive::new(l.f_resonance, amp, freq)?;
        let auto = ChannelSidebands::auto(ch, &drive)?;
        let sb = if auto.m_max() < l.order_m.unsigned_abs() as usize {
            ChannelSidebands::new(ch, &drive, l.order_m.unsigned_abs() as usize + 20)?
        } else {
            auto
        };
        let w = sb.weight(l.order_m)?;
        t.push(vec![l.order_m.into(), l.f_resonance.into(), l.defect_slope.into(), w.into()]);
        rows.push(json!({"m": l.order_m, "degenerate": l.degenerate}));
    }
    let list: Vec<String> = loci.iter().map(|l| format!("m={}@{:.4}", l.order_m, l.f_resonance)).collect();
    Ok(Report {
        summary: format!("resonances: {} at {} MHz: {} loci [{}]", ch.label, freq, loci.len(), list.join(", ")),
        details: json!({
            "channel": channel_json(ch),
            "rf_freq_MHz": freq,
            "rf_amplitude_Vcm": amp,
            "ac_shift": a.ac_shift,
            "f_range": a.f_range,
            "orders": a.orders,
            "loci": rows,
        }),
        table: t,
        seed: None,
    })
}

fn pair_shift_table(a: &PairShiftArgs, params: &ParameterSet) -> anyhow::Result<Report> {
    let ch = params.channel(&a.channel)?;
    if a.points == 0 {
        return Err(usage("--points must be >= 1"));
    }
    let delta = a.delta.unwrap_or_else(|| ch.forster_defect(a.f_dc));
    let above = ch.pp_above_override.unwrap_or(delta < 0.0);
    let sign = if above { 1.0 } else { -1.0 };
    let mut t = Table::new(["R_um", "Delta_MHz", "V_MHz", "dE_PP_MHz", "vdW_limit_MHz"]);
    for r in linspace(a.r_range.0, a.r_range.1, a.points) {
        let geom = match a.cos_theta {
            Some(c) => PairGeometry::new(r, c)?,
            None => PairGeometry::averaged(r)?,
        };
        let v = dd_coupling(ch, &geom);
        let shift = pair_shift(v, delta, above);
        let vdw = if delta == 0.0 {
            sign * f64::INFINITY
        } else {
            sign * 2.0 * v * v / delta.abs()
        };
        t.push(vec![r.into(), delta.into(), v.into(), shift.into(), vdw.into()]);
    }
    Ok(Report {
        summary: format!(
            "pair-shift: {} with defect {} MHz, {} distances in [{}, {}] um",
            ch.label, delta, a.points, a.r_range.0, a.r_range.1
        ),
        details: json!({
            "channel": channel_json(ch),
            "delta_MHz": delta,
            "pp_above": above,
            "cos_theta": a.cos_theta,
        }),
        table: t,
        seed: None,
    })
}

fn ensemble_config(a: &SpectrumArgs) -> anyhow::Result<EnsembleConfig> {
    let mut cfg = match &a.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| anyhow::anyhow!("cannot read {}: {e}", p.display()))?;
            toml::from_str(&text).map_err(|e| anyhow::anyhow!("invalid config {}: {e}", p.display()))?
        }
        None => EnsembleConfig::default(),
    };
    if let Some(v) = a.atoms {
        cfg.atoms = v;
    }
    if let Some(v) = a.samples {
        cfg.samples = v;
    }
    if let Some(v) = a.seed {
        cfg.seed = v;
    }
    if let Some(v) = a.volume_size {
        cfg.volume_size = v;
    }
    if let Some(v) = a.volume_shape {
        cfg.volume_shape = match v {
            ShapeArg::SphereUniform => VolumeShape::SphereUniform,
            ShapeArg::Gaussian => VolumeShape::Gaussian,
        };
    }
    if let Some(v) = a.time {
        cfg.interaction_time = v;
    }
    if let Some(v) = a.detection_efficiency {
        cfg.detection_efficiency = v;
    }
    Ok(cfg)
}

fn spectrum(a: &SpectrumArgs, params: &ParameterSet) -> anyhow::Result<Report> {
    let ch = params.channel(&a.channel)?;
    let cfg = ensemble_config(a)?;
    if a.points == 0 {
        return Err(usage("--points must be >= 1"));
    }
    let drive = drive_of(&a.rf, 0.0)?;
    let grid = linspace(a.f_range.0, a.f_range.1, a.points);
    let backend = match a.backend {
        BackendArg::Sideband => Backend::Sideband,
        BackendArg::Oracle => Backend::Oracle(OracleOptions::default()),
    };
    let compute = || simulate_spectrum(ch, &cfg, &drive, &grid, backend);
    let scan = match a.threads {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(compute)?,
        None => compute()?,
    };

    let mut header = vec!["F_dc_Vcm".to_string()];
    for n in scan.s.keys() {
        header.push(format!("S_{n}"));
        header.push(format!("err_{n}"));
    }
    let mut t = Table::new(header);
    for (i, f) in scan.f_grid.iter().enumerate() {
        let mut row = vec![Cell::from(*f)];
        for (n, s) in &scan.s {
            row.push(s[i].into());
            row.push(scan.stderr[n][i].into());
        }
        t.push(row);
    }
    let mut peaks = serde_json::Map::new();
    let mut best = Vec::new();
    for (n, s) in &scan.s {
        let err_max = scan.stderr[n].iter().cloned().fold(0.0, f64::max);
        let p: Vec<Value> = find_peaks(s, 4.0 * err_max)
            .into_iter()
            .map(|p| json!({"F_dc_Vcm": scan.f_grid[p.index], "S": p.value, "prominence": p.prominence}))
            .collect();
        peaks.insert(format!("{n}"), Value::Array(p));
        let max = s.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        best.push(format!("S_{n}max={max:.4}"));
    }
    Ok(Report {
        summary: format!(
            "spectrum: {} ({} backend), {} points x {} samples, seed {}; {}",
            ch.label,
            backend.name(),
            grid.len(),
            cfg.samples,
            cfg.seed,
            best.join(" ")
        ),
        details: json!({
            "channel": channel_json(ch),
            "drive": drive,
            "config": cfg,
            "backend": backend.name(),
            "dropped": scan.metadata.dropped,
            "evaluations": scan.metadata.evaluations,
            "peaks": peaks,
        }),
        seed: Some(cfg.seed),
        table: t,
    })
}

fn stark_map(a: &StarkMapArgs, params: &ParameterSet) -> anyhow::Result<Report> {
    let ch = params.channel(&a.channel)?;
    if a.points == 0 {
        return Err(usage("--points must be >= 1"));
    }
    let amp = a.rf.amplitude();
    let drive = drive_of(&a.rf, 0.0)?;
    let ladder = amp > 0.0;
    let mut header: Vec<String> = ["F_Vcm", "E_initial_MHz", "E_final_MHz", "defect_MHz"]
        .into_iter()
        .map(String::from)
        .collect();
    if ladder {
        for m in 1..=a.sidebands {
            header.push(format!("E_initial_p{m}_MHz"));
            header.push(format!("E_initial_m{m}_MHz"));
        }
    }
    let mut t = Table::new(header);
    // cycle-averaged energy: E(F_dc) - alpha F_rf^2 / 4
    let mean = |s: &rf_forster::RydbergState, f: f64| s.stark_energy(f) - 0.25 * s.alpha * amp * amp;
    for f in linspace(a.f_range.0, a.f_range.1, a.points) {
        let e_i = mean(&ch.initial[0], f) + mean(&ch.initial[1], f);
        let e_f = mean(&ch.final_pair[0], f) + mean(&ch.final_pair[1], f);
        let mut row: Vec<Cell> = vec![f.into(), e_i.into(), e_f.into(), (e_f - e_i).into()];
        if ladder {
            for m in 1..=a.sidebands {
                let step = m as f64 * drive.freq_rf;
                row.push((e_i + step).into());
                row.push((e_i - step).into());
            }
        }
        t.push(row);
    }
    Ok(Report {
        summary: format!(
            "stark-map: {} over [{}, {}] V/cm, {} points{}",
            ch.label,
            a.f_range.0,
            a.f_range.1,
            a.points,
            if ladder { format!(", +-{} sidebands of {} MHz", a.sidebands, drive.freq_rf) } else { String::new() }
        ),
        details: json!({"channel": channel_json(ch), "drive": drive}),
        table: t,
        seed: None,
    })
}
