//! Sideband model vs brute-force evolution for two atoms.

use std::f64::consts::{FRAC_PI_2, TAU};

use rf_forster::resonance::ResonanceSearch;
use rf_forster::spectrum::{bright_coupling, evolve_oracle, pair_couplings, OracleOptions, Position, SidebandModel};
use rf_forster::{FieldDrive, InteractionChannel, ParameterSet};

use crate::tolerances::{MODEL_REL, NORM_DRIFT, OFF_RESONANT_ABS};
use crate::OracleReport;

/// One drive setting of the comparison grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelCase {
    pub channel: String,
    pub freq_rf: f64,
    pub f_rf: f64,
    pub orders: (i32, i32),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelGrid {
    pub cases: Vec<ModelCase>,
    /// Pair separations (um, perpendicular to the field) of the weak-coupling points.
    pub distances: Vec<f64>,
    pub interaction_time: f64,
    /// rf phases the oracle transfer is averaged over.
    pub phases: Vec<f64>,
}

impl Default for ModelGrid {
    fn default() -> Self {
        let case = |c: &str, f, a, o| ModelCase {
            channel: c.to_string(),
            freq_rf: f,
            f_rf: a,
            orders: o,
        };
        ModelGrid {
            cases: vec![case("37P", 15.0, 0.15, (-2, 2)), case("37P", 15.0, 0.3, (-2, 2)), case("39P", 95.0, 0.3, (1, 2))],
            distances: vec![60.0, 100.0],
            interaction_time: 3.0,
            phases: vec![0.0, FRAC_PI_2],
        }
    }
}

fn pair(r: f64) -> [Position; 2] {
    [[0.0, 0.0, 0.0], [r, 0.0, 0.0]]
}

struct Runner<'a> {
    grid: &'a ModelGrid,
    opts: OracleOptions,
    max_drift: f64,
    runs: usize,
}

impl Runner<'_> {
    fn oracle(&mut self, ch: &InteractionChannel, drive: &FieldDrive, r: f64) -> f64 {
        let mut acc = 0.0;
        for &phase in &self.grid.phases {
            let ev = evolve_oracle(&pair(r), ch, drive, phase, self.grid.interaction_time, &self.opts)
                .expect("oracle evolution");
            self.max_drift = self.max_drift.max(ev.norm_drift);
            self.runs += 1;
            acc += ev.transfer;
        }
        acc / self.grid.phases.len() as f64
    }

    fn model(&self, ch: &InteractionChannel, drive: &FieldDrive, r: f64) -> f64 {
        let v = pair_couplings(ch.c3, &pair(r)).expect("distinct");
        SidebandModel::new(ch, drive)
            .expect("model")
            .transfer(bright_coupling(&v), self.grid.interaction_time)
    }
}

#[derive(Default)]
struct Dev {
    abs: f64,
    rel: f64,
    n: usize,
    ok: bool,
}

impl Dev {
    fn new() -> Self {
        Dev {
            ok: true,
            ..Default::default()
        }
    }

    fn add(&mut self, got: f64, want: f64) {
        let d = (got - want).abs();
        self.abs = self.abs.max(d);
        if want != 0.0 {
            self.rel = self.rel.max(d / want.abs());
        }
        self.n += 1;
    }

    fn report(self, id: &str, tolerance: f64, passed: bool) -> OracleReport {
        OracleReport {
            test_id: id.to_string(),
            max_abs_dev: self.abs,
            max_rel_dev: self.rel,
            samples: self.n,
            tolerance,
            passed: passed && self.ok,
        }
    }
}

/// Field where the cycle-averaged defect sits half-way between orders `m`
/// and `m + 1`, if it exists.
fn half_order_field(ch: &InteractionChannel, case: &ModelCase, m: i32) -> Option<f64> {
    let k = ch.defect_curvature();
    let target = (m as f64 + 0.5) * case.freq_rf;
    let f2 = 2.0 * (target - ch.delta0) / k - 0.5 * case.f_rf * case.f_rf;
    (f2 > 0.0).then(|| f2.sqrt())
}

/// Runs the sideband-model vs evolution comparison on `grid` with the given
/// parameters. Returns one report per property: weak-coupling agreement,
/// off-resonant suppression, peak positions, the undriven two-level limit and
/// the norm drift of every evolution.
pub fn check_model_against_evolution(params: &ParameterSet, grid: &ModelGrid) -> Vec<OracleReport> {
    let mut runner = Runner {
        grid,
        opts: OracleOptions::default(),
        max_drift: 0.0,
        runs: 0,
    };
    let mut weak = Dev::new();
    let mut off = Dev::new();
    let mut peaks = Dev::new();

    for case in &grid.cases {
        let ch = params.channel(&case.channel).expect("channel");
        let loci = ResonanceSearch::default()
            .with_rf_amplitude(case.f_rf)
            .run(ch, case.freq_rf, (0.05, 3.0), case.orders)
            .expect("loci");
        for l in loci.iter().filter(|l| !l.degenerate) {
            let drive = FieldDrive::new(l.f_resonance, case.f_rf, case.freq_rf).expect("drive");
            for &r in &grid.distances {
                let o = runner.oracle(ch, &drive, r);
                let m = runner.model(ch, &drive, r);
                weak.add(o, m);
            }

            // argmax over a fine field grid around the locus, moderate coupling
            let r = grid.distances[0];
            let step = 4e-4;
            let fields: Vec<f64> = (-10..=10).map(|i| l.f_resonance + step * i as f64).collect();
            let argmax = |v: &[f64]| {
                v.iter()
                    .enumerate()
                    .max_by(|a, b| a.1.total_cmp(b.1))
                    .map(|(i, _)| i)
                    .unwrap()
            };
            let mut o = Vec::new();
            let mut m = Vec::new();
            for &f in &fields {
                let d = FieldDrive::new(f, case.f_rf, case.freq_rf).expect("drive");
                o.push(runner.oracle(ch, &d, r));
                m.push(runner.model(ch, &d, r));
            }
            let (io, im) = (argmax(&o), argmax(&m));
            peaks.add(io as f64, im as f64);
            peaks.ok &= io.abs_diff(im) <= 1 && io.abs_diff(10) <= 1;
        }

        for mo in case.orders.0..case.orders.1 {
            let Some(f) = half_order_field(ch, case, mo) else {
                continue;
            };
            let drive = FieldDrive::new(f, case.f_rf, case.freq_rf).expect("drive");
            let r = *grid.distances.last().unwrap();
            let o = runner.oracle(ch, &drive, r);
            let m = runner.model(ch, &drive, r);
            off.add(o, 0.0);
            off.add(m, 0.0);
            off.ok &= o < OFF_RESONANT_ABS && m < OFF_RESONANT_ABS;
        }
    }

    // undriven, exactly resonant: both follow sin^2(2 pi sqrt(2) V t)
    let mut two_level = Dev::new();
    if let Some(ch) = params.channels().find(|c| c.dc_resonance_field().is_some() && c.initial[0] == c.initial[1]) {
        let f0 = ch.dc_resonance_field().unwrap();
        let drive = FieldDrive::dc(f0).expect("drive");
        let r = 25.0;
        let v = pair_couplings(ch.c3, &pair(r)).unwrap()[0];
        for &t in &[0.25, 0.8, 1.5, 3.0] {
            let exact = (TAU * 2f64.sqrt() * v * t).sin().powi(2);
            let ev = evolve_oracle(&pair(r), ch, &drive, 0.0, t, &runner.opts).expect("oracle");
            runner.max_drift = runner.max_drift.max(ev.norm_drift);
            runner.runs += 1;
            let model = SidebandModel::new(ch, &drive).unwrap().transfer(2f64.sqrt() * v, t);
            two_level.add(ev.transfer, exact);
            two_level.add(model, exact);
        }
    }
    let two_level_ok = two_level.abs < 1e-6;

    let drift = OracleReport {
        test_id: "oracle.norm-drift".into(),
        max_abs_dev: runner.max_drift,
        max_rel_dev: runner.max_drift,
        samples: runner.runs,
        tolerance: NORM_DRIFT,
        passed: runner.max_drift < NORM_DRIFT,
    };
    let weak_ok = weak.rel < MODEL_REL && weak.n > 0;
    vec![
        weak.report("model.weak-coupling", MODEL_REL, weak_ok),
        off.report("model.off-resonant", OFF_RESONANT_ABS, true),
        peaks.report("model.peak-position", 1.0, true),
        two_level.report("model.two-level", 1e-6, two_level_ok),
        drift,
    ]
}
