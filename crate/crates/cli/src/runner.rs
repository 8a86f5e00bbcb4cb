use std::time::Instant;

use rayon::prelude::*;
use spintangle::classical_top::{
    find_periodic_orbit, kick_map, phase_portrait, ClassicalParams, GridSpec, MotionClass,
    SpherePoint,
};
use spintangle::entanglement_bounds::{
    bound_trajectory, orbit_overlap_criterion, BoundEvaluator, BoundRecord, RunMaximum,
};
use spintangle::quantum_dynamics::{build_unitary, FloquetUnitary, KickedTopParams};
use spintangle::spin_algebra::{scs_state, BlochAngles, Spin};

use crate::config::{ScanAxis, Scenario, ScenarioConfig};
use crate::error::{CliError, CliResult};
use crate::output::{fmt_float, fmt_opt, sibling, write_csv, write_text, OutputFile, RunManifest};
use crate::plot::{Figure, Series, Style, PALETTE};

/// Largest amount by which an entropy may exceed its bound before the run aborts.
pub const BOUND_SLACK: f64 = 1e-9;

pub const EVOLVE_HEADER: [&str; 15] = [
    "kick",
    "q",
    "S_q_bits",
    "D_re",
    "D_re_prime",
    "bound_bits",
    "loose_bound_bits",
    "loose_valid",
    "Jx_exp",
    "Jy_exp",
    "Jz_exp",
    "cl_X",
    "cl_Y",
    "cl_Z",
    "degenerate_dir",
];
pub const PORTRAIT_HEADER: [&str; 9] = [
    "ic_index", "theta0", "phi0", "step", "X", "Y", "Z", "lyapunov", "class",
];
pub const SCAN_HEADER: [&str; 5] = [
    "scan_value",
    "j",
    "max_S_q_bits",
    "max_bound_bits",
    "argmax_kick",
];
pub const OVERLAP_HEADER: [&str; 2] = ["j", "max_pair_overlap"];

/// What a finished run produced.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub outputs: Vec<OutputFile>,
    /// Human-readable result lines for the terminal.
    pub notes: Vec<String>,
}

/// Runs the configured scenario on a pool of `config.workers` threads and
/// writes its CSV, the optional plot and the manifest.
pub fn run_scenario(config: &ScenarioConfig) -> CliResult<RunSummary> {
    let started = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| CliError::config(format!("workers: {e}")))?;
    let (rows, notes, figure) = pool.install(|| match config.scenario {
        Scenario::Evolve => run_evolve(config),
        Scenario::PhasePortrait => run_portrait(config),
        Scenario::ScanKappa | Scenario::ScanPhi => run_scan(config),
        Scenario::OverlapCriterion => run_overlap(config),
    })?;

    let mut outputs = Vec::new();
    let header: &[&str] = match config.scenario {
        Scenario::Evolve => &EVOLVE_HEADER,
        Scenario::PhasePortrait => &PORTRAIT_HEADER,
        Scenario::ScanKappa | Scenario::ScanPhi => &SCAN_HEADER,
        Scenario::OverlapCriterion => &OVERLAP_HEADER,
    };
    let count = write_csv(&config.out, header, rows)?;
    outputs.push(OutputFile {
        path: config.out.clone(),
        rows: count,
    });
    if config.plot {
        let path = sibling(&config.out, ".svg");
        write_text(&path, &figure.to_svg())?;
        outputs.push(OutputFile { path, rows: 0 });
    }

    let manifest = RunManifest {
        tool: "spintangle",
        version: env!("CARGO_PKG_VERSION"),
        config,
        warnings: &config.warnings,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
        outputs: &outputs,
    };
    manifest.write(&sibling(&config.out, ".manifest.json"))?;
    Ok(RunSummary { outputs, notes })
}

type Rows = Vec<Vec<String>>;

fn spin_of(config: &ScenarioConfig) -> Spin {
    config.spin().expect("scenario requires j")
}

fn start_of(config: &ScenarioConfig) -> BlochAngles {
    config
        .start
        .as_ref()
        .expect("scenario requires a start point")
        .angles()
}

fn check_bound(r: &BoundRecord, context: &str) -> CliResult<()> {
    if r.entropy > r.bound + BOUND_SLACK {
        return Err(CliError::Numerical(format!(
            "{context}kick {} q {}: S = {} exceeds bound {}",
            r.kick, r.q, r.entropy, r.bound
        )));
    }
    Ok(())
}

fn evolve_row(r: &BoundRecord) -> Vec<String> {
    let cl = r.classical.map(|p| p.as_array());
    vec![
        r.kick.to_string(),
        r.q.to_string(),
        fmt_float(r.entropy),
        fmt_opt(r.d_re),
        fmt_opt(r.d_re_prime),
        fmt_float(r.bound),
        fmt_opt(r.loose.map(|l| l.value)),
        r.loose.map(|l| l.valid.to_string()).unwrap_or_default(),
        fmt_float(r.expectation[0]),
        fmt_float(r.expectation[1]),
        fmt_float(r.expectation[2]),
        fmt_opt(cl.map(|c| c[0])),
        fmt_opt(cl.map(|c| c[1])),
        fmt_opt(cl.map(|c| c[2])),
        r.degenerate_direction.to_string(),
    ]
}

fn run_evolve(config: &ScenarioConfig) -> CliResult<(Rows, Vec<String>, Figure)> {
    let spin = spin_of(config);
    let unitary = build_unitary(KickedTopParams::new(spin, config.kappa, config.p));
    let records = bound_trajectory(&unitary, start_of(config), config.kicks, &config.partitions)?;
    for r in &records {
        check_bound(r, "")?;
    }

    let mut notes = Vec::new();
    let mut series = Vec::new();
    for (i, &q) in config.partitions.iter().enumerate() {
        let of_q: Vec<&BoundRecord> = records.iter().filter(|r| r.q == q).collect();
        let max = RunMaximum::from_records(of_q.iter().copied()).expect("at least one kick");
        let mean_gap = of_q.iter().map(|r| r.slack()).sum::<f64>() / of_q.len() as f64;
        notes.push(format!(
            "q = {q}: max S = {:.6} bits at kick {}, mean bound gap {:.6} bits",
            max.max_entropy, max.argmax_kick, mean_gap
        ));
        let color = PALETTE[i % PALETTE.len()];
        series.push(Series {
            label: format!("S_{q}"),
            color,
            style: Style::Line,
            points: of_q.iter().map(|r| (r.kick as f64, r.entropy)).collect(),
        });
        series.push(Series {
            label: format!("bound q={q}"),
            color,
            style: Style::Dashed,
            points: of_q.iter().map(|r| (r.kick as f64, r.bound)).collect(),
        });
    }
    let figure = Figure {
        title: format!("j = {spin}, kappa = {}, p = {}", config.kappa, config.p),
        x_label: "kick".into(),
        y_label: "bits".into(),
        series,
    };
    Ok((records.iter().map(evolve_row).collect(), notes, figure))
}

fn run_portrait(config: &ScenarioConfig) -> CliResult<(Rows, Vec<String>, Figure)> {
    let grid = match (&config.start, config.grid) {
        (Some(ic), _) => GridSpec::Points(vec![ic.angles()]),
        (None, Some((n_theta, n_phi))) => GridSpec::Grid { n_theta, n_phi },
        (None, None) => unreachable!("resolution supplies a grid"),
    };
    let rows = phase_portrait(
        &grid,
        ClassicalParams::new(config.kappa, config.p),
        config.kicks,
    )?;

    let ics = grid.initial_conditions().len();
    let chaotic = rows
        .iter()
        .filter(|r| r.step == 0 && r.class == MotionClass::Chaotic)
        .count();
    let notes = vec![format!(
        "{ics} initial conditions, {chaotic} classified chaotic"
    )];

    let scatter = |class: MotionClass| -> Vec<(f64, f64)> {
        rows.iter()
            .filter(|r| r.class == class)
            .map(|r| (r.point.y().atan2(r.point.x()), r.point.z()))
            .collect()
    };
    let figure = Figure {
        title: format!("kappa = {}, p = {}", config.kappa, config.p),
        x_label: "phi".into(),
        y_label: "Z = cos theta".into(),
        series: vec![
            Series {
                label: "regular".into(),
                color: PALETTE[0],
                style: Style::Dots,
                points: scatter(MotionClass::Regular),
            },
            Series {
                label: "chaotic".into(),
                color: PALETTE[1],
                style: Style::Dots,
                points: scatter(MotionClass::Chaotic),
            },
        ],
    };

    let csv_rows = rows
        .iter()
        .map(|r| {
            let [x, y, z] = r.point.as_array();
            vec![
                r.ic_index.to_string(),
                fmt_float(r.initial.theta()),
                fmt_float(r.initial.phi()),
                r.step.to_string(),
                fmt_float(x),
                fmt_float(y),
                fmt_float(z),
                fmt_float(r.lyapunov),
                r.class.as_str().to_string(),
            ]
        })
        .collect();
    Ok((csv_rows, notes, figure))
}

/// Maximum entropy and bound over `kicks` kicks from the coherent state at `start`.
pub fn run_maximum(
    unitary: &FloquetUnitary,
    start: BlochAngles,
    q: usize,
    kicks: usize,
) -> CliResult<RunMaximum> {
    let params = unitary.params();
    let evaluator = BoundEvaluator::new(params.spin, q)?;
    let classical = params.classical();
    let mut cl = SpherePoint::from_angles(start);
    let mut records = Vec::with_capacity(kicks + 1);
    for (kick, state) in unitary
        .kicks(&scs_state(params.spin, start))?
        .take(kicks + 1)
        .enumerate()
    {
        let r = evaluator.record(&state, Some(&cl), kick)?;
        check_bound(
            &r,
            &format!(
                "kappa {} start ({}, {}): ",
                params.kappa,
                start.theta(),
                start.phi()
            ),
        )?;
        records.push(r);
        cl = kick_map(&cl, classical);
    }
    Ok(RunMaximum::from_records(&records).expect("at least one kick"))
}

fn run_scan(config: &ScenarioConfig) -> CliResult<(Rows, Vec<String>, Figure)> {
    let spin = spin_of(config);
    let scan = config.scan.as_ref().expect("scan scenarios carry a range");
    let q = config.partitions[0];
    let values = scan.values();
    let start = start_of(config);

    let maxima: Vec<RunMaximum> = match scan.axis {
        ScanAxis::Kappa => values
            .par_iter()
            .map(|&kappa| {
                run_maximum(
                    &build_unitary(KickedTopParams::new(spin, kappa, config.p)),
                    start,
                    q,
                    config.kicks,
                )
            })
            .collect::<CliResult<_>>()?,
        ScanAxis::Phi => {
            let unitary = build_unitary(KickedTopParams::new(spin, config.kappa, config.p));
            values
                .par_iter()
                .map(|&phi| {
                    let angles = BlochAngles::new(start.theta(), phi)?;
                    run_maximum(&unitary, angles, q, config.kicks)
                })
                .collect::<CliResult<_>>()?
        }
    };

    let axis = match scan.axis {
        ScanAxis::Kappa => "kappa",
        ScanAxis::Phi => "phi",
    };
    let peak = values
        .iter()
        .zip(&maxima)
        .max_by(|a, b| a.1.max_entropy.total_cmp(&b.1.max_entropy))
        .expect("non-empty scan");
    let notes = vec![format!(
        "{} {axis} values; largest max S_{q} = {:.6} bits at {axis} = {}",
        values.len(),
        peak.1.max_entropy,
        peak.0
    )];
    let figure = Figure {
        title: format!("max S_{q} over {} kicks, j = {spin}", config.kicks),
        x_label: axis.into(),
        y_label: "bits".into(),
        series: vec![
            Series {
                label: format!("max S_{q}"),
                color: PALETTE[0],
                style: Style::Line,
                points: values
                    .iter()
                    .zip(&maxima)
                    .map(|(&v, m)| (v, m.max_entropy))
                    .collect(),
            },
            Series {
                label: "max bound".into(),
                color: PALETTE[1],
                style: Style::Dashed,
                points: values
                    .iter()
                    .zip(&maxima)
                    .map(|(&v, m)| (v, m.max_bound))
                    .collect(),
            },
        ],
    };
    let rows = values
        .iter()
        .zip(&maxima)
        .map(|(&v, m)| {
            vec![
                fmt_float(v),
                fmt_float(spin.j()),
                fmt_float(m.max_entropy),
                fmt_float(m.max_bound),
                m.argmax_kick.to_string(),
            ]
        })
        .collect();
    Ok((rows, notes, figure))
}

fn run_overlap(config: &ScenarioConfig) -> CliResult<(Rows, Vec<String>, Figure)> {
    let j_max = spin_of(config);
    let start = SpherePoint::from_angles(start_of(config));
    let params = ClassicalParams::new(config.kappa, config.p);
    let orbit = find_periodic_orbit(&start, params, config.max_period).ok_or_else(|| {
        CliError::config(format!(
            "point: start does not close into an orbit within max_period = {} kicks",
            config.max_period
        ))
    })?;
    if orbit.len() < 2 {
        return Err(CliError::config(
            "point: start is a fixed point; the overlap criterion needs a longer orbit",
        ));
    }
    let angles: Vec<BlochAngles> = orbit.iter().map(SpherePoint::to_angles).collect();

    let spins: Vec<Spin> = (1..=j_max.qubits())
        .map(|n| Spin::from_twice(n).expect("n >= 1"))
        .collect();
    let overlaps: Vec<f64> = spins
        .par_iter()
        .map(|&s| orbit_overlap_criterion(&angles, s).map_err(CliError::from))
        .collect::<CliResult<_>>()?;

    // Smallest j from which every larger j in the sweep stays below the threshold.
    let below_from = overlaps
        .iter()
        .rposition(|&o| o >= config.threshold)
        .map_or(Some(0), |i| (i + 1 < spins.len()).then_some(i + 1))
        .map(|i| spins[i]);
    let notes = vec![
        format!("orbit period {}", orbit.len()),
        match below_from {
            Some(s) => format!("max pair overlap < {:e} for all j >= {s}", config.threshold),
            None => format!(
                "max pair overlap stays >= {:e} up to j = {j_max}",
                config.threshold
            ),
        },
    ];
    let figure = Figure {
        title: format!("orbit period {}", orbit.len()),
        x_label: "j".into(),
        y_label: "log10 max pair overlap".into(),
        series: vec![Series {
            label: "overlap".into(),
            color: PALETTE[0],
            style: Style::Line,
            points: spins
                .iter()
                .zip(&overlaps)
                .filter(|(_, &o)| o > 0.0)
                .map(|(s, &o)| (s.j(), o.log10()))
                .collect(),
        }],
    };
    let rows = spins
        .iter()
        .zip(&overlaps)
        .map(|(s, &o)| vec![fmt_float(s.j()), fmt_float(o)])
        .collect();
    Ok((rows, notes, figure))
}
