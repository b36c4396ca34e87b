//! JSON scenario files: parsing, execution, self-checks and emission.
//!
//! A configuration names a `kind` and carries a kind-specific `parameters`
//! object. Complex numbers are written as `[re, im]` pairs and two-level
//! states as pairs of complex numbers.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::Value;

use crate::bloch::{bloch_vector, fidelity, QuantumState};
use crate::coherence::{
    bisector_geometry, correspondence_report, optical_efficiency, BisectorReport, ConstraintLedger,
    CorrespondenceReport, OpticalScenario, QuantumScenario, RotationSolution, OPTICAL_TOL,
};
use crate::error::Error;
use crate::interference::{intensity_sweep, SweepPoint};
use crate::mueller::{
    classify_mueller, mueller_from_jones, rotation_block_check, wigner_rotation, JonesMatrix, MuellerClass,
    MuellerMatrix, DEFAULT_SEED,
};
use crate::numerics::{ComplexMat2, ComplexVec2, RealMat4, Vec3, CLOSED_FORM_TOL};
use crate::polarization::CoherencyMatrix;
use crate::speed_limit::{Route, SpeedLimit, SynthesisResult};
use crate::VERSION;

/// Exit status for a configuration that fails validation.
pub const EXIT_SCHEMA: i32 = 65;
/// Exit status for a failed numerical gate.
pub const EXIT_NUMERICAL: i32 = 70;
/// Exit status for an unreadable input or unwritable output.
pub const EXIT_IO: i32 = 74;

pub const DEFAULT_SAMPLES: usize = 101;
pub const DEFAULT_ENDPOINT_TOLERANCE: f64 = 1e-10;

pub const TRAJECTORY_HEADER: &str = "t,re_c0,im_c0,re_c1,im_c1,bx,by,bz,fidelity";
pub const ROTATION_HEADER: &str = "phi_opt,applied_rotation,j_before,j_after,p,chi,s0,s1_after,s2_after,s3_after";
pub const MUELLER_HEADER: &str = "row,m0,m1,m2,m3";
pub const SWEEP_HEADER: &str = "theta,epsilon,intensity,visibility";
pub const REPORT_HEADER: &str = "name,table,quantum_residual,optical_residual,quantum_pass,optical_pass,pass";

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] Error),
    #[error("I/O error: {0}")]
    Io(String),
}

impl ScenarioError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Schema(_) => EXIT_SCHEMA,
            Self::Numerical(_) => EXIT_NUMERICAL,
            Self::Io(_) => EXIT_IO,
        }
    }
}

pub type ScenarioResult<T> = std::result::Result<T, ScenarioError>;

fn schema(msg: impl Into<String>) -> ScenarioError {
    ScenarioError::Schema(msg.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Evolve,
    OptimizeCoherence,
    Mueller,
    Interference,
    Correspondence,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Evolve => "evolve",
            Self::OptimizeCoherence => "optimize_coherence",
            Self::Mueller => "mueller",
            Self::Interference => "interference",
            Self::Correspondence => "correspondence",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

/// `[re, im]`.
pub type ComplexPair = [f64; 2];
/// `[[re, im], [re, im]]`.
pub type AmplitudePair = [ComplexPair; 2];

fn complex(c: ComplexPair) -> Complex64 {
    Complex64::new(c[0], c[1])
}

fn state(field: &str, a: AmplitudePair) -> ScenarioResult<QuantumState> {
    QuantumState::normalize(ComplexVec2::new(complex(a[0]), complex(a[1])))
        .map_err(|e| schema(format!("parameters.{field}: {e}")))
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

fn default_route() -> Route {
    Route::TimeMinimization
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveParams {
    pub initial: AmplitudePair,
    pub target: AmplitudePair,
    /// Energy gap `E0` for time minimization, energy uncertainty `E` for
    /// uncertainty maximization.
    pub energy: f64,
    #[serde(default = "default_route")]
    pub route: Route,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeParams {
    pub jxx: f64,
    pub jyy: f64,
    pub jxy: ComplexPair,
    /// Rotation to apply instead of the optimum.
    #[serde(default)]
    pub rotation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MuellerParams {
    #[serde(default)]
    pub jones: Option<[[ComplexPair; 2]; 2]>,
    #[serde(default)]
    pub mueller: Option<[[f64; 4]; 4]>,
}

/// Either explicit values or `count` equally spaced points in `[start, stop]`.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Values(Vec<f64>),
    Range { start: f64, stop: f64, count: usize },
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        match self {
            Self::Values(v) => v.clone(),
            Self::Range { start, stop, count } => match count {
                0 => Vec::new(),
                1 => vec![*start],
                n => (0..*n)
                    .map(|k| start + (stop - start) * k as f64 / (n - 1) as f64)
                    .collect(),
            },
        }
    }

    fn scaled(&self, f: f64) -> Self {
        match self {
            Self::Values(v) => Self::Values(v.iter().map(|x| x * f).collect()),
            Self::Range { start, stop, count } => Self::Range {
                start: start * f,
                stop: stop * f,
                count: *count,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterferenceParams {
    pub jxx: f64,
    pub jyy: f64,
    pub jxy: ComplexPair,
    pub theta: Grid,
    pub epsilon: Grid,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrespondenceParams {
    pub initial: AmplitudePair,
    pub target: AmplitudePair,
    /// Energy uncertainty of the quantum evolution.
    pub energy: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    pub jxx: f64,
    pub jyy: f64,
    pub jxy: ComplexPair,
    #[serde(default)]
    pub rotation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Scenario {
    Evolve(EvolveParams),
    OptimizeCoherence(OptimizeParams),
    Mueller(MuellerParams),
    Interference(InterferenceParams),
    Correspondence(CorrespondenceParams),
}

impl Scenario {
    pub fn kind(&self) -> Kind {
        match self {
            Self::Evolve(_) => Kind::Evolve,
            Self::OptimizeCoherence(_) => Kind::OptimizeCoherence,
            Self::Mueller(_) => Kind::Mueller,
            Self::Interference(_) => Kind::Interference,
            Self::Correspondence(_) => Kind::Correspondence,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    kind: Kind,
    parameters: Value,
    #[serde(default)]
    hbar: Option<f64>,
    #[serde(default)]
    tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    output: Option<OutputSpec>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    degrees: bool,
}

/// A validated scenario with its run settings. Angles are stored in radians.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub hbar: f64,
    pub endpoint_tolerance: f64,
    pub seed: u64,
    pub output: OutputSpec,
}

/// Command-line settings that take precedence over the file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub hbar: Option<f64>,
    pub tolerance: Option<f64>,
    pub degrees: bool,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

fn params<T: for<'de> Deserialize<'de>>(v: Value) -> ScenarioResult<T> {
    serde_json::from_value(v).map_err(|e| schema(format!("parameters: {e}")))
}

fn check_finite(name: &str, x: f64) -> ScenarioResult<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(schema(format!("{name} must be finite")))
    }
}

fn check_positive(name: &str, x: f64) -> ScenarioResult<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(schema(format!("{name} must be positive and finite, got {x}")))
    }
}

fn check_samples(n: usize) -> ScenarioResult<()> {
    if n < 2 {
        return Err(schema(format!("parameters.samples must be at least 2, got {n}")));
    }
    Ok(())
}

fn coherency(jxx: f64, jyy: f64, jxy: ComplexPair) -> ScenarioResult<CoherencyMatrix> {
    CoherencyMatrix::new(jxx, jyy, complex(jxy)).map_err(|e| schema(format!("parameters: {e}")))
}

impl ScenarioConfig {
    /// Parses and validates a configuration. When `expected` is given, a
    /// missing `kind` defaults to it and a different `kind` is rejected.
    pub fn parse(text: &str, expected: Option<Kind>, overrides: &Overrides) -> ScenarioResult<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| schema(format!("malformed JSON: {e}")))?;
        Self::from_value(value, expected, overrides)
    }

    pub fn from_value(mut value: Value, expected: Option<Kind>, overrides: &Overrides) -> ScenarioResult<Self> {
        let obj = value
            .as_object_mut()
            .ok_or_else(|| schema("configuration must be a JSON object"))?;
        if let Some(kind) = expected {
            obj.entry("kind").or_insert_with(|| Value::String(kind.name().into()));
        }
        let raw: RawConfig = serde_json::from_value(value).map_err(|e| schema(e.to_string()))?;
        if let Some(kind) = expected {
            if raw.kind != kind {
                return Err(schema(format!(
                    "kind: configuration is `{}` but `{}` was requested",
                    raw.kind.name(),
                    kind.name()
                )));
            }
        }
        let mut endpoint_tolerance = DEFAULT_ENDPOINT_TOLERANCE;
        for (key, &v) in &raw.tolerances {
            match key.as_str() {
                "endpoint" => endpoint_tolerance = v,
                other => return Err(schema(format!("tolerances.{other}: unknown tolerance (expected `endpoint`)"))),
            }
        }
        let endpoint_tolerance = overrides.tolerance.unwrap_or(endpoint_tolerance);
        check_positive("tolerances.endpoint", endpoint_tolerance)?;
        let hbar = overrides.hbar.or(raw.hbar).unwrap_or(1.0);
        check_positive("hbar", hbar)?;

        let to_rad = if raw.degrees || overrides.degrees {
            std::f64::consts::PI / 180.0
        } else {
            1.0
        };
        let scenario = match raw.kind {
            Kind::Evolve => {
                let p: EvolveParams = params(raw.parameters)?;
                state("initial", p.initial)?;
                state("target", p.target)?;
                check_positive("parameters.energy", p.energy)?;
                check_samples(p.samples)?;
                Scenario::Evolve(p)
            }
            Kind::OptimizeCoherence => {
                let mut p: OptimizeParams = params(raw.parameters)?;
                coherency(p.jxx, p.jyy, p.jxy)?;
                if let Some(r) = p.rotation.as_mut() {
                    check_finite("parameters.rotation", *r)?;
                    *r *= to_rad;
                }
                Scenario::OptimizeCoherence(p)
            }
            Kind::Mueller => {
                let p: MuellerParams = params(raw.parameters)?;
                if p.jones.is_some() == p.mueller.is_some() {
                    return Err(schema("parameters: give exactly one of `jones` or `mueller`"));
                }
                Scenario::Mueller(p)
            }
            Kind::Interference => {
                let mut p: InterferenceParams = params(raw.parameters)?;
                coherency(p.jxx, p.jyy, p.jxy)?;
                p.theta = p.theta.scaled(to_rad);
                p.epsilon = p.epsilon.scaled(to_rad);
                for (name, g) in [("theta", &p.theta), ("epsilon", &p.epsilon)] {
                    for x in g.points() {
                        check_finite(&format!("parameters.{name}"), x)?;
                    }
                }
                Scenario::Interference(p)
            }
            Kind::Correspondence => {
                let mut p: CorrespondenceParams = params(raw.parameters)?;
                state("initial", p.initial)?;
                state("target", p.target)?;
                check_positive("parameters.energy", p.energy)?;
                check_samples(p.samples)?;
                coherency(p.jxx, p.jyy, p.jxy)?;
                if let Some(r) = p.rotation.as_mut() {
                    check_finite("parameters.rotation", *r)?;
                    *r *= to_rad;
                }
                Scenario::Correspondence(p)
            }
        };

        let mut output = raw.output.unwrap_or_default();
        if let Some(path) = &overrides.output {
            output.path = Some(path.clone());
        }
        if let Some(format) = overrides.format {
            output.format = format;
        }
        Ok(Self {
            scenario,
            hbar,
            endpoint_tolerance,
            seed: overrides.seed.or(raw.seed).unwrap_or(DEFAULT_SEED),
            output,
        })
    }

    pub fn kind(&self) -> Kind {
        self.scenario.kind()
    }

    fn speed_limit(&self) -> ScenarioResult<SpeedLimit> {
        Ok(SpeedLimit::new(self.hbar)?.with_tolerance(self.endpoint_tolerance)?)
    }
}

/// Parses `{"scenarios": [config, ...]}`.
pub fn parse_batch(text: &str, overrides: &Overrides) -> ScenarioResult<Vec<ScenarioConfig>> {
    let value: Value = serde_json::from_str(text).map_err(|e| schema(format!("malformed JSON: {e}")))?;
    let list = value
        .get("scenarios")
        .and_then(Value::as_array)
        .ok_or_else(|| schema("batch file must be an object with a `scenarios` array"))?;
    list.iter()
        .enumerate()
        .map(|(i, v)| {
            ScenarioConfig::from_value(v.clone(), None, overrides).map_err(|e| match e {
                ScenarioError::Schema(m) => schema(format!("scenarios[{i}]: {m}")),
                other => other,
            })
        })
        .collect()
}

/// One sample of an evolution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrajectoryRecord {
    pub t: f64,
    pub state: ComplexVec2,
    pub bloch: Vec3,
    pub fidelity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvolveOutput {
    pub version: &'static str,
    pub kind: Kind,
    pub hbar: f64,
    pub route: Route,
    pub hamiltonian: ComplexMat2,
    pub t_min: f64,
    pub delta_e: f64,
    pub theta_ab: f64,
    pub endpoint_fidelity: f64,
    pub records: Vec<TrajectoryRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimizeOutput {
    pub version: &'static str,
    pub kind: Kind,
    pub solution: RotationSolution,
    pub applied_rotation: f64,
    pub efficiency_before: f64,
    pub efficiency_after: f64,
    pub ledger: ConstraintLedger,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bisector: Option<BisectorReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MuellerOutput {
    pub version: &'static str,
    pub kind: Kind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jones: Option<ComplexMat2>,
    pub mueller: RealMat4,
    /// Trace-formula image of a unitary Jones matrix.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wigner: Option<RealMat4>,
    pub rotation_block_det: f64,
    pub rotation_block_orthogonality: f64,
    pub classification: MuellerClass,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InterferenceOutput {
    pub version: &'static str,
    pub kind: Kind,
    pub coherency: CoherencyMatrix,
    pub points: Vec<SweepPoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrespondenceOutput {
    pub version: &'static str,
    pub kind: Kind,
    pub t_min: f64,
    pub theta_ab: f64,
    pub eta_qm: f64,
    pub phi_opt: f64,
    pub applied_rotation: f64,
    pub p: f64,
    pub report: CorrespondenceReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ScenarioOutput {
    Evolve(EvolveOutput),
    OptimizeCoherence(OptimizeOutput),
    Mueller(MuellerOutput),
    Interference(InterferenceOutput),
    Correspondence(CorrespondenceOutput),
}

fn violation(what: &'static str, residual: f64) -> ScenarioError {
    ScenarioError::Numerical(Error::InvariantViolation { what, residual })
}

fn trajectory(sl: &SpeedLimit, r: &SynthesisResult, n: usize) -> ScenarioResult<Vec<TrajectoryRecord>> {
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let t = if k + 1 == n {
            r.t_min
        } else {
            r.t_min * k as f64 / (n - 1) as f64
        };
        let s = sl.evolve(r.hamiltonian.matrix(), &r.initial, t)?;
        out.push(TrajectoryRecord {
            t,
            state: *s.amplitudes(),
            bloch: bloch_vector(&s),
            fidelity: fidelity(&s, &r.target),
        });
    }
    Ok(out)
}

fn run_evolve(cfg: &ScenarioConfig, p: &EvolveParams) -> ScenarioResult<EvolveOutput> {
    let sl = cfg.speed_limit()?;
    let a = state("initial", p.initial)?;
    let b = state("target", p.target)?;
    let r = match p.route {
        Route::TimeMinimization => sl.synthesize_min_time_from(&a, &b, p.energy)?,
        Route::UncertaintyMaximization => sl.synthesize_max_uncertainty(&a, &b, p.energy)?,
    };
    let records = trajectory(&sl, &r, p.samples)?;
    let out = EvolveOutput {
        version: VERSION,
        kind: Kind::Evolve,
        hbar: cfg.hbar,
        route: r.route,
        hamiltonian: *r.hamiltonian.matrix(),
        t_min: r.t_min,
        delta_e: r.delta_e,
        theta_ab: r.theta_ab,
        endpoint_fidelity: r.endpoint_fidelity,
        records,
    };
    for w in out.records.windows(2) {
        if !(w[1].t > w[0].t) {
            return Err(violation("trajectory times are not increasing", w[0].t - w[1].t));
        }
    }
    for rec in &out.records {
        let dev = (rec.state.norm_sqr() - 1.0).abs();
        if !rec.state.is_finite() || dev > CLOSED_FORM_TOL {
            return Err(violation("trajectory state lost normalization", dev));
        }
    }
    let last = out.records.last().map_or(0.0, |r| r.fidelity);
    if last < 1.0 - cfg.endpoint_tolerance {
        return Err(violation("final sample misses the target", 1.0 - last));
    }
    Ok(out)
}

fn run_optimize(p: &OptimizeParams) -> ScenarioResult<OptimizeOutput> {
    let j = coherency(p.jxx, p.jyy, p.jxy)?;
    let o = OpticalScenario::new(&j, p.rotation)?;
    let out = OptimizeOutput {
        version: VERSION,
        kind: Kind::OptimizeCoherence,
        solution: o.solution,
        applied_rotation: o.applied_rotation,
        efficiency_before: optical_efficiency(&j)?,
        efficiency_after: optical_efficiency(&o.rotated())?,
        ledger: o.ledger,
        bisector: bisector_geometry(&j).ok(),
    };
    let gap = (out.solution.j_after - out.solution.p).abs();
    if gap > OPTICAL_TOL {
        return Err(violation("optimal frame does not reach |j| = P", gap));
    }
    let drift = (out.ledger.i_pol_after - out.ledger.i_pol_before).abs();
    if drift > OPTICAL_TOL * j.trace().max(1.0) {
        return Err(violation("polarized intensity changed under rotation", drift));
    }
    Ok(out)
}

fn run_mueller(cfg: &ScenarioConfig, p: &MuellerParams) -> ScenarioResult<MuellerOutput> {
    let (jones, mueller, wigner) = match (&p.jones, &p.mueller) {
        (Some(m), _) => {
            let m = ComplexMat2::new(complex(m[0][0]), complex(m[0][1]), complex(m[1][0]), complex(m[1][1]));
            let jm = JonesMatrix::new(m).map_err(|e| schema(format!("parameters.jones: {e}")))?;
            let lifted = mueller_from_jones(&jm)?;
            let wigner = if jm.is_unitary() {
                let w = wigner_rotation(&jm)?;
                let d = w.max_abs_diff(&lifted);
                if d > CLOSED_FORM_TOL {
                    return Err(violation("trace formula disagrees with the Kronecker lift", d));
                }
                Some(*w.matrix())
            } else {
                None
            };
            (Some(m), lifted, wigner)
        }
        (None, Some(m)) => {
            let mm = MuellerMatrix::new(RealMat4(*m)).map_err(|e| schema(format!("parameters.mueller: {e}")))?;
            (None, mm, None)
        }
        (None, None) => return Err(schema("parameters: give exactly one of `jones` or `mueller`")),
    };
    let (det, ortho) = rotation_block_check(&mueller);
    Ok(MuellerOutput {
        version: VERSION,
        kind: Kind::Mueller,
        jones,
        mueller: *mueller.matrix(),
        wigner,
        rotation_block_det: det,
        rotation_block_orthogonality: ortho,
        classification: classify_mueller(&mueller, cfg.seed)?,
        seed: cfg.seed,
    })
}

fn run_interference(p: &InterferenceParams) -> ScenarioResult<InterferenceOutput> {
    let j = coherency(p.jxx, p.jyy, p.jxy)?;
    let points = intensity_sweep(&j, &p.theta.points(), &p.epsilon.points())?;
    for pt in &points {
        if !(pt.intensity.is_finite() && pt.intensity >= 0.0) {
            return Err(violation("negative or non-finite intensity", pt.intensity));
        }
        if !(0.0..=1.0 + CLOSED_FORM_TOL).contains(&pt.visibility) {
            return Err(violation("visibility outside [0, 1]", pt.visibility));
        }
    }
    Ok(InterferenceOutput {
        version: VERSION,
        kind: Kind::Interference,
        coherency: j,
        points,
    })
}

fn run_correspondence(cfg: &ScenarioConfig, p: &CorrespondenceParams) -> ScenarioResult<CorrespondenceOutput> {
    let sl = cfg.speed_limit()?;
    let a = state("initial", p.initial)?;
    let b = state("target", p.target)?;
    let q = QuantumScenario::optimal(&sl, &a, &b, p.energy, p.samples)?;
    let j = coherency(p.jxx, p.jyy, p.jxy)?;
    let o = OpticalScenario::new(&j, p.rotation)?;
    let report = correspondence_report(&q, &o, cfg.hbar)?;
    for r in &report.rows {
        if !(r.quantum_residual.is_finite() && r.optical_residual.is_finite()) {
            return Err(violation("non-finite residual in correspondence report", f64::NAN));
        }
    }
    Ok(CorrespondenceOutput {
        version: VERSION,
        kind: Kind::Correspondence,
        t_min: q.synthesis.t_min,
        theta_ab: q.synthesis.theta_ab,
        eta_qm: q.efficiency.eta_qm,
        phi_opt: o.solution.phi_opt,
        applied_rotation: o.applied_rotation,
        p: o.solution.p,
        report,
    })
}

/// Runs one scenario and checks its outputs.
pub fn run(cfg: &ScenarioConfig) -> ScenarioResult<ScenarioOutput> {
    Ok(match &cfg.scenario {
        Scenario::Evolve(p) => ScenarioOutput::Evolve(run_evolve(cfg, p)?),
        Scenario::OptimizeCoherence(p) => ScenarioOutput::OptimizeCoherence(run_optimize(p)?),
        Scenario::Mueller(p) => ScenarioOutput::Mueller(run_mueller(cfg, p)?),
        Scenario::Interference(p) => ScenarioOutput::Interference(run_interference(p)?),
        Scenario::Correspondence(p) => ScenarioOutput::Correspondence(run_correspondence(cfg, p)?),
    })
}

/// Runs independent scenarios on separate threads; results keep input order.
pub fn run_batch(configs: &[ScenarioConfig]) -> Vec<ScenarioResult<ScenarioOutput>> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = configs.iter().map(|c| scope.spawn(move || run(c))).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(violation("scenario thread panicked", f64::NAN))))
            .collect()
    })
}

/// Pretty JSON with every float written to 17 significant digits.
struct SignificantFormatter<'a>(PrettyFormatter<'a>);

impl Formatter for SignificantFormatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serializes `value` as pretty JSON with 17 significant digits per float.
pub fn emit_json<T: Serialize>(value: &T) -> ScenarioResult<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SignificantFormatter(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .map_err(|e| ScenarioError::Io(format!("serialization failed: {e}")))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| ScenarioError::Io(e.to_string()))
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv<I: IntoIterator<Item = Vec<String>>>(header: &str, rows: I) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Trajectory table with [`TRAJECTORY_HEADER`].
pub fn trajectory_csv(records: &[TrajectoryRecord]) -> String {
    csv(
        TRAJECTORY_HEADER,
        records.iter().map(|r| {
            let [c0, c1] = r.state.0;
            [r.t, c0.re, c0.im, c1.re, c1.im, r.bloch[0], r.bloch[1], r.bloch[2], r.fidelity]
                .iter()
                .map(|x| num(*x))
                .collect()
        }),
    )
}

/// CSV rendering of any scenario output.
pub fn emit_csv(output: &ScenarioOutput) -> String {
    match output {
        ScenarioOutput::Evolve(o) => trajectory_csv(&o.records),
        ScenarioOutput::OptimizeCoherence(o) => {
            let s = &o.solution;
            let a = o.ledger.after;
            let row = [s.phi_opt, o.applied_rotation, s.j_before, s.j_after, s.p, s.chi, a.s0(), a.s1(), a.s2(), a.s3()];
            csv(ROTATION_HEADER, [row.iter().map(|x| num(*x)).collect()])
        }
        ScenarioOutput::Mueller(o) => csv(
            MUELLER_HEADER,
            o.mueller.0.iter().enumerate().map(|(i, r)| {
                std::iter::once(i.to_string()).chain(r.iter().map(|x| num(*x))).collect()
            }),
        ),
        ScenarioOutput::Interference(o) => csv(
            SWEEP_HEADER,
            o.points
                .iter()
                .map(|p| [p.theta, p.epsilon, p.intensity, p.visibility].iter().map(|x| num(*x)).collect()),
        ),
        ScenarioOutput::Correspondence(o) => csv(
            REPORT_HEADER,
            o.report.rows.iter().map(|r| {
                vec![
                    r.name.to_string(),
                    r.table.to_string(),
                    num(r.quantum_residual),
                    num(r.optical_residual),
                    r.quantum_pass.to_string(),
                    r.optical_pass.to_string(),
                    r.pass.to_string(),
                ]
            }),
        ),
    }
}

pub fn render(output: &ScenarioOutput, format: Format) -> ScenarioResult<String> {
    match format {
        Format::Json => emit_json(output),
        Format::Csv => Ok(emit_csv(output)),
    }
}

/// Writes through a sibling temporary file so a failed write leaves no
/// partial output behind.
pub fn write_file(path: &Path, contents: &str) -> ScenarioResult<()> {
    let io_err = |e: io::Error| ScenarioError::Io(format!("{}: {e}", path.display()));
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, contents).map_err(io_err)?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        io_err(e)
    })
}

/// Renders `output` per `spec`, writing to its path or returning the text.
pub fn emit(output: &ScenarioOutput, spec: &OutputSpec) -> ScenarioResult<Option<String>> {
    let text = render(output, spec.format)?;
    match &spec.path {
        Some(p) => write_file(p, &text).map(|_| None),
        None => Ok(Some(text)),
    }
}

/// Short human-readable summary of an output.
pub fn summary(output: &ScenarioOutput) -> String {
    let mut s = String::new();
    match output {
        ScenarioOutput::Evolve(o) => {
            let _ = write!(
                s,
                "t_min = {:.10}, endpoint fidelity = {:.12}, {} samples",
                o.t_min,
                o.endpoint_fidelity,
                o.records.len()
            );
        }
        ScenarioOutput::OptimizeCoherence(o) => {
            let _ = write!(
                s,
                "phi_opt = {:.10}, |j| {:.10} -> {:.10}, P = {:.10}",
                o.solution.phi_opt, o.solution.j_before, o.solution.j_after, o.solution.p
            );
        }
        ScenarioOutput::Mueller(o) => {
            let _ = write!(s, "classification = {:?}", o.classification);
        }
        ScenarioOutput::Interference(o) => {
            let _ = write!(s, "{} sweep points", o.points.len());
        }
        ScenarioOutput::Correspondence(o) => {
            s.push_str(&o.report.to_table());
            let _ = write!(s, "all rows pass: {}", o.report.all_pass);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const EVOLVE: &str = r#"{"kind": "evolve", "parameters": {
        "initial": [[1, 0], [0, 0]], "target": [[0.7071067811865476, 0], [0.7071067811865476, 0]],
        "energy": 1.0 }}"#;

    #[test]
    fn evolve_reaches_target() {
        let cfg = ScenarioConfig::parse(EVOLVE, None, &Overrides::default()).unwrap();
        let ScenarioOutput::Evolve(o) = run(&cfg).unwrap() else { panic!() };
        assert_eq!(o.records.len(), 101);
        assert!(o.records.last().unwrap().fidelity >= 1.0 - 1e-9);
        assert_eq!(o.version, VERSION);
    }

    #[test]
    fn kind_defaults_and_mismatch() {
        let text = r#"{"parameters": {"jxx": 3, "jyy": 1, "jxy": [1, 0]}}"#;
        let cfg = ScenarioConfig::parse(text, Some(Kind::OptimizeCoherence), &Overrides::default()).unwrap();
        assert_eq!(cfg.kind(), Kind::OptimizeCoherence);
        let e = ScenarioConfig::parse(EVOLVE, Some(Kind::Mueller), &Overrides::default()).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_SCHEMA);
    }

    #[test]
    fn schema_errors_name_the_field() {
        for (text, needle) in [
            ("{not json", "malformed"),
            (r#"{"kind": "evolve", "parameters": {"initial": [[1,0],[0,0]], "target": [[1,0],[0,0]]}}"#, "energy"),
            (r#"{"kind": "mueller", "parameters": {}}"#, "exactly one"),
            (r#"{"kind": "optimize_coherence", "parameters": {"jxx": 1, "jyy": 1, "jxy": [2, 0]}}"#, "parameters"),
            (r#"{"kind": "evolve", "parameters": {}, "tolerances": {"fuzz": 1}}"#, "fuzz"),
            (r#"{"kind": "evolve", "hbar": -1, "parameters": {"initial": [[1,0],[0,0]], "target": [[0,0],[1,0]], "energy": 1}}"#, "hbar"),
            (r#"{"kind": "teleport", "parameters": {}}"#, "teleport"),
        ] {
            let e = ScenarioConfig::parse(text, None, &Overrides::default()).unwrap_err();
            assert_eq!(e.exit_code(), EXIT_SCHEMA, "{text}");
            assert!(e.to_string().contains(needle), "{e} lacks {needle}");
        }
    }

    #[test]
    fn degenerate_endpoints_are_numerical_failures() {
        let text = r#"{"kind": "evolve", "parameters": {"initial": [[1,0],[0,0]], "target": [[1,0],[0,0]], "energy": 1}}"#;
        let cfg = ScenarioConfig::parse(text, None, &Overrides::default()).unwrap();
        assert_eq!(run(&cfg).unwrap_err().exit_code(), EXIT_NUMERICAL);
    }

    #[test]
    fn degrees_convert_at_the_boundary() {
        let text = r#"{"kind": "optimize_coherence", "degrees": true, "parameters": {"jxx": 3, "jyy": 1, "jxy": [1, 0], "rotation": -22.5}}"#;
        let cfg = ScenarioConfig::parse(text, None, &Overrides::default()).unwrap();
        let ScenarioOutput::OptimizeCoherence(o) = run(&cfg).unwrap() else { panic!() };
        assert!((o.applied_rotation + std::f64::consts::FRAC_PI_8).abs() < 1e-15);
        assert!((o.efficiency_after - 1.0).abs() < 1e-9);
    }

    #[test]
    fn json_floats_have_17_digits() {
        let s = emit_json(&[0.1_f64, -2.0]).unwrap();
        assert!(s.contains("1.0000000000000001e-1"));
        assert!(s.contains("-2.0000000000000000e0"));
        let back: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, vec![0.1, -2.0]);
    }

    #[test]
    fn csv_shapes() {
        assert_eq!(trajectory_csv(&[]), format!("{TRAJECTORY_HEADER}\n"));
        let rec = TrajectoryRecord {
            t: 0.0,
            state: ComplexVec2::real(1.0, 0.0),
            bloch: [0.0, 0.0, 1.0],
            fidelity: 0.5,
        };
        assert_eq!(trajectory_csv(&[rec]).lines().count(), 2);
    }

    #[test]
    fn grid_points() {
        let g = Grid::Range { start: 0.0, stop: 1.0, count: 5 };
        assert_eq!(g.points(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(Grid::Range { start: 2.0, stop: 3.0, count: 1 }.points(), vec![2.0]);
    }

    #[test]
    fn batch_matches_sequential_runs() {
        let text = format!(
            r#"{{"scenarios": [{EVOLVE}, {{"kind": "optimize_coherence", "parameters": {{"jxx": 3, "jyy": 1, "jxy": [1, 0]}}}}]}}"#
        );
        let cfgs = parse_batch(&text, &Overrides::default()).unwrap();
        let batch = run_batch(&cfgs);
        for (c, r) in cfgs.iter().zip(&batch) {
            let a = emit_json(r.as_ref().unwrap()).unwrap();
            let b = emit_json(&run(c).unwrap()).unwrap();
            assert_eq!(a, b);
        }
    }
}
