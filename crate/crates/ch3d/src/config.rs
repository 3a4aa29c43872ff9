//! Run configuration: TOML parsing with complete error reporting,
//! serialization, and conversion into the typed pieces the solver consumes.
//!
//! Parsing rejects unknown keys (with a nearest-key suggestion) and reports
//! every validation problem at once rather than stopping at the first.

use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{Scheme, SolverConfig};
use crate::grid::Grid;
use crate::init::InitialData;
use crate::ops::DealiasRule;
use crate::potential::Potential;

/// Environment variable consulted for the default output directory.
pub const OUTPUT_DIR_ENV: &str = "CH3D_OUT_DIR";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub grid: GridSection,
    pub potential: PotentialSection,
    pub initial: InitialSection,
    pub solver: SolverSection,
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSection {
    pub n: usize,
    pub l: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<[f64; 5]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialKind {
    Random,
    Modes,
    TanhFront,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeEntry {
    pub k: [i64; 3],
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InitialSection {
    pub kind: InitialKind,
    pub mean: f64,
    pub amplitude: f64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smooth_sigma: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub modes: Vec<ModeEntry>,
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverSection {
    pub scheme: Scheme,
    pub dt: f64,
    pub t_final: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_cutoff: Option<f64>,
    pub dealias: DealiasRule,
    pub record_every: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hs: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    pub snapshot_every: usize,
    pub csv: String,
}

impl serde::Serialize for Scheme {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl serde::Serialize for DealiasRule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl RunConfig {
    pub fn build_grid(&self) -> Result<Arc<Grid>> {
        Ok(Arc::new(Grid::new(self.grid.n, self.grid.l)?))
    }

    pub fn build_potential(&self) -> Result<Potential> {
        match (&self.potential.name, &self.potential.coefficients) {
            (Some(name), None) => match name.as_str() {
                "double_well" => Ok(Potential::double_well()),
                "zero" => Ok(Potential::zero()),
                other => Err(Error::InvalidPotential(format!(
                    "unknown potential name '{other}'"
                ))),
            },
            (None, Some(a)) => Potential::polynomial(*a),
            _ => Err(Error::InvalidPotential(
                "give exactly one of potential.name or potential.coefficients".into(),
            )),
        }
    }

    pub fn initial_data(&self) -> InitialData {
        match self.initial.kind {
            InitialKind::Random => InitialData::Random {
                mean: self.initial.mean,
                amplitude: self.initial.amplitude,
                seed: self.initial.seed,
                smooth_sigma: self.initial.smooth_sigma,
            },
            InitialKind::Modes => InitialData::Modes {
                mean: self.initial.mean,
                modes: self
                    .initial
                    .modes
                    .iter()
                    .map(|m| (m.k, m.amplitude))
                    .collect(),
            },
            InitialKind::TanhFront => InitialData::TanhFront {
                width: self.initial.width,
            },
        }
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            scheme: self.solver.scheme,
            dt: self.solver.dt,
            t_final: self.solver.t_final,
            n_cutoff: self.solver.n_cutoff,
            dealias: self.solver.dealias,
            record_every: self.solver.record_every,
            seed: self.initial.seed,
            hs: self.solver.hs,
        }
    }

    /// Output directory after the flag > config > environment > `.` chain.
    pub fn output_dir(&self) -> String {
        self.output
            .dir
            .clone()
            .or_else(|| std::env::var(OUTPUT_DIR_ENV).ok())
            .unwrap_or_else(|| ".".into())
    }
}

pub fn serialize_config(config: &RunConfig) -> String {
    toml::to_string_pretty(config).expect("config serializes")
}

/// Collects every problem found while reading a config text.
struct Collector {
    errors: Vec<String>,
}

impl Collector {
    fn push(&mut self, msg: impl Into<String>) {
        self.errors.push(msg.into());
    }
}

fn levenshtein(a: &str, b: &str) -> usize {
    let (a, b): (Vec<char>, Vec<char>) = (a.chars().collect(), b.chars().collect());
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.iter().enumerate() {
        let mut row = vec![i + 1];
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            row.push(sub.min(prev[j + 1] + 1).min(row[j] + 1));
        }
        prev = row;
    }
    prev[b.len()]
}

fn unknown_key_message(section: &str, key: &str, known: &[&str]) -> String {
    let best = known
        .iter()
        .map(|k| (levenshtein(key, k), *k))
        .min()
        .filter(|(d, _)| *d <= 2);
    match best {
        Some((_, suggestion)) => {
            format!("unknown key '{section}{key}' (did you mean '{suggestion}'?)")
        }
        None => format!("unknown key '{section}{key}'"),
    }
}

struct Section<'a> {
    prefix: String,
    table: Option<&'a toml::Table>,
}

impl<'a> Section<'a> {
    fn check_keys(&self, known: &[&str], c: &mut Collector) {
        if let Some(t) = self.table {
            for key in t.keys() {
                if !known.contains(&key.as_str()) {
                    c.push(unknown_key_message(&self.prefix, key, known));
                }
            }
        }
    }

    fn value(&self, key: &str) -> Option<&'a toml::Value> {
        self.table.and_then(|t| t.get(key))
    }

    fn f64(&self, key: &str, c: &mut Collector) -> Option<f64> {
        match self.value(key) {
            Some(toml::Value::Float(v)) => Some(*v),
            Some(toml::Value::Integer(v)) => Some(*v as f64),
            Some(_) => {
                c.push(format!("key '{}{key}' must be a number", self.prefix));
                None
            }
            None => None,
        }
    }

    fn integer(&self, key: &str, c: &mut Collector) -> Option<i64> {
        match self.value(key) {
            Some(toml::Value::Integer(v)) => Some(*v),
            Some(_) => {
                c.push(format!("key '{}{key}' must be an integer", self.prefix));
                None
            }
            None => None,
        }
    }

    fn string(&self, key: &str, c: &mut Collector) -> Option<String> {
        match self.value(key) {
            Some(toml::Value::String(v)) => Some(v.clone()),
            Some(_) => {
                c.push(format!("key '{}{key}' must be a string", self.prefix));
                None
            }
            None => None,
        }
    }

    fn require<T>(&self, key: &str, got: Option<T>, c: &mut Collector) -> Option<T> {
        if got.is_none() && self.value(key).is_none() {
            c.push(format!("missing required key '{}{key}'", self.prefix));
        }
        got
    }
}

fn section<'a>(root: &'a toml::Table, name: &str, c: &mut Collector) -> Section<'a> {
    match root.get(name) {
        Some(toml::Value::Table(t)) => Section {
            prefix: format!("{name}."),
            table: Some(t),
        },
        Some(_) => {
            c.push(format!("'{name}' must be a table"));
            Section {
                prefix: format!("{name}."),
                table: None,
            }
        }
        None => Section {
            prefix: format!("{name}."),
            table: None,
        },
    }
}

/// Parses and validates a config text, reporting every error found.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let root: toml::Table = text
        .parse()
        .map_err(|e| Error::Config(vec![format!("TOML syntax error: {e}")]))?;

    let mut c = Collector { errors: Vec::new() };
    const SECTIONS: &[&str] = &["grid", "potential", "initial", "solver", "output"];
    for key in root.keys() {
        if !SECTIONS.contains(&key.as_str()) {
            c.push(unknown_key_message("", key, SECTIONS));
        }
    }
    for required in ["grid", "solver", "potential", "initial"] {
        if !root.contains_key(required) {
            c.push(format!("missing required section '[{required}]'"));
        }
    }

    // [grid]
    let grid_s = section(&root, "grid", &mut c);
    grid_s.check_keys(&["n", "l"], &mut c);
    let n = grid_s.require("n", grid_s.integer("n", &mut c), &mut c);
    let l = grid_s.require("l", grid_s.f64("l", &mut c), &mut c);
    if let Some(n) = n {
        if n < 4 || n % 2 != 0 {
            c.push(format!("grid.n must be even and >= 4, got {n}"));
        }
    }
    if let Some(l) = l {
        if !(l > 0.0) {
            c.push(format!("grid.l must be positive, got {l}"));
        }
    }

    // [potential]
    let pot_s = section(&root, "potential", &mut c);
    pot_s.check_keys(&["name", "coefficients"], &mut c);
    let pot_name = pot_s.string("name", &mut c);
    let pot_coeffs: Option<[f64; 5]> = match pot_s.value("coefficients") {
        Some(toml::Value::Array(a)) => {
            let nums: Vec<f64> = a
                .iter()
                .filter_map(|v| match v {
                    toml::Value::Float(f) => Some(*f),
                    toml::Value::Integer(i) => Some(*i as f64),
                    _ => None,
                })
                .collect();
            if nums.len() != a.len() || nums.len() != 5 {
                c.push("potential.coefficients must be 5 numbers [a0, a1, a2, a3, a4]");
                None
            } else {
                let arr = [nums[0], nums[1], nums[2], nums[3], nums[4]];
                if !(arr[3] > 0.0) {
                    c.push(format!(
                        "potential.coefficients needs a3 > 0, got {}",
                        arr[3]
                    ));
                }
                if !(arr[1] < 0.0) {
                    c.push(format!(
                        "potential.coefficients needs a1 < 0, got {}",
                        arr[1]
                    ));
                }
                Some(arr)
            }
        }
        Some(_) => {
            c.push("potential.coefficients must be an array");
            None
        }
        None => None,
    };
    match (&pot_name, &pot_coeffs) {
        (Some(name), None) => {
            if !["double_well", "zero"].contains(&name.as_str()) {
                c.push(format!(
                    "potential.name '{name}' is not known (use double_well or zero, or give coefficients)"
                ));
            }
        }
        (None, Some(_)) => {}
        (Some(_), Some(_)) => {
            c.push("give only one of potential.name and potential.coefficients")
        }
        (None, None) => {
            if pot_s.table.is_some() {
                c.push("potential needs either a name or a coefficient list");
            }
        }
    }

    // [initial]
    let init_s = section(&root, "initial", &mut c);
    init_s.check_keys(
        &["kind", "mean", "amplitude", "seed", "smooth_sigma", "modes", "width"],
        &mut c,
    );
    let kind_str = init_s.require("kind", init_s.string("kind", &mut c), &mut c);
    let kind = match kind_str.as_deref() {
        Some("random") => Some(InitialKind::Random),
        Some("modes") => Some(InitialKind::Modes),
        Some("tanh_front") => Some(InitialKind::TanhFront),
        Some(other) => {
            c.push(format!(
                "initial.kind '{other}' is not one of random, modes, tanh_front"
            ));
            None
        }
        None => None,
    };
    let mean = init_s.f64("mean", &mut c).unwrap_or(0.0);
    let amplitude = init_s.f64("amplitude", &mut c).unwrap_or(0.1);
    let seed = match init_s.integer("seed", &mut c) {
        Some(s) if s < 0 => {
            c.push(format!("initial.seed must be nonnegative, got {s}"));
            0
        }
        Some(s) => s as u64,
        None => 0,
    };
    let smooth_sigma = init_s.f64("smooth_sigma", &mut c);
    if let Some(s) = smooth_sigma {
        if !(s > 0.0) {
            c.push(format!("initial.smooth_sigma must be positive, got {s}"));
        }
    }
    let width = init_s.f64("width", &mut c).unwrap_or(2.0);
    if !(width > 0.0) {
        c.push(format!("initial.width must be positive, got {width}"));
    }
    let modes: Vec<ModeEntry> = match init_s.value("modes") {
        Some(toml::Value::Array(entries)) => {
            let mut out = Vec::new();
            for (i, entry) in entries.iter().enumerate() {
                match entry {
                    toml::Value::Table(t) => {
                        let k = t.get("k").and_then(|v| v.as_array()).and_then(|a| {
                            let ints: Vec<i64> =
                                a.iter().filter_map(|v| v.as_integer()).collect();
                            (ints.len() == 3).then(|| [ints[0], ints[1], ints[2]])
                        });
                        let amp = t.get("amplitude").and_then(|v| match v {
                            toml::Value::Float(f) => Some(*f),
                            toml::Value::Integer(n) => Some(*n as f64),
                            _ => None,
                        });
                        match (k, amp) {
                            (Some(k), Some(amplitude)) => out.push(ModeEntry { k, amplitude }),
                            _ => c.push(format!(
                                "initial.modes[{i}] needs k = [k1, k2, k3] and amplitude"
                            )),
                        }
                    }
                    _ => c.push(format!("initial.modes[{i}] must be a table")),
                }
            }
            out
        }
        Some(_) => {
            c.push("initial.modes must be an array of tables");
            Vec::new()
        }
        None => Vec::new(),
    };
    if kind == Some(InitialKind::Modes) && modes.is_empty() {
        c.push("initial.kind = 'modes' needs a nonempty initial.modes list");
    }

    // [solver]
    let sol_s = section(&root, "solver", &mut c);
    sol_s.check_keys(
        &["scheme", "dt", "t_final", "n_cutoff", "dealias", "record_every", "hs"],
        &mut c,
    );
    let scheme_str = sol_s.require("scheme", sol_s.string("scheme", &mut c), &mut c);
    let scheme = scheme_str.as_deref().and_then(|s| match Scheme::from_str(s) {
        Ok(v) => Some(v),
        Err(e) => {
            c.push(format!("solver.scheme: {e}"));
            None
        }
    });
    let dt = sol_s.require("dt", sol_s.f64("dt", &mut c), &mut c);
    if let Some(dt) = dt {
        if !(dt > 0.0) {
            c.push(format!("solver.dt must be positive, got {dt}"));
        }
    }
    let t_final = sol_s.require("t_final", sol_s.f64("t_final", &mut c), &mut c);
    if let Some(t) = t_final {
        if !(t >= 0.0) {
            c.push(format!("solver.t_final must be nonnegative, got {t}"));
        }
    }
    let n_cutoff = sol_s.f64("n_cutoff", &mut c);
    if let Some(r) = n_cutoff {
        if !(r > 0.0) {
            c.push(format!("solver.n_cutoff must be positive, got {r}"));
        }
    }
    let dealias = match sol_s.string("dealias", &mut c) {
        Some(s) => match DealiasRule::from_str(&s) {
            Ok(r) => r,
            Err(e) => {
                c.push(format!("solver.dealias: {e}"));
                DealiasRule::TwoThirds
            }
        },
        None => DealiasRule::TwoThirds,
    };
    let record_every = match sol_s.integer("record_every", &mut c) {
        Some(r) if r >= 1 => r as usize,
        Some(r) => {
            c.push(format!("solver.record_every must be >= 1, got {r}"));
            1
        }
        None => 10,
    };
    let hs = sol_s.f64("hs", &mut c);

    // [output]
    let out_s = section(&root, "output", &mut c);
    out_s.check_keys(&["dir", "snapshot_every", "csv"], &mut c);
    let dir = out_s.string("dir", &mut c);
    let snapshot_every = match out_s.integer("snapshot_every", &mut c) {
        Some(s) if s >= 0 => s as usize,
        Some(s) => {
            c.push(format!("output.snapshot_every must be >= 0, got {s}"));
            0
        }
        None => 0,
    };
    let csv = out_s.string("csv", &mut c).unwrap_or_else(|| "diagnostics.csv".into());
    if csv.is_empty() {
        c.push("output.csv must not be empty");
    }

    if !c.errors.is_empty() {
        return Err(Error::Config(c.errors));
    }

    Ok(RunConfig {
        grid: GridSection {
            n: n.unwrap() as usize,
            l: l.unwrap(),
        },
        potential: PotentialSection {
            name: pot_name,
            coefficients: pot_coeffs,
        },
        initial: InitialSection {
            kind: kind.unwrap(),
            mean,
            amplitude,
            seed,
            smooth_sigma,
            modes,
            width,
        },
        solver: SolverSection {
            scheme: scheme.unwrap(),
            dt: dt.unwrap(),
            t_final: t_final.unwrap(),
            n_cutoff,
            dealias,
            record_every,
            hs,
        },
        output: OutputSection {
            dir,
            snapshot_every,
            csv,
        },
    })
}
