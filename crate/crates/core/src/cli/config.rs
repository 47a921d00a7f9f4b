//! `RunConfig` and its flat `key = value` file format.

use std::fmt::Write as _;
use std::path::PathBuf;

use crate::disorder::Target;
use crate::experiments::{DEFAULT_WINDOW, DESK_CONFIGS, DESK_POOL, DESK_STATES};
use crate::quadrature::DEFAULT_NODES;
use crate::sampling::Family;
use crate::states::Field;

pub const SEED_ENV: &str = "HAAR_COHERENCE_SEED";
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Typical,
    Disorder,
    SweepDim,
    SweepStrength,
    Conditional,
    Analytic,
    Fit,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Typical,
        Command::Disorder,
        Command::SweepDim,
        Command::SweepStrength,
        Command::Conditional,
        Command::Analytic,
        Command::Fit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Typical => "typical",
            Command::Disorder => "disorder",
            Command::SweepDim => "sweep-dim",
            Command::SweepStrength => "sweep-strength",
            Command::Conditional => "conditional",
            Command::Analytic => "analytic",
            Command::Fit => "fit",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }
}

/// Full configuration of one CLI run, after config-file and flag merging.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub dims: Vec<usize>,
    pub field: Field,
    pub n_states: usize,
    pub family: Family,
    pub gammas: Vec<f64>,
    pub target: Target,
    pub configs_per_state: usize,
    pub seed: u64,
    pub nodes: usize,
    pub allow_dim7: bool,
    pub m_in: Vec<f64>,
    pub window: f64,
    pub pool: usize,
    pub out: PathBuf,
    /// 0 lets rayon pick.
    pub workers: usize,
    pub input: Option<PathBuf>,
}

impl RunConfig {
    pub fn defaults(command: Command) -> Self {
        let dims = match command {
            Command::SweepDim => (2..=7).collect(),
            Command::Analytic => (2..=6).collect(),
            _ => vec![2],
        };
        let gammas = match command {
            Command::SweepStrength => vec![0.1, 0.2, 0.3, 0.4, 0.5],
            _ => vec![0.5],
        };
        Self {
            command,
            dims,
            field: Field::Complex,
            n_states: DESK_STATES,
            family: Family::Gaussian,
            gammas,
            target: Target::RealParts,
            configs_per_state: DESK_CONFIGS,
            seed: seed_from_env().unwrap_or(DEFAULT_SEED),
            nodes: DEFAULT_NODES,
            allow_dim7: false,
            m_in: vec![0.55, 0.65, 0.75, 0.85, 0.95],
            window: DEFAULT_WINDOW,
            pool: DESK_POOL,
            out: PathBuf::from("out"),
            workers: 0,
            input: None,
        }
    }

    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let join_f = |v: &[f64]| {
            v.iter()
                .map(|x| format!("{x:?}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        let dims = self
            .dims
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(",");
        let _ = writeln!(s, "command = {}", self.command.name());
        let _ = writeln!(s, "dims = {dims}");
        let _ = writeln!(s, "field = {}", self.field);
        let _ = writeln!(s, "n = {}", self.n_states);
        let _ = writeln!(s, "family = {}", self.family);
        let _ = writeln!(s, "gammas = {}", join_f(&self.gammas));
        let _ = writeln!(s, "target = {}", self.target);
        let _ = writeln!(s, "m = {}", self.configs_per_state);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "nodes = {}", self.nodes);
        let _ = writeln!(s, "allow_d7 = {}", self.allow_dim7);
        let _ = writeln!(s, "m_in = {}", join_f(&self.m_in));
        let _ = writeln!(s, "window = {:?}", self.window);
        let _ = writeln!(s, "pool = {}", self.pool);
        let _ = writeln!(s, "out = {}", self.out.display());
        let _ = writeln!(s, "workers = {}", self.workers);
        if let Some(input) = &self.input {
            let _ = writeln!(s, "input = {}", input.display());
        }
        s
    }

    /// Parses a config file. `command` may be omitted when `fallback` is given.
    pub fn from_config_str(text: &str, fallback: Option<Command>) -> Result<Self, String> {
        let mut pairs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected `key = value`", lineno + 1))?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        let command = match pairs.iter().find(|(k, _)| k == "command") {
            Some((_, v)) => {
                Command::parse(v).ok_or_else(|| format!("command: unknown subcommand `{v}`"))?
            }
            None => fallback.ok_or("command: missing")?,
        };
        let mut cfg = Self::defaults(command);
        for (k, v) in &pairs {
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let bad = |what: &str| format!("{key}: invalid {what} `{value}`");
        match key {
            "command" => {
                let c = Command::parse(value).ok_or_else(|| bad("subcommand"))?;
                if c != self.command {
                    return Err(format!(
                        "command: config is for `{value}`, not `{}`",
                        self.command.name()
                    ));
                }
            }
            "dims" | "dim" => self.dims = parse_dims(value).map_err(|_| bad("dimension list"))?,
            "field" => self.field = Field::parse(value).ok_or_else(|| bad("field"))?,
            "n" => self.n_states = parse_count(value).ok_or_else(|| bad("count"))?,
            "family" => self.family = Family::parse(value).ok_or_else(|| bad("family"))?,
            "gammas" | "gamma" => {
                self.gammas = parse_floats(value).ok_or_else(|| bad("number list"))?
            }
            "target" => self.target = Target::parse(value).ok_or_else(|| bad("target"))?,
            "m" => self.configs_per_state = parse_count(value).ok_or_else(|| bad("count"))?,
            "seed" => self.seed = value.parse().map_err(|_| bad("seed"))?,
            "nodes" => self.nodes = value.parse().map_err(|_| bad("count"))?,
            "allow_d7" => self.allow_dim7 = value.parse().map_err(|_| bad("bool"))?,
            "m_in" => self.m_in = parse_floats(value).ok_or_else(|| bad("number list"))?,
            "window" => self.window = value.parse().map_err(|_| bad("number"))?,
            "pool" => self.pool = parse_count(value).ok_or_else(|| bad("count"))?,
            "out" => self.out = PathBuf::from(value),
            "workers" => self.workers = value.parse().map_err(|_| bad("count"))?,
            "input" => self.input = Some(PathBuf::from(value)),
            // Written to manifest.txt alongside the configuration.
            "version" | "wall_time_s" | "files" => {}
            _ => return Err(format!("{key}: unknown config key")),
        }
        Ok(())
    }
}

pub fn seed_from_env() -> Option<u64> {
    std::env::var(SEED_ENV).ok()?.trim().parse().ok()
}

/// `2..6` and `2..=6` are both inclusive; `2,3,5` lists explicitly.
pub fn parse_dims(s: &str) -> Result<Vec<usize>, String> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let lo: usize = a
            .trim()
            .parse()
            .map_err(|_| format!("bad range start `{a}`"))?;
        let hi: usize = b
            .trim()
            .parse()
            .map_err(|_| format!("bad range end `{b}`"))?;
        if hi < lo {
            return Err(format!("empty range `{s}`"));
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',')
        .map(|p| p.trim().parse().map_err(|_| format!("bad dimension `{p}`")))
        .collect()
}

/// Accepts plain integers and `1e6`-style counts.
pub fn parse_count(s: &str) -> Option<usize> {
    let s = s.trim();
    if let Ok(n) = s.parse() {
        return Some(n);
    }
    let f: f64 = s.parse().ok()?;
    (f >= 0.0 && f.fract() == 0.0 && f < 1e15).then_some(f as usize)
}

pub fn parse_floats(s: &str) -> Option<Vec<f64>> {
    s.split(',').map(|p| p.trim().parse().ok()).collect()
}
