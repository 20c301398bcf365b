use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Reads a flat TOML table of subcommand settings.
pub fn load<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Generates the flag struct (every field optional, also the TOML shape) and the resolved
/// config. Flags win over the file, the file wins over defaults.
macro_rules! settings {
    ($args:ident => $cfg:ident { $( $(#[$m:meta])* $field:ident : $ty:ty = $default:expr ),* $(,)? }) => {
        #[derive(Clone, Debug, Default, clap::Args, serde::Serialize, serde::Deserialize)]
        #[serde(deny_unknown_fields)]
        pub struct $args {
            $( $(#[$m])* #[arg(long)] pub $field: Option<$ty>, )*
        }

        #[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
        #[serde(deny_unknown_fields)]
        pub struct $cfg {
            $( pub $field: $ty, )*
        }

        impl $args {
            pub fn resolve(self, file: Option<&std::path::Path>) -> Result<$cfg, $crate::error::CliError> {
                let base: $args = match file {
                    Some(p) => $crate::config::load(p)?,
                    None => $args::default(),
                };
                Ok($cfg {
                    $( $field: self.$field.or(base.$field).unwrap_or_else(|| $default), )*
                })
            }
        }
    };
}

const SQRT2: f64 = std::f64::consts::SQRT_2;

settings!(Scan3Args => Scan3Config {
    /// Gravity constant g
    g: f64 = SQRT2,
    /// Surface tension sigma
    sigma: f64 = 1.0,
    /// Weight exponent kappa
    kappa: f64 = 0.5,
    /// Largest |xi|
    max_high: i64 = 64,
    /// Largest |xi - eta|
    max_low: i64 = 4,
    /// Enumerate one dyadic shell of |xi| at a time
    shell_mode: bool = false,
    /// Normalization: kappa, heuristic or high-bracket
    weight: String = "kappa".into(),
    /// Exponent of the high-bracket weight
    exponent: f64 = 1.5,
    /// Number of smallest records kept
    keep: u64 = 32,
    /// Evaluation budget
    max_evaluations: u64 = 200_000_000_000,
    /// Phases below this are re-checked in extended precision
    near_threshold: f64 = 1e-9,
});

settings!(Scan4Args => Scan4Config {
    /// Gravity constant g
    g: f64 = SQRT2,
    /// Surface tension sigma
    sigma: f64 = 1.0,
    /// Largest |v|
    max_high: i64 = 32,
    /// Largest |xi|, |eta|
    max_low: i64 = 2,
    /// Enumerate one dyadic shell of |v| at a time
    shell_mode: bool = false,
    /// Number of smallest records kept
    keep: u64 = 32,
    /// Evaluation budget
    max_evaluations: u64 = 200_000_000_000,
    /// Constant b' in the regime flag
    regime_constant: f64 = 1.0,
    /// Use the unbracketed weight
    plain_weight: bool = false,
    /// Phases below this are re-checked in extended precision
    near_threshold: f64 = 1e-9,
});

settings!(CollinearArgs => CollinearConfig {
    /// Gravity constant g
    g: f64 = SQRT2,
    /// Surface tension sigma
    sigma: f64 = 1.0,
    /// First coordinate of xi
    xi_x: i64 = 12,
    /// Second coordinate of xi
    xi_y: i64 = 0,
});

settings!(Lemma1Args => Lemma1Config {
    /// Smallest side a
    a: f64 = 1.0,
    /// Middle side b
    b: f64 = 1.0,
    /// Largest side c
    c: f64 = 1.9,
    /// Right end B of the interval (0, B)
    big_b: f64 = 10.0,
    /// Sublevel height delta
    delta: f64 = 0.05,
});

settings!(MeasureArgs => MeasureConfig {
    /// Weight exponent kappa
    kappa: f64 = 1.0,
    /// Right end B of the parameter range
    big_b: f64 = 5.0,
    /// First j
    j_min: i32 = 5,
    /// Last j
    j_max: i32 = 9,
    /// Largest |xi|
    cutoff: i64 = 16,
    /// Budget on frequency pairs
    max_pairs: u64 = 100_000_000,
});

settings!(ParadiffArgs => ParadiffAuditConfig {
    /// Grid side
    grid: usize = 64,
    /// Exponent of the paraproduct cutoff chi
    chi_exponent: i32 = -2,
    /// Seed for probe fields
    seed: u64 = 1,
    /// Probe bands k
    #[arg(value_delimiter = ',')]
    bands: Vec<i32> = vec![2, 3, 4],
});

settings!(SymbolsArgs => SymbolsConfig {
    /// Gravity constant g
    g: f64 = SQRT2,
    /// Surface tension sigma
    sigma: f64 = 1.0,
    /// Grid side
    grid: usize = 16,
    /// Exponent of the paraproduct cutoff chi
    chi_exponent: i32 = -2,
    /// Seed for the surface state
    seed: u64 = 1,
    /// Amplitudes of the scaled states
    #[arg(value_delimiter = ',')]
    epsilons: Vec<f64> = vec![1e-1, 1e-2, 1e-3],
    /// Sobolev index for the good-variable comparisons
    sobolev_index: f64 = 5.0,
});

settings!(SimulateArgs => SimulateConfig {
    /// Gravity constant g
    g: f64 = SQRT2,
    /// Grid side
    grid: usize = 64,
    /// Amplitude epsilon (sup norm of the initial data)
    epsilon: f64 = 0.01,
    /// Final time
    t_end: f64 = 10.0,
    /// Time step; 0 picks the Courant step
    dt: f64 = 0.0,
    /// exp-midpoint, lawson-rk4 or direct-rk4
    integrator: String = "exp-midpoint".into(),
    /// Power-law decay of the random initial spectrum
    decay: f64 = 7.0,
    /// Seed for the initial data
    seed: u64 = 11,
    /// Snapshot every this many steps
    snapshot_every: usize = 10,
    /// Velocity band B
    velocity_band: u32 = 10,
    /// Sobolev index N
    sobolev_index: f64 = 5.0,
    /// Include the nonlinearity
    nonlinear: bool = true,
    /// Stop once the H^N norm doubles
    stop_at_doubling: bool = false,
});

settings!(SweepArgs => SweepConfig {
    /// Gravity constant g
    g: f64 = SQRT2,
    /// Grid side
    grid: usize = 32,
    /// Amplitudes
    #[arg(value_delimiter = ',')]
    epsilons: Vec<f64> = vec![0.4, 0.2, 0.1, 0.05],
    /// Final time for each run
    t_end: f64 = 100.0,
    /// Time step; 0 picks the Courant step
    dt: f64 = 0.0,
    /// exp-midpoint, lawson-rk4 or direct-rk4
    integrator: String = "exp-midpoint".into(),
    /// Power-law decay of the random initial spectrum
    decay: f64 = 7.0,
    /// Seed for the initial data
    seed: u64 = 11,
    /// Velocity band B
    velocity_band: u32 = 10,
    /// Sobolev index N
    sobolev_index: f64 = 5.0,
});

settings!(EnergyAuditArgs => EnergyAuditConfig {
    /// Gravity constant g
    g: f64 = SQRT2,
    /// Grid side
    grid: usize = 64,
    /// Amplitude epsilon (sup norm of the initial data)
    epsilon: f64 = 0.01,
    /// Final time
    t_end: f64 = 10.0,
    /// Time step; 0 picks the Courant step
    dt: f64 = 0.0,
    /// exp-midpoint, lawson-rk4 or direct-rk4
    integrator: String = "exp-midpoint".into(),
    /// Power-law decay of the random initial spectrum
    decay: f64 = 7.0,
    /// Seed for the initial data
    seed: u64 = 11,
    /// Velocity band B
    velocity_band: u32 = 10,
    /// Sobolev index N
    sobolev_index: f64 = 5.0,
    /// Frequency split |xi| = 2^D
    split: i32 = 3,
    /// Audit every this many snapshots
    every: usize = 50,
});

/// Echo of a resolved config, written next to the outputs.
pub fn to_toml<T: Serialize>(cfg: &T) -> Result<String, CliError> {
    toml::to_string(cfg).map_err(|e| CliError::Config(e.to_string()))
}
