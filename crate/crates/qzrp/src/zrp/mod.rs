//! The multispecies totally asymmetric zero-range process on a ring.

pub mod config;
pub mod rates;
pub mod sim;
pub mod stationary;

pub use config::{compositions, enumerate_configs, ZrpConfig};
pub use rates::{lump, lumping_thresholds, rate_between, species_rate, tableau_moves_match, tazrp_weight, tazrp_weights, verify_lumping, zrp_rates, ZrpMove};
pub use sim::{simulate, simulate_from, simulate_replicas, Estimate, Event, SimOptions, Trajectory};
pub use stationary::{numeric_generator, stationary_exact, ZrpParams};
