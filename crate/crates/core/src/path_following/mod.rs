//! Path-following algorithms: Lemke–Howson for bimatrix games, Sperner
//! path following on a subdivided triangle, Scarf's algorithm for weak
//! approximate fixed points, and its application to exchange markets.

mod lemke_howson;
mod scarf;
pub mod simplicial;
mod sperner;

pub use lemke_howson::{lemke_howson, lemke_howson_pivot_bound, lemke_howson_run, BimatrixGame, LemkeHowsonRun};
pub use scarf::{
    default_eta, market_equilibrium_weak, market_map_circuit, scarf_weak_fixpoint, validate_economy, ExchangeEconomy,
    MarketResult, ScarfOptions, ScarfResult, DEFAULT_SCARF_RETRIES,
};
pub use simplicial::{follow_path, PanchromaticCell, Walk};
pub use sperner::{
    brute_force_sperner, sperner_orientation_counts, sperner_solve, OrientationCount, SpernerInstance, TrichromaticCell,
    BRUTE_FORCE_SPERNER_CAP,
};
