use std::f64::consts::PI;

use super::ConstantsError;

/// `Γ(3/4)`.
pub const GAMMA_3_4: f64 = 1.225_416_702_465_177_6;

/// `c = Γ(3/4) / (4π √(2(1 − ρ)))`, the constant in `G(n) ~ c·4ⁿ/n^{3/4}`.
pub fn c_from_rho(rho: f64) -> Result<f64, ConstantsError> {
    if !(0.0..1.0).contains(&rho) {
        return Err(ConstantsError::Invalid(format!(
            "rho must lie in [0, 1), got {rho}"
        )));
    }
    Ok(GAMMA_3_4 / (4.0 * PI * (2.0 * (1.0 - rho)).sqrt()))
}

/// `Γ(3/4) / √(2π(1 − ρ))`, the limit of `n^{1/4}` times the bridge
/// persistence probability.
pub fn persistence_constant(rho: f64) -> Result<f64, ConstantsError> {
    if !(0.0..1.0).contains(&rho) {
        return Err(ConstantsError::Invalid(format!(
            "rho must lie in [0, 1), got {rho}"
        )));
    }
    Ok(GAMMA_3_4 / (2.0 * PI * (1.0 - rho)).sqrt())
}
