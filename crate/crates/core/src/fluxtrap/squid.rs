/// Flux integrator read out by the SQUID: each conversion cycle adds the
/// amplified quanta of the flux-trap stage.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SquidAccumulator {
    pub accumulated_flux: i64,
    /// Quanta added in each cycle, in order.
    pub contributions: Vec<i64>,
}

impl SquidAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cycles(&self) -> usize {
        self.contributions.len()
    }
}

/// Add one cycle's amplified quanta.
pub fn integrate_cycle(mut squid: SquidAccumulator, amplified_quanta: i64) -> SquidAccumulator {
    squid.accumulated_flux += amplified_quanta;
    squid.contributions.push(amplified_quanta);
    squid
}
