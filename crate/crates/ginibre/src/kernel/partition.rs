use super::{ln_factorial, LN_2_SQRT_2PI};

/// `ln Z = Σ_{m=0}^{M−1} ln(2√(2π)·(2m)!)`, the log partition function of `2M × 2M` real
/// Ginibre matrices.
///
/// ```
/// use ginibre::kernel::partition_function;
/// let z = partition_function(1).exp();
/// assert!((z - 2.0 * (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-14);
/// ```
pub fn partition_function(m: usize) -> f64 {
    (0..m).map(|k| LN_2_SQRT_2PI + ln_factorial(2 * k)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_blocks() {
        let unit = 2.0 * (2.0 * std::f64::consts::PI).sqrt();
        let want = unit.ln() + (unit * 2.0).ln();
        assert!((partition_function(2) - want).abs() < 1e-14);
    }

    #[test]
    fn empty_product() {
        assert_eq!(partition_function(0), 0.0);
    }
}
