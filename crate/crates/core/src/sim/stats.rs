/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Half-width of the 95% Wilson score interval for `hits` out of `trials`.
pub fn wilson_half_width(hits: u64, trials: u64) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = Z95 * Z95;
    Z95 / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt()
}

/// The 95% Wilson score interval itself.
pub fn wilson_interval(hits: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = Z95 * Z95;
    let center = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = wilson_half_width(hits, trials);
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// SplitMix64 finalizer; derives independent child seeds from a master seed.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_reference_values() {
        // 10/100: interval (0.05523, 0.17437) from the closed form
        let (lo, hi) = wilson_interval(10, 100);
        assert!((lo - 0.055_229_14).abs() < 1e-7, "{lo}");
        assert!((hi - 0.174_365_66).abs() < 1e-7, "{hi}");
        // never collapses at the boundary
        assert!(wilson_half_width(0, 1000) > 0.0);
        assert!(wilson_interval(0, 1000).0.abs() < 1e-15);
    }

    #[test]
    fn slope_of_a_line() {
        let xs = [6.0, 8.0, 10.0, 12.0];
        let ys: Vec<f64> = xs.iter().map(|x| 0.25 * x - 1.0).collect();
        assert!((ls_slope(&xs, &ys) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn derived_seeds_differ() {
        let s: std::collections::HashSet<u64> = (0..1000).map(|i| derive_seed(42, i)).collect();
        assert_eq!(s.len(), 1000);
        assert_eq!(derive_seed(1, 2), derive_seed(1, 2));
    }
}
