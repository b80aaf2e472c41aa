//! Small numeric helpers: seed derivation, Bessel J0, medians.

/// SplitMix64 step, used to derive independent sub-seeds from one master seed.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a sub-seed from a master seed and a label path.
///
/// Every random draw in the library flows from an explicit seed through this
/// function, so distinct consumers (noise, fading, interferer phases, Monte
/// Carlo shards) get decorrelated streams that are stable across runs.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    let mut s = splitmix64(base);
    for &w in path {
        s = splitmix64(s ^ w);
    }
    s
}

/// Bessel function of the first kind, order zero.
///
/// Abramowitz & Stegun 9.4.1 / 9.4.3 rational approximations, |error| < 2e-7.
pub fn bessel_j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 3.0 {
        let t = (ax / 3.0) * (ax / 3.0);
        1.0 + t * (-2.249_999_7
            + t * (1.265_620_8
                + t * (-0.316_386_6
                    + t * (0.044_447_9 + t * (-0.003_944_4 + t * 0.000_210_0)))))
    } else {
        let t = 3.0 / ax;
        let f0 = 0.797_884_56
            + t * (-0.000_000_77
                + t * (-0.005_527_40
                    + t * (-0.000_095_12
                        + t * (0.001_372_37 + t * (-0.000_728_05 + t * 0.000_144_76)))));
        let theta0 = ax - 0.785_398_16
            + t * (-0.041_663_97
                + t * (-0.000_039_54
                    + t * (0.002_625_73
                        + t * (-0.000_541_25 + t * (-0.000_293_33 + t * 0.000_135_58)))));
        f0 * theta0.cos() / ax.sqrt()
    }
}

/// Median of a slice (average of the two middle values for even lengths).
/// Returns NaN for an empty slice.
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}
