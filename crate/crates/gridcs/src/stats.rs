//! Distribution comparison statistics for the simulation studies.

/// One-sample Kolmogorov-Smirnov statistic against a reference distribution
/// function: the largest gap between the sample's empirical distribution and
/// `cdf`, checked on both sides of every jump.
///
/// # Panics
///
/// The sample must be nonempty and free of NaN.
pub fn ks_one_sample<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> f64 {
    assert!(!sample.is_empty(), "empty sample");
    let mut sorted = sample.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("sample contains NaN"));
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, x) in sorted.iter().enumerate() {
        let f = cdf(*x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    d
}

/// Two-sample Kolmogorov-Smirnov statistic: the largest gap between the two
/// empirical distribution functions, evaluated by a single merge walk with
/// ties consumed from both samples before comparing.
///
/// # Panics
///
/// Both samples must be nonempty and free of NaN.
pub fn ks_two_sample(first: &[f64], second: &[f64]) -> f64 {
    assert!(
        !first.is_empty() && !second.is_empty(),
        "empty sample in two-sample comparison"
    );
    let mut a = first.to_vec();
    let mut b = second.to_vec();
    a.sort_unstable_by(|x, y| x.partial_cmp(y).expect("sample contains NaN"));
    b.sort_unstable_by(|x, y| x.partial_cmp(y).expect("sample contains NaN"));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_cdf(x: f64) -> f64 {
        x.clamp(0.0, 1.0)
    }

    #[test]
    fn one_sample_statistic_matches_hand_computed_gaps() {
        assert!((ks_one_sample(&[0.5], uniform_cdf) - 0.5).abs() <= 1e-15);
        assert!((ks_one_sample(&[0.25, 0.75], uniform_cdf) - 0.25).abs() <= 1e-15);
        let d = ks_one_sample(&[0.1, 0.2, 0.7], uniform_cdf);
        assert!((d - 0.4666666666666666).abs() <= 1e-15);
        // Order of the input must not matter.
        let d = ks_one_sample(&[0.7, 0.1, 0.2], uniform_cdf);
        assert!((d - 0.4666666666666666).abs() <= 1e-15);
    }

    #[test]
    fn two_sample_statistic_matches_reference_values() {
        let d = ks_two_sample(&[0.1, 0.4, 0.7], &[0.2, 0.3, 0.8, 0.9]);
        assert!((d - 0.5).abs() <= 1e-15);
        let d = ks_two_sample(&[1.0, 1.0, 2.0], &[1.0, 3.0]);
        assert!((d - 0.5).abs() <= 1e-15);
    }

    #[test]
    fn identical_samples_have_zero_distance() {
        let s = [0.3, -1.2, 4.0, 0.3];
        assert_eq!(ks_two_sample(&s, &s), 0.0);
    }

    #[test]
    fn disjoint_samples_have_unit_distance() {
        assert_eq!(ks_two_sample(&[0.0, 1.0], &[2.0, 3.0]), 1.0);
    }

    #[test]
    fn statistic_is_symmetric_in_its_arguments() {
        let a = [0.1, 0.5, 0.9, 0.3];
        let b = [0.2, 0.6, 0.4];
        assert_eq!(ks_two_sample(&a, &b), ks_two_sample(&b, &a));
    }
}
