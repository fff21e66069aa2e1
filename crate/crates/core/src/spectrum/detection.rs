//! Binomial thinning of the atom number by a finite detection efficiency.

use std::collections::BTreeMap;

use super::SpectrumError;

/// Values keyed by detected atom number.
pub type PerAtomNumber = BTreeMap<usize, Vec<f64>>;

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Weights of the true atom numbers `M` given that `detected` atoms were
/// seen: `p(M) C(M, N) eta^N (1 - eta)^(M - N)`, normalized over `M`.
///
/// `true_weights[i]` is the prior of `M = min_true + i`. Returns `(M, weight)`
/// pairs with non-zero weight; empty when no true number can produce
/// `detected` atoms.
pub fn detection_weights(
    true_weights: &[f64],
    min_true: usize,
    efficiency: f64,
    detected: usize,
) -> Result<Vec<(usize, f64)>, SpectrumError> {
    if !(efficiency > 0.0 && efficiency <= 1.0) {
        return Err(SpectrumError::Config("detection_efficiency must lie in (0, 1]".into()));
    }
    let mut out: Vec<(usize, f64)> = true_weights
        .iter()
        .enumerate()
        .map(|(i, &p)| (min_true + i, p))
        .filter(|&(m, p)| m >= detected && p > 0.0)
        .map(|(m, p)| {
            let w = p * binomial(m, detected) * efficiency.powi(detected as i32) * (1.0 - efficiency).powi((m - detected) as i32);
            (m, w)
        })
        .filter(|&(_, w)| w > 0.0)
        .collect();
    let total: f64 = out.iter().map(|(_, w)| w).sum();
    for (_, w) in &mut out {
        *w /= total;
    }
    Ok(out)
}

/// Detected-N signals and standard errors from true-N ones.
///
/// Keys of `signals` are the true atom numbers (consecutive). Errors are
/// combined as independent: `sqrt(sum w^2 err^2)`.
pub fn detection_mixing(
    signals: &BTreeMap<usize, Vec<f64>>,
    stderr: &BTreeMap<usize, Vec<f64>>,
    efficiency: f64,
    true_weights: Option<&[f64]>,
) -> Result<(PerAtomNumber, PerAtomNumber), SpectrumError> {
    let Some((&min_true, first)) = signals.iter().next() else {
        return Ok((BTreeMap::new(), BTreeMap::new()));
    };
    let len = first.len();
    let uniform = vec![1.0; signals.len()];
    let prior = true_weights.unwrap_or(&uniform);
    if prior.len() != signals.len() {
        return Err(SpectrumError::Config("one prior weight per true atom number required".into()));
    }
    let mut s_out = BTreeMap::new();
    let mut e_out = BTreeMap::new();
    for &n in signals.keys() {
        let w = detection_weights(prior, min_true, efficiency, n)?;
        let mut s = vec![0.0; len];
        let mut e2 = vec![0.0; len];
        for (m, wm) in w {
            let sm = &signals[&m];
            let em = stderr.get(&m);
            for i in 0..len {
                s[i] += wm * sm[i];
                if let Some(em) = em {
                    e2[i] += wm * wm * em[i] * em[i];
                }
            }
        }
        s_out.insert(n, s);
        e_out.insert(n, e2.into_iter().map(f64::sqrt).collect());
    }
    Ok((s_out, e_out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn signals() -> BTreeMap<usize, Vec<f64>> {
        (2..=5).map(|n| (n, vec![0.01 * n as f64, 0.1 + 0.02 * n as f64])).collect()
    }

    #[test]
    fn unit_efficiency_is_identity() {
        let s = signals();
        let (out, _) = detection_mixing(&s, &s, 1.0, None).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn degenerate_prior_passes_through() {
        let s = signals();
        let (out, _) = detection_mixing(&s, &s, 0.65, Some(&[0.0, 0.0, 0.0, 1.0])).unwrap();
        assert_eq!(out[&5], s[&5]);
        // every detected N can only come from M = 5
        assert_eq!(out[&2], s[&5]);
    }

    #[test]
    fn weights_normalized() {
        let prior = [0.4, 0.3, 0.2, 0.1];
        for n in 2..=5 {
            let w = detection_weights(&prior, 2, 0.65, n).unwrap();
            let total: f64 = w.iter().map(|(_, x)| x).sum();
            assert!((total - 1.0).abs() < 1e-14);
            assert!(w.iter().all(|&(m, _)| m >= n));
        }
    }

    #[test]
    fn bad_efficiency() {
        assert!(detection_weights(&[1.0], 2, 0.0, 2).is_err());
        assert!(detection_weights(&[1.0], 2, 1.5, 2).is_err());
    }
}
