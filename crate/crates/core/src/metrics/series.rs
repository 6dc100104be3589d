use alloc::vec::Vec;

/// `(1 - alpha_net)·technical + alpha_net·network`.
pub fn raw_slice_score(technical: f64, network: f64, alpha_net: f64) -> f64 {
    (1.0 - alpha_net) * technical + alpha_net * network
}

/// Fractional rank of each value within the group: average rank over the
/// group size, ties sharing their mean rank. Output order follows input.
pub fn role_percentile(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = alloc::vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && values[order[j]] == values[order[i]] {
            j += 1;
        }
        // ranks i+1 ..= j share their mean
        let avg = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            out[k] = avg / n as f64;
        }
        i = j;
    }
    out
}

/// Expanding mean: element `t` is the mean of elements `0..=t`.
///
/// Updated incrementally, so a constant run stays exactly constant and the
/// mean drops exactly when a value falls below it.
pub fn cumulative_mean(series: &[f64]) -> Vec<f64> {
    let mut mean = 0.0;
    series
        .iter()
        .enumerate()
        .map(|(i, v)| {
            mean += (v - mean) / (i + 1) as f64;
            mean
        })
        .collect()
}

/// First difference, with 0 for the first element.
pub fn momentum(series: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(series.len());
    for (i, v) in series.iter().enumerate() {
        out.push(if i == 0 { 0.0 } else { v - series[i - 1] });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn raw_combination() {
        assert_eq!(raw_slice_score(0.5, 0.5, 0.2), 0.5);
        assert!((raw_slice_score(1.0, 0.0, 0.2) - 0.8).abs() < 1e-15);
        assert_eq!(raw_slice_score(0.0, 1.0, 0.0), 0.0);
    }

    #[test]
    fn percentiles() {
        assert!(close(&role_percentile(&[0.1, 0.2, 0.3]), &[1.0 / 3.0, 2.0 / 3.0, 1.0]));
        assert_eq!(role_percentile(&[0.2, 0.2]), [0.75, 0.75]);
        assert_eq!(role_percentile(&[-4.0]), [1.0]);
        assert!(close(&role_percentile(&[0.3, 0.1, 0.3, 0.2]), &[0.875, 0.25, 0.875, 0.5]));
        assert!(role_percentile(&[]).is_empty());
    }

    #[test]
    fn expanding_means() {
        assert!(close(&cumulative_mean(&[0.2, 0.4, 0.6]), &[0.2, 0.3, 0.4]));
        assert!(close(&cumulative_mean(&[0.9, 0.1]), &[0.9, 0.5]));
        assert_eq!(cumulative_mean(&[0.7; 3]), [0.7; 3]);
    }

    #[test]
    fn momentum_diffs() {
        assert!(close(&momentum(&[0.5, 0.6, 0.55]), &[0.0, 0.1, -0.05]));
        assert_eq!(momentum(&[0.4; 4]), [0.0; 4]);
        assert_eq!(momentum(&[0.0, 1.0]), [0.0, 1.0]);
        assert!(momentum(&[]).is_empty());
    }
}
