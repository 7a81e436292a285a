/// Elementary symmetric polynomial `e_k(values)`, with `e_0 = 1`.
///
/// Uses the coefficient recurrence of `prod (1 + x_i t)`: one pass per value,
/// updating coefficients from the top down in place.
pub fn elementary_symmetric(values: &[f64], k: usize) -> f64 {
    if k > values.len() {
        return 0.0;
    }
    elementary_symmetric_all(values, k)[k]
}

/// `e_0..=e_{k_max}` in one pass.
pub fn elementary_symmetric_all(values: &[f64], k_max: usize) -> Vec<f64> {
    let mut e = vec![0.0; k_max + 1];
    e[0] = 1.0;
    for (n, &x) in values.iter().enumerate() {
        let top = (n + 1).min(k_max);
        for j in (1..=top).rev() {
            e[j] += x * e[j - 1];
        }
    }
    e
}
