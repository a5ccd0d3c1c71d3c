//! Acceleration of alternating tail series by iterated averaging of partial
//! sums (Euler transformation). Used for the oscillatory Bessel-kernel
//! integrals whose between-zeros segments form a slowly decaying alternating
//! sequence.

/// Sum an alternating series with (eventually) monotone term magnitudes.
///
/// Returns the accelerated sum and an error indicator taken from the spread
/// of the final averaging stage.
pub(crate) fn euler_sum(terms: &[f64]) -> (f64, f64) {
    debug_assert!(!terms.is_empty());
    let mut row: Vec<f64> = Vec::with_capacity(terms.len());
    let mut acc = 0.0;
    for &t in terms {
        acc += t;
        row.push(acc);
    }
    let mut err = row.last().unwrap().abs() * f64::EPSILON;
    while row.len() > 1 {
        if row.len() == 2 {
            err = (row[0] - row[1]).abs();
        }
        for i in 0..row.len() - 1 {
            row[i] = 0.5 * (row[i] + row[i + 1]);
        }
        row.pop();
    }
    let value = row[0];
    (value, err.max(value.abs() * f64::EPSILON * terms.len() as f64))
}
