//! Text formatting shared by the artifact writers.

/// A float with 17 significant digits, '.' decimal, no locale.
pub fn csv_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_exactly() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0] {
            assert_eq!(csv_float(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(csv_float(f64::NAN), "NaN");
    }
}
