//! Human-readable table rendering. Tables print 6 significant digits; the
//! JSON and CSV paths always carry full double precision.

/// Formats with 6 significant digits in plain decimal notation.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (5 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Aligned `name  value` rows.
pub fn render_rows(rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        out.push_str(&format!("{k:<width$}  {v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(0.7559289460184544), "0.755929");
        assert_eq!(sig6(2.3233834511910754), "2.32338");
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(123.456789), "123.457");
        assert_eq!(sig6(0.00012345678), "0.000123457");
        assert_eq!(sig6(-1.7056057308448835), "-1.70561");
    }
}
