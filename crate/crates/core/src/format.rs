//! Fixed-significance number formatting for reports.

/// Formats `x` with `digits` significant digits in the style of C's `%g`:
/// trailing zeros are removed and scientific notation is used for very
/// small or large magnitudes.
pub fn sig(x: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::sig;

    #[test]
    fn matches_printf_g() {
        assert_eq!(sig(6.5, 6), "6.5");
        assert_eq!(sig(0.25, 6), "0.25");
        assert_eq!(sig(100.0, 6), "100");
        assert_eq!(sig(80.9107, 6), "80.9107");
        assert_eq!(sig(80.910_747_59, 6), "80.9107");
        assert_eq!(sig(-5.266_6, 3), "-5.27");
        assert_eq!(sig(1234567.0, 6), "1.23457e+06");
        assert_eq!(sig(0.000_012_5, 6), "1.25e-05");
        assert_eq!(sig(0.0001, 6), "0.0001");
        assert_eq!(sig(999_999.6, 6), "1e+06");
        assert_eq!(sig(-0.0, 6), "0");
        assert_eq!(sig(f64::NAN, 6), "nan");
        assert_eq!(sig(1.0 / 3.0, 10), "0.3333333333");
    }
}
