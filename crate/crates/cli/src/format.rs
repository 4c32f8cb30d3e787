//! Plain decimal rendering of numbers for CSV output.

/// Significant digits kept in CSV cells.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Renders `x` rounded to [`SIGNIFICANT_DIGITS`] significant digits in plain
/// positional notation: no exponent, no grouping, trailing zeros dropped.
///
/// ```
/// use cachenet::format::decimal;
/// assert_eq!(decimal(0.002138704), "0.002138704");
/// assert_eq!(decimal(5e4), "50000");
/// assert_eq!(decimal(1.0 / 3.0), "0.333333333333");
/// assert_eq!(decimal(-2.5e-7), "-0.00000025");
/// ```
pub fn decimal(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x.abs());
    let (mantissa, exponent) = sci.split_once('e').expect("exponent form");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };

    let point = exponent + 1;
    let mut out = String::new();
    if x < 0.0 {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-point) as usize));
        out.push_str(digits);
    } else if point as usize >= digits.len() {
        out.push_str(digits);
        out.extend(std::iter::repeat_n('0', point as usize - digits.len()));
    } else {
        let (int, frac) = digits.split_at(point as usize);
        out.push_str(int);
        out.push('.');
        out.push_str(frac);
    }
    out
}
