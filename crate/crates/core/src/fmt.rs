//! Real-number formatting shared by the JSON and QASM writers.

/// Formats `x` with 17 significant digits in `%.17g` style: fixed notation for
/// decimal exponents in `[-4, 17)`, scientific otherwise, trailing zeros removed.
///
/// Seventeen digits make the text round-trip to the same `f64`.
pub fn g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if (-4..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        strip_zeros(format!("{:.*}", decimals, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!(
            "{}e{}{:02}",
            strip_zeros(mantissa.to_string()),
            sign,
            exp.abs()
        )
    }
}

fn strip_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let trimmed = s.trim_end_matches('0').trim_end_matches('.');
    trimmed.to_string()
}
