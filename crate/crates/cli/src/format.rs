//! Number formatting for CSV output: 12 significant digits in the style of
//! C's `%.12g`, independent of locale.

const DIGITS: i32 = 12;

pub fn number(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    // Rounding may bump the exponent, so read it off the rounded form.
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-4..DIGITS).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::number;

    #[test]
    fn matches_printf_g() {
        assert_eq!(number(0.0), "0");
        assert_eq!(number(1.0), "1");
        assert_eq!(number(-0.125), "-0.125");
        assert_eq!(number(1.0 / 3.0), "0.333333333333");
        assert_eq!(number(2.0 / 3.0 * 1e-5), "6.66666666667e-06");
        assert_eq!(number(1.5e12), "1.5e+12");
        assert_eq!(number(123456789012.4), "123456789012");
        assert_eq!(number(999999999999.9), "1e+12");
        assert_eq!(number(1e-4), "0.0001");
        assert_eq!(number(f64::NAN), "nan");
    }
}
