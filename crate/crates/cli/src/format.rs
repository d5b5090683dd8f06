//! Number formatting and CSV emission.

use std::io::{self, Write};

/// Shortest `%.{digits}g`-style rendering: `digits` significant digits,
/// trailing zeros stripped, scientific notation outside `1e-4 ≤ |x| < 10^digits`.
pub fn sig(x: f64, digits: usize) -> String {
    assert!(digits >= 1, "need at least one significant digit");
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Nine significant digits, the precision used for every CSV value.
pub fn sig9(x: f64) -> String {
    sig(x, 9)
}

/// `r,R` CSV with LF line endings.
pub fn write_curve<W: Write>(mut out: W, rows: &[(f64, f64)]) -> io::Result<()> {
    out.write_all(b"r,R\n")?;
    for (r, value) in rows {
        writeln!(out, "{},{}", sig9(*r), sig9(*value))?;
    }
    out.flush()
}
