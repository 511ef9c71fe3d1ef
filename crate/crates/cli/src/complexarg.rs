//! Parser for complex numbers on the flag surface: "1.5-2i", "3", "2i",
//! "-1+0.5i", "1e-3+2e-4i". JSON payloads use [re, im] instead.

use num_complex::Complex64;

pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty complex literal".into());
    }
    if !s.ends_with('i') {
        let re: f64 = s.parse().map_err(|_| format!("bad real literal {text:?}"))?;
        return Ok(Complex64::new(re, 0.0));
    }
    let body = &s[..s.len() - 1];
    // Split at the last +/- that is not a leading sign and not part of an
    // exponent; everything after it is the imaginary coefficient.
    let bytes = body.as_bytes();
    let mut split = None;
    for k in (1..bytes.len()).rev() {
        let c = bytes[k];
        if (c == b'+' || c == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
            split = Some(k);
            break;
        }
    }
    let (re_str, im_str) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let im: f64 = match im_str {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other
            .parse()
            .map_err(|_| format!("bad imaginary part in {text:?}"))?,
    };
    let re: f64 = if re_str.is_empty() {
        0.0
    } else {
        re_str
            .parse()
            .map_err(|_| format!("bad real part in {text:?}"))?
    };
    Ok(Complex64::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Complex64 {
        parse_complex(s).unwrap()
    }

    #[test]
    fn accepted_forms() {
        assert_eq!(p("3"), Complex64::new(3.0, 0.0));
        assert_eq!(p("-2.5"), Complex64::new(-2.5, 0.0));
        assert_eq!(p("2i"), Complex64::new(0.0, 2.0));
        assert_eq!(p("-i"), Complex64::new(0.0, -1.0));
        assert_eq!(p("i"), Complex64::new(0.0, 1.0));
        assert_eq!(p("1.5-2i"), Complex64::new(1.5, -2.0));
        assert_eq!(p("-1+0.5i"), Complex64::new(-1.0, 0.5));
        assert_eq!(p("1e-3+2e-4i"), Complex64::new(1e-3, 2e-4));
        assert_eq!(p(" 1 + 2 i "), Complex64::new(1.0, 2.0));
        assert_eq!(p("-1E2-3E-1i"), Complex64::new(-100.0, -0.3));
    }

    #[test]
    fn rejected_forms() {
        assert!(parse_complex("").is_err());
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("1+2j").is_err());
        assert!(parse_complex("1+i2").is_err());
        assert!(parse_complex("1++2i").is_err());
    }
}
