//! Value parsers for angles and Bloch vectors.

use std::f64::consts::PI;

/// Radians, with `pi` shortcuts: `0.785`, `pi`, `pi/4`, `3pi/8`, `3*pi/8`, `-pi/6`.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
    if s.is_empty() {
        return Err("empty angle".into());
    }
    let value = match s.find("pi") {
        None => s.parse::<f64>().map_err(|e| format!("invalid angle `{text}`: {e}"))?,
        Some(at) => {
            let (head, tail) = (&s[..at], &s[at + 2..]);
            let head = head.strip_suffix('*').unwrap_or(head);
            let factor = match head {
                "" | "+" => 1.0,
                "-" => -1.0,
                h => h.parse::<f64>().map_err(|e| format!("invalid multiplier in `{text}`: {e}"))?,
            };
            let divisor = match tail {
                "" => 1.0,
                t => t
                    .strip_prefix('/')
                    .ok_or_else(|| format!("invalid angle `{text}`"))?
                    .parse::<f64>()
                    .map_err(|e| format!("invalid divisor in `{text}`: {e}"))?,
            };
            factor * PI / divisor
        }
    };
    if !value.is_finite() {
        return Err(format!("angle `{text}` is not finite"));
    }
    Ok(value)
}

/// Three comma-separated reals.
pub fn parse_triple(text: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated values, got `{text}`"));
    }
    let mut out = [0.0; 3];
    for (slot, p) in out.iter_mut().zip(&parts) {
        *slot = p.parse::<f64>().map_err(|e| format!("invalid component `{p}`: {e}"))?;
        if !slot.is_finite() {
            return Err(format!("component `{p}` is not finite"));
        }
    }
    Ok(out)
}

/// Three comma-separated angles.
pub fn parse_angle_triple(text: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated angles, got `{text}`"));
    }
    let mut out = [0.0; 3];
    for (slot, p) in out.iter_mut().zip(&parts) {
        *slot = parse_angle(p)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        assert_eq!(parse_angle("pi/4").unwrap(), FRAC_PI_4);
        assert_eq!(parse_angle("PI").unwrap(), PI);
        assert_eq!(parse_angle("-pi/6").unwrap(), -PI / 6.0);
        assert_eq!(parse_angle("3pi/8").unwrap(), 3.0 * PI / 8.0);
        assert_eq!(parse_angle("3*pi/8").unwrap(), 3.0 * PI / 8.0);
        assert_eq!(parse_angle(" pi / 4 ").unwrap(), FRAC_PI_4);
        for bad in ["", "pie", "pi/", "pi/x", "2pi4", "abc", "inf", "pi/0"] {
            assert!(parse_angle(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn triples() {
        assert_eq!(parse_triple("0,0,1").unwrap(), [0.0, 0.0, 1.0]);
        assert_eq!(parse_triple(" 0.5, -0.5 ,0").unwrap(), [0.5, -0.5, 0.0]);
        assert!(parse_triple("1,2").is_err());
        assert!(parse_triple("1,2,x").is_err());
        assert_eq!(parse_angle_triple("pi/2,0,-pi").unwrap(), [PI / 2.0, 0.0, -PI]);
    }
}
