//! Command-line value parsers: complex numbers, covering points, triples and paths.

use num_complex::Complex64;
use pvi_core::{CoveringPoint, MonodromyTriple};

/// Parses `re+imi`, a bare real, `sqrtN`/`-sqrtN`, or a JSON pair `[re, im]`.
pub fn complex(s: &str) -> Result<Complex64, String> {
    let s = s.trim();
    if s.starts_with('[') {
        let v: Vec<f64> =
            serde_json::from_str(s).map_err(|e| format!("bad JSON pair '{s}': {e}"))?;
        return match v.as_slice() {
            [re, im] => Ok(Complex64::new(*re, *im)),
            _ => Err(format!("JSON complex '{s}' must be [re, im]")),
        };
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s.strip_prefix('+').unwrap_or(s)),
    };
    if let Some(arg) = body.strip_prefix("sqrt") {
        let v: f64 = arg
            .trim_matches(|c| c == '(' || c == ')')
            .parse()
            .map_err(|_| format!("bad square root '{s}'"))?;
        return Ok(Complex64::new(sign * v.sqrt(), 0.0));
    }
    let z: Complex64 = s.parse().map_err(|_| format!("bad complex number '{s}'"))?;
    if !z.is_finite() {
        return Err(format!("complex number '{s}' is not finite"));
    }
    Ok(z)
}

/// Parses a covering point `modulus,argument`.
pub fn point(s: &str) -> Result<CoveringPoint, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [m, a] = parts.as_slice() else {
        return Err(format!("covering point '{s}' must be 'modulus,argument'"));
    };
    let m: f64 = m.parse().map_err(|_| format!("bad modulus in '{s}'"))?;
    let a: f64 = a.parse().map_err(|_| format!("bad argument in '{s}'"))?;
    CoveringPoint::try_new(m, a).map_err(|e| e.to_string())
}

/// Parses waypoints `m,a;m,a;...`.
pub fn path(s: &str) -> Result<Vec<CoveringPoint>, String> {
    let pts = s
        .split(';')
        .filter(|p| !p.trim().is_empty())
        .map(point)
        .collect::<Result<Vec<_>, _>>()?;
    if pts.len() < 2 {
        return Err("a path needs at least two waypoints".into());
    }
    Ok(pts)
}

/// Parses a triple `x0,x1,xinf`, or the JSON form `[[re, im], [re, im], [re, im]]`
/// emitted by `connect`.
pub fn triple(s: &str) -> Result<MonodromyTriple, String> {
    if s.trim().starts_with('[') {
        let v: Vec<[f64; 2]> =
            serde_json::from_str(s).map_err(|e| format!("bad JSON triple '{s}': {e}"))?;
        let [a, b, c] = v.as_slice() else {
            return Err(format!("JSON triple '{s}' must have three entries"));
        };
        let z = |p: &[f64; 2]| Complex64::new(p[0], p[1]);
        return Ok(MonodromyTriple::new(z(a), z(b), z(c)));
    }
    let parts: Vec<&str> = s.split(',').collect();
    let [a, b, c] = parts.as_slice() else {
        return Err(format!(
            "triple '{s}' must have three comma-separated entries"
        ));
    };
    Ok(MonodromyTriple::new(complex(a)?, complex(b)?, complex(c)?))
}
