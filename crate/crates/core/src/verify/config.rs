//! Suite configuration and the default signature battery.

use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::patterns::{Param, Signature, XiParam};

#[derive(Clone, Debug, PartialEq)]
pub enum Mode {
    Exact,
    Numeric { samples: Vec<Complex64>, tolerance: f64 },
}

#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub battery: Vec<(String, Signature)>,
    /// Window depth `N`; checks run on `V_N`, which contains every smaller window.
    pub depth: usize,
    /// Generator indices `|i| <= window`.
    pub window: i64,
    pub mode: Mode,
    pub seed: u64,
    pub trials: usize,
    /// Record wall-clock milliseconds (off by default for byte-identical reports).
    pub timings: bool,
}

/// trivial; LS s=0; LS s=1; (-1,1) offsets (2,1,0); (-1,0) offsets (3,0) with mu = 1/2.
pub fn default_battery() -> Vec<(String, Signature)> {
    let half = Signature::new(
        -1,
        0,
        vec![3, 0],
        Param::Value(BigRational::new(1.into(), 2.into())),
        XiParam::Auto,
        XiParam::Auto,
    )
    .unwrap();
    vec![
        ("trivial".into(), Signature::trivial()),
        ("ls0".into(), Signature::levendorskii_soibelman(0)),
        ("ls1".into(), Signature::levendorskii_soibelman(1)),
        ("m1n1-210".into(), Signature::simple(-1, 1, vec![2, 1, 0]).unwrap()),
        ("m1n0-30-half".into(), half),
    ]
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            battery: default_battery(),
            depth: 4,
            window: 4,
            mode: Mode::Exact,
            seed: 1,
            trials: 20,
            timings: false,
        }
    }
}

impl CheckConfig {
    pub fn single(name: &str, sig: Signature) -> Self {
        CheckConfig {
            battery: vec![(name.into(), sig)],
            ..Default::default()
        }
    }

    pub fn digest(&self) -> String {
        let mode = match &self.mode {
            Mode::Exact => json!("exact"),
            Mode::Numeric { samples, tolerance } => json!({
                "samples": samples.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                "tolerance": tolerance,
            }),
        };
        let v = json!({
            "battery": self.battery.iter().map(|(n, s)| json!([n, s.to_json()])).collect::<Vec<_>>(),
            "depth": self.depth,
            "window": self.window,
            "mode": mode,
            "seed": self.seed,
            "trials": self.trials,
        });
        let h = Sha256::digest(v.to_string().as_bytes());
        h.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

/// Numeric sample points of the default numeric mode; none is a root of unity.
pub fn default_numeric_samples() -> Vec<Complex64> {
    vec![Complex64::new(1.1, 0.0), Complex64::new(0.9, 0.0), Complex64::new(1.2, 0.1)]
}

/// Comma-separated complex samples such as `1.1,0.9,1.2+0.1i`.
pub fn parse_samples(s: &str) -> Result<Vec<Complex64>, String> {
    let out: Result<Vec<Complex64>, String> = s
        .split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<Complex64>().map_err(|_| format!("bad sample {x:?}")))
        .collect();
    match out {
        Ok(v) if v.is_empty() => Err("no samples given".into()),
        Ok(v) if v.iter().any(|z| (z.norm() - 1.0).abs() < 1e-12) => {
            Err("samples on the unit circle are excluded".into())
        }
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_lists() {
        assert_eq!(parse_samples("1.1, 0.9,1.2+0.1i").unwrap(), default_numeric_samples());
        assert!(parse_samples("").is_err());
        assert!(parse_samples("1").is_err());
        assert!(parse_samples("x").is_err());
    }

    #[test]
    fn digest_tracks_config() {
        let a = CheckConfig::default();
        let mut b = CheckConfig::default();
        assert_eq!(a.digest(), b.digest());
        b.depth = 5;
        assert_ne!(a.digest(), b.digest());
        // timings do not change what is checked
        b.depth = 4;
        b.timings = true;
        assert_eq!(a.digest(), b.digest());
    }
}
