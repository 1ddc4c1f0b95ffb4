//! Runner configuration: flag/file merging, defaults, and validation.
//!
//! A config file, when given, overrides command-line flags field by field.
//! The finalized form serializes with alphabetically sorted keys and is the
//! canonical round-trip representation.

use serde::{Deserialize, Serialize};

pub const SUITES: &[&str] = &[
    "rkhs-core",
    "hilbert-multipliers",
    "sip-core",
    "rkbs-core",
    "banach-multipliers",
    "all",
];

pub const KERNELS: &[&str] = &["gaussian", "laplacian", "polynomial", "brownian-min"];

/// Partially specified configuration, as read from flags or a JSON file.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(default)]
    pub degree: Option<u32>,
    #[serde(default)]
    pub features: Option<usize>,
    #[serde(default)]
    pub format: Option<String>,
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default)]
    pub kernel: Option<String>,
    #[serde(default)]
    pub offset: Option<f64>,
    #[serde(default)]
    pub out: Option<String>,
    #[serde(default)]
    pub p: Option<Vec<f64>>,
    #[serde(default)]
    pub points: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub suite: Option<String>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub trials: Option<usize>,
}

/// Validated configuration with all defaults filled. Field order is the
/// serialized key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub degree: u32,
    pub features: usize,
    pub format: String,
    pub gamma: f64,
    /// restricts kernel-grid checks to one variant when set
    pub kernel: Option<String>,
    pub offset: f64,
    pub out: Option<String>,
    pub p: Vec<f64>,
    pub points: usize,
    pub seed: u64,
    pub suite: String,
    /// overrides every check's default tolerance when set
    pub tol: Option<f64>,
    pub trials: usize,
}

/// Field-wise merge; `over` wins wherever it specifies a value.
pub fn overlay(base: RawConfig, over: RawConfig) -> RawConfig {
    RawConfig {
        degree: over.degree.or(base.degree),
        features: over.features.or(base.features),
        format: over.format.or(base.format),
        gamma: over.gamma.or(base.gamma),
        kernel: over.kernel.or(base.kernel),
        offset: over.offset.or(base.offset),
        out: over.out.or(base.out),
        p: over.p.or(base.p),
        points: over.points.or(base.points),
        seed: over.seed.or(base.seed),
        suite: over.suite.or(base.suite),
        tol: over.tol.or(base.tol),
        trials: over.trials.or(base.trials),
    }
}

/// Parse a JSON config file, fill defaults, and validate.
pub fn parse_config(text: &str) -> Result<SuiteConfig, String> {
    let raw: RawConfig =
        serde_json::from_str(text).map_err(|e| format!("config parse error: {e}"))?;
    finalize(raw)
}

pub fn finalize(raw: RawConfig) -> Result<SuiteConfig, String> {
    let suite = raw.suite.ok_or("missing field: suite")?;
    if !SUITES.contains(&suite.as_str()) {
        return Err(format!("suite: unknown suite {suite:?}; expected one of {SUITES:?}"));
    }
    if let Some(k) = &raw.kernel {
        if !KERNELS.contains(&k.as_str()) {
            return Err(format!("kernel: unknown variant {k:?}; expected one of {KERNELS:?}"));
        }
    }
    let format = raw.format.unwrap_or_else(|| "json".into());
    if format != "json" && format != "csv" {
        return Err(format!("format: expected \"json\" or \"csv\", got {format:?}"));
    }
    let cfg = SuiteConfig {
        degree: raw.degree.unwrap_or(2),
        features: raw.features.unwrap_or(3),
        format,
        gamma: raw.gamma.unwrap_or(1.0),
        kernel: raw.kernel,
        offset: raw.offset.unwrap_or(1.0),
        out: raw.out,
        p: raw.p.unwrap_or_else(|| vec![1.5, 2.0, 3.0]),
        points: raw.points.unwrap_or(6),
        seed: raw.seed.unwrap_or(1),
        suite,
        tol: raw.tol,
        trials: raw.trials.unwrap_or(100),
    };
    for &p in &cfg.p {
        if !(p > 1.0 && p.is_finite()) {
            return Err(format!("p: exponents must lie in (1, inf), got {p}"));
        }
    }
    if cfg.p.is_empty() {
        return Err("p: at least one exponent required".into());
    }
    if cfg.trials < 1 {
        return Err("trials: must be >= 1".into());
    }
    if cfg.features < 1 || cfg.points < cfg.features {
        return Err(format!(
            "points/features: need points >= features >= 1, got {}/{}",
            cfg.points, cfg.features
        ));
    }
    if !(cfg.gamma > 0.0 && cfg.gamma.is_finite()) {
        return Err(format!("gamma: must be positive and finite, got {}", cfg.gamma));
    }
    if cfg.degree < 1 {
        return Err("degree: must be >= 1".into());
    }
    if !(cfg.offset >= 0.0 && cfg.offset.is_finite()) {
        return Err(format!("offset: must be nonnegative and finite, got {}", cfg.offset));
    }
    if let Some(t) = cfg.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(format!("tol: must be positive and finite, got {t}"));
        }
    }
    Ok(cfg)
}

/// Canonical serialized form: pretty JSON with sorted keys.
pub fn canonical(cfg: &SuiteConfig) -> String {
    let mut s = serde_json::to_string_pretty(cfg).expect("config serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_config(r#"{"suite":"rkhs-core","seed":1}"#).unwrap();
        assert_eq!(cfg.trials, 100);
        assert_eq!(cfg.p, vec![1.5, 2.0, 3.0]);
        assert_eq!(cfg.format, "json");
        assert_eq!(cfg.points, 6);
        assert!(cfg.kernel.is_none());
    }

    #[test]
    fn boundary_exponent_rejected() {
        let err = parse_config(r#"{"suite":"sip-core","p":[1.0]}"#).unwrap_err();
        assert!(err.contains("(1, inf)"), "{err}");
    }

    #[test]
    fn unknown_suite_and_field_rejected() {
        assert!(parse_config(r#"{"suite":"nope"}"#).is_err());
        assert!(parse_config(r#"{"suite":"all","bogus":3}"#).is_err());
    }

    #[test]
    fn canonical_round_trip() {
        let text = r#"{"suite":"all","seed":9,"trials":7,"p":[2.5],"kernel":"laplacian","points":5,"features":2,"tol":1e-7,"format":"csv"}"#;
        let cfg = parse_config(text).unwrap();
        let reparsed = parse_config(&canonical(&cfg)).unwrap();
        assert_eq!(cfg, reparsed);
        assert_eq!(canonical(&cfg), canonical(&reparsed));
    }

    #[test]
    fn overlay_prefers_override() {
        let base = RawConfig { seed: Some(1), trials: Some(5), ..Default::default() };
        let over = RawConfig { seed: Some(9), suite: Some("all".into()), ..Default::default() };
        let merged = overlay(base, over);
        assert_eq!(merged.seed, Some(9));
        assert_eq!(merged.trials, Some(5));
        assert_eq!(merged.suite.as_deref(), Some("all"));
    }
}
