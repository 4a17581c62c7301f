//! Machine-readable verification certificates.
//!
//! A certificate records what was checked, over which parameter box, with
//! which defaults, and the verdict. Serialized JSON is deterministic for a
//! fixed configuration: map keys are ordered and interval endpoints carry
//! exact hexadecimal renderings next to the (lossy) decimal ones.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::interval::Interval;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Verified,
    Failed,
    Inconclusive,
}

impl Status {
    /// Conjunction fold: verified only if every leaf verified; any failed
    /// leaf dominates inconclusive ones.
    pub fn combine(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (Verified, Verified) => Verified,
            (Failed, _) | (_, Failed) => Failed,
            _ => Inconclusive,
        }
    }

    pub fn combine_all<I: IntoIterator<Item = Status>>(items: I) -> Status {
        items
            .into_iter()
            .fold(Status::Verified, |acc, s| acc.combine(s))
    }
}

/// Interval endpoint pair in exact hex plus decimal rendering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalRecord {
    pub hex: [String; 2],
    pub dec: [f64; 2],
}

impl IntervalRecord {
    pub fn from_interval<T: Scalar>(iv: Interval<T>) -> Self {
        let lo = iv.lo().to_f64_exact();
        let hi = iv.hi().to_f64_exact();
        IntervalRecord {
            hex: [hex_f64(lo), hex_f64(hi)],
            dec: [lo, hi],
        }
    }
}

/// C-style hexadecimal float rendering (exact, reversible).
pub fn hex_f64(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0x0p+0".into()
        } else {
            "0x0p+0".into()
        };
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let mantissa = bits & 0x000f_ffff_ffff_ffff;
    if exp_bits == 0 {
        // subnormal: 0x0.<mant>p-1022
        format!("{sign}0x0.{mantissa:013x}p-1022")
    } else {
        format!("{sign}0x1.{mantissa:013x}p{:+}", exp_bits - 1023)
    }
}

/// Parse the exact hex rendering back (used by round-trip tests).
pub fn parse_hex_f64(s: &str) -> Option<f64> {
    match s {
        "nan" => return Some(f64::NAN),
        "inf" => return Some(f64::INFINITY),
        "-inf" => return Some(f64::NEG_INFINITY),
        _ => {}
    }
    let (sign, rest) = if let Some(r) = s.strip_prefix('-') {
        (1u64, r)
    } else {
        (0u64, s)
    };
    let rest = rest.strip_prefix("0x")?;
    if rest == "0p+0" {
        return Some(f64::from_bits(sign << 63));
    }
    let (lead, rest) = rest.split_at(1);
    let rest = rest.strip_prefix('.')?;
    let (mant_str, exp_str) = rest.split_once('p')?;
    let mantissa = u64::from_str_radix(mant_str, 16).ok()?;
    let exp: i64 = exp_str.parse().ok()?;
    let exp_bits = if lead == "0" { 0 } else { (exp + 1023) as u64 };
    Some(f64::from_bits((sign << 63) | (exp_bits << 52) | mantissa))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Num(f64),
    Str(String),
    Interval(IntervalRecord),
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Stats {
    pub subdivisions: u64,
    pub max_depth_hit: u32,
    pub wall_time_s: f64,
    pub worker_count: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Toolchain {
    pub version: String,
    pub rounding_mode: String,
    pub defaults_hash: String,
}

impl Default for Toolchain {
    fn default() -> Self {
        Toolchain {
            version: env!("CARGO_PKG_VERSION").to_string(),
            rounding_mode: "nextafter-outward".to_string(),
            defaults_hash: String::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    pub task: String,
    pub params: BTreeMap<String, ParamValue>,
    pub status: Status,
    pub enclosures: BTreeMap<String, IntervalRecord>,
    pub notes: Vec<String>,
    pub stats: Stats,
    pub toolchain: Toolchain,
}

impl Certificate {
    pub fn new(task: &str) -> Self {
        Certificate {
            task: task.to_string(),
            params: BTreeMap::new(),
            status: Status::Inconclusive,
            enclosures: BTreeMap::new(),
            notes: Vec::new(),
            stats: Stats::default(),
            toolchain: Toolchain::default(),
        }
    }

    pub fn param_interval<T: Scalar>(mut self, key: &str, iv: Interval<T>) -> Self {
        self.params.insert(
            key.to_string(),
            ParamValue::Interval(IntervalRecord::from_interval(iv)),
        );
        self
    }

    pub fn param_int(mut self, key: &str, v: i64) -> Self {
        self.params.insert(key.to_string(), ParamValue::Int(v));
        self
    }

    pub fn param_str(mut self, key: &str, v: &str) -> Self {
        self.params
            .insert(key.to_string(), ParamValue::Str(v.to_string()));
        self
    }

    pub fn enclosure<T: Scalar>(mut self, key: &str, iv: Interval<T>) -> Self {
        self.enclosures
            .insert(key.to_string(), IntervalRecord::from_interval(iv));
        self
    }

    pub fn note(mut self, s: &str) -> Self {
        self.notes.push(s.to_string());
        self
    }

    pub fn status(mut self, s: Status) -> Self {
        self.status = s;
        self
    }

    pub fn finish(mut self, started: Instant) -> Self {
        self.stats.wall_time_s = started.elapsed().as_secs_f64();
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialization")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_round_trip() {
        for &x in &[
            0.0,
            -0.0,
            1.0,
            -1.5,
            std::f64::consts::PI,
            f64::MAX,
            f64::MIN_POSITIVE,
            5e-324,
            2.3411172805,
            f64::INFINITY,
        ] {
            let s = hex_f64(x);
            let back = parse_hex_f64(&s).unwrap();
            assert!(
                back == x && back.is_sign_negative() == x.is_sign_negative(),
                "{x} -> {s} -> {back}"
            );
        }
    }

    #[test]
    fn status_fold_soundness() {
        use Status::*;
        assert_eq!(Status::combine_all([Verified, Verified]), Verified);
        assert_eq!(Status::combine_all([Verified, Inconclusive]), Inconclusive);
        assert_eq!(Status::combine_all([Inconclusive, Failed]), Failed);
        assert_eq!(Status::combine_all([]), Verified);
        // fuzz: verified appears only for all-verified multisets
        let opts = [Verified, Failed, Inconclusive];
        for mask in 0..3u32.pow(6) {
            let mut m = mask;
            let mut set = Vec::new();
            for _ in 0..6 {
                set.push(opts[(m % 3) as usize]);
                m /= 3;
            }
            let folded = Status::combine_all(set.iter().copied());
            let all_v = set.iter().all(|&s| s == Verified);
            assert_eq!(folded == Verified, all_v);
            let any_f = set.iter().any(|&s| s == Failed);
            assert_eq!(folded == Failed, any_f);
        }
    }
}
