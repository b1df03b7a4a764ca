//! Structured check results and stable input digests.

use serde::{Deserialize, Serialize};

use crate::grid::Signal;
use crate::scalar::Real;

/// Outcome of verifying one identity or inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckCertificate {
    pub identity: String,
    pub frame: String,
    pub max_rel_err: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub inputs_digest: String,
}

impl CheckCertificate {
    /// Pass iff `max_rel_err` is finite and below `tolerance`.
    pub fn new(identity: impl Into<String>, frame: impl Into<String>, max_rel_err: f64, tolerance: f64, digest: String) -> Self {
        Self {
            identity: identity.into(),
            frame: frame.into(),
            max_rel_err,
            tolerance,
            pass: max_rel_err.is_finite() && max_rel_err < tolerance,
            inputs_digest: digest,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }
}

/// FNV-1a over a byte stream, rendered as 16 hex digits.
#[derive(Debug, Clone, Copy)]
pub struct Digest(u64);

impl Default for Digest {
    fn default() -> Self {
        Self(0xcbf2_9ce4_8422_2325)
    }
}

impl Digest {
    pub fn bytes(mut self, data: &[u8]) -> Self {
        for b in data {
            self.0 ^= *b as u64;
            self.0 = self.0.wrapping_mul(0x0100_0000_01b3);
        }
        self
    }

    pub fn f64(self, x: f64) -> Self {
        self.bytes(&x.to_le_bytes())
    }

    pub fn signal<T: Real>(self, f: &Signal<T>) -> Self {
        let g = f.grid();
        let mut d = self.f64(g.dim() as f64).f64(g.extent().to_f64()).f64(g.samples() as f64);
        for v in f.values() {
            d = d.f64(v.re.to_f64()).f64(v.im.to_f64());
        }
        d
    }

    pub fn value(&self) -> u64 {
        self.0
    }

    pub fn hex(&self) -> String {
        format!("{:016x}", self.0)
    }
}

pub fn digest_signals<T: Real>(fs: &[&Signal<T>]) -> String {
    fs.iter().fold(Digest::default(), |d, f| d.signal(f)).hex()
}

/// `‖a - b‖₂ / ‖b‖₂`, or the absolute gap when `b = 0`.
pub fn rel_l2<T: Real>(a: &Signal<T>, b: &Signal<T>) -> f64 {
    let d = a.sub(b).l2_norm().to_f64();
    let n = b.l2_norm().to_f64();
    if n == 0.0 {
        d
    } else {
        d / n
    }
}
