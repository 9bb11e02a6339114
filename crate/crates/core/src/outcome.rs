use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::linalg::{ComplexMatrix, Tolerances};
use crate::maps::MapDescriptor;

/// Result of verifying one inequality instance.
///
/// `holds ⇔ margin ≥ −tol.margin · scale`. `equality` flags
/// `|margin| ≤ 10 · tol.margin · scale` and is informational only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub inequality_id: String,
    pub holds: bool,
    pub margin: f64,
    pub scale: f64,
    pub equality: bool,
    pub residuals: Vec<Named<f64>>,
    pub instance_digest: String,
    pub hypothesis_report: Vec<Named<bool>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Named<T> {
    pub name: String,
    pub value: T,
}

impl CheckOutcome {
    pub fn residual(&self, name: &str) -> Option<f64> {
        self.residuals.iter().find(|r| r.name == name).map(|r| r.value)
    }

    /// margin / scale
    pub fn relative_margin(&self) -> f64 {
        self.margin / self.scale
    }

    pub fn hypotheses_hold(&self) -> bool {
        self.hypothesis_report.iter().all(|h| h.value)
    }
}

/// Stable SHA-256 digest of an instance, truncated to 16 hex characters.
#[derive(Clone)]
pub struct InstanceDigest {
    hasher: Sha256,
}

impl InstanceDigest {
    pub fn new(label: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update((label.len() as u64).to_le_bytes());
        hasher.update(label.as_bytes());
        Self { hasher }
    }

    pub fn matrix(mut self, m: &ComplexMatrix) -> Self {
        self.hasher.update((m.rows() as u64).to_le_bytes());
        self.hasher.update((m.cols() as u64).to_le_bytes());
        for z in m.row_major() {
            self.hasher.update(z.re.to_bits().to_le_bytes());
            self.hasher.update(z.im.to_bits().to_le_bytes());
        }
        self
    }

    pub fn scalar(mut self, x: f64) -> Self {
        self.hasher.update(x.to_bits().to_le_bytes());
        self
    }

    pub fn text(mut self, s: &str) -> Self {
        self.hasher.update((s.len() as u64).to_le_bytes());
        self.hasher.update(s.as_bytes());
        self
    }

    pub fn finish(self) -> String {
        self.hasher.finalize()[..8]
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// Accumulates hypotheses and residuals, then fixes the verdict.
pub struct OutcomeBuilder {
    id: String,
    digest: InstanceDigest,
    residuals: Vec<Named<f64>>,
    hypotheses: Vec<Named<bool>>,
}

impl OutcomeBuilder {
    pub fn new(id: &str) -> Self {
        Self {
            id: id.to_string(),
            digest: InstanceDigest::new(id),
            residuals: Vec::new(),
            hypotheses: Vec::new(),
        }
    }

    pub fn digest_matrix(mut self, m: &ComplexMatrix) -> Self {
        self.digest = self.digest.matrix(m);
        self
    }

    pub fn digest_scalar(mut self, x: f64) -> Self {
        self.digest = self.digest.scalar(x);
        self
    }

    pub fn digest_text(mut self, s: &str) -> Self {
        self.digest = self.digest.text(s);
        self
    }

    /// Map name together with its parameters.
    pub fn digest_map(mut self, map: &MapDescriptor) -> Self {
        self.digest = self.digest.text(&map.name());
        for p in map.parameters() {
            self.digest = self.digest.matrix(&p);
        }
        self
    }

    pub fn hypothesis(&mut self, name: &str, value: bool) {
        self.hypotheses.push(Named {
            name: name.to_string(),
            value,
        });
    }

    pub fn residual(&mut self, name: &str, value: f64) {
        self.residuals.push(Named {
            name: name.to_string(),
            value,
        });
    }

    pub fn finish(self, margin: f64, scale: f64, tol: &Tolerances) -> CheckOutcome {
        let scale = scale.max(1.0);
        CheckOutcome {
            inequality_id: self.id,
            holds: margin >= -tol.margin * scale,
            margin,
            scale,
            equality: margin.abs() <= 10.0 * tol.margin * scale,
            residuals: self.residuals,
            instance_digest: self.digest.finish(),
            hypothesis_report: self.hypotheses,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable_and_input_sensitive() {
        let i = ComplexMatrix::identity(2);
        let a = InstanceDigest::new("x").matrix(&i).finish();
        let b = InstanceDigest::new("x").matrix(&i).finish();
        let c = InstanceDigest::new("x").matrix(&i.scale(2.0)).finish();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 16);
    }

    #[test]
    fn verdict_follows_scaled_margin() {
        let tol = Tolerances::default();
        let o = OutcomeBuilder::new("t").finish(-5e-9, 1.0, &tol);
        assert!(o.holds && o.equality);
        let o = OutcomeBuilder::new("t").finish(-5e-8, 1.0, &tol);
        assert!(!o.holds);
        let o = OutcomeBuilder::new("t").finish(-5e-8, 10.0, &tol);
        assert!(o.holds);
    }
}
