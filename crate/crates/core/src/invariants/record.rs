use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::charsphere::{RationalSubspace, SphereSet};
use crate::exact;

/// How a record was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum Rule {
    CatalogEntry,
    FiniteExtensionSigma,
    OmegaFromSigma,
    OmegaJoinProduct,
    OmegaBounds,
    OmegaSufficiency { condition: u8 },
    Restriction,
}

/// Provenance tree; every leaf is a catalog entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivationCertificate {
    pub rule: Rule,
    pub group: String,
    pub degree: u32,
    pub citation: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subspace: Option<RationalSubspace>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<DerivationCertificate>,
}

impl DerivationCertificate {
    pub fn leaves_are_catalog(&self) -> bool {
        if self.premises.is_empty() {
            self.rule == Rule::CatalogEntry
        } else {
            self.premises.iter().all(DerivationCertificate::leaves_are_catalog)
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.premises.iter().map(DerivationCertificate::depth).max().unwrap_or(0)
    }
}

/// Known or derived invariants of one group in one degree.
///
/// All sets live in the sphere of `Hom(G, R)` written in `coordinates`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvariantRecord {
    pub group: String,
    pub degree: u32,
    pub coordinates: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<SphereSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<SphereSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_lower: Option<SphereSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_upper: Option<SphereSet>,
    pub provenance: DerivationCertificate,
}

impl InvariantRecord {
    pub fn dim(&self) -> usize {
        self.coordinates.len()
    }
}

/// Names for the basis vectors of a subspace, e.g. `b+d` or `2*x-y`.
pub fn describe_basis(w: &RationalSubspace, names: &[String]) -> Vec<String> {
    w.basis_q()
        .iter()
        .map(|row| {
            let mut out = String::new();
            for (c, name) in row.iter().zip(names) {
                if c.is_zero() {
                    continue;
                }
                if c.is_negative() {
                    out.push('-');
                } else if !out.is_empty() {
                    out.push('+');
                }
                let a = c.abs();
                if !a.is_one() {
                    out.push_str(&exact::format_q(&a));
                    out.push('*');
                }
                out.push_str(name);
            }
            out
        })
        .collect()
}
