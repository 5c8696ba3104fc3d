use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::action::{compute_actions, ActionMatrix};
use super::ExtensionError;
use crate::group::{enumerate_finite, FiniteGroup, Presentation, PresentationFile, Word, DEFAULT_COSET_CAP};

/// `nu(b)^m = w` in `G`, with `w` a word over the generators of `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderEntry {
    pub m: u32,
    pub w: Word,
}

/// Lift of a relator of `K`: `nu(relator) = w` in `G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelatorLift {
    pub relator: Word,
    pub w: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Flavor {
    /// `K` finite; orders (one per generator of `K`) and optional lifts of the
    /// remaining relators of `K`.
    FiniteQuotient {
        orders: Vec<OrderEntry>,
        lifts: Vec<RelatorLift>,
        k_group: FiniteGroup,
    },
    /// `G = H x| K` with `nu` a homomorphism.
    Split,
}

/// A short exact sequence `1 -> H -> G -> K -> 1` with transversal data.
#[derive(Debug, Clone)]
pub struct ExtensionSpec {
    h: Arc<Presentation>,
    k: Arc<Presentation>,
    flavor: Flavor,
    /// `conjugation[b][a]` is `w_{a,b}`, with `nu(b) a nu(b)^-1 = w_{a,b}`.
    conjugation: Vec<Vec<Word>>,
    actions: Vec<ActionMatrix>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlavorTag {
    Finite,
    Split,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderFile {
    pub m: u32,
    pub w: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftFile {
    pub relator: String,
    pub w: String,
}

/// On-disk form of an [`ExtensionSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionSpecFile {
    #[serde(rename = "H")]
    pub h: PresentationFile,
    #[serde(rename = "K")]
    pub k: PresentationFile,
    pub flavor: FlavorTag,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub orders: BTreeMap<String, OrderFile>,
    /// Keys `"b:a"`.
    pub conjugation: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relator_lifts: Vec<LiftFile>,
}

/// Parse a conjugation table with keys `"b:a"` against `H` and `K`.
pub(crate) fn parse_conjugation(
    h: &Presentation,
    k: &Presentation,
    table: &BTreeMap<String, String>,
) -> Result<Vec<Vec<Word>>, ExtensionError> {
    let mut out: Vec<Vec<Option<Word>>> = vec![vec![None; h.num_generators()]; k.num_generators()];
    for (key, word) in table {
        let (b, a) = key
            .split_once(':')
            .ok_or_else(|| ExtensionError::BadKey(key.clone()))?;
        let bi = k
            .generator_index(b)
            .ok_or_else(|| ExtensionError::BadKey(key.clone()))?;
        let ai = h
            .generator_index(a)
            .ok_or_else(|| ExtensionError::BadKey(key.clone()))?;
        out[bi][ai] = Some(h.parse_word(word)?);
    }
    out.into_iter()
        .enumerate()
        .map(|(bi, row)| {
            row.into_iter()
                .enumerate()
                .map(|(ai, w)| {
                    w.ok_or_else(|| ExtensionError::MissingConjugation {
                        k_generator: k.generators()[bi].clone(),
                        h_generator: h.generators()[ai].clone(),
                    })
                })
                .collect()
        })
        .collect()
}

impl ExtensionSpec {
    pub fn from_file(file: &ExtensionSpecFile) -> Result<Self, ExtensionError> {
        Self::from_file_with_cap(file, DEFAULT_COSET_CAP)
    }

    pub fn from_file_with_cap(file: &ExtensionSpecFile, cap: usize) -> Result<Self, ExtensionError> {
        let h = Presentation::from_file(&file.h)?;
        let k = Presentation::from_file(&file.k)?;
        for name in k.generators() {
            if h.generator_index(name).is_some() {
                return Err(ExtensionError::NameClash(name.clone()));
            }
        }
        let conjugation = parse_conjugation(&h, &k, &file.conjugation)?;
        let flavor = match file.flavor {
            FlavorTag::Split => {
                if !file.orders.is_empty() || !file.relator_lifts.is_empty() {
                    return Err(ExtensionError::WrongFlavor(
                        "split specs take no orders or relator lifts".into(),
                    ));
                }
                Flavor::Split
            }
            FlavorTag::Finite => {
                let k_group = enumerate_finite(&k, cap).map_err(|_| ExtensionError::KNotFinite(cap))?;
                let mut orders = Vec::with_capacity(k.num_generators());
                for (bi, b) in k.generators().iter().enumerate() {
                    let entry = file
                        .orders
                        .get(b)
                        .ok_or_else(|| ExtensionError::MissingOrder(b.clone()))?;
                    let power = Word::from_letters(vec![crate::group::Letter::pos(bi)]).power(entry.m);
                    if entry.m == 0 || !k_group.is_trivial(&power) {
                        return Err(ExtensionError::BadOrder {
                            k_generator: b.clone(),
                            m: entry.m,
                        });
                    }
                    orders.push(OrderEntry {
                        m: entry.m,
                        w: h.parse_word(&entry.w)?,
                    });
                }
                if let Some(extra) = file.orders.keys().find(|b| k.generator_index(b).is_none()) {
                    return Err(ExtensionError::BadKey(extra.clone()));
                }
                let mut lifts = Vec::new();
                for l in &file.relator_lifts {
                    let relator = k.parse_word(&l.relator)?;
                    if !k_group.is_trivial(&relator) {
                        return Err(ExtensionError::NotARelation(l.relator.clone()));
                    }
                    lifts.push(RelatorLift {
                        relator,
                        w: h.parse_word(&l.w)?,
                    });
                }
                for (i, r) in k.relators().iter().enumerate() {
                    let covered = is_order_relator(r, &orders) || lifts.iter().any(|l| &l.relator == r);
                    if !covered {
                        return Err(ExtensionError::MissingRelatorLift(i));
                    }
                }
                Flavor::FiniteQuotient {
                    orders,
                    lifts,
                    k_group,
                }
            }
        };
        let actions = compute_actions(&h, &k, &conjugation)?;
        Ok(ExtensionSpec {
            h: Arc::new(h),
            k: Arc::new(k),
            flavor,
            conjugation,
            actions,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, ExtensionError> {
        let file: ExtensionSpecFile =
            serde_json::from_str(text).map_err(|e| ExtensionError::Json(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn to_file(&self) -> ExtensionSpecFile {
        let mut conjugation = BTreeMap::new();
        for (bi, row) in self.conjugation.iter().enumerate() {
            for (ai, w) in row.iter().enumerate() {
                conjugation.insert(
                    format!("{}:{}", self.k.generators()[bi], self.h.generators()[ai]),
                    self.h.format_word(w),
                );
            }
        }
        let (flavor, orders, relator_lifts) = match &self.flavor {
            Flavor::Split => (FlavorTag::Split, BTreeMap::new(), Vec::new()),
            Flavor::FiniteQuotient { orders, lifts, .. } => (
                FlavorTag::Finite,
                orders
                    .iter()
                    .zip(self.k.generators())
                    .map(|(o, b)| {
                        (
                            b.clone(),
                            OrderFile {
                                m: o.m,
                                w: self.h.format_word(&o.w),
                            },
                        )
                    })
                    .collect(),
                lifts
                    .iter()
                    .map(|l| LiftFile {
                        relator: self.k.format_word(&l.relator),
                        w: self.h.format_word(&l.w),
                    })
                    .collect(),
            ),
        };
        ExtensionSpecFile {
            h: self.h.to_file(),
            k: self.k.to_file(),
            flavor,
            orders,
            conjugation,
            relator_lifts,
        }
    }

    pub fn h(&self) -> &Arc<Presentation> {
        &self.h
    }

    pub fn k(&self) -> &Arc<Presentation> {
        &self.k
    }

    pub fn flavor(&self) -> &Flavor {
        &self.flavor
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.flavor, Flavor::FiniteQuotient { .. })
    }

    /// `w_{a,b}` for K-generator `b` and H-generator `a`.
    pub fn conjugate(&self, b: usize, a: usize) -> &Word {
        &self.conjugation[b][a]
    }

    pub fn conjugation(&self) -> &[Vec<Word>] {
        &self.conjugation
    }

    pub fn actions(&self) -> &[ActionMatrix] {
        &self.actions
    }

    /// The finite quotient, for the finite flavor.
    pub fn k_group(&self) -> Option<&FiniteGroup> {
        match &self.flavor {
            Flavor::FiniteQuotient { k_group, .. } => Some(k_group),
            Flavor::Split => None,
        }
    }
}

fn is_order_relator(r: &Word, orders: &[OrderEntry]) -> bool {
    let letters = r.letters();
    let Some(first) = letters.first() else {
        return false;
    };
    letters.iter().all(|l| l == first)
        && !first.inverse
        && orders[first.generator].m as usize == letters.len()
}
