use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::record::{DerivationCertificate, InvariantRecord, Rule};
use super::InvariantError;
use crate::charsphere::{equivalent, omega_from_sigma, Constraint, RationalRay, Relation, SphereSet};
use crate::group::{Letter, Presentation, PresentationFile, Word};

/// Groups with known invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupId {
    FreeAbelian(usize),
    Free(usize),
    BaumslagSolitar(u32),
    ThompsonF,
    Finite,
    Named(String),
}

impl GroupId {
    /// Parse `Z^k`, `F_k`, `BS(1,m)`, `ThompsonF`, `Finite`, or any other
    /// name (looked up among the loaded catalog entries).
    pub fn parse(text: &str) -> GroupId {
        let t = text.trim();
        if let Some(k) = t.strip_prefix("Z^").and_then(|k| k.parse().ok()) {
            return GroupId::FreeAbelian(k);
        }
        if t == "Z" {
            return GroupId::FreeAbelian(1);
        }
        if let Some(k) = t.strip_prefix("F_").and_then(|k| k.parse().ok()) {
            return GroupId::Free(k);
        }
        if let Some(m) = t
            .strip_prefix("BS(1,")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|m| m.trim().parse().ok())
        {
            return GroupId::BaumslagSolitar(m);
        }
        match t {
            "ThompsonF" | "F" => GroupId::ThompsonF,
            "Finite" => GroupId::Finite,
            _ => GroupId::Named(t.to_string()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            GroupId::FreeAbelian(k) => format!("Z^{k}"),
            GroupId::Free(k) => format!("F_{k}"),
            GroupId::BaumslagSolitar(m) => format!("BS(1,{m})"),
            GroupId::ThompsonF => "ThompsonF".into(),
            GroupId::Finite => "Finite".into(),
            GroupId::Named(s) => s.clone(),
        }
    }
}

/// On-disk catalog entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub id: String,
    pub degree: u32,
    pub coordinates: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<SphereSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<SphereSet>,
    pub citation: String,
    /// Presentation the coordinates refer to; used to recognise the group.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation: Option<PresentationFile>,
}

impl CatalogEntry {
    fn validate(&self) -> Result<(), InvariantError> {
        if let Some(p) = &self.presentation {
            Presentation::from_file(p)
                .map_err(|e| InvariantError::InconsistentCatalog(format!("{}: {e}", self.id)))?;
        }
        let dim = self.coordinates.len();
        for s in [&self.sigma, &self.omega].into_iter().flatten() {
            s.validate()?;
            if s.dim() != dim {
                return Err(InvariantError::InconsistentCatalog(format!(
                    "{}: set of dimension {} over {} coordinates",
                    self.id,
                    s.dim(),
                    dim
                )));
            }
        }
        if let (Some(sigma), Some(omega)) = (&self.sigma, &self.omega) {
            if !equivalent(&omega_from_sigma(sigma)?, omega)? {
                return Err(InvariantError::InconsistentCatalog(format!(
                    "{}: omega differs from the pi/2 rule applied to sigma",
                    self.id
                )));
            }
        }
        Ok(())
    }

    fn record(&self) -> InvariantRecord {
        InvariantRecord {
            group: self.id.clone(),
            degree: self.degree,
            coordinates: self.coordinates.clone(),
            sigma: self.sigma.clone(),
            omega: self.omega.clone(),
            omega_lower: None,
            omega_upper: None,
            provenance: DerivationCertificate {
                rule: Rule::CatalogEntry,
                group: self.id.clone(),
                degree: self.degree,
                citation: self.citation.clone(),
                subspace: None,
                premises: Vec::new(),
            },
        }
    }
}

/// Built-in entries plus entries loaded from files.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    named: BTreeMap<(String, u32), CatalogEntry>,
}

fn names(prefix: &str, k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("{prefix}{i}")).collect()
}

fn ray(v: &[i64]) -> RationalRay {
    RationalRay::new(v)
}

fn thompson_omega() -> SphereSet {
    SphereSet::cone(
        2,
        vec![
            Constraint::from_i64(&[-1, 0], Relation::Ge),
            Constraint::from_i64(&[1, 1], Relation::Ge),
        ],
    )
    .expect("dimension 2")
}

fn builtin(id: &GroupId, n: u32) -> Result<CatalogEntry, InvariantError> {
    let unknown_degree = || InvariantError::UnknownDegree {
        group: id.label(),
        degree: n,
    };
    if n == 0 {
        return Err(unknown_degree());
    }
    let entry = |coordinates: Vec<String>, sigma: SphereSet, omega: SphereSet, citation: &str| CatalogEntry {
        id: id.label(),
        degree: n,
        coordinates,
        sigma: Some(sigma),
        omega: Some(omega),
        citation: citation.into(),
        presentation: None,
    };
    Ok(match id {
        GroupId::FreeAbelian(k) | GroupId::Free(k @ 1) if n <= 2 => {
            let k = *k;
            let full = SphereSet::full(k);
            let coords = if matches!(id, GroupId::Free(_)) {
                vec!["x1".to_string()]
            } else {
                names("z", k)
            };
            entry(coords, full.clone(), full, "abelian groups: every direction is in Sigma")
        }
        GroupId::Free(k) if n <= 2 => {
            let empty = SphereSet::empty(*k);
            entry(names("x", *k), empty.clone(), empty, "non-abelian free groups: Sigma is empty")
        }
        GroupId::BaumslagSolitar(m) if n == 1 && *m >= 2 => {
            let plus = SphereSet::rays(1, [ray(&[1])])?;
            entry(
                vec!["b".into()],
                plus.clone(),
                plus,
                "BS(1,m) = <a,b | b^-1 a b a^-m>: Sigma^1 misses only the character b -> -1",
            )
        }
        GroupId::ThompsonF if n == 1 => entry(
            vec!["x0".into(), "x1".into()],
            SphereSet::complement(SphereSet::rays(2, [ray(&[1, 0]), ray(&[-1, -1])])?),
            thompson_omega(),
            "Thompson's F: Sigma^1 complement is {chi1, chi2}, chi1 = (1,0), chi2 = (-1,-1)",
        ),
        GroupId::ThompsonF if n == 2 => entry(
            vec!["x0".into(), "x1".into()],
            SphereSet::complement(SphereSet::cone(
                2,
                vec![
                    Constraint::from_i64(&[0, -1], Relation::Ge),
                    Constraint::from_i64(&[1, -1], Relation::Ge),
                ],
            )?),
            thompson_omega(),
            "Thompson's F: Sigma^2 complement is the closed arc from chi1 to chi2 through the south pole",
        ),
        GroupId::Finite => entry(
            Vec::new(),
            SphereSet::empty(0),
            SphereSet::empty(0),
            "finite groups: Hom(G, R) = 0",
        ),
        GroupId::Named(name) => return Err(InvariantError::UnknownGroup(name.clone())),
        _ => return Err(unknown_degree()),
    })
}

impl Catalog {
    pub fn builtin() -> Self {
        Catalog::default()
    }

    pub fn add(&mut self, entry: CatalogEntry) -> Result<(), InvariantError> {
        entry.validate()?;
        self.named.insert((entry.id.clone(), entry.degree), entry);
        Ok(())
    }

    pub fn load_json(&mut self, text: &str) -> Result<(), InvariantError> {
        let entries: Vec<CatalogEntry> =
            serde_json::from_str(text).map_err(|e| InvariantError::Json(e.to_string()))?;
        entries.into_iter().try_for_each(|e| self.add(e))
    }

    pub fn load_file(&mut self, path: &Path) -> Result<(), InvariantError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| InvariantError::Json(format!("{}: {e}", path.display())))?;
        self.load_json(&text)
    }

    pub fn entry(&self, id: &str, n: u32) -> Result<CatalogEntry, InvariantError> {
        if let Some(e) = self.named.get(&(id.trim().to_string(), n)) {
            return Ok(e.clone());
        }
        let gid = GroupId::parse(id);
        if let GroupId::Named(name) = &gid {
            if self.named.keys().any(|(k, _)| k == name) {
                return Err(InvariantError::UnknownDegree {
                    group: name.clone(),
                    degree: n,
                });
            }
        }
        builtin(&gid, n)
    }

    /// Catalog identifier of a presentation, recognised up to renaming of
    /// generators (order matters).
    pub fn identify(&self, p: &Presentation) -> Option<String> {
        let shape = |q: &Presentation| (q.num_generators(), q.relators().to_vec());
        for e in self.named.values() {
            if let Some(file) = &e.presentation {
                if Presentation::from_file(file).ok().map(|q| shape(&q)) == Some(shape(p)) {
                    return Some(e.id.clone());
                }
            }
        }
        let n = p.num_generators();
        let rels = p.relators();
        if rels.is_empty() {
            return Some(if n == 1 { "Z".into() } else { format!("F_{n}") });
        }
        if n == 0 {
            return None;
        }
        if is_free_abelian(p) {
            return Some(format!("Z^{n}"));
        }
        if n == 2 && rels.len() == 1 {
            let r = rels[0].letters();
            let head = [Letter::neg(1), Letter::pos(0), Letter::pos(1)];
            if r.len() > 3 && r[..3] == head && r[3..].iter().all(|l| *l == Letter::neg(0)) {
                return Some(format!("BS(1,{})", r.len() - 3));
            }
        }
        if n == 2 && rels == thompson_relators().as_slice() {
            return Some("ThompsonF".into());
        }
        None
    }

    /// Identifiers of the loaded (non-builtin) entries.
    pub fn named_entries(&self) -> Vec<(String, u32)> {
        self.named.keys().cloned().collect()
    }
}

fn is_free_abelian(p: &Presentation) -> bool {
    let n = p.num_generators();
    let mut pairs = std::collections::BTreeSet::new();
    for r in p.relators() {
        let l = r.letters();
        if l.len() != 4 || l[0].generator == l[1].generator {
            return false;
        }
        let (a, b) = (l[0], l[1]);
        if l[2] != a.inverted() || l[3] != b.inverted() {
            return false;
        }
        pairs.insert((a.generator.min(b.generator), a.generator.max(b.generator)));
    }
    pairs.len() == n * (n - 1) / 2
}

/// `[x0 x1^-1, x0^-1 x1 x0]` and `[x0 x1^-1, x0^-2 x1 x0^2]`.
fn thompson_relators() -> Vec<Word> {
    let p = Presentation::parse(
        &["x0", "x1"],
        &[
            "x0 x1^-1 x0^-1 x1 x0 x1 x0^-1 x0^-1 x1^-1 x0",
            "x0 x1^-1 x0^-1 x0^-1 x1 x0 x0 x1 x0^-1 x0^-1 x0^-1 x1^-1 x0 x0",
        ],
    )
    .expect("valid relators");
    p.relators().to_vec()
}

/// Record for a catalog group.
pub fn lookup_known(catalog: &Catalog, id: &str, n: u32) -> Result<InvariantRecord, InvariantError> {
    Ok(catalog.entry(id, n)?.record())
}
