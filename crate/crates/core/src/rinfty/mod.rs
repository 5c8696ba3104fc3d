//! Twisted-conjugacy (R-infinity) certificates from Omega invariants.

mod automorphism;

pub use automorphism::AutomorphismSpec;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::charsphere::{
    count_rational_points, restrict_to_subspace, spherical_join, PointCount, RationalRay, SphereError, SphereSet,
};
use crate::exact::Q;
use crate::extension::{
    extend_character_finite, fix_subspace, hom_space_split, ExtensionError, ExtensionSpec,
};
use crate::charsphere::make_character;
use crate::group::{enumerate_finite, free_reduce, GroupError, HomBasis, IntegerMatrix, Word, DEFAULT_COSET_CAP};
use crate::invariants::{restrict_record, DerivationCertificate, InvariantError, InvariantRecord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RinftyError {
    #[error("record has no {0}")]
    MissingInvariant(&'static str),
    #[error("record has degree {found}, expected {expected}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("record has {found} coordinates, expected {expected}")]
    CoordinateMismatch { expected: usize, found: usize },
    #[error("not an automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("cannot decide whether a word is trivial in K: {0}")]
    Undecided(String),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Extension(#[from] ExtensionError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Sphere(#[from] SphereError),
}

/// Number of twisted conjugacy classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reidemeister {
    Finite(BigInt),
    Infinite,
}

impl Reidemeister {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Reidemeister::Infinite)
    }
}

impl fmt::Display for Reidemeister {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reidemeister::Finite(n) => write!(f, "{n}"),
            Reidemeister::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Reidemeister {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Reidemeister {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        if text == "infinite" {
            return Ok(Reidemeister::Infinite);
        }
        text.parse::<BigInt>()
            .ok()
            .filter(|n| n.is_positive())
            .map(Reidemeister::Finite)
            .ok_or_else(|| serde::de::Error::custom(format!("bad Reidemeister number `{text}`")))
    }
}

/// `R(phi)` for `phi` acting on `Z^m` by `m`: `|det(M - I)|`, or infinite
/// when that determinant vanishes.
pub fn reidemeister_abelian(m: &IntegerMatrix) -> Reidemeister {
    assert_eq!(m.rows(), m.cols(), "square matrix required");
    let mut d = m.clone();
    for i in 0..m.rows() {
        d[(i, i)] -= 1;
    }
    let det = d.determinant();
    if det.is_zero() {
        Reidemeister::Infinite
    } else {
        Reidemeister::Finite(det.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    RInfinityForAutomorphism,
    RInfinityForGroup,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RinftyRule {
    SinglePointOmega,
    FiniteExtRationalPoint,
    SplitExtJoinPoint,
    QuotientLift,
}

/// Which factor of a join carries the single point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    H,
    K,
}

/// How a quotient-lift certificate was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lift {
    /// `R(phi-bar) = infinite` on a quotient.
    FromQuotient,
    /// `R(phi') = infinite` on an invariant normal subgroup and the induced
    /// map on the quotient has finitely many fixed points.
    FromSubgroup,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RinftyCertificate {
    pub verdict: Verdict,
    pub rule: RinftyRule,
    pub group: String,
    pub degree: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<RationalRay>,
    /// Generator values of a character of G whose kernel is the subgroup N.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_q_vec")]
    pub kernel_character: Option<Vec<Q>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<Branch>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lift: Option<Lift>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient_matrix: Option<IntegerMatrix>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<DerivationCertificate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lifted_from: Vec<RinftyCertificate>,
}

mod opt_q_vec {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::exact::{self, Q};

    pub fn serialize<S: Serializer>(v: &Option<Vec<Q>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_seq(v.iter().map(exact::format_q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Q>>, D::Error> {
        let raw: Option<Vec<String>> = Option::deserialize(d)?;
        raw.map(|v| {
            v.iter()
                .map(|t| exact::parse_q(t).map_err(serde::de::Error::custom))
                .collect()
        })
        .transpose()
    }
}

impl RinftyCertificate {
    fn new(verdict: Verdict, rule: RinftyRule, group: String, degree: u32) -> Self {
        RinftyCertificate {
            verdict,
            rule,
            group,
            degree,
            witness: None,
            kernel_character: None,
            branch: None,
            lift: None,
            quotient_matrix: None,
            premises: Vec::new(),
            lifted_from: Vec::new(),
        }
    }

    /// Rules built on a single rational point must carry it.
    pub fn is_well_formed(&self) -> bool {
        match self.rule {
            RinftyRule::QuotientLift => self.lift.is_some(),
            _ => self.witness.is_some(),
        }
    }
}

fn single_ray(s: &SphereSet) -> Option<RationalRay> {
    match count_rational_points(s) {
        PointCount::One(r) => Some(r),
        _ => None,
    }
}

fn check_degree(rec: &InvariantRecord, n: u32) -> Result<(), RinftyError> {
    if rec.degree != n {
        return Err(RinftyError::DegreeMismatch {
            expected: n,
            found: rec.degree,
        });
    }
    Ok(())
}

fn check_dim(rec: &InvariantRecord, expected: usize) -> Result<(), RinftyError> {
    if rec.dim() != expected {
        return Err(RinftyError::CoordinateMismatch {
            expected,
            found: rec.dim(),
        });
    }
    Ok(())
}

fn verdict(characteristic: bool) -> Verdict {
    if characteristic {
        Verdict::RInfinityForGroup
    } else {
        Verdict::RInfinityForAutomorphism
    }
}

/// R-infinity for the group itself when its Omega is a single point.
pub fn rinfty_single_point(rec: &InvariantRecord) -> Result<Option<RinftyCertificate>, RinftyError> {
    let omega = rec.omega.as_ref().ok_or(RinftyError::MissingInvariant("omega"))?;
    Ok(single_ray(omega).map(|r| {
        let mut c = RinftyCertificate::new(
            Verdict::RInfinityForGroup,
            RinftyRule::SinglePointOmega,
            rec.group.clone(),
            rec.degree,
        );
        c.witness = Some(r);
        c.premises = vec![rec.provenance.clone()];
        c
    }))
}

/// The set `T = Omega(H) on the fixed sphere` used by both extension rules.
pub fn omega_on_fix(spec: &ExtensionSpec, rec_h: &InvariantRecord) -> Result<InvariantRecord, RinftyError> {
    check_dim(rec_h, HomBasis::new(spec.h()).dim())?;
    if rec_h.omega.is_none() {
        return Err(RinftyError::MissingInvariant("omega"));
    }
    Ok(restrict_record(rec_h, &fix_subspace(spec))?)
}

/// Finite quotient: a single rational point in `T` gives `R(phi) = infinite`
/// for every automorphism leaving H invariant, and for the whole group when
/// the caller asserts that H is characteristic.
pub fn rinfty_finite_ext(
    spec: &ExtensionSpec,
    rec_h: &InvariantRecord,
    n: u32,
    characteristic: bool,
) -> Result<Option<RinftyCertificate>, RinftyError> {
    if !spec.is_finite() {
        return Err(ExtensionError::WrongFlavor("finite-quotient extension required".into()).into());
    }
    check_degree(rec_h, n)?;
    let t = omega_on_fix(spec, rec_h)?;
    let Some(r) = single_ray(t.omega.as_ref().expect("restricted omega")) else {
        return Ok(None);
    };
    let fix = fix_subspace(spec);
    let values = HomBasis::new(spec.h()).values(&fix.embed(&r.to_q()));
    let chi = extend_character_finite(spec, &make_character(spec.h(), values)?)?;
    let mut c = RinftyCertificate::new(
        verdict(characteristic),
        RinftyRule::FiniteExtRationalPoint,
        format!("G({})", rec_h.group),
        n,
    );
    c.witness = Some(r);
    c.kernel_character = Some(chi.values().to_vec());
    c.premises = vec![t.provenance];
    Ok(Some(c))
}

/// Split extension: a single rational point in `T * Omega(K)`.
pub fn rinfty_split_ext(
    spec: &ExtensionSpec,
    rec_h: &InvariantRecord,
    rec_k: &InvariantRecord,
    n: u32,
    characteristic: bool,
) -> Result<Option<RinftyCertificate>, RinftyError> {
    if spec.is_finite() {
        return Err(ExtensionError::WrongFlavor("split extension required".into()).into());
    }
    check_degree(rec_h, n)?;
    check_degree(rec_k, n)?;
    check_dim(rec_k, HomBasis::new(spec.k()).dim())?;
    let t = omega_on_fix(spec, rec_h)?;
    let omega_k = rec_k.omega.clone().ok_or(RinftyError::MissingInvariant("omega"))?;
    let fix = fix_subspace(spec);
    let joined = spherical_join(t.omega.clone().expect("restricted omega"), omega_k);
    let Some(r) = single_ray(&joined) else {
        return Ok(None);
    };
    let v = r.to_q();
    let (left, right) = v.split_at(fix.dim());
    let split = hom_space_split(spec)?;
    let chi = split.assemble(&fix.embed(left), right)?;
    let mut c = RinftyCertificate::new(
        verdict(characteristic),
        RinftyRule::SplitExtJoinPoint,
        format!("{} x| {}", rec_h.group, rec_k.group),
        n,
    );
    c.branch = Some(if left.iter().all(Zero::is_zero) { Branch::K } else { Branch::H });
    c.witness = Some(r);
    c.kernel_character = Some(chi.values().to_vec());
    c.premises = vec![t.provenance, rec_k.provenance.clone()];
    Ok(Some(c))
}

/// `R(phi-bar) = infinite` on a free abelian quotient lifts to `phi`.
pub fn quotient_lift(group: &str, quotient: &IntegerMatrix) -> Option<RinftyCertificate> {
    reidemeister_abelian(quotient).is_infinite().then(|| {
        let mut c = RinftyCertificate::new(
            Verdict::RInfinityForAutomorphism,
            RinftyRule::QuotientLift,
            group.to_string(),
            0,
        );
        c.lift = Some(Lift::FromQuotient);
        c.quotient_matrix = Some(quotient.clone());
        c
    })
}

/// Combination over caller-supplied facts: an R-infinity certificate for the
/// restriction to an invariant normal subgroup, plus finiteness of the fixed
/// set of the induced quotient map.
pub fn subgroup_lift(
    group: &str,
    restricted: RinftyCertificate,
    quotient_fix_finite: bool,
) -> Option<RinftyCertificate> {
    let ok = quotient_fix_finite && restricted.verdict != Verdict::Inconclusive;
    ok.then(|| {
        let mut c = RinftyCertificate::new(
            Verdict::RInfinityForAutomorphism,
            RinftyRule::QuotientLift,
            group.to_string(),
            restricted.degree,
        );
        c.lift = Some(Lift::FromSubgroup);
        c.lifted_from = vec![restricted];
        c
    })
}

/// `R` of the map induced by `phi` on the free part of the abelianization.
pub fn abelian_reidemeister(phi: &AutomorphismSpec) -> Result<Reidemeister, RinftyError> {
    Ok(reidemeister_abelian(&phi.free_part_matrix()?))
}

/// Whether `phi` maps H into H, for `phi` over the extension's presentation
/// (H generators first, then K generators).
pub fn check_h_invariant(phi: &AutomorphismSpec, spec: &ExtensionSpec) -> Result<bool, RinftyError> {
    let nh = spec.h().num_generators();
    let nk = spec.k().num_generators();
    if phi.owner().num_generators() != nh + nk {
        return Err(RinftyError::NotAnAutomorphism(
            "automorphism is not over the extension's presentation".into(),
        ));
    }
    let projections: Vec<Word> = phi.images()[..nh]
        .iter()
        .map(|w| {
            let kept = w
                .letters()
                .iter()
                .filter(|l| l.generator >= nh)
                .map(|l| crate::group::Letter::new(l.generator - nh, l.inverse))
                .collect();
            free_reduce(&Word::from_letters(kept))
        })
        .collect();
    if projections.iter().all(Word::is_empty) {
        return Ok(true);
    }
    let k_ab = crate::group::abelianization(spec.k());
    for w in &projections {
        let e: Vec<BigInt> = w.exponent_vector(nk).into_iter().map(BigInt::from).collect();
        if k_ab.projection.mul_vec(&e).iter().any(|x| !x.is_zero()) {
            return Ok(false);
        }
    }
    let table = match spec.k_group() {
        Some(g) => g.clone(),
        None => enumerate_finite(spec.k(), DEFAULT_COSET_CAP)
            .map_err(|e| RinftyError::Undecided(e.to_string()))?,
    };
    Ok(projections.iter().all(|w| table.is_trivial(w)))
}

/// Restriction of a sphere set to the fixed subspace of `spec`.
pub fn restrict_to_fix(spec: &ExtensionSpec, s: SphereSet) -> Result<SphereSet, RinftyError> {
    Ok(restrict_to_subspace(s, &fix_subspace(spec))?)
}
