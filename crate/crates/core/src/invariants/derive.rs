use super::catalog::{lookup_known, Catalog};
use super::record::{describe_basis, DerivationCertificate, InvariantRecord, Rule};
use super::InvariantError;
use crate::charsphere::{equivalent, omega_from_sigma, restrict_to_subspace, spherical_join, RationalSubspace, SphereSet};
use crate::extension::{fix_subspace, ExtensionError, ExtensionSpec};
use crate::group::HomBasis;

fn cert(
    rule: Rule,
    group: String,
    degree: u32,
    citation: &str,
    subspace: Option<RationalSubspace>,
    premises: Vec<DerivationCertificate>,
) -> DerivationCertificate {
    DerivationCertificate {
        rule,
        group,
        degree,
        citation: citation.into(),
        subspace,
        premises,
    }
}

fn extension_label(rec: &InvariantRecord) -> String {
    format!("G({})", rec.group)
}

fn restrict(s: &Option<SphereSet>, w: &RationalSubspace) -> Result<Option<SphereSet>, InvariantError> {
    s.clone().map(|s| restrict_to_subspace(s, w)).transpose().map_err(Into::into)
}

fn check_ambient(rec: &InvariantRecord, w: &RationalSubspace) -> Result<(), InvariantError> {
    if rec.dim() != w.ambient() {
        return Err(InvariantError::CoordinateMismatch {
            record: rec.dim(),
            expected: w.ambient(),
        });
    }
    Ok(())
}

/// The fixed subspace of a finite-quotient spec, checked against `rec`.
fn finite_fix(spec: &ExtensionSpec, rec: &InvariantRecord) -> Result<RationalSubspace, InvariantError> {
    if !spec.is_finite() {
        return Err(ExtensionError::WrongFlavor("finite-quotient extension required".into()).into());
    }
    let hom_dim = HomBasis::new(spec.h()).dim();
    let fix = fix_subspace(spec);
    if rec.dim() != hom_dim {
        return Err(InvariantError::CoordinateMismatch {
            record: rec.dim(),
            expected: hom_dim,
        });
    }
    Ok(fix)
}

fn sigma_on_fix(rec: &InvariantRecord, fix: &RationalSubspace, group: String) -> Result<InvariantRecord, InvariantError> {
    check_ambient(rec, fix)?;
    let sigma = rec.sigma.as_ref().ok_or(InvariantError::MissingSigma)?;
    Ok(InvariantRecord {
        group: group.clone(),
        degree: rec.degree,
        coordinates: describe_basis(fix, &rec.coordinates),
        sigma: Some(restrict_to_subspace(sigma.clone(), fix)?),
        omega: None,
        omega_lower: None,
        omega_upper: None,
        provenance: cert(
            Rule::FiniteExtensionSigma,
            group,
            rec.degree,
            "finite extensions: Sigma(G) is Sigma(H) intersected with the fixed sphere",
            Some(fix.clone()),
            vec![rec.provenance.clone()],
        ),
    })
}

/// Sigma of a finite extension, in the coordinates of the fixed subspace.
pub fn sigma_finite_extension(spec: &ExtensionSpec, rec_h: &InvariantRecord) -> Result<InvariantRecord, InvariantError> {
    let fix = finite_fix(spec, rec_h)?;
    sigma_on_fix(rec_h, &fix, extension_label(rec_h))
}

/// Omega from Sigma by the pi/2 rule. In dimension one this returns Sigma.
pub fn omega_from_sigma_record(rec: &InvariantRecord) -> Result<InvariantRecord, InvariantError> {
    let sigma = rec.sigma.as_ref().ok_or(InvariantError::MissingSigma)?;
    Ok(InvariantRecord {
        omega: Some(omega_from_sigma(sigma)?),
        omega_lower: None,
        omega_upper: None,
        provenance: cert(
            Rule::OmegaFromSigma,
            rec.group.clone(),
            rec.degree,
            "Omega is the set of directions within pi/2 of no point outside Sigma",
            None,
            vec![rec.provenance.clone()],
        ),
        ..rec.clone()
    })
}

fn joined_names(left: &[String], right: &[String]) -> Vec<String> {
    let mut out = left.to_vec();
    for name in right {
        let mut n = name.clone();
        while out.contains(&n) {
            n.push('\'');
        }
        out.push(n);
    }
    out
}

/// Omega of a direct product.
pub fn omega_product(rec_h: &InvariantRecord, rec_k: &InvariantRecord) -> Result<InvariantRecord, InvariantError> {
    if rec_h.degree != rec_k.degree {
        return Err(InvariantError::DegreeMismatch(rec_h.degree, rec_k.degree));
    }
    let missing = || InvariantError::MissingInvariant("omega");
    let a = rec_h.omega.clone().ok_or_else(missing)?;
    let b = rec_k.omega.clone().ok_or_else(missing)?;
    let group = format!("{} x {}", rec_h.group, rec_k.group);
    Ok(InvariantRecord {
        group: group.clone(),
        degree: rec_h.degree,
        coordinates: joined_names(&rec_h.coordinates, &rec_k.coordinates),
        sigma: None,
        omega: Some(spherical_join(a, b)),
        omega_lower: None,
        omega_upper: None,
        provenance: cert(
            Rule::OmegaJoinProduct,
            group,
            rec_h.degree,
            "product formula: Omega(H x K) is the spherical join of Omega(H) and Omega(K)",
            None,
            vec![rec_h.provenance.clone(), rec_k.provenance.clone()],
        ),
    })
}

fn bounds_on_fix(rec: &InvariantRecord, fix: &RationalSubspace, group: String) -> Result<InvariantRecord, InvariantError> {
    check_ambient(rec, fix)?;
    if rec.omega.is_none() {
        return Err(InvariantError::MissingInvariant("omega"));
    }
    if rec.sigma.is_none() {
        return Err(InvariantError::MissingInvariant("sigma"));
    }
    let lower = restrict(&rec.omega, fix)?.expect("present");
    let upper = restrict(&rec.sigma, fix)?.expect("present");
    let omega = if equivalent(&lower, &upper)? { Some(lower.clone()) } else { None };
    Ok(InvariantRecord {
        group: group.clone(),
        degree: rec.degree,
        coordinates: describe_basis(fix, &rec.coordinates),
        sigma: None,
        omega,
        omega_lower: Some(lower),
        omega_upper: Some(upper),
        provenance: cert(
            Rule::OmegaBounds,
            group,
            rec.degree,
            "finite extensions: Omega(H) on the fixed sphere is contained in Omega(G), which is contained in Sigma(H) on the fixed sphere",
            Some(fix.clone()),
            vec![rec.provenance.clone()],
        ),
    })
}

/// Lower and upper bounds for Omega of a finite extension; promoted to an
/// exact value when the two coincide.
pub fn omega_bounds_finite_extension(
    spec: &ExtensionSpec,
    rec_h: &InvariantRecord,
) -> Result<InvariantRecord, InvariantError> {
    let fix = finite_fix(spec, rec_h)?;
    bounds_on_fix(rec_h, &fix, extension_label(rec_h))
}

/// First sufficiency condition that holds: 2 (Sigma full), 3 (Sigma empty),
/// then 1 (one-dimensional character space).
fn sufficient_condition(rec: &InvariantRecord) -> Result<Option<u8>, InvariantError> {
    if let Some(sigma) = &rec.sigma {
        if equivalent(sigma, &SphereSet::full(rec.dim()))? {
            return Ok(Some(2));
        }
        if equivalent(sigma, &SphereSet::empty(rec.dim()))? {
            return Ok(Some(3));
        }
    }
    Ok((rec.dim() == 1).then_some(1))
}

fn exact_on_fix(
    rec: &InvariantRecord,
    fix: &RationalSubspace,
    group: String,
    condition: u8,
) -> Result<InvariantRecord, InvariantError> {
    check_ambient(rec, fix)?;
    let omega = restrict(&rec.omega, fix)?.ok_or(InvariantError::MissingInvariant("omega"))?;
    Ok(InvariantRecord {
        group: group.clone(),
        degree: rec.degree,
        coordinates: describe_basis(fix, &rec.coordinates),
        sigma: restrict(&rec.sigma, fix)?,
        omega: Some(omega),
        omega_lower: None,
        omega_upper: None,
        provenance: cert(
            Rule::OmegaSufficiency { condition },
            group,
            rec.degree,
            match condition {
                1 => "Omega(G) equals Omega(H) on the fixed sphere when Hom(H, R) is one-dimensional",
                2 => "Omega(G) equals Omega(H) on the fixed sphere when Sigma(H) is the whole sphere",
                _ => "Omega(G) equals Omega(H) on the fixed sphere when Sigma(H) is empty",
            },
            Some(fix.clone()),
            vec![rec.provenance.clone()],
        ),
    })
}

/// Exact Omega of a finite extension when a sufficiency condition holds.
pub fn omega_exact_if_sufficient(
    spec: &ExtensionSpec,
    rec_h: &InvariantRecord,
) -> Result<Option<InvariantRecord>, InvariantError> {
    let fix = finite_fix(spec, rec_h)?;
    match sufficient_condition(rec_h)? {
        Some(c) if rec_h.omega.is_some() => exact_on_fix(rec_h, &fix, extension_label(rec_h), c).map(Some),
        _ => Ok(None),
    }
}

/// Every present set restricted to `w`.
pub fn restrict_record(rec: &InvariantRecord, w: &RationalSubspace) -> Result<InvariantRecord, InvariantError> {
    check_ambient(rec, w)?;
    Ok(InvariantRecord {
        group: rec.group.clone(),
        degree: rec.degree,
        coordinates: describe_basis(w, &rec.coordinates),
        sigma: restrict(&rec.sigma, w)?,
        omega: restrict(&rec.omega, w)?,
        omega_lower: restrict(&rec.omega_lower, w)?,
        omega_upper: restrict(&rec.omega_upper, w)?,
        provenance: cert(
            Rule::Restriction,
            rec.group.clone(),
            rec.degree,
            "restriction to a rational subspace",
            Some(w.clone()),
            vec![rec.provenance.clone()],
        ),
    })
}

/// Re-run a certificate tree from the catalog.
pub fn replay(certificate: &DerivationCertificate, catalog: &Catalog) -> Result<InvariantRecord, InvariantError> {
    let bad = |m: &str| InvariantError::BadCertificate(m.to_string());
    let premises = certificate
        .premises
        .iter()
        .map(|p| replay(p, catalog))
        .collect::<Result<Vec<_>, _>>()?;
    let one = || match premises.as_slice() {
        [p] => Ok(p),
        _ => Err(bad("rule takes exactly one premise")),
    };
    let sub = || certificate.subspace.as_ref().ok_or_else(|| bad("rule needs a subspace"));
    let group = certificate.group.clone();
    let rec = match certificate.rule {
        Rule::CatalogEntry => {
            if !premises.is_empty() {
                return Err(bad("catalog entries have no premises"));
            }
            lookup_known(catalog, &certificate.group, certificate.degree)?
        }
        Rule::FiniteExtensionSigma => sigma_on_fix(one()?, sub()?, group)?,
        Rule::OmegaFromSigma => omega_from_sigma_record(one()?)?,
        Rule::OmegaJoinProduct => match premises.as_slice() {
            [a, b] => omega_product(a, b)?,
            _ => return Err(bad("product takes two premises")),
        },
        Rule::OmegaBounds => bounds_on_fix(one()?, sub()?, group)?,
        Rule::OmegaSufficiency { condition } => {
            let p = one()?;
            if sufficient_condition(p)? != Some(condition) {
                return Err(bad("sufficiency condition does not hold"));
            }
            exact_on_fix(p, sub()?, group, condition)?
        }
        Rule::Restriction => restrict_record(one()?, sub()?)?,
    };
    if rec.degree != certificate.degree {
        return Err(bad("degree mismatch"));
    }
    Ok(rec)
}
