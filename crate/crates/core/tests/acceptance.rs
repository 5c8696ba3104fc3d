mod common;

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{brute_orbits, check_round_trips, fixture_path, random_spec, spec};
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use sok_core::charsphere::{
    count_rational_points, equivalent, subset, Constraint, PointCount, RationalRay, RationalSubspace, Relation,
    SphereSet,
};
use sok_core::exact::{q, Q};
use sok_core::extension::{build_extension_presentation, fix_subspace, ExtensionSpec};
use sok_core::group::{abelianization, IntegerMatrix};
use sok_core::invariants::*;
use sok_core::probe::{probe_direction, Model, ProbeConfig, ProbeKind, ProbeVerdict};
use sok_core::rinfty::*;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn catalog() -> Catalog {
    let mut c = Catalog::builtin();
    c.load_file(&fixture_path("catalog_h52.json")).unwrap();
    c
}

fn r(v: &[i64]) -> RationalRay {
    RationalRay::new(v)
}

fn json(s: &SphereSet) -> String {
    serde_json::to_string(s).unwrap()
}

/// Record for the H of a spec, found by recognising its presentation.
fn h_record(c: &Catalog, s: &ExtensionSpec, n: u32) -> Result<InvariantRecord, String> {
    let id = c.identify(s.h()).ok_or("H not recognised")?;
    lookup_known(c, &id, n).map_err(e)
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))
}

fn klein() -> Outcome {
    let start = Instant::now();
    let c = catalog();
    let s = spec("klein.json");
    let fix = fix_subspace(&s);
    ensure(fix.dim() == 1, || format!("Fix has dimension {}", fix.dim()))?;
    let h = h_record(&c, &s, 1)?;
    let g = sigma_finite_extension(&s, &h).map_err(e)?;
    let sigma = g.sigma.as_ref().ok_or("no sigma")?;
    ensure(json(sigma) == json(&SphereSet::full(1)), || format!("sigma = {}", json(sigma)))?;
    ensure(g.dim() == 1, || "Hom(G) is not one-dimensional".into())?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("H = {}, Fix dim 1, Sigma^1(G) = {}", h.group, json(sigma)))
}

fn dinf() -> Outcome {
    let start = Instant::now();
    let c = catalog();
    for name in ["dinf.json", "dinf_nonsplit.json"] {
        let s = spec(name);
        let rank = abelianization(&build_extension_presentation(&s)).rank;
        ensure(rank == 0 && fix_subspace(&s).dim() == 0, || format!("{name}: Hom(G) has rank {rank}"))?;
        let h = h_record(&c, &s, 1)?;
        let sigma = sigma_finite_extension(&s, &h).map_err(e)?.sigma.unwrap();
        let omega = omega_exact_if_sufficient(&s, &h).map_err(e)?.ok_or("no exact omega")?.omega.unwrap();
        for (what, set) in [("sigma", &sigma), ("omega", &omega)] {
            ensure(json(set) == json(&SphereSet::empty(0)), || format!("{name}: {what} = {}", json(set)))?;
        }
    }
    within(start, Duration::from_secs(1))?;
    Ok("semidirect and commutator routes: Hom = 0, Sigma = Omega = empty".into())
}

fn thompson() -> Outcome {
    let start = Instant::now();
    let c = catalog();
    let s = spec("thompson_z2.json");
    let h = h_record(&c, &s, 1)?;
    let sigma_g = sigma_finite_extension(&s, &h).map_err(e)?;
    let sg = sigma_g.sigma.as_ref().unwrap();
    ensure(equivalent(sg, &SphereSet::full(1)).map_err(e)?, || format!("Sigma^1(G) = {}", json(sg)))?;
    let omega_g = omega_from_sigma_record(&sigma_g).map_err(e)?.omega.unwrap();
    let b = omega_bounds_finite_extension(&s, &h).map_err(e)?;
    let lower = b.omega_lower.unwrap();
    let plus = SphereSet::rays(1, [r(&[1])]).unwrap();
    ensure(equivalent(&lower, &plus).map_err(e)?, || format!("lower bound = {}", json(&lower)))?;
    let strict = subset(&lower, &omega_g).map_err(e)? && !equivalent(&lower, &omega_g).map_err(e)?;
    ensure(strict, || "lower bound is not strictly smaller than Omega^1(G)".into())?;
    within(start, Duration::from_secs(1))?;
    Ok("Sigma^1(G) = {+,-}, Omega^1(F) on Fix = {+}, strictly inside Omega^1(G) = {+,-}".into())
}

fn cone(c: &[(&[i64], Relation)]) -> SphereSet {
    SphereSet::cone(4, c.iter().map(|(v, rel)| Constraint::from_i64(v, *rel)).collect()).unwrap()
}

fn ex52() -> Outcome {
    let start = Instant::now();
    let c = catalog();
    let s = spec("ex52.json");
    let h = h_record(&c, &s, 1)?;
    let omega_h = h.omega.clone().unwrap();
    use Relation::{Eq, Ge, Gt};
    let displayed = cone(&[(&[0, 0, 1, 0], Eq), (&[0, 0, 0, 1], Eq), (&[1, 0, 0, 0], Gt), (&[0, 1, 0, 0], Gt)]);
    let closure = cone(&[(&[0, 0, 1, 0], Eq), (&[0, 0, 0, 1], Eq), (&[1, 0, 0, 0], Ge), (&[0, 1, 0, 0], Ge)]);
    let endpoints = [r(&[1, 0, 0, 0]), r(&[0, 1, 0, 0])];

    // half the sample from the plane x = y = 0, where the set lives
    let mut rng = StdRng::seed_from_u64(52);
    let (mut closure_ok, mut open_diff) = (0, Vec::new());
    for i in 0..1000 {
        let v: Vec<i64> = loop {
            let mut v: Vec<i64> = (0..4).map(|_| rng.gen_range(-3..=3)).collect();
            if i % 2 == 0 {
                v[2] = 0;
                v[3] = 0;
            }
            if v.iter().any(|&x| x != 0) {
                break v;
            }
        };
        let ray = r(&v);
        let m = omega_h.contains(&ray).map_err(e)?;
        if m == closure.contains(&ray).map_err(e)? {
            closure_ok += 1;
        }
        if m != displayed.contains(&ray).map_err(e)? {
            open_diff.push(ray);
        }
    }
    ensure(closure_ok == 1000, || format!("{} rays disagree with the closed arc", 1000 - closure_ok))?;
    ensure(open_diff.iter().all(|x| endpoints.contains(x)), || {
        format!("disagreement away from the arc endpoints: {open_diff:?}")
    })?;
    ensure(equivalent(&omega_h, &closure).map_err(e)?, || "Omega^1(H) is not the closed arc".into())?;
    let extra = SphereSet::and(4, vec![omega_h.clone(), SphereSet::complement(displayed.clone())]).unwrap();
    ensure(
        count_rational_points(&extra) == PointCount::Several(vec![r(&[0, 1, 0, 0]), r(&[1, 0, 0, 0])]),
        || format!("Omega^1(H) minus the displayed set: {:?}", count_rational_points(&extra)),
    )?;
    ensure(subset(&displayed, &omega_h).map_err(e)?, || "displayed set not inside Omega^1(H)".into())?;

    let sigma_g = sigma_finite_extension(&s, &h).map_err(e)?;
    let sg = sigma_g.sigma.clone().unwrap();
    match count_rational_points(&SphereSet::complement(sg)) {
        PointCount::TwoAntipodal(a, b) => {
            ensure(a == r(&[0, -1]) && b == r(&[0, 1]), || format!("Sigma^1(G) complement = {a}, {b}"))?
        }
        other => return Err(format!("Sigma^1(G) complement: {other:?}")),
    }
    // Fix coordinates are (b+d, x+y)
    let omega_g = omega_from_sigma_record(&sigma_g).map_err(e)?.omega.unwrap();
    ensure(
        count_rational_points(&omega_g) == PointCount::TwoAntipodal(r(&[-1, 0]), r(&[1, 0])),
        || format!("Omega^1(G): {:?}", count_rational_points(&omega_g)),
    )?;
    let lower = omega_bounds_finite_extension(&s, &h).map_err(e)?.omega_lower.unwrap();
    ensure(count_rational_points(&lower) == PointCount::One(r(&[1, 0])), || {
        format!("Omega^1(H) on Fix: {:?}", count_rational_points(&lower))
    })?;
    within(start, Duration::from_secs(5))?;
    Ok(format!(
        "1000/1000 rays agree with the closed arc; {} sampled rays hit its endpoints (1,0,0,0)/(0,1,0,0), \
         which the displayed strict inequalities omit; Sigma^1(G)^c = two antipodal rays; \
         Omega^1(G) = {{x = y = 0}}; Omega^1(H) on Fix = one point",
        open_diff.len()
    ))
}

fn degree_two() -> Outcome {
    let start = Instant::now();
    let c = catalog();
    let s = spec("thompson_z2.json");
    let h2 = h_record(&c, &s, 2)?;
    let sigma2 = sigma_finite_extension(&s, &h2).map_err(e)?.sigma.unwrap();
    let plus = SphereSet::rays(1, [r(&[1])]).unwrap();
    ensure(equivalent(&sigma2, &plus).map_err(e)?, || format!("Sigma^2(G) = {}", json(&sigma2)))?;
    for n in [2, 1] {
        let h = h_record(&c, &s, n)?;
        let cert = rinfty_finite_ext(&s, &h, n, false).map_err(e)?.ok_or(format!("no certificate at n = {n}"))?;
        ensure(
            cert.rule == RinftyRule::FiniteExtRationalPoint && cert.witness == Some(r(&[1])) && cert.is_well_formed(),
            || format!("n = {n}: {cert:?}"),
        )?;
    }
    let h1 = h_record(&c, &s, 1)?;
    let omega_g = omega_from_sigma_record(&sigma_finite_extension(&s, &h1).map_err(e)?).map_err(e)?;
    ensure(rinfty_single_point(&omega_g).map_err(e)?.is_none(), || {
        "single-point rule fired on Omega^1(G)".into()
    })?;
    within(start, Duration::from_secs(1))?;
    Ok("Sigma^2(G) = {+}; certificates at n = 2 and n = 1; nothing from Omega^1(G) = {+,-}".into())
}

fn round_trips() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x3232);
    let mut failures = Vec::new();
    let (mut finite, mut split) = (0, 0);
    for i in 0..200 {
        let file = random_spec(&mut rng);
        let res = catch_unwind(AssertUnwindSafe(|| {
            let s = ExtensionSpec::from_file(&file).map_err(e)?;
            check_round_trips(&s);
            Ok::<bool, String>(s.is_finite())
        }));
        match res {
            Ok(Ok(true)) => finite += 1,
            Ok(Ok(false)) => split += 1,
            _ => failures.push(i),
        }
    }
    ensure(failures.is_empty(), || format!("failing specs: {failures:?}"))?;
    Ok(format!("200 specs ({finite} finite, {split} split), zero failures"))
}

const FACTORS_1: [&str; 6] = ["BS(1,2)", "BS(1,3)", "Z", "Z^2", "F_2", "ThompsonF"];
const FACTORS_2: [&str; 4] = ["Z", "F_2", "F_3", "ThompsonF"];

fn random_row(rng: &mut StdRng, d: usize) -> Vec<Q> {
    (0..d).map(|_| q(rng.gen_range(-2..=2))).collect()
}

fn fixed_omega_trials() -> Outcome {
    let c = catalog();
    let mut rng = StdRng::seed_from_u64(63);
    let (mut infinite, mut unknown) = (0, 0);
    let mut counts = [0usize; 3];
    for trial in 0..500 {
        let n = rng.gen_range(1..=2);
        let pool: &[&str] = if n == 1 { &FACTORS_1 } else { &FACTORS_2 };
        let k = rng.gen_range(1..=3);
        let mut rec = lookup_known(&c, pool[rng.gen_range(0..pool.len())], n).map_err(e)?;
        for _ in 1..k {
            let next = lookup_known(&c, pool[rng.gen_range(0..pool.len())], n).map_err(e)?;
            rec = omega_product(&rec, &next).map_err(e)?;
        }
        let d = rec.dim();
        let w_dim = rng.gen_range(1..=d.min(3));
        let w = loop {
            let rows: Vec<Vec<Q>> = (0..w_dim).map(|_| random_row(&mut rng, d)).collect();
            if let Ok(w) = RationalSubspace::with_basis(d, &rows) {
                break w;
            }
        };
        let t = restrict_record(&rec, &w).map_err(e)?;
        match count_rational_points(t.omega.as_ref().unwrap()) {
            PointCount::Zero => counts[0] += 1,
            PointCount::One(_) => counts[1] += 1,
            PointCount::TwoAntipodal(..) => counts[2] += 1,
            PointCount::Several(v) => return Err(format!("trial {trial}: {} points {v:?} in {}", v.len(), rec.group)),
            PointCount::Infinite => infinite += 1,
            PointCount::Unknown => unknown += 1,
        }
    }
    let finite: usize = counts.iter().sum();
    ensure(unknown == 0, || format!("{unknown} undecided trials"))?;
    Ok(format!(
        "500 trials: {finite} finite ({} empty, {} one point, {} antipodal pairs), {infinite} infinite, 0 violations",
        counts[0], counts[1], counts[2]
    ))
}

fn mat(rows: &[Vec<i64>]) -> IntegerMatrix {
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    IntegerMatrix::from_i64(&refs)
}

fn det_i_minus(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        1 => 1 - m[0][0],
        _ => (1 - m[0][0]) * (1 - m[1][1]) - m[0][1] * m[1][0],
    }
}

fn twisted_oracle() -> Outcome {
    let start = Instant::now();
    let mut matrices: Vec<Vec<Vec<i64>>> = (-3..=3).map(|a| vec![vec![a]]).collect();
    for a in -3..=3 {
        for b in -3..=3 {
            for c in -3..=3 {
                for d in -3..=3 {
                    matrices.push(vec![vec![a, b], vec![c, d]]);
                }
            }
        }
    }
    let mut checked = 0;
    for m in &matrices {
        let det = det_i_minus(m);
        let got = reidemeister_abelian(&mat(m));
        if det == 0 {
            ensure(got.is_infinite(), || format!("{m:?}: expected infinite, got {got}"))?;
            continue;
        }
        let n = det.unsigned_abs();
        ensure(got == Reidemeister::Finite(BigInt::from(n)), || format!("{m:?}: {got} vs |det| {n}"))?;
        let orbits = brute_orbits(m, n as i64);
        ensure(orbits as u64 == n, || format!("{m:?}: {orbits} orbits, R = {n}"))?;
        checked += 1;
    }

    // Block upper-triangular maps: the first block spans an invariant subgroup.
    let mut rng = StdRng::seed_from_u64(61);
    for case in 0..200 {
        let (j, k) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let size = j + k;
        let mut m = vec![vec![0i64; size]; size];
        for (row, line) in m.iter_mut().enumerate() {
            for (col, x) in line.iter_mut().enumerate() {
                if row < j || col >= j {
                    *x = rng.gen_range(-3..=3);
                }
            }
        }
        let sub: Vec<Vec<i64>> = m[..j].iter().map(|l| l[..j].to_vec()).collect();
        let quo: Vec<Vec<i64>> = m[j..].iter().map(|l| l[j..].to_vec()).collect();
        let (rm, rs, rq) = (
            reidemeister_abelian(&mat(&m)),
            reidemeister_abelian(&mat(&sub)),
            reidemeister_abelian(&mat(&quo)),
        );
        if rq.is_infinite() {
            ensure(rm.is_infinite(), || format!("case {case}: quotient infinite but {m:?} gives {rm}"))?;
            ensure(quotient_lift("Z^n", &mat(&quo)).is_some(), || format!("case {case}: no lift"))?;
        } else {
            ensure(quotient_lift("Z^n", &mat(&quo)).is_none(), || format!("case {case}: spurious lift"))?;
        }
        if let (Reidemeister::Finite(a), Reidemeister::Finite(b)) = (&rs, &rq) {
            ensure(rm == Reidemeister::Finite(a * b), || format!("case {case}: {rm} vs {a} * {b}"))?;
        }
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("{} matrices ({checked} with finite R) match orbit counts; 200 block-triangular cases consistent", matrices.len()))
}

fn random_direction(rng: &mut StdRng, d: usize) -> Vec<Q> {
    loop {
        let v: Vec<i64> = (0..d).map(|_| rng.gen_range(-5..=5)).collect();
        if v.iter().any(|&x| x != 0) {
            return v.into_iter().map(q).collect();
        }
    }
}

fn probes_vs_catalog() -> Outcome {
    let start = Instant::now();
    let c = catalog();
    let mut rng = StdRng::seed_from_u64(9);
    let config = ProbeConfig::with_radius(6);
    let mut summary = Vec::new();
    for (model_name, id) in [("Z", "Z"), ("Z^2", "Z^2"), ("F_2", "F_2"), ("BS(1,2)", "BS(1,2)")] {
        let model = Model::parse(model_name).map_err(e)?;
        let sigma = lookup_known(&c, id, 1).map_err(e)?.sigma.unwrap();
        let mut tally = [0usize; 3];
        for _ in 0..50 {
            let dir = random_direction(&mut rng, sigma.dim());
            let report = probe_direction(&model, ProbeKind::Sigma, &dir, &config).map_err(e)?;
            let inside = sigma.contains(&report.character).map_err(e)?;
            let contradiction = match report.verdict {
                ProbeVerdict::EvidenceConnected => !inside,
                ProbeVerdict::EvidenceDisconnected => inside,
                ProbeVerdict::Inconclusive => false,
            };
            ensure(!contradiction, || format!("{model_name} {}: {:?}", report.character, report.verdict))?;
            if id == "F_2" {
                let witness = report.results.iter().any(|s| s.witness.is_some());
                ensure(report.verdict == ProbeVerdict::EvidenceDisconnected && witness, || {
                    format!("F_2 {}: {:?} without a witness pair", report.character, report.verdict)
                })?;
            }
            tally[match report.verdict {
                ProbeVerdict::EvidenceConnected => 0,
                ProbeVerdict::EvidenceDisconnected => 1,
                ProbeVerdict::Inconclusive => 2,
            }] += 1;
        }
        summary.push(format!("{model_name} {}/{}/{}", tally[0], tally[1], tally[2]));
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("connected/disconnected/inconclusive: {}; no contradictions", summary.join(", ")))
}

/// Written to the process stdout so the lines survive output capture.
fn report(line: String) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").unwrap();
    out.flush().unwrap();
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("Klein bottle", klein),
        ("infinite dihedral group", dinf),
        ("Thompson F x| Z2", thompson),
        ("BS x BS x F2 x| Z2", ex52),
        ("degree-two certificate", degree_two),
        ("extension round trips", round_trips),
        ("finite fixed Omega sets", fixed_omega_trials),
        ("twisted-conjugacy oracle", twisted_oracle),
        ("probes against catalog", probes_vs_catalog),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(f).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let t = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => report(format!("criterion {}: PASS {name} [{t:.2}s] {detail}", i + 1)),
            Err(why) => {
                report(format!("criterion {}: FAIL {name} [{t:.2}s] {why}", i + 1));
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
