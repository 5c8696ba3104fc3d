#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;
use sok_core::extension::{ExtensionSpec, ExtensionSpecFile, FlavorTag, LiftFile, OrderFile};
use std::sync::Arc;

use sok_core::charsphere::make_character;
use sok_core::exact::q;
use sok_core::extension::{
    build_extension_presentation, extend_character_finite, fix_subspace, hom_space_split, restrict_to_h,
};
use sok_core::group::{abelianization, HomBasis, PresentationFile};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn spec(name: &str) -> ExtensionSpec {
    ExtensionSpec::from_json(&fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Signed permutation: generator i goes to `sign[i] * gen[perm[i]]`.
#[derive(Debug, Clone)]
pub struct SignedPerm {
    pub perm: Vec<usize>,
    pub sign: Vec<i64>,
}

impl SignedPerm {
    pub fn random(rng: &mut StdRng, r: usize) -> Self {
        let mut perm: Vec<usize> = (0..r).collect();
        perm.shuffle(rng);
        let sign = (0..r).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
        SignedPerm { perm, sign }
    }

    pub fn diagonal(rng: &mut StdRng, r: usize) -> Self {
        SignedPerm {
            perm: (0..r).collect(),
            sign: (0..r).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect(),
        }
    }

    /// Image of an exponent vector.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        let mut out = vec![0; v.len()];
        for (i, &x) in v.iter().enumerate() {
            out[self.perm[i]] += self.sign[i] * x;
        }
        out
    }

    pub fn order(&self) -> usize {
        let r = self.perm.len();
        let start: Vec<Vec<i64>> = (0..r)
            .map(|i| (0..r).map(|j| i64::from(i == j)).collect())
            .collect();
        let mut cur = start.clone();
        for k in 1..=64 {
            cur = cur.iter().map(|v| self.apply(v)).collect();
            if cur == start {
                return k;
            }
        }
        unreachable!("signed permutations have finite order")
    }
}

fn gen_names(r: usize) -> Vec<String> {
    (0..r).map(|i| format!("a{i}")).collect()
}

fn word_of(v: &[i64], names: &[String]) -> String {
    let mut toks = Vec::new();
    for (i, &x) in v.iter().enumerate() {
        for _ in 0..x.abs() {
            toks.push(if x > 0 { names[i].clone() } else { format!("{}^-1", names[i]) });
        }
    }
    if toks.is_empty() {
        "1".into()
    } else {
        toks.join(" ")
    }
}

fn h_presentation(r: usize, abelian: bool) -> PresentationFile {
    let names = gen_names(r);
    let mut relators = Vec::new();
    if abelian {
        for i in 0..r {
            for j in i + 1..r {
                relators.push(format!("{0} {1} {0}^-1 {1}^-1", names[i], names[j]));
            }
        }
    }
    PresentationFile {
        generators: names,
        relators,
    }
}

fn conjugation_table(b: &str, p: &SignedPerm, names: &[String]) -> BTreeMap<String, String> {
    (0..names.len())
        .map(|i| {
            let mut e = vec![0; names.len()];
            e[i] = 1;
            (format!("{b}:{}", names[i]), word_of(&p.apply(&e), names))
        })
        .collect()
}

/// A random small extension with `|K| <= 8` (or `K = Z`) and `rank(H) <= 4`.
pub fn random_spec(rng: &mut StdRng) -> ExtensionSpecFile {
    let r = rng.gen_range(1..=4);
    let abelian = rng.gen_bool(0.6);
    let names = gen_names(r);
    let h = h_presentation(r, abelian);
    match rng.gen_range(0..4) {
        // cyclic K, finite flavor
        0 | 1 => {
            let p = loop {
                let p = SignedPerm::random(rng, r);
                if p.order() <= 8 {
                    break p;
                }
            };
            let o = p.order();
            let m = o * rng.gen_range(1..=8 / o);
            let w = if abelian {
                let v: Vec<i64> = (0..r).map(|_| rng.gen_range(-1..=1)).collect();
                let mut sum = vec![0; r];
                let mut cur = v;
                for _ in 0..m {
                    for (s, c) in sum.iter_mut().zip(&cur) {
                        *s += c;
                    }
                    cur = p.apply(&cur);
                }
                word_of(&sum, &names)
            } else {
                "1".into()
            };
            let split = rng.gen_bool(0.3);
            let k = PresentationFile {
                generators: vec!["t".into()],
                relators: vec![vec!["t"; m].join(" ")],
            };
            ExtensionSpecFile {
                h,
                k,
                flavor: if split { FlavorTag::Split } else { FlavorTag::Finite },
                orders: if split {
                    BTreeMap::new()
                } else {
                    BTreeMap::from([("t".to_string(), OrderFile { m: m as u32, w })])
                },
                conjugation: conjugation_table("t", &p, &names),
                relator_lifts: Vec::new(),
            }
        }
        // K = Z, split
        2 => {
            let p = SignedPerm::random(rng, r);
            ExtensionSpecFile {
                h,
                k: PresentationFile {
                    generators: vec!["t".into()],
                    relators: Vec::new(),
                },
                flavor: FlavorTag::Split,
                orders: BTreeMap::new(),
                conjugation: conjugation_table("t", &p, &names),
                relator_lifts: Vec::new(),
            }
        }
        // K = Z2 x Z2 acting by sign changes, finite flavor
        _ => {
            let p = SignedPerm::diagonal(rng, r);
            let q = SignedPerm::diagonal(rng, r);
            let mut conjugation = conjugation_table("p", &p, &names);
            conjugation.extend(conjugation_table("q", &q, &names));
            ExtensionSpecFile {
                h: h_presentation(r, true),
                k: PresentationFile {
                    generators: vec!["p".into(), "q".into()],
                    relators: vec!["p p".into(), "q q".into(), "p q p^-1 q^-1".into()],
                },
                flavor: FlavorTag::Finite,
                orders: BTreeMap::from([
                    ("p".to_string(), OrderFile { m: 2, w: "1".into() }),
                    ("q".to_string(), OrderFile { m: 2, w: "1".into() }),
                ]),
                conjugation,
                relator_lifts: vec![LiftFile {
                    relator: "p q p^-1 q^-1".into(),
                    w: "1".into(),
                }],
            }
        }
    }
}

/// Every fixed basis vector is fixed by each action; extension and
/// identification maps invert each other; ranks match.
pub fn check_round_trips(s: &ExtensionSpec) {
    let fix = fix_subspace(s);
    let basis_q = fix.basis_q();
    for a in s.actions() {
        for v in &basis_q {
            assert_eq!(&a.apply(v), v);
        }
    }
    let h_basis = HomBasis::new(s.h());
    let g = build_extension_presentation(s);
    let rank = abelianization(&g).rank;
    if s.is_finite() {
        assert_eq!(rank, fix.dim());
        for v in &basis_q {
            let phi = make_character(s.h(), h_basis.values(v)).unwrap();
            let hat = extend_character_finite(s, &phi).unwrap();
            assert_eq!(restrict_to_h(s, &hat).unwrap(), phi);
        }
    } else {
        let split = hom_space_split(s).unwrap();
        assert_eq!(rank, fix.dim() + split.hom_k.rank);
        let kdim = split.k_basis().dim();
        let g = Arc::clone(split.group());
        for v in &basis_q {
            let chi = split.assemble(v, &vec![q(0); kdim]).unwrap();
            assert_eq!(split.project(&chi), (v.clone(), vec![q(0); kdim]));
        }
        for i in 0..kdim {
            let mut beta = vec![q(0); kdim];
            beta[i] = q(1);
            let chi = split.assemble(&vec![q(0); h_basis.dim()], &beta).unwrap();
            assert_eq!(split.project(&chi), (vec![q(0); h_basis.dim()], beta));
        }
        // Psi . Phi = id on a basis of Hom(G)
        let g_basis = HomBasis::new(&g);
        for b in g_basis.basis() {
            let chi = make_character(&g, b.clone()).unwrap();
            let (alpha, beta) = split.project(&chi);
            assert_eq!(split.assemble(&alpha, &beta).unwrap(), chi);
        }
    }
}

/// Orbits of `h -> h + (I - M) k` on `(Z/b)^m`, by union-find.
pub fn brute_orbits(m: &[Vec<i64>], b: i64) -> usize {
    let dim = m.len();
    let size = (b as usize).pow(dim as u32);
    let decode = |mut i: usize| {
        (0..dim)
            .map(|_| {
                let x = (i % b as usize) as i64;
                i /= b as usize;
                x
            })
            .collect::<Vec<_>>()
    };
    let encode = |v: &[i64]| v.iter().rev().fold(0usize, |acc, &x| acc * b as usize + x.rem_euclid(b) as usize);
    let mut parent: Vec<usize> = (0..size).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..size {
        let h = decode(i);
        for k in 0..dim {
            // (I - M) e_k is column k of I - M
            let step: Vec<i64> = (0..dim).map(|j| i64::from(j == k) - m[j][k]).collect();
            let next: Vec<i64> = h.iter().zip(&step).map(|(a, s)| a + s).collect();
            let (a, c) = (find(&mut parent, i), find(&mut parent, encode(&next)));
            parent[a] = c;
        }
    }
    (0..size).filter(|&i| find(&mut parent, i) == i).count()
}
