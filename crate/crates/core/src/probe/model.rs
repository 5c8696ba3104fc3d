use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::ProbeError;
use crate::exact::Q;
use crate::extension::{build_extension_presentation, ExtensionSpec, Flavor};
use crate::group::{Letter, Presentation, Word};

/// Canonical normal form of a model element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Abelian(Vec<i64>),
    /// Freely reduced word; letter `+(g+1)` or `-(g+1)`.
    Free(Vec<i32>),
    /// Pair `(t, k)` with `t` in `Z[1/m]`, multiplied by
    /// `(t1, k1)(t2, k2) = (t1 + m^-k1 t2, k1 + k2)`; `a = (1, 0)`, `b = (0, 1)`.
    Bs { t: Q, k: i64 },
    Tuple(Vec<Elem>),
    /// `h * nu(t)^j`.
    Coset { h: Box<Elem>, j: usize },
}

/// Finite cyclic extension `H . Z_m` in the form `h * nu^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicExtension {
    h: Model,
    m: usize,
    /// `powers[j][a]` = `nu^j a nu^-j` as an H-word.
    powers: Vec<Vec<Word>>,
    /// `nu^m` as an H-word.
    w: Word,
    /// `nu^(m-1) w^-1 nu^-(m-1)` as an H-word.
    wrap_back: Word,
    presentation: Presentation,
}

/// Groups with computable normal forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Model {
    FreeAbelian(usize),
    Free(usize),
    /// `<a, b | b^-1 a b a^-m>`.
    BaumslagSolitar(u32),
    Product(Vec<Model>),
    Extension(Box<CyclicExtension>),
}

fn parse_factor(t: &str) -> Option<Model> {
    let t = t.trim();
    let num = |s: &str| s.parse::<usize>().ok();
    if t == "Z" {
        return Some(Model::FreeAbelian(1));
    }
    if let Some(k) = t.strip_prefix("Z^").or_else(|| t.strip_prefix('Z')).and_then(num) {
        return Some(Model::FreeAbelian(k));
    }
    if let Some(m) = t
        .strip_prefix("BS(1,")
        .and_then(|r| r.strip_suffix(')'))
        .and_then(|m| m.trim().parse::<u32>().ok())
    {
        return (m >= 1).then_some(Model::BaumslagSolitar(m));
    }
    if let Some(k) = t.strip_prefix("F_").or_else(|| t.strip_prefix('F')).and_then(num) {
        return Some(Model::Free(k));
    }
    None
}

fn prime_clashes(names: &mut Vec<String>, extra: Vec<String>) {
    for mut n in extra {
        while names.contains(&n) {
            n.push('\'');
        }
        names.push(n);
    }
}

impl Model {
    /// `Z`, `Z^k` (or `Zk`), `F_k` (or `Fk`), `BS(1,m)`, and products
    /// joined by ` x `.
    pub fn parse(text: &str) -> Result<Model, ProbeError> {
        let factors = text
            .split(" x ")
            .map(|f| parse_factor(f).ok_or_else(|| ProbeError::UnknownModel(f.trim().to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(match factors.len() {
            1 => factors.into_iter().next().expect("one factor"),
            _ => Model::Product(factors),
        })
    }

    /// Finite cyclic extension of `h` described by `spec`; `h`'s generators
    /// stand for H's generators in order.
    pub fn extension(spec: &ExtensionSpec, h: Model) -> Result<Model, ProbeError> {
        let nh = spec.h().num_generators();
        if h.num_generators() != nh {
            return Err(ProbeError::InconsistentModel(format!(
                "H model has {} generators, spec has {}",
                h.num_generators(),
                nh
            )));
        }
        for (i, r) in spec.h().relators().iter().enumerate() {
            if h.evaluate(r) != h.identity() {
                return Err(ProbeError::InconsistentModel(format!("H relator {i} is not trivial in the model")));
            }
        }
        let k = spec.k();
        let single = k.num_generators() == 1;
        let (m, w) = match spec.flavor() {
            Flavor::FiniteQuotient { orders, .. } if single => (orders[0].m as usize, orders[0].w.clone()),
            Flavor::Split if single && k.relators().len() == 1 => {
                let r = &k.relators()[0];
                if r.is_empty() || r.letters().iter().any(|l| l.inverse) {
                    return Err(ProbeError::UnsupportedModel("K must be presented as <t | t^m>".into()));
                }
                (r.len(), Word::empty())
            }
            _ => return Err(ProbeError::UnsupportedModel("only cyclic finite K is modelled".into())),
        };
        let conj = &spec.conjugation()[0];
        let mut powers: Vec<Vec<Word>> = vec![(0..nh).map(|a| Word::from_letters(vec![Letter::pos(a)])).collect()];
        for j in 1..m {
            let next = powers[j - 1].iter().map(|wd| wd.substitute(conj)).collect();
            powers.push(next);
        }
        let wrap_back = w.inverse().substitute(&powers[m - 1]);
        let ext = CyclicExtension {
            h,
            m,
            powers,
            w,
            wrap_back,
            presentation: build_extension_presentation(spec),
        };
        let model = Model::Extension(Box::new(ext));
        for (i, r) in model.presentation().relators().iter().enumerate() {
            if model.evaluate(r) != model.identity() {
                return Err(ProbeError::InconsistentModel(format!("G relator {i} is not trivial in the model")));
            }
        }
        Ok(model)
    }

    pub fn num_generators(&self) -> usize {
        match self {
            Model::FreeAbelian(k) | Model::Free(k) => *k,
            Model::BaumslagSolitar(_) => 2,
            Model::Product(fs) => fs.iter().map(Model::num_generators).sum(),
            Model::Extension(e) => e.h.num_generators() + 1,
        }
    }

    pub fn presentation(&self) -> Presentation {
        match self {
            Model::FreeAbelian(k) => {
                let names: Vec<String> = (1..=*k).map(|i| format!("z{i}")).collect();
                let mut rels = Vec::new();
                for i in 0..*k {
                    for j in i + 1..*k {
                        let (a, b) = (Letter::pos(i), Letter::pos(j));
                        rels.push(Word::from_letters(vec![a, b, a.inverted(), b.inverted()]));
                    }
                }
                Presentation::new(names, rels).expect("valid")
            }
            Model::Free(k) => {
                let names: Vec<String> = (1..=*k).map(|i| format!("x{i}")).collect();
                Presentation::new(names, Vec::new()).expect("valid")
            }
            Model::BaumslagSolitar(m) => {
                let mut rel = vec![Letter::neg(1), Letter::pos(0), Letter::pos(1)];
                rel.extend((0..*m).map(|_| Letter::neg(0)));
                Presentation::new(vec!["a".into(), "b".into()], vec![Word::from_letters(rel)]).expect("valid")
            }
            Model::Product(fs) => {
                let mut acc: Option<Presentation> = None;
                for f in fs {
                    let p = f.presentation();
                    acc = Some(match acc {
                        None => p,
                        Some(a) => {
                            let mut names = a.generators().to_vec();
                            prime_clashes(&mut names, p.generators().to_vec());
                            let renamed = Presentation::new(names[a.num_generators()..].to_vec(), p.relators().to_vec())
                                .expect("renamed factor");
                            a.direct_product(&renamed).expect("disjoint names")
                        }
                    });
                }
                acc.unwrap_or_else(|| Presentation::new(Vec::new(), Vec::new()).expect("trivial"))
            }
            Model::Extension(e) => e.presentation.clone(),
        }
    }

    pub fn identity(&self) -> Elem {
        match self {
            Model::FreeAbelian(k) => Elem::Abelian(vec![0; *k]),
            Model::Free(_) => Elem::Free(Vec::new()),
            Model::BaumslagSolitar(_) => Elem::Bs { t: Q::zero(), k: 0 },
            Model::Product(fs) => Elem::Tuple(fs.iter().map(Model::identity).collect()),
            Model::Extension(e) => Elem::Coset {
                h: Box::new(e.h.identity()),
                j: 0,
            },
        }
    }

    /// Right multiplication by a generator or its inverse.
    pub fn act(&self, e: &Elem, g: usize, inverse: bool) -> Elem {
        let sign: i64 = if inverse { -1 } else { 1 };
        match (self, e) {
            (Model::FreeAbelian(_), Elem::Abelian(v)) => {
                let mut v = v.clone();
                v[g] += sign;
                Elem::Abelian(v)
            }
            (Model::Free(_), Elem::Free(w)) => {
                let l = (g as i32 + 1) * sign as i32;
                let mut w = w.clone();
                if w.last() == Some(&-l) {
                    w.pop();
                } else {
                    w.push(l);
                }
                Elem::Free(w)
            }
            (Model::BaumslagSolitar(m), Elem::Bs { t, k }) => {
                if g == 0 {
                    // (t, k) * a^sign = (t + sign * m^-k, k)
                    let mk = BigInt::from(*m).pow(k.unsigned_abs() as u32);
                    let step = if *k >= 0 { Q::new(BigInt::one(), mk) } else { Q::from_integer(mk) };
                    Elem::Bs {
                        t: t + step * Q::from_integer(BigInt::from(sign)),
                        k: *k,
                    }
                } else {
                    Elem::Bs { t: t.clone(), k: k + sign }
                }
            }
            (Model::Product(fs), Elem::Tuple(parts)) => {
                let mut g = g;
                let mut parts = parts.clone();
                for (f, p) in fs.iter().zip(parts.iter_mut()) {
                    let n = f.num_generators();
                    if g < n {
                        *p = f.act(p, g, inverse);
                        break;
                    }
                    g -= n;
                }
                Elem::Tuple(parts)
            }
            (Model::Extension(x), Elem::Coset { h, j }) => {
                let nh = x.h.num_generators();
                if g < nh {
                    let word = if inverse { x.powers[*j][g].inverse() } else { x.powers[*j][g].clone() };
                    return Elem::Coset {
                        h: Box::new(x.h.multiply_word(h, &word)),
                        j: *j,
                    };
                }
                match (inverse, *j) {
                    (false, j) if j + 1 < x.m => Elem::Coset { h: h.clone(), j: j + 1 },
                    (false, _) => Elem::Coset {
                        h: Box::new(x.h.multiply_word(h, &x.w)),
                        j: 0,
                    },
                    (true, 0) => Elem::Coset {
                        h: Box::new(x.h.multiply_word(h, &x.wrap_back)),
                        j: x.m - 1,
                    },
                    (true, j) => Elem::Coset { h: h.clone(), j: j - 1 },
                }
            }
            _ => panic!("element does not belong to this model"),
        }
    }

    pub fn multiply_word(&self, e: &Elem, w: &Word) -> Elem {
        w.letters().iter().fold(e.clone(), |acc, l| self.act(&acc, l.generator, l.inverse))
    }

    pub fn evaluate(&self, w: &Word) -> Elem {
        self.multiply_word(&self.identity(), w)
    }

    /// Human-readable normal form.
    pub fn format(&self, e: &Elem) -> String {
        self.format_with(e, self.presentation().generators())
    }

    fn format_with(&self, e: &Elem, names: &[String]) -> String {
        let power = |name: &str, n: i64| match n {
            1 => name.to_string(),
            _ => format!("{name}^{n}"),
        };
        match (self, e) {
            (Model::FreeAbelian(_), Elem::Abelian(v)) => {
                let parts: Vec<String> = v
                    .iter()
                    .zip(names)
                    .filter(|(x, _)| **x != 0)
                    .map(|(x, n)| power(n, *x))
                    .collect();
                if parts.is_empty() { "1".into() } else { parts.join(" ") }
            }
            (Model::Free(_), Elem::Free(w)) => {
                let mut out = Vec::new();
                let mut i = 0;
                while i < w.len() {
                    let mut j = i;
                    while j < w.len() && w[j] == w[i] {
                        j += 1;
                    }
                    let n = (j - i) as i64 * i64::from(w[i].signum());
                    out.push(power(&names[w[i].unsigned_abs() as usize - 1], n));
                    i = j;
                }
                if out.is_empty() { "1".into() } else { out.join(" ") }
            }
            (Model::BaumslagSolitar(m), Elem::Bs { t, k }) => {
                // b^r a^q b^-p with r, p >= 0 minimal
                let mut e = 0u32;
                let mut den = t.denom().clone();
                let mb = BigInt::from(*m);
                while !den.is_one() && *m > 1 {
                    den /= &mb;
                    e += 1;
                }
                let r = i64::from(e).max(*k);
                let q = t * Q::from_integer(mb.pow(r as u32));
                let p = r - k;
                let mut out = Vec::new();
                if r != 0 {
                    out.push(power(&names[1], r));
                }
                if !q.is_zero() {
                    let q = q.to_integer();
                    out.push(if q.is_one() { names[0].clone() } else { format!("{}^{q}", names[0]) });
                }
                if p != 0 {
                    out.push(power(&names[1], -p));
                }
                if out.is_empty() { "1".into() } else { out.join(" ") }
            }
            (Model::Product(fs), Elem::Tuple(parts)) => {
                let mut offset = 0;
                let mut out = Vec::new();
                for (f, p) in fs.iter().zip(parts) {
                    let n = f.num_generators();
                    let s = f.format_with(p, &names[offset..offset + n]);
                    if s != "1" {
                        out.push(s);
                    }
                    offset += n;
                }
                if out.is_empty() { "1".into() } else { out.join(" ") }
            }
            (Model::Extension(x), Elem::Coset { h, j }) => {
                let nh = x.h.num_generators();
                let hs = x.h.format_with(h, &names[..nh]);
                match (hs.as_str(), *j) {
                    (_, 0) => hs,
                    ("1", j) => power(&names[nh], j as i64),
                    (_, j) => format!("{hs} {}", power(&names[nh], j as i64)),
                }
            }
            _ => panic!("element does not belong to this model"),
        }
    }
}
