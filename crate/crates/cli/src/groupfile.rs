//! Line-oriented group description files.
//!
//! ```text
//! # G2
//! kind structured
//! H 8
//! module p=5 delta=2 action=2
//! module p=17 delta=1 action=2
//! ```
//!
//! Permutation groups use `kind perm`, `points N` and one `gen (0 1 2)(3 4)`
//! line per generator (points are 0-based). Abelian groups use
//! `kind abelian` and `orders 2 4`. Structured groups list the cyclic
//! factors of `H` on the `H` line and one `module` line per module, with one
//! comma-separated action unit per factor of `H`.

use std::fmt::Write as _;

use cimlab_core::{FiniteGroup, GroupElement, ModuleSpec, Perm, Realization, StructuredElement, StructuredGroup};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupFile {
    Perm { points: usize, generators: Vec<Perm> },
    Abelian { orders: Vec<u32> },
    Structured(StructuredGroup),
}

fn parse_err(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse(format!("line {line}: {}", msg.into()))
}

fn numbers(line: usize, words: &[&str]) -> Result<Vec<u32>, CliError> {
    words
        .iter()
        .map(|w| w.parse::<u32>().map_err(|_| parse_err(line, format!("expected an integer, found {w:?}"))))
        .collect()
}

impl GroupFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut kind: Option<String> = None;
        let mut points: Option<usize> = None;
        let mut gens: Vec<(usize, String)> = Vec::new();
        let mut orders: Option<Vec<u32>> = None;
        let mut h: Option<Vec<u32>> = None;
        let mut modules: Vec<ModuleSpec> = Vec::new();

        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            let words: Vec<&str> = rest.split_whitespace().collect();
            match key {
                "kind" => {
                    if kind.is_some() {
                        return Err(parse_err(ln, "duplicate kind line"));
                    }
                    kind = Some(rest.to_string());
                }
                "points" => {
                    let n = numbers(ln, &words)?;
                    let [n] = n[..] else { return Err(parse_err(ln, "points takes one integer")) };
                    points = Some(n as usize);
                }
                "gen" => gens.push((ln, rest.to_string())),
                "orders" => orders = Some(numbers(ln, &words)?),
                "H" => h = Some(numbers(ln, &words)?),
                "module" => modules.push(parse_module(ln, &words)?),
                other => return Err(parse_err(ln, format!("unknown keyword {other:?}"))),
            }
        }

        match kind.as_deref() {
            Some("perm") => {
                let points = points.ok_or_else(|| CliError::Parse("perm file needs a points line".into()))?;
                let generators = gens
                    .into_iter()
                    .map(|(ln, g)| Perm::parse_cycles(points, &g).map_err(|e| parse_err(ln, e.to_string())))
                    .collect::<Result<_, _>>()?;
                Ok(GroupFile::Perm { points, generators })
            }
            Some("abelian") => {
                let orders = orders.ok_or_else(|| CliError::Parse("abelian file needs an orders line".into()))?;
                if orders.contains(&0) {
                    return Err(CliError::Parse("cyclic factor of order 0".into()));
                }
                Ok(GroupFile::Abelian { orders })
            }
            Some("structured") => {
                let h = h.ok_or_else(|| CliError::Parse("structured file needs an H line".into()))?;
                Ok(GroupFile::Structured(StructuredGroup::new(h, modules)))
            }
            Some(other) => Err(CliError::Parse(format!("unknown kind {other:?}"))),
            None => Err(CliError::Parse("missing kind line".into())),
        }
    }

    pub fn emit(&self) -> String {
        let mut out = String::new();
        match self {
            GroupFile::Perm { points, generators } => {
                let _ = writeln!(out, "kind perm");
                let _ = writeln!(out, "points {points}");
                for g in generators {
                    let _ = writeln!(out, "gen {g}");
                }
            }
            GroupFile::Abelian { orders } => {
                let _ = writeln!(out, "kind abelian");
                let _ = writeln!(out, "orders {}", join(orders, " "));
            }
            GroupFile::Structured(g) => {
                let _ = writeln!(out, "kind structured");
                let _ = writeln!(out, "H {}", join(&g.h_orders, " ").trim_end());
                for m in &g.modules {
                    let _ = writeln!(out, "module p={} delta={} action={}", m.p, m.delta, join(&m.action, ","));
                }
            }
        }
        out
    }

    pub fn structured(&self) -> Option<&StructuredGroup> {
        match self {
            GroupFile::Structured(g) => Some(g),
            _ => None,
        }
    }

    /// The concrete group; structured groups only need to be well formed here.
    pub fn to_group(&self, element_cap: usize) -> Result<FiniteGroup, CliError> {
        let g = match self {
            GroupFile::Perm { points, generators } => FiniteGroup::permutation(*points, generators.clone())?,
            GroupFile::Abelian { orders } => {
                let gens = (0..orders.len())
                    .map(|k| {
                        let mut t = vec![0; orders.len()];
                        t[k] = 1 % orders[k];
                        GroupElement::Abelian(t)
                    })
                    .collect();
                FiniteGroup::new(Realization::Abelian { moduli: orders.clone() }, gens)?
            }
            GroupFile::Structured(g) => return Ok(g.materialize(element_cap)?),
        };
        Ok(g.with_element_cap(element_cap))
    }

    /// Parses an element in this file's notation: cycle notation for
    /// permutations, `a,b,…` for abelian tuples, and `v;…;v;h` for
    /// structured groups (one comma-separated block per module, then `H`).
    pub fn parse_element(&self, text: &str) -> Result<GroupElement, CliError> {
        let bad = |msg: String| CliError::Parse(format!("element {text:?}: {msg}"));
        let ints = |s: &str| -> Result<Vec<u32>, CliError> {
            s.split(',')
                .map(str::trim)
                .filter(|w| !w.is_empty())
                .map(|w| w.parse::<u32>().map_err(|_| bad(format!("{w:?} is not an integer"))))
                .collect()
        };
        match self {
            GroupFile::Perm { points, .. } => {
                Ok(GroupElement::Perm(Perm::parse_cycles(*points, text).map_err(|e| bad(e.to_string()))?))
            }
            GroupFile::Abelian { orders } => {
                let t = ints(text)?;
                if t.len() != orders.len() || t.iter().zip(orders).any(|(&x, &m)| x >= m) {
                    return Err(bad(format!("expected {} residues below {orders:?}", orders.len())));
                }
                Ok(GroupElement::Abelian(t))
            }
            GroupFile::Structured(g) => {
                let blocks: Vec<&str> = text.split(';').collect();
                if blocks.len() != g.modules.len() + 1 {
                    return Err(bad(format!("expected {} ';'-separated blocks", g.modules.len() + 1)));
                }
                let mut vec = Vec::new();
                for (m, b) in g.modules.iter().zip(&blocks) {
                    let v = ints(b)?;
                    if v.len() != m.delta || v.iter().any(|&c| c >= m.p) {
                        return Err(bad(format!("block {b:?} needs {} residues mod {}", m.delta, m.p)));
                    }
                    vec.extend(v);
                }
                let h = ints(blocks[g.modules.len()])?;
                let x = StructuredElement::new(vec, h);
                if !g.is_element(&x) {
                    return Err(bad(format!("H part must have {} exponents below {:?}", g.h_orders.len(), g.h_orders)));
                }
                Ok(GroupElement::Structured(x))
            }
        }
    }
}

fn parse_module(ln: usize, words: &[&str]) -> Result<ModuleSpec, CliError> {
    let (mut p, mut delta, mut action) = (None, None, None);
    for w in words {
        let (k, v) = w.split_once('=').ok_or_else(|| parse_err(ln, format!("expected key=value, found {w:?}")))?;
        let num = |s: &str| s.parse::<u32>().map_err(|_| parse_err(ln, format!("bad integer {s:?}")));
        match k {
            "p" => p = Some(num(v)?),
            "delta" => delta = Some(num(v)? as usize),
            "action" => {
                action = Some(v.split(',').filter(|s| !s.is_empty()).map(num).collect::<Result<Vec<u32>, _>>()?)
            }
            other => return Err(parse_err(ln, format!("unknown module field {other:?}"))),
        }
    }
    Ok(ModuleSpec::new(
        p.ok_or_else(|| parse_err(ln, "module needs p="))?,
        delta.ok_or_else(|| parse_err(ln, "module needs delta="))?,
        action.unwrap_or_default(),
    ))
}

fn join(xs: &[u32], sep: &str) -> String {
    xs.iter().map(u32::to_string).collect::<Vec<_>>().join(sep)
}
