//! On-disk algebra descriptions.
//!
//! Every rational is a string `"p/q"` or `"p"`. Files are validated on load
//! and re-serialize canonically: entries sorted, zeros dropped, rationals in
//! lowest terms.

use std::collections::BTreeMap;
use std::path::Path;

use dgla_core::linalg::{format_scalar, parse_scalar};
use dgla_core::stability::{
    check_lie_subalgebra, so_subalgebra, sp_subalgebra, MapIntoSubalgProblem,
};
use dgla_core::{AssocAlgebra, LieAlgebra, LieMorphism, Mat, Scalar, Subspace};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Lie,
    Assoc,
    Morphism,
    /// A morphism together with subalgebras of its target.
    Pair,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraBlock {
    pub dim: usize,
    #[serde(default)]
    pub structure: Vec<Entry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormKind {
    /// Symmetric form, generating `so(g)`.
    Symmetric,
    /// Antisymmetric form, generating `sp(ω)`.
    Skew,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Form {
    pub kind: FormKind,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub structure: Vec<Entry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<AlgebraBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<AlgebraBlock>,
    /// Rows indexed by target basis, columns by source basis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub subspaces: BTreeMap<String, Vec<Vec<String>>>,
    /// Bilinear forms on `K^n` whose invariance algebras become subspaces of `gl(n)`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub forms: BTreeMap<String, Form>,
}

/// A validated file.
#[derive(Clone, Debug)]
pub enum Loaded {
    Lie {
        algebra: LieAlgebra,
        subspaces: BTreeMap<String, Subspace>,
    },
    Assoc {
        algebra: AssocAlgebra,
    },
    /// `subspaces` live in the target.
    Morphism {
        map: LieMorphism,
        subspaces: BTreeMap<String, Subspace>,
    },
    Pair {
        map: LieMorphism,
        subspaces: BTreeMap<String, Subspace>,
    },
}

impl Loaded {
    pub fn kind(&self) -> Kind {
        match self {
            Loaded::Lie { .. } => Kind::Lie,
            Loaded::Assoc { .. } => Kind::Assoc,
            Loaded::Morphism { .. } => Kind::Morphism,
            Loaded::Pair { .. } => Kind::Pair,
        }
    }

    pub fn subspaces(&self) -> Option<&BTreeMap<String, Subspace>> {
        match self {
            Loaded::Lie { subspaces, .. }
            | Loaded::Morphism { subspaces, .. }
            | Loaded::Pair { subspaces, .. } => Some(subspaces),
            Loaded::Assoc { .. } => None,
        }
    }

    pub fn morphism(&self) -> Option<&LieMorphism> {
        match self {
            Loaded::Morphism { map, .. } | Loaded::Pair { map, .. } => Some(map),
            _ => None,
        }
    }

    /// Picks a subspace by name; with no name, the only one there is.
    pub fn subspace(&self, name: Option<&str>) -> Result<(String, &Subspace), CliError> {
        let subs = self
            .subspaces()
            .ok_or_else(|| CliError::Usage("this kind of file has no subspaces".into()))?;
        match name {
            Some(n) => subs.get(n).map(|s| (n.to_string(), s)).ok_or_else(|| {
                CliError::Usage(format!(
                    "no subspace named {n:?}; available: {}",
                    names(subs)
                ))
            }),
            None if subs.len() == 1 => {
                let (n, s) = subs.iter().next().expect("one subspace");
                Ok((n.clone(), s))
            }
            None if subs.is_empty() => Err(CliError::Usage("file declares no subspaces".into())),
            None => Err(CliError::Usage(format!(
                "several subspaces; pick one with --subspace ({})",
                names(subs)
            ))),
        }
    }

    pub fn into_subalgebra_problem(
        &self,
        name: Option<&str>,
    ) -> Result<MapIntoSubalgProblem, CliError> {
        let f = self
            .morphism()
            .ok_or_else(|| CliError::Usage("needs a morphism or pair file".into()))?;
        let (n, u) = self.subspace(name)?;
        MapIntoSubalgProblem::new(f.clone(), u.clone())
            .map_err(|e| CliError::invariant(format!("subspaces.{n}"), e))
    }
}

fn names(subs: &BTreeMap<String, Subspace>) -> String {
    subs.keys().cloned().collect::<Vec<_>>().join(", ")
}

fn scalar(loc: &str, s: &str) -> Result<Scalar, CliError> {
    parse_scalar(s).map_err(|e| CliError::input(loc, e.to_string()))
}

fn vector(loc: &str, v: &[String], dim: usize) -> Result<Vec<Scalar>, CliError> {
    if v.len() != dim {
        return Err(CliError::input(
            loc,
            format!("expected {dim} coordinates, got {}", v.len()),
        ));
    }
    v.iter()
        .enumerate()
        .map(|(i, s)| scalar(&format!("{loc}[{i}]"), s))
        .collect()
}

fn matrix(loc: &str, rows: &[Vec<String>], nrows: usize, ncols: usize) -> Result<Mat, CliError> {
    if rows.len() != nrows {
        return Err(CliError::input(
            loc,
            format!("expected {nrows} rows, got {}", rows.len()),
        ));
    }
    let rows = rows
        .iter()
        .enumerate()
        .map(|(r, row)| vector(&format!("{loc}[{r}]"), row, ncols))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Mat::from_rows(rows).expect("rows checked"))
}

fn entries(
    loc: &str,
    es: &[Entry],
    dim: usize,
    lie: bool,
) -> Result<Vec<(usize, usize, usize, Scalar)>, CliError> {
    es.iter()
        .enumerate()
        .map(|(n, e)| {
            let at = format!("{loc}[{n}]");
            for (name, idx) in [("i", e.i), ("j", e.j), ("k", e.k)] {
                if idx >= dim {
                    return Err(CliError::input(
                        &at,
                        format!("index {name} = {idx} out of range for dimension {dim}"),
                    ));
                }
            }
            if lie && e.i >= e.j {
                return Err(CliError::input(
                    &at,
                    format!("Lie entries need i < j, got i = {}, j = {}", e.i, e.j),
                ));
            }
            Ok((e.i, e.j, e.k, scalar(&format!("{at}.value"), &e.value)?))
        })
        .collect()
}

fn lie_block(loc: &str, b: &AlgebraBlock) -> Result<LieAlgebra, CliError> {
    let es = entries(&format!("{loc}structure"), &b.structure, b.dim, true)?;
    LieAlgebra::from_entries(b.dim, &es)
        .map_err(|e| CliError::invariant(format!("{loc}structure"), e))
}

fn required<'a, T>(field: &str, v: &'a Option<T>) -> Result<&'a T, CliError> {
    v.as_ref()
        .ok_or_else(|| CliError::input(field, "missing field"))
}

fn forbid(kind: Kind, fields: &[(&str, bool)]) -> Result<(), CliError> {
    match fields.iter().find(|(_, present)| *present) {
        Some((name, _)) => Err(CliError::input(
            *name,
            format!("not allowed for kind {kind:?}").to_lowercase(),
        )),
        None => Ok(()),
    }
}

fn subspace_map(
    raw: &BTreeMap<String, Vec<Vec<String>>>,
    dim: usize,
) -> Result<BTreeMap<String, Subspace>, CliError> {
    raw.iter()
        .map(|(name, vs)| {
            let loc = format!("subspaces.{name}");
            let vs = vs
                .iter()
                .enumerate()
                .map(|(r, v)| vector(&format!("{loc}[{r}]"), v, dim))
                .collect::<Result<Vec<_>, _>>()?;
            let s = Subspace::span(dim, &vs).map_err(|e| CliError::input(&loc, e.to_string()))?;
            Ok((name.clone(), s))
        })
        .collect()
}

fn form_subspaces(
    raw: &BTreeMap<String, Form>,
    target_dim: usize,
    out: &mut BTreeMap<String, Subspace>,
) -> Result<(), CliError> {
    if raw.is_empty() {
        return Ok(());
    }
    let n = (1..=target_dim)
        .find(|n| n * n == target_dim)
        .ok_or_else(|| {
            CliError::input(
                "forms",
                "forms need a target of dimension n², read as gl(n)",
            )
        })?;
    for (name, form) in raw {
        let loc = format!("forms.{name}");
        if out.contains_key(name) {
            return Err(CliError::input(
                &loc,
                "name clashes with an explicit subspace",
            ));
        }
        let g = matrix(&format!("{loc}.matrix"), &form.matrix, n, n)?;
        let s = match form.kind {
            FormKind::Symmetric => so_subalgebra(&g),
            FormKind::Skew => sp_subalgebra(&g),
        }
        .map_err(|e| CliError::invariant(&loc, e))?;
        out.insert(name.clone(), s);
    }
    Ok(())
}

impl AlgebraFile {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| {
            CliError::input(
                format!("line {} column {}", e.line(), e.column()),
                e.to_string(),
            )
        })
    }

    /// Validates everything the kind declares.
    pub fn load(&self) -> Result<Loaded, CliError> {
        let has_alg = self.dim.is_some() || !self.structure.is_empty();
        let has_map = self.source.is_some() || self.target.is_some() || self.matrix.is_some();
        match self.kind {
            Kind::Lie => {
                forbid(
                    self.kind,
                    &[
                        ("unit", self.unit.is_some()),
                        ("source", has_map),
                        ("forms", !self.forms.is_empty()),
                    ],
                )?;
                let dim = *required("dim", &self.dim)?;
                let algebra = lie_block(
                    "",
                    &AlgebraBlock {
                        dim,
                        structure: self.structure.clone(),
                    },
                )?;
                let subspaces = subspace_map(&self.subspaces, dim)?;
                for (name, s) in &subspaces {
                    check_lie_subalgebra(&algebra, s)
                        .map_err(|e| CliError::invariant(format!("subspaces.{name}"), e))?;
                }
                Ok(Loaded::Lie { algebra, subspaces })
            }
            Kind::Assoc => {
                forbid(
                    self.kind,
                    &[
                        ("source", has_map),
                        ("subspaces", !self.subspaces.is_empty()),
                        ("forms", !self.forms.is_empty()),
                    ],
                )?;
                let dim = *required("dim", &self.dim)?;
                let es = entries("structure", &self.structure, dim, false)?;
                let unit = self
                    .unit
                    .as_ref()
                    .map(|u| vector("unit", u, dim))
                    .transpose()?;
                let algebra = AssocAlgebra::from_entries(dim, &es, unit)
                    .map_err(|e| CliError::invariant("structure", e))?;
                Ok(Loaded::Assoc { algebra })
            }
            Kind::Morphism | Kind::Pair => {
                forbid(
                    self.kind,
                    &[("dim", has_alg), ("unit", self.unit.is_some())],
                )?;
                let source = lie_block("source.", required("source", &self.source)?)?;
                let target = lie_block("target.", required("target", &self.target)?)?;
                let m = matrix(
                    "matrix",
                    required("matrix", &self.matrix)?,
                    target.dim(),
                    source.dim(),
                )?;
                let map = LieMorphism::new(source, target, m)
                    .map_err(|e| CliError::invariant("matrix", e))?;
                let mut subspaces = subspace_map(&self.subspaces, map.target().dim())?;
                form_subspaces(&self.forms, map.target().dim(), &mut subspaces)?;
                for (name, s) in &subspaces {
                    let loc = format!("subspaces.{name}");
                    check_lie_subalgebra(map.target(), s)
                        .map_err(|e| CliError::invariant(&loc, e))?;
                    if self.kind == Kind::Pair {
                        MapIntoSubalgProblem::new(map.clone(), s.clone())
                            .map_err(|e| CliError::invariant(&loc, e))?;
                    }
                }
                if self.kind == Kind::Pair && subspaces.is_empty() {
                    return Err(CliError::input(
                        "subspaces",
                        "a pair file needs at least one target subalgebra",
                    ));
                }
                Ok(if self.kind == Kind::Pair {
                    Loaded::Pair { map, subspaces }
                } else {
                    Loaded::Morphism { map, subspaces }
                })
            }
        }
    }

    /// The same file with entries sorted, merged, zero-free and in lowest terms.
    pub fn canonical(&self) -> Result<Self, CliError> {
        self.load()?;
        let mut out = self.clone();
        if let Some(d) = self.dim {
            out.structure = canonical_entries(&self.structure, d, self.kind == Kind::Lie)?;
        }
        for (b, o) in [
            (&self.source, &mut out.source),
            (&self.target, &mut out.target),
        ] {
            if let Some(b) = b {
                *o = Some(AlgebraBlock {
                    dim: b.dim,
                    structure: canonical_entries(&b.structure, b.dim, true)?,
                });
            }
        }
        out.unit = self
            .unit
            .as_ref()
            .map(|u| canonical_strings("unit", u))
            .transpose()?;
        out.matrix = self
            .matrix
            .as_ref()
            .map(|m| canonical_rows("matrix", m))
            .transpose()?;
        out.subspaces = self
            .subspaces
            .iter()
            .map(|(k, v)| Ok((k.clone(), canonical_rows(&format!("subspaces.{k}"), v)?)))
            .collect::<Result<_, CliError>>()?;
        out.forms = self
            .forms
            .iter()
            .map(|(k, f)| {
                Ok((
                    k.clone(),
                    Form {
                        kind: f.kind,
                        matrix: canonical_rows(&format!("forms.{k}"), &f.matrix)?,
                    },
                ))
            })
            .collect::<Result<_, CliError>>()?;
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_lie(l: &LieAlgebra) -> Self {
        AlgebraFile {
            kind: Kind::Lie,
            dim: Some(l.dim()),
            structure: lie_entries(l),
            ..Self::empty(Kind::Lie)
        }
    }

    pub fn from_assoc(a: &AssocAlgebra) -> Self {
        let n = a.dim();
        let mut structure = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    push_entry(&mut structure, i, j, k, a.m(i, j, k));
                }
            }
        }
        AlgebraFile {
            dim: Some(n),
            structure,
            unit: a.unit().map(|u| u.iter().map(format_scalar).collect()),
            ..Self::empty(Kind::Assoc)
        }
    }

    pub fn from_morphism(kind: Kind, f: &LieMorphism) -> Self {
        let block = |l: &LieAlgebra| AlgebraBlock {
            dim: l.dim(),
            structure: lie_entries(l),
        };
        let m = f.matrix();
        AlgebraFile {
            source: Some(block(f.source())),
            target: Some(block(f.target())),
            matrix: Some(
                (0..m.rows())
                    .map(|r| m.row(r).iter().map(format_scalar).collect())
                    .collect(),
            ),
            ..Self::empty(kind)
        }
    }

    pub fn with_subspace(mut self, name: &str, s: &Subspace) -> Self {
        self.subspaces.insert(
            name.to_string(),
            s.vectors()
                .iter()
                .map(|v| v.iter().map(format_scalar).collect())
                .collect(),
        );
        self
    }

    pub fn with_form(mut self, name: &str, kind: FormKind, g: &Mat) -> Self {
        let matrix = (0..g.rows())
            .map(|r| g.row(r).iter().map(format_scalar).collect())
            .collect();
        self.forms.insert(name.to_string(), Form { kind, matrix });
        self
    }

    fn empty(kind: Kind) -> Self {
        AlgebraFile {
            kind,
            dim: None,
            structure: Vec::new(),
            unit: None,
            source: None,
            target: None,
            matrix: None,
            subspaces: BTreeMap::new(),
            forms: BTreeMap::new(),
        }
    }
}

fn push_entry(out: &mut Vec<Entry>, i: usize, j: usize, k: usize, v: &Scalar) {
    if *v != Scalar::from_integer(0.into()) {
        out.push(Entry {
            i,
            j,
            k,
            value: format_scalar(v),
        });
    }
}

fn lie_entries(l: &LieAlgebra) -> Vec<Entry> {
    let n = l.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                push_entry(&mut out, i, j, k, l.c(i, j, k));
            }
        }
    }
    out
}

fn canonical_entries(es: &[Entry], dim: usize, lie: bool) -> Result<Vec<Entry>, CliError> {
    let mut acc: BTreeMap<(usize, usize, usize), Scalar> = BTreeMap::new();
    for (i, j, k, v) in entries("structure", es, dim, lie)? {
        *acc.entry((i, j, k))
            .or_insert_with(|| Scalar::from_integer(0.into())) += v;
    }
    let mut out = Vec::new();
    for ((i, j, k), v) in acc {
        push_entry(&mut out, i, j, k, &v);
    }
    Ok(out)
}

fn canonical_strings(loc: &str, v: &[String]) -> Result<Vec<String>, CliError> {
    v.iter()
        .enumerate()
        .map(|(i, s)| Ok(format_scalar(&scalar(&format!("{loc}[{i}]"), s)?)))
        .collect()
}

fn canonical_rows(loc: &str, rows: &[Vec<String>]) -> Result<Vec<Vec<String>>, CliError> {
    rows.iter()
        .enumerate()
        .map(|(r, row)| canonical_strings(&format!("{loc}[{r}]"), row))
        .collect()
}
