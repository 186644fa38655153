use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use dgla_core::assoc::{
    assoc_rigidity, gerstenhaber_dgla, hochschild_complex, normalized_subcomplex,
    unitality_stability,
};
use dgla_core::lie::{ce_complex_to, lie_rigidity, nr_dgla_window};
use dgla_core::morphism::{morphism_dgla, morphism_rigidity};
use dgla_core::normalizer::perturb_in_orbit;
use dgla_core::stability::{
    graph_problem, graph_stability, into_subalg_subdgla, map_into_subalg_stability, pair_element,
    pair_stability, pair_subdgla, subalg_stability, subalg_subdgla, SubalgebraProblem,
};
use dgla_core::{
    CochainComplex, DglaSub, LieAlgebra, NormalizeOptions, Normalizer, Representation, Scalar,
};

use crate::error::CliError;
use crate::file::{AlgebraFile, Kind, Loaded};
use crate::report::{Report, Value};

#[derive(Debug, Parser)]
#[command(
    name = "dgla",
    version,
    about = "Deformation cohomology, rigidity and stability verdicts for small algebras"
)]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate the declared identities.
    Check { file: PathBuf },
    /// Exact cohomology dimensions of a classical complex.
    Cohomology {
        file: PathBuf,
        #[arg(long, value_enum)]
        complex: Option<ComplexKind>,
        /// adjoint, trivial, through-f or quotient:<subspace>.
        #[arg(long)]
        module: Option<String>,
        /// Inclusive range `a..b`, or a single degree.
        #[arg(long, default_value = "0..2")]
        degrees: String,
    },
    /// Rigidity verdict for the file's structure.
    Rigidity { file: PathBuf },
    /// Stability verdict for a subalgebra or morphism property.
    Stability {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Named subspace from the file; needed when it has several.
        #[arg(long)]
        subspace: Option<String>,
    },
    /// Whether nearby multiplications stay unital.
    Unitality { file: PathBuf },
    /// Perturb along a gauge orbit, then gauge back into the sub-DGLA.
    Normalize {
        file: PathBuf,
        /// Seed of the random gauge direction.
        #[arg(long)]
        perturb_seed: u64,
        /// Size of the perturbation.
        #[arg(long)]
        epsilon: f64,
        /// Residual tolerance [default: 1e-9].
        #[arg(long)]
        tol: Option<f64>,
        /// Newton iteration cap [default: 50].
        #[arg(long)]
        max_iter: Option<usize>,
        /// Defaults from the file kind.
        #[arg(long, value_enum)]
        setting: Option<Setting>,
        /// Named subspace from the file.
        #[arg(long)]
        subspace: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ComplexKind {
    Ce,
    Hochschild,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Subalgebra,
    Pair,
    Graph,
    IntoSubalgebra,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Setting {
    Rigidity,
    Unitality,
    Subalgebra,
    Pair,
    Graph,
    IntoSubalgebra,
}

impl Setting {
    pub fn name(self) -> &'static str {
        match self {
            Setting::Rigidity => "rigidity",
            Setting::Unitality => "unitality",
            Setting::Subalgebra => "subalgebra",
            Setting::Pair => "pair",
            Setting::Graph => "graph",
            Setting::IntoSubalgebra => "into-subalgebra",
        }
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Cohomology { .. } => "cohomology",
            Command::Rigidity { .. } => "rigidity",
            Command::Stability { .. } => "stability",
            Command::Unitality { .. } => "unitality",
            Command::Normalize { .. } => "normalize",
        }
    }

    fn file(&self) -> &PathBuf {
        match self {
            Command::Check { file }
            | Command::Cohomology { file, .. }
            | Command::Rigidity { file }
            | Command::Stability { file, .. }
            | Command::Unitality { file }
            | Command::Normalize { file, .. } => file,
        }
    }
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Lie => "lie",
        Kind::Assoc => "assoc",
        Kind::Morphism => "morphism",
        Kind::Pair => "pair",
    }
}

/// Runs one command; errors carry their exit code.
pub fn execute(command: &Command) -> Result<Report, CliError> {
    let start = Instant::now();
    let file = command.file();
    let loaded = AlgebraFile::read(file)?.load()?;
    let mut r = Report::new(command.name());
    r.text("file", file.display().to_string());
    r.text("kind", kind_name(loaded.kind()));
    match command {
        Command::Check { .. } => check(&loaded, &mut r),
        Command::Cohomology {
            complex,
            module,
            degrees,
            ..
        } => cohomology(&loaded, *complex, module.as_deref(), degrees, &mut r)?,
        Command::Rigidity { .. } => {
            let v = match &loaded {
                Loaded::Lie { algebra, .. } => lie_rigidity(algebra)?,
                Loaded::Assoc { algebra } => assoc_rigidity(algebra)?,
                Loaded::Morphism { map, .. } | Loaded::Pair { map, .. } => morphism_rigidity(map)?,
            };
            r.verdict(&v);
        }
        Command::Stability { mode, subspace, .. } => {
            stability(&loaded, *mode, subspace.as_deref(), &mut r)?
        }
        Command::Unitality { .. } => match &loaded {
            Loaded::Assoc { algebra } => {
                r.verdict(&unitality_stability(algebra)?);
            }
            _ => return Err(CliError::Usage("unitality needs an assoc file".into())),
        },
        Command::Normalize {
            perturb_seed,
            epsilon,
            tol,
            max_iter,
            setting,
            subspace,
            ..
        } => {
            let mut opts = NormalizeOptions::default();
            if let Some(t) = tol {
                opts.tolerance = *t;
            }
            if let Some(m) = max_iter {
                opts.max_iter = *m;
            }
            gauge_normalize(
                &loaded,
                *setting,
                subspace.as_deref(),
                *perturb_seed,
                *epsilon,
                &opts,
                &mut r,
            )?;
        }
    }
    r.push(
        "timing_ms",
        Value::Float(start.elapsed().as_secs_f64() * 1e3),
    );
    Ok(r)
}

fn check(loaded: &Loaded, r: &mut Report) {
    match loaded {
        Loaded::Lie { algebra, .. } => {
            r.int("dim", algebra.dim());
        }
        Loaded::Assoc { algebra } => {
            r.int("dim", algebra.dim());
            r.push("unital", Value::Bool(algebra.unit().is_some()));
        }
        Loaded::Morphism { map, .. } | Loaded::Pair { map, .. } => {
            r.int("source_dim", map.source().dim());
            r.int("target_dim", map.target().dim());
        }
    }
    if let Some(subs) = loaded.subspaces() {
        for (name, s) in subs {
            r.int(&format!("subspace_dim.{name}"), s.dim());
        }
    }
    r.push("valid", Value::Bool(true));
}

fn parse_degrees(s: &str) -> Result<(i32, i32), CliError> {
    let bad = || CliError::Usage(format!("degrees must look like 0..2 or 1, got {s:?}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (
            a.trim().parse().map_err(|_| bad())?,
            b.trim()
                .trim_start_matches('=')
                .parse()
                .map_err(|_| bad())?,
        ),
        None => {
            let k = s.trim().parse().map_err(|_| bad())?;
            (k, k)
        }
    };
    if lo < 0 || lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// Largest degree the commands compute; beyond this the complexes are too big to be useful.
const MAX_DEGREE: i32 = 5;

fn cohomology(
    loaded: &Loaded,
    complex: Option<ComplexKind>,
    module: Option<&str>,
    degrees: &str,
    r: &mut Report,
) -> Result<(), CliError> {
    let (lo, hi) = parse_degrees(degrees)?;
    let complex = complex.unwrap_or(if loaded.kind() == Kind::Assoc {
        ComplexKind::Hochschild
    } else {
        ComplexKind::Ce
    });
    let c: CochainComplex = match complex {
        ComplexKind::Hochschild => {
            let Loaded::Assoc { algebra } = loaded else {
                return Err(CliError::Usage(
                    "the Hochschild complex needs an assoc file".into(),
                ));
            };
            if module.is_some_and(|m| m != "adjoint") {
                return Err(CliError::Usage(
                    "the Hochschild complex only supports --module adjoint".into(),
                ));
            }
            if hi > 2 {
                return Err(CliError::Usage(
                    "Hochschild degrees are available up to 2".into(),
                ));
            }
            r.text("complex", "hochschild");
            r.text("module", "adjoint");
            hochschild_complex(algebra)?
        }
        ComplexKind::Ce => {
            if hi > MAX_DEGREE {
                return Err(CliError::Usage(format!(
                    "CE degrees are available up to {MAX_DEGREE}"
                )));
            }
            let (lie, rep, name) = ce_module(loaded, module)?;
            r.text("complex", "ce");
            r.text("module", name);
            ce_complex_to(&lie, &rep, (hi + 1) as usize)?
        }
    };
    for k in lo..=hi {
        r.int(&format!("C{k}"), c.dim(k));
        r.int(&format!("H{k}"), c.cohomology(k));
    }
    Ok(())
}

fn ce_module(
    loaded: &Loaded,
    module: Option<&str>,
) -> Result<(LieAlgebra, Representation, String), CliError> {
    let (base, default) = match loaded {
        Loaded::Lie { algebra, .. } => (algebra, "adjoint"),
        Loaded::Morphism { map, .. } | Loaded::Pair { map, .. } => (map.source(), "through-f"),
        Loaded::Assoc { .. } => {
            return Err(CliError::Usage(
                "the CE complex needs a lie, morphism or pair file".into(),
            ))
        }
    };
    let module = module.unwrap_or(default);
    let out = match (module, loaded) {
        ("adjoint", _) => (base.clone(), Representation::adjoint(base)),
        ("trivial", _) => (base.clone(), Representation::trivial(base, 1)),
        ("through-f", Loaded::Morphism { map, .. } | Loaded::Pair { map, .. }) => {
            (base.clone(), map.induced_representation())
        }
        (m, Loaded::Lie { algebra, .. }) if m.starts_with("quotient:") => {
            let (name, w) = loaded.subspace(Some(&m["quotient:".len()..]))?;
            let p = SubalgebraProblem::new(algebra.clone(), w.clone())
                .map_err(|e| CliError::invariant(format!("subspaces.{name}"), e))?;
            let (sub, rep) = p.quotient_representation()?;
            (sub, rep)
        }
        (m, _) if m.starts_with("quotient:") => {
            let p = loaded.into_subalgebra_problem(Some(&m["quotient:".len()..]))?;
            (base.clone(), p.quotient_representation()?)
        }
        (m, _) => {
            return Err(CliError::Usage(format!(
                "module {m:?} does not apply to this file"
            )))
        }
    };
    Ok((out.0, out.1, module.to_string()))
}

fn stability(
    loaded: &Loaded,
    mode: Mode,
    subspace: Option<&str>,
    r: &mut Report,
) -> Result<(), CliError> {
    let v = match (mode, loaded) {
        (Mode::Subalgebra, Loaded::Lie { algebra, .. }) => {
            let (name, w) = loaded.subspace(subspace)?;
            r.text("subspace", name.clone());
            let p = SubalgebraProblem::new(algebra.clone(), w.clone())
                .map_err(|e| CliError::invariant(format!("subspaces.{name}"), e))?;
            subalg_stability(&p)?
        }
        (Mode::Subalgebra, _) => {
            return Err(CliError::Usage(
                "--mode subalgebra needs a lie file with a subspace".into(),
            ))
        }
        (_, Loaded::Lie { .. } | Loaded::Assoc { .. }) => {
            return Err(CliError::Usage(
                "this mode needs a morphism or pair file".into(),
            ))
        }
        (Mode::Pair, _) => pair_stability(loaded.morphism().expect("morphism kinds"))?,
        (Mode::Graph, _) => graph_stability(loaded.morphism().expect("morphism kinds"))?,
        (Mode::IntoSubalgebra, _) => {
            let (name, _) = loaded.subspace(subspace)?;
            r.text("subspace", name.clone());
            map_into_subalg_stability(&loaded.into_subalgebra_problem(Some(&name))?)?
        }
    };
    r.verdict(&v);
    Ok(())
}

fn zeros(n: usize) -> Vec<Scalar> {
    vec![Scalar::from_integer(0.into()); n]
}

/// The sub-DGLA and base point for a normalization setting.
pub fn normalization_setting(
    loaded: &Loaded,
    setting: Option<Setting>,
    subspace: Option<&str>,
) -> Result<(Setting, DglaSub, Vec<Scalar>), CliError> {
    let setting = setting.unwrap_or(match loaded {
        Loaded::Assoc { algebra } if algebra.unit().is_some() => Setting::Unitality,
        Loaded::Lie { subspaces, .. } if subspace.is_some() || !subspaces.is_empty() => {
            Setting::Subalgebra
        }
        Loaded::Pair { .. } => Setting::IntoSubalgebra,
        _ => Setting::Rigidity,
    });
    let rigid = |g: dgla_core::Dgla| -> Result<(DglaSub, Vec<Scalar>), CliError> {
        let n = g.dim(1);
        Ok((DglaSub::zero(Arc::new(g))?, zeros(n)))
    };
    let (h, q) = match (setting, loaded) {
        (Setting::Rigidity, Loaded::Lie { algebra, .. }) => {
            rigid(nr_dgla_window(algebra.dim(), 2)?.twisted(algebra.to_multimap().coeffs())?)?
        }
        (Setting::Rigidity, Loaded::Assoc { algebra }) => {
            rigid(gerstenhaber_dgla(algebra.dim())?.twisted(algebra.to_multimap().coeffs())?)?
        }
        (Setting::Rigidity, Loaded::Morphism { map, .. } | Loaded::Pair { map, .. }) => {
            rigid(morphism_dgla(map.source(), map.target())?.twisted(&map.to_element())?)?
        }
        (Setting::Unitality, Loaded::Assoc { algebra }) => {
            let h = normalized_subcomplex(algebra)?;
            let n = h.parent().dim(1);
            (h, zeros(n))
        }
        (Setting::Subalgebra, Loaded::Lie { algebra, .. }) => {
            let (name, w) = loaded.subspace(subspace)?;
            let p = SubalgebraProblem::new(algebra.clone(), w.clone())
                .map_err(|e| CliError::invariant(format!("subspaces.{name}"), e))?;
            (subalg_subdgla(&p)?, algebra.to_multimap().coeffs().to_vec())
        }
        (Setting::Pair, Loaded::Morphism { map, .. } | Loaded::Pair { map, .. }) => {
            (pair_subdgla(map)?, pair_element(map))
        }
        (Setting::Graph, Loaded::Morphism { map, .. } | Loaded::Pair { map, .. }) => {
            let p = graph_problem(map)?;
            (
                subalg_subdgla(&p)?,
                p.ambient().to_multimap().coeffs().to_vec(),
            )
        }
        (Setting::IntoSubalgebra, Loaded::Morphism { .. } | Loaded::Pair { .. }) => {
            let p = loaded.into_subalgebra_problem(subspace)?;
            (into_subalg_subdgla(&p)?, p.morphism().to_element())
        }
        (s, l) => {
            return Err(CliError::Usage(format!(
                "setting {} does not apply to a {} file",
                s.name(),
                kind_name(l.kind())
            )))
        }
    };
    Ok((setting, h, q))
}

fn gauge_normalize(
    loaded: &Loaded,
    setting: Option<Setting>,
    subspace: Option<&str>,
    seed: u64,
    epsilon: f64,
    opts: &NormalizeOptions,
    r: &mut Report,
) -> Result<(), CliError> {
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(CliError::Usage(format!(
            "--epsilon must be a finite non-negative number, got {epsilon}"
        )));
    }
    if !(opts.tolerance.is_finite() && opts.tolerance > 0.0) {
        return Err(CliError::Usage(format!(
            "--tol must be a finite positive number, got {}",
            opts.tolerance
        )));
    }
    let (setting, h, q) = normalization_setting(loaded, setting, subspace)?;
    r.text("setting", setting.name());
    let normalizer = Normalizer::new(&h, &q)?;
    let verdict = normalizer.verdict();
    r.int("obstruction_dim", verdict.obstruction_dim());
    r.int("tangent_dim", verdict.tangent_dim);
    r.push("passes", Value::Bool(verdict.passes));
    r.push("seed", Value::Int(seed.into()));
    r.push("epsilon", Value::Float(epsilon));
    let q_prime = perturb_in_orbit(h.parent(), &q, seed, epsilon)?;
    let start = normalizer
        .problem(&q_prime)?
        .residual(&vec![0.0; h.codim(0)])?
        .amax();
    r.push("initial_residual", Value::Float(start));
    let g = normalizer.solve(&q_prime, opts)?;
    r.gauge(&g);
    Ok(())
}
