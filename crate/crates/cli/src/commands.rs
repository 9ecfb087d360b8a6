use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use cyclic_ainfty::ainfty::{check_ainfty, check_morphism, minimal_model, AInftyAlgebra};
use cyclic_ainfty::cyclic::{
    check_cyclic, check_cyclic_morphism, check_strong_homotopy_inner_product,
    construct_cyclic_bimodule, construct_cyclic_model, Pairing,
};
use cyclic_ainfty::filtered::{
    check_filtered_ainfty, check_filtered_cyclic, check_filtered_cyclic_morphism,
    check_filtered_morphism, check_filtered_potential_invariance, compute_filtered_potential,
    FilteredAInftyAlgebra,
};
use cyclic_ainfty::graded::{parse_scalar, Scalar};
use cyclic_ainfty::potential::{
    check_potential_invariance, compute_potential, nc_cyclize, pullback_potential, CyclicMode,
};

use crate::error::CliError;
use crate::spec::{emit_spec, parse_spec_in, MapTarget, SpecDocument};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Strict,
    General,
}

/// Checks and constructions for cyclic A-infinity algebras given as spec files.
#[derive(Debug, Parser)]
#[command(name = "ainfty", version)]
pub struct Cli {
    /// Highest arity to check or construct.
    #[arg(long, global = true)]
    pub max_arity: Option<usize>,
    /// Write the constructed document here instead of into the report.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Cyclization mode for potentials.
    #[arg(long, global = true, value_enum, default_value = "strict")]
    pub mode: Mode,
    /// Energy cap for the filtered commands; defaults to the file's `cap`.
    #[arg(long, global = true)]
    pub energy_cap: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// A∞-relations of the algebra.
    CheckAinfty { algebra: PathBuf },
    /// Morphism relations for `f: A -> B`.
    CheckMorphism {
        source: PathBuf,
        target: PathBuf,
        morphism: PathBuf,
    },
    /// Cyclic symmetry of the algebra's pairing.
    CheckCyclic { algebra: PathBuf },
    /// Cyclic-morphism conditions for `f: A -> B`.
    CheckCyclicMorphism {
        source: PathBuf,
        target: PathBuf,
        morphism: PathBuf,
    },
    /// Skew symmetry, closedness and homological non-degeneracy of a bimodule map.
    CheckShi { algebra: PathBuf },
    /// Cyclic model of an algebra with a strong homotopy inner product.
    Cyclicize { algebra: PathBuf },
    /// Cyclic model of a bimodule with a strong homotopy inner product.
    CyclicizeBimodule { bimodule: PathBuf },
    /// Potential of a cyclic algebra.
    Potential { algebra: PathBuf },
    /// Cyclization of the pullback of the target's potential along `h: A -> B`.
    PullbackPotential {
        source: PathBuf,
        target: PathBuf,
        morphism: PathBuf,
    },
    /// `Φ^A` against the cyclized pullback of `Φ^B` along a cyclic `h: A -> B`.
    ComparePotential {
        source: PathBuf,
        target: PathBuf,
        morphism: PathBuf,
    },
    /// Minimal model by homotopy transfer.
    Transfer { algebra: PathBuf },
    /// Filtered A∞-relations, energy level by energy level.
    CheckFilteredAinfty { algebra: PathBuf },
    /// Filtered morphism relations for `h: A -> B`.
    CheckFilteredMorphism {
        source: PathBuf,
        target: PathBuf,
        morphism: PathBuf,
    },
    /// Cyclic symmetry of a filtered algebra.
    CheckFilteredCyclic { algebra: PathBuf },
    /// Filtered cyclic-morphism conditions for `h: A -> B`.
    CheckFilteredCyclicMorphism {
        source: PathBuf,
        target: PathBuf,
        morphism: PathBuf,
    },
    /// Potential of a filtered cyclic algebra.
    FilteredPotential { algebra: PathBuf },
    /// Filtered potentials compared up to a constant along `h: A -> B`.
    CompareFilteredPotential {
        source: PathBuf,
        target: PathBuf,
        morphism: PathBuf,
    },
}

/// Report text and exit code: 0 when every check passes, 1 when one fails,
/// 2 on malformed input or a violated precondition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub report: String,
    pub code: i32,
}

struct Ctx<'a> {
    cli: &'a Cli,
    out: String,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load_in(path: &Path, ctx: &SpecDocument) -> Result<SpecDocument, CliError> {
    let text = read(path)?;
    parse_spec_in(&text, ctx).map_err(|e| match e {
        CliError::Parse(p) => CliError::Usage(format!("{}: {p}", path.display())),
        other => other,
    })
}

fn load(path: &Path) -> Result<SpecDocument, CliError> {
    load_in(path, &SpecDocument::default())
}

fn missing(path: &Path, section: &str) -> CliError {
    CliError::Usage(format!("{}: no [{section}] section", path.display()))
}

fn algebra<'a>(doc: &'a SpecDocument, path: &Path) -> Result<&'a AInftyAlgebra, CliError> {
    doc.algebra.as_ref().ok_or_else(|| missing(path, "algebra"))
}

fn pairing<'a>(doc: &'a SpecDocument, path: &Path) -> Result<&'a Pairing, CliError> {
    doc.pairing.as_ref().ok_or_else(|| missing(path, "pairing"))
}

/// Filtered algebra of the document, or its plain algebra placed at energy zero.
fn filtered_algebra(
    doc: &SpecDocument,
    path: &Path,
    cap: &Scalar,
) -> Result<FilteredAInftyAlgebra, CliError> {
    match (&doc.filtered_algebra, &doc.algebra) {
        (Some(a), _) => Ok(a.clone()),
        (None, Some(a)) => Ok(FilteredAInftyAlgebra::from_unfiltered(a, cap.clone())),
        _ => Err(missing(path, "algebra")),
    }
}

fn morphism_ctx(source: &SpecDocument, target: &SpecDocument) -> SpecDocument {
    SpecDocument {
        basis: source.basis.clone(),
        target_basis: target.basis.clone(),
        filtered: source.filtered.clone().or_else(|| target.filtered.clone()),
        ..SpecDocument::default()
    }
}

impl Ctx<'_> {
    fn n(&self) -> Result<usize, CliError> {
        self.cli
            .max_arity
            .ok_or_else(|| CliError::Usage("--max-arity is required".into()))
    }

    fn cap(&self, doc: &SpecDocument) -> Result<Scalar, CliError> {
        match (&self.cli.energy_cap, &doc.filtered) {
            (Some(s), _) => parse_scalar(s)
                .map_err(|_| CliError::Usage(format!("malformed --energy-cap `{s}`"))),
            (None, Some(h)) => Ok(h.cap.clone()),
            (None, None) => Err(CliError::Usage(
                "an energy cap is needed: pass --energy-cap or a [filtered] section".into(),
            )),
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.out.push_str(s.as_ref());
        if !s.as_ref().ends_with('\n') {
            self.out.push('\n');
        }
    }

    fn note_conversion(&mut self, doc: &SpecDocument, path: &Path) {
        if doc.converted {
            self.line(format!(
                "note: {} converted from the ns convention",
                path.display()
            ));
        }
    }

    fn verdict(&mut self, pass: bool, body: impl std::fmt::Display) -> i32 {
        write!(self.out, "{body}").unwrap();
        i32::from(!pass)
    }

    fn emit(&mut self, doc: &SpecDocument) -> Result<(), CliError> {
        let text = emit_spec(doc);
        match &self.cli.out {
            Some(p) => {
                std::fs::write(p, &text).map_err(|source| CliError::Io {
                    path: p.display().to_string(),
                    source,
                })?;
                self.line(format!("wrote {}", p.display()));
            }
            None => self.out.push_str(&text),
        }
        Ok(())
    }

    fn pair(
        &self,
        source: &Path,
        target: &Path,
        morphism: &Path,
    ) -> Result<(SpecDocument, SpecDocument, SpecDocument), CliError> {
        let a = load(source)?;
        let b = load(target)?;
        let f = load_in(morphism, &morphism_ctx(&a, &b))?;
        Ok((a, b, f))
    }

    fn exec(&mut self) -> Result<i32, CliError> {
        let n = self.n()?;
        match &self.cli.command {
            Command::CheckAinfty { algebra: p } => {
                let doc = load(p)?;
                self.note_conversion(&doc, p);
                let rep = check_ainfty(algebra(&doc, p)?, n);
                Ok(self.verdict(rep.pass(), rep))
            }
            Command::CheckMorphism {
                source,
                target,
                morphism,
            } => {
                let (a, b, f) = self.pair(source, target, morphism)?;
                let h = f
                    .morphism
                    .as_ref()
                    .ok_or_else(|| missing(morphism, "morphism"))?;
                let rep = check_morphism(algebra(&a, source)?, algebra(&b, target)?, h, n)?;
                Ok(self.verdict(rep.pass(), rep))
            }
            Command::CheckCyclic { algebra: p } => {
                let doc = load(p)?;
                self.note_conversion(&doc, p);
                let rep = check_cyclic(algebra(&doc, p)?, pairing(&doc, p)?, n)?;
                Ok(self.verdict(rep.pass(), rep))
            }
            Command::CheckCyclicMorphism {
                source,
                target,
                morphism,
            } => {
                let (a, b, f) = self.pair(source, target, morphism)?;
                let h = f
                    .morphism
                    .as_ref()
                    .ok_or_else(|| missing(morphism, "morphism"))?;
                let rep = check_cyclic_morphism(
                    algebra(&a, source)?,
                    algebra(&b, target)?,
                    h,
                    pairing(&a, source)?,
                    pairing(&b, target)?,
                    n,
                )?;
                Ok(self.verdict(rep.pass(), rep))
            }
            Command::CheckShi { algebra: p } => {
                let doc = load(p)?;
                let (_, phi) = doc
                    .bimodule_map
                    .as_ref()
                    .ok_or_else(|| missing(p, "bimodule_map"))?;
                let rep = check_strong_homotopy_inner_product(algebra(&doc, p)?, phi, n)?;
                Ok(self.verdict(rep.pass(), rep))
            }
            Command::Cyclicize { algebra: p } => {
                let doc = load(p)?;
                let (_, phi) = doc
                    .bimodule_map
                    .as_ref()
                    .ok_or_else(|| missing(p, "bimodule_map"))?;
                let model = construct_cyclic_model(algebra(&doc, p)?, phi, n)?;
                self.line(format!(
                    "cyclic model: {} orbits, {} pinned",
                    model.log.orbits, model.log.pinned
                ));
                let out = SpecDocument {
                    basis: doc.basis.clone(),
                    algebra: Some(model.algebra),
                    pairing: Some(model.pairing),
                    morphism: Some(model.morphism),
                    ..SpecDocument::default()
                };
                self.emit(&out)?;
                Ok(0)
            }
            Command::CyclicizeBimodule { bimodule: p } => {
                let doc = load(p)?;
                let m = doc
                    .bimodule
                    .as_ref()
                    .ok_or_else(|| missing(p, "bimodule"))?;
                let (_, phi) = doc
                    .bimodule_map
                    .as_ref()
                    .ok_or_else(|| missing(p, "bimodule_map"))?;
                let model = construct_cyclic_bimodule(m, phi, n)?;
                self.line(format!(
                    "cyclic bimodule: {} orbits, {} pinned",
                    model.log.orbits, model.log.pinned
                ));
                let out = SpecDocument {
                    basis: doc.basis.clone(),
                    algebra: doc.algebra.clone(),
                    module_basis: doc.module_basis.clone(),
                    bimodule: Some(model.module),
                    bimodule_map: Some((MapTarget::Same, model.map)),
                    module_pairing: Some(model.pairing),
                    ..SpecDocument::default()
                };
                self.emit(&out)?;
                Ok(0)
            }
            Command::Potential { algebra: p } => {
                let doc = load(p)?;
                let phi = compute_potential(algebra(&doc, p)?, pairing(&doc, p)?, n)?;
                self.line(format!("potential = {phi}"));
                Ok(0)
            }
            Command::PullbackPotential {
                source,
                target,
                morphism,
            } => {
                let (_, b, f) = self.pair(source, target, morphism)?;
                let h = f
                    .morphism
                    .as_ref()
                    .ok_or_else(|| missing(morphism, "morphism"))?;
                let phi = compute_potential(algebra(&b, target)?, pairing(&b, target)?, n)?;
                let pulled = pullback_potential(h, &phi, n)?;
                let mode = match self.cli.mode {
                    Mode::Strict => CyclicMode::Strict,
                    Mode::General => CyclicMode::General,
                };
                self.line(format!("pullback = {}", nc_cyclize(&pulled, mode)?));
                Ok(0)
            }
            Command::ComparePotential {
                source,
                target,
                morphism,
            } => {
                let (a, b, f) = self.pair(source, target, morphism)?;
                let h = f
                    .morphism
                    .as_ref()
                    .ok_or_else(|| missing(morphism, "morphism"))?;
                let rep = check_potential_invariance(
                    algebra(&b, target)?,
                    algebra(&a, source)?,
                    h,
                    pairing(&b, target)?,
                    pairing(&a, source)?,
                    n,
                )?;
                Ok(self.verdict(rep.pass(), rep))
            }
            Command::Transfer { algebra: p } => {
                let doc = load(p)?;
                let mm = minimal_model(algebra(&doc, p)?, n)?;
                self.line(format!("minimal model of dimension {}", mm.homology.dim()));
                let out = SpecDocument {
                    basis: Some(mm.homology.basis().clone()),
                    algebra: Some(mm.homology),
                    ..SpecDocument::default()
                };
                self.emit(&out)?;
                Ok(0)
            }
            Command::CheckFilteredAinfty { algebra: p } => {
                let doc = load(p)?;
                let cap = self.cap(&doc)?;
                let rep = check_filtered_ainfty(&filtered_algebra(&doc, p, &cap)?, n, &cap)?;
                Ok(self.verdict(rep.pass(), rep))
            }
            Command::CheckFilteredMorphism {
                source,
                target,
                morphism,
            } => {
                let (a, b, f) = self.pair(source, target, morphism)?;
                let cap = self.cap(&f)?;
                let h = f
                    .filtered_morphism
                    .as_ref()
                    .ok_or_else(|| missing(morphism, "morphism"))?;
                let fa = filtered_algebra(&a, source, &cap)?;
                let fb = filtered_algebra(&b, target, &cap)?;
                let rep = check_filtered_morphism(&fa, &fb, h, n, &cap)?;
                Ok(self.verdict(rep.pass(), rep))
            }
            Command::CheckFilteredCyclic { algebra: p } => {
                let doc = load(p)?;
                let cap = self.cap(&doc)?;
                let rep = check_filtered_cyclic(
                    &filtered_algebra(&doc, p, &cap)?,
                    pairing(&doc, p)?,
                    n,
                    &cap,
                )?;
                Ok(self.verdict(rep.pass(), rep))
            }
            Command::CheckFilteredCyclicMorphism {
                source,
                target,
                morphism,
            } => {
                let (a, b, f) = self.pair(source, target, morphism)?;
                let cap = self.cap(&f)?;
                let h = f
                    .filtered_morphism
                    .as_ref()
                    .ok_or_else(|| missing(morphism, "morphism"))?;
                let fa = filtered_algebra(&a, source, &cap)?;
                let fb = filtered_algebra(&b, target, &cap)?;
                let rep = check_filtered_cyclic_morphism(
                    &fa,
                    &fb,
                    h,
                    pairing(&a, source)?,
                    pairing(&b, target)?,
                    n,
                    &cap,
                )?;
                Ok(self.verdict(rep.pass(), rep))
            }
            Command::FilteredPotential { algebra: p } => {
                let doc = load(p)?;
                let cap = self.cap(&doc)?;
                let phi = compute_filtered_potential(
                    &filtered_algebra(&doc, p, &cap)?,
                    pairing(&doc, p)?,
                    n,
                    &cap,
                )?;
                self.line(format!("potential = {phi}"));
                Ok(0)
            }
            Command::CompareFilteredPotential {
                source,
                target,
                morphism,
            } => {
                let (a, b, f) = self.pair(source, target, morphism)?;
                let cap = self.cap(&f)?;
                let h = f
                    .filtered_morphism
                    .as_ref()
                    .ok_or_else(|| missing(morphism, "morphism"))?;
                let fa = filtered_algebra(&a, source, &cap)?;
                let fb = filtered_algebra(&b, target, &cap)?;
                let rep = check_filtered_potential_invariance(
                    &fb,
                    &fa,
                    h,
                    pairing(&b, target)?,
                    pairing(&a, source)?,
                    n,
                    &cap,
                )?;
                Ok(self.verdict(rep.pass(), rep))
            }
        }
    }
}

pub fn run(cli: &Cli, echo: &str) -> Outcome {
    let mut ctx = Ctx {
        cli,
        out: String::new(),
    };
    ctx.line(format!("$ ainfty {echo}"));
    match ctx.exec() {
        Ok(code) => Outcome {
            report: ctx.out,
            code,
        },
        Err(e) => {
            ctx.line(format!("error: {e}"));
            Outcome {
                report: ctx.out,
                code: 2,
            }
        }
    }
}

/// Parses the arguments (program name first) and runs the command.
pub fn run_from<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let echo = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ");
    match Cli::try_parse_from(&args) {
        Ok(cli) => run(&cli, &echo),
        Err(e) => Outcome {
            report: e.to_string(),
            code: if e.use_stderr() { 2 } else { 0 },
        },
    }
}
