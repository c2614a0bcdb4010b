use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gkcs_core::{Backend, MomentFamily};

#[derive(Debug, Parser)]
#[command(name = "gkcs", version, about = "Moment problems and coherent states for power-law spectra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Moments rho(n) for n = 0..=nmax.
    Moments {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 10)]
        nmax: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Spectrum e(n) = rho(n) / rho(n-1) for n = 0..=nmax.
    Spectrum {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 10)]
        nmax: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Power-law fit 1 - e(n) ~ c n^-theta over [nmin, nmax].
    Fit {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 500)]
        nmin: u64,
        #[arg(long, default_value_t = 20_000)]
        nmax: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Weight function on a uniform grid in (0, 1), or at the given points.
    Weight {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = BackendArg::ClosedForm)]
        backend: BackendArg,
        /// Evaluation points; overrides --grid.
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        y: Vec<f64>,
        #[arg(long, default_value_t = 100)]
        grid: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reconstruct rho(n) from the weight by quadrature and compare.
    Verify {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 30)]
        nmax: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = BackendArg::ClosedForm)]
        backend: BackendArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Coherent-state normalization N(J) and the action identity residual.
    CsNorm {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long = "J")]
        j: f64,
        #[arg(long, default_value_t = 1e-14)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Overlap <J,gamma | J2,gamma2>.
    CsOverlap {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long = "J")]
        j: f64,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        /// Defaults to --J.
        #[arg(long = "J2")]
        j2: Option<f64>,
        /// Defaults to --gamma.
        #[arg(long)]
        gamma2: Option<f64>,
        #[arg(long, default_value_t = 1e-14)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Curve data for figures 1 to 4.
    Figure {
        #[arg(long)]
        id: u8,
        #[arg(long, default_value_t = 1000)]
        grid: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Bohr-Sommerfeld levels of -|V0| |x|^-sigma.
    Quasiclassical {
        /// Potential exponent; derived from --k/--l when absent.
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
        #[arg(long, default_value_t = 1.0)]
        v0: f64,
        #[arg(long, default_value_t = 1.0)]
        mass: f64,
        #[arg(long, default_value_t = 10)]
        nmax: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    General,
    BesselK,
    BesselIExp,
    CoulombExact,
    CoulombAlt,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyName,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub l: Option<usize>,
    /// Accept nu < 0 for the general family (the weight is then not positive).
    #[arg(long)]
    pub positivity_waiver: bool,
}

impl FamilyArgs {
    pub fn build(&self) -> gkcs_core::Result<MomentFamily> {
        use gkcs_core::Error::Domain;
        let unused = |name: &str, given: bool| {
            if given {
                let family = self.family.to_possible_value().expect("no skipped variants");
                Err(Domain(format!("--{name} does not apply to --family {}", family.get_name())))
            } else {
                Ok(())
            }
        };
        match self.family {
            FamilyName::General => {
                let k = self.k.ok_or_else(|| Domain("--family general requires --k".into()))?;
                let l = self.l.ok_or_else(|| Domain("--family general requires --l".into()))?;
                let (a, nu) = (self.a.unwrap_or(1.0), self.nu.unwrap_or(0.0));
                if self.positivity_waiver {
                    MomentFamily::general_with_waiver(a, nu, k, l)
                } else {
                    MomentFamily::general(a, nu, k, l)
                }
            }
            other => {
                unused("a", self.a.is_some())?;
                unused("k", self.k.is_some())?;
                unused("l", self.l.is_some())?;
                unused("positivity-waiver", self.positivity_waiver)?;
                match other {
                    FamilyName::BesselK => MomentFamily::bessel_k(self.nu.unwrap_or(4.0 / 3.0)),
                    named => {
                        unused("nu", self.nu.is_some())?;
                        Ok(match named {
                            FamilyName::BesselIExp => MomentFamily::bessel_i_exp(),
                            FamilyName::CoulombExact => MomentFamily::coulomb_exact(),
                            _ => MomentFamily::coulomb_alt(),
                        })
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    ClosedForm,
    MellinBarnes,
    Convolution,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::ClosedForm => Backend::ClosedForm,
            BackendArg::MellinBarnes => Backend::MellinBarnes,
            BackendArg::Convolution => Backend::Convolution,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    /// One JSON object per row.
    Jsonl,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
