//! Command-line front end. Every subcommand reads JSON files and prints one
//! JSON document on standard output.
//!
//! Exit codes: 0 on success or a positive answer, 1 when the answer is
//! negative (not unramifiable, not Azumaya, tree rejected), 2 on usage, input
//! or library errors.

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::{azumaya_witness, center, transpose, FiniteAlgebra};
use crate::decomp::{is_unramifiable, DEFAULT_MAX_DEGREE};
use crate::error::{Error, Result};
use crate::hensel::{
    find_simple_root, hensel_factor_with, lift_idempotent_algebra, lift_idempotent_monic_quotient, lift_simple_root,
    LiftMethod,
};
use crate::json::*;
use crate::ring::{check_local, Ring};
use crate::split_tree::{
    build_tree, skolem_noether_matrix, skolem_noether_module, verify_tree, Family, Mode, NodeKind,
};

#[derive(Parser, Debug)]
#[command(name = "azumaya", version, about = "Constructive Azumaya algebra toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Adjunction mode for trees.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// Idempotent lifting method.
    #[arg(long, global = true, value_enum, default_value_t = MethodArg::Newton)]
    method: MethodArg,
    /// Largest degree for decomposition algebras.
    #[arg(long = "max-degree", global = true, default_value_t = DEFAULT_MAX_DEGREE)]
    max_degree: usize,
    /// Include large intermediate data.
    #[arg(long, global = true)]
    verbose: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Etale,
    Fppf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Newton,
    Paper,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    Matrix,
    Quaternion,
    FiniteLocal,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether a monic polynomial is unramifiable.
    Unramifiable {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        poly: PathBuf,
    },
    /// Lift a residually simple root over a finite local ring.
    LiftRoot {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        poly: PathBuf,
        /// Residual root, an element of the residue field. Searched for when absent.
        #[arg(long)]
        root: Option<PathBuf>,
    },
    /// Lift a residual idempotent of R[X]/(P) or of a finite algebra.
    LiftIdempotent {
        #[arg(long, required_unless_present = "algebra", requires = "poly")]
        ring: Option<PathBuf>,
        #[arg(long)]
        poly: Option<PathBuf>,
        #[arg(long, conflicts_with_all = ["ring", "poly"])]
        algebra: Option<PathBuf>,
        #[arg(long)]
        element: PathBuf,
    },
    /// Lift a coprime residual factorization P ≡ f·g.
    HenselFactor {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
    },
    /// Test the canonical map A ⊗ A^op → End(A) for invertibility.
    IsAzumaya {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Module generators of the center.
    Center {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Build a splitting tree.
    Split {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
    },
    /// Verify a splitting tree.
    VerifyTree { tree: PathBuf },
    /// Solve for the module of conjugators of an automorphism.
    SkolemNoether {
        #[arg(long)]
        algebra: PathBuf,
        /// JSON array whose j-th entry is ψ(x_j).
        #[arg(long)]
        psi: PathBuf,
    },
}

impl Command {
    /// Input files, with the flag that named each one.
    fn paths(&self) -> Vec<(&'static str, &Path)> {
        fn one<'a>(name: &'static str, p: &'a Path) -> Option<(&'static str, &'a Path)> {
            Some((name, p))
        }
        fn opt<'a>(name: &'static str, p: &'a Option<PathBuf>) -> Option<(&'static str, &'a Path)> {
            p.as_deref().map(|p| (name, p))
        }
        let all = match self {
            Command::Unramifiable { ring, poly } => vec![one("--ring", ring), one("--poly", poly)],
            Command::LiftRoot { ring, poly, root } => {
                vec![one("--ring", ring), one("--poly", poly), opt("--root", root)]
            }
            Command::LiftIdempotent {
                ring,
                poly,
                algebra,
                element,
            } => vec![
                opt("--ring", ring),
                opt("--poly", poly),
                opt("--algebra", algebra),
                one("--element", element),
            ],
            Command::HenselFactor { ring, poly, f, g } => {
                vec![one("--ring", ring), one("--poly", poly), one("--f", f), one("--g", g)]
            }
            Command::IsAzumaya { algebra } | Command::Center { algebra } | Command::Split { algebra, .. } => {
                vec![one("--algebra", algebra)]
            }
            Command::VerifyTree { tree } => vec![one("tree", tree)],
            Command::SkolemNoether { algebra, psi } => vec![one("--algebra", algebra), one("--psi", psi)],
        };
        all.into_iter().flatten().collect()
    }
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: String) -> Outcome {
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr: msg,
        }
    }
}

/// Parses `argv` (program name first) and runs the subcommand.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome::usage(text)
            };
        }
    };
    for (flag, path) in cli.command.paths() {
        if !path.is_file() {
            return Outcome::usage(format!("{flag}: no such file: {}\n", path.display()));
        }
    }
    match catch_unwind(AssertUnwindSafe(|| execute(&cli))) {
        Ok(Ok((code, value))) => Outcome {
            code,
            stdout: serde_json::to_string_pretty(&value).unwrap() + "\n",
            stderr: String::new(),
        },
        Ok(Err(e)) => Outcome::usage(format!("error: {e}\n")),
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| panic.downcast_ref::<&str>().copied())
                .unwrap_or("unexpected failure");
            Outcome::usage(format!("error: {msg}\n"))
        }
    }
}

fn read_json(path: &Path, what: &str) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{what}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn load_ring(path: &Path) -> Result<Ring> {
    ring_from_json(&read_json(path, "ring")?, "ring")
}

fn load_algebra(path: &Path) -> Result<FiniteAlgebra> {
    algebra_from_json(&read_json(path, "algebra")?, "algebra")
}

fn method(g: &Global) -> LiftMethod {
    match g.method {
        MethodArg::Newton => LiftMethod::Newton,
        MethodArg::Paper => LiftMethod::PaperFaithful,
    }
}

fn mode(m: ModeArg) -> Mode {
    match m {
        ModeArg::Etale => Mode::Etale,
        ModeArg::Fppf => Mode::Fppf,
    }
}

fn execute(cli: &Cli) -> Result<(i32, Value)> {
    let g = &cli.global;
    match &cli.command {
        Command::Unramifiable { ring, poly } => {
            let r = load_ring(ring)?;
            let f = poly_from_json(&r, &read_json(poly, "poly")?, "poly")?;
            let u = is_unramifiable(&r, &f, g.max_degree)?;
            let mut out = json!({
                "unramifiable": u.unramifiable,
                "deltas": vector_to_json(&u.deltas),
                "cofactors": u.delta_cofactors.as_deref().map_or(Value::Null, vector_to_json),
            });
            if g.verbose {
                out["derivative_cofactors"] = u.derivative_cofactors.as_deref().map_or(Value::Null, vector_to_json);
            }
            Ok((if u.unramifiable { 0 } else { 1 }, out))
        }
        Command::LiftRoot { ring, poly, root } => {
            let r = load_ring(ring)?;
            let cert = check_local(&r)?;
            let p = poly_from_json(&r, &read_json(poly, "poly")?, "poly")?;
            let a = match root {
                Some(path) => {
                    let r0 = elem_from_json(cert.residue_field(), &read_json(path, "root")?, "root")?;
                    lift_simple_root(&p, &r0, &cert)?
                }
                None => find_simple_root(&p, &cert)?,
            };
            Ok((0, json!({ "root": elem_to_json(&a) })))
        }
        Command::LiftIdempotent {
            ring,
            poly,
            algebra,
            element,
        } => {
            let e_json = read_json(element, "element")?;
            if let Some(path) = algebra {
                let alg = load_algebra(path)?;
                let cert = check_local(alg.ring())?;
                let a = vector_from_json(alg.ring(), &e_json, "element")?;
                if a.len() != alg.rank() {
                    return Err(Error::Parse(format!("element: expected {} coordinates", alg.rank())));
                }
                let e = lift_idempotent_algebra(&alg, &a, &cert)?;
                return Ok((0, json!({ "idempotent": vector_to_json(&e) })));
            }
            let r = load_ring(ring.as_ref().unwrap())?;
            let cert = check_local(&r)?;
            let p = poly_from_json(&r, &read_json(poly.as_ref().unwrap(), "poly")?, "poly")?;
            let s = r
                .quotient("x", p.coeffs().to_vec())
                .map_err(|e| Error::Parse(format!("poly: {e}")))?;
            let e = elem_from_json(&s, &e_json, "element")?;
            let u = lift_idempotent_monic_quotient(&s, &e, &cert, method(g))?;
            Ok((0, json!({ "idempotent": elem_to_json(&u) })))
        }
        Command::HenselFactor {
            ring,
            poly,
            f,
            g: gpath,
        } => {
            let r = load_ring(ring)?;
            let cert = check_local(&r)?;
            let k = cert.residue_field();
            let p = poly_from_json(&r, &read_json(poly, "poly")?, "poly")?;
            let f = poly_from_json(k, &read_json(f, "f")?, "f")?;
            let gg = poly_from_json(k, &read_json(gpath, "g")?, "g")?;
            let (big_f, big_g) = hensel_factor_with(&p, &f, &gg, &cert, method(g))?;
            Ok((0, json!({ "f": poly_to_json(&big_f), "g": poly_to_json(&big_g) })))
        }
        Command::IsAzumaya { algebra } => {
            let alg = load_algebra(algebra)?;
            let w = azumaya_witness(&alg)?;
            let out = json!({
                "azumaya": w.is_azumaya(),
                "determinant": elem_to_json(&w.determinant),
                "inverse": w.inverse.as_ref().map_or(Value::Null, elem_to_json),
            });
            Ok((if w.is_azumaya() { 0 } else { 1 }, out))
        }
        Command::Center { algebra } => {
            let alg = load_algebra(algebra)?;
            let gens = center(&alg)?;
            let out = json!({
                "generators": gens.iter().map(|v| vector_to_json(v)).collect::<Vec<_>>(),
            });
            Ok((0, out))
        }
        Command::Split { algebra, family } => {
            let alg = load_algebra(algebra)?;
            let family = family.map(|f| match f {
                FamilyArg::Matrix => Family::Matrix,
                FamilyArg::Quaternion => Family::Quaternion,
                FamilyArg::FiniteLocal => Family::FiniteLocal,
            });
            let tree = build_tree(&alg, family, g.mode.map_or(Mode::Etale, mode), g.seed)?;
            Ok((0, tree_to_json(&tree)))
        }
        Command::VerifyTree { tree } => {
            let mut t = tree_from_json(&read_json(tree, "tree")?)?;
            if let Some(m) = g.mode {
                t.mode = mode(m);
            }
            let report = verify_tree(&t);
            Ok((if report.valid { 0 } else { 1 }, report_to_json(&report)))
        }
        Command::SkolemNoether { algebra, psi } => {
            let alg = load_algebra(algebra)?;
            let images = array_of_vectors(&alg, &read_json(psi, "psi")?)?;
            let psi_m = transpose(&images, alg.rank());
            let cert = check_local(alg.ring()).ok();
            let module = skolem_noether_module(&alg, &psi_m, cert.as_ref())?;
            let mut conjugator = Value::Null;
            if let Some(cert) = &cert {
                let tree = build_tree(&alg, None, Mode::Etale, g.seed)?;
                if let NodeKind::Leaf(w) = &tree.node.kind {
                    conjugator = vector_to_json(&skolem_noether_matrix(&alg, w, &psi_m, cert)?);
                }
            }
            let out = json!({
                "generators": module.generators.iter().map(|v| vector_to_json(v)).collect::<Vec<_>>(),
                "rank": module.rank,
                "unit_generator": module.unit_generator.as_deref().map_or(Value::Null, vector_to_json),
                "conjugator": conjugator,
            });
            Ok((0, out))
        }
    }
}

fn array_of_vectors(alg: &FiniteAlgebra, v: &Value) -> Result<Vec<Vec<crate::ring::Elem>>> {
    let items = v
        .as_array()
        .ok_or_else(|| Error::Parse("psi: expected an array".into()))?;
    if items.len() != alg.rank() {
        return Err(Error::Parse(format!("psi: expected {} images", alg.rank())));
    }
    items
        .iter()
        .enumerate()
        .map(|(j, x)| {
            let path = format!("psi[{j}]");
            let xs = vector_from_json(alg.ring(), x, &path)?;
            if xs.len() != alg.rank() {
                return Err(Error::Parse(format!("{path}: expected {} coordinates", alg.rank())));
            }
            Ok(xs)
        })
        .collect()
}
