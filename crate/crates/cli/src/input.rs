//! Input documents: the problem description, module files, and connection
//! files. All polynomial fields use the same text grammar as the library
//! parser; see the repository README for the full format.

use std::path::Path;

use serde::Deserialize;

use lrcohom::equiv::CyclicActionType;
use lrcohom::lrc;
use lrcohom::wpoly::{parse_poly, Poly, WeightedAlgebra};

/// Raw problem document as written by the user.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    /// Defining polynomial in the variables `x1, x2, x3`.
    pub f: String,
    /// Variable weights `(d1, d2, d3)`; the total weight is derived from `f`.
    pub weights: [i64; 3],
    /// Optional cyclic action block.
    pub action: Option<ActionFile>,
    /// Assert the Galois hypothesis for the quotient interpretation of
    /// invariant dimensions. Defaults to false.
    #[serde(default)]
    pub galois_asserted: bool,
    /// Internal-degree window for sweeps, inclusive. Defaults to [-10, 10].
    pub degree_window: Option<[i64; 2]>,
    /// Generator/syzygy harvest bound. Defaults to a bound derived from the
    /// weights that covers all structural degrees of a surface.
    pub presentation_bound: Option<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionFile {
    pub order: u32,
    pub exponents: [u32; 3],
}

/// Parsed and validated problem data.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub f_text: String,
    pub algebra: WeightedAlgebra,
    pub action: Option<CyclicActionType>,
    pub galois_asserted: bool,
    pub window: (i64, i64),
    pub bound: i64,
}

/// Errors are split so the driver can map them to distinct exit codes:
/// reading/deserializing/expression problems are parse errors, while
/// mathematical rejections (inhomogeneity, incompatible action) are
/// validation failures.
#[derive(Debug)]
pub enum LoadError {
    Parse(String),
    Validation(String),
}

impl std::fmt::Display for LoadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LoadError::Parse(m) => write!(f, "parse error: {m}"),
            LoadError::Validation(m) => write!(f, "validation error: {m}"),
        }
    }
}

impl std::error::Error for LoadError {}

fn read_toml<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, LoadError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| LoadError::Parse(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text)
        .map_err(|e| LoadError::Parse(format!("{}: {e}", path.display())))
}

pub fn load_problem(path: &Path) -> Result<ProblemSpec, LoadError> {
    let raw: ProblemFile = read_toml(path)?;
    let f = parse_poly(&raw.f)
        .map_err(|e| LoadError::Parse(format!("field `f`: {e}")))?;
    let algebra = WeightedAlgebra::new(f, raw.weights)
        .map_err(|e| LoadError::Validation(e.to_string()))?;
    let action = raw
        .action
        .map(|a| CyclicActionType::new(a.order, a.exponents));
    let window = raw
        .degree_window
        .map(|[lo, hi]| (lo, hi))
        .unwrap_or((-10, 10));
    if window.0 > window.1 {
        return Err(LoadError::Validation(format!(
            "degree window [{}, {}] is empty",
            window.0, window.1
        )));
    }
    let bound = raw
        .presentation_bound
        .unwrap_or_else(|| lrc::recommended_bound(algebra.weights()));
    Ok(ProblemSpec {
        f_text: raw.f,
        algebra,
        action,
        galois_asserted: raw.galois_asserted,
        window,
        bound,
    })
}

/// Module document: homogeneous ideal generators of a rank-one module.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleFile {
    pub generators: Vec<String>,
    /// Syzygy harvest bound; defaults to the presentation bound.
    pub syzygy_bound: Option<i64>,
}

pub fn load_module_polys(path: &Path) -> Result<(Vec<Poly>, Option<i64>), LoadError> {
    let raw: ModuleFile = read_toml(path)?;
    if raw.generators.is_empty() {
        return Err(LoadError::Validation(
            "module file lists no generators".into(),
        ));
    }
    let gens = raw
        .generators
        .iter()
        .map(|s| {
            parse_poly(s).map_err(|e| LoadError::Parse(format!("module generator `{s}`: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((gens, raw.syzygy_bound))
}

/// Connection document: one `gamma` block per derivation generator, in the
/// presentation order; `matrix[l][j]` is the coefficient of `u_l` in
/// `∇_{G_i}(u_j)`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionFile {
    pub gamma: Vec<GammaBlock>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaBlock {
    pub matrix: Vec<Vec<String>>,
}

pub fn load_connection(
    path: &Path,
    num_der_gens: usize,
    num_mod_gens: usize,
) -> Result<lrcohom::conn::Connection, LoadError> {
    let raw: ConnectionFile = read_toml(path)?;
    if raw.gamma.len() != num_der_gens {
        return Err(LoadError::Validation(format!(
            "connection file has {} gamma blocks but the presentation has {} generators",
            raw.gamma.len(),
            num_der_gens
        )));
    }
    let mut gamma = Vec::with_capacity(num_der_gens);
    for (i, block) in raw.gamma.iter().enumerate() {
        if block.matrix.len() != num_mod_gens
            || block.matrix.iter().any(|row| row.len() != num_mod_gens)
        {
            return Err(LoadError::Validation(format!(
                "gamma block {i} must be a {num_mod_gens}x{num_mod_gens} matrix"
            )));
        }
        let mut mat = Vec::with_capacity(num_mod_gens);
        for row in &block.matrix {
            let mut out_row = Vec::with_capacity(num_mod_gens);
            for entry in row {
                out_row.push(parse_poly(entry).map_err(|e| {
                    LoadError::Parse(format!("gamma block {i}, entry `{entry}`: {e}"))
                })?);
            }
            mat.push(out_row);
        }
        gamma.push(mat);
    }
    Ok(lrcohom::conn::Connection { gamma })
}
