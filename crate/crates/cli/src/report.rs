//! Machine- and human-readable reports. The JSON schema is the serde
//! serialization of these structs; `parse(emit(report)) == report` is
//! guaranteed and tested.

use serde::{Deserialize, Serialize};

/// Fixed note attached to every equivariant report: the invariant columns
/// refer to the weight-0 part computed over the cover, and stand for the
/// quotient's cohomology only through the asserted Galois hypothesis.
pub const BRIDGE_NOTE: &str = "invariant dimensions are the weight-0 part computed over the \
    covering singularity; they are read as cohomology of the quotient via the asserted (not \
    verified) Galois hypothesis on the invariant subring";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraInfo {
    pub f: String,
    pub variable_weights: [i64; 3],
    pub total_weight: i64,
    /// `d - (d1 + d2 + d3)`: cohomology in levels 1 and 2 concentrates in
    /// internal degree 0 with multiplicity `dim A_shift`.
    pub degree_shift: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionInfo {
    pub order: u32,
    pub exponents: [u32; 3],
    pub compatible: bool,
    /// Whether the exact per-monomial equality `Σ α_i m_i = m` holds (the
    /// congruence mod `m` is what compatibility requires).
    pub strict_equality: bool,
    pub residue_sum_raw: i64,
    pub residue_sum: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudoReflectionInfo {
    pub power: u32,
    pub fixed_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub algebra: AlgebraInfo,
    pub action: Option<ActionInfo>,
    pub pseudo_reflections: Option<Vec<PseudoReflectionInfo>>,
    pub galois_asserted: bool,
    pub presentation_bound: i64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockDim {
    pub xi_weight: u32,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimCell {
    pub n: usize,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub blocks: Vec<BlockDim>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariant: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimRow {
    pub degree: i64,
    pub cells: Vec<DimCell>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub algebra: AlgebraInfo,
    pub action: Option<ActionInfo>,
    pub galois_asserted: bool,
    pub window: [i64; 2],
    pub max_n: usize,
    pub presentation_bound: i64,
    pub rows: Vec<DimRow>,
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bridge_note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassInfo {
    pub degree: i64,
    pub h_dim: usize,
    pub coordinates: Vec<String>,
    pub coboundary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivariantConnectionInfo {
    /// The analysis runs on the Reynolds average of the input connection.
    pub averaged: bool,
    pub average_invariant: bool,
    pub invariant_class: Vec<ClassInfo>,
    pub invariant_class_zero: bool,
    /// Total invariant `H^1` dimension over the window: the dimension of the
    /// moduli space of integrable connections on the quotient module.
    pub invariant_h1_total: usize,
    pub conclusion: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModuliInfo {
    pub equivalent: bool,
    pub components: Vec<ClassInfo>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectionReport {
    pub algebra: AlgebraInfo,
    pub module_generators: Vec<String>,
    pub module_relations: usize,
    pub verified: bool,
    pub violations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curvature_zero: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub integrability: Vec<ClassInfo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integrability_zero: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equivariant: Option<EquivariantConnectionInfo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<ModuliInfo>,
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bridge_note: Option<String>,
}

// ------------------------------------------------------------------
// Text rendering
// ------------------------------------------------------------------

fn action_line(a: &ActionInfo) -> String {
    format!(
        "action: Z/{} of type ({}; {}, {}, {}), residue m1+m2+m3-m = {} (mod {}: {}){}",
        a.order,
        a.order,
        a.exponents[0],
        a.exponents[1],
        a.exponents[2],
        a.residue_sum_raw,
        a.order,
        a.residue_sum,
        if a.strict_equality {
            ""
        } else {
            " [congruence-only]"
        }
    )
}

pub fn render_check(r: &CheckReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "algebra: f = {}, weights ({}; {}, {}, {})\n",
        r.algebra.f,
        r.algebra.total_weight,
        r.algebra.variable_weights[0],
        r.algebra.variable_weights[1],
        r.algebra.variable_weights[2]
    ));
    out.push_str(&format!(
        "degree shift d - (d1+d2+d3): {}\n",
        r.algebra.degree_shift
    ));
    match &r.action {
        Some(a) => {
            out.push_str(&action_line(a));
            out.push('\n');
            if let Some(prs) = &r.pseudo_reflections {
                if prs.is_empty() {
                    out.push_str("pseudo-reflections: none\n");
                } else {
                    for pr in prs {
                        out.push_str(&format!(
                            "pseudo-reflection: g^{} (fixed dimension {})\n",
                            pr.power, pr.fixed_dim
                        ));
                    }
                }
            }
        }
        None => out.push_str("action: none (equivariant features disabled)\n"),
    }
    out.push_str(&format!("galois_asserted: {}\n", r.galois_asserted));
    out.push_str(&format!("presentation bound: {}\n", r.presentation_bound));
    for w in &r.warnings {
        out.push_str(&format!("warning: {w}\n"));
    }
    out.push_str("check: ok\n");
    out
}

pub fn render_cohomology(r: &CohomologyReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "algebra: f = {}, weights ({}; {}, {}, {})\n",
        r.algebra.f,
        r.algebra.total_weight,
        r.algebra.variable_weights[0],
        r.algebra.variable_weights[1],
        r.algebra.variable_weights[2]
    ));
    out.push_str(&format!(
        "degree shift d - (d1+d2+d3): {}\n",
        r.algebra.degree_shift
    ));
    if let Some(a) = &r.action {
        out.push_str(&action_line(a));
        out.push('\n');
    }
    // header
    out.push_str(&format!("{:>6}", "e"));
    for n in 0..=r.max_n {
        out.push_str(&format!("{:>8}", format!("dim H^{n}")));
    }
    let has_invariants = r
        .rows
        .first()
        .map(|row| row.cells.iter().any(|c| c.invariant.is_some()))
        .unwrap_or(false);
    if has_invariants {
        for n in 0..=r.max_n {
            out.push_str(&format!("{:>10}", format!("inv H^{n}")));
        }
    }
    if r.action.is_some() {
        out.push_str("   weight blocks (n: w->dim)");
    }
    out.push('\n');
    for row in &r.rows {
        out.push_str(&format!("{:>6}", row.degree));
        for cell in &row.cells {
            out.push_str(&format!("{:>8}", cell.dim));
        }
        if has_invariants {
            for cell in &row.cells {
                match cell.invariant {
                    Some(d) => out.push_str(&format!("{:>10}", d)),
                    None => out.push_str(&format!("{:>10}", "-")),
                }
            }
        }
        if r.action.is_some() {
            let mut parts = Vec::new();
            for cell in &row.cells {
                for b in &cell.blocks {
                    parts.push(format!("{}: {}->{}", cell.n, b.xi_weight, b.dim));
                }
            }
            if !parts.is_empty() {
                out.push_str(&format!("   {}", parts.join(", ")));
            }
        }
        out.push('\n');
    }
    for w in &r.warnings {
        out.push_str(&format!("warning: {w}\n"));
    }
    if let Some(note) = &r.bridge_note {
        out.push_str(&format!("note: {note}\n"));
    }
    out
}

fn render_class(c: &ClassInfo) -> String {
    format!(
        "degree {}: H-dim {}, coordinates [{}]{}",
        c.degree,
        c.h_dim,
        c.coordinates.join(", "),
        if c.coboundary { " (zero class)" } else { "" }
    )
}

pub fn render_connection(r: &ConnectionReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "algebra: f = {}, weights ({}; {}, {}, {})\n",
        r.algebra.f,
        r.algebra.total_weight,
        r.algebra.variable_weights[0],
        r.algebra.variable_weights[1],
        r.algebra.variable_weights[2]
    ));
    out.push_str(&format!(
        "module: ({}) with {} syzygies\n",
        r.module_generators.join(", "),
        r.module_relations
    ));
    if r.verified {
        out.push_str("connection: verified\n");
    } else {
        out.push_str("connection: INVALID\n");
        for v in &r.violations {
            out.push_str(&format!("  violation: {v}\n"));
        }
        return out;
    }
    if let Some(z) = r.curvature_zero {
        out.push_str(&format!(
            "curvature: {}\n",
            if z { "zero (integrable)" } else { "nonzero" }
        ));
    }
    for c in &r.integrability {
        out.push_str(&format!("integrability class, {}\n", render_class(c)));
    }
    if let Some(z) = r.integrability_zero {
        out.push_str(&format!(
            "integrability class is {}\n",
            if z {
                "zero: an integrable connection exists on the module"
            } else {
                "nonzero: no integrable connection exists on the module"
            }
        ));
    }
    if let Some(eq) = &r.equivariant {
        out.push_str("equivariant analysis (Reynolds average of the input):\n");
        out.push_str(&format!(
            "  averaged connection invariant: {}\n",
            eq.average_invariant
        ));
        for c in &eq.invariant_class {
            out.push_str(&format!("  invariant class, {}\n", render_class(c)));
        }
        out.push_str(&format!(
            "  invariant H^1 over the window: {}\n",
            eq.invariant_h1_total
        ));
        out.push_str(&format!("  conclusion: {}\n", eq.conclusion));
    }
    if let Some(cmp) = &r.comparison {
        out.push_str(&format!(
            "comparison: the two connections are {}\n",
            if cmp.equivalent {
                "equivalent"
            } else {
                "NOT equivalent"
            }
        ));
        for c in &cmp.components {
            out.push_str(&format!("  difference class, {}\n", render_class(c)));
        }
    }
    for w in &r.warnings {
        out.push_str(&format!("warning: {w}\n"));
    }
    if let Some(note) = &r.bridge_note {
        out.push_str(&format!("note: {note}\n"));
    }
    out
}
