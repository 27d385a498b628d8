//! Connections on rank-one modules, their curvature, the integrability
//! class in `H^2`, Reynolds-averaged connections, and moduli comparison of
//! integrable connections through `H^1`.
//!
//! A module is presented by homogeneous ideal generators `u_1..u_r` in `A`;
//! a connection stores, per derivation generator `G_i` and module generator
//! `u_j`, coefficients `Γ^{(i)}_{lj}` with `∇_{G_i}(u_j) = Σ_l Γ^{(i)}_{lj} u_l`.
//! Because the module has rank one over the domain `A`, every `A`-linear
//! endomorphism acts as multiplication by some scalar in `A`; curvature and
//! connection differences are extracted through that scalar and then live in
//! the Lie-Rinehart complex with values in `A`.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::equiv::{self, CyclicActionType};
use crate::lrc::{ClassCoordinates, Cochain, Complex, InstabilityError};
use crate::presmod;
use crate::qlinalg::{QMatrix, Rational, RowReducer};
use crate::wpoly::{Monomial, Poly, WeightedAlgebra};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConnError {
    #[error("module generator {index} is zero")]
    ZeroGenerator { index: usize },
    #[error("module generator {index} is not weighted homogeneous")]
    InhomogeneousGenerator { index: usize },
    #[error("module generator {index} is not ξ-homogeneous under the action")]
    MixedWeightGenerator { index: usize },
    #[error("connection matrix shape does not match the module and presentation")]
    ShapeMismatch,
    #[error("connection fails verification: {0} violation(s); first: {1}")]
    NotAConnection(usize, String),
    #[error("endomorphism is not multiplication by a scalar (module is not rank-one torsion-free as presented)")]
    NotScalar,
    #[error("curvature cochain violates the wedge relations; raise the presentation bound")]
    CurvatureUnstable,
    #[error("operation requires integrable connections, but the curvature is nonzero")]
    NotIntegrable,
    #[error("equivariant operation requires ξ-weights on the module (build it with the action)")]
    NoEquivariantStructure,
    #[error(transparent)]
    Instability(#[from] InstabilityError),
}

/// A module relation `Σ_j coeffs[j] · u_j = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleRelation {
    pub coeffs: Vec<Poly>,
    pub degree: i64,
}

/// A rank-one module presented by homogeneous ideal generators, with the
/// syzygies among them harvested degreewise; optionally carries ξ-weights
/// when an action is attached.
#[derive(Debug, Clone)]
pub struct RankOneModule {
    pub gens: Vec<Poly>,
    pub degrees: Vec<i64>,
    pub xi_weights: Option<Vec<u32>>,
    pub relations: Vec<ModuleRelation>,
}

impl RankOneModule {
    /// Validates the generators and harvests their syzygies up to `bound`.
    /// Rank-one torsion-freeness and maximal Cohen-Macaulayness are the
    /// caller's hypotheses; they are not decidable from this data and the
    /// scalar extraction reports an error if rank-one fails in practice.
    pub fn new(
        alg: &WeightedAlgebra,
        gens: Vec<Poly>,
        action: Option<&CyclicActionType>,
        bound: i64,
    ) -> Result<Self, ConnError> {
        let gens: Vec<Poly> = gens.iter().map(|g| alg.normal_form(g)).collect();
        let mut degrees = Vec::with_capacity(gens.len());
        for (index, g) in gens.iter().enumerate() {
            if g.is_zero() {
                return Err(ConnError::ZeroGenerator { index });
            }
            let d = g
                .homogeneous_degree(alg.weights())
                .ok_or(ConnError::InhomogeneousGenerator { index })?;
            degrees.push(d);
        }
        let xi_weights = match action {
            None => None,
            Some(act) => {
                let mut ws = Vec::with_capacity(gens.len());
                for (index, g) in gens.iter().enumerate() {
                    ws.push(
                        act.poly_weight(g)
                            .ok_or(ConnError::MixedWeightGenerator { index })?,
                    );
                }
                Some(ws)
            }
        };

        // degreewise syzygy harvest with a span oracle, as for Der(A)
        let mut relations: Vec<ModuleRelation> = Vec::new();
        let min_deg = degrees.iter().min().copied().unwrap_or(0);
        for t in min_deg..=bound {
            let slot_bases: Vec<Vec<Monomial>> =
                degrees.iter().map(|&d| alg.graded_basis(t - d)).collect();
            let ncols: usize = slot_bases.iter().map(Vec::len).sum();
            if ncols == 0 {
                continue;
            }
            let target = alg.graded_basis(t);
            let tindex: BTreeMap<Monomial, usize> =
                target.iter().enumerate().map(|(i, m)| (*m, i)).collect();
            let mut mat = QMatrix::new(target.len(), ncols);
            let mut col = 0;
            for (g, basis) in gens.iter().zip(&slot_bases) {
                for mono in basis {
                    for (m, c) in alg.normal_form(&g.mul_monomial(mono)).terms() {
                        mat.add_to(tindex[m], col, c);
                    }
                    col += 1;
                }
            }
            let mut span = RowReducer::new();
            for r in &relations {
                for mono in alg.graded_basis(t - r.degree) {
                    let mult: Vec<Poly> = r
                        .coeffs
                        .iter()
                        .map(|c| alg.normal_form(&c.mul_monomial(&mono)))
                        .collect();
                    span.insert(&stack_coords(alg, &mult, &degrees, t));
                }
            }
            for v in mat.kernel_basis() {
                let coeffs = unpack(&slot_bases, &v);
                if span.insert(&stack_coords(alg, &coeffs, &degrees, t)) {
                    relations.push(ModuleRelation { coeffs, degree: t });
                }
            }
        }

        Ok(RankOneModule {
            gens,
            degrees,
            xi_weights,
            relations,
        })
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }
}

fn stack_coords(alg: &WeightedAlgebra, coeffs: &[Poly], degrees: &[i64], t: i64) -> Vec<Rational> {
    let mut out = Vec::new();
    for (c, &d) in coeffs.iter().zip(degrees) {
        out.extend(alg.coords(c, t - d));
    }
    out
}

fn unpack(slot_bases: &[Vec<Monomial>], v: &[Rational]) -> Vec<Poly> {
    let mut out = Vec::with_capacity(slot_bases.len());
    let mut k = 0;
    for basis in slot_bases {
        let mut p = Poly::zero();
        for mono in basis {
            if !v[k].is_zero() {
                p = p.add(&Poly::from_monomial(*mono, v[k].clone()));
            }
            k += 1;
        }
        out.push(p);
    }
    out
}

/// Connection data: `gamma[i][l][j]` is `Γ^{(i)}_{lj}`, so that
/// `∇_{G_i}(u_j) = Σ_l gamma[i][l][j] · u_l`. Entries may mix internal
/// degrees; homogeneous slices are processed separately downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connection {
    pub gamma: Vec<Vec<Vec<Poly>>>,
}

impl Connection {
    /// The connection with all coefficients zero. On a free rank-one module
    /// this is a genuine (integrable) connection; on other modules it may
    /// fail verification.
    pub fn zero(num_der_gens: usize, num_mod_gens: usize) -> Self {
        Connection {
            gamma: vec![vec![vec![Poly::zero(); num_mod_gens]; num_mod_gens]; num_der_gens],
        }
    }

    fn check_shape(&self, cx: &Complex, m: &RankOneModule) -> Result<(), ConnError> {
        let g = cx.presentation().num_gens();
        let r = m.num_gens();
        let ok = self.gamma.len() == g
            && self
                .gamma
                .iter()
                .all(|mat| mat.len() == r && mat.iter().all(|row| row.len() == r));
        ok.then_some(()).ok_or(ConnError::ShapeMismatch)
    }

    /// Adds a scalar 1-cochain deviation: `∇'_D(u) = ∇_D(u) + ω(D)·u`.
    pub fn add_scalar_cochain(&self, cx: &Complex, omega: &Cochain) -> Connection {
        assert_eq!(omega.n, 1, "deviation must be a 1-cochain");
        let mut out = self.clone();
        for (i, mat) in out.gamma.iter_mut().enumerate() {
            let w = &omega.values[i];
            if w.is_zero() {
                continue;
            }
            let r = mat.len();
            for j in 0..r {
                mat[j][j] = cx.alg().normal_form(&mat[j][j].add(w));
            }
        }
        out
    }
}

/// A reported failure of the connection axioms.
#[derive(Clone, PartialEq, Eq)]
pub enum ConnectionViolation {
    /// `Σ_i r_i ∇_{G_i}` does not act as zero on `u_j` for a syzygy `r`
    /// of the derivation generators.
    DerRelation {
        relation: usize,
        module_gen: usize,
        defect: Poly,
    },
    /// Applying `∇_{G_i}` to the two sides of a module relation disagrees.
    ModuleRelation {
        relation: usize,
        der_gen: usize,
        defect: Poly,
    },
}

impl std::fmt::Display for ConnectionViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConnectionViolation::DerRelation {
                relation,
                module_gen,
                defect,
            } => write!(
                f,
                "derivation syzygy {relation} applied to module generator {module_gen} \
                 leaves the defect {defect}"
            ),
            ConnectionViolation::ModuleRelation {
                relation,
                der_gen,
                defect,
            } => write!(
                f,
                "Leibniz rule fails on module relation {relation} under derivation \
                 generator {der_gen}, defect {defect}"
            ),
        }
    }
}

impl std::fmt::Debug for ConnectionViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Display::fmt(self, f)
    }
}

/// Verification report for a candidate connection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionCheck {
    pub violations: Vec<ConnectionViolation>,
}

impl ConnectionCheck {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the two well-definedness conditions of a connection: Leibniz
/// compatibility over every module relation, and `A`-linearity over every
/// syzygy of the derivation generators.
pub fn verify_connection(
    cx: &Complex,
    m: &RankOneModule,
    conn: &Connection,
) -> Result<ConnectionCheck, ConnError> {
    conn.check_shape(cx, m)?;
    let alg = cx.alg();
    let pres = cx.presentation();
    let r = m.num_gens();
    let mut violations = Vec::new();

    // A-linearity over derivation syzygies: Σ_i rel_i ∇_{G_i} = ∇_0 = 0
    for (ri, rel) in pres.relations.iter().enumerate() {
        for j in 0..r {
            let mut total = Poly::zero();
            for l in 0..r {
                let mut coeff = Poly::zero();
                for (i, re) in rel.coeffs.iter().enumerate() {
                    if !re.is_zero() && !conn.gamma[i][l][j].is_zero() {
                        coeff = coeff.add(&re.mul(&conn.gamma[i][l][j]));
                    }
                }
                if !coeff.is_zero() {
                    total = total.add(&coeff.mul(&m.gens[l]));
                }
            }
            let defect = alg.normal_form(&total);
            if !defect.is_zero() {
                violations.push(ConnectionViolation::DerRelation {
                    relation: ri,
                    module_gen: j,
                    defect,
                });
            }
        }
    }

    // Leibniz over module relations: apply ∇_{G_i} to Σ_j c_j u_j = 0
    for (ri, rel) in m.relations.iter().enumerate() {
        for (i, g) in pres.gens.iter().enumerate() {
            let mut total = Poly::zero();
            for l in 0..r {
                let mut w = g.apply(alg, &rel.coeffs[l]);
                for j in 0..r {
                    if !rel.coeffs[j].is_zero() && !conn.gamma[i][l][j].is_zero() {
                        w = w.add(&conn.gamma[i][l][j].mul(&rel.coeffs[j]));
                    }
                }
                if !w.is_zero() {
                    total = total.add(&w.mul(&m.gens[l]));
                }
            }
            let defect = alg.normal_form(&total);
            if !defect.is_zero() {
                violations.push(ConnectionViolation::ModuleRelation {
                    relation: ri,
                    der_gen: i,
                    defect,
                });
            }
        }
    }

    Ok(ConnectionCheck { violations })
}

fn require_connection(cx: &Complex, m: &RankOneModule, conn: &Connection) -> Result<(), ConnError> {
    let check = verify_connection(cx, m, conn)?;
    if !check.is_ok() {
        let first = format!("{:?}", check.violations[0]);
        return Err(ConnError::NotAConnection(check.violations.len(), first));
    }
    Ok(())
}

/// The scalar `q` with `φ(u_j) = q·u_j` for all `j`, given the values
/// `values[j] = φ(u_j)` as elements of `A`.
///
/// The cross-multiplication identities `u_l·φ(u_j) = u_j·φ(u_l)` are checked
/// first as the rank-one consistency certificate, then `q` is solved for
/// degreewise; it is unique because `A` is a domain.
pub fn endo_scalar(
    alg: &WeightedAlgebra,
    m: &RankOneModule,
    values: &[Poly],
) -> Result<Poly, ConnError> {
    assert_eq!(values.len(), m.num_gens());
    let values: Vec<Poly> = values.iter().map(|v| alg.normal_form(v)).collect();
    for l in 0..values.len() {
        for j in (l + 1)..values.len() {
            let lhs = alg.nf_mul(&m.gens[l], &values[j]);
            let rhs = alg.nf_mul(&m.gens[j], &values[l]);
            if lhs != rhs {
                return Err(ConnError::NotScalar);
            }
        }
    }
    if values.iter().all(Poly::is_zero) {
        return Ok(Poly::zero());
    }
    // collect candidate scalar degrees from the homogeneous components
    let mut scalar_degrees: std::collections::BTreeSet<i64> = Default::default();
    for (v, &du) in values.iter().zip(&m.degrees) {
        for (deg, _) in v.homogeneous_components(alg.weights()) {
            scalar_degrees.insert(deg - du);
        }
    }
    let mut q = Poly::zero();
    for &delta in &scalar_degrees {
        if delta < 0 {
            return Err(ConnError::NotScalar);
        }
        let basis = alg.graded_basis(delta);
        // rows: stacked coordinates of each value's degree-(delta + d_j) part
        let mut rows_total = 0usize;
        let mut plans = Vec::new();
        for &du in &m.degrees {
            plans.push(rows_total);
            rows_total += alg.graded_dim(delta + du);
        }
        let mut mat = QMatrix::new(rows_total, basis.len());
        let mut rhs = vec![Rational::zero(); rows_total];
        for (j, (u, &du)) in m.gens.iter().zip(&m.degrees).enumerate() {
            let tbasis = alg.graded_basis(delta + du);
            let tindex: BTreeMap<Monomial, usize> =
                tbasis.iter().enumerate().map(|(i, mo)| (*mo, i)).collect();
            for (k, mono) in basis.iter().enumerate() {
                for (mo, c) in alg.normal_form(&u.mul_monomial(mono)).terms() {
                    mat.add_to(plans[j] + tindex[mo], k, c);
                }
            }
            let comp = values[j]
                .homogeneous_components(alg.weights())
                .remove(&(delta + du))
                .unwrap_or_else(Poly::zero);
            for (mo, c) in comp.terms() {
                rhs[plans[j] + tindex[mo]] = c.clone();
            }
        }
        let sol = mat
            .solve(&rhs)
            .expect("dimensions match")
            .ok_or(ConnError::NotScalar)?;
        for (k, mono) in basis.iter().enumerate() {
            if !sol[k].is_zero() {
                q = q.add(&Poly::from_monomial(*mono, sol[k].clone()));
            }
        }
    }
    // confirm the solution on every generator
    for (j, v) in values.iter().enumerate() {
        if &alg.nf_mul(&q, &m.gens[j]) != v {
            return Err(ConnError::NotScalar);
        }
    }
    Ok(q)
}

/// A cochain split into homogeneous internal-degree components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedCochain {
    pub n: usize,
    pub components: BTreeMap<i64, Cochain>,
}

impl GradedCochain {
    pub fn is_zero(&self) -> bool {
        self.components.values().all(Cochain::is_zero)
    }
}

/// Splits a vector of per-slot values (of possibly mixed internal degree)
/// into homogeneous cochain components at level `n`.
fn graded_cochain_from_values(
    cx: &Complex,
    n: usize,
    values: Vec<Poly>,
) -> GradedCochain {
    let alg = cx.alg();
    let wedge = cx.wedge(n);
    let mut components: BTreeMap<i64, Cochain> = BTreeMap::new();
    for (slot, v) in values.into_iter().enumerate() {
        for (deg, part) in v.homogeneous_components(alg.weights()) {
            let e = deg - wedge.gens[slot].degree;
            let c = components
                .entry(e)
                .or_insert_with(|| Cochain::zero(n, e, wedge.gens.len()));
            c.values[slot] = c.values[slot].add(&part);
        }
    }
    components.retain(|_, c| !c.is_zero());
    GradedCochain { n, components }
}

/// The curvature of a verified connection, as a 2-cochain with values in `A`
/// (one scalar per wedge `G_i ∧ G_j`), split into homogeneous components.
///
/// Per wedge generator the endomorphism `[∇_{G_i}, ∇_{G_j}] - ∇_{[G_i,G_j]}`
/// is assembled from the `Γ` matrices and the cached bracket expressions,
/// and its scalar is extracted through [`endo_scalar`].
pub fn curvature(
    cx: &Complex,
    m: &RankOneModule,
    conn: &Connection,
) -> Result<GradedCochain, ConnError> {
    require_connection(cx, m, conn)?;
    curvature_unchecked(cx, m, conn)
}

fn curvature_unchecked(
    cx: &Complex,
    m: &RankOneModule,
    conn: &Connection,
) -> Result<GradedCochain, ConnError> {
    let alg = cx.alg();
    let pres = cx.presentation();
    let r = m.num_gens();
    let wedge2 = cx.wedge(2);
    let mut slot_values = vec![Poly::zero(); wedge2.gens.len()];
    for (slot, wgen) in wedge2.gens.iter().enumerate() {
        let (i, j) = (wgen.indices[0], wgen.indices[1]);
        // commutator part: Γ^i Γ^j - Γ^j Γ^i + G_i(Γ^j) - G_j(Γ^i)
        let mut phi = vec![vec![Poly::zero(); r]; r];
        for a in 0..r {
            for b in 0..r {
                let mut acc = Poly::zero();
                for t in 0..r {
                    acc = acc.add(&conn.gamma[i][a][t].mul(&conn.gamma[j][t][b]));
                    acc = acc.sub(&conn.gamma[j][a][t].mul(&conn.gamma[i][t][b]));
                }
                acc = acc.add(&pres.gens[i].apply(alg, &conn.gamma[j][a][b]));
                acc = acc.sub(&pres.gens[j].apply(alg, &conn.gamma[i][a][b]));
                phi[a][b] = acc;
            }
        }
        // minus ∇ of the bracket, expressed over the generators
        let coeffs = cx.bracket_expression(i, j);
        for (p, cp) in coeffs.iter().enumerate() {
            if cp.is_zero() {
                continue;
            }
            for a in 0..r {
                for b in 0..r {
                    if !conn.gamma[p][a][b].is_zero() {
                        phi[a][b] = phi[a][b].sub(&cp.mul(&conn.gamma[p][a][b]));
                    }
                }
            }
        }
        // scalar of the endomorphism u_b -> Σ_a phi[a][b] u_a
        let values: Vec<Poly> = (0..r)
            .map(|b| {
                let mut acc = Poly::zero();
                for a in 0..r {
                    if !phi[a][b].is_zero() {
                        acc = acc.add(&phi[a][b].mul(&m.gens[a]));
                    }
                }
                alg.normal_form(&acc)
            })
            .collect();
        slot_values[slot] = endo_scalar(alg, m, &values)?;
    }
    let graded = graded_cochain_from_values(cx, 2, slot_values);
    for c in graded.components.values() {
        if !presmod::satisfies_relations(alg, wedge2, c) {
            return Err(ConnError::CurvatureUnstable);
        }
    }
    Ok(graded)
}

/// One homogeneous component of a cohomology class extraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassComponent {
    pub degree: i64,
    pub class: ClassCoordinates,
}

/// The integrability class of a module with connection: the class of the
/// curvature in `H^2` (weight-0 block in equivariant mode). The class is
/// zero exactly when some integrable connection exists on the module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegrabilityClass {
    pub components: Vec<ClassComponent>,
    pub zero: bool,
}

pub fn integrability_class(
    cx: &Complex,
    m: &RankOneModule,
    conn: &Connection,
    weight_block: Option<u32>,
) -> Result<IntegrabilityClass, ConnError> {
    let curv = curvature(cx, m, conn)?;
    let mut components = Vec::new();
    let mut zero = true;
    for (e, c) in &curv.components {
        // curvature components must be 2-cocycles
        let dc = cx.differential(c);
        if !dc.is_zero() {
            return Err(ConnError::CurvatureUnstable);
        }
        let class = cx.class_coordinates(c, weight_block)?;
        zero &= class.coboundary;
        components.push(ClassComponent { degree: *e, class });
    }
    Ok(IntegrabilityClass { components, zero })
}

/// The Reynolds average of a connection over the group: keeps exactly the
/// entry components whose equivariance defect weight vanishes. The output is
/// `G`-invariant and is again a connection; integrability of the input is
/// not necessarily preserved.
pub fn average_connection(
    cx: &Complex,
    m: &RankOneModule,
    conn: &Connection,
) -> Result<Connection, ConnError> {
    conn.check_shape(cx, m)?;
    require_connection(cx, m, conn)?;
    let act = cx.action().expect("averaging requires an action");
    let m_weights = m
        .xi_weights
        .as_ref()
        .ok_or(ConnError::NoEquivariantStructure)?;
    let g_weights = cx
        .presentation()
        .gen_weights
        .as_ref()
        .expect("presentation built with the action");
    let mut out = conn.clone();
    for (i, mat) in out.gamma.iter_mut().enumerate() {
        for (l, row) in mat.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                if entry.is_zero() {
                    continue;
                }
                let mut kept = Poly::zero();
                for (mono, c) in entry.terms() {
                    let defect = act.reduce(
                        act.monomial_weight(mono) as i64 + m_weights[l] as i64
                            - m_weights[j] as i64
                            - g_weights[i] as i64,
                    );
                    if defect == 0 {
                        kept = kept.add(&Poly::from_monomial(*mono, c.clone()));
                    }
                }
                *entry = kept;
            }
        }
    }
    require_connection(cx, m, &out)?;
    Ok(out)
}

/// True when every entry component of the connection has equivariance
/// defect weight zero, i.e. `g*∇ = ∇`.
pub fn is_invariant_connection(
    cx: &Complex,
    m: &RankOneModule,
    conn: &Connection,
) -> Result<bool, ConnError> {
    let act = cx.action().expect("invariance requires an action");
    let m_weights = m
        .xi_weights
        .as_ref()
        .ok_or(ConnError::NoEquivariantStructure)?;
    let g_weights = cx
        .presentation()
        .gen_weights
        .as_ref()
        .expect("presentation built with the action");
    for (i, mat) in conn.gamma.iter().enumerate() {
        for (l, row) in mat.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                for (mono, _) in entry.terms() {
                    let defect = act.reduce(
                        act.monomial_weight(mono) as i64 + m_weights[l] as i64
                            - m_weights[j] as i64
                            - g_weights[i] as i64,
                    );
                    if defect != 0 {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Moduli comparison of two integrable connections on the same module: the
/// difference is a scalar-valued 1-cocycle, and the connections are
/// equivalent exactly when its class in `H^1` (weight-0 block in equivariant
/// mode) vanishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuliReport {
    pub components: Vec<ClassComponent>,
    pub equivalent: bool,
}

pub fn moduli_class(
    cx: &Complex,
    m: &RankOneModule,
    a: &Connection,
    b: &Connection,
    weight_block: Option<u32>,
) -> Result<ModuliReport, ConnError> {
    for conn in [a, b] {
        require_connection(cx, m, conn)?;
        if !curvature_unchecked(cx, m, conn)?.is_zero() {
            return Err(ConnError::NotIntegrable);
        }
    }
    let diff = connection_difference(cx, m, a, b)?;
    let mut components = Vec::new();
    let mut equivalent = true;
    for (e, c) in &diff.components {
        let dc = cx.differential(c);
        assert!(
            dc.is_zero(),
            "difference of integrable connections must be a 1-cocycle"
        );
        let class = cx.class_coordinates(c, weight_block)?;
        equivalent &= class.coboundary;
        components.push(ClassComponent { degree: *e, class });
    }
    Ok(ModuliReport {
        components,
        equivalent,
    })
}

/// The difference `∇_a - ∇_b` as a scalar-valued graded 1-cochain.
pub fn connection_difference(
    cx: &Complex,
    m: &RankOneModule,
    a: &Connection,
    b: &Connection,
) -> Result<GradedCochain, ConnError> {
    let alg = cx.alg();
    let r = m.num_gens();
    let g = cx.presentation().num_gens();
    let mut slot_values = Vec::with_capacity(g);
    for i in 0..g {
        let values: Vec<Poly> = (0..r)
            .map(|j| {
                let mut acc = Poly::zero();
                for l in 0..r {
                    let d = a.gamma[i][l][j].sub(&b.gamma[i][l][j]);
                    if !d.is_zero() {
                        acc = acc.add(&d.mul(&m.gens[l]));
                    }
                }
                alg.normal_form(&acc)
            })
            .collect();
        slot_values.push(endo_scalar(alg, m, &values)?);
    }
    Ok(graded_cochain_from_values(cx, 1, slot_values))
}

/// Verifies `g^k * R_∇ = R_{g^k * ∇}` by two independent routes.
///
/// The left side computes the curvature and splits it by ξ-weight, tagging
/// the weight-`t` part with phase `k·t`. The right side decomposes `∇` into
/// its invariant average plus pure-weight scalar deviations `ω_t`, uses the
/// affine curvature law `R_{∇_0 + ω} = R_{∇_0} + dω` for rank-one modules,
/// and tags `d(ω_t)` with phase `k·t`. Both sides are formal phase maps over
/// rational cochains; they must agree exactly.
pub fn curvature_equivariance_check(
    cx: &Complex,
    m: &RankOneModule,
    conn: &Connection,
    k: u32,
) -> Result<bool, ConnError> {
    let act = cx.action().expect("equivariance check requires an action").clone();
    let wedge2 = cx.wedge(2);

    // left: phases of the curvature's weight components, per internal degree
    let curv = curvature(cx, m, conn)?;
    let mut lhs: BTreeMap<(i64, u32), Cochain> = BTreeMap::new();
    for (e, c) in &curv.components {
        for (t, part) in equiv::split_cochain(&act, wedge2, c) {
            insert_phase(&mut lhs, (*e, act.reduce(k as i64 * t as i64)), part);
        }
    }

    // right: R of the invariant average, plus d of the phased deviations
    let avg = average_connection(cx, m, conn)?;
    let mut rhs: BTreeMap<(i64, u32), Cochain> = BTreeMap::new();
    for (e, c) in curvature(cx, m, &avg)?.components {
        insert_phase(&mut rhs, (e, 0), c);
    }
    let wedge1 = cx.wedge(1);
    let deviation = connection_difference(cx, m, conn, &avg)?;
    for (e, omega) in &deviation.components {
        for (t, part) in equiv::split_cochain(&act, wedge1, omega) {
            let d = cx.differential(&part);
            if !d.is_zero() {
                insert_phase(&mut rhs, (*e, act.reduce(k as i64 * t as i64)), d);
            }
        }
    }

    Ok(lhs == rhs)
}

fn insert_phase(map: &mut BTreeMap<(i64, u32), Cochain>, key: (i64, u32), c: Cochain) {
    if c.is_zero() {
        return;
    }
    match map.remove(&key) {
        Some(prev) => {
            let sum = prev.add(&c);
            if !sum.is_zero() {
                map.insert(key, sum);
            }
        }
        None => {
            map.insert(key, c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lrc::recommended_bound;
    use crate::qlinalg::rat;
    use crate::wpoly::{parse_poly, WeightedAlgebra};
    use rand::{Rng, SeedableRng};

    fn cubic_complex() -> Complex {
        let alg =
            WeightedAlgebra::new(parse_poly("x1^3+x2^3+x3^3").unwrap(), [1, 1, 1]).unwrap();
        Complex::build(alg, None, 8).unwrap()
    }

    fn full_module(cx: &Complex) -> RankOneModule {
        RankOneModule::new(cx.alg(), vec![Poly::one()], None, 6).unwrap()
    }

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn trivial_connection_on_a_verifies_and_is_flat() {
        let cx = cubic_complex();
        let m = full_module(&cx);
        let conn = Connection::zero(cx.presentation().num_gens(), 1);
        assert!(verify_connection(&cx, &m, &conn).unwrap().is_ok());
        let curv = curvature(&cx, &m, &conn).unwrap();
        assert!(curv.is_zero());
        let ic = integrability_class(&cx, &m, &conn, None).unwrap();
        assert!(ic.zero);
    }

    #[test]
    fn trivial_plus_cochain_verifies_and_curvature_is_d_omega() {
        let cx = cubic_complex();
        let m = full_module(&cx);
        let base = Connection::zero(cx.presentation().num_gens(), 1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for e in -2..=2 {
            let sp = cx.cochain_space(1, e);
            if sp.dim() == 0 {
                continue;
            }
            let coeffs: Vec<Rational> =
                (0..sp.dim()).map(|_| rat(rng.gen_range(-2..3))).collect();
            let omega = sp.combine(&coeffs);
            let conn = base.add_scalar_cochain(&cx, &omega);
            assert!(verify_connection(&cx, &m, &conn).unwrap().is_ok());
            let curv = curvature(&cx, &m, &conn).unwrap();
            let expected = cx.differential(&omega);
            if expected.is_zero() {
                assert!(curv.is_zero());
            } else {
                assert_eq!(curv.components.len(), 1);
                assert_eq!(curv.components[&e], expected);
            }
            // the class of a coboundary is zero
            let ic = integrability_class(&cx, &m, &conn, None).unwrap();
            assert!(ic.zero);
        }
    }

    #[test]
    fn broken_gamma_is_pinpointed() {
        let cx = cubic_complex();
        let m = full_module(&cx);
        let mut conn = Connection::zero(cx.presentation().num_gens(), 1);
        // scalar values that violate the derivation syzygies: put 1 on the
        // Euler slot only (the syzygies with nonzero Euler coefficient fail)
        conn.gamma[0][0][0] = Poly::one();
        let check = verify_connection(&cx, &m, &conn).unwrap();
        assert!(!check.is_ok());
        assert!(matches!(
            check.violations[0],
            ConnectionViolation::DerRelation { .. }
        ));
    }

    #[test]
    fn endo_scalar_examples() {
        let cx = cubic_complex();
        let alg = cx.alg();
        let m = RankOneModule::new(alg, vec![p("x1+x2"), p("x3")], None, 6).unwrap();
        // identity endomorphism
        let q = endo_scalar(alg, &m, &[p("x1+x2"), p("x3")]).unwrap();
        assert_eq!(q, Poly::one());
        // multiplication by x1
        let q = endo_scalar(
            alg,
            &m,
            &[alg.nf_mul(&p("x1"), &p("x1+x2")), alg.nf_mul(&p("x1"), &p("x3"))],
        )
        .unwrap();
        assert_eq!(q, p("x1"));
        // inconsistent values fail the cross-multiplication certificate
        let err = endo_scalar(alg, &m, &[p("x3"), p("x3")]).unwrap_err();
        assert_eq!(err, ConnError::NotScalar);
    }

    #[test]
    fn two_generator_module_relations_checked() {
        let cx = cubic_complex();
        let alg = cx.alg();
        // redundant presentation of the principal ideal (x3)
        let m = RankOneModule::new(alg, vec![p("x3"), p("x1*x3")], None, 6).unwrap();
        assert!(!m.relations.is_empty());
        let g = cx.presentation().num_gens();
        // a valid connection: ∇_D(u_j) = (scalar 0) — zero gamma satisfies
        // Leibniz only if applying ∇ to the relation (-x1)·u1 + 1·u2 = 0
        // balances G(c_l) terms; zero gamma leaves G_i(-x1)·u1 + 0, nonzero.
        let zero = Connection::zero(g, 2);
        let check = verify_connection(&cx, &m, &zero).unwrap();
        assert!(!check.is_ok());
        assert!(matches!(
            check.violations[0],
            ConnectionViolation::ModuleRelation { .. }
        ));
    }

    #[test]
    fn curvature_formula_is_not_additive_at_operator_level() {
        // Doubling the trivial connection is not a connection, and the raw
        // curvature expression applied to it picks up a derivation term:
        // with O_D = 2D, the expression [O_D, O_D'] - O_[D,D'] acts as
        // 2[D,D'], which is nonzero on the cubic. The curvature of honest
        // connections stays additive in the scalar deviation.
        let cx = cubic_complex();
        let alg = cx.alg();
        let gens = &cx.presentation().gens;
        let (d1, d2) = (&gens[1], &gens[2]);
        let bracket = d1.bracket(alg, d2);
        assert!(!bracket.is_zero());
        let a = ["x1", "x2", "x3"]
            .into_iter()
            .map(p)
            .find(|v| !bracket.apply(alg, v).is_zero())
            .expect("a nonzero bracket acts nontrivially on some variable");
        // [2D, 2D'](a) - 2[D,D'](a) = 2[D,D'](a)
        let lhs = {
            let t1 = d1.apply(alg, &d2.apply(alg, &a)).scale(&rat(4));
            let t2 = d2.apply(alg, &d1.apply(alg, &a)).scale(&rat(4));
            let t3 = bracket.apply(alg, &a).scale(&rat(2));
            alg.normal_form(&t1.sub(&t2).sub(&t3))
        };
        let expected = bracket.apply(alg, &a).scale(&rat(2));
        assert_eq!(lhs, expected);
        assert!(!lhs.is_zero());
    }

    #[test]
    fn moduli_of_equal_connections_is_zero() {
        let cx = cubic_complex();
        let m = full_module(&cx);
        let conn = Connection::zero(cx.presentation().num_gens(), 1);
        let rep = moduli_class(&cx, &m, &conn, &conn, None).unwrap();
        assert!(rep.equivalent);
        assert!(rep.components.is_empty());
    }

    #[test]
    fn moduli_detects_inequivalent_connections_on_plain_cubic() {
        let cx = cubic_complex();
        let m = full_module(&cx);
        let trivial = Connection::zero(cx.presentation().num_gens(), 1);
        // the H^1 generator at degree 0 is a 1-cocycle; adding it gives an
        // integrable connection in a different class
        let h1 = cx.cohomology(1, 0).unwrap();
        assert_eq!(h1.dim, 1);
        let omega = h1.classes[0].representative.clone();
        let other = trivial.add_scalar_cochain(&cx, &omega);
        let rep = moduli_class(&cx, &m, &trivial, &other, None).unwrap();
        assert!(!rep.equivalent);
        assert_eq!(rep.components.len(), 1);
        assert_eq!(rep.components[0].class.h_dim, 1);
        assert!(!rep.components[0].class.coordinates[0].is_zero());
    }

    #[test]
    fn non_integrable_inputs_are_rejected() {
        let cx = cubic_complex();
        let m = full_module(&cx);
        let trivial = Connection::zero(cx.presentation().num_gens(), 1);
        // an omega with d(omega) != 0
        let sp = cx.cochain_space(1, 1);
        let mut nonflat = None;
        for b in &sp.basis {
            if !cx.differential(b).is_zero() {
                nonflat = Some(b.clone());
                break;
            }
        }
        let omega = nonflat.expect("some non-cocycle exists at degree 1");
        let conn = trivial.add_scalar_cochain(&cx, &omega);
        let err = moduli_class(&cx, &m, &trivial, &conn, None).unwrap_err();
        assert_eq!(err, ConnError::NotIntegrable);
    }

    fn z3_complex() -> Complex {
        let alg =
            WeightedAlgebra::new(parse_poly("x1^3+x2^3+x3^3").unwrap(), [1, 1, 1]).unwrap();
        let act = CyclicActionType::new(3, [1, 1, 2]);
        let bound = recommended_bound(alg.weights());
        Complex::build(alg, Some(act), bound).unwrap()
    }

    #[test]
    fn averaging_produces_invariant_connection() {
        let cx = z3_complex();
        let act = cx.action().unwrap().clone();
        let m = RankOneModule::new(cx.alg(), vec![p("x3")], Some(&act), 6).unwrap();
        let g = cx.presentation().num_gens();
        let base = Connection::zero(g, 1);
        // perturb by a mixed-weight 1-cochain
        let sp = cx.cochain_space(1, 1);
        assert!(sp.dim() > 0);
        let omega = sp.basis.iter().fold(
            Cochain::zero(1, 1, cx.wedge(1).gens.len()),
            |acc, b| acc.add(b),
        );
        let conn = base.add_scalar_cochain(&cx, &omega);
        let avg = average_connection(&cx, &m, &conn).unwrap();
        assert!(is_invariant_connection(&cx, &m, &avg).unwrap());
        assert!(verify_connection(&cx, &m, &avg).unwrap().is_ok());
        // averaging an invariant connection returns it unchanged
        let again = average_connection(&cx, &m, &avg).unwrap();
        assert_eq!(avg, again);
    }

    #[test]
    fn curvature_equivariance_identity() {
        let cx = z3_complex();
        let act = cx.action().unwrap().clone();
        let m = RankOneModule::new(cx.alg(), vec![p("x3")], Some(&act), 6).unwrap();
        let g = cx.presentation().num_gens();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for e in 0..=2 {
            let sp = cx.cochain_space(1, e);
            if sp.dim() == 0 {
                continue;
            }
            let coeffs: Vec<Rational> =
                (0..sp.dim()).map(|_| rat(rng.gen_range(-2..3))).collect();
            let omega = sp.combine(&coeffs);
            let conn = Connection::zero(g, 1).add_scalar_cochain(&cx, &omega);
            for k in 0..3 {
                assert!(
                    curvature_equivariance_check(&cx, &m, &conn, k).unwrap(),
                    "equivariance failed at e={e}, k={k}"
                );
            }
        }
    }
}
