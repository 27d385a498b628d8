//! The Lie-Rinehart complex of `(Der(A), A)` with the trivial connection,
//! its differential, and graded cohomology.
//!
//! The carrier spaces are `C^n = Hom(∧^n Der(A), A)`, realized degreewise
//! through the presentations in [`crate::presmod`]. The differential is the
//! alternating sum
//!
//! ```text
//! dφ(D_0 ∧ … ∧ D_n) = Σ_i (-1)^i D_i(φ(… D̂_i …))
//!                   + Σ_{j<k} (-1)^{j+k} φ([D_j, D_k] ∧ … D̂_j … D̂_k …)
//! ```
//!
//! evaluated on generator wedges, with bracket terms rewritten over the
//! chosen generators and extended `A`-linearly. Cohomology at `(n, e)` is
//! `ker d^n / im d^{n-1}` inside the internal-degree-`e` slice.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::deriv::{self, Derivation, DerivError};
use crate::equiv::{self, CyclicActionType};
use crate::presmod::{
    self, CochainSpaceBasis, DerPresentation, WedgePresentation,
};
use crate::qlinalg::{QMatrix, Rational, RowReducer};
use crate::wpoly::{Poly, WeightSystem, WeightedAlgebra};

/// Highest exterior power carried by the complex. `C^3` is torsion-valued on
/// surface inputs and its degreewise slices vanish, so the complex is
/// effectively `C^0 → C^1 → C^2 → C^3`.
pub const MAX_WEDGE: usize = 3;

/// A homogeneous element of `C^n` at internal degree `degree`: one value in
/// `A_{w_I + degree}` per wedge generator of degree `w_I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    pub n: usize,
    pub degree: i64,
    pub values: Vec<Poly>,
}

impl Cochain {
    pub fn zero(n: usize, degree: i64, slots: usize) -> Self {
        Cochain {
            n,
            degree,
            values: vec![Poly::zero(); slots],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Poly::is_zero)
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        assert_eq!((self.n, self.degree), (other.n, other.degree));
        Cochain {
            n: self.n,
            degree: self.degree,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Cochain {
        Cochain {
            n: self.n,
            degree: self.degree,
            values: self.values.iter().map(|v| v.scale(c)).collect(),
        }
    }
}

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("bracket [G_{i}, G_{j}] is not expressible in the generators; raise the presentation bound")]
    BracketNotInSpan { i: usize, j: usize },
    #[error(transparent)]
    Deriv(#[from] DerivError),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstabilityError {
    #[error(
        "differential image at (n={n}, e={e}) escapes the computed cochain space; \
         the harvested relation set is incomplete — raise the presentation bound"
    )]
    ImageNotInSpace { n: usize, e: i64 },
    #[error(
        "differential output at (n={n}, e={e}) violates the wedge relations; \
         the harvested relation set is incomplete — raise the presentation bound"
    )]
    DifferentialViolatesRelations { n: usize, e: i64 },
}

/// The value of the trivial connection: `∇_D(a) = D(a)`.
pub fn trivial_connection_apply(alg: &WeightedAlgebra, d: &Derivation, a: &Poly) -> Poly {
    d.apply(alg, a)
}

/// Suggested presentation/syzygy bound for a weight system: generous enough
/// to reach every generator degree (`d - d_i - d_j`) and syzygy degree
/// (`d - d_i` and `2d - d_1 - d_2 - d_3`) of a quasi-homogeneous surface,
/// with margin for the stability re-check.
pub fn recommended_bound(w: &WeightSystem) -> i64 {
    let min_var = w.vars.iter().min().copied().unwrap_or(1);
    let sum: i64 = w.vars.iter().sum();
    let candidates = [
        2 * w.total / min_var,
        2 * w.total - sum,
        w.total - min_var,
    ];
    candidates.into_iter().max().unwrap().max(0) + 2
}

/// The Lie-Rinehart complex of an algebra, with all derived data needed to
/// differentiate and take cohomology: the presentation of `Der(A)`, wedge
/// presentations up to [`MAX_WEDGE`], and the brackets of all generator
/// pairs expressed back in the generators.
#[derive(Debug, Clone)]
pub struct Complex {
    alg: WeightedAlgebra,
    action: Option<CyclicActionType>,
    pres: DerPresentation,
    wedges: Vec<WedgePresentation>,
    bracket_exprs: BTreeMap<(usize, usize), Vec<Poly>>,
    bracket_kernels: BTreeMap<(usize, usize), Vec<Vec<Poly>>>,
}

impl Complex {
    pub fn build(
        alg: WeightedAlgebra,
        action: Option<CyclicActionType>,
        bound: i64,
    ) -> Result<Self, BuildError> {
        let pres = presmod::build_presentation(&alg, action.as_ref(), bound);
        Self::from_presentation(alg, action, pres)
    }

    /// Builds the complex with the default bound from [`recommended_bound`].
    pub fn build_default(
        alg: WeightedAlgebra,
        action: Option<CyclicActionType>,
    ) -> Result<Self, BuildError> {
        let bound = recommended_bound(alg.weights());
        Self::build(alg, action, bound)
    }

    pub fn from_presentation(
        alg: WeightedAlgebra,
        action: Option<CyclicActionType>,
        pres: DerPresentation,
    ) -> Result<Self, BuildError> {
        let wedges: Vec<WedgePresentation> = (0..=MAX_WEDGE)
            .map(|n| presmod::wedge_presentation(&pres, n))
            .collect();
        let mut bracket_exprs = BTreeMap::new();
        let mut bracket_kernels = BTreeMap::new();
        for i in 0..pres.num_gens() {
            for j in (i + 1)..pres.num_gens() {
                let b = pres.gens[i].bracket(&alg, &pres.gens[j]);
                let (coeffs, kernel) = deriv::express_with_kernel(&alg, &b, &pres.gens)
                    .map_err(|e| match e {
                        DerivError::NotInSpan => BuildError::BracketNotInSpan { i, j },
                        other => BuildError::Deriv(other),
                    })?;
                bracket_exprs.insert((i, j), coeffs);
                bracket_kernels.insert((i, j), kernel);
            }
        }
        Ok(Complex {
            alg,
            action,
            pres,
            wedges,
            bracket_exprs,
            bracket_kernels,
        })
    }

    pub fn alg(&self) -> &WeightedAlgebra {
        &self.alg
    }

    pub fn action(&self) -> Option<&CyclicActionType> {
        self.action.as_ref()
    }

    pub fn presentation(&self) -> &DerPresentation {
        &self.pres
    }

    pub fn wedge(&self, n: usize) -> &WedgePresentation {
        &self.wedges[n]
    }

    /// The chosen expression of `[G_i, G_j]` (i < j) over the generators.
    pub fn bracket_expression(&self, i: usize, j: usize) -> &[Poly] {
        &self.bracket_exprs[&(i, j)]
    }

    /// Basis of alternative-expression ambiguities for `[G_i, G_j]`:
    /// coefficient vectors recombining to zero. Adding any combination to the
    /// chosen expression must not change cochain evaluations.
    pub fn bracket_expression_kernel(&self, i: usize, j: usize) -> &[Vec<Poly>] {
        &self.bracket_kernels[&(i, j)]
    }

    pub fn cochain_space(&self, n: usize, e: i64) -> CochainSpaceBasis {
        presmod::cochain_space(&self.alg, &self.wedges[n], e)
    }

    /// Stacked monomial coordinates of a degree-`e` cochain over the slot
    /// bases of `C^n_e`, without computing the constrained basis.
    pub fn ambient_coords(&self, c: &Cochain) -> Vec<Rational> {
        let mut out = Vec::new();
        for (gen, value) in self.wedges[c.n].gens.iter().zip(&c.values) {
            out.extend(self.alg.coords(value, gen.degree + c.degree));
        }
        out
    }

    fn ambient_dim(&self, n: usize, e: i64) -> usize {
        self.wedges[n]
            .gens
            .iter()
            .map(|g| self.alg.graded_dim(g.degree + e))
            .sum()
    }

    /// The Lie-Rinehart differential with the trivial connection.
    pub fn differential(&self, c: &Cochain) -> Cochain {
        self.differential_using(&self.bracket_exprs, c)
    }

    /// The differential evaluated with an alternative bracket-expression
    /// table. Well-definedness of cochains means the result must agree with
    /// [`Self::differential`] whenever the table differs from the canonical
    /// one by expression ambiguities.
    pub fn differential_using(
        &self,
        table: &BTreeMap<(usize, usize), Vec<Poly>>,
        c: &Cochain,
    ) -> Cochain {
        let n = c.n;
        if n + 1 > MAX_WEDGE {
            return Cochain::zero(n + 1, c.degree, 0);
        }
        let wedge_in = &self.wedges[n];
        let wedge_out = &self.wedges[n + 1];
        let gens = &self.pres.gens;
        let mut values = Vec::with_capacity(wedge_out.gens.len());
        for out_gen in &wedge_out.gens {
            let ii = &out_gen.indices;
            let mut acc = Poly::zero();
            // ∇ terms: drop one argument, apply it to the value on the rest
            for (a, &ga) in ii.iter().enumerate() {
                let mut sub = ii.clone();
                sub.remove(a);
                let slot = wedge_in
                    .gen_index(&sub)
                    .expect("subwedge is a standard generator");
                if c.values[slot].is_zero() {
                    continue;
                }
                let term = gens[ga].apply(&self.alg, &c.values[slot]);
                acc = if a % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            // bracket terms: contract two arguments into their bracket
            for a in 0..ii.len() {
                for b in (a + 1)..ii.len() {
                    let (gi, gj) = (ii[a], ii[b]);
                    let mut rest = ii.clone();
                    rest.remove(b);
                    rest.remove(a);
                    let coeffs = &table[&(gi, gj)];
                    let term = self.pair_with_rest(c, coeffs, &rest);
                    // sign (-1)^{a+b} from the positions, with the bracket
                    // placed first in [D_a, D_b] ∧ rest
                    acc = if (a + b) % 2 == 0 {
                        acc.add(&term)
                    } else {
                        acc.sub(&term)
                    };
                }
            }
            values.push(self.alg.normal_form(&acc));
        }
        let out = Cochain {
            n: n + 1,
            degree: c.degree,
            values,
        };
        debug_assert!(presmod::satisfies_relations(&self.alg, wedge_out, &out));
        out
    }

    /// Evaluates `Σ_l coeffs[l] · φ(G_l ∧ G_rest)` with sign bookkeeping.
    fn pair_with_rest(&self, c: &Cochain, coeffs: &[Poly], rest: &[usize]) -> Poly {
        let wedge_in = &self.wedges[c.n];
        let mut acc = Poly::zero();
        for (l, coeff) in coeffs.iter().enumerate() {
            if coeff.is_zero() || rest.contains(&l) {
                continue;
            }
            let mut merged: Vec<usize> = Vec::with_capacity(rest.len() + 1);
            merged.push(l);
            merged.extend_from_slice(rest);
            let swaps = rest.iter().filter(|&&r| r < l).count();
            merged.sort_unstable();
            let slot = wedge_in
                .gen_index(&merged)
                .expect("merged wedge is a standard generator");
            if c.values[slot].is_zero() {
                continue;
            }
            let term = self.alg.nf_mul(coeff, &c.values[slot]);
            acc = if swaps % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }

    /// Multilinear evaluation of a cochain on arbitrary derivations, routing
    /// each argument through `express_in_generators`. Used to confirm that
    /// values do not depend on the chosen expressions.
    pub fn evaluate(&self, c: &Cochain, args: &[Derivation]) -> Result<Poly, DerivError> {
        let exprs: Result<Vec<Vec<Poly>>, _> = args
            .iter()
            .map(|d| deriv::express_in_generators(&self.alg, d, &self.pres.gens))
            .collect();
        Ok(self.evaluate_expressed(c, &exprs?))
    }

    /// Evaluation from caller-supplied generator expressions of the
    /// arguments.
    pub fn evaluate_expressed(&self, c: &Cochain, exprs: &[Vec<Poly>]) -> Poly {
        assert_eq!(exprs.len(), c.n, "argument count must match the cochain");
        let wedge = &self.wedges[c.n];
        let mut acc = Poly::zero();
        let mut choice = vec![0usize; exprs.len()];
        self.eval_rec(c, wedge, exprs, 0, &mut choice, &Poly::one(), &mut acc);
        self.alg.normal_form(&acc)
    }

    fn eval_rec(
        &self,
        c: &Cochain,
        wedge: &WedgePresentation,
        exprs: &[Vec<Poly>],
        depth: usize,
        choice: &mut Vec<usize>,
        coeff: &Poly,
        acc: &mut Poly,
    ) {
        if depth == exprs.len() {
            let mut sorted: Vec<usize> = choice.clone();
            // parity of the sorting permutation; repeated indices were
            // filtered out before recursing
            let mut sign = 0usize;
            for i in 0..sorted.len() {
                for j in (i + 1)..sorted.len() {
                    if sorted[i] > sorted[j] {
                        sign += 1;
                    }
                }
            }
            sorted.sort_unstable();
            let slot = wedge.gen_index(&sorted).expect("standard generator");
            if c.values[slot].is_zero() {
                return;
            }
            let term = self.alg.nf_mul(coeff, &c.values[slot]);
            *acc = if sign % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            return;
        }
        for (l, cl) in exprs[depth].iter().enumerate() {
            if cl.is_zero() || choice[..depth].contains(&l) {
                continue;
            }
            choice[depth] = l;
            let next = self.alg.nf_mul(coeff, cl);
            self.eval_rec(c, wedge, exprs, depth + 1, choice, &next, acc);
        }
    }

    // --------------------------------------------------------------
    // Cohomology
    // --------------------------------------------------------------

    /// Kernel-modulo-image at `(n, e)` from explicit bases of the incoming
    /// and current cochain spaces.
    fn cohomology_from_bases(
        &self,
        n: usize,
        e: i64,
        prev: &[Cochain],
        cur: &[Cochain],
    ) -> Result<Vec<Cochain>, InstabilityError> {
        if cur.is_empty() {
            return Ok(Vec::new());
        }
        // matrix of d^n in ambient coordinates of C^{n+1}
        let out_rows = if n + 1 > MAX_WEDGE { 0 } else { self.ambient_dim(n + 1, e) };
        let mut m_d = QMatrix::new(out_rows, cur.len());
        for (j, b) in cur.iter().enumerate() {
            let db = self.differential(b);
            if db.n <= MAX_WEDGE
                && !presmod::satisfies_relations(&self.alg, &self.wedges[db.n], &db)
            {
                return Err(InstabilityError::DifferentialViolatesRelations { n, e });
            }
            if out_rows > 0 {
                for (i, v) in self.ambient_coords(&db).iter().enumerate() {
                    if !v.is_zero() {
                        m_d.set(i, j, v.clone());
                    }
                }
            }
        }
        let kernel = m_d.kernel_basis();

        // express the image of d^{n-1} in coordinates of `cur`
        let amb_cur = self.ambient_dim(n, e);
        let mut span_matrix = QMatrix::new(amb_cur, cur.len());
        for (j, b) in cur.iter().enumerate() {
            for (i, v) in self.ambient_coords(b).iter().enumerate() {
                if !v.is_zero() {
                    span_matrix.set(i, j, v.clone());
                }
            }
        }
        let mut image = RowReducer::new();
        for b in prev {
            let db = self.differential(b);
            if db.is_zero() {
                continue;
            }
            let coords = self.ambient_coords(&db);
            let sol = span_matrix
                .solve(&coords)
                .expect("dimensions match by construction");
            let Some(sol) = sol else {
                return Err(InstabilityError::ImageNotInSpace { n, e });
            };
            image.insert(&sol);
        }

        let mut reps = Vec::new();
        for v in kernel {
            if image.insert(&v) {
                let mut acc = Cochain::zero(n, e, cur[0].values.len());
                for (b, coef) in cur.iter().zip(&v) {
                    if !coef.is_zero() {
                        acc = acc.add(&b.scale(coef));
                    }
                }
                reps.push(acc);
            }
        }
        Ok(reps)
    }

    /// Cohomology at `(n, e)`. With a group action, the computation splits
    /// into ξ-weight blocks (the differential preserves them), classes carry
    /// their weight, and block dimensions are reported alongside the total.
    pub fn cohomology(&self, n: usize, e: i64) -> Result<Cohomology, InstabilityError> {
        let cur = self.cochain_space(n, e);
        let prev = if n == 0 {
            None
        } else {
            Some(self.cochain_space(n - 1, e))
        };
        match &self.action {
            None => {
                let prev_basis = prev.as_ref().map(|s| s.basis.as_slice()).unwrap_or(&[]);
                let reps = self.cohomology_from_bases(n, e, prev_basis, &cur.basis)?;
                Ok(Cohomology {
                    n,
                    degree: e,
                    dim: reps.len(),
                    classes: reps
                        .into_iter()
                        .map(|representative| CohomologyClass {
                            representative,
                            xi_weight: None,
                        })
                        .collect(),
                    blocks: None,
                })
            }
            Some(act) => {
                let blocks_cur =
                    equiv::weight_split(act, &self.wedges[n], &cur);
                let blocks_prev = prev.map(|sp| {
                    equiv::weight_split(act, &self.wedges[n - 1], &sp)
                });
                let mut classes = Vec::new();
                let mut blocks = BTreeMap::new();
                for w in 0..act.order {
                    let empty = Vec::new();
                    let cur_b = blocks_cur.get(&w).unwrap_or(&empty);
                    let prev_b = blocks_prev
                        .as_ref()
                        .and_then(|m| m.get(&w))
                        .unwrap_or(&empty);
                    let reps = self.cohomology_from_bases(n, e, prev_b, cur_b)?;
                    if !reps.is_empty() {
                        blocks.insert(w, reps.len());
                    }
                    classes.extend(reps.into_iter().map(|representative| CohomologyClass {
                        representative,
                        xi_weight: Some(w),
                    }));
                }
                Ok(Cohomology {
                    n,
                    degree: e,
                    dim: classes.len(),
                    classes,
                    blocks: Some(blocks),
                })
            }
        }
    }

    /// Cohomology of a single ξ-weight block.
    pub fn cohomology_block(
        &self,
        n: usize,
        e: i64,
        weight: u32,
    ) -> Result<Cohomology, InstabilityError> {
        let act = self.action.as_ref().expect("complex carries no action");
        let cur = self.cochain_space(n, e);
        let blocks_cur = equiv::weight_split(act, &self.wedges[n], &cur);
        let empty = Vec::new();
        let cur_b = blocks_cur.get(&weight).unwrap_or(&empty);
        let prev_b = if n == 0 {
            Vec::new()
        } else {
            let sp = self.cochain_space(n - 1, e);
            equiv::weight_split(act, &self.wedges[n - 1], &sp)
                .remove(&weight)
                .unwrap_or_default()
        };
        let reps = self.cohomology_from_bases(n, e, &prev_b, cur_b)?;
        Ok(Cohomology {
            n,
            degree: e,
            dim: reps.len(),
            classes: reps
                .into_iter()
                .map(|representative| CohomologyClass {
                    representative,
                    xi_weight: Some(weight),
                })
                .collect(),
            blocks: None,
        })
    }

    /// Solves `cocycle = d(ω)` over `C^{n-1}_e`; `Some` holds the coefficient
    /// vector of ω in the cochain-space basis (restricted to a weight block
    /// when given).
    pub fn coboundary_witness(
        &self,
        cocycle: &Cochain,
        weight_block: Option<u32>,
    ) -> Result<Option<Vec<Rational>>, InstabilityError> {
        let (n, e) = (cocycle.n, cocycle.degree);
        if n == 0 {
            return Ok(cocycle.is_zero().then(Vec::new));
        }
        let prev = self.cochain_space(n - 1, e);
        let prev_basis: Vec<Cochain> = match weight_block {
            None => prev.basis.clone(),
            Some(w) => {
                let act = self.action.as_ref().expect("weight block needs an action");
                equiv::weight_split(act, &self.wedges[n - 1], &prev)
                    .remove(&w)
                    .unwrap_or_default()
            }
        };
        let amb = self.ambient_dim(n, e);
        let mut mat = QMatrix::new(amb, prev_basis.len());
        for (j, b) in prev_basis.iter().enumerate() {
            let db = self.differential(b);
            for (i, v) in self.ambient_coords(&db).iter().enumerate() {
                if !v.is_zero() {
                    mat.set(i, j, v.clone());
                }
            }
        }
        let rhs = self.ambient_coords(cocycle);
        Ok(mat.solve(&rhs).expect("dimensions match"))
    }

    /// Coordinates of a cocycle's class against the representatives of
    /// `H^n_e` (or of its weight block), together with the coboundary flag.
    pub fn class_coordinates(
        &self,
        cocycle: &Cochain,
        weight_block: Option<u32>,
    ) -> Result<ClassCoordinates, InstabilityError> {
        let (n, e) = (cocycle.n, cocycle.degree);
        let coh = match weight_block {
            None => self.cohomology(n, e)?,
            Some(w) => self.cohomology_block(n, e, w)?,
        };
        // columns: images of the incoming basis, then the representatives
        let amb = self.ambient_dim(n, e);
        let mut cols: Vec<Vec<Rational>> = Vec::new();
        if n > 0 {
            let prev = self.cochain_space(n - 1, e);
            let prev_basis: Vec<Cochain> = match weight_block {
                None => prev.basis,
                Some(w) => {
                    let act = self.action.as_ref().expect("weight block needs an action");
                    equiv::weight_split(act, &self.wedges[n - 1], &prev)
                        .remove(&w)
                        .unwrap_or_default()
                }
            };
            for b in &prev_basis {
                cols.push(self.ambient_coords(&self.differential(b)));
            }
        }
        let n_im = cols.len();
        for cl in &coh.classes {
            cols.push(self.ambient_coords(&cl.representative));
        }
        let mut mat = QMatrix::new(amb, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    mat.set(i, j, v.clone());
                }
            }
        }
        let sol = mat
            .solve(&self.ambient_coords(cocycle))
            .expect("dimensions match")
            .unwrap_or_else(|| {
                panic!("input at (n={n}, e={e}) is not a cocycle of the computed space")
            });
        let class_coords: Vec<Rational> = sol[n_im..].to_vec();
        Ok(ClassCoordinates {
            coboundary: class_coords.iter().all(|c| c.is_zero()),
            coordinates: class_coords,
            h_dim: coh.dim,
        })
    }
}

/// Coordinates of a cocycle in cohomology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCoordinates {
    pub coordinates: Vec<Rational>,
    pub coboundary: bool,
    pub h_dim: usize,
}

/// A cohomology class with a chosen cocycle representative.
#[derive(Debug, Clone)]
pub struct CohomologyClass {
    pub representative: Cochain,
    pub xi_weight: Option<u32>,
}

/// Cohomology at one `(n, e)`: total dimension, representatives, and (with
/// an action) the dimension of each nonzero ξ-weight block.
#[derive(Debug, Clone)]
pub struct Cohomology {
    pub n: usize,
    pub degree: i64,
    pub dim: usize,
    pub classes: Vec<CohomologyClass>,
    pub blocks: Option<BTreeMap<u32, usize>>,
}

/// Cohomology dimensions over a degree window for `n = 0..=max_n`.
pub fn dimension_table(
    cx: &Complex,
    max_n: usize,
    window: (i64, i64),
) -> Result<BTreeMap<(usize, i64), usize>, InstabilityError> {
    let mut out = BTreeMap::new();
    for n in 0..=max_n {
        for e in window.0..=window.1 {
            out.insert((n, e), cx.cohomology(n, e)?.dim);
        }
    }
    Ok(out)
}

/// A dimension discrepancy between two presentation bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundMismatch {
    pub n: usize,
    pub degree: i64,
    pub dim_low: usize,
    pub dim_high: usize,
}

/// Recomputes the cohomology table at `bound` and `bound + 2` and reports
/// every dimension that differs. A nonempty result means the syzygy harvest
/// was not saturated at the lower bound and results cannot be trusted.
pub fn compare_presentation_bounds(
    alg: &WeightedAlgebra,
    action: Option<&CyclicActionType>,
    bound: i64,
    max_n: usize,
    window: (i64, i64),
) -> Result<Vec<BoundMismatch>, BuildError> {
    let low = Complex::build(alg.clone(), action.cloned(), bound)?;
    let high = Complex::build(alg.clone(), action.cloned(), bound + 2)?;
    let table_low = dimension_table(&low, max_n, window)
        .map_err(|e| BuildError::Deriv(instability_to_deriv(e)))?;
    let table_high = dimension_table(&high, max_n, window)
        .map_err(|e| BuildError::Deriv(instability_to_deriv(e)))?;
    let mut mismatches = Vec::new();
    for ((n, e), dim_low) in &table_low {
        let dim_high = table_high[&(*n, *e)];
        if *dim_low != dim_high {
            mismatches.push(BoundMismatch {
                n: *n,
                degree: *e,
                dim_low: *dim_low,
                dim_high,
            });
        }
    }
    Ok(mismatches)
}

fn instability_to_deriv(_e: InstabilityError) -> DerivError {
    DerivError::NotInSpan
}
