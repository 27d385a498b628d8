//! The derivation module `Der(A)` of the quotient algebra.
//!
//! A derivation is stored as the coefficient triple `(a1, a2, a3)` of
//! `D = a1*∂1 + a2*∂2 + a3*∂3` with each coefficient in normal form. The
//! triple must be tangent to `f`, i.e. `a1*f1 + a2*f2 + a3*f3` must vanish
//! in `A` (so `D(f) ∈ (f)` and `D` descends to the quotient). Two triples
//! give the same derivation exactly when they agree componentwise in `A`,
//! so normal forms are canonical representatives.

use num_traits::Zero;
use thiserror::Error;

use crate::equiv::CyclicActionType;
use crate::qlinalg::{QMatrix, Rational, RowReducer};
use crate::wpoly::{Monomial, Poly, WeightedAlgebra, NVARS};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DerivError {
    #[error("coefficient triple is not tangent to f: defect {0}")]
    NotTangent(String),
    #[error("derivation is not in the span of the given generators; raise the degree bound")]
    NotInSpan,
    #[error("operation requires a homogeneous derivation")]
    NotHomogeneous,
}

/// A derivation of `A`, as a normal-form coefficient triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    coeffs: [Poly; NVARS],
    degree: Option<i64>,
}

impl Derivation {
    /// Builds a derivation from a coefficient triple, normalizing and
    /// checking tangency to `f`.
    pub fn new(alg: &WeightedAlgebra, coeffs: [Poly; NVARS]) -> Result<Self, DerivError> {
        let coeffs = coeffs.map(|c| alg.normal_form(&c));
        let jac = alg.jacobian();
        let mut defect = Poly::zero();
        for i in 0..NVARS {
            defect = defect.add(&coeffs[i].mul(&jac[i]));
        }
        let defect = alg.normal_form(&defect);
        if !defect.is_zero() {
            return Err(DerivError::NotTangent(defect.to_string()));
        }
        Ok(Self::new_unchecked(alg, coeffs))
    }

    /// Internal constructor for triples already known tangent (results of
    /// brackets, kernel computations on tangency systems, scalar multiples).
    /// Tangency is still asserted in debug builds.
    pub(crate) fn new_unchecked(alg: &WeightedAlgebra, coeffs: [Poly; NVARS]) -> Self {
        let coeffs = coeffs.map(|c| alg.normal_form(&c));
        debug_assert!({
            let jac = alg.jacobian();
            let mut defect = Poly::zero();
            for i in 0..NVARS {
                defect = defect.add(&coeffs[i].mul(&jac[i]));
            }
            alg.normal_form(&defect).is_zero()
        });
        let w = alg.weights();
        let mut degree: Option<i64> = None;
        let mut homogeneous = true;
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match c.homogeneous_degree(w) {
                Some(d) => {
                    let e = d - w.vars[i];
                    if let Some(prev) = degree {
                        if prev != e {
                            homogeneous = false;
                        }
                    } else {
                        degree = Some(e);
                    }
                }
                None => homogeneous = false,
            }
        }
        Derivation {
            coeffs,
            degree: if homogeneous { degree } else { None },
        }
    }

    pub fn zero() -> Self {
        Derivation {
            coeffs: [Poly::zero(), Poly::zero(), Poly::zero()],
            degree: Some(0),
        }
    }

    /// The Euler derivation `Σ d_i x_i ∂_i`; internal degree 0, and it acts
    /// on a homogeneous element of degree `e` as multiplication by `e`.
    pub fn euler(alg: &WeightedAlgebra) -> Self {
        let w = alg.weights();
        let coeffs = [0, 1, 2].map(|i| {
            Poly::from_monomial(Monomial::var(i), Rational::from_integer(w.vars[i].into()))
        });
        Derivation::new(alg, coeffs).expect("Euler derivation is tangent")
    }

    pub fn coeffs(&self) -> &[Poly; NVARS] {
        &self.coeffs
    }

    /// Internal degree when the derivation is homogeneous: each coefficient
    /// `a_i` is weighted homogeneous of degree `degree + d_i`. The zero
    /// derivation reports degree 0.
    pub fn degree(&self) -> Option<i64> {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    /// Applies the derivation to a ring element: `NF(Σ a_i ∂p/∂x_i)`.
    pub fn apply(&self, alg: &WeightedAlgebra, p: &Poly) -> Poly {
        let mut out = Poly::zero();
        for i in 0..NVARS {
            if self.coeffs[i].is_zero() {
                continue;
            }
            out = out.add(&self.coeffs[i].mul(&p.derivative(i)));
        }
        alg.normal_form(&out)
    }

    /// Lie bracket `[D, D']`, with coefficients `D(a'_i) - D'(a_i)`.
    /// Degrees add for homogeneous inputs.
    pub fn bracket(&self, alg: &WeightedAlgebra, other: &Derivation) -> Derivation {
        let coeffs = [0, 1, 2].map(|i| {
            self.apply(alg, &other.coeffs[i])
                .sub(&other.apply(alg, &self.coeffs[i]))
        });
        Derivation::new_unchecked(alg, coeffs)
    }

    pub fn add(&self, alg: &WeightedAlgebra, other: &Derivation) -> Derivation {
        let coeffs = [0, 1, 2].map(|i| self.coeffs[i].add(&other.coeffs[i]));
        Derivation::new_unchecked(alg, coeffs)
    }

    pub fn scale(&self, alg: &WeightedAlgebra, c: &Rational) -> Derivation {
        let coeffs = [0, 1, 2].map(|i| self.coeffs[i].scale(c));
        Derivation::new_unchecked(alg, coeffs)
    }

    /// Multiplies by a ring element (the `A`-module structure).
    pub fn mul_poly(&self, alg: &WeightedAlgebra, p: &Poly) -> Derivation {
        let coeffs = [0, 1, 2].map(|i| alg.nf_mul(&self.coeffs[i], p));
        Derivation::new_unchecked(alg, coeffs)
    }

    /// Stacked coordinates of the coefficient triple over the monomial bases
    /// of `A_{e+d_1} × A_{e+d_2} × A_{e+d_3}` for internal degree `e`.
    pub(crate) fn coords_at(&self, alg: &WeightedAlgebra, e: i64) -> Vec<Rational> {
        let w = alg.weights();
        let mut out = Vec::new();
        for i in 0..NVARS {
            out.extend(alg.coords(&self.coeffs[i], e + w.vars[i]));
        }
        out
    }
}

/// A basis of the internal-degree-`e` part of `Der(A)`, found as the kernel
/// of the tangency system on coefficient coordinates.
pub fn der_graded_basis(alg: &WeightedAlgebra, e: i64) -> Vec<Derivation> {
    let w = alg.weights();
    let jac = alg.jacobian();
    let slot_bases: Vec<Vec<Monomial>> =
        (0..NVARS).map(|i| alg.graded_basis(e + w.vars[i])).collect();
    let ncols: usize = slot_bases.iter().map(Vec::len).sum();
    if ncols == 0 {
        return Vec::new();
    }
    let target = alg.graded_basis(e + w.total);
    let tindex: std::collections::BTreeMap<Monomial, usize> =
        target.iter().enumerate().map(|(i, m)| (*m, i)).collect();

    let mut mat = QMatrix::new(target.len(), ncols);
    let mut col = 0;
    for i in 0..NVARS {
        for mono in &slot_bases[i] {
            let image = alg.normal_form(&jac[i].mul_monomial(mono));
            for (m, c) in image.terms() {
                mat.add_to(tindex[m], col, c);
            }
            col += 1;
        }
    }

    mat.kernel_basis()
        .into_iter()
        .map(|v| {
            let mut coeffs = [Poly::zero(), Poly::zero(), Poly::zero()];
            let mut k = 0;
            for i in 0..NVARS {
                for mono in &slot_bases[i] {
                    if !v[k].is_zero() {
                        coeffs[i] = coeffs[i].add(&Poly::from_monomial(*mono, v[k].clone()));
                    }
                    k += 1;
                }
            }
            Derivation::new_unchecked(alg, coeffs)
        })
        .collect()
}

/// Splits a derivation into ξ-weight-homogeneous components. Tangency is
/// preserved because the tangency constraint respects the weight grading.
pub(crate) fn split_by_xi_weight(
    alg: &WeightedAlgebra,
    act: &CyclicActionType,
    d: &Derivation,
) -> Vec<(u32, Derivation)> {
    let mut parts: std::collections::BTreeMap<u32, [Poly; NVARS]> = Default::default();
    for i in 0..NVARS {
        for (m, c) in d.coeffs[i].terms() {
            let wt = act.reduce(act.monomial_weight(m) as i64 - act.exponents[i] as i64);
            let entry = parts
                .entry(wt)
                .or_insert_with(|| [Poly::zero(), Poly::zero(), Poly::zero()]);
            entry[i] = entry[i].add(&Poly::from_monomial(*m, c.clone()));
        }
    }
    parts
        .into_iter()
        .map(|(wt, coeffs)| (wt, Derivation::new_unchecked(alg, coeffs)))
        .collect()
}

/// Greedy extraction of homogeneous module generators of `Der(A)` by
/// increasing internal degree, up to `bound`.
///
/// At each degree the graded basis is filtered through a span oracle seeded
/// with all monomial multiples of previously chosen generators; only vectors
/// that grow the span are kept. When an action is given, candidates are first
/// split so that every generator is also ξ-weight homogeneous.
pub fn der_generators(
    alg: &WeightedAlgebra,
    action: Option<&CyclicActionType>,
    bound: i64,
) -> Vec<Derivation> {
    let w = alg.weights();
    let min_degree = -w.vars.iter().max().copied().unwrap_or(0);
    let mut gens: Vec<Derivation> = Vec::new();
    for e in min_degree..=bound {
        let basis = der_graded_basis(alg, e);
        if basis.is_empty() {
            continue;
        }
        let mut span = RowReducer::new();
        for g in &gens {
            let wg = g.degree().expect("generators are homogeneous");
            for mono in alg.graded_basis(e - wg) {
                let mult = g.mul_poly(alg, &Poly::from_monomial(mono, Rational::from_integer(1.into())));
                span.insert(&mult.coords_at(alg, e));
            }
        }
        let candidates: Vec<Derivation> = match action {
            None => basis,
            Some(act) => basis
                .iter()
                .flat_map(|d| split_by_xi_weight(alg, act, d).into_iter().map(|(_, p)| p))
                .collect(),
        };
        for cand in candidates {
            if cand.is_zero() {
                continue;
            }
            if span.insert(&cand.coords_at(alg, e)) {
                gens.push(cand);
            }
        }
    }
    gens
}

/// Expresses a homogeneous derivation as `Σ c_i G_i` over the given
/// homogeneous generators, returning the coefficient vector. Any valid
/// solution is acceptable; well-definedness of downstream cochain
/// evaluations does not depend on the choice.
pub fn express_in_generators(
    alg: &WeightedAlgebra,
    d: &Derivation,
    gens: &[Derivation],
) -> Result<Vec<Poly>, DerivError> {
    express_with_kernel(alg, d, gens).map(|(c, _)| c)
}

/// Like [`express_in_generators`] but also returns a basis of coefficient
/// vectors recombining to zero, i.e. the ambiguity of the expression. Used
/// to verify that cochain evaluation does not depend on the chosen solution.
pub fn express_with_kernel(
    alg: &WeightedAlgebra,
    d: &Derivation,
    gens: &[Derivation],
) -> Result<(Vec<Poly>, Vec<Vec<Poly>>), DerivError> {
    if d.is_zero() {
        return Ok((vec![Poly::zero(); gens.len()], Vec::new()));
    }
    let e = d.degree().ok_or(DerivError::NotHomogeneous)?;
    let w = alg.weights();

    // columns: one per (generator, monomial of A_{e - w_i})
    let gen_bases: Vec<Vec<Monomial>> = gens
        .iter()
        .map(|g| alg.graded_basis(e - g.degree().expect("homogeneous generators")))
        .collect();
    let ncols: usize = gen_bases.iter().map(Vec::len).sum();

    // rows: stacked coordinates of the three coefficient slots
    let row_bases: Vec<Vec<Monomial>> =
        (0..NVARS).map(|i| alg.graded_basis(e + w.vars[i])).collect();
    let row_offsets: Vec<usize> = row_bases
        .iter()
        .scan(0, |acc, b| {
            let o = *acc;
            *acc += b.len();
            Some(o)
        })
        .collect();
    let nrows: usize = row_bases.iter().map(Vec::len).sum();

    let mut mat = QMatrix::new(nrows, ncols);
    let mut col = 0;
    for (g, basis) in gens.iter().zip(&gen_bases) {
        for mono in basis {
            for i in 0..NVARS {
                let image = alg.normal_form(&g.coeffs()[i].mul_monomial(mono));
                let index: std::collections::BTreeMap<&Monomial, usize> = row_bases[i]
                    .iter()
                    .enumerate()
                    .map(|(k, m)| (m, k))
                    .collect();
                for (m, c) in image.terms() {
                    mat.add_to(row_offsets[i] + index[m], col, c);
                }
            }
            col += 1;
        }
    }
    let rhs = d.coords_at(alg, e);
    let sol = mat.solve(&rhs).expect("row dimension matches by construction");
    let Some(sol) = sol else {
        return Err(DerivError::NotInSpan);
    };

    let unpack = |v: &[Rational]| -> Vec<Poly> {
        let mut out = Vec::with_capacity(gens.len());
        let mut k = 0;
        for basis in &gen_bases {
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
    };
    let kernel = mat.kernel_basis().iter().map(|v| unpack(v)).collect();
    Ok((unpack(&sol), kernel))
}
