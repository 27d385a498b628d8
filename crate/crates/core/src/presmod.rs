//! Graded presentations of `Der(A)` and its exterior powers, and degreewise
//! bases of the cochain carrier spaces `Hom(∧^n Der(A), A)`.
//!
//! A presentation consists of homogeneous module generators together with
//! homogeneous syzygies harvested degree by degree up to a configurable
//! bound. Exterior powers inherit generators (index-sorted wedges) and
//! relations (syzygies wedged with generator subsets). A cochain space at
//! internal degree `e` is then the exact kernel of the stacked relation
//! constraints on the value slots.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::deriv::{self, Derivation};
use crate::equiv::CyclicActionType;
use crate::lrc::Cochain;
use crate::qlinalg::{QMatrix, Rational, RowReducer};
use crate::wpoly::{Monomial, Poly, WeightedAlgebra, NVARS};

/// A homogeneous syzygy of the chosen generators: `Σ coeffs[i] * G_i = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub coeffs: Vec<Poly>,
    pub degree: i64,
    pub xi_weight: Option<u32>,
}

/// Generators and relations of `Der(A)`, harvested up to `bound`.
#[derive(Debug, Clone)]
pub struct DerPresentation {
    pub gens: Vec<Derivation>,
    pub gen_degrees: Vec<i64>,
    pub gen_weights: Option<Vec<u32>>,
    pub relations: Vec<Relation>,
    pub bound: i64,
    pub action: Option<CyclicActionType>,
}

impl DerPresentation {
    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }
}

/// Builds the presentation: generators via greedy degreewise extraction,
/// then a generating set of homogeneous relations, also degreewise with a
/// span oracle so that only new syzygies are kept. Every harvested relation
/// is re-verified by recombination.
pub fn build_presentation(
    alg: &WeightedAlgebra,
    action: Option<&CyclicActionType>,
    bound: i64,
) -> DerPresentation {
    let gens = deriv::der_generators(alg, action, bound);
    build_presentation_with_gens(alg, action, bound, gens)
}

/// Same harvest but over a caller-supplied generator list. Used to check
/// that cochain dimensions do not depend on the generator choice.
pub fn build_presentation_with_gens(
    alg: &WeightedAlgebra,
    action: Option<&CyclicActionType>,
    bound: i64,
    gens: Vec<Derivation>,
) -> DerPresentation {
    let gen_degrees: Vec<i64> = gens
        .iter()
        .map(|g| g.degree().expect("generators are homogeneous"))
        .collect();
    let gen_weights = action.map(|act| {
        gens.iter()
            .map(|g| {
                act.derivation_weight(g)
                    .expect("generators are xi-homogeneous under the action")
            })
            .collect()
    });

    let mut relations: Vec<Relation> = Vec::new();
    let min_deg = gen_degrees.iter().min().copied().unwrap_or(0);
    for t in min_deg..=bound {
        let candidates = relation_kernel_at(alg, &gens, &gen_degrees, t);
        if candidates.is_empty() {
            continue;
        }
        // span of lower-degree relations at degree t
        let mut span = RowReducer::new();
        for r in &relations {
            for mono in alg.graded_basis(t - r.degree) {
                let mult: Vec<Poly> = r
                    .coeffs
                    .iter()
                    .map(|c| alg.normal_form(&c.mul_monomial(&mono)))
                    .collect();
                span.insert(&relation_coords(alg, &gen_degrees, &mult, t));
            }
        }
        let candidates: Vec<Vec<Poly>> = match action {
            None => candidates,
            Some(act) => candidates
                .into_iter()
                .flat_map(|r| split_relation_by_weight(act, &gen_weights, r))
                .collect(),
        };
        for coeffs in candidates {
            if coeffs.iter().all(Poly::is_zero) {
                continue;
            }
            if span.insert(&relation_coords(alg, &gen_degrees, &coeffs, t)) {
                debug_assert!(recombines_to_zero(alg, &gens, &coeffs));
                let xi_weight = action.and_then(|act| {
                    relation_weight(act, gen_weights.as_ref().unwrap(), &coeffs)
                });
                relations.push(Relation {
                    coeffs,
                    degree: t,
                    xi_weight,
                });
            }
        }
    }

    DerPresentation {
        gens,
        gen_degrees,
        gen_weights,
        relations,
        bound,
        action: action.cloned(),
    }
}

/// All relations of exact degree `t`: kernel of the evaluation map
/// `(c_1..c_k) -> Σ c_i G_i` on homogeneous coefficient tuples.
fn relation_kernel_at(
    alg: &WeightedAlgebra,
    gens: &[Derivation],
    gen_degrees: &[i64],
    t: i64,
) -> Vec<Vec<Poly>> {
    let w = alg.weights();
    let slot_bases: Vec<Vec<Monomial>> = gen_degrees
        .iter()
        .map(|&wg| alg.graded_basis(t - wg))
        .collect();
    let ncols: usize = slot_bases.iter().map(Vec::len).sum();
    if ncols == 0 {
        return Vec::new();
    }
    // rows: stacked coordinates of the three derivation coefficient slots
    let row_bases: Vec<Vec<Monomial>> =
        (0..NVARS).map(|l| alg.graded_basis(t + w.vars[l])).collect();
    let row_index: Vec<BTreeMap<Monomial, usize>> = row_bases
        .iter()
        .map(|b| b.iter().enumerate().map(|(i, m)| (*m, i)).collect())
        .collect();
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
    for (g, basis) in gens.iter().zip(&slot_bases) {
        for mono in basis {
            for l in 0..NVARS {
                let image = alg.normal_form(&g.coeffs()[l].mul_monomial(mono));
                for (m, c) in image.terms() {
                    mat.add_to(row_offsets[l] + row_index[l][m], col, c);
                }
            }
            col += 1;
        }
    }
    mat.kernel_basis()
        .into_iter()
        .map(|v| {
            let mut coeffs = Vec::with_capacity(gens.len());
            let mut k = 0;
            for basis in &slot_bases {
                let mut p = Poly::zero();
                for mono in basis {
                    if !v[k].is_zero() {
                        p = p.add(&Poly::from_monomial(*mono, v[k].clone()));
                    }
                    k += 1;
                }
                coeffs.push(p);
            }
            coeffs
        })
        .collect()
}

/// Stacked coordinates of a relation vector over the coefficient slot bases
/// at relation degree `t`.
fn relation_coords(
    alg: &WeightedAlgebra,
    gen_degrees: &[i64],
    coeffs: &[Poly],
    t: i64,
) -> Vec<Rational> {
    let mut out = Vec::new();
    for (c, &wg) in coeffs.iter().zip(gen_degrees) {
        out.extend(alg.coords(c, t - wg));
    }
    out
}

fn recombines_to_zero(alg: &WeightedAlgebra, gens: &[Derivation], coeffs: &[Poly]) -> bool {
    let mut acc = Derivation::zero();
    for (g, c) in gens.iter().zip(coeffs) {
        acc = acc.add(alg, &g.mul_poly(alg, c));
    }
    acc.is_zero()
}

fn split_relation_by_weight(
    act: &CyclicActionType,
    gen_weights: &Option<Vec<u32>>,
    coeffs: Vec<Poly>,
) -> Vec<Vec<Poly>> {
    let weights = gen_weights.as_ref().expect("weights present with action");
    let mut parts: BTreeMap<u32, Vec<Poly>> = BTreeMap::new();
    let n = coeffs.len();
    for (i, c) in coeffs.iter().enumerate() {
        for (m, co) in c.terms() {
            let wt = act.reduce(act.monomial_weight(m) as i64 + weights[i] as i64);
            let part = parts.entry(wt).or_insert_with(|| vec![Poly::zero(); n]);
            part[i] = part[i].add(&Poly::from_monomial(*m, co.clone()));
        }
    }
    parts.into_values().collect()
}

fn relation_weight(
    act: &CyclicActionType,
    gen_weights: &[u32],
    coeffs: &[Poly],
) -> Option<u32> {
    let mut weight: Option<u32> = None;
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let cw = act.poly_weight(c)?;
        let total = act.reduce(cw as i64 + gen_weights[i] as i64);
        match weight {
            None => weight = Some(total),
            Some(prev) if prev != total => return None,
            _ => {}
        }
    }
    weight.or(Some(0))
}

// ------------------------------------------------------------------
// Exterior powers
// ------------------------------------------------------------------

/// A wedge of presentation generators, `G_{i_1} ∧ ... ∧ G_{i_n}` with
/// strictly increasing indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedgeGen {
    pub indices: Vec<usize>,
    pub degree: i64,
    pub xi_weight: Option<u32>,
}

/// A relation among wedge generators, with one coefficient per generator.
#[derive(Debug, Clone)]
pub struct WedgeRelation {
    pub coeffs: Vec<Poly>,
    pub degree: i64,
}

/// Presentation of `∧^n Der(A)` induced from the presentation of `Der(A)`.
#[derive(Debug, Clone)]
pub struct WedgePresentation {
    pub n: usize,
    pub gens: Vec<WedgeGen>,
    pub relations: Vec<WedgeRelation>,
    index: BTreeMap<Vec<usize>, usize>,
}

impl WedgePresentation {
    pub fn gen_index(&self, indices: &[usize]) -> Option<usize> {
        self.index.get(indices).copied()
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // advance to next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// The induced presentation of the `n`-th exterior power.
///
/// `n = 0` is the free rank-one module in degree zero, `n = 1` mirrors the
/// input presentation, and `n` beyond the generator count yields the zero
/// presentation. Relations are the syzygies of `Der(A)` wedged with every
/// `(n-1)`-subset of generators.
pub fn wedge_presentation(pres: &DerPresentation, n: usize) -> WedgePresentation {
    let g = pres.num_gens();
    if n == 0 {
        let gens = vec![WedgeGen {
            indices: Vec::new(),
            degree: 0,
            xi_weight: pres.gen_weights.as_ref().map(|_| 0),
        }];
        return WedgePresentation {
            n,
            index: BTreeMap::from([(Vec::new(), 0)]),
            gens,
            relations: Vec::new(),
        };
    }
    let combos = combinations(g, n);
    let gens: Vec<WedgeGen> = combos
        .iter()
        .map(|c| WedgeGen {
            indices: c.clone(),
            degree: c.iter().map(|&i| pres.gen_degrees[i]).sum(),
            xi_weight: pres.gen_weights.as_ref().map(|ws| {
                let act = pres.action.as_ref().expect("weights imply an action");
                act.reduce(c.iter().map(|&i| ws[i] as i64).sum())
            }),
        })
        .collect();
    let index: BTreeMap<Vec<usize>, usize> = combos
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i))
        .collect();

    let mut relations = Vec::new();
    for rel in &pres.relations {
        for subset in combinations(g, n - 1) {
            let mut coeffs = vec![Poly::zero(); gens.len()];
            let mut nonzero = false;
            for i in 0..g {
                if rel.coeffs[i].is_zero() || subset.contains(&i) {
                    continue;
                }
                let swaps = subset.iter().filter(|&&j| j < i).count();
                let sign = if swaps % 2 == 0 { 1 } else { -1 };
                let mut merged = subset.clone();
                merged.push(i);
                merged.sort_unstable();
                let gi = index[&merged];
                let term = if sign == 1 {
                    rel.coeffs[i].clone()
                } else {
                    rel.coeffs[i].neg()
                };
                coeffs[gi] = coeffs[gi].add(&term);
                nonzero = true;
            }
            if nonzero && coeffs.iter().any(|c| !c.is_zero()) {
                let degree =
                    rel.degree + subset.iter().map(|&j| pres.gen_degrees[j]).sum::<i64>();
                relations.push(WedgeRelation { coeffs, degree });
            }
        }
    }

    WedgePresentation {
        n,
        gens,
        relations,
        index,
    }
}

// ------------------------------------------------------------------
// Cochain spaces
// ------------------------------------------------------------------

/// A basis of the internal-degree-`e` part of `Hom(∧^n Der(A), A)`.
///
/// Basis cochains assign a value in `A_{w_I + e}` to each wedge generator of
/// degree `w_I` and annihilate every harvested relation exactly.
#[derive(Debug, Clone)]
pub struct CochainSpaceBasis {
    pub n: usize,
    pub degree: i64,
    pub slot_bases: Vec<Vec<Monomial>>,
    pub basis: Vec<Cochain>,
}

impl CochainSpaceBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.slot_bases.iter().map(Vec::len).sum()
    }

    /// Stacked monomial coordinates of a cochain's values over the slot bases.
    pub fn ambient_coords(&self, c: &Cochain) -> Vec<Rational> {
        assert_eq!(c.values.len(), self.slot_bases.len(), "slot count mismatch");
        let mut out = Vec::with_capacity(self.ambient_dim());
        for (v, basis) in c.values.iter().zip(&self.slot_bases) {
            let index: BTreeMap<&Monomial, usize> =
                basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
            let mut coords = vec![Rational::zero(); basis.len()];
            for (m, co) in v.terms() {
                coords[*index
                    .get(m)
                    .unwrap_or_else(|| panic!("value outside slot basis at degree {}", self.degree))] =
                    co.clone();
            }
            out.extend(coords);
        }
        out
    }

    /// Linear combination of basis cochains.
    pub fn combine(&self, coeffs: &[Rational]) -> Cochain {
        assert_eq!(coeffs.len(), self.basis.len());
        let mut acc = Cochain::zero(self.n, self.degree, self.slot_bases.len());
        for (b, c) in self.basis.iter().zip(coeffs) {
            if !c.is_zero() {
                acc = acc.add(&b.scale(c));
            }
        }
        acc
    }
}

/// Computes the cochain space at internal degree `e` as the kernel of the
/// stacked relation-constraint system over the value-slot coordinates.
pub fn cochain_space(
    alg: &WeightedAlgebra,
    wedge: &WedgePresentation,
    e: i64,
) -> CochainSpaceBasis {
    let slot_bases: Vec<Vec<Monomial>> = wedge
        .gens
        .iter()
        .map(|g| alg.graded_basis(g.degree + e))
        .collect();
    let slot_offsets: Vec<usize> = slot_bases
        .iter()
        .scan(0, |acc, b| {
            let o = *acc;
            *acc += b.len();
            Some(o)
        })
        .collect();
    let ncols: usize = slot_bases.iter().map(Vec::len).sum();
    if ncols == 0 {
        return CochainSpaceBasis {
            n: wedge.n,
            degree: e,
            slot_bases,
            basis: Vec::new(),
        };
    }

    let mut rows_total = 0usize;
    let mut row_plans = Vec::new();
    for rel in &wedge.relations {
        let target = alg.graded_basis(rel.degree + e);
        if target.is_empty() {
            continue;
        }
        let index: BTreeMap<Monomial, usize> =
            target.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        row_plans.push((rel, rows_total, index));
        rows_total += target.len();
    }

    let mut mat = QMatrix::new(rows_total, ncols);
    for (rel, base_row, index) in &row_plans {
        for (slot, coeff) in rel.coeffs.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for (k, mono) in slot_bases[slot].iter().enumerate() {
                let image = alg.normal_form(&coeff.mul_monomial(mono));
                for (m, c) in image.terms() {
                    mat.add_to(base_row + index[m], slot_offsets[slot] + k, c);
                }
            }
        }
    }

    let basis = mat
        .kernel_basis()
        .into_iter()
        .map(|v| {
            let mut values = Vec::with_capacity(slot_bases.len());
            let mut k = 0;
            for basis in &slot_bases {
                let mut p = Poly::zero();
                for mono in basis {
                    if !v[k].is_zero() {
                        p = p.add(&Poly::from_monomial(*mono, v[k].clone()));
                    }
                    k += 1;
                }
                values.push(p);
            }
            Cochain {
                n: wedge.n,
                degree: e,
                values,
            }
        })
        .collect();

    CochainSpaceBasis {
        n: wedge.n,
        degree: e,
        slot_bases,
        basis,
    }
}

/// Checks that a cochain's values annihilate every relation of the wedge
/// presentation (i.e. defines a genuine module homomorphism on the
/// presented module).
pub fn satisfies_relations(
    alg: &WeightedAlgebra,
    wedge: &WedgePresentation,
    c: &Cochain,
) -> bool {
    wedge.relations.iter().all(|rel| {
        let mut acc = Poly::zero();
        for (coeff, value) in rel.coeffs.iter().zip(&c.values) {
            if !coeff.is_zero() && !value.is_zero() {
                acc = acc.add(&coeff.mul(value));
            }
        }
        alg.normal_form(&acc).is_zero()
    })
}
