//! Diagonal cyclic group actions and the induced `Z/m` weight grading.
//!
//! An action of type `(m; m1, m2, m3)` scales `x_i` by `ξ^{m_i}` for a
//! primitive `m`-th root of unity `ξ`. The root itself is never materialized
//! as a field element: every object carries a residue weight mod `m`
//! (monomials add exponent weights, `∂_i` contributes `-m_i`, wedges add,
//! a homomorphism's weight is value weight minus source weight), and acting
//! by `g^k` multiplies a pure-weight-`t` object by the formal phase `ξ^{kt}`.
//! Invariants are exactly the weight-0 part, and the Reynolds average drops
//! out of the root-of-unity sum identity `Σ_k ξ^{kt} = m·[m | t]`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::deriv::Derivation;
use crate::lrc::{Cochain, Cohomology, Complex, InstabilityError};
use crate::presmod::{CochainSpaceBasis, WedgePresentation};
use crate::wpoly::{Monomial, Poly, WeightedAlgebra, NVARS};

/// The data `(m; m1, m2, m3)` of a diagonal cyclic action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicActionType {
    pub order: u32,
    pub exponents: [u32; NVARS],
}

/// A residue weight mod the group order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct XiWeight(pub u32);

impl CyclicActionType {
    /// Normalizes the exponents into residues mod `order`.
    pub fn new(order: u32, exponents: [u32; NVARS]) -> Self {
        assert!(order >= 1, "group order must be at least 1");
        CyclicActionType {
            order,
            exponents: exponents.map(|e| e % order),
        }
    }

    /// Reduces an integer into `0..order`.
    pub fn reduce(&self, t: i64) -> u32 {
        t.rem_euclid(self.order as i64) as u32
    }

    /// Weight of a monomial: `Σ α_i m_i mod m`.
    pub fn monomial_weight(&self, m: &Monomial) -> u32 {
        let s: i64 = m
            .0
            .iter()
            .zip(&self.exponents)
            .map(|(&a, &e)| a as i64 * e as i64)
            .sum();
        self.reduce(s)
    }

    /// Common weight of all terms, or `None` when the polynomial is zero or
    /// mixes weights.
    pub fn poly_weight(&self, p: &Poly) -> Option<u32> {
        let mut it = p.terms().map(|(m, _)| self.monomial_weight(m));
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }

    /// True when every term has weight `t` (the zero polynomial qualifies).
    pub fn poly_has_weight(&self, p: &Poly, t: u32) -> bool {
        p.terms().all(|(m, _)| self.monomial_weight(m) == t)
    }

    /// Weight of a derivation: coefficient on `∂_i` carries weight
    /// `wt(a_i) - m_i`. `None` when mixed; the zero derivation reports 0.
    pub fn derivation_weight(&self, d: &Derivation) -> Option<u32> {
        let mut weight: Option<u32> = None;
        for i in 0..NVARS {
            for (m, _) in d.coeffs()[i].terms() {
                let w = self.reduce(self.monomial_weight(m) as i64 - self.exponents[i] as i64);
                match weight {
                    None => weight = Some(w),
                    Some(prev) if prev != w => return None,
                    _ => {}
                }
            }
        }
        weight.or(Some(0))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ActionError {
    #[error("action of type ({order}; {m1}, {m2}, {m3}) is incompatible with f: offending exponents {offending:?}")]
    Incompatible {
        order: u32,
        m1: u32,
        m2: u32,
        m3: u32,
        offending: Vec<[u16; NVARS]>,
    },
}

/// Outcome of validating an action against the defining polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionReport {
    /// All support exponents of `f` satisfy `Σ α_i m_i ≡ 0 (mod m)`, so
    /// `g*f = f` and the action descends to `A`.
    pub compatible: bool,
    /// The stronger condition `Σ α_i m_i = m` exactly, for every support
    /// exponent of `f`.
    pub strict_equality: bool,
    /// `m1 + m2 + m3 - m`, the exponent governing how the group scales the
    /// distinguished cohomology generators.
    pub residue_sum_raw: i64,
    /// The same quantity reduced mod `m`.
    pub residue_sum: u32,
    /// The per-monomial sums `Σ α_i m_i` over the support of `f`.
    pub support_sums: Vec<i64>,
}

/// Validates that the action is compatible with `f`: every exponent vector
/// in the support must satisfy `Σ α_i m_i ≡ 0 (mod m)`. Also reports whether
/// the stronger exact equality `Σ α_i m_i = m` holds.
pub fn check_action(
    alg: &WeightedAlgebra,
    act: &CyclicActionType,
) -> Result<ActionReport, ActionError> {
    let m = act.order;
    let mut support_sums = Vec::new();
    let mut offending = Vec::new();
    for (mono, _) in alg.f().terms() {
        let s: i64 = mono
            .0
            .iter()
            .zip(&act.exponents)
            .map(|(&a, &e)| a as i64 * e as i64)
            .sum();
        support_sums.push(s);
        if s % m as i64 != 0 {
            offending.push(mono.0);
        }
    }
    if !offending.is_empty() {
        return Err(ActionError::Incompatible {
            order: m,
            m1: act.exponents[0],
            m2: act.exponents[1],
            m3: act.exponents[2],
            offending,
        });
    }
    let strict = support_sums.iter().all(|&s| s == m as i64);
    let raw = act.exponents.iter().map(|&e| e as i64).sum::<i64>() - m as i64;
    Ok(ActionReport {
        compatible: true,
        strict_equality: strict,
        residue_sum_raw: raw,
        residue_sum: act.reduce(raw),
        support_sums,
    })
}

// ------------------------------------------------------------------
// Weights of cochains
// ------------------------------------------------------------------

/// Weight of the ambient coordinate (slot `I`, monomial `μ`):
/// `wt(μ) - wt(W_I)` mod `m`.
fn slot_weight(act: &CyclicActionType, wedge: &WedgePresentation, slot: usize, m: &Monomial) -> u32 {
    let gw = wedge.gens[slot]
        .xi_weight
        .expect("wedge built without an action has no weights");
    act.reduce(act.monomial_weight(m) as i64 - gw as i64)
}

/// Splits a cochain into its pure-weight components.
pub fn split_cochain(
    act: &CyclicActionType,
    wedge: &WedgePresentation,
    c: &Cochain,
) -> BTreeMap<u32, Cochain> {
    let mut parts: BTreeMap<u32, Cochain> = BTreeMap::new();
    for (slot, value) in c.values.iter().enumerate() {
        for (m, co) in value.terms() {
            let w = slot_weight(act, wedge, slot, m);
            let part = parts
                .entry(w)
                .or_insert_with(|| Cochain::zero(c.n, c.degree, c.values.len()));
            part.values[slot] = part.values[slot].add(&Poly::from_monomial(*m, co.clone()));
        }
    }
    parts
}

/// The weight `t` with `g*c = ξ^t c`, or `None` for a mixed cochain (which
/// callers handle by splitting). The zero cochain reports weight 0.
pub fn xi_weight_of_cochain(
    act: &CyclicActionType,
    wedge: &WedgePresentation,
    c: &Cochain,
) -> Option<XiWeight> {
    let parts = split_cochain(act, wedge, c);
    match parts.len() {
        0 => Some(XiWeight(0)),
        1 => parts.keys().next().map(|&w| XiWeight(w)),
        _ => None,
    }
}

/// Direct-sum decomposition of a cochain space by ξ-weight.
///
/// Each returned block is a basis of the pure-weight subspace; block
/// dimensions always sum to the total dimension because the relation
/// constraints are weight-homogeneous.
pub fn weight_split(
    act: &CyclicActionType,
    wedge: &WedgePresentation,
    space: &CochainSpaceBasis,
) -> BTreeMap<u32, Vec<Cochain>> {
    let mut blocks: BTreeMap<u32, Vec<Cochain>> = BTreeMap::new();
    let mut reducers: BTreeMap<u32, crate::qlinalg::RowReducer> = BTreeMap::new();
    for b in &space.basis {
        for (w, part) in split_cochain(act, wedge, b) {
            let coords = space.ambient_coords(&part);
            let rr = reducers.entry(w).or_default();
            if rr.insert(&coords) {
                blocks.entry(w).or_default().push(part);
            }
        }
    }
    let total: usize = blocks.values().map(Vec::len).sum();
    assert_eq!(
        total,
        space.dim(),
        "weight blocks must decompose the cochain space"
    );
    blocks
}

/// Reynolds projection: the weight-0 component of a cochain. Idempotent, and
/// its output is exactly invariant.
pub fn reynolds(act: &CyclicActionType, wedge: &WedgePresentation, c: &Cochain) -> Cochain {
    split_cochain(act, wedge, c)
        .remove(&0)
        .unwrap_or_else(|| Cochain::zero(c.n, c.degree, c.values.len()))
}

/// A formal sum `Σ_p ξ^p · c_p` of cochains tagged by powers of the group
/// character. Components arising from group actions are weight-pure, so
/// equality of the tagged maps coincides with equality after evaluating `ξ`
/// at any primitive `m`-th root of unity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhasedCochain {
    pub order: u32,
    pub parts: BTreeMap<u32, Cochain>,
}

impl PhasedCochain {
    pub fn zero(order: u32) -> Self {
        PhasedCochain {
            order,
            parts: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, phase: u32, c: Cochain) {
        if c.is_zero() {
            return;
        }
        let phase = phase % self.order;
        match self.parts.remove(&phase) {
            Some(prev) => {
                let sum = prev.add(&c);
                if !sum.is_zero() {
                    self.parts.insert(phase, sum);
                }
            }
            None => {
                self.parts.insert(phase, c);
            }
        }
    }

}

/// The action of `g^k` on a cochain, as formal weight bookkeeping: the
/// weight-`t` component of `c` acquires the phase `ξ^{k t}`.
pub fn act_on_cochain(
    act: &CyclicActionType,
    wedge: &WedgePresentation,
    k: u32,
    c: &Cochain,
) -> PhasedCochain {
    let mut out = PhasedCochain::zero(act.order);
    for (t, part) in split_cochain(act, wedge, c) {
        out.insert(act.reduce(k as i64 * t as i64), part);
    }
    out
}

/// Elementwise Reynolds average `(1/m) Σ_k g^k * c`, carried out coordinate
/// by coordinate with the exact sum identity `Σ_{k<m} ξ^{k t} = m·[m | t]`.
/// Independent code path from [`reynolds`]; used to cross-check it.
pub fn reynolds_by_averaging(
    act: &CyclicActionType,
    wedge: &WedgePresentation,
    c: &Cochain,
) -> Cochain {
    let mut out = Cochain::zero(c.n, c.degree, c.values.len());
    for (slot, value) in c.values.iter().enumerate() {
        for (m, co) in value.terms() {
            let t = slot_weight(act, wedge, slot, m);
            // (1/m) * Σ_k ξ^{kt} equals 1 when t ≡ 0 and 0 otherwise
            if t == 0 {
                out.values[slot] = out.values[slot].add(&Poly::from_monomial(*m, co.clone()));
            }
        }
    }
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EquivError {
    #[error(
        "invariant cohomology requires the quotient-map hypothesis to be asserted \
         (set galois_asserted); without it the weight-0 dimensions are not \
         interpretable as cohomology of the quotient"
    )]
    GaloisNotAsserted,
    #[error("the complex was built without a group action")]
    NoAction,
    #[error(transparent)]
    Instability(#[from] InstabilityError),
}

/// Cohomology of the weight-0 (invariant) subcomplex at `(n, e)`.
///
/// Requires the caller to assert the Galois hypothesis under which the
/// invariant dimensions compute the cohomology of the quotient singularity.
pub fn invariant_cohomology(
    cx: &Complex,
    n: usize,
    e: i64,
    galois_asserted: bool,
) -> Result<Cohomology, EquivError> {
    if !galois_asserted {
        return Err(EquivError::GaloisNotAsserted);
    }
    if cx.action().is_none() {
        return Err(EquivError::NoAction);
    }
    Ok(cx.cohomology_block(n, e, 0)?)
}

// ------------------------------------------------------------------
// Pseudo-reflections
// ------------------------------------------------------------------

/// A group element whose fixed subspace has codimension exactly one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoReflection {
    /// Which power of the cyclic generator.
    pub power: u32,
    pub fixed_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoReflectionReport {
    pub order: u32,
    pub nvars: usize,
    pub reflections: Vec<PseudoReflection>,
}

impl PseudoReflectionReport {
    pub fn has_pseudo_reflections(&self) -> bool {
        !self.reflections.is_empty()
    }
}

/// Scans all nontrivial powers of a diagonal action `diag(ξ^{e_1}, ...)` for
/// pseudo-reflections: the fixed space of `g^k` is spanned by the coordinates
/// with `k e_i ≡ 0 (mod m)`, and a codimension-one fixed space flags `g^k`.
pub fn pseudo_reflection_report(order: u32, exponents: &[u32]) -> PseudoReflectionReport {
    let n = exponents.len();
    let mut reflections = Vec::new();
    for k in 1..order {
        let fixed = exponents
            .iter()
            .filter(|&&e| (k as u64 * e as u64) % order as u64 == 0)
            .count();
        if n - fixed == 1 {
            reflections.push(PseudoReflection {
                power: k,
                fixed_dim: fixed,
            });
        }
    }
    PseudoReflectionReport {
        order,
        nvars: n,
        reflections,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wpoly::parse_poly;

    fn cubic() -> WeightedAlgebra {
        WeightedAlgebra::new(parse_poly("x1^3+x2^3+x3^3").unwrap(), [1, 1, 1]).unwrap()
    }

    #[test]
    fn check_action_cubic_z3() {
        let alg = cubic();
        let act = CyclicActionType::new(3, [1, 1, 2]);
        let rep = check_action(&alg, &act).unwrap();
        assert!(rep.compatible);
        // support sums are 3, 3 and 6: all divisible by 3, but x3^3 gives 6,
        // so the exact equality "= m" fails even though the action is valid
        assert!(!rep.strict_equality);
        assert_eq!(rep.residue_sum_raw, 1);
        assert_eq!(rep.residue_sum, 1);

        let act = CyclicActionType::new(3, [1, 1, 1]);
        let rep = check_action(&alg, &act).unwrap();
        assert!(rep.compatible && rep.strict_equality);

        // trivial group is always compatible
        let act = CyclicActionType::new(1, [0, 0, 0]);
        assert!(check_action(&alg, &act).unwrap().compatible);
    }

    #[test]
    fn check_action_incompatible() {
        let alg = cubic();
        // x1^3 has weight sum 3, odd, so no Z/2 action scaling only x1
        let act = CyclicActionType::new(2, [1, 0, 0]);
        let err = check_action(&alg, &act).unwrap_err();
        match err {
            ActionError::Incompatible { offending, .. } => {
                assert_eq!(offending, vec![[3, 0, 0]]);
            }
        }
    }

    #[test]
    fn monomial_and_derivation_weights() {
        let alg = cubic();
        let act = CyclicActionType::new(3, [1, 1, 2]);
        assert_eq!(act.monomial_weight(&Monomial([1, 1, 1])), 1);
        assert_eq!(act.monomial_weight(&Monomial([0, 0, 3])), 0);
        let euler = Derivation::euler(&alg);
        assert_eq!(act.derivation_weight(&euler), Some(0));
        let d = Derivation::new(
            &alg,
            [
                parse_poly("x2^2").unwrap(),
                parse_poly("-x1^2").unwrap(),
                Poly::zero(),
            ],
        )
        .unwrap();
        // coefficient weight 2, ∂-weight -1: pure weight 1
        assert_eq!(act.derivation_weight(&d), Some(1));
    }

    #[test]
    fn cochain_weight_examples() {
        let alg = cubic();
        let act = CyclicActionType::new(3, [1, 1, 2]);
        let cx = crate::lrc::Complex::build_default(alg, Some(act.clone())).unwrap();

        // the constant 0-cochain has weight 0
        let one = Cochain {
            n: 0,
            degree: 0,
            values: vec![Poly::one()],
        };
        assert_eq!(
            xi_weight_of_cochain(&act, cx.wedge(0), &one),
            Some(XiWeight(0))
        );

        // a 1-cochain with value x1 on the Euler slot has weight m1 = 1
        let mut c = Cochain::zero(1, 1, cx.wedge(1).gens.len());
        c.values[0] = parse_poly("x1").unwrap();
        assert_eq!(
            xi_weight_of_cochain(&act, cx.wedge(1), &c),
            Some(XiWeight(1))
        );

        // C^0 at degree 3 is 9-dimensional and its weight blocks sum to 9
        let sp = cx.cochain_space(0, 3);
        assert_eq!(sp.dim(), 9);
        let blocks = weight_split(&act, cx.wedge(0), &sp);
        assert_eq!(blocks.values().map(Vec::len).sum::<usize>(), 9);
        assert!(blocks.len() > 1);
    }

    #[test]
    fn reynolds_examples() {
        let alg = cubic();
        let act = CyclicActionType::new(3, [1, 1, 2]);
        let cx = crate::lrc::Complex::build_default(alg, Some(act.clone())).unwrap();
        let w0 = cx.wedge(0);

        // invariant input is fixed (x1^2 x2 has weight 1+1+1 = 3 ≡ 0)
        let inv = Cochain {
            n: 0,
            degree: 3,
            values: vec![parse_poly("x1^2*x2").unwrap()],
        };
        assert_eq!(reynolds(&act, w0, &inv), inv);

        // pure weight-1 input averages to zero
        let pure = Cochain {
            n: 0,
            degree: 1,
            values: vec![parse_poly("x1").unwrap()],
        };
        assert!(reynolds(&act, w0, &pure).is_zero());

        // mixed input keeps exactly its weight-0 part, and the elementwise
        // averaging oracle agrees
        let mixed = Cochain {
            n: 0,
            degree: 3,
            values: vec![parse_poly("x1^2*x2 + x1*x2*x3 + x3^3").unwrap()],
        };
        let r = reynolds(&act, w0, &mixed);
        assert_eq!(r.values[0], parse_poly("x1^2*x2 + x3^3").unwrap());
        assert_eq!(r, reynolds_by_averaging(&act, w0, &mixed));
        assert_eq!(reynolds(&act, w0, &r), r);

        // g^0 acts as the identity
        let acted = act_on_cochain(&act, w0, 0, &mixed);
        let mut expected = PhasedCochain::zero(3);
        expected.insert(0, mixed.clone());
        assert_eq!(acted, expected);
    }

    #[test]
    fn trivial_group_invariants_equal_full_cohomology() {
        let alg = cubic();
        let act = CyclicActionType::new(1, [0, 0, 0]);
        let cx = crate::lrc::Complex::build_default(alg.clone(), Some(act.clone())).unwrap();
        let plain = crate::lrc::Complex::build_default(alg, None).unwrap();
        for n in 0..=2 {
            for e in [-1, 0, 1] {
                assert_eq!(
                    invariant_cohomology(&cx, n, e, true).unwrap().dim,
                    plain.cohomology(n, e).unwrap().dim,
                    "n={n}, e={e}"
                );
            }
        }
        // a single weight block carrying the whole space
        let sp = cx.cochain_space(1, 0);
        let blocks = weight_split(&act, cx.wedge(1), &sp);
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[&0].len(), sp.dim());
    }

    #[test]
    fn invariant_cohomology_requires_the_hypothesis_flag() {
        let alg = cubic();
        let act = CyclicActionType::new(3, [1, 1, 2]);
        let cx = crate::lrc::Complex::build_default(alg, Some(act)).unwrap();
        assert_eq!(
            invariant_cohomology(&cx, 1, 0, false).unwrap_err(),
            EquivError::GaloisNotAsserted
        );
        assert_eq!(invariant_cohomology(&cx, 0, 0, true).unwrap().dim, 1);
        assert_eq!(invariant_cohomology(&cx, 1, 0, true).unwrap().dim, 0);
    }

    #[test]
    fn pseudo_reflection_detection() {
        // diag(ξ, ξ, ξ^2) for m = 3: no power fixes a plane
        let rep = pseudo_reflection_report(3, &[1, 1, 2]);
        assert!(!rep.has_pseudo_reflections());
        // diag(ξ, 1) for m >= 2 is itself a pseudo-reflection
        let rep = pseudo_reflection_report(4, &[1, 0]);
        assert!(rep.has_pseudo_reflections());
        assert_eq!(rep.reflections[0].power, 1);
        // the identity-only group is vacuously clean
        let rep = pseudo_reflection_report(1, &[0, 0]);
        assert!(!rep.has_pseudo_reflections());
    }
}
