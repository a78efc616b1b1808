//! Executable classification of `H`-free modules by their generator
//! quotient: the cyclic case `Ē ≅ Σ^n F2` (suspended ideals `Σ^d u·H` for a
//! product of linear forms `u`), the split case `Ē ≅ F2 ⊕ Σ^n F2`, and the
//! two-solution case `Ē ≅ J(2)` — together with independent exhaustive
//! searches, a degreewise checker for two-step resolutions, equivariant
//! models for representation disks and spheres, and a catalog of named
//! modules used throughout the test suites.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::f2lin::{F2Matrix, F2Vec, Span};
use crate::functors::{induced_quotient_map, quotient_e};
use crate::hv::{all_forms, monomials_of_degree, Character, LinearForm, Poly};
use crate::steenrod::{binom_mod2, brown_gitler};
#[cfg(test)]
use crate::steenrod::FiniteAModule;
use crate::umod::{
    ensure_free_type, is_hfree, is_isomorphic_bounded, quotient_by, realize, reduced_quotient_dims,
    submodule, validate, FreeElement, GradedMap, IsoOutcome, Presentation, RePresentError,
    Realized, Verdict, Witness,
};

/// Isomorphism class of an `H`-free module whose generator quotient is a
/// single F2 class: `Σ^d u·H` with `u = ∏ θ_i^{α_i}` a product of nonzero
/// linear forms.  The classified degree is `d + Σ α_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SigmaNClass {
    pub suspension: u32,
    /// Factors `(θ, α)` in ascending form order.
    pub factors: Vec<(LinearForm, u32)>,
}

impl SigmaNClass {
    pub fn u_degree(&self) -> u32 {
        self.factors.iter().map(|&(_, a)| a).sum()
    }

    pub fn degree(&self) -> u32 {
        self.suspension + self.u_degree()
    }

    /// The product `u` itself.
    pub fn u_poly(&self, rank: u32) -> Poly {
        self.factors
            .iter()
            .fold(Poly::one(rank), |acc, &(form, mult)| acc.mul(&form.as_poly().pow(mult)))
    }

    /// The total square `∏ (1 + θ_i)^{α_i}` whose graded pieces are the
    /// `Sq` table of the generator of `u·H`.
    pub fn total_square(&self, rank: u32) -> Poly {
        self.factors.iter().fold(Poly::one(rank), |acc, &(form, mult)| {
            acc.mul(&Poly::one(rank).add(&form.as_poly()).pow(mult))
        })
    }

    fn u_string(&self) -> String {
        if self.factors.is_empty() {
            return String::from("1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(form, mult)| {
                let base = form.to_string();
                let wrapped =
                    if base.contains('+') { format!("({base})") } else { base };
                if mult == 1 {
                    wrapped
                } else {
                    format!("{wrapped}^{mult}")
                }
            })
            .collect();
        parts.join("*")
    }
}

impl fmt::Display for SigmaNClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={}, u={}", self.suspension, self.u_string())
    }
}

/// The free-type presentation of `Σ^d u·H`: one generator in the class
/// degree whose table is the graded pieces of `∏ (1 + θ_i)^{α_i}`.
pub fn class_presentation(class: &SigmaNClass, rank: u32) -> Presentation {
    let n = class.degree();
    let mut pres = Presentation::free(rank, vec![(String::from("g"), n)]);
    let total = class.total_square(rank);
    for i in 1..=n {
        let p = total.homogeneous_part(i);
        if !p.is_zero() {
            pres.set_sq(0, i, FreeElement::generator(rank, 1, 0).mul_poly(&p));
        }
    }
    pres
}

/// Failures of the cyclic and split classifiers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SigmaError {
    NotHFree(Witness),
    /// The generator quotient does not have the expected shape; carries the
    /// quotient dimensions actually found.
    WrongQuotient { dims: Vec<usize> },
    /// Re-presentation needs a deeper truncation.
    Truncation { needed: u32 },
    /// The total-square polynomial is not a product of 1-shifted linear
    /// forms.  A consistent table always factors, so this diagnoses an
    /// Adem-inconsistent presentation.
    NotAProductOfForms { polynomial: String },
    /// No change of generator splits off the free summand.
    NotSplittable,
    /// Rebuilding the classified model did not reproduce the input up to
    /// isomorphism within the search budget.
    RoundTrip,
}

impl fmt::Display for SigmaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SigmaError::NotHFree(w) => write!(f, "not H-free: {w}"),
            SigmaError::WrongQuotient { dims } => {
                write!(f, "generator quotient has the wrong shape: {dims:?}")
            }
            SigmaError::Truncation { needed } => {
                write!(f, "truncation too small; need degree {needed}")
            }
            SigmaError::NotAProductOfForms { polynomial } => {
                write!(f, "total square {polynomial} is not a product of 1+form factors")
            }
            SigmaError::NotSplittable => write!(f, "no generator change splits the summand"),
            SigmaError::RoundTrip => write!(f, "round-trip isomorphism check failed"),
        }
    }
}

fn map_represent_error(err: RePresentError) -> SigmaError {
    match err {
        RePresentError::NotHFree(w) => SigmaError::NotHFree(w),
        RePresentError::TruncationTooSmall { needed } => SigmaError::Truncation { needed },
    }
}

/// Read the class off a free-type presentation with a single generator of
/// degree `n`: form the total square `P = 1 + Σ p_i` from the table
/// `Sq^i g = p_i·g`, factor its top piece into linear forms, and confirm
/// that the factorization reproduces `P` exactly.
fn classify_cyclic_table(free: &Presentation, n: u32) -> Result<SigmaNClass, SigmaError> {
    let rank = free.rank();
    let mut total = Poly::one(rank);
    for i in 1..=n {
        if let Some(entry) = free.sq_entry(0, i) {
            total = total.add(entry.poly(0));
        }
    }
    let top_degree = total.max_degree().unwrap_or(0);
    let top = total.homogeneous_part(top_degree);
    let factors = crate::hv::factor_linear(&top)
        .ok_or_else(|| SigmaError::NotAProductOfForms { polynomial: format!("{total}") })?;
    let class = SigmaNClass { suspension: n - top_degree, factors };
    if class.total_square(rank) != total {
        return Err(SigmaError::NotAProductOfForms { polynomial: format!("{total}") });
    }
    Ok(class)
}

/// Classify an `H`-free module whose generator quotient is `Σ^n F2`:
/// returns the unique `(d, u)` with `E ≅ Σ^d u·H`, after verifying the
/// model round-trips to the input by a bounded isomorphism search.
pub fn classify_sigma_n(
    pres: &Presentation,
    trunc: u32,
    budget: u64,
) -> Result<SigmaNClass, SigmaError> {
    let e = realize(pres, trunc);
    if let Verdict::Fails(w) = is_hfree(&e) {
        return Err(SigmaError::NotHFree(w));
    }
    let q = reduced_quotient_dims(&e);
    if q.iter().sum::<usize>() != 1 {
        return Err(SigmaError::WrongQuotient { dims: q });
    }
    let n = q.iter().position(|&d| d > 0).unwrap() as u32;
    let free = ensure_free_type(pres, trunc).map_err(map_represent_error)?;
    let class = classify_cyclic_table(&free, n)?;
    let model = realize(&class_presentation(&class, pres.rank()), trunc);
    match is_isomorphic_bounded(&e, &model, budget) {
        IsoOutcome::Isomorphic(_) => Ok(class),
        _ => Err(SigmaError::RoundTrip),
    }
}

/// Result of splitting `E ≅ H ⊕ Σ^d u·H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitClassification {
    /// The polynomial `c` with `g' = g + c·z` making the high summand
    /// `Sq`-closed (`z` the degree-0 generator).
    pub corrector: String,
    pub class: SigmaNClass,
}

/// Classify an `H`-free module whose generator quotient is `F2 ⊕ Σ^n F2`:
/// splits off the free summand on the degree-0 generator by correcting the
/// degree-`n` generator, then classifies the complement.  The correction
/// `g' = g + c·z` must satisfy `Sq^i(c) + p_i·c = q_i` for every `i`, a
/// linear system over F2 solved on the monomial basis of `H^n`.
pub fn classify_f2_plus_sigma(
    pres: &Presentation,
    trunc: u32,
    budget: u64,
) -> Result<SplitClassification, SigmaError> {
    let e = realize(pres, trunc);
    if let Verdict::Fails(w) = is_hfree(&e) {
        return Err(SigmaError::NotHFree(w));
    }
    let q = reduced_quotient_dims(&e);
    let support: Vec<(usize, usize)> =
        q.iter().enumerate().filter(|&(_, &d)| d > 0).map(|(n, &d)| (n, d)).collect();
    let shape_ok = support.len() == 2
        && support[0] == (0, 1)
        && support[1].1 == 1;
    if !shape_ok {
        return Err(SigmaError::WrongQuotient { dims: q });
    }
    let n = support[1].0 as u32;
    let rank = pres.rank();
    let free = ensure_free_type(pres, trunc).map_err(map_represent_error)?;
    let k0 = (0..free.gen_count()).find(|&k| free.gen_degree(k) == 0).unwrap();
    let k1 = (0..free.gen_count()).find(|&k| free.gen_degree(k) == n).unwrap();
    let mut p_table: Vec<Poly> = vec![Poly::zero(rank)];
    let mut q_table: Vec<Poly> = vec![Poly::zero(rank)];
    for i in 1..=n {
        match free.sq_entry(k1, i) {
            Some(entry) => {
                p_table.push(entry.poly(k1).clone());
                q_table.push(entry.poly(k0).clone());
            }
            None => {
                p_table.push(Poly::zero(rank));
                q_table.push(Poly::zero(rank));
            }
        }
    }

    // Solve Sq^i(c) + p_i·c = q_i over the monomial basis of H^n.
    let unknowns = monomials_of_degree(rank, n);
    let col_counts: Vec<usize> = (1..=n).map(|i| monomials_of_degree(rank, n + i).len()).collect();
    let total_cols: usize = col_counts.iter().sum();
    let mut rows: Vec<F2Vec> = Vec::with_capacity(unknowns.len());
    for mono in &unknowns {
        let m = Poly::monomial(rank, mono.clone());
        let mut row = F2Vec::zeros(total_cols);
        let mut offset = 0;
        for i in 1..=n {
            let img = m.sq(i).add(&p_table[i as usize].mul(&m));
            let coords = poly_coords(&img, rank, n + i);
            for b in coords.ones() {
                row.set(offset + b, true);
            }
            offset += col_counts[(i - 1) as usize];
        }
        rows.push(row);
    }
    let mut rhs = F2Vec::zeros(total_cols);
    let mut offset = 0;
    for i in 1..=n {
        let coords = poly_coords(&q_table[i as usize], rank, n + i);
        for b in coords.ones() {
            rhs.set(offset + b, true);
        }
        offset += col_counts[(i - 1) as usize];
    }
    let solution = F2Matrix::from_rows(total_cols, rows)
        .preimage(&rhs)
        .ok_or(SigmaError::NotSplittable)?;
    let corrector = solution
        .ones()
        .into_iter()
        .fold(Poly::zero(rank), |acc, b| acc.add(&Poly::monomial(rank, unknowns[b].clone())));

    // Classify the corrected cyclic summand and round-trip the direct sum.
    let mut cyclic = Presentation::free(rank, vec![(String::from("g"), n)]);
    for i in 1..=n {
        if !p_table[i as usize].is_zero() {
            cyclic.set_sq(0, i, FreeElement::generator(rank, 1, 0).mul_poly(&p_table[i as usize]));
        }
    }
    let class = classify_cyclic_table(&cyclic, n)?;
    let mut model = Presentation::free(rank, vec![(String::from("z"), 0), (String::from("g"), n)]);
    let total = class.total_square(rank);
    for i in 1..=n {
        let p = total.homogeneous_part(i);
        if !p.is_zero() {
            model.set_sq(1, i, FreeElement::generator(rank, 2, 1).mul_poly(&p));
        }
    }
    match is_isomorphic_bounded(&e, &realize(&model, trunc), budget) {
        IsoOutcome::Isomorphic(_) => Ok(SplitClassification { corrector: format!("{corrector}"), class }),
        _ => Err(SigmaError::RoundTrip),
    }
}

/// Coordinates of a homogeneous polynomial over the ascending monomial
/// basis of its degree.
fn poly_coords(p: &Poly, rank: u32, degree: u32) -> F2Vec {
    let basis = monomials_of_degree(rank, degree);
    let mut v = F2Vec::zeros(basis.len());
    for mono in p.terms() {
        let pos = basis
            .binary_search(mono)
            .expect("polynomial must be homogeneous of the stated degree");
        v.set(pos, true);
    }
    v
}

/// All classes in a fixed degree: multisets of nonzero linear forms of
/// total degree `k ≤ n` with suspension `d = n − k`, each with the model
/// presentation built from it.
pub fn enumerate_sigma_n(n: u32, rank: u32) -> Vec<(SigmaNClass, Presentation)> {
    fn multisets(count: usize, start: usize, remaining: u32, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        for idx in start..count {
            cur.push(idx);
            multisets(count, idx, remaining - 1, cur, out);
            cur.pop();
        }
    }
    let forms = all_forms(rank);
    let mut out = Vec::new();
    for k in 0..=n {
        let mut chosen: Vec<Vec<usize>> = Vec::new();
        multisets(forms.len(), 0, k, &mut Vec::new(), &mut chosen);
        for ms in chosen {
            let mut factors: Vec<(LinearForm, u32)> = Vec::new();
            for &idx in &ms {
                match factors.last_mut() {
                    Some((f, c)) if *f == forms[idx] => *c += 1,
                    _ => factors.push((forms[idx], 1)),
                }
            }
            let class = SigmaNClass { suspension: n - k, factors };
            let pres = class_presentation(&class, rank);
            out.push((class, pres));
        }
    }
    out
}

/// The bounded isomorphism search gave up before deciding a bucket.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudgetExceeded;

/// Greedy isomorphism bucketing: representatives with class sizes, in
/// first-seen order.
pub fn bucket_by_isomorphism(
    candidates: &[Presentation],
    trunc: u32,
    budget: u64,
) -> Result<Vec<(Presentation, u32)>, SearchBudgetExceeded> {
    let mut reps: Vec<(Presentation, Realized, u32)> = Vec::new();
    for pres in candidates {
        let e = realize(pres, trunc);
        let mut placed = false;
        for (_, rep, count) in reps.iter_mut() {
            match is_isomorphic_bounded(&e, rep, budget) {
                IsoOutcome::Isomorphic(_) => {
                    *count += 1;
                    placed = true;
                    break;
                }
                IsoOutcome::NotIsomorphic => {}
                IsoOutcome::BudgetExceeded => return Err(SearchBudgetExceeded),
            }
        }
        if !placed {
            reps.push((pres.clone(), e, 1));
        }
    }
    Ok(reps.into_iter().map(|(p, _, c)| (p, c)).collect())
}

/// Outcome of an exhaustive table search.
#[derive(Clone, Debug)]
pub struct TableCensus {
    pub total: u64,
    pub valid: Vec<Presentation>,
    /// Bucket representatives with sizes.
    pub classes: Vec<(Presentation, u32)>,
}

/// Enumerate every `Sq` table on a free rank-one-generator module of
/// degree `n` over `H` (all subsets of the monomial basis in each table
/// degree), keep the consistent ones, and bucket them up to isomorphism.
pub fn search_sigma_tables(
    n: u32,
    rank: u32,
    trunc: u32,
    budget: u64,
) -> Result<TableCensus, SearchBudgetExceeded> {
    let bases: Vec<Vec<Vec<u32>>> = (1..=n).map(|i| monomials_of_degree(rank, i)).collect();
    let dims: Vec<usize> = bases.iter().map(|b| b.len()).collect();
    assert!(dims.iter().sum::<usize>() < 40, "table space too large to enumerate");
    let total: u64 = dims.iter().map(|&d| 1u64 << d).product();
    let mut valid = Vec::new();
    for code in 0..total {
        let mut rem = code;
        let mut pres = Presentation::free(rank, vec![(String::from("g"), n)]);
        for (ix, basis) in bases.iter().enumerate() {
            let mask = rem & ((1u64 << dims[ix]) - 1);
            rem >>= dims[ix];
            if mask == 0 {
                continue;
            }
            let mut p = Poly::zero(rank);
            for b in 0..dims[ix] {
                if mask >> b & 1 == 1 {
                    p = p.add(&Poly::monomial(rank, basis[b].clone()));
                }
            }
            pres.set_sq(0, (ix + 1) as u32, FreeElement::generator(rank, 1, 0).mul_poly(&p));
        }
        if validate(&pres, trunc).is_ok() {
            valid.push(pres);
        }
    }
    let classes = bucket_by_isomorphism(&valid, trunc, budget)?;
    Ok(TableCensus { total, valid, classes })
}

/// The two isomorphism classes of `H`-free modules with generator quotient
/// `J(2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum J2Class {
    /// `H ⊗ J(2)`.
    Tensor,
    /// The submodule of `H ⊕ ΣH` generated by `t·a + b` and `t²·a`.
    Exotic,
}

impl fmt::Display for J2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            J2Class::Tensor => write!(f, "tensor"),
            J2Class::Exotic => write!(f, "exotic"),
        }
    }
}

/// Failures of the `J(2)` solver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum J2Error {
    NotHFree(Witness),
    WrongQuotient { dims: Vec<usize> },
    /// Isomorphic to both models — impossible, so a hard failure.
    MatchedBoth,
    /// Isomorphic to neither model — contradicts the two-class theorem.
    MatchedNeither,
    Budget,
}

impl fmt::Display for J2Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            J2Error::NotHFree(w) => write!(f, "not H-free: {w}"),
            J2Error::WrongQuotient { dims } => {
                write!(f, "generator quotient is not J(2): {dims:?}")
            }
            J2Error::MatchedBoth => write!(f, "isomorphic to both reference solutions"),
            J2Error::MatchedNeither => write!(f, "isomorphic to neither reference solution"),
            J2Error::Budget => write!(f, "isomorphism search budget exceeded"),
        }
    }
}

/// Decide which of the two reference solutions an `H`-free module with
/// generator quotient `J(2)` is isomorphic to, by bounded isomorphism
/// search against both.  Exactly one must match.
pub fn solve_j2(pres: &Presentation, trunc: u32, budget: u64) -> Result<J2Class, J2Error> {
    let e = realize(pres, trunc);
    if let Verdict::Fails(w) = is_hfree(&e) {
        return Err(J2Error::NotHFree(w));
    }
    let bar = quotient_e(&e);
    if !bar.is_isomorphic(&brown_gitler(2, trunc)) {
        return Err(J2Error::WrongQuotient { dims: bar.dims().to_vec() });
    }
    let tensor = realize(&catalog("j2-tensor", &[], trunc).unwrap().presentation, trunc);
    let exotic = realize(&catalog("j2-exotic", &[], trunc).unwrap().presentation, trunc);
    let hits_tensor = match is_isomorphic_bounded(&e, &tensor, budget) {
        IsoOutcome::Isomorphic(_) => true,
        IsoOutcome::NotIsomorphic => false,
        IsoOutcome::BudgetExceeded => return Err(J2Error::Budget),
    };
    let hits_exotic = match is_isomorphic_bounded(&e, &exotic, budget) {
        IsoOutcome::Isomorphic(_) => true,
        IsoOutcome::NotIsomorphic => false,
        IsoOutcome::BudgetExceeded => return Err(J2Error::Budget),
    };
    match (hits_tensor, hits_exotic) {
        (true, false) => Ok(J2Class::Tensor),
        (false, true) => Ok(J2Class::Exotic),
        (true, true) => Err(J2Error::MatchedBoth),
        (false, false) => Err(J2Error::MatchedNeither),
    }
}

/// Outcome of the exhaustive `J(2)` search.
#[derive(Clone, Debug)]
pub struct J2Census {
    pub total_tables: u32,
    pub valid_tables: u32,
    /// Valid tables whose generator quotient is `J(2)`.
    pub candidates: Vec<Presentation>,
    /// Bucket representatives with sizes.
    pub classes: Vec<(Presentation, u32)>,
}

/// Enumerate every `Sq` table on the free rank-one `H`-module with
/// generators in degrees 1 and 2, keep the consistent ones whose generator
/// quotient is `J(2)`, and bucket them up to isomorphism.  The table
/// entries range over the full monomial bases:
///
/// `Sq^1 g1 ∈ {t·g1, g2}`,  `Sq^1 g2 ∈ {t²·g1, t·g2}`,  `Sq^2 g2 ∈ {t³·g1, t²·g2}`.
pub fn search_j2(trunc: u32, budget: u64) -> Result<J2Census, SearchBudgetExceeded> {
    let t = Poly::var(1, 1);
    let t2 = t.mul(&t);
    let t3 = t2.mul(&t);
    let g1 = FreeElement::generator(1, 2, 0);
    let g2 = FreeElement::generator(1, 2, 1);
    let mut valid_tables = 0;
    let mut candidates = Vec::new();
    for code in 0u32..64 {
        let bit = |b: u32| code >> b & 1 == 1;
        let mut pres =
            Presentation::free(1, vec![(String::from("g1"), 1), (String::from("g2"), 2)]);
        let entry = |terms: &[(bool, FreeElement)]| -> FreeElement {
            let mut acc = FreeElement::zero(1, 2);
            for (on, elem) in terms {
                if *on {
                    acc = acc.add(elem);
                }
            }
            acc
        };
        let sq1_g1 = entry(&[(bit(0), g1.mul_poly(&t)), (bit(1), g2.clone())]);
        let sq1_g2 = entry(&[(bit(2), g1.mul_poly(&t2)), (bit(3), g2.mul_poly(&t))]);
        let sq2_g2 = entry(&[(bit(4), g1.mul_poly(&t3)), (bit(5), g2.mul_poly(&t2))]);
        if !sq1_g1.is_zero() {
            pres.set_sq(0, 1, sq1_g1);
        }
        if !sq1_g2.is_zero() {
            pres.set_sq(1, 1, sq1_g2);
        }
        if !sq2_g2.is_zero() {
            pres.set_sq(1, 2, sq2_g2);
        }
        if validate(&pres, trunc).is_err() {
            continue;
        }
        valid_tables += 1;
        let bar = quotient_e(&realize(&pres, trunc));
        if bar.is_isomorphic(&brown_gitler(2, trunc)) {
            candidates.push(pres);
        }
    }
    let classes = bucket_by_isomorphism(&candidates, trunc, budget)?;
    Ok(J2Census { total_tables: 64, valid_tables, candidates, classes })
}

/// Degreewise check that `0 → E → I0 →(φ) I1` is exact at `I0` with the
/// expected induced map on generator quotients:
///
/// * all three presentations validate, and `I0` is free-type;
/// * `φ` is `H`-A-linear with the right degreewise shapes;
/// * the map induced by `φ` on generator quotients equals `quotient_map`;
/// * `ker φ`, realized as the submodule of `I0` it generates, is
///   isomorphic to `E` (bounded search).
///
/// With `I1 = 0` and `φ = 0` this checks exactly "E is isomorphic to
/// `H ⊗ Ē(I0)`", the uniqueness statement for modules with injective
/// generator quotient.
pub fn check_resolution(
    e_pres: &Presentation,
    i0_pres: &Presentation,
    i1_pres: &Presentation,
    phi: &GradedMap,
    quotient_map: &GradedMap,
    trunc: u32,
    budget: u64,
) -> Verdict {
    for (label, pres) in [("E", e_pres), ("I0", i0_pres), ("I1", i1_pres)] {
        if let Err(err) = validate(pres, trunc) {
            return Verdict::Fails(Witness {
                degree: 0,
                element: format!("{label} does not validate: {err}"),
            });
        }
    }
    if !i0_pres.is_free_type() {
        return Verdict::Fails(Witness {
            degree: 0,
            element: String::from("I0 must be a free-type presentation"),
        });
    }
    let e = realize(e_pres, trunc);
    let i0 = realize(i0_pres, trunc);
    let i1 = realize(i1_pres, trunc);
    for n in 0..=trunc {
        let m = phi.mat(n);
        if m.rows() != i0.dim(n) || m.cols() != i1.dim(n) {
            return Verdict::Fails(Witness {
                degree: n,
                element: format!(
                    "phi has shape {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    i0.dim(n),
                    i1.dim(n)
                ),
            });
        }
    }
    if !phi.is_ha_linear(&i0, &i1) {
        return Verdict::Fails(Witness {
            degree: 0,
            element: String::from("phi is not H-A-linear"),
        });
    }

    let induced = induced_quotient_map(phi, &i0, &i1);
    for n in 0..=trunc {
        if induced.mat(n) != quotient_map.mat(n) {
            return Verdict::Fails(Witness {
                degree: n,
                element: String::from("induced map on generator quotients differs"),
            });
        }
    }

    // Generators of ker φ, found by sweeping kernels in ascending degree
    // and closing under t and Sq inside I0 (the kernel of an H-A-linear
    // map is closed under both, so the closure never escapes it).
    let mut spans: Vec<Span> = (0..=trunc).map(|n| Span::new(i0.dim(n as u32))).collect();
    let mut kernel_gens: Vec<FreeElement> = Vec::new();
    for n in 0..=trunc {
        for v in phi.mat(n).left_kernel_basis() {
            if spans[n as usize].contains(&v) {
                continue;
            }
            let mut elem = FreeElement::zero(i0_pres.rank(), i0_pres.gen_count());
            for b in v.ones() {
                elem = elem.add(&i0.rep_element(n, b));
            }
            kernel_gens.push(elem);
            let mut work: Vec<(u32, F2Vec)> = vec![(n, v)];
            while let Some((m, w)) = work.pop() {
                if w.is_zero() || !spans[m as usize].insert(&w) {
                    continue;
                }
                for j in 1..=i0.rank() {
                    if m < trunc {
                        work.push((m + 1, i0.t(j, m).apply(&w)));
                    }
                }
                for i in 1..=(trunc - m) {
                    work.push((m + i, i0.sq(i, m).apply(&w)));
                }
            }
        }
    }
    let kernel = if kernel_gens.is_empty() {
        realize(&Presentation::free(i0_pres.rank(), Vec::new()), trunc)
    } else {
        realize(&submodule(i0_pres, kernel_gens), trunc)
    };
    for n in 0..=trunc {
        if kernel.dim(n) != e.dim(n) {
            return Verdict::Fails(Witness {
                degree: n,
                element: format!(
                    "ker phi has dimension {}, E has dimension {}",
                    kernel.dim(n),
                    e.dim(n)
                ),
            });
        }
    }
    match is_isomorphic_bounded(&e, &kernel, budget) {
        IsoOutcome::Isomorphic(_) => Verdict::Holds,
        IsoOutcome::NotIsomorphic => Verdict::Fails(Witness {
            degree: 0,
            element: String::from("ker phi is not isomorphic to E"),
        }),
        IsoOutcome::BudgetExceeded => Verdict::Fails(Witness {
            degree: 0,
            element: String::from("kernel isomorphism search budget exceeded"),
        }),
    }
}

/// A named presentation with a self-contained description.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub presentation: Presentation,
    pub note: String,
}

/// Equivariant model of a sum of one-dimensional characters: if every
/// character is nontrivial the relative model `e(ρ)·H` (one generator, the
/// Euler class, with table `∏(1 + θ_j)`); otherwise the sphere model
/// `H ⊕ Σ^{dim τ} e(σ)·H` where `τ` collects the trivial summands.
pub fn gysin_model(characters: &[Character]) -> CatalogEntry {
    assert!(!characters.is_empty(), "a representation needs at least one character");
    let rank = characters[0].rank();
    assert!(characters.iter().all(|c| c.rank() == rank), "characters of mixed rank");
    let forms: Vec<LinearForm> = characters.iter().filter_map(|c| c.form()).collect();
    let trivial_count = (characters.len() - forms.len()) as u32;
    let euler = forms.iter().fold(Poly::one(rank), |acc, f| acc.mul(&f.as_poly()));
    let total = forms
        .iter()
        .fold(Poly::one(rank), |acc, f| acc.mul(&Poly::one(rank).add(&f.as_poly())));
    let chars: Vec<String> = characters.iter().map(|c| format!("{c}")).collect();
    let chars = chars.join(", ");
    if trivial_count == 0 {
        let n = characters.len() as u32;
        let mut pres = Presentation::free(rank, vec![(String::from("g"), n)]);
        for i in 1..=n {
            let p = total.homogeneous_part(i);
            if !p.is_zero() {
                pres.set_sq(0, i, FreeElement::generator(rank, 1, 0).mul_poly(&p));
            }
        }
        CatalogEntry {
            name: String::from("gysin-relative"),
            presentation: pres,
            note: format!(
                "relative model of the disk of ({chars}): the ideal ({euler})·H, free on \
                 one generator with table from the total square of the Euler class"
            ),
        }
    } else {
        let n = trivial_count + forms.len() as u32;
        let mut pres =
            Presentation::free(rank, vec![(String::from("z"), 0), (String::from("g"), n)]);
        for i in 1..=n {
            let p = total.homogeneous_part(i);
            if !p.is_zero() {
                pres.set_sq(1, i, FreeElement::generator(rank, 2, 1).mul_poly(&p));
            }
        }
        CatalogEntry {
            name: String::from("gysin-sphere"),
            presentation: pres,
            note: format!(
                "sphere model of ({chars}): H plus the {trivial_count}-fold suspension of \
                 the nontrivial part's Euler ideal"
            ),
        }
    }
}

/// Failures of catalog lookup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CatalogError {
    UnknownName(String),
    BadArgs(String),
}

impl fmt::Display for CatalogError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogError::UnknownName(name) => write!(f, "unknown catalog entry `{name}`"),
            CatalogError::BadArgs(msg) => write!(f, "bad catalog arguments: {msg}"),
        }
    }
}

/// Names of all argumentless catalog entries, for iteration in tests and
/// reports.
pub fn catalog_names() -> Vec<&'static str> {
    vec![
        "hv", "sigma-h", "tH", "jv1", "h-geq-1", "j2-tensor", "j2-exotic", "bsu2-a", "bsu2-b",
    ]
}

fn c2_name(k: u32) -> String {
    match k {
        0 => String::from("one"),
        1 => String::from("c2"),
        _ => format!("c2_{k}"),
    }
}

/// Look up a named module.  `rp2` takes arguments `i j` with `i + j = 3`
/// (the branch `i = 0` is renormalized to `(3, 0)`); `hv` takes an optional
/// rank; the `bsu2` entries are truncated families whose generators stop at
/// `trunc/4`.
pub fn catalog(name: &str, args: &[u32], trunc: u32) -> Result<CatalogEntry, CatalogError> {
    let t = Poly::var(1, 1);
    let no_args = |name: &str| -> Result<(), CatalogError> {
        if args.is_empty() {
            Ok(())
        } else {
            Err(CatalogError::BadArgs(format!("`{name}` takes no arguments")))
        }
    };
    match name {
        "hv" => {
            let rank = match args {
                [] => 1,
                [r] if *r >= 1 => *r,
                _ => return Err(CatalogError::BadArgs(String::from("`hv` takes one rank ≥ 1"))),
            };
            Ok(CatalogEntry {
                name: format!("hv {rank}"),
                presentation: Presentation::free(rank, vec![(String::from("z"), 0)]),
                note: format!("the polynomial algebra F2[t1..t{rank}], free on one degree-0 generator"),
            })
        }
        "sigma-h" => {
            no_args(name)?;
            Ok(CatalogEntry {
                name: String::from("sigma-h"),
                presentation: Presentation::free(1, vec![(String::from("s"), 1)]),
                note: String::from("the suspension of H = F2[t]: one degree-1 generator, no squares"),
            })
        }
        "tH" => {
            no_args(name)?;
            let mut pres = Presentation::free(1, vec![(String::from("g"), 1)]);
            pres.set_sq(0, 1, FreeElement::generator(1, 1, 0).mul_poly(&t));
            Ok(CatalogEntry {
                name: String::from("tH"),
                presentation: pres,
                note: String::from("the augmentation ideal (t) of H: one degree-1 generator g with Sq^1 g = t·g"),
            })
        }
        "jv1" => {
            no_args(name)?;
            let base = Presentation::free(1, vec![(String::from("i"), 0)]);
            let rel = FreeElement::generator(1, 1, 0).mul_poly(&t.mul(&t));
            Ok(CatalogEntry {
                name: String::from("jv1"),
                presentation: quotient_by(&base, vec![rel]),
                note: String::from("H/(t²): classes 1 and t with t·1 = t; reduced fails and H-freeness fails"),
            })
        }
        "h-geq-1" => {
            no_args(name)?;
            let base = Presentation::free(1, vec![(String::from("z"), 0)]);
            let gen = FreeElement::generator(1, 1, 0).mul_poly(&t);
            Ok(CatalogEntry {
                name: String::from("h-geq-1"),
                presentation: submodule(&base, vec![gen]),
                note: String::from("the positive-degree part of H, as the submodule of H generated by t"),
            })
        }
        "j2-tensor" => {
            no_args(name)?;
            let mut pres =
                Presentation::free(1, vec![(String::from("u"), 1), (String::from("v"), 2)]);
            pres.set_sq(0, 1, FreeElement::generator(1, 2, 1));
            Ok(CatalogEntry {
                name: String::from("j2-tensor"),
                presentation: pres,
                note: String::from("H ⊗ J(2): free on u (degree 1) and v (degree 2) with Sq^1 u = v"),
            })
        }
        "j2-exotic" => {
            no_args(name)?;
            let ambient =
                Presentation::free(1, vec![(String::from("a"), 0), (String::from("b"), 1)]);
            let g1 = FreeElement::generator(1, 2, 0)
                .mul_poly(&t)
                .add(&FreeElement::generator(1, 2, 1));
            let g2 = FreeElement::generator(1, 2, 0).mul_poly(&t.mul(&t));
            Ok(CatalogEntry {
                name: String::from("j2-exotic"),
                presentation: submodule(&ambient, vec![g1, g2]),
                note: String::from(
                    "the submodule of H ⊕ ΣH generated by t·a + b and t²·a; H-free with \
                     generator quotient J(2), not isomorphic to H ⊗ J(2)",
                ),
            })
        }
        "rp2" => {
            let (i, j) = match args {
                [i, j] if i + j == 3 => (*i, *j),
                _ => {
                    return Err(CatalogError::BadArgs(String::from(
                        "`rp2` takes two arguments i j with i + j = 3",
                    )))
                }
            };
            // The branch y = 0 needs i ≥ 1; (0, 3) becomes (3, 0) under
            // the substitution y ↦ y + t.
            let (ni, nj) = if i == 0 { (3, 0) } else { (i, j) };
            let mut full = Presentation::free(
                1,
                vec![
                    (String::from("one"), 0),
                    (String::from("y"), 1),
                    (String::from("y2"), 2),
                ],
            );
            full.set_sq(1, 1, FreeElement::generator(1, 3, 2));
            // y⁴ in F2[t,y]/(y^i (y+t)^j): zero for (3,0), t²·y² otherwise.
            if ni < 3 {
                full.set_sq(2, 2, FreeElement::generator(1, 3, 2).mul_poly(&t.mul(&t)));
            }
            let relative = submodule(&full, vec![FreeElement::generator(1, 3, 1)]);
            Ok(CatalogEntry {
                name: format!("rp2 {i} {j}"),
                presentation: relative,
                note: format!(
                    "the ideal (y) of F2[t,y]/(y^{ni}(y+t)^{nj}) on the H-basis y, y²: \
                     Sq^1 y = y², Sq^2 y² = y⁴"
                ),
            })
        }
        "bsu2-a" | "bsu2-b" => {
            no_args(name)?;
            let kmax = trunc / 4;
            let gens: Vec<(String, u32)> = (0..=kmax).map(|k| (c2_name(k), 4 * k)).collect();
            let count = gens.len();
            let mut pres = Presentation::free(1, gens);
            if name == "bsu2-a" {
                // Sq(c2) = c2 + c2² gives Sq^{4j}(c2^k) = C(k,j)·c2^{k+j}.
                for k in 1..=kmax {
                    for j in 1..=k {
                        if k + j <= kmax && binom_mod2(k as i64, j as i64) {
                            pres.set_sq(
                                k as usize,
                                4 * j,
                                FreeElement::generator(1, count, (k + j) as usize),
                            );
                        }
                    }
                }
            } else {
                // Sq(c2) = c2 + t²c2 + c2² gives
                // Sq^{2p+4q}(c2^k) = C(k,p)·C(k−p,q)·t^{2p}·c2^{k+q}.
                for k in 1..=kmax {
                    let mut by_op: Vec<FreeElement> =
                        vec![FreeElement::zero(1, count); (4 * k + 1) as usize];
                    for p in 0..=k {
                        for q in 0..=(k - p) {
                            let op = 2 * p + 4 * q;
                            if op == 0 || k + q > kmax {
                                continue;
                            }
                            if binom_mod2(k as i64, p as i64)
                                && binom_mod2((k - p) as i64, q as i64)
                            {
                                let term = FreeElement::generator(1, count, (k + q) as usize)
                                    .mul_poly(&t.pow(2 * p));
                                by_op[op as usize] = by_op[op as usize].add(&term);
                            }
                        }
                    }
                    for (op, elem) in by_op.into_iter().enumerate() {
                        if !elem.is_zero() {
                            pres.set_sq(k as usize, op as u32, elem);
                        }
                    }
                }
            }
            let note = if name == "bsu2-a" {
                "H ⊗ F2[c2] truncated above the degree bound: Sq^{4j}(c2^k) = C(k,j)·c2^{k+j}"
            } else {
                "H ⊗_{F2[c1]} F2[c1,c2] with c1 = t², truncated: the total square of c2 is \
                 c2 + t²·c2 + c2²"
            };
            Ok(CatalogEntry {
                name: String::from(name),
                presentation: pres,
                note: String::from(note),
            })
        }
        other => Err(CatalogError::UnknownName(String::from(other))),
    }
}

/// Degreewise containment of principal ideals: `(inner) ⊆ (outer)` in `H`
/// through the truncation, checked on realized submodules.
pub fn ideal_contains(outer: &Poly, inner: &Poly, rank: u32, trunc: u32) -> bool {
    let base = Presentation::free(rank, vec![(String::from("z"), 0)]);
    let gen = FreeElement::generator(rank, 1, 0);
    let outer_m = realize(&submodule(&base, vec![gen.mul_poly(outer)]), trunc);
    let inner_m = realize(&submodule(&base, vec![gen.mul_poly(inner)]), trunc);
    for n in 0..=trunc {
        for idx in 0..inner_m.dim(n) {
            let elem = inner_m.rep_element(n, idx);
            if outer_m.coords_of(&elem).is_none() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hv::dickson_top;

    const BUDGET: u64 = 1 << 20;

    fn classify(pres: &Presentation, trunc: u32) -> SigmaNClass {
        classify_sigma_n(pres, trunc, BUDGET).unwrap()
    }

    fn form_t() -> LinearForm {
        LinearForm::new(1, 1)
    }

    #[test]
    fn classifies_the_basic_cyclic_modules() {
        let th = catalog("tH", &[], 8).unwrap().presentation;
        assert_eq!(
            classify(&th, 8),
            SigmaNClass { suspension: 0, factors: vec![(form_t(), 1)] }
        );
        let sigma_h = catalog("sigma-h", &[], 8).unwrap().presentation;
        assert_eq!(classify(&sigma_h, 8), SigmaNClass { suspension: 1, factors: vec![] });

        // the suspension of tH: generator degree 2, Sq^1 g = t·g
        let mut sus = Presentation::free(1, vec![(String::from("g"), 2)]);
        sus.set_sq(0, 1, FreeElement::generator(1, 1, 0).mul_poly(&Poly::var(1, 1)));
        assert_eq!(
            classify(&sus, 8),
            SigmaNClass { suspension: 1, factors: vec![(form_t(), 1)] }
        );

        // the submodule presentation of the same ideal classifies identically
        let sub = catalog("h-geq-1", &[], 8).unwrap().presentation;
        assert_eq!(
            classify(&sub, 8),
            SigmaNClass { suspension: 0, factors: vec![(form_t(), 1)] }
        );
    }

    #[test]
    fn rejects_modules_with_the_wrong_shape() {
        let jv1 = catalog("jv1", &[], 8).unwrap().presentation;
        assert!(matches!(classify_sigma_n(&jv1, 8, BUDGET), Err(SigmaError::NotHFree(_))));
        let j2 = catalog("j2-tensor", &[], 8).unwrap().presentation;
        assert!(matches!(
            classify_sigma_n(&j2, 8, BUDGET),
            Err(SigmaError::WrongQuotient { .. })
        ));
    }

    #[test]
    fn splits_and_classifies_two_generator_modules() {
        // H ⊕ Σ(tH), already split
        let mut pres =
            Presentation::free(1, vec![(String::from("z"), 0), (String::from("g"), 2)]);
        pres.set_sq(1, 1, FreeElement::generator(1, 2, 1).mul_poly(&Poly::var(1, 1)));
        let split = classify_f2_plus_sigma(&pres, 10, BUDGET).unwrap();
        assert_eq!(split.corrector, "0");
        assert_eq!(split.class, SigmaNClass { suspension: 1, factors: vec![(form_t(), 1)] });

        // H ⊕ t²H: total square (1+t)², so only Sq² acts
        let t2 = Poly::var(1, 1).mul(&Poly::var(1, 1));
        let mut pres =
            Presentation::free(1, vec![(String::from("z"), 0), (String::from("g"), 2)]);
        pres.set_sq(1, 2, FreeElement::generator(1, 2, 1).mul_poly(&t2));
        let split = classify_f2_plus_sigma(&pres, 10, BUDGET).unwrap();
        assert_eq!(split.class, SigmaNClass { suspension: 0, factors: vec![(form_t(), 2)] });

        // the same module after the generator change g ↦ g + t²·z: the
        // solver must find the corrector t² and the same class as H ⊕ ΣtH
        let mut mixed =
            Presentation::free(1, vec![(String::from("z"), 0), (String::from("g"), 2)]);
        let t3 = t2.mul(&Poly::var(1, 1));
        let t4 = t2.mul(&t2);
        let g = FreeElement::generator(1, 2, 1);
        let z = FreeElement::generator(1, 2, 0);
        mixed.set_sq(1, 1, g.mul_poly(&Poly::var(1, 1)).add(&z.mul_poly(&t3)));
        mixed.set_sq(1, 2, z.mul_poly(&t4));
        assert!(validate(&mixed, 10).is_ok());
        let split = classify_f2_plus_sigma(&mixed, 10, BUDGET).unwrap();
        assert_eq!(split.corrector, "t^2");
        assert_eq!(split.class, SigmaNClass { suspension: 1, factors: vec![(form_t(), 1)] });
    }

    #[test]
    fn enumeration_counts_and_round_trips() {
        assert_eq!(enumerate_sigma_n(0, 1).len(), 1);
        assert_eq!(enumerate_sigma_n(1, 1).len(), 2);
        assert_eq!(enumerate_sigma_n(1, 2).len(), 4);
        assert_eq!(enumerate_sigma_n(2, 1).len(), 3);
        assert_eq!(enumerate_sigma_n(3, 1).len(), 4);
        for rank in 1..=2u32 {
            for n in 0..=3u32 {
                for (class, pres) in enumerate_sigma_n(n, rank) {
                    assert!(validate(&pres, 8).is_ok(), "{class}");
                    let back = classify_sigma_n(&pres, 8, BUDGET).unwrap();
                    assert_eq!(back, class);
                }
            }
        }
    }

    #[test]
    fn ideal_containment_of_the_dickson_power() {
        for rank in 1..=2u32 {
            let c = dickson_top(rank);
            for n in 0..=3u32 {
                for (class, _) in enumerate_sigma_n(n, rank) {
                    let alpha = class.factors.iter().map(|&(_, a)| a).max().unwrap_or(0);
                    let u = class.u_poly(rank);
                    assert!(
                        ideal_contains(&u, &c.pow(alpha), rank, 12),
                        "c^{alpha} H not inside ({u})·H"
                    );
                }
            }
        }
    }

    #[test]
    fn exhaustive_table_search_matches_the_enumeration() {
        for n in 0..=3u32 {
            let census = search_sigma_tables(n, 1, 12, BUDGET).unwrap();
            assert_eq!(census.total, 1u64 << n);
            assert_eq!(census.valid.len(), n as usize + 1, "valid tables at degree {n}");
            assert_eq!(census.classes.len(), n as usize + 1, "classes at degree {n}");
            assert_eq!(census.classes.len(), enumerate_sigma_n(n, 1).len());
        }
    }

    #[test]
    fn j2_solver_recognizes_the_reference_modules() {
        let tensor = catalog("j2-tensor", &[], 8).unwrap().presentation;
        assert_eq!(solve_j2(&tensor, 8, BUDGET).unwrap(), J2Class::Tensor);
        let exotic = catalog("j2-exotic", &[], 8).unwrap().presentation;
        assert_eq!(solve_j2(&exotic, 8, BUDGET).unwrap(), J2Class::Exotic);
        // a tensor model built from the finite module directly
        let built = crate::functors::tensor_with_hv(&brown_gitler(2, 8), 1);
        assert_eq!(solve_j2(&built, 8, BUDGET).unwrap(), J2Class::Tensor);
        let jv1 = catalog("jv1", &[], 8).unwrap().presentation;
        assert!(matches!(solve_j2(&jv1, 8, BUDGET), Err(J2Error::NotHFree(_))));
    }

    #[test]
    fn projective_plane_models_split_by_branch_type() {
        let expected = [((3, 0), J2Class::Tensor), ((2, 1), J2Class::Exotic),
            ((1, 2), J2Class::Exotic), ((0, 3), J2Class::Tensor)];
        for ((i, j), class) in expected {
            let entry = catalog("rp2", &[i, j], 8).unwrap();
            let e = realize(&entry.presentation, 8);
            assert!(is_hfree(&e).holds(), "rp2 {i} {j}");
            assert_eq!(reduced_quotient_dims(&e).iter().sum::<usize>(), 2);
            assert_eq!(solve_j2(&entry.presentation, 8, BUDGET).unwrap(), class, "rp2 {i} {j}");
        }
    }

    #[test]
    fn exhaustive_j2_search_finds_two_classes() {
        let census = search_j2(8, BUDGET).unwrap();
        assert_eq!(census.total_tables, 64);
        assert_eq!(census.candidates.len(), 4);
        assert_eq!(census.classes.len(), 2);
        let mut sizes: Vec<u32> = census.classes.iter().map(|&(_, c)| c).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 2]);
        let mut found: Vec<J2Class> = census
            .classes
            .iter()
            .map(|(pres, _)| solve_j2(pres, 8, BUDGET).unwrap())
            .collect();
        found.sort_unstable();
        assert_eq!(found, vec![J2Class::Tensor, J2Class::Exotic]);
    }

    #[test]
    fn resolution_checker_on_trivial_and_injective_quotients() {
        let zero = Presentation::free(1, Vec::new());
        let zero_maps = GradedMap::new((0..=6).map(|_| F2Matrix::zero(0, 0)).collect());
        assert!(check_resolution(&zero, &zero, &zero, &zero_maps, &zero_maps, 6, BUDGET).holds());

        // E with injective generator quotient: E must be H ⊗ Ē.
        let h = catalog("hv", &[], 8).unwrap().presentation;
        let i0 = crate::functors::tensor_with_hv(&FiniteAModule::concentrated(0, 8, "x"), 1);
        let phi = GradedMap::new((0..=8).map(|n| F2Matrix::zero(realize(&i0, 8).dim(n), 0)).collect());
        let qmap = GradedMap::new(
            (0..=8).map(|n| F2Matrix::zero(usize::from(n == 0), 0)).collect(),
        );
        let none = Presentation::free(1, Vec::new());
        assert!(check_resolution(&h, &i0, &none, &phi, &qmap, 8, BUDGET).holds());

        // ...and a module that is not free on its quotient fails.
        let th = catalog("tH", &[], 8).unwrap().presentation;
        let sigma_f2 = crate::functors::tensor_with_hv(&FiniteAModule::concentrated(1, 8, "x"), 1);
        let i0r = realize(&sigma_f2, 8);
        let phi = GradedMap::new((0..=8).map(|n| F2Matrix::zero(i0r.dim(n), 0)).collect());
        let qmap = GradedMap::new(
            (0..=8).map(|n| F2Matrix::zero(usize::from(n == 1), 0)).collect(),
        );
        match check_resolution(&th, &sigma_f2, &none, &phi, &qmap, 8, BUDGET) {
            Verdict::Fails(w) => assert!(w.element.contains("not isomorphic")),
            Verdict::Holds => panic!("tH is not H ⊗ ΣF2"),
        }
    }

    #[test]
    fn gysin_models_of_small_representations() {
        // one sign character: the augmentation ideal
        let sign = Character::new(1, 1);
        let entry = gysin_model(&[sign]);
        assert_eq!(
            classify(&entry.presentation, 8),
            SigmaNClass { suspension: 0, factors: vec![(form_t(), 1)] }
        );

        // sign ⊕ trivial: the sphere model H ⊕ Σ(tH)
        let entry = gysin_model(&[sign, Character::trivial(1)]);
        let split = classify_f2_plus_sigma(&entry.presentation, 10, BUDGET).unwrap();
        assert_eq!(split.class, SigmaNClass { suspension: 1, factors: vec![(form_t(), 1)] });

        // the regular-ish rank-2 case: e = t1·t2
        let entry = gysin_model(&[Character::new(2, 1), Character::new(2, 2)]);
        assert_eq!(
            classify(&entry.presentation, 8),
            SigmaNClass {
                suspension: 0,
                factors: vec![(LinearForm::new(2, 1), 1), (LinearForm::new(2, 2), 1)]
            }
        );
    }

    #[test]
    fn catalog_entries_validate_with_expected_dimensions() {
        for name in catalog_names() {
            let entry = catalog(name, &[], 12).unwrap();
            assert!(validate(&entry.presentation, 12).is_ok(), "{name}");
        }
        let dims = |name: &str| realize(&catalog(name, &[], 8).unwrap().presentation, 8).dims().to_vec();
        assert_eq!(dims("hv"), vec![1; 9]);
        assert_eq!(dims("sigma-h"), vec![0, 1, 1, 1, 1, 1, 1, 1, 1]);
        assert_eq!(dims("tH"), vec![0, 1, 1, 1, 1, 1, 1, 1, 1]);
        assert_eq!(dims("jv1"), vec![1, 1, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(dims("h-geq-1"), vec![0, 1, 1, 1, 1, 1, 1, 1, 1]);
        assert_eq!(dims("j2-tensor"), vec![0, 1, 2, 2, 2, 2, 2, 2, 2]);
        assert_eq!(dims("j2-exotic"), vec![0, 1, 2, 2, 2, 2, 2, 2, 2]);
        for (i, j) in [(3, 0), (2, 1), (1, 2), (0, 3)] {
            let entry = catalog("rp2", &[i, j], 8).unwrap();
            assert!(validate(&entry.presentation, 8).is_ok());
            assert_eq!(
                realize(&entry.presentation, 8).dims(),
                &[0, 1, 2, 2, 2, 2, 2, 2, 2]
            );
        }
        assert_eq!(dims("bsu2-a"), vec![1, 1, 1, 1, 2, 2, 2, 2, 3]);
        assert_eq!(dims("bsu2-b"), vec![1, 1, 1, 1, 2, 2, 2, 2, 3]);
        assert!(matches!(
            catalog("nope", &[], 8),
            Err(CatalogError::UnknownName(_))
        ));
        assert!(matches!(catalog("rp2", &[2, 2], 8), Err(CatalogError::BadArgs(_))));
    }

    #[test]
    fn truncated_symmetric_square_families_are_free_and_distinct() {
        let a = catalog("bsu2-a", &[], 12).unwrap().presentation;
        let b = catalog("bsu2-b", &[], 12).unwrap().presentation;
        let ra = realize(&a, 12);
        let rb = realize(&b, 12);
        assert!(is_hfree(&ra).holds());
        assert!(is_hfree(&rb).holds());
        assert_eq!(ra.dims(), rb.dims());
        // both have the same generator quotient (a truncated polynomial
        // algebra on a degree-4 class), but are not isomorphic
        let qa = quotient_e(&ra);
        let qb = quotient_e(&rb);
        assert_eq!(qa.dims(), qb.dims());
        assert_eq!(qa.dims()[4], 1);
        assert_eq!(qa.dims()[8], 1);
        match is_isomorphic_bounded(&ra, &rb, BUDGET) {
            IsoOutcome::NotIsomorphic => {}
            other => panic!("expected distinct classes, got {other:?}"),
        }
    }
}
