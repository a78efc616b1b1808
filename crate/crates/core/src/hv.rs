//! The polynomial algebra `H = F2[t1, …, tr]` with its Steenrod action.
//!
//! Each `t_i` sits in degree 1 and carries `Sq^0 t = t`, `Sq^1 t = t²`; the
//! action extends by the Cartan formula, which on a single power reads
//! `Sq^j(t^a) = binom(a, j) · t^{a+j}` and on a product of variables
//! distributes `j` over the factors.  Two standard classes built from the
//! nonzero linear forms of `V = (Z/2)^r` are exported: the top Dickson
//! invariant (the product of all `2^r − 1` forms) and the Euler class of a
//! sum of characters (the product of the corresponding forms, zero as soon
//! as one character is trivial).
//!
//! Polynomials are stored as sets of exponent vectors (coefficients live in
//! F2, so addition is symmetric difference) in a `BTreeSet`, which fixes the
//! ascending-lexicographic term order everywhere: iteration order, display
//! order, and the choice of leading monomial (the lexicographically largest
//! term) used by the division routine are all determined by it.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::steenrod::binom_mod2;

/// A polynomial over F2 in `rank` variables, stored as its set of monomials
/// (exponent vectors of length `rank`).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Poly {
    rank: u32,
    terms: BTreeSet<Vec<u32>>,
}

impl Poly {
    pub fn zero(rank: u32) -> Self {
        Poly { rank, terms: BTreeSet::new() }
    }

    pub fn one(rank: u32) -> Self {
        Poly::monomial(rank, vec![0; rank as usize])
    }

    /// The variable `t_i`, 1-indexed.
    pub fn var(rank: u32, i: u32) -> Self {
        assert!(1 <= i && i <= rank, "variable t{i} out of range for rank {rank}");
        let mut exps = vec![0; rank as usize];
        exps[(i - 1) as usize] = 1;
        Poly::monomial(rank, exps)
    }

    pub fn monomial(rank: u32, exps: Vec<u32>) -> Self {
        assert_eq!(exps.len(), rank as usize);
        let mut terms = BTreeSet::new();
        terms.insert(exps);
        Poly { rank, terms }
    }

    pub fn from_monomials(rank: u32, monos: impl IntoIterator<Item = Vec<u32>>) -> Self {
        let mut p = Poly::zero(rank);
        for m in monos {
            assert_eq!(m.len(), rank as usize);
            p.toggle(m);
        }
        p
    }

    fn toggle(&mut self, mono: Vec<u32>) {
        if !self.terms.remove(&mono) {
            self.terms.insert(mono);
        }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().next().unwrap().iter().all(|&e| e == 0)
    }

    pub fn terms(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.iter().map(|m| m.iter().sum::<u32>());
        match degrees.next() {
            None => true,
            Some(d0) => degrees.all(|d| d == d0),
        }
    }

    /// Degree of a nonzero homogeneous polynomial.
    pub fn degree(&self) -> Option<u32> {
        assert!(self.is_homogeneous(), "degree of an inhomogeneous polynomial");
        self.terms.iter().next().map(|m| m.iter().sum())
    }

    /// The sum of the degree-`d` monomials.
    pub fn homogeneous_part(&self, d: u32) -> Poly {
        Poly {
            rank: self.rank,
            terms: self.terms.iter().filter(|m| m.iter().sum::<u32>() == d).cloned().collect(),
        }
    }

    /// Largest degree of a monomial; `None` for zero.
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.iter().map(|m| m.iter().sum()).max()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.rank, other.rank);
        let mut out = self.clone();
        for m in &other.terms {
            out.toggle(m.clone());
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.rank, other.rank);
        let mut out = Poly::zero(self.rank);
        for a in &self.terms {
            for b in &other.terms {
                let prod: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.toggle(prod);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one(self.rank);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// `Sq^j` of the polynomial, via the Cartan distribution of `j` over the
    /// variables of each monomial: `Sq^j(∏ t_i^{a_i})` is the sum over
    /// `j_1 + … + j_r = j` of `∏ binom(a_i, j_i) t_i^{a_i + j_i}`.
    pub fn sq(&self, j: u32) -> Poly {
        let mut out = Poly::zero(self.rank);
        for mono in &self.terms {
            distribute_sq(mono, 0, j, &mut vec![0; mono.len()], &mut out);
        }
        out
    }
}

fn distribute_sq(exps: &[u32], idx: usize, remaining: u32, chosen: &mut Vec<u32>, out: &mut Poly) {
    if idx == exps.len() {
        if remaining == 0 {
            let term: Vec<u32> = exps.iter().zip(chosen.iter()).map(|(a, j)| a + j).collect();
            out.toggle(term);
        }
        return;
    }
    for ji in 0..=remaining.min(exps[idx]) {
        if !binom_mod2(i64::from(exps[idx]), i64::from(ji)) {
            continue;
        }
        chosen[idx] = ji;
        distribute_sq(exps, idx + 1, remaining - ji, chosen, out);
    }
    chosen[idx] = 0;
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // descending lexicographic order: highest power of t1 first
        for mono in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}", format_monomial(self.rank, mono))?;
            first = false;
        }
        Ok(())
    }
}

fn format_monomial(rank: u32, exps: &[u32]) -> String {
    use core::fmt::Write;
    let mut parts: Vec<String> = Vec::new();
    for (i, &e) in exps.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let mut s = String::new();
        if rank == 1 {
            s.push('t');
        } else {
            write!(s, "t{}", i + 1).unwrap();
        }
        if e > 1 {
            write!(s, "^{e}").unwrap();
        }
        parts.push(s);
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// Errors from the polynomial parser.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyParseError {
    BadToken(String),
    VarOutOfRange { var: u32, rank: u32 },
}

impl fmt::Display for PolyParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyParseError::BadToken(t) => write!(f, "unrecognized polynomial factor `{t}`"),
            PolyParseError::VarOutOfRange { var, rank } => {
                write!(f, "variable t{var} out of range for rank {rank}")
            }
        }
    }
}

/// Parse `t^2`, `t1*t2^3 + t2^4`, `1`, or `0`.  For rank 1 the variable may
/// be written plainly as `t`; `t1` is accepted at every rank.
pub fn parse_poly(rank: u32, input: &str) -> Result<Poly, PolyParseError> {
    let input = input.trim();
    if input == "0" {
        return Ok(Poly::zero(rank));
    }
    let mut poly = Poly::zero(rank);
    for summand in input.split('+') {
        let mut exps = vec![0u32; rank as usize];
        for factor in summand.split('*') {
            let factor = factor.trim();
            if factor == "1" {
                continue;
            }
            let rest = factor
                .strip_prefix('t')
                .ok_or_else(|| PolyParseError::BadToken(factor.to_string()))?;
            let (var_part, exp_part) = match rest.split_once('^') {
                Some((v, e)) => (v, Some(e)),
                None => (rest, None),
            };
            let var: u32 = if var_part.is_empty() {
                1
            } else {
                var_part
                    .parse()
                    .map_err(|_| PolyParseError::BadToken(factor.to_string()))?
            };
            if var == 0 || var > rank {
                return Err(PolyParseError::VarOutOfRange { var, rank });
            }
            let exp: u32 = match exp_part {
                None => 1,
                Some(e) => e
                    .parse()
                    .ok()
                    .filter(|&e| e > 0)
                    .ok_or_else(|| PolyParseError::BadToken(factor.to_string()))?,
            };
            exps[(var - 1) as usize] += exp;
        }
        poly.toggle(exps);
    }
    Ok(poly)
}

/// A nonzero linear form `Σ t_i`, encoded by the bitmask with bit `i−1` set
/// when `t_i` occurs.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct LinearForm {
    rank: u32,
    mask: u32,
}

impl LinearForm {
    pub fn new(rank: u32, mask: u32) -> Self {
        assert!(mask != 0, "the zero form is not a linear form");
        assert!(mask < 1 << rank, "form mentions variables beyond the rank");
        LinearForm { rank, mask }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn as_poly(&self) -> Poly {
        let mut p = Poly::zero(self.rank);
        for i in 0..self.rank {
            if self.mask >> i & 1 == 1 {
                p = p.add(&Poly::var(self.rank, i + 1));
            }
        }
        p
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in 0..self.rank {
            if self.mask >> i & 1 == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            if self.rank == 1 {
                write!(f, "t")?;
            } else {
                write!(f, "t{}", i + 1)?;
            }
            first = false;
        }
        Ok(())
    }
}

/// All `2^r − 1` nonzero linear forms in ascending bitmask order:
/// `t1, t2, t1+t2, t3, …`.
pub fn all_forms(rank: u32) -> Vec<LinearForm> {
    (1..1u32 << rank).map(|mask| LinearForm { rank, mask }).collect()
}

/// The top Dickson invariant: the product of all nonzero linear forms, of
/// degree `2^r − 1`.
pub fn dickson_top(rank: u32) -> Poly {
    let mut p = Poly::one(rank);
    for form in all_forms(rank) {
        p = p.mul(&form.as_poly());
    }
    p
}

/// A character of `(Z/2)^r`: a linear functional, possibly zero (trivial).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Character {
    rank: u32,
    mask: u32,
}

impl Character {
    pub fn new(rank: u32, mask: u32) -> Self {
        assert!(mask < 1 << rank);
        Character { rank, mask }
    }

    pub fn trivial(rank: u32) -> Self {
        Character { rank, mask: 0 }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn is_trivial(&self) -> bool {
        self.mask == 0
    }

    /// The associated linear form, `None` for the trivial character.
    pub fn form(&self) -> Option<LinearForm> {
        if self.mask == 0 {
            None
        } else {
            Some(LinearForm { rank: self.rank, mask: self.mask })
        }
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mask == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}", LinearForm { rank: self.rank, mask: self.mask })
        }
    }
}

/// The Euler class of a sum of one-dimensional characters: the product of
/// their linear forms.  Zero as soon as one character is trivial; the empty
/// product is 1.
pub fn euler_class(rank: u32, characters: &[Character]) -> Poly {
    let mut p = Poly::one(rank);
    for ch in characters {
        assert_eq!(ch.rank, rank);
        match ch.form() {
            None => return Poly::zero(rank),
            Some(form) => p = p.mul(&form.as_poly()),
        }
    }
    p
}

/// Exact division by a linear form.  `None` when the form does not divide.
///
/// Standard single-divisor division in descending lexicographic order: the
/// leading monomial of the form is its lowest-index variable; at each step
/// the leading monomial of the remainder must be divisible by it, otherwise
/// the remainder is nonzero and the division fails.
pub fn divide_by_form(p: &Poly, form: LinearForm) -> Option<Poly> {
    assert_eq!(p.rank, form.rank);
    let lead_var = form.mask.trailing_zeros() as usize;
    let form_poly = form.as_poly();
    let mut rem = p.clone();
    let mut quot = Poly::zero(p.rank);
    while let Some(lm) = rem.terms.iter().next_back().cloned() {
        if lm[lead_var] == 0 {
            return None;
        }
        let mut q_mono = lm;
        q_mono[lead_var] -= 1;
        let q_term = Poly::monomial(p.rank, q_mono);
        rem = rem.add(&q_term.mul(&form_poly));
        quot = quot.add(&q_term);
    }
    Some(quot)
}

/// Factor a nonzero homogeneous polynomial into linear forms, returning the
/// multiset of factors as `(form, multiplicity)` pairs in ascending mask
/// order, or `None` when the polynomial is not such a product.
pub fn factor_linear(p: &Poly) -> Option<Vec<(LinearForm, u32)>> {
    if p.is_zero() || !p.is_homogeneous() {
        return None;
    }
    let mut rem = p.clone();
    let mut factors = Vec::new();
    for form in all_forms(p.rank) {
        let mut mult = 0;
        while let Some(q) = divide_by_form(&rem, form) {
            rem = q;
            mult += 1;
        }
        if mult > 0 {
            factors.push((form, mult));
        }
    }
    if rem.is_one() {
        Some(factors)
    } else {
        None
    }
}

/// All exponent vectors of length `rank` with entry sum `d`, in ascending
/// lexicographic order.  This is the degree-`d` monomial basis of `H`.
pub fn monomials_of_degree(rank: u32, d: u32) -> Vec<Vec<u32>> {
    fn build(vars_left: u32, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if vars_left == 0 {
            if d == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        if vars_left == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in 0..=d {
            prefix.push(e);
            build(vars_left - 1, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if rank == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    build(rank, d, &mut Vec::new(), &mut out);
    out
}

/// `dim H^d` for `H = F2[t1..tr]`: the number of degree-`d` monomials.
pub fn poly_dim(rank: u32, d: u32) -> usize {
    // binom(d + r - 1, r - 1), computed by the recurrence to avoid overflow
    if rank == 0 {
        return usize::from(d == 0);
    }
    let mut table = vec![1usize; d as usize + 1];
    for _ in 1..rank {
        for i in 1..table.len() {
            table[i] += table[i - 1];
        }
    }
    table[d as usize]
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;

    fn splitmix(state: &mut u64) -> u64 {
        *state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn random_poly(state: &mut u64, rank: u32, degree: u32) -> Poly {
        let basis = monomials_of_degree(rank, degree);
        let mut p = Poly::zero(rank);
        for mono in basis {
            if splitmix(state) % 2 == 0 {
                p = p.add(&Poly::monomial(rank, mono));
            }
        }
        p
    }

    #[test]
    fn squares_on_one_variable() {
        let t = Poly::var(1, 1);
        assert_eq!(format!("{}", t.sq(1)), "t^2");
        assert_eq!(format!("{}", t.pow(2).sq(1)), "0");
        assert_eq!(format!("{}", t.pow(2).sq(2)), "t^4");
        assert_eq!(format!("{}", t.pow(3).sq(1)), "t^4");
        assert_eq!(format!("{}", t.pow(3).sq(2)), "t^5");
    }

    #[test]
    fn top_square_is_squaring_and_above_vanishes() {
        let mut state = 0x4856_0001u64;
        for _ in 0..100 {
            let rank = splitmix(&mut state) % 3 + 1;
            let degree = (splitmix(&mut state) % 5 + 1) as u32;
            let p = random_poly(&mut state, rank as u32, degree);
            assert_eq!(p.sq(degree), p.mul(&p), "Sq^deg must square");
            for j in degree + 1..=degree + 3 {
                assert!(p.sq(j).is_zero(), "Sq^{j} on degree {degree} must vanish");
            }
        }
    }

    #[test]
    fn cartan_formula_on_products() {
        let mut state = 0x4343_0002u64;
        for _ in 0..200 {
            let rank = (splitmix(&mut state) % 3 + 1) as u32;
            let da = (splitmix(&mut state) % 6 + 1) as u32;
            let db = (splitmix(&mut state) % 6 + 1) as u32;
            let a = random_poly(&mut state, rank, da);
            let b = random_poly(&mut state, rank, db);
            let ab = a.mul(&b);
            for j in 0..=12u32 {
                let mut rhs = Poly::zero(rank);
                for i in 0..=j {
                    rhs = rhs.add(&a.sq(i).mul(&b.sq(j - i)));
                }
                assert_eq!(ab.sq(j), rhs, "Cartan failure at j={j}");
            }
        }
    }

    #[test]
    fn dickson_top_small_ranks() {
        assert_eq!(format!("{}", dickson_top(1)), "t");
        // t1·t2·(t1+t2) = t1^2 t2 + t1 t2^2
        assert_eq!(format!("{}", dickson_top(2)), "t1^2*t2 + t1*t2^2");
        for r in 0..=3u32 {
            let d = dickson_top(r);
            assert_eq!(d.degree(), Some((1 << r) - 1));
        }
    }

    #[test]
    fn dickson_top_is_invariant_under_substitution() {
        // substituting any invertible linear change of variables permutes
        // the nonzero forms, hence fixes their product
        fn substitute(p: &Poly, images: &[Poly]) -> Poly {
            let mut out = Poly::zero(p.rank());
            for mono in p.terms() {
                let mut term = Poly::one(p.rank());
                for (i, &e) in mono.iter().enumerate() {
                    term = term.mul(&images[i].pow(e));
                }
                out = out.add(&term);
            }
            out
        }
        let d2 = dickson_top(2);
        let t1 = Poly::var(2, 1);
        let t2 = Poly::var(2, 2);
        let swaps = [
            alloc::vec![t2.clone(), t1.clone()],
            alloc::vec![t1.add(&t2), t2.clone()],
            alloc::vec![t1.clone(), t1.add(&t2)],
        ];
        for images in &swaps {
            assert_eq!(substitute(&d2, images), d2);
        }
    }

    #[test]
    fn euler_classes() {
        let rho = [Character::new(2, 0b01), Character::new(2, 0b11)];
        assert_eq!(format!("{}", euler_class(2, &rho)), "t1^2 + t1*t2");
        let with_trivial = [Character::new(2, 0b01), Character::trivial(2)];
        assert!(euler_class(2, &with_trivial).is_zero());
        assert!(euler_class(3, &[]).is_one());
    }

    #[test]
    fn division_and_factorization() {
        let d2 = dickson_top(2);
        let factors = factor_linear(&d2).expect("product of forms");
        assert_eq!(
            factors,
            alloc::vec![
                (LinearForm::new(2, 0b01), 1),
                (LinearForm::new(2, 0b10), 1),
                (LinearForm::new(2, 0b11), 1),
            ]
        );
        // t1^2 + t1 t2 + t2^2 is irreducible over F2
        let irred = parse_poly(2, "t1^2 + t1*t2 + t2^2").unwrap();
        assert_eq!(factor_linear(&irred), None);
        // inhomogeneous and zero inputs are rejected
        assert_eq!(factor_linear(&Poly::zero(2)), None);
        assert_eq!(factor_linear(&parse_poly(2, "t1 + 1").unwrap()), None);
    }

    #[test]
    fn factorization_round_trips_on_random_products() {
        let mut state = 0xfac7_0003u64;
        for _ in 0..100 {
            let rank = (splitmix(&mut state) % 3 + 1) as u32;
            let forms = all_forms(rank);
            let count = splitmix(&mut state) % 6 + 1;
            let mut chosen: Vec<LinearForm> = (0..count)
                .map(|_| forms[(splitmix(&mut state) as usize) % forms.len()])
                .collect();
            chosen.sort();
            let mut product = Poly::one(rank);
            for f in &chosen {
                product = product.mul(&f.as_poly());
            }
            let factors = factor_linear(&product).expect("built as a product of forms");
            let mut recovered = Vec::new();
            for (form, mult) in factors {
                for _ in 0..mult {
                    recovered.push(form);
                }
            }
            assert_eq!(recovered, chosen);
        }
    }

    #[test]
    fn monomial_bases_and_dimensions() {
        assert_eq!(monomials_of_degree(1, 3), alloc::vec![alloc::vec![3]]);
        assert_eq!(
            monomials_of_degree(2, 2),
            alloc::vec![alloc::vec![0, 2], alloc::vec![1, 1], alloc::vec![2, 0]]
        );
        for r in 0..=3u32 {
            for d in 0..=8u32 {
                assert_eq!(monomials_of_degree(r, d).len(), poly_dim(r, d));
            }
        }
        assert_eq!(poly_dim(2, 5), 6);
        assert_eq!(poly_dim(3, 4), 15);
    }

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "1", "t", "t^2", "t^4 + t^2 + t"] {
            let p = parse_poly(1, s).unwrap();
            assert_eq!(format!("{p}"), s);
        }
        for s in ["t1^2*t2 + t1*t2^2", "t2^4", "t1*t2*t3"] {
            let p = parse_poly(3, s).unwrap();
            assert_eq!(format!("{p}"), s);
        }
        // duplicate terms cancel over F2
        assert!(parse_poly(1, "t + t").unwrap().is_zero());
        assert!(parse_poly(2, "t3").is_err());
        assert!(parse_poly(1, "x^2").is_err());
    }
}
