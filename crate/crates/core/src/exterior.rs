//! Bigraded exterior algebra on generators `w^1..w^n, wb^1..wb^n` and
//! holomorphic polyvectors on `X_1..X_n`, over Gaussian rationals.
//!
//! Monomials are encoded as index bitsets in the fixed global order
//! `w^1 < ... < w^n < wb^1 < ... < wb^n`; a monomial carries no sign, signs
//! live in coefficients. Koszul signs are parities of transpositions computed
//! from popcounts.
//!
//! The composite contraction is `iota_{X_i ^ X_j} = iota_{X_j} o iota_{X_i}`
//! (first factor contracts first). Together with the wedge order and the
//! definition of the Poisson boundary this is the convention chain validated
//! by the golden identity tests in `model`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::scalar::GaussianRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExteriorError {
    #[error("dimension mismatch: n = {0} vs n = {1}")]
    DimensionMismatch(u8, u8),
    #[error("expected {expected}, found degree {found:?}")]
    WrongDegree { expected: &'static str, found: Option<(u8, u8)> },
}

/// A subset of the generator indices `{1..n}`, stored as a bitset
/// (bit `k` set means index `k` is present).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct IndexSet(pub u32);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    pub fn from_indices(indices: &[u8]) -> Self {
        let mut bits = 0u32;
        for &i in indices {
            assert!((1..=31).contains(&i), "generator index out of range");
            assert!(bits & (1 << i) == 0, "repeated generator index");
            bits |= 1 << i;
        }
        IndexSet(bits)
    }

    pub fn len(self) -> u8 {
        self.0.count_ones() as u8
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: u8) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn insert(self, i: u8) -> IndexSet {
        IndexSet(self.0 | (1 << i))
    }

    pub fn remove(self, i: u8) -> IndexSet {
        IndexSet(self.0 & !(1 << i))
    }

    pub fn max_index(self) -> Option<u8> {
        (self.0 != 0).then(|| 31 - self.0.leading_zeros() as u8)
    }

    /// Indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = u8> {
        (1..=self.max_index().unwrap_or(0)).filter(move |&i| self.contains(i))
    }

    /// Number of members strictly below `i`.
    pub fn count_below(self, i: u8) -> u32 {
        (self.0 & ((1 << i) - 1)).count_ones()
    }

    /// Number of members strictly above `i`.
    pub fn count_above(self, i: u8) -> u32 {
        (self.0 >> (i + 1)).count_ones()
    }
}

/// Koszul sign (+1/-1) for merging the concatenation `A, B` of two disjoint
/// sorted index lists into one sorted list; `None` if they overlap.
pub(crate) fn merge_sign(a: IndexSet, b: IndexSet) -> Option<i8> {
    if a.0 & b.0 != 0 {
        return None;
    }
    let mut inversions = 0u32;
    for i in b.iter() {
        inversions += a.count_above(i);
    }
    Some(if inversions.is_multiple_of(2) { 1 } else { -1 })
}

/// All subsets of `{1..n}` with `k` elements, in increasing bitset order.
pub fn subsets(n: u8, k: u8) -> Vec<IndexSet> {
    let mut out = Vec::new();
    for bits in 0u32..(1 << n) {
        if bits.count_ones() as u8 == k {
            out.push(IndexSet(bits << 1));
        }
    }
    out
}

/// A basis monomial `w^I ^ wb^J` of the bigraded exterior algebra.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial {
    pub hol: IndexSet,
    pub anti: IndexSet,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { hol: IndexSet::EMPTY, anti: IndexSet::EMPTY };

    pub fn new(hol: IndexSet, anti: IndexSet) -> Self {
        Monomial { hol, anti }
    }

    pub fn hol_from(indices: &[u8]) -> Self {
        Monomial::new(IndexSet::from_indices(indices), IndexSet::EMPTY)
    }

    pub fn anti_from(indices: &[u8]) -> Self {
        Monomial::new(IndexSet::EMPTY, IndexSet::from_indices(indices))
    }

    pub fn bidegree(&self) -> (u8, u8) {
        (self.hol.len(), self.anti.len())
    }

    /// ASCII rendering, e.g. `w^134 ^ wb^35`; the empty monomial is `1`.
    pub fn ascii(&self) -> String {
        let digits = |s: IndexSet| s.iter().map(|i| i.to_string()).collect::<String>();
        match (self.hol.is_empty(), self.anti.is_empty()) {
            (true, true) => "1".to_string(),
            (false, true) => format!("w^{}", digits(self.hol)),
            (true, false) => format!("wb^{}", digits(self.anti)),
            (false, false) => format!("w^{} ^ wb^{}", digits(self.hol), digits(self.anti)),
        }
    }

    /// Unicode rendering for text reports, e.g. `w^{134 3̄5̄}`.
    pub fn pretty(&self) -> String {
        if self.hol.is_empty() && self.anti.is_empty() {
            return "1".to_string();
        }
        let mut s = String::from("w^{");
        for i in self.hol.iter() {
            s.push_str(&i.to_string());
        }
        if !self.hol.is_empty() && !self.anti.is_empty() {
            s.push(' ');
        }
        for i in self.anti.iter() {
            s.push_str(&i.to_string());
            s.push('\u{0304}');
        }
        s.push('}');
        s
    }
}

/// Wedge of two basis monomials with its Koszul sign; `None` when a
/// generator repeats.
pub(crate) fn wedge_mono(a: Monomial, b: Monomial) -> Option<(Monomial, i8)> {
    let sh = merge_sign(a.hol, b.hol)?;
    let sa = merge_sign(a.anti, b.anti)?;
    // b's holomorphic block moves past a's antiholomorphic block.
    let cross = (a.anti.len() as u32 * b.hol.len() as u32) % 2;
    let sign = sh * sa * if cross == 0 { 1 } else { -1 };
    Some((
        Monomial::new(IndexSet(a.hol.0 | b.hol.0), IndexSet(a.anti.0 | b.anti.0)),
        sign,
    ))
}

/// Interior product by the single holomorphic vector `X_k`.
pub(crate) fn contract_vector_mono(k: u8, m: Monomial) -> Option<(Monomial, i8)> {
    if !m.hol.contains(k) {
        return None;
    }
    let sign = if m.hol.count_below(k).is_multiple_of(2) { 1 } else { -1 };
    Some((Monomial::new(m.hol.remove(k), m.anti), sign))
}

/// A sparse linear combination of monomials over Q(i). Zero coefficients are
/// never stored; all monomials live on the same `n` generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Form {
    n: u8,
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl Form {
    pub fn zero(n: u8) -> Self {
        Form { n, terms: BTreeMap::new() }
    }

    pub fn term(n: u8, m: Monomial, c: GaussianRational) -> Self {
        let mut f = Form::zero(n);
        f.add_term(m, c);
        f
    }

    pub fn monomial(n: u8, m: Monomial) -> Self {
        Form::term(n, m, GaussianRational::one())
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        debug_assert!(m.hol.max_index().unwrap_or(1) <= self.n);
        debug_assert!(m.anti.max_index().unwrap_or(1) <= self.n);
        let entry = self.terms.entry(m).or_insert_with(GaussianRational::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Form) -> Result<Form, ExteriorError> {
        if self.n != other.n {
            return Err(ExteriorError::DimensionMismatch(self.n, other.n));
        }
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Form) -> Result<Form, ExteriorError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Form {
        self.scale(&GaussianRational::from_int(-1))
    }

    pub fn scale(&self, c: &GaussianRational) -> Form {
        if c.is_zero() {
            return Form::zero(self.n);
        }
        Form {
            n: self.n,
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    /// The common bidegree of all terms, if homogeneous (zero counts as any).
    pub fn bidegree(&self) -> Option<(u8, u8)> {
        let mut it = self.terms.keys();
        let first = it.next()?.bidegree();
        it.all(|m| m.bidegree() == first).then_some(first)
    }

    pub fn ascii(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            // mixed coefficients keep their parentheses for readability
            let mixed = c.to_string().contains('+') || mag.contains('-');
            let mag = if mixed { format!("({})", c) } else { mag };
            if i == 0 {
                if neg && !mixed {
                    s.push_str("- ");
                }
            } else if neg && !mixed {
                s.push_str(" - ");
            } else {
                s.push_str(" + ");
            }
            if mag == "1" && !(m.hol.is_empty() && m.anti.is_empty()) {
                s.push_str(&m.ascii());
            } else if m.hol.is_empty() && m.anti.is_empty() {
                s.push_str(&mag);
            } else {
                s.push_str(&format!("{} {}", mag, m.ascii()));
            }
        }
        s
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ascii())
    }
}

/// A holomorphic polyvector: sparse combination of `X_I = X_{i_1}^...^X_{i_p}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polyvector {
    n: u8,
    terms: BTreeMap<IndexSet, GaussianRational>,
}

impl Polyvector {
    pub fn zero(n: u8) -> Self {
        Polyvector { n, terms: BTreeMap::new() }
    }

    pub fn term(n: u8, s: IndexSet, c: GaussianRational) -> Self {
        let mut p = Polyvector::zero(n);
        p.add_term(s, c);
        p
    }

    /// `X_i ^ X_j` with unit coefficient.
    pub fn wedge_pair(n: u8, i: u8, j: u8) -> Self {
        assert!(i != j && i >= 1 && j >= 1 && i <= n && j <= n);
        let sign = if i < j { 1 } else { -1 };
        Polyvector::term(
            n,
            IndexSet::from_indices(&[i.min(j), i.max(j)]),
            GaussianRational::from_int(sign),
        )
    }

    pub fn basis_vector(n: u8, i: u8) -> Self {
        Polyvector::term(n, IndexSet::from_indices(&[i]), GaussianRational::one())
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IndexSet, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, s: &IndexSet) -> GaussianRational {
        self.terms.get(s).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn add_term(&mut self, s: IndexSet, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        debug_assert!(s.max_index().unwrap_or(1) <= self.n);
        let entry = self.terms.entry(s).or_insert_with(GaussianRational::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&s);
        }
    }

    pub fn add(&self, other: &Polyvector) -> Result<Polyvector, ExteriorError> {
        if self.n != other.n {
            return Err(ExteriorError::DimensionMismatch(self.n, other.n));
        }
        let mut out = self.clone();
        for (s, c) in other.terms() {
            out.add_term(*s, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &GaussianRational) -> Polyvector {
        if c.is_zero() {
            return Polyvector::zero(self.n);
        }
        Polyvector {
            n: self.n,
            terms: self.terms.iter().map(|(s, v)| (*s, v * c)).collect(),
        }
    }

    pub fn neg(&self) -> Polyvector {
        self.scale(&GaussianRational::from_int(-1))
    }

    /// Common degree of all terms, if homogeneous.
    pub fn degree(&self) -> Option<u8> {
        let mut it = self.terms.keys();
        let first = it.next()?.len();
        it.all(|s| s.len() == first).then_some(first)
    }

    pub fn ascii(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let atom = |s: IndexSet| {
            s.iter().map(|i| format!("X{i}")).collect::<Vec<_>>().join("^")
        };
        let mut out = String::new();
        for (i, (s, c)) in self.terms.iter().enumerate() {
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            let mixed = mag.contains('+') || mag.contains('-');
            let mag = if mixed { format!("({})", c) } else { mag };
            if i == 0 {
                if neg && !mixed {
                    out.push_str("- ");
                }
            } else if neg && !mixed {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            if s.is_empty() {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&atom(*s));
            } else {
                out.push_str(&format!("{} {}", mag, atom(*s)));
            }
        }
        out
    }
}

impl fmt::Display for Polyvector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ascii())
    }
}

/// Exterior product of forms. Bilinear, associative, Koszul-signed.
pub fn wedge(a: &Form, b: &Form) -> Result<Form, ExteriorError> {
    if a.n() != b.n() {
        return Err(ExteriorError::DimensionMismatch(a.n(), b.n()));
    }
    let mut out = Form::zero(a.n());
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            if let Some((m, sign)) = wedge_mono(*ma, *mb) {
                let mut c = ca * cb;
                if sign < 0 {
                    c = -c;
                }
                out.add_term(m, c);
            }
        }
    }
    Ok(out)
}

/// Contraction by a degree-2 polyvector; lowers bidegree by (2,0).
///
/// For `pi = X_i ^ X_j` (i < j) this is `iota_{X_j}(iota_{X_i}(a))`.
pub fn contract(pi: &Polyvector, a: &Form) -> Result<Form, ExteriorError> {
    if pi.n() != a.n() {
        return Err(ExteriorError::DimensionMismatch(pi.n(), a.n()));
    }
    if !pi.is_zero() && pi.degree() != Some(2) {
        return Err(ExteriorError::WrongDegree {
            expected: "a degree-2 polyvector",
            found: pi.degree().map(|d| (d, 0)),
        });
    }
    let mut out = Form::zero(a.n());
    for (s, c) in pi.terms() {
        let mut it = s.iter();
        let (i, j) = (it.next().expect("degree 2"), it.next().expect("degree 2"));
        for (m, cm) in a.terms() {
            if let Some((m1, s1)) = contract_vector_mono(i, *m) {
                if let Some((m2, s2)) = contract_vector_mono(j, m1) {
                    let mut v = c * cm;
                    if s1 * s2 < 0 {
                        v = -v;
                    }
                    out.add_term(m2, v);
                }
            }
        }
    }
    Ok(out)
}

/// The anchor map `pi#(alpha) = iota_alpha(pi)` on a (1,0)-form, with the
/// same sign family as `contract`: for `pi = X_i ^ X_j`,
/// `pi#(w^i) = X_j` and `pi#(w^j) = -X_i`.
pub fn anchor(pi: &Polyvector, alpha: &Form) -> Result<Polyvector, ExteriorError> {
    if pi.n() != alpha.n() {
        return Err(ExteriorError::DimensionMismatch(pi.n(), alpha.n()));
    }
    if !pi.is_zero() && pi.degree() != Some(2) {
        return Err(ExteriorError::WrongDegree {
            expected: "a degree-2 polyvector",
            found: pi.degree().map(|d| (d, 0)),
        });
    }
    if !alpha.is_zero() && alpha.bidegree() != Some((1, 0)) {
        return Err(ExteriorError::WrongDegree {
            expected: "a (1,0)-form",
            found: alpha.bidegree(),
        });
    }
    let mut out = Polyvector::zero(pi.n());
    for (s, c) in pi.terms() {
        let mut it = s.iter();
        let (i, j) = (it.next().expect("degree 2"), it.next().expect("degree 2"));
        for (m, cm) in alpha.terms() {
            let a = m.hol.iter().next().expect("(1,0) monomial");
            if a == i {
                out.add_term(IndexSet::EMPTY.insert(j), c * cm);
            } else if a == j {
                out.add_term(IndexSet::EMPTY.insert(i), -(c * cm));
            }
        }
    }
    Ok(out)
}

/// Evaluates a degree-1 polyvector against a (1,0)-form: `<Sum d_i X_i, Sum e_j w^j> = Sum d_i e_i`.
pub fn pair(v: &Polyvector, alpha: &Form) -> GaussianRational {
    let mut acc = GaussianRational::zero();
    for (s, c) in v.terms() {
        debug_assert_eq!(s.len(), 1);
        let i = s.iter().next().expect("degree 1");
        let m = Monomial::hol_from(&[i]);
        acc += &(c * &alpha.coeff(&m));
    }
    acc
}
