//! Complex-parallelisable invariant models: structure equations, the
//! differentials `del`, `delbar`, `d_pi`, the Schouten bracket, and the
//! Poisson validation machinery.
//!
//! A model is given by its holomorphic structure 2-forms `del w^k`; the
//! antiholomorphic differential is the coefficient-conjugate acting on barred
//! generators, `del` kills barred generators and `delbar` kills unbarred ones.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::exterior::{
    anchor, contract, contract_vector_mono, merge_sign, pair, wedge_mono, Form, IndexSet,
    Monomial, Polyvector,
};
use crate::scalar::GaussianRational;

pub use crate::cli::models::{iwasawa3, nil6, torus};

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("generator index {0} out of range 1..={1}")]
    BadGenerator(u8, u8),
    #[error("structure form for w^{0} is not a (2,0)-form")]
    NotTwoForm(u8),
    #[error("duplicate structure equation for w^{0}")]
    DuplicateStructure(u8),
    #[error("complex dimension {0} unsupported (expected 1..=8)")]
    BadDimension(u8),
    #[error("expected a {0}")]
    WrongDegree(&'static str),
}

#[derive(Debug, Error, PartialEq)]
pub enum PoissonError {
    #[error("bivector is not of pure degree 2")]
    NotBivector,
    #[error("Schouten self-bracket does not vanish: [pi,pi] = {witness}")]
    NotPoisson { witness: Polyvector },
}

/// Every basis monomial of the full bigraded algebra on `n` generators.
pub fn all_monomials(n: u8) -> impl Iterator<Item = Monomial> {
    let mask_count = 1u32 << n;
    (0..mask_count).flat_map(move |h| {
        (0..mask_count).map(move |a| Monomial::new(IndexSet(h << 1), IndexSet(a << 1)))
    })
}

/// A left-invariant complex-parallelisable model of complex dimension `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieModel {
    name: String,
    n: u8,
    d_hol: BTreeMap<u8, Form>,
}

/// Outcome of the integrability check: each failing generator together with
/// the nonzero 3-form `del(del w^k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub failures: Vec<(u8, Form)>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            write!(f, "integrable: del^2 = 0 on all generators")
        } else {
            writeln!(f, "not integrable:")?;
            for (k, form) in &self.failures {
                writeln!(f, "  del(del w^{k}) = {}", form.ascii())?;
            }
            Ok(())
        }
    }
}

impl LieModel {
    /// Builds a model from the structure equations `del w^k = form`.
    /// Generators without an equation are closed. Structural validation only;
    /// integrability is checked separately by [`LieModel::validate`].
    pub fn new(
        name: impl Into<String>,
        n: u8,
        structure: Vec<(u8, Form)>,
    ) -> Result<Self, ModelError> {
        if n == 0 || n > 8 {
            return Err(ModelError::BadDimension(n));
        }
        let mut d_hol = BTreeMap::new();
        for (k, form) in structure {
            if k < 1 || k > n {
                return Err(ModelError::BadGenerator(k, n));
            }
            for (m, _) in form.terms() {
                if m.bidegree() != (2, 0) {
                    return Err(ModelError::NotTwoForm(k));
                }
                if m.hol.max_index().unwrap_or(0) > n {
                    return Err(ModelError::BadGenerator(m.hol.max_index().unwrap(), n));
                }
            }
            if form.is_zero() {
                continue;
            }
            if d_hol.insert(k, form).is_some() {
                return Err(ModelError::DuplicateStructure(k));
            }
        }
        Ok(LieModel { name: name.into(), n, d_hol })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    /// `del w^k`, zero when the generator is closed.
    pub fn d_gen(&self, k: u8) -> Form {
        self.d_hol.get(&k).cloned().unwrap_or_else(|| Form::zero(self.n))
    }

    /// Generators with a nonzero structure form, ascending.
    pub fn structure(&self) -> impl Iterator<Item = (&u8, &Form)> {
        self.d_hol.iter()
    }

    /// `delbar wb^k`: the coefficient-conjugate of `del w^k` with all
    /// indices barred.
    pub fn dbar_gen(&self, k: u8) -> Form {
        let mut out = Form::zero(self.n);
        if let Some(f) = self.d_hol.get(&k) {
            for (m, c) in f.terms() {
                out.add_term(Monomial::new(IndexSet::EMPTY, m.hol), c.conj());
            }
        }
        out
    }

    /// Integrability report: lists every generator with `del(del w^k) != 0`.
    pub fn validate(&self) -> ValidationReport {
        let mut failures = Vec::new();
        for k in 1..=self.n {
            let dd = self.del(&self.d_gen(k));
            if !dd.is_zero() {
                failures.push((k, dd));
            }
        }
        ValidationReport { failures }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    /// The holomorphic volume monomial `w^{1..n}`.
    pub fn volume(&self) -> Monomial {
        Monomial::new(IndexSet(((1u32 << self.n) - 1) << 1), IndexSet::EMPTY)
    }

    /// Holomorphic differential, the derivation extending `del w^k`;
    /// raises bidegree by (1,0) and kills barred generators.
    pub fn del(&self, a: &Form) -> Form {
        let mut out = Form::zero(self.n);
        for (m, c) in a.terms() {
            for (pos, i) in m.hol.iter().enumerate() {
                let d = self.d_gen(i);
                if d.is_zero() {
                    continue;
                }
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                let rest = Monomial::new(m.hol.remove(i), m.anti);
                for (dm, dc) in d.terms() {
                    // The inserted 2-form is even, so pulling it to the front
                    // costs nothing beyond the position sign.
                    if let Some((w, s)) = wedge_mono(*dm, rest) {
                        let mut v = c * dc;
                        if sign * s < 0 {
                            v = -v;
                        }
                        out.add_term(w, v);
                    }
                }
            }
        }
        out
    }

    /// Antiholomorphic differential; raises bidegree by (0,1) and kills
    /// unbarred generators.
    pub fn delbar(&self, a: &Form) -> Form {
        let mut out = Form::zero(self.n);
        for (m, c) in a.terms() {
            let p = m.hol.len() as usize;
            for (pos, j) in m.anti.iter().enumerate() {
                let d = self.dbar_gen(j);
                if d.is_zero() {
                    continue;
                }
                let sign = if (p + pos).is_multiple_of(2) { 1 } else { -1 };
                let rest = Monomial::new(m.hol, m.anti.remove(j));
                for (dm, dc) in d.terms() {
                    if let Some((w, s)) = wedge_mono(*dm, rest) {
                        let mut v = c * dc;
                        if sign * s < 0 {
                            v = -v;
                        }
                        out.add_term(w, v);
                    }
                }
            }
        }
        out
    }

    /// The Poisson boundary `d_pi(a) = iota_pi(del a) - del(iota_pi a)`;
    /// lowers bidegree by (1,0).
    pub fn d_pi(&self, pi: &Polyvector, a: &Form) -> Form {
        let first = contract(pi, &self.del(a)).expect("same n by construction");
        let second = self.del(&contract(pi, a).expect("same n by construction"));
        first.sub(&second).expect("same n")
    }

    /// The Lie bracket `[X_i, X_j]` read off from the structure equations via
    /// `<del w^k, X_i ^ X_j> = -c^k_ij`.
    pub fn lie_bracket(&self, i: u8, j: u8) -> Polyvector {
        if i == j {
            return Polyvector::zero(self.n);
        }
        if i > j {
            return self.lie_bracket(j, i).neg();
        }
        let probe = Monomial::hol_from(&[i, j]);
        let mut out = Polyvector::zero(self.n);
        for (k, f) in &self.d_hol {
            let c = f.coeff(&probe);
            if !c.is_zero() {
                out.add_term(IndexSet::EMPTY.insert(*k), -c);
            }
        }
        out
    }

    /// Graded Schouten bracket of constant-coefficient polyvectors,
    /// extending the Lie bracket by the biderivation law. The degree of the
    /// result is `deg a + deg b - 1`; brackets with constants vanish.
    pub fn schouten(&self, a: &Polyvector, b: &Polyvector) -> Polyvector {
        let mut out = Polyvector::zero(self.n);
        for (sa, ca) in a.terms() {
            for (sb, cb) in b.terms() {
                self.schouten_mono(*sa, *sb, &(ca * cb), &mut out);
            }
        }
        out
    }

    fn schouten_mono(
        &self,
        a: IndexSet,
        b: IndexSet,
        coeff: &GaussianRational,
        out: &mut Polyvector,
    ) {
        for (ka, i) in a.iter().enumerate() {
            for (kb, j) in b.iter().enumerate() {
                let bracket = self.lie_bracket(i, j);
                if bracket.is_zero() {
                    continue;
                }
                // (-1)^{k+l} for 1-based positions k, l.
                let pos_sign = if (ka + kb) % 2 == 0 { 1i8 } else { -1 };
                let rest_a = a.remove(i);
                let rest_b = b.remove(j);
                let Some(tail_sign) = merge_sign(rest_a, rest_b) else { continue };
                let tail = IndexSet(rest_a.0 | rest_b.0);
                for (sm, cm) in bracket.terms() {
                    let m = sm.iter().next().expect("degree 1 bracket");
                    let Some(head_sign) = merge_sign(IndexSet::EMPTY.insert(m), tail) else {
                        continue;
                    };
                    let mut v = coeff * cm;
                    if pos_sign * tail_sign * head_sign < 0 {
                        v = -v;
                    }
                    out.add_term(tail.insert(m), v);
                }
            }
        }
    }

    /// Schouten self-bracket test, cross-checked against `d_pi . d_pi = 0`
    /// on every basis monomial. The Schouten test is the definition; the
    /// operator test is the consistency oracle it implies. A vanishing
    /// bracket with a non-vanishing square is a bug in the calculus, never a
    /// data answer. (The converse can fail honestly: the square may vanish
    /// for a non-Poisson bivector when `del` already kills all invariant
    /// 2-forms, as on the Iwasawa threefold.)
    pub fn check_poisson(&self, pi: &Polyvector) -> Result<(), PoissonError> {
        if !pi.is_zero() && pi.degree() != Some(2) {
            return Err(PoissonError::NotBivector);
        }
        let witness = self.schouten(pi, pi);
        let schouten_ok = witness.is_zero();

        let operator_ok = all_monomials(self.n).all(|m| {
            let f = Form::monomial(self.n, m);
            self.d_pi(pi, &self.d_pi(pi, &f)).is_zero()
        });
        assert!(
            !schouten_ok || operator_ok,
            "internal error: [pi,pi] = 0 but d_pi^2 != 0 for pi = {pi}"
        );

        if schouten_ok {
            Ok(())
        } else {
            Err(PoissonError::NotPoisson { witness })
        }
    }

    /// Lie derivative `L_X = iota_X del + del iota_X` of a degree-1
    /// polyvector on invariant forms.
    pub fn lie_derivative(&self, x: &Polyvector, a: &Form) -> Form {
        let ix = |f: &Form| -> Form {
            let mut out = Form::zero(self.n);
            for (s, c) in x.terms() {
                let i = s.iter().next().expect("degree 1 vector");
                for (m, cm) in f.terms() {
                    if let Some((w, sign)) = contract_vector_mono(i, *m) {
                        let mut v = c * cm;
                        if sign < 0 {
                            v = -v;
                        }
                        out.add_term(w, v);
                    }
                }
            }
            out
        };
        ix(&self.del(a)).add(&self.del(&ix(a))).expect("same n")
    }

    /// The bracket of invariant (1,0)-forms induced by `d_pi`:
    /// `[a, b] = L_{pi#a} b - L_{pi#b} a - del(pi(a,b))`.
    pub fn form_bracket(
        &self,
        pi: &Polyvector,
        alpha: &Form,
        beta: &Form,
    ) -> Result<Form, ModelError> {
        for f in [alpha, beta] {
            if !f.is_zero() && f.bidegree() != Some((1, 0)) {
                return Err(ModelError::WrongDegree("(1,0)-form"));
            }
        }
        let pa = anchor(pi, alpha).expect("validated degrees");
        let pb = anchor(pi, beta).expect("validated degrees");
        let scalar = pair(&pa, beta);
        let scalar_form = Form::term(self.n, Monomial::ONE, scalar);
        let mut out = self.lie_derivative(&pa, beta);
        out = out.sub(&self.lie_derivative(&pb, alpha)).expect("same n");
        out = out.sub(&self.del(&scalar_form)).expect("same n");
        Ok(out)
    }
}

/// A Poisson bivector validated against a model: pure degree 2, vanishing
/// Schouten self-bracket, `d_pi^2 = 0` and `delbar d_pi + d_pi delbar = 0`
/// on every basis monomial.
#[derive(Clone, Debug)]
pub struct PoissonSpec {
    pi: Polyvector,
}

impl PoissonSpec {
    pub fn validate(model: &LieModel, pi: Polyvector) -> Result<Self, PoissonError> {
        model.check_poisson(&pi)?;
        for m in all_monomials(model.n()) {
            let f = Form::monomial(model.n(), m);
            let anti = model
                .delbar(&model.d_pi(&pi, &f))
                .add(&model.d_pi(&pi, &model.delbar(&f)))
                .expect("same n");
            assert!(
                anti.is_zero(),
                "internal error: delbar and d_pi fail to anticommute on {}",
                m.ascii()
            );
        }
        Ok(PoissonSpec { pi })
    }

    pub fn pi(&self) -> &Polyvector {
        &self.pi
    }
}
