//! Exact arithmetic in a truncated graded-commutative polynomial superalgebra.
//!
//! Elements are finite sums of coefficients times normal-form monomials in
//! parity-labeled generators. Odd generators anticommute and square to zero,
//! even generators commute with everything, and every product is truncated at
//! the table's total degree bound, so all identities hold in the quotient by
//! terms of higher degree.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type GenId = u32;

/// ℤ₂ grading label.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn combine(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn sign_if_both_odd(self, other: Parity) -> i8 {
        if self == Parity::Odd && other == Parity::Odd {
            -1
        } else {
            1
        }
    }
}

/// Declaration of a single generator: parity plus its star partner and the
/// sign picked up when the star operation maps onto that partner.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneratorDecl {
    pub id: GenId,
    pub parity: Parity,
    pub star_partner: GenId,
    pub star_sign: i8,
}

/// The generator context every element refers back to: the declarations and
/// the truncation degree. Read-only after construction.
#[derive(Debug)]
pub struct GeneratorTable {
    decls: Vec<GeneratorDecl>,
    degree: usize,
    names: Vec<String>,
}

impl PartialEq for GeneratorTable {
    fn eq(&self, other: &Self) -> bool {
        self.decls == other.decls && self.degree == other.degree
    }
}

impl GeneratorTable {
    /// Builds a table after validating the pairing invariants: ids dense and
    /// distinct, star an involution on ids, parity preserved by the pairing,
    /// and composed star signs equal to (−1)^parity (graded involution).
    pub fn new(decls: Vec<GeneratorDecl>, degree: usize) -> Result<Arc<Self>> {
        Self::with_names(decls, degree, None)
    }

    pub fn with_names(
        decls: Vec<GeneratorDecl>,
        degree: usize,
        names: Option<Vec<String>>,
    ) -> Result<Arc<Self>> {
        if degree == 0 {
            return Err(Error::Malformed(
                "truncation degree must be positive".into(),
            ));
        }
        for (k, d) in decls.iter().enumerate() {
            if d.id as usize != k {
                return Err(Error::Malformed(format!(
                    "generator ids must be dense and sorted; found id {} at position {k}",
                    d.id
                )));
            }
            if d.star_sign != 1 && d.star_sign != -1 {
                return Err(Error::Malformed(format!(
                    "star_sign of {} must be ±1",
                    d.id
                )));
            }
        }
        for d in &decls {
            let p = decls
                .get(d.star_partner as usize)
                .ok_or(Error::UnknownGenerator(d.star_partner))?;
            if p.star_partner != d.id {
                return Err(Error::Malformed(format!(
                    "star pairing of {} is not an involution",
                    d.id
                )));
            }
            if p.parity != d.parity {
                return Err(Error::Malformed(format!(
                    "star partner of {} has a different parity",
                    d.id
                )));
            }
            let expected = match d.parity {
                Parity::Even => 1,
                Parity::Odd => -1,
            };
            if d.star_sign * p.star_sign != expected {
                return Err(Error::Malformed(format!(
                    "composed star signs of {} do not match (−1)^parity",
                    d.id
                )));
            }
        }
        let names = match names {
            Some(n) if n.len() == decls.len() => n,
            Some(_) => return Err(Error::Malformed("names length mismatch".into())),
            None => (0..decls.len()).map(|k| format!("g{k}")).collect(),
        };
        Ok(Arc::new(GeneratorTable {
            decls,
            degree,
            names,
        }))
    }

    /// The standard instantiation pool: `odd_pairs` Grassmann pairs θ_a, θ̄_a
    /// with star(θ) = θ̄, star(θ̄) = −θ, plus `evens` self-paired even
    /// generators.
    pub fn grassmann_pool(odd_pairs: usize, evens: usize, degree: usize) -> Arc<Self> {
        let mut decls = Vec::new();
        let mut names = Vec::new();
        for a in 0..odd_pairs {
            let th = (2 * a) as GenId;
            let tb = th + 1;
            decls.push(GeneratorDecl {
                id: th,
                parity: Parity::Odd,
                star_partner: tb,
                star_sign: 1,
            });
            decls.push(GeneratorDecl {
                id: tb,
                parity: Parity::Odd,
                star_partner: th,
                star_sign: -1,
            });
            names.push(format!("th{}", a + 1));
            names.push(format!("thb{}", a + 1));
        }
        for b in 0..evens {
            let id = (2 * odd_pairs + b) as GenId;
            decls.push(GeneratorDecl {
                id,
                parity: Parity::Even,
                star_partner: id,
                star_sign: 1,
            });
            names.push(format!("e{}", b + 1));
        }
        Self::with_names(decls, degree, Some(names)).expect("pool table is valid")
    }

    /// Same generators, different truncation degree.
    pub fn with_degree(&self, degree: usize) -> Result<Arc<Self>> {
        Self::with_names(self.decls.clone(), degree, Some(self.names.clone()))
    }

    pub fn decls(&self) -> &[GeneratorDecl] {
        &self.decls
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn parity(&self, id: GenId) -> Parity {
        self.decls[id as usize].parity
    }

    pub fn star_partner(&self, id: GenId) -> GenId {
        self.decls[id as usize].star_partner
    }

    pub fn star_sign(&self, id: GenId) -> i8 {
        self.decls[id as usize].star_sign
    }

    pub fn name(&self, id: GenId) -> &str {
        &self.names[id as usize]
    }

    pub fn compatible(&self, other: &Self) -> bool {
        std::ptr::eq(self, other) || self == other
    }

    /// Sorts a factor sequence into normal form and reports the Koszul sign
    /// of the reordering. The sign is 0 when an odd generator repeats or the
    /// degree exceeds the truncation bound.
    pub fn normalize_monomial(&self, factors: &[GenId]) -> Result<NormalMonomial> {
        for &id in factors {
            if id as usize >= self.decls.len() {
                return Err(Error::UnknownGenerator(id));
            }
        }
        Ok(self.normalize_valid(factors.to_vec()))
    }

    /// Normalization for factor lists already known to be in range.
    fn normalize_valid(&self, mut factors: Vec<GenId>) -> NormalMonomial {
        if factors.len() > self.degree {
            return NormalMonomial::Zero;
        }
        let mut sign = 1i8;
        for j in 1..factors.len() {
            for i in 0..j {
                if factors[i] > factors[j]
                    && self.parity(factors[i]) == Parity::Odd
                    && self.parity(factors[j]) == Parity::Odd
                {
                    sign = -sign;
                }
            }
        }
        factors.sort_unstable();
        for w in factors.windows(2) {
            if w[0] == w[1] && self.parity(w[0]) == Parity::Odd {
                return NormalMonomial::Zero;
            }
        }
        NormalMonomial::Term {
            sign,
            monomial: Monomial(factors),
        }
    }
}

/// Result of sorting a factor sequence into normal form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum NormalMonomial {
    /// The product vanishes (odd repetition or truncation).
    Zero,
    Term {
        sign: i8,
        monomial: Monomial,
    },
}

/// A normal-form monomial: generator ids sorted ascending, odd ids strictly
/// increasing, even ids non-decreasing. Ordered by degree first so that map
/// iteration visits low-degree terms first.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Monomial(Vec<GenId>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    /// Wraps ids already known to be in normal form for their table.
    pub(crate) fn from_sorted_ids(ids: Vec<GenId>) -> Self {
        Monomial(ids)
    }

    pub fn ids(&self) -> &[GenId] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parity(&self, table: &GeneratorTable) -> Parity {
        let odd = self
            .0
            .iter()
            .filter(|&&g| table.parity(g) == Parity::Odd)
            .count();
        if odd % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Parity classification of an element.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ParityClass {
    /// The zero element, compatible with any parity.
    Zero,
    Even,
    Odd,
    Mixed,
}

/// A finite sum of coefficients times normal-form monomials over one
/// generator table. Immutable value semantics; no stored coefficient is zero.
#[derive(Clone, Debug)]
pub struct Element<C: Scalar> {
    table: Arc<GeneratorTable>,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> Element<C> {
    pub fn zero(table: &Arc<GeneratorTable>) -> Self {
        Element {
            table: Arc::clone(table),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(table: &Arc<GeneratorTable>) -> Self {
        Self::scalar(table, C::one())
    }

    pub fn scalar(table: &Arc<GeneratorTable>, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::unit(), c);
        }
        Element {
            table: Arc::clone(table),
            terms,
        }
    }

    pub fn generator(table: &Arc<GeneratorTable>, id: GenId) -> Result<Self> {
        if id as usize >= table.len() {
            return Err(Error::UnknownGenerator(id));
        }
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(vec![id]), C::one());
        Ok(Element {
            table: Arc::clone(table),
            terms,
        })
    }

    /// Builds an element from unnormalized (monomial factors, coefficient)
    /// pairs, normalizing and pruning.
    pub fn from_terms<I>(table: &Arc<GeneratorTable>, iter: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<GenId>, C)>,
    {
        let mut out = Self::zero(table);
        for (factors, coeff) in iter {
            match table.normalize_monomial(&factors)? {
                NormalMonomial::Zero => {}
                NormalMonomial::Term { sign, monomial } => {
                    let c = if sign < 0 { coeff.neg() } else { coeff };
                    out.add_term(monomial, c);
                }
            }
        }
        Ok(out)
    }

    /// Builds a single-term element from a monomial already in normal form.
    pub(crate) fn from_normal_monomial(table: &Arc<GeneratorTable>, m: Monomial, c: C) -> Self {
        let mut out = Self::zero(table);
        out.add_term(m, c);
        out
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero_element(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn assert_compatible(&self, other: &Self) {
        assert!(
            self.table.compatible(&other.table),
            "operands belong to different generator tables"
        );
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }

    pub fn neg_ref(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c.neg()))
            .collect();
        Element {
            table: Arc::clone(&self.table),
            terms,
        }
    }

    /// Scalar multiple (coefficients are central).
    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.table);
        }
        let mut terms = BTreeMap::new();
        for (m, a) in &self.terms {
            let p = a.mul(c);
            if !p.is_zero() {
                terms.insert(m.clone(), p);
            }
        }
        Element {
            table: Arc::clone(&self.table),
            terms,
        }
    }

    /// Distributive product with Koszul signs, truncated at the table degree.
    /// Errors when the operands live over different generator tables.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if !self.table.compatible(&other.table) {
            return Err(Error::IncompatibleContext);
        }
        let bound = self.table.degree();
        let mut out = Self::zero(&self.table);
        let mut buf: Vec<GenId> = Vec::new();
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            for (mb, cb) in &other.terms {
                // terms ascend by degree, so the rest of the inner loop is dead
                if da + mb.degree() > bound {
                    break;
                }
                buf.clear();
                buf.extend_from_slice(ma.ids());
                buf.extend_from_slice(mb.ids());
                match self.table.normalize_valid(std::mem::take(&mut buf)) {
                    NormalMonomial::Zero => {}
                    NormalMonomial::Term { sign, monomial } => {
                        let mut c = ca.mul(cb);
                        if sign < 0 {
                            c = c.neg();
                        }
                        out.add_term(monomial, c);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Degree-0 coefficient (zero if absent).
    pub fn body(&self) -> C {
        self.terms
            .get(&Monomial::unit())
            .cloned()
            .unwrap_or_else(C::zero)
    }

    /// The element minus its body; nilpotent in the truncated ring.
    pub fn soul(&self) -> Self {
        let mut out = self.clone();
        out.terms.remove(&Monomial::unit());
        out
    }

    /// The antilinear star morphism: conjugates coefficients and maps each
    /// generator to its signed star partner, in order.
    pub fn star(&self) -> Self {
        let mut out = Self::zero(&self.table);
        for (m, c) in &self.terms {
            let mut coeff = c.conj();
            let mut mapped = Vec::with_capacity(m.degree());
            for &g in m.ids() {
                if self.table.star_sign(g) < 0 {
                    coeff = coeff.neg();
                }
                mapped.push(self.table.star_partner(g));
            }
            match self.table.normalize_valid(mapped) {
                NormalMonomial::Zero => unreachable!("star preserves monomial structure"),
                NormalMonomial::Term { sign, monomial } => {
                    if sign < 0 {
                        coeff = coeff.neg();
                    }
                    out.add_term(monomial, coeff);
                }
            }
        }
        out
    }

    pub fn is_star_real(&self) -> bool {
        self.star() == *self
    }

    pub fn parity_class(&self) -> ParityClass {
        let mut seen: Option<Parity> = None;
        for m in self.terms.keys() {
            let p = m.parity(&self.table);
            match seen {
                None => seen = Some(p),
                Some(q) if q == p => {}
                Some(_) => return ParityClass::Mixed,
            }
        }
        match seen {
            None => ParityClass::Zero,
            Some(Parity::Even) => ParityClass::Even,
            Some(Parity::Odd) => ParityClass::Odd,
        }
    }

    /// Whether every term has the given parity; vacuously true for zero.
    pub fn has_parity(&self, p: Parity) -> bool {
        match self.parity_class() {
            ParityClass::Zero => true,
            ParityClass::Even => p == Parity::Even,
            ParityClass::Odd => p == Parity::Odd,
            ParityClass::Mixed => false,
        }
    }

    /// Inverse of an even element with invertible body, via the truncated
    /// geometric series body⁻¹·Σ_k (−soul/body)^k.
    pub fn invert_even(&self) -> Result<Self> {
        match self.parity_class() {
            ParityClass::Even | ParityClass::Zero => {}
            other => {
                return Err(Error::Parity(format!(
                    "invert_even requires an even element, got {other:?}"
                )))
            }
        }
        let body = self.body();
        let binv = body.inv().ok_or_else(|| {
            Error::NotInvertible("element body is zero or below tolerance".into())
        })?;
        let x = self.soul().scale(&binv);
        let mut acc = Self::one(&self.table);
        let mut pow = Self::one(&self.table);
        for k in 1..=self.table.degree() {
            pow = pow.try_mul(&x)?;
            if pow.is_zero_element() {
                break;
            }
            if k % 2 == 1 {
                acc = acc.sub_ref(&pow);
            } else {
                acc = acc.add_ref(&pow);
            }
        }
        Ok(acc.scale(&binv))
    }

    /// Square root of an even element, via the truncated binomial series
    /// √body·Σ_k C(1/2,k)(soul/body)^k. The root has positive real body, so
    /// star-fixed inputs get star-fixed roots.
    pub fn sqrt_even(&self) -> Result<Self> {
        match self.parity_class() {
            ParityClass::Even | ParityClass::Zero => {}
            other => {
                return Err(Error::Parity(format!(
                    "sqrt_even requires an even element, got {other:?}"
                )))
            }
        }
        let body = self.body();
        let root = body.body_sqrt().ok_or_else(|| {
            Error::Domain(if C::EXACT {
                "exact-mode sqrt_even requires a normalized body equal to 1".into()
            } else {
                "float-mode sqrt_even requires a real positive body".into()
            })
        })?;
        let binv = body.inv().expect("body with a square root is invertible");
        let x = self.soul().scale(&binv);
        let mut acc = Self::one(&self.table);
        let mut pow = Self::one(&self.table);
        let mut coeff = C::one();
        for k in 1..=self.table.degree() as i64 {
            pow = pow.try_mul(&x)?;
            if pow.is_zero_element() {
                break;
            }
            // C(1/2,k) = C(1/2,k−1)·(3−2k)/(2k)
            coeff = coeff
                .mul(&C::from_int(3 - 2 * k))
                .mul(&C::from_int(2 * k).inv().expect("nonzero integer"));
            acc = acc.add_ref(&pow.scale(&coeff));
        }
        Ok(acc.scale(&root))
    }

    /// Re-expresses the element over a table with the same generators and a
    /// (usually lower) truncation degree, dropping the tail.
    pub fn truncated(&self, table: &Arc<GeneratorTable>) -> Result<Self> {
        if table.decls() != self.table.decls() {
            return Err(Error::IncompatibleContext);
        }
        let mut out = Self::zero(table);
        for (m, c) in &self.terms {
            if m.degree() <= table.degree() {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// Largest deviation between matching coefficients (float diagnostics).
    pub fn max_deviation(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for (m, c) in &self.terms {
            worst = worst.max(c.deviation(&other.coeff(m)));
        }
        for (m, c) in &other.terms {
            if !self.terms.contains_key(m) {
                worst = worst.max(c.deviation(&C::zero()));
            }
        }
        worst
    }

    /// A random element with `terms` homogeneous monomials of the requested
    /// parity (or mixed when `parity` is `None`), degrees in `1..=max_degree`.
    pub fn random<R: Rng + ?Sized>(
        rng: &mut R,
        table: &Arc<GeneratorTable>,
        parity: Option<Parity>,
        terms: usize,
        max_degree: usize,
    ) -> Self {
        let mut out = Self::zero(table);
        if table.is_empty() {
            return out;
        }
        let max_degree = max_degree.min(table.degree()).max(1);
        for _ in 0..terms {
            'attempt: for _ in 0..64 {
                let d = rng.random_range(1..=max_degree);
                let factors: Vec<GenId> = (0..d)
                    .map(|_| rng.random_range(0..table.len() as GenId))
                    .collect();
                match table.normalize_valid(factors) {
                    NormalMonomial::Zero => continue 'attempt,
                    NormalMonomial::Term { monomial, .. } => {
                        if let Some(p) = parity {
                            if monomial.parity(table) != p {
                                continue 'attempt;
                            }
                        }
                        out.add_term(monomial, C::random_small(rng));
                        break 'attempt;
                    }
                }
            }
        }
        out
    }
}

impl<C: Scalar> PartialEq for Element<C> {
    fn eq(&self, other: &Self) -> bool {
        if !self.table.compatible(&other.table) {
            return false;
        }
        for (m, c) in &self.terms {
            if *c != other.coeff(m) {
                return false;
            }
        }
        for (m, c) in &other.terms {
            if !self.terms.contains_key(m) && !c.is_zero() {
                return false;
            }
        }
        true
    }
}

impl<C: Scalar> Add for &Element<C> {
    type Output = Element<C>;
    fn add(self, rhs: &Element<C>) -> Element<C> {
        self.add_ref(rhs)
    }
}

impl<C: Scalar> Sub for &Element<C> {
    type Output = Element<C>;
    fn sub(self, rhs: &Element<C>) -> Element<C> {
        self.sub_ref(rhs)
    }
}

impl<C: Scalar> Neg for &Element<C> {
    type Output = Element<C>;
    fn neg(self) -> Element<C> {
        self.neg_ref()
    }
}

impl<C: Scalar> Mul for &Element<C> {
    type Output = Element<C>;
    fn mul(self, rhs: &Element<C>) -> Element<C> {
        self.try_mul(rhs)
            .expect("operands belong to different generator tables")
    }
}

impl<C: Scalar> fmt::Display for Element<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m.is_unit() {
                write!(f, "{c}")?;
            } else {
                let name = m
                    .ids()
                    .iter()
                    .map(|&g| self.table.name(g).to_string())
                    .collect::<Vec<_>>()
                    .join("·");
                if c.is_one() {
                    write!(f, "{name}")?;
                } else {
                    write!(f, "{c}·{name}")?;
                }
            }
        }
        Ok(())
    }
}
