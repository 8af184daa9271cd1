//! Truncated tree power series `sum c(t) * t` over the free magma.
//!
//! A [`TreeSeries`] keeps the coefficients of every tree of degree at most its
//! truncation bound, sparsely and with zeros elided. Binary operations demand
//! equal truncation bounds and drop anything above the bound.
//!
//! The coefficient type is generic; any exact `num_traits::Num` with negation
//! works (`BigRational`, `BigInt`, `i64`, ...). Multiplication is the bilinear
//! extension of grafting and is therefore neither associative nor
//! commutative.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Debug, Write as _};
use std::ops::{Add, Neg};

use num_traits::{Num, Zero};

use crate::error::{Error, Result};
use crate::magma::{parse, MagmaTree};
use crate::{Integer, Rational};

/// Scalars a [`TreeSeries`] can carry.
pub trait Coefficient: Clone + PartialEq + Debug + Num + Neg<Output = Self> {}

impl<T> Coefficient for T where T: Clone + PartialEq + Debug + Num + Neg<Output = T> {}

/// `ord(f)`: least degree with a non-zero coefficient, infinite for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SeriesOrder {
    Finite(u32),
    Infinite,
}

impl Add for SeriesOrder {
    type Output = SeriesOrder;

    fn add(self, rhs: SeriesOrder) -> SeriesOrder {
        match (self, rhs) {
            (SeriesOrder::Finite(a), SeriesOrder::Finite(b)) => SeriesOrder::Finite(a + b),
            _ => SeriesOrder::Infinite,
        }
    }
}

impl fmt::Display for SeriesOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesOrder::Finite(n) => write!(f, "{n}"),
            SeriesOrder::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct TreeSeries<C = Rational> {
    truncation: u32,
    terms: BTreeMap<MagmaTree, C>,
}

fn accumulate<C: Coefficient>(terms: &mut BTreeMap<MagmaTree, C>, tree: MagmaTree, c: C) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(&tree) {
        Some(slot) => {
            let sum = slot.clone() + c;
            if sum.is_zero() {
                terms.remove(&tree);
            } else {
                *slot = sum;
            }
        }
        None => {
            terms.insert(tree, c);
        }
    }
}

impl<C: Coefficient> TreeSeries<C> {
    pub fn zero(truncation: u32) -> Self {
        Self { truncation, terms: BTreeMap::new() }
    }

    pub fn one(truncation: u32) -> Self {
        Self::monomial(MagmaTree::Unit, C::one(), truncation)
    }

    /// The generator `x`.
    pub fn generator(truncation: u32) -> Self {
        Self::monomial(MagmaTree::Leaf, C::one(), truncation)
    }

    /// `c * t`, or zero if `t` lies above the truncation.
    pub fn monomial(tree: MagmaTree, c: C, truncation: u32) -> Self {
        Self::from_terms(truncation, [(tree, c)])
    }

    /// Sums the given terms; repeated trees accumulate, and terms above the
    /// truncation or with zero coefficient are dropped.
    pub fn from_terms<I>(truncation: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (MagmaTree, C)>,
    {
        let mut out = Self::zero(truncation);
        for (t, c) in terms {
            if t.degree() <= truncation {
                accumulate(&mut out.terms, t, c);
            }
        }
        out
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn coefficient(&self, t: &MagmaTree) -> C {
        self.terms.get(t).cloned().unwrap_or_else(C::zero)
    }

    /// Non-zero terms sorted by degree, then canonical tree order.
    pub fn terms(&self) -> impl Iterator<Item = (&MagmaTree, &C)> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.truncation != other.truncation {
            return Err(Error::TruncationMismatch {
                left: self.truncation,
                right: other.truncation,
            });
        }
        Ok(())
    }

    /// Coefficient-wise equality; series with different truncations are not
    /// comparable.
    pub fn try_eq(&self, other: &Self) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.terms == other.terms)
    }

    /// Drops every term above `truncation` (which must not exceed the current
    /// bound).
    pub fn truncate(&self, truncation: u32) -> Result<Self> {
        if truncation > self.truncation {
            return Err(Error::invalid(format!(
                "cannot raise truncation from {} to {truncation}",
                self.truncation
            )));
        }
        Ok(Self::from_terms(
            truncation,
            self.terms.iter().map(|(t, c)| (t.clone(), c.clone())),
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (t, c) in &other.terms {
            accumulate(&mut out.terms, t.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-C::one())
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(
            self.truncation,
            self.terms.iter().map(|(t, a)| (t.clone(), a.clone() * c.clone())),
        )
    }

    /// `f(c x)`: the coefficient of each degree-`n` tree is multiplied by `c^n`.
    pub fn dilate(&self, c: &C) -> Self {
        let mut powers = vec![C::one()];
        for n in 1..=self.truncation as usize {
            let next = powers[n - 1].clone() * c.clone();
            powers.push(next);
        }
        Self::from_terms(
            self.truncation,
            self.terms
                .iter()
                .map(|(t, a)| (t.clone(), a.clone() * powers[t.degree() as usize].clone())),
        )
    }

    /// The product induced by grafting. Each tree `t` collects `f(t1) g(t2)`
    /// over every factorization `t = t1 * t2`, unit factors included.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let n = self.truncation;
        let mut out = Self::zero(n);
        for (t1, a) in &self.terms {
            let room = n - t1.degree();
            for (t2, b) in other.terms.iter().take_while(|(t2, _)| t2.degree() <= room) {
                accumulate(&mut out.terms, MagmaTree::graft(t1, t2), a.clone() * b.clone());
            }
        }
        Ok(out)
    }

    /// The derivation with `d(x) = 1` and the Leibniz rule. On a monomial it
    /// sums the trees obtained by deleting one leaf.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero(self.truncation);
        for (t, c) in &self.terms {
            for d in t.leaf_deletions() {
                accumulate(&mut out.terms, d, c.clone());
            }
        }
        out
    }

    /// `f(g)`: the algebra homomorphism sending `x` to `g`, applied to `self`.
    /// Requires `ord(g) >= 1`.
    pub fn substitute(&self, g: &Self) -> Result<Self> {
        self.check_same(g)?;
        if g.ord() == SeriesOrder::Finite(0) {
            return Err(Error::SubstitutionOrder);
        }
        let mut images: HashMap<MagmaTree, Self> = HashMap::new();
        let mut out = Self::zero(self.truncation);
        for (t, c) in &self.terms {
            let image = substitute_monomial(t, g, &mut images)?;
            for (s, b) in image.terms {
                accumulate(&mut out.terms, s, b * c.clone());
            }
        }
        Ok(out)
    }

    /// The image `[f]` in classical power series, sending every degree-`n`
    /// tree to `x^n`.
    pub fn classical_projection(&self) -> ClassicalSeries<C> {
        let mut coefficients = vec![C::zero(); self.truncation as usize + 1];
        for (t, c) in &self.terms {
            let slot = &mut coefficients[t.degree() as usize];
            *slot = slot.clone() + c.clone();
        }
        ClassicalSeries { coefficients }
    }

    pub fn ord(&self) -> SeriesOrder {
        // Terms are sorted by degree.
        self.terms
            .keys()
            .next()
            .map_or(SeriesOrder::Infinite, |t| SeriesOrder::Finite(t.degree()))
    }
}

fn substitute_monomial<C: Coefficient>(
    t: &MagmaTree,
    g: &TreeSeries<C>,
    images: &mut HashMap<MagmaTree, TreeSeries<C>>,
) -> Result<TreeSeries<C>> {
    if let Some(hit) = images.get(t) {
        return Ok(hit.clone());
    }
    let image = match t {
        MagmaTree::Unit => TreeSeries::one(g.truncation),
        MagmaTree::Leaf => g.clone(),
        MagmaTree::Node(node) => {
            let left = substitute_monomial(node.left(), g, images)?;
            let right = substitute_monomial(node.right(), g, images)?;
            left.multiply(&right)?
        }
    };
    images.insert(t.clone(), image.clone());
    Ok(image)
}

impl<C: Coefficient + fmt::Display> fmt::Debug for TreeSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 + O({})", self.truncation + 1);
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*{t}")?;
        }
        write!(f, " + O({})", self.truncation + 1)
    }
}

fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `num/den` (or a bare integer) into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::invalid(format!("malformed rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: Integer = num.trim().parse().map_err(|_| bad())?;
    let den: Integer = den.trim().parse().map_err(|_| bad())?;
    if den <= Integer::zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

impl TreeSeries<Rational> {
    /// Line format: a `truncation<TAB>N` header, then one
    /// `tree_key<TAB>numerator/denominator` line per non-zero term in
    /// (degree, canonical) order. Every line ends in `\n`.
    pub fn to_text(&self) -> String {
        let mut out = format!("truncation\t{}\n", self.truncation);
        for (t, c) in &self.terms {
            let _ = writeln!(out, "{t}\t{}", format_rational(c));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let truncation = match lines.next() {
            Some((_, header)) => header
                .strip_prefix("truncation\t")
                .and_then(|n| n.trim().parse::<u32>().ok())
                .ok_or_else(|| Error::invalid(format!("bad header line {header:?}")))?,
            None => return Err(Error::invalid("empty series text")),
        };
        let mut out = Self::zero(truncation);
        for (i, line) in lines {
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('\t')
                .ok_or_else(|| Error::invalid(format!("line {}: expected two columns", i + 1)))?;
            let tree = parse(key)?;
            if tree.degree() > truncation {
                return Err(Error::invalid(format!(
                    "line {}: degree {} exceeds truncation {truncation}",
                    i + 1,
                    tree.degree()
                )));
            }
            accumulate(&mut out.terms, tree, parse_rational(value)?);
        }
        Ok(out)
    }
}

/// A classical power series truncated at degree `len - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalSeries<C = Rational> {
    coefficients: Vec<C>,
}

impl<C: Coefficient> ClassicalSeries<C> {
    /// Dense coefficients for degrees `0..=N`; must be non-empty.
    pub fn new(coefficients: Vec<C>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::invalid("a classical series needs at least one coefficient"));
        }
        Ok(Self { coefficients })
    }

    pub fn truncation(&self) -> u32 {
        self.coefficients.len() as u32 - 1
    }

    pub fn coefficient(&self, n: u32) -> C {
        self.coefficients.get(n as usize).cloned().unwrap_or_else(C::zero)
    }

    pub fn coefficients(&self) -> &[C] {
        &self.coefficients
    }
}
