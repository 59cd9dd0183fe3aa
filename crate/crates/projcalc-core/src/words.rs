//! Group-level word calculus for the free product of n order-2 groups and
//! its crossed-product picture.
//!
//! The free product on generators U₁..U_n (each its own inverse) is
//! isomorphic to the free group on W₁..W_{n−1} extended by the order-2
//! automorphism α that inverts every generator. The dictionary is
//!
//! ```text
//! V ↦ U₁,   V·Wᵢ ↦ U_{i+1}   (hence Wᵢ ↦ U₁U_{i+1})
//! ```
//!
//! with V the order-2 element and V·Wᵢ·V = Wᵢ⁻¹. Elements here are group
//! words in reduced normal form; linear combinations appear only after
//! evaluation against a concrete projection tuple.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::pair::symmetry_of;
use crate::validate::ToleranceConfig;

/// Reduction-input cap: parsing rejects words heavier than this.
pub const WORD_WEIGHT_CAP: usize = 10_000;

/// Reduced word in the free product of n copies of the order-2 group:
/// letters are generator indices in 1..=n, adjacent letters distinct.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeProductWord {
    n: usize,
    letters: Vec<usize>,
}

impl FreeProductWord {
    /// Builds a word from raw letters, reducing adjacent equal pairs.
    pub fn new(n: usize, letters: &[usize]) -> Result<Self> {
        for &l in letters {
            if l == 0 || l > n {
                return Err(Error::InvalidWord {
                    reason: format!("letter U{l} outside 1..={n}"),
                });
            }
        }
        let mut reduced: Vec<usize> = Vec::with_capacity(letters.len());
        for &l in letters {
            if reduced.last() == Some(&l) {
                reduced.pop();
            } else {
                reduced.push(l);
            }
        }
        Ok(FreeProductWord {
            n,
            letters: reduced,
        })
    }

    pub fn identity(n: usize) -> Self {
        FreeProductWord {
            n,
            letters: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }
}

impl core::fmt::Display for FreeProductWord {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "U{l}")?;
        }
        Ok(())
    }
}

/// Product in the free product: concatenate, then cancel equal adjacent
/// letters through the seam.
pub fn fp_multiply(a: &FreeProductWord, b: &FreeProductWord) -> Result<FreeProductWord> {
    if a.n != b.n {
        return Err(Error::MismatchedArity {
            left: a.n,
            right: b.n,
        });
    }
    let mut letters = a.letters.clone();
    for &l in &b.letters {
        if letters.last() == Some(&l) {
            letters.pop();
        } else {
            letters.push(l);
        }
    }
    Ok(FreeProductWord { n: a.n, letters })
}

/// Inverse: every generator is its own inverse, so reverse the letters.
pub fn fp_inverse(a: &FreeProductWord) -> FreeProductWord {
    let mut letters = a.letters.clone();
    letters.reverse();
    FreeProductWord { n: a.n, letters }
}

/// Reduced word in the free group on m generators: syllables
/// (generator index in 1..=m, nonzero exponent), adjacent generators
/// distinct.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeGroupWord {
    m: usize,
    syllables: Vec<(usize, i64)>,
}

impl FreeGroupWord {
    pub fn new(m: usize, syllables: &[(usize, i64)]) -> Result<Self> {
        for &(g, _) in syllables {
            if g == 0 || g > m {
                return Err(Error::InvalidWord {
                    reason: format!("generator W{g} outside 1..={m}"),
                });
            }
        }
        let mut word = FreeGroupWord {
            m,
            syllables: Vec::with_capacity(syllables.len()),
        };
        for &(g, e) in syllables {
            word.push_syllable(g, e);
        }
        Ok(word)
    }

    pub fn identity(m: usize) -> Self {
        FreeGroupWord {
            m,
            syllables: Vec::new(),
        }
    }

    /// Appends one syllable, merging with the tail and dropping zeros.
    fn push_syllable(&mut self, g: usize, e: i64) {
        if e == 0 {
            return;
        }
        match self.syllables.last_mut() {
            Some((tg, te)) if *tg == g => {
                *te += e;
                if *te == 0 {
                    self.syllables.pop();
                }
            }
            _ => self.syllables.push((g, e)),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn syllables(&self) -> &[(usize, i64)] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Total letter count, Σ|exponent|.
    pub fn weight(&self) -> u64 {
        self.syllables.iter().map(|&(_, e)| e.unsigned_abs()).sum()
    }

    pub fn concat(&self, other: &FreeGroupWord) -> Result<FreeGroupWord> {
        if self.m != other.m {
            return Err(Error::MismatchedArity {
                left: self.m,
                right: other.m,
            });
        }
        let mut out = self.clone();
        for &(g, e) in &other.syllables {
            out.push_syllable(g, e);
        }
        Ok(out)
    }

    pub fn inverse(&self) -> FreeGroupWord {
        FreeGroupWord {
            m: self.m,
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|&(g, e)| (g, -e))
                .collect(),
        }
    }
}

impl core::fmt::Display for FreeGroupWord {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "e");
        }
        for (i, (g, e)) in self.syllables.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if *e == 1 {
                write!(f, "W{g}")?;
            } else {
                write!(f, "W{g}^{e}")?;
            }
        }
        Ok(())
    }
}

/// The order-2 automorphism sending every generator to its inverse.
/// Negating exponents keeps the word reduced.
pub fn alpha(w: &FreeGroupWord) -> FreeGroupWord {
    FreeGroupWord {
        m: w.m,
        syllables: w.syllables.iter().map(|&(g, e)| (g, -e)).collect(),
    }
}

/// Element V^eps · w of the crossed product: the order-2 symmetry V acts
/// on the free group through `alpha`, and V·w = alpha(w)·V lets every
/// element be written with V on the left.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CrossedElement {
    pub eps: bool,
    pub word: FreeGroupWord,
}

impl CrossedElement {
    pub fn new(eps: bool, word: FreeGroupWord) -> Self {
        CrossedElement { eps, word }
    }

    pub fn identity(m: usize) -> Self {
        CrossedElement {
            eps: false,
            word: FreeGroupWord::identity(m),
        }
    }

    pub fn m(&self) -> usize {
        self.word.m()
    }

    pub fn inverse(&self) -> CrossedElement {
        let inv = self.word.inverse();
        CrossedElement {
            eps: self.eps,
            word: if self.eps { alpha(&inv) } else { inv },
        }
    }
}

impl core::fmt::Display for CrossedElement {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match (self.eps, self.word.is_identity()) {
            (false, true) => write!(f, "e"),
            (false, false) => write!(f, "{}", self.word),
            (true, true) => write!(f, "V"),
            (true, false) => write!(f, "V {}", self.word),
        }
    }
}

/// Product in the crossed product: V^a·x · V^b·y = V^{a⊕b}·α^b(x)·y.
pub fn cp_multiply(x: &CrossedElement, y: &CrossedElement) -> Result<CrossedElement> {
    if x.m() != y.m() {
        return Err(Error::MismatchedArity {
            left: x.m(),
            right: y.m(),
        });
    }
    let moved = if y.eps { alpha(&x.word) } else { x.word.clone() };
    Ok(CrossedElement {
        eps: x.eps ^ y.eps,
        word: moved.concat(&y.word)?,
    })
}

/// Image of V^eps·w in the free product: V ↦ U₁, Wᵢ ↦ U₁U_{i+1},
/// Wᵢ⁻¹ ↦ U_{i+1}U₁, concatenated and reduced.
pub fn iso_to_free_product(x: &CrossedElement) -> FreeProductWord {
    let n = x.m() + 1;
    let mut letters: Vec<usize> = Vec::new();
    let push = |letters: &mut Vec<usize>, l: usize| {
        if letters.last() == Some(&l) {
            letters.pop();
        } else {
            letters.push(l);
        }
    };
    if x.eps {
        push(&mut letters, 1);
    }
    for &(g, e) in x.word.syllables() {
        let u = g + 1;
        if e > 0 {
            for _ in 0..e {
                push(&mut letters, 1);
                push(&mut letters, u);
            }
        } else {
            for _ in 0..(-e) {
                push(&mut letters, u);
                push(&mut letters, 1);
            }
        }
    }
    FreeProductWord { n, letters }
}

/// Preimage of a free-product word: U₁ ↦ (1, e), U_{i+1} ↦ (1, Wᵢ),
/// folded left-to-right. Two-sided inverse of `iso_to_free_product`.
pub fn iso_from_free_product(a: &FreeProductWord) -> Result<CrossedElement> {
    if a.n == 0 {
        return Err(Error::InvalidWord {
            reason: "the isomorphism needs at least one free factor".into(),
        });
    }
    let m = a.n - 1;
    let mut acc = CrossedElement::identity(m);
    for &l in &a.letters {
        let gen = if l == 1 {
            CrossedElement::new(true, FreeGroupWord::identity(m))
        } else {
            CrossedElement::new(true, FreeGroupWord::new(m, &[(l - 1, 1)])?)
        };
        acc = cp_multiply(&acc, &gen)?;
    }
    Ok(acc)
}

/// Evaluates a free-product word against projections P₁..P_n: each letter
/// i contributes the symmetry 2Pᵢ − I. The empty word is the identity.
pub fn evaluate_fp(
    a: &FreeProductWord,
    projections: &[DenseMatrix],
    tol: &ToleranceConfig,
) -> Result<DenseMatrix> {
    if projections.len() != a.n {
        return Err(Error::MismatchedArity {
            left: a.n,
            right: projections.len(),
        });
    }
    let dim = projections.first().map_or(0, |p| p.rows());
    let mut symmetries: Vec<DenseMatrix> = Vec::with_capacity(projections.len());
    for p in projections {
        if p.rows() != dim {
            return Err(Error::DimensionMismatch {
                left: (dim, dim),
                right: (p.rows(), p.cols()),
            });
        }
        symmetries.push(symmetry_of(p, tol)?);
    }
    let mut out = DenseMatrix::identity(dim);
    for &l in &a.letters {
        out = out.matmul(&symmetries[l - 1])?;
    }
    Ok(out)
}

/// Evaluates a crossed element by pushing it through the isomorphism and
/// evaluating the image word; `projections` supplies P₁..P_{m+1}.
pub fn evaluate_cp(
    x: &CrossedElement,
    projections: &[DenseMatrix],
    tol: &ToleranceConfig,
) -> Result<DenseMatrix> {
    evaluate_fp(&iso_to_free_product(x), projections, tol)
}

/// Parses space-separated letters "U1 U2 ..." (or "e" for the identity)
/// into a free-product word on n factors.
pub fn parse_free_product(input: &str, n: usize) -> Result<FreeProductWord> {
    let tokens: Vec<&str> = input.split_whitespace().collect();
    if tokens.is_empty() || tokens == ["e"] {
        return Ok(FreeProductWord::identity(n));
    }
    if tokens.len() > WORD_WEIGHT_CAP {
        return Err(Error::InvalidWord {
            reason: format!("word length {} exceeds cap {WORD_WEIGHT_CAP}", tokens.len()),
        });
    }
    let mut letters = Vec::with_capacity(tokens.len());
    for tok in tokens {
        let idx = tok
            .strip_prefix('U')
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| Error::InvalidWord {
                reason: format!("expected a letter like U3, found {tok:?}"),
            })?;
        letters.push(idx);
    }
    FreeProductWord::new(n, &letters)
}

/// Parses a crossed-product element "V W1^-1 W2 ..." (or "e") over m free
/// generators. Tokens are V, or W<i> with an optional ^<exp> suffix; they
/// multiply left-to-right, so any token order is accepted.
pub fn parse_crossed(input: &str, m: usize) -> Result<CrossedElement> {
    let tokens: Vec<&str> = input.split_whitespace().collect();
    if tokens.is_empty() || tokens == ["e"] {
        return Ok(CrossedElement::identity(m));
    }
    let mut weight: u64 = 0;
    let mut acc = CrossedElement::identity(m);
    for tok in tokens {
        let factor = if tok == "V" {
            weight += 1;
            CrossedElement::new(true, FreeGroupWord::identity(m))
        } else if let Some(rest) = tok.strip_prefix('W') {
            let (gen_str, exp) = match rest.split_once('^') {
                Some((g, e)) => (
                    g,
                    e.parse::<i64>().map_err(|_| Error::InvalidWord {
                        reason: format!("bad exponent in {tok:?}"),
                    })?,
                ),
                None => (rest, 1),
            };
            let g = gen_str.parse::<usize>().map_err(|_| Error::InvalidWord {
                reason: format!("bad generator in {tok:?}"),
            })?;
            if exp == 0 {
                return Err(Error::InvalidWord {
                    reason: format!("zero exponent in {tok:?}"),
                });
            }
            weight += exp.unsigned_abs();
            CrossedElement::new(false, FreeGroupWord::new(m, &[(g, exp)])?)
        } else {
            return Err(Error::InvalidWord {
                reason: format!("expected V, W<i>, or e, found {tok:?}"),
            });
        };
        if weight > WORD_WEIGHT_CAP as u64 {
            return Err(Error::InvalidWord {
                reason: format!("word weight exceeds cap {WORD_WEIGHT_CAP}"),
            });
        }
        acc = cp_multiply(&acc, &factor)?;
    }
    Ok(acc)
}

/// Parses "(gen, exp)" syllable text like "W1^2 W2^-1" into a free-group
/// word without any V letters.
pub fn parse_free_group(input: &str, m: usize) -> Result<FreeGroupWord> {
    let elem = parse_crossed(input, m)?;
    if elem.eps {
        return Err(Error::InvalidWord {
            reason: "free-group word must not contain V".into(),
        });
    }
    Ok(elem.word)
}

/// Renders any word type through Display.
pub fn render<T: core::fmt::Display>(t: &T) -> String {
    format!("{t}")
}
