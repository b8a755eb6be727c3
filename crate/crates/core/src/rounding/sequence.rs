//! Arithmetic, geometric and hybrid profit grids with exact rational terms.
//!
//! With `ε = num/den`, `γ` and `P^H`, the base is `a₁ = ε·P^H/γ` and the ratio
//! is `r = 1/(1−ε) = den/(den−num)`. Every term is kept as an unreduced
//! integer fraction so that classifying an integer profit costs one or two
//! integer multiplications.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::RoundingContext;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridKind {
    /// `a_i = a₁·i`.
    Arithmetic,
    /// `a_i = a₁·r^{i−1}`.
    Geometric,
    /// Arithmetic up to `⌊2/ε⌋`, geometric above.
    Hybrid,
}

#[derive(Debug, Clone)]
struct Term {
    num: BigInt,
    den: BigInt,
    fast: Option<(u128, u64)>,
}

impl Term {
    fn new(num: BigInt, den: BigInt) -> Self {
        let fast = match (num.to_u128(), den.to_u64()) {
            (Some(n), Some(d)) => Some((n, d)),
            _ => None,
        };
        Term { num, den, fast }
    }

    /// `self ≤ p`.
    fn at_most(&self, p: u64) -> bool {
        match self.fast {
            Some((n, d)) => n <= p as u128 * d as u128,
            None => self.num <= BigInt::from(p) * &self.den,
        }
    }

    fn to_rational(&self) -> BigRational {
        BigRational::new(self.num.clone(), self.den.clone())
    }

    fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::INFINITY)
    }
}

/// A profit grid `a₁ < a₂ < …` together with its per-class caps.
#[derive(Debug, Clone)]
pub struct Sequence {
    kind: GridKind,
    ctx: RoundingContext,
    arith_count: usize,
    alpha: usize,
    beta: usize,
    psi: usize,
    terms: Vec<Term>,
    ln_ratio: f64,
}

fn pow(base: u64, e: usize) -> BigInt {
    num_traits::pow(BigInt::from(base), e)
}

impl Sequence {
    pub fn new(kind: GridKind, ctx: RoundingContext) -> Result<Self> {
        ctx.validate()?;
        let eps = ctx.epsilon;
        let (num, den, comp) = (eps.num(), eps.den(), eps.complement_num());
        let arith_count = eps.floor_div(2) as usize;

        // α: smallest integer with r^α > ⌊2/ε⌋, i.e. ⌊ln⌊2/ε⌋ / ln r⌋ + 1.
        let a_big = BigInt::from(arith_count as u64);
        let mut alpha = 1usize;
        while pow(den, alpha) <= &a_big * pow(comp, alpha) {
            alpha += 1;
        }
        // β: largest i with a₁·r^{i−1} ≤ P^H, i.e. num·den^{i−1} ≤ γ·den·(den−num)^{i−1}.
        let gamma_den = BigInt::from(ctx.gamma as u64) * BigInt::from(den);
        let mut beta = 1usize;
        while BigInt::from(num) * pow(den, beta) <= &gamma_den * pow(comp, beta) {
            beta += 1;
        }
        let psi = beta + arith_count + 1 - alpha.min(beta + arith_count);

        let mut seq = Sequence {
            kind,
            ctx,
            arith_count,
            alpha,
            beta,
            psi,
            terms: Vec::new(),
            ln_ratio: (den as f64 / comp as f64).ln(),
        };
        let upto = match kind {
            GridKind::Hybrid => psi + 1,
            GridKind::Geometric => beta + 1,
            GridKind::Arithmetic => 0,
        };
        seq.terms = (1..=upto).map(|i| seq.compute_term(i)).collect();
        Ok(seq)
    }

    pub fn arithmetic(ctx: RoundingContext) -> Result<Self> {
        Sequence::new(GridKind::Arithmetic, ctx)
    }

    pub fn geometric(ctx: RoundingContext) -> Result<Self> {
        Sequence::new(GridKind::Geometric, ctx)
    }

    pub fn hybrid(ctx: RoundingContext) -> Result<Self> {
        Sequence::new(GridKind::Hybrid, ctx)
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn context(&self) -> &RoundingContext {
        &self.ctx
    }

    /// `⌊2/ε⌋`, the number of arithmetic terms of the hybrid grid.
    pub fn arith_count(&self) -> usize {
        self.arith_count
    }

    /// `α = ⌊ln⌊2/ε⌋ / ln(1/(1−ε))⌋ + 1`, computed exactly.
    pub fn alpha(&self) -> usize {
        self.alpha
    }

    /// Largest index whose geometric term `a₁·r^{β−1}` is at most `P^H`.
    pub fn beta(&self) -> usize {
        self.beta
    }

    /// `ψ = β − α + ⌊2/ε⌋ + 1`; the hybrid term at `ψ` exceeds `P^H`.
    pub fn psi(&self) -> usize {
        self.psi
    }

    /// Exponent of `r` in geometric term `i`, if it is geometric.
    fn geometric_exponent(&self, i: usize) -> Option<usize> {
        match self.kind {
            GridKind::Arithmetic => None,
            GridKind::Geometric => Some(i - 1),
            GridKind::Hybrid if i > self.arith_count => Some(self.alpha + i - self.arith_count - 1),
            GridKind::Hybrid => None,
        }
    }

    fn compute_term(&self, i: usize) -> Term {
        let eps = self.ctx.epsilon;
        let base_num = BigInt::from(eps.num()) * BigInt::from(self.ctx.p_h);
        let base_den = BigInt::from(eps.den()) * BigInt::from(self.ctx.gamma as u64);
        match self.geometric_exponent(i) {
            None => Term::new(base_num * BigInt::from(i as u64), base_den),
            Some(e) => Term::new(
                base_num * pow(eps.den(), e),
                base_den * pow(eps.complement_num(), e),
            ),
        }
    }

    fn with_term<R>(&self, i: usize, f: impl FnOnce(&Term) -> R) -> R {
        match self.terms.get(i - 1) {
            Some(t) => f(t),
            None => f(&self.compute_term(i)),
        }
    }

    /// Exact value of term `i ≥ 1`.
    pub fn term(&self, i: usize) -> BigRational {
        assert!(i >= 1, "terms are 1-indexed");
        self.with_term(i, Term::to_rational)
    }

    /// `a₁ = ε·P^H/γ`.
    pub fn base(&self) -> BigRational {
        self.term(1)
    }

    /// `a_i ≤ p`, exactly.
    pub fn term_at_most(&self, i: usize, p: u64) -> bool {
        self.with_term(i, |t| t.at_most(p))
    }

    /// Maximum number of class-`i` items worth keeping.
    pub fn cap(&self, i: usize) -> usize {
        let eps = self.ctx.epsilon;
        let gamma = self.ctx.gamma;
        let two_gamma_den = BigInt::from(2 * gamma as u64) * BigInt::from(eps.den());
        let bound = match self.geometric_exponent(i) {
            None if self.kind == GridKind::Hybrid => return gamma,
            None => two_gamma_den / (BigInt::from(eps.num()) * BigInt::from(i as u64)),
            Some(e) => (two_gamma_den * pow(eps.complement_num(), e))
                .div_floor(&(BigInt::from(eps.num()) * pow(eps.den(), e))),
        };
        bound.to_usize().map_or(gamma, |b| b.min(gamma))
    }

    /// Largest `i` with `a_i ≤ p`, or `None` when `p < a₁`.
    ///
    /// The index is estimated in floating point and then corrected by exact
    /// comparisons against the neighbouring terms.
    pub fn class_of(&self, p: u64) -> Option<usize> {
        if !self.term_at_most(1, p) {
            return None;
        }
        let mut idx = self.estimate(p).max(1);
        while idx > 1 && !self.term_at_most(idx, p) {
            idx -= 1;
        }
        while self.term_at_most(idx + 1, p) {
            idx += 1;
        }
        Some(idx)
    }

    fn estimate(&self, p: u64) -> usize {
        let arith = || -> usize {
            // ⌊p·γ·den / (num·P^H)⌋
            let eps = self.ctx.epsilon;
            let n = p as u128 * self.ctx.gamma as u128 * eps.den() as u128;
            let d = eps.num() as u128 * self.ctx.p_h as u128;
            (n / d).min(usize::MAX as u128) as usize
        };
        let geo = |from: usize| -> usize {
            let anchor = self.with_term(from, Term::to_f64);
            let steps = ((p as f64 / anchor).ln() / self.ln_ratio).floor();
            if steps.is_finite() && steps >= 0.0 {
                from + steps as usize
            } else {
                from
            }
        };
        match self.kind {
            GridKind::Arithmetic => arith(),
            GridKind::Geometric => geo(1),
            GridKind::Hybrid => {
                if self.term_at_most(self.arith_count + 1, p) {
                    geo(self.arith_count + 1)
                } else {
                    arith().min(self.arith_count)
                }
            }
        }
    }

    /// Same as [`Sequence::class_of`] using only exact comparisons
    /// (exponential then binary search).
    pub fn class_of_exact(&self, p: u64) -> Option<usize> {
        if !self.term_at_most(1, p) {
            return None;
        }
        let mut hi = 2usize;
        while self.term_at_most(hi, p) {
            hi *= 2;
        }
        let mut lo = 1usize;
        // invariant: a_lo ≤ p < a_hi
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.term_at_most(mid, p) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(lo)
    }

    /// Compares term `i` with an exact rational.
    pub fn cmp_term(&self, i: usize, x: &BigRational) -> Ordering {
        self.term(i).cmp(x)
    }

    /// Number of grid terms at or below `P^H`.
    pub fn terms_up_to_p_h(&self) -> usize {
        let p_h = BigRational::from_integer(BigInt::from(self.ctx.p_h));
        let mut i = 1;
        while self.term(i) <= p_h {
            i += 1;
        }
        i - 1
    }
}
