//! Exact arithmetic in the spectral variable s = ω^α.
//!
//! Transform-domain objects are rational functions whose denominators are
//! products of distinct quadratic factors (s² + q) with rational q > 0.
//! Denominators are kept in factored form from birth — the solver constructs
//! them as products — so no polynomial root-finding happens anywhere.
//! Partial fraction decomposition is closed-form over this factor family and
//! is typed by numerator parity: odd numerators split into Σ rᵢ·s/(s²+qᵢ)
//! (sine-kind) and even numerators into Σ rᵢ/(s²+qᵢ) (cosine-kind).

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{render, to_f64, Rational};

#[derive(Debug, Error, PartialEq)]
pub enum SpectralError {
    #[error("quadratic factor coefficient must be positive, got {0}")]
    NonPositiveQ(String),
    #[error("repeated quadratic factor s^2+{0}: unsupported multiplicity")]
    RepeatedFactor(String),
    #[error("numerator mixes even and odd powers: no single transform kind applies")]
    MixedParity,
    #[error("numerator degree {num_deg} is not below denominator degree {den_deg}")]
    NotStrictlyProper { num_deg: usize, den_deg: usize },
}

/// Numerator parity, which selects the transform kind a term belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Dense polynomial in s with exact rational coefficients, low-to-high,
/// canonical (no trailing zeros; the zero polynomial is the empty vector).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PolyS(Vec<Rational>);

impl PolyS {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        let mut c = coeffs;
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        PolyS(c)
    }

    pub fn zero() -> Self {
        PolyS(Vec::new())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// c · s^deg
    pub fn monomial(c: Rational, deg: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); deg + 1];
        coeffs[deg] = c;
        Self::new(coeffs)
    }

    /// s² + q
    pub fn quadratic_factor(q: &Rational) -> Self {
        Self::new(vec![q.clone(), Rational::zero(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.0.get(k).cloned().unwrap_or_else(Rational::zero);
            let b = other.0.get(k).cloned().unwrap_or_else(Rational::zero);
            coeffs.push(a + b);
        }
        Self::new(coeffs)
    }

    pub fn neg(&self) -> Self {
        PolyS(self.0.iter().map(|c| -c.clone()).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(coeffs)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        PolyS(self.0.iter().map(|x| x * c).collect())
    }

    /// Multiplication by s.
    pub fn shift_up(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.0.len() + 1);
        coeffs.push(Rational::zero());
        coeffs.extend(self.0.iter().cloned());
        PolyS(coeffs)
    }

    pub fn eval(&self, s: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * s + c;
        }
        acc
    }

    pub fn eval_f64(&self, s: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.0.iter().rev() {
            acc = acc * s + to_f64(c);
        }
        acc
    }

    /// Long division: self = q·div + r with deg r < deg div.
    pub fn divmod(&self, div: &Self) -> (Self, Self) {
        assert!(!div.is_zero(), "division by the zero polynomial");
        if self.0.len() < div.0.len() {
            return (Self::zero(), self.clone());
        }
        let mut rem = self.0.clone();
        let n = div.0.len();
        let lead = div.0.last().unwrap();
        let mut quot = vec![Rational::zero(); rem.len() - n + 1];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + n - 1] / lead;
            if !c.is_zero() {
                for (i, d) in div.0.iter().enumerate() {
                    let sub = d * &c;
                    rem[k + i] -= sub;
                }
            }
            quot[k] = c;
        }
        (Self::new(quot), Self::new(rem))
    }

    /// True when every non-zero coefficient sits at an index of the given
    /// parity. The zero polynomial satisfies both parities.
    pub fn has_parity(&self, parity: Parity) -> bool {
        self.0.iter().enumerate().all(|(k, c)| {
            c.is_zero()
                || match parity {
                    Parity::Even => k % 2 == 0,
                    Parity::Odd => k % 2 == 1,
                }
        })
    }

    /// The unique pure parity of a non-zero polynomial, if any.
    pub fn parity(&self) -> Option<Parity> {
        if self.is_zero() {
            return None;
        }
        if self.has_parity(Parity::Even) {
            Some(Parity::Even)
        } else if self.has_parity(Parity::Odd) {
            Some(Parity::Odd)
        } else {
            None
        }
    }

    /// For a pure-parity polynomial N, the polynomial M with N(s) = M(s²)
    /// (even) or N(s) = s·M(s²) (odd).
    fn even_part_in_u(&self, parity: Parity) -> PolyS {
        let offset = match parity {
            Parity::Even => 0,
            Parity::Odd => 1,
        };
        PolyS::new(
            self.0
                .iter()
                .skip(offset)
                .step_by(2)
                .cloned()
                .collect(),
        )
    }
}

impl std::fmt::Display for PolyS {
    /// Compact rendering, high power first: `2*s^3-92*s`, `s^2+4`, `0`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let show_coef = !mag.is_one() || k == 0;
            if show_coef {
                write!(f, "{}", render(&mag))?;
            }
            if k > 0 {
                if show_coef {
                    write!(f, "*")?;
                }
                write!(f, "s")?;
                if k > 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
        Ok(())
    }
}

/// One factor (s² + q)^multiplicity of a denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadFactor {
    pub q: Rational,
    pub multiplicity: u32,
}

/// Rational function num / Π (s²+qᵢ)^{mᵢ} with the scalar folded into the
/// numerator. Canonical: factors sorted by q, common factors cancelled.
///
/// Well-formed transform-domain values keep every multiplicity at 1; higher
/// multiplicities can arise mid-computation (that is how the solver detects
/// resonance) and are rejected by `partial_fractions` and the inverse table.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalS {
    num: PolyS,
    factors: Vec<QuadFactor>,
}

impl RationalS {
    pub fn new(num: PolyS, factors: Vec<(Rational, u32)>) -> Result<Self, SpectralError> {
        let mut fs: Vec<QuadFactor> = Vec::new();
        let mut sorted = factors;
        sorted.sort_by(|a, b| a.0.cmp(&b.0));
        for (q, m) in sorted {
            if m == 0 {
                continue;
            }
            if !q.is_positive() {
                return Err(SpectralError::NonPositiveQ(render(&q)));
            }
            match fs.last_mut() {
                Some(last) if last.q == q => last.multiplicity += m,
                _ => fs.push(QuadFactor {
                    q,
                    multiplicity: m,
                }),
            }
        }
        let mut r = RationalS { num, factors: fs };
        r.reduce();
        Ok(r)
    }

    pub fn zero() -> Self {
        RationalS {
            num: PolyS::zero(),
            factors: Vec::new(),
        }
    }

    pub fn from_poly(num: PolyS) -> Self {
        RationalS {
            num,
            factors: Vec::new(),
        }
    }

    pub fn num(&self) -> &PolyS {
        &self.num
    }

    pub fn factors(&self) -> &[QuadFactor] {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn den_degree(&self) -> usize {
        self.factors
            .iter()
            .map(|f| 2 * f.multiplicity as usize)
            .sum()
    }

    pub fn den_poly(&self) -> PolyS {
        let mut den = PolyS::constant(Rational::one());
        for f in &self.factors {
            let quad = PolyS::quadratic_factor(&f.q);
            for _ in 0..f.multiplicity {
                den = den.mul(&quad);
            }
        }
        den
    }

    /// Cancels quadratic factors that divide the numerator exactly.
    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.factors.clear();
            return;
        }
        for f in &mut self.factors {
            let quad = PolyS::quadratic_factor(&f.q);
            while f.multiplicity > 0 {
                let (quot, rem) = self.num.divmod(&quad);
                if rem.is_zero() {
                    self.num = quot;
                    f.multiplicity -= 1;
                } else {
                    break;
                }
            }
        }
        self.factors.retain(|f| f.multiplicity > 0);
    }

    pub fn add(&self, other: &Self) -> Self {
        // Common denominator: per q, the max multiplicity across both sides.
        let mut union: Vec<QuadFactor> = self.factors.clone();
        for f in &other.factors {
            match union.iter_mut().find(|g| g.q == f.q) {
                Some(g) => g.multiplicity = g.multiplicity.max(f.multiplicity),
                None => union.push(f.clone()),
            }
        }
        union.sort_by(|a, b| a.q.cmp(&b.q));
        let complement = |own: &[QuadFactor]| -> PolyS {
            let mut p = PolyS::constant(Rational::one());
            for f in &union {
                let have = own
                    .iter()
                    .find(|g| g.q == f.q)
                    .map(|g| g.multiplicity)
                    .unwrap_or(0);
                let quad = PolyS::quadratic_factor(&f.q);
                for _ in 0..(f.multiplicity - have) {
                    p = p.mul(&quad);
                }
            }
            p
        };
        let num = self
            .num
            .mul(&complement(&self.factors))
            .add(&other.num.mul(&complement(&other.factors)));
        let mut r = RationalS {
            num,
            factors: union,
        };
        r.reduce();
        r
    }

    pub fn neg(&self) -> Self {
        RationalS {
            num: self.num.neg(),
            factors: self.factors.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalS {
            num: self.num.scale(c),
            factors: self.factors.clone(),
        }
    }

    pub fn mul_poly(&self, p: &PolyS) -> Self {
        let mut r = RationalS {
            num: self.num.mul(p),
            factors: self.factors.clone(),
        };
        r.reduce();
        r
    }

    /// Divides by (s² + q); the factor may collide with an existing one, in
    /// which case the multiplicity rises unless the numerator cancels it.
    pub fn div_by_factor(&self, q: &Rational) -> Result<Self, SpectralError> {
        let mut factors: Vec<(Rational, u32)> = self
            .factors
            .iter()
            .map(|f| (f.q.clone(), f.multiplicity))
            .collect();
        factors.push((q.clone(), 1));
        RationalS::new(self.num.clone(), factors)
    }

    pub fn eval_f64(&self, s: f64) -> f64 {
        let mut den = 1.0;
        for f in &self.factors {
            den *= (s * s + to_f64(&f.q)).powi(f.multiplicity as i32);
        }
        self.num.eval_f64(s) / den
    }

    /// Decomposes a strictly proper, pure-parity value over distinct factors
    /// into table-ready terms. Exact; recombination reproduces the input.
    pub fn partial_fractions(&self) -> Result<Vec<PfTerm>, SpectralError> {
        if self.num.is_zero() {
            return Ok(Vec::new());
        }
        if let Some(f) = self.factors.iter().find(|f| f.multiplicity > 1) {
            return Err(SpectralError::RepeatedFactor(render(&f.q)));
        }
        let num_deg = self.num.degree().unwrap_or(0);
        let den_deg = self.den_degree();
        if num_deg >= den_deg {
            return Err(SpectralError::NotStrictlyProper { num_deg, den_deg });
        }
        let parity = self.num.parity().ok_or(SpectralError::MixedParity)?;
        // With N(s) = M(u), u = s² (after peeling one s for odd parity), the
        // residue at factor i is M(−qᵢ) / Π_{j≠i} (qⱼ − qᵢ): exact arithmetic
        // in the quotient ring, no complex numbers involved.
        let m = self.num.even_part_in_u(parity);
        let mut terms = Vec::with_capacity(self.factors.len());
        for (i, fi) in self.factors.iter().enumerate() {
            let mut denom = Rational::one();
            for (j, fj) in self.factors.iter().enumerate() {
                if i != j {
                    denom *= &fj.q - &fi.q;
                }
            }
            let residue = m.eval(&-fi.q.clone()) / denom;
            terms.push(PfTerm {
                residue,
                q: fi.q.clone(),
                parity,
            });
        }
        Ok(terms)
    }
}

impl std::fmt::Display for RationalS {
    /// `(num)/((s^2+q1)*(s^2+q2))`; a single factor renders as
    /// `(num)/(s^2+q)`, a factor-free value as the bare numerator.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})", self.num)?;
        let total: u32 = self.factors.iter().map(|f| f.multiplicity).sum();
        if total == 1 {
            write!(f, "/(s^2+{})", render(&self.factors[0].q))?;
        } else if total > 1 {
            write!(f, "/(")?;
            let mut first = true;
            for fac in &self.factors {
                for _ in 0..fac.multiplicity {
                    if !first {
                        write!(f, "*")?;
                    }
                    write!(f, "(s^2+{})", render(&fac.q))?;
                    first = false;
                }
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// One partial-fraction term: `residue·s/(s²+q)` (odd) or `residue/(s²+q)`
/// (even).
#[derive(Debug, Clone, PartialEq)]
pub struct PfTerm {
    pub residue: Rational,
    pub q: Rational,
    pub parity: Parity,
}

impl PfTerm {
    pub fn to_rational(&self) -> RationalS {
        let num = match self.parity {
            Parity::Odd => PolyS::monomial(self.residue.clone(), 1),
            Parity::Even => PolyS::constant(self.residue.clone()),
        };
        RationalS::new(num, vec![(self.q.clone(), 1)]).expect("q > 0 by construction")
    }
}

impl std::fmt::Display for PfTerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.parity {
            Parity::Odd => write!(f, "({}*s)/(s^2+{})", render(&self.residue), render(&self.q)),
            Parity::Even => write!(f, "({})/(s^2+{})", render(&self.residue), render(&self.q)),
        }
    }
}

/// Recombines decomposition terms over the common denominator.
pub fn recombine(terms: &[PfTerm]) -> RationalS {
    terms
        .iter()
        .fold(RationalS::zero(), |acc, t| acc.add(&t.to_rational()))
}
