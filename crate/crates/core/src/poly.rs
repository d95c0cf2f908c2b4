//! Univariate polynomials with exact rational coefficients, and real-root
//! isolation by Sturm sequences.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{self, Rational};

/// Polynomial in λ with rational coefficients, stored in ascending degree.
///
/// The coefficient vector never has a trailing zero, so the zero polynomial is
/// the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyRat {
    coeffs: Vec<Rational>,
}

impl PolyRat {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolyRat { coeffs }
    }

    pub fn zero() -> Self {
        PolyRat { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial λ.
    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    /// `c0 + c1 λ`.
    pub fn linear(c0: Rational, c1: Rational) -> Self {
        Self::new(vec![c0, c1])
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rational::int(c)).collect())
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Rational]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| &acc * &Self::linear(-r.clone(), Rational::one()))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of λ^k (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.leading().recip())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rational::int(k as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + rational::to_f64(c))
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + rational::to_f64(c))
    }

    /// `Σ |c_k| |x|^k`, the natural scale for relative error at `x`.
    pub fn magnitude_at(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x.abs() + rational::to_f64(c).abs())
    }

    /// Euclidean division: `self = q * divisor + r`, `deg r < deg divisor`.
    ///
    /// Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &PolyRat) -> (PolyRat, PolyRat) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.leading().recip();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &PolyRat) -> PolyRat {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &PolyRat) -> PolyRat {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = std::mem::replace(&mut b, r);
        }
        a.monic()
    }

    /// Inverse of `self` modulo `modulus`, if they are coprime.
    pub fn inverse_mod(&self, modulus: &PolyRat) -> Option<PolyRat> {
        // extended Euclid tracking the coefficient of `self`
        let (mut r0, mut r1) = (modulus.clone(), self.rem(modulus));
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let t2 = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.degree() != Some(0) {
            return None;
        }
        Some(t0.scale(&r0.leading().recip()).rem(modulus))
    }

    /// Scalar multiple with integer coprime coefficients and positive
    /// leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
        ints.into_iter().map(|c| c / &g * &sign).collect()
    }

    /// Coefficients formatted as exact `p/q` strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rational::format).collect()
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational::to_f64).collect()
    }
}

impl fmt::Debug for PolyRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyRat({self})")
    }
}

impl fmt::Display for PolyRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "{}λ", if show_coeff { "·" } else { "" })?,
                _ => write!(f, "{}λ^{k}", if show_coeff { "·" } else { "" })?,
            }
        }
        Ok(())
    }
}

impl Add for &PolyRat {
    type Output = PolyRat;
    fn add(self, rhs: &PolyRat) -> PolyRat {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyRat::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &PolyRat {
    type Output = PolyRat;
    fn sub(self, rhs: &PolyRat) -> PolyRat {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyRat::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &PolyRat {
    type Output = PolyRat;
    fn mul(self, rhs: &PolyRat) -> PolyRat {
        if self.is_zero() || rhs.is_zero() {
            return PolyRat::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyRat::new(out)
    }
}

impl Neg for &PolyRat {
    type Output = PolyRat;
    fn neg(self) -> PolyRat {
        PolyRat::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PolyRat {
            type Output = PolyRat;
            fn $m(self, rhs: PolyRat) -> PolyRat {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for PolyRat {
    type Output = PolyRat;
    fn neg(self) -> PolyRat {
        -&self
    }
}

fn sign(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Integer multiple of a polynomial with the same sign everywhere, for fast
/// exact sign evaluation without rational reductions.
#[derive(Debug, Clone)]
struct SignEval {
    ints: Vec<BigInt>,
}

impl SignEval {
    fn new(p: &PolyRat) -> Self {
        let mut ints = p.primitive_integer();
        if p.leading().is_negative() {
            ints.iter_mut().for_each(|c| *c = -&*c);
        }
        SignEval { ints }
    }

    /// Sign of `Σ c_i a^i b^{d−i}` for `x = a/b`, `b > 0`.
    fn sign_at(&self, x: &Rational) -> i8 {
        let Some((top, rest)) = self.ints.split_last() else { return 0 };
        let (a, b) = (x.numer(), x.denom());
        let mut acc = top.clone();
        let mut bp = BigInt::one();
        for c in rest.iter().rev() {
            bp *= b;
            acc = acc * a + c * &bp;
        }
        match acc.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }
}

/// Sturm chain `p, p', -rem(p, p'), …`.
#[derive(Debug, Clone)]
pub struct SturmSequence {
    chain: Vec<SignEval>,
    last_degree: Option<usize>,
}

impl SturmSequence {
    pub fn new(p: &PolyRat) -> Self {
        let mut chain = vec![p.clone()];
        let d = p.derivative();
        if !d.is_zero() {
            chain.push(d);
            loop {
                let n = chain.len();
                let r = -chain[n - 2].rem(&chain[n - 1]);
                if r.is_zero() {
                    break;
                }
                chain.push(r);
            }
        }
        let last_degree = chain.last().and_then(PolyRat::degree);
        SturmSequence { chain: chain.iter().map(SignEval::new).collect(), last_degree }
    }

    fn variations(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count(&self, lo: &Rational, hi: &Rational) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }

    /// Whether `p` is square-free (the last chain element is constant).
    pub fn is_square_free(&self) -> bool {
        self.last_degree == Some(0)
    }
}

/// A real root of an exact polynomial: an isolating interval `(lo, hi]`
/// containing exactly one root, its `f64` value, and the exact value when the
/// root is rational.
#[derive(Debug, Clone, PartialEq)]
pub struct IsolatedRoot {
    pub lo: Rational,
    pub hi: Rational,
    pub value: f64,
    pub exact: Option<Rational>,
}

/// Power of two strictly exceeding every root modulus (Cauchy bound).
fn root_bound(p: &PolyRat) -> Rational {
    let lead = p.leading().abs();
    let max_ratio = p.coeffs[..p.coeffs.len() - 1]
        .iter()
        .map(|c| c.abs() / &lead)
        .fold(Rational::zero(), |a, b| if b > a { b } else { a });
    let bound = max_ratio + Rational::one();
    let mut pow = Rational::one();
    while pow <= bound {
        pow *= rational::int(2);
    }
    pow
}

/// Isolates and refines all real roots of a square-free polynomial.
///
/// Returns `None` when `p` is zero or has a repeated root. Roots are sorted
/// ascending; `value` is within one ulp of the true root since the final
/// bisection runs over `f64` midpoints with exact sign evaluation.
pub fn real_roots(p: &PolyRat) -> Option<Vec<IsolatedRoot>> {
    let deg = p.degree()?;
    if deg == 0 {
        return Some(Vec::new());
    }
    let sturm = SturmSequence::new(p);
    if !sturm.is_square_free() {
        return None;
    }
    let bound = root_bound(p);
    let mut stack = vec![(-bound.clone(), bound)];
    let mut intervals = Vec::new();
    let two = rational::int(2);
    while let Some((lo, hi)) = stack.pop() {
        match sturm.count(&lo, &hi) {
            0 => {}
            1 => intervals.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / &two;
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    intervals.sort_by(|a, b| a.0.cmp(&b.0));
    let ints = p.primitive_integer();
    let lead = ints.last().cloned().unwrap_or_else(BigInt::one);
    Some(intervals.into_iter().map(|(lo, hi)| refine(p, lo, hi, &lead)).collect())
}

fn refine(p: &PolyRat, lo: Rational, hi: Rational, lead: &BigInt) -> IsolatedRoot {
    let fast = SignEval::new(p);
    if fast.sign_at(&hi) == 0 {
        return IsolatedRoot { value: rational::to_f64(&hi), exact: Some(hi.clone()), lo, hi };
    }
    // Isolating endpoints are dyadic, hence exact in f64.
    let mut a = rational::to_f64(&lo);
    let mut b = rational::to_f64(&hi);
    let sign_at = |x: f64| fast.sign_at(&rational::from_f64(x).expect("finite"));
    let sb = sign_at(b);
    let mut exact = None;
    loop {
        let m = a + 0.5 * (b - a);
        if m <= a || m >= b {
            break;
        }
        let sm = sign_at(m);
        if sm == 0 {
            exact = rational::from_f64(m).ok();
            a = m;
            b = m;
            break;
        }
        if sm == sb {
            b = m;
        } else {
            a = m;
        }
    }
    let value = if (a - b).abs() == 0.0 { a } else { a + 0.5 * (b - a) };
    if exact.is_none() {
        exact = rational_candidate(p, value, &lo, &hi, lead);
    }
    let value = exact.as_ref().map_or(value, rational::to_f64);
    IsolatedRoot { lo, hi, value, exact }
}

/// A rational root `k / c` must have `c` dividing the leading coefficient of
/// the primitive integer form; test the nearest such candidate.
fn rational_candidate(p: &PolyRat, approx: f64, lo: &Rational, hi: &Rational, lead: &BigInt) -> Option<Rational> {
    let lead_f = lead.to_string().parse::<f64>().ok()?;
    if lead_f >= 1e12 {
        return None;
    }
    let k = (approx * lead_f).round();
    let cand = Rational::new(rational::from_f64(k).ok()?.to_integer(), lead.clone());
    (cand > *lo && cand <= *hi && p.eval(&cand).is_zero()).then_some(cand)
}

/// Sturm–Tarski query: the number of real roots of `p` where `r > 0` minus
/// the number where `r < 0`.
pub fn tarski_query(p: &PolyRat, r: &PolyRat) -> i64 {
    if p.is_zero() {
        return 0;
    }
    let mut seq = vec![p.clone(), &p.derivative() * r];
    while !seq.last().unwrap().is_zero() {
        let n = seq.len();
        seq.push(-seq[n - 2].rem(&seq[n - 1]));
    }
    seq.pop();
    let at_infinity = |negative: bool| {
        let signs = seq.iter().map(|q| {
            let s = sign(&q.leading());
            if negative && q.degree().unwrap_or(0) % 2 == 1 {
                -s
            } else {
                s
            }
        });
        signs.collect::<Vec<i8>>().windows(2).filter(|w| w[0] != w[1]).count() as i64
    };
    at_infinity(true) - at_infinity(false)
}

/// Sign of `r` at the unique root of `p` isolated in `(lo, hi]`, computed
/// exactly by shrinking the interval until `r` has no root in it.
///
/// Returns 0 if `r` vanishes at that root.
pub fn sign_at_root(p: &PolyRat, lo: &Rational, hi: &Rational, r: &PolyRat) -> i8 {
    if r.is_zero() {
        return 0;
    }
    let g = p.gcd(r);
    let sp = SturmSequence::new(p);
    if g.degree().unwrap_or(0) > 0 && SturmSequence::new(&g).count(lo, hi) > 0 {
        // the root of p in (lo, hi] is shared with r
        return 0;
    }
    let sr = SturmSequence::new(r);
    let (fp, fr) = (SignEval::new(p), SignEval::new(r));
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    let two = rational::int(2);
    for _ in 0..4096 {
        let at_hi = fr.sign_at(&hi);
        if at_hi != 0 && sr.count(&lo, &hi) == 0 {
            return at_hi;
        }
        if fp.sign_at(&hi) == 0 {
            return at_hi;
        }
        let mid = (&lo + &hi) / &two;
        if sp.count(&lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    fr.sign_at(&hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn arithmetic_and_division() {
        let p = PolyRat::from_i64(&[3, -4, 1]);
        let q = PolyRat::from_i64(&[-1, 1]);
        let (quot, rem) = p.div_rem(&q);
        assert_eq!(quot, PolyRat::from_i64(&[-3, 1]));
        assert!(rem.is_zero());
        assert_eq!(&(&quot * &q) + &rem, p);
        assert_eq!(p.derivative(), PolyRat::from_i64(&[-4, 2]));
        assert_eq!(p.eval(&int(3)), int(0));
        assert_eq!((&p - &p).degree(), None);
    }

    #[test]
    fn example_quotient_matches_hand_division() {
        // (λ² − 4λ + 3) / (2 − λ) = −λ + 2 remainder −1
        let (q, r) = PolyRat::from_i64(&[3, -4, 1]).div_rem(&PolyRat::from_i64(&[2, -1]));
        assert_eq!(q, PolyRat::from_i64(&[2, -1]));
        assert_eq!(r, PolyRat::from_i64(&[-1]));
    }

    #[test]
    fn gcd_and_modular_inverse() {
        let a = PolyRat::from_i64(&[3, -4, 1]);
        let b = PolyRat::from_i64(&[-3, 1]);
        assert_eq!(a.gcd(&b), b);
        let m = PolyRat::from_i64(&[1, -3, 1]);
        let d = m.derivative();
        let inv = d.inverse_mod(&m).unwrap();
        assert_eq!((&inv * &d).rem(&m), PolyRat::one());
        assert_eq!(inv, PolyRat::new(vec![ratio(-3, 5), ratio(2, 5)]));
        assert!(b.inverse_mod(&a).is_none());
    }

    #[test]
    fn isolates_rational_and_irrational_roots() {
        let roots = real_roots(&PolyRat::from_i64(&[3, -4, 1])).unwrap();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].exact, Some(int(1)));
        assert_eq!(roots[1].exact, Some(int(3)));
        assert_eq!(roots[0].value, 1.0);

        let roots = real_roots(&PolyRat::from_i64(&[1, -3, 1])).unwrap();
        let s5 = 5f64.sqrt();
        assert!((roots[0].value - (3.0 - s5) / 2.0).abs() < 1e-15);
        assert!((roots[1].value - (3.0 + s5) / 2.0).abs() < 1e-15);
        assert!(roots.iter().all(|r| r.exact.is_none()));

        // 3λ − 1: non-dyadic rational root
        let roots = real_roots(&PolyRat::from_i64(&[-1, 3])).unwrap();
        assert_eq!(roots[0].exact, Some(ratio(1, 3)));

        // repeated root
        assert!(real_roots(&PolyRat::from_i64(&[1, -2, 1])).is_none());
        // no real roots
        assert!(real_roots(&PolyRat::from_i64(&[1, 0, 1])).unwrap().is_empty());
    }

    #[test]
    fn exact_sign_at_irrational_root() {
        let p = PolyRat::from_i64(&[1, -3, 1]);
        let roots = real_roots(&p).unwrap();
        // λ − 2 is negative at (3−√5)/2 and positive at (3+√5)/2
        let r = PolyRat::from_i64(&[-2, 1]);
        assert_eq!(sign_at_root(&p, &roots[0].lo, &roots[0].hi, &r), -1);
        assert_eq!(sign_at_root(&p, &roots[1].lo, &roots[1].hi, &r), 1);
        assert_eq!(sign_at_root(&p, &roots[1].lo, &roots[1].hi, &p), 0);
        assert_eq!(tarski_query(&p, &r), 0);
        assert_eq!(tarski_query(&p, &PolyRat::one()), 2);
        assert_eq!(tarski_query(&p, &r.scale(&int(-1))), 0);
        assert_eq!(tarski_query(&p, &p.derivative()), 0);
        assert_eq!(tarski_query(&p, &PolyRat::x()), 2);
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(PolyRat::from_i64(&[3, -4, 1]).to_string(), "λ^2 - 4·λ + 3");
        assert_eq!(PolyRat::from_i64(&[2, -1]).to_string(), "-λ + 2");
    }
}
