//! Exact combinatorics and complex polynomial algebra.
//!
//! Conventions used throughout the crate:
//!
//! * subsets of `{1..n}` are kept sorted and enumerated lexicographically;
//! * a binary form of degree `k` stores `k + 1` coefficients `c_i`, where
//!   `c_i` multiplies `u^(k-i) v^i`;
//! * a homogeneous polynomial of degree `d` in `k + 1` variables stores its
//!   coefficients densely, monomials ordered by descending lexicographic
//!   exponent tuples — exactly the order induced by lexicographic subsets
//!   under the gap encoding of [`subset_to_monomial`].

use crate::error::{Error, Result};
use crate::scalar::{from_f64, Real, C};
use num_complex::Complex;
use num_integer::binomial as int_binomial;

/// Exact integer binomial coefficient, converted to the scalar type once.
pub fn binom<T: Real>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    from_f64(int_binomial(n as u128, k as u128) as f64)
}

fn binom_usize(n: usize, k: usize) -> usize {
    if k > n {
        0
    } else {
        int_binomial(n as u128, k as u128) as usize
    }
}

/// Number of degree-`deg` monomials in `vars` variables.
fn monomial_count(vars: usize, deg: u32) -> usize {
    if vars == 0 {
        return if deg == 0 { 1 } else { 0 };
    }
    binom_usize(vars - 1 + deg as usize, deg as usize)
}

// ---------------------------------------------------------------------------
// Subsets
// ---------------------------------------------------------------------------

/// A `d`-subset of `{1..n}`, members sorted strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetIndex {
    n: usize,
    members: Vec<usize>,
}

impl SubsetIndex {
    pub fn new(n: usize, members: Vec<usize>) -> Result<Self> {
        let d = members.len();
        if n < 2 {
            return Err(Error::invalid(format!("subset universe must have n >= 2, got {n}")));
        }
        if d == 0 || d >= n {
            return Err(Error::invalid(format!(
                "subset cardinality must satisfy 1 <= d <= n-1, got d={d}, n={n}"
            )));
        }
        for (a, &m) in members.iter().enumerate() {
            if m < 1 || m > n {
                return Err(Error::invalid(format!("subset member {m} out of range [1, {n}]")));
            }
            if a > 0 && members[a - 1] >= m {
                return Err(Error::invalid("subset members must be strictly increasing".to_string()));
            }
        }
        Ok(SubsetIndex { n, members })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn cardinality(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    /// Sorted complement in `{1..n}`.
    pub fn complement(&self) -> SubsetIndex {
        let members = (1..=self.n).filter(|x| !self.contains(*x)).collect();
        SubsetIndex { n: self.n, members }
    }

    /// Position of this subset in the lexicographic enumeration of all
    /// subsets of the same cardinality.
    pub fn lex_rank(&self) -> usize {
        let d = self.cardinality();
        let mut rank = 0;
        let mut prev = 0;
        for (a, &m) in self.members.iter().enumerate() {
            for x in (prev + 1)..m {
                rank += binom_usize(self.n - x, d - a - 1);
            }
            prev = m;
        }
        rank
    }
}

pub fn complement(set: &SubsetIndex) -> SubsetIndex {
    set.complement()
}

/// All `d`-subsets of `{1..n}` in lexicographic order of their member lists.
/// This order is the canonical row and column order everywhere downstream.
pub fn enumerate_subsets(n: usize, d: usize) -> Result<Vec<SubsetIndex>> {
    if n < 2 || d == 0 || d >= n {
        return Err(Error::invalid(format!(
            "subset enumeration needs 1 <= d <= n-1, got n={n}, d={d}"
        )));
    }
    let mut out = Vec::with_capacity(binom_usize(n, d));
    let mut cur: Vec<usize> = (1..=d).collect();
    loop {
        out.push(SubsetIndex { n, members: cur.clone() });
        // advance to next combination
        let mut i = d;
        while i > 0 && cur[i - 1] == n - d + i {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        cur[i - 1] += 1;
        for j in i..d {
            cur[j] = cur[j - 1] + 1;
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Multi-indices
// ---------------------------------------------------------------------------

/// Exponent tuple `(m_0, ..., m_k)` of a monomial `z_0^{m_0} ... z_k^{m_k}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    exponents: Vec<u32>,
}

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        assert!(!exponents.is_empty(), "multi-index needs at least one variable");
        MultiIndex { exponents }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn vars(&self) -> usize {
        self.exponents.len()
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// Rank among all multi-indices of the same degree and variable count,
    /// ordered by descending lexicographic comparison of exponent tuples.
    pub fn rank(&self) -> usize {
        let vars = self.vars();
        let mut rank = 0;
        let mut rem = self.degree();
        for pos in 0..vars.saturating_sub(1) {
            let m = self.exponents[pos];
            for a in (m + 1)..=rem {
                rank += monomial_count(vars - pos - 1, rem - a);
            }
            rem -= m;
        }
        rank
    }
}

/// All degree-`deg` multi-indices in `vars` variables, descending lex order
/// (so that `list[m.rank()] == m`).
pub fn enumerate_monomials(vars: usize, deg: u32) -> Vec<MultiIndex> {
    assert!(vars >= 1);
    let mut out = Vec::with_capacity(monomial_count(vars, deg));
    let mut cur = vec![0u32; vars];
    fn rec(pos: usize, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if pos == cur.len() - 1 {
            cur[pos] = rem;
            out.push(MultiIndex::new(cur.clone()));
            return;
        }
        for a in (0..=rem).rev() {
            cur[pos] = a;
            rec(pos + 1, rem - a, cur, out);
        }
    }
    rec(0, deg, &mut cur, &mut out);
    out
}

/// Gap encoding of a subset as a monomial: with `J = I^c = {j_1 < ... < j_k}`
/// and sentinels `j_0 = 0`, `j_{k+1} = n + 1`, the exponent of `z_l` is
/// `j_{l+1} - j_l - 1`. The total degree is `d = |I|` and the map is a
/// bijection onto the degree-`d` monomials in `k + 1` variables.
pub fn subset_to_monomial(set: &SubsetIndex) -> MultiIndex {
    let n = set.n();
    let comp = set.complement();
    let j = comp.members();
    let k = j.len();
    let mut exps = Vec::with_capacity(k + 1);
    let mut prev = 0usize;
    for &jj in j {
        exps.push((jj - prev - 1) as u32);
        prev = jj;
    }
    exps.push((n + 1 - prev - 1) as u32);
    MultiIndex::new(exps)
}

// ---------------------------------------------------------------------------
// Binary forms
// ---------------------------------------------------------------------------

/// Homogeneous polynomial of degree `k` in `(u, v)`; `coeffs[i]` multiplies
/// `u^(k-i) v^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryPoly<T: Real> {
    coeffs: Vec<C<T>>,
}

impl<T: Real> BinaryPoly<T> {
    pub fn from_coeffs(coeffs: Vec<C<T>>) -> Self {
        assert!(!coeffs.is_empty(), "binary form needs at least one coefficient");
        BinaryPoly { coeffs }
    }

    /// Degree-1 form `c0 * u + c1 * v`.
    pub fn linear(c0: C<T>, c1: C<T>) -> Self {
        BinaryPoly { coeffs: vec![c0, c1] }
    }

    pub fn zero(degree: usize) -> Self {
        BinaryPoly { coeffs: vec![Complex::new(T::zero(), T::zero()); degree + 1] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C<T>] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> C<T> {
        self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == T::zero() && c.im == T::zero())
    }

    /// Coefficient convolution.
    pub fn mul(&self, other: &BinaryPoly<T>) -> BinaryPoly<T> {
        let a = &self.coeffs;
        let b = &other.coeffs;
        let mut out = vec![Complex::new(T::zero(), T::zero()); a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] += ai * bj;
            }
        }
        BinaryPoly { coeffs: out }
    }

    pub fn pow(&self, e: usize) -> BinaryPoly<T> {
        let mut out = BinaryPoly::from_coeffs(vec![Complex::new(T::one(), T::zero())]);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Evaluate at `(u0, v0)`. Horner in the smaller-magnitude ratio keeps
    /// the homogeneous evaluation stable for any scaling of the point.
    pub fn eval(&self, u0: C<T>, v0: C<T>) -> C<T> {
        let k = self.degree();
        if u0.norm_sqr() >= v0.norm_sqr() {
            // q = u0^k * sum c_i (v0/u0)^i
            if u0.norm_sqr() == T::zero() {
                // both zero: only the constant term survives (k = 0)
                return if k == 0 { self.coeffs[0] } else { Complex::new(T::zero(), T::zero()) };
            }
            let r = v0 / u0;
            let mut acc = self.coeffs[k];
            for i in (0..k).rev() {
                acc = acc * r + self.coeffs[i];
            }
            let mut scale = Complex::new(T::one(), T::zero());
            for _ in 0..k {
                scale *= u0;
            }
            acc * scale
        } else {
            let r = u0 / v0;
            let mut acc = self.coeffs[0];
            for i in 1..=k {
                acc = acc * r + self.coeffs[i];
            }
            let mut scale = Complex::new(T::one(), T::zero());
            for _ in 0..k {
                scale *= v0;
            }
            acc * scale
        }
    }
}

/// Product of degree-1 binary forms by repeated convolution.
pub fn binary_product<T: Real>(factors: &[BinaryPoly<T>]) -> Result<BinaryPoly<T>> {
    if factors.is_empty() {
        return Err(Error::invalid("binary_product needs at least one factor"));
    }
    for f in factors {
        if f.degree() != 1 {
            return Err(Error::invalid(format!(
                "binary_product factors must have degree 1, got degree {}",
                f.degree()
            )));
        }
    }
    let mut acc = factors[0].clone();
    for f in &factors[1..] {
        acc = acc.mul(f);
    }
    Ok(acc)
}

/// The SL(2)-invariant bilinear form
/// `(q, r) = sum_i (-1)^i c_i d_{k-i} / C(k, i)` on degree-`k` binary forms.
pub fn pairing<T: Real>(q: &BinaryPoly<T>, r: &BinaryPoly<T>) -> Result<C<T>> {
    let k = q.degree();
    if r.degree() != k {
        return Err(Error::DegreeMismatch { left: k, right: r.degree() });
    }
    let mut acc = Complex::new(T::zero(), T::zero());
    for i in 0..=k {
        let term = q.coeff(i) * r.coeff(k - i) / binom::<T>(k, i);
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// Pair `q` against the `k`-th power of the linear form vanishing at
/// `(u0, v0)`'s antipode; the pairing reproduces point evaluation, so this
/// must equal `q.eval(u0, v0)`. Kept as a self-test of `pairing`.
pub fn reproduce_eval<T: Real>(q: &BinaryPoly<T>, u0: C<T>, v0: C<T>) -> C<T> {
    let k = q.degree();
    let lin = BinaryPoly::linear(-v0, u0); // u0*v - v0*u
    pairing(q, &lin.pow(k)).expect("powers have matching degree")
}

/// Coefficients `(lambda_0, ..., lambda_k)` of the linear functional
/// `(q, -)` in the coordinates `z_m` dual to the monomial basis
/// `u^(k-m) v^m`: `lambda_m = (-1)^(k-m) c_{k-m} / C(k, m)`.
pub fn lambda_form<T: Real>(q: &BinaryPoly<T>) -> Vec<C<T>> {
    let k = q.degree();
    (0..=k)
        .map(|m| {
            let val = q.coeff(k - m) / binom::<T>(k, m);
            if (k - m).is_multiple_of(2) {
                val
            } else {
                -val
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Dense homogeneous polynomials in several variables
// ---------------------------------------------------------------------------

/// Homogeneous degree-`d` polynomial in `vars` variables, coefficients dense
/// in the canonical monomial order (descending lex exponent tuples).
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly<T: Real> {
    vars: usize,
    degree: u32,
    coeffs: Vec<C<T>>,
}

impl<T: Real> MultiPoly<T> {
    pub fn zero(vars: usize, degree: u32) -> Self {
        MultiPoly {
            vars,
            degree,
            coeffs: vec![Complex::new(T::zero(), T::zero()); monomial_count(vars, degree)],
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &[C<T>] {
        &self.coeffs
    }

    pub fn coeff(&self, m: &MultiIndex) -> C<T> {
        assert_eq!(m.vars(), self.vars);
        assert_eq!(m.degree(), self.degree);
        self.coeffs[m.rank()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == T::zero() && c.im == T::zero())
    }

    pub fn max_abs(&self) -> T {
        self.coeffs.iter().map(|c| c.norm()).fold(T::zero(), T::max)
    }
}

/// Expand the product of `d` linear forms in `vars` variables into a dense
/// degree-`d` polynomial. Plain product: no `1/d!` or multinomial factor.
pub fn product_linear_forms<T: Real>(forms: &[Vec<C<T>>]) -> Result<MultiPoly<T>> {
    if forms.is_empty() {
        return Err(Error::invalid("product_linear_forms needs at least one factor"));
    }
    let vars = forms[0].len();
    if vars == 0 {
        return Err(Error::invalid("linear forms must have at least one variable"));
    }
    for f in forms {
        if f.len() != vars {
            return Err(Error::invalid(format!(
                "linear form length mismatch: expected {vars}, got {}",
                f.len()
            )));
        }
    }
    // Multiply one linear factor at a time; at degree t the monomials of the
    // partial product are enumerated to map slot -> exponent tuple.
    let mut acc = vec![Complex::new(T::one(), T::zero())];
    for (t, form) in forms.iter().enumerate() {
        let t = t as u32;
        let cur = enumerate_monomials(vars, t);
        let mut next = vec![Complex::new(T::zero(), T::zero()); monomial_count(vars, t + 1)];
        for (slot, mono) in cur.iter().enumerate() {
            let base = acc[slot];
            if base.re == T::zero() && base.im == T::zero() {
                continue;
            }
            for (var, &lam) in form.iter().enumerate() {
                if lam.re == T::zero() && lam.im == T::zero() {
                    continue;
                }
                let mut exps = mono.exponents().to_vec();
                exps[var] += 1;
                let target = MultiIndex::new(exps).rank();
                next[target] += base * lam;
            }
        }
        acc = next;
    }
    Ok(MultiPoly { vars, degree: forms.len() as u32, coeffs: acc })
}

// ---------------------------------------------------------------------------
