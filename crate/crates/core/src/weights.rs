//! Semiclassical weights on the non-negative integers.
//!
//! A weight is fixed by the discrete Pearson equation
//! `θ(k+1) w(k+1) = σ(k) w(k)` with
//!
//! ```text
//! θ(z) = z (z + b_1 - 1) ⋯ (z + b_N - 1)        (monic, θ(0) = 0)
//! σ(z) = η (z + a_1) ⋯ (z + a_M)
//! ```
//!
//! and the normalisation `w(0) = 1`, which gives
//! `w(k) = (a_1)_k ⋯ (a_M)_k η^k / (k! (b_1)_k ⋯ (b_N)_k)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::bigreal::BigReal;
use crate::error::{Error, Result};
use crate::GUARD_BITS;

/// Pearson data `(a; b; η)` together with the derived constants κ and Υ.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterSet {
    a: Vec<BigReal>,
    b: Vec<BigReal>,
    eta: BigReal,
    kappa: BigReal,
    upsilon: BigReal,
    prec: usize,
}

impl ParameterSet {
    /// Validates positivity, convergence and the lattice-collision rule.
    pub fn new(a: Vec<BigReal>, b: Vec<BigReal>, eta: BigReal, prec: usize) -> Result<Self> {
        // values already carrying more bits (e.g. after a shift) are kept exactly
        let widen = |x: &BigReal| x.with_precision(x.precision().max(prec));
        let a: Vec<BigReal> = a.iter().map(widen).collect();
        let b: Vec<BigReal> = b.iter().map(widen).collect();
        let eta = widen(&eta);
        for (i, ai) in a.iter().enumerate() {
            if !ai.is_positive() {
                return Err(Error::Domain(format!("a_{} = {ai:.8} must be positive", i + 1)));
            }
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_positive() {
                return Err(Error::Domain(format!("b_{} = {bj:.8} must be positive", j + 1)));
            }
            // root 1 - b_j of θ would sit on the lattice point 0
            if *bj == 1 {
                return Err(Error::Domain(format!(
                    "b_{} = 1 puts a root of θ on the lattice",
                    j + 1
                )));
            }
        }
        if !eta.is_positive() {
            return Err(Error::Domain(format!("η = {eta:.8} must be positive")));
        }
        let (m, n) = (a.len(), b.len());
        if m > n + 1 {
            return Err(Error::DivergentWeight(format!(
                "M = {m} exceeds N + 1 = {}",
                n + 1
            )));
        }
        if m == n + 1 && eta >= 1 {
            return Err(Error::DivergentWeight(format!(
                "M = N + 1 requires η < 1, got η = {eta:.8}"
            )));
        }

        // fixed guard so that κ, Υ do not depend on how many bits the inputs carry
        let wp = prec + crate::GUARD_BITS;
        let one = BigReal::one(wp);
        let prod = |xs: &[BigReal], shift: &BigReal| {
            xs.iter()
                .fold(one.clone(), |acc, x| acc * (x.with_precision(wp) - shift))
        };
        let zero = BigReal::zero(wp);
        let kappa = (prod(&a, &zero) / prod(&b, &zero)).with_precision(prec);
        let upsilon = (eta.with_precision(wp) * prod(&a, &one) / prod(&b, &one)).with_precision(prec);
        Ok(ParameterSet {
            a,
            b,
            eta,
            kappa,
            upsilon,
            prec,
        })
    }

    /// Parses decimal parameter strings at `prec` bits.
    pub fn parse(a: &[&str], b: &[&str], eta: &str, prec: usize) -> Result<Self> {
        let a = a
            .iter()
            .map(|s| BigReal::parse(s, prec))
            .collect::<Result<Vec<_>>>()?;
        let b = b
            .iter()
            .map(|s| BigReal::parse(s, prec))
            .collect::<Result<Vec<_>>>()?;
        Self::new(a, b, BigReal::parse(eta, prec)?, prec)
    }

    pub fn a(&self) -> &[BigReal] {
        &self.a
    }

    pub fn b(&self) -> &[BigReal] {
        &self.b
    }

    pub fn eta(&self) -> &BigReal {
        &self.eta
    }

    /// Number of `a` parameters (degree of σ).
    pub fn m(&self) -> usize {
        self.a.len()
    }

    /// Number of `b` parameters (`deg θ = N + 1`).
    pub fn n(&self) -> usize {
        self.b.len()
    }

    /// κ = ∏ a_i / ∏ b_j.
    pub fn kappa(&self) -> &BigReal {
        &self.kappa
    }

    /// Υ = η ∏ (a_i - 1) / ∏ (b_j - 1).
    pub fn upsilon(&self) -> &BigReal {
        &self.upsilon
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    /// Re-rounds every parameter to `prec` bits.
    pub fn with_precision(&self, prec: usize) -> Result<Self> {
        let r = |xs: &[BigReal]| xs.iter().map(|x| x.with_precision(prec)).collect();
        Self::new(r(&self.a), r(&self.b), self.eta.with_precision(prec), prec)
    }
}

/// Which parameter a contiguous shift acts on. Indices are zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ShiftKind {
    /// `a_i -> a_i + 1` (forward).
    A(usize),
    /// `b_j -> b_j - 1` (forward).
    B(usize),
    /// every `a_i -> a_i + 1` and every `b_j -> b_j + 1` (forward).
    Total,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ShiftSpec {
    pub kind: ShiftKind,
    pub direction: Direction,
}

impl ShiftSpec {
    pub const fn forward(kind: ShiftKind) -> Self {
        ShiftSpec {
            kind,
            direction: Direction::Forward,
        }
    }

    pub const fn inverse(kind: ShiftKind) -> Self {
        ShiftSpec {
            kind,
            direction: Direction::Inverse,
        }
    }

    pub fn inverted(self) -> Self {
        let direction = match self.direction {
            Direction::Forward => Direction::Inverse,
            Direction::Inverse => Direction::Forward,
        };
        ShiftSpec { direction, ..self }
    }

    pub fn is_forward(&self) -> bool {
        self.direction == Direction::Forward
    }

    /// Short label such as `IT1`, `TJ2^-1` or `T`.
    pub fn label(&self) -> alloc::string::String {
        let base = match self.kind {
            ShiftKind::A(i) => format!("IT{}", i + 1),
            ShiftKind::B(j) => format!("TJ{}", j + 1),
            ShiftKind::Total => alloc::string::String::from("T"),
        };
        match self.direction {
            Direction::Forward => base,
            Direction::Inverse => format!("{base}^-1"),
        }
    }

    pub fn check_index(&self, params: &ParameterSet) -> Result<()> {
        match self.kind {
            ShiftKind::A(i) if i >= params.m() => Err(Error::Domain(format!(
                "shift index a_{} out of range (M = {})",
                i + 1,
                params.m()
            ))),
            ShiftKind::B(j) if j >= params.n() => Err(Error::Domain(format!(
                "shift index b_{} out of range (N = {})",
                j + 1,
                params.n()
            ))),
            _ => Ok(()),
        }
    }
}

/// Christoffel data of a forward shift: the shifted weight is
/// `constant⁻¹ (z - root) w(z)` (for the total shift, evaluated at `z + 1`).
#[derive(Clone, Debug)]
pub struct ChristoffelData {
    pub root: BigReal,
    pub constant: BigReal,
}

/// Geronimus data of an inverse shift: the shifted weight is
/// `constant · w(z) / (z - root)` (massless; the total shift adds the point
/// `z = -1` before relabelling).
#[derive(Clone, Debug)]
pub struct GeronimusData {
    pub root: BigReal,
    pub constant: BigReal,
}

/// Weight satisfying the discrete Pearson equation.
#[derive(Clone, Debug, PartialEq)]
pub struct PearsonWeight {
    params: ParameterSet,
    /// ascending coefficients of θ, length N + 2
    theta: Vec<BigReal>,
    /// ascending coefficients of σ, length M + 1
    sigma: Vec<BigReal>,
}

/// Expand `lead · ∏ (z + c_i)` into ascending coefficients.
fn expand_roots(shifts: &[BigReal], lead: &BigReal) -> Vec<BigReal> {
    let prec = lead.precision();
    let mut coeffs = vec![lead.clone()];
    for c in shifts {
        let mut next = vec![BigReal::zero(prec); coeffs.len() + 1];
        for (k, ck) in coeffs.iter().enumerate() {
            next[k + 1] += ck;
            next[k] += ck * c;
        }
        coeffs = next;
    }
    coeffs
}

impl PearsonWeight {
    /// Builds the weight from parameters; θ and σ are expanded from their roots.
    pub fn new(params: ParameterSet) -> Self {
        let prec = params.precision();
        let one = BigReal::one(prec);
        let mut theta_shifts = vec![BigReal::zero(prec)];
        theta_shifts.extend(params.b().iter().map(|b| b - &one));
        let theta = expand_roots(&theta_shifts, &one);
        let sigma = expand_roots(params.a(), params.eta());
        PearsonWeight {
            params,
            theta,
            sigma,
        }
    }

    pub fn params(&self) -> &ParameterSet {
        &self.params
    }

    pub fn precision(&self) -> usize {
        self.params.precision()
    }

    pub fn theta_coeffs(&self) -> &[BigReal] {
        &self.theta
    }

    pub fn sigma_coeffs(&self) -> &[BigReal] {
        &self.sigma
    }

    pub fn with_precision(&self, prec: usize) -> Result<Self> {
        Ok(Self::new(self.params.with_precision(prec)?))
    }

    /// θ(z) from the factored form.
    pub fn theta(&self, z: &BigReal) -> BigReal {
        let one = BigReal::one(z.precision().max(self.precision()));
        self.params
            .b()
            .iter()
            .fold(z.clone(), |acc, b| acc * (z + b - &one))
    }

    /// σ(z) from the factored form.
    pub fn sigma(&self, z: &BigReal) -> BigReal {
        self.params
            .a()
            .iter()
            .fold(self.params.eta().clone(), |acc, a| acc * (z + a))
    }

    /// Roots of θ: `0, 1 - b_1, …, 1 - b_N`.
    pub fn theta_roots(&self) -> Vec<BigReal> {
        let prec = self.precision();
        let one = BigReal::one(prec);
        let mut r = vec![BigReal::zero(prec)];
        r.extend(self.params.b().iter().map(|b| &one - b));
        r
    }

    /// Roots of σ: `-a_1, …, -a_M`.
    pub fn sigma_roots(&self) -> Vec<BigReal> {
        self.params.a().iter().map(|a| -a).collect()
    }

    /// `w(k)` from running Pochhammer products, at `prec` bits.
    pub fn eval(&self, k: u64, prec: usize) -> BigReal {
        let wp = prec + GUARD_BITS;
        let one = BigReal::one(wp);
        let mut num = one.clone();
        let mut den = one.clone();
        let eta = self.params.eta().with_precision(wp);
        for step in 0..k {
            let s = BigReal::from_u64(step, wp);
            for a in self.params.a() {
                num *= &s + a;
            }
            num *= &eta;
            den *= &s + &one;
            for b in self.params.b() {
                den *= &s + b;
            }
        }
        (num / den).with_precision(prec)
    }

    /// `θ(k+1) w(k+1) − σ(k) w(k)` with both weights from [`Self::eval`].
    pub fn pearson_residual(&self, k: u64, prec: usize) -> BigReal {
        let wk = self.eval(k, prec);
        let wk1 = self.eval(k + 1, prec);
        self.pearson_defect(k, &wk, &wk1)
    }

    /// Pearson residual for caller-supplied values of `w(k)` and `w(k+1)`.
    pub fn pearson_defect(&self, k: u64, wk: &BigReal, wk1: &BigReal) -> BigReal {
        let prec = wk.precision().max(wk1.precision());
        let kk = BigReal::from_u64(k, prec);
        let k1 = BigReal::from_u64(k + 1, prec);
        self.theta(&k1) * wk1 - self.sigma(&kk) * wk
    }

    /// Iterator over `w(0), w(1), …` generated by the Pearson ratio.
    pub fn terms(&self, prec: usize) -> WeightTerms<'_> {
        WeightTerms {
            weight: self,
            k: 0,
            current: BigReal::one(prec),
            prec,
        }
    }

    /// Applies a contiguous parameter shift.
    pub fn shift(&self, s: ShiftSpec) -> Result<PearsonWeight> {
        s.check_index(&self.params)?;
        let prec = self.precision();
        let mut a = self.params.a().to_vec();
        let mut b = self.params.b().to_vec();
        let step = if s.is_forward() { 1 } else { -1 };
        match s.kind {
            ShiftKind::A(i) => a[i] = a[i].add_int_exact(step),
            ShiftKind::B(j) => b[j] = b[j].add_int_exact(-step),
            ShiftKind::Total => {
                for x in a.iter_mut().chain(b.iter_mut()) {
                    *x = x.add_int_exact(step);
                }
            }
        }
        let params = ParameterSet::new(a, b, self.params.eta().clone(), prec)?;
        Ok(PearsonWeight::new(params))
    }

    /// Root and constant of the Christoffel factor realised by a forward shift.
    pub fn christoffel_data(&self, kind: ShiftKind) -> Result<ChristoffelData> {
        ShiftSpec::forward(kind).check_index(&self.params)?;
        let prec = self.precision();
        let one = BigReal::one(prec);
        Ok(match kind {
            ShiftKind::A(i) => ChristoffelData {
                root: -&self.params.a()[i],
                constant: self.params.a()[i].clone(),
            },
            ShiftKind::B(j) => ChristoffelData {
                root: &one - &self.params.b()[j],
                constant: &self.params.b()[j] - &one,
            },
            ShiftKind::Total => ChristoffelData {
                root: BigReal::zero(prec),
                constant: self.params.eta() * self.params.kappa(),
            },
        })
    }

    /// Root and constant of the massless Geronimus factor realised by an
    /// inverse shift.
    pub fn geronimus_data(&self, kind: ShiftKind) -> Result<GeronimusData> {
        ShiftSpec::inverse(kind).check_index(&self.params)?;
        let prec = self.precision();
        let one = BigReal::one(prec);
        Ok(match kind {
            ShiftKind::A(i) => GeronimusData {
                root: &one - &self.params.a()[i],
                constant: &self.params.a()[i] - &one,
            },
            ShiftKind::B(j) => GeronimusData {
                root: -&self.params.b()[j],
                constant: self.params.b()[j].clone(),
            },
            ShiftKind::Total => GeronimusData {
                root: -one,
                constant: self.params.upsilon().clone(),
            },
        })
    }
}

/// Successive weights `w(k)` from `w(k+1) = σ(k) w(k) / θ(k+1)`.
pub struct WeightTerms<'a> {
    weight: &'a PearsonWeight,
    k: u64,
    current: BigReal,
    prec: usize,
}

impl WeightTerms<'_> {
    /// Ratio `w(k+1)/w(k)` for the next step, without advancing.
    pub fn next_ratio(&self) -> BigReal {
        let kk = BigReal::from_u64(self.k, self.prec);
        let k1 = BigReal::from_u64(self.k + 1, self.prec);
        self.weight.sigma(&kk) / self.weight.theta(&k1)
    }
}

impl Iterator for WeightTerms<'_> {
    type Item = (u64, BigReal);

    fn next(&mut self) -> Option<Self::Item> {
        let out = (self.k, self.current.clone());
        let ratio = self.next_ratio();
        self.current = &self.current * ratio;
        self.k += 1;
        Some(out)
    }
}
