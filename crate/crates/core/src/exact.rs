//! Closed-form ground and first excited states.
//!
//! The ground state is `R0(r) = r^κ exp(-(√a r² + √c r⁻²)/2)`, exact whenever
//! `(b + 2√c)² = 4c(m² + 2√(ac))`. The first excited state multiplies the same
//! envelope by `√a r² − √c r⁻²` and needs the extra condition `b = −6√c`.
//! Requiring both at once gives `m² + 2√(ac) = 4`, which only m = 0 and m = 1 satisfy.
//!
//! All wavefunctions are unnormalized (leading constant 1).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Natural-log floor of the smallest positive normal double. Envelopes whose
/// log falls at or below it evaluate to exactly zero.
pub const LOG_UNDERFLOW: f64 = -745.0;

/// Coefficients of `V(r) = a r² + b r⁻⁴ + c r⁻⁶` with `a > 0`, `c > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParams {
    a: f64,
    b: f64,
    c: f64,
}

impl PotentialParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "potential coefficients must be finite (a = {a}, b = {b}, c = {c})"
            )));
        }
        if a <= 0.0 {
            return Err(Error::InvalidInput(format!("a must be > 0, got {a}")));
        }
        if c <= 0.0 {
            return Err(Error::InvalidInput(format!("c must be > 0, got {c}")));
        }
        Ok(Self { a, b, c })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Same `a`, `c` with a different `b`.
    pub fn with_b(&self, b: f64) -> Result<Self> {
        Self::new(self.a, b, self.c)
    }

    /// `V(r)`.
    pub fn value(&self, r: f64) -> f64 {
        let r2 = r * r;
        let inv2 = 1.0 / r2;
        self.a * r2 + inv2 * inv2 * (self.b + self.c * inv2)
    }

    /// `V(r) + (m² − 1/4)/r²`, the full radial potential for channel `m`.
    pub fn effective(&self, m: AngularChannel, r: f64) -> f64 {
        self.value(r) + m.centrifugal() / (r * r)
    }
}

/// Angular momentum quantum number `m ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AngularChannel(pub u32);

impl AngularChannel {
    pub fn m(self) -> u32 {
        self.0
    }

    /// Coefficient of `1/r²` in the 2D radial reduction, `m² − 1/4`.
    pub fn centrifugal(self) -> f64 {
        let m = f64::from(self.0);
        m * m - 0.25
    }
}

impl From<u32> for AngularChannel {
    fn from(m: u32) -> Self {
        Self(m)
    }
}

/// Sign choice in `κ = 1/2 ± √(m² + 2√(ac))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignBranch {
    Plus,
    Minus,
}

impl SignBranch {
    pub fn sign(self) -> f64 {
        match self {
            SignBranch::Plus => 1.0,
            SignBranch::Minus => -1.0,
        }
    }
}

impl fmt::Display for SignBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignBranch::Plus => "plus",
            SignBranch::Minus => "minus",
        })
    }
}

impl FromStr for SignBranch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "plus" | "+" => Ok(SignBranch::Plus),
            "minus" | "-" => Ok(SignBranch::Minus),
            other => Err(Error::InvalidInput(format!(
                "unknown sign branch '{other}' (expected plus or minus)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    Ground,
    Excited,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Ground => "ground",
            Level::Excited => "excited",
        })
    }
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ground" => Ok(Level::Ground),
            "excited" => Ok(Level::Excited),
            other => Err(Error::InvalidInput(format!(
                "unknown state '{other}' (expected ground or excited)"
            ))),
        }
    }
}

/// `R(r) = (poly_c2 r² + poly_c0 + poly_cm2 r⁻²) · r^kappa · exp((alpha r² + beta r⁻²)/2)`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormState {
    pub kappa: f64,
    /// Always `−√a`.
    pub alpha: f64,
    /// Always `−√c`.
    pub beta: f64,
    pub poly_c2: f64,
    pub poly_c0: f64,
    pub poly_cm2: f64,
    pub energy: f64,
    pub level: Level,
}

impl ClosedFormState {
    /// Ground-state ansatz on the given branch. Energy comes from `√a(4 + b/√c)`,
    /// which is exact only if `p` satisfies the ground constraint for `m`.
    pub fn ground(p: &PotentialParams, m: AngularChannel, branch: SignBranch) -> Self {
        Self {
            kappa: ground_kappa(m, p, branch),
            alpha: -p.a.sqrt(),
            beta: -p.c.sqrt(),
            poly_c2: 0.0,
            poly_c0: 1.0,
            poly_cm2: 0.0,
            energy: ground_energy(p),
            level: Level::Ground,
        }
    }

    /// First excited ansatz with prefactor `√a r² − √c r⁻²`.
    pub fn excited(p: &PotentialParams) -> Self {
        Self {
            kappa: excited_kappa1(p.b, p.c),
            alpha: -p.a.sqrt(),
            beta: -p.c.sqrt(),
            poly_c2: p.a.sqrt(),
            poly_c0: 0.0,
            poly_cm2: -p.c.sqrt(),
            energy: excited_energy(p),
            level: Level::Excited,
        }
    }

    /// Same state with the prefactor multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            poly_c2: self.poly_c2 * factor,
            poly_c0: self.poly_c0 * factor,
            poly_cm2: self.poly_cm2 * factor,
            ..*self
        }
    }

    /// `ln` of the envelope `r^κ exp((α r² + β r⁻²)/2)`.
    pub fn log_envelope(&self, r: f64) -> f64 {
        let r2 = r * r;
        self.kappa * r.ln() + 0.5 * (self.alpha * r2 + self.beta / r2)
    }

    pub fn prefactor(&self, r: f64) -> f64 {
        let r2 = r * r;
        self.poly_c2 * r2 + self.poly_c0 + self.poly_cm2 / r2
    }

    /// `R(r)` for any `r > 0`, clamped to zero where the envelope underflows.
    pub fn eval(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        Ok(self.value(r))
    }

    pub(crate) fn value(&self, r: f64) -> f64 {
        let log = self.log_envelope(r);
        if log.is_nan() || log <= LOG_UNDERFLOW {
            return 0.0;
        }
        let v = self.prefactor(r) * log.exp();
        // avoid -0.0 leaking into output
        if v == 0.0 {
            0.0
        } else {
            v
        }
    }

    /// Node-safe eigen-residual density
    /// `f·[p'' + p'² + E − V − (m² − 1/4)/r²] + f'' + 2p'f'`,
    /// i.e. `(R'' + [E − V_eff]R) / exp(p)`. Zero wherever the ansatz is exact.
    pub fn residual(&self, p: &PotentialParams, m: AngularChannel, r: f64) -> Result<f64> {
        check_radius(r)?;
        let inv = 1.0 / r;
        let inv2 = inv * inv;
        let inv3 = inv2 * inv;
        let inv4 = inv2 * inv2;

        let dp = self.alpha * r - self.beta * inv3 + self.kappa * inv;
        let d2p = self.alpha + 3.0 * self.beta * inv4 - self.kappa * inv2;

        let f = self.prefactor(r);
        let df = 2.0 * self.poly_c2 * r - 2.0 * self.poly_cm2 * inv3;
        let d2f = 2.0 * self.poly_c2 + 6.0 * self.poly_cm2 * inv4;

        let bracket = d2p + dp * dp + self.energy - p.effective(m, r);
        Ok(f * bracket + d2f + 2.0 * dp * df)
    }

    /// Magnitude against which [`ClosedFormState::residual`] is judged:
    /// `max(|E|, |V(r)|) · (|c2| r² + |c0| + |cm2| r⁻²)`.
    pub fn residual_scale(&self, p: &PotentialParams, r: f64) -> f64 {
        let r2 = r * r;
        let poly = self.poly_c2.abs() * r2 + self.poly_c0.abs() + self.poly_cm2.abs() / r2;
        self.energy.abs().max(p.value(r).abs()) * poly
    }

    /// Interior zeros of the prefactor. Empty for the ground state,
    /// `(c/a)^(1/8)` for the excited state.
    pub fn prefactor_roots(&self) -> Vec<f64> {
        // c2 r⁴ + c0 r² + cm2 = 0 as a quadratic in r²
        let (qa, qb, qc) = (self.poly_c2, self.poly_c0, self.poly_cm2);
        let mut roots = Vec::new();
        if qa == 0.0 {
            if qb != 0.0 {
                let x = -qc / qb;
                if x > 0.0 {
                    roots.push(x.sqrt());
                }
            }
            return roots;
        }
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 {
            return roots;
        }
        let sq = disc.sqrt();
        let q = -0.5 * (qb + qb.signum() * sq);
        let mut xs = vec![q / qa];
        if q != 0.0 {
            xs.push(qc / q);
        }
        for x in xs {
            if x > 0.0 && !roots.iter().any(|&r: &f64| (r * r - x).abs() <= 1e-14 * x) {
                roots.push(x.sqrt());
            }
        }
        roots.sort_by(f64::total_cmp);
        roots
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && !r.is_nan() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("radius must be > 0, got {r}")))
    }
}

fn expect_level(state: &ClosedFormState, level: Level) -> Result<()> {
    if state.level == level {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "expected a {level} state, got a {} state",
            state.level
        )))
    }
}

/// `κ = 1/2 ± √(m² + 2√(ac))`.
pub fn ground_kappa(m: AngularChannel, p: &PotentialParams, branch: SignBranch) -> f64 {
    let mf = f64::from(m.0);
    0.5 + branch.sign() * (mf * mf + 2.0 * (p.a * p.c).sqrt()).sqrt()
}

/// The `b` that makes the ground ansatz exact on `branch`:
/// `b = −2√c ± 2√c·√(m² + 2√(ac))`.
pub fn ground_constraint_b(a: f64, c: f64, m: AngularChannel, branch: SignBranch) -> Result<f64> {
    let p = PotentialParams::new(a, 0.0, c)?;
    let sc = p.c.sqrt();
    let mf = f64::from(m.0);
    let root = (mf * mf + 2.0 * (p.a * p.c).sqrt()).sqrt();
    Ok(-2.0 * sc + branch.sign() * 2.0 * sc * root)
}

/// `(b + 2√c)² − 4c(m² + 2√(ac))`; zero iff the ground ansatz is exact on some branch.
pub fn ground_constraint_residual(p: &PotentialParams, m: AngularChannel) -> f64 {
    let mf = f64::from(m.0);
    let t = p.b + 2.0 * p.c.sqrt();
    t * t - 4.0 * p.c * (mf * mf + 2.0 * (p.a * p.c).sqrt())
}

/// `E₀ = √a(4 + b/√c)`.
pub fn ground_energy(p: &PotentialParams) -> f64 {
    p.a.sqrt() * (4.0 + p.b / p.c.sqrt())
}

/// `κ₁ = (b + 7√c)/(2√c)`.
pub fn excited_kappa1(b: f64, c: f64) -> f64 {
    let sc = c.sqrt();
    (b + 7.0 * sc) / (2.0 * sc)
}

/// `E₁ = √a(12 + b/√c)`.
pub fn excited_energy(p: &PotentialParams) -> f64 {
    p.a.sqrt() * (12.0 + p.b / p.c.sqrt())
}

pub fn ground_radial_eval(state: &ClosedFormState, r: f64) -> Result<f64> {
    expect_level(state, Level::Ground)?;
    state.eval(r)
}

pub fn excited_radial_eval(state: &ClosedFormState, r: f64) -> Result<f64> {
    expect_level(state, Level::Excited)?;
    state.eval(r)
}

pub fn ground_residual(
    state: &ClosedFormState,
    p: &PotentialParams,
    m: AngularChannel,
    r: f64,
) -> Result<f64> {
    expect_level(state, Level::Ground)?;
    state.residual(p, m, r)
}

pub fn excited_residual(
    state: &ClosedFormState,
    p: &PotentialParams,
    m: AngularChannel,
    r: f64,
) -> Result<f64> {
    expect_level(state, Level::Excited)?;
    state.residual(p, m, r)
}

/// Maximum of `|R₀|`: the positive root of `√a r⁴ − κ r² − √c = 0`.
pub fn ground_peak_radius(state: &ClosedFormState) -> Result<f64> {
    expect_level(state, Level::Ground)?;
    let sa = -state.alpha;
    let sc = -state.beta;
    let k = state.kappa;
    let d = (k * k + 4.0 * sa * sc).sqrt();
    // pick the form without cancellation
    let r2 = if k >= 0.0 {
        (k + d) / (2.0 * sa)
    } else {
        2.0 * sc / (d - k)
    };
    Ok(r2.sqrt())
}

/// Parameters for which both the ground and the first excited ansatz are exact
/// in the same channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointSolution {
    pub params: PotentialParams,
    pub m: AngularChannel,
    pub ground: ClosedFormState,
    pub excited: ClosedFormState,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl JointSolution {
    pub fn c(&self) -> f64 {
        self.params.c
    }

    pub fn b(&self) -> f64 {
        self.params.b
    }

    pub fn kappa(&self) -> f64 {
        self.ground.kappa
    }

    pub fn kappa1(&self) -> f64 {
        self.excited.kappa
    }

    pub fn e0(&self) -> f64 {
        self.ground.energy
    }

    pub fn e1(&self) -> f64 {
        self.excited.energy
    }
}

/// Fix `c` and `b` from `a` and `m` so that both states are exact.
///
/// `b = −6√c` from the excited state turns the ground constraint into
/// `m² + 2√(ac) = 4`, so `√(ac) = (4 − m²)/2`. For m ≥ 2 that is ≤ 0 and
/// no solution exists. The ground state then sits on the minus branch with
/// `κ = −3/2`, and `κ₁ = 1/2`.
///
/// Exponents and energies are set to their exact values (`κ = −3/2`, `κ₁ = 1/2`,
/// `E₀ = −2√a`, `E₁ = 6√a`) instead of being recomputed from the rounded `b` and `c`.
pub fn excited_solve(a: f64, m: AngularChannel) -> Result<JointSolution> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::InvalidInput(format!(
            "a must be finite and > 0, got {a}"
        )));
    }
    if m.0 >= 2 {
        return Err(Error::Unsolvable { m: m.0 });
    }
    let mf = f64::from(m.0);
    let sqrt_ac = (4.0 - mf * mf) / 2.0;
    let c = sqrt_ac * sqrt_ac / a;
    let b = -6.0 * c.sqrt();
    let params = PotentialParams::new(a, b, c)?;
    let ground = ClosedFormState {
        kappa: -1.5,
        energy: -2.0 * a.sqrt(),
        ..ClosedFormState::ground(&params, m, SignBranch::Minus)
    };
    let excited = ClosedFormState {
        kappa: 0.5,
        energy: 6.0 * a.sqrt(),
        ..ClosedFormState::excited(&params)
    };
    Ok(JointSolution {
        params,
        m,
        ground,
        excited,
        a1: excited.poly_c0,
        a2: excited.poly_c2,
        a3: excited.poly_cm2,
    })
}
