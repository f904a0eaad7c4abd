use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use super::unit::{AlgebraicUnit, GaloisLabels, Level};
use crate::analytic::{
    basis_points, log2, make_lattice, Lattice, LatticePoint, PrecisionContext, ThetaFunction,
    ThetaValue, TorsionPoint,
};
use crate::error::{Error, Result};
use crate::ntheory::{mul_mod, pow_mod};
use crate::padic::{hensel_embed, CharExponent, Side};
use crate::quadfield::{
    ideals_coprime, prime_transversal, residue, residue_transversal, Field, QuadInt, SplitPrime,
};

fn check_index(field: Field, m: (i64, i64)) -> Result<()> {
    if m.0 < 1 || m.1 < 1 {
        return Err(Error::InvalidIndex(format!(
            "m = {m:?} must satisfy m >= (1, 1)"
        )));
    }
    let w = field.w() as i64;
    if (m.0 - m.1).rem_euclid(w) != 0 {
        return Err(Error::InvalidIndex(format!(
            "m = {m:?} has m1 - m2 not divisible by w = {w}"
        )));
    }
    Ok(())
}

/// The conjugates `θ_𝔞(c · base)` over the transversal in `labels`, with the
/// characteristic polynomial recognised over `O_K`.
pub fn conjugate_vector(
    lat: &Lattice,
    alpha: &QuadInt,
    base: &TorsionPoint,
    labels: &GaloisLabels,
) -> Result<AlgebraicUnit> {
    if !base.primitive {
        return Err(Error::Precondition(format!(
            "{} is not a primitive {}-torsion point",
            base.point, base.modulus
        )));
    }
    let six_mu = base.modulus.scale(&6.into());
    if !ideals_coprime(alpha, &six_mu) {
        return Err(Error::Precondition(format!(
            "({alpha}) is not coprime to 6({})",
            base.modulus
        )));
    }
    let theta = ThetaFunction::new(lat, alpha)?;
    let values = labels
        .reps
        .par_iter()
        .map(|c| theta.eval(&base.point.scale(c).reduced()))
        .collect::<Result<Vec<_>>>()?;
    AlgebraicUnit::from_conjugates(lat.field(), values, Some(labels.clone()), lat.prec())
}

/// `σ_{c'} ∏_c v_c^{e_c} = ∏_c v_{c'c}^{e_c}` for every label `c'`.
fn twisted_products(
    unit: &AlgebraicUnit,
    labels: &GaloisLabels,
    weights: &[u64],
) -> Result<Vec<ThetaValue>> {
    let prec = unit.conjugates[0].prec();
    labels
        .reps
        .par_iter()
        .map(|c1| {
            let mut acc = ThetaValue::one(prec);
            for (c, &e) in labels.reps.iter().zip(weights) {
                if e == 0 {
                    continue;
                }
                let j = labels
                    .position(&(c1 * c))
                    .ok_or_else(|| Error::BadCosets(format!("{c1}·{c} has no class")))?;
                acc = acc.mul(&unit.conjugates[j].pow(e as i64));
            }
            Ok(acc)
        })
        .collect()
}

/// Exponents `χ^{m-1}(c) mod p` in `[0, p)` over the labels.
fn character_weights(labels: &GaloisLabels, m: (i64, i64)) -> Result<Vec<u64>> {
    check_index(labels.sp.field(), m)?;
    match labels.level {
        Level::Prime(Side::P) if m.1 != 1 => {
            return Err(Error::Precondition(format!(
                "χ^{m:?} does not factor through K(𝔭)"
            )));
        }
        Level::Prime(Side::PBar) if m.0 != 1 => {
            return Err(Error::Precondition(format!(
                "χ^{m:?} does not factor through K(𝔭̄)"
            )));
        }
        _ => {}
    }
    let chi = CharExponent::new(hensel_embed(&labels.sp, 1)?, (m.0 - 1, m.1 - 1));
    labels.reps.iter().map(|c| chi.value(c)).collect()
}

/// `φ_m(u) = ∏_σ σ(u)^{χ^{m-1}(σ)}` as a conjugate vector, re-recognised.
pub fn isotypic_product(unit: &AlgebraicUnit, m: (i64, i64), p: u64) -> Result<AlgebraicUnit> {
    let labels = unit
        .labels
        .as_ref()
        .ok_or_else(|| Error::Precondition("unit carries no Galois labels".into()))?;
    if labels.sp.p != p {
        return Err(Error::Precondition(format!(
            "unit is indexed mod {}, not {p}",
            labels.sp.p
        )));
    }
    let weights = character_weights(labels, m)?;
    let values = twisted_products(unit, labels, &weights)?;
    AlgebraicUnit::from_conjugates(unit.field(), values, Some(labels.clone()), unit.prec)
}

/// Which shape of `ε_{m,1,𝔞}` applies to `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsilonShape {
    /// `m >= (2, 2)`: base point `ω_{1,1} + ω_{2,1}` in `K(p)`.
    Central,
    /// `m₂ = 1`: base point `π̄ω_{1,1}` in `K(𝔭)`.
    EdgeP,
    /// `m₁ = 1`: base point `πω_{2,1}` in `K(𝔭̄)`.
    EdgePBar,
}

impl EpsilonShape {
    pub fn of(m: (i64, i64)) -> Result<Self> {
        match m {
            (1, 1) => Err(Error::InvalidIndex(
                "m = (1, 1) has no elliptic Soulé character".into(),
            )),
            (a, b) if a < 1 || b < 1 => Err(Error::InvalidIndex(format!(
                "m = {m:?} must satisfy m >= (1, 1)"
            ))),
            (_, 1) => Ok(EpsilonShape::EdgeP),
            (1, _) => Ok(EpsilonShape::EdgePBar),
            _ => Ok(EpsilonShape::Central),
        }
    }
}

/// `N𝔞 - χ^{1-m}(σ_𝔞) mod p`; `ε` is usable only when this is non-zero.
pub fn admissibility_value(sp: &SplitPrime, m: (i64, i64), alpha: &QuadInt) -> Result<u64> {
    let emb = hensel_embed(sp, 1)?;
    let chi = emb.i_power((1 - m.0, 1 - m.1), alpha)?;
    let n = residue(&alpha.norm(), sp.p);
    Ok((n + sp.p - chi) % sp.p)
}

fn check_alpha(sp: &SplitPrime, m: (i64, i64), alpha: &QuadInt) -> Result<()> {
    if alpha.field() != sp.field() {
        return Err(Error::FieldMismatch(alpha.field().d(), sp.field().d()));
    }
    let six_p = QuadInt::from_i64(sp.field(), 6 * sp.p as i64);
    if alpha.is_unit() || alpha.is_zero() || !ideals_coprime(alpha, &six_p) {
        return Err(Error::Admissibility(format!(
            "({alpha}) must be a proper ideal coprime to 6·{}; choose another ideal",
            sp.p
        )));
    }
    if admissibility_value(sp, m, alpha)? == 0 {
        return Err(Error::Admissibility(format!(
            "N({alpha}) - χ^(1-m)(σ) ≡ 0 mod {} for m = {m:?}; choose another ideal",
            sp.p
        )));
    }
    Ok(())
}

/// The smallest-norm admissible `α` (ties broken by `(|b|, |a|, b, a)`), searching norms up to `bound`.
pub fn admissible_ideal(sp: &SplitPrime, m: (i64, i64), bound: i64) -> Result<QuadInt> {
    let field = sp.field();
    let mut candidates = Vec::new();
    let r = (4 * bound) as f64;
    let lim = r.sqrt().ceil() as i64 + 1;
    for b in -lim..=lim {
        for a in -lim..=lim {
            let x = QuadInt::new(field, a, b);
            let n = x.norm();
            if n > 1 && n <= bound {
                candidates.push((n, b.abs(), a.abs(), b, a, x));
            }
        }
    }
    candidates.sort_by(|x, y| (&x.0, x.1, x.2, -x.3, -x.4).cmp(&(&y.0, y.1, y.2, -y.3, -y.4)));
    candidates
        .into_iter()
        .map(|c| c.5)
        .find(|x| check_alpha(sp, m, x).is_ok())
        .ok_or_else(|| {
            Error::Admissibility(format!(
                "no admissible ideal of norm <= {bound} for m = {m:?}"
            ))
        })
}

/// `ε_{m,1,𝔞}` by both routes.
#[derive(Debug, Clone)]
pub struct Epsilon {
    pub m: (i64, i64),
    pub alpha: QuadInt,
    pub shape: EpsilonShape,
    /// `w_K · φ_m` applied to the conjugates of the base value.
    pub projected: AlgebraicUnit,
    /// The product over `a, b ∈ F_p^×` taken directly.
    pub direct: AlgebraicUnit,
    /// Largest relative difference between the two conjugate vectors.
    pub pipeline_residual: Float,
}

impl Epsilon {
    pub fn pipeline_residual_log2(&self) -> f64 {
        log2(&self.pipeline_residual)
    }
}

/// Route through the transversal: `θ_𝔞(base)` conjugates, then `w·φ_m`.
fn projected(
    lat: &Lattice,
    sp: &SplitPrime,
    m: (i64, i64),
    alpha: &QuadInt,
    shape: EpsilonShape,
) -> Result<AlgebraicUnit> {
    let field = sp.field();
    let (labels, base) = match shape {
        EpsilonShape::Central => {
            let labels = GaloisLabels::new(sp, Level::Full, residue_transversal(sp))?;
            let p = QuadInt::from_i64(field, sp.p as i64);
            // ω_{1,1} + ω_{2,1} = (π + π̄)/p
            (labels, TorsionPoint::new(&p, &(&sp.pi + &sp.pi_bar))?)
        }
        EpsilonShape::EdgeP => {
            let labels = GaloisLabels::new(sp, Level::Prime(Side::P), prime_transversal(sp))?;
            (labels, TorsionPoint::new(&sp.pi, &sp.pi_bar)?)
        }
        EpsilonShape::EdgePBar => {
            let labels = GaloisLabels::new(sp, Level::Prime(Side::PBar), prime_transversal(sp))?;
            (labels, TorsionPoint::new(&sp.pi_bar, &sp.pi)?)
        }
    };
    let base_unit = conjugate_vector(lat, alpha, &base, &labels)?;
    let w = field.w() as u64;
    let weights: Vec<u64> = character_weights(&labels, m)?
        .iter()
        .map(|e| e * w)
        .collect();
    let values = twisted_products(&base_unit, &labels, &weights)?;
    AlgebraicUnit::from_conjugates(field, values, Some(labels), lat.prec())
}

/// Route through the full grid `aω_{1,1} + bω_{2,1}` with exponents `a^{m₁-1} b^{m₂-1} mod p`.
fn direct(
    lat: &Lattice,
    sp: &SplitPrime,
    m: (i64, i64),
    alpha: &QuadInt,
    projected: &AlgebraicUnit,
) -> Result<AlgebraicUnit> {
    let p = sp.p;
    let labels = projected
        .labels
        .as_ref()
        .expect("projected unit is labelled");
    let theta = ThetaFunction::new(lat, alpha)?;
    let (w1, w2) = basis_points(sp, 1);
    let (e1, e2) = ((m.0 - 1) as u64, (m.1 - 1) as u64);
    let emb = hensel_embed(sp, 1)?;
    // grid[a][b] = θ(aω₁ + bω₂); the edge shapes use a single row.
    let edge_point = |a: u64| -> LatticePoint {
        match labels.level {
            Level::Prime(Side::P) => w1.scale(&sp.pi_bar).times(&a.into()).reduced(),
            Level::Prime(Side::PBar) => w2.scale(&sp.pi).times(&a.into()).reduced(),
            Level::Full => unreachable!(),
        }
    };
    match labels.level {
        Level::Full => {
            let pairs: Vec<(u64, u64)> = (1..p).flat_map(|a| (1..p).map(move |b| (a, b))).collect();
            let grid = pairs
                .par_iter()
                .map(|&(a, b)| theta.eval(&w1.times(&a.into()).add(&w2.times(&b.into())).reduced()))
                .collect::<Result<Vec<_>>>()?;
            let at = |a: u64, b: u64| &grid[((a - 1) * (p - 1) + (b - 1)) as usize];
            let values = labels
                .reps
                .iter()
                .map(|c| {
                    let (x, y) = (emb.i1(c), emb.i2(c));
                    let mut acc = ThetaValue::one(lat.working());
                    for &(a, b) in &pairs {
                        let e = mul_mod(pow_mod(a, e1, p), pow_mod(b, e2, p), p);
                        if e != 0 {
                            acc = acc.mul(&at(mul_mod(a, x, p), mul_mod(b, y, p)).pow(e as i64));
                        }
                    }
                    acc
                })
                .collect();
            AlgebraicUnit::from_conjugates(sp.field(), values, Some(labels.clone()), lat.prec())
        }
        Level::Prime(side) => {
            let row = (1..p)
                .into_par_iter()
                .map(|a| theta.eval(&edge_point(a)))
                .collect::<Result<Vec<_>>>()?;
            let e = if side == Side::P { e1 } else { e2 };
            let values = labels
                .reps
                .iter()
                .map(|c| {
                    let x = emb.side(side, c);
                    let mut acc = ThetaValue::one(lat.working());
                    for a in 1..p {
                        let k = pow_mod(a, e, p);
                        acc = acc.mul(&row[(mul_mod(a, x, p) - 1) as usize].pow(k as i64));
                    }
                    acc
                })
                .collect();
            AlgebraicUnit::from_conjugates(sp.field(), values, Some(labels.clone()), lat.prec())
        }
    }
}

/// `ε_{m,1,𝔞}` for `𝔞 = (α)`, computed by projection and by the direct
/// product, which must agree within tolerance.
pub fn epsilon_m1a(
    lat: &Lattice,
    sp: &SplitPrime,
    m: (i64, i64),
    alpha: &QuadInt,
) -> Result<Epsilon> {
    if lat.field() != sp.field() {
        return Err(Error::FieldMismatch(lat.field().d(), sp.field().d()));
    }
    let shape = EpsilonShape::of(m)?;
    check_index(sp.field(), m)?;
    check_alpha(sp, m, alpha)?;
    let proj = projected(lat, sp, m, alpha, shape)?;
    let dir = direct(lat, sp, m, alpha, &proj)?;
    let residual = proj.max_residual(&dir)?;
    if residual > lat.prec().tol() {
        return Err(Error::PipelineMismatch {
            log2_residual: log2(&residual),
        });
    }
    Ok(Epsilon {
        m,
        alpha: alpha.clone(),
        shape,
        projected: proj,
        direct: dir,
        pipeline_residual: residual,
    })
}

/// Runs `f` at `prec` and at twice `prec`, and accepts the result only if
/// the recognised polynomials coincide.
pub fn recognise_stable<T>(
    prec: PrecisionContext,
    f: impl Fn(PrecisionContext) -> Result<T>,
    poly: impl Fn(&T) -> &AlgebraicUnit,
) -> Result<(T, T)> {
    let lo = f(prec)?;
    let hi = f(prec.doubled())?;
    if poly(&lo).minpoly != poly(&hi).minpoly {
        return Err(Error::RecognitionFailure {
            log2_residual: log2(&poly(&lo).rounding_residual),
        });
    }
    Ok((lo, hi))
}

/// Ceiling for automatic precision increases, unless the caller starts higher.
pub const MAX_AUTO_BITS: u32 = 1 << 13;

/// Bits needed for recognition after a failure at `bits` with the given residual.
fn retry_bits(bits: u32, log2_residual: f64) -> u32 {
    let want = 2.0 * (log2_residual.max(0.0) + bits as f64) + 64.0;
    let want = (want / 64.0).ceil() as u32 * 64;
    want.max(2 * bits)
}

/// `ε_{m,1,𝔞}` recognised at a precision large enough for its coefficients,
/// and confirmed at twice that precision.
#[derive(Debug, Clone)]
pub struct StableEpsilon {
    pub eps: Epsilon,
    pub doubled: Epsilon,
    pub prec: PrecisionContext,
}

pub fn epsilon_stable(
    sp: &SplitPrime,
    m: (i64, i64),
    alpha: &QuadInt,
    prec: PrecisionContext,
) -> Result<StableEpsilon> {
    let field = sp.field();
    let at = |pc: PrecisionContext| epsilon_m1a(&make_lattice(field, pc), sp, m, alpha);
    let cap = MAX_AUTO_BITS.max(prec.bits());
    let mut prec = prec;
    loop {
        match at(prec) {
            Err(Error::RecognitionFailure { log2_residual }) if prec.bits() < cap => {
                prec = PrecisionContext::new(retry_bits(prec.bits(), log2_residual).min(cap))?;
            }
            Err(e) => return Err(e),
            Ok(_) => break,
        }
    }
    let (eps, doubled) = recognise_stable(prec, at, |e| &e.projected)?;
    Ok(StableEpsilon { eps, doubled, prec })
}
