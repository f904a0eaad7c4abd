use rayon::prelude::*;
use rug::Integer;

use super::report::{params, IdentityReport};
use crate::analytic::{
    basis_combination, basis_points, torsion_points, Lattice, LatticePoint, ThetaFunction,
    ThetaValue, TorsionPoint,
};
use crate::error::{Error, Result};
use crate::ntheory::{inv_mod, mul_mod, pow_mod};
use crate::padic::hensel_embed;
use crate::quadfield::{ideals_coprime, QuadInt, ResidueRing, SplitPrime};

/// Evaluates `th` at every point in parallel, keeping input order.
pub(crate) fn eval_all(th: &ThetaFunction<'_>, pts: &[LatticePoint]) -> Result<Vec<ThetaValue>> {
    pts.par_iter().map(|z| th.eval(z)).collect()
}

fn product(th: &ThetaFunction<'_>, pts: &[LatticePoint]) -> Result<ThetaValue> {
    let vals = eval_all(th, pts)?;
    Ok(ThetaValue::product(th.lattice().working(), &vals))
}

fn proper(x: &QuadInt, what: &str) -> Result<()> {
    if x.is_zero() || x.is_unit() {
        return Err(Error::Precondition(format!(
            "{what} = ({x}) must be a proper non-zero ideal"
        )));
    }
    Ok(())
}

fn coprime(x: &QuadInt, y: &QuadInt) -> Result<()> {
    if !ideals_coprime(x, y) {
        return Err(Error::Precondition(format!(
            "ideals ({x}) and ({y}) are not coprime"
        )));
    }
    Ok(())
}

fn six_times(x: &QuadInt) -> QuadInt {
    x.scale(&Integer::from(6))
}

/// `∏_{ν ∈ E[𝔟]} θ_𝔞(τ + ν) = θ_𝔞(βτ)`.
pub fn check_distribution(
    lat: &Lattice,
    alpha: &QuadInt,
    beta: &QuadInt,
    tau: &LatticePoint,
) -> Result<IdentityReport> {
    proper(alpha, "a")?;
    proper(beta, "b")?;
    coprime(alpha, beta)?;
    let th = ThetaFunction::new(lat, alpha)?;
    let pts: Vec<LatticePoint> = torsion_points(beta, false)?
        .iter()
        .map(|t| tau.add(&t.point))
        .collect();
    let lhs = product(&th, &pts).map_err(|e| match e {
        Error::EvaluationAtDivisor(m) => {
            Error::EvaluationAtDivisor(format!("translate by E[{beta}]: {m}"))
        }
        e => e,
    })?;
    let rhs = th.eval(&tau.scale(beta))?;
    Ok(IdentityReport::new(
        "distribution",
        lat,
        params([
            ("a", alpha.to_string()),
            ("b", beta.to_string()),
            ("tau", tau.to_string()),
        ]),
        lhs,
        rhs,
    ))
}

/// `θ_𝔞(cτ) = θ_{𝔞𝔠}(τ) θ_𝔠(τ)^{-N𝔞}`; for a unit `c` the right side is `θ_𝔞(τ)`.
pub fn check_galois_action(
    lat: &Lattice,
    alpha: &QuadInt,
    c: &QuadInt,
    tau: &TorsionPoint,
) -> Result<IdentityReport> {
    proper(alpha, "a")?;
    if !tau.primitive {
        return Err(Error::Precondition(format!(
            "{} is not a primitive torsion point",
            tau.point
        )));
    }
    if c.is_zero() {
        return Err(Error::Precondition("c must be non-zero".into()));
    }
    coprime(c, &tau.modulus)?;
    let th = ThetaFunction::new(lat, alpha)?;
    let lhs = th.eval(&tau.point.scale(c))?;
    let rhs = if c.is_unit() {
        th.eval(&tau.point)?
    } else {
        let th_ac = ThetaFunction::new(lat, &(alpha * c))?;
        let th_c = ThetaFunction::new(lat, c)?;
        th_ac
            .eval(&tau.point)?
            .mul(&th_c.eval(&tau.point)?.pow(-th.norm()))
    };
    Ok(IdentityReport::new(
        "galois",
        lat,
        params([
            ("a", alpha.to_string()),
            ("c", c.to_string()),
            ("m", tau.modulus.to_string()),
            ("tau", tau.point.to_string()),
        ]),
        lhs,
        rhs,
    ))
}

/// `θ_𝔟^{N𝔞} / θ_𝔟∘[a] = θ_𝔞^{N𝔟} / θ_𝔞∘[b]` at `z`.
pub fn check_cross_relation(
    lat: &Lattice,
    a: &QuadInt,
    b: &QuadInt,
    z: &LatticePoint,
) -> Result<IdentityReport> {
    proper(a, "a")?;
    proper(b, "b")?;
    coprime(a, b)?;
    let ta = ThetaFunction::new(lat, a)?;
    let tb = ThetaFunction::new(lat, b)?;
    let lhs = tb.eval(z)?.pow(ta.norm()).div(&tb.eval(&z.scale(a))?);
    let rhs = ta.eval(z)?.pow(tb.norm()).div(&ta.eval(&z.scale(b))?);
    Ok(IdentityReport::new(
        "cross",
        lat,
        params([
            ("a", a.to_string()),
            ("b", b.to_string()),
            ("z", z.to_string()),
        ]),
        lhs,
        rhs,
    ))
}

/// Number of roots of unity congruent to 1 modulo the ring's modulus.
pub fn roots_of_unity_mod(ring: &ResidueRing) -> usize {
    let one = QuadInt::one(ring.field());
    ring.field()
        .units()
        .iter()
        .filter(|u| ring.congruent(u, &one))
        .count()
}

/// Representatives of `Gal(K(𝔤)/K(𝔣))` inside `(O_K/𝔤)^×/im(O_K^×)`: residues
/// prime to `𝔤` that are congruent to a unit modulo `𝔣`.
pub fn norm_cosets(f: &QuadInt, g: &QuadInt) -> Result<Vec<QuadInt>> {
    let rf = ResidueRing::new(f)?;
    let rg = ResidueRing::new(g)?;
    if !rg.is_zero(f) && !f.divides(g) {
        return Err(Error::BadCosets(format!("({f}) does not divide ({g})")));
    }
    let units = f.field().units();
    let reps = rg.unit_quotient(|c| units.iter().any(|u| rf.congruent(c, u)));
    let phi = |r: &ResidueRing| r.unit_residues().len();
    let (wf, wg) = (roots_of_unity_mod(&rf), roots_of_unity_mod(&rg));
    let expected = (phi(&rg) * wg) / (phi(&rf) * wf);
    if reps.len() != expected || (phi(&rg) * wg) % (phi(&rf) * wf) != 0 {
        return Err(Error::BadCosets(format!(
            "found {} representatives for ({g}) over ({f}), expected {expected}",
            reps.len()
        )));
    }
    Ok(reps)
}

/// `∏_c θ_𝔞(cτ)^e = θ_𝔞(lτ)^{1-σ_𝔩^{-1}}` (𝔩 ∤ 𝔣) or `θ_𝔞(lτ)` (𝔩 | 𝔣), for `τ`
/// primitive of level `𝔤 = 𝔣𝔩` and `e = w_𝔣/w_𝔤`.
pub fn check_norm_relation(
    lat: &Lattice,
    f: &QuadInt,
    l: &QuadInt,
    alpha: &QuadInt,
    tau: &TorsionPoint,
) -> Result<IdentityReport> {
    proper(f, "f")?;
    proper(l, "l")?;
    proper(alpha, "a")?;
    let g = f * l;
    if !(tau.modulus.divides(&g) && g.divides(&tau.modulus)) || !tau.primitive {
        return Err(Error::Precondition(format!(
            "tau must be a primitive ({g})-torsion point"
        )));
    }
    coprime(alpha, &six_times(&g))?;
    let reps = norm_cosets(f, &g)?;
    let rf = ResidueRing::new(f)?;
    let (wf, wg) = (
        roots_of_unity_mod(&rf),
        roots_of_unity_mod(&ResidueRing::new(&g)?),
    );
    let e = (wf / wg) as i64;
    let th = ThetaFunction::new(lat, alpha)?;
    let pts: Vec<LatticePoint> = reps.iter().map(|c| tau.point.scale(c)).collect();
    let lhs = product(&th, &pts)?.pow(e);
    let lt = tau.point.scale(l);
    let divides = rf.is_zero(l);
    let rhs = if divides {
        th.eval(&lt)?
    } else {
        let one = QuadInt::one(f.field());
        let l_inv = rf
            .unit_residues()
            .into_iter()
            .find(|x| rf.congruent(&(x * l), &one))
            .ok_or_else(|| Error::BadCosets(format!("({l}) is not invertible modulo ({f})")))?;
        th.eval(&lt)?.div(&th.eval(&lt.scale(&l_inv))?)
    };
    Ok(IdentityReport::new(
        if divides {
            "norm_l_div_f"
        } else {
            "norm_l_ndiv_f"
        },
        lat,
        params([
            ("a", alpha.to_string()),
            ("f", f.to_string()),
            ("l", l.to_string()),
            ("e", e.to_string()),
            ("cosets", reps.len().to_string()),
            ("tau", tau.point.to_string()),
        ]),
        lhs,
        rhs,
    ))
}

fn level_modulus(p: u64, n: u32) -> Result<u64> {
    p.checked_pow(n)
        .filter(|m| *m < 1 << 40)
        .ok_or_else(|| Error::Precondition(format!("{p}^{n} too large to enumerate")))
}

/// `∏_{a : p^i a ≡ ā (pⁿ)} θ_𝔞(aω_{1,n} + bω_{2,n}) = θ_𝔞(π̄^{-i}ā ω_{1,n} + π^i b ω_{2,n})`,
/// the right-hand point resolved in `Z/pⁿ` through `i₁`. Any `ā` divisible by
/// `p^i` is accepted; for `i = n` this means `ā = 0`.
pub fn check_lemma32_step(
    lat: &Lattice,
    sp: &SplitPrime,
    n: u32,
    depth: u32,
    alpha: &QuadInt,
    abar: u64,
    b: u64,
) -> Result<IdentityReport> {
    let p = sp.p;
    if depth == 0 || depth > n {
        return Err(Error::Precondition(format!(
            "depth {depth} must lie in 1..={n}"
        )));
    }
    proper(alpha, "a")?;
    coprime(alpha, &QuadInt::from_i64(sp.field(), 6 * p as i64))?;
    let pn = level_modulus(p, n)?;
    let pi_ = p.pow(depth);
    let abar = abar % pn;
    if !abar.is_multiple_of(pi_) {
        return Err(Error::Precondition(format!(
            "abar = {abar} is not divisible by {p}^{depth}"
        )));
    }
    if b.is_multiple_of(p) {
        return Err(Error::Precondition(format!(
            "b = {b} is not a unit mod {p}"
        )));
    }
    let base = abar / pi_;
    let step = pn / pi_;
    let th = ThetaFunction::new(lat, alpha)?;
    let bz = Integer::from(b);
    let pts: Vec<LatticePoint> = (0..pi_)
        .map(|k| basis_combination(sp, n, &Integer::from(base + k * step), &bz))
        .collect();
    let lhs = product(&th, &pts)?;
    let emb = hensel_embed(sp, n)?;
    let pibar_inv = inv_mod(emb.i1(&sp.pi_bar), pn).expect("i1(pi_bar) is a unit");
    let x = mul_mod(pow_mod(pibar_inv, depth as u64, pn), abar, pn);
    let (w1, w2) = basis_points(sp, n);
    let target = w1
        .times(&Integer::from(x))
        .add(&w2.times(&bz).scale(&sp.pi.pow(depth)));
    debug_assert_eq!(target.reduced(), pts[0].scale(&sp.pi.pow(depth)).reduced());
    let rhs = th.eval(&target)?;
    Ok(IdentityReport::new(
        "lemma32_step",
        lat,
        params([
            ("a", alpha.to_string()),
            ("p", p.to_string()),
            ("n", n.to_string()),
            ("depth", depth.to_string()),
            ("abar", abar.to_string()),
            ("b", b.to_string()),
        ]),
        lhs,
        rhs,
    ))
}

/// `∏_{b ∈ (Z/pⁿ)^×} θ_𝔞(aω_{1,n} + bω_{2,n}) = θ_𝔞(aπ̄ⁿω_{1,n}) / θ_𝔞(aπ̄^{n-1}ω_{1,n})`.
pub fn check_lemma33_norm_step(
    lat: &Lattice,
    sp: &SplitPrime,
    n: u32,
    alpha: &QuadInt,
    a: u64,
) -> Result<IdentityReport> {
    let (th, w1, pts) = lemma33_setup(lat, sp, n, alpha, a, |b| b % sp.p != 0)?;
    let lhs = product(&th, &pts)?;
    let top = th.eval(&w1.scale(&sp.pi_bar.pow(n)))?;
    let bottom = th.eval(&w1.scale(&sp.pi_bar.pow(n - 1)))?;
    Ok(IdentityReport::new(
        "lemma33_norm",
        lat,
        params([
            ("a", alpha.to_string()),
            ("p", sp.p.to_string()),
            ("n", n.to_string()),
            ("x", a.to_string()),
        ]),
        lhs,
        top.div(&bottom),
    ))
}

/// `∏_{b ∈ pZ/pⁿ} θ_𝔞(aω_{1,n} + bω_{2,n}) = θ_𝔞(aπ̄^{n-1}ω_{1,n})`.
pub fn check_lemma33_translate(
    lat: &Lattice,
    sp: &SplitPrime,
    n: u32,
    alpha: &QuadInt,
    a: u64,
) -> Result<IdentityReport> {
    let (th, w1, pts) = lemma33_setup(lat, sp, n, alpha, a, |b| b % sp.p == 0)?;
    let lhs = product(&th, &pts)?;
    let rhs = th.eval(&w1.scale(&sp.pi_bar.pow(n - 1)))?;
    Ok(IdentityReport::new(
        "lemma33_translate",
        lat,
        params([
            ("a", alpha.to_string()),
            ("p", sp.p.to_string()),
            ("n", n.to_string()),
            ("x", a.to_string()),
        ]),
        lhs,
        rhs,
    ))
}

type Setup<'l> = (ThetaFunction<'l>, LatticePoint, Vec<LatticePoint>);

fn lemma33_setup<'l>(
    lat: &'l Lattice,
    sp: &SplitPrime,
    n: u32,
    alpha: &QuadInt,
    a: u64,
    keep: impl Fn(u64) -> bool,
) -> Result<Setup<'l>> {
    let p = sp.p;
    if n == 0 {
        return Err(Error::Precondition("level n must be at least 1".into()));
    }
    proper(alpha, "a")?;
    coprime(alpha, &QuadInt::from_i64(sp.field(), 6 * p as i64))?;
    if a.is_multiple_of(p) {
        return Err(Error::Precondition(format!(
            "a = {a} is not a unit mod {p}"
        )));
    }
    let pn = level_modulus(p, n)?;
    let th = ThetaFunction::new(lat, alpha)?;
    let az = Integer::from(a);
    let pts: Vec<LatticePoint> = (0..pn)
        .filter(|&b| keep(b))
        .map(|b| basis_combination(sp, n, &az, &Integer::from(b)))
        .collect();
    let (w1, _) = basis_points(sp, n);
    Ok((th, w1.times(&az), pts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{make_lattice, PrecisionContext};
    use crate::quadfield::{split_in, Field};
    use rug::Rational;

    fn gauss() -> (Lattice, Field) {
        let f = Field::new(1).unwrap();
        (make_lattice(f, PrecisionContext::default()), f)
    }

    fn q(f: Field, a: i64, b: i64) -> QuadInt {
        QuadInt::new(f, a, b)
    }

    fn tau(f: Field) -> LatticePoint {
        LatticePoint::new(
            f,
            Rational::from((123_457, 1 << 20)),
            Rational::from((345_679, 1 << 20)),
        )
    }

    #[test]
    fn distribution_both_ways() {
        let (lat, f) = gauss();
        let r = check_distribution(&lat, &q(f, 3, 2), &q(f, 2, 1), &tau(f)).unwrap();
        assert!(r.pass, "{}", r.summary());
        let r = check_distribution(&lat, &q(f, 2, 1), &q(f, 3, 2), &tau(f)).unwrap();
        assert!(r.pass, "{}", r.summary());
        assert!(matches!(
            check_distribution(&lat, &q(f, 3, 2), &q(f, 0, 1), &tau(f)),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            check_distribution(&lat, &q(f, 2, 1), &q(f, 1, 2), &tau(f)),
            Ok(r) if r.pass
        ));
        assert!(check_distribution(&lat, &q(f, 2, 1), &q(f, 5, 0), &tau(f)).is_err());
    }

    #[test]
    fn distribution_reports_divisor_hits() {
        let (lat, f) = gauss();
        let bad = LatticePoint::quotient(&q(f, 1, 0), &q(f, 3, 2)).unwrap();
        assert!(matches!(
            check_distribution(&lat, &q(f, 3, 2), &q(f, 2, 1), &bad),
            Err(Error::EvaluationAtDivisor(_))
        ));
    }

    #[test]
    fn galois_gaussian() {
        let (lat, f) = gauss();
        let m = q(f, 7, 0);
        let t = TorsionPoint::new(&m, &q(f, 1, 2)).unwrap();
        let r = check_galois_action(&lat, &q(f, 3, 2), &q(f, 2, 1), &t).unwrap();
        assert!(r.pass, "{}", r.summary());
        let r = check_galois_action(&lat, &q(f, 3, 2), &q(f, 0, 1), &t).unwrap();
        assert!(r.pass, "{}", r.summary());
        let non_primitive = TorsionPoint::new(&m, &q(f, 7, 0)).unwrap();
        assert!(check_galois_action(&lat, &q(f, 3, 2), &q(f, 2, 1), &non_primitive).is_err());
    }

    #[test]
    fn galois_composes() {
        let (lat, f) = gauss();
        let m = q(f, 7, 0);
        let t = TorsionPoint::new(&m, &q(f, 1, 0)).unwrap();
        let (a, c1, c2) = (q(f, 3, 2), q(f, 2, 1), q(f, 1, 1));
        let a_ = ThetaFunction::new(&lat, &a).unwrap();
        let one_step = check_galois_action(&lat, &a, &(&c1 * &c2), &t).unwrap();
        assert!(one_step.pass);
        // c2 first, then c1 on the point c2·τ
        let t2 = TorsionPoint::new(&m, &c2).unwrap();
        let second = check_galois_action(&lat, &a, &c1, &t2).unwrap();
        assert!(second.pass);
        let direct = a_.eval(&t.point.scale(&(&c1 * &c2))).unwrap();
        assert!(direct.residual(&second.lhs) < lat.prec().tol());
        assert!(direct.residual(&one_step.lhs) < lat.prec().tol());
    }

    #[test]
    fn cross_relation_gaussian() {
        let (lat, f) = gauss();
        for k in 1..=5 {
            let z = LatticePoint::new(
                f,
                Rational::from((k * 7919, 1 << 16)),
                Rational::from((k * 104_729 % 65_536, 1 << 16)),
            );
            let r = check_cross_relation(&lat, &q(f, 2, 1), &q(f, 3, 2), &z).unwrap();
            assert!(r.pass, "{}", r.summary());
            for u in f.units() {
                let r = check_cross_relation(&lat, &q(f, 2, 1), &q(f, 3, 2), &z.scale(&u)).unwrap();
                assert!(r.pass);
            }
        }
        assert!(check_cross_relation(&lat, &q(f, 2, 1), &q(f, 2, 1), &tau(f)).is_err());
    }

    #[test]
    fn norm_relation_both_branches() {
        let (lat, f) = gauss();
        let (ff, l, a) = (q(f, 2, 1), q(f, 2, -1), q(f, 3, 2));
        let g = &ff * &l;
        let t = TorsionPoint::new(&g, &q(f, 1, 0)).unwrap();
        let r = check_norm_relation(&lat, &ff, &l, &a, &t).unwrap();
        assert!(r.pass, "{}", r.summary());
        assert_eq!(r.parameters["e"], "1");
        let g2 = &ff * &ff;
        let t2 = TorsionPoint::new(&g2, &q(f, 1, 0)).unwrap();
        let r = check_norm_relation(&lat, &ff, &ff, &a, &t2).unwrap();
        assert_eq!(r.identity, "norm_l_div_f");
        assert_eq!(r.parameters["cosets"], "5");
        assert!(r.pass, "{}", r.summary());
    }

    #[test]
    fn coset_counts_with_congruent_units() {
        // modulo (2) only ±1 are congruent to 1 in Z[i]: w_f = 2
        let f = Field::new(1).unwrap();
        let ring = ResidueRing::new(&q(f, 2, 0)).unwrap();
        assert_eq!(roots_of_unity_mod(&ring), 2);
        assert_eq!(
            roots_of_unity_mod(&ResidueRing::new(&q(f, 1, 1)).unwrap()),
            4
        );
        assert_eq!(
            roots_of_unity_mod(&ResidueRing::new(&q(f, 5, 0)).unwrap()),
            1
        );
        let reps = norm_cosets(&q(f, 2, 0), &q(f, 10, 0)).unwrap();
        // (φ(10)·1) / (φ(2)·2) = 32 / 4
        assert_eq!(reps.len(), 8);
    }

    #[test]
    fn lemma32_instances() {
        let (lat, f) = gauss();
        let sp = split_in(f, 5).unwrap();
        let a = q(f, 3, 2);
        for (n, depth, abar, b) in [
            (1, 1, 0, 1),
            (1, 1, 0, 3),
            (2, 1, 5, 1),
            (2, 1, 15, 7),
            (2, 2, 0, 1),
            (3, 2, 25, 2),
        ] {
            let r = check_lemma32_step(&lat, &sp, n, depth, &a, abar, b).unwrap();
            assert!(r.pass, "{}", r.summary());
        }
        assert!(check_lemma32_step(&lat, &sp, 2, 1, &a, 3, 1).is_err());
        assert!(check_lemma32_step(&lat, &sp, 2, 2, &a, 5, 1).is_err());
        assert!(check_lemma32_step(&lat, &sp, 2, 3, &a, 0, 1).is_err());
        assert!(check_lemma32_step(&lat, &sp, 2, 1, &a, 5, 5).is_err());
    }

    #[test]
    fn lemma32_iterates() {
        // the depth-2 product regrouped as p depth-1 products, whose right-hand
        // sides form one more depth-1 product
        let (lat, f) = gauss();
        let sp = split_in(f, 5).unwrap();
        let a = q(f, 3, 2);
        let two = check_lemma32_step(&lat, &sp, 3, 2, &a, 25, 1).unwrap();
        let mut acc = ThetaValue::one(lat.working());
        let mut acc_rhs = ThetaValue::one(lat.working());
        for k in 0..5u64 {
            let r = check_lemma32_step(&lat, &sp, 3, 1, &a, 5 + 25 * k, 1).unwrap();
            assert!(r.pass);
            acc = acc.mul(&r.lhs);
            acc_rhs = acc_rhs.mul(&r.rhs);
        }
        assert!(acc.residual(&two.lhs) < lat.prec().tol());
        let emb = hensel_embed(&sp, 3).unwrap();
        let pb = emb.i1(&sp.pi_bar);
        let abar1 = mul_mod(inv_mod(pb, 125).unwrap(), 25, 125);
        let outer = check_lemma32_step(&lat, &sp, 3, 1, &a, abar1, emb.i2(&sp.pi)).unwrap();
        assert!(outer.lhs.residual(&acc_rhs) < lat.prec().tol());
        assert!(outer.rhs.residual(&two.rhs) < lat.prec().tol());
    }

    #[test]
    fn lemma33_instances() {
        let (lat, f) = gauss();
        let sp = split_in(f, 5).unwrap();
        let a = q(f, 3, 2);
        for (n, x) in [(1, 1), (2, 1), (2, 2), (2, 3)] {
            let r = check_lemma33_norm_step(&lat, &sp, n, &a, x).unwrap();
            assert!(r.pass, "{}", r.summary());
        }
        let r = check_lemma33_translate(&lat, &sp, 2, &a, 1).unwrap();
        assert!(r.pass, "{}", r.summary());
        assert!(check_lemma33_norm_step(&lat, &sp, 2, &a, 5).is_err());
        assert!(check_lemma33_norm_step(&lat, &sp, 2, &q(f, 2, 1), 1).is_err());
    }
}
