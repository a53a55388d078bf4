//! Highest weight, locality, restrictedness and the closed-form oracle.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::action::series::{e_interval, f_interval, h_interval, locality_radius};
use crate::action::{apply_word, ActionError, Engine, Exact, GenSymbol, LinComb, OperatorWord};
use crate::patterns::{enumerate_basis, CPattern, Signature, WeightValue};
use crate::qarith::CycloScalar;

use super::{timed, CheckConfig, CheckResult, Engines, Status};

/// Indices probed for annihilation statements.
const FAR: i64 = 8;

fn result(id: &str, params: Vec<(&str, String)>, failure: Result<Option<String>, ActionError>) -> CheckResult {
    match failure {
        Ok(None) => CheckResult::new(id, &params, Status::Pass),
        Ok(Some(w)) => CheckResult::new(id, &params, Status::Fail).with_witness(w),
        Err(e) => CheckResult::new(id, &params, Status::Error).with_witness(e.to_string()),
    }
}

/// Seeded stream per (suite, signature).
fn rng_for(cfg: &CheckConfig, tag: &str, name: &str) -> ChaCha8Rng {
    let mut h: u64 = cfg.seed ^ 0x9e37_79b9_7f4a_7c15;
    for b in tag.bytes().chain(name.bytes()) {
        h = (h ^ b as u64).wrapping_mul(0x100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(h)
}

/// `h_i` on the highest weight pattern, straight from the signature:
/// `M_i - xi0` for `i <= 0`, `M_i - xi1` for `i >= 1`.
fn hw_weight_oracle(sig: &Signature, i: i64) -> WeightValue {
    let xi = if i <= 0 { sig.xi0() } else { sig.xi1() };
    &sig.m_weight(i) - &xi
}

pub fn check_hw(cfg: &CheckConfig, engines: &Engines) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let far = FAR.max(cfg.window);
    let mut profiles: Vec<(String, Vec<WeightValue>)> = Vec::new();
    for (name, eng) in engines.iter() {
        let sig = eng.sig();
        let hw = CPattern::highest_weight(sig);
        out.push(timed(cfg, || {
            let mut fail = None;
            for i in -far..=far {
                match eng.apply_e(i, &hw) {
                    Ok(v) if v.is_zero_exact() => {}
                    Ok(v) => {
                        fail = Some(format!("e_{i} hw = {v}"));
                        break;
                    }
                    Err(e) => {
                        fail = Some(e.to_string());
                        break;
                    }
                }
            }
            result("hw.annihilated", vec![("sig", name.to_string())], Ok(fail))
        }));
        out.push(timed(cfg, || {
            let fail = (-far..=far).find_map(|i| {
                let got = eng.apply_h(i, &hw);
                let want = hw_weight_oracle(sig, i);
                (got != want).then(|| format!("h_{i}: {got} != {want}"))
            });
            let c = eng.apply_c(&hw);
            let want_c = &sig.xi0() - &sig.xi1();
            let fail = fail.or_else(|| (c != want_c).then(|| format!("c: {c} != {want_c}")));
            result("hw.weights", vec![("sig", name.to_string())], Ok(fail))
        }));
        let mut prof: Vec<WeightValue> = (-far..=far).map(|i| eng.apply_h(i, &hw)).collect();
        prof.push(eng.apply_c(&hw));
        profiles.push((name.to_string(), prof));
    }
    let mut clashes = Vec::new();
    for a in 0..profiles.len() {
        for b in 0..a {
            if profiles[a].1 == profiles[b].1 {
                clashes.push(format!("{}={}", profiles[b].0, profiles[a].0));
            }
        }
    }
    let mut info = CheckResult::new("hw.distinct-weights", &[], Status::Info);
    info.witness = Some(if clashes.is_empty() {
        "all highest weights distinct".into()
    } else {
        format!("equal highest weights: {}", clashes.join(", "))
    });
    out.push(info);
    out
}

/// First basis vector on which `gen` does not vanish.
fn nonvanishing(eng: &Engine, basis: &[CPattern], gen: &GenSymbol) -> Result<Option<String>, ActionError> {
    for p in basis {
        let nonzero = match gen {
            GenSymbol::E(k) => !eng.apply_e(*k, p)?.is_zero_exact(),
            GenSymbol::F(k) => !eng.apply_f(*k, p)?.is_zero_exact(),
            GenSymbol::H(k) => !eng.apply_h(*k, p).is_zero(),
            _ => false,
        };
        if nonzero {
            return Ok(Some(format!("{gen} does not vanish on {p}")));
        }
    }
    Ok(None)
}

pub fn check_locality(cfg: &CheckConfig, engines: &Engines) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let far = FAR.max(cfg.window);
    for (name, eng) in engines.iter() {
        let sig = eng.sig();
        for n in 1..=cfg.depth {
            let basis = enumerate_basis(sig, n);
            let (ei, fi, hi) = (e_interval(n), f_interval(n, sig), h_interval(n, sig));
            let r = locality_radius(n, sig);
            let families: [(&str, Box<dyn Fn(i64) -> bool>, fn(i64) -> GenSymbol); 3] = [
                ("locality.e", Box::new(move |k| !ei.contains(k)), GenSymbol::E),
                ("locality.f", Box::new(move |k| !fi.contains(k)), GenSymbol::F),
                ("locality.h", Box::new(move |k| !hi.contains(k)), GenSymbol::H),
            ];
            let finite_sig = sig.auto_xi();
            for (id, outside, mk) in families.iter() {
                if *id != "locality.e" && !finite_sig {
                    continue;
                }
                out.push(timed(cfg, || {
                    let mut fail = Ok(None);
                    for k in (-far..=far).filter(|&k| outside(k)) {
                        fail = nonvanishing(eng, &basis, &mk(k));
                        if !matches!(fail, Ok(None)) {
                            break;
                        }
                    }
                    result(id, vec![("sig", name.to_string()), ("N", n.to_string())], fail)
                }));
            }
            if finite_sig {
                out.push(timed(cfg, || {
                    let mut fail = Ok(None);
                    'outer: for k in (-far..=far).filter(|k| k.abs() >= r) {
                        for gen in [GenSymbol::E(k), GenSymbol::F(k), GenSymbol::H(k)] {
                            fail = nonvanishing(eng, &basis, &gen);
                            if !matches!(fail, Ok(None)) {
                                break 'outer;
                            }
                        }
                    }
                    result(
                        "locality.radius",
                        vec![("sig", name.to_string()), ("N", n.to_string()), ("r", r.to_string())],
                        fail,
                    )
                }));
            }
        }
        out.push(timed(cfg, || check_e_monomials(cfg, name, eng)));
    }
    out
}

/// Random e-words: support inside `I_N` keeps `V_N` invariant, support
/// leaving `I_N` annihilates it.
fn check_e_monomials(cfg: &CheckConfig, name: &str, eng: &Engine) -> CheckResult {
    let sig = eng.sig();
    let n = cfg.depth;
    let basis = enumerate_basis(sig, n);
    let interval = e_interval(n);
    let inside: Vec<i64> = (-FAR..=FAR).filter(|&k| interval.contains(k)).collect();
    let outside: Vec<i64> = (-(cfg.window + 2)..=cfg.window + 2)
        .filter(|&k| !interval.contains(k))
        .collect();
    let mut rng = rng_for(cfg, "prop6", name);
    let params = vec![("sig", name.to_string()), ("N", n.to_string()), ("trials", cfg.trials.to_string())];
    for _ in 0..cfg.trials {
        let len = rng.gen_range(1..=4);
        let leave = inside.is_empty() || rng.gen_bool(0.5);
        let mut word: Vec<i64> = (0..len)
            .map(|_| {
                if inside.is_empty() {
                    *outside.choose(&mut rng).unwrap()
                } else {
                    *inside.choose(&mut rng).unwrap()
                }
            })
            .collect();
        if leave {
            let pos = rng.gen_range(0..len);
            word[pos] = *outside.choose(&mut rng).unwrap();
        }
        let w = OperatorWord::product(word.iter().map(|&k| GenSymbol::E(k)).collect());
        for p in &basis {
            let img = match apply_word(eng, &Exact, &w, &LinComb::basis(p.clone())) {
                Ok(v) => v,
                Err(e) => return result("locality.e-monomials", params, Err(e)),
            };
            let bad = if leave {
                img.first_nonzero().map(|(t, _)| format!("word e{word:?} leaves I_N but maps {p} to {t}"))
            } else {
                img.terms()
                    .find(|(t, c)| !t.in_window(sig, n) && !c.is_zero())
                    .map(|(t, _)| format!("word e{word:?} maps {p} outside V_N to {t}"))
            };
            if let Some(b) = bad {
                return result("locality.e-monomials", params, Ok(Some(b)));
            }
        }
    }
    result("locality.e-monomials", params, Ok(None))
}

/// A random exact vector in `V_N`.
fn random_vector(rng: &mut ChaCha8Rng, basis: &[CPattern]) -> LinComb<CycloScalar> {
    let mut v = LinComb::zero();
    let k = rng.gen_range(1..=basis.len().min(4));
    for p in basis.choose_multiple(rng, k) {
        let c = *[-3i64, -2, -1, 1, 2, 3].choose(rng).unwrap();
        v.add_term(p.clone(), CycloScalar::from_int(c));
    }
    v
}

/// Apply a word of one generator family; `None` when the image vanishes.
fn image(eng: &Engine, word: &[GenSymbol], v: &LinComb<CycloScalar>) -> Result<Option<String>, ActionError> {
    let img = apply_word(eng, &Exact, &OperatorWord::product(word.to_vec()), v)?;
    Ok(img.first_nonzero().map(|(p, _)| format!("{word:?} reaches {p}")))
}

/// The three tail-annihilation properties at radius `r`.
fn restricted_at(
    eng: &Engine,
    rng: &mut ChaCha8Rng,
    v: &LinComb<CycloScalar>,
    r: i64,
) -> Result<Option<String>, ActionError> {
    // e-words with an index outside (-r, r)
    for _ in 0..3 {
        let len = rng.gen_range(1..=3);
        let mut word: Vec<i64> = (0..len).map(|_| rng.gen_range(-(r + 2)..=r + 2)).collect();
        if word.iter().all(|k| k.abs() < r) {
            let pos = rng.gen_range(0..len);
            word[pos] = if rng.gen_bool(0.5) { r + rng.gen_range(0..3) } else { -r - rng.gen_range(0..3) };
        }
        let syms: Vec<GenSymbol> = word.into_iter().map(GenSymbol::E).collect();
        if let Some(w) = image(eng, &syms, v)? {
            return Ok(Some(format!("e-word: {w}")));
        }
    }
    // f-words inside one tail
    for _ in 0..3 {
        let len = rng.gen_range(1..=3);
        let upper = rng.gen_bool(0.5);
        let syms: Vec<GenSymbol> = (0..len)
            .map(|_| {
                let k = r + rng.gen_range(0..=3);
                GenSymbol::F(if upper { k } else { -k })
            })
            .collect();
        if let Some(w) = image(eng, &syms, v)? {
            return Ok(Some(format!("f-word: {w}")));
        }
    }
    // h_i for |i| >= r
    for i in (r..=r + 3).flat_map(|i| [i, -i]) {
        for (p, _) in v.terms() {
            let h = eng.apply_h(i, p);
            if !h.is_zero() {
                return Ok(Some(format!("h_{i} = {h} on {p}")));
            }
        }
    }
    Ok(None)
}

pub fn check_restricted(cfg: &CheckConfig, engines: &Engines) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for (name, eng) in engines.iter() {
        let sig = eng.sig();
        if !sig.auto_xi() {
            out.push(
                CheckResult::new("restricted", &[("sig", name.to_string())], Status::Info)
                    .with_witness("skipped: restrictedness is stated for automatic xi"),
            );
            continue;
        }
        let mut rng = rng_for(cfg, "restricted", name);
        let params = vec![("sig", name.to_string()), ("trials", cfg.trials.to_string())];
        out.push(timed(cfg, || {
            let mut probe = rng.clone();
            let mut sharp = None;
            for t in 0..cfg.trials {
                let n = rng.gen_range(1..=cfg.depth);
                let basis = enumerate_basis(sig, n);
                let v = random_vector(&mut rng, &basis);
                let r = locality_radius(n, sig);
                match restricted_at(eng, &mut rng, &v, r) {
                    Ok(None) => {}
                    Ok(Some(w)) => return result("restricted", params, Ok(Some(format!("trial {t}, N = {n}: {w}")))),
                    Err(e) => return result("restricted", params, Err(e)),
                }
                if sharp.is_none() {
                    if let Ok(Some(w)) = restricted_at(eng, &mut probe, &v, r - 1) {
                        sharp = Some(format!("N = {n}, r - 1 = {}: {w}", r - 1));
                    }
                }
            }
            let mut res = result("restricted", params.clone(), Ok(None));
            if let Some(s) = sharp {
                res.witness = Some(format!("radius r - 1 already fails ({s})"));
            }
            res
        }));
    }
    out
}

/// `f_k = -|[M_{k+1} - M_k]|^{1/2}` on `V_N` for `k >= N/2`, against the general formula.
pub fn check_closed_form(cfg: &CheckConfig, engines: &Engines) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let kmax = 6i64.max(cfg.window);
    for (name, eng) in engines.iter() {
        for n in 1..=cfg.depth {
            let basis = enumerate_basis(eng.sig(), n);
            let kmin = ((n as i64 + 1) / 2).max(1);
            out.push(timed(cfg, || {
                let mut fail = Ok(None);
                'outer: for k in kmin..=kmax {
                    for p in &basis {
                        let diff = eng
                            .apply_f(k, p)
                            .and_then(|a| eng.f_closed_form(k, p).map(|b| a.sub(&b)));
                        match diff {
                            Ok(d) if d.is_zero_exact() => {}
                            Ok(d) => {
                                fail = Ok(Some(format!("f_{k} on {p}: general - closed = {d}")));
                                break 'outer;
                            }
                            Err(e) => {
                                fail = Err(e);
                                break 'outer;
                            }
                        }
                    }
                }
                result(
                    "closedform.f",
                    vec![("sig", name.to_string()), ("N", n.to_string()), ("k", format!("{kmin}..{kmax}"))],
                    fail,
                )
            }));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::Orientation;

    fn run(f: fn(&CheckConfig, &Engines) -> Vec<CheckResult>, depth: usize) -> Vec<CheckResult> {
        let cfg = CheckConfig {
            depth,
            window: 3,
            trials: 6,
            ..CheckConfig::default()
        };
        let eng = Engines::new(&cfg, Orientation::RESOLVED);
        f(&cfg, &eng)
    }

    fn assert_ok(res: &[CheckResult]) {
        let bad: Vec<_> = res
            .iter()
            .filter(|r| !matches!(r.status, Status::Pass | Status::Info))
            .collect();
        assert!(bad.is_empty(), "{bad:?}");
    }

    #[test]
    fn hw_suite() {
        assert_ok(&run(check_hw, 3));
    }

    #[test]
    fn locality_suite() {
        assert_ok(&run(check_locality, 3));
    }

    #[test]
    fn restricted_suite() {
        assert_ok(&run(check_restricted, 3));
    }

    #[test]
    fn closed_form_suite() {
        assert_ok(&run(check_closed_form, 3));
    }

    #[test]
    fn oracle_matches_ls_values() {
        let ls = Signature::levendorskii_soibelman(0);
        assert_eq!(hw_weight_oracle(&ls, 0), WeightValue::int(-1));
        assert_eq!(hw_weight_oracle(&ls, -3), WeightValue::int(0));
    }
}
