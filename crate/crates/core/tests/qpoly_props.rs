use std::collections::BTreeMap;

use proptest::prelude::*;
use qplancherel::qpoly::{Letter, Monomial, QParam, QPoly};
use qplancherel::C64;

/// Leftmost-first word rewriting used as an independent normal-form oracle.
mod oracle {
    use super::*;
    use Letter::*;

    type Word = Vec<Letter>;

    fn rule(a: Letter, b: Letter, q: f64) -> Option<Vec<(f64, Word)>> {
        Some(match (a, b) {
            (Gamma, Alpha) | (GammaStar, Alpha) => vec![(1.0 / q, vec![Alpha, a])],
            (Gamma, AlphaStar) | (GammaStar, AlphaStar) => vec![(q, vec![AlphaStar, a])],
            (GammaStar, Gamma) => vec![(1.0, vec![Gamma, GammaStar])],
            (AlphaStar, Alpha) => vec![(1.0, vec![]), (-1.0, vec![Gamma, GammaStar])],
            (Alpha, AlphaStar) => vec![(1.0, vec![]), (-q * q, vec![Gamma, GammaStar])],
            _ => return None,
        })
    }

    pub fn normal_form(word: &[Letter], q: f64) -> BTreeMap<Monomial, C64> {
        let mut pending: Vec<(C64, Word)> = vec![(C64::new(1.0, 0.0), word.to_vec())];
        let mut out: BTreeMap<Monomial, C64> = BTreeMap::new();
        while let Some((c, w)) = pending.pop() {
            let hit = (0..w.len().saturating_sub(1)).find_map(|i| rule(w[i], w[i + 1], q).map(|r| (i, r)));
            match hit {
                Some((i, replacements)) => {
                    for (f, rep) in replacements {
                        let mut next = w[..i].to_vec();
                        next.extend(rep);
                        next.extend_from_slice(&w[i + 2..]);
                        pending.push((c * f, next));
                    }
                }
                None => {
                    let a = w.iter().filter(|&&l| l == Alpha).count() as i32
                        - w.iter().filter(|&&l| l == AlphaStar).count() as i32;
                    let n = w.iter().filter(|&&l| l == Gamma).count() as u32;
                    let m = w.iter().filter(|&&l| l == GammaStar).count() as u32;
                    *out.entry(Monomial::new(a, n, m)).or_default() += c;
                }
            }
        }
        out.retain(|_, c| *c != C64::new(0.0, 0.0));
        out
    }
}

fn letter() -> impl Strategy<Value = Letter> {
    prop_oneof![
        Just(Letter::Alpha),
        Just(Letter::AlphaStar),
        Just(Letter::Gamma),
        Just(Letter::GammaStar)
    ]
}

fn q_value() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.5), Just(-0.5), 0.2f64..0.9, -0.9f64..-0.2]
}

fn poly(p: QParam) -> impl Strategy<Value = QPoly> {
    prop::collection::vec(
        ((-2i32..=2), (0u32..=2), (0u32..=2), (-1.0f64..1.0), (-1.0f64..1.0)),
        1..4,
    )
    .prop_map(move |terms| {
        terms.into_iter().fold(QPoly::zero(p), |acc, (a, n, m, re, im)| {
            &acc + &QPoly::monomial(p, Monomial::new(a, n, m), C64::new(re, im))
        })
    })
}

fn with_polys(k: usize) -> impl Strategy<Value = (QParam, Vec<QPoly>)> {
    q_value().prop_flat_map(move |q| {
        let p = QParam::new(q).unwrap();
        (Just(p), prop::collection::vec(poly(p), k))
    })
}

fn close(a: &QPoly, b: &QPoly) -> bool {
    let scale = a.max_abs_coeff().max(b.max_abs_coeff()).max(1.0);
    a.distance(b) <= 1e-10 * scale
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn normal_form_agrees_with_leftmost_rewriting(q in q_value(), word in prop::collection::vec(letter(), 0..8)) {
        let p = QParam::new(q).unwrap();
        let engine = QPoly::from_word(p, &word);
        let expected = oracle::normal_form(&word, q);
        let mut oracle_poly = QPoly::zero(p);
        for (m, c) in expected {
            oracle_poly = &oracle_poly + &QPoly::monomial(p, m, c);
        }
        prop_assert!(close(&engine, &oracle_poly), "{word:?}: {engine} vs {oracle_poly}");
    }

    #[test]
    fn multiplication_is_associative((_, v) in with_polys(3)) {
        let left = &(&v[0] * &v[1]) * &v[2];
        let right = &v[0] * &(&v[1] * &v[2]);
        prop_assert!(close(&left, &right));
    }

    #[test]
    fn star_is_an_antimultiplicative_involution((_, v) in with_polys(2)) {
        prop_assert!(close(&(&v[0] * &v[1]).star(), &(&v[1].star() * &v[0].star())));
        prop_assert!(close(&v[0].star().star(), &v[0]));
    }

    #[test]
    fn antipode_is_an_antimultiplicative_involution((_, v) in with_polys(2)) {
        prop_assert!(close(&(&v[0] * &v[1]).antipode_r(), &(&v[1].antipode_r() * &v[0].antipode_r())));
        prop_assert!(close(&v[0].antipode_r().antipode_r(), &v[0]));
    }

    #[test]
    fn haar_state_is_positive((_, v) in with_polys(1)) {
        let h = v[0].gns_inner(&v[0]).unwrap();
        prop_assert!(h.re >= -1e-12 && h.im.abs() <= 1e-12, "{h}");
    }

    #[test]
    fn modular_and_scaling_groups_are_automorphisms((_, v) in with_polys(2), t in -2.0f64..2.0) {
        let z = C64::new(t, 0.0);
        prop_assert!(close(&(&v[0] * &v[1]).sigma_h(z), &(&v[0].sigma_h(z) * &v[1].sigma_h(z))));
        prop_assert!(close(&(&v[0] * &v[1]).tau(t), &(&v[0].tau(t) * &v[1].tau(t))));
    }

    #[test]
    fn kms_condition_holds((_, v) in with_polys(2)) {
        let lhs = v[0].haar_product(&v[1]).unwrap();
        let rhs = v[1].haar_product(&v[0].sigma_h(C64::new(0.0, -1.0))).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10, "{lhs} vs {rhs}");
    }

    #[test]
    fn parse_round_trips_display((_, v) in with_polys(1)) {
        let text = v[0].to_string();
        let back = qplancherel::qpoly::parse(&text, v[0].param()).unwrap();
        prop_assert!(close(&back, &v[0]), "{text}");
    }
}
