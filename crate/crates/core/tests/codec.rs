mod common;

use common::*;
use compute_forward::codec::*;
use compute_forward::field::{FieldMatrix, PrimeField};
use compute_forward::{ChannelVector, CoefficientVector, GaussInt};
use num_complex::Complex64;
use rand::Rng;

fn code(p: u64, k: &[usize], n: usize, seed: u64, s: f64) -> NestedLatticeCode {
    NestedLatticeCode::build(p, k, n, seed, snr(s)).unwrap()
}

/// Circular distance on `[-gamma/2, gamma/2)`, so points on either side of the cut compare equal.
fn wrap_dist(x: f64, y: f64, gamma: f64) -> f64 {
    let d = (x - y).rem_euclid(gamma);
    d.min(gamma - d)
}

fn assert_mod_eq(x: &[f64], y: &[f64], gamma: f64) {
    for (a, b) in x.iter().zip(y) {
        assert!(wrap_dist(*a, *b, gamma) <= 1e-9 * gamma, "{a} vs {b}");
    }
}

fn add_points(code: &NestedLatticeCode, terms: &[(i64, Vec<f64>)]) -> Vec<f64> {
    let mut sum = vec![0.0; code.n()];
    for (a, t) in terms {
        for (s, x) in sum.iter_mut().zip(t) {
            *s += *a as f64 * x;
        }
    }
    code.mod_coarse(&sum)
}

#[test]
fn smallest_code() {
    let f = PrimeField::new(2).unwrap();
    let g = FieldMatrix::from_rows(f, &[vec![1]]).unwrap();
    let code = NestedLatticeCode::from_generator(g, &[1], snr(3.0)).unwrap();
    let gamma = code.gamma();
    assert!((gamma - 18f64.sqrt()).abs() < 1e-12);
    let pts: Vec<f64> = code.messages(0).unwrap().iter().map(|w| code.encode_phi(0, w).unwrap()[0]).collect();
    assert_eq!(pts, vec![0.0, -gamma / 2.0]);
    // The fine lattice is gamma/2 Z.
    let q = code.quantize_fine(0, &[0.3 * gamma]).unwrap();
    assert_eq!(q.v, vec![-gamma / 2.0]);
    assert_eq!(code.quantize_fine(0, &[0.2 * gamma]).unwrap().v, vec![0.0]);
}

#[test]
fn codebooks_are_nested() {
    let cd = code(5, &[1, 2], 3, 1, 10.0);
    let small = cd.messages(0).unwrap();
    let large = cd.messages(1).unwrap();
    assert_eq!((small.len(), large.len()), (5, 25));
    let large_words: Vec<Vec<u64>> = large.iter().map(|w| cd.codeword(1, w).unwrap()).collect();
    for w in &small {
        assert!(large_words.contains(&cd.codeword(0, w).unwrap()));
        // The level-0 point decodes at level 1 to the zero-padded message.
        let v = cd.encode_phi(0, w).unwrap();
        assert_eq!(cd.decode_phi_inv(1, &v).unwrap(), vec![w[0], 0]);
    }
    for (l, k) in [(0, 1.0), (1, 2.0)] {
        assert!((cd.rate(l) - k / 3.0 * 5f64.log2()).abs() < 1e-12);
    }
}

#[test]
fn phi_is_injective_on_a_scaled_grid() {
    for p in [2u64, 3, 5] {
        for n in 1..=4 {
            for k in 1..=2.min(n) {
                let cd = code(p, &[k], n, p * 10 + n as u64, 4.0);
                let step = cd.gamma() / p as f64;
                let mut pts = Vec::new();
                for w in cd.messages(0).unwrap() {
                    let v = cd.encode_phi(0, &w).unwrap();
                    assert_eq!(cd.mod_coarse(&v), v);
                    for x in &v {
                        assert!(*x >= -cd.gamma() / 2.0 && *x < cd.gamma() / 2.0);
                        assert!(((x / step) - (x / step).round()).abs() < 1e-9);
                    }
                    assert_eq!(cd.decode_phi_inv(0, &v).unwrap(), w);
                    pts.push(v);
                }
                let zero = vec![0; k];
                assert_eq!(cd.encode_phi(0, &zero).unwrap(), vec![0.0; n]);
                for i in 0..pts.len() {
                    for j in 0..i {
                        assert_ne!(pts[i], pts[j], "p={p} n={n} k={k}");
                    }
                }
                assert_eq!(pts.len() as u64, p.pow(k as u32));
            }
        }
    }
}

#[test]
fn phi_inverse_of_integer_combinations() {
    // Every message tuple and every real coefficient pair with |a| <= p.
    let cd = code(3, &[1, 1], 2, 4, 2.0);
    let f = cd.field();
    for a0 in -3i64..=3 {
        for a1 in -3i64..=3 {
            for w0 in cd.messages(0).unwrap() {
                for w1 in cd.messages(1).unwrap() {
                    let v = add_points(&cd, &[(a0, cd.encode_phi(0, &w0).unwrap()), (a1, cd.encode_phi(1, &w1).unwrap())]);
                    let want = f.add(f.mul(f.g_inv(a0), w0[0]), f.mul(f.g_inv(a1), w1[0]));
                    assert_eq!(cd.decode_phi_inv(1, &v).unwrap(), vec![want]);
                }
            }
        }
    }
    let cd = code(5, &[1, 1], 2, 5, 2.0);
    let f = cd.field();
    let mut seen = 0;
    for w0 in cd.messages(0).unwrap() {
        for w1 in cd.messages(1).unwrap() {
            let v = add_points(&cd, &[(1, cd.encode_phi(0, &w0).unwrap()), (2, cd.encode_phi(1, &w1).unwrap())]);
            assert_eq!(cd.decode_phi_inv(1, &v).unwrap(), vec![f.add(w0[0], f.mul(2, w1[0]))]);
            seen += 1;
        }
    }
    assert_eq!(seen, 25);
    assert_eq!(cd.decode_phi_inv(0, &[0.0, 0.0]).unwrap(), vec![0]);
}

#[test]
fn phi_inverse_rejects_off_lattice_points() {
    let cd = code(5, &[1, 2], 3, 6, 10.0);
    let step = cd.gamma() / 5.0;
    assert!(matches!(cd.decode_phi_inv(0, &[0.3 * step, 0.0, 0.0]), Err(compute_forward::Error::Corruption(_))));
    // A level-1 point that is not a level-0 codeword.
    let w = cd.messages(1).unwrap().into_iter().find(|w| w[1] != 0).unwrap();
    let v = cd.encode_phi(1, &w).unwrap();
    assert!(matches!(cd.decode_phi_inv(0, &v), Err(compute_forward::Error::Corruption(_))));
}

#[test]
fn modulus_identities() {
    let mut rng = rng(91);
    let cd = code(5, &[1], 3, 7, 10.0);
    let gamma = cd.gamma();
    let vec3 = |rng: &mut rand_chacha::ChaCha8Rng, r: f64| -> Vec<f64> { (0..3).map(|_| rng.random_range(-r..r)).collect() };
    for _ in 0..1000 {
        let x = vec3(&mut rng, 5.0 * gamma);
        let y = vec3(&mut rng, 5.0 * gamma);
        let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let inner: Vec<f64> = cd.mod_coarse(&x).iter().zip(&y).map(|(a, b)| a + b).collect();
        assert_mod_eq(&cd.mod_coarse(&sum), &cd.mod_coarse(&inner), gamma);

        assert_mod_eq(&cd.quantize_fine(0, &x).unwrap().v, &cd.quantize_fine(0, &cd.mod_coarse(&x)).unwrap().v, gamma);

        let a = rng.random_range(-6i64..=6) as f64;
        let ax: Vec<f64> = x.iter().map(|v| a * v).collect();
        let amx: Vec<f64> = cd.mod_coarse(&x).iter().map(|v| a * v).collect();
        assert_mod_eq(&cd.mod_coarse(&ax), &cd.mod_coarse(&amx), gamma);

        let beta: f64 = rng.random_range(0.1..4.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let lhs: Vec<f64> = cd.mod_coarse(&x).iter().map(|v| beta * v).collect();
        let bx: Vec<f64> = x.iter().map(|v| beta * v).collect();
        assert_mod_eq(&lhs, &mod_lattice(&bx, beta.abs() * gamma), beta.abs() * gamma);
    }
    assert_eq!(cd.mod_coarse(&[0.0; 3]), vec![0.0; 3]);
    assert_eq!(cd.mod_coarse(&[gamma, -2.0 * gamma, 7.0 * gamma]), vec![0.0; 3]);
}

#[test]
fn quantizer_against_neighbourhood_search() {
    let mut rng = rng(17);
    let cd = code(3, &[2], 3, 8, 5.0);
    let gamma = cd.gamma();
    let step = gamma / 3.0;
    let words: Vec<Vec<u64>> = cd.messages(0).unwrap().iter().map(|w| cd.codeword(0, w).unwrap()).collect();
    for _ in 0..100 {
        let x: Vec<f64> = (0..3).map(|_| rng.random_range(-gamma..gamma)).collect();
        let mut best = (f64::INFINITY, vec![]);
        for cw in &words {
            // Lattice points gamma (cw/p + z) with z in a 3-wide window per coordinate.
            let base: Vec<f64> = cw.iter().map(|&v| step * v as f64).collect();
            let centers: Vec<i64> = x.iter().zip(&base).map(|(xi, b)| ((xi - b) / gamma).floor() as i64).collect();
            for d in 0..27 {
                let offs = [d % 3, (d / 3) % 3, d / 9];
                let pt: Vec<f64> = (0..3).map(|i| base[i] + gamma * (centers[i] - 1 + offs[i] as i64) as f64).collect();
                let dist: f64 = pt.iter().zip(&x).map(|(a, b)| (a - b).powi(2)).sum();
                if dist < best.0 {
                    best = (dist, pt);
                }
            }
        }
        let got = cd.quantize_fine(0, &x).unwrap();
        assert_mod_eq(&got.v, &cd.mod_coarse(&best.1), gamma);
        assert_eq!(got.level, 0);
    }
}

#[test]
fn quantizer_fixes_lattice_points() {
    let mut rng = rng(5);
    let cd = code(5, &[1, 2], 3, 9, 20.0);
    let tiny = cd.gamma() / (4.0 * 5.0);
    for w in cd.messages(1).unwrap() {
        let v = cd.encode_phi(1, &w).unwrap();
        assert_eq!(cd.quantize_fine(1, &v).unwrap().v, v);
        let jitter: Vec<f64> = v.iter().map(|x| x + rng.random_range(-0.5..0.5) * tiny / 3f64.sqrt()).collect();
        assert_eq!(cd.quantize_fine(1, &jitter).unwrap().v, v);
    }
}

fn message_tuples(p: u64) -> Vec<Vec<Message>> {
    // Two transmitters, k = 1: every (real, imag) pair for each.
    let singles: Vec<Message> = (0..p).flat_map(|r| (0..p).map(move |i| Message { real: vec![r], imag: vec![i] })).collect();
    singles.iter().flat_map(|m0| singles.iter().map(move |m1| vec![m0.clone(), m1.clone()])).collect()
}

#[test]
fn noiseless_decoding_is_exact() {
    let cd = code(5, &[1, 1], 2, 10, 100.0);
    let cases = [
        (ChannelVector::from_real(&[2.0, -1.0]).unwrap(), real_coeffs(&[2, -1])),
        (ChannelVector::new(vec![c(1.0, 1.0), c(0.0, -2.0)]).unwrap(), coeffs(&[(1, 1), (0, -2)])),
    ];
    for (idx, (h, a)) in cases.iter().enumerate() {
        for (t, msgs) in message_tuples(5).into_iter().enumerate() {
            let d = if t % 2 == 0 { Dithers::zero(&cd) } else { Dithers::draw(&cd, 77, (idx * 1000 + t) as u64) };
            let x = transmit(&cd, &d, &msgs).unwrap();
            let y: Vec<Complex64> = (0..cd.n()).map(|i| h.entries()[0] * x[0][i] + h.entries()[1] * x[1][i]).collect();
            let got = relay_decode(&cd, &d, &y, h, a, c(1.0, 0.0)).unwrap();
            assert_eq!(got, expected_equations(&cd, a, &msgs).unwrap());
        }
    }
}

#[test]
fn zero_messages_give_zero_inputs_and_equations() {
    let cd = code(5, &[1, 2], 3, 11, 10.0);
    let zeros = vec![Message { real: vec![0], imag: vec![0] }, Message { real: vec![0, 0], imag: vec![0, 0] }];
    let d = Dithers::zero(&cd);
    let x = transmit(&cd, &d, &zeros).unwrap();
    assert!(x.iter().flatten().all(|v| *v == c(0.0, 0.0)));
    let h = ChannelVector::from_real(&[1.0, 1.0]).unwrap();
    let y = vec![c(0.0, 0.0); 3];
    let got = relay_decode(&cd, &d, &y, &h, &real_coeffs(&[1, 1]), c(1.0, 0.0)).unwrap();
    assert_eq!(got, (vec![0, 0], vec![0, 0]));
}

#[test]
fn channel_inputs_meet_the_power_constraint() {
    let s = 10.0;
    let cd = code(5, &[1], 4, 12, s);
    let msg = vec![Message { real: vec![3], imag: vec![1] }];
    let draws = 10_000;
    let powers: Vec<f64> = (0..draws)
        .map(|t| {
            let x = transmit(&cd, &Dithers::draw(&cd, 5, t), &msg).unwrap();
            x[0].iter().map(|v| v.norm_sqr()).sum::<f64>() / cd.n() as f64
        })
        .collect();
    let mean = powers.iter().sum::<f64>() / draws as f64;
    let var = powers.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (draws - 1) as f64;
    let sigma = (var / draws as f64).sqrt();
    assert!((mean - s).abs() < 3.0 * sigma, "mean {mean}, sigma {sigma}");
}

#[test]
fn channel_inputs_are_uniform_over_the_cell() {
    let cd = code(3, &[1], 2, 13, 4.0);
    let gamma = cd.gamma();
    let msg = vec![Message { real: vec![2], imag: vec![1] }];
    let n = 10_000;
    let mut samples: Vec<f64> = (0..n)
        .map(|t| transmit(&cd, &Dithers::draw(&cd, 6, t as u64), &msg).unwrap()[0][0].re)
        .collect();
    samples.sort_by(f64::total_cmp);
    let ks = samples
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let cdf = (x + gamma / 2.0) / gamma;
            (cdf - i as f64 / n as f64).abs().max(((i + 1) as f64 / n as f64 - cdf).abs())
        })
        .fold(0.0, f64::max);
    // 1% critical value of the one-sample KS statistic.
    assert!(ks < 1.63 / (n as f64).sqrt(), "KS statistic {ks}");
}

#[test]
fn simulated_noiseless_error_is_zero() {
    let cd = code(5, &[1, 1], 2, 14, 10.0);
    let h = ChannelVector::new(vec![c(3.0, 0.0), c(-1.0, 2.0)]).unwrap();
    let a = coeffs(&[(3, 0), (-1, 2)]);
    let opts = SimOptions { noiseless: true, alpha: None };
    let out = simulate_equation_error(&cd, &h, &a, snr(10.0), 500, 1, opts).unwrap();
    assert_eq!(out.errors, 0);
    assert_eq!(out.error_rate, 0.0);
    assert!(simulate_equation_error(&cd, &h, &a, snr(10.0), 0, 1, opts).is_err());
}

#[test]
fn simulation_is_deterministic() {
    let cd = code(5, &[1, 1], 2, 15, 10.0);
    let h = ChannelVector::new(vec![c(1.0, 0.0), c(0.95, 0.05)]).unwrap();
    let a = real_coeffs(&[1, 1]);
    let run = || simulate_equation_error(&cd, &h, &a, snr_db(12.0), 2000, 9, SimOptions::default()).unwrap();
    assert_eq!(run(), run());
}

#[test]
fn zero_scaling_decodes_at_chance() {
    // Both equation components are uniform and independent of the decoder
    // output, so a correct pair has probability p^(-2k).
    let cd = code(3, &[1, 1], 2, 16, 10.0);
    let h = ChannelVector::from_real(&[1.0, 1.0]).unwrap();
    let a = real_coeffs(&[1, 1]);
    let trials = 20_000;
    let opts = SimOptions { noiseless: false, alpha: Some(c(0.0, 0.0)) };
    let out = simulate_equation_error(&cd, &h, &a, snr(10.0), trials, 2, opts).unwrap();
    let want = 1.0 - 1.0 / 9.0;
    let sigma = (want * (1.0 - want) / trials as f64).sqrt();
    assert!((out.error_rate - want).abs() < 4.0 * sigma, "{}", out.error_rate);
}

#[test]
fn single_user_below_capacity() {
    // 19-ary symbols per real dimension carry 8.5 bits per complex use, one
    // bit under log2(1 + 1000). Threshold from a pilot run (0.007) with margin.
    let cd = code(19, &[1], 1, 17, 1000.0);
    let h = ChannelVector::from_real(&[1.0]).unwrap();
    let out = simulate_equation_error(&cd, &h, &real_coeffs(&[1]), snr_db(30.0), 10_000, 3, SimOptions::default()).unwrap();
    assert!(out.error_rate < 0.02, "{}", out.error_rate);
}

#[test]
fn code_json_round_trip() {
    let cd = code(7, &[1, 2], 3, 21, 10.0);
    let text = cd.to_json();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in ["p", "n", "k_list", "gamma", "seed", "G"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(NestedLatticeCode::from_json(&text).unwrap(), cd);
    assert!(NestedLatticeCode::from_json(r#"{"p":4,"n":1,"k_list":[1],"gamma":1.0,"seed":0,"G":[[1]]}"#).is_err());
}

#[test]
fn generator_levels_have_full_rank() {
    for seed in 0..20 {
        let cd = code(2, &[1, 2, 3], 3, seed, 1.0);
        for (l, &k) in cd.k_list().iter().enumerate() {
            assert_eq!(cd.messages(l).unwrap().len(), 1 << k);
        }
        assert_eq!(cd.generator().rank(), 3);
    }
}

#[test]
fn wrong_inputs_are_rejected() {
    let cd = code(5, &[1, 2], 3, 22, 10.0);
    assert!(cd.encode_phi(0, &[5]).is_err());
    assert!(cd.encode_phi(0, &[1, 1]).is_err());
    assert!(cd.encode_phi(2, &[1]).is_err());
    assert!(cd.quantize_fine(0, &[0.0]).is_err());
    let h = ChannelVector::from_real(&[1.0, 1.0]).unwrap();
    let zero = CoefficientVector::new(vec![GaussInt::ZERO; 2]);
    let d = Dithers::zero(&cd);
    assert!(relay_decode(&cd, &d, &[c(0.0, 0.0); 3], &h, &zero, c(1.0, 0.0)).is_err());
}
