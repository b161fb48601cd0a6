//! Property-based invariants across modules.

use num_complex::Complex64;
use proptest::prelude::*;
use spindeco::coupling::{derive, z_of_l, CouplingSpec};
use spindeco::evolution::{evolve, purity};
use spindeco::kernel::m_kernel;
use spindeco::matrix;
use spindeco::states::random_state;
use spindeco::wigner::WignerTransform;

fn random_hermitian(dim: usize, entries: &[(f64, f64)]) -> matrix::CMat {
    let raw = faer::Mat::from_fn(dim, dim, |i, k| {
        let (re, im) = entries[i * dim + k];
        faer::complex_native::c64::new(re, im)
    });
    faer::Mat::from_fn(dim, dim, |i, k| {
        (raw[(i, k)] + raw[(k, i)].conj()) * faer::complex_native::c64::new(0.5, 0.0)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // Parseval and round trip for the operator transform, several spins.
    #[test]
    fn transform_is_unitary(
        twice_j in prop::sample::select(vec![1i64, 2, 5, 20]),
        seed in any::<u64>(),
    ) {
        let dim = (twice_j + 1) as usize;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let entries: Vec<(f64, f64)> =
            (0..dim * dim).map(|_| (rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
        let a = random_hermitian(dim, &entries);
        let t = WignerTransform::for_spin(twice_j);
        let w = t.to_harmonics(&a).unwrap();
        // Parseval: relative error < 1e-9
        let tr = matrix::trace(&(&a * matrix::adjoint(&a))).re;
        prop_assert!((w.norm_sq() - tr).abs() <= 1e-9 * tr.abs().max(1e-9));
        // Hermitian-source coefficient symmetry
        prop_assert!(w.hermiticity_residual() < 1e-12);
        // reconstruction
        let back = t.from_harmonics(&w);
        prop_assert!(matrix::max_abs_diff(&back, &a) < 1e-10);
    }

    // Channel ratios stay inside the open unit interval whenever any l > 0
    // channel couples, for randomized specs.
    #[test]
    fn channel_ratios_bounded(
        two_j in prop::sample::select(vec![2i64, 8, 30, 60, 120]),
        l_hot in 1i64..6,
        w0 in 0.0f64..4.0,
        w1 in 0.05f64..4.0,
        w2 in 0.0f64..4.0,
    ) {
        let l_hot = l_hot.min(two_j);
        let mut chans = vec![(l_hot, w1)];
        if w0 > 0.0 {
            chans.push((0, w0));
        }
        if w2 > 0.0 && l_hot > 1 {
            chans.push((l_hot - 1, w2));
        }
        let spec = CouplingSpec::new(two_j, chans).unwrap();
        let z = z_of_l(&spec).unwrap();
        prop_assert_eq!(z[0], 1.0);
        for l in 1..=two_j {
            prop_assert!(z[l as usize].abs() < 1.0, "Z({}) = {}", l, z[l as usize]);
        }
    }

    // The kernel stays within [-1, 1] + tiny for nonnegative z, and equals 1
    // at t = 0 for any z.
    #[test]
    fn kernel_bounds(z in 0.0f64..=1.0, t in 0.0f64..40.0) {
        prop_assert_eq!(m_kernel(0.0, z), 1.0);
        prop_assert!(m_kernel(t, z).abs() <= 1.0 + 1e-9);
    }

    // Channel evolution preserves trace and Hermitian symmetry and never
    // increases purity above 1.
    #[test]
    fn evolution_is_trace_preserving(
        seed in any::<u64>(),
        t in 0.0f64..30.0,
        l_hot in 1i64..4,
    ) {
        let two_j = 8i64;
        let spec = CouplingSpec::single_channel(two_j, l_hot, 1.0).unwrap();
        let d = derive(&spec).unwrap();
        let tr = WignerTransform::for_spin(two_j);
        let s = random_state(two_j, seed);
        let w0 = tr.to_harmonics(&s.density_matrix().mat).unwrap();
        let wt = evolve(&w0, &d, t);
        prop_assert_eq!(wt.get(0, 0), w0.get(0, 0));
        prop_assert!(wt.hermiticity_residual() < 1e-12);
        prop_assert!(purity(&wt) <= 1.0 + 1e-10);
        prop_assert!(purity(&wt) >= 1.0 / (two_j as f64 + 1.0) - 1e-10);
    }

    // Pure-state constructions are normalized with unit purity.
    #[test]
    fn states_are_normalized(
        twice_j in prop::sample::select(vec![1i64, 7, 21]),
        theta in 0.0f64..std::f64::consts::PI,
        phi in -3.0f64..3.0,
    ) {
        let s = spindeco::states::coherent(twice_j, theta, phi);
        prop_assert!((s.norm() - 1.0).abs() < 1e-12);
        let cat = spindeco::states::cat2(
            twice_j,
            (theta, phi),
            (std::f64::consts::PI - theta, phi + 1.0),
            Complex64::new(0.8, 0.1),
            Complex64::new(0.6, -0.3),
        );
        prop_assert!((cat.norm() - 1.0).abs() < 1e-12);
        prop_assert!((cat.density_matrix().purity() - 1.0).abs() < 1e-10);
    }
}

// Exact 6-j contraction oracle: recoupling overlap built purely from
// Clebsch-Gordan products, compared in exact arithmetic, exhaustively for
// all arguments <= 3.
#[test]
fn sixj_matches_clebsch_gordan_contraction_exactly() {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Signed, Zero};
    use spindeco::halfint::{triangle, HalfInt};
    use spindeco::su2::{clebsch_gordan, wigner6j};

    let h = HalfInt::from_twice;

    // Exact accumulator for sums of c * sqrt(r): groups terms whose radicand
    // ratio is a perfect rational square (no factorization needed).
    #[derive(Default)]
    struct SqrtSum {
        // (representative radicand, rational coefficient)
        groups: Vec<(BigRational, BigRational)>,
    }

    fn perfect_sqrt(x: &BigInt) -> Option<BigInt> {
        if x.is_negative() {
            return None;
        }
        let r = x.sqrt();
        (&r * &r == *x).then_some(r)
    }

    impl SqrtSum {
        // add sign * sqrt(|signed_sq|) with sign of signed_sq
        fn add_signed_sqrt(&mut self, signed_sq: &BigRational) {
            if signed_sq.is_zero() {
                return;
            }
            let radicand = signed_sq.abs();
            let positive = signed_sq.is_positive();
            for (rep, coeff) in self.groups.iter_mut() {
                // same group iff radicand / rep is a perfect square of a rational
                let ratio = &radicand / &*rep;
                if let (Some(sn), Some(sd)) =
                    (perfect_sqrt(ratio.numer()), perfect_sqrt(ratio.denom()))
                {
                    let scale = BigRational::new(sn, sd);
                    *coeff += if positive { scale } else { -scale };
                    return;
                }
            }
            let coeff = if positive {
                BigRational::one()
            } else {
                -BigRational::one()
            };
            self.groups.push((radicand, coeff));
        }

        fn single_signed_square(mut self) -> Option<BigRational> {
            self.groups.retain(|(_, c)| !c.is_zero());
            match self.groups.len() {
                0 => Some(BigRational::zero()),
                1 => {
                    let (rep, c) = &self.groups[0];
                    let sq = c * c * rep;
                    Some(if c.is_negative() { -sq } else { sq })
                }
                _ => None,
            }
        }
    }

    // overlap <(j1 j2) j12, j3; J | j1, (j2 j3) j23; J> at M = J equals
    // sqrt((2 j12 + 1)(2 j23 + 1)) (-1)^{j1+j2+j3+J} {j1 j2 j12; j3 J j23}
    let values: Vec<i64> = (0..=6).collect();
    let mut checked = 0usize;
    for &tj1 in &values {
        for &tj2 in &values {
            for &tj12 in &values {
                if !triangle(h(tj1), h(tj2), h(tj12)) {
                    continue;
                }
                for &tj3 in &values {
                    for &tj in &values {
                        if !triangle(h(tj12), h(tj3), h(tj)) {
                            continue;
                        }
                        for &tj23 in &values {
                            if !triangle(h(tj2), h(tj3), h(tj23))
                                || !triangle(h(tj1), h(tj23), h(tj))
                            {
                                continue;
                            }
                            let tm = tj; // M = J
                            let mut sum = SqrtSum::default();
                            for tm1 in (-tj1..=tj1).step_by(2) {
                                for tm2 in (-tj2..=tj2).step_by(2) {
                                    let tm12 = tm1 + tm2;
                                    if tm12.abs() > tj12 {
                                        continue;
                                    }
                                    let tm3 = tm - tm12;
                                    if tm3.abs() > tj3 {
                                        continue;
                                    }
                                    let c1 = clebsch_gordan(
                                        h(tj1), h(tm1), h(tj2), h(tm2), h(tj12), h(tm12),
                                    );
                                    if c1.is_zero() {
                                        continue;
                                    }
                                    let c2 = clebsch_gordan(
                                        h(tj12), h(tm12), h(tj3), h(tm3), h(tj), h(tm),
                                    );
                                    if c2.is_zero() {
                                        continue;
                                    }
                                    let c3 = clebsch_gordan(
                                        h(tj2), h(tm2), h(tj3), h(tm3), h(tj23), h(tm2 + tm3),
                                    );
                                    if c3.is_zero() {
                                        continue;
                                    }
                                    let c4 = clebsch_gordan(
                                        h(tj1), h(tm1), h(tj23), h(tm2 + tm3), h(tj), h(tm),
                                    );
                                    if c4.is_zero() {
                                        continue;
                                    }
                                    let prod = c1 * c2 * c3 * c4;
                                    sum.add_signed_sqrt(prod.signed_square());
                                }
                            }
                            let overlap_sq = sum
                                .single_signed_square()
                                .expect("contraction collapses to a single radical");
                            // divide by (2j12+1)(2j23+1) and apply the phase
                            let weight = BigRational::new(
                                BigInt::one(),
                                BigInt::from((tj12 + 1) * (tj23 + 1)),
                            );
                            let mut expected_sq = overlap_sq * weight;
                            let phase_exp = (tj1 + tj2 + tj3 + tj) / 2;
                            if phase_exp % 2 != 0 {
                                expected_sq = -expected_sq;
                            }
                            let six = wigner6j(
                                h(tj1), h(tj2), h(tj12), h(tj3), h(tj), h(tj23),
                            );
                            assert_eq!(
                                six.signed_square(),
                                &expected_sq,
                                "2(j1 j2 j12; j3 J j23) = ({tj1} {tj2} {tj12}; {tj3} {tj} {tj23})"
                            );
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    println!("checked {checked} six-j contractions exactly");
    assert!(checked > 1000);
}
