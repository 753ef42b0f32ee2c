use gabor_zak::fiber_analysis::ti_fiber_bounds;
use gabor_zak::gabor::{frame_bounds, Convention, GaborSystem};
use gabor_zak::group::{all_subgroups, annihilator, FiniteAbelianGroup, Subgroup};
use gabor_zak::oracle::{brute_frame_bounds, naive_fourier, naive_gabor_atoms, naive_translates, naive_zak};
use gabor_zak::rng::random_window;
use gabor_zak::transforms::{fourier, inverse_fourier, inverse_zak, modulate, translate, zak, zak_table};
use proptest::prelude::*;

const GROUPS: &[&[i64]] = &[&[4], &[6], &[8], &[9], &[12], &[2, 4], &[3, 3], &[2, 2, 2], &[2, 6]];

fn setup(gi: usize, pick: usize) -> (FiniteAbelianGroup, Subgroup) {
    let g = FiniteAbelianGroup::new(GROUPS[gi % GROUPS.len()]).unwrap();
    let subs = all_subgroups(&g).unwrap();
    let h = subs[pick % subs.len()].clone();
    (g, h)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fourier_round_trip_and_plancherel(gi in 0usize..32, seed in any::<u64>()) {
        let (g, _) = setup(gi, 0);
        let f = random_window(&g, seed);
        let fh = fourier(&f);
        prop_assert!(inverse_fourier(&fh).max_abs_diff(&f) < 1e-12);
        prop_assert!(close(fh.norm_sqr(), g.order() as f64 * f.norm_sqr(), 1e-12));
        let naive = naive_fourier(&f);
        let dev = fh.values().iter().zip(&naive).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(dev < 1e-10);
    }

    #[test]
    fn zak_round_trip_isometry_and_oracle(gi in 0usize..32, pick in 0usize..64, seed in any::<u64>()) {
        let (g, h) = setup(gi, pick);
        let f = random_window(&g, seed);
        let z = zak(&f, &h).unwrap();
        prop_assert!(inverse_zak(&z).unwrap().max_abs_diff(&f) < 1e-12);
        prop_assert!(close(z.norm_sqr(), f.norm_sqr(), 1e-12));
        let table = zak_table(&f, &h).unwrap();
        let n = g.order();
        for x in 0..n {
            for xi in 0..n {
                prop_assert!((table[x * n + xi] - naive_zak(&f, &h, x, xi)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn time_frequency_shifts_commute_up_to_phase(gi in 0usize..32, seed in any::<u64>(), l in 0usize..64, gm in 0usize..64) {
        let (g, _) = setup(gi, 0);
        let (l, gm) = (l % g.order(), gm % g.order());
        let f = random_window(&g, seed);
        let et = modulate(&translate(&f, l), gm);
        let te = translate(&modulate(&f, gm), l).scaled(g.character(l, gm));
        prop_assert!(et.max_abs_diff(&te) < 1e-12);
    }

    #[test]
    fn gabor_bounds_match_brute_force(gi in 0usize..32, pl in 0usize..64, pg in 0usize..64, seed in any::<u64>()) {
        let (g, lambda) = setup(gi, pl);
        let gamma = {
            let subs = all_subgroups(&g.dual()).unwrap();
            subs[pg % subs.len()].clone()
        };
        let w = random_window(&g, seed);
        let sys = GaborSystem::new(w.clone(), lambda.clone(), gamma.clone(), Convention::Plancherel).unwrap();
        let fast = frame_bounds(&sys).unwrap();
        let brute = brute_frame_bounds(&naive_gabor_atoms(&w, &lambda, &gamma, sys.w_lambda(), sys.w_gamma())).unwrap();
        let scale = brute.upper.max(1.0);
        prop_assert!((fast.lower - brute.lower).abs() <= 1e-9 * scale);
        prop_assert!((fast.upper - brute.upper).abs() <= 1e-9 * scale);
    }

    #[test]
    fn translation_invariant_fibers_match_brute_force(gi in 0usize..32, pick in 0usize..64, seed in any::<u64>(), count in 1usize..4) {
        let (g, h) = setup(gi, pick);
        let gens: Vec<_> = (0..count)
            .map(|i| (random_window(&g, seed.wrapping_add(i as u64)), 1.0 + i as f64))
            .collect();
        let fibers = ti_fiber_bounds(&g, &h, &gens).unwrap();
        let brute = brute_frame_bounds(&naive_translates(&h, &gens)).unwrap();
        let scale = brute.upper.max(1.0);
        prop_assert!((fibers.global.lower - brute.lower).abs() <= 1e-9 * scale);
        prop_assert!((fibers.global.upper - brute.upper).abs() <= 1e-9 * scale);
    }

    #[test]
    fn annihilator_is_an_involution(gi in 0usize..32, pick in 0usize..64) {
        let (g, h) = setup(gi, pick);
        let hp = annihilator(&g, &h).unwrap();
        prop_assert_eq!(h.order() * hp.order(), g.order());
        prop_assert_eq!(annihilator(&g.dual(), &hp).unwrap(), h);
    }
}
