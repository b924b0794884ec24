use proptest::prelude::*;

use sds_core::compress::compress;
use sds_core::enumerate::{orbit_canonical, ClassStream};
use sds_core::search::{normal_form, PsdTest};
use sds_core::seqcore::{
    associated_sequence, dft_integer, paf, paf_to_psd_constants, psd, psd_to_paf_constants, units, verify_sds,
};
use sds_core::{Content, EquivMode, SdsParams, Sequence, Subset};

fn int_sequence(max_len: usize) -> impl Strategy<Value = Sequence> {
    prop::collection::vec(-6i32..=6, 1..=max_len).prop_map(|v| Sequence::new(v).unwrap())
}

proptest! {
    #[test]
    fn wiener_khinchin(a in int_sequence(40)) {
        let spectrum = psd(&a);
        let from_paf = dft_integer(paf(&a).values());
        for (s, z) in from_paf.iter().enumerate() {
            let tol = 1e-9 * spectrum[s].abs().max(1.0);
            prop_assert!((z.re - spectrum[s]).abs() <= tol);
            prop_assert!(z.im.abs() <= tol);
        }
    }

    #[test]
    fn paf_symmetry_and_bound(a in int_sequence(40)) {
        let p = paf(&a);
        let v = a.len();
        let energy: i64 = a.values().iter().map(|&x| (x as i64).pow(2)).sum();
        prop_assert_eq!(p[0], energy);
        for s in 1..v {
            prop_assert_eq!(p[s], p[v - s]);
            prop_assert!(p[s].abs() <= energy);
        }
        // total PAF is the square of the row sum
        prop_assert_eq!(p.values().iter().sum::<i64>(), a.sum().pow(2));
    }

    #[test]
    fn paf_is_invariant_under_shift_and_reversal(a in int_sequence(30), t in 0i64..30) {
        prop_assert_eq!(paf(&a.shifted(t)), paf(&a));
        prop_assert_eq!(paf(&a.reversed()), paf(&a));
    }

    #[test]
    fn compression_preserves_sum((a, m) in (1usize..=8, 1usize..=6).prop_flat_map(|(d, m)| {
        (prop::collection::vec(prop::bool::ANY, d * m), Just(m))
    })) {
        let a = Sequence::new(a.into_iter().map(|b| if b { 1 } else { -1 }).collect()).unwrap();
        let c = compress(&a, a.len() / m).unwrap();
        prop_assert_eq!(c.sum(), a.sum());
        prop_assert!(c.is_compressed(m));
    }

    #[test]
    fn double_compression((a, d1, d2) in (1usize..=5, 1usize..=3, 1usize..=3).prop_flat_map(|(d2, f1, f2)| {
        (prop::collection::vec(-6i32..=6, d2 * f1 * f2), Just(d2 * f1), Just(d2))
    })) {
        let a = Sequence::new(a).unwrap();
        let twice = compress(&compress(&a, d1).unwrap(), d2).unwrap();
        prop_assert_eq!(twice, compress(&a, d2).unwrap());
    }

    #[test]
    fn compressed_paf_is_folded_paf((a, d) in (1usize..=8, 1usize..=5).prop_flat_map(|(d, m)| {
        (prop::collection::vec(-6i32..=6, d * m), Just(d))
    })) {
        // PAF of the compression sums PAF of the original over shifts congruent mod d
        let a = Sequence::new(a).unwrap();
        let v = a.len();
        let c = paf(&compress(&a, d).unwrap());
        let p = paf(&a);
        for s in 0..d {
            let folded: i64 = (s..v).step_by(d).map(|j| p[j]).sum();
            prop_assert_eq!(c[s], folded);
        }
    }

    #[test]
    fn constants_round_trip(alpha0 in -1000i64..1000, alpha in -1000i64..1000, v in 1usize..100) {
        let (beta0, beta) = paf_to_psd_constants(alpha0, alpha, v);
        prop_assert_eq!(psd_to_paf_constants(beta0, beta, v).unwrap(), (alpha0, alpha));
    }

    #[test]
    fn subset_sequence_round_trip(v in 2usize..40, bits in prop::collection::vec(prop::bool::ANY, 40)) {
        let x = Subset::new(v, (0..v).filter(|&i| bits[i])).unwrap();
        let a = associated_sequence(&x);
        prop_assert_eq!(Subset::negative_positions(&a), x.clone());
        prop_assert_eq!(a.sum(), v as i64 - 2 * x.len() as i64);
    }

    #[test]
    fn canonical_form_is_an_orbit_invariant(a in int_sequence(16), t in 0i64..16, s_idx in 0usize..16) {
        let d = a.len();
        let us = units(d);
        let s = us[s_idx % us.len()] as i64;
        let image = a.multiplied(s).shifted(t);
        prop_assert_eq!(orbit_canonical(&image, EquivMode::Charmed), orbit_canonical(&a, EquivMode::Charmed));
        prop_assert_eq!(
            orbit_canonical(&a.reversed().shifted(t), EquivMode::Bracelet),
            orbit_canonical(&a, EquivMode::Bracelet)
        );
    }

    #[test]
    fn streams_emit_canonical_words(counts in prop::collection::vec(0usize..4, 3)) {
        let content = Content::new([(-2, counts[0]), (0, counts[1]), (2, counts[2])]);
        prop_assume!(!content.is_empty());
        for mode in [EquivMode::Necklace, EquivMode::Bracelet, EquivMode::Charmed] {
            for seq in ClassStream::new(&content, mode) {
                prop_assert_eq!(orbit_canonical(&seq, mode), seq.clone());
                prop_assert_eq!(Content::of(&seq), content.clone());
            }
        }
    }

    #[test]
    fn content_text_round_trip(counts in prop::collection::vec(0usize..9, 4)) {
        let content = Content::new([(-3, counts[0]), (-1, counts[1]), (1, counts[2]), (3, counts[3])]);
        let text = content.to_string();
        prop_assert_eq!(text.parse::<Content>().unwrap(), content);
    }

    #[test]
    fn psd_test_matches_full_spectrum(a in int_sequence(30), beta in 0i64..120) {
        let want = psd(&a).values()[1..].iter().all(|&x| x <= beta as f64 + 1e-6);
        prop_assert_eq!(PsdTest::new(a.len(), beta, 1e-6).passes(a.values()), want);
    }

    #[test]
    fn sds_images_stay_sds(t0 in 0i64..50, t1 in 0i64..50, s_idx in 0usize..20, flip in prop::bool::ANY) {
        let params = SdsParams::new(50, vec![22, 21], 18).unwrap();
        let blocks = vec![
            Subset::new(50, [0, 1, 2, 3, 6, 7, 9, 13, 14, 16, 18, 20, 22, 23, 26, 27, 30, 35, 37, 41, 45, 46]).unwrap(),
            Subset::new(50, [0, 1, 2, 3, 4, 5, 6, 8, 11, 12, 14, 17, 20, 22, 29, 30, 32, 37, 38, 39, 42]).unwrap(),
        ];
        let s = units(50)[s_idx] as i64;
        let sign = if flip { -1 } else { 1 };
        let image = vec![blocks[0].multiplied(s).translated(t0), blocks[1].multiplied(sign * s).translated(t1)];
        prop_assert!(verify_sds(&params, &image).unwrap());
        prop_assert_eq!(normal_form(&image), normal_form(&blocks));
    }
}
