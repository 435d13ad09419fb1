use geb_core::costmodel::{
    classical_time, engine_size, equal_investment_n, quantum_time, speedup, CostReport,
};
use geb_core::{
    count_matches, decode_database, encode_database, equality_criterion, generate_database,
    plant_matches,
};
use proptest::prelude::*;

proptest! {
    #[test]
    fn time_ratio_is_sqrt_n(n in 1u64..1_000_000, t in 1u64..1000) {
        let r = classical_time(n, t) / quantum_time(n, t);
        prop_assert!((r - (n as f64).sqrt()).abs() <= 1e-12 * r.max(1.0));
    }

    #[test]
    fn speedup_is_sqrt_of_equal_investment(p in 1u64..1 << 40, total in 1u64..1 << 30) {
        let n = equal_investment_n(p, total).unwrap();
        prop_assert!((speedup(p, total) - (n as f64).sqrt()).abs() <= 1e-12);
        let size = engine_size(total, n, p);
        prop_assert!(size <= (2 * total + p) as f64 * (1.0 + 1e-12));
        if p <= total {
            prop_assert!((size - 2.0 * total as f64).abs() <= 1e-9 * total as f64);
        }
    }

    #[test]
    fn speedup_monotone_in_p(p in 1u64..1 << 20, total in 1u64..1 << 20) {
        prop_assert!(speedup(p + 1, total) >= speedup(p, total));
        if p >= total {
            prop_assert_eq!(speedup(p, total), (total as f64).sqrt());
        }
    }

    #[test]
    fn report_identities(total in 1u64..1 << 20, n in 1u64..1 << 20, p in 1u64..5000, t in 1u64..50) {
        let n = n.min(total);
        let r = CostReport::new(total, n, p, t).unwrap();
        prop_assert_eq!(r.classical_size, r.quantum_size);
        prop_assert!((r.speedup - (n as f64).sqrt()).abs() <= 1e-9 * r.speedup);
    }

    #[test]
    fn generation_codec_roundtrip(count in 1u64..200, width in 1usize..100, seed in any::<u64>()) {
        let db = generate_database(count, width, seed).unwrap();
        prop_assert_eq!(&generate_database(count, width, seed).unwrap(), &db);
        prop_assert_eq!(decode_database(&encode_database(&db)).unwrap(), db);
    }

    #[test]
    fn planting_hits_target(count in 1u64..300, target in 0usize..300, seed in any::<u64>()) {
        let target = target.min(count as usize);
        let pattern: Vec<bool> = (0..6).map(|i| (seed >> i) & 1 == 1).collect();
        let c = equality_criterion(&pattern).unwrap();
        let db = generate_database(count, 6, seed).unwrap();
        let planted = plant_matches(&db, &c, target, seed ^ 0x55).unwrap();
        prop_assert_eq!(count_matches(&planted, &c).unwrap(), target);
    }
}
