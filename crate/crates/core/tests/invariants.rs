use proptest::prelude::*;
use rf_forster::floquet::{auto_m_max, generalized_bessel, generalized_bessel_orders, sideband_table_auto};
use rf_forster::interaction::pair_shift;
use rf_forster::{FieldDrive, ParameterSet};

fn reference() -> ParameterSet {
    ParameterSet::reference()
}

proptest! {
    #[test]
    fn stark_energy_is_even_and_quadratic(f in -5.0f64..5.0, idx in 0usize..8) {
        let p = reference();
        let states: Vec<_> = p.states().collect();
        let s = states[idx % states.len()];
        let e0 = s.stark_energy(0.0);
        prop_assert_eq!(s.stark_energy(f), s.stark_energy(-f));
        // doubling the field quadruples the shift
        let d1 = s.stark_energy(f) - e0;
        let d2 = s.stark_energy(2.0 * f) - e0;
        prop_assert!((d2 - 4.0 * d1).abs() <= 1e-9 * (1.0 + d2.abs()));
    }

    #[test]
    fn generalized_bessel_parity(m in -20i32..20, x in -15.0f64..15.0, y in -15.0f64..15.0) {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let a = generalized_bessel(m, x, y);
        prop_assert!((generalized_bessel(-m, -x, -y) - a).abs() < 1e-12);
        prop_assert!((generalized_bessel(m, -x, y) - sign * a).abs() < 1e-12);
    }

    #[test]
    fn generalized_bessel_parseval(x in -20.0f64..20.0, y in -20.0f64..20.0) {
        let m_max = auto_m_max(x, y);
        let sum: f64 = generalized_bessel_orders(m_max, x, y).iter().map(|v| v * v).sum();
        prop_assert!((sum - 1.0).abs() < 1e-10, "sum = {}", sum);
    }

    #[test]
    fn sideband_tables_normalized(f_dc in 0.0f64..3.0, f_rf in 0.0f64..1.5, freq in 2.0f64..150.0) {
        let p = reference();
        let drive = FieldDrive::new(f_dc, f_rf, freq).unwrap();
        for s in p.states() {
            let t = sideband_table_auto(s, &drive).unwrap();
            prop_assert!((t.intensity_sum() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn pair_shift_is_bounded_and_even(v in -50.0f64..50.0, delta in -500.0f64..500.0) {
        let s = pair_shift(v, delta, true);
        prop_assert!(s >= 0.0);
        prop_assert!(s <= 2f64.sqrt() * v.abs() * (1.0 + 1e-12));
        prop_assert!(s <= 2.0 * v * v / delta.abs() * (1.0 + 1e-12) || delta == 0.0);
        prop_assert_eq!(s, pair_shift(-v, delta, true));
        prop_assert_eq!(s, pair_shift(v, -delta, true));
        prop_assert_eq!(-s, pair_shift(v, delta, false));
    }

    #[test]
    fn pair_shift_decreases_with_defect(v in 0.01f64..50.0, d in 0.0f64..500.0, extra in 0.01f64..100.0) {
        prop_assert!(pair_shift(v, d + extra, true) <= pair_shift(v, d, true));
    }

    #[test]
    fn defect_is_even_in_field(f in 0.0f64..4.0) {
        let p = reference();
        for c in p.channels() {
            prop_assert_eq!(c.forster_defect(f), c.forster_defect(-f));
        }
    }
}
