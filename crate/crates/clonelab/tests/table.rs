use clonelab::table::format_float;
use clonelab::{Cell, Table};
use proptest::prelude::*;

#[test]
fn float_formatting_edges() {
    assert_eq!(format_float(0.0), "0");
    assert_eq!(format_float(0.5), "0.5");
    assert_eq!(format_float(1.0 / 3.0), "0.333333333333");
    assert_eq!(format_float(1e-7), "1e-7");
    assert_eq!(format_float(-2.5e15), "-2.5e15");
}

#[test]
fn text_cells_are_quoted_when_needed() {
    let mut t = Table::new(&["a", "b"]);
    t.push(vec![Cell::from("x, y"), Cell::from(true)]);
    assert_eq!(t.to_csv(), "a,b\n\"x, y\",true\n");
}

proptest! {
    #[test]
    fn twelve_significant_digits_survive(v in prop::num::f64::NORMAL) {
        let s = format_float(v);
        let back: f64 = s.parse().unwrap();
        prop_assert!((back - v).abs() <= 5e-12 * v.abs(), "{v} printed as {s}");
        let digits = s.split(['e', 'E']).next().unwrap().chars().filter(char::is_ascii_digit).count();
        prop_assert!(digits <= 12 + 5, "{s}");
    }
}
