use heisenberg_fractional_web::{classify, oscillatory_profile, region_svg, transform_curve};

#[test]
fn classify_matches_core_statuses() {
    assert_eq!(classify("fractional", 1, "1/2", 0, "1/2", "1/2").unwrap(), "ProvedIn");
    assert_eq!(classify("fractional", 1, "1/2", 0, "0", "1").unwrap(), "ProvedOut");
    assert_eq!(classify("radial", 1, "0", 2, "1/2", "1/2").unwrap(), "ProvedIn");
}

#[test]
fn classify_rejects_bad_input() {
    assert!(classify("other", 1, "1/2", 0, "1/2", "1/2").is_err());
    assert!(classify("fractional", 1, "1/2", 0, "3/2", "1/2").is_err());
    assert!(classify("fractional", 1, "abc", 0, "1/2", "1/2").is_err());
}

#[test]
fn region_svg_is_a_document() {
    let s = region_svg("fractional", 2, "1", 0).unwrap();
    assert!(s.starts_with("<svg") || s.starts_with("<?xml"));
    assert!(s.contains("<polygon"));
}

#[test]
fn transform_curve_stays_under_envelope() {
    let data = transform_curve(1, 4, 0.5, 0.0, 8.0, 101).unwrap();
    assert_eq!(data.len(), 303);
    for row in data.chunks(3) {
        assert!(row[1] <= row[2] * (1.0 + 1e-9), "{row:?}");
    }
    assert!(transform_curve(1, 4, 0.5, 0.0, 8.0, 1).is_err());
}

#[test]
fn oscillatory_profile_is_bounded() {
    let data = oscillatory_profile(2, 64.0, -2.0, 2.0, 9).unwrap();
    assert_eq!(data.len(), 18);
    assert!(data.chunks(2).all(|r| r[1].is_finite() && r[1] < 10.0));
}
