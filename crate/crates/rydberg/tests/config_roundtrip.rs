use proptest::prelude::*;
use rydberg::config::{builtin_params, parse_params, write_params};
use rydberg_core::{ChannelParams, PotentialParams};

fn channel() -> impl Strategy<Value = ChannelParams> {
    (
        0.01f64..10.0,
        -5.0f64..5.0,
        -20.0f64..20.0,
        -2.0f64..2.0,
        0.1f64..5.0,
        0.5f64..1.5,
    )
        .prop_map(|(a1, a2, a3, a4, r_c, a3_scale)| ChannelParams {
            a1,
            a2,
            a3,
            a4,
            r_c,
            r_so: 0.0,
            a3_scale,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn write_then_parse_is_exact(
        z in 1u32..90,
        alpha_c in 0.0f64..50.0,
        scale in 0.0f64..3.0,
        channels in prop::collection::vec(channel(), 4..7),
        r_so in prop::collection::vec(0.0f64..0.5, 3),
    ) {
        let mut channels = channels;
        for (k, r) in r_so.iter().enumerate() {
            channels[k + 1].r_so = *r;
        }
        let p = PotentialParams {
            element_symbol: "Xx".into(),
            z,
            alpha_c,
            spin_orbit_scale: scale,
            channels,
        };
        let back = parse_params(&write_params(&p, Some("generated")), "roundtrip").unwrap();
        prop_assert_eq!(back, p);
    }
}

#[test]
fn builtin_sets_round_trip() {
    for sym in ["Rb", "H", "Cs"] {
        let p = builtin_params(sym).unwrap();
        assert_eq!(parse_params(&write_params(&p, None), sym).unwrap(), p);
    }
}
