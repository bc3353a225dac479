#![allow(dead_code)]

use rydberg_core::{ChannelParams, PotentialParams};

fn ch(a1: f64, a2: f64, a3: f64, a4: f64, r_c: f64, r_so: f64, a3_scale: f64) -> ChannelParams {
    ChannelParams {
        a1,
        a2,
        a3,
        a4,
        r_c,
        r_so,
        a3_scale,
    }
}

/// Rubidium model potential, same values as `data/rubidium.toml` of the std crate.
pub fn rubidium() -> PotentialParams {
    let high = |r_so, s| ch(2.39848933, 1.76810544, -12.0710678, 0.77256589, 4.79831327, r_so, s);
    PotentialParams {
        element_symbol: "Rb".into(),
        z: 37,
        alpha_c: 9.076,
        spin_orbit_scale: 2.0,
        channels: vec![
            ch(3.69628474, 1.64915255, -9.86069196, 0.19579987, 1.66242117, 0.0, 1.0),
            ch(4.44088978, 1.92828831, -16.79597770, -0.8163314, 1.50195124, 0.043, 1.0),
            ch(3.78717363, 1.57027864, -11.6558897, 0.52942835, 4.86851938, 0.285, 1.0),
            high(0.650, 0.983431),
            high(0.0, 1.0),
        ],
    }
}
