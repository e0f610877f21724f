//! Bundled triangulations.

use crate::triangulation::{parse_triangulation, Triangulation};

pub const FIGURE8: &str = include_str!("../fixtures/figure8.tri");
pub const SISTER: &str = include_str!("../fixtures/sister.tri");
pub const WHITEHEAD: &str = include_str!("../fixtures/whitehead.tri");
pub const DOUBLED_SIMPLEX: &str = include_str!("../fixtures/doubled_simplex.tri");
pub const M004: &str = include_str!("../fixtures/m004.tri");

/// (name, text) of every bundled fixture.
pub const ALL: [(&str, &str); 5] = [
    ("figure8", FIGURE8),
    ("sister", SISTER),
    ("whitehead", WHITEHEAD),
    ("doubled_simplex", DOUBLED_SIMPLEX),
    ("m004", M004),
];

pub fn text(name: &str) -> Option<&'static str> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn load(name: &str) -> Option<Triangulation> {
    text(name).map(|t| parse_triangulation(t).expect("bundled fixture parses"))
}

pub fn figure8() -> Triangulation {
    load("figure8").unwrap()
}

pub fn sister() -> Triangulation {
    load("sister").unwrap()
}

pub fn whitehead() -> Triangulation {
    load("whitehead").unwrap()
}

pub fn doubled_simplex() -> Triangulation {
    load("doubled_simplex").unwrap()
}

pub fn m004() -> Triangulation {
    load("m004").unwrap()
}

pub fn all() -> Vec<Triangulation> {
    ALL.iter().map(|(n, _)| load(n).unwrap()).collect()
}
