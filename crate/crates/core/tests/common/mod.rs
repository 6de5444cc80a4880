#![allow(dead_code)]

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use subplanck::specfn::HalfInt;
use subplanck::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn hi(twice: i64) -> HalfInt {
    HalfInt::from_twice(twice)
}

/// Uniform point of the disc of the given radius.
pub fn disc(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), 2.0 * PI * rng.gen::<f64>())
}

pub fn weight(rng: &mut ChaCha8Rng) -> Complex64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}
