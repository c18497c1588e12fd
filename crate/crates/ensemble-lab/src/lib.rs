pub mod alphabet;
pub mod error;
pub mod fileformat;
pub mod coding;
pub mod diagnostics;
pub mod mltest;
pub mod prng;
pub mod prob;
pub mod rational;
pub mod secrecy;
pub mod stream;
