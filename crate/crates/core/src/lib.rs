//! Modular data of WZW categories and the simple-current machinery built on
//! top of it.

pub mod affine;
pub mod battery;
pub mod bimodule;
pub mod boundary;
pub mod config;
pub mod error;
pub mod group;
pub mod lie;
pub mod oracle;
pub mod picard;
pub mod residue;
pub mod schellekens;
pub mod twining;

pub use affine::{LevelData, ModularData};
pub use config::Config;
pub use error::{Error, Result};
pub use lie::{RootSystem, Series, SimpleLieType, Weight};
pub use picard::PicardGroup;
pub use residue::{Rational, Residue};
