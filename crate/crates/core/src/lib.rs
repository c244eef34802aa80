//! Exact arithmetic for twisted Chebotarev experiments on difference schemes
//! over finite fields.

pub mod error;
pub mod diffpoly;
pub mod field;

pub use error::{Error, ErrorKind, Result};
pub mod gauss;
pub mod par;
pub mod quandle;
pub mod diffvar;
pub mod cover;
pub mod density;
pub mod ideals;
