//! Mass-point configurations in the complex plane, their Marden curves, and
//! the Poncelet-Darboux curves cut out by polynomial pencils: isofocal and
//! bifocal deformations, the continued-fraction trivialization in tridiagonal
//! coordinates, a complete-decomposability criterion with elliptic-period
//! certificates, Jacobi elliptic transformations, and the explicit
//! decomposable families for n = 3, 5, 7.

pub mod error;
pub mod linalg;
pub mod poly;
pub mod roots;
pub mod symfunc;
pub mod resultant;
pub mod gcd;
pub mod conic;
pub mod marden;
pub mod trivar;
pub mod pdcurve;
pub mod decompose;
pub mod flaschka;
pub mod dynamics;
pub mod elliptic;
pub mod arith;
pub mod periods;
pub mod decompcheck;
pub mod families;

pub use error::{Error, Result};
pub use poly::{C64, Poly};
pub use roots::RootSet;
