//! Line partitions of the internal points of a conic in PG(2,q), q odd.
//!
//! The crate builds the finite field and the plane, classifies points and
//! lines with respect to the conic `X^2 = YZ`, constructs the three known
//! families of line partitions, enumerates every partition (or minimal
//! cover) by exhaustive exact-cover search, and sorts the results into
//! orbits under the stabilizer of the conic in PGL(3,q).

pub mod error;
pub mod gf;
pub mod linalg;
pub mod plane;
pub mod conic;
pub mod families;
pub mod search;
pub mod classify;
pub mod run;

pub use error::{Error, Result};
