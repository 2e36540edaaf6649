//! The Ringel–Hall algebra of coherent sheaves on the projective line over a
//! prime field `F_q`, its PBW normal form, the positive part `V⁺` of the
//! quantum loop algebra of `sl_2` given by generators and relations, and
//! brute-force counting oracles used to check both.

pub mod coeff;
pub mod combinat;
pub mod error;
pub mod lincomb;
pub mod points;
pub mod hall_torsion;
pub mod symfun;
pub mod pbw;
pub mod hall_global;
pub mod drinfeld;
pub mod oracle;
pub mod json;
pub mod suites;

pub use coeff::{Coeff, GroundConfig};
pub use combinat::Partition;
pub use error::{HallError, Result};
pub use lincomb::LinComb;
pub use points::{ClosedPoint, FqPoly};
pub use symfun::SymPoly;
