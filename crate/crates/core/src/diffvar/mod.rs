//! Difference varieties over F_q: point counts along the twisted Frobenius
//! family and their asymptotics.

mod count;
mod langweil;
mod limit;
mod system;

pub use count::{count_points, count_sequence, points, CountOptions, CountSequence, PointSet};
pub(crate) use count::{satisfies, twisted_coordinate};
pub use langweil::{lang_weil_fit, LangWeilFit};
pub use limit::{limit_degree_estimate, LimitDegree};
pub use system::{Base, DiffSystem};

#[cfg(test)]
mod tests;
