pub mod catalog;
pub mod condense;
pub mod error;
pub mod exactnum;
pub mod exchange;
pub mod fusion;
mod par;
pub mod ribbon;
pub mod tannakian;

pub use error::{Error, Result};
pub use exactnum::CycloNum;
pub use par::is_parallel;
