pub mod arith;
pub mod counting;
pub mod oracle;
pub mod qfield;
pub mod quiver;
pub mod series;
pub mod verify;
