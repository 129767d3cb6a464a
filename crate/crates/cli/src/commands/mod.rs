pub mod demo;
pub mod evaluate;
pub mod reconstruct;
pub mod split_audit;
pub mod targets;
