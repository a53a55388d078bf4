pub mod qarith;
pub mod patterns;
pub mod action;
pub mod verify;
pub mod identities;
