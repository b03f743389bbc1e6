pub mod constants;
pub mod figure;
pub mod moment;
pub mod verify;
