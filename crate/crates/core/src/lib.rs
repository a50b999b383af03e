pub mod covers;
pub mod hodge;
pub mod periods;
pub mod qbar;
pub mod tower;
