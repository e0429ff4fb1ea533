pub mod simplex_ops;
pub mod stratified;
pub mod gray_tensor;
pub mod complicial;
pub mod parity;
pub mod omega_nerve;
