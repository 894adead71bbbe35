//! Small numerical toolbox used by the physics modules.

pub mod interp;
pub mod quad;
pub mod roots;
