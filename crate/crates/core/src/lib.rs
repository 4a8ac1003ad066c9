pub mod error;
pub mod qpe;
pub mod special;
pub mod windows;
pub mod linalg;
pub mod instances;
pub mod walk;
pub mod bounds;
pub mod emulator;
pub mod verify;
pub mod resources;
pub mod cli;
