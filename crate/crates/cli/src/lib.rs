pub mod commands;
pub mod instance;
pub mod report;
pub mod suite;
