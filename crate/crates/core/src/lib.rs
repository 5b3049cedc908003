pub mod cli;
pub mod equivariant;
pub mod group;
pub mod invariants;
pub mod linalg;
pub mod local_cohomology;
pub mod oracle;
pub mod polyring;
pub mod scalars;
pub mod weyl;
