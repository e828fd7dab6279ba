//! Exact computations with symbols in the groups H^{n+1}_{p^m}(F) over
//! rational function fields F = 𝔽_p(t_1,…,t_k).
//!
//! The crate represents classes as formal sums of symbols `ω ⊗ β_1 ⊗ ⋯ ⊗ β_n`
//! with `ω` a truncated Witt vector, rewrites them with the defining relations
//! of the group, and records every rewrite in a [`symbol::Certificate`] that
//! can be checked independently of the code that produced it.

pub mod field;
pub mod par;
pub mod witt;
pub mod symbol;
pub mod decompose;
pub mod oracle;
pub mod text;
