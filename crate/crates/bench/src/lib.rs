//! Placeholder lib target; the crate exists for its criterion benches.
