//! Mesh verification (under construction).
