//! Scenario configuration (placeholder).
