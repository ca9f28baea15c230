//! Closed-loop assembly and fixed-step integration (placeholder).
