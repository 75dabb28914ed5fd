//! Holds the acceptance run under `tests/`; no library code.
