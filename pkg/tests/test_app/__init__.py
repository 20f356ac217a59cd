"""Application-layer tests."""
