"""CLI command groups mounted by app.main."""
