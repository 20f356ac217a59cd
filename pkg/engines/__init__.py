"""Vehicle dynamics, simulation and trajectory optimization engines."""
